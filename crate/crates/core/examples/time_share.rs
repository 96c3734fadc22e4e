//! Decomposes a point into a time-sharing plan over corners, or names the
//! bound it violates.
//!
//! cargo run --example time_share -- 1 0 1/4 3 2 1 DD cm

use bcdof::catalog::region_for;
use bcdof::rational::{self, parse};
use bcdof::scenario::{AntennaConfig, CsitModel, DofPoint, MessageSet};
use bcdof::schemes::{achieve_point, SchemeError};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let words: Vec<&str> = if args.is_empty() {
        vec!["3/2", "1", "0", "4", "3", "2", "PN", "pm"]
    } else {
        args.iter().map(String::as_str).collect()
    };
    let [d1, d2, d0, m, n1, n2, csit, ms] = words[..] else {
        return Err("usage: time_share d1 d2 d0 M N1 N2 CSIT MS".into());
    };
    let d = DofPoint::new(parse(d1)?, parse(d2)?, parse(d0)?);
    let cfg = AntennaConfig::new(m.parse()?, n1.parse()?, n2.parse()?)?;
    let csit: CsitModel = csit.parse()?;
    let ms: MessageSet = ms.parse()?;
    let (region, label) = region_for(cfg, ms, csit);
    println!("{cfg} {csit} {ms} [{}]", label.status);
    match achieve_point(cfg, ms, csit, &d) {
        Ok(plan) => {
            println!("{d} is inside; plan:");
            for c in &plan.components {
                println!(
                    "  {:>5} x {} {} via {}",
                    rational::format(&c.weight),
                    c.corner.label,
                    c.corner.point,
                    c.corner.kind.name()
                );
            }
            println!("  {:>5} idle", rational::format(&plan.idle));
            assert_eq!(plan.reconstruct(), d);
        }
        Err(SchemeError::Infeasible(b)) => {
            println!("{d} is outside: violates {b}");
            assert!(!region.contains(&d));
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}
