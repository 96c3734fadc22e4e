//! Outer bound on the common-message region obtained by letting one receiver
//! ignore the common message, compared with the catalog region.
//!
//! cargo run --release --example devolution

use bcdof::catalog::{bc_cm_region, devolve_outer};
use bcdof::scenario::{AntennaConfig, CsitModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cases = 0;
    let mut equal = 0;
    for m in 1..=6 {
        for n1 in 1..=6 {
            for n2 in 1..=n1 {
                let cfg = AntennaConfig::new(m, n1, n2)?;
                for csit in CsitModel::all() {
                    cases += 1;
                    let outer = devolve_outer(cfg, csit);
                    let (cm, _) = bc_cm_region(cfg, csit);
                    if outer.equals(&cm)? {
                        equal += 1;
                    } else {
                        println!("differs: {cfg} {csit}");
                    }
                }
            }
        }
    }
    println!("{equal} of {cases} regions equal their devolution bound");

    let cfg = AntennaConfig::new(3, 2, 1)?;
    let dd: CsitModel = "DD".parse()?;
    println!("{cfg} DD bound:");
    for h in devolve_outer(cfg, dd)
        .halfspaces
        .iter()
        .filter(|h| !h.is_trivial())
    {
        println!("    {h}");
    }
    Ok(())
}
