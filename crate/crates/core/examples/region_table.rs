//! Prints the DoF region of every CSIT model for one antenna configuration,
//! with the scheme family that reaches each corner.
//!
//! cargo run --example region_table -- 3 2 1 cm

use bcdof::catalog::{corner_catalog, region_for};
use bcdof::scenario::{AntennaConfig, CsitModel, MessageSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (m, n1, n2, ms) = match args.as_slice() {
        [m, n1, n2, ms] => (
            m.parse()?,
            n1.parse()?,
            n2.parse()?,
            ms.parse::<MessageSet>()?,
        ),
        [] => (3, 2, 1, MessageSet::Common),
        _ => return Err("usage: region_table M N1 N2 pm|dm|cm".into()),
    };
    let cfg = AntennaConfig::new(m, n1, n2)?;
    for csit in CsitModel::all() {
        let (region, label) = region_for(cfg, ms, csit);
        let star = if label.conjectured_dof() { "*" } else { "" };
        println!(
            "{cfg} {csit}{star} {} ({}, {})",
            ms,
            csit.csit_type(),
            label.status
        );
        for h in region.halfspaces.iter().filter(|h| !h.is_trivial()) {
            println!("    {h}");
        }
        for c in corner_catalog(cfg, ms, csit) {
            println!(
                "    {:<4} {:<18} {}",
                c.label,
                c.point.to_string(),
                c.kind.name()
            );
        }
    }
    Ok(())
}
