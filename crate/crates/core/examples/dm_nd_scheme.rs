//! Two-phase degraded-message scheme for ND CSIT: receiver 2's channel is
//! known one slot late, and the overheard equations of phase 1 are resent as
//! common symbols in phase 2.
//!
//! cargo run --release --example dm_nd_scheme -- 5 4 2

use bcdof::catalog::{corner_catalog, find_corner};
use bcdof::linalg::{lift_channels, RngSeed};
use bcdof::scenario::{AntennaConfig, CsitModel, MessageSet};
use bcdof::schemes::{check_decodability, CornerScheme, DmNdPlan};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let cfg = match args[..] {
        [m, n1, n2] => AntennaConfig::new(m, n1, n2)?,
        [] => AntennaConfig::new(5, 4, 2)?,
        _ => return Err("usage: dm_nd_scheme M N1 N2".into()),
    };
    let plan = DmNdPlan::new(cfg)?;
    let [m1, _, m0] = plan.symbols();
    println!(
        "{cfg}: {:?}, T = {}, m1 = {m1}, m0 = {m0}, target {}",
        plan.case,
        plan.t,
        plan.target()
    );

    // one channel draw, with the rank ledger at each receiver
    let (h1, h2) = lift_channels(cfg, plan.t, RngSeed(7).derive(&[0]));
    let p = plan.build(&h2, &mut RngSeed(7).derive(&[1]).rng());
    let d = check_decodability(&h1, &h2, &p)?;
    println!("receiver 1: {}", d.ledger[0]);
    println!("receiver 2: {}", d.ledger[1]);

    let nd: CsitModel = "ND".parse()?;
    let corners = corner_catalog(cfg, MessageSet::Degraded, nd);
    let corner = find_corner(&corners, "P")
        .cloned()
        .ok_or("no off-axis corner")?;
    let report =
        CornerScheme::new(cfg, MessageSet::Degraded, nd, corner)?.simulate(100, RngSeed(1))?;
    println!("{}/{} trials decodable", report.passes, report.trials);
    Ok(())
}
