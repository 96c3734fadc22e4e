//! Every integer point of the perfect-CSIT common-message region, reached in
//! one slot by zero-forcing plus random beamforming.
//!
//! cargo run --release --example pp_zero_forcing -- 5 3 2

use bcdof::catalog::bc_cm_region;
use bcdof::linalg::RngSeed;
use bcdof::scenario::{AntennaConfig, CsitModel, DofPoint};
use bcdof::schemes::{scheme_pp, simulate};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let cfg = match args[..] {
        [m, n1, n2] => AntennaConfig::new(m, n1, n2)?,
        [] => AntennaConfig::new(5, 3, 2)?,
        _ => return Err("usage: pp_zero_forcing M N1 N2".into()),
    };
    let pp: CsitModel = "PP".parse()?;
    let (region, _) = bc_cm_region(cfg, pp);
    let top = cfg.m as i64;
    for d1 in 0..=top {
        for d2 in 0..=top {
            for d0 in 0..=top {
                let d = DofPoint::from_ints(d1, d2, d0);
                if !region.contains(&d) {
                    continue;
                }
                let r = simulate(
                    cfg,
                    1,
                    20,
                    RngSeed(d1 as u64 * 100 + d2 as u64 * 10 + d0 as u64),
                    |h1, h2, rng| scheme_pp(cfg, &d, h1.slot(0), h2.slot(0), rng),
                )?;
                println!("{d}: {}/{}", r.passes, r.trials);
            }
        }
    }
    Ok(())
}
