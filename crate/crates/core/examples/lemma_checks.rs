//! Randomized checks of the rank lemmas behind the converse bounds.
//!
//! cargo run --release --example lemma_checks

use bcdof::lemmas::{
    canonicalization_check, lemma1_ratio_check, lemma2_check, theorem2_converse_check, BlockShape,
    PrecoderFamily,
};
use bcdof::linalg::RngSeed;
use bcdof::rational::format;
use bcdof::scenario::AntennaConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = RngSeed(2024);
    for (m, n1, n2) in [(4, 3, 2), (3, 3, 2), (2, 2, 3)] {
        let cfg = AntennaConfig::new(m, n1, n2)?;
        let r = lemma1_ratio_check(cfg, 4, 200, seed, &PrecoderFamily::ALL);
        println!(
            "rank ratio {cfg}: max {} against bound {}, {} violations",
            format(&r.max_ratio()),
            format(&r.bound),
            r.violations()
        );
    }

    let cfg = AntennaConfig::new(4, 3, 2)?;
    let c = canonicalization_check(cfg, 3, 100, seed);
    println!(
        "canonicalization {cfg}: {} inputs, {} violations, largest receiver-2 rank drop {}",
        c.trials,
        c.violations(),
        c.max_rank_drop
    );

    for shape in BlockShape::lemma2_presets()
        .into_iter()
        .chain(BlockShape::remark3_presets())
    {
        let r = lemma2_check(&shape, 300, seed)?;
        println!(
            "block rank {}: {} violations in {} trials",
            shape.name, r.violations, r.trials
        );
    }

    let r = theorem2_converse_check(cfg, 3, 200, seed)?;
    println!(
        "converse {cfg}: {} accepted, {} violations, weighted sum at most {}",
        r.accepted,
        r.violations(),
        format(&r.max_weighted)
    );
    Ok(())
}
