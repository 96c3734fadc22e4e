use std::collections::BTreeMap;

use num_traits::Zero;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{
    check_decodability, random_columns, scheme_dp_np_corner, scheme_np_pm, scheme_pp, DmNdPlan,
    Precoder, RankLedger, SchemeError, TimeSharePlan,
};
use crate::catalog::{Corner, SchemeKind};
use crate::linalg::{lift_channels, LiftedChannel, RngSeed};
use crate::rational::{to_usize, Rational};
use crate::scenario::{AntennaConfig, Coord, CsitModel, DofPoint, MessageSet};

/// Outcome of repeated decodability checks over independent channel draws.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationReport {
    pub trials: usize,
    pub passes: usize,
    pub t: usize,
    /// `(m1, m2, m0)`
    pub symbols: [usize; 3],
    /// `symbols / T`, present when at least one trial passed.
    pub achieved: Option<DofPoint>,
    /// Distinct receiver-1/receiver-2 ledgers with their trial counts.
    pub ledgers: Vec<([RankLedger; 2], usize)>,
    pub first_failure: Option<usize>,
}

impl SimulationReport {
    pub fn all_passed(&self) -> bool {
        self.passes == self.trials
    }
}

/// Runs `build` on `trials` independent channel draws and checks every
/// precoder. Trial `i` uses seed `seed.derive([i])`, so the report does not
/// depend on thread scheduling.
pub fn simulate<F>(
    cfg: AntennaConfig,
    t: usize,
    trials: usize,
    seed: RngSeed,
    build: F,
) -> Result<SimulationReport, SchemeError>
where
    F: Fn(&LiftedChannel, &LiftedChannel, &mut ChaCha8Rng) -> Result<Precoder, SchemeError> + Sync,
{
    let outcomes: Vec<Result<([RankLedger; 2], bool, [usize; 3]), SchemeError>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let s = seed.derive(&[i as u64]);
            let (h1, h2) = lift_channels(cfg, t, s.derive(&[0]));
            let mut rng = s.derive(&[1]).rng();
            let p = build(&h1, &h2, &mut rng)?;
            let d = check_decodability(&h1, &h2, &p)?;
            Ok((d.ledger, d.verdict, p.symbols()))
        })
        .collect();
    let mut passes = 0;
    let mut counts: BTreeMap<[RankLedger; 2], usize> = BTreeMap::new();
    let mut first_failure = None;
    let mut symbols = [0; 3];
    for (i, o) in outcomes.into_iter().enumerate() {
        let (ledger, ok, syms) = o?;
        symbols = syms;
        *counts.entry(ledger).or_default() += 1;
        if ok {
            passes += 1;
        } else if first_failure.is_none() {
            first_failure = Some(i);
        }
    }
    let achieved = (passes > 0).then(|| {
        let den = num_bigint::BigInt::from(t);
        let f = |k: usize| Rational::new(k.into(), den.clone());
        DofPoint::new(f(symbols[0]), f(symbols[1]), f(symbols[2]))
    });
    Ok(SimulationReport {
        trials,
        passes,
        t,
        symbols,
        achieved,
        ledgers: counts.into_iter().collect(),
        first_failure,
    })
}

/// A catalog corner bound to the construction that achieves it.
///
/// Schemes are built for the receiver-normalized scenario (`N1 ≥ N2`); for
/// swapped scenarios the stream counts are reported back in the original
/// labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CornerScheme {
    pub cfg: AntennaConfig,
    pub message_set: MessageSet,
    pub csit: CsitModel,
    pub corner: Corner,
    norm_cfg: AntennaConfig,
    norm_point: DofPoint,
    swapped: bool,
    t: usize,
}

impl CornerScheme {
    pub fn new(
        cfg: AntennaConfig,
        message_set: MessageSet,
        csit: CsitModel,
        corner: Corner,
    ) -> Result<Self, SchemeError> {
        if let SchemeKind::CitedExternal(w) = corner.kind {
            return Err(SchemeError::CitedExternal(w));
        }
        let swapped = message_set != MessageSet::Degraded && !cfg.is_normalized();
        let (norm_cfg, norm_point) = if swapped {
            (cfg.swapped(), corner.point.swapped())
        } else {
            (cfg, corner.point.clone())
        };
        let t = match corner.kind {
            SchemeKind::DmNdTwoPhase => {
                let plan = DmNdPlan::new(norm_cfg)?;
                let mut want = norm_point.clone();
                if want.d0.is_zero() {
                    // private-message corner: W2 plays the role of W0
                    want = DofPoint::new(want.d1.clone(), Rational::zero(), want.d2.clone());
                }
                if plan.target() != want {
                    return Err(SchemeError::Unsupported(format!(
                        "two-phase scheme reaches {}, not {}",
                        plan.target(),
                        corner.point
                    )));
                }
                plan.t
            }
            _ => {
                if !norm_point.is_integral() {
                    return Err(SchemeError::NotIntegral(Box::new(corner.point.clone())));
                }
                1
            }
        };
        Ok(Self {
            cfg,
            message_set,
            csit,
            corner,
            norm_cfg,
            norm_point,
            swapped,
            t,
        })
    }

    /// Block length of the scheme.
    pub fn slots(&self) -> usize {
        self.t
    }

    /// Scenario the precoders are built for.
    pub fn built_for(&self) -> AntennaConfig {
        self.norm_cfg
    }

    /// Precoder for channels of the normalized scenario.
    pub fn build(
        &self,
        h1: &LiftedChannel,
        h2: &LiftedChannel,
        rng: &mut ChaCha8Rng,
    ) -> Result<Precoder, SchemeError> {
        let cfg = self.norm_cfg;
        let m = cfg.m;
        let p = &self.norm_point;
        match self.corner.kind {
            SchemeKind::TrivialBeamforming => {
                let mut parts = Vec::new();
                for c in Coord::ALL {
                    let k = to_usize(p.get(c))
                        .ok_or_else(|| SchemeError::NotIntegral(Box::new(p.clone())))?;
                    parts.push(random_columns(m, k, rng));
                }
                let v0 = parts.pop().expect("three coordinates");
                let v2 = parts.pop().expect("three coordinates");
                let v1 = parts.pop().expect("three coordinates");
                Precoder::new(1, m, v1, v2, v0)
            }
            SchemeKind::PpZeroForcing => scheme_pp(cfg, p, h1.slot(0), h2.slot(0), rng),
            SchemeKind::NpZeroForcing => scheme_np_pm(cfg, p, h2.slot(0), rng),
            SchemeKind::DpCorner => scheme_dp_np_corner(cfg, h2.slot(0), rng),
            SchemeKind::DmNdTwoPhase => {
                let plan = DmNdPlan::new(cfg)?;
                let pre = plan.build(h2, rng);
                Ok(if p.d0.is_zero() {
                    pre.common_as_private2()
                } else {
                    pre
                })
            }
            SchemeKind::CitedExternal(w) => Err(SchemeError::CitedExternal(w)),
        }
    }

    pub fn simulate(&self, trials: usize, seed: RngSeed) -> Result<SimulationReport, SchemeError> {
        let mut report = simulate(self.norm_cfg, self.t, trials, seed, |h1, h2, rng| {
            self.build(h1, h2, rng)
        })?;
        if self.swapped {
            report.symbols.swap(0, 1);
            report.achieved = report.achieved.map(|d| d.swapped());
            for (l, _) in &mut report.ledgers {
                l.swap(0, 1);
            }
        }
        Ok(report)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanComponentReport {
    pub corner: Corner,
    pub weight: Rational,
    /// `None` for corners whose scheme lives in cited prior work.
    pub report: Option<SimulationReport>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanReport {
    pub plan: TimeSharePlan,
    pub components: Vec<PlanComponentReport>,
}

impl PlanReport {
    /// Every simulatable component passed every trial.
    pub fn all_passed(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.report.as_ref().is_none_or(SimulationReport::all_passed))
    }
}

/// Simulates each simulatable component of a time-sharing plan.
pub fn simulate_plan(
    cfg: AntennaConfig,
    message_set: MessageSet,
    csit: CsitModel,
    plan: &TimeSharePlan,
    trials: usize,
    seed: RngSeed,
) -> Result<PlanReport, SchemeError> {
    let mut components = Vec::new();
    for (k, c) in plan.components.iter().enumerate() {
        let report = if c.corner.kind.is_simulatable() {
            let scheme = CornerScheme::new(cfg, message_set, csit, c.corner.clone())?;
            Some(scheme.simulate(trials, seed.derive(&[k as u64]))?)
        } else {
            None
        };
        components.push(PlanComponentReport {
            corner: c.corner.clone(),
            weight: c.weight.clone(),
            report,
        });
    }
    Ok(PlanReport {
        plan: plan.clone(),
        components,
    })
}
