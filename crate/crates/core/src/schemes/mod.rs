//! Explicit multi-slot linear precoders for the corner points of the
//! catalog regions, the rank test for linear decodability and time-sharing
//! decomposition of arbitrary region points.

mod constructions;
mod plan;
mod simulate;

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::catalog::CitedWork;
use crate::linalg::{GenericMatrix, LiftedChannel};
use crate::rational::Rational;
use crate::scenario::{AntennaConfig, CsitModel, DofPoint, MessageSet, Receiver};

pub use constructions::{
    random_columns, scheme_dm_nd, scheme_dp_np_corner, scheme_np_pm, scheme_pp, DmNdCase, DmNdPlan,
};
pub use plan::{achieve_point, scheme_trivial, PlanComponent, TimeSharePlan};
pub use simulate::{
    simulate, simulate_plan, CornerScheme, PlanComponentReport, PlanReport, SimulationReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("point {0} is not integer-valued")]
    NotIntegral(Box<DofPoint>),
    #[error("infeasible: violates {0}")]
    Infeasible(String),
    #[error("requires the scheme of cited prior work: {}", .0.citation())]
    CitedExternal(CitedWork),
    #[error("{0}")]
    Unsupported(String),
}

/// Stacked per-slot beamforming matrices of the three messages.
///
/// Slot `t` of each `V` occupies rows `t·M .. (t+1)·M`; column counts are
/// the symbol counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Precoder {
    pub t: usize,
    pub m: usize,
    pub v1: GenericMatrix,
    pub v2: GenericMatrix,
    pub v0: GenericMatrix,
    /// Built from delayed CSIT: slot-`t` blocks use channels of earlier
    /// slots only.
    pub causal: bool,
}

impl Precoder {
    pub fn new(
        t: usize,
        m: usize,
        v1: GenericMatrix,
        v2: GenericMatrix,
        v0: GenericMatrix,
    ) -> Result<Self, SchemeError> {
        for (name, v) in [("V1", &v1), ("V2", &v2), ("V0", &v0)] {
            if v.rows() != t * m {
                return Err(SchemeError::ShapeMismatch(format!(
                    "{name} has {} rows, expected T·M = {}",
                    v.rows(),
                    t * m
                )));
            }
        }
        Ok(Self {
            t,
            m,
            v1,
            v2,
            v0,
            causal: false,
        })
    }

    pub fn empty(t: usize, m: usize) -> Self {
        let z = GenericMatrix::zeros(t * m, 0);
        Self::new(t, m, z.clone(), z.clone(), z).expect("shapes agree")
    }

    pub fn m1(&self) -> usize {
        self.v1.cols()
    }

    pub fn m2(&self) -> usize {
        self.v2.cols()
    }

    pub fn m0(&self) -> usize {
        self.v0.cols()
    }

    pub fn symbols(&self) -> [usize; 3] {
        [self.m1(), self.m2(), self.m0()]
    }

    /// `(m1, m2, m0) / T`.
    pub fn dof(&self) -> DofPoint {
        let t = BigInt::from(self.t);
        let f = |k: usize| Rational::new(BigInt::from(k), t.clone());
        DofPoint::new(f(self.m1()), f(self.m2()), f(self.m0()))
    }

    /// Rows of slot `t` of `v`.
    pub fn slot(&self, v: &GenericMatrix, t: usize) -> GenericMatrix {
        v.row_range(t * self.m, (t + 1) * self.m)
    }

    /// Carries the common-message streams as receiver-2 private streams.
    pub fn common_as_private2(mut self) -> Self {
        self.v2 = std::mem::replace(&mut self.v0, GenericMatrix::zeros(self.t * self.m, 0));
        self
    }

    /// Same streams with the receiver roles exchanged.
    pub fn swapped(mut self) -> Self {
        std::mem::swap(&mut self.v1, &mut self.v2);
        self
    }

    fn intended(&self, r: Receiver) -> &GenericMatrix {
        match r {
            Receiver::One => &self.v1,
            Receiver::Two => &self.v2,
        }
    }
}

/// `H^{(T)} · V` computed slot by slot.
pub fn apply(h: &LiftedChannel, v: &GenericMatrix) -> GenericMatrix {
    let m = v.rows() / h.slots().max(1);
    let mut out: Option<GenericMatrix> = None;
    for (t, ht) in h.per_slot.iter().enumerate() {
        let block = ht.mul(&v.row_range(t * m, (t + 1) * m));
        out = Some(match out {
            None => block,
            Some(acc) => acc.vstack(&block),
        });
    }
    out.unwrap_or_else(|| GenericMatrix::zeros(0, v.cols()))
}

/// Ranks entering the decodability test at one receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RankLedger {
    /// `rank(H_r [V_r V_0 V_r'])`
    pub total: usize,
    /// `rank(H_r [V_r V_0])`
    pub signal: usize,
    /// `rank(H_r V_r')`
    pub interference: usize,
    /// `m_r + m_0`
    pub required: usize,
}

impl RankLedger {
    /// Signal and interference subspaces are disjoint and the signal has
    /// full dimension.
    pub fn passes(&self) -> bool {
        self.total == self.signal + self.interference && self.signal == self.required
    }
}

impl fmt::Display for RankLedger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "total {} signal {} interference {} required {}",
            self.total, self.signal, self.interference, self.required
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Decodability {
    pub ledger: [RankLedger; 2],
    pub verdict: bool,
}

/// Linear decodability of every intended message at both receivers.
///
/// Receiver `r` resolves its own streams and the common streams iff
/// `rank(H_r[V_r V_0 V_r']) = rank(H_r[V_r V_0]) + rank(H_r V_r')` and
/// `rank(H_r[V_r V_0]) = m_r + m_0`. A receiver with no private message
/// (receiver 2 in the degraded set) only needs the common streams.
pub fn check_decodability(
    h1: &LiftedChannel,
    h2: &LiftedChannel,
    p: &Precoder,
) -> Result<Decodability, SchemeError> {
    for (name, h) in [("H1", h1), ("H2", h2)] {
        if h.slots() != p.t {
            return Err(SchemeError::ShapeMismatch(format!(
                "{name} has {} slots, precoder has {}",
                h.slots(),
                p.t
            )));
        }
        if let Some(bad) = h.per_slot.iter().find(|b| b.cols() != p.m) {
            return Err(SchemeError::ShapeMismatch(format!(
                "{name} slot has {} columns, precoder uses {} antennas",
                bad.cols(),
                p.m
            )));
        }
    }
    let ledger_for = |r: Receiver, h: &LiftedChannel| {
        let own = apply(h, p.intended(r));
        let common = apply(h, &p.v0);
        let other = apply(h, p.intended(r.other()));
        let signal = own.hstack(&common);
        let everything = signal.hstack(&other);
        RankLedger {
            total: everything.rank(),
            signal: signal.rank(),
            interference: other.rank(),
            required: p.intended(r).cols() + p.m0(),
        }
    };
    let ledger = [ledger_for(Receiver::One, h1), ledger_for(Receiver::Two, h2)];
    Ok(Decodability {
        verdict: ledger.iter().all(RankLedger::passes),
        ledger,
    })
}

/// A decodability check tied to the scenario and target it was run for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeTrace {
    pub cfg: AntennaConfig,
    pub csit: CsitModel,
    pub message_set: MessageSet,
    pub target: DofPoint,
    pub t: usize,
    pub ledger: [RankLedger; 2],
    pub verdict: bool,
}

impl SchemeTrace {
    pub fn new(
        cfg: AntennaConfig,
        csit: CsitModel,
        message_set: MessageSet,
        target: DofPoint,
        t: usize,
        d: Decodability,
    ) -> Self {
        Self {
            cfg,
            csit,
            message_set,
            target,
            t,
            ledger: d.ledger,
            verdict: d.verdict,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{lift_channels, sample_generic, RngSeed};

    #[test]
    fn point_to_point_streams() {
        let cfg = AntennaConfig::new(3, 3, 2).unwrap();
        let (h1, h2) = lift_channels(cfg, 1, RngSeed(5));
        let v1 = sample_generic(3, 3, RngSeed(6));
        let z = GenericMatrix::zeros(3, 0);
        let p = Precoder::new(1, 3, v1, z.clone(), z).unwrap();
        let d = check_decodability(&h1, &h2, &p).unwrap();
        assert!(d.verdict);
        let l = d.ledger[0];
        assert_eq!((l.total, l.signal, l.interference), (3, 3, 0));
    }

    #[test]
    fn shape_errors() {
        let cfg = AntennaConfig::new(2, 1, 1).unwrap();
        let (h1, h2) = lift_channels(cfg, 2, RngSeed(1));
        let p = Precoder::empty(1, 2);
        assert!(matches!(
            check_decodability(&h1, &h2, &p),
            Err(SchemeError::ShapeMismatch(_))
        ));
        assert!(Precoder::new(
            1,
            2,
            GenericMatrix::zeros(3, 1),
            GenericMatrix::zeros(2, 0),
            GenericMatrix::zeros(2, 0)
        )
        .is_err());
    }

    #[test]
    fn apply_matches_block_diagonal() {
        let cfg = AntennaConfig::new(3, 2, 2).unwrap();
        let (h1, _) = lift_channels(cfg, 3, RngSeed(2));
        let v = sample_generic(9, 4, RngSeed(3));
        assert_eq!(apply(&h1, &v), h1.block_diag.mul(&v));
    }
}
