use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use super::{check_decodability, Precoder, SchemeError, SchemeTrace};
use crate::catalog::{bc_cm_region, bc_pm_region};
use crate::linalg::{lift_channels, sample_with, GenericMatrix, LiftedChannel, RngSeed};
use crate::polytope::Region;
use crate::rational::{to_usize, Rational};
use crate::scenario::{AntennaConfig, CsitLetter, CsitModel, DofPoint, MessageSet};

/// `k` generic beamforming columns for `m` antennas.
pub fn random_columns(m: usize, k: usize, rng: &mut impl Rng) -> GenericMatrix {
    sample_with(m, k, rng)
}

/// `k` generic columns inside the kernel of `h`; `None` if the kernel is
/// too small.
fn zero_forcing_columns(h: &GenericMatrix, k: usize, rng: &mut impl Rng) -> Option<GenericMatrix> {
    if k == 0 {
        return Some(GenericMatrix::zeros(h.cols(), 0));
    }
    let null = h.nullspace_basis();
    if null.cols() < k {
        return None;
    }
    Some(null.mul(&sample_with(null.cols(), k, rng)))
}

fn integer_counts(d: &DofPoint) -> Result<[usize; 3], SchemeError> {
    match (to_usize(&d.d1), to_usize(&d.d2), to_usize(&d.d0)) {
        (Some(a), Some(b), Some(c)) => Ok([a, b, c]),
        _ => Err(SchemeError::NotIntegral(Box::new(d.clone()))),
    }
}

fn require_member(region: &Region, d: &DofPoint) -> Result<(), SchemeError> {
    if let Some(h) = region.first_violation(d) {
        return Err(SchemeError::Infeasible(h.to_string()));
    }
    if let Some(b) = region.violated_bound(d) {
        return Err(SchemeError::Infeasible(b));
    }
    Ok(())
}

fn pp() -> CsitModel {
    CsitModel::new(CsitLetter::P, CsitLetter::P)
}

/// One-shot scheme under perfect CSIT from both receivers.
///
/// `min(d_i, (M − N_j)⁺)` streams of `W_i` are zero-forced at the other
/// receiver; the remaining private streams and all common streams use
/// random beamformers.
pub fn scheme_pp(
    cfg: AntennaConfig,
    d: &DofPoint,
    h1: &GenericMatrix,
    h2: &GenericMatrix,
    rng: &mut impl Rng,
) -> Result<Precoder, SchemeError> {
    let [d1, d2, d0] = integer_counts(d)?;
    require_member(&bc_cm_region(cfg, pp()).0, d)?;
    let m = cfg.m;
    let z1 = d1.min(m.saturating_sub(cfg.n2));
    let z2 = d2.min(m.saturating_sub(cfg.n1));
    let zf = |h: &GenericMatrix, k: usize, rng: &mut _| {
        zero_forcing_columns(h, k, rng).expect("kernel has dimension (M − N)⁺")
    };
    let v1 = zf(h2, z1, rng).hstack(&random_columns(m, d1 - z1, rng));
    let v2 = zf(h1, z2, rng).hstack(&random_columns(m, d2 - z2, rng));
    let v0 = random_columns(m, d0, rng);
    Precoder::new(1, m, v1, v2, v0)
}

/// Private messages with perfect CSIT from receiver 2 only: `W1` streams
/// are zero-forced at receiver 2 as far as its kernel allows.
pub fn scheme_np_pm(
    cfg: AntennaConfig,
    d: &DofPoint,
    h2: &GenericMatrix,
    rng: &mut impl Rng,
) -> Result<Precoder, SchemeError> {
    let [d1, d2, _] = integer_counts(d)?;
    let np = CsitModel::new(CsitLetter::N, CsitLetter::P);
    require_member(&bc_pm_region(cfg, np).0, d)?;
    let m = cfg.m;
    let z1 = d1.min(m.saturating_sub(cfg.n2));
    let v1 = zero_forcing_columns(h2, z1, rng)
        .expect("kernel has dimension (M − N2)⁺")
        .hstack(&random_columns(m, d1 - z1, rng));
    let v2 = random_columns(m, d2, rng);
    Precoder::new(1, m, v1, v2, GenericMatrix::zeros(m, 0))
}

/// The corner `(min(M,N1) − min(M,N2), 0, min(M,N2))`: common streams by
/// random beamforming plus `W1` streams zero-forced at receiver 2.
pub fn scheme_dp_np_corner(
    cfg: AntennaConfig,
    h2: &GenericMatrix,
    rng: &mut impl Rng,
) -> Result<Precoder, SchemeError> {
    if !cfg.is_normalized() {
        return Err(SchemeError::Unsupported(format!(
            "{cfg}: the corner needs N1 ≥ N2"
        )));
    }
    let m = cfg.m;
    let k1 = cfg.min_m_n1() - cfg.min_m_n2();
    let v1 = zero_forcing_columns(h2, k1, rng).expect("min(M,N1) − min(M,N2) ≤ (M − N2)⁺");
    let v0 = random_columns(m, cfg.min_m_n2(), rng);
    Precoder::new(1, m, v1, GenericMatrix::zeros(m, 0), v0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DmNdCase {
    /// `M ≤ N1`: the region has no corner mixing `W1` and `W0`; send
    /// `min(M, N2)` common streams in one slot.
    CommonOnly,
    /// `M > N1 > N2`: two-phase retransmission of overheard equations.
    TwoPhase,
}

/// Slot layout of the degraded-message scheme under `ND` CSIT.
///
/// With `M' = min(M, N1 + N2)` active antennas, phase 1 spends `N1 − N2`
/// slots sending `M'` fresh `W1` symbols each. Receiver 1 is short
/// `M' − N1` equations per slot; receiver 2 overheard `N2`. Phase 2 spends
/// `M' − N1` slots; in slot `s` antenna `t` replays receiver 2's `s`-th
/// overheard equation of phase-1 slot `t`, and the next `N2` antennas carry
/// fresh `W0` symbols. Receiver 2 knows the replayed equations, so they do
/// not cost it any dimension. For `M ≥ N1 + N2` this is the
/// `N1`-slot scheme with `M' = N1 + N2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DmNdPlan {
    pub cfg: AntennaConfig,
    pub case: DmNdCase,
    /// Antennas used.
    pub m_eff: usize,
    /// Block length.
    pub t: usize,
    pub phase1: usize,
    pub phase2: usize,
}

impl DmNdPlan {
    pub fn new(cfg: AntennaConfig) -> Result<Self, SchemeError> {
        if !cfg.is_normalized() {
            return Err(SchemeError::Unsupported(format!(
                "{cfg}: the two-phase scheme needs N1 ≥ N2"
            )));
        }
        if cfg.m <= cfg.n1 || cfg.n1 == cfg.n2 {
            return Ok(Self {
                cfg,
                case: DmNdCase::CommonOnly,
                m_eff: cfg.m,
                t: 1,
                phase1: 0,
                phase2: 0,
            });
        }
        let m_eff = cfg.min_m_sum();
        let phase1 = cfg.n1 - cfg.n2;
        let phase2 = m_eff - cfg.n1;
        Ok(Self {
            cfg,
            case: DmNdCase::TwoPhase,
            m_eff,
            t: phase1 + phase2,
            phase1,
            phase2,
        })
    }

    /// `(m1, m2, m0)`.
    pub fn symbols(&self) -> [usize; 3] {
        match self.case {
            DmNdCase::CommonOnly => [0, 0, self.cfg.min_m_n2()],
            DmNdCase::TwoPhase => [self.phase1 * self.m_eff, 0, self.phase2 * self.cfg.n2],
        }
    }

    pub fn target(&self) -> DofPoint {
        let t = BigInt::from(self.t);
        let [a, b, c] = self.symbols();
        let f = |k: usize| Rational::new(BigInt::from(k), t.clone());
        DofPoint::new(f(a), f(b), f(c))
    }

    /// Builds the precoder; only phase-1 blocks of `h2` are read.
    pub fn build(&self, h2: &LiftedChannel, rng: &mut impl Rng) -> Precoder {
        let m = self.cfg.m;
        if self.case == DmNdCase::CommonOnly {
            let v0 = random_columns(m, self.cfg.min_m_n2(), rng);
            let z = GenericMatrix::zeros(m, 0);
            return Precoder::new(1, m, z.clone(), z, v0).expect("shapes agree");
        }
        let [m1, _, m0] = self.symbols();
        let (p1, n2, me) = (self.phase1, self.cfg.n2, self.m_eff);
        let mut v1 = GenericMatrix::zeros(self.t * m, m1);
        let mut v0 = GenericMatrix::zeros(self.t * m, m0);
        for t in 0..p1 {
            for i in 0..me {
                v1.set(t * m + i, t * me + i, Rational::one());
            }
        }
        for s in 0..self.phase2 {
            let slot = p1 + s;
            for t in 0..p1 {
                let h = h2.slot(t);
                for i in 0..me {
                    let coef = h.get(s, i);
                    if !coef.is_zero() {
                        v1.set(slot * m + t, t * me + i, coef.clone());
                    }
                }
            }
            for j in 0..n2 {
                v0.set(slot * m + p1 + j, s * n2 + j, Rational::one());
            }
        }
        let mut p = Precoder::new(self.t, m, v1, GenericMatrix::zeros(self.t * m, 0), v0)
            .expect("shapes agree");
        p.causal = true;
        p
    }
}

/// Builds the degraded-message `ND` scheme on fresh channels and checks it.
pub fn scheme_dm_nd(
    cfg: AntennaConfig,
    seed: RngSeed,
) -> Result<(Precoder, SchemeTrace), SchemeError> {
    let plan = DmNdPlan::new(cfg)?;
    let (h1, h2) = lift_channels(cfg, plan.t, seed.derive(&[0]));
    let mut rng = seed.derive(&[1]).rng();
    let p = plan.build(&h2, &mut rng);
    let d = check_decodability(&h1, &h2, &p)?;
    let trace = SchemeTrace::new(
        cfg,
        CsitModel::new(CsitLetter::N, CsitLetter::D),
        MessageSet::Degraded,
        plan.target(),
        plan.t,
        d,
    );
    Ok((p, trace))
}
