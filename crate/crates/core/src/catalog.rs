//! Closed-form DoF / linear-DoF regions for every CSIT model and message
//! set, the devolution outer bound and the corner-to-scheme map.
//!
//! All formulas assume `N1 ≥ N2`; other configurations are handled by
//! swapping the receiver labels (antenna counts, CSIT letters and the
//! `d1`/`d2` coordinates). The degraded message set is not symmetric in the
//! receivers and is treated separately.

use std::fmt;

use num_traits::{One, Zero};

use crate::polytope::{Halfspace, Region};
use crate::rational::{int, Rational};
use crate::scenario::{
    AntennaConfig, Coord, CsitLetter, CsitModel, CsitType, DofPoint, MessageSet,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionStatus {
    /// The region is the DoF region.
    Dof,
    /// The region is the linear-DoF region (conjectured to equal the DoF
    /// region).
    Ldof,
}

impl fmt::Display for RegionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegionStatus::Dof => "DoF",
            RegionStatus::Ldof => "LDoF",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RegionLabel {
    pub message_set: MessageSet,
    pub csit: CsitModel,
    pub status: RegionStatus,
    /// True for degraded-message regions obtained by slicing the
    /// common-message region rather than stated as a theorem.
    pub derived: bool,
}

impl RegionLabel {
    /// Whether the region is only known to be the linear-DoF region; these
    /// are conjectured, not proven, to be the DoF region as well.
    pub fn conjectured_dof(&self) -> bool {
        self.status == RegionStatus::Ldof
    }
}

fn status_for(csit: CsitModel) -> RegionStatus {
    match csit.csit_type() {
        CsitType::TypeI => RegionStatus::Dof,
        CsitType::TypeII => RegionStatus::Ldof,
    }
}

/// One term-pair row `x/p + y/q ≤ 1` style constraint over the receiver-1 DoF
/// `x` and receiver-2 DoF `y`: coefficients `(cx, cy)` and right-hand side.
type PairRow = (Rational, Rational, Rational);

fn inv(n: usize) -> Rational {
    Rational::new(1.into(), n.into())
}

/// The private-message constraints over `(x, y) = (d1, d2)`, `N1 ≥ N2`.
fn pm_rows(cfg: AntennaConfig, csit: CsitModel) -> Vec<PairRow> {
    use CsitLetter::*;
    let a = cfg.min_m_n1();
    let b = cfg.min_m_n2();
    let c = cfg.min_m_sum();
    let one = Rational::one;
    let zero = Rational::zero;
    match (csit.rx1, csit.rx2) {
        (P, P) => vec![
            (one(), zero(), int(cfg.n1 as i64)),
            (zero(), one(), int(cfg.n2 as i64)),
            (one(), one(), int(cfg.m as i64)),
        ],
        (P, D) => vec![(inv(a), zero(), one()), (inv(c), inv(b), one())],
        (P, N) | (D, N) | (N, N) => vec![(inv(a), inv(b), one())],
        (D, P) => vec![(inv(a), inv(c), one()), (zero(), inv(b), one())],
        (D, D) => vec![(inv(c), inv(b), one()), (inv(a), inv(c), one())],
        (N, P) => vec![(inv(a), inv(a), one()), (zero(), inv(b), one())],
        (N, D) => vec![(inv(a), inv(a), one()), (inv(c), inv(b), one())],
    }
}

fn hs(a1: Rational, a2: Rational, a0: Rational, b: Rational) -> Halfspace {
    Halfspace::new(a1, a2, a0, b)
}

/// The common-message constraints over `(d1, d2, d0)`, `N1 ≥ N2`, written
/// out cell by cell.
fn cm_halfspaces(cfg: AntennaConfig, csit: CsitModel) -> Vec<Halfspace> {
    use CsitLetter::*;
    let a = cfg.min_m_n1();
    let b = cfg.min_m_n2();
    let c = cfg.min_m_sum();
    let one = Rational::one;
    let zero = Rational::zero;
    match (csit.rx1, csit.rx2) {
        (P, P) => vec![
            hs(one(), zero(), one(), int(cfg.n1 as i64)),
            hs(zero(), one(), one(), int(cfg.n2 as i64)),
            hs(one(), one(), one(), int(cfg.m as i64)),
        ],
        (P, D) => vec![
            hs(inv(a), zero(), inv(a), one()),
            hs(inv(c), inv(b), inv(b), one()),
        ],
        (P, N) | (D, N) | (N, N) => vec![hs(inv(a), inv(b), inv(b), one())],
        (D, P) => vec![
            hs(inv(a), inv(c), inv(a), one()),
            hs(zero(), inv(b), inv(b), one()),
        ],
        (D, D) => vec![
            hs(inv(c), inv(b), inv(b), one()),
            hs(inv(a), inv(c), inv(a), one()),
        ],
        (N, P) => vec![
            hs(inv(a), inv(a), inv(a), one()),
            hs(zero(), inv(b), inv(b), one()),
        ],
        (N, D) => vec![
            hs(inv(a), inv(a), inv(a), one()),
            hs(inv(c), inv(b), inv(b), one()),
        ],
    }
}

/// Private messages only; `d0` is pinned to zero.
pub fn bc_pm_region(cfg: AntennaConfig, csit: CsitModel) -> (Region, RegionLabel) {
    let label = RegionLabel {
        message_set: MessageSet::Private,
        csit,
        status: status_for(csit),
        derived: false,
    };
    let (norm, swapped) = cfg.normalized();
    let csit_n = if swapped { csit.swapped() } else { csit };
    let halfspaces = pm_rows(norm, csit_n)
        .into_iter()
        .map(|(x, y, rhs)| hs(x, y, Rational::zero(), rhs))
        .collect();
    let region = Region::new_pinned(halfspaces, Coord::D0);
    let region = if swapped { region.swapped() } else { region };
    (region, label)
}

/// Private plus common messages.
pub fn bc_cm_region(cfg: AntennaConfig, csit: CsitModel) -> (Region, RegionLabel) {
    let label = RegionLabel {
        message_set: MessageSet::Common,
        csit,
        status: status_for(csit),
        derived: false,
    };
    let (norm, swapped) = cfg.normalized();
    let csit_n = if swapped { csit.swapped() } else { csit };
    let region = Region::new(cm_halfspaces(norm, csit_n));
    let region = if swapped { region.swapped() } else { region };
    (region, label)
}

/// Degraded message set `(W1, W0)`; `d2` is pinned to zero.
///
/// With receiver 1 the weaker one (`N1 < N2`) receiver 2 can decode
/// everything receiver 1 can, and the region is `d1 + d0 ≤ min(M, N1)` for
/// every CSIT model. Otherwise `ND` has its own closed form and the other
/// models are the `d2 = 0` slice of the common-message region.
pub fn bc_dm_region(cfg: AntennaConfig, csit: CsitModel) -> (Region, RegionLabel) {
    let nd = CsitModel::new(CsitLetter::N, CsitLetter::D);
    if cfg.n1 < cfg.n2 {
        let label = RegionLabel {
            message_set: MessageSet::Degraded,
            csit,
            status: RegionStatus::Dof,
            derived: false,
        };
        return (
            Region::simplex(int(cfg.min_m_n1() as i64), &[Coord::D2]),
            label,
        );
    }
    if csit == nd {
        let label = RegionLabel {
            message_set: MessageSet::Degraded,
            csit,
            status: RegionStatus::Dof,
            derived: false,
        };
        let a = cfg.min_m_n1();
        let b = cfg.min_m_n2();
        let c = cfg.min_m_sum();
        let region = Region::new_pinned(
            vec![
                hs(inv(c), Rational::zero(), inv(b), Rational::one()),
                hs(inv(a), Rational::zero(), inv(a), Rational::one()),
            ],
            Coord::D2,
        );
        return (region, label);
    }
    let (cm, _) = bc_cm_region(cfg, csit);
    let label = RegionLabel {
        message_set: MessageSet::Degraded,
        csit,
        status: status_for(csit),
        derived: true,
    };
    (cm.slice(Coord::D2, &Rational::zero()), label)
}

pub fn region_for(
    cfg: AntennaConfig,
    message_set: MessageSet,
    csit: CsitModel,
) -> (Region, RegionLabel) {
    match message_set {
        MessageSet::Private => bc_pm_region(cfg, csit),
        MessageSet::Degraded => bc_dm_region(cfg, csit),
        MessageSet::Common => bc_cm_region(cfg, csit),
    }
}

/// The common-message outer bound obtained by devolving `W0` into one
/// private message at a time.
///
/// Each private-message halfspace `α·d1 + β·d2 ≤ b` yields
/// `α·(d1 + d0) + β·d2 ≤ b` (only receiver 1 decodes `W0`) and
/// `α·d1 + β·(d2 + d0) ≤ b` (only receiver 2 does). The union of both groups
/// is reduced to an irredundant list.
pub fn devolve_outer(cfg: AntennaConfig, csit: CsitModel) -> Region {
    let (pm, _) = bc_pm_region(cfg, csit);
    let mut rows = Vec::with_capacity(2 * pm.halfspaces.len());
    for h in &pm.halfspaces {
        rows.push(hs(h.a1.clone(), h.a2.clone(), h.a1.clone(), h.b.clone()));
    }
    for h in &pm.halfspaces {
        rows.push(hs(h.a1.clone(), h.a2.clone(), h.a2.clone(), h.b.clone()));
    }
    Region::new(rows)
        .eliminate_redundant()
        .expect("devolved private-message regions are bounded")
}

/// Prior work whose construction achieves a corner; these corners are not
/// simulated here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CitedWork {
    /// Delayed-CSIT private-message corner (Vaze and Varanasi, 2011).
    Vaze2011,
    /// Hybrid perfect/delayed private-message corner (Tandon et al., 2012).
    Tandon2012,
}

impl CitedWork {
    pub fn citation(&self) -> &'static str {
        match self {
            CitedWork::Vaze2011 => "Vaze and Varanasi (2011), delayed-CSIT MIMO BC scheme",
            CitedWork::Tandon2012 => "Tandon et al. (2012), hybrid PD/DP CSIT MIMO BC scheme",
        }
    }
}

/// Scheme family that achieves a corner point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    /// Random beamforming of a single message (or silence at the origin).
    TrivialBeamforming,
    /// One-shot zero-forcing plus random beamforming under perfect CSIT.
    PpZeroForcing,
    /// Zero-forcing `W1` at receiver 2 using its perfect CSI.
    NpZeroForcing,
    /// `W0` by random beamforming plus `W1` zero-forced at receiver 2.
    DpCorner,
    /// Two-phase retransmission of overheard equations under delayed CSIT
    /// from receiver 2.
    DmNdTwoPhase,
    CitedExternal(CitedWork),
}

impl SchemeKind {
    pub fn is_simulatable(&self) -> bool {
        !matches!(self, SchemeKind::CitedExternal(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            SchemeKind::TrivialBeamforming => "trivial-beamforming",
            SchemeKind::PpZeroForcing => "pp-zero-forcing",
            SchemeKind::NpZeroForcing => "np-zero-forcing",
            SchemeKind::DpCorner => "dp-corner",
            SchemeKind::DmNdTwoPhase => "dm-nd-two-phase",
            SchemeKind::CitedExternal(CitedWork::Vaze2011) => "cited-external:vaze2011",
            SchemeKind::CitedExternal(CitedWork::Tandon2012) => "cited-external:tandon2012",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A nonzero vertex of a catalog region and the scheme that achieves it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corner {
    pub point: DofPoint,
    pub kind: SchemeKind,
    /// `A1`, `B2`, `B0` on the axes, `P1…` in the `d0 = 0` plane and
    /// `P2…` in the `d2 = 0` plane (with `a`, `b`, … suffixes when a plane
    /// holds more than one corner).
    pub label: String,
}

/// Scheme family for a nonzero vertex of a normalized scenario.
fn classify(point: &DofPoint, csit: CsitModel) -> SchemeKind {
    use CsitLetter::*;
    if point.zero_count() >= 2 {
        return SchemeKind::TrivialBeamforming;
    }
    let model = (csit.rx1, csit.rx2);
    if model == (P, P) {
        return SchemeKind::PpZeroForcing;
    }
    if point.d0.is_zero() {
        return match model {
            (N, P) => SchemeKind::NpZeroForcing,
            (N, D) => SchemeKind::DmNdTwoPhase,
            (D, D) => SchemeKind::CitedExternal(CitedWork::Vaze2011),
            (P, D) | (D, P) => SchemeKind::CitedExternal(CitedWork::Tandon2012),
            _ => {
                debug_assert!(
                    false,
                    "no two-message corner in the d0 = 0 plane for {csit}"
                );
                SchemeKind::TrivialBeamforming
            }
        };
    }
    if point.d2.is_zero() {
        return match model {
            (N, P) | (D, P) => SchemeKind::DpCorner,
            (N, D) | (D, D) | (P, D) => SchemeKind::DmNdTwoPhase,
            _ => {
                debug_assert!(
                    false,
                    "no two-message corner in the d2 = 0 plane for {csit}"
                );
                SchemeKind::TrivialBeamforming
            }
        };
    }
    debug_assert!(false, "corner {point} has no zero coordinate");
    SchemeKind::TrivialBeamforming
}

fn axis_label(p: &DofPoint) -> &'static str {
    if !p.d1.is_zero() {
        "A1"
    } else if !p.d2.is_zero() {
        "B2"
    } else {
        "B0"
    }
}

/// Every nonzero vertex of the scenario's region, tagged with its scheme.
pub fn corner_catalog(cfg: AntennaConfig, message_set: MessageSet, csit: CsitModel) -> Vec<Corner> {
    let swap = message_set != MessageSet::Degraded && !cfg.is_normalized();
    let (cfg_n, csit_n) = if swap {
        (cfg.swapped(), csit.swapped())
    } else {
        (cfg, csit)
    };
    let (region, _) = region_for(cfg_n, message_set, csit_n);
    let verts = region.vertices().expect("catalog regions are bounded");

    let mut in_d0_plane = Vec::new();
    let mut in_d2_plane = Vec::new();
    let mut corners = Vec::new();
    for v in verts.into_iter().filter(|v| !v.is_origin()) {
        let kind = if message_set == MessageSet::Degraded && cfg.n1 < cfg.n2 {
            SchemeKind::TrivialBeamforming
        } else {
            classify(&v, csit_n)
        };
        let label = if v.zero_count() >= 2 {
            axis_label(&v).to_string()
        } else if v.d0.is_zero() {
            in_d0_plane.push(corners.len());
            "P1".to_string()
        } else {
            in_d2_plane.push(corners.len());
            "P2".to_string()
        };
        corners.push(Corner {
            point: v,
            kind,
            label,
        });
    }
    for group in [in_d0_plane, in_d2_plane] {
        if group.len() > 1 {
            for (k, &i) in group.iter().enumerate() {
                let suffix = (b'a' + k as u8) as char;
                corners[i].label.push(suffix);
            }
        }
    }
    if swap {
        for c in &mut corners {
            c.point = c.point.swapped();
            // receiver roles flip, so do the axis names
            c.label = match c.label.as_str() {
                "A1" => "B2".to_string(),
                "B2" => "A1".to_string(),
                other => other.to_string(),
            };
        }
        corners.sort_by(|a, b| a.point.cmp(&b.point));
    }
    corners
}

/// Looks a corner up by label; `P` matches the unique non-axis corner.
pub fn find_corner<'a>(corners: &'a [Corner], label: &str) -> Option<&'a Corner> {
    if let Some(c) = corners.iter().find(|c| c.label.eq_ignore_ascii_case(label)) {
        return Some(c);
    }
    if label.eq_ignore_ascii_case("P") {
        let mut off_axis = corners.iter().filter(|c| c.point.zero_count() < 2);
        if let (Some(c), None) = (off_axis.next(), off_axis.next()) {
            return Some(c);
        }
    }
    None
}
