use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use super::SchemeError;
use crate::catalog::{bc_cm_region, corner_catalog, region_for, Corner, SchemeKind};
use crate::linalg::GenericMatrix;
use crate::polytope::Region;
use crate::rational::{int, Rational};
use crate::scenario::{AntennaConfig, Coord, CsitLetter, CsitModel, DofPoint, MessageSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanComponent {
    pub corner: Corner,
    pub weight: Rational,
}

/// Convex combination of corner schemes; the transmitter is silent for the
/// `idle` fraction of the time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeSharePlan {
    pub target: DofPoint,
    pub components: Vec<PlanComponent>,
    pub idle: Rational,
}

impl TimeSharePlan {
    /// `Σ weight · corner`.
    pub fn reconstruct(&self) -> DofPoint {
        self.components.iter().fold(DofPoint::origin(), |acc, c| {
            acc.add(&c.corner.point.scaled(&c.weight))
        })
    }

    pub fn total_weight(&self) -> Rational {
        self.components
            .iter()
            .fold(self.idle.clone(), |acc, c| acc + &c.weight)
    }

    pub fn cited_count(&self) -> usize {
        self.components
            .iter()
            .filter(|c| !c.corner.kind.is_simulatable())
            .count()
    }

    pub fn is_fully_simulatable(&self) -> bool {
        self.cited_count() == 0
    }
}

fn infeasible(region: &Region, d: &DofPoint) -> Option<SchemeError> {
    if let Some(b) = region.violated_bound(d) {
        return Some(SchemeError::Infeasible(b));
    }
    region
        .first_violation(d)
        .map(|h| SchemeError::Infeasible(h.to_string()))
}

/// Unique `w` with `Σ w_k v_k = d` if the vertices are independent.
fn solve_weights(vertices: &[&DofPoint], d: &DofPoint) -> Option<Vec<Rational>> {
    let k = vertices.len();
    let aug = GenericMatrix::from_fn(3, k + 1, |i, j| {
        if j < k {
            vertices[j].to_array()[i].clone()
        } else {
            d.to_array()[i].clone()
        }
    });
    let (red, pivots) = aug.rref();
    if pivots != (0..k).collect::<Vec<_>>() {
        return None;
    }
    Some((0..k).map(|i| red.get(i, k).clone()).collect())
}

fn plan_over(target: DofPoint, corners: &[Corner]) -> Option<TimeSharePlan> {
    if target.is_origin() {
        return Some(TimeSharePlan {
            target,
            components: Vec::new(),
            idle: Rational::one(),
        });
    }
    for size in 1..=3.min(corners.len()) {
        let mut best: Option<(usize, Vec<usize>, Vec<Rational>)> = None;
        for subset in (0..corners.len()).combinations(size) {
            let pts: Vec<&DofPoint> = subset.iter().map(|&i| &corners[i].point).collect();
            let Some(w) = solve_weights(&pts, &target) else {
                continue;
            };
            let sum = w.iter().fold(Rational::zero(), |a, x| a + x);
            if w.iter().any(|x| x.is_negative() || x.is_zero()) || sum > Rational::one() {
                continue;
            }
            let cited = subset
                .iter()
                .filter(|&&i| !corners[i].kind.is_simulatable())
                .count();
            // corners are sorted, so the first subset found per cited
            // count is the lexicographically smallest
            if best.as_ref().is_none_or(|(c, _, _)| cited < *c) {
                best = Some((cited, subset, w));
            }
        }
        if let Some((_, subset, w)) = best {
            let sum = w.iter().fold(Rational::zero(), |a, x| a + x);
            let components = subset
                .into_iter()
                .zip(w)
                .map(|(i, weight)| PlanComponent {
                    corner: corners[i].clone(),
                    weight,
                })
                .collect();
            return Some(TimeSharePlan {
                target,
                components,
                idle: Rational::one() - sum,
            });
        }
    }
    None
}

fn sorted(mut corners: Vec<Corner>) -> Vec<Corner> {
    corners.sort_by(|a, b| a.point.cmp(&b.point));
    corners
}

/// Exact time-sharing decomposition of a region point over the fewest
/// corners, preferring corners whose schemes are simulated here.
pub fn achieve_point(
    cfg: AntennaConfig,
    message_set: MessageSet,
    csit: CsitModel,
    d: &DofPoint,
) -> Result<TimeSharePlan, SchemeError> {
    let (region, _) = region_for(cfg, message_set, csit);
    if let Some(e) = infeasible(&region, d) {
        return Err(e);
    }
    let corners = sorted(corner_catalog(cfg, message_set, csit));
    plan_over(d.clone(), &corners)
        .ok_or_else(|| SchemeError::Unsupported(format!("no convex decomposition found for {d}")))
}

/// Time-division between single-message random-beamforming corners.
///
/// Accepts any point of the no-CSIT region `d1/min(M,N1) + d2/min(M,N2) +
/// d0/min(M,N1,N2) ≤ 1`, which sits inside the region of every CSIT model.
pub fn scheme_trivial(
    cfg: AntennaConfig,
    _csit: CsitModel,
    d: &DofPoint,
) -> Result<TimeSharePlan, SchemeError> {
    let nn = CsitModel::new(CsitLetter::N, CsitLetter::N);
    let (region, _) = bc_cm_region(cfg, nn);
    if let Some(e) = infeasible(&region, d) {
        return Err(e);
    }
    let axes = [
        (Coord::D1, cfg.min_m_n1()),
        (Coord::D2, cfg.min_m_n2()),
        (Coord::D0, cfg.min_m_n1().min(cfg.min_m_n2())),
    ];
    let mut components = Vec::new();
    for (c, len) in axes {
        let v = d.get(c);
        if v.is_zero() {
            continue;
        }
        let mut point = DofPoint::origin();
        point.set(c, int(len as i64));
        let label = match c {
            Coord::D1 => "A1",
            Coord::D2 => "B2",
            Coord::D0 => "B0",
        };
        components.push(PlanComponent {
            weight: v / int(len as i64),
            corner: Corner {
                point,
                kind: SchemeKind::TrivialBeamforming,
                label: label.to_string(),
            },
        });
    }
    let used = components
        .iter()
        .fold(Rational::zero(), |a, c| a + &c.weight);
    Ok(TimeSharePlan {
        target: d.clone(),
        components,
        idle: Rational::one() - used,
    })
}
