//! Exact-rational halfspace polytopes in DoF space.
//!
//! A [`Region`] is a finite list of halfspaces `a1·d1 + a2·d2 + a0·d0 ≤ b`
//! together with implicit nonnegativity of every free coordinate. Some
//! coordinates may be pinned to zero, which is how the two-dimensional
//! private-message and degraded-message regions share the same engine as
//! the three-dimensional common-message regions.
//!
//! Regions here have at most a handful of facets, so vertices are found by
//! solving every square subsystem of the active constraint planes and
//! keeping the feasible solutions.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{self, Rational};
use crate::scenario::{Coord, DofPoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegionError {
    #[error("unbounded")]
    Unbounded,
}

/// `a1·d1 + a2·d2 + a0·d0 ≤ b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace {
    pub a1: Rational,
    pub a2: Rational,
    pub a0: Rational,
    pub b: Rational,
}

impl Halfspace {
    pub fn new(a1: Rational, a2: Rational, a0: Rational, b: Rational) -> Self {
        Self { a1, a2, a0, b }
    }

    pub fn coeff(&self, c: Coord) -> &Rational {
        match c {
            Coord::D1 => &self.a1,
            Coord::D2 => &self.a2,
            Coord::D0 => &self.a0,
        }
    }

    fn coeff_mut(&mut self, c: Coord) -> &mut Rational {
        match c {
            Coord::D1 => &mut self.a1,
            Coord::D2 => &mut self.a2,
            Coord::D0 => &mut self.a0,
        }
    }

    pub fn lhs(&self, p: &DofPoint) -> Rational {
        &self.a1 * &p.d1 + &self.a2 * &p.d2 + &self.a0 * &p.d0
    }

    pub fn satisfied_by(&self, p: &DofPoint) -> bool {
        self.lhs(p) <= self.b
    }

    pub fn is_tight_at(&self, p: &DofPoint) -> bool {
        self.lhs(p) == self.b
    }

    pub fn is_trivial(&self) -> bool {
        self.a1.is_zero() && self.a2.is_zero() && self.a0.is_zero()
    }

    /// Exchange the `d1` and `d2` coefficients.
    pub fn swapped(&self) -> Self {
        Self::new(
            self.a2.clone(),
            self.a1.clone(),
            self.a0.clone(),
            self.b.clone(),
        )
    }
}

impl fmt::Display for Halfspace {
    /// Renders e.g. `d1/3 + d2 + d0 ≤ 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in Coord::ALL {
            let a = self.coeff(c);
            if a.is_zero() {
                continue;
            }
            let negative = a.is_negative();
            let mag = a.abs();
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            let name = c.name();
            if mag.is_one() {
                f.write_str(name)?;
            } else if mag.numer().is_one() {
                write!(f, "{name}/{}", mag.denom())?;
            } else {
                write!(f, "{}*{name}", rational::format(&mag))?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " ≤ {}", rational::format(&self.b))
    }
}

/// Convex polytope `{d ≥ 0 : every halfspace holds, pinned coordinates = 0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub halfspaces: Vec<Halfspace>,
    pinned: [bool; 3],
}

impl Region {
    pub fn new(halfspaces: Vec<Halfspace>) -> Self {
        Self {
            halfspaces,
            pinned: [false; 3],
        }
    }

    /// A region with one coordinate held at zero.
    pub fn new_pinned(halfspaces: Vec<Halfspace>, pinned: Coord) -> Self {
        let mut r = Self::new(halfspaces);
        r.pinned[pinned.index()] = true;
        r.fold_pinned();
        r
    }

    pub fn with_pinned(halfspaces: Vec<Halfspace>, pinned: &[Coord]) -> Self {
        let mut r = Self::new(halfspaces);
        for c in pinned {
            r.pinned[c.index()] = true;
        }
        r.fold_pinned();
        r
    }

    /// `d1 + d2 + d0 ≤ total` over the free coordinates.
    pub fn simplex(total: Rational, pinned: &[Coord]) -> Self {
        let one = Rational::one();
        Self::with_pinned(
            vec![Halfspace::new(one.clone(), one.clone(), one, total)],
            pinned,
        )
    }

    fn fold_pinned(&mut self) {
        for c in self.pinned_coords() {
            for h in &mut self.halfspaces {
                *h.coeff_mut(c) = Rational::zero();
            }
        }
    }

    pub fn is_pinned(&self, c: Coord) -> bool {
        self.pinned[c.index()]
    }

    pub fn pinned_coords(&self) -> Vec<Coord> {
        Coord::ALL
            .into_iter()
            .filter(|c| self.is_pinned(*c))
            .collect()
    }

    pub fn free_coords(&self) -> Vec<Coord> {
        Coord::ALL
            .into_iter()
            .filter(|c| !self.is_pinned(*c))
            .collect()
    }

    pub fn dimension(&self) -> usize {
        self.free_coords().len()
    }

    /// Membership with exact comparison; boundary points are inside.
    pub fn contains(&self, p: &DofPoint) -> bool {
        self.first_violation(p).is_none() && self.violated_bound(p).is_none()
    }

    /// First halfspace the point violates, if any.
    pub fn first_violation(&self, p: &DofPoint) -> Option<&Halfspace> {
        self.halfspaces.iter().find(|h| !h.satisfied_by(p))
    }

    /// A violated nonnegativity or pinning condition, if any.
    pub fn violated_bound(&self, p: &DofPoint) -> Option<String> {
        for c in Coord::ALL {
            let v = p.get(c);
            if v.is_negative() {
                return Some(format!("{} ≥ 0", c.name()));
            }
            if self.is_pinned(c) && !v.is_zero() {
                return Some(format!("{} = 0", c.name()));
            }
        }
        None
    }

    /// The exact vertex set, sorted lexicographically.
    ///
    /// Returns an empty list for an infeasible region and
    /// [`RegionError::Unbounded`] when the feasible set is not bounded.
    pub fn vertices(&self) -> Result<Vec<DofPoint>, RegionError> {
        let free = self.free_coords();
        let verts = enumerate_vertices(&self.halfspaces, &free, None);
        if verts.is_empty() {
            return Ok(verts);
        }
        if !self.recession_directions().is_empty() {
            return Err(RegionError::Unbounded);
        }
        Ok(verts)
    }

    /// Extreme rays of the recession cone, normalised to unit coordinate sum.
    fn recession_directions(&self) -> Vec<DofPoint> {
        let free = self.free_coords();
        let homogeneous: Vec<Halfspace> = self
            .halfspaces
            .iter()
            .map(|h| Halfspace {
                b: Rational::zero(),
                ..h.clone()
            })
            .collect();
        let one = Rational::one();
        let sum = Halfspace::new(one.clone(), one.clone(), one.clone(), one);
        enumerate_vertices(&homogeneous, &free, Some(&sum))
    }

    pub fn is_bounded(&self) -> bool {
        self.recession_directions().is_empty()
    }

    pub fn is_empty(&self) -> bool {
        enumerate_vertices(&self.halfspaces, &self.free_coords(), None).is_empty()
    }

    /// Drops every halfspace whose removal leaves the vertex set unchanged.
    pub fn eliminate_redundant(&self) -> Result<Region, RegionError> {
        let target = self.vertices()?;
        let mut kept = self.halfspaces.clone();
        let mut i = 0;
        while i < kept.len() {
            let mut trial = kept.clone();
            trial.remove(i);
            let candidate = Region {
                halfspaces: trial,
                pinned: self.pinned,
            };
            if candidate.vertices().map(|v| v == target).unwrap_or(false) {
                kept = candidate.halfspaces;
            } else {
                i += 1;
            }
        }
        Ok(Region {
            halfspaces: kept,
            pinned: self.pinned,
        })
    }

    /// Vertex-set equality.
    pub fn equals(&self, other: &Region) -> Result<bool, RegionError> {
        Ok(self.vertices()? == other.vertices()?)
    }

    /// `self ⊆ other`, tested by vertex membership.
    pub fn is_subset_of(&self, other: &Region) -> Result<bool, RegionError> {
        Ok(self.vertices()?.iter().all(|v| other.contains(v)))
    }

    /// Intersect with the plane `coord = value` and fold the coordinate away.
    ///
    /// The result has `coord` pinned; its remaining coordinates are the
    /// unsliced ones. Slicing an already pinned coordinate at a nonzero value
    /// gives an empty region.
    pub fn slice(&self, coord: Coord, value: &Rational) -> Region {
        let mut halfspaces: Vec<Halfspace> = self
            .halfspaces
            .iter()
            .map(|h| {
                let mut h = h.clone();
                let a = std::mem::take(h.coeff_mut(coord));
                h.b -= a * value;
                h
            })
            .collect();
        if value.is_negative() || (self.is_pinned(coord) && !value.is_zero()) {
            // 0 ≤ -1: infeasible marker
            halfspaces.push(Halfspace::new(
                Rational::zero(),
                Rational::zero(),
                Rational::zero(),
                -Rational::one(),
            ));
        }
        let mut pinned = self.pinned;
        pinned[coord.index()] = true;
        Region { halfspaces, pinned }
    }

    /// Exchange the roles of `d1` and `d2`.
    pub fn swapped(&self) -> Region {
        let mut pinned = self.pinned;
        pinned.swap(0, 1);
        Region {
            halfspaces: self.halfspaces.iter().map(Halfspace::swapped).collect(),
            pinned,
        }
    }

    /// Intersection of two regions (halfspace lists concatenated).
    pub fn intersect(&self, other: &Region) -> Region {
        let mut pinned = self.pinned;
        for (p, q) in pinned.iter_mut().zip(other.pinned) {
            *p |= q;
        }
        let mut r = Region {
            halfspaces: self
                .halfspaces
                .iter()
                .chain(&other.halfspaces)
                .cloned()
                .collect(),
            pinned,
        };
        r.fold_pinned();
        r
    }

    /// Vertices of a two-dimensional region in counter-clockwise boundary
    /// order, starting at the lexicographically smallest one.
    pub fn boundary_order(&self) -> Result<Vec<DofPoint>, RegionError> {
        let verts = self.vertices()?;
        let free = self.free_coords();
        if free.len() != 2 || verts.len() < 3 {
            return Ok(verts);
        }
        let (x, y) = (free[0], free[1]);
        // vertices of a convex polygon: walk the edges by shared tight halfspace
        let planes = self.planes_with_bounds(&free);
        let tight = |v: &DofPoint| -> BTreeSet<usize> {
            planes
                .iter()
                .enumerate()
                .filter(|(_, h)| h.is_tight_at(v))
                .map(|(i, _)| i)
                .collect()
        };
        let start = verts[0].clone();
        let mut order = vec![start.clone()];
        let mut prev: Option<DofPoint> = None;
        let mut cur = start.clone();
        while order.len() < verts.len() {
            let tc = tight(&cur);
            let mut nbrs: Vec<&DofPoint> = verts
                .iter()
                .filter(|v| **v != cur && Some(*v) != prev.as_ref())
                .filter(|v| tight(v).intersection(&tc).next().is_some())
                .collect();
            if nbrs.is_empty() {
                break;
            }
            if prev.is_none() {
                // counter-clockwise: from the lowest vertex go to the neighbour
                // with the smallest polar angle, i.e. the one that makes a
                // positive cross product with the other
                nbrs.sort_by(|a, b| {
                    let ax = a.get(x) - cur.get(x);
                    let ay = a.get(y) - cur.get(y);
                    let bx = b.get(x) - cur.get(x);
                    let by = b.get(y) - cur.get(y);
                    let cross = &ax * &by - &ay * &bx;
                    cross.cmp(&Rational::zero()).reverse()
                });
            }
            let next = nbrs[0].clone();
            prev = Some(cur);
            cur = next;
            order.push(cur.clone());
        }
        Ok(order)
    }

    fn planes_with_bounds(&self, free: &[Coord]) -> Vec<Halfspace> {
        let mut planes: Vec<Halfspace> = self
            .halfspaces
            .iter()
            .filter(|h| !h.is_trivial())
            .cloned()
            .collect();
        for &c in free {
            let mut h = Halfspace::new(
                Rational::zero(),
                Rational::zero(),
                Rational::zero(),
                Rational::zero(),
            );
            *h.coeff_mut(c) = -Rational::one();
            planes.push(h);
        }
        planes
    }
}

/// Solve every square subsystem drawn from the halfspace planes and the
/// coordinate planes `x_c = 0`, keep feasible solutions and deduplicate.
///
/// With `equality = Some(e)` the plane `e` is always active and must hold
/// with equality; this is used to find the recession directions.
fn enumerate_vertices(
    halfspaces: &[Halfspace],
    free: &[Coord],
    equality: Option<&Halfspace>,
) -> Vec<DofPoint> {
    let k = free.len();
    if k == 0 {
        let origin = DofPoint::origin();
        let feasible = halfspaces.iter().all(|h| h.satisfied_by(&origin))
            && equality.is_none_or(|e| e.is_tight_at(&origin));
        return if feasible { vec![origin] } else { vec![] };
    }
    // plane i: coefficients over free coords, rhs
    let mut planes: Vec<(Vec<Rational>, Rational)> = halfspaces
        .iter()
        .map(|h| {
            (
                free.iter().map(|&c| h.coeff(c).clone()).collect(),
                h.b.clone(),
            )
        })
        .collect();
    for (j, _) in free.iter().enumerate() {
        let mut row = vec![Rational::zero(); k];
        row[j] = Rational::one();
        planes.push((row, Rational::zero()));
    }
    let fixed: Option<(Vec<Rational>, Rational)> = equality.map(|e| {
        (
            free.iter().map(|&c| e.coeff(c).clone()).collect(),
            e.b.clone(),
        )
    });
    let choose = if fixed.is_some() { k - 1 } else { k };

    let mut found = BTreeSet::new();
    for subset in (0..planes.len()).combinations(choose) {
        let mut a: Vec<Vec<Rational>> = subset.iter().map(|&i| planes[i].0.clone()).collect();
        let mut b: Vec<Rational> = subset.iter().map(|&i| planes[i].1.clone()).collect();
        if let Some((row, rhs)) = &fixed {
            a.push(row.clone());
            b.push(rhs.clone());
        }
        let Some(x) = solve_square(a, b) else {
            continue;
        };
        let mut p = DofPoint::origin();
        for (&c, v) in free.iter().zip(x) {
            p.set(c, v);
        }
        if p.is_nonnegative() && halfspaces.iter().all(|h| h.satisfied_by(&p)) {
            found.insert(p);
        }
    }
    found.into_iter().collect()
}

/// Unique solution of a square system by exact Gauss-Jordan elimination,
/// or `None` when the system is singular.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for j in col..n {
            a[col][j] *= &inv;
        }
        b[col] *= &inv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in col..n {
                let delta = &factor * &a[col][j];
                a[r][j] -= delta;
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    Some(b)
}
