//! Oracles shared by the integration tests. They only read the public
//! halfspace data and recompute everything with plain Cramer's rule.

#![allow(dead_code)]

use bcdof::polytope::{Halfspace, Region};
use bcdof::rational::{int, rat};
use bcdof::scenario::{AntennaConfig, Coord, CsitModel, DofPoint};
use bcdof::Rational;
use num_traits::{One, Zero};

pub fn cfg(m: usize, n1: usize, n2: usize) -> AntennaConfig {
    AntennaConfig::new(m, n1, n2).unwrap()
}

pub fn csit(s: &str) -> CsitModel {
    s.parse().unwrap()
}

pub fn pt(d1: (i64, i64), d2: (i64, i64), d0: (i64, i64)) -> DofPoint {
    DofPoint::new(rat(d1.0, d1.1), rat(d2.0, d2.1), rat(d0.0, d0.1))
}

/// `a·d ≤ b` rows, including nonnegativity and `±d = 0` for pinned
/// coordinates.
pub fn rows_of(region: &Region) -> Vec<([Rational; 3], Rational)> {
    let mut rows: Vec<([Rational; 3], Rational)> = region
        .halfspaces
        .iter()
        .map(|h| ([h.a1.clone(), h.a2.clone(), h.a0.clone()], h.b.clone()))
        .collect();
    for k in 0..3 {
        let mut a = [Rational::zero(), Rational::zero(), Rational::zero()];
        a[k] = -Rational::one();
        rows.push((a, Rational::zero()));
    }
    for c in region.pinned_coords() {
        let mut a = [Rational::zero(), Rational::zero(), Rational::zero()];
        a[c.index()] = Rational::one();
        rows.push((a, Rational::zero()));
    }
    rows
}

fn det3(m: &[[Rational; 3]; 3]) -> Rational {
    m[0][0].clone() * (m[1][1].clone() * m[2][2].clone() - m[1][2].clone() * m[2][1].clone())
        - m[0][1].clone() * (m[1][0].clone() * m[2][2].clone() - m[1][2].clone() * m[2][0].clone())
        + m[0][2].clone() * (m[1][0].clone() * m[2][1].clone() - m[1][1].clone() * m[2][0].clone())
}

/// Every feasible intersection point of three independent constraint
/// planes, sorted and without repeats.
pub fn brute_force_vertices(region: &Region) -> Vec<DofPoint> {
    let rows = rows_of(region);
    let mut out: Vec<[Rational; 3]> = Vec::new();
    let n = rows.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let a = [rows[i].0.clone(), rows[j].0.clone(), rows[k].0.clone()];
                let b = [rows[i].1.clone(), rows[j].1.clone(), rows[k].1.clone()];
                let d = det3(&a);
                if d.is_zero() {
                    continue;
                }
                let mut x: [Rational; 3] = [Rational::zero(), Rational::zero(), Rational::zero()];
                for col in 0..3 {
                    let mut m = a.clone();
                    for r in 0..3 {
                        m[r][col] = b[r].clone();
                    }
                    x[col] = det3(&m) / d.clone();
                }
                let feasible = rows.iter().all(|(a, b)| {
                    a[0].clone() * x[0].clone()
                        + a[1].clone() * x[1].clone()
                        + a[2].clone() * x[2].clone()
                        <= *b
                });
                if feasible && !out.contains(&x) {
                    out.push(x);
                }
            }
        }
    }
    let mut pts: Vec<DofPoint> = out.into_iter().map(DofPoint::from_array).collect();
    pts.sort();
    pts
}

pub fn sorted(mut v: Vec<DofPoint>) -> Vec<DofPoint> {
    v.sort();
    v
}

/// `a1 d1 + a2 d2 + a0 d0 ≤ b` from fractions given as `(num, den)`.
pub fn hs(a1: (i64, i64), a2: (i64, i64), a0: (i64, i64), b: i64) -> Halfspace {
    Halfspace::new(rat(a1.0, a1.1), rat(a2.0, a2.1), rat(a0.0, a0.1), int(b))
}

/// Membership recomputed from the rows.
pub fn inside(region: &Region, p: &DofPoint) -> bool {
    let x = p.to_array();
    rows_of(region).iter().all(|(a, b)| {
        a[0].clone() * x[0].clone() + a[1].clone() * x[1].clone() + a[2].clone() * x[2].clone()
            <= *b
    })
}

pub fn grid(max: usize, normalized_only: bool) -> Vec<AntennaConfig> {
    let mut out = Vec::new();
    for m in 1..=max {
        for n1 in 1..=max {
            for n2 in 1..=max {
                if !normalized_only || n1 >= n2 {
                    out.push(cfg(m, n1, n2));
                }
            }
        }
    }
    out
}

pub fn coord_of(i: usize) -> Coord {
    Coord::ALL[i]
}

/// Rank by textbook Gaussian elimination over the rationals.
pub fn rank_oracle(m: &bcdof::linalg::GenericMatrix) -> usize {
    let mut a: Vec<Vec<Rational>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    let (rows, cols) = m.shape();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone() / a[r][c].clone();
            for j in c..cols {
                let v = a[r][j].clone() * f.clone();
                a[i][j] -= v;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}
