//! Exact rational matrices, fraction-free rank, nullspaces and seeded
//! generic channel sampling.

use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::{lcm_of_denominators, to_f64, Rational};
use crate::scenario::{AntennaConfig, Receiver};

/// Dense row-major matrix over the rationals. Zero-sized shapes are allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GenericMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for GenericMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GenericMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(crate::rational::format).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl GenericMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Panics if the rows have unequal lengths.
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| {
            Rational::from_integer(BigInt::from(rows[i][j]))
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &GenericMatrix) -> GenericMatrix {
        assert_eq!(
            self.cols,
            other.rows,
            "shape mismatch {:?} * {:?}",
            self.shape(),
            other.shape()
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &GenericMatrix) -> GenericMatrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn hstack_all(parts: &[&GenericMatrix], rows: usize) -> GenericMatrix {
        parts
            .iter()
            .fold(Self::zeros(rows, 0), |acc, p| acc.hstack(p))
    }

    pub fn vstack(&self, other: &GenericMatrix) -> GenericMatrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> GenericMatrix {
        Self::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    pub fn column_range(&self, start: usize, end: usize) -> GenericMatrix {
        Self::from_fn(self.rows, end - start, |i, j| {
            self.get(i, start + j).clone()
        })
    }

    pub fn row_range(&self, start: usize, end: usize) -> GenericMatrix {
        Self {
            rows: end - start,
            cols: self.cols,
            data: self.data[start * self.cols..end * self.cols].to_vec(),
        }
    }

    pub fn set_block(&mut self, row: usize, col: usize, block: &GenericMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(row + i, col + j, block.get(i, j).clone());
            }
        }
    }

    pub fn block_diag(blocks: &[GenericMatrix]) -> GenericMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| to_f64(self.get(i, j)))
    }

    /// Each row multiplied by the lcm of its denominators.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = lcm_of_denominators(row);
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect()
    }

    /// Exact rank by fraction-free (Bareiss) elimination with full pivoting.
    pub fn rank(&self) -> usize {
        let mut a = self.integer_rows();
        let (n, m) = (self.rows, self.cols);
        let mut prev = BigInt::one();
        let mut r = 0;
        while r < n.min(m) {
            // full pivoting: smallest nonzero magnitude keeps entries short
            let mut best: Option<(usize, usize)> = None;
            for i in r..n {
                for j in r..m {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if a[bi][bj].abs() <= a[i][j].abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(r, pi);
            if pj != r {
                for row in a.iter_mut() {
                    row.swap(r, pj);
                }
            }
            for i in r + 1..n {
                for j in r + 1..m {
                    let v = &a[r][r] * &a[i][j] - &a[i][r] * &a[r][j];
                    a[i][j] = v / &prev;
                }
                a[i][r] = BigInt::zero();
            }
            prev = a[r][r].clone();
            r += 1;
        }
        r
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (GenericMatrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..a.cols {
                    a.data.swap(p * a.cols + j, r * a.cols + j);
                }
            }
            let inv = a.get(r, c).recip();
            for j in c..a.cols {
                let v = a.get(r, j) * &inv;
                a.set(r, j, v);
            }
            for i in 0..a.rows {
                if i == r || a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).clone();
                for j in c..a.cols {
                    let v = a.get(i, j) - &f * a.get(r, j);
                    a.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    /// Basis of the right kernel; columns are primitive integer vectors.
    pub fn nullspace_basis(&self) -> GenericMatrix {
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -red.get(row, f).clone();
            }
            for (i, x) in primitive(v).into_iter().enumerate() {
                out.set(i, k, x);
            }
        }
        out
    }

    /// Greedy left-to-right maximal set of linearly independent columns.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.rref().1
    }
}

/// Scales a rational vector to coprime integers.
fn primitive(v: Vec<Rational>) -> Vec<Rational> {
    let l = lcm_of_denominators(&v);
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v;
    }
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &g))
        .collect()
}

pub fn rank(m: &GenericMatrix) -> usize {
    m.rank()
}

pub fn nullspace_basis(m: &GenericMatrix) -> GenericMatrix {
    m.nullspace_basis()
}

/// 64-bit seed with a deterministic sub-seed derivation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RngSeed(pub u64);

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RngSeed {
    /// Independent child seed keyed by `tags` (trial index, slot, ...).
    pub fn derive(self, tags: &[u64]) -> RngSeed {
        let mut s = splitmix64(self.0);
        for &t in tags {
            s = splitmix64(s ^ splitmix64(t.wrapping_add(0x5851_f42d_4c95_7f2d)));
        }
        RngSeed(s)
    }

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

pub const SAMPLE_BOUND: i64 = 1 << 20;

/// I.i.d. integers uniform on `[-2^20, 2^20]`, a generic stand-in for
/// Gaussian entries under exact arithmetic.
pub fn sample_generic(rows: usize, cols: usize, seed: RngSeed) -> GenericMatrix {
    let mut rng = seed.rng();
    sample_with(rows, cols, &mut rng)
}

pub fn sample_with(rows: usize, cols: usize, rng: &mut impl Rng) -> GenericMatrix {
    GenericMatrix::from_fn(rows, cols, |_, _| {
        Rational::from_integer(BigInt::from(rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND)))
    })
}

/// Per-slot channels of one receiver and their block-diagonal lift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedChannel {
    pub per_slot: Vec<GenericMatrix>,
    pub block_diag: GenericMatrix,
}

impl LiftedChannel {
    pub fn from_slots(per_slot: Vec<GenericMatrix>) -> Self {
        let block_diag = GenericMatrix::block_diag(&per_slot);
        Self {
            per_slot,
            block_diag,
        }
    }

    pub fn slots(&self) -> usize {
        self.per_slot.len()
    }

    pub fn slot(&self, t: usize) -> &GenericMatrix {
        &self.per_slot[t]
    }
}

/// Independent generic channels for both receivers over `t` slots.
pub fn lift_channels(
    cfg: AntennaConfig,
    t: usize,
    seed: RngSeed,
) -> (LiftedChannel, LiftedChannel) {
    assert!(t >= 1, "need at least one slot");
    let draw = |rx: Receiver| {
        let n = cfg.n(rx);
        let tag = match rx {
            Receiver::One => 1,
            Receiver::Two => 2,
        };
        let blocks = (0..t)
            .map(|s| sample_generic(n, cfg.m, seed.derive(&[tag, s as u64])))
            .collect();
        LiftedChannel::from_slots(blocks)
    };
    (draw(Receiver::One), draw(Receiver::Two))
}

/// Relative singular-value threshold for [`float_rank`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolPolicy {
    /// Singular values at or below `σ_max · max(rows, cols) · rel` count as zero.
    pub rel: f64,
}

impl Default for TolPolicy {
    fn default() -> Self {
        Self {
            rel: 2f64.powi(-40),
        }
    }
}

/// Numerical rank from the SVD.
pub fn float_rank(m: &DMatrix<f64>, tol: TolPolicy) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    let cut = smax * m.nrows().max(m.ncols()) as f64 * tol.rel;
    sv.iter().filter(|&&s| s > cut).count()
}
