//! Monte-Carlo checks of the rank lemmas behind the converse proofs.
//!
//! Every "almost surely" statement is tested as "holds in every trial" with
//! integer channels drawn uniformly from `[-2^20, 2^20]`. By Schwartz–Zippel
//! a fixed polynomial condition of degree `k` fails on such a draw with
//! probability at most `k / 2^21`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{lift_channels, sample_with, GenericMatrix, LiftedChannel, RngSeed};
use crate::rational::Rational;
use crate::scenario::AntennaConfig;
use crate::schemes::{apply, check_decodability, Precoder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LemmaError {
    #[error("input violates rank(H1·V1)=m1")]
    Undecodable,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("infeasible block dimensions: {0}")]
    InfeasibleDims(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// Header line quoted by every report.
pub const SCHWARTZ_ZIPPEL_NOTE: &str =
    "exact integer trials, entries uniform on [-2^20, 2^20]; a degree-k genericity condition fails with probability <= k/2^21";

/// Record of one run of [`canonicalize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalizationLog {
    /// `m1(t)`: columns of the output living in slot `t`.
    pub per_slot: Vec<usize>,
    /// `rank(H2·V)` for the input, then after steps 1, 2 and 3 of every slot.
    pub h2_ranks: Vec<usize>,
}

impl CanonicalizationLog {
    pub fn is_monotone(&self) -> bool {
        self.h2_ranks.windows(2).all(|w| w[1] <= w[0])
    }
}

fn slot_rows(v: &GenericMatrix, m: usize, t: usize) -> GenericMatrix {
    v.row_range(t * m, (t + 1) * m)
}

fn zero_slot(v: &mut GenericMatrix, m: usize, t: usize) {
    for i in t * m..(t + 1) * m {
        for j in 0..v.cols() {
            v.set(i, j, Rational::zero());
        }
    }
}

/// Finished per-slot blocks placed on the diagonal, then the columns still
/// being processed.
fn assemble(
    done: &[GenericMatrix],
    m: usize,
    t_total: usize,
    work: &GenericMatrix,
) -> GenericMatrix {
    let cols: usize = done.iter().map(GenericMatrix::cols).sum();
    let mut out = GenericMatrix::zeros(t_total * m, cols);
    let mut c = 0;
    for (t, b) in done.iter().enumerate() {
        out.set_block(t * m, c, b);
        c += b.cols();
    }
    out.hstack(work)
}

/// Identity columns completing `basis` to a basis of the whole space,
/// chosen greedily from `e_0` upward.
fn complement(basis: &GenericMatrix) -> GenericMatrix {
    let n = basis.rows();
    let mut acc = basis.clone();
    let mut chosen = Vec::new();
    let eye = GenericMatrix::identity(n);
    for j in 0..n {
        if acc.cols() == n {
            break;
        }
        let trial = acc.hstack(&eye.column_range(j, j + 1));
        if trial.rank() == trial.cols() {
            acc = trial;
            chosen.push(j);
        }
    }
    eye.select_columns(&chosen)
}

/// Rewrites a precoder decodable at receiver 1 into block-diagonal form
/// slot by slot.
///
/// For slot `t`: (1) change basis so that a maximal independent set of
/// slot-`t` blocks comes first and the rest vanish in slot `t`; (2) split
/// those columns into the part in `null(H1(t))` and a complement; (3) keep
/// the complement as slot `t`'s block, drop it from later slots, and zero
/// the null-space part in slot `t`. Receiver 1's rank is preserved while
/// receiver 2's can only shrink.
pub fn canonicalize(
    v1: &GenericMatrix,
    h1: &LiftedChannel,
    h2: &LiftedChannel,
) -> Result<(GenericMatrix, CanonicalizationLog), LemmaError> {
    let t_total = h1.slots();
    if t_total == 0 || h2.slots() != t_total {
        return Err(LemmaError::ShapeMismatch(format!(
            "{} and {} slots",
            h1.slots(),
            h2.slots()
        )));
    }
    let m = h1.slot(0).cols();
    if v1.rows() != t_total * m {
        return Err(LemmaError::ShapeMismatch(format!(
            "V1 has {} rows, expected {}",
            v1.rows(),
            t_total * m
        )));
    }
    let m1 = v1.cols();
    if apply(h1, v1).rank() != m1 {
        return Err(LemmaError::Undecodable);
    }
    let h2_rank = |done: &[GenericMatrix], work: &GenericMatrix| {
        apply(h2, &assemble(done, m, t_total, work)).rank()
    };
    let mut log = CanonicalizationLog {
        per_slot: Vec::with_capacity(t_total),
        h2_ranks: vec![apply(h2, v1).rank()],
    };
    let mut done: Vec<GenericMatrix> = Vec::with_capacity(t_total);
    let mut work = v1.clone();
    for t in 0..t_total {
        let k = work.cols();
        // step 1
        let b = slot_rows(&work, m, t);
        let piv = b.independent_columns();
        let a = piv.len();
        let null = b.nullspace_basis();
        let x = GenericMatrix::identity(k)
            .select_columns(&piv)
            .hstack(&null);
        work = work.mul(&x);
        log.h2_ranks.push(h2_rank(&done, &work));

        // step 2
        let ra = work.column_range(0, a);
        let rb = work.column_range(a, k);
        let g = h1.slot(t).mul(&slot_rows(&ra, m, t));
        let nn = g.nullspace_basis();
        let c = complement(&nn);
        let rc = ra.mul(&c);
        let mut rd = ra.mul(&nn);
        log.h2_ranks
            .push(h2_rank(&done, &rc.hstack(&rd).hstack(&rb)));

        // step 3
        done.push(slot_rows(&rc, m, t));
        zero_slot(&mut rd, m, t);
        work = rd.hstack(&rb);
        log.h2_ranks.push(h2_rank(&done, &work));
        log.per_slot.push(c.cols());
    }
    debug_assert!(work.is_zero());
    if log.per_slot.iter().sum::<usize>() != m1 {
        return Err(LemmaError::Undecodable);
    }
    Ok((
        assemble(&done, m, t_total, &GenericMatrix::zeros(t_total * m, 0)),
        log,
    ))
}

/// Families of receiver-1-decodable precoders drawn for the ratio check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrecoderFamily {
    /// Generic columns spread over every slot.
    Generic,
    /// Generic columns plus, in every slot, random components inside
    /// `null(H1(t))` (uses receiver-1 CSI).
    ZfMixture,
    /// Independent generic blocks of random width up to `min(M, N1)` per slot.
    BlockDiagonal,
}

impl PrecoderFamily {
    pub const ALL: [PrecoderFamily; 3] = [
        PrecoderFamily::Generic,
        PrecoderFamily::ZfMixture,
        PrecoderFamily::BlockDiagonal,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PrecoderFamily::Generic => "generic",
            PrecoderFamily::ZfMixture => "zf-mixture",
            PrecoderFamily::BlockDiagonal => "block-diagonal",
        }
    }
}

impl fmt::Display for PrecoderFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Draws `V1` for the given channels; receiver-1 decodability is checked by
/// the caller.
pub fn draw_precoder(
    family: PrecoderFamily,
    cfg: AntennaConfig,
    h1: &LiftedChannel,
    rng: &mut ChaCha8Rng,
) -> GenericMatrix {
    let m = cfg.m;
    let t_total = h1.slots();
    let a = cfg.min_m_n1();
    match family {
        PrecoderFamily::Generic => {
            let m1 = rng.gen_range(1..=t_total * a);
            sample_with(t_total * m, m1, rng)
        }
        PrecoderFamily::ZfMixture => {
            let m1 = rng.gen_range(1..=t_total * a);
            let mut v = sample_with(t_total * m, m1, rng);
            for t in 0..t_total {
                let null = h1.slot(t).nullspace_basis();
                if null.cols() == 0 {
                    continue;
                }
                let extra = null.mul(&sample_with(null.cols(), m1, rng));
                for i in 0..m {
                    for j in 0..m1 {
                        let s = v.get(t * m + i, j) + extra.get(i, j);
                        v.set(t * m + i, j, s);
                    }
                }
            }
            v
        }
        PrecoderFamily::BlockDiagonal => {
            let mut widths: Vec<usize> = (0..t_total).map(|_| rng.gen_range(0..=a)).collect();
            if widths.iter().all(|&w| w == 0) {
                widths[0] = 1;
            }
            let blocks: Vec<GenericMatrix> =
                widths.iter().map(|&w| sample_with(m, w, rng)).collect();
            GenericMatrix::block_diag(&blocks)
        }
    }
}

fn draw_decodable(
    family: PrecoderFamily,
    cfg: AntennaConfig,
    h1: &LiftedChannel,
    rng: &mut ChaCha8Rng,
) -> Option<GenericMatrix> {
    (0..32).find_map(|_| {
        let v = draw_precoder(family, cfg, h1, rng);
        (apply(h1, &v).rank() == v.cols()).then_some(v)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyStats {
    pub family: PrecoderFamily,
    pub trials: usize,
    /// Trials where no decodable precoder was found.
    pub rejected: usize,
    pub max_ratio: Rational,
    /// Symbol count and block length of the first trial reaching `max_ratio`.
    pub argmax: Option<(usize, usize)>,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma1Report {
    pub cfg: AntennaConfig,
    pub t_max: usize,
    /// `min(M,N1)/N2` when `N2 ≤ min(M,N1)`; otherwise the ratio must be 1.
    pub bound: Rational,
    pub ratio_must_be_one: bool,
    pub families: Vec<FamilyStats>,
}

impl Lemma1Report {
    pub fn violations(&self) -> usize {
        self.families.iter().map(|f| f.violations).sum()
    }

    pub fn max_ratio(&self) -> Rational {
        self.families
            .iter()
            .map(|f| f.max_ratio.clone())
            .max()
            .unwrap_or_else(|| Rational::from_integer(0.into()))
    }
}

fn ratio(a: usize, b: usize) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b.max(1)))
}

/// Checks `rank(H1·V1)/rank(H2·V1) ≤ min(M,N1)/N2` for decodable `V1`
/// (equal to 1 when `N2 > min(M,N1)`), `trials` draws per family with the
/// block length uniform on `1..=t_max`.
pub fn lemma1_ratio_check(
    cfg: AntennaConfig,
    t_max: usize,
    trials: usize,
    seed: RngSeed,
    families: &[PrecoderFamily],
) -> Lemma1Report {
    let a = cfg.min_m_n1();
    let ratio_must_be_one = cfg.n2 > a;
    let bound = if ratio_must_be_one {
        Rational::from_integer(1.into())
    } else {
        ratio(a, cfg.n2)
    };
    let stats = families
        .iter()
        .enumerate()
        .map(|(fi, &family)| {
            let outcomes: Vec<Option<(Rational, usize, usize)>> = (0..trials)
                .into_par_iter()
                .map(|i| {
                    let s = seed.derive(&[fi as u64, i as u64]);
                    let mut rng = s.derive(&[2]).rng();
                    let t = rng.gen_range(1..=t_max.max(1));
                    let (h1, h2) = lift_channels(cfg, t, s.derive(&[0]));
                    let v = draw_decodable(family, cfg, &h1, &mut rng)?;
                    let r1 = apply(&h1, &v).rank();
                    let r2 = apply(&h2, &v).rank();
                    Some((ratio(r1, r2), v.cols(), t))
                })
                .collect();
            let mut st = FamilyStats {
                family,
                trials,
                rejected: 0,
                max_ratio: Rational::from_integer(0.into()),
                argmax: None,
                violations: 0,
            };
            for o in outcomes {
                let Some((r, m1, t)) = o else {
                    st.rejected += 1;
                    continue;
                };
                let bad = if ratio_must_be_one {
                    r != bound
                } else {
                    r > bound
                };
                if bad {
                    st.violations += 1;
                }
                if r > st.max_ratio {
                    st.max_ratio = r;
                    st.argmax = Some((m1, t));
                }
            }
            st
        })
        .collect();
    Lemma1Report {
        cfg,
        t_max,
        bound,
        ratio_must_be_one,
        families: stats,
    }
}

/// Property counters for [`canonicalization_check`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CanonicalizationReport {
    pub trials: usize,
    pub not_block_diagonal: usize,
    pub rank_deficient_block: usize,
    /// `rank(H1(t)·V̂(t)) ≠ m1(t)` for some slot.
    pub per_slot_rank: usize,
    /// `rank(H1·V̂) ≠ m1`.
    pub eq8: usize,
    /// `rank(H2·V̂) > rank(H2·V1)`.
    pub eq9: usize,
    pub non_monotone_log: usize,
    /// `rank(H2(t)·V̂(t)) ≠ min(m1(t), N2)` for some slot.
    pub dichotomy: usize,
    /// `Σ rank(H2(t)V̂(t)) < N2/min(M,N1) · Σ m1(t)` (only when `N2 ≤ min(M,N1)`).
    pub eq17: usize,
    pub errors: usize,
    /// Largest `rank(H2·V1) − rank(H2·V̂)` seen.
    pub max_rank_drop: usize,
}

impl CanonicalizationReport {
    pub fn violations(&self) -> usize {
        self.not_block_diagonal
            + self.rank_deficient_block
            + self.per_slot_rank
            + self.eq8
            + self.eq9
            + self.non_monotone_log
            + self.dichotomy
            + self.eq17
            + self.errors
    }
}

/// Counts contract violations of [`canonicalize`] on one input.
fn check_canonical(
    cfg: AntennaConfig,
    v1: &GenericMatrix,
    h1: &LiftedChannel,
    h2: &LiftedChannel,
) -> CanonicalizationReport {
    let mut r = CanonicalizationReport {
        trials: 1,
        ..Default::default()
    };
    let (vh, log) = match canonicalize(v1, h1, h2) {
        Ok(x) => x,
        Err(_) => {
            r.errors = 1;
            return r;
        }
    };
    let m = cfg.m;
    let mut col = 0;
    let mut h2_sum = 0;
    let mut block_diag_ok = true;
    for (t, &w) in log.per_slot.iter().enumerate() {
        for j in col..col + w {
            for i in 0..vh.rows() {
                if i / m != t && !vh.get(i, j).is_zero() {
                    block_diag_ok = false;
                }
            }
        }
        let block = vh.row_range(t * m, (t + 1) * m).column_range(col, col + w);
        if block.rank() != w {
            r.rank_deficient_block = 1;
        }
        if h1.slot(t).mul(&block).rank() != w {
            r.per_slot_rank = 1;
        }
        let r2 = h2.slot(t).mul(&block).rank();
        if r2 != w.min(cfg.n2) {
            r.dichotomy = 1;
        }
        h2_sum += r2;
        col += w;
    }
    r.not_block_diagonal = usize::from(!block_diag_ok || col != v1.cols());
    r.eq8 = usize::from(apply(h1, &vh).rank() != v1.cols());
    let before = apply(h2, v1).rank();
    let after = apply(h2, &vh).rank();
    r.eq9 = usize::from(after > before);
    r.max_rank_drop = before.saturating_sub(after);
    r.non_monotone_log = usize::from(!log.is_monotone());
    let a = cfg.min_m_n1();
    if cfg.n2 <= a {
        r.eq17 = usize::from(h2_sum * a < cfg.n2 * v1.cols());
    }
    r
}

/// Runs [`canonicalize`] on random decodable inputs, cycling through the
/// precoder families, and counts every contract violation.
pub fn canonicalization_check(
    cfg: AntennaConfig,
    t_max: usize,
    trials: usize,
    seed: RngSeed,
) -> CanonicalizationReport {
    let parts: Vec<CanonicalizationReport> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let s = seed.derive(&[i as u64]);
            let mut rng = s.derive(&[2]).rng();
            let t = rng.gen_range(1..=t_max.max(1));
            let (h1, h2) = lift_channels(cfg, t, s.derive(&[0]));
            let family = PrecoderFamily::ALL[i % PrecoderFamily::ALL.len()];
            match draw_decodable(family, cfg, &h1, &mut rng) {
                Some(v) => check_canonical(cfg, &v, &h1, &h2),
                None => CanonicalizationReport {
                    trials: 1,
                    errors: 1,
                    ..Default::default()
                },
            }
        })
        .collect();
    parts
        .into_iter()
        .fold(CanonicalizationReport::default(), |mut acc, p| {
            acc.trials += p.trials;
            acc.not_block_diagonal += p.not_block_diagonal;
            acc.rank_deficient_block += p.rank_deficient_block;
            acc.per_slot_rank += p.per_slot_rank;
            acc.eq8 += p.eq8;
            acc.eq9 += p.eq9;
            acc.non_monotone_log += p.non_monotone_log;
            acc.dichotomy += p.dichotomy;
            acc.eq17 += p.eq17;
            acc.errors += p.errors;
            acc.max_rank_drop = acc.max_rank_drop.max(p.max_rank_drop);
            acc
        })
}

/// Block layout for the block-rank checks: `X` has `rows[i] × cols[j]`
/// blocks and `H_i` is `h_rows[i] × rows[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockShape {
    pub name: String,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub h_rows: Vec<usize>,
    /// Force the off-diagonal blocks of `X` to zero.
    pub zero_off_diagonal: bool,
}

impl BlockShape {
    pub fn new(name: &str, rows: &[usize], cols: &[usize], h_rows: &[usize]) -> Self {
        Self {
            name: name.to_string(),
            rows: rows.to_vec(),
            cols: cols.to_vec(),
            h_rows: h_rows.to_vec(),
            zero_off_diagonal: false,
        }
    }

    pub fn with_zero_off_diagonal(mut self) -> Self {
        self.zero_off_diagonal = true;
        self
    }

    pub fn validate(&self) -> Result<(), LemmaError> {
        let n = self.rows.len();
        if n < 2 || self.cols.len() != n || self.h_rows.len() != n {
            return Err(LemmaError::InfeasibleDims(format!(
                "{}: need at least 2 matching block rows/columns",
                self.name
            )));
        }
        if self
            .rows
            .iter()
            .chain(&self.cols)
            .chain(&self.h_rows)
            .any(|&x| x == 0)
        {
            return Err(LemmaError::InfeasibleDims(format!(
                "{}: zero-sized block",
                self.name
            )));
        }
        let r: usize = self.rows.iter().sum();
        let c: usize = self.cols.iter().sum();
        if c > r {
            return Err(LemmaError::InfeasibleDims(format!(
                "{}: X is {r}x{c} and cannot have full column rank",
                self.name
            )));
        }
        if self.zero_off_diagonal && self.rows.iter().zip(&self.cols).any(|(r, c)| c > r) {
            return Err(LemmaError::InfeasibleDims(format!(
                "{}: a diagonal block has more columns than rows",
                self.name
            )));
        }
        Ok(())
    }

    /// Three two-block shapes.
    pub fn lemma2_presets() -> Vec<BlockShape> {
        vec![
            BlockShape::new("tall-2x2", &[4, 3], &[2, 2], &[2, 2]),
            BlockShape::new("wide-h", &[4, 4], &[2, 1], &[3, 3]),
            BlockShape::new("block-diagonal", &[3, 3], &[2, 1], &[2, 2]).with_zero_off_diagonal(),
        ]
    }

    /// Three three-block shapes.
    pub fn remark3_presets() -> Vec<BlockShape> {
        vec![
            BlockShape::new("unit-columns", &[3, 3, 3], &[1, 1, 1], &[2, 2, 2]),
            BlockShape::new("uneven-columns", &[4, 4, 4], &[2, 1, 1], &[3, 2, 2]),
            BlockShape::new("uneven-rows", &[2, 3, 4], &[1, 1, 2], &[2, 2, 3]),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma2Report {
    pub shape: BlockShape,
    pub trials: usize,
    /// `rank(full) < rank(H1·X11) + rank(lower-right block)`.
    pub violations: usize,
    /// Trials where the column-split identity was applicable.
    pub split_checked: usize,
    pub split_violations: usize,
    /// Trials where `X` came out rank deficient and was redrawn too often.
    pub rejected: usize,
    /// How often the inequality was tight.
    pub equalities: usize,
}

/// Samples full-column-rank `X` and generic `H_i` and checks
/// `rank([H_i X_ij]) ≥ rank(H1 X11) + rank([H_i X_ij]_{i,j≥2})`.
///
/// For two block columns it also checks that the column blocks
/// `[H_i X_i1]` and `[H_i X_i2]` span independent subspaces, whenever their
/// ranks fit inside the row space of `diag(H_i)` (otherwise the
/// identity is false for dimension reasons and the trial is skipped).
pub fn lemma2_check(
    shape: &BlockShape,
    trials: usize,
    seed: RngSeed,
) -> Result<Lemma2Report, LemmaError> {
    shape.validate()?;
    let n = shape.rows.len();
    let row_off: Vec<usize> = prefix(&shape.rows);
    let col_off: Vec<usize> = prefix(&shape.cols);
    let h_off: Vec<usize> = prefix(&shape.h_rows);
    let (rt, ct, ht) = (row_off[n], col_off[n], h_off[n]);
    let outcomes: Vec<Option<(bool, Option<bool>, bool)>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed.derive(&[i as u64]).rng();
            let x = (0..16).find_map(|_| {
                let mut x = sample_with(rt, ct, &mut rng);
                if shape.zero_off_diagonal {
                    for bi in 0..n {
                        for bj in 0..n {
                            if bi == bj {
                                continue;
                            }
                            let z = GenericMatrix::zeros(shape.rows[bi], shape.cols[bj]);
                            x.set_block(row_off[bi], col_off[bj], &z);
                        }
                    }
                }
                (x.rank() == ct).then_some(x)
            })?;
            let hs: Vec<GenericMatrix> = (0..n)
                .map(|b| sample_with(shape.h_rows[b], shape.rows[b], &mut rng))
                .collect();
            let hdiag = GenericMatrix::block_diag(&hs);
            let full = hdiag.mul(&x);
            let total = full.rank();
            let h1x11 = full
                .row_range(0, h_off[1])
                .column_range(0, col_off[1])
                .rank();
            let lower = full
                .row_range(h_off[1], ht)
                .column_range(col_off[1], ct)
                .rank();
            let ok = total >= h1x11 + lower;
            let split = (n == 2).then(|| {
                let left = full.column_range(0, col_off[1]).rank();
                let right = full.column_range(col_off[1], ct).rank();
                (left + right <= hdiag.rank()).then_some(total == left + right)
            });
            Some((ok, split.flatten(), total == h1x11 + lower))
        })
        .collect();
    let mut rep = Lemma2Report {
        shape: shape.clone(),
        trials,
        violations: 0,
        split_checked: 0,
        split_violations: 0,
        rejected: 0,
        equalities: 0,
    };
    for o in outcomes {
        let Some((ok, split, eq)) = o else {
            rep.rejected += 1;
            continue;
        };
        rep.violations += usize::from(!ok);
        rep.equalities += usize::from(eq);
        if let Some(s) = split {
            rep.split_checked += 1;
            rep.split_violations += usize::from(!s);
        }
    }
    Ok(rep)
}

fn prefix(v: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(v.len() + 1);
    out.push(0);
    for x in v {
        out.push(out.last().unwrap() + x);
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConverseReport {
    pub trials: usize,
    pub accepted: usize,
    pub rejected: usize,
    /// `rank(H2V1) + rank(H2V2) > T·N2`
    pub dimension_violations: usize,
    /// `rank(H1V1) ≠ m1`
    pub rx1_violations: usize,
    /// `rank(H2V2) ≠ m2`
    pub rx2_violations: usize,
    /// `m1/min(M,N1) + m2/N2 > T`
    pub weighted_violations: usize,
    /// `rank(H2V1) < m1·N2/min(M,N1)`
    pub eq22_violations: usize,
    /// Time-division schemes checked and how many met the weighted bound
    /// with equality.
    pub saturation_checked: usize,
    pub saturation_exact: usize,
    /// Largest `m1/min(M,N1) + m2/N2` over accepted trials.
    pub max_weighted: Rational,
}

impl ConverseReport {
    pub fn violations(&self) -> usize {
        self.dimension_violations
            + self.rx1_violations
            + self.rx2_violations
            + self.weighted_violations
            + self.eq22_violations
            + (self.saturation_checked - self.saturation_exact)
    }
}

/// Random private-message precoders that may use receiver-1 CSI but not
/// receiver-2 CSI.
fn draw_private_pair(
    cfg: AntennaConfig,
    h1: &LiftedChannel,
    family: usize,
    rng: &mut ChaCha8Rng,
) -> (GenericMatrix, GenericMatrix) {
    let (m, t_total) = (cfg.m, h1.slots());
    let a = cfg.min_m_n1();
    let n2 = cfg.n2;
    let mut v1_blocks = Vec::new();
    let mut v2_blocks = Vec::new();
    let zf = |t: usize, k: usize, rng: &mut ChaCha8Rng| {
        let null = h1.slot(t).nullspace_basis();
        let k = k.min(null.cols());
        null.mul(&sample_with(null.cols(), k, rng))
    };
    if family == 0 {
        for t in 0..t_total {
            let (b1, b2) = match rng.gen_range(0..3) {
                0 => (
                    sample_with(m, rng.gen_range(1..=a), rng),
                    GenericMatrix::zeros(m, 0),
                ),
                1 => (
                    GenericMatrix::zeros(m, 0),
                    sample_with(m, rng.gen_range(1..=n2), rng),
                ),
                _ => {
                    let k2 = rng.gen_range(1..=n2.saturating_sub(1).max(1));
                    let k1 = rng.gen_range(0..=n2.saturating_sub(k2).min(a));
                    (sample_with(m, k1, rng), zf(t, k2, rng))
                }
            };
            v1_blocks.push(b1);
            v2_blocks.push(b2);
        }
        (
            GenericMatrix::block_diag(&v1_blocks),
            GenericMatrix::block_diag(&v2_blocks),
        )
    } else {
        let m1 = rng.gen_range(1..=t_total * a);
        let v1 = sample_with(t_total * m, m1, rng);
        for t in 0..t_total {
            let k = rng.gen_range(0..=n2);
            v2_blocks.push(zf(t, k, rng));
        }
        (v1, GenericMatrix::block_diag(&v2_blocks))
    }
}

/// Checks the dimension-counting chain of the private-message converse on
/// random decodable `(V1, V2)` pairs, then confirms that time-division
/// between the two single-user corners meets the weighted bound exactly.
pub fn theorem2_converse_check(
    cfg: AntennaConfig,
    t: usize,
    trials: usize,
    seed: RngSeed,
) -> Result<ConverseReport, LemmaError> {
    if cfg.m <= cfg.n2 {
        return Err(LemmaError::Precondition(format!(
            "{cfg}: needs M > N2, otherwise the bound is trivial"
        )));
    }
    if t == 0 {
        return Err(LemmaError::Precondition(
            "block length must be positive".into(),
        ));
    }
    let a = cfg.min_m_n1();
    let n2 = cfg.n2;
    let weighted =
        |m1: usize, m2: usize| Rational::new(BigInt::from(m1 * n2 + m2 * a), BigInt::from(a * n2));
    let z = |rows: usize| GenericMatrix::zeros(rows, 0);
    let outcomes: Vec<Option<[usize; 5]>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let s = seed.derive(&[i as u64]);
            let (h1, h2) = lift_channels(cfg, t, s.derive(&[0]));
            let mut rng = s.derive(&[1]).rng();
            for _ in 0..64 {
                let (v1, v2) = draw_private_pair(cfg, &h1, i % 2, &mut rng);
                if v1.cols() + v2.cols() == 0 {
                    continue;
                }
                let p = Precoder::new(t, cfg.m, v1, v2, z(t * cfg.m)).expect("shapes agree");
                let d = check_decodability(&h1, &h2, &p).expect("shapes agree");
                if !d.verdict {
                    continue;
                }
                let r1 = apply(&h1, &p.v1).rank();
                let r21 = apply(&h2, &p.v1).rank();
                let r22 = apply(&h2, &p.v2).rank();
                return Some([p.m1(), p.m2(), r1, r21, r22]);
            }
            None
        })
        .collect();
    let mut rep = ConverseReport {
        trials,
        max_weighted: Rational::from_integer(0.into()),
        ..Default::default()
    };
    let bound_t = Rational::from_integer(BigInt::from(t));
    for o in outcomes {
        let Some([m1, m2, r1, r21, r22]) = o else {
            rep.rejected += 1;
            continue;
        };
        rep.accepted += 1;
        rep.dimension_violations += usize::from(r21 + r22 > t * n2);
        rep.rx1_violations += usize::from(r1 != m1);
        rep.rx2_violations += usize::from(r22 != m2);
        let w = weighted(m1, m2);
        rep.weighted_violations += usize::from(w > bound_t);
        rep.eq22_violations += usize::from(r21 * a < m1 * n2);
        if w > rep.max_weighted {
            rep.max_weighted = w;
        }
    }
    // k slots of min(M,N1) streams for receiver 1, the rest N2 streams for
    // receiver 2
    for k in 0..=t {
        let (h1, h2) = lift_channels(cfg, t, seed.derive(&[u64::MAX, k as u64]));
        let mut rng = seed.derive(&[u64::MAX - 1, k as u64]).rng();
        let b1: Vec<GenericMatrix> = (0..t)
            .map(|s| sample_with(cfg.m, if s < k { a } else { 0 }, &mut rng))
            .collect();
        let b2: Vec<GenericMatrix> = (0..t)
            .map(|s| sample_with(cfg.m, if s < k { 0 } else { n2 }, &mut rng))
            .collect();
        let p = Precoder::new(
            t,
            cfg.m,
            GenericMatrix::block_diag(&b1),
            GenericMatrix::block_diag(&b2),
            z(t * cfg.m),
        )
        .expect("shapes agree");
        let d = check_decodability(&h1, &h2, &p).expect("shapes agree");
        rep.saturation_checked += 1;
        rep.saturation_exact += usize::from(d.verdict && weighted(p.m1(), p.m2()) == bound_t);
    }
    Ok(rep)
}
