//! Brute-force ground truth over small prime fields.
//!
//! Every matrix `X` of the prescribed rank is enumerated (or, over budget, a
//! seeded sample of them), the objective rank is computed with the independent
//! kernel in [`kernel`], and the observed extremes are compared with the closed
//! forms in [`crate::formulas`].

pub mod kernel;
pub mod sweep;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::formulas::{self, ConstraintKind, ExtremalResult, RankConstraint, ShiftedProfile};
use crate::matrix::Matrix;
use crate::profile::{Dims, RankProfile};

pub use kernel::{Gf, Small};
pub use sweep::{sweep, sweep_with, DimBounds, SweepRecord, SweepSummary};

/// Default cap on the number of matrices one exhaustive enumeration may visit.
pub const DEFAULT_CAP: u128 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetMode {
    /// Visit every candidate, or fail with [`Error::Budget`].
    Exhaustive,
    /// Draw `samples` seeded candidates. Observed extremes are then only bounds.
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub mode: BudgetMode,
    pub cap: u128,
    pub samples: usize,
    pub seed: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            mode: BudgetMode::Exhaustive,
            cap: DEFAULT_CAP,
            samples: 1000,
            seed: 0,
        }
    }
}

impl EnumerationBudget {
    pub fn exhaustive(cap: u128) -> Self {
        EnumerationBudget {
            cap,
            ..Default::default()
        }
    }

    pub fn sampled(samples: usize, seed: u64) -> Self {
        EnumerationBudget {
            mode: BudgetMode::Sampled,
            samples,
            seed,
            ..Default::default()
        }
    }

    /// Errors when an exhaustive pass over `required` candidates is over the cap.
    pub fn admit(&self, required: u128) -> Result<()> {
        if self.mode == BudgetMode::Exhaustive && required > self.cap {
            return Err(Error::Budget { required, cap: self.cap });
        }
        Ok(())
    }
}

/// `p^(rows·cols)`, saturating.
pub fn space_size(p: u32, rows: usize, cols: usize) -> u128 {
    (0..rows * cols).fold(1u128, |acc, _| acc.saturating_mul(u128::from(p)))
}

/// Which objective an oracle run evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `A + BXC`, `r(X) = t`.
    Fixed,
    /// `A + BXC`, `s ≤ r(X) ≤ t`.
    Range,
    /// `[[A, B], [C, X]]`.
    Completion,
    /// `BXC` with `A = 0`.
    BxcOnly,
    /// `[[A − X, B − X], [C − X, D − X]]`.
    Shifted,
    /// `A + X`.
    Sum,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Fixed,
        Family::Range,
        Family::Completion,
        Family::BxcOnly,
        Family::Shifted,
        Family::Sum,
    ];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Fixed => "fixed",
            Family::Range => "range",
            Family::Completion => "completion",
            Family::BxcOnly => "bxc-only",
            Family::Shifted => "shifted",
            Family::Sum => "sum",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.to_string() == s || f.to_string().replace('-', "_") == s)
            .ok_or_else(|| {
                Error::Precondition(format!(
                    "unknown family `{s}` (expected fixed, range, completion, bxc-only, shifted or sum)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Exhaustive, and both observed extremes equal the formula.
    Match,
    /// Exhaustive, and at least one extreme (or a derived predicate) differs.
    Mismatch,
    /// Sampled, and every observed rank lies inside the formula's interval.
    WithinBounds,
    /// Sampled, and some observed rank escapes the formula's interval.
    OutOfBounds,
}

impl Verdict {
    pub fn is_failure(&self) -> bool {
        matches!(self, Verdict::Mismatch | Verdict::OutOfBounds)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Match => "match",
            Verdict::Mismatch => "mismatch",
            Verdict::WithinBounds => "within-bounds",
            Verdict::OutOfBounds => "out-of-bounds",
        })
    }
}

#[derive(Debug, Clone)]
pub struct OracleReport<F: Field = PrimeField> {
    pub family: Family,
    pub constraint: RankConstraint,
    pub max_observed: usize,
    pub min_observed: usize,
    /// Lexicographically first `X` attaining `max_observed` (exhaustive mode).
    pub max_witness: Matrix<F>,
    pub min_witness: Matrix<F>,
    pub formula_max: usize,
    pub formula_min: usize,
    pub evaluated: u64,
    pub verdict: Verdict,
    /// The instance lies in the GF(2) exclusion (see [`gf2_max_exclusion`]).
    pub excluded: bool,
    /// Field, shapes and entries: enough to rebuild the instance.
    pub fingerprint: String,
}

// ---------------------------------------------------------------------------
// The GF(2) exclusion

/// Over GF(2) the maximal rank of `A + BXC` is not attained exactly when the
/// decomposition has `u = 1`, `s1 = s2 = 0` and every admissible rank exceeds
/// `z = p + q − 2r(M) + r(G) + r(H)`.
///
/// In that case the core left over after the decomposition is `1 + x` with `x`
/// a scalar that must be nonzero, and GF(2) has no such `x` with `1 + x ≠ 0`.
/// Over any larger field, and for every minimum, the formulas are exact.
/// `lowest` is `t` for a fixed rank and `s` for a range.
pub fn gf2_max_exclusion(characteristic: u32, prof: &RankProfile, dims: Dims, lowest: usize) -> bool {
    if characteristic != 2 {
        return false;
    }
    let (ra, rg, rh, rm) = (prof.r_a as i64, prof.r_g as i64, prof.r_h as i64, prof.r_m as i64);
    let u = rm + ra - rg - rh;
    let s1 = rh - ra;
    let s2 = rg - ra;
    let z = dims.p as i64 + dims.q as i64 - 2 * rm + rg + rh;
    u == 1 && s1 == 0 && s2 == 0 && lowest as i64 > z
}

/// `[[A, B], [C, X]] = [[A, B], [C, 0]] + [0; I] X [0, I]`, as a profile and shape.
pub fn completion_as_bxc(prof: &RankProfile, dims: Dims) -> (RankProfile, Dims) {
    let Dims { m, n, p, q } = dims;
    (
        RankProfile {
            r_a: prof.r_m,
            r_g: q + prof.r_g,
            r_h: p + prof.r_h,
            r_m: p + q + prof.r_a,
        },
        Dims::new(m + q, n + p, q, p),
    )
}

/// `[[A − X, B − X], [C − X, D − X]] = M − [I; I] X [I, I]`, as a profile and shape.
pub fn shifted_as_bxc(prof: &ShiftedProfile, m: usize, n: usize) -> (RankProfile, Dims) {
    (
        RankProfile {
            r_a: prof.r_m,
            r_g: m + prof.r_g,
            r_h: n + prof.r_h,
            r_m: m + n + prof.r_e,
        },
        Dims::new(2 * m, 2 * n, m, n),
    )
}

/// `A + X = A + I X I`.
pub fn sum_as_bxc(r_a: usize, m: usize, n: usize) -> (RankProfile, Dims) {
    (
        RankProfile {
            r_a,
            r_g: m,
            r_h: n,
            r_m: m + n,
        },
        Dims::new(m, n, m, n),
    )
}

// ---------------------------------------------------------------------------
// Enumeration

/// Every matrix of a given shape over GF(p), grouped by rank, each group in
/// lexicographic order of the row-major entries.
#[derive(Debug)]
pub struct RankTable {
    pub rows: usize,
    pub cols: usize,
    pub by_rank: Vec<Vec<Small>>,
}

impl RankTable {
    fn build(gf: &Gf, rows: usize, cols: usize) -> Self {
        let mut by_rank = vec![Vec::new(); rows.min(cols) + 1];
        let total = space_size(u32::from(gf.p()), rows, cols) as u64;
        for code in 0..total {
            let x = Small::from_code(rows, cols, gf.p(), code);
            by_rank[x.rank(gf)].push(x);
        }
        RankTable { rows, cols, by_rank }
    }
}

type TableKey = (u8, usize, usize);

/// Shared, lazily built [`RankTable`]s.
pub fn rank_table(gf: &Gf, rows: usize, cols: usize, budget: &EnumerationBudget) -> Result<Arc<RankTable>> {
    EnumerationBudget {
        mode: BudgetMode::Exhaustive,
        ..*budget
    }
    .admit(space_size(u32::from(gf.p()), rows, cols))?;
    static TABLES: OnceLock<Mutex<HashMap<TableKey, Arc<RankTable>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(Default::default);
    let key = (gf.p(), rows, cols);
    if let Some(t) = tables.lock().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let table = Arc::new(RankTable::build(gf, rows, cols));
    Ok(tables.lock().unwrap().entry(key).or_insert(table).clone())
}

/// All `rows × cols` matrices of rank `t` over the field, in lexicographic order.
pub fn enumerate_fixed_rank(
    field: PrimeField,
    rows: usize,
    cols: usize,
    t: usize,
    budget: &EnumerationBudget,
) -> Result<Vec<Matrix<PrimeField>>> {
    RankConstraint::fixed(t).check(rows.min(cols))?;
    let gf = Gf::new(field.modulus())?;
    let table = rank_table(&gf, rows, cols, budget)?;
    Ok(table.by_rank[t].iter().map(|x| x.to_matrix(field)).collect())
}

/// A random `rows × cols` matrix of rank exactly `t`.
pub fn random_fixed_rank<R: Rng + ?Sized>(gf: &Gf, rows: usize, cols: usize, t: usize, rng: &mut R) -> Small {
    loop {
        let y = random_small(gf, rows, t, rng);
        let z = random_small(gf, t, cols, rng);
        let x = y.mul(&z, gf);
        if x.rank(gf) == t {
            return x;
        }
    }
}

pub fn random_small<R: Rng + ?Sized>(gf: &Gf, rows: usize, cols: usize, rng: &mut R) -> Small {
    let mut m = Small::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, rng.gen_range(0..gf.p()));
        }
    }
    m
}

/// Extremes of an objective over the matrices of one rank.
#[derive(Debug, Clone, Copy)]
pub struct RankExtremes {
    pub max: usize,
    pub min: usize,
    pub argmax: Small,
    pub argmin: Small,
    pub count: u64,
}

impl RankExtremes {
    fn observe(slot: &mut Option<RankExtremes>, x: &Small, v: usize) {
        match slot {
            None => {
                *slot = Some(RankExtremes {
                    max: v,
                    min: v,
                    argmax: *x,
                    argmin: *x,
                    count: 1,
                })
            }
            Some(e) => {
                e.count += 1;
                if v > e.max {
                    e.max = v;
                    e.argmax = *x;
                }
                if v < e.min {
                    e.min = v;
                    e.argmin = *x;
                }
            }
        }
    }

    /// Combine the per-rank extremes over `s..=t`, preferring the lowest rank on ties.
    pub fn over_range(per_rank: &[Option<RankExtremes>], s: usize, t: usize) -> Option<RankExtremes> {
        let mut out: Option<RankExtremes> = None;
        for e in per_rank[s..=t].iter().flatten() {
            match &mut out {
                None => out = Some(*e),
                Some(o) => {
                    o.count += e.count;
                    if e.max > o.max {
                        o.max = e.max;
                        o.argmax = e.argmax;
                    }
                    if e.min < o.min {
                        o.min = e.min;
                        o.argmin = e.argmin;
                    }
                }
            }
        }
        out
    }
}

/// Per-rank extremes of `objective` over the ranks `0..=hi`.
pub fn extremes_by_rank(table: &RankTable, hi: usize, mut objective: impl FnMut(&Small) -> usize) -> Vec<Option<RankExtremes>> {
    let mut out = vec![None; table.by_rank.len()];
    for (t, group) in table.by_rank.iter().enumerate().take(hi + 1) {
        for x in group {
            RankExtremes::observe(&mut out[t], x, objective(x));
        }
    }
    out
}

/// Sampled counterpart of [`extremes_by_rank`] for the ranks in `ranks`.
pub fn sampled_extremes(
    gf: &Gf,
    rows: usize,
    cols: usize,
    ranks: std::ops::RangeInclusive<usize>,
    budget: &EnumerationBudget,
    mut objective: impl FnMut(&Small) -> usize,
) -> Vec<Option<RankExtremes>> {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut out = vec![None; rows.min(cols) + 1];
    let ranks: Vec<usize> = ranks.collect();
    for i in 0..budget.samples.max(ranks.len()) {
        let t = ranks[i % ranks.len()];
        let x = random_fixed_rank(gf, rows, cols, t, &mut rng);
        RankExtremes::observe(&mut out[t], &x, objective(&x));
    }
    out
}

// ---------------------------------------------------------------------------
// Objectives

/// `A + BXC` as `A + Σ x_ij B_i C_j`, with the outer products precomputed.
pub struct BxcObjective {
    gf: Gf,
    a: Small,
    outer: Vec<Small>,
    q: usize,
}

impl BxcObjective {
    pub fn new(gf: Gf, a: &Small, b: &Small, c: &Small) -> Self {
        let (p, q) = (b.cols(), c.rows());
        let mut outer = Vec::with_capacity(p * q);
        for i in 0..p {
            for j in 0..q {
                let mut k = Small::zeros(a.rows(), a.cols());
                for r in 0..a.rows() {
                    for s in 0..a.cols() {
                        k.set(r, s, gf.mul(b.get(r, i), c.get(j, s)));
                    }
                }
                outer.push(k);
            }
        }
        BxcObjective { gf, a: *a, outer, q }
    }

    pub fn value(&self, x: &Small) -> Small {
        let mut acc = self.a;
        for i in 0..x.rows() {
            for j in 0..x.cols() {
                let v = x.get(i, j);
                if v == 0 {
                    continue;
                }
                let k = &self.outer[i * self.q + j];
                for r in 0..acc.rows() {
                    for s in 0..acc.cols() {
                        let add = self.gf.mul(v, k.get(r, s));
                        acc.set(r, s, self.gf.add(acc.get(r, s), add));
                    }
                }
            }
        }
        acc
    }

    pub fn rank(&self, x: &Small) -> usize {
        self.value(x).rank(&self.gf)
    }
}

/// `[[A, B], [C, X]]`.
pub fn completion_rank(gf: &Gf, base: &Small, x: &Small) -> usize {
    let mut m = *base;
    m.put(base.rows() - x.rows(), base.cols() - x.cols(), x);
    m.rank(gf)
}

/// `[[A − X, B − X], [C − X, D − X]]` where `base = [[A, B], [C, D]]`.
pub fn shifted_rank(gf: &Gf, base: &Small, x: &Small) -> usize {
    let mut m = *base;
    let (mr, nc) = (x.rows(), x.cols());
    for (r0, c0) in [(0, 0), (0, nc), (mr, 0), (mr, nc)] {
        for r in 0..mr {
            for c in 0..nc {
                m.set(r0 + r, c0 + c, gf.sub(base.get(r0 + r, c0 + c), x.get(r, c)));
            }
        }
    }
    m.rank(gf)
}

/// Profile computed with the kernel, independently of [`crate::profile`].
pub fn kernel_profile(gf: &Gf, a: &Small, b: &Small, c: &Small) -> RankProfile {
    let zero = Small::zeros(c.rows(), b.cols());
    let mut g = Small::zeros(a.rows(), a.cols() + b.cols());
    g.put(0, 0, a);
    g.put(0, a.cols(), b);
    let mut h = Small::zeros(a.rows() + c.rows(), a.cols());
    h.put(0, 0, a);
    h.put(a.rows(), 0, c);
    RankProfile {
        r_a: a.rank(gf),
        r_g: g.rank(gf),
        r_h: h.rank(gf),
        r_m: Small::block(a, b, c, &zero).rank(gf),
    }
}

pub fn kernel_shifted_profile(gf: &Gf, a: &Small, b: &Small, c: &Small, d: &Small) -> ShiftedProfile {
    let mut g = Small::zeros(a.rows(), 2 * a.cols());
    g.put(0, 0, &a.sub(c, gf));
    g.put(0, a.cols(), &b.sub(d, gf));
    let mut h = Small::zeros(2 * a.rows(), a.cols());
    h.put(0, 0, &a.sub(b, gf));
    h.put(a.rows(), 0, &c.sub(d, gf));
    ShiftedProfile {
        r_g: g.rank(gf),
        r_h: h.rank(gf),
        r_m: Small::block(a, b, c, d).rank(gf),
        r_e: a.sub(b, gf).sub(c, gf).add(d, gf).rank(gf),
    }
}

// ---------------------------------------------------------------------------
// Reports

pub(crate) fn fingerprint(p: u8, blocks: &[(&str, &Small)]) -> String {
    let mut s = format!("GF{p}");
    for (name, m) in blocks {
        s.push_str(&format!(" {name}={}x{}:{}", m.rows(), m.cols(), m.digits()));
    }
    s
}

pub(crate) fn judge(observed: &RankExtremes, formula: &ExtremalResult, mode: BudgetMode) -> Verdict {
    match mode {
        BudgetMode::Exhaustive if observed.max == formula.max_rank && observed.min == formula.min_rank => Verdict::Match,
        BudgetMode::Exhaustive => Verdict::Mismatch,
        BudgetMode::Sampled if observed.max <= formula.max_rank && observed.min >= formula.min_rank => {
            Verdict::WithinBounds
        }
        BudgetMode::Sampled => Verdict::OutOfBounds,
    }
}

struct Run<'a> {
    field: PrimeField,
    gf: Gf,
    family: Family,
    constraint: RankConstraint,
    x_shape: (usize, usize),
    budget: &'a EnumerationBudget,
    fingerprint: String,
    excluded: bool,
}

impl Run<'_> {
    fn execute(self, formula: ExtremalResult, objective: impl FnMut(&Small) -> usize) -> Result<OracleReport> {
        let (rows, cols) = self.x_shape;
        let (s, t) = (self.constraint.s, self.constraint.t);
        let per_rank = match self.budget.mode {
            BudgetMode::Exhaustive => {
                let table = rank_table(&self.gf, rows, cols, self.budget)?;
                extremes_by_rank(&table, t, objective)
            }
            BudgetMode::Sampled => sampled_extremes(&self.gf, rows, cols, s..=t, self.budget, objective),
        };
        let observed = RankExtremes::over_range(&per_rank, s, t)
            .ok_or_else(|| Error::Internal("no candidate matrices were evaluated".into()))?;
        Ok(OracleReport {
            family: self.family,
            constraint: self.constraint,
            max_observed: observed.max,
            min_observed: observed.min,
            max_witness: observed.argmax.to_matrix(self.field),
            min_witness: observed.argmin.to_matrix(self.field),
            formula_max: formula.max_rank,
            formula_min: formula.min_rank,
            evaluated: observed.count,
            verdict: judge(&observed, &formula, self.budget.mode),
            excluded: self.excluded,
            fingerprint: self.fingerprint,
        })
    }
}

fn lowest(c: &RankConstraint) -> usize {
    match c.kind {
        ConstraintKind::Fixed => c.t,
        ConstraintKind::Range => c.s,
    }
}

fn smalls(ms: &[&Matrix<PrimeField>]) -> Result<(PrimeField, Gf, Vec<Small>)> {
    let field = *ms[0].field();
    if ms.iter().any(|m| m.field() != &field) {
        return Err(Error::Field("all blocks must share a field".into()));
    }
    let gf = Gf::new(field.modulus())?;
    let smalls = ms.iter().map(|m| Small::from_matrix(m)).collect::<Result<Vec<_>>>()?;
    Ok((field, gf, smalls))
}

/// Observed extremes of `r(A + BXC)` over the admissible `X`.
pub fn brute_force_extremal(
    a: &Matrix<PrimeField>,
    b: &Matrix<PrimeField>,
    c: &Matrix<PrimeField>,
    constraint: RankConstraint,
    budget: &EnumerationBudget,
) -> Result<OracleReport> {
    let dims = crate::profile::triple_dims(a, b, c)?;
    let (field, gf, s) = smalls(&[a, b, c])?;
    let prof = kernel_profile(&gf, &s[0], &s[1], &s[2]);
    let formula = formulas::bxc_extremal(&prof, dims, constraint)?;
    let family = match constraint.kind {
        ConstraintKind::Fixed => Family::Fixed,
        ConstraintKind::Range => Family::Range,
    };
    let objective = BxcObjective::new(gf, &s[0], &s[1], &s[2]);
    Run {
        field,
        gf,
        family,
        constraint,
        x_shape: (dims.p, dims.q),
        budget,
        fingerprint: fingerprint(gf.p(), &[("A", &s[0]), ("B", &s[1]), ("C", &s[2])]),
        excluded: gf2_max_exclusion(gf.p().into(), &prof, dims, lowest(&constraint)),
    }
    .execute(formula, |x| objective.rank(x))
}

/// Observed extremes of `r(BXC)` over the rank-`t` matrices.
pub fn brute_force_bxc_only(
    b: &Matrix<PrimeField>,
    c: &Matrix<PrimeField>,
    t: usize,
    budget: &EnumerationBudget,
) -> Result<OracleReport> {
    let a = Matrix::zeros(*b.field(), b.rows(), c.cols());
    let dims = crate::profile::triple_dims(&a, b, c)?;
    let (field, gf, s) = smalls(&[&a, b, c])?;
    let (formula, _) = formulas::bxc_only_from_ranks(s[1].rank(&gf), s[2].rank(&gf), dims, t)?;
    let objective = BxcObjective::new(gf, &s[0], &s[1], &s[2]);
    Run {
        field,
        gf,
        family: Family::BxcOnly,
        constraint: RankConstraint::fixed(t),
        x_shape: (dims.p, dims.q),
        budget,
        fingerprint: fingerprint(gf.p(), &[("B", &s[1]), ("C", &s[2])]),
        excluded: false,
    }
    .execute(formula, |x| objective.rank(x))
}

/// Observed extremes of `r[[A, B], [C, X]]` with `X` of shape `q × p`.
pub fn brute_force_completion(
    a: &Matrix<PrimeField>,
    b: &Matrix<PrimeField>,
    c: &Matrix<PrimeField>,
    constraint: RankConstraint,
    budget: &EnumerationBudget,
) -> Result<OracleReport> {
    let dims = crate::profile::triple_dims(a, b, c)?;
    let (field, gf, s) = smalls(&[a, b, c])?;
    if dims.m + dims.q > kernel::MAX_SIDE || dims.n + dims.p > kernel::MAX_SIDE {
        return Err(Error::Precondition("the completed matrix is too large for the oracle".into()));
    }
    let prof = kernel_profile(&gf, &s[0], &s[1], &s[2]);
    let formula = formulas::completion_extremal_from_profile(&prof, dims, constraint)?;
    let (eprof, edims) = completion_as_bxc(&prof, dims);
    let base = Small::block(&s[0], &s[1], &s[2], &Small::zeros(dims.q, dims.p));
    Run {
        field,
        gf,
        family: Family::Completion,
        constraint,
        x_shape: (dims.q, dims.p),
        budget,
        fingerprint: fingerprint(gf.p(), &[("A", &s[0]), ("B", &s[1]), ("C", &s[2])]),
        excluded: gf2_max_exclusion(gf.p().into(), &eprof, edims, lowest(&constraint)),
    }
    .execute(formula, |x| completion_rank(&gf, &base, x))
}

/// Observed extremes of `r[[A − X, B − X], [C − X, D − X]]` over the rank-`t` `X`.
pub fn brute_force_shifted(
    a: &Matrix<PrimeField>,
    b: &Matrix<PrimeField>,
    c: &Matrix<PrimeField>,
    d: &Matrix<PrimeField>,
    t: usize,
    budget: &EnumerationBudget,
) -> Result<OracleReport> {
    let sprof = formulas::shifted_profile(a, b, c, d)?;
    let (m, n) = a.shape();
    if 2 * m > kernel::MAX_SIDE || 2 * n > kernel::MAX_SIDE {
        return Err(Error::Precondition("the shifted matrix is too large for the oracle".into()));
    }
    let (field, gf, s) = smalls(&[a, b, c, d])?;
    let kprof = kernel_shifted_profile(&gf, &s[0], &s[1], &s[2], &s[3]);
    if kprof != sprof {
        return Err(Error::Internal(format!("kernel profile {kprof} differs from {sprof}")));
    }
    let formula = formulas::shifted_extremal_from_profile(&kprof, m, n, t)?;
    let (eprof, edims) = shifted_as_bxc(&kprof, m, n);
    let base = Small::block(&s[0], &s[1], &s[2], &s[3]);
    Run {
        field,
        gf,
        family: Family::Shifted,
        constraint: RankConstraint::fixed(t),
        x_shape: (m, n),
        budget,
        fingerprint: fingerprint(gf.p(), &[("A", &s[0]), ("B", &s[1]), ("C", &s[2]), ("D", &s[3])]),
        excluded: gf2_max_exclusion(gf.p().into(), &eprof, edims, t),
    }
    .execute(formula, |x| shifted_rank(&gf, &base, x))
}

/// Observed extremes of `r(A + X)`.
pub fn brute_force_sum(a: &Matrix<PrimeField>, constraint: RankConstraint, budget: &EnumerationBudget) -> Result<OracleReport> {
    let (m, n) = a.shape();
    let (field, gf, s) = smalls(&[a])?;
    let r_a = s[0].rank(&gf);
    let formula = formulas::sum_extremal_from_rank(r_a, m, n, constraint)?;
    let (eprof, edims) = sum_as_bxc(r_a, m, n);
    Run {
        field,
        gf,
        family: Family::Sum,
        constraint,
        x_shape: (m, n),
        budget,
        fingerprint: fingerprint(gf.p(), &[("A", &s[0])]),
        excluded: gf2_max_exclusion(gf.p().into(), &eprof, edims, lowest(&constraint)),
    }
    .execute(formula, |x| s[0].add(x, &gf).rank(&gf))
}

/// One-sided check over any field, ℚ included: `samples` seeded random `X`,
/// spread evenly over the admissible ranks, never leave the formula interval.
/// Attainment is not certified this way; that is the witness builder's job.
pub fn sample_extremal<F: Field>(
    a: &Matrix<F>,
    b: &Matrix<F>,
    c: &Matrix<F>,
    constraint: RankConstraint,
    samples: usize,
    seed: u64,
) -> Result<OracleReport<F>> {
    let dims = crate::profile::triple_dims(a, b, c)?;
    let formula = formulas::bxc_extremal_matrices(a, b, c, constraint)?;
    let field = a.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ranks: Vec<usize> = constraint.ranks().collect();
    let mut seen: Option<(usize, Matrix<F>, usize, Matrix<F>)> = None;
    let count = samples.max(ranks.len());
    for i in 0..count {
        let x = crate::random::random_low_rank(&field, dims.p, dims.q, ranks[i % ranks.len()], &mut rng);
        let v = a.add(&b.mul(&x)?.mul(c)?)?.rank();
        seen = Some(match seen {
            None => (v, x.clone(), v, x),
            Some((hi, hx, lo, lx)) => {
                let (hi, hx) = if v > hi { (v, x.clone()) } else { (hi, hx) };
                let (lo, lx) = if v < lo { (v, x) } else { (lo, lx) };
                (hi, hx, lo, lx)
            }
        });
    }
    let (hi, hx, lo, lx) = seen.expect("at least one sample");
    let inside = hi <= formula.max_rank && lo >= formula.min_rank;
    let Dims { m, n, p, q } = dims;
    Ok(OracleReport {
        family: match constraint.kind {
            ConstraintKind::Fixed => Family::Fixed,
            ConstraintKind::Range => Family::Range,
        },
        constraint,
        max_observed: hi,
        min_observed: lo,
        max_witness: hx,
        min_witness: lx,
        formula_max: formula.max_rank,
        formula_min: formula.min_rank,
        evaluated: count as u64,
        verdict: if inside { Verdict::WithinBounds } else { Verdict::OutOfBounds },
        excluded: false,
        fingerprint: format!("{} m={m} n={n} p={p} q={q} seed={seed}", field.spec()),
    })
}
