//! Closed-form maximal and minimal ranks.
//!
//! Every formula is a function of a handful of ranks and dimensions. The
//! profile-level functions take those numbers directly so tests can drive them with
//! synthetic data; the matrix-level wrappers compute the ranks first.
//!
//! Candidate terms are kept as signed integers: several of them go negative on
//! ordinary inputs and only the enclosing `max` makes the result meaningful.

use std::fmt;
use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::profile::{rank_profile, triple_dims, Dims, RankProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstraintKind {
    Fixed,
    Range,
}

/// `r(X) = t` or `s ≤ r(X) ≤ t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RankConstraint {
    pub kind: ConstraintKind,
    pub s: usize,
    pub t: usize,
}

impl RankConstraint {
    pub fn fixed(t: usize) -> Self {
        RankConstraint { kind: ConstraintKind::Fixed, s: t, t }
    }

    pub fn range(s: usize, t: usize) -> Self {
        RankConstraint { kind: ConstraintKind::Range, s, t }
    }

    /// Require `s ≤ t ≤ hi`.
    pub fn check(&self, hi: usize) -> Result<()> {
        if self.t > hi {
            let lo = if self.kind == ConstraintKind::Fixed { 0 } else { self.s };
            return Err(Error::constraint("t", lo, hi, self.t));
        }
        if self.s > self.t {
            return Err(Error::constraint("s", 0, self.t, self.s));
        }
        Ok(())
    }

    pub fn ranks(&self) -> RangeInclusive<usize> {
        self.s..=self.t
    }
}

impl fmt::Display for RankConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ConstraintKind::Fixed => write!(f, "t={}", self.t),
            ConstraintKind::Range => write!(f, "s={} t={}", self.s, self.t),
        }
    }
}

/// One candidate value entering a `min{…}` or `max{…}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub label: String,
    pub value: i64,
}

impl Term {
    fn new(label: impl Into<String>, value: i64) -> Self {
        Term { label: label.into(), value }
    }
}

/// Extremal ranks for one constraint, with the candidate terms behind them.
///
/// `max_rank` is the minimum of `max_terms`. `min_rank` is the maximum of
/// `min_terms` for a fixed rank, and the minimum of the per-rank values `u_l` for
/// a range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalResult {
    pub max_rank: usize,
    pub min_rank: usize,
    pub constraint: RankConstraint,
    pub max_terms: Vec<Term>,
    pub min_terms: Vec<Term>,
}

impl ExtremalResult {
    fn build(constraint: RankConstraint, max_terms: Vec<Term>, min_terms: Vec<Term>, min_is_max_of: bool) -> Result<Self> {
        let max = max_terms.iter().map(|t| t.value).min().unwrap_or(0);
        let min_iter = min_terms.iter().map(|t| t.value);
        let min = if min_is_max_of { min_iter.max() } else { min_iter.min() }.unwrap_or(0);
        if min < 0 || max < min {
            return Err(Error::Consistency(format!(
                "formula gives min {min} and max {max} for {constraint}"
            )));
        }
        Ok(ExtremalResult {
            max_rank: max as usize,
            min_rank: min as usize,
            constraint,
            max_terms,
            min_terms,
        })
    }

    pub fn is_invariant(&self) -> bool {
        self.max_rank == self.min_rank
    }
}

fn i(v: usize) -> i64 {
    v as i64
}

// ---------------------------------------------------------------------------
// A + X

/// Extremal ranks of `A + X` with `A` of rank `r_a` and shape `m × n`, over a
/// fixed rank or a range of ranks of `X`.
pub fn sum_extremal_from_rank(r_a: usize, m: usize, n: usize, constraint: RankConstraint) -> Result<ExtremalResult> {
    constraint.check(m.min(n))?;
    if r_a > m.min(n) {
        return Err(Error::Consistency(format!("r(A)={r_a} exceeds min(m, n) for a {m}x{n} matrix")));
    }
    let (s, t, ra) = (i(constraint.s), i(constraint.t), i(r_a));
    let max_terms = vec![Term::new("m", i(m)), Term::new("n", i(n)), Term::new("r(A)+t", ra + t)];
    let min_terms = match constraint.kind {
        ConstraintKind::Fixed => vec![Term::new("r(A)-t", ra - t), Term::new("t-r(A)", t - ra)],
        ConstraintKind::Range => vec![
            Term::new("0", 0),
            Term::new("s-r(A)", s - ra),
            Term::new("r(A)-t", ra - t),
        ],
    };
    ExtremalResult::build(constraint, max_terms, min_terms, true)
}

pub fn sum_extremal_fixed<F: Field>(a: &Matrix<F>, t: usize) -> Result<ExtremalResult> {
    sum_extremal_from_rank(a.rank(), a.rows(), a.cols(), RankConstraint::fixed(t))
}

pub fn sum_extremal_range<F: Field>(a: &Matrix<F>, s: usize, t: usize) -> Result<ExtremalResult> {
    sum_extremal_from_rank(a.rank(), a.rows(), a.cols(), RankConstraint::range(s, t))
}

/// `r(X) ≤ t`.
pub fn sum_extremal_at_most<F: Field>(a: &Matrix<F>, t: usize) -> Result<ExtremalResult> {
    sum_extremal_range(a, 0, t)
}

/// `r(X) ≥ s`.
pub fn sum_extremal_at_least<F: Field>(a: &Matrix<F>, s: usize) -> Result<ExtremalResult> {
    sum_extremal_range(a, s, a.rows().min(a.cols()))
}

// ---------------------------------------------------------------------------
// A + BXC

fn bxc_max_terms(prof: &RankProfile, t: usize) -> Vec<Term> {
    vec![
        Term::new("r(G)", i(prof.r_g)),
        Term::new("r(H)", i(prof.r_h)),
        Term::new("r(A)+t", i(prof.r_a + t)),
    ]
}

fn bxc_min_terms(prof: &RankProfile, dims: Dims, t: usize) -> Vec<Term> {
    let (ra, rg, rh, rm) = (i(prof.r_a), i(prof.r_g), i(prof.r_h), i(prof.r_m));
    let (t, p, q) = (i(t), i(dims.p), i(dims.q));
    vec![
        Term::new("r(G)+r(H)-r(M)", rg + rh - rm),
        Term::new("r(G)+r(H)-r(A)+t-p-q", rg + rh - ra + t - p - q),
        Term::new("r(A)-t", ra - t),
    ]
}

fn max_of(terms: &[Term]) -> i64 {
    terms.iter().map(|t| t.value).max().unwrap_or(0)
}

pub fn bxc_extremal_fixed(prof: &RankProfile, dims: Dims, t: usize) -> Result<ExtremalResult> {
    prof.check(dims)?;
    let c = RankConstraint::fixed(t);
    c.check(dims.max_x_rank())?;
    ExtremalResult::build(c, bxc_max_terms(prof, t), bxc_min_terms(prof, dims, t), true)
}

/// The minimum is `min_l u_l` over `l ∈ s..=t`, each `u_l` being the fixed-rank
/// minimum at `l`; the maximum is the fixed-rank maximum at `t`.
pub fn bxc_extremal_range(prof: &RankProfile, dims: Dims, s: usize, t: usize) -> Result<ExtremalResult> {
    prof.check(dims)?;
    let c = RankConstraint::range(s, t);
    c.check(dims.max_x_rank())?;
    let u = (s..=t)
        .map(|l| Term::new(format!("u_{l}"), max_of(&bxc_min_terms(prof, dims, l))))
        .collect();
    ExtremalResult::build(c, bxc_max_terms(prof, t), u, false)
}

pub fn bxc_extremal(prof: &RankProfile, dims: Dims, c: RankConstraint) -> Result<ExtremalResult> {
    match c.kind {
        ConstraintKind::Fixed => bxc_extremal_fixed(prof, dims, c.t),
        ConstraintKind::Range => bxc_extremal_range(prof, dims, c.s, c.t),
    }
}

/// Extremal ranks over all `X`, with no rank constraint.
pub fn bxc_global(prof: &RankProfile, dims: Dims) -> Result<ExtremalResult> {
    prof.check(dims)?;
    let max_terms = vec![Term::new("r(G)", i(prof.r_g)), Term::new("r(H)", i(prof.r_h))];
    let min_terms = vec![Term::new("r(G)+r(H)-r(M)", i(prof.r_g + prof.r_h) - i(prof.r_m))];
    ExtremalResult::build(RankConstraint::range(0, dims.max_x_rank()), max_terms, min_terms, true)
}

/// Nonsingular `X` (square, full rank `p`).
pub fn nonsingular_x_extremal(prof: &RankProfile, dims: Dims) -> Result<ExtremalResult> {
    if dims.p != dims.q {
        return Err(Error::Shape {
            op: "nonsingular_x_extremal",
            operand: "X".into(),
            expected: "square (p = q)".into(),
            found: format!("{}x{}", dims.p, dims.q),
        });
    }
    prof.check(dims)?;
    let (ra, rg, rh, rm, p) = (i(prof.r_a), i(prof.r_g), i(prof.r_h), i(prof.r_m), i(dims.p));
    let max_terms = vec![Term::new("r(G)", rg), Term::new("r(H)", rh)];
    let min_terms = vec![
        Term::new("r(G)+r(H)-r(M)", rg + rh - rm),
        Term::new("r(G)+r(H)-r(A)-p", rg + rh - ra - p),
    ];
    ExtremalResult::build(RankConstraint::fixed(dims.p), max_terms, min_terms, true)
}

/// Matrix-level entry point: computes the profile and evaluates the formula.
pub fn bxc_extremal_matrices<F: Field>(
    a: &Matrix<F>,
    b: &Matrix<F>,
    c: &Matrix<F>,
    constraint: RankConstraint,
) -> Result<ExtremalResult> {
    let dims = triple_dims(a, b, c)?;
    bxc_extremal(&rank_profile(a, b, c)?, dims, constraint)
}

/// The six invariance conditions for `t ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InvarianceCondition {
    /// `r(M) = r(G)`
    I,
    /// `r(M) = r(H)`
    Ii,
    /// `r(M) = r(G) + r(H) − r(A) − t`
    Iii,
    /// `r(G) = r(A) + p + q − t`
    Iv,
    /// `r(H) = r(A) + p + q − t`
    V,
    /// `r(G) + r(H) = 2r(A) + p + q`
    Vi,
}

impl fmt::Display for InvarianceCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InvarianceCondition::I => "i",
            InvarianceCondition::Ii => "ii",
            InvarianceCondition::Iii => "iii",
            InvarianceCondition::Iv => "iv",
            InvarianceCondition::V => "v",
            InvarianceCondition::Vi => "vi",
        };
        f.write_str(s)
    }
}

/// Qualitative behaviour of `A + BXC` over the rank-`t` matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub t: usize,
    /// Some `X` makes `A + BXC` nonsingular. Always false when `m ≠ n`.
    pub nonsingular_attainable: bool,
    /// Why `nonsingular_attainable` was not evaluated, if it was not.
    pub nonsingular_note: Option<String>,
    pub zero_attainable: bool,
    /// `max = min` in the companion [`ExtremalResult`]; this is the ground truth.
    pub rank_invariant: bool,
    /// `t = 0`: the only feasible `X` is zero, so invariance says nothing.
    pub trivially_invariant: bool,
    /// Conditions (i)–(vi) that hold. Empty when `t = 0`.
    pub invariance_conditions: Vec<InvarianceCondition>,
    /// The conditions disagree with `max = min`.
    pub discrepancy: bool,
}

pub fn classify(prof: &RankProfile, dims: Dims, t: usize) -> Result<PropertyReport> {
    let result = bxc_extremal_fixed(prof, dims, t)?;
    let Dims { m, n, p, q } = dims;
    let (ra, rg, rh, rm) = (i(prof.r_a), i(prof.r_g), i(prof.r_h), i(prof.r_m));
    let (ti, pi, qi) = (i(t), i(p), i(q));

    let (nonsingular_attainable, nonsingular_note) = if m == n {
        (prof.r_g == m && prof.r_h == m && prof.r_a + t >= m, None)
    } else {
        (false, Some(format!("A is {m}x{n}, not square")))
    };
    // The range inclusions R(A) ⊆ R(B) and R(Aᵀ) ⊆ R(Cᵀ) together are equivalent
    // to r(G) + r(H) = r(M), which the profile can decide on its own.
    let zero_attainable = rg + rh == rm && rg + rh <= ra - ti + pi + qi && ra <= ti;

    let mut conditions = Vec::new();
    if t != 0 {
        use InvarianceCondition::*;
        let checks = [
            (I, rm == rg),
            (Ii, rm == rh),
            (Iii, rm == rg + rh - ra - ti),
            (Iv, rg == ra + pi + qi - ti),
            (V, rh == ra + pi + qi - ti),
            (Vi, rg + rh == 2 * ra + pi + qi),
        ];
        conditions = checks.into_iter().filter(|(_, ok)| *ok).map(|(c, _)| c).collect();
    }
    let rank_invariant = result.is_invariant();
    Ok(PropertyReport {
        t,
        nonsingular_attainable,
        nonsingular_note,
        zero_attainable,
        rank_invariant,
        trivially_invariant: t == 0,
        discrepancy: t != 0 && conditions.is_empty() == rank_invariant,
        invariance_conditions: conditions,
    })
}

// ---------------------------------------------------------------------------
// BXC alone

/// Predicates for `BXC` over the rank-`t` matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BxcOnlyReport {
    /// Needs `m = n`; false otherwise.
    pub nonsingular_attainable: bool,
    pub zero_attainable: bool,
    /// The trichotomy `r(B) = p + q − t`, `r(C) = p + q − t`, or `r(B) = p` and `r(C) = q`.
    pub rank_invariant: bool,
}

/// `BXC` with `B` of rank `r_b` (`m × p`) and `C` of rank `r_c` (`q × n`).
pub fn bxc_only_from_ranks(r_b: usize, r_c: usize, dims: Dims, t: usize) -> Result<(ExtremalResult, BxcOnlyReport)> {
    let Dims { m, n, p, q } = dims;
    if r_b == 0 || r_c == 0 {
        return Err(Error::Precondition("B and C must be nonzero".into()));
    }
    if t == 0 {
        return Err(Error::Precondition("the rank of X must be at least 1".into()));
    }
    RankConstraint::fixed(t).check(p.min(q))?;
    if r_b > m.min(p) || r_c > q.min(n) {
        return Err(Error::Consistency(format!("r(B)={r_b}, r(C)={r_c} do not fit {dims}")));
    }
    let (rb, rc, ti, pi, qi) = (i(r_b), i(r_c), i(t), i(p), i(q));
    let max_terms = vec![Term::new("r(B)", rb), Term::new("r(C)", rc), Term::new("t", ti)];
    let min_terms = vec![Term::new("0", 0), Term::new("r(B)+r(C)+t-p-q", rb + rc + ti - pi - qi)];
    let result = ExtremalResult::build(RankConstraint::fixed(t), max_terms, min_terms, true)?;
    let report = BxcOnlyReport {
        nonsingular_attainable: m == n && r_b == m && r_c == m && t >= m,
        zero_attainable: rb + rc <= pi + qi - ti,
        rank_invariant: rb == pi + qi - ti || rc == pi + qi - ti || (r_b == p && r_c == q),
    };
    Ok((result, report))
}

pub fn bxc_only_extremal<F: Field>(b: &Matrix<F>, c: &Matrix<F>, t: usize) -> Result<(ExtremalResult, BxcOnlyReport)> {
    let a = Matrix::zeros(b.field().clone(), b.rows(), c.cols());
    let dims = triple_dims(&a, b, c)?;
    bxc_only_from_ranks(b.rank(), c.rank(), dims, t)
}

// ---------------------------------------------------------------------------
// Completion [[A, B], [C, X]]

/// Here `X` is `q × p`, so the same `dims` as for `A + BXC` describe the blocks.
pub fn completion_extremal_from_profile(prof: &RankProfile, dims: Dims, c: RankConstraint) -> Result<ExtremalResult> {
    prof.check(dims)?;
    c.check(dims.max_x_rank())?;
    let (ra, rg, rh, rm) = (i(prof.r_a), i(prof.r_g), i(prof.r_h), i(prof.r_m));
    let (p, q) = (i(dims.p), i(dims.q));
    let max_terms = vec![
        Term::new("r(G)+q", rg + q),
        Term::new("r(H)+p", rh + p),
        Term::new("r(M)+t", rm + i(c.t)),
    ];
    let fixed = |l: i64| {
        vec![
            Term::new("r(G)+r(H)-r(A)", rg + rh - ra),
            Term::new("r(G)+r(H)-r(M)+t", rg + rh - rm + l),
            Term::new("r(M)-t", rm - l),
        ]
    };
    match c.kind {
        ConstraintKind::Fixed => ExtremalResult::build(c, max_terms, fixed(i(c.t)), true),
        ConstraintKind::Range => {
            let u = c
                .ranks()
                .map(|l| Term::new(format!("u_{l}"), max_of(&fixed(i(l)))))
                .collect();
            ExtremalResult::build(c, max_terms, u, false)
        }
    }
}

pub fn completion_extremal<F: Field>(
    a: &Matrix<F>,
    b: &Matrix<F>,
    c: &Matrix<F>,
    constraint: RankConstraint,
) -> Result<ExtremalResult> {
    let dims = triple_dims(a, b, c)?;
    completion_extremal_from_profile(&rank_profile(a, b, c)?, dims, constraint)
}

/// Nonsingularity of `[[A, B], [C, X]]` over the rank-`t` completions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionReport {
    pub t: usize,
    /// Some rank-`t` completion is nonsingular.
    pub exists_nonsingular: bool,
    /// Every rank-`t` completion is nonsingular.
    pub all_nonsingular: bool,
    /// The predicates disagree with the extremal values (`max`/`min` equal to `m + q`).
    pub discrepancy: bool,
}

pub fn completion_predicates_from_profile(prof: &RankProfile, dims: Dims, t: usize) -> Result<CompletionReport> {
    let Dims { m, n, p, q } = dims;
    if m + q != n + p {
        return Err(Error::Shape {
            op: "completion_predicates",
            operand: "[[A, B], [C, X]]".into(),
            expected: "square (m + q = n + p)".into(),
            found: format!("{}x{}", m + q, n + p),
        });
    }
    let result = completion_extremal_from_profile(prof, dims, RankConstraint::fixed(t))?;
    let full = m + q;
    let exists_nonsingular = prof.r_g == m && prof.r_h == n && prof.r_m + t >= full;
    let all_nonsingular = prof.r_g + prof.r_h - prof.r_a == full
        || prof.r_g + prof.r_h + t == full + prof.r_m
        || (prof.r_m == full && t == 0);
    let discrepancy = exists_nonsingular != (result.max_rank == full) || all_nonsingular != (result.min_rank == full);
    Ok(CompletionReport {
        t,
        exists_nonsingular,
        all_nonsingular,
        discrepancy,
    })
}

pub fn completion_predicates<F: Field>(a: &Matrix<F>, b: &Matrix<F>, c: &Matrix<F>, t: usize) -> Result<CompletionReport> {
    let dims = triple_dims(a, b, c)?;
    completion_predicates_from_profile(&rank_profile(a, b, c)?, dims, t)
}

// ---------------------------------------------------------------------------
// All four blocks shifted: [[A − X, B − X], [C − X, D − X]]

/// Ranks of `G = [A − C, B − D]`, `H = [A − B; C − D]`, `M = [[A, B], [C, D]]`
/// and `E = A − B − C + D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ShiftedProfile {
    pub r_g: usize,
    pub r_h: usize,
    pub r_m: usize,
    pub r_e: usize,
}

impl fmt::Display for ShiftedProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r(G)={} r(H)={} r(M)={} r(E)={}", self.r_g, self.r_h, self.r_m, self.r_e)
    }
}

fn four_blocks<F: Field>(a: &Matrix<F>, b: &Matrix<F>, c: &Matrix<F>, d: &Matrix<F>) -> Result<(usize, usize)> {
    let shape = a.shape();
    for (name, x) in [("B", b), ("C", c), ("D", d)] {
        if x.shape() != shape {
            return Err(Error::shape("shifted", name, format!("{}x{} (matching A)", shape.0, shape.1), x.shape()));
        }
        if x.field() != a.field() {
            return Err(Error::Field("A, B, C and D must share a field".into()));
        }
    }
    Ok(shape)
}

pub fn shifted_profile<F: Field>(a: &Matrix<F>, b: &Matrix<F>, c: &Matrix<F>, d: &Matrix<F>) -> Result<ShiftedProfile> {
    four_blocks(a, b, c, d)?;
    let g = a.sub(c)?.hcat(&b.sub(d)?)?;
    let h = a.sub(b)?.vcat(&c.sub(d)?)?;
    let m = Matrix::block2x2(a, b, c, d)?;
    let e = a.sub(b)?.sub(c)?.add(d)?;
    Ok(ShiftedProfile {
        r_g: g.rank(),
        r_h: h.rank(),
        r_m: m.rank(),
        r_e: e.rank(),
    })
}

/// `X` is `m × n` with `0 ≤ t ≤ min(m, n)`.
///
/// Subtracting the second block column from the first, then the second block row
/// from the first, turns the shifted matrix into `A′ − B′XC′` with
/// `A′ = [[E, B − D], [C − D, D]]`, `B′ = [0; I]` and `C′ = [0, I]`, whose profile is `(r(M), m + r(G), n + r(H), m + n + r(E))`. These
/// are the fixed-rank formulas for that profile. For `A = [1]`, `B = C = D = 0`
/// and `t = 1` both extremes are 2: the determinant of `[[1 − x, −x], [−x, −x]]`
/// is `−x`, which never vanishes once `x ≠ 0`.
pub fn shifted_extremal_from_profile(prof: &ShiftedProfile, m: usize, n: usize, t: usize) -> Result<ExtremalResult> {
    let c = RankConstraint::fixed(t);
    c.check(m.min(n))?;
    let (rg, rh, rm, re, ti) = (i(prof.r_g), i(prof.r_h), i(prof.r_m), i(prof.r_e), i(t));
    let max_terms = vec![
        Term::new("r(G)+m", rg + i(m)),
        Term::new("r(H)+n", rh + i(n)),
        Term::new("r(M)+t", rm + ti),
    ];
    let min_terms = vec![
        Term::new("r(G)+r(H)-r(E)", rg + rh - re),
        Term::new("r(G)+r(H)-r(M)+t", rg + rh - rm + ti),
        Term::new("r(M)-t", rm - ti),
    ];
    ExtremalResult::build(c, max_terms, min_terms, true)
}

pub fn all_entries_shifted_extremal<F: Field>(
    a: &Matrix<F>,
    b: &Matrix<F>,
    c: &Matrix<F>,
    d: &Matrix<F>,
    t: usize,
) -> Result<ExtremalResult> {
    let (m, n) = four_blocks(a, b, c, d)?;
    shifted_extremal_from_profile(&shifted_profile(a, b, c, d)?, m, n, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    fn q(rows: &[&[i64]]) -> Matrix<Rationals> {
        Matrix::from_i64(Rationals, rows).unwrap()
    }

    fn eye(n: usize) -> Matrix<Rationals> {
        Matrix::identity(Rationals, n)
    }

    fn zero(r: usize, c: usize) -> Matrix<Rationals> {
        Matrix::zeros(Rationals, r, c)
    }

    fn mm(r: &ExtremalResult) -> (usize, usize) {
        (r.max_rank, r.min_rank)
    }

    fn triple_result(a: &Matrix<Rationals>, b: &Matrix<Rationals>, c: &Matrix<Rationals>, con: RankConstraint) -> (usize, usize) {
        mm(&bxc_extremal_matrices(a, b, c, con).unwrap())
    }

    #[test]
    fn sum_examples() {
        let a = q(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]]);
        assert_eq!(mm(&sum_extremal_fixed(&a, 1).unwrap()), (3, 1));
        assert_eq!(mm(&sum_extremal_fixed(&zero(2, 2), 2).unwrap()), (2, 2));
        assert_eq!(mm(&sum_extremal_fixed(&eye(2), 2).unwrap()), (2, 0));

        assert_eq!(mm(&sum_extremal_range(&eye(2), 0, 2).unwrap()), (2, 0));
        assert_eq!(mm(&sum_extremal_range(&zero(3, 3), 2, 3).unwrap()), (3, 2));
        assert_eq!(mm(&sum_extremal_range(&a, 0, 1).unwrap()), (3, 1));
        assert_eq!(mm(&sum_extremal_at_most(&a, 1).unwrap()), (3, 1));
        assert_eq!(mm(&sum_extremal_at_least(&a, 3).unwrap()), (3, 1));
    }

    #[test]
    fn sum_range_is_pointwise_envelope() {
        for m in 1..=4 {
            for n in 1..=4 {
                for ra in 0..=m.min(n) {
                    for s in 0..=m.min(n) {
                        for t in s..=m.min(n) {
                            let range = sum_extremal_from_rank(ra, m, n, RankConstraint::range(s, t)).unwrap();
                            let fixed: Vec<_> = (s..=t)
                                .map(|l| sum_extremal_from_rank(ra, m, n, RankConstraint::fixed(l)).unwrap())
                                .collect();
                            assert_eq!(range.max_rank, fixed.iter().map(|r| r.max_rank).max().unwrap());
                            assert_eq!(range.min_rank, fixed.iter().map(|r| r.min_rank).min().unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn constraint_errors_echo_the_interval() {
        let err = sum_extremal_fixed(&eye(2), 3).unwrap_err();
        assert_eq!(err, Error::Constraint { what: "t".into(), lo: 0, hi: 2, got: 3 });
        let err = sum_extremal_range(&eye(2), 2, 1).unwrap_err();
        assert_eq!(err, Error::Constraint { what: "s".into(), lo: 0, hi: 1, got: 2 });
    }

    #[test]
    fn bxc_fixed_examples() {
        let a = q(&[&[1, 0], &[0, 0]]);
        let b = q(&[&[1], &[0]]);
        let c = q(&[&[1, 0]]);
        assert_eq!(triple_result(&eye(2), &eye(2), &eye(2), RankConstraint::fixed(1)), (2, 1));
        assert_eq!(triple_result(&zero(2, 2), &eye(2), &eye(2), RankConstraint::fixed(1)), (1, 1));
        assert_eq!(triple_result(&a, &b, &c, RankConstraint::fixed(1)), (1, 0));
    }

    #[test]
    fn bxc_range_examples() {
        assert_eq!(triple_result(&eye(2), &eye(2), &eye(2), RankConstraint::range(0, 2)), (2, 0));
        assert_eq!(triple_result(&zero(2, 2), &eye(2), &eye(2), RankConstraint::range(1, 2)), (2, 1));
        let a = q(&[&[1, 2], &[0, 0]]);
        for t in 0..=2 {
            let fixed = bxc_extremal_matrices(&a, &eye(2), &eye(2), RankConstraint::fixed(t)).unwrap();
            let range = bxc_extremal_matrices(&a, &eye(2), &eye(2), RankConstraint::range(t, t)).unwrap();
            assert_eq!(mm(&fixed), mm(&range));
        }
    }

    #[test]
    fn global_examples() {
        let g = |a: &Matrix<Rationals>, b: &Matrix<Rationals>, c: &Matrix<Rationals>| {
            let dims = triple_dims(a, b, c).unwrap();
            mm(&bxc_global(&rank_profile(a, b, c).unwrap(), dims).unwrap())
        };
        assert_eq!(g(&eye(2), &eye(2), &eye(2)), (2, 0));
        let a = q(&[&[1, 2], &[2, 4]]);
        assert_eq!(g(&a, &zero(2, 3), &zero(1, 2)), (1, 1));
        assert_eq!(g(&q(&[&[1, 0], &[0, 0]]), &q(&[&[1], &[0]]), &q(&[&[1, 0]])), (1, 0));
    }

    #[test]
    fn classify_examples() {
        let dims = Dims::new(2, 2, 2, 2);
        let prof = RankProfile::new(0, 2, 2, 4, dims).unwrap();
        assert!(classify(&prof, dims, 2).unwrap().nonsingular_attainable);
        assert!(!classify(&prof, dims, 1).unwrap().zero_attainable);

        let d1 = Dims::new(2, 2, 1, 1);
        let prof = RankProfile::new(1, 1, 1, 2, d1).unwrap();
        let report = classify(&prof, d1, 1).unwrap();
        assert!(report.zero_attainable);
        assert!(!report.rank_invariant);
        assert!(!report.discrepancy);

        let report = classify(&prof, d1, 0).unwrap();
        assert!(report.trivially_invariant && report.rank_invariant);
        assert!(report.invariance_conditions.is_empty() && !report.discrepancy);

        let wide = Dims::new(1, 2, 1, 1);
        let prof = RankProfile::new(0, 1, 1, 2, wide).unwrap();
        let report = classify(&prof, wide, 1).unwrap();
        assert!(!report.nonsingular_attainable);
        assert!(report.nonsingular_note.is_some());
    }

    #[test]
    fn invariance_conditions_match_max_equals_min() {
        // Every realizable profile for small dims, built from the structural parameters.
        for (prof, dims) in crate::decomposition::small_profiles(3) {
            for t in 1..=dims.max_x_rank() {
                let report = classify(&prof, dims, t).unwrap();
                assert!(!report.discrepancy, "{prof} {dims} t={t}: {report:?}");
                assert!(!report.invariance_conditions.contains(&InvarianceCondition::Iii));
            }
        }
    }

    #[test]
    fn bxc_only_examples() {
        let (r, rep) = bxc_only_extremal(&eye(2), &eye(2), 1).unwrap();
        assert_eq!(mm(&r), (1, 1));
        assert!(rep.rank_invariant);

        let (r, rep) = bxc_only_extremal(&q(&[&[1], &[0]]), &q(&[&[1, 0]]), 1).unwrap();
        assert_eq!(mm(&r), (1, 1));
        assert!(rep.rank_invariant);

        let b = q(&[&[1, 0, 0], &[0, 1, 0]]);
        let c = q(&[&[1, 0], &[0, 1], &[0, 0]]);
        let (r, rep) = bxc_only_extremal(&b, &c, 1).unwrap();
        assert_eq!(mm(&r), (1, 0));
        assert!(rep.zero_attainable && !rep.rank_invariant);

        assert!(matches!(bxc_only_extremal(&zero(2, 2), &eye(2), 1), Err(Error::Precondition(_))));
        assert!(matches!(bxc_only_extremal(&eye(2), &eye(2), 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn bxc_only_trichotomy_matches_max_equals_min() {
        for m in 1..=3 {
            for n in 1..=3 {
                for p in 1..=3 {
                    for q in 1..=3 {
                        let dims = Dims::new(m, n, p, q);
                        for rb in 1..=m.min(p) {
                            for rc in 1..=q.min(n) {
                                for t in 1..=p.min(q) {
                                    let (r, rep) = bxc_only_from_ranks(rb, rc, dims, t).unwrap();
                                    assert_eq!(rep.rank_invariant, r.is_invariant(), "{dims} rb={rb} rc={rc} t={t}");
                                    assert_eq!(rep.zero_attainable, r.min_rank == 0);
                                    assert_eq!(rep.nonsingular_attainable, m == n && r.max_rank == m);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bxc_only_is_the_zero_a_case() {
        for (prof, dims) in crate::decomposition::small_profiles(3) {
            if prof.r_a != 0 || prof.r_g == 0 || prof.r_h == 0 || prof.r_m != prof.r_g + prof.r_h {
                continue;
            }
            for t in 1..=dims.max_x_rank() {
                let (only, _) = bxc_only_from_ranks(prof.r_g, prof.r_h, dims, t).unwrap();
                let full = bxc_extremal_fixed(&prof, dims, t).unwrap();
                assert_eq!(mm(&only), mm(&full));
            }
        }
    }

    #[test]
    fn nonsingular_x_examples() {
        let ns = |a: &Matrix<Rationals>| {
            let dims = triple_dims(a, &eye(2), &eye(2)).unwrap();
            mm(&nonsingular_x_extremal(&rank_profile(a, &eye(2), &eye(2)).unwrap(), dims).unwrap())
        };
        assert_eq!(ns(&eye(2)), (2, 0));
        assert_eq!(ns(&zero(2, 2)), (2, 2));
        assert_eq!(ns(&q(&[&[1, 0], &[0, 0]])), (2, 1));
        let dims = Dims::new(2, 2, 2, 1);
        let prof = RankProfile::new(0, 0, 0, 0, dims).unwrap();
        assert!(matches!(nonsingular_x_extremal(&prof, dims), Err(Error::Shape { .. })));
    }

    #[test]
    fn nonsingular_x_is_fixed_rank_p() {
        for (prof, dims) in crate::decomposition::small_profiles(3) {
            if dims.p == dims.q {
                let a = nonsingular_x_extremal(&prof, dims).unwrap();
                let b = bxc_extremal_fixed(&prof, dims, dims.p).unwrap();
                assert_eq!(mm(&a), mm(&b), "{prof} {dims}");
            }
        }
    }

    #[test]
    fn completion_examples() {
        let one = q(&[&[1]]);
        assert_eq!(mm(&completion_extremal(&one, &one, &one, RankConstraint::fixed(1)).unwrap()), (2, 1));
        assert_eq!(mm(&completion_extremal(&one, &one, &one, RankConstraint::fixed(0)).unwrap()), (2, 2));
        let r = completion_extremal(&eye(2), &zero(2, 1), &zero(1, 2), RankConstraint::fixed(1)).unwrap();
        assert_eq!(mm(&r), (3, 3));

        let rep = completion_predicates(&one, &one, &one, 1).unwrap();
        assert!(rep.exists_nonsingular && !rep.discrepancy);
        let rep = completion_predicates(&one, &one, &one, 0).unwrap();
        assert!(rep.all_nonsingular && !rep.discrepancy);
        let rep = completion_predicates(&q(&[&[0]]), &one, &one, 1).unwrap();
        assert!(rep.all_nonsingular && !rep.discrepancy);
        assert!(matches!(
            completion_predicates(&eye(2), &zero(2, 2), &zero(1, 2), 1),
            Err(Error::Shape { .. })
        ));
    }

    #[test]
    fn completion_predicates_agree_with_extremes() {
        for (prof, dims) in crate::decomposition::small_profiles(3) {
            if dims.m + dims.q != dims.n + dims.p {
                continue;
            }
            for t in 0..=dims.max_x_rank() {
                let rep = completion_predicates_from_profile(&prof, dims, t).unwrap();
                assert!(!rep.discrepancy, "{prof} {dims} t={t}");
            }
        }
    }

    /// Completion is `A′ + B′XC′` with `A′ = M`, `B′ = [0; I_q]`, `C′ = [0, I_p]`;
    /// the embedded profile is `(r(M), q + r(G), p + r(H), p + q + r(A))`.
    #[test]
    fn completion_matches_its_embedding() {
        for (prof, dims) in crate::decomposition::small_profiles(3) {
            let Dims { m, n, p, q } = dims;
            let emb_dims = Dims::new(m + q, n + p, q, p);
            let emb = RankProfile::new(prof.r_m, q + prof.r_g, p + prof.r_h, p + q + prof.r_a, emb_dims).unwrap();
            for s in 0..=dims.max_x_rank() {
                for t in s..=dims.max_x_rank() {
                    for c in [RankConstraint::fixed(t), RankConstraint::range(s, t)] {
                        let direct = completion_extremal_from_profile(&prof, dims, c).unwrap();
                        let via = bxc_extremal(&emb, emb_dims, c).unwrap();
                        assert_eq!(mm(&direct), mm(&via), "{prof} {dims} {c}");
                    }
                }
            }
        }
    }

    /// Under `R(B) ⊆ R(A)` and `R(Cᵀ) ⊆ R(Aᵀ)` (`r(G) = r(H) = r(A)`) the formulas
    /// reduce to the first simplified form; under `R(A) ⊆ R(B)` and
    /// `R(Aᵀ) ⊆ R(Cᵀ)` (`r(G) = r(B)`, `r(H) = r(C)`) to the second.
    #[test]
    fn completion_specializations() {
        for (prof, dims, rb, rc) in crate::decomposition::small_profiles_with_bc(3) {
            let (ra, rm) = (i(prof.r_a), i(prof.r_m));
            let (p, q) = (i(dims.p), i(dims.q));
            for t in 0..=dims.max_x_rank() {
                let r = completion_extremal_from_profile(&prof, dims, RankConstraint::fixed(t)).unwrap();
                let ti = i(t);
                if prof.r_g == prof.r_a && prof.r_h == prof.r_a {
                    assert_eq!(i(r.max_rank), (ra + q).min(ra + p).min(rm + ti));
                    assert_eq!(i(r.min_rank), ra.max(2 * ra - rm + ti).max(rm - ti));
                }
                if prof.r_g == rb && prof.r_h == rc {
                    let (rb, rc) = (i(rb), i(rc));
                    assert_eq!(i(r.max_rank), (rb + q).min(rc + p).min(rb + rc + ti));
                    assert_eq!(i(r.min_rank), (rb + rc - ra).max(ti).max(rb + rc - ti));
                }
            }
        }
    }

    /// Under `R(A) ⊆ R(B)` and `R(Aᵀ) ⊆ R(Cᵀ)` the `A + BXC` formulas reduce to
    /// ranks of `B` and `C`.
    #[test]
    fn bxc_specialization_under_range_inclusion() {
        for (prof, dims, rb, rc) in crate::decomposition::small_profiles_with_bc(3) {
            if prof.r_g != rb || prof.r_h != rc {
                continue;
            }
            let (ra, rbi, rci, p, q) = (i(prof.r_a), i(rb), i(rc), i(dims.p), i(dims.q));
            for t in 0..=dims.max_x_rank() {
                let r = bxc_extremal_fixed(&prof, dims, t).unwrap();
                let ti = i(t);
                assert_eq!(i(r.max_rank), rbi.min(rci).min(ra + ti));
                assert_eq!(i(r.min_rank), 0.max(rbi + rci - ra + ti - p - q).max(ra - ti));
            }
        }
    }

    #[test]
    fn shifted_examples() {
        let one = q(&[&[1]]);
        let z = q(&[&[0]]);
        assert_eq!(mm(&all_entries_shifted_extremal(&one, &one, &one, &one, 1).unwrap()), (1, 0));
        assert_eq!(mm(&all_entries_shifted_extremal(&one, &one, &one, &one, 0).unwrap()), (1, 1));
        // det [[1 − x, −x], [−x, −x]] = −x, so every nonzero x gives rank 2.
        let r = all_entries_shifted_extremal(&one, &z, &z, &z, 1).unwrap();
        assert_eq!(mm(&r), (2, 2));
        let terms: Vec<i64> = r.min_terms.iter().map(|t| t.value).collect();
        assert_eq!(terms, vec![1, 2, 0]);
        assert!(matches!(
            all_entries_shifted_extremal(&one, &one, &eye(2), &one, 1),
            Err(Error::Shape { operand, .. }) if operand == "C"
        ));
    }

    /// The shifted objective is `M − [I; I]·X·[I, I]`, whose profile is
    /// `(r(M), m + r(G), n + r(H), m + n + r(E))` with `p = m`, `q = n`.
    #[test]
    fn shifted_matches_its_embedding() {
        let blocks = [q(&[&[1]]), q(&[&[0]]), q(&[&[2]])];
        for a in &blocks {
            for b in &blocks {
                for c in &blocks {
                    for d in &blocks {
                        let sp = shifted_profile(a, b, c, d).unwrap();
                        let m = Matrix::block2x2(a, b, c, d).unwrap();
                        let stack = eye(1).vcat(&eye(1)).unwrap().neg();
                        let row = eye(1).hcat(&eye(1)).unwrap();
                        let prof = rank_profile(&m, &stack, &row).unwrap();
                        assert_eq!(prof.r_a, sp.r_m);
                        assert_eq!(prof.r_g, 1 + sp.r_g);
                        assert_eq!(prof.r_h, 1 + sp.r_h);
                        assert_eq!(prof.r_m, 2 + sp.r_e);
                        for t in 0..=1 {
                            let direct = shifted_extremal_from_profile(&sp, 1, 1, t).unwrap();
                            let via = bxc_extremal_fixed(&prof, Dims::new(2, 2, 1, 1), t).unwrap();
                            assert_eq!(mm(&direct), mm(&via));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn t_zero_gives_the_constant_value() {
        for (prof, dims) in crate::decomposition::small_profiles(2) {
            assert_eq!(mm(&bxc_extremal_fixed(&prof, dims, 0).unwrap()), (prof.r_a, prof.r_a));
            let c = completion_extremal_from_profile(&prof, dims, RankConstraint::fixed(0)).unwrap();
            assert_eq!(mm(&c), (prof.r_m, prof.r_m));
        }
    }

    #[test]
    fn inconsistent_profile_is_an_error() {
        let dims = Dims::new(2, 2, 2, 2);
        let bad = RankProfile { r_a: 2, r_g: 1, r_h: 2, r_m: 2 };
        assert!(matches!(bxc_extremal_fixed(&bad, dims, 1), Err(Error::Consistency(_))));
    }
}
