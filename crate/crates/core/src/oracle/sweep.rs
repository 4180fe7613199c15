//! Sweeps: run the oracle over every instance within some shape bounds (or a
//! seeded sample of them) and tally formula agreement.
//!
//! Work is split into chunks that run in parallel; chunk results are merged in
//! a fixed order so records and summaries do not depend on scheduling.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::kernel::{Gf, Small, MAX_SIDE};
use super::{
    completion_as_bxc, completion_rank, extremes_by_rank, gf2_max_exclusion, judge, kernel_profile, kernel_shifted_profile,
    random_fixed_rank, rank_table, shifted_as_bxc, space_size, sum_as_bxc, BudgetMode, BxcObjective, EnumerationBudget,
    Family, RankExtremes, RankTable, Verdict,
};
use crate::error::{Error, Result};
use crate::formulas::{self, ExtremalResult, RankConstraint, ShiftedProfile};
use crate::profile::{Dims, RankProfile};

/// Upper bounds on the block shapes. Every dimension runs from 1 to its bound.
/// The shifted and sum families only use `m` and `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimBounds {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub q: usize,
}

impl DimBounds {
    pub fn cube(d: usize) -> Self {
        DimBounds { m: d, n: d, p: d, q: d }
    }

    fn all_dims(&self) -> Vec<Dims> {
        let mut out = Vec::new();
        for m in 1..=self.m {
            for n in 1..=self.n {
                for p in 1..=self.p {
                    for q in 1..=self.q {
                        out.push(Dims::new(m, n, p, q));
                    }
                }
            }
        }
        out
    }

    fn shapes(&self) -> Vec<(usize, usize)> {
        (1..=self.m).flat_map(|m| (1..=self.n).map(move |n| (m, n))).collect()
    }
}

/// One checked instance and constraint.
#[derive(Debug, Clone)]
pub struct SweepRecord {
    pub family: Family,
    pub characteristic: u8,
    pub dims: Dims,
    pub blocks: Vec<(&'static str, Small)>,
    pub constraint: RankConstraint,
    pub formula_max: usize,
    pub formula_min: usize,
    pub observed_max: usize,
    pub observed_min: usize,
    /// The derived yes/no predicates agree with what was observed.
    pub predicates_agree: bool,
    pub verdict: Verdict,
    pub excluded: bool,
}

impl SweepRecord {
    pub fn fingerprint(&self) -> String {
        let blocks: Vec<(&str, &Small)> = self.blocks.iter().map(|(n, m)| (*n, m)).collect();
        super::fingerprint(self.characteristic, &blocks)
    }
}

impl fmt::Display for SweepRecord {
    /// One `key=value` line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Dims { m, n, p, q } = self.dims;
        write!(f, "family={} field=GF{} m={m} n={n} p={p} q={q}", self.family, self.characteristic)?;
        for (name, block) in &self.blocks {
            write!(f, " {name}={}", block.digits())?;
        }
        write!(
            f,
            " {} formula_max={} formula_min={} observed_max={} observed_min={} predicates={} verdict={} excluded={}",
            self.constraint,
            self.formula_max,
            self.formula_min,
            self.observed_max,
            self.observed_min,
            if self.predicates_agree { "agree" } else { "disagree" },
            self.verdict,
            self.excluded
        )
    }
}

/// Tallies for one sweep.
#[derive(Debug, Clone, Default)]
pub struct SweepSummary {
    pub family: Option<Family>,
    pub characteristic: u8,
    pub instances: u64,
    pub matches: u64,
    /// Mismatches plus out-of-bounds samples.
    pub mismatches: u64,
    /// Failures that fall inside the GF(2) exclusion.
    pub excluded_mismatches: u64,
    /// Instances inside the GF(2) exclusion that nevertheless matched.
    pub excluded_matches: u64,
    /// Sampled instances whose `X` space was over the cap.
    pub skipped: u64,
    /// Every failing record, in sweep order.
    pub failures: Vec<SweepRecord>,
}

impl SweepSummary {
    /// Failures not accounted for by the GF(2) exclusion.
    pub fn unexplained_mismatches(&self) -> u64 {
        self.mismatches - self.excluded_mismatches
    }

    fn absorb(&mut self, rec: &SweepRecord) {
        self.instances += 1;
        if rec.verdict.is_failure() {
            self.mismatches += 1;
            if rec.excluded {
                self.excluded_mismatches += 1;
            }
        } else {
            self.matches += 1;
            if rec.excluded {
                self.excluded_matches += 1;
            }
        }
    }

    fn merge(&mut self, other: SweepSummary) {
        self.instances += other.instances;
        self.matches += other.matches;
        self.mismatches += other.mismatches;
        self.excluded_mismatches += other.excluded_mismatches;
        self.excluded_matches += other.excluded_matches;
        self.skipped += other.skipped;
        self.failures.extend(other.failures);
    }
}

impl fmt::Display for SweepSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let family = self.family.map(|f| f.to_string()).unwrap_or_else(|| "none".into());
        write!(
            f,
            "summary family={family} field=GF{} instances={} matches={} mismatches={} excluded_mismatches={} excluded_matches={} skipped={}",
            self.characteristic,
            self.instances,
            self.matches,
            self.mismatches,
            self.excluded_mismatches,
            self.excluded_matches,
            self.skipped
        )
    }
}

/// Sweep collecting only the failing records.
pub fn sweep(p: u32, bounds: DimBounds, budget: &EnumerationBudget, family: Family) -> Result<SweepSummary> {
    sweep_with(p, bounds, budget, family, None)
}

/// Sweep, handing every record to `on_record` in a deterministic order.
pub fn sweep_with(
    p: u32,
    bounds: DimBounds,
    budget: &EnumerationBudget,
    family: Family,
    mut on_record: Option<&mut dyn FnMut(&SweepRecord)>,
) -> Result<SweepSummary> {
    let gf = Gf::new(p)?;
    let keep_all = on_record.is_some();
    let chunks = match family {
        Family::Shifted => shifted_chunks(&gf, bounds, budget, keep_all)?,
        Family::Sum => sum_chunks(&gf, bounds, budget)?,
        _ => triple_chunks(&gf, bounds, budget, family)?,
    };
    let mut summary = SweepSummary {
        family: Some(family),
        characteristic: gf.p(),
        ..Default::default()
    };
    for chunk in chunks {
        if let Some(cb) = on_record.as_deref_mut() {
            chunk.records.iter().for_each(&mut *cb);
        }
        summary.merge(chunk.summary);
    }
    Ok(summary)
}

struct Chunk {
    summary: SweepSummary,
    records: Vec<SweepRecord>,
}

impl Chunk {
    fn from_records(records: Vec<SweepRecord>, skipped: u64) -> Self {
        let mut summary = SweepSummary {
            skipped,
            ..Default::default()
        };
        for r in &records {
            summary.absorb(r);
        }
        summary.failures = records.iter().filter(|r| r.verdict.is_failure()).cloned().collect();
        Chunk { summary, records }
    }
}

fn check_side(rows: usize, cols: usize) -> Result<()> {
    if rows > MAX_SIDE || cols > MAX_SIDE {
        return Err(Error::Precondition(format!(
            "a {rows}x{cols} objective is larger than the oracle's {MAX_SIDE}x{MAX_SIDE} limit"
        )));
    }
    Ok(())
}

fn random_mixed(gf: &Gf, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Small {
    let t = rng.gen_range(0..=rows.min(cols));
    random_fixed_rank(gf, rows, cols, t, rng)
}

// ---------------------------------------------------------------------------
// A + BXC, completion, BXC alone

struct TripleCtx<'a> {
    gf: Gf,
    family: Family,
    budget: &'a EnumerationBudget,
}

fn triple_chunks(gf: &Gf, bounds: DimBounds, budget: &EnumerationBudget, family: Family) -> Result<Vec<Chunk>> {
    let ctx = TripleCtx {
        gf: *gf,
        family,
        budget,
    };
    let p = u32::from(gf.p());
    match budget.mode {
        BudgetMode::Exhaustive => {
            let mut work = Vec::new();
            for dims in bounds.all_dims() {
                let Dims { m, n, p: pp, q } = dims;
                if family == Family::Completion {
                    check_side(m + q, n + pp)?;
                } else {
                    check_side(m, n)?;
                }
                let a_space = if family == Family::BxcOnly { 1 } else { space_size(p, m, n) };
                let per_a = space_size(p, m, pp).saturating_mul(space_size(p, q, n));
                budget.admit(a_space.saturating_mul(per_a))?;
                let (xr, xc) = if family == Family::Completion { (q, pp) } else { (pp, q) };
                rank_table(gf, xr, xc, budget)?;
                work.extend((0..a_space as u64).map(|a| (dims, a)));
            }
            work.into_par_iter()
                .map(|(dims, a_code)| ctx.exhaustive_chunk(dims, a_code))
                .collect()
        }
        BudgetMode::Sampled => {
            let dims_list = bounds.all_dims();
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
            let mut work = Vec::with_capacity(budget.samples);
            while work.len() < budget.samples {
                let dims = dims_list[rng.gen_range(0..dims_list.len())];
                let Dims { m, n, p: pp, q } = dims;
                let a = if family == Family::BxcOnly { Small::zeros(m, n) } else { random_mixed(gf, m, n, &mut rng) };
                let b = random_mixed(gf, m, pp, &mut rng);
                let c = random_mixed(gf, q, n, &mut rng);
                if family == Family::BxcOnly && (b.is_zero() || c.is_zero()) {
                    continue;
                }
                work.push((dims, a, b, c));
            }
            work.into_par_iter()
                .map(|(dims, a, b, c)| {
                    let (xr, xc) = if family == Family::Completion { (dims.q, dims.p) } else { (dims.p, dims.q) };
                    match rank_table(&ctx.gf, xr, xc, &EnumerationBudget::exhaustive(budget.cap)) {
                        Ok(table) => Ok(Chunk::from_records(ctx.instance(dims, &a, &b, &c, &table)?, 0)),
                        Err(Error::Budget { .. }) => Ok(Chunk::from_records(Vec::new(), 1)),
                        Err(e) => Err(e),
                    }
                })
                .collect()
        }
    }
}

impl TripleCtx<'_> {
    fn exhaustive_chunk(&self, dims: Dims, a_code: u64) -> Result<Chunk> {
        let Dims { m, n, p, q } = dims;
        let g = self.gf.p();
        let a = Small::from_code(m, n, g, a_code);
        let (xr, xc) = if self.family == Family::Completion { (q, p) } else { (p, q) };
        let table = rank_table(&self.gf, xr, xc, self.budget)?;
        let mut records = Vec::new();
        for b_code in 0..space_size(g.into(), m, p) as u64 {
            let b = Small::from_code(m, p, g, b_code);
            for c_code in 0..space_size(g.into(), q, n) as u64 {
                let c = Small::from_code(q, n, g, c_code);
                if self.family == Family::BxcOnly && (b.is_zero() || c.is_zero()) {
                    continue;
                }
                records.extend(self.instance(dims, &a, &b, &c, &table)?);
            }
        }
        Ok(Chunk::from_records(records, 0))
    }

    /// All records of one triple: every fixed rank, every range `s ≤ t`, or both
    /// (completion, where ranges with `s = t` would repeat the fixed ranks).
    fn instance(&self, dims: Dims, a: &Small, b: &Small, c: &Small, table: &RankTable) -> Result<Vec<SweepRecord>> {
        let gf = &self.gf;
        let hi = dims.max_x_rank();
        let prof = kernel_profile(gf, a, b, c);
        let per_rank = match self.family {
            Family::Completion => {
                let base = Small::block(a, b, c, &Small::zeros(dims.q, dims.p));
                extremes_by_rank(table, hi, |x| completion_rank(gf, &base, x))
            }
            _ => {
                let obj = BxcObjective::new(*gf, a, b, c);
                extremes_by_rank(table, hi, |x| obj.rank(x))
            }
        };
        let mut constraints: Vec<RankConstraint> = Vec::new();
        match self.family {
            Family::Fixed => constraints.extend((0..=hi).map(RankConstraint::fixed)),
            Family::BxcOnly => constraints.extend((1..=hi).map(RankConstraint::fixed)),
            Family::Range => {
                for t in 0..=hi {
                    constraints.extend((0..=t).map(|s| RankConstraint::range(s, t)));
                }
            }
            Family::Completion => {
                constraints.extend((0..=hi).map(RankConstraint::fixed));
                for t in 1..=hi {
                    constraints.extend((0..t).map(|s| RankConstraint::range(s, t)));
                }
            }
            Family::Shifted | Family::Sum => unreachable!("handled by their own sweeps"),
        }
        let blocks = match self.family {
            Family::BxcOnly => vec![("B", *b), ("C", *c)],
            _ => vec![("A", *a), ("B", *b), ("C", *c)],
        };
        let mut out = Vec::with_capacity(constraints.len());
        for constraint in constraints {
            let observed = RankExtremes::over_range(&per_rank, constraint.s, constraint.t)
                .ok_or_else(|| Error::Internal("empty rank class".into()))?;
            let (formula, predicates_agree, excluded) = self.judge_formula(&prof, dims, b, c, constraint, &observed)?;
            let mut verdict = judge(&observed, &formula, BudgetMode::Exhaustive);
            if !predicates_agree {
                verdict = Verdict::Mismatch;
            }
            out.push(SweepRecord {
                family: self.family,
                characteristic: gf.p(),
                dims,
                blocks: blocks.clone(),
                constraint,
                formula_max: formula.max_rank,
                formula_min: formula.min_rank,
                observed_max: observed.max,
                observed_min: observed.min,
                predicates_agree,
                verdict,
                excluded,
            });
        }
        Ok(out)
    }

    fn judge_formula(
        &self,
        prof: &RankProfile,
        dims: Dims,
        b: &Small,
        c: &Small,
        constraint: RankConstraint,
        observed: &RankExtremes,
    ) -> Result<(ExtremalResult, bool, bool)> {
        let Dims { m, n, .. } = dims;
        let g = u32::from(self.gf.p());
        let lowest = if constraint.kind == formulas::ConstraintKind::Fixed { constraint.t } else { constraint.s };
        let t = constraint.t;
        Ok(match self.family {
            Family::Fixed => {
                let formula = formulas::bxc_extremal(prof, dims, constraint)?;
                let report = formulas::classify(prof, dims, t)?;
                let agree = report.nonsingular_attainable == (m == n && observed.max == m)
                    && report.zero_attainable == (observed.min == 0)
                    && (t == 0 || report.invariance_conditions.is_empty() != (observed.max == observed.min));
                (formula, agree, gf2_max_exclusion(g, prof, dims, lowest))
            }
            Family::Range => {
                let formula = formulas::bxc_extremal(prof, dims, constraint)?;
                (formula, true, gf2_max_exclusion(g, prof, dims, lowest))
            }
            Family::BxcOnly => {
                let (formula, report) = formulas::bxc_only_from_ranks(b.rank(&self.gf), c.rank(&self.gf), dims, t)?;
                let agree = report.nonsingular_attainable == (m == n && observed.max == m)
                    && report.zero_attainable == (observed.min == 0)
                    && report.rank_invariant == (observed.max == observed.min);
                (formula, agree, false)
            }
            Family::Completion => {
                let formula = formulas::completion_extremal_from_profile(prof, dims, constraint)?;
                let full = m + dims.q;
                let agree = if full == n + dims.p && constraint.kind == formulas::ConstraintKind::Fixed {
                    let report = formulas::completion_predicates_from_profile(prof, dims, t)?;
                    report.exists_nonsingular == (observed.max == full) && report.all_nonsingular == (observed.min == full)
                } else {
                    true
                };
                let (eprof, edims) = completion_as_bxc(prof, dims);
                (formula, agree, gf2_max_exclusion(g, &eprof, edims, lowest))
            }
            Family::Shifted | Family::Sum => unreachable!("handled by their own sweeps"),
        })
    }
}

// ---------------------------------------------------------------------------
// A + X

fn sum_chunks(gf: &Gf, bounds: DimBounds, budget: &EnumerationBudget) -> Result<Vec<Chunk>> {
    let g = gf.p();
    let mut instances = Vec::new();
    match budget.mode {
        BudgetMode::Exhaustive => {
            for (m, n) in bounds.shapes() {
                check_side(m, n)?;
                budget.admit(space_size(g.into(), m, n))?;
                instances.extend((0..space_size(g.into(), m, n) as u64).map(|code| Small::from_code(m, n, g, code)));
            }
        }
        BudgetMode::Sampled => {
            let shapes = bounds.shapes();
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
            for _ in 0..budget.samples {
                let (m, n) = shapes[rng.gen_range(0..shapes.len())];
                instances.push(random_mixed(gf, m, n, &mut rng));
            }
        }
    }
    instances
        .into_par_iter()
        .map(|a| {
            let (m, n) = (a.rows(), a.cols());
            let table = match rank_table(gf, m, n, &EnumerationBudget::exhaustive(budget.cap)) {
                Ok(t) => t,
                Err(Error::Budget { .. }) => return Ok(Chunk::from_records(Vec::new(), 1)),
                Err(e) => return Err(e),
            };
            let hi = m.min(n);
            let r_a = a.rank(gf);
            let per_rank = extremes_by_rank(&table, hi, |x| a.add(x, gf).rank(gf));
            let (eprof, edims) = sum_as_bxc(r_a, m, n);
            let mut constraints: Vec<RankConstraint> = (0..=hi).map(RankConstraint::fixed).collect();
            for t in 1..=hi {
                constraints.extend((0..t).map(|s| RankConstraint::range(s, t)));
            }
            let mut records = Vec::new();
            for constraint in constraints {
                let observed = RankExtremes::over_range(&per_rank, constraint.s, constraint.t)
                    .ok_or_else(|| Error::Internal("empty rank class".into()))?;
                let formula = formulas::sum_extremal_from_rank(r_a, m, n, constraint)?;
                let lowest = if constraint.kind == formulas::ConstraintKind::Fixed { constraint.t } else { constraint.s };
                records.push(SweepRecord {
                    family: Family::Sum,
                    characteristic: g,
                    dims: Dims::new(m, n, m, n),
                    blocks: vec![("A", a)],
                    constraint,
                    formula_max: formula.max_rank,
                    formula_min: formula.min_rank,
                    observed_max: observed.max,
                    observed_min: observed.min,
                    predicates_agree: true,
                    verdict: judge(&observed, &formula, BudgetMode::Exhaustive),
                    excluded: gf2_max_exclusion(g.into(), &eprof, edims, lowest),
                });
            }
            Ok(Chunk::from_records(records, 0))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// [[A − X, B − X], [C − X, D − X]]
//
// Writing B = A + B', C = A + C', D = A + D' and Y = A − X, the objective is the
// rank of [[Y, Y + B'], [Y + C', Y + D']], a function of Y alone once the
// offsets are fixed. Each chunk fixes the offsets, tabulates that function over
// all Y, and then reads off every (A, X) pair by table lookup.

struct ShiftedShape {
    m: usize,
    n: usize,
    size: usize,
    /// Codes of the `X` of each rank.
    x_by_rank: Vec<Vec<u32>>,
    /// `diff[a * size + x]` is the code of `A − X`.
    diff: Vec<u32>,
}

impl ShiftedShape {
    fn new(gf: &Gf, table: &RankTable) -> Self {
        let (m, n) = (table.rows, table.cols);
        let size = space_size(gf.p().into(), m, n) as usize;
        let code = |x: &Small| x.entries().iter().fold(0u32, |acc, &d| acc * u32::from(gf.p()) + u32::from(d));
        let x_by_rank = table.by_rank.iter().map(|g| g.iter().map(code).collect()).collect();
        let all: Vec<Small> = (0..size as u64).map(|c| Small::from_code(m, n, gf.p(), c)).collect();
        let mut diff = Vec::with_capacity(size * size);
        for a in &all {
            for x in &all {
                diff.push(code(&a.sub(x, gf)));
            }
        }
        ShiftedShape {
            m,
            n,
            size,
            x_by_rank,
            diff,
        }
    }
}

fn shifted_chunks(gf: &Gf, bounds: DimBounds, budget: &EnumerationBudget, keep_all: bool) -> Result<Vec<Chunk>> {
    let g = gf.p();
    let mut shapes = Vec::new();
    for (m, n) in bounds.shapes() {
        check_side(2 * m, 2 * n)?;
        let table = rank_table(gf, m, n, budget)?;
        shapes.push(ShiftedShape::new(gf, &table));
    }
    match budget.mode {
        BudgetMode::Exhaustive => {
            let mut work = Vec::new();
            for (i, shape) in shapes.iter().enumerate() {
                let offsets = space_size(g.into(), shape.m, 3 * shape.n);
                budget.admit(offsets.saturating_mul(shape.size as u128))?;
                work.extend((0..offsets as u64).map(|o| (i, o)));
            }
            work.into_par_iter()
                .map(|(i, offset)| Ok(shifted_offset_chunk(gf, &shapes[i], offset, keep_all)))
                .collect()
        }
        BudgetMode::Sampled => {
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
            let picks: Vec<(usize, Small, Small, Small, Small)> = (0..budget.samples)
                .map(|_| {
                    let i = rng.gen_range(0..shapes.len());
                    let (m, n) = (shapes[i].m, shapes[i].n);
                    let mut blocks = [(); 4].map(|_| random_mixed(gf, m, n, &mut rng));
                    // Mix in correlated blocks, where the interesting cases live.
                    if rng.gen_bool(0.5) {
                        blocks[3] = blocks[1].add(&blocks[2], gf).sub(&blocks[0], gf);
                    }
                    (i, blocks[0], blocks[1], blocks[2], blocks[3])
                })
                .collect();
            picks
                .into_par_iter()
                .map(|(i, a, b, c, d)| Ok(shifted_instance(gf, &shapes[i], [a, b, c, d])))
                .collect()
        }
    }
}

fn shifted_record(
    g: u8,
    shape: &ShiftedShape,
    blocks: [Small; 4],
    sprof: ShiftedProfile,
    t: usize,
    observed: (usize, usize),
    formula: (usize, usize),
) -> SweepRecord {
    let (m, n) = (shape.m, shape.n);
    let (eprof, edims) = shifted_as_bxc(&sprof, m, n);
    let verdict = if observed == formula { Verdict::Match } else { Verdict::Mismatch };
    SweepRecord {
        family: Family::Shifted,
        characteristic: g,
        dims: Dims::new(m, n, m, n),
        blocks: vec![("A", blocks[0]), ("B", blocks[1]), ("C", blocks[2]), ("D", blocks[3])],
        constraint: RankConstraint::fixed(t),
        formula_max: formula.0,
        formula_min: formula.1,
        observed_max: observed.0,
        observed_min: observed.1,
        predicates_agree: true,
        verdict,
        excluded: gf2_max_exclusion(g.into(), &eprof, edims, t),
    }
}

fn shifted_formula(sprof: &ShiftedProfile, m: usize, n: usize, t: usize) -> (usize, usize) {
    let r = formulas::shifted_extremal_from_profile(sprof, m, n, t).expect("kernel profiles are consistent");
    (r.max_rank, r.min_rank)
}

fn shifted_offset_chunk(gf: &Gf, shape: &ShiftedShape, offset: u64, keep_all: bool) -> Chunk {
    let g = gf.p();
    let (m, n, size) = (shape.m, shape.n, shape.size as u64);
    let bo = Small::from_code(m, n, g, offset / (size * size));
    let co = Small::from_code(m, n, g, (offset / size) % size);
    let d_o = Small::from_code(m, n, g, offset % size);
    let zero = Small::zeros(m, n);
    let base = kernel_shifted_profile(gf, &zero, &bo, &co, &d_o);
    let ys: Vec<Small> = (0..size).map(|c| Small::from_code(m, n, g, c)).collect();
    let f: Vec<u8> = ys
        .iter()
        .map(|y| Small::block(y, &y.add(&bo, gf), &y.add(&co, gf), &y.add(&d_o, gf)).rank(gf) as u8)
        .collect();
    let hi = m.min(n);
    let mut formula_cache = vec![None; (2 * MAX_SIDE + 1) * (hi + 1)];
    let mut summary = SweepSummary::default();
    let mut records = Vec::new();
    for (a_idx, a) in ys.iter().enumerate() {
        let row = &shape.diff[a_idx * shape.size..(a_idx + 1) * shape.size];
        let sprof = ShiftedProfile {
            r_m: f[a_idx] as usize,
            ..base
        };
        for t in 0..=hi {
            let (mut lo, mut top) = (u8::MAX, 0u8);
            for &x in &shape.x_by_rank[t] {
                let v = f[row[x as usize] as usize];
                lo = lo.min(v);
                top = top.max(v);
            }
            let observed = (top as usize, lo as usize);
            let formula = *formula_cache[sprof.r_m * (hi + 1) + t].get_or_insert_with(|| shifted_formula(&sprof, m, n, t));
            let (eprof, edims) = shifted_as_bxc(&sprof, m, n);
            let excluded = gf2_max_exclusion(g.into(), &eprof, edims, t);
            let failed = observed != formula;
            if keep_all || failed || excluded {
                let blocks = [*a, a.add(&bo, gf), a.add(&co, gf), a.add(&d_o, gf)];
                let rec = shifted_record(g, shape, blocks, sprof, t, observed, formula);
                summary.absorb(&rec);
                if failed {
                    summary.failures.push(rec.clone());
                }
                if keep_all {
                    records.push(rec);
                }
            } else {
                summary.instances += 1;
                summary.matches += 1;
            }
        }
    }
    Chunk { summary, records }
}

fn shifted_instance(gf: &Gf, shape: &ShiftedShape, blocks: [Small; 4]) -> Chunk {
    let [a, b, c, d] = blocks;
    let sprof = kernel_shifted_profile(gf, &a, &b, &c, &d);
    let base = Small::block(&a, &b, &c, &d);
    let mut records = Vec::new();
    for t in 0..=shape.m.min(shape.n) {
        let (mut lo, mut top) = (usize::MAX, 0);
        for &x in &shape.x_by_rank[t] {
            let v = super::shifted_rank(gf, &base, &Small::from_code(shape.m, shape.n, gf.p(), x.into()));
            lo = lo.min(v);
            top = top.max(v);
        }
        let formula = shifted_formula(&sprof, shape.m, shape.n, t);
        records.push(shifted_record(gf.p(), shape, blocks, sprof, t, (top, lo), formula));
    }
    Chunk::from_records(records, 0)
}
