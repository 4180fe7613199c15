use std::env;
use std::fs;
use std::path::{Path, PathBuf};

use rankx_core::decomposition::{decompose, parameters_from_profile};
use rankx_core::formulas::{
    all_entries_shifted_extremal, bxc_extremal_matrices, classify, completion_extremal, completion_predicates,
    shifted_profile, ExtremalResult, RankConstraint, Term,
};
use rankx_core::oracle::{sweep_with, BudgetMode, DimBounds, EnumerationBudget, SweepRecord, DEFAULT_CAP};
use rankx_core::profile::triple_dims;
use rankx_core::witness::{bxc_range_witness, bxc_witness, completion_witness, Target, Witness};
use rankx_core::{format_matrix, parse_matrix, rank_profile, AnyMatrix, Field, FieldSpec, Matrix, PrimeField, Rationals};

use crate::output::Out;
use crate::{Command, ConstraintArgs, Triple};

type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

enum Loaded {
    Q(Vec<Matrix<Rationals>>),
    P(Vec<Matrix<PrimeField>>),
}

/// Runs `$body` with `$ms` bound to the operands over whichever field they share.
macro_rules! with_matrices {
    ($loaded:expr, |$ms:ident| $body:expr) => {
        match $loaded {
            Loaded::Q($ms) => $body,
            Loaded::P($ms) => $body,
        }
    };
}

fn read(path: &Path) -> CliResult<AnyMatrix> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(parse_matrix(&text).map_err(|e| format!("{}: {e}", path.display()))?)
}

/// Parse every operand and bring them to one field: the override if given,
/// otherwise the field they all share.
fn load(paths: &[&PathBuf], field: Option<FieldSpec>) -> CliResult<Loaded> {
    let mut mats = paths.iter().map(|p| read(p)).collect::<CliResult<Vec<_>>>()?;
    let target = match field {
        Some(f) => f,
        None => {
            let first = mats[0].spec();
            if let Some(other) = mats.iter().find(|m| m.spec() != first) {
                return Err(format!(
                    "operands are over different fields ({first} and {}); pass --field to pick one",
                    other.spec()
                )
                .into());
            }
            first
        }
    };
    for (m, path) in mats.iter_mut().zip(paths) {
        *m = m.convert(target).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(match target {
        FieldSpec::Rationals => Loaded::Q(
            mats.into_iter()
                .map(|m| match m {
                    AnyMatrix::Rational(m) => m,
                    AnyMatrix::Prime(_) => unreachable!("converted to Q"),
                })
                .collect(),
        ),
        FieldSpec::Prime(_) => Loaded::P(
            mats.into_iter()
                .map(|m| match m {
                    AnyMatrix::Prime(m) => m,
                    AnyMatrix::Rational(_) => unreachable!("converted to GF(p)"),
                })
                .collect(),
        ),
    })
}

fn load_triple(t: &Triple, field: Option<FieldSpec>) -> CliResult<Loaded> {
    load(&[&t.a, &t.b, &t.c], field)
}

/// `None` when no constraint was given.
fn constraint(args: &ConstraintArgs) -> Option<RankConstraint> {
    match (&args.rank, &args.rank_range) {
        (Some(t), _) => Some(RankConstraint::fixed(*t)),
        (None, Some(st)) => Some(RankConstraint::range(st[0], st[1])),
        (None, None) => None,
    }
}

/// An omitted constraint means every rank the shape allows.
fn or_global(c: Option<RankConstraint>, p: usize, q: usize) -> RankConstraint {
    c.unwrap_or(RankConstraint::range(0, p.min(q)))
}

fn describe_constraint(out: &mut Out, c: Option<RankConstraint>) {
    match c {
        None => out.kv(&[("constraint", "none")]),
        Some(c) if c.kind == rankx_core::formulas::ConstraintKind::Fixed => {
            out.kv(&[("constraint", "fixed".to_string()), ("t", c.t.to_string())])
        }
        Some(c) => out.kv(&[
            ("constraint", "range".to_string()),
            ("s", c.s.to_string()),
            ("t", c.t.to_string()),
        ]),
    }
}

fn terms(out: &mut Out, prefix: &str, terms: &[Term]) {
    let pairs: Vec<(String, i64)> = terms.iter().map(|t| (format!("{prefix}:{}", t.label), t.value)).collect();
    out.kv(&pairs);
}

fn extremal_report(out: &mut Out, r: &ExtremalResult, min_is_max_of: bool) {
    out.kv(&[("max", r.max_rank), ("min", r.min_rank)]);
    out.note("max is the least of:");
    terms(out, "max_term", &r.max_terms);
    out.note(if min_is_max_of { "min is the greatest of:" } else { "min is the least of the per-rank minima:" });
    terms(out, "min_term", &r.min_terms);
}

pub fn run(cmd: Command, field: Option<FieldSpec>, out: &mut Out) -> CliResult<bool> {
    match cmd {
        Command::Rank { matrix } => {
            let m = read(&matrix)?;
            let m = match field {
                Some(f) => m.convert(f)?,
                None => m,
            };
            out.kv(&[("rank", m.rank())]);
        }
        Command::Profile { triple } => with_matrices!(load_triple(&triple, field)?, |ms| profile(out, &ms)?),
        Command::Extremal { triple, constraint: c } => {
            with_matrices!(load_triple(&triple, field)?, |ms| extremal(out, &ms, constraint(&c))?)
        }
        Command::Witness {
            triple,
            constraint: c,
            target,
            output,
        } => with_matrices!(load_triple(&triple, field)?, |ms| witness(
            out,
            &ms,
            constraint(&c),
            target,
            output.as_deref()
        )?),
        Command::Decompose { triple } => with_matrices!(load_triple(&triple, field)?, |ms| decomposition(out, &ms)?),
        Command::Complete {
            triple,
            constraint: c,
            target,
            output,
        } => with_matrices!(load_triple(&triple, field)?, |ms| complete(
            out,
            &ms,
            constraint(&c),
            target,
            output.as_deref()
        )?),
        Command::Shifted { a, b, c, d, rank } => {
            with_matrices!(load(&[&a, &b, &c, &d], field)?, |ms| shifted(out, &ms, rank)?)
        }
        Command::Verify {
            dims,
            family,
            samples,
            seed,
            cap,
            summary_only,
        } => {
            let p = match field.unwrap_or(FieldSpec::Prime(2)) {
                FieldSpec::Prime(p) => p,
                FieldSpec::Rationals => return Err("verify enumerates matrices and needs a prime field".into()),
            };
            let bounds = parse_bounds(&dims)?;
            let seed = match env::var("RANKX_SEED") {
                Ok(s) => s.parse().map_err(|_| format!("RANKX_SEED must be an unsigned integer, got `{s}`"))?,
                Err(_) => seed,
            };
            let budget = EnumerationBudget {
                mode: if samples.is_some() { BudgetMode::Sampled } else { BudgetMode::Exhaustive },
                cap: cap.unwrap_or(DEFAULT_CAP),
                samples: samples.unwrap_or(0),
                seed,
            };
            let mut lines = Vec::new();
            let mut keep = |r: &SweepRecord| {
                if !summary_only {
                    lines.push(r.to_string());
                }
            };
            let summary = sweep_with(p, bounds, &budget, family, if summary_only { None } else { Some(&mut keep) })?;
            for l in &lines {
                out.line(l);
            }
            if summary_only {
                for r in &summary.failures {
                    out.line(&r.to_string());
                }
            }
            out.line(&summary.to_string());
            return Ok(summary.mismatches == 0);
        }
    }
    Ok(true)
}

fn parse_bounds(s: &str) -> CliResult<DimBounds> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|x| x.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("--dims takes `d` or `m,n,p,q`, got `{s}`"))?;
    match parts[..] {
        [d] => Ok(DimBounds::cube(d)),
        [m, n, p, q] => Ok(DimBounds { m, n, p, q }),
        _ => Err(format!("--dims takes `d` or `m,n,p,q`, got `{s}`").into()),
    }
}

fn profile<F: Field>(out: &mut Out, ms: &[Matrix<F>]) -> CliResult<()> {
    let (a, b, c) = (&ms[0], &ms[1], &ms[2]);
    let dims = triple_dims(a, b, c)?;
    let prof = rank_profile(a, b, c)?;
    out.kv(&[("m", dims.m), ("n", dims.n), ("p", dims.p), ("q", dims.q)]);
    out.kv(&[
        ("r_a", prof.r_a),
        ("r_g", prof.r_g),
        ("r_h", prof.r_h),
        ("r_m", prof.r_m),
        ("r_b", b.rank()),
        ("r_c", c.rank()),
    ]);
    let pr = parameters_from_profile(&prof, b.rank(), c.rank(), dims)?;
    out.kv(&[
        ("j", pr.j),
        ("k", pr.k),
        ("l", pr.l),
        ("u", pr.u),
        ("s1", pr.s1),
        ("s2", pr.s2),
        ("t1", pr.t1),
        ("t2", pr.t2),
    ]);
    Ok(())
}

fn extremal<F: Field>(out: &mut Out, ms: &[Matrix<F>], c: Option<RankConstraint>) -> CliResult<()> {
    let (a, b, cm) = (&ms[0], &ms[1], &ms[2]);
    let dims = triple_dims(a, b, cm)?;
    let k = or_global(c, dims.p, dims.q);
    let r = bxc_extremal_matrices(a, b, cm, k)?;
    extremal_report(out, &r, k.kind == rankx_core::formulas::ConstraintKind::Fixed);
    describe_constraint(out, c);
    if let Some(k) = c.filter(|k| k.kind == rankx_core::formulas::ConstraintKind::Fixed) {
        let report = classify(&rank_profile(a, b, cm)?, dims, k.t)?;
        let conditions: Vec<String> = report.invariance_conditions.iter().map(|c| c.to_string()).collect();
        out.kv(&[
            ("nonsingular_attainable", report.nonsingular_attainable.to_string()),
            ("zero_attainable", report.zero_attainable.to_string()),
            ("rank_invariant", report.rank_invariant.to_string()),
            (
                "invariance_conditions",
                if conditions.is_empty() { "none".into() } else { conditions.join(",") },
            ),
        ]);
        if let Some(note) = &report.nonsingular_note {
            out.note(&format!("nonsingularity not possible: {note}"));
        }
    }
    Ok(())
}

fn write_matrix<F: Field>(path: Option<&Path>, x: &Matrix<F>) -> CliResult<()> {
    if let Some(path) = path {
        fs::write(path, format_matrix(x)).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}

fn witness_report<F: Field>(
    out: &mut Out,
    w: &Witness<F>,
    objective: impl Fn(&Matrix<F>) -> rankx_core::Result<Matrix<F>>,
) -> CliResult<()> {
    out.kv(&[
        ("target", w.target.to_string()),
        ("rank_x", w.x_rank.to_string()),
        ("objective_rank", w.objective_rank.to_string()),
        ("formula", w.formula_value.to_string()),
    ]);
    if let Some(plan) = w.plan {
        out.kv(&[("core_rank", plan.rho), ("padding_rank", plan.pad), ("padding_capacity", plan.z)]);
    }
    out.matrix("X", &w.x);
    // Recomputed here from scratch rather than trusted from the builder.
    let rx = w.x.rank();
    let ro = objective(&w.x)?.rank();
    out.kv(&[
        ("verified_rank_x", rx.to_string()),
        ("verified_objective_rank", ro.to_string()),
        ("verified", (rx == w.x_rank && ro == w.formula_value).to_string()),
    ]);
    Ok(())
}

fn witness<F: Field>(
    out: &mut Out,
    ms: &[Matrix<F>],
    c: Option<RankConstraint>,
    target: Option<Target>,
    output: Option<&Path>,
) -> CliResult<()> {
    let (a, b, cm) = (&ms[0], &ms[1], &ms[2]);
    let dims = triple_dims(a, b, cm)?;
    let k = or_global(c, dims.p, dims.q);
    let targets = target.map_or(vec![Target::Max, Target::Min], |t| vec![t]);
    describe_constraint(out, c);
    for t in targets {
        let w = match k.kind {
            rankx_core::formulas::ConstraintKind::Fixed => bxc_witness(a, b, cm, k.t, t)?,
            rankx_core::formulas::ConstraintKind::Range => bxc_range_witness(a, b, cm, k.s, k.t, t)?,
        };
        witness_report(out, &w, |x| a.add(&Matrix::product(&[b, x, cm])?))?;
        write_matrix(output, &w.x)?;
    }
    Ok(())
}

fn decomposition<F: Field>(out: &mut Out, ms: &[Matrix<F>]) -> CliResult<()> {
    let (a, b, c) = (&ms[0], &ms[1], &ms[2]);
    let dec = decompose(a, b, c)?;
    let pr = dec.params;
    out.kv(&[
        ("j", pr.j),
        ("k", pr.k),
        ("l", pr.l),
        ("u", pr.u),
        ("s1", pr.s1),
        ("s2", pr.s2),
        ("t1", pr.t1),
        ("t2", pr.t2),
    ]);
    out.note("A = P Sigma_A Q, B = P Sigma_B U, C = V Sigma_C Q");
    for (name, m) in [
        ("P", &dec.p_factor),
        ("Q", &dec.q_factor),
        ("U", &dec.u_factor),
        ("V", &dec.v_factor),
        ("Sigma_A", &dec.sigma_a),
        ("Sigma_B", &dec.sigma_b),
        ("Sigma_C", &dec.sigma_c),
    ] {
        out.matrix(name, m);
    }
    dec.verify(a, b, c)?;
    out.kv(&[("reconstruction", "exact"), ("sigma_pattern", "conforms")]);
    Ok(())
}

fn complete<F: Field>(
    out: &mut Out,
    ms: &[Matrix<F>],
    c: Option<RankConstraint>,
    target: Option<Target>,
    output: Option<&Path>,
) -> CliResult<()> {
    let (a, b, cm) = (&ms[0], &ms[1], &ms[2]);
    let dims = triple_dims(a, b, cm)?;
    let k = or_global(c, dims.p, dims.q);
    let r = completion_extremal(a, b, cm, k)?;
    extremal_report(out, &r, k.kind == rankx_core::formulas::ConstraintKind::Fixed);
    describe_constraint(out, c);
    if k.kind == rankx_core::formulas::ConstraintKind::Fixed && dims.m + dims.q == dims.n + dims.p {
        let pred = completion_predicates(a, b, cm, k.t)?;
        out.kv(&[("exists_nonsingular", pred.exists_nonsingular), ("all_nonsingular", pred.all_nonsingular)]);
    }
    if let Some(t) = target {
        let w = completion_witness(a, b, cm, k.t, t)?;
        witness_report(out, &w, |x| Matrix::block2x2(a, b, cm, x))?;
        write_matrix(output, &w.x)?;
    }
    Ok(())
}

fn shifted<F: Field>(out: &mut Out, ms: &[Matrix<F>], t: usize) -> CliResult<()> {
    let (a, b, c, d) = (&ms[0], &ms[1], &ms[2], &ms[3]);
    let prof = shifted_profile(a, b, c, d)?;
    let r = all_entries_shifted_extremal(a, b, c, d, t)?;
    extremal_report(out, &r, true);
    out.kv(&[("r_g", prof.r_g), ("r_h", prof.r_h), ("r_m", prof.r_m), ("r_e", prof.r_e)]);
    Ok(())
}
