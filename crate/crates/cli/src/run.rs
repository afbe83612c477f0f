//! Task execution: build the core objects from a problem, run the
//! engine, and assemble a report.
//!
//! Outcomes fall into three classes.  A *hard error* (`Err(String)`)
//! means the problem could not be posed: bad JSON shape, unparsable
//! expressions, resource limits.  A *refusal* is a report with status
//! `refused`: the problem is well-posed but its hypotheses verifiably
//! fail, and the refusal names the witness.  Otherwise the report's
//! status is `solved`/`pass`, or `fail` for a check that completed and
//! found violations.

use std::path::Path;

use jetlift_core::borel::{
    assemble_borel, build_cutoff, check_derivative_bounds, check_flat_bounds, pointwise_sum,
    BorelError, Grid1D, SampledFunction, RATIO_THRESHOLD,
};
use jetlift_core::expr::parse_polynomial;
use jetlift_core::homotopy::{parametric_lift, specialize_system, verify_homotopy, HomotopyError};
use jetlift_core::ideal::{Filtration, IdealError, MonomialIdeal};
use jetlift_core::lift::{
    ann_coker_step, lift_general_filtration, tougeron_step, CertificateSource, LiftError,
    LiftSolution,
};
use jetlift_core::system::{formal_solution_check, quotient_unfold, PolySystem, SystemError};
use jetlift_core::{Jet, Rational, VarContext};
use num_traits::{One, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};

use crate::convert::{
    jet_to_json, jets_to_json, matrix_from_exprs, matrix_to_json, membership_to_json,
    memberships_to_json, rational_from_str, valuation_to_json, valuations_to_json,
};
use crate::schema::{
    BorelProblem, BorelResultJson, CheckFormalProblem, CheckFormalResultJson, CofinalProblem,
    CofinalResultJson, ConstraintJson, CutoffProblem, CutoffResultJson, DeformationCertJson,
    GridJson, HomotopyIssueJson, HomotopyProblem, HomotopyResultJson, LiftGeneralProblem,
    LiftGeneralResultJson, LiftProblem, LiftResultJson, Problem, RatioJson, RefusalJson, Report,
    SlopeJson, SpecializationJson, TaskResult, UnfoldJson, UnfoldSlackJson, Variables,
    WeakFgLevelJson, WeakFgProblem, WeakFgResultJson, REPORT_FORMAT,
};

/// Statuses that exit 0; `refused` and `fail` exit 2.
pub fn status_is_success(status: &str) -> bool {
    status == "solved" || status == "pass"
}

pub fn run_problem(
    problem: &Problem,
    seed: u64,
    trace: bool,
    csv_dir: Option<&Path>,
) -> Result<Report, String> {
    match problem {
        Problem::Lift(p) => run_lift(p, trace),
        Problem::LiftGeneral(p) => run_lift_general(p, trace),
        Problem::CheckFormal(p) => run_check_formal(p),
        Problem::Homotopy(p) => run_homotopy(p),
        Problem::WeakFg(p) => run_weak_fg(p),
        Problem::Cofinal(p) => run_cofinal(p),
        Problem::Cutoff(p) => run_cutoff(p, seed, csv_dir),
        Problem::Borel(p) => run_borel(p, seed, csv_dir),
    }
}

/// Writes one sampled function as a CSV file under `dir`.
fn write_csv(dir: &Path, name: &str, f: &SampledFunction) -> Result<(), String> {
    if name.contains(['/', '\\']) || name.starts_with('.') {
        return Err(format!("problem name makes an invalid CSV file name `{}`", name));
    }
    std::fs::write(dir.join(name), crate::csv::sampled_to_csv(f))
        .map_err(|e| format!("write CSV `{}`: {}", name, e))
}

fn report(name: &str, task: &str, status: &str, refusal: Option<RefusalJson>, result: Option<TaskResult>) -> Report {
    Report {
        tool: String::from("jetlift"),
        format: REPORT_FORMAT,
        name: name.to_owned(),
        task: task.to_owned(),
        status: status.to_owned(),
        refusal,
        result,
    }
}

// ---------------------------------------------------------------------------
// shared construction helpers
// ---------------------------------------------------------------------------

fn context(vars: &Variables) -> Result<VarContext, String> {
    VarContext::new(
        vars.x.iter().map(String::as_str),
        vars.y.iter().map(String::as_str),
        vars.t.as_deref(),
    )
    .map_err(|e| format!("variables: {}", e))
}

fn parse_jets(srcs: &[String], ctx: &VarContext, what: &str) -> Result<Vec<Jet>, String> {
    srcs.iter()
        .map(|s| parse_polynomial(s, ctx).map_err(|e| format!("{} `{}`: {}", what, s, e)))
        .collect()
}

fn build_system(
    vars: &Variables,
    equations: &[String],
    quotient: Option<&String>,
) -> Result<(PolySystem, VarContext, VarContext), String> {
    let ctx = context(vars)?;
    let base = ctx.without_y();
    let eqs = parse_jets(equations, &ctx, "equation")?;
    let quotient = quotient
        .map(|q| MonomialIdeal::parse(q, &base).map_err(|e| format!("quotient `{}`: {}", q, e)))
        .transpose()?;
    let sys = PolySystem::new(&ctx, eqs, quotient).map_err(|e| format!("system: {}", e))?;
    Ok((sys, ctx, base))
}

/// Splits a lift failure into a refusal (the hypotheses verifiably fail,
/// with a witness) or a hard error (the problem could not be posed or a
/// resource limit was hit).
fn lift_refusal(e: &LiftError, ctx: &VarContext) -> Result<RefusalJson, String> {
    let refusal = |code: &str, witness: Option<String>| {
        Ok(RefusalJson {
            code: code.to_owned(),
            message: e.to_string(),
            witness,
        })
    };
    match e {
        LiftError::HZero => refusal("h_zero", None),
        LiftError::ContractionViolated { generator, .. } => refusal(
            "contraction_violated",
            Some(generator.to_expr_string(ctx)),
        ),
        LiftError::ResidualNotInIdeal { witness, .. } => {
            refusal("residual_not_in_ideal", Some(witness.to_expr_string(ctx)))
        }
        LiftError::CertificateInvalid { .. } => refusal("certificate_invalid", None),
        LiftError::HDegeneratesAlongT { generator, .. } => refusal(
            "h_degenerates_along_t",
            Some(generator.to_expr_string(ctx)),
        ),
        LiftError::PrefixNotApproximate { witness, .. } => {
            refusal("prefix_not_approximate", Some(witness.to_expr_string(ctx)))
        }
        LiftError::Ideal(IdealError::NotDescending { .. }) => refusal("not_descending", None),
        other => Err(other.to_string()),
    }
}

fn lift_result_json(
    sol: &LiftSolution,
    base: &VarContext,
    unfold: Option<UnfoldJson>,
    trace: bool,
) -> LiftResultJson {
    LiftResultJson {
        order: sol.order,
        y_solution: jets_to_json(&sol.y_solution),
        delta_y: jets_to_json(&sol.delta_y),
        h: jet_to_json(&sol.h),
        h_valuation: sol.h_valuation,
        certificate_source: match sol.certificate_source {
            CertificateSource::GramAdjugate => String::from("gram_adjugate"),
            CertificateSource::Supplied => String::from("supplied"),
            CertificateSource::LevelShifted => String::from("level_shifted"),
        },
        cokernel: matrix_to_json(&sol.cokernel),
        iterations: sol.iterations,
        residual_valuations: valuations_to_json(&sol.residual_valuations),
        residual_membership: memberships_to_json(&sol.residual_membership, base),
        correction_membership: memberships_to_json(&sol.correction_membership, base),
        correction_ideal: sol.correction_ideal.to_expr_string(),
        correction_ideal_membership: memberships_to_json(&sol.correction_ideal_membership, base),
        unfold,
        z_trace: trace.then(|| sol.z_trace.iter().map(|zs| jets_to_json(zs)).collect()),
    }
}

// ---------------------------------------------------------------------------
// lift
// ---------------------------------------------------------------------------

fn run_lift(p: &LiftProblem, trace: bool) -> Result<Report, String> {
    let (sys, _ctx, base) = build_system(&p.variables, &p.equations, p.quotient.as_ref())?;
    let ideal = MonomialIdeal::parse(&p.ideal, &base)
        .map_err(|e| format!("ideal `{}`: {}", p.ideal, e))?;
    let mut y_start = parse_jets(&p.start, &base, "start")?;

    // A quotiented system is rewritten with explicit slack unknowns so
    // every certificate below is about a plain polynomial system.
    let unfolded = quotient_unfold(&sys).map_err(|e| format!("quotient unfolding: {}", e))?;
    let has_slacks = !unfolded.slacks.is_empty();
    if has_slacks && p.certificate.is_some() {
        return Err(String::from(
            "supplied certificates cannot be combined with a quotient; \
             certificates target the system exactly as written",
        ));
    }
    for _ in &unfolded.slacks {
        y_start.push(Jet::zero(&base, 0));
    }
    let sys = &unfolded.system;

    let outcome = match &p.certificate {
        None => tougeron_step(sys, &y_start, &ideal, p.order),
        Some(cert) => {
            let h = parse_polynomial(&cert.h, &base)
                .map_err(|e| format!("certificate h `{}`: {}", cert.h, e))?;
            let cokernel = matrix_from_exprs(&cert.cokernel, &base)
                .map_err(|e| format!("certificate cokernel: {}", e))?;
            ann_coker_step(sys, &y_start, &ideal, p.order, &h, &cokernel)
        }
    };
    match outcome {
        Ok(sol) => {
            let unfold = has_slacks.then(|| UnfoldJson {
                slacks: unfolded
                    .slacks
                    .iter()
                    .map(|(eq, g, name)| UnfoldSlackJson {
                        equation: *eq,
                        generator: g.to_expr_string(&base),
                        name: name.clone(),
                    })
                    .collect(),
                witnesses: jets_to_json(&sol.y_solution[unfolded.base_unknowns..]),
            });
            let result = lift_result_json(&sol, &base, unfold, trace);
            Ok(report(
                &p.name,
                "lift",
                "solved",
                None,
                Some(TaskResult::Lift(Box::new(result))),
            ))
        }
        Err(e) => {
            let refusal = lift_refusal(&e, &base)?;
            Ok(report(&p.name, "lift", "refused", Some(refusal), None))
        }
    }
}

// ---------------------------------------------------------------------------
// lift_general
// ---------------------------------------------------------------------------

fn run_lift_general(p: &LiftGeneralProblem, trace: bool) -> Result<Report, String> {
    let (sys, _ctx, base) = build_system(&p.variables, &p.equations, None)?;
    let filtration = Filtration::parse(&p.filtration, &base)
        .map_err(|e| format!("filtration `{}`: {}", p.filtration, e))?;
    let prefix = parse_jets(&p.prefix, &base, "prefix")?;
    match lift_general_filtration(&sys, &filtration, p.level, &prefix, p.order) {
        Ok(sol) => {
            let shifted_base = sol.shifted.y_solution[0].ctx().without_y();
            let result = LiftGeneralResultJson {
                order: p.order,
                level: sol.level,
                level_generators: sol
                    .level_generators
                    .iter()
                    .map(|g| g.to_expr_string(&base))
                    .collect(),
                prefix: jets_to_json(&sol.prefix),
                y_solution: jets_to_json(&sol.y_solution),
                combination: memberships_to_json(&sol.combination, &base),
                shifted: lift_result_json(&sol.shifted, &shifted_base, None, trace),
            };
            Ok(report(
                &p.name,
                "lift_general",
                "solved",
                None,
                Some(TaskResult::LiftGeneral(Box::new(result))),
            ))
        }
        Err(e) => {
            let refusal = lift_refusal(&e, &base)?;
            Ok(report(&p.name, "lift_general", "refused", Some(refusal), None))
        }
    }
}

// ---------------------------------------------------------------------------
// check_formal
// ---------------------------------------------------------------------------

fn run_check_formal(p: &CheckFormalProblem) -> Result<Report, String> {
    let (sys, _ctx, base) = build_system(&p.variables, &p.equations, p.quotient.as_ref())?;
    let assignment = parse_jets(&p.assignment, &base, "assignment")?;
    match formal_solution_check(&sys, &assignment, p.order) {
        Ok(cert) => {
            let result = CheckFormalResultJson {
                order: cert.order,
                residual_valuations: valuations_to_json(&cert.residual_valuations),
            };
            Ok(report(
                &p.name,
                "check_formal",
                "pass",
                None,
                Some(TaskResult::CheckFormal(result)),
            ))
        }
        Err(SystemError::NotFormalSolution { equation, witness }) => {
            let refusal = RefusalJson {
                code: String::from("not_formal_solution"),
                message: format!(
                    "equation {} has a surviving residual term through order {}",
                    equation, p.order
                ),
                witness: Some(witness.to_expr_string(&base)),
            };
            Ok(report(&p.name, "check_formal", "refused", Some(refusal), None))
        }
        Err(e) => Err(format!("formal check: {}", e)),
    }
}

// ---------------------------------------------------------------------------
// homotopy
// ---------------------------------------------------------------------------

fn run_homotopy(p: &HomotopyProblem) -> Result<Report, String> {
    if p.variables.t.is_none() {
        return Err(String::from("homotopy task requires a `t` variable"));
    }
    let (sys, ctx, base) = build_system(&p.variables, &p.equations, None)?;
    let fiber_ctx = ctx.x_part();
    let ideal = MonomialIdeal::parse(&p.ideal, &base)
        .map_err(|e| format!("ideal `{}`: {}", p.ideal, e))?;
    let y_start = parse_jets(&p.start, &base, "start")?;

    let family = match parametric_lift(&sys, &y_start, &ideal, p.order) {
        Ok(f) => f,
        Err(HomotopyError::Lift(e)) => {
            let refusal = lift_refusal(&e, &base)?;
            return Ok(report(&p.name, "homotopy", "refused", Some(refusal), None));
        }
        Err(e) => return Err(format!("homotopy lift: {}", e)),
    };

    let zero = Rational::zero();
    let one = Rational::one();
    let start_fiber = family.specialize(&zero);
    let end_fiber = match &p.end {
        Some(srcs) => parse_jets(srcs, &fiber_ctx, "end")?,
        None => family.specialize(&one),
    };
    let deformation_ideal = match &p.deformation_ideal {
        Some(src) => MonomialIdeal::parse(src, &base)
            .map_err(|e| format!("deformation_ideal `{}`: {}", src, e))?,
        None => family.ideal.clone(),
    };

    let rep = verify_homotopy(
        &sys,
        &family.family,
        &start_fiber,
        &end_fiber,
        &deformation_ideal,
        p.order,
    )
    .map_err(|e| format!("homotopy verification: {}", e))?;

    let mut specializations = Vec::with_capacity(p.specializations.len());
    for src in &p.specializations {
        let t0 = rational_from_str(src).map_err(|e| format!("specialization: {}", e))?;
        let fiber = family.specialize(&t0);
        let fiber_sys = specialize_system(&sys, &t0)
            .map_err(|e| format!("specializing the system at {}: {}", src, e))?;
        let residuals = fiber_sys
            .evaluate(&fiber)
            .map_err(|e| format!("fiber residual at {}: {}", src, e))?;
        specializations.push(SpecializationJson {
            t: src.clone(),
            fiber: jets_to_json(&fiber),
            residual_valuations: residuals
                .iter()
                .map(|r| valuation_to_json(&r.ord()))
                .collect(),
        });
    }

    let result = HomotopyResultJson {
        order: rep.order,
        family: jets_to_json(&family.family),
        ideal: deformation_ideal.to_expr_string(),
        start: jets_to_json(&start_fiber),
        end: jets_to_json(&end_fiber),
        pass: rep.pass,
        issues: rep
            .issues
            .iter()
            .map(|i| HomotopyIssueJson {
                kind: issue_kind(i).to_owned(),
                detail: i.to_string(),
            })
            .collect(),
        residual_valuations: valuations_to_json(&rep.residual_valuations),
        deformation_certificates: rep
            .deformation_certificates
            .iter()
            .map(|per| {
                per.iter()
                    .map(|(p, m)| DeformationCertJson {
                        t_power: *p,
                        membership: membership_to_json(m, &base),
                    })
                    .collect()
            })
            .collect(),
        specializations,
    };
    let status = if rep.pass { "pass" } else { "fail" };
    Ok(report(
        &p.name,
        "homotopy",
        status,
        None,
        Some(TaskResult::Homotopy(Box::new(result))),
    ))
}

pub(crate) fn issue_kind(issue: &jetlift_core::homotopy::HomotopyIssue) -> &'static str {
    use jetlift_core::homotopy::HomotopyIssue::*;
    match issue {
        ArityMismatch { .. } => "arity_mismatch",
        EndpointMismatch { .. } => "endpoint_mismatch",
        ResidualNonzero { .. } => "residual_nonzero",
        DeformationEscapesIdeal { .. } => "deformation_escapes_ideal",
    }
}

// ---------------------------------------------------------------------------
// filtration tasks
// ---------------------------------------------------------------------------

fn run_weak_fg(p: &WeakFgProblem) -> Result<Report, String> {
    let ctx = context(&p.variables)?;
    let base = ctx.without_y();
    let filtration = Filtration::parse(&p.filtration, &base)
        .map_err(|e| format!("filtration `{}`: {}", p.filtration, e))?;
    match jetlift_core::ideal::weak_fg_check(&filtration, p.j_max) {
        Ok(rep) => {
            let result = WeakFgResultJson {
                j_max: rep.j_max,
                levels: rep
                    .levels
                    .iter()
                    .map(|(level, gens)| WeakFgLevelJson {
                        level: *level,
                        generators: gens.iter().map(|g| g.to_expr_string(&base)).collect(),
                    })
                    .collect(),
            };
            Ok(report(
                &p.name,
                "weak_fg",
                "pass",
                None,
                Some(TaskResult::WeakFg(result)),
            ))
        }
        Err(e @ IdealError::NotDescending { .. }) => {
            let refusal = RefusalJson {
                code: String::from("not_descending"),
                message: e.to_string(),
                witness: None,
            };
            Ok(report(&p.name, "weak_fg", "refused", Some(refusal), None))
        }
        Err(e) => Err(format!("filtration check: {}", e)),
    }
}

fn run_cofinal(p: &CofinalProblem) -> Result<Report, String> {
    let ctx = context(&p.variables)?;
    let base = ctx.without_y();
    let first = Filtration::parse(&p.first, &base)
        .map_err(|e| format!("first filtration `{}`: {}", p.first, e))?;
    let second = Filtration::parse(&p.second, &base)
        .map_err(|e| format!("second filtration `{}`: {}", p.second, e))?;
    match jetlift_core::ideal::filtrations_cofinal(&first, &second, p.j_max, p.scan_max) {
        Ok(cert) => {
            let result = CofinalResultJson {
                j_max: cert.j_max,
                first_into_second: cert.first_into_second.iter().map(|&(j, d)| [j, d]).collect(),
                second_into_first: cert.second_into_first.iter().map(|&(j, d)| [j, d]).collect(),
            };
            Ok(report(
                &p.name,
                "cofinal",
                "pass",
                None,
                Some(TaskResult::Cofinal(result)),
            ))
        }
        Err(e @ (IdealError::NotCofinal { .. } | IdealError::NotDescending { .. })) => {
            let code = match e {
                IdealError::NotCofinal { .. } => "not_cofinal",
                _ => "not_descending",
            };
            let refusal = RefusalJson {
                code: code.to_owned(),
                message: e.to_string(),
                witness: None,
            };
            Ok(report(&p.name, "cofinal", "refused", Some(refusal), None))
        }
        Err(e) => Err(format!("cofinality check: {}", e)),
    }
}

// ---------------------------------------------------------------------------
// numerical tasks
// ---------------------------------------------------------------------------

/// Applies the seed jitter to the requested grid.  A nonzero seed nudges
/// both endpoints outward by up to half a step, deterministically, so
/// reruns probe slightly different sample placements.  The report
/// records the jittered grid; verification recomputes from it and never
/// needs the seed.
fn make_grid(spec: &GridJson, seed: u64) -> Result<(Grid1D, GridJson), String> {
    let mut a = spec.a;
    let mut b = spec.b;
    if seed != 0 {
        if !(a.is_finite() && b.is_finite()) || a >= b || spec.samples < 2 {
            return Err(String::from("grid: endpoints must be finite with a < b"));
        }
        let step = (b - a) / (spec.samples as f64 - 1.0);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut unit = || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        a -= 0.5 * step * unit();
        b += 0.5 * step * unit();
    }
    let grid = Grid1D::new(a, b, spec.samples).map_err(|e| format!("grid: {}", e))?;
    let used = GridJson {
        a,
        b,
        samples: spec.samples,
    };
    Ok((grid, used))
}

/// Splits a numerical failure into refusal vs hard error.
fn borel_refusal(e: &BorelError) -> Result<RefusalJson, String> {
    let code = match e {
        BorelError::WidthsTooLarge { .. } => "widths_too_large",
        BorelError::GridTooCoarse { .. } => "grid_too_coarse",
        BorelError::EpsilonSearchFailed { .. } => "epsilon_search_failed",
        BorelError::DerivativeCapUnsupported { .. } => "derivative_cap_unsupported",
        other => return Err(other.to_string()),
    };
    Ok(RefusalJson {
        code: code.to_owned(),
        message: e.to_string(),
        witness: None,
    })
}

fn run_cutoff(p: &CutoffProblem, seed: u64, csv_dir: Option<&Path>) -> Result<Report, String> {
    let (grid, used) = make_grid(&p.grid, seed)?;
    let tau = match build_cutoff(&grid, p.z[0], p.z[1], &p.widths) {
        Ok(tau) => tau,
        Err(e) => {
            let refusal = borel_refusal(&e)?;
            return Ok(report(&p.name, "cutoff", "refused", Some(refusal), None));
        }
    };
    let rep = check_derivative_bounds(&tau, &p.widths, p.k_max, RATIO_THRESHOLD);
    let csv_files = match csv_dir {
        Some(dir) => {
            let names = crate::csv::cutoff_csv_names(&p.name);
            write_csv(dir, &names[0], &tau)?;
            Some(names)
        }
        None => None,
    };
    let result = CutoffResultJson {
        grid: used,
        z: p.z,
        widths: p.widths.clone(),
        threshold: rep.threshold,
        ratios: rep
            .ratios
            .iter()
            .map(|r| RatioJson {
                k: r.k,
                max_derivative: r.max_derivative,
                ratio: r.ratio,
            })
            .collect(),
        pass: rep.pass,
        csv_files,
    };
    let status = if rep.pass { "pass" } else { "fail" };
    Ok(report(
        &p.name,
        "cutoff",
        status,
        None,
        Some(TaskResult::Cutoff(result)),
    ))
}

/// Samples one gluing term on the grid:
/// `amplitude · (x−center)^order · (1 − ((x−center)/R)²)` with `R` the
/// distance from the center to the nearer grid endpoint.
pub(crate) fn sample_terms(
    p: &BorelProblem,
    grid: &Grid1D,
) -> Result<Vec<(u32, SampledFunction)>, String> {
    let r = (p.center - grid.a()).min(grid.b() - p.center);
    if !(r.is_finite() && r > 0.0) {
        return Err(String::from("center must lie strictly inside the grid"));
    }
    Ok(p.terms
        .iter()
        .map(|t| {
            let j = t.order;
            let amp = t.amplitude;
            let center = p.center;
            (
                j,
                SampledFunction::from_fn(grid, move |x| {
                    let u = x - center;
                    amp * libm::pow(u, j as f64) * (1.0 - (u / r) * (u / r))
                }),
            )
        })
        .collect())
}

fn run_borel(p: &BorelProblem, seed: u64, csv_dir: Option<&Path>) -> Result<Report, String> {
    let (grid, used) = make_grid(&p.grid, seed)?;
    let terms = sample_terms(p, &grid)?;
    let asm = match assemble_borel(&terms, p.center, p.derivative_cap) {
        Ok(asm) => asm,
        Err(e) => {
            let refusal = borel_refusal(&e)?;
            return Ok(report(&p.name, "borel", "refused", Some(refusal), None));
        }
    };

    let gs: Vec<&SampledFunction> = terms.iter().map(|(_, g)| g).collect();
    let mut slopes = Vec::with_capacity(p.partial_slopes.len());
    for &n in &p.partial_slopes {
        let cut = terms.iter().filter(|(j, _)| *j <= n).count();
        if cut == 0 {
            return Err(format!(
                "partial_slopes entry {} cuts below every term order",
                n
            ));
        }
        // The remainder f − Σ_{j≤N} g_j vanishes to (at least) the order
        // of the first omitted term; when nothing is omitted it vanishes
        // identically on the plateau, and order N+1 is still a sound
        // conservative claim to certify.
        let next_order = terms.get(cut).map_or(n + 1, |t| t.0);
        let partial = pointwise_sum(&gs[..cut]).map_err(|e| format!("partial sum: {}", e))?;
        let rem = SampledFunction::new(
            grid.clone(),
            asm.f
                .values()
                .iter()
                .zip(partial.values())
                .map(|(a, b)| a - b)
                .collect(),
        )
        .map_err(|e| format!("remainder: {}", e))?;
        let flat = check_flat_bounds(&rem, p.center, next_order, 0)
            .map_err(|e| format!("flatness check for N = {}: {}", n, e))?;
        slopes.push(SlopeJson {
            n,
            slope: flat.slope,
            needed: flat.needed,
            pass: flat.pass,
            points: flat.points,
            constant: flat.constant,
        });
    }

    // On the common plateau the assembly must reproduce the full partial
    // sum bit-for-bit.
    let full = pointwise_sum(&gs).map_err(|e| format!("full sum: {}", e))?;
    let (lo, hi) = asm.plateau;
    let mut exact = 0usize;
    for i in 0..grid.len() {
        let x = grid.x_at(i);
        if x >= lo && x <= hi && asm.f.values()[i] == full.values()[i] {
            exact += 1;
        }
    }

    let pass = slopes.iter().all(|s| s.pass)
        && asm.constraint_checks.iter().all(|c| c.value < c.budget)
        && exact > 0;
    let csv_files = match csv_dir {
        Some(dir) => {
            let names = crate::csv::borel_csv_names(&p.name, asm.cutoffs.len());
            write_csv(dir, &names[0], &asm.f)?;
            for (i, cutoff) in asm.cutoffs.iter().enumerate() {
                write_csv(dir, &names[i + 1], cutoff)?;
            }
            Some(names)
        }
        None => None,
    };
    let result = BorelResultJson {
        grid: used,
        center: p.center,
        derivative_cap: asm.derivative_cap,
        epsilons: asm.epsilons.clone(),
        widths: asm.widths.clone(),
        plateau: [lo, hi],
        constraint_checks: asm
            .constraint_checks
            .iter()
            .map(|c| ConstraintJson {
                term: c.term,
                k: c.k,
                value: c.value,
                budget: c.budget,
            })
            .collect(),
        slopes,
        exact_partial_sum_samples: exact,
        pass,
        csv_files,
    };
    let status = if pass { "pass" } else { "fail" };
    Ok(report(
        &p.name,
        "borel",
        status,
        None,
        Some(TaskResult::Borel(result)),
    ))
}
