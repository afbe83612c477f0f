//! Independent re-checking of reports.
//!
//! `verify` never trusts the solver: algebraic certificates are
//! recombined and compared against freshly evaluated targets, checks are
//! recomputed from the problem statement, and numerical results are
//! reproduced bit-for-bit from the grid recorded in the report.  A
//! report passes only if every claim it makes is reproduced.
//!
//! Exit discipline: problems that cannot be posed are hard errors; any
//! defect on the report side — malformed content included — is a
//! verification failure.

use jetlift_core::expr::parse_polynomial;
use jetlift_core::homotopy::verify_homotopy;
use jetlift_core::ideal::{Filtration, MonomialIdeal};
use jetlift_core::jet::Monomial;
use jetlift_core::lift::verify_certificate;
use jetlift_core::system::{formal_solution_check, quotient_unfold, PolySystem};
use jetlift_core::{Jet, VarContext};

use crate::convert::{
    jet_from_json, jets_from_json, jets_to_json, matrix_from_json, membership_from_json, membership_to_json,
    monomial_from_str, rational_from_str, valuation_to_json, valuations_to_json, ConvertError,
};
use crate::run::{issue_kind, run_problem, status_is_success};
use crate::schema::{
    BorelResultJson, CofinalResultJson, CutoffResultJson, DeformationCertJson, HomotopyIssueJson,
    HomotopyProblem, HomotopyResultJson, LiftGeneralProblem, LiftGeneralResultJson, LiftProblem,
    LiftResultJson, MembershipJson, Problem, Report, SpecializationJson, TaskResult,
    REPORT_FORMAT,
};

/// A verification outcome: the list of checks that passed, or the first
/// failure.
pub enum VerifyError {
    /// The problem itself could not be posed (exit 1).
    Problem(String),
    /// The report does not check out against the problem (exit 2).
    Report(String),
}

type Checks = Vec<String>;
type VResult = Result<Checks, VerifyError>;

fn hard<T>(msg: impl Into<String>) -> Result<T, VerifyError> {
    Err(VerifyError::Problem(msg.into()))
}

fn fail<T>(msg: impl Into<String>) -> Result<T, VerifyError> {
    Err(VerifyError::Report(msg.into()))
}

/// Report-side conversion failures are verification failures.
fn rep<T>(r: Result<T, ConvertError>, what: &str) -> Result<T, VerifyError> {
    r.map_err(|e| VerifyError::Report(format!("{}: {}", what, e)))
}

pub fn verify_report(problem: &Problem, report: &Report) -> VResult {
    let mut checks = Vec::new();
    if report.tool != "jetlift" {
        return fail(format!("report tool is `{}`, expected `jetlift`", report.tool));
    }
    if report.format != REPORT_FORMAT {
        return fail(format!(
            "report format {} unsupported (expected {})",
            report.format, REPORT_FORMAT
        ));
    }
    if report.name != problem.name() {
        return fail(format!(
            "report is for `{}`, problem is `{}`",
            report.name,
            problem.name()
        ));
    }
    if report.task != problem.task() {
        return fail(format!(
            "report task `{}` does not match problem task `{}`",
            report.task,
            problem.task()
        ));
    }
    checks.push(String::from("envelope: tool, format, name, and task match"));

    if report.status == "refused" {
        return verify_refusal(problem, report, checks);
    }
    if !status_is_success(&report.status) && report.status != "fail" {
        return fail(format!("unknown status `{}`", report.status));
    }
    if report.refusal.is_some() {
        return fail("non-refused report carries a refusal object");
    }
    let Some(result) = &report.result else {
        return fail("non-refused report carries no result");
    };

    match (problem, result) {
        (Problem::Lift(p), TaskResult::Lift(r)) => verify_lift(p, r, &report.status, checks),
        (Problem::LiftGeneral(p), TaskResult::LiftGeneral(r)) => {
            verify_lift_general(p, r, &report.status, checks)
        }
        (Problem::CheckFormal(_), TaskResult::CheckFormal(r)) => {
            let recomputed = recompute_result(problem)?;
            compare_result("check", &TaskResult::CheckFormal(r.clone()), &recomputed, checks)
        }
        (Problem::Homotopy(p), TaskResult::Homotopy(r)) => {
            verify_homotopy_report(p, r, &report.status, checks)
        }
        (Problem::WeakFg(_), TaskResult::WeakFg(r)) => {
            let recomputed = recompute_result(problem)?;
            compare_result("levels", &TaskResult::WeakFg(r.clone()), &recomputed, checks)
        }
        (Problem::Cofinal(p), TaskResult::Cofinal(r)) => verify_cofinal(p, r, checks),
        (Problem::Cutoff(p), TaskResult::Cutoff(r)) => verify_cutoff(p, r, &report.status, checks),
        (Problem::Borel(p), TaskResult::Borel(r)) => verify_borel(p, r, &report.status, checks),
        _ => fail("result shape does not match the task"),
    }
}

// ---------------------------------------------------------------------------
// generic recompute-and-compare
// ---------------------------------------------------------------------------

/// Recomputes the whole result for tasks that are themselves checkers.
/// Seedless: these tasks have no randomized inputs.
fn recompute_result(problem: &Problem) -> Result<TaskResult, VerifyError> {
    let recomputed = run_problem(problem, 0, false).map_err(VerifyError::Problem)?;
    match recomputed.result {
        Some(r) if status_is_success(&recomputed.status) || recomputed.status == "fail" => Ok(r),
        _ => fail(format!(
            "recomputation ends in `{}`, but the report claims `{}`",
            recomputed.status,
            if recomputed.refusal.is_some() {
                "a refusal"
            } else {
                "a result"
            }
        )),
    }
}

fn to_value(r: &TaskResult) -> serde_json::Value {
    serde_json::to_value(r).expect("results serialize")
}

fn compare_result(what: &str, recorded: &TaskResult, recomputed: &TaskResult, mut checks: Checks) -> VResult {
    if to_value(recorded) != to_value(recomputed) {
        return fail(format!("recorded {} differ from recomputation", what));
    }
    checks.push(format!("{}: recomputation reproduces the report exactly", what));
    Ok(checks)
}

/// A refusal is verified by reproducing it: the solver, run afresh on
/// the problem, must refuse for the same reason.
fn verify_refusal(problem: &Problem, report: &Report, mut checks: Checks) -> VResult {
    if report.result.is_some() {
        return fail("refused report carries a result");
    }
    let Some(refusal) = &report.refusal else {
        return fail("refused report carries no refusal object");
    };
    let recomputed = run_problem(problem, 0, false).map_err(VerifyError::Problem)?;
    if recomputed.status != "refused" {
        return fail(format!(
            "report claims a refusal, but the problem runs to `{}`",
            recomputed.status
        ));
    }
    let fresh = recomputed.refusal.expect("refused reports carry refusals");
    if serde_json::to_value(refusal).expect("refusals serialize")
        != serde_json::to_value(&fresh).expect("refusals serialize")
    {
        return fail(format!(
            "refusal differs: report says `{}`, recomputation says `{}`",
            refusal.code, fresh.code
        ));
    }
    checks.push(format!(
        "refusal: reproduced `{}` with the same witness",
        refusal.code
    ));
    Ok(checks)
}

// ---------------------------------------------------------------------------
// jet algebra helpers
// ---------------------------------------------------------------------------

/// Exact equality of complete polynomials.
fn exact_eq(a: &Jet, b: &Jet) -> Result<bool, VerifyError> {
    if !a.is_exact() || !b.is_exact() {
        return fail("expected complete polynomials in this certificate");
    }
    let o = a.order().max(b.order());
    let d = a
        .with_order_at_least(o)
        .sub(&b.with_order_at_least(o))
        .map_err(|e| VerifyError::Report(e.to_string()))?;
    Ok(d.is_zero())
}

/// Whether `a` and `b` agree on every term of weighted degree ≤ `order`.
fn agree_through(a: &Jet, b: &Jet, order: u32) -> Result<bool, VerifyError> {
    let o = a.order().max(b.order()).max(order);
    let d = a
        .with_order_at_least(o)
        .sub(&b.with_order_at_least(o))
        .map_err(|e| VerifyError::Report(e.to_string()))?;
    Ok(d.truncate_to(order).is_zero())
}

/// Recombines a recorded membership certificate and checks that it
/// reproduces `target` through the certificate's order, using only
/// generators of `ideal`.
fn check_membership(
    json: &MembershipJson,
    ideal: &MonomialIdeal,
    ctx: &VarContext,
    target: &Jet,
    what: &str,
) -> Result<(), VerifyError> {
    let gens: Vec<&Monomial> = ideal.gens().collect();
    for c in &json.cofactors {
        let g = rep(
            monomial_from_str(&c.generator, ctx),
            &format!("{}: generator", what),
        )?;
        if !gens.iter().any(|&have| *have == g) {
            return fail(format!(
                "{}: cofactor generator {} is not a generator of the ideal",
                what, c.generator
            ));
        }
    }
    let m = rep(
        membership_from_json(json, ctx),
        &format!("{}: certificate", what),
    )?;
    let recombined = m
        .recombine(ctx)
        .map_err(|e| VerifyError::Report(format!("{}: recombination: {}", what, e)))?;
    if !agree_through(&recombined, target, json.order)? {
        return fail(format!(
            "{}: recombination does not reproduce the target through order {}",
            what, json.order
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// lift
// ---------------------------------------------------------------------------

struct LiftSetup {
    sys: PolySystem,
    base: VarContext,
    y_start: Vec<Jet>,
    ideal: MonomialIdeal,
    slacks: Vec<(usize, Monomial, String)>,
    base_unknowns: usize,
}

fn lift_setup(p: &LiftProblem) -> Result<LiftSetup, VerifyError> {
    let ctx = VarContext::new(
        p.variables.x.iter().map(String::as_str),
        p.variables.y.iter().map(String::as_str),
        p.variables.t.as_deref(),
    )
    .map_err(|e| VerifyError::Problem(format!("variables: {}", e)))?;
    let base = ctx.without_y();
    let eqs = p
        .equations
        .iter()
        .map(|s| parse_polynomial(s, &ctx).map_err(|e| format!("equation `{}`: {}", s, e)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(VerifyError::Problem)?;
    let quotient = p
        .quotient
        .as_ref()
        .map(|q| MonomialIdeal::parse(q, &base).map_err(|e| format!("quotient: {}", e)))
        .transpose()
        .map_err(VerifyError::Problem)?;
    let sys = PolySystem::new(&ctx, eqs, quotient)
        .map_err(|e| VerifyError::Problem(format!("system: {}", e)))?;
    let unfolded =
        quotient_unfold(&sys).map_err(|e| VerifyError::Problem(format!("unfolding: {}", e)))?;
    let mut y_start = p
        .start
        .iter()
        .map(|s| parse_polynomial(s, &base).map_err(|e| format!("start `{}`: {}", s, e)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(VerifyError::Problem)?;
    for _ in &unfolded.slacks {
        y_start.push(Jet::zero(&base, 0));
    }
    let ideal = MonomialIdeal::parse(&p.ideal, &base)
        .map_err(|e| VerifyError::Problem(format!("ideal: {}", e)))?;
    Ok(LiftSetup {
        sys: unfolded.system,
        base,
        y_start,
        ideal,
        slacks: unfolded.slacks,
        base_unknowns: unfolded.base_unknowns,
    })
}

/// Re-checks every certificate of a recorded lift against the system:
/// the annihilator identity, the solution's decomposition, the residual
/// vanishing, and all four membership families.
fn verify_lift_core(
    setup: &LiftSetup,
    r: &LiftResultJson,
    order: u32,
    checks: &mut Checks,
) -> Result<(), VerifyError> {
    let base = &setup.base;
    let sys = &setup.sys;
    let n = sys.num_unknowns();
    let s = sys.num_equations();
    if r.order != order {
        return fail(format!("recorded order {} differs from requested {}", r.order, order));
    }
    if r.y_solution.len() != n || r.delta_y.len() != n {
        return fail("solution arity does not match the system");
    }

    let y_sol = rep(jets_from_json(&r.y_solution, base), "y_solution")?;
    let delta = rep(jets_from_json(&r.delta_y, base), "delta_y")?;
    let h = rep(jet_from_json(&r.h, base), "h")?;
    let cokernel = rep(matrix_from_json(&r.cokernel, base), "cokernel")?;
    if cokernel.rows() != n || cokernel.cols() != s {
        return fail(format!(
            "cokernel is {}×{}, expected {}×{}",
            cokernel.rows(),
            cokernel.cols(),
            n,
            s
        ));
    }

    // (1) The annihilator identity J(y₀)·B = h·Id, in exact arithmetic.
    verify_certificate(sys, &setup.y_start, &h, &cokernel)
        .map_err(|e| VerifyError::Report(format!("annihilator identity: {}", e)))?;
    checks.push(String::from("certificate: J(y0)·B = h·Id holds exactly"));

    match h.ord() {
        jetlift_core::Valuation::Finite(e) if e == r.h_valuation => {}
        _ => return fail("recorded h_valuation does not match ord(h)"),
    }

    // (2) y = y₀ + Δy, exactly.
    for i in 0..n {
        let o = setup.y_start[i].order().max(delta[i].order());
        let sum = setup.y_start[i]
            .with_order_at_least(o)
            .add(&delta[i].with_order_at_least(o))
            .map_err(|e| VerifyError::Report(e.to_string()))?;
        if !exact_eq(&sum, &y_sol[i])? {
            return fail(format!("y_solution[{}] ≠ start[{}] + delta_y[{}]", i, i, i));
        }
    }
    checks.push(String::from("decomposition: y_solution = start + delta_y"));

    // (3) Residual vanishes through the order, and valuations match.
    formal_solution_check(sys, &y_sol, order)
        .map_err(|e| VerifyError::Report(format!("residual: {}", e)))?;
    let residuals = sys
        .evaluate(&y_sol)
        .map_err(|e| VerifyError::Report(e.to_string()))?;
    let vals = valuations_to_json(&residuals.iter().map(|j| j.ord()).collect::<Vec<_>>());
    if vals != r.residual_valuations {
        return fail("recorded residual valuations differ from recomputation");
    }
    checks.push(format!(
        "residual: F(y_solution) vanishes through order {}",
        order
    ));

    // (4) Start residuals lie in the ideal, as certified.
    let start_residuals = sys
        .evaluate(&setup.y_start)
        .map_err(|e| VerifyError::Report(e.to_string()))?;
    if r.residual_membership.len() != s {
        return fail("residual membership count differs from the equation count");
    }
    for (i, m) in r.residual_membership.iter().enumerate() {
        check_membership(
            m,
            &setup.ideal,
            base,
            &start_residuals[i],
            &format!("residual membership {}", i),
        )?;
    }
    checks.push(String::from("membership: every F_i(start) recombines inside the ideal"));

    // (5) h²·Δy lies in the ideal, as certified.
    if r.correction_membership.len() != n {
        return fail("correction membership count differs from the unknown count");
    }
    let h2 = {
        let o = 2 * h.order();
        let hh = h.with_order_at_least(o);
        hh.mul(&hh).map_err(|e| VerifyError::Report(e.to_string()))?
    };
    for (i, m) in r.correction_membership.iter().enumerate() {
        let o = h2.order() + delta[i].order();
        let target = h2
            .with_order_at_least(o)
            .mul(&delta[i].with_order_at_least(o))
            .map_err(|e| VerifyError::Report(e.to_string()))?;
        check_membership(
            m,
            &setup.ideal,
            base,
            &target,
            &format!("correction membership {}", i),
        )?;
    }
    checks.push(String::from("membership: every h²·Δy_i recombines inside the ideal"));

    // (6) Δy lies in the stated correction ideal, as certified.
    let correction_ideal = rep(
        MonomialIdeal::parse(&r.correction_ideal, base)
            .map_err(|e| ConvertError(format!("correction ideal: {}", e))),
        "correction ideal",
    )?;
    if r.correction_ideal_membership.len() != n {
        return fail("correction-ideal membership count differs from the unknown count");
    }
    for (i, m) in r.correction_ideal_membership.iter().enumerate() {
        check_membership(
            m,
            &correction_ideal,
            base,
            &delta[i],
            &format!("correction-ideal membership {}", i),
        )?;
    }
    checks.push(String::from(
        "membership: every Δy_i recombines inside the correction ideal",
    ));

    // (7) When a trace is recorded, the correction is its closing state:
    // Δy = h·B·z_final.
    if let Some(trace) = &r.z_trace {
        let Some(last) = trace.last() else {
            return fail("empty z_trace");
        };
        if last.len() != s {
            return fail("final trace entry has wrong arity");
        }
        let z_final = rep(jets_from_json(last, base), "z_trace")?;
        for i in 0..n {
            let mut acc = Jet::zero(base, 0);
            for (j, z) in z_final.iter().enumerate() {
                let b = cokernel.get(i, j);
                let o = b.order() + z.order() + h.order();
                let term = b
                    .with_order_at_least(o)
                    .mul(&z.with_order_at_least(o))
                    .and_then(|bz| bz.mul(&h.with_order_at_least(o)))
                    .map_err(|e| VerifyError::Report(e.to_string()))?;
                let oo = acc.order().max(term.order());
                acc = acc
                    .with_order_at_least(oo)
                    .add(&term.with_order_at_least(oo))
                    .map_err(|e| VerifyError::Report(e.to_string()))?;
            }
            if !agree_through(&acc, &delta[i], order)? {
                return fail(format!("Δy_{} differs from h·B·z_final through order {}", i, order));
            }
        }
        checks.push(String::from("trace: Δy = h·B·z_final through the target order"));
    }
    Ok(())
}

fn verify_lift(p: &LiftProblem, r: &LiftResultJson, status: &str, mut checks: Checks) -> VResult {
    if status != "solved" {
        return fail(format!("lift reports are `solved`, found `{}`", status));
    }
    let setup = lift_setup(p)?;

    // Source bookkeeping must reflect how the problem was posed.
    let expected_source = if p.certificate.is_some() {
        "supplied"
    } else {
        "gram_adjugate"
    };
    if r.certificate_source != expected_source {
        return fail(format!(
            "certificate source `{}`, expected `{}`",
            r.certificate_source, expected_source
        ));
    }

    // Slack bookkeeping must match the deterministic unfolding.
    match (&r.unfold, setup.slacks.is_empty()) {
        (None, true) => {}
        (Some(_), true) => return fail("report unfolds a quotient the problem does not have"),
        (None, false) => return fail("quotiented problem lacks the unfold block"),
        (Some(u), false) => {
            if u.slacks.len() != setup.slacks.len() {
                return fail("unfold slack count differs");
            }
            for (rec, (eq, g, name)) in u.slacks.iter().zip(&setup.slacks) {
                if rec.equation != *eq
                    || rec.generator != g.to_expr_string(&setup.base)
                    || rec.name != *name
                {
                    return fail("unfold slack bookkeeping differs from the unfolding");
                }
            }
            let n_base = setup.base_unknowns;
            if r.y_solution.len() != n_base + u.slacks.len() {
                return fail("unfolded solution arity is inconsistent");
            }
            if u.witnesses.as_slice() != &r.y_solution[n_base..] {
                return fail("unfold witnesses differ from the slack solutions");
            }
            checks.push(String::from("unfold: slack bookkeeping matches the quotient"));
        }
    }

    verify_lift_core(&setup, r, p.order, &mut checks)?;
    Ok(checks)
}

// ---------------------------------------------------------------------------
// lift_general
// ---------------------------------------------------------------------------

fn verify_lift_general(
    p: &LiftGeneralProblem,
    r: &LiftGeneralResultJson,
    status: &str,
    mut checks: Checks,
) -> VResult {
    if status != "solved" {
        return fail(format!("lift_general reports are `solved`, found `{}`", status));
    }
    let ctx = VarContext::new(
        p.variables.x.iter().map(String::as_str),
        p.variables.y.iter().map(String::as_str),
        p.variables.t.as_deref(),
    )
    .map_err(|e| VerifyError::Problem(format!("variables: {}", e)))?;
    let base = ctx.without_y();
    let eqs = p
        .equations
        .iter()
        .map(|s| parse_polynomial(s, &ctx).map_err(|e| format!("equation `{}`: {}", s, e)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(VerifyError::Problem)?;
    let sys = PolySystem::new(&ctx, eqs, None)
        .map_err(|e| VerifyError::Problem(format!("system: {}", e)))?;
    let filtration = Filtration::parse(&p.filtration, &base)
        .map_err(|e| VerifyError::Problem(format!("filtration: {}", e)))?;
    let prefix = p
        .prefix
        .iter()
        .map(|s| parse_polynomial(s, &base).map_err(|e| format!("prefix `{}`: {}", s, e)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(VerifyError::Problem)?;

    if r.order != p.order {
        return fail("recorded order differs from the problem");
    }
    if r.level != p.level + 1 {
        return fail(format!(
            "correction level {} is not the requested depth plus one ({})",
            r.level,
            p.level + 1
        ));
    }

    // The level ideal is recomputed from the filtration rule.
    let levels = filtration
        .materialize(r.level)
        .map_err(|e| VerifyError::Problem(format!("materializing the filtration: {}", e)))?;
    let level_ideal = levels.into_iter().last().expect("levels nonempty");
    let fresh: Vec<String> = level_ideal
        .gens()
        .map(|g| g.to_expr_string(&base))
        .collect();
    if fresh != r.level_generators {
        return fail("recorded level generators differ from the filtration's");
    }
    checks.push(format!(
        "filtration: level {} generators recomputed and match",
        r.level
    ));

    // Prefix echoes the problem.
    let rec_prefix = rep(jets_from_json(&r.prefix, &base), "prefix")?;
    if rec_prefix.len() != prefix.len() {
        return fail("prefix arity differs");
    }
    for (a, b) in rec_prefix.iter().zip(&prefix) {
        if !exact_eq(a, b)? {
            return fail("recorded prefix differs from the problem's");
        }
    }

    let n = sys.num_unknowns();
    if r.y_solution.len() != n || r.combination.len() != n {
        return fail("solution arity does not match the system");
    }
    let y_sol = rep(jets_from_json(&r.y_solution, &base), "y_solution")?;

    // (1) The headline claim: the solution solves the system through the
    // order.
    formal_solution_check(&sys, &y_sol, p.order)
        .map_err(|e| VerifyError::Report(format!("residual: {}", e)))?;
    checks.push(format!("residual: F(y_solution) vanishes through order {}", p.order));

    // (2) The refinement claim: y − prefix is a level-ideal combination.
    for (i, m) in r.combination.iter().enumerate() {
        let o = y_sol[i].order().max(prefix[i].order());
        let diff = y_sol[i]
            .with_order_at_least(o)
            .sub(&prefix[i].with_order_at_least(o))
            .map_err(|e| VerifyError::Report(e.to_string()))?;
        check_membership(
            m,
            &level_ideal,
            &base,
            &diff,
            &format!("combination {}", i),
        )?;
    }
    checks.push(String::from(
        "membership: every y_i − prefix_i recombines over the level generators",
    ));

    // (3) Structural sanity of the recorded shifted lift.
    if r.shifted.certificate_source != "level_shifted" {
        return fail("shifted lift does not declare the level-shifted certificate");
    }
    let expected_shifted = n * r.level_generators.len();
    if r.shifted.y_solution.len() != expected_shifted {
        return fail(format!(
            "shifted lift has {} unknowns, expected {}",
            r.shifted.y_solution.len(),
            expected_shifted
        ));
    }
    checks.push(String::from("shifted lift: shape and certificate source are consistent"));
    Ok(checks)
}

// ---------------------------------------------------------------------------
// homotopy
// ---------------------------------------------------------------------------

fn verify_homotopy_report(
    p: &HomotopyProblem,
    r: &HomotopyResultJson,
    status: &str,
    mut checks: Checks,
) -> VResult {
    if p.variables.t.is_none() {
        return hard("homotopy task requires a `t` variable");
    }
    let ctx = VarContext::new(
        p.variables.x.iter().map(String::as_str),
        p.variables.y.iter().map(String::as_str),
        p.variables.t.as_deref(),
    )
    .map_err(|e| VerifyError::Problem(format!("variables: {}", e)))?;
    let base = ctx.without_y();
    let fiber_ctx = ctx.x_part();
    let eqs = p
        .equations
        .iter()
        .map(|s| parse_polynomial(s, &ctx).map_err(|e| format!("equation `{}`: {}", s, e)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(VerifyError::Problem)?;
    let sys = PolySystem::new(&ctx, eqs, None)
        .map_err(|e| VerifyError::Problem(format!("system: {}", e)))?;

    if r.order != p.order {
        return fail("recorded order differs from the problem");
    }
    let family = rep(jets_from_json(&r.family, &base), "family")?;
    let start = rep(jets_from_json(&r.start, &fiber_ctx), "start")?;
    let end = rep(jets_from_json(&r.end, &fiber_ctx), "end")?;

    // The deformation ideal is pinned by the problem when stated there;
    // otherwise the report's claim is checked as recorded.
    let ideal_src = p.deformation_ideal.as_deref().unwrap_or(&r.ideal);
    let ideal = rep(
        MonomialIdeal::parse(ideal_src, &base)
            .map_err(|e| ConvertError(format!("ideal `{}`: {}", ideal_src, e))),
        "deformation ideal",
    )?;
    if ideal.to_expr_string() != r.ideal {
        return fail("recorded ideal differs from the problem's deformation ideal");
    }
    // A problem-pinned end must be what the report checked against.
    if let Some(srcs) = &p.end {
        let pinned = srcs
            .iter()
            .map(|s| parse_polynomial(s, &fiber_ctx).map_err(|e| format!("end `{}`: {}", s, e)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(VerifyError::Problem)?;
        if pinned.len() != end.len() {
            return fail("recorded end arity differs from the problem's");
        }
        for (a, b) in pinned.iter().zip(&end) {
            if !exact_eq(a, b)? {
                return fail("recorded end differs from the problem's");
            }
        }
    }

    // Re-run the checker on the recorded family.
    let fresh = verify_homotopy(&sys, &family, &start, &end, &ideal, p.order)
        .map_err(|e| VerifyError::Report(format!("verification: {}", e)))?;
    let expected_status = if fresh.pass { "pass" } else { "fail" };
    if status != expected_status {
        return fail(format!(
            "status `{}` contradicts the checker (`{}`)",
            status, expected_status
        ));
    }
    if fresh.pass != r.pass {
        return fail("recorded pass flag contradicts the checker");
    }
    let fresh_issues: Vec<HomotopyIssueJson> = fresh
        .issues
        .iter()
        .map(|i| HomotopyIssueJson {
            kind: issue_kind(i).to_owned(),
            detail: i.to_string(),
        })
        .collect();
    if serde_json::to_value(&fresh_issues).expect("issues serialize")
        != serde_json::to_value(&r.issues).expect("issues serialize")
    {
        return fail("recorded issues differ from the checker's");
    }
    let fresh_vals = valuations_to_json(&fresh.residual_valuations);
    if fresh_vals != r.residual_valuations {
        return fail("recorded residual valuations differ from the checker's");
    }
    let fresh_certs: Vec<Vec<DeformationCertJson>> = fresh
        .deformation_certificates
        .iter()
        .map(|per| {
            per.iter()
                .map(|(t_power, m)| DeformationCertJson {
                    t_power: *t_power,
                    membership: membership_to_json(m, &base),
                })
                .collect()
        })
        .collect();
    if serde_json::to_value(&fresh_certs).expect("certs serialize")
        != serde_json::to_value(&r.deformation_certificates).expect("certs serialize")
    {
        return fail("recorded deformation certificates differ from the checker's");
    }
    checks.push(String::from(
        "homotopy: endpoints, residuals, and deformation certificates re-derived and match",
    ));

    // Specializations: recompute each fiber and its residuals.
    if r.specializations.len() != p.specializations.len() {
        return fail("specialization count differs from the problem");
    }
    for (rec, src) in r.specializations.iter().zip(&p.specializations) {
        if rec.t != *src {
            return fail("specialization parameters differ from the problem");
        }
        let t0 = rep(rational_from_str(src), "specialization value")?;
        let fiber: Vec<Jet> = family.iter().map(|j| j.specialize_t(&t0)).collect();
        let fiber_sys = jetlift_core::homotopy::specialize_system(&sys, &t0)
            .map_err(|e| VerifyError::Report(format!("specializing at {}: {}", src, e)))?;
        let residuals = fiber_sys
            .evaluate(&fiber)
            .map_err(|e| VerifyError::Report(e.to_string()))?;
        let fresh_spec = SpecializationJson {
            t: src.clone(),
            fiber: jets_to_json(&fiber),
            residual_valuations: residuals
                .iter()
                .map(|j| valuation_to_json(&j.ord()))
                .collect(),
        };
        if serde_json::to_value(&fresh_spec).expect("specializations serialize")
            != serde_json::to_value(rec).expect("specializations serialize")
        {
            return fail(format!("specialization at t = {} differs from recomputation", src));
        }
    }
    if !p.specializations.is_empty() {
        checks.push(format!(
            "specializations: {} fibers recomputed and match",
            p.specializations.len()
        ));
    }
    Ok(checks)
}

// ---------------------------------------------------------------------------
// cofinal
// ---------------------------------------------------------------------------

fn verify_cofinal(
    p: &crate::schema::CofinalProblem,
    r: &CofinalResultJson,
    mut checks: Checks,
) -> VResult {
    // First, the recorded pairs must be genuine inclusions — checked
    // directly, independent of the search that found them.
    let ctx = VarContext::new(
        p.variables.x.iter().map(String::as_str),
        p.variables.y.iter().map(String::as_str),
        p.variables.t.as_deref(),
    )
    .map_err(|e| VerifyError::Problem(format!("variables: {}", e)))?;
    let base = ctx.without_y();
    let first = Filtration::parse(&p.first, &base)
        .map_err(|e| VerifyError::Problem(format!("first filtration: {}", e)))?;
    let second = Filtration::parse(&p.second, &base)
        .map_err(|e| VerifyError::Problem(format!("second filtration: {}", e)))?;
    let depth = |pairs: &[[u32; 2]]| pairs.iter().map(|p| p[1]).max().unwrap_or(0);
    let first_levels = first
        .materialize(depth(&r.first_into_second).max(p.j_max))
        .map_err(|e| VerifyError::Problem(format!("materializing: {}", e)))?;
    let second_levels = second
        .materialize(depth(&r.second_into_first).max(p.j_max))
        .map_err(|e| VerifyError::Problem(format!("materializing: {}", e)))?;
    for &[j, d] in &r.first_into_second {
        let inner = first_levels
            .get(d as usize)
            .ok_or_else(|| VerifyError::Report(format!("level {} out of range", d)))?;
        let outer = second_levels
            .get(j as usize)
            .ok_or_else(|| VerifyError::Report(format!("level {} out of range", j)))?;
        if !inner.is_subideal_of(outer) {
            return fail(format!("claimed inclusion A_{} ⊆ B_{} fails", d, j));
        }
    }
    for &[j, d] in &r.second_into_first {
        let inner = second_levels
            .get(d as usize)
            .ok_or_else(|| VerifyError::Report(format!("level {} out of range", d)))?;
        let outer = first_levels
            .get(j as usize)
            .ok_or_else(|| VerifyError::Report(format!("level {} out of range", j)))?;
        if !inner.is_subideal_of(outer) {
            return fail(format!("claimed inclusion B_{} ⊆ A_{} fails", d, j));
        }
    }
    checks.push(String::from("inclusions: every recorded pair re-checked directly"));

    // Second, the pairs must be exactly what the search produces.
    let recomputed = recompute_result(&Problem::Cofinal(p.clone()))?;
    compare_result("cofinality pairs", &TaskResult::Cofinal(r.clone()), &recomputed, checks)
}

// ---------------------------------------------------------------------------
// numerical tasks
// ---------------------------------------------------------------------------

fn verify_cutoff(
    p: &crate::schema::CutoffProblem,
    r: &CutoffResultJson,
    status: &str,
    mut checks: Checks,
) -> VResult {
    if r.grid.samples != p.grid.samples {
        return fail("recorded grid sample count differs from the problem");
    }
    if r.z != p.z || r.widths != p.widths {
        return fail("recorded window or widths differ from the problem");
    }
    // Reproduce from the recorded grid (which carries any seed jitter).
    let mut spec = p.clone();
    spec.grid = r.grid.clone();
    let fresh = run_problem(&Problem::Cutoff(spec), 0, false).map_err(VerifyError::Problem)?;
    let expected_status = fresh.status.clone();
    let Some(fresh_result) = fresh.result else {
        return fail(format!(
            "recomputation on the recorded grid was refused ({})",
            fresh
                .refusal
                .map(|r| r.code)
                .unwrap_or_default()
        ));
    };
    if status != expected_status {
        return fail(format!(
            "status `{}` contradicts recomputation (`{}`)",
            status, expected_status
        ));
    }
    let checks2 = compare_result(
        "derivative ratios",
        &TaskResult::Cutoff(r.clone()),
        &fresh_result,
        checks,
    )?;
    checks = checks2;
    checks.push(String::from("cutoff: reproduced bit-for-bit from the recorded grid"));
    Ok(checks)
}

fn verify_borel(
    p: &crate::schema::BorelProblem,
    r: &BorelResultJson,
    status: &str,
    mut checks: Checks,
) -> VResult {
    if r.grid.samples != p.grid.samples {
        return fail("recorded grid sample count differs from the problem");
    }
    if r.center != p.center {
        return fail("recorded center differs from the problem");
    }
    if r.derivative_cap != p.derivative_cap {
        return fail("recorded derivative cap differs from the problem");
    }
    let mut spec = p.clone();
    spec.grid = r.grid.clone();
    let fresh = run_problem(&Problem::Borel(spec), 0, false).map_err(VerifyError::Problem)?;
    let expected_status = fresh.status.clone();
    let Some(fresh_result) = fresh.result else {
        return fail(format!(
            "recomputation on the recorded grid was refused ({})",
            fresh
                .refusal
                .map(|r| r.code)
                .unwrap_or_default()
        ));
    };
    if status != expected_status {
        return fail(format!(
            "status `{}` contradicts recomputation (`{}`)",
            status, expected_status
        ));
    }
    let checks2 = compare_result(
        "assembly",
        &TaskResult::Borel(r.clone()),
        &fresh_result,
        checks,
    )?;
    checks = checks2;
    checks.push(String::from(
        "assembly: scales, plateau, and flatness slopes reproduced bit-for-bit",
    ));
    Ok(checks)
}
