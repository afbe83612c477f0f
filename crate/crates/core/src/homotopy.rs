//! Parametric lifting and independent verification of solution families.
//!
//! A system over a context with a deformation parameter `t` (weight zero)
//! can be lifted exactly like an unparametrized one: the engine's
//! arithmetic is weighted, so `t`-dependence rides along for free as long
//! as the certificate pair `(h̃, B)` stays invertible uniformly in `t`.
//! When it does not — dividing a generator by `h̃²` would need unbounded
//! powers of `t` — the engine reports degeneration along the parameter
//! instead of a truncated half-answer.
//!
//! The verifier is deliberately independent of the solver: it re-checks a
//! claimed family against the endpoints, re-evaluates the residual, and
//! re-derives the per-`t`-power ideal memberships, reporting every failure
//! with a concrete monomial witness.

use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::ideal::{IdealMembership, MembershipFailure, MonomialIdeal};
use crate::jet::{Jet, JetError, Monomial, Rational, Valuation};
use crate::lift::{tougeron_step, LiftError, LiftSolution};
use crate::system::{PolySystem, SystemError};

/// Errors from parametric lifting and family specialization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomotopyError {
    /// The system has no deformation parameter.
    MissingParameter,
    Lift(LiftError),
    System(SystemError),
}

impl fmt::Display for HomotopyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomotopyError::MissingParameter => {
                write!(f, "system has no deformation parameter")
            }
            HomotopyError::Lift(e) => write!(f, "{}", e),
            HomotopyError::System(e) => write!(f, "{}", e),
        }
    }
}

impl core::error::Error for HomotopyError {}

impl From<LiftError> for HomotopyError {
    fn from(e: LiftError) -> Self {
        HomotopyError::Lift(e)
    }
}

impl From<SystemError> for HomotopyError {
    fn from(e: SystemError) -> Self {
        HomotopyError::System(e)
    }
}

impl From<JetError> for HomotopyError {
    fn from(e: JetError) -> Self {
        HomotopyError::Lift(LiftError::Jet(e))
    }
}

/// A lifted family of solutions over `(x, t)`, with the ideal confining
/// its deviation from the `t = 0` fiber.
#[derive(Debug, Clone)]
pub struct SolutionFamily {
    /// Target order of the lift.
    pub order: u32,
    /// One jet over `(x, t)` per unknown.
    pub family: Vec<Jet>,
    /// The derived correction ideal: each correction component lies in it
    /// through the target order.
    pub ideal: MonomialIdeal,
    /// The full certified lift the family came from.
    pub lift: LiftSolution,
}

impl SolutionFamily {
    /// The fiber at a rational parameter value, over the `t`-free context.
    pub fn specialize(&self, value: &Rational) -> Vec<Jet> {
        self.family.iter().map(|j| j.specialize_t(value)).collect()
    }
}

/// Lifts a start family over `(x, t)` through the given order.  The
/// residual ideal lives in the x-variables only; `t` is carried exactly.
pub fn parametric_lift(
    sys: &PolySystem,
    y_start: &[Jet],
    ideal: &MonomialIdeal,
    order: u32,
) -> Result<SolutionFamily, HomotopyError> {
    if sys.ctx().t_var().is_none() {
        return Err(HomotopyError::MissingParameter);
    }
    let lift = tougeron_step(sys, y_start, ideal, order)?;
    Ok(SolutionFamily {
        order,
        family: lift.y_solution.clone(),
        ideal: lift.correction_ideal.clone(),
        lift,
    })
}

/// The system's fiber at a rational parameter value: every equation
/// specialized, the quotient (if any) carried over.
pub fn specialize_system(
    sys: &PolySystem,
    value: &Rational,
) -> Result<PolySystem, HomotopyError> {
    if sys.ctx().t_var().is_none() {
        return Err(HomotopyError::MissingParameter);
    }
    let equations: Vec<Jet> = sys
        .equations()
        .iter()
        .map(|eq| eq.specialize_t(value))
        .collect();
    let ctx = equations
        .first()
        .map(|eq| eq.ctx().clone())
        .expect("systems are nonempty");
    let quotient = sys.quotient().map(|q| {
        MonomialIdeal::new(&ctx, q.gens().cloned()).expect("same x-block")
    });
    Ok(PolySystem::new(&ctx, equations, quotient)?)
}

/// One verifiable defect in a claimed homotopy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomotopyIssue {
    /// Wrong number of family components.
    ArityMismatch { expected: usize, got: usize },
    /// The fiber at `t = 0` (end = 0) or `t = 1` (end = 1) differs from
    /// the claimed endpoint at this monomial.
    EndpointMismatch {
        end: u8,
        component: usize,
        witness: Monomial,
    },
    /// An equation's residual fails to vanish through the target order.
    ResidualNonzero { equation: usize, witness: Monomial },
    /// A `t`-power coefficient of `family − y₀` escapes the deformation
    /// ideal.
    DeformationEscapesIdeal {
        component: usize,
        t_power: u32,
        witness: Monomial,
    },
}

impl fmt::Display for HomotopyIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomotopyIssue::ArityMismatch { expected, got } => {
                write!(f, "family has {} components, expected {}", got, expected)
            }
            HomotopyIssue::EndpointMismatch {
                end,
                component,
                witness,
            } => write!(
                f,
                "fiber at t = {} differs from the claimed endpoint in component {} at monomial {:?}",
                end, component, witness.0
            ),
            HomotopyIssue::ResidualNonzero { equation, witness } => write!(
                f,
                "residual of equation {} is nonzero at monomial {:?}",
                equation, witness.0
            ),
            HomotopyIssue::DeformationEscapesIdeal {
                component,
                t_power,
                witness,
            } => write!(
                f,
                "t^{} coefficient of component {} escapes the ideal at monomial {:?}",
                t_power, component, witness.0
            ),
        }
    }
}

/// The verifier's findings: certificates for what holds, witnesses for
/// what does not.
#[derive(Debug, Clone)]
pub struct HomotopyReport {
    pub order: u32,
    /// True exactly when `issues` is empty.
    pub pass: bool,
    pub issues: Vec<HomotopyIssue>,
    /// Residual valuations of `F(family)`, one per equation (present when
    /// arity checks passed).
    pub residual_valuations: Vec<Valuation>,
    /// Per component: `(t-power, membership of that coefficient of
    /// `family − y₀` in the deformation ideal)`.
    pub deformation_certificates: Vec<Vec<(u32, IdealMembership)>>,
}

/// Independently verifies a claimed solution family against its system,
/// endpoints, and deformation ideal, through the given order.
///
/// Nothing is recomputed from the solver's internal state: the family is
/// taken at face value and every claim is re-derived.
pub fn verify_homotopy(
    sys: &PolySystem,
    family: &[Jet],
    start: &[Jet],
    end: &[Jet],
    ideal: &MonomialIdeal,
    order: u32,
) -> Result<HomotopyReport, HomotopyError> {
    if sys.ctx().t_var().is_none() {
        return Err(HomotopyError::MissingParameter);
    }
    let n = sys.num_unknowns();
    let mut issues = Vec::new();
    for got in [family.len(), start.len(), end.len()] {
        if got != n {
            issues.push(HomotopyIssue::ArityMismatch { expected: n, got });
        }
    }
    if !issues.is_empty() {
        return Ok(HomotopyReport {
            order,
            pass: false,
            issues,
            residual_valuations: Vec::new(),
            deformation_certificates: Vec::new(),
        });
    }

    // (a) Endpoints: the fibers at t = 0 and t = 1 must agree with the
    // claimed endpoints through the target order.
    let zero = Rational::zero();
    let one = Rational::one();
    for (end_tag, value, claimed) in [(0u8, &zero, start), (1u8, &one, end)] {
        for (i, fam) in family.iter().enumerate() {
            let fiber = fam.specialize_t(value);
            let witness = first_difference(&fiber, &claimed[i], order)
                .map_err(|e| HomotopyError::Lift(LiftError::Jet(e)))?;
            if let Some(witness) = witness {
                issues.push(HomotopyIssue::EndpointMismatch {
                    end: end_tag,
                    component: i,
                    witness,
                });
            }
        }
    }

    // (b) Residual: F(family) must vanish through the order.
    let mut residual_valuations = Vec::with_capacity(sys.num_equations());
    for (i, r) in sys.evaluate(family)?.iter().enumerate() {
        let tr = r.truncate_to(order);
        if let Some((witness, _)) = tr.terms().next() {
            issues.push(HomotopyIssue::ResidualNonzero {
                equation: i,
                witness: witness.clone(),
            });
        }
        residual_valuations.push(r.ord());
    }

    // (c) Deformation: every t-power coefficient of family − y₀ lies in
    // the ideal, with cofactor certificates.
    let t_ctx = family[0].ctx().clone();
    let mut deformation_certificates = Vec::with_capacity(n);
    for (i, fam) in family.iter().enumerate() {
        let start_t = start[i].extend_to(&t_ctx)?;
        let o = fam.order().max(start_t.order());
        let diff = fam
            .with_order_at_least(o)
            .sub(&start_t.with_order_at_least(o))
            .map_err(LiftError::Jet)?
            .truncate_to(order);
        let mut certs = Vec::new();
        for (p, coeff) in diff.t_coefficients() {
            match ideal.contains_jet(&coeff) {
                Ok(m) => certs.push((p, m)),
                Err(MembershipFailure::NotContained { witness }) => {
                    issues.push(HomotopyIssue::DeformationEscapesIdeal {
                        component: i,
                        t_power: p,
                        witness,
                    });
                }
                Err(MembershipFailure::ContextMismatch) => {
                    return Err(HomotopyError::Lift(LiftError::Ideal(
                        crate::ideal::IdealError::ContextMismatch,
                    )));
                }
            }
        }
        deformation_certificates.push(certs);
    }

    Ok(HomotopyReport {
        order,
        pass: issues.is_empty(),
        issues,
        residual_valuations,
        deformation_certificates,
    })
}

/// First monomial (graded-lex) where two jets disagree through `order`,
/// ignoring stored-order bookkeeping.
fn first_difference(a: &Jet, b: &Jet, order: u32) -> Result<Option<Monomial>, JetError> {
    let o = a.order().max(b.order()).max(order);
    let d = a.with_order_at_least(o).sub(&b.with_order_at_least(o))?;
    Ok(d.truncate_to(order).terms().next().map(|(m, _)| m.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::VarContext;
    use crate::expr::parse_polynomial;

    fn p(ctx: &VarContext, src: &str) -> Jet {
        parse_polynomial(src, ctx).unwrap()
    }

    fn deformed_sqrt() -> (VarContext, PolySystem) {
        // F = y² − (1 + x + t·x²): at t = 0 the square root of 1 + x, at
        // t = 1 of 1 + x + x².
        let ctx = VarContext::new(["x"], ["y"], Some("t")).unwrap();
        let f = p(&ctx, "y^2 - 1 - x - t*x^2");
        (ctx.clone(), PolySystem::new(&ctx, alloc::vec![f], None).unwrap())
    }

    #[test]
    fn parametric_lift_specializes_to_both_endpoints() {
        let (ctx, sys) = deformed_sqrt();
        let base = ctx.without_y();
        let ideal = MonomialIdeal::parse("x", &ctx).unwrap();
        let start = alloc::vec![p(&base, "1")];
        let fam = parametric_lift(&sys, &start, &ideal, 6).unwrap();

        // t = 0 fiber is √(1+x).
        let fiber0 = fam.specialize(&Rational::zero());
        let sqrt_1px = "1 + 1/2*x - 1/8*x^2 + 1/16*x^3 - 5/128*x^4 + 7/256*x^5 - 21/1024*x^6";
        assert_eq!(fiber0[0].truncate_to(6).to_expr_string(), sqrt_1px);

        // t = 1 fiber solves y² = 1 + x + x² exactly through order 6.
        let fiber1 = fam.specialize(&Rational::one());
        let x_ctx = fiber0[0].ctx().clone();
        let target = p(&x_ctx, "1 + x + x^2").with_order_at_least(12);
        let sq = fiber1[0]
            .with_order_at_least(12)
            .mul(&fiber1[0].with_order_at_least(12))
            .unwrap();
        let diff = sq.sub(&target).unwrap();
        assert!(diff.truncate_to(6).is_zero());
    }

    #[test]
    fn verifier_accepts_the_lifted_family() {
        let (ctx, sys) = deformed_sqrt();
        let base = ctx.without_y();
        let ideal = MonomialIdeal::parse("x", &ctx).unwrap();
        let start = alloc::vec![p(&base, "1")];
        let fam = parametric_lift(&sys, &start, &ideal, 6).unwrap();
        let y0 = fam.specialize(&Rational::zero());
        let y1 = fam.specialize(&Rational::one());
        let report = verify_homotopy(&sys, &fam.family, &y0, &y1, &ideal, 6).unwrap();
        assert!(report.pass, "issues: {:?}", report.issues);
        assert!(report
            .residual_valuations
            .iter()
            .all(|v| *v > Valuation::Finite(6)));
        // Deformation certificates recombine to the actual coefficients.
        assert!(!report.deformation_certificates[0].is_empty());
    }

    #[test]
    fn verifier_reports_tampered_family_with_witnesses() {
        let (ctx, sys) = deformed_sqrt();
        let base = ctx.without_y();
        let ideal = MonomialIdeal::parse("x", &ctx).unwrap();
        let start = alloc::vec![p(&base, "1")];
        let fam = parametric_lift(&sys, &start, &ideal, 6).unwrap();
        let y0 = fam.specialize(&Rational::zero());
        let y1 = fam.specialize(&Rational::one());

        // Tamper: add x³·t to the family.
        let bump = p(&ctx.without_y(), "x^3*t").with_order_at_least(fam.family[0].order());
        let bad = alloc::vec![fam.family[0]
            .with_order_at_least(bump.order())
            .add(&bump)
            .unwrap()];
        let report = verify_homotopy(&sys, &bad, &y0, &y1, &ideal, 6).unwrap();
        assert!(!report.pass);
        // The t = 1 endpoint and the residual both break; the deformation
        // coefficient x³ still lies in (x), so no escape issue for it.
        assert!(report
            .issues
            .iter()
            .any(|i| matches!(i, HomotopyIssue::EndpointMismatch { end: 1, .. })));
        assert!(report
            .issues
            .iter()
            .any(|i| matches!(i, HomotopyIssue::ResidualNonzero { equation: 0, .. })));
    }

    #[test]
    fn degenerate_parameter_dependence_is_refused() {
        // h = 4y² at y₀ = 1 − t… wait, keep it simple: start 1 − t makes
        // h̃ = 4(1−t)², whose square cannot divide x-generators.
        let (ctx, sys) = deformed_sqrt();
        let base = ctx.without_y();
        let ideal = MonomialIdeal::parse("x", &ctx).unwrap();
        let start = alloc::vec![p(&base, "1 - t")];
        let err = parametric_lift(&sys, &start, &ideal, 4).unwrap_err();
        assert!(matches!(
            err,
            HomotopyError::Lift(LiftError::HDegeneratesAlongT { .. })
        ));
    }

    #[test]
    fn specialized_system_matches_specialized_family_residual() {
        let (ctx, sys) = deformed_sqrt();
        let base = ctx.without_y();
        let ideal = MonomialIdeal::parse("x", &ctx).unwrap();
        let start = alloc::vec![p(&base, "1")];
        let fam = parametric_lift(&sys, &start, &ideal, 6).unwrap();
        let value = Rational::new(2.into(), 7.into());
        let sys_v = specialize_system(&sys, &value).unwrap();
        let fiber = fam.specialize(&value);
        let res = sys_v.evaluate(&fiber).unwrap();
        assert!(res[0].truncate_to(6).is_zero());
    }

    #[test]
    fn missing_parameter_is_an_error() {
        let ctx = VarContext::new(["x"], ["y"], None).unwrap();
        let f = p(&ctx, "y^2 - 1 - x");
        let sys = PolySystem::new(&ctx, alloc::vec![f], None).unwrap();
        let base = ctx.without_y();
        let ideal = MonomialIdeal::parse("x", &ctx).unwrap();
        let start = alloc::vec![p(&base, "1")];
        assert_eq!(
            parametric_lift(&sys, &start, &ideal, 4).unwrap_err(),
            HomotopyError::MissingParameter
        );
    }
}
