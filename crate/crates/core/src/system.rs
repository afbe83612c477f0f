//! Polynomial systems in the unknowns, their Jacobians, and the adjugate
//! data that drives the lifting engine.
//!
//! A [`PolySystem`] is a list of exact polynomial equations
//! `F_1, …, F_s` over a shared context, optionally considered modulo a
//! monomial ideal in the x-variables (the `quotient`).  From the Jacobian
//! in the unknowns `J = (∂F_i/∂y_k)` the engine needs the Gram determinant
//! `h = det(J·Jᵀ)` and the cokernel matrix `M = Jᵀ·adj(J·Jᵀ)`, which
//! satisfy the identity `J·M = h·Id` — the algebraic heart of the Newton
//! step.  Determinants are computed by cofactor expansion, so the number
//! of equations is capped at [`MAX_EQUATIONS`].

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::One;

use crate::context::VarContext;
use crate::ideal::MonomialIdeal;
use crate::jet::{Jet, JetError, Monomial, Rational, Valuation};

/// Cofactor expansion of the Gram determinant is O(s!); beyond this the
/// construction refuses rather than silently degrading.
pub const MAX_EQUATIONS: usize = 4;

/// Errors from system construction and the formal-solution check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemError {
    ContextMismatch,
    /// An equation is not an exact polynomial.
    NotPolynomial { equation: usize },
    /// No equations, or no unknowns to solve for.
    EmptySystem,
    /// More equations than [`MAX_EQUATIONS`].
    SystemTooLarge { equations: usize },
    /// A supplied solution vector has the wrong length.
    WrongArity { expected: usize, got: usize },
    /// A supplied solution jet is not stored to the order the check needs.
    InsufficientOrder { needed: u32, available: u32 },
    /// The formal-solution check failed: this equation's residual has a
    /// term of weighted degree at most the check order that survives
    /// reduction by the quotient ideal.
    NotFormalSolution { equation: usize, witness: Monomial },
    /// Jet arithmetic failed (context mixups and the like).
    Jet(JetError),
}

impl fmt::Display for SystemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemError::ContextMismatch => write!(f, "system contexts do not match"),
            SystemError::NotPolynomial { equation } => {
                write!(f, "equation {} is not an exact polynomial", equation)
            }
            SystemError::EmptySystem => write!(f, "system has no equations or no unknowns"),
            SystemError::SystemTooLarge { equations } => write!(
                f,
                "system has {} equations; adjugate data is limited to {}",
                equations, MAX_EQUATIONS
            ),
            SystemError::WrongArity { expected, got } => {
                write!(f, "expected {} solution components, got {}", expected, got)
            }
            SystemError::InsufficientOrder { needed, available } => write!(
                f,
                "solution stored through order {} but the check needs {}",
                available, needed
            ),
            SystemError::NotFormalSolution { equation, witness } => write!(
                f,
                "equation {} has a surviving residual monomial with exponents {:?}",
                equation, witness.0
            ),
            SystemError::Jet(e) => write!(f, "{}", e),
        }
    }
}

impl core::error::Error for SystemError {}

impl From<JetError> for SystemError {
    fn from(e: JetError) -> Self {
        SystemError::Jet(e)
    }
}

// ----- small dense matrices of jets ------------------------------------------------

/// Dense row-major matrix of jets over one context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Jet>,
}

/// Raises two exact polynomials to a common safe order and multiplies, so
/// no product term is ever truncated.
fn pmul(a: &Jet, b: &Jet) -> Jet {
    let o = a.order().saturating_add(b.order());
    a.with_order_at_least(o)
        .mul(&b.with_order_at_least(o))
        .expect("same context")
}

fn padd(a: &Jet, b: &Jet) -> Jet {
    let o = a.order().max(b.order());
    a.with_order_at_least(o)
        .add(&b.with_order_at_least(o))
        .expect("same context")
}

impl JetMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Jet>) -> JetMatrix {
        assert_eq!(entries.len(), rows * cols, "entry count must match shape");
        JetMatrix { rows, cols, entries }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Jet) -> JetMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        JetMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Jet {
        &self.entries[i * self.cols + j]
    }

    pub fn transpose(&self) -> JetMatrix {
        JetMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map(&self, mut f: impl FnMut(&Jet) -> Jet) -> JetMatrix {
        JetMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| f(e)).collect(),
        }
    }

    /// Matrix product with truncating jet arithmetic (min-order rule); use
    /// on matrices whose entries share a working order.
    pub fn mul(&self, other: &JetMatrix) -> Result<JetMatrix, JetError> {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: Option<Jet> = None;
                for k in 0..self.cols {
                    let term = self.get(i, k).mul(other.get(k, j))?;
                    acc = Some(match acc {
                        None => term,
                        Some(a) => a.add(&term)?,
                    });
                }
                entries.push(acc.expect("inner dimension nonzero"));
            }
        }
        Ok(JetMatrix {
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    /// Matrix product in exact polynomial arithmetic (orders raised so no
    /// term truncates).  Entries must be exact.
    pub fn polynomial_mul(&self, other: &JetMatrix) -> JetMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        JetMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc: Option<Jet> = None;
            for k in 0..self.cols {
                let term = pmul(self.get(i, k), other.get(k, j));
                acc = Some(match acc {
                    None => term,
                    Some(a) => padd(&a, &term),
                });
            }
            acc.expect("inner dimension nonzero")
        })
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> JetMatrix {
        JetMatrix::from_fn(self.rows - 1, self.cols - 1, |i, j| {
            let si = if i < skip_row { i } else { i + 1 };
            let sj = if j < skip_col { j } else { j + 1 };
            self.get(si, sj).clone()
        })
    }

    /// Determinant by cofactor expansion, in exact polynomial arithmetic.
    /// Entries must be exact polynomials.
    pub fn det(&self, ctx: &VarContext) -> Jet {
        assert_eq!(self.rows, self.cols, "determinant of a square matrix");
        debug_assert!(self.entries.iter().all(Jet::is_exact));
        if self.rows == 0 {
            return Jet::constant(ctx, Rational::one(), 0);
        }
        if self.rows == 1 {
            return self.get(0, 0).clone();
        }
        let mut acc = Jet::zero(ctx, 0);
        for j in 0..self.cols {
            let cof = pmul(self.get(0, j), &self.minor(0, j).det(ctx));
            let signed = if j % 2 == 0 { cof } else { cof.neg() };
            acc = padd(&acc, &signed);
        }
        acc
    }

    /// Adjugate (transpose of the cofactor matrix): `M·adj(M) = det(M)·Id`.
    /// Entries must be exact polynomials.
    pub fn adjugate(&self, ctx: &VarContext) -> JetMatrix {
        assert_eq!(self.rows, self.cols, "adjugate of a square matrix");
        JetMatrix::from_fn(self.rows, self.cols, |i, j| {
            // adj[i][j] = (−1)^{i+j} · det(minor with row j, column i removed)
            let d = self.minor(j, i).det(ctx);
            if (i + j) % 2 == 0 {
                d
            } else {
                d.neg()
            }
        })
    }
}

// ----- systems -------------------------------------------------------------------------

/// A system of exact polynomial equations in the unknowns, optionally
/// taken modulo a monomial ideal in the x-variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySystem {
    ctx: VarContext,
    equations: Vec<Jet>,
    quotient: Option<MonomialIdeal>,
}

impl PolySystem {
    pub fn new(
        ctx: &VarContext,
        equations: Vec<Jet>,
        quotient: Option<MonomialIdeal>,
    ) -> Result<PolySystem, SystemError> {
        if equations.is_empty() || ctx.num_y() == 0 {
            return Err(SystemError::EmptySystem);
        }
        for (i, eq) in equations.iter().enumerate() {
            if eq.ctx() != ctx {
                return Err(SystemError::ContextMismatch);
            }
            if !eq.is_exact() {
                return Err(SystemError::NotPolynomial { equation: i });
            }
        }
        if let Some(q) = &quotient {
            if q.ctx().x_vars() != ctx.x_vars() {
                return Err(SystemError::ContextMismatch);
            }
        }
        Ok(PolySystem {
            ctx: ctx.clone(),
            equations,
            quotient,
        })
    }

    pub fn ctx(&self) -> &VarContext {
        &self.ctx
    }

    pub fn equations(&self) -> &[Jet] {
        &self.equations
    }

    pub fn num_equations(&self) -> usize {
        self.equations.len()
    }

    pub fn num_unknowns(&self) -> usize {
        self.ctx.num_y()
    }

    pub fn quotient(&self) -> Option<&MonomialIdeal> {
        self.quotient.as_ref()
    }

    fn check_assignment(&self, y: &[Jet]) -> Result<(), SystemError> {
        if y.len() != self.num_unknowns() {
            return Err(SystemError::WrongArity {
                expected: self.num_unknowns(),
                got: y.len(),
            });
        }
        let base = self.ctx.without_y();
        for a in y {
            if *a.ctx() != base {
                return Err(SystemError::ContextMismatch);
            }
        }
        Ok(())
    }

    /// Evaluates every equation at the assignment, reducing by the
    /// quotient ideal when one is present.
    pub fn evaluate(&self, y: &[Jet]) -> Result<Vec<Jet>, SystemError> {
        self.check_assignment(y)?;
        let mut out = Vec::with_capacity(self.equations.len());
        for eq in &self.equations {
            let mut v = eq.substitute(y)?;
            if let Some(q) = &self.quotient {
                v = q.reduce_jet(&v).map_err(|_| SystemError::ContextMismatch)?;
            }
            out.push(v);
        }
        Ok(out)
    }

    /// The Jacobian in the unknowns: `J[i][k] = ∂F_i/∂y_k`, an `s × n`
    /// matrix of exact polynomials over the system context.
    pub fn jacobian_y(&self) -> JetMatrix {
        let y_names: Vec<String> = self.ctx.y_vars().to_vec();
        JetMatrix::from_fn(self.equations.len(), y_names.len(), |i, k| {
            let d = self.equations[i]
                .partial_derivative(&y_names[k])
                .expect("y-variable exists");
            // Derivatives of exact polynomials are exact; restore a
            // comfortable order so later polynomial algebra never clips.
            d.with_order_at_least(self.equations[i].order())
        })
    }

    /// Gram/adjugate data for the Newton step.
    ///
    /// Computes symbolically (as exact polynomials in x and y):
    /// the Jacobian `J`, the Gram matrix `G = J·Jᵀ`, its determinant
    /// `h = det(G)`, and the cokernel matrix `M = Jᵀ·adj(G)`, which
    /// together satisfy `J·M = h·Id_s`.  Refuses systems with more than
    /// [`MAX_EQUATIONS`] equations.
    pub fn jacobian_data(&self) -> Result<JacobianData, SystemError> {
        let s = self.equations.len();
        if s > MAX_EQUATIONS {
            return Err(SystemError::SystemTooLarge { equations: s });
        }
        let jacobian = self.jacobian_y();
        let gram = jacobian.polynomial_mul(&jacobian.transpose());
        let h = gram.det(&self.ctx);
        let adj = gram.adjugate(&self.ctx);
        let cokernel = jacobian.transpose().polynomial_mul(&adj);
        #[cfg(debug_assertions)]
        {
            let prod = jacobian.polynomial_mul(&cokernel);
            for i in 0..s {
                for j in 0..s {
                    let want = if i == j {
                        h.clone()
                    } else {
                        Jet::zero(&self.ctx, 0)
                    };
                    let got = prod.get(i, j);
                    debug_assert!(
                        got.sub(&want.with_order_at_least(got.order()))
                            .map(|d| d.is_zero())
                            .unwrap_or(false),
                        "J·M = h·Id violated at ({}, {})",
                        i,
                        j
                    );
                }
            }
        }
        Ok(JacobianData {
            jacobian,
            gram,
            h,
            cokernel,
        })
    }
}

/// Symbolic Jacobian/adjugate package: `J·cokernel = h·Id`.
#[derive(Debug, Clone)]
pub struct JacobianData {
    /// `s × n` Jacobian in the unknowns.
    pub jacobian: JetMatrix,
    /// `s × s` Gram matrix `J·Jᵀ`.
    pub gram: JetMatrix,
    /// Gram determinant `det(J·Jᵀ)`.
    pub h: Jet,
    /// `n × s` cokernel matrix `Jᵀ·adj(J·Jᵀ)`.
    pub cokernel: JetMatrix,
}

/// Certificate that an assignment solves the system through the stated
/// order: one residual valuation per equation, each exceeding the order
/// (or infinite) after quotient reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalCheckCertificate {
    pub order: u32,
    pub residual_valuations: Vec<Valuation>,
}

/// Checks `F(y) ≡ 0 mod m^{order+1} (+ quotient)`: every residual monomial
/// of weighted degree ≤ `order` must reduce away.  On failure names the
/// offending equation and the graded-lex-least surviving monomial.
pub fn formal_solution_check(
    sys: &PolySystem,
    y: &[Jet],
    order: u32,
) -> Result<FormalCheckCertificate, SystemError> {
    sys.check_assignment(y)?;
    for a in y {
        if let Valuation::Finite(avail) = a.effective_order() {
            if avail < order {
                return Err(SystemError::InsufficientOrder {
                    needed: order,
                    available: avail,
                });
            }
        }
    }
    let mut vals = Vec::with_capacity(sys.num_equations());
    for (i, mut r) in sys.evaluate(y)?.into_iter().enumerate() {
        if let Some(q) = sys.quotient() {
            r = q.reduce_jet(&r).map_err(|_| SystemError::ContextMismatch)?;
        }
        let low = r.truncate_to(order);
        if let Some((witness, _)) = low.terms().next() {
            return Err(SystemError::NotFormalSolution {
                equation: i,
                witness: witness.clone(),
            });
        }
        vals.push(r.ord());
    }
    Ok(FormalCheckCertificate {
        order,
        residual_valuations: vals,
    })
}

/// A quotiented system rewritten with explicit slack unknowns.
///
/// For quotient generators `q_1, …, q_r`, each equation `F_i` becomes
/// `F_i − Σ_α q_α·w_{i,α}` over a context extended by the slack unknowns
/// `w_{i,α}`, and the quotient is dropped.  A genuine solution of the
/// unfolded system exhibits `F_i(y*) = Σ_α q_α·w*_{i,α}` — a constructive
/// witness that the original residual lies in the quotient ideal.
#[derive(Debug, Clone)]
pub struct UnfoldedSystem {
    pub system: PolySystem,
    /// Number of original unknowns (slacks follow them in the y-block).
    pub base_unknowns: usize,
    /// `(equation index, quotient generator, slack name)` per slack.
    pub slacks: Vec<(usize, Monomial, String)>,
}

pub fn quotient_unfold(sys: &PolySystem) -> Result<UnfoldedSystem, SystemError> {
    let Some(quotient) = sys.quotient() else {
        return Ok(UnfoldedSystem {
            system: sys.clone(),
            base_unknowns: sys.num_unknowns(),
            slacks: Vec::new(),
        });
    };
    let gens: Vec<Monomial> = quotient.gens().cloned().collect();
    let mut y_names: Vec<String> = sys.ctx().y_vars().to_vec();
    let mut slacks = Vec::new();
    for i in 0..sys.num_equations() {
        for (a, g) in gens.iter().enumerate() {
            let mut name = alloc::format!("w{}_{}", i + 1, a + 1);
            while sys.ctx().index_of(&name).is_some() {
                name.push('_');
            }
            y_names.push(name.clone());
            slacks.push((i, g.clone(), name));
        }
    }
    let ctx = sys
        .ctx()
        .with_y_vars(y_names)
        .map_err(|_| SystemError::ContextMismatch)?;
    let nx = ctx.num_x();
    let n = ctx.num_vars();
    let mut equations = Vec::with_capacity(sys.num_equations());
    for (i, eq) in sys.equations().iter().enumerate() {
        let mut new_eq = eq.extend_to(&ctx)?;
        for (eq_idx, g, name) in &slacks {
            if *eq_idx != i {
                continue;
            }
            let slack_slot = ctx.index_of(name).expect("slack just added");
            let mut exps = alloc::vec![0u32; n];
            exps[..nx].copy_from_slice(&g.0);
            exps[slack_slot] = 1;
            let m = Monomial(exps);
            let term = Jet::from_terms(
                &ctx,
                m.weighted_degree(ctx.t_index()),
                true,
                [(m, -Rational::one())],
            );
            new_eq = padd(&new_eq, &term);
        }
        equations.push(new_eq);
    }
    Ok(UnfoldedSystem {
        system: PolySystem::new(&ctx, equations, None)?,
        base_unknowns: sys.num_unknowns(),
        slacks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_polynomial;

    fn sys1() -> (VarContext, PolySystem) {
        let ctx = VarContext::new(["x"], ["y"], None).unwrap();
        let f = parse_polynomial("y^2 - 1 - x", &ctx).unwrap();
        let sys = PolySystem::new(&ctx, alloc::vec![f], None).unwrap();
        (ctx, sys)
    }

    /// Equality of exact polynomials regardless of their order fields.
    fn same_poly(a: &Jet, b: &Jet) -> bool {
        let o = a.order().max(b.order());
        a.with_order_at_least(o) == b.with_order_at_least(o)
    }

    #[test]
    fn jacobian_of_known_system() {
        let ctx = VarContext::new(["x"], ["y1", "y2"], None).unwrap();
        let f1 = parse_polynomial("y1^2 + x*y2", &ctx).unwrap();
        let f2 = parse_polynomial("y2 - x^3", &ctx).unwrap();
        let sys = PolySystem::new(&ctx, alloc::vec![f1, f2], None).unwrap();
        let jac = sys.jacobian_y();
        assert_eq!(jac.get(0, 0).to_expr_string(), "2*y1");
        assert_eq!(jac.get(0, 1).to_expr_string(), "x");
        assert_eq!(jac.get(1, 0).to_expr_string(), "0");
        assert_eq!(jac.get(1, 1).to_expr_string(), "1");
    }

    #[test]
    fn determinant_and_adjugate_identity() {
        // 3×3 polynomial matrix: check M·adj(M) = det(M)·Id entrywise.
        let ctx = VarContext::x_only(["x1", "x2"]).unwrap();
        let e = |s: &str| parse_polynomial(s, &ctx).unwrap();
        let m = JetMatrix::new(
            3,
            3,
            alloc::vec![
                e("1 + x1"),
                e("x2"),
                e("0"),
                e("x1*x2"),
                e("2"),
                e("x1"),
                e("1"),
                e("x2^2"),
                e("3 - x1"),
            ],
        );
        let det = m.det(&ctx);
        // Hand expansion along the first row:
        // (1+x1)·(2(3−x1) − x1·x2²) − x2·(x1x2(3−x1) − x1)
        let want = e("(1 + x1)*(2*(3 - x1) - x1*x2^2) - x2*(x1*x2*(3 - x1) - x1)");
        assert!(same_poly(&det, &want), "det = {}", det);

        let adj = m.adjugate(&ctx);
        let prod = m.polynomial_mul(&adj);
        for i in 0..3 {
            for j in 0..3 {
                let got = prod.get(i, j);
                if i == j {
                    assert!(same_poly(got, &det), "diagonal ({},{}) = {}", i, j, got);
                } else {
                    assert!(got.is_zero(), "off-diagonal ({},{}) = {}", i, j, got);
                }
            }
        }
    }

    #[test]
    fn gram_data_for_square_root_system() {
        let (ctx, sys) = sys1();
        let data = sys.jacobian_data().unwrap();
        assert_eq!(data.jacobian.get(0, 0).to_expr_string(), "2*y");
        assert_eq!(data.gram.get(0, 0).to_expr_string(), "4*y^2");
        assert_eq!(data.h.to_expr_string(), "4*y^2");
        assert_eq!(data.cokernel.get(0, 0).to_expr_string(), "2*y");
        let _ = ctx;
    }

    #[test]
    fn too_many_equations_refused() {
        let ctx = VarContext::new(["x"], ["y1", "y2", "y3", "y4", "y5"], None).unwrap();
        let eqs: Vec<Jet> = (1..=5)
            .map(|i| parse_polynomial(&alloc::format!("y{} - x", i), &ctx).unwrap())
            .collect();
        let sys = PolySystem::new(&ctx, eqs, None).unwrap();
        assert_eq!(
            sys.jacobian_data().unwrap_err(),
            SystemError::SystemTooLarge { equations: 5 }
        );
    }

    #[test]
    fn evaluate_reduces_by_quotient() {
        let ctx = VarContext::new(["x"], ["y"], None).unwrap();
        let f = parse_polynomial("y^2 - x^2 - x^5", &ctx).unwrap();
        let q = MonomialIdeal::parse("x^4", &ctx).unwrap();
        let sys = PolySystem::new(&ctx, alloc::vec![f], Some(q)).unwrap();
        let y = parse_polynomial("x", &ctx.without_y()).unwrap().with_order_at_least(8);
        let r = sys.evaluate(core::slice::from_ref(&y)).unwrap();
        // y=x gives residual −x^5, which dies in the quotient by (x^4).
        assert!(r[0].is_zero());
    }

    #[test]
    fn formal_check_certifies_and_refuses() {
        let (ctx, sys) = sys1();
        let base = ctx.without_y();
        // y = 1 + x/2 − x²/8 solves y² = 1 + x through order 2.
        let y = parse_polynomial("1 + 1/2*x - 1/8*x^2", &base)
            .unwrap()
            .with_order_at_least(6);
        let cert = formal_solution_check(&sys, core::slice::from_ref(&y), 2).unwrap();
        assert_eq!(cert.residual_valuations, alloc::vec![Valuation::Finite(3)]);

        let err = formal_solution_check(&sys, core::slice::from_ref(&y), 3).unwrap_err();
        assert_eq!(
            err,
            SystemError::NotFormalSolution {
                equation: 0,
                witness: Monomial(alloc::vec![3])
            }
        );

        let short = y.truncate_to(1);
        assert!(matches!(
            formal_solution_check(&sys, core::slice::from_ref(&short), 4),
            Err(SystemError::InsufficientOrder { needed: 4, available: 1 })
        ));
    }

    #[test]
    fn unfold_introduces_slacks_with_witness_identity() {
        let ctx = VarContext::new(["x"], ["y"], None).unwrap();
        let f = parse_polynomial("y^2 - 1 - x", &ctx).unwrap();
        let q = MonomialIdeal::parse("x^3, x^2", &ctx).unwrap(); // minimizes to (x^2)
        let sys = PolySystem::new(&ctx, alloc::vec![f.clone()], Some(q)).unwrap();
        let unfolded = quotient_unfold(&sys).unwrap();
        assert!(unfolded.system.quotient().is_none());
        assert_eq!(unfolded.base_unknowns, 1);
        assert_eq!(unfolded.slacks.len(), 1);
        assert_eq!(unfolded.system.ctx().y_vars(), ["y", "w1_1"]);
        // F̃(y, w) = F(y) − x²·w: substituting w = (F(y) − anything in (x²))/x²…
        // spot-check the identity on concrete values y = 1, w = −1:
        let base = unfolded.system.ctx().without_y();
        let one = parse_polynomial("1", &base).unwrap().with_order_at_least(6);
        let neg = parse_polynomial("-1", &base).unwrap().with_order_at_least(6);
        let v = unfolded.system.evaluate(&[one, neg]).unwrap();
        // F(1) = −x, plus x²·1 = x² − x.
        assert_eq!(v[0].to_expr_string(), "-x + x^2");
    }
}
