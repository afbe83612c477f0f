//! Newton lifting of approximate solutions by substitution, with
//! certificates.
//!
//! Given a polynomial system `F`, an exact polynomial start point `y₀`, a
//! monomial ideal `𝔞` containing the residual `F(y₀)`, and a pair
//! `(h̃, B)` with `J(y₀)·B = h̃·Id` (the Gram-adjugate data of the
//! Jacobian, or a user-supplied annihilator-of-cokernel certificate), the
//! engine substitutes `y = y₀ + h̃·B·z` and expands:
//!
//! ```text
//! F(y₀ + h̃Bz) = F₀ + h̃²·z + Σ_{|k|≥2} h̃^{|k|} T_k (Bz)^k
//! ```
//!
//! Writing `F₀ = h̃²·c` (through the certificate route: each ideal
//! generator `q` divides as `q = h̃²·c_q`, and `c` recombines the residual
//! membership cofactors with the `c_q`), the equation becomes the fixpoint
//! problem `z = −c − Q(z)` with `Q` at least quadratic.  The contraction
//! hypothesis — every generator of `𝔞` has degree at least `2·ord(h̃)+1`
//! and is divisible by `h̃²` — makes the Picard iteration gain at least one
//! order per step, so iterating at the target order stabilizes after
//! finitely many steps.  The correction `Δy = h̃·B·z*` then satisfies,
//! by exact polynomial identities (not numerics):
//!
//! * `F(y₀ + Δy) ≡ 0` through the target order (asserted by direct
//!   re-evaluation), and
//! * `h̃²·Δy_i ∈ 𝔞` through the target order, with explicit cofactors.
//!
//! All of this is refusal-driven: a violated hypothesis produces a typed
//! error naming the offending generator, equation, or matrix entry rather
//! than a best-effort answer.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::context::VarContext;
use crate::ideal::{Filtration, IdealError, IdealMembership, MembershipFailure, MonomialIdeal};
use crate::jet::{Jet, JetError, Monomial, Rational, Valuation};
use crate::system::{JetMatrix, PolySystem, SystemError};

/// Hard ceiling on requested target orders; beyond it the cost model of
/// the dense lower-order arithmetic is no longer sane.
pub const MAX_TARGET_ORDER: u32 = 512;

/// Where the `(h̃, B)` certificate came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateSource {
    /// Computed from the system's own Jacobian: `h = det(J·Jᵀ)`,
    /// `B = Jᵀ·adj(J·Jᵀ)`, both evaluated at the start point.
    GramAdjugate,
    /// Supplied by the caller and verified against `J(y₀)·B = h̃·Id`.
    Supplied,
    /// Derived for a level-shifted system inside the general-filtration
    /// lift.
    LevelShifted,
}

/// Detail for a violated contraction hypothesis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContractionCause {
    /// The generator's degree is below `2·ord(h̃) + 1`.
    OrderTooLow { found: u32, needed: u32 },
    /// `h̃²` does not divide the generator as a power series; the degree
    /// is where the division first became inconsistent.
    NotDivisible { degree: u32 },
}

/// Errors and refusals from the lifting engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiftError {
    System(SystemError),
    Jet(JetError),
    Ideal(IdealError),
    /// The engine works on unquotiented systems; unfold the quotient into
    /// slack unknowns first (`quotient_unfold`).
    QuotientedSystem,
    /// Start points must be exact polynomials.
    StartNotPolynomial { component: usize },
    /// Requested order beyond [`MAX_TARGET_ORDER`].
    OrderBudgetExceeded { requested: u32, limit: u32 },
    /// The Gram determinant vanishes at the start point.
    HZero,
    /// A generator of the residual ideal violates the contraction
    /// hypothesis relative to `h̃`.
    ContractionViolated {
        generator: Monomial,
        cause: ContractionCause,
    },
    /// The residual `F(y₀)` has a monomial outside the residual ideal.
    ResidualNotInIdeal { equation: usize, witness: Monomial },
    /// A supplied certificate fails `J(y₀)·B = h̃·Id` at this entry.
    CertificateInvalid { row: usize, col: usize },
    /// Parametric lift: `h̃²` fails to divide a generator because the
    /// division would need unbounded powers of the deformation parameter.
    HDegeneratesAlongT { generator: Monomial, degree: u32 },
    /// General-filtration lift: the prefix's residual is not in the
    /// filtration ideal at the required level.
    PrefixNotApproximate { equation: usize, witness: Monomial },
    /// Picard iteration failed to stabilize within the iteration cap.
    NoConvergence { iterations: usize },
    /// A proven invariant failed; indicates a defect in the engine, never
    /// in the input.
    Internal(&'static str),
}

impl fmt::Display for LiftError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LiftError::System(e) => write!(f, "{}", e),
            LiftError::Jet(e) => write!(f, "{}", e),
            LiftError::Ideal(e) => write!(f, "{}", e),
            LiftError::QuotientedSystem => {
                write!(f, "engine requires an unquotiented system; unfold the quotient first")
            }
            LiftError::StartNotPolynomial { component } => {
                write!(f, "start component {} is not an exact polynomial", component)
            }
            LiftError::OrderBudgetExceeded { requested, limit } => {
                write!(f, "target order {} exceeds the budget {}", requested, limit)
            }
            LiftError::HZero => write!(f, "Gram determinant vanishes at the start point"),
            LiftError::ContractionViolated { generator, cause } => {
                write!(f, "contraction violated by generator {:?}: ", generator.0)?;
                match cause {
                    ContractionCause::OrderTooLow { found, needed } => {
                        write!(f, "degree {} below the required {}", found, needed)
                    }
                    ContractionCause::NotDivisible { degree } => {
                        write!(f, "h^2 does not divide it (inconsistent at degree {})", degree)
                    }
                }
            }
            LiftError::ResidualNotInIdeal { equation, witness } => write!(
                f,
                "residual of equation {} has monomial {:?} outside the ideal",
                equation, witness.0
            ),
            LiftError::CertificateInvalid { row, col } => write!(
                f,
                "certificate fails J(y0)*B = h*Id at entry ({}, {})",
                row, col
            ),
            LiftError::HDegeneratesAlongT { generator, degree } => write!(
                f,
                "h degenerates along the deformation parameter dividing generator {:?} (degree {})",
                generator.0, degree
            ),
            LiftError::PrefixNotApproximate { equation, witness } => write!(
                f,
                "prefix residual of equation {} has monomial {:?} outside the level ideal",
                equation, witness.0
            ),
            LiftError::NoConvergence { iterations } => {
                write!(f, "iteration failed to stabilize within {} steps", iterations)
            }
            LiftError::Internal(what) => write!(f, "internal invariant violated: {}", what),
        }
    }
}

impl core::error::Error for LiftError {}

impl From<SystemError> for LiftError {
    fn from(e: SystemError) -> Self {
        LiftError::System(e)
    }
}

impl From<JetError> for LiftError {
    fn from(e: JetError) -> Self {
        LiftError::Jet(e)
    }
}

impl From<IdealError> for LiftError {
    fn from(e: IdealError) -> Self {
        LiftError::Ideal(e)
    }
}

/// A certified lift: the solution, its correction, and every certificate
/// an independent checker needs.
#[derive(Debug, Clone)]
pub struct LiftSolution {
    /// Target order `N`: the residual vanishes through this order.
    pub order: u32,
    /// `y₀ + Δy`, exact polynomials presented at order ≥ `N`.
    pub y_solution: Vec<Jet>,
    /// The corrections `Δy = h̃·B·z*`, exact polynomials.
    pub delta_y: Vec<Jet>,
    /// The certificate pair.
    pub h: Jet,
    pub cokernel: JetMatrix,
    /// `ord(h̃)`.
    pub h_valuation: u32,
    pub certificate_source: CertificateSource,
    /// Residual valuations of `F(y_solution)`, each `> N`.
    pub residual_valuations: Vec<Valuation>,
    /// Membership of each residual component `F_i(y₀)` in the ideal.
    pub residual_membership: Vec<IdealMembership>,
    /// Membership of each `h̃²·Δy_i` (truncated at `N`) in the ideal.
    pub correction_membership: Vec<IdealMembership>,
    /// Derived correction ideal `𝔞′` with `Δy_i ∈ 𝔞′` through `N`.
    pub correction_ideal: MonomialIdeal,
    pub correction_ideal_membership: Vec<IdealMembership>,
    /// Number of Picard updates performed.
    pub iterations: usize,
    /// Iterate snapshots `z⁰, z¹, …, z*` (including the repeated final).
    pub z_trace: Vec<Vec<Jet>>,
}

/// Lift using the system's own Gram-adjugate data at the start point.
pub fn tougeron_step(
    sys: &PolySystem,
    y_start: &[Jet],
    ideal: &MonomialIdeal,
    order: u32,
) -> Result<LiftSolution, LiftError> {
    check_start(sys, y_start, order)?;
    let data = sys.jacobian_data()?;
    let h = substitute_poly(&data.h, y_start)?;
    let cokernel = substitute_matrix(&data.cokernel, y_start)?;
    engine(sys, y_start, ideal, order, h, cokernel, CertificateSource::GramAdjugate)
}

/// Lift using a caller-supplied `(h̃, B)` pair, verified against
/// `J(y₀)·B = h̃·Id` as exact polynomials before use.
pub fn ann_coker_step(
    sys: &PolySystem,
    y_start: &[Jet],
    ideal: &MonomialIdeal,
    order: u32,
    h: &Jet,
    cokernel: &JetMatrix,
) -> Result<LiftSolution, LiftError> {
    check_start(sys, y_start, order)?;
    verify_certificate(sys, y_start, h, cokernel)?;
    engine(
        sys,
        y_start,
        ideal,
        order,
        h.clone(),
        cokernel.clone(),
        CertificateSource::Supplied,
    )
}

/// Verifies `J(y₀)·B = h̃·Id` entrywise in exact polynomial arithmetic.
pub fn verify_certificate(
    sys: &PolySystem,
    y_start: &[Jet],
    h: &Jet,
    cokernel: &JetMatrix,
) -> Result<(), LiftError> {
    let base = sys.ctx().without_y();
    let s = sys.num_equations();
    let n = sys.num_unknowns();
    if cokernel.rows() != n || cokernel.cols() != s {
        return Err(LiftError::System(SystemError::WrongArity {
            expected: n * s,
            got: cokernel.rows() * cokernel.cols(),
        }));
    }
    if *h.ctx() != base || !h.is_exact() {
        return Err(LiftError::System(SystemError::ContextMismatch));
    }
    for i in 0..cokernel.rows() {
        for j in 0..cokernel.cols() {
            let e = cokernel.get(i, j);
            if *e.ctx() != base || !e.is_exact() {
                return Err(LiftError::System(SystemError::ContextMismatch));
            }
        }
    }
    let jac_at = substitute_matrix(&sys.jacobian_y(), y_start)?;
    let prod = jac_at.polynomial_mul(cokernel);
    for i in 0..s {
        for j in 0..s {
            let want = if i == j {
                h.clone()
            } else {
                Jet::zero(&base, 0)
            };
            if !same_polynomial(prod.get(i, j), &want) {
                return Err(LiftError::CertificateInvalid { row: i, col: j });
            }
        }
    }
    Ok(())
}

fn same_polynomial(a: &Jet, b: &Jet) -> bool {
    let o = a.order().max(b.order());
    a.with_order_at_least(o) == b.with_order_at_least(o)
}

fn check_start(sys: &PolySystem, y_start: &[Jet], order: u32) -> Result<(), LiftError> {
    if order > MAX_TARGET_ORDER {
        return Err(LiftError::OrderBudgetExceeded {
            requested: order,
            limit: MAX_TARGET_ORDER,
        });
    }
    if sys.quotient().is_some() {
        return Err(LiftError::QuotientedSystem);
    }
    if y_start.len() != sys.num_unknowns() {
        return Err(LiftError::System(SystemError::WrongArity {
            expected: sys.num_unknowns(),
            got: y_start.len(),
        }));
    }
    let base = sys.ctx().without_y();
    for (i, a) in y_start.iter().enumerate() {
        if *a.ctx() != base {
            return Err(LiftError::System(SystemError::ContextMismatch));
        }
        if !a.is_exact() {
            return Err(LiftError::StartNotPolynomial { component: i });
        }
    }
    Ok(())
}

/// Evaluates an exact polynomial in (x, y) at exact polynomial y-values.
fn substitute_poly(p: &Jet, y: &[Jet]) -> Result<Jet, LiftError> {
    Ok(p.substitute(y)?)
}

fn substitute_matrix(m: &JetMatrix, y: &[Jet]) -> Result<JetMatrix, LiftError> {
    let mut entries = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            entries.push(m.get(i, j).substitute(y)?);
        }
    }
    Ok(JetMatrix::new(m.rows(), m.cols(), entries))
}

/// Taylor coefficients of an exact polynomial equation around an exact
/// polynomial base point, indexed by y-multi-index: `T_k = ∂_y^k F (y₀) / k!`
/// for `min_total ≤ |k| ≤ max_total`.  Zero coefficients are omitted, and
/// branches of identically-zero derivatives are pruned early.
pub fn y_taylor(
    eq: &Jet,
    y_start: &[Jet],
    min_total: u32,
    max_total: u32,
) -> Result<BTreeMap<Vec<u32>, Jet>, JetError> {
    let ctx = eq.ctx().clone();
    let ny = ctx.num_y();
    let y_names: Vec<&str> = ctx.y_vars().iter().map(|s| s.as_str()).collect();
    let mut out = BTreeMap::new();
    // level: multi-index → (∂^k F, last variable differentiated)
    let mut level: Vec<(Vec<u32>, Jet, usize)> =
        alloc::vec![(alloc::vec![0u32; ny], eq.clone(), 0)];
    let mut total = 0u32;
    while total < max_total && !level.is_empty() {
        let mut next = Vec::new();
        for (k, d, from) in &level {
            for v in *from..ny {
                let dd = d
                    .partial_derivative(y_names[v])
                    .expect("y-variable exists")
                    .with_order_at_least(eq.order());
                if dd.is_zero() {
                    continue;
                }
                let mut kk = k.clone();
                kk[v] += 1;
                next.push((kk, dd, v));
            }
        }
        total += 1;
        if total >= min_total {
            for (k, d, _) in &next {
                let value = d.substitute(y_start)?;
                if value.is_zero() {
                    continue;
                }
                let kfact: BigInt = k.iter().map(|&e| factorial(e)).product();
                out.insert(k.clone(), value.scale(&Rational::new(BigInt::one(), kfact)));
            }
        }
        level = next;
    }
    Ok(out)
}

fn factorial(n: u32) -> BigInt {
    (1..=n as u64).map(BigInt::from).product()
}

#[allow(clippy::too_many_arguments)]
fn engine(
    sys: &PolySystem,
    y_start: &[Jet],
    ideal: &MonomialIdeal,
    order: u32,
    h: Jet,
    cokernel: JetMatrix,
    source: CertificateSource,
) -> Result<LiftSolution, LiftError> {
    let base = sys.ctx().without_y();
    let s = sys.num_equations();
    let n = sys.num_unknowns();
    if ideal.ctx().x_vars() != base.x_vars() {
        return Err(LiftError::Ideal(IdealError::ContextMismatch));
    }

    // --- h̃ and its valuation -------------------------------------------------
    let e = match h.ord() {
        Valuation::Infinite => return Err(LiftError::HZero),
        Valuation::Finite(e) => e,
    };
    let working = order;
    let h2 = h
        .with_order_at_least(h.order().saturating_mul(2))
        .mul(&h.with_order_at_least(h.order().saturating_mul(2)))?;

    // --- contraction hypothesis per generator ---------------------------------
    // Each generator q must have degree ≥ 2e+1 and divide as q = h̃²·c_q.
    let has_t = base.t_var().is_some();
    let mut c_q: BTreeMap<Monomial, Jet> = BTreeMap::new();
    for g in ideal.gens() {
        let needed = 2 * e + 1;
        let found = g.total_degree();
        if found < needed {
            return Err(LiftError::ContractionViolated {
                generator: g.clone(),
                cause: ContractionCause::OrderTooLow { found, needed },
            });
        }
        let g_jet = monomial_jet(g, &base, working + 2 * e);
        match g_jet.divide_exact(&h2, working) {
            Ok(q) => {
                c_q.insert(g.clone(), q);
            }
            Err(JetError::NotDivisible { degree }) => {
                return Err(if has_t {
                    LiftError::HDegeneratesAlongT {
                        generator: g.clone(),
                        degree,
                    }
                } else {
                    LiftError::ContractionViolated {
                        generator: g.clone(),
                        cause: ContractionCause::NotDivisible { degree },
                    }
                });
            }
            Err(other) => return Err(LiftError::Jet(other)),
        }
    }

    // --- residual and its ideal membership -------------------------------------
    let f0 = sys.evaluate(y_start)?;
    let mut residual_membership = Vec::with_capacity(s);
    for (i, r) in f0.iter().enumerate() {
        match ideal.contains_jet(r) {
            Ok(m) => residual_membership.push(m),
            Err(MembershipFailure::NotContained { witness }) => {
                return Err(LiftError::ResidualNotInIdeal {
                    equation: i,
                    witness,
                });
            }
            Err(MembershipFailure::ContextMismatch) => {
                return Err(LiftError::Ideal(IdealError::ContextMismatch));
            }
        }
    }

    // --- c with F₀ = h̃²·c + O(beyond budget), via the certificate route -------
    let mut c: Vec<Jet> = Vec::with_capacity(s);
    for membership in &residual_membership {
        let mut acc = Jet::zero(&base, working);
        for (g, cof) in &membership.cofactors {
            let cq = c_q.get(g).expect("every generator was divided");
            let term = cof
                .with_order_at_least(working)
                .truncate_to(working)
                .mul(cq)?;
            acc = acc.add(&term)?;
        }
        c.push(acc);
    }

    // ρ: minimal valuation gain of the correction; ≥ 1 by the contraction
    // check.  Caps how deep the Taylor expansion must reach.
    let rho = ideal
        .gens()
        .map(|g| g.total_degree() - 2 * e)
        .min()
        .unwrap_or(u32::MAX);
    let k_max = if rho == u32::MAX {
        0 // zero ideal: residual is exactly zero, no correction needed
    } else {
        // A |k|-term has valuation ≥ (|k|−2)e + |k|ρ; beyond the working
        // order it cannot contribute.
        let mut k = 2u32;
        while (k + 1).saturating_sub(2) * e + (k + 1) * rho <= working && k < working + 2 {
            k += 1;
        }
        k
    };

    // --- Taylor data and the coefficient polynomials of Q ---------------------
    // Q_i(z) = Σ_{2 ≤ |k| ≤ k_max} h̃^{|k|−2}·T_{i,k}·(Bz)^k
    let mut q_coeffs: Vec<Vec<(Vec<u32>, Jet)>> = Vec::with_capacity(s);
    let mut h_powers: Vec<Jet> = alloc::vec![Jet::constant(&base, Rational::one(), working)];
    for _ in 1..=k_max.saturating_sub(2) {
        let last = h_powers.last().expect("nonempty");
        h_powers.push(last.mul(&h.with_order_at_least(working).truncate_to(working))?);
    }
    for eq in sys.equations() {
        let taylor = y_taylor(eq, y_start, 2, k_max)?;
        let mut coeffs = Vec::new();
        for (k, t_k) in taylor {
            let deg: u32 = k.iter().sum();
            let hp = &h_powers[(deg - 2) as usize];
            let coeff = t_k
                .with_order_at_least(working)
                .truncate_to(working)
                .mul(hp)?;
            if !coeff.is_zero() {
                coeffs.push((k, coeff));
            }
        }
        q_coeffs.push(coeffs);
    }

    // --- Picard iteration at the working order ---------------------------------
    let b_work = cokernel.map(|entry| entry.with_order_at_least(working).truncate_to(working));
    let mut z: Vec<Jet> = c.iter().map(Jet::neg).collect();
    let mut z_trace = alloc::vec![z.clone()];
    let max_iter = order as usize + 2;
    let mut iterations = 0usize;
    let mut stabilized = c.iter().all(|ci| ci.is_zero());
    while !stabilized {
        if iterations == max_iter {
            return Err(LiftError::NoConvergence { iterations });
        }
        // v = B·z (length n), then powers of each component as needed.
        let mut v: Vec<Jet> = Vec::with_capacity(n);
        for j in 0..n {
            let mut acc = Jet::zero(&base, working);
            for (l, zl) in z.iter().enumerate() {
                acc = acc.add(&b_work.get(j, l).mul(zl)?)?;
            }
            v.push(acc);
        }
        let mut v_powers: Vec<Vec<Jet>> = v
            .iter()
            .map(|_| alloc::vec![Jet::constant(&base, Rational::one(), working)])
            .collect();
        let mut znext = Vec::with_capacity(s);
        for (i, ci) in c.iter().enumerate() {
            let mut acc = ci.neg();
            for (k, coeff) in &q_coeffs[i] {
                let mut term = coeff.clone();
                for (j, &kj) in k.iter().enumerate() {
                    if kj == 0 {
                        continue;
                    }
                    while v_powers[j].len() <= kj as usize {
                        let next = v_powers[j].last().expect("nonempty").mul(&v[j])?;
                        v_powers[j].push(next);
                    }
                    term = term.mul(&v_powers[j][kj as usize])?;
                }
                acc = acc.sub(&term)?;
            }
            znext.push(acc);
        }
        iterations += 1;
        stabilized = znext == z;
        z = znext;
        z_trace.push(z.clone());
    }

    // --- assemble the correction as exact polynomials ---------------------------
    // The stored coefficients of z* are a concrete polynomial choice; from
    // here on everything is exact arithmetic on that choice.
    let z_poly: Vec<Jet> = z.iter().map(as_polynomial).collect();
    let mut delta_y = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = Jet::zero(&base, 0);
        for (l, zl) in z_poly.iter().enumerate() {
            let prod = poly_mul(&poly_mul(&h, cokernel.get(j, l)), zl);
            acc = poly_add(&acc, &prod);
        }
        delta_y.push(acc);
    }
    let y_solution: Vec<Jet> = y_start
        .iter()
        .zip(&delta_y)
        .map(|(y0, dy)| poly_add(y0, dy).with_order_at_least(order))
        .collect();

    // --- certificates ---------------------------------------------------------------
    // Residuals of the exact solution polynomial must vanish through N.
    let final_residuals = sys.evaluate(&y_solution)?;
    let mut residual_valuations = Vec::with_capacity(s);
    for r in &final_residuals {
        if !r.truncate_to(order).is_zero() {
            return Err(LiftError::Internal(
                "residual of the lifted solution fails to vanish through the target order",
            ));
        }
        residual_valuations.push(r.ord());
    }

    // h̃²·Δy_i ∈ 𝔞 through N, with cofactors.
    let mut correction_membership = Vec::with_capacity(n);
    for dy in &delta_y {
        let lhs = poly_mul(&h2_exact(&h), dy).truncate_to(order);
        match ideal.contains_jet(&lhs) {
            Ok(m) => correction_membership.push(m),
            Err(_) => {
                return Err(LiftError::Internal(
                    "h^2·delta_y escapes the residual ideal",
                ));
            }
        }
    }

    // Derived correction ideal 𝔞′ with Δy ∈ 𝔞′ through N: exact quotient
    // by h̃² when h̃ is a single term, valuation bound otherwise.
    let correction_ideal = derived_correction_ideal(ideal, &h, e)?;
    let mut correction_ideal_membership = Vec::with_capacity(n);
    for dy in &delta_y {
        match correction_ideal.contains_jet(&dy.truncate_to(order)) {
            Ok(m) => correction_ideal_membership.push(m),
            Err(_) => {
                return Err(LiftError::Internal(
                    "delta_y escapes the derived correction ideal",
                ));
            }
        }
    }

    Ok(LiftSolution {
        order,
        y_solution,
        delta_y,
        h_valuation: e,
        h,
        cokernel,
        certificate_source: source,
        residual_valuations,
        residual_membership,
        correction_membership,
        correction_ideal,
        correction_ideal_membership,
        iterations,
        z_trace,
    })
}

/// `𝔞′` such that `Δy ∈ 𝔞′` is guaranteed: when `h̃` is a single term
/// `c·μ`, the exact quotient `(q/μ² : q)` — the division certificates
/// ensure `μ²` divides every generator — and otherwise the valuation
/// bound `m^ρ` with `ρ = min_q deg(q) − 2·ord(h̃)`.
fn derived_correction_ideal(
    ideal: &MonomialIdeal,
    h: &Jet,
    e: u32,
) -> Result<MonomialIdeal, LiftError> {
    if ideal.is_zero_ideal() {
        return Ok(MonomialIdeal::zero(ideal.ctx()));
    }
    let base_ctx = ideal.ctx();
    if h.num_terms() == 1 {
        let (mu, _) = h.terms().next().expect("single term");
        let mu_x = Monomial(mu.0[..base_ctx.num_x()].to_vec());
        let mu2 = mu_x.mul(&mu_x);
        let mut gens = Vec::new();
        for g in ideal.gens() {
            if !mu2.divides(g) {
                return Err(LiftError::Internal(
                    "h^2 divided every generator yet its monomial does not",
                ));
            }
            gens.push(g.quotient(&mu2));
        }
        Ok(MonomialIdeal::new(base_ctx, gens)?)
    } else {
        let rho = ideal
            .gens()
            .map(|g| g.total_degree() - 2 * e)
            .min()
            .expect("nonzero ideal");
        Ok(MonomialIdeal::maximal(base_ctx).pow(rho))
    }
}

/// Reinterprets a jet's stored coefficients as the exact polynomial they
/// spell (a deliberate choice of representative, not a claim about the
/// underlying series).
fn as_polynomial(z: &Jet) -> Jet {
    let ti = z.ctx().t_index();
    let deg = z
        .terms()
        .map(|(m, _)| m.weighted_degree(ti))
        .max()
        .unwrap_or(0);
    Jet::from_terms(
        z.ctx(),
        deg,
        true,
        z.terms().map(|(m, c)| (m.clone(), c.clone())),
    )
}

fn poly_mul(a: &Jet, b: &Jet) -> Jet {
    let o = a.order().saturating_add(b.order());
    a.with_order_at_least(o)
        .mul(&b.with_order_at_least(o))
        .expect("same context")
}

fn poly_add(a: &Jet, b: &Jet) -> Jet {
    let o = a.order().max(b.order());
    a.with_order_at_least(o)
        .add(&b.with_order_at_least(o))
        .expect("same context")
}

fn h2_exact(h: &Jet) -> Jet {
    poly_mul(h, h)
}

fn monomial_jet(g: &Monomial, ctx: &VarContext, order: u32) -> Jet {
    let n = ctx.num_vars();
    let mut exps = alloc::vec![0u32; n];
    exps[..g.0.len()].copy_from_slice(&g.0);
    let m = Monomial(exps);
    let deg = m.weighted_degree(ctx.t_index());
    Jet::from_terms(ctx, order.max(deg), true, [(m, Rational::one())])
}

// ----- general-filtration lifting ---------------------------------------------------

/// A certified general-filtration lift: the engine's solution for the
/// level-shifted system plus the constructive decomposition of the
/// correction over the level ideal's generators.
#[derive(Debug, Clone)]
pub struct GeneralLiftSolution {
    /// The final solution over the original base context.
    pub y_solution: Vec<Jet>,
    /// The prefix it refines.
    pub prefix: Vec<Jet>,
    /// The filtration level used for the correction: `level = N+1` where
    /// `N` is the requested refinement depth.
    pub level: u32,
    /// Minimal generators of the filtration ideal at `level`.
    pub level_generators: Vec<Monomial>,
    /// Per component: `y_j − prefix_j = Σ_α q_α·w_{j,α}` as a membership
    /// certificate over the level generators.
    pub combination: Vec<IdealMembership>,
    /// The engine's certified solution of the level-shifted system (over
    /// the shifted unknowns).
    pub shifted: LiftSolution,
}

/// Refines an exact polynomial `prefix` that solves `F ≡ 0 mod A_{N+1}`
/// into a solution through `order`, with the correction constrained to the
/// filtration ideal `A_{N+1}`.
///
/// The engine runs on the level-shifted system
/// `G(w) = F(prefix + Σ_α q_α·w_α)` (one fresh unknown per original
/// unknown and level generator, start point `0`) with the certificate
/// `h̃_G = q_{α*}·h̃_F`, `B_G` the block of `B_F` at the graded-lex-first
/// generator `α*` — which satisfies `J_G(0)·B_G = h̃_G·Id` exactly — and
/// the residual ideal generated by the support of `F(prefix)`.
pub fn lift_general_filtration(
    sys: &PolySystem,
    filtration: &Filtration,
    n_level: u32,
    prefix: &[Jet],
    order: u32,
) -> Result<GeneralLiftSolution, LiftError> {
    check_start(sys, prefix, order)?;
    if filtration.ctx().x_vars() != sys.ctx().x_vars() {
        return Err(LiftError::Ideal(IdealError::ContextMismatch));
    }
    let level = n_level + 1;
    let level_ideal = {
        // Materializing through the level also validates descent.
        let levels = filtration.materialize(level)?;
        levels.into_iter().last().expect("level present")
    };
    let q_set: Vec<Monomial> = level_ideal.gens().cloned().collect();
    let base = sys.ctx().without_y();
    let s = sys.num_equations();
    let n = sys.num_unknowns();

    // Prefix must solve modulo the level ideal.
    let f_prefix = sys.evaluate(prefix)?;
    for (i, r) in f_prefix.iter().enumerate() {
        if let Err(MembershipFailure::NotContained { witness }) = level_ideal.contains_jet(r) {
            return Err(LiftError::PrefixNotApproximate {
                equation: i,
                witness,
            });
        }
    }

    if q_set.is_empty() {
        // Zero level ideal: the prefix must already solve exactly, and the
        // correction is empty.
        let mut vals = Vec::new();
        for r in &f_prefix {
            if !r.is_zero() {
                return Err(LiftError::Internal(
                    "zero level ideal with a nonzero residual slipped past membership",
                ));
            }
            vals.push(r.ord());
        }
        let shifted = LiftSolution {
            order,
            y_solution: prefix.to_vec(),
            delta_y: alloc::vec![Jet::zero(&base, order); n],
            h: Jet::zero(&base, 0),
            cokernel: JetMatrix::new(0, 0, Vec::new()),
            h_valuation: 0,
            certificate_source: CertificateSource::LevelShifted,
            residual_valuations: vals,
            residual_membership: Vec::new(),
            correction_membership: Vec::new(),
            correction_ideal: MonomialIdeal::zero(&base),
            correction_ideal_membership: Vec::new(),
            iterations: 0,
            z_trace: Vec::new(),
        };
        return Ok(GeneralLiftSolution {
            y_solution: prefix.to_vec(),
            prefix: prefix.to_vec(),
            level,
            level_generators: q_set,
            combination: alloc::vec![
                IdealMembership { order, cofactors: Vec::new() };
                n
            ],
            shifted,
        });
    }

    // --- level-shifted system G over fresh unknowns w_{j,α} -----------------
    let r = q_set.len();
    let mut w_names: Vec<alloc::string::String> = Vec::with_capacity(n * r);
    for j in 0..n {
        for a in 0..r {
            let mut name = alloc::format!("w{}_{}", j + 1, a + 1);
            while sys.ctx().index_of(&name).is_some() {
                name.push('_');
            }
            w_names.push(name);
        }
    }
    // Substitution context: original x-block plus the w's as x-like slots,
    // keeping the t-slot; the y-block is the original unknowns.
    let x_and_w: Vec<alloc::string::String> = base
        .x_vars()
        .iter()
        .cloned()
        .chain(w_names.iter().cloned())
        .collect();
    let ctx_mid = VarContext::new(
        x_and_w.clone(),
        sys.ctx().y_vars().iter().cloned(),
        sys.ctx().t_var(),
    )
    .map_err(|_| LiftError::System(SystemError::ContextMismatch))?;
    let sub_base = ctx_mid.without_y();
    // Final context for G: x-block, w's as unknowns.
    let ctx_g = VarContext::new(
        base.x_vars().iter().cloned(),
        w_names.clone(),
        sys.ctx().t_var(),
    )
    .map_err(|_| LiftError::System(SystemError::ContextMismatch))?;

    let mut assignments = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = prefix[j].extend_to(&sub_base)?;
        for (a, q) in q_set.iter().enumerate() {
            let w_slot = sub_base
                .index_of(&w_names[j * r + a])
                .expect("w variable present");
            let mut exps = alloc::vec![0u32; sub_base.num_vars()];
            exps[..q.0.len()].copy_from_slice(&q.0);
            exps[w_slot] = 1;
            let m = Monomial(exps);
            let term = Jet::from_terms(
                &sub_base,
                m.weighted_degree(sub_base.t_index()),
                true,
                [(m, Rational::one())],
            );
            acc = poly_add(&acc, &term);
        }
        assignments.push(acc);
    }
    let mut g_equations = Vec::with_capacity(s);
    for eq in sys.equations() {
        let g = eq.extend_to(&ctx_mid)?.substitute(&assignments)?;
        g_equations.push(g.extend_to(&ctx_g)?);
    }
    let g_sys = PolySystem::new(&ctx_g, g_equations, None)?;

    // --- certificate for G at the start point 0 -------------------------------
    let data = sys.jacobian_data()?;
    let h_f = substitute_poly(&data.h, prefix)?;
    if h_f.is_zero() {
        return Err(LiftError::HZero);
    }
    let b_f = substitute_matrix(&data.cokernel, prefix)?;
    let alpha_star = 0usize; // q_set is already in graded-lex order
    let q_star = &q_set[alpha_star];
    let g_base = ctx_g.without_y();
    let h_g = poly_mul(
        &monomial_jet(q_star, &g_base, 0),
        &h_f.extend_to(&g_base)?,
    );
    let b_g = JetMatrix::from_fn(n * r, s, |row, col| {
        let (j, a) = (row / r, row % r);
        if a == alpha_star {
            b_f.get(j, col)
                .extend_to(&g_base)
                .expect("compatible contexts")
        } else {
            Jet::zero(&g_base, 0)
        }
    });

    // Residual ideal for G: the support ideal of G(0) = F(prefix).
    let zero_w: Vec<Jet> = (0..n * r).map(|_| Jet::zero(&g_base, order)).collect();
    let g0 = g_sys.evaluate(&zero_w)?;
    let nx = g_base.num_x();
    let mut support = Vec::new();
    for gres in &g0 {
        for (m, _) in gres.terms() {
            support.push(Monomial(m.0[..nx].to_vec()));
        }
    }
    let residual_ideal = MonomialIdeal::new(&g_base, support)?;

    let shifted = ann_coker_step(&g_sys, &zero_w, &residual_ideal, order, &h_g, &b_g).map_err(
        |err| match err {
            // Certificate construction above is internal; a failure there
            // is a bug, not a user refusal.
            LiftError::CertificateInvalid { .. } => {
                LiftError::Internal("level-shifted certificate failed its own identity")
            }
            other => other,
        },
    )?;
    // ann_coker_step reports `Supplied`; relabel for honest provenance.
    let mut shifted = shifted;
    shifted.certificate_source = CertificateSource::LevelShifted;

    // --- fold the shifted solution back ---------------------------------------
    let mut y_solution = Vec::with_capacity(n);
    let mut combination = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = prefix[j].clone();
        let mut cofactors = Vec::new();
        for (a, q) in q_set.iter().enumerate() {
            let w_star = &shifted.y_solution[j * r + a];
            // Map w* back to the base context (drop unused w-slots).
            let w_back = restrict_to(w_star, &base)?;
            if !w_back.is_zero() {
                cofactors.push((q.clone(), w_back.clone()));
            }
            acc = poly_add(&acc, &poly_mul(&monomial_jet(q, &base, 0), &w_back));
        }
        y_solution.push(acc.with_order_at_least(order));
        combination.push(IdealMembership {
            order,
            cofactors,
        });
    }

    // The folded solution must satisfy the original system through the
    // target order — same polynomial identity, re-checked directly.
    for r_i in sys.evaluate(&y_solution)? {
        if !r_i.truncate_to(order).is_zero() {
            return Err(LiftError::Internal(
                "folded general lift fails the original system",
            ));
        }
    }

    Ok(GeneralLiftSolution {
        y_solution,
        prefix: prefix.to_vec(),
        level,
        level_generators: q_set,
        combination,
        shifted,
    })
}

/// Re-homes a jet into a smaller context; every monomial must use only
/// variables present there.
fn restrict_to(j: &Jet, ctx: &VarContext) -> Result<Jet, LiftError> {
    let src = j.ctx();
    let map: Vec<Option<usize>> = (0..src.num_vars())
        .map(|i| ctx.index_of(src.name_of(i)))
        .collect();
    let n = ctx.num_vars();
    let mut terms = Vec::new();
    for (m, c) in j.terms() {
        let mut exps = alloc::vec![0u32; n];
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            match map[i] {
                Some(slot) => exps[slot] = e,
                None => {
                    return Err(LiftError::System(SystemError::ContextMismatch));
                }
            }
        }
        terms.push((Monomial(exps), c.clone()));
    }
    Ok(Jet::from_terms(ctx, j.order(), j.is_exact(), terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_polynomial;

    fn p(ctx: &VarContext, src: &str) -> Jet {
        parse_polynomial(src, ctx).unwrap()
    }

    fn sqrt_system() -> (VarContext, PolySystem) {
        let ctx = VarContext::new(["x"], ["y"], None).unwrap();
        let f = p(&ctx, "y^2 - 1 - x");
        (ctx.clone(), PolySystem::new(&ctx, alloc::vec![f], None).unwrap())
    }

    #[test]
    fn square_root_lift_matches_binomial_series() {
        let (ctx, sys) = sqrt_system();
        let base = ctx.without_y();
        let ideal = MonomialIdeal::parse("x", &ctx).unwrap();
        let start = alloc::vec![p(&base, "1")];
        let sol = tougeron_step(&sys, &start, &ideal, 8).unwrap();
        // √(1+x) = 1 + x/2 − x²/8 + x³/16 − 5x⁴/128 + 7x⁵/256 − 21x⁶/1024 + 33x⁷/2048 − 429x⁸/32768
        let want = p(
            &base,
            "1 + 1/2*x - 1/8*x^2 + 1/16*x^3 - 5/128*x^4 + 7/256*x^5 - 21/1024*x^6 + 33/2048*x^7 - 429/32768*x^8",
        );
        assert_eq!(sol.y_solution.len(), 1);
        assert_eq!(sol.y_solution[0].truncate_to(8), want.truncate_to(8));
        assert!(sol
            .residual_valuations
            .iter()
            .all(|v| *v > Valuation::Finite(8)));
        assert_eq!(sol.h_valuation, 0);
        assert_eq!(sol.h.to_expr_string(), "4");
    }

    #[test]
    fn cusp_lift_reproduces_frozen_trace() {
        // F = x²y + y² − x^10, start 0, ideal (x^10), target order 24.
        let ctx = VarContext::new(["x"], ["y"], None).unwrap();
        let base = ctx.without_y();
        let f = p(&ctx, "x^2*y + y^2 - x^10");
        let sys = PolySystem::new(&ctx, alloc::vec![f], None).unwrap();
        let ideal = MonomialIdeal::parse("x^10", &ctx).unwrap();
        let start = alloc::vec![Jet::zero(&base, 0)];
        let sol = tougeron_step(&sys, &start, &ideal, 24).unwrap();

        assert_eq!(sol.h.to_expr_string(), "x^4");
        assert_eq!(sol.h_valuation, 4);
        // z-trace: z⁰ = x², stabilizing at x² − x⁸ + 2x¹⁴ − 5x²⁰ after 4 updates.
        assert_eq!(sol.z_trace[0][0].to_expr_string(), "x^2");
        assert_eq!(sol.iterations, 4);
        let z_star = &sol.z_trace.last().unwrap()[0];
        assert_eq!(z_star.to_expr_string(), "x^2 - x^8 + 2*x^14 - 5*x^20");
        // Δy = x⁸ − x¹⁴ + 2x²⁰ through order 24.
        assert_eq!(
            sol.delta_y[0].truncate_to(24).to_expr_string(),
            "x^8 - x^14 + 2*x^20"
        );
        // Residual exactly zero through 24 and h²Δy ∈ (x^10).
        assert!(sol.residual_valuations[0] > Valuation::Finite(24));
        assert_eq!(sol.correction_membership.len(), 1);
        // 𝔞′ = (x²) since h = x⁴ is a single term.
        assert_eq!(
            sol.correction_ideal,
            MonomialIdeal::parse("x^2", &ctx).unwrap()
        );
    }

    #[test]
    fn contraction_violation_names_generator() {
        // F = x²y − x⁵: h = x⁴, ideal (x⁵) has ord 5 < 2·4+1 = 9.
        let ctx = VarContext::new(["x"], ["y"], None).unwrap();
        let base = ctx.without_y();
        let f = p(&ctx, "x^2*y - x^5");
        let sys = PolySystem::new(&ctx, alloc::vec![f], None).unwrap();
        let ideal = MonomialIdeal::parse("x^5", &ctx).unwrap();
        let start = alloc::vec![Jet::zero(&base, 0)];
        let err = tougeron_step(&sys, &start, &ideal, 12).unwrap_err();
        assert_eq!(
            err,
            LiftError::ContractionViolated {
                generator: Monomial(alloc::vec![5]),
                cause: ContractionCause::OrderTooLow { found: 5, needed: 9 }
            }
        );
    }

    #[test]
    fn residual_outside_ideal_is_refused() {
        let ctx = VarContext::new(["x"], ["y"], None).unwrap();
        let base = ctx.without_y();
        let f = p(&ctx, "y - x^3");
        let sys = PolySystem::new(&ctx, alloc::vec![f], None).unwrap();
        let ideal = MonomialIdeal::parse("x^5", &ctx).unwrap();
        let start = alloc::vec![Jet::zero(&base, 0)];
        let err = tougeron_step(&sys, &start, &ideal, 10).unwrap_err();
        assert_eq!(
            err,
            LiftError::ResidualNotInIdeal {
                equation: 0,
                witness: Monomial(alloc::vec![3])
            }
        );
    }

    #[test]
    fn vanishing_gram_determinant_is_refused() {
        let ctx = VarContext::new(["x"], ["y"], None).unwrap();
        let base = ctx.without_y();
        let f = p(&ctx, "y^2 - x^2");
        let sys = PolySystem::new(&ctx, alloc::vec![f], None).unwrap();
        let ideal = MonomialIdeal::parse("x^2", &ctx).unwrap();
        let start = alloc::vec![Jet::zero(&base, 0)];
        assert_eq!(
            tougeron_step(&sys, &start, &ideal, 6).unwrap_err(),
            LiftError::HZero
        );
    }

    #[test]
    fn two_unknown_triangular_system_lifts_exactly() {
        // y2 = x², y1 = x + y2² = x + x⁴; h = det(J·Jᵀ) is a unit.
        let ctx = VarContext::new(["x"], ["y1", "y2"], None).unwrap();
        let base = ctx.without_y();
        let f1 = p(&ctx, "y1 - x - y2^2");
        let f2 = p(&ctx, "y2 - x^2");
        let sys = PolySystem::new(&ctx, alloc::vec![f1, f2], None).unwrap();
        let ideal = MonomialIdeal::parse("x", &ctx).unwrap();
        let start = alloc::vec![Jet::zero(&base, 0), Jet::zero(&base, 0)];
        let sol = tougeron_step(&sys, &start, &ideal, 8).unwrap();
        assert_eq!(sol.y_solution[0].truncate_to(8), p(&base, "x + x^4").with_order_at_least(8).truncate_to(8));
        assert_eq!(sol.y_solution[1].truncate_to(8), p(&base, "x^2").with_order_at_least(8).truncate_to(8));
        // Both residuals vanish identically: the solution is polynomial.
        assert!(sol.residual_valuations.iter().all(Valuation::is_infinite));
    }

    #[test]
    fn supplied_certificate_verified_and_refused() {
        let (ctx, sys) = sqrt_system();
        let base = ctx.without_y();
        let ideal = MonomialIdeal::parse("x", &ctx).unwrap();
        let start = alloc::vec![p(&base, "1")];
        // Correct certificate: J(1) = 2, so B = [1/2·…]: J·B = h with h = 2·b.
        let h = p(&base, "4");
        let b = JetMatrix::new(1, 1, alloc::vec![p(&base, "2")]);
        let sol = ann_coker_step(&sys, &start, &ideal, 6, &h, &b).unwrap();
        assert_eq!(sol.certificate_source, CertificateSource::Supplied);
        assert_eq!(
            sol.y_solution[0].truncate_to(3).to_expr_string(),
            "1 + 1/2*x - 1/8*x^2 + 1/16*x^3"
        );
        // Wrong h: J·B = 4 ≠ 5.
        let bad = p(&base, "5");
        assert_eq!(
            ann_coker_step(&sys, &start, &ideal, 6, &bad, &b).unwrap_err(),
            LiftError::CertificateInvalid { row: 0, col: 0 }
        );
    }

    #[test]
    fn quotiented_systems_are_rejected_by_the_engine() {
        let ctx = VarContext::new(["x"], ["y"], None).unwrap();
        let f = p(&ctx, "y^2 - 1 - x");
        let q = MonomialIdeal::parse("x^3", &ctx).unwrap();
        let sys = PolySystem::new(&ctx, alloc::vec![f], Some(q)).unwrap();
        let base = ctx.without_y();
        let ideal = MonomialIdeal::parse("x", &ctx).unwrap();
        let start = alloc::vec![p(&base, "1")];
        assert_eq!(
            tougeron_step(&sys, &start, &ideal, 4).unwrap_err(),
            LiftError::QuotientedSystem
        );
    }

    #[test]
    fn taylor_data_matches_hand_expansion() {
        // F = y1²·y2 around (y1, y2) = (x, 1):
        // T_{(1,0)} = 2xy₂|… = 2x, T_{(0,1)} = x², T_{(2,0)} = 1,
        // T_{(1,1)} = 2x, T_{(2,1)} = 1, everything else zero.
        let ctx = VarContext::new(["x"], ["y1", "y2"], None).unwrap();
        let base = ctx.without_y();
        let f = p(&ctx, "y1^2*y2");
        let at = alloc::vec![p(&base, "x"), p(&base, "1")];
        let t = y_taylor(&f, &at, 1, 5).unwrap();
        let get = |k: &[u32]| t.get(&k.to_vec()).map(|j| j.to_expr_string());
        assert_eq!(get(&[1, 0]).unwrap(), "2*x");
        assert_eq!(get(&[0, 1]).unwrap(), "x^2");
        assert_eq!(get(&[2, 0]).unwrap(), "1");
        assert_eq!(get(&[1, 1]).unwrap(), "2*x");
        assert_eq!(get(&[2, 1]).unwrap(), "1");
        assert_eq!(t.len(), 5);
    }

    #[test]
    fn general_filtration_lift_small_instance() {
        // F = y² − (1 + u), u = x1·x2⁴·x3⁴·(1 + x1 + x2) ∈ A_2 = (x1,x2)²·m²
        // …wait: u's support must lie in A_{N+1}; with N = 1,
        // A_2 = (x1,x2)²·m², and x1x2⁴x3⁴ = (x2²)·(x1x2²x3⁴) ∈ A_2. ✓
        let ctx = VarContext::new(["x1", "x2", "x3"], ["y"], None).unwrap();
        let base = ctx.without_y();
        let f = p(&ctx, "y^2 - 1 - x1*x2^4*x3^4*(1 + x1 + x2)");
        let sys = PolySystem::new(&ctx, alloc::vec![f], None).unwrap();
        let filtration =
            Filtration::parse("scaled([x1^2, x1*x2, x2^2], [x1, x2, x3], j)", &ctx).unwrap();
        let prefix = alloc::vec![p(&base, "1")];
        let sol = lift_general_filtration(&sys, &filtration, 1, &prefix, 11).unwrap();
        assert_eq!(sol.level, 2);
        // Residual of the folded solution vanishes through the target.
        let res = sys.evaluate(&sol.y_solution).unwrap();
        assert!(res[0].truncate_to(11).is_zero());
        // The correction decomposes over the level generators.
        let back = sol.combination[0].recombine(&base).unwrap();
        let dy = sol.y_solution[0]
            .sub(&prefix[0].with_order_at_least(sol.y_solution[0].order()))
            .unwrap();
        assert_eq!(back.truncate_to(11), dy.truncate_to(11));
    }

    #[test]
    fn general_lift_rejects_bad_prefix() {
        let ctx = VarContext::new(["x1", "x2", "x3"], ["y"], None).unwrap();
        let base = ctx.without_y();
        // Residual −x1 is not in A_2.
        let f = p(&ctx, "y^2 - 1 - x1");
        let sys = PolySystem::new(&ctx, alloc::vec![f], None).unwrap();
        let filtration =
            Filtration::parse("scaled([x1^2, x1*x2, x2^2], [x1, x2, x3], j)", &ctx).unwrap();
        let prefix = alloc::vec![p(&base, "1")];
        let err = lift_general_filtration(&sys, &filtration, 1, &prefix, 8).unwrap_err();
        assert_eq!(
            err,
            LiftError::PrefixNotApproximate {
                equation: 0,
                witness: Monomial(alloc::vec![1, 0, 0])
            }
        );
    }

    #[test]
    fn order_budget_is_enforced() {
        let (ctx, sys) = sqrt_system();
        let base = ctx.without_y();
        let ideal = MonomialIdeal::parse("x", &ctx).unwrap();
        let start = alloc::vec![p(&base, "1")];
        assert_eq!(
            tougeron_step(&sys, &start, &ideal, MAX_TARGET_ORDER + 1).unwrap_err(),
            LiftError::OrderBudgetExceeded {
                requested: MAX_TARGET_ORDER + 1,
                limit: MAX_TARGET_ORDER
            }
        );
    }
}
