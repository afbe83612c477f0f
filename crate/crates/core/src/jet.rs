//! Truncated multivariate power series over the rationals.
//!
//! A [`Jet`] stores the coefficients of a power series up to a truncation
//! degree `order`, as a `BTreeMap` from exponent vectors to nonzero
//! `BigRational` coefficients.  The map order is graded lexicographic
//! (degree first, then the exponent vector with earlier variables more
//! significant), which makes iteration — and therefore serialization —
//! deterministic.
//!
//! Two bookkeeping fields ride along with the coefficients:
//!
//! * `order` is the degree through which the stored coefficients are
//!   meaningful.  Arithmetic propagates it conservatively (`min` of the
//!   operand orders for ring operations) and truncates away anything beyond
//!   it.  The degree of a monomial counts `x` and `y` exponents only; the
//!   deformation parameter `t` has weight zero and is never truncated.
//! * `exact` records that no truncation has happened anywhere in the jet's
//!   history, i.e. the jet is a genuine polynomial, not the shadow of a
//!   longer series.  Any operation that drops a nonzero term clears it.
//!
//! The zero jet's valuation is a distinguished infinite value
//! ([`Valuation::Infinite`]), never a sentinel integer.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::context::VarContext;

/// Exact coefficient type: arbitrary-precision rational, kept reduced with
/// a positive denominator by the representation itself.
pub type Rational = BigRational;

/// Order of vanishing of a jet.  The zero jet has infinite valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// The finite value, or `None` for the zero jet.
    pub fn finite(&self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(*v),
            Valuation::Infinite => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{}", v),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Exponent vector over a fixed [`VarContext`].
///
/// The length always equals the context's variable count.  The `Ord`
/// implementation is graded lex — total degree over all slots first, then
/// lexicographic comparison — and is what coefficient maps sort by.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn constant(num_vars: usize) -> Self {
        Monomial(alloc::vec![0; num_vars])
    }

    pub fn var(num_vars: usize, idx: usize) -> Self {
        let mut e = alloc::vec![0u32; num_vars];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Sum of all exponents, every slot included.
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Renders the monomial with the context's variable names (`1` for
    /// the constant monomial); round-trips through the expression parser.
    pub fn to_expr_string(&self, ctx: &VarContext) -> String {
        use core::fmt::Write;
        let mut factors: Vec<String> = Vec::new();
        for (idx, e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(String::from(ctx.name_of(idx))),
                _ => {
                    let mut s = String::from(ctx.name_of(idx));
                    let _ = write!(s, "^{}", e);
                    factors.push(s);
                }
            }
        }
        if factors.is_empty() {
            String::from("1")
        } else {
            factors.join("*")
        }
    }

    /// Degree that counts toward truncation: all slots except a weight-zero
    /// `t` slot at position `t_index`.
    pub fn weighted_degree(&self, t_index: Option<usize>) -> u32 {
        match t_index {
            None => self.total_degree(),
            Some(ti) => self.total_degree() - self.0[ti],
        }
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise divisibility.
    pub fn divides(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.0.len(), other.0.len());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Exact quotient; the caller must have checked divisibility.
    pub fn quotient(&self, divisor: &Monomial) -> Monomial {
        debug_assert!(divisor.divides(self));
        Monomial(self.0.iter().zip(&divisor.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Errors from jet arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JetError {
    /// Operands live over different variable contexts.
    ContextMismatch,
    /// Composition with a truncated outer jet and an assignment that does
    /// not vanish at the origin: the result would depend on coefficients
    /// beyond the stored order.
    IllFormedComposition,
    /// `divide_exact`: the graded linear system at this degree of the
    /// dividend is inconsistent — no power-series quotient exists.
    NotDivisible { degree: u32 },
    /// `divide_exact`: an operand's stored order cannot support the
    /// requested quotient order.
    InsufficientOrder { needed: u32, available: u32 },
    /// Division by the zero jet.
    DivisionByZero,
}

impl fmt::Display for JetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JetError::ContextMismatch => write!(f, "variable contexts do not match"),
            JetError::IllFormedComposition => write!(
                f,
                "composition needs an exact outer polynomial or assignments vanishing at the origin"
            ),
            JetError::NotDivisible { degree } => {
                write!(f, "not divisible: inconsistency at degree {}", degree)
            }
            JetError::InsufficientOrder { needed, available } => write!(
                f,
                "insufficient order: need coefficients through degree {} but only {} are stored",
                needed, available
            ),
            JetError::DivisionByZero => write!(f, "division by the zero jet"),
        }
    }
}

impl core::error::Error for JetError {}

/// Truncated power series over a [`VarContext`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Jet {
    ctx: VarContext,
    order: u32,
    exact: bool,
    terms: BTreeMap<Monomial, Rational>,
}

impl Jet {
    // ----- constructors -------------------------------------------------

    /// The zero jet at a given order.
    pub fn zero(ctx: &VarContext, order: u32) -> Jet {
        Jet {
            ctx: ctx.clone(),
            order,
            exact: true,
            terms: BTreeMap::new(),
        }
    }

    /// A constant jet.
    pub fn constant(ctx: &VarContext, value: Rational, order: u32) -> Jet {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(Monomial::constant(ctx.num_vars()), value);
        }
        Jet {
            ctx: ctx.clone(),
            order,
            exact: true,
            terms,
        }
    }

    /// The jet `1 * variable` (order at least 1, exact).
    pub fn variable(ctx: &VarContext, name: &str, order: u32) -> Option<Jet> {
        let idx = ctx.index_of(name)?;
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(ctx.num_vars(), idx), Rational::one());
        Some(Jet {
            ctx: ctx.clone(),
            order: order.max(1),
            exact: true,
            terms,
        })
    }

    /// Builds a jet from raw terms, merging duplicates and discarding zero
    /// coefficients.  Debug builds panic on a term beyond `order`.
    pub fn from_terms(
        ctx: &VarContext,
        order: u32,
        exact: bool,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Jet {
        let ti = ctx.t_index();
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        let mut exact = exact;
        for (m, c) in terms {
            debug_assert_eq!(m.0.len(), ctx.num_vars());
            if c.is_zero() {
                continue;
            }
            if m.weighted_degree(ti) > order {
                debug_assert!(false, "term beyond stated order");
                exact = false;
                continue;
            }
            *map.entry(m).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Jet {
            ctx: ctx.clone(),
            order,
            exact,
            terms: map,
        }
    }

    // ----- accessors -----------------------------------------------------

    pub fn ctx(&self) -> &VarContext {
        &self.ctx
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The coefficient of the all-zero monomial.
    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::constant(self.ctx.num_vars()))
    }

    /// Largest stored weighted degree (0 for the zero jet).
    pub fn degree(&self) -> u32 {
        let ti = self.ctx.t_index();
        self.terms
            .keys()
            .map(|m| m.weighted_degree(ti))
            .max()
            .unwrap_or(0)
    }

    /// Order of vanishing in the weighted grading.  Infinite exactly for
    /// the zero jet.
    pub fn ord(&self) -> Valuation {
        let ti = self.ctx.t_index();
        self.terms
            .keys()
            .map(|m| m.weighted_degree(ti))
            .min()
            .map(Valuation::Finite)
            .unwrap_or(Valuation::Infinite)
    }

    /// Stored order, treating exact jets as reliable at every order.
    pub fn effective_order(&self) -> Valuation {
        if self.exact {
            Valuation::Infinite
        } else {
            Valuation::Finite(self.order)
        }
    }

    // ----- order management -----------------------------------------------

    /// Drops all terms of weighted degree above `order` and lowers the
    /// order field.  A no-op when `order >= self.order()`.
    pub fn truncate_to(&self, order: u32) -> Jet {
        if order >= self.order {
            return self.clone();
        }
        let ti = self.ctx.t_index();
        let mut dropped = false;
        let terms: BTreeMap<_, _> = self
            .terms
            .iter()
            .filter(|(m, _)| {
                let keep = m.weighted_degree(ti) <= order;
                dropped |= !keep;
                keep
            })
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Jet {
            ctx: self.ctx.clone(),
            order,
            exact: self.exact && !dropped,
            terms,
        }
    }

    /// For exact jets: the same polynomial with the order field raised to at
    /// least `order`.  Non-exact jets are returned unchanged — raising their
    /// order would claim precision that was never computed.
    pub fn with_order_at_least(&self, order: u32) -> Jet {
        if !self.exact || self.order >= order {
            return self.clone();
        }
        let mut out = self.clone();
        out.order = order;
        out
    }

    /// Reinterprets the stored coefficients as reliable through `order`.
    /// This is an assertion supplied by the caller — used when external
    /// reasoning (a division postcondition, a report's recorded order)
    /// guarantees the interpretation — not something the jet can check.
    pub fn with_claimed_order(&self, order: u32) -> Jet {
        let mut out = self.truncate_to(order);
        out.order = order;
        out
    }

    fn check_ctx(&self, other: &Jet) -> Result<(), JetError> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(JetError::ContextMismatch)
        }
    }

    // ----- ring operations --------------------------------------------------

    /// Sum; the result order is the minimum of the operand orders.
    pub fn add(&self, other: &Jet) -> Result<Jet, JetError> {
        self.check_ctx(other)?;
        let order = self.order.min(other.order);
        let ti = self.ctx.t_index();
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        let mut dropped = false;
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            if m.weighted_degree(ti) > order {
                dropped = true;
                continue;
            }
            *terms.entry(m.clone()).or_insert_with(Rational::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Jet {
            ctx: self.ctx.clone(),
            order,
            exact: self.exact && other.exact && !dropped,
            terms,
        })
    }

    pub fn neg(&self) -> Jet {
        Jet {
            ctx: self.ctx.clone(),
            order: self.order,
            exact: self.exact,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Jet) -> Result<Jet, JetError> {
        self.add(&other.neg())
    }

    /// Product; the result order is the minimum of the operand orders, and
    /// any skipped cross term clears the exact flag.
    pub fn mul(&self, other: &Jet) -> Result<Jet, JetError> {
        self.check_ctx(other)?;
        let order = self.order.min(other.order);
        let ti = self.ctx.t_index();
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        let mut dropped = false;
        for (ma, ca) in &self.terms {
            let da = ma.weighted_degree(ti);
            if da > order {
                dropped = true;
                continue;
            }
            for (mb, cb) in &other.terms {
                if da + mb.weighted_degree(ti) > order {
                    dropped = true;
                    continue;
                }
                *terms.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Jet {
            ctx: self.ctx.clone(),
            order,
            exact: self.exact && other.exact && !dropped,
            terms,
        })
    }

    pub fn scale(&self, k: &Rational) -> Jet {
        if k.is_zero() {
            return Jet {
                ctx: self.ctx.clone(),
                order: self.order,
                exact: self.exact,
                terms: BTreeMap::new(),
            };
        }
        Jet {
            ctx: self.ctx.clone(),
            order: self.order,
            exact: self.exact,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    /// Product with a single monomial (of the same context).
    pub fn mul_monomial(&self, m: &Monomial, coeff: &Rational) -> Jet {
        debug_assert_eq!(m.0.len(), self.ctx.num_vars());
        if coeff.is_zero() {
            return Jet {
                ctx: self.ctx.clone(),
                order: self.order,
                exact: self.exact,
                terms: BTreeMap::new(),
            };
        }
        let ti = self.ctx.t_index();
        let shift = m.weighted_degree(ti);
        let mut dropped = false;
        let mut terms = BTreeMap::new();
        for (mm, c) in &self.terms {
            if mm.weighted_degree(ti) + shift > self.order {
                dropped = true;
                continue;
            }
            terms.insert(mm.mul(m), c * coeff);
        }
        Jet {
            ctx: self.ctx.clone(),
            order: self.order,
            exact: self.exact && !dropped,
            terms,
        }
    }

    /// `self^k` by repeated multiplication (with truncation).
    pub fn pow(&self, k: u32) -> Result<Jet, JetError> {
        let mut acc = Jet::constant(&self.ctx, Rational::one(), self.order);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    // ----- calculus -----------------------------------------------------------

    /// Partial derivative with respect to a named variable.  The result
    /// order drops by one (floored at zero): the operand's top coefficient
    /// layer no longer constrains the derivative there.
    pub fn partial_derivative(&self, var: &str) -> Option<Jet> {
        let idx = self.ctx.index_of(var)?;
        let order = self.order.saturating_sub(1);
        let ti = self.ctx.t_index();
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[idx] = e - 1;
            let dm = Monomial(exps);
            if dm.weighted_degree(ti) > order {
                continue;
            }
            terms.insert(dm, c * Rational::from(BigInt::from(e)));
        }
        Some(Jet {
            ctx: self.ctx.clone(),
            order,
            exact: self.exact,
            terms,
        })
    }

    // ----- composition ----------------------------------------------------------

    /// Substitutes jets for every y-variable of `self`.
    ///
    /// The assignments must all live over `self.ctx().without_y()` — same
    /// x-block and t-slot, empty y-block — and the result lives there too.
    /// If `self` is not exact, every assigned jet must have weighted
    /// valuation at least 1 (so the missing tail of `self` cannot reach
    /// finite order); otherwise the composition is refused as ill-formed.
    pub fn substitute(&self, assignments: &[Jet]) -> Result<Jet, JetError> {
        let target_ctx = self.ctx.without_y();
        if assignments.len() != self.ctx.num_y() {
            return Err(JetError::ContextMismatch);
        }
        for a in assignments {
            if *a.ctx() != target_ctx {
                return Err(JetError::ContextMismatch);
            }
        }
        if !self.exact {
            for a in assignments {
                if a.ord() < Valuation::Finite(1) {
                    return Err(JetError::IllFormedComposition);
                }
            }
        }

        // Working order: minimum over the non-exact participants.  When
        // every participant is exact the composition is pure polynomial
        // algebra; compute uncapped and fix the order field afterwards.
        let mut work: Option<u32> = None;
        let mut feed = |j: &Jet| {
            if !j.is_exact() {
                work = Some(match work {
                    None => j.order(),
                    Some(o) => o.min(j.order()),
                });
            }
        };
        feed(self);
        for a in assignments {
            feed(a);
        }
        let all_exact = work.is_none();
        let cap = work.unwrap_or(u32::MAX);

        // Participants re-truncated to the working order (exact ones raised
        // to it first so nothing is lost spuriously).
        let lifted: Vec<Jet> = assignments
            .iter()
            .map(|a| a.with_order_at_least(cap).truncate_to(cap))
            .collect();

        let nx = self.ctx.num_x();
        let ny = self.ctx.num_y();
        let ti_src = self.ctx.t_index();
        let ti_dst = target_ctx.t_index();
        let ndst = target_ctx.num_vars();

        let one = Jet::constant(&target_ctx, Rational::one(), cap);
        let mut powers: Vec<Vec<Jet>> = (0..ny).map(|_| alloc::vec![one.clone()]).collect();

        let mut result = Jet::zero(&target_ctx, cap);
        let mut outer_dropped = false;
        for (m, c) in &self.terms {
            // x- and t-exponents pass through unchanged.
            let mut base = alloc::vec![0u32; ndst];
            base[..nx].copy_from_slice(&m.0[..nx]);
            if let (Some(ts), Some(td)) = (ti_src, ti_dst) {
                base[td] = m.0[ts];
            }
            let base = Monomial(base);
            if base.weighted_degree(ti_dst) > cap {
                outer_dropped = true;
                continue;
            }
            let mut factor = one.clone();
            for (j, powers_j) in powers.iter_mut().enumerate() {
                let e = m.0[nx + j] as usize;
                if e == 0 {
                    continue;
                }
                while powers_j.len() <= e {
                    let next = powers_j.last().unwrap().mul(&lifted[j])?;
                    powers_j.push(next);
                }
                factor = factor.mul(&powers_j[e])?;
            }
            let contrib = factor.mul_monomial(&base, c);
            result = result.add(&contrib)?;
        }
        if outer_dropped {
            result.exact = false;
        }

        if all_exact {
            // Give the polynomial an order field covering the result and
            // every stated input order.
            let deg = result.degree();
            let mut o = deg.max(self.order);
            for a in assignments {
                o = o.max(a.order());
            }
            result.order = o;
        }
        Ok(result)
    }

    /// Evaluates the weight-zero parameter `t` at a rational point.  The
    /// result lives over the same context with the t-slot removed.
    pub fn specialize_t(&self, value: &Rational) -> Jet {
        let Some(ti) = self.ctx.t_index() else {
            return self.clone();
        };
        let ctx = VarContext::new(
            self.ctx.x_vars().iter().cloned(),
            self.ctx.y_vars().iter().cloned(),
            None,
        )
        .expect("shrinking a valid context");
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let p = m.0[ti];
            let mut exps = m.0.clone();
            exps.remove(ti);
            let mut coeff = c.clone();
            for _ in 0..p {
                coeff *= value;
            }
            if coeff.is_zero() {
                continue;
            }
            *terms.entry(Monomial(exps)).or_insert_with(Rational::zero) += coeff;
        }
        terms.retain(|_, c| !c.is_zero());
        Jet {
            ctx,
            order: self.order,
            exact: self.exact,
            terms,
        }
    }

    /// Collects the jet by powers of `t`: `(power, coefficient)` pairs with
    /// each coefficient over the t-free context, in increasing power order.
    pub fn t_coefficients(&self) -> Vec<(u32, Jet)> {
        let Some(ti) = self.ctx.t_index() else {
            return alloc::vec![(0, self.clone())];
        };
        let ctx = VarContext::new(
            self.ctx.x_vars().iter().cloned(),
            self.ctx.y_vars().iter().cloned(),
            None,
        )
        .expect("shrinking a valid context");
        let mut buckets: BTreeMap<u32, BTreeMap<Monomial, Rational>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let p = m.0[ti];
            let mut exps = m.0.clone();
            exps.remove(ti);
            buckets.entry(p).or_default().insert(Monomial(exps), c.clone());
        }
        buckets
            .into_iter()
            .map(|(p, terms)| {
                (
                    p,
                    Jet {
                        ctx: ctx.clone(),
                        order: self.order,
                        exact: self.exact,
                        terms,
                    },
                )
            })
            .collect()
    }

    /// Re-homes a jet into a context that contains all its variables by
    /// name (new slots get exponent zero).
    pub fn extend_to(&self, ctx: &VarContext) -> Result<Jet, JetError> {
        if *ctx == self.ctx {
            return Ok(self.clone());
        }
        let map: Option<Vec<usize>> = (0..self.ctx.num_vars())
            .map(|i| ctx.index_of(self.ctx.name_of(i)))
            .collect();
        let map = map.ok_or(JetError::ContextMismatch)?;
        let n = ctx.num_vars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = alloc::vec![0u32; n];
                for (i, e) in m.0.iter().enumerate() {
                    exps[map[i]] = *e;
                }
                (Monomial(exps), c.clone())
            })
            .collect();
        Ok(Jet {
            ctx: ctx.clone(),
            order: self.order,
            exact: self.exact,
            terms,
        })
    }

    // ----- division -----------------------------------------------------------

    /// Exact power-series division `self / divisor` to `target_order`.
    ///
    /// Solves the graded linear systems degree by degree.  Requires both
    /// operands stored through `target_order + ord(divisor)`
    /// ([`JetError::InsufficientOrder`] otherwise) and returns
    /// [`JetError::NotDivisible`] at the first dividend degree whose system
    /// is inconsistent.  The quotient `q` satisfies
    /// `q * divisor ≡ self` through degree `target_order + ord(divisor)`.
    pub fn divide_exact(&self, divisor: &Jet, target_order: u32) -> Result<Jet, JetError> {
        self.check_ctx(divisor)?;
        let e = match divisor.ord() {
            Valuation::Finite(e) => e,
            Valuation::Infinite => return Err(JetError::DivisionByZero),
        };
        let needed = target_order + e;
        for operand in [self, divisor] {
            if let Valuation::Finite(avail) = operand.effective_order() {
                if avail < needed {
                    return Err(JetError::InsufficientOrder {
                        needed,
                        available: avail,
                    });
                }
            }
        }
        let ti = self.ctx.t_index();

        // Divisor split into weighted-homogeneous layers e, e+1, ...
        let mut upper_layers: BTreeMap<u32, Vec<(Monomial, Rational)>> = BTreeMap::new();
        for (m, c) in &divisor.terms {
            let d = m.weighted_degree(ti);
            if d > needed {
                continue;
            }
            upper_layers.entry(d).or_default().push((m.clone(), c.clone()));
        }
        let low = upper_layers.remove(&e).expect("valuation layer present");

        let mut f_layers: BTreeMap<u32, BTreeMap<Monomial, Rational>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = m.weighted_degree(ti);
            if d > needed {
                continue;
            }
            f_layers.entry(d).or_default().insert(m.clone(), c.clone());
        }

        let mut q_layers: BTreeMap<u32, BTreeMap<Monomial, Rational>> = BTreeMap::new();
        for degree in 0..=needed {
            // r = f_D − Σ_{e' > e} q_{D−e'} · divisor_{e'}
            let mut r: BTreeMap<Monomial, Rational> =
                f_layers.get(&degree).cloned().unwrap_or_default();
            for (de, layer) in upper_layers.range(..=degree) {
                let qd = degree - de;
                if let Some(q_layer) = q_layers.get(&qd) {
                    for (qm, qc) in q_layer {
                        for (dm, dc) in layer {
                            *r.entry(qm.mul(dm)).or_insert_with(Rational::zero) -= qc * dc;
                        }
                    }
                }
            }
            r.retain(|_, c| !c.is_zero());
            if degree < e {
                if !r.is_empty() {
                    return Err(JetError::NotDivisible { degree });
                }
                continue;
            }
            let q_layer = homogeneous_divide(r, &low, degree)?;
            if !q_layer.is_empty() {
                q_layers.insert(degree - e, q_layer);
            }
        }

        let mut terms = BTreeMap::new();
        for (_, layer) in q_layers {
            terms.extend(layer);
        }
        Ok(Jet {
            ctx: self.ctx.clone(),
            order: target_order,
            exact: false,
            terms,
        })
    }

    // ----- display -------------------------------------------------------------

    /// Canonical textual form: terms in graded-lex order, coefficients as
    /// reduced rationals, explicit `*` between factors, `^` for exponents.
    /// Round-trips exactly through the expression parser.
    pub fn to_expr_string(&self) -> String {
        use core::fmt::Write;
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_constant() {
                factors.push(format_rational(&abs));
            }
            for (idx, e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(String::from(self.ctx.name_of(idx))),
                    _ => {
                        let mut s = String::from(self.ctx.name_of(idx));
                        let _ = write!(s, "^{}", e);
                        factors.push(s);
                    }
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

pub(crate) fn format_rational(r: &Rational) -> String {
    use core::fmt::Write;
    let mut s = String::new();
    if r.denom().is_one() {
        let _ = write!(s, "{}", r.numer());
    } else {
        let _ = write!(s, "{}/{}", r.numer(), r.denom());
    }
    s
}

/// Division of a weighted-homogeneous polynomial `r` by the valuation layer
/// of the divisor, by repeated cancellation of the graded-lex leading term.
/// For a single divisor, a zero remainder is equivalent to exactness, so any
/// non-divisible leading term proves the division impossible.
fn homogeneous_divide(
    mut r: BTreeMap<Monomial, Rational>,
    low: &[(Monomial, Rational)],
    report_degree: u32,
) -> Result<BTreeMap<Monomial, Rational>, JetError> {
    let (lt_m, lt_c) = low
        .iter()
        .max_by(|a, b| a.0.cmp(&b.0))
        .expect("nonempty valuation layer");
    let mut q: BTreeMap<Monomial, Rational> = BTreeMap::new();
    while let Some((rm, rc)) = r.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
        if !lt_m.divides(&rm) {
            return Err(JetError::NotDivisible {
                degree: report_degree,
            });
        }
        let qm = rm.quotient(lt_m);
        let qc = rc / lt_c;
        for (dm, dc) in low {
            *r.entry(qm.mul(dm)).or_insert_with(Rational::zero) -= &qc * dc;
        }
        r.retain(|_, c| !c.is_zero());
        *q.entry(qm).or_insert_with(Rational::zero) += qc;
    }
    q.retain(|_, c| !c.is_zero());
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_polynomial;

    fn ctx1() -> VarContext {
        VarContext::x_only(["x"]).unwrap()
    }

    fn p(ctx: &VarContext, src: &str) -> Jet {
        parse_polynomial(src, ctx).unwrap()
    }

    #[test]
    fn mul_truncates_and_clears_exact() {
        let ctx = ctx1();
        let a = p(&ctx, "x^2").with_order_at_least(4);
        let b = p(&ctx, "x^3").with_order_at_least(4);
        // Both carry order 4; the product x^5 exceeds it.
        let prod = a.mul(&b).unwrap();
        assert!(prod.is_zero());
        assert!(!prod.is_exact());
        assert_eq!(prod.order(), 4);
    }

    #[test]
    fn square_of_quadratic_matches_convolution_oracle() {
        // Independent oracle: dense univariate convolution.
        let coeffs = [1i64, 1, 1];
        let mut expect = [0i64; 5];
        for (i, a) in coeffs.iter().enumerate() {
            for (j, b) in coeffs.iter().enumerate() {
                expect[i + j] += a * b;
            }
        }
        assert_eq!(expect, [1, 2, 3, 2, 1]);

        let ctx = ctx1();
        let f = p(&ctx, "1 + x + x^2").with_order_at_least(4);
        let sq = f.mul(&f).unwrap();
        assert_eq!(
            sq,
            p(&ctx, "1 + 2*x + 3*x^2 + 2*x^3 + x^4").with_order_at_least(4)
        );
        assert!(sq.is_exact());
    }

    #[test]
    fn derivative_drops_order_and_respects_leibniz_spot_check() {
        let ctx = VarContext::x_only(["x1", "x2"]).unwrap();
        let f = p(&ctx, "x1*x2 + x1^3").with_order_at_least(5);
        let d = f.partial_derivative("x1").unwrap();
        assert_eq!(d, p(&ctx, "x2 + 3*x1^2").with_order_at_least(4));
        assert_eq!(d.order(), 4);

        // d(fg) = f dg + g df on a small pair.
        let g = p(&ctx, "1 + x2^2").with_order_at_least(5);
        let lhs = f.mul(&g).unwrap().partial_derivative("x2").unwrap();
        let rhs = f
            .mul(&g.partial_derivative("x2").unwrap())
            .unwrap()
            .add(&g.mul(&f.partial_derivative("x2").unwrap()).unwrap())
            .unwrap();
        assert_eq!(lhs.truncate_to(4), rhs.truncate_to(4));
    }

    #[test]
    fn ord_of_zero_is_infinite() {
        let ctx = ctx1();
        let z = Jet::zero(&ctx, 7);
        assert!(z.ord().is_infinite());
        assert!(Valuation::Finite(u32::MAX) < Valuation::Infinite);
        let f = p(&ctx, "x^3 - x^5");
        assert_eq!(f.ord(), Valuation::Finite(3));
    }

    #[test]
    fn substitution_of_square() {
        let ctx = VarContext::new(["x"], ["y"], None).unwrap();
        let f = p(&ctx, "1 + y + y^2");
        let assign = p(&ctx.without_y(), "x^2").with_order_at_least(5);
        let got = f.substitute(core::slice::from_ref(&assign)).unwrap();
        let want = p(&ctx.without_y(), "1 + x^2 + x^4").with_order_at_least(5);
        assert_eq!(got, want);
        assert!(got.is_exact());
    }

    #[test]
    fn substitution_requires_positive_valuation_for_truncated_outer() {
        let ctx = VarContext::new(["x"], ["y"], None).unwrap();
        let f = p(&ctx, "1 + y + y^3").truncate_to(2); // drops y^3: not exact
        assert!(!f.is_exact());
        let unit = p(&ctx.without_y(), "1 + x");
        assert_eq!(
            f.substitute(core::slice::from_ref(&unit)).unwrap_err(),
            JetError::IllFormedComposition
        );
        let ok = p(&ctx.without_y(), "x").truncate_to(1);
        assert!(f.substitute(core::slice::from_ref(&ok)).is_ok());
    }

    #[test]
    fn truncated_substitution_caps_at_common_order() {
        let ctx = VarContext::new(["x"], ["y"], None).unwrap();
        let f = p(&ctx, "y + y^2");
        let a = p(&ctx.without_y(), "x + x^2 + x^3")
            .with_order_at_least(3)
            .truncate_to(2); // pretend we only know x + x^2 through order 2
        let a = Jet {
            exact: false,
            ..a
        };
        let got = f.substitute(core::slice::from_ref(&a)).unwrap();
        assert_eq!(got.order(), 2);
        assert_eq!(
            got,
            Jet {
                exact: false,
                ..p(&ctx.without_y(), "x + 2*x^2").truncate_to(2)
            }
        );
    }

    #[test]
    fn divide_exact_geometric_series() {
        let ctx = ctx1();
        let f = p(&ctx, "x^3").with_order_at_least(10);
        let h = p(&ctx, "x^2 + x^3").with_order_at_least(10);
        let q = f.divide_exact(&h, 3).unwrap();
        let want = Jet {
            exact: false,
            ..p(&ctx, "x - x^2 + x^3").with_order_at_least(3)
        };
        assert_eq!(q, want);
        // Oracle: q * h == f through degree target + ord(h) = 5.
        let back = q.with_claimed_order(5).mul(&h.truncate_to(5)).unwrap();
        assert_eq!(back.truncate_to(5).terms.len(), 1);
        assert_eq!(back.coefficient(&Monomial(alloc::vec![3])), Rational::one());
    }

    #[test]
    fn divide_exact_reports_failure_degree() {
        let ctx = ctx1();
        let f = p(&ctx, "x").with_order_at_least(8);
        let h = p(&ctx, "x^2").with_order_at_least(8);
        assert_eq!(
            f.divide_exact(&h, 2).unwrap_err(),
            JetError::NotDivisible { degree: 1 }
        );
    }

    #[test]
    fn divide_exact_checks_operand_orders() {
        let ctx = ctx1();
        let f = Jet {
            exact: false,
            ..p(&ctx, "x^3")
        };
        assert_eq!(f.order(), 3);
        let h = p(&ctx, "x^2").with_order_at_least(8);
        assert_eq!(
            f.divide_exact(&h, 2).unwrap_err(),
            JetError::InsufficientOrder {
                needed: 4,
                available: 3
            }
        );
    }

    #[test]
    fn expr_string_round_trips() {
        let ctx = VarContext::x_only(["x1", "x2"]).unwrap();
        let f = p(&ctx, "-5/8 + x1^2*x2 - 3*x2^4");
        let s = f.to_expr_string();
        let back = parse_polynomial(&s, &ctx).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn t_has_weight_zero() {
        let ctx = VarContext::new(["x"], core::iter::empty::<&str>(), Some("t")).unwrap();
        let f = p(&ctx, "t^5*x + t^2").truncate_to(1);
        // Neither term exceeds weighted degree 1, so nothing is dropped.
        assert_eq!(f.num_terms(), 2);
        assert!(f.is_exact());
        assert_eq!(f.ord(), Valuation::Finite(0));
        let spec = f.specialize_t(&Rational::from(BigInt::from(2)));
        assert_eq!(spec.to_expr_string(), "4 + 32*x");
    }

    #[test]
    fn t_coefficients_split() {
        let ctx = VarContext::new(["x"], core::iter::empty::<&str>(), Some("t")).unwrap();
        let f = p(&ctx, "x + t*x^2 - 3*t*x + t^3");
        let parts = f.t_coefficients();
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0].0, 0);
        assert_eq!(parts[0].1.to_expr_string(), "x");
        assert_eq!(parts[1].0, 1);
        assert_eq!(parts[1].1.to_expr_string(), "-3*x + x^2");
        assert_eq!(parts[2].0, 3);
        assert_eq!(parts[2].1.to_expr_string(), "1");
    }
}
