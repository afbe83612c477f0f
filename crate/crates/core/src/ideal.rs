//! Monomial ideals over the x-variables, and filtrations built from them.
//!
//! A [`MonomialIdeal`] is stored as its unique minimal generating set (an
//! antichain under componentwise divisibility), kept in a `BTreeSet` so all
//! iteration is in graded-lex order.  Ideals act on jets over any context
//! whose x-block matches: only the x-exponents of a monomial participate in
//! divisibility, so membership and reduction extend monomial-wise to jets
//! with y-variables and a deformation parameter.
//!
//! Membership of a jet comes back as an [`IdealMembership`] certificate —
//! an explicit cofactor per generator whose recombination reproduces the
//! jet — or a witness monomial outside the ideal.  Each monomial is
//! attributed to the first generator that divides it in the canonical
//! generator order, which makes certificates deterministic.
//!
//! A [`Filtration`] is a rule that produces one monomial ideal per level
//! `j`; [`Filtration::materialize`] evaluates a range of levels and checks
//! the chain is descending.  [`weak_fg_check`] reports the finite
//! generator lists level by level, and [`filtrations_cofinal`] searches for
//! a mutual interleaving of two filtrations.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::context::VarContext;
use crate::expr::{parse_monomial_ideal, ExprError};
use crate::jet::{Jet, Monomial, Rational, Valuation};

/// Errors from ideal construction and filtration evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealError {
    /// The operands' x-blocks differ.
    ContextMismatch,
    /// A generator's exponent vector has the wrong length for the context.
    BadGenerator,
    /// Materialized chain fails `A_{j+1} ⊆ A_j` at this level.
    NotDescending { j: u32 },
    /// No level of one filtration fits inside the named level of the other
    /// within the scan bound.
    NotCofinal { direction: CofinalDirection, j: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CofinalDirection {
    /// Searching for `A_d ⊆ B_j` failed.
    FirstIntoSecond,
    /// Searching for `B_d ⊆ A_j` failed.
    SecondIntoFirst,
}

impl fmt::Display for IdealError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealError::ContextMismatch => write!(f, "ideal contexts do not match"),
            IdealError::BadGenerator => write!(f, "generator does not fit the context"),
            IdealError::NotDescending { j } => {
                write!(f, "filtration is not descending at level {}", j)
            }
            IdealError::NotCofinal { direction, j } => {
                let dir = match direction {
                    CofinalDirection::FirstIntoSecond => "first into second",
                    CofinalDirection::SecondIntoFirst => "second into first",
                };
                write!(
                    f,
                    "filtrations are not cofinal ({}) at level {}",
                    dir, j
                )
            }
        }
    }
}

impl core::error::Error for IdealError {}

/// Why a jet failed (or could not be tested for) ideal membership.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MembershipFailure {
    ContextMismatch,
    /// A monomial of the jet whose x-part no generator divides.
    NotContained { witness: Monomial },
}

impl fmt::Display for MembershipFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MembershipFailure::ContextMismatch => write!(f, "contexts do not match"),
            MembershipFailure::NotContained { witness } => {
                write!(f, "monomial with exponents {:?} is outside the ideal", witness.0)
            }
        }
    }
}

impl core::error::Error for MembershipFailure {}

/// A monomial ideal, stored as its minimal generating antichain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialIdeal {
    ctx: VarContext,
    gens: BTreeSet<Monomial>,
}

impl MonomialIdeal {
    /// Builds the ideal generated by `gens` over the x-block of `ctx`,
    /// minimizing the generating set.  Generators must be exponent vectors
    /// of the x-block length.
    pub fn new(
        ctx: &VarContext,
        gens: impl IntoIterator<Item = Monomial>,
    ) -> Result<MonomialIdeal, IdealError> {
        let ctx = ctx.x_part();
        let nx = ctx.num_x();
        let mut set = BTreeSet::new();
        for g in gens {
            if g.0.len() != nx {
                return Err(IdealError::BadGenerator);
            }
            set.insert(g);
        }
        Ok(MonomialIdeal {
            ctx,
            gens: minimize(set),
        })
    }

    /// Parses a comma-separated generator list over the x-block of `ctx`.
    pub fn parse(src: &str, ctx: &VarContext) -> Result<MonomialIdeal, ExprError> {
        let ctx = ctx.x_part();
        let gens = parse_monomial_ideal(src, &ctx)?;
        Ok(MonomialIdeal::new(&ctx, gens).expect("parsed generators fit the context"))
    }

    /// The zero ideal (no generators).
    pub fn zero(ctx: &VarContext) -> MonomialIdeal {
        MonomialIdeal {
            ctx: ctx.x_part(),
            gens: BTreeSet::new(),
        }
    }

    /// The unit ideal (generated by 1).
    pub fn unit(ctx: &VarContext) -> MonomialIdeal {
        let ctx = ctx.x_part();
        let mut gens = BTreeSet::new();
        gens.insert(Monomial::constant(ctx.num_x()));
        MonomialIdeal { ctx, gens }
    }

    /// The maximal ideal `(x_1, …, x_n)`.
    pub fn maximal(ctx: &VarContext) -> MonomialIdeal {
        let ctx = ctx.x_part();
        let nx = ctx.num_x();
        let gens = (0..nx).map(|i| Monomial::var(nx, i)).collect();
        MonomialIdeal { ctx, gens }
    }

    pub fn ctx(&self) -> &VarContext {
        &self.ctx
    }

    /// Minimal generators in graded-lex order.
    pub fn gens(&self) -> impl Iterator<Item = &Monomial> {
        self.gens.iter()
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.gens.iter().any(|g| g.is_constant())
    }

    /// Minimal total degree among generators; infinite for the zero ideal.
    pub fn ord(&self) -> Valuation {
        self.gens
            .iter()
            .map(|g| g.total_degree())
            .min()
            .map(Valuation::Finite)
            .unwrap_or(Valuation::Infinite)
    }

    fn check_ctx(&self, other: &MonomialIdeal) -> Result<(), IdealError> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(IdealError::ContextMismatch)
        }
    }

    /// Ideal sum: union of generators, minimized.
    pub fn sum(&self, other: &MonomialIdeal) -> Result<MonomialIdeal, IdealError> {
        self.check_ctx(other)?;
        let gens: BTreeSet<Monomial> = self.gens.union(&other.gens).cloned().collect();
        Ok(MonomialIdeal {
            ctx: self.ctx.clone(),
            gens: minimize(gens),
        })
    }

    /// Ideal product: pairwise products of generators, minimized.
    pub fn product(&self, other: &MonomialIdeal) -> Result<MonomialIdeal, IdealError> {
        self.check_ctx(other)?;
        let mut gens = BTreeSet::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.insert(a.mul(b));
            }
        }
        Ok(MonomialIdeal {
            ctx: self.ctx.clone(),
            gens: minimize(gens),
        })
    }

    /// Ideal intersection: pairwise least common multiples, minimized.
    pub fn intersection(&self, other: &MonomialIdeal) -> Result<MonomialIdeal, IdealError> {
        self.check_ctx(other)?;
        let mut gens = BTreeSet::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.insert(a.lcm(b));
            }
        }
        Ok(MonomialIdeal {
            ctx: self.ctx.clone(),
            gens: minimize(gens),
        })
    }

    /// `self^k`, with `self^0` the unit ideal.
    pub fn pow(&self, k: u32) -> MonomialIdeal {
        let mut acc = MonomialIdeal::unit(&self.ctx);
        for _ in 0..k {
            acc = acc.product(self).expect("same context");
        }
        acc
    }

    /// Whether every element of `self` lies in `other`.
    pub fn is_subideal_of(&self, other: &MonomialIdeal) -> bool {
        self.ctx == other.ctx
            && self
                .gens
                .iter()
                .all(|g| other.divides_x_part(&g.0).is_some())
    }

    /// First generator (in canonical order) dividing the x-part of an
    /// exponent vector whose leading block is the x-block.
    pub fn divides_x_part(&self, exps: &[u32]) -> Option<&Monomial> {
        let nx = self.ctx.num_x();
        debug_assert!(exps.len() >= nx);
        self.gens
            .iter()
            .find(|g| g.0.iter().zip(&exps[..nx]).all(|(a, b)| a <= b))
    }

    fn jet_ctx_matches(&self, jet: &Jet) -> bool {
        jet.ctx().x_vars() == self.ctx.x_vars()
    }

    /// Tests jet membership and produces a cofactor certificate.
    ///
    /// Every monomial is attributed to the first generator dividing its
    /// x-part; the certificate's recombination `Σ g · c_g` reproduces the
    /// jet exactly.  The jet may live over a context with y-variables or a
    /// t-slot, as long as its x-block matches the ideal's.
    pub fn contains_jet(&self, jet: &Jet) -> Result<IdealMembership, MembershipFailure> {
        if !self.jet_ctx_matches(jet) {
            return Err(MembershipFailure::ContextMismatch);
        }
        let mut cofactors: Vec<(Monomial, Jet)> = Vec::new();
        let mut parts: alloc::collections::BTreeMap<Monomial, Vec<(Monomial, Rational)>> =
            alloc::collections::BTreeMap::new();
        for (m, c) in jet.terms() {
            let Some(g) = self.divides_x_part(&m.0) else {
                return Err(MembershipFailure::NotContained { witness: m.clone() });
            };
            let mut q = m.0.clone();
            for (i, ge) in g.0.iter().enumerate() {
                q[i] -= ge;
            }
            parts
                .entry(g.clone())
                .or_default()
                .push((Monomial(q), c.clone()));
        }
        for (g, terms) in parts {
            let shift = g.total_degree();
            let cof = Jet::from_terms(
                jet.ctx(),
                jet.order().saturating_sub(shift),
                jet.is_exact(),
                terms,
            );
            cofactors.push((g, cof));
        }
        Ok(IdealMembership {
            order: jet.order(),
            cofactors,
        })
    }

    /// Projection to the quotient: drops every monomial whose x-part lies
    /// in the ideal.  Order and exactness carry over (exactness in the
    /// sense of the quotient ring).
    pub fn reduce_jet(&self, jet: &Jet) -> Result<Jet, IdealError> {
        if !self.jet_ctx_matches(jet) {
            return Err(IdealError::ContextMismatch);
        }
        let terms = jet
            .terms()
            .filter(|(m, _)| self.divides_x_part(&m.0).is_none())
            .map(|(m, c)| (m.clone(), c.clone()));
        Ok(Jet::from_terms(
            jet.ctx(),
            jet.order(),
            jet.is_exact(),
            terms,
        ))
    }

    /// Canonical textual form of the generator list.
    pub fn to_expr_string(&self) -> String {
        if self.gens.is_empty() {
            return String::new();
        }
        let names: Vec<String> = self
            .gens
            .iter()
            .map(|g| monomial_expr(g, &self.ctx))
            .collect();
        names.join(", ")
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_expr_string())
    }
}

pub(crate) fn monomial_expr(m: &Monomial, ctx: &VarContext) -> String {
    use core::fmt::Write;
    if m.is_constant() {
        return String::from("1");
    }
    let mut factors: Vec<String> = Vec::new();
    for (idx, e) in m.0.iter().enumerate() {
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
    factors.join("*")
}

fn minimize(gens: BTreeSet<Monomial>) -> BTreeSet<Monomial> {
    let mut out = BTreeSet::new();
    for g in &gens {
        let redundant = gens.iter().any(|h| h != g && h.divides(g));
        if !redundant {
            out.insert(g.clone());
        }
    }
    out
}

/// A cofactor certificate for jet membership in a monomial ideal:
/// `jet = Σ g · c_g` with the sum over the listed generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealMembership {
    /// Order of the certified jet (cofactor orders are lower by each
    /// generator's degree).
    pub order: u32,
    /// `(generator, cofactor)` pairs, generators in canonical order, only
    /// those with nonzero cofactors.
    pub cofactors: Vec<(Monomial, Jet)>,
}

impl IdealMembership {
    /// Recombines `Σ g · c_g` at the certified order.  An independent
    /// checker compares this against the original jet.
    pub fn recombine(&self, ctx: &VarContext) -> Result<Jet, IdealError> {
        let mut acc = Jet::zero(ctx, self.order);
        let n = ctx.num_vars();
        let nx = ctx.num_x();
        for (g, cof) in &self.cofactors {
            if g.0.len() > nx || *cof.ctx() != *ctx {
                return Err(IdealError::ContextMismatch);
            }
            let mut exps = alloc::vec![0u32; n];
            exps[..g.0.len()].copy_from_slice(&g.0);
            let gm = Monomial(exps);
            let term = cof
                .with_claimed_order(self.order)
                .mul_monomial(&gm, &num_traits::One::one());
            acc = acc.add(&term).map_err(|_| IdealError::ContextMismatch)?;
        }
        Ok(acc)
    }
}

// ----- filtrations ---------------------------------------------------------------

/// Affine level expression `a*j + b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Affine {
    pub a: u32,
    pub b: u32,
}

impl Affine {
    pub fn eval(&self, j: u32) -> u32 {
        self.a * j + self.b
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (0, b) => write!(f, "{}", b),
            (1, 0) => write!(f, "j"),
            (1, b) => write!(f, "j+{}", b),
            (a, 0) => write!(f, "{}*j", a),
            (a, b) => write!(f, "{}*j+{}", a, b),
        }
    }
}

/// Rule producing one monomial ideal per level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiltrationRule {
    /// `I^(a*j+b)`.
    Powers { ideal: MonomialIdeal, exp: Affine },
    /// The same ideal at every level.
    Fixed(MonomialIdeal),
    Sum(Vec<FiltrationRule>),
    Product(Vec<FiltrationRule>),
    Intersection(Vec<FiltrationRule>),
}

impl FiltrationRule {
    fn eval(&self, ctx: &VarContext, j: u32) -> MonomialIdeal {
        match self {
            FiltrationRule::Powers { ideal, exp } => ideal.pow(exp.eval(j)),
            FiltrationRule::Fixed(ideal) => ideal.clone(),
            FiltrationRule::Sum(rules) => rules.iter().fold(
                MonomialIdeal::zero(ctx),
                |acc, r| acc.sum(&r.eval(ctx, j)).expect("same context"),
            ),
            FiltrationRule::Product(rules) => rules.iter().fold(
                MonomialIdeal::unit(ctx),
                |acc, r| acc.product(&r.eval(ctx, j)).expect("same context"),
            ),
            FiltrationRule::Intersection(rules) => rules.iter().fold(
                MonomialIdeal::unit(ctx),
                |acc, r| acc.intersection(&r.eval(ctx, j)).expect("same context"),
            ),
        }
    }

    fn to_rule_string(&self, ctx: &VarContext) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        match self {
            FiltrationRule::Powers { ideal, exp } => {
                let _ = write!(s, "powers([{}], {})", ideal.to_expr_string(), exp);
            }
            FiltrationRule::Fixed(ideal) => {
                let _ = write!(s, "fixed([{}])", ideal.to_expr_string());
            }
            FiltrationRule::Sum(rules)
            | FiltrationRule::Product(rules)
            | FiltrationRule::Intersection(rules) => {
                let head = match self {
                    FiltrationRule::Sum(_) => "sum",
                    FiltrationRule::Product(_) => "prod",
                    _ => "cap",
                };
                let parts: Vec<String> =
                    rules.iter().map(|r| r.to_rule_string(ctx)).collect();
                let _ = write!(s, "{}({})", head, parts.join(", "));
            }
        }
        s
    }
}

/// A filtration `j ↦ A_j` of monomial ideals over a fixed x-block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration {
    ctx: VarContext,
    rule: FiltrationRule,
}

impl Filtration {
    pub fn new(ctx: &VarContext, rule: FiltrationRule) -> Filtration {
        Filtration {
            ctx: ctx.x_part(),
            rule,
        }
    }

    /// Parses the rule syntax:
    ///
    /// ```text
    /// rule   := powers(ideal, affine) | scaled(ideal, ideal, affine)
    ///         | fixed(ideal) | sum(rule, …) | prod(rule, …) | cap(rule, …)
    ///         | ideal
    /// ideal  := '[' generator-list ']'
    /// affine := [INT '*'] 'j' ['+' INT] | INT
    /// ```
    ///
    /// `scaled(A, I, e)` abbreviates `prod(fixed(A), powers(I, e))`, and a
    /// bare ideal literal abbreviates `fixed(ideal)`.
    pub fn parse(src: &str, ctx: &VarContext) -> Result<Filtration, ExprError> {
        let ctx = ctx.x_part();
        let mut p = RuleParser {
            src: src.as_bytes(),
            full: src,
            i: 0,
            ctx: &ctx,
        };
        let rule = p.rule()?;
        p.skip_ws();
        if p.i != p.src.len() {
            return Err(ExprError::Syntax {
                pos: p.i,
                expected: "end of rule",
            });
        }
        Ok(Filtration { ctx, rule })
    }

    pub fn ctx(&self) -> &VarContext {
        &self.ctx
    }

    pub fn rule(&self) -> &FiltrationRule {
        &self.rule
    }

    /// The ideal at a single level.
    pub fn ideal_at(&self, j: u32) -> MonomialIdeal {
        self.rule.eval(&self.ctx, j)
    }

    /// Evaluates levels `0..=j_max` and verifies the chain descends
    /// (`A_{j+1} ⊆ A_j`); reports the first violating level otherwise.
    pub fn materialize(&self, j_max: u32) -> Result<Vec<MonomialIdeal>, IdealError> {
        let levels: Vec<MonomialIdeal> = (0..=j_max).map(|j| self.ideal_at(j)).collect();
        for j in 0..j_max as usize {
            if !levels[j + 1].is_subideal_of(&levels[j]) {
                return Err(IdealError::NotDescending { j: j as u32 });
            }
        }
        Ok(levels)
    }

    /// Canonical textual form in the rule syntax.
    pub fn to_rule_string(&self) -> String {
        self.rule.to_rule_string(&self.ctx)
    }
}

struct RuleParser<'a> {
    src: &'a [u8],
    full: &'a str,
    i: usize,
    ctx: &'a VarContext,
}

impl<'a> RuleParser<'a> {
    fn skip_ws(&mut self) {
        while self.i < self.src.len() && self.src[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn eat(&mut self, b: u8, expected: &'static str) -> Result<(), ExprError> {
        self.skip_ws();
        if self.i < self.src.len() && self.src[self.i] == b {
            self.i += 1;
            Ok(())
        } else {
            Err(ExprError::Syntax {
                pos: self.i,
                expected,
            })
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.i).copied()
    }

    fn ident(&mut self) -> Option<(String, usize)> {
        self.skip_ws();
        let start = self.i;
        if start >= self.src.len() || !self.src[start].is_ascii_alphabetic() {
            return None;
        }
        let mut end = start;
        while end < self.src.len()
            && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_')
        {
            end += 1;
        }
        self.i = end;
        Some((String::from(&self.full[start..end]), start))
    }

    fn integer(&mut self) -> Result<u32, ExprError> {
        self.skip_ws();
        let start = self.i;
        let mut end = start;
        while end < self.src.len() && self.src[end].is_ascii_digit() {
            end += 1;
        }
        if end == start {
            return Err(ExprError::Syntax {
                pos: start,
                expected: "an integer",
            });
        }
        let text = &self.full[start..end];
        self.i = end;
        text.parse::<u32>().map_err(|_| ExprError::Syntax {
            pos: start,
            expected: "an integer within range",
        })
    }

    fn ideal_literal(&mut self) -> Result<MonomialIdeal, ExprError> {
        self.eat(b'[', "an ideal literal in brackets")?;
        let start = self.i;
        let mut end = self.i;
        while end < self.src.len() && self.src[end] != b']' {
            end += 1;
        }
        if end == self.src.len() {
            return Err(ExprError::Syntax {
                pos: end,
                expected: "a closing bracket",
            });
        }
        let inner = &self.full[start..end];
        let gens = parse_monomial_ideal(inner, self.ctx).map_err(|e| offset_expr_error(e, start))?;
        self.i = end + 1;
        Ok(MonomialIdeal::new(self.ctx, gens).expect("parsed generators fit"))
    }

    fn affine(&mut self) -> Result<Affine, ExprError> {
        self.skip_ws();
        let pos = self.i;
        // Forms: INT '*' j ['+' INT] | j ['+' INT] | INT
        if let Some(b) = self.peek() {
            if b.is_ascii_digit() {
                let n = self.integer()?;
                return match self.peek() {
                    Some(b'*') => {
                        self.i += 1;
                        self.expect_j()?;
                        let b = self.opt_plus_int()?;
                        Ok(Affine { a: n, b })
                    }
                    _ => Ok(Affine { a: 0, b: n }),
                };
            }
        }
        if let Some((name, _)) = self.ident() {
            if name == "j" {
                let b = self.opt_plus_int()?;
                return Ok(Affine { a: 1, b });
            }
        }
        Err(ExprError::Syntax {
            pos,
            expected: "a level expression like `2*j+1` or `j` or `3`",
        })
    }

    fn expect_j(&mut self) -> Result<(), ExprError> {
        let pos = self.i;
        match self.ident() {
            Some((name, _)) if name == "j" => Ok(()),
            _ => Err(ExprError::Syntax {
                pos,
                expected: "the level variable `j`",
            }),
        }
    }

    fn opt_plus_int(&mut self) -> Result<u32, ExprError> {
        if self.peek() == Some(b'+') {
            self.i += 1;
            self.integer()
        } else {
            Ok(0)
        }
    }

    fn rule(&mut self) -> Result<FiltrationRule, ExprError> {
        self.skip_ws();
        if self.peek() == Some(b'[') {
            let ideal = self.ideal_literal()?;
            return Ok(FiltrationRule::Fixed(ideal));
        }
        let pos = self.i;
        let Some((head, hpos)) = self.ident() else {
            return Err(ExprError::Syntax {
                pos,
                expected: "a rule head (powers, scaled, fixed, sum, prod, cap) or an ideal literal",
            });
        };
        self.eat(b'(', "an opening parenthesis")?;
        let rule = match head.as_str() {
            "powers" => {
                let ideal = self.ideal_literal()?;
                self.eat(b',', "a comma")?;
                let exp = self.affine()?;
                FiltrationRule::Powers { ideal, exp }
            }
            "scaled" => {
                let base = self.ideal_literal()?;
                self.eat(b',', "a comma")?;
                let ideal = self.ideal_literal()?;
                self.eat(b',', "a comma")?;
                let exp = self.affine()?;
                FiltrationRule::Product(alloc::vec![
                    FiltrationRule::Fixed(base),
                    FiltrationRule::Powers { ideal, exp },
                ])
            }
            "fixed" => {
                let ideal = self.ideal_literal()?;
                FiltrationRule::Fixed(ideal)
            }
            "sum" | "prod" | "cap" => {
                let mut rules = alloc::vec![self.rule()?];
                while self.peek() == Some(b',') {
                    self.i += 1;
                    rules.push(self.rule()?);
                }
                match head.as_str() {
                    "sum" => FiltrationRule::Sum(rules),
                    "prod" => FiltrationRule::Product(rules),
                    _ => FiltrationRule::Intersection(rules),
                }
            }
            _ => {
                return Err(ExprError::Syntax {
                    pos: hpos,
                    expected: "a rule head (powers, scaled, fixed, sum, prod, cap)",
                })
            }
        };
        self.eat(b')', "a closing parenthesis")?;
        Ok(rule)
    }
}

fn offset_expr_error(e: ExprError, offset: usize) -> ExprError {
    match e {
        ExprError::Syntax { pos, expected } => ExprError::Syntax {
            pos: pos + offset,
            expected,
        },
        ExprError::UnknownVariable { name, pos } => ExprError::UnknownVariable {
            name,
            pos: pos + offset,
        },
        ExprError::NegativeExponent { pos } => ExprError::NegativeExponent { pos: pos + offset },
        ExprError::NotAMonomial { pos } => ExprError::NotAMonomial { pos: pos + offset },
    }
}

/// Per-level finite generator lists for a filtration: the witness that each
/// level is finitely generated, with the minimal antichain spelled out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakFgReport {
    pub j_max: u32,
    /// `(level, minimal generators)` for `0..=j_max`.
    pub levels: Vec<(u32, Vec<Monomial>)>,
}

/// Materializes `0..=j_max`, verifies the chain descends, and returns the
/// minimal generator list of every level.  For chains of monomial ideals
/// finite generation holds at every level, so the interesting content is
/// the explicit lists (and the descending check, which can fail).
pub fn weak_fg_check(f: &Filtration, j_max: u32) -> Result<WeakFgReport, IdealError> {
    let levels = f.materialize(j_max)?;
    Ok(WeakFgReport {
        j_max,
        levels: levels
            .iter()
            .enumerate()
            .map(|(j, ideal)| (j as u32, ideal.gens().cloned().collect()))
            .collect(),
    })
}

/// A mutual-interleaving certificate: for each level `j`, the least level
/// of the other filtration that fits inside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CofinalityCertificate {
    pub j_max: u32,
    /// `(j, d)` with `A_d ⊆ B_j`, `d` minimal within the scan bound.
    pub first_into_second: Vec<(u32, u32)>,
    /// `(j, d)` with `B_d ⊆ A_j`, `d` minimal within the scan bound.
    pub second_into_first: Vec<(u32, u32)>,
}

/// Checks two filtrations interleave on levels `0..=j_max`, scanning depths
/// up to `scan_max` in each direction.  The refusal names the first level
/// and direction where no interleaving depth exists.
pub fn filtrations_cofinal(
    a: &Filtration,
    b: &Filtration,
    j_max: u32,
    scan_max: u32,
) -> Result<CofinalityCertificate, IdealError> {
    if a.ctx() != b.ctx() {
        return Err(IdealError::ContextMismatch);
    }
    let depth = j_max.max(scan_max);
    let a_levels = a.materialize(depth)?;
    let b_levels = b.materialize(depth)?;
    let scan = |src: &[MonomialIdeal],
                dst: &[MonomialIdeal],
                direction: CofinalDirection|
     -> Result<Vec<(u32, u32)>, IdealError> {
        let mut out = Vec::new();
        for j in 0..=j_max {
            let target = &dst[j as usize];
            let found = (0..=depth).find(|&d| src[d as usize].is_subideal_of(target));
            match found {
                Some(d) => out.push((j, d)),
                None => return Err(IdealError::NotCofinal { direction, j }),
            }
        }
        Ok(out)
    };
    Ok(CofinalityCertificate {
        j_max,
        first_into_second: scan(&a_levels, &b_levels, CofinalDirection::FirstIntoSecond)?,
        second_into_first: scan(&b_levels, &a_levels, CofinalDirection::SecondIntoFirst)?,
    })
}
