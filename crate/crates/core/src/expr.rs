//! Parsing of polynomial expressions and monomial lists.
//!
//! Grammar (whitespace-insensitive except inside rational literals):
//!
//! ```text
//! expr     := term { ('+' | '-') term }
//! term     := [ '-' ] factor { '*' factor }
//! factor   := atom [ '^' exponent ]
//! atom     := rational | variable | '(' expr ')'
//! rational := digits [ '/' digits ]          -- no spaces around '/'
//! exponent := digits                         -- non-negative integer
//! ```
//!
//! There is no implicit multiplication (`2x` is a syntax error) and no
//! division operator: `/` exists only inside a rational literal, directly
//! between digits.  [`parse_polynomial`] evaluates an expression exactly
//! into a [`Jet`] whose order equals its weighted degree and whose exact
//! flag is set.  [`parse_monomial_ideal`] parses a comma-separated list of
//! generators, each of which must simplify to a single monomial with
//! coefficient one.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::context::VarContext;
use crate::jet::{Jet, Monomial, Rational};

/// Largest accepted exponent; generous for series work while keeping a
/// runaway `(long sum)^k` from freezing the process.
pub const MAX_EXPONENT: u32 = 4096;

/// Parse errors, with byte offsets into the source string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprError {
    Syntax { pos: usize, expected: &'static str },
    UnknownVariable { name: String, pos: usize },
    NegativeExponent { pos: usize },
    NotAMonomial { pos: usize },
}

impl ExprError {
    pub fn pos(&self) -> usize {
        match self {
            ExprError::Syntax { pos, .. }
            | ExprError::UnknownVariable { pos, .. }
            | ExprError::NegativeExponent { pos }
            | ExprError::NotAMonomial { pos } => *pos,
        }
    }
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprError::Syntax { pos, expected } => {
                write!(f, "syntax error at byte {}: expected {}", pos, expected)
            }
            ExprError::UnknownVariable { name, pos } => {
                write!(f, "unknown variable `{}` at byte {}", name, pos)
            }
            ExprError::NegativeExponent { pos } => {
                write!(f, "negative exponent at byte {}", pos)
            }
            ExprError::NotAMonomial { pos } => write!(
                f,
                "generator at byte {} is not a monomial with coefficient 1",
                pos
            ),
        }
    }
}

impl core::error::Error for ExprError {}

// ----- lexer -----------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Comma,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let pos = i;
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
            }
            b'+' => {
                out.push(Token { tok: Tok::Plus, pos });
                i += 1;
            }
            b'-' => {
                out.push(Token { tok: Tok::Minus, pos });
                i += 1;
            }
            b'*' => {
                out.push(Token { tok: Tok::Star, pos });
                i += 1;
            }
            b'^' => {
                out.push(Token { tok: Tok::Caret, pos });
                i += 1;
            }
            b'(' => {
                out.push(Token { tok: Tok::LParen, pos });
                i += 1;
            }
            b')' => {
                out.push(Token { tok: Tok::RParen, pos });
                i += 1;
            }
            b',' => {
                out.push(Token { tok: Tok::Comma, pos });
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let numer = BigInt::parse_bytes(&bytes[start..i], 10)
                    .expect("digit run parses as integer");
                // A '/' directly between digits continues the literal as a
                // rational; anywhere else '/' is not a token at all.
                let mut denom = BigInt::one();
                if i + 1 < bytes.len() && bytes[i] == b'/' && bytes[i + 1].is_ascii_digit() {
                    let dstart = i + 1;
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    denom = BigInt::parse_bytes(&bytes[dstart..i], 10)
                        .expect("digit run parses as integer");
                    if denom.is_zero() {
                        return Err(ExprError::Syntax {
                            pos: dstart,
                            expected: "a nonzero denominator",
                        });
                    }
                }
                out.push(Token {
                    tok: Tok::Num(BigRational::new(numer, denom)),
                    pos,
                });
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(String::from(&src[start..i])),
                    pos,
                });
            }
            _ => {
                return Err(ExprError::Syntax {
                    pos,
                    expected: "a number, variable, operator, or parenthesis",
                })
            }
        }
    }
    Ok(out)
}

// ----- exact polynomial accumulator --------------------------------------------
//
// Expressions are evaluated in an untruncated polynomial before the final
// Jet is built, so parsing never loses coefficients regardless of the order
// fields involved.

type Acc = BTreeMap<Monomial, Rational>;

fn acc_add_assign(a: &mut Acc, b: Acc) {
    for (m, c) in b {
        let e = a.entry(m).or_insert_with(Rational::zero);
        *e += c;
    }
    a.retain(|_, c| !c.is_zero());
}

fn acc_neg(a: Acc) -> Acc {
    a.into_iter().map(|(m, c)| (m, -c)).collect()
}

fn acc_mul(a: &Acc, b: &Acc) -> Acc {
    let mut out = Acc::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let e = out.entry(ma.mul(mb)).or_insert_with(Rational::zero);
            *e += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn acc_pow(a: &Acc, k: u32, num_vars: usize) -> Acc {
    let mut out = Acc::new();
    out.insert(Monomial::constant(num_vars), Rational::one());
    for _ in 0..k {
        out = acc_mul(&out, a);
    }
    out
}

// ----- parser ----------------------------------------------------------------------

struct Parser<'a> {
    tokens: &'a [Token],
    i: usize,
    ctx: &'a VarContext,
    end_pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.i).map(|t| &t.tok)
    }

    fn pos(&self) -> usize {
        self.tokens.get(self.i).map(|t| t.pos).unwrap_or(self.end_pos)
    }

    fn bump(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.i);
        self.i += 1;
        t
    }

    fn expr(&mut self) -> Result<Acc, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc_add_assign(&mut acc, rhs);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc_add_assign(&mut acc, acc_neg(rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Acc, ExprError> {
        let negate = matches!(self.peek(), Some(Tok::Minus));
        if negate {
            self.bump();
        }
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            let rhs = self.factor()?;
            acc = acc_mul(&acc, &rhs);
        }
        Ok(if negate { acc_neg(acc) } else { acc })
    }

    fn factor(&mut self) -> Result<Acc, ExprError> {
        let base = self.atom()?;
        if !matches!(self.peek(), Some(Tok::Caret)) {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        match self.bump().map(|t| &t.tok) {
            Some(Tok::Minus) => Err(ExprError::NegativeExponent { pos }),
            Some(Tok::Num(n)) => {
                if !n.denom().is_one() {
                    return Err(ExprError::Syntax {
                        pos,
                        expected: "an integer exponent",
                    });
                }
                let Some(k) = to_u32(n.numer()) else {
                    return Err(ExprError::Syntax {
                        pos,
                        expected: "an exponent within range",
                    });
                };
                if k > MAX_EXPONENT {
                    return Err(ExprError::Syntax {
                        pos,
                        expected: "an exponent within range",
                    });
                }
                Ok(acc_pow(&base, k, self.ctx.num_vars()))
            }
            _ => Err(ExprError::Syntax {
                pos,
                expected: "a non-negative integer exponent",
            }),
        }
    }

    fn atom(&mut self) -> Result<Acc, ExprError> {
        let pos = self.pos();
        match self.bump().map(|t| &t.tok) {
            Some(Tok::Num(n)) => {
                let mut acc = Acc::new();
                if !n.is_zero() {
                    acc.insert(Monomial::constant(self.ctx.num_vars()), n.clone());
                }
                Ok(acc)
            }
            Some(Tok::Ident(name)) => match self.ctx.index_of(name) {
                Some(idx) => {
                    let mut acc = Acc::new();
                    acc.insert(
                        Monomial::var(self.ctx.num_vars(), idx),
                        Rational::one(),
                    );
                    Ok(acc)
                }
                None => Err(ExprError::UnknownVariable {
                    name: name.clone(),
                    pos,
                }),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let pos = self.pos();
                match self.bump().map(|t| &t.tok) {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(ExprError::Syntax {
                        pos,
                        expected: "a closing parenthesis",
                    }),
                }
            }
            _ => Err(ExprError::Syntax {
                pos,
                expected: "a number, variable, or parenthesized expression",
            }),
        }
    }
}

fn to_u32(n: &BigInt) -> Option<u32> {
    use num_traits::ToPrimitive;
    n.to_u32()
}

fn acc_to_jet(acc: Acc, ctx: &VarContext) -> Jet {
    let ti = ctx.t_index();
    let order = acc
        .keys()
        .map(|m| m.weighted_degree(ti))
        .max()
        .unwrap_or(0);
    Jet::from_terms(ctx, order, true, acc)
}

fn parse_tokens(tokens: &[Token], end_pos: usize, ctx: &VarContext) -> Result<Acc, ExprError> {
    let mut p = Parser {
        tokens,
        i: 0,
        ctx,
        end_pos,
    };
    let acc = p.expr()?;
    if p.i != tokens.len() {
        return Err(ExprError::Syntax {
            pos: p.pos(),
            expected: "an operator or end of input",
        });
    }
    Ok(acc)
}

/// Parses an expression into an exact [`Jet`] over `ctx`, with the order
/// field set to the polynomial's weighted degree.
pub fn parse_polynomial(src: &str, ctx: &VarContext) -> Result<Jet, ExprError> {
    let tokens = lex(src)?;
    if tokens.is_empty() {
        return Err(ExprError::Syntax {
            pos: src.len(),
            expected: "an expression",
        });
    }
    if let Some(t) = tokens.iter().find(|t| t.tok == Tok::Comma) {
        return Err(ExprError::Syntax {
            pos: t.pos,
            expected: "an operator or end of input",
        });
    }
    let acc = parse_tokens(&tokens, src.len(), ctx)?;
    Ok(acc_to_jet(acc, ctx))
}

/// Parses a comma-separated list of monomial generators.  Each entry must
/// evaluate to a single monomial with coefficient exactly 1; anything else
/// (a sum, a scaled monomial, zero) is [`ExprError::NotAMonomial`].  An
/// all-whitespace source yields the empty list.
pub fn parse_monomial_ideal(src: &str, ctx: &VarContext) -> Result<Vec<Monomial>, ExprError> {
    let tokens = lex(src)?;
    if tokens.is_empty() {
        return Ok(Vec::new());
    }
    let mut gens = Vec::new();
    let mut chunk_start = 0usize;
    let mut depth = 0i32;
    let mut boundaries = Vec::new();
    for (idx, t) in tokens.iter().enumerate() {
        match t.tok {
            Tok::LParen => depth += 1,
            Tok::RParen => depth -= 1,
            Tok::Comma if depth == 0 => boundaries.push(idx),
            _ => {}
        }
    }
    boundaries.push(tokens.len());
    for b in boundaries {
        let chunk = &tokens[chunk_start..b];
        let comma_pos = tokens.get(b).map(|t| t.pos).unwrap_or(src.len());
        if chunk.is_empty() {
            return Err(ExprError::Syntax {
                pos: comma_pos,
                expected: "a monomial generator",
            });
        }
        let start_pos = chunk[0].pos;
        let acc = parse_tokens(chunk, comma_pos, ctx)?;
        if acc.len() != 1 {
            return Err(ExprError::NotAMonomial { pos: start_pos });
        }
        let (m, c) = acc.into_iter().next().expect("one entry");
        if !c.is_one() {
            return Err(ExprError::NotAMonomial { pos: start_pos });
        }
        gens.push(m);
        chunk_start = b + 1;
    }
    Ok(gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx2() -> VarContext {
        VarContext::x_only(["x1", "x2"]).unwrap()
    }

    #[test]
    fn precedence_and_rationals() {
        let ctx = ctx2();
        let f = parse_polynomial("1/2 + 2*x1^3 - x2", &ctx).unwrap();
        assert_eq!(f.order(), 3);
        assert!(f.is_exact());
        assert_eq!(f.to_expr_string(), "1/2 - x2 + 2*x1^3");
    }

    #[test]
    fn parenthesized_powers_expand() {
        let ctx = ctx2();
        let f = parse_polynomial("(x1 + x2)^2", &ctx).unwrap();
        // Within a degree, terms ascend in the exponent-vector order.
        assert_eq!(f.to_expr_string(), "x2^2 + 2*x1*x2 + x1^2");
    }

    #[test]
    fn unary_minus_in_terms() {
        let ctx = ctx2();
        let f = parse_polynomial("-x1 + 3 - -2", &ctx).unwrap();
        assert_eq!(f.to_expr_string(), "5 - x1");
    }

    #[test]
    fn no_implicit_multiplication() {
        let ctx = ctx2();
        let err = parse_polynomial("2x1", &ctx).unwrap_err();
        assert_eq!(err, ExprError::Syntax { pos: 1, expected: "an operator or end of input" });
    }

    #[test]
    fn unknown_variable_reports_name_and_pos() {
        let ctx = ctx2();
        let err = parse_polynomial("x1 + zz^2", &ctx).unwrap_err();
        assert_eq!(
            err,
            ExprError::UnknownVariable {
                name: alloc::string::String::from("zz"),
                pos: 5
            }
        );
    }

    #[test]
    fn negative_exponent_rejected() {
        let ctx = ctx2();
        let err = parse_polynomial("x1^-2", &ctx).unwrap_err();
        assert_eq!(err, ExprError::NegativeExponent { pos: 3 });
    }

    #[test]
    fn slash_only_inside_literals() {
        let ctx = ctx2();
        assert!(parse_polynomial("3/4*x1", &ctx).is_ok());
        assert!(parse_polynomial("x1/2", &ctx).is_err());
        assert!(parse_polynomial("1 / 2", &ctx).is_err());
        let err = parse_polynomial("1/0", &ctx).unwrap_err();
        assert_eq!(
            err,
            ExprError::Syntax {
                pos: 2,
                expected: "a nonzero denominator"
            }
        );
    }

    #[test]
    fn cancellation_to_zero() {
        let ctx = ctx2();
        let f = parse_polynomial("x1 - x1", &ctx).unwrap();
        assert!(f.is_zero());
        assert_eq!(f.to_expr_string(), "0");
    }

    #[test]
    fn monomial_ideal_list() {
        let ctx = ctx2();
        let gens = parse_monomial_ideal("x1^2, x1*x2", &ctx).unwrap();
        assert_eq!(gens.len(), 2);
        assert_eq!(gens[0], Monomial(alloc::vec![2, 0]));
        assert_eq!(gens[1], Monomial(alloc::vec![1, 1]));
        assert!(parse_monomial_ideal("  ", &ctx).unwrap().is_empty());
    }

    #[test]
    fn monomial_ideal_rejects_non_monomials() {
        let ctx = ctx2();
        assert_eq!(
            parse_monomial_ideal("x1 + x2", &ctx).unwrap_err(),
            ExprError::NotAMonomial { pos: 0 }
        );
        assert_eq!(
            parse_monomial_ideal("x1^2, 2*x1", &ctx).unwrap_err(),
            ExprError::NotAMonomial { pos: 6 }
        );
        assert_eq!(
            parse_monomial_ideal("x1^2, 0", &ctx).unwrap_err(),
            ExprError::NotAMonomial { pos: 6 }
        );
        // (x1)*(x2) collapses to a clean monomial, so it is accepted.
        assert!(parse_monomial_ideal("(x1)*(x2)", &ctx).is_ok());
    }
}
