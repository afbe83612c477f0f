//! Conversions between core types and the JSON schema.
//!
//! Everything round-trips: a jet serialized here and parsed back is the
//! same jet, with the same stated order and exactness.

use jetlift_core::expr::parse_polynomial;
use jetlift_core::ideal::IdealMembership;
use jetlift_core::jet::{Jet, Monomial, Valuation};
use jetlift_core::system::JetMatrix;
use jetlift_core::{Rational, VarContext};

use crate::schema::{CofactorJson, JetJson, MembershipJson, ValuationJson};

/// Errors from reading schema objects back into core types.
#[derive(Debug)]
pub struct ConvertError(pub String);

impl std::fmt::Display for ConvertError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConvertError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConvertError> {
    Err(ConvertError(msg.into()))
}

// ---------------------------------------------------------------------------
// jets
// ---------------------------------------------------------------------------

pub fn jet_to_json(jet: &Jet) -> JetJson {
    JetJson {
        expr: jet.to_expr_string(),
        order: jet.order(),
        exact: jet.is_exact(),
    }
}

/// Parses a [`JetJson`] over the given context.  The expression must be
/// a polynomial whose every term fits under the stated order; the stated
/// exactness is honored as-is (a non-exact jet is a truncation whose
/// tail is unknown).
pub fn jet_from_json(json: &JetJson, ctx: &VarContext) -> Result<Jet, ConvertError> {
    let poly =
        parse_polynomial(&json.expr, ctx).map_err(|e| ConvertError(format!("`{}`: {}", json.expr, e)))?;
    if let Some((m, _)) = poly
        .terms()
        .find(|(m, _)| m.weighted_degree(ctx.t_index()) > json.order)
    {
        return err(format!(
            "`{}`: term {} exceeds the stated order {}",
            json.expr,
            m.to_expr_string(ctx),
            json.order
        ));
    }
    let rebuilt = Jet::from_terms(
        ctx,
        json.order,
        json.exact,
        poly.terms().map(|(m, c)| (m.clone(), c.clone())),
    );
    Ok(rebuilt)
}

pub fn jets_to_json(jets: &[Jet]) -> Vec<JetJson> {
    jets.iter().map(jet_to_json).collect()
}

pub fn jets_from_json(json: &[JetJson], ctx: &VarContext) -> Result<Vec<Jet>, ConvertError> {
    json.iter().map(|j| jet_from_json(j, ctx)).collect()
}

// ---------------------------------------------------------------------------
// scalars
// ---------------------------------------------------------------------------

pub fn valuation_to_json(v: &Valuation) -> ValuationJson {
    match v {
        Valuation::Finite(n) => ValuationJson::Finite(*n),
        Valuation::Infinite => ValuationJson::Infinite(String::from("inf")),
    }
}

pub fn valuations_to_json(vs: &[Valuation]) -> Vec<ValuationJson> {
    vs.iter().map(valuation_to_json).collect()
}

pub fn rational_from_str(s: &str) -> Result<Rational, ConvertError> {
    s.trim()
        .parse::<Rational>()
        .map_err(|e| ConvertError(format!("`{}` is not a rational: {}", s, e)))
}

/// Parses a single monomial (one term, coefficient 1) such as `x1^2*x2`.
pub fn monomial_from_str(s: &str, ctx: &VarContext) -> Result<Monomial, ConvertError> {
    let poly = parse_polynomial(s, ctx).map_err(|e| ConvertError(format!("`{}`: {}", s, e)))?;
    let mut terms = poly.terms();
    let Some((m, c)) = terms.next() else {
        return err(format!("`{}` is not a monomial (it is zero)", s));
    };
    if terms.next().is_some() || *c != num_traits::One::one() {
        return err(format!("`{}` is not a monomial with coefficient 1", s));
    }
    Ok(m.clone())
}

// ---------------------------------------------------------------------------
// certificates
// ---------------------------------------------------------------------------

pub fn membership_to_json(m: &IdealMembership, ctx: &VarContext) -> MembershipJson {
    MembershipJson {
        order: m.order,
        cofactors: m
            .cofactors
            .iter()
            .map(|(g, c)| CofactorJson {
                generator: g.to_expr_string(ctx),
                cofactor: jet_to_json(c),
            })
            .collect(),
    }
}

pub fn memberships_to_json(ms: &[IdealMembership], ctx: &VarContext) -> Vec<MembershipJson> {
    ms.iter().map(|m| membership_to_json(m, ctx)).collect()
}

pub fn membership_from_json(
    json: &MembershipJson,
    ctx: &VarContext,
) -> Result<IdealMembership, ConvertError> {
    let cofactors = json
        .cofactors
        .iter()
        .map(|c| {
            Ok((
                monomial_from_str(&c.generator, ctx)?,
                jet_from_json(&c.cofactor, ctx)?,
            ))
        })
        .collect::<Result<Vec<_>, ConvertError>>()?;
    Ok(IdealMembership {
        order: json.order,
        cofactors,
    })
}

// ---------------------------------------------------------------------------
// matrices
// ---------------------------------------------------------------------------

pub fn matrix_to_json(m: &JetMatrix) -> Vec<Vec<JetJson>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| jet_to_json(m.get(i, j))).collect())
        .collect()
}

/// Parses a matrix of recorded jets.
pub fn matrix_from_json(
    rows: &[Vec<JetJson>],
    ctx: &VarContext,
) -> Result<JetMatrix, ConvertError> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    if nrows == 0 || ncols == 0 {
        return err("matrix must be nonempty");
    }
    let mut entries = Vec::with_capacity(nrows * ncols);
    for row in rows {
        if row.len() != ncols {
            return err("matrix rows have unequal lengths");
        }
        for j in row {
            entries.push(jet_from_json(j, ctx)?);
        }
    }
    Ok(JetMatrix::new(nrows, ncols, entries))
}

/// Parses a row-major matrix of polynomial expressions.
pub fn matrix_from_exprs(
    rows: &[Vec<String>],
    ctx: &VarContext,
) -> Result<JetMatrix, ConvertError> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    if nrows == 0 || ncols == 0 {
        return err("matrix must be nonempty");
    }
    let mut entries = Vec::with_capacity(nrows * ncols);
    for row in rows {
        if row.len() != ncols {
            return err("matrix rows have unequal lengths");
        }
        for s in row {
            entries
                .push(parse_polynomial(s, ctx).map_err(|e| ConvertError(format!("`{}`: {}", s, e)))?);
        }
    }
    Ok(JetMatrix::new(nrows, ncols, entries))
}
