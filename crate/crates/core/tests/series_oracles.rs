//! Independent series oracles for the lifting engine: coefficients are
//! recomputed by undetermined-coefficient recursions that share no code
//! with the engine, then compared term by term.

use jetlift_core::expr::parse_polynomial;
use jetlift_core::ideal::MonomialIdeal;
use jetlift_core::lift::{tougeron_step, ContractionCause, LiftError};
use jetlift_core::system::PolySystem;
use jetlift_core::{Jet, Monomial, Rational, VarContext};
use num_bigint::BigInt;
use num_traits::Zero;

fn int(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// Undetermined coefficients for `y² = 1 + x`, `y(0) = 1`: with
/// `y = Σ c_k x^k`, comparing coefficients of `x^k` gives
/// `2·c_0·c_k = [x^k](1 + x) − Σ_{i=1}^{k−1} c_i·c_{k−i}`.
fn sqrt_series(order: usize) -> Vec<Rational> {
    let mut c = vec![Rational::zero(); order + 1];
    c[0] = int(1);
    for k in 1..=order {
        let target = if k == 1 { int(1) } else { int(0) };
        let mut conv = Rational::zero();
        for i in 1..k {
            conv += c[i].clone() * c[k - i].clone();
        }
        c[k] = (target - conv) / int(2);
    }
    c
}

#[test]
fn square_root_lift_agrees_with_undetermined_coefficients() {
    let ctx = VarContext::new(["x"], ["y"], None).unwrap();
    let sys = PolySystem::new(
        &ctx,
        vec![parse_polynomial("y^2 - 1 - x", &ctx).unwrap()],
        None,
    )
    .unwrap();
    let base = ctx.without_y();
    let y0 = vec![parse_polynomial("1", &base).unwrap()];
    let ideal = MonomialIdeal::parse("x", &base).unwrap();
    let sol = tougeron_step(&sys, &y0, &ideal, 16).unwrap();

    let oracle = sqrt_series(16);
    let y = &sol.y_solution[0];
    for (k, expected) in oracle.iter().enumerate() {
        let got = y.coefficient(&Monomial(vec![k as u32]));
        assert_eq!(
            got, *expected,
            "coefficient of x^{} disagrees with the recursion",
            k
        );
    }
    // Spot-check the recursion itself against the closed form
    // binomial(1/2, k) at a few indices, so the oracle is anchored too.
    assert_eq!(oracle[1], Rational::new(BigInt::from(1), BigInt::from(2)));
    assert_eq!(oracle[2], Rational::new(BigInt::from(-1), BigInt::from(8)));
    assert_eq!(oracle[3], Rational::new(BigInt::from(1), BigInt::from(16)));
    assert_eq!(
        oracle[8],
        Rational::new(BigInt::from(-429), BigInt::from(32768))
    );
}

/// Undetermined coefficients for `x²·y + y² = x¹⁰`, `y ∈ (x⁸)`: writing
/// `y = Σ_{k≥8} c_k x^k` and comparing coefficients of `x^m`:
/// `c_{m−2} + Σ_{i+j=m} c_i c_j = [m = 10]`.
fn cusp_series(order: usize) -> Vec<Rational> {
    let mut c = vec![Rational::zero(); order + 1];
    // Coefficients below x^8 vanish; solve upward from m = 10.
    for m in 10..=order + 2 {
        let mut conv = Rational::zero();
        for i in 8..=m.saturating_sub(8) {
            let j = m - i;
            if j <= order {
                conv += c[i].clone() * c[j].clone();
            }
        }
        let target = if m == 10 { int(1) } else { int(0) };
        if m - 2 <= order {
            c[m - 2] = target - conv;
        }
    }
    c
}

#[test]
fn cusp_lift_agrees_with_undetermined_coefficients() {
    let ctx = VarContext::new(["x"], ["y"], None).unwrap();
    let sys = PolySystem::new(
        &ctx,
        vec![parse_polynomial("x^2*y + y^2 - x^10", &ctx).unwrap()],
        None,
    )
    .unwrap();
    let base = ctx.without_y();
    let y0 = vec![parse_polynomial("0", &base).unwrap()];
    let ideal = MonomialIdeal::parse("x^10", &base).unwrap();
    let sol = tougeron_step(&sys, &y0, &ideal, 24).unwrap();

    let oracle = cusp_series(24);
    for (k, expected) in oracle.iter().enumerate() {
        let got = sol.y_solution[0].coefficient(&Monomial(vec![k as u32]));
        assert_eq!(got, *expected, "coefficient of x^{} disagrees", k);
    }
    // Anchor the recursion: y = x⁸ − x¹⁴ + 2x²⁰ − … satisfies the
    // equation through x²⁴ by direct expansion.
    assert_eq!(oracle[8], int(1));
    assert_eq!(oracle[14], int(-1));
    assert_eq!(oracle[20], int(2));
    assert!(oracle[9].is_zero() && oracle[15].is_zero());
}

#[test]
fn undersized_data_is_refused_not_extrapolated() {
    let ctx = VarContext::new(["x"], ["y"], None).unwrap();
    let sys = PolySystem::new(
        &ctx,
        vec![parse_polynomial("x^2*y - x^5", &ctx).unwrap()],
        None,
    )
    .unwrap();
    let base = ctx.without_y();
    let y0 = vec![parse_polynomial("0", &base).unwrap()];
    let ideal = MonomialIdeal::parse("x^5", &base).unwrap();
    // h = x², so generators must reach degree 2·2 + 1 = 9; x⁵ cannot.
    match tougeron_step(&sys, &y0, &ideal, 12) {
        Err(LiftError::ContractionViolated { generator, cause }) => {
            assert_eq!(generator, Monomial(vec![5]));
            assert_eq!(cause, ContractionCause::OrderTooLow { found: 5, needed: 9 });
        }
        other => panic!("expected a contraction refusal, got {:?}", other),
    }
}
