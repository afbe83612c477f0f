//! Structural identities behind the Newton step, checked on random
//! systems: the Gram/adjugate package must satisfy `J·M = h·Id` as exact
//! polynomials, and a completed lift must satisfy `J(y₀)·Δy ≡ h²·z`
//! through the working order.

use jetlift_core::ideal::MonomialIdeal;
use jetlift_core::lift::tougeron_step;
use jetlift_core::system::PolySystem;
use jetlift_core::{Jet, Monomial, Rational, VarContext};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORDER: u32 = 8;

fn random_system(rng: &mut ChaCha8Rng) -> PolySystem {
    let n_x = rng.gen_range(1..=4usize);
    let n_y = rng.gen_range(1..=3usize);
    let x_names: Vec<String> = (1..=n_x).map(|i| format!("x{}", i)).collect();
    let y_names: Vec<String> = (1..=n_y).map(|i| format!("y{}", i)).collect();
    let ctx = VarContext::new(x_names, y_names, None).unwrap();
    let slots = n_x + n_y;
    let equations: Vec<Jet> = (0..n_y)
        .map(|_| {
            let n_terms = rng.gen_range(1..=3usize);
            Jet::from_terms(
                &ctx,
                ORDER,
                true,
                (0..n_terms).map(|_| {
                    let mut exps = vec![0u32; slots];
                    // Low-degree monomials mixing x and y variables.
                    for _ in 0..rng.gen_range(0..=3) {
                        let slot = rng.gen_range(0..slots);
                        exps[slot] += 1;
                    }
                    (
                        Monomial(exps),
                        Rational::from(BigInt::from(rng.gen_range(1..=5i64) * if rng.gen() { 1 } else { -1 })),
                    )
                }),
            )
        })
        .collect();
    PolySystem::new(&ctx, equations, None).unwrap()
}

#[test]
fn gram_adjugate_identity_holds_on_random_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e77);
    for round in 0..100 {
        let sys = random_system(&mut rng);
        let data = sys.jacobian_data().unwrap();
        let s = sys.num_equations();
        let prod = data.jacobian.polynomial_mul(&data.cokernel);
        for i in 0..s {
            for j in 0..s {
                let got = prod.get(i, j);
                let want = if i == j {
                    data.h.clone().with_order_at_least(got.order())
                } else {
                    Jet::zero(sys.ctx(), got.order())
                };
                let diff = got.sub(&want).unwrap();
                assert!(
                    diff.is_zero(),
                    "J·M ≠ h·Id at ({}, {}) in round {}: {}",
                    i,
                    j,
                    round,
                    diff.to_expr_string()
                );
            }
        }
    }
}

/// On a successful lift, the correction satisfies the exact Newton
/// relation `J(y₀)·Δy = h²·z` through the working order: the assembled
/// update really is the cokernel transport of the contracted fixed point.
#[test]
fn lift_correction_satisfies_the_key_identity() {
    let ctx = VarContext::new(["x"], ["y"], None).unwrap();
    let parse = |s: &str| jetlift_core::expr::parse_polynomial(s, &ctx).unwrap();
    let cases = [
        // (equation, start, ideal, order)
        ("y^2 - 1 - x", "1", "x", 16u32),
        ("x^2*y + y^2 - x^10", "0", "x^10", 24u32),
    ];
    for (eq, start, ideal_src, order) in cases {
        let sys = PolySystem::new(&ctx, vec![parse(eq)], None).unwrap();
        let y0 = vec![jetlift_core::expr::parse_polynomial(start, &ctx.without_y()).unwrap()];
        let ideal = MonomialIdeal::parse(ideal_src, &ctx.without_y()).unwrap();
        let sol = tougeron_step(&sys, &y0, &ideal, order).unwrap();

        // J(y₀): substitute the start into the symbolic Jacobian.
        let jac = sys.jacobian_data().unwrap().jacobian;
        let j00 = jac
            .get(0, 0)
            .with_order_at_least(order + 2 * sol.h_valuation)
            .substitute(&[y0[0]
                .clone()
                .with_order_at_least(order + 2 * sol.h_valuation)])
            .unwrap();

        let z_final = sol.z_trace.last().unwrap()[0]
            .clone()
            .with_order_at_least(order);
        let lhs = j00
            .mul(&sol.delta_y[0].clone().with_order_at_least(order))
            .unwrap()
            .truncate_to(order);
        let rhs = sol
            .h
            .mul(&sol.h)
            .unwrap()
            .with_order_at_least(order)
            .mul(&z_final)
            .unwrap()
            .truncate_to(order);
        let diff = lhs.sub(&rhs).unwrap();
        assert!(
            diff.is_zero(),
            "J(y₀)·Δy ≠ h²·z for {}: {}",
            eq,
            diff.to_expr_string()
        );
    }
}
