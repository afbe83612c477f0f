//! Specializing the parameter must commute with lifting: solving the
//! family once and plugging in `t = t₀` has to agree with specializing
//! the system first and lifting its fiber from scratch.

use jetlift_core::expr::parse_polynomial;
use jetlift_core::homotopy::{parametric_lift, specialize_system, verify_homotopy};
use jetlift_core::ideal::MonomialIdeal;
use jetlift_core::lift::tougeron_step;
use jetlift_core::system::PolySystem;
use jetlift_core::{Rational, VarContext};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORDER: u32 = 12;

fn family_system() -> (PolySystem, VarContext) {
    let ctx = VarContext::new(["x"], ["y"], Some("t")).unwrap();
    let sys = PolySystem::new(
        &ctx,
        vec![parse_polynomial("y^2 - 1 - x - t*x^2", &ctx).unwrap()],
        None,
    )
    .unwrap();
    (sys, ctx)
}

#[test]
fn specialization_commutes_with_lifting() {
    let (sys, ctx) = family_system();
    let base = ctx.without_y();
    let y0 = vec![parse_polynomial("1", &base).unwrap()];
    let ideal = MonomialIdeal::parse("x", &base).unwrap();
    let family = parametric_lift(&sys, &y0, &ideal, ORDER).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(0x407);
    for round in 0..5 {
        let t0 = Rational::new(
            BigInt::from(rng.gen_range(-6i64..=6)),
            BigInt::from(rng.gen_range(1i64..=9)),
        );
        // Route 1: specialize the solved family.
        let via_family = family.specialize(&t0);
        // Route 2: specialize the system, then lift the fiber.
        let fiber = specialize_system(&sys, &t0).unwrap();
        let fiber_base = fiber.ctx().without_y();
        let fiber_y0 = vec![parse_polynomial("1", &fiber_base).unwrap()];
        let fiber_ideal = MonomialIdeal::parse("x", &fiber_base).unwrap();
        let via_fiber = tougeron_step(&fiber, &fiber_y0, &fiber_ideal, ORDER).unwrap();

        for (a, b) in via_family.iter().zip(&via_fiber.y_solution) {
            let diff = a
                .truncate_to(ORDER)
                .sub(&b.truncate_to(ORDER))
                .expect("same base context");
            assert!(
                diff.is_zero(),
                "routes disagree at t = {} (round {}): {}",
                t0,
                round,
                diff.to_expr_string()
            );
        }
    }
}

#[test]
fn verifier_passes_the_lifted_family_between_its_endpoints() {
    let (sys, ctx) = family_system();
    let base = ctx.without_y();
    let y0 = vec![parse_polynomial("1", &base).unwrap()];
    let ideal = MonomialIdeal::parse("x", &base).unwrap();
    let family = parametric_lift(&sys, &y0, &ideal, ORDER).unwrap();

    let start = family.specialize(&Rational::from(BigInt::from(0)));
    let end = family.specialize(&Rational::from(BigInt::from(1)));
    let report = verify_homotopy(&sys, &family.family, &start, &end, &family.ideal, ORDER).unwrap();
    assert!(report.pass, "issues: {:?}", report.issues);
    assert_eq!(report.order, ORDER);
    // Every t-slice of the deformation carries a membership certificate.
    assert!(report
        .deformation_certificates
        .iter()
        .all(|per_component| !per_component.is_empty()));
}
