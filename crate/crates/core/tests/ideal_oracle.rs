//! Brute-force oracle for the monomial-ideal algebra: membership of every
//! monomial of bounded degree is decided independently by divisibility
//! enumeration, and the computed sums, products, intersections, and
//! powers must agree with it exactly.

use jetlift_core::ideal::{MembershipFailure, MonomialIdeal};
use jetlift_core::{Jet, Monomial, Rational, VarContext};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DEG_CAP: u32 = 8;
const PAIRS: usize = 200;

fn ctx3() -> VarContext {
    VarContext::new(["x1", "x2", "x3"], [] as [&str; 0], None).unwrap()
}

/// All monomials in 3 variables of total degree ≤ cap.
fn all_monomials(cap: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for a in 0..=cap {
        for b in 0..=(cap - a) {
            for c in 0..=(cap - a - b) {
                out.push(Monomial(vec![a, b, c]));
            }
        }
    }
    out
}

/// Oracle: a monomial lies in a monomial ideal iff some generator
/// divides it.  Decided directly against a raw generator list.
fn oracle_member(gens: &[Monomial], m: &Monomial) -> bool {
    gens.iter().any(|g| g.divides(m))
}

fn random_ideal(rng: &mut ChaCha8Rng, ctx: &VarContext) -> (Vec<Monomial>, MonomialIdeal) {
    let n_gens = rng.gen_range(1..=4);
    let gens: Vec<Monomial> = (0..n_gens)
        .map(|_| {
            Monomial(vec![
                rng.gen_range(0..=4u32),
                rng.gen_range(0..=4u32),
                rng.gen_range(0..=4u32),
            ])
        })
        .collect();
    let ideal = MonomialIdeal::new(ctx, gens.iter().cloned()).expect("valid generators");
    (gens, ideal)
}

#[test]
fn ideal_algebra_agrees_with_enumeration() {
    let ctx = ctx3();
    let probes = all_monomials(DEG_CAP);
    let mut rng = ChaCha8Rng::seed_from_u64(0x1dea1);
    for round in 0..PAIRS {
        let (gens_a, a) = random_ideal(&mut rng, &ctx);
        let (gens_b, b) = random_ideal(&mut rng, &ctx);

        let sum = a.sum(&b).unwrap();
        let product = a.product(&b).unwrap();
        let meet = a.intersection(&b).unwrap();
        let square = a.pow(2);
        let aa = a.product(&a).unwrap();

        // Product generators of the raw lists, for the product oracle.
        let gens_ab: Vec<Monomial> = gens_a
            .iter()
            .flat_map(|g| gens_b.iter().map(move |h| g.mul(h)))
            .collect();
        let gens_a2: Vec<Monomial> = gens_a
            .iter()
            .flat_map(|g| gens_a.iter().map(move |h| g.mul(h)))
            .collect();

        for m in &probes {
            let in_a = oracle_member(&gens_a, m);
            let in_b = oracle_member(&gens_b, m);
            assert_eq!(
                sum.divides_x_part(&m.0).is_some(),
                in_a || in_b,
                "sum disagrees at {:?} (round {})",
                m,
                round
            );
            assert_eq!(
                meet.divides_x_part(&m.0).is_some(),
                in_a && in_b,
                "intersection disagrees at {:?} (round {})",
                m,
                round
            );
            assert_eq!(
                product.divides_x_part(&m.0).is_some(),
                oracle_member(&gens_ab, m),
                "product disagrees at {:?} (round {})",
                m,
                round
            );
            assert_eq!(
                square.divides_x_part(&m.0).is_some(),
                oracle_member(&gens_a2, m),
                "square disagrees at {:?} (round {})",
                m,
                round
            );
            assert_eq!(
                square.divides_x_part(&m.0).is_some(),
                aa.divides_x_part(&m.0).is_some(),
                "pow(2) ≠ a·a at {:?} (round {})",
                m,
                round
            );
        }
    }
}

fn one() -> Rational {
    Rational::from(BigInt::from(1))
}

#[test]
fn membership_certificates_recombine_and_witnesses_are_genuine() {
    let ctx = ctx3();
    let mut rng = ChaCha8Rng::seed_from_u64(0xcafe);
    let order = DEG_CAP;
    for round in 0..60 {
        let (gens, ideal) = random_ideal(&mut rng, &ctx);
        if ideal.is_zero_ideal() {
            continue;
        }
        // A guaranteed member: Σ gᵢ·(random polynomial), truncated.
        // Generators beyond the working order contribute nothing at
        // this order and cannot even be represented as single terms.
        let mut member = Jet::zero(&ctx, order);
        for g in gens.iter().filter(|g| g.total_degree() <= order) {
            let coeff = Jet::from_terms(
                &ctx,
                order,
                true,
                (0..3).map(|_| {
                    (
                        Monomial(vec![
                            rng.gen_range(0..=2u32),
                            rng.gen_range(0..=2u32),
                            rng.gen_range(0..=2u32),
                        ]),
                        Rational::from(BigInt::from(rng.gen_range(-3i64..=3))),
                    )
                }),
            );
            let g_jet = Jet::from_terms(&ctx, order, true, [(g.clone(), one())]);
            member = member
                .add(&g_jet.mul(&coeff).unwrap().truncate_to(order).with_claimed_order(order))
                .unwrap();
        }
        let cert = ideal
            .contains_jet(&member)
            .unwrap_or_else(|e| panic!("member refused in round {}: {:?}", round, e));
        // The certificate must recombine to the original jet exactly.
        let rebuilt = cert.recombine(&ctx).unwrap();
        let diff = rebuilt
            .truncate_to(order)
            .sub(&member.truncate_to(order))
            .unwrap();
        assert!(diff.is_zero(), "recombination drifted in round {}", round);

        // Poison the jet with the least monomial outside the ideal.
        let outside = all_monomials(order)
            .into_iter()
            .find(|m| !oracle_member(&gens, m));
        let Some(outside) = outside else {
            continue; // unit ideal: everything is a member
        };
        let poisoned = member
            .add(&Jet::from_terms(&ctx, order, true, [(outside.clone(), one())]).with_claimed_order(order))
            .unwrap();
        match ideal.contains_jet(&poisoned) {
            Err(MembershipFailure::NotContained { witness }) => {
                assert!(
                    !oracle_member(&gens, &witness),
                    "witness {:?} actually lies in the ideal (round {})",
                    witness,
                    round
                );
            }
            other => panic!("poisoned jet accepted in round {}: {:?}", round, other),
        }
    }
}

#[test]
fn reduction_removes_exactly_the_ideal_part() {
    let ctx = ctx3();
    let mut rng = ChaCha8Rng::seed_from_u64(0xfeed);
    for _ in 0..40 {
        let (gens, ideal) = random_ideal(&mut rng, &ctx);
        let jet = Jet::from_terms(
            &ctx,
            DEG_CAP,
            true,
            (0..6).map(|_| {
                (
                    Monomial(vec![
                        rng.gen_range(0..=2u32),
                        rng.gen_range(0..=2u32),
                        rng.gen_range(0..=2u32),
                    ]),
                    Rational::from(BigInt::from(rng.gen_range(-5i64..=5))),
                )
            }),
        );
        let reduced = ideal.reduce_jet(&jet).unwrap();
        for (m, _) in reduced.terms() {
            assert!(!oracle_member(&gens, m), "ideal term {:?} survived", m);
        }
        let removed = jet.sub(&reduced).unwrap();
        if !removed.is_zero() {
            assert!(ideal.contains_jet(&removed).is_ok(), "removed part escaped");
        }
    }
}
