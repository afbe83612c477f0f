//! Full-scale numerical checks for the cutoff and gluing machinery, at
//! the grid sizes the batch pipeline uses.

use jetlift_core::borel::{
    assemble_borel, build_cutoff, check_derivative_bounds, check_flat_bounds, pointwise_sum,
    Grid1D, SampledFunction, RATIO_THRESHOLD,
};

#[test]
fn canonical_cutoff_certifies_derivative_scaling_at_scale() {
    let grid = Grid1D::new(-1.0, 1.0, 4097).unwrap();
    let widths = [0.15, 0.1, 0.05];
    let tau = build_cutoff(&grid, -0.2, 0.2, &widths).unwrap();
    let report = check_derivative_bounds(&tau, &widths, 2, RATIO_THRESHOLD);
    assert!(report.pass, "ratios: {:?}", report.ratios);
    for r in &report.ratios {
        assert!(
            r.ratio <= RATIO_THRESHOLD,
            "ratio_{} = {} exceeds {}",
            r.k,
            r.ratio,
            RATIO_THRESHOLD
        );
        // The classical scaling predicts ≈ 0.75 here; drifting far from
        // it would mean the discretization is off even if under the
        // threshold.
        assert!((r.ratio - 0.75).abs() < 0.2, "ratio_{} = {}", r.k, r.ratio);
    }
}

fn monomial_terms(grid: &Grid1D, top: u32) -> Vec<(u32, SampledFunction)> {
    (0..=top)
        .map(|j| {
            (
                j,
                SampledFunction::from_fn(grid, move |x| libm::pow(x, j as f64) * (1.0 - x * x)),
            )
        })
        .collect()
}

#[test]
fn gluing_achieves_certified_flatness_orders_at_scale() {
    let grid = Grid1D::new(-1.0, 1.0, 16385).unwrap();
    let terms = monomial_terms(&grid, 5);
    let asm = assemble_borel(&terms, 0.0, 1).unwrap();

    for c in &asm.constraint_checks {
        assert!(c.value < c.budget, "term {} k {} over budget", c.term, c.k);
    }

    let gs: Vec<&SampledFunction> = terms.iter().map(|(_, g)| g).collect();
    // Remainder against each partial sum vanishes to the next order.
    for n in 3..=5usize {
        let partial = pointwise_sum(&gs[..=n]).unwrap();
        let rem = SampledFunction::new(
            grid.clone(),
            asm.f
                .values()
                .iter()
                .zip(partial.values())
                .map(|(a, b)| a - b)
                .collect(),
        )
        .unwrap();
        let flat = check_flat_bounds(&rem, 0.0, n as u32 + 1, 0).unwrap();
        assert!(
            flat.pass,
            "N = {}: slope {} below {}",
            n,
            flat.slope,
            flat.needed
        );
    }

    // On the common plateau the assembly reproduces the full partial sum
    // bit-for-bit.
    let full = pointwise_sum(&gs).unwrap();
    let (lo, hi) = asm.plateau;
    assert!(
        hi - lo > 20.0 * grid.step(),
        "plateau degenerate: ({}, {})",
        lo,
        hi
    );
    let mut compared = 0usize;
    for i in 0..grid.len() {
        let x = grid.x_at(i);
        if x >= lo && x <= hi {
            assert_eq!(asm.f.values()[i], full.values()[i], "drift at x = {}", x);
            compared += 1;
        }
    }
    assert!(compared > 20, "only {} plateau samples", compared);
}
