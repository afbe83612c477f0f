//! CSV serialization of sampled functions.
//!
//! Two columns named in a header line, `.` as the decimal separator,
//! one row per grid sample:
//!
//! ```csv
//! x,value
//! -0.5,0
//! -0.4998779296875,1.0000000000000002
//! ```
//!
//! Floats are printed with Rust's shortest-round-trip formatting, so a
//! written file parses back to bit-identical values.  The reader also
//! rebuilds the uniform grid from the first and last abscissa and checks
//! every `x` cell against it bit-for-bit, so a file whose first column is
//! not exactly the uniform grid it claims is rejected rather than
//! silently resampled.

use std::fmt::Write as _;

use jetlift_core::borel::{Grid1D, SampledFunction};

/// File names a `cutoff` run writes under `--csv`: the cutoff itself.
pub fn cutoff_csv_names(problem_name: &str) -> Vec<String> {
    vec![format!("{}.tau.csv", problem_name)]
}

/// File names a `borel` run writes under `--csv`: the assembled function
/// first, then one file per gluing cutoff in term order.
pub fn borel_csv_names(problem_name: &str, cutoffs: usize) -> Vec<String> {
    let mut names = Vec::with_capacity(cutoffs + 1);
    names.push(format!("{}.f.csv", problem_name));
    for i in 0..cutoffs {
        names.push(format!("{}.cutoff_{}.csv", problem_name, i));
    }
    names
}

/// Renders a sampled function to CSV text (with a trailing newline).
pub fn sampled_to_csv(f: &SampledFunction) -> String {
    let grid = f.grid();
    let mut out = String::with_capacity(16 + 24 * grid.len());
    out.push_str("x,value\n");
    for (i, v) in f.values().iter().enumerate() {
        let _ = writeln!(out, "{},{}", grid.x_at(i), v);
    }
    out
}

/// Parses CSV text produced by [`sampled_to_csv`] back into a sampled
/// function, validating the header, the column count, the finiteness of
/// every cell, and that the `x` column is exactly the uniform grid
/// spanned by its endpoints.
pub fn sampled_from_csv(text: &str) -> Result<SampledFunction, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some("x,value") => {}
        Some(other) => return Err(format!("expected header `x,value`, found `{}`", other)),
        None => return Err(String::from("empty CSV file")),
    }
    let mut xs: Vec<f64> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    for (row, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let (x_text, v_text) = line
            .split_once(',')
            .ok_or_else(|| format!("row {}: expected two comma-separated columns", row + 1))?;
        if v_text.contains(',') {
            return Err(format!("row {}: expected two columns, found more", row + 1));
        }
        let x: f64 = x_text
            .parse()
            .map_err(|e| format!("row {}: bad x `{}`: {}", row + 1, x_text, e))?;
        let v: f64 = v_text
            .parse()
            .map_err(|e| format!("row {}: bad value `{}`: {}", row + 1, v_text, e))?;
        if !x.is_finite() || !v.is_finite() {
            return Err(format!("row {}: non-finite entry", row + 1));
        }
        xs.push(x);
        values.push(v);
    }
    if xs.len() < 2 {
        return Err(format!("need at least 2 data rows, found {}", xs.len()));
    }
    let grid = Grid1D::new(xs[0], xs[xs.len() - 1], xs.len())
        .map_err(|e| format!("x column does not span a valid grid: {:?}", e))?;
    for (i, &x) in xs.iter().enumerate() {
        if x.to_bits() != grid.x_at(i).to_bits() {
            return Err(format!(
                "row {}: x = {} is not the uniform grid point {}",
                i + 1,
                x,
                grid.x_at(i)
            ));
        }
    }
    SampledFunction::new(grid, values).map_err(|e| format!("inconsistent sample count: {:?}", e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bitwise() {
        let grid = Grid1D::new(-0.2 + 1e-13, 0.2, 257).unwrap();
        let f = SampledFunction::from_fn(&grid, |x| (x * 37.0).sin() / 3.0 + 1.0 / 7.0);
        let text = sampled_to_csv(&f);
        let back = sampled_from_csv(&text).expect("round trip parses");
        assert_eq!(back.grid().len(), f.grid().len());
        assert_eq!(back.grid().a().to_bits(), f.grid().a().to_bits());
        assert_eq!(back.grid().b().to_bits(), f.grid().b().to_bits());
        for (a, b) in back.values().iter().zip(f.values()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn header_and_shape_are_enforced() {
        assert!(sampled_from_csv("").is_err());
        assert!(sampled_from_csv("x;value\n0,1\n1,2\n").is_err());
        assert!(sampled_from_csv("x,value\n0,1\n").is_err());
        assert!(sampled_from_csv("x,value\n0,1,9\n1,2\n").is_err());
        assert!(sampled_from_csv("x,value\n0,1\nbroken\n").is_err());
        assert!(sampled_from_csv("x,value\n0,1\n1,nan\n").is_err());
    }

    #[test]
    fn non_uniform_x_column_is_rejected() {
        let grid = Grid1D::new(0.0, 1.0, 9).unwrap();
        let f = SampledFunction::from_fn(&grid, |x| x + 1.0);
        let good = sampled_to_csv(&f);
        assert!(sampled_from_csv(&good).is_ok());
        // Nudge one abscissa off the uniform grid by one ulp.
        let x3 = grid.x_at(3);
        let nudged = f64::from_bits(x3.to_bits() + 1);
        let bad = good.replacen(&format!("{},", x3), &format!("{},", nudged), 1);
        assert_ne!(good, bad);
        let err = sampled_from_csv(&bad).unwrap_err();
        assert!(err.contains("uniform grid"), "{}", err);
    }
}
