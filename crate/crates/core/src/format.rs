//! Deterministic numeric formatting for every emitted artifact.
//!
//! All data values are written in scientific notation with 12 significant
//! digits, so repeat runs are byte-identical and diffs are meaningful.

/// Format a float as scientific notation with 12 significant digits.
/// Negative zero is normalized so `-0.0` and `0.0` emit identical bytes.
pub fn sci(x: f64) -> String {
    debug_assert!(x.is_finite(), "non-finite value in output: {x}");
    format!("{:.11e}", x + 0.0)
}

/// Scientific formatting for optional values; `None` maps to the explicit
/// undefined marker used by JSON artifacts.
pub fn sci_opt(x: Option<f64>) -> String {
    match x {
        Some(v) => sci(v),
        None => "null".to_owned(),
    }
}
