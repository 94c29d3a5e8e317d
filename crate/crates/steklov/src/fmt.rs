//! Numeric text formatting shared by CSV and JSON writers.

/// Formats a float with 17 significant digits in scientific notation.
///
/// 17 significant digits round-trip every f64 exactly, so serialized output
/// is byte-for-byte reproducible across runs.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for &x in &[
            0.0,
            1.8,
            7.2,
            -1.4,
            std::f64::consts::PI,
            1.0 / 3.0,
            -9.87654321e-13,
            6.02214076e23,
        ] {
            let s = fmt17(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "round trip failed for {s}");
        }
    }

    #[test]
    fn format_shape() {
        assert_eq!(fmt17(1.8), "1.8000000000000000e0");
        assert_eq!(fmt17(0.0), "0.0000000000000000e0");
    }
}
