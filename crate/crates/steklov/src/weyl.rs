//! Asymptotic growth laws: power-law fits of eigenvalue sequences against
//! the predicted exponents and constants.
//!
//! Each family grows like `value_j ~ C * j^p` with `p = 1/(N-1)` for the
//! zero-trace limiting family and the fixed-normal-weight family, and
//! `p = 3/(N-1)` for the zero-normal-derivative limiting family and the
//! fixed-trace-weight family. The constants carry the boundary measure and
//! the unit-ball volume; the parameterized families' constants are exactly
//! 3/4 of their limiting counterparts.

use crate::error::{Result, SteklovError};
use crate::param::ProblemKind;

/// Gamma function at half-integer arguments: `gamma_half(k)` is
/// `Gamma(k/2)` for integer `k >= 1`, by the recursion
/// `Gamma(z+1) = z Gamma(z)` from `Gamma(1/2) = sqrt(pi)` and
/// `Gamma(1) = 1`.
pub fn gamma_half(k: u32) -> f64 {
    assert!(k >= 1, "gamma_half needs k >= 1");
    let mut value = if k % 2 == 1 {
        std::f64::consts::PI.sqrt()
    } else {
        1.0
    };
    let mut arg = if k % 2 == 1 { 1 } else { 2 }; // numerator of current z in halves
    while arg < k {
        value *= arg as f64 / 2.0;
        arg += 2;
    }
    value
}

/// Volume of the unit ball in dimension `n` via the Gamma-function
/// formula `pi^(n/2) / Gamma(n/2 + 1)`.
pub fn unit_ball_volume(n: u32) -> f64 {
    std::f64::consts::PI.powf(n as f64 / 2.0) / gamma_half(n + 2)
}

/// Surface measure of the unit sphere bounding the ball in dimension `n`:
/// `n * omega_n`.
pub fn unit_sphere_measure(n: u32) -> f64 {
    n as f64 * unit_ball_volume(n)
}

/// Predicted leading-order law `value_j ~ constant * j^exponent` for one
/// family on a domain with the given boundary measure.
#[derive(Debug, Clone, Copy)]
pub struct WeylPrediction {
    pub kind: ProblemKind,
    pub dim: u32,
    pub exponent: f64,
    /// Coefficient of `j^exponent`, boundary measure absorbed.
    pub constant: f64,
    pub boundary_measure: f64,
}

/// Fills the predicted exponent and constant for a family in dimension
/// `n >= 2` on a domain of the given boundary measure.
///
/// The dimension-only constants are `4 pi / omega_(n-1)^(1/(n-1))` for the
/// zero-trace family and `16 pi^3 / omega_(n-1)^(3/(n-1))` for the
/// zero-normal family (times 3/4 for the respective parameterized
/// families); the domain enters through `(j / |boundary|)^exponent`, so the
/// stored coefficient divides by `boundary_measure^exponent`.
pub fn predicted(kind: ProblemKind, n: u32, boundary_measure: f64) -> Result<WeylPrediction> {
    if n < 2 {
        return Err(SteklovError::InvalidParameter(
            "asymptotic laws need dimension >= 2".into(),
        ));
    }
    if !(boundary_measure > 0.0) {
        return Err(SteklovError::InvalidParameter(
            "boundary measure must be positive".into(),
        ));
    }
    let pi = std::f64::consts::PI;
    let nm1 = (n - 1) as f64;
    let omega_nm1 = unit_ball_volume(n - 1);
    let (exponent, base) = match kind {
        ProblemKind::Dbs => (1.0 / nm1, 4.0 * pi / omega_nm1.powf(1.0 / nm1)),
        ProblemKind::BsM => (1.0 / nm1, 3.0 * pi / omega_nm1.powf(1.0 / nm1)),
        ProblemKind::Nbs => (3.0 / nm1, 16.0 * pi.powi(3) / omega_nm1.powf(3.0 / nm1)),
        ProblemKind::BsL => (3.0 / nm1, 12.0 * pi.powi(3) / omega_nm1.powf(3.0 / nm1)),
    };
    Ok(WeylPrediction {
        kind,
        dim: n,
        exponent,
        constant: base / boundary_measure.powf(exponent),
        boundary_measure,
    })
}

/// Closed-form constant of the unit-ball law `value_j ~ c * j^exponent`:
/// `2^((n-2)/(n-1)) ((n-1)!)^(1/(n-1))` for the zero-trace family and
/// `2^((n-4)/(n-1)) ((n-1)!)^(3/(n-1))` for the zero-normal family, times
/// 3/4 for the parameterized families.
pub fn ball_constant(kind: ProblemKind, n: u32) -> Result<f64> {
    if n < 2 {
        return Err(SteklovError::InvalidParameter(
            "asymptotic laws need dimension >= 2".into(),
        ));
    }
    let nm1 = (n - 1) as f64;
    let fact: f64 = (1..n).map(|k| k as f64).product();
    let c = match kind {
        ProblemKind::Dbs | ProblemKind::BsM => {
            2f64.powf((n as f64 - 2.0) / nm1) * fact.powf(1.0 / nm1)
        }
        ProblemKind::Nbs | ProblemKind::BsL => {
            2f64.powf((n as f64 - 4.0) / nm1) * fact.powf(3.0 / nm1)
        }
    };
    Ok(match kind {
        ProblemKind::BsM | ProblemKind::BsL => 0.75 * c,
        _ => c,
    })
}

/// Least-squares power-law fit `value_j ~ constant * j^exponent`.
#[derive(Debug, Clone, Copy)]
pub struct PowerLawFit {
    pub constant: f64,
    pub exponent: f64,
    /// Root-mean-square residual of the log-log regression.
    pub residual: f64,
    /// 1-based window of indices used.
    pub window: (usize, usize),
}

/// Fits `log(value_j) = log(constant) + exponent * log(j)` by least
/// squares over `j` in `[J/2, J]` (1-based), suppressing lower-order
/// terms by discarding the first half.
///
/// Preconditions: `j_max >= 100` and at least `j_max` values; every value
/// in the window must be strictly positive (shift the spectrum or reduce
/// the window otherwise).
pub fn fit_power_law(values: &[f64], j_max: usize) -> Result<PowerLawFit> {
    if j_max < 100 {
        return Err(SteklovError::ConfigurationError(
            "power-law fits need J >= 100".into(),
        ));
    }
    if values.len() < j_max {
        return Err(SteklovError::ConfigurationError(format!(
            "fit needs {} values, got {}",
            j_max,
            values.len()
        )));
    }
    let lo = j_max / 2;
    let window: Vec<(f64, f64)> = (lo..=j_max)
        .map(|j| {
            let v = values[j - 1];
            if v <= 0.0 {
                Err(SteklovError::ConfigurationError(format!(
                    "nonpositive value {v} at index {j} in the fit window; \
                     shift the sequence or reduce the window"
                )))
            } else {
                Ok(((j as f64).ln(), v.ln()))
            }
        })
        .collect::<Result<_>>()?;
    let m = window.len() as f64;
    let xm: f64 = window.iter().map(|p| p.0).sum::<f64>() / m;
    let ym: f64 = window.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = window.iter().map(|p| (p.0 - xm) * (p.0 - xm)).sum();
    let sxy: f64 = window.iter().map(|p| (p.0 - xm) * (p.1 - ym)).sum();
    if sxx < 1e-12 {
        return Err(SteklovError::ConfigurationError(
            "degenerate fit window".into(),
        ));
    }
    let exponent = sxy / sxx;
    let intercept = ym - exponent * xm;
    let ss: f64 = window
        .iter()
        .map(|&(x, y)| {
            let r = y - (intercept + exponent * x);
            r * r
        })
        .sum();
    Ok(PowerLawFit {
        constant: intercept.exp(),
        exponent,
        residual: (ss / m).sqrt(),
        window: (lo, j_max),
    })
}

/// Side-by-side report of a fit against a prediction.
#[derive(Debug, Clone, Copy)]
pub struct WeylReport {
    pub fit: PowerLawFit,
    pub predicted_constant: f64,
    pub predicted_exponent: f64,
    pub exponent_rel_err: f64,
    pub constant_rel_err: f64,
    pub tol_exponent: f64,
    pub tol_constant: f64,
    pub pass: bool,
}

/// Compares a fit to predicted `(constant, exponent)` at the given
/// relative tolerances.
pub fn compare(
    fit: &PowerLawFit,
    predicted_constant: f64,
    predicted_exponent: f64,
    tol_exponent: f64,
    tol_constant: f64,
) -> WeylReport {
    let exponent_rel_err = (fit.exponent - predicted_exponent).abs() / predicted_exponent.abs();
    let constant_rel_err = (fit.constant - predicted_constant).abs() / predicted_constant.abs();
    WeylReport {
        fit: *fit,
        predicted_constant,
        predicted_exponent,
        exponent_rel_err,
        constant_rel_err,
        tol_exponent,
        tol_constant,
        pass: exponent_rel_err <= tol_exponent && constant_rel_err <= tol_constant,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::ball_spectrum_first;

    #[test]
    fn ball_volumes_match_known_values() {
        let pi = std::f64::consts::PI;
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-14);
        assert!((unit_ball_volume(2) - pi).abs() < 1e-14);
        assert!((unit_ball_volume(3) - 4.0 * pi / 3.0).abs() < 1e-14);
        assert!((unit_ball_volume(4) - pi * pi / 2.0).abs() < 1e-13);
        assert!((unit_sphere_measure(2) - 2.0 * pi).abs() < 1e-14);
    }

    #[test]
    fn volume_product_identity_holds_through_dimension_eight() {
        let pi = std::f64::consts::PI;
        for n in 2..=8u32 {
            let lhs = unit_ball_volume(n) * unit_ball_volume(n - 1);
            let fact: f64 = (1..=n).map(|k| k as f64).product();
            let rhs = 2f64.powi(n as i32) * pi.powi(n as i32 - 1) / fact;
            assert!(
                (lhs - rhs).abs() <= 1e-12 * rhs.abs(),
                "identity fails at n = {n}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn circle_constants_take_known_values() {
        let two_pi = 2.0 * std::f64::consts::PI;
        let dbs = predicted(ProblemKind::Dbs, 2, two_pi).unwrap();
        assert!((dbs.exponent - 1.0).abs() < 1e-14);
        assert!((dbs.constant - 1.0).abs() < 1e-14);
        let nbs = predicted(ProblemKind::Nbs, 2, two_pi).unwrap();
        assert!((nbs.exponent - 3.0).abs() < 1e-14);
        assert!((nbs.constant - 0.25).abs() < 1e-14);
        let bsm = predicted(ProblemKind::BsM, 2, two_pi).unwrap();
        assert!((bsm.constant - 0.75).abs() < 1e-14);
        let bsl = predicted(ProblemKind::BsL, 2, two_pi).unwrap();
        assert!((bsl.constant - 3.0 / 16.0).abs() < 1e-14);
    }

    #[test]
    fn ball_closed_forms_match_general_constants_on_the_sphere() {
        // The sphere bounding the unit ball has measure n * omega_n; the
        // closed-form ball constants must equal the general prediction
        // evaluated there.
        for n in 2..=3u32 {
            for kind in [
                ProblemKind::Dbs,
                ProblemKind::Nbs,
                ProblemKind::BsM,
                ProblemKind::BsL,
            ] {
                let general = predicted(kind, n, unit_sphere_measure(n)).unwrap();
                let closed = ball_constant(kind, n).unwrap();
                assert!(
                    (general.constant - closed).abs() <= 1e-12 * closed,
                    "{} n={n}: general {} vs closed {closed}",
                    kind.name(),
                    general.constant
                );
            }
        }
    }

    #[test]
    fn synthetic_quadratic_fits_exactly() {
        let values: Vec<f64> = (1..=200).map(|j| 5.0 * (j as f64).powi(2)).collect();
        let fit = fit_power_law(&values, 200).unwrap();
        assert!((fit.exponent - 2.0).abs() < 1e-12);
        assert!((fit.constant - 5.0).abs() < 1e-10);
        assert!(fit.residual < 1e-13);
        assert_eq!(fit.window, (100, 200));
    }

    #[test]
    fn fit_rejects_short_input_and_nonpositive_windows() {
        let values: Vec<f64> = (1..=200).map(|j| j as f64).collect();
        assert!(fit_power_law(&values, 99).is_err());
        assert!(fit_power_law(&values[..150], 200).is_err());
        let mut with_zero = values.clone();
        with_zero[120] = 0.0;
        assert!(fit_power_law(&with_zero, 200).is_err());
    }

    #[test]
    fn disk_limiting_spectra_fit_their_laws() {
        let dbs = ball_spectrum_first(ProblemKind::Dbs, 2, 0.0, 0.0, 2000).unwrap();
        let fit = fit_power_law(&dbs.values, 2000).unwrap();
        let report = compare(&fit, 1.0, 1.0, 0.005, 0.02);
        assert!(report.pass, "{report:?}");

        let nbs = ball_spectrum_first(ProblemKind::Nbs, 2, 0.0, 0.0, 2000).unwrap();
        let fit = fit_power_law(&nbs.values, 2000).unwrap();
        let report = compare(&fit, 0.25, 3.0, 0.005, 0.02);
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn parameterized_constants_appear_as_three_quarters() {
        let bsm = ball_spectrum_first(ProblemKind::BsM, 2, 0.0, -10.0, 2000).unwrap();
        let fit = fit_power_law(&bsm.values, 2000).unwrap();
        let report = compare(&fit, 0.75, 1.0, 0.005, 0.05);
        assert!(report.pass, "{report:?}");

        let bsl = ball_spectrum_first(ProblemKind::BsL, 2, 0.0, -10.0, 2000).unwrap();
        let fit = fit_power_law(&bsl.values, 2000).unwrap();
        let report = compare(&fit, 3.0 / 16.0, 3.0, 0.005, 0.05);
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn wrong_prediction_fails_compare() {
        let values: Vec<f64> = (1..=300).map(|j| 2.0 * (j as f64)).collect();
        let fit = fit_power_law(&values, 300).unwrap();
        assert!(!compare(&fit, 2.0, 2.0, 0.005, 0.02).pass);
        assert!(!compare(&fit, 4.0, 1.0, 0.005, 0.02).pass);
        assert!(compare(&fit, 2.0, 1.0, 0.005, 0.02).pass);
    }
}
