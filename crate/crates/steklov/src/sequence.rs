//! Coefficient sequences, weighted summability tests, and trace-space
//! norms.
//!
//! Boundary data expands into eigenfunction coefficient sequences; whether
//! the data belongs to a trace space is a weighted square-summability
//! condition on those coefficients. Finitely many computed coefficients
//! can never decide summability, so a sequence that truncates an infinite
//! expansion carries a power-law tail model (declared directly, or fitted
//! over the last third of the entries) and the verdict combines the finite
//! partial sum with the tail's comparison exponent. A sequence without a
//! model is complete as given — a finite sum, always a member.

use crate::error::{Result, SteklovError};
use crate::fmt::fmt17;
use crate::param::ProblemKind;
use crate::spectrum::Spectrum;
use std::io::{BufRead, Write};

/// A finite, 1-indexed coefficient sequence with an optional power-decay
/// tail model `|s_j| ~ C j^p` for extrapolating summability verdicts.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSequence {
    pub entries: Vec<f64>,
    pub declared_length: usize,
    /// Decay exponent `p` (negative for decaying sequences).
    pub tail_model: Option<f64>,
}

impl CoeffSequence {
    pub fn new(entries: Vec<f64>) -> Self {
        let declared_length = entries.len();
        CoeffSequence {
            entries,
            declared_length,
            tail_model: None,
        }
    }

    pub fn with_tail_model(mut self, p: f64) -> Self {
        self.tail_model = Some(p);
        self
    }

    /// Declares the fitted tail as the sequence's model, marking it as a
    /// truncation of an unknown infinite expansion. Sequences without a
    /// model are treated as complete (finitely supported).
    pub fn with_fitted_tail(mut self) -> Self {
        self.tail_model = self.fit_tail_model();
        self
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Fits `log |s_j| = log C + p log j` over the last third of the
    /// entries (skipping zeros); `None` when fewer than two usable points
    /// remain, which callers treat as a finitely-supported tail.
    pub fn fit_tail_model(&self) -> Option<f64> {
        let n = self.entries.len();
        let lo = n - n / 3;
        let pts: Vec<(f64, f64)> = (lo..n)
            .filter(|&i| self.entries[i] != 0.0)
            .map(|i| ((i as f64 + 1.0).ln(), self.entries[i].abs().ln()))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let m = pts.len() as f64;
        let xm = pts.iter().map(|p| p.0).sum::<f64>() / m;
        let ym = pts.iter().map(|p| p.1).sum::<f64>() / m;
        let sxx: f64 = pts.iter().map(|p| (p.0 - xm) * (p.0 - xm)).sum();
        if sxx < 1e-12 {
            return None;
        }
        let sxy: f64 = pts.iter().map(|p| (p.0 - xm) * (p.1 - ym)).sum();
        Some(sxy / sxx)
    }

    /// Writes the sequence as CSV with header `j,s_j`, 1-based indices.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "j,s_j")?;
        for (i, v) in self.entries.iter().enumerate() {
            writeln!(out, "{},{}", i + 1, fmt17(*v))?;
        }
        Ok(())
    }

    /// Reads a sequence from CSV with header `j,s_j` and contiguous
    /// 1-based indices.
    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| SteklovError::ConfigurationError("empty sequence file".into()))?
            .map_err(|e| SteklovError::ConfigurationError(format!("read error: {e}")))?;
        if header.trim() != "j,s_j" {
            return Err(SteklovError::ConfigurationError(format!(
                "expected header 'j,s_j', found '{}'",
                header.trim()
            )));
        }
        let mut entries = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line =
                line.map_err(|e| SteklovError::ConfigurationError(format!("read error: {e}")))?;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let bad = || {
                SteklovError::ConfigurationError(format!(
                    "bad sequence row {} ('{t}')",
                    lineno + 2
                ))
            };
            let (js, vs) = t.split_once(',').ok_or_else(bad)?;
            let j: i64 = js.trim().parse().map_err(|_| bad())?;
            let v: f64 = vs.trim().parse().map_err(|_| bad())?;
            if j != entries.len() as i64 + 1 {
                return Err(SteklovError::ConfigurationError(format!(
                    "sequence indices must be 1-based and contiguous; found {j} at row {}",
                    lineno + 2
                )));
            }
            entries.push(v);
        }
        Ok(CoeffSequence::new(entries))
    }

    /// Serializes the entries as a JSON array.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.entries
                .iter()
                .map(|&v| {
                    serde_json::Number::from_f64(v)
                        .map(serde_json::Value::Number)
                        .unwrap_or(serde_json::Value::Null)
                })
                .collect(),
        )
    }

    /// Reads a sequence from a JSON array of numbers.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let arr = value.as_array().ok_or_else(|| {
            SteklovError::ConfigurationError("sequence JSON must be an array".into())
        })?;
        let entries = arr
            .iter()
            .map(|v| {
                v.as_f64().ok_or_else(|| {
                    SteklovError::ConfigurationError(
                        "sequence JSON entries must be numbers".into(),
                    )
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(CoeffSequence::new(entries))
    }
}

/// Verdict of a weighted square-summability test.
#[derive(Debug, Clone, Copy)]
pub struct Membership {
    pub member: bool,
    /// Partial sum of `(j^exponent s_j)^2` over the stored entries.
    pub partial_sum: f64,
    /// Tail decay exponent used for the verdict, if any was available.
    pub tail_exponent: Option<f64>,
}

/// Tests whether `(j^exponent s_j)` is square-summable.
///
/// The intended exponents are `3/(2(N-1))` for the order-3/2 trace space
/// and `1/(2(N-1))` for the order-1/2 space. With a tail model
/// `|s_j| ~ C j^p` the weighted squares behave like `j^(2(exponent+p))`,
/// summable iff `2(exponent + p) < -1`. A sequence carrying no tail model
/// is a complete finite sequence — its sum converges, so it is a member;
/// callers holding a truncation of an infinite expansion must declare a
/// model (e.g. [`CoeffSequence::with_fitted_tail`]) to get an asymptotic
/// verdict.
pub fn seq_membership(s: &CoeffSequence, exponent: f64) -> Result<Membership> {
    if !exponent.is_finite() || exponent <= 0.0 {
        return Err(SteklovError::InvalidParameter(format!(
            "membership exponent must be positive and finite, got {exponent}"
        )));
    }
    let partial_sum = s
        .entries
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let w = (i as f64 + 1.0).powf(exponent) * v;
            w * w
        })
        .sum();
    let tail_exponent = s.tail_model;
    let member = match tail_exponent {
        Some(p) => 2.0 * (exponent + p) < -1.0,
        None => true,
    };
    Ok(Membership {
        member,
        partial_sum,
        tail_exponent,
    })
}

/// Which trace-space norm to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceSpace {
    /// Order-3/2 space over a fixed-trace-weight spectrum: low modes
    /// (below the first positive eigenvalue) enter unweighted, the rest
    /// weighted by their eigenvalue.
    S32,
    /// Order-1/2 space over a fixed-normal-weight spectrum: every mode
    /// weighted by its eigenvalue.
    S12,
}

/// Squared trace-space norm of a coefficient sequence against a spectrum.
///
/// `S32` needs a fixed-trace-weight spectrum with a recorded first
/// positive index and returns
/// `sum_(j < j0) s_j^2 + sum_(j >= j0) value_j s_j^2`; `S12` needs a
/// fixed-normal-weight spectrum and returns `sum_j value_j s_j^2`.
pub fn s_norm(coeffs: &CoeffSequence, spectrum: &Spectrum, space: SequenceSpace) -> Result<f64> {
    if coeffs.len() > spectrum.len() {
        return Err(SteklovError::ConfigurationError(format!(
            "{} coefficients against {} eigenvalues",
            coeffs.len(),
            spectrum.len()
        )));
    }
    match space {
        SequenceSpace::S32 => {
            if spectrum.kind != ProblemKind::BsL {
                return Err(SteklovError::ConfigurationError(
                    "the order-3/2 norm needs a fixed-trace-weight spectrum".into(),
                ));
            }
            let j0 = spectrum.j0.ok_or_else(|| {
                SteklovError::ConfigurationError(
                    "the order-3/2 norm needs the first-positive index".into(),
                )
            })?;
            Ok(coeffs
                .entries
                .iter()
                .enumerate()
                .map(|(i, &a)| {
                    let j = i + 1;
                    if j < j0 {
                        a * a
                    } else {
                        spectrum.values[i] * a * a
                    }
                })
                .sum())
        }
        SequenceSpace::S12 => {
            if spectrum.kind != ProblemKind::BsM {
                return Err(SteklovError::ConfigurationError(
                    "the order-1/2 norm needs a fixed-normal-weight spectrum".into(),
                ));
            }
            Ok(coeffs
                .entries
                .iter()
                .enumerate()
                .map(|(i, &b)| spectrum.values[i] * b * b)
                .sum())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn power_seq(n: usize, c: f64, p: f64) -> CoeffSequence {
        CoeffSequence::new((1..=n).map(|j| c * (j as f64).powf(p)).collect())
    }

    #[test]
    fn tail_fit_recovers_exact_power_laws() {
        let s = power_seq(300, 2.0, -2.1);
        let p = s.fit_tail_model().unwrap();
        assert!((p + 2.1).abs() < 1e-10, "fitted {p}");
        let s = power_seq(300, 0.5, -1.0);
        assert!((s.fit_tail_model().unwrap() + 1.0).abs() < 1e-10);
    }

    #[test]
    fn membership_follows_the_comparison_rule() {
        // Decay -2.1 against weight 3/2: 2(1.5 - 2.1) = -1.2 < -1, member.
        let m = seq_membership(&power_seq(300, 1.0, -2.1).with_fitted_tail(), 1.5).unwrap();
        assert!(m.member);
        assert!(m.partial_sum > 0.0);
        // Decay -1 against weight 3/2: 2(1.5 - 1) = 1 > -1, not a member.
        let m = seq_membership(&power_seq(300, 1.0, -1.0).with_fitted_tail(), 1.5).unwrap();
        assert!(!m.member);
        // The same decay passes the weaker order-1/2 weight in dimension 4:
        // 2(1/6 - 1) < -1.
        let m = seq_membership(&power_seq(300, 1.0, -1.0).with_fitted_tail(), 1.0 / 6.0).unwrap();
        assert!(m.member);
        // A complete finite sequence (no tail model) is always a member.
        let m = seq_membership(&power_seq(300, 1.0, -1.0), 1.5).unwrap();
        assert!(m.member);
        assert!(m.tail_exponent.is_none());
        // A directly declared tail model wins over fitting.
        let s = power_seq(300, 1.0, -1.0).with_tail_model(-3.0);
        assert!(seq_membership(&s, 1.5).unwrap().member);
        // Zero sequence: nothing to fit, member with zero sum.
        let z = CoeffSequence::new(vec![0.0; 50]).with_fitted_tail();
        let m = seq_membership(&z, 1.5).unwrap();
        assert!(m.member);
        assert_eq!(m.partial_sum, 0.0);
        assert!(m.tail_exponent.is_none());
        // Invalid exponent.
        assert!(seq_membership(&z, 0.0).is_err());
    }

    #[test]
    fn membership_is_monotone_under_entrywise_domination() {
        let t = power_seq(300, 2.0, -2.1).with_fitted_tail();
        assert!(seq_membership(&t, 1.5).unwrap().member);
        // Shrink uniformly and perturb entries outside the fitted tail
        // window: the fitted models agree, so domination carries over.
        let mut s = CoeffSequence::new(t.entries.iter().map(|v| 0.5 * v).collect());
        for i in 0..100 {
            s.entries[i] *= 0.1;
        }
        assert!(s
            .entries
            .iter()
            .zip(&t.entries)
            .all(|(a, b)| a.abs() <= b.abs()));
        assert!(seq_membership(&s.with_fitted_tail(), 1.5).unwrap().member);
    }

    #[test]
    fn norms_weight_low_and_high_modes_correctly() {
        let spectrum = Spectrum::from_sorted_values(
            ProblemKind::BsL,
            vec![0.0, 0.0, 0.0, 7.2, 7.2],
            1.0,
        )
        .unwrap();
        assert_eq!(spectrum.j0, Some(4));
        let e1 = CoeffSequence::new(vec![1.0]);
        assert_eq!(s_norm(&e1, &spectrum, SequenceSpace::S32).unwrap(), 1.0);
        let e4 = CoeffSequence::new(vec![0.0, 0.0, 0.0, 1.0]);
        assert!((s_norm(&e4, &spectrum, SequenceSpace::S32).unwrap() - 7.2).abs() < 1e-14);

        let bsm = Spectrum::from_sorted_values(
            ProblemKind::BsM,
            vec![0.75, 0.75, 1.0],
            0.0,
        )
        .unwrap();
        let g = CoeffSequence::new(vec![2.0, 0.0, 1.0]);
        assert!((s_norm(&g, &bsm, SequenceSpace::S12).unwrap() - 4.0).abs() < 1e-14);
        assert!((s_norm(&g, &bsm, SequenceSpace::S12).unwrap() - 3.0) > 0.0);

        // Wrong-family and missing-index errors.
        assert!(s_norm(&g, &bsm, SequenceSpace::S32).is_err());
        assert!(s_norm(&e1, &spectrum, SequenceSpace::S12).is_err());
        let too_long = CoeffSequence::new(vec![1.0; 9]);
        assert!(s_norm(&too_long, &spectrum, SequenceSpace::S32).is_err());
    }

    #[test]
    fn norm_is_degree_two_homogeneous() {
        let spectrum = Spectrum::from_sorted_values(
            ProblemKind::BsM,
            vec![0.5, 1.5, 2.5, 3.5],
            0.0,
        )
        .unwrap();
        let g = CoeffSequence::new(vec![1.0, -2.0, 3.0, 0.25]);
        let base = s_norm(&g, &spectrum, SequenceSpace::S12).unwrap();
        let scaled = CoeffSequence::new(g.entries.iter().map(|v| -3.0 * v).collect());
        let got = s_norm(&scaled, &spectrum, SequenceSpace::S12).unwrap();
        assert!((got - 9.0 * base).abs() < 1e-12 * base);
    }

    #[test]
    fn csv_and_json_round_trip() {
        let s = CoeffSequence::new(vec![1.5, -0.25, 0.0, 1.0 / 3.0]);
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("j,s_j\n1,"));
        let back = CoeffSequence::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.entries, s.entries);
        assert_eq!(back.declared_length, 4);

        let json = s.to_json();
        let again = CoeffSequence::from_json(&json).unwrap();
        assert_eq!(again.entries, s.entries);

        assert!(CoeffSequence::read_csv("x,y\n1,2\n".as_bytes()).is_err());
        assert!(CoeffSequence::read_csv("j,s_j\n2,0.5\n".as_bytes()).is_err());
        assert!(CoeffSequence::from_json(&serde_json::json!({"a": 1})).is_err());
    }
}
