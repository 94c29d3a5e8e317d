//! Sorted eigenvalue lists with multiplicities and serialization.

use crate::error::{Result, SteklovError};
use crate::fmt::fmt17;
use crate::param::ProblemKind;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// A finite lower portion of an eigenvalue spectrum.
///
/// `values` is nondecreasing and fully expanded: an eigenvalue of
/// multiplicity m occupies m consecutive slots. `multiplicities` groups the
/// values into clusters, so its entries sum to `values.len()`.
///
/// `j0` is the 1-based index of the first strictly positive eigenvalue; it is
/// meaningful only for the `BsL` family, where the low block `j < j0` enters
/// trace-space norms unweighted. `shift_b` records the coercivity shift used
/// by the solve that produced the spectrum (0 when none was needed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub kind: ProblemKind,
    pub values: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub j0: Option<usize>,
    pub shift_b: f64,
    /// Eigenvector coefficient rows aligned with `values`, when the producer
    /// retains them; coordinates refer to `basis_label`.
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    pub basis_label: Option<String>,
}

/// Relative tolerance used to merge adjacent eigenvalues into one cluster.
pub const CLUSTER_REL_TOL: f64 = 1e-9;

impl Spectrum {
    /// Builds a spectrum from expanded sorted values, grouping equal
    /// neighbors into multiplicity clusters.
    pub fn from_sorted_values(kind: ProblemKind, values: Vec<f64>, shift_b: f64) -> Result<Self> {
        for w in values.windows(2) {
            if w[1] < w[0] {
                return Err(SteklovError::ContractViolation(format!(
                    "spectrum values must be nondecreasing, got {} before {}",
                    w[0], w[1]
                )));
            }
        }
        let multiplicities = cluster_multiplicities(&values, CLUSTER_REL_TOL);
        let mut s = Spectrum {
            kind,
            values,
            multiplicities,
            j0: None,
            shift_b,
            eigenvectors: None,
            basis_label: None,
        };
        if kind == ProblemKind::BsL {
            s.j0 = Some(s.first_positive_index());
        }
        Ok(s)
    }

    /// 1-based index of the first value strictly above the zero threshold;
    /// one past the end when every value is nonpositive.
    fn first_positive_index(&self) -> usize {
        let scale = self
            .values
            .iter()
            .fold(1.0_f64, |acc, v| acc.max(v.abs()));
        let zero_tol = 1e-9 * scale;
        match self.values.iter().position(|&v| v > zero_tol) {
            Some(i) => i + 1,
            None => self.values.len() + 1,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Writes rows `j,value,multiplicity` with a header, one row per
    /// expanded eigenvalue; the multiplicity column repeats the size of the
    /// cluster the row belongs to.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "j,value,multiplicity")?;
        let mut j = 1usize;
        for (&m, cluster) in self.multiplicities.iter().zip(self.clusters()) {
            for &v in cluster {
                writeln!(w, "{j},{},{m}", fmt17(v))?;
                j += 1;
            }
        }
        Ok(())
    }

    /// JSON object mirroring the CSV content plus `j0` and `b`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "problem": self.kind.name(),
            "values": self.values,
            "multiplicities": self.multiplicities,
            "j0": self.j0,
            "b": self.shift_b,
            "eigenvectors": self.eigenvectors,
            "basis": self.basis_label,
        })
    }

    fn clusters(&self) -> impl Iterator<Item = &[f64]> {
        let mut start = 0usize;
        self.multiplicities.iter().map(move |&m| {
            let s = &self.values[start..start + m];
            start += m;
            s
        })
    }
}

/// Groups a nondecreasing list into clusters of values equal within
/// `rel_tol` relative to the local magnitude, returning cluster sizes.
pub fn cluster_multiplicities(values: &[f64], rel_tol: f64) -> Vec<usize> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < values.len() {
        let anchor = values[i];
        let mut j = i + 1;
        while j < values.len() {
            let tol = rel_tol * anchor.abs().max(values[j].abs()).max(1.0);
            if (values[j] - anchor).abs() <= tol {
                j += 1;
            } else {
                break;
            }
        }
        out.push(j - i);
        i = j;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clusters_group_equal_values() {
        let v = vec![1.0, 3.0, 3.0, 5.0, 5.0];
        assert_eq!(cluster_multiplicities(&v, 1e-9), vec![1, 2, 2]);
        let v = vec![0.0, 0.0, 0.0, 7.2, 7.2];
        assert_eq!(cluster_multiplicities(&v, 1e-9), vec![3, 2]);
    }

    #[test]
    fn bsl_spectrum_gets_j0() {
        let s =
            Spectrum::from_sorted_values(ProblemKind::BsL, vec![0.0, 0.0, 0.0, 7.2, 7.2], 1.0)
                .unwrap();
        assert_eq!(s.j0, Some(4));
        assert_eq!(s.multiplicities, vec![3, 2]);
        let s = Spectrum::from_sorted_values(ProblemKind::BsL, vec![0.0, 0.9, 2.0], 1.0).unwrap();
        assert_eq!(s.j0, Some(2));
    }

    #[test]
    fn dbs_spectrum_has_no_j0() {
        let s =
            Spectrum::from_sorted_values(ProblemKind::Dbs, vec![1.0, 3.0, 3.0], 0.0).unwrap();
        assert_eq!(s.j0, None);
    }

    #[test]
    fn unsorted_input_is_rejected() {
        assert!(Spectrum::from_sorted_values(ProblemKind::Dbs, vec![2.0, 1.0], 0.0).is_err());
    }

    #[test]
    fn csv_layout() {
        let s =
            Spectrum::from_sorted_values(ProblemKind::Dbs, vec![1.0, 3.0, 3.0], 0.0).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "j,value,multiplicity");
        assert_eq!(lines[1], "1,1.0000000000000000e0,1");
        assert_eq!(lines[2], "2,3.0000000000000000e0,2");
        assert_eq!(lines[3], "3,3.0000000000000000e0,2");
    }
}
