//! Polynomial trial spaces for the Galerkin discretizations.
//!
//! The disk uses one basis per angular mode `l`, spanned by
//! `r^(l+2k) cos(l theta)` for `k = 0..=k_max`; matrices for the sine
//! counterpart are identical, so only the cosine copy is assembled and the
//! multiplicity is restored when spectra are merged. The square uses a
//! tensor product of shifted Legendre polynomials.

use crate::error::Result;
use crate::param::Geometry;
use crate::poly::{gauss_legendre_01, harmonic_pair, shifted_legendre, Poly1, Poly2};
use crate::boundary::{TraceOrder, EDGES};
use nalgebra::DMatrix;

/// Essential boundary constraint selecting a limiting problem's trial space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceConstraint {
    /// Zero boundary value.
    TraceZero,
    /// Zero outward normal derivative.
    NormalZero,
}

/// A finite polynomial trial space on one of the supported domains.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralBasis {
    pub geometry: Geometry,
    /// Angular mode for disk bases; `None` on the square.
    pub mode: Option<u32>,
    /// Basis functions as bivariate polynomials.
    pub functions: Vec<Poly2>,
    /// Radial parts in `r` for disk bases, aligned with `functions`.
    pub radial: Option<Vec<Poly1>>,
    /// Human-readable identifier used in reports and serialized output.
    pub label: String,
}

impl SpectralBasis {
    /// Disk basis for angular mode `l`: `r^(l+2k) cos(l theta)`,
    /// `k = 0..=k_max`, represented as genuine polynomials
    /// `(x^2+y^2)^k Re((x+iy)^l)`.
    pub fn disk_mode(l: u32, k_max: u32) -> Self {
        let (cl, _) = harmonic_pair(l);
        let r2 = Poly2::r_squared();
        let mut functions = Vec::with_capacity(k_max as usize + 1);
        let mut radial = Vec::with_capacity(k_max as usize + 1);
        let mut radial_factor = Poly2::constant(1.0);
        for k in 0..=k_max {
            functions.push(radial_factor.mul(&cl));
            let mut rad = Poly1::zero();
            rad.add_term((l + 2 * k) as usize, 1.0);
            radial.push(rad);
            radial_factor = radial_factor.mul(&r2);
        }
        SpectralBasis {
            geometry: Geometry::Disk,
            mode: Some(l),
            functions,
            radial: Some(radial),
            label: format!("disk-mode{l}-k{k_max}"),
        }
    }

    /// Tensor basis on the unit square: shifted Legendre products
    /// `P_i(2x-1) P_j(2y-1)` for `i, j = 0..=degree`.
    pub fn square_tensor(degree: u32) -> Self {
        let legendre: Vec<Poly1> = (0..=degree as usize).map(shifted_legendre).collect();
        let mut functions = Vec::with_capacity((degree as usize + 1).pow(2));
        for pi in &legendre {
            for pj in &legendre {
                let mut f = Poly2::zero();
                for (a, &ca) in pi.coeffs().iter().enumerate() {
                    for (b, &cb) in pj.coeffs().iter().enumerate() {
                        f.add_term(a as u16, b as u16, ca * cb);
                    }
                }
                functions.push(f);
            }
        }
        SpectralBasis {
            geometry: Geometry::Square,
            mode: None,
            functions,
            radial: None,
            label: format!("square-deg{degree}"),
        }
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// Value of the i-th radial part at r = 1 (disk bases only).
    pub fn radial_boundary_value(&self, i: usize) -> f64 {
        self.radial.as_ref().expect("disk basis required")[i].eval(1.0)
    }

    /// Derivative of the i-th radial part at r = 1 (disk bases only).
    pub fn radial_boundary_derivative(&self, i: usize) -> f64 {
        self.radial.as_ref().expect("disk basis required")[i]
            .derivative()
            .eval(1.0)
    }

    /// Replaces the basis by linear combinations given column-wise.
    /// `weights` has one row per current function and one column per new one.
    pub fn recombine(&self, weights: &DMatrix<f64>, label_suffix: &str) -> SpectralBasis {
        assert_eq!(weights.nrows(), self.len());
        let mut functions = Vec::with_capacity(weights.ncols());
        let mut radial = self.radial.as_ref().map(|_| Vec::with_capacity(weights.ncols()));
        for j in 0..weights.ncols() {
            let col: Vec<f64> = (0..weights.nrows()).map(|i| weights[(i, j)]).collect();
            functions.push(Poly2::combine(&col, &self.functions));
            if let (Some(rad_out), Some(rad_in)) = (radial.as_mut(), self.radial.as_ref()) {
                let mut r = Poly1::zero();
                for (c, rp) in col.iter().zip(rad_in) {
                    r = r.add(&rp.scale(*c));
                }
                rad_out.push(r);
            }
        }
        SpectralBasis {
            geometry: self.geometry,
            mode: self.mode,
            functions,
            radial,
            label: format!("{}{label_suffix}", self.label),
        }
    }
}

/// A constrained trial space together with the coordinates of its functions
/// in the basis it was carved from.
#[derive(Debug, Clone)]
pub struct ConstrainedBasis {
    pub basis: SpectralBasis,
    /// One column per constrained function, expressed in parent coordinates;
    /// lifts constrained coefficient vectors back to the parent basis.
    pub weights: DMatrix<f64>,
}

/// Restricts a basis to the subspace satisfying an essential boundary
/// condition exactly.
///
/// On the disk the condition is one linear equation per mode on the radial
/// coefficients (boundary value or boundary slope at r = 1); the null space
/// is materialized through a Householder reflector. On the square the
/// condition is collocated at Gauss-Legendre nodes on each edge, enough
/// nodes that a vanishing sampled trace vanishes identically, and the null
/// space comes from the spectral decomposition of the sampling Gram.
///
/// An empty result is legitimate (for example a single constant constrained
/// to zero trace) and is returned as an empty basis rather than an error.
pub fn constrain_basis(
    basis: &SpectralBasis,
    constraint: TraceConstraint,
) -> Result<ConstrainedBasis> {
    let suffix = match constraint {
        TraceConstraint::TraceZero => "-trace0",
        TraceConstraint::NormalZero => "-normal0",
    };
    let weights = match basis.geometry {
        Geometry::Disk => {
            let n = basis.len();
            let c: Vec<f64> = (0..n)
                .map(|i| match constraint {
                    TraceConstraint::TraceZero => basis.radial_boundary_value(i),
                    TraceConstraint::NormalZero => basis.radial_boundary_derivative(i),
                })
                .collect();
            let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm <= 1e-13 {
                // The constraint is already satisfied by every function.
                DMatrix::identity(n, n)
            } else {
                // Householder reflector sending c to a multiple of e1; its
                // remaining columns span the null space of c.
                let mut v = c.clone();
                v[0] += norm * c[0].signum();
                let vtv: f64 = v.iter().map(|x| x * x).sum();
                let mut h = DMatrix::identity(n, n);
                for i in 0..n {
                    for j in 0..n {
                        h[(i, j)] -= 2.0 * v[i] * v[j] / vtv;
                    }
                }
                h.columns(1, n - 1).into_owned()
            }
        }
        Geometry::Square => {
            let n = basis.len();
            let max_deg = basis
                .functions
                .iter()
                .map(|f| f.total_degree())
                .max()
                .unwrap_or(0);
            let (nodes, _) = gauss_legendre_01(max_deg as usize + 1);
            let order = match constraint {
                TraceConstraint::TraceZero => TraceOrder::Value,
                TraceConstraint::NormalZero => TraceOrder::Normal,
            };
            let mut rows: Vec<Vec<f64>> = Vec::with_capacity(4 * nodes.len());
            for edge in EDGES {
                let traces: Vec<Poly1> =
                    basis.functions.iter().map(|f| edge.trace(f, order)).collect();
                for &t in &nodes {
                    rows.push(traces.iter().map(|p| p.eval(t)).collect());
                }
            }
            let s = DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]);
            // Null space of the sampling matrix through the eigenvectors of
            // its Gram; the constraint is exact, so null eigenvalues sit at
            // roundoff while the rest stay O(1) for this basis.
            let gram = s.transpose() * &s;
            let eig = nalgebra::SymmetricEigen::new(gram);
            let lmax = eig.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
            let tol = 1e-12 * lmax.max(1e-30);
            let null_cols: Vec<usize> = (0..n)
                .filter(|&j| eig.eigenvalues[j] <= tol)
                .collect();
            let mut null = DMatrix::zeros(n, null_cols.len());
            for (out_j, &j) in null_cols.iter().enumerate() {
                for i in 0..n {
                    null[(i, out_j)] = eig.eigenvectors[(i, j)];
                }
            }
            null
        }
    };
    Ok(ConstrainedBasis {
        basis: basis.recombine(&weights, suffix),
        weights,
    })
}

impl std::fmt::Display for SpectralBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ({} functions)", self.label, self.len())
    }
}
