//! Closed-form spectra on the unit ball for the flat interior form.
//!
//! On the unit N-ball with the interior form coefficient sigma = 0, every
//! eigenvalue problem in this crate reduces mode by mode: restricted to the
//! space spanned by `r^l H_l` and `r^(l+2) H_l`, with `H_l` a degree-l
//! spherical harmonic, the boundary conditions become a 2x2 linear system.
//! A mode carries an eigenfunction exactly when that system is singular,
//! which pins the eigenvalue pairs `(lambda, mu)` to a hyperbola per `l`.
//! This module evaluates those hyperbola branches, their poles and limits,
//! the per-mode multiplicities, and assembles sorted spectra from them.
//!
//! Everything here requires sigma = 0; entry points taking sigma reject any
//! other value because the 2x2 reduction below is specific to the flat form.

use crate::error::{Result, SteklovError};
use crate::param::ProblemKind;
use crate::spectrum::Spectrum;

/// Relative slack for detecting evaluation exactly at a branch pole.
const POLE_REL_TOL: f64 = 4.0 * f64::EPSILON;

/// Relative tolerance deciding whether `(lambda, mu)` lies on a branch, used
/// by the kernel extraction. Scaled by `1 + max |entry|` of the mode matrix.
pub const ON_BRANCH_REL_TOL: f64 = 1e-9;

fn check_dim(dim: u32) -> Result<()> {
    if dim < 2 {
        return Err(SteklovError::InvalidParameter(format!(
            "dimension must be at least 2, got {dim}"
        )));
    }
    Ok(())
}

fn check_flat_sigma(sigma: f64) -> Result<()> {
    if sigma != 0.0 {
        return Err(SteklovError::InvalidParameter(format!(
            "closed-form ball spectra require sigma = 0, got {sigma}"
        )));
    }
    Ok(())
}

/// The 2x2 mode matrix whose singularity characterizes eigenvalue pairs.
///
/// Row 1 collects the second-order boundary condition applied to
/// `r^l` and `r^(l+2)`; row 2 the third-order one. A nontrivial radial
/// coefficient pair `(A, B)` exists exactly when the determinant vanishes.
pub fn mode_matrix(l: u32, dim: u32, lambda: f64, mu: f64) -> Result<[[f64; 2]; 2]> {
    check_dim(dim)?;
    let l = l as f64;
    let n = dim as f64;
    Ok([
        [l * (l - 1.0 - lambda), (l + 2.0) * (l + 1.0 - lambda)],
        [
            l * (l + n - 2.0) * (l - 1.0) - mu,
            l * (l * (l - 5.0) + n * (l - 1.0) - 2.0) - mu,
        ],
    ])
}

/// Determinant of [`mode_matrix`].
pub fn mode_matrix_det(l: u32, dim: u32, lambda: f64, mu: f64) -> Result<f64> {
    let m = mode_matrix(l, dim, lambda, mu)?;
    Ok(m[0][0] * m[1][1] - m[0][1] * m[1][0])
}

/// Largest absolute entry of the mode matrix, the natural determinant scale.
pub fn mode_matrix_scale(m: &[[f64; 2]; 2]) -> f64 {
    m.iter()
        .flatten()
        .fold(0.0_f64, |acc, &e| acc.max(e.abs()))
}

/// Limiting eigenvalue of the zero-trace problem carried by mode `l`.
pub fn dbs_branch_value(l: u32, _dim: u32) -> f64 {
    2.0 * l as f64 + 1.0
}

/// Limiting eigenvalue of the zero-normal-derivative problem carried by
/// mode `l`: `l (2 l^2 + (N-1) l - N + 2)`.
pub fn nbs_branch_value(l: u32, dim: u32) -> f64 {
    let l = l as f64;
    let n = dim as f64;
    l * (2.0 * l * l + (n - 1.0) * l - n + 2.0)
}

/// Numerator polynomial shared by both branch families:
/// `3 l^4 + 2 (N-2) l^3 - (N+1) l^2 - (N-2) l`.
fn branch_numerator(l: u32, dim: u32) -> f64 {
    let l = l as f64;
    let n = dim as f64;
    3.0 * l.powi(4) + 2.0 * (n - 2.0) * l.powi(3) - (n + 1.0) * l * l - (n - 2.0) * l
}

/// Eigenvalue branch `lambda_(l)(mu)` of the family with fixed `mu`.
///
/// For `l >= 1` this is the equilateral hyperbola
/// `(P_l - eta_l mu) / (xi_l - mu)` with a pole at `mu = xi_l`; the mode-0
/// branch is identically 1 for every `mu`.
pub fn lambda_branch(l: u32, dim: u32, mu: f64) -> Result<f64> {
    check_dim(dim)?;
    if l == 0 {
        return Ok(1.0);
    }
    let pole = nbs_branch_value(l, dim);
    if (mu - pole).abs() <= POLE_REL_TOL * pole.abs().max(1.0) {
        return Err(SteklovError::PoleAt {
            l,
            pole,
            requested: mu,
        });
    }
    Ok((branch_numerator(l, dim) - dbs_branch_value(l, dim) * mu) / (pole - mu))
}

/// Eigenvalue branch `mu_(l)(lambda)` of the family with fixed `lambda`.
///
/// For `l >= 1` this is `(P_l - xi_l lambda) / (eta_l - lambda)` with a pole
/// at `lambda = eta_l`; the mode-0 branch is identically 0.
pub fn mu_branch(l: u32, dim: u32, lambda: f64) -> Result<f64> {
    check_dim(dim)?;
    if l == 0 {
        return Ok(0.0);
    }
    let pole = dbs_branch_value(l, dim);
    if (lambda - pole).abs() <= POLE_REL_TOL * pole.abs().max(1.0) {
        return Err(SteklovError::PoleAt {
            l,
            pole,
            requested: lambda,
        });
    }
    Ok((branch_numerator(l, dim) - nbs_branch_value(l, dim) * lambda) / (pole - lambda))
}

/// Number of linearly independent degree-l spherical harmonics on the
/// (N-1)-sphere: `(2l + N - 2) (l + N - 3)! / (l! (N-2)!)`, with `m_0 = 1`.
pub fn mode_multiplicity(l: u32, dim: u32) -> Result<u64> {
    check_dim(dim)?;
    if l == 0 {
        return Ok(1);
    }
    if dim == 2 {
        return Ok(2);
    }
    // (l + N - 3)! / l! = product of the N-3 integers above l.
    let mut prod: u128 = 1;
    for i in (l as u128 + 1)..=(l as u128 + dim as u128 - 3) {
        prod = prod
            .checked_mul(i)
            .ok_or_else(|| SteklovError::InvalidParameter("multiplicity overflow".into()))?;
    }
    let num = prod
        .checked_mul(2 * l as u128 + dim as u128 - 2)
        .ok_or_else(|| SteklovError::InvalidParameter("multiplicity overflow".into()))?;
    let den: u128 = (1..=(dim as u128 - 2)).product();
    debug_assert_eq!(num % den, 0);
    u64::try_from(num / den)
        .map_err(|_| SteklovError::InvalidParameter("multiplicity overflow".into()))
}

/// One eigenvalue branch: family, mode index and dimension, with
/// closed-form evaluation, pole location and asymptotic target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BallBranch {
    pub kind: ProblemKind,
    pub l: u32,
    pub dim: u32,
}

impl BallBranch {
    pub fn new(kind: ProblemKind, l: u32, dim: u32) -> Result<Self> {
        check_dim(dim)?;
        if matches!(kind, ProblemKind::Dbs | ProblemKind::Nbs) {
            return Err(SteklovError::InvalidParameter(
                "limiting problems have fixed branch values, not parameter-dependent branches"
                    .into(),
            ));
        }
        Ok(BallBranch { kind, l, dim })
    }

    /// Branch value at the given parameter (`mu` for `BsM`, `lambda` for `BsL`).
    pub fn eval(&self, param: f64) -> Result<f64> {
        match self.kind {
            ProblemKind::BsM => lambda_branch(self.l, self.dim, param),
            ProblemKind::BsL => mu_branch(self.l, self.dim, param),
            _ => unreachable!("constructor rejects limiting problems"),
        }
    }

    /// Pole location, if the branch has one (every branch with `l >= 1`).
    pub fn pole(&self) -> Option<f64> {
        if self.l == 0 {
            return None;
        }
        Some(match self.kind {
            ProblemKind::BsM => nbs_branch_value(self.l, self.dim),
            ProblemKind::BsL => dbs_branch_value(self.l, self.dim),
            _ => unreachable!(),
        })
    }

    /// Limit of the branch as the parameter tends to negative infinity.
    pub fn limit_value(&self) -> f64 {
        match self.kind {
            ProblemKind::BsM => dbs_branch_value(self.l, self.dim),
            ProblemKind::BsL => nbs_branch_value(self.l, self.dim),
            _ => unreachable!(),
        }
    }

    /// Whether the branch is constant in the parameter (the mode-0 branches).
    pub fn is_persistent(&self) -> bool {
        self.l == 0
    }

    pub fn multiplicity(&self) -> Result<u64> {
        mode_multiplicity(self.l, self.dim)
    }
}

/// Radial coefficient pair of a mode eigenfunction `(A r^l + B r^(l+2)) H_l`.
///
/// `harmonic` selects the spherical harmonic within the mode; in dimension 2
/// index 0 is `cos(l theta)` and index 1 is `sin(l theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeEigenfunction {
    pub l: u32,
    pub dim: u32,
    pub harmonic: u32,
    pub a: f64,
    pub b: f64,
}

impl ModeEigenfunction {
    /// Evaluates the eigenfunction at polar coordinates (dimension 2 only).
    pub fn eval_polar(&self, r: f64, theta: f64) -> Result<f64> {
        if self.dim != 2 {
            return Err(SteklovError::ConfigurationError(
                "pointwise evaluation is implemented for dimension 2 only".into(),
            ));
        }
        let radial = self.a * r.powi(self.l as i32) + self.b * r.powi(self.l as i32 + 2);
        let angular = match self.harmonic {
            0 => (self.l as f64 * theta).cos(),
            1 => (self.l as f64 * theta).sin(),
            h => {
                return Err(SteklovError::InvalidParameter(format!(
                    "harmonic index {h} out of range for dimension 2"
                )))
            }
        };
        Ok(radial * angular)
    }
}

/// Unit-norm kernel vector of the mode matrix at an on-branch pair.
///
/// Fails with [`SteklovError::NotOnBranch`] when the determinant is not zero
/// relative to the matrix scale. The sign is normalized so that `A >= 0`,
/// and `B > 0` whenever `A = 0`. At parameter pairs where the whole matrix
/// vanishes (the mode-0 matrix at `lambda = 1`, `mu = 0`, where both branch
/// families cross) the kernel is two-dimensional and the representative
/// `(1, 0)` is returned.
pub fn eigenfunction_coeffs(l: u32, dim: u32, lambda: f64, mu: f64) -> Result<(f64, f64)> {
    let m = mode_matrix(l, dim, lambda, mu)?;
    let scale = mode_matrix_scale(&m);
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det.abs() > ON_BRANCH_REL_TOL * (1.0 + scale) * (1.0 + scale) {
        return Err(SteklovError::NotOnBranch { det });
    }
    let r0 = (m[0][0].powi(2) + m[0][1].powi(2)).sqrt();
    let r1 = (m[1][0].powi(2) + m[1][1].powi(2)).sqrt();
    let tiny = ON_BRANCH_REL_TOL * (1.0 + scale);
    let (a, b) = if r0.max(r1) <= tiny {
        (1.0, 0.0)
    } else if r0 >= r1 {
        (-m[0][1] / r0, m[0][0] / r0)
    } else {
        (-m[1][1] / r1, m[1][0] / r1)
    };
    let norm = (a * a + b * b).sqrt();
    let (mut a, mut b) = (a / norm, b / norm);
    if a < -tiny || (a.abs() <= tiny && b < 0.0) {
        a = -a;
        b = -b;
    }
    if a.abs() <= tiny {
        a = 0.0;
        b = b.abs();
    }
    Ok((a, b))
}

/// Sorted spectrum of one problem family on the unit ball, collecting every
/// branch with `l <= l_max` together with its multiplicity.
///
/// Preconditions: `sigma = 0`; for `BsM` the parameter must satisfy `mu < 0`
/// and for `BsL` `lambda < 1`, the regimes where the sorted union of branch
/// values enumerates the whole spectrum. The limiting families ignore
/// `param`. The returned prefix is complete through all eigenvalues not
/// exceeding the smallest branch value left out.
pub fn ball_spectrum(
    kind: ProblemKind,
    dim: u32,
    sigma: f64,
    param: f64,
    l_max: u32,
) -> Result<Spectrum> {
    check_flat_sigma(sigma)?;
    check_dim(dim)?;
    match kind {
        ProblemKind::BsM if param >= 0.0 => {
            return Err(SteklovError::InvalidParameter(format!(
                "direct enumeration requires mu < 0, got {param}; use a deflated solve beyond"
            )));
        }
        ProblemKind::BsL if param >= 1.0 => {
            return Err(SteklovError::InvalidParameter(format!(
                "direct enumeration requires lambda < 1, got {param}"
            )));
        }
        _ => {}
    }
    let mut pairs: Vec<(f64, u64)> = Vec::with_capacity(l_max as usize + 1);
    let mut total: u128 = 0;
    for l in 0..=l_max {
        let v = match kind {
            ProblemKind::BsM => lambda_branch(l, dim, param)?,
            ProblemKind::BsL => mu_branch(l, dim, param)?,
            ProblemKind::Dbs => dbs_branch_value(l, dim),
            ProblemKind::Nbs => nbs_branch_value(l, dim),
        };
        let m = mode_multiplicity(l, dim)?;
        total += m as u128;
        if total > 10_000_000 {
            return Err(SteklovError::InvalidParameter(
                "expanded spectrum would exceed 10^7 entries; reduce l_max".into(),
            ));
        }
        pairs.push((v, m));
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut values = Vec::with_capacity(total as usize);
    for (v, m) in pairs {
        for _ in 0..m {
            values.push(v);
        }
    }
    Spectrum::from_sorted_values(kind, values, 0.0)
}

/// First `count` eigenvalues of a ball spectrum, choosing `l_max` internally
/// so that the truncation provably contains them.
pub fn ball_spectrum_first(
    kind: ProblemKind,
    dim: u32,
    sigma: f64,
    param: f64,
    count: usize,
) -> Result<Spectrum> {
    check_flat_sigma(sigma)?;
    check_dim(dim)?;
    let mut l_max: u32 = 8;
    loop {
        let mut seen: u128 = 0;
        for l in 0..=l_max {
            seen += mode_multiplicity(l, dim)? as u128;
        }
        if seen >= count as u128 + mode_multiplicity(l_max, dim)? as u128 {
            let full = ball_spectrum(kind, dim, sigma, param, l_max)?;
            if full.len() >= count {
                // The enumeration is complete below the value of the last
                // included branch; accept only if the cutoff clears it.
                let last_branch = match kind {
                    ProblemKind::BsM => lambda_branch(l_max, dim, param)?,
                    ProblemKind::BsL => mu_branch(l_max, dim, param)?,
                    ProblemKind::Dbs => dbs_branch_value(l_max, dim),
                    ProblemKind::Nbs => nbs_branch_value(l_max, dim),
                };
                if full.values[count - 1] < last_branch {
                    let values = full.values[..count].to_vec();
                    return Spectrum::from_sorted_values(kind, values, 0.0);
                }
            }
        }
        l_max = l_max
            .checked_mul(2)
            .ok_or_else(|| SteklovError::InvalidParameter("count too large".into()))?;
        if l_max > 2_000_000 {
            return Err(SteklovError::InvalidParameter(
                "count too large for branch enumeration".into(),
            ));
        }
    }
}
