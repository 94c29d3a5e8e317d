//! Dense symmetric generalized eigensolver for boundary-mass pencils.
//!
//! Every problem family reduces to `A0 x = t B x` with `A0` symmetric, `B`
//! positive semidefinite, and `A = A0 + b B` positive definite for a
//! suitable shift `b >= 0`. Factoring `A = L L^T` turns the pencil into the
//! standard symmetric problem `C y = theta y` with `C = L^{-1} B L^{-T}`,
//! `theta = 1 / (t + b)`, and `x = L^{-T} y`. Eigenvectors inherit exact
//! `A`-orthonormality from the orthonormality of `y`.
//!
//! Directions with `theta` at roundoff scale correspond to the kernel of
//! `B` (trial functions whose relevant boundary trace vanishes); they carry
//! no finite eigenvalue and are discarded, with the count reported.

use crate::assembly::{
    build_pencil_from_parts, pencil_parts, FormPencil, PencilParts,
};
use crate::basis::SpectralBasis;
use crate::boundary::BoundaryFn;
use crate::error::{Result, SteklovError};
use crate::param::{ProblemKind, SigmaParameter};
use nalgebra::{DMatrix, SymmetricEigen};

/// Largest shift tried by the doubling search.
pub const MAX_SHIFT: f64 = (1u64 << 20) as f64;

/// Eigenvalues, coordinate vectors, and diagnostics from one pencil solve.
pub struct PencilSolveReport {
    /// Finite eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Coordinate vectors (columns) matching `eigenvalues`; `A`-orthonormal.
    pub eigenvectors: DMatrix<f64>,
    /// Relative residuals `|A0 x - t B x| / |A x|` per eigenpair.
    pub residuals: Vec<f64>,
    /// Number of boundary-kernel directions discarded.
    pub discarded_kernel_dim: usize,
    /// Shift used by the pencil that produced this report.
    pub shift_b: f64,
}

/// Solves the shifted pencil, returning finite eigenvalues in ascending
/// order together with `A`-orthonormal coordinate vectors.
pub fn solve_pencil(pencil: &FormPencil) -> Result<PencilSolveReport> {
    let n = pencil.a.nrows();
    if n == 0 {
        return Ok(PencilSolveReport {
            eigenvalues: vec![],
            eigenvectors: DMatrix::zeros(0, 0),
            residuals: vec![],
            discarded_kernel_dim: 0,
            shift_b: pencil.shift_b,
        });
    }
    let chol = nalgebra::Cholesky::new(pencil.a.clone()).ok_or(
        SteklovError::CoercivityFailure {
            smallest: crate::assembly::smallest_eigenvalue(&pencil.a),
        },
    )?;
    let l = chol.l();
    let w = l
        .solve_lower_triangular(&pencil.bmass)
        .ok_or_else(|| SteklovError::ContractViolation("singular Cholesky factor".into()))?;
    // C = W L^{-T}; computed as (L^{-1} W^T)^T since W L^{-T} = (L^{-1} W^T)^T.
    let c_t = l
        .solve_lower_triangular(&w.transpose())
        .ok_or_else(|| SteklovError::ContractViolation("singular Cholesky factor".into()))?;
    let mut c = c_t.transpose();
    // Symmetrize before the symmetric eigensolver; the two triangular
    // solves introduce roundoff-level asymmetry only.
    c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let theta_max = eig
        .eigenvalues
        .iter()
        .fold(0.0_f64, |acc, &t| acc.max(t.abs()));

    // The number of finite eigenvalues equals the rank of the boundary
    // mass: since A is definite, C inherits B's rank exactly. Counting the
    // rank on B itself keeps kernel detection independent of A's
    // conditioning, which otherwise smears kernel thetas well above
    // machine epsilon on monomial bases.
    let eig_b = SymmetricEigen::new(pencil.bmass.clone());
    let bmax = eig_b
        .eigenvalues
        .iter()
        .fold(0.0_f64, |acc, &v| acc.max(v.abs()));
    let rank_b = {
        let tol_b = n as f64 * f64::EPSILON * bmax;
        eig_b.eigenvalues.iter().filter(|&&v| v > tol_b).count()
    };

    // Sort by theta descending so eigenvalues t = 1/theta - b come out
    // ascending; keep the rank_b largest, guarded by a positivity floor.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let floor = 1e-13 * theta_max;
    let finite: Vec<usize> = order
        .iter()
        .cloned()
        .take(rank_b)
        .filter(|&i| eig.eigenvalues[i] > floor)
        .collect();
    let discarded = n - finite.len();

    let mut values = Vec::with_capacity(finite.len());
    let mut vectors = DMatrix::zeros(n, finite.len());
    for (k, &i) in finite.iter().enumerate() {
        let theta = eig.eigenvalues[i];
        values.push(1.0 / theta - pencil.shift_b);
        let y = eig.eigenvectors.column(i).into_owned();
        let x = l
            .tr_solve_lower_triangular(&y)
            .ok_or_else(|| SteklovError::ContractViolation("singular Cholesky factor".into()))?;
        vectors.set_column(k, &x);
    }

    // Rank-one boundary mass (every decoupled disk mode): the single
    // finite eigenpair has the closed form x = A^{-1} w, t + b = 1/(w.x),
    // with B = w w^T. One triangular solve pair against the existing
    // Cholesky factor beats the symmetrized eigensolve by the conditioning
    // of C, which matters for high angular modes.
    if rank_b == 1 && values.len() == 1 {
        let bi = (0..n)
            .max_by(|&i, &j| eig_b.eigenvalues[i].total_cmp(&eig_b.eigenvalues[j]))
            .expect("nonempty spectrum");
        let w_dir = eig_b.eigenvectors.column(bi).into_owned() * bmax.sqrt();
        let x = chol.solve(&w_dir);
        let s = w_dir.dot(&x);
        if s.is_finite() && s > 0.0 {
            let t = 1.0 / s - pencil.shift_b;
            // Keep the symmetrized solve's sign so downstream consumers see
            // a continuous family, and normalize in the A-inner product.
            let sign = if x.dot(&vectors.column(0).into_owned()) < 0.0 {
                -1.0
            } else {
                1.0
            };
            let xn = x * (sign / s.sqrt());
            if t.is_finite() {
                values[0] = t;
                vectors.set_column(0, &xn);
            }
        }
    }

    let mut residuals = Vec::with_capacity(values.len());
    for (k, &t) in values.iter().enumerate() {
        let x = vectors.column(k);
        let ax = &pencil.a * x;
        let bx = &pencil.bmass * x;
        let r = (&ax - &bx * (t + pencil.shift_b)).norm() / ax.norm();
        residuals.push(r);
    }

    Ok(PencilSolveReport {
        eigenvalues: values,
        eigenvectors: vectors,
        residuals,
        discarded_kernel_dim: discarded,
        shift_b: pencil.shift_b,
    })
}

/// Boundary trace order diagonalized by each problem family: the trace the
/// eigenvalue weights in the boundary condition.
pub fn family_trace_order(kind: ProblemKind) -> crate::boundary::TraceOrder {
    match kind {
        ProblemKind::BsL | ProblemKind::Nbs => crate::boundary::TraceOrder::Value,
        ProblemKind::BsM | ProblemKind::Dbs => crate::boundary::TraceOrder::Normal,
    }
}

/// Builds the L2-orthonormal boundary basis carried by a solved pencil:
/// `u_hat_j = sqrt(t_j + b) * trace(x_j)` with the family's trace order.
///
/// With `A`-orthonormal eigenvectors this normalization is exactly
/// orthonormal in L2 of the boundary, across eigenvalues and across
/// decoupled modes, including zero eigenvalues (where the shift `b`
/// supplies the weight; for the fixed-lambda family at negative lambda the
/// first function comes out as the constant of unit boundary norm).
pub fn trace_basis(report: &PencilSolveReport, pencil: &FormPencil) -> Result<Vec<BoundaryFn>> {
    let order = family_trace_order(pencil.kind);
    let mut out = Vec::with_capacity(report.eigenvalues.len());
    for (j, &t) in report.eigenvalues.iter().enumerate() {
        let x = report.eigenvectors.column(j);
        // Contract: eigenvectors must arrive A-normalized.
        let anorm = (&pencil.a * x).dot(&x.into_owned());
        if (anorm - 1.0).abs() > 1e-6 {
            return Err(SteklovError::ContractViolation(format!(
                "eigenvector {j} is not normalized in the pencil form: |x|_A^2 = {anorm}"
            )));
        }
        let coords: Vec<f64> = x.iter().cloned().collect();
        let weight = (t + pencil.shift_b).max(0.0).sqrt();
        // Disk mode bases keep the trace in polar form: the Cartesian
        // expansion of high modes costs around five digits to coefficient
        // cancellation.
        let tr = if let (Some(l), Some(rads)) =
            (pencil.basis.mode, pencil.basis.radial.as_ref())
        {
            let mut radial = crate::poly::Poly1::zero();
            for (c, rp) in coords.iter().zip(rads) {
                radial = radial.add(&rp.scale(*c));
            }
            let amp = match order {
                crate::boundary::TraceOrder::Value => radial.eval(1.0),
                crate::boundary::TraceOrder::Normal => radial.derivative().eval(1.0),
            };
            BoundaryFn::circle_harmonic(l, 0, amp)
        } else {
            let combined = crate::poly::Poly2::combine(&coords, &pencil.basis.functions);
            crate::boundary::boundary_trace(pencil.basis.geometry, &combined, order)
        };
        out.push(tr.scale(weight));
    }
    Ok(out)
}

/// Shift candidates: zero first, then doubling powers up to [`MAX_SHIFT`].
fn shift_candidates() -> impl Iterator<Item = f64> {
    std::iter::once(0.0).chain((0..=20).map(|k| (1u64 << k) as f64))
}

/// Finds the smallest candidate shift making the pencil coercive, reusing
/// preassembled matrices across attempts.
pub fn choose_shift_from_parts(
    basis: &SpectralBasis,
    parts: &PencilParts,
    sigma: &SigmaParameter,
    kind: ProblemKind,
    param: f64,
) -> Result<FormPencil> {
    for b in shift_candidates() {
        let attempt = build_pencil_from_parts(
            basis.clone(),
            PencilParts {
                a0: parts.a0.clone(),
                bmass: parts.bmass.clone(),
            },
            sigma,
            kind,
            param,
            b,
        );
        match attempt {
            Ok(p) => return Ok(p),
            Err(SteklovError::CoercivityFailure { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(SteklovError::ShiftSearchFailed { last_b: MAX_SHIFT })
}

/// Assembles the family pencil and searches for a coercive shift.
pub fn choose_shift_b(
    basis: &SpectralBasis,
    sigma: &SigmaParameter,
    kind: ProblemKind,
    param: f64,
) -> Result<FormPencil> {
    let parts = pencil_parts(basis, sigma, kind, param);
    choose_shift_from_parts(basis, &parts, sigma, kind, param)
}

/// Orthonormal basis for the null space of `constraints^T * a0`, i.e. the
/// subspace of trial vectors `v` with `u^T a0 v = 0` for each constraint
/// column `u`.
fn constraint_null_space(a0: &DMatrix<f64>, constraints: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a0.nrows();
    if constraints.ncols() == 0 {
        return DMatrix::identity(n, n);
    }
    // Rows of the constraint matrix: (a0 u)^T for each deflation vector u.
    let rows = (a0 * constraints).transpose();
    let gram = rows.transpose() * &rows; // n x n, PSD, kernel = feasible set
    let eig = SymmetricEigen::new(gram);
    let max_ev = eig
        .eigenvalues
        .iter()
        .fold(0.0_f64, |acc, &v| acc.max(v.abs()));
    let tol = 1e-12 * max_ev.max(1e-300);
    let keep: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] <= tol).collect();
    let mut z = DMatrix::zeros(n, keep.len());
    for (k, &i) in keep.iter().enumerate() {
        z.set_column(k, &eig.eigenvectors.column(i));
    }
    z
}

/// Result of a deflated pencil build: the projected pencil lives on a
/// recombined basis spanning the constrained subspace.
pub struct DeflatedPencil {
    pub pencil: FormPencil,
    /// Map from constrained coordinates back to the original basis.
    pub subspace: DMatrix<f64>,
    /// Number of independent constraints removed.
    pub deflated_dim: usize,
}

/// Projects the family pencil onto the subspace orthogonal (in the
/// unshifted `a0` pairing) to the given constraint vectors, then searches
/// for a coercive shift on the projected problem.
///
/// Used when the spectral parameter has crossed limiting eigenvalues and
/// the raw form is indefinite on a known finite-dimensional subspace.
pub fn deflate_and_build(
    basis: &SpectralBasis,
    sigma: &SigmaParameter,
    kind: ProblemKind,
    param: f64,
    constraints: &DMatrix<f64>,
) -> Result<DeflatedPencil> {
    let parts = pencil_parts(basis, sigma, kind, param);
    let z = constraint_null_space(&parts.a0, constraints);
    let deflated_dim = basis.len() - z.ncols();
    let projected = PencilParts {
        a0: z.transpose() * &parts.a0 * &z,
        bmass: z.transpose() * &parts.bmass * &z,
    };
    let sub_basis = basis.recombine(&z, "-defl");
    let pencil = choose_shift_from_parts(&sub_basis, &projected, sigma, kind, param)?;
    Ok(DeflatedPencil {
        pencil,
        subspace: z,
        deflated_dim,
    })
}
