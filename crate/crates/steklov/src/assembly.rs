//! Assembly of the interior quadratic form and boundary Gram matrices.
//!
//! The interior form with coefficient sigma is
//! `(1 - sigma) int D2u : D2v + sigma int (Lap u)(Lap v)`,
//! nonnegative on the admissible sigma range with kernel the affine
//! functions. Disk mode bases assemble through closed-form polar kernels
//! (exact rationals times pi, immune to the coefficient cancellation of
//! high-mode Cartesian expansions); other disk bases integrate monomial
//! closed forms, and square entries use tensor Gauss-Legendre rules of
//! exact-for-degree order, so every Gram entry is exact up to roundoff.
//!
//! Entries are computed once per unordered pair and mirrored, which makes
//! the returned matrices symmetric by construction.

use crate::basis::SpectralBasis;
use crate::boundary::{TraceOrder, EDGES};
use crate::error::{Result, SteklovError};
use crate::param::{Geometry, ProblemKind, SigmaParameter};
use crate::poly::{
    exact_order_for_degree, gauss_legendre_01, integrate_disk, integrate_product_gl, Poly2,
};
use nalgebra::{Cholesky, DMatrix, SymmetricEigen};

/// Second derivatives of one basis function, precomputed for assembly.
struct HessParts {
    fxx: Poly2,
    fxy: Poly2,
    fyy: Poly2,
}

fn hessian_parts(f: &Poly2) -> HessParts {
    HessParts {
        fxx: f.dx().dx(),
        fxy: f.dx().dy(),
        fyy: f.dy().dy(),
    }
}

/// Angular normalization of a disk mode: `int cos^2(l theta)` over the
/// circle (equal to the `sin^2` integral for `l >= 1`).
fn mode_angular_factor(l: u32) -> f64 {
    if l == 0 {
        2.0 * std::f64::consts::PI
    } else {
        std::f64::consts::PI
    }
}

/// Closed-form Hessian Frobenius kernel of the monomial pair
/// `(r^a, r^c)` in mode `l`: the polar-frame Hessian of `r^a cos(l theta)`
/// has components `a(a-1) r^(a-2) cos`, `-l(a-1) r^(a-2) sin`, and
/// `(a - l^2) r^(a-2) cos`, so the integrated product reduces to one
/// rational number times the angular factor. The numerator vanishes
/// exactly when either function is affine (zero Hessian), which covers
/// every case where the radial integral would be singular.
fn frobenius_kernel(a: u32, c: u32, l: u32) -> f64 {
    let (af, cf, lf) = (a as f64, c as f64, l as f64);
    let bracket = af * (af - 1.0) * cf * (cf - 1.0)
        + 2.0 * lf * lf * (af - 1.0) * (cf - 1.0)
        + (af - lf * lf) * (cf - lf * lf);
    if bracket == 0.0 {
        0.0
    } else {
        mode_angular_factor(l) * bracket / (af + cf - 2.0)
    }
}

/// Closed-form Laplacian product kernel of `(r^a, r^c)` in mode `l`:
/// `Delta(r^a cos(l theta)) = (a^2 - l^2) r^(a-2) cos(l theta)`. The
/// numerator vanishes exactly for harmonic monomials, covering the
/// singular radial integrals.
fn laplacian_kernel(a: u32, c: u32, l: u32) -> f64 {
    let (af, cf, lf) = (a as f64, c as f64, l as f64);
    let num = (af * af - lf * lf) * (cf * cf - lf * lf);
    if num == 0.0 {
        0.0
    } else {
        mode_angular_factor(l) * num / (af + cf - 2.0)
    }
}

/// Interior form on a disk mode basis through the closed-form kernels.
///
/// Assembling through the Cartesian polynomials loses around five digits
/// at high angular modes: `r^l cos(l theta)` expands with binomial-sized
/// alternating coefficients whose quadrature sums cancel back to order
/// one. The polar kernels are exact rationals times pi, so every entry is
/// correct to roundoff regardless of `l`.
fn disk_mode_qsigma(l: u32, rads: &[crate::poly::Poly1], s: f64) -> DMatrix<f64> {
    let n = rads.len();
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut frob = 0.0;
            let mut lap = 0.0;
            for (p, &cp) in rads[i].coeffs().iter().enumerate() {
                if cp == 0.0 {
                    continue;
                }
                for (q, &cq) in rads[j].coeffs().iter().enumerate() {
                    if cq == 0.0 {
                        continue;
                    }
                    frob += cp * cq * frobenius_kernel(p as u32, q as u32, l);
                    lap += cp * cq * laplacian_kernel(p as u32, q as u32, l);
                }
            }
            let v = (1.0 - s) * frob + s * lap;
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    a
}

/// Boundary mass on a disk mode basis: traces are multiples of one
/// circular harmonic, so entries are the angular factor times products of
/// radial boundary values (or slopes).
fn disk_mode_boundary_mass(l: u32, rads: &[crate::poly::Poly1], order: TraceOrder) -> DMatrix<f64> {
    let n = rads.len();
    let amps: Vec<f64> = rads
        .iter()
        .map(|r| match order {
            TraceOrder::Value => r.eval(1.0),
            TraceOrder::Normal => r.derivative().eval(1.0),
        })
        .collect();
    let ang = mode_angular_factor(l);
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = ang * amps[i] * amps[j];
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// Gram matrix of the interior form on the given basis.
pub fn assemble_qsigma(basis: &SpectralBasis, sigma: &SigmaParameter) -> DMatrix<f64> {
    let n = basis.len();
    let s = sigma.value();
    if let (Geometry::Disk, Some(l), Some(rads)) =
        (basis.geometry, basis.mode, basis.radial.as_ref())
    {
        return disk_mode_qsigma(l, rads, s);
    }
    let parts: Vec<HessParts> = basis.functions.iter().map(hessian_parts).collect();
    let mut a = DMatrix::zeros(n, n);
    match basis.geometry {
        Geometry::Disk => {
            for i in 0..n {
                for j in i..n {
                    let frob = parts[i]
                        .fxx
                        .mul(&parts[j].fxx)
                        .add(&parts[i].fxy.mul(&parts[j].fxy).scale(2.0))
                        .add(&parts[i].fyy.mul(&parts[j].fyy));
                    let lap_i = parts[i].fxx.add(&parts[i].fyy);
                    let lap_j = parts[j].fxx.add(&parts[j].fyy);
                    let v = (1.0 - s) * integrate_disk(&frob)
                        + s * integrate_disk(&lap_i.mul(&lap_j));
                    a[(i, j)] = v;
                    a[(j, i)] = v;
                }
            }
        }
        Geometry::Square => {
            // Shared tensor rule exact for products of two second
            // derivatives of the highest-degree basis functions.
            let max_deg = basis
                .functions
                .iter()
                .map(|f| f.total_degree())
                .max()
                .unwrap_or(0);
            let order = exact_order_for_degree(2 * max_deg);
            let (nodes, weights) = gauss_legendre_01(order);
            let q = nodes.len();
            // Per function, values of fxx, fxy, fyy at the q*q grid nodes.
            let mut vals = vec![vec![[0.0f64; 3]; q * q]; n];
            for (fi, p) in parts.iter().enumerate() {
                for (ix, &x) in nodes.iter().enumerate() {
                    for (iy, &y) in nodes.iter().enumerate() {
                        vals[fi][ix * q + iy] =
                            [p.fxx.eval(x, y), p.fxy.eval(x, y), p.fyy.eval(x, y)];
                    }
                }
            }
            let mut w2 = vec![0.0f64; q * q];
            for (ix, wx) in weights.iter().enumerate() {
                for (iy, wy) in weights.iter().enumerate() {
                    w2[ix * q + iy] = wx * wy;
                }
            }
            for i in 0..n {
                for j in i..n {
                    let mut total = 0.0;
                    for (k, &w) in w2.iter().enumerate() {
                        let [ixx, ixy, iyy] = vals[i][k];
                        let [jxx, jxy, jyy] = vals[j][k];
                        let frob = ixx * jxx + 2.0 * ixy * jxy + iyy * jyy;
                        let lap = (ixx + iyy) * (jxx + jyy);
                        total += w * ((1.0 - s) * frob + s * lap);
                    }
                    a[(i, j)] = total;
                    a[(j, i)] = total;
                }
            }
        }
    }
    a
}

/// Boundary Gram matrix of the chosen trace order on the given basis.
pub fn assemble_boundary_mass(basis: &SpectralBasis, order: TraceOrder) -> DMatrix<f64> {
    let n = basis.len();
    if let (Geometry::Disk, Some(l), Some(rads)) =
        (basis.geometry, basis.mode, basis.radial.as_ref())
    {
        return disk_mode_boundary_mass(l, rads, order);
    }
    let mut m = DMatrix::zeros(n, n);
    match basis.geometry {
        Geometry::Disk => {
            // The relevant boundary field as a polynomial: the function
            // itself, or x ux + y uy which restricts to the normal
            // derivative on the unit circle.
            let fields: Vec<Poly2> = basis
                .functions
                .iter()
                .map(|f| match order {
                    TraceOrder::Value => f.clone(),
                    TraceOrder::Normal => Poly2::var_x()
                        .mul(&f.dx())
                        .add(&Poly2::var_y().mul(&f.dy())),
                })
                .collect();
            for i in 0..n {
                for j in i..n {
                    let v = crate::poly::integrate_circle(&fields[i].mul(&fields[j]));
                    m[(i, j)] = v;
                    m[(j, i)] = v;
                }
            }
        }
        Geometry::Square => {
            let traces: Vec<[crate::poly::Poly1; 4]> = basis
                .functions
                .iter()
                .map(|f| {
                    let mut out: [crate::poly::Poly1; 4] = Default::default();
                    for (k, e) in EDGES.iter().enumerate() {
                        out[k] = e.trace(f, order);
                    }
                    out
                })
                .collect();
            for i in 0..n {
                for j in i..n {
                    let mut v = 0.0;
                    for (ti, tj) in traces[i].iter().zip(&traces[j]) {
                        v += integrate_product_gl(ti, tj);
                    }
                    m[(i, j)] = v;
                    m[(j, i)] = v;
                }
            }
        }
    }
    m
}

/// The assembled matrices of one eigenvalue problem, before any shift.
///
/// `a0` carries the parameter-dependent interior part; `bmass` is the
/// boundary Gram the eigenvalue multiplies.
pub struct PencilParts {
    pub a0: DMatrix<f64>,
    pub bmass: DMatrix<f64>,
}

/// Assembles the unshifted matrices of the given problem family.
///
/// * `BsM`: `a0 = Q_sigma - mu M0`, `bmass = M1`.
/// * `BsL`: `a0 = Q_sigma - lambda M1`, `bmass = M0`.
/// * `Dbs`: `a0 = Q_sigma` on a zero-trace basis, `bmass = M1`.
/// * `Nbs`: `a0 = Q_sigma` on a zero-normal-derivative basis, `bmass = M0`.
///
/// Constrained bases are the caller's responsibility; this function does not
/// modify the basis.
pub fn pencil_parts(
    basis: &SpectralBasis,
    sigma: &SigmaParameter,
    kind: ProblemKind,
    param: f64,
) -> PencilParts {
    let q = assemble_qsigma(basis, sigma);
    let m0 = assemble_boundary_mass(basis, TraceOrder::Value);
    let m1 = assemble_boundary_mass(basis, TraceOrder::Normal);
    let (a0, bmass) = match kind {
        ProblemKind::BsM => (&q - &m0 * param, m1),
        ProblemKind::BsL => (&q - &m1 * param, m0),
        ProblemKind::Dbs => (q, m1),
        ProblemKind::Nbs => (q, m0),
    };
    PencilParts { a0, bmass }
}

/// A symmetric generalized eigenvalue pencil `(A, B)` with
/// `A = a0 + b * bmass` positive definite and `B` positive semidefinite.
pub struct FormPencil {
    pub basis: SpectralBasis,
    pub a: DMatrix<f64>,
    pub bmass: DMatrix<f64>,
    pub kind: ProblemKind,
    pub sigma: SigmaParameter,
    pub param: f64,
    pub shift_b: f64,
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn smallest_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    let eig = SymmetricEigen::new(m.clone());
    eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Positive definiteness with a margin: the Cholesky factorization must
/// succeed and its pivots must stay clear of roundoff scale. A matrix with
/// an exact kernel can slip through a bare factorization on pivots of size
/// sqrt(epsilon), which would poison every subsequent triangular solve.
fn is_definite(a: &DMatrix<f64>) -> bool {
    let n = a.nrows();
    match Cholesky::new(a.clone()) {
        None => false,
        Some(chol) => {
            let l = chol.l();
            let mut dmin = f64::INFINITY;
            let mut dmax = 0.0_f64;
            for i in 0..n {
                dmin = dmin.min(l[(i, i)]);
                dmax = dmax.max(l[(i, i)]);
            }
            let ratio_tol = 10.0 * (n as f64 * f64::EPSILON).sqrt();
            dmin > dmax * ratio_tol
        }
    }
}

/// Verifies that `m` is positive semidefinite up to roundoff.
fn check_psd(m: &DMatrix<f64>, name: &str) -> Result<()> {
    if m.nrows() == 0 {
        return Ok(());
    }
    let scale = m.iter().fold(0.0_f64, |acc, &v| acc.max(v.abs()));
    let smallest = smallest_eigenvalue(m);
    if smallest < -1e-10 * scale.max(1.0) {
        return Err(SteklovError::ContractViolation(format!(
            "{name} has negative eigenvalue {smallest:.3e}"
        )));
    }
    Ok(())
}

/// Builds the shifted pencil for one problem family, verifying coercivity.
///
/// Fails with [`SteklovError::CoercivityFailure`] when `a0 + b bmass` is not
/// positive definite, reporting the smallest Ritz value so the caller can
/// raise `b` or move the spectral parameter.
pub fn build_pencil(
    basis: &SpectralBasis,
    sigma: &SigmaParameter,
    kind: ProblemKind,
    param: f64,
    shift_b: f64,
) -> Result<FormPencil> {
    if shift_b < 0.0 {
        return Err(SteklovError::InvalidParameter(format!(
            "shift b must be nonnegative, got {shift_b}"
        )));
    }
    let parts = pencil_parts(basis, sigma, kind, param);
    build_pencil_from_parts(basis.clone(), parts, sigma, kind, param, shift_b)
}

/// Same as [`build_pencil`] but reusing previously assembled matrices.
pub fn build_pencil_from_parts(
    basis: SpectralBasis,
    parts: PencilParts,
    sigma: &SigmaParameter,
    kind: ProblemKind,
    param: f64,
    shift_b: f64,
) -> Result<FormPencil> {
    let a = &parts.a0 + &parts.bmass * shift_b;
    check_psd(&parts.bmass, "boundary mass")?;
    if !basis.is_empty() && !is_definite(&a) {
        return Err(SteklovError::CoercivityFailure {
            smallest: smallest_eigenvalue(&a),
        });
    }
    Ok(FormPencil {
        basis,
        a,
        bmass: parts.bmass,
        kind,
        sigma: *sigma,
        param,
        shift_b,
    })
}

/// Orthonormalizes a disk mode basis against the `Q_sigma + M0` Gram by
/// modified Gram-Schmidt, improving conditioning for large radial degree.
pub fn orthonormalized_disk_basis(
    basis: &SpectralBasis,
    sigma: &SigmaParameter,
) -> Result<SpectralBasis> {
    if basis.geometry != Geometry::Disk {
        return Err(SteklovError::InvalidParameter(
            "orthonormalization targets disk mode bases".into(),
        ));
    }
    let n = basis.len();
    let g = assemble_qsigma(basis, sigma) + assemble_boundary_mass(basis, TraceOrder::Value);
    let mut w = DMatrix::<f64>::identity(n, n);
    for j in 0..n {
        // Two projection passes: a single sweep leaves orthogonality
        // defects at the square root of the Gram's condition number.
        for _pass in 0..2 {
            for i in 0..j {
                let wi = w.column(i).into_owned();
                let gj = &g * w.column(j);
                let proj = wi.dot(&gj);
                let update = wi * proj;
                let mut col = w.column_mut(j);
                col -= update;
            }
            let gj = &g * w.column(j);
            let norm = w.column(j).dot(&gj).sqrt();
            if !(norm > 1e-150) {
                return Err(SteklovError::ContractViolation(
                    "Gram-Schmidt breakdown: basis is numerically dependent".into(),
                ));
            }
            let mut col = w.column_mut(j);
            col /= norm;
        }
    }
    Ok(basis.recombine(&w, "-mgs"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    fn single(geometry: Geometry, f: Poly2) -> SpectralBasis {
        SpectralBasis {
            geometry,
            mode: None,
            functions: vec![f],
            radial: None,
            label: "test".into(),
        }
    }

    #[test]
    fn interior_form_matches_closed_forms_on_disk() {
        let sigma0 = SigmaParameter::new(0.0, 2).unwrap();
        let x2 = Poly2::monomial(2, 0, 1.0);
        let b = single(Geometry::Disk, x2);
        let a = assemble_qsigma(&b, &sigma0);
        assert!(close(a[(0, 0)], 4.0 * PI, 1e-14));

        // x^2 has a harmonic complement direction: the form is
        // sigma-independent on it.
        let sigma3 = SigmaParameter::new(0.3, 2).unwrap();
        let a = assemble_qsigma(&b, &sigma3);
        assert!(close(a[(0, 0)], 4.0 * PI, 1e-14));

        let r2 = single(Geometry::Disk, Poly2::r_squared());
        let a = assemble_qsigma(&r2, &sigma3);
        assert!(close(a[(0, 0)], 8.0 * PI * 1.3, 1e-14));

        // Affine functions are in the kernel.
        let aff = single(
            Geometry::Disk,
            Poly2::var_x().scale(2.0).add(&Poly2::constant(-0.7)),
        );
        let a = assemble_qsigma(&aff, &sigma3);
        assert!(a[(0, 0)].abs() < 1e-14);
    }

    #[test]
    fn boundary_mass_matches_closed_forms_on_disk() {
        let one = single(Geometry::Disk, Poly2::constant(1.0));
        let m0 = assemble_boundary_mass(&one, TraceOrder::Value);
        assert!(close(m0[(0, 0)], 2.0 * PI, 1e-14));
        let m1 = assemble_boundary_mass(&one, TraceOrder::Normal);
        assert!(m1[(0, 0)].abs() < 1e-14);

        let x2 = single(Geometry::Disk, Poly2::monomial(2, 0, 1.0));
        let m0 = assemble_boundary_mass(&x2, TraceOrder::Value);
        assert!(close(m0[(0, 0)], 0.75 * PI, 1e-14));
        let m1 = assemble_boundary_mass(&x2, TraceOrder::Normal);
        assert!(close(m1[(0, 0)], 3.0 * PI, 1e-14));
    }

    #[test]
    fn polar_kernels_agree_with_cartesian_quadrature_at_low_modes() {
        // Route the same trial functions through both assembly paths; at
        // low modes the Cartesian path is still accurate, so the two must
        // agree to near machine precision.
        for l in 0..=5u32 {
            for &s in &[0.0, 0.4, -0.6] {
                let sigma = SigmaParameter::new(s, 2).unwrap();
                let modal = SpectralBasis::disk_mode(l, 3);
                let mut generic = modal.clone();
                generic.mode = None;
                generic.radial = None;
                let qa = assemble_qsigma(&modal, &sigma);
                let qb = assemble_qsigma(&generic, &sigma);
                let scale = qb.iter().fold(1.0_f64, |m, &v| m.max(v.abs()));
                for i in 0..qa.nrows() {
                    for j in 0..qa.ncols() {
                        assert!(
                            (qa[(i, j)] - qb[(i, j)]).abs() <= 1e-11 * scale,
                            "Q mismatch l={l} s={s} ({i},{j}): {} vs {}",
                            qa[(i, j)],
                            qb[(i, j)]
                        );
                    }
                }
                for order in [TraceOrder::Value, TraceOrder::Normal] {
                    let ma = assemble_boundary_mass(&modal, order);
                    let mb = assemble_boundary_mass(&generic, order);
                    let scale = mb.iter().fold(1.0_f64, |m, &v| m.max(v.abs()));
                    for i in 0..ma.nrows() {
                        for j in 0..ma.ncols() {
                            assert!(
                                (ma[(i, j)] - mb[(i, j)]).abs() <= 1e-11 * scale,
                                "mass mismatch l={l} ({i},{j})"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn square_affine_functions_behave() {
        let sigma = SigmaParameter::new(0.25, 2).unwrap();
        let u = single(Geometry::Square, Poly2::var_x());
        let a = assemble_qsigma(&u, &sigma);
        assert!(a[(0, 0)].abs() < 1e-14);
        // Edge integral of the squared normal component of e1.
        let m1 = assemble_boundary_mass(&u, TraceOrder::Normal);
        assert!(close(m1[(0, 0)], 2.0, 1e-14));
        let m0 = assemble_boundary_mass(&u, TraceOrder::Value);
        assert!(close(m0[(0, 0)], 5.0 / 3.0, 1e-14));
    }

    #[test]
    fn square_interior_form_cross_checks_disk_formula() {
        // Q_sigma(x^2, x^2) over the square is 4 (area 1 times |D2|^2 = 4),
        // sigma-independent as on the disk.
        let sigma = SigmaParameter::new(-0.5, 2).unwrap();
        let u = single(Geometry::Square, Poly2::monomial(2, 0, 1.0));
        let a = assemble_qsigma(&u, &sigma);
        assert!(close(a[(0, 0)], 4.0, 1e-14));
    }

    #[test]
    fn pencils_assemble_with_correct_shapes_and_shift() {
        let sigma = SigmaParameter::new(0.0, 2).unwrap();
        let basis = SpectralBasis::disk_mode(1, 2);
        let pencil = build_pencil(&basis, &sigma, ProblemKind::BsM, -1.0, 0.0).unwrap();
        assert_eq!(pencil.a.nrows(), 3);
        // A = Qsigma - mu M0 must be positive definite at mu < 0.
        assert!(Cholesky::new(pencil.a.clone()).is_some());

        // Mode 0 with the trace-weight family needs a shift: the constant
        // has zero interior energy and zero normal derivative.
        let basis0 = SpectralBasis::disk_mode(0, 2);
        let err = build_pencil(&basis0, &sigma, ProblemKind::BsL, -5.0, 0.0);
        assert!(matches!(err, Err(SteklovError::CoercivityFailure { .. })));
        let ok = build_pencil(&basis0, &sigma, ProblemKind::BsL, -5.0, 1.0);
        assert!(ok.is_ok());
    }

    #[test]
    fn coercivity_failure_reports_negative_ritz_value() {
        let sigma = SigmaParameter::new(0.0, 2).unwrap();
        let basis = SpectralBasis::disk_mode(1, 2);
        // lambda = 10 far beyond the first constrained eigenvalue: no b can
        // rescue the form on a basis containing near-zero-trace functions.
        let err = build_pencil(&basis, &sigma, ProblemKind::BsL, 10.0, 0.0);
        match err {
            Err(SteklovError::CoercivityFailure { smallest }) => assert!(smallest < 0.0),
            Err(e) => panic!("expected coercivity failure, got {e}"),
            Ok(_) => panic!("expected coercivity failure, got success"),
        }
    }

    #[test]
    fn gram_schmidt_orthonormalizes_high_degree_modes() {
        let sigma = SigmaParameter::new(0.0, 2).unwrap();
        let basis = SpectralBasis::disk_mode(2, 10);
        let ortho = orthonormalized_disk_basis(&basis, &sigma).unwrap();
        let g = assemble_qsigma(&ortho, &sigma)
            + assemble_boundary_mass(&ortho, TraceOrder::Value);
        // The raw radial-monomial Gram at this degree has condition number
        // around 1e13; coefficient cancellation floors any reassembled
        // entry near eps * kappa. The guarantee that matters is
        // conditioning repair: the recombined Gram must be close to the
        // identity in the spectral sense, not entrywise to machine
        // precision.
        let eig = nalgebra::SymmetricEigen::new(g);
        let lmin = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        let lmax = eig.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
        assert!(lmin > 0.99, "smallest Gram eigenvalue {lmin}");
        assert!(lmax < 1.01, "largest Gram eigenvalue {lmax}");
    }
}
