//! High-level spectrum drivers: disk mode merging and square tensor solves.
//!
//! The disk decouples into angular modes; each mode contributes a small
//! pencil whose boundary mass has rank one, hence exactly one finite
//! eigenvalue — the mode's branch. Sine and cosine copies of a mode share
//! matrices, so only the cosine copy is solved and its twin is restored at
//! merge time. The square is one tensor-product pencil.
//!
//! When the spectral parameter has crossed limiting eigenvalues (the fixed
//! trace-weight family past zero-normal-derivative values, or the fixed
//! normal-weight family past zero-trace values), the driver first solves
//! the limiting problem on the same trial space and deflates the crossed
//! eigenvectors, restoring coercivity.

use crate::basis::{constrain_basis, SpectralBasis, TraceConstraint};
use crate::boundary::BoundaryFn;
use crate::eigensolver::{
    choose_shift_b, deflate_and_build, solve_pencil, trace_basis,
};
use crate::error::{Result, SteklovError};
use crate::param::{Geometry, ProblemKind, SigmaParameter};
use crate::poly::{Poly1, Poly2};
use crate::spectrum::Spectrum;
use nalgebra::{DMatrix, DVector};

/// Relative distance below which the spectral parameter is considered to
/// collide with a limiting eigenvalue, where the problem degenerates.
pub const DEGENERATE_REL_TOL: f64 = 1e-8;

/// Interior representation of one computed eigenfunction.
#[derive(Debug, Clone)]
pub enum InteriorRepr {
    /// `radial(r) * cos(l theta)` (harmonic 0) or `* sin(l theta)` (1).
    DiskMode { l: u32, harmonic: u32, radial: Poly1 },
    /// Bivariate polynomial on the unit square.
    Square { poly: Poly2 },
}

impl InteriorRepr {
    /// Evaluates the eigenfunction at a Cartesian point.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            InteriorRepr::DiskMode { l, harmonic, radial } => {
                let r = x.hypot(y);
                let th = y.atan2(x);
                let ang = if *harmonic == 0 {
                    (*l as f64 * th).cos()
                } else {
                    (*l as f64 * th).sin()
                };
                radial.eval(r) * ang
            }
            InteriorRepr::Square { poly } => poly.eval(x, y),
        }
    }
}

/// One merged eigenpair of a Galerkin solve.
#[derive(Debug, Clone)]
pub struct SteklovEigenpair {
    pub value: f64,
    /// Shift used by the pencil this pair came from.
    pub shift_b: f64,
    pub residual: f64,
    pub interior: InteriorRepr,
    /// Normalized boundary function `sqrt(value + b) * trace`; the family
    /// of these over all pairs is L2-orthonormal on the boundary.
    pub trace: BoundaryFn,
}

/// A full Galerkin spectrum with its eigenpairs and diagnostics.
pub struct GalerkinSolution {
    pub spectrum: Spectrum,
    /// Eigenpairs aligned with `spectrum.values`.
    pub pairs: Vec<SteklovEigenpair>,
    pub max_residual: f64,
    /// Total number of deflated directions across pencils.
    pub deflated_dim: usize,
}

/// The limiting problem guarding each parameterized family, with the
/// essential constraint carving its trial space.
fn guard_problem(kind: ProblemKind) -> Option<(ProblemKind, TraceConstraint)> {
    match kind {
        ProblemKind::BsM => Some((ProblemKind::Nbs, TraceConstraint::NormalZero)),
        ProblemKind::BsL => Some((ProblemKind::Dbs, TraceConstraint::TraceZero)),
        ProblemKind::Dbs | ProblemKind::Nbs => None,
    }
}

struct PencilOutcome {
    values: Vec<f64>,
    residuals: Vec<f64>,
    /// Eigenvectors in the pencil basis, one column per value.
    vectors: DMatrix<f64>,
    basis: SpectralBasis,
    traces: Vec<BoundaryFn>,
    shift_b: f64,
    deflated: usize,
}

/// Solves one family pencil on the given working basis, deflating crossed
/// limiting eigenvectors first when the parameter requires it.
fn solve_family_on_basis(
    kind: ProblemKind,
    sigma: &SigmaParameter,
    param: f64,
    work: &SpectralBasis,
) -> Result<PencilOutcome> {
    if work.is_empty() {
        return Ok(PencilOutcome {
            values: vec![],
            residuals: vec![],
            vectors: DMatrix::zeros(0, 0),
            basis: work.clone(),
            traces: vec![],
            shift_b: 0.0,
            deflated: 0,
        });
    }

    let mut constraint_cols: Vec<DVector<f64>> = Vec::new();
    if let Some((gkind, gcon)) = guard_problem(kind) {
        // Limiting eigenvalues are nonnegative, so a strictly negative
        // parameter cannot have crossed any of them.
        if param > -DEGENERATE_REL_TOL {
            let gb = constrain_basis(work, gcon)?;
            if !gb.basis.is_empty() {
                let gp = choose_shift_b(&gb.basis, sigma, gkind, 0.0)?;
                let gr = solve_pencil(&gp)?;
                for (i, &gv) in gr.eigenvalues.iter().enumerate() {
                    if (param - gv).abs() <= DEGENERATE_REL_TOL * (1.0 + param.abs()) {
                        return Err(SteklovError::DegenerateParameter {
                            value: param,
                            index: i,
                        });
                    }
                    if gv < param {
                        constraint_cols.push(&gb.weights * gr.eigenvectors.column(i));
                    }
                }
            }
        }
    }

    let (pencil, deflated) = if constraint_cols.is_empty() {
        (choose_shift_b(work, sigma, kind, param)?, 0)
    } else {
        let c = DMatrix::from_columns(&constraint_cols);
        let d = deflate_and_build(work, sigma, kind, param, &c)?;
        (d.pencil, d.deflated_dim)
    };
    let report = solve_pencil(&pencil)?;
    let traces = trace_basis(&report, &pencil)?;
    Ok(PencilOutcome {
        values: report.eigenvalues,
        residuals: report.residuals,
        vectors: report.eigenvectors,
        basis: pencil.basis,
        traces,
        shift_b: pencil.shift_b,
        deflated,
    })
}

/// Applies the family's essential constraint for the limiting problems.
fn working_basis(kind: ProblemKind, raw: &SpectralBasis) -> Result<SpectralBasis> {
    Ok(match kind {
        ProblemKind::Dbs => constrain_basis(raw, TraceConstraint::TraceZero)?.basis,
        ProblemKind::Nbs => constrain_basis(raw, TraceConstraint::NormalZero)?.basis,
        ProblemKind::BsM | ProblemKind::BsL => raw.clone(),
    })
}

/// Solves one disk angular mode, returning finite eigenvalues with
/// combined radial parts.
fn solve_disk_mode(
    kind: ProblemKind,
    sigma: &SigmaParameter,
    param: f64,
    l: u32,
    k_max: u32,
) -> Result<PencilOutcome> {
    let mut raw = SpectralBasis::disk_mode(l, k_max);
    if raw.len() > 7 {
        raw = crate::assembly::orthonormalized_disk_basis(&raw, sigma)?;
    }
    let work = working_basis(kind, &raw)?;
    solve_family_on_basis(kind, sigma, param, &work)
}

/// Finite eigenvalues of one disk mode (ascending), deflated as needed.
pub fn disk_mode_values(
    kind: ProblemKind,
    sigma: &SigmaParameter,
    param: f64,
    l: u32,
    k_max: u32,
) -> Result<Vec<f64>> {
    Ok(solve_disk_mode(kind, sigma, param, l, k_max)?.values)
}

/// Cosine-copy eigenpairs of one solved disk mode, ascending by value.
fn cosine_pairs(outcome: &PencilOutcome, l: u32) -> Vec<SteklovEigenpair> {
    let radial_parts = outcome
        .basis
        .radial
        .as_ref()
        .expect("disk basis carries radial parts");
    let mut pairs = Vec::with_capacity(outcome.values.len());
    for (j, &value) in outcome.values.iter().enumerate() {
        let coords: Vec<f64> = outcome.vectors.column(j).iter().cloned().collect();
        let mut radial = Poly1::zero();
        for (c, rp) in coords.iter().zip(radial_parts) {
            radial = radial.add(&rp.scale(*c));
        }
        let amp = circle_amp(&outcome.traces[j], l);
        pairs.push(SteklovEigenpair {
            value,
            shift_b: outcome.shift_b,
            residual: outcome.residuals[j],
            interior: InteriorRepr::DiskMode {
                l,
                harmonic: 0,
                radial,
            },
            trace: BoundaryFn::circle_harmonic(l, 0, amp),
        });
    }
    pairs
}

/// Eigenpairs of one disk angular mode (cosine copies only), ascending,
/// with deflation applied automatically when the parameter requires it.
pub fn disk_mode_eigenpairs(
    kind: ProblemKind,
    sigma: &SigmaParameter,
    param: f64,
    l: u32,
    k_max: u32,
) -> Result<Vec<SteklovEigenpair>> {
    let outcome = solve_disk_mode(kind, sigma, param, l, k_max)?;
    Ok(cosine_pairs(&outcome, l))
}

/// Sine-parity copy of a cosine-mode eigenpair (`l >= 1`).
pub fn sine_twin(pair: &SteklovEigenpair) -> SteklovEigenpair {
    let (l, radial) = match &pair.interior {
        InteriorRepr::DiskMode { l, radial, .. } => (*l, radial.clone()),
        InteriorRepr::Square { .. } => panic!("parity twins exist only for disk modes"),
    };
    SteklovEigenpair {
        value: pair.value,
        shift_b: pair.shift_b,
        residual: pair.residual,
        interior: InteriorRepr::DiskMode {
            l,
            harmonic: 1,
            radial,
        },
        trace: BoundaryFn::circle_harmonic(l, 1, circle_amp(&pair.trace, l)),
    }
}

/// Amplitude of the single circular harmonic in a mode trace.
fn circle_amp(trace: &BoundaryFn, l: u32) -> f64 {
    match trace {
        BoundaryFn::CircleFourier { c0, terms } => {
            if l == 0 {
                *c0
            } else {
                terms.get(&l).map(|&(a, _)| a).unwrap_or(0.0)
            }
        }
        BoundaryFn::SquareEdges { .. } => unreachable!("disk trace expected"),
    }
}

/// Solves a problem family on the unit disk by merging angular modes
/// `0..=l_max`, each with radial resolution `k_max`, and returns the
/// `count` smallest eigenvalues with eigenpairs.
pub fn solve_disk(
    kind: ProblemKind,
    sigma: &SigmaParameter,
    param: f64,
    l_max: u32,
    k_max: u32,
    count: usize,
) -> Result<GalerkinSolution> {
    if k_max < 1 {
        return Err(SteklovError::InvalidParameter(
            "disk solves need radial resolution k_max >= 1".into(),
        ));
    }
    let mut pairs: Vec<SteklovEigenpair> = Vec::new();
    let mut deflated_total = 0;
    for l in 0..=l_max {
        let outcome = solve_disk_mode(kind, sigma, param, l, k_max)?;
        deflated_total += outcome.deflated;
        for cos_pair in cosine_pairs(&outcome, l) {
            if l >= 1 {
                pairs.push(sine_twin(&cos_pair));
            }
            pairs.push(cos_pair);
        }
    }
    finish_solution(kind, pairs, count, deflated_total, Geometry::Disk)
}

/// Solves a problem family on the unit square with a tensor basis of the
/// given per-variable degree, returning the `count` smallest eigenvalues.
pub fn solve_square(
    kind: ProblemKind,
    sigma: &SigmaParameter,
    param: f64,
    degree: u32,
    count: usize,
) -> Result<GalerkinSolution> {
    if degree < 2 {
        return Err(SteklovError::InvalidParameter(
            "square solves need polynomial degree >= 2".into(),
        ));
    }
    let raw = SpectralBasis::square_tensor(degree);
    let work = working_basis(kind, &raw)?;
    let outcome = solve_family_on_basis(kind, sigma, param, &work)?;
    let mut pairs: Vec<SteklovEigenpair> = Vec::new();
    for (j, &value) in outcome.values.iter().enumerate() {
        let coords: Vec<f64> = outcome.vectors.column(j).iter().cloned().collect();
        let combined = Poly2::combine(&coords, &outcome.basis.functions);
        pairs.push(SteklovEigenpair {
            value,
            shift_b: outcome.shift_b,
            residual: outcome.residuals[j],
            interior: InteriorRepr::Square { poly: combined },
            trace: outcome.traces[j].clone(),
        });
    }
    finish_solution(kind, pairs, count, outcome.deflated, Geometry::Square)
}

fn finish_solution(
    kind: ProblemKind,
    mut pairs: Vec<SteklovEigenpair>,
    count: usize,
    deflated_dim: usize,
    geometry: Geometry,
) -> Result<GalerkinSolution> {
    pairs.sort_by(|a, b| a.value.total_cmp(&b.value));
    if pairs.len() < count {
        return Err(SteklovError::ConfigurationError(format!(
            "resolution yields {} eigenvalues, {} requested; raise l_max/degree",
            pairs.len(),
            count
        )));
    }
    pairs.truncate(count);
    let values: Vec<f64> = pairs.iter().map(|p| p.value).collect();
    let shift_b = pairs.iter().map(|p| p.shift_b).fold(0.0_f64, f64::max);
    let mut spectrum = Spectrum::from_sorted_values(kind, values, shift_b)?;
    spectrum.basis_label = Some(match geometry {
        Geometry::Disk => "disk-modes".to_string(),
        Geometry::Square => "square-tensor".to_string(),
    });
    let max_residual = pairs.iter().map(|p| p.residual).fold(0.0_f64, f64::max);
    Ok(GalerkinSolution {
        spectrum,
        pairs,
        max_residual,
        deflated_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::{lambda_branch, mu_branch};

    fn sigma0() -> SigmaParameter {
        SigmaParameter::new(0.0, 2).unwrap()
    }

    fn assert_close_seq(got: &[f64], want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!(
                (g - w).abs() <= tol * (1.0 + w.abs()),
                "{g} vs {w} in {got:?} vs {want:?}"
            );
        }
    }

    #[test]
    fn zero_trace_disk_spectrum_matches_closed_form() {
        let sol = solve_disk(ProblemKind::Dbs, &sigma0(), 0.0, 4, 2, 5).unwrap();
        assert_close_seq(&sol.spectrum.values, &[1.0, 3.0, 3.0, 5.0, 5.0], 1e-10);
        assert_eq!(sol.spectrum.multiplicities, vec![1, 2, 2]);
        assert!(sol.max_residual < 1e-9);
    }

    #[test]
    fn zero_normal_disk_spectrum_matches_closed_form() {
        let sol = solve_disk(ProblemKind::Nbs, &sigma0(), 0.0, 5, 2, 7).unwrap();
        assert_close_seq(
            &sol.spectrum.values,
            &[0.0, 3.0, 3.0, 20.0, 20.0, 63.0, 63.0],
            1e-9,
        );
    }

    #[test]
    fn trace_weight_disk_spectrum_matches_branches() {
        let sol = solve_disk(ProblemKind::BsM, &sigma0(), -1.0, 5, 3, 5).unwrap();
        let want = [0.75, 0.75, 1.0, 41.0 / 21.0, 41.0 / 21.0];
        assert_close_seq(&sol.spectrum.values, &want, 1e-10);
    }

    #[test]
    fn fixed_lambda_disk_spectrum_reports_zero_modes_and_j0() {
        let sol = solve_disk(ProblemKind::BsL, &sigma0(), 0.0, 4, 2, 5).unwrap();
        assert_close_seq(&sol.spectrum.values, &[0.0, 0.0, 0.0, 7.2, 7.2], 1e-9);
        assert_eq!(sol.spectrum.j0, Some(4));
        assert!(sol.spectrum.shift_b > 0.0);
    }

    #[test]
    fn trace_bases_are_boundary_orthonormal_across_modes() {
        let sol = solve_disk(ProblemKind::BsL, &sigma0(), 0.0, 4, 2, 5).unwrap();
        for i in 0..sol.pairs.len() {
            for j in 0..sol.pairs.len() {
                let inner = sol.pairs[i].trace.inner(&sol.pairs[j].trace);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (inner - want).abs() < 1e-9,
                    "trace Gram ({i},{j}) = {inner}"
                );
            }
        }
        // First trace is the normalized constant.
        let c = BoundaryFn::constant(Geometry::Disk, (2.0 * std::f64::consts::PI).powf(-0.5));
        let diff = sol.pairs[0].trace.sub(&c).norm_sq().min(
            sol.pairs[0].trace.add(&c).norm_sq(),
        );
        assert!(diff < 1e-18, "constant trace defect {diff}");
    }

    #[test]
    fn deflated_disk_spectrum_matches_analytic_branches() {
        let mu = 10.0;
        let sol = solve_disk(ProblemKind::BsM, &sigma0(), mu, 6, 3, 7).unwrap();
        // Analytic comparison: branch values per mode, duplicated by parity.
        let mut want: Vec<f64> = vec![1.0]; // persistent mode-0 branch
        for l in 1..=6u32 {
            let v = lambda_branch(l, 2, mu).unwrap();
            want.push(v);
            want.push(v);
        }
        want.sort_by(f64::total_cmp);
        want.truncate(7);
        assert_close_seq(&sol.spectrum.values, &want, 1e-9);
        // Spot values fixed by the limiting eigenvalues 3 and 20:
        // mode 2 keeps (36 - 50) / (20 - 10) = -1.4 without deflation,
        // mode 1 is deflated and keeps 30/7.
        assert!((sol.spectrum.values[0] + 1.4).abs() < 1e-9);
        assert!(sol.spectrum.values.iter().any(|v| (v - 30.0 / 7.0).abs() < 1e-9));
        // Modes 0 and 1 each deflated one direction.
        assert_eq!(sol.deflated_dim, 2);
    }

    #[test]
    fn parameter_at_limiting_eigenvalue_is_degenerate() {
        let err = solve_disk(ProblemKind::BsM, &sigma0(), 20.0, 4, 2, 3);
        assert!(matches!(
            err,
            Err(SteklovError::DegenerateParameter { .. })
        ));
    }

    #[test]
    fn fixed_lambda_past_first_zero_trace_value_deflates() {
        // lambda = 2 lies between the first zero-trace eigenvalue 1 (mode 0)
        // and the next ones at 3; mode 0 must deflate its crossed vector.
        let sol = solve_disk(ProblemKind::BsL, &sigma0(), 2.0, 3, 2, 3).unwrap();
        assert!(sol.deflated_dim >= 1);
        // Analytic: mu_(l)(2) for crossed-parameter branches.
        let m1 = mu_branch(1, 2, 2.0).unwrap();
        assert!(
            sol.spectrum.values.iter().any(|v| (v - m1).abs() < 1e-8),
            "expected branch value {m1} in {:?}",
            sol.spectrum.values
        );
    }

    #[test]
    fn square_solves_produce_sorted_positive_zero_trace_values() {
        let sol = solve_square(ProblemKind::Dbs, &sigma0(), 0.0, 5, 4).unwrap();
        assert!(sol.spectrum.values[0] > 0.0);
        for w in sol.spectrum.values.windows(2) {
            assert!(w[0] <= w[1]);
        }
        assert!(sol.max_residual < 1e-8);
    }

    #[test]
    fn square_fixed_lambda_zero_has_affine_kernel_and_j0() {
        let sol = solve_square(ProblemKind::BsL, &sigma0(), 0.0, 5, 5).unwrap();
        assert!(sol.spectrum.values[0].abs() < 1e-8);
        assert!(sol.spectrum.values[1].abs() < 1e-8);
        assert!(sol.spectrum.values[2].abs() < 1e-8);
        assert!(sol.spectrum.values[3] > 1e-6);
        assert_eq!(sol.spectrum.j0, Some(4));
    }

    #[test]
    fn requesting_more_values_than_resolved_is_a_configuration_error() {
        let err = solve_disk(ProblemKind::Dbs, &sigma0(), 0.0, 1, 2, 10);
        assert!(matches!(err, Err(SteklovError::ConfigurationError(_))));
    }
}
