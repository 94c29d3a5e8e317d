//! The seven subcommand runners. Each resolves its settings (flag over
//! config over default), computes, and returns a `RunOutput` whose verdict
//! drives the exit status.

use serde_json::{json, Value};

use steklov::assembly::build_pencil;
use steklov::ball::{ball_spectrum, ball_spectrum_first};
use steklov::basis::{constrain_basis, SpectralBasis, TraceConstraint};
use steklov::branch::{check_lipschitz, check_monotone, parse_grid, sweep};
use steklov::dirichlet::{compat_residual, corner_compat_check, solve_dirichlet};
use steklov::eigensolver::choose_shift_b;
use steklov::solver::{solve_disk, solve_square};
use steklov::weyl::{ball_constant, compare, fit_power_law};
use steklov::{Geometry, ProblemKind, SigmaParameter, Spectrum};

use crate::cli;
use crate::config::Settings;
use crate::data::{eval_points, parse_boundary, parse_eval};
use crate::output::{cols, fmt17, RunOutput, Table};

/// Per-run context resolved from the global flags.
pub struct Ctx {
    pub seed: u64,
}

fn problem(settings: &mut Settings, flag: Option<String>) -> Result<ProblemKind, String> {
    let name = settings.require("problem", flag, None)?;
    ProblemKind::parse(&name).map_err(|e| e.to_string())
}

fn geometry(settings: &mut Settings, flag: Option<String>, default: &str) -> Result<Geometry, String> {
    let name = settings.require("geometry", flag, Some(default.to_string()))?;
    Geometry::parse(&name).map_err(|e| e.to_string())
}

fn sigma(settings: &mut Settings, flag: Option<f64>) -> Result<SigmaParameter, String> {
    let value = settings.require("sigma", flag, Some(0.0))?;
    SigmaParameter::new(value, 2).map_err(|e| e.to_string())
}

fn spectrum_table(spectrum: &Spectrum) -> Table {
    Table {
        columns: cols(&["j", "value"]),
        rows: spectrum
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| vec![(i + 1).to_string(), fmt17(*v)])
            .collect(),
    }
}

fn spectrum_json(spectrum: &Spectrum) -> Value {
    json!({
        "values": spectrum.values,
        "multiplicities": spectrum.multiplicities,
        "j0": spectrum.j0,
        "shift_b": spectrum.shift_b,
        "basis": spectrum.basis_label,
    })
}

/// Closed-form unit-ball spectra; `--count` asks for the first so many
/// values, `--lmax` for all branches through that mode index.
pub fn ball_spectrum_run(settings: &mut Settings, a: cli::BallSpectrumArgs) -> Result<RunOutput, String> {
    let kind = problem(settings, a.problem)?;
    let dim = settings.require("dim", a.dim, Some(2))?;
    let sigma_value = settings.require("sigma", a.sigma, Some(0.0))?;
    let param = settings.require("param", a.param, Some(0.0))?;
    let lmax = settings.resolve("lmax", a.lmax, None)?;
    let count = settings.resolve("count", a.count, None)?;
    let spectrum = match (lmax, count) {
        (Some(_), Some(_)) => return Err("give either --lmax or --count, not both".into()),
        (None, Some(count)) => {
            ball_spectrum_first(kind, dim, sigma_value, param, count).map_err(|e| e.to_string())?
        }
        (lmax, None) => ball_spectrum(kind, dim, sigma_value, param, lmax.unwrap_or(10))
            .map_err(|e| e.to_string())?,
    };
    Ok(RunOutput {
        table: spectrum_table(&spectrum),
        data: json!({
            "kind": kind.name(),
            "dim": dim,
            "param": param,
            "spectrum": spectrum_json(&spectrum),
        }),
        verdict_ok: None,
    })
}

/// Galerkin solve on the disk (`--lmax`/`--kmax`) or square (`--degree`).
pub fn solve_run(settings: &mut Settings, a: cli::SolveArgs) -> Result<RunOutput, String> {
    let kind = problem(settings, a.problem)?;
    let geometry = geometry(settings, a.geometry, "disk")?;
    let sigma = sigma(settings, a.sigma)?;
    let param = settings.require("param", a.param, Some(0.0))?;
    let lmax = settings.require("lmax", a.lmax, Some(8))?;
    let kmax = settings.require("kmax", a.kmax, Some(3))?;
    let degree = settings.require("degree", a.degree, Some(6))?;
    let count = settings.require("count", a.count, Some(10))?;
    let solution = match geometry {
        Geometry::Disk => solve_disk(kind, &sigma, param, lmax, kmax, count),
        Geometry::Square => solve_square(kind, &sigma, param, degree, count),
    }
    .map_err(|e| e.to_string())?;
    Ok(RunOutput {
        table: spectrum_table(&solution.spectrum),
        data: json!({
            "kind": kind.name(),
            "geometry": geometry.name(),
            "param": param,
            "spectrum": spectrum_json(&solution.spectrum),
            "max_residual": solution.max_residual,
            "deflated_dim": solution.deflated_dim,
        }),
        verdict_ok: None,
    })
}

/// Sweeps eigenvalue branches over a parameter grid and checks their
/// monotonicity and Lipschitz bound; a violated check is a verdict failure.
pub fn branch_trace_run(settings: &mut Settings, a: cli::BranchTraceArgs) -> Result<RunOutput, String> {
    let kind = problem(settings, a.problem)?;
    let geometry = geometry(settings, a.geometry, "disk")?;
    let sigma = sigma(settings, a.sigma)?;
    let grid_desc: String = settings.require("grid", a.grid, None)?;
    let jmax = settings.require("jmax", a.jmax, Some(5))?;
    let delta = settings.require("delta", a.delta, Some(1.0))?;
    let allow_deflated = settings.require("allow-deflated", a.allow_deflated, Some(false))?;
    if jmax == 0 {
        return Err("--jmax must be at least 1".into());
    }
    let grid = parse_grid(&grid_desc).map_err(|e| e.to_string())?;
    let table = sweep(kind, geometry, &sigma, &grid, jmax, allow_deflated)
        .map_err(|e| e.to_string())?;

    let monotone = check_monotone(&table);
    let mut ok = monotone.iter().all(|v| v.ok);
    // The Lipschitz bound is stated on grids inside (-inf, -delta]; on any
    // other grid it is reported as skipped rather than silently dropped.
    let lipschitz_applicable = table.parameter_grid.iter().all(|&p| p <= -delta);
    let lipschitz: Value = if lipschitz_applicable {
        let verdicts = check_lipschitz(&table, delta).map_err(|e| e.to_string())?;
        ok = ok && verdicts.iter().all(|v| v.ok);
        json!({
            "delta": delta,
            "rows": verdicts
                .iter()
                .map(|v| json!({"row": v.row + 1, "ok": v.ok}))
                .collect::<Vec<_>>(),
        })
    } else {
        json!({"skipped": format!("grid exceeds -delta = {}", -delta)})
    };

    let mut columns = vec!["param".to_string()];
    columns.extend((1..=jmax).map(|j| format!("branch_{j}")));
    let rows = (0..grid.len())
        .map(|k| {
            let mut row = vec![fmt17(table.parameter_grid[k])];
            for j in 0..jmax {
                row.push(fmt17(table.sorted[j][k]));
            }
            row
        })
        .collect();

    Ok(RunOutput {
        table: Table { columns, rows },
        data: json!({
            "kind": kind.name(),
            "geometry": geometry.name(),
            "source": table.source.name(),
            "grid": table.parameter_grid,
            "branches": table.sorted,
            "limit_targets": table.targets,
            "monotone": monotone
                .iter()
                .map(|v| json!({"row": v.row + 1, "ok": v.ok, "first_violation": v.first_violation}))
                .collect::<Vec<_>>(),
            "lipschitz": lipschitz,
        }),
        verdict_ok: Some(ok),
    })
}

/// Solves the biharmonic Dirichlet problem on the disk by both Steklov
/// series forms and evaluates them; incompatible data is a verdict failure.
pub fn dirichlet_solve_run(
    settings: &mut Settings,
    a: cli::DirichletSolveArgs,
    ctx: &Ctx,
) -> Result<RunOutput, String> {
    let sigma = sigma(settings, a.sigma)?;
    let lambda = settings.require("lambda", a.lambda, Some(-1.0))?;
    let mu = settings.require("mu", a.mu, Some(-1.0))?;
    let f_spec: String = settings.require("f", a.f, None)?;
    let g_spec: String = settings.require("g", a.g, None)?;
    let eval_spec = settings.resolve("eval", a.eval, None)?;
    let f = parse_boundary(&f_spec, Geometry::Disk)?;
    let g = parse_boundary(&g_spec, Geometry::Disk)?;

    let compat = compat_residual(&f, &g, lambda, &sigma).map_err(|e| e.to_string())?;
    let compat_json = json!({
        "verdict": compat.verdict,
        "parseval_defect": compat.parseval_defect,
        "tail_exponent": compat.tail_exponent,
        "weighted_partial_sum": compat.weighted_partial_sum,
    });
    if compat.verdict == Some(false) {
        return Ok(RunOutput {
            table: Table {
                columns: cols(&["verdict", "parseval_defect", "weighted_partial_sum"]),
                rows: vec![vec![
                    "incompatible".into(),
                    fmt17(compat.parseval_defect),
                    fmt17(compat.weighted_partial_sum),
                ]],
            },
            data: json!({"compat": compat_json}),
            verdict_ok: Some(false),
        });
    }

    let solution = solve_dirichlet(&f, &g, lambda, mu, &sigma).map_err(|e| e.to_string())?;
    let spec = match eval_spec {
        Some(s) => Some(parse_eval(&s)?),
        None => None,
    };
    let points = eval_points(spec, ctx.seed);
    let mut rows = Vec::with_capacity(points.len());
    let mut points_json = Vec::with_capacity(points.len());
    for (r, theta) in points {
        let ui = solution.form_i.eval_polar(r, theta);
        let uii = solution.form_ii.eval_polar(r, theta);
        rows.push(vec![
            fmt17(r),
            fmt17(theta),
            fmt17(ui),
            fmt17(uii),
            fmt17((ui - uii).abs()),
        ]);
        points_json.push(json!({"r": r, "theta": theta, "form_i": ui, "form_ii": uii}));
    }
    Ok(RunOutput {
        table: Table {
            columns: cols(&["r", "theta", "form_i", "form_ii", "form_gap"]),
            rows,
        },
        data: json!({
            "lambda": lambda,
            "mu": mu,
            "compat": compat_json,
            "max_form_gap": solution.max_form_gap,
            "boundary_defect": {
                "trace": solution.boundary_defect.0,
                "normal": solution.boundary_defect.1,
            },
            "points": points_json,
        }),
        verdict_ok: Some(true),
    })
}

/// Corner coordinates of the unit square, counterclockwise from the origin.
const CORNERS: [(f64, f64); 4] = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];

/// Necessary trace-compatibility check on the square: the combined
/// tangential/normal boundary field must match up at the corners.
pub fn trace_check_run(settings: &mut Settings, a: cli::TraceCheckArgs) -> Result<RunOutput, String> {
    let geometry = geometry(settings, a.geometry, "square")?;
    if geometry != Geometry::Square {
        return Err("the corner check is defined on the square".into());
    }
    let f_spec: String = settings.require("f", a.f, None)?;
    let g_spec: String = settings.require("g", a.g, None)?;
    let f = parse_boundary(&f_spec, geometry)?;
    let g = parse_boundary(&g_spec, geometry)?;
    let report = corner_compat_check(&f, &g).map_err(|e| e.to_string())?;
    let rows = report
        .jumps
        .iter()
        .enumerate()
        .map(|(c, jump)| {
            vec![
                c.to_string(),
                fmt17(CORNERS[c].0),
                fmt17(CORNERS[c].1),
                fmt17(*jump),
            ]
        })
        .collect();
    Ok(RunOutput {
        table: Table {
            columns: cols(&["corner", "x", "y", "jump"]),
            rows,
        },
        data: json!({
            "jumps": report.jumps,
            "pass": report.pass,
        }),
        verdict_ok: Some(report.pass),
    })
}

/// Fits the eigenvalue growth law on the unit disk against the closed-form
/// prediction; a fit outside tolerance is a verdict failure.
pub fn weyl_check_run(settings: &mut Settings, a: cli::WeylCheckArgs) -> Result<RunOutput, String> {
    let kind = problem(settings, a.problem)?;
    let dim = settings.require("dim", a.dim, Some(2))?;
    let sigma_value = settings.require("sigma", a.sigma, Some(0.0))?;
    let param = settings.require("param", a.param, Some(0.0))?;
    let j_cap = settings.require("J", a.j, Some(10_000))?;
    let tol_exponent = settings.require("tol-exponent", a.tol_exponent, Some(0.005))?;
    let tol_constant = settings.require("tol-constant", a.tol_constant, Some(0.02))?;
    let spectrum =
        ball_spectrum_first(kind, dim, sigma_value, param, j_cap).map_err(|e| e.to_string())?;
    let fit = fit_power_law(&spectrum.values, j_cap).map_err(|e| e.to_string())?;
    let predicted_constant = ball_constant(kind, dim).map_err(|e| e.to_string())?;
    let predicted_exponent = match kind {
        ProblemKind::Dbs | ProblemKind::BsM => 1.0 / (dim as f64 - 1.0),
        ProblemKind::Nbs | ProblemKind::BsL => 3.0 / (dim as f64 - 1.0),
    };
    let report = compare(
        &fit,
        predicted_constant,
        predicted_exponent,
        tol_exponent,
        tol_constant,
    );
    Ok(RunOutput {
        table: Table {
            columns: cols(&[
                "fit_exponent",
                "fit_constant",
                "predicted_exponent",
                "predicted_constant",
                "exponent_rel_err",
                "constant_rel_err",
                "pass",
            ]),
            rows: vec![vec![
                fmt17(report.fit.exponent),
                fmt17(report.fit.constant),
                fmt17(report.predicted_exponent),
                fmt17(report.predicted_constant),
                fmt17(report.exponent_rel_err),
                fmt17(report.constant_rel_err),
                report.pass.to_string(),
            ]],
        },
        data: json!({
            "kind": kind.name(),
            "dim": dim,
            "param": param,
            "J": j_cap,
            "fit": {
                "exponent": report.fit.exponent,
                "constant": report.fit.constant,
                "residual": report.fit.residual,
                "window": [report.fit.window.0, report.fit.window.1],
            },
            "predicted": {
                "exponent": report.predicted_exponent,
                "constant": report.predicted_constant,
            },
            "rel_err": {
                "exponent": report.exponent_rel_err,
                "constant": report.constant_rel_err,
            },
            "tolerances": {
                "exponent": report.tol_exponent,
                "constant": report.tol_constant,
            },
            "pass": report.pass,
        }),
        verdict_ok: Some(report.pass),
    })
}

/// Assembles one pencil (shifted interior form and boundary mass) and dumps
/// both matrices in long format.
pub fn assemble_run(settings: &mut Settings, a: cli::AssembleArgs) -> Result<RunOutput, String> {
    let kind = problem(settings, a.problem)?;
    let geometry = geometry(settings, a.geometry, "disk")?;
    let sigma = sigma(settings, a.sigma)?;
    let param = settings.require("param", a.param, Some(0.0))?;
    let mode = settings.require("mode", a.mode, Some(0))?;
    let kmax = settings.require("kmax", a.kmax, Some(3))?;
    let degree = settings.require("degree", a.degree, Some(4))?;
    let shift_b = settings.resolve("shift-b", a.shift_b, None)?;
    let raw = match geometry {
        Geometry::Disk => SpectralBasis::disk_mode(mode, kmax),
        Geometry::Square => SpectralBasis::square_tensor(degree),
    };
    let basis = match kind {
        ProblemKind::Dbs => {
            constrain_basis(&raw, TraceConstraint::TraceZero)
                .map_err(|e| e.to_string())?
                .basis
        }
        ProblemKind::Nbs => {
            constrain_basis(&raw, TraceConstraint::NormalZero)
                .map_err(|e| e.to_string())?
                .basis
        }
        _ => raw,
    };
    if basis.is_empty() {
        return Err("the essential constraint leaves no basis functions; enlarge the basis".into());
    }
    let pencil = match shift_b {
        Some(b) => build_pencil(&basis, &sigma, kind, param, b).map_err(|e| e.to_string())?,
        None => choose_shift_b(&basis, &sigma, kind, param).map_err(|e| e.to_string())?,
    };
    let n = pencil.a.nrows();
    let mut rows = Vec::with_capacity(2 * n * n);
    let mut nested: Vec<Value> = Vec::with_capacity(2);
    for (name, m) in [("a", &pencil.a), ("bmass", &pencil.bmass)] {
        let mut entries = Vec::with_capacity(n);
        for i in 0..n {
            let mut row_json = Vec::with_capacity(n);
            for j in 0..n {
                rows.push(vec![
                    name.to_string(),
                    i.to_string(),
                    j.to_string(),
                    fmt17(m[(i, j)]),
                ]);
                row_json.push(json!(m[(i, j)]));
            }
            entries.push(Value::Array(row_json));
        }
        nested.push(Value::Array(entries));
    }
    Ok(RunOutput {
        table: Table {
            columns: cols(&["matrix", "i", "j", "value"]),
            rows,
        },
        data: json!({
            "kind": kind.name(),
            "geometry": geometry.name(),
            "basis": basis.label,
            "n": n,
            "shift_b": pencil.shift_b,
            "a": nested[0],
            "bmass": nested[1],
        }),
        verdict_ok: None,
    })
}
