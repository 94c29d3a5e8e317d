//! Parsers for boundary-data and evaluation-point specifications.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use steklov::boundary::{square_trace, BoundaryFn, TraceOrder};
use steklov::poly::Poly2;
use steklov::Geometry;

/// Parses a boundary datum.
///
/// Disk data: `zero` or `modes:l,harmonic,value;...` (the circle Fourier
/// amplitudes; `harmonic` is 0 for cosine, 1 for sine, and must be 0 when
/// `l` is 0). Square data: `zero`, `coord:x1` / `coord:x2` (boundary value
/// of a coordinate), or `normal:x1` / `normal:x2` (its outward normal
/// derivative, i.e. a normal component).
pub fn parse_boundary(spec: &str, geometry: Geometry) -> Result<BoundaryFn, String> {
    if spec == "zero" {
        return Ok(BoundaryFn::zero(geometry));
    }
    let (head, body) = spec
        .split_once(':')
        .ok_or(format!("boundary spec '{spec}' needs head:body"))?;
    match (head, geometry) {
        ("modes", Geometry::Disk) => {
            let mut out = BoundaryFn::zero(Geometry::Disk);
            for part in body.split(';') {
                let fields: Vec<&str> = part.split(',').collect();
                if fields.len() != 3 {
                    return Err(format!("mode entry '{part}' must be l,harmonic,value"));
                }
                let l: u32 = fields[0]
                    .trim()
                    .parse()
                    .map_err(|e| format!("mode index in '{part}': {e}"))?;
                let harmonic: u32 = fields[1]
                    .trim()
                    .parse()
                    .map_err(|e| format!("harmonic in '{part}': {e}"))?;
                let value: f64 = fields[2]
                    .trim()
                    .parse()
                    .map_err(|e| format!("amplitude in '{part}': {e}"))?;
                if harmonic > 1 || (l == 0 && harmonic != 0) {
                    return Err(format!(
                        "harmonic must be 0 (cosine) or 1 (sine), and 0 for l = 0: '{part}'"
                    ));
                }
                out = out.add(&BoundaryFn::circle_harmonic(l, harmonic, value));
            }
            Ok(out)
        }
        ("coord" | "normal", Geometry::Square) => {
            let var = match body {
                "x1" => Poly2::var_x(),
                "x2" => Poly2::var_y(),
                other => return Err(format!("unknown coordinate '{other}' (expected x1 or x2)")),
            };
            let order = if head == "coord" {
                TraceOrder::Value
            } else {
                TraceOrder::Normal
            };
            Ok(square_trace(&var, order))
        }
        ("modes", Geometry::Square) => {
            Err("mode data describes circle boundaries; the geometry is square".into())
        }
        ("coord" | "normal", Geometry::Disk) => {
            Err("coordinate traces describe the square; use modes:... on the disk".into())
        }
        (other, _) => Err(format!(
            "unknown boundary spec head '{other}' (expected zero, modes, coord or normal)"
        )),
    }
}

/// Evaluation points in the open unit disk, `(r, theta)` pairs.
pub enum EvalSpec {
    Points(Vec<(f64, f64)>),
    Random(usize),
}

/// Parses `--eval`: `r,theta;r,theta;...` or `random:N`.
pub fn parse_eval(spec: &str) -> Result<EvalSpec, String> {
    if let Some(n) = spec.strip_prefix("random:") {
        let n: usize = n
            .parse()
            .map_err(|e| format!("random point count in '{spec}': {e}"))?;
        if n == 0 {
            return Err("random:N needs N >= 1".into());
        }
        return Ok(EvalSpec::Random(n));
    }
    let mut points = Vec::new();
    for part in spec.split(';') {
        let (r, theta) = part
            .split_once(',')
            .ok_or(format!("eval point '{part}' must be r,theta"))?;
        let r: f64 = r
            .trim()
            .parse()
            .map_err(|e| format!("radius in '{part}': {e}"))?;
        let theta: f64 = theta
            .trim()
            .parse()
            .map_err(|e| format!("angle in '{part}': {e}"))?;
        if !(0.0..=1.0).contains(&r) {
            return Err(format!("radius {r} outside [0, 1]"));
        }
        points.push((r, theta));
    }
    Ok(EvalSpec::Points(points))
}

/// The default evaluation grid: 10 radii x 10 angles, all interior.
pub fn default_grid() -> Vec<(f64, f64)> {
    let mut points = Vec::with_capacity(100);
    for i in 0..10 {
        let r = (i as f64 + 0.5) / 10.0;
        for j in 0..10 {
            points.push((r, 2.0 * std::f64::consts::PI * j as f64 / 10.0 + 0.1));
        }
    }
    points
}

/// Materializes an evaluation spec; random points are area-uniform in the
/// disk and fully determined by the seed.
pub fn eval_points(spec: Option<EvalSpec>, seed: u64) -> Vec<(f64, f64)> {
    match spec {
        None => default_grid(),
        Some(EvalSpec::Points(points)) => points,
        Some(EvalSpec::Random(n)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n)
                .map(|_| {
                    let r = rng.random::<f64>().sqrt();
                    let theta = 2.0 * std::f64::consts::PI * rng.random::<f64>();
                    (r, theta)
                })
                .collect()
        }
    }
}
