//! Functions on the domain boundary and their exact inner products.
//!
//! On the circle a boundary function is a finite Fourier expansion; on the
//! square it is a polynomial per edge in the arclength parameter. Both
//! carry exact L2 inner products, which keeps trace-basis Gram matrices and
//! series coefficients free of quadrature error.

use crate::param::Geometry;
use crate::poly::{integrate_circle, integrate_product_gl, harmonic_pair, Poly1, Poly2};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Which trace of an interior function is taken on the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceOrder {
    /// The boundary value.
    Value,
    /// The outward normal derivative.
    Normal,
}

/// Edges of the unit square in counterclockwise order. Edge `e` runs from
/// corner `e` to corner `e + 1 (mod 4)`, with corners indexed
/// (0,0), (1,0), (1,1), (0,1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    Bottom = 0,
    Right = 1,
    Top = 2,
    Left = 3,
}

pub const EDGES: [Edge; 4] = [Edge::Bottom, Edge::Right, Edge::Top, Edge::Left];

/// Corner coordinates indexed as above.
pub const CORNERS: [(f64, f64); 4] = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];

impl Edge {
    /// Unit tangent in the direction of increasing arclength parameter.
    pub fn tangent(self) -> (f64, f64) {
        match self {
            Edge::Bottom => (1.0, 0.0),
            Edge::Right => (0.0, 1.0),
            Edge::Top => (-1.0, 0.0),
            Edge::Left => (0.0, -1.0),
        }
    }

    /// Outward unit normal.
    pub fn normal(self) -> (f64, f64) {
        match self {
            Edge::Bottom => (0.0, -1.0),
            Edge::Right => (1.0, 0.0),
            Edge::Top => (0.0, 1.0),
            Edge::Left => (-1.0, 0.0),
        }
    }

    /// Point at arclength parameter `t` in [0, 1].
    pub fn point(self, t: f64) -> (f64, f64) {
        match self {
            Edge::Bottom => (t, 0.0),
            Edge::Right => (1.0, t),
            Edge::Top => (1.0 - t, 1.0),
            Edge::Left => (0.0, 1.0 - t),
        }
    }

    /// Restriction of an interior polynomial's chosen trace to this edge,
    /// as a polynomial in the arclength parameter.
    pub fn trace(self, p: &Poly2, order: TraceOrder) -> Poly1 {
        let field = match order {
            TraceOrder::Value => p.clone(),
            TraceOrder::Normal => {
                let (nx, ny) = self.normal();
                p.dx().scale(nx).add(&p.dy().scale(ny))
            }
        };
        match self {
            Edge::Bottom => field.restrict_y(0.0),
            Edge::Right => field.restrict_x(1.0),
            Edge::Top => field.restrict_y(1.0).compose_affine(-1.0, 1.0),
            Edge::Left => field.restrict_x(0.0).compose_affine(-1.0, 1.0),
        }
    }
}

/// A function on the boundary of one of the supported domains.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryFn {
    /// Finite Fourier expansion on the unit circle:
    /// `c0 + sum_l (a_l cos(l theta) + b_l sin(l theta))`.
    CircleFourier {
        c0: f64,
        terms: BTreeMap<u32, (f64, f64)>,
    },
    /// One polynomial per edge of the unit square, in arclength parameter.
    SquareEdges { edges: [Poly1; 4] },
}

impl BoundaryFn {
    pub fn zero(geometry: Geometry) -> Self {
        match geometry {
            Geometry::Disk => BoundaryFn::CircleFourier {
                c0: 0.0,
                terms: BTreeMap::new(),
            },
            Geometry::Square => BoundaryFn::SquareEdges {
                edges: [Poly1::zero(), Poly1::zero(), Poly1::zero(), Poly1::zero()],
            },
        }
    }

    pub fn geometry(&self) -> Geometry {
        match self {
            BoundaryFn::CircleFourier { .. } => Geometry::Disk,
            BoundaryFn::SquareEdges { .. } => Geometry::Square,
        }
    }

    /// Single circular harmonic `amp * cos(l theta)` or `amp * sin(l theta)`
    /// (`harmonic` 0 or 1); `l = 0` is the constant `amp`.
    pub fn circle_harmonic(l: u32, harmonic: u32, amp: f64) -> Self {
        if l == 0 {
            return BoundaryFn::CircleFourier {
                c0: amp,
                terms: BTreeMap::new(),
            };
        }
        let mut terms = BTreeMap::new();
        terms.insert(l, if harmonic == 0 { (amp, 0.0) } else { (0.0, amp) });
        BoundaryFn::CircleFourier { c0: 0.0, terms }
    }

    pub fn constant(geometry: Geometry, c: f64) -> Self {
        match geometry {
            Geometry::Disk => BoundaryFn::circle_harmonic(0, 0, c),
            Geometry::Square => BoundaryFn::SquareEdges {
                edges: [
                    Poly1::constant(c),
                    Poly1::constant(c),
                    Poly1::constant(c),
                    Poly1::constant(c),
                ],
            },
        }
    }

    /// L2 inner product over the boundary.
    pub fn inner(&self, other: &BoundaryFn) -> f64 {
        match (self, other) {
            (
                BoundaryFn::CircleFourier { c0: a0, terms: ta },
                BoundaryFn::CircleFourier { c0: b0, terms: tb },
            ) => {
                let mut total = 2.0 * PI * a0 * b0;
                for (l, (ac, as_)) in ta {
                    if let Some((bc, bs)) = tb.get(l) {
                        total += PI * (ac * bc + as_ * bs);
                    }
                }
                total
            }
            (BoundaryFn::SquareEdges { edges: ea }, BoundaryFn::SquareEdges { edges: eb }) => ea
                .iter()
                .zip(eb)
                .map(|(p, q)| integrate_product_gl(p, q))
                .sum(),
            _ => panic!("inner product of boundary functions on different domains"),
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    pub fn scale(&self, s: f64) -> BoundaryFn {
        match self {
            BoundaryFn::CircleFourier { c0, terms } => BoundaryFn::CircleFourier {
                c0: c0 * s,
                terms: terms
                    .iter()
                    .map(|(&l, &(a, b))| (l, (a * s, b * s)))
                    .collect(),
            },
            BoundaryFn::SquareEdges { edges } => BoundaryFn::SquareEdges {
                edges: [
                    edges[0].scale(s),
                    edges[1].scale(s),
                    edges[2].scale(s),
                    edges[3].scale(s),
                ],
            },
        }
    }

    pub fn add(&self, other: &BoundaryFn) -> BoundaryFn {
        match (self, other) {
            (
                BoundaryFn::CircleFourier { c0: a0, terms: ta },
                BoundaryFn::CircleFourier { c0: b0, terms: tb },
            ) => {
                let mut terms = ta.clone();
                for (&l, &(bc, bs)) in tb {
                    let e = terms.entry(l).or_insert((0.0, 0.0));
                    e.0 += bc;
                    e.1 += bs;
                }
                terms.retain(|_, &mut (a, b)| a != 0.0 || b != 0.0);
                BoundaryFn::CircleFourier {
                    c0: a0 + b0,
                    terms,
                }
            }
            (BoundaryFn::SquareEdges { edges: ea }, BoundaryFn::SquareEdges { edges: eb }) => {
                BoundaryFn::SquareEdges {
                    edges: [
                        ea[0].add(&eb[0]),
                        ea[1].add(&eb[1]),
                        ea[2].add(&eb[2]),
                        ea[3].add(&eb[3]),
                    ],
                }
            }
            _ => panic!("sum of boundary functions on different domains"),
        }
    }

    pub fn sub(&self, other: &BoundaryFn) -> BoundaryFn {
        self.add(&other.scale(-1.0))
    }

    /// Value at angle `theta` (circle functions only).
    pub fn eval_angle(&self, theta: f64) -> f64 {
        match self {
            BoundaryFn::CircleFourier { c0, terms } => {
                let mut v = *c0;
                for (&l, &(a, b)) in terms {
                    let lt = l as f64 * theta;
                    v += a * lt.cos() + b * lt.sin();
                }
                v
            }
            _ => panic!("eval_angle requires a circle function"),
        }
    }

    /// Value at edge parameter `t` (square functions only).
    pub fn eval_edge(&self, edge: Edge, t: f64) -> f64 {
        match self {
            BoundaryFn::SquareEdges { edges } => edges[edge as usize].eval(t),
            _ => panic!("eval_edge requires a square function"),
        }
    }

    /// Highest circular harmonic present (circle functions only).
    pub fn max_harmonic(&self) -> u32 {
        match self {
            BoundaryFn::CircleFourier { terms, .. } => {
                terms.keys().next_back().copied().unwrap_or(0)
            }
            _ => panic!("max_harmonic requires a circle function"),
        }
    }
}

/// Fourier expansion of a polynomial's trace on the unit circle, exact up
/// to the trigonometric degree of the restriction.
pub fn circle_trace(p: &Poly2, order: TraceOrder) -> BoundaryFn {
    let field = match order {
        TraceOrder::Value => p.clone(),
        // On the unit circle the outward normal is (x, y).
        TraceOrder::Normal => Poly2::var_x()
            .mul(&p.dx())
            .add(&Poly2::var_y().mul(&p.dy())),
    };
    let deg = field.total_degree();
    let c0 = integrate_circle(&field) / (2.0 * PI);
    let mut terms = BTreeMap::new();
    for l in 1..=deg {
        let (cl, sl) = harmonic_pair(l);
        let a = integrate_circle(&field.mul(&cl)) / PI;
        let b = integrate_circle(&field.mul(&sl)) / PI;
        if a.abs() > 1e-14 || b.abs() > 1e-14 {
            terms.insert(l, (a, b));
        }
    }
    BoundaryFn::CircleFourier { c0, terms }
}

/// Per-edge trace of a polynomial on the unit square.
pub fn square_trace(p: &Poly2, order: TraceOrder) -> BoundaryFn {
    BoundaryFn::SquareEdges {
        edges: [
            Edge::Bottom.trace(p, order),
            Edge::Right.trace(p, order),
            Edge::Top.trace(p, order),
            Edge::Left.trace(p, order),
        ],
    }
}

/// Trace of a polynomial on the chosen geometry.
pub fn boundary_trace(geometry: Geometry, p: &Poly2, order: TraceOrder) -> BoundaryFn {
    match geometry {
        Geometry::Disk => circle_trace(p, order),
        Geometry::Square => square_trace(p, order),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn circle_inner_products_are_parseval() {
        let f = BoundaryFn::circle_harmonic(1, 0, 2.0); // 2 cos t
        let g = BoundaryFn::circle_harmonic(1, 1, 3.0); // 3 sin t
        assert!(close(f.norm_sq(), 4.0 * PI, 1e-15));
        assert_eq!(f.inner(&g), 0.0);
        let c = BoundaryFn::constant(Geometry::Disk, 1.0);
        assert!(close(c.norm_sq(), 2.0 * PI, 1e-15));
        let h = f.add(&g).add(&c);
        assert!(close(h.norm_sq(), 2.0 * PI + 13.0 * PI, 1e-15));
        assert!(close(h.eval_angle(0.5), 1.0 + 2.0 * 0.5_f64.cos() + 3.0 * 0.5_f64.sin(), 1e-15));
    }

    #[test]
    fn circle_trace_extracts_fourier_coefficients() {
        // x^2 = 1/2 + cos(2 theta)/2 on the unit circle.
        let p = Poly2::monomial(2, 0, 1.0);
        let f = circle_trace(&p, TraceOrder::Value);
        match &f {
            BoundaryFn::CircleFourier { c0, terms } => {
                assert!(close(*c0, 0.5, 1e-14));
                let (a2, b2) = terms[&2];
                assert!(close(a2, 0.5, 1e-14));
                assert_eq!(b2, 0.0);
                assert!(!terms.contains_key(&1));
            }
            _ => unreachable!(),
        }
        // Normal trace of x^2 on the circle: 2 x^2 = 1 + cos(2 theta).
        let g = circle_trace(&p, TraceOrder::Normal);
        assert!(close(g.norm_sq(), 2.0 * PI + PI, 1e-14));
    }

    #[test]
    fn square_edges_have_consistent_geometry() {
        for e in EDGES {
            let (tx, ty) = e.tangent();
            let (nx, ny) = e.normal();
            // Right-handed frame: rotating the tangent by -90 degrees
            // gives the outward normal.
            assert_eq!((ty, -tx), (nx, ny));
            let (x0, y0) = e.point(0.0);
            let (x1, y1) = e.point(1.0);
            assert!(close(
                ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt(),
                1.0,
                1e-15
            ));
        }
        // Edges chain counterclockwise through the corner list.
        for (i, e) in EDGES.iter().enumerate() {
            assert_eq!(e.point(0.0), CORNERS[i]);
            assert_eq!(e.point(1.0), CORNERS[(i + 1) % 4]);
        }
    }

    #[test]
    fn square_traces_restrict_correctly() {
        // u = x^2 y: value on top edge (t -> (1-t, 1)) is (1-t)^2.
        let mut u = Poly2::zero();
        u.add_term(2, 1, 1.0);
        let f = square_trace(&u, TraceOrder::Value);
        assert!(close(f.eval_edge(Edge::Top, 0.25), 0.75_f64.powi(2), 1e-15));
        // Normal derivative on bottom edge is -u_y = -x^2 at y=0.
        let g = square_trace(&u, TraceOrder::Normal);
        assert!(close(g.eval_edge(Edge::Bottom, 0.5), -0.25, 1e-15));
        // Normal derivative on right edge is u_x = 2 x y = 2 t at x=1.
        assert!(close(g.eval_edge(Edge::Right, 0.3), 0.6, 1e-15));
    }

    #[test]
    fn square_inner_product_sums_edges() {
        let one = BoundaryFn::constant(Geometry::Square, 1.0);
        assert!(close(one.norm_sq(), 4.0, 1e-15));
        // Trace of x: edges carry t, 1, 1-t, 0; squared integrals
        // 1/3 + 1 + 1/3 + 0 = 5/3.
        let f = square_trace(&Poly2::var_x(), TraceOrder::Value);
        assert!(close(f.norm_sq(), 5.0 / 3.0, 1e-15));
        // Normal trace of x: nu_x per edge: 0, 1, 0, -1; norm^2 = 2.
        let g = square_trace(&Poly2::var_x(), TraceOrder::Normal);
        assert!(close(g.norm_sq(), 2.0, 1e-15));
    }
}
