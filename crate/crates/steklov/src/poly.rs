//! Sparse bivariate polynomials with exact domain and boundary integration.
//!
//! Basis functions, quadratic-form integrands and boundary traces are all
//! genuine polynomials, so integration never needs to approximate:
//! monomials over the unit disk and circle have Beta-function closed forms,
//! and Gauss-Legendre rules of exact-for-degree order handle the square.

use std::collections::BTreeMap;

/// Polynomial in two variables, stored as monomial exponents -> coefficient.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly2 {
    terms: BTreeMap<(u16, u16), f64>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn constant(c: f64) -> Self {
        let mut p = Poly2::zero();
        p.add_term(0, 0, c);
        p
    }

    pub fn monomial(ix: u16, iy: u16, c: f64) -> Self {
        let mut p = Poly2::zero();
        p.add_term(ix, iy, c);
        p
    }

    pub fn var_x() -> Self {
        Poly2::monomial(1, 0, 1.0)
    }

    pub fn var_y() -> Self {
        Poly2::monomial(0, 1, 1.0)
    }

    /// x^2 + y^2, the squared radius.
    pub fn r_squared() -> Self {
        let mut p = Poly2::zero();
        p.add_term(2, 0, 1.0);
        p.add_term(0, 2, 1.0);
        p
    }

    pub fn add_term(&mut self, ix: u16, iy: u16, c: f64) {
        if c == 0.0 {
            return;
        }
        let slot = self.terms.entry((ix, iy)).or_insert(0.0);
        *slot += c;
        if *slot == 0.0 {
            self.terms.remove(&(ix, iy));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u16, u16, f64)> + '_ {
        self.terms.iter().map(|(&(a, b), &c)| (a, b, c))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|&(a, b)| a as u32 + b as u32)
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (a, b, c) in other.terms() {
            out.add_term(a, b, c);
        }
        out
    }

    pub fn sub(&self, other: &Poly2) -> Poly2 {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Poly2 {
        if s == 0.0 {
            return Poly2::zero();
        }
        Poly2 {
            terms: self.terms.iter().map(|(&k, &c)| (k, c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (a1, b1, c1) in self.terms() {
            for (a2, b2, c2) in other.terms() {
                out.add_term(a1 + a2, b1 + b2, c1 * c2);
            }
        }
        out
    }

    pub fn dx(&self) -> Poly2 {
        let mut out = Poly2::zero();
        for (a, b, c) in self.terms() {
            if a > 0 {
                out.add_term(a - 1, b, c * a as f64);
            }
        }
        out
    }

    pub fn dy(&self) -> Poly2 {
        let mut out = Poly2::zero();
        for (a, b, c) in self.terms() {
            if b > 0 {
                out.add_term(a, b - 1, c * b as f64);
            }
        }
        out
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms()
            .map(|(a, b, c)| c * x.powi(a as i32) * y.powi(b as i32))
            .sum()
    }

    /// Linear combination sum_i coeffs[i] * polys[i].
    pub fn combine(coeffs: &[f64], polys: &[Poly2]) -> Poly2 {
        assert_eq!(coeffs.len(), polys.len());
        let mut out = Poly2::zero();
        for (c, p) in coeffs.iter().zip(polys) {
            for (a, b, pc) in p.terms() {
                out.add_term(a, b, pc * c);
            }
        }
        out
    }

    /// Restriction to the horizontal line y = c, as a polynomial in x.
    pub fn restrict_y(&self, c: f64) -> Poly1 {
        let mut out = Poly1::zero();
        for (a, b, coeff) in self.terms() {
            out.add_term(a as usize, coeff * c.powi(b as i32));
        }
        out
    }

    /// Restriction to the vertical line x = c, as a polynomial in y.
    pub fn restrict_x(&self, c: f64) -> Poly1 {
        let mut out = Poly1::zero();
        for (a, b, coeff) in self.terms() {
            out.add_term(b as usize, coeff * c.powi(a as i32));
        }
        out
    }
}

/// Harmonic polynomial pair: real and imaginary parts of (x + i y)^l.
///
/// In polar coordinates these are r^l cos(l theta) and r^l sin(l theta).
pub fn harmonic_pair(l: u32) -> (Poly2, Poly2) {
    let mut c = Poly2::constant(1.0);
    let mut s = Poly2::zero();
    let x = Poly2::var_x();
    let y = Poly2::var_y();
    for _ in 0..l {
        let c_next = x.mul(&c).sub(&y.mul(&s));
        let s_next = x.mul(&s).add(&y.mul(&c));
        c = c_next;
        s = s_next;
    }
    (c, s)
}

/// Integral of cos^a(t) sin^b(t) over one full period; zero unless both
/// exponents are even.
pub fn circle_monomial(a: u32, b: u32) -> f64 {
    if a % 2 == 1 || b % 2 == 1 {
        return 0.0;
    }
    // T(0,0) = 2 pi and T(a+2,b) = T(a,b) (a+1)/(a+b+2): raise the first
    // exponent at second exponent zero, then the second at first exponent a.
    let mut t = 2.0 * std::f64::consts::PI;
    let mut i = 0;
    while i < a {
        t *= (i + 1) as f64 / (i + 2) as f64;
        i += 2;
    }
    let mut j = 0;
    while j < b {
        t *= (j + 1) as f64 / (a + j + 2) as f64;
        j += 2;
    }
    t
}

/// Integral of x^a y^b over the unit disk.
pub fn disk_monomial(a: u32, b: u32) -> f64 {
    circle_monomial(a, b) / (a + b + 2) as f64
}

/// Exact integral of a polynomial over the unit disk.
pub fn integrate_disk(p: &Poly2) -> f64 {
    p.terms()
        .map(|(a, b, c)| c * disk_monomial(a as u32, b as u32))
        .sum()
}

/// Exact integral of a polynomial restricted to the unit circle, with
/// respect to arclength.
pub fn integrate_circle(p: &Poly2) -> f64 {
    p.terms()
        .map(|(a, b, c)| c * circle_monomial(a as u32, b as u32))
        .sum()
}

/// Polynomial in one variable, dense coefficient list (index = power).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly1 {
    coeffs: Vec<f64>,
}

impl Poly1 {
    pub fn zero() -> Self {
        Poly1::default()
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        let mut p = Poly1 { coeffs };
        p.trim();
        p
    }

    pub fn constant(c: f64) -> Self {
        Poly1::from_coeffs(vec![c])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(&c) if c == 0.0) {
            self.coeffs.pop();
        }
    }

    pub fn add_term(&mut self, power: usize, c: f64) {
        if c == 0.0 {
            return;
        }
        if self.coeffs.len() <= power {
            self.coeffs.resize(power + 1, 0.0);
        }
        self.coeffs[power] += c;
        self.trim();
    }

    pub fn add(&self, other: &Poly1) -> Poly1 {
        let mut out = self.clone();
        for (k, &c) in other.coeffs.iter().enumerate() {
            out.add_term(k, c);
        }
        out
    }

    pub fn sub(&self, other: &Poly1) -> Poly1 {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Poly1 {
        if s == 0.0 {
            return Poly1::zero();
        }
        Poly1 {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    pub fn mul(&self, other: &Poly1) -> Poly1 {
        if self.is_zero() || other.is_zero() {
            return Poly1::zero();
        }
        let mut coeffs = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly1::from_coeffs(coeffs)
    }

    pub fn derivative(&self) -> Poly1 {
        if self.coeffs.len() <= 1 {
            return Poly1::zero();
        }
        Poly1::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, &c)| c * (k + 1) as f64)
                .collect(),
        )
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Exact integral over [0, 1].
    pub fn integrate_01(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c / (k + 1) as f64)
            .sum()
    }

    /// Substitutes x -> a x + b.
    pub fn compose_affine(&self, a: f64, b: f64) -> Poly1 {
        let mut out = Poly1::zero();
        let mut power = Poly1::constant(1.0);
        let lin = Poly1::from_coeffs(vec![b, a]);
        for &c in &self.coeffs {
            for (k, &pc) in power.coeffs.iter().enumerate() {
                out.add_term(k, c * pc);
            }
            power = power.mul(&lin);
        }
        out
    }
}

/// Legendre polynomial P_n on [-1, 1] as a coefficient list.
fn legendre_coeffs(n: usize) -> Poly1 {
    let mut p0 = Poly1::constant(1.0);
    if n == 0 {
        return p0;
    }
    let t = Poly1::from_coeffs(vec![0.0, 1.0]);
    let mut p1 = t.clone();
    for k in 1..n {
        let kf = k as f64;
        let next = t
            .mul(&p1)
            .scale((2.0 * kf + 1.0) / (kf + 1.0))
            .sub(&p0.scale(kf / (kf + 1.0)));
        p0 = p1;
        p1 = next;
    }
    p1
}

/// Shifted Legendre polynomial P_n(2x - 1), orthogonal on [0, 1].
pub fn shifted_legendre(n: usize) -> Poly1 {
    legendre_coeffs(n).compose_affine(2.0, -1.0)
}

/// Gauss-Legendre nodes and weights on [0, 1], exact for degree 2n - 1.
pub fn gauss_legendre_01(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n {
        // Standard initial guess followed by Newton iterations on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            // Evaluate P_n and its derivative by upward recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 1..n {
                let kf = k as f64;
                let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
                p0 = p1;
                p1 = p2;
            }
            let dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        // Recompute the derivative at the converged node for the weight.
        let mut p0 = 1.0;
        let mut p1 = x;
        for k in 1..n {
            let kf = k as f64;
            let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
            p0 = p1;
            p1 = p2;
        }
        let dp = nf * (x * p1 - p0) / (x * x - 1.0);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Map from [-1, 1] to [0, 1]; reverse so nodes come out increasing.
        nodes[n - 1 - i] = 0.5 * (x + 1.0);
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

/// Quadrature order making the tensor rule exact for the given total degree.
pub fn exact_order_for_degree(degree: u32) -> usize {
    (degree as usize) / 2 + 1
}

/// Integral of a polynomial over the unit square via a tensor
/// Gauss-Legendre rule of exact-for-degree order.
pub fn integrate_square(p: &Poly2) -> f64 {
    if p.is_zero() {
        return 0.0;
    }
    let n = exact_order_for_degree(p.total_degree());
    let (nodes, weights) = gauss_legendre_01(n);
    let mut total = 0.0;
    for (xi, wi) in nodes.iter().zip(&weights) {
        for (yj, wj) in nodes.iter().zip(&weights) {
            total += wi * wj * p.eval(*xi, *yj);
        }
    }
    total
}

/// Integral of a 1-variable polynomial over [0, 1] by Gauss-Legendre of
/// exact-for-degree order.
pub fn integrate_poly1_gl(p: &Poly1) -> f64 {
    if p.is_zero() {
        return 0.0;
    }
    let n = p.degree() / 2 + 1;
    let (nodes, weights) = gauss_legendre_01(n);
    nodes
        .iter()
        .zip(&weights)
        .map(|(x, w)| w * p.eval(*x))
        .sum()
}

/// Integral of a product `p * q` over [0, 1] by Gauss-Legendre exact for
/// the product degree, evaluating the factors separately.
///
/// Forming the coefficient-space product first would square the magnitude
/// of the monomial coefficients; for well-scaled factors with large
/// alternating coefficients (high-degree Legendre polynomials) the product
/// polynomial then evaluates with absolute errors far above the factor
/// values themselves. Factor-wise evaluation keeps the error at the scale
/// of the factors.
pub fn integrate_product_gl(p: &Poly1, q: &Poly1) -> f64 {
    if p.is_zero() || q.is_zero() {
        return 0.0;
    }
    let n = (p.degree() + q.degree()) / 2 + 1;
    let (nodes, weights) = gauss_legendre_01(n);
    nodes
        .iter()
        .zip(&weights)
        .map(|(x, w)| w * p.eval(*x) * q.eval(*x))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn disk_monomials_match_beta_values() {
        assert!(close(disk_monomial(0, 0), PI, 1e-15));
        assert!(close(disk_monomial(2, 0), PI / 4.0, 1e-15));
        assert!(close(disk_monomial(0, 2), PI / 4.0, 1e-15));
        assert!(close(disk_monomial(2, 2), PI / 24.0, 1e-15));
        assert!(close(disk_monomial(4, 0), PI / 8.0, 1e-15));
        assert_eq!(disk_monomial(1, 0), 0.0);
        assert_eq!(disk_monomial(3, 2), 0.0);
    }

    #[test]
    fn circle_monomials_match_wallis_values() {
        assert!(close(circle_monomial(0, 0), 2.0 * PI, 1e-15));
        assert!(close(circle_monomial(2, 0), PI, 1e-15));
        assert!(close(circle_monomial(4, 0), 0.75 * PI, 1e-15));
        assert!(close(circle_monomial(2, 2), 0.25 * PI, 1e-15));
        assert!(close(circle_monomial(6, 0), 0.625 * PI, 1e-15));
        assert_eq!(circle_monomial(1, 2), 0.0);
    }

    #[test]
    fn polynomial_arithmetic_and_calculus() {
        let p = Poly2::var_x().mul(&Poly2::var_x()); // x^2
        let q = p.add(&Poly2::r_squared()); // 2x^2 + y^2
        assert_eq!(q.eval(2.0, 3.0), 17.0);
        assert_eq!(q.dx().eval(2.0, 3.0), 8.0);
        assert_eq!(q.dy().eval(2.0, 3.0), 6.0);
        assert!(q.sub(&q).is_zero());
        assert_eq!(q.total_degree(), 2);
    }

    #[test]
    fn harmonic_pairs_are_harmonic_and_polar() {
        for l in 0..8u32 {
            let (c, s) = harmonic_pair(l);
            let lap_c = c.dx().dx().add(&c.dy().dy());
            let lap_s = s.dx().dx().add(&s.dy().dy());
            assert!(lap_c.is_zero(), "real part not harmonic at l={l}");
            assert!(lap_s.is_zero(), "imaginary part not harmonic at l={l}");
            let (r, th) = (0.8_f64, 0.9_f64);
            let (x, y) = (r * th.cos(), r * th.sin());
            assert!(close(
                c.eval(x, y),
                r.powi(l as i32) * (l as f64 * th).cos(),
                1e-14
            ));
            assert!(close(
                s.eval(x, y),
                r.powi(l as i32) * (l as f64 * th).sin(),
                1e-14
            ));
        }
    }

    #[test]
    fn square_quadrature_is_exact_for_polynomials() {
        for a in 0..7u16 {
            for b in 0..7u16 {
                let p = Poly2::monomial(a, b, 1.0);
                let want = 1.0 / ((a as f64 + 1.0) * (b as f64 + 1.0));
                assert!(
                    close(integrate_square(&p), want, 1e-14),
                    "monomial {a},{b}"
                );
            }
        }
    }

    #[test]
    fn gauss_legendre_nodes_are_sane() {
        let (nodes, weights) = gauss_legendre_01(5);
        assert_eq!(nodes.len(), 5);
        assert!(close(weights.iter().sum::<f64>(), 1.0, 1e-15));
        assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(nodes.iter().all(|&x| x > 0.0 && x < 1.0));
        // Degree-9 exactness for the 5-point rule.
        let p = Poly1::from_coeffs(vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let got: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(x, w)| w * p.eval(*x))
            .sum();
        assert!(close(got, 0.1, 1e-14));
    }

    #[test]
    fn shifted_legendre_is_orthogonal_on_unit_interval() {
        for i in 0..6 {
            for j in 0..6 {
                let pi = shifted_legendre(i);
                let pj = shifted_legendre(j);
                let val = integrate_poly1_gl(&pi.mul(&pj));
                let want = if i == j { 1.0 / (2.0 * i as f64 + 1.0) } else { 0.0 };
                // Shifted coefficients reach ~10^3, so roundoff sits well
                // above machine epsilon while genuine defects would be O(1).
                assert!(
                    (val - want).abs() < 1e-11,
                    "orthogonality failed at ({i},{j}): {val}"
                );
            }
        }
    }

    #[test]
    fn poly1_restrictions_and_integrals() {
        // p(x, y) = x^2 y + 3 y^2 on the line y = 2: 2 x^2 + 12.
        let mut p = Poly2::zero();
        p.add_term(2, 1, 1.0);
        p.add_term(0, 2, 3.0);
        let line = p.restrict_y(2.0);
        assert_eq!(line.eval(1.0), 14.0);
        assert!(close(line.integrate_01(), 2.0 / 3.0 + 12.0, 1e-15));
        let edge = p.restrict_x(1.0); // y + 3 y^2
        assert!(close(edge.integrate_01(), 0.5 + 1.0, 1e-15));
        assert!(close(
            integrate_poly1_gl(&edge),
            edge.integrate_01(),
            1e-14
        ));
    }
}
