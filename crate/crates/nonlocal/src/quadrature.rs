//! Gauss–Legendre quadrature on the reference element [0, 1].

use crate::error::{Error, Result};

/// Gauss–Legendre rule with `order` points on [0, 1]; exact for polynomials
/// of degree `2*order - 1`. Weights are positive and sum to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn gauss(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidQuadratureOrder { order });
        }
        let (xs, ws) = gauss_legendre_unit(order);
        Ok(Self {
            points: xs,
            weights: ws,
        })
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrates `f` over `[lo, hi]` with the rule mapped onto the interval.
    pub fn integrate(&self, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
        let len = hi - lo;
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&q, &w)| len * w * f(lo + len * q))
            .sum()
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self::gauss(2).expect("order 2 is valid")
    }
}

/// Nodes and weights on [0, 1], from the symmetric rule on [-1, 1] computed
/// by Newton iteration on the Legendre polynomial.
fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut points = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev-like initial guess for the i-th root of P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map [-1, 1] -> [0, 1]; roots come out in descending order
        points[n - 1 - i] = (x + 1.0) / 2.0;
        weights[n - 1 - i] = w / 2.0;
    }
    (points, weights)
}

/// Evaluates `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_order_zero() {
        assert!(matches!(
            QuadratureRule::gauss(0),
            Err(Error::InvalidQuadratureOrder { order: 0 })
        ));
    }

    #[test]
    fn weights_positive_and_normalized() {
        for order in 1..=6 {
            let q = QuadratureRule::gauss(order).unwrap();
            assert!(q.weights().iter().all(|&w| w > 0.0));
            let sum: f64 = q.weights().iter().sum();
            assert!((sum - 1.0).abs() < 1e-14, "order {order}: sum {sum}");
            assert!(q.points().iter().all(|&x| (0.0..=1.0).contains(&x)));
        }
    }

    #[test]
    fn known_two_point_rule() {
        let q = QuadratureRule::gauss(2).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((q.points()[0] - (1.0 - s) / 2.0).abs() < 1e-15);
        assert!((q.points()[1] - (1.0 + s) / 2.0).abs() < 1e-15);
        assert!((q.weights()[0] - 0.5).abs() < 1e-15);
    }

    // order-n Gauss is exact up to degree 2n-1
    #[test]
    fn polynomial_exactness() {
        for order in 1..=5usize {
            let q = QuadratureRule::gauss(order).unwrap();
            for deg in 0..=(2 * order - 1) as i32 {
                let got = q.integrate(0.0, 1.0, |x| x.powi(deg));
                let exact = 1.0 / (deg as f64 + 1.0);
                assert!(
                    (got - exact).abs() < 1e-14,
                    "order {order}, degree {deg}: {got} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn integrates_over_subinterval() {
        let q = QuadratureRule::gauss(3).unwrap();
        // int_{1/4}^{3/4} x^2 dx = (27 - 1)/(64 * 3)
        let got = q.integrate(0.25, 0.75, |x| x * x);
        assert!((got - 26.0 / 192.0).abs() < 1e-15);
    }
}
