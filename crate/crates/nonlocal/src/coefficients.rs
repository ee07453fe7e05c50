//! Coefficient models `(a(x, r), lambda(x, r))` with ellipticity bounds, the
//! piecewise-quadratic scenario functions `G` and the coefficients derived
//! from them, plus the oscillatory perturbation `a(mu) * (1 + eps*cos(m*x))`.
//!
//! Each scenario `G` interpolates its three fixed points `mu1 = 1/4`,
//! `mu0 = 1`, `mu2 = 2` by construction and is stored with exact integer
//! numerators over a common denominator, so the printed fractions are
//! reproduced without transcription drift.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

type CoefficientFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Diffusion/reaction coefficient pair with ellipticity bounds
/// `alpha <= a(x, r) <= beta` and `0 <= lambda(x, r) <= beta`, enforced on
/// the declared parameter validity range.
#[derive(Clone)]
pub struct CoefficientModel {
    a: CoefficientFn,
    lambda: CoefficientFn,
    alpha: f64,
    beta: f64,
    /// Parameter range on which the bounds are guaranteed; outside of it the
    /// coefficient stays evaluable but bound checks are skipped.
    validity: Option<(f64, f64)>,
    x_independent: bool,
    lambda_zero: bool,
}

impl fmt::Debug for CoefficientModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientModel")
            .field("alpha", &self.alpha)
            .field("beta", &self.beta)
            .field("validity", &self.validity)
            .field("x_independent", &self.x_independent)
            .field("lambda_zero", &self.lambda_zero)
            .finish()
    }
}

impl CoefficientModel {
    /// General constructor. The caller is responsible for `alpha`, `beta`
    /// actually bounding the supplied functions; violations surface during
    /// assembly.
    pub fn new(
        a: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        lambda: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        alpha: f64,
        beta: f64,
    ) -> Self {
        Self {
            a: Arc::new(a),
            lambda: Arc::new(lambda),
            alpha,
            beta,
            validity: None,
            x_independent: false,
            lambda_zero: false,
        }
    }

    /// Constant diffusion `a = c`, no reaction.
    pub fn constant(c: f64) -> Self {
        Self {
            a: Arc::new(move |_, _| c),
            lambda: Arc::new(|_, _| 0.0),
            alpha: c,
            beta: c,
            validity: None,
            x_independent: true,
            lambda_zero: true,
        }
    }

    /// Marks the model as independent of `x` with `lambda = 0`; enables the
    /// simplified solve path.
    pub fn assume_simplified_structure(mut self) -> Self {
        self.x_independent = true;
        self.lambda_zero = true;
        self
    }

    pub fn a(&self, x: f64, mu: f64) -> f64 {
        (self.a)(x, mu)
    }

    pub fn lambda(&self, x: f64, mu: f64) -> f64 {
        (self.lambda)(x, mu)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn validity(&self) -> Option<(f64, f64)> {
        self.validity
    }

    /// Whether the ellipticity bounds are asserted at parameter `mu`.
    pub fn bounds_enforced_at(&self, mu: f64) -> bool {
        match self.validity {
            None => true,
            Some((lo, hi)) => (lo..=hi).contains(&mu),
        }
    }

    pub fn is_x_independent(&self) -> bool {
        self.x_independent
    }

    pub fn is_lambda_zero(&self) -> bool {
        self.lambda_zero
    }

    /// The scalar `a(mu)` for x-independent models.
    pub fn a_scalar(&self, mu: f64) -> Result<f64> {
        if !self.x_independent {
            return Err(Error::StructureMismatch(
                "coefficient depends on x; no scalar a(mu)",
            ));
        }
        Ok(self.a(0.5, mu))
    }
}

/// Quadratic `(c2*x^2 + c1*x + c0) / den` with integer coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Quadratic {
    pub c2: i64,
    pub c1: i64,
    pub c0: i64,
    pub den: i64,
}

impl Quadratic {
    pub fn eval(&self, x: f64) -> f64 {
        ((self.c2 as f64 * x + self.c1 as f64) * x + self.c0 as f64) / self.den as f64
    }

    pub fn derivative(&self, x: f64) -> f64 {
        (2.0 * self.c2 as f64 * x + self.c1 as f64) / self.den as f64
    }

    /// Real roots in ascending order, if any.
    fn roots(&self) -> Option<(f64, f64)> {
        let (a, b, c) = (self.c2 as f64, self.c1 as f64, self.c0 as f64);
        if a == 0.0 {
            if b == 0.0 {
                return None;
            }
            let r = -c / b;
            return Some((r, r));
        }
        let disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            return None;
        }
        let s = disc.sqrt();
        let r1 = (-b - s) / (2.0 * a);
        let r2 = (-b + s) / (2.0 * a);
        Some((r1.min(r2), r1.max(r2)))
    }
}

/// Piecewise-quadratic fixed-point map: the left piece applies for
/// `mu <= mu0`, the right piece for `mu > mu0`. Beyond `[mu1, mu2]` each
/// piece is extended by its own formula, which is what lets divergent
/// iterations escape toward infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PiecewiseQuadraticG {
    mu1: f64,
    mu0: f64,
    mu2: f64,
    left: Quadratic,
    right: Quadratic,
}

impl PiecewiseQuadraticG {
    pub fn new(mu1: f64, mu0: f64, mu2: f64, left: Quadratic, right: Quadratic) -> Self {
        Self {
            mu1,
            mu0,
            mu2,
            left,
            right,
        }
    }

    /// Knot abscissae `(mu1, mu0, mu2)`.
    pub fn knots(&self) -> (f64, f64, f64) {
        (self.mu1, self.mu0, self.mu2)
    }

    pub fn eval(&self, mu: f64) -> f64 {
        if mu <= self.mu0 {
            self.left.eval(mu)
        } else {
            self.right.eval(mu)
        }
    }

    pub fn derivative(&self, mu: f64) -> f64 {
        if mu <= self.mu0 {
            self.left.derivative(mu)
        } else {
            self.right.derivative(mu)
        }
    }

    /// Largest interval `(lo, hi)` around `mu0` on which `G > 0`: bounded on
    /// the left by the nearest left-piece root below `mu0` and on the right
    /// by the nearest right-piece root above `mu0`.
    pub fn positivity_interval(&self) -> (f64, f64) {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        if let Some((r1, r2)) = self.left.roots() {
            if r1 < self.mu0 {
                lo = lo.max(r1);
            }
            if r2 < self.mu0 {
                lo = lo.max(r2);
            }
        }
        if let Some((r1, r2)) = self.right.roots() {
            if r1 > self.mu0 {
                hi = hi.min(r1);
            }
            if r2 > self.mu0 {
                hi = hi.min(r2);
            }
        }
        (lo, hi)
    }

    /// Extrema of `G` over `[lo, hi]`: piece end points plus interior
    /// vertices. Returns `(min, max)`.
    fn extrema_on(&self, lo: f64, hi: f64) -> (f64, f64) {
        let mut candidates = vec![lo, hi];
        if lo < self.mu0 && self.mu0 < hi {
            candidates.push(self.mu0);
        }
        for (piece, piece_lo, piece_hi) in [
            (self.left, lo, hi.min(self.mu0)),
            (self.right, lo.max(self.mu0), hi),
        ] {
            if piece.c2 != 0 && piece_lo < piece_hi {
                let vertex = -(piece.c1 as f64) / (2.0 * piece.c2 as f64);
                if piece_lo < vertex && vertex < piece_hi {
                    candidates.push(vertex);
                }
            }
        }
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for c in candidates {
            let g = self.eval(c);
            min = min.min(g);
            max = max.max(g);
        }
        (min, max)
    }
}

/// The three iteration-behaviour scenarios.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    /// Sign condition around `mu0 = 1`; the plain iteration converges.
    Convergent,
    /// The plain iteration oscillates between two values but stays bounded.
    BoundedDivergent,
    /// The map escapes `[mu1, mu2]`; iterates blow up.
    UnboundedDivergent,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [
        Scenario::Convergent,
        Scenario::BoundedDivergent,
        Scenario::UnboundedDivergent,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Convergent => "convergent",
            Scenario::BoundedDivergent => "bounded_divergent",
            Scenario::UnboundedDivergent => "unbounded_divergent",
        }
    }

    /// Interpolation abscissa `nu1`, the default starting guess.
    pub fn nu1(&self) -> f64 {
        match self {
            Scenario::Convergent => 0.25 + 0.2,
            Scenario::BoundedDivergent | Scenario::UnboundedDivergent => 0.75,
        }
    }

    pub fn nu2(&self) -> f64 {
        match self {
            Scenario::Convergent => 2.0 - 0.2,
            Scenario::BoundedDivergent => 1.0 + 0.15,
            Scenario::UnboundedDivergent => 1.4,
        }
    }
}

impl std::str::FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "convergent" => Ok(Scenario::Convergent),
            "bounded_divergent" => Ok(Scenario::BoundedDivergent),
            "unbounded_divergent" => Ok(Scenario::UnboundedDivergent),
            other => Err(format!("unknown scenario '{other}'")),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The scenario map with knots `(1/4, 1, 2)` and the printed rational
/// coefficients.
pub fn scenario_g(case: Scenario) -> PiecewiseQuadraticG {
    let (left, right) = match case {
        Scenario::Convergent => (
            Quadratic {
                c2: -20,
                c1: 47,
                c0: -5,
                den: 22,
            },
            Quadratic {
                c2: 5,
                c1: -7,
                c0: 10,
                den: 8,
            },
        ),
        Scenario::BoundedDivergent => (
            Quadratic {
                c2: -16,
                c1: 25,
                c0: -4,
                den: 5,
            },
            Quadratic {
                c2: 160,
                c1: -429,
                c0: 320,
                den: 51,
            },
        ),
        Scenario::UnboundedDivergent => (
            Quadratic {
                c2: -12,
                c1: 16,
                c0: -3,
                den: 1,
            },
            Quadratic {
                c2: 65,
                c1: -183,
                c0: 130,
                den: 12,
            },
        ),
    };
    PiecewiseQuadraticG::new(0.25, 1.0, 2.0, left, right)
}

/// Margin by which the validity range stays inside the positivity interval
/// of `G`, keeping `a = (l(psi)/G)^{1/p}` finite on the closed range.
const POSITIVITY_MARGIN: f64 = 1e-9;

/// Coefficient `a(mu) = (ell_psi / G(mu))^{1/p}`, `lambda = 0`, which turns
/// the simplified fixed-point equation into `mu = G(mu)` up to discretization
/// of `l(psi)`.
///
/// The default validity range is `[mu1 - 1, mu2 + 1]` clipped to where `G`
/// stays positive; `G` must be positive on all of the core range
/// `[mu1, mu2]`. Outside the validity range `a` remains evaluable (the
/// divergent iterations need that) but ellipticity checks are suppressed.
pub fn coefficient_from_g(g: &PiecewiseQuadraticG, ell_psi: f64, p: f64) -> Result<CoefficientModel> {
    let (mu1, _, mu2) = g.knots();
    let (pos_lo, pos_hi) = g.positivity_interval();
    if pos_lo >= mu1 || pos_hi <= mu2 {
        let mu = if pos_lo >= mu1 { pos_lo } else { pos_hi };
        return Err(Error::NonPositiveG { mu });
    }
    let lo = (mu1 - 1.0).max(pos_lo + POSITIVITY_MARGIN);
    let hi = (mu2 + 1.0).min(pos_hi - POSITIVITY_MARGIN);
    coefficient_from_g_on(g, ell_psi, p, lo, hi)
}

/// Same as [`coefficient_from_g`] with an explicit validity range; fails if
/// `G <= 0` anywhere on it.
pub fn coefficient_from_g_on(
    g: &PiecewiseQuadraticG,
    ell_psi: f64,
    p: f64,
    lo: f64,
    hi: f64,
) -> Result<CoefficientModel> {
    if ell_psi <= 0.0 {
        return Err(Error::NonPositiveNormalization { value: ell_psi });
    }
    if p <= 0.0 {
        return Err(Error::InvalidHomogeneity { p });
    }
    let (pos_lo, pos_hi) = g.positivity_interval();
    if lo <= pos_lo || hi >= pos_hi {
        let mu = if lo <= pos_lo { lo } else { hi };
        return Err(Error::NonPositiveG { mu });
    }
    let (g_min, g_max) = g.extrema_on(lo, hi);
    debug_assert!(g_min > 0.0);
    let alpha = (ell_psi / g_max).powf(1.0 / p);
    let beta = (ell_psi / g_min).powf(1.0 / p);
    let g = *g;
    let a = move |_x: f64, mu: f64| (ell_psi / g.eval(mu)).powf(1.0 / p);
    Ok(CoefficientModel {
        a: Arc::new(a),
        lambda: Arc::new(|_, _| 0.0),
        alpha,
        beta,
        validity: Some((lo, hi)),
        x_independent: true,
        lambda_zero: true,
    })
}

/// Oscillatory perturbation `a(x, mu) = base_a(mu) * (1 + eps*cos(m*x))` of
/// an x-independent base; bounds scale by `1 -+ eps`.
pub fn perturbed_coefficient(base: &CoefficientModel, eps: f64, m: u32) -> Result<CoefficientModel> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidPerturbation { eps });
    }
    let base_a = base.a.clone();
    let mf = m as f64;
    let a = move |x: f64, mu: f64| base_a(x, mu) * (1.0 + eps * (mf * x).cos());
    Ok(CoefficientModel {
        a: Arc::new(a),
        lambda: base.lambda.clone(),
        alpha: base.alpha * (1.0 - eps),
        beta: base.beta * (1.0 + eps),
        validity: base.validity,
        x_independent: eps == 0.0 && base.x_independent,
        lambda_zero: base.lambda_zero,
    })
}
