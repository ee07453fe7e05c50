//! Smallness and uniqueness diagnostics evaluated from user-supplied
//! constants. The Lipschitz constants are inputs, not derived quantities;
//! the checks report whether the sufficient conditions of the error analysis
//! hold for them.

/// Constants entering the diagnostics. `c_p` defaults to the
/// Poincare-Friedrichs constant `1/pi` of the unit interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagnosticConstants {
    /// Lower ellipticity bound, must be positive.
    pub alpha: f64,
    pub beta: f64,
    /// Dual norm of the right-hand side (or its discrete surrogate).
    pub f_dual_norm: f64,
    /// Local Lipschitz constant of the functional on the relevant ball.
    pub c_ell: f64,
    /// Local Lipschitz constant of `mu -> a(., mu)`.
    pub c_a: f64,
    /// Local Lipschitz constant of `mu -> lambda(., mu)`.
    pub c_lambda: f64,
    pub c_p: f64,
    /// Lipschitz constant of `u -> A(u)` in the uniqueness condition.
    pub gamma: f64,
    pub ell_at_zero: f64,
}

impl DiagnosticConstants {
    pub fn new(alpha: f64, beta: f64, f_dual_norm: f64) -> Self {
        Self {
            alpha,
            beta,
            f_dual_norm,
            c_ell: 0.0,
            c_a: 0.0,
            c_lambda: 0.0,
            c_p: 1.0 / std::f64::consts::PI,
            gamma: 0.0,
            ell_at_zero: 0.0,
        }
    }

    /// A priori solution radius `R_F = ||F||_* / alpha`.
    pub fn r_f(&self) -> f64 {
        self.f_dual_norm / self.alpha
    }

    /// Fixed-point radius `D_F = R_F * C_ell + |l(0)|`.
    pub fn d_f(&self) -> f64 {
        self.r_f() * self.c_ell + self.ell_at_zero.abs()
    }

    /// Uniqueness condition `gamma * ||F||_* < alpha^2`; returns the ratio
    /// and whether it is strictly below 1.
    pub fn uniqueness(&self) -> (f64, bool) {
        let ratio = self.gamma * self.f_dual_norm / (self.alpha * self.alpha);
        (ratio, ratio < 1.0)
    }

    /// Smallness condition for fixed-point convergence of the general
    /// problem: `2 C_ell max(C_a, C_lambda) (1 + C_p^2) / alpha^2 * ||F||_*`,
    /// satisfied when at most 1.
    pub fn smallness(&self) -> (f64, bool) {
        let c_al = self.c_a.max(self.c_lambda);
        let value = 2.0 * self.c_ell * c_al * (1.0 + self.c_p * self.c_p)
            / (self.alpha * self.alpha)
            * self.f_dual_norm;
        (value, value <= 1.0)
    }

    /// Smallness condition of the simplified homogeneous setting for degree
    /// `p`: `||F||_* p beta^(p-1) / alpha^(2p) * C_ell * C_a`, satisfied when
    /// at most 1/2. `c_a` is understood as evaluated at the radius
    /// `C_ell ||F||_* / alpha^p`.
    pub fn simplified_smallness(&self, p: f64) -> (f64, bool) {
        let value = self.f_dual_norm * p * self.beta.powf(p - 1.0) / self.alpha.powf(2.0 * p)
            * self.c_ell
            * self.c_a;
        (value, value <= 0.5)
    }
}
