//! Scalar fixed-point reduction of the nonlocal problem: the parameterized
//! Galerkin solve `u_{S,mu}`, the map `G_S(mu) = l(u_{S,mu})`, plain and
//! damped fixed-point iterations with behaviour classification, and the
//! simplified path for x-independent coefficients with homogeneous
//! functionals.

use std::sync::Arc;

use crate::assembly::galerkin_solve;
use crate::coefficients::CoefficientModel;
use crate::error::{Error, Result};
use crate::functionals::Functional;
use crate::mesh::{FeFunction, UniformMesh1D};
use crate::quadrature::QuadratureRule;

/// Terminal classification of a fixed-point iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IterationStatus {
    /// `|x_{n+1} - x_n| <= tol`.
    Converged,
    /// Budget exhausted without another terminal condition.
    MaxIterations,
    /// `|x_{n+2} - x_n| <= tol` while `|x_{n+1} - x_n| > 10*tol` over the
    /// detection window: the iterates alternate between two values.
    TwoCycle,
    /// An iterate exceeded the blow-up threshold or became non-finite.
    Blowup,
}

impl IterationStatus {
    pub fn name(&self) -> &'static str {
        match self {
            IterationStatus::Converged => "converged",
            IterationStatus::MaxIterations => "max_iterations",
            IterationStatus::TwoCycle => "two_cycle",
            IterationStatus::Blowup => "blowup",
        }
    }
}

/// Stopping parameters shared by all scalar iterations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationControl {
    /// Stop when `|x_{n+1} - x_n| <= tol`.
    pub tol: f64,
    pub max_iter: usize,
    /// Magnitude beyond which an iterate counts as blown up.
    pub blowup: f64,
}

impl Default for IterationControl {
    fn default() -> Self {
        Self {
            tol: 1e-14,
            max_iter: 1000,
            blowup: 1e6,
        }
    }
}

/// Consecutive steps that must look 2-periodic before classifying a trace as
/// a two-cycle.
const TWO_CYCLE_WINDOW: usize = 8;

/// Iterate sequence with residuals `|x_{k+1} - x_k|` and the terminal
/// classification.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointTrace {
    iterates: Vec<f64>,
    residuals: Vec<f64>,
    status: IterationStatus,
}

impl FixedPointTrace {
    pub fn status(&self) -> IterationStatus {
        self.status
    }

    /// All iterates starting with `x_0`.
    pub fn iterates(&self) -> &[f64] {
        &self.iterates
    }

    /// `residuals()[k] = |x_{k+1} - x_k|`.
    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    /// Number of applications of the map.
    pub fn steps(&self) -> usize {
        self.residuals.len()
    }

    pub fn last(&self) -> f64 {
        *self.iterates.last().expect("trace holds at least x0")
    }

    /// The fixed-point value for converged traces.
    pub fn final_mu(&self) -> Option<f64> {
        (self.status == IterationStatus::Converged).then(|| self.last())
    }

    /// The two alternating values of a two-cycle, in visit order.
    pub fn cycle(&self) -> Option<(f64, f64)> {
        if self.status != IterationStatus::TwoCycle {
            return None;
        }
        let n = self.iterates.len();
        Some((self.iterates[n - 2], self.iterates[n - 1]))
    }
}

/// Runs `x_{n+1} = map(x_n)`, classifying the outcome. Errors from the map
/// abort the iteration.
fn try_iterate(
    mut map: impl FnMut(f64) -> Result<f64>,
    x0: f64,
    ctl: &IterationControl,
) -> Result<FixedPointTrace> {
    let mut iterates = vec![x0];
    let mut residuals = Vec::new();
    let mut cycle_run = 0usize;
    let mut status = IterationStatus::MaxIterations;
    for _ in 0..ctl.max_iter {
        let x_prev = *iterates.last().unwrap();
        let x_next = map(x_prev)?;
        let r = (x_next - x_prev).abs();
        iterates.push(x_next);
        residuals.push(r);
        if !x_next.is_finite() || x_next.abs() > ctl.blowup {
            status = IterationStatus::Blowup;
            break;
        }
        if r <= ctl.tol {
            status = IterationStatus::Converged;
            break;
        }
        let n = iterates.len();
        if n >= 3 && (iterates[n - 1] - iterates[n - 3]).abs() <= ctl.tol && r > 10.0 * ctl.tol {
            cycle_run += 1;
            if cycle_run >= TWO_CYCLE_WINDOW {
                status = IterationStatus::TwoCycle;
                break;
            }
        } else {
            cycle_run = 0;
        }
    }
    Ok(FixedPointTrace {
        iterates,
        residuals,
        status,
    })
}

/// Plain fixed-point iteration `x_{n+1} = G(x_n)`.
pub fn fixed_point_iterate(
    mut g: impl FnMut(f64) -> f64,
    x0: f64,
    ctl: &IterationControl,
) -> FixedPointTrace {
    try_iterate(|x| Ok(g(x)), x0, ctl).expect("map is infallible")
}

/// Damped iteration `x_{n+1} = (kappa*x_n + G(x_n)) / (kappa + 1)`; for
/// `kappa = 0` this is the plain iteration. Converges monotonically whenever
/// `kappa` dominates the Lipschitz constant of `G` and the start lies on one
/// side of the fixed point.
pub fn damped_iterate(
    mut g: impl FnMut(f64) -> f64,
    x0: f64,
    kappa: f64,
    ctl: &IterationControl,
) -> FixedPointTrace {
    try_iterate(|x| Ok((kappa * x + g(x)) / (kappa + 1.0)), x0, ctl).expect("map is infallible")
}

/// Which ordering hypothesis of the damped-iteration convergence lemma holds
/// at the start `u_0`, given the first damped iterate `u_1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MfiCase {
    /// `u_0 <= u_1` and `u_0 <= mu_star`: monotone nondecreasing approach.
    FromBelow,
    /// `u_0 >= u_1` and `u_0 >= mu_star`: monotone nonincreasing approach.
    FromAbove,
    Neither,
}

/// Checks the damped-iteration hypotheses; when both hold (start at the fixed
/// point) the nondecreasing case is reported.
pub fn check_mfi_preconditions(
    g: impl Fn(f64) -> f64,
    kappa: f64,
    x0: f64,
    mu_star: f64,
) -> MfiCase {
    let u1 = (kappa * x0 + g(x0)) / (kappa + 1.0);
    if x0 <= u1 && x0 <= mu_star {
        MfiCase::FromBelow
    } else if x0 >= u1 && x0 >= mu_star {
        MfiCase::FromAbove
    } else {
        MfiCase::Neither
    }
}

/// Iteration scheme selector for the nonlinear solves.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scheme {
    Plain,
    Damped { kappa: f64 },
}

impl Scheme {
    fn apply(&self, g_value: f64, x: f64) -> f64 {
        match *self {
            Scheme::Plain => g_value,
            Scheme::Damped { kappa } => (kappa * x + g_value) / (kappa + 1.0),
        }
    }
}

/// Outcome of a nonlinear solve: the scalar trace plus, when converged, the
/// finite-element solution at the fixed point.
#[derive(Clone, Debug)]
pub struct NonlinearSolution {
    pub trace: FixedPointTrace,
    pub solution: Option<FeFunction>,
}

type LoadFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// The discrete nonlocal problem: mesh, coefficient pair, functional `l`,
/// load `f` and quadrature rule.
#[derive(Clone)]
pub struct NonlocalProblem {
    mesh: UniformMesh1D,
    coeff: CoefficientModel,
    functional: Functional,
    load: LoadFn,
    quad: QuadratureRule,
}

impl NonlocalProblem {
    pub fn new(
        mesh: UniformMesh1D,
        coeff: CoefficientModel,
        functional: Functional,
        load: impl Fn(f64) -> f64 + Send + Sync + 'static,
        quad: QuadratureRule,
    ) -> Self {
        Self {
            mesh,
            coeff,
            functional,
            load: Arc::new(load),
            quad,
        }
    }

    pub fn mesh(&self) -> UniformMesh1D {
        self.mesh
    }

    pub fn coefficient(&self) -> &CoefficientModel {
        &self.coeff
    }

    pub fn functional(&self) -> &Functional {
        &self.functional
    }

    pub fn quadrature(&self) -> &QuadratureRule {
        &self.quad
    }

    pub fn load(&self, x: f64) -> f64 {
        (self.load)(x)
    }

    /// Galerkin solution of the linear problem with the nonlocal argument
    /// frozen at `mu`.
    pub fn solve_parameterized(&self, mu: f64) -> Result<FeFunction> {
        let load = self.load.clone();
        galerkin_solve(self.mesh, &self.coeff, mu, &self.quad, move |x| load(x))
    }

    /// `G_S(mu) = l(u_{S,mu})`.
    pub fn g_eval(&self, mu: f64) -> Result<f64> {
        let u = self.solve_parameterized(mu)?;
        self.functional.eval(&u, &self.quad)
    }

    /// Solution `psi_S` of the Poisson problem (`a = 1`, `lambda = 0`) with
    /// this problem's load.
    pub fn poisson_solution(&self) -> Result<FeFunction> {
        let load = self.load.clone();
        galerkin_solve(
            self.mesh,
            &CoefficientModel::constant(1.0),
            0.0,
            &self.quad,
            move |x| load(x),
        )
    }

    /// Discrete surrogate for the dual norm of `F(v) = int f*v`: the energy
    /// norm of the discrete Poisson solution (the Riesz representer in `S_h`).
    pub fn dual_norm_surrogate(&self) -> Result<f64> {
        Ok(self.poisson_solution()?.energy_norm())
    }

    /// Fixed-point iteration on the full map `G_S`, one Galerkin solve per
    /// step. On convergence the returned function solves the discrete
    /// nonlinear problem with `|mu_S - l(u_{S,mu_S})| <= tol` for contractive
    /// maps.
    pub fn solve_nonlinear(
        &self,
        x0: f64,
        scheme: Scheme,
        ctl: &IterationControl,
    ) -> Result<NonlinearSolution> {
        let trace = try_iterate(|x| Ok(scheme.apply(self.g_eval(x)?, x)), x0, ctl)?;
        let solution = match trace.final_mu() {
            Some(mu) => Some(self.solve_parameterized(mu)?),
            None => None,
        };
        Ok(NonlinearSolution { trace, solution })
    }

    /// Simplified path for x-independent `a`, `lambda = 0` and homogeneous
    /// `l`: one Poisson solve delivers `c = l(psi_S)`, then the scalar map
    /// `x -> c / a(x)^p` is iterated and the solution recovered as
    /// `psi_S / a(mu_S)`.
    pub fn solve_simplified(
        &self,
        x0: f64,
        scheme: Scheme,
        ctl: &IterationControl,
    ) -> Result<NonlinearSolution> {
        let map = self.simplified_map()?;
        let trace = try_iterate(|x| Ok(scheme.apply(map(x), x)), x0, ctl)?;
        let solution = match trace.final_mu() {
            Some(mu) => {
                let psi = self.poisson_solution()?;
                Some(psi.scaled(1.0 / self.coeff.a_scalar(mu)?))
            }
            None => None,
        };
        Ok(NonlinearSolution { trace, solution })
    }

    /// The scalar map `x -> l(psi_S) / a(x)^p` of the simplified path.
    pub fn simplified_map(&self) -> Result<impl Fn(f64) -> f64> {
        if !self.coeff.is_x_independent() {
            return Err(Error::StructureMismatch(
                "simplified path needs an x-independent coefficient",
            ));
        }
        if !self.coeff.is_lambda_zero() {
            return Err(Error::StructureMismatch("simplified path needs lambda = 0"));
        }
        let p = self.functional.homogeneity().ok_or(Error::StructureMismatch(
            "simplified path needs a homogeneous functional",
        ))?;
        let psi = self.poisson_solution()?;
        let c = self.functional.eval(&psi, &self.quad)?;
        let coeff = self.coeff.clone();
        Ok(move |x: f64| {
            let a = coeff.a(0.5, x);
            let ap = if p == 1.0 {
                a
            } else if p == 2.0 {
                a * a
            } else {
                a.powf(p)
            };
            c / ap
        })
    }
}
