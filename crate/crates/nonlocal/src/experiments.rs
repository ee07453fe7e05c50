//! Scenario runners: iteration-behaviour traces, parameter sweeps of the
//! discrete map `G_h`, and mesh-refinement studies with log-log rate fits.

use crate::coefficients::{coefficient_from_g, perturbed_coefficient, scenario_g, Scenario};
use crate::error::{Error, Result};
use crate::functionals::Functional;
use crate::mesh::{max_derivative_error, DerivativeSampling, FeFunction, UniformMesh1D};
use crate::quadrature::QuadratureRule;
use crate::solver::{FixedPointTrace, IterationControl, NonlocalProblem, Scheme};

/// One mesh level of a refinement study.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRecord {
    pub h: f64,
    /// Discrete max norm of the derivative error against the exact solution.
    pub max_deriv_error: f64,
    /// `|mu0 - mu_h|`.
    pub mu_error: f64,
    pub iterations: usize,
}

/// Least-squares fit of `error = constant * h^slope` on log-log axes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub constant: f64,
    pub r_squared: f64,
}

/// Errors at or below this are treated as floating-point noise and excluded
/// from rate fits.
const NOISE_FLOOR: f64 = 1e-13;

/// Fits `(h, error)` pairs in log-log coordinates; needs at least three
/// records above the noise floor.
pub fn fit_rate(samples: &[(f64, f64)]) -> Result<RateFit> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(_, e)| *e >= NOISE_FLOOR)
        .map(|&(h, e)| (h.ln(), e.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::TooFewRecords { got: pts.len() });
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let mean_y = sy / n;
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let ss_res: f64 = pts
        .iter()
        .map(|p| (p.1 - (slope * p.0 + intercept)).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(RateFit {
        slope,
        constant: intercept.exp(),
        r_squared,
    })
}

/// The experiment problem of a scenario on `n` interior nodes: load `f = 1`,
/// functional `12 * int |u'|^2`, coefficient `a(mu) = G(mu)^{-1/2}` from the
/// exact normalization `l(psi) = 1`.
pub fn scenario_problem(case: Scenario, n: usize) -> Result<NonlocalProblem> {
    scenario_problem_with(case, n, 0.0, 1)
}

/// Same with the oscillatory coefficient perturbation `(1 + eps*cos(m*x))`.
pub fn scenario_problem_with(
    case: Scenario,
    n: usize,
    eps: f64,
    m: u32,
) -> Result<NonlocalProblem> {
    let mesh = UniformMesh1D::new(n)?;
    let base = coefficient_from_g(&scenario_g(case), 1.0, 2.0)?;
    let coeff = if eps == 0.0 {
        base
    } else {
        perturbed_coefficient(&base, eps, m)?
    };
    Ok(NonlocalProblem::new(
        mesh,
        coeff,
        Functional::experiment_energy(),
        |_| 1.0,
        QuadratureRule::default(),
    ))
}

/// Trace of a scenario iteration plus, for the convergent case, the per-step
/// errors against the converged reference value.
#[derive(Clone, Debug)]
pub struct ScenarioRun {
    pub trace: FixedPointTrace,
    /// `|mu_h - x_k|` per iterate, with `mu_h` the final converged iterate.
    pub step_errors: Option<Vec<f64>>,
}

/// Runs the scenario iteration on the mesh with `n` interior nodes through
/// the simplified scalar path (the measured `l(psi_h)` enters the iteration
/// map). `x0` defaults to the scenario's `nu1`.
pub fn run_iteration_scenario(
    case: Scenario,
    n: usize,
    x0: Option<f64>,
    scheme: Scheme,
    ctl: &IterationControl,
) -> Result<ScenarioRun> {
    let problem = scenario_problem(case, n)?;
    let start = x0.unwrap_or_else(|| case.nu1());
    let out = problem.solve_simplified(start, scheme, ctl)?;
    let step_errors = match (case, out.trace.final_mu()) {
        (Scenario::Convergent, Some(mu)) => Some(
            out.trace
                .iterates()
                .iter()
                .map(|x| (mu - x).abs())
                .collect(),
        ),
        _ => None,
    };
    Ok(ScenarioRun {
        trace: out.trace,
        step_errors,
    })
}

/// `count` equally spaced points covering `[lo, hi]` inclusively.
pub fn uniform_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2, "grid needs at least two points");
    (0..count)
        .map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64)
        .collect()
}

/// Tabulates `G_h` by one full parameterized solve per grid point.
pub fn sweep_g(problem: &NonlocalProblem, grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    grid.iter()
        .map(|&mu| Ok((mu, problem.g_eval(mu)?)))
        .collect()
}

/// Checks the sign condition around the fixed point `mu0`: strictly
/// `mu < G < mu0` left of `mu0` and `mu0 < G < mu` right of it. Rows exactly
/// at `mu0` (excluded by precondition) are ignored.
pub fn verify_sign_condition(table: &[(f64, f64)], mu0: f64) -> bool {
    table.iter().all(|&(mu, g)| {
        if mu < mu0 {
            mu < g && g < mu0
        } else if mu > mu0 {
            mu0 < g && g < mu
        } else {
            true
        }
    })
}

/// Records plus the fitted rates of a mesh-refinement study.
#[derive(Clone, Debug)]
pub struct HStudy {
    pub records: Vec<ConvergenceRecord>,
    pub fit_deriv: RateFit,
    pub fit_mu: RateFit,
}

/// Default interior-node counts `2^k - 1` for `k = 4..=10`, i.e. mesh widths
/// `2^-4 ..= 2^-10`.
pub fn default_study_sizes() -> Vec<usize> {
    (4..=10).map(|k| (1usize << k) - 1).collect()
}

/// Mesh-refinement study for the convergent scenario: the exact solution is
/// `x(1-x)/2` at the exact fixed point `mu0 = 1`. The derivative error is
/// sampled at element end points, which is the variant exhibiting the plain
/// first-order behaviour; the fixed-point error superconverges.
pub fn run_h_study(
    case: Scenario,
    sizes: &[usize],
    x0: Option<f64>,
    ctl: &IterationControl,
) -> Result<HStudy> {
    if case != Scenario::Convergent {
        return Err(Error::StructureMismatch(
            "refinement study needs the convergent scenario (exact solution known)",
        ));
    }
    let mu0 = 1.0;
    let exact_derivative = |x: f64| 0.5 - x;
    let mut records = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let problem = scenario_problem(case, n)?;
        let start = x0.unwrap_or_else(|| case.nu1());
        let out = problem.solve_nonlinear(start, Scheme::Plain, ctl)?;
        let mu_h = out.trace.final_mu().ok_or(Error::NotConverged {
            status: out.trace.status().name(),
        })?;
        let u_h = out.solution.expect("converged solve returns the solution");
        records.push(ConvergenceRecord {
            h: problem.mesh().h(),
            max_deriv_error: max_derivative_error(
                exact_derivative,
                &u_h,
                DerivativeSampling::Endpoints,
            ),
            mu_error: (mu0 - mu_h).abs(),
            iterations: out.trace.steps(),
        });
    }
    let fit_deriv = fit_rate(
        &records
            .iter()
            .map(|r| (r.h, r.max_deriv_error))
            .collect::<Vec<_>>(),
    )?;
    let fit_mu = fit_rate(
        &records
            .iter()
            .map(|r| (r.h, r.mu_error))
            .collect::<Vec<_>>(),
    )?;
    Ok(HStudy {
        records,
        fit_deriv,
        fit_mu,
    })
}

/// Approximation property `eta = inf_w ||u_exact - w|| / ||F||_*` measured
/// against a closed-form reference: in 1D the energy-norm best approximation
/// in `S_h` is the nodal interpolant, and the dual norm is replaced by its
/// discrete surrogate.
pub fn measure_approximation_property(
    problem: &NonlocalProblem,
    exact: impl Fn(f64) -> f64,
    exact_derivative: impl Fn(f64) -> f64,
) -> Result<f64> {
    let interpolant = FeFunction::interpolate(problem.mesh(), &exact);
    let err = interpolation_energy_error(&interpolant, &exact_derivative, problem.quadrature());
    Ok(err / problem.dual_norm_surrogate()?)
}

/// Variant taking the reference as a finite-element function on a nested
/// finer mesh (or the same mesh, where the error is zero).
pub fn measure_approximation_property_fe(
    problem: &NonlocalProblem,
    reference: &FeFunction,
) -> Result<f64> {
    let coarse = problem.mesh();
    let fine = reference.mesh();
    let ratio = fine.num_elements() / coarse.num_elements();
    if ratio * coarse.num_elements() != fine.num_elements() {
        return Err(Error::StructureMismatch(
            "reference mesh does not refine the problem mesh",
        ));
    }
    // best approximation = interpolant on the coarse nodes; both functions
    // are piecewise linear on the fine mesh, so the energy error is an exact
    // sum over fine elements
    let interpolant = FeFunction::interpolate(coarse, |x| {
        reference.eval(x).expect("coarse node inside [0,1]")
    });
    let hf = fine.h();
    let mut err_sq = 0.0;
    for k in 0..fine.num_elements() {
        let d = reference.slope(k) - interpolant.slope(k / ratio);
        err_sq += hf * d * d;
    }
    Ok(err_sq.sqrt() / problem.dual_norm_surrogate()?)
}

fn interpolation_energy_error(
    interpolant: &FeFunction,
    exact_derivative: impl Fn(f64) -> f64,
    quad: &QuadratureRule,
) -> f64 {
    let mesh = interpolant.mesh();
    let mut err_sq = 0.0;
    for k in 0..mesh.num_elements() {
        let s = interpolant.slope(k);
        err_sq += quad.integrate(mesh.node(k), mesh.node(k + 1), |x| {
            let d = exact_derivative(x) - s;
            d * d
        });
    }
    err_sq.sqrt()
}

/// Constant right-hand side of the dual problem driving the superconvergence
/// of the fixed-point error, for the energy functional `12 int |u'|^2` with
/// `f = 1`: linearizing `l` at `u_mu` gives the constant `24 / a(mu)`.
pub fn dual_data(case: Scenario, mu: f64) -> Result<f64> {
    let coeff = coefficient_from_g(&scenario_g(case), 1.0, 2.0)?;
    Ok(dual_data_for(coeff.a_scalar(mu)?))
}

/// `24 / a` for a given coefficient value.
pub fn dual_data_for(a_mu: f64) -> f64 {
    24.0 / a_mu
}

/// Largest difference quotient of `g` over a uniform grid with `samples`
/// cells; a secant-based lower estimate of the Lipschitz constant.
pub fn lipschitz_estimate(g: impl Fn(f64) -> f64, lo: f64, hi: f64, samples: usize) -> f64 {
    assert!(samples >= 1 && hi > lo);
    let dx = (hi - lo) / samples as f64;
    let mut worst = 0.0f64;
    let mut prev = g(lo);
    for k in 1..=samples {
        let next = g(lo + k as f64 * dx);
        worst = worst.max((next - prev).abs() / dx);
        prev = next;
    }
    worst
}
