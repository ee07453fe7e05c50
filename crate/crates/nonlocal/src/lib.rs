//! Nonlocal, nonlinear elliptic diffusion problems in 1D, solved through
//! their scalar fixed-point reduction.
//!
//! The diffusion and reaction coefficients depend on the solution only
//! through a scalar functional `l(u)` (total mass, Dirichlet energy, ...).
//! Freezing that scalar at `mu` leaves a linear problem `u_{S,mu}`; solutions
//! of the nonlinear problem correspond one-to-one to fixed points of
//! `G_S(mu) = l(u_{S,mu})`. This crate provides:
//!
//! - a P1 finite-element kernel on uniform meshes of (0, 1): assembly with
//!   variable coefficients, Gauss quadrature, tridiagonal solve, error norms;
//! - the functional catalogue with homogeneity metadata;
//! - coefficient models, including the piecewise-quadratic scenario maps
//!   with prescribed convergent / oscillating / blowing-up iteration
//!   behaviour and the oscillatory perturbation family;
//! - plain and damped scalar fixed-point iterations with classification of
//!   the outcome, the full and the simplified (one Poisson solve) paths;
//! - experiment drivers: iteration traces, `G_h` sweeps, mesh-refinement
//!   studies with fitted convergence rates, smallness diagnostics.

pub mod assembly;
pub mod coefficients;
pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod functionals;
pub mod mesh;
pub mod quadrature;
pub mod solver;

pub use assembly::{assemble_load, assemble_system, galerkin_solve, TridiagonalSystem};
pub use coefficients::{
    coefficient_from_g, coefficient_from_g_on, perturbed_coefficient, scenario_g,
    CoefficientModel, PiecewiseQuadraticG, Quadratic, Scenario,
};
pub use diagnostics::DiagnosticConstants;
pub use error::{Error, Result};
pub use experiments::{
    default_study_sizes, dual_data, dual_data_for, fit_rate, lipschitz_estimate,
    measure_approximation_property, measure_approximation_property_fe, run_h_study,
    run_iteration_scenario, scenario_problem, scenario_problem_with, sweep_g, uniform_grid,
    verify_sign_condition, ConvergenceRecord, HStudy, RateFit, ScenarioRun,
};
pub use functionals::Functional;
pub use mesh::{max_derivative_error, DerivativeSampling, FeFunction, UniformMesh1D};
pub use quadrature::QuadratureRule;
pub use solver::{
    check_mfi_preconditions, damped_iterate, fixed_point_iterate, FixedPointTrace,
    IterationControl, IterationStatus, MfiCase, NonlinearSolution, NonlocalProblem, Scheme,
};
