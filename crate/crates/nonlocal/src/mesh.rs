//! Uniform 1D mesh on (0, 1) and continuous piecewise-linear functions with
//! zero boundary values.
//!
//! The mesh has nodes `x_i = i * h` for `i = 0..=n+1` with `h = 1/(n+1)`,
//! where `n` is the number of interior nodes. A finite-element function is
//! stored through its interior nodal values; the boundary values are
//! implicitly zero.

use crate::error::{Error, Result};

/// Uniform partition of (0, 1) with `n_interior` interior nodes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniformMesh1D {
    n_interior: usize,
    h: f64,
}

impl UniformMesh1D {
    /// Builds the mesh with `n_interior >= 1` interior nodes, `h = 1/(n_interior+1)`.
    pub fn new(n_interior: usize) -> Result<Self> {
        if n_interior == 0 {
            return Err(Error::EmptyMesh);
        }
        Ok(Self {
            n_interior,
            h: 1.0 / (n_interior + 1) as f64,
        })
    }

    pub fn n_interior(&self) -> usize {
        self.n_interior
    }

    /// Mesh width `h = 1/(n_interior + 1)`.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Number of elements, `n_interior + 1`.
    pub fn num_elements(&self) -> usize {
        self.n_interior + 1
    }

    /// Node `x_i` for `i = 0..=n_interior+1`. Computed as `i/(n+1)` so the
    /// end points are exactly 0 and 1.
    pub fn node(&self, i: usize) -> f64 {
        debug_assert!(i <= self.n_interior + 1);
        i as f64 / (self.n_interior + 1) as f64
    }

    /// Index of the element containing `x`, counting elements from 0;
    /// element `k` covers `[x_k, x_{k+1}]`. `x = 1` maps to the last element.
    pub fn element_of(&self, x: f64) -> Result<usize> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::OutOfDomain { x });
        }
        let k = (x * (self.n_interior + 1) as f64).floor() as usize;
        Ok(k.min(self.n_interior))
    }

    /// Midpoint of element `k`.
    pub fn element_midpoint(&self, k: usize) -> f64 {
        (k as f64 + 0.5) * self.h
    }
}

/// Continuous piecewise-linear function on a [`UniformMesh1D`] with zero
/// trace, represented by its interior nodal values.
#[derive(Clone, Debug, PartialEq)]
pub struct FeFunction {
    mesh: UniformMesh1D,
    values: Vec<f64>,
}

impl FeFunction {
    pub fn new(mesh: UniformMesh1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.n_interior() {
            return Err(Error::ValueLengthMismatch {
                expected: mesh.n_interior(),
                got: values.len(),
            });
        }
        Ok(Self { mesh, values })
    }

    pub fn zero(mesh: UniformMesh1D) -> Self {
        Self {
            values: vec![0.0; mesh.n_interior()],
            mesh,
        }
    }

    /// Nodal interpolant of `f` (boundary values are dropped).
    pub fn interpolate(mesh: UniformMesh1D, f: impl Fn(f64) -> f64) -> Self {
        let values = (1..=mesh.n_interior()).map(|i| f(mesh.node(i))).collect();
        Self { mesh, values }
    }

    pub fn mesh(&self) -> UniformMesh1D {
        self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at node `i` for `i = 0..=n+1`; exactly 0 at both boundary nodes.
    pub fn node_value(&self, i: usize) -> f64 {
        if i == 0 || i == self.mesh.n_interior() + 1 {
            0.0
        } else {
            self.values[i - 1]
        }
    }

    /// Constant slope on element `k`.
    pub fn slope(&self, k: usize) -> f64 {
        (self.node_value(k + 1) - self.node_value(k)) / self.mesh.h()
    }

    /// Point evaluation by linear interpolation; errors for `x` outside [0, 1].
    pub fn eval(&self, x: f64) -> Result<f64> {
        let k = self.mesh.element_of(x)?;
        let xk = self.mesh.node(k);
        Ok(self.node_value(k) + self.slope(k) * (x - xk))
    }

    /// Derivative at `x`: the slope of the containing element. At a node this
    /// is the slope of the element to the right (to the left at `x = 1`).
    pub fn eval_derivative(&self, x: f64) -> Result<f64> {
        let k = self.mesh.element_of(x)?;
        Ok(self.slope(k))
    }

    /// Squared energy norm, `sum_k h * slope_k^2` (exact for P1).
    pub fn energy_norm_sq(&self) -> f64 {
        let h = self.mesh.h();
        (0..self.mesh.num_elements())
            .map(|k| {
                let s = self.slope(k);
                h * s * s
            })
            .sum()
    }

    pub fn energy_norm(&self) -> f64 {
        self.energy_norm_sq().sqrt()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            mesh: self.mesh,
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }
}

/// Where the derivative mismatch is sampled in [`max_derivative_error`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DerivativeSampling {
    /// Element midpoints. For smooth targets the P1 slope superconverges
    /// there, so this variant can report a higher order than the energy error.
    #[default]
    Midpoints,
    /// Both element end points; reproduces the plain O(h) behaviour of the
    /// derivative error.
    Endpoints,
}

/// Discrete maximum norm of `u_exact' - u_h'`: the largest mismatch between
/// the exact derivative sampled per element and the element slope.
pub fn max_derivative_error(
    exact_derivative: impl Fn(f64) -> f64,
    u: &FeFunction,
    sampling: DerivativeSampling,
) -> f64 {
    let mesh = u.mesh();
    let mut worst = 0.0f64;
    for k in 0..mesh.num_elements() {
        let s = u.slope(k);
        match sampling {
            DerivativeSampling::Midpoints => {
                worst = worst.max((exact_derivative(mesh.element_midpoint(k)) - s).abs());
            }
            DerivativeSampling::Endpoints => {
                worst = worst.max((exact_derivative(mesh.node(k)) - s).abs());
                worst = worst.max((exact_derivative(mesh.node(k + 1)) - s).abs());
            }
        }
    }
    worst
}
