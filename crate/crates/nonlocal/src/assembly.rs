//! Element-wise assembly of the parameterized bilinear form
//! `(a(., mu) u', v') + (lambda(., mu) u, v)` over the interior hat-function
//! basis, and the tridiagonal solve.

use crate::coefficients::CoefficientModel;
use crate::error::{Error, Result};
use crate::mesh::{FeFunction, UniformMesh1D};
use crate::quadrature::QuadratureRule;

/// Symmetric-positive-definite tridiagonal system over the interior nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalSystem {
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
    rhs: Vec<f64>,
}

impl TridiagonalSystem {
    /// `sub`/`sup` must have length `diag.len() - 1` (empty for 1x1); the
    /// diagonal must be strictly positive, which coercivity guarantees for
    /// assembled systems.
    pub fn new(sub: Vec<f64>, diag: Vec<f64>, sup: Vec<f64>, rhs: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 || sub.len() != n - 1 || sup.len() != n - 1 || rhs.len() != n {
            return Err(Error::BandLengthMismatch {
                sub: sub.len(),
                diag: n,
                sup: sup.len(),
                rhs: rhs.len(),
            });
        }
        if let Some(row) = diag.iter().position(|&d| d <= 0.0) {
            return Err(Error::NonPositiveDiagonal {
                row,
                value: diag[row],
            });
        }
        Ok(Self {
            sub,
            diag,
            sup,
            rhs,
        })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn sub(&self) -> &[f64] {
        &self.sub
    }

    pub fn sup(&self) -> &[f64] {
        &self.sup
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// Thomas elimination without pivoting; positive definiteness of the
    /// assembled form keeps the pivots away from zero. A pivot below
    /// `1e-14 * max diag` is reported as an error.
    pub fn solve(&self) -> Result<Vec<f64>> {
        let n = self.n();
        let pivot_floor = 1e-14 * self.diag.iter().cloned().fold(0.0f64, f64::max);
        let mut diag = self.diag.clone();
        let mut rhs = self.rhs.clone();
        for i in 1..n {
            let pivot = diag[i - 1];
            if pivot.abs() < pivot_floor {
                return Err(Error::NearZeroPivot {
                    row: i - 1,
                    pivot,
                });
            }
            let m = self.sub[i - 1] / pivot;
            diag[i] -= m * self.sup[i - 1];
            rhs[i] -= m * rhs[i - 1];
        }
        let last = diag[n - 1];
        if last.abs() < pivot_floor {
            return Err(Error::NearZeroPivot {
                row: n - 1,
                pivot: last,
            });
        }
        let mut x = vec![0.0; n];
        x[n - 1] = rhs[n - 1] / last;
        for i in (0..n - 1).rev() {
            x[i] = (rhs[i] - self.sup[i] * x[i + 1]) / diag[i];
        }
        Ok(x)
    }

    /// Max-norm of `A x - rhs`.
    pub fn residual_max_norm(&self, x: &[f64]) -> f64 {
        let n = self.n();
        let mut worst = 0.0f64;
        for i in 0..n {
            let mut ax = self.diag[i] * x[i];
            if i > 0 {
                ax += self.sub[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                ax += self.sup[i] * x[i + 1];
            }
            worst = worst.max((ax - self.rhs[i]).abs());
        }
        worst
    }
}

/// Load vector with entries `int f * phi_i`, one Gauss rule per element.
pub fn assemble_load(
    mesh: UniformMesh1D,
    f: impl Fn(f64) -> f64,
    quad: &QuadratureRule,
) -> Vec<f64> {
    let n = mesh.n_interior();
    let h = mesh.h();
    let mut load = vec![0.0; n];
    for k in 0..mesh.num_elements() {
        let x_left = mesh.node(k);
        for (&q, &w) in quad.points().iter().zip(quad.weights()) {
            let x = x_left + h * q;
            let fv = h * w * f(x);
            // local basis on element k: phi_k = 1 - q, phi_{k+1} = q
            if k >= 1 {
                load[k - 1] += fv * (1.0 - q);
            }
            if k < n {
                load[k] += fv * q;
            }
        }
    }
    load
}

/// Assembles the stiffness-plus-reaction system for the parameter value `mu`
/// and the load for `F(v) = int f*v`.
///
/// Coefficient samples at the quadrature points are checked against the
/// model's ellipticity bounds whenever `mu` lies in its declared validity
/// range.
pub fn assemble_system(
    mesh: UniformMesh1D,
    coeff: &CoefficientModel,
    mu: f64,
    quad: &QuadratureRule,
    f: impl Fn(f64) -> f64,
) -> Result<TridiagonalSystem> {
    let n = mesh.n_interior();
    let h = mesh.h();
    let check = coeff.bounds_enforced_at(mu);
    // ulp-scale slack: the bounds themselves come from floating-point extrema
    let a_lo = coeff.alpha() * (1.0 - 1e-10) - 1e-14;
    let a_hi = coeff.beta() * (1.0 + 1e-10) + 1e-14;
    let l_hi = coeff.beta() * (1.0 + 1e-10) + 1e-14;

    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    for k in 0..mesh.num_elements() {
        let x_left = mesh.node(k);
        let mut a_int = 0.0; // int_elem a
        let mut m00 = 0.0; // int_elem lambda * phi_k^2
        let mut m11 = 0.0; // int_elem lambda * phi_{k+1}^2
        let mut m01 = 0.0; // int_elem lambda * phi_k * phi_{k+1}
        for (&q, &w) in quad.points().iter().zip(quad.weights()) {
            let x = x_left + h * q;
            let av = coeff.a(x, mu);
            let lv = coeff.lambda(x, mu);
            if check {
                if !(a_lo..=a_hi).contains(&av) {
                    return Err(Error::CoefficientOutOfBounds {
                        name: "a",
                        x,
                        mu,
                        value: av,
                        lo: coeff.alpha(),
                        hi: coeff.beta(),
                    });
                }
                if !(-1e-14..=l_hi).contains(&lv) {
                    return Err(Error::CoefficientOutOfBounds {
                        name: "lambda",
                        x,
                        mu,
                        value: lv,
                        lo: 0.0,
                        hi: coeff.beta(),
                    });
                }
            }
            let hw = h * w;
            a_int += hw * av;
            m00 += hw * lv * (1.0 - q) * (1.0 - q);
            m11 += hw * lv * q * q;
            m01 += hw * lv * (1.0 - q) * q;
        }
        // gradients of the local basis are -+ 1/h
        let stiff = a_int / (h * h);
        if k >= 1 {
            diag[k - 1] += stiff + m00;
        }
        if k < n {
            diag[k] += stiff + m11;
        }
        if k >= 1 && k < n {
            off[k - 1] += -stiff + m01;
        }
    }
    let rhs = assemble_load(mesh, f, quad);
    TridiagonalSystem::new(off.clone(), diag, off, rhs)
}

/// Galerkin solution of the frozen-parameter problem on the given mesh.
pub fn galerkin_solve(
    mesh: UniformMesh1D,
    coeff: &CoefficientModel,
    mu: f64,
    quad: &QuadratureRule,
    f: impl Fn(f64) -> f64,
) -> Result<FeFunction> {
    let system = assemble_system(mesh, coeff, mu, quad, f)?;
    FeFunction::new(mesh, system.solve()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_coeff() -> CoefficientModel {
        CoefficientModel::constant(1.0)
    }

    #[test]
    fn constant_coefficient_stiffness_pattern() {
        let mesh = UniformMesh1D::new(3).unwrap();
        let quad = QuadratureRule::default();
        let sys = assemble_system(mesh, &unit_coeff(), 0.0, &quad, |_| 1.0).unwrap();
        for d in sys.diag() {
            assert!((d - 8.0).abs() < 1e-12);
        }
        for o in sys.sub() {
            assert!((o + 4.0).abs() < 1e-12);
        }
        assert_eq!(sys.sub(), sys.sup());
    }

    #[test]
    fn constant_scaling_linearity() {
        let mesh = UniformMesh1D::new(5).unwrap();
        let quad = QuadratureRule::default();
        let one = assemble_system(mesh, &unit_coeff(), 0.0, &quad, |_| 1.0).unwrap();
        let c = 3.25;
        let scaled = assemble_system(mesh, &CoefficientModel::constant(c), 0.0, &quad, |_| 1.0).unwrap();
        for i in 0..one.n() {
            assert!((scaled.diag()[i] - c * one.diag()[i]).abs() < 1e-12);
        }
        for i in 0..one.n() - 1 {
            assert!((scaled.sub()[i] - c * one.sub()[i]).abs() < 1e-12);
        }
    }

    // single hat function on n=1: int (1+x) * (phi_1')^2 = 4 * int_0^1 (1+x) = 6
    #[test]
    fn variable_coefficient_single_element_pair() {
        let mesh = UniformMesh1D::new(1).unwrap();
        let quad = QuadratureRule::gauss(2).unwrap();
        let coeff = CoefficientModel::new(|x, _| 1.0 + x, |_, _| 0.0, 1.0, 2.0);
        let sys = assemble_system(mesh, &coeff, 0.0, &quad, |_| 1.0).unwrap();
        assert!((sys.diag()[0] - 6.0).abs() < 1e-13);
    }

    #[test]
    fn load_for_unit_f_is_h() {
        let mesh = UniformMesh1D::new(3).unwrap();
        let quad = QuadratureRule::default();
        let load = assemble_load(mesh, |_| 1.0, &quad);
        for v in load {
            assert!((v - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn load_for_zero_f_is_zero() {
        let mesh = UniformMesh1D::new(4).unwrap();
        let quad = QuadratureRule::default();
        assert!(assemble_load(mesh, |_| 0.0, &quad).iter().all(|&v| v == 0.0));
    }

    // int_0^1 x * phi_1 with the mid hat on n=1 equals 1/4
    #[test]
    fn load_for_linear_f() {
        let mesh = UniformMesh1D::new(1).unwrap();
        let quad = QuadratureRule::default();
        let load = assemble_load(mesh, |x| x, &quad);
        assert!((load[0] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn one_by_one_solve() {
        let sys = TridiagonalSystem::new(vec![], vec![2.0], vec![], vec![2.0]).unwrap();
        assert_eq!(sys.solve().unwrap(), vec![1.0]);
    }

    // 1D P1 Galerkin is nodally exact for -psi'' = 1: psi(x) = x(1-x)/2
    #[test]
    fn poisson_nodal_exactness() {
        let quad = QuadratureRule::default();
        for n in [1, 3, 10, 255] {
            let mesh = UniformMesh1D::new(n).unwrap();
            let u = galerkin_solve(mesh, &unit_coeff(), 0.0, &quad, |_| 1.0).unwrap();
            for i in 1..=n {
                let x = mesh.node(i);
                assert!(
                    (u.values()[i - 1] - x * (1.0 - x) / 2.0).abs() < 1e-12,
                    "n = {n}, node {i}"
                );
            }
        }
    }

    #[test]
    fn symmetric_data_gives_symmetric_solution() {
        let quad = QuadratureRule::default();
        let mesh = UniformMesh1D::new(9).unwrap();
        let u = galerkin_solve(mesh, &unit_coeff(), 0.0, &quad, |_| 1.0).unwrap();
        let v = u.values();
        for i in 0..v.len() {
            assert!((v[i] - v[v.len() - 1 - i]).abs() < 1e-13);
        }
    }

    #[test]
    fn solve_residual_small() {
        let quad = QuadratureRule::default();
        let mesh = UniformMesh1D::new(127).unwrap();
        let coeff = CoefficientModel::new(|x, _| 1.0 + 0.5 * (3.0 * x).sin(), |_, _| 0.1, 0.5, 2.0);
        let sys = assemble_system(mesh, &coeff, 0.0, &quad, |x| (2.0 * x).cos()).unwrap();
        let x = sys.solve().unwrap();
        let scale = sys.rhs().iter().cloned().fold(0.0f64, |m, v| m.max(v.abs())) + 1.0;
        assert!(sys.residual_max_norm(&x) <= 1e-12 * scale);
    }

    #[test]
    fn bound_violation_detected() {
        let mesh = UniformMesh1D::new(3).unwrap();
        let quad = QuadratureRule::default();
        // claims a in [1, 1] but evaluates to 2
        let coeff = CoefficientModel::new(|_, _| 2.0, |_, _| 0.0, 1.0, 1.0);
        assert!(matches!(
            assemble_system(mesh, &coeff, 0.0, &quad, |_| 1.0),
            Err(Error::CoefficientOutOfBounds { name: "a", .. })
        ));
        let coeff = CoefficientModel::new(|_, _| 1.0, |_, _| -0.5, 1.0, 1.0);
        assert!(matches!(
            assemble_system(mesh, &coeff, 0.0, &quad, |_| 1.0),
            Err(Error::CoefficientOutOfBounds { name: "lambda", .. })
        ));
    }

    #[test]
    fn nonpositive_diagonal_rejected() {
        assert!(matches!(
            TridiagonalSystem::new(vec![], vec![0.0], vec![], vec![1.0]),
            Err(Error::NonPositiveDiagonal { .. })
        ));
    }

    #[test]
    fn band_lengths_checked() {
        assert!(matches!(
            TridiagonalSystem::new(vec![1.0], vec![2.0], vec![], vec![1.0]),
            Err(Error::BandLengthMismatch { .. })
        ));
    }

    // Galerkin orthogonality for the quadratic exact solution:
    // |psi_h'|^2 = |psi'|^2 - |(psi - psi_h)'|^2 with the last term h^2/12
    #[test]
    fn galerkin_orthogonality_identity() {
        let quad = QuadratureRule::default();
        for n in [7, 31, 127] {
            let mesh = UniformMesh1D::new(n).unwrap();
            let h = mesh.h();
            let u = galerkin_solve(mesh, &unit_coeff(), 0.0, &quad, |_| 1.0).unwrap();
            let exact_energy = 1.0 / 12.0;
            let gap = h * h / 12.0;
            let got = u.energy_norm_sq();
            assert!(
                ((exact_energy - gap) - got).abs() <= 1e-10 * got,
                "n = {n}: {got}"
            );
        }
    }

    // order-2 Gauss integrates cubic a against the constant gradients exactly
    #[test]
    fn quadrature_exactness_for_cubic_coefficient() {
        let mesh = UniformMesh1D::new(1).unwrap();
        let quad = QuadratureRule::gauss(2).unwrap();
        let coeff = CoefficientModel::new(|x, _| 1.0 + x * x * x, |_, _| 0.0, 1.0, 2.0);
        let sys = assemble_system(mesh, &coeff, 0.0, &quad, |_| 1.0).unwrap();
        // 4 * int_0^1 (1 + x^3) = 4 * (1 + 1/4) = 5
        assert!((sys.diag()[0] - 5.0).abs() < 1e-13);

        // and linear lambda against phi_i*phi_j: cross-check with order 5
        let coeff = CoefficientModel::new(|_, _| 1.0, |x, _| x, 1.0, 1.0);
        let fine = QuadratureRule::gauss(5).unwrap();
        let mesh = UniformMesh1D::new(3).unwrap();
        let s2 = assemble_system(mesh, &coeff, 0.0, &quad, |_| 1.0).unwrap();
        let s5 = assemble_system(mesh, &coeff, 0.0, &fine, |_| 1.0).unwrap();
        for i in 0..s2.n() {
            assert!((s2.diag()[i] - s5.diag()[i]).abs() < 1e-13);
        }
        for i in 0..s2.n() - 1 {
            assert!((s2.sub()[i] - s5.sub()[i]).abs() < 1e-13);
        }
    }

    // refining n -> 2n+1 keeps shared nodes at the same values for a=1, f=1
    #[test]
    fn mesh_refinement_nesting() {
        let quad = QuadratureRule::default();
        let coarse_n = 7;
        let mesh_c = UniformMesh1D::new(coarse_n).unwrap();
        let mesh_f = UniformMesh1D::new(2 * coarse_n + 1).unwrap();
        let uc = galerkin_solve(mesh_c, &unit_coeff(), 0.0, &quad, |_| 1.0).unwrap();
        let uf = galerkin_solve(mesh_f, &unit_coeff(), 0.0, &quad, |_| 1.0).unwrap();
        for i in 1..=coarse_n {
            let shared = uf.values()[2 * i - 1];
            assert!((uc.values()[i - 1] - shared).abs() < 1e-12);
        }
    }
}
