//! The nonlocal functionals `l : S_h -> R`: total mass, p-th power of the
//! modulus, weighted Dirichlet energy, and their subdomain variants.
//!
//! Mass and energy integrals of piecewise-linear functions are evaluated
//! exactly from nodal values and element slopes; only the p-power kind needs
//! quadrature. Every shipped kind is positively homogeneous and vanishes at
//! zero.

use crate::error::{Error, Result};
use crate::mesh::FeFunction;
use crate::quadrature::QuadratureRule;

/// A functional kind together with its homogeneity degree.
#[derive(Clone, Debug, PartialEq)]
pub enum Functional {
    /// `int_0^1 u`
    Integral,
    /// `int_0^1 |u|^p`, `p >= 1`
    PPowerIntegral { p: f64 },
    /// `scale * int_0^1 |u'|^2`
    GradientSq { scale: f64 },
    /// `int_a^b u`
    SubdomainIntegral { a: f64, b: f64 },
    /// `int_a^b |u'|^2`
    SubdomainGradientSq { a: f64, b: f64 },
}

impl Functional {
    /// The scaled Dirichlet energy `12 * int |u'|^2` used throughout the
    /// experiments.
    pub fn experiment_energy() -> Self {
        Functional::GradientSq { scale: 12.0 }
    }

    /// Degree `p` with `l(c*u) = c^p l(u)` for `c >= 0`.
    pub fn homogeneity(&self) -> Option<f64> {
        match self {
            Functional::Integral | Functional::SubdomainIntegral { .. } => Some(1.0),
            Functional::PPowerIntegral { p } => Some(*p),
            Functional::GradientSq { .. } | Functional::SubdomainGradientSq { .. } => Some(2.0),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Functional::PPowerIntegral { p } if p < 1.0 => Err(Error::InvalidExponent { p }),
            Functional::SubdomainIntegral { a, b } | Functional::SubdomainGradientSq { a, b }
                if !(a < b && (0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b)) =>
            {
                Err(Error::InvalidSubdomain { a, b })
            }
            _ => Ok(()),
        }
    }

    /// Evaluates the functional on a finite-element function.
    pub fn eval(&self, u: &FeFunction, quad: &QuadratureRule) -> Result<f64> {
        self.validate()?;
        let mesh = u.mesh();
        let h = mesh.h();
        Ok(match *self {
            // hat-function masses: int u = h * sum of interior values
            Functional::Integral => h * u.values().iter().sum::<f64>(),
            Functional::PPowerIntegral { p } => (0..mesh.num_elements())
                .map(|k| {
                    let lo = mesh.node(k);
                    let hi = mesh.node(k + 1);
                    quad.integrate(lo, hi, |x| {
                        u.eval(x).expect("x inside element").abs().powf(p)
                    })
                })
                .sum(),
            Functional::GradientSq { scale } => scale * u.energy_norm_sq(),
            Functional::SubdomainIntegral { a, b } => (0..mesh.num_elements())
                .map(|k| {
                    let (lo, hi) = overlap(mesh.node(k), mesh.node(k + 1), a, b);
                    if lo >= hi {
                        return 0.0;
                    }
                    // u is linear on the element: exact trapezoid
                    let ulo = u.node_value(k) + u.slope(k) * (lo - mesh.node(k));
                    let uhi = u.node_value(k) + u.slope(k) * (hi - mesh.node(k));
                    0.5 * (ulo + uhi) * (hi - lo)
                })
                .sum(),
            Functional::SubdomainGradientSq { a, b } => (0..mesh.num_elements())
                .map(|k| {
                    let (lo, hi) = overlap(mesh.node(k), mesh.node(k + 1), a, b);
                    if lo >= hi {
                        return 0.0;
                    }
                    let s = u.slope(k);
                    s * s * (hi - lo)
                })
                .sum(),
        })
    }

    /// Largest relative homogeneity defect `|l(c*u) - c^p l(u)|` over the
    /// given scales, normalized by `max(|l(u)|, 1)`.
    pub fn check_homogeneity(
        &self,
        u: &FeFunction,
        scales: &[f64],
        quad: &QuadratureRule,
    ) -> Result<f64> {
        let p = self
            .homogeneity()
            .ok_or(Error::StructureMismatch("functional has no homogeneity degree"))?;
        let base = self.eval(u, quad)?;
        let denom = base.abs().max(1.0);
        let mut worst = 0.0f64;
        for &c in scales {
            let scaled = self.eval(&u.scaled(c), quad)?;
            worst = worst.max((scaled - c.powf(p) * base).abs() / denom);
        }
        Ok(worst)
    }
}

fn overlap(elem_lo: f64, elem_hi: f64, a: f64, b: f64) -> (f64, f64) {
    (elem_lo.max(a), elem_hi.min(b))
}

/// Parses the config-file spelling of a functional:
/// `integral`, `p_power:<p>`, `grad_sq:<scale>`, `sub_integral:<a>:<b>`,
/// `sub_grad_sq:<a>:<b>`.
impl std::str::FromStr for Functional {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut parts = s.split(':');
        let head = parts.next().unwrap_or_default();
        let args: Vec<&str> = parts.collect();
        let parse = |v: &str| -> std::result::Result<f64, String> {
            v.parse::<f64>().map_err(|_| format!("bad number '{v}' in functional '{s}'"))
        };
        let functional = match (head, args.as_slice()) {
            ("integral", []) => Functional::Integral,
            ("p_power", [p]) => Functional::PPowerIntegral { p: parse(p)? },
            ("grad_sq", [scale]) => Functional::GradientSq {
                scale: parse(scale)?,
            },
            ("sub_integral", [a, b]) => Functional::SubdomainIntegral {
                a: parse(a)?,
                b: parse(b)?,
            },
            ("sub_grad_sq", [a, b]) => Functional::SubdomainGradientSq {
                a: parse(a)?,
                b: parse(b)?,
            },
            _ => return Err(format!("unknown functional '{s}'")),
        };
        functional.validate().map_err(|e| e.to_string())?;
        Ok(functional)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::UniformMesh1D;

    fn psi(x: f64) -> f64 {
        x * (1.0 - x) / 2.0
    }

    #[test]
    fn energy_of_psi_interpolant() {
        let quad = QuadratureRule::default();
        for n in [3, 15, 255] {
            let mesh = UniformMesh1D::new(n).unwrap();
            let h = mesh.h();
            let u = FeFunction::interpolate(mesh, psi);
            let l = Functional::experiment_energy();
            let got = l.eval(&u, &quad).unwrap();
            // direct slope summation gives 12 * (1/12 - h^2/12) = 1 - h^2
            let oracle: f64 = (0..mesh.num_elements())
                .map(|k| {
                    let s = u.slope(k);
                    12.0 * h * s * s
                })
                .sum();
            assert!((got - oracle).abs() < 1e-13);
            assert!(((1.0 - h * h) - got).abs() < 1e-12 * got, "n = {n}: {got}");
        }
    }

    #[test]
    fn zero_function_maps_to_zero() {
        let quad = QuadratureRule::default();
        let mesh = UniformMesh1D::new(5).unwrap();
        let u = FeFunction::zero(mesh);
        for l in [
            Functional::Integral,
            Functional::PPowerIntegral { p: 2.5 },
            Functional::experiment_energy(),
            Functional::SubdomainIntegral { a: 0.25, b: 0.75 },
            Functional::SubdomainGradientSq { a: 0.1, b: 0.9 },
        ] {
            assert_eq!(l.eval(&u, &quad).unwrap(), 0.0);
        }
    }

    #[test]
    fn homogeneity_exact_for_quadratic_kinds() {
        let quad = QuadratureRule::default();
        let mesh = UniformMesh1D::new(9).unwrap();
        let u = FeFunction::interpolate(mesh, |x| (3.1 * x).sin());
        let dev = Functional::experiment_energy()
            .check_homogeneity(&u, &[2.0], &quad)
            .unwrap();
        assert!(dev < 1e-14);
        let dev = Functional::Integral
            .check_homogeneity(&u, &[3.0], &quad)
            .unwrap();
        assert!(dev < 1e-14);
    }

    #[test]
    fn homogeneity_of_p_power_within_quadrature_noise() {
        let quad = QuadratureRule::default();
        let mesh = UniformMesh1D::new(17).unwrap();
        let u = FeFunction::interpolate(mesh, |x| 0.3 + (7.0 * x).cos() * x);
        let l = Functional::PPowerIntegral { p: 3.0 };
        let dev = l.check_homogeneity(&u, &[0.5, 2.0, 10.0], &quad).unwrap();
        assert!(dev < 1e-12, "deviation {dev}");
    }

    #[test]
    fn subdomain_additivity_at_mesh_node() {
        let quad = QuadratureRule::default();
        let mesh = UniformMesh1D::new(7).unwrap();
        let u = FeFunction::interpolate(mesh, |x| x * x * (1.0 - x));
        let c = mesh.node(3);
        let left = Functional::SubdomainIntegral { a: 0.0, b: c }
            .eval(&u, &quad)
            .unwrap();
        let right = Functional::SubdomainIntegral { a: c, b: 1.0 }
            .eval(&u, &quad)
            .unwrap();
        let whole = Functional::Integral.eval(&u, &quad).unwrap();
        assert!((left + right - whole).abs() < 1e-14);
    }

    // endpoints off the mesh: split elements analytically, stays exact
    #[test]
    fn subdomain_split_is_exact() {
        let quad = QuadratureRule::default();
        let mesh = UniformMesh1D::new(3).unwrap();
        let u = FeFunction::new(mesh, vec![1.0, 2.0, 0.5]).unwrap();
        // oracle by very fine trapezoid on the piecewise-linear function
        let (a, b) = (0.3, 0.85);
        let steps = 200_000;
        let mut acc = 0.0;
        for i in 0..steps {
            let x0 = a + (b - a) * i as f64 / steps as f64;
            let x1 = a + (b - a) * (i + 1) as f64 / steps as f64;
            acc += 0.5 * (u.eval(x0).unwrap() + u.eval(x1).unwrap()) * (x1 - x0);
        }
        let got = Functional::SubdomainIntegral { a, b }.eval(&u, &quad).unwrap();
        assert!((got - acc).abs() < 1e-9);

        let grad_got = Functional::SubdomainGradientSq { a, b }.eval(&u, &quad).unwrap();
        // slopes: elements (0.25,0.5) slope 4, (0.5,0.75) slope -6, (0.75,1) slope -2; (0,0.25) slope 4
        let grad_oracle = 4.0f64.powi(2) * (0.5 - 0.3) + 36.0 * 0.25 + 4.0 * (0.85 - 0.75);
        assert!((grad_got - grad_oracle).abs() < 1e-13);
    }

    #[test]
    fn invalid_subdomain_rejected() {
        let quad = QuadratureRule::default();
        let mesh = UniformMesh1D::new(3).unwrap();
        let u = FeFunction::zero(mesh);
        assert!(matches!(
            Functional::SubdomainIntegral { a: 0.5, b: 0.5 }.eval(&u, &quad),
            Err(Error::InvalidSubdomain { .. })
        ));
        assert!(matches!(
            Functional::SubdomainIntegral { a: 0.2, b: 1.5 }.eval(&u, &quad),
            Err(Error::InvalidSubdomain { .. })
        ));
    }

    #[test]
    fn p_below_one_rejected() {
        let quad = QuadratureRule::default();
        let mesh = UniformMesh1D::new(3).unwrap();
        let u = FeFunction::zero(mesh);
        assert!(matches!(
            Functional::PPowerIntegral { p: 0.5 }.eval(&u, &quad),
            Err(Error::InvalidExponent { .. })
        ));
    }

    #[test]
    fn parses_config_spellings() {
        assert_eq!("integral".parse::<Functional>().unwrap(), Functional::Integral);
        assert_eq!(
            "p_power:2.5".parse::<Functional>().unwrap(),
            Functional::PPowerIntegral { p: 2.5 }
        );
        assert_eq!(
            "grad_sq:12".parse::<Functional>().unwrap(),
            Functional::GradientSq { scale: 12.0 }
        );
        assert_eq!(
            "sub_integral:0.25:0.5".parse::<Functional>().unwrap(),
            Functional::SubdomainIntegral { a: 0.25, b: 0.5 }
        );
        assert_eq!(
            "sub_grad_sq:0:1".parse::<Functional>().unwrap(),
            Functional::SubdomainGradientSq { a: 0.0, b: 1.0 }
        );
        assert!("grad_sq".parse::<Functional>().is_err());
        assert!("p_power:abc".parse::<Functional>().is_err());
        assert!("sub_integral:0.9:0.1".parse::<Functional>().is_err());
        assert!("mystery".parse::<Functional>().is_err());
    }
}
