use nonlocal::*;
use std::time::Instant;

fn main() {
    for n in [15usize, 255, 8191] {
        let t0 = Instant::now();
        let mesh = UniformMesh1D::new(n).unwrap();
        let quad = QuadratureRule::default();
        let u = galerkin_solve(mesh, &CoefficientModel::constant(1.0), 0.0, &quad, |_| 1.0).unwrap();
        let mut worst = 0.0f64;
        for i in 1..=n {
            let x = mesh.node(i);
            worst = worst.max((u.values()[i-1] - x*(1.0-x)/2.0).abs());
        }
        let l = Functional::experiment_energy().eval(&u, &quad).unwrap();
        let h = mesh.h();
        println!("n={n}: max nodal err = {worst:e}, l(psi_h) rel err = {:e}, time = {:?}",
            ((l - (1.0-h*h))/(1.0-h*h)).abs(), t0.elapsed());
    }
    // noise floor of the full map at n=1023
    let p = scenario_problem(Scenario::Convergent, 1023).unwrap();
    let out = p.solve_nonlinear(0.45, Scheme::Plain, &IterationControl::default()).unwrap();
    println!("full map n=1023: status {:?} steps {}", out.trace.status(), out.trace.steps());
    let out = p.solve_simplified(0.45, Scheme::Plain, &IterationControl::default()).unwrap();
    println!("simplified n=1023: status {:?} steps {} mu {:?}", out.trace.status(), out.trace.steps(), out.trace.final_mu());
    let p = scenario_problem(Scenario::Convergent, 8191).unwrap();
    let out = p.solve_simplified(0.45, Scheme::Plain, &IterationControl::default()).unwrap();
    println!("simplified n=8191: status {:?} steps {} mu {:?}", out.trace.status(), out.trace.steps(), out.trace.final_mu());
    if let Some(mu) = out.trace.final_mu() {
        let h = 2f64.powi(-13);
        println!("  |mu-1|/h^2 = {}", (1.0 - mu).abs()/(h*h));
    }
    let r = out.trace.residuals();
    for k in (r.len().saturating_sub(11))..r.len() {
        if k >= 1 { println!("  ratio at {k}: {}", r[k]/r[k-1]); }
    }
}
