//! Integrator order check against the closed-form propagators.
//!
//! Halving dt should divide the final-state error by about 16.

use qsl_thermo::models::{AmplitudeDamping, Dephasing, EternalNonMarkovian};
use qsl_thermo::qlinalg::{table1_state, trace_distance};
use qsl_thermo::{integrate, DensityMatrix, Generator};

fn table(name: &str, g: &Generator, exact: impl Fn(&DensityMatrix, f64) -> DensityMatrix) {
    let rho0 = table1_state(5).unwrap();
    println!("{name}:");
    println!("{:>8} {:>14} {:>8}", "dt", "error(tau=1)", "ratio");
    let mut prev: Option<f64> = None;
    for &dt in &[0.08, 0.04, 0.02, 0.01, 0.005] {
        let traj = integrate(g, &rho0, 1.0, dt).unwrap();
        let err = trace_distance(&exact(&rho0, 1.0), traj.last());
        match prev {
            Some(p) => println!("{:>8} {:>14.3e} {:>8.2}", dt, err, p / err),
            None => println!("{:>8} {:>14.3e} {:>8}", dt, err, "-"),
        }
        prev = Some(err);
    }
    println!();
}

fn main() {
    let ad = AmplitudeDamping::new(2.0, 1.0).unwrap();
    table("amplitude damping, gamma0 = 2", &ad.generator(), |r, t| {
        ad.analytic_state(r, t)
    });

    let deph = Dephasing::new(3.0, 1.0).unwrap();
    table("pure dephasing, k = 3", &deph.generator(), |r, t| {
        deph.analytic_state(r, t)
    });

    let et = EternalNonMarkovian::new();
    table("eternal model", &et.generator(), |r, t| {
        et.analytic_state(r, t)
    });
}
