//! The eternally non-Markovian model: one channel rate is negative for all
//! t > 0, yet the dynamics stays P-divisible and the Bloch path is straight,
//! so the geometric bound saturates at every horizon.

use qsl_thermo::models::EternalNonMarkovian;
use qsl_thermo::qlinalg::table1_state;
use qsl_thermo::{analyze, integrate, LogBase};

fn main() {
    let m = EternalNonMarkovian::new();

    println!("channel rates (x, y, z): [1, 1, -tanh t]");
    println!();

    let rho0 = table1_state(2).unwrap();
    println!("Bloch path from state 2 (straight chord toward the center-line):");
    println!("{:>5} {:>10} {:>10} {:>10}", "t", "x", "y", "z");
    for &t in &[0.0, 0.5, 1.0, 2.0, 4.0] {
        let b = m.analytic_state(&rho0, t).bloch();
        println!("{:>5.1} {:>10.6} {:>10.6} {:>10.6}", t, b.x, b.y, b.z);
    }

    // the effective population-transition rate stays positive even though
    // one canonical rate is eternally negative
    let b1 = m.analytic_state(&rho0, 1.0).bloch();
    println!();
    println!(
        "transition rate at t = 1: {:.6} (nonnegative despite the negative channel)",
        m.transition_rate(&b1, 1.0).unwrap()
    );

    println!();
    println!("geometric bound saturates at every horizon:");
    println!("{:>5} {:>12} {:>12} {:>10}", "tau", "tau_q1", "tau_q2", "q1/tau");
    let g = m.generator();
    for &tau in &[0.25, 0.5, 1.0, 2.0, 3.0] {
        let traj = integrate(&g, &rho0, tau, 1e-3).unwrap();
        let r = analyze(&traj, &g, LogBase::Two).unwrap().report;
        println!(
            "{:>5.2} {:>12.8} {:>12.8} {:>10.6}",
            tau,
            r.tau_q1,
            r.tau_q2,
            r.tau_q1 / tau
        );
    }
}
