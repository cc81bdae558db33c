//! Quantum speed limits for open qubit dynamics, from thermodynamic data.
//!
//! This crate evolves a single qubit under a time-local master equation
//!
//! ```text
//! dρ/dt = -i[H(t), ρ] + Σ_i γ_i(t) ( A_i ρ A_i† - ½{A_i† A_i, ρ} )
//! ```
//!
//! where the rates γ_i(t) may be negative (non-Markovian dynamics), and
//! computes two lower bounds on the time needed to move between ρ(0) and
//! ρ(τ):
//!
//! * a geometric bound `τ_q1 = ‖ρ(τ)-ρ(0)‖_tr / ⟨‖dρ/dt‖_tr⟩`, and
//! * a thermodynamic bound `τ_q2` whose cost functional combines the energy
//!   fluctuation, the fluctuation of an effective non-adiabatic Hamiltonian,
//!   the Markovian entropy production rate, and the dynamical activity.
//!
//! The chain `τ ≥ τ_q1 ≥ τ_q2` holds along every valid trajectory.
//!
//! Three exactly solvable models are built in (amplitude damping with a
//! Lorentzian bath, pure dephasing with an Ohmic-family bath at zero
//! temperature, and the "eternally non-Markovian" Pauli-channel mixture),
//! each with closed-form solutions used to cross-check the integrator.
//!
//! Start with the runnable examples:
//!
//! ```bash
//! cargo run --example table1             # the six benchmark states
//! cargo run --example amplitude_damping  # bounds for the damped qubit
//! cargo run --example pure_dephasing     # rate sign structure vs bath exponent
//! cargo run --example eternal            # a model whose geometric bound saturates
//! cargo run --example entropy_ledger     # entropy-rate bookkeeping along a run
//! cargo run --example rk4_convergence    # integrator order check
//! cargo run --example custom_generator   # bring your own H(t) and channels
//! ```
//!
//! or with the small CLI (`run`, `sweep`, `table1` subcommands):
//!
//! ```bash
//! cargo run -- sweep --model ad --state 1 --sweep gamma0:0.1:3:30 --format csv
//! ```

// 2x2 index loops here access swapped pairs (m[a][b] together with m[b][a]);
// enumerate() would hide that symmetry.
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod generator;
pub mod models;
pub mod pauli;
pub mod qlinalg;
pub mod qsl;
pub mod thermo;

mod quad;

pub use error::{Error, Result};
pub use generator::{integrate, Generator, Trajectory};
pub use qlinalg::{BlochVector, DensityMatrix, LogBase, Matrix2, Spectrum, C64};
pub use qsl::{analyze, QslReport, RunAnalysis};

/// Tolerances and floors used across the crate. Each constant is a contract:
/// loosening one changes which inputs are accepted, not just how accurate the
/// answer is.
pub mod tol {
    /// Hermiticity defect allowed on input to the eigensolver.
    pub const HERMITICITY: f64 = 1e-9;
    /// Hermiticity defect allowed for a stored density matrix.
    pub const STATE_HERMITICITY: f64 = 1e-10;
    /// |Tr ρ - 1| allowed for a stored density matrix.
    pub const STATE_TRACE: f64 = 1e-10;
    /// Eigenvalue floor for a stored density matrix.
    pub const STATE_EIG_FLOOR: f64 = -1e-10;
    /// Eigenvalue floor the integrator enforces per step; below this the
    /// trajectory has genuinely left the state space (e.g. stepped past a
    /// singular point of the model).
    pub const STEP_EIG_FLOOR: f64 = -1e-6;
    /// Trace drift above which the integrator renormalizes the step.
    pub const TRACE_DRIFT: f64 = 1e-12;
    /// Tolerance on Tr[A] = 0 and Tr[A†A] = 1 for canonical noise operators.
    pub const CHANNEL_CANONICAL: f64 = 1e-9;
    /// Population gap below which a spectrum counts as degenerate.
    pub const DEGENERACY_GAP: f64 = 1e-8;
    /// Dissipator coupling below which a degenerate term is removable (taken
    /// as zero) rather than an error.
    pub const DEGENERACY_COUPLING: f64 = 1e-10;
    /// Populations below this floor make renormalized rates undefined.
    pub const POPULATION_FLOOR: f64 = 1e-12;
    /// Minimum squared overlap for eigenbranch continuity tracking.
    pub const TRACKING_OVERLAP: f64 = 0.5;
    /// Denominator magnitude treated as a pole of the amplitude-damping rate.
    pub const RATE_POLE: f64 = 1e-12;
    /// Mean trace-norm speed below which a trajectory counts as stationary.
    pub const SPEED_FLOOR: f64 = 1e-14;
    /// Absolute tolerance of the adaptive quadrature for dephasing exponents.
    pub const QUAD: f64 = 1e-10;
    /// Slack on |x| ≤ 1 when building a state from a Bloch vector.
    pub const BLOCH_BALL: f64 = 1e-10;
}
