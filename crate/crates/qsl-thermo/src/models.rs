//! Built-in qubit models with closed-form solutions.
//!
//! Three exactly solvable time-local master equations, each exposing its
//! canonical rate functions, an analytic propagator for cross-checking the
//! integrator, and a ready-made [`Generator`]:
//!
//! * [`AmplitudeDamping`]: resonant Jaynes-Cummings qubit in a lossy cavity
//!   (Lorentzian reservoir, memory time 1/λ). The rate turns negative past
//!   the weak-coupling regime and diverges at isolated times when the decay
//!   amplitude crosses zero.
//! * [`Dephasing`]: pure dephasing against a zero-temperature bosonic bath
//!   with spectral density J(ω) = ω^k ω_c^(1-k) exp(-ω/ω_c). The rate is
//!   non-negative for ohmicity k ≤ 2 and transiently negative for k > 2.
//! * [`EternalNonMarkovian`]: unital Pauli mixture whose σz rate is
//!   -tanh(t) < 0 for every t > 0, yet the dynamics stays completely
//!   positive.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::generator::{grid_steps, Generator, Trajectory, TrajectorySource};
use crate::qlinalg::{sigma_minus, sigma_x, sigma_y, sigma_z, BlochVector, DensityMatrix, C64};
use crate::quad::adaptive_simpson;
use crate::tol;

// |d²| below this switches the damped-cavity formulas to their series form
// in d² (the resonant point d = 0 and its floating-point neighborhood).
const SERIES_EPS: f64 = 1e-12;

fn analytic_grid(
    tau: f64,
    dt: f64,
    state_at: impl Fn(f64) -> DensityMatrix,
) -> Result<Trajectory> {
    let (n, h) = grid_steps(tau, dt)?;
    let times: Vec<f64> = (0..=n).map(|k| k as f64 * h).collect();
    let states = times.iter().map(|&t| state_at(t)).collect();
    Ok(Trajectory::from_states(
        times,
        states,
        TrajectorySource::Analytic,
    ))
}

/// Damped qubit in a leaky cavity at resonance.
///
/// `gamma0` is the flat-spectrum decay rate, `lambda` the spectral width
/// (inverse memory time). With d = √(λ² - 2γ₀λ) the excited-state amplitude
/// obeys b(t) = e^(-λt/2) [cosh(dt/2) + (λ/d) sinh(dt/2)] and the canonical
/// rate is γ(t) = 2γ₀λ sinh(dt/2) / [d cosh(dt/2) + λ sinh(dt/2)], evaluated
/// through complex d when γ₀ > λ/2. Past that threshold b(t) oscillates and
/// γ(t) has poles at the zeros of the bracket; crossing one is reported as
/// [`Error::RatePole`].
#[derive(Debug, Clone, Copy)]
pub struct AmplitudeDamping {
    pub gamma0: f64,
    pub lambda: f64,
}

impl AmplitudeDamping {
    pub fn new(gamma0: f64, lambda: f64) -> Result<Self> {
        if !(gamma0.is_finite() && gamma0 >= 0.0) {
            return Err(Error::Config(format!(
                "gamma0 must be non-negative, got {gamma0}"
            )));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Config(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        Ok(AmplitudeDamping { gamma0, lambda })
    }

    fn d_squared(&self) -> f64 {
        self.lambda * (self.lambda - 2.0 * self.gamma0)
    }

    /// Canonical decay rate γ(t).
    pub fn rate(&self, t: f64) -> Result<f64> {
        if t == 0.0 {
            return Ok(0.0);
        }
        let s = self.d_squared();
        if s.abs() <= SERIES_EPS {
            // series in x = (dt/2)²; stable across the resonant point
            let x = s * t * t / 4.0;
            let sh = 1.0 + x / 6.0 + x * x / 120.0;
            let ch = 1.0 + x / 2.0 + x * x / 24.0;
            return Ok(2.0 * self.gamma0 * self.lambda * sh / ((2.0 / t) * ch + self.lambda * sh));
        }
        let d = C64::from(s).sqrt();
        let half = d * C64::from(0.5 * t);
        let denom = d * half.cosh() + C64::from(self.lambda) * half.sinh();
        if denom.norm() <= tol::RATE_POLE {
            return Err(Error::RatePole {
                t,
                denom: denom.norm(),
            });
        }
        let g = C64::from(2.0 * self.gamma0 * self.lambda) * half.sinh() / denom;
        debug_assert!(g.im.abs() < 1e-10 * g.re.abs().max(1.0));
        Ok(g.re)
    }

    /// Excited-state survival amplitude b(t); real in every regime, with
    /// sign changes in the oscillatory one.
    pub fn decay_amplitude(&self, t: f64) -> f64 {
        let s = self.d_squared();
        let bracket = if s.abs() <= SERIES_EPS {
            let x = s * t * t / 4.0;
            let sh = 1.0 + x / 6.0 + x * x / 120.0;
            let ch = 1.0 + x / 2.0 + x * x / 24.0;
            ch + self.lambda * (0.5 * t) * sh
        } else {
            let d = C64::from(s).sqrt();
            let half = d * C64::from(0.5 * t);
            let v = half.cosh() + C64::from(self.lambda) / d * half.sinh();
            debug_assert!(v.im.abs() < 1e-10 * v.re.abs().max(1.0));
            v.re
        };
        (-0.5 * self.lambda * t).exp() * bracket
    }

    /// Exact state at time t: ρ₀₀ scales by b², the coherence by b.
    pub fn analytic_state(&self, rho0: &DensityMatrix, t: f64) -> DensityMatrix {
        let b = self.decay_amplitude(t);
        DensityMatrix::from_elements(rho0.rho00() * b * b, rho0.rho01() * C64::from(b))
            .expect("damping map preserves state validity")
    }

    pub fn analytic_trajectory(
        &self,
        rho0: &DensityMatrix,
        tau: f64,
        dt: f64,
    ) -> Result<Trajectory> {
        analytic_grid(tau, dt, |t| self.analytic_state(rho0, t))
    }

    /// Single channel (γ(t), σ₋). A rate pole surfaces as NaN and is caught
    /// by the integrator's finiteness check.
    pub fn generator(&self) -> Generator {
        let m = *self;
        Generator::new()
            .with_channel(move |t| m.rate(t).unwrap_or(f64::NAN), sigma_minus())
            .expect("sigma_minus is canonical")
    }
}

/// Pure dephasing against a zero-temperature bath with ohmicity k and
/// cutoff ω_c.
///
/// γ(t) = ω_c (1+u²)^(-k/2) Γ(k) sin(k arctan u) with u = ω_c t. Populations
/// are frozen; the coherence decays by e^(-Γ(t)) with Γ(t) = 2 ∫₀ᵗ γ.
#[derive(Debug, Clone, Copy)]
pub struct Dephasing {
    pub k: f64,
    pub omega_c: f64,
    gamma_k: f64,
}

impl Dephasing {
    pub fn new(k: f64, omega_c: f64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::Config(format!(
                "ohmicity k must be positive, got {k}"
            )));
        }
        if !(omega_c.is_finite() && omega_c > 0.0) {
            return Err(Error::Config(format!(
                "cutoff omega_c must be positive, got {omega_c}"
            )));
        }
        Ok(Dephasing {
            k,
            omega_c,
            gamma_k: libm::tgamma(k),
        })
    }

    /// Dephasing rate γ(t); negative in a transient window iff k > 2.
    pub fn rate(&self, t: f64) -> f64 {
        let u = self.omega_c * t;
        self.omega_c
            * (1.0 + u * u).powf(-0.5 * self.k)
            * self.gamma_k
            * (self.k * u.atan()).sin()
    }

    /// Γ(t) = 2 ∫₀ᵗ γ(s) ds, by adaptive quadrature.
    pub fn dephasing_exponent(&self, t: f64) -> f64 {
        2.0 * adaptive_simpson(&|s| self.rate(s), 0.0, t, tol::QUAD)
    }

    pub fn analytic_state(&self, rho0: &DensityMatrix, t: f64) -> DensityMatrix {
        let f = (-self.dephasing_exponent(t)).exp();
        DensityMatrix::from_elements(rho0.rho00(), rho0.rho01() * C64::from(f))
            .expect("dephasing map preserves state validity")
    }

    pub fn analytic_trajectory(
        &self,
        rho0: &DensityMatrix,
        tau: f64,
        dt: f64,
    ) -> Result<Trajectory> {
        analytic_grid(tau, dt, |t| self.analytic_state(rho0, t))
    }

    /// Single channel (2γ(t), σ_z/√2), so that d/dt ρ₀₁ = -2γ ρ₀₁.
    pub fn generator(&self) -> Generator {
        let m = *self;
        Generator::new()
            .with_channel(
                move |t| 2.0 * m.rate(t),
                sigma_z().scale_re(FRAC_1_SQRT_2),
            )
            .expect("normalized sigma_z is canonical")
    }
}

/// Unital Pauli mixture with rates (1, 1, -tanh t): the σ_z rate is negative
/// for every t > 0 while the map stays completely positive.
///
/// Bloch solution: x,y shrink by (1+e^(-2t))/2, z by e^(-2t), so every
/// trajectory is a straight chord of the Bloch ball.
#[derive(Debug, Clone, Copy, Default)]
pub struct EternalNonMarkovian;

impl EternalNonMarkovian {
    pub fn new() -> Self {
        EternalNonMarkovian
    }

    /// Channel rates (γ_x, γ_y, γ_z) at time t.
    pub fn rates(&self, t: f64) -> [f64; 3] {
        [1.0, 1.0, -t.tanh()]
    }

    pub fn analytic_bloch(&self, b0: &BlochVector, t: f64) -> BlochVector {
        let e = (-2.0 * t).exp();
        let a = 0.5 * (1.0 + e);
        BlochVector::new(a * b0.x, a * b0.y, e * b0.z)
    }

    pub fn analytic_state(&self, rho0: &DensityMatrix, t: f64) -> DensityMatrix {
        DensityMatrix::from_bloch(&self.analytic_bloch(&rho0.bloch(), t))
            .expect("Bloch contraction stays inside the ball")
    }

    pub fn analytic_trajectory(
        &self,
        rho0: &DensityMatrix,
        tau: f64,
        dt: f64,
    ) -> Result<Trajectory> {
        analytic_grid(tau, dt, |t| self.analytic_state(rho0, t))
    }

    /// Population transition rate between the instantaneous eigenstates of a
    /// state with Bloch vector `b` at time t (symmetric in both directions):
    ///
    /// R(t) = ½ [(1 + n₃²) - (1 - n₃²) tanh t],  n = b/|b|.
    ///
    /// Follows from |⟨+n|σ_i|−n⟩|² = 1 - n_i². Undefined at the maximally
    /// mixed point, where the eigenbasis is arbitrary.
    pub fn transition_rate(&self, b: &BlochVector, t: f64) -> Result<f64> {
        let n = b.norm();
        if n < 1e-12 {
            return Err(Error::ZeroBlochVector);
        }
        let n3sq = (b.z / n).powi(2);
        Ok(0.5 * ((1.0 + n3sq) - (1.0 - n3sq) * t.tanh()))
    }

    /// Channels (1, σ_x/√2), (1, σ_y/√2), (-tanh t, σ_z/√2).
    pub fn generator(&self) -> Generator {
        Generator::new()
            .with_channel(|_| 1.0, sigma_x().scale_re(FRAC_1_SQRT_2))
            .unwrap()
            .with_channel(|_| 1.0, sigma_y().scale_re(FRAC_1_SQRT_2))
            .unwrap()
            .with_channel(|t: f64| -t.tanh(), sigma_z().scale_re(FRAC_1_SQRT_2))
            .unwrap()
    }
}
