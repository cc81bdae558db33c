//! Time-local generators and their integration.
//!
//! A [`Generator`] is the right-hand side of
//!
//! ```text
//! dρ/dt = L_t[ρ] = -i[H(t), ρ] + Σ_i γ_i(t) ( A_i ρ A_i† - ½{A_i† A_i, ρ} )
//! ```
//!
//! in canonical form: every noise operator satisfies Tr[A_i] = 0 and
//! Tr[A_i† A_i] = 1, and all time dependence (including non-Markovian sign
//! changes) lives in the real rates γ_i(t). The canonical normalization is
//! enforced at construction because the transition-rate and entropy ledgers
//! downstream are only meaningful in this gauge.
//!
//! [`integrate`] advances a state with a fixed-step classic Runge-Kutta
//! scheme. Each step is followed by Hermitization and, if the trace drifted
//! beyond `tol::TRACE_DRIFT`, renormalization; positivity is re-validated
//! with a floor of `tol::STEP_EIG_FLOOR` so that stepping over a genuine
//! singularity of a model surfaces as [`Error::PositivityLoss`] instead of
//! garbage.

use crate::error::{Error, Result};
use crate::qlinalg::{DensityMatrix, Matrix2, Spectrum, C64, I_C};
use crate::tol;

type RateFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;
type MatrixFn = Box<dyn Fn(f64) -> Matrix2 + Send + Sync>;

enum OperatorKind {
    Constant(Matrix2),
    TimeDependent(MatrixFn),
}

/// One decay channel: a real rate function (may go negative) and a canonical
/// noise operator.
pub struct Channel {
    rate: RateFn,
    operator: OperatorKind,
}

fn check_canonical(op: &Matrix2) -> Result<()> {
    let tr = op.trace().norm();
    if tr > tol::CHANNEL_CANONICAL {
        return Err(Error::NonCanonicalChannel(format!("Tr[A] = {tr:.3e} ≠ 0")));
    }
    let hs = (op.adjoint() * *op).trace().re;
    if (hs - 1.0).abs() > tol::CHANNEL_CANONICAL {
        return Err(Error::NonCanonicalChannel(format!(
            "Tr[A†A] = {hs} ≠ 1"
        )));
    }
    Ok(())
}

/// The time-local generator L_t.
pub struct Generator {
    hamiltonian: Option<MatrixFn>,
    channels: Vec<Channel>,
}

impl Default for Generator {
    fn default() -> Self {
        Self::new()
    }
}

impl Generator {
    pub fn new() -> Self {
        Generator {
            hamiltonian: None,
            channels: Vec::new(),
        }
    }

    pub fn with_hamiltonian(
        mut self,
        h: impl Fn(f64) -> Matrix2 + Send + Sync + 'static,
    ) -> Self {
        self.hamiltonian = Some(Box::new(h));
        self
    }

    /// Add a channel with a constant noise operator. The operator must be
    /// canonical (traceless, unit Hilbert-Schmidt norm).
    pub fn with_channel(
        mut self,
        rate: impl Fn(f64) -> f64 + Send + Sync + 'static,
        operator: Matrix2,
    ) -> Result<Self> {
        check_canonical(&operator)?;
        self.channels.push(Channel {
            rate: Box::new(rate),
            operator: OperatorKind::Constant(operator),
        });
        Ok(self)
    }

    /// Add a channel whose operator itself depends on time. Canonicality is
    /// checked at t = 0 (the only sample available at construction).
    pub fn with_channel_fn(
        mut self,
        rate: impl Fn(f64) -> f64 + Send + Sync + 'static,
        operator: impl Fn(f64) -> Matrix2 + Send + Sync + 'static,
    ) -> Result<Self> {
        check_canonical(&operator(0.0))?;
        self.channels.push(Channel {
            rate: Box::new(rate),
            operator: OperatorKind::TimeDependent(Box::new(operator)),
        });
        Ok(self)
    }

    pub fn hamiltonian_at(&self, t: f64) -> Matrix2 {
        match &self.hamiltonian {
            Some(h) => h(t),
            None => Matrix2::zero(),
        }
    }

    pub fn has_hamiltonian(&self) -> bool {
        self.hamiltonian.is_some()
    }

    /// Rates and operators of every channel at time t.
    pub fn channels_at(&self, t: f64) -> Vec<(f64, Matrix2)> {
        self.channels
            .iter()
            .map(|ch| {
                let op = match &ch.operator {
                    OperatorKind::Constant(m) => *m,
                    OperatorKind::TimeDependent(f) => f(t),
                };
                ((ch.rate)(t), op)
            })
            .collect()
    }

    /// Dissipative part D_t[ρ] (no Hamiltonian term).
    pub fn dissipator(&self, t: f64, rho: &Matrix2) -> Matrix2 {
        let mut d = Matrix2::zero();
        for (gamma, a) in self.channels_at(t) {
            let adag = a.adjoint();
            let sandwich = a * *rho * adag;
            let anticomm = (adag * a).anticommutator(rho);
            d = d + (sandwich - anticomm.scale_re(0.5)).scale_re(gamma);
        }
        d
    }

    /// Full right-hand side L_t[ρ] = -i[H, ρ] + D_t[ρ].
    pub fn apply(&self, t: f64, rho: &Matrix2) -> Matrix2 {
        let mut l = self.dissipator(t, rho);
        if let Some(h) = &self.hamiltonian {
            l = l + h(t).commutator(rho).scale(-I_C);
        }
        l
    }
}

/// How a trajectory was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectorySource {
    Integrated,
    Analytic,
}

/// A state history on a uniform grid t_k = k·h covering [0, τ].
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<DensityMatrix>,
    source: TrajectorySource,
}

impl Trajectory {
    pub fn from_states(
        times: Vec<f64>,
        states: Vec<DensityMatrix>,
        source: TrajectorySource,
    ) -> Self {
        assert_eq!(times.len(), states.len());
        assert!(times.len() >= 2);
        Trajectory {
            times,
            states,
            source,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn source(&self) -> TrajectorySource {
        self.source
    }

    pub fn tau(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// Grid step.
    pub fn step(&self) -> f64 {
        self.times[1] - self.times[0]
    }

    pub fn initial(&self) -> &DensityMatrix {
        &self.states[0]
    }

    pub fn last(&self) -> &DensityMatrix {
        self.states.last().unwrap()
    }
}

/// Number of steps and effective step for a grid covering [0, τ] with target
/// step `dt`: the step count is rounded so the grid lands exactly on τ.
pub(crate) fn grid_steps(tau: f64, dt: f64) -> Result<(usize, f64)> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::Config(format!("tau must be positive, got {tau}")));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Config(format!("dt must be positive, got {dt}")));
    }
    if dt > tau {
        return Err(Error::Config(format!("dt = {dt} exceeds tau = {tau}")));
    }
    let n = (tau / dt).round().max(1.0) as usize;
    Ok((n, tau / n as f64))
}

/// Integrate dρ/dt = L_t[ρ] from `rho0` over [0, τ] with the classic
/// fourth-order Runge-Kutta scheme at fixed step ≈ dt (snapped so the grid
/// ends exactly at τ).
pub fn integrate(g: &Generator, rho0: &DensityMatrix, tau: f64, dt: f64) -> Result<Trajectory> {
    let (n, h) = grid_steps(tau, dt)?;
    let mut times = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    times.push(0.0);
    states.push(*rho0);

    let mut m = *rho0.matrix();
    for k in 0..n {
        let t = k as f64 * h;
        let k1 = g.apply(t, &m);
        let k2 = g.apply(t + 0.5 * h, &(m + k1.scale_re(0.5 * h)));
        let k3 = g.apply(t + 0.5 * h, &(m + k2.scale_re(0.5 * h)));
        let k4 = g.apply(t + h, &(m + k3.scale_re(h)));
        m = m + (k1 + k2.scale_re(2.0) + k3.scale_re(2.0) + k4).scale_re(h / 6.0);

        let t_next = (k + 1) as f64 * h;
        if !m.is_finite() {
            return Err(Error::NonFinite { t: t_next });
        }
        m = m.hermitize();
        let tr = m.trace().re;
        if (tr - 1.0).abs() > tol::TRACE_DRIFT {
            if tr.abs() < 0.5 {
                // trace collapsed; the step is meaningless
                return Err(Error::NonFinite { t: t_next });
            }
            m = m.scale_re(1.0 / tr);
        }
        let state = DensityMatrix::with_eig_floor(m, tol::STEP_EIG_FLOOR).map_err(|_| {
            Error::PositivityLoss {
                t: t_next,
                min_eig: crate::qlinalg::eigvals_hermitian(&m)[1],
            }
        })?;
        times.push(t_next);
        states.push(state);
    }

    Ok(Trajectory::from_states(
        times,
        states,
        TrajectorySource::Integrated,
    ))
}

/// Split a dissipator value D into the part diagonal in the eigenbasis of ρ
/// and the rest: D^diag = Σ_α ⟨α|D|α⟩ |α⟩⟨α|, D^ndiag = D - D^diag.
pub fn split_dissipator(d: &Matrix2, spectrum: &Spectrum) -> (Matrix2, Matrix2) {
    let mut diag = Matrix2::zero();
    for i in 0..2 {
        let c = spectrum.sandwich(d, i, i);
        diag = diag + Matrix2::outer(&spectrum.vectors[i], &spectrum.vectors[i]).scale_re(c.re);
    }
    (diag, *d - diag)
}

/// Effective Hamiltonian generating the non-diagonal dissipator motion:
/// H_D = i Σ_{α≠β} ⟨α|D|β⟩ |α⟩⟨β| / (p_β - p_α), so D^ndiag = -i[H_D, ρ].
///
/// A term with |p_β - p_α| below the degeneracy gap is removable when its
/// numerator vanishes (taken as zero); otherwise the decomposition does not
/// exist and [`Error::DegenerateSpectrum`] is returned.
pub fn effective_hamiltonian(d: &Matrix2, spectrum: &Spectrum) -> Result<Matrix2> {
    let mut hd = Matrix2::zero();
    for a in 0..2 {
        for b in 0..2 {
            if a == b {
                continue;
            }
            let num = spectrum.sandwich(d, a, b);
            let gap = spectrum.values[b] - spectrum.values[a];
            if gap.abs() <= tol::DEGENERACY_GAP {
                if num.norm() <= tol::DEGENERACY_COUPLING {
                    continue; // removable
                }
                return Err(Error::DegenerateSpectrum {
                    gap: gap.abs(),
                    coupling: num.norm(),
                });
            }
            let coeff = I_C * num / C64::from(gap);
            hd = hd + Matrix2::outer(&spectrum.vectors[a], &spectrum.vectors[b]).scale(coeff);
        }
    }
    // Hermitian up to roundoff because D is Hermitian; symmetrize.
    debug_assert!(hd.hermiticity_defect() < 1e-10);
    Ok(hd.hermitize())
}

/// Energy fluctuation ΔE = √(Tr[H²ρ] - Tr[Hρ]²) of an observable H in the
/// state ρ.
pub fn energy_fluctuation(h: &Matrix2, rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let mean = (*h * *m).trace().re;
    let second = (*h * *h * *m).trace().re;
    (second - mean * mean).max(0.0).sqrt()
}

/// Fluctuation of the effective Hamiltonian: √Tr[H_D²ρ]. Tr[H_D ρ] vanishes
/// identically (H_D has no diagonal in the ρ eigenbasis), which is asserted
/// rather than subtracted.
pub fn dissipative_fluctuation(hd: &Matrix2, rho: &DensityMatrix) -> f64 {
    let mean = (*hd * *rho.matrix()).trace().re;
    debug_assert!(
        mean.abs() < 1e-8,
        "Tr[H_D ρ] = {mean:.3e}, expected to vanish"
    );
    let second = (*hd * *hd * *rho.matrix()).trace().re;
    second.max(0.0).sqrt()
}
