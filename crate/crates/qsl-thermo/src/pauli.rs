//! Population transition rates in the instantaneous eigenbasis.
//!
//! Writing ρ_t = Σ_α p_α |α_t⟩⟨α_t|, the populations obey a classical Pauli
//! master equation
//!
//! ```text
//! ṗ_α = Σ_{β≠α} [ R_αβ p_β - R_βα p_α ],   R_αβ = Σ_i γ_i |⟨α|A_i|β⟩|²
//! ```
//!
//! Negative channel rates make some R_αβ negative. The renormalized rates T
//! fold each negative rate into its reverse channel,
//!
//! ```text
//! T_αβ = R⁺_αβ + (p_α/p_β) R⁻_βα,   R⁺ = max(R, 0),  R⁻ = max(-R, 0),
//! ```
//!
//! which is entrywise non-negative and preserves every pairwise probability
//! current: T_αβ p_β - T_βα p_α = R_αβ p_β - R_βα p_α. The fold needs
//! p_β > 0 wherever a reverse rate is negative; when p_β underflows the
//! corresponding T entry is +∞ (an instantaneous-reset channel), which the
//! entropy ledger downstream propagates honestly.

use crate::error::{Error, Result};
use crate::generator::{Generator, Trajectory};
use crate::qlinalg::{Spectrum, C64};
use crate::tol;

/// R[α][β] is the rate of the β → α population transition.
pub type RateMatrix = [[f64; 2]; 2];

/// All rate views at one instant.
pub struct RatePoint {
    pub raw: RateMatrix,
    pub markov: RateMatrix,
    pub non_markov: RateMatrix,
    pub renorm: RateMatrix,
    /// Some renormalized entry overflowed to +∞ because the source
    /// population underflowed.
    pub underflow: bool,
}

/// Raw rates R_αβ from the generator's channels at time t, in the eigenbasis
/// carried by `spectrum`. Diagonal entries are left at zero.
pub fn transition_rates(g: &Generator, spectrum: &Spectrum, t: f64) -> RateMatrix {
    let mut r = [[0.0; 2]; 2];
    for (gamma, a) in g.channels_at(t) {
        for alpha in 0..2 {
            for beta in 0..2 {
                if alpha != beta {
                    r[alpha][beta] += gamma * spectrum.sandwich(&a, alpha, beta).norm_sqr();
                }
            }
        }
    }
    r
}

/// Split into non-negative forward and backward parts: R = R⁺ - R⁻.
pub fn markov_split(r: &RateMatrix) -> (RateMatrix, RateMatrix) {
    let mut plus = [[0.0; 2]; 2];
    let mut minus = [[0.0; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            plus[a][b] = r[a][b].max(0.0);
            minus[a][b] = (-r[a][b]).max(0.0);
        }
    }
    (plus, minus)
}

/// Renormalized rates; entries whose backward fold divides by an underflowed
/// population become +∞ and set the flag.
pub fn renormalize_with_limits(r: &RateMatrix, p: &[f64; 2]) -> (RateMatrix, bool) {
    let (plus, minus) = markov_split(r);
    let mut t = [[0.0; 2]; 2];
    let mut underflow = false;
    for a in 0..2 {
        for b in 0..2 {
            if a == b {
                continue;
            }
            t[a][b] = plus[a][b];
            let back = minus[b][a];
            if back > 0.0 {
                if p[b] <= tol::POPULATION_FLOOR {
                    t[a][b] = f64::INFINITY;
                    underflow = true;
                } else {
                    t[a][b] += p[a] / p[b] * back;
                }
            }
        }
    }
    (t, underflow)
}

/// Strict variant: underflow is an error instead of an infinity.
pub fn renormalize(r: &RateMatrix, p: &[f64; 2]) -> Result<RateMatrix> {
    let (t, underflow) = renormalize_with_limits(r, p);
    if underflow {
        return Err(Error::PopulationUnderflow { p: p[0].min(p[1]) });
    }
    Ok(t)
}

/// Assemble every rate view at one instant.
pub fn rate_point(g: &Generator, spectrum: &Spectrum, p: &[f64; 2], t: f64) -> RatePoint {
    let raw = transition_rates(g, spectrum, t);
    let (markov, non_markov) = markov_split(&raw);
    let (renorm, underflow) = renormalize_with_limits(&raw, p);
    RatePoint {
        raw,
        markov,
        non_markov,
        renorm,
        underflow,
    }
}

/// Eigendecomposition along a trajectory with a continuously tracked basis.
///
/// `spectra[k]` carries the eigenpairs of state k permuted so that vector α
/// follows the same physical branch over time (eigenvalue order may invert
/// at a population crossing). `dpdt[k][α] = ⟨α|D_t[ρ]|α⟩` is the exact
/// population velocity; the Hamiltonian part contributes nothing to it.
#[derive(Debug, Clone)]
pub struct SpectralTrack {
    pub times: Vec<f64>,
    pub spectra: Vec<Spectrum>,
    pub populations: Vec<[f64; 2]>,
    pub dpdt: Vec<[f64; 2]>,
}

fn overlap(u: &[C64; 2], v: &[C64; 2]) -> f64 {
    (u[0].conj() * v[0] + u[1].conj() * v[1]).norm_sqr()
}

pub fn build_spectral_track(traj: &Trajectory, g: &Generator) -> Result<SpectralTrack> {
    let mut spectra: Vec<Spectrum> = Vec::with_capacity(traj.len());
    let mut populations = Vec::with_capacity(traj.len());
    let mut dpdt = Vec::with_capacity(traj.len());

    for (k, (&t, state)) in traj.times().iter().zip(traj.states()).enumerate() {
        let mut spec = state.eig()?;
        if let Some(prev) = spectra.last() {
            let keep = overlap(&prev.vectors[0], &spec.vectors[0]);
            let cross = overlap(&prev.vectors[0], &spec.vectors[1]);
            if cross > keep {
                spec.swap();
            }
            let first = keep.max(cross);
            let second = overlap(&prev.vectors[1], &spec.vectors[1]);
            let worst = first.min(second);
            if worst <= tol::TRACKING_OVERLAP {
                return Err(Error::TrackingLost {
                    step: k,
                    overlap: worst,
                });
            }
        }
        let d = g.dissipator(t, state.matrix());
        dpdt.push([spec.sandwich(&d, 0, 0).re, spec.sandwich(&d, 1, 1).re]);
        populations.push(spec.values);
        spectra.push(spec);
    }

    Ok(SpectralTrack {
        times: traj.times().to_vec(),
        spectra,
        populations,
        dpdt,
    })
}
