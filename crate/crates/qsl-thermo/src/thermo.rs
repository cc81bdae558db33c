//! Entropy-rate ledger and dynamical activity.
//!
//! All quantities are functionals of the instantaneous populations p and the
//! transition rates, summed over ordered pairs α ≠ β with front factors
//! p_α R_βα (the α → β probability current):
//!
//! ```text
//! Ṡ      = -Σ p_α R_βα log(p_β/p_α)            entropy rate
//! 𝒮̇_e    = -Σ p_α R_βα log(|R_βα|/|R_αβ|)      flow
//! 𝒮̇_tot  =  Σ p_α R_βα log(p_α|R_βα| / p_β|R_αβ|)   production
//! Ṡ_e^M  = -Σ p_α T_βα log(T_βα/T_αβ)          flow, renormalized rates
//! Ṡ_tot^M =  Σ p_α T_βα log(p_α T_βα / p_β T_αβ) ≥ 0
//! Ṡ_tot^NM = Ṡ_tot^M - 𝒮̇_tot = 𝒮̇_e - Ṡ_e^M    (0 when no rate is negative)
//! ```
//!
//! Splitting identity: Ṡ = 𝒮̇_e + 𝒮̇_tot, and the same with the renormalized
//! pair, since T carries the same pairwise currents as R.
//!
//! Divergences are reported honestly as ±∞: a vanishing population or a
//! one-sided zero rate opposite a nonzero current makes a log blow up (pure
//! states are the physical case). Current products p_α T_βα are always
//! evaluated in the split form p_α R⁺_βα + p_β R⁻_αβ, which stays finite
//! even where the T entry alone overflows, so no 0·∞ ever occurs.

use crate::pauli::{markov_split, RateMatrix};
use crate::qlinalg::LogBase;

/// The six entropy-rate functionals at one instant, in the caller's log
/// base per unit time.
#[derive(Debug, Clone, Copy)]
pub struct EntropyLedger {
    pub entropy_rate: f64,
    pub flow: f64,
    pub production: f64,
    pub flow_markov: f64,
    pub production_markov: f64,
    pub production_non_markov: f64,
}

impl EntropyLedger {
    /// True when the renormalized ledger diverged (pure-state limit or a
    /// population underflow); the thermodynamic bound is then trivial.
    pub fn is_divergent(&self) -> bool {
        !(self.flow_markov.is_finite() && self.production_markov.is_finite())
    }
}

/// Thermodynamic data entering the speed bound at one instant.
#[derive(Debug, Clone, Copy)]
pub struct ThermoSample {
    pub ledger: EntropyLedger,
    /// Dynamical activity A ≥ 0.
    pub activity: f64,
    /// Fluctuation of the system Hamiltonian.
    pub delta_e: f64,
    /// Fluctuation of the effective dissipative Hamiltonian.
    pub delta_e_d: f64,
}

impl ThermoSample {
    /// Right-hand side of the pointwise speed bound,
    /// ΔE + ΔE_D + √(max(0, Ṡ_tot^M)·A/2). Infinite production propagates.
    pub fn bound_rhs(&self) -> f64 {
        let prod = self.ledger.production_markov.max(0.0);
        let root = if prod <= 0.0 || self.activity <= 0.0 {
            0.0
        } else {
            (0.5 * prod * self.activity).sqrt()
        };
        self.delta_e + self.delta_e_d + root
    }
}

/// log(num/den) with the ledger's boundary conventions: a zero denominator
/// against a positive numerator diverges to +∞, a zero numerator to -∞.
/// (Terms whose front factor vanishes are skipped before this is called, so
/// 0/0 never reaches it.)
fn log_ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        f64::NEG_INFINITY
    } else if den == 0.0 {
        f64::INFINITY
    } else {
        (num / den).ln()
    }
}

/// fronts[α][β] = p_α R_βα, the α → β current.
fn raw_fronts(r: &RateMatrix, p: &[f64; 2]) -> [[f64; 2]; 2] {
    let mut f = [[0.0; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            if a != b {
                f[a][b] = p[a] * r[b][a];
            }
        }
    }
    f
}

/// p_α T_βα in split form: p_α R⁺_βα + p_β R⁻_αβ. Finite by construction.
fn renorm_fronts(raw: &RateMatrix, p: &[f64; 2]) -> [[f64; 2]; 2] {
    let (plus, minus) = markov_split(raw);
    let mut f = [[0.0; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            if a != b {
                f[a][b] = p[a] * plus[b][a] + p[b] * minus[a][b];
            }
        }
    }
    f
}

fn pair_sum(fronts: &[[f64; 2]; 2], term: impl Fn(usize, usize) -> f64) -> f64 {
    let mut acc = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            if a == b || fronts[a][b] == 0.0 {
                continue;
            }
            acc += fronts[a][b] * term(a, b);
        }
    }
    acc
}

/// Evaluate the full ledger from the raw and renormalized rates. `renorm`
/// must come from the same `raw` and `p` (entries may be +∞ on underflow).
///
/// For a single level pair the non-Markovian part never meets an ∞ - ∞:
/// a one-sided zero against a positive partner means no rate is negative,
/// which short-circuits to exactly zero.
pub fn entropy_ledger(
    raw: &RateMatrix,
    renorm: &RateMatrix,
    p: &[f64; 2],
    base: LogBase,
) -> EntropyLedger {
    let fr = raw_fronts(raw, p);
    let fm = renorm_fronts(raw, p);

    let entropy_rate = -pair_sum(&fr, |a, b| log_ratio(p[b], p[a]));
    let flow = -pair_sum(&fr, |a, b| log_ratio(raw[b][a].abs(), raw[a][b].abs()));
    let production = pair_sum(&fr, |a, b| log_ratio(fr[a][b].abs(), fr[b][a].abs()));
    let flow_markov = -pair_sum(&fm, |a, b| log_ratio(renorm[b][a], renorm[a][b]));
    let production_markov = pair_sum(&fm, |a, b| log_ratio(fm[a][b], fm[b][a]));

    let all_nonnegative = (0..2).all(|a| (0..2).all(|b| raw[a][b] >= 0.0));
    let production_non_markov = if all_nonnegative {
        0.0
    } else {
        flow - flow_markov
    };

    let k = base.from_natural();
    EntropyLedger {
        entropy_rate: k * entropy_rate,
        flow: k * flow,
        production: k * production,
        flow_markov: k * flow_markov,
        production_markov: k * production_markov,
        production_non_markov: k * production_non_markov,
    }
}

/// Dynamical activity A = ½ Σ_{α≠γ} [T_αγ p_γ + T_γα p_α], i.e. the total
/// renormalized jump traffic. Computed from the split current products, so
/// it stays finite (and ≥ 0) even where a T entry overflows.
pub fn dynamical_activity(raw: &RateMatrix, p: &[f64; 2]) -> f64 {
    let fm = renorm_fronts(raw, p);
    let mut a = 0.0;
    for alpha in 0..2 {
        for gamma in 0..2 {
            if alpha != gamma {
                a += 0.5 * (fm[gamma][alpha] + fm[alpha][gamma]);
            }
        }
    }
    a
}
