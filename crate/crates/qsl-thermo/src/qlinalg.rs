//! Dense complex 2×2 linear algebra for qubit states.
//!
//! Everything here is closed-form: the Hermitian eigenproblem, singular
//! values, and the trace norm all reduce to one square root for a 2×2
//! matrix, so no iterative solver is involved and results are deterministic
//! to the last bit.
//!
//! Conventions that the rest of the crate relies on:
//!
//! * the trace norm carries a factor one half, `‖X‖_tr = ½ Tr√(X†X)`, so the
//!   trace distance of orthogonal pure states is 1;
//! * eigenvalues from [`eig_hermitian`] come in descending order;
//! * each eigenvector is phase-fixed so its largest-magnitude component is
//!   real and positive (ties broken toward the first component).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex64;

pub const ZERO_C: C64 = C64::new(0.0, 0.0);
pub const ONE_C: C64 = C64::new(1.0, 0.0);
pub const I_C: C64 = C64::new(0.0, 1.0);

/// Dense 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2 {
    pub rows: [[C64; 2]; 2],
}

impl Matrix2 {
    pub const fn new(rows: [[C64; 2]; 2]) -> Self {
        Matrix2 { rows }
    }

    pub fn zero() -> Self {
        Matrix2::new([[ZERO_C; 2]; 2])
    }

    pub fn identity() -> Self {
        Matrix2::new([[ONE_C, ZERO_C], [ZERO_C, ONE_C]])
    }

    /// Real diagonal matrix diag(a, d).
    pub fn diag(a: f64, d: f64) -> Self {
        Matrix2::new([[C64::from(a), ZERO_C], [ZERO_C, C64::from(d)]])
    }

    /// Outer product |u⟩⟨v|.
    pub fn outer(u: &[C64; 2], v: &[C64; 2]) -> Self {
        let mut m = Matrix2::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.rows[i][j] = u[i] * v[j].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        self.rows[0][0] + self.rows[1][1]
    }

    pub fn adjoint(&self) -> Self {
        Matrix2::new([
            [self.rows[0][0].conj(), self.rows[1][0].conj()],
            [self.rows[0][1].conj(), self.rows[1][1].conj()],
        ])
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut m = *self;
        for row in m.rows.iter_mut() {
            for e in row.iter_mut() {
                *e *= c;
            }
        }
        m
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(C64::from(c))
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.rows
            .iter()
            .flatten()
            .map(|e| e.norm())
            .fold(0.0, f64::max)
    }

    /// max_ij |m_ij - conj(m_ji)|, zero iff Hermitian.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.rows[i][j] - self.rows[j][i].conj()).norm());
            }
        }
        d
    }

    /// (M + M†)/2.
    pub fn hermitize(&self) -> Self {
        (*self + self.adjoint()).scale_re(0.5)
    }

    pub fn commutator(&self, other: &Matrix2) -> Matrix2 {
        *self * *other - *other * *self
    }

    pub fn anticommutator(&self, other: &Matrix2) -> Matrix2 {
        *self * *other + *other * *self
    }

    /// Apply to a column vector.
    pub fn mul_vec(&self, v: &[C64; 2]) -> [C64; 2] {
        [
            self.rows[0][0] * v[0] + self.rows[0][1] * v[1],
            self.rows[1][0] * v[0] + self.rows[1][1] * v[1],
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.rows
            .iter()
            .flatten()
            .all(|e| e.re.is_finite() && e.im.is_finite())
    }
}

impl std::ops::Add for Matrix2 {
    type Output = Matrix2;
    fn add(self, rhs: Matrix2) -> Matrix2 {
        let mut m = self;
        for i in 0..2 {
            for j in 0..2 {
                m.rows[i][j] += rhs.rows[i][j];
            }
        }
        m
    }
}

impl std::ops::Sub for Matrix2 {
    type Output = Matrix2;
    fn sub(self, rhs: Matrix2) -> Matrix2 {
        let mut m = self;
        for i in 0..2 {
            for j in 0..2 {
                m.rows[i][j] -= rhs.rows[i][j];
            }
        }
        m
    }
}

impl std::ops::Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, rhs: Matrix2) -> Matrix2 {
        let mut m = Matrix2::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.rows[i][j] =
                    self.rows[i][0] * rhs.rows[0][j] + self.rows[i][1] * rhs.rows[1][j];
            }
        }
        m
    }
}

pub fn sigma_x() -> Matrix2 {
    Matrix2::new([[ZERO_C, ONE_C], [ONE_C, ZERO_C]])
}

pub fn sigma_y() -> Matrix2 {
    Matrix2::new([[ZERO_C, -I_C], [I_C, ZERO_C]])
}

pub fn sigma_z() -> Matrix2 {
    Matrix2::new([[ONE_C, ZERO_C], [ZERO_C, -ONE_C]])
}

/// Lowering operator, maps the excited basis state e0 to the ground state e1.
pub fn sigma_minus() -> Matrix2 {
    Matrix2::new([[ZERO_C, ZERO_C], [ONE_C, ZERO_C]])
}

pub fn sigma_plus() -> Matrix2 {
    Matrix2::new([[ZERO_C, ONE_C], [ZERO_C, ZERO_C]])
}

/// Eigendecomposition of a Hermitian 2×2 matrix.
#[derive(Debug, Clone, Copy)]
pub struct Spectrum {
    /// Eigenvalues; descending as produced by [`eig_hermitian`]. Continuity
    /// tracking along a trajectory may later reorder the pair.
    pub values: [f64; 2],
    /// `vectors[i]` is the normalized eigenvector of `values[i]`.
    pub vectors: [[C64; 2]; 2],
}

impl Spectrum {
    /// Σ_i λ_i |v_i⟩⟨v_i|.
    pub fn reconstruct(&self) -> Matrix2 {
        let mut m = Matrix2::zero();
        for i in 0..2 {
            m = m + Matrix2::outer(&self.vectors[i], &self.vectors[i]).scale_re(self.values[i]);
        }
        m
    }

    /// ⟨v_i | m | v_j⟩.
    pub fn sandwich(&self, m: &Matrix2, i: usize, j: usize) -> C64 {
        let mv = m.mul_vec(&self.vectors[j]);
        self.vectors[i][0].conj() * mv[0] + self.vectors[i][1].conj() * mv[1]
    }

    pub fn swap(&mut self) {
        self.values.swap(0, 1);
        self.vectors.swap(0, 1);
    }
}

fn fix_phase(v: [C64; 2]) -> [C64; 2] {
    let i = if v[0].norm() >= v[1].norm() { 0 } else { 1 };
    let a = v[i].norm();
    if a == 0.0 {
        return v;
    }
    let ph = v[i].conj() / a;
    [v[0] * ph, v[1] * ph]
}

/// Closed-form eigendecomposition of a Hermitian 2×2 matrix. Eigenvalues
/// descending, eigenvectors orthonormal and phase-fixed.
pub fn eig_hermitian(m: &Matrix2) -> Result<Spectrum> {
    let defect = m.hermiticity_defect();
    // NaN defects (from NaN entries) must land in the error branch too
    if defect.is_nan() || defect > tol::HERMITICITY {
        return Err(Error::NotHermitian { defect });
    }
    // Symmetrize before extracting the real parameters so the result depends
    // only on the Hermitian part.
    let a = m.rows[0][0].re;
    let c = m.rows[1][1].re;
    let b = (m.rows[0][1] + m.rows[1][0].conj()).scale(0.5);
    let mean = 0.5 * (a + c);
    let h = 0.5 * (a - c);
    let babs = b.norm();
    let disc = h.hypot(babs);
    let values = [mean + disc, mean - disc];

    let vectors = if babs == 0.0 {
        let e0 = [ONE_C, ZERO_C];
        let e1 = [ZERO_C, ONE_C];
        if a >= c {
            [e0, e1]
        } else {
            [e1, e0]
        }
    } else {
        // Leading eigenvector from the cancellation-free row of (m - λ1).
        let v1 = if h >= 0.0 {
            [C64::from(h + disc), b.conj()]
        } else {
            [b, C64::from(disc - h)]
        };
        let n = (v1[0].norm_sqr() + v1[1].norm_sqr()).sqrt();
        let v1 = [v1[0] / n, v1[1] / n];
        let v2 = [-v1[1].conj(), v1[0].conj()];
        [fix_phase(v1), fix_phase(v2)]
    };

    Ok(Spectrum { values, vectors })
}

/// Eigenvalues only (descending), valid for the Hermitian part of `m`.
pub fn eigvals_hermitian(m: &Matrix2) -> [f64; 2] {
    let a = m.rows[0][0].re;
    let c = m.rows[1][1].re;
    let b = (m.rows[0][1] + m.rows[1][0].conj()).scale(0.5);
    let mean = 0.5 * (a + c);
    let disc = (0.5 * (a - c)).hypot(b.norm());
    [mean + disc, mean - disc]
}

/// Trace norm with the one-half convention: ½ (s₁ + s₂) where s_i are the
/// singular values of `m`. Works for arbitrary complex matrices.
pub fn trace_norm(m: &Matrix2) -> f64 {
    let g = m.adjoint() * *m; // Hermitian PSD Gram matrix
    let a = g.rows[0][0].re;
    let c = g.rows[1][1].re;
    let mean = 0.5 * (a + c);
    let disc = (0.5 * (a - c)).hypot(g.rows[0][1].norm());
    let s1 = (mean + disc).max(0.0).sqrt();
    let s2 = (mean - disc).max(0.0).sqrt();
    0.5 * (s1 + s2)
}

/// Logarithm base used for entropic quantities. Base 2 measures in bits and
/// is the plotting convention; the natural log is the one under which the
/// pointwise speed bound is derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum LogBase {
    #[default]
    Two,
    Natural,
}

impl LogBase {
    /// Factor converting a natural-log quantity into this base.
    pub fn from_natural(&self) -> f64 {
        match self {
            LogBase::Two => std::f64::consts::LOG2_E,
            LogBase::Natural => 1.0,
        }
    }

    pub fn log(&self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::Natural => x.ln(),
        }
    }
}

impl std::str::FromStr for LogBase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "2" => Ok(LogBase::Two),
            "e" => Ok(LogBase::Natural),
            other => Err(Error::Config(format!(
                "log base must be \"2\" or \"e\", got \"{other}\""
            ))),
        }
    }
}

/// Bloch vector (x, y, z) of a qubit state, ρ = ½(1 + x·σ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// Qubit density matrix: Hermitian, unit trace, positive semidefinite
/// (within the `tol::STATE_*` tolerances).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    mat: Matrix2,
}

impl DensityMatrix {
    pub fn new(mat: Matrix2) -> Result<Self> {
        Self::with_eig_floor(mat, tol::STATE_EIG_FLOOR)
    }

    /// Same checks as [`new`](Self::new) but with a caller-chosen eigenvalue
    /// floor. The integrator uses a looser floor to distinguish ordinary
    /// roundoff from genuinely leaving the state space.
    pub(crate) fn with_eig_floor(mat: Matrix2, floor: f64) -> Result<Self> {
        if !mat.is_finite() {
            return Err(Error::InvalidState("non-finite entries".into()));
        }
        let defect = mat.hermiticity_defect();
        if defect > tol::STATE_HERMITICITY {
            return Err(Error::InvalidState(format!(
                "hermiticity defect {defect:.3e}"
            )));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > tol::STATE_TRACE {
            return Err(Error::InvalidState(format!("trace {} ≠ 1", tr.re)));
        }
        let [_, lo] = eigvals_hermitian(&mat);
        if lo < floor {
            return Err(Error::InvalidState(format!("eigenvalue {lo:.3e} < 0")));
        }
        Ok(DensityMatrix { mat })
    }

    /// Build from the upper-triangle data: ρ00 and ρ01 (ρ11 and ρ10 follow
    /// from unit trace and hermiticity).
    pub fn from_elements(rho00: f64, rho01: C64) -> Result<Self> {
        let mat = Matrix2::new([
            [C64::from(rho00), rho01],
            [rho01.conj(), C64::from(1.0 - rho00)],
        ]);
        Self::new(mat)
    }

    pub fn from_bloch(b: &BlochVector) -> Result<Self> {
        let n = b.norm();
        if n > 1.0 + tol::BLOCH_BALL {
            return Err(Error::BlochOutOfBall { norm: n });
        }
        let mat = Matrix2::new([
            [
                C64::from(0.5 * (1.0 + b.z)),
                C64::new(0.5 * b.x, -0.5 * b.y),
            ],
            [
                C64::new(0.5 * b.x, 0.5 * b.y),
                C64::from(0.5 * (1.0 - b.z)),
            ],
        ]);
        // |x| ≤ 1 + tol keeps both eigenvalues ≥ -tol/2; construct directly.
        Ok(DensityMatrix { mat })
    }

    pub fn matrix(&self) -> &Matrix2 {
        &self.mat
    }

    pub fn rho00(&self) -> f64 {
        self.mat.rows[0][0].re
    }

    pub fn rho01(&self) -> C64 {
        self.mat.rows[0][1]
    }

    pub fn bloch(&self) -> BlochVector {
        BlochVector::new(
            2.0 * self.mat.rows[0][1].re,
            -2.0 * self.mat.rows[0][1].im,
            self.mat.rows[0][0].re - self.mat.rows[1][1].re,
        )
    }

    /// Tr[ρ²] ∈ [½, 1] for a qubit.
    pub fn purity(&self) -> f64 {
        (self.mat * self.mat).trace().re
    }

    /// l1 coherence in the computational basis: 2|ρ01|.
    pub fn l1_coherence(&self) -> f64 {
        2.0 * self.mat.rows[0][1].norm()
    }

    pub fn eig(&self) -> Result<Spectrum> {
        eig_hermitian(&self.mat)
    }

    /// Von Neumann entropy -Σ p log p in the given base, with 0·log 0 = 0.
    pub fn von_neumann_entropy(&self, base: LogBase) -> f64 {
        let ps = eigvals_hermitian(&self.mat);
        let mut s = 0.0;
        for p in ps {
            if p > 0.0 {
                s -= p * p.ln();
            }
        }
        s * base.from_natural()
    }
}

/// Trace distance ‖ρ - σ‖_tr (with the one-half convention this is at most 1).
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    trace_norm(&(*a.matrix() - *b.matrix()))
}

/// The six benchmark initial states used throughout the examples and the
/// regression table, indexed 1..=6.
pub fn table1_state(index: usize) -> Result<DensityMatrix> {
    let (rho00, re, im) = match index {
        1 => (0.3, 0.45, 0.0),
        2 => (0.3, 0.005, 0.0),
        3 => (0.5, 0.45, 0.0),
        4 => (0.5, 0.005, 0.0),
        5 => (1.0 / 3.0, 0.25, 0.3),
        6 => (0.5, 0.25, 0.25),
        other => {
            return Err(Error::Config(format!(
                "benchmark state index must be 1..=6, got {other}"
            )))
        }
    };
    DensityMatrix::from_elements(rho00, C64::new(re, im))
}

/// Reference (purity, l1 coherence) for the six benchmark states, as printed
/// in the regression table. Quoted to three decimals, hence the loose 1e-3
/// comparison used by the `table1` subcommand.
pub const TABLE1_REFERENCE: [(f64, f64); 6] = [
    (0.985, 0.90),
    (0.580, 0.01),
    (0.905, 0.90),
    (0.500, 0.01),
    (0.861, 0.781),
    (0.75, 0.707),
];
