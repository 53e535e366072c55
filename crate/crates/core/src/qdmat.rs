//! Minimal 2x2 density-matrix algebra: construction with invariant checks,
//! trace distance, dephasing evolution and von Neumann entropy.
//!
//! A qubit state is stored as the population `rho00` and the coherence
//! `rho01`; `rho11 = 1 - rho00` and `rho10 = rho01*` are implied, so the unit
//! trace and Hermiticity hold by construction. Positivity
//! |rho01|² ≤ rho00·rho11 is enforced at construction with a 1e-12 tolerance:
//! violations inside the tolerance (quadrature noise) are clamped, anything
//! beyond is rejected.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for density-matrix invariants (trace, positivity) and for the
/// |γ| ≤ 1 check in [`DensityMatrix2::dephase_evolve`].
pub const INVARIANT_TOL: f64 = 1e-12;

/// A 2x2 complex Hermitian unit-trace positive matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2 {
    rho00: f64,
    rho01: Complex64,
}

impl DensityMatrix2 {
    /// Build a state from both populations and the upper coherence,
    /// validating unit trace, population range and positivity.
    pub fn new(rho00: f64, rho11: f64, rho01: Complex64) -> Result<Self> {
        if !rho00.is_finite() || !rho11.is_finite() || !rho01.is_finite() {
            return Err(Error::InvalidDensityMatrix("non-finite entry".into()));
        }
        if (rho00 + rho11 - 1.0).abs() > INVARIANT_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace {} differs from 1 beyond tolerance",
                rho00 + rho11
            )));
        }
        if !(-INVARIANT_TOL..=1.0 + INVARIANT_TOL).contains(&rho00) {
            return Err(Error::InvalidDensityMatrix(format!(
                "population rho00 = {rho00} outside [0, 1]"
            )));
        }
        let p0 = rho00.clamp(0.0, 1.0);
        let p1 = 1.0 - p0;
        let bound = p0 * p1;
        let mut coh = rho01;
        if coh.norm_sqr() > bound {
            if coh.norm_sqr() > bound + INVARIANT_TOL {
                return Err(Error::InvalidDensityMatrix(format!(
                    "positivity violated: |rho01|^2 = {} > rho00 rho11 = {bound}",
                    coh.norm_sqr()
                )));
            }
            // Inside tolerance: clamp onto the Bloch sphere.
            coh *= (bound / coh.norm_sqr()).sqrt();
        }
        Ok(DensityMatrix2 {
            rho00: p0,
            rho01: coh,
        })
    }

    /// Diagonal state diag(p, 1 - p).
    pub fn diagonal(p: f64) -> Result<Self> {
        Self::new(p, 1.0 - p, Complex64::ZERO)
    }

    /// Pure state α|0> + β|1>; amplitudes must be normalized.
    pub fn pure(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidDensityMatrix(format!(
                "amplitudes not normalized: |alpha|^2 + |beta|^2 = {norm}"
            )));
        }
        Self::new(alpha.norm_sqr(), beta.norm_sqr(), alpha * beta.conj())
    }

    /// |ψ±><ψ±| with |ψ±> = (|0> ± |1>)/√2, the pair that maximizes the
    /// trace-distance growth under pure dephasing.
    pub fn psi_plus() -> Self {
        DensityMatrix2 {
            rho00: 0.5,
            rho01: Complex64::new(0.5, 0.0),
        }
    }

    pub fn psi_minus() -> Self {
        DensityMatrix2 {
            rho00: 0.5,
            rho01: Complex64::new(-0.5, 0.0),
        }
    }

    /// State (1 + n·σ)/2 from a Bloch vector with |n| ≤ 1.
    pub fn from_bloch(nx: f64, ny: f64, nz: f64) -> Result<Self> {
        let r2 = nx * nx + ny * ny + nz * nz;
        if r2 > 1.0 + 1e-10 {
            return Err(Error::InvalidDensityMatrix(format!(
                "Bloch vector length {} exceeds 1",
                r2.sqrt()
            )));
        }
        Self::new(
            0.5 * (1.0 + nz),
            0.5 * (1.0 - nz),
            0.5 * Complex64::new(nx, -ny),
        )
    }

    pub fn rho00(&self) -> f64 {
        self.rho00
    }

    pub fn rho11(&self) -> f64 {
        1.0 - self.rho00
    }

    pub fn rho01(&self) -> Complex64 {
        self.rho01
    }

    pub fn rho10(&self) -> Complex64 {
        self.rho01.conj()
    }

    /// Dephasing channel: populations untouched,
    /// rho01 -> rho01 · γ · e^{-i ω_s t}. Rejects |γ| > 1 + 1e-12.
    pub fn dephase_evolve(&self, gamma: Complex64, omega_s: f64, t: f64) -> Result<Self> {
        let mag = gamma.norm();
        if mag > 1.0 + INVARIANT_TOL {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: mag,
                reason: "|gamma| > 1 is an unphysical decoherence factor",
            });
        }
        let g = if mag > 1.0 { gamma / mag } else { gamma };
        let phase = Complex64::from_polar(1.0, -omega_s * t);
        Ok(DensityMatrix2 {
            rho00: self.rho00,
            rho01: self.rho01 * g * phase,
        })
    }

    /// Eigenvalues via the closed-form quadratic (trace/determinant).
    pub fn eigenvalues(&self) -> (f64, f64) {
        let half_gap = (0.25 * (self.rho00 - self.rho11()).powi(2) + self.rho01.norm_sqr()).sqrt();
        (0.5 + half_gap, 0.5 - half_gap)
    }

    /// Von Neumann entropy -Σ p ln p in nats: 0 for pure states, ln 2 for
    /// the maximally mixed state.
    pub fn von_neumann_entropy(&self) -> f64 {
        let (p, q) = self.eigenvalues();
        let term = |x: f64| if x > 0.0 { -x * x.ln() } else { 0.0 };
        term(p) + term(q)
    }
}

/// Trace distance ½‖a - b‖₁ = ½ Σ|x_k| over the eigenvalues of a - b.
///
/// a - b is traceless Hermitian, so its eigenvalues are
/// ±sqrt(δ_p² + |δ_c|²) with δ_p the population difference and δ_c the
/// coherence difference; no general eigensolver is involved.
pub fn trace_distance(a: &DensityMatrix2, b: &DensityMatrix2) -> f64 {
    let dp = a.rho00 - b.rho00;
    let dc = a.rho01 - b.rho01;
    (dp * dp + dc.norm_sqr()).sqrt()
}

/// The orthonormal operator basis {1/√2, σ₋, σ₊, σ_z/√2} used for the
/// two-time correlation functions. σ₋ = |1><0| lowers the σ_z eigenvalue;
/// σ₊ = σ₋†.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliBasisLabel {
    /// 1/√2
    Identity,
    /// σ₋
    SigmaMinus,
    /// σ₊
    SigmaPlus,
    /// σ_z/√2
    SigmaZ,
}

impl PauliBasisLabel {
    pub const ALL: [PauliBasisLabel; 4] = [
        PauliBasisLabel::Identity,
        PauliBasisLabel::SigmaMinus,
        PauliBasisLabel::SigmaPlus,
        PauliBasisLabel::SigmaZ,
    ];

    pub fn adjoint(&self) -> Self {
        match self {
            PauliBasisLabel::SigmaMinus => PauliBasisLabel::SigmaPlus,
            PauliBasisLabel::SigmaPlus => PauliBasisLabel::SigmaMinus,
            other => *other,
        }
    }
}
