//! Photonic realization of pure dephasing: a photon's polarization qubit
//! coupled to its own frequency degree of freedom by a birefringent element
//! with index difference Δn. The decoherence function is the Fourier
//! transform of the frequency distribution |f(ω)|²,
//!
//!   γ(t) = Σ_j A_j e^{(-|Δn| δω_j + i Δn ω₀ⱼ) t},
//!
//! for a mixture of Lorentzian lines. A single line yields semigroup
//! dynamics with constant rate Δn·δω, for which the quantum regression
//! theorem holds exactly; two lines give either a time-inhomogeneous
//! Markovian dynamics (equal centers) or a non-Markovian one (split
//! centers).

use num_complex::Complex64;

use crate::dephasing::{DephasingModel, TwoTimeFactors};
use crate::error::{Error, Result};
use crate::qdmat::DensityMatrix2;
use crate::qrt::GAMMA_FLOOR;
use crate::spectral::LorentzianMixture;

/// Dephasing model driven by a Lorentzian frequency mixture.
#[derive(Debug, Clone)]
pub struct PhotonicModel {
    mixture: LorentzianMixture,
}

impl PhotonicModel {
    pub fn new(mixture: LorentzianMixture) -> Self {
        PhotonicModel { mixture }
    }

    pub fn mixture(&self) -> &LorentzianMixture {
        &self.mixture
    }

    pub fn delta_n(&self) -> f64 {
        self.mixture.delta_n()
    }

    /// γ'(t)/γ(t) from the analytic derivative of the mixture transform.
    fn log_derivative(&self, t: f64) -> Complex64 {
        let mut num = Complex64::ZERO;
        let mut den = Complex64::ZERO;
        let dn = self.delta_n();
        for c in self.mixture.components() {
            let pole = Complex64::new(-dn.abs() * c.width, dn * c.center);
            let term = c.weight * (pole * t).exp();
            num += pole * term;
            den += term;
        }
        num / den
    }
}

/// γ(t) of the mixture; reduces to e^{-Δn(δω - iω₀)t} for a single line.
pub fn photonic_gamma(model: &PhotonicModel, t: f64) -> Complex64 {
    let dn = model.delta_n();
    model
        .mixture()
        .components()
        .iter()
        .map(|c| c.weight * Complex64::new(-dn.abs() * c.width * t, dn * c.center * t).exp())
        .sum()
}

/// 𝒟(t) = -d ln|γ(t)|/dt by analytic differentiation; constant Δn·δω for a
/// single line. Errors where |γ(t)| vanishes (isolated zeros of equal-weight
/// split-center mixtures), where the rate is genuinely singular.
pub fn photonic_dephasing_rate(model: &PhotonicModel, t: f64) -> Result<f64> {
    let mag = photonic_gamma(model, t).norm();
    if mag < GAMMA_FLOOR {
        return Err(Error::IllConditioned {
            what: "dephasing rate (|gamma(t)| ~ 0)",
            magnitude: mag,
            limit: GAMMA_FLOOR,
        });
    }
    Ok(-model.log_derivative(t).re)
}

/// Z = |1 - γ(t2)/(γ(t1) γ(t2-t1))|; the two-time phase vanishes for this
/// model.
pub fn photonic_z(model: &PhotonicModel, t1: f64, t2: f64) -> Result<f64> {
    if !(0.0 <= t1 && t1 <= t2) {
        return Err(Error::InvalidParameter {
            name: "t1",
            value: t1,
            reason: "times must satisfy 0 <= t1 <= t2",
        });
    }
    let denom = photonic_gamma(model, t1) * photonic_gamma(model, t2 - t1);
    if denom.norm() < GAMMA_FLOOR {
        return Err(Error::IllConditioned {
            what: "correlator denominator",
            magnitude: denom.norm(),
            limit: GAMMA_FLOOR,
        });
    }
    Ok((Complex64::ONE - photonic_gamma(model, t2) / denom).norm())
}

/// Entanglement of the total polarization-frequency state evolved from the
/// product state (α|H> + β|V>) ⊗ |Ψ_E>: von Neumann entropy of the reduced
/// state with populations |α|², |β|² and coherence αβ*γ(t)*. Zero exactly
/// when α = 0, β = 0, or |γ(t)| = 1.
pub fn total_state_entanglement(
    model: &PhotonicModel,
    alpha: Complex64,
    beta: Complex64,
    t: f64,
) -> Result<f64> {
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter {
            name: "alpha,beta",
            value: norm,
            reason: "amplitudes must satisfy |alpha|^2 + |beta|^2 = 1",
        });
    }
    let gamma = photonic_gamma(model, t);
    let reduced = DensityMatrix2::new(
        alpha.norm_sqr(),
        beta.norm_sqr(),
        alpha * beta.conj() * gamma.conj(),
    )?;
    Ok(reduced.von_neumann_entropy())
}

impl DephasingModel for PhotonicModel {
    /// The polarization qubit carries no free system frequency; all phases
    /// live in γ(t) itself.
    fn omega_s(&self) -> f64 {
        0.0
    }

    fn timescale(&self) -> f64 {
        let scale = self
            .mixture
            .components()
            .iter()
            .map(|c| c.width + c.center.abs())
            .fold(0.0_f64, f64::max);
        1.0 / (self.delta_n().abs() * scale)
    }

    fn gamma(&self, t: f64) -> Complex64 {
        photonic_gamma(self, t)
    }

    fn dephasing_rate(&self, t: f64) -> f64 {
        -self.log_derivative(t).re
    }

    fn epsilon(&self, t: f64) -> f64 {
        -self.log_derivative(t).im
    }

    fn two_time(&self, t1: f64, t2: f64) -> Result<TwoTimeFactors> {
        Ok(TwoTimeFactors {
            gamma: photonic_gamma(self, t2 - t1),
            phase: 0.0,
        })
    }
}
