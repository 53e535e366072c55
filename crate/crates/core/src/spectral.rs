//! Spectral densities and photonic frequency distributions.
//!
//! Two parameterized families:
//! - the power-law/exponential-cutoff family J(ω) = λ ω^s Ω^{1-s} e^{-ω/Ω}
//!   (ohmic for s = 1, super-ohmic for s > 1);
//! - normalized mixtures of Lorentzian lines, modeling photonic frequency
//!   distributions |f(ω)|².

use crate::error::{Error, Result};

/// J(ω) = λ ω^s Ω^{1-s} e^{-ω/Ω} with coupling λ > 0, low-frequency exponent
/// s > 0 and cutoff frequency Ω > 0. s is real-valued, not just integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OhmicFamilySpectralDensity {
    lambda: f64,
    s: f64,
    omega_c: f64,
}

impl OhmicFamilySpectralDensity {
    pub fn new(lambda: f64, s: f64, omega_c: f64) -> Result<Self> {
        for (name, value) in [("lambda", lambda), ("s", s), ("omega", omega_c)] {
            if value.is_nan() || value <= 0.0 || !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite and > 0",
                });
            }
        }
        Ok(OhmicFamilySpectralDensity { lambda, s, omega_c })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    /// Same family with the exponent shifted by `ds` (λ, Ω unchanged).
    pub(crate) fn with_shifted_exponent(&self, ds: f64) -> Result<Self> {
        Self::new(self.lambda, self.s + ds, self.omega_c)
    }

    /// Pointwise evaluation; rejects negative frequencies.
    pub fn evaluate(&self, omega: f64) -> Result<f64> {
        if omega < 0.0 {
            return Err(Error::InvalidParameter {
                name: "omega",
                value: omega,
                reason: "spectral density is defined on omega >= 0",
            });
        }
        Ok(self.lambda
            * omega.powf(self.s)
            * self.omega_c.powf(1.0 - self.s)
            * (-omega / self.omega_c).exp())
    }
}

/// One Lorentzian line A δω/π / ((ω-ω₀)² + δω²) of weight A ∈ (0, 1] and
/// width δω > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzianComponent {
    pub weight: f64,
    pub center: f64,
    pub width: f64,
}

impl LorentzianComponent {
    pub fn new(weight: f64, center: f64, width: f64) -> Result<Self> {
        if weight.is_nan() || weight <= 0.0 || weight > 1.0 {
            return Err(Error::InvalidParameter {
                name: "A",
                value: weight,
                reason: "component weight must lie in (0, 1]",
            });
        }
        if width.is_nan() || width <= 0.0 || !width.is_finite() {
            return Err(Error::InvalidParameter {
                name: "delta_omega",
                value: width,
                reason: "width must be finite and > 0",
            });
        }
        Ok(LorentzianComponent {
            weight,
            center,
            width,
        })
    }

    fn evaluate(&self, omega: f64) -> f64 {
        self.weight * self.width
            / (std::f64::consts::PI * ((omega - self.center).powi(2) + self.width * self.width))
    }
}

/// Normalized mixture of Lorentzian lines together with the refractive-index
/// difference Δn of the birefringent element driving the dephasing.
#[derive(Debug, Clone, PartialEq)]
pub struct LorentzianMixture {
    components: Vec<LorentzianComponent>,
    delta_n: f64,
}

impl LorentzianMixture {
    /// Weights must sum to 1 within 1e-12; at least one component.
    pub fn new(components: Vec<LorentzianComponent>, delta_n: f64) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter {
                name: "components",
                value: 0.0,
                reason: "mixture needs at least one component",
            });
        }
        let total: f64 = components.iter().map(|c| c.weight).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter {
                name: "A_sum",
                value: total,
                reason: "component weights must sum to 1",
            });
        }
        if delta_n == 0.0 || !delta_n.is_finite() {
            return Err(Error::InvalidParameter {
                name: "delta_n",
                value: delta_n,
                reason: "delta_n must be finite and nonzero",
            });
        }
        Ok(LorentzianMixture {
            components,
            delta_n,
        })
    }

    /// Single Lorentzian line (semigroup dynamics).
    pub fn single(center: f64, width: f64, delta_n: f64) -> Result<Self> {
        Self::new(vec![LorentzianComponent::new(1.0, center, width)?], delta_n)
    }

    /// Two-component mixture with weight ratio r = A₂/A₁.
    pub fn two_component(
        center1: f64,
        width1: f64,
        center2: f64,
        width2: f64,
        ratio: f64,
        delta_n: f64,
    ) -> Result<Self> {
        if ratio.is_nan() || ratio <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "r",
                value: ratio,
                reason: "weight ratio must be > 0",
            });
        }
        let a1 = 1.0 / (1.0 + ratio);
        Self::new(
            vec![
                LorentzianComponent::new(a1, center1, width1)?,
                LorentzianComponent::new(1.0 - a1, center2, width2)?,
            ],
            delta_n,
        )
    }

    pub fn components(&self) -> &[LorentzianComponent] {
        &self.components
    }

    pub fn delta_n(&self) -> f64 {
        self.delta_n
    }

    /// Weight ratio r = A₂/A₁ of the first two components.
    pub fn ratio(&self) -> Option<f64> {
        (self.components.len() >= 2).then(|| self.components[1].weight / self.components[0].weight)
    }

    /// |f(ω)|² = Σ_j A_j δω_j / π((ω-ω₀ⱼ)² + δω_j²); integrates to 1 over
    /// the real line.
    pub fn evaluate(&self, omega: f64) -> f64 {
        self.components.iter().map(|c| c.evaluate(omega)).sum()
    }
}
