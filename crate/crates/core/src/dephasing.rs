//! Decoherence function γ(t), dephasing rate 𝒟(t) = -d ln|γ(t)|/dt, the
//! two-time phase φ, and the time-local master equation
//!
//!   dρ/dt = -i ε(t)/2 [σ_z, ρ] + 𝒟(t)/2 (σ_z ρ σ_z - ρ)
//!
//! for a qubit coupled to a bosonic bath through σ_z (see Breuer &
//! Petruccione, "The Theory of Open Quantum Systems", ch. 4).
//!
//! Two spin-boson backends are provided: zero-temperature closed forms for
//! the power-law/cutoff spectral family, and a thermal quadrature backend
//! evaluating the coth-weighted transforms
//!
//!   𝒟(t) = ∫ J(ω) coth(βω/2) sin(ωt)/ω dω,
//!   γ(t) = exp[-∫ J(ω) coth(βω/2) (1-cos ωt)/ω² dω].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{ode, quad, special};
use crate::qdmat::DensityMatrix2;
use crate::spectral::OhmicFamilySpectralDensity;

/// Inverse temperature β = 1/(k_B T), with the zero-temperature limit as a
/// distinguished value rather than a large β: at T = 0 the thermal factor
/// coth(βω/2) is replaced by 1 exactly, avoiding any coth overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InverseTemperature {
    ZeroTemperature,
    Finite(f64),
}

impl InverseTemperature {
    pub fn finite(beta: f64) -> Result<Self> {
        if beta.is_nan() || beta <= 0.0 || !beta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "beta",
                value: beta,
                reason: "inverse temperature must be finite and > 0",
            });
        }
        Ok(InverseTemperature::Finite(beta))
    }

    /// coth(βω/2), or 1 in the zero-temperature limit.
    pub fn thermal_factor(&self, omega: f64) -> f64 {
        match self {
            InverseTemperature::ZeroTemperature => 1.0,
            InverseTemperature::Finite(beta) => 1.0 / (0.5 * beta * omega).tanh(),
        }
    }
}

/// Zero-temperature dephasing rate 𝒟_s(t) = λΩΓ(s) sin(s·arctan(Ωt)) /
/// (1+(Ωt)²)^{s/2}, valid for any s > 0.
pub fn dephasing_rate_closed(sd: &OhmicFamilySpectralDensity, t: f64) -> f64 {
    let x = sd.omega_c() * t;
    sd.lambda() * sd.omega_c() * special::gamma(sd.s()) * (sd.s() * x.atan()).sin()
        / (1.0 + x * x).powf(0.5 * sd.s())
}

/// Equivalent compact form 𝒟_s(t) = λΩΓ(s) Im[(1+iΩt)^s] / (1+(Ωt)²)^s,
/// kept as an independent algebraic route to the same rate.
pub fn dephasing_rate_closed_compact(sd: &OhmicFamilySpectralDensity, t: f64) -> f64 {
    let x = sd.omega_c() * t;
    let z = Complex64::new(1.0, x).powf(sd.s());
    sd.lambda() * sd.omega_c() * special::gamma(sd.s()) * z.im / (1.0 + x * x).powf(sd.s())
}

/// Zero-temperature decoherence function. For s > 1,
/// γ_s(t) = exp[-λΓ(s-1)(1 - Re[(1+iΩt)^{s-1}]/(1+(Ωt)²)^{s-1})];
/// at s = 1 the elementary integral gives γ_1(t) = (1+(Ωt)²)^{-λ/2}.
/// Non-integer s ≤ 1 has no closed form here; use the quadrature backend.
pub fn decoherence_closed(sd: &OhmicFamilySpectralDensity, t: f64) -> Result<f64> {
    let x = sd.omega_c() * t;
    let s = sd.s();
    if s == 1.0 {
        return Ok((1.0 + x * x).powf(-0.5 * sd.lambda()));
    }
    if s < 1.0 {
        return Err(Error::UnsupportedExponent { s });
    }
    let z = Complex64::new(1.0, x).powf(s - 1.0);
    let exponent =
        sd.lambda() * special::gamma(s - 1.0) * (1.0 - z.re / (1.0 + x * x).powf(s - 1.0));
    Ok((-exponent).exp())
}

/// Long-time limit lim_{t→∞} |γ_s(t)| = e^{-λΓ(s-1)} (0 at s = 1).
pub fn gamma_infinity_closed(sd: &OhmicFamilySpectralDensity) -> Result<f64> {
    let s = sd.s();
    if s == 1.0 {
        return Ok(0.0);
    }
    if s < 1.0 {
        return Err(Error::UnsupportedExponent { s });
    }
    Ok((-sd.lambda() * special::gamma(s - 1.0)).exp())
}

/// Two-time phase φ_s(t2,t1) = (𝒟_{s-1}(t2) - 𝒟_{s-1}(t1) - 𝒟_{s-1}(t2-t1))/Ω
/// with the same λ and Ω; defined for s > 1.
pub fn phase_phi(sd: &OhmicFamilySpectralDensity, t1: f64, t2: f64) -> Result<f64> {
    if sd.s() <= 1.0 {
        return Err(Error::UnsupportedExponent { s: sd.s() });
    }
    if !(0.0 <= t1 && t1 <= t2) {
        return Err(Error::InvalidParameter {
            name: "t1",
            value: t1,
            reason: "times must satisfy 0 <= t1 <= t2",
        });
    }
    let shifted = sd.with_shifted_exponent(-1.0)?;
    let rate = |t: f64| dephasing_rate_closed(&shifted, t);
    Ok((rate(t2) - rate(t1) - rate(t2 - t1)) / sd.omega_c())
}

fn quadrature_outcome_to_result(out: quad::QuadOutcome) -> Result<f64> {
    if out.converged {
        Ok(out.value)
    } else {
        Err(Error::QuadratureNonConvergence {
            achieved: out.abs_error,
            target: quad::PANEL_TOL,
        })
    }
}

/// Small-ω power of the coth-weighted integrands: J·coth behaves as ω^s at
/// zero temperature and as ω^{s-1} at finite β (coth ~ 2/βω).
fn integrand_zero_power(sd: &OhmicFamilySpectralDensity, beta: InverseTemperature) -> f64 {
    match beta {
        InverseTemperature::ZeroTemperature => sd.s(),
        InverseTemperature::Finite(_) => sd.s() - 1.0,
    }
}

fn rate_quadrature_outcome(
    sd: &OhmicFamilySpectralDensity,
    beta: InverseTemperature,
    t: f64,
) -> quad::QuadOutcome {
    quad::integrate_cutoff_axis(
        |w| sd.evaluate(w).unwrap_or(0.0) * beta.thermal_factor(w) * (w * t).sin() / w,
        sd.omega_c(),
        t,
        quad::PANEL_TOL,
        integrand_zero_power(sd, beta),
    )
}

fn decoherence_exponent_outcome(
    sd: &OhmicFamilySpectralDensity,
    beta: InverseTemperature,
    t: f64,
) -> quad::QuadOutcome {
    quad::integrate_cutoff_axis(
        |w| {
            // (1 - cos ωt)/ω² written as (t²/2)·sinc²(ωt/2): cancellation-free
            // and finite down to denormal frequencies.
            let u = 0.5 * w * t;
            let sinc = if u.abs() < 1e-8 { 1.0 } else { u.sin() / u };
            sd.evaluate(w).unwrap_or(0.0) * beta.thermal_factor(w) * 0.5 * t * t * sinc * sinc
        },
        sd.omega_c(),
        t,
        quad::PANEL_TOL,
        integrand_zero_power(sd, beta),
    )
}

/// 𝒟(t) by adaptive quadrature of the coth-weighted sine transform; agrees
/// with [`dephasing_rate_closed`] in the zero-temperature limit.
pub fn dephasing_rate_quadrature(
    sd: &OhmicFamilySpectralDensity,
    beta: InverseTemperature,
    t: f64,
) -> Result<f64> {
    quadrature_outcome_to_result(rate_quadrature_outcome(sd, beta, t))
}

/// γ(t) by adaptive quadrature; agrees with [`decoherence_closed`] in the
/// zero-temperature limit for s > 1.
pub fn decoherence_quadrature(
    sd: &OhmicFamilySpectralDensity,
    beta: InverseTemperature,
    t: f64,
) -> Result<f64> {
    quadrature_outcome_to_result(decoherence_exponent_outcome(sd, beta, t)).map(|e| (-e).exp())
}

/// The γ(t2,t1), φ(t2,t1) pair entering the exact two-time correlators.
/// For a thermal bath γ(t2,t1) = γ(t2-t1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoTimeFactors {
    pub gamma: Complex64,
    pub phase: f64,
}

/// Common contract of the dephasing backends: the complex decoherence
/// function γ(t) with γ(0) = 1 (the free phase e^{-iω_s t} is kept
/// separate), the rate 𝒟(t), and the master-equation frequency ε(t).
///
/// All implementations are immutable value types; every method is a pure
/// function, so models can be shared freely across threads.
pub trait DephasingModel: Send + Sync {
    /// System frequency ω_s.
    fn omega_s(&self) -> f64;

    /// Characteristic time used for finite-difference steps and horizons.
    fn timescale(&self) -> f64;

    /// Decoherence factor γ(t); |γ| ≤ 1, γ(0) = 1.
    fn gamma(&self, t: f64) -> Complex64;

    /// Dephasing rate 𝒟(t) = -d ln|γ(t)|/dt.
    fn dephasing_rate(&self, t: f64) -> f64;

    /// Master-equation frequency ε(t) = ω_s - Im[γ'(t)/γ(t)]. In the
    /// continuum spin-boson limit this is just ω_s.
    fn epsilon(&self, _t: f64) -> f64 {
        self.omega_s()
    }

    /// Analytic lim_{t→∞} |γ(t)| when the backend knows it exactly.
    fn gamma_infinity(&self) -> Option<f64> {
        None
    }

    /// γ(t2,t1) and φ(t2,t1) for the exact two-time correlators; backends
    /// without this factorization return [`Error::TwoTimeUnsupported`].
    fn two_time(&self, _t1: f64, _t2: f64) -> Result<TwoTimeFactors> {
        Err(Error::TwoTimeUnsupported)
    }
}

/// Zero-temperature spin-boson model with closed-form γ and 𝒟
/// (requires s ≥ 1).
#[derive(Debug, Clone, Copy)]
pub struct SpinBosonClosedForm {
    sd: OhmicFamilySpectralDensity,
    omega_s: f64,
}

impl SpinBosonClosedForm {
    pub fn new(sd: OhmicFamilySpectralDensity, omega_s: f64) -> Result<Self> {
        if sd.s() < 1.0 {
            return Err(Error::UnsupportedExponent { s: sd.s() });
        }
        Ok(SpinBosonClosedForm { sd, omega_s })
    }

    pub fn spectral_density(&self) -> &OhmicFamilySpectralDensity {
        &self.sd
    }
}

impl DephasingModel for SpinBosonClosedForm {
    fn omega_s(&self) -> f64 {
        self.omega_s
    }

    fn timescale(&self) -> f64 {
        1.0 / self.sd.omega_c()
    }

    fn gamma(&self, t: f64) -> Complex64 {
        Complex64::from(decoherence_closed(&self.sd, t).expect("s >= 1 enforced at construction"))
    }

    fn dephasing_rate(&self, t: f64) -> f64 {
        dephasing_rate_closed(&self.sd, t)
    }

    fn gamma_infinity(&self) -> Option<f64> {
        gamma_infinity_closed(&self.sd).ok()
    }

    fn two_time(&self, t1: f64, t2: f64) -> Result<TwoTimeFactors> {
        let phase = phase_phi(&self.sd, t1, t2)?;
        let gamma = decoherence_closed(&self.sd, t2 - t1)?;
        Ok(TwoTimeFactors {
            gamma: Complex64::from(gamma),
            phase,
        })
    }
}

/// Thermal spin-boson model evaluated by quadrature. Accepts any s > 0 and
/// either a finite β or the explicit zero-temperature limit.
///
/// Trait methods surface the best-estimate values even if a panel missed its
/// tolerance; use [`decoherence_quadrature`]/[`dephasing_rate_quadrature`]
/// for checked evaluation.
#[derive(Debug, Clone, Copy)]
pub struct SpinBosonQuadrature {
    sd: OhmicFamilySpectralDensity,
    beta: InverseTemperature,
    omega_s: f64,
}

impl SpinBosonQuadrature {
    pub fn new(sd: OhmicFamilySpectralDensity, beta: InverseTemperature, omega_s: f64) -> Self {
        SpinBosonQuadrature { sd, beta, omega_s }
    }

    pub fn spectral_density(&self) -> &OhmicFamilySpectralDensity {
        &self.sd
    }

    pub fn beta(&self) -> InverseTemperature {
        self.beta
    }
}

impl DephasingModel for SpinBosonQuadrature {
    fn omega_s(&self) -> f64 {
        self.omega_s
    }

    fn timescale(&self) -> f64 {
        1.0 / self.sd.omega_c()
    }

    fn gamma(&self, t: f64) -> Complex64 {
        Complex64::from((-decoherence_exponent_outcome(&self.sd, self.beta, t).value).exp())
    }

    fn dephasing_rate(&self, t: f64) -> f64 {
        rate_quadrature_outcome(&self.sd, self.beta, t).value
    }
}

/// Integrate the master equation over an ascending time grid starting at 0,
/// returning ρ(t) at every grid point.
///
/// Populations are conserved exactly by the generator; coherences obey
/// d|rho01|/dt = -𝒟(t)|rho01|. Integration uses the embedded
/// Runge-Kutta 5(4) pair at relative tolerance 1e-10.
pub fn integrate_master_equation<M: DephasingModel + ?Sized>(
    model: &M,
    rho0: &DensityMatrix2,
    t_grid: &[f64],
) -> Result<Vec<DensityMatrix2>> {
    if t_grid.first() != Some(&0.0) {
        return Err(Error::InvalidParameter {
            name: "t_grid",
            value: t_grid.first().copied().unwrap_or(f64::NAN),
            reason: "grid must start at t = 0",
        });
    }

    let sigma_z = [
        Complex64::ONE,
        Complex64::ZERO,
        Complex64::ZERO,
        -Complex64::ONE,
    ];
    let mul = |a: &ode::State, b: &ode::State| -> ode::State {
        [
            a[0] * b[0] + a[1] * b[2],
            a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3],
        ]
    };

    let rhs = |t: f64, rho: &ode::State| -> ode::State {
        let eps = model.epsilon(t);
        let rate = model.dephasing_rate(t);
        let zr = mul(&sigma_z, rho);
        let rz = mul(rho, &sigma_z);
        let zrz = mul(&zr, &sigma_z);
        std::array::from_fn(|i| {
            Complex64::new(0.0, -0.5 * eps) * (zr[i] - rz[i]) + 0.5 * rate * (zrz[i] - rho[i])
        })
    };

    let y0 = [
        Complex64::from(rho0.rho00()),
        rho0.rho01(),
        rho0.rho10(),
        Complex64::from(rho0.rho11()),
    ];
    let states = ode::integrate_grid(rhs, y0, t_grid, 1e-10, 1e-14)?;
    states
        .iter()
        .map(|y| DensityMatrix2::new(y[0].re, y[3].re, y[1]))
        .collect()
}
