//! Brute-force validation backend: the bath is discretized into a finite set
//! of modes and every quantity is assembled from exact per-mode displacement
//! algebra, independently of all closed forms.
//!
//! For mode k with frequency ω_k the interaction displaces the mode by
//! α_k(t) = 2 g_k (1 - e^{iω_k t})/ω_k, and the thermal expectation of a
//! displacement depends on |α| only, so with a_k(t) = 1 - e^{iω_k t}:
//!
//!   γ(t)       = exp[-Σ_k j_k coth(βω_k/2) |a_k(t)|² / (2ω_k²)],
//!   γ(t2,t1)   = exp[-Σ_k j_k coth(βω_k/2) |a_k(t2) - a_k(t1)|² / (2ω_k²)],
//!   φ(t2,t1)   = Σ_k j_k Im[a_k(t2)* a_k(t1)] / ω_k²,
//!
//! where j_k = 4|g_k|²·(mode density weight) = J(ω_k)·w_k carries the
//! coupling only through its modulus; arbitrary coupling phases cancel.
//! Discretization uses Gauss-Legendre nodes so the mode sums converge to the
//! continuum integrals with spectral accuracy; no Hilbert-space truncation
//! is involved anywhere.

use num_complex::Complex64;

use crate::dephasing::{DephasingModel, InverseTemperature, TwoTimeFactors};
use crate::error::{Error, Result};
use crate::numerics::gauss::GaussLegendre;
use crate::numerics::quad;
use crate::qrt::GAMMA_FLOOR;
use crate::spectral::OhmicFamilySpectralDensity;

/// Fraction of ∫J that may be truncated before a tail warning is attached.
pub const TAIL_WARN_FRACTION: f64 = 1e-12;

/// Discretized environment: strictly increasing mode frequencies with
/// nonnegative J-weights, plus the bath temperature.
#[derive(Debug, Clone)]
pub struct BathModeSet {
    frequencies: Vec<f64>,
    j_weights: Vec<f64>,
    beta: InverseTemperature,
    tail_estimate: f64,
}

impl BathModeSet {
    /// Build directly from (ω_k, j_k) pairs; frequencies must be strictly
    /// increasing and positive, weights nonnegative and finite.
    pub fn from_modes(modes: Vec<(f64, f64)>, beta: InverseTemperature) -> Result<Self> {
        let mut prev = 0.0;
        for &(w, j) in &modes {
            if w.is_nan() || w <= prev || !w.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "omega_k",
                    value: w,
                    reason: "mode frequencies must be strictly increasing and positive",
                });
            }
            if j.is_nan() || j < 0.0 || !j.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "j_weight_k",
                    value: j,
                    reason: "weights must be finite and nonnegative",
                });
            }
            prev = w;
        }
        let (frequencies, j_weights) = modes.into_iter().unzip();
        Ok(BathModeSet {
            frequencies,
            j_weights,
            beta,
            tail_estimate: 0.0,
        })
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn j_weights(&self) -> &[f64] {
        &self.j_weights
    }

    pub fn beta(&self) -> InverseTemperature {
        self.beta
    }

    /// Σ_k j_k; approximates ∫ J(ω) dω.
    pub fn total_j_weight(&self) -> f64 {
        self.j_weights.iter().sum()
    }

    /// Estimated spectral weight beyond the discretization window when it
    /// exceeds [`TAIL_WARN_FRACTION`] of the total.
    pub fn truncation_warning(&self) -> Option<f64> {
        (self.tail_estimate > TAIL_WARN_FRACTION * self.total_j_weight())
            .then_some(self.tail_estimate)
    }

    /// Mode sums are evaluated in fixed (ascending-frequency) order so that
    /// results are bit-for-bit deterministic.
    fn exponent_sum<F: Fn(f64) -> f64>(&self, per_mode: F) -> f64 {
        self.frequencies
            .iter()
            .zip(&self.j_weights)
            .map(|(&w, &j)| j * self.beta.thermal_factor(w) * per_mode(w))
            .sum()
    }

    /// Decoherence function γ(t) ∈ (0, 1].
    pub fn gamma(&self, t: f64) -> f64 {
        let exponent = self.exponent_sum(|w| {
            let half = (0.5 * w * t).sin();
            2.0 * half * half / (w * w)
        });
        (-exponent).exp()
    }

    /// Dephasing rate 𝒟(t) as the exact mode-sum derivative -d ln γ/dt.
    pub fn dephasing_rate(&self, t: f64) -> f64 {
        self.exponent_sum(|w| (w * t).sin() / w)
    }

    /// (γ(t2,t1), φ(t2,t1)) from the per-mode displacement differences.
    pub fn two_time(&self, t1: f64, t2: f64) -> (f64, f64) {
        let mut exponent = 0.0;
        let mut phase = 0.0;
        for (&w, &j) in self.frequencies.iter().zip(&self.j_weights) {
            let a1 = Complex64::ONE - Complex64::from_polar(1.0, w * t1);
            let a2 = Complex64::ONE - Complex64::from_polar(1.0, w * t2);
            exponent += j * self.beta.thermal_factor(w) * (a2 - a1).norm_sqr() / (2.0 * w * w);
            phase += j * (a2.conj() * a1).im / (w * w);
        }
        ((-exponent).exp(), phase)
    }

    /// Z assembled entirely from oracle ingredients:
    /// |1 - γ(t2)/(γ(t1) γ(t2,t1) e^{iφ})|.
    pub fn z(&self, t1: f64, t2: f64) -> Result<f64> {
        if !(0.0 <= t1 && t1 <= t2) {
            return Err(Error::InvalidParameter {
                name: "t1",
                value: t1,
                reason: "times must satisfy 0 <= t1 <= t2",
            });
        }
        let (gamma21, phase) = self.two_time(t1, t2);
        let denom = Complex64::from_polar(self.gamma(t1) * gamma21, phase);
        if denom.norm() < GAMMA_FLOOR {
            return Err(Error::IllConditioned {
                what: "correlator denominator",
                magnitude: denom.norm(),
                limit: GAMMA_FLOOR,
            });
        }
        Ok((Complex64::ONE - self.gamma(t2) / denom).norm())
    }
}

/// Discretize a spectral density into K Gauss-Legendre modes on
/// [0, omega_max]: nodes become frequencies, J(ω_k)·w_k the weights.
pub fn discretize_bath(
    sd: &OhmicFamilySpectralDensity,
    beta: InverseTemperature,
    k: usize,
    omega_max: f64,
) -> Result<BathModeSet> {
    discretize_bath_with_rule(&GaussLegendre::new(k), sd, beta, omega_max)
}

/// Same as [`discretize_bath`] with a precomputed rule, so sweeps can reuse
/// the node computation.
pub fn discretize_bath_with_rule(
    rule: &GaussLegendre,
    sd: &OhmicFamilySpectralDensity,
    beta: InverseTemperature,
    omega_max: f64,
) -> Result<BathModeSet> {
    if rule.nodes.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "K",
            value: rule.nodes.len() as f64,
            reason: "need at least 2 modes",
        });
    }
    if omega_max < 10.0 * sd.omega_c() {
        return Err(Error::InvalidParameter {
            name: "omega_max",
            value: omega_max,
            reason: "window must cover at least 10 cutoff units",
        });
    }
    let modes: Vec<(f64, f64)> = rule
        .mapped(0.0, omega_max)
        .map(|(w, weight)| (w, sd.evaluate(w).expect("positive node") * weight))
        .collect();
    let mut bath = BathModeSet::from_modes(modes, beta)?;
    let (tail, _) = quad::gk15(
        &|w| sd.evaluate(w).unwrap_or(0.0),
        omega_max,
        omega_max + 30.0 * sd.omega_c(),
    );
    bath.tail_estimate = tail.max(0.0);
    Ok(bath)
}

/// γ(t) of the discretized bath.
pub fn oracle_gamma(bath: &BathModeSet, t: f64) -> f64 {
    bath.gamma(t)
}

/// (γ(t2,t1), φ(t2,t1)) of the discretized bath.
pub fn oracle_two_time(bath: &BathModeSet, t1: f64, t2: f64) -> (f64, f64) {
    bath.two_time(t1, t2)
}

/// Z of the discretized bath.
pub fn oracle_z(bath: &BathModeSet, t1: f64, t2: f64) -> Result<f64> {
    bath.z(t1, t2)
}

/// The discretized bath exposed through the common model contract.
#[derive(Debug, Clone)]
pub struct OracleModel {
    bath: BathModeSet,
    omega_s: f64,
    timescale: f64,
}

impl OracleModel {
    pub fn new(bath: BathModeSet, omega_s: f64, timescale: f64) -> Self {
        OracleModel {
            bath,
            omega_s,
            timescale,
        }
    }

    pub fn from_spectral(
        sd: &OhmicFamilySpectralDensity,
        beta: InverseTemperature,
        k: usize,
        omega_max: f64,
        omega_s: f64,
    ) -> Result<Self> {
        Ok(OracleModel {
            bath: discretize_bath(sd, beta, k, omega_max)?,
            omega_s,
            timescale: 1.0 / sd.omega_c(),
        })
    }

    pub fn bath(&self) -> &BathModeSet {
        &self.bath
    }
}

impl DephasingModel for OracleModel {
    fn omega_s(&self) -> f64 {
        self.omega_s
    }

    fn timescale(&self) -> f64 {
        self.timescale
    }

    fn gamma(&self, t: f64) -> Complex64 {
        Complex64::from(self.bath.gamma(t))
    }

    fn dephasing_rate(&self, t: f64) -> f64 {
        self.bath.dephasing_rate(t)
    }

    fn two_time(&self, t1: f64, t2: f64) -> Result<TwoTimeFactors> {
        let (gamma, phase) = self.bath.two_time(t1, t2);
        Ok(TwoTimeFactors {
            gamma: Complex64::from(gamma),
            phase,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dephasing::{decoherence_closed, decoherence_quadrature, phase_phi};
    use crate::qrt::z_closed_spinboson;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn sd(lambda: f64, s: f64) -> OhmicFamilySpectralDensity {
        OhmicFamilySpectralDensity::new(lambda, s, 1.0).unwrap()
    }

    fn zero_t_bath(lambda: f64, s: f64, k: usize) -> BathModeSet {
        discretize_bath(&sd(lambda, s), InverseTemperature::ZeroTemperature, k, 40.0).unwrap()
    }

    #[test]
    fn weights_reproduce_spectral_moment() {
        // Σ j_k ≈ ∫J = λΓ(s+1)Ω² = 6 for λ=1, s=3, Ω=1.
        let bath = zero_t_bath(1.0, 3.0, 1024);
        assert_abs_diff_eq!(bath.total_j_weight(), 6.0, epsilon = 1e-10);
        assert!(bath.truncation_warning().is_none());
        assert!(bath.j_weights().iter().all(|&j| j >= 0.0));
    }

    #[test]
    fn coarse_bath_still_physical() {
        let bath = zero_t_bath(1.0, 3.0, 2);
        for &t in &[0.0, 1.0, 7.0] {
            let g = bath.gamma(t);
            assert!(g > 0.0 && g <= 1.0);
        }
    }

    #[test]
    fn narrow_window_is_rejected_and_wide_tail_flagged() {
        let s = sd(1.0, 3.0);
        assert!(discretize_bath(&s, InverseTemperature::ZeroTemperature, 64, 5.0).is_err());
        assert!(discretize_bath(&s, InverseTemperature::ZeroTemperature, 1, 40.0).is_err());
        // A 10Ω window truncates ~Γ(4,10)/Γ(4) ≈ 1e-2 of the weight.
        let bath = discretize_bath(&s, InverseTemperature::ZeroTemperature, 256, 10.0).unwrap();
        let tail = bath.truncation_warning().expect("tail should be flagged");
        assert!(tail > 1e-3 && tail < 1.0);
    }

    #[test]
    fn gamma_matches_closed_forms() {
        let bath = zero_t_bath(1.0, 3.0, 4096);
        assert_eq!(bath.gamma(0.0), 1.0);
        assert_relative_eq!(
            bath.gamma(3.0_f64.sqrt()),
            0.324_652_467_358_349_74,
            max_relative = 1e-6
        );
        let bath1 = zero_t_bath(1.0, 1.0, 4096);
        assert_relative_eq!(
            bath1.gamma(1.0),
            std::f64::consts::FRAC_1_SQRT_2,
            max_relative = 1e-6
        );
    }

    #[test]
    fn gamma_error_decays_with_mode_count() {
        let exact = decoherence_closed(&sd(1.0, 3.0), 5.0).unwrap();
        let coarse = (zero_t_bath(1.0, 3.0, 24).gamma(5.0) - exact).abs();
        let fine = (zero_t_bath(1.0, 3.0, 4096).gamma(5.0) - exact).abs();
        assert!(fine < coarse);
        assert!(fine < 1e-6 * exact);
    }

    #[test]
    fn gamma_converged_across_family() {
        for &s_exp in &[2.0, 3.0, 4.0] {
            for &lambda in &[0.5, 1.0] {
                let bath = zero_t_bath(lambda, s_exp, 4096);
                let spectral = sd(lambda, s_exp);
                for i in 0..=10 {
                    let t = i as f64;
                    let exact = decoherence_closed(&spectral, t).unwrap();
                    assert_relative_eq!(bath.gamma(t), exact, max_relative = 1e-6);
                }
            }
        }
    }

    #[test]
    fn two_time_trivial_points() {
        let bath = zero_t_bath(1.0, 3.0, 512);
        let (g, phi) = bath.two_time(0.0, 2.0);
        assert_abs_diff_eq!(g, bath.gamma(2.0), epsilon = 1e-15);
        assert_eq!(phi, 0.0);
        let (g, phi) = bath.two_time(1.4, 1.4);
        assert_eq!(g, 1.0);
        assert_eq!(phi, 0.0);
    }

    #[test]
    fn time_translation_identity() {
        // γ(t2,t1) depends on t2-t1 only; displacement differences vs the
        // direct evaluation agree to near machine precision.
        let bath = zero_t_bath(1.0, 3.0, 2048);
        for &(t1, t2) in &[(0.5, 1.0), (1.0, 2.0), (2.7, 9.4), (5.0, 5.0)] {
            let (g21, _) = bath.two_time(t1, t2);
            assert_relative_eq!(g21, bath.gamma(t2 - t1), max_relative = 1e-12);
        }
    }

    #[test]
    fn phase_matches_closed_form() {
        let bath = zero_t_bath(1.0, 3.0, 4096);
        let (_, phi) = bath.two_time(1.0, 2.0);
        assert_abs_diff_eq!(
            phi,
            phase_phi(&sd(1.0, 3.0), 1.0, 2.0).unwrap(),
            epsilon = 1e-6
        );
        assert_abs_diff_eq!(phi, -0.84, epsilon = 1e-6);
    }

    #[test]
    fn z_matches_closed_form() {
        for &s_exp in &[2.0, 3.0, 4.0] {
            for &lambda in &[0.5, 1.0, 2.0] {
                let bath = zero_t_bath(lambda, s_exp, 4096);
                let z_oracle = bath.z(1.0, 2.0).unwrap();
                let z_exact = z_closed_spinboson(&sd(lambda, s_exp), 1.0, 2.0).unwrap();
                assert_abs_diff_eq!(z_oracle, z_exact, epsilon = 1e-6 * (1.0 + z_exact));
            }
        }
    }

    #[test]
    fn z_trivial_cases() {
        let bath = zero_t_bath(1.0, 3.0, 256);
        assert_abs_diff_eq!(bath.z(1.5, 1.5).unwrap(), 0.0, epsilon = 1e-15);
        // All weights zero = decoupled.
        let empty = BathModeSet::from_modes(
            vec![(1.0, 0.0), (2.0, 0.0)],
            InverseTemperature::ZeroTemperature,
        )
        .unwrap();
        assert_eq!(empty.z(1.0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn finite_temperature_matches_quadrature() {
        let beta = InverseTemperature::finite(2.0).unwrap();
        let spectral = sd(1.0, 3.0);
        let bath = discretize_bath(&spectral, beta, 4096, 40.0).unwrap();
        for &t in &[0.5, 1.0, 3.0] {
            let quad_gamma = decoherence_quadrature(&spectral, beta, t).unwrap();
            assert_relative_eq!(bath.gamma(t), quad_gamma, max_relative = 1e-6);
        }
    }

    #[test]
    fn coupling_phase_cancels_in_phase_sum() {
        // Build a 3-mode toy bath twice: once through j = 4|g|² weights and
        // once from explicit complex couplings with random phases; φ must
        // coincide because Im[α₂* α₁] only sees |g|².
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let freqs = [0.9, 1.7, 3.2];
        let mags: Vec<f64> = (0..3).map(|_| rng.gen_range(0.05..0.4)).collect();
        let phases: Vec<f64> = (0..3)
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect();

        let bath = BathModeSet::from_modes(
            freqs
                .iter()
                .zip(&mags)
                .map(|(&w, &g)| (w, 4.0 * g * g))
                .collect(),
            InverseTemperature::ZeroTemperature,
        )
        .unwrap();

        let (t1, t2) = (0.8, 2.3);
        let mut phi_direct = 0.0;
        for i in 0..3 {
            let g = Complex64::from_polar(mags[i], phases[i]);
            let alpha = |t: f64| {
                2.0 * g * (Complex64::ONE - Complex64::from_polar(1.0, freqs[i] * t)) / freqs[i]
            };
            phi_direct += (alpha(t2).conj() * alpha(t1)).im;
        }
        let (_, phi) = bath.two_time(t1, t2);
        assert_abs_diff_eq!(phi, phi_direct, epsilon = 1e-14);
    }

    #[test]
    fn oracle_model_exposes_consistent_rate() {
        let model = OracleModel::from_spectral(
            &sd(1.0, 3.0),
            InverseTemperature::ZeroTemperature,
            2048,
            40.0,
            0.0,
        )
        .unwrap();
        // Mode-sum rate equals -d ln γ/dt by finite differences.
        let h = 1e-6;
        for &t in &[0.5, 2.0] {
            let fd = -(model.bath().gamma(t + h).ln() - model.bath().gamma(t - h).ln()) / (2.0 * h);
            assert_abs_diff_eq!(model.dephasing_rate(t), fd, epsilon = 1e-7);
        }
        // And tracks the closed form.
        assert_abs_diff_eq!(
            model.dephasing_rate(1.0),
            crate::dephasing::dephasing_rate_closed(&sd(1.0, 3.0), 1.0),
            epsilon = 1e-6
        );
    }
}
