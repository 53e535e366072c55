//! Named cross-validation suite: every closed form is checked against an
//! independent route (alternative algebraic form, quadrature, discretized
//! bath, ODE trajectory, finite differences). The CLI `check` subcommand
//! serializes the outcome; tests call it directly.

use num_complex::Complex64;

use crate::dephasing::{
    decoherence_closed, decoherence_quadrature, dephasing_rate_closed,
    dephasing_rate_closed_compact, dephasing_rate_quadrature, integrate_master_equation, phase_phi,
    DephasingModel, InverseTemperature, SpinBosonClosedForm,
};
use crate::error::{Error, Result};
use crate::measures::{blp_measure, find_negative_rate_intervals, rhp_measure};
use crate::numerics::roots::brent;
use crate::oracle::discretize_bath;
use crate::photonic::{photonic_z, PhotonicModel};
use crate::qdmat::{trace_distance, DensityMatrix2};
use crate::qrt::{qrt_generator_check, z_closed_spinboson, z_estimator};
use crate::spectral::{LorentzianMixture, OhmicFamilySpectralDensity};

/// One named check: its largest observed residual against the tolerance it
/// must meet.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckResult {
    fn new(name: &'static str, max_residual: f64, tolerance: f64) -> Self {
        CheckResult {
            name,
            max_residual,
            tolerance,
            pass: max_residual.is_finite() && max_residual <= tolerance,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub checks: Vec<CheckResult>,
    pub all_pass: bool,
}

/// Parameters of the suite; `Default` gives the λ=1, s=3, Ω=1 model.
#[derive(Debug, Clone, Copy)]
pub struct CheckParams {
    pub lambda: f64,
    pub s: f64,
    pub omega_c: f64,
    /// Finite inverse temperature for the thermal cross-checks.
    pub beta: f64,
    /// Mode count of the discretized-bath checks.
    pub oracle_modes: usize,
}

impl Default for CheckParams {
    fn default() -> Self {
        CheckParams {
            lambda: 1.0,
            s: 3.0,
            omega_c: 1.0,
            beta: 2.0,
            oracle_modes: 2048,
        }
    }
}

/// Run the full suite. Requires s ≥ 1 so the closed-form backend exists.
pub fn run_invariant_suite(params: &CheckParams) -> Result<CheckReport> {
    let sd = OhmicFamilySpectralDensity::new(params.lambda, params.s, params.omega_c)?;
    if params.s < 1.0 {
        return Err(Error::UnsupportedExponent { s: params.s });
    }
    let omega = params.omega_c;
    let model = SpinBosonClosedForm::new(sd, 0.0)?;
    let beta = InverseTemperature::finite(params.beta)?;
    let zero_t = InverseTemperature::ZeroTemperature;
    let mut checks = Vec::new();

    // 1. The two algebraic forms of the rate agree on a 200-point grid for
    //    six exponents.
    {
        let mut worst = 0.0_f64;
        for s in [1.5, 2.0, 3.0, 3.5, 4.0, 5.5] {
            let sd_s = OhmicFamilySpectralDensity::new(params.lambda, s, omega)?;
            let scale = params.lambda * omega * crate::numerics::special::gamma(s);
            for i in 0..200 {
                let t = 20.0 * i as f64 / 199.0 / omega;
                let a = dephasing_rate_closed(&sd_s, t);
                let b = dephasing_rate_closed_compact(&sd_s, t);
                worst = worst.max((a - b).abs() / a.abs().max(b.abs()).max(1e-3 * scale));
            }
        }
        checks.push(CheckResult::new("rate_form_identity", worst, 1e-12));
    }

    // 2. 𝒟(t) = -d ln|γ(t)|/dt by central differences at step 1e-5.
    {
        let h = 1e-5 / omega;
        let mut worst = 0.0_f64;
        for i in 1..=20 {
            let t = 0.5 * i as f64 / omega;
            let fd = -(decoherence_closed(&sd, t + h)?.ln() - decoherence_closed(&sd, t - h)?.ln())
                / (2.0 * h);
            worst = worst.max((fd - dephasing_rate_closed(&sd, t)).abs() / omega);
        }
        checks.push(CheckResult::new(
            "rate_is_gamma_log_derivative",
            worst,
            1e-5,
        ));
    }

    // 3/4. Quadrature vs closed forms at zero temperature.
    {
        let mut worst_gamma = 0.0_f64;
        let mut worst_rate = 0.0_f64;
        for i in 0..=10 {
            let t = i as f64 / omega;
            let gq = decoherence_quadrature(&sd, zero_t, t)?;
            let gc = decoherence_closed(&sd, t)?;
            worst_gamma = worst_gamma.max((gq - gc).abs() / gc);
            let rq = dephasing_rate_quadrature(&sd, zero_t, t)?;
            let rc = dephasing_rate_closed(&sd, t);
            worst_rate = worst_rate.max((rq - rc).abs() / (params.lambda * omega * omega));
        }
        checks.push(CheckResult::new(
            "gamma_quadrature_vs_closed",
            worst_gamma,
            1e-6,
        ));
        checks.push(CheckResult::new(
            "rate_quadrature_vs_closed",
            worst_rate,
            1e-6,
        ));
    }

    // 5. β = 1e6 quadrature as a proxy for the zero-temperature limit.
    {
        let proxy = InverseTemperature::finite(1e6)?;
        let mut worst = 0.0_f64;
        for &t in &[0.5, 2.0, 8.0] {
            let gq = decoherence_quadrature(&sd, proxy, t / omega)?;
            let gc = decoherence_closed(&sd, t / omega)?;
            worst = worst.max((gq - gc).abs() / gc);
        }
        checks.push(CheckResult::new("large_beta_proxy_vs_closed", worst, 1e-6));
    }

    // 6. Zeros of 𝒟_s against tan(kπ/s)/Ω.
    {
        let mut worst = 0.0_f64;
        for s in [3.0, 4.0, 5.0, 5.5] {
            let sd_s = OhmicFamilySpectralDensity::new(params.lambda, s, omega)?;
            let mut k = 1;
            while std::f64::consts::PI * k as f64 / s < std::f64::consts::FRAC_PI_2 {
                let expected = (std::f64::consts::PI * k as f64 / s).tan() / omega;
                let root = brent(
                    |t| dephasing_rate_closed(&sd_s, t),
                    expected - 0.2 / omega,
                    expected + 0.2 / omega,
                    1e-13 / omega,
                )?;
                worst = worst.max((root - expected).abs() * omega);
                k += 1;
            }
        }
        checks.push(CheckResult::new(
            "rate_zeros_vs_arctan_formula",
            worst,
            1e-10,
        ));
    }

    // 7. Measures from generic interval detection vs the s = 3, 4 closed
    //    forms.
    {
        let mut worst = 0.0_f64;
        for &lambda in &[0.25_f64, 0.5, 1.0, 2.0] {
            for (s, blp_exact, rhp_exact) in [
                (
                    3.0,
                    (-lambda).exp() - (-9.0 * lambda / 8.0).exp(),
                    lambda / 8.0,
                ),
                (
                    4.0,
                    (-2.0 * lambda).exp() - (-2.5 * lambda).exp(),
                    lambda / 2.0,
                ),
            ] {
                let sd_s = OhmicFamilySpectralDensity::new(lambda, s, omega)?;
                let m = SpinBosonClosedForm::new(sd_s, 0.0)?;
                let set = find_negative_rate_intervals(&m, 50.0 / omega)?;
                worst = worst.max((blp_measure(&m, &set).value - blp_exact).abs());
                worst = worst.max((rhp_measure(&m, &set).value - rhp_exact).abs());
            }
        }
        checks.push(CheckResult::new("measures_vs_closed_forms", worst, 1e-8));
    }

    // 8-11. Discretized bath against closed forms and its own
    //       time-translation identity.
    {
        let bath = discretize_bath(&sd, zero_t, params.oracle_modes, 40.0 * sd.omega_c())?;
        let (t1, t2) = (1.0 / omega, 2.0 / omega);
        let mut worst_gamma = 0.0_f64;
        for &t in &[t1, 3.0_f64.sqrt() / omega, t2, 5.0 / omega] {
            let exact = decoherence_closed(&sd, t)?;
            worst_gamma = worst_gamma.max((bath.gamma(t) - exact).abs() / exact);
        }
        checks.push(CheckResult::new(
            "oracle_gamma_vs_closed",
            worst_gamma,
            1e-6,
        ));

        let (g21, phi) = bath.two_time(t1, t2);
        let phi_residual = (phi - phase_phi(&sd, t1, t2)?).abs();
        checks.push(CheckResult::new(
            "oracle_phase_vs_closed",
            phi_residual,
            1e-6,
        ));

        let z_residual = if sd.s() > 1.0 {
            (bath.z(t1, t2)? - z_closed_spinboson(&sd, t1, t2)?).abs()
        } else {
            0.0
        };
        checks.push(CheckResult::new("oracle_z_vs_closed", z_residual, 1e-6));

        let tt_residual = ((g21 - bath.gamma(t2 - t1)) / bath.gamma(t2 - t1)).abs();
        checks.push(CheckResult::new(
            "oracle_time_translation",
            tt_residual,
            1e-12,
        ));
    }

    // 12. Finite-temperature path: bath vs quadrature, both coth-weighted.
    {
        let bath = discretize_bath(&sd, beta, params.oracle_modes, 40.0 * sd.omega_c())?;
        let mut worst = 0.0_f64;
        for &t in &[0.5 / omega, 1.0 / omega, 3.0 / omega] {
            let gq = decoherence_quadrature(&sd, beta, t)?;
            worst = worst.max((bath.gamma(t) - gq).abs() / gq);
        }
        checks.push(CheckResult::new(
            "oracle_finite_beta_vs_quadrature",
            worst,
            1e-6,
        ));
    }

    // 13. Master-equation trajectory vs the analytic map.
    {
        let rho0 = DensityMatrix2::psi_plus();
        let grid: Vec<f64> = (0..=20).map(|i| 0.25 * i as f64 / omega).collect();
        let traj = integrate_master_equation(&model, &rho0, &grid)?;
        let mut worst = 0.0_f64;
        for (state, &t) in traj.iter().zip(&grid) {
            let expected = rho0.dephase_evolve(model.gamma(t), model.omega_s(), t)?;
            worst = worst.max((state.rho01() - expected.rho01()).norm());
            worst = worst.max((state.rho00() - expected.rho00()).abs());
        }
        checks.push(CheckResult::new(
            "master_equation_vs_analytic_map",
            worst,
            1e-8,
        ));
    }

    // 14. Regression correlator obeys its own equation of motion.
    {
        let rho0 = DensityMatrix2::diagonal(0.5)?;
        let grid: Vec<f64> = (1..=50).map(|i| 0.1 * i as f64 / omega).collect();
        let residual = qrt_generator_check(&model, &rho0, 0.1 / omega, &grid, 1e-5 / omega)?;
        checks.push(CheckResult::new("qrt_generator_residual", residual, 1e-5));
    }

    // 15. Z assembled from γ and φ vs the closed-form estimator.
    {
        let mut worst = 0.0_f64;
        if sd.s() > 1.0 {
            for &(t1, t2) in &[(0.5, 1.5), (1.0, 2.0), (2.0, 6.0)] {
                let (t1, t2) = (t1 / omega, t2 / omega);
                let za = z_estimator(&model, t1, t2)?;
                let zb = z_closed_spinboson(&sd, t1, t2)?;
                worst = worst.max((za - zb).abs() / (1.0 + zb));
            }
        }
        checks.push(CheckResult::new("z_estimator_vs_closed", worst, 1e-10));
    }

    // 16. Semigroup photonic model satisfies the regression theorem.
    {
        let semi = PhotonicModel::new(LorentzianMixture::single(1.0, 1.0, 1.0)?);
        let mut worst = 0.0_f64;
        for i in 1..=50 {
            let t1 = 0.1 * i as f64;
            worst = worst.max(photonic_z(&semi, t1, t1 + 1.3)?);
        }
        checks.push(CheckResult::new("semigroup_z_identity", worst, 1e-12));
    }

    // 17. Evolved-pair trace distance: closed form vs eigenvalue route.
    {
        let a0 = DensityMatrix2::from_bloch(0.6, 0.2, 0.4)?;
        let b0 = DensityMatrix2::from_bloch(-0.3, 0.5, -0.6)?;
        let mut worst = 0.0_f64;
        for &t in &[0.3, 1.0, 4.0] {
            let g = model.gamma(t / omega);
            let a = a0.dephase_evolve(g, 0.0, t)?;
            let b = b0.dephase_evolve(g, 0.0, t)?;
            let dp = a0.rho00() - b0.rho00();
            let dc = (a0.rho01() - b0.rho01()).norm();
            let closed = (dp * dp + dc * dc * g.norm_sqr()).sqrt();
            worst = worst.max((trace_distance(&a, &b) - closed).abs());
        }
        checks.push(CheckResult::new(
            "trace_distance_formula_vs_eigen",
            worst,
            1e-12,
        ));
    }

    let all_pass = checks.iter().all(|c| c.pass);
    Ok(CheckReport { checks, all_pass })
}

/// Negative control used by tests: a backend whose reported rate is
/// deliberately inconsistent with its γ.
#[doc(hidden)]
pub struct CorruptedGammaModel(pub SpinBosonClosedForm);

impl DephasingModel for CorruptedGammaModel {
    fn omega_s(&self) -> f64 {
        self.0.omega_s()
    }

    fn timescale(&self) -> f64 {
        self.0.timescale()
    }

    fn gamma(&self, t: f64) -> Complex64 {
        self.0.gamma(t)
    }

    fn dephasing_rate(&self, t: f64) -> f64 {
        // Wrong by a factor two.
        2.0 * self.0.dephasing_rate(t)
    }

    fn two_time(&self, t1: f64, t2: f64) -> Result<crate::dephasing::TwoTimeFactors> {
        self.0.two_time(t1, t2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes_and_is_complete() {
        let report = run_invariant_suite(&CheckParams::default()).unwrap();
        assert!(report.checks.len() >= 10);
        for check in &report.checks {
            assert!(
                check.pass,
                "{} failed: residual {} > {}",
                check.name, check.max_residual, check.tolerance
            );
        }
        assert!(report.all_pass);
    }

    #[test]
    fn corrupted_backend_fails_generator_check() {
        let sd = OhmicFamilySpectralDensity::new(1.0, 3.0, 1.0).unwrap();
        let good = SpinBosonClosedForm::new(sd, 0.0).unwrap();
        let bad = CorruptedGammaModel(good);
        let rho0 = DensityMatrix2::diagonal(0.5).unwrap();
        let grid: Vec<f64> = (1..=50).map(|i| 0.1 * i as f64).collect();
        let good_res = qrt_generator_check(&good, &rho0, 0.1, &grid, 1e-5).unwrap();
        let bad_res = qrt_generator_check(&bad, &rho0, 0.1, &grid, 1e-5).unwrap();
        assert!(good_res < 1e-5);
        assert!(bad_res > 1e-2, "corrupted residual {bad_res}");
    }

    #[test]
    fn suite_rejects_sub_ohmic_exponent() {
        let params = CheckParams {
            s: 0.5,
            ..CheckParams::default()
        };
        assert!(run_invariant_suite(&params).is_err());
    }
}
