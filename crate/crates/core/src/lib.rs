//! Exact dephasing dynamics of a qubit in a bosonic environment, the
//! trace-distance (BLP) and divisibility (RHP) non-Markovianity measures,
//! and a quantitative estimator of quantum-regression-theorem violations,
//! cross-validated by a discretized-bath brute-force oracle.

pub mod dephasing;
pub mod error;
pub mod measures;
pub mod numerics;
pub mod oracle;
pub mod photonic;
pub mod qdmat;
pub mod qrt;
pub mod report;
pub mod spectral;

pub use dephasing::{
    decoherence_closed, decoherence_quadrature, dephasing_rate_closed,
    dephasing_rate_closed_compact, dephasing_rate_quadrature, gamma_infinity_closed,
    integrate_master_equation, phase_phi, DephasingModel, InverseTemperature, SpinBosonClosedForm,
    SpinBosonQuadrature, TwoTimeFactors,
};
pub use error::{Error, Result};
pub use measures::{
    blp_measure, choi_g_numeric, find_negative_rate_intervals, rhp_measure, rhp_rate,
    trace_distance_evolution, MeasurePair, MeasureValue, SignIntervalSet,
};
pub use oracle::{discretize_bath, BathModeSet, OracleModel};
pub use photonic::{
    photonic_dephasing_rate, photonic_gamma, photonic_z, total_state_entanglement, PhotonicModel,
};
pub use qdmat::{trace_distance, DensityMatrix2, PauliBasisLabel};
pub use qrt::{
    corr_exact, corr_qrt, qrt_generator_check, z_closed_spinboson, z_estimator, PairCorrelation,
    TwoTimeCorrelation,
};
pub use spectral::{LorentzianComponent, LorentzianMixture, OhmicFamilySpectralDensity};
