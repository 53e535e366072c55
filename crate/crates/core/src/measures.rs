//! Non-Markovianity measures built on a dephasing model.
//!
//! Both measures are controlled by the sign of the dephasing rate 𝒟(t):
//! over the union Ω₊ = ∪_m (a_m, b_m) of intervals with 𝒟 < 0 (equivalently
//! |γ| increasing),
//!
//!   BLP (trace-distance) measure  𝒩 = Σ_m (|γ(b_m)| - |γ(a_m)|),
//!   RHP (divisibility)   measure  ℐ = Σ_m (ln|γ(b_m)| - ln|γ(a_m)|),
//!
//! with the analytically optimal state pair |ψ±> hard-wired for the BLP
//! maximization. The instantaneous divisibility violation is also exposed
//! through the Choi matrix of the short-time propagator as an independent
//! numerical route to 𝔤(t) = max(0, -𝒟(t)).

use num_complex::Complex64;

use crate::dephasing::DephasingModel;
use crate::error::{Error, Result};
use crate::numerics::roots::brent;
use crate::qdmat::DensityMatrix2;

/// Scan resolution of the sign-change bracketing (horizon / SCAN_STEPS).
pub const SCAN_STEPS: usize = 4000;

/// Absolute tolerance on refined zeros of 𝒟.
pub const ROOT_TOL: f64 = 1e-12;

/// Default scan horizon in units of the model timescale.
pub const DEFAULT_HORIZON_FACTOR: f64 = 50.0;

/// Time intervals on which 𝒟(t) < 0. Finite endpoints are zeros of 𝒟
/// refined to [`ROOT_TOL`]; a last interval with `end == None` extends past
/// the horizon to infinity (tail sign taken at the horizon).
#[derive(Debug, Clone, PartialEq)]
pub struct SignIntervalSet {
    intervals: Vec<(f64, Option<f64>)>,
    horizon: f64,
    tail_ambiguous: bool,
}

impl SignIntervalSet {
    pub fn intervals(&self) -> &[(f64, Option<f64>)] {
        &self.intervals
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// True when the last interval extends beyond the horizon.
    pub fn tail_to_infinity(&self) -> bool {
        matches!(self.intervals.last(), Some((_, None)))
    }

    /// True when |𝒟(horizon)| sat within noise of zero and the tail sign
    /// could not be classified reliably.
    pub fn tail_ambiguous(&self) -> bool {
        self.tail_ambiguous
    }
}

/// Locate all sign changes of 𝒟 on (0, horizon] by a bracketing scan with
/// Brent refinement, and assemble the 𝒟 < 0 intervals.
pub fn find_negative_rate_intervals<M: DephasingModel + ?Sized>(
    model: &M,
    horizon: f64,
) -> Result<SignIntervalSet> {
    if horizon.is_nan() || horizon <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "horizon",
            value: horizon,
            reason: "horizon must be > 0",
        });
    }
    let step = horizon / SCAN_STEPS as f64;
    let rate = |t: f64| model.dephasing_rate(t);

    let mut zeros: Vec<f64> = Vec::new();
    let mut prev_t = step;
    let mut prev_v = rate(prev_t);
    let mut max_abs = prev_v.abs();
    let first_sign_negative = prev_v < 0.0;
    let mut last_v = prev_v;

    for i in 2..=SCAN_STEPS {
        let t = step * i as f64;
        let v = rate(t);
        max_abs = max_abs.max(v.abs());
        if prev_v * v < 0.0 {
            zeros.push(brent(rate, prev_t, t, ROOT_TOL)?);
        }
        prev_t = t;
        prev_v = v;
        last_v = v;
    }

    // Pair up zeros into 𝒟 < 0 stretches; the sign alternates across each
    // simple zero.
    let mut intervals = Vec::new();
    let mut negative = first_sign_negative;
    let mut open_start = negative.then_some(0.0);
    for &z in &zeros {
        if negative {
            let start = open_start.take().expect("negative stretch has a start");
            intervals.push((start, Some(z)));
        } else {
            open_start = Some(z);
        }
        negative = !negative;
    }
    if let Some(start) = open_start {
        intervals.push((start, None));
    }

    let tail_ambiguous = last_v.abs() <= 1e-12 * max_abs.max(f64::MIN_POSITIVE);
    Ok(SignIntervalSet {
        intervals,
        horizon,
        tail_ambiguous,
    })
}

/// A measure value together with a truncation flag: `truncated` is set when
/// an open-ended interval had to be cut at the horizon because the backend
/// has no analytic |γ(∞)|, or when the tail sign was ambiguous.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureValue {
    pub value: f64,
    pub truncated: bool,
}

/// Both measures of one model instance. For the pure-dephasing models here
/// blp = 0 exactly when rhp = 0 (single decay channel).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurePair {
    pub blp: f64,
    pub rhp: f64,
}

fn accumulate<M, F>(model: &M, intervals: &SignIntervalSet, f: F) -> MeasureValue
where
    M: DephasingModel + ?Sized,
    F: Fn(f64) -> f64,
{
    let mut value = 0.0;
    let mut truncated = intervals.tail_ambiguous();
    for &(a, b) in intervals.intervals() {
        let ga = model.gamma(a).norm();
        let gb = match b {
            Some(b) => model.gamma(b).norm(),
            None => match model.gamma_infinity() {
                Some(g) => g,
                None => {
                    truncated = true;
                    model.gamma(intervals.horizon()).norm()
                }
            },
        };
        value += f(gb) - f(ga);
    }
    MeasureValue { value, truncated }
}

/// BLP measure 𝒩 = Σ_m (|γ(b_m)| - |γ(a_m)|) over the 𝒟 < 0 intervals.
pub fn blp_measure<M: DephasingModel + ?Sized>(
    model: &M,
    intervals: &SignIntervalSet,
) -> MeasureValue {
    accumulate(model, intervals, |g| g)
}

/// RHP measure ℐ = Σ_m (ln|γ(b_m)| - ln|γ(a_m)|).
pub fn rhp_measure<M: DephasingModel + ?Sized>(
    model: &M,
    intervals: &SignIntervalSet,
) -> MeasureValue {
    accumulate(model, intervals, f64::ln)
}

/// Convenience wrapper computing both measures on the default horizon.
pub fn measure_pair<M: DephasingModel + ?Sized>(model: &M, horizon: f64) -> Result<MeasurePair> {
    let intervals = find_negative_rate_intervals(model, horizon)?;
    Ok(MeasurePair {
        blp: blp_measure(model, &intervals).value,
        rhp: rhp_measure(model, &intervals).value,
    })
}

/// Instantaneous divisibility-violation rate 𝔤(t) = max(0, -𝒟(t)).
pub fn rhp_rate<M: DephasingModel + ?Sized>(model: &M, t: f64) -> f64 {
    (-model.dephasing_rate(t)).max(0.0)
}

/// Choi matrix of the dephasing propagator with off-diagonal factor `c`:
/// nonzero entries 1, c, c*, 1 at the corners of the |00>,|11> block.
pub fn dephasing_choi(c: Complex64) -> [[Complex64; 4]; 4] {
    let mut m = [[Complex64::ZERO; 4]; 4];
    m[0][0] = Complex64::ONE;
    m[0][3] = c;
    m[3][0] = c.conj();
    m[3][3] = Complex64::ONE;
    m
}

/// Trace norm of a dephasing-propagator Choi matrix from its closed-form
/// eigenvalues {1 ± |c|, 0, 0}.
pub fn choi_trace_norm(choi: &[[Complex64; 4]; 4]) -> f64 {
    let c = choi[0][3].norm();
    (1.0 + c) + (1.0 - c).abs()
}

/// Numerical divisibility-violation rate from the Choi matrix of the
/// propagator over [t, t+ε]: (‖Choi‖₁/2 - 1)/ε. Converges to
/// [`rhp_rate`] as ε → 0.
pub fn choi_g_numeric<M: DephasingModel + ?Sized>(model: &M, t: f64, epsilon: f64) -> Result<f64> {
    let ts = model.timescale();
    if !(1e-6 * ts..=1e-3 * ts).contains(&epsilon) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            value: epsilon,
            reason: "step must lie in [1e-6, 1e-3] of the model timescale",
        });
    }
    let g_t = model.gamma(t);
    if g_t.norm() < 1e-14 {
        return Err(Error::IllConditioned {
            what: "propagator (|gamma(t)| ~ 0)",
            magnitude: g_t.norm(),
            limit: 1e-14,
        });
    }
    let c = model.gamma(t + epsilon) / g_t * Complex64::from_polar(1.0, -model.omega_s() * epsilon);
    let choi = dephasing_choi(c);
    Ok((choi_trace_norm(&choi) / 2.0 - 1.0) / epsilon)
}

/// Trace distance of two states evolved to time t:
/// sqrt(δ_p² + |δ_c|² |γ(t)|²); equals |γ(t)| for the optimal pair |ψ±>.
pub fn trace_distance_evolution<M: DephasingModel + ?Sized>(
    model: &M,
    rho1: &DensityMatrix2,
    rho2: &DensityMatrix2,
    t: f64,
) -> f64 {
    evolved_distance(rho1, rho2, model.gamma(t).norm())
}

fn evolved_distance(rho1: &DensityMatrix2, rho2: &DensityMatrix2, gamma_mag: f64) -> f64 {
    let dp = rho1.rho00() - rho2.rho00();
    let dc = rho1.rho01() - rho2.rho01();
    (dp * dp + dc.norm_sqr() * gamma_mag * gamma_mag).sqrt()
}

/// Cross-check of the hard-wired optimal pair: accumulate the trace-distance
/// rises over Ω₊ for antipodal pure-state pairs on a polar × azimuthal Bloch
/// grid and return the maximum. For dephasing dynamics the equatorial pairs
/// reproduce [`blp_measure`] exactly.
pub fn blp_bloch_grid_search<M: DephasingModel + ?Sized>(
    model: &M,
    intervals: &SignIntervalSet,
    n_polar: usize,
    n_azimuth: usize,
) -> f64 {
    let gamma_at = |b: Option<f64>| -> f64 {
        match b {
            Some(t) => model.gamma(t).norm(),
            None => model
                .gamma_infinity()
                .unwrap_or_else(|| model.gamma(intervals.horizon()).norm()),
        }
    };
    let mut best = 0.0_f64;
    for i in 0..n_polar {
        let theta = std::f64::consts::PI * i as f64 / (n_polar - 1) as f64;
        for j in 0..n_azimuth {
            let phi = std::f64::consts::TAU * j as f64 / n_azimuth as f64;
            let n = (
                theta.sin() * phi.cos(),
                theta.sin() * phi.sin(),
                theta.cos(),
            );
            let rho1 = DensityMatrix2::from_bloch(n.0, n.1, n.2).expect("unit Bloch vector");
            let rho2 = DensityMatrix2::from_bloch(-n.0, -n.1, -n.2).expect("unit Bloch vector");
            let mut rise = 0.0;
            for &(a, b) in intervals.intervals() {
                rise += evolved_distance(&rho1, &rho2, gamma_at(b))
                    - evolved_distance(&rho1, &rho2, gamma_at(Some(a)));
            }
            best = best.max(rise);
        }
    }
    best
}
