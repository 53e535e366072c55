//! The five subcommands. All physics goes through library calls; this
//! module only assembles grids, rows and metadata.

use std::path::PathBuf;

use rayon::prelude::*;

use qregress::dephasing::{
    DephasingModel, InverseTemperature, SpinBosonClosedForm, SpinBosonQuadrature,
};
use qregress::measures::{
    blp_measure, find_negative_rate_intervals, rhp_measure, DEFAULT_HORIZON_FACTOR,
};
use qregress::numerics::gauss::GaussLegendre;
use qregress::oracle::discretize_bath_with_rule;
use qregress::photonic::{photonic_z, PhotonicModel};
use qregress::qrt::{z_closed_spinboson, z_estimator};
use qregress::report::{run_invariant_suite, CheckParams};
use qregress::spectral::LorentzianMixture;
use qregress::{Error, OhmicFamilySpectralDensity};

use crate::config::{spectral_density, MixtureConfig, OhmicConfig};
use crate::grid::{axis_or_default, reject_unknown_axes, GridAxis};
use crate::output::{Cell, Format, Table};
use crate::CliError;

/// Quantities a sweep may emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Blp,
    Rhp,
    Gamma,
    Rate,
    Z,
    Entropy,
}

impl Quantity {
    pub const ALL: [Quantity; 6] = [
        Quantity::Blp,
        Quantity::Rhp,
        Quantity::Gamma,
        Quantity::Rate,
        Quantity::Z,
        Quantity::Entropy,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Quantity::Blp => "blp",
            Quantity::Rhp => "rhp",
            Quantity::Gamma => "gamma",
            Quantity::Rate => "rate",
            Quantity::Z => "z",
            Quantity::Entropy => "entropy",
        }
    }

    fn valid_for(&self, kind: ModelKind) -> bool {
        match self {
            // The total-state entanglement witness is defined for the
            // photonic (pure environment state) model only.
            Quantity::Entropy => kind == ModelKind::Mixture,
            _ => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Ohmic,
    Mixture,
}

/// A validated sweep: model, axes, outputs and destination.
#[derive(Debug)]
pub struct SweepSpec {
    pub kind: ModelKind,
    pub model_desc: String,
    pub axes: Vec<GridAxis>,
    pub quantities: Vec<Quantity>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        for axis in &self.axes {
            axis.validate()?;
        }
        for q in &self.quantities {
            if !q.valid_for(self.kind) {
                let supported: Vec<&str> = Quantity::ALL
                    .iter()
                    .filter(|q| q.valid_for(self.kind))
                    .map(Quantity::name)
                    .collect();
                return Err(CliError::Usage(format!(
                    "quantity `{}` is not defined for the {:?} backend (supported: {})",
                    q.name(),
                    self.kind,
                    supported.join(", ")
                )));
            }
        }
        Ok(())
    }

    fn annotate(&self, table: &mut Table, command: &str) {
        table.meta("tool", format!("qregress {}", env!("CARGO_PKG_VERSION")));
        table.meta("command", command);
        table.meta("model", &self.model_desc);
        for axis in &self.axes {
            table.meta("grid", axis.describe());
        }
        table.meta(
            "quantities",
            self.quantities
                .iter()
                .map(Quantity::name)
                .collect::<Vec<_>>()
                .join(","),
        );
    }
}

fn numerical(e: Error) -> CliError {
    CliError::Numerical(e.to_string())
}

/// Closed forms when available (T = 0, s ≥ 1), quadrature otherwise.
fn build_ohmic_model(
    sd: OhmicFamilySpectralDensity,
    beta: Option<f64>,
    omega_s: f64,
) -> Result<Box<dyn DephasingModel>, CliError> {
    match beta {
        Some(b) => {
            let beta = InverseTemperature::finite(b).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(Box::new(SpinBosonQuadrature::new(sd, beta, omega_s)))
        }
        None if sd.s() >= 1.0 => Ok(Box::new(
            SpinBosonClosedForm::new(sd, omega_s).map_err(|e| CliError::Usage(e.to_string()))?,
        )),
        None => Ok(Box::new(SpinBosonQuadrature::new(
            sd,
            InverseTemperature::ZeroTemperature,
            omega_s,
        ))),
    }
}

fn ohmic_desc(cfg: &OhmicConfig) -> String {
    match cfg.beta {
        Some(b) => format!(
            "ohmic lambda={} s={} omega={} beta={b}",
            cfg.lambda, cfg.s, cfg.omega
        ),
        None => format!(
            "ohmic lambda={} s={} omega={} beta=inf",
            cfg.lambda, cfg.s, cfg.omega
        ),
    }
}

/// Sweep variant: λ and s come from the grid, not the base config.
fn ohmic_sweep_desc(cfg: &OhmicConfig) -> String {
    match cfg.beta {
        Some(b) => format!("ohmic omega={} beta={b} (lambda, s from grid)", cfg.omega),
        None => format!("ohmic omega={} beta=inf (lambda, s from grid)", cfg.omega),
    }
}

/// `measures`: CSV of (lambda, s, blp, rhp) over the coupling/exponent grid.
pub fn cmd_measures(
    cfg: OhmicConfig,
    grids: Vec<GridAxis>,
    out: Option<PathBuf>,
    format: Format,
) -> Result<(), CliError> {
    reject_unknown_axes(&grids, &["lambda", "s"])?;
    let lambda_axis = axis_or_default(&grids, "lambda", GridAxis::log("lambda", 0.01, 3.0, 100))?;
    let s_axis = axis_or_default(&grids, "s", GridAxis::linear("s", 3.0, 5.5, 6))?;
    let spec = SweepSpec {
        kind: ModelKind::Ohmic,
        model_desc: ohmic_sweep_desc(&cfg),
        axes: vec![lambda_axis.clone(), s_axis.clone()],
        quantities: vec![Quantity::Blp, Quantity::Rhp],
        out,
        format,
    };
    spec.validate()?;

    let horizon = DEFAULT_HORIZON_FACTOR / cfg.omega;
    let lambdas = lambda_axis.values();
    let mut rows: Vec<Vec<Cell>> = Vec::new();
    let mut any_truncated = false;
    for s in s_axis.values() {
        // Zeros of 𝒟 are λ-independent (J is linear in λ), so the interval
        // detection runs once per exponent.
        let probe = build_ohmic_model(spectral_density(1.0, s, cfg.omega)?, cfg.beta, 0.0)?;
        let intervals = find_negative_rate_intervals(probe.as_ref(), horizon).map_err(numerical)?;
        let results: Vec<(f64, f64, bool)> = lambdas
            .par_iter()
            .map(|&lambda| {
                if lambda == 0.0 {
                    // Decoupled limit: γ ≡ 1, both measures vanish exactly.
                    return Ok((0.0, 0.0, false));
                }
                let model =
                    build_ohmic_model(spectral_density(lambda, s, cfg.omega)?, cfg.beta, 0.0)?;
                let blp = blp_measure(model.as_ref(), &intervals);
                let rhp = rhp_measure(model.as_ref(), &intervals);
                Ok((blp.value, rhp.value, blp.truncated || rhp.truncated))
            })
            .collect::<Result<_, CliError>>()?;
        for (&lambda, &(blp, rhp, truncated)) in lambdas.iter().zip(&results) {
            any_truncated |= truncated;
            rows.push(vec![lambda.into(), s.into(), blp.into(), rhp.into()]);
        }
    }

    let mut table = Table::new(vec!["lambda", "s", "blp", "rhp"]);
    spec.annotate(&mut table, "measures");
    table.meta("horizon", horizon);
    if any_truncated {
        table.meta(
            "note",
            "open-ended intervals truncated at the horizon (no analytic tail for this backend)",
        );
    }
    table.rows = rows;
    table.emit(spec.out.as_deref(), spec.format)
}

/// `qrt`: CSV of (lambda, s, z) at fixed t1, t2; optional oracle column.
#[allow(clippy::too_many_arguments)]
pub fn cmd_qrt(
    cfg: OhmicConfig,
    grids: Vec<GridAxis>,
    t1: Option<f64>,
    t2: Option<f64>,
    oracle_check: bool,
    modes: usize,
    out: Option<PathBuf>,
    format: Format,
) -> Result<(), CliError> {
    if cfg.beta.is_some() {
        return Err(CliError::Usage(
            "qrt requires the zero-temperature backend; drop --beta".into(),
        ));
    }
    reject_unknown_axes(&grids, &["lambda", "s"])?;
    let lambda_axis =
        axis_or_default(&grids, "lambda", GridAxis::linear("lambda", 0.05, 5.0, 100))?;
    let s_axis = axis_or_default(&grids, "s", GridAxis::linear("s", 2.0, 4.0, 3))?;
    for s in s_axis.values() {
        if s <= 1.0 {
            return Err(CliError::Usage(format!(
                "qrt needs s > 1 (closed-form two-time phase); grid contains s = {s}"
            )));
        }
    }
    let t1 = t1.unwrap_or(1.0 / cfg.omega);
    let t2 = t2.unwrap_or(2.0 / cfg.omega);
    if !(0.0 <= t1 && t1 <= t2) {
        return Err(CliError::Usage(format!(
            "need 0 <= t1 <= t2, got t1={t1} t2={t2}"
        )));
    }
    let spec = SweepSpec {
        kind: ModelKind::Ohmic,
        model_desc: ohmic_sweep_desc(&cfg),
        axes: vec![lambda_axis.clone(), s_axis.clone()],
        quantities: vec![Quantity::Z],
        out,
        format,
    };
    spec.validate()?;

    let rule = oracle_check.then(|| GaussLegendre::new(modes));
    let lambdas = lambda_axis.values();
    let mut rows = Vec::new();
    for s in s_axis.values() {
        let results: Vec<(f64, Option<f64>)> = lambdas
            .par_iter()
            .map(|&lambda| {
                if lambda == 0.0 {
                    // Decoupled limit: the regression theorem holds exactly.
                    return Ok((0.0, oracle_check.then_some(0.0)));
                }
                let sd = spectral_density(lambda, s, cfg.omega)?;
                let model = SpinBosonClosedForm::new(sd, 0.0)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                let z = z_estimator(&model, t1, t2).map_err(numerical)?;
                let z_oracle = match &rule {
                    Some(rule) => {
                        let bath = discretize_bath_with_rule(
                            rule,
                            &sd,
                            InverseTemperature::ZeroTemperature,
                            40.0 * cfg.omega,
                        )
                        .map_err(numerical)?;
                        Some(bath.z(t1, t2).map_err(numerical)?)
                    }
                    None => None,
                };
                Ok((z, z_oracle))
            })
            .collect::<Result<_, CliError>>()?;
        for (&lambda, (z, z_oracle)) in lambdas.iter().zip(results) {
            let mut row: Vec<Cell> = vec![lambda.into(), s.into(), z.into()];
            if let Some(zo) = z_oracle {
                row.push(zo.into());
            }
            rows.push(row);
        }
    }

    let columns = if oracle_check {
        vec!["lambda", "s", "z", "z_oracle"]
    } else {
        vec!["lambda", "s", "z"]
    };
    let mut table = Table::new(columns);
    spec.annotate(&mut table, "qrt");
    table.meta("t1", t1);
    table.meta("t2", t2);
    if oracle_check {
        table.meta("oracle_modes", modes);
    }
    table.rows = rows;
    table.emit(spec.out.as_deref(), spec.format)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhotonicPanel {
    /// Equal centers, r = 1: x-axis is the width difference Δδω.
    WidthSplit,
    /// Equal widths, r = 2: x-axis is the center distance Δω₀.
    CenterSplit,
}

/// `photonic`: Z over (x, tau) panels for the built-in two-Lorentzian
/// families, or over tau for a mixture from `--model-file`.
pub fn cmd_photonic(
    mixture: Option<MixtureConfig>,
    panel: PhotonicPanel,
    grids: Vec<GridAxis>,
    t1: Option<f64>,
    out: Option<PathBuf>,
    format: Format,
) -> Result<(), CliError> {
    let t1 = t1.unwrap_or(1.0);
    if let Some(cfg) = mixture {
        return photonic_custom(cfg, grids, t1, out, format);
    }

    let (x_name, x_default) = match panel {
        PhotonicPanel::WidthSplit => (
            "delta_delta_omega",
            GridAxis::linear("delta_delta_omega", 0.0, 5.0, 51),
        ),
        PhotonicPanel::CenterSplit => (
            "delta_omega0",
            GridAxis::linear("delta_omega0", 0.0, 10.0, 51),
        ),
    };
    reject_unknown_axes(&grids, &[x_name, "tau"])?;
    let x_axis = axis_or_default(&grids, x_name, x_default)?;
    let tau_axis = axis_or_default(&grids, "tau", GridAxis::linear("tau", 0.0, 10.0, 101))?;

    let build = |x: f64| -> Result<PhotonicModel, CliError> {
        let mixture = match panel {
            // Base width δω₂ = ω₀ = 1; δω₁ = δω₂ + Δδω.
            PhotonicPanel::WidthSplit => {
                LorentzianMixture::two_component(1.0, 1.0 + x, 1.0, 1.0, 1.0, 1.0)
            }
            // Common width δω = 1, centers ±Δω₀/2, r = 2.
            PhotonicPanel::CenterSplit => {
                LorentzianMixture::two_component(0.5 * x, 1.0, -0.5 * x, 1.0, 2.0, 1.0)
            }
        };
        Ok(PhotonicModel::new(
            mixture.map_err(|e| CliError::Usage(e.to_string()))?,
        ))
    };

    let spec = SweepSpec {
        kind: ModelKind::Mixture,
        model_desc: match panel {
            PhotonicPanel::WidthSplit => {
                "two lorentzians, equal centers omega0=1, base width 1, r=1, delta_n=1".to_string()
            }
            PhotonicPanel::CenterSplit => {
                "two lorentzians, equal widths delta_omega=1, centers ±delta_omega0/2, r=2, delta_n=1"
                    .to_string()
            }
        },
        axes: vec![x_axis.clone(), tau_axis.clone()],
        quantities: match panel {
            PhotonicPanel::WidthSplit => vec![Quantity::Z],
            PhotonicPanel::CenterSplit => vec![Quantity::Z, Quantity::Blp],
        },
        out,
        format,
    };
    spec.validate()?;

    let taus = tau_axis.values();
    let mut rows = Vec::new();
    for &x in &x_axis.values() {
        let model = build(x)?;
        // BLP depends on the mixture only; computed once per x for panel b.
        let blp = match panel {
            PhotonicPanel::CenterSplit => {
                let set = find_negative_rate_intervals(&model, 40.0 / model.delta_n().abs())
                    .map_err(numerical)?;
                Some(blp_measure(&model, &set).value)
            }
            PhotonicPanel::WidthSplit => None,
        };
        let z_row: Vec<(f64, bool)> = taus
            .par_iter()
            .map(|&tau| match photonic_z(&model, t1, t1 + tau) {
                Ok(z) => (z, false),
                // |γ| ~ 0 singularities flag the row instead of aborting.
                Err(Error::IllConditioned { .. }) => (f64::NAN, true),
                Err(_) => (f64::NAN, true),
            })
            .collect();
        for (&tau, &(z, flagged)) in taus.iter().zip(&z_row) {
            let mut row: Vec<Cell> = vec![x.into(), tau.into(), z.into()];
            if let Some(blp) = blp {
                row.push(blp.into());
            }
            row.push(Cell::Int(u64::from(flagged)));
            rows.push(row);
        }
    }

    let columns = match panel {
        PhotonicPanel::WidthSplit => vec!["delta_delta_omega", "tau", "z", "flag"],
        PhotonicPanel::CenterSplit => vec!["delta_omega0", "tau", "z", "blp", "flag"],
    };
    let mut table = Table::new(columns);
    spec.annotate(
        &mut table,
        match panel {
            PhotonicPanel::WidthSplit => "photonic --panel a",
            PhotonicPanel::CenterSplit => "photonic --panel b",
        },
    );
    table.meta("t1", t1);
    table.rows = rows;
    table.emit(spec.out.as_deref(), spec.format)
}

fn photonic_custom(
    cfg: MixtureConfig,
    grids: Vec<GridAxis>,
    t1: f64,
    out: Option<PathBuf>,
    format: Format,
) -> Result<(), CliError> {
    reject_unknown_axes(&grids, &["tau"])?;
    let tau_axis = axis_or_default(&grids, "tau", GridAxis::linear("tau", 0.0, 10.0, 101))?;
    let mixture = cfg.build()?;
    let model = PhotonicModel::new(mixture);
    let spec = SweepSpec {
        kind: ModelKind::Mixture,
        model_desc: format!(
            "lorentzian mixture, {} components, delta_n={}",
            model.mixture().components().len(),
            model.delta_n()
        ),
        axes: vec![tau_axis.clone()],
        quantities: vec![Quantity::Z],
        out,
        format,
    };
    spec.validate()?;

    let rows: Vec<Vec<Cell>> = tau_axis
        .values()
        .par_iter()
        .map(|&tau| {
            let (z, flagged) = match photonic_z(&model, t1, t1 + tau) {
                Ok(z) => (z, false),
                Err(_) => (f64::NAN, true),
            };
            vec![tau.into(), z.into(), Cell::Int(u64::from(flagged))]
        })
        .collect();

    let mut table = Table::new(vec!["tau", "z", "flag"]);
    spec.annotate(&mut table, "photonic --model-file");
    table.meta("t1", t1);
    table.rows = rows;
    table.emit(spec.out.as_deref(), spec.format)
}

/// `check`: run the invariant suite, emit the JSON report, exit 3 on any
/// failure.
pub fn cmd_check(cfg: OhmicConfig, modes: usize, out: Option<PathBuf>) -> Result<(), CliError> {
    let params = CheckParams {
        lambda: cfg.lambda,
        s: cfg.s,
        omega_c: cfg.omega,
        beta: cfg.beta.unwrap_or(2.0),
        oracle_modes: modes,
    };
    let report = run_invariant_suite(&params).map_err(|e| CliError::Usage(e.to_string()))?;

    let checks: Vec<serde_json::Value> = report
        .checks
        .iter()
        .map(|c| {
            serde_json::json!({
                "name": c.name,
                "max_residual": c.max_residual,
                "tolerance": c.tolerance,
                "pass": c.pass,
            })
        })
        .collect();
    let doc = serde_json::json!({
        "tool": format!("qregress {}", env!("CARGO_PKG_VERSION")),
        "model": ohmic_desc(&cfg),
        "oracle_modes": modes,
        "checks": checks,
        "all_pass": report.all_pass,
    });
    let text =
        serde_json::to_string_pretty(&doc).map_err(|e| CliError::Numerical(e.to_string()))?;
    match out {
        Some(path) => std::fs::write(&path, text + "\n")
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    if report.all_pass {
        Ok(())
    } else {
        Err(CliError::CheckFailure)
    }
}

/// `oracle`: side-by-side closed-form vs discretized-bath values.
#[allow(clippy::too_many_arguments)]
pub fn cmd_oracle(
    cfg: OhmicConfig,
    grids: Vec<GridAxis>,
    t1: Option<f64>,
    t2: Option<f64>,
    modes: usize,
    omega_max_units: f64,
    out: Option<PathBuf>,
    format: Format,
) -> Result<(), CliError> {
    if cfg.beta.is_some() {
        return Err(CliError::Usage(
            "the oracle cross-check compares against zero-temperature closed forms; \
             drop --beta (the finite-temperature oracle path runs inside `check`)"
                .into(),
        ));
    }
    if cfg.s <= 1.0 {
        return Err(CliError::Usage(format!(
            "oracle cross-check needs s > 1 (closed-form phase), got s = {}",
            cfg.s
        )));
    }
    reject_unknown_axes(&grids, &["t2"])?;
    let t1 = t1.unwrap_or(1.0 / cfg.omega);
    let t2_values = match grids.iter().find(|a| a.name == "t2") {
        Some(axis) => axis.values(),
        None => vec![t2.unwrap_or(2.0 / cfg.omega)],
    };
    for &t2 in &t2_values {
        if t2 < t1 {
            return Err(CliError::Usage(format!("t2 = {t2} below t1 = {t1}")));
        }
    }

    let spec = SweepSpec {
        kind: ModelKind::Ohmic,
        model_desc: ohmic_desc(&cfg),
        axes: grids,
        quantities: vec![Quantity::Gamma, Quantity::Z],
        out,
        format,
    };
    spec.validate()?;

    let sd = spectral_density(cfg.lambda, cfg.s, cfg.omega)?;
    let omega_max = omega_max_units * cfg.omega;
    let bath = discretize_bath_with_rule(
        &GaussLegendre::new(modes),
        &sd,
        InverseTemperature::ZeroTemperature,
        omega_max,
    )
    .map_err(|e| CliError::Usage(e.to_string()))?;

    let rows: Vec<Vec<Cell>> = t2_values
        .iter()
        .map(|&t2| -> Result<Vec<Cell>, CliError> {
            let gamma_closed = qregress::decoherence_closed(&sd, t2 - t1).map_err(numerical)?;
            let phi_closed = qregress::phase_phi(&sd, t1, t2).map_err(numerical)?;
            let z_closed = z_closed_spinboson(&sd, t1, t2).map_err(numerical)?;
            let (gamma_oracle, phi_oracle) = bath.two_time(t1, t2);
            let z_oracle = bath.z(t1, t2).map_err(numerical)?;
            Ok(vec![
                t1.into(),
                t2.into(),
                gamma_closed.into(),
                gamma_oracle.into(),
                phi_closed.into(),
                phi_oracle.into(),
                z_closed.into(),
                z_oracle.into(),
            ])
        })
        .collect::<Result<_, _>>()?;

    let mut table = Table::new(vec![
        "t1",
        "t2",
        "gamma21_closed",
        "gamma21_oracle",
        "phi_closed",
        "phi_oracle",
        "z_closed",
        "z_oracle",
    ]);
    spec.annotate(&mut table, "oracle");
    table.meta("t1", t1);
    table.meta("oracle_modes", modes);
    table.meta("omega_max", omega_max);
    if let Some(tail) = bath.truncation_warning() {
        table.meta(
            "warning",
            format!("discretization window truncates {tail:.3e} of the spectral weight"),
        );
    }
    table.rows = rows;
    table.emit(spec.out.as_deref(), spec.format)
}
