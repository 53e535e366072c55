//! TOML model files and model construction.
//!
//! ```toml
//! [model.ohmic]
//! lambda = 1.0
//! s = 3.0
//! omega = 1.0
//! # beta = 2.0        # optional: finite temperature
//!
//! # -- or --
//! [model.lorentzian_mixture]
//! delta_n = 1.0
//! [[model.lorentzian_mixture.components]]
//! A = 0.5
//! omega0 = 1.0
//! delta_omega = 0.5
//! ```
//!
//! Command-line flags override file values.

use serde::Deserialize;

use qregress::{LorentzianComponent, LorentzianMixture, OhmicFamilySpectralDensity};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub model: ModelSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub ohmic: Option<OhmicConfig>,
    pub lorentzian_mixture: Option<MixtureConfig>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OhmicConfig {
    pub lambda: f64,
    pub s: f64,
    pub omega: f64,
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureConfig {
    pub delta_n: f64,
    pub components: Vec<ComponentConfig>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentConfig {
    #[serde(rename = "A")]
    pub a: f64,
    pub omega0: f64,
    pub delta_omega: f64,
}

pub fn load_model_file(path: &std::path::Path) -> Result<ModelSection, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let file: ModelFile =
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    if file.model.ohmic.is_some() == file.model.lorentzian_mixture.is_some() {
        return Err(CliError::Usage(format!(
            "{}: the model block must name exactly one of `ohmic` or `lorentzian_mixture`",
            path.display()
        )));
    }
    Ok(file.model)
}

impl MixtureConfig {
    pub fn build(&self) -> Result<LorentzianMixture, CliError> {
        let components = self
            .components
            .iter()
            .map(|c| LorentzianComponent::new(c.a, c.omega0, c.delta_omega))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        LorentzianMixture::new(components, self.delta_n).map_err(|e| CliError::Usage(e.to_string()))
    }
}

pub fn spectral_density(
    lambda: f64,
    s: f64,
    omega: f64,
) -> Result<OhmicFamilySpectralDensity, CliError> {
    OhmicFamilySpectralDensity::new(lambda, s, omega).map_err(|e| CliError::Usage(e.to_string()))
}
