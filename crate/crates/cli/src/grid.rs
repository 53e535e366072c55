//! Sweep axes: `name:min:max:count:lin|log`.

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone)]
pub struct GridAxis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl GridAxis {
    pub fn linear(name: &str, min: f64, max: f64, count: usize) -> Self {
        GridAxis {
            name: name.into(),
            min,
            max,
            count,
            spacing: Spacing::Linear,
        }
    }

    pub fn log(name: &str, min: f64, max: f64, count: usize) -> Self {
        GridAxis {
            name: name.into(),
            min,
            max,
            count,
            spacing: Spacing::Log,
        }
    }

    pub fn parse(spec: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 5 {
            return Err(CliError::Usage(format!(
                "grid `{spec}`: expected name:min:max:count:lin|log"
            )));
        }
        let num = |field: &str, what: &str| -> Result<f64, CliError> {
            field
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("grid `{spec}`: bad {what} `{field}`")))
        };
        let min = num(parts[1], "min")?;
        let max = num(parts[2], "max")?;
        let count: usize = parts[3]
            .parse()
            .map_err(|_| CliError::Usage(format!("grid `{spec}`: bad count `{}`", parts[3])))?;
        let spacing = match parts[4] {
            "lin" => Spacing::Linear,
            "log" => Spacing::Log,
            other => {
                return Err(CliError::Usage(format!(
                    "grid `{spec}`: spacing must be lin or log, got `{other}`"
                )))
            }
        };
        let axis = GridAxis {
            name: parts[0].to_string(),
            min,
            max,
            count,
            spacing,
        };
        axis.validate()?;
        Ok(axis)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.count < 2 {
            return Err(CliError::Usage(format!(
                "axis `{}`: count must be at least 2",
                self.name
            )));
        }
        if self.min.is_nan() || self.max.is_nan() || self.min >= self.max {
            return Err(CliError::Usage(format!(
                "axis `{}`: min must be below max",
                self.name
            )));
        }
        if self.spacing == Spacing::Log && self.min <= 0.0 {
            return Err(CliError::Usage(format!(
                "axis `{}`: log spacing needs min > 0",
                self.name
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        match self.spacing {
            Spacing::Linear => (0..n)
                .map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64)
                .collect(),
            Spacing::Log => {
                let (lo, hi) = (self.min.ln(), self.max.ln());
                (0..n)
                    .map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp())
                    .collect()
            }
        }
    }

    pub fn describe(&self) -> String {
        format!(
            "{}:{}:{}:{}:{}",
            self.name,
            self.min,
            self.max,
            self.count,
            match self.spacing {
                Spacing::Linear => "lin",
                Spacing::Log => "log",
            }
        )
    }
}

/// Pull the axis named `name` out of user-supplied `--grid` flags, falling
/// back to the given default.
pub fn axis_or_default(
    user: &[GridAxis],
    name: &str,
    default: GridAxis,
) -> Result<GridAxis, CliError> {
    for axis in user {
        if axis.name == name {
            return Ok(axis.clone());
        }
    }
    Ok(default)
}

/// Reject `--grid` axes whose names none of the defaults use.
pub fn reject_unknown_axes(user: &[GridAxis], known: &[&str]) -> Result<(), CliError> {
    for axis in user {
        if !known.contains(&axis.name.as_str()) {
            return Err(CliError::Usage(format!(
                "unknown grid axis `{}` (expected one of: {})",
                axis.name,
                known.join(", ")
            )));
        }
    }
    Ok(())
}
