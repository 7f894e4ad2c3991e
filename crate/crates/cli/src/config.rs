use std::fs;
use std::path::{Path, PathBuf};

use fracsum::econ::ModelParams;
use fracsum::operators::OperatorConfig;
use fracsum::transforms::{QuadratureConfig, QuadratureScheme};
use fracsum::Staircase;
use serde::Deserialize;

use crate::{CliError, Format, GlobalArgs, SchemeName, SupportName};

/// Contents of a `--config` file. Every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub support: Option<SupportName>,
    pub alpha: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub quadrature: Option<QuadratureConfig>,
    pub operator_panels: Option<usize>,
    pub params: Option<ModelParams>,
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
    pub steps: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
    }
}

/// Settings shared by every subcommand after merging flags over the file.
pub struct RunConfig {
    pub support: SupportName,
    pub staircase: Staircase,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub quadrature: QuadratureConfig,
    pub operator: OperatorConfig,
}

impl RunConfig {
    pub fn resolve(flags: &GlobalArgs, file: &FileConfig) -> Result<Self, CliError> {
        let support = flags.support.or(file.support).unwrap_or(SupportName::Line);
        if let Some(alpha) = flags.alpha.or(file.alpha) {
            if support != SupportName::Line {
                return Err(CliError::Invalid(
                    "--alpha is only valid with line support; the Cantor support fixes alpha = ln2/ln3".into(),
                ));
            }
            if alpha != 1.0 {
                return Err(CliError::Invalid(format!(
                    "the line support has alpha = 1, got {alpha}"
                )));
            }
        }
        let staircase = match support {
            SupportName::Line => Staircase::identity(),
            SupportName::Cantor => Staircase::cantor()?,
        };
        let mut quadrature = file.quadrature.unwrap_or_default();
        if let Some(p) = flags.panels {
            quadrature.panels = p;
        }
        if let Some(t) = flags.truncation_tail {
            quadrature.truncation_tail = t;
        }
        if let Some(s) = flags.scheme {
            quadrature.scheme = match s {
                SchemeName::Trapezoid => QuadratureScheme::TrapezoidInU,
                SchemeName::GaussLaguerre => QuadratureScheme::GaussLaguerreInU,
            };
        }
        quadrature.validate()?;
        let mut operator = OperatorConfig::default();
        if let Some(p) = flags.operator_panels.or(file.operator_panels) {
            if p < 16 {
                return Err(CliError::Invalid(format!(
                    "operator panels must be at least 16, got {p}"
                )));
            }
            operator.panels = p;
        }
        Ok(Self {
            support,
            staircase,
            format: flags.format.or(file.format).unwrap_or(Format::Csv),
            out: flags.out.clone().or_else(|| file.out.clone()),
            quadrature,
            operator,
        })
    }
}
