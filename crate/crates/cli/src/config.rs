//! Run configuration: a TOML file with `[geometry]`, `[radio]`,
//! `[experiment]` and `[output]` blocks.

use nearfield::geometry::ArrayGeometry;
use nearfield::mimo_los::{BandwidthRule, GainModel, RadioParams};
use nearfield::regions::boundary_distances;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::units::{Length, LengthContext};
use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: Option<GeometryConfig>,
    pub radio: Option<RadioConfig>,
    pub experiment: Option<toml::Table>,
    pub output: Option<OutputConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub rows: usize,
    pub cols: usize,
    pub element_side: Option<Length>,
    pub element_diagonal: Option<Length>,
    pub frequency_hz: Option<f64>,
    pub wavelength: Option<Length>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioConfig {
    pub carrier_frequency_hz: Option<f64>,
    pub p_over_n0_db: f64,
    pub bandwidth_hz: Option<f64>,
    pub bandwidth_fraction: Option<f64>,
    #[serde(default)]
    pub tx_gain: GainKind,
    #[serde(default)]
    pub rx_gain: GainKind,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GainKind {
    #[default]
    Isotropic,
    Directive,
}

impl From<GainKind> for GainModel {
    fn from(g: GainKind) -> Self {
        match g {
            GainKind::Isotropic => GainModel::Isotropic,
            GainKind::Directive => GainModel::Directive,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<String>,
}

/// A resolved geometry with its unit context.
#[derive(Debug, Clone, Copy)]
pub struct Scene {
    pub geometry: ArrayGeometry,
    pub ctx: LengthContext,
}

impl Scene {
    pub fn len(&self, l: &Length, field: &str) -> Result<f64, CliError> {
        l.resolve(&self.ctx).map_err(|e| CliError::Config(format!("{field}: {e}")))
    }
}

fn config_err<E: std::fmt::Display>(ctx: &str) -> impl FnOnce(E) -> CliError + '_ {
    move |e| CliError::Config(format!("{ctx}: {e}"))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(config_err("invalid config"))
    }

    #[cfg(test)]
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn scene(&self, command: &str) -> Result<Scene, CliError> {
        let g = self
            .geometry
            .as_ref()
            .ok_or_else(|| CliError::Config(format!("config is missing the [geometry] block required by '{command}'")))?;
        let wavelength = match (g.frequency_hz, &g.wavelength) {
            (Some(f), None) if f > 0.0 => nearfield::wavelength(f),
            (None, Some(l)) => l.resolve_plain(None).map_err(config_err("geometry.wavelength"))?,
            (Some(_), Some(_)) => return Err(CliError::Config("geometry: give either frequency_hz or wavelength, not both".into())),
            (Some(f), None) => return Err(CliError::Config(format!("geometry.frequency_hz must be positive, got {f}"))),
            (None, None) => return Err(CliError::Config("geometry: missing frequency_hz or wavelength".into())),
        };
        let geometry = match (&g.element_side, &g.element_diagonal) {
            (Some(s), None) => {
                let side = s.resolve_plain(Some(wavelength)).map_err(config_err("geometry.element_side"))?;
                ArrayGeometry::new(g.rows, g.cols, side, wavelength)
            }
            (None, Some(d)) => {
                let diag = d.resolve_plain(Some(wavelength)).map_err(config_err("geometry.element_diagonal"))?;
                ArrayGeometry::with_element_diagonal(g.rows, g.cols, diag, wavelength)
            }
            _ => return Err(CliError::Config("geometry: give exactly one of element_side or element_diagonal".into())),
        }
        .map_err(config_err("geometry"))?;
        Ok(Scene {
            geometry,
            ctx: LengthContext { wavelength: Some(wavelength), bounds: Some(boundary_distances(&geometry)) },
        })
    }

    pub fn radio(&self, command: &str) -> Result<&RadioConfig, CliError> {
        self.radio
            .as_ref()
            .ok_or_else(|| CliError::Config(format!("config is missing the [radio] block required by '{command}'")))
    }

    /// The `[experiment]` block decoded into a command-specific type; a
    /// missing block is read as an empty table.
    pub fn experiment<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        let table = self.experiment.clone().unwrap_or_default();
        table.try_into().map_err(config_err("experiment"))
    }
}

impl RadioConfig {
    /// Radio parameters at `carrier` (or the configured carrier when `None`).
    pub fn params(&self, carrier: Option<f64>) -> Result<RadioParams, CliError> {
        let f = carrier
            .or(self.carrier_frequency_hz)
            .ok_or_else(|| CliError::Config("radio.carrier_frequency_hz is required".into()))?;
        let rule = match (self.bandwidth_hz, self.bandwidth_fraction) {
            (Some(b), None) => BandwidthRule::Fixed(b),
            (None, Some(r)) => BandwidthRule::FractionOfCarrier(r),
            _ => return Err(CliError::Config("radio: give exactly one of bandwidth_hz or bandwidth_fraction".into())),
        };
        RadioParams::new(f, self.p_over_n0_db, rule, self.tx_gain.into(), self.rx_gain.into())
            .map_err(config_err("radio"))
    }

    pub fn power_over_noise(&self) -> f64 {
        10f64.powf(self.p_over_n0_db / 10.0)
    }
}
