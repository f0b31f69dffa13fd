//! Length tokens such as `"0.25 lambda"`, `"4.43 dF"`, `"dFA/20"` or `"inf"`.

use std::fmt;
use std::str::FromStr;

use nearfield::regions::RegionBounds;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthUnit {
    Meter,
    Lambda,
    DF,
    DFA,
    DB,
}

impl LengthUnit {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "m" => LengthUnit::Meter,
            "lambda" | "λ" => LengthUnit::Lambda,
            "dF" | "d_F" => LengthUnit::DF,
            "dFA" | "d_FA" => LengthUnit::DFA,
            "dB" | "d_B" => LengthUnit::DB,
            _ => return None,
        })
    }

    fn token(&self) -> &'static str {
        match self {
            LengthUnit::Meter => "m",
            LengthUnit::Lambda => "lambda",
            LengthUnit::DF => "dF",
            LengthUnit::DFA => "dFA",
            LengthUnit::DB => "dB",
        }
    }

    pub fn needs_geometry(&self) -> bool {
        matches!(self, LengthUnit::DF | LengthUnit::DFA | LengthUnit::DB)
    }
}

/// A length with an explicit unit, resolved to meters against a wavelength
/// and the array's boundary distances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Length {
    Finite { value: f64, unit: LengthUnit },
    Infinite,
}

/// What relative units resolve against.
#[derive(Debug, Clone, Copy)]
pub struct LengthContext {
    pub wavelength: Option<f64>,
    pub bounds: Option<RegionBounds>,
}

impl Length {
    pub fn meters(value: f64) -> Self {
        Length::Finite { value, unit: LengthUnit::Meter }
    }

    pub fn resolve(&self, ctx: &LengthContext) -> Result<f64, String> {
        let (value, unit) = match *self {
            Length::Infinite => return Ok(f64::INFINITY),
            Length::Finite { value, unit } => (value, unit),
        };
        let scale = match unit {
            LengthUnit::Meter => 1.0,
            LengthUnit::Lambda => ctx.wavelength.ok_or("lambda units need a wavelength")?,
            _ => {
                let b = ctx.bounds.ok_or_else(|| format!("'{}' units need a [geometry] block", unit.token()))?;
                match unit {
                    LengthUnit::DF => b.fraunhofer,
                    LengthUnit::DFA => b.fraunhofer_array,
                    _ => b.bjornson,
                }
            }
        };
        Ok(value * scale)
    }

    /// Resolves without geometry; only meters and wavelengths are allowed.
    pub fn resolve_plain(&self, wavelength: Option<f64>) -> Result<f64, String> {
        self.resolve(&LengthContext { wavelength, bounds: None })
    }
}

impl FromStr for Length {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        if matches!(t, "inf" | "infinity" | "∞") {
            return Ok(Length::Infinite);
        }
        let bad = || format!("invalid length '{s}': expected '<number> <unit>', '<unit>/<number>' or 'inf' (units: m, lambda, dF, dFA, dB)");
        let number = |x: &str| x.trim().parse::<f64>().ok().filter(|v| v.is_finite());
        if let Some((u, d)) = t.split_once('/') {
            let unit = LengthUnit::parse(u.trim()).ok_or_else(bad)?;
            let div = number(d).filter(|v| *v != 0.0).ok_or_else(bad)?;
            return Ok(Length::Finite { value: 1.0 / div, unit });
        }
        if let Some(unit) = LengthUnit::parse(t) {
            return Ok(Length::Finite { value: 1.0, unit });
        }
        let (v, u) = t.split_once(char::is_whitespace).ok_or_else(bad)?;
        let unit = LengthUnit::parse(u.trim()).ok_or_else(bad)?;
        Ok(Length::Finite { value: number(v).ok_or_else(bad)?, unit })
    }
}

impl TryFrom<String> for Length {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Infinite => f.write_str("inf"),
            Length::Finite { value, unit } => write!(f, "{value:e} {}", unit.token()),
        }
    }
}

impl From<Length> for String {
    fn from(l: Length) -> String {
        l.to_string()
    }
}
