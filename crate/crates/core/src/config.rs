//! Analysis configuration and the flat `key = value` / JSON config format.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

macro_rules! config_enum {
    ($(#[$m:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$m])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                let key = s.trim().to_ascii_lowercase().replace(['-', '_'], "");
                $(if key == $text.replace(['-', '_'], "") {
                    return Ok($name::$variant);
                })+
                let allowed: Vec<&str> = vec![$($text),+];
                Err(Error::Config(format!(
                    "invalid {} {:?} (expected one of: {})",
                    stringify!($name),
                    s,
                    allowed.join(", ")
                )))
            }
        }
    };
}

config_enum!(
    /// Axis along which scores are z-scored.
    NormalizationMode {
        RowWise => "row-wise",
        PerGroupColumn => "per-group-column",
        PooledColumn => "pooled-column",
    }
);

config_enum!(
    /// Reduction applied to the difference of two eigen-spectra.
    EigenShiftNorm {
        L1 => "l1",
        L2 => "l2",
    }
);

config_enum!(
    /// Which matrix the covariance (and thus PCA spectrum) is computed from.
    CovarianceInput {
        Normalized => "normalized",
        Raw => "raw",
    }
);

config_enum!(
    /// What to do when a mean vector has (numerically) zero norm.
    DegenerateCosinePolicy {
        Error => "error",
        ZeroDistance => "zero-distance",
    }
);

config_enum!(
    ReportFormat {
        Json => "json",
        Text => "text",
        Csv => "csv",
    }
);

impl Default for NormalizationMode {
    fn default() -> Self {
        NormalizationMode::RowWise
    }
}

pub const MIN_PRECISION: usize = 4;
pub const MAX_PRECISION: usize = 12;
pub const DEFAULT_PRECISION: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisConfig {
    pub normalization: NormalizationMode,
    pub eigen_shift_norm: EigenShiftNorm,
    pub covariance_input: CovarianceInput,
    pub degenerate_cosine: DegenerateCosinePolicy,
    pub report_format: ReportFormat,
    /// Fractional digits used when rendering floats, in `[4, 12]`.
    pub float_precision: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            normalization: NormalizationMode::RowWise,
            eigen_shift_norm: EigenShiftNorm::L1,
            covariance_input: CovarianceInput::Normalized,
            degenerate_cosine: DegenerateCosinePolicy::Error,
            report_format: ReportFormat::Text,
            float_precision: DEFAULT_PRECISION,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        if !(MIN_PRECISION..=MAX_PRECISION).contains(&self.float_precision) {
            return Err(Error::Config(format!(
                "float_precision {} outside [{MIN_PRECISION}, {MAX_PRECISION}]",
                self.float_precision
            )));
        }
        Ok(())
    }

    /// Applies recognised keys from a flat config. Unknown keys are an error.
    pub fn from_flat(flat: &FlatConfig) -> Result<Self> {
        let mut cfg = AnalysisConfig::default();
        for (key, value) in flat.iter() {
            cfg.set(key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_flat(&FlatConfig::from_file(path)?)
    }

    /// Sets one field by config key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "normalization" | "normalization_mode" => self.normalization = value.parse()?,
            "eigen_shift_norm" => self.eigen_shift_norm = value.parse()?,
            "covariance_input" => self.covariance_input = value.parse()?,
            "degenerate_cosine" | "degenerate_cosine_policy" => {
                self.degenerate_cosine = value.parse()?
            }
            "format" | "report_format" => self.report_format = value.parse()?,
            "precision" | "float_precision" => {
                self.float_precision = value.trim().parse().map_err(|_| {
                    Error::Config(format!("float_precision {value:?} is not an integer"))
                })?
            }
            other => return Err(Error::Config(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Key/value pairs in a fixed order, used for report provenance.
    pub fn echo(&self) -> [(&'static str, String); 6] {
        [
            ("normalization", self.normalization.to_string()),
            ("eigen_shift_norm", self.eigen_shift_norm.to_string()),
            ("covariance_input", self.covariance_input.to_string()),
            ("degenerate_cosine", self.degenerate_cosine.to_string()),
            ("report_format", self.report_format.to_string()),
            ("float_precision", self.float_precision.to_string()),
        ]
    }
}

/// Flat string map read from either `key = value` lines or a JSON object.
///
/// Nested JSON objects are flattened with `.`-joined keys, so
/// `{"mean": {"Hedging": 0.7}}` and `mean.Hedging = 0.7` are equivalent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FlatConfig {
    entries: BTreeMap<String, String>,
}

impl FlatConfig {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_key_value(text)
        }
    }

    fn parse_key_value(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value", i + 1))
            })?;
            let v = v.trim().trim_matches('"');
            if entries.insert(k.trim().to_string(), v.to_string()).is_some() {
                return Err(Error::Config(format!(
                    "line {}: duplicate key {:?}",
                    i + 1,
                    k.trim()
                )));
            }
        }
        Ok(FlatConfig { entries })
    }

    fn parse_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("invalid JSON config: {e}")))?;
        let mut entries = BTreeMap::new();
        flatten("", &value, &mut entries)?;
        Ok(FlatConfig { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn insert(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.entries.insert(key.into(), value.into());
    }
}

fn flatten(
    prefix: &str,
    value: &serde_json::Value,
    out: &mut BTreeMap<String, String>,
) -> Result<()> {
    use serde_json::Value;
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, out)?;
            }
        }
        Value::String(s) => {
            out.insert(prefix.to_string(), s.clone());
        }
        Value::Number(n) => {
            out.insert(prefix.to_string(), n.to_string());
        }
        Value::Bool(b) => {
            out.insert(prefix.to_string(), b.to_string());
        }
        Value::Null | Value::Array(_) => {
            return Err(Error::Config(format!(
                "config key {prefix:?}: arrays and null are not supported"
            )))
        }
    }
    Ok(())
}
