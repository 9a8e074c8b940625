//! Experiment configuration: flat `key = value` files or JSON objects.
//!
//! Frequencies in `*_hz` fields are taken literally as angular frequencies in
//! s^-1 (so `omega0_hz = 1e10` means omega0 = 1e10 s^-1). Angles are given in
//! degrees and stored in radians.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polarization::SelectorConfig;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Read { path: String, message: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown field `{key}`")]
    UnknownField { line: usize, key: String },
    #[error("line {line}: field `{key}` given twice")]
    DuplicateField { line: usize, key: String },
    #[error("JSON line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("missing required field `{0}`")]
    MissingField(&'static str),
    #[error("field `{key}`: {message}")]
    InvalidValue { key: &'static str, message: String },
}

fn invalid(key: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue {
        key,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Fig1Spectrum,
    Fig2ErrorBands,
    Fig3MaxIm,
    GaussianSlope,
    ChirpSlope,
    RegimeScan,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::Fig1Spectrum,
        ExperimentKind::Fig2ErrorBands,
        ExperimentKind::Fig3MaxIm,
        ExperimentKind::GaussianSlope,
        ExperimentKind::ChirpSlope,
        ExperimentKind::RegimeScan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Fig1Spectrum => "fig1_spectrum",
            ExperimentKind::Fig2ErrorBands => "fig2_error_bands",
            ExperimentKind::Fig3MaxIm => "fig3_max_im",
            ExperimentKind::GaussianSlope => "gaussian_slope",
            ExperimentKind::ChirpSlope => "chirp_slope",
            ExperimentKind::RegimeScan => "regime_scan",
        }
    }

    pub fn is_slope(self) -> bool {
        matches!(self, ExperimentKind::GaussianSlope | ExperimentKind::ChirpSlope)
    }

    /// Which pointer family the experiment uses, if any.
    pub fn family(self) -> Option<PulseFamily> {
        match self {
            ExperimentKind::GaussianSlope => Some(PulseFamily::Gaussian),
            ExperimentKind::Fig1Spectrum | ExperimentKind::ChirpSlope | ExperimentKind::RegimeScan => {
                Some(PulseFamily::Chirp)
            }
            ExperimentKind::Fig2ErrorBands | ExperimentKind::Fig3MaxIm => None,
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|k| k.name()).collect();
                format!("unknown experiment `{s}` (expected one of {})", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseFamily {
    Gaussian,
    Chirp,
}

/// Config as written, before defaults. Field names are the accepted keys.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub experiment: Option<String>,
    pub omega0_hz: Option<f64>,
    pub tau_s: Option<f64>,
    pub chirp_rate_hz_per_s: Option<f64>,
    pub bandwidth_hz: Option<f64>,
    pub alpha_deg: Option<f64>,
    pub beta_deg: Option<f64>,
    pub dalpha_deg: Option<f64>,
    pub dbeta_deg: Option<f64>,
    pub target_im_aw: Option<f64>,
    pub target_re_aw: Option<f64>,
    pub epsilon_hz: Option<f64>,
    pub eps_min_hz: Option<f64>,
    pub eps_max_hz: Option<f64>,
    pub eps_points: Option<usize>,
    pub n_samples: Option<usize>,
    pub window_tau: Option<f64>,
    pub fig2_beta_min_deg: Option<f64>,
    pub fig2_beta_max_deg: Option<f64>,
    pub fig2_points: Option<usize>,
    pub fig3_dbeta_min_deg: Option<f64>,
    pub fig3_dbeta_max_deg: Option<f64>,
    pub fig3_points: Option<usize>,
    pub output: Option<String>,
}

/// Every accepted key.
pub const KNOWN_KEYS: [&str; 24] = [
    "experiment",
    "omega0_hz",
    "tau_s",
    "chirp_rate_hz_per_s",
    "bandwidth_hz",
    "alpha_deg",
    "beta_deg",
    "dalpha_deg",
    "dbeta_deg",
    "target_im_aw",
    "target_re_aw",
    "epsilon_hz",
    "eps_min_hz",
    "eps_max_hz",
    "eps_points",
    "n_samples",
    "window_tau",
    "fig2_beta_min_deg",
    "fig2_beta_max_deg",
    "fig2_points",
    "fig3_dbeta_min_deg",
    "fig3_dbeta_max_deg",
    "fig3_points",
    "output",
];

fn parse_number<V: FromStr>(line: usize, key: &str, value: &str) -> Result<V, ConfigError>
where
    V::Err: fmt::Display,
{
    value.parse::<V>().map_err(|e| ConfigError::Syntax {
        line,
        message: format!("`{key}`: cannot parse `{value}`: {e}"),
    })
}

impl RawConfig {
    /// Parses `key = value` lines. `#` starts a comment; blank lines are ignored.
    pub fn from_key_values(text: &str) -> Result<Self, ConfigError> {
        let mut raw = RawConfig::default();
        let mut seen = BTreeSet::new();
        for (idx, full) in text.lines().enumerate() {
            let line = idx + 1;
            let content = full.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                message: format!("expected `key = value`, got `{content}`"),
            })?;
            let key = key.trim();
            let value = value.trim().trim_matches('"');
            if !KNOWN_KEYS.contains(&key) {
                return Err(ConfigError::UnknownField {
                    line,
                    key: key.to_string(),
                });
            }
            if !seen.insert(key.to_string()) {
                return Err(ConfigError::DuplicateField {
                    line,
                    key: key.to_string(),
                });
            }
            let f = |v: &str| parse_number::<f64>(line, key, v).map(Some);
            let u = |v: &str| parse_number::<usize>(line, key, v).map(Some);
            match key {
                "experiment" => raw.experiment = Some(value.to_string()),
                "omega0_hz" => raw.omega0_hz = f(value)?,
                "tau_s" => raw.tau_s = f(value)?,
                "chirp_rate_hz_per_s" => raw.chirp_rate_hz_per_s = f(value)?,
                "bandwidth_hz" => raw.bandwidth_hz = f(value)?,
                "alpha_deg" => raw.alpha_deg = f(value)?,
                "beta_deg" => raw.beta_deg = f(value)?,
                "dalpha_deg" => raw.dalpha_deg = f(value)?,
                "dbeta_deg" => raw.dbeta_deg = f(value)?,
                "target_im_aw" => raw.target_im_aw = f(value)?,
                "target_re_aw" => raw.target_re_aw = f(value)?,
                "epsilon_hz" => raw.epsilon_hz = f(value)?,
                "eps_min_hz" => raw.eps_min_hz = f(value)?,
                "eps_max_hz" => raw.eps_max_hz = f(value)?,
                "eps_points" => raw.eps_points = u(value)?,
                "n_samples" => raw.n_samples = u(value)?,
                "window_tau" => raw.window_tau = f(value)?,
                "fig2_beta_min_deg" => raw.fig2_beta_min_deg = f(value)?,
                "fig2_beta_max_deg" => raw.fig2_beta_max_deg = f(value)?,
                "fig2_points" => raw.fig2_points = u(value)?,
                "fig3_dbeta_min_deg" => raw.fig3_dbeta_min_deg = f(value)?,
                "fig3_dbeta_max_deg" => raw.fig3_dbeta_max_deg = f(value)?,
                "fig3_points" => raw.fig3_points = u(value)?,
                "output" => raw.output = Some(value.to_string()),
                _ => unreachable!("key list and match arms agree"),
            }
        }
        Ok(raw)
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    /// JSON when the first non-blank character is `{`, key-value otherwise.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_key_values(text)
        }
    }
}

/// Pointer parameters after defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PulseSettings {
    pub family: PulseFamily,
    pub omega0: f64,
    pub tau: f64,
    /// Chirp rate R, s^-2 (chirps only).
    pub chirp_rate: Option<f64>,
}

/// Sampling overrides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSettings {
    pub n_samples: Option<usize>,
    pub window_tau: Option<f64>,
}

/// Selector angles in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SelectorSettings {
    pub alpha: f64,
    pub beta: f64,
    pub dalpha: f64,
    pub dbeta: f64,
}

impl SelectorSettings {
    pub fn selector(&self) -> SelectorConfig<f64> {
        SelectorConfig {
            alpha: self.alpha,
            beta: self.beta,
            dalpha: self.dalpha,
            dbeta: self.dbeta,
        }
    }
}

/// Explicit epsilon sweep: `points` log-spaced values in `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSettings {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl SweepSettings {
    pub fn values(&self) -> Vec<f64> {
        log_space(self.min, self.max, self.points)
    }
}

/// `n` log-spaced values from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| match k {
            0 => lo,
            k if k == n - 1 => hi,
            k => (a + (b - a) * k as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}

/// `n` evenly spaced values from `lo` to `hi` inclusive.
pub fn lin_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}

/// Fully resolved configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub pulse: Option<PulseSettings>,
    pub grid: GridSettings,
    pub selector: SelectorSettings,
    pub epsilon: Option<f64>,
    pub sweep: Option<SweepSettings>,
    pub fig2_beta_deg: (f64, f64),
    pub fig2_points: usize,
    pub fig3_dbeta_deg: (f64, f64),
    pub fig3_points: usize,
    pub output: Option<String>,
}

pub const DEFAULT_OMEGA0: f64 = 1.0e10;
pub const DEFAULT_CHIRP_TAU: f64 = 1.0e-5;
pub const DEFAULT_CHIRP_RATE: f64 = 1.0e13;
pub const DEFAULT_GAUSSIAN_TAU: f64 = 1.0e-6;
pub const DEFAULT_CHIRP_TARGET_IM: f64 = 10.0;
pub const DEFAULT_GAUSSIAN_TARGET_RE: f64 = 5.0;

fn positive(key: &'static str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(invalid(key, format!("must be positive and finite, got {v}")))
    }
}

fn non_negative(key: &'static str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(invalid(key, format!("must be non-negative and finite, got {v}")))
    }
}

fn finite(key: &'static str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(key, format!("must be finite, got {v}")))
    }
}

fn at_least(key: &'static str, v: usize, min: usize) -> Result<usize, ConfigError> {
    if v >= min {
        Ok(v)
    } else {
        Err(invalid(key, format!("must be at least {min}, got {v}")))
    }
}

/// Angles `(alpha, beta)` in radians giving `A_w = 1/2 + i target` (alpha = 0).
pub fn angles_for_im_weak_value(target: f64) -> (f64, f64) {
    (0.0, 2.0 * (1.0 / (2.0 * target)).atan())
}

/// Angles `(alpha, beta)` in radians giving the real weak value `target` (beta = 0).
pub fn angles_for_re_weak_value(target: f64) -> (f64, f64) {
    ((1.0 - 1.0 / target).atan() - std::f64::consts::FRAC_PI_4, 0.0)
}

impl ExperimentConfig {
    /// Applies defaults and validates.
    pub fn resolve(raw: &RawConfig) -> Result<Self, ConfigError> {
        let name = raw.experiment.as_deref().ok_or(ConfigError::MissingField("experiment"))?;
        let experiment: ExperimentKind = name.parse().map_err(|m: String| invalid("experiment", m))?;

        let pulse = match experiment.family() {
            None => None,
            Some(family) => {
                let omega0 = positive("omega0_hz", raw.omega0_hz.unwrap_or(DEFAULT_OMEGA0))?;
                let default_tau = match family {
                    PulseFamily::Gaussian => DEFAULT_GAUSSIAN_TAU,
                    PulseFamily::Chirp => DEFAULT_CHIRP_TAU,
                };
                let tau = positive("tau_s", raw.tau_s.unwrap_or(default_tau))?;
                let chirp_rate = match family {
                    PulseFamily::Gaussian => {
                        if raw.chirp_rate_hz_per_s.is_some() || raw.bandwidth_hz.is_some() {
                            return Err(invalid(
                                "chirp_rate_hz_per_s",
                                "chirp parameters do not apply to a Gaussian pointer",
                            ));
                        }
                        None
                    }
                    PulseFamily::Chirp => Some(match (raw.chirp_rate_hz_per_s, raw.bandwidth_hz) {
                        (Some(_), Some(_)) => {
                            return Err(invalid(
                                "bandwidth_hz",
                                "give either chirp_rate_hz_per_s or bandwidth_hz, not both",
                            ))
                        }
                        (Some(r), None) => positive("chirp_rate_hz_per_s", r)?,
                        (None, Some(bw)) => positive("bandwidth_hz", bw)? / (2.0 * tau),
                        (None, None) => DEFAULT_CHIRP_RATE,
                    }),
                };
                Some(PulseSettings {
                    family,
                    omega0,
                    tau,
                    chirp_rate,
                })
            }
        };

        let grid = GridSettings {
            n_samples: match raw.n_samples {
                Some(n) if n < 16 || !n.is_power_of_two() => {
                    return Err(invalid("n_samples", format!("must be a power of two >= 16, got {n}")))
                }
                other => other,
            },
            window_tau: raw.window_tau.map(|w| positive("window_tau", w)).transpose()?,
        };

        let selector = Self::resolve_selector(experiment, raw)?;

        let epsilon = raw.epsilon_hz.map(|e| finite("epsilon_hz", e)).transpose()?;
        let sweep = match (raw.eps_min_hz, raw.eps_max_hz) {
            (None, None) => {
                if raw.eps_points.is_some() {
                    return Err(invalid("eps_points", "needs eps_min_hz and eps_max_hz"));
                }
                None
            }
            (Some(lo), Some(hi)) => {
                let lo = positive("eps_min_hz", lo)?;
                let hi = positive("eps_max_hz", hi)?;
                if hi <= lo {
                    return Err(invalid("eps_max_hz", "must exceed eps_min_hz"));
                }
                let min_points = if experiment.is_slope() { 5 } else { 2 };
                let points = at_least("eps_points", raw.eps_points.unwrap_or(8), min_points)?;
                Some(SweepSettings { min: lo, max: hi, points })
            }
            (None, Some(_)) => return Err(ConfigError::MissingField("eps_min_hz")),
            (Some(_), None) => return Err(ConfigError::MissingField("eps_max_hz")),
        };

        let fig2_beta_deg = (
            finite("fig2_beta_min_deg", raw.fig2_beta_min_deg.unwrap_or(0.5))?,
            finite("fig2_beta_max_deg", raw.fig2_beta_max_deg.unwrap_or(20.0))?,
        );
        if fig2_beta_deg.1 <= fig2_beta_deg.0 {
            return Err(invalid("fig2_beta_max_deg", "must exceed fig2_beta_min_deg"));
        }
        let fig2_points = at_least("fig2_points", raw.fig2_points.unwrap_or(200), 2)?;
        let fig3_dbeta_deg = (
            positive("fig3_dbeta_min_deg", raw.fig3_dbeta_min_deg.unwrap_or(1.0e-4))?,
            positive("fig3_dbeta_max_deg", raw.fig3_dbeta_max_deg.unwrap_or(1.0e-2))?,
        );
        if fig3_dbeta_deg.1 <= fig3_dbeta_deg.0 {
            return Err(invalid("fig3_dbeta_max_deg", "must exceed fig3_dbeta_min_deg"));
        }
        let fig3_points = at_least("fig3_points", raw.fig3_points.unwrap_or(21), 2)?;

        Ok(Self {
            experiment,
            pulse,
            grid,
            selector,
            epsilon,
            sweep,
            fig2_beta_deg,
            fig2_points,
            fig3_dbeta_deg,
            fig3_points,
            output: raw.output.clone(),
        })
    }

    fn resolve_selector(experiment: ExperimentKind, raw: &RawConfig) -> Result<SelectorSettings, ConfigError> {
        let dalpha = non_negative("dalpha_deg", raw.dalpha_deg.unwrap_or(0.0))?.to_radians();
        let dbeta = non_negative("dbeta_deg", raw.dbeta_deg.unwrap_or(0.0))?.to_radians();
        let angles_given = raw.alpha_deg.is_some() || raw.beta_deg.is_some();
        if raw.target_im_aw.is_some() && raw.target_re_aw.is_some() {
            return Err(invalid("target_re_aw", "give at most one of target_im_aw, target_re_aw"));
        }
        let target_given = raw.target_im_aw.is_some() || raw.target_re_aw.is_some();
        if target_given && angles_given {
            return Err(invalid(
                if raw.target_im_aw.is_some() { "target_im_aw" } else { "target_re_aw" },
                "cannot be combined with alpha_deg/beta_deg",
            ));
        }

        let (alpha, beta) = if let Some(t) = raw.target_im_aw {
            angles_for_im_weak_value(positive("target_im_aw", t)?)
        } else if let Some(t) = raw.target_re_aw {
            let t = finite("target_re_aw", t)?;
            if t == 0.0 {
                return Err(invalid("target_re_aw", "must be non-zero"));
            }
            angles_for_re_weak_value(t)
        } else if angles_given {
            (
                finite("alpha_deg", raw.alpha_deg.unwrap_or(0.0))?.to_radians(),
                finite("beta_deg", raw.beta_deg.unwrap_or(0.0))?.to_radians(),
            )
        } else {
            match experiment {
                ExperimentKind::GaussianSlope => angles_for_re_weak_value(DEFAULT_GAUSSIAN_TARGET_RE),
                ExperimentKind::ChirpSlope | ExperimentKind::RegimeScan => {
                    angles_for_im_weak_value(DEFAULT_CHIRP_TARGET_IM)
                }
                _ => (0.0, 0.0),
            }
        };

        if matches!(
            experiment,
            ExperimentKind::GaussianSlope | ExperimentKind::ChirpSlope | ExperimentKind::RegimeScan
        ) && alpha == 0.0
            && beta == 0.0
        {
            return Err(invalid(
                "beta_deg",
                "alpha = beta = 0 makes the weak value singular",
            ));
        }
        Ok(SelectorSettings {
            alpha,
            beta,
            dalpha,
            dbeta,
        })
    }

    pub fn from_text(text: &str) -> Result<Self, ConfigError> {
        Self::resolve(&RawConfig::parse(text)?)
    }
}

/// Reads, parses and resolves a config file.
pub fn validate_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    ExperimentConfig::from_text(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_fig1_gets_radar_defaults() {
        let c = ExperimentConfig::from_text("experiment = fig1_spectrum\n").unwrap();
        let p = c.pulse.unwrap();
        assert_eq!(p.family, PulseFamily::Chirp);
        assert_eq!(p.omega0, 1.0e10);
        assert_eq!(p.tau, 1.0e-5);
        assert_eq!(p.chirp_rate, Some(1.0e13));
    }

    #[test]
    fn bandwidth_sets_rate() {
        let c = ExperimentConfig::from_text("experiment = chirp_slope\nbandwidth_hz = 2e8\n").unwrap();
        assert!((c.pulse.unwrap().chirp_rate.unwrap() - 1.0e13).abs() < 1.0);
    }

    #[test]
    fn singular_selector_rejected() {
        let e = ExperimentConfig::from_text("experiment = gaussian_slope\nalpha_deg = 0\nbeta_deg = 0\n")
            .unwrap_err();
        assert!(matches!(e, ConfigError::InvalidValue { key: "beta_deg", .. }));
    }

    #[test]
    fn negative_tau_rejected() {
        let e = ExperimentConfig::from_text("experiment = chirp_slope\ntau_s = -1e-5\n").unwrap_err();
        assert!(matches!(e, ConfigError::InvalidValue { key: "tau_s", .. }));
    }

    #[test]
    fn unknown_field_reports_line() {
        let e = RawConfig::parse("experiment = fig1_spectrum\n# note\nfoo = 3\n").unwrap_err();
        assert_eq!(
            e,
            ConfigError::UnknownField {
                line: 3,
                key: "foo".into()
            }
        );
    }

    #[test]
    fn bad_number_reports_line() {
        let e = RawConfig::parse("experiment = fig1_spectrum\ntau_s = ten\n").unwrap_err();
        assert!(matches!(e, ConfigError::Syntax { line: 2, .. }));
    }

    #[test]
    fn duplicate_and_missing() {
        assert!(matches!(
            RawConfig::parse("tau_s = 1\ntau_s = 2\n"),
            Err(ConfigError::DuplicateField { line: 2, .. })
        ));
        assert_eq!(
            ExperimentConfig::from_text("tau_s = 1e-5\n").unwrap_err(),
            ConfigError::MissingField("experiment")
        );
    }

    #[test]
    fn json_matches_key_value() {
        let kv = ExperimentConfig::from_text("experiment = chirp_slope\ntarget_im_aw = 20\n").unwrap();
        let js = ExperimentConfig::from_text(r#"{"experiment": "chirp_slope", "target_im_aw": 20}"#).unwrap();
        assert_eq!(kv, js);
        let e = ExperimentConfig::from_text("{\n  \"experiment\": \"chirp_slope\",\n  \"bogus\": 1\n}").unwrap_err();
        assert!(matches!(e, ConfigError::Json { line: 3, .. }), "{e:?}");
    }

    #[test]
    fn target_weak_values_round_trip() {
        use crate::polarization::weak_value_closed_form;
        let (a, b) = angles_for_im_weak_value(100.0);
        let w = weak_value_closed_form(&SelectorConfig::exact(a, b).unwrap()).unwrap();
        assert!((w.im - 100.0).abs() < 1e-10);
        for t in [1.0, 5.0, 20.0, -3.0] {
            let (a, b) = angles_for_re_weak_value(t);
            let w = weak_value_closed_form(&SelectorConfig::exact(a, b).unwrap()).unwrap();
            assert!((w.re - t).abs() < 1e-12 * t.abs(), "{t}: {w}");
            assert!(w.im.abs() < 1e-12);
        }
    }

    #[test]
    fn angles_converted_to_radians() {
        let c = ExperimentConfig::from_text("experiment = fig2_error_bands\nalpha_deg = 1\ndbeta_deg = 0.01\n").unwrap();
        assert!((c.selector.alpha - 1f64.to_radians()).abs() < 1e-16);
        assert!((c.selector.dbeta - 0.01f64.to_radians()).abs() < 1e-18);
    }

    #[test]
    fn sweep_validation() {
        assert!(ExperimentConfig::from_text("experiment = chirp_slope\neps_min_hz = 1\neps_max_hz = 10\neps_points = 3\n").is_err());
        assert!(ExperimentConfig::from_text("experiment = chirp_slope\neps_min_hz = 10\neps_max_hz = 1\n").is_err());
        let c = ExperimentConfig::from_text("experiment = chirp_slope\neps_min_hz = 0.1\neps_max_hz = 10\n").unwrap();
        let v = c.sweep.unwrap().values();
        assert_eq!(v.len(), 8);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[7], 10.0);
    }
}
