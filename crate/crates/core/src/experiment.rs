//! Runs a resolved [`ExperimentConfig`] and writes its data files.
//!
//! Output files (in the output directory):
//!
//! | experiment        | file          | columns |
//! |-------------------|---------------|---------|
//! | fig1_spectrum     | `fig1.csv`    | omega, re, im, power |
//! | fig2_error_bands  | `fig2.csv`    | beta_deg, im_aw, sigma_im_0p1, sigma_im_0p01, sigma_im_0p001 |
//! | fig3_max_im       | `fig3.csv`    | dbeta_deg, max_im_1pct, max_im_0p1pct |
//! | *_slope           | `slope.csv`   | epsilon, mean_freq_exact, mean_freq_first_order |
//! | *_slope           | `outcomes.json` | one record per sweep point |
//! | regime_scan       | `regime.csv`  | eps_max_hz, margin, slope_exact, r_squared |
//!
//! plus `report.json` for every run.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::config::{lin_space, log_space, ConfigError, ExperimentConfig, ExperimentKind, PulseFamily, PulseSettings};
use crate::measurement::{
    amplification_slope_prepared, default_epsilon_sweep, fit_line, log_sweep, regime_margin, sweep,
    MeasurementError, MeasurementOutcome, Method, PreparedPointer, SWEEP_POINTS,
};
use crate::polarization::{
    error_band_rows, max_im_rows, max_usable_im_weak_value, postselection_overlap, weak_value_closed_form,
    PolarizationError, WeakValue,
};
use crate::specfun::SpecfunError;
use crate::waveform::{
    chirp_spectrum_analytic_offset, sample_waveform, spectrum_fft, time_bandwidth_product, ChirpPulse,
    GaussianPulse, Pulse, SampleGrid, WaveformError,
};

/// Sample count of the Fig. 1 spectrum (keeps the CSV small).
pub const FIG1_SAMPLES: usize = 1 << 16;
/// Ellipticity uncertainties of the Fig. 2 bands, degrees.
pub const FIG2_DBETAS_DEG: [f64; 3] = [0.1, 0.01, 0.001];
/// Relative error budgets of the Fig. 3 curves.
pub const FIG3_BUDGETS: [f64; 2] = [0.01, 0.001];
/// Regime margins spanned by the default regime scan.
pub const REGIME_SCAN_MARGINS: (f64, f64) = (0.01, 100.0);
pub const REGIME_SCAN_POINTS: usize = 9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DomainError {
    #[error(transparent)]
    Waveform(#[from] WaveformError),
    #[error(transparent)]
    Polarization(#[from] PolarizationError),
    #[error(transparent)]
    Measurement(#[from] MeasurementError),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{experiment}: {source}")]
    Domain {
        experiment: ExperimentKind,
        #[source]
        source: DomainError,
    },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl ExperimentError {
    /// Process exit code: 2 config, 3 domain, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Config(ConfigError::Read { .. }) => 4,
            ExperimentError::Config(_) => 2,
            ExperimentError::Domain { .. } => 3,
            ExperimentError::Io { .. } => 4,
        }
    }
}

/// A CSV table held in memory.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub file_name: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| v.to_string()))?;
        }
        w.into_inner().map_err(|e| e.into_error().into())
    }
}

/// One sweep point in `outcomes.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeRecord {
    pub epsilon: f64,
    pub exact: MeasurementOutcome<f64>,
    pub first_order: MeasurementOutcome<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeFile<'a> {
    pub input: &'a ExperimentConfig,
    pub weak_value: WeakValue<f64>,
    pub records: Vec<OutcomeRecord>,
}

/// Everything an experiment computes, before anything is written.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentData {
    pub tables: Vec<Table>,
    pub headline: BTreeMap<String, f64>,
    pub records: Option<(WeakValue<f64>, Vec<OutcomeRecord>)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub experiment: ExperimentKind,
    pub input: ExperimentConfig,
    pub seed: Option<u64>,
    pub headline: BTreeMap<String, f64>,
    pub outputs: Vec<String>,
    pub wall_time_s: f64,
}

/// Builds the pointer pulse from its settings.
pub fn build_pulse(p: &PulseSettings) -> Result<Pulse<f64>, WaveformError> {
    Ok(match p.family {
        PulseFamily::Gaussian => GaussianPulse::new(p.omega0, p.tau)?.into(),
        PulseFamily::Chirp => ChirpPulse::new(p.omega0, p.tau, p.chirp_rate.unwrap_or(crate::config::DEFAULT_CHIRP_RATE))?.into(),
    })
}

fn grid_with_overrides(cfg: &ExperimentConfig, pulse: &Pulse<f64>, base: SampleGrid<f64>) -> Result<SampleGrid<f64>, WaveformError> {
    let n = cfg.grid.n_samples.unwrap_or(base.n);
    let window = cfg.grid.window_tau.map(|w| w * pulse.tau()).unwrap_or(base.window);
    SampleGrid::new(n, window)
}

/// Runs the computation of `cfg` without touching the filesystem.
pub fn compute(cfg: &ExperimentConfig) -> Result<ExperimentData, ExperimentError> {
    let kind = cfg.experiment;
    let wrap = |e: DomainError| ExperimentError::Domain {
        experiment: kind,
        source: e,
    };
    match kind {
        ExperimentKind::Fig1Spectrum => fig1(cfg).map_err(wrap),
        ExperimentKind::Fig2ErrorBands => fig2(cfg).map_err(wrap),
        ExperimentKind::Fig3MaxIm => fig3(cfg).map_err(wrap),
        ExperimentKind::GaussianSlope | ExperimentKind::ChirpSlope => slope(cfg).map_err(wrap),
        ExperimentKind::RegimeScan => regime_scan(cfg).map_err(wrap),
    }
}

fn pulse_of(cfg: &ExperimentConfig) -> Result<Pulse<f64>, DomainError> {
    let settings = cfg.pulse.as_ref().expect("pulse experiments carry pulse settings");
    Ok(build_pulse(settings)?)
}

/// Outermost grid points at or above half of the mean power in the central
/// half band; returns the distance between them.
fn half_power_bandwidth(omega: &[f64], power: &[f64], center: f64, delta: f64) -> f64 {
    let central: Vec<f64> = omega
        .iter()
        .zip(power)
        .filter(|(w, _)| (**w - center).abs() <= 0.5 * delta)
        .map(|(_, p)| *p)
        .collect();
    if central.is_empty() {
        return 0.0;
    }
    let level = 0.5 * central.iter().sum::<f64>() / central.len() as f64;
    let first = power.iter().position(|&p| p >= level);
    let last = power.iter().rposition(|&p| p >= level);
    match (first, last) {
        (Some(a), Some(b)) => omega[b] - omega[a],
        _ => 0.0,
    }
}

fn fig1(cfg: &ExperimentConfig) -> Result<ExperimentData, DomainError> {
    let pulse = pulse_of(cfg)?;
    let Pulse::Chirp(chirp) = pulse else {
        unreachable!("fig1 uses a chirp")
    };
    let base = SampleGrid::new(FIG1_SAMPLES, pulse.spectrum_grid().window)?;
    let grid = grid_with_overrides(cfg, &pulse, base)?;
    let w = sample_waveform(&pulse, &grid)?;
    let s = spectrum_fft(&w)?;

    let rows: Vec<Vec<f64>> = (0..s.len())
        .map(|m| {
            let a = s.amplitudes()[m];
            vec![s.omega(m), a.re, a.im, a.norm_sqr()]
        })
        .collect();

    let omega: Vec<f64> = (0..s.len()).map(|m| s.omega(m)).collect();
    let power: Vec<f64> = (0..s.len()).map(|m| s.power(m)).collect();
    let delta = chirp.delta();
    let mut diff2 = 0.0;
    let mut ref2 = 0.0;
    for m in 0..s.len() {
        if s.offset(m).abs() <= 2.0 * delta {
            let analytic = chirp_spectrum_analytic_offset(&chirp, s.offset(m))?;
            diff2 += (s.amplitudes()[m] - analytic).norm_sqr();
            ref2 += analytic.norm_sqr();
        }
    }
    let band = s.band(chirp.omega0() - delta, chirp.omega0() + delta);

    let mut headline = BTreeMap::new();
    headline.insert("power_integral".into(), power.iter().sum::<f64>() * s.domega());
    headline.insert("bandwidth_3db".into(), half_power_bandwidth(&omega, &power, chirp.omega0(), delta));
    headline.insert("bandwidth_nominal".into(), 2.0 * delta);
    headline.insert("analytic_l2_rel_error".into(), (diff2 / ref2).sqrt());
    headline.insert("tau_delta".into(), chirp.time_bandwidth());
    headline.insert("time_bandwidth_rms_in_band".into(), time_bandwidth_product(&w, &band));
    Ok(ExperimentData {
        tables: vec![Table {
            file_name: "fig1.csv",
            header: vec!["omega", "re", "im", "power"],
            rows,
        }],
        headline,
        records: None,
    })
}

fn fig2(cfg: &ExperimentConfig) -> Result<ExperimentData, DomainError> {
    let betas = lin_space(cfg.fig2_beta_deg.0, cfg.fig2_beta_deg.1, cfg.fig2_points);
    let rows = error_band_rows(cfg.selector.alpha, &betas, &FIG2_DBETAS_DEG)?;
    let table_rows: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| {
            let mut v = vec![r.beta_deg, r.im_aw];
            v.extend(&r.sigma_im);
            v
        })
        .collect();
    let mut headline = BTreeMap::new();
    headline.insert("alpha_deg".into(), cfg.selector.alpha.to_degrees());
    headline.insert("im_aw_at_beta_min".into(), rows[0].im_aw);
    headline.insert("im_aw_at_beta_max".into(), rows[rows.len() - 1].im_aw);
    Ok(ExperimentData {
        tables: vec![Table {
            file_name: "fig2.csv",
            header: vec!["beta_deg", "im_aw", "sigma_im_0p1", "sigma_im_0p01", "sigma_im_0p001"],
            rows: table_rows,
        }],
        headline,
        records: None,
    })
}

fn fig3(cfg: &ExperimentConfig) -> Result<ExperimentData, DomainError> {
    let dbetas = log_space(cfg.fig3_dbeta_deg.0, cfg.fig3_dbeta_deg.1, cfg.fig3_points);
    let rows = max_im_rows(&dbetas, cfg.selector.dalpha, &FIG3_BUDGETS)?;
    let table_rows = rows
        .iter()
        .map(|r| {
            let mut v = vec![r.dbeta_deg];
            v.extend(&r.max_im);
            v
        })
        .collect();
    let at_paper_point = max_usable_im_weak_value(0.01_f64.to_radians(), cfg.selector.dalpha, 0.01)?;
    let mut headline = BTreeMap::new();
    headline.insert("max_im_at_0p01deg_1pct".into(), at_paper_point.im_aw);
    headline.insert("beta_star_deg_at_0p01deg_1pct".into(), at_paper_point.beta_star.to_degrees());
    headline.insert("dalpha_deg".into(), cfg.selector.dalpha.to_degrees());
    Ok(ExperimentData {
        tables: vec![Table {
            file_name: "fig3.csv",
            header: vec!["dbeta_deg", "max_im_1pct", "max_im_0p1pct"],
            rows: table_rows,
        }],
        headline,
        records: None,
    })
}

fn prepare(cfg: &ExperimentConfig, pulse: &Pulse<f64>) -> Result<PreparedPointer<f64>, DomainError> {
    let grid = grid_with_overrides(cfg, pulse, pulse.measurement_grid())?;
    Ok(PreparedPointer::with_grid(pulse, &grid, 0.0)?)
}

/// Slope predicted by the first-order analysis.
pub fn predicted_slope(pulse: &Pulse<f64>, aw: &WeakValue<f64>) -> f64 {
    match pulse {
        Pulse::Gaussian(_) => -aw.re(),
        Pulse::Chirp(c) => c.time_bandwidth() / 3.0 * aw.im() - aw.re(),
    }
}

fn slope(cfg: &ExperimentConfig) -> Result<ExperimentData, DomainError> {
    let pulse = pulse_of(cfg)?;
    let selector = cfg.selector.selector();
    let aw = crate::polarization::propagate_uncertainty(&selector)?;
    let eps = match &cfg.sweep {
        Some(s) => s.values(),
        None => default_epsilon_sweep(&pulse, &aw),
    };
    let pointer = prepare(cfg, &pulse)?;
    let exact = sweep(&pointer, &selector, Method::Exact, &eps)?;
    let first = sweep(&pointer, &selector, Method::FirstOrder, &eps)?;
    let shifts_exact: Vec<f64> = exact.iter().map(|o| o.frequency_shift).collect();
    let shifts_first: Vec<f64> = first.iter().map(|o| o.frequency_shift).collect();
    let fit_exact = fit_line(&eps, &shifts_exact).map_err(DomainError::from)?;
    let fit_first = fit_line(&eps, &shifts_first).map_err(DomainError::from)?;

    let rows = eps
        .iter()
        .zip(exact.iter().zip(&first))
        .map(|(&e, (x, f))| vec![e, x.mean_frequency, f.mean_frequency])
        .collect();
    let records: Vec<OutcomeRecord> = eps
        .iter()
        .zip(exact.into_iter().zip(first))
        .map(|(&epsilon, (exact, first_order))| OutcomeRecord {
            epsilon,
            exact,
            first_order,
        })
        .collect();

    let mut headline = BTreeMap::new();
    headline.insert("slope_exact".into(), fit_exact.slope);
    headline.insert("slope_first_order".into(), fit_first.slope);
    headline.insert("r_squared_exact".into(), fit_exact.r_squared);
    headline.insert("slope_predicted".into(), predicted_slope(&pulse, &aw));
    headline.insert("re_aw".into(), aw.re());
    headline.insert("im_aw".into(), aw.im());
    headline.insert("postselection_overlap".into(), postselection_overlap(&selector));
    let max_eps = eps.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
    headline.insert("max_regime_margin".into(), regime_margin(&pulse, &aw, max_eps).margin);
    if let Pulse::Chirp(c) = pulse {
        headline.insert("tau_delta".into(), c.time_bandwidth());
        if aw.im() != 0.0 {
            headline.insert("first_order_coefficient".into(), (fit_first.slope + aw.re()) / aw.im());
        }
    }
    if let Some(e) = cfg.epsilon {
        let o = pointer.exact(&selector, &crate::measurement::InteractionConfig::new(e)?)?;
        headline.insert("shift_exact_at_epsilon".into(), o.frequency_shift);
        let f = pointer.first_order(&aw, e)?;
        headline.insert("shift_first_order_at_epsilon".into(), f.frequency_shift);
    }
    Ok(ExperimentData {
        tables: vec![Table {
            file_name: "slope.csv",
            header: vec!["epsilon", "mean_freq_exact", "mean_freq_first_order"],
            rows,
        }],
        headline,
        records: Some((aw, records)),
    })
}

fn regime_scan(cfg: &ExperimentConfig) -> Result<ExperimentData, DomainError> {
    let pulse = pulse_of(cfg)?;
    let selector = cfg.selector.selector();
    let aw = WeakValue::exact(weak_value_closed_form(&selector)?);
    let tops = match &cfg.sweep {
        Some(s) => s.values(),
        None => {
            let unit = regime_margin(&pulse, &aw, 1.0).margin;
            log_space(
                REGIME_SCAN_MARGINS.0 / unit,
                REGIME_SCAN_MARGINS.1 / unit,
                REGIME_SCAN_POINTS,
            )
        }
    };
    let pointer = prepare(cfg, &pulse)?;
    let mut rows = Vec::with_capacity(tops.len());
    for &top in &tops {
        let eps = log_sweep(top, SWEEP_POINTS);
        let fit = amplification_slope_prepared(&pointer, &selector, Method::Exact, &eps)?;
        let margin = regime_margin(&pulse, &aw, top).margin;
        rows.push(vec![top, margin, fit.slope, fit.r_squared]);
    }
    let mut headline = BTreeMap::new();
    headline.insert("r_squared_at_min_margin".into(), rows[0][3]);
    headline.insert("r_squared_at_max_margin".into(), rows[rows.len() - 1][3]);
    headline.insert("slope_at_min_margin".into(), rows[0][2]);
    headline.insert("im_aw".into(), aw.im());
    Ok(ExperimentData {
        tables: vec![Table {
            file_name: "regime.csv",
            header: vec!["eps_max_hz", "margin", "slope_exact", "r_squared"],
            rows,
        }],
        headline,
        records: None,
    })
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> ExperimentError {
    ExperimentError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), ExperimentError> {
    fs::write(path, bytes).map_err(|e| io_err(path, e))
}

/// Computes `cfg` and writes its files into `out_dir` (created if missing).
pub fn run_experiment(cfg: &ExperimentConfig, out_dir: &Path, seed: Option<u64>) -> Result<RunReport, ExperimentError> {
    let start = Instant::now();
    let data = compute(cfg)?;
    fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;

    let mut outputs = Vec::new();
    for t in &data.tables {
        let path = out_dir.join(t.file_name);
        let bytes = t.to_csv().map_err(|e| io_err(&path, e))?;
        write_file(&path, &bytes)?;
        outputs.push(path.display().to_string());
    }
    if let Some((aw, records)) = data.records {
        let path = out_dir.join("outcomes.json");
        let file = OutcomeFile {
            input: cfg,
            weak_value: aw,
            records,
        };
        let text = serde_json::to_string_pretty(&file).map_err(|e| io_err(&path, e))?;
        write_file(&path, text.as_bytes())?;
        outputs.push(path.display().to_string());
    }

    let report_path: PathBuf = out_dir.join("report.json");
    outputs.push(report_path.display().to_string());
    let report = RunReport {
        experiment: cfg.experiment,
        input: cfg.clone(),
        seed,
        headline: data.headline,
        outputs,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    let text = serde_json::to_string_pretty(&report).map_err(|e| io_err(&report_path, e))?;
    write_file(&report_path, text.as_bytes())?;
    Ok(report)
}
