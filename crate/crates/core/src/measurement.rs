//! Weak frequency-shift interaction, post-selection and mean-frequency
//! estimation, exactly and to first order in `epsilon`.
//!
//! The interaction is `exp(-i epsilon A t)` with `A = |H><H|`. Because `A` is a
//! projector the post-selected pointer is exactly
//!
//! ```text
//! p_f(t) = c_H p(t) e^{-i epsilon t} + c_V p(t)
//! ```
//!
//! and its first-order counterpart is `(1 + epsilon A_w d/domega) p~(omega)` in
//! the frequency domain. Under the crate's Fourier convention `e^{-i epsilon t}`
//! moves the spectrum down by `epsilon`, so a plain shift (`c_V = 0`) has slope
//! -1, a Gaussian pointer has slope `-Re(A_w)`, and a chirp has slope
//! `(tau delta / 3) Im(A_w) - Re(A_w)`.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::polarization::{selector_amplitudes, weak_value_closed_form, PolarizationError, SelectorConfig, WeakValue};
use crate::scalar::Real;
use crate::waveform::{
    rms_duration, sample_waveform_delayed, spectrum_fft, time_moment, ChirpPulse, Pulse, SampleGrid,
    SampledWaveform, Spectrum, WaveformError,
};

/// Margin below which the first-order expansion is treated as valid.
pub const REGIME_THRESHOLD: f64 = 0.1;
/// Margin of the largest point of [`default_epsilon_sweep`].
pub const SWEEP_MAX_MARGIN: f64 = 0.005;
/// Points in [`default_epsilon_sweep`].
pub const SWEEP_POINTS: usize = 8;
/// Decades spanned by [`default_epsilon_sweep`].
pub const SWEEP_DECADES: f64 = 2.0;
/// Minimum number of points accepted by [`amplification_slope`].
pub const MIN_SLOPE_POINTS: usize = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasurementError {
    #[error(transparent)]
    Waveform(#[from] WaveformError),
    #[error(transparent)]
    Polarization(#[from] PolarizationError),
    #[error("{0} must be finite")]
    NonFinite(&'static str),
    #[error("slope fit needs at least {MIN_SLOPE_POINTS} points, got {0}")]
    TooFewPoints(usize),
    #[error("degenerate sweep: all epsilon values are equal")]
    DegenerateSweep,
    #[error("post-selected pointer has zero norm; mean frequency undefined")]
    Extinguished,
}

/// Which pipeline produced an outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    FirstOrder,
}

/// Strength of the frequency-shift interaction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InteractionConfig<T> {
    /// Frequency shift, s^-1.
    pub epsilon: T,
}

impl<T: Real> InteractionConfig<T> {
    pub fn new(epsilon: T) -> Result<Self, MeasurementError> {
        if epsilon.is_finite() {
            Ok(Self { epsilon })
        } else {
            Err(MeasurementError::NonFinite("epsilon"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementOutcome<T> {
    pub method: Method,
    pub epsilon: T,
    /// Post-selected mean angular frequency, carrier included, s^-1.
    pub mean_frequency: T,
    /// `mean_frequency - omega0`, s^-1.
    pub frequency_shift: T,
    /// Exact post-selection probability; absent for the first-order pipeline
    /// when no selector is given.
    pub postselect_probability: Option<T>,
    /// `1 + 2 eps <T> Im(A_w) + eps^2 |A_w|^2 <T^2>`; absent when `A_w` is undefined.
    pub norm_first_order: Option<T>,
    pub linear_regime_ok: bool,
    pub regime_margin: Option<T>,
    /// Post-selected mean time (exact pipeline only), s.
    pub mean_time: Option<T>,
}

/// Linear-regime diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeCheck<T> {
    pub ok: bool,
    pub margin: T,
}

/// Chirp linear-regime margin `m = (omega0 |eps| / 4R) |A_w|^2 / |Im A_w|`;
/// `ok` iff `m < 0.1`.
pub fn linear_regime_check<T: Real>(pulse: &ChirpPulse<T>, aw: &WeakValue<T>, epsilon: T) -> RegimeCheck<T> {
    let num = pulse.omega0().abs() * epsilon.abs() / (T::lit(4.0) * pulse.rate()) * aw.value.norm_sqr();
    let margin = if num == T::zero() {
        T::zero()
    } else {
        num / aw.im().abs()
    };
    RegimeCheck {
        ok: margin < T::lit(REGIME_THRESHOLD),
        margin,
    }
}

/// Regime margin for either family. Gaussians use `|eps| |A_w| tau`, the size
/// of the first-order term relative to the pointer over its duration.
pub fn regime_margin<T: Real>(pulse: &Pulse<T>, aw: &WeakValue<T>, epsilon: T) -> RegimeCheck<T> {
    match pulse {
        Pulse::Chirp(c) => linear_regime_check(c, aw, epsilon),
        Pulse::Gaussian(g) => {
            let margin = epsilon.abs() * aw.value.norm() * g.tau();
            RegimeCheck {
                ok: margin < T::lit(REGIME_THRESHOLD),
                margin,
            }
        }
    }
}

/// Eight log-spaced `epsilon` values over two decades, the largest at regime
/// margin 0.005.
pub fn default_epsilon_sweep<T: Real>(pulse: &Pulse<T>, aw: &WeakValue<T>) -> Vec<T> {
    let unit = regime_margin(pulse, aw, T::one()).margin;
    let eps_max = if unit > T::zero() && unit.is_finite() {
        T::lit(SWEEP_MAX_MARGIN) / unit
    } else {
        T::one()
    };
    log_sweep(eps_max, SWEEP_POINTS)
}

/// `n` log-spaced values ending at `eps_max` and spanning two decades.
pub fn log_sweep<T: Real>(eps_max: T, n: usize) -> Vec<T> {
    let lo = eps_max / T::lit(10.0).powf(T::lit(SWEEP_DECADES));
    if n < 2 {
        return vec![eps_max];
    }
    let (a, b) = (lo.ln(), eps_max.ln());
    (0..n)
        .map(|k| {
            if k == n - 1 {
                eps_max
            } else {
                (a + (b - a) * T::from_count(k) / T::from_count(n - 1)).exp()
            }
        })
        .collect()
}

/// Unnormalized post-selected pointer `c_H p(t) e^{-i eps t} + c_V p(t)`.
pub fn evolve_exact<T: Real>(
    w: &SampledWaveform<T>,
    cfg: &SelectorConfig<T>,
    ic: &InteractionConfig<T>,
) -> Result<SampledWaveform<T>, MeasurementError> {
    let (ch, cv) = selector_amplitudes(cfg);
    let eps = ic.epsilon;
    let out = w.map(|t, p| p * (ch * Complex::from_polar(T::one(), -eps * t) + cv));
    Ok(SampledWaveform::new(out.samples().to_vec(), out.dt(), out.t0(), out.omega0())?)
}

/// Squared norm of an (unnormalized) post-selected pointer.
pub fn postselect_probability_exact<T: Real>(w_out: &SampledWaveform<T>) -> T {
    w_out.norm_squared()
}

/// Mean time of a waveform, `<T> = sum t |p|^2 / sum |p|^2`.
pub fn mean_time<T: Real>(w: &SampledWaveform<T>) -> Option<T> {
    let m0 = w.norm_squared();
    if m0 > T::zero() {
        time_moment(w, 1).ok().map(|m1| m1 / m0)
    } else {
        None
    }
}

/// `d/domega` on the grid: five-point central stencil inside, three-point
/// and one-sided stencils at the two outermost points on each side.
fn derivative<T: Real>(a: &[Complex<T>], h: T) -> Vec<Complex<T>> {
    let n = a.len();
    let mut d = vec![Complex::new(T::zero(), T::zero()); n];
    if n < 2 {
        return d;
    }
    let twelve_h = T::lit(12.0) * h;
    let two_h = h + h;
    let eight = T::lit(8.0);
    for m in 0..n {
        d[m] = if m >= 2 && m + 2 < n {
            (a[m - 2] - a[m + 2] + (a[m + 1] - a[m - 1]) * eight) / twelve_h
        } else if m >= 1 && m + 1 < n {
            (a[m + 1] - a[m - 1]) / two_h
        } else if m == 0 {
            (a[1] - a[0]) / h
        } else {
            (a[n - 1] - a[n - 2]) / h
        };
    }
    d
}

fn first_order_unnormalized<T: Real>(
    s: &Spectrum<T>,
    aw: Complex<T>,
    epsilon: T,
) -> Result<Spectrum<T>, WaveformError> {
    let d = derivative(s.amplitudes(), s.domega());
    let k = aw * epsilon;
    let amps = s
        .amplitudes()
        .iter()
        .zip(d)
        .map(|(&p, dp)| p + dp * k)
        .collect();
    Spectrum::new(amps, s.domega(), s.offset(0), s.omega0())
}

/// `N (1 + eps A_w d/domega) p~(omega)`, renormalized to unit discrete norm.
pub fn first_order_pointer_spectrum<T: Real>(
    s: &Spectrum<T>,
    aw: &WeakValue<T>,
    epsilon: T,
) -> Result<Spectrum<T>, MeasurementError> {
    if !epsilon.is_finite() {
        return Err(MeasurementError::NonFinite("epsilon"));
    }
    Ok(first_order_unnormalized(s, aw.value, epsilon)?.normalized())
}

/// `1 + 2 eps <T> Im(A_w) + eps^2 |A_w|^2 <T^2>` for a unit-norm pointer.
pub fn norm_first_order<T: Real>(w: &SampledWaveform<T>, aw: Complex<T>, epsilon: T) -> T {
    let t1 = time_moment(w, 1).unwrap_or(T::zero());
    let t2 = time_moment(w, 2).unwrap_or(T::zero());
    T::one() + T::lit(2.0) * epsilon * t1 * aw.im + epsilon * epsilon * aw.norm_sqr() * t2
}

/// A pointer sampled once and reused across interaction strengths.
#[derive(Debug, Clone)]
pub struct PreparedPointer<T> {
    pulse: Option<Pulse<T>>,
    waveform: SampledWaveform<T>,
    spectrum: Spectrum<T>,
}

impl<T: Real> PreparedPointer<T> {
    /// Samples `pulse` on its measurement grid.
    pub fn new(pulse: &Pulse<T>) -> Result<Self, MeasurementError> {
        Self::with_grid(pulse, &pulse.measurement_grid(), T::zero())
    }

    /// Samples `pulse(t - delay)` on `grid`.
    pub fn with_grid(pulse: &Pulse<T>, grid: &SampleGrid<T>, delay: T) -> Result<Self, MeasurementError> {
        let waveform = sample_waveform_delayed(pulse, grid, delay)?;
        let spectrum = spectrum_fft(&waveform)?;
        Ok(Self {
            pulse: Some(*pulse),
            waveform,
            spectrum,
        })
    }

    /// Uses an already-sampled pointer (normalized here).
    pub fn from_waveform(w: &SampledWaveform<T>) -> Result<Self, MeasurementError> {
        let waveform = w.normalized();
        let spectrum = spectrum_fft(&waveform)?;
        Ok(Self {
            pulse: None,
            waveform,
            spectrum,
        })
    }

    pub fn pulse(&self) -> Option<&Pulse<T>> {
        self.pulse.as_ref()
    }

    pub fn waveform(&self) -> &SampledWaveform<T> {
        &self.waveform
    }

    pub fn spectrum(&self) -> &Spectrum<T> {
        &self.spectrum
    }

    fn regime(&self, aw: &WeakValue<T>, epsilon: T) -> RegimeCheck<T> {
        match &self.pulse {
            Some(p) => regime_margin(p, aw, epsilon),
            None => {
                let margin = epsilon.abs() * aw.value.norm() * rms_duration(&self.waveform);
                RegimeCheck {
                    ok: margin < T::lit(REGIME_THRESHOLD),
                    margin,
                }
            }
        }
    }

    /// Exact pipeline: evolve, post-select, take the spectral mean.
    pub fn exact(&self, cfg: &SelectorConfig<T>, ic: &InteractionConfig<T>) -> Result<MeasurementOutcome<T>, MeasurementError> {
        let out = evolve_exact(&self.waveform, cfg, ic)?;
        let probability = postselect_probability_exact(&out);
        if !(probability > T::zero()) {
            return Err(MeasurementError::Extinguished);
        }
        let shift = spectrum_fft(&out)?.mean_offset();
        let aw = weak_value_closed_form(cfg).ok().map(WeakValue::exact);
        let regime = aw.as_ref().map(|a| self.regime(a, ic.epsilon));
        Ok(MeasurementOutcome {
            method: Method::Exact,
            epsilon: ic.epsilon,
            mean_frequency: self.waveform.omega0() + shift,
            frequency_shift: shift,
            postselect_probability: Some(probability),
            norm_first_order: aw.map(|a| norm_first_order(&self.waveform, a.value, ic.epsilon)),
            linear_regime_ok: regime.map(|r| r.ok).unwrap_or(false),
            regime_margin: regime.map(|r| r.margin),
            mean_time: mean_time(&out),
        })
    }

    /// First-order pipeline on the stored spectrum.
    pub fn first_order(&self, aw: &WeakValue<T>, epsilon: T) -> Result<MeasurementOutcome<T>, MeasurementError> {
        let s = first_order_pointer_spectrum(&self.spectrum, aw, epsilon)?;
        let shift = s.mean_offset();
        let regime = self.regime(aw, epsilon);
        Ok(MeasurementOutcome {
            method: Method::FirstOrder,
            epsilon,
            mean_frequency: self.spectrum.omega0() + shift,
            frequency_shift: shift,
            postselect_probability: None,
            norm_first_order: Some(norm_first_order(&self.waveform, aw.value, epsilon)),
            linear_regime_ok: regime.ok,
            regime_margin: Some(regime.margin),
            mean_time: None,
        })
    }

    /// First-order pipeline with the weak value and post-selection
    /// probability taken from a selector (`|<s_f|s_i>|^2 N^2`, clamped to [0, 1]).
    pub fn first_order_selected(&self, cfg: &SelectorConfig<T>, epsilon: T) -> Result<MeasurementOutcome<T>, MeasurementError> {
        let aw = WeakValue::exact(weak_value_closed_form(cfg)?);
        let mut o = self.first_order(&aw, epsilon)?;
        let overlap = crate::polarization::postselection_overlap(cfg);
        o.postselect_probability = o
            .norm_first_order
            .map(|n| (overlap * n).max(T::zero()).min(T::one()));
        Ok(o)
    }

    pub fn outcome(&self, cfg: &SelectorConfig<T>, method: Method, epsilon: T) -> Result<MeasurementOutcome<T>, MeasurementError> {
        match method {
            Method::Exact => self.exact(cfg, &InteractionConfig::new(epsilon)?),
            Method::FirstOrder => self.first_order_selected(cfg, epsilon),
        }
    }
}

/// Exact pipeline on a freshly sampled pointer.
pub fn exact_mean_frequency<T: Real>(
    pulse: &Pulse<T>,
    cfg: &SelectorConfig<T>,
    ic: &InteractionConfig<T>,
) -> Result<MeasurementOutcome<T>, MeasurementError> {
    PreparedPointer::new(pulse)?.exact(cfg, ic)
}

/// First-order mean frequency `omega0 + <Omega>` of `N (1 + eps A_w d/domega) p~`.
pub fn first_order_mean_frequency<T: Real>(
    pulse: &Pulse<T>,
    aw: &WeakValue<T>,
    epsilon: T,
) -> Result<MeasurementOutcome<T>, MeasurementError> {
    PreparedPointer::new(pulse)?.first_order(aw, epsilon)
}

/// [`first_order_mean_frequency`] for an already-sampled pointer.
pub fn first_order_mean_frequency_sampled<T: Real>(
    w: &SampledWaveform<T>,
    aw: &WeakValue<T>,
    epsilon: T,
) -> Result<MeasurementOutcome<T>, MeasurementError> {
    PreparedPointer::from_waveform(w)?.first_order(aw, epsilon)
}

/// Straight-line fit `y = slope x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit<T> {
    pub slope: T,
    pub intercept: T,
    pub r_squared: T,
}

/// Ordinary least squares with intercept.
pub fn fit_line<T: Real>(x: &[T], y: &[T]) -> Result<LinearFit<T>, MeasurementError> {
    let n = x.len().min(y.len());
    if n < 2 {
        return Err(MeasurementError::TooFewPoints(n));
    }
    let nt = T::from_count(n);
    let xm = x[..n].iter().copied().sum::<T>() / nt;
    let ym = y[..n].iter().copied().sum::<T>() / nt;
    let sxx: T = x[..n].iter().map(|&v| (v - xm) * (v - xm)).sum();
    if !(sxx > T::zero()) {
        return Err(MeasurementError::DegenerateSweep);
    }
    let sxy: T = x[..n].iter().zip(&y[..n]).map(|(&a, &b)| (a - xm) * (b - ym)).sum();
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let ss_res: T = x[..n]
        .iter()
        .zip(&y[..n])
        .map(|(&a, &b)| (b - slope * a - intercept).powi(2))
        .sum();
    let ss_tot: T = y[..n].iter().map(|&b| (b - ym) * (b - ym)).sum();
    let r_squared = if ss_tot > T::zero() {
        T::one() - ss_res / ss_tot
    } else {
        T::one()
    };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Outcomes over a sweep, computed in parallel and returned in sweep order.
pub fn sweep<T: Real>(
    pointer: &PreparedPointer<T>,
    cfg: &SelectorConfig<T>,
    method: Method,
    eps_sweep: &[T],
) -> Result<Vec<MeasurementOutcome<T>>, MeasurementError> {
    eps_sweep
        .par_iter()
        .map(|&eps| pointer.outcome(cfg, method, eps))
        .collect()
}

/// Least-squares slope of `mean_frequency - omega0` against `epsilon`.
pub fn amplification_slope<T: Real>(
    pulse: &Pulse<T>,
    cfg: &SelectorConfig<T>,
    method: Method,
    eps_sweep: &[T],
) -> Result<LinearFit<T>, MeasurementError> {
    amplification_slope_prepared(&PreparedPointer::new(pulse)?, cfg, method, eps_sweep)
}

/// [`amplification_slope`] on a prepared pointer.
pub fn amplification_slope_prepared<T: Real>(
    pointer: &PreparedPointer<T>,
    cfg: &SelectorConfig<T>,
    method: Method,
    eps_sweep: &[T],
) -> Result<LinearFit<T>, MeasurementError> {
    if eps_sweep.len() < MIN_SLOPE_POINTS {
        return Err(MeasurementError::TooFewPoints(eps_sweep.len()));
    }
    if eps_sweep.iter().any(|e| !e.is_finite()) {
        return Err(MeasurementError::NonFinite("epsilon"));
    }
    if eps_sweep.iter().all(|&e| e == eps_sweep[0]) {
        return Err(MeasurementError::DegenerateSweep);
    }
    let outcomes = sweep(pointer, cfg, method, eps_sweep)?;
    let shifts: Vec<T> = outcomes.iter().map(|o| o.frequency_shift).collect();
    fit_line(eps_sweep, &shifts)
}
