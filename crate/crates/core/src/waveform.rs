//! Pointer waveforms, their spectra and spectral/temporal moments.
//!
//! Waveforms are stored as complex baseband envelopes: the carrier `omega0`
//! is never sampled, it is carried alongside the samples and added back to
//! every reported frequency.
//!
//! Fourier convention, used by both the FFT and the closed-form spectra:
//!
//! ```text
//! p~(omega) = 1/sqrt(2 pi) * integral p(t) exp(-i (omega - omega0) t) dt
//! ```
//!
//! so the chirp `exp(i R t^2)` sweeps upwards through the spectrum.

use std::io::Write;

use num_complex::Complex;
use rustfft::FftPlanner;
use serde::Serialize;
use thiserror::Error;

use crate::scalar::{is_finite_complex, Real};
use crate::specfun::{erf_sqrt_i_scaled, SpecfunError};

/// Default sample count for spectra.
pub const DEFAULT_SAMPLES: usize = 1 << 18;
/// Default sampling window of a chirp, in units of its duration.
pub const CHIRP_WINDOW_TAUS: f64 = 4.0;
/// Default sampling window of a Gaussian, in units of its duration.
pub const GAUSSIAN_WINDOW_TAUS: f64 = 16.0;
/// Smallest admissible Gaussian window, in units of `tau` (±6 tau).
pub const GAUSSIAN_MIN_WINDOW_TAUS: f64 = 12.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WaveformError {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("{0} must be finite")]
    NonFinite(&'static str),
    #[error("sample count {0} must be a power of two and at least 2")]
    BadSampleCount(usize),
    #[error("window {window:e} s does not cover the pulse support (needs {required:e} s)")]
    WindowTooSmall { window: f64, required: f64 },
    #[error("moment order {0} is not supported (use 0, 1 or 2)")]
    MomentOrder(u32),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
    #[error("csv output failed: {0}")]
    Csv(String),
}

fn positive<T: Real>(name: &'static str, value: T) -> Result<T, WaveformError> {
    if value > T::zero() && value.is_finite() {
        Ok(value)
    } else {
        Err(WaveformError::NonPositive {
            name,
            value: value.as_f64(),
        })
    }
}

fn finite<T: Real>(name: &'static str, value: T) -> Result<T, WaveformError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(WaveformError::NonFinite(name))
    }
}

/// Rectangle function: 1 on `[-1/2, 1/2]` (endpoints included), 0 elsewhere.
pub fn rect<T: Real>(x: T) -> T {
    if x.abs() <= T::lit(0.5) {
        T::one()
    } else {
        T::zero()
    }
}

/// Unit-norm Gaussian pulse with rms duration `tau`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianPulse<T> {
    omega0: T,
    tau: T,
}

impl<T: Real> GaussianPulse<T> {
    pub fn new(omega0: T, tau: T) -> Result<Self, WaveformError> {
        Ok(Self {
            omega0: finite("omega0", omega0)?,
            tau: positive("tau", tau)?,
        })
    }

    pub fn omega0(&self) -> T {
        self.omega0
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    /// Envelope value at `t = 0`.
    pub fn peak_amplitude(&self) -> T {
        T::one() / ((T::TAU()).powf(T::lit(0.25)) * self.tau.sqrt())
    }

    /// Baseband envelope `(2 pi)^(-1/4) tau^(-1/2) exp(-t^2 / 4 tau^2)`.
    pub fn envelope(&self, t: T) -> Complex<T> {
        let x = t / self.tau;
        Complex::new(
            self.peak_amplitude() * (-(x * x) * T::lit(0.25)).exp(),
            T::zero(),
        )
    }

    /// Closed-form spectrum at baseband offset `offset = omega - omega0`:
    /// `2 sqrt(pi) tau^(1/2) (2 pi)^(-3/4) exp(-offset^2 tau^2)`.
    pub fn spectrum_at_offset(&self, offset: T) -> Complex<T> {
        let scale = T::lit(2.0) * T::PI().sqrt() * self.tau.sqrt() / T::TAU().powf(T::lit(0.75));
        let x = offset * self.tau;
        Complex::new(scale * (-(x * x)).exp(), T::zero())
    }

    /// rms spectral width `1 / (2 tau)`.
    pub fn spectral_width(&self) -> T {
        T::one() / (T::lit(2.0) * self.tau)
    }
}

/// Linear chirp `rect(t/tau)/sqrt(tau) exp[i (omega0 + R t) t]`.
///
/// The instantaneous frequency is `omega0 + 2 R t`, sweeping the band
/// `[omega0 - delta, omega0 + delta]` with `delta = R tau`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChirpPulse<T> {
    omega0: T,
    tau: T,
    rate: T,
}

impl<T: Real> ChirpPulse<T> {
    pub fn new(omega0: T, tau: T, rate: T) -> Result<Self, WaveformError> {
        Ok(Self {
            omega0: finite("omega0", omega0)?,
            tau: positive("tau", tau)?,
            rate: positive("chirp rate", rate)?,
        })
    }

    /// Builds the chirp from its full swept bandwidth `2 delta`.
    pub fn from_bandwidth(omega0: T, tau: T, full_bandwidth: T) -> Result<Self, WaveformError> {
        let tau = positive("tau", tau)?;
        let bw = positive("bandwidth", full_bandwidth)?;
        Self::new(omega0, tau, bw / (T::lit(2.0) * tau))
    }

    pub fn omega0(&self) -> T {
        self.omega0
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn rate(&self) -> T {
        self.rate
    }

    /// Half-bandwidth `delta = R tau`.
    pub fn delta(&self) -> T {
        self.rate * self.tau
    }

    /// Time-bandwidth product `tau * delta`.
    pub fn time_bandwidth(&self) -> T {
        self.tau * self.delta()
    }

    /// Baseband envelope `rect(t/tau)/sqrt(tau) exp(i R t^2)`.
    pub fn envelope(&self, t: T) -> Complex<T> {
        let amp = rect(t / self.tau) / self.tau.sqrt();
        if amp == T::zero() {
            return Complex::new(T::zero(), T::zero());
        }
        Complex::from_polar(amp, self.rate * t * t)
    }
}

/// Either pointer family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Pulse<T> {
    Gaussian(GaussianPulse<T>),
    Chirp(ChirpPulse<T>),
}

impl<T> From<GaussianPulse<T>> for Pulse<T> {
    fn from(p: GaussianPulse<T>) -> Self {
        Pulse::Gaussian(p)
    }
}

impl<T> From<ChirpPulse<T>> for Pulse<T> {
    fn from(p: ChirpPulse<T>) -> Self {
        Pulse::Chirp(p)
    }
}

impl<T: Real> Pulse<T> {
    pub fn omega0(&self) -> T {
        match self {
            Pulse::Gaussian(p) => p.omega0(),
            Pulse::Chirp(p) => p.omega0(),
        }
    }

    pub fn tau(&self) -> T {
        match self {
            Pulse::Gaussian(p) => p.tau(),
            Pulse::Chirp(p) => p.tau(),
        }
    }

    pub fn envelope(&self, t: T) -> Complex<T> {
        match self {
            Pulse::Gaussian(p) => p.envelope(t),
            Pulse::Chirp(p) => p.envelope(t),
        }
    }

    /// Half-width of the time interval the sampling window must cover.
    pub fn support_half_width(&self) -> T {
        match self {
            Pulse::Gaussian(p) => p.tau() * T::lit(GAUSSIAN_MIN_WINDOW_TAUS * 0.5),
            Pulse::Chirp(p) => p.tau() * T::lit(0.5),
        }
    }

    /// Grid used for spectra and figure data.
    pub fn spectrum_grid(&self) -> SampleGrid<T> {
        let taus = match self {
            Pulse::Gaussian(_) => GAUSSIAN_WINDOW_TAUS,
            Pulse::Chirp(_) => CHIRP_WINDOW_TAUS,
        };
        SampleGrid {
            n: DEFAULT_SAMPLES,
            window: self.tau() * T::lit(taus),
        }
    }

    /// Grid used by the measurement pipelines.
    ///
    /// The first-order pipeline differentiates the spectrum on the grid, so
    /// the frequency spacing `2 pi / window` must resolve the chirp's
    /// quadratic spectral phase; the window is 64 tau (chirp) or 256 tau
    /// (Gaussian). The sample count is raised when needed to keep the
    /// Nyquist frequency above 12 delta.
    pub fn measurement_grid(&self) -> SampleGrid<T> {
        match self {
            Pulse::Gaussian(p) => SampleGrid {
                n: DEFAULT_SAMPLES,
                window: p.tau() * T::lit(256.0),
            },
            Pulse::Chirp(p) => {
                let window = p.tau() * T::lit(64.0);
                let needed = (T::lit(24.0) * p.delta() * window / T::TAU())
                    .to_usize()
                    .unwrap_or(usize::MAX);
                let n = needed.max(DEFAULT_SAMPLES).checked_next_power_of_two();
                SampleGrid {
                    n: n.unwrap_or(DEFAULT_SAMPLES).min(1 << 24),
                    window,
                }
            }
        }
    }
}

/// Uniform symmetric time grid: `n` samples at `t_k = (k - (n-1)/2) dt`,
/// `dt = window / n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleGrid<T> {
    pub n: usize,
    pub window: T,
}

impl<T: Real> SampleGrid<T> {
    pub fn new(n: usize, window: T) -> Result<Self, WaveformError> {
        if n < 2 || !n.is_power_of_two() {
            return Err(WaveformError::BadSampleCount(n));
        }
        Ok(Self {
            n,
            window: positive("window", window)?,
        })
    }

    pub fn dt(&self) -> T {
        self.window / T::from_count(self.n)
    }

    /// First sample time.
    pub fn t0(&self) -> T {
        -(T::from_count(self.n - 1) * T::lit(0.5)) * self.dt()
    }
}

/// Sampled baseband waveform.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledWaveform<T> {
    samples: Vec<Complex<T>>,
    dt: T,
    t0: T,
    omega0: T,
}

impl<T: Real> SampledWaveform<T> {
    pub fn new(samples: Vec<Complex<T>>, dt: T, t0: T, omega0: T) -> Result<Self, WaveformError> {
        if samples.len() < 2 || !samples.len().is_power_of_two() {
            return Err(WaveformError::BadSampleCount(samples.len()));
        }
        positive("dt", dt)?;
        finite("t0", t0)?;
        finite("omega0", omega0)?;
        if !samples.iter().all(|z| is_finite_complex(*z)) {
            return Err(WaveformError::NonFinite("samples"));
        }
        Ok(Self {
            samples,
            dt,
            t0,
            omega0,
        })
    }

    pub fn samples(&self) -> &[Complex<T>] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn t0(&self) -> T {
        self.t0
    }

    pub fn omega0(&self) -> T {
        self.omega0
    }

    pub fn time(&self, k: usize) -> T {
        self.t0 + T::from_count(k) * self.dt
    }

    /// `sum |p_k|^2 dt`.
    pub fn norm_squared(&self) -> T {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<T>() * self.dt
    }

    /// Returns a copy scaled to unit discrete norm.
    pub fn normalized(&self) -> Self {
        let scale = T::one() / self.norm_squared().sqrt();
        self.map(|_, z| z * scale)
    }

    /// Applies `f(t_k, p_k)` sample by sample on the same grid.
    pub fn map(&self, f: impl Fn(T, Complex<T>) -> Complex<T>) -> Self {
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(k, &z)| f(self.time(k), z))
            .collect();
        Self {
            samples,
            dt: self.dt,
            t0: self.t0,
            omega0: self.omega0,
        }
    }

    /// Time reversal `p(t) -> conj(p(-t))`.
    ///
    /// Exact on symmetric grids; on a shifted grid the result lives on the
    /// mirrored grid.
    pub fn time_reversed(&self) -> Self {
        let n = self.samples.len();
        let samples = (0..n).map(|k| self.samples[n - 1 - k].conj()).collect();
        Self {
            samples,
            dt: self.dt,
            t0: -(self.t0 + T::from_count(n - 1) * self.dt),
            omega0: self.omega0,
        }
    }
}

/// Samples `pulse` on `grid` and normalizes to unit discrete norm.
pub fn sample_waveform<T: Real>(
    pulse: &Pulse<T>,
    grid: &SampleGrid<T>,
) -> Result<SampledWaveform<T>, WaveformError> {
    sample_waveform_delayed(pulse, grid, T::zero())
}

/// Samples `pulse(t - delay)` on `grid` and normalizes to unit discrete norm.
pub fn sample_waveform_delayed<T: Real>(
    pulse: &Pulse<T>,
    grid: &SampleGrid<T>,
    delay: T,
) -> Result<SampledWaveform<T>, WaveformError> {
    let grid = SampleGrid::new(grid.n, grid.window)?;
    finite("delay", delay)?;
    let required = T::lit(2.0) * (pulse.support_half_width() + delay.abs());
    if grid.window < required {
        return Err(WaveformError::WindowTooSmall {
            window: grid.window.as_f64(),
            required: required.as_f64(),
        });
    }
    let dt = grid.dt();
    let t0 = grid.t0();
    let samples = (0..grid.n)
        .map(|k| pulse.envelope(t0 + T::from_count(k) * dt - delay))
        .collect();
    Ok(SampledWaveform::new(samples, dt, t0, pulse.omega0())?.normalized())
}

/// Complex spectrum on a uniform angular-frequency grid.
///
/// Frequencies are stored as a baseband offset grid plus the carrier so that
/// small shifts of the mean survive next to a 1e10 s^-1 carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    amplitudes: Vec<Complex<T>>,
    domega: T,
    offset_start: T,
    omega0: T,
}

impl<T: Real> Spectrum<T> {
    pub fn new(
        amplitudes: Vec<Complex<T>>,
        domega: T,
        offset_start: T,
        omega0: T,
    ) -> Result<Self, WaveformError> {
        positive("domega", domega)?;
        finite("offset_start", offset_start)?;
        finite("omega0", omega0)?;
        if !amplitudes.iter().all(|z| is_finite_complex(*z)) {
            return Err(WaveformError::NonFinite("amplitudes"));
        }
        Ok(Self {
            amplitudes,
            domega,
            offset_start,
            omega0,
        })
    }

    /// Tabulates `f(offset)` on `n` points starting at `offset_start`.
    pub fn from_offsets(
        omega0: T,
        offset_start: T,
        domega: T,
        n: usize,
        f: impl Fn(T) -> Result<Complex<T>, WaveformError>,
    ) -> Result<Self, WaveformError> {
        let amplitudes = (0..n)
            .map(|m| f(offset_start + T::from_count(m) * domega))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(amplitudes, domega, offset_start, omega0)
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn domega(&self) -> T {
        self.domega
    }

    pub fn omega0(&self) -> T {
        self.omega0
    }

    /// Absolute frequency of the first grid point.
    pub fn omega_start(&self) -> T {
        self.omega0 + self.offset_start
    }

    /// Baseband offset `omega_m - omega0`.
    pub fn offset(&self, m: usize) -> T {
        self.offset_start + T::from_count(m) * self.domega
    }

    /// Absolute frequency of grid point `m`.
    pub fn omega(&self, m: usize) -> T {
        self.omega0 + self.offset(m)
    }

    pub fn power(&self, m: usize) -> T {
        self.amplitudes[m].norm_sqr()
    }

    /// Midpoint-rule moment of the power spectrum in the baseband offset.
    pub fn offset_moment(&self, n: u32) -> T {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(m, a)| self.offset(m).powi(n as i32) * a.norm_sqr())
            .sum::<T>()
            * self.domega
    }

    /// Power-weighted mean offset from the carrier.
    pub fn mean_offset(&self) -> T {
        self.offset_moment(1) / self.offset_moment(0)
    }

    /// rms spectral width.
    pub fn rms_width(&self) -> T {
        let m0 = self.offset_moment(0);
        let mean = self.offset_moment(1) / m0;
        (self.offset_moment(2) / m0 - mean * mean).max(T::zero()).sqrt()
    }

    /// Sub-spectrum on the absolute frequency interval `[lo, hi]`.
    pub fn band(&self, lo: T, hi: T) -> Self {
        let idx: Vec<usize> = (0..self.len())
            .filter(|&m| {
                let w = self.omega(m);
                w >= lo && w <= hi
            })
            .collect();
        let first = idx.first().copied().unwrap_or(0);
        Self {
            amplitudes: idx.iter().map(|&m| self.amplitudes[m]).collect(),
            domega: self.domega,
            offset_start: self.offset(first),
            omega0: self.omega0,
        }
    }

    /// Returns a copy scaled to unit discrete norm.
    pub fn normalized(&self) -> Self {
        let scale = T::one() / self.offset_moment(0).sqrt();
        Self {
            amplitudes: self.amplitudes.iter().map(|a| a * scale).collect(),
            ..self.clone()
        }
    }

    /// Writes `omega,re,im,power` rows, one per grid point.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), WaveformError> {
        let mut w = csv::Writer::from_writer(out);
        let err = |e: csv::Error| WaveformError::Csv(e.to_string());
        w.write_record(["omega", "re", "im", "power"]).map_err(err)?;
        for (m, a) in self.amplitudes.iter().enumerate() {
            w.write_record(&[
                self.omega(m).as_f64().to_string(),
                a.re.as_f64().to_string(),
                a.im.as_f64().to_string(),
                a.norm_sqr().as_f64().to_string(),
            ])
            .map_err(err)?;
        }
        w.flush().map_err(|e| WaveformError::Csv(e.to_string()))
    }
}

/// Unitary DFT approximation of the continuous transform
/// `p~(omega) = 1/sqrt(2 pi) sum_k p_k exp(-i (omega - omega0) t_k) dt`.
///
/// The output grid has spacing `2 pi / (n dt)` and is symmetric about the
/// carrier (offsets `(m - (n-1)/2) domega`).
pub fn spectrum_fft<T: Real>(w: &SampledWaveform<T>) -> Result<Spectrum<T>, WaveformError> {
    let n = w.len();
    let n_t = T::from_count(n);
    let dt = w.dt();
    let domega = T::TAU() / (n_t * dt);
    let half = T::from_count(n - 1) * T::lit(0.5);
    let offset_start = -half * domega;

    // e^{-i offset_0 k dt} = (-1)^k e^{-i pi k / n}
    let mut buf: Vec<Complex<T>> = w
        .samples()
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let sign = if k % 2 == 0 { T::one() } else { -T::one() };
            p * Complex::from_polar(sign, -T::PI() * T::from_count(k) / n_t)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    // e^{-i offset_m t_sym} = (-1)^j i e^{-i pi (j + 1/2)/n}, j = m - n/2, for
    // the symmetric grid t_sym = -(n-1)/2 dt; any residual shift of t0 is
    // applied explicitly.
    let t_sym = -half * dt;
    let shift = w.t0() - t_sym;
    let scale = dt / T::TAU().sqrt();
    let half_n = n / 2;
    let amplitudes = buf
        .into_iter()
        .enumerate()
        .map(|(m, q)| {
            let (j_abs, j_neg) = if m >= half_n {
                (m - half_n, false)
            } else {
                (half_n - m, true)
            };
            let j = if j_neg {
                -T::from_count(j_abs)
            } else {
                T::from_count(j_abs)
            };
            let sign = if j_abs % 2 == 0 { T::one() } else { -T::one() };
            let small = -T::PI() * (j + T::lit(0.5)) / n_t;
            let mut phase = Complex::new(T::zero(), sign) * Complex::from_polar(T::one(), small);
            if shift != T::zero() {
                let offset = offset_start + T::from_count(m) * domega;
                phase = phase * Complex::from_polar(T::one(), -offset * shift);
            }
            q * phase * scale
        })
        .collect();
    Spectrum::new(amplitudes, domega, offset_start, w.omega0())
}

/// Closed-form chirp spectrum at absolute frequency `omega`:
///
/// ```text
/// e^{i pi/4} e^{-i Omega^2/(4R)} / sqrt(8 delta)
///     * [ Erf((delta + Omega) / (2 sqrt(i R))) + Erf((delta - Omega) / (2 sqrt(i R))) ]
/// ```
///
/// with `Omega = omega - omega0`. The constant `e^{i pi/4}` is the phase of
/// the exact transform under the crate's Fourier convention.
pub fn chirp_spectrum_analytic<T: Real>(
    pulse: &ChirpPulse<T>,
    omega: T,
) -> Result<Complex<T>, SpecfunError> {
    chirp_spectrum_analytic_offset(pulse, omega - pulse.omega0())
}

/// [`chirp_spectrum_analytic`] evaluated at a baseband offset.
pub fn chirp_spectrum_analytic_offset<T: Real>(
    pulse: &ChirpPulse<T>,
    offset: T,
) -> Result<Complex<T>, SpecfunError> {
    let rate = pulse.rate();
    let delta = pulse.delta();
    let bracket = erf_sqrt_i_scaled(delta + offset, rate)? + erf_sqrt_i_scaled(delta - offset, rate)?;
    let phase = T::FRAC_PI_4() - offset * offset / (T::lit(4.0) * rate);
    Ok(bracket * Complex::from_polar(T::one(), phase) / (T::lit(8.0) * delta).sqrt())
}

/// Rectangular-spectrum approximation at absolute frequency `omega`:
/// `rect(Omega / 2 delta) exp(-i Omega^2 / 4R) / sqrt(2 delta)`.
pub fn chirp_spectrum_rect_approx<T: Real>(pulse: &ChirpPulse<T>, omega: T) -> Complex<T> {
    chirp_spectrum_rect_approx_offset(pulse, omega - pulse.omega0())
}

/// [`chirp_spectrum_rect_approx`] evaluated at a baseband offset.
pub fn chirp_spectrum_rect_approx_offset<T: Real>(pulse: &ChirpPulse<T>, offset: T) -> Complex<T> {
    let delta = pulse.delta();
    let amp = rect(offset / (T::lit(2.0) * delta)) / (T::lit(2.0) * delta).sqrt();
    if amp == T::zero() {
        return Complex::new(T::zero(), T::zero());
    }
    Complex::from_polar(amp, -(offset * offset) / (T::lit(4.0) * pulse.rate()))
}

/// `sum omega^n |p~(omega)|^2 domega` with absolute frequencies, `n` in {0, 1, 2}.
pub fn spectral_moment<T: Real>(s: &Spectrum<T>, n: u32) -> Result<T, WaveformError> {
    let w0 = s.omega0();
    match n {
        0 => Ok(s.offset_moment(0)),
        1 => Ok(w0 * s.offset_moment(0) + s.offset_moment(1)),
        2 => Ok(w0 * w0 * s.offset_moment(0)
            + T::lit(2.0) * w0 * s.offset_moment(1)
            + s.offset_moment(2)),
        _ => Err(WaveformError::MomentOrder(n)),
    }
}

/// `sum t^n |p(t)|^2 dt`, `n` in {0, 1, 2}.
pub fn time_moment<T: Real>(w: &SampledWaveform<T>, n: u32) -> Result<T, WaveformError> {
    if n > 2 {
        return Err(WaveformError::MomentOrder(n));
    }
    Ok(w
        .samples()
        .iter()
        .enumerate()
        .map(|(k, z)| w.time(k).powi(n as i32) * z.norm_sqr())
        .sum::<T>()
        * w.dt())
}

/// rms duration of a sampled waveform.
pub fn rms_duration<T: Real>(w: &SampledWaveform<T>) -> T {
    let m0 = w.norm_squared();
    let m1 = time_moment(w, 1).unwrap_or(T::zero()) / m0;
    let m2 = time_moment(w, 2).unwrap_or(T::zero()) / m0;
    (m2 - m1 * m1).max(T::zero()).sqrt()
}

/// Product of rms duration and rms spectral width.
pub fn time_bandwidth_product<T: Real>(w: &SampledWaveform<T>, s: &Spectrum<T>) -> T {
    rms_duration(w) * s.rms_width()
}
