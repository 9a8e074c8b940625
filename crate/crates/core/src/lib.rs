//! Numerical laboratory for weak value amplification of small frequency
//! shifts with Gaussian and linearly chirped pointers.
//!
//! * [`specfun`]: complex error function.
//! * [`waveform`]: pointer pulses, sampling, spectra and moments.
//! * [`polarization`]: selector states, weak value, uncertainty and error budget.
//! * [`measurement`]: exact and first-order post-selected mean frequency.
//! * [`config`] and [`experiment`]: the config-driven runner behind the CLI.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix `f64`.

pub mod config;
pub mod experiment;
pub mod measurement;
pub mod polarization;
pub mod scalar;
pub mod specfun;
pub mod waveform;

pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;

pub type GaussianPulse64 = waveform::GaussianPulse<f64>;
pub type ChirpPulse64 = waveform::ChirpPulse<f64>;
pub type Pulse64 = waveform::Pulse<f64>;
pub type SampleGrid64 = waveform::SampleGrid<f64>;
pub type SampledWaveform64 = waveform::SampledWaveform<f64>;
pub type Spectrum64 = waveform::Spectrum<f64>;

pub type SelectorConfig64 = polarization::SelectorConfig<f64>;
pub type WeakValue64 = polarization::WeakValue<f64>;

pub type InteractionConfig64 = measurement::InteractionConfig<f64>;
pub type MeasurementOutcome64 = measurement::MeasurementOutcome<f64>;

pub type GaussianPulse32 = waveform::GaussianPulse<f32>;
pub type ChirpPulse32 = waveform::ChirpPulse<f32>;
pub type SelectorConfig32 = polarization::SelectorConfig<f32>;
pub type WeakValue32 = polarization::WeakValue<f32>;
