mod common;

use common::rel_err;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wva_lab::waveform::{
    chirp_spectrum_analytic_offset, chirp_spectrum_rect_approx_offset, sample_waveform,
    spectrum_fft, time_bandwidth_product, SampleGrid, Spectrum,
};
use wva_lab::{ChirpPulse64, GaussianPulse64, Pulse64};

const W0: f64 = 1.0e10;

fn chirp(tau: f64, rate: f64) -> ChirpPulse64 {
    ChirpPulse64::new(W0, tau, rate).unwrap()
}

fn fft_spectrum(pulse: Pulse64, n: usize, window: f64) -> Spectrum<f64> {
    let w = sample_waveform(&pulse, &SampleGrid::new(n, window).unwrap()).unwrap();
    spectrum_fft(&w).unwrap()
}

/// (relative L2 error over the grid, worst in-band pointwise relative error)
fn analytic_vs_fft(c: &ChirpPulse64, n: usize) -> (f64, f64) {
    let s = fft_spectrum((*c).into(), n, 4.0 * c.tau());
    let (mut num, mut den, mut worst) = (0.0, 0.0, 0.0_f64);
    for (m, a) in s.amplitudes().iter().enumerate() {
        let x = s.offset(m);
        let exact = chirp_spectrum_analytic_offset(c, x).unwrap();
        num += (a - exact).norm_sqr();
        den += exact.norm_sqr();
        if x.abs() <= c.delta() {
            worst = worst.max(rel_err(*a, exact));
        }
    }
    ((num / den).sqrt(), worst)
}

#[test]
fn radar_chirp_analytic_matches_fft() {
    let c = chirp(1.0e-5, 1.0e13);
    let (l2, pointwise) = analytic_vs_fft(&c, 1 << 20);
    assert!(l2 < 1e-3, "L2 {l2:e}");
    assert!(pointwise < 1e-2, "pointwise {pointwise:e}");
}

#[test]
fn random_chirps_analytic_matches_fft() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..10 {
        let tau = 10f64.powf(rng.random_range(-6.0..-4.0));
        let tb = 10f64.powf(rng.random_range(1.0..2000f64.log10()));
        let c = chirp(tau, tb / (tau * tau));
        let (l2, pointwise) = analytic_vs_fft(&c, 1 << 18);
        assert!(l2 < 1e-3, "tau {tau:e} tau*delta {tb}: L2 {l2:e}");
        assert!(pointwise < 1e-2, "tau {tau:e} tau*delta {tb}: pointwise {pointwise:e}");
    }
}

#[test]
fn analytic_spectrum_is_unit_norm() {
    let c = chirp(1.0e-5, 1.0e13);
    let d = c.delta();
    let n = 400_000;
    let h = 40.0 * d / n as f64;
    let sum: f64 = (0..n)
        .map(|k| {
            let x = -20.0 * d + (k as f64 + 0.5) * h;
            chirp_spectrum_analytic_offset(&c, x).unwrap().norm_sqr()
        })
        .sum::<f64>()
        * h;
    assert!((sum - 1.0).abs() < 2e-3, "{sum}");
}

#[test]
fn rect_approximation_improves_with_time_bandwidth() {
    let tau = 1.0e-5;
    let mut prev = f64::INFINITY;
    for tb in [10.0, 100.0, 1000.0] {
        let c = chirp(tau, tb / (tau * tau));
        let d = c.delta();
        let n = 200_000;
        let h = 8.0 * d / n as f64;
        let mut diff = 0.0;
        for k in 0..n {
            let x = -4.0 * d + (k as f64 + 0.5) * h;
            let a = chirp_spectrum_analytic_offset(&c, x).unwrap().norm_sqr();
            let r = chirp_spectrum_rect_approx_offset(&c, x).norm_sqr();
            diff += (a - r).abs() * h;
        }
        assert!(diff < prev, "tau*delta {tb}: {diff} after {prev}");
        prev = diff;
    }
    // misallocated power fraction, about 0.1 at tau*delta = 1000
    assert!(prev < 0.12);
}

#[test]
fn rect_approximation_phase_in_band() {
    // away from the edges the analytic phase is the quadratic one plus pi/4
    let c = chirp(1.0e-5, 1.0e13);
    for k in -5..=5 {
        let x = 0.1 * k as f64 * c.delta();
        let a = chirp_spectrum_analytic_offset(&c, x).unwrap();
        let r = chirp_spectrum_rect_approx_offset(&c, x) * Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        assert!(rel_err(a, r) < 0.1, "offset {x}");
    }
}

#[test]
fn parseval_for_random_pulses() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for i in 0..8 {
        let tau = 10f64.powf(rng.random_range(-7.0..-4.0));
        let (pulse, window): (Pulse64, f64) = if i % 2 == 0 {
            (GaussianPulse64::new(W0, tau).unwrap().into(), 16.0 * tau)
        } else {
            let tb = rng.random_range(5.0..500.0);
            (chirp(tau, tb / (tau * tau)).into(), 4.0 * tau)
        };
        let w = sample_waveform(&pulse, &SampleGrid::new(1 << 16, window).unwrap()).unwrap();
        let s = spectrum_fft(&w).unwrap();
        let time = w.norm_squared();
        let freq = s.offset_moment(0);
        assert!((time - 1.0).abs() < 1e-12);
        assert!((freq - time).abs() < 1e-8, "{freq} vs {time}");
    }
}

#[test]
fn gaussian_fft_matches_closed_form() {
    let g = GaussianPulse64::new(W0, 1.0e-6).unwrap();
    let s = fft_spectrum(g.into(), 1 << 16, 16.0 * g.tau());
    let peak = g.spectrum_at_offset(0.0).norm();
    for (m, a) in s.amplitudes().iter().enumerate() {
        let e = g.spectrum_at_offset(s.offset(m));
        assert!((a - e).norm() < 1e-7 * peak);
    }
}

#[test]
fn gaussian_is_transform_limited() {
    let g = GaussianPulse64::new(W0, 1.0e-6).unwrap();
    let w = sample_waveform(&g.into(), &SampleGrid::new(1 << 16, 16.0 * g.tau()).unwrap()).unwrap();
    let s = spectrum_fft(&w).unwrap();
    let tbp = time_bandwidth_product(&w, &s);
    assert!((tbp - 0.5).abs() < 0.005, "{tbp}");
}

fn chirp_tbp_in_band(tb: f64) -> f64 {
    let tau = 1.0e-5;
    let c = chirp(tau, tb / (tau * tau));
    let w = sample_waveform(&c.into(), &SampleGrid::new(1 << 18, 4.0 * tau).unwrap()).unwrap();
    let s = spectrum_fft(&w).unwrap();
    time_bandwidth_product(&w, &s.band(W0 - c.delta(), W0 + c.delta()))
}

#[test]
fn chirp_time_bandwidth_grows_linearly() {
    let (a, b) = (chirp_tbp_in_band(100.0), chirp_tbp_in_band(1000.0));
    assert!((b / a / 10.0 - 1.0).abs() < 0.05, "{a} {b}");
    // flat spectrum over 2 delta and flat envelope over tau give tau*delta/6
    assert!((b / (1000.0 / 6.0) - 1.0).abs() < 0.05, "{b}");
    assert!(a > 0.5 && b > 0.5);
}

#[test]
fn chirp_power_is_symmetric_about_carrier() {
    let c = chirp(1.0e-5, 1.0e13);
    let s = fft_spectrum(c.into(), 1 << 16, 4.0 * c.tau());
    assert!(s.mean_offset().abs() < 1e-6 * c.delta());
}

#[test]
fn time_reversal_conjugates_spectrum() {
    let c = chirp(1.0e-5, 1.0e13);
    let w = sample_waveform(&c.into(), &SampleGrid::new(1 << 14, 4.0 * c.tau()).unwrap()).unwrap();
    let s = spectrum_fft(&w).unwrap();
    let r = spectrum_fft(&w.time_reversed()).unwrap();
    let peak = s.amplitudes().iter().map(|a| a.norm()).fold(0.0, f64::max);
    for (a, b) in s.amplitudes().iter().zip(r.amplitudes()) {
        assert!((a.conj() - b).norm() < 1e-9 * peak);
    }
}

#[test]
fn constructors_reject_bad_input() {
    assert!(GaussianPulse64::new(W0, 0.0).is_err());
    assert!(GaussianPulse64::new(W0, f64::NAN).is_err());
    assert!(ChirpPulse64::new(W0, 1e-5, -1.0).is_err());
    assert!(ChirpPulse64::new(W0, -1e-5, 1e13).is_err());
    assert!(SampleGrid::<f64>::new(1, 1.0).is_err());
    let c: Pulse64 = chirp(1e-5, 1e13).into();
    assert!(sample_waveform(&c, &SampleGrid::new(1024, 0.5e-5).unwrap()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn sampled_pointer_is_unit_norm(tau_exp in -8.0f64..-3.0, tb in 2.0f64..300.0) {
        let tau = 10f64.powf(tau_exp);
        let p: Pulse64 = chirp(tau, tb / (tau * tau)).into();
        let w = sample_waveform(&p, &SampleGrid::new(4096, 4.0 * tau).unwrap()).unwrap();
        prop_assert!((w.norm_squared() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rect_approx_vanishes_out_of_band(k in 1.0001f64..10.0) {
        let c = chirp(1e-5, 1e13);
        prop_assert_eq!(chirp_spectrum_rect_approx_offset(&c, k * c.delta()).norm(), 0.0);
    }
}

