//! Selector (polarization) algebra: weak value, uncertainty propagation and
//! the error-budget search.
//!
//! States, with `theta = pi/4 + alpha`:
//!
//! ```text
//! |s_i> = (|H> + e^{i beta} |V>) / sqrt(2)
//! |s_f> = cos(theta) |H> - sin(theta) |V>
//! A     = |H><H|
//! ```
//!
//! so `<s_f|s_i> = D / sqrt(2)` with `D = cos(theta) - e^{i beta} sin(theta)` and
//! `A_w = cos(theta) / D`.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::scalar::Real;

/// Overlap `|<s_f|s_i>|^2` below which the weak value is declared divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1.0e-30;

/// Number of log-spaced points in the coarse `beta` scan of the budget search.
pub const BUDGET_SCAN_POINTS: usize = 600;
/// Lower end of the `beta` scan, rad.
pub const BUDGET_BETA_MIN: f64 = 1.0e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolarizationError {
    #[error("weak value diverges: |<s_f|s_i>|^2 = {overlap:e} (alpha = beta = 0 is singular)")]
    DivergentWeakValue { overlap: f64 },
    #[error("{0} must be finite")]
    NonFinite(&'static str),
    #[error("{name} uncertainty must be non-negative, got {value}")]
    NegativeUncertainty { name: &'static str, value: f64 },
    #[error("relative error budget must lie in (0, 1), got {0}")]
    InvalidBudget(f64),
    #[error("at least one of dbeta, dalpha must be positive")]
    NoUncertainty,
    #[error("no selector setting meets a relative error of {budget} with dbeta = {dbeta:e} rad, dalpha = {dalpha:e} rad")]
    InfeasibleBudget { budget: f64, dbeta: f64, dalpha: f64 },
}

/// Pre/post-selection angles and their 1-sigma uncertainties, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SelectorConfig<T> {
    pub alpha: T,
    pub beta: T,
    pub dalpha: T,
    pub dbeta: T,
}

impl<T: Real> SelectorConfig<T> {
    pub fn new(alpha: T, beta: T, dalpha: T, dbeta: T) -> Result<Self, PolarizationError> {
        if !alpha.is_finite() {
            return Err(PolarizationError::NonFinite("alpha"));
        }
        if !beta.is_finite() {
            return Err(PolarizationError::NonFinite("beta"));
        }
        for (name, value) in [("dalpha", dalpha), ("dbeta", dbeta)] {
            if !value.is_finite() {
                return Err(PolarizationError::NonFinite(name));
            }
            if value < T::zero() {
                return Err(PolarizationError::NegativeUncertainty {
                    name,
                    value: value.as_f64(),
                });
            }
        }
        Ok(Self {
            alpha,
            beta,
            dalpha,
            dbeta,
        })
    }

    /// Angles without uncertainty.
    pub fn exact(alpha: T, beta: T) -> Result<Self, PolarizationError> {
        Self::new(alpha, beta, T::zero(), T::zero())
    }

    /// Same as [`SelectorConfig::new`] with every angle in degrees.
    pub fn from_degrees(
        alpha_deg: T,
        beta_deg: T,
        dalpha_deg: T,
        dbeta_deg: T,
    ) -> Result<Self, PolarizationError> {
        Self::new(
            alpha_deg.to_radians(),
            beta_deg.to_radians(),
            dalpha_deg.to_radians(),
            dbeta_deg.to_radians(),
        )
    }

    pub fn with_uncertainties(self, dalpha: T, dbeta: T) -> Result<Self, PolarizationError> {
        Self::new(self.alpha, self.beta, dalpha, dbeta)
    }

    /// Polarizer angle `theta = pi/4 + alpha`.
    pub fn theta(&self) -> T {
        T::FRAC_PI_4() + self.alpha
    }

    /// Jones vector `(H, V)` of the initial state.
    pub fn initial_state(&self) -> [Complex<T>; 2] {
        let s = T::FRAC_1_SQRT_2();
        [Complex::new(s, T::zero()), Complex::from_polar(s, self.beta)]
    }

    /// Jones vector `(H, V)` of the final state.
    pub fn final_state(&self) -> [Complex<T>; 2] {
        let th = self.theta();
        [Complex::new(th.cos(), T::zero()), Complex::new(-th.sin(), T::zero())]
    }
}

/// Weak value with propagated 1-sigma uncertainties of its parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeakValue<T> {
    pub value: Complex<T>,
    pub sigma_re: T,
    pub sigma_im: T,
}

impl<T: Real> WeakValue<T> {
    /// A weak value known without uncertainty.
    pub fn exact(value: Complex<T>) -> Self {
        Self {
            value,
            sigma_re: T::zero(),
            sigma_im: T::zero(),
        }
    }

    pub fn re(&self) -> T {
        self.value.re
    }

    pub fn im(&self) -> T {
        self.value.im
    }
}

/// `D = cos(theta) - e^{i beta} sin(theta)`, with the real part written as
/// `-sqrt(2) sin(alpha) + 2 sin(theta) sin^2(beta/2)` to avoid cancellation
/// near the singular point.
fn denominator<T: Real>(cfg: &SelectorConfig<T>) -> Complex<T> {
    let st = cfg.theta().sin();
    let hb = (cfg.beta * T::lit(0.5)).sin();
    let re = -T::SQRT_2() * cfg.alpha.sin() + T::lit(2.0) * st * hb * hb;
    Complex::new(re, -st * cfg.beta.sin())
}

/// Post-selection probability for the undisturbed pointer, `|<s_f|s_i>|^2 = |D|^2 / 2`.
pub fn postselection_overlap<T: Real>(cfg: &SelectorConfig<T>) -> T {
    (denominator(cfg).norm_sqr() * T::lit(0.5)).max(T::zero()).min(T::one())
}

/// Branch amplitudes `(c_H, c_V) = (<s_f|H><H|s_i>, <s_f|V><V|s_i>)`.
pub fn selector_amplitudes<T: Real>(cfg: &SelectorConfig<T>) -> (Complex<T>, Complex<T>) {
    let si = cfg.initial_state();
    let sf = cfg.final_state();
    (sf[0].conj() * si[0], sf[1].conj() * si[1])
}

/// Closed-form weak value without uncertainties.
pub fn weak_value_closed_form<T: Real>(
    cfg: &SelectorConfig<T>,
) -> Result<Complex<T>, PolarizationError> {
    let overlap = postselection_overlap(cfg);
    if overlap < T::lit(DIVERGENCE_THRESHOLD) {
        return Err(PolarizationError::DivergentWeakValue {
            overlap: overlap.as_f64(),
        });
    }
    let value = Complex::new(cfg.theta().cos(), T::zero()) / denominator(cfg);
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(PolarizationError::DivergentWeakValue {
            overlap: overlap.as_f64(),
        });
    }
    Ok(value)
}

/// Weak value with `sigma_re`, `sigma_im` from [`propagate_uncertainty`].
pub fn weak_value<T: Real>(cfg: &SelectorConfig<T>) -> Result<WeakValue<T>, PolarizationError> {
    propagate_uncertainty(cfg)
}

/// Analytic partial derivatives `(dA_w/dalpha, dA_w/dbeta)`.
///
/// ```text
/// dA/dalpha = e^{i beta} / D^2
/// dA/dbeta  = i cos(theta) sin(theta) e^{i beta} / D^2
/// ```
pub fn weak_value_partials<T: Real>(
    cfg: &SelectorConfig<T>,
) -> Result<(Complex<T>, Complex<T>), PolarizationError> {
    weak_value_closed_form(cfg)?;
    let d = denominator(cfg);
    let e = Complex::from_polar(T::one(), cfg.beta) / (d * d);
    let th = cfg.theta();
    let d_beta = e * Complex::new(T::zero(), th.cos() * th.sin());
    Ok((e, d_beta))
}

/// Central finite-difference estimate of the partials with step `h`.
pub fn weak_value_partials_numeric<T: Real>(
    cfg: &SelectorConfig<T>,
    h: T,
) -> Result<(Complex<T>, Complex<T>), PolarizationError> {
    let at = |a: T, b: T| weak_value_closed_form(&SelectorConfig::exact(a, b)?);
    let two_h = h + h;
    let d_alpha = (at(cfg.alpha + h, cfg.beta)? - at(cfg.alpha - h, cfg.beta)?) / two_h;
    let d_beta = (at(cfg.alpha, cfg.beta + h)? - at(cfg.alpha, cfg.beta - h)?) / two_h;
    Ok((d_alpha, d_beta))
}

/// First-order propagation of independent `dalpha`, `dbeta` into the real and
/// imaginary parts of `A_w`.
pub fn propagate_uncertainty<T: Real>(
    cfg: &SelectorConfig<T>,
) -> Result<WeakValue<T>, PolarizationError> {
    let value = weak_value_closed_form(cfg)?;
    let (da, db) = weak_value_partials(cfg)?;
    let combine = |pa: T, pb: T| ((pa * cfg.dalpha).powi(2) + (pb * cfg.dbeta).powi(2)).sqrt();
    Ok(WeakValue {
        value,
        sigma_re: combine(da.re, db.re),
        sigma_im: combine(da.im, db.im),
    })
}

/// Result of the error-budget search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BudgetOptimum<T> {
    pub im_aw: T,
    pub beta_star: T,
    pub alpha_star: T,
    /// `sigma_im / Im(A_w)` at the optimum.
    pub relative_error: T,
}

/// `sigma_im / Im(A_w)`, or `None` when `Im(A_w) <= 0` or the weak value is undefined.
pub fn relative_im_error<T: Real>(cfg: &SelectorConfig<T>) -> Option<T> {
    let w = propagate_uncertainty(cfg).ok()?;
    if w.im() > T::zero() && w.im().is_finite() {
        Some(w.sigma_im / w.im())
    } else {
        None
    }
}

fn golden_section_max<T: Real>(mut lo: T, mut hi: T, f: impl Fn(T) -> T, iters: usize) -> (T, T) {
    let g = T::lit(0.618_033_988_749_894_8);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

fn log_grid<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| (a + (b - a) * T::from_count(k) / T::from_count(n - 1)).exp())
        .collect()
}

/// Best feasible `beta` at fixed `alpha`: `(beta, Im(A_w))`.
fn best_beta<T: Real>(alpha: T, dalpha: T, dbeta: T, budget: T) -> Option<(T, T)> {
    let eval = |beta: T| -> Option<(T, T)> {
        let cfg = SelectorConfig::new(alpha, beta, dalpha, dbeta).ok()?;
        let im = weak_value_closed_form(&cfg).ok()?.im;
        Some((im, relative_im_error(&cfg)?))
    };
    let feasible_im = |beta: T| match eval(beta) {
        Some((im, r)) if r <= budget => im,
        _ => T::neg_infinity(),
    };

    let grid = log_grid(T::lit(BUDGET_BETA_MIN), T::FRAC_PI_2(), BUDGET_SCAN_POINTS);
    let values: Vec<T> = grid.iter().map(|&b| feasible_im(b)).collect();
    let (k, &best) = values
        .iter()
        .enumerate()
        .fold(None, |acc: Option<(usize, &T)>, (i, v)| match acc {
            Some((_, bv)) if *bv >= *v => acc,
            _ => Some((i, v)),
        })?;
    if best == T::neg_infinity() {
        return None;
    }

    let left_infeasible = k > 0 && values[k - 1] == T::neg_infinity();
    if left_infeasible {
        // Active constraint: bisect the feasibility boundary, keep the feasible end.
        let (mut lo, mut hi) = (grid[k - 1], grid[k]);
        for _ in 0..200 {
            let mid = (lo * hi).sqrt();
            if feasible_im(mid) > T::neg_infinity() {
                hi = mid;
            } else {
                lo = mid;
            }
            if (hi - lo) <= T::epsilon() * T::lit(4.0) * hi {
                break;
            }
        }
        let im = feasible_im(hi);
        return Some(if im >= best { (hi, im) } else { (grid[k], best) });
    }
    let lo = if k > 0 { grid[k - 1] } else { grid[k] };
    let hi = if k + 1 < grid.len() { grid[k + 1] } else { grid[k] };
    if lo == hi {
        return Some((grid[k], best));
    }
    let (beta, im) = golden_section_max(lo, hi, feasible_im, 120);
    if im >= best {
        Some((beta, im))
    } else {
        Some((grid[k], best))
    }
}

fn optimum<T: Real>(alpha: T, beta: T, dalpha: T, dbeta: T) -> Option<BudgetOptimum<T>> {
    let cfg = SelectorConfig::new(alpha, beta, dalpha, dbeta).ok()?;
    Some(BudgetOptimum {
        im_aw: weak_value_closed_form(&cfg).ok()?.im,
        beta_star: beta,
        alpha_star: alpha,
        relative_error: relative_im_error(&cfg)?,
    })
}

fn check_budget_inputs<T: Real>(dbeta: T, dalpha: T, budget: T) -> Result<(), PolarizationError> {
    if !(budget > T::zero() && budget < T::one()) {
        return Err(PolarizationError::InvalidBudget(budget.as_f64()));
    }
    for (name, value) in [("dalpha", dalpha), ("dbeta", dbeta)] {
        if !value.is_finite() {
            return Err(PolarizationError::NonFinite(name));
        }
        if value < T::zero() {
            return Err(PolarizationError::NegativeUncertainty {
                name,
                value: value.as_f64(),
            });
        }
    }
    if dbeta == T::zero() && dalpha == T::zero() {
        return Err(PolarizationError::NoUncertainty);
    }
    Ok(())
}

/// Largest `Im(A_w)` at `alpha = 0` with `sigma_im / Im(A_w) <= budget`.
///
/// Log-spaced scan of `beta` in `[1e-9, pi/2]`, then bisection of the active
/// constraint (or golden-section search for an interior maximum).
pub fn max_usable_im_on_axis<T: Real>(
    dbeta: T,
    dalpha: T,
    budget: T,
) -> Result<BudgetOptimum<T>, PolarizationError> {
    check_budget_inputs(dbeta, dalpha, budget)?;
    let infeasible = || PolarizationError::InfeasibleBudget {
        budget: budget.as_f64(),
        dbeta: dbeta.as_f64(),
        dalpha: dalpha.as_f64(),
    };
    let (beta, _) = best_beta(T::zero(), dalpha, dbeta, budget).ok_or_else(infeasible)?;
    optimum(T::zero(), beta, dalpha, dbeta).ok_or_else(infeasible)
}

/// Largest `Im(A_w)` over `(alpha, beta)` with `sigma_im / Im(A_w) <= budget`.
///
/// Starts from the on-axis optimum. When `dalpha > 0` the result is refined
/// over `alpha` in `[-2 beta*, 2 beta*]` (scan plus golden-section search, each
/// `alpha` solved for its best `beta`). With `dalpha = 0` the first-order
/// error vanishes along a ridge through the `alpha = beta = 0` singularity and
/// the search stays on `alpha = 0`.
pub fn max_usable_im_weak_value<T: Real>(
    dbeta: T,
    dalpha: T,
    budget: T,
) -> Result<BudgetOptimum<T>, PolarizationError> {
    let axis = max_usable_im_on_axis(dbeta, dalpha, budget)?;
    if dalpha == T::zero() {
        return Ok(axis);
    }
    let f = |alpha: T| {
        best_beta(alpha, dalpha, dbeta, budget)
            .map(|(_, im)| im)
            .unwrap_or(T::neg_infinity())
    };
    let w = (axis.beta_star * T::lit(2.0)).min(T::FRAC_PI_4() * T::lit(0.5));
    let n = 41;
    let alphas: Vec<T> = (0..n)
        .map(|k| -w + (w + w) * T::from_count(k) / T::from_count(n - 1))
        .collect();
    let values: Vec<T> = alphas.iter().map(|&a| f(a)).collect();
    let mut k = n / 2;
    for (i, v) in values.iter().enumerate() {
        if *v > values[k] {
            k = i;
        }
    }
    let lo = alphas[k.saturating_sub(1)];
    let hi = alphas[(k + 1).min(n - 1)];
    let (alpha, _) = golden_section_max(lo, hi, f, 80);
    let candidate = best_beta(alpha, dalpha, dbeta, budget)
        .and_then(|(beta, _)| optimum(alpha, beta, dalpha, dbeta));
    Ok(match candidate {
        Some(c) if c.im_aw > axis.im_aw => c,
        _ => axis,
    })
}

/// One row of the error-band figure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorBandRow<T> {
    pub beta_deg: T,
    pub im_aw: T,
    /// `sigma_im` for each requested `dbeta`, in order.
    pub sigma_im: Vec<T>,
}

/// `Im(A_w)` versus `beta` at fixed `alpha`, with the 1-sigma band half-width
/// for each ellipticity uncertainty in `dbetas_deg`.
pub fn error_band_rows<T: Real>(
    alpha: T,
    betas_deg: &[T],
    dbetas_deg: &[T],
) -> Result<Vec<ErrorBandRow<T>>, PolarizationError> {
    betas_deg
        .par_iter()
        .map(|&beta_deg| {
            let base = SelectorConfig::exact(alpha, beta_deg.to_radians())?;
            let im_aw = weak_value_closed_form(&base)?.im;
            let sigma_im = dbetas_deg
                .iter()
                .map(|&d| {
                    propagate_uncertainty(&base.with_uncertainties(T::zero(), d.to_radians())?)
                        .map(|w| w.sigma_im)
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ErrorBandRow {
                beta_deg,
                im_aw,
                sigma_im,
            })
        })
        .collect()
}

/// One row of the maximum-usable-weak-value figure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaxImRow<T> {
    pub dbeta_deg: T,
    /// Largest `Im(A_w)` for each requested budget, in order.
    pub max_im: Vec<T>,
}

/// [`max_usable_im_weak_value`] over a list of `dbeta` values (degrees) and
/// relative budgets, with `dalpha` in radians.
pub fn max_im_rows<T: Real>(
    dbetas_deg: &[T],
    dalpha: T,
    budgets: &[T],
) -> Result<Vec<MaxImRow<T>>, PolarizationError> {
    dbetas_deg
        .par_iter()
        .map(|&dbeta_deg| {
            let max_im = budgets
                .iter()
                .map(|&b| max_usable_im_weak_value(dbeta_deg.to_radians(), dalpha, b).map(|o| o.im_aw))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(MaxImRow { dbeta_deg, max_im })
        })
        .collect()
}
