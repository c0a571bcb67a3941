//! Power-law decay fits `|y| ~ C (t + 1)^{-alpha}`.

use crate::error::{Error, Result};

/// Outcome of a decay fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitVerdict {
    /// Exponent fitted with an acceptable residual.
    Fitted,
    /// Every sample in the window is zero; no exponent is claimed.
    NullSignal,
    /// Fit residual above the threshold; the exponent is reported but not claimed.
    PoorFit,
}

impl FitVerdict {
    pub fn name(self) -> &'static str {
        match self {
            Self::Fitted => "fitted",
            Self::NullSignal => "null signal",
            Self::PoorFit => "poor fit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Samples with `|y| <= null_floor` are masked.
    pub null_floor: f64,
    pub min_samples: usize,
    /// Geometric thinning: at most this many kept samples per e-fold of `t + 1`.
    pub per_efold: usize,
    /// Minimum `R^2` for a claimed exponent.
    pub min_r_squared: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            null_floor: 0.0,
            min_samples: 10,
            per_efold: 24,
            min_r_squared: 0.98,
        }
    }
}

/// Least-squares slope of `-log|y|` against `log(t + 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    /// Decay exponent; `NaN` for a null signal.
    pub alpha: f64,
    /// `log C`.
    pub intercept: f64,
    pub r_squared: f64,
    /// RMS residual in `log|y|`.
    pub rms_residual: f64,
    pub samples: usize,
    pub window: (f64, f64),
    pub verdict: FitVerdict,
}

impl DecayFit {
    pub fn claimed(&self) -> Option<f64> {
        (self.verdict == FitVerdict::Fitted).then_some(self.alpha)
    }
}

/// Fits a decay exponent over `window` with default options.
pub fn fit_decay(series: &[(f64, f64)], window: (f64, f64)) -> Result<DecayFit> {
    fit_decay_with(series, window, FitOptions::default())
}

pub fn fit_decay_with(series: &[(f64, f64)], window: (f64, f64), opts: FitOptions) -> Result<DecayFit> {
    let (lo, hi) = window;
    if !(lo >= 0.0 && hi > lo) {
        return Err(Error::param("window", format!("need 0 <= t_lo < t_hi, got [{lo}, {hi}]")));
    }
    let inside: Vec<(f64, f64)> = series
        .iter()
        .copied()
        .filter(|&(t, _)| t >= lo && t <= hi)
        .collect();
    if inside.is_empty() {
        return Err(Error::Empty("samples in the fit window"));
    }
    if let Some((t, y)) = inside.iter().find(|(t, y)| !t.is_finite() || !y.is_finite()) {
        return Err(Error::NonFinite { location: format!("decay sample ({t}, {y})") });
    }
    let null = null_fit(window, inside.len());
    let live: Vec<(f64, f64)> = inside
        .into_iter()
        .filter(|&(_, y)| y.abs() > opts.null_floor)
        .map(|(t, y)| ((t + 1.0).ln(), y.abs().ln()))
        .collect();
    if live.is_empty() {
        return Ok(null);
    }
    // thin to a geometric sampling so dense late-time output does not dominate
    let step = 1.0 / opts.per_efold as f64;
    let mut kept: Vec<(f64, f64)> = Vec::new();
    for p in live {
        if kept.last().map_or(true, |q| p.0 - q.0 >= step * (1.0 - 1e-9)) {
            kept.push(p);
        }
    }
    if kept.len() < opts.min_samples {
        return Err(Error::param(
            "window",
            format!(
                "{} geometric samples in [{lo}, {hi}], need at least {}",
                kept.len(),
                opts.min_samples
            ),
        ));
    }
    let n = kept.len() as f64;
    let mx = kept.iter().map(|p| p.0).sum::<f64>() / n;
    let my = kept.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = kept.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = kept.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = kept.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = kept.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    let verdict = if r_squared >= opts.min_r_squared {
        FitVerdict::Fitted
    } else {
        FitVerdict::PoorFit
    };
    Ok(DecayFit {
        alpha: -slope,
        intercept,
        r_squared,
        rms_residual: (ss_res / n).sqrt(),
        samples: kept.len(),
        window,
        verdict,
    })
}

fn null_fit(window: (f64, f64), samples: usize) -> DecayFit {
    DecayFit {
        alpha: f64::NAN,
        intercept: f64::NAN,
        r_squared: f64::NAN,
        rms_residual: f64::NAN,
        samples,
        window,
        verdict: FitVerdict::NullSignal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        (0..=5000).map(|k| k as f64 * 0.1).map(|t| (t, f(t))).collect()
    }

    #[test]
    fn exact_power_law() {
        let s = sample(|t| (t + 1.0).powf(-1.5));
        let f = fit_decay(&s, (50.0, 500.0)).unwrap();
        assert!((f.alpha - 1.5).abs() < 1e-10, "{}", f.alpha);
        assert_eq!(f.verdict, FitVerdict::Fitted);
        assert!(f.samples >= 10);
    }

    #[test]
    fn oscillating_power_law() {
        let s = sample(|t| (t + 1.0).powf(-0.5) * (1.0 + 0.1 * (t + 1.0).ln().sin()));
        let f = fit_decay(&s, (1.0, 500.0)).unwrap();
        assert!((0.45..=0.55).contains(&f.alpha), "{}", f.alpha);
    }

    #[test]
    fn zeros_give_a_null_signal() {
        let s = sample(|_| 0.0);
        let f = fit_decay(&s, (50.0, 500.0)).unwrap();
        assert_eq!(f.verdict, FitVerdict::NullSignal);
        assert_eq!(f.claimed(), None);
    }

    #[test]
    fn sign_changes_are_masked_not_fatal() {
        let s = sample(|t| if (t * 10.0).round() as i64 % 7 == 0 { 0.0 } else { -(t + 1.0).powf(-2.0) });
        let f = fit_decay(&s, (10.0, 500.0)).unwrap();
        assert!((f.alpha - 2.0).abs() < 1e-10);
    }

    #[test]
    fn short_windows_are_rejected() {
        let s = sample(|t| (t + 1.0).powf(-1.0));
        assert!(fit_decay(&s, (100.0, 110.0)).is_err());
    }

    #[test]
    fn noisy_data_is_not_claimed() {
        let s = sample(|t| (t + 1.0).powf(-1.0) * if (t * 10.0) as i64 % 2 == 0 { 1.0 } else { 20.0 });
        let f = fit_decay(&s, (1.0, 500.0)).unwrap();
        assert_eq!(f.verdict, FitVerdict::PoorFit);
    }
}
