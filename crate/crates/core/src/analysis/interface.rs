//! Decay of the particle velocity and of the fluid sup norm over a run.

use crate::error::Result;
use crate::solver::SeriesRow;

use super::bound::BoundRatio;
use super::fit::{fit_decay, DecayFit, FitVerdict};

/// Pass/fail outcome of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// The signal is identically zero; nothing is claimed.
    Null,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Self::Pass => "PASS",
            Self::Fail => "FAIL",
            Self::Null => "NULL",
        }
    }
}

/// Exponent window accepted for `|V(t)| ~ t^{-3/2}`.
pub const ALPHA_V_RANGE: (f64, f64) = (1.3, 1.7);
/// Exponent window accepted for `||u||_inf ~ t^{-1/2}`.
pub const ALPHA_UINF_RANGE: (f64, f64) = (0.4, 0.6);

#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceCheck {
    pub fit: DecayFit,
    /// `int_0^{2^k} |V|` at dyadic times inside the run.
    pub travel: Vec<(f64, f64)>,
    /// Dyadic increments of the travel decrease and the last one is small.
    pub travel_converges: bool,
    pub verdict: Verdict,
}

fn trapezoid_abs(series: &[(f64, f64)], upto: f64) -> f64 {
    series
        .windows(2)
        .take_while(|w| w[0].0 < upto)
        .map(|w| {
            let b = w[1].0.min(upto);
            let f1 = if w[1].0 <= upto {
                w[1].1.abs()
            } else {
                let a = (upto - w[0].0) / (w[1].0 - w[0].0);
                ((1.0 - a) * w[0].1 + a * w[1].1).abs()
            };
            0.5 * (b - w[0].0) * (w[0].1.abs() + f1)
        })
        .sum()
}

/// Fits `|V|` over `window` and checks that `int |V|` converges.
pub fn interface_decay_check(series: &[SeriesRow], window: (f64, f64)) -> Result<InterfaceCheck> {
    let v: Vec<(f64, f64)> = series.iter().map(|r| (r.t, r.v)).collect();
    let fit = fit_decay(&v, window)?;
    let t_end = series.last().map_or(0.0, |r| r.t);
    let mut travel = Vec::new();
    let mut t = 1.0;
    while t <= t_end {
        travel.push((t, trapezoid_abs(&v, t)));
        t *= 2.0;
    }
    travel.push((t_end, trapezoid_abs(&v, t_end)));
    // increments over dyadic blocks inside the fit window must shrink
    let inc: Vec<f64> = travel
        .windows(2)
        .filter(|w| w[0].0 >= window.0)
        .map(|w| w[1].1 - w[0].1)
        .collect();
    let total = travel.last().map_or(0.0, |p| p.1);
    let shrinking = inc.windows(2).all(|w| w[1] <= w[0]);
    let last_small = inc.last().map_or(true, |d| *d <= 0.05 * total);
    let travel_converges = total.is_finite() && shrinking && last_small;
    let verdict = match fit.verdict {
        FitVerdict::NullSignal => Verdict::Null,
        FitVerdict::Fitted
            if (ALPHA_V_RANGE.0..=ALPHA_V_RANGE.1).contains(&fit.alpha) && travel_converges =>
        {
            Verdict::Pass
        }
        _ => Verdict::Fail,
    };
    Ok(InterfaceCheck {
        fit,
        travel,
        travel_converges,
        verdict,
    })
}

/// Summary of the decay diagnostics of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    pub fit_window: (f64, f64),
    pub interface: InterfaceCheck,
    pub uinf: DecayFit,
    pub uinf_verdict: Verdict,
    pub bound: Option<BoundRatio>,
}

impl DecayReport {
    pub fn alpha_v(&self) -> f64 {
        self.interface.fit.alpha
    }

    pub fn alpha_uinf(&self) -> f64 {
        self.uinf.alpha
    }

    /// `key: value` lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let f = &self.interface.fit;
        s += &format!("fit_window: [{}, {}]\n", self.fit_window.0, self.fit_window.1);
        s += &format!("alpha_V: {}\n", f.alpha);
        s += &format!("alpha_V_r_squared: {}\n", f.r_squared);
        s += &format!("alpha_V_samples: {}\n", f.samples);
        s += &format!("alpha_V_fit: {}\n", f.verdict.name());
        s += &format!(
            "particle_travel: {}\n",
            self.interface.travel.last().map_or(0.0, |p| p.1)
        );
        s += &format!("particle_travel_converges: {}\n", self.interface.travel_converges);
        s += &format!("interface_decay: {}\n", self.interface.verdict.name());
        if self.interface.verdict == Verdict::Null {
            s += "interface_decay_note: null signal, V vanishes identically\n";
        }
        s += &format!("alpha_uinf: {}\n", self.uinf.alpha);
        s += &format!("alpha_uinf_r_squared: {}\n", self.uinf.r_squared);
        s += &format!("uinf_decay: {}\n", self.uinf_verdict.name());
        if let Some(b) = &self.bound {
            s += &format!("delta: {}\n", b.delta);
            s += &format!("bound_constant: {}\n", b.constant);
            s += &format!(
                "bound_argmax: x={} t={} branch={}\n",
                b.location.0,
                b.location.1,
                b.location.2 + 1
            );
        }
        s
    }

    /// One header row and one value row.
    pub fn to_csv(&self) -> String {
        let f = &self.interface.fit;
        let b = self.bound.as_ref();
        format!(
            "t_lo,t_hi,alpha_V,alpha_V_r2,alpha_V_verdict,alpha_uinf,alpha_uinf_r2,uinf_verdict,particle_travel,delta,bound_constant\n{},{},{},{},{},{},{},{},{},{},{}\n",
            self.fit_window.0,
            self.fit_window.1,
            f.alpha,
            f.r_squared,
            self.interface.verdict.name(),
            self.uinf.alpha,
            self.uinf.r_squared,
            self.uinf_verdict.name(),
            self.interface.travel.last().map_or(0.0, |p| p.1),
            b.map_or(f64::NAN, |b| b.delta),
            b.map_or(f64::NAN, |b| b.constant),
        )
    }
}

/// Builds the report; `bound` is attached when snapshots were analysed.
pub fn decay_report(series: &[SeriesRow], window: (f64, f64), bound: Option<BoundRatio>) -> Result<DecayReport> {
    let interface = interface_decay_check(series, window)?;
    let u: Vec<(f64, f64)> = series.iter().map(|r| (r.t, r.u_inf)).collect();
    let uinf = fit_decay(&u, window)?;
    let uinf_verdict = match uinf.verdict {
        FitVerdict::NullSignal => Verdict::Null,
        FitVerdict::Fitted if (ALPHA_UINF_RANGE.0..=ALPHA_UINF_RANGE.1).contains(&uinf.alpha) => Verdict::Pass,
        _ => Verdict::Fail,
    };
    Ok(DecayReport {
        fit_window: window,
        interface,
        uinf,
        uinf_verdict,
        bound,
    })
}
