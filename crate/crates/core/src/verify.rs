//! Property suites runnable outside the test harness (`pointmass verify`).
//!
//! Each suite draws its random samples from a ChaCha stream seeded by the
//! caller, so a failing draw can be replayed.

use std::fmt;

use nalgebra::Matrix2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analysis::{
    convolution_lemma_sample, fit_decay, log_factor_control, psi32, Lemma, LemmaParams, SampleGrid,
};
use crate::error::{Error, Result};
use crate::greenfn::{g_star, talbot_g_transmitted, GreenTable, TalbotOptions, Transmission};
use crate::model::{eigensystem, masses, CharSystem, PressureLaw, TwoSidedField};
use crate::reference;
use crate::selfsim::{burgers_residual, DiffusionWave};
use crate::solver::{run, GridSpec, InitialData, InitialFamily, Mode, RunSpec};
use crate::specialfns::{check_lemma_a1, e_kernel, e_kernel_quadrature, erf, erfc, erfcx, integrate, integrate_breaks, sample_grid, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Model,
    Specialfns,
    Selfsim,
    Greenfn,
    Solver,
    Analysis,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Model,
        Suite::Specialfns,
        Suite::Selfsim,
        Suite::Greenfn,
        Suite::Solver,
        Suite::Analysis,
    ];

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.name() == s)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Model => "model",
            Suite::Specialfns => "specialfns",
            Suite::Selfsim => "selfsim",
            Suite::Greenfn => "greenfn",
            Suite::Solver => "solver",
            Suite::Analysis => "analysis",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} {}::{}: {}", self.suite.name(), c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Runs a check, turning an `Err` into a failure with its message.
fn check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match f() {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn baseline() -> CharSystem {
    eigensystem(&PressureLaw::gamma(1.4).expect("valid law"), 1.0).expect("valid system")
}

pub fn run_suite(suite: Suite, seed: u64) -> SuiteReport {
    // one stream per suite so `verify all` and `verify <suite>` agree
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (suite as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let checks = match suite {
        Suite::Model => model_suite(&mut rng),
        Suite::Specialfns => specialfns_suite(&mut rng),
        Suite::Selfsim => selfsim_suite(&mut rng),
        Suite::Greenfn => greenfn_suite(&mut rng),
        Suite::Solver => solver_suite(&mut rng),
        Suite::Analysis => analysis_suite(&mut rng),
    };
    SuiteReport { suite, seed, checks }
}

/// All suites in parallel, reported in [`Suite::ALL`] order.
pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    Suite::ALL.par_iter().map(|&s| run_suite(s, seed)).collect()
}

fn model_suite(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let systems: Vec<(f64, f64)> = (0..64).map(|_| (rng.gen_range(1.05..3.0), rng.gen_range(0.2..5.0))).collect();
    let states: Vec<(f64, f64)> = (0..64).map(|_| (rng.gen_range(-0.5..0.5), rng.gen_range(-1.0..1.0))).collect();
    vec![
        check("biorthogonality", || {
            let mut worst = 0.0_f64;
            for &(g, nu) in &systems {
                let cs = eigensystem(&PressureLaw::gamma(g)?, nu)?;
                for i in 0..2 {
                    for j in 0..2 {
                        let e = if i == j { 1.0 } else { 0.0 };
                        worst = worst.max(((cs.l[i] * cs.r[j])[0] - e).abs());
                    }
                }
            }
            Ok((worst <= 1e-13, format!("max |l_i r_j - delta_ij| = {worst:.2e}")))
        }),
        check("eigenpairs", || {
            let mut worst = 0.0_f64;
            for &(g, nu) in &systems {
                let cs = eigensystem(&PressureLaw::gamma(g)?, nu)?;
                let a = cs.a_matrix();
                for i in 0..2 {
                    worst = worst.max((a * cs.r[i] - cs.r[i] * cs.lambda[i]).abs().max());
                    worst = worst.max((cs.l[i] * a - cs.l[i] * cs.lambda[i]).abs().max());
                }
            }
            Ok((worst <= 1e-12, format!("max eigen residual {worst:.2e}")))
        }),
        check("sound_speed", || {
            let mut worst = 0.0_f64;
            for &(g, nu) in &systems {
                let cs = eigensystem(&PressureLaw::gamma(g)?, nu)?;
                worst = worst.max((cs.c - g.sqrt()).abs());
            }
            Ok((worst <= 1e-14, format!("max |c - sqrt(gamma)| = {worst:.2e}")))
        }),
        check("project_reconstruct_round_trip", || {
            let cs = baseline();
            let mut worst = 0.0_f64;
            for &(tau, u) in &states {
                let (t2, u2) = cs.reconstruct(cs.project(0, tau, u), cs.project(1, tau, u));
                worst = worst.max((t2 - tau).abs().max((u2 - u).abs()));
            }
            Ok((worst <= 1e-14, format!("max round-trip error {worst:.2e}")))
        }),
        check("masses_linear_in_data", || {
            let cs = baseline();
            let (a, v0) = states[0];
            let field = |amp: f64| TwoSidedField::sample(0.01, 800, |_, x| amp * (-(x - 3.0) * (x - 3.0)).exp());
            let zero = field(0.0);
            let m1 = masses(&field(a), &zero, v0, &cs)?;
            let m2 = masses(&field(2.0 * a), &zero, 2.0 * v0, &cs)?;
            let mut worst = 0.0_f64;
            for i in 0..2 {
                worst = worst.max((m2.total(i) - 2.0 * m1.total(i)).abs());
                worst = worst.max((m1.mv[i] - cs.project(i, 0.0, v0)).abs());
            }
            Ok((worst <= 1e-14, format!("linearity defect {worst:.2e}")))
        }),
    ]
}

fn specialfns_suite(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let xs: Vec<f64> = (0..200).map(|_| rng.gen_range(-6.0..6.0)).collect();
    let kernel_pts: Vec<(f64, f64)> = (0..24)
        .map(|_| {
            let t = 10f64.powf(rng.gen_range(-1.0..3.0));
            (rng.gen_range(-4.0..4.0), t)
        })
        .collect();
    vec![
        check("erfc_reference", || {
            let mut worst = 0.0_f64;
            for &(x, e, ex) in reference::ERFC {
                worst = worst.max((erfc(x) - e).abs());
                if e > 0.0 {
                    worst = worst.max((erfc(x) / e - 1.0).abs());
                }
                worst = worst.max((erfcx(x) / ex - 1.0).abs());
            }
            Ok((worst <= 1e-13, format!("max error vs 50-digit table {worst:.2e}")))
        }),
        check("erf_complement", || {
            let worst = xs.iter().map(|&x| (erf(x) + erfc(x) - 1.0).abs()).fold(0.0, f64::max);
            Ok((worst <= 2e-16 * 4.0, format!("max |erf + erfc - 1| = {worst:.2e}")))
        }),
        check("e_kernel_vs_quadrature", || {
            let (lam, mu) = (1.4f64.sqrt(), 2.0);
            let mut worst = 0.0_f64;
            for &(xi, t) in &kernel_pts {
                let x = lam * t + xi * t.sqrt();
                let direct = e_kernel_quadrature(x, t, lam, mu)?;
                if direct > 1e-290 {
                    worst = worst.max((e_kernel(x, t, lam, mu)? / direct - 1.0).abs());
                }
            }
            Ok((worst <= 1e-10, format!("max relative error {worst:.2e}")))
        }),
        check("envelope_constant_stable", || {
            let c = 1.4f64.sqrt();
            let a = check_lemma_a1(&sample_grid((-200.0, 200.0), (1.0, 100.0), 41, 20), c, 2.0, 20.0)?;
            let b = check_lemma_a1(&sample_grid((-200.0, 200.0), (1.0, 100.0), 81, 40), c, 2.0, 20.0)?;
            let drift = (b.constant / a.constant - 1.0).abs();
            Ok((
                a.constant.is_finite() && drift < 0.05,
                format!("C = {:.4} -> {:.4} under doubling", a.constant, b.constant),
            ))
        }),
    ]
}

fn selfsim_suite(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let waves: Vec<(f64, f64)> = (0..12).map(|_| (rng.gen_range(-0.5..0.5), rng.gen_range(0.0..50.0))).collect();
    vec![
        check("mass_integral", || {
            let mut worst = 0.0_f64;
            for (k, &(m, t)) in waves.iter().enumerate() {
                let lam = if k % 2 == 0 { 1.2 } else { -1.2 };
                let w = DiffusionWave::new(k % 2, lam, 1.0, m)?;
                worst = worst.max((w.mass_integral(t)? - m).abs());
            }
            Ok((worst <= 1e-8, format!("max |int theta - M| = {worst:.2e}")))
        }),
        check("burgers_residual_order", || {
            let w = DiffusionWave::new(0, 1.0, 1.0, waves[0].0)?;
            let samples: Vec<(f64, f64)> = (0..9)
                .flat_map(|i| [1.0, 2.0, 4.0].map(|t| (-2.0 + 0.75 * i as f64, t)))
                .collect();
            let r1 = burgers_residual(&w, &samples, 0.1)?;
            let r2 = burgers_residual(&w, &samples, 0.05)?;
            let ratio = r1 / r2;
            Ok(((3.5..=4.5).contains(&ratio), format!("residual ratio under h-halving {ratio:.3}")))
        }),
        check("sign_follows_mass", || {
            let mut ok = true;
            for &(m, t) in &waves {
                let w = DiffusionWave::new(0, 1.2, 1.0, m)?;
                let th = w.theta(w.centre(t), t)?;
                ok &= th * m >= 0.0 && (m != 0.0) == (th != 0.0);
            }
            Ok((ok, "theta has the sign of M".into()))
        }),
    ]
}

fn greenfn_suite(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let cs = baseline();
    let tr = Transmission::unit_mass();
    let pts: Vec<(f64, f64)> = (0..3).map(|_| (rng.gen_range(0.2..4.0), rng.gen_range(0.5..4.0))).collect();
    vec![
        check("gt_dual_route", || {
            let mut worst = 0.0_f64;
            for &(x, t) in &pts {
                let tab = GreenTable::new(t, &cs, tr)?;
                let fft = tab.g_transmitted(x)?;
                let tal = talbot_g_transmitted(x, t, &cs, tr, TalbotOptions::default())?;
                worst = worst.max((fft - tal).abs().max());
            }
            Ok((worst <= 1e-5, format!("max |FFT - Talbot| = {worst:.2e} at 3 points")))
        }),
        check("transmission_identity", || {
            let mut worst = 0.0_f64;
            for &(x, t) in &pts {
                let tab = GreenTable::new(t, &cs, tr)?;
                let lhs = tab.g_transmitted_dx(x)?;
                let rhs = (tab.g_transmitted(x)? - tab.g_smooth(x)?) * 2.0;
                worst = worst.max((lhs - rhs).abs().max());
            }
            Ok((worst <= 1e-6, format!("max |dG_T + 2G - 2G_T| = {worst:.2e}")))
        }),
        check("gt_reference", || {
            let mut worst = 0.0_f64;
            for &((x, t), r) in reference::GT {
                let tab = GreenTable::new(t, &cs, tr)?;
                let m = Matrix2::new(r[0], r[1], r[2], r[3]);
                worst = worst.max((tab.g_transmitted(x)? - m).abs().max());
            }
            Ok((worst <= 1e-8, format!("max error vs 60-digit inversion {worst:.2e}")))
        }),
        check("gstar_mass", || {
            let mut worst = 0.0_f64;
            for &t in &[0.1, 1.0, 10.0] {
                for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    let v = integrate(
                        |x| g_star(x, t, &cs).map_or(f64::NAN, |g| g[(i, j)]),
                        f64::NEG_INFINITY,
                        f64::INFINITY,
                        QuadOptions::tol(1e-14, 1e-14),
                    )?
                    .value;
                    worst = worst.max((v - if i == j { 1.0 } else { 0.0 }).abs());
                }
            }
            Ok((worst <= 1e-12, format!("max |int G* - I| = {worst:.2e}")))
        }),
        check("g_mass", || {
            let t = 2.0;
            let tab = GreenTable::new(t, &cs, tr)?;
            let w = tab.half_width();
            let ct = cs.c * t;
            let mut m = Matrix2::zeros();
            for i in 0..2 {
                for j in 0..2 {
                    let f = |x: f64| if x == 0.0 { 0.0 } else { tab.g_smooth(x).map_or(f64::NAN, |g| g[(i, j)]) };
                    m[(i, j)] = integrate_breaks(f, &[-w, -ct, 0.0, ct, w], QuadOptions::tol(1e-11, 1e-11))?.value;
                }
            }
            m[(0, 0)] += tab.singular_weight();
            let worst = (m - Matrix2::identity()).abs().max();
            Ok((worst <= 1e-6, format!("max |int G - I| = {worst:.2e} at t = {t}")))
        }),
    ]
}

fn short_spec(family: InitialFamily, v0: f64, l: f64, n: usize, t_final: f64) -> Result<RunSpec> {
    let law = PressureLaw::gamma(1.4)?;
    let cs = eigensystem(&law, 1.0)?;
    let initial = InitialData::new(family, v0, 1.0, 1.0, &law, 1.0)?;
    Ok(RunSpec {
        grid: GridSpec::new(l, n, t_final, &cs),
        law,
        nu: 1.0,
        particle_mass: 1.0,
        initial,
        mode: Mode::Nonlinear,
        snapshot_times: vec![],
        stride: 1,
        h0: 0.0,
        output_dir: None,
    })
}

fn solver_suite(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let amp = rng.gen_range(0.005..0.02);
    let v0 = rng.gen_range(-0.02..0.02);
    vec![
        check("symmetric_null", || {
            let fam = InitialFamily::SymmetricNull {
                amplitude: amp,
                center: 3.0,
                width: 1.0,
            };
            let out = run(&short_spec(fam, 0.0, 20.0, 200, 5.0)?)?;
            let vmax = out.series.iter().fold(0.0_f64, |m, r| m.max(r.v.abs()));
            Ok((vmax <= 1e-12, format!("max |V| = {vmax:.2e} over {} steps", out.steps)))
        }),
        check("conservation", || {
            let fam = InitialFamily::Dipole { amplitude: amp, width: 1.0 };
            let out = run(&short_spec(fam, v0, 40.0, 400, 6.0)?)?;
            let l = &out.ledger;
            let (m, p, e) = (l.mass_drift(), l.momentum_drift(), l.energy_drift());
            Ok((
                m <= 1e-6 && p <= 1e-6 && e <= 1e-5,
                format!("drift mass {m:.1e}, momentum {p:.1e}, energy+dissipation {e:.1e}"),
            ))
        }),
        check("truncation_rule", || {
            let fam = InitialFamily::Dipole { amplitude: amp, width: 1.0 };
            let rejected = matches!(run(&short_spec(fam, 0.0, 20.0, 100, 50.0)?), Err(Error::Config(_)));
            Ok((rejected, "L < c t_final + K sqrt(nu t_final) rejected".into()))
        }),
    ]
}

fn analysis_suite(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let alpha = rng.gen_range(0.3..2.5);
    let amp = rng.gen_range(-3.0..3.0_f64);
    let c = 1.4f64.sqrt();
    vec![
        check("fit_recovers_power_law", || {
            let series: Vec<(f64, f64)> = (0..2000)
                .map(|k| {
                    let t = 1.0 + 0.5 * k as f64;
                    (t, amp * (t + 1.0).powf(-alpha))
                })
                .collect();
            let fit = fit_decay(&series, (50.0, 900.0))?;
            let err = (fit.alpha - alpha).abs();
            Ok((err <= 1e-10, format!("alpha {alpha:.6} recovered to {err:.1e}")))
        }),
        check("psi32_at_particle", || {
            let target = c.powf(-1.5);
            let mut worst = 0.0_f64;
            for k in 0..30 {
                let t = 100.0 * 10f64.powf(4.0 * k as f64 / 29.0);
                let r = (t + 1.0).powf(1.5) * psi32(0.0, t, c) / target;
                worst = worst.max((r - 1.0).abs());
            }
            Ok((worst <= 0.1, format!("(t+1)^(3/2) psi32(0, t) c^(3/2) within {worst:.3} of 1")))
        }),
        check("b2_stable_under_doubling", || {
            let grid = SampleGrid {
                t_range: (1.0, 100.0),
                nt: 10,
                xi_range: (-4.0, 4.0),
                nx: 10,
                x_speed: c,
                diffusive: true,
            };
            let s = convolution_lemma_sample(Lemma::B2, &LemmaParams::defaults(c, 1.0), &grid)?;
            Ok((
                s.stable(0.1),
                format!("C = {:.4} -> {:.4}", s.constant, s.constant_fine),
            ))
        }),
        check("log_factor_control", || {
            let grid = SampleGrid {
                t_range: (1.0, 100.0),
                nt: 12,
                xi_range: (-4.0, 4.0),
                nx: 5,
                x_speed: c,
                diffusive: true,
            };
            let p = LemmaParams {
                beta: 3.0,
                ..LemmaParams::defaults(c, 1.0)
            };
            let lc = log_factor_control(Lemma::B2, &p, &grid, 10.0)?;
            Ok((
                lc.passes(1.2, 0.1),
                format!(
                    "uncorrected grows x{:.3}, corrected x{:.3} when t_hi x10",
                    lc.uncorrected_growth(),
                    lc.corrected_growth()
                ),
            ))
        }),
    ]
}
