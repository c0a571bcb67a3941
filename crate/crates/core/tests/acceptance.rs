//! One PASS/FAIL line per acceptance criterion, written straight to stderr
//! so it shows up without `--nocapture`.

use std::io::Write as _;
use std::path::PathBuf;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use nalgebra::Matrix2;

use pointmass_core::analysis::{
    bound_ratio, convolution_lemma_sample, decay_report, delta_surrogate, interface_decay_check, log_factor_control,
    waves_for, BoundRatio, Lemma, LemmaParams, SampleGrid,
};
use pointmass_core::config::{parse_config_in, InitialConfig, RunConfig};
use pointmass_core::greenfn::{
    g_star, linear_green_solution_with, talbot_g_reflected, talbot_g_transmitted, GreenTable, LinearInit, TalbotOptions, Transmission,
};
use pointmass_core::model::{eigensystem, CharSystem, PressureLaw, Side};
use pointmass_core::reference;
use pointmass_core::selfsim::{burgers_residual, DiffusionWave};
use pointmass_core::solver::{run, RunOutput};
use pointmass_core::specialfns::{e_kernel, e_kernel_quadrature, erfc, integrate, integrate_breaks, QuadOptions};

fn line(criterion: &str, pass: bool, detail: impl AsRef<str>) {
    let tag = if pass { "PASS" } else { "FAIL" };
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "ACCEPTANCE {criterion}: {tag} {}", detail.as_ref());
}

fn config(name: &str) -> RunConfig {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let text = std::fs::read_to_string(dir.join(name)).expect("config present");
    let mut cfg = parse_config_in(&text, Some(&dir)).expect("config valid");
    cfg.output_dir = None;
    cfg
}

fn baseline() -> CharSystem {
    eigensystem(&PressureLaw::gamma(1.4).unwrap(), 1.0).unwrap()
}

fn timed_run(cfg: &RunConfig) -> (RunOutput, Duration) {
    let start = Instant::now();
    let out = run(&cfg.run_spec().unwrap()).expect("run succeeds");
    (out, start.elapsed())
}

/// The long decay run, shared by criteria 1, 2 and 7.
fn decay_run() -> &'static (RunOutput, Duration) {
    static RUN: OnceLock<(RunOutput, Duration)> = OnceLock::new();
    RUN.get_or_init(|| timed_run(&config("decay.cfg")))
}

fn half_amplitude_run() -> &'static (RunOutput, Duration) {
    static RUN: OnceLock<(RunOutput, Duration)> = OnceLock::new();
    RUN.get_or_init(|| {
        let mut cfg = config("decay.cfg");
        if let InitialConfig::GaussianBump { amplitude, .. } = &mut cfg.initial {
            *amplitude *= 0.5;
        }
        timed_run(&cfg)
    })
}

const FIT_WINDOW: (f64, f64) = (50.0, 500.0);

#[test]
fn criterion_1_particle_decay_exponent() {
    let (out, elapsed) = decay_run();
    let check = interface_decay_check(&out.series, FIT_WINDOW).unwrap();
    let alpha = check.fit.alpha;
    let pass = (1.3..=1.7).contains(&alpha) && elapsed.as_secs_f64() <= 600.0;
    line(
        "1 particle decay",
        pass,
        format!(
            "alpha_V = {alpha:.4} (r^2 {:.4}) over t in [50, 500], {} steps in {:.0} s, travel converges: {}",
            check.fit.r_squared,
            out.steps,
            elapsed.as_secs_f64(),
            check.travel_converges
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_2_fluid_sup_norm_exponent() {
    let (out, _) = decay_run();
    let report = decay_report(&out.series, FIT_WINDOW, None).unwrap();
    let alpha = report.alpha_uinf();
    let pass = (0.4..=0.6).contains(&alpha);
    line("2 sup-norm decay", pass, format!("alpha_uinf = {alpha:.4} (r^2 {:.4})", report.uinf.r_squared));
    assert!(pass);
}

#[test]
fn criterion_3_symmetry_null() {
    let (out, _) = timed_run(&config("symmetric_null.cfg"));
    let vmax = out.series.iter().fold(0.0_f64, |m, r| m.max(r.v.abs()));
    let pass = vmax <= 1e-12;
    line("3 symmetry null", pass, format!("max |V| = {vmax:e} over {} steps", out.steps));
    assert!(pass);
}

#[test]
fn criterion_4_conservation() {
    let (out, _) = timed_run(&config("conservation.cfg"));
    let l = &out.ledger;
    let (m, p, e) = (l.mass_drift(), l.momentum_drift(), l.energy_drift());
    let pass = out.steps >= 100_000 && m <= 1e-6 && p <= 1e-6 && e <= 1e-5;
    line(
        "4 conservation",
        pass,
        format!(
            "{} steps: mass drift {m:.2e}, momentum drift {p:.2e}, energy+dissipation drift {e:.2e}",
            out.steps
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_5_green_cross_validation() {
    let cfg = config("linear.cfg");
    let spec = cfg.run_spec().unwrap();
    let cs = eigensystem(&spec.law, spec.nu).unwrap();
    let out = run(&spec).unwrap();
    let snap = out.snapshots.last().unwrap();
    assert_eq!(snap.t, 3.0);

    let data = &spec.initial;
    let side = |x: f64| if x < 0.0 { Side::Left } else { Side::Right };
    let tau0 = |x: f64| data.tau0(side(x), x);
    let u0 = |x: f64| data.u0(side(x), x);
    let init = LinearInit {
        tau0: &tau0,
        u0: &u0,
        v0: data.v0,
        support: data.support(),
    };
    let h = snap.u.h;
    let stride = 5;
    let mut nodes = Vec::new();
    for s in Side::BOTH {
        let mut j = stride;
        while j as f64 * h <= 10.0 + 1e-9 {
            nodes.push((s, j));
            j += stride;
        }
    }
    let xs: Vec<f64> = nodes.iter().map(|&(s, j)| s.sign() * j as f64 * h).collect();
    let tab = GreenTable::new(3.0, &cs, Transmission::new(spec.particle_mass).unwrap()).unwrap();
    let green = linear_green_solution_with(&init, &xs, &tab).unwrap();
    let (mut err, mut scale) = (0.0_f64, 0.0_f64);
    for (&(s, j), g) in nodes.iter().zip(&green) {
        let num = (snap.tau.half(s)[j], snap.u.half(s)[j]);
        err = err.max((num.0 - g.0).abs()).max((num.1 - g.1).abs());
        scale = scale.max(g.0.abs()).max(g.1.abs());
    }
    let rel = err / scale;

    let pts = [(1.0, 1.0), (2.5, 2.0), (-1.5, 3.0)];
    let mut dual = 0.0_f64;
    let mut identity = 0.0_f64;
    let unit = Transmission::unit_mass();
    for &(x, t) in &pts {
        let tab = GreenTable::new(t, &cs, unit).unwrap();
        let fft = tab.g_transmitted(x).unwrap();
        let tal = talbot_g_transmitted(x, t, &cs, unit, TalbotOptions::default()).unwrap();
        dual = dual.max((fft - tal).abs().max());
        // stated for x > 0; mirrored on the left
        let rhs = (fft - tab.g_smooth(x).unwrap()) * (2.0 * x.signum());
        identity = identity.max((tab.g_transmitted_dx(x).unwrap() - rhs).abs().max());
    }
    let pass = rel <= 0.02 && dual <= 1e-5 && identity <= 1e-6;
    line(
        "5 Green cross-validation",
        pass,
        format!(
            "solver vs Green L_inf {:.3}% on {} nodes, G_T FFT vs Talbot {dual:.1e}, transmission identity {identity:.1e}",
            100.0 * rel,
            xs.len()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_6_closed_form_oracles() {
    let cs = baseline();
    // e_kernel on a log-spaced grid
    let (lam, mu) = (cs.c, 2.0);
    let mut ek = 0.0_f64;
    for k in 0..11 {
        let t = 10f64.powf(-2.0 + 0.5 * k as f64);
        for &xi in &[-5.0, -1.0, 0.0, 0.5, 3.0, 20.0] {
            let x = lam * t + xi * t.sqrt();
            let q = e_kernel_quadrature(x, t, lam, mu).unwrap();
            if q > 1e-290 {
                ek = ek.max((e_kernel(x, t, lam, mu).unwrap() / q - 1.0).abs());
            }
        }
    }
    let erfc_err = reference::ERFC.iter().map(|&(x, e, _)| (erfc(x) - e).abs()).fold(0.0, f64::max);
    let mut mass_err = 0.0_f64;
    for &(m, t) in &[(0.2, 1.0), (-0.3, 10.0), (0.05, 100.0)] {
        for i in 0..2 {
            let w = DiffusionWave::new(i, cs.lambda[i], cs.nu, m).unwrap();
            mass_err = mass_err.max((w.mass_integral(t).unwrap() - m).abs());
        }
    }
    let w = DiffusionWave::new(0, cs.c, cs.nu, 0.2).unwrap();
    let samples: Vec<(f64, f64)> = (0..9)
        .flat_map(|i| [1.0, 2.0, 4.0].map(|t| (-2.0 + 0.75 * i as f64 + 2.0 * cs.c, t)))
        .collect();
    let ratio = burgers_residual(&w, &samples, 0.1).unwrap() / burgers_residual(&w, &samples, 0.05).unwrap();

    let mut g_err = 0.0_f64;
    let mut gs_err = 0.0_f64;
    for &t in &[0.5, 2.0, 10.0] {
        let tab = GreenTable::new(t, &cs, Transmission::unit_mass()).unwrap();
        let w = tab.half_width();
        let ct = cs.c * t;
        let mut m = Matrix2::zeros();
        let mut ms = Matrix2::zeros();
        for i in 0..2 {
            for j in 0..2 {
                let f = |x: f64| if x == 0.0 { 0.0 } else { tab.g_smooth(x).unwrap()[(i, j)] };
                m[(i, j)] = integrate_breaks(f, &[-w, -ct, 0.0, ct, w], QuadOptions::tol(1e-11, 1e-11)).unwrap().value;
                ms[(i, j)] = integrate(
                    |x| g_star(x, t, &cs).unwrap()[(i, j)],
                    f64::NEG_INFINITY,
                    f64::INFINITY,
                    QuadOptions::tol(1e-14, 1e-14),
                )
                .unwrap()
                .value;
            }
        }
        m[(0, 0)] += tab.singular_weight();
        g_err = g_err.max((m - Matrix2::identity()).abs().max());
        gs_err = gs_err.max((ms - Matrix2::identity()).abs().max());
    }
    let pass = ek <= 1e-10
        && erfc_err <= 1e-13
        && mass_err <= 1e-8
        && (3.5..=4.5).contains(&ratio)
        && g_err <= 1e-6
        && gs_err <= 1e-12;
    line(
        "6 closed-form oracles",
        pass,
        format!(
            "e_kernel {ek:.1e}, erfc {erfc_err:.1e}, theta mass {mass_err:.1e}, residual ratio {ratio:.3}, int G {g_err:.1e}, int G* {gs_err:.1e}"
        ),
    );
    assert!(pass);
}

fn bound_of(out: &RunOutput) -> BoundRatio {
    let initial = &out.snapshots[0];
    let delta = delta_surrogate(&initial.tau, &initial.u, &out.cs).unwrap();
    let waves = waves_for(initial, out.series[0].v, &out.cs).unwrap();
    bound_ratio(&out.snapshots, &waves, delta.delta, &out.cs).unwrap()
}

#[test]
fn criterion_7a_pointwise_bound_structure() {
    let full = bound_of(&decay_run().0);
    let half = bound_of(&half_amplitude_run().0);
    let ratio = full.constant / half.constant;
    let pass = full.constant.is_finite() && half.constant.is_finite() && (0.6..=1.5).contains(&ratio);
    line(
        "7a bound ratio",
        pass,
        format!(
            "C(a) = {:.4e}, C(a/2) = {:.4e}, ratio {ratio:.4} (sup at x = {:.2}, t = {})",
            full.constant, half.constant, full.location.0, full.location.1
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_7b_reflected_decays_faster() {
    let cs = baseline();
    let ts = [5.0, 10.0, 20.0, 40.0];
    let ratios: Vec<f64> = ts
        .iter()
        .map(|&t| {
            // at x = 1 both kernels become exponentially small, so only the
            // shifted contour keeps relative accuracy
            let (tr, opts) = (Transmission::unit_mass(), TalbotOptions::shifted(48));
            let gr = talbot_g_reflected(1.0, t, &cs, tr, opts).unwrap();
            let gt = talbot_g_transmitted(1.0, t, &cs, tr, opts).unwrap();
            gr.abs().max() / gt.abs().max()
        })
        .collect();
    let pass = ratios.windows(2).all(|w| w[1] < w[0]);
    let shown: Vec<String> = ts.iter().zip(&ratios).map(|(t, r)| format!("t={t}: {r:.4}")).collect();
    line("7b reflected/transmitted", pass, format!("|G_R|/|G_T| at x = 1: {}", shown.join(", ")));
    assert!(pass, "ratio not strictly decreasing: {ratios:?}");
}

#[test]
fn criterion_8_convolution_lemmas() {
    let c = baseline().c;
    let grid = SampleGrid {
        t_range: (1.0, 100.0),
        nt: 20,
        xi_range: (-4.0, 4.0),
        nx: 20,
        x_speed: c,
        diffusive: true,
    };
    let b2 = convolution_lemma_sample(Lemma::B2, &LemmaParams::defaults(c, 1.0), &grid).unwrap();
    let control_grid = SampleGrid { nx: 5, nt: 12, ..grid };
    let p = LemmaParams {
        beta: 3.0,
        ..LemmaParams::defaults(c, 1.0)
    };
    let lc = log_factor_control(Lemma::B2, &p, &control_grid, 10.0).unwrap();
    let pass = b2.stable(0.1) && lc.passes(1.2, 0.1);
    line(
        "8 convolution lemmas",
        pass,
        format!(
            "B2 C = {:.4} -> {:.4} under doubling; beta = 3: uncorrected x{:.3}, corrected x{:.3}",
            b2.constant,
            b2.constant_fine,
            lc.uncorrected_growth(),
            lc.corrected_growth()
        ),
    );
    assert!(pass);
}
