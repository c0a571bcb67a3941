use proptest::prelude::*;

use pointmass_core::analysis::{fit_decay, psi32, theta_alpha};
use pointmass_core::greenfn::{generator_eigenvalues, GreenTable, Transmission};
use pointmass_core::model::{diagonal_components, eigensystem, masses, reconstruct, CharSystem, PressureLaw, TwoSidedField};
use pointmass_core::selfsim::DiffusionWave;
use pointmass_core::solver::{run, GridSpec, InitialData, InitialFamily, Mode, RunSpec};
use pointmass_core::specialfns::{e_kernel, erfc, erfcx, integrate_breaks, QuadOptions};

fn baseline() -> CharSystem {
    eigensystem(&PressureLaw::gamma(1.4).unwrap(), 1.0).unwrap()
}

/// `p(v) = a v^-g + b v^-2g`, negative slope and nonzero curvature at `v = 1`.
fn two_term_law(a: f64, b: f64, g: f64) -> PressureLaw {
    let g2 = 2.0 * g;
    PressureLaw::custom(
        "two-term",
        move |v: f64| a * v.powf(-g) + b * v.powf(-g2),
        move |v: f64| -a * g * v.powf(-g - 1.0) - b * g2 * v.powf(-g2 - 1.0),
        move |v: f64| a * g * (g + 1.0) * v.powf(-g - 2.0) + b * g2 * (g2 + 1.0) * v.powf(-g2 - 2.0),
    )
    .unwrap()
}

fn short_spec(family: InitialFamily, v0: f64, t_final: f64) -> RunSpec {
    let law = PressureLaw::gamma(1.4).unwrap();
    let cs = eigensystem(&law, 1.0).unwrap();
    let initial = InitialData::new(family, v0, 1.0, 1.0, &law, 1.0).unwrap();
    RunSpec {
        grid: GridSpec::new(30.0, 300, t_final, &cs),
        law,
        nu: 1.0,
        particle_mass: 1.0,
        initial,
        mode: Mode::Nonlinear,
        snapshot_times: vec![],
        stride: 1,
        h0: 0.0,
        output_dir: None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn eigenvectors_are_biorthogonal_and_complete(
        a in 0.2..5.0_f64, b in 0.0..2.0_f64, g in 0.6..3.0_f64, nu in 0.1..10.0_f64, gamma_law in any::<bool>()
    ) {
        let law = if gamma_law { PressureLaw::gamma(1.0 + g).unwrap() } else { two_term_law(a, b, g) };
        let cs = eigensystem(&law, nu).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let e = if i == j { 1.0 } else { 0.0 };
                let d = (cs.l[i] * cs.r[j])[0] - e;
                prop_assert!(d.abs() <= 1e-14, "l{i} r{j}: {d:e}");
            }
        }
        let id = cs.r[0] * cs.l[0] + cs.r[1] * cs.l[1];
        prop_assert!((id - nalgebra::Matrix2::identity()).abs().max() <= 1e-14);
    }

    #[test]
    fn diagonalisation_round_trips(amp in -0.5..0.5_f64, k in 0.1..3.0_f64, phase in 0.0..6.0_f64) {
        let cs = baseline();
        let tau = TwoSidedField::sample(0.05, 200, |s, x| amp * (k * x + phase + s.sign()).sin());
        let u = TwoSidedField::sample(0.05, 200, |_, x| amp * (k * x).cos() * (-0.1 * x).exp());
        let (u1, u2) = diagonal_components(&tau, &u, &cs).unwrap();
        let (t2, v2) = reconstruct(&u1, &u2, &cs).unwrap();
        let scale = tau.sup_abs().max(u.sup_abs()).max(f64::MIN_POSITIVE);
        let err = t2.zip_map(&tau, |a, b| (a - b).abs()).unwrap().sup_abs()
            .max(v2.zip_map(&u, |a, b| (a - b).abs()).unwrap().sup_abs());
        prop_assert!(err <= 1e-13 * scale, "{err:e}");
    }

    #[test]
    fn masses_converge_under_refinement(amp in -0.05..0.05_f64, c in 1.0..6.0_f64, w in 0.3..1.5_f64) {
        let cs = baseline();
        let field = |n: usize| {
            let h = 20.0 / n as f64;
            let tau = TwoSidedField::sample(h, n, |s, x| amp * (-((s.sign() * x - c) / w).powi(2)).exp() * (1.0 + 0.5 * s.sign()));
            let u = TwoSidedField::sample(h, n, |_, x| 0.5 * amp * (-((x - c) / w).powi(2)).exp());
            masses(&tau, &u, 0.0, &cs).unwrap()
        };
        let (m1, m2) = (field(100), field(200));
        let h = 0.2;
        for i in 0..2 {
            let d = (m1.m[i] - m2.m[i]).abs();
            prop_assert!(d <= 10.0 * h * h * amp.abs() + 1e-16, "branch {i}: {d:e}");
        }
    }

    #[test]
    fn erfcx_scales_erfc(x in -5.0..26.0_f64) {
        let e = erfc(x);
        let scaled = erfcx(x) * (-x * x).exp();
        if e > 1e-300 {
            prop_assert!((scaled / e - 1.0).abs() <= 1e-13, "{x}: {scaled:e} vs {e:e}");
        }
    }

    #[test]
    fn e_kernel_decreases_away_from_characteristic(t in 0.05..500.0_f64, d0 in 0.0..3.0_f64, step in 0.01..1.0_f64) {
        let (lam, mu) = (1.2, 2.0);
        let st = (mu * t).sqrt();
        // both samples satisfy x - lambda t + mu t > 0
        let (da, db) = (d0 * st, (d0 + step) * st);
        let ea = e_kernel(lam * t + da, t, lam, mu).unwrap();
        let eb = e_kernel(lam * t + db, t, lam, mu).unwrap();
        prop_assert!(eb <= ea, "{eb:e} > {ea:e}");
    }

    #[test]
    fn diffusion_wave_vanishes_at_particle(m in -0.3..0.3_f64, t in 0.0..200.0_f64) {
        let cs = baseline();
        for i in 0..2 {
            let w = DiffusionWave::new(i, cs.lambda[i], 1.0, m).unwrap();
            let th = w.theta(0.0, t).unwrap();
            prop_assert!(th.is_finite());
            let scaled = th.abs() * (cs.c * cs.c * t / 2.0).exp();
            prop_assert!(scaled <= 1.0, "{scaled}");
        }
    }

    #[test]
    fn diffusion_wave_sup_norm_decays_like_inverse_sqrt(m in prop_oneof![-0.3..-0.01_f64, 0.01..0.3_f64], lt in 0.0..4.0_f64) {
        let t = 10f64.powf(lt);
        let w = DiffusionWave::new(0, 1.2, 1.0, m).unwrap();
        let s = (t + 1.0).sqrt();
        let sup = (0..=400)
            .map(|k| w.theta(w.centre(t) + (k as f64 / 50.0 - 4.0) * s, t).unwrap().abs())
            .fold(0.0, f64::max);
        let r = s * sup / m.abs();
        prop_assert!((0.1..=1.0).contains(&r), "{r}");
    }

    #[test]
    fn symbol_is_dissipative(lxi in -4.0..4.0_f64) {
        let cs = baseline();
        let xi = 10f64.powf(lxi);
        for ev in generator_eigenvalues(xi, &cs) {
            prop_assert!(ev.re <= 0.0);
        }
    }

    #[test]
    fn slow_symbol_eigenvalue_tends_to_singular_rate(lxi in 3.0..5.0_f64) {
        let cs = baseline();
        let slow = generator_eigenvalues(10f64.powf(lxi), &cs)[0];
        let rate = -cs.c * cs.c / cs.nu;
        prop_assert!((slow.re / rate - 1.0).abs() <= 1e-5, "{slow}");
        prop_assert!(slow.im == 0.0);
    }

    #[test]
    fn fit_recovers_exact_power_law(alpha in 0.2..3.0_f64, amp in prop_oneof![-5.0..-0.1_f64, 0.1..5.0_f64]) {
        let series: Vec<(f64, f64)> = (0..1500).map(|k| {
            let t = 1.0 + k as f64;
            (t, amp * (t + 1.0).powf(-alpha))
        }).collect();
        let fit = fit_decay(&series, (30.0, 1400.0)).unwrap();
        prop_assert!((fit.alpha - alpha).abs() <= 1e-10, "{} vs {alpha}", fit.alpha);
    }

    #[test]
    fn psi32_bracket_at_particle(lt in 2.0..8.0_f64) {
        let c = baseline().c;
        let t = 10f64.powf(lt);
        let r = (t + 1.0).powf(1.5) * psi32(0.0, t, c) * c.powf(1.5);
        prop_assert!((0.9..=1.1).contains(&r), "{r}");
    }

    #[test]
    fn theta_products_separate(t in 0.0..100.0_f64, alpha in 0.0..3.0_f64, mu in 0.5..8.0_f64) {
        let c = baseline().c;
        let c0 = 4.0 * mu / (2.0 * c).powi(2);
        let tt = t + 1.0;
        let sup = (0..=2000)
            .map(|k| {
                let x = (k as f64 / 1000.0 - 1.0) * 2.0 * c * tt;
                theta_alpha(x, t, alpha, c, mu) * theta_alpha(x, t, alpha, -c, mu)
            })
            .fold(0.0, f64::max);
        prop_assert!(sup * (t / c0).exp() <= 1.0, "{}", sup * (t / c0).exp());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn green_function_carries_unit_mass(t in 0.3..8.0_f64) {
        let cs = baseline();
        let tab = GreenTable::new(t, &cs, Transmission::unit_mass()).unwrap();
        let w = tab.half_width();
        let ct = cs.c * t;
        let mut worst = 0.0_f64;
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let f = |x: f64| if x == 0.0 { 0.0 } else { tab.g_smooth(x).unwrap()[(i, j)] };
            let mut v = integrate_breaks(f, &[-w, -ct, 0.0, ct, w], QuadOptions::tol(1e-11, 1e-11)).unwrap().value;
            if (i, j) == (0, 0) {
                v += tab.singular_weight();
            }
            worst = f64::max(worst, (v - if i == j { 1.0 } else { 0.0 }).abs());
        }
        prop_assert!(worst <= 1e-6, "{worst:e}");
    }

    #[test]
    fn transmission_identity(t in 0.2..8.0_f64, x in prop_oneof![-6.0..-0.05_f64, 0.05..6.0_f64]) {
        let cs = baseline();
        let tab = GreenTable::new(t, &cs, Transmission::unit_mass()).unwrap();
        let lhs = tab.g_transmitted_dx(x).unwrap();
        // stated for x > 0; the left half-line is its mirror image
        let rhs = (tab.g_transmitted(x).unwrap() - tab.g_smooth(x).unwrap()) * (2.0 * x.signum());
        prop_assert!((lhs - rhs).abs().max() <= 1e-6);
    }

    #[test]
    fn symmetric_data_keeps_particle_at_rest(amp in -0.03..0.03_f64, center in 1.5..5.0_f64, width in 0.3..1.0_f64) {
        let fam = InitialFamily::SymmetricNull { amplitude: amp, center, width };
        let out = run(&short_spec(fam, 0.0, 4.0)).unwrap();
        let vmax = out.series.iter().fold(0.0_f64, |m, r| m.max(r.v.abs()));
        prop_assert!(vmax <= 1e-12, "{vmax:e}");
    }

    #[test]
    fn conservation_and_energy_decay(amp in -0.03..0.03_f64, v0 in -0.03..0.03_f64) {
        let fam = InitialFamily::Dipole { amplitude: amp, width: 1.0 };
        let out = run(&short_spec(fam, v0, 4.0)).unwrap();
        let l = &out.ledger;
        prop_assert!(l.mass_drift() <= 1e-6 && l.momentum_drift() <= 1e-6);
        prop_assert!(l.energy_drift() <= 1e-5);
        prop_assert!(l.dissipation >= 0.0);
    }
}
