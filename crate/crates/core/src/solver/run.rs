use std::fs;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::model::{eigensystem, masses, CharSystem, Masses, PressureLaw};

use super::grid::GridSpec;
use super::initial::InitialData;
use super::io::{write_series, write_snapshot, SeriesRow, Snapshot};
use super::ledger::ConservationLedger;
use super::state::FluidState;
use super::step::Stepper;
use super::Mode;

/// Everything a run needs.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub law: PressureLaw,
    pub nu: f64,
    pub particle_mass: f64,
    pub grid: GridSpec,
    pub initial: InitialData,
    pub mode: Mode,
    /// Snapshot times in `(0, t_final]`; `t = 0` is always recorded.
    pub snapshot_times: Vec<f64>,
    /// Record every `stride`-th step in the series (the last step always).
    pub stride: usize,
    /// Initial particle position.
    pub h0: f64,
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub series: Vec<SeriesRow>,
    pub snapshots: Vec<Snapshot>,
    pub ledger: ConservationLedger,
    pub final_state: FluidState,
    pub steps: usize,
    pub max_newton_iterations: usize,
    pub initial_masses: Masses,
    pub cs: CharSystem,
}

/// `{1, 2, 4, ...} ∩ (0, t_final]` plus `t_final`.
pub fn geometric_schedule(t_final: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut t = 1.0;
    while t < t_final {
        out.push(t);
        t *= 2.0;
    }
    out.push(t_final);
    out
}

fn row(state: &FluidState, ledger: &ConservationLedger) -> SeriesRow {
    SeriesRow {
        t: state.t,
        v: state.v,
        u_inf: state.u_inf(),
        mass: ledger.current.mass,
        momentum: ledger.current.momentum,
        energy_plus_dissipation: ledger.energy_plus_dissipation(),
    }
}

fn snapshot(state: &FluidState) -> Snapshot {
    let (tau, u) = state.node_fields();
    Snapshot { t: state.t, tau, u }
}

pub fn run(spec: &RunSpec) -> Result<RunOutput> {
    let cs = eigensystem(&spec.law, spec.nu)?;
    spec.grid.validate(&cs)?;
    if spec.stride == 0 {
        return Err(Error::param("stride", "must be at least 1"));
    }
    let mut times: Vec<f64> = spec
        .snapshot_times
        .iter()
        .copied()
        .filter(|&t| t > 0.0 && t <= spec.grid.t_final)
        .collect();
    times.push(spec.grid.t_final);
    times.sort_by(f64::total_cmp);
    times.dedup();

    if let Some(dir) = &spec.output_dir {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut state = FluidState::from_initial(&spec.initial, &spec.grid, spec.h0)?;
    let (tau0, u0) = state.node_fields();
    let initial_masses = masses(&tau0, &u0, spec.initial.v0, &cs)?;
    let mut ledger = ConservationLedger::new(&state, &spec.law, spec.mode, spec.particle_mass);
    let mut stepper = Stepper::new(&spec.law, spec.nu, spec.particle_mass, spec.mode, spec.grid.n);

    let mut series = vec![row(&state, &ledger)];
    let mut snapshots = vec![snapshot(&state)];
    if let Some(dir) = &spec.output_dir {
        write_snapshot(dir, &snapshots[0])?;
    }
    let dt = spec.grid.dt;
    let mut steps = 0;
    let mut max_newton = 0;
    for &target in &times {
        loop {
            let remaining = target - state.t;
            if remaining <= 1e-12 * dt {
                break;
            }
            let landing = remaining <= dt * (1.0 + 1e-9);
            let step = if landing { remaining } else { dt };
            let info = stepper.step(&mut state, step)?;
            if landing {
                state.t = target;
            }
            steps += 1;
            max_newton = max_newton.max(info.newton_iterations);
            ledger.update(&state, &spec.law, spec.mode, spec.particle_mass, info.dissipation);
            if steps % spec.stride == 0 || landing {
                series.push(row(&state, &ledger));
            }
        }
        let snap = snapshot(&state);
        if let Some(dir) = &spec.output_dir {
            write_snapshot(dir, &snap)?;
        }
        snapshots.push(snap);
    }
    if let Some(dir) = &spec.output_dir {
        write_series(dir, &series)?;
    }
    Ok(RunOutput {
        series,
        snapshots,
        ledger,
        final_state: state,
        steps,
        max_newton_iterations: max_newton,
        initial_masses,
        cs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Side;
    use crate::solver::initial::InitialFamily;

    fn law() -> PressureLaw {
        PressureLaw::gamma(1.4).unwrap()
    }

    fn spec(family: InitialFamily, v0: f64, l: f64, n: usize, t_final: f64, mode: Mode) -> RunSpec {
        let law = law();
        let cs = eigensystem(&law, 1.0).unwrap();
        let initial = InitialData::new(family, v0, 1.0, 1.0, &law, 1.0).unwrap();
        RunSpec {
            grid: GridSpec::new(l, n, t_final, &cs),
            law,
            nu: 1.0,
            particle_mass: 1.0,
            initial,
            mode,
            snapshot_times: vec![],
            stride: 1,
            h0: 0.0,
            output_dir: None,
        }
    }

    fn bump(amplitude: f64) -> InitialFamily {
        InitialFamily::GaussianBump {
            amplitude,
            center: 3.0,
            width: 1.0,
            velocity: 0.0,
        }
    }

    #[test]
    fn zero_state_stays_zero() {
        let s = spec(bump(0.0), 0.0, 20.0, 100, 2.0, Mode::Nonlinear);
        let out = run(&s).unwrap();
        assert_eq!(out.final_state.u_inf(), 0.0);
        assert!(out.final_state.cells(Side::Right).iter().all(|t| *t == 0.0));
    }

    #[test]
    fn symmetric_data_leaves_particle_at_rest() {
        let fam = InitialFamily::SymmetricNull {
            amplitude: 0.02,
            center: 3.0,
            width: 1.0,
        };
        let mut s = spec(fam, 0.0, 30.0, 300, 10.0, Mode::Nonlinear);
        s.grid.dt = 1e-3;
        let out = run(&s).unwrap();
        assert!(out.steps >= 10_000);
        let vmax = out.series.iter().fold(0.0_f64, |m, r| m.max(r.v.abs()));
        assert!(vmax <= 1e-12, "{vmax}");
        assert!(out.final_state.u_inf() > 1e-4);
    }

    #[test]
    fn ledgers_balance_on_a_short_run() {
        let fam = InitialFamily::Dipole { amplitude: 0.02, width: 1.0 };
        // short enough that nothing reaches the outer boundary
        let s = spec(fam, 0.01, 40.0, 400, 6.0, Mode::Nonlinear);
        let out = run(&s).unwrap();
        let l = &out.ledger;
        assert!(l.mass_drift() < 1e-12, "{}", l.mass_drift());
        assert!(l.momentum_drift() < 1e-12, "{}", l.momentum_drift());
        assert!(l.energy_drift() < 1e-10, "{}", l.energy_drift());
        assert!(l.dissipation > 0.0);
        // energy itself decreases monotonically
        let e: Vec<f64> = out.series.windows(2).map(|w| w[1].energy_plus_dissipation - w[0].energy_plus_dissipation).collect();
        assert!(e.iter().all(|d| d.abs() < 1e-14));
    }

    #[test]
    fn single_step_error_is_second_order() {
        let law = law();
        let cs = eigensystem(&law, 1.0).unwrap();
        let fam = InitialFamily::Dipole { amplitude: 0.05, width: 1.0 };
        let data = InitialData::new(fam, 0.02, 1.0, 1.0, &law, 1.0).unwrap();
        let grid = GridSpec::new(20.0, 200, 1.0, &cs);
        let s0 = FluidState::from_initial(&data, &grid, 0.0).unwrap();
        let advance = |dt: f64, k: usize| {
            let mut s = s0.clone();
            let mut st = Stepper::new(&law, 1.0, 1.0, Mode::Nonlinear, grid.n);
            for _ in 0..k {
                st.step(&mut s, dt / k as f64).unwrap();
            }
            s
        };
        // below the viscous stiffness scale dt ~ h^2 / nu the local error is clean
        let dt = 0.25 * grid.dt;
        let diff = |a: &FluidState, b: &FluidState| {
            let mut m = (a.v - b.v).abs();
            for i in 0..2 {
                for (x, y) in a.w[i].iter().zip(&b.w[i]) {
                    m = m.max((x - y).abs());
                }
                for (x, y) in a.tau[i].iter().zip(&b.tau[i]) {
                    m = m.max((x - y).abs());
                }
            }
            m
        };
        let e1 = diff(&advance(dt, 1), &advance(dt, 100));
        let e2 = diff(&advance(dt / 2.0, 1), &advance(dt / 2.0, 100));
        assert!(e1 / e2 >= 4.0, "{e1} {e2}");
    }

    #[test]
    fn grid_convergence_is_second_order() {
        let fam = InitialFamily::Dipole { amplitude: 0.02, width: 1.0 };
        let solve = |n: usize| {
            let mut s = spec(fam.clone(), 0.01, 16.0, n, 2.0, Mode::Nonlinear);
            // same dt/h ratio on every grid
            s.grid.dt = 0.2 * s.grid.h();
            run(&s).unwrap().final_state
        };
        let (a, b, c) = (solve(160), solve(320), solve(640));
        let mut e1 = 0.0_f64;
        let mut e2 = 0.0_f64;
        for side in Side::BOTH {
            for j in 0..=160 {
                let (ua, ub, uc) = (a.u_node(side, j), b.u_node(side, 2 * j), c.u_node(side, 4 * j));
                e1 = e1.max((ua - ub).abs());
                e2 = e2.max((ub - uc).abs());
            }
        }
        let order = (e1 / e2).log2();
        assert!((1.7..=2.3).contains(&order), "order {order}");
    }

    #[test]
    fn snapshots_land_on_requested_times() {
        let mut s = spec(bump(0.01), 0.0, 20.0, 100, 3.0, Mode::Nonlinear);
        s.snapshot_times = vec![0.5, 1.0, 7.0];
        let out = run(&s).unwrap();
        let t: Vec<f64> = out.snapshots.iter().map(|s| s.t).collect();
        assert_eq!(t, vec![0.0, 0.5, 1.0, 3.0]);
        assert_eq!(out.series.last().unwrap().t, 3.0);
    }

    #[test]
    fn output_files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mut s = spec(bump(0.01), 0.0, 20.0, 100, 2.0, Mode::Nonlinear);
        s.output_dir = Some(dir.path().to_path_buf());
        s.snapshot_times = geometric_schedule(2.0);
        let out = run(&s).unwrap();
        let series = super::super::io::read_series(&dir.path().join("series.csv")).unwrap();
        assert_eq!(series, out.series);
        let snaps = super::super::io::read_snapshots(dir.path()).unwrap();
        assert_eq!(snaps, out.snapshots);
    }

    #[test]
    fn positivity_loss_aborts() {
        let fam = InitialFamily::GaussianBump {
            amplitude: -1.2,
            center: 3.0,
            width: 1.0,
            velocity: 0.0,
        };
        let s = spec(fam, 0.0, 20.0, 100, 1.0, Mode::Nonlinear);
        assert!(matches!(run(&s), Err(Error::PositivityLost { .. })));
    }

    #[test]
    fn truncation_rule_enforced() {
        let s = spec(bump(0.01), 0.0, 20.0, 100, 50.0, Mode::Nonlinear);
        assert!(matches!(run(&s), Err(Error::Config(_))));
    }
}
