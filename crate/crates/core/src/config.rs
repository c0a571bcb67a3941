//! Flat `key = value` / `[section]` run configuration.
//!
//! ```text
//! [pressure]
//! family = gamma
//! gamma = 1.4
//!
//! [physics]
//! nu = 1
//! m = 1
//!
//! [grid]
//! L = 700
//! N = 8000
//! t_final = 500
//!
//! [initial]
//! family = gaussian_bump
//! amplitude = 0.01
//! center = 3
//! width = 0.333333333333333
//! velocity = right
//!
//! [output]
//! dir = runs/decay
//! stride = 10
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::model::{eigensystem, CharSystem, PressureLaw};
use crate::solver::{geometric_schedule, GridSpec, InitialData, InitialFamily, Mode, RunSpec};

/// Pulse velocity for `gaussian_bump`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Velocity {
    /// `u0 = -c A G`: travels right, carries no left-going mass.
    Right,
    /// `u0 = c A G`.
    Left,
    /// `u0 = value G`.
    Value(f64),
}

impl Velocity {
    pub fn resolve(self, amplitude: f64, c: f64) -> f64 {
        match self {
            Velocity::Right => -c * amplitude,
            Velocity::Left => c * amplitude,
            Velocity::Value(v) => v,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialConfig {
    GaussianBump {
        amplitude: f64,
        center: f64,
        width: f64,
        velocity: Velocity,
    },
    Dipole {
        amplitude: f64,
        width: f64,
    },
    SymmetricNull {
        amplitude: f64,
        center: f64,
        width: f64,
    },
    CustomSamples {
        path: PathBuf,
        samples: Vec<(f64, f64, f64)>,
    },
}

/// Snapshot schedule: the geometric default or an explicit list.
#[derive(Debug, Clone, PartialEq)]
pub enum Schedule {
    Geometric,
    Times(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub gamma: f64,
    pub nu: f64,
    pub m: f64,
    pub l: f64,
    pub n: usize,
    /// `None` selects the CFL default.
    pub dt: Option<f64>,
    pub t_final: f64,
    pub truncation_factor: f64,
    pub initial: InitialConfig,
    pub v0: f64,
    pub h0: f64,
    pub blend_radius: f64,
    pub output_dir: Option<PathBuf>,
    pub schedule: Schedule,
    pub stride: usize,
    pub mode: Mode,
    pub seed: u64,
}

impl RunConfig {
    pub fn law(&self) -> Result<PressureLaw> {
        PressureLaw::gamma(self.gamma)
    }

    pub fn char_system(&self) -> Result<CharSystem> {
        eigensystem(&self.law()?, self.nu)
    }

    pub fn grid(&self, cs: &CharSystem) -> GridSpec {
        let mut g = GridSpec::new(self.l, self.n, self.t_final, cs);
        if let Some(dt) = self.dt {
            g.dt = dt;
        }
        g.truncation_factor = self.truncation_factor;
        g
    }

    pub fn family(&self, cs: &CharSystem) -> InitialFamily {
        match &self.initial {
            InitialConfig::GaussianBump {
                amplitude,
                center,
                width,
                velocity,
            } => InitialFamily::GaussianBump {
                amplitude: *amplitude,
                center: *center,
                width: *width,
                velocity: velocity.resolve(*amplitude, cs.c),
            },
            InitialConfig::Dipole { amplitude, width } => InitialFamily::Dipole {
                amplitude: *amplitude,
                width: *width,
            },
            InitialConfig::SymmetricNull {
                amplitude,
                center,
                width,
            } => InitialFamily::SymmetricNull {
                amplitude: *amplitude,
                center: *center,
                width: *width,
            },
            InitialConfig::CustomSamples { samples, .. } => InitialFamily::CustomSamples {
                samples: samples.clone(),
            },
        }
    }

    pub fn run_spec(&self) -> Result<RunSpec> {
        let law = self.law()?;
        let cs = eigensystem(&law, self.nu)?;
        let grid = self.grid(&cs);
        grid.validate(&cs)?;
        let initial = InitialData::new(self.family(&cs), self.v0, self.m, self.blend_radius, &law, self.nu)?;
        let snapshot_times = match &self.schedule {
            Schedule::Geometric => geometric_schedule(self.t_final),
            Schedule::Times(t) => t.clone(),
        };
        Ok(RunSpec {
            law,
            nu: self.nu,
            particle_mass: self.m,
            grid,
            initial,
            mode: self.mode,
            snapshot_times,
            stride: self.stride,
            h0: self.h0,
            output_dir: self.output_dir.clone(),
        })
    }
}

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: usize,
    used: bool,
}

#[derive(Default)]
struct Table {
    entries: BTreeMap<(String, String), Entry>,
    errors: Vec<(usize, String)>,
}

impl Table {
    fn err(&mut self, line: usize, msg: impl fmt::Display) {
        self.errors.push((line, msg.to_string()));
    }

    fn take(&mut self, section: &str, key: &str) -> Option<(String, usize)> {
        let e = self.entries.get_mut(&(section.to_string(), key.to_string()))?;
        e.used = true;
        Some((e.value.clone(), e.line))
    }

    fn parse_value<T: std::str::FromStr>(&mut self, section: &str, key: &str, what: &str) -> Option<(T, usize)> {
        let (v, line) = self.take(section, key)?;
        match v.parse::<T>() {
            Ok(x) => Some((x, line)),
            Err(_) => {
                self.err(line, format!("[{section}] {key}: expected {what}, got `{v}`"));
                None
            }
        }
    }

    fn float(&mut self, section: &str, key: &str, default: f64) -> f64 {
        match self.parse_value::<f64>(section, key, "a number") {
            Some((x, line)) if !x.is_finite() => {
                self.err(line, format!("[{section}] {key}: must be finite"));
                default
            }
            Some((x, _)) => x,
            None => default,
        }
    }

    fn positive(&mut self, section: &str, key: &str, default: f64) -> f64 {
        let line = self.line_of(section, key);
        let before = self.errors.len();
        let x = self.float(section, key, default);
        if self.errors.len() == before && !(x > 0.0) {
            self.err(line.unwrap_or(0), format!("[{section}] {key}: must be positive, got {x}"));
        }
        x
    }

    fn required_float(&mut self, section: &str, key: &str) -> f64 {
        if self.line_of(section, key).is_none() {
            self.err(0, format!("[{section}] {key}: required"));
            return f64::NAN;
        }
        self.positive(section, key, f64::NAN)
    }

    fn line_of(&self, section: &str, key: &str) -> Option<usize> {
        self.entries
            .get(&(section.to_string(), key.to_string()))
            .map(|e| e.line)
    }
}

fn lex(text: &str) -> Table {
    let mut table = Table::default();
    let mut section = String::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            match rest.strip_suffix(']') {
                Some(name) if !name.trim().is_empty() => section = name.trim().to_string(),
                _ => table.err(line, format!("malformed section header `{content}`")),
            }
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            table.err(line, format!("expected `key = value`, got `{content}`"));
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            table.err(line, "empty key");
            continue;
        }
        let slot = (section.clone(), key.to_string());
        if let Some(prev) = table.entries.get(&slot) {
            let first = prev.line;
            table.err(line, format!("duplicate key `{key}` in [{section}] (first set on line {first}, again on line {line})"));
            continue;
        }
        table.entries.insert(
            slot,
            Entry {
                value: value.to_string(),
                line,
                used: false,
            },
        );
    }
    table
}

/// Parses and validates a configuration; relative paths stay relative.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_in(text, None)
}

/// As [`parse_config`], resolving `samples` and `dir` against `base`.
pub fn parse_config_in(text: &str, base: Option<&Path>) -> Result<RunConfig> {
    let mut t = lex(text);

    let family = t.take("pressure", "family");
    if let Some((f, line)) = &family {
        if f != "gamma" {
            t.err(*line, format!("[pressure] family: unknown family `{f}` (expected gamma)"));
        }
    }
    let gamma = t.float("pressure", "gamma", 1.4);
    if !(gamma > 1.0) {
        let line = t.line_of("pressure", "gamma").unwrap_or(0);
        t.err(line, format!("[pressure] gamma: must exceed 1, got {gamma}"));
    }

    let nu = t.positive("physics", "nu", 1.0);
    let m = t.positive("physics", "m", 1.0);

    let l = t.required_float("grid", "L");
    let n = match t.parse_value::<usize>("grid", "N", "a positive integer") {
        Some((n, _)) => n,
        None => {
            if t.line_of("grid", "N").is_none() {
                t.err(0, "[grid] N: required");
            }
            0
        }
    };
    let t_final = t.required_float("grid", "t_final");
    let dt = t.line_of("grid", "dt").map(|_| t.positive("grid", "dt", f64::NAN));
    let truncation_factor = t.float("grid", "truncation_factor", crate::solver::DEFAULT_TRUNCATION_FACTOR);

    let initial = parse_initial(&mut t, base);
    let v0 = t.float("initial", "V0", 0.0);
    let h0 = t.float("initial", "h0", 0.0);
    let blend_radius = t.positive("initial", "blend_radius", 1.0);

    let output_dir = t.take("output", "dir").map(|(v, _)| resolve(base, &v));
    let schedule = match t.take("output", "snapshots") {
        None => Schedule::Geometric,
        Some((v, _)) if v == "geometric" => Schedule::Geometric,
        Some((v, line)) => {
            let parsed: std::result::Result<Vec<f64>, _> = v.split(',').map(|s| s.trim().parse::<f64>()).collect();
            match parsed {
                Ok(times) if times.iter().all(|x| *x > 0.0 && x.is_finite()) => Schedule::Times(times),
                _ => {
                    t.err(line, format!("[output] snapshots: expected `geometric` or positive comma-separated times, got `{v}`"));
                    Schedule::Geometric
                }
            }
        }
    };
    let stride = match t.parse_value::<usize>("output", "stride", "a positive integer") {
        Some((0, line)) => {
            t.err(line, "[output] stride: must be at least 1");
            1
        }
        Some((s, _)) => s,
        None => 1,
    };

    let mode = match t.take("run", "mode") {
        None => Mode::Nonlinear,
        Some((v, line)) => Mode::parse(&v).unwrap_or_else(|| {
            t.err(line, format!("[run] mode: expected nonlinear or linear, got `{v}`"));
            Mode::Nonlinear
        }),
    };
    let seed = t.parse_value::<u64>("run", "seed", "a non-negative integer").map_or(0, |(s, _)| s);

    let unknown: Vec<(usize, String)> = t
        .entries
        .iter()
        .filter(|(_, e)| !e.used)
        .map(|((s, k), e)| (e.line, format!("unknown key `{k}` in [{s}]")))
        .collect();
    t.errors.extend(unknown);

    if t.errors.is_empty() {
        let cfg = RunConfig {
            gamma,
            nu,
            m,
            l,
            n,
            dt,
            t_final,
            truncation_factor,
            initial,
            v0,
            h0,
            blend_radius,
            output_dir,
            schedule,
            stride,
            mode,
            seed,
        };
        let cs = cfg.char_system()?;
        if let Err(Error::Config(msgs)) = cfg.grid(&cs).validate(&cs) {
            let line = t.line_of("grid", "L").unwrap_or(0);
            t.errors.extend(msgs.into_iter().map(|m| (line, format!("[grid] {m}"))));
        }
        if t.errors.is_empty() {
            if let Err(e) = InitialData::new(cfg.family(&cs), v0, m, blend_radius, &cfg.law()?, nu) {
                let line = t.line_of("initial", "family").unwrap_or(0);
                t.err(line, format!("[initial] {e}"));
            }
        }
        if t.errors.is_empty() {
            return Ok(cfg);
        }
    }
    t.errors.sort_by_key(|(l, _)| *l);
    Err(Error::Config(
        t.errors
            .into_iter()
            .map(|(l, m)| if l == 0 { m } else { format!("line {l}: {m}") })
            .collect(),
    ))
}

fn resolve(base: Option<&Path>, v: &str) -> PathBuf {
    let p = PathBuf::from(v);
    match base {
        Some(b) if p.is_relative() => b.join(p),
        _ => p,
    }
}

fn parse_initial(t: &mut Table, base: Option<&Path>) -> InitialConfig {
    let fallback = InitialConfig::Dipole {
        amplitude: 0.0,
        width: 1.0,
    };
    let Some((family, fline)) = t.take("initial", "family") else {
        t.err(0, "[initial] family: required");
        return fallback;
    };
    match family.as_str() {
        "gaussian_bump" => {
            let amplitude = t.float("initial", "amplitude", 0.01);
            let center = t.float("initial", "center", 3.0);
            let width = t.positive("initial", "width", 1.0 / 3.0);
            let velocity = match t.take("initial", "velocity") {
                None => Velocity::Value(0.0),
                Some((v, line)) => match v.as_str() {
                    "right" => Velocity::Right,
                    "left" => Velocity::Left,
                    _ => match v.parse::<f64>() {
                        Ok(x) if x.is_finite() => Velocity::Value(x),
                        _ => {
                            t.err(line, format!("[initial] velocity: expected right, left or a number, got `{v}`"));
                            Velocity::Value(0.0)
                        }
                    },
                },
            };
            InitialConfig::GaussianBump {
                amplitude,
                center,
                width,
                velocity,
            }
        }
        "dipole" => InitialConfig::Dipole {
            amplitude: t.float("initial", "amplitude", 0.01),
            width: t.positive("initial", "width", 1.0),
        },
        "symmetric_null" => InitialConfig::SymmetricNull {
            amplitude: t.float("initial", "amplitude", 0.01),
            center: t.float("initial", "center", 3.0),
            width: t.positive("initial", "width", 1.0 / 3.0),
        },
        "custom_samples" => {
            let Some((p, line)) = t.take("initial", "samples") else {
                t.err(fline, "[initial] custom_samples needs `samples = <csv path>`");
                return fallback;
            };
            let path = resolve(base, &p);
            match read_samples(&path) {
                Ok(samples) => InitialConfig::CustomSamples { path, samples },
                Err(e) => {
                    t.err(line, format!("[initial] samples: {e}"));
                    fallback
                }
            }
        }
        other => {
            t.err(
                fline,
                format!("[initial] family: unknown family `{other}` (expected gaussian_bump, dipole, symmetric_null, custom_samples)"),
            );
            fallback
        }
    }
}

/// Reads `x,tau,u` rows; a non-numeric first line is taken as a header.
pub fn read_samples(path: &Path) -> Result<Vec<(f64, f64, f64)>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let nums: Vec<f64> = cols.iter().filter_map(|c| c.parse().ok()).collect();
        if nums.len() != 3 || cols.len() != 3 {
            if idx == 0 {
                continue;
            }
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                message: format!("expected three numbers `x,tau,u`, got `{line}`"),
            });
        }
        out.push((nums[0], nums[1], nums[2]));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
[pressure]
family = gamma
gamma = 1.4
[physics]
nu = 1
[grid]
L = 40
N = 400
t_final = 5
[initial]
family = gaussian_bump
";

    fn messages(r: Result<RunConfig>) -> Vec<String> {
        match r {
            Err(Error::Config(m)) => m,
            other => panic!("expected config errors, got {other:?}"),
        }
    }

    #[test]
    fn minimal_config_fills_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.gamma, 1.4);
        assert_eq!(c.m, 1.0);
        assert_eq!(c.v0, 0.0);
        assert_eq!(c.stride, 1);
        assert_eq!(c.mode, Mode::Nonlinear);
        assert_eq!(c.seed, 0);
        assert_eq!(c.schedule, Schedule::Geometric);
        assert_eq!(c.truncation_factor, crate::solver::DEFAULT_TRUNCATION_FACTOR);
        let InitialConfig::GaussianBump { amplitude, center, width, velocity } = c.initial else {
            panic!()
        };
        assert_eq!((amplitude, center, width), (0.01, 3.0, 1.0 / 3.0));
        assert_eq!(velocity, Velocity::Value(0.0));
        let spec = c.run_spec().unwrap();
        assert_eq!(spec.grid.n, 400);
    }

    #[test]
    fn short_domain_names_truncation_inequality() {
        let text = MINIMAL.replace("t_final = 5", "t_final = 50");
        let msgs = messages(parse_config(&text));
        assert_eq!(msgs.len(), 1);
        assert!(msgs[0].contains("truncation"), "{msgs:?}");
        assert!(msgs[0].contains("c t_final"), "{msgs:?}");
        assert!(msgs[0].starts_with("line 7:"), "{msgs:?}");
    }

    #[test]
    fn duplicate_key_names_both_lines() {
        let text = format!("{MINIMAL}amplitude = 0.01\namplitude = 0.02\n");
        let msgs = messages(parse_config(&text));
        assert_eq!(msgs.len(), 1);
        assert!(msgs[0].contains("line 12") && msgs[0].contains("line 13"), "{msgs:?}");
    }

    #[test]
    fn unknown_keys_are_fatal() {
        let text = format!("{MINIMAL}amplitud = 0.02\n[grid2]\nL = 3\n");
        let msgs = messages(parse_config(&text));
        assert_eq!(msgs.len(), 2, "{msgs:?}");
        assert!(msgs[0].contains("line 12: unknown key `amplitud`"));
        assert!(msgs[1].contains("[grid2]"));
    }

    #[test]
    fn type_mismatch_is_located() {
        let text = MINIMAL.replace("N = 400", "N = 40.5").replace("nu = 1", "nu = one");
        let msgs = messages(parse_config(&text));
        assert_eq!(msgs.len(), 2, "{msgs:?}");
        assert!(msgs[0].starts_with("line 5:") && msgs[0].contains("nu"));
        assert!(msgs[1].starts_with("line 8:") && msgs[1].contains("integer"));
    }

    #[test]
    fn velocity_keywords_resolve_against_c() {
        let text = format!("{MINIMAL}velocity = right\n");
        let c = parse_config(&text).unwrap();
        let cs = c.char_system().unwrap();
        let InitialFamily::GaussianBump { velocity, .. } = c.family(&cs) else { panic!() };
        assert!((velocity + 0.01 * 1.4_f64.sqrt()).abs() < 1e-15);
        assert_eq!(Velocity::Left.resolve(0.5, 2.0), 1.0);
    }

    #[test]
    fn symmetric_null_rejects_moving_particle() {
        let text = MINIMAL.replace("gaussian_bump", "symmetric_null") + "V0 = 0.1\n";
        let msgs = messages(parse_config(&text));
        assert!(msgs[0].contains("V0"), "{msgs:?}");
    }

    #[test]
    fn custom_samples_resolve_relative_to_base() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("init.csv"), "x,tau,u\n-1,0,0\n1,0.01,0\n2,0,0\n").unwrap();
        let text = MINIMAL.replace("gaussian_bump", "custom_samples\nsamples = init.csv");
        let c = parse_config_in(&text, Some(dir.path())).unwrap();
        let InitialConfig::CustomSamples { samples, .. } = &c.initial else { panic!() };
        assert_eq!(samples.len(), 3);
        assert!(messages(parse_config(&text))[0].contains("samples"));
    }

    #[test]
    fn schedule_and_mode_parse() {
        let text = format!("{MINIMAL}[output]\nsnapshots = 0.5, 1, 2\nstride = 5\n[run]\nmode = linear\nseed = 7\n");
        let c = parse_config(&text).unwrap();
        assert_eq!(c.schedule, Schedule::Times(vec![0.5, 1.0, 2.0]));
        assert_eq!((c.stride, c.mode, c.seed), (5, Mode::Linear, 7));
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = format!("# header\n\n{}", MINIMAL.replace("nu = 1", "nu = 1   # viscosity"));
        assert_eq!(parse_config(&text).unwrap().nu, 1.0);
    }
}
