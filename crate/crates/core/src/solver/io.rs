//! CSV output of runs and the matching readers. Values use Rust's shortest
//! round-trip float formatting, so writing and reading is lossless.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::model::TwoSidedField;

pub const SERIES_HEADER: &str = "t,V,u_inf,mass,momentum,energy_plus_dissipation";
pub const SNAPSHOT_HEADER: &str = "x,tau,u";
pub const SERIES_FILE: &str = "series.csv";

/// One row of the scalar time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub t: f64,
    pub v: f64,
    pub u_inf: f64,
    pub mass: f64,
    pub momentum: f64,
    pub energy_plus_dissipation: f64,
}

/// Node values at one time; each interface limit appears once per side.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub tau: TwoSidedField,
    pub u: TwoSidedField,
}

pub fn snapshot_file_name(t: f64) -> String {
    format!("snap_t{t}.csv")
}

pub fn series_to_csv(rows: &[SeriesRow]) -> String {
    let mut s = String::with_capacity(64 * (rows.len() + 1));
    s.push_str(SERIES_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            r.t, r.v, r.u_inf, r.mass, r.momentum, r.energy_plus_dissipation
        );
    }
    s
}

pub fn snapshot_to_csv(snap: &Snapshot) -> String {
    let mut s = String::with_capacity(48 * (2 * snap.u.right.len() + 1));
    s.push_str(SNAPSHOT_HEADER);
    s.push('\n');
    let h = snap.u.h;
    let n = snap.u.n();
    for j in (0..=n).rev() {
        // the left interface row is written as x = -0
        let x = -(j as f64 * h);
        let _ = writeln!(s, "{},{},{}", x, snap.tau.left[j], snap.u.left[j]);
    }
    for j in 0..=n {
        let _ = writeln!(s, "{},{},{}", j as f64 * h, snap.tau.right[j], snap.u.right[j]);
    }
    s
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn write_series(dir: &Path, rows: &[SeriesRow]) -> Result<PathBuf> {
    let p = dir.join(SERIES_FILE);
    write(&p, &series_to_csv(rows))?;
    Ok(p)
}

pub fn write_snapshot(dir: &Path, snap: &Snapshot) -> Result<PathBuf> {
    let p = dir.join(snapshot_file_name(snap.t));
    write(&p, &snapshot_to_csv(snap))?;
    Ok(p)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn parse_row<const K: usize>(path: &Path, line_no: usize, line: &str) -> Result<[f64; K]> {
    let mut out = [0.0; K];
    let mut it = line.split(',');
    for (k, o) in out.iter_mut().enumerate() {
        let field = it.next().ok_or_else(|| Error::Parse {
            path: path.into(),
            line: line_no,
            message: format!("expected {K} columns, found {k}"),
        })?;
        *o = field.trim().parse().map_err(|_| Error::Parse {
            path: path.into(),
            line: line_no,
            message: format!("not a number: {field:?}"),
        })?;
    }
    if it.next().is_some() {
        return Err(Error::Parse {
            path: path.into(),
            line: line_no,
            message: format!("more than {K} columns"),
        });
    }
    Ok(out)
}

fn check_header(path: &Path, text: &str, header: &str) -> Result<()> {
    match text.lines().next() {
        Some(h) if h.trim() == header => Ok(()),
        other => Err(Error::Parse {
            path: path.into(),
            line: 1,
            message: format!("expected header {header:?}, found {:?}", other.unwrap_or("")),
        }),
    }
}

pub fn parse_series(path: &Path, text: &str) -> Result<Vec<SeriesRow>> {
    check_header(path, text, SERIES_HEADER)?;
    text.lines()
        .enumerate()
        .skip(1)
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let [t, v, u_inf, mass, momentum, e] = parse_row::<6>(path, i + 1, l)?;
            Ok(SeriesRow {
                t,
                v,
                u_inf,
                mass,
                momentum,
                energy_plus_dissipation: e,
            })
        })
        .collect()
}

pub fn read_series(path: &Path) -> Result<Vec<SeriesRow>> {
    parse_series(path, &read(path)?)
}

/// Parses a snapshot; rows with a negative sign bit on `x` belong to the
/// left half-line.
pub fn parse_snapshot(path: &Path, t: f64, text: &str) -> Result<Snapshot> {
    check_header(path, text, SNAPSHOT_HEADER)?;
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (i, l) in text.lines().enumerate().skip(1) {
        if l.trim().is_empty() {
            continue;
        }
        let row = parse_row::<3>(path, i + 1, l)?;
        if row[0].is_sign_negative() {
            left.push(row);
        } else {
            right.push(row);
        }
    }
    left.reverse();
    let bad = |m: &str| Error::Parse {
        path: path.into(),
        line: 0,
        message: m.into(),
    };
    if left.len() != right.len() || right.len() < 2 {
        return Err(bad("left and right halves must have equal length >= 2"));
    }
    if left[0][0] != 0.0 || right[0][0] != 0.0 {
        return Err(bad("both interface rows (x = -0 and x = 0) are required"));
    }
    let h = right[1][0];
    for (j, (a, b)) in left.iter().zip(&right).enumerate() {
        let x = j as f64 * h;
        if (b[0] - x).abs() > 1e-9 * (1.0 + x) || (a[0] + x).abs() > 1e-9 * (1.0 + x) {
            return Err(bad("snapshot grid is not uniform"));
        }
    }
    let col = |v: &[[f64; 3]], k: usize| v.iter().map(|r| r[k]).collect::<Vec<_>>();
    Ok(Snapshot {
        t,
        tau: TwoSidedField::new(h, col(&left, 1), col(&right, 1))?,
        u: TwoSidedField::new(h, col(&left, 2), col(&right, 2))?,
    })
}

/// Reads `snap_t<value>.csv`; the time is taken from the file name.
pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("");
    let t = name
        .strip_prefix("snap_t")
        .and_then(|s| s.strip_suffix(".csv"))
        .and_then(|s| s.parse::<f64>().ok())
        .ok_or_else(|| Error::Parse {
            path: path.into(),
            line: 0,
            message: "file name must be snap_t<value>.csv".into(),
        })?;
    parse_snapshot(path, t, &read(path)?)
}

/// All snapshots in `dir`, sorted by time.
pub fn read_snapshots(dir: &Path) -> Result<Vec<Snapshot>> {
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let p = entry.map_err(|e| Error::io(dir, e))?.path();
        let is_snap = p
            .file_name()
            .and_then(|s| s.to_str())
            .is_some_and(|s| s.starts_with("snap_t") && s.ends_with(".csv"));
        if is_snap {
            paths.push(p);
        }
    }
    let mut snaps = paths.iter().map(|p| read_snapshot(p)).collect::<Result<Vec<_>>>()?;
    snaps.sort_by(|a, b| a.t.total_cmp(&b.t));
    Ok(snaps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_round_trip_is_lossless() {
        let rows = vec![
            SeriesRow {
                t: 0.1 + 0.2,
                v: -1.234_567_890_123_456_7e-17,
                u_inf: 3.0,
                mass: 1.0 / 3.0,
                momentum: 0.0,
                energy_plus_dissipation: 2.5e-300,
            };
            3
        ];
        let text = series_to_csv(&rows);
        let back = parse_series(Path::new("s.csv"), &text).unwrap();
        assert_eq!(rows, back);
    }

    #[test]
    fn snapshot_round_trip_is_lossless() {
        let tau = TwoSidedField::new(0.1, vec![0.5, 1.0 / 7.0, 0.0], vec![0.25, -1e-9, 0.0]).unwrap();
        let u = TwoSidedField::new(0.1, vec![-0.3, 0.2, 0.0], vec![-0.3, 0.1, 0.0]).unwrap();
        let snap = Snapshot { t: 2.5, tau, u };
        let text = snapshot_to_csv(&snap);
        assert!(text.contains("\n-0,0.5,-0.3\n"));
        let back = parse_snapshot(Path::new("snap_t2.5.csv"), 2.5, &text).unwrap();
        assert_eq!(snap, back);
    }

    #[test]
    fn malformed_rows_report_line_numbers() {
        let text = format!("{SERIES_HEADER}\n0,1,2,3,4,5\n0,1,x,3,4,5\n");
        match parse_series(Path::new("s.csv"), &text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn snapshot_names() {
        assert_eq!(snapshot_file_name(1.0), "snap_t1.csv");
        assert_eq!(snapshot_file_name(2.5), "snap_t2.5.csv");
    }
}
