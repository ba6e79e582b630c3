//! CSV writers for grids, contours and trajectories, plus a numeric reader.
//!
//! Floats use Rust's shortest round-trip formatting, so `parse::<f64>()` of a
//! written field returns the original bits. Singular grid cells are written as
//! `NaN` with `singular = 1`.

use std::fmt::Write as _;

use crate::analysis::{ContourSet, GridScan};
use crate::dynamics::Trajectory;
use crate::error::{Error, Result};

pub const GRID_HEADER: &str = "beta,G,value,singular";
pub const CONTOUR_HEADER: &str = "polyline_id,beta,G";
pub const TRAJECTORY_HEADER: &str = "t,S,dS,m_cum,N,mu,nu";

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else {
        format!("{v:?}")
    }
}

pub fn grid_csv(scan: &GridScan) -> String {
    let mut out = String::with_capacity(48 * scan.rows() * scan.cols());
    out.push_str(GRID_HEADER);
    out.push('\n');
    for (_, _, beta, g, value) in scan.cells() {
        let (v, flag) = match value {
            Some(v) => (fmt_f64(v), 0),
            None => ("NaN".to_string(), 1),
        };
        writeln!(out, "{},{},{v},{flag}", fmt_f64(beta), fmt_f64(g)).unwrap();
    }
    out
}

pub fn contour_csv(set: &ContourSet) -> String {
    let mut out = String::from(CONTOUR_HEADER);
    out.push('\n');
    for (id, line) in set.polylines.iter().enumerate() {
        for &(beta, g) in line {
            writeln!(out, "{id},{},{}", fmt_f64(beta), fmt_f64(g)).unwrap();
        }
    }
    out
}

/// One row per state, `t = 0..=horizon`. `dS` is the move into that state.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::from(TRAJECTORY_HEADER);
    out.push('\n');
    for s in &traj.states {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            s.t,
            fmt_f64(s.s),
            fmt_f64(s.ds_obs),
            fmt_f64(s.m_cum),
            fmt_f64(s.n_t),
            fmt_f64(s.mu_t),
            fmt_f64(s.nu_t)
        )
        .unwrap();
    }
    out
}

/// Writes a generic numeric table with the given header.
pub fn table_csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let fields: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// A parsed numeric CSV: header names and rows of floats.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

/// Parses a CSV whose data fields are all numeric; checks every row's width.
pub fn parse_table(text: &str) -> Result<Table> {
    let mut lines = text.lines().enumerate();
    let header: Vec<String> = match lines.next() {
        Some((_, h)) => h.split(',').map(str::to_string).collect(),
        None => {
            return Err(Error::ConfigParse {
                line: 1,
                message: "empty CSV".into(),
            })
        }
    };
    let mut rows = Vec::new();
    for (i, line) in lines {
        let row = line
            .split(',')
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::ConfigParse {
                line: i + 1,
                message: e.to_string(),
            })?;
        if row.len() != header.len() {
            return Err(Error::ConfigParse {
                line: i + 1,
                message: format!("expected {} fields, found {}", header.len(), row.len()),
            });
        }
        rows.push(row);
    }
    Ok(Table { header, rows })
}
