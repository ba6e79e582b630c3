//! Marching-squares iso-line extraction on a [`GridScan`].
//!
//! A corner is "inside" when its value is `>= level`. Crossings are placed by
//! linear interpolation along cell edges, and saddle cells are resolved by the
//! sign of the cell-centre average relative to the level. Cells touching a
//! singular corner are skipped.

use std::collections::BTreeMap;

use super::grid::GridScan;

/// A crossing location: the edge between two neighbouring grid nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum EdgeId {
    /// Between (i, j) and (i, j + 1): fixed β, varying G.
    AlongG(usize, usize),
    /// Between (i, j) and (i + 1, j): fixed G, varying β.
    AlongBeta(usize, usize),
}

/// Iso-lines at a single level, as ordered `(beta, G)` vertex lists.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourSet {
    pub level: f64,
    pub polylines: Vec<Vec<(f64, f64)>>,
}

impl ContourSet {
    pub fn is_empty(&self) -> bool {
        self.polylines.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.polylines.iter().map(Vec::len).sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.polylines.iter().flatten().copied()
    }
}

fn crossing(scan: &GridScan, edge: EdgeId, level: f64) -> (f64, f64) {
    let spec = &scan.spec;
    let lerp = |v0: f64, v1: f64| (level - v0) / (v1 - v0);
    match edge {
        EdgeId::AlongG(i, j) => {
            let (v0, v1) = (scan.get(i, j).unwrap(), scan.get(i, j + 1).unwrap());
            let (g0, g1) = (spec.g_at(j), spec.g_at(j + 1));
            (spec.beta_at(i), g0 + lerp(v0, v1) * (g1 - g0))
        }
        EdgeId::AlongBeta(i, j) => {
            let (v0, v1) = (scan.get(i, j).unwrap(), scan.get(i + 1, j).unwrap());
            let (b0, b1) = (spec.beta_at(i), spec.beta_at(i + 1));
            (b0 + lerp(v0, v1) * (b1 - b0), spec.g_at(j))
        }
    }
}

/// Segments of one cell as pairs of crossed edges.
fn cell_segments(scan: &GridScan, i: usize, j: usize, level: f64) -> Vec<(EdgeId, EdgeId)> {
    let corners = [(i, j), (i, j + 1), (i + 1, j + 1), (i + 1, j)];
    let mut v = [0.0; 4];
    for (slot, &(r, c)) in v.iter_mut().zip(&corners) {
        match scan.get(r, c) {
            Some(x) if x.is_finite() => *slot = x,
            _ => return Vec::new(),
        }
    }
    let inside: Vec<bool> = v.iter().map(|x| *x >= level).collect();
    // edges in cyclic order: corner k to corner k+1
    let edges = [
        EdgeId::AlongG(i, j),
        EdgeId::AlongBeta(i, j + 1),
        EdgeId::AlongG(i + 1, j),
        EdgeId::AlongBeta(i, j),
    ];
    let crossed: Vec<usize> = (0..4)
        .filter(|&e| inside[e] != inside[(e + 1) % 4])
        .collect();
    match crossed.len() {
        2 => vec![(edges[crossed[0]], edges[crossed[1]])],
        4 => {
            let centre_inside = v.iter().sum::<f64>() / 4.0 >= level;
            // corner k sits between edges k-1 and k; isolate the corners that disagree with the centre
            let isolate = |k: usize| (edges[(k + 3) % 4], edges[k]);
            if inside[0] == centre_inside {
                vec![isolate(1), isolate(3)]
            } else {
                vec![isolate(0), isolate(2)]
            }
        }
        _ => Vec::new(),
    }
}

/// Extracts the `level` iso-lines of `scan`. An empty set means the level is never crossed.
pub fn extract_contour(scan: &GridScan, level: f64) -> ContourSet {
    let mut segments = Vec::new();
    for i in 0..scan.rows() - 1 {
        for j in 0..scan.cols() - 1 {
            segments.extend(cell_segments(scan, i, j, level));
        }
    }

    let mut incident: BTreeMap<EdgeId, Vec<usize>> = BTreeMap::new();
    for (s, (a, b)) in segments.iter().enumerate() {
        incident.entry(*a).or_default().push(s);
        incident.entry(*b).or_default().push(s);
    }

    let mut used = vec![false; segments.len()];
    let mut polylines = Vec::new();

    let walk = |start: EdgeId, used: &mut Vec<bool>| -> Option<Vec<EdgeId>> {
        let mut path = vec![start];
        let mut at = start;
        loop {
            let next = incident[&at].iter().copied().find(|&s| !used[s]);
            let Some(s) = next else { break };
            used[s] = true;
            let (a, b) = segments[s];
            at = if a == at { b } else { a };
            path.push(at);
        }
        (path.len() > 1).then_some(path)
    };

    // open lines start at boundary crossings (one incident segment), then closed loops
    let ends: Vec<EdgeId> = incident
        .iter()
        .filter(|(_, s)| s.len() == 1)
        .map(|(e, _)| *e)
        .collect();
    for e in ends {
        if let Some(path) = walk(e, &mut used) {
            polylines.push(path);
        }
    }
    let all: Vec<EdgeId> = incident.keys().copied().collect();
    for e in all {
        if let Some(path) = walk(e, &mut used) {
            polylines.push(path);
        }
    }

    ContourSet {
        level,
        polylines: polylines
            .into_iter()
            .map(|p| p.into_iter().map(|e| crossing(scan, e, level)).collect())
            .collect(),
    }
}
