use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{denominator_at, EPS_SINGULAR};

/// Axes and fixed parameters of a (β, G) scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub beta_min: f64,
    pub beta_max: f64,
    pub g_min: f64,
    pub g_max: f64,
    pub n_beta: usize,
    pub n_g: usize,
    /// Exogenous shock ratio at which the surprise is evaluated for every cell.
    pub shock_ratio: f64,
    pub lambda: f64,
    pub sigma_m: f64,
    pub k: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            beta_min: 0.2,
            beta_max: 3.0,
            g_min: 0.0,
            g_max: 300.0,
            n_beta: 200,
            n_g: 200,
            shock_ratio: 0.05,
            lambda: 0.003,
            sigma_m: 0.03,
            k: 2.0,
        }
    }
}

fn linspace(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + i as f64 * (hi - lo) / (n - 1) as f64
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("beta_min", self.beta_min),
            ("beta_max", self.beta_max),
            ("g_min", self.g_min),
            ("g_max", self.g_max),
            ("shock_ratio", self.shock_ratio),
            ("lambda", self.lambda),
            ("sigma_m", self.sigma_m),
            ("k", self.k),
        ];
        for (field, v) in finite {
            if !v.is_finite() {
                return Err(Error::domain(field, v, "must be finite"));
            }
        }
        if self.beta_min <= 0.0 {
            return Err(Error::domain("beta_min", self.beta_min, "must be > 0"));
        }
        if self.beta_max <= self.beta_min {
            return Err(Error::domain(
                "beta_max",
                self.beta_max,
                "must be > beta_min",
            ));
        }
        if self.g_min < 0.0 {
            return Err(Error::domain("g_min", self.g_min, "must be >= 0"));
        }
        // g_max == g_min is allowed: a degenerate constant-exposure scan
        if self.g_max < self.g_min {
            return Err(Error::domain("g_max", self.g_max, "must be >= g_min"));
        }
        if self.n_beta < 2 {
            return Err(Error::domain("n_beta", self.n_beta as f64, "must be >= 2"));
        }
        if self.n_g < 2 {
            return Err(Error::domain("n_g", self.n_g as f64, "must be >= 2"));
        }
        if self.shock_ratio < 0.0 {
            return Err(Error::domain(
                "shock_ratio",
                self.shock_ratio,
                "must be >= 0",
            ));
        }
        if self.sigma_m <= 0.0 {
            return Err(Error::domain("sigma_m", self.sigma_m, "must be > 0"));
        }
        if self.k < 0.0 {
            return Err(Error::domain("k", self.k, "must be >= 0"));
        }
        Ok(())
    }

    /// β of row `i`; the axis is an inclusive linear space.
    pub fn beta_at(&self, i: usize) -> f64 {
        linspace(self.beta_min, self.beta_max, self.n_beta, i)
    }

    /// G of column `j`; the axis is an inclusive linear space.
    pub fn g_at(&self, j: usize) -> f64 {
        linspace(self.g_min, self.g_max, self.n_g, j)
    }

    pub fn beta_step(&self) -> f64 {
        (self.beta_max - self.beta_min) / (self.n_beta - 1) as f64
    }

    pub fn g_step(&self) -> f64 {
        (self.g_max - self.g_min) / (self.n_g - 1) as f64
    }

    fn denominator(&self, i: usize, j: usize) -> f64 {
        // spec is validated, so the kernel cannot fail
        denominator_at(
            self.lambda,
            self.g_at(j),
            self.beta_at(i),
            self.sigma_m,
            self.k,
            self.shock_ratio,
        )
        .expect("validated grid spec")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridField {
    StabilityDenominator,
    Amplification,
}

/// A scalar field over (β, G), stored row-major with β along rows.
#[derive(Debug, Clone, PartialEq)]
pub struct GridScan {
    pub spec: GridSpec,
    pub field: GridField,
    values: Vec<f64>,
    singular: Vec<bool>,
}

impl GridScan {
    /// Builds a scan from raw row-major values. Non-finite entries are tagged singular.
    pub fn from_values(spec: GridSpec, field: GridField, values: Vec<f64>) -> Result<Self> {
        spec.validate()?;
        if values.len() != spec.n_beta * spec.n_g {
            return Err(Error::domain(
                "values",
                values.len() as f64,
                "length must equal n_beta * n_g",
            ));
        }
        let singular = values.iter().map(|v| !v.is_finite()).collect();
        Ok(GridScan {
            spec,
            field,
            values,
            singular,
        })
    }

    pub fn rows(&self) -> usize {
        self.spec.n_beta
    }

    pub fn cols(&self) -> usize {
        self.spec.n_g
    }

    /// Cell value, or `None` for a singular cell.
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let idx = i * self.spec.n_g + j;
        if self.singular[idx] {
            None
        } else {
            Some(self.values[idx])
        }
    }

    pub fn is_singular(&self, i: usize, j: usize) -> bool {
        self.singular[i * self.spec.n_g + j]
    }

    /// Raw row-major values; singular cells hold NaN.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn singular_count(&self) -> usize {
        self.singular.iter().filter(|s| **s).count()
    }

    /// Iterates `(i, j, beta, g, value)` in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, f64, f64, Option<f64>)> + '_ {
        let n_g = self.spec.n_g;
        (0..self.values.len()).map(move |idx| {
            let (i, j) = (idx / n_g, idx % n_g);
            (
                i,
                j,
                self.spec.beta_at(i),
                self.spec.g_at(j),
                self.get(i, j),
            )
        })
    }

    /// Finite value range, ignoring singular cells.
    pub fn range(&self) -> Option<(f64, f64)> {
        self.values
            .iter()
            .zip(&self.singular)
            .filter(|(_, s)| !**s)
            .map(|(v, _)| *v)
            .fold(None, |acc, v| match acc {
                None => Some((v, v)),
                Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
            })
    }
}

fn scan_with(spec: &GridSpec, field: GridField, cell: impl Fn(f64) -> f64) -> Result<GridScan> {
    spec.validate()?;
    let values: Vec<f64> = (0..spec.n_beta)
        .flat_map(|i| (0..spec.n_g).map(move |j| (i, j)))
        .map(|(i, j)| cell(spec.denominator(i, j)))
        .collect();
    GridScan::from_values(*spec, field, values)
}

/// Stability denominator `D` at every (β, G) cell.
pub fn stability_grid(spec: &GridSpec) -> Result<GridScan> {
    scan_with(spec, GridField::StabilityDenominator, |d| d)
}

/// Amplification `1/D` at every cell; cells with `D <= EPS_SINGULAR` are singular.
pub fn amplification_grid(spec: &GridSpec) -> Result<GridScan> {
    scan_with(spec, GridField::Amplification, |d| {
        if d > EPS_SINGULAR {
            1.0 / d
        } else {
            f64::NAN
        }
    })
}
