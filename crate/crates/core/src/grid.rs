//! Rectangular sample grids used to discretize continuous spaces.

use serde::{Deserialize, Serialize};

use crate::error::{GaloisError, Result};

/// Upper bound on the number of points of a grid.
pub const MAX_GRID_POINTS: usize = 10_000_000;

/// One axis `min, min + step, …, max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Axis {
    pub fn len(&self) -> usize {
        ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn value(&self, k: usize) -> f64 {
        self.min + k as f64 * self.step
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.value(k)).collect()
    }

    /// Decimal places needed to print the points of this axis.
    fn decimals(&self) -> usize {
        (0..=12)
            .find(|&d| {
                let scale = 10f64.powi(d as i32);
                let (s, m) = (self.step * scale, self.min * scale);
                (s - s.round()).abs() < 1e-6 && (m - m.round()).abs() < 1e-6
            })
            .unwrap_or(12)
    }
}

/// A product of axes; points are enumerated with the last axis varying fastest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Axis>", into = "Vec<Axis>")]
pub struct GridSpec {
    axes: Vec<Axis>,
}

impl GridSpec {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() {
            return Err(GaloisError::Validation("a grid needs at least one axis".into()));
        }
        let mut total: usize = 1;
        for (i, a) in axes.iter().enumerate() {
            if !(a.min.is_finite() && a.max.is_finite() && a.step.is_finite()) {
                return Err(GaloisError::Validation(format!("grid axis {i} has non-finite bounds")));
            }
            if a.step <= 0.0 {
                return Err(GaloisError::Validation(format!("grid axis {i}: step must be > 0")));
            }
            if a.max <= a.min {
                return Err(GaloisError::Validation(format!("grid axis {i}: max must exceed min")));
            }
            total = total.saturating_mul(a.len());
        }
        if total > MAX_GRID_POINTS {
            return Err(GaloisError::Validation(format!(
                "grid has {total} points, more than {MAX_GRID_POINTS}"
            )));
        }
        Ok(Self { axes })
    }

    /// One-dimensional grid.
    pub fn line(min: f64, max: f64, step: f64) -> Result<Self> {
        Self::new(vec![Axis { min, max, step }])
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(Axis::len).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinates of point `k`.
    pub fn point(&self, mut k: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for (slot, axis) in out.iter_mut().zip(&self.axes).rev() {
            let n = axis.len();
            *slot = axis.value(k % n);
            k /= n;
        }
        out
    }

    /// All coordinates, `dim` values per point.
    pub fn flat_points(&self) -> Vec<f64> {
        (0..self.len()).flat_map(|k| self.point(k)).collect()
    }

    /// Index of the grid point nearest to `coords`.
    pub fn nearest(&self, coords: &[f64]) -> usize {
        self.axes.iter().zip(coords).fold(0, |acc, (axis, &c)| {
            let n = axis.len();
            let k = ((c - axis.min) / axis.step).round().clamp(0.0, (n - 1) as f64) as usize;
            acc * n + k
        })
    }

    pub fn labels(&self) -> Vec<String> {
        let decimals: Vec<usize> = self.axes.iter().map(Axis::decimals).collect();
        (0..self.len())
            .map(|k| {
                let p = self.point(k);
                let parts: Vec<String> =
                    p.iter().zip(&decimals).map(|(&v, &d)| format_coord(v, d)).collect();
                if parts.len() == 1 {
                    parts.into_iter().next().unwrap()
                } else {
                    format!("({})", parts.join(","))
                }
            })
            .collect()
    }
}

fn format_coord(v: f64, decimals: usize) -> String {
    let s = format!("{v:.decimals$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.chars().all(|c| c == '0' || c == '.') => rest.to_string(),
        _ => s,
    }
}

impl TryFrom<Vec<Axis>> for GridSpec {
    type Error = GaloisError;

    fn try_from(axes: Vec<Axis>) -> Result<Self> {
        Self::new(axes)
    }
}

impl From<GridSpec> for Vec<Axis> {
    fn from(g: GridSpec) -> Self {
        g.axes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_counts() {
        assert_eq!(GridSpec::line(-2.0, 2.0, 0.5).unwrap().len(), 9);
        assert_eq!(GridSpec::line(-6.0, 8.0, 1e-3).unwrap().len(), 14001);
        assert_eq!(GridSpec::line(-2.0, 2.0, 0.01).unwrap().len(), 401);
        let g = GridSpec::new(vec![
            Axis { min: 0.0, max: 1.0, step: 0.5 },
            Axis { min: 1.0, max: 2.0, step: 1.0 },
        ])
        .unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g.point(3), vec![0.5, 2.0]);
        assert_eq!(g.nearest(&[0.49, 1.9]), 3);
    }

    #[test]
    fn invalid_grids() {
        assert!(GridSpec::line(0.0, 1.0, 0.0).is_err());
        assert!(GridSpec::line(1.0, 1.0, 0.1).is_err());
        assert!(GridSpec::line(0.0, 1.0, 1e-8).is_err());
        assert!(GridSpec::new(vec![]).is_err());
    }

    #[test]
    fn labels_are_rounded_and_unique() {
        let g = GridSpec::line(-1.0, 1.0, 0.1).unwrap();
        let labels = g.labels();
        assert_eq!(labels[0], "-1.0");
        assert_eq!(labels[10], "0.0");
        assert_eq!(labels[13], "0.3");
        let mut dedup = labels.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), labels.len());
        let g2 = GridSpec::new(vec![
            Axis { min: 0.0, max: 1.0, step: 1.0 },
            Axis { min: 0.5, max: 1.0, step: 0.5 },
        ])
        .unwrap();
        assert_eq!(g2.labels(), vec!["(0,0.5)", "(0,1.0)", "(1,0.5)", "(1,1.0)"]);
    }
}
