//! The JSON problem format.
//!
//! ```json
//! {
//!   "x": ["x1", "x2"],
//!   "y": ["y1", "y2", "y3"],
//!   "kernel": {"type": "table", "entries": [[{"type": "affine", "c": 0, "m": 1}, ...], ...]},
//!   "g": {"x1": 8, "x2": 6},
//!   "x_restrict": ["x1"],
//!   "tolerance": 1e-9
//! }
//! ```
//!
//! Kernels are `table` (scalar forms), `moreau` (`bbar` matrix) or `grid`
//! (`family`, `x_grid`, `y_grid`, plus `a`, `omega` or `p` as the family
//! needs). Grid problems take their labels from the grids and omit `x`/`y`.
//! Infinite values are the strings `"-inf"` and `"+inf"`.

use std::path::Path;

use galois_core::{ExtReal, FunctionOnSpace, GaloisError, GridFamily, GridSpec, Kernel, OmegaSpec, Problem, ScalarConnection, Side};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<String>>,
    pub kernel: KernelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Values>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_restrict: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelSpec {
    /// Scalar forms, one row per x; parsed per entry so errors name the cell.
    Table { entries: Vec<Vec<serde_json::Value>> },
    Moreau { bbar: Vec<Vec<ExtReal>> },
    Grid {
        family: FamilyName,
        x_grid: GridSpec,
        y_grid: GridSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        a: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        omega: Option<OmegaSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    FenchelDot,
    Quadratic,
    OmegaLipschitz,
    WeightedPower,
}

/// A function given as `{label: value}` or as a list in label order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Values {
    Map(IndexMap<String, ExtReal>),
    List(Vec<ExtReal>),
}

impl Values {
    pub fn to_function(&self, kernel: &Kernel, side: Side) -> Result<FunctionOnSpace, GaloisError> {
        match self {
            Values::Map(m) => FunctionOnSpace::from_pairs(kernel, side, m.iter().map(|(k, v)| (k.as_str(), *v))),
            Values::List(v) => FunctionOnSpace::new(kernel, side, v.clone()),
        }
    }
}

fn validation(msg: String) -> CliError {
    CliError::Galois(GaloisError::Validation(msg))
}

impl ProblemFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(CliError::Json)
    }

    pub fn build_kernel(&self) -> Result<Kernel, CliError> {
        let labels = |v: &Option<Vec<String>>, side: &str| {
            v.clone().ok_or_else(|| validation(format!("table and moreau kernels need an \"{side}\" label list")))
        };
        let kernel = match &self.kernel {
            KernelSpec::Table { entries } => {
                let (xs, ys) = (labels(&self.x, "x")?, labels(&self.y, "y")?);
                let mut rows = Vec::with_capacity(entries.len());
                for (i, row) in entries.iter().enumerate() {
                    let mut parsed = Vec::with_capacity(row.len());
                    for (j, cell) in row.iter().enumerate() {
                        let form: ScalarConnection = serde_json::from_value(cell.clone()).map_err(|e| {
                            let at = |l: &[String], k: usize| l.get(k).cloned().unwrap_or_else(|| format!("#{}", k + 1));
                            validation(format!(
                                "entry ({}, {}) is not a valid scalar form (A3/A4): {e}",
                                at(&xs, i),
                                at(&ys, j)
                            ))
                        })?;
                        parsed.push(form);
                    }
                    rows.push(parsed);
                }
                Kernel::table(xs, ys, rows)?
            }
            KernelSpec::Moreau { bbar } => Kernel::moreau(labels(&self.x, "x")?, labels(&self.y, "y")?, bbar.clone())?,
            KernelSpec::Grid { family, x_grid, y_grid, a, omega, p } => {
                if self.x.is_some() || self.y.is_some() {
                    return Err(validation("grid kernels take their labels from the grids; drop \"x\" and \"y\"".into()));
                }
                let need = |v: Option<f64>, name: &str| {
                    v.ok_or_else(|| validation(format!("grid family {family:?} needs \"{name}\"")))
                };
                let family = match family {
                    FamilyName::FenchelDot => GridFamily::FenchelDot,
                    FamilyName::Quadratic => GridFamily::Quadratic { a: need(*a, "a")? },
                    FamilyName::OmegaLipschitz => {
                        let omega = omega.unwrap_or_else(OmegaSpec::abs);
                        omega.validate()?;
                        GridFamily::OmegaLipschitz { omega }
                    }
                    FamilyName::WeightedPower => GridFamily::WeightedPower { p: need(*p, "p")? },
                };
                Kernel::grid(family, x_grid, y_grid)?
            }
        };
        Ok(kernel)
    }

    /// The kernel and problem; `x_restrict` and `tolerance` override the file.
    pub fn build(&self, x_restrict: Option<&[String]>, tolerance: Option<f64>) -> Result<Problem, CliError> {
        let kernel = self.build_kernel()?;
        let g = self.g.as_ref().ok_or_else(|| validation("the problem file has no \"g\"".into()))?;
        let g = g.to_function(&kernel, Side::X)?;
        let mut problem = Problem::new(kernel, g)?;
        if let Some(r) = x_restrict.or(self.x_restrict.as_deref()) {
            problem = problem.with_x_restrict(r)?;
        }
        if let Some(eps) = tolerance.or(self.tolerance) {
            problem = problem.with_tolerance(eps)?;
        }
        Ok(problem)
    }
}
