//! Finite kernels b: X × Y × ℝ̄ → ℝ̄ with their support set S.
//!
//! A kernel is valid when
//!
//! - every row x has some (x, y) ∈ S (A1),
//! - every column y has some (x, y) ∈ S (A2),
//! - entries on S are decreasing bijections of ℝ̄ (A3),
//! - entries off S are identically −∞ (A4).
//!
//! A3 and A4 hold by construction: S is exactly the set of entries that are
//! not [`ScalarConnection::Off`], and every other form is a bijection. A1 and
//! A2 are checked by every builder.
//!
//! Three storage layouts share one interface: explicit tables of scalar
//! forms, dense Moreau tables `b(x,y,λ) = b̄(x,y) − λ`, and grid kernels
//! whose coupling b̄ is generated from a [`GridFamily`] formula.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{GaloisError, Result};
use crate::extreal::{ExtReal, Kind};
use crate::grid::GridSpec;
use crate::scalar_conn::ScalarConnection;

/// Grid kernels with more entries than this compute b̄ on demand.
pub const DENSE_LIMIT: usize = 1_000_000;

/// ω(u) = a‖u‖^q with a > 0 and 0 < q ≤ 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaSpec {
    pub a: f64,
    pub q: f64,
}

impl OmegaSpec {
    pub fn new(a: f64, q: f64) -> Result<Self> {
        let spec = Self { a, q };
        spec.validate()?;
        Ok(spec)
    }

    /// ω = |·|
    pub fn abs() -> Self {
        Self { a: 1.0, q: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.a > 0.0) {
            return Err(GaloisError::Validation(format!("omega: a must be > 0, got {}", self.a)));
        }
        if !(self.q > 0.0 && self.q <= 1.0) {
            return Err(GaloisError::Validation(format!("omega: q must lie in (0, 1], got {}", self.q)));
        }
        Ok(())
    }

    /// ω at a point of norm `norm`.
    #[inline]
    pub fn of_norm(&self, norm: f64) -> f64 {
        if self.q == 1.0 {
            self.a * norm
        } else {
            self.a * norm.powf(self.q)
        }
    }

    /// Checks ω(u + v) ≤ ω(u) + ω(v) on sampled pairs of grid differences.
    ///
    /// Only differences of grid points are exercised; subadditivity on the
    /// whole space follows from the parameter bounds, not from this scan.
    pub fn subadditivity_violation(&self, grid: &GridSpec) -> Option<(Vec<f64>, Vec<f64>)> {
        let n = grid.len();
        let stride = (n / 40).max(1);
        let origin = grid.point(0);
        let diffs: Vec<Vec<f64>> = (0..n)
            .step_by(stride)
            .map(|k| grid.point(k).iter().zip(&origin).map(|(p, o)| p - o).collect())
            .collect();
        let norm = |v: &[f64]| v.iter().map(|c| c * c).sum::<f64>().sqrt();
        for u in &diffs {
            for v in &diffs {
                for sign in [1.0, -1.0] {
                    let w: Vec<f64> = u.iter().zip(v).map(|(a, b)| a + sign * b).collect();
                    let lhs = self.of_norm(norm(&w));
                    let rhs = self.of_norm(norm(u)) + self.of_norm(norm(v));
                    if lhs > rhs + 1e-9 * (1.0 + rhs) {
                        return Some((u.clone(), v.iter().map(|b| sign * b).collect()));
                    }
                }
            }
        }
        None
    }
}

/// Coupling formulas for grid kernels, written as b̄(x, y) = c(x, y) − ψ(y).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum GridFamily {
    /// b̄(x, y) = ⟨x, y⟩
    FenchelDot,
    /// b̄(x, y) = ⟨x, y⟩ − (a/2)‖y‖²
    Quadratic { a: f64 },
    /// b̄(x, y) = −ω(y − x)
    OmegaLipschitz { omega: OmegaSpec },
    /// b̄((x′, x″), y) = −x″‖y − x′‖^p; the last x coordinate is x″.
    WeightedPower { p: f64 },
}

#[inline]
fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

#[inline]
fn dist(x: &[f64], y: &[f64]) -> f64 {
    if x.len() == 1 {
        (y[0] - x[0]).abs()
    } else {
        x.iter().zip(y).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt()
    }
}

impl GridFamily {
    fn validate(&self, x_grid: &GridSpec, y_grid: &GridSpec) -> Result<()> {
        let (dx, dy) = (x_grid.dim(), y_grid.dim());
        match self {
            Self::FenchelDot | Self::Quadratic { .. } | Self::OmegaLipschitz { .. } if dx != dy => {
                Err(GaloisError::Validation(format!("x grid has dimension {dx}, y grid {dy}")))
            }
            Self::Quadratic { a } if !a.is_finite() || *a == 0.0 => {
                Err(GaloisError::Validation("quadratic kernel needs a finite a ≠ 0".into()))
            }
            Self::OmegaLipschitz { omega } => omega.validate(),
            Self::WeightedPower { p } => {
                if !(p.is_finite() && *p > 0.0) {
                    return Err(GaloisError::Validation(format!("weighted power: p must be > 0, got {p}")));
                }
                if dx != dy + 1 {
                    return Err(GaloisError::Validation(format!(
                        "weighted power: x grid must have dimension {} (x′ then x″), got {dx}",
                        dy + 1
                    )));
                }
                let weight = x_grid.axes()[dx - 1];
                if weight.min <= 0.0 {
                    return Err(GaloisError::Validation("weighted power: x″ must be > 0".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// c(x, y)
    #[inline]
    pub fn coupling(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            Self::FenchelDot | Self::Quadratic { .. } => dot(x, y),
            Self::OmegaLipschitz { omega } => -omega.of_norm(dist(x, y)),
            Self::WeightedPower { p } => {
                let (xp, w) = x.split_at(x.len() - 1);
                let d = dist(xp, y);
                let dp = if *p == 1.0 { d } else if *p == 2.0 { d * d } else { d.powf(*p) };
                -w[0] * dp
            }
        }
    }

    /// ψ(y)
    #[inline]
    pub fn penalty(&self, y: &[f64]) -> f64 {
        match self {
            Self::Quadratic { a } => 0.5 * a * dot(y, y),
            _ => 0.0,
        }
    }
}

#[derive(Clone, Debug)]
struct GridBody {
    family: GridFamily,
    x_grid: GridSpec,
    y_grid: GridSpec,
    x_pts: Vec<f64>,
    y_pts: Vec<f64>,
    /// grid index of each retained y point
    y_index: Vec<usize>,
    penalty: Vec<f64>,
    coupling: Option<Vec<f64>>,
}

impl GridBody {
    #[inline]
    fn coupling_at(&self, i: usize, j: usize) -> f64 {
        match &self.coupling {
            Some(c) => c[i * self.penalty.len() + j],
            None => {
                let (dx, dy) = (self.x_grid.dim(), self.y_grid.dim());
                self.family
                    .coupling(&self.x_pts[i * dx..(i + 1) * dx], &self.y_pts[j * dy..(j + 1) * dy])
            }
        }
    }

    #[inline]
    fn term(&self, i: usize, j: usize, lambda: ExtReal) -> ExtReal {
        match lambda.kind() {
            Kind::PosInf => ExtReal::NEG_INF,
            Kind::NegInf => ExtReal::POS_INF,
            Kind::Finite(l) => ExtReal::from_non_nan(self.coupling_at(i, j) - (l + self.penalty[j])),
        }
    }
}

#[derive(Clone, Debug)]
enum Body {
    Table { forward: Vec<ScalarConnection>, adjoint: Vec<ScalarConnection> },
    Moreau { bbar: Vec<ExtReal> },
    Grid(Box<GridBody>),
}

/// A validated kernel on finite index sets X and Y.
#[derive(Clone, Debug)]
pub struct Kernel {
    x_labels: Vec<String>,
    y_labels: Vec<String>,
    x_lookup: HashMap<String, usize>,
    y_lookup: HashMap<String, usize>,
    body: Body,
}

fn lookup(labels: &[String], side: &str) -> Result<HashMap<String, usize>> {
    let mut map = HashMap::with_capacity(labels.len());
    for (k, l) in labels.iter().enumerate() {
        if map.insert(l.clone(), k).is_some() {
            return Err(GaloisError::Validation(format!("duplicate {side} label {l:?}")));
        }
    }
    Ok(map)
}

/// `b̄ − λ` with −∞ absorbing.
#[inline]
fn moreau_term(bbar: ExtReal, lambda: ExtReal) -> ExtReal {
    bbar.sub_lo(lambda)
}

impl Kernel {
    fn assemble(x_labels: Vec<String>, y_labels: Vec<String>, body: Body) -> Result<Self> {
        if x_labels.is_empty() || y_labels.is_empty() {
            return Err(GaloisError::Validation("X and Y must be nonempty".into()));
        }
        let x_lookup = lookup(&x_labels, "x")?;
        let y_lookup = lookup(&y_labels, "y")?;
        let k = Self { x_labels, y_labels, x_lookup, y_lookup, body };
        k.check_a1_a2()?;
        Ok(k)
    }

    fn check_a1_a2(&self) -> Result<()> {
        if matches!(self.body, Body::Grid(_)) {
            return Ok(());
        }
        for i in 0..self.nx() {
            if !(0..self.ny()).any(|j| self.in_support(i, j)) {
                return Err(GaloisError::Validation(format!(
                    "A1 violated: row {} has no support entry (S_x is empty)",
                    self.x_labels[i]
                )));
            }
        }
        for j in 0..self.ny() {
            if !(0..self.nx()).any(|i| self.in_support(i, j)) {
                return Err(GaloisError::Validation(format!(
                    "A2 violated: column {} has no support entry (S^y is empty)",
                    self.y_labels[j]
                )));
            }
        }
        Ok(())
    }

    /// Kernel given entry by entry; `entries[x][y]` is the slice b(x, y, ·).
    pub fn table(
        x_labels: Vec<String>,
        y_labels: Vec<String>,
        entries: Vec<Vec<ScalarConnection>>,
    ) -> Result<Self> {
        check_shape(&x_labels, &y_labels, &entries)?;
        let forward: Vec<ScalarConnection> = entries.into_iter().flatten().collect();
        let adjoint = forward.iter().map(ScalarConnection::adjoint).collect::<Result<_>>()?;
        Self::assemble(x_labels, y_labels, Body::Table { forward, adjoint })
    }

    /// Moreau kernel b(x, y, λ) = b°(y, x, λ) = b̄(x, y) − λ. Entries of b̄ must
    /// lie in ℝ ∪ {−∞}; the support is where b̄ is finite.
    pub fn moreau(x_labels: Vec<String>, y_labels: Vec<String>, bbar: Vec<Vec<ExtReal>>) -> Result<Self> {
        check_shape(&x_labels, &y_labels, &bbar)?;
        for (i, row) in bbar.iter().enumerate() {
            if let Some(j) = row.iter().position(|v| v.is_pos_inf()) {
                return Err(GaloisError::Validation(format!(
                    "b̄({}, {}) = +inf; Moreau kernels need values in R ∪ {{-inf}}",
                    x_labels[i], y_labels[j]
                )));
            }
        }
        let bbar = bbar.into_iter().flatten().collect();
        Self::assemble(x_labels, y_labels, Body::Moreau { bbar })
    }

    /// Moreau kernel on sample grids with b̄ from `family`.
    pub fn grid(family: GridFamily, x_grid: &GridSpec, y_grid: &GridSpec) -> Result<Self> {
        family.validate(x_grid, y_grid)?;
        let x_pts = x_grid.flat_points();
        let y_pts = y_grid.flat_points();
        let (nx, ny, dx, dy) = (x_grid.len(), y_grid.len(), x_grid.dim(), y_grid.dim());
        let penalty: Vec<f64> = y_pts.chunks(dy).map(|y| family.penalty(y)).collect();
        let coupling = (nx.saturating_mul(ny) <= DENSE_LIMIT).then(|| {
            x_pts
                .chunks(dx)
                .flat_map(|x| y_pts.chunks(dy).map(move |y| family.coupling(x, y)))
                .collect()
        });
        let body = GridBody {
            family,
            x_grid: x_grid.clone(),
            y_grid: y_grid.clone(),
            x_pts,
            y_pts,
            y_index: (0..ny).collect(),
            penalty,
            coupling,
        };
        Self::assemble(x_grid.labels(), y_grid.labels(), Body::Grid(Box::new(body)))
    }

    /// The kernel on X × `y_subset`, i.e. f(y) = +∞ forced off the subset.
    pub fn restrict<S: AsRef<str>>(&self, y_subset: &[S]) -> Result<Self> {
        if y_subset.is_empty() {
            return Err(GaloisError::Validation("restriction to an empty set of y".into()));
        }
        let mut keep = Vec::with_capacity(y_subset.len());
        for l in y_subset {
            let j = self.y_index(l.as_ref())?;
            if !keep.contains(&j) {
                keep.push(j);
            }
        }
        keep.sort_unstable();
        let y_labels: Vec<String> = keep.iter().map(|&j| self.y_labels[j].clone()).collect();
        let ny = self.ny();
        let pick = |v: &[ScalarConnection]| -> Vec<ScalarConnection> {
            (0..self.nx()).flat_map(|i| keep.iter().map(move |&j| v[i * ny + j].clone())).collect()
        };
        let body = match &self.body {
            Body::Table { forward, adjoint } => Body::Table { forward: pick(forward), adjoint: pick(adjoint) },
            Body::Moreau { bbar } => Body::Moreau {
                bbar: (0..self.nx()).flat_map(|i| keep.iter().map(move |&j| bbar[i * ny + j])).collect(),
            },
            Body::Grid(g) => {
                let dy = g.y_grid.dim();
                let coupling = g.coupling.as_ref().map(|c| {
                    (0..self.nx()).flat_map(|i| keep.iter().map(move |&j| c[i * ny + j])).collect()
                });
                Body::Grid(Box::new(GridBody {
                    family: g.family,
                    x_grid: g.x_grid.clone(),
                    y_grid: g.y_grid.clone(),
                    x_pts: g.x_pts.clone(),
                    y_pts: keep.iter().flat_map(|&j| g.y_pts[j * dy..(j + 1) * dy].iter().copied()).collect(),
                    y_index: keep.iter().map(|&j| g.y_index[j]).collect(),
                    penalty: keep.iter().map(|&j| g.penalty[j]).collect(),
                    coupling,
                }))
            }
        };
        // A2 cannot fail on a subset of valid columns; A1 can.
        Self::assemble(self.x_labels.clone(), y_labels, body)
    }

    pub fn nx(&self) -> usize {
        self.x_labels.len()
    }

    pub fn ny(&self) -> usize {
        self.y_labels.len()
    }

    pub fn x_labels(&self) -> &[String] {
        &self.x_labels
    }

    pub fn y_labels(&self) -> &[String] {
        &self.y_labels
    }

    pub fn x_index(&self, label: &str) -> Result<usize> {
        self.x_lookup
            .get(label)
            .copied()
            .ok_or_else(|| GaloisError::LabelMismatch(format!("unknown x label {label:?}")))
    }

    pub fn y_index(&self, label: &str) -> Result<usize> {
        self.y_lookup
            .get(label)
            .copied()
            .ok_or_else(|| GaloisError::LabelMismatch(format!("unknown y label {label:?}")))
    }

    /// Whether the kernel discretizes a continuous space.
    pub fn is_grid(&self) -> bool {
        matches!(self.body, Body::Grid(_))
    }

    /// For grid kernels: the generating family and the (x, y) grids.
    pub fn grid_parts(&self) -> Option<(GridFamily, &GridSpec, &GridSpec)> {
        match &self.body {
            Body::Grid(g) => Some((g.family, &g.x_grid, &g.y_grid)),
            _ => None,
        }
    }

    /// Coordinates of y point `j` of a grid kernel.
    pub fn y_coords(&self, j: usize) -> Option<&[f64]> {
        match &self.body {
            Body::Grid(g) => {
                let d = g.y_grid.dim();
                Some(&g.y_pts[j * d..(j + 1) * d])
            }
            _ => None,
        }
    }

    /// Coordinates of x point `i` of a grid kernel.
    pub fn x_coords(&self, i: usize) -> Option<&[f64]> {
        match &self.body {
            Body::Grid(g) => {
                let d = g.x_grid.dim();
                Some(&g.x_pts[i * d..(i + 1) * d])
            }
            _ => None,
        }
    }

    /// (x, y) ∈ S
    #[inline]
    pub fn in_support(&self, x: usize, y: usize) -> bool {
        match &self.body {
            Body::Table { forward, .. } => !forward[x * self.ny() + y].is_off(),
            Body::Moreau { bbar } => !bbar[x * self.ny() + y].is_neg_inf(),
            Body::Grid(_) => true,
        }
    }

    /// b(x, y, λ)
    #[inline]
    pub fn eval(&self, x: usize, y: usize, lambda: ExtReal) -> ExtReal {
        match &self.body {
            Body::Table { forward, .. } => forward[x * self.ny() + y].eval(lambda),
            Body::Moreau { bbar } => moreau_term(bbar[x * self.ny() + y], lambda),
            Body::Grid(g) => g.term(x, y, lambda),
        }
    }

    /// b°(y, x, t)
    #[inline]
    pub fn eval_adjoint(&self, y: usize, x: usize, t: ExtReal) -> ExtReal {
        match &self.body {
            Body::Table { adjoint, .. } => adjoint[x * self.ny() + y].eval(t),
            Body::Moreau { bbar } => moreau_term(bbar[x * self.ny() + y], t),
            Body::Grid(g) => g.term(x, y, t),
        }
    }

    /// The slice b(x, y, ·) as a scalar form.
    pub fn entry(&self, x: usize, y: usize) -> ScalarConnection {
        match &self.body {
            Body::Table { forward, .. } => forward[x * self.ny() + y].clone(),
            Body::Moreau { bbar } => moreau_form(bbar[x * self.ny() + y]),
            Body::Grid(g) => moreau_form(ExtReal::from_non_nan(g.coupling_at(x, y) - g.penalty[y])),
        }
    }

    /// The slice b°(y, x, ·) as a scalar form.
    pub fn adjoint_entry(&self, y: usize, x: usize) -> ScalarConnection {
        match &self.body {
            Body::Table { adjoint, .. } => adjoint[x * self.ny() + y].clone(),
            _ => self.entry(x, y),
        }
    }

    /// S^y
    pub fn support_of_y(&self, y: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.nx()).filter(move |&x| self.in_support(x, y))
    }

    /// S_x
    pub fn support_of_x(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.ny()).filter(move |&y| self.in_support(x, y))
    }
}

fn moreau_form(bbar: ExtReal) -> ScalarConnection {
    match bbar.kind() {
        Kind::Finite(c) => ScalarConnection::Affine { c, m: 1.0 },
        _ => ScalarConnection::Off,
    }
}

fn check_shape<T>(x_labels: &[String], y_labels: &[String], rows: &[Vec<T>]) -> Result<()> {
    if rows.len() != x_labels.len() {
        return Err(GaloisError::Validation(format!(
            "kernel has {} rows for {} x labels",
            rows.len(),
            x_labels.len()
        )));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != y_labels.len()) {
        return Err(GaloisError::Validation(format!(
            "kernel row {} has {} entries for {} y labels",
            x_labels[i],
            r.len(),
            y_labels.len()
        )));
    }
    Ok(())
}

/// Labels `prefix1, prefix2, …`.
pub fn numbered_labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("{prefix}{k}")).collect()
}
