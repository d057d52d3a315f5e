//! Grid experiments for the continuous conjugacies: Legendre-Fenchel
//! self-duality, the quadratic-kernel reduction, the ω-Lipschitz fixed point,
//! the domain of the weighted-power kernel, and a projector example with
//! b̄(x, y) = −|x − y|.
//!
//! Each experiment returns a [`LabResult`] made of named checks. A check
//! passes when its error is at most its tolerance; a result passes when every
//! check does. The headline error and tolerance are those of the first check.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::engine::{apply_b, apply_bstar, subdiff_inverse_with, FunctionOnSpace, Side};
use crate::error::{GaloisError, Result};
use crate::extreal::{ExtReal, DEFAULT_EPS};
use crate::grid::{Axis, GridSpec};
use crate::kernel::{GridFamily, Kernel, OmegaSpec};
use crate::solver::{solve, Problem, Status};

/// Samples of a function on every point of a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    grid: GridSpec,
    samples: Vec<ExtReal>,
}

impl GridFunction {
    pub fn new(grid: GridSpec, samples: Vec<ExtReal>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(GaloisError::Validation(format!(
                "grid has {} points but {} samples were given",
                grid.len(),
                samples.len()
            )));
        }
        Ok(Self { grid, samples })
    }

    pub fn from_fn(grid: &GridSpec, f: impl Fn(&[f64]) -> ExtReal) -> Self {
        let samples = (0..grid.len()).map(|k| f(&grid.point(k))).collect();
        Self { grid: grid.clone(), samples }
    }

    /// Samples a real-valued function; panics if it returns NaN or ±∞.
    pub fn from_real(grid: &GridSpec, f: impl Fn(&[f64]) -> f64) -> Self {
        Self::from_fn(grid, |p| ExtReal::finite(f(p)))
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn samples(&self) -> &[ExtReal] {
        &self.samples
    }

    pub fn get(&self, k: usize) -> ExtReal {
        self.samples[k]
    }

    fn on(&self, kernel: &Kernel, side: Side) -> Result<FunctionOnSpace> {
        FunctionOnSpace::new(kernel, side, self.samples.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldValue {
    Flag(bool),
    Number(ExtReal),
    Text(String),
}

impl From<bool> for FieldValue {
    fn from(v: bool) -> Self {
        Self::Flag(v)
    }
}

impl From<f64> for FieldValue {
    fn from(v: f64) -> Self {
        Self::Number(ExtReal::new(v).expect("lab fields are never NaN"))
    }
}

impl From<usize> for FieldValue {
    fn from(v: usize) -> Self {
        Self::from(v as f64)
    }
}

impl From<&str> for FieldValue {
    fn from(v: &str) -> Self {
        Self::Text(v.to_owned())
    }
}

/// One pass/fail criterion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    #[serde(with = "ext_f64")]
    pub max_abs_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: &str, max_abs_error: f64, tolerance: f64) -> Self {
        Self { name: name.to_owned(), max_abs_error, tolerance, pass: max_abs_error <= tolerance }
    }
}

/// Sampled columns kept for CSV export.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabResult {
    pub name: String,
    pub fields: BTreeMap<String, FieldValue>,
    pub checks: Vec<Check>,
    #[serde(with = "ext_f64")]
    pub max_abs_error: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip)]
    pub series: Vec<Series>,
}

impl LabResult {
    fn new(name: &str, checks: Vec<Check>) -> Self {
        let head = checks.first().cloned().unwrap_or_else(|| Check::new("empty", 0.0, 0.0));
        Self {
            name: name.to_owned(),
            fields: BTreeMap::new(),
            pass: checks.iter().all(|c| c.pass),
            checks,
            max_abs_error: head.max_abs_error,
            tolerance: head.tolerance,
            series: Vec::new(),
        }
    }

    fn field(mut self, key: &str, value: impl Into<FieldValue>) -> Self {
        self.fields.insert(key.to_owned(), value.into());
        self
    }

    fn series(mut self, name: &str, columns: &[&str], rows: Vec<Vec<f64>>) -> Self {
        self.series.push(Series { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows });
        self
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// f64 fields that may hold +∞, written like [`ExtReal`].
mod ext_f64 {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::extreal::ExtReal;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        ExtReal::new(*v).map_err(serde::ser::Error::custom)?.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(ExtReal::deserialize(d)?.to_f64())
    }
}

/// |a − b| with equal infinities at distance 0 and mismatched tags at +∞.
fn ext_diff(a: ExtReal, b: ExtReal) -> f64 {
    match (a.finite_value(), b.finite_value()) {
        (Some(u), Some(v)) => (u - v).abs(),
        _ if a == b => 0.0,
        _ => f64::INFINITY,
    }
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn grid_x(kernel: &Kernel, i: usize) -> f64 {
    kernel.x_coords(i).expect("grid kernel")[0]
}

/// f⋆(x) = max over grid y of ⟨x, y⟩ − f(y).
pub fn fenchel_conjugate(f: &GridFunction, x_grid: &GridSpec) -> Result<GridFunction> {
    let kernel = Kernel::grid(GridFamily::FenchelDot, x_grid, f.grid())?;
    let g = apply_b(&kernel, &f.on(&kernel, Side::Y)?)?;
    GridFunction::new(x_grid.clone(), g.into_values())
}

/// Index of the maximizing y for each x; `None` when the maximum is not finite.
fn argmax_rows(kernel: &Kernel, f: &FunctionOnSpace) -> Vec<Option<usize>> {
    use rayon::prelude::*;
    (0..kernel.nx())
        .into_par_iter()
        .map(|x| {
            let mut best: Option<(usize, ExtReal)> = None;
            for y in 0..kernel.ny() {
                let v = kernel.eval(x, y, f.get(y));
                if best.is_none_or(|(_, b)| v > b) {
                    best = Some((y, v));
                }
            }
            best.filter(|(_, v)| v.is_finite()).map(|(y, _)| y)
        })
        .collect()
}

/// Legendre-Fenchel self-duality of y²/2 on y ∈ [−4, 4], x ∈ [−2, 2], step 0.01.
pub fn fenchel_experiment() -> Result<LabResult> {
    let y_grid = GridSpec::line(-4.0, 4.0, 0.01)?;
    let x_grid = GridSpec::line(-2.0, 2.0, 0.01)?;
    let f = GridFunction::from_real(&y_grid, |y| y[0] * y[0] / 2.0);
    fenchel_report(&f, &x_grid, |x| x * x / 2.0, 1e-3)
}

/// Compares `f⋆` with `closed_form` on the x grid and checks the grid identities.
///
/// Points whose maximizer sits on the boundary of the y grid are excluded
/// from the comparison and counted in `boundary_excluded`.
pub fn fenchel_report(f: &GridFunction, x_grid: &GridSpec, closed_form: impl Fn(f64) -> f64, tol: f64) -> Result<LabResult> {
    let kernel = Kernel::grid(GridFamily::FenchelDot, x_grid, f.grid())?;
    let fy = f.on(&kernel, Side::Y)?;
    let conj = apply_b(&kernel, &fy)?;
    let arg = argmax_rows(&kernel, &fy);
    let ny = kernel.ny();
    let interior = |x: usize| matches!(arg[x], Some(j) if j > 0 && j + 1 < ny);

    let nx = kernel.nx();
    let mut rows = Vec::with_capacity(nx);
    let mut err: f64 = 0.0;
    let mut excluded = 0usize;
    for x in 0..nx {
        let xv = grid_x(&kernel, x);
        let exact = closed_form(xv);
        if interior(x) {
            err = err.max(ext_diff(conj.get(x), ExtReal::finite(exact)));
        } else {
            excluded += 1;
        }
        rows.push(vec![xv, conj.get(x).to_f64(), exact]);
    }

    // f⋆(x) ≥ b̄(x, y) − f(y) for every grid pair, with the same arithmetic as the transform
    let young = (0..nx)
        .filter(|&x| (0..ny).any(|y| kernel.eval(x, y, fy.get(y)) > conj.get(x)))
        .count();

    let step = x_grid.axes()[0].step;
    let values: Vec<f64> = conj.values().iter().map(|v| v.to_f64()).collect();
    let finite = values.iter().all(|v| v.is_finite());
    let (mut convexity, mut slope_excess) = (0.0f64, 0.0f64);
    if finite && x_grid.dim() == 1 {
        let y_max = max_of((0..ny).map(|y| kernel.y_coords(y).unwrap()[0].abs()));
        for w in values.windows(3) {
            convexity = convexity.max(-(w[0] - 2.0 * w[1] + w[2]));
        }
        for w in values.windows(2) {
            slope_excess = slope_excess.max((w[1] - w[0]).abs() / step - y_max);
        }
    }

    // biconjugate on the y grid, using the x grid as the dual sample
    let back = Kernel::grid(GridFamily::FenchelDot, f.grid(), x_grid)?;
    let bi = apply_b(&back, &FunctionOnSpace::new(&back, Side::Y, conj.values().to_vec())?)?;
    let x_hi = max_of((0..nx).map(|x| grid_x(&kernel, x).abs()));
    let mut above = 0.0f64;
    let mut convex_gap = 0.0f64;
    for y in 0..ny {
        let (b, fv) = (bi.get(y), fy.get(y));
        if let (Some(b), Some(fv)) = (b.finite_value(), fv.finite_value()) {
            above = above.max(b - fv);
            if kernel.y_coords(y).unwrap()[0].abs() <= x_hi {
                convex_gap = convex_gap.max((b - fv).abs());
            }
        }
    }

    let checks = vec![
        Check::new("closed_form", err, tol),
        Check::new("fenchel_young_violations", young as f64, 0.0),
        Check::new("convexity_defect", convexity, 1e-9),
        Check::new("lipschitz_excess", slope_excess, 1e-6),
        Check::new("biconjugate_above_f", above, 1e-9),
        Check::new("biconjugate_gap_on_slopes_in_x_range", convex_gap, 2.0 * step * x_hi),
    ];
    Ok(LabResult::new("fenchel", checks)
        .field("x_points", nx)
        .field("y_points", ny)
        .field("boundary_excluded", excluded)
        .series("conjugate", &["x", "f_star", "closed_form"], rows))
}

/// Computes `B_a f` with the quadratic kernel and as `(f + (a/2)‖·‖²)⋆`.
///
/// Both evaluate the same finite maxima term by term, so the error is 0.
pub fn quadratic_reduction_check(f: &GridFunction, a: f64, x_grid: &GridSpec) -> Result<LabResult> {
    let family = GridFamily::Quadratic { a };
    let kernel = Kernel::grid(family, x_grid, f.grid())?;
    let direct = apply_b(&kernel, &f.on(&kernel, Side::Y)?)?;
    let shifted = GridFunction::new(
        f.grid().clone(),
        (0..f.grid().len())
            .map(|k| f.get(k).add_hi(ExtReal::finite(family.penalty(&f.grid().point(k)))))
            .collect(),
    )?;
    let via = fenchel_conjugate(&shifted, x_grid)?;
    let err = max_of((0..direct.len()).map(|x| ext_diff(direct.get(x), via.get(x))));
    let rows =
        (0..direct.len()).map(|x| vec![grid_x(&kernel, x), direct.get(x).to_f64(), via.get(x).to_f64()]).collect();
    Ok(LabResult::new("quadratic", vec![Check::new("reduction", err, 0.0)])
        .field("a", a)
        .series("reduction", &["x", "direct", "via_conjugate"], rows))
}

/// `B_a` applied to y⁴ on [−2, 2] with step 0.01.
pub fn quadratic_experiment(a: f64) -> Result<LabResult> {
    let grid = GridSpec::line(-2.0, 2.0, 0.01)?;
    let f = GridFunction::from_real(&grid, |y| y[0].powi(4));
    quadratic_reduction_check(&f, a, &grid)
}

/// Checks `B_ω° g = −g` and `B_ω B_ω° g = g` for ω-Lipschitz `g`, and reports
/// the solver verdict for `B_ω f = g`.
pub fn lipschitz_fixed_point(g: &GridFunction, omega: OmegaSpec) -> Result<LabResult> {
    omega.validate()?;
    let grid = g.grid();
    let vals: Vec<f64> = g
        .samples()
        .iter()
        .map(|v| v.finite_value().ok_or_else(|| GaloisError::Validation("g must be finite on the grid".into())))
        .collect::<Result<_>>()?;
    let pts: Vec<Vec<f64>> = (0..grid.len()).map(|k| grid.point(k)).collect();
    let norm = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    let mut strict = true;
    for u in 0..pts.len() {
        for v in u + 1..pts.len() {
            let gap = (vals[u] - vals[v]).abs();
            let bound = omega.of_norm(norm(&pts[u], &pts[v]));
            if gap > bound {
                return Err(GaloisError::NotLipschitz { u: pts[u][0], v: pts[v][0], gap, bound });
            }
            strict &= gap < bound;
        }
    }
    let subadditive = omega.subadditivity_violation(grid).is_none();

    let kernel = Kernel::grid(GridFamily::OmegaLipschitz { omega }, grid, grid)?;
    let gx = g.on(&kernel, Side::X)?;
    let bstar = apply_bstar(&kernel, &gx)?;
    let fixed_err = max_of((0..vals.len()).map(|k| ext_diff(bstar.get(k), ExtReal::finite(-vals[k]))));
    let back = apply_b(&kernel, &bstar)?;
    let proj_err = max_of((0..vals.len()).map(|k| ext_diff(back.get(k), gx.get(k))));
    let sol = solve(&Problem::new(kernel.clone(), gx)?)?;
    let verdict = match sol.status {
        Status::NoSolution => "NoSolution",
        Status::Unique => "Unique",
        Status::Multiple => "Multiple",
    };
    let strict_mismatch = if strict && sol.status != Status::Unique { 1.0 } else { 0.0 };
    let rows = (0..vals.len()).map(|k| vec![pts[k][0], vals[k], bstar.get(k).to_f64(), back.get(k).to_f64()]).collect();
    Ok(LabResult::new("lipschitz", vec![
        Check::new("bstar_equals_minus_g", fixed_err, 0.0),
        Check::new("projector_equals_g", proj_err, 0.0),
        Check::new("strict_implies_unique", strict_mismatch, 0.0),
    ])
    .field("strictly_lipschitz", strict)
    .field("omega_subadditive_on_grid", subadditive)
    .field("solver_status", verdict)
    .series("fixed_point", &["x", "g", "bstar_g", "projected"], rows))
}

/// Lipschitz targets on [−5, 5] with step 0.01.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LipschitzTarget {
    /// |x|/2
    AbsHalf,
    /// sin(x)/2
    SinHalf,
}

pub fn lipschitz_experiment(target: LipschitzTarget) -> Result<LabResult> {
    let grid = GridSpec::line(-5.0, 5.0, 0.01)?;
    let g = match target {
        LipschitzTarget::AbsHalf => GridFunction::from_real(&grid, |x| x[0].abs() / 2.0),
        LipschitzTarget::SinHalf => GridFunction::from_real(&grid, |x| x[0].sin() / 2.0),
    };
    let name = match target {
        LipschitzTarget::AbsHalf => "abs_half",
        LipschitzTarget::SinHalf => "sin_half",
    };
    Ok(lipschitz_fixed_point(&g, OmegaSpec::abs())?.field("g", name))
}

/// Steps over which a boundary maximizer must keep increasing to count as divergence.
const DIVERGENCE_STEPS: usize = 5;

/// Whether `v` keeps strictly increasing over the last steps towards index `end`.
fn increasing_towards(v: &[ExtReal], end: usize) -> bool {
    let n = v.len();
    if n <= DIVERGENCE_STEPS {
        return false;
    }
    (0..DIVERGENCE_STEPS).all(|k| {
        let (near, far) = if end == 0 { (v[k], v[k + 1]) } else { (v[n - 1 - k], v[n - 2 - k]) };
        match (near.finite_value(), far.finite_value()) {
            (Some(a), Some(b)) => a > b + DEFAULT_EPS * (1.0 + b.abs()),
            _ => near > far,
        }
    })
}

/// Finite slices of `Bf` for `b(x, y, λ) = −x″‖y − x′‖^p − λ` on a grid
/// whose last x axis is x″.
///
/// A slice {x″ = c} is certified finite when `Bf` is finite on it and no
/// point of it has its maximizer on the y boundary with the integrand still
/// increasing there. `threshold` is the smallest certified level; the
/// certified levels must form an up-set. With `expected_threshold`, the
/// threshold must match it within one x″ step.
pub fn weighted_power_domain(
    f: &GridFunction,
    p: f64,
    x_grid: &GridSpec,
    expected_threshold: Option<f64>,
) -> Result<LabResult> {
    let kernel = Kernel::grid(GridFamily::WeightedPower { p }, x_grid, f.grid())?;
    let fy = f.on(&kernel, Side::Y)?;
    let bf = apply_b(&kernel, &fy)?;
    let weight: Axis = *x_grid.axes().last().expect("weighted grid has axes");
    let levels = weight.values();
    let per_level = kernel.nx() / levels.len();
    let ny = kernel.ny();

    let mut on_grid = vec![true; levels.len()];
    let mut certified = vec![true; levels.len()];
    for x in 0..kernel.nx() {
        let level = x % levels.len();
        if !bf.get(x).is_finite() {
            on_grid[level] = false;
            certified[level] = false;
            continue;
        }
        let v: Vec<ExtReal> = (0..ny).map(|y| kernel.eval(x, y, fy.get(y))).collect();
        let at_edge = |end: usize| v[end] == bf.get(x) && increasing_towards(&v, end);
        if at_edge(0) || at_edge(ny - 1) {
            certified[level] = false;
        }
    }
    let threshold = certified.iter().position(|&c| c).map(|k| levels[k]);
    let upset_violations = match certified.iter().position(|&c| c) {
        Some(k) => certified[k..].iter().filter(|&&c| !c).count(),
        None => 0,
    };

    let mut checks = vec![Check::new("finite_region_is_upset", upset_violations as f64, 0.0)];
    if let Some(a) = expected_threshold {
        let err = threshold.map_or(f64::INFINITY, |t| (t - a).abs());
        checks.insert(0, Check::new("threshold", err, weight.step));
    }
    let rows = levels
        .iter()
        .enumerate()
        .map(|(k, &l)| vec![l, f64::from(u8::from(on_grid[k])), f64::from(u8::from(certified[k]))])
        .collect();
    let mut result = LabResult::new("weighted-power", checks)
        .field("p", p)
        .field("points_per_level", per_level)
        .series("levels", &["x2", "finite_on_grid", "certified_finite"], rows);
    result = match threshold {
        Some(t) => result.field("threshold", t),
        None => result.field("threshold", "none"),
    };
    if let Some(a) = expected_threshold {
        result = result.field("expected_threshold", a);
    }
    Ok(result)
}

/// f(y) = −2|y|, p = 1, y ∈ [−50, 50] step 0.1, x′ ∈ [−5, 5] step 0.5,
/// x″ ∈ {0.5, 1, …, 4}. `Bf` diverges exactly for x″ < 2.
pub fn weighted_power_experiment() -> Result<LabResult> {
    let y_grid = GridSpec::line(-50.0, 50.0, 0.1)?;
    let x_grid = GridSpec::new(vec![Axis { min: -5.0, max: 5.0, step: 0.5 }, Axis { min: 0.5, max: 4.0, step: 0.5 }])?;
    let f = GridFunction::from_real(&y_grid, |y| -2.0 * y[0].abs());
    weighted_power_domain(&f, 1.0, &x_grid, Some(2.0))
}

/// The piecewise target of the projector example.
pub fn exgeom_g(x: f64) -> f64 {
    if x <= 0.0 {
        x * x / 2.0
    } else if x <= 1.0 {
        x
    } else if x < 3.0 {
        1.0
    } else {
        x / 3.0 - 1.0
    }
}

/// `Pg` on the region containing `x`, or `None` at a breakpoint margin.
pub fn exgeom_projection(x: f64, step: f64) -> Option<f64> {
    if x <= -1.0 {
        Some(-x - 0.5)
    } else if x <= 2.0 || x >= 3.0 {
        Some(exgeom_g(x))
    } else if x > 2.0 + step && x < 3.0 - step {
        Some(3.0 - x)
    } else {
        None
    }
}

/// b̄(x, y) = −|x − y| on [−6, 8] with step 10⁻³ and the piecewise g above.
pub fn exgeom_experiment() -> Result<LabResult> {
    let step = 1e-3;
    let grid = GridSpec::line(-6.0, 8.0, step)?;
    // snap coordinates to the grid's decimals so breakpoints land on their branch
    let snap = |x: f64| (x / step).round() * step;
    let g = GridFunction::from_real(&grid, |p| exgeom_g(snap(p[0])));
    exgeom_report(&g, step)
}

fn exgeom_report(g: &GridFunction, step: f64) -> Result<LabResult> {
    let grid = g.grid();
    let kernel = Kernel::grid(GridFamily::OmegaLipschitz { omega: OmegaSpec::abs() }, grid, grid)?;
    let gx = g.on(&kernel, Side::X)?;
    let bstar = apply_bstar(&kernel, &gx)?;
    let pg = apply_b(&kernel, &bstar)?;
    let xs: Vec<f64> = (0..kernel.nx()).map(|i| (grid_x(&kernel, i) / step).round() * step).collect();

    let mut formula_err: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        if let Some(expect) = exgeom_projection(x, step) {
            formula_err = formula_err.max(ext_diff(pg.get(i), ExtReal::finite(expect)));
        }
    }

    let inv = subdiff_inverse_with(&kernel, &gx, &bstar, DEFAULT_EPS);
    let sub = inv.inverse(kernel.nx());
    let dom_mismatch = (0..kernel.nx())
        .filter(|&i| sub.get(i).is_empty() == pg.get(i).approx_eq(gx.get(i), DEFAULT_EPS))
        .count();

    // ∂°g at one x, with a chosen tie tolerance
    let subdiff_at = |x: f64, eps: f64| -> Vec<usize> {
        let i = grid.nearest(&[x]);
        (0..kernel.ny()).filter(|&y| kernel.eval_adjoint(y, i, gx.get(i)).approx_eq(bstar.get(y), eps)).collect()
    };
    let missing = |x: f64, lo: f64, hi: f64| -> usize {
        let set = subdiff_at(x, 2e-3);
        (grid.nearest(&[lo])..=grid.nearest(&[hi])).filter(|j| set.binary_search(j).is_err()).count()
    };
    let spot_missing = missing(0.5, 0.5, 1.0) + missing(3.0, 2.0, 3.0);
    let at4 = subdiff_at(4.0, DEFAULT_EPS);
    let i4 = grid.nearest(&[4.0]);
    let at4_spread = if at4.contains(&i4) {
        max_of(at4.iter().map(|&j| (j as f64 - i4 as f64).abs()))
    } else {
        f64::INFINITY
    };

    let rows = (0..kernel.nx()).map(|i| vec![xs[i], gx.get(i).to_f64(), pg.get(i).to_f64()]).collect();
    let pg_at = |x: f64| pg.get(grid.nearest(&[x])).to_f64();
    Ok(LabResult::new("exgeom", vec![
        Check::new("projector_formulas", formula_err, 2e-3),
        Check::new("dom_subdiff_vs_fixed_points", dom_mismatch as f64, 0.0),
        Check::new("spot_subdiff_missing_points", spot_missing as f64, 0.0),
        Check::new("subdiff_at_4_spread_in_steps", at4_spread, 3.0),
    ])
    .field("grid_points", kernel.nx())
    .field("pg_at_minus_3", pg_at(-3.0))
    .field("pg_at_2_5", pg_at(2.5))
    .field("subdiff_at_4_size", at4.len())
    .series("projector", &["x", "g", "pg"], rows))
}

/// Names accepted by [`run_experiment`].
pub const EXPERIMENTS: [&str; 5] = ["fenchel", "quadratic", "lipschitz", "weighted-power", "exgeom"];

/// Options for [`run_experiment`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LabOptions {
    pub a: f64,
    pub lipschitz: LipschitzTarget,
}

impl Default for LabOptions {
    fn default() -> Self {
        Self { a: 1.0, lipschitz: LipschitzTarget::AbsHalf }
    }
}

pub fn run_experiment(name: &str, opts: &LabOptions) -> Result<LabResult> {
    match name {
        "fenchel" => fenchel_experiment(),
        "quadratic" => quadratic_experiment(opts.a),
        "lipschitz" => lipschitz_experiment(opts.lipschitz),
        "weighted-power" => weighted_power_experiment(),
        "exgeom" => exgeom_experiment(),
        other => Err(GaloisError::Validation(format!(
            "unknown experiment {other:?}; expected one of {}",
            EXPERIMENTS.join(", ")
        ))),
    }
}
