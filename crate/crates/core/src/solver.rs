//! Existence and uniqueness for `Bf = g` on finite Y.
//!
//! With `f_min = B°g`, the problem on X′ ⊆ X has a solution exactly when the
//! sets `(∂°g)⁻¹(y)`, y ∈ ldom(B°g), cover X′ ∩ udom(g). The solution is
//! unique exactly when that covering is minimal. Every solution f satisfies
//! `f ≥ f_min`, and f solves iff its active set
//! `{y : f(y) = f_min(y)} ∩ ldom(f_min)` still covers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::covering::{check_cover, irredundant_subcover, CoverFamily, CoverReport};
use crate::engine::{apply_b, apply_bstar, domain_report, subdiff_inverse_with, FunctionOnSpace, Side, SubdiffMap};
use crate::error::{GaloisError, Result};
use crate::extreal::{ExtReal, DEFAULT_EPS};
use crate::kernel::Kernel;

/// Largest index pool for which [`solution_structure`] lists admissible active sets.
pub const ACTIVE_SET_LIMIT: usize = 16;

#[derive(Clone, Debug)]
pub struct Problem {
    kernel: Kernel,
    g: FunctionOnSpace,
    x_restrict: Option<Vec<usize>>,
    eps: f64,
}

impl Problem {
    pub fn new(kernel: Kernel, g: FunctionOnSpace) -> Result<Self> {
        if g.side() != Side::X || g.len() != kernel.nx() {
            return Err(GaloisError::LabelMismatch(format!(
                "g must be a function on X with {} values",
                kernel.nx()
            )));
        }
        Ok(Self { kernel, g, x_restrict: None, eps: DEFAULT_EPS })
    }

    /// Restricts the equality `Bf(x) = g(x)` to the named points.
    pub fn with_x_restrict<S: AsRef<str>>(mut self, labels: &[S]) -> Result<Self> {
        let mut idx = labels.iter().map(|l| self.kernel.x_index(l.as_ref())).collect::<Result<Vec<_>>>()?;
        idx.sort_unstable();
        idx.dedup();
        self.x_restrict = Some(idx);
        Ok(self)
    }

    pub fn with_tolerance(mut self, eps: f64) -> Result<Self> {
        if !(eps.is_finite() && eps >= 0.0) {
            return Err(GaloisError::Validation(format!("tolerance must be finite and nonnegative, got {eps}")));
        }
        self.eps = eps;
        Ok(self)
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn g(&self) -> &FunctionOnSpace {
        &self.g
    }

    pub fn tolerance(&self) -> f64 {
        self.eps
    }

    /// X′, or all of X.
    pub fn x_prime(&self) -> Vec<usize> {
        self.x_restrict.clone().unwrap_or_else(|| (0..self.kernel.nx()).collect())
    }

    pub fn is_restricted(&self) -> bool {
        self.x_restrict.is_some()
    }

    /// X′ ∩ udom(g), the points a covering must reach.
    pub fn universe(&self) -> Vec<usize> {
        self.x_prime().into_iter().filter(|&x| !self.g.get(x).is_neg_inf()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    NoSolution,
    Unique,
    Multiple,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Caveat {
    /// The kernel samples a continuous problem; verdicts hold for the grid only.
    GridApproximation,
    /// X′ ∩ udom(g) is empty, so only `Bf ≤ g` constrains f.
    Degenerate,
}

/// `g(x)` next to `BB°g(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub g: ExtReal,
    pub projected: ExtReal,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub status: Status,
    /// `B°g`, the least solution whenever one exists.
    pub f_min: FunctionOnSpace,
    /// `(∂°g)⁻¹(y)` for every y.
    pub inverse_sets: SubdiffMap,
    /// ldom(B°g), in label order.
    pub index_pool: Vec<usize>,
    /// X′ ∩ udom(g).
    pub universe: Vec<usize>,
    pub cover: CoverReport,
    /// Greedy irredundant subcover, when the family covers.
    pub irredundant: Option<Vec<usize>>,
    /// A second solution, present exactly when `status` is `Multiple`.
    pub witness_alt: Option<FunctionOnSpace>,
    pub residual: Vec<Residual>,
    pub caveats: Vec<Caveat>,
}

impl Solution {
    pub fn family(&self) -> CoverFamily {
        cover_family(&self.universe, &self.index_pool, &self.inverse_sets)
    }
}

fn cover_family(universe: &[usize], pool: &[usize], inv: &SubdiffMap) -> CoverFamily {
    CoverFamily::new(universe.iter().copied(), pool.iter().map(|&y| (y, inv.get(y).iter().copied())))
}

pub fn solve(problem: &Problem) -> Result<Solution> {
    let kernel = &problem.kernel;
    let f_min = apply_bstar(kernel, &problem.g)?;
    let inverse_sets = subdiff_inverse_with(kernel, &problem.g, &f_min, problem.eps);
    let index_pool = domain_report(&f_min).ldom;
    let universe = problem.universe();
    let family = cover_family(&universe, &index_pool, &inverse_sets);
    let cover = check_cover(&family);
    let projected = apply_b(kernel, &f_min)?;
    let residual = (0..kernel.nx())
        .map(|x| Residual { g: problem.g.get(x), projected: projected.get(x) })
        .collect();

    let status = match (cover.is_cover, cover.is_minimal) {
        (false, _) => Status::NoSolution,
        (true, true) => Status::Unique,
        (true, false) => Status::Multiple,
    };
    let irredundant = if cover.is_cover { Some(irredundant_subcover(&family)?) } else { None };

    let mut witness_alt = None;
    if status == Status::Multiple {
        let keep = irredundant.as_deref().unwrap_or_default();
        let mut w = f_min.clone();
        for &y in index_pool.iter().filter(|y| !keep.contains(y)) {
            w.set(y, ExtReal::POS_INF);
        }
        if w == f_min || !verify(problem, &w)?.is_solution {
            return Err(GaloisError::Internal("constructed second solution failed verification".into()));
        }
        witness_alt = Some(w);
    }
    if status != Status::NoSolution && !verify(problem, &f_min)?.is_solution {
        return Err(GaloisError::Internal("B°g does not solve a problem whose family covers".into()));
    }

    let mut caveats = Vec::new();
    if kernel.is_grid() {
        caveats.push(Caveat::GridApproximation);
    }
    if universe.is_empty() {
        caveats.push(Caveat::Degenerate);
    }
    Ok(Solution { status, f_min, inverse_sets, index_pool, universe, cover, irredundant, witness_alt, residual, caveats })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub x: usize,
    pub g: ExtReal,
    pub bf: ExtReal,
    /// Whether equality is required at x (x ∈ X′).
    pub constrained: bool,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub rows: Vec<VerifyRow>,
    /// `Bf ≤ g` everywhere and `Bf = g` on X′, both within the tolerance.
    pub is_solution: bool,
}

pub fn verify(problem: &Problem, f: &FunctionOnSpace) -> Result<Verification> {
    let bf = apply_b(&problem.kernel, f)?;
    let x_prime = problem.x_prime();
    let eps = problem.eps;
    let rows: Vec<VerifyRow> = (0..problem.kernel.nx())
        .map(|x| {
            let (g, b) = (problem.g.get(x), bf.get(x));
            let constrained = x_prime.binary_search(&x).is_ok();
            let equal = b.approx_eq(g, eps);
            let ok = if constrained { equal } else { equal || b <= g };
            VerifyRow { x, g, bf: b, constrained, ok }
        })
        .collect();
    let is_solution = rows.iter().all(|r| r.ok);
    Ok(Verification { rows, is_solution })
}

/// The full solution set of a solvable problem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionStructure {
    /// Z_a: indices where every solution equals `B°g`.
    pub forced: Vec<usize>,
    /// Every active set F ⊆ ldom(B°g) whose family covers, when the pool is small enough.
    pub admissible_active_sets: Option<Vec<Vec<usize>>>,
    /// Inclusion-minimal admissible sets.
    pub minimal_active_sets: Option<Vec<Vec<usize>>>,
    /// X′ ∩ udom(g) is empty: every f with `Bf ≤ g` is a solution.
    pub degenerate: bool,
}

pub fn solution_structure(problem: &Problem) -> Result<SolutionStructure> {
    let sol = solve(problem)?;
    if sol.status == Status::NoSolution {
        return Err(GaloisError::NoSolution);
    }
    let family = sol.family();
    let pool = &sol.index_pool;
    let (admissible, minimal) = if pool.len() <= ACTIVE_SET_LIMIT {
        let mut admissible = Vec::new();
        for mask in 0u32..1 << pool.len() {
            let chosen: Vec<usize> = (0..pool.len()).filter(|&k| mask >> k & 1 == 1).map(|k| pool[k]).collect();
            if check_cover(&family.subfamily(&chosen)).is_cover {
                admissible.push(chosen);
            }
        }
        admissible.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let minimal = admissible
            .iter()
            .filter(|f| check_cover(&family.subfamily(f)).is_minimal)
            .cloned()
            .collect();
        (Some(admissible), Some(minimal))
    } else {
        (None, None)
    };
    Ok(SolutionStructure {
        forced: sol.cover.essential.clone(),
        admissible_active_sets: admissible,
        minimal_active_sets: minimal,
        degenerate: sol.universe.is_empty(),
    })
}

/// Cross-checks [`solve`] against first principles.
///
/// Existence is compared with `BB°g = g` on X′ ∩ udom(g). Uniqueness is
/// compared with a search for a second solution among single-coordinate
/// bumps of `B°g`: one `+∞` bump per y, then `trials` random bumps.
pub fn oracle_check(problem: &Problem, trials: usize, seed: u64) -> Result<bool> {
    let sol = solve(problem)?;
    let kernel = &problem.kernel;
    let f_min = apply_bstar(kernel, &problem.g)?;
    let pg = apply_b(kernel, &f_min)?;
    let eps = problem.eps;
    let fixed = problem.universe().iter().all(|&x| pg.get(x).approx_eq(problem.g.get(x), eps));
    let below = (0..kernel.nx()).all(|x| pg.get(x) <= problem.g.get(x) || pg.get(x).approx_eq(problem.g.get(x), eps));
    let exists = fixed && below;
    if exists != (sol.status != Status::NoSolution) {
        return Ok(false);
    }
    if !exists {
        return Ok(true);
    }

    let is_second = |y: usize, v: ExtReal| -> Result<bool> {
        let mut f = f_min.clone();
        f.set(y, v);
        Ok(verify(problem, &f)?.is_solution)
    };
    let mut found = false;
    for y in 0..kernel.ny() {
        if !f_min.get(y).is_pos_inf() && is_second(y, ExtReal::POS_INF)? {
            found = true;
            break;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        if found {
            break;
        }
        let y = rng.gen_range(0..kernel.ny());
        let base = f_min.get(y);
        let bumped = match base.finite_value() {
            _ if base.is_pos_inf() => continue,
            _ if rng.gen_bool(0.25) => ExtReal::POS_INF,
            Some(v) => ExtReal::finite(v + 10f64.powf(rng.gen_range(-3.0..1.0))),
            None => ExtReal::finite(rng.gen_range(-10.0..10.0)),
        };
        found = is_second(y, bumped)?;
    }
    Ok(found == (sol.status == Status::Multiple))
}
