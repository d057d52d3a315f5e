//! The transforms B and B°, the projector P = BB°, subdifferentials and
//! domains.
//!
//! For a kernel b with adjoint b°,
//!
//! ```text
//! Bf(x)  = sup_y b(x, y, f(y))
//! B°g(y) = sup_x b°(y, x, g(x))
//! ```
//!
//! and `(∂°g)⁻¹(y)` is the set of x ∈ S^y attaining the supremum defining
//! `B°g(y)`. Attainment is tested with an absolute tolerance: a candidate is
//! a maximizer when it has the same tag as the supremum and, if finite, lies
//! within `eps` of it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GaloisError, Result};
use crate::extreal::{sup, ExtReal};
use crate::kernel::Kernel;

/// Which index set a function lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    X,
    Y,
}

impl Side {
    pub fn len(self, kernel: &Kernel) -> usize {
        match self {
            Side::X => kernel.nx(),
            Side::Y => kernel.ny(),
        }
    }

    pub fn labels(self, kernel: &Kernel) -> &[String] {
        match self {
            Side::X => kernel.x_labels(),
            Side::Y => kernel.y_labels(),
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::X => Side::Y,
            Side::Y => Side::X,
        }
    }
}

/// A function X → ℝ̄ or Y → ℝ̄, stored in the kernel's label order.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionOnSpace {
    side: Side,
    values: Vec<ExtReal>,
}

impl FunctionOnSpace {
    pub fn new(kernel: &Kernel, side: Side, values: Vec<ExtReal>) -> Result<Self> {
        let n = side.len(kernel);
        if values.len() != n {
            return Err(GaloisError::LabelMismatch(format!(
                "{side:?} side has {n} points but {} values were given",
                values.len()
            )));
        }
        Ok(Self { side, values })
    }

    pub fn constant(kernel: &Kernel, side: Side, value: ExtReal) -> Self {
        Self { side, values: vec![value; side.len(kernel)] }
    }

    /// Builds a function from `(label, value)` pairs naming every label once.
    pub fn from_pairs<L, I>(kernel: &Kernel, side: Side, pairs: I) -> Result<Self>
    where
        L: AsRef<str>,
        I: IntoIterator<Item = (L, ExtReal)>,
    {
        let n = side.len(kernel);
        let mut values: Vec<Option<ExtReal>> = vec![None; n];
        for (label, v) in pairs {
            let label = label.as_ref();
            let k = match side {
                Side::X => kernel.x_index(label)?,
                Side::Y => kernel.y_index(label)?,
            };
            if values[k].replace(v).is_some() {
                return Err(GaloisError::LabelMismatch(format!("label {label:?} given twice")));
            }
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(k, v)| {
                v.ok_or_else(|| {
                    GaloisError::LabelMismatch(format!("no value for label {:?}", side.labels(kernel)[k]))
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self { side, values })
    }

    /// δ_y^s: `s` at y and `+∞` elsewhere.
    pub fn dirac(kernel: &Kernel, y: usize, s: ExtReal) -> Self {
        let mut f = Self::constant(kernel, Side::Y, ExtReal::POS_INF);
        f.values[y] = s;
        f
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn values(&self) -> &[ExtReal] {
        &self.values
    }

    pub fn into_values(self) -> Vec<ExtReal> {
        self.values
    }

    #[inline]
    pub fn get(&self, k: usize) -> ExtReal {
        self.values[k]
    }

    pub fn set(&mut self, k: usize, v: ExtReal) {
        self.values[k] = v;
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Pointwise minimum of two functions on the same side.
    pub fn min(&self, other: &Self) -> Self {
        self.zip_with(other, ExtReal::min)
    }

    /// Pointwise maximum of two functions on the same side.
    pub fn max(&self, other: &Self) -> Self {
        self.zip_with(other, ExtReal::max)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(ExtReal, ExtReal) -> ExtReal) -> Self {
        assert_eq!(self.side, other.side);
        Self { side: self.side, values: self.values.iter().zip(&other.values).map(|(&a, &b)| op(a, b)).collect() }
    }

    /// Pointwise `self ≤ other`.
    pub fn le(&self, other: &Self) -> bool {
        self.side == other.side && self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    /// Pointwise [`ExtReal::approx_eq`].
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.side == other.side
            && self.values.len() == other.values.len()
            && self.values.iter().zip(&other.values).all(|(a, b)| a.approx_eq(*b, tol))
    }

    /// `(label, value)` pairs in label order.
    pub fn labeled<'k>(&self, kernel: &'k Kernel) -> Vec<(&'k str, ExtReal)> {
        self.side.labels(kernel).iter().map(String::as_str).zip(self.values.iter().copied()).collect()
    }

    fn expect_side(&self, kernel: &Kernel, side: Side) -> Result<()> {
        if self.side != side || self.values.len() != side.len(kernel) {
            return Err(GaloisError::LabelMismatch(format!(
                "expected a function on {side:?} with {} values, got one on {:?} with {}",
                side.len(kernel),
                self.side,
                self.values.len()
            )));
        }
        Ok(())
    }
}

/// Bf(x) = sup_y b(x, y, f(y)).
pub fn apply_b(kernel: &Kernel, f: &FunctionOnSpace) -> Result<FunctionOnSpace> {
    f.expect_side(kernel, Side::Y)?;
    let fv = f.values();
    let values = (0..kernel.nx())
        .into_par_iter()
        .map(|x| sup((0..kernel.ny()).map(|y| kernel.eval(x, y, fv[y]))))
        .collect();
    Ok(FunctionOnSpace { side: Side::X, values })
}

/// B°g(y) = sup_x b°(y, x, g(x)).
pub fn apply_bstar(kernel: &Kernel, g: &FunctionOnSpace) -> Result<FunctionOnSpace> {
    g.expect_side(kernel, Side::X)?;
    let gv = g.values();
    let values = (0..kernel.ny())
        .into_par_iter()
        .map(|y| sup((0..kernel.nx()).map(|x| kernel.eval_adjoint(y, x, gv[x]))))
        .collect();
    Ok(FunctionOnSpace { side: Side::Y, values })
}

/// P g = B B° g, the largest element of the image of B below g.
pub fn projector(kernel: &Kernel, g: &FunctionOnSpace) -> Result<FunctionOnSpace> {
    apply_b(kernel, &apply_bstar(kernel, g)?)
}

/// A set-valued map from the points of `domain` to subsets of the opposite side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdiffMap {
    domain: Side,
    sets: Vec<Vec<usize>>,
}

impl SubdiffMap {
    pub fn new(domain: Side, sets: Vec<Vec<usize>>) -> Self {
        Self { domain, sets }
    }

    /// Side whose points index the map.
    pub fn domain_side(&self) -> Side {
        self.domain
    }

    pub fn get(&self, k: usize) -> &[usize] {
        &self.sets[k]
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Points with a nonempty image.
    pub fn domain(&self) -> Vec<usize> {
        (0..self.sets.len()).filter(|&k| !self.sets[k].is_empty()).collect()
    }

    /// F⁻¹(w) = { z : w ∈ F(z) }, over a target set of `target_len` points.
    pub fn inverse(&self, target_len: usize) -> SubdiffMap {
        let mut sets = vec![Vec::new(); target_len];
        for (z, image) in self.sets.iter().enumerate() {
            for &w in image {
                sets[w].push(z);
            }
        }
        SubdiffMap { domain: self.domain.opposite(), sets }
    }

    /// Images rendered with labels.
    pub fn labeled(&self, kernel: &Kernel) -> Vec<(String, Vec<String>)> {
        let (from, to) = (self.domain.labels(kernel), self.domain.opposite().labels(kernel));
        self.sets
            .iter()
            .enumerate()
            .map(|(k, s)| (from[k].clone(), s.iter().map(|&w| to[w].clone()).collect()))
            .collect()
    }
}

/// (∂°g)⁻¹(y) = argmax over x ∈ S^y of b°(y, x, g(x)), for every y.
pub fn subdiff_inverse(kernel: &Kernel, g: &FunctionOnSpace, eps: f64) -> Result<SubdiffMap> {
    let bstar = apply_bstar(kernel, g)?;
    Ok(subdiff_inverse_with(kernel, g, &bstar, eps))
}

/// As [`subdiff_inverse`], reusing an already computed `B°g`.
pub fn subdiff_inverse_with(kernel: &Kernel, g: &FunctionOnSpace, bstar_g: &FunctionOnSpace, eps: f64) -> SubdiffMap {
    let gv = g.values();
    let sets = (0..kernel.ny())
        .into_par_iter()
        .map(|y| {
            let top = bstar_g.get(y);
            kernel.support_of_y(y).filter(|&x| kernel.eval_adjoint(y, x, gv[x]).approx_eq(top, eps)).collect()
        })
        .collect();
    SubdiffMap { domain: Side::Y, sets }
}

/// ∂°g(x) = { y : (x, y) ∈ S, B°g(y) = b°(y, x, g(x)) }, for every x.
pub fn subdiff_adjoint(kernel: &Kernel, g: &FunctionOnSpace, eps: f64) -> Result<SubdiffMap> {
    Ok(subdiff_inverse(kernel, g, eps)?.inverse(kernel.nx()))
}

/// ∂f(y) = { x : (x, y) ∈ S, Bf(x) = b(x, y, f(y)) }, for every y.
pub fn subdiff(kernel: &Kernel, f: &FunctionOnSpace, eps: f64) -> Result<SubdiffMap> {
    let bf = apply_b(kernel, f)?;
    let fv = f.values();
    let sets = (0..kernel.ny())
        .into_par_iter()
        .map(|y| kernel.support_of_y(y).filter(|&x| kernel.eval(x, y, fv[y]).approx_eq(bf.get(x), eps)).collect())
        .collect();
    Ok(SubdiffMap { domain: Side::Y, sets })
}

/// ldom, udom, dom and idom of a function, as sorted index lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainReport {
    /// h < +∞
    pub ldom: Vec<usize>,
    /// h > −∞
    pub udom: Vec<usize>,
    pub dom: Vec<usize>,
    /// equal to `dom` on finite (discrete) spaces
    pub idom: Vec<usize>,
}

pub fn domain_report(h: &FunctionOnSpace) -> DomainReport {
    let pick = |pred: &dyn Fn(ExtReal) -> bool| -> Vec<usize> {
        (0..h.len()).filter(|&k| pred(h.get(k))).collect()
    };
    let ldom = pick(&|v| !v.is_pos_inf());
    let udom = pick(&|v| !v.is_neg_inf());
    let dom = pick(&|v| v.is_finite());
    DomainReport { ldom, udom, idom: dom.clone(), dom }
}

/// Coercivity of b and membership of B°g in F_c.
///
/// Both hold for every kernel this crate can build: Y is finite, hence
/// compact, and b is continuous in its second variable for the discrete
/// topology.
pub fn compactness_assumptions_hold(_kernel: &Kernel) -> bool {
    true
}
