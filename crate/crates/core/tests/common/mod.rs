//! Naive f64 oracles for Moreau kernels, written independently of the library.
#![allow(dead_code)]

use galois_core::{numbered_labels, ExtReal, FunctionOnSpace, Kernel, Side};
use rand::Rng;

pub const INF: f64 = f64::INFINITY;

/// b̄ − λ with b̄ = −∞ off the support, λ = +∞ giving −∞ and λ = −∞ giving +∞ on it.
pub fn term(bbar: f64, lambda: f64) -> f64 {
    if bbar == -INF || lambda == INF {
        -INF
    } else if lambda == -INF {
        INF
    } else {
        bbar - lambda
    }
}

/// Bf(x) = max_y b̄(x, y) − f(y)
pub fn naive_b(bbar: &[Vec<f64>], f: &[f64]) -> Vec<f64> {
    bbar.iter().map(|row| row.iter().zip(f).map(|(&b, &l)| term(b, l)).fold(-INF, f64::max)).collect()
}

/// B°g(y) = max_x b̄(x, y) − g(x)
pub fn naive_bstar(bbar: &[Vec<f64>], g: &[f64]) -> Vec<f64> {
    let ny = bbar[0].len();
    (0..ny).map(|y| bbar.iter().zip(g).map(|(row, &t)| term(row[y], t)).fold(-INF, f64::max)).collect()
}

pub fn value_in(rng: &mut impl Rng, with_infinities: bool) -> f64 {
    let k = rng.gen_range(0..if with_infinities { 9 } else { 7 });
    match k {
        7 => INF,
        8 => -INF,
        _ => f64::from(k - 3),
    }
}

/// Entries in {−3..3, −∞} with every row and column holding a finite entry.
pub fn random_bbar(rng: &mut impl Rng, max_n: usize) -> Vec<Vec<f64>> {
    let (nx, ny) = (rng.gen_range(1..=max_n), rng.gen_range(1..=max_n));
    loop {
        let m: Vec<Vec<f64>> = (0..nx)
            .map(|_| (0..ny).map(|_| if rng.gen_bool(0.3) { -INF } else { f64::from(rng.gen_range(-3..=3)) }).collect())
            .collect();
        let rows_ok = m.iter().all(|r| r.iter().any(|v| v.is_finite()));
        let cols_ok = (0..ny).all(|j| m.iter().any(|r| r[j].is_finite()));
        if rows_ok && cols_ok {
            return m;
        }
    }
}

pub fn random_values(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| value_in(rng, true)).collect()
}

pub fn ext(v: f64) -> ExtReal {
    ExtReal::new(v).unwrap()
}

pub fn kernel(bbar: &[Vec<f64>]) -> Kernel {
    let rows = bbar.iter().map(|r| r.iter().map(|&v| ext(v)).collect()).collect();
    Kernel::moreau(numbered_labels("x", bbar.len()), numbered_labels("y", bbar[0].len()), rows).unwrap()
}

pub fn on(kernel: &Kernel, side: Side, v: &[f64]) -> FunctionOnSpace {
    FunctionOnSpace::new(kernel, side, v.iter().map(|&t| ext(t)).collect()).unwrap()
}

pub fn floats(f: &FunctionOnSpace) -> Vec<f64> {
    f.values().iter().map(|v| v.to_f64()).collect()
}

/// Same infinities and finite values within `tol`.
pub fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(&u, &v)| if u.is_finite() && v.is_finite() { (u - v).abs() <= tol } else { u == v })
}
