//! The extended real line ℝ̄ = ℝ ∪ {−∞, +∞}.
//!
//! Values are stored as an `f64` whose infinities play the role of the two
//! extra points; NaN is rejected at construction so the order is total.
//! Addition on ℝ̄ is not defined for `−∞ + +∞`, so two conventions are
//! provided: [`ExtReal::add_lo`] where `−∞` absorbs and [`ExtReal::add_hi`]
//! where `+∞` absorbs.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Neg;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{GaloisError, Result};

/// Default absolute tolerance for comparing finite values.
pub const DEFAULT_EPS: f64 = 1e-9;

/// An element of ℝ̄.
#[derive(Clone, Copy)]
pub struct ExtReal(f64);

/// Destructured view of an [`ExtReal`], convenient for `match`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Kind {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtReal {
    pub const NEG_INF: ExtReal = ExtReal(f64::NEG_INFINITY);
    pub const POS_INF: ExtReal = ExtReal(f64::INFINITY);
    pub const ZERO: ExtReal = ExtReal(0.0);

    /// Builds a value from an `f64`; `±inf` map to the infinite points.
    pub fn new(v: f64) -> Result<Self> {
        if v.is_nan() {
            Err(GaloisError::NotANumber)
        } else {
            Ok(Self::from_non_nan(v))
        }
    }

    /// A finite value.
    ///
    /// # Panics
    ///
    /// Panics if `v` is NaN or infinite.
    #[track_caller]
    pub fn finite(v: f64) -> Self {
        assert!(v.is_finite(), "ExtReal::finite called with {v}");
        Self::from_non_nan(v)
    }

    /// Result of float arithmetic on non-NaN operands. Overflow saturates to
    /// the matching infinity.
    #[inline]
    pub(crate) fn from_non_nan(v: f64) -> Self {
        debug_assert!(!v.is_nan());
        // -0.0 and 0.0 are the same point of ℝ̄
        ExtReal(if v == 0.0 { 0.0 } else { v })
    }

    #[inline]
    pub fn kind(self) -> Kind {
        if self.0 == f64::NEG_INFINITY {
            Kind::NegInf
        } else if self.0 == f64::INFINITY {
            Kind::PosInf
        } else {
            Kind::Finite(self.0)
        }
    }

    /// The value as an `f64`, infinities included.
    #[inline]
    pub fn to_f64(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    #[inline]
    pub fn is_pos_inf(self) -> bool {
        self.0 == f64::INFINITY
    }

    #[inline]
    pub fn is_neg_inf(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    pub fn finite_value(self) -> Option<f64> {
        self.is_finite().then_some(self.0)
    }

    /// Addition with `−∞` absorbing: `−∞ + +∞ = −∞`.
    #[inline]
    pub fn add_lo(self, other: Self) -> Self {
        if self.is_neg_inf() || other.is_neg_inf() {
            Self::NEG_INF
        } else {
            Self::from_non_nan(self.0 + other.0)
        }
    }

    /// Addition with `+∞` absorbing: `−∞ + +∞ = +∞`.
    #[inline]
    pub fn add_hi(self, other: Self) -> Self {
        if self.is_pos_inf() || other.is_pos_inf() {
            Self::POS_INF
        } else {
            Self::from_non_nan(self.0 + other.0)
        }
    }

    /// `self − other` under the `−∞`-absorbing convention.
    #[inline]
    pub fn sub_lo(self, other: Self) -> Self {
        self.add_lo(-other)
    }

    /// Same tag and, for finite values, `|a − b| ≤ tol`.
    pub fn approx_eq(self, other: Self, tol: f64) -> bool {
        match (self.kind(), other.kind()) {
            (Kind::Finite(a), Kind::Finite(b)) => (a - b).abs() <= tol,
            (a, b) => a == b,
        }
    }
}

impl PartialEq for ExtReal {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.partial_cmp(&other.0).expect("ExtReal never holds NaN")
    }
}

impl Hash for ExtReal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state);
    }
}

impl Neg for ExtReal {
    type Output = ExtReal;

    fn neg(self) -> ExtReal {
        ExtReal::from_non_nan(-self.0)
    }
}

impl From<Kind> for ExtReal {
    fn from(k: Kind) -> Self {
        match k {
            Kind::NegInf => ExtReal::NEG_INF,
            Kind::PosInf => ExtReal::POS_INF,
            Kind::Finite(v) => ExtReal::finite(v),
        }
    }
}

impl TryFrom<f64> for ExtReal {
    type Error = GaloisError;

    fn try_from(v: f64) -> Result<Self> {
        ExtReal::new(v)
    }
}

impl fmt::Debug for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            Kind::NegInf => f.write_str("-inf"),
            Kind::PosInf => f.write_str("+inf"),
            Kind::Finite(v) => fmt::Display::fmt(&v, f),
        }
    }
}

/// Supremum; the empty supremum is `−∞`.
pub fn sup<I: IntoIterator<Item = ExtReal>>(values: I) -> ExtReal {
    values.into_iter().fold(ExtReal::NEG_INF, ExtReal::max)
}

/// Infimum; the empty infimum is `+∞`.
pub fn inf<I: IntoIterator<Item = ExtReal>>(values: I) -> ExtReal {
    values.into_iter().fold(ExtReal::POS_INF, ExtReal::min)
}

/// Elementwise [`ExtReal::approx_eq`] on two slices of equal length.
pub fn all_approx_eq(a: &[ExtReal], b: &[ExtReal], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(*y, tol))
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.kind() {
            Kind::NegInf => serializer.serialize_str("-inf"),
            Kind::PosInf => serializer.serialize_str("+inf"),
            Kind::Finite(v) => serializer.serialize_f64(v),
        }
    }
}

struct ExtRealVisitor;

impl Visitor<'_> for ExtRealVisitor {
    type Value = ExtReal;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a finite number or one of the strings \"-inf\", \"+inf\"")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<ExtReal, E> {
        if v.is_finite() {
            Ok(ExtReal::finite(v))
        } else {
            Err(E::custom(format!("non-finite number {v}; use \"-inf\" or \"+inf\"")))
        }
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ExtReal, E> {
        Ok(ExtReal::finite(v as f64))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ExtReal, E> {
        Ok(ExtReal::finite(v as f64))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ExtReal, E> {
        match v {
            "-inf" => Ok(ExtReal::NEG_INF),
            "+inf" => Ok(ExtReal::POS_INF),
            other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        deserializer.deserialize_any(ExtRealVisitor)
    }
}
