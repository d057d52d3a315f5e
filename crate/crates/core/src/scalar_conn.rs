//! Scalar dual Galois connections h: ℝ̄ → ℝ̄.
//!
//! A map h yields a dual Galois connection exactly when it is nonincreasing,
//! right-continuous and sends `+∞` to `−∞`. Its adjoint is the residual
//! `h°(t) = min { s : t ≥ h(s) }`. Kernels are assembled from a closed set of
//! forms whose adjoints are known in closed form:
//!
//! | form | h(λ) for finite λ | adjoint |
//! |------|-------------------|---------|
//! | `Affine { c, m }` | `c − m·λ` | `Affine { c/m, 1/m }` |
//! | `SignedPower { c, p }` | `c − sgn(λ)·|λ|^p` | `Power { 0, c, 1, 1/p }` |
//! | `Power { offset, shift, scale, exponent }` | `offset − scale·sgn(λ−shift)·|λ−shift|^exponent` | `Power { shift, offset, scale^(−1/exponent), 1/exponent }` |
//! | `Table` | piecewise linear, linear beyond the end points | the mirrored table |
//! | `Off` | `−∞` | `Off` |
//!
//! Every form other than `Off` is a decreasing bijection of ℝ̄ with
//! `h(−∞) = +∞` and `h(+∞) = −∞`.

use serde::{Deserialize, Serialize};

use crate::error::{GaloisError, Result};
use crate::extreal::{ExtReal, Kind, DEFAULT_EPS};

/// Points `(s, h(s))` of a piecewise-linear decreasing bijection.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinear {
    points: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    /// Needs at least two points, strictly increasing in `s` and strictly
    /// decreasing in `h(s)`.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(GaloisError::Validation(
                "A3: a table needs at least two breakpoints to be a bijection".into(),
            ));
        }
        if points.iter().any(|(s, t)| !s.is_finite() || !t.is_finite()) {
            return Err(GaloisError::Validation("table breakpoints must be finite".into()));
        }
        for w in points.windows(2) {
            let ((s0, t0), (s1, t1)) = (w[0], w[1]);
            if s1 <= s0 || t1 >= t0 {
                return Err(GaloisError::Validation(format!(
                    "A3: table is not strictly decreasing between ({s0}, {t0}) and ({s1}, {t1})"
                )));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    fn eval(&self, s: f64) -> f64 {
        let pts = &self.points;
        let n = pts.len();
        // index of the segment [k, k+1] containing s, clamped to the end segments
        let k = pts.partition_point(|&(p, _)| p <= s).clamp(1, n - 1) - 1;
        let (s0, t0) = pts[k];
        let (s1, t1) = pts[k + 1];
        t0 + (t1 - t0) * (s - s0) / (s1 - s0)
    }

    fn mirrored(&self) -> Self {
        Self { points: self.points.iter().rev().map(|&(s, t)| (t, s)).collect() }
    }
}

/// One slice λ ↦ b(x, y, λ) of a kernel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FormSpec", into = "FormSpec")]
pub enum ScalarConnection {
    Affine { c: f64, m: f64 },
    SignedPower { c: f64, p: f64 },
    Power { offset: f64, shift: f64, scale: f64, exponent: f64 },
    Table(PiecewiseLinear),
    Off,
}

fn signed_pow(u: f64, p: f64) -> f64 {
    if p == 1.0 {
        u
    } else if p == 2.0 {
        u * u.abs()
    } else if p == 0.5 {
        u.signum() * u.abs().sqrt()
    } else {
        u.signum() * u.abs().powf(p)
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(GaloisError::Validation(format!("{name} must be finite and > 0, got {v}")))
    }
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(GaloisError::Validation(format!("{name} must be finite, got {v}")))
    }
}

impl ScalarConnection {
    /// `λ ↦ c − m·λ`; `c = −∞` gives [`ScalarConnection::Off`].
    pub fn affine(c: ExtReal, m: f64) -> Result<Self> {
        check_positive("affine slope m", m)?;
        match c.kind() {
            Kind::NegInf => Ok(Self::Off),
            Kind::PosInf => Err(GaloisError::Validation(
                "affine offset c = +inf is not allowed (kernel values +inf on S)".into(),
            )),
            Kind::Finite(c) => Ok(Self::Affine { c, m }),
        }
    }

    /// `λ ↦ c − sgn(λ)|λ|^p`.
    pub fn signed_power(c: f64, p: f64) -> Result<Self> {
        check_finite("signed power offset c", c)?;
        check_positive("signed power exponent p", p)?;
        Ok(Self::SignedPower { c, p })
    }

    /// `λ ↦ offset − scale·sgn(λ − shift)|λ − shift|^exponent`, normalized to
    /// `Affine` or `SignedPower` when it is one of those.
    pub fn power(offset: f64, shift: f64, scale: f64, exponent: f64) -> Result<Self> {
        check_finite("power offset", offset)?;
        check_finite("power shift", shift)?;
        check_positive("power scale", scale)?;
        check_positive("power exponent", exponent)?;
        Ok(if exponent == 1.0 {
            Self::Affine { c: offset + scale * shift, m: scale }
        } else if shift == 0.0 && scale == 1.0 {
            Self::SignedPower { c: offset, p: exponent }
        } else {
            Self::Power { offset, shift, scale, exponent }
        })
    }

    pub fn table(points: Vec<(f64, f64)>) -> Result<Self> {
        Ok(Self::Table(PiecewiseLinear::new(points)?))
    }

    pub fn is_off(&self) -> bool {
        matches!(self, Self::Off)
    }

    /// h(λ). Always `h(+∞) = −∞`; `h(−∞) = +∞` unless the form is `Off`.
    #[inline]
    pub fn eval(&self, lambda: ExtReal) -> ExtReal {
        if let Self::Off = self {
            return ExtReal::NEG_INF;
        }
        let l = match lambda.kind() {
            Kind::PosInf => return ExtReal::NEG_INF,
            Kind::NegInf => return ExtReal::POS_INF,
            Kind::Finite(l) => l,
        };
        let v = match self {
            Self::Affine { c, m } => c - m * l,
            Self::SignedPower { c, p } => c - signed_pow(l, *p),
            Self::Power { offset, shift, scale, exponent } => {
                offset - scale * signed_pow(l - shift, *exponent)
            }
            Self::Table(t) => t.eval(l),
            Self::Off => unreachable!(),
        };
        ExtReal::from_non_nan(v)
    }

    /// The residual `t ↦ min { s : t ≥ h(s) }` in closed form.
    pub fn adjoint(&self) -> Result<Self> {
        match self {
            Self::Off => Ok(Self::Off),
            Self::Affine { c, m } => {
                let (c, m) = (c / m, 1.0 / m);
                check_finite("adjoint offset", c)?;
                check_positive("adjoint slope", m)?;
                Ok(Self::Affine { c, m })
            }
            Self::SignedPower { c, p } => Self::power(0.0, *c, 1.0, 1.0 / p),
            Self::Power { offset, shift, scale, exponent } => {
                Self::power(*shift, *offset, scale.powf(-1.0 / exponent), 1.0 / exponent)
            }
            Self::Table(t) => Ok(Self::Table(t.mirrored())),
        }
    }
}

/// Residual of `conn` at `t` by bisection.
///
/// The bracket is doubled until it encloses the solution; past `2^60` the
/// answer is `±∞` by monotonicity. Bisection stops at an absolute width of
/// `1e−12` (or when no float lies strictly inside the bracket).
pub fn numeric_adjoint(conn: &ScalarConnection, t: ExtReal, bracket: (f64, f64)) -> Result<ExtReal> {
    let t = match t.kind() {
        Kind::PosInf => return Ok(ExtReal::NEG_INF),
        Kind::NegInf => return Ok(ExtReal::POS_INF),
        Kind::Finite(t) => t,
    };
    if conn.is_off() {
        return Ok(ExtReal::NEG_INF);
    }
    let (mut lo, mut hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(GaloisError::Validation(format!("invalid bracket ({lo}, {hi})")));
    }
    let h = |s: f64| conn.eval(ExtReal::finite(s)).to_f64();

    // monotonicity scan over the initial bracket
    const SAMPLES: usize = 64;
    let mut prev = (lo, h(lo));
    for k in 1..=SAMPLES {
        let s = lo + (hi - lo) * k as f64 / SAMPLES as f64;
        let v = h(s);
        if v > prev.1 + DEFAULT_EPS {
            return Err(GaloisError::NonMonotone { s0: prev.0, s1: s, v0: prev.1, v1: v });
        }
        prev = (s, v);
    }

    const LIMIT: f64 = (1u64 << 60) as f64;
    while h(lo) < t {
        if lo <= -LIMIT {
            return Ok(ExtReal::NEG_INF);
        }
        lo = (2.0 * lo).min(lo - 1.0).max(-LIMIT);
    }
    while h(hi) > t {
        if hi >= LIMIT {
            return Ok(ExtReal::POS_INF);
        }
        hi = (2.0 * hi).max(hi + 1.0).min(LIMIT);
    }
    // invariant: h(lo) ≥ t ≥ h(hi)
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) > t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ExtReal::finite(0.5 * (lo + hi)))
}

/// A scalar connection with its adjoint.
#[derive(Clone, Debug, PartialEq)]
pub struct DualPair {
    pub forward: ScalarConnection,
    pub adjoint: ScalarConnection,
}

impl DualPair {
    pub fn new(forward: ScalarConnection) -> Result<Self> {
        let adjoint = forward.adjoint()?;
        Ok(Self { forward, adjoint })
    }

    /// First `(s, t)` on `grid × grid` where `t ≥ h(s)` and `s ≥ h°(t)`
    /// disagree, ignoring pairs where either side is an equality up to
    /// `tol·(1 + |·|)`.
    pub fn adjunction_violation(&self, grid: &[ExtReal], tol: f64) -> Option<(ExtReal, ExtReal)> {
        let near = |a: ExtReal, b: ExtReal| {
            let scale = 1.0 + a.finite_value().map_or(0.0, f64::abs);
            a.approx_eq(b, tol * scale)
        };
        for &s in grid {
            let hs = self.forward.eval(s);
            for &t in grid {
                let ht = self.adjoint.eval(t);
                if (t >= hs) != (s >= ht) && !near(t, hs) && !near(s, ht) {
                    return Some((s, t));
                }
            }
        }
        None
    }
}

/// The 64-point test grid: `±∞`, zero, `1/3` and ±30 log-spaced magnitudes in `[1e−4, 1e6]`.
pub fn verification_grid() -> Vec<ExtReal> {
    let mut g = vec![ExtReal::NEG_INF, ExtReal::POS_INF, ExtReal::ZERO, ExtReal::finite(1.0 / 3.0)];
    for k in 0..30 {
        let mag = 10f64.powf(-4.0 + 10.0 * k as f64 / 29.0);
        g.push(ExtReal::finite(mag));
        g.push(ExtReal::finite(-mag));
    }
    g.sort();
    g
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum FormSpec {
    Affine { c: ExtReal, m: f64 },
    SignedPower { c: f64, p: f64 },
    Power { offset: f64, shift: f64, scale: f64, p: f64 },
    Off,
    Table { points: Vec<(f64, f64)> },
}

impl TryFrom<FormSpec> for ScalarConnection {
    type Error = GaloisError;

    fn try_from(spec: FormSpec) -> Result<Self> {
        match spec {
            FormSpec::Affine { c, m } => Self::affine(c, m),
            FormSpec::SignedPower { c, p } => Self::signed_power(c, p),
            FormSpec::Power { offset, shift, scale, p } => Self::power(offset, shift, scale, p),
            FormSpec::Off => Ok(Self::Off),
            FormSpec::Table { points } => Self::table(points),
        }
    }
}

impl From<ScalarConnection> for FormSpec {
    fn from(conn: ScalarConnection) -> Self {
        match conn {
            ScalarConnection::Affine { c, m } => FormSpec::Affine { c: ExtReal::finite(c), m },
            ScalarConnection::SignedPower { c, p } => FormSpec::SignedPower { c, p },
            ScalarConnection::Power { offset, shift, scale, exponent } => {
                FormSpec::Power { offset, shift, scale, p: exponent }
            }
            ScalarConnection::Off => FormSpec::Off,
            ScalarConnection::Table(t) => FormSpec::Table { points: t.points },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fin(v: f64) -> ExtReal {
        ExtReal::finite(v)
    }

    fn close(a: ExtReal, b: f64, tol: f64) -> bool {
        a.approx_eq(fin(b), tol)
    }

    fn sample_forms() -> Vec<ScalarConnection> {
        vec![
            ScalarConnection::affine(fin(0.0), 1.0).unwrap(),
            ScalarConnection::affine(fin(4.0), 3.0).unwrap(),
            ScalarConnection::affine(fin(-2.5), 0.25).unwrap(),
            ScalarConnection::signed_power(0.0, 2.0).unwrap(),
            ScalarConnection::signed_power(1.5, 3.0).unwrap(),
            ScalarConnection::signed_power(-1.0, 0.5).unwrap(),
            ScalarConnection::power(2.0, -1.0, 3.0, 1.5).unwrap(),
            ScalarConnection::table(vec![(-1.0, 5.0), (0.0, 1.0), (2.0, 0.0), (3.0, -4.0)]).unwrap(),
            ScalarConnection::Off,
        ]
    }

    #[test]
    fn eval_examples() {
        let a = ScalarConnection::affine(fin(4.0), 3.0).unwrap();
        assert!(close(a.eval(fin(-4.0 / 3.0)), 8.0, 1e-12));
        let sp = ScalarConnection::signed_power(0.0, 2.0).unwrap();
        assert!(close(sp.eval(fin(-(6f64).sqrt())), 6.0, 1e-12));
        for form in sample_forms() {
            assert_eq!(form.eval(ExtReal::POS_INF), ExtReal::NEG_INF);
        }
        assert_eq!(a.eval(ExtReal::NEG_INF), ExtReal::POS_INF);
        assert_eq!(ScalarConnection::Off.eval(ExtReal::NEG_INF), ExtReal::NEG_INF);
    }

    #[test]
    fn affine_with_neg_inf_offset_is_off() {
        assert_eq!(ScalarConnection::affine(ExtReal::NEG_INF, 1.0).unwrap(), ScalarConnection::Off);
        assert!(ScalarConnection::affine(ExtReal::POS_INF, 1.0).is_err());
        assert!(ScalarConnection::affine(fin(0.0), 0.0).is_err());
    }

    #[test]
    fn adjoint_examples() {
        let a = ScalarConnection::affine(fin(0.0), 1.0).unwrap().adjoint().unwrap();
        assert_eq!(a.eval(fin(8.0)), fin(-8.0));
        let sp = ScalarConnection::signed_power(0.0, 2.0).unwrap().adjoint().unwrap();
        assert!(close(sp.eval(fin(6.0)), -(6f64).sqrt(), 1e-12));
        let a43 = ScalarConnection::affine(fin(4.0), 3.0).unwrap().adjoint().unwrap();
        assert!(close(a43.eval(fin(8.0)), -4.0 / 3.0, 1e-12));
    }

    #[test]
    fn adjoint_of_off_is_bottom() {
        let adj = ScalarConnection::Off.adjoint().unwrap();
        for t in verification_grid() {
            assert_eq!(adj.eval(t), ExtReal::NEG_INF);
        }
    }

    #[test]
    fn non_decreasing_table_is_rejected() {
        assert!(ScalarConnection::table(vec![(0.0, 1.0), (1.0, 1.0)]).is_err());
        assert!(ScalarConnection::table(vec![(0.0, 1.0), (0.0, 0.0)]).is_err());
        assert!(ScalarConnection::table(vec![(0.0, 1.0)]).is_err());
    }

    #[test]
    fn table_interpolates_and_extrapolates() {
        let t = ScalarConnection::table(vec![(0.0, 1.0), (1.0, 0.0), (2.0, -2.0)]).unwrap();
        assert_eq!(t.eval(fin(0.5)), fin(0.5));
        assert_eq!(t.eval(fin(1.0)), fin(0.0));
        assert_eq!(t.eval(fin(-1.0)), fin(2.0));
        assert_eq!(t.eval(fin(3.0)), fin(-4.0));
        let adj = t.adjoint().unwrap();
        assert_eq!(adj.eval(fin(-4.0)), fin(3.0));
    }

    #[test]
    fn numeric_adjoint_examples() {
        let sp = ScalarConnection::signed_power(0.0, 2.0).unwrap();
        let closed = sp.adjoint().unwrap().eval(fin(6.0));
        let num = numeric_adjoint(&sp, fin(6.0), (-10.0, 10.0)).unwrap();
        assert!(num.approx_eq(closed, 1e-10));
        assert!(close(num, -2.449489742783178, 1e-10));

        let a = ScalarConnection::affine(fin(2.0), 1.0).unwrap();
        assert!(close(numeric_adjoint(&a, fin(8.0), (-100.0, 100.0)).unwrap(), -6.0, 1e-10));
        let a = ScalarConnection::affine(fin(3.0), 1.0).unwrap();
        assert!(close(numeric_adjoint(&a, fin(6.0), (-100.0, 100.0)).unwrap(), -3.0, 1e-10));
    }

    #[test]
    fn numeric_adjoint_expands_bracket() {
        let a = ScalarConnection::affine(fin(0.0), 1.0).unwrap();
        assert!(close(numeric_adjoint(&a, fin(1e6), (-1.0, 1.0)).unwrap(), -1e6, 1e-6));
        assert!(close(numeric_adjoint(&a, fin(-1e6), (-1.0, 1.0)).unwrap(), 1e6, 1e-6));
        // solution beyond 2^60
        assert_eq!(numeric_adjoint(&a, fin(-1e30), (-1.0, 1.0)).unwrap(), ExtReal::POS_INF);
        assert_eq!(numeric_adjoint(&a, fin(1e30), (-1.0, 1.0)).unwrap(), ExtReal::NEG_INF);
    }

    #[test]
    fn numeric_adjoint_rejects_increasing_tables() {
        // a forward map that increases: build a Power form and flip it via an
        // increasing table is impossible through the constructors, so check the
        // raw scan with a hand-made increasing piecewise map
        let bad = ScalarConnection::Table(PiecewiseLinear { points: vec![(0.0, 0.0), (1.0, 1.0)] });
        assert!(matches!(
            numeric_adjoint(&bad, fin(0.5), (0.0, 1.0)),
            Err(GaloisError::NonMonotone { .. })
        ));
    }

    #[test]
    fn adjunction_holds_on_verification_grid() {
        let grid = verification_grid();
        assert_eq!(grid.len(), 64);
        for form in sample_forms() {
            let pair = DualPair::new(form.clone()).unwrap();
            assert_eq!(pair.adjunction_violation(&grid, 1e-12), None, "{form:?}");
        }
    }

    #[test]
    fn adjunction_check_catches_a_wrong_adjoint() {
        let fwd = ScalarConnection::affine(fin(1.0), 1.0).unwrap();
        let pair = DualPair { forward: fwd, adjoint: ScalarConnection::affine(fin(0.0), 1.0).unwrap() };
        assert!(pair.adjunction_violation(&verification_grid(), 1e-12).is_some());
    }

    #[test]
    fn bijective_forms_invert() {
        for form in sample_forms().into_iter().filter(|f| !f.is_off()) {
            let adj = form.adjoint().unwrap();
            for s in verification_grid() {
                let Some(v) = s.finite_value() else { continue };
                if v.abs() > 1e3 {
                    continue;
                }
                let t = form.eval(s);
                let again = form.eval(adj.eval(t));
                let scale = 1.0 + t.finite_value().map_or(0.0, f64::abs);
                assert!(again.approx_eq(t, 1e-10 * scale), "{form:?} at {s}: {again} vs {t}");
                let fwd = form.eval(adj.eval(s));
                assert!(fwd.approx_eq(s, 1e-10 * (1.0 + v.abs())), "{form:?} at {s}: {fwd}");
            }
        }
    }

    #[test]
    fn adjoint_is_an_involution() {
        let grid = verification_grid();
        for form in sample_forms() {
            let twice = form.adjoint().unwrap().adjoint().unwrap();
            for &s in &grid {
                let (a, b) = (form.eval(s), twice.eval(s));
                let tol = 1e-10 * (1.0 + a.finite_value().map_or(0.0, f64::abs));
                assert!(a.approx_eq(b, tol), "{form:?} at {s}: {a} vs {b}");
            }
        }
        let sp = ScalarConnection::signed_power(1.5, 2.0).unwrap();
        assert_eq!(sp.adjoint().unwrap().adjoint().unwrap(), sp);
    }

    #[test]
    fn json_forms() {
        let forms: Vec<ScalarConnection> = serde_json::from_str(
            r#"[{"type":"affine","c":4,"m":3},{"type":"signed_power","c":0,"p":2},
                {"type":"off"},{"type":"table","points":[[0,1],[1,0]]},
                {"type":"affine","c":"-inf","m":1}]"#,
        )
        .unwrap();
        assert_eq!(forms[0], ScalarConnection::Affine { c: 4.0, m: 3.0 });
        assert_eq!(forms[1], ScalarConnection::SignedPower { c: 0.0, p: 2.0 });
        assert_eq!(forms[2], ScalarConnection::Off);
        assert_eq!(forms[4], ScalarConnection::Off);
        let s = serde_json::to_string(&forms[0]).unwrap();
        assert_eq!(s, r#"{"type":"affine","c":4.0,"m":3.0}"#);
        assert!(serde_json::from_str::<ScalarConnection>(r#"{"type":"table","points":[[0,0],[1,1]]}"#).is_err());
        assert!(serde_json::from_str::<ScalarConnection>(r#"{"type":"affine","c":1,"m":1,"z":0}"#).is_err());
    }

    fn any_form() -> impl Strategy<Value = ScalarConnection> {
        prop_oneof![
            (-10.0f64..10.0, 0.1f64..5.0).prop_map(|(c, m)| ScalarConnection::affine(fin(c), m).unwrap()),
            (-10.0f64..10.0, 0.2f64..4.0).prop_map(|(c, p)| ScalarConnection::signed_power(c, p).unwrap()),
            (-5.0f64..5.0, -5.0f64..5.0, 0.2f64..5.0, 0.3f64..3.0)
                .prop_map(|(o, s, k, p)| ScalarConnection::power(o, s, k, p).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn eval_is_nonincreasing(form in any_form(), mut xs in proptest::collection::vec(-100.0f64..100.0, 2..20)) {
            xs.sort_by(f64::total_cmp);
            let vals: Vec<_> = xs.iter().map(|&x| form.eval(fin(x))).collect();
            for w in vals.windows(2) {
                prop_assert!(w[1] <= w[0]);
            }
        }

        #[test]
        fn random_forms_satisfy_adjunction(form in any_form()) {
            let pair = DualPair::new(form).unwrap();
            prop_assert_eq!(pair.adjunction_violation(&verification_grid(), 1e-12), None);
        }
    }
}
