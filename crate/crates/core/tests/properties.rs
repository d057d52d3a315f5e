//! Property tests for the transforms, subdifferentials and kernel builders.

mod common;

use common::*;
use galois_core::{
    apply_b, apply_bstar, domain_report, projector, subdiff, subdiff_adjoint, subdiff_inverse, DualPair, ExtReal,
    FunctionOnSpace, Side,
};
use proptest::prelude::*;

fn entry() -> impl Strategy<Value = f64> {
    prop_oneof![3 => (-3i32..=3).prop_map(f64::from), 1 => Just(-INF)]
}

fn value() -> impl Strategy<Value = f64> {
    prop_oneof![7 => (-3i32..=3).prop_map(f64::from), 1 => Just(INF), 1 => Just(-INF)]
}

fn bbar() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1usize..=6, 1usize..=6)
        .prop_flat_map(|(nx, ny)| prop::collection::vec(prop::collection::vec(entry(), ny), nx))
        .prop_filter("every row and column needs a support entry", |m| {
            m.iter().all(|r| r.iter().any(|v| v.is_finite()))
                && (0..m[0].len()).all(|j| m.iter().any(|r| r[j].is_finite()))
        })
}

type Instance = (Vec<Vec<f64>>, [Vec<f64>; 2], [Vec<f64>; 2]);

/// A kernel with two functions on Y and two on X.
fn instance() -> impl Strategy<Value = Instance> {
    bbar().prop_flat_map(|m| {
        let (nx, ny) = (m.len(), m[0].len());
        let ys = || prop::collection::vec(value(), ny);
        let xs = || prop::collection::vec(value(), nx);
        (Just(m), [ys(), ys()], [xs(), xs()])
    })
}

fn ge(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(u, v)| u >= v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn transforms_match_naive_oracle((m, [f, _], [g, _]) in instance()) {
        let k = kernel(&m);
        prop_assert_eq!(floats(&apply_b(&k, &on(&k, Side::Y, &f)).unwrap()), naive_b(&m, &f));
        prop_assert_eq!(floats(&apply_bstar(&k, &on(&k, Side::X, &g)).unwrap()), naive_bstar(&m, &g));
    }

    #[test]
    fn galois_laws((m, [f, _], [g, _]) in instance()) {
        let bf = naive_b(&m, &f);
        let bsg = naive_bstar(&m, &g);
        let k = kernel(&m);
        let b = |v: &[f64]| floats(&apply_b(&k, &on(&k, Side::Y, v)).unwrap());
        let bs = |v: &[f64]| floats(&apply_bstar(&k, &on(&k, Side::X, v)).unwrap());
        prop_assert!(close(&b(&bs(&bf)), &bf, 1e-9));
        prop_assert!(close(&bs(&b(&bsg)), &bsg, 1e-9));
    }

    #[test]
    fn adjunction((m, [f, _], [g, _]) in instance()) {
        prop_assert_eq!(ge(&g, &naive_b(&m, &f)), ge(&f, &naive_bstar(&m, &g)));
        let k = kernel(&m);
        let (fk, gk) = (on(&k, Side::Y, &f), on(&k, Side::X, &g));
        prop_assert_eq!(apply_b(&k, &fk).unwrap().le(&gk), apply_bstar(&k, &gk).unwrap().le(&fk));
    }

    #[test]
    fn antitone_and_sup_morphism((m, [f, f2], _) in instance()) {
        let k = kernel(&m);
        let (a, c) = (on(&k, Side::Y, &f), on(&k, Side::Y, &f2));
        let (ba, bc) = (apply_b(&k, &a).unwrap(), apply_b(&k, &c).unwrap());
        prop_assert!(ba.le(&apply_b(&k, &a.min(&c)).unwrap()));
        prop_assert!(apply_b(&k, &a.max(&c)).unwrap().le(&ba));
        prop_assert_eq!(apply_b(&k, &a.min(&c)).unwrap(), ba.max(&bc));
    }

    #[test]
    fn projector_is_a_closure_from_below((m, _, [g, _]) in instance()) {
        let k = kernel(&m);
        let gk = on(&k, Side::X, &g);
        let p = projector(&k, &gk).unwrap();
        prop_assert!(ge(&g, &floats(&p)));
        prop_assert!(projector(&k, &p).unwrap().approx_eq(&p, 1e-9));
    }

    #[test]
    fn dirac_reproduces_columns(m in bbar(), s in value()) {
        let k = kernel(&m);
        for y in 0..k.ny() {
            let d = FunctionOnSpace::dirac(&k, y, ext(s));
            let column: Vec<f64> = m.iter().map(|row| term(row[y], s)).collect();
            prop_assert_eq!(floats(&apply_b(&k, &d).unwrap()), column);
        }
    }

    #[test]
    fn degenerate_constants(m in bbar()) {
        let k = kernel(&m);
        let top = FunctionOnSpace::constant(&k, Side::X, ExtReal::POS_INF);
        let bottom = FunctionOnSpace::constant(&k, Side::X, ExtReal::NEG_INF);
        prop_assert_eq!(apply_bstar(&k, &top).unwrap(), FunctionOnSpace::constant(&k, Side::Y, ExtReal::NEG_INF));
        prop_assert_eq!(apply_bstar(&k, &bottom).unwrap(), FunctionOnSpace::constant(&k, Side::Y, ExtReal::POS_INF));
        prop_assert_eq!(projector(&k, &bottom).unwrap(), bottom);
    }

    #[test]
    fn only_top_maps_to_bottom((m, _, [g, _]) in instance()) {
        let all_top = g.iter().all(|&v| v == INF);
        prop_assert_eq!(all_top, naive_bstar(&m, &g).iter().all(|&v| v == -INF));
    }

    #[test]
    fn inverse_subdifferential_is_the_argmax((m, _, [g, _]) in instance()) {
        let k = kernel(&m);
        let inv = subdiff_inverse(&k, &on(&k, Side::X, &g), 1e-9).unwrap();
        let top = naive_bstar(&m, &g);
        for (y, set) in inv.sets().iter().enumerate() {
            let expected: Vec<usize> = (0..m.len())
                .filter(|&x| m[x][y].is_finite())
                .filter(|&x| {
                    let v = term(m[x][y], g[x]);
                    if v.is_finite() && top[y].is_finite() { (v - top[y]).abs() <= 1e-9 } else { v == top[y] }
                })
                .collect();
            prop_assert_eq!(set, &expected);
        }
    }

    #[test]
    fn subdifferential_maps_are_mutual_inverses((m, [f, _], [g, _]) in instance()) {
        let k = kernel(&m);
        let d = subdiff(&k, &on(&k, Side::Y, &f), 1e-9).unwrap();
        let back = d.inverse(k.nx()).inverse(k.ny());
        prop_assert_eq!(back.sets(), d.sets());
        let da = subdiff_adjoint(&k, &on(&k, Side::X, &g), 1e-9).unwrap();
        for (x, ys) in da.sets().iter().enumerate() {
            for &y in ys {
                prop_assert!(da.inverse(k.ny()).get(y).contains(&x));
            }
        }
    }

    #[test]
    fn inversion_on_fixed_points((m, _, [g, _]) in instance()) {
        let k = kernel(&m);
        let gk = on(&k, Side::X, &g);
        let fixed = projector(&k, &gk).unwrap();
        let inv = subdiff_inverse(&k, &fixed, 1e-9).unwrap();
        let d = subdiff(&k, &apply_bstar(&k, &fixed).unwrap(), 1e-9).unwrap();
        prop_assert_eq!(inv, d);
    }

    #[test]
    fn domain_report_partitions((_, [f, _], _) in instance()) {
        let m = vec![vec![0.0; f.len()]];
        let k = kernel(&m);
        let r = domain_report(&on(&k, Side::Y, &f));
        let dom: Vec<usize> = r.ldom.iter().copied().filter(|k| r.udom.contains(k)).collect();
        prop_assert_eq!(&r.dom, &dom);
        prop_assert_eq!(&r.idom, &r.dom);
        prop_assert!(r.dom.iter().all(|&k| f[k].is_finite()));
    }

    #[test]
    fn moreau_adjoint_entries_read_back(m in bbar(), t in -5.0f64..5.0) {
        let k = kernel(&m);
        for (x, row) in m.iter().enumerate() {
            for (y, &b) in row.iter().enumerate() {
                prop_assert_eq!(k.in_support(x, y), b.is_finite());
                if b.is_finite() {
                    let got = k.eval_adjoint(y, x, ext(t)).to_f64();
                    prop_assert!((got - (b - t)).abs() <= 1e-12);
                    let pair = DualPair::new(k.entry(x, y)).unwrap();
                    prop_assert!(pair.adjunction_violation(&galois_core::scalar_conn::verification_grid(), 1e-9).is_none());
                }
            }
        }
    }

    #[test]
    fn restriction_identity_and_idempotence(m in bbar(), keep in prop::collection::vec(any::<bool>(), 6)) {
        let k = kernel(&m);
        let all = k.restrict(k.y_labels()).unwrap();
        prop_assert_eq!(all.y_labels(), k.y_labels());
        let f: Vec<f64> = (0..k.ny()).map(|j| j as f64 - 1.0).collect();
        prop_assert_eq!(floats(&apply_b(&all, &on(&all, Side::Y, &f)).unwrap()), naive_b(&m, &f));

        let subset: Vec<String> =
            k.y_labels().iter().zip(&keep).filter(|(_, &b)| b).map(|(l, _)| l.clone()).collect();
        if let Ok(once) = k.restrict(&subset) {
            let twice = once.restrict(&subset).unwrap();
            prop_assert_eq!(once.y_labels(), twice.y_labels());
            for x in 0..once.nx() {
                for y in 0..once.ny() {
                    prop_assert_eq!(once.in_support(x, y), twice.in_support(x, y));
                }
            }
        }
    }
}
