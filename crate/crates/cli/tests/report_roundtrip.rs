use galois_core::{numbered_labels, solve, ExtReal, FunctionOnSpace, Kernel, Problem, Side};
use galois_solve::{ProblemFile, ReportFile};
use proptest::prelude::*;

fn entry() -> impl Strategy<Value = ExtReal> {
    prop_oneof![
        4 => (-300i32..=300).prop_map(|v| ExtReal::finite(f64::from(v) / 7.0)),
        1 => Just(ExtReal::NEG_INF),
    ]
}

fn target() -> impl Strategy<Value = ExtReal> {
    prop_oneof![
        6 => (-300i32..=300).prop_map(|v| ExtReal::finite(f64::from(v) / 3.0)),
        1 => Just(ExtReal::NEG_INF),
        1 => Just(ExtReal::POS_INF),
    ]
}

fn case() -> impl Strategy<Value = (usize, usize, Vec<ExtReal>, Vec<ExtReal>)> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(nx, ny)| {
        (Just(nx), Just(ny), prop::collection::vec(entry(), nx * ny), prop::collection::vec(target(), nx))
    })
}

proptest! {
    #[test]
    fn reports_round_trip((nx, ny, bbar, g) in case()) {
        let rows: Vec<Vec<ExtReal>> = bbar.chunks(ny).map(<[ExtReal]>::to_vec).collect();
        let Ok(k) = Kernel::moreau(numbered_labels("x", nx), numbered_labels("y", ny), rows) else { return Ok(()) };
        let g = FunctionOnSpace::new(&k, Side::X, g).unwrap();
        let problem = Problem::new(k, g).unwrap();
        let report = ReportFile::new(&problem, &solve(&problem).unwrap());
        let text = serde_json::to_string(&report).unwrap();
        let back: ReportFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &report);
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}

#[test]
fn problem_files_round_trip() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/worked_example.json");
    let file = ProblemFile::load(std::path::Path::new(path)).unwrap();
    let text = serde_json::to_string(&file).unwrap();
    assert_eq!(ProblemFile::parse(&text).unwrap(), file);
}
