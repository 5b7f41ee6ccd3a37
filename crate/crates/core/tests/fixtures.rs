use t36::curve::{CurveData, LambdaMode};
use t36::factor::build_q;
use t36::io::{matrix_to_json, parse_matrix_json};
use t36::poly::PolyMatrix;

const FIXTURES: [(&str, &str); 6] = [
    ("a:2", include_str!("fixtures/qa2.json")),
    ("b:2", include_str!("fixtures/qb2.json")),
    ("c:2", include_str!("fixtures/qc2.json")),
    ("d:2", include_str!("fixtures/qd2.json")),
    ("cp:2", include_str!("fixtures/qcp2.json")),
    ("dp:2", include_str!("fixtures/qdp2.json")),
];

fn load(src: &str) -> PolyMatrix {
    let (m, mode) = parse_matrix_json(src).unwrap();
    assert_eq!(mode, LambdaMode::Symbolic);
    m
}

#[test]
fn builders_reproduce_fixtures() {
    let c = CurveData::symbolic();
    for (w, src) in FIXTURES {
        let want = load(src);
        let got = build_q(&w.parse().unwrap(), &c).q;
        assert_eq!((got.rows(), got.cols()), (want.rows(), want.cols()), "{w}");
        for i in 0..want.rows() {
            for j in 0..want.cols() {
                assert_eq!(got.get(i, j), want.get(i, j), "{w} at ({i}, {j})");
            }
        }
    }
}

#[test]
fn fixtures_survive_reserialization() {
    for (w, src) in FIXTURES {
        let m = load(src);
        let again = matrix_to_json(&m, &LambdaMode::Symbolic);
        assert_eq!(load(&again), m, "{w}");
        assert_eq!(matrix_to_json(&load(&again), &LambdaMode::Symbolic), again);
    }
}
