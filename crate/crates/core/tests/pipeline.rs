//! The elimination pipeline against the closed-form builders.

use t36::canon::build_p;
use t36::curve::CurveData;
use t36::factor::build_q;
use t36::poly::{Poly, Rational, Var};
use t36::present::{present_word, relations_from_p, PivotOrder};
use t36::verify::{branch_invariants, det_exponents, is_mf, presentation_equivalent};
use t36::words::{enumerate, Family, Word};

fn words(families: &[Family], max_n: usize) -> Vec<Word> {
    enumerate(max_n).into_iter().filter(|w| families.contains(&w.family)).collect()
}

#[test]
fn canonical_order_matches_builders() {
    let c = CurveData::symbolic();
    for w in words(&[Family::A, Family::B, Family::CPrime], 3) {
        let got = present_word(&w, &c, PivotOrder::Canonical).unwrap();
        assert!(presentation_equivalent(&got.q, &build_q(&w, &c).q), "{w}");
    }
    for w in words(&[Family::D, Family::DPrime], 3).into_iter().filter(|w| !w.left_cut) {
        let got = present_word(&w, &c, PivotOrder::Canonical).unwrap();
        assert!(presentation_equivalent(&got.q, &build_q(&w, &c).q), "{w}");
    }
}

#[test]
fn pivot_order_does_not_matter() {
    let c = CurveData::symbolic();
    let two = Rational::from_integer(2.into());
    for w in words(&Family::ALL, 2) {
        let reference = present_word(&w, &c, PivotOrder::Canonical).unwrap().q;
        let inv = branch_invariants(&reference, &c, &two);
        for seed in 0..6 {
            let q = present_word(&w, &c, PivotOrder::Random(seed)).unwrap().q;
            let r = is_mf(&q, &c);
            assert!(r.passed(), "{w} seed {seed}");
            assert_eq!(r.size, reference.rows());
            assert_eq!(branch_invariants(&q, &c, &two), inv, "{w} seed {seed}");
            if matches!(w.family, Family::A | Family::B | Family::CPrime) {
                assert!(presentation_equivalent(&q, &reference), "{w} seed {seed}");
            }
        }
    }
}

#[test]
fn pipeline_determinants_match_builders() {
    let c = CurveData::symbolic();
    // c and the left cuts of d, d′ are where P-level truncation and the
    // closed forms part ways; the acceptance report lists those
    let agrees = |w: &Word| match w.family {
        Family::C => false,
        Family::D | Family::DPrime => !w.left_cut,
        _ => true,
    };
    for w in words(&Family::ALL, 3).into_iter().filter(agrees) {
        let got = present_word(&w, &c, PivotOrder::Canonical).unwrap().q;
        let want = build_q(&w, &c).q;
        let de = |m: &t36::poly::PolyMatrix| det_exponents(&m.det().unwrap(), &c);
        assert_eq!(de(&got), de(&want), "{w}");
    }
}

#[test]
fn a2_relations_have_the_expected_generators() {
    let c = CurveData::symbolic();
    let pres = relations_from_p(&build_p(&"a:2".parse().unwrap()), &c).unwrap();
    let labels: Vec<&str> = pres.generators.iter().map(|g| g.label.as_str()).collect();
    assert_eq!(labels, ["u^1", "u^2", "u1", "ub1", "u2", "ub2", "v1", "v2", "v3"]);
}

#[test]
fn lambda_specialization_commutes() {
    let sym = CurveData::symbolic();
    for v in [2i64, 3, -1] {
        let q0 = Rational::from_integer(v.into());
        let fixed = CurveData::rational(q0).unwrap();
        for w in enumerate(2).into_iter().filter(|w| w.n == 2) {
            let a = build_q(&w, &sym).q.substitute(&[(Var::L, Poly::int(v))]);
            assert_eq!(a, build_q(&w, &fixed).q, "{w} at {v}");
        }
    }
}

#[test]
fn truncations_are_submatrices() {
    let c = CurveData::symbolic();
    let full = build_q(&"a:2".parse().unwrap(), &c);
    let pos = |l: &str| full.labels.iter().position(|x| x == l).unwrap();
    for (suffix, keep) in [("l", vec![1, 2, 3, 4, 5]), ("r", vec![0, 1, 2, 3, 4]), ("lr", vec![1, 2, 3, 4])] {
        let cut = build_q(&format!("a:2:{suffix}").parse().unwrap(), &c);
        assert_eq!(cut.q, full.q.select(&keep, &keep), "{suffix}");
        let dropped: Vec<&String> = full.labels.iter().filter(|l| !cut.labels.contains(l)).collect();
        assert_eq!(dropped.len(), 6 - keep.len());
    }
    assert_eq!(pos("u^2"), 0);
    assert_eq!(pos("v3"), 5);
}

/// The closed form for c coincides with a's (cuts mirrored), whereas the
/// elimination for c keeps the extra R1 generator and is one larger.
#[test]
fn closed_form_c_coincides_with_a() {
    use t36::verify::signed_permutation_equivalent;
    let c = CurveData::symbolic();
    for n in 1..=3 {
        for (l, r) in [(false, false), (true, false), (false, true), (true, true)] {
            let a = build_q(&Word::new(Family::A, n).with_cuts(l, r), &c).q;
            let cw = Word::new(Family::C, n).with_cuts(r, l);
            assert!(signed_permutation_equivalent(&a, &build_q(&cw, &c).q), "{cw}");
            let pipeline = present_word(&cw, &c, PivotOrder::Canonical).unwrap();
            assert!(is_mf(&pipeline.q, &c).passed());
            assert_eq!(pipeline.q.rows(), a.rows() + 1, "{cw}");
            assert_eq!(pipeline.labels.iter().any(|l| l == "u^1"), !cw.left_cut);
        }
    }
}
