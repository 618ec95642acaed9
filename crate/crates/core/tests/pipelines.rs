mod common;

use warrow::expand::{full_expand, surgery};
use warrow::group::{alexander_gcd, wirtinger, LaurentPoly};
use warrow::model::rotate_basepoint;
use warrow::random::{presentation, Shape};
use warrow::{canonical_arrow_presentation, GaussCode, Presentation};

use common::*;

fn via_surgery(p: &Presentation) -> Presentation {
    canonical_arrow_presentation(&surgery(&full_expand(p))).unwrap()
}

#[test]
fn closed_trefoil_polynomial() {
    let g = GaussCode::parse("closed: O1+ U2+ O3+ U1+ O2+ U3+").unwrap();
    let p = canonical_arrow_presentation(&g).unwrap();
    let want = LaurentPoly::from_terms([(0, 1), (1, -1), (2, 1)]);
    assert_eq!(alexander_gcd(&wirtinger(&p)).unwrap(), want);
    for shift in 0..6 {
        let q = rotate_basepoint(&p, 0, shift).unwrap();
        assert_eq!(alexander_gcd(&wirtinger(&q)).unwrap(), want);
    }
}

#[test]
fn long_trefoil_alphas() {
    let g = GaussCode::parse("open: O1+ U2+ O3+ U1+ O2+ U3+").unwrap();
    let p = canonical_arrow_presentation(&g).unwrap();
    assert_eq!(alex(&p).to_string(), "t^-1 - 1 + t");
    assert_eq!(alphas(&p, 5), vec![1, 1, 1, 1]);
}

#[test]
fn surgery_round_trip_on_random_trees() {
    let mut rng = rng(3);
    for i in 0..60 {
        let shape = if i % 2 == 0 { Shape::long_knot(3, 3) } else { Shape::string_link(3, 3, 3) };
        let p = presentation(&mut rng, &shape);
        let q = via_surgery(&p);
        assert!(q.is_arrow_presentation());
        if is_long_knot(&p) {
            assert_eq!(alex(&p), alex(&q), "{}", p.to_json());
        } else {
            assert_eq!(mus(&p, 3), mus(&q, 3), "{}", p.to_json());
        }
    }
}

#[test]
fn json_round_trip() {
    let mut rng = rng(4);
    for _ in 0..50 {
        let p = presentation(&mut rng, &Shape::string_link(3, 4, 4));
        assert_eq!(Presentation::from_json(&p.to_json()).unwrap(), p);
    }
}
