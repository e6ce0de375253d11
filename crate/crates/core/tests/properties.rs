use proptest::prelude::*;

use hessmf::catalog::{builtin_default, NAMES};
use hessmf::certify::euler_identities;
use hessmf::expr_io::{parse_poly, poly_from_json, poly_to_json, print_poly};
use hessmf::polymat::{det, pfaffian};
use hessmf::{Field, FieldElem, Monomial, Poly, PolyMatrix};

const NV: usize = 4;

fn coeff() -> impl Strategy<Value = FieldElem> {
    prop_oneof![
        4 => (-9i64..=9, 1i64..=5).prop_map(|(n, d)| FieldElem::frac(n, d)),
        1 => (-4i64..=4, -4i64..=4).prop_map(|(a, b)| &FieldElem::from_int(a) + &(&FieldElem::omega() * &FieldElem::from_int(b))),
    ]
}

fn field_of(terms: &[(Monomial, FieldElem)]) -> Field {
    if terms.iter().all(|(_, c)| c.is_rational()) {
        Field::Q
    } else {
        Field::QOmega
    }
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..=3, NV), coeff()), 0..7).prop_map(|ts| {
        let terms: Vec<(Monomial, FieldElem)> =
            ts.into_iter().map(|(e, c)| (Monomial::from_exps(&e).unwrap(), c)).collect();
        let field = field_of(&terms);
        Poly::from_terms(NV, field, terms).unwrap()
    })
}

fn form(deg: u32) -> impl Strategy<Value = Poly> {
    let mons = hessmf::poly::monomials_of_degree(NV, deg);
    prop::collection::vec((0..mons.len(), coeff()), 1..6).prop_map(move |ts| {
        let terms: Vec<(Monomial, FieldElem)> = ts.into_iter().map(|(i, c)| (mons[i].clone(), c)).collect();
        let field = field_of(&terms);
        Poly::from_terms(NV, field, terms).unwrap()
    })
    .prop_filter("nonzero form", |f| !f.is_zero())
}

fn point(n: usize) -> impl Strategy<Value = Vec<FieldElem>> {
    prop::collection::vec(coeff(), n)
}

fn as_qw(p: &Poly) -> Poly {
    p.clone().with_field(Field::QOmega)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn print_parse_round_trip(f in poly()) {
        let text = print_poly(&f);
        let back = parse_poly(&text, NV, f.field()).unwrap();
        prop_assert_eq!(&back, &f, "{}", text);
        prop_assert_eq!(poly_from_json(&poly_to_json(&f)).unwrap(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_laws(a in poly(), b in poly(), c in poly()) {
        let (a, b, c) = (as_qw(&a), as_qw(&b), as_qw(&c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Poly::one(NV, Field::QOmega), a.clone());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly(), b in poly(), p in point(NV)) {
        let (a, b) = (as_qw(&a), as_qw(&b));
        prop_assert_eq!((&a * &b).eval(&p), &a.eval(&p) * &b.eval(&p));
        prop_assert_eq!((&a + &b).eval(&p), &a.eval(&p) + &b.eval(&p));
    }

    #[test]
    fn euler_identities_hold(f in form(3)) {
        for c in euler_identities(&f).unwrap() {
            prop_assert!(c.passed(), "{:?} for {}", c, f);
        }
    }

    #[test]
    fn euler_by_hand(f in form(4)) {
        let mut s = Poly::zero(NV, f.field());
        for (i, g) in f.gradient().iter().enumerate() {
            s = &s + &(&Poly::var(NV, f.field(), i) * g);
        }
        prop_assert_eq!(s, f.scale(&FieldElem::from_int(4)));
    }

    #[test]
    fn mixed_partials_commute(f in poly(), i in 0..NV, j in 0..NV) {
        prop_assert_eq!(f.diff(i).diff(j), f.diff(j).diff(i));
    }

    #[test]
    fn line_restriction_matches_evaluation(f in form(3), p in point(NV), q in point(NV), s in coeff(), t in coeff()) {
        let line = f.restrict_to_line(&p, &q);
        let x: Vec<FieldElem> = p.iter().zip(&q).map(|(a, b)| &(&s * a) + &(&t * b)).collect();
        prop_assert_eq!(line.eval(&[s, t]), f.eval(&x));
    }

    #[test]
    fn pfaffian_squared_is_determinant(half in 1usize..=4, vals in prop::collection::vec(-5i64..=5, 28)) {
        let n = 2 * half;
        let mut k = 0;
        let mut m = PolyMatrix::zeros(n, n, 1, Field::Q);
        for i in 0..n {
            for j in i + 1..n {
                let c = FieldElem::from_int(vals[k]);
                k += 1;
                m.set(i, j, Poly::constant(1, Field::Q, c.clone()));
                m.set(j, i, Poly::constant(1, Field::Q, -c));
            }
        }
        let pf = pfaffian(&m).unwrap();
        prop_assert_eq!(&pf * &pf, det(&m).unwrap());
    }
}

#[test]
fn pfaffian_squared_on_generic_skew_4x4() {
    // entries are independent variables, so this is the polynomial identity
    let n = 4;
    let mut m = PolyMatrix::zeros(n, n, 6, Field::Q);
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            m.set(i, j, Poly::var(6, Field::Q, k));
            m.set(j, i, -Poly::var(6, Field::Q, k));
            k += 1;
        }
    }
    let pf = pfaffian(&m).unwrap();
    assert_eq!(&pf * &pf, det(&m).unwrap());
}

#[test]
fn catalog_forms_round_trip() {
    for name in NAMES {
        let e = builtin_default(name).unwrap();
        let text = print_poly(&e.f);
        assert_eq!(parse_poly(&text, e.nvars(), e.f.field()).unwrap(), e.f, "{name}");
        assert_eq!(poly_from_json(&poly_to_json(&e.f)).unwrap(), e.f, "{name}");
    }
}
