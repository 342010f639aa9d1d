mod common;

use common::*;
use heatlie::psi::PsiPoly;
use heatlie::rational::rat;
use heatlie::text::{parse, parse_vector_field};
use heatlie::{curve_poly, JsonForm, LambdaPoly, LambdaVectorField, WeylOperator, XPoly};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn compose_is_associative(a in weyl(), b in weyl(), c in weyl()) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn weyl_commutator_antisymmetric_and_jacobi(a in weyl(), b in weyl(), c in weyl()) {
        let ab = a.commutator(&b).unwrap();
        let ba = b.commutator(&a).unwrap();
        prop_assert!(ab.checked_add(&ba).unwrap().is_zero());
        let j = a.commutator(&b.commutator(&c).unwrap()).unwrap()
            .checked_add(&b.commutator(&c.commutator(&a).unwrap()).unwrap()).unwrap()
            .checked_add(&c.commutator(&a.commutator(&b).unwrap()).unwrap()).unwrap();
        prop_assert!(j.is_zero());
    }

    #[test]
    fn vector_field_bracket_antisymmetric_and_jacobi(a in vector_field(), b in vector_field(), c in vector_field()) {
        let ab = a.bracket(&b).unwrap();
        prop_assert!(ab.checked_add(&b.bracket(&a).unwrap()).unwrap().is_zero());
        let j = a.bracket(&b.bracket(&c).unwrap()).unwrap()
            .checked_add(&b.bracket(&c.bracket(&a).unwrap()).unwrap()).unwrap()
            .checked_add(&c.bracket(&a.bracket(&b).unwrap()).unwrap()).unwrap();
        prop_assert!(j.is_zero());
    }

    #[test]
    fn bracket_weight_is_additive(ma in z_mono(2), mb in z_mono(2), la in lambda_mono(), lb in lambda_mono()) {
        let a = WeylOperator::from_term(ma, LambdaPoly::from_terms(G, [(la, rat(1, 1))]));
        let b = WeylOperator::from_term(mb, LambdaPoly::from_terms(G, [(lb, rat(1, 1))]));
        let (wa, wb) = (a.homogeneous_weight().unwrap().unwrap(), b.homogeneous_weight().unwrap().unwrap());
        prop_assert!(a.commutator(&b).unwrap().is_homogeneous_of(wa + wb));
    }

    #[test]
    fn apply_agrees_with_composition(a in weyl(), b in weyl(), f in z_poly()) {
        let via_compose = a.compose(&b).unwrap().apply(&f).unwrap();
        let nested = a.apply(&b.apply(&f).unwrap()).unwrap();
        prop_assert_eq!(via_compose, nested);
    }

    #[test]
    fn euclid_div_identity(a in x_poly(0..=5), b in x_poly(0..=2), lead in (1i64..=3, 1i64..=3)) {
        // divisor with constant leading coefficient
        let mut coeffs = b.coeffs().to_vec();
        coeffs.push(LambdaPoly::constant(G, rat(lead.0, lead.1)));
        let b = XPoly::from_coeffs(G, coeffs).unwrap();
        let (q, r) = a.euclid_div(&b).unwrap();
        prop_assert_eq!(q.mul(&b).unwrap().add(&r).unwrap(), a);
        prop_assert!(r.degree().map_or(true, |d| d < b.degree().unwrap()));
    }

    #[test]
    fn lambda_weight_is_multiplicative(ma in lambda_mono(), mb in lambda_mono()) {
        let p = LambdaPoly::from_terms(G, [(ma.clone(), rat(2, 1))]);
        let q = LambdaPoly::from_terms(G, [(mb.clone(), rat(-1, 3))]);
        prop_assert!(p.checked_mul(&q).unwrap().is_homogeneous_of((ma.weight() + mb.weight()) as i64));
    }

    #[test]
    fn text_round_trips(p in lambda_poly(), a in weyl(), v in vector_field(), s in psi_poly()) {
        prop_assert_eq!(parse::<LambdaPoly>(G, &p.render()).unwrap(), p);
        prop_assert_eq!(parse::<WeylOperator>(G, &a.render()).unwrap(), a);
        prop_assert_eq!(parse_vector_field(G, &v.render()).unwrap(), v);
        prop_assert_eq!(parse::<PsiPoly>(G, &s.render()).unwrap(), s);
    }

    #[test]
    fn json_round_trips(p in lambda_poly(), a in weyl(), v in vector_field(), s in psi_poly()) {
        prop_assert_eq!(LambdaPoly::from_json_str(&p.to_json_string()).unwrap(), p);
        prop_assert_eq!(WeylOperator::from_json_str(&a.to_json_string()).unwrap(), a);
        prop_assert_eq!(LambdaVectorField::from_json_str(&v.to_json_string()).unwrap(), v);
        prop_assert_eq!(PsiPoly::from_json_str(&s.to_json_string()).unwrap(), s);
    }
}

#[test]
fn curve_poly_is_homogeneous() {
    for g in 1..=8 {
        assert!(curve_poly(g).unwrap().is_homogeneous_of(4 * g + 2), "g = {g}");
    }
}
