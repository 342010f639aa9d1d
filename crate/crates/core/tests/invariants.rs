use heatlie::construct::v_entry;
use heatlie::verify::{check_lemma33, check_q_structure, l_basis, CheckRecord, StructureCoefficients};
use heatlie::{build_all_q, GenusContext, LambdaVectorField};

fn failures(records: &[CheckRecord]) -> Vec<String> {
    records.iter().filter(|r| !r.passed).map(|r| r.text_line()).collect()
}

#[test]
fn q_structure_and_lemma33_genus_five_and_six() {
    for g in 5..=6 {
        let c = GenusContext::new(g).unwrap();
        let qs = build_all_q(&c).unwrap();
        let q = check_q_structure(&c, &qs).unwrap();
        assert!(failures(&q).is_empty(), "{:?}", failures(&q));
        let l = check_lemma33(&c).unwrap();
        assert!(failures(&l).is_empty(), "{:?}", failures(&l));
    }
}

#[test]
fn v_matrix_is_symmetric() {
    for g in 1..=6 {
        let c = GenusContext::new(g).unwrap();
        let n = c.rank() as i64;
        for k in 1..=n {
            for m in k + 1..=n {
                assert_eq!(v_entry(&c, k, m).unwrap(), v_entry(&c, m, k).unwrap(), "g={g} ({k},{m})");
            }
        }
    }
}

#[test]
fn structure_coefficients_reconstruct_and_are_graded() {
    for g in 1..=4 {
        let c = GenusContext::new(g).unwrap();
        let ls = l_basis(&c).unwrap();
        let sc = StructureCoefficients::compute(&c, &ls).unwrap();
        let n = ls.len();
        for i in 0..n {
            for j in 0..n {
                let coeffs = sc.get(i, j);
                let mut sum = LambdaVectorField::zero(c.genus());
                for (k, p) in coeffs.iter().enumerate() {
                    sum = sum.checked_add(&ls[k].mul_lambda(p).unwrap()).unwrap();
                    if !p.is_zero() {
                        assert!(p.is_homogeneous_of(2 * (i + j) as i64 - 2 * k as i64), "g={g} c_{i},{j}^{k}");
                    }
                    assert_eq!(*p, -sc.get(j, i)[k].clone(), "antisymmetry g={g} ({i},{j},{k})");
                }
                assert_eq!(sum, ls[i].bracket(&ls[j]).unwrap(), "reconstruction g={g} ({i},{j})");
            }
        }
    }
}
