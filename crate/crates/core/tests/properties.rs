//! Cross-module invariants, each checked against an oracle that does not
//! share code with the thing under test.

use proptest::prelude::*;
use qc_core::algebra::{cd_table_in_module_basis, AlgElem, DIM};
use qc_core::exactfield::Scalar;
use qc_core::gradings::Family;
use qc_core::maps::{inverse_factors, realize, AutFactors};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn small_scalar() -> impl Strategy<Value = Scalar> {
    prop::array::uniform4(-5i64..=5).prop_map(Scalar::from_ints)
}

fn random_elem(seed: u64) -> AlgElem {
    AlgElem::random(&mut StdRng::seed_from_u64(seed))
}

fn random_factors(seed: u64) -> AutFactors {
    AutFactors::random(&mut StdRng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // floating-point evaluation at each primitive 12th root of unity
    #[test]
    fn field_operations_commute_with_every_embedding(a in small_scalar(), b in small_scalar()) {
        for j in [1, 5, 7, 11] {
            let sum = (&a + &b).embed(j) - (a.embed(j) + b.embed(j));
            let prod = (&a * &b).embed(j) - a.embed(j) * b.embed(j);
            prop_assert!(sum.norm() < 1e-9 && prod.norm() < 1e-9, "j = {j}");
        }
        if !a.is_zero() {
            let back = a.inv().unwrap().embed(1) * a.embed(1);
            prop_assert!((back.re - 1.0).abs() < 1e-9 && back.im.abs() < 1e-9);
        }
    }

    #[test]
    fn module_product_agrees_with_cayley_dickson(sx in any::<u64>(), sy in any::<u64>()) {
        let cd = cd_table_in_module_basis().unwrap();
        let (x, y) = (random_elem(sx), random_elem(sy));
        prop_assert_eq!(cd.product(&x.coords(), &y.coords()), (&x * &y).coords());
    }

    #[test]
    fn realized_factors_are_multiplicative(sf in any::<u64>(), sx in any::<u64>(), sy in any::<u64>()) {
        let f = random_factors(sf);
        let phi = realize(&f).unwrap();
        let (x, y) = (random_elem(sx), random_elem(sy));
        prop_assert_eq!(phi.apply(&(&x * &y)), &phi.apply(&x) * &phi.apply(&y));
        prop_assert_eq!(phi.apply(&x.involute()), phi.apply(&x).involute());
        let inv = realize(&inverse_factors(&f)).unwrap();
        prop_assert_eq!(Some(inv), phi.inverse());
    }

    // multiplicativity of a grading, checked directly on products of basis vectors
    #[test]
    fn moved_gradings_stay_multiplicative(fam in 0usize..8, sf in any::<u64>()) {
        let (grp, params) = Family::ALL[fam].example();
        let g = params.build(&grp).unwrap().apply_automorphism(&random_factors(sf)).unwrap();
        let total: usize = g.components().iter().map(|c| c.space.dim()).sum();
        prop_assert_eq!(total, DIM);
        for a in g.components() {
            for b in g.components() {
                let target = g.component(&grp.add(&a.degree, &b.degree));
                for u in a.space.basis_vectors() {
                    for v in b.space.basis_vectors() {
                        let uv = &AlgElem::from_coords(&u).unwrap() * &AlgElem::from_coords(&v).unwrap();
                        let ok = match target {
                            Some(t) => t.contains(&uv.coords()).unwrap(),
                            None => uv.is_zero(),
                        };
                        prop_assert!(ok, "{} * {} leaves degree {}", a.degree, b.degree, grp.add(&a.degree, &b.degree));
                    }
                }
            }
        }
    }
}
