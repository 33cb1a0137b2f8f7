//! The self-check suite behind `qc verify`.
//!
//! Checks that involve the multiplication read it from a [`StructureTable`],
//! so a deliberately damaged table shows up as named failures.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::algebra::{
    basis_name, cd_isomorphism, cd_table_in_module_basis, involution_matrix, verify_cd_isomorphism, AlgElem,
    StructureTable, DIM,
};
use crate::exactfield::{zeta_power, Scalar};
use crate::gradings::{
    classify, coarsening_check, cubic_probe, deg_of_s, grading_isomorphism, grading_validate, lemma_checks,
    m_sign_components_graded, standard_quartic, structurable_s, AbGroup, Family, Grading,
};
use crate::linalg::{Matrix, Subspace};
use crate::maps::{
    automorphism_violation_with, d_param, derivation_space_with, derivation_violation_with, f_sigma,
    factor_automorphism, inverse_factors, realize, semidirect_mul, AutFactors, DerParams, Perm3,
};

/// Outcome of one named check.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

fn check(name: &str, failure: Option<String>) -> Check {
    Check { name: name.into(), passed: failure.is_none(), detail: failure }
}

fn first_bad_pair(mut bad: impl FnMut(usize, usize) -> bool) -> Option<String> {
    for a in 0..DIM {
        for b in 0..DIM {
            if bad(a, b) {
                return Some(format!("basis pair ({}, {})", basis_name(a), basis_name(b)));
            }
        }
    }
    None
}

fn catalog() -> Vec<(Family, Grading)> {
    Family::ALL
        .into_iter()
        .filter_map(|f| {
            let (grp, p) = f.example();
            p.build(&grp).ok().map(|g| (f, g))
        })
        .collect()
}

/// Runs every check against `table` with randomness seeded by `seed`.
pub fn run_checks(table: &StructureTable, seed: u64) -> Vec<Check> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mul = |x: &[Scalar], y: &[Scalar]| table.product(x, y);
    let basis: Vec<Vec<Scalar>> = (0..DIM).map(|i| AlgElem::basis(i).coords()).collect();
    let one = AlgElem::one().coords();

    // Field and linear algebra.
    out.push(check("field: zeta has order 12", {
        let ok = zeta_power(12).is_one() && (-zeta_power(6)).is_one() && !zeta_power(4).is_one();
        (!ok).then(|| "zeta^12 != 1 or zeta^6 != -1".into())
    }));
    out.push(check("field: axioms on random elements", {
        let mut bad = None;
        for _ in 0..10 {
            let (a, b, c) = (Scalar::random(&mut rng), Scalar::random(&mut rng), Scalar::random(&mut rng));
            if &(&a * &b) * &c != &a * &(&b * &c) || &a * &(&b + &c) != &(&a * &b) + &(&a * &c) {
                bad = Some(format!("fails for a = {a}, b = {b}, c = {c}"));
                break;
            }
            if !a.is_zero() && !(&a * &a.inv().expect("nonzero")).is_one() {
                bad = Some(format!("a * a^-1 != 1 for a = {a}"));
                break;
            }
        }
        bad
    }));
    out.push(check("field: exact square roots", {
        let a = &Scalar::random(&mut rng) + &Scalar::i();
        let sq = &a * &a;
        let roots = sq.nth_roots(2);
        (roots.len() != 2 || !roots.contains(&a)).then(|| format!("square roots of {sq} miss {a}"))
    }));
    out.push(check("linalg: rank-nullity", {
        let rows: Vec<Vec<Scalar>> =
            (0..4).map(|_| (0..6).map(|_| Scalar::from_int(rng.gen_range(-2..3))).collect()).collect();
        let m = Matrix::from_rows(6, rows).expect("4x6");
        let k = m.kernel();
        let zero_image = k.basis_vectors().iter().all(|v| m.mul_vec(v).expect("len 6").iter().all(Scalar::is_zero));
        (m.rank() + k.dim() != 6 || !zero_image).then(|| format!("rank {} + nullity {} != 6", m.rank(), k.dim()))
    }));
    out.push(check("linalg: modular dimension formula", {
        let mk = |rng: &mut StdRng| {
            let vs: Vec<Vec<Scalar>> =
                (0..3).map(|_| (0..5).map(|_| Scalar::from_int(rng.gen_range(-1..2))).collect()).collect();
            Subspace::span(5, &vs).expect("len 5")
        };
        let (u, v) = (mk(&mut rng), mk(&mut rng));
        let s = u.sum(&v).expect("same ambient");
        let i = u.intersection(&v).expect("same ambient");
        (s.dim() + i.dim() != u.dim() + v.dim()).then(|| "dim(U+V) + dim(U∩V) != dim U + dim V".into())
    }));

    // Multiplication table.
    out.push(check(
        "table: 1 is a two-sided unit",
        first_bad_pair(|a, b| b == 0 && (mul(&one, &basis[a]) != basis[a] || mul(&basis[a], &one) != basis[a])),
    ));
    out.push(check(
        "table: agrees with the Cayley-Dickson construction at mu = 1",
        match cd_table_in_module_basis() {
            Ok(cd) => first_bad_pair(|a, b| cd.entry(a, b) != table.entry(a, b)),
            Err(e) => Some(e.to_string()),
        },
    ));
    let bar = involution_matrix();
    out.push(check(
        "table: involution reverses products",
        first_bad_pair(|a, b| {
            let lhs = bar.mul_vec(table.entry(a, b)).expect("len 8");
            let rhs = mul(&bar.mul_vec(&basis[b]).expect("len 8"), &bar.mul_vec(&basis[a]).expect("len 8"));
            lhs != rhs
        }),
    ));
    out.push(check("table: skew-alternative identity for s", {
        let s = AlgElem::s().coords();
        let assoc = |x: &[Scalar], y: &[Scalar], z: &[Scalar]| -> Vec<Scalar> {
            let l = mul(&mul(x, y), z);
            let r = mul(x, &mul(y, z));
            l.iter().zip(&r).map(|(p, q)| p - q).collect()
        };
        first_bad_pair(|a, b| {
            let lhs = assoc(&s, &basis[a], &basis[b]);
            let rhs = assoc(&basis[a], &s, &basis[b]);
            lhs.iter().zip(&rhs).any(|(p, q)| !(p + q).is_zero())
        })
    }));
    out.push(check(
        "table: K is a commutative subalgebra",
        first_bad_pair(|a, b| {
            a < 2
                && b < 2
                && (table.entry(a, b) != table.entry(b, a) || table.entry(a, b)[2..].iter().any(|c| !c.is_zero()))
        }),
    ));

    // Derivations.
    let der = derivation_space_with(table);
    out.push(check("derivations: space has dimension 2", (der.dim() != 2).then(|| format!("dimension {}", der.dim()))));
    let d10 = d_param(&DerParams::from_ints(1, 0));
    let d01 = d_param(&DerParams::from_ints(0, 1));
    out.push(check(
        "derivations: d(1,0) and d(0,1) satisfy the Leibniz rule",
        derivation_violation_with(table, &d10).or_else(|| derivation_violation_with(table, &d01)),
    ));
    out.push(check(
        "derivations: d(1,0) and d(0,1) span the derivation space",
        (der.dim() != 2
            || !der.contains(&d10.to_vec()).unwrap_or(false)
            || !der.contains(&d01.to_vec()).unwrap_or(false))
        .then(|| "parametrised derivations are not a basis".into()),
    ));
    out.push(check(
        "derivations: the algebra is abelian",
        (!d10.bracket(&d01).is_zero()).then(|| "[d(1,0), d(0,1)] != 0".into()),
    ));

    // Automorphisms.
    out.push(check("automorphisms: every f_sigma preserves the table", {
        Perm3::all()
            .iter()
            .find_map(|p| automorphism_violation_with(table, &f_sigma(p)).map(|w| format!("sigma {p}: {w}")))
    }));
    out.push(check("automorphisms: random torus elements preserve the table", {
        let mut bad = None;
        for _ in 0..4 {
            let f = AutFactors::random(&mut rng);
            if let Some(w) = realize(&f).ok().and_then(|phi| automorphism_violation_with(table, &phi)) {
                bad = Some(w);
                break;
            }
        }
        bad
    }));
    out.push(check("automorphisms: factorization round trip", {
        let mut bad = None;
        for _ in 0..4 {
            let f = AutFactors::random(&mut rng);
            let got = realize(&f).and_then(|phi| factor_automorphism(&phi));
            if got.as_ref() != Ok(&f) {
                bad = Some(format!("factors {} not recovered", serde_json::to_string(&f).unwrap_or_default()));
                break;
            }
        }
        bad
    }));
    out.push(check("automorphisms: composition law of the factors", {
        let mut bad = None;
        for _ in 0..4 {
            let (a, b) = (AutFactors::random(&mut rng), AutFactors::random(&mut rng));
            let lhs = realize(&semidirect_mul(&a, &b));
            let rhs = realize(&a).and_then(|x| Ok(x.compose(&realize(&b)?)));
            if lhs.is_err() || lhs != rhs {
                bad = Some("realize(a*b) != realize(a) realize(b)".into());
                break;
            }
        }
        bad
    }));
    out.push(check("automorphisms: inverse factors", {
        let a = AutFactors::random(&mut rng);
        (!semidirect_mul(&a, &inverse_factors(&a)).is_identity()).then(|| "a * a^-1 is not the identity".into())
    }));

    // Algebra structure.
    out.push(check("algebra: Gram matrix of b on M has rank 6", {
        let r = crate::gradings::gram_rank_on_m();
        (r != 6).then(|| format!("rank {r}"))
    }));
    out.push(check("algebra: CD(B, mu) is isomorphic to CD(B, 1) for mu = 1, 4, 9/4", {
        let cases = [
            (Scalar::one(), Scalar::one()),
            (Scalar::from_int(4), Scalar::from_int(2)),
            (Scalar::from_frac(9, 4), Scalar::from_frac(3, 2)),
        ];
        cases.iter().find_map(|(mu, root)| {
            let ok = cd_isomorphism(mu, root).and_then(|m| verify_cd_isomorphism(mu, &m)).unwrap_or(false);
            (!ok).then(|| format!("mu = {mu}"))
        })
    }));
    out.push(check("algebra: x = e+(l1 x1 + l2 x2 + l3 x3) with l1 l2 l3 = 1 has (x^2)^2 = 8x and b(x, x^2) = 3", {
        let l1 = Scalar::from_frac(rng.gen_range(1..7), rng.gen_range(1..7));
        let l2 = Scalar::from_frac(rng.gen_range(1..7), -rng.gen_range(1..7));
        let l3 = (&l1 * &l2).inv().expect("nonzero");
        match cubic_probe(&[l1, l2, l3]) {
            Ok(p) => (p.square_of_square != p.x.scale(&Scalar::from_int(8)) || p.b_x_square != Scalar::from_int(3))
                .then(|| format!("(x^2)^2 and b(x, x^2) = {} off", p.b_x_square)),
            Err(e) => Some(e.to_string()),
        }
    }));

    // Gradings.
    let cat = catalog();
    out.push(check("gradings: every family constructor yields a valid grading", {
        if cat.len() != Family::ALL.len() {
            Some(format!("only {} of {} families constructed", cat.len(), Family::ALL.len()))
        } else {
            cat.iter().find_map(|(f, g)| {
                let r = grading_validate(g);
                (!r.valid).then(|| format!("{f}: {}", r.diagnostics.join("; ")))
            })
        }
    }));
    out.push(check("gradings: structural lemmas hold on every family", {
        cat.iter().find_map(|(f, g)| lemma_checks(g).into_iter().find(|(_, ok)| !ok).map(|(n, _)| format!("{f}: {n}")))
    }));
    out.push(check("gradings: trivial grading has M+ and M- graded", {
        let grp = AbGroup::cyclic(&[2]).expect("valid");
        let g = Grading::new(grp.clone(), vec![(grp.identity(), Subspace::full(DIM))]).expect("one component");
        (!m_sign_components_graded(&g)
            || !grp.is_identity(&deg_of_s(&g).unwrap_or_else(|_| grp.elem(&[1]).expect("rank 1"))))
        .then(|| "trivial grading misreported".into())
    }));
    out.push(check("gradings: each structurable grading coarsens the standard quartic grading", {
        let sq = standard_quartic();
        (1..=3).find_map(|i| match structurable_s(i) {
            Ok(s) => (!coarsening_check(&s, &sq) || coarsening_check(&sq, &s)).then(|| format!("i = {i}")),
            Err(e) => Some(e.to_string()),
        })
    }));
    out.push(check("gradings: structurable gradings are isomorphic via sigma(i) = j", {
        let mut bad = None;
        for i in 1..=3 {
            for j in 1..=3 {
                let found = structurable_s(i).and_then(|a| grading_isomorphism(&a, &structurable_s(j)?)).ok().flatten();
                if found.map(|w| w.sigma.apply(i)) != Some(j) {
                    bad = Some(format!("no witness with sigma({i}) = {j}"));
                }
            }
        }
        bad
    }));
    out.push(check("gradings: classification recovers every family after a random automorphism", {
        cat.iter().find_map(|(f, g)| {
            let w = AutFactors::random(&mut rng);
            let moved = match g.apply_automorphism(&w) {
                Ok(m) => m,
                Err(e) => return Some(e.to_string()),
            };
            match classify(&moved) {
                Ok(c) if c.family == *f && c.verify(&moved).unwrap_or(false) => None,
                Ok(c) => Some(format!("{f} classified as {}", c.family)),
                Err(e) => Some(format!("{f}: {e}")),
            }
        })
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_table_passes_everything() {
        let checks = run_checks(&StructureTable::standard(), 0);
        assert!(checks.len() >= 20);
        for c in &checks {
            assert!(c.passed, "{}: {:?}", c.name, c.detail);
        }
    }

    #[test]
    fn corrupted_entry_is_named() {
        let mut t = StructureTable::standard();
        t.set_entry(2, 4, AlgElem::zero().coords()).unwrap();
        let checks = run_checks(&t, 0);
        let cd = checks.iter().find(|c| c.name.contains("Cayley-Dickson")).unwrap();
        assert!(!cd.passed);
        assert_eq!(cd.detail.as_deref(), Some("basis pair (e+x1, e+x2)"));
    }
}
