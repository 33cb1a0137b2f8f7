//! Degree-preserving isomorphisms between gradings over the same group.
//!
//! Every automorphism is `T(r)·Ψ·F_σ` with `T(r)` in the two-dimensional
//! torus. For each of the twelve choices of `(ψ, σ)` the torus part is found
//! by comparing Plücker coordinates: `T(t₁, t₂)` scales the coordinate
//! functions by monomials, so matching each component reduces to binomial
//! equations `t₁^a t₂^b = κ`, which are solved exactly.

use super::Grading;
use crate::algebra::{KElem, DIM};
use crate::error::{Error, Result};
use crate::exactfield::Scalar;
use crate::linalg::{Matrix, Subspace};
use crate::maps::{realize, AutFactors, Perm3, Psi};

/// Exponents of `(t₁, t₂)` by which the torus scales each coordinate.
const WEIGHTS: [(i64, i64); DIM] = [(0, 0), (0, 0), (1, 0), (-1, 0), (0, 1), (0, -1), (-1, -1), (1, 1)];

/// `t₁^a t₂^b = κ`.
#[derive(Clone, Debug)]
struct Binomial {
    exp: (i64, i64),
    kappa: Scalar,
}

/// Nonzero Plücker coordinates of a subspace, keyed by column mask.
fn plucker(v: &Subspace) -> Vec<(u32, Scalar)> {
    let d = v.dim();
    let rows = v.basis_vectors();
    let mut out = Vec::new();
    for mask in 0u32..(1 << DIM) {
        if mask.count_ones() as usize != d {
            continue;
        }
        let cols: Vec<usize> = (0..DIM).filter(|c| mask >> c & 1 == 1).collect();
        let minor: Vec<Vec<Scalar>> = rows.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
        let det = if d == 0 {
            Scalar::one()
        } else {
            Matrix::from_rows(d, minor).and_then(|m| m.determinant()).expect("square minor")
        };
        if !det.is_zero() {
            out.push((mask, det));
        }
    }
    out
}

fn weight(mask: u32) -> (i64, i64) {
    (0..DIM).filter(|c| mask >> c & 1 == 1).fold((0, 0), |(a, b), c| (a + WEIGHTS[c].0, b + WEIGHTS[c].1))
}

fn lookup(p: &[(u32, Scalar)], mask: u32) -> Option<&Scalar> {
    p.iter().find(|(m, _)| *m == mask).map(|(_, v)| v)
}

/// Equations on the torus for `T(t)·w = b`, or `None` when no torus element
/// can work.
fn component_equations(w: &[(u32, Scalar)], b: &[(u32, Scalar)], out: &mut Vec<Binomial>) -> Option<()> {
    if w.len() != b.len() || w.iter().zip(b).any(|((m, _), (n, _))| m != n) {
        return None;
    }
    let (i0, b0) = b.first()?;
    let w0 = lookup(w, *i0);
    let masks: std::collections::BTreeSet<u32> = w.iter().chain(b).map(|(m, _)| *m).collect();
    let w_i0 = weight(*i0);
    for j in masks {
        let lhs = lookup(w, j).zip(Some(b0)).map(|(x, y)| x * y);
        let rhs = w0.zip(lookup(b, j)).map(|(x, y)| x * y);
        match (lhs, rhs) {
            (None, None) => continue,
            (Some(a), Some(c)) => {
                let wj = weight(j);
                let exp = (wj.0 - w_i0.0, wj.1 - w_i0.1);
                let kappa = &c * &a.inv().expect("nonzero");
                if exp == (0, 0) {
                    if !kappa.is_one() {
                        return None;
                    }
                } else {
                    out.push(Binomial { exp, kappa });
                }
            }
            _ => return None,
        }
    }
    Some(())
}

fn pow(x: &Scalar, e: i64) -> Scalar {
    x.pow(e).expect("nonzero base")
}

/// Replaces `row` by `row − q·pivot`.
fn reduce(row: &mut Binomial, pivot: &Binomial, q: i64) {
    row.exp = (row.exp.0 - q * pivot.exp.0, row.exp.1 - q * pivot.exp.1);
    row.kappa = &row.kappa * &pow(&pivot.kappa, -q);
}

fn negate(row: &mut Binomial) {
    row.exp = (-row.exp.0, -row.exp.1);
    row.kappa = pow(&row.kappa, -1);
}

/// Eliminates column `col` among `rows`, returning the pivot row if any.
fn eliminate(rows: &mut Vec<Binomial>, col: usize) -> Option<Binomial> {
    let entry = |r: &Binomial| if col == 0 { r.exp.0 } else { r.exp.1 };
    loop {
        let live: Vec<usize> = (0..rows.len()).filter(|&k| entry(&rows[k]) != 0).collect();
        if live.len() <= 1 {
            let mut pivot = live.first().map(|&k| rows.remove(k))?;
            if entry(&pivot) < 0 {
                negate(&mut pivot);
            }
            return Some(pivot);
        }
        let p = *live.iter().min_by_key(|&&k| entry(&rows[k]).abs()).expect("nonempty");
        let pivot = rows[p].clone();
        for &k in &live {
            if k != p {
                let q = entry(&rows[k]).div_euclid(entry(&pivot));
                reduce(&mut rows[k], &pivot, q);
            }
        }
    }
}

/// Extended gcd: `(g, x, y)` with `a·x + b·y = g ≥ 0`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        return if a < 0 { (-a, -1, 0) } else { (a, 1, 0) };
    }
    let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
    (g, y, x - a.div_euclid(b) * y)
}

/// All solutions `(t₁, t₂) ∈ (F^×)²` up to the free directions of the
/// system, which are fixed at `1`.
fn solve(mut rows: Vec<Binomial>) -> Vec<(Scalar, Scalar)> {
    let first = eliminate(&mut rows, 0);
    let second = eliminate(&mut rows, 1);
    if rows.iter().any(|r| !r.kappa.is_one()) {
        return Vec::new();
    }
    let roots = |k: &Scalar, n: i64| k.nth_roots(n as u32);
    match (first, second) {
        (None, None) => vec![(Scalar::one(), Scalar::one())],
        (None, Some(r2)) => roots(&r2.kappa, r2.exp.1).into_iter().map(|t2| (Scalar::one(), t2)).collect(),
        (Some(r1), Some(r2)) => {
            let mut out = Vec::new();
            for t2 in roots(&r2.kappa, r2.exp.1) {
                let rhs = &r1.kappa * &pow(&t2, -r1.exp.1);
                for t1 in roots(&rhs, r1.exp.0) {
                    out.push((t1, t2.clone()));
                }
            }
            out
        }
        (Some(r1), None) => {
            let (d1, e1) = r1.exp;
            let (g, _, _) = ext_gcd(d1, e1);
            let (alpha, beta) = (d1 / g, e1 / g);
            // alpha·delta − beta·gamma = 1
            let (_, delta, neg_gamma) = ext_gcd(alpha, beta);
            let gamma = -neg_gamma;
            roots(&r1.kappa, g).into_iter().map(|u| (pow(&u, delta), pow(&u, -gamma))).collect()
        }
    }
}

fn torus_factors(t1: &Scalar, t2: &Scalar, psi: Psi, sigma: Perm3) -> AutFactors {
    let k = |t: &Scalar| KElem::new(t.clone(), t.inv().expect("nonzero"));
    AutFactors { r1: k(t1), r2: k(t2), psi, sigma }
}

/// An automorphism `φ` with `φ(src_g) = dst_g` for every degree `g`, as
/// factor coordinates. `Ok(None)` means the gradings are not isomorphic by
/// a degree-preserving automorphism.
pub fn grading_isomorphism(src: &Grading, dst: &Grading) -> Result<Option<AutFactors>> {
    IsoTarget::new(dst).find_from(src)
}

/// A destination grading with its Plücker coordinates computed once, for
/// testing many sources against it.
pub struct IsoTarget<'a> {
    dst: &'a Grading,
    coords: Vec<Vec<(u32, Scalar)>>,
}

impl<'a> IsoTarget<'a> {
    pub fn new(dst: &'a Grading) -> Self {
        let coords = dst.components().iter().map(|c| plucker(&c.space)).collect();
        IsoTarget { dst, coords }
    }

    /// Same contract as [`grading_isomorphism`] with `dst` fixed.
    pub fn find_from(&self, src: &Grading) -> Result<Option<AutFactors>> {
        let dst = self.dst;
        if src.group() != dst.group() {
            return Err(Error::GroupMismatch(format!("{} versus {}", src.group(), dst.group())));
        }
        if src.dims() != dst.dims() {
            return Ok(None);
        }
        for psi in Psi::ALL {
            for sigma in Perm3::all() {
                let base = realize(&AutFactors { psi, sigma, ..AutFactors::identity() })?;
                let mut eqs = Vec::new();
                let mut feasible = true;
                for ((c, d), b) in src.components().iter().zip(dst.components()).zip(&self.coords) {
                    debug_assert_eq!(c.degree, d.degree);
                    let w = plucker(&base.image(&c.space)?);
                    if component_equations(&w, b, &mut eqs).is_none() {
                        feasible = false;
                        break;
                    }
                }
                if !feasible {
                    continue;
                }
                for (t1, t2) in solve(eqs) {
                    let f = torus_factors(&t1, &t2, psi, sigma);
                    if src.apply_automorphism(&f)? == *dst {
                        return Ok(Some(f));
                    }
                }
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{standard_quartic, structurable_s, Family};
    use super::*;
    use crate::maps::random_s1;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn ext_gcd_identity() {
        for (a, b) in [(4, 6), (-3, 5), (0, 7), (7, 0), (-6, -4)] {
            let (g, x, y) = ext_gcd(a, b);
            assert_eq!(a * x + b * y, g);
            assert!(g >= 0);
        }
    }

    #[test]
    fn binomial_system_examples() {
        let b = |a: i64, c: i64, k: i64| Binomial { exp: (a, c), kappa: Scalar::from_int(k) };
        // t1^2 = 4, t2 = 3
        let sols = solve(vec![b(2, 0, 4), b(0, 1, 3)]);
        assert_eq!(sols.len(), 2);
        for (t1, t2) in &sols {
            assert_eq!(t1 * t1, Scalar::from_int(4));
            assert_eq!(*t2, Scalar::from_int(3));
        }
        // t1^2 t2^4 = 9: one-parameter family, u^2 = 9
        for (t1, t2) in solve(vec![b(2, 4, 9)]) {
            assert_eq!(&pow(&t1, 2) * &pow(&t2, 4), Scalar::from_int(9));
        }
        // inconsistent: t1 = 2 and t1 = 3
        assert!(solve(vec![b(1, 0, 2), b(1, 0, 3)]).is_empty());
    }

    #[test]
    fn recovers_random_automorphisms() {
        let mut rng = StdRng::seed_from_u64(7);
        for fam in Family::ALL {
            let (grp, p) = fam.example();
            let g = p.build(&grp).unwrap();
            for _ in 0..2 {
                let f = AutFactors {
                    r1: random_s1(&mut rng),
                    r2: random_s1(&mut rng),
                    psi: Psi::ALL[rand::Rng::gen_range(&mut rng, 0..2)],
                    sigma: Perm3::all()[rand::Rng::gen_range(&mut rng, 0..6)],
                };
                let moved = g.apply_automorphism(&f).unwrap();
                let found = grading_isomorphism(&g, &moved).unwrap().unwrap_or_else(|| panic!("{fam}"));
                assert_eq!(g.apply_automorphism(&found).unwrap(), moved);
            }
        }
    }

    #[test]
    fn non_isomorphic_gradings() {
        let a = structurable_s(1).unwrap();
        let b = structurable_s(2).unwrap();
        assert!(grading_isomorphism(&a, &b).unwrap().is_some());
        let std = standard_quartic();
        assert!(matches!(grading_isomorphism(&a, &std), Err(Error::GroupMismatch(_))));
    }
}
