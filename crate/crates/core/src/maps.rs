//! Automorphisms and derivations of `(A, −)`.
//!
//! Every automorphism factors uniquely as `θ(r₁, r₂, ψ) ∘ f_σ`: a
//! permutation of the `xᵢ`, followed by a twist of all `K`-coordinates by
//! `ψ ∈ Aut(K)` and a scaling of `xᵢ` by norm-one elements `rᵢ` with
//! `r₃ = ex(r₁r₂)`.

use std::fmt;

use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{
    alg_multiply, canonical_subspace, involution_matrix, k_line, AlgElem, KElem, StructureTable, SubspaceName, DIM,
};
use crate::error::{Error, Result};
use crate::exactfield::Scalar;
use crate::linalg::{Matrix, Subspace};

/// `F`-linear endomorphism of `A`; column `c` is the image of canonical
/// basis vector `c`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinEndo {
    matrix: Matrix,
}

impl LinEndo {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if matrix.rows() != DIM || matrix.cols() != DIM {
            return Err(Error::DimensionMismatch { expected: DIM * DIM, found: matrix.rows() * matrix.cols() });
        }
        Ok(LinEndo { matrix })
    }

    /// Builds the map from the images of the canonical basis.
    pub fn from_images(images: &[AlgElem]) -> Result<Self> {
        let cols: Vec<Vec<Scalar>> = images.iter().map(AlgElem::coords).collect();
        LinEndo::new(Matrix::from_columns(DIM, &cols)?)
    }

    pub fn identity() -> Self {
        LinEndo { matrix: Matrix::identity(DIM) }
    }

    pub fn zero() -> Self {
        LinEndo { matrix: Matrix::zeros(DIM, DIM) }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, x: &AlgElem) -> AlgElem {
        let v = self.matrix.mul_vec(&x.coords()).expect("8-dimensional");
        AlgElem::from_coords(&v).expect("8-dimensional")
    }

    pub fn apply_coords(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.matrix.mul_vec(v).expect("8-dimensional")
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinEndo) -> LinEndo {
        LinEndo { matrix: self.matrix.mul(&other.matrix).expect("8x8") }
    }

    pub fn inverse(&self) -> Option<LinEndo> {
        self.matrix.inverse().map(|matrix| LinEndo { matrix })
    }

    pub fn add(&self, other: &LinEndo) -> LinEndo {
        LinEndo { matrix: self.matrix.add(&other.matrix).expect("8x8") }
    }

    pub fn scale(&self, c: &Scalar) -> LinEndo {
        LinEndo { matrix: self.matrix.scale(c) }
    }

    /// Commutator `self∘other − other∘self`.
    pub fn bracket(&self, other: &LinEndo) -> LinEndo {
        LinEndo { matrix: self.compose(other).matrix.sub(&other.compose(self).matrix).expect("8x8") }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn image(&self, v: &Subspace) -> Result<Subspace> {
        v.image(&self.matrix)
    }

    /// Row-major vectorisation used by the derivation solver.
    pub fn to_vec(&self) -> Vec<Scalar> {
        self.matrix.entries().to_vec()
    }

    pub fn from_vec(v: Vec<Scalar>) -> Result<Self> {
        LinEndo::new(Matrix::new(DIM, DIM, v)?)
    }
}

impl Serialize for LinEndo {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinEndo {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        LinEndo::new(Matrix::deserialize(d)?).map_err(D::Error::custom)
    }
}

/// Permutation of `{1, 2, 3}`, stored 0-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Perm3([usize; 3]);

impl Perm3 {
    pub fn identity() -> Self {
        Perm3([0, 1, 2])
    }

    /// From the 1-based images `[σ(1), σ(2), σ(3)]`.
    pub fn from_images(images: [usize; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        for &v in &images {
            if !(1..=3).contains(&v) || seen[v - 1] {
                return Err(Error::InvalidArgument(format!("{images:?} is not a permutation of 1,2,3")));
            }
            seen[v - 1] = true;
        }
        Ok(Perm3(images.map(|v| v - 1)))
    }

    /// The transposition swapping `a` and `b` (1-based).
    pub fn transposition(a: usize, b: usize) -> Result<Self> {
        let mut im = [1, 2, 3];
        if !(1..=3).contains(&a) || !(1..=3).contains(&b) {
            return Err(Error::InvalidArgument(format!("({a} {b}) is not a transposition of 1,2,3")));
        }
        im.swap(a - 1, b - 1);
        Perm3::from_images(im)
    }

    pub fn all() -> [Perm3; 6] {
        [Perm3([0, 1, 2]), Perm3([1, 0, 2]), Perm3([0, 2, 1]), Perm3([2, 1, 0]), Perm3([1, 2, 0]), Perm3([2, 0, 1])]
    }

    /// 1-based images.
    pub fn images(&self) -> [usize; 3] {
        self.0.map(|v| v + 1)
    }

    /// `σ(i)` for a 1-based index `i`; `0` (the unit slot) is fixed.
    pub fn apply(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            self.0[i - 1] + 1
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Perm3) -> Perm3 {
        Perm3(other.0.map(|i| self.0[i]))
    }

    pub fn inverse(&self) -> Perm3 {
        let mut inv = [0; 3];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm3(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0 == [0, 1, 2]
    }
}

impl fmt::Display for Perm3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.images();
        write!(f, "[{a},{b},{c}]")
    }
}

impl Serialize for Perm3 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.images().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Perm3 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let im = <[usize; 3]>::deserialize(d)?;
        Perm3::from_images(im).map_err(D::Error::custom)
    }
}

/// Automorphism of `K`: the identity or `s ↦ −s` (which is `ex`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Psi {
    #[serde(rename = "id")]
    Identity,
    #[serde(rename = "neg_s")]
    NegS,
}

impl Psi {
    pub const ALL: [Psi; 2] = [Psi::Identity, Psi::NegS];

    pub fn apply(&self, k: &KElem) -> KElem {
        match self {
            Psi::Identity => k.clone(),
            Psi::NegS => k.ex(),
        }
    }

    pub fn compose(&self, other: &Psi) -> Psi {
        if self == other {
            Psi::Identity
        } else {
            Psi::NegS
        }
    }
}

/// Factor coordinates `(r₁, r₂, ψ, σ)` of an automorphism.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct AutFactors {
    pub r1: KElem,
    pub r2: KElem,
    pub psi: Psi,
    pub sigma: Perm3,
}

impl AutFactors {
    pub fn new(r1: KElem, r2: KElem, psi: Psi, sigma: Perm3) -> Result<Self> {
        let f = AutFactors { r1, r2, psi, sigma };
        f.validate()?;
        Ok(f)
    }

    pub fn identity() -> Self {
        AutFactors { r1: KElem::one(), r2: KElem::one(), psi: Psi::Identity, sigma: Perm3::identity() }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, r) in [("r1", &self.r1), ("r2", &self.r2)] {
            if !r.in_s1() {
                return Err(Error::NotInS1(format!("{name} = {r}")));
            }
        }
        Ok(())
    }

    /// The induced third scaling `r₃ = ex(r₁r₂)`.
    pub fn r3(&self) -> KElem {
        (&self.r1 * &self.r2).ex()
    }

    /// `[r₁, r₂, r₃]`.
    pub fn scalings(&self) -> [KElem; 3] {
        [self.r1.clone(), self.r2.clone(), self.r3()]
    }

    pub fn is_identity(&self) -> bool {
        self == &AutFactors::identity()
    }

    /// Random factors with `rᵢ = (a, a⁻¹)`, `a` a nonzero rational.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let psi = Psi::ALL[rng.gen_range(0..2)];
        let sigma = Perm3::all()[rng.gen_range(0..6)];
        AutFactors { r1: random_s1(rng), r2: random_s1(rng), psi, sigma }
    }
}

/// Random `(a, a⁻¹)` with `a` a nonzero rational.
pub fn random_s1<R: Rng + ?Sized>(rng: &mut R) -> KElem {
    let a = Scalar::random_nonzero_rational(rng);
    let inv = a.inv().expect("nonzero");
    KElem::new(a, inv)
}

/// `f_σ`: moves the coordinate on `xᵢ` to `x_{σ(i)}`, fixing the `K`-part.
pub fn f_sigma(sigma: &Perm3) -> LinEndo {
    let images: Vec<AlgElem> = (0..DIM)
        .map(|idx| {
            let b = AlgElem::basis(idx);
            let mut out = AlgElem::zero();
            for i in 0..4 {
                *out.coord_mut(sigma.apply(i)) = b.coord(i).clone();
            }
            out
        })
        .collect();
    LinEndo::from_images(&images).expect("8 images")
}

/// `θ(r₁, r₂, ψ)`: `s₀ + Σ sᵢxᵢ ↦ ψ(s₀) + Σ (ψ(sᵢ)rᵢ)xᵢ`.
pub fn theta_aut(r1: &KElem, r2: &KElem, psi: Psi) -> Result<LinEndo> {
    let f = AutFactors::new(r1.clone(), r2.clone(), psi, Perm3::identity())?;
    Ok(torus_twist(&f.scalings(), psi))
}

/// Diagonal-type map `s₀ + Σ sᵢxᵢ ↦ ψ(s₀) + Σ (ψ(sᵢ)rᵢ)xᵢ` for arbitrary
/// scalings; an automorphism only when the scalings come from [`theta_aut`].
fn torus_twist(r: &[KElem; 3], psi: Psi) -> LinEndo {
    let images: Vec<AlgElem> = (0..DIM)
        .map(|idx| {
            let b = AlgElem::basis(idx);
            let mut out = AlgElem::zero();
            out.k0 = psi.apply(&b.k0);
            for i in 1..4 {
                *out.coord_mut(i) = &psi.apply(b.coord(i)) * &r[i - 1];
            }
            out
        })
        .collect();
    LinEndo::from_images(&images).expect("8 images")
}

/// `θ(r₁, r₂, ψ) ∘ f_σ`.
pub fn realize(f: &AutFactors) -> Result<LinEndo> {
    Ok(theta_aut(&f.r1, &f.r2, f.psi)?.compose(&f_sigma(&f.sigma)))
}

/// Composition law of the factor coordinates:
/// `realize(a ⋆ b) = realize(a) ∘ realize(b)`.
pub fn semidirect_mul(a: &AutFactors, b: &AutFactors) -> AutFactors {
    let ra = a.scalings();
    let rb = b.scalings();
    let sa_inv = a.sigma.inverse();
    let r: [KElem; 3] = std::array::from_fn(|j| {
        let src = sa_inv.apply(j + 1) - 1;
        &ra[j] * &a.psi.apply(&rb[src])
    });
    let [r1, r2, _] = r;
    AutFactors { r1, r2, psi: a.psi.compose(&b.psi), sigma: a.sigma.compose(&b.sigma) }
}

/// Factors of `realize(a)⁻¹`.
pub fn inverse_factors(a: &AutFactors) -> AutFactors {
    let r = a.scalings();
    let q: [KElem; 3] = std::array::from_fn(|j| a.psi.apply(&r[a.sigma.apply(j + 1) - 1].ex()));
    let [r1, r2, _] = q;
    AutFactors { r1, r2, psi: a.psi, sigma: a.sigma.inverse() }
}

/// First violated condition of `φ` being an automorphism of `(A, −)` with
/// respect to `table`, or `None`.
pub fn automorphism_violation_with(table: &StructureTable, phi: &LinEndo) -> Option<String> {
    let imgs: Vec<Vec<Scalar>> = (0..DIM).map(|c| phi.matrix().column(c)).collect();
    for a in 0..DIM {
        for b in 0..DIM {
            let lhs = phi.apply_coords(table.entry(a, b));
            let rhs = table.product(&imgs[a], &imgs[b]);
            if lhs != rhs {
                return Some(format!(
                    "product not preserved on basis pair ({}, {})",
                    crate::algebra::basis_name(a),
                    crate::algebra::basis_name(b)
                ));
            }
        }
    }
    let bar = involution_matrix();
    if phi.matrix().mul(&bar).ok() != bar.mul(phi.matrix()).ok() {
        return Some("map does not commute with the involution".into());
    }
    if phi.matrix().determinant().map_or(true, |d| d.is_zero()) {
        return Some("map is not invertible".into());
    }
    None
}

pub fn automorphism_violation(phi: &LinEndo) -> Option<String> {
    automorphism_violation_with(&StructureTable::standard(), phi)
}

/// Invertible, multiplicative on all basis pairs, commuting with `−`.
pub fn is_automorphism(phi: &LinEndo) -> bool {
    automorphism_violation(phi).is_none()
}

/// First violated condition of `d` being a derivation of `(A, −)`.
pub fn derivation_violation_with(table: &StructureTable, d: &LinEndo) -> Option<String> {
    let imgs: Vec<Vec<Scalar>> = (0..DIM).map(|c| d.matrix().column(c)).collect();
    let basis: Vec<Vec<Scalar>> = (0..DIM).map(|c| AlgElem::basis(c).coords()).collect();
    for a in 0..DIM {
        for b in 0..DIM {
            let lhs = d.apply_coords(table.entry(a, b));
            let p1 = table.product(&imgs[a], &basis[b]);
            let p2 = table.product(&basis[a], &imgs[b]);
            let rhs: Vec<Scalar> = p1.iter().zip(&p2).map(|(u, v)| u + v).collect();
            if lhs != rhs {
                return Some(format!(
                    "Leibniz rule fails on basis pair ({}, {})",
                    crate::algebra::basis_name(a),
                    crate::algebra::basis_name(b)
                ));
            }
        }
    }
    let bar = involution_matrix();
    if d.matrix().mul(&bar).ok() != bar.mul(d.matrix()).ok() {
        return Some("map does not commute with the involution".into());
    }
    None
}

/// Leibniz rule on all basis pairs and `d ∘ − = − ∘ d`.
pub fn is_derivation(d: &LinEndo) -> bool {
    derivation_violation_with(&StructureTable::standard(), d).is_none()
}

/// Parameters `(λ, β)` of `d_{λ,β}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct DerParams {
    pub lambda: Scalar,
    pub beta: Scalar,
}

impl DerParams {
    pub fn new(lambda: Scalar, beta: Scalar) -> Self {
        DerParams { lambda, beta }
    }

    pub fn from_ints(lambda: i64, beta: i64) -> Self {
        DerParams::new(Scalar::from_int(lambda), Scalar::from_int(beta))
    }
}

/// `d_{λ,β}`: zero on `K`, `(r)xᵢ ↦ cᵢ·(rs)xᵢ` with `c = (λ, β, −λ−β)`.
pub fn d_param(p: &DerParams) -> LinEndo {
    let c = [p.lambda.clone(), p.beta.clone(), -(&p.lambda + &p.beta)];
    let s = KElem::s();
    let images: Vec<AlgElem> = (0..DIM)
        .map(|idx| {
            let b = AlgElem::basis(idx);
            let mut out = AlgElem::zero();
            for i in 1..4 {
                *out.coord_mut(i) = (b.coord(i) * &s).scale(&c[i - 1]);
            }
            out
        })
        .collect();
    LinEndo::from_images(&images).expect("8 images")
}

/// Linear system whose kernel is the derivation algebra, over the 64
/// unknowns `D[r][c]` in row-major order.
pub fn derivation_system(table: &StructureTable) -> Matrix {
    let n = DIM;
    let var = |r: usize, c: usize| r * n + c;
    let mut rows = Vec::with_capacity(n * n * n + n * n);
    for a in 0..n {
        for b in 0..n {
            for r in 0..n {
                let mut row = vec![Scalar::zero(); n * n];
                // D(e_a e_b)_r
                for (k, t) in table.entry(a, b).iter().enumerate() {
                    if !t.is_zero() {
                        row[var(r, k)] += t;
                    }
                }
                // − (D(e_a) e_b)_r − (e_a D(e_b))_r
                for p in 0..n {
                    let t1 = &table.entry(p, b)[r];
                    if !t1.is_zero() {
                        row[var(p, a)] -= t1;
                    }
                    let t2 = &table.entry(a, p)[r];
                    if !t2.is_zero() {
                        row[var(p, b)] -= t2;
                    }
                }
                rows.push(row);
            }
        }
    }
    let bar = involution_matrix();
    for r in 0..n {
        for c in 0..n {
            let mut row = vec![Scalar::zero(); n * n];
            for k in 0..n {
                let j = bar.get(k, c);
                if !j.is_zero() {
                    row[var(r, k)] += j;
                }
                let j = bar.get(r, k);
                if !j.is_zero() {
                    row[var(k, c)] -= j;
                }
            }
            rows.push(row);
        }
    }
    Matrix::from_rows(n * n, rows).expect("64 columns")
}

/// The derivation algebra as a subspace of the 64-dimensional space of
/// vectorised endomorphisms.
pub fn derivation_space() -> Subspace {
    derivation_space_with(&StructureTable::standard())
}

pub fn derivation_space_with(table: &StructureTable) -> Subspace {
    derivation_system(table).kernel()
}

/// Reads `(r₁, r₂, ψ, σ)` off an automorphism. The factors are accepted only
/// if they realize `φ` exactly, which also certifies that `φ` is an
/// automorphism; the full check runs only to explain a failure.
pub fn factor_automorphism(phi: &LinEndo) -> Result<AutFactors> {
    if let Some(f) = read_factors(phi)? {
        if realize(&f)? == *phi {
            return Ok(f);
        }
    }
    match automorphism_violation(phi) {
        Some(why) => Err(Error::NotAutomorphism(why)),
        None => Err(Error::Internal("automorphism does not factor as T(r) Psi F_sigma".into())),
    }
}

fn read_factors(phi: &LinEndo) -> Result<Option<AutFactors>> {
    let lines: Vec<Subspace> = (1..4).map(k_line).collect();
    let mut images = [0usize; 3];
    for i in 1..4 {
        let img = phi.apply(&AlgElem::x(i)).coords();
        let hits: Vec<usize> = (0..3).filter(|&j| lines[j].contains(&img).unwrap_or(false)).collect();
        match hits.as_slice() {
            [j] => images[i - 1] = j + 1,
            _ => return Ok(None),
        }
    }
    let Ok(sigma) = Perm3::from_images(images) else {
        return Ok(None);
    };
    let phi_s = phi.apply(&AlgElem::s());
    let psi = if phi_s == AlgElem::s() {
        Psi::Identity
    } else if phi_s == -&AlgElem::s() {
        Psi::NegS
    } else {
        return Ok(None);
    };
    let sinv = sigma.inverse();
    let r: Vec<KElem> = (1..4).map(|j| phi.apply(&AlgElem::x(sinv.apply(j))).coord(j).clone()).collect();
    let f = AutFactors { r1: r[0].clone(), r2: r[1].clone(), psi, sigma };
    Ok(f.validate().is_ok().then_some(f))
}

/// Whether `φ` maps each distinguished subspace onto itself.
pub fn preserves_canonical_subspaces(phi: &LinEndo) -> Vec<(SubspaceName, bool)> {
    [SubspaceName::S, SubspaceName::H, SubspaceName::K, SubspaceName::M]
        .into_iter()
        .map(|n| {
            let v = canonical_subspace(n);
            (n, phi.image(&v).map(|w| w == v).unwrap_or(false))
        })
        .collect()
}

/// `φ(x)φ(y)` against `φ(xy)` for arbitrary elements.
pub fn preserves_product(phi: &LinEndo, x: &AlgElem, y: &AlgElem) -> bool {
    phi.apply(&alg_multiply(x, y)) == alg_multiply(&phi.apply(x), &phi.apply(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn kq(a: i64, b: i64) -> KElem {
        // (a/b, b/a)
        KElem::new(Scalar::from_frac(a, b), Scalar::from_frac(b, a))
    }

    #[test]
    fn f_sigma_examples() {
        assert_eq!(f_sigma(&Perm3::identity()), LinEndo::identity());
        let t12 = Perm3::transposition(1, 2).unwrap();
        let f = f_sigma(&t12);
        assert_eq!(f.apply(&AlgElem::x(1)), AlgElem::x(2));
        assert_eq!(f.apply(&AlgElem::x(2)), AlgElem::x(1));
        assert_eq!(f.apply(&AlgElem::x(3)), AlgElem::x(3));
        let t23 = Perm3::transposition(2, 3).unwrap();
        assert_eq!(f_sigma(&t12).compose(&f_sigma(&t23)), f_sigma(&t12.compose(&t23)));
        for s in Perm3::all() {
            assert!(is_automorphism(&f_sigma(&s)));
        }
    }

    #[test]
    fn theta_examples() {
        let one = KElem::one();
        assert_eq!(theta_aut(&one, &one, Psi::Identity).unwrap(), LinEndo::identity());
        let s = KElem::s();
        assert!(matches!(theta_aut(&s, &s, Psi::Identity), Err(Error::NotInS1(_))));
        let t = theta_aut(&kq(2, 1), &one, Psi::Identity).unwrap();
        assert_eq!(t.apply(&AlgElem::x(1)), AlgElem::k_times(kq(2, 1), 1));
        assert_eq!(t.apply(&AlgElem::x(3)), AlgElem::k_times(kq(1, 2), 3));
        assert!(is_automorphism(&t));
        // θ(r₁,r₂,ψ)⁻¹ = θ(ψ⁻¹(ex r₁), ψ⁻¹(ex r₂), ψ⁻¹)
        let (r1, r2) = (kq(3, 2), kq(-5, 7));
        for psi in Psi::ALL {
            let th = theta_aut(&r1, &r2, psi).unwrap();
            let inv = theta_aut(&psi.apply(&r1.ex()), &psi.apply(&r2.ex()), psi).unwrap();
            assert_eq!(th.compose(&inv), LinEndo::identity());
        }
    }

    #[test]
    fn automorphism_examples() {
        assert!(is_automorphism(&LinEndo::identity()));
        let mut images: Vec<AlgElem> = (0..DIM).map(AlgElem::basis).collect();
        images[2] = images[2].scale(&Scalar::from_int(2));
        images[3] = images[3].scale(&Scalar::from_int(2));
        assert!(!is_automorphism(&LinEndo::from_images(&images).unwrap()));
        assert!(!is_automorphism(&LinEndo::zero()));
    }

    #[test]
    fn derivation_examples() {
        assert!(is_derivation(&LinEndo::zero()));
        assert!(is_derivation(&d_param(&DerParams::from_ints(1, 0))));
        assert!(is_derivation(&d_param(&DerParams::from_ints(0, 1))));
        assert!(!is_derivation(&LinEndo::identity()));
        assert_eq!(d_param(&DerParams::from_ints(0, 0)), LinEndo::zero());
        let d = d_param(&DerParams::from_ints(1, 0));
        let sx = |i| AlgElem::k_times(KElem::s(), i);
        assert_eq!(d.apply(&AlgElem::x(1)), sx(1));
        assert!(d.apply(&AlgElem::x(2)).is_zero());
        assert_eq!(d.apply(&AlgElem::x(3)), -&sx(3));
    }

    #[test]
    fn leibniz_on_x1_x2() {
        let p = DerParams::new(Scalar::from_frac(2, 3), Scalar::from_int(-5));
        let d = d_param(&p);
        let (x1, x2) = (AlgElem::x(1), AlgElem::x(2));
        let lhs = d.apply(&(&x1 * &x2));
        let rhs = &(&x1 * &d.apply(&x2)) + &(&d.apply(&x1) * &x2);
        assert_eq!(lhs, rhs);
        let expect = AlgElem::k_times(KElem::s().scale(&-(&p.lambda + &p.beta)), 3);
        assert_eq!(lhs, expect);
    }

    #[test]
    fn derivation_space_is_two_dimensional() {
        let space = derivation_space();
        assert_eq!(space.dim(), 2);
        let d10 = d_param(&DerParams::from_ints(1, 0));
        let d01 = d_param(&DerParams::from_ints(0, 1));
        let span = Subspace::span(64, &[d10.to_vec(), d01.to_vec()]).unwrap();
        assert_eq!(space, span);
        assert!(d10.bracket(&d01).is_zero());
        let k = canonical_subspace(SubspaceName::K);
        let m = canonical_subspace(SubspaceName::M);
        for v in space.basis_vectors() {
            let d = LinEndo::from_vec(v).unwrap();
            assert_eq!(d.image(&k).unwrap().dim(), 0);
            assert!(d.image(&m).unwrap().is_subspace_of(&m).unwrap());
        }
    }

    #[test]
    fn factor_examples() {
        assert_eq!(factor_automorphism(&LinEndo::identity()).unwrap(), AutFactors::identity());
        let t12 = Perm3::transposition(1, 2).unwrap();
        let f = factor_automorphism(&f_sigma(&t12)).unwrap();
        assert_eq!(f, AutFactors { sigma: t12, ..AutFactors::identity() });
        let cyc = Perm3::from_images([2, 3, 1]).unwrap();
        let want = AutFactors::new(kq(3, 1), kq(5, 1), Psi::NegS, cyc).unwrap();
        let phi = theta_aut(&want.r1, &want.r2, Psi::NegS).unwrap().compose(&f_sigma(&cyc));
        assert_eq!(factor_automorphism(&phi).unwrap(), want);
        assert!(matches!(factor_automorphism(&LinEndo::zero()), Err(Error::NotAutomorphism(_))));
    }

    #[test]
    fn semidirect_examples() {
        let a = AutFactors::new(kq(3, 2), kq(1, 4), Psi::NegS, Perm3::from_images([3, 1, 2]).unwrap()).unwrap();
        assert_eq!(semidirect_mul(&a, &AutFactors::identity()), a);
        let one = KElem::one();
        let p = AutFactors::new(kq(2, 1), one.clone(), Psi::Identity, Perm3::identity()).unwrap();
        let q = AutFactors::new(kq(7, 3), one.clone(), Psi::Identity, Perm3::identity()).unwrap();
        let pq = semidirect_mul(&p, &q);
        assert_eq!(pq.r1, &p.r1 * &q.r1);
        assert_eq!(pq.r2, one);
        assert!(semidirect_mul(&a, &inverse_factors(&a)).is_identity());
        assert!(semidirect_mul(&inverse_factors(&a), &a).is_identity());
    }

    #[test]
    fn json_shapes() {
        let f = AutFactors::new(kq(2, 1), KElem::one(), Psi::NegS, Perm3::from_images([2, 1, 3]).unwrap()).unwrap();
        let js = serde_json::to_value(&f).unwrap();
        assert_eq!(js["psi"], "neg_s");
        assert_eq!(js["sigma"], serde_json::json!([2, 1, 3]));
        assert_eq!(serde_json::from_value::<AutFactors>(js).unwrap(), f);
        assert!(serde_json::from_value::<Perm3>(serde_json::json!([1, 1, 3])).is_err());
        let e = serde_json::to_value(LinEndo::identity()).unwrap();
        assert_eq!(e["rows"], 8);
        assert!(serde_json::from_value::<LinEndo>(serde_json::to_value(Matrix::identity(3)).unwrap()).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn realize_factor_round_trip(seed in any::<u64>()) {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let f = AutFactors::random(&mut rng);
            let phi = realize(&f).unwrap();
            prop_assert!(is_automorphism(&phi));
            prop_assert_eq!(factor_automorphism(&phi).unwrap(), f);
            for (name, ok) in preserves_canonical_subspaces(&phi) {
                prop_assert!(ok, "{:?} not preserved", name);
            }
        }

        #[test]
        fn semidirect_law(seed in any::<u64>()) {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let a = AutFactors::random(&mut rng);
            let b = AutFactors::random(&mut rng);
            let lhs = realize(&semidirect_mul(&a, &b)).unwrap();
            let rhs = realize(&a).unwrap().compose(&realize(&b).unwrap());
            prop_assert_eq!(lhs, rhs);
            let inv = realize(&inverse_factors(&a)).unwrap();
            prop_assert_eq!(inv.compose(&realize(&a).unwrap()), LinEndo::identity());
        }

        #[test]
        fn automorphisms_preserve_random_products(seed in any::<u64>()) {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let phi = realize(&AutFactors::random(&mut rng)).unwrap();
            let x = AlgElem::random(&mut rng);
            let y = AlgElem::random(&mut rng);
            prop_assert!(preserves_product(&phi, &x, &y));
        }

        #[test]
        fn d_param_is_linear(l1 in -5i64..5, b1 in -5i64..5, l2 in -5i64..5, b2 in -5i64..5) {
            let d = |l, b| d_param(&DerParams::from_ints(l, b));
            prop_assert_eq!(d(l1 + l2, b1 + b2), d(l1, b1).add(&d(l2, b2)));
            prop_assert!(is_derivation(&d(l1, b1)));
        }
    }
}
