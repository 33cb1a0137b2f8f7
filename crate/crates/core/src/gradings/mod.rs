//! Group gradings of `(A, −)`.
//!
//! A grading is a decomposition `A = ⊕ A_g` over an abelian group with
//! `A_g A_h ⊆ A_{g+h}` and every `A_g` stable under the involution.

mod classify;
mod families;
mod group;
mod iso;

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{alg_multiply, bilinear_b, canonical_subspace, k_line, AlgElem, SubspaceName, DIM};
use crate::error::{Error, Result};
use crate::exactfield::Scalar;
use crate::linalg::{Matrix, Subspace};
use crate::maps::{realize, AutFactors, LinEndo};

pub use classify::{classify, Classification};
pub use families::{make_family, standard_quartic, structurable_s, Family, FamilyParams, Param};
pub use group::{AbGroup, GroupElem};
pub use iso::grading_isomorphism;

/// One homogeneous component `A_g`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Component {
    pub degree: GroupElem,
    pub space: Subspace,
}

/// A decomposition of `A` indexed by group elements. Components are kept
/// sorted by degree and are nonzero; validity is checked by
/// [`grading_validate`], not by construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Grading {
    group: AbGroup,
    components: Vec<Component>,
}

impl Grading {
    /// Builds a grading, reducing degrees into the group and dropping zero
    /// components. Components with the same degree are rejected.
    pub fn new(group: AbGroup, components: Vec<(GroupElem, Subspace)>) -> Result<Self> {
        group.validate()?;
        let mut comps: Vec<Component> = Vec::new();
        for (degree, space) in components {
            let degree = group.elem(degree.coords())?;
            if space.ambient_dim() != DIM {
                return Err(Error::DimensionMismatch { expected: DIM, found: space.ambient_dim() });
            }
            if space.dim() == 0 {
                continue;
            }
            if comps.iter().any(|c| c.degree == degree) {
                return Err(Error::Inconsistency(format!("degree {degree} is listed twice")));
            }
            comps.push(Component { degree, space });
        }
        comps.sort_by(|a, b| a.degree.cmp(&b.degree));
        Ok(Grading { group, components: comps })
    }

    pub fn group(&self) -> &AbGroup {
        &self.group
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, degree: &GroupElem) -> Option<&Subspace> {
        self.components.iter().find(|c| &c.degree == degree).map(|c| &c.space)
    }

    /// Degrees with nonzero components, sorted.
    pub fn support(&self) -> Vec<GroupElem> {
        self.components.iter().map(|c| c.degree.clone()).collect()
    }

    /// Dimension of each nonzero component.
    pub fn dims(&self) -> BTreeMap<GroupElem, usize> {
        self.components.iter().map(|c| (c.degree.clone(), c.space.dim())).collect()
    }

    /// Degree of a homogeneous nonzero vector.
    pub fn degree_of(&self, v: &[Scalar]) -> Option<GroupElem> {
        if v.iter().all(Scalar::is_zero) {
            return None;
        }
        self.components.iter().find(|c| c.space.contains(v).unwrap_or(false)).map(|c| c.degree.clone())
    }

    /// Image of the grading under a linear map: `φ(A)_g = φ(A_g)`.
    pub fn transform(&self, phi: &LinEndo) -> Result<Grading> {
        let comps =
            self.components.iter().map(|c| Ok((c.degree.clone(), phi.image(&c.space)?))).collect::<Result<Vec<_>>>()?;
        Grading::new(self.group.clone(), comps)
    }

    /// Image under the automorphism with the given factors.
    pub fn apply_automorphism(&self, f: &AutFactors) -> Result<Grading> {
        self.transform(&realize(f)?)
    }

    /// Pushes the grading forward along a group homomorphism given by the
    /// images of the coordinate generators.
    pub fn push_forward(&self, target: &AbGroup, images: &[GroupElem]) -> Result<Grading> {
        if images.len() != self.group.rank() {
            return Err(Error::InvalidArgument("one image per generator is required".into()));
        }
        let mut merged: BTreeMap<GroupElem, Subspace> = BTreeMap::new();
        for c in &self.components {
            let mut d = target.identity();
            for (k, img) in c.degree.coords().iter().zip(images) {
                d = target.add(&d, &target.times(*k, img));
            }
            let entry = merged.entry(d).or_insert_with(|| Subspace::zero(DIM));
            *entry = entry.sum(&c.space)?;
        }
        Grading::new(target.clone(), merged.into_iter().collect())
    }
}

#[derive(Serialize, Deserialize)]
struct ComponentDoc {
    degree: GroupElem,
    basis: Vec<AlgElem>,
}

#[derive(Serialize, Deserialize)]
struct GradingDoc {
    group: AbGroup,
    components: Vec<ComponentDoc>,
}

impl Serialize for Grading {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GradingDoc {
            group: self.group.clone(),
            components: self
                .components
                .iter()
                .map(|c| ComponentDoc {
                    degree: c.degree.clone(),
                    basis: c
                        .space
                        .basis_vectors()
                        .iter()
                        .map(|v| AlgElem::from_coords(v).expect("8 coordinates"))
                        .collect(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Grading {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = GradingDoc::deserialize(d)?;
        let comps = doc
            .components
            .into_iter()
            .map(|c| {
                let vs: Vec<Vec<Scalar>> = c.basis.iter().map(AlgElem::coords).collect();
                Ok((c.degree, Subspace::span(DIM, &vs)?))
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Grading::new(doc.group, comps).map_err(D::Error::custom)
    }
}

/// Outcome of [`grading_validate`].
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub diagnostics: Vec<String>,
}

/// Checks the direct-sum decomposition, involution closure and product
/// closure; the first failure of each kind is reported.
pub fn grading_validate(g: &Grading) -> ValidationReport {
    let mut diagnostics = Vec::new();
    let total: usize = g.components.iter().map(|c| c.space.dim()).sum();
    let mut sum = Subspace::zero(DIM);
    for c in &g.components {
        sum = sum.sum(&c.space).expect("ambient 8");
    }
    if total != DIM || sum.dim() != DIM {
        diagnostics.push(format!(
            "components do not form a direct sum of A: dimensions add to {total}, span has dimension {}",
            sum.dim()
        ));
    }
    let bar = crate::algebra::involution_matrix();
    for c in &g.components {
        let img = c.space.image(&bar).expect("8x8");
        if img != c.space {
            diagnostics.push(format!("component of degree {} is not closed under the involution", c.degree));
            break;
        }
    }
    'outer: for a in &g.components {
        let av: Vec<AlgElem> = elems(&a.space);
        for b in &g.components {
            let target_deg = g.group.add(&a.degree, &b.degree);
            let target = g.component(&target_deg);
            for (i, x) in av.iter().enumerate() {
                for (j, y) in elems(&b.space).iter().enumerate() {
                    let p = alg_multiply(x, y);
                    if p.is_zero() {
                        continue;
                    }
                    let ok = target.map(|t| t.contains(&p.coords()).unwrap_or(false)).unwrap_or(false);
                    if !ok {
                        diagnostics.push(format!(
                            "product closure fails for degrees ({}, {}): basis vector {} of A_{} times basis vector {} of A_{} is not in A_{}",
                            a.degree, b.degree, i, a.degree, j, b.degree, target_deg
                        ));
                        break 'outer;
                    }
                }
            }
        }
    }
    ValidationReport { valid: diagnostics.is_empty(), diagnostics }
}

fn elems(v: &Subspace) -> Vec<AlgElem> {
    v.basis_vectors().iter().map(|c| AlgElem::from_coords(c).expect("8 coordinates")).collect()
}

/// Completes homogeneous seeds to a grading: `1` is placed in degree `e`,
/// then the homogeneous spans are closed under the involution and under
/// products of homogeneous basis vectors until nothing changes.
pub fn grading_from_homogeneous(group: &AbGroup, assignments: &[(AlgElem, GroupElem)]) -> Result<Grading> {
    group.validate()?;
    let mut spaces: BTreeMap<GroupElem, Subspace> = BTreeMap::new();
    let put = |spaces: &mut BTreeMap<GroupElem, Subspace>, d: GroupElem, v: Vec<Scalar>| -> Result<bool> {
        let entry = spaces.entry(d).or_insert_with(|| Subspace::zero(DIM));
        if entry.contains(&v)? {
            return Ok(false);
        }
        *entry = entry.sum(&Subspace::span(DIM, &[v])?)?;
        Ok(true)
    };
    put(&mut spaces, group.identity(), AlgElem::one().coords())?;
    for (x, d) in assignments {
        let d = group.elem(d.coords())?;
        if x.is_zero() {
            return Err(Error::InvalidArgument(format!("zero vector assigned degree {d}")));
        }
        put(&mut spaces, d, x.coords())?;
    }
    check_direct(&spaces)?;
    let bar = crate::algebra::involution_matrix();
    loop {
        let mut changed = false;
        let snapshot: Vec<(GroupElem, Vec<AlgElem>)> = spaces.iter().map(|(d, v)| (d.clone(), elems(v))).collect();
        for (d, vs) in &snapshot {
            for v in vs {
                let w = bar.mul_vec(&v.coords())?;
                changed |= put(&mut spaces, d.clone(), w)?;
            }
        }
        for (d1, v1) in &snapshot {
            for (d2, v2) in &snapshot {
                let d = group.add(d1, d2);
                for x in v1 {
                    for y in v2 {
                        let p = alg_multiply(x, y);
                        if !p.is_zero() {
                            changed |= put(&mut spaces, d.clone(), p.coords())?;
                        }
                    }
                }
            }
        }
        check_direct(&spaces)?;
        if !changed {
            break;
        }
    }
    let total: usize = spaces.values().map(Subspace::dim).sum();
    if total < DIM {
        return Err(Error::CompletionFailure { dim: total });
    }
    let g = Grading::new(group.clone(), spaces.into_iter().collect())?;
    let report = grading_validate(&g);
    if !report.valid {
        return Err(Error::Inconsistency(report.diagnostics.join("; ")));
    }
    Ok(g)
}

fn check_direct(spaces: &BTreeMap<GroupElem, Subspace>) -> Result<()> {
    let mut sum = Subspace::zero(DIM);
    let mut total = 0;
    for (d, v) in spaces {
        total += v.dim();
        sum = sum.sum(v)?;
        if sum.dim() != total {
            return Err(Error::Inconsistency(format!(
                "the homogeneous span of degree {d} meets the other degrees: closure forces a vector into two degrees"
            )));
        }
    }
    Ok(())
}

/// Whether `v` is a graded subspace: `Σ_g dim(v ∩ A_g) = dim v`.
pub fn is_graded_subspace(g: &Grading, v: &Subspace) -> bool {
    let total: usize = g.components.iter().map(|c| c.space.intersection(v).map(|w| w.dim()).unwrap_or(0)).sum();
    total == v.dim()
}

/// Degree of `s`; `2·deg(s) = e` is checked.
pub fn deg_of_s(g: &Grading) -> Result<GroupElem> {
    let d = g.degree_of(&AlgElem::s().coords()).ok_or_else(|| Error::Internal("s is not homogeneous".into()))?;
    if !g.group.is_identity(&g.group.times(2, &d)) {
        return Err(Error::Internal(format!("deg(s) = {d} does not square to e")));
    }
    Ok(d)
}

/// `Σ_{g,h} dim(A_g ∩ B_h) = 8`.
pub fn compatibility_check(a: &Grading, b: &Grading) -> bool {
    let mut total = 0;
    for ca in &a.components {
        for cb in &b.components {
            total += ca.space.intersection(&cb.space).map(|w| w.dim()).unwrap_or(0);
        }
    }
    total == DIM
}

/// The joint grading by `G × H` of two compatible gradings.
pub fn joint_grading(a: &Grading, b: &Grading) -> Result<Grading> {
    if !compatibility_check(a, b) {
        return Err(Error::InvalidArgument("gradings are not compatible".into()));
    }
    let group = a.group.product(&b.group);
    let mut comps = Vec::new();
    for ca in &a.components {
        for cb in &b.components {
            let w = ca.space.intersection(&cb.space)?;
            if w.dim() > 0 {
                comps.push((a.group.pair(&b.group, &ca.degree, &cb.degree), w));
            }
        }
    }
    Grading::new(group, comps)
}

/// Every component of `fine` lies in some component of `coarse`.
pub fn coarsening_check(coarse: &Grading, fine: &Grading) -> bool {
    fine.components.iter().all(|f| coarse.components.iter().any(|c| f.space.is_subspace_of(&c.space).unwrap_or(false)))
}

/// Whether `M₊` and `M₋` are graded subspaces.
pub fn m_sign_components_graded(g: &Grading) -> bool {
    is_graded_subspace(g, &canonical_subspace(SubspaceName::Mplus))
        && is_graded_subspace(g, &canonical_subspace(SubspaceName::Mminus))
}

/// Homogeneity of `b`: for homogeneous pieces `M ∩ A_g` and `M ∩ A_h`,
/// `b` vanishes on them exactly when `g + h ≠ e`.
pub fn b_homogeneity_check(g: &Grading) -> bool {
    b_homogeneity_violation(g).is_none()
}

pub fn b_homogeneity_violation(g: &Grading) -> Option<String> {
    let m = canonical_subspace(SubspaceName::M);
    let pieces: Vec<(GroupElem, Vec<AlgElem>)> = g
        .components
        .iter()
        .filter_map(|c| {
            let w = c.space.intersection(&m).ok()?;
            (w.dim() > 0).then(|| (c.degree.clone(), elems(&w)))
        })
        .collect();
    for (d1, v1) in &pieces {
        for (d2, v2) in &pieces {
            let vanishes =
                v1.iter().all(|x| v2.iter().all(|y| bilinear_b(x, y).map(|r| r.b.is_zero()).unwrap_or(false)));
            let opposite = g.group.is_identity(&g.group.add(d1, d2));
            if vanishes == opposite {
                return Some(format!(
                    "b on (M_{d1}, M_{d2}) {} although {d1} + {d2} {} e",
                    if vanishes { "vanishes" } else { "is nonzero" },
                    if opposite { "=" } else { "!=" }
                ));
            }
        }
    }
    None
}

/// Rank of the Gram matrix of `b` on the canonical basis of `M`.
pub fn gram_rank_on_m() -> usize {
    let ms: Vec<AlgElem> = (2..DIM).map(AlgElem::basis).collect();
    let rows: Vec<Vec<Scalar>> =
        ms.iter().map(|x| ms.iter().map(|y| bilinear_b(x, y).expect("in M").b).collect()).collect();
    Matrix::from_rows(6, rows).expect("6x6").rank()
}

/// Named structural checks that hold for every grading of `(A, −)`.
pub fn lemma_checks(g: &Grading) -> Vec<(String, bool)> {
    let mut out = Vec::new();
    for name in [SubspaceName::K, SubspaceName::M, SubspaceName::S, SubspaceName::H] {
        out.push((format!("{name:?} is a graded subspace"), is_graded_subspace(g, &canonical_subspace(name))));
    }
    let ds = deg_of_s(g);
    out.push(("deg(s) squares to e".into(), ds.is_ok()));
    let s_trivial = ds.as_ref().map(|d| g.group.is_identity(d)).unwrap_or(false);
    out.push(("M+ and M- graded iff deg(s) = e".into(), ds.is_ok() && m_sign_components_graded(g) == s_trivial));
    out.push(("b is homogeneous".into(), b_homogeneity_check(g)));
    out.push(("Gram matrix of b on M has rank 6".into(), gram_rank_on_m() == 6));
    out
}

/// `x = e₊(λ₁x₁ + λ₂x₂ + λ₃x₃)` together with `(x²)²` and `b(x, x²)`; the
/// shape of homogeneous elements in the order-three families.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CubicProbe {
    pub x: AlgElem,
    pub square_of_square: AlgElem,
    pub b_x_square: Scalar,
}

pub fn cubic_probe(lambda: &[Scalar; 3]) -> Result<CubicProbe> {
    let mut v = AlgElem::zero();
    for (i, l) in lambda.iter().enumerate() {
        v = &v + &AlgElem::x(i + 1).scale(l);
    }
    let x = v.k_scale(&crate::algebra::KElem::e_plus());
    let sq = alg_multiply(&x, &x);
    Ok(CubicProbe { square_of_square: alg_multiply(&sq, &sq), b_x_square: bilinear_b(&x, &sq)?.b, x })
}

/// The `K`-line `Kxᵢ` as a subspace; re-exported for callers that inspect
/// components.
pub fn kx(i: usize) -> Subspace {
    k_line(i)
}
