//! The standard gradings and the parametrised families of gradings.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{grading_from_homogeneous, AbGroup, Grading, GroupElem};
use crate::algebra::{k_line, AlgElem, KElem, DIM};
use crate::error::{Error, Result};
use crate::exactfield::Scalar;
use crate::linalg::Subspace;

/// The `Z₂²`-grading with `K` in degree `(0,0)` and `Kx₁`, `Kx₂`, `Kx₃` in
/// degrees `(0,1)`, `(1,0)`, `(1,1)`.
pub fn standard_quartic() -> Grading {
    let grp = AbGroup::cyclic(&[2, 2]).expect("valid orders");
    let degs = [[0, 0], [0, 1], [1, 0], [1, 1]];
    let comps = (0..4).map(|i| (GroupElem(degs[i].to_vec()), k_line(i))).collect();
    Grading::new(grp, comps).expect("well-formed")
}

/// The `Z₂`-grading with even part `K ⊕ Kxᵢ`, for `i ∈ {1, 2, 3}`.
pub fn structurable_s(i: usize) -> Result<Grading> {
    if !(1..=3).contains(&i) {
        return Err(Error::InvalidArgument(format!("index {i} is not in 1..=3")));
    }
    let grp = AbGroup::cyclic(&[2]).expect("valid order");
    let even = k_line(0).sum(&k_line(i))?;
    let mut odd = Subspace::zero(DIM);
    for j in (1..=3).filter(|&j| j != i) {
        odd = odd.sum(&k_line(j))?;
    }
    Grading::new(grp, vec![(GroupElem(vec![0]), even), (GroupElem(vec![1]), odd)])
}

/// Tags of the eight families.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    SQ1,
    SQ2,
    S3family,
    S1family,
    S2family,
    S3prime,
    T1,
    T2,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::SQ1,
        Family::SQ2,
        Family::S3family,
        Family::S1family,
        Family::S2family,
        Family::S3prime,
        Family::T1,
        Family::T2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::SQ1 => "SQ1",
            Family::SQ2 => "SQ2",
            Family::S3family => "S3family",
            Family::S1family => "S1family",
            Family::S2family => "S2family",
            Family::S3prime => "S3prime",
            Family::T1 => "T1",
            Family::T2 => "T2",
        }
    }

    /// Parameter names in the order used by [`FamilyParams::to_params`].
    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            Family::SQ1 | Family::T1 => &["g1", "g2"],
            Family::SQ2 => &["g", "g1", "g2"],
            Family::S3family => &["lambda", "h", "g", "f"],
            Family::S1family | Family::S2family | Family::T2 => &["h", "g"],
            Family::S3prime => &["h", "g", "f"],
        }
    }

    /// A smallest group carrying the family, with generic parameters.
    pub fn example(&self) -> (AbGroup, FamilyParams) {
        let grp = |t: &[i64]| AbGroup::cyclic(t).expect("valid orders");
        let e = |v: &[i64]| GroupElem(v.to_vec());
        match self {
            Family::SQ1 => (AbGroup::free(2), FamilyParams::SQ1 { g1: e(&[1, 0]), g2: e(&[0, 1]) }),
            Family::SQ2 => {
                (grp(&[2, 2, 2]), FamilyParams::SQ2 { g: e(&[1, 0, 0]), g1: e(&[0, 1, 0]), g2: e(&[0, 0, 1]) })
            }
            Family::S3family => {
                (grp(&[4]), FamilyParams::S3family { lambda: Scalar::one(), h: e(&[2]), g: e(&[1]), f: e(&[3]) })
            }
            Family::S1family => (grp(&[2, 4]), FamilyParams::S1family { h: e(&[1, 0]), g: e(&[0, 1]) }),
            Family::S2family => (grp(&[2, 4]), FamilyParams::S2family { h: e(&[1, 0]), g: e(&[0, 1]) }),
            Family::S3prime => {
                (grp(&[2, 2, 2]), FamilyParams::S3prime { h: e(&[1, 0, 0]), g: e(&[0, 1, 0]), f: e(&[0, 0, 1]) })
            }
            Family::T1 => (grp(&[3, 3]), FamilyParams::T1 { g1: e(&[1, 0]), g2: e(&[0, 1]) }),
            Family::T2 => (grp(&[2, 3]), FamilyParams::T2 { h: e(&[1, 0]), g: e(&[0, 1]) }),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown family tag {s:?}")))
    }
}

/// A family parameter: a group element or a field element.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Elem(GroupElem),
    Scalar(Scalar),
}

/// Family tag together with its parameters.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum FamilyParams {
    SQ1 { g1: GroupElem, g2: GroupElem },
    SQ2 { g: GroupElem, g1: GroupElem, g2: GroupElem },
    S3family { lambda: Scalar, h: GroupElem, g: GroupElem, f: GroupElem },
    S1family { h: GroupElem, g: GroupElem },
    S2family { h: GroupElem, g: GroupElem },
    S3prime { h: GroupElem, g: GroupElem, f: GroupElem },
    T1 { g1: GroupElem, g2: GroupElem },
    T2 { h: GroupElem, g: GroupElem },
}

impl FamilyParams {
    pub fn family(&self) -> Family {
        match self {
            FamilyParams::SQ1 { .. } => Family::SQ1,
            FamilyParams::SQ2 { .. } => Family::SQ2,
            FamilyParams::S3family { .. } => Family::S3family,
            FamilyParams::S1family { .. } => Family::S1family,
            FamilyParams::S2family { .. } => Family::S2family,
            FamilyParams::S3prime { .. } => Family::S3prime,
            FamilyParams::T1 { .. } => Family::T1,
            FamilyParams::T2 { .. } => Family::T2,
        }
    }

    pub fn to_params(&self) -> Vec<Param> {
        let e = |g: &GroupElem| Param::Elem(g.clone());
        match self {
            FamilyParams::SQ1 { g1, g2 } | FamilyParams::T1 { g1, g2 } => vec![e(g1), e(g2)],
            FamilyParams::SQ2 { g, g1, g2 } => vec![e(g), e(g1), e(g2)],
            FamilyParams::S3family { lambda, h, g, f } => {
                vec![Param::Scalar(lambda.clone()), e(h), e(g), e(f)]
            }
            FamilyParams::S1family { h, g } | FamilyParams::S2family { h, g } | FamilyParams::T2 { h, g } => {
                vec![e(h), e(g)]
            }
            FamilyParams::S3prime { h, g, f } => vec![e(h), e(g), e(f)],
        }
    }

    pub fn from_params(family: Family, params: &[Param]) -> Result<Self> {
        let names = family.param_names();
        if params.len() != names.len() {
            return Err(Error::InvalidArgument(format!(
                "{family} takes {} parameters ({}), got {}",
                names.len(),
                names.join(", "),
                params.len()
            )));
        }
        let elem = |k: usize| match &params[k] {
            Param::Elem(g) => Ok(g.clone()),
            Param::Scalar(_) => {
                Err(Error::InvalidArgument(format!("parameter {} of {family} must be a group element", names[k])))
            }
        };
        Ok(match family {
            Family::SQ1 => FamilyParams::SQ1 { g1: elem(0)?, g2: elem(1)? },
            Family::SQ2 => FamilyParams::SQ2 { g: elem(0)?, g1: elem(1)?, g2: elem(2)? },
            Family::S3family => {
                let lambda = match &params[0] {
                    Param::Scalar(s) => s.clone(),
                    Param::Elem(_) => {
                        return Err(Error::InvalidArgument("parameter lambda of S3family must be a scalar".into()))
                    }
                };
                FamilyParams::S3family { lambda, h: elem(1)?, g: elem(2)?, f: elem(3)? }
            }
            Family::S1family => FamilyParams::S1family { h: elem(0)?, g: elem(1)? },
            Family::S2family => FamilyParams::S2family { h: elem(0)?, g: elem(1)? },
            Family::S3prime => FamilyParams::S3prime { h: elem(0)?, g: elem(1)?, f: elem(2)? },
            Family::T1 => FamilyParams::T1 { g1: elem(0)?, g2: elem(1)? },
            Family::T2 => FamilyParams::T2 { h: elem(0)?, g: elem(1)? },
        })
    }

    /// Reduces every group parameter into `group`.
    fn reduced(&self, group: &AbGroup) -> Result<Self> {
        let r = |g: &GroupElem| group.elem(g.coords());
        Ok(match self {
            FamilyParams::SQ1 { g1, g2 } => FamilyParams::SQ1 { g1: r(g1)?, g2: r(g2)? },
            FamilyParams::SQ2 { g, g1, g2 } => FamilyParams::SQ2 { g: r(g)?, g1: r(g1)?, g2: r(g2)? },
            FamilyParams::S3family { lambda, h, g, f } => {
                FamilyParams::S3family { lambda: lambda.clone(), h: r(h)?, g: r(g)?, f: r(f)? }
            }
            FamilyParams::S1family { h, g } => FamilyParams::S1family { h: r(h)?, g: r(g)? },
            FamilyParams::S2family { h, g } => FamilyParams::S2family { h: r(h)?, g: r(g)? },
            FamilyParams::S3prime { h, g, f } => FamilyParams::S3prime { h: r(h)?, g: r(g)?, f: r(f)? },
            FamilyParams::T1 { g1, g2 } => FamilyParams::T1 { g1: r(g1)?, g2: r(g2)? },
            FamilyParams::T2 { h, g } => FamilyParams::T2 { h: r(h)?, g: r(g)? },
        })
    }

    /// Checks the parameter preconditions of the family.
    pub fn check_constraints(&self, group: &AbGroup) -> Result<()> {
        let p = self.reduced(group)?;
        let fam = self.family();
        let fail = |why: String| Err(Error::ConstraintViolation(format!("{fam}: {why}")));
        let order = |name: &str, g: &GroupElem, want: u64| -> Result<()> {
            match group.order(g) {
                Some(n) if n == want => Ok(()),
                Some(n) => fail(format!("{name} = {g} must have order {want}, has order {n}")),
                None => fail(format!("{name} = {g} must have order {want}, has infinite order")),
            }
        };
        let two = |g: &GroupElem| group.times(2, g);
        match &p {
            FamilyParams::SQ1 { .. } => Ok(()),
            FamilyParams::SQ2 { g, g1, g2 } => {
                order("g", g, 2)?;
                for (name, x) in [("g1", g1), ("g2", g2)] {
                    if !group.is_identity(&two(x)) {
                        return fail(format!("{name} = {x} must satisfy {name}^2 = e since x_i^2 = 1"));
                    }
                }
                Ok(())
            }
            FamilyParams::S3family { lambda, h, g, f } => {
                if lambda.is_zero() {
                    return fail("lambda must be nonzero".into());
                }
                let hinv = group.neg(h);
                if two(g) != hinv || two(f) != hinv {
                    return fail(format!("g^2 = f^2 = h^-1 is required (g = {g}, f = {f}, h = {h})"));
                }
                if g == f {
                    return fail(format!("g and f must differ (both {g})"));
                }
                Ok(())
            }
            FamilyParams::S1family { h, .. } => order("h", h, 2),
            FamilyParams::S2family { h, g } => {
                order("h", h, 2)?;
                order("g", g, 4)
            }
            FamilyParams::S3prime { h, g, f } => {
                order("h", h, 2)?;
                order("g", g, 2)?;
                order("f", f, 2)
            }
            FamilyParams::T1 { g1, g2 } => {
                order("g1", g1, 3)?;
                order("g2", g2, 3)?;
                let g3 = group.neg(&group.add(g1, g2));
                if g1 == g2 || g2 == &g3 || g1 == &g3 {
                    return fail(format!("g1 = {g1}, g2 = {g2} and (g1 g2)^-1 = {g3} must be pairwise distinct"));
                }
                Ok(())
            }
            FamilyParams::T2 { h, g } => {
                order("h", h, 2)?;
                order("g", g, 3)
            }
        }
    }

    /// The defining homogeneous elements and their degrees.
    pub fn seeds(&self, group: &AbGroup) -> Result<Vec<(AlgElem, GroupElem)>> {
        let p = self.reduced(group)?;
        let e = group.identity();
        let ep = |i| AlgElem::k_times(KElem::e_plus(), i);
        let em = |i| AlgElem::k_times(KElem::e_minus(), i);
        let x = AlgElem::x;
        let scaled = |c: &Scalar, i| AlgElem::x(i).scale(c);
        let s = AlgElem::s();
        let plus = |a: &AlgElem, b: &AlgElem| a + b;
        let e_plus_times = |v: &AlgElem| v.k_scale(&KElem::e_plus());
        let zeta = Scalar::omega();
        let zeta2 = &zeta * &zeta;
        let lin3 = |a: &Scalar, b: &Scalar, c: &Scalar| plus(&plus(&scaled(a, 1), &scaled(b, 2)), &scaled(c, 3));
        Ok(match &p {
            FamilyParams::SQ1 { g1, g2 } => {
                let g12 = group.add(g1, g2);
                vec![
                    (s, e),
                    (ep(1), g1.clone()),
                    (ep(2), g2.clone()),
                    (ep(3), group.neg(&g12)),
                    (em(1), group.neg(g1)),
                    (em(2), group.neg(g2)),
                    (em(3), g12),
                ]
            }
            FamilyParams::SQ2 { g, g1, g2 } => {
                let g12 = group.add(g1, g2);
                let mut out = vec![(s.clone(), g.clone())];
                for (i, d) in [(1, g1.clone()), (2, g2.clone()), (3, g12)] {
                    out.push((x(i), d.clone()));
                    out.push((&s * &x(i), group.add(g, &d)));
                }
                out
            }
            FamilyParams::S3family { lambda, h, g, f } => {
                let linv = lambda.inv()?;
                vec![
                    (s, e),
                    (ep(1), h.clone()),
                    (em(1), group.neg(h)),
                    (e_plus_times(&plus(&x(2), &scaled(lambda, 3))), g.clone()),
                    (e_plus_times(&plus(&scaled(&-&linv, 2), &x(3))), f.clone()),
                ]
            }
            FamilyParams::S1family { h, g } => {
                vec![(s, h.clone()), (plus(&ep(2), &em(3)), g.clone()), (plus(&em(2), &ep(3)), group.neg(g))]
            }
            FamilyParams::S2family { h, g } => {
                vec![(s, h.clone()), (x(1), group.times(2, g)), (plus(&x(2), &scaled(&Scalar::i(), 3)), g.clone())]
            }
            FamilyParams::S3prime { h, g, f } => {
                vec![(s, h.clone()), (plus(&x(2), &x(3)), g.clone()), (&x(2) - &x(3), f.clone())]
            }
            FamilyParams::T1 { g1, g2 } => {
                let one = Scalar::one();
                vec![
                    (s, e),
                    (e_plus_times(&lin3(&one, &zeta, &zeta2)), g1.clone()),
                    (e_plus_times(&lin3(&one, &zeta2, &zeta)), g2.clone()),
                    (e_plus_times(&lin3(&one, &one, &one)), group.neg(&group.add(g1, g2))),
                ]
            }
            FamilyParams::T2 { h, g } => {
                vec![(s, h.clone()), (lin3(&Scalar::one(), &zeta, &zeta2), g.clone())]
            }
        })
    }

    /// Checks the preconditions, then completes the seeds to a grading.
    pub fn build(&self, group: &AbGroup) -> Result<Grading> {
        self.check_constraints(group)?;
        let seeds = self.seeds(group)?;
        grading_from_homogeneous(group, &seeds)
    }
}

/// Builds the grading of `family` over `group` from its parameters.
pub fn make_family(family: Family, group: &AbGroup, params: &[Param]) -> Result<Grading> {
    FamilyParams::from_params(family, params)?.build(group)
}

#[cfg(test)]
mod tests {
    use super::super::{deg_of_s, grading_validate, lemma_checks};
    use super::*;

    #[test]
    fn every_example_instance_is_valid() {
        for fam in Family::ALL {
            let (grp, p) = fam.example();
            let g = p.build(&grp).unwrap_or_else(|e| panic!("{fam}: {e}"));
            assert!(grading_validate(&g).valid, "{fam}");
            for (name, ok) in lemma_checks(&g) {
                assert!(ok, "{fam}: {name}");
            }
        }
    }

    #[test]
    fn sq1_degrees() {
        let (grp, p) = Family::SQ1.example();
        let g = p.build(&grp).unwrap();
        let nontrivial = g.support().iter().filter(|d| !grp.is_identity(d)).count();
        assert_eq!(nontrivial, 6);
        let em3 = AlgElem::k_times(KElem::e_minus(), 3);
        assert_eq!(g.degree_of(&em3.coords()), Some(GroupElem(vec![1, 1])));
        assert_eq!(g.components().len(), 7);
    }

    #[test]
    fn t2_degree_of_generator() {
        let (grp, p) = Family::T2.example();
        let g = p.build(&grp).unwrap();
        let w = Scalar::omega();
        let v = &(&AlgElem::x(1) + &AlgElem::x(2).scale(&w)) + &AlgElem::x(3).scale(&(&w * &w));
        assert_eq!(g.degree_of(&v.coords()), Some(GroupElem(vec![0, 1])));
    }

    #[test]
    fn deg_of_s_matches_parameters() {
        let (grp, p) = Family::SQ2.example();
        assert_eq!(deg_of_s(&p.build(&grp).unwrap()).unwrap(), GroupElem(vec![1, 0, 0]));
        let (grp, p) = Family::S1family.example();
        assert_eq!(deg_of_s(&p.build(&grp).unwrap()).unwrap(), GroupElem(vec![1, 0]));
        let q = standard_quartic();
        assert!(q.group().is_identity(&deg_of_s(&q).unwrap()));
    }

    #[test]
    fn constraint_violations_are_named() {
        let grp = AbGroup::cyclic(&[2, 4]).unwrap();
        let p = FamilyParams::S2family { h: GroupElem(vec![1, 0]), g: GroupElem(vec![0, 2]) };
        match p.build(&grp) {
            Err(Error::ConstraintViolation(m)) => assert!(m.contains("order 4"), "{m}"),
            other => panic!("{other:?}"),
        }
        let t1 = FamilyParams::T1 { g1: GroupElem(vec![1, 0]), g2: GroupElem(vec![1, 0]) };
        assert!(matches!(t1.build(&AbGroup::cyclic(&[3, 3]).unwrap()), Err(Error::ConstraintViolation(_))));
        let s3 = FamilyParams::S3family {
            lambda: Scalar::zero(),
            h: GroupElem(vec![2]),
            g: GroupElem(vec![1]),
            f: GroupElem(vec![3]),
        };
        assert!(matches!(s3.build(&AbGroup::cyclic(&[4]).unwrap()), Err(Error::ConstraintViolation(_))));
    }

    #[test]
    fn param_round_trip_and_json() {
        for fam in Family::ALL {
            let (_, p) = fam.example();
            let ps = p.to_params();
            assert_eq!(FamilyParams::from_params(fam, &ps).unwrap(), p);
            let js = serde_json::to_string(&ps).unwrap();
            let back: Vec<Param> = serde_json::from_str(&js).unwrap();
            assert_eq!(back, ps);
        }
        assert_eq!("t2".parse::<Family>().unwrap(), Family::T2);
        assert_eq!(serde_json::to_value(Family::S3prime).unwrap(), "S3prime");
    }

    #[test]
    fn structurable_gradings() {
        for i in 1..=3 {
            assert!(grading_validate(&structurable_s(i).unwrap()).valid);
        }
        assert!(structurable_s(4).is_err());
    }
}
