//! Recognising a grading as a member of one of the eight families.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::families::{Family, FamilyParams, Param};
use super::iso::IsoTarget;
use super::{deg_of_s, grading_validate, AbGroup, Grading, GroupElem};
use crate::error::{Error, Result};
use crate::exactfield::Scalar;
use crate::maps::AutFactors;

/// A family, its parameters (in [`Family::param_names`] order) and an
/// automorphism taking the family member onto the input.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Classification {
    pub family: Family,
    pub params: Vec<Param>,
    pub witness: AutFactors,
    pub support: Vec<GroupElem>,
}

impl Classification {
    /// Rebuilds the family member and checks that the witness maps it onto
    /// `input`.
    pub fn verify(&self, input: &Grading) -> Result<bool> {
        let canonical = FamilyParams::from_params(self.family, &self.params)?.build(input.group())?;
        Ok(canonical.apply_automorphism(&self.witness)? == *input)
    }
}

/// Families whose degree of `s` agrees with the input; the witness check
/// makes the order irrelevant to correctness.
fn family_order(s_trivial: bool) -> Vec<Family> {
    use Family::*;
    if s_trivial {
        vec![SQ1, S3family, T1]
    } else {
        vec![SQ2, S1family, S2family, S3prime, T2]
    }
}

/// Cartesian power of `support`, lexicographic.
fn tuples(support: &[GroupElem], k: usize) -> Vec<Vec<GroupElem>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                support.iter().map(move |x| {
                    let mut q = p.clone();
                    q.push(x.clone());
                    q
                })
            })
            .collect();
    }
    out
}

fn candidates(fam: Family, support: &[GroupElem], ds: &GroupElem) -> Vec<FamilyParams> {
    let one = Scalar::one();
    let h = ds.clone();
    let mut out: Vec<FamilyParams> = match fam {
        Family::SQ1 => {
            tuples(support, 2).into_iter().map(|t| FamilyParams::SQ1 { g1: t[0].clone(), g2: t[1].clone() }).collect()
        }
        Family::SQ2 => tuples(support, 2)
            .into_iter()
            .map(|t| FamilyParams::SQ2 { g: h.clone(), g1: t[0].clone(), g2: t[1].clone() })
            .collect(),
        Family::S3family => tuples(support, 3)
            .into_iter()
            .map(|t| FamilyParams::S3family { lambda: one.clone(), h: t[0].clone(), g: t[1].clone(), f: t[2].clone() })
            .collect(),
        Family::S1family => support.iter().map(|g| FamilyParams::S1family { h: h.clone(), g: g.clone() }).collect(),
        Family::S2family => support.iter().map(|g| FamilyParams::S2family { h: h.clone(), g: g.clone() }).collect(),
        Family::S3prime => tuples(support, 2)
            .into_iter()
            .map(|t| FamilyParams::S3prime { h: h.clone(), g: t[0].clone(), f: t[1].clone() })
            .collect(),
        Family::T1 => {
            tuples(support, 2).into_iter().map(|t| FamilyParams::T1 { g1: t[0].clone(), g2: t[1].clone() }).collect()
        }
        Family::T2 => support.iter().map(|g| FamilyParams::T2 { h: h.clone(), g: g.clone() }).collect(),
    };
    out.dedup();
    out
}

/// Cheap necessary conditions: parameter constraints hold and no degree
/// receives more seeds than the input has room for.
fn plausible(p: &FamilyParams, group: &AbGroup, dims: &BTreeMap<GroupElem, usize>) -> bool {
    if p.check_constraints(group).is_err() {
        return false;
    }
    let Ok(seeds) = p.seeds(group) else { return false };
    let mut counts: BTreeMap<GroupElem, usize> = BTreeMap::new();
    for (_, d) in seeds {
        *counts.entry(d).or_default() += 1;
    }
    counts.iter().all(|(d, n)| dims.get(d).is_some_and(|m| n <= m))
}

/// Finds a family member and an automorphism carrying it onto `g`.
pub fn classify(g: &Grading) -> Result<Classification> {
    let report = grading_validate(g);
    if !report.valid {
        return Err(Error::InvalidArgument(format!("not a grading: {}", report.diagnostics.join("; "))));
    }
    let group = g.group();
    let ds = deg_of_s(g)?;
    let s_trivial = group.is_identity(&ds);
    let support = g.support();
    let dims = g.dims();
    let target = IsoTarget::new(g);
    for fam in family_order(s_trivial) {
        for p in candidates(fam, &support, &ds) {
            if !plausible(&p, group, &dims) {
                continue;
            }
            let Ok(canonical) = p.build(group) else { continue };
            if canonical.dims() != dims {
                continue;
            }
            if let Some(witness) = target.find_from(&canonical)? {
                return Ok(Classification { family: fam, params: p.to_params(), witness, support });
            }
        }
    }
    Err(Error::Unclassifiable(format!(
        "no family member over {group} with support {} is isomorphic to the input",
        support.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
    )))
}
