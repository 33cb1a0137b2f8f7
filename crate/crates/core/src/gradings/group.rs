//! Finitely generated abelian groups `Z^r ⊕ Z/m₁ ⊕ … ⊕ Z/mₖ`, written
//! additively.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `Z^free ⊕ ⊕ Z/mᵢ`; element coordinates list the free part first.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct AbGroup {
    #[serde(rename = "free")]
    pub free_rank: usize,
    pub torsion: Vec<i64>,
}

/// Coordinates of a group element; torsion coordinates lie in `[0, mᵢ)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElem(pub Vec<i64>);

impl GroupElem {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl AbGroup {
    pub fn new(free_rank: usize, torsion: Vec<i64>) -> Result<Self> {
        if let Some(m) = torsion.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidArgument(format!("torsion orders must be at least 2, got {m}")));
        }
        Ok(AbGroup { free_rank, torsion })
    }

    pub fn free(rank: usize) -> Self {
        AbGroup { free_rank: rank, torsion: Vec::new() }
    }

    pub fn cyclic(orders: &[i64]) -> Result<Self> {
        AbGroup::new(0, orders.to_vec())
    }

    pub fn validate(&self) -> Result<()> {
        AbGroup::new(self.free_rank, self.torsion.clone()).map(|_| ())
    }

    /// Number of coordinates of an element.
    pub fn rank(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn identity(&self) -> GroupElem {
        GroupElem(vec![0; self.rank()])
    }

    /// Reduces raw coordinates into canonical form.
    pub fn elem(&self, coords: &[i64]) -> Result<GroupElem> {
        if coords.len() != self.rank() {
            return Err(Error::InvalidArgument(format!(
                "group element {coords:?} needs {} coordinates for {self}",
                self.rank()
            )));
        }
        Ok(self.reduce(coords.to_vec()))
    }

    fn reduce(&self, mut c: Vec<i64>) -> GroupElem {
        for (x, m) in c[self.free_rank..].iter_mut().zip(&self.torsion) {
            *x = x.rem_euclid(*m);
        }
        GroupElem(c)
    }

    pub fn contains(&self, g: &GroupElem) -> bool {
        g.0.len() == self.rank() && g.0[self.free_rank..].iter().zip(&self.torsion).all(|(x, m)| (0..*m).contains(x))
    }

    pub fn add(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        self.reduce(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn neg(&self, a: &GroupElem) -> GroupElem {
        self.reduce(a.0.iter().map(|x| -x).collect())
    }

    pub fn sub(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        self.add(a, &self.neg(b))
    }

    /// `n·a` (the `n`-th power in multiplicative notation).
    pub fn times(&self, n: i64, a: &GroupElem) -> GroupElem {
        self.reduce(a.0.iter().map(|x| n * x).collect())
    }

    pub fn is_identity(&self, a: &GroupElem) -> bool {
        a.0.iter().all(|&x| x == 0)
    }

    /// Least `n ≥ 1` with `n·g = e`, or `None` when `g` has infinite order.
    pub fn order(&self, g: &GroupElem) -> Option<u64> {
        if g.0[..self.free_rank].iter().any(|&x| x != 0) {
            return None;
        }
        let mut n: i64 = 1;
        for (x, m) in g.0[self.free_rank..].iter().zip(&self.torsion) {
            n = n.lcm(&(m / x.gcd(m)));
        }
        Some(n as u64)
    }

    /// `G × H`, with coordinates `(g_free, h_free, g_torsion, h_torsion)`.
    pub fn product(&self, other: &AbGroup) -> AbGroup {
        let mut torsion = self.torsion.clone();
        torsion.extend(&other.torsion);
        AbGroup { free_rank: self.free_rank + other.free_rank, torsion }
    }

    /// The element `(g, h)` of [`AbGroup::product`].
    pub fn pair(&self, other: &AbGroup, g: &GroupElem, h: &GroupElem) -> GroupElem {
        let mut c = g.0[..self.free_rank].to_vec();
        c.extend(&h.0[..other.free_rank]);
        c.extend(&g.0[self.free_rank..]);
        c.extend(&h.0[other.free_rank..]);
        GroupElem(c)
    }

    /// All elements of a finite group in lexicographic order.
    pub fn elements(&self) -> Option<Vec<GroupElem>> {
        if !self.is_finite() {
            return None;
        }
        let mut out = vec![Vec::new()];
        for &m in &self.torsion {
            out = out
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    (0..m).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        Some(out.into_iter().map(GroupElem).collect())
    }

    /// Parses forms such as `Z2xZ4`, `Z^2`, `ZxZ3`, `Z2^3`, or `1` for the
    /// trivial group. Free factors must come first.
    pub fn parse(text: &str) -> Result<AbGroup> {
        let text = text.trim();
        if text == "1" || text.is_empty() {
            return Ok(AbGroup::free(0));
        }
        let bad = |why: &str| Error::Parse(format!("group {text:?}: {why}"));
        let mut free = 0usize;
        let mut torsion = Vec::new();
        for factor in text.split(['x', 'X', '*']) {
            let factor = factor.trim();
            let body = factor.strip_prefix('Z').ok_or_else(|| bad("factors look like Z, Zm, Z^r or Zm^r"))?;
            let (base, reps) = match body.split_once('^') {
                Some((b, r)) => (b, r.parse::<usize>().map_err(|_| bad("bad exponent"))?),
                None => (body, 1),
            };
            if base.is_empty() {
                if !torsion.is_empty() {
                    return Err(bad("free factors must precede torsion factors"));
                }
                free += reps;
            } else {
                let m: i64 = base.parse().map_err(|_| bad("bad cyclic order"))?;
                if m < 2 {
                    return Err(bad("cyclic orders must be at least 2"));
                }
                torsion.extend(std::iter::repeat_n(m, reps));
            }
        }
        AbGroup::new(free, torsion)
    }

    /// Parses an element written as a digit string (`"13"`) or as
    /// comma-separated integers (`"1,-2"`).
    pub fn parse_elem(&self, s: &str) -> Result<GroupElem> {
        let s = s.trim();
        let coords: Vec<i64> = if s.contains(',') || s.starts_with('-') || self.rank() == 1 && s.len() > 1 {
            s.split(',')
                .map(|p| p.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad group element {s:?}"))))
                .collect::<Result<_>>()?
        } else if s.is_empty() {
            Vec::new()
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(i64::from).ok_or_else(|| Error::Parse(format!("bad group element {s:?}"))))
                .collect::<Result<_>>()?
        };
        self.elem(&coords)
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|m| format!("Z{m}")));
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("x"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn order_examples() {
        let g = AbGroup::cyclic(&[2, 4]).unwrap();
        assert_eq!(g.order(&g.identity()), Some(1));
        assert_eq!(g.order(&g.elem(&[1, 0]).unwrap()), Some(2));
        assert_eq!(g.order(&g.elem(&[1, 1]).unwrap()), Some(4));
        assert_eq!(g.order(&g.elem(&[0, 2]).unwrap()), Some(2));
        let z = AbGroup::free(1);
        assert_eq!(z.order(&z.elem(&[1]).unwrap()), None);
        assert_eq!(z.order(&z.identity()), Some(1));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(AbGroup::parse("Z2xZ4").unwrap(), AbGroup::cyclic(&[2, 4]).unwrap());
        assert_eq!(AbGroup::parse("Z^2").unwrap(), AbGroup::free(2));
        assert_eq!(AbGroup::parse("Z2^3").unwrap(), AbGroup::cyclic(&[2, 2, 2]).unwrap());
        assert_eq!(AbGroup::parse("ZxZ3").unwrap(), AbGroup::new(1, vec![3]).unwrap());
        assert!(AbGroup::parse("Z3xZ").is_err());
        assert!(AbGroup::parse("Z1").is_err());
        assert!(AbGroup::parse("Q").is_err());
        let g = AbGroup::parse("Z2xZ4").unwrap();
        assert_eq!(g.parse_elem("13").unwrap(), GroupElem(vec![1, 3]));
        assert_eq!(g.parse_elem("1,7").unwrap(), GroupElem(vec![1, 3]));
        assert!(g.parse_elem("123").is_err());
        let z = AbGroup::free(1);
        assert_eq!(z.parse_elem("-12").unwrap(), GroupElem(vec![-12]));
        assert_eq!(z.parse_elem("12").unwrap(), GroupElem(vec![12]));
        assert_eq!(AbGroup::parse("Z2xZ4").unwrap().to_string(), "Z2xZ4");
    }

    #[test]
    fn json_shape() {
        let g = AbGroup::new(1, vec![3]).unwrap();
        assert_eq!(serde_json::to_value(&g).unwrap(), serde_json::json!({"free": 1, "torsion": [3]}));
    }

    fn group_and_elems() -> impl Strategy<Value = (AbGroup, Vec<i64>, Vec<i64>)> {
        (0usize..3, proptest::collection::vec(2i64..7, 0..3)).prop_flat_map(|(r, t)| {
            let n = r + t.len();
            let g = AbGroup::new(r, t).unwrap();
            (Just(g), proptest::collection::vec(-9i64..9, n), proptest::collection::vec(-9i64..9, n))
        })
    }

    proptest! {
        #[test]
        fn group_laws((g, a, b) in group_and_elems()) {
            let a = g.elem(&a).unwrap();
            let b = g.elem(&b).unwrap();
            prop_assert!(g.contains(&a));
            prop_assert_eq!(g.add(&a, &b), g.add(&b, &a));
            prop_assert!(g.is_identity(&g.add(&a, &g.neg(&a))));
            if let Some(n) = g.order(&a) {
                prop_assert!(g.is_identity(&g.times(n as i64, &a)));
                for k in 1..n as i64 {
                    prop_assert!(!g.is_identity(&g.times(k, &a)));
                }
            }
        }
    }
}
