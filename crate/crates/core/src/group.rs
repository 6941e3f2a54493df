//! Cyclic groups `C_n` and dihedral groups `D_2n` with a canonical integer
//! encoding of elements, their automorphisms, and the holomorph.
//!
//! Element codes: in `C_n`, code `i` is `a^i`. In `D_2n = <a, b | a^n = b^2 = 1,
//! b^-1 a b = a^-1>`, code `i < n` is `a^i` and code `n + i` is `a^i b`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{Perm, PermGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("element code {code} out of range for a group of order {order}")]
    CodeOutOfRange { code: usize, order: usize },
    #[error("the identity element may not belong to a connection set")]
    IdentityInSet,
    #[error("cannot parse element {0:?}")]
    BadElement(String),
    #[error("{0}")]
    Precondition(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Cyclic,
    Dihedral,
}

/// `C_n` (order `n`) or `D_2n` (order `2n`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupSpec {
    family: Family,
    n: usize,
}

#[derive(Deserialize)]
struct GroupSpecRepr {
    family: Family,
    n: usize,
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = GroupSpecRepr::deserialize(d)?;
        GroupSpec::new(repr.family, repr.n).map_err(serde::de::Error::custom)
    }
}

/// An element of a [`GroupSpec`], identified by its code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub usize);

impl Elem {
    pub const IDENTITY: Elem = Elem(0);

    #[inline]
    pub fn code(self) -> usize {
        self.0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl GroupSpec {
    pub fn new(family: Family, n: usize) -> Result<GroupSpec, GroupError> {
        match family {
            Family::Cyclic if n >= 1 => Ok(GroupSpec { family, n }),
            Family::Dihedral if n >= 2 => Ok(GroupSpec { family, n }),
            Family::Cyclic => Err(GroupError::InvalidGroup("cyclic groups need n >= 1".into())),
            Family::Dihedral => Err(GroupError::InvalidGroup(
                "dihedral groups need n >= 2".into(),
            )),
        }
    }

    pub fn cyclic(n: usize) -> GroupSpec {
        GroupSpec::new(Family::Cyclic, n).expect("cyclic n >= 1")
    }

    pub fn dihedral(n: usize) -> GroupSpec {
        GroupSpec::new(Family::Dihedral, n).expect("dihedral n >= 2")
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        match self.family {
            Family::Cyclic => self.n,
            Family::Dihedral => 2 * self.n,
        }
    }

    pub fn is_dihedral(&self) -> bool {
        self.family == Family::Dihedral
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order()).map(Elem)
    }

    pub fn check(&self, x: Elem) -> Result<Elem, GroupError> {
        if x.0 < self.order() {
            Ok(x)
        } else {
            Err(GroupError::CodeOutOfRange {
                code: x.0,
                order: self.order(),
            })
        }
    }

    /// `a` for cyclic groups; `a, b` for dihedral groups.
    pub fn generators(&self) -> Vec<Elem> {
        match self.family {
            Family::Cyclic if self.n == 1 => vec![],
            Family::Cyclic => vec![Elem(1)],
            Family::Dihedral => vec![Elem(1), Elem(self.n)],
        }
    }

    /// The element `a^i` (exponent reduced mod n).
    pub fn a_pow(&self, i: i64) -> Elem {
        Elem(i.rem_euclid(self.n as i64) as usize)
    }

    /// The element `a^i b` of a dihedral group.
    pub fn a_pow_b(&self, i: i64) -> Elem {
        debug_assert!(self.is_dihedral());
        Elem(self.n + i.rem_euclid(self.n as i64) as usize)
    }

    /// Checked product.
    pub fn multiply(&self, x: Elem, y: Elem) -> Result<Elem, GroupError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    /// Product under the presentation; codes are assumed valid.
    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        let n = self.n;
        match self.family {
            Family::Cyclic => Elem((x.0 + y.0) % n),
            Family::Dihedral => {
                let (i, xr) = (x.0 % n, x.0 >= n);
                let (j, yr) = (y.0 % n, y.0 >= n);
                match (xr, yr) {
                    (false, false) => Elem((i + j) % n),
                    (true, false) => Elem(n + (i + n - j) % n),
                    (false, true) => Elem(n + (i + j) % n),
                    (true, true) => Elem((i + n - j) % n),
                }
            }
        }
    }

    pub fn inverse(&self, x: Elem) -> Elem {
        let n = self.n;
        match self.family {
            Family::Cyclic => Elem((n - x.0 % n) % n),
            Family::Dihedral if x.0 >= n => x,
            Family::Dihedral => Elem((n - x.0) % n),
        }
    }

    pub fn pow(&self, x: Elem, k: usize) -> Elem {
        (0..k).fold(Elem::IDENTITY, |acc, _| self.mul(acc, x))
    }

    pub fn elem_order(&self, x: Elem) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != Elem::IDENTITY {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// `g^-1 x g`.
    pub fn conjugate(&self, x: Elem, g: Elem) -> Elem {
        self.mul(self.mul(self.inverse(g), x), g)
    }

    /// The subgroup generated by `gens`, as a sorted code list.
    pub fn subgroup(&self, gens: &[Elem]) -> Vec<Elem> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut stack = vec![Elem::IDENTITY];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y.0] {
                    seen[y.0] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.order()).filter(|&i| seen[i]).map(Elem).collect()
    }

    /// Whether a set of elements is closed under multiplication (and so a subgroup).
    pub fn is_subgroup(&self, set: &[Elem]) -> bool {
        let members: BTreeSet<Elem> = set.iter().copied().collect();
        members.contains(&Elem::IDENTITY)
            && members
                .iter()
                .all(|&x| members.iter().all(|&y| members.contains(&self.mul(x, y))))
    }

    /// `R(g): x -> x g` as a permutation of element codes.
    pub fn right_mult(&self, g: Elem) -> Perm {
        Perm::from_images(self.elements().map(|x| self.mul(x, g).0).collect())
            .expect("right multiplication is a bijection")
    }

    /// The right regular representation `R(G)`, generated by `R(a)` (and `R(b)`).
    pub fn right_regular(&self) -> PermGroup {
        let gens = self.generators().into_iter().map(|g| self.right_mult(g)).collect();
        PermGroup::new(self.order(), gens).expect("consistent degree")
    }

    /// Every `R(g)`, indexed by `g`.
    pub fn right_regular_elements(&self) -> Vec<Perm> {
        self.elements().map(|g| self.right_mult(g)).collect()
    }

    /// Validates, sorts, and deduplicates a connection set.
    pub fn connection_set(&self, codes: &[usize]) -> Result<Vec<Elem>, GroupError> {
        let mut set = Vec::with_capacity(codes.len());
        for &c in codes {
            let x = self.check(Elem(c))?;
            if x == Elem::IDENTITY {
                return Err(GroupError::IdentityInSet);
            }
            set.push(x);
        }
        set.sort_unstable();
        set.dedup();
        Ok(set)
    }

    /// Symbolic name of an element, e.g. `1`, `a^3`, `a^2*b`.
    pub fn format_elem(&self, x: Elem) -> String {
        let (i, reflection) = match self.family {
            Family::Cyclic => (x.0, false),
            Family::Dihedral => (x.0 % self.n, x.0 >= self.n),
        };
        let rot = match i {
            0 => None,
            1 => Some("a".to_string()),
            _ => Some(format!("a^{i}")),
        };
        match (rot, reflection) {
            (None, false) => "1".into(),
            (Some(r), false) => r,
            (None, true) => "b".into(),
            (Some(r), true) => format!("{r}*b"),
        }
    }

    /// Parses a word in `a`, `b`, `1` such as `a^3*b`, `b*a^-1`, `a^2b`.
    pub fn parse_elem(&self, word: &str) -> Result<Elem, GroupError> {
        let bad = || GroupError::BadElement(word.to_string());
        let mut acc = Elem::IDENTITY;
        let chars: Vec<char> = word.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(bad());
        }
        let mut pos = 0;
        while pos < chars.len() {
            let letter = chars[pos];
            pos += 1;
            let base = match letter {
                '*' => continue,
                '1' => Elem::IDENTITY,
                'a' => self.a_pow(1),
                'b' if self.is_dihedral() => Elem(self.n),
                _ => return Err(bad()),
            };
            let mut exp: i64 = 1;
            if pos < chars.len() && chars[pos] == '^' {
                pos += 1;
                let start = pos;
                if pos < chars.len() && chars[pos] == '-' {
                    pos += 1;
                }
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                let text: String = chars[start..pos].iter().collect();
                exp = text.parse().map_err(|_| bad())?;
            }
            let factor = if exp >= 0 {
                self.pow(base, exp as usize)
            } else {
                self.inverse(self.pow(base, exp.unsigned_abs() as usize))
            };
            acc = self.mul(acc, factor);
        }
        Ok(acc)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Cyclic => write!(f, "C_{}", self.n),
            Family::Dihedral => write!(f, "D_{}", 2 * self.n),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    /// `cyclic:12` or `dihedral:6` (the latter is `D_12`).
    fn from_str(s: &str) -> Result<GroupSpec, GroupError> {
        let (family, n) = s
            .split_once(':')
            .ok_or_else(|| GroupError::InvalidGroup(format!("expected family:n, got {s:?}")))?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| GroupError::InvalidGroup(format!("bad n in {s:?}")))?;
        let family = match family.trim() {
            "cyclic" | "c" | "C" => Family::Cyclic,
            "dihedral" | "d" | "D" => Family::Dihedral,
            other => return Err(GroupError::InvalidGroup(format!("unknown family {other:?}"))),
        };
        GroupSpec::new(family, n)
    }
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Units mod `n` in ascending order (`[1]` when `n = 1`).
pub fn units(n: usize) -> Vec<usize> {
    if n == 1 {
        return vec![1];
    }
    (1..n).filter(|&r| gcd(r, n) == 1).collect()
}

pub fn euler_phi(n: usize) -> usize {
    units(n).len()
}

/// An automorphism of a cyclic or dihedral group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupAut {
    /// Dihedral: `a -> a^r`, `b -> a^s b` with `gcd(r, n) = 1`.
    Dihedral { r: usize, s: usize },
    /// Cyclic: `a -> a^r` with `gcd(r, n) = 1`.
    Cyclic { r: usize },
    /// Explicit image table on element codes; used for `D_4`, whose
    /// automorphisms need not preserve `<a>`.
    Table { images: Vec<usize> },
}

impl GroupAut {
    pub fn identity(g: &GroupSpec) -> GroupAut {
        match g.family {
            Family::Cyclic => GroupAut::Cyclic { r: 1 },
            Family::Dihedral if g.n == 2 => GroupAut::Table {
                images: vec![0, 1, 2, 3],
            },
            Family::Dihedral => GroupAut::Dihedral { r: 1, s: 0 },
        }
    }

    #[inline]
    pub fn apply(&self, g: &GroupSpec, x: Elem) -> Elem {
        let n = g.n;
        match self {
            GroupAut::Cyclic { r } => Elem(r * x.0 % n),
            GroupAut::Dihedral { r, s } => {
                if x.0 < n {
                    Elem(r * x.0 % n)
                } else {
                    Elem(n + (r * (x.0 - n) + s) % n)
                }
            }
            GroupAut::Table { images } => Elem(images[x.0]),
        }
    }

    /// The automorphism as a permutation of element codes.
    pub fn to_perm(&self, g: &GroupSpec) -> Perm {
        Perm::from_images(g.elements().map(|x| self.apply(g, x).0).collect())
            .expect("automorphisms are bijections")
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &GroupAut, g: &GroupSpec) -> GroupAut {
        let n = g.n;
        match (self, other) {
            (GroupAut::Cyclic { r: r1 }, GroupAut::Cyclic { r: r2 }) => {
                GroupAut::Cyclic { r: r1 * r2 % n.max(1) }.normalized(g)
            }
            (GroupAut::Dihedral { r: r1, s: s1 }, GroupAut::Dihedral { r: r2, s: s2 }) => {
                // b -> a^{s1} b -> a^{r2 s1 + s2} b
                GroupAut::Dihedral {
                    r: r1 * r2 % n,
                    s: (r2 * s1 + s2) % n,
                }
            }
            _ => GroupAut::Table {
                images: g.elements().map(|x| other.apply(g, self.apply(g, x)).0).collect(),
            },
        }
    }

    fn normalized(self, g: &GroupSpec) -> GroupAut {
        match self {
            GroupAut::Cyclic { .. } if g.n == 1 => GroupAut::Cyclic { r: 1 },
            other => other,
        }
    }

    pub fn is_identity(&self, g: &GroupSpec) -> bool {
        g.elements().all(|x| self.apply(g, x) == x)
    }

    /// Multiplicative order in `Aut(G)`.
    pub fn order(&self, g: &GroupSpec) -> usize {
        self.to_perm(g).order() as usize
    }

    /// Image of a set, sorted.
    pub fn apply_set(&self, g: &GroupSpec, set: &[Elem]) -> Vec<Elem> {
        let mut image: Vec<Elem> = set.iter().map(|&x| self.apply(g, x)).collect();
        image.sort_unstable();
        image
    }

    /// Whether the map on codes is a bijective homomorphism.
    pub fn is_automorphism(&self, g: &GroupSpec) -> bool {
        let images: Vec<Elem> = g.elements().map(|x| self.apply(g, x)).collect();
        let distinct: BTreeSet<Elem> = images.iter().copied().collect();
        distinct.len() == g.order()
            && g.elements().all(|x| {
                g.elements()
                    .all(|y| images[g.mul(x, y).0] == g.mul(images[x.0], images[y.0]))
            })
    }
}

/// The full automorphism group of `g`, duplicate-free and in a fixed order.
///
/// `|Aut(C_n)| = phi(n)`, `|Aut(D_2n)| = n phi(n)` for `n >= 3`, and
/// `Aut(D_4) = Sym(3)` on the three involutions.
pub fn aut_group(g: &GroupSpec) -> Vec<GroupAut> {
    match g.family {
        Family::Cyclic => units(g.n).into_iter().map(|r| GroupAut::Cyclic { r }).collect(),
        Family::Dihedral if g.n == 2 => {
            let mut out = Vec::with_capacity(6);
            for images in [
                [1, 2, 3],
                [1, 3, 2],
                [2, 1, 3],
                [2, 3, 1],
                [3, 1, 2],
                [3, 2, 1],
            ] {
                out.push(GroupAut::Table {
                    images: vec![0, images[0], images[1], images[2]],
                });
            }
            out
        }
        Family::Dihedral => {
            let mut out = Vec::new();
            for r in units(g.n) {
                for s in 0..g.n {
                    out.push(GroupAut::Dihedral { r, s });
                }
            }
            out
        }
    }
}

/// `Aut(G, S)`: the automorphisms fixing `set` setwise.
pub fn aut_stabilizer(g: &GroupSpec, set: &[Elem]) -> Result<Vec<GroupAut>, GroupError> {
    let mut sorted = Vec::with_capacity(set.len());
    for &x in set {
        g.check(x)?;
        if x == Elem::IDENTITY {
            return Err(GroupError::IdentityInSet);
        }
        sorted.push(x);
    }
    sorted.sort_unstable();
    sorted.dedup();
    Ok(aut_group(g)
        .into_iter()
        .filter(|sigma| sigma.apply_set(g, &sorted) == sorted)
        .collect())
}

/// A small generating set for the permutation group formed by `perms`,
/// chosen greedily in list order.
pub(crate) fn greedy_generators(degree: usize, perms: &[Perm]) -> Vec<Perm> {
    let mut gens: Vec<Perm> = Vec::new();
    let mut group = PermGroup::new(degree, vec![]).expect("positive degree");
    for p in perms {
        if !group.is_member(p).expect("subgroup of a capped group") {
            gens.push(p.clone());
            group = PermGroup::new(degree, gens.clone()).expect("consistent degree");
        }
    }
    gens
}

/// `Hol(G) = R(G) x| Aut(G)` as a permutation group on element codes.
pub fn holomorph(g: &GroupSpec) -> PermGroup {
    let aut_perms: Vec<Perm> = aut_group(g).iter().map(|a| a.to_perm(g)).collect();
    let mut gens = g.right_regular().generators().to_vec();
    gens.extend(greedy_generators(g.order(), &aut_perms));
    PermGroup::new(g.order(), gens).expect("consistent degree")
}

/// Prime factorization `n = prod p_i^k_i` with primes in descending order, so
/// that `2`, when present, comes last.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclicFactorization {
    n: usize,
    factors: Vec<(usize, u32)>,
}

impl CyclicFactorization {
    pub fn new(n: usize) -> CyclicFactorization {
        assert!(n >= 1);
        let mut factors = Vec::new();
        let mut m = n;
        let mut p = 2;
        while p * p <= m {
            let mut k = 0;
            while m.is_multiple_of(p) {
                m /= p;
                k += 1;
            }
            if k > 0 {
                factors.push((p, k));
            }
            p += 1;
        }
        if m > 1 {
            factors.push((m, 1));
        }
        factors.reverse();
        CyclicFactorization { n, factors }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.factors
    }

    pub fn prime_power(&self, i: usize) -> usize {
        let (p, k) = self.factors[i];
        p.pow(k)
    }

    /// Generator `a_i = a^{n / p_i^k_i}` of the `p_i`-component.
    pub fn component_generator(&self, i: usize) -> Elem {
        Elem(self.n / self.prime_power(i))
    }

    pub fn index_of_prime(&self, p: usize) -> Option<usize> {
        self.factors.iter().position(|&(q, _)| q == p)
    }

    /// Exponent of `p` in `n` (zero if `p` does not divide `n`).
    pub fn valuation(&self, p: usize) -> u32 {
        self.index_of_prime(p).map_or(0, |i| self.factors[i].1)
    }
}

/// The unit `r mod n` with `r = t mod q` and `r = 1 mod n/q`, for `q | n`
/// coprime to `n/q`.
fn crt_component_unit(n: usize, q: usize, t: usize) -> usize {
    let rest = n / q;
    (0..n)
        .find(|&r| r % q == t % q && r % rest == 1 % rest)
        .expect("coprime moduli")
}

/// The order-`p_i` automorphism `a_i -> a_i^{p_i^{k_i - 1} + 1}` of `C_n`, trivial on
/// the other components. `i` indexes [`CyclicFactorization::factors`].
pub fn construct_alpha_i(n: usize, i: usize) -> Result<GroupAut, GroupError> {
    let fact = CyclicFactorization::new(n);
    let &(p, k) = fact.factors().get(i).ok_or_else(|| {
        GroupError::Precondition(format!("prime index {i} out of range for n = {n}"))
    })?;
    if k < 2 {
        return Err(GroupError::Precondition(format!(
            "{p}^2 does not divide {n}; no order-{p} automorphism of the {p}-component"
        )));
    }
    let q = p.pow(k);
    Ok(GroupAut::Cyclic {
        r: crt_component_unit(n, q, p.pow(k - 1) + 1),
    })
}

/// [`construct_alpha_i`] addressed by the prime instead of its index.
pub fn construct_alpha_for_prime(n: usize, p: usize) -> Result<GroupAut, GroupError> {
    let fact = CyclicFactorization::new(n);
    let i = fact
        .index_of_prime(p)
        .ok_or_else(|| GroupError::Precondition(format!("{p} does not divide {n}")))?;
    construct_alpha_i(n, i)
}

/// The order-4 automorphism `a_2 -> a_2^{2^{k-2} + 1}` of the 2-component of `C_n`,
/// where `2^k || n` and `k >= 4`.
pub fn construct_beta(n: usize) -> Result<GroupAut, GroupError> {
    let k = CyclicFactorization::new(n).valuation(2);
    if k < 4 {
        return Err(GroupError::Precondition(format!(
            "2-adic valuation of {n} is {k}; need at least 4"
        )));
    }
    let q = 1usize << k;
    Ok(GroupAut::Cyclic {
        r: crt_component_unit(n, q, (1 << (k - 2)) + 1),
    })
}

/// `F_G(L)`: the elements fixed by every automorphism in `l`.
pub fn fixed_points(g: &GroupSpec, l: &[GroupAut]) -> Vec<Elem> {
    g.elements()
        .filter(|&x| l.iter().all(|sigma| sigma.apply(g, x) == x))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn codes(v: &[usize]) -> Vec<Elem> {
        v.iter().copied().map(Elem).collect()
    }

    #[test]
    fn multiplication_examples() {
        let d12 = GroupSpec::dihedral(6);
        assert_eq!(d12.multiply(Elem(7), Elem(2)).unwrap(), Elem(11));
        assert_eq!(d12.multiply(Elem(6), Elem(6)).unwrap(), Elem(0));
        let c9 = GroupSpec::cyclic(9);
        assert_eq!(c9.multiply(Elem(4), Elem(7)).unwrap(), Elem(2));
        assert_eq!(
            c9.multiply(Elem(9), Elem(0)),
            Err(GroupError::CodeOutOfRange { code: 9, order: 9 })
        );
    }

    #[test]
    fn dihedral_presentation_relations() {
        for n in 2..10 {
            let g = GroupSpec::dihedral(n);
            let (a, b) = (Elem(1), Elem(n));
            assert_eq!(g.elem_order(a), n);
            assert_eq!(g.elem_order(b), 2);
            assert_eq!(g.conjugate(a, b), g.inverse(a));
            // a^i b really is the product a^i * b
            for i in 0..n {
                assert_eq!(g.mul(Elem(i), b), Elem(n + i));
            }
        }
    }

    #[test]
    fn right_regular_examples() {
        let c5 = GroupSpec::cyclic(5).right_regular();
        assert_eq!(c5.degree(), 5);
        assert_eq!(c5.order().unwrap(), 5);
        assert!(c5.is_regular());
        let d12 = GroupSpec::dihedral(6).right_regular();
        assert_eq!((d12.degree(), d12.order().unwrap()), (12, 12));
        assert!(d12.is_member(&GroupSpec::dihedral(6).right_mult(Elem(3))).unwrap());
        let alpha = GroupAut::Dihedral { r: 5, s: 0 }.to_perm(&GroupSpec::dihedral(6));
        assert!(!d12.is_member(&alpha).unwrap());
        let d16 = GroupSpec::dihedral(8);
        assert_eq!(d16.right_mult(Elem(1)).order(), 8);
    }

    #[test]
    fn right_regular_composes_as_group_product() {
        let g = GroupSpec::dihedral(5);
        for x in g.elements() {
            for y in g.elements() {
                assert_eq!(&g.right_mult(x) * &g.right_mult(y), g.right_mult(g.mul(x, y)));
            }
        }
    }

    #[test]
    fn aut_group_sizes() {
        let c12 = aut_group(&GroupSpec::cyclic(12));
        assert_eq!(
            c12,
            [1, 5, 7, 11].map(|r| GroupAut::Cyclic { r }).to_vec()
        );
        assert_eq!(aut_group(&GroupSpec::dihedral(8)).len(), 32);
        assert_eq!(aut_group(&GroupSpec::dihedral(2)).len(), 6);
        assert_eq!(aut_group(&GroupSpec::cyclic(1)).len(), 1);
    }

    #[test]
    fn automorphisms_are_homomorphisms() {
        let mut groups: Vec<GroupSpec> = (1..=16).map(GroupSpec::cyclic).collect();
        groups.extend((2..=16).map(GroupSpec::dihedral));
        for g in groups {
            let auts = aut_group(&g);
            for sigma in &auts {
                assert!(sigma.is_automorphism(&g), "{sigma:?} on {g}");
            }
            let perms: BTreeSet<Perm> = auts.iter().map(|a| a.to_perm(&g)).collect();
            assert_eq!(perms.len(), auts.len(), "duplicates in Aut({g})");
            let group = PermGroup::new(g.order(), perms.iter().cloned().collect()).unwrap();
            assert_eq!(group.order().unwrap(), auts.len(), "Aut({g}) not closed");
        }
    }

    #[test]
    fn aut_composition_matches_permutations() {
        for g in [GroupSpec::cyclic(12), GroupSpec::dihedral(6), GroupSpec::dihedral(2)] {
            let auts = aut_group(&g);
            for x in &auts {
                for y in &auts {
                    assert_eq!(x.then(y, &g).to_perm(&g), &x.to_perm(&g) * &y.to_perm(&g));
                }
            }
        }
    }

    #[test]
    fn d16_element_order_census() {
        let g = GroupSpec::dihedral(8);
        let mut tally = std::collections::BTreeMap::new();
        for sigma in aut_group(&g) {
            *tally.entry(sigma.order(&g)).or_insert(0) += 1;
        }
        assert_eq!(
            tally.into_iter().collect::<Vec<_>>(),
            vec![(1, 1), (2, 15), (4, 8), (8, 8)]
        );
    }

    #[test]
    fn stabilizer_examples() {
        let d12 = GroupSpec::dihedral(6);
        let stab = aut_stabilizer(&d12, &codes(&[1, 5, 6, 9])).unwrap();
        assert_eq!(stab.len(), 4);
        assert!(stab.iter().all(|s| s.order(&d12) <= 2));

        let d24 = GroupSpec::dihedral(12);
        let stab = aut_stabilizer(&d24, &codes(&[1, 11, 12, 15, 18, 21])).unwrap();
        assert_eq!(stab.len(), 8);
        // D_8: five involutions, two elements of order 4
        let orders: Vec<usize> = stab.iter().map(|s| s.order(&d24)).collect();
        assert_eq!(orders.iter().filter(|&&o| o == 2).count(), 5);
        assert_eq!(orders.iter().filter(|&&o| o == 4).count(), 2);

        let c10 = GroupSpec::cyclic(10);
        let all: Vec<Elem> = (1..10).map(Elem).collect();
        assert_eq!(aut_stabilizer(&c10, &all).unwrap().len(), euler_phi(10));
        assert_eq!(
            aut_stabilizer(&c10, &codes(&[0, 1])),
            Err(GroupError::IdentityInSet)
        );
    }

    #[test]
    fn holomorph_orders() {
        assert_eq!(holomorph(&GroupSpec::cyclic(8)).order().unwrap(), 32);
        let g = GroupSpec::dihedral(8);
        let hol = holomorph(&g);
        assert_eq!(hol.order().unwrap(), 512);
        assert!(crate::perm::is_normal_subgroup(&hol, &g.right_regular()).unwrap());
        for g in [GroupSpec::cyclic(12), GroupSpec::dihedral(2), GroupSpec::dihedral(5)] {
            let hol = holomorph(&g);
            assert_eq!(hol.order().unwrap(), g.order() * aut_group(&g).len());
            assert!(crate::perm::is_normal_subgroup(&hol, &g.right_regular()).unwrap());
        }
    }

    #[test]
    fn factorization_orders_primes_descending() {
        let f = CyclicFactorization::new(360);
        assert_eq!(f.factors(), &[(5, 1), (3, 2), (2, 3)]);
        assert_eq!(f.component_generator(1), Elem(40));
        assert_eq!(CyclicFactorization::new(1).factors(), &[]);
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(construct_alpha_for_prime(9, 3).unwrap(), GroupAut::Cyclic { r: 4 });
        assert_eq!(construct_alpha_for_prime(18, 3).unwrap(), GroupAut::Cyclic { r: 13 });
        assert_eq!(construct_alpha_for_prime(25, 5).unwrap(), GroupAut::Cyclic { r: 6 });
        assert!(construct_alpha_for_prime(15, 3).is_err());
        assert!(construct_alpha_i(9, 3).is_err());
        for (n, p) in [(9, 3), (18, 3), (25, 5), (27, 3), (16, 2), (72, 3), (72, 2)] {
            let g = GroupSpec::cyclic(n);
            assert_eq!(construct_alpha_for_prime(n, p).unwrap().order(&g), p);
        }
    }

    #[test]
    fn alpha_acts_only_on_its_component() {
        let n = 72;
        let fact = CyclicFactorization::new(n);
        let alpha = construct_alpha_for_prime(n, 3).unwrap();
        let g = GroupSpec::cyclic(n);
        let a3 = fact.component_generator(fact.index_of_prime(3).unwrap());
        let a2 = fact.component_generator(fact.index_of_prime(2).unwrap());
        assert_eq!(alpha.apply(&g, a3), g.pow(a3, 4));
        assert_eq!(alpha.apply(&g, a2), a2);
    }

    #[test]
    fn beta_examples() {
        assert_eq!(construct_beta(16).unwrap(), GroupAut::Cyclic { r: 5 });
        assert_eq!(construct_beta(32).unwrap(), GroupAut::Cyclic { r: 9 });
        assert!(construct_beta(8).is_err());
        for n in [16, 32, 48, 80, 64] {
            let g = GroupSpec::cyclic(n);
            let beta = construct_beta(n).unwrap();
            assert_eq!(beta.order(&g), 4);
            assert_eq!(beta.then(&beta, &g), construct_alpha_for_prime(n, 2).unwrap());
        }
    }

    #[test]
    fn fixed_point_examples() {
        let c9 = GroupSpec::cyclic(9);
        let f = fixed_points(&c9, &[GroupAut::Cyclic { r: 4 }]);
        assert_eq!(f, codes(&[0, 3, 6]));
        assert_eq!(fixed_points(&c9, &[]).len(), 9);
        let d16 = GroupSpec::dihedral(8);
        let f = fixed_points(&d16, &[GroupAut::Dihedral { r: 7, s: 0 }]);
        assert_eq!(f, codes(&[0, 4, 8, 12]));
        assert!(d16.is_subgroup(&f));
    }

    #[test]
    fn parse_and_format_roundtrip() {
        let g = GroupSpec::dihedral(6);
        assert_eq!(g.parse_elem("a^3*b").unwrap(), Elem(9));
        assert_eq!(g.parse_elem("a^-1").unwrap(), Elem(5));
        assert_eq!(g.parse_elem("b*a").unwrap(), Elem(11));
        assert_eq!(g.parse_elem("1").unwrap(), Elem(0));
        assert!(g.parse_elem("c").is_err());
        assert!(GroupSpec::cyclic(5).parse_elem("b").is_err());
        for x in g.elements() {
            assert_eq!(g.parse_elem(&g.format_elem(x)).unwrap(), x);
        }
        assert_eq!("dihedral:6".parse::<GroupSpec>().unwrap(), g);
        assert!("dihedral:1".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn json_shapes() {
        assert_eq!(
            serde_json::to_string(&GroupSpec::dihedral(6)).unwrap(),
            r#"{"family":"dihedral","n":6}"#
        );
        assert_eq!(
            serde_json::to_string(&GroupAut::Cyclic { r: 5 }).unwrap(),
            r#"{"r":5}"#
        );
        assert_eq!(
            serde_json::to_string(&GroupAut::Dihedral { r: 5, s: 2 }).unwrap(),
            r#"{"r":5,"s":2}"#
        );
        let back: GroupAut = serde_json::from_str(r#"{"r":5,"s":2}"#).unwrap();
        assert_eq!(back, GroupAut::Dihedral { r: 5, s: 2 });
        let back: GroupAut = serde_json::from_str(r#"{"r":3}"#).unwrap();
        assert_eq!(back, GroupAut::Cyclic { r: 3 });
        assert!(serde_json::from_str::<GroupSpec>(r#"{"family":"cyclic","n":0}"#).is_err());
    }

    proptest! {
        #[test]
        fn multiplication_is_associative(n in 2usize..12, x in 0usize..100, y in 0usize..100, z in 0usize..100) {
            for g in [GroupSpec::cyclic(n), GroupSpec::dihedral(n)] {
                let (x, y, z) = (Elem(x % g.order()), Elem(y % g.order()), Elem(z % g.order()));
                prop_assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
                prop_assert_eq!(g.mul(x, g.inverse(x)), Elem::IDENTITY);
            }
        }

        #[test]
        fn fixed_points_form_subgroups(n in 3usize..13, picks in proptest::collection::vec(0usize..1000, 0..3)) {
            for g in [GroupSpec::cyclic(n), GroupSpec::dihedral(n)] {
                let auts = aut_group(&g);
                let l: Vec<GroupAut> = picks.iter().map(|&i| auts[i % auts.len()].clone()).collect();
                prop_assert!(g.is_subgroup(&fixed_points(&g, &l)));
            }
        }

        #[test]
        fn stabilizer_is_closed_subset(n in 3usize..9, mask in 0u64..(1 << 15)) {
            let g = GroupSpec::dihedral(n);
            let set: Vec<Elem> = (1..g.order()).filter(|i| mask >> (i - 1) & 1 == 1).map(Elem).collect();
            let stab = aut_stabilizer(&g, &set).unwrap();
            let all = aut_group(&g);
            for x in &stab {
                prop_assert!(all.contains(x));
                for y in &stab {
                    prop_assert!(stab.contains(&x.then(y, &g)));
                }
            }
        }
    }
}
