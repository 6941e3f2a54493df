//! Permutations of `{0, .., N-1}` and finitely generated permutation groups.
//!
//! Products use the right-action convention: `p * q` first applies `p`, then
//! `q`, so `(p * q)(x) = q(p(x))`. With this convention the right regular
//! representation `R(g): x -> x g` satisfies `R(g) * R(h) = R(g h)`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::ops::Mul;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Default bound on the number of elements any group enumeration may produce.
pub const DEFAULT_ELEMENT_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("permutation must have degree at least 1")]
    EmptyDegree,
    #[error("image array is not a bijection on 0..{degree}")]
    NotBijection { degree: usize },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("group has more than {cap} elements (enumeration stopped at {reached})")]
    Overflow { cap: usize, reached: usize },
}

/// A bijection on `{0, .., degree-1}`; `images[x]` is the image of `x`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        assert!(degree >= 1, "permutation degree must be positive");
        Perm {
            images: (0..degree).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Perm, PermError> {
        let degree = images.len();
        if degree == 0 {
            return Err(PermError::EmptyDegree);
        }
        let mut seen = vec![false; degree];
        for &y in &images {
            if y >= degree || seen[y] {
                return Err(PermError::NotBijection { degree });
            }
            seen[y] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation from disjoint cycles; points not mentioned are fixed.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Perm, PermError> {
        if degree == 0 {
            return Err(PermError::EmptyDegree);
        }
        let mut images: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= degree {
                    return Err(PermError::PointOutOfRange { point: x, degree });
                }
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Perm::from_images(images)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn into_images(self) -> Vec<usize> {
        self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x == y)
    }

    /// `self * other` under the right-action convention.
    pub fn compose(&self, other: &Perm) -> Result<Perm, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.then(other))
    }

    /// Unchecked product: apply `self`, then `other`.
    #[inline]
    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: self.images.iter().map(|&y| other.images[y]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y] = x;
        }
        Perm { images }
    }

    /// `by^-1 * self * by`.
    pub fn conjugate_by(&self, by: &Perm) -> Perm {
        // (by^-1 self by)(by(x)) = by(self(x))
        let mut images = vec![0; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            images[by.images[x]] = by.images[y];
        }
        Perm { images }
    }

    pub fn pow(&self, mut k: u64) -> Perm {
        let mut base = self.clone();
        let mut acc = Perm::identity(self.degree());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            k >>= 1;
        }
        acc
    }

    /// Cycle lengths, one entry per cycle (fixed points included).
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.degree()];
        let mut lengths = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                len += 1;
            }
            lengths.push(len);
        }
        lengths
    }

    /// Multiplicative order (lcm of the cycle lengths).
    pub fn order(&self) -> u64 {
        self.cycle_lengths()
            .into_iter()
            .fold(1u64, |acc, len| lcm(acc, len as u64))
    }

    /// All cycles have the same length.
    pub fn is_semiregular(&self) -> bool {
        let lengths = self.cycle_lengths();
        lengths.windows(2).all(|w| w[0] == w[1])
    }

    pub fn has_fixed_point(&self) -> bool {
        self.images.iter().enumerate().any(|(x, &y)| x == y)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl Mul for &Perm {
    type Output = Perm;

    fn mul(self, rhs: &Perm) -> Perm {
        assert_eq!(self.degree(), rhs.degree(), "degree mismatch in product");
        self.then(rhs)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

impl fmt::Display for Perm {
    /// Disjoint-cycle notation, fixed points omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.degree()];
        let mut wrote = false;
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
                first = false;
                x = self.images[x];
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.images.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Perm, D::Error> {
        let images = Vec::<usize>::deserialize(deserializer)?;
        Perm::from_images(images).map_err(serde::de::Error::custom)
    }
}

/// Orbit of `point` under the group generated by `gens`.
pub fn orbit(gens: &[Perm], point: usize) -> Result<BTreeSet<usize>, PermError> {
    if let Some(g) = gens.first() {
        if point >= g.degree() {
            return Err(PermError::PointOutOfRange {
                point,
                degree: g.degree(),
            });
        }
        check_degrees(g.degree(), gens)?;
    }
    Ok(orbit_unchecked(gens, point))
}

pub(crate) fn orbit_unchecked(gens: &[Perm], point: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([point]);
    let mut stack = vec![point];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.apply(x);
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen
}

/// Orbit partition of all points, each orbit sorted, orbits ordered by least point.
pub fn orbits(degree: usize, gens: &[Perm]) -> Vec<Vec<usize>> {
    let mut owner = vec![usize::MAX; degree];
    let mut result = Vec::new();
    for start in 0..degree {
        if owner[start] != usize::MAX {
            continue;
        }
        let id = result.len();
        let orbit: Vec<usize> = orbit_unchecked(gens, start).into_iter().collect();
        for &x in &orbit {
            owner[x] = id;
        }
        result.push(orbit);
    }
    result
}

fn check_degrees(degree: usize, gens: &[Perm]) -> Result<(), PermError> {
    for g in gens {
        if g.degree() != degree {
            return Err(PermError::DegreeMismatch {
                left: degree,
                right: g.degree(),
            });
        }
    }
    Ok(())
}

/// Outcome of enumerating `<gens>` under an element cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Closure {
    /// Every element, sorted by image array.
    Complete(Vec<Perm>),
    /// The group has more than `cap` elements; `reached` were found before stopping.
    Overflow { reached: usize },
}

/// Breadth-first product closure of `gens` on `degree` points.
pub fn closure(degree: usize, gens: &[Perm], cap: usize) -> Result<Closure, PermError> {
    if degree == 0 {
        return Err(PermError::EmptyDegree);
    }
    check_degrees(degree, gens)?;
    let identity = Perm::identity(degree);
    let mut seen: HashSet<Perm> = HashSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    let gens: Vec<&Perm> = gens.iter().filter(|g| !g.is_identity()).collect();
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = x.then(g);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Ok(Closure::Overflow {
                        reached: seen.len(),
                    });
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    let mut elements: Vec<Perm> = seen.into_iter().collect();
    elements.sort_unstable();
    Ok(Closure::Complete(elements))
}

/// A permutation group given by generators, with a lazily enumerated element list.
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    cap: usize,
    elements: OnceLock<Result<Vec<Perm>, PermError>>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<PermGroup, PermError> {
        PermGroup::with_cap(degree, generators, DEFAULT_ELEMENT_CAP)
    }

    pub fn with_cap(
        degree: usize,
        generators: Vec<Perm>,
        cap: usize,
    ) -> Result<PermGroup, PermError> {
        if degree == 0 {
            return Err(PermError::EmptyDegree);
        }
        check_degrees(degree, &generators)?;
        Ok(PermGroup {
            degree,
            generators,
            cap,
            elements: OnceLock::new(),
        })
    }

    /// A group whose full element list is already known (sorted internally).
    pub fn from_elements(degree: usize, mut elements: Vec<Perm>) -> Result<PermGroup, PermError> {
        elements.sort_unstable();
        elements.dedup();
        let group = PermGroup::with_cap(degree, elements.clone(), DEFAULT_ELEMENT_CAP.max(elements.len()))?;
        let _ = group.elements.set(Ok(elements));
        Ok(group)
    }

    /// Full symmetric group on `degree` points (transposition plus long cycle).
    pub fn symmetric(degree: usize) -> PermGroup {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Perm::from_cycles(degree, &[&[0, 1]]).expect("valid transposition"));
        }
        if degree >= 3 {
            let cycle: Vec<usize> = (0..degree).collect();
            gens.push(Perm::from_cycles(degree, &[&cycle]).expect("valid cycle"));
        }
        PermGroup::new(degree, gens).expect("consistent degrees")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Sorted element list; errors with `Overflow` if the group exceeds the cap.
    pub fn elements(&self) -> Result<&[Perm], PermError> {
        let stored = self.elements.get_or_init(|| {
            match closure(self.degree, &self.generators, self.cap)? {
                Closure::Complete(elements) => Ok(elements),
                Closure::Overflow { reached } => Err(PermError::Overflow {
                    cap: self.cap,
                    reached,
                }),
            }
        });
        stored.as_deref().map_err(Clone::clone)
    }

    pub fn order(&self) -> Result<usize, PermError> {
        self.elements().map(<[Perm]>::len)
    }

    pub fn is_member(&self, p: &Perm) -> Result<bool, PermError> {
        if p.degree() != self.degree {
            return Err(PermError::DegreeMismatch {
                left: self.degree,
                right: p.degree(),
            });
        }
        Ok(self.elements()?.binary_search(p).is_ok())
    }

    pub fn is_transitive(&self) -> bool {
        orbit_unchecked(&self.generators, 0).len() == self.degree
    }

    /// Transitive with order equal to the degree.
    pub fn is_regular(&self) -> bool {
        if !self.is_transitive() {
            return false;
        }
        // Enumerate at most `degree` elements: overflow means the order exceeds the degree.
        match closure(self.degree, &self.generators, self.degree) {
            Ok(Closure::Complete(elements)) => elements.len() == self.degree,
            _ => false,
        }
    }

    /// Sorted image arrays of every element; two groups are equal iff these match.
    pub fn fingerprint(&self) -> Result<Vec<Perm>, PermError> {
        Ok(self.elements()?.to_vec())
    }
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let elements = OnceLock::new();
        if let Some(stored) = self.elements.get() {
            let _ = elements.set(stored.clone());
        }
        PermGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            cap: self.cap,
            elements,
        }
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("generators", &self.generators)
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct PermGroupRepr {
    degree: usize,
    generators: Vec<Perm>,
}

impl Serialize for PermGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PermGroupRepr {
            degree: self.degree,
            generators: self.generators.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PermGroup {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<PermGroup, D::Error> {
        let repr = PermGroupRepr::deserialize(deserializer)?;
        PermGroup::new(repr.degree, repr.generators).map_err(serde::de::Error::custom)
    }
}

/// Whether `sub` is normal in `ambient`, assuming `sub <= ambient`.
///
/// Conjugation by each ambient generator maps the finite set `sub` into
/// itself, hence onto itself, so checking generator pairs suffices.
pub fn is_normal_subgroup(ambient: &PermGroup, sub: &PermGroup) -> Result<bool, PermError> {
    if ambient.degree() != sub.degree() {
        return Err(PermError::DegreeMismatch {
            left: ambient.degree(),
            right: sub.degree(),
        });
    }
    for a in ambient.generators() {
        for s in sub.generators() {
            if !sub.is_member(&s.conjugate_by(a))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Normality of `sub` under conjugation by a list of ambient generators.
pub fn is_normalized_by(gens: &[Perm], sub: &PermGroup) -> Result<bool, PermError> {
    for a in gens {
        for s in sub.generators() {
            if !sub.is_member(&s.conjugate_by(a))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
