//! Normality, the regular-subgroup census, and the NNN and CI verdicts for a
//! single Cayley digraph.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::aut::{cayley_automorphism_group, order_json, AutResult};
use crate::cayley::{CayleyDigraph, CayleyError};
use crate::group::{aut_stabilizer, Elem, GroupError, GroupSpec};
use crate::perm::{closure, Closure, Perm, PermError, PermGroup, DEFAULT_ELEMENT_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Cayley(#[from] CayleyError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(
        "normality tests disagree for {group} {set:?}: conjugation says {by_conjugation}, \
         order identity says {by_order}"
    )]
    Inconsistent {
        group: GroupSpec,
        set: Vec<usize>,
        by_conjugation: bool,
        by_order: bool,
    },
}

/// Tuning for [`classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Largest `|Aut|` whose elements may be enumerated for the census.
    pub cap: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            cap: DEFAULT_ELEMENT_CAP,
        }
    }
}

/// Babai verdict: `true`/`false`, or `"skipped"` when the census was too large.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CiVerdict {
    Ci,
    NotCi,
    Skipped,
}

impl CiVerdict {
    pub fn as_bool(self) -> Option<bool> {
        match self {
            CiVerdict::Ci => Some(true),
            CiVerdict::NotCi => Some(false),
            CiVerdict::Skipped => None,
        }
    }
}

impl Serialize for CiVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.as_bool() {
            Some(b) => s.serialize_bool(b),
            None => s.serialize_str("skipped"),
        }
    }
}

impl<'de> Deserialize<'de> for CiVerdict {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Bool(bool),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Bool(true) => Ok(CiVerdict::Ci),
            Repr::Bool(false) => Ok(CiVerdict::NotCi),
            Repr::Text(t) if t == "skipped" => Ok(CiVerdict::Skipped),
            Repr::Text(t) => Err(serde::de::Error::custom(format!(
                "expected a boolean or \"skipped\", got {t:?}"
            ))),
        }
    }
}

/// One classified Cayley digraph.
///
/// `n` is the number of vertices `|G|`. The census counts are `None` when
/// `Aut` was too large to enumerate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Classification {
    pub group: GroupSpec,
    pub n: usize,
    pub set: Vec<usize>,
    pub connected: bool,
    pub graph: bool,
    #[serde(with = "order_json")]
    pub aut_order: BigUint,
    pub normal: bool,
    pub regular_subgroups: Option<usize>,
    pub nonnormal_regular: Option<usize>,
    pub nnn: bool,
    pub ci: CiVerdict,
}

/// A regular subgroup of `Aut` isomorphic to `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularSubgroup {
    pub generators: Vec<Perm>,
    /// Sorted element list; equal subgroups have equal lists.
    pub elements: Vec<Perm>,
    /// Normal in `Aut`.
    pub normal: bool,
    /// Conjugate in `Aut` to `R(G)`.
    pub conjugate_to_regular: bool,
}

impl RegularSubgroup {
    pub fn contains(&self, p: &Perm) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn to_group(&self) -> PermGroup {
        let degree = self.elements[0].degree();
        PermGroup::from_elements(degree, self.elements.clone()).expect("consistent degree")
    }
}

/// Everything [`classify`] computes, kept for further checks.
#[derive(Debug, Clone)]
pub struct ClassifyReport {
    pub classification: Classification,
    pub digraph: CayleyDigraph,
    pub aut: AutResult,
    /// `|Aut(G, S)|`.
    pub stabilizer_order: usize,
    /// Elements of `Aut`, when within the cap.
    pub elements: Option<Vec<Perm>>,
    /// The census, when `elements` is present.
    pub regular: Option<Vec<RegularSubgroup>>,
}

/// Whether `p` is some `R(g)`; since `R(G)` is regular, `g` must be `p(1)`.
pub fn in_right_regular(g: &GroupSpec, p: &Perm) -> bool {
    let c = Elem(p.apply(0));
    g.elements().all(|x| p.apply(x.0) == g.mul(x, c).0)
}

/// `a^-1 R(G) a = R(G)`.
pub fn normalizes_right_regular(g: &GroupSpec, a: &Perm) -> bool {
    g.generators()
        .into_iter()
        .all(|x| in_right_regular(g, &g.right_mult(x).conjugate_by(a)))
}

/// `R(G)` is normal in `Aut(Cay(G, S))`, cross-checked against `|A| = |G| |Aut(G, S)|`.
pub fn is_normal_cayley(g: &GroupSpec, set: &[Elem], aut: &AutResult) -> Result<bool, ClassifyError> {
    let stabilizer = aut_stabilizer(g, set)?.len();
    normality(g, set, aut, stabilizer)
}

fn normality(
    g: &GroupSpec,
    set: &[Elem],
    aut: &AutResult,
    stabilizer: usize,
) -> Result<bool, ClassifyError> {
    let by_conjugation = aut.generators.iter().all(|a| normalizes_right_regular(g, a));
    let by_order = aut.order == BigUint::from(g.order() * stabilizer);
    if by_conjugation != by_order {
        return Err(ClassifyError::Inconsistent {
            group: *g,
            set: set.iter().map(|x| x.code()).collect(),
            by_conjugation,
            by_order,
        });
    }
    Ok(by_conjugation)
}

/// Order of the normalizer of `R(G)` in a group given by its element list.
pub fn normalizer_order(g: &GroupSpec, elements: &[Perm]) -> usize {
    elements
        .iter()
        .filter(|a| normalizes_right_regular(g, a))
        .count()
}

/// Regular subgroups of `Aut` isomorphic to `g`, as permutation groups.
pub fn enumerate_regular_subgroups(
    aut: &AutResult,
    g: &GroupSpec,
    cap: usize,
) -> Result<Vec<PermGroup>, PermError> {
    let elements = enumerate(aut, g.order(), cap)?;
    Ok(regular_subgroups_in(g, &elements)
        .into_iter()
        .map(|(gens, elements)| {
            let group = PermGroup::from_elements(g.order(), elements).expect("consistent degree");
            debug_assert!(!gens.is_empty() || g.order() == 1);
            group
        })
        .collect())
}

fn enumerate(aut: &AutResult, degree: usize, cap: usize) -> Result<Vec<Perm>, PermError> {
    if aut.order > BigUint::from(cap) {
        return Err(PermError::Overflow { cap, reached: 0 });
    }
    match closure(degree, &aut.generators, cap.max(1))? {
        Closure::Complete(elements) => Ok(elements),
        Closure::Overflow { reached } => Err(PermError::Overflow { cap, reached }),
    }
}

fn is_full_cycle(p: &Perm) -> bool {
    let lengths = p.cycle_lengths();
    lengths.len() == 1
}

/// `<x>`: powers `x^0, .., x^(m-1)`.
fn powers(x: &Perm, m: usize) -> Vec<Perm> {
    let mut out = Vec::with_capacity(m);
    let mut y = Perm::identity(x.degree());
    for _ in 0..m {
        out.push(y.clone());
        y = y.then(x);
    }
    out
}

fn coprime(a: usize, b: usize) -> bool {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a == 1
}

/// Distinct cyclic subgroups `<x>` for the `x` accepted by `keep`, each with
/// its least generator; `m` is the required order.
fn cyclic_subgroups<'a>(
    elements: &'a [Perm],
    m: usize,
    keep: impl Fn(&Perm) -> bool + 'a,
) -> impl Iterator<Item = (Perm, Vec<Perm>)> + 'a {
    elements.iter().filter(move |x| keep(x)).filter_map(move |x| {
        let pw = powers(x, m);
        let least = (1..m)
            .filter(|&k| coprime(k, m))
            .map(|k| &pw[k])
            .min()
            .expect("x generates");
        if least != x {
            return None;
        }
        let mut sorted = pw;
        sorted.sort_unstable();
        Some((x.clone(), sorted))
    })
}

/// `(generators, sorted elements)` of every regular subgroup isomorphic to `g`
/// inside the group with element list `elements`.
pub(crate) fn regular_subgroups_in(g: &GroupSpec, elements: &[Perm]) -> Vec<(Vec<Perm>, Vec<Perm>)> {
    let degree = g.order();
    if degree == 1 {
        return vec![(vec![], vec![Perm::identity(1)])];
    }
    if !g.is_dihedral() {
        return cyclic_subgroups(elements, degree, is_full_cycle)
            .map(|(x, els)| (vec![x], els))
            .collect();
    }

    let n = g.n();
    let rotation = |p: &Perm| {
        let lengths = p.cycle_lengths();
        lengths.len() == 2 && lengths[0] == n && lengths[1] == n
    };
    let involutions: Vec<&Perm> = elements
        .iter()
        .filter(|p| p.cycle_lengths().iter().all(|&l| l == 2))
        .collect();
    let mut found: BTreeSet<Vec<Perm>> = BTreeSet::new();
    let mut out = Vec::new();
    for (x, cyclic) in cyclic_subgroups(elements, n, rotation) {
        let x_inv = x.inverse();
        let mut used: HashSet<&Perm> = HashSet::new();
        for &y in &involutions {
            if used.contains(y) || cyclic.binary_search(y).is_ok() {
                continue;
            }
            if x.conjugate_by(y) != x_inv {
                continue;
            }
            let coset: Vec<Perm> = cyclic.iter().map(|c| c.then(y)).collect();
            if coset.iter().any(Perm::has_fixed_point) {
                continue;
            }
            for c in &coset {
                if let Some(&member) = involutions.iter().find(|&&i| i == c) {
                    used.insert(member);
                }
            }
            let mut all = cyclic.clone();
            all.extend(coset);
            all.sort_unstable();
            if found.insert(all.clone()) {
                out.push((vec![x.clone(), y.clone()], all));
            }
        }
    }
    out
}

fn is_normal_in(aut_gens: &[Perm], sub_gens: &[Perm], sub_elements: &[Perm]) -> bool {
    aut_gens.iter().all(|a| {
        sub_gens
            .iter()
            .all(|h| sub_elements.binary_search(&h.conjugate_by(a)).is_ok())
    })
}

/// Fingerprints of all conjugates of the subgroup with sorted elements `start`.
fn conjugacy_class(aut_gens: &[Perm], start: Vec<Perm>) -> HashSet<Vec<Perm>> {
    let mut class = HashSet::from([start.clone()]);
    let mut stack = vec![start];
    while let Some(sub) = stack.pop() {
        for a in aut_gens {
            let mut image: Vec<Perm> = sub.iter().map(|h| h.conjugate_by(a)).collect();
            image.sort_unstable();
            if !class.contains(&image) {
                class.insert(image.clone());
                stack.push(image);
            }
        }
    }
    class
}

/// The census on a known element list of `Aut`.
pub fn census(g: &GroupSpec, aut_gens: &[Perm], elements: &[Perm]) -> Vec<RegularSubgroup> {
    let mut regular_rep = g.right_regular_elements();
    regular_rep.sort_unstable();
    let class = conjugacy_class(aut_gens, regular_rep.clone());
    let subgroups: Vec<RegularSubgroup> = regular_subgroups_in(g, elements)
        .into_iter()
        .map(|(generators, elements)| RegularSubgroup {
            normal: is_normal_in(aut_gens, &generators, &elements),
            conjugate_to_regular: class.contains(&elements),
            generators,
            elements,
        })
        .collect();
    debug_assert!(subgroups.iter().any(|h| h.elements == regular_rep));
    subgroups
}

/// Classifies `Cay(g, set)` with default options.
pub fn classify(g: GroupSpec, set: &[usize]) -> Result<Classification, ClassifyError> {
    classify_with(g, set, ClassifyOptions::default())
}

pub fn classify_with(
    g: GroupSpec,
    set: &[usize],
    options: ClassifyOptions,
) -> Result<Classification, ClassifyError> {
    classify_report(g, set, options).map(|r| r.classification)
}

/// [`classify_with`], keeping the automorphism group and the census.
pub fn classify_report(
    g: GroupSpec,
    set: &[usize],
    options: ClassifyOptions,
) -> Result<ClassifyReport, ClassifyError> {
    let digraph = CayleyDigraph::from_codes(g, set)?;
    let aut = cayley_automorphism_group(&digraph);
    let stabilizer_order = aut_stabilizer(&g, digraph.connection_set())?.len();
    let normal = normality(&g, digraph.connection_set(), &aut, stabilizer_order)?;

    let (elements, regular) = match enumerate(&aut, g.order(), options.cap) {
        Ok(elements) => {
            let regular = census(&g, &aut.generators, &elements);
            (Some(elements), Some(regular))
        }
        Err(PermError::Overflow { .. }) => (None, None),
        Err(e) => return Err(e.into()),
    };
    let (regular_count, nonnormal, ci) = match &regular {
        Some(list) => {
            let ci = if list.iter().all(|h| h.conjugate_to_regular) {
                CiVerdict::Ci
            } else {
                CiVerdict::NotCi
            };
            (
                Some(list.len()),
                Some(list.iter().filter(|h| !h.normal).count()),
                ci,
            )
        }
        None => (None, None, CiVerdict::Skipped),
    };
    let classification = Classification {
        group: g,
        n: g.order(),
        set: digraph.codes(),
        connected: digraph.is_connected(),
        graph: digraph.is_graph(),
        aut_order: aut.order.clone(),
        normal,
        regular_subgroups: regular_count,
        nonnormal_regular: nonnormal,
        nnn: normal && nonnormal.unwrap_or(0) >= 1,
        ci,
    };
    Ok(ClassifyReport {
        classification,
        digraph,
        aut,
        stabilizer_order,
        elements,
        regular,
    })
}
