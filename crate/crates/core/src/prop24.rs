//! A checker for a sufficient condition for non-normality: a nontrivial
//! `L <= Aut(G, S)` and a normal `K <= G` whose right cosets are each fixed
//! pointwise by `L` or form a single `<L>`-orbit, together with one of three
//! conditions on the fixed subgroup `F_G(L)`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{aut_group, fixed_points, Elem, GroupAut, GroupError, GroupSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Prop24Error {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("L must contain a nontrivial automorphism")]
    TrivialL,
    #[error("{0:?} does not fix the connection set")]
    NotInStabilizer(GroupAut),
    #[error("K is not a subgroup")]
    KNotSubgroup,
    #[error("K is not normal")]
    KNotNormal,
    #[error("coset K{representative} is neither fixed pointwise nor a single orbit of L")]
    CosetCondition { representative: usize },
}

/// Which sufficient condition fired, with its witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition")]
pub enum Condition {
    /// `|G : F_G(L)| > 2`.
    #[serde(rename = "1")]
    LargeIndex,
    /// Index 2, and `k^g != k^-1` for these `g` outside `F_G(L)` and `k` in `K`.
    #[serde(rename = "2")]
    NonInverting { g: usize, k: usize },
    /// Index 2, and `gamma` fixes `S` and every coset of `K` with `F_G(<gamma>) != F_G(L)`.
    #[serde(rename = "3")]
    CosetFixing { gamma: GroupAut },
}

impl Condition {
    pub fn number(&self) -> u8 {
        match self {
            Condition::LargeIndex => 1,
            Condition::NonInverting { .. } => 2,
            Condition::CosetFixing { .. } => 3,
        }
    }
}

/// A self-contained non-normality certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop24Certificate {
    pub group: GroupSpec,
    pub set: Vec<usize>,
    pub l: Vec<GroupAut>,
    /// Elements of `K`, sorted.
    pub k: Vec<usize>,
    /// `|G : F_G(L)|`.
    pub fixed_index: usize,
    #[serde(flatten)]
    pub condition: Condition,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Prop24Outcome {
    Certified(Prop24Certificate),
    Inconclusive,
}

impl Prop24Outcome {
    pub fn certificate(&self) -> Option<&Prop24Certificate> {
        match self {
            Prop24Outcome::Certified(c) => Some(c),
            Prop24Outcome::Inconclusive => None,
        }
    }
}

fn fixes_set(g: &GroupSpec, sigma: &GroupAut, set: &[Elem]) -> bool {
    sigma.apply_set(g, set) == set
}

/// Orbit of `x` under the group generated by `l`.
fn l_orbit(g: &GroupSpec, l: &[GroupAut], x: Elem) -> BTreeSet<Elem> {
    let mut seen = BTreeSet::from([x]);
    let mut stack = vec![x];
    while let Some(y) = stack.pop() {
        for sigma in l {
            let z = sigma.apply(g, y);
            if seen.insert(z) {
                stack.push(z);
            }
        }
    }
    seen
}

/// Right cosets `Kg`, each sorted, in order of least element.
fn right_cosets(g: &GroupSpec, k: &[Elem]) -> Vec<Vec<Elem>> {
    let mut covered = vec![false; g.order()];
    let mut cosets = Vec::new();
    for x in g.elements() {
        if covered[x.0] {
            continue;
        }
        let mut coset: Vec<Elem> = k.iter().map(|&y| g.mul(y, x)).collect();
        coset.sort_unstable();
        for y in &coset {
            covered[y.0] = true;
        }
        cosets.push(coset);
    }
    cosets
}

struct Checked {
    set: Vec<Elem>,
    k: Vec<Elem>,
    fixed: Vec<Elem>,
}

fn check_hypotheses(
    g: &GroupSpec,
    set: &[usize],
    l: &[GroupAut],
    k: &[usize],
) -> Result<Checked, Prop24Error> {
    let set = g.connection_set(set)?;
    for sigma in l {
        if !sigma.is_automorphism(g) {
            return Err(GroupError::BadElement(format!("{sigma:?} is not an automorphism")).into());
        }
    }
    if l.iter().all(|sigma| sigma.is_identity(g)) {
        return Err(Prop24Error::TrivialL);
    }
    if let Some(sigma) = l.iter().find(|sigma| !fixes_set(g, sigma, &set)) {
        return Err(Prop24Error::NotInStabilizer(sigma.clone()));
    }
    let mut kk = Vec::with_capacity(k.len());
    for &c in k {
        kk.push(g.check(Elem(c))?);
    }
    kk.sort_unstable();
    kk.dedup();
    if !g.is_subgroup(&kk) {
        return Err(Prop24Error::KNotSubgroup);
    }
    let normal = g
        .elements()
        .all(|x| kk.iter().all(|&y| kk.binary_search(&g.conjugate(y, x)).is_ok()));
    if !normal {
        return Err(Prop24Error::KNotNormal);
    }
    for coset in right_cosets(g, &kk) {
        let pointwise = coset
            .iter()
            .all(|&x| l.iter().all(|sigma| sigma.apply(g, x) == x));
        let one_orbit = l_orbit(g, l, coset[0]).into_iter().eq(coset.iter().copied());
        if !pointwise && !one_orbit {
            return Err(Prop24Error::CosetCondition {
                representative: coset[0].code(),
            });
        }
    }
    let fixed = fixed_points(g, l);
    Ok(Checked { set, k: kk, fixed })
}

fn fixes_every_coset(g: &GroupSpec, gamma: &GroupAut, k: &[Elem]) -> bool {
    right_cosets(g, k).iter().all(|coset| {
        coset
            .iter()
            .all(|&x| coset.binary_search(&gamma.apply(g, x)).is_ok())
    })
}

/// Verifies the hypotheses, then tries conditions (1), (2), (3) in order.
pub fn prop24_certify(
    g: &GroupSpec,
    set: &[usize],
    l: &[GroupAut],
    k: &[usize],
) -> Result<Prop24Outcome, Prop24Error> {
    let checked = check_hypotheses(g, set, l, k)?;
    let fixed_index = g.order() / checked.fixed.len();
    let certificate = |condition| {
        Prop24Outcome::Certified(Prop24Certificate {
            group: *g,
            set: checked.set.iter().map(|x| x.code()).collect(),
            l: l.to_vec(),
            k: checked.k.iter().map(|x| x.code()).collect(),
            fixed_index,
            condition,
        })
    };
    if fixed_index > 2 {
        return Ok(certificate(Condition::LargeIndex));
    }
    if fixed_index != 2 {
        return Ok(Prop24Outcome::Inconclusive);
    }
    for x in g.elements().filter(|x| checked.fixed.binary_search(x).is_err()) {
        if let Some(&y) = checked
            .k
            .iter()
            .find(|&&y| g.conjugate(y, x) != g.inverse(y))
        {
            return Ok(certificate(Condition::NonInverting {
                g: x.code(),
                k: y.code(),
            }));
        }
    }
    for gamma in aut_group(g) {
        if gamma.is_identity(g) || !fixes_set(g, &gamma, &checked.set) {
            continue;
        }
        if fixed_points(g, std::slice::from_ref(&gamma)) == checked.fixed {
            continue;
        }
        if fixes_every_coset(g, &gamma, &checked.k) {
            return Ok(certificate(Condition::CosetFixing { gamma }));
        }
    }
    Ok(Prop24Outcome::Inconclusive)
}

impl Prop24Certificate {
    /// Re-derives every clause from the stored witnesses.
    pub fn recheck(&self) -> Result<(), Prop24Error> {
        let g = &self.group;
        let checked = check_hypotheses(g, &self.set, &self.l, &self.k)?;
        let index = g.order() / checked.fixed.len();
        let bad = |what: &str| Err(GroupError::Precondition(format!("certificate: {what}")).into());
        if index != self.fixed_index {
            return bad("stored index is wrong");
        }
        match &self.condition {
            Condition::LargeIndex if index > 2 => Ok(()),
            Condition::NonInverting { g: x, k: y } if index == 2 => {
                let (x, y) = (g.check(Elem(*x))?, g.check(Elem(*y))?);
                if checked.fixed.binary_search(&x).is_ok()
                    || checked.k.binary_search(&y).is_err()
                    || g.conjugate(y, x) == g.inverse(y)
                {
                    return bad("condition (2) witnesses do not hold");
                }
                Ok(())
            }
            Condition::CosetFixing { gamma } if index == 2 => {
                if !gamma.is_automorphism(g)
                    || gamma.is_identity(g)
                    || !fixes_set(g, gamma, &checked.set)
                    || fixed_points(g, std::slice::from_ref(gamma)) == checked.fixed
                    || !fixes_every_coset(g, gamma, &checked.k)
                {
                    return bad("condition (3) witness does not hold");
                }
                Ok(())
            }
            _ => bad("condition does not match the index"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify;
    use crate::group::construct_alpha_i;

    #[test]
    fn cyclic_nine_fires_condition_one() {
        let g = GroupSpec::cyclic(9);
        let alpha = construct_alpha_i(9, 0).unwrap();
        assert_eq!(alpha, GroupAut::Cyclic { r: 4 });
        let out = prop24_certify(&g, &[1, 4, 7], &[alpha], &[0, 3, 6]).unwrap();
        let cert = out.certificate().unwrap();
        assert_eq!(cert.condition, Condition::LargeIndex);
        assert_eq!(cert.fixed_index, 3);
        cert.recheck().unwrap();
        assert!(!classify(g, &[1, 4, 7]).unwrap().normal);
    }

    #[test]
    fn dihedral_sixteen_fires_condition_three() {
        let g = GroupSpec::dihedral(8);
        // gamma^4: b -> a^4 b; beta: a -> a^5
        let gamma4 = GroupAut::Dihedral { r: 1, s: 4 };
        let set = [1, 5, 8, 12];
        let out = prop24_certify(&g, &set, &[gamma4], &[0, 4]).unwrap();
        let cert = out.certificate().unwrap();
        assert_eq!(
            cert.condition,
            Condition::CosetFixing {
                gamma: GroupAut::Dihedral { r: 5, s: 0 }
            }
        );
        assert_eq!(cert.fixed_index, 2);
        cert.recheck().unwrap();
        assert!(!classify(g, &set).unwrap().normal);
    }

    #[test]
    fn hypothesis_errors() {
        let g = GroupSpec::cyclic(9);
        assert_eq!(
            prop24_certify(&g, &[1, 4, 7], &[GroupAut::Cyclic { r: 1 }], &[0, 3, 6]),
            Err(Prop24Error::TrivialL)
        );
        assert_eq!(
            prop24_certify(&g, &[1], &[GroupAut::Cyclic { r: 4 }], &[0, 3, 6]),
            Err(Prop24Error::NotInStabilizer(GroupAut::Cyclic { r: 4 }))
        );
        assert_eq!(
            prop24_certify(&g, &[1, 4, 7], &[GroupAut::Cyclic { r: 4 }], &[0, 3]),
            Err(Prop24Error::KNotSubgroup)
        );
        // <b> is not normal in D_6
        let d6 = GroupSpec::dihedral(3);
        assert_eq!(
            prop24_certify(&d6, &[3], &[GroupAut::Dihedral { r: 2, s: 0 }], &[0, 3]),
            Err(Prop24Error::KNotNormal)
        );
        // trivial K: every nonfixed singleton coset fails the orbit clause
        assert!(matches!(
            prop24_certify(&g, &[1, 4, 7], &[GroupAut::Cyclic { r: 4 }], &[0]),
            Err(Prop24Error::CosetCondition { representative: 1 })
        ));
    }

    #[test]
    fn certificate_json_round_trip() {
        let g = GroupSpec::dihedral(8);
        let out = prop24_certify(&g, &[1, 5, 8, 12], &[GroupAut::Dihedral { r: 1, s: 4 }], &[0, 4])
            .unwrap();
        let cert = out.certificate().unwrap();
        let json = serde_json::to_string(cert).unwrap();
        assert!(json.contains(r#""condition":"3","gamma":{"r":5,"s":0}"#));
        let back: Prop24Certificate = serde_json::from_str(&json).unwrap();
        assert_eq!(&back, cert);
    }
}
