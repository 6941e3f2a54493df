//! The dihedral NNN family and its non-normal regular witness, and the
//! structural check on regular cyclic subgroups of normal circulants.

use thiserror::Error;

use crate::aut::{cayley_automorphism_group, AutResult};
use crate::cayley::{CayleyDigraph, CayleyError};
use crate::classify::{is_normal_cayley, ClassifyError};
use crate::group::{gcd, CyclicFactorization, Elem, GroupAut, GroupError, GroupSpec};
use crate::perm::{Perm, PermError, PermGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("{0}")]
    Precondition(String),
    #[error(transparent)]
    Cayley(#[from] CayleyError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

fn check_family_n(n: usize) -> Result<(), ConstructError> {
    if n % 2 == 1 || n < 6 {
        return Err(ConstructError::Precondition(format!(
            "n = {n}: the construction needs n even and n >= 6"
        )));
    }
    if n == 8 {
        return Err(ConstructError::Precondition(
            "n = 8 is excluded: D_16 admits no NNN digraph".into(),
        ));
    }
    Ok(())
}

/// `{a, a^-1, b, a^(n/2) b}` when `n/2` is odd, and
/// `{a, a^-1, b, a^(n/4) b, a^(n/2) b, a^(3n/4) b}` when `n/2` is even.
pub fn lemma41_set(n: usize) -> Result<Vec<Elem>, ConstructError> {
    check_family_n(n)?;
    let g = GroupSpec::dihedral(n);
    let n_i = n as i64;
    let mut set = vec![g.a_pow(1), g.a_pow(-1), g.a_pow_b(0), g.a_pow_b(n_i / 2)];
    if (n / 2).is_multiple_of(2) {
        set.push(g.a_pow_b(n_i / 4));
        set.push(g.a_pow_b(3 * n_i / 4));
    }
    set.sort_unstable();
    Ok(set)
}

/// The subgroup `<R(ab) alpha, R(b)>` of `Sym(D_2n)`, with `alpha: a -> a^-1, b -> b`.
#[derive(Debug, Clone)]
pub struct Lemma41Witness {
    pub n: usize,
    /// `x = R(ab) alpha`.
    pub x: Perm,
    /// `y = R(b)`.
    pub y: Perm,
    pub group: PermGroup,
}

/// Properties of a witness measured against the digraph's automorphism group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessCheck {
    pub order: usize,
    pub regular: bool,
    pub x_order: u64,
    pub dihedral_relation: bool,
    pub inside_aut: bool,
    pub normal_in_aut: bool,
}

pub fn lemma41_witness(n: usize) -> Result<Lemma41Witness, ConstructError> {
    check_family_n(n)?;
    let g = GroupSpec::dihedral(n);
    let alpha = GroupAut::Dihedral { r: n - 1, s: 0 }.to_perm(&g);
    let ab = g.mul(g.a_pow(1), g.a_pow_b(0));
    let x = g.right_mult(ab).then(&alpha);
    let y = g.right_mult(g.a_pow_b(0));
    let group = PermGroup::new(g.order(), vec![x.clone(), y.clone()])?;
    Ok(Lemma41Witness { n, x, y, group })
}

impl Lemma41Witness {
    /// Order, regularity, the relations, and normality inside `aut`.
    pub fn check(&self, aut: &AutResult) -> Result<WitnessCheck, ConstructError> {
        let order = self.group.order()?;
        let digraph = CayleyDigraph::build(
            GroupSpec::dihedral(self.n),
            &lemma41_set(self.n)?,
        )?;
        let inside_aut = self
            .group
            .generators()
            .iter()
            .all(|h| digraph.digraph().is_automorphism(h));
        let normal_in_aut = aut.generators.iter().all(|a| {
            self.group
                .generators()
                .iter()
                .all(|h| self.group.is_member(&h.conjugate_by(a)).unwrap_or(false))
        });
        Ok(WitnessCheck {
            order,
            regular: self.group.is_regular(),
            x_order: self.x.order(),
            dihedral_relation: self.y.order() == 2 && self.x.conjugate_by(&self.y) == self.x.inverse(),
            inside_aut,
            normal_in_aut,
        })
    }
}

/// `Cay(D_2n, lemma41_set(n))`.
pub fn lemma41_digraph(n: usize) -> Result<CayleyDigraph, ConstructError> {
    Ok(CayleyDigraph::build(GroupSpec::dihedral(n), &lemma41_set(n)?)?)
}

/// Checks, for a regular cyclic subgroup `h` of `Aut(Cay(C_n, S))` with the
/// digraph normal, that the Sylow `p`-subgroup of `h` equals that of `R(C_n)`
/// for every odd prime `p`, and that every element of `h` is `R(c)` followed by
/// an automorphism of `C_n` fixing `S` and trivial on the odd part.
pub fn lemma32_check(g: &GroupSpec, set: &[usize], h: &PermGroup) -> Result<bool, ConstructError> {
    if g.is_dihedral() {
        return Err(ConstructError::Precondition("the group must be cyclic".into()));
    }
    let digraph = CayleyDigraph::from_codes(*g, set)?;
    let aut = cayley_automorphism_group(&digraph);
    if !is_normal_cayley(g, digraph.connection_set(), &aut)? {
        return Err(ConstructError::Precondition("the digraph is not normal".into()));
    }
    if h.degree() != g.order() || !h.is_regular() {
        return Err(ConstructError::Precondition("H is not regular on the vertices".into()));
    }
    if !h.generators().iter().all(|p| digraph.digraph().is_automorphism(p)) {
        return Err(ConstructError::Precondition("H is not inside Aut".into()));
    }
    let elements = h.elements()?;
    if g.order() > 1 && !elements.iter().any(|p| p.cycle_lengths().len() == 1) {
        return Err(ConstructError::Precondition("H is not cyclic".into()));
    }
    Ok(lemma32_holds(g, digraph.connection_set(), elements))
}

/// [`lemma32_check`] without the precondition checks.
pub fn lemma32_holds(g: &GroupSpec, set: &[Elem], h_elements: &[Perm]) -> bool {
    let n = g.order();
    if n == 1 {
        return true;
    }
    let x = h_elements
        .iter()
        .find(|p| p.cycle_lengths().len() == 1)
        .expect("cyclic and regular");
    let fact = CyclicFactorization::new(n);
    for (i, &(p, _)) in fact.factors().iter().enumerate() {
        if p == 2 {
            continue;
        }
        let q = fact.prime_power(i);
        let mut from_h = cyclic_elements(&x.pow((n / q) as u64), q);
        let mut from_r = cyclic_elements(&g.right_mult(fact.component_generator(i)), q);
        from_h.sort_unstable();
        from_r.sort_unstable();
        if from_h != from_r {
            return false;
        }
    }
    let odd_part = n >> fact.valuation(2);
    h_elements.iter().all(|h| {
        // h = R(c) followed by sigma, with sigma fixing 0
        let c = h.apply(0);
        let r = (h.apply(1) + n - c) % n;
        let affine = (0..n).all(|v| h.apply(v) == (r * v + c) % n);
        affine
            && gcd(r, n) == 1
            && r % odd_part == 1 % odd_part
            && GroupAut::Cyclic { r }.apply_set(g, set) == set
    })
}

fn cyclic_elements(x: &Perm, m: usize) -> Vec<Perm> {
    let mut out = Vec::with_capacity(m);
    let mut y = Perm::identity(x.degree());
    for _ in 0..m {
        out.push(y.clone());
        y = y.then(x);
    }
    out
}
