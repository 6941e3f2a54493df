//! Cayley digraphs `Cay(G, S)` on cyclic and dihedral groups.
//!
//! Vertices are element codes; there is an arc `u -> s u` for every vertex `u`
//! and every `s` in `S`. Right multiplications `R(g)` are therefore always
//! automorphisms.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::{Digraph, DigraphError};
use crate::group::{Elem, GroupError, GroupSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CayleyError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Digraph(#[from] DigraphError),
    #[error("{{{u}, {v}}} is not an edge")]
    NotAnEdge { u: usize, v: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyDigraph {
    group: GroupSpec,
    set: Vec<Elem>,
    graph: Digraph,
}

impl CayleyDigraph {
    pub fn build(group: GroupSpec, set: &[Elem]) -> Result<CayleyDigraph, CayleyError> {
        let codes: Vec<usize> = set.iter().map(|x| x.code()).collect();
        let set = group.connection_set(&codes)?;
        let mut graph = Digraph::new(group.order())?;
        for u in group.elements() {
            for &s in &set {
                graph.add_arc(u.code(), group.mul(s, u).code())?;
            }
        }
        Ok(CayleyDigraph { group, set, graph })
    }

    pub fn from_codes(group: GroupSpec, codes: &[usize]) -> Result<CayleyDigraph, CayleyError> {
        let set: Vec<Elem> = codes.iter().copied().map(Elem).collect();
        CayleyDigraph::build(group, &set)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    /// The connection set, sorted by code.
    pub fn connection_set(&self) -> &[Elem] {
        &self.set
    }

    pub fn codes(&self) -> Vec<usize> {
        self.set.iter().map(|x| x.code()).collect()
    }

    pub fn digraph(&self) -> &Digraph {
        &self.graph
    }

    /// `<S> = G`; agrees with weak connectivity of the arc set.
    pub fn is_connected(&self) -> bool {
        let by_group = self.group.subgroup(&self.set).len() == self.group.order();
        debug_assert_eq!(by_group, self.graph.is_weakly_connected());
        by_group
    }

    /// `S = S^-1`.
    pub fn is_graph(&self) -> bool {
        is_graph(&self.group, &self.set)
    }

    /// Number of distinct 4-cycles (counted by vertex set) through the edge `{u, v}`.
    pub fn count_4cycles_through_arc(&self, u: usize, v: usize) -> Result<usize, CayleyError> {
        let g = &self.graph;
        let n = g.vertex_count();
        if u >= n || v >= n || !g.has_arc(u, v) || !g.has_arc(v, u) {
            return Err(CayleyError::NotAnEdge { u, v });
        }
        let adjacent = |x: usize, y: usize| g.has_arc(x, y) && g.has_arc(y, x);
        let neighbours = |x: usize| (0..n).filter(move |&y| adjacent(x, y));
        let mut cycles = BTreeSet::new();
        // u - v - w - x - u
        for w in neighbours(v).filter(|&w| w != u) {
            for x in neighbours(u).filter(|&x| x != v && x != w) {
                if adjacent(w, x) {
                    let mut key = [u, v, w, x];
                    key.sort_unstable();
                    cycles.insert(key);
                }
            }
        }
        Ok(cycles.len())
    }
}

/// Whether `set` is closed under inversion.
pub fn is_graph(group: &GroupSpec, set: &[Elem]) -> bool {
    let members: BTreeSet<Elem> = set.iter().copied().collect();
    members.iter().all(|&x| members.contains(&group.inverse(x)))
}

#[derive(Serialize, Deserialize)]
struct CayleyRepr {
    group: GroupSpec,
    set: Vec<usize>,
}

impl Serialize for CayleyDigraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CayleyRepr {
            group: self.group,
            set: self.codes(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CayleyDigraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = CayleyRepr::deserialize(d)?;
        CayleyDigraph::from_codes(repr.group, &repr.set).map_err(serde::de::Error::custom)
    }
}
