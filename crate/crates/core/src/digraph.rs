//! Simple digraphs on at most 64 vertices, one `u64` bit-row per vertex.

use std::fmt::Write as _;

use thiserror::Error;

use crate::perm::Perm;

pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DigraphError {
    #[error("{0} vertices exceeds the limit of {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("a digraph needs at least one vertex")]
    Empty,
    #[error("vertex {vertex} out of range for {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    out: Vec<u64>,
    inn: Vec<u64>,
}

#[inline]
fn bit(v: usize) -> u64 {
    1u64 << v
}

impl Digraph {
    /// The empty digraph on `n` vertices.
    pub fn new(n: usize) -> Result<Digraph, DigraphError> {
        if n == 0 {
            return Err(DigraphError::Empty);
        }
        if n > MAX_VERTICES {
            return Err(DigraphError::TooManyVertices(n));
        }
        Ok(Digraph {
            n,
            out: vec![0; n],
            inn: vec![0; n],
        })
    }

    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Digraph, DigraphError> {
        let mut g = Digraph::new(n)?;
        for &(u, v) in arcs {
            g.add_arc(u, v)?;
        }
        Ok(g)
    }

    /// Undirected cycle on `n` vertices.
    pub fn cycle(n: usize) -> Digraph {
        let mut g = Digraph::new(n).expect("vertex count in range");
        for u in 0..n {
            let v = (u + 1) % n;
            g.add_arc(u, v).expect("in range");
            g.add_arc(v, u).expect("in range");
        }
        g
    }

    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<(), DigraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(DigraphError::VertexOutOfRange {
                    vertex: w,
                    count: self.n,
                });
            }
        }
        self.out[u] |= bit(v);
        self.inn[v] |= bit(u);
        Ok(())
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u] & bit(v) != 0
    }

    /// Out-neighbourhood of `u` as a bitmask.
    #[inline]
    pub fn out_row(&self, u: usize) -> u64 {
        self.out[u]
    }

    /// In-neighbourhood of `u` as a bitmask.
    #[inline]
    pub fn in_row(&self, u: usize) -> u64 {
        self.inn[u]
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out[u].count_ones() as usize
    }

    pub fn in_degree(&self, u: usize) -> usize {
        self.inn[u].count_ones() as usize
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|r| r.count_ones() as usize).sum()
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut arcs = Vec::with_capacity(self.arc_count());
        for u in 0..self.n {
            let mut row = self.out[u];
            while row != 0 {
                let v = row.trailing_zeros() as usize;
                arcs.push((u, v));
                row &= row - 1;
            }
        }
        arcs
    }

    pub fn is_symmetric(&self) -> bool {
        self.out == self.inn
    }

    pub fn has_loops(&self) -> bool {
        (0..self.n).any(|u| self.has_arc(u, u))
    }

    /// Connectivity of the underlying undirected graph.
    pub fn is_weakly_connected(&self) -> bool {
        let all = if self.n == 64 { u64::MAX } else { bit(self.n) - 1 };
        let mut reached = bit(0);
        let mut frontier = bit(0);
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let u = f.trailing_zeros() as usize;
                next |= self.out[u] | self.inn[u];
                f &= f - 1;
            }
            frontier = next & !reached;
            reached |= next;
        }
        reached == all
    }

    /// Maps a bitmask of vertices through a permutation.
    #[inline]
    pub fn map_mask(mask: u64, perm: &[usize]) -> u64 {
        let mut out = 0;
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            out |= bit(perm[v]);
            m &= m - 1;
        }
        out
    }

    /// Whether the vertex permutation maps the arc set onto itself.
    pub fn is_automorphism(&self, perm: &Perm) -> bool {
        perm.degree() == self.n && self.preserves_arcs(perm.images())
    }

    pub(crate) fn preserves_arcs(&self, images: &[usize]) -> bool {
        (0..self.n).all(|u| Digraph::map_mask(self.out[u], images) == self.out[images[u]])
    }

    /// The digraph with every vertex `v` renamed to `perm(v)`.
    pub fn relabel(&self, perm: &Perm) -> Digraph {
        let mut g = Digraph::new(self.n).expect("same size");
        for (u, v) in self.arcs() {
            g.add_arc(perm.apply(u), perm.apply(v)).expect("in range");
        }
        g
    }

    /// One `u v` line per arc.
    pub fn edge_list(&self) -> String {
        let mut s = String::new();
        for (u, v) in self.arcs() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }
}
