//! Automorphism groups of digraphs on at most 64 vertices.
//!
//! [`automorphism_group`] is an individualization-refinement search. The
//! leftmost path of the search tree fixes a base `b_0, .., b_k`; for each level
//! (deepest first) the orbit of `b_i` under the pointwise stabilizer of
//! `b_0, .., b_{i-1}` is completed by searching, for every candidate in the
//! target cell not already reached, for a leaf equivalent to the reference
//! leaf. The group order is the product of those orbit lengths, so groups of
//! factorial order never need to be enumerated.
//!
//! [`brute_force_aut`] filters all `n!` permutations and serves as an oracle
//! for small digraphs.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cayley::CayleyDigraph;
use crate::digraph::{Digraph, MAX_VERTICES};
use crate::perm::{orbit_unchecked, Perm, PermError, PermGroup};

/// Largest vertex count accepted by [`brute_force_aut`].
pub const BRUTE_FORCE_MAX_VERTICES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error("{vertices} vertices exceeds the limit of {limit}")]
    TooManyVertices { vertices: usize, limit: usize },
    #[error("seed permutation {0} is not an automorphism")]
    BadSeed(Perm),
    #[error("invalid partition: {0}")]
    BadPartition(String),
}

/// An ordered partition of the vertex set. Vertices inside a cell are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    cells: Vec<Vec<usize>>,
}

impl Partition {
    pub fn unit(n: usize) -> Partition {
        Partition {
            cells: vec![(0..n).collect()],
        }
    }

    pub fn discrete(order: &[usize]) -> Partition {
        Partition {
            cells: order.iter().map(|&v| vec![v]).collect(),
        }
    }

    pub fn from_cells(n: usize, mut cells: Vec<Vec<usize>>) -> Result<Partition, AutError> {
        let mut seen = vec![false; n];
        for cell in &mut cells {
            if cell.is_empty() {
                return Err(AutError::BadPartition("empty cell".into()));
            }
            cell.sort_unstable();
            for &v in cell.iter() {
                if v >= n || seen[v] {
                    return Err(AutError::BadPartition(format!(
                        "vertex {v} repeated or out of range"
                    )));
                }
                seen[v] = true;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(AutError::BadPartition("cells do not cover all vertices".into()));
        }
        Ok(Partition { cells })
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn is_discrete(&self) -> bool {
        self.cells.iter().all(|c| c.len() == 1)
    }

    pub fn cell_sizes(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    fn first_nonsingleton(&self) -> Option<usize> {
        self.cells.iter().position(|c| c.len() > 1)
    }

    /// Splits `v` off the front of cell `cell`.
    fn individualize(&self, cell: usize, v: usize) -> Partition {
        let mut cells = Vec::with_capacity(self.cells.len() + 1);
        cells.extend_from_slice(&self.cells[..cell]);
        cells.push(vec![v]);
        cells.push(self.cells[cell].iter().copied().filter(|&x| x != v).collect());
        cells.extend_from_slice(&self.cells[cell + 1..]);
        Partition { cells }
    }

    /// Vertex order of a discrete partition.
    fn leaf_order(&self) -> Vec<usize> {
        self.cells.iter().map(|c| c[0]).collect()
    }
}

fn mask_of(cell: &[usize]) -> u64 {
    cell.iter().fold(0, |m, &v| m | 1u64 << v)
}

/// Coarsest equitable refinement of `p`.
///
/// A cell is split by the `(out-count, in-count)` signatures of its vertices
/// against a splitter cell; fragments are ordered by ascending signature and
/// replace the cell in place. Passes over all splitters repeat until stable.
pub fn refine(g: &Digraph, p: &Partition) -> Partition {
    refine_traced(g, p).0
}

/// [`refine`] plus a hash of the splitting history; isomorphic inputs give equal traces.
fn refine_traced(g: &Digraph, p: &Partition) -> (Partition, u64) {
    let mut cells = p.cells.clone();
    let mut trace = DefaultHasher::new();
    let mut sigs: Vec<(u32, u32, usize)> = Vec::with_capacity(g.vertex_count());
    loop {
        let mut changed = false;
        let mut w = 0;
        while w < cells.len() {
            let splitter = mask_of(&cells[w]);
            let mut x = 0;
            while x < cells.len() {
                if cells[x].len() == 1 {
                    x += 1;
                    continue;
                }
                sigs.clear();
                sigs.extend(cells[x].iter().map(|&v| {
                    (
                        (g.out_row(v) & splitter).count_ones(),
                        (g.in_row(v) & splitter).count_ones(),
                        v,
                    )
                }));
                let first = (sigs[0].0, sigs[0].1);
                if sigs.iter().all(|s| (s.0, s.1) == first) {
                    x += 1;
                    continue;
                }
                sigs.sort_unstable();
                let mut fragments: Vec<Vec<usize>> = Vec::new();
                let mut last = None;
                for &(o, i, v) in &sigs {
                    if last != Some((o, i)) {
                        (w, x, o, i).hash(&mut trace);
                        fragments.push(Vec::new());
                        last = Some((o, i));
                    }
                    fragments.last_mut().expect("pushed above").push(v);
                }
                for f in &fragments {
                    f.len().hash(&mut trace);
                }
                let count = fragments.len();
                cells.splice(x..=x, fragments);
                x += count;
                changed = true;
            }
            w += 1;
        }
        if !changed {
            break;
        }
    }
    cells.len().hash(&mut trace);
    (Partition { cells }, trace.finish())
}

/// Generators and exact order of a digraph's automorphism group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutResult {
    #[serde(with = "order_json")]
    pub order: BigUint,
    pub generators: Vec<Perm>,
    /// Base points of the search, when the result came from it.
    #[serde(skip)]
    pub base: Vec<usize>,
    /// Orbit length of each base point under the stabilizer of the earlier ones.
    #[serde(skip)]
    pub orbit_lengths: Vec<usize>,
}

impl AutResult {
    /// The order as a `u64`, if it fits.
    pub fn order_u64(&self) -> Option<u64> {
        u64::try_from(&self.order).ok()
    }

    /// Permutation group on `degree` points generated by the result.
    pub fn group(&self, degree: usize, cap: usize) -> Result<PermGroup, PermError> {
        PermGroup::with_cap(degree, self.generators.clone(), cap)
    }
}

/// JSON for group orders: a number up to `2^53`, a decimal string beyond.
pub mod order_json {
    use num_bigint::BigUint;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    const EXACT_LIMIT: u64 = 1 << 53;

    pub fn serialize<S: Serializer>(order: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        match u64::try_from(order) {
            Ok(v) if v <= EXACT_LIMIT => s.serialize_u64(v),
            _ => s.serialize_str(&order.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(BigUint::from)
                .ok_or_else(|| D::Error::custom("order must be a non-negative integer")),
            serde_json::Value::String(s) => s.parse().map_err(D::Error::custom),
            _ => Err(D::Error::custom("order must be an integer or decimal string")),
        }
    }
}

struct Level {
    partition: Partition,
    trace: u64,
    target: usize,
}

struct Search<'a> {
    g: &'a Digraph,
    gens: Vec<Perm>,
    levels: Vec<Level>,
    leaf: Vec<usize>,
    leaf_trace: u64,
}

impl Search<'_> {
    fn matches_reference(&self, depth: usize, p: &Partition, trace: u64) -> bool {
        if depth < self.levels.len() {
            let level = &self.levels[depth];
            trace == level.trace
                && p.cells.len() == level.partition.cells.len()
                && p.cells
                    .iter()
                    .zip(&level.partition.cells)
                    .all(|(a, b)| a.len() == b.len())
        } else {
            trace == self.leaf_trace && p.is_discrete()
        }
    }

    /// Searches below `p` (at `depth`) for a leaf equivalent to the reference leaf.
    fn explore(&self, p: &Partition, depth: usize, path: &mut Vec<usize>) -> Option<Perm> {
        if p.is_discrete() {
            let order = p.leaf_order();
            let mut images = vec![0; order.len()];
            for (r, v) in self.leaf.iter().zip(&order) {
                images[*r] = *v;
            }
            return if self.g.preserves_arcs(&images) {
                Some(Perm::from_images(images).expect("leaf orders are bijective"))
            } else {
                None
            };
        }
        let target = p.first_nonsingleton().expect("not discrete");
        debug_assert_eq!(target, self.levels[depth].target);
        let fixing: Vec<Perm> = self
            .gens
            .iter()
            .filter(|h| path.iter().all(|&x| h.apply(x) == x))
            .cloned()
            .collect();
        let mut pruned = vec![false; self.g.vertex_count()];
        for &v in &p.cells[target] {
            if pruned[v] {
                continue;
            }
            let child = p.individualize(target, v);
            let (child, trace) = refine_traced(self.g, &child);
            if self.matches_reference(depth + 1, &child, trace) {
                path.push(v);
                let found = self.explore(&child, depth + 1, path);
                path.pop();
                if found.is_some() {
                    return found;
                }
            }
            for w in orbit_unchecked(&fixing, v) {
                pruned[w] = true;
            }
        }
        None
    }
}

/// Full automorphism group of `g`.
pub fn automorphism_group(g: &Digraph) -> AutResult {
    automorphism_group_seeded(g, &[]).expect("no seeds to reject")
}

/// Full automorphism group of a Cayley digraph, seeded with `R(G)`.
pub fn cayley_automorphism_group(c: &CayleyDigraph) -> AutResult {
    let seeds = c.group().right_regular().generators().to_vec();
    automorphism_group_seeded(c.digraph(), &seeds).expect("right multiplications are automorphisms")
}

/// Full automorphism group of `g`, starting from known automorphisms `seeds`.
pub fn automorphism_group_seeded(g: &Digraph, seeds: &[Perm]) -> Result<AutResult, AutError> {
    let n = g.vertex_count();
    if n > MAX_VERTICES {
        return Err(AutError::TooManyVertices {
            vertices: n,
            limit: MAX_VERTICES,
        });
    }
    for s in seeds {
        if !g.is_automorphism(s) {
            return Err(AutError::BadSeed(s.clone()));
        }
    }

    // Leftmost path.
    let mut levels = Vec::new();
    let (mut p, mut trace) = refine_traced(g, &Partition::unit(n));
    let mut base = Vec::new();
    while let Some(target) = p.first_nonsingleton() {
        let v = p.cells[target][0];
        base.push(v);
        let child = p.individualize(target, v);
        levels.push(Level {
            partition: p,
            trace,
            target,
        });
        (p, trace) = refine_traced(g, &child);
    }
    let mut search = Search {
        g,
        gens: seeds.iter().filter(|s| !s.is_identity()).cloned().collect(),
        leaf: p.leaf_order(),
        leaf_trace: trace,
        levels,
    };

    let mut orbit_lengths = vec![0; base.len()];
    for depth in (0..base.len()).rev() {
        let prefix = &base[..depth];
        let stabilizer = |gens: &[Perm]| -> Vec<Perm> {
            gens.iter()
                .filter(|h| prefix.iter().all(|&x| h.apply(x) == x))
                .cloned()
                .collect()
        };
        let mut orbit = orbit_unchecked(&stabilizer(&search.gens), base[depth]);
        let level = &search.levels[depth];
        let candidates = level.partition.cells[level.target].clone();
        for v in candidates {
            if orbit.contains(&v) {
                continue;
            }
            let level = &search.levels[depth];
            let child = level.partition.individualize(level.target, v);
            let (child, trace) = refine_traced(g, &child);
            if !search.matches_reference(depth + 1, &child, trace) {
                continue;
            }
            let mut path: Vec<usize> = prefix.to_vec();
            path.push(v);
            if let Some(found) = search.explore(&child, depth + 1, &mut path) {
                debug_assert!(prefix.iter().all(|&x| found.apply(x) == x));
                search.gens.push(found);
                orbit = orbit_unchecked(&stabilizer(&search.gens), base[depth]);
            }
        }
        orbit_lengths[depth] = orbit.len();
    }

    let order = orbit_lengths
        .iter()
        .fold(BigUint::from(1u32), |acc, &len| acc * BigUint::from(len));
    Ok(AutResult {
        order,
        generators: search.gens,
        base,
        orbit_lengths,
    })
}

/// Advances `v` to the next permutation in lexicographic order.
fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Every automorphism, by exhaustive filtering of all `n!` permutations.
pub fn brute_force_aut(g: &Digraph) -> Result<AutResult, AutError> {
    let n = g.vertex_count();
    if n > BRUTE_FORCE_MAX_VERTICES {
        return Err(AutError::TooManyVertices {
            vertices: n,
            limit: BRUTE_FORCE_MAX_VERTICES,
        });
    }
    let mut images: Vec<usize> = (0..n).collect();
    let mut elements = Vec::new();
    loop {
        if g.preserves_arcs(&images) {
            elements.push(Perm::from_images(images.clone()).expect("permutation"));
        }
        if !next_permutation(&mut images) {
            break;
        }
    }
    Ok(AutResult {
        order: BigUint::from(elements.len()),
        generators: elements,
        base: Vec::new(),
        orbit_lengths: Vec::new(),
    })
}
