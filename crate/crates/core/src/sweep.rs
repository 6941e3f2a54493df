//! Exhaustive classification of every connection set of a small group.
//!
//! A connection set is encoded as a mask with bit `c - 1` standing for the
//! element code `c`. Records come out sorted by mask, independent of the number
//! of worker threads.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{classify_with, CiVerdict, Classification, ClassifyError, ClassifyOptions};
use crate::group::{aut_group, GroupSpec};

/// Largest group order a sweep accepts.
pub const MAX_SWEEP_ORDER: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("sweeps are limited to groups of order at most {MAX_SWEEP_ORDER}, got {0}")]
    TooLarge(usize),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMode {
    /// Every subset of `G \ {1}`.
    Digraph,
    /// Inverse-closed subsets only.
    Graph,
}

impl fmt::Display for SweepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepMode::Digraph => "digraph",
            SweepMode::Graph => "graph",
        })
    }
}

impl FromStr for SweepMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "digraph" => Ok(SweepMode::Digraph),
            "graph" => Ok(SweepMode::Graph),
            other => Err(format!("unknown sweep mode {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    pub mode: SweepMode,
    /// Keep one connection set per `Aut(G)`-orbit.
    pub reduce: bool,
    pub classify: ClassifyOptions,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            mode: SweepMode::Digraph,
            reduce: false,
            classify: ClassifyOptions::default(),
        }
    }
}

/// Totals per verdict, written as the last line of a sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub group: GroupSpec,
    pub mode: SweepMode,
    pub reduced: bool,
    pub total: usize,
    pub connected: usize,
    pub graphs: usize,
    pub normal: usize,
    pub nnn: usize,
    pub ci: usize,
    pub non_ci: usize,
    pub ci_skipped: usize,
    pub normal_non_ci: usize,
}

impl SweepSummary {
    pub fn tally(group: GroupSpec, mode: SweepMode, reduced: bool, records: &[Classification]) -> Self {
        let count = |f: &dyn Fn(&Classification) -> bool| records.iter().filter(|r| f(r)).count();
        SweepSummary {
            group,
            mode,
            reduced,
            total: records.len(),
            connected: count(&|r| r.connected),
            graphs: count(&|r| r.graph),
            normal: count(&|r| r.normal),
            nnn: count(&|r| r.nnn),
            ci: count(&|r| r.ci == CiVerdict::Ci),
            non_ci: count(&|r| r.ci == CiVerdict::NotCi),
            ci_skipped: count(&|r| r.ci == CiVerdict::Skipped),
            normal_non_ci: count(&|r| r.normal && r.ci == CiVerdict::NotCi),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepResult {
    pub records: Vec<Classification>,
    pub summary: SweepSummary,
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    summary: &'a SweepSummary,
}

impl SweepResult {
    /// One JSON record per line, then `{"summary": ...}`.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> io::Result<()> {
        for record in &self.records {
            serde_json::to_writer(&mut out, record)?;
            out.write_all(b"\n")?;
        }
        serde_json::to_writer(&mut out, &SummaryLine { summary: &self.summary })?;
        out.write_all(b"\n")
    }
}

/// Element codes of a mask, ascending.
pub fn mask_to_codes(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

pub fn codes_to_mask(codes: &[usize]) -> u64 {
    codes.iter().fold(0, |m, &c| m | 1u64 << (c - 1))
}

/// `table[c - 1]` is the bit of the image of code `c`.
fn mask_map(table: &[u32], mask: u64) -> u64 {
    let mut out = 0;
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        out |= 1u64 << table[i];
        m &= m - 1;
    }
    out
}

/// The connection sets a sweep visits, ascending.
pub fn connection_masks(g: &GroupSpec, mode: SweepMode, reduce: bool) -> Result<Vec<u64>, SweepError> {
    let order = g.order();
    if order > MAX_SWEEP_ORDER {
        return Err(SweepError::TooLarge(order));
    }
    let bits = order - 1;
    let inverse: Vec<u32> = (1..order)
        .map(|c| (g.inverse(crate::group::Elem(c)).code() - 1) as u32)
        .collect();
    let tables: Vec<Vec<u32>> = aut_group(g)
        .iter()
        .filter(|sigma| !sigma.is_identity(g))
        .map(|sigma| {
            (1..order)
                .map(|c| (sigma.apply(g, crate::group::Elem(c)).code() - 1) as u32)
                .collect()
        })
        .collect();
    Ok((0..1u64 << bits)
        .filter(|&mask| mode == SweepMode::Digraph || mask_map(&inverse, mask) == mask)
        .filter(|&mask| !reduce || tables.iter().all(|t| mask_map(t, mask) >= mask))
        .collect())
}

pub fn sweep(g: &GroupSpec, options: SweepOptions) -> Result<SweepResult, SweepError> {
    sweep_with_progress(g, options, &|_, _| {})
}

/// [`sweep`], calling `progress(done, total)` as records complete.
pub fn sweep_with_progress(
    g: &GroupSpec,
    options: SweepOptions,
    progress: &(dyn Fn(usize, usize) + Sync),
) -> Result<SweepResult, SweepError> {
    let masks = connection_masks(g, options.mode, options.reduce)?;
    let total = masks.len();
    let done = AtomicUsize::new(0);
    let records = masks
        .par_iter()
        .map(|&mask| {
            let record = classify_with(*g, &mask_to_codes(mask), options.classify);
            progress(done.fetch_add(1, Ordering::Relaxed) + 1, total);
            record
        })
        .collect::<Result<Vec<_>, _>>()?;
    let summary = SweepSummary::tally(*g, options.mode, options.reduce, &records);
    Ok(SweepResult { records, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Elem, GroupAut};
    use std::collections::BTreeSet;

    #[test]
    fn mask_round_trip() {
        assert_eq!(mask_to_codes(0b1011), vec![1, 2, 4]);
        assert_eq!(codes_to_mask(&[1, 2, 4]), 0b1011);
    }

    #[test]
    fn set_counts() {
        let c8 = GroupSpec::cyclic(8);
        assert_eq!(connection_masks(&c8, SweepMode::Digraph, false).unwrap().len(), 128);
        // inverse pairs {1,7}, {2,6}, {3,5} and the involution 4
        assert_eq!(connection_masks(&c8, SweepMode::Graph, false).unwrap().len(), 16);
        let d4 = GroupSpec::dihedral(2);
        assert_eq!(connection_masks(&d4, SweepMode::Digraph, false).unwrap().len(), 8);
        assert!(connection_masks(&GroupSpec::cyclic(17), SweepMode::Digraph, false).is_err());
    }

    #[test]
    fn reduction_keeps_one_set_per_orbit() {
        for g in [GroupSpec::cyclic(12), GroupSpec::dihedral(4), GroupSpec::dihedral(2)] {
            let all = connection_masks(&g, SweepMode::Digraph, false).unwrap();
            let reps = connection_masks(&g, SweepMode::Digraph, true).unwrap();
            let auts: Vec<GroupAut> = aut_group(&g);
            let orbit_min = |mask: u64| {
                let set: Vec<Elem> = mask_to_codes(mask).into_iter().map(Elem).collect();
                auts.iter()
                    .map(|s| {
                        let image: Vec<usize> = s.apply_set(&g, &set).iter().map(|x| x.code()).collect();
                        codes_to_mask(&image)
                    })
                    .min()
                    .unwrap()
            };
            let expected: BTreeSet<u64> = all.iter().map(|&m| orbit_min(m)).collect();
            assert_eq!(reps.iter().copied().collect::<BTreeSet<_>>(), expected);
        }
    }

    #[test]
    fn small_sweeps() {
        let d4 = sweep(&GroupSpec::dihedral(2), SweepOptions::default()).unwrap();
        assert_eq!(d4.summary.total, 8);
        assert_eq!(d4.summary.nnn, 0);
        let c8 = sweep(&GroupSpec::cyclic(8), SweepOptions::default()).unwrap();
        assert_eq!(c8.summary.total, 128);
        assert_eq!(c8.summary.nnn, 0);
        assert!(c8.records.iter().any(|r| r.normal
            && r.regular_subgroups > Some(1)
            && r.nonnormal_regular == Some(0)));
        let d12 = sweep(
            &GroupSpec::dihedral(6),
            SweepOptions {
                mode: SweepMode::Graph,
                ..SweepOptions::default()
            },
        )
        .unwrap();
        assert!(d12.records.iter().any(|r| r.nnn && r.set == vec![1, 5, 6, 9]));
    }

    #[test]
    fn output_is_sorted_and_ends_with_summary() {
        let res = sweep(&GroupSpec::cyclic(5), SweepOptions::default()).unwrap();
        let masks: Vec<u64> = res.records.iter().map(|r| codes_to_mask(&r.set)).collect();
        assert!(masks.windows(2).all(|w| w[0] < w[1]));
        let mut buf = Vec::new();
        res.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 17);
        assert!(lines[16].starts_with(r#"{"summary":{"group":{"family":"cyclic","n":5}"#));
        let first: Classification = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(first.set, Vec::<usize>::new());
    }
}
