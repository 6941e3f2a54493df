//! Verdict tables: which groups admit an NNN digraph, checked by sweeps.

use std::io::Write;

use anyhow::anyhow;
use cayley_core::classify::Classification;
use cayley_core::group::GroupSpec;
use cayley_core::sweep::{sweep_with_progress, SweepOptions};
use serde::Serialize;

use crate::{progress_printer, usage, write_json_line, Failure};

/// Groups up to this order are swept over every connection set; larger ones by orbit.
const FULL_SWEEP_MAX_ORDER: usize = 14;
const CYCLIC_FULL_MAX_ORDER: usize = 12;
const THEOREM1_MAX_N: usize = 16;
const THEOREM2_MAX_N: usize = 8;

#[derive(Serialize)]
struct Row {
    theorem: u8,
    group: GroupSpec,
    reduced: bool,
    sets: usize,
    nnn: usize,
    expected_nnn: bool,
    ok: bool,
}

#[derive(Serialize)]
struct Counterexample<'a> {
    counterexample: &'a Classification,
}

#[derive(Serialize)]
struct Verdict {
    theorem: u8,
    max_n: usize,
    verified: bool,
}

/// NNN digraphs exist on `D_2n` exactly for even `n >= 6`, `n != 8`.
fn dihedral_expects_nnn(n: usize) -> bool {
    n.is_multiple_of(2) && n >= 6 && n != 8
}

pub(crate) fn run(theorem: u8, max_n: usize, quiet: bool, out: &mut dyn Write) -> Result<bool, Failure> {
    let groups: Vec<(GroupSpec, bool)> = match theorem {
        1 => {
            if !(1..=THEOREM1_MAX_N).contains(&max_n) {
                return Err(usage(anyhow!(
                    "theorem 1 is verified for 1 <= max-n <= {THEOREM1_MAX_N}"
                )));
            }
            (1..=max_n).map(|n| (GroupSpec::cyclic(n), false)).collect()
        }
        2 => {
            if !(2..=THEOREM2_MAX_N).contains(&max_n) {
                return Err(usage(anyhow!(
                    "theorem 2 is verified for 2 <= max-n <= {THEOREM2_MAX_N}"
                )));
            }
            (2..=max_n)
                .map(|n| (GroupSpec::dihedral(n), dihedral_expects_nnn(n)))
                .collect()
        }
        other => return Err(usage(anyhow!("unknown theorem {other}"))),
    };

    let mut verified = true;
    for (group, expected) in groups {
        let full_limit = if group.is_dihedral() {
            FULL_SWEEP_MAX_ORDER
        } else {
            CYCLIC_FULL_MAX_ORDER
        };
        let reduce = group.order() > full_limit;
        let options = SweepOptions {
            reduce,
            ..SweepOptions::default()
        };
        let progress = progress_printer(format!("verify {group}"), quiet);
        let result = sweep_with_progress(&group, options, &progress)?;
        let nnn: Vec<&Classification> = result.records.iter().filter(|r| r.nnn).collect();
        let ok = !nnn.is_empty() == expected;
        write_json_line(
            out,
            &Row {
                theorem,
                group,
                reduced: reduce,
                sets: result.records.len(),
                nnn: nnn.len(),
                expected_nnn: expected,
                ok,
            },
        )?;
        if !ok {
            verified = false;
            for record in nnn {
                write_json_line(out, &Counterexample { counterexample: record })?;
            }
        }
    }
    write_json_line(
        out,
        &Verdict {
            theorem,
            max_n,
            verified,
        },
    )?;
    Ok(verified)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expected_table() {
        let with_nnn: Vec<usize> = (2..=20).filter(|&n| dihedral_expects_nnn(n)).collect();
        assert_eq!(with_nnn, vec![6, 10, 12, 14, 16, 18, 20]);
    }
}
