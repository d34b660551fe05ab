//! Exhaustive expansion of a scheme's selection tree.
//!
//! Branching on every member of the eligible set at every step turns a
//! generation scheme into a branching scheme. Leaves are complete schedules
//! keyed by their start-time vector; the same schedule can be reached along
//! several selection paths, so leaves form a multiset. The minimum leaf
//! makespan of a scheme's tree tells whether the scheme can reach the
//! optimum at all under some priority ordering.

use std::collections::HashMap;

use crate::model::{Instance, Schedule, Time};
use crate::sgs::{self, SgsKind};
use crate::timing::PartialState;

pub const DEFAULT_NODE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LeafStat {
    /// Number of selection paths ending in this schedule.
    pub count: usize,
    pub makespan: Time,
}

/// Result of expanding a selection tree, possibly cut off at a node budget.
#[derive(Debug, Clone)]
pub struct SgsTree {
    pub kind: SgsKind,
    /// States visited, root included.
    pub node_count: usize,
    /// Node budget was exhausted; leaf data covers only the visited part.
    pub truncated: bool,
    leaves: HashMap<Vec<Time>, LeafStat>,
}

impl SgsTree {
    /// Total number of leaves (selection paths).
    pub fn leaf_count(&self) -> usize {
        self.leaves.values().map(|l| l.count).sum()
    }

    /// Number of distinct schedules among the leaves.
    pub fn distinct_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn min_makespan(&self) -> Option<Time> {
        self.leaves.values().map(|l| l.makespan).min()
    }

    pub fn max_multiplicity(&self) -> usize {
        self.leaves.values().map(|l| l.count).max().unwrap_or(0)
    }

    pub fn contains_makespan(&self, makespan: Time) -> bool {
        self.leaves.values().any(|l| l.makespan == makespan)
    }

    /// Leaves as (start vector, stat), sorted by start vector.
    pub fn leaves(&self) -> Vec<(&[Time], LeafStat)> {
        let mut out: Vec<(&[Time], LeafStat)> =
            self.leaves.iter().map(|(k, &v)| (k.as_slice(), v)).collect();
        out.sort_by(|a, b| a.0.cmp(b.0));
        out
    }

    /// A schedule attaining the minimum leaf makespan (smallest start
    /// vector on ties).
    pub fn min_schedule(&self, instance: &Instance) -> Option<Schedule> {
        let best = self.min_makespan()?;
        self.leaves()
            .into_iter()
            .find(|(_, stat)| stat.makespan == best)
            .map(|(starts, _)| Schedule::from_starts(instance, starts))
    }
}

fn expand(kind: SgsKind, state: &PartialState<'_>, cap: usize, tree: &mut SgsTree) {
    if tree.node_count >= cap {
        tree.truncated = true;
        return;
    }
    tree.node_count += 1;
    if state.complete() {
        let starts: Vec<Time> = state
            .instance()
            .iter_ops()
            .map(|op| state.start(op))
            .collect();
        let makespan = (1..=state.instance().jobs())
            .map(|job| state.completion(state.instance().op(job, state.instance().machines())))
            .max()
            .expect("at least one job");
        let entry = tree
            .leaves
            .entry(starts)
            .or_insert(LeafStat { count: 0, makespan });
        entry.count += 1;
        debug_assert_eq!(entry.makespan, makespan);
        return;
    }
    for op in sgs::eligible_set(kind, state) {
        let mut child = state.clone();
        if kind.uses_insertion() {
            child.insert(op);
        } else {
            child.append(op);
        }
        expand(kind, &child, cap, tree);
        if tree.truncated {
            return;
        }
    }
}

/// Expands the full selection tree of `kind`, stopping at `node_cap`
/// visited states (`truncated` reports a cutoff).
pub fn enumerate_tree(kind: SgsKind, instance: &Instance, node_cap: usize) -> SgsTree {
    let mut tree = SgsTree {
        kind,
        node_count: 0,
        truncated: false,
        leaves: HashMap::new(),
    };
    expand(kind, &PartialState::new(instance), node_cap, &mut tree);
    tree
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("node cap {cap} exhausted after {visited} states; tree incomplete")]
pub struct NodeCapExceeded {
    pub cap: usize,
    pub visited: usize,
}

/// Exact minimum makespan by exhausting the appending tree over the full
/// available set, which spans every schedule without in-place left shifts
/// and therefore contains an optimum.
pub fn brute_force_optimum(
    instance: &Instance,
    node_cap: usize,
) -> Result<(Time, Schedule), NodeCapExceeded> {
    let tree = enumerate_tree(SgsKind::SemiActive, instance, node_cap);
    if tree.truncated {
        return Err(NodeCapExceeded {
            cap: node_cap,
            visited: tree.node_count,
        });
    }
    let schedule = tree.min_schedule(instance).expect("tree has leaves");
    Ok((schedule.makespan(), schedule))
}

/// Whether `kind`'s tree reaches the exact optimum, and by how much it
/// misses when it does not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominanceAudit {
    pub kind: SgsKind,
    pub optimum: Time,
    pub tree_min: Time,
    pub gap: Time,
}

impl DominanceAudit {
    pub fn reaches_optimum(&self) -> bool {
        self.gap == 0
    }
}

pub fn dominance_audit(
    kind: SgsKind,
    instance: &Instance,
    node_cap: usize,
) -> Result<DominanceAudit, NodeCapExceeded> {
    let (optimum, _) = brute_force_optimum(instance, node_cap)?;
    let tree = enumerate_tree(kind, instance, node_cap);
    if tree.truncated {
        return Err(NodeCapExceeded {
            cap: node_cap,
            visited: tree.node_count,
        });
    }
    let tree_min = tree.min_makespan().expect("tree has leaves");
    debug_assert!(tree_min >= optimum, "no tree can beat the optimum");
    Ok(DominanceAudit {
        kind,
        optimum,
        tree_min,
        gap: tree_min - optimum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn appending_tree_of_two_by_two_reaches_13() {
        let inst = fixtures::two_by_two();
        let tree = enumerate_tree(SgsKind::SemiActive, &inst, DEFAULT_NODE_CAP);
        assert!(!tree.truncated);
        // Selection orders = interleavings of two 2-chains: 4!/(2!2!).
        assert_eq!(tree.leaf_count(), 6);
        assert_eq!(tree.min_makespan(), Some(13));
    }

    #[test]
    fn insertion_tree_repeats_one_schedule_four_times() {
        let inst = fixtures::two_by_two();
        let tree = enumerate_tree(SgsKind::Serial, &inst, DEFAULT_NODE_CAP);
        assert_eq!(tree.leaf_count(), 6);
        assert_eq!(tree.distinct_count(), 3);
        assert_eq!(tree.max_multiplicity(), 4);
        let repeated: Vec<_> = tree
            .leaves()
            .into_iter()
            .filter(|(_, stat)| stat.count == 4)
            .collect();
        assert_eq!(repeated.len(), 1);
        assert_eq!(repeated[0].0, &[1, 5, 0, 13]);
        assert_eq!(tree.min_makespan(), Some(13));
    }

    #[test]
    fn conflict_trees_miss_the_optimum_on_two_by_two() {
        let inst = fixtures::two_by_two();
        for kind in [SgsKind::Egt1, SgsKind::Egt2] {
            let tree = enumerate_tree(kind, &inst, DEFAULT_NODE_CAP);
            let leaves = tree.leaves();
            // Every leaf is a distinct schedule and none attains 13.
            assert!(leaves.iter().all(|(_, stat)| stat.count == 1), "{kind}");
            assert!(!tree.contains_makespan(13), "{kind}");
            assert_eq!(tree.min_makespan(), Some(15), "{kind}");
        }
    }

    #[test]
    fn audits_quantify_the_conflict_scheme_gap() {
        let inst = fixtures::two_by_two();
        let audit = dominance_audit(SgsKind::Egt1, &inst, DEFAULT_NODE_CAP).unwrap();
        assert_eq!(audit.optimum, 13);
        assert_eq!(audit.tree_min, 15);
        assert!(!audit.reaches_optimum());
        let audit = dominance_audit(SgsKind::Serial, &inst, DEFAULT_NODE_CAP).unwrap();
        assert!(audit.reaches_optimum());
    }

    #[test]
    fn node_cap_reports_truncation() {
        let inst = fixtures::two_by_two();
        let tree = enumerate_tree(SgsKind::SemiActive, &inst, 3);
        assert!(tree.truncated);
        assert!(brute_force_optimum(&inst, 3).is_err());
    }
}
