//! The six schedule generation schemes.
//!
//! Every scheme follows the same loop: compute an eligible subset of the
//! available operations, pick one via a priority rule (or a static order),
//! fix its start time, repeat. Schemes differ along two axes:
//!
//! * eligibility: everything available, a conflict set around the earliest
//!   appending completion, or the operations sharing the earliest appending
//!   (setup) start,
//! * placement: appending after the machine's last operation, or inserting
//!   into the earliest feasible gap.
//!
//! Appending over the full available set spans exactly the schedules with
//! no in-place left shift; switching placement to insertion keeps the span
//! optimal-preserving while producing only schedules with no left shift at
//! all. The conflict-set and earliest-start schemes trade span for greed.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::model::{Instance, OpId, Schedule};
use crate::rules::{self, PriorityVector, RuleKind};
use crate::timing::PartialState;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum SgsKind {
    /// Appending placement, all available operations eligible.
    SemiActive,
    /// Insertion placement, all available operations eligible.
    Serial,
    /// Insertion placement; eligible set built around the operation with the
    /// earliest appending completion, keeping same-machine operations that
    /// would be delayed if the pivot ran first (pairwise test).
    Egt1,
    /// Like [`SgsKind::Egt1`] but an operation stays eligible only if every
    /// other available same-machine operation would delay it (mutual test).
    Egt2,
    /// Appending placement; eligible are the operations tying the earliest
    /// appending start on that pivot's machine.
    Nd1,
    /// Insertion placement; eligible are the operations tying the earliest
    /// appending setup start on that pivot's machine.
    Nd2,
}

impl SgsKind {
    pub const ALL: [SgsKind; 6] = [
        SgsKind::SemiActive,
        SgsKind::Serial,
        SgsKind::Egt1,
        SgsKind::Egt2,
        SgsKind::Nd1,
        SgsKind::Nd2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SgsKind::SemiActive => "semiactive",
            SgsKind::Serial => "serial",
            SgsKind::Egt1 => "egt1",
            SgsKind::Egt2 => "egt2",
            SgsKind::Nd1 => "nd1",
            SgsKind::Nd2 => "nd2",
        }
    }

    /// Insertion placement? Otherwise appending.
    pub fn uses_insertion(self) -> bool {
        matches!(self, SgsKind::Serial | SgsKind::Egt1 | SgsKind::Egt2 | SgsKind::Nd2)
    }
}

impl fmt::Display for SgsKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown schedule generation scheme `{0}`")]
pub struct UnknownSgs(pub String);

impl FromStr for SgsKind {
    type Err = UnknownSgs;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SgsKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownSgs(s.to_string()))
    }
}

/// Pivot: minimum of `key` over the available set, ties to the smallest
/// flat id (available sets are flat-id sorted, so first win suffices).
fn pivot_by<F: Fn(OpId) -> i64>(state: &PartialState<'_>, key: F) -> (OpId, i64) {
    let mut best: Option<(OpId, i64)> = None;
    for &op in state.available() {
        let k = key(op);
        if best.map_or(true, |(_, bk)| k < bk) {
            best = Some((op, k));
        }
    }
    best.expect("no available operations")
}

/// The scheme's eligible subset of the available set, sorted by flat id.
/// Never empty: the pivot of a conflict or earliest-start construction is
/// always a member of its own set.
pub fn eligible_set(kind: SgsKind, state: &PartialState<'_>) -> Vec<OpId> {
    let inst = state.instance();
    match kind {
        SgsKind::SemiActive | SgsKind::Serial => state.available().to_vec(),
        SgsKind::Egt1 => {
            let (pivot, _) = pivot_by(state, |o| (state.esa(o) + inst.duration(o)) as i64);
            let bound = state.esa(pivot) + inst.duration(pivot);
            let machine = inst.machine_of(pivot);
            state
                .available()
                .iter()
                .copied()
                .filter(|&o| {
                    inst.machine_of(o) == machine
                        && (o == pivot || bound + inst.setup_between(pivot, o) > state.esa(o))
                })
                .collect()
        }
        SgsKind::Egt2 => {
            let (pivot, _) = pivot_by(state, |o| (state.esa(o) + inst.duration(o)) as i64);
            let machine = inst.machine_of(pivot);
            let mates: Vec<OpId> = state
                .available()
                .iter()
                .copied()
                .filter(|&o| inst.machine_of(o) == machine)
                .collect();
            mates
                .iter()
                .copied()
                .filter(|&o| {
                    o == pivot
                        || mates.iter().all(|&other| {
                            other == o
                                || state.esa(other)
                                    + inst.duration(other)
                                    + inst.setup_between(other, o)
                                    > state.esa(o)
                        })
                })
                .collect()
        }
        SgsKind::Nd1 => {
            let (pivot, bound) = pivot_by(state, |o| state.esa(o) as i64);
            let machine = inst.machine_of(pivot);
            state
                .available()
                .iter()
                .copied()
                .filter(|&o| inst.machine_of(o) == machine && state.esa(o) as i64 == bound)
                .collect()
        }
        SgsKind::Nd2 => {
            let setup_start =
                |o: OpId| state.esa(o) as i64 - state.pending_setup(o) as i64;
            let (pivot, bound) = pivot_by(state, setup_start);
            let machine = inst.machine_of(pivot);
            state
                .available()
                .iter()
                .copied()
                .filter(|&o| inst.machine_of(o) == machine && setup_start(o) == bound)
                .collect()
        }
    }
}

fn run_with<F>(kind: SgsKind, instance: &Instance, mut choose: F) -> Schedule
where
    F: FnMut(&PartialState<'_>, &[OpId]) -> OpId,
{
    let mut state = PartialState::new(instance);
    while !state.complete() {
        let eligible = eligible_set(kind, &state);
        debug_assert!(!eligible.is_empty(), "eligible set must not be empty");
        let op = choose(&state, &eligible);
        debug_assert!(eligible.contains(&op), "chosen operation must be eligible");
        if kind.uses_insertion() {
            state.insert(op);
        } else {
            state.append(op);
        }
    }
    state.into_schedule()
}

/// One construction pass guided by a priority rule.
///
/// `bias: None` is the deterministic variant (key minimum, smallest-job
/// ties); `bias: Some(alpha)` randomizes ties and takes a uniform non-best
/// operation with probability `alpha`.
pub fn run<R: Rng + ?Sized>(
    kind: SgsKind,
    instance: &Instance,
    rule: RuleKind,
    rng: &mut R,
    bias: Option<f64>,
) -> Schedule {
    run_with(kind, instance, |state, eligible| {
        rules::select(rule, state, eligible, rng, bias)
    })
}

/// One construction pass guided by a static priority vector: at each step
/// the lowest-ranked eligible operation is scheduled.
pub fn run_static(kind: SgsKind, instance: &Instance, order: &PriorityVector) -> Schedule {
    run_with(kind, instance, |_, eligible| order.pick(eligible))
}
