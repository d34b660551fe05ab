//! Schedule category checkers.
//!
//! Four nested categories of feasible schedules, each checked directly on
//! the machine sequences of a complete schedule:
//!
//! * semi-active: no operation can start earlier while keeping its slot,
//! * active: additionally, no operation fits into an earlier gap of its
//!   machine with a strictly smaller start,
//! * non-delay on starts: no machine sits idle or in setup while some
//!   operation scheduled later on it could already be processing,
//! * non-delay on setup starts: no machine sits idle while a setup leading
//!   to an immediate operation start could already be running.
//!
//! All checkers take the schedule as ground truth: "could have started" is
//! evaluated against the actual completion times of job predecessors, and
//! gaps against the fixed starts of their right neighbors. Every checker
//! expects a schedule that already passes feasibility validation; scan
//! order (machines, then positions, then gaps) makes witnesses
//! deterministic.

use crate::model::{Instance, OpId, Schedule, Time};

/// An operation that could start earlier while keeping its position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftWitness {
    pub op: OpId,
    /// Earliest start in place.
    pub start: Time,
}

/// An operation that fits into an earlier gap on its machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InsertWitness {
    pub op: OpId,
    /// Insertion position (0 = front of the machine sequence).
    pub position: usize,
    /// Start the operation would get there.
    pub start: Time,
}

/// A machine that waited although `waiting` could have begun.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DelayWitness {
    pub machine: usize,
    /// Operation scheduled at or after the incumbent's slot that could have
    /// begun (processing, or its setup) at `at`.
    pub waiting: OpId,
    pub at: Time,
    /// Operation whose occupation of the machine was strictly later.
    pub incumbent: OpId,
}

/// Earliest in-place start of the operation at `seq[i]`.
fn in_place_start(inst: &Instance, sched: &Schedule, seq: &[OpId], i: usize) -> Time {
    let op = seq[i];
    let pred = if i == 0 { OpId::DUMMY } else { seq[i - 1] };
    let machine_ready = sched.completion(pred) + inst.setup_between(pred, op);
    sched.completion(inst.job_pred(op)).max(machine_ready)
}

/// First operation that could start strictly earlier in its slot.
pub fn semi_active_witness(inst: &Instance, sched: &Schedule) -> Option<ShiftWitness> {
    for machine in 1..=inst.machines() {
        let seq = sched.sequence(machine);
        for i in 0..seq.len() {
            let earliest = in_place_start(inst, sched, seq, i);
            if earliest < sched.start(seq[i]) {
                return Some(ShiftWitness { op: seq[i], start: earliest });
            }
        }
    }
    None
}

pub fn is_semi_active(inst: &Instance, sched: &Schedule) -> bool {
    semi_active_witness(inst, sched).is_none()
}

/// First operation that fits into an earlier gap with a strictly smaller
/// start. An in-place left shift counts (position = the op's own slot), so
/// non-semi-active schedules are never active.
pub fn active_witness(inst: &Instance, sched: &Schedule) -> Option<InsertWitness> {
    if let Some(w) = semi_active_witness(inst, sched) {
        let machine = inst.machine_of(w.op);
        let position = sched
            .sequence(machine)
            .iter()
            .position(|&o| o == w.op)
            .expect("witness is on its machine");
        return Some(InsertWitness { op: w.op, position, start: w.start });
    }
    for machine in 1..=inst.machines() {
        let seq = sched.sequence(machine);
        for i in 0..seq.len() {
            let op = seq[i];
            let jp_done = sched.completion(inst.job_pred(op));
            for q in 0..i {
                let pred = if q == 0 { OpId::DUMMY } else { seq[q - 1] };
                let start =
                    jp_done.max(sched.completion(pred) + inst.setup_between(pred, op));
                let fits = start + inst.duration(op) + inst.setup_between(op, seq[q])
                    <= sched.start(seq[q]);
                if fits && start < sched.start(op) {
                    return Some(InsertWitness { op, position: q, start });
                }
            }
        }
    }
    None
}

pub fn is_active(inst: &Instance, sched: &Schedule) -> bool {
    active_witness(inst, sched).is_none()
}

/// First instant where a machine was idle or in setup although some
/// operation scheduled later on it could already have been processing.
pub fn nondelay_1_witness(inst: &Instance, sched: &Schedule) -> Option<DelayWitness> {
    for machine in 1..=inst.machines() {
        let seq = sched.sequence(machine);
        for i in 0..seq.len() {
            let incumbent = seq[i];
            let pred = if i == 0 { OpId::DUMMY } else { seq[i - 1] };
            for &waiting in &seq[i..] {
                let ready = sched
                    .completion(inst.job_pred(waiting))
                    .max(sched.completion(pred) + inst.setup_between(pred, waiting));
                if ready < sched.start(incumbent) {
                    return Some(DelayWitness { machine, waiting, at: ready, incumbent });
                }
            }
        }
    }
    None
}

pub fn is_nondelay_1(inst: &Instance, sched: &Schedule) -> bool {
    nondelay_1_witness(inst, sched).is_none()
}

/// First instant where a machine was idle although a setup leading to an
/// immediate operation start could already have been running. The
/// incumbent's own setup is charged as starting right before it
/// (`start - setup`); an alternative setup can begin once the machine is
/// free and must end no earlier than the operation's job predecessor.
pub fn nondelay_2_witness(inst: &Instance, sched: &Schedule) -> Option<DelayWitness> {
    for machine in 1..=inst.machines() {
        let seq = sched.sequence(machine);
        for i in 0..seq.len() {
            let incumbent = seq[i];
            let pred = if i == 0 { OpId::DUMMY } else { seq[i - 1] };
            let incumbent_setup_start =
                sched.start(incumbent) - inst.setup_between(pred, incumbent);
            for &waiting in &seq[i..] {
                let jp_done = sched.completion(inst.job_pred(waiting));
                let setup_at = sched
                    .completion(pred)
                    .max(jp_done.saturating_sub(inst.setup_between(pred, waiting)));
                if setup_at < incumbent_setup_start {
                    return Some(DelayWitness {
                        machine,
                        waiting,
                        at: setup_at,
                        incumbent,
                    });
                }
            }
        }
    }
    None
}

pub fn is_nondelay_2(inst: &Instance, sched: &Schedule) -> bool {
    nondelay_2_witness(inst, sched).is_none()
}
