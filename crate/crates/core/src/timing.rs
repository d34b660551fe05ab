//! Incremental schedule construction state and start-time computations.
//!
//! A [`PartialState`] holds the operations scheduled so far, per-machine
//! sequences, and the set of available operations (first unscheduled
//! operation of each job). Two placement styles exist:
//!
//! * appending after the machine's last operation at the earliest start
//!   compatible with job precedence and the setup out of the current last
//!   operation ([`PartialState::esa`]),
//! * inserting into the earliest gap large enough to hold setup, processing
//!   and the setup into the gap's right neighbor without delaying it
//!   ([`PartialState::esi`]).
//!
//! Insertion never moves an already-scheduled operation; feasibility of a
//! gap is checked against the fixed start of the right neighbor.

use crate::model::{Instance, OpId, Schedule, ScheduleViolation, Time, validate_schedule};

#[derive(Clone)]
pub struct PartialState<'a> {
    instance: &'a Instance,
    /// Indexed by flat id, slot 0 is the dummy. Valid only where scheduled.
    start: Vec<Time>,
    completion: Vec<Time>,
    scheduled: Vec<bool>,
    /// First unscheduled operation of each unfinished job, sorted by flat id
    /// (equivalently by job index, since available ops are one per job).
    available: Vec<OpId>,
    /// Indexed by machine, 1-based; slot 0 stays empty.
    sequences: Vec<Vec<OpId>>,
    placed: usize,
}

impl<'a> PartialState<'a> {
    pub fn new(instance: &'a Instance) -> Self {
        let n = instance.n_ops();
        let mut scheduled = vec![false; n + 1];
        scheduled[0] = true;
        let available = (1..=instance.jobs()).map(|job| instance.op(job, 1)).collect();
        PartialState {
            instance,
            start: vec![0; n + 1],
            completion: vec![0; n + 1],
            scheduled,
            available,
            sequences: vec![Vec::new(); instance.machines() + 1],
            placed: 0,
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    /// Operations whose job predecessor is complete, one per unfinished job.
    pub fn available(&self) -> &[OpId] {
        &self.available
    }

    pub fn is_scheduled(&self, op: OpId) -> bool {
        self.scheduled[op.index()]
    }

    pub fn start(&self, op: OpId) -> Time {
        debug_assert!(self.scheduled[op.index()]);
        self.start[op.index()]
    }

    /// Completion time; the dummy completes at 0.
    pub fn completion(&self, op: OpId) -> Time {
        debug_assert!(self.scheduled[op.index()]);
        self.completion[op.index()]
    }

    /// Last operation currently on `machine`, dummy if none.
    pub fn last_on(&self, machine: usize) -> OpId {
        self.sequences[machine].last().copied().unwrap_or(OpId::DUMMY)
    }

    /// Current sequence of `machine` in processing order.
    pub fn sequence(&self, machine: usize) -> &[OpId] {
        &self.sequences[machine]
    }

    pub fn placed(&self) -> usize {
        self.placed
    }

    pub fn complete(&self) -> bool {
        self.placed == self.instance.n_ops()
    }

    /// Earliest start when appending `op` after the machine's current last
    /// operation: job predecessor completion vs. machine release plus setup.
    pub fn esa(&self, op: OpId) -> Time {
        let pred = self.instance.job_pred(op);
        assert!(
            self.scheduled[pred.index()],
            "esa of {op:?}: job predecessor not scheduled"
        );
        let last = self.last_on(self.instance.machine_of(op));
        let machine_ready = self.completion(last) + self.instance.setup_between(last, op);
        self.completion(pred).max(machine_ready)
    }

    /// Setup time `op` would pay when appended now (from the machine's
    /// current last operation, or the initial state).
    pub fn pending_setup(&self, op: OpId) -> Time {
        let last = self.last_on(self.instance.machine_of(op));
        self.instance.setup_between(last, op)
    }

    /// Whether `op` fits at insertion position `q` on its machine, i.e.
    /// between the q-th and (q+1)-th scheduled operations (q = 0 is the
    /// front). Position `q = len` is the append slot and always fits.
    ///
    /// A gap fits when setup + processing + setup into the right neighbor
    /// all complete by the neighbor's fixed start.
    pub fn feasible_insertion(&self, op: OpId, q: usize) -> bool {
        let seq = &self.sequences[self.instance.machine_of(op)];
        assert!(q <= seq.len(), "insertion position out of range");
        if q == seq.len() {
            return true;
        }
        let succ = seq[q];
        self.gap_start(op, q) + self.instance.duration(op) + self.instance.setup_between(op, succ)
            <= self.start(succ)
    }

    /// Earliest start of `op` if placed at position `q`.
    fn gap_start(&self, op: OpId, q: usize) -> Time {
        let seq = &self.sequences[self.instance.machine_of(op)];
        let pred_in_seq = if q == 0 { OpId::DUMMY } else { seq[q - 1] };
        let machine_ready =
            self.completion(pred_in_seq) + self.instance.setup_between(pred_in_seq, op);
        self.completion(self.instance.job_pred(op)).max(machine_ready)
    }

    /// Earliest feasible insertion: the smallest position whose gap fits,
    /// falling back to appending. Returns (start, position).
    pub fn esi(&self, op: OpId) -> (Time, usize) {
        let pred = self.instance.job_pred(op);
        assert!(
            self.scheduled[pred.index()],
            "esi of {op:?}: job predecessor not scheduled"
        );
        let len = self.sequences[self.instance.machine_of(op)].len();
        for q in 0..len {
            if self.feasible_insertion(op, q) {
                return (self.gap_start(op, q), q);
            }
        }
        (self.esa(op), len)
    }

    /// Appends `op` at its earliest appending start. Returns the start.
    pub fn append(&mut self, op: OpId) -> Time {
        let t = self.esa(op);
        let machine = self.instance.machine_of(op);
        let len = self.sequences[machine].len();
        self.place(op, t, len);
        t
    }

    /// Places `op` at its earliest feasible insertion. Returns (start, position).
    pub fn insert(&mut self, op: OpId) -> (Time, usize) {
        let (t, q) = self.esi(op);
        self.place(op, t, q);
        (t, q)
    }

    fn place(&mut self, op: OpId, t: Time, q: usize) {
        let idx = self
            .available
            .iter()
            .position(|&a| a == op)
            .expect("placed operation must be available");
        self.available.remove(idx);
        if let Some(succ) = self.instance.job_succ(op) {
            // One op per job in `available`: the successor takes the same slot
            // in the flat-id order.
            self.available.insert(idx, succ);
        }
        let id = op.index();
        self.start[id] = t;
        self.completion[id] = t + self.instance.duration(op);
        self.scheduled[id] = true;
        self.sequences[self.instance.machine_of(op)].insert(q, op);
        self.placed += 1;
    }

    /// Feasibility of the scheduled prefix: job precedence between scheduled
    /// pairs, initial setups, and processing + setup along each sequence.
    pub fn check_feasible(&self) -> Result<(), ScheduleViolation> {
        for op in self.instance.iter_ops() {
            if !self.scheduled[op.index()] {
                continue;
            }
            let pred = self.instance.job_pred(op);
            debug_assert!(self.scheduled[pred.index()], "scheduled op with unscheduled predecessor");
            if self.start(op) < self.completion(pred) {
                return Err(ScheduleViolation::Precedence {
                    op,
                    start: self.start(op),
                    pred_completion: self.completion(pred),
                });
            }
        }
        for machine in 1..=self.instance.machines() {
            let seq = &self.sequences[machine];
            if let Some(&first) = seq.first() {
                let setup_end = self.instance.setup_between(OpId::DUMMY, first);
                if self.start(first) < setup_end {
                    return Err(ScheduleViolation::InitialSetup {
                        op: first,
                        start: self.start(first),
                        setup_end,
                    });
                }
            }
            for pair in seq.windows(2) {
                let earliest = self.completion(pair[0]) + self.instance.setup_between(pair[0], pair[1]);
                if self.start(pair[1]) < earliest {
                    return Err(ScheduleViolation::Disjunctive {
                        machine,
                        first: pair[0],
                        second: pair[1],
                        start: self.start(pair[1]),
                        earliest,
                    });
                }
            }
        }
        Ok(())
    }

    /// Finalizes a complete construction.
    pub fn into_schedule(self) -> Schedule {
        assert!(self.complete(), "schedule incomplete: {}/{} placed", self.placed, self.instance.n_ops());
        let schedule = Schedule::from_starts(self.instance, &self.start[1..]);
        debug_assert_eq!(validate_schedule(self.instance, &schedule), Ok(()));
        schedule
    }
}
