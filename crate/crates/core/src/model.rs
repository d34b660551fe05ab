//! Problem data and schedule representation.
//!
//! An instance has `n` jobs of `m` operations each. Operation `o(i,j)` is the
//! j-th step of job i and is identified by the flat id `j + (i-1)*m`, so flat
//! ids run over `1..=n*m`. Id 0 is a dummy operation with zero duration that
//! stands for "nothing scheduled yet" on a machine: setups out of the dummy
//! (matrix row 0) are the initial setup of a machine.
//!
//! Setups are sequence dependent and attached to setup *types*: each
//! operation carries a type in `1..=T` and switching a machine from an
//! operation of type `a` to one of type `b` costs `s[a][b]`. Feasibility of
//! the usual greedy constructions relies on the triangle inequality
//! `s[a][b] + s[b][c] >= s[a][c]`, checked by [`SetupMatrix::validate_triangle`].

use std::fmt;

use thiserror::Error;

/// Non-negative integral time. All durations, setups and start times are
/// integers; nothing in the crate ever divides or rounds a time.
pub type Time = u32;

/// Flat operation id. 0 is the dummy operation, real operations are `1..=n*m`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpId(pub usize);

impl OpId {
    /// The dummy operation: completes at time 0 and has setup type 0.
    pub const DUMMY: OpId = OpId(0);

    pub fn is_dummy(self) -> bool {
        self.0 == 0
    }

    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Debug for OpId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "op#{}", self.0)
    }
}

/// Setup times keyed by type: `(T+1) x T`, row 0 holds initial setups.
///
/// There is no column for the dummy because no operation ever switches back
/// to it. Diagonal entries `s[t][t]` are consulted when two distinct
/// operations of the same type follow each other; an operation never
/// neighbors itself.
#[derive(Clone, PartialEq, Eq)]
pub struct SetupMatrix {
    types: usize,
    rows: Vec<Vec<Time>>,
}

/// First triple violating the triangle inequality, as setup types.
/// Row 0 (initial setups) is not part of the check: the inequality is only
/// needed between operations that can actually neighbor each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("triangle inequality violated for types ({a}, {b}, {c}): s[{a}][{b}] + s[{b}][{c}] < s[{a}][{c}]")]
pub struct TriangleViolation {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl SetupMatrix {
    /// `rows` must be `types + 1` rows of `types` entries each.
    pub fn new(types: usize, rows: Vec<Vec<Time>>) -> Result<Self, ModelError> {
        if types == 0 {
            return Err(ModelError::NoTypes);
        }
        if rows.len() != types + 1 || rows.iter().any(|r| r.len() != types) {
            return Err(ModelError::MatrixShape {
                types,
                rows: rows.len(),
            });
        }
        Ok(SetupMatrix { types, rows })
    }

    /// All-zero matrix: the classic job shop without setups.
    pub fn zero(types: usize) -> Self {
        SetupMatrix {
            types,
            rows: vec![vec![0; types]; types + 1],
        }
    }

    pub fn types(&self) -> usize {
        self.types
    }

    /// Setup time when a machine switches from type `from` (0 = initial
    /// state) to an operation of type `to` (`1..=T`).
    pub fn between(&self, from: usize, to: usize) -> Time {
        debug_assert!(from <= self.types && (1..=self.types).contains(&to));
        self.rows[from][to - 1]
    }

    pub fn rows(&self) -> &[Vec<Time>] {
        &self.rows
    }

    /// Checks `s[a][b] + s[b][c] >= s[a][c]` over all type triples,
    /// repeated types included (distinct same-type operations do consult the
    /// diagonal). Returns the first violating triple in lexicographic order.
    pub fn validate_triangle(&self) -> Result<(), TriangleViolation> {
        for a in 1..=self.types {
            for b in 1..=self.types {
                for c in 1..=self.types {
                    if self.between(a, b) + self.between(b, c) < self.between(a, c) {
                        return Err(TriangleViolation { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SetupMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetupMatrix({} types)", self.types)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("instance needs at least one job and one machine")]
    Empty,
    #[error("at least one setup type is required")]
    NoTypes,
    #[error("setup matrix must have types+1 rows of types entries (types {types}, got {rows} rows)")]
    MatrixShape { types: usize, rows: usize },
    #[error("expected {expected} operations, got {got}")]
    OpCount { expected: usize, got: usize },
    #[error("operation {op:?} names machine {machine}, valid range is 1..={machines}")]
    BadMachine {
        op: OpId,
        machine: usize,
        machines: usize,
    },
    #[error("operation {op:?} names setup type {ty}, valid range is 1..={types}")]
    BadType { op: OpId, ty: usize, types: usize },
}

/// One operation's static data in flat order: machine, duration, setup type.
pub type OpSpec = (usize, Time, usize);

/// An immutable problem instance.
#[derive(Clone, PartialEq, Eq)]
pub struct Instance {
    jobs: usize,
    machines: usize,
    /// Indexed by flat id; slot 0 is unused filler for the dummy.
    machine_of: Vec<usize>,
    duration: Vec<Time>,
    setup_type: Vec<usize>,
    /// Sum of durations from an operation to the end of its job, inclusive.
    tail_work: Vec<Time>,
    setup: SetupMatrix,
}

impl Instance {
    /// `ops` lists all `jobs * machines` operations in flat order.
    pub fn new(
        jobs: usize,
        machines: usize,
        ops: &[OpSpec],
        setup: SetupMatrix,
    ) -> Result<Self, ModelError> {
        if jobs == 0 || machines == 0 {
            return Err(ModelError::Empty);
        }
        let n = jobs * machines;
        if ops.len() != n {
            return Err(ModelError::OpCount {
                expected: n,
                got: ops.len(),
            });
        }
        let mut machine_of = vec![0; n + 1];
        let mut duration = vec![0; n + 1];
        let mut setup_type = vec![0; n + 1];
        for (idx, &(machine, dur, ty)) in ops.iter().enumerate() {
            let op = OpId(idx + 1);
            if !(1..=machines).contains(&machine) {
                return Err(ModelError::BadMachine {
                    op,
                    machine,
                    machines,
                });
            }
            if !(1..=setup.types()).contains(&ty) {
                return Err(ModelError::BadType {
                    op,
                    ty,
                    types: setup.types(),
                });
            }
            machine_of[op.0] = machine;
            duration[op.0] = dur;
            setup_type[op.0] = ty;
        }
        let mut tail_work = vec![0; n + 1];
        for job in 1..=jobs {
            let mut acc = 0;
            for pos in (1..=machines).rev() {
                let id = pos + (job - 1) * machines;
                acc += duration[id];
                tail_work[id] = acc;
            }
        }
        Ok(Instance {
            jobs,
            machines,
            machine_of,
            duration,
            setup_type,
            tail_work,
            setup,
        })
    }

    /// Builds an instance from per-operation setup values, giving every
    /// operation its own setup type (type = flat id).
    ///
    /// `initial` lists `(op, s[0][op])` entries, `pairs` lists
    /// `((from, to), s)` for same-machine operation pairs; everything not
    /// listed is 0. Pairs of operations on different machines are never
    /// consulted by any computation, so their matrix slots are filled with
    /// the largest listed value to keep the type-level triangle check
    /// satisfiable.
    pub fn from_op_setups(
        jobs: usize,
        machines: usize,
        ops: &[(usize, Time)],
        initial: &[(usize, Time)],
        pairs: &[((usize, usize), Time)],
    ) -> Result<Self, ModelError> {
        let n = jobs * machines;
        if ops.len() != n {
            return Err(ModelError::OpCount {
                expected: n,
                got: ops.len(),
            });
        }
        let fill = pairs.iter().map(|&(_, s)| s).max().unwrap_or(0);
        let mut rows = Vec::with_capacity(n + 1);
        let mut row0 = vec![0; n];
        for &(op, s) in initial {
            row0[op - 1] = s;
        }
        rows.push(row0);
        for from in 1..=n {
            let mut row = vec![0; n];
            for to in 1..=n {
                if from == to {
                    continue;
                }
                row[to - 1] = if ops[from - 1].0 == ops[to - 1].0 {
                    0
                } else {
                    fill
                };
            }
            rows.push(row);
        }
        for &((from, to), s) in pairs {
            rows[from][to - 1] = s;
        }
        let specs: Vec<OpSpec> = ops
            .iter()
            .enumerate()
            .map(|(idx, &(machine, dur))| (machine, dur, idx + 1))
            .collect();
        Instance::new(jobs, machines, &specs, SetupMatrix::new(n, rows)?)
    }

    pub fn jobs(&self) -> usize {
        self.jobs
    }

    pub fn machines(&self) -> usize {
        self.machines
    }

    /// Number of real operations, `jobs * machines`.
    pub fn n_ops(&self) -> usize {
        self.jobs * self.machines
    }

    pub fn setup(&self) -> &SetupMatrix {
        &self.setup
    }

    /// Flat id of `o(job, pos)`, both 1-based.
    pub fn op(&self, job: usize, pos: usize) -> OpId {
        debug_assert!((1..=self.jobs).contains(&job) && (1..=self.machines).contains(&pos));
        OpId(pos + (job - 1) * self.machines)
    }

    pub fn job_of(&self, op: OpId) -> usize {
        debug_assert!(!op.is_dummy());
        (op.0 - 1) / self.machines + 1
    }

    pub fn pos_of(&self, op: OpId) -> usize {
        debug_assert!(!op.is_dummy());
        (op.0 - 1) % self.machines + 1
    }

    pub fn machine_of(&self, op: OpId) -> usize {
        self.machine_of[op.0]
    }

    pub fn duration(&self, op: OpId) -> Time {
        self.duration[op.0]
    }

    pub fn setup_type_of(&self, op: OpId) -> usize {
        self.setup_type[op.0]
    }

    /// Job predecessor of `op`, or the dummy for a job's first operation.
    pub fn job_pred(&self, op: OpId) -> OpId {
        if self.pos_of(op) == 1 {
            OpId::DUMMY
        } else {
            OpId(op.0 - 1)
        }
    }

    /// Job successor of `op`, or `None` for a job's last operation.
    pub fn job_succ(&self, op: OpId) -> Option<OpId> {
        if self.pos_of(op) == self.machines {
            None
        } else {
            Some(OpId(op.0 + 1))
        }
    }

    /// Setup time charged when `b` follows `a` on a machine. `a` may be the
    /// dummy (initial setup); `b` must be a real operation.
    pub fn setup_between(&self, a: OpId, b: OpId) -> Time {
        self.setup.between(self.setup_type[a.0], self.setup_type[b.0])
    }

    /// Remaining processing time of `op`'s job from `op` on, inclusive.
    pub fn tail_work(&self, op: OpId) -> Time {
        self.tail_work[op.0]
    }

    pub fn iter_ops(&self) -> impl Iterator<Item = OpId> {
        (1..=self.n_ops()).map(OpId)
    }

    pub fn validate_triangle(&self) -> Result<(), TriangleViolation> {
        self.setup.validate_triangle()
    }

    /// Human-readable name, `o(i,j)`.
    pub fn op_label(&self, op: OpId) -> String {
        format!("o({},{})", self.job_of(op), self.pos_of(op))
    }
}

impl fmt::Debug for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Instance({} jobs x {} machines, {} setup types)",
            self.jobs,
            self.machines,
            self.setup.types()
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ScheduleViolation {
    /// First operation on a machine starts before its initial setup is done.
    #[error("operation {op:?} starts at {start} before its initial setup completes at {setup_end}")]
    InitialSetup { op: OpId, start: Time, setup_end: Time },
    /// An operation starts before its job predecessor completes.
    #[error("operation {op:?} starts at {start} before job predecessor completes at {pred_completion}")]
    Precedence {
        op: OpId,
        start: Time,
        pred_completion: Time,
    },
    /// Consecutive same-machine operations violate processing + setup.
    #[error("machine {machine}: {second:?} starts at {start} before {first:?} completes and the setup elapses (earliest {earliest})")]
    Disjunctive {
        machine: usize,
        first: OpId,
        second: OpId,
        start: Time,
        earliest: Time,
    },
    /// Recorded makespan does not match the start times.
    #[error("stored makespan {stored} differs from computed {computed}")]
    Makespan { stored: Time, computed: Time },
}

/// A complete assignment of start times.
///
/// Machine sequences are derived from the start times (ties broken by flat
/// id) and the makespan is the largest completion over the last operation of
/// each job. Identity of a schedule is its start-time vector: two schedules
/// with equal starts are the same schedule.
#[derive(Clone, PartialEq, Eq)]
pub struct Schedule {
    /// Indexed by flat id; slot 0 is the dummy and pinned to 0.
    start: Vec<Time>,
    completion: Vec<Time>,
    /// Indexed by machine (1-based); slot 0 stays empty.
    sequences: Vec<Vec<OpId>>,
    makespan: Time,
}

impl Schedule {
    /// `starts` holds one entry per real operation in flat order.
    pub fn from_starts(instance: &Instance, starts: &[Time]) -> Self {
        assert_eq!(starts.len(), instance.n_ops(), "one start per operation");
        let mut start = Vec::with_capacity(starts.len() + 1);
        start.push(0);
        start.extend_from_slice(starts);
        let completion: Vec<Time> = start
            .iter()
            .enumerate()
            .map(|(id, &t)| t + instance.duration[id])
            .collect();
        let mut sequences = vec![Vec::new(); instance.machines + 1];
        for op in instance.iter_ops() {
            sequences[instance.machine_of(op)].push(op);
        }
        for seq in &mut sequences {
            seq.sort_by_key(|op| (start[op.0], op.0));
        }
        let makespan = (1..=instance.jobs)
            .map(|job| completion[instance.op(job, instance.machines).0])
            .max()
            .unwrap_or(0);
        Schedule {
            start,
            completion,
            sequences,
            makespan,
        }
    }

    pub fn start(&self, op: OpId) -> Time {
        self.start[op.0]
    }

    pub fn completion(&self, op: OpId) -> Time {
        self.completion[op.0]
    }

    /// Start times of the real operations in flat order.
    pub fn starts(&self) -> &[Time] {
        &self.start[1..]
    }

    pub fn makespan(&self) -> Time {
        self.makespan
    }

    /// Operations on `machine` in processing order.
    pub fn sequence(&self, machine: usize) -> &[OpId] {
        &self.sequences[machine]
    }

    pub fn machines(&self) -> usize {
        self.sequences.len() - 1
    }
}

impl fmt::Debug for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Schedule(makespan {}, starts {:?})", self.makespan, self.starts())
    }
}

/// Checks the three feasibility constraint families:
/// initial setups for the first operation of each machine, job precedence,
/// and processing + setup between consecutive same-machine operations.
/// Under the triangle inequality the consecutive-pair check covers all
/// same-machine pairs. Returns the first violation found.
pub fn validate_schedule(instance: &Instance, schedule: &Schedule) -> Result<(), ScheduleViolation> {
    for op in instance.iter_ops() {
        let pred = instance.job_pred(op);
        if schedule.start(op) < schedule.completion(pred) {
            return Err(ScheduleViolation::Precedence {
                op,
                start: schedule.start(op),
                pred_completion: schedule.completion(pred),
            });
        }
    }
    for machine in 1..=instance.machines {
        let seq = schedule.sequence(machine);
        if let Some(&first) = seq.first() {
            let setup_end = instance.setup_between(OpId::DUMMY, first);
            if schedule.start(first) < setup_end {
                return Err(ScheduleViolation::InitialSetup {
                    op: first,
                    start: schedule.start(first),
                    setup_end,
                });
            }
        }
        for pair in seq.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let earliest = schedule.completion(a) + instance.setup_between(a, b);
            if schedule.start(b) < earliest {
                return Err(ScheduleViolation::Disjunctive {
                    machine,
                    first: a,
                    second: b,
                    start: schedule.start(b),
                    earliest,
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn flat_ids_round_trip() {
        let inst = fixtures::two_by_two();
        assert_eq!(inst.op(1, 1), OpId(1));
        assert_eq!(inst.op(1, 2), OpId(2));
        assert_eq!(inst.op(2, 1), OpId(3));
        assert_eq!(inst.op(2, 2), OpId(4));
        for op in inst.iter_ops() {
            assert_eq!(inst.op(inst.job_of(op), inst.pos_of(op)), op);
        }
        assert_eq!(inst.job_pred(inst.op(2, 2)), inst.op(2, 1));
        assert_eq!(inst.job_pred(inst.op(2, 1)), OpId::DUMMY);
        assert_eq!(inst.job_succ(inst.op(1, 1)), Some(inst.op(1, 2)));
        assert_eq!(inst.job_succ(inst.op(1, 2)), None);
    }

    #[test]
    fn setup_lookup_uses_types() {
        let inst = fixtures::two_by_two();
        let o11 = inst.op(1, 1);
        let o22 = inst.op(2, 2);
        assert_eq!(inst.setup_between(OpId::DUMMY, o11), 1);
        assert_eq!(inst.setup_between(OpId::DUMMY, o22), 2);
        assert_eq!(inst.setup_between(o11, o22), 10);
        assert_eq!(inst.setup_between(o22, o11), 3);
        // Machine-2 operations have no setups.
        assert_eq!(inst.setup_between(inst.op(2, 1), inst.op(1, 2)), 0);
    }

    #[test]
    fn triangle_violation_reports_first_triple() {
        // s[1][2] + s[2][3] < s[1][3]
        let rows = vec![
            vec![0, 0, 0],
            vec![0, 1, 5],
            vec![0, 0, 1],
            vec![0, 0, 0],
        ];
        let m = SetupMatrix::new(3, rows).unwrap();
        assert_eq!(
            m.validate_triangle(),
            Err(TriangleViolation { a: 1, b: 2, c: 3 })
        );
    }

    #[test]
    fn fixture_matrices_satisfy_triangle() {
        for inst in [
            fixtures::two_by_two(),
            fixtures::four_job_conflict(),
            fixtures::three_machine_conflict(),
            fixtures::insertion_showcase(2),
            fixtures::insertion_showcase(3),
        ] {
            inst.validate_triangle().unwrap();
        }
    }

    #[test]
    fn reference_schedule_validates_with_makespan_15() {
        let inst = fixtures::two_by_two();
        // Starts in flat order: o(1,1), o(1,2), o(2,1), o(2,2).
        let sched = Schedule::from_starts(&inst, &[1, 3, 4, 13]);
        assert_eq!(validate_schedule(&inst, &sched), Ok(()));
        assert_eq!(sched.makespan(), 15);
        assert_eq!(sched.sequence(1), &[inst.op(1, 1), inst.op(2, 2)]);
        assert_eq!(sched.sequence(2), &[inst.op(1, 2), inst.op(2, 1)]);
    }

    #[test]
    fn validation_catches_each_constraint() {
        let inst = fixtures::two_by_two();
        // Initial setup: o(1,1) needs setup 1 on machine 1.
        let s = Schedule::from_starts(&inst, &[0, 3, 4, 13]);
        assert!(matches!(
            validate_schedule(&inst, &s),
            Err(ScheduleViolation::InitialSetup { .. })
        ));
        // Precedence: o(1,2) before o(1,1) completes at 3.
        let s = Schedule::from_starts(&inst, &[1, 2, 4, 13]);
        assert!(matches!(
            validate_schedule(&inst, &s),
            Err(ScheduleViolation::Precedence { .. })
        ));
        // Disjunctive: o(2,2) at 12 < c(o(1,1)) + s = 3 + 10.
        let s = Schedule::from_starts(&inst, &[1, 3, 4, 12]);
        assert!(matches!(
            validate_schedule(&inst, &s),
            Err(ScheduleViolation::Disjunctive { .. })
        ));
    }

    #[test]
    fn zero_duration_operations_are_legal() {
        let inst = Instance::new(
            1,
            2,
            &[(1, 0, 1), (2, 0, 1)],
            SetupMatrix::zero(1),
        )
        .unwrap();
        let sched = Schedule::from_starts(&inst, &[0, 0]);
        assert_eq!(validate_schedule(&inst, &sched), Ok(()));
        assert_eq!(sched.makespan(), 0);
    }

    #[test]
    fn construction_rejects_bad_shapes() {
        assert!(matches!(
            Instance::new(0, 1, &[], SetupMatrix::zero(1)),
            Err(ModelError::Empty)
        ));
        assert!(matches!(
            Instance::new(1, 1, &[(2, 1, 1)], SetupMatrix::zero(1)),
            Err(ModelError::BadMachine { .. })
        ));
        assert!(matches!(
            Instance::new(1, 1, &[(1, 1, 3)], SetupMatrix::zero(1)),
            Err(ModelError::BadType { .. })
        ));
        assert!(SetupMatrix::new(2, vec![vec![0, 0]; 2]).is_err());
    }

    #[test]
    fn tail_work_sums_remaining_durations() {
        let inst = fixtures::two_by_two();
        assert_eq!(inst.tail_work(inst.op(1, 1)), 3); // 2 + 1
        assert_eq!(inst.tail_work(inst.op(1, 2)), 1);
        assert_eq!(inst.tail_work(inst.op(2, 1)), 7); // 5 + 2
    }
}
