//! Shared test oracles.
//!
//! Everything here recomputes results straight from the instance data with
//! its own arithmetic: schedules are priced by longest-path propagation
//! over fixed machine sequences, the optimum by trying every per-machine
//! permutation, and the classic conflict-set constructions keep their own
//! running state. None of it touches the library's partial-schedule code,
//! so agreement between the two is evidence, not circularity.

// Each integration test target compiles its own copy; not every target
// uses every oracle.
#![allow(dead_code)]

use sdst_jsp::model::{Instance, OpId, Schedule, Time};
use sdst_jsp::rules::PriorityVector;

/// Operations of each machine in job order; index 0 stays empty.
pub fn ops_by_machine(inst: &Instance) -> Vec<Vec<OpId>> {
    let mut out = vec![Vec::new(); inst.machines() + 1];
    for op in inst.iter_ops() {
        out[inst.machine_of(op)].push(op);
    }
    out
}

/// Earliest start times consistent with the given machine sequences, or
/// `None` when the combined precedence relation has a cycle.
///
/// Propagates two constraint families: an operation starts no earlier than
/// its job predecessor's completion, and no earlier than its machine
/// predecessor's completion plus the changeover (the initial setup for the
/// head of a sequence).
pub fn starts_for_sequences(inst: &Instance, seqs: &[Vec<OpId>]) -> Option<Vec<Time>> {
    let n = inst.n_ops();
    let mut earliest = vec![0 as Time; n + 1];
    let mut indegree = vec![0usize; n + 1];
    let mut machine_pred: Vec<Option<OpId>> = vec![None; n + 1];
    for seq in seqs.iter() {
        let mut prev: Option<OpId> = None;
        for &op in seq {
            if let Some(p) = prev {
                indegree[op.index()] += 1;
                machine_pred[op.index()] = Some(p);
            } else {
                earliest[op.index()] = inst.setup_between(OpId::DUMMY, op);
            }
            prev = Some(op);
        }
    }
    for op in inst.iter_ops() {
        if !inst.job_pred(op).is_dummy() {
            indegree[op.index()] += 1;
        }
    }
    let mut queue: Vec<OpId> = inst.iter_ops().filter(|o| indegree[o.index()] == 0).collect();
    let mut done = 0;
    let mut machine_succ: Vec<Option<OpId>> = vec![None; n + 1];
    for seq in seqs.iter() {
        for pair in seq.windows(2) {
            machine_succ[pair[0].index()] = Some(pair[1]);
        }
    }
    while let Some(op) = queue.pop() {
        done += 1;
        let completion = earliest[op.index()] + inst.duration(op);
        if let Some(succ) = inst.job_succ(op) {
            let e = &mut earliest[succ.index()];
            *e = (*e).max(completion);
            indegree[succ.index()] -= 1;
            if indegree[succ.index()] == 0 {
                queue.push(succ);
            }
        }
        if let Some(succ) = machine_succ[op.index()] {
            let e = &mut earliest[succ.index()];
            *e = (*e).max(completion + inst.setup_between(op, succ));
            indegree[succ.index()] -= 1;
            if indegree[succ.index()] == 0 {
                queue.push(succ);
            }
        }
    }
    if done < n {
        return None; // cycle: the sequences contradict the job orders
    }
    Some(earliest[1..].to_vec())
}

fn makespan_of(inst: &Instance, starts: &[Time]) -> Time {
    inst.iter_ops()
        .map(|op| starts[op.index() - 1] + inst.duration(op))
        .max()
        .unwrap_or(0)
}

fn permutations<T: Copy>(items: &[T]) -> Vec<Vec<T>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &head) in items.iter().enumerate() {
        let mut rest: Vec<T> = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Exact optimum by trying every combination of per-machine orders.
/// Exponential; for suite-sized instances only.
pub fn permutation_optimum(inst: &Instance) -> (Time, Vec<Time>) {
    let per_machine: Vec<Vec<Vec<OpId>>> = ops_by_machine(inst)
        .iter()
        .map(|ops| permutations(ops))
        .collect();
    let mut pick = vec![0usize; inst.machines() + 1];
    let mut best: Option<(Time, Vec<Time>)> = None;
    'outer: loop {
        let seqs: Vec<Vec<OpId>> = (0..=inst.machines())
            .map(|m| per_machine[m][pick[m]].clone())
            .collect();
        if let Some(starts) = starts_for_sequences(inst, &seqs) {
            let makespan = makespan_of(inst, &starts);
            if best.as_ref().is_none_or(|(b, _)| makespan < *b) {
                best = Some((makespan, starts));
            }
        }
        // Odometer over the permutation choices.
        for m in 1..=inst.machines() {
            pick[m] += 1;
            if pick[m] < per_machine[m].len() {
                continue 'outer;
            }
            pick[m] = 0;
        }
        break;
    }
    best.expect("the job-order sequences are always acyclic")
}

/// Number of per-machine order combinations [`permutation_optimum`] tries.
pub fn permutation_combinations(inst: &Instance) -> usize {
    ops_by_machine(inst)
        .iter()
        .skip(1)
        .map(|ops| (1..=ops.len()).product::<usize>())
        .product()
}

struct GreedyState {
    job_pos: Vec<usize>,
    job_ready: Vec<Time>,
    mach_ready: Vec<Time>,
    starts: Vec<Time>,
}

impl GreedyState {
    fn new(inst: &Instance) -> Self {
        GreedyState {
            job_pos: vec![1; inst.jobs() + 1],
            job_ready: vec![0; inst.jobs() + 1],
            mach_ready: vec![0; inst.machines() + 1],
            starts: vec![0; inst.n_ops()],
        }
    }

    fn available(&self, inst: &Instance) -> Vec<OpId> {
        (1..=inst.jobs())
            .filter(|&j| self.job_pos[j] <= inst.machines())
            .map(|j| inst.op(j, self.job_pos[j]))
            .collect()
    }

    fn es(&self, inst: &Instance, op: OpId) -> Time {
        self.job_ready[inst.job_of(op)].max(self.mach_ready[inst.machine_of(op)])
    }

    fn place(&mut self, inst: &Instance, op: OpId) {
        let start = self.es(inst, op);
        let completion = start + inst.duration(op);
        self.starts[op.index() - 1] = start;
        self.job_ready[inst.job_of(op)] = completion;
        self.mach_ready[inst.machine_of(op)] = completion;
        self.job_pos[inst.job_of(op)] += 1;
    }
}

/// Classic conflict-set construction for zero-setup instances, choosing by
/// a static priority vector: anchor on the operation with the earliest
/// completion, restrict to its machine's operations that could start
/// before that completion, append the lowest-ranked one.
pub fn classic_conflict_set_pass(inst: &Instance, order: &PriorityVector) -> Vec<Time> {
    let mut st = GreedyState::new(inst);
    for _ in 0..inst.n_ops() {
        let avail = st.available(inst);
        let c_star = avail
            .iter()
            .map(|&o| st.es(inst, o) + inst.duration(o))
            .min()
            .expect("some job unfinished");
        let m_star = inst.machine_of(
            *avail
                .iter()
                .find(|&&o| st.es(inst, o) + inst.duration(o) == c_star)
                .expect("minimum exists"),
        );
        let conflict: Vec<OpId> = avail
            .iter()
            .copied()
            .filter(|&o| inst.machine_of(o) == m_star && st.es(inst, o) < c_star)
            .collect();
        st.place(inst, order.pick(&conflict));
    }
    st.starts
}

/// Classic non-delay construction for zero-setup instances: anchor on the
/// earliest possible start, restrict to that machine's operations starting
/// exactly then, append the lowest-ranked one.
pub fn classic_nondelay_pass(inst: &Instance, order: &PriorityVector) -> Vec<Time> {
    let mut st = GreedyState::new(inst);
    for _ in 0..inst.n_ops() {
        let avail = st.available(inst);
        let t_star = avail
            .iter()
            .map(|&o| st.es(inst, o))
            .min()
            .expect("some job unfinished");
        let m_star = inst.machine_of(
            *avail
                .iter()
                .find(|&&o| st.es(inst, o) == t_star)
                .expect("minimum exists"),
        );
        let eligible: Vec<OpId> = avail
            .iter()
            .copied()
            .filter(|&o| inst.machine_of(o) == m_star && st.es(inst, o) == t_star)
            .collect();
        st.place(inst, order.pick(&eligible));
    }
    st.starts
}

/// Start order of a schedule (ties to the smaller flat id), as a priority
/// vector for replay tests.
pub fn start_order(inst: &Instance, schedule: &Schedule) -> PriorityVector {
    let mut ops: Vec<OpId> = inst.iter_ops().collect();
    ops.sort_by_key(|&op| (schedule.start(op), op));
    PriorityVector::from_order(inst.n_ops(), &ops)
}
