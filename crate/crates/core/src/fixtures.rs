//! Small reference instances used across tests and the demo.
//!
//! Each instance exercises a specific construction phenomenon. Setup values
//! are attached per operation via [`Instance::from_op_setups`]; where a
//! scenario leaves a value open, the chosen filler is noted and kept
//! triangle-safe.

use crate::model::{Instance, Time};

/// 2 jobs x 2 machines with strongly asymmetric setups on machine 1.
///
/// Job 1: o(1,1) machine 1 (p=2), o(1,2) machine 2 (p=1).
/// Job 2: o(2,1) machine 2 (p=5), o(2,2) machine 1 (p=2).
/// Machine 1 setups: initial 1 for o(1,1), 2 for o(2,2),
/// o(1,1)->o(2,2) = 10, o(2,2)->o(1,1) = 3. Machine 2 has none.
///
/// Scheduling o(2,2) before o(1,1) on machine 1 is optimal (makespan 13)
/// but no greedy earliest-completion construction finds it; appending in
/// job order gives makespan 15.
pub fn two_by_two() -> Instance {
    Instance::from_op_setups(
        2,
        2,
        &[(1, 2), (2, 1), (2, 5), (1, 2)],
        &[(1, 1), (4, 2)],
        &[((1, 4), 10), ((4, 1), 3)],
    )
    .unwrap()
}

/// 4 jobs x 2 machines; machine 1 hosts o(1,1), o(2,2), o(3,2), o(4,1).
///
/// The interesting state arises after scheduling o(2,1) on machine 2 at
/// [0,5]: the conflict around machine 1 separates the two
/// earliest-completion eligible-set definitions (the pairwise one keeps
/// o(2,2), the mutual one drops it because o(4,1) finishes and switches
/// to o(2,2) no later than o(2,2) could start).
///
/// Durations of o(1,2), o(3,2), o(4,2) and setups involving o(3,2) are not
/// pinned by the scenario; paddings are 1 and 10 (10 is the machine-1
/// maximum, which keeps the triangle inequality intact).
pub fn four_job_conflict() -> Instance {
    Instance::from_op_setups(
        4,
        2,
        &[
            (1, 2), // o(1,1)
            (2, 1), // o(1,2) padding
            (2, 5), // o(2,1)
            (1, 2), // o(2,2)
            (2, 2), // o(3,1)
            (1, 1), // o(3,2) padding
            (1, 3), // o(4,1)
            (2, 1), // o(4,2) padding
        ],
        &[(1, 1), (4, 2), (7, 1)],
        &[
            ((1, 4), 10),
            ((1, 7), 9),
            ((4, 1), 8),
            ((4, 7), 5),
            ((7, 1), 3),
            ((7, 4), 1),
            ((1, 6), 10),
            ((6, 1), 10),
            ((4, 6), 10),
            ((6, 4), 10),
            ((7, 6), 10),
            ((6, 7), 10),
        ],
    )
    .unwrap()
}

/// 4 jobs x 3 machines; extends [`four_job_conflict`] with a third machine
/// so that job 4 reaches machine 1 only with its second operation.
///
/// After scheduling o(2,1), then appending o(2,2) on machine 1, then
/// scheduling o(4,1) on machine 3, operation o(4,2) becomes available at 3
/// and fits in front of o(2,2). Any appending construction puts it after
/// o(2,2) instead, losing activeness.
///
/// Machine assignment: jobs 1..3 run machine order as before with a third
/// operation on machine 3; job 4 runs 3, 1, 2. Machine-1 setups follow
/// [`four_job_conflict`] with o(4,2) taking the values o(4,1) had there,
/// except the initial setup of o(4,2) is 0. Unpinned durations are 1,
/// unpinned machine-1 setups (o(3,2) pairs) are 10.
pub fn three_machine_conflict() -> Instance {
    Instance::from_op_setups(
        4,
        3,
        &[
            (1, 2), // o(1,1)
            (2, 1), // o(1,2) padding
            (3, 1), // o(1,3) padding
            (2, 5), // o(2,1)
            (1, 2), // o(2,2)
            (3, 1), // o(2,3) padding
            (2, 2), // o(3,1)
            (1, 1), // o(3,2) padding
            (3, 1), // o(3,3) padding
            (3, 3), // o(4,1)
            (1, 1), // o(4,2)
            (2, 1), // o(4,3) padding
        ],
        &[(1, 1), (5, 2), (11, 0)],
        &[
            ((1, 5), 10),
            ((5, 1), 8),
            ((1, 11), 9),
            ((5, 11), 5),
            ((11, 1), 3),
            ((11, 5), 1),
            ((1, 8), 10),
            ((8, 1), 10),
            ((5, 8), 10),
            ((8, 5), 10),
            ((11, 8), 10),
            ((8, 11), 10),
        ],
    )
    .unwrap()
}

/// 2 jobs x 4 machines built so that o(2,3) can slide in front of o(1,2)
/// on machine 1, anticipating its setup before its job predecessor is done.
///
/// Job 1 runs machines 4, 1, 2, 3 with p = 6, 2, 1, 1.
/// Job 2 runs machines 3, 2, 1, 4 with p = 2, 1, 1, 1.
/// Machine 1 setups: initial 5 for o(1,2), 3 for o(2,3),
/// o(2,3)->o(1,2) = `back` and o(1,2)->o(2,3) = 2.
///
/// With `back = 2` the insertion in front of o(1,2) at t=6 is exactly
/// feasible: max(3, 0+3) + 1 + 2 = 6, so o(2,3) starts at 3 and its setup
/// at 0, before its job predecessor o(2,2) even completes. With `back = 3`
/// the slot is one time unit too small and o(2,3) must go last.
pub fn insertion_showcase(back: Time) -> Instance {
    Instance::from_op_setups(
        2,
        4,
        &[
            (4, 6), // o(1,1)
            (1, 2), // o(1,2)
            (2, 1), // o(1,3) padding
            (3, 1), // o(1,4) padding
            (3, 2), // o(2,1)
            (2, 1), // o(2,2)
            (1, 1), // o(2,3)
            (4, 1), // o(2,4) padding
        ],
        &[(2, 5), (7, 3)],
        &[((7, 2), back), ((2, 7), 2)],
    )
    .unwrap()
}
