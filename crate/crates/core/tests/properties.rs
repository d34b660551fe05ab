//! Property-based invariants over randomly generated instances.

mod common;

use proptest::prelude::*;

use sdst_jsp::classify::{is_active, is_nondelay_1, is_semi_active};
use sdst_jsp::instances::{self, GeneratorConfig};
use sdst_jsp::model::{validate_schedule, Instance, OpId};
use sdst_jsp::rules::{PriorityVector, RuleKind};
use sdst_jsp::sampling::{self, SamplerConfig};
use sdst_jsp::sgs::{self, SgsKind};
use sdst_jsp::timing::PartialState;

fn config_strategy(scales: &'static [u32]) -> impl Strategy<Value = GeneratorConfig> {
    (
        1usize..=4,
        1usize..=4,
        prop_oneof![Just(None), (1usize..=4).prop_map(Some)],
        proptest::sample::select(scales),
        any::<u64>(),
    )
        .prop_map(|(jobs, machines, type_count, scale, seed)| GeneratorConfig {
            jobs,
            machines,
            type_count,
            scale,
            seed,
        })
}

fn instance_strategy(scales: &'static [u32]) -> impl Strategy<Value = Instance> {
    config_strategy(scales).prop_map(|cfg| instances::random_instance(&cfg))
}

/// A uniformly random total order over the operations of an instance.
fn with_order(scales: &'static [u32]) -> impl Strategy<Value = (Instance, PriorityVector)> {
    instance_strategy(scales).prop_flat_map(|inst| {
        let ops: Vec<OpId> = inst.iter_ops().collect();
        Just(ops)
            .prop_shuffle()
            .prop_map(move |order| {
                (
                    inst.clone(),
                    PriorityVector::from_order(inst.n_ops(), &order),
                )
            })
    })
}

const ALL_SCALES: &[u32] = &[0, 20, 100, 600];
const SETUP_SCALES: &[u32] = &[20, 100, 600];
const ZERO_SCALE: &[u32] = &[0];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trip_is_identity(inst in instance_strategy(ALL_SCALES)) {
        let text = instances::emit(&inst);
        let parsed = instances::parse(&text).unwrap();
        prop_assert_eq!(&parsed.instance, &inst);
        prop_assert_eq!(instances::emit(&parsed.instance), text);
        prop_assert!(parsed.triangle_warning.is_none());
    }

    #[test]
    fn every_output_is_feasible_and_in_its_class(
        inst in instance_strategy(ALL_SCALES),
        seed in any::<u64>(),
    ) {
        use rand::SeedableRng;
        for kind in SgsKind::ALL {
            for rule in [RuleKind::Mwkr, RuleKind::MinStart, RuleKind::Rand] {
                let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
                let sched = sgs::run(kind, &inst, rule, &mut rng, Some(0.2));
                prop_assert_eq!(validate_schedule(&inst, &sched), Ok(()));
                let (sa, act, nd1) = (
                    is_semi_active(&inst, &sched),
                    is_active(&inst, &sched),
                    is_nondelay_1(&inst, &sched),
                );
                // Containment chain (durations are >= 1 here).
                prop_assert!(!nd1 || act, "{} {}: nd1 schedule not active", kind, rule);
                prop_assert!(!act || sa, "{} {}: active schedule not semi-active", kind, rule);
                prop_assert!(sa, "{} {}: output not semi-active", kind, rule);
                if kind.uses_insertion() {
                    prop_assert!(act, "{} {}: insertion output not active", kind, rule);
                }
                if kind == SgsKind::Nd1 {
                    prop_assert!(nd1, "{}: output leaves the machine waiting", rule);
                }
            }
        }
    }

    #[test]
    fn start_order_replay_reproduces_outputs(
        (inst, pv) in with_order(ALL_SCALES),
    ) {
        for kind in SgsKind::ALL {
            let sched = sgs::run_static(kind, &inst, &pv);
            let order = common::start_order(&inst, &sched);
            let replay = sgs::run_static(SgsKind::SemiActive, &inst, &order);
            prop_assert_eq!(replay.starts(), sched.starts(), "{} via appending", kind);
        }
        let sched = sgs::run_static(SgsKind::Nd1, &inst, &pv);
        let order = common::start_order(&inst, &sched);
        let replay = sgs::run_static(SgsKind::Nd1, &inst, &order);
        prop_assert_eq!(replay.starts(), sched.starts(), "nd1 via nd1");
    }

    #[test]
    fn insertion_respects_bounds_and_scheduled_starts(
        (inst, pv) in with_order(SETUP_SCALES),
    ) {
        let mut state = PartialState::new(&inst);
        while !state.complete() {
            let eligible = sgs::eligible_set(SgsKind::Serial, &state);
            let op = pv.pick(&eligible);
            let append_start = state.esa(op);
            let (insert_start, _) = state.esi(op);
            prop_assert!(insert_start <= append_start);
            let placed: Vec<(OpId, u32)> = inst
                .iter_ops()
                .filter(|&o| state.is_scheduled(o))
                .map(|o| (o, state.start(o)))
                .collect();
            state.insert(op);
            prop_assert_eq!(state.start(op), insert_start);
            for (o, s) in placed {
                prop_assert_eq!(state.start(o), s, "insertion moved a scheduled start");
            }
            prop_assert_eq!(state.check_feasible(), Ok(()));
        }
    }

    #[test]
    fn serial_never_loses_to_appending_on_the_same_order(
        (inst, pv) in with_order(ALL_SCALES),
    ) {
        let appended = sgs::run_static(SgsKind::SemiActive, &inst, &pv);
        let inserted = sgs::run_static(SgsKind::Serial, &inst, &pv);
        prop_assert!(inserted.makespan() <= appended.makespan());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn zero_setups_collapse_onto_the_classic_schemes(
        (inst, pv) in with_order(ZERO_SCALE),
    ) {
        let reference = common::classic_conflict_set_pass(&inst, &pv);
        let egt1 = sgs::run_static(SgsKind::Egt1, &inst, &pv);
        let egt2 = sgs::run_static(SgsKind::Egt2, &inst, &pv);
        prop_assert_eq!(egt1.starts(), &reference[..]);
        prop_assert_eq!(egt2.starts(), &reference[..]);

        let reference = common::classic_nondelay_pass(&inst, &pv);
        let nd1 = sgs::run_static(SgsKind::Nd1, &inst, &pv);
        let nd2 = sgs::run_static(SgsKind::Nd2, &inst, &pv);
        prop_assert_eq!(nd1.starts(), &reference[..]);
        prop_assert_eq!(nd2.starts(), &reference[..]);
    }

    #[test]
    fn oracle_agrees_with_library_pricing(
        (inst, pv) in with_order(ALL_SCALES),
    ) {
        // Price the library's schedule by longest-path over its own
        // machine sequences; semi-active schedules are exactly the fixed
        // points of that recomputation.
        for kind in SgsKind::ALL {
            let sched = sgs::run_static(kind, &inst, &pv);
            let seqs: Vec<Vec<OpId>> = (0..=inst.machines())
                .map(|m| if m == 0 { Vec::new() } else { sched.sequence(m).to_vec() })
                .collect();
            let starts = common::starts_for_sequences(&inst, &seqs).expect("schedules are acyclic");
            prop_assert_eq!(&starts[..], sched.starts(), "{}", kind);
        }
    }

    #[test]
    fn sampling_is_reproducible(
        inst in instance_strategy(ALL_SCALES),
        seed in any::<u64>(),
        kind in proptest::sample::select(&SgsKind::ALL[..]),
        rule in proptest::sample::select(&RuleKind::ALL[..]),
    ) {
        let cfg = SamplerConfig {
            iterations: 8,
            seed,
            ..SamplerConfig::new(kind, rule)
        };
        let a = sampling::multi_pass(&inst, &cfg);
        let b = sampling::multi_pass(&inst, &cfg);
        prop_assert_eq!(a.trace, b.trace);
        prop_assert_eq!(a.best.starts(), b.best.starts());
        prop_assert_eq!(a.best_iteration, b.best_iteration);
    }
}
