mod common;

use common::rel_close;
use gmcp_core::labeling::DEFAULT_OPTIMALITY_TOL;
use gmcp_core::netgen::GenConfig;
use gmcp_core::oracle::{brute_force, check_feasible, for_each_st_path, DEFAULT_NODE_CAP};
use gmcp_core::{
    check_optimality, deliverable_flow, generate, label_array, label_heap, reconstruct_path,
    solve_alg1, solve_alg1_traced, Algorithm, Instance, LabelOptions, Path, Solution, Status,
};
use proptest::prelude::*;

fn check_against_oracle(inst: &Instance) -> Result<(), TestCaseError> {
    let oracle = brute_force(inst).unwrap();
    for alg in Algorithm::ALL {
        let sol = alg.solve(inst).unwrap();
        prop_assert_eq!(sol.status, oracle.status, "{}", alg);
        prop_assert!(
            rel_close(sol.value, oracle.value, 1e-9),
            "{}: {} vs {}",
            alg,
            sol.value,
            oracle.value
        );
        if sol.is_optimal() {
            let flow = deliverable_flow(inst, &sol.path).unwrap();
            prop_assert_eq!(flow.delivered.get(), sol.value);
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn solvers_match_brute_force(inst in common::instance(7, 18)) {
        check_against_oracle(&inst)?;
    }

    #[test]
    fn alg1_rounds_are_sound(inst in common::instance(7, 18)) {
        let (sol, trace) = solve_alg1_traced(&inst).unwrap();
        let best = brute_force(&inst).unwrap().value;
        prop_assert!(sol.iterations <= inst.arc_count());
        prop_assert_eq!(sol.iterations, trace.rounds.len());
        for r in &trace.rounds {
            prop_assert!(r.actual <= r.assumed || rel_close(r.actual.get(), r.assumed.get(), 1e-12));
            prop_assert!(r.actual.get() <= best || rel_close(r.actual.get(), best, 1e-12));
        }
        if sol.is_optimal() {
            prop_assert_eq!(trace.rounds.last().unwrap().saturated_index, 1);
        }
    }

    #[test]
    fn labels_satisfy_optimality_conditions(inst in common::instance(9, 30)) {
        let labels = label_array(&inst, LabelOptions::default()).unwrap();
        prop_assert!(check_optimality(&inst, &labels, DEFAULT_OPTIMALITY_TOL).is_empty());
    }

    #[test]
    fn reconstructed_path_delivers_sink_label(inst in common::instance(9, 30)) {
        let labels = label_heap(&inst, LabelOptions::default()).unwrap();
        let d_t = labels.label(inst.sink).get();
        match reconstruct_path(&labels, inst.sink) {
            Ok(path) => prop_assert_eq!(deliverable_flow(&inst, &path).unwrap().delivered.get(), d_t),
            Err(_) => prop_assert_eq!(d_t, 0.0),
        }
    }

    #[test]
    fn early_exit_keeps_the_sink_label(inst in common::instance(9, 30)) {
        let full = label_array(&inst, LabelOptions::default()).unwrap();
        let early = label_array(&inst, LabelOptions { early_exit: true }).unwrap();
        prop_assert_eq!(full.label(inst.sink), early.label(inst.sink));
    }

    #[test]
    fn every_simple_path_has_a_feasible_certificate(inst in common::instance(6, 12)) {
        let mut failures = Vec::new();
        for_each_st_path(&inst, DEFAULT_NODE_CAP, |arcs| {
            let path = Path::new(arcs.to_vec());
            let value = deliverable_flow(&inst, &path).unwrap().delivered.get();
            let sol = Solution { path, value, iterations: 0, status: Status::Optimal };
            let report = check_feasible(&inst, &sol).unwrap();
            if !report.is_feasible() {
                failures.push(report.to_string());
            }
        })
        .unwrap();
        prop_assert!(failures.is_empty(), "{}", failures.join("\n"));
    }

    #[test]
    fn scaling_capacities_scales_the_value(inst in common::instance(7, 18), c in prop::sample::select(vec![0.5, 3.0, 10.0])) {
        let scaled = inst.with_graph(inst.graph.scale_capacities(c));
        for alg in Algorithm::ALL {
            let a = alg.solve(&inst).unwrap().value;
            let b = alg.solve(&scaled).unwrap().value;
            prop_assert!(rel_close(b, c * a, 1e-12), "{}: {} vs {}", alg, b, c * a);
        }
    }
}

#[test]
fn array_and_heap_agree_on_generated_instances() {
    for seed in 0..1000u64 {
        let n = 3 + (seed % 40) as usize;
        let cfg = GenConfig::new(n, 1 + (seed % 4) as usize, (seed % 3) as usize, 0.3, seed);
        let inst = generate(&cfg).unwrap();
        let a = label_array(&inst, LabelOptions::default()).unwrap();
        let h = label_heap(&inst, LabelOptions::default()).unwrap();
        assert_eq!(a.order, h.order, "seed {seed}");
        assert_eq!(a.d, h.d, "seed {seed}");
        assert_eq!(a.pred, h.pred, "seed {seed}");
        assert_eq!(
            Algorithm::Alg2Array.solve(&inst).unwrap(),
            Algorithm::Alg2Heap.solve(&inst).unwrap()
        );
    }
}

#[test]
fn generated_instances_match_brute_force() {
    for seed in 0..300u64 {
        let n = 3 + (seed % 7) as usize;
        let inst = generate(&GenConfig::new(n, 2, 1, 0.4, seed)).unwrap();
        check_against_oracle(&inst).unwrap();
    }
}

#[test]
fn two_round_chain() {
    // The first round saturates the second arc; the second round takes the
    // replacement arc from the source.
    let inst = common::build(3, &[(1, 2, 100.0, 1.0), (2, 3, 1.0, 1.0)]);
    let sol = solve_alg1(&inst).unwrap();
    assert_eq!(sol.iterations, 2);
    assert_eq!(sol.value, 1.0);
}
