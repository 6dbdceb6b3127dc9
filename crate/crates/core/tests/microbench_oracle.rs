use hybridcolor::microbench::{run_push_bench, BenchConfig, Variant};
use hybridcolor::{generate, Executor};

/// Independent model of the fixed-batch schedule: iteration `t` removes ids
/// `t*batch .. min(n, (t+1)*batch)`.
fn expected_sets(n: usize, batch: usize) -> Vec<Vec<u32>> {
    (0..n.div_ceil(batch))
        .map(|t| (t * batch..n.min((t + 1) * batch)).map(|u| u as u32).collect())
        .collect()
}

#[test]
fn both_variants_follow_the_model_schedule() {
    let exec = Executor::new(4, 128).unwrap();
    for (n, batch) in [(1000, 1000), (2500, 1000), (2500, 333), (777, 1), (5, 1000)] {
        let g = generate::random_edges(n, 2 * n, n as u64);
        let expected = expected_sets(n, batch);
        for variant in [Variant::PushWl, Variant::PushNowl] {
            let cfg = BenchConfig {
                batch_size: batch,
                variant,
                repetitions: 1,
                record_sets: true,
            };
            let series = run_push_bench(&exec, &g, &cfg).unwrap();
            assert_eq!(series.per_iteration.len(), n.div_ceil(batch));
            assert_eq!(series.deactivated_sets.as_ref().unwrap(), &expected);
            for (t, p) in series.per_iteration.iter().enumerate() {
                assert_eq!(p.iteration, t);
                assert_eq!(p.active_before, n - t * batch);
                // worklist after t+1 iterations
                assert_eq!(p.active_before - p.deactivated.count, n.saturating_sub((t + 1) * batch));
            }
        }
    }
}

#[test]
fn timing_statistics_are_ordered() {
    let exec = Executor::new(2, 256).unwrap();
    let g = generate::random_edges(3000, 1, 1);
    let cfg = BenchConfig {
        batch_size: 500,
        variant: Variant::PushNowl,
        repetitions: 4,
        record_sets: false,
    };
    let s = run_push_bench(&exec, &g, &cfg).unwrap();
    assert!(s.deactivated_sets.is_none());
    for p in &s.per_iteration {
        assert!(p.micros_min <= p.micros_mean + 1e-9);
        assert!(p.micros_std >= 0.0);
    }
}
