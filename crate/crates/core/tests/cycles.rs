//! Mean cycle counts of sparse random `(a,2)` graphs against their limits.

use qxor::gen::{clauses_for_density, derive_seed, generate, GenConfig};
use qxor::graph::analyze_graph;
use qxor::theory::{lambda_inf, lambda_m1};

const N: usize = 10_000;
const SAMPLES: u64 = 2000;

/// Mean (cycles, bad cycles) over `SAMPLES` instances.
fn means(c: f64, m: usize, seed: u64) -> (f64, f64) {
    let mut cycles = 0;
    let mut bad = 0;
    for i in 0..SAMPLES {
        let inst = generate(&GenConfig {
            m,
            n: N,
            clauses: clauses_for_density(c, N),
            a: 1,
            e: 2,
            seed: derive_seed(seed, "cycles", i),
        })
        .unwrap();
        let r = analyze_graph(&inst).unwrap();
        cycles += r.cycles;
        bad += r.bad_cycles;
    }
    (cycles as f64 / SAMPLES as f64, bad as f64 / SAMPLES as f64)
}

/// Counts are close to Poisson, so four standard errors of the mean plus a
/// small finite-size allowance.
fn tolerance(lambda: f64) -> f64 {
    4.0 * (lambda / SAMPLES as f64).sqrt() + 0.01
}

#[test]
fn cycle_count_matches_limit() {
    for (k, c) in [0.2, 0.3, 0.4].into_iter().enumerate() {
        let (cycles, _) = means(c, 1, k as u64);
        let limit = lambda_inf(c).unwrap();
        assert!((cycles - limit).abs() <= tolerance(limit), "c={c}: {cycles} vs {limit}");
    }
}

#[test]
fn bad_cycle_count_matches_series() {
    for (m, c) in [(1, 0.3), (2, 0.35), (4, 0.4)] {
        let (_, bad) = means(c, m, 100 + m as u64);
        let limit = lambda_m1(c, m as u32, 1e-10).unwrap();
        assert!((bad - limit).abs() <= tolerance(limit), "m={m} c={c}: {bad} vs {limit}");
    }
}
