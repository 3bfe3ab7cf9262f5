mod common;

use common::graph;
use firegraph::game::{replay_state, run, RunOptions};
use firegraph::synth::{synth_second_difference, synth_sphere_poly, GrowthHypothesis, Synthesis, DEFAULT_SCAN_CAP};
use firegraph::{LazyGraph, Outcome};

/// Replays a synthesized strategy and checks that the fire stays strictly
/// inside the protected sphere.
fn assert_sphere_holds(g: &LazyGraph, s: &Synthesis) {
    let radius = s.sphere_radius.unwrap();
    s.strategy.check_budget().unwrap();
    let trace = run(g, &s.x0, &s.strategy, RunOptions::default()).unwrap();
    assert_eq!(
        trace.outcome(),
        Some(Outcome::Contained),
        "{} on {}",
        s.method,
        g.name()
    );
    let ball = g.base_ball(radius).unwrap();
    let sphere = ball.sphere(radius);
    let mut protected: Vec<_> = s.strategy.schedule.iter().flatten().cloned().collect();
    protected.sort();
    let mut expected = sphere.to_vec();
    expected.sort();
    assert_eq!(protected, expected, "schedule must cover exactly S_{radius}");
    let state = replay_state(g, &s.x0, &s.strategy, 2).unwrap();
    for v in state.burning() {
        let d = ball.distance_of(v).expect("fire left the ball");
        assert!(d < radius, "{v} burns at distance {d}");
    }
    assert_eq!(trace.footer.unwrap().burned_total, state.burning().len());
}

#[test]
fn sphere_poly_on_the_square_grid() {
    let g = graph("square");
    for m in 0..=3 {
        let s = synth_sphere_poly(&g, 2, 3, m, GrowthHypothesis::Assume, DEFAULT_SCAN_CAP).unwrap();
        for n in 1..=10 {
            assert_eq!(s.strategy.budget.value(n), 7);
        }
        assert_sphere_holds(&g, &s);
    }
    // the growth bound itself is verified with a larger constant
    let s = synth_sphere_poly(&g, 2, 5, 2, GrowthHypothesis::Check { horizon: 20 }, DEFAULT_SCAN_CAP).unwrap();
    assert_sphere_holds(&g, &s);
}

#[test]
fn sphere_poly_on_the_cubic_lattice() {
    let g = graph("lattice:d=3");
    for m in 0..=3 {
        let s = synth_sphere_poly(&g, 3, 2, m, GrowthHypothesis::Assume, DEFAULT_SCAN_CAP).unwrap();
        for n in 1..=10 {
            assert_eq!(s.strategy.budget.value(n), 14 * n);
        }
        assert_sphere_holds(&g, &s);
    }
}

#[test]
fn second_difference_on_square_and_triangular_grids() {
    for (spec, f) in [("square", 12), ("tri", 18)] {
        let g = graph(spec);
        for n in 0..=3 {
            let s = synth_second_difference(&g, n, DEFAULT_SCAN_CAP).unwrap();
            let m = s.sphere_radius.unwrap();
            assert!(m >= 2 * n && m > n);
            for k in 2..=(m - n) as u64 {
                assert_eq!(s.strategy.budget.value(k), f, "{spec} n={n} k={k}");
            }
            assert_sphere_holds(&g, &s);
        }
    }
}

#[test]
fn second_difference_hypothesis_is_checked() {
    // the line's second difference drops to 0 at index 2
    let err = synth_second_difference(&graph("lattice:d=1"), 1, DEFAULT_SCAN_CAP).unwrap_err();
    assert_eq!(err.kind(), "hypothesis_violated");
    // the cubic tree's keeps growing
    let tree = graph("tree:delta=3");
    assert_sphere_holds(&tree, &synth_second_difference(&tree, 1, DEFAULT_SCAN_CAP).unwrap());
}

#[test]
fn sphere_poly_errors() {
    let g = graph("square");
    assert_eq!(
        synth_sphere_poly(&g, 1, 3, 0, GrowthHypothesis::Assume, 10)
            .unwrap_err()
            .kind(),
        "invalid_argument"
    );
    assert_eq!(
        synth_sphere_poly(&g, 2, 3, 0, GrowthHypothesis::Check { horizon: 10 }, 10)
            .unwrap_err()
            .kind(),
        "hypothesis_violated"
    );
    // exponential growth never satisfies a polynomial sphere bound
    let tree = graph("tree:delta=3");
    assert_eq!(
        synth_sphere_poly(&tree, 2, 3, 3, GrowthHypothesis::Assume, 12)
            .unwrap_err()
            .kind(),
        "scan_cap_exceeded"
    );
}
