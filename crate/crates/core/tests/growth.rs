mod common;

use common::{binomial, forward_lists, graph, subset_expansion};
use firegraph::expansion::{check_expansion_levels, check_homogeneous, sphere_pairs};
use firegraph::growth::{degree_estimate, faulhaber, profile, DegreeEstimate};
use firegraph::rational::{frac, int};
use firegraph::series::rearrange_check;
use num::{BigInt, BigRational, BigUint, One, Zero};
use proptest::prelude::*;

/// `B_0 .. B_m` with `B_1 = +1/2`.
fn bernoulli_plus(m: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(m + 1);
    for k in 0..=m {
        if k == 0 {
            b.push(BigRational::one());
            continue;
        }
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += int(binomial(k as u64 + 1, j as u64)) * bj;
        }
        b.push(-acc / int(k as u64 + 1));
    }
    if m >= 1 {
        b[1] = frac(1, 2);
    }
    b
}

#[test]
fn faulhaber_matches_bernoulli_closed_form() {
    let b = bernoulli_plus(12);
    for p in 0..=10usize {
        for n in 0..=40u64 {
            let mut closed = BigRational::zero();
            for (j, bj) in b.iter().enumerate().take(p + 1) {
                closed += int(binomial(p as u64 + 1, j as u64)) * bj * int(n).pow((p + 1 - j) as i32);
            }
            closed /= int(p as u64 + 1);
            assert!(closed.is_integer());
            let direct = faulhaber(n, p as u32 + 1);
            assert_eq!(BigInt::from(direct), closed.to_integer(), "p={p} n={n}");
        }
    }
    assert_eq!(faulhaber(100, 2), BigUint::from(5050u32));
}

#[test]
fn flow_agrees_with_subset_enumeration() {
    let specs = [
        "square",
        "tri",
        "hex",
        "strong",
        "lattice:d=3",
        "orthant:d=2",
        "orthant:d=3",
        "orthant:d=4",
        "tree:delta=3",
        "tree:delta=4",
        "hyper37",
        "subexp",
        "power:k=2(hex)",
    ];
    let lambdas = [int(1), frac(4, 3), frac(3, 2), int(2), frac(5, 2), int(3), int(4)];
    let mut compared = 0;
    for spec in specs {
        let g = graph(spec);
        let sizes = profile(&g, 8).unwrap().sphere_sizes;
        let levels: Vec<usize> = (0..8).take_while(|&n| sizes[n] <= 14).collect();
        for &n in &levels {
            let pair = sphere_pairs(&g, n..=n).unwrap().remove(0);
            let forward = forward_lists(&g, n);
            let (ratio, _) = pair.min_ratio().unwrap();
            let (_, (star, size)) = subset_expansion(&forward, 1, 1);
            assert_eq!(ratio, frac(star as i64, size as i64), "{spec} level {n}");
            for lambda in &lambdas {
                let (p, q) = (lambda.numer().try_into().unwrap(), lambda.denom().try_into().unwrap());
                let (holds, _) = subset_expansion(&forward, p, q);
                let report = pair.check(lambda).unwrap();
                assert_eq!(report.holds(), holds, "{spec} level {n} lambda {lambda}");
                if let Some(bad) = &report.violating_set {
                    assert!(!bad.is_empty());
                }
                compared += 1;
            }
        }
    }
    assert!(compared >= 150, "only {compared} comparisons");
}

#[test]
fn hyper37_expands_by_two() {
    let g = graph("hyper37");
    let reports = check_expansion_levels(&g, 1..=5, &int(2)).unwrap();
    assert_eq!(reports.len(), 5);
    for r in &reports {
        assert!(r.holds(), "level {}: min ratio {}", r.level, r.min_ratio);
    }
    // the whole sphere is the tightest set: s_{n+1}/s_n = F_{2n+2}/F_{2n}
    let ratios: Vec<&str> = reports.iter().map(|r| r.min_ratio.as_str()).collect();
    assert_eq!(ratios, ["3", "8/3", "21/8", "55/21", "144/55"]);
    let three = check_expansion_levels(&g, 2..=5, &int(3)).unwrap();
    assert!(three.iter().all(|r| !r.holds()));
}

#[test]
fn regular_trees_expand_by_their_branching() {
    for delta in 2..=4usize {
        let g = graph(&format!("tree:delta={}", delta + 1));
        let reports = check_expansion_levels(&g, 1..=6, &int(delta as u64)).unwrap();
        for r in &reports {
            assert!(r.holds(), "delta={delta} level {}", r.level);
            assert_eq!(r.min_ratio, delta.to_string());
        }
        let over = check_expansion_levels(&g, 1..=6, &frac(2 * delta as i64 + 1, 2)).unwrap();
        assert!(over.iter().all(|r| !r.holds()));
    }
}

#[test]
fn orthants_have_homogeneous_growth() {
    for (spec, top) in [("orthant:d=2", 8), ("orthant:d=3", 6)] {
        let reports = check_homogeneous(&graph(spec), 0..=top).unwrap();
        assert_eq!(reports.len(), top + 1);
        for r in &reports {
            assert!(
                r.holds(),
                "{spec} level {}: min ratio {} below {}",
                r.level,
                r.min_ratio,
                r.lambda
            );
        }
    }
    // subexp spheres shrink to one vertex at every zero level
    let subexp = check_homogeneous(&graph("subexp"), 0..=6).unwrap();
    assert!(!subexp[1].holds());
}

#[test]
fn degree_estimates_by_family() {
    let est = |spec: &str, n| degree_estimate(&profile(&graph(spec), n).unwrap());
    for d in 2..=4u32 {
        assert!(matches!(est(&format!("orthant:d={d}"), 30), DegreeEstimate::Polynomial { d: e, .. } if e == d));
    }
    assert_eq!(est("hyper37", 12), DegreeEstimate::Exponential);
    assert!(matches!(est("tri", 12), DegreeEstimate::Polynomial { d: 2, .. }));
}

fn prefix_dominant() -> impl Strategy<Value = (Vec<u64>, Vec<u64>, Vec<u64>)> {
    (1usize..24).prop_flat_map(|n| {
        (
            prop::collection::vec(0u64..50, n),
            prop::collection::vec(0u64..60, n),
            prop::collection::vec(0u64..5, n),
            1u64..10,
        )
            .prop_map(|(f, raw, steps, s0)| {
                let (mut sf, mut sp) = (0u64, 0u64);
                let mut p = Vec::with_capacity(f.len());
                for (fk, rk) in f.iter().zip(&raw) {
                    sf += fk;
                    let pk = (*rk).min(sf - sp);
                    sp += pk;
                    p.push(pk);
                }
                let mut s = Vec::with_capacity(steps.len());
                let mut acc = s0;
                for st in steps {
                    s.push(acc);
                    acc += st * acc / 2 + st;
                }
                (f, p, s)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn rearranged_sums_never_violate((f, p, s) in prefix_dominant()) {
        prop_assert_eq!(rearrange_check(&f, &p, &s).unwrap(), None);
    }
}

#[test]
fn rearrange_rejects_bad_inputs() {
    assert!(rearrange_check(&[1, 1], &[2, 0], &[1, 2]).is_err());
    assert!(rearrange_check(&[1, 1], &[1, 1], &[2, 1]).is_err());
    assert!(rearrange_check(&[1], &[1], &[0]).is_err());
    assert!(rearrange_check(&[1, 1], &[1], &[1, 1]).is_err());
    // a late p is allowed once f has banked enough
    assert_eq!(rearrange_check(&[2, 0], &[1, 1], &[1, 1]).unwrap(), None);
}
