use firegraph::certify::{
    certify_divergence_required, certify_expansion_impossible, check, classify_lattice, smoke_test, Certificate,
    Conclusion, LatticeVerdict,
};
use firegraph::families::make;
use firegraph::game::{run, RunOptions};
use firegraph::rational::{frac, int};
use firegraph::{BudgetSeq, FamilySpec, Outcome};

fn json(c: &Certificate) -> String {
    serde_json::to_string(c).unwrap()
}

#[test]
fn lattice_table_boundaries() {
    for d in 1..=7usize {
        for q in 0..=5u32 {
            let v = classify_lattice(d, q, false).unwrap();
            let expected = if q as usize + 2 >= d {
                LatticeVerdict::Containable
            } else {
                LatticeVerdict::Impossible
            };
            assert_eq!(v.verdict, expected, "d={d} q={q}");
        }
    }
    assert!(classify_lattice(0, 0, false).is_err());
}

#[test]
fn containable_witnesses_replay() {
    for (d, q) in [(1, 0), (2, 0), (3, 1), (4, 2)] {
        let v = classify_lattice(d, q, true).unwrap();
        assert_eq!(v.verdict, LatticeVerdict::Containable);
        let w = v.witness.clone().unwrap();
        assert_eq!(w.outcome, Outcome::Contained);
        let g = make(&FamilySpec::Lattice { d }).unwrap();
        assert_eq!(w.family, g.name());
        let t = run(&g, &w.x0, &w.strategy, RunOptions::default()).unwrap();
        assert!(t.is_contained(), "d={d}");
        assert_eq!(t.footer.unwrap().burned_total, w.burned);
        // the witness budget is O(n^q)
        let f = &w.strategy.budget;
        assert!(
            f.value(64) <= f.value(1) * 64u64.pow(d.saturating_sub(2) as u32),
            "d={d}"
        );
        assert!(check(&json(&Certificate::Lattice(v))).unwrap().valid);
    }
}

#[test]
fn impossible_cells_carry_convergence_certificates() {
    for (d, q) in [(3, 0), (4, 1), (5, 2), (4, 0)] {
        let v = classify_lattice(d, q, true).unwrap();
        assert_eq!(v.verdict, LatticeVerdict::Impossible);
        let cert = v.certificate.clone().unwrap();
        assert_eq!(cert.conclusion, Conclusion::Impossible);
        assert!(cert.homogeneity_checked);
        assert!(cert.reports.iter().all(|r| r.holds()));
        let text = json(&Certificate::Lattice(v));
        assert!(check(&text).unwrap().valid, "d={d} q={q}");
    }
}

#[test]
fn expansion_certificate_on_trees() {
    let tree = FamilySpec::Tree { delta: 4 };
    let c = certify_expansion_impossible(&tree, &int(3), &BudgetSeq::Constant(1), 1..=4).unwrap();
    assert!(c.reports.iter().all(|r| r.holds()));
    // Σ 1/3^k = 1/2
    assert_eq!(c.tail_bound, "1/2");
    assert!(c.s_r >= 1);
    let text = json(&Certificate::Expansion(c.clone()));
    let report = check(&text).unwrap();
    assert_eq!(report.kind, "expansion");
    assert!(report.valid, "{:?}", report.mismatches);
    let tampered = text.replace(&format!("\"s_r\":{}", c.s_r), &format!("\"s_r\":{}", c.s_r + 1));
    assert_ne!(tampered, text);
    let report = check(&tampered).unwrap();
    assert!(!report.valid);
    assert!(report.mismatches.iter().any(|m| m == "s_r"));
    // λ above the true ratio fails at some level
    let err = certify_expansion_impossible(&tree, &frac(7, 2), &BudgetSeq::Constant(1), 1..=3).unwrap_err();
    assert_eq!(err.kind(), "refused");
}

#[test]
fn expansion_certificate_on_hyper37() {
    let c = certify_expansion_impossible(&FamilySpec::Hyper37, &int(2), &BudgetSeq::Constant(2), 1..=4).unwrap();
    assert_eq!(c.tail_bound, "2");
    assert!(c.s_r > 2);
    assert!(c.audit.structural_premise.is_some());
    assert!(!c.audit.smoke.contained);
    assert!(check(&json(&Certificate::Expansion(c))).unwrap().valid);
}

#[test]
fn divergence_certificates() {
    let o2 = FamilySpec::Orthant { d: 2 };
    let constant = certify_divergence_required(&o2, &BudgetSeq::Constant(1), 8).unwrap();
    // Σ 1/(n+1) diverges on the quarter plane
    assert_eq!(constant.conclusion, Conclusion::NoObstruction);
    let o3 = FamilySpec::Orthant { d: 3 };
    let v = certify_divergence_required(&o3, &BudgetSeq::Constant(3), 6).unwrap();
    assert_eq!(v.conclusion, Conclusion::Impossible);
    assert_eq!(v.sphere_sizes[..5], [1, 3, 6, 10, 15]);
    let text = json(&Certificate::Divergence(v));
    assert!(check(&text).unwrap().valid);
    let tampered = text.replace("\"conclusion\":\"impossible\"", "\"conclusion\":\"unknown\"");
    assert!(!check(&tampered).unwrap().valid);
    // no homogeneity premise for the full lattice
    let full = certify_divergence_required(&FamilySpec::Lattice { d: 3 }, &BudgetSeq::Constant(1), 4).unwrap();
    assert_eq!(full.conclusion, Conclusion::Unknown);
}

#[test]
fn smoke_test_bookkeeping() {
    let g = make(&FamilySpec::Hyper37).unwrap();
    let audit = smoke_test(&g, 1, &BudgetSeq::Constant(1), &int(2)).unwrap();
    assert!(!audit.contained);
    assert!(audit.lemma_checked);
    assert_eq!(audit.chain_violation, None);
    assert_eq!(audit.lemma_violation, None);
    assert_eq!(audit.t.len(), audit.p.len() + 1);
    assert_eq!(audit.t[0], 7);
    for k in 1..audit.t.len() {
        assert!(2 * audit.t[k - 1] <= audit.t[k] + audit.p[k - 1], "turn {k}");
    }
    assert!(audit.p.iter().all(|&p| p <= 1));
    let line = make(&FamilySpec::Lattice { d: 1 }).unwrap();
    let held = smoke_test(&line, 0, &BudgetSeq::Constant(1), &int(1)).unwrap();
    assert!(held.contained);
}

#[test]
fn malformed_documents() {
    assert!(check("not json").is_err());
    assert!(check("{\"kind\":\"unknown\"}").is_err());
    assert!(check("{\"kind\":\"lattice\",\"d\":3}").is_err());
    let bad_range = json(&Certificate::Divergence(
        certify_divergence_required(&FamilySpec::Orthant { d: 3 }, &BudgetSeq::Constant(1), 4).unwrap(),
    ))
    .replace("\"homogeneity\":{\"from\":0", "\"homogeneity\":{\"from\":1");
    assert!(!check(&bad_range).unwrap().valid);
}
