//! Acceptance suite: every criterion runs at its stated tolerance and prints
//! one pass/fail line (visible with `cargo test --test acceptance --
//! --nocapture`). A criterion fails the test if any of its checks fail.

use decaylab::verify::{CheckResult, Suite};

fn checks_for(prefix: &str, pools: &[&[CheckResult]]) -> Vec<CheckResult> {
    let mut found: Vec<CheckResult> = Vec::new();
    for pool in pools {
        for c in *pool {
            if c.name.starts_with(prefix) {
                found.push(c.clone());
            }
        }
    }
    assert!(
        !found.is_empty(),
        "no checks found for criterion prefix {prefix}"
    );
    found
}

fn assert_criterion(num: usize, label: &str, checks: &[CheckResult]) {
    let failed: Vec<&CheckResult> = checks.iter().filter(|c| !c.passed).collect();
    if failed.is_empty() {
        let worst = checks
            .iter()
            .map(|c| format!("{}={:.3e}", c.name, c.measured))
            .collect::<Vec<_>>()
            .join(", ");
        println!("criterion {num} PASS: {label} [{worst}]");
    } else {
        for c in &failed {
            println!("criterion {num} FAIL: {}", c.report_line());
        }
        panic!("criterion {num} ({label}) failed {} checks", failed.len());
    }
}

#[test]
fn criterion_1_kummer_identities() {
    let kummer = Suite::Kummer.run().expect("kummer suite");
    assert_criterion(
        1,
        "phi identities, ODE residual, recurrence, asymptotic ratios",
        &checks_for("c1_", &[&kummer]),
    );
}

#[test]
fn criterion_2_weight_identities() {
    let weights = Suite::Weights.run().expect("weights suite");
    assert_criterion(
        2,
        "time-derivative identity, scaling, heat-identity order, initial trace",
        &checks_for("c2_", &[&weights]),
    );
}

#[test]
fn criterion_3_solver_correctness() {
    let energy = Suite::Energy.run().expect("energy suite");
    assert_criterion(
        3,
        "energy drift/monotonicity, self-convergence, finite propagation, operator symmetry",
        &checks_for("c3_", &[&energy]),
    );
    assert_criterion(
        4,
        "weighted boundedness and unweighted decay rate",
        &checks_for("c4_", &[&energy]),
    );
    assert_criterion(
        8,
        "monotone heat functional",
        &checks_for("c8_", &[&energy]),
    );
    assert_criterion(
        9,
        "slowly decaying data cutoff stability",
        &checks_for("c9_", &[&energy]),
    );
    for c in energy.iter().filter(|c| c.name.starts_with("x_")) {
        println!("{}", c.report_line());
        assert!(c.passed, "module invariant failed: {}", c.report_line());
    }
}

#[test]
fn criterion_5_and_6_diffusion_phenomena() {
    let diffusion = Suite::Diffusion.run().expect("diffusion suite");
    assert_criterion(
        5,
        "normalized diffusion gap bounded and decaying",
        &checks_for("c5_", &[&diffusion]),
    );
    assert_criterion(
        6,
        "heat orbit decay rate",
        &checks_for("c6_", &[&diffusion]),
    );
    for c in diffusion.iter().filter(|c| c.name.starts_with("x_")) {
        println!("{}", c.report_line());
        assert!(c.passed, "module invariant failed: {}", c.report_line());
    }
}

#[test]
fn criterion_7_hardy_corpus() {
    let hardy = Suite::Hardy.run().expect("hardy suite");
    assert_criterion(
        7,
        "both Hardy inequalities on 100 random smooth fields",
        &checks_for("c7_", &[&hardy]),
    );
}

#[test]
fn module_invariant_extras() {
    // channel agreement, terminating polynomial, envelopes, weight
    // equivalence, psi monotonicity, order-1 energies, L-inf smoothing
    let kummer = Suite::Kummer.run().expect("kummer suite");
    let weights = Suite::Weights.run().expect("weights suite");
    let extras: Vec<CheckResult> = kummer
        .iter()
        .chain(weights.iter())
        .filter(|c| c.name.starts_with("x_"))
        .cloned()
        .collect();
    assert!(!extras.is_empty());
    for c in &extras {
        println!("{}", c.report_line());
        assert!(c.passed, "module invariant failed: {}", c.report_line());
    }
}
