//! Acceptance gate: one test per criterion, each printing PASS/FAIL lines at the stated tolerance.
//! Run with `cargo test -p lockstep --test acceptance -- --nocapture --test-threads=1`.

use lockstep::painleve::PIISolution;
use lockstep::verify::{self, Check, VerifyOptions};
use lockstep::PrecisionPolicy;
use std::sync::OnceLock;

fn solution() -> &'static PIISolution {
    static SOL: OnceLock<PIISolution> = OnceLock::new();
    SOL.get_or_init(|| verify::hm_solution(&PrecisionPolicy::default()).expect("Hastings-McLeod solve"))
}

fn gate(criterion: &str, checks: Vec<Check>) {
    for c in &checks {
        println!("{}", c.line());
    }
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed).map(|c| format!("[{}] {}", c.id, c.name)).collect();
    println!("criterion {criterion}: {}", if failed.is_empty() { "PASS" } else { "FAIL" });
    assert!(failed.is_empty(), "criterion {criterion} failed: {failed:?}");
}

#[test]
fn criterion_01_counting_exactness() {
    gate("1", verify::counting_exactness().unwrap());
}

#[test]
fn criterion_02_monotonicity() {
    gate("2", verify::monotonicity().unwrap());
}

#[test]
fn criterion_03_route_equality() {
    gate("3", verify::route_equality(&PrecisionPolicy::default()).unwrap());
}

#[test]
fn criterion_04_direct_sum() {
    gate("4", verify::direct_sum_oracle(&PrecisionPolicy::default()).unwrap());
}

#[test]
fn criterion_05_painleve() {
    gate("5", verify::painleve_checks(solution()).unwrap());
}

#[test]
fn criterion_06_regimes_i_and_v() {
    gate("6", verify::regime_v(&PrecisionPolicy::default()).unwrap());
}

#[test]
fn criterion_07_regime_iii() {
    gate("7", verify::regime_iii(&PrecisionPolicy::default(), solution()).unwrap());
}

#[test]
fn criterion_08_path_count_asymptotics() {
    gate("8", verify::path_count_checks().unwrap());
}

#[test]
fn criterion_09_convergence() {
    let opts = VerifyOptions { seed: 2024, ..VerifyOptions::default() };
    gate("9", verify::convergence(&opts, solution()).unwrap());
}

#[test]
fn criterion_10_equilibrium_measure() {
    gate("10", verify::equilibrium_checks().unwrap());
}
