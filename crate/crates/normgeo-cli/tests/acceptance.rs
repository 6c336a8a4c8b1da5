//! Acceptance: the selftest battery must pass fully and its report must
//! be byte-identical across runs with the same seed.

use std::process::Command;

#[test]
fn criterion_11_selftest_seed7_deterministic_and_green() {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_normgeo"))
            .args(["selftest", "--seed", "7"])
            .output()
            .unwrap()
    };
    let a = run();
    assert!(
        a.status.success(),
        "selftest failed: {}",
        String::from_utf8_lossy(&a.stdout)
    );
    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["status"], "ok");
    assert_eq!(doc["report"]["total_failed"], 0);

    let b = run();
    assert_eq!(a.stdout, b.stdout, "selftest output differs between runs");
    println!(
        "ACCEPTANCE 11 PASS: `selftest --seed 7` fully green and byte-identical across two runs"
    );
}
