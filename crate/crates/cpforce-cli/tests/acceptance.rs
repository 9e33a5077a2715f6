//! Acceptance check for the command-line layer: output determinism.
//!
//! Run with `cargo test -p cpforce-cli --test acceptance -- --nocapture` to
//! see one [PASS]/[FAIL] line per criterion.

use std::process::Command;

fn verdict(ok: bool) -> &'static str {
    if ok {
        "[PASS]"
    } else {
        "[FAIL]"
    }
}

/// The same sweep scheduled on different worker-pool sizes must emit
/// byte-identical CSV files: worker count affects scheduling only, never
/// values or row order.
#[test]
fn t10_determinism_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for workers in ["1", "7"] {
        let path = dir.path().join(format!("sweep-w{workers}.csv"));
        let output = Command::new(env!("CARGO_BIN_EXE_cpforce"))
            .env("CPFORCE_WORKERS", workers)
            .args([
                "sweep",
                "--atom",
                "H",
                "--wall",
                "ideal-metal",
                "--temp-k",
                "1.0",
                "--a-min-m",
                "1e-6",
                "--a-max-m",
                "1e-5",
                "--points",
                "19",
                "--spacing",
                "log",
                "--mode",
                "full",
                "--out",
                path.to_str().unwrap(),
            ])
            .output()
            .expect("running cpforce");
        assert!(
            output.status.success(),
            "sweep with {workers} workers failed: {}",
            String::from_utf8_lossy(&output.stderr)
        );
        bodies.push(std::fs::read(&path).unwrap());
    }
    let identical = bodies[0] == bodies[1];
    println!(
        "{} 10 determinism: 19-point deviation sweep, CPFORCE_WORKERS=1 vs 7 -> CSV bodies {} ({} bytes)",
        verdict(identical),
        if identical { "byte-identical" } else { "DIFFER" },
        bodies[0].len()
    );
    assert!(identical, "CSV bodies differ between worker counts");

    // The shared body must also be a well-formed ascending sweep.
    let rows = cpforce_cli::emit::parse_csv(std::str::from_utf8(&bodies[0]).unwrap()).unwrap();
    assert_eq!(rows.len(), 19);
    assert!(rows.windows(2).all(|w| w[1].a_m > w[0].a_m));
    assert!(rows.iter().all(|r| r.converged));
}
