//! Run every registration gate of the shipped spacetime catalog.
//!
//! Symmetry components are treated as untrusted input: each entry's
//! Killing-Yano and closed-conformal-Killing-Yano candidates must satisfy the
//! defining PDEs at 64 quasi-random chart points, the metric must be
//! compatible with its connection, and the primary Killing vector must equal
//! the divergence of the principal tensor.
//!
//! ```bash
//! cargo run --release --example symmetry_gates
//! ```

use covlax::spacetimes::{catalog, validate_entry};

fn main() {
    let mut all_pass = true;
    for entry in catalog() {
        let report = validate_entry(&entry).expect("gates evaluate");
        println!("{}:", entry.name);
        for check in &report.checks {
            println!(
                "  {} {:<24} residual {:.3e}  (tolerance {:.1e})",
                if check.pass { "PASS" } else { "FAIL" },
                check.name,
                check.residual,
                check.tolerance
            );
            all_pass &= check.pass;
        }
    }
    if !all_pass {
        std::process::exit(1);
    }
}
