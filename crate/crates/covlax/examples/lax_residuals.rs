//! Covariant Lax residuals across the operator catalog.
//!
//! Every operator in the catalog is checked against the covariant Lax
//! equation `nabla L / dt = 0` at random Kerr phase points: the residual is
//! the max-abs of the covariant time derivative of `z -> L(z)`, computed with
//! dual-number differentiation (no trajectory needed).
//!
//! ```bash
//! cargo run --release --example lax_residuals
//! ```

use covlax::cli::random_phase_points;
use covlax::lax::{covariant_lax_residual, LaxOperator};
use covlax::phasespace::HamiltonianSpec;
use covlax::spacetimes;

fn main() {
    let entry = spacetimes::kerr(1.0, 0.9);
    let metric = &entry.metric;
    let geodesic = HamiltonianSpec::geodesic(1.0);
    let phi = entry.ky("ky").expect("KY 2-form");
    let hf = entry.ccky("principal").expect("principal CCKY");

    let points = random_phase_points(&entry, 1, 50);
    let ops = vec![
        LaxOperator::MomentumSquare,
        LaxOperator::FRank2 { h: hf.clone() },
        LaxOperator::PhiRank2 { phi: phi.clone() },
        LaxOperator::KyPartialSquare { phi: phi.clone() },
        LaxOperator::FSquare { h: hf.clone() },
    ];
    println!("geodesic Hamiltonian, 50 random phase points:");
    for op in &ops {
        let mut worst: f64 = 0.0;
        for z in &points {
            worst = worst.max(covariant_lax_residual(op, &geodesic, metric, z).expect("residual"));
        }
        println!("  {:<20} max residual {worst:.3e}", op.kind_name());
    }

    // the charged Lax tensor needs the charged Hamiltonian
    let charged_entry = spacetimes::kerr_charged(1.0, 0.9, 0.05);
    let xi = charged_entry.primary_xi.clone().expect("xi");
    let e = charged_entry.coupling.expect("coupling");
    let charged = HamiltonianSpec::charged(1.0, e, xi.clone());
    let op = LaxOperator::ChargedF {
        h: charged_entry.ccky("principal").expect("principal CCKY"),
        coupling: e,
        xi,
    };
    let mut worst: f64 = 0.0;
    let mut mismatched: f64 = 0.0;
    for z in random_phase_points(&charged_entry, 2, 50) {
        worst = worst.max(
            covariant_lax_residual(&op, &charged, &charged_entry.metric, &z).expect("residual"),
        );
        // under the WRONG (geodesic) Hamiltonian the same tensor is not
        // conserved -- the residual is macroscopic
        mismatched = mismatched.max(
            covariant_lax_residual(&op, &geodesic, &charged_entry.metric, &z).expect("residual"),
        );
    }
    println!("\ncharged Hamiltonian (e = {e}):");
    println!("  {:<20} max residual {worst:.3e}", op.kind_name());
    println!("  same tensor under the geodesic flow: {mismatched:.3e} (not a Lax tensor there)");
}
