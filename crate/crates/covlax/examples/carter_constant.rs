//! The Carter constant three ways.
//!
//! For a Kerr geodesic the quadratic constant of motion shows up as
//! 1. `p_a p_b k^{ab}` with `k` the square of the Killing-Yano 2-form,
//! 2. `-c_1` from the determinant identity of the principal CCKY tensor,
//! 3. `-tr(L^2)/(2 p^2)` for the `phi_rank2` Lax operator.
//!
//! All three agree pointwise and stay constant along the flow.
//!
//! ```bash
//! cargo run --release --example carter_constant
//! ```

use covlax::dynamics::{integrate, IntegratorConfig};
use covlax::lax::{genkt_coefficients, trace_invariants, LaxOperator};
use covlax::phasespace::{HamiltonianSpec, PhasePoint};
use covlax::spacetimes;
use covlax::symmetry::killing_quadratic;

fn main() {
    let entry = spacetimes::kerr(1.0, 0.9);
    let metric = entry.metric.clone();
    let h = HamiltonianSpec::geodesic(1.0);
    let phi = entry.ky("ky").expect("KY 2-form");
    let hf = entry.ccky("principal").expect("principal CCKY");
    let op = LaxOperator::PhiRank2 { phi: phi.clone() };

    let z0 = PhasePoint::new(
        vec![0.0, 8.0, std::f64::consts::FRAC_PI_3, 0.0],
        vec![-0.95, 0.0, 1.0104302146382733, 2.8],
    );
    let traj = integrate(
        &h,
        &metric,
        &z0,
        300.0,
        &IntegratorConfig::adaptive(1e-12, 1e-14),
    )
    .expect("integration");

    println!(
        "{:>8} {:>22} {:>22} {:>22}",
        "t", "p k_KY p", "-c_1 (det identity)", "-tr L^2 / (2 p^2)"
    );
    for (t, z) in traj
        .times
        .iter()
        .zip(&traj.states)
        .step_by(traj.len() / 8)
    {
        let k_pp = killing_quadratic(&metric, &phi, z).expect("killing tensor");
        let c1 = genkt_coefficients(&hf, &metric, z).expect("genkt").coefficients[1];
        let tr2 = trace_invariants(&op, &metric, z, 2).expect("traces")[1];
        let p2 = z.p_squared(&metric).expect("p^2");
        println!(
            "{t:>8.1} {k_pp:>22.15e} {:>22.15e} {:>22.15e}",
            -c1,
            -tr2 / (2.0 * p2)
        );
    }
}
