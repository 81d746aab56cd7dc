//! Richardson convergence of the ordinary Lax-pair residual.
//!
//! The residual `max |Ldot - [L, M]|` uses centered differences for `Ldot`
//! along a fixed-step trajectory, so halving the step must shrink it by a
//! factor of about four. This is checked for a tensorial Lax operator
//! (`f_rank2` from the principal CCKY tensor of Kerr) and for the Clifford
//! momentum Lax tensor.
//!
//! ```bash
//! cargo run --release --example lax_pair_convergence
//! ```

use covlax::clifford::{build_gamma_basis, clifford_lax_pair_residual, CliffordLaxKind};
use covlax::dynamics::{integrate, IntegratorConfig};
use covlax::lax::{lax_pair_residual, LaxOperator};
use covlax::phasespace::{HamiltonianSpec, PhasePoint};
use covlax::spacetimes;

fn main() {
    let entry = spacetimes::kerr(1.0, 0.9);
    let metric = entry.metric.clone();
    let h = HamiltonianSpec::geodesic(1.0);
    let z0 = PhasePoint::new(
        vec![0.0, 8.0, std::f64::consts::FRAC_PI_3, 0.0],
        vec![-0.95, 0.0, 1.0104302146382733, 2.8],
    );
    let t_end = 10.0;

    let op = LaxOperator::FRank2 {
        h: entry.ccky("principal").expect("principal CCKY"),
    };
    let basis = build_gamma_basis(4, &metric.signature).expect("gamma basis");

    println!("{:<10} {:>16} {:>16} {:>8}", "step", "f_rank2", "clifford", "ratios");
    let mut prev: Option<(f64, f64)> = None;
    for &step in &[0.02, 0.01, 0.005] {
        let traj = integrate(&h, &metric, &z0, t_end, &IntegratorConfig::fixed(step))
            .expect("integration");
        let tensor = lax_pair_residual(&traj, &op, &h, &metric).expect("tensor residual");
        let cliff = clifford_lax_pair_residual(&traj, &CliffordLaxKind::Momentum, &h, &metric, &basis)
            .expect("clifford residual");
        match prev {
            Some((t0, c0)) => println!(
                "{:<10} {:>16.6e} {:>16.6e}   {:>5.2} {:>5.2}",
                step,
                tensor,
                cliff,
                t0 / tensor,
                c0 / cliff
            ),
            None => println!("{:<10} {:>16.6e} {:>16.6e}", step, tensor, cliff),
        }
        prev = Some((tensor, cliff));
    }
}
