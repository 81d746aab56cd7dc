//! Charged-particle motion in weakly charged Kerr.
//!
//! The test electromagnetic potential is `qA = e xi` with `xi` the primary
//! Killing vector. Along a charged trajectory the quadratic constants
//! `Ktilde_(j) = (p+e xi) k_(j) (p+e xi)` and `K_(j) = (p-e xi) k_(j) (p-e xi)`
//! and the linear constants `L_(j) = p k_(j) xi` are conserved and satisfy
//! `K_(j) = Ktilde_(j) - 4e L_(j)`.
//!
//! ```bash
//! cargo run --release --example charged_kerr
//! ```

use covlax::dynamics::{integrate, IntegratorConfig};
use covlax::lax::charged_constants;
use covlax::phasespace::{HamiltonianSpec, PhasePoint};
use covlax::spacetimes;

fn main() {
    let entry = spacetimes::kerr_charged(1.0, 0.9, 0.05);
    let metric = entry.metric.clone();
    let e = entry.coupling.expect("coupling");
    let xi = entry.primary_xi.clone().expect("primary Killing vector");
    let h_field = entry.ccky("principal").expect("principal CCKY");
    let hamiltonian = HamiltonianSpec::charged(1.0, e, xi.clone());

    let z0 = PhasePoint::new(
        vec![0.0, 8.0, std::f64::consts::FRAC_PI_3, 0.0],
        vec![-0.95, 0.0, 1.0104302146382733, 2.8],
    );
    let t_end = 1000.0;
    let started = std::time::Instant::now();
    let traj = integrate(
        &hamiltonian,
        &metric,
        &z0,
        t_end,
        &IntegratorConfig::adaptive(1e-12, 1e-14),
    )
    .expect("integration");
    println!(
        "charged run (e = {e}): t = {t_end}, {} steps in {:.2?}",
        traj.stats.accepted,
        started.elapsed()
    );
    let r: Vec<f64> = traj.states.iter().map(|z| z.x[1]).collect();
    println!(
        "r in [{:.4}, {:.4}]",
        r.iter().cloned().fold(f64::INFINITY, f64::min),
        r.iter().cloned().fold(0.0, f64::max),
    );

    let first = charged_constants(&h_field, &xi, e, &metric, &traj.states[0]).expect("constants");
    println!("\nj    Ktilde_(j)              K_(j)                   L_(j)");
    for j in 0..first.ktilde.len() {
        println!(
            "{j}    {:+.15e}  {:+.15e}  {:+.15e}",
            first.ktilde[j], first.k[j], first.l[j]
        );
    }

    let mut drift = vec![0.0f64; 3 * first.ktilde.len()];
    let mut identity_residual: f64 = 0.0;
    for z in traj.states.iter().step_by(20) {
        let c = charged_constants(&h_field, &xi, e, &metric, z).expect("constants");
        for j in 0..c.ktilde.len() {
            drift[3 * j] = drift[3 * j].max((c.ktilde[j] - first.ktilde[j]).abs());
            drift[3 * j + 1] = drift[3 * j + 1].max((c.k[j] - first.k[j]).abs());
            drift[3 * j + 2] = drift[3 * j + 2].max((c.l[j] - first.l[j]).abs());
            identity_residual =
                identity_residual.max((c.k[j] - (c.ktilde[j] - 4.0 * e * c.l[j])).abs());
        }
    }
    println!("\nmax drifts over the run:");
    for j in 0..first.ktilde.len() {
        println!(
            "j = {j}: Ktilde {:.3e}   K {:.3e}   L {:.3e}",
            drift[3 * j],
            drift[3 * j + 1],
            drift[3 * j + 2]
        );
    }
    println!("\nmax |K - (Ktilde - 4e L)| pointwise: {identity_residual:.3e}");
}
