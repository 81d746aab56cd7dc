//! Integrate a bound Kerr geodesic and watch its constants of motion.
//!
//! The initial momentum is put on the mass shell `p^2 = -1` by solving for
//! `p_theta` at the start point given energy `-p_t` and angular momentum
//! `p_phi`. Along the trajectory the Hamiltonian, `p^2`, the Carter-type
//! constant from the Killing-Yano square, and the determinant-identity
//! coefficients are monitored.
//!
//! ```bash
//! cargo run --release --example geodesic_kerr
//! ```

use std::sync::Arc;

use covlax::dynamics::{integrate, monitor, IntegratorConfig, NamedObservable};
use covlax::lax::genkt_coefficients;
use covlax::phasespace::{HamiltonianSpec, PhasePoint};
use covlax::spacetimes;
use covlax::symmetry::killing_quadratic;

/// Mass-shell solve: given `(x, p_t, p_phi)` with `p_r = 0`, find `p_theta`
/// with `p^2 = -1`.
fn bound_orbit(
    entry: &spacetimes::SpacetimeEntry,
    x: Vec<f64>,
    energy: f64,
    angular_momentum: f64,
) -> PhasePoint {
    let ginv = entry.metric.inverse_metric_at(&x).expect("chart point");
    let pt = -energy;
    let pphi = angular_momentum;
    let rest = ginv[(0, 0)] * pt * pt
        + 2.0 * ginv[(0, 3)] * pt * pphi
        + ginv[(3, 3)] * pphi * pphi;
    let ptheta_sq = (-1.0 - rest) / ginv[(2, 2)];
    assert!(
        ptheta_sq >= 0.0,
        "no timelike momentum with E={energy}, L={angular_momentum} here"
    );
    PhasePoint::new(x, vec![pt, 0.0, ptheta_sq.sqrt(), pphi])
}

fn main() {
    let entry = spacetimes::kerr(1.0, 0.9);
    let metric = entry.metric.clone();
    let hamiltonian = HamiltonianSpec::geodesic(1.0);

    let z0 = bound_orbit(
        &entry,
        vec![0.0, 8.0, std::f64::consts::FRAC_PI_3, 0.0],
        0.95,
        2.8,
    );
    println!("initial phase point: x = {:?}", z0.x);
    println!("                     p = {:?}", z0.p);

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
    let elapsed = started.elapsed();
    let r: Vec<f64> = traj.states.iter().map(|z| z.x[1]).collect();
    let th: Vec<f64> = traj.states.iter().map(|z| z.x[2]).collect();
    println!(
        "integrated t = {t_end} in {:.2?}: {} accepted / {} rejected steps",
        elapsed, traj.stats.accepted, traj.stats.rejected
    );
    println!(
        "r in [{:.4}, {:.4}], theta in [{:.4}, {:.4}]",
        r.iter().cloned().fold(f64::INFINITY, f64::min),
        r.iter().cloned().fold(0.0, f64::max),
        th.iter().cloned().fold(f64::INFINITY, f64::min),
        th.iter().cloned().fold(0.0, f64::max),
    );

    let phi = entry.ky("ky").expect("registered KY 2-form");
    let h_ccky = entry.ccky("principal").expect("principal CCKY");

    let m1 = metric.clone();
    let h1 = hamiltonian.clone();
    let m2 = metric.clone();
    let m3 = metric.clone();
    let phi1 = phi.clone();
    let m4 = metric.clone();
    let h4 = h_ccky.clone();
    let m5 = metric.clone();
    let h5 = h_ccky.clone();
    let observables = vec![
        NamedObservable::new("hamiltonian", Arc::new(move |z: &PhasePoint| h1.value(&m1, z))),
        NamedObservable::new("p^2", Arc::new(move |z: &PhasePoint| z.p_squared(&m2))),
        NamedObservable::new(
            "carter (p k_KY p)",
            Arc::new(move |z: &PhasePoint| killing_quadratic(&m3, &phi1, z)),
        ),
        NamedObservable::new(
            "genkt c_1",
            Arc::new(move |z: &PhasePoint| {
                Ok(genkt_coefficients(&h4, &m4, z)?.coefficients[1])
            }),
        ),
        NamedObservable::new(
            "genkt c_2 (vanishes in D=4)",
            Arc::new(move |z: &PhasePoint| {
                Ok(genkt_coefficients(&h5, &m5, z)?.coefficients[2])
            }),
        ),
    ];
    // thin the trajectory for monitoring
    let thin = covlax::dynamics::Trajectory {
        times: traj.times.iter().step_by(20).cloned().collect(),
        states: traj.states.iter().step_by(20).cloned().collect(),
        stats: traj.stats.clone(),
    };
    let report = monitor(&thin, &observables).expect("monitor");
    println!("\n{:<28} {:>22} {:>14} {:>14}", "observable", "initial", "max |dev|", "rel drift");
    for e in &report.entries {
        println!(
            "{:<28} {:>22.15e} {:>14.3e} {:>14.3e}",
            e.name, e.initial, e.max_abs_deviation, e.relative_drift
        );
    }
}
