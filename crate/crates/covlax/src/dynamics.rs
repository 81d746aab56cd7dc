//! Hamiltonian trajectory integration with invariant monitoring.
//!
//! The adaptive path is a Dormand-Prince 5(4) embedded pair with the standard
//! order-4 dense interpolant; the fixed-step path is classical RK4 and exists
//! for convergence-order tests. The integrator is deliberately not
//! symplectic: conservation residuals are the product here, so error-controlled
//! accuracy wins over long-time symplecticity.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::manifold::MetricSpec;
use crate::phasespace::{HamiltonianSpec, PhasePoint};

/// Integration mode.
#[derive(Clone, Debug)]
pub enum StepMode {
    Fixed { step: f64 },
    Adaptive { rel_tol: f64, abs_tol: f64 },
}

#[derive(Clone, Debug)]
pub struct IntegratorConfig {
    pub mode: StepMode,
    pub max_steps: usize,
    /// Number of uniformly spaced output samples. In adaptive mode the dense
    /// interpolant fills the grid; in fixed mode every step is a sample and
    /// this field is ignored.
    pub dense_grid: Option<usize>,
}

impl IntegratorConfig {
    pub fn adaptive(rel_tol: f64, abs_tol: f64) -> Self {
        assert!(rel_tol > 0.0 && abs_tol > 0.0);
        IntegratorConfig {
            mode: StepMode::Adaptive { rel_tol, abs_tol },
            max_steps: 50_000_000,
            dense_grid: None,
        }
    }

    pub fn fixed(step: f64) -> Self {
        assert!(step > 0.0);
        IntegratorConfig {
            mode: StepMode::Fixed { step },
            max_steps: 50_000_000,
            dense_grid: None,
        }
    }

    pub fn with_dense_grid(mut self, samples: usize) -> Self {
        self.dense_grid = Some(samples);
        self
    }
}

#[derive(Clone, Debug, Default)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub max_error_estimate: f64,
}

/// Phase-space trajectory on a strictly increasing time grid.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<PhasePoint>,
    pub stats: StepStats,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> &PhasePoint {
        self.states.last().expect("non-empty trajectory")
    }

    /// Uniform spacing of the time grid, if it is uniform to 1e-9 relative.
    pub fn uniform_step(&self) -> Option<f64> {
        if self.times.len() < 2 {
            return None;
        }
        let h = self.times[1] - self.times[0];
        for w in self.times.windows(2) {
            if ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs() {
                return None;
            }
        }
        Some(h)
    }
}

/// Canonical equations `dx^a/dt = dH/dp_a`, `dp_a/dt = -dH/dx^a`
/// (plain coordinate partials via dual seeds).
pub fn hamilton_rhs(
    h: &HamiltonianSpec,
    metric: &MetricSpec,
    z: &PhasePoint,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let xdot = h.grad_p(metric, z)?;
    let pdot: Vec<f64> = h.grad_x(metric, z)?.into_iter().map(|v| -v).collect();
    Ok((xdot, pdot))
}

fn rhs_flat(h: &HamiltonianSpec, metric: &MetricSpec, y: &[f64]) -> Result<Vec<f64>> {
    let d = y.len() / 2;
    let z = PhasePoint::new(y[..d].to_vec(), y[d..].to_vec());
    metric.check_chart(&z.x)?;
    let (xdot, pdot) = hamilton_rhs(h, metric, &z)?;
    let mut out = xdot;
    out.extend(pdot);
    Ok(out)
}

/// Integrate from `z0` over `[0, t_end]`.
///
/// Leaving the chart (predicate failure, which includes the horizon guards of
/// the catalog charts) aborts with [`Error::ChartExit`] carrying the partial
/// trajectory; running out of steps gives [`Error::MaxSteps`].
pub fn integrate(
    h: &HamiltonianSpec,
    metric: &MetricSpec,
    z0: &PhasePoint,
    t_end: f64,
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    assert!(t_end > 0.0, "t_end must be positive");
    metric.check_chart(&z0.x)?;
    match config.mode {
        StepMode::Fixed { step } => integrate_rk4(h, metric, z0, t_end, step, config),
        StepMode::Adaptive { rel_tol, abs_tol } => {
            integrate_dopri5(h, metric, z0, t_end, rel_tol, abs_tol, config)
        }
    }
}

fn partial_traj(times: Vec<f64>, states: Vec<PhasePoint>, stats: StepStats) -> Box<Trajectory> {
    Box::new(Trajectory {
        times,
        states,
        stats,
    })
}

fn integrate_rk4(
    h: &HamiltonianSpec,
    metric: &MetricSpec,
    z0: &PhasePoint,
    t_end: f64,
    step: f64,
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    let d = z0.dim();
    let n_steps = (t_end / step).round() as usize;
    if n_steps > config.max_steps {
        return Err(Error::MaxSteps {
            t: 0.0,
            max_steps: config.max_steps,
            partial: partial_traj(vec![0.0], vec![z0.clone()], StepStats::default()),
        });
    }
    let mut y: Vec<f64> = z0.x.iter().chain(&z0.p).copied().collect();
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity(n_steps + 1);
    times.push(0.0);
    states.push(z0.clone());
    let mut stats = StepStats::default();
    for i in 0..n_steps {
        let t = i as f64 * step;
        let guard = |e: Error, ts: &Vec<f64>, ss: &Vec<PhasePoint>, st: &StepStats| match e {
            Error::OutsideChart { what } => Error::ChartExit {
                t,
                reason: what,
                partial: partial_traj(ts.clone(), ss.clone(), st.clone()),
            },
            other => other,
        };
        let k1 = rhs_flat(h, metric, &y).map_err(|e| guard(e, &times, &states, &stats))?;
        let y2: Vec<f64> = y.iter().zip(&k1).map(|(a, b)| a + 0.5 * step * b).collect();
        let k2 = rhs_flat(h, metric, &y2).map_err(|e| guard(e, &times, &states, &stats))?;
        let y3: Vec<f64> = y.iter().zip(&k2).map(|(a, b)| a + 0.5 * step * b).collect();
        let k3 = rhs_flat(h, metric, &y3).map_err(|e| guard(e, &times, &states, &stats))?;
        let y4: Vec<f64> = y.iter().zip(&k3).map(|(a, b)| a + step * b).collect();
        let k4 = rhs_flat(h, metric, &y4).map_err(|e| guard(e, &times, &states, &stats))?;
        for j in 0..2 * d {
            y[j] += step / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        let z = PhasePoint::new(y[..d].to_vec(), y[d..].to_vec());
        if let Err(Error::OutsideChart { what }) = metric.check_chart(&z.x) {
            return Err(Error::ChartExit {
                t: t + step,
                reason: what,
                partial: partial_traj(times, states, stats),
            });
        }
        stats.accepted += 1;
        times.push((i + 1) as f64 * step);
        states.push(z);
    }
    Ok(Trajectory {
        times,
        states,
        stats,
    })
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// dense-output coefficients (order 4 interpolant)
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

struct DenseSegment {
    t0: f64,
    h: f64,
    rcont: [Vec<f64>; 5],
}

impl DenseSegment {
    fn eval(&self, t: f64) -> Vec<f64> {
        let theta = (t - self.t0) / self.h;
        let th1 = 1.0 - theta;
        (0..self.rcont[0].len())
            .map(|i| {
                self.rcont[0][i]
                    + theta
                        * (self.rcont[1][i]
                            + th1
                                * (self.rcont[2][i]
                                    + theta * (self.rcont[3][i] + th1 * self.rcont[4][i])))
            })
            .collect()
    }
}

#[allow(clippy::too_many_arguments)]
fn integrate_dopri5(
    h_spec: &HamiltonianSpec,
    metric: &MetricSpec,
    z0: &PhasePoint,
    t_end: f64,
    rel_tol: f64,
    abs_tol: f64,
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    let d = z0.dim();
    let n = 2 * d;
    let mut y: Vec<f64> = z0.x.iter().chain(&z0.p).copied().collect();
    let mut t = 0.0;
    let mut times = vec![0.0];
    let mut states = vec![z0.clone()];
    let mut stats = StepStats::default();

    // dense grid bookkeeping
    let grid: Option<Vec<f64>> = config.dense_grid.map(|m| {
        (0..=m).map(|i| t_end * i as f64 / m as f64).collect()
    });
    let mut grid_pos = 1usize; // grid[0] == 0 is already recorded
    let mut dense_times = vec![0.0];
    let mut dense_states = vec![z0.clone()];

    let mut f0 = rhs_flat(h_spec, metric, &y)?;

    // initial step: small fraction of the tolerance-scaled state
    let mut h = {
        let sc = |i: usize| abs_tol + rel_tol * y[i].abs();
        let d0 = (0..n).map(|i| (y[i] / sc(i)).powi(2)).sum::<f64>().sqrt();
        let d1 = (0..n).map(|i| (f0[i] / sc(i)).powi(2)).sum::<f64>().sqrt();
        let h0 = if d0 > 1e-10 && d1 > 1e-10 {
            0.01 * d0 / d1
        } else {
            1e-6
        };
        h0.min(t_end)
    };

    let mut k: [Vec<f64>; 7] = Default::default();
    loop {
        if t >= t_end {
            break;
        }
        if stats.accepted + stats.rejected >= config.max_steps {
            return Err(Error::MaxSteps {
                t,
                max_steps: config.max_steps,
                partial: partial_traj(times, states, stats),
            });
        }
        h = h.min(t_end - t);
        k[0] = f0.clone();
        let mut failed_chart: Option<String> = None;
        for stage in 0..6 {
            let mut ys = y.clone();
            for (j, kj) in k.iter().enumerate().take(stage + 1) {
                let a = A[stage][j];
                if a != 0.0 {
                    for i in 0..n {
                        ys[i] += h * a * kj[i];
                    }
                }
            }
            match rhs_flat(h_spec, metric, &ys) {
                Ok(f) => k[stage + 1] = f,
                Err(Error::OutsideChart { what }) => {
                    failed_chart = Some(what);
                    break;
                }
                Err(e) => return Err(e),
            }
            let _ = C;
        }
        if let Some(what) = failed_chart {
            // try shrinking; if the step is already tiny, report the exit
            if h > 1e-12 * t_end.max(1.0) {
                h *= 0.25;
                stats.rejected += 1;
                continue;
            }
            return Err(Error::ChartExit {
                t,
                reason: what,
                partial: partial_traj(times, states, stats),
            });
        }
        // 5th-order solution is stage 6's argument with b = A[5]
        let mut y1 = y.clone();
        for (j, kj) in k.iter().enumerate().take(6) {
            let b = A[5][j];
            if b != 0.0 {
                for i in 0..n {
                    y1[i] += h * b * kj[i];
                }
            }
        }
        // embedded error estimate
        let mut err_sq = 0.0;
        for i in 0..n {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e += E[j] * kj[i];
            }
            e *= h;
            let sc = abs_tol + rel_tol * y[i].abs().max(y1[i].abs());
            err_sq += (e / sc).powi(2);
        }
        let err = (err_sq / n as f64).sqrt();

        if err <= 1.0 {
            // accepted
            stats.accepted += 1;
            stats.max_error_estimate = stats.max_error_estimate.max(err * rel_tol);
            let t_new = t + h;

            if let Some(grid_times) = &grid {
                // fill dense samples inside (t, t_new]
                if grid_pos < grid_times.len() && grid_times[grid_pos] <= t_new + 1e-14 {
                    let seg = make_dense_segment(t, h, &y, &y1, &k);
                    while grid_pos < grid_times.len() && grid_times[grid_pos] <= t_new + 1e-14 {
                        let ti = grid_times[grid_pos];
                        let yi = seg.eval(ti);
                        dense_times.push(ti);
                        dense_states.push(PhasePoint::new(yi[..d].to_vec(), yi[d..].to_vec()));
                        grid_pos += 1;
                    }
                }
            }

            y = y1;
            t = t_new;
            f0 = k[6].clone(); // FSAL
            let z = PhasePoint::new(y[..d].to_vec(), y[d..].to_vec());
            if let Err(Error::OutsideChart { what }) = metric.check_chart(&z.x) {
                return Err(Error::ChartExit {
                    t,
                    reason: what,
                    partial: partial_traj(times, states, stats),
                });
            }
            times.push(t);
            states.push(z);
            let factor = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
            h *= factor;
        } else {
            stats.rejected += 1;
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
        }
    }

    if grid.is_some() {
        Ok(Trajectory {
            times: dense_times,
            states: dense_states,
            stats,
        })
    } else {
        Ok(Trajectory {
            times,
            states,
            stats,
        })
    }
}

fn make_dense_segment(t0: f64, h: f64, y0: &[f64], y1: &[f64], k: &[Vec<f64>; 7]) -> DenseSegment {
    let n = y0.len();
    let mut rcont: [Vec<f64>; 5] = Default::default();
    rcont[0] = y0.to_vec();
    rcont[1] = (0..n).map(|i| y1[i] - y0[i]).collect();
    rcont[2] = (0..n).map(|i| h * k[0][i] - (y1[i] - y0[i])).collect();
    rcont[3] = (0..n)
        .map(|i| (y1[i] - y0[i]) - h * k[6][i] - rcont[2][i])
        .collect();
    rcont[4] = (0..n)
        .map(|i| {
            h * (D[0] * k[0][i]
                + D[2] * k[2][i]
                + D[3] * k[3][i]
                + D[4] * k[4][i]
                + D[5] * k[5][i]
                + D[6] * k[6][i])
        })
        .collect();
    DenseSegment { t0, h, rcont }
}

/// A named scalar diagnostic evaluated along trajectories.
#[derive(Clone)]
pub struct NamedObservable {
    pub name: String,
    /// Absolute scale guarding relative drift when the initial value is near
    /// zero.
    pub scale: f64,
    pub eval: Arc<dyn Fn(&PhasePoint) -> Result<f64> + Send + Sync>,
}

impl NamedObservable {
    pub fn new(
        name: impl Into<String>,
        eval: Arc<dyn Fn(&PhasePoint) -> Result<f64> + Send + Sync>,
    ) -> Self {
        NamedObservable {
            name: name.into(),
            scale: 1.0,
            eval,
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DriftEntry {
    pub name: String,
    pub initial: f64,
    pub max_abs_deviation: f64,
    pub relative_drift: f64,
}

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct DriftReport {
    pub entries: Vec<DriftEntry>,
}

impl DriftReport {
    pub fn get(&self, name: &str) -> Option<&DriftEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

/// Evaluate each observable along the trajectory and report the worst
/// deviation from its initial value.
pub fn monitor(traj: &Trajectory, observables: &[NamedObservable]) -> Result<DriftReport> {
    if traj.is_empty() {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    let mut entries = Vec::with_capacity(observables.len());
    for obs in observables {
        let initial = (obs.eval)(&traj.states[0])?;
        let mut max_dev: f64 = 0.0;
        for z in &traj.states[1..] {
            let v = (obs.eval)(z)?;
            max_dev = max_dev.max((v - initial).abs());
        }
        let denom = initial.abs().max(obs.scale);
        entries.push(DriftEntry {
            name: obs.name.clone(),
            initial,
            max_abs_deviation: max_dev,
            relative_drift: max_dev / denom,
        });
    }
    Ok(DriftReport { entries })
}

/// Write `t, x^0.., p_0.., <observables>` rows with 17 significant digits.
pub fn write_trajectory_csv(
    writer: &mut dyn std::io::Write,
    traj: &Trajectory,
    observables: &[NamedObservable],
) -> Result<()> {
    let d = traj.states.first().map_or(0, |z| z.dim());
    let mut header = vec!["t".to_string()];
    header.extend((0..d).map(|a| format!("x{a}")));
    header.extend((0..d).map(|a| format!("p{a}")));
    header.extend(observables.iter().map(|o| o.name.clone()));
    writeln!(writer, "{}", header.join(","))?;
    for (t, z) in traj.times.iter().zip(&traj.states) {
        let mut row = Vec::with_capacity(1 + 2 * d + observables.len());
        row.push(format!("{t:.16e}"));
        row.extend(z.x.iter().map(|v| format!("{v:.16e}")));
        row.extend(z.p.iter().map(|v| format!("{v:.16e}")));
        for obs in observables {
            row.push(format!("{:.16e}", (obs.eval)(z)?));
        }
        writeln!(writer, "{}", row.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spacetimes;

    #[test]
    fn flat_space_linear_motion() {
        let entry = spacetimes::minkowski4();
        let h = HamiltonianSpec::geodesic(1.0);
        let z0 = PhasePoint::new(vec![0.0; 4], vec![-1.0, 0.3, 0.0, 0.2]);
        let cfg = IntegratorConfig::adaptive(1e-12, 1e-14);
        let traj = integrate(&h, &entry.metric, &z0, 10.0, &cfg).unwrap();
        let zf = traj.last();
        let ginv = entry.metric.inverse_metric_at(&z0.x).unwrap();
        let v = ginv.matvec(&z0.p);
        for a in 0..4 {
            assert!((zf.x[a] - 10.0 * v[a]).abs() < 1e-10, "x^{a}");
            assert!((zf.p[a] - z0.p[a]).abs() < 1e-12, "p_{a}");
        }
    }

    #[test]
    fn fixed_step_fourth_order() {
        // global error ratio ~ 16 under step halving
        let entry = spacetimes::schwarzschild(1.0);
        let h = HamiltonianSpec::geodesic(1.0);
        // eccentric strong-field orbit so the truncation error is well above
        // rounding at these steps
        let z0 = PhasePoint::new(
            vec![0.0, 6.0, std::f64::consts::FRAC_PI_2, 0.0],
            vec![-0.96, 0.3, 0.0, 3.2],
        );
        let reference = integrate(
            &h,
            &entry.metric,
            &z0,
            40.0,
            &IntegratorConfig::adaptive(1e-13, 1e-15),
        )
        .unwrap();
        let zf = reference.last();
        let run = |step: f64| {
            let traj =
                integrate(&h, &entry.metric, &z0, 40.0, &IntegratorConfig::fixed(step)).unwrap();
            let z = traj.last().clone();
            let mut err: f64 = 0.0;
            for a in 0..4 {
                err = err.max((z.x[a] - zf.x[a]).abs()).max((z.p[a] - zf.p[a]).abs());
            }
            err
        };
        let e1 = run(0.08);
        let e2 = run(0.04);
        let ratio = e1 / e2;
        assert!(
            (8.0..32.0).contains(&ratio),
            "expected ~16, got {ratio} (e1={e1:.3e}, e2={e2:.3e})"
        );
    }

    #[test]
    fn horizon_exit_reports_partial_trajectory() {
        let entry = spacetimes::schwarzschild(1.0);
        let h = HamiltonianSpec::geodesic(1.0);
        // radial infall
        let z0 = PhasePoint::new(
            vec![0.0, 4.0, std::f64::consts::FRAC_PI_2, 0.0],
            vec![-1.0, -0.9, 0.0, 0.0],
        );
        let cfg = IntegratorConfig::adaptive(1e-10, 1e-12);
        match integrate(&h, &entry.metric, &z0, 100.0, &cfg) {
            Err(Error::ChartExit { t, partial, .. }) => {
                assert!(t > 0.0);
                assert!(partial.len() > 2);
                assert!(partial.last().x[1] > 2.0, "still outside the horizon");
            }
            other => panic!("expected chart exit, got {:?}", other.map(|t| t.len())),
        }
    }

    #[test]
    fn max_steps_reports_partial() {
        let entry = spacetimes::kerr(1.0, 0.9);
        let h = HamiltonianSpec::geodesic(1.0);
        let z0 = PhasePoint::new(vec![0.0, 8.0, 1.3, 0.0], vec![-0.96, 0.02, 0.6, 2.8]);
        let mut cfg = IntegratorConfig::adaptive(1e-12, 1e-14);
        cfg.max_steps = 10;
        match integrate(&h, &entry.metric, &z0, 1000.0, &cfg) {
            Err(Error::MaxSteps {
                max_steps, partial, ..
            }) => {
                assert_eq!(max_steps, 10);
                assert!(partial.len() <= 11);
            }
            other => panic!("expected MaxSteps, got {:?}", other.map(|t| t.len())),
        }
    }

    #[test]
    fn time_reversal_consistency() {
        let entry = spacetimes::kerr(1.0, 0.9);
        let h = HamiltonianSpec::geodesic(1.0);
        let z0 = PhasePoint::new(vec![0.0, 8.0, 1.3, 0.0], vec![-0.96, 0.02, 0.6, 2.8]);
        let rel_tol = 1e-12;
        let cfg = IntegratorConfig::adaptive(rel_tol, 1e-14);
        let fwd = integrate(&h, &entry.metric, &z0, 50.0, &cfg).unwrap();
        let zf = fwd.last();
        let back_start = PhasePoint::new(zf.x.clone(), zf.p.iter().map(|v| -v).collect());
        let bwd = integrate(&h, &entry.metric, &back_start, 50.0, &cfg).unwrap();
        let zb = bwd.last();
        for a in 0..4 {
            assert!(
                (zb.x[a] - z0.x[a]).abs() < 100.0 * rel_tol * (1.0 + z0.x[a].abs()),
                "x^{a}: {} vs {}",
                zb.x[a],
                z0.x[a]
            );
            assert!((zb.p[a] + z0.p[a]).abs() < 100.0 * rel_tol * (1.0 + z0.p[a].abs()));
        }
    }

    #[test]
    fn hamiltonian_drift_small() {
        let entry = spacetimes::kerr(1.0, 0.9);
        let metric = entry.metric.clone();
        let h = HamiltonianSpec::geodesic(1.0);
        let z0 = PhasePoint::new(vec![0.0, 8.0, 1.3, 0.0], vec![-0.96, 0.02, 0.6, 2.8]);
        let cfg = IntegratorConfig::adaptive(1e-12, 1e-14);
        let traj = integrate(&h, &entry.metric, &z0, 100.0, &cfg).unwrap();
        let h2 = h.clone();
        let obs = NamedObservable::new(
            "hamiltonian",
            Arc::new(move |z: &PhasePoint| h2.value(&metric, z)),
        );
        let report = monitor(&traj, &[obs]).unwrap();
        assert!(
            report.entries[0].relative_drift <= 10.0 * 1e-12,
            "drift {}",
            report.entries[0].relative_drift
        );
    }

    #[test]
    fn dense_grid_is_uniform() {
        let entry = spacetimes::schwarzschild(1.0);
        let h = HamiltonianSpec::geodesic(1.0);
        let z0 = PhasePoint::new(
            vec![0.0, 10.0, std::f64::consts::FRAC_PI_2, 0.0],
            vec![-0.97, 0.0, 0.0, 3.6],
        );
        let cfg = IntegratorConfig::adaptive(1e-10, 1e-12).with_dense_grid(64);
        let traj = integrate(&h, &entry.metric, &z0, 20.0, &cfg).unwrap();
        assert_eq!(traj.len(), 65);
        let step = traj.uniform_step().expect("uniform grid");
        assert!((step - 20.0 / 64.0).abs() < 1e-12);
        // dense output stays on the energy shell to interpolation accuracy
        let metric = entry.metric.clone();
        for z in &traj.states {
            let hval = h.value(&metric, z).unwrap();
            assert!((hval - h.value(&metric, &z0).unwrap()).abs() < 1e-8);
        }
    }
}
