//! Cotangent-bundle structure: canonical Poisson brackets, the (u, f)
//! splitting of the Hamiltonian flow, and the covariant time derivative of
//! tensor-valued phase-space observables.
//!
//! Conventions: `x^a` are chart coordinates, `p_a` covariant momentum
//! components. The momentum-slot derivative is a plain partial (the fibre is
//! linear); the position-slot derivative always carries the covariant
//! correction `p_k Gamma^k_al d/dp_l`. Torsion is zero throughout.

use std::sync::Arc;

use crate::dual::{lift, lift_seeded, Dual};
use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::manifold::MetricSpec;

/// A point `[x, p]` of the cotangent bundle.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint {
    pub x: Vec<f64>,
    pub p: Vec<f64>,
}

impl PhasePoint {
    pub fn new(x: Vec<f64>, p: Vec<f64>) -> Self {
        assert_eq!(x.len(), p.len());
        PhasePoint { x, p }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// `p^2 = g^{ab} p_a p_b`.
    pub fn p_squared(&self, metric: &MetricSpec) -> Result<f64> {
        let ginv = metric.inverse_metric_at(&self.x)?;
        Ok(dot(&self.p, &ginv.matvec(&self.p)))
    }
}

/// Scalar observable `F(x, p)`, evaluable on dual numbers in both slots.
pub type ScalarObservable = Arc<dyn Fn(&[Dual], &[Dual]) -> Dual + Send + Sync>;

/// Covariant vector field `x -> xi_a(x)` on dual coordinates.
pub type CovectorField = Arc<dyn Fn(&[Dual]) -> Vec<Dual> + Send + Sync>;

/// The Hamiltonians this crate integrates.
#[derive(Clone)]
pub enum HamiltonianSpec {
    /// `H = p_a g^{ab} p_b / (2m)`.
    Geodesic { mass: f64 },
    /// `H = (p - e xi)_a g^{ab} (p - e xi)_b / (2m)` with `q A = e xi`.
    Charged {
        mass: f64,
        coupling: f64,
        xi: CovectorField,
    },
    /// Arbitrary scalar evaluator.
    Custom { eval: ScalarObservable },
}

impl HamiltonianSpec {
    pub fn geodesic(mass: f64) -> Self {
        assert!(mass > 0.0, "mass must be positive");
        HamiltonianSpec::Geodesic { mass }
    }

    pub fn charged(mass: f64, coupling: f64, xi: CovectorField) -> Self {
        assert!(mass > 0.0, "mass must be positive");
        HamiltonianSpec::Charged {
            mass,
            coupling,
            xi,
        }
    }

    pub fn mass(&self) -> f64 {
        match self {
            HamiltonianSpec::Geodesic { mass } | HamiltonianSpec::Charged { mass, .. } => *mass,
            HamiltonianSpec::Custom { .. } => 1.0,
        }
    }

    /// Evaluate on dual slots.
    pub fn eval_dual(&self, metric: &MetricSpec, x: &[Dual], p: &[Dual]) -> Result<Dual> {
        match self {
            HamiltonianSpec::Geodesic { mass } => {
                let ginv = metric.inverse_metric_dual(x)?;
                Ok(quad(&ginv.matvec(p), p) * Dual::constant(0.5 / mass))
            }
            HamiltonianSpec::Charged {
                mass,
                coupling,
                xi,
            } => {
                let ginv = metric.inverse_metric_dual(x)?;
                let xi_x = xi(x);
                let e = Dual::constant(*coupling);
                let w: Vec<Dual> = p.iter().zip(&xi_x).map(|(&pa, &xa)| pa - e * xa).collect();
                Ok(quad(&ginv.matvec(&w), &w) * Dual::constant(0.5 / mass))
            }
            HamiltonianSpec::Custom { eval } => Ok(eval(x, p)),
        }
    }

    pub fn value(&self, metric: &MetricSpec, z: &PhasePoint) -> Result<f64> {
        metric.check_chart(&z.x)?;
        Ok(self.eval_dual(metric, &lift(&z.x), &lift(&z.p))?.re)
    }

    /// `dH/dp_a` for all `a`.
    pub fn grad_p(&self, metric: &MetricSpec, z: &PhasePoint) -> Result<Vec<f64>> {
        let x = lift(&z.x);
        (0..z.dim())
            .map(|a| Ok(self.eval_dual(metric, &x, &lift_seeded(&z.p, a))?.du))
            .collect()
    }

    /// `dH/dx^a` for all `a` (plain coordinate partial).
    pub fn grad_x(&self, metric: &MetricSpec, z: &PhasePoint) -> Result<Vec<f64>> {
        let p = lift(&z.p);
        (0..z.dim())
            .map(|a| Ok(self.eval_dual(metric, &lift_seeded(&z.x, a), &p)?.du))
            .collect()
    }
}

fn quad(a: &[Dual], b: &[Dual]) -> Dual {
    let mut acc = Dual::ZERO;
    for (&x, &y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// Canonical Poisson bracket
/// `{F, G} = dF/dx^a dG/dp_a - dF/dp_a dG/dx^a`.
pub fn poisson_bracket(f: &ScalarObservable, g: &ScalarObservable, z: &PhasePoint) -> f64 {
    let d = z.dim();
    let x = lift(&z.x);
    let p = lift(&z.p);
    let mut acc = 0.0;
    for a in 0..d {
        let xs = lift_seeded(&z.x, a);
        let ps = lift_seeded(&z.p, a);
        let df_dx = f(&xs, &p).du;
        let dg_dp = g(&x, &ps).du;
        let df_dp = f(&x, &ps).du;
        let dg_dx = g(&xs, &p).du;
        acc += df_dx * dg_dp - df_dp * dg_dx;
    }
    acc
}

/// Configuration and momentum parts of the Hamiltonian flow:
/// `u^a = dH/dp_a`, `f_a = -(dH/dx^a + p_k Gamma^k_al dH/dp_l)`.
#[derive(Clone, Debug)]
pub struct FlowSplit {
    pub u: Vec<f64>,
    pub f: Vec<f64>,
}

pub fn flow_split(
    h: &HamiltonianSpec,
    metric: &MetricSpec,
    z: &PhasePoint,
) -> Result<FlowSplit> {
    let d = z.dim();
    let u = h.grad_p(metric, z)?;
    let dx = h.grad_x(metric, z)?;
    let gamma = metric.christoffel_at(&z.x)?;
    let mut f = vec![0.0; d];
    for a in 0..d {
        let mut cov = dx[a];
        for k in 0..d {
            for l in 0..d {
                cov += z.p[k] * gamma.get(k, a, l) * u[l];
            }
        }
        f[a] = -cov;
    }
    Ok(FlowSplit { u, f })
}

/// Variance of one tensor slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variance {
    Up,
    Down,
}

/// Tensor-valued phase-space observable with declared valence. The evaluator
/// returns `D^k` components flattened in row-major multi-index order.
#[derive(Clone)]
pub struct TensorObservable {
    pub valence: Vec<Variance>,
    pub eval: Arc<dyn Fn(&[Dual], &[Dual]) -> Vec<Dual> + Send + Sync>,
}

impl TensorObservable {
    pub fn scalar(f: ScalarObservable) -> Self {
        TensorObservable {
            valence: vec![],
            eval: Arc::new(move |x, p| vec![f(x, p)]),
        }
    }

    pub fn components_at(&self, z: &PhasePoint) -> Vec<f64> {
        (self.eval)(&lift(&z.x), &lift(&z.p))
            .into_iter()
            .map(|d| d.re)
            .collect()
    }
}

/// Covariant time derivative of `A` along the Hamiltonian flow of `h` at `z`.
///
/// Component layout matches the observable's own, one entry per multi-index.
/// Implements the coordinate expression of the split derivative: the flow is
/// split into `(u, f)`, the position derivative carries the
/// `p_k Gamma^k_nl d/dp_l` correction plus one connection term per tensor
/// slot, and the momentum derivative is a plain partial.
pub fn covariant_time_derivative(
    a: &TensorObservable,
    h: &HamiltonianSpec,
    metric: &MetricSpec,
    z: &PhasePoint,
) -> Result<Vec<f64>> {
    let d = z.dim();
    let rank = a.valence.len();
    let n_comp = d.pow(rank as u32);
    let split = flow_split(h, metric, z)?;
    let gamma = metric.christoffel_at(&z.x)?;

    let x = lift(&z.x);
    let p = lift(&z.p);
    let value: Vec<f64> = (a.eval)(&x, &p).iter().map(|v| v.re).collect();
    if value.len() != n_comp {
        return Err(Error::Dimension(format!(
            "observable produced {} components, valence {:?} over dim {} needs {}",
            value.len(),
            a.valence,
            d,
            n_comp
        )));
    }

    // dA/dx^n and dA/dp_n, one dual pass each
    let mut da_dx = Vec::with_capacity(d);
    let mut da_dp = Vec::with_capacity(d);
    for n in 0..d {
        da_dx.push(
            (a.eval)(&lift_seeded(&z.x, n), &p)
                .iter()
                .map(|v| v.du)
                .collect::<Vec<f64>>(),
        );
        da_dp.push(
            (a.eval)(&x, &lift_seeded(&z.p, n))
                .iter()
                .map(|v| v.du)
                .collect::<Vec<f64>>(),
        );
    }

    let tuples = crate::forms::all_tuples(d, rank);
    let mut out = vec![0.0; n_comp];
    for (flat, idx) in tuples.iter().enumerate() {
        let mut acc = 0.0;
        for n in 0..d {
            let un = split.u[n];
            if un != 0.0 {
                // covariant position derivative of the components
                let mut pos = da_dx[n][flat];
                for k in 0..d {
                    for l in 0..d {
                        let gkl = gamma.get(k, n, l);
                        if gkl != 0.0 {
                            pos += z.p[k] * gkl * da_dp[l][flat];
                        }
                    }
                }
                // connection term per tensor slot
                for (slot, variance) in a.valence.iter().enumerate() {
                    for k in 0..d {
                        let mut swapped = idx.clone();
                        swapped[slot] = k;
                        let neighbor = value[crate::forms::tuple_index(d, &swapped)];
                        match variance {
                            Variance::Up => {
                                pos += gamma.get(idx[slot], n, k) * neighbor;
                            }
                            Variance::Down => {
                                pos -= gamma.get(k, n, idx[slot]) * neighbor;
                            }
                        }
                    }
                }
                acc += un * pos;
            }
            // momentum part of the flow
            if split.f[n] != 0.0 {
                acc += split.f[n] * da_dp[n][flat];
            }
        }
        out[flat] = acc;
    }
    Ok(out)
}

/// Coordinate-time derivative of a scalar observable along the flow,
/// `dF/dt = {F, H}`.
pub fn observable_time_derivative(
    f: &ScalarObservable,
    h: &HamiltonianSpec,
    metric: &MetricSpec,
    z: &PhasePoint,
) -> Result<f64> {
    let hh = h.clone();
    let m = metric.clone();
    let h_obs: ScalarObservable = Arc::new(move |x, p| {
        hh.eval_dual(&m, x, p).expect("hamiltonian evaluation inside bracket")
    });
    Ok(poisson_bracket(f, &h_obs, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spacetimes;

    #[test]
    fn canonical_pairs() {
        let z = PhasePoint::new(vec![0.1, 0.2, 0.3, 0.4], vec![1.0, 2.0, 3.0, 4.0]);
        let x1: ScalarObservable = Arc::new(|x, _p| x[1]);
        let p1: ScalarObservable = Arc::new(|_x, p| p[1]);
        let x2: ScalarObservable = Arc::new(|x, _p| x[2]);
        assert_eq!(poisson_bracket(&x1, &p1, &z), 1.0);
        assert_eq!(poisson_bracket(&x1, &x2, &z), 0.0);
        // antisymmetry
        assert_eq!(poisson_bracket(&p1, &x1, &z), -1.0);
    }

    #[test]
    fn p_squared_commutes_with_geodesic_h_in_kerr() {
        let entry = spacetimes::kerr(1.0, 0.9);
        let metric = entry.metric.clone();
        let z = PhasePoint::new(vec![0.0, 6.0, 1.2, 0.5], vec![-0.97, 0.1, 1.3, 2.9]);
        let m2 = metric.clone();
        let p2: ScalarObservable = Arc::new(move |x, p| {
            let ginv = m2.inverse_metric_dual(x).unwrap();
            let mut acc = Dual::ZERO;
            let raised = ginv.matvec(p);
            for (a, b) in raised.iter().zip(p) {
                acc += *a * *b;
            }
            acc
        });
        let m3 = metric.clone();
        let h: ScalarObservable = Arc::new(move |x, p| {
            let ginv = m3.inverse_metric_dual(x).unwrap();
            let mut acc = Dual::ZERO;
            let raised = ginv.matvec(p);
            for (a, b) in raised.iter().zip(p) {
                acc += *a * *b;
            }
            acc * Dual::constant(0.5)
        });
        assert!(poisson_bracket(&p2, &h, &z).abs() < 1e-12);
    }

    #[test]
    fn geodesic_flow_split() {
        let entry = spacetimes::kerr(1.0, 0.9);
        let metric = entry.metric.clone();
        let h = HamiltonianSpec::geodesic(1.0);
        let z = PhasePoint::new(vec![0.0, 7.0, 1.0, 0.2], vec![-0.95, 0.05, 1.1, 3.0]);
        let split = flow_split(&h, &metric, &z).unwrap();
        // u = g^{-1} p / m
        let ginv = metric.inverse_metric_at(&z.x).unwrap();
        let expect = ginv.matvec(&z.p);
        for a in 0..4 {
            assert!((split.u[a] - expect[a]).abs() < 1e-12);
            assert!(split.f[a].abs() < 1e-11, "geodesic f must vanish, got {}", split.f[a]);
        }
    }

    #[test]
    fn charged_flow_in_flat_space_with_constant_xi() {
        // u^a = g^{ab}(p - e xi)_b / m and f = 0 when xi is covariantly
        // constant.
        let entry = spacetimes::minkowski4();
        let metric = entry.metric.clone();
        let xi: crate::phasespace::CovectorField = Arc::new(|_x: &[Dual]| {
            vec![
                Dual::constant(-0.8),
                Dual::constant(0.1),
                Dual::constant(0.0),
                Dual::constant(0.3),
            ]
        });
        let (mass, e) = (2.0, 0.4);
        let h = HamiltonianSpec::charged(mass, e, xi.clone());
        let z = PhasePoint::new(vec![0.0; 4], vec![-1.0, 0.5, 0.2, 0.7]);
        let split = flow_split(&h, &metric, &z).unwrap();
        let ginv = metric.inverse_metric_at(&z.x).unwrap();
        let xi_val = [-0.8, 0.1, 0.0, 0.3];
        let w: Vec<f64> = z.p.iter().zip(xi_val).map(|(p, x)| p - e * x).collect();
        let expect = ginv.matvec(&w);
        for a in 0..4 {
            assert!((split.u[a] - expect[a] / mass).abs() < 1e-14);
            assert!(split.f[a].abs() < 1e-14);
        }
    }

    #[test]
    fn covariant_derivative_of_momentum_vanishes_on_geodesics() {
        let entry = spacetimes::kerr(1.0, 0.9);
        let metric = entry.metric.clone();
        let h = HamiltonianSpec::geodesic(1.0);
        let z = PhasePoint::new(vec![0.0, 5.5, 1.3, 1.0], vec![-0.9, -0.2, 0.7, 2.2]);
        let a = TensorObservable {
            valence: vec![Variance::Down],
            eval: Arc::new(|_x, p| p.to_vec()),
        };
        let dd = covariant_time_derivative(&a, &h, &metric, &z).unwrap();
        for v in dd {
            assert!(v.abs() < 1e-12, "nabla p / dt = {v}");
        }
    }

    #[test]
    fn covariant_derivative_of_metric_vanishes() {
        let entry = spacetimes::kerr(1.0, 0.9);
        let metric = entry.metric.clone();
        let h = HamiltonianSpec::geodesic(1.0);
        let z = PhasePoint::new(vec![0.0, 4.8, 0.8, 0.3], vec![-1.0, 0.3, 0.5, 1.8]);
        let m = metric.clone();
        let a = TensorObservable {
            valence: vec![Variance::Down, Variance::Down],
            eval: Arc::new(move |x, _p| {
                let g = m.metric_dual(x);
                let d = g.dim();
                let mut out = Vec::with_capacity(d * d);
                for i in 0..d {
                    for j in 0..d {
                        out.push(g[(i, j)]);
                    }
                }
                out
            }),
        };
        let dd = covariant_time_derivative(&a, &h, &metric, &z).unwrap();
        for v in dd {
            assert!(v.abs() < 1e-10, "nabla g / dt = {v}");
        }
    }
}
