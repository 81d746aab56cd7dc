//! Lax operators: the catalog of covariantly conserved mixed tensors
//! `L^a_b(x, p)`, their ordinary Lax-pair matrices, residual tests of the
//! covariant and ordinary Lax equations, trace invariants, and the
//! determinant identity generating quadratic constants of motion.
//!
//! Operator catalog (`w` stands for `p`, or `p + e xi` for the charged kind):
//!
//! ```text
//! momentum_square    L^a_b = p^a p_b
//! scaled             L = E(x, p) inner
//! cckv_rank1         L^a_b = h^a p_b - p^a h_b            (rank-1 CCKY h)
//! f_rank2            L^a_b = p^2 h^a_b - p^a p^n h_nb - h^{an} p_n p_b
//! ky_rank3           L^a_b = phi^a_{b n} p^n              (rank-3 KY phi)
//! phi_rank2          L^a_b = phi^{an} p_n p_b + p^a p^n phi_nb
//! ky_partial_square  L^a_b = phi^{a k..m} p_m phi_{b k..n} p^n
//! f_square           L^a_b = F^{a k..} F_{b k..}
//! charged_f          f_rank2 with p -> p + e xi
//! ```

use std::sync::Arc;

use crate::dual::{lift, Dual};
use crate::error::{Error, Result};
use crate::forms::{all_tuples, Form};
use crate::linalg::{dot, SqMatrix};
use crate::manifold::MetricSpec;
use crate::phasespace::{
    covariant_time_derivative, CovectorField, HamiltonianSpec, PhasePoint, ScalarObservable,
    TensorObservable, Variance,
};
use crate::symmetry::{CckyField, KyField, NULL_MOMENTUM_THRESHOLD};

/// Evaluator `z -> L^a_b` from the catalog of constructions.
#[derive(Clone)]
pub enum LaxOperator {
    MomentumSquare,
    Scaled {
        inner: Box<LaxOperator>,
        factor: ScalarObservable,
    },
    CckvRank1 {
        h: CckyField,
    },
    FRank2 {
        h: CckyField,
    },
    KyRank3 {
        phi: KyField,
    },
    PhiRank2 {
        phi: KyField,
    },
    KyPartialSquare {
        phi: KyField,
    },
    FSquare {
        h: CckyField,
    },
    ChargedF {
        h: CckyField,
        coupling: f64,
        xi: CovectorField,
    },
}

impl LaxOperator {
    pub fn kind_name(&self) -> &'static str {
        match self {
            LaxOperator::MomentumSquare => "momentum_square",
            LaxOperator::Scaled { .. } => "scaled",
            LaxOperator::CckvRank1 { .. } => "cckv_rank1",
            LaxOperator::FRank2 { .. } => "f_rank2",
            LaxOperator::KyRank3 { .. } => "ky_rank3",
            LaxOperator::PhiRank2 { .. } => "phi_rank2",
            LaxOperator::KyPartialSquare { .. } => "ky_partial_square",
            LaxOperator::FSquare { .. } => "f_square",
            LaxOperator::ChargedF { .. } => "charged_f",
        }
    }

    /// Check the field rank demanded by the kind.
    pub fn check_ranks(&self) -> Result<()> {
        let expect = |kind: &'static str, found: usize, expected: usize| {
            if found == expected {
                Ok(())
            } else {
                Err(Error::LaxRank {
                    kind,
                    expected,
                    found,
                })
            }
        };
        match self {
            LaxOperator::CckvRank1 { h } => expect("cckv_rank1", h.0.rank(), 1),
            LaxOperator::FRank2 { h } => expect("f_rank2", h.0.rank(), 2),
            LaxOperator::ChargedF { h, .. } => expect("charged_f", h.0.rank(), 2),
            LaxOperator::KyRank3 { phi } => expect("ky_rank3", phi.0.rank(), 3),
            LaxOperator::PhiRank2 { phi } => expect("phi_rank2", phi.0.rank(), 2),
            LaxOperator::Scaled { inner, .. } => inner.check_ranks(),
            _ => Ok(()),
        }
    }

    /// Evaluate on dual slots; this is what the covariant derivative
    /// differentiates.
    pub fn eval_dual(
        &self,
        metric: &MetricSpec,
        x: &[Dual],
        p: &[Dual],
    ) -> Result<SqMatrix<Dual>> {
        let d = metric.dim;
        let ginv = metric.inverse_metric_dual(x)?;
        match self {
            LaxOperator::MomentumSquare => {
                let p_up = ginv.matvec(p);
                Ok(SqMatrix::from_fn(d, |a, b| p_up[a] * p[b]))
            }
            LaxOperator::Scaled { inner, factor } => {
                let base = inner.eval_dual(metric, x, p)?;
                Ok(base.scale(factor(x, p)))
            }
            LaxOperator::CckvRank1 { h } => {
                let hv = h.0.at_dual(x);
                let h_cov: Vec<Dual> = (0..d).map(|a| hv.get(&[a])).collect();
                let h_up = ginv.matvec(&h_cov);
                let p_up = ginv.matvec(p);
                Ok(SqMatrix::from_fn(d, |a, b| {
                    h_up[a] * p[b] - p_up[a] * h_cov[b]
                }))
            }
            LaxOperator::FRank2 { h } => f_mixed(&h.0.at_dual(x), p, &ginv),
            LaxOperator::ChargedF { h, coupling, xi } => {
                let xi_x = xi(x);
                let e = Dual::constant(*coupling);
                let w: Vec<Dual> = p.iter().zip(&xi_x).map(|(&pa, &xa)| pa + e * xa).collect();
                f_mixed(&h.0.at_dual(x), &w, &ginv)
            }
            LaxOperator::KyRank3 { phi } => {
                // L^a_b = phi^a_{b n} p^n: contract last slot with p, raise first
                let kap = phi.0.at_dual(x).contract(p, &ginv)?;
                Ok(raise_first_of_two(&kap, &ginv))
            }
            LaxOperator::PhiRank2 { phi } => {
                // Phi = kappa ^ p with kappa = phi . p, then raise the first index
                let kap = phi.0.at_dual(x).contract(p, &ginv)?;
                let phi2 = kap.wedge1(p);
                Ok(raise_first_of_two(&phi2, &ginv))
            }
            LaxOperator::KyPartialSquare { phi } => {
                let kap = phi.0.at_dual(x).contract(p, &ginv)?;
                Ok(partial_square(&kap, &ginv))
            }
            LaxOperator::FSquare { h } => {
                let hv = h.0.at_dual(x);
                let f = hv.wedge1(p).contract(p, &ginv)?;
                Ok(partial_square(&f, &ginv))
            }
        }
    }

    pub fn eval(&self, metric: &MetricSpec, z: &PhasePoint) -> Result<SqMatrix<f64>> {
        metric.check_chart(&z.x)?;
        Ok(self
            .eval_dual(metric, &lift(&z.x), &lift(&z.p))?
            .value_part())
    }

    /// Wrap as a (1,1) tensor observable for the covariant time derivative.
    pub fn as_tensor_observable(&self, metric: &MetricSpec) -> TensorObservable {
        let op = self.clone();
        let metric = metric.clone();
        TensorObservable {
            valence: vec![Variance::Up, Variance::Down],
            eval: Arc::new(move |x, p| {
                let m = op.eval_dual(&metric, x, p).expect("lax evaluation");
                let d = m.dim();
                let mut out = Vec::with_capacity(d * d);
                for a in 0..d {
                    for b in 0..d {
                        out.push(m[(a, b)]);
                    }
                }
                out
            }),
        }
    }
}

/// `F^a_b = w^2 h^a_b - w^a w^n h_nb - h^{an} w_n w_b` for a rank-2 form `h`.
fn f_mixed(h: &Form<Dual>, w: &[Dual], ginv: &SqMatrix<Dual>) -> Result<SqMatrix<Dual>> {
    let d = ginv.dim();
    let w_up = ginv.matvec(w);
    let w2 = dot(w, &w_up);
    // v^a = h^{an} w_n = g^{ak} h_{k n} w^n
    let mut v_up = vec![Dual::ZERO; d];
    for a in 0..d {
        let mut acc = Dual::ZERO;
        for k in 0..d {
            for n in 0..d {
                acc += ginv[(a, k)] * h.get(&[k, n]) * w_up[n];
            }
        }
        v_up[a] = acc;
    }
    // h^a_b = g^{ak} h_{kb}
    let mut h_mixed = SqMatrix::zeros(d);
    for a in 0..d {
        for b in 0..d {
            let mut acc = Dual::ZERO;
            for k in 0..d {
                acc += ginv[(a, k)] * h.get(&[k, b]);
            }
            h_mixed[(a, b)] = acc;
        }
    }
    // w^n h_nb = -v_b (lowered v), so  - w^a w^n h_nb = + w^a v_b
    let v_cov: Vec<Dual> = (0..d)
        .map(|b| {
            let mut acc = Dual::ZERO;
            for n in 0..d {
                acc += h.get(&[n, b]) * w_up[n];
            }
            acc
        })
        .collect();
    Ok(SqMatrix::from_fn(d, |a, b| {
        w2 * h_mixed[(a, b)] - w_up[a] * v_cov[b] - v_up[a] * w[b]
    }))
}

/// Raise the first slot of a rank-2 form: `T^a_b = g^{ak} T_{kb}`.
fn raise_first_of_two(t: &Form<Dual>, ginv: &SqMatrix<Dual>) -> SqMatrix<Dual> {
    let d = ginv.dim();
    SqMatrix::from_fn(d, |a, b| {
        let mut acc = Dual::ZERO;
        for k in 0..d {
            acc += ginv[(a, k)] * t.get(&[k, b]);
        }
        acc
    })
}

/// `L^a_b = T^{a k..} T_{b k..}` (all-but-first slots contracted).
fn partial_square(t: &Form<Dual>, ginv: &SqMatrix<Dual>) -> SqMatrix<Dual> {
    let d = ginv.dim();
    let raised = t.raise_all(ginv);
    let r = t.rank();
    let rest = all_tuples(d, r - 1);
    SqMatrix::from_fn(d, |a, b| {
        let mut acc = Dual::ZERO;
        for tail in &rest {
            let mut ia = vec![a];
            ia.extend_from_slice(tail);
            let mut ib = vec![b];
            ib.extend_from_slice(tail);
            acc += raised.get(&ia) * t.get(&ib);
        }
        acc
    })
}

/// Ordinary Lax-pair matrices extracted from a Lax tensor:
/// `L = [L^a_b]`, `M^a_b = (dH/dp_n) Gamma^a_{n b}`.
#[derive(Clone, Debug)]
pub struct LaxPairMatrices {
    pub l: SqMatrix<f64>,
    pub m: SqMatrix<f64>,
}

pub fn lax_pair_matrices(
    op: &LaxOperator,
    h: &HamiltonianSpec,
    metric: &MetricSpec,
    z: &PhasePoint,
) -> Result<LaxPairMatrices> {
    let l = op.eval(metric, z)?;
    let m = m_matrix(h, metric, z)?;
    Ok(LaxPairMatrices { l, m })
}

/// `M^a_b = (dH/dp_n) Gamma^a_{n b}`.
pub fn m_matrix(
    h: &HamiltonianSpec,
    metric: &MetricSpec,
    z: &PhasePoint,
) -> Result<SqMatrix<f64>> {
    let d = metric.dim;
    let u = h.grad_p(metric, z)?;
    let gamma = metric.christoffel_at(&z.x)?;
    Ok(SqMatrix::from_fn(d, |a, b| {
        let mut acc = 0.0;
        for n in 0..d {
            acc += u[n] * gamma.get(a, n, b);
        }
        acc
    }))
}

/// Max-abs of the covariant time derivative of `z -> L(z)`. Zero (to
/// tolerance) certifies that `op` is a Lax tensor for `h` at `z`.
pub fn covariant_lax_residual(
    op: &LaxOperator,
    h: &HamiltonianSpec,
    metric: &MetricSpec,
    z: &PhasePoint,
) -> Result<f64> {
    op.check_ranks()?;
    let obs = op.as_tensor_observable(metric);
    let dd = covariant_time_derivative(&obs, h, metric, z)?;
    Ok(dd.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

/// Max over interior samples of `|Ldot - [L, M]|` with `Ldot` by centered
/// differences along a uniform-grid trajectory. O(step^2) by construction.
pub fn lax_pair_residual(
    traj: &crate::dynamics::Trajectory,
    op: &LaxOperator,
    h: &HamiltonianSpec,
    metric: &MetricSpec,
) -> Result<f64> {
    if traj.len() < 3 {
        return Err(Error::TooFewSamples {
            needed: 3,
            got: traj.len(),
        });
    }
    let step = traj.uniform_step().ok_or_else(|| {
        Error::Unsupported("lax_pair_residual needs a uniform output grid".into())
    })?;
    let mut ls = Vec::with_capacity(traj.len());
    for z in &traj.states {
        ls.push(op.eval(metric, z)?);
    }
    let mut worst: f64 = 0.0;
    for i in 1..traj.len() - 1 {
        let ldot = ls[i + 1].sub(&ls[i - 1]).scale(1.0 / (2.0 * step));
        let m = m_matrix(h, metric, &traj.states[i])?;
        let bracket = ls[i].commutator(&m);
        worst = worst.max(ldot.sub(&bracket).max_abs());
    }
    Ok(worst)
}

/// `[tr L, tr L^2, .., tr L^jmax]`.
pub fn trace_invariants(
    op: &LaxOperator,
    metric: &MetricSpec,
    z: &PhasePoint,
    jmax: usize,
) -> Result<Vec<f64>> {
    assert!(jmax >= 1);
    let l = op.eval(metric, z)?;
    let mut power = l.clone();
    let mut out = Vec::with_capacity(jmax);
    out.push(power.trace());
    for _ in 1..jmax {
        power = power.matmul(&l);
        out.push(power.trace());
    }
    Ok(out)
}

/// Result of the determinant-identity expansion
/// `W(beta) = p^2 det(I + sqrt(beta) p^{-2} F) = sum_j c_j beta^j`.
#[derive(Clone, Debug)]
pub struct GenktResult {
    /// `c_j = p_a p_b k_(j)^{ab}`, `j = 0..=n`, `c_0 = p^2`.
    pub coefficients: Vec<f64>,
    /// Condition estimate of the interpolation system.
    pub condition: f64,
    /// Set when the interpolation is ill-conditioned.
    pub warning: Option<String>,
}

/// Expansion with the phase-point momentum.
pub fn genkt_coefficients(
    h: &CckyField,
    metric: &MetricSpec,
    z: &PhasePoint,
) -> Result<GenktResult> {
    genkt_with_momentum(h, metric, &z.x, &z.p)
}

/// Expansion contracting the Killing tensors with an arbitrary covector `w`:
/// returns `w_a w_b k_(j)^{ab}`. Bilinear combinations (polarization) recover
/// mixed contractions such as `p k xi`.
pub fn genkt_with_momentum(
    h: &CckyField,
    metric: &MetricSpec,
    x: &[f64],
    w: &[f64],
) -> Result<GenktResult> {
    if h.0.rank() != 2 {
        return Err(Error::LaxRank {
            kind: "genkt",
            expected: 2,
            found: h.0.rank(),
        });
    }
    let d = metric.dim;
    let n = d / 2;
    let ginv = metric.inverse_metric_at(x)?;
    let w_up = ginv.matvec(w);
    let w2 = dot(w, &w_up);
    let scale = w.iter().fold(0.0f64, |m, v| m.max(v.abs())).powi(2);
    if w2.abs() <= NULL_MOMENTUM_THRESHOLD * scale.max(1.0) {
        return Err(Error::NullMomentum { p_squared: w2 });
    }
    // F^a_b with momentum w
    let xd = lift(x);
    let wd = lift(w);
    let ginv_d = metric.inverse_metric_dual(&xd)?;
    let mut f = f_mixed(&h.0.at_dual(&xd), &wd, &ginv_d)?.value_part();

    // The determinant is similarity invariant; orthonormal-frame components
    // avoid the coordinate anisotropy that would otherwise amplify rounding
    // noise in the high-order coefficients.
    if let Ok(frame) = metric.frame_at(x) {
        f = frame.coframe.matmul(&f).matmul(&frame.legs.transpose());
    }

    // Chebyshev nodes keep the determinant arguments O(1)
    let f_norm = f.max_abs();
    let beta_max = d as f64 / (f_norm * f_norm / w2.powi(4).max(f64::MIN_POSITIVE) + 1.0);
    let nodes: Vec<f64> = (0..=n)
        .map(|k| {
            let t = ((2 * k + 1) as f64) * std::f64::consts::PI / (2 * (n + 1)) as f64;
            0.5 * (1.0 + t.cos())
        })
        .collect();
    let mut wvals = Vec::with_capacity(n + 1);
    for &s in &nodes {
        let beta = s * beta_max;
        let arg = SqMatrix::identity(d).add(&f.scale(beta.sqrt() / w2));
        wvals.push(w2 * arg.det());
    }
    // Vandermonde solve in the scaled variable s = beta / beta_max, then
    // rescale the coefficients.
    let vand = SqMatrix::from_fn(n + 1, |i, j| nodes[i].powi(j as i32));
    let (vinv, condition) = vand.inverse()?;
    let scaled = vinv.matvec(&wvals);
    let coefficients: Vec<f64> = scaled
        .iter()
        .enumerate()
        .map(|(j, c)| c / beta_max.powi(j as i32))
        .collect();
    let warning = if condition > 1e12 {
        Some(format!(
            "ill-conditioned interpolation (condition estimate {condition:.3e})"
        ))
    } else {
        None
    };
    Ok(GenktResult {
        coefficients,
        condition,
        warning,
    })
}

/// Quadratic and linear constants of charged motion built from the
/// determinant identity by polarization:
///
/// ```text
/// Ktilde_(j) = (p + e xi) k_(j) (p + e xi)
/// K_(j)      = (p - e xi) k_(j) (p - e xi) = Ktilde_(j) - 4 e L_(j)
/// L_(j)      = p k_(j) xi
/// ```
#[derive(Clone, Debug)]
pub struct ChargedConstants {
    pub ktilde: Vec<f64>,
    pub k: Vec<f64>,
    pub l: Vec<f64>,
}

pub fn charged_constants(
    h: &CckyField,
    xi: &CovectorField,
    coupling: f64,
    metric: &MetricSpec,
    z: &PhasePoint,
) -> Result<ChargedConstants> {
    let xi_x: Vec<f64> = xi(&lift(&z.x)).iter().map(|v| v.re).collect();
    let comb = |s: f64| -> Vec<f64> {
        z.p.iter()
            .zip(&xi_x)
            .map(|(&pa, &xa)| pa + s * xa)
            .collect()
    };
    let ktilde = genkt_with_momentum(h, metric, &z.x, &comb(coupling))?.coefficients;
    let k = genkt_with_momentum(h, metric, &z.x, &comb(-coupling))?.coefficients;
    // exact bilinear expansion: p k xi = (1/2)[(p+xi)k(p+xi) - pkp - xikxi];
    // all three arguments stay well away from null for the catalog runs.
    let plus = genkt_with_momentum(h, metric, &z.x, &comb(1.0))?.coefficients;
    let pure_p = genkt_with_momentum(h, metric, &z.x, &z.p)?.coefficients;
    let pure_xi = genkt_with_momentum(h, metric, &z.x, &xi_x)?.coefficients;
    let l: Vec<f64> = (0..plus.len())
        .map(|j| 0.5 * (plus[j] - pure_p[j] - pure_xi[j]))
        .collect();
    Ok(ChargedConstants { ktilde, k, l })
}
