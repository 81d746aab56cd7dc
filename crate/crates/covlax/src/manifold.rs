//! Metric geometry: metric evaluation, exact differentiation via dual
//! numbers, Christoffel symbols, orthonormal frames and Ricci rotation
//! coefficients.

use std::sync::Arc;

use crate::dual::{lift, lift_seeded, Dual, Scalar};
use crate::error::{Error, Result};
use crate::linalg::SqMatrix;

/// Metric evaluator on dual coordinates. Plain evaluation is the zero-seed
/// special case, so one signature serves both values and derivatives.
pub type MetricFn = Arc<dyn Fn(&[Dual]) -> SqMatrix<Dual> + Send + Sync>;

/// Chart predicate: `None` means the point is valid, `Some(what)` names the
/// violated condition.
pub type ChartFn = Arc<dyn Fn(&[f64]) -> Option<String> + Send + Sync>;

/// A metric on a `D`-dimensional chart.
///
/// `signature` lists the eigenvalue signs of `g_ab` in frame order, e.g.
/// `[-1, 1, 1, 1]` for a mostly-plus Lorentzian metric with the timelike
/// direction first.
#[derive(Clone)]
pub struct MetricSpec {
    pub dim: usize,
    pub signature: Vec<i8>,
    metric_fn: MetricFn,
    chart: ChartFn,
}

impl MetricSpec {
    pub fn new(dim: usize, signature: Vec<i8>, metric_fn: MetricFn, chart: ChartFn) -> Self {
        assert_eq!(signature.len(), dim, "signature length must equal dimension");
        assert!(dim >= 2);
        MetricSpec {
            dim,
            signature,
            metric_fn,
            chart,
        }
    }

    /// Chart with no restrictions.
    pub fn open_chart() -> ChartFn {
        Arc::new(|_x| None)
    }

    pub fn check_chart(&self, x: &[f64]) -> Result<()> {
        match (self.chart)(x) {
            None => Ok(()),
            Some(what) => Err(Error::OutsideChart { what }),
        }
    }

    /// `diag(signature)` as a real matrix.
    pub fn eta(&self) -> SqMatrix<f64> {
        SqMatrix::from_fn(self.dim, |i, j| {
            if i == j {
                f64::from(self.signature[i])
            } else {
                0.0
            }
        })
    }

    /// Raw evaluation on dual coordinates (no chart check).
    pub fn metric_dual(&self, x: &[Dual]) -> SqMatrix<Dual> {
        (self.metric_fn)(x)
    }

    /// `g_ab(x)`.
    pub fn metric_at(&self, x: &[f64]) -> Result<SqMatrix<f64>> {
        self.check_chart(x)?;
        Ok(self.metric_dual(&lift(x)).value_part())
    }

    /// `g^ab(x)` with `g^an g_nb = delta` to machine precision.
    pub fn inverse_metric_at(&self, x: &[f64]) -> Result<SqMatrix<f64>> {
        self.check_chart(x)?;
        let (inv, _) = self.metric_dual(&lift(x)).value_part().inverse()?;
        Ok(inv)
    }

    pub fn inverse_metric_dual(&self, x: &[Dual]) -> Result<SqMatrix<Dual>> {
        let (inv, _) = self.metric_dual(x).inverse()?;
        Ok(inv)
    }

    /// All coordinate partials `d g_ab / d x^k`, exact via dual seeds.
    pub fn metric_partials(&self, x: &[f64]) -> Vec<SqMatrix<f64>> {
        (0..self.dim)
            .map(|k| self.metric_dual(&lift_seeded(x, k)).deriv_part())
            .collect()
    }

    /// `Gamma^a_bc(x)`, symmetric in `bc` by construction.
    pub fn christoffel_at(&self, x: &[f64]) -> Result<Christoffel> {
        self.check_chart(x)?;
        let ginv = self.inverse_metric_at(x)?;
        let dg = self.metric_partials(x);
        let d = self.dim;
        let mut gamma = Christoffel::zeros(d);
        for a in 0..d {
            for b in 0..d {
                for c in b..d {
                    let mut acc = 0.0;
                    for n in 0..d {
                        acc += 0.5 * ginv[(a, n)] * (dg[b][(n, c)] + dg[c][(n, b)] - dg[n][(b, c)]);
                    }
                    gamma.set(a, b, c, acc);
                    gamma.set(a, c, b, acc);
                }
            }
        }
        Ok(gamma)
    }

    /// Orthonormal frame by signature-aware Gram-Schmidt on the coordinate
    /// basis, timelike leg first for the catalog Lorentzian charts.
    pub fn frame_at(&self, x: &[f64]) -> Result<FrameField<f64>> {
        self.check_chart(x)?;
        let g = self.metric_dual(&lift(x)).value_part();
        frame_from_metric(&g, &self.signature)
    }

    /// Frame construction on dual coordinates: differentiates the frame.
    pub fn frame_dual(&self, x: &[Dual]) -> Result<FrameField<Dual>> {
        let g = self.metric_dual(x);
        frame_from_metric(&g, &self.signature)
    }

    /// Ricci rotation coefficients `RR^m̂_{a n̂} = (∇_a e_n̂^k) e^m̂_k`.
    ///
    /// Index layout of the result: `[m̂][a][n̂]`.
    pub fn ricci_rotation_at(&self, x: &[f64]) -> Result<RicciRotation> {
        let d = self.dim;
        let frame = self.frame_at(x)?;
        let gamma = self.christoffel_at(x)?;
        // d_a legs via one dual pass per coordinate
        let mut dlegs = Vec::with_capacity(d);
        for a in 0..d {
            let fd = self.frame_dual(&lift_seeded(x, a))?;
            dlegs.push(fd.legs.deriv_part());
        }
        let mut rr = RicciRotation::zeros(d);
        for mh in 0..d {
            for a in 0..d {
                for nh in 0..d {
                    let mut acc = 0.0;
                    for k in 0..d {
                        // ∇_a e_n̂^k = ∂_a e_n̂^k + Γ^k_am e_n̂^m
                        let mut cov = dlegs[a][(nh, k)];
                        for m in 0..d {
                            cov += gamma.get(k, a, m) * frame.legs[(nh, m)];
                        }
                        acc += cov * frame.coframe[(mh, k)];
                    }
                    rr.set(mh, a, nh, acc);
                }
            }
        }
        Ok(rr)
    }

    /// Max-abs of the reassembled `∇_c g_ab`; vanishes for a metric-compatible
    /// connection.
    pub fn metric_compatibility_residual(&self, x: &[f64]) -> Result<f64> {
        let d = self.dim;
        let g = self.metric_at(x)?;
        let dg = self.metric_partials(x);
        let gamma = self.christoffel_at(x)?;
        let mut worst: f64 = 0.0;
        for c in 0..d {
            for a in 0..d {
                for b in 0..d {
                    let mut r = dg[c][(a, b)];
                    for n in 0..d {
                        r -= gamma.get(n, c, a) * g[(n, b)] + gamma.get(n, c, b) * g[(a, n)];
                    }
                    worst = worst.max(r.abs());
                }
            }
        }
        Ok(worst)
    }
}

/// Connection coefficients `Gamma^a_bc` at a point; `data[a][b][c]`.
#[derive(Clone, Debug)]
pub struct Christoffel {
    dim: usize,
    data: Vec<f64>,
}

impl Christoffel {
    pub fn zeros(dim: usize) -> Self {
        Christoffel {
            dim,
            data: vec![0.0; dim * dim * dim],
        }
    }
    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.data[(a * self.dim + b) * self.dim + c]
    }
    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, v: f64) {
        self.data[(a * self.dim + b) * self.dim + c] = v;
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Orthonormal frame at a point.
///
/// `legs[â][a] = e_â^a` (frame vectors as rows), `coframe[â][a] = e^â_a`
/// with `e^â_a e_b̂^a = δ^â_b̂`.
#[derive(Clone, Debug)]
pub struct FrameField<T = f64> {
    pub legs: SqMatrix<T>,
    pub coframe: SqMatrix<T>,
}

impl FrameField<Dual> {
    pub fn value_part(&self) -> FrameField<f64> {
        FrameField {
            legs: self.legs.value_part(),
            coframe: self.coframe.value_part(),
        }
    }
}

fn frame_from_metric<T: Scalar>(g: &SqMatrix<T>, signature: &[i8]) -> Result<FrameField<T>> {
    let d = g.dim();
    let mut legs: Vec<Vec<T>> = Vec::with_capacity(d);
    for ah in 0..d {
        // start from the coordinate basis vector, subtract previous legs
        let mut v = vec![T::ZERO; d];
        v[ah] = T::ONE;
        for (bh, leg) in legs.iter().enumerate() {
            let inner = quadratic(g, &v, leg);
            let sign = T::from_f64(f64::from(signature[bh]));
            for k in 0..d {
                let s = sign * inner * leg[k];
                v[k] -= s;
            }
        }
        let norm2 = quadratic(g, &v, &v);
        let expected = f64::from(signature[ah]);
        if norm2.value() * expected <= 0.0 || norm2.value().abs() < 1e-14 {
            return Err(Error::SignatureMismatch {
                expected: signature.to_vec(),
                found: g.map(|t| t.value()).symmetric_eigenvalues()
                    .iter()
                    .map(|&e| if e < 0.0 { -1 } else { 1 })
                    .collect(),
            });
        }
        let inv_norm = T::ONE / norm2.abs().sqrt();
        for k in 0..d {
            v[k] *= inv_norm;
        }
        legs.push(v);
    }
    let legs = SqMatrix::from_fn(d, |ah, a| legs[ah][a]);
    // coframe rows satisfy coframe[â] . legs[b̂] = δ: coframe = (legs^T)^{-1} rows
    let (legs_inv, _) = legs.inverse()?;
    let coframe = legs_inv.transpose();
    Ok(FrameField { legs, coframe })
}

fn quadratic<T: Scalar>(g: &SqMatrix<T>, u: &[T], v: &[T]) -> T {
    let d = g.dim();
    let mut acc = T::ZERO;
    for a in 0..d {
        for b in 0..d {
            acc += u[a] * g[(a, b)] * v[b];
        }
    }
    acc
}

/// Ricci rotation coefficients; `data[m̂][a][n̂]`.
#[derive(Clone, Debug)]
pub struct RicciRotation {
    dim: usize,
    data: Vec<f64>,
}

impl RicciRotation {
    pub fn zeros(dim: usize) -> Self {
        RicciRotation {
            dim,
            data: vec![0.0; dim * dim * dim],
        }
    }
    #[inline]
    pub fn get(&self, mh: usize, a: usize, nh: usize) -> f64 {
        self.data[(mh * self.dim + a) * self.dim + nh]
    }
    #[inline]
    pub fn set(&mut self, mh: usize, a: usize, nh: usize, v: f64) {
        self.data[(mh * self.dim + a) * self.dim + nh] = v;
    }
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Max violation of `RR_{a m̂ n̂} = -RR_{a n̂ m̂}` after lowering with eta.
    pub fn antisymmetry_residual(&self, signature: &[i8]) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for a in 0..d {
            for mh in 0..d {
                for nh in 0..d {
                    let low_mn = f64::from(signature[mh]) * self.get(mh, a, nh);
                    let low_nm = f64::from(signature[nh]) * self.get(nh, a, mh);
                    worst = worst.max((low_mn + low_nm).abs());
                }
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spacetimes;

    #[test]
    fn minkowski_metric_and_connection() {
        let entry = spacetimes::minkowski4();
        let x = [0.3, 1.0, -2.0, 0.7];
        let g = entry.metric.metric_at(&x).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j {
                    if i == 0 {
                        -1.0
                    } else {
                        1.0
                    }
                } else {
                    0.0
                };
                assert_eq!(g[(i, j)], expect);
            }
        }
        let gamma = entry.metric.christoffel_at(&x).unwrap();
        assert_eq!(gamma.max_abs(), 0.0);
        // identity frame
        let frame = entry.metric.frame_at(&x).unwrap();
        assert!(frame
            .legs
            .sub(&SqMatrix::<f64>::identity(4))
            .max_abs()
            .abs()
            < 1e-15);
        let rr = entry.metric.ricci_rotation_at(&x).unwrap();
        let mut worst: f64 = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    worst = worst.max(rr.get(a, b, c).abs());
                }
            }
        }
        assert_eq!(worst, 0.0);
    }

    #[test]
    fn schwarzschild_documented_values() {
        let entry = spacetimes::schwarzschild(1.0);
        let x = [0.0, 4.0, std::f64::consts::FRAC_PI_2, 0.0];
        let g = entry.metric.metric_at(&x).unwrap();
        assert!((g[(0, 0)] + 0.5).abs() < 1e-15, "g_tt = -(1 - 2M/r) = -0.5");
        let ginv = entry.metric.inverse_metric_at(&x).unwrap();
        assert!((ginv[(0, 0)] + 2.0).abs() < 1e-13, "g^tt = -2");
        let gamma = entry.metric.christoffel_at(&x).unwrap();
        // Gamma^r_tt = (M/r^2)(1 - 2M/r) = (1/16)(1/2)
        assert!((gamma.get(1, 0, 0) - 0.03125).abs() < 1e-14);
    }

    #[test]
    fn chart_violation_names_predicate() {
        let entry = spacetimes::schwarzschild(1.0);
        let x = [0.0, 1.5, 1.0, 0.0];
        let err = entry.metric.metric_at(&x).unwrap_err();
        match err {
            Error::OutsideChart { what } => assert!(what.contains('r'), "got: {what}"),
            other => panic!("expected chart error, got {other:?}"),
        }
    }

    #[test]
    fn frame_orthonormalizes_kerr() {
        let entry = spacetimes::kerr(1.0, 0.9);
        let x = [0.0, 5.0, 1.1, 0.4];
        let frame = entry.metric.frame_at(&x).unwrap();
        let g = entry.metric.metric_at(&x).unwrap();
        let eget = frame.legs.matmul(&g).matmul(&frame.legs.transpose());
        let eta = entry.metric.eta();
        assert!(eget.sub(&eta).max_abs() < 1e-12);
        // coframe . legs = identity
        let mut worst: f64 = 0.0;
        for ah in 0..4 {
            for bh in 0..4 {
                let mut acc = 0.0;
                for a in 0..4 {
                    acc += frame.coframe[(ah, a)] * frame.legs[(bh, a)];
                }
                let expect = if ah == bh { 1.0 } else { 0.0 };
                worst = worst.max((acc - expect).abs());
            }
        }
        assert!(worst < 1e-12);
    }

    #[test]
    fn ricci_rotation_antisymmetry_schwarzschild() {
        let entry = spacetimes::schwarzschild(1.0);
        let x = [0.2, 6.3, 0.9, 2.0];
        let rr = entry.metric.ricci_rotation_at(&x).unwrap();
        assert!(rr.antisymmetry_residual(&entry.metric.signature) < 1e-10);
    }

    #[test]
    fn diagonal_metric_frame_is_reciprocal_square_roots() {
        let entry = spacetimes::schwarzschild(1.0);
        let x = [0.0, 5.0, 1.1, 0.7];
        let g = entry.metric.metric_at(&x).unwrap();
        let frame = entry.metric.frame_at(&x).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let expect = if a == b {
                    1.0 / g[(a, a)].abs().sqrt()
                } else {
                    0.0
                };
                assert!((frame.legs[(a, b)] - expect).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn christoffel_exactly_symmetric_in_lower_indices() {
        let entry = spacetimes::kerr(1.0, 0.9);
        let x = [0.0, 4.4, 0.7, 1.9];
        let gamma = entry.metric.christoffel_at(&x).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    assert_eq!(gamma.get(a, b, c), gamma.get(a, c, b));
                }
            }
        }
    }

    #[test]
    fn two_sphere_ricci_rotation_matches_finite_differences() {
        use crate::dual::Scalar as _;
        // ds^2 = dtheta^2 + sin^2(theta) dphi^2; oracle rebuilds
        // RR^m^_{a n^} from finite differences of the frame legs.
        let metric = MetricSpec::new(
            2,
            vec![1, 1],
            Arc::new(|x: &[Dual]| {
                let sin = x[0].sin();
                let mut g = SqMatrix::zeros(2);
                g[(0, 0)] = Dual::constant(1.0);
                g[(1, 1)] = sin * sin;
                g
            }),
            MetricSpec::open_chart(),
        );
        let x = [std::f64::consts::FRAC_PI_3, 0.4];
        let rr = metric.ricci_rotation_at(&x).unwrap();
        let frame = metric.frame_at(&x).unwrap();
        let gamma = metric.christoffel_at(&x).unwrap();
        let h = 1e-6;
        for a in 0..2 {
            let legs = |s: f64| {
                let mut xs = x;
                xs[a] += s;
                metric.frame_at(&xs).unwrap().legs
            };
            let dlegs = legs(h).sub(&legs(-h)).scale(1.0 / (2.0 * h));
            for mh in 0..2 {
                for nh in 0..2 {
                    let mut expect = 0.0;
                    for k in 0..2 {
                        let mut cov = dlegs[(nh, k)];
                        for m in 0..2 {
                            cov += gamma.get(k, a, m) * frame.legs[(nh, m)];
                        }
                        expect += cov * frame.coframe[(mh, k)];
                    }
                    assert!(
                        (rr.get(mh, a, nh) - expect).abs() < 1e-8,
                        "RR^{mh}_({a} {nh}): {} vs fd {expect}",
                        rr.get(mh, a, nh)
                    );
                }
            }
        }
        // the classic -cos/sin pattern: the only nonzero coefficients are
        // RR^0_{phi 1} = -cos(theta) and RR^1_{phi 0} = +cos(theta)
        assert!((rr.get(0, 1, 1) + x[0].cos()).abs() < 1e-10);
        assert!((rr.get(1, 1, 0) - x[0].cos()).abs() < 1e-10);
    }
}
