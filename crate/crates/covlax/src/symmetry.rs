//! Killing-Yano and closed conformal Killing-Yano structures.
//!
//! `verify_ky` / `verify_ccky` are pointwise PDE residuals used both as tests
//! and as acceptance gates for literature-sourced components. The conserved
//! tensorial quantities are
//!
//! ```text
//! kappa = phi . p          mu  = h ^ p
//! Phi   = kappa ^ p        F   = mu . p = p^2 h o P x ... x P
//! ```
//!
//! with `.` the last-slot contraction and `P` the projector orthogonal to the
//! momentum.

use std::sync::Arc;

use crate::dual::{lift, lift_seeded, Dual};
use crate::error::{Error, Result};
use crate::forms::{all_tuples, antisymmetrize_slots, tuple_index, Form};
use crate::linalg::{dot, SqMatrix};
use crate::manifold::MetricSpec;
use crate::phasespace::PhasePoint;

/// Threshold on `|p^2| / max(1, |p|_inf^2)` below which the momentum counts
/// as null and projector-based constructions refuse to run.
pub const NULL_MOMENTUM_THRESHOLD: f64 = 1e-12;

/// Position-dependent antisymmetric form field, evaluable on dual
/// coordinates.
#[derive(Clone)]
pub struct FormField {
    rank: usize,
    eval: Arc<dyn Fn(&[Dual]) -> Form<Dual> + Send + Sync>,
}

impl FormField {
    pub fn new(rank: usize, eval: Arc<dyn Fn(&[Dual]) -> Form<Dual> + Send + Sync>) -> Self {
        FormField { rank, eval }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn at_dual(&self, x: &[Dual]) -> Form<Dual> {
        (self.eval)(x)
    }

    pub fn at(&self, x: &[f64]) -> Form<f64> {
        let fd = self.at_dual(&lift(x));
        let mut out = Form::zero(fd.dim(), fd.rank());
        for combo in crate::forms::increasing_tuples(fd.dim(), fd.rank()) {
            out.set_antisym(&combo, fd.get(&combo).re);
        }
        out
    }
}

/// Killing-Yano candidate; gated by [`verify_ky`].
#[derive(Clone)]
pub struct KyField(pub FormField);

/// Closed conformal Killing-Yano candidate; gated by [`verify_ccky`].
#[derive(Clone)]
pub struct CckyField(pub FormField);

/// `nabla_a omega_{a1..ar}` at `x`, one rank-`r` form per derivative index.
pub fn covariant_form_derivative(
    metric: &MetricSpec,
    field: &FormField,
    x: &[f64],
) -> Result<Vec<Form<f64>>> {
    metric.check_chart(x)?;
    let d = metric.dim;
    let r = field.rank();
    let gamma = metric.christoffel_at(x)?;
    let value = field.at(x);
    let mut out = Vec::with_capacity(d);
    for a in 0..d {
        let seeded = field.at_dual(&lift_seeded(x, a));
        let mut nabla = Form::zero(d, r);
        for combo in crate::forms::increasing_tuples(d, r) {
            let mut acc = seeded.get(&combo).du;
            for (slot, &bi) in combo.iter().enumerate() {
                for k in 0..d {
                    let mut swapped = combo.clone();
                    swapped[slot] = k;
                    acc -= gamma.get(k, a, bi) * value.get(&swapped);
                }
            }
            nabla.set_antisym(&combo, acc);
        }
        out.push(nabla);
    }
    Ok(out)
}

/// Max-abs of `nabla_a phi_{a1..ar} - nabla_[a phi_{a1..ar]}`.
pub fn verify_ky(metric: &MetricSpec, phi: &KyField, x: &[f64]) -> Result<f64> {
    let d = metric.dim;
    let r = phi.0.rank();
    let nabla = covariant_form_derivative(metric, &phi.0, x)?;
    // dense rank-(r+1) array T_{a a1..ar}
    let mut dense = vec![0.0; d.pow((r + 1) as u32)];
    for idx in all_tuples(d, r + 1) {
        dense[tuple_index(d, &idx)] = nabla[idx[0]].get(&idx[1..]);
    }
    let slots: Vec<usize> = (0..=r).collect();
    let alt = antisymmetrize_slots(d, r + 1, &dense, &slots);
    let mut worst: f64 = 0.0;
    for (t, a) in dense.iter().zip(&alt) {
        worst = worst.max((t - a).abs());
    }
    Ok(worst)
}

/// The divergence form `xi_{a2..ar} = nabla_n h^n_{a2..ar} / (D - r + 1)`.
pub fn ccky_xi(metric: &MetricSpec, h: &CckyField, x: &[f64]) -> Result<Form<f64>> {
    let d = metric.dim;
    let r = h.0.rank();
    let nabla = covariant_form_derivative(metric, &h.0, x)?;
    let ginv = metric.inverse_metric_at(x)?;
    let mut xi = Form::zero(d, r - 1);
    for combo in crate::forms::increasing_tuples(d, r - 1) {
        let mut acc = 0.0;
        for n in 0..d {
            for k in 0..d {
                let mut idx = vec![k];
                idx.extend_from_slice(&combo);
                acc += ginv[(n, k)] * nabla[n].get(&idx);
            }
        }
        xi.set_antisym(&combo, acc / (d - r + 1) as f64);
    }
    Ok(xi)
}

/// Max-abs of `nabla_a h_{a1..ar} - r g_{a[a1} xi_{a2..ar]}`.
pub fn verify_ccky(metric: &MetricSpec, h: &CckyField, x: &[f64]) -> Result<f64> {
    let d = metric.dim;
    let r = h.0.rank();
    let nabla = covariant_form_derivative(metric, &h.0, x)?;
    let xi = ccky_xi(metric, h, x)?;
    let g = metric.metric_at(x)?;
    // dense U_{a a1..ar} = g_{a a1} xi_{a2..ar}, antisymmetrized over a1..ar
    let mut dense = vec![0.0; d.pow((r + 1) as u32)];
    for idx in all_tuples(d, r + 1) {
        dense[tuple_index(d, &idx)] = g[(idx[0], idx[1])] * xi.get(&idx[2..]);
    }
    let slots: Vec<usize> = (1..=r).collect();
    let alt = antisymmetrize_slots(d, r + 1, &dense, &slots);
    let mut worst: f64 = 0.0;
    for idx in all_tuples(d, r + 1) {
        let flat = tuple_index(d, &idx);
        let target = r as f64 * alt[flat];
        worst = worst.max((nabla[idx[0]].get(&idx[1..]) - target).abs());
    }
    Ok(worst)
}

/// `kappa = phi . p` (last-slot contraction, momentum raised by the metric).
pub fn kappa(phi: &KyField, metric: &MetricSpec, z: &PhasePoint) -> Result<Form<f64>> {
    let ginv = metric.inverse_metric_at(&z.x)?;
    phi.0.at(&z.x).contract(&z.p, &ginv)
}

/// `mu = h ^ p` (momentum as a 1-form). Errors when `r + 1 > D`.
pub fn mu(h: &CckyField, metric: &MetricSpec, z: &PhasePoint) -> Result<Form<f64>> {
    metric.check_chart(&z.x)?;
    let hv = h.0.at(&z.x);
    if hv.rank() + 1 > metric.dim {
        return Err(Error::Rank(format!(
            "mu = h ^ p has rank {} > dimension {}",
            hv.rank() + 1,
            metric.dim
        )));
    }
    Ok(hv.wedge1(&z.p))
}

/// `Phi = kappa ^ p`.
pub fn phi_form(phi: &KyField, metric: &MetricSpec, z: &PhasePoint) -> Result<Form<f64>> {
    Ok(kappa(phi, metric, z)?.wedge1(&z.p))
}

/// `F = mu . p`.
pub fn f_form(h: &CckyField, metric: &MetricSpec, z: &PhasePoint) -> Result<Form<f64>> {
    let ginv = metric.inverse_metric_at(&z.x)?;
    mu(h, metric, z)?.contract(&z.p, &ginv)
}

/// `F` by the projector route `p^2 h o P x ... x P`; oracle for [`f_form`].
pub fn f_form_projected(h: &CckyField, metric: &MetricSpec, z: &PhasePoint) -> Result<Form<f64>> {
    let d = metric.dim;
    let proj = projector(metric, z)?;
    let p2 = z.p_squared(metric)?;
    let hv = h.0.at(&z.x);
    let r = hv.rank();
    let mut out = Form::zero(d, r);
    for combo in crate::forms::increasing_tuples(d, r) {
        let mut acc = 0.0;
        for nidx in all_tuples(d, r) {
            let mut weight = 1.0;
            for k in 0..r {
                weight *= proj[(nidx[k], combo[k])];
            }
            if weight != 0.0 {
                acc += hv.get(&nidx) * weight;
            }
        }
        out.set_antisym(&combo, p2 * acc);
    }
    Ok(out)
}

/// `P^a_b = delta^a_b - p^a p_b / p^2`. Refuses nearly null momenta.
pub fn projector(metric: &MetricSpec, z: &PhasePoint) -> Result<SqMatrix<f64>> {
    let d = metric.dim;
    let ginv = metric.inverse_metric_at(&z.x)?;
    let p_up = ginv.matvec(&z.p);
    let p2 = dot(&z.p, &p_up);
    let scale = z.p.iter().fold(0.0f64, |m, v| m.max(v.abs())).powi(2);
    if p2.abs() <= NULL_MOMENTUM_THRESHOLD * scale.max(1.0) {
        return Err(Error::NullMomentum { p_squared: p2 });
    }
    Ok(SqMatrix::from_fn(d, |a, b| {
        let delta = if a == b { 1.0 } else { 0.0 };
        delta - p_up[a] * z.p[b] / p2
    }))
}

/// `k^a_b = phi^{a k l ..} phi_{b k l ..}` (all-but-first slots contracted).
pub fn killing_tensor_from_ky(
    metric: &MetricSpec,
    phi: &KyField,
    x: &[f64],
) -> Result<SqMatrix<f64>> {
    let d = metric.dim;
    let ginv = metric.inverse_metric_at(x)?;
    let value = phi.0.at(x);
    let raised = value.raise_all(&ginv);
    let r = value.rank();
    let rest = all_tuples(d, r - 1);
    let mut k = SqMatrix::<f64>::zeros(d);
    for a in 0..d {
        for b in 0..d {
            let mut acc = 0.0;
            for tail in &rest {
                let mut ia = vec![a];
                ia.extend_from_slice(tail);
                let mut ib = vec![b];
                ib.extend_from_slice(tail);
                acc += raised.get(&ia) * value.get(&ib);
            }
            k[(a, b)] = acc;
        }
    }
    Ok(k)
}

/// `k^{ab} p_a p_b` for the KY-built Killing tensor.
pub fn killing_quadratic(metric: &MetricSpec, phi: &KyField, z: &PhasePoint) -> Result<f64> {
    let k = killing_tensor_from_ky(metric, phi, &z.x)?;
    let ginv = metric.inverse_metric_at(&z.x)?;
    let p_up = ginv.matvec(&z.p);
    // k^a_b p_a p^b
    Ok(dot(&z.p, &k.matvec(&p_up)))
}

/// Kappa/mu/Phi/F as dual-capable evaluators for covariant-derivative tests.
pub fn conserved_form_observable(
    metric: &MetricSpec,
    kind: ConservedFormKind,
) -> crate::phasespace::TensorObservable {
    let metric = metric.clone();
    let (rank, eval): (
        usize,
        Arc<dyn Fn(&[Dual], &[Dual]) -> Form<Dual> + Send + Sync>,
    ) = match kind {
        ConservedFormKind::Kappa(phi) => {
            let r = phi.0.rank() - 1;
            let m = metric.clone();
            (
                r,
                Arc::new(move |x: &[Dual], p: &[Dual]| {
                    let ginv = m.inverse_metric_dual(x).expect("metric inversion");
                    phi.0.at_dual(x).contract(p, &ginv).expect("contraction")
                }),
            )
        }
        ConservedFormKind::Mu(h) => {
            let r = h.0.rank() + 1;
            (
                r,
                Arc::new(move |x: &[Dual], p: &[Dual]| h.0.at_dual(x).wedge1(p)),
            )
        }
        ConservedFormKind::PhiForm(phi) => {
            let r = phi.0.rank();
            let m = metric.clone();
            (
                r,
                Arc::new(move |x: &[Dual], p: &[Dual]| {
                    let ginv = m.inverse_metric_dual(x).expect("metric inversion");
                    phi.0
                        .at_dual(x)
                        .contract(p, &ginv)
                        .expect("contraction")
                        .wedge1(p)
                }),
            )
        }
        ConservedFormKind::FForm(h) => {
            let r = h.0.rank();
            let m = metric.clone();
            (
                r,
                Arc::new(move |x: &[Dual], p: &[Dual]| {
                    let ginv = m.inverse_metric_dual(x).expect("metric inversion");
                    h.0.at_dual(x)
                        .wedge1(p)
                        .contract(p, &ginv)
                        .expect("contraction")
                }),
            )
        }
    };
    crate::phasespace::TensorObservable {
        valence: vec![crate::phasespace::Variance::Down; rank],
        eval: Arc::new(move |x, p| eval(x, p).components().to_vec()),
    }
}

#[derive(Clone)]
pub enum ConservedFormKind {
    Kappa(KyField),
    Mu(CckyField),
    PhiForm(KyField),
    FForm(CckyField),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spacetimes;

    #[test]
    fn constant_two_form_is_ky_in_flat_space() {
        let entry = spacetimes::euclidean3();
        let omega = Arc::new(move |x: &[Dual]| {
            let mut f = Form::<Dual>::zero(3, 2);
            let _ = x;
            f.set_antisym(&[0, 1], Dual::constant(0.7));
            f.set_antisym(&[0, 2], Dual::constant(-1.2));
            f.set_antisym(&[1, 2], Dual::constant(0.4));
            f
        });
        let phi = KyField(FormField::new(2, omega));
        let r = verify_ky(&entry.metric, &phi, &[0.4, -1.0, 2.2]).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn flat_ky_family_passes_gate() {
        // phi_ab = omega_ab + mu eps_abc x^c is the position-dependent flat
        // KY 2-form family in D=3.
        let entry = spacetimes::euclidean3();
        let phi = spacetimes::flat_ky_two_form(
            [0.3, -0.8, 1.1], // omega components 01, 02, 12
            0.9,              // mu
        );
        for x in [[0.5, 1.0, -0.3], [2.0, -1.0, 0.7], [0.1, 0.2, 0.3]] {
            let r = verify_ky(&entry.metric, &phi, &x).unwrap();
            assert!(r < 1e-12, "residual {r}");
        }
    }

    #[test]
    fn flat_ccky_rank1() {
        // h_a = x_a: nabla_a h_b = g_ab, xi = 1.
        let entry = spacetimes::euclidean3();
        let h = entry.ccky("radial").unwrap();
        let x = [1.0, -2.0, 0.5];
        let r = verify_ccky(&entry.metric, &h, &x).unwrap();
        assert!(r < 1e-14);
        let xi = ccky_xi(&entry.metric, &h, &x).unwrap();
        assert!((xi.get(&[]) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn projector_properties() {
        let entry = spacetimes::euclidean3();
        let z = PhasePoint::new(vec![0.0; 3], vec![1.0, 0.0, 0.0]);
        let p = projector(&entry.metric, &z).unwrap();
        for (i, expect) in [0.0, 1.0, 1.0].iter().enumerate() {
            assert!((p[(i, i)] - expect).abs() < 1e-15);
        }
        // idempotence
        let pp = p.matmul(&p);
        assert!(pp.sub(&p).max_abs() < 1e-13);
        // kills the momentum
        let pv = p.matvec(&[1.0, 0.0, 0.0]);
        assert!(pv.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn null_momentum_rejected() {
        let entry = spacetimes::minkowski4();
        let z = PhasePoint::new(vec![0.0; 4], vec![1.0, 1.0, 0.0, 0.0]);
        match projector(&entry.metric, &z) {
            Err(Error::NullMomentum { .. }) => {}
            other => panic!("expected null-momentum error, got {other:?}"),
        }
    }

    #[test]
    fn mu_of_radial_ccky_is_basis_wedge() {
        // h_a = x_a at x = e_x, p = e_y: mu = x ^ p = dx ^ dy
        let entry = spacetimes::euclidean3();
        let h = entry.ccky("radial").unwrap();
        let z = PhasePoint::new(vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]);
        let m = mu(&h, &entry.metric, &z).unwrap();
        assert!((m.get(&[0, 1]) - 1.0).abs() < 1e-15);
        assert!((m.get(&[1, 0]) + 1.0).abs() < 1e-15);
        assert_eq!(m.get(&[0, 2]), 0.0);
    }

    #[test]
    fn radial_f_form_componentwise() {
        // flat space, h_a = x_a: F = (h^p).p has components
        // F_a = p^2 x_a - (x.p) p_a
        let entry = spacetimes::euclidean3();
        let h = entry.ccky("radial").unwrap();
        let z = PhasePoint::new(vec![1.2, -0.5, 0.8], vec![0.4, 1.0, -0.3]);
        let f = f_form(&h, &entry.metric, &z).unwrap();
        let p2: f64 = z.p.iter().map(|v| v * v).sum();
        let xp: f64 = z.x.iter().zip(&z.p).map(|(a, b)| a * b).sum();
        for a in 0..3 {
            let expect = p2 * z.x[a] - xp * z.p[a];
            assert!((f.get(&[a]) - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn constant_two_form_killing_tensor_is_constant_contraction() {
        let entry = spacetimes::euclidean3();
        let omega = [0.7, -1.2, 0.4]; // components 01, 02, 12
        let phi = KyField(FormField::new(
            2,
            Arc::new(move |_x: &[Dual]| {
                let mut f = Form::<Dual>::zero(3, 2);
                f.set_antisym(&[0, 1], Dual::constant(omega[0]));
                f.set_antisym(&[0, 2], Dual::constant(omega[1]));
                f.set_antisym(&[1, 2], Dual::constant(omega[2]));
                f
            }),
        ));
        let k1 = killing_tensor_from_ky(&entry.metric, &phi, &[0.0, 0.0, 0.0]).unwrap();
        let k2 = killing_tensor_from_ky(&entry.metric, &phi, &[2.0, -1.0, 5.0]).unwrap();
        assert!(k1.sub(&k2).max_abs() < 1e-15, "constant field, constant k");
        // direct loop: k^a_b = omega^{an} omega_{bn} (Euclidean: indices flat)
        let phi_val = phi.0.at(&[0.0; 3]);
        for a in 0..3 {
            for b in 0..3 {
                let mut expect = 0.0;
                for n in 0..3 {
                    expect += phi_val.get(&[a, n]) * phi_val.get(&[b, n]);
                }
                assert!((k1[(a, b)] - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn mu_rank_overflow_rejected() {
        let entry = spacetimes::euclidean3();
        // fake rank-3 "ccky" in D=3: wedging with p would be rank 4
        let ev = Arc::new(move |_x: &[Dual]| {
            let mut f = Form::<Dual>::zero(3, 3);
            f.set_antisym(&[0, 1, 2], Dual::constant(1.0));
            f
        });
        let h = CckyField(FormField::new(3, ev));
        let z = PhasePoint::new(vec![0.0; 3], vec![1.0, 0.0, 0.0]);
        assert!(matches!(
            mu(&h, &entry.metric, &z),
            Err(Error::Rank(_))
        ));
    }
}
