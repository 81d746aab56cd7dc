//! Cross-module identities: flow-splitting consistency, Leibniz rule,
//! trace relations, determinant-identity structure, and the duality gates.

use std::sync::Arc;

use covlax::cli::random_phase_points;
use covlax::dual::{lift, lift_seeded, Dual, Scalar as _};
use covlax::dynamics::hamilton_rhs;
use covlax::forms::{hodge, increasing_tuples, Form};
use covlax::lax::{genkt_coefficients, genkt_with_momentum, trace_invariants, LaxOperator};
use covlax::linalg::{dot, SqMatrix};
use covlax::phasespace::{
    covariant_time_derivative, flow_split, observable_time_derivative, poisson_bracket,
    HamiltonianSpec, PhasePoint, ScalarObservable, TensorObservable, Variance,
};
use covlax::spacetimes;
use covlax::symmetry::{killing_quadratic, verify_ccky, verify_ky, CckyField, FormField, KyField};

#[test]
fn dual_derivatives_match_finite_differences() {
    for entry in spacetimes::catalog() {
        for z in random_phase_points(&entry, 11, 10) {
            let x = &z.x;
            let ad = entry.metric.metric_partials(x);
            let h = 1e-5;
            for k in 0..entry.metric.dim {
                let step = |s: f64| {
                    let mut xs = x.clone();
                    xs[k] += s;
                    entry.metric.metric_at(&xs).unwrap()
                };
                let coarse = step(h).sub(&step(-h)).scale(1.0 / (2.0 * h));
                let fine = step(h / 2.0).sub(&step(-h / 2.0)).scale(1.0 / h);
                let richardson = fine.scale(4.0 / 3.0).sub(&coarse.scale(1.0 / 3.0));
                let scale = ad[k].max_abs().max(1.0);
                assert!(
                    ad[k].sub(&richardson).max_abs() / scale <= 1e-8,
                    "{}: dg/dx^{k} mismatch",
                    entry.name
                );
            }
        }
    }
}

#[test]
fn hamiltonian_self_bracket_vanishes() {
    let entry = spacetimes::kerr(1.0, 0.9);
    let metric = entry.metric.clone();
    let h = HamiltonianSpec::geodesic(1.0);
    let m = metric.clone();
    let h2 = h.clone();
    let h_obs: ScalarObservable =
        Arc::new(move |x, p| h2.eval_dual(&m, x, p).expect("H evaluation"));
    let z = PhasePoint::new(vec![0.0, 6.5, 1.1, 0.2], vec![-0.9, 0.3, 0.5, 2.0]);
    assert!(poisson_bracket(&h_obs, &h_obs, &z).abs() <= 1e-15);
}

#[test]
fn coordinate_momentum_equation_matches_split() {
    // pdot_a = f_a + u^n Gamma^k_{n a} p_k, and for the geodesic Hamiltonian
    // pdot_a = -(1/2m) dg^{kl}/dx^a p_k p_l.
    let entry = spacetimes::kerr(1.0, 0.9);
    let metric = entry.metric.clone();
    let mass = 1.3;
    let h = HamiltonianSpec::geodesic(mass);
    for z in random_phase_points(&entry, 3, 10) {
        let (_, pdot) = hamilton_rhs(&h, &metric, &z).unwrap();
        let split = flow_split(&h, &metric, &z).unwrap();
        let gamma = metric.christoffel_at(&z.x).unwrap();
        for a in 0..4 {
            let mut expect = split.f[a];
            for n in 0..4 {
                for k in 0..4 {
                    expect += split.u[n] * gamma.get(k, n, a) * z.p[k];
                }
            }
            assert!(
                (pdot[a] - expect).abs() <= 1e-10 * (1.0 + expect.abs()),
                "pdot_{a}: {} vs {}",
                pdot[a],
                expect
            );
            // direct coordinate form via the derivative of the inverse metric
            let dginv = {
                let xd = lift_seeded(&z.x, a);
                metric.inverse_metric_dual(&xd).unwrap().deriv_part()
            };
            let mut direct = 0.0;
            for k in 0..4 {
                for l in 0..4 {
                    direct -= 0.5 / mass * dginv[(k, l)] * z.p[k] * z.p[l];
                }
            }
            assert!((pdot[a] - direct).abs() <= 1e-10 * (1.0 + direct.abs()));
        }
    }
}

#[test]
fn charged_force_matches_parallel_transport_differences() {
    // f_a = -(covariant x-derivative of H at parallel-fixed p), checked by a
    // finite difference with p transported to first order along the step.
    let entry = spacetimes::kerr_charged(1.0, 0.9, 0.05);
    let metric = entry.metric.clone();
    let e = entry.coupling.unwrap();
    let xi = entry.primary_xi.clone().unwrap();
    let h = HamiltonianSpec::charged(1.0, e, xi);
    let z = PhasePoint::new(vec![0.0, 7.0, 1.2, 0.4], vec![-0.95, 0.1, 0.7, 2.4]);
    let split = flow_split(&h, &metric, &z).unwrap();
    let gamma = metric.christoffel_at(&z.x).unwrap();
    let eps = 1e-6;
    for a in 0..4 {
        let value = |s: f64| {
            let mut x = z.x.clone();
            x[a] += s;
            // parallel transport of p along the coordinate step (first order)
            let mut p = z.p.clone();
            for n in 0..4 {
                let mut corr = 0.0;
                for k in 0..4 {
                    corr += gamma.get(k, a, n) * z.p[k];
                }
                p[n] += s * corr;
            }
            h.value(&metric, &PhasePoint::new(x, p)).unwrap()
        };
        let fd = (value(eps) - value(-eps)) / (2.0 * eps);
        assert!(
            (split.f[a] + fd).abs() <= 1e-8 * (1.0 + fd.abs()),
            "f_{a} = {} vs -dH = {}",
            split.f[a],
            -fd
        );
    }
}

#[test]
fn charged_momentum_equation_and_conserved_combination() {
    // covariant momentum equation: nabla p / dt = (e/m)(nabla_a xi_n)(p - e xi)^n,
    // and nabla (p + e xi) / dt = 0.
    let entry = spacetimes::kerr_charged(1.0, 0.9, 0.05);
    let metric = entry.metric.clone();
    let e = entry.coupling.unwrap();
    let xi = entry.primary_xi.clone().unwrap();
    let h = HamiltonianSpec::charged(1.0, e, xi.clone());
    let z = PhasePoint::new(vec![0.0, 6.0, 1.0, 0.9], vec![-0.9, 0.2, 0.9, 2.1]);

    let split = flow_split(&h, &metric, &z).unwrap();
    // nabla_a xi_n from dual seeds plus connection
    let gamma = metric.christoffel_at(&z.x).unwrap();
    let xi_val: Vec<f64> = xi(&lift(&z.x)).iter().map(|v| v.re).collect();
    let ginv = metric.inverse_metric_at(&z.x).unwrap();
    let p_up = ginv.matvec(&z.p);
    let xi_up = ginv.matvec(&xi_val);
    for a in 0..4 {
        let dxi: Vec<f64> = xi(&lift_seeded(&z.x, a)).iter().map(|v| v.du).collect();
        let mut rhs = 0.0;
        for n in 0..4 {
            let mut nabla = dxi[n];
            for k in 0..4 {
                nabla -= gamma.get(k, a, n) * xi_val[k];
            }
            rhs += e * nabla * (p_up[n] - e * xi_up[n]);
        }
        assert!(
            (split.f[a] - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()),
            "covariant momentum equation, component {a}"
        );
    }

    let m2 = metric.clone();
    let obs = TensorObservable {
        valence: vec![Variance::Down],
        eval: Arc::new(move |x, p| {
            let _ = &m2;
            let xi_x = xi(x);
            p.iter()
                .zip(&xi_x)
                .map(|(&pa, &xa)| pa + Dual::constant(e) * xa)
                .collect()
        }),
    };
    let dd = covariant_time_derivative(&obs, &h, &metric, &z).unwrap();
    for v in dd {
        assert!(v.abs() <= 1e-10, "nabla (p + e xi)/dt = {v}");
    }
}

#[test]
fn leibniz_rule_for_covariant_time_derivative() {
    let entry = spacetimes::kerr(1.0, 0.9);
    let metric = entry.metric.clone();
    let h = HamiltonianSpec::geodesic(1.0);
    let z = PhasePoint::new(vec![0.0, 7.5, 1.3, 0.1], vec![-0.9, 0.15, 0.6, 2.2]);

    // scalar observable f and (1,1) observable A = momentum-square tensor
    let f: ScalarObservable =
        Arc::new(|x: &[Dual], p: &[Dual]| x[1].sin() * p[0] + x[2] * p[3] + Dual::constant(0.7));
    let op = LaxOperator::MomentumSquare;
    let a_obs = op.as_tensor_observable(&metric);

    let fa = {
        let f = f.clone();
        let a_eval = a_obs.eval.clone();
        TensorObservable {
            valence: a_obs.valence.clone(),
            eval: Arc::new(move |x, p| {
                let s = f(x, p);
                a_eval(x, p).into_iter().map(|v| v * s).collect()
            }),
        }
    };
    let lhs = covariant_time_derivative(&fa, &h, &metric, &z).unwrap();
    let da = covariant_time_derivative(&a_obs, &h, &metric, &z).unwrap();
    let df = observable_time_derivative(&f, &h, &metric, &z).unwrap();
    let a_val = a_obs.components_at(&z);
    let f_val = f(&lift(&z.x), &lift(&z.p)).re;
    for i in 0..lhs.len() {
        let rhs = df * a_val[i] + f_val * da[i];
        assert!(
            (lhs[i] - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()),
            "component {i}: {} vs {}",
            lhs[i],
            rhs
        );
    }
}

#[test]
fn momentum_square_traces_are_powers_of_p2() {
    let entry = spacetimes::kerr(1.0, 0.9);
    let metric = &entry.metric;
    let z = PhasePoint::new(vec![0.0, 9.0, 1.0, 0.5], vec![-0.9, 0.25, 1.1, 2.0]);
    let p2 = z.p_squared(metric).unwrap();
    let traces = trace_invariants(&LaxOperator::MomentumSquare, metric, &z, 4).unwrap();
    for (j, tr) in traces.iter().enumerate() {
        let expect = p2.powi(j as i32 + 1);
        assert!((tr - expect).abs() <= 1e-12 * expect.abs().max(1.0));
    }
}

#[test]
fn phi_rank2_trace_encodes_killing_tensor() {
    // tr L^2 / p^2 = -2 k^{ab} p_a p_b for L = Phi built from a rank-2 KY form
    let entry = spacetimes::kerr(1.0, 0.9);
    let metric = &entry.metric;
    let phi = entry.ky("ky").unwrap();
    for z in random_phase_points(&entry, 21, 10) {
        let p2 = z.p_squared(metric).unwrap();
        let traces =
            trace_invariants(&LaxOperator::PhiRank2 { phi: phi.clone() }, metric, &z, 2).unwrap();
        let k_pp = killing_quadratic(metric, &phi, &z).unwrap();
        let residual = (traces[1] / p2 + 2.0 * k_pp).abs();
        assert!(
            residual <= 1e-10 * k_pp.abs().max(1.0),
            "trace relation residual {residual:.3e}"
        );
    }
}

#[test]
fn schwarzschild_killing_tensor_is_total_angular_momentum() {
    let entry = spacetimes::schwarzschild(1.0);
    let metric = &entry.metric;
    let phi = entry.ky("ky").unwrap();
    for z in random_phase_points(&entry, 31, 20) {
        let k_pp = killing_quadratic(metric, &phi, &z).unwrap();
        let l2 = z.p[2] * z.p[2] + (z.p[3] / z.x[2].sin()).powi(2);
        assert!(
            (k_pp - l2).abs() <= 1e-10 * l2.max(1.0),
            "k(p,p) = {k_pp} vs L^2 = {l2}"
        );
    }
}

#[test]
fn genkt_polynomial_is_even_in_sqrt_beta() {
    // Fitting W with odd sqrt(beta) powers included returns odd coefficients
    // at the rounding floor.
    let entry = spacetimes::kerr(1.0, 0.9);
    let metric = &entry.metric;
    let h = entry.ccky("principal").unwrap();
    let z = PhasePoint::new(vec![0.0, 8.0, 1.2, 0.1], vec![-0.95, 0.1, 0.9, 2.7]);
    let d = 4usize;
    let n = d / 2;
    let ginv = metric.inverse_metric_at(&z.x).unwrap();
    let p_up = ginv.matvec(&z.p);
    let p2 = dot(&z.p, &p_up);
    let op = LaxOperator::FRank2 { h: h.clone() };
    let f = op.eval(metric, &z).unwrap();
    let beta_max = d as f64 / (f.max_abs().powi(2) / p2.powi(4) + 1.0);
    // 2n+1 nodes in u = sqrt(beta), polynomial degree 2n in u
    let m = 2 * n + 1;
    let nodes: Vec<f64> = (0..m)
        .map(|k| {
            let t = ((2 * k + 1) as f64) * std::f64::consts::PI / (2 * m) as f64;
            beta_max.sqrt() * 0.5 * (1.0 + t.cos())
        })
        .collect();
    let mut wvals = Vec::new();
    for &u in &nodes {
        let arg = SqMatrix::identity(d).add(&f.scale(u / p2));
        wvals.push(p2 * arg.det());
    }
    let vand = SqMatrix::from_fn(m, |i, j| (nodes[i] / beta_max.sqrt()).powi(j as i32));
    let (vinv, _) = vand.inverse().unwrap();
    let coeffs = vinv.matvec(&wvals);
    let scale = coeffs.iter().fold(1.0f64, |mx, c| mx.max(c.abs()));
    for j in (1..m).step_by(2) {
        assert!(
            coeffs[j].abs() <= 1e-10 * scale,
            "odd sqrt(beta) coefficient {j}: {:.3e}",
            coeffs[j]
        );
    }
}

#[test]
fn genkt_c1_affine_in_carter_constant() {
    // c_1 = sigma * (p k_KY p) + gamma * p^2 with (sigma, gamma) fixed by the
    // geometry; fit them at two points, verify everywhere.
    let entry = spacetimes::kerr(1.0, 0.9);
    let metric = &entry.metric;
    let h = entry.ccky("principal").unwrap();
    let phi = entry.ky("ky").unwrap();
    let points = random_phase_points(&entry, 77, 52);
    let row = |z: &PhasePoint| -> (f64, f64, f64) {
        let c1 = genkt_coefficients(&h, metric, z).unwrap().coefficients[1];
        let k = killing_quadratic(metric, &phi, z).unwrap();
        let p2 = z.p_squared(metric).unwrap();
        (c1, k, p2)
    };
    let (c1_a, k_a, p2_a) = row(&points[0]);
    let (c1_b, k_b, p2_b) = row(&points[1]);
    let det = k_a * p2_b - k_b * p2_a;
    let sigma = (c1_a * p2_b - c1_b * p2_a) / det;
    let gamma = (k_a * c1_b - k_b * c1_a) / det;
    for z in &points[2..] {
        let (c1, k, p2) = row(z);
        let predict = sigma * k + gamma * p2;
        assert!(
            (c1 - predict).abs() <= 1e-9 * c1.abs().max(1.0),
            "affine relation broken: c1 = {c1}, predicted {predict} (sigma={sigma:.3}, gamma={gamma:.3e})"
        );
    }
    // the fitted relation is c_1 = -k(p,p) in these conventions
    assert!((sigma + 1.0).abs() < 1e-8, "sigma = {sigma}");
    assert!(gamma.abs() < 1e-8, "gamma = {gamma}");
}

#[test]
fn genkt_condition_estimate_reported() {
    let entry = spacetimes::kerr(1.0, 0.9);
    let h = entry.ccky("principal").unwrap();
    let z = PhasePoint::new(vec![0.0, 8.0, 1.2, 0.1], vec![-0.95, 0.1, 0.9, 2.7]);
    let res = genkt_coefficients(&h, &entry.metric, &z).unwrap();
    assert!(res.condition.is_finite() && res.condition >= 1.0);
    assert!(res.warning.is_none(), "scaled interpolation is well conditioned");
    // null momentum refused
    let ginv = entry.metric.inverse_metric_at(&z.x).unwrap();
    // build an exactly null covector numerically: p_t chosen so p^2 = 0
    let mut p = vec![0.0, 0.3, 0.4, 0.5];
    let spatial: f64 = (1..4)
        .map(|i| {
            (1..4)
                .map(|j| ginv[(i, j)] * p[i] * p[j])
                .sum::<f64>()
        })
        .sum();
    // g^{tt} p_t^2 + 2 g^{tphi} p_t p_phi + spatial = 0
    let a = ginv[(0, 0)];
    let b = 2.0 * ginv[(0, 3)] * p[3];
    let c = spatial;
    p[0] = (-b - (b * b - 4.0 * a * c).sqrt()) / (2.0 * a);
    let z_null = PhasePoint::new(z.x.clone(), p);
    assert!(matches!(
        genkt_with_momentum(&h, &entry.metric, &z_null.x, &z_null.p),
        Err(covlax::Error::NullMomentum { .. })
    ));
}

#[test]
fn dual_gate_cross_check() {
    // verify_ky(*h) small iff verify_ccky(h) small: true for the principal
    // tensor, false for a tampered one.
    let entry = spacetimes::kerr(1.0, 0.9);
    let metric = entry.metric.clone();
    let h = entry.ccky("principal").unwrap();
    let x = vec![0.0, 5.5, 1.0, 0.3];
    assert!(verify_ccky(&metric, &h, &x).unwrap() <= 1e-10);
    let m2 = metric.clone();
    let h2 = h.clone();
    let dual_field = KyField(FormField::new(
        2,
        Arc::new(move |xd: &[Dual]| {
            let g = m2.metric_dual(xd);
            hodge(&g, &h2.0.at_dual(xd)).unwrap()
        }),
    ));
    assert!(verify_ky(&metric, &dual_field, &x).unwrap() <= 1e-10);

    // tamper: h + (position-dependent, non-CCKY) bump
    let base = h.clone();
    let tampered = CckyField(FormField::new(
        2,
        Arc::new(move |xd: &[Dual]| {
            let mut f = base.0.at_dual(xd);
            let bump = f.get(&[0, 1]) + xd[1] * xd[1] * Dual::constant(0.01);
            f.set_antisym(&[0, 1], bump);
            f
        }),
    ));
    let r_ccky = verify_ccky(&metric, &tampered, &x).unwrap();
    assert!(r_ccky > 1e-4, "tampered CCKY residual {r_ccky:.3e}");
    let m3 = metric.clone();
    let t2 = tampered.clone();
    let tampered_dual = KyField(FormField::new(
        2,
        Arc::new(move |xd: &[Dual]| {
            let g = m3.metric_dual(xd);
            hodge(&g, &t2.0.at_dual(xd)).unwrap()
        }),
    ));
    let r_ky = verify_ky(&metric, &tampered_dual, &x).unwrap();
    assert!(r_ky > 1e-4, "dual of tampered field must also fail: {r_ky:.3e}");
}

#[test]
fn clifford_invariants_match_eigenvalue_multiset() {
    // Durand-Kerner root finder on the characteristic polynomial as an
    // independent oracle for the Newton-identity invariants.
    use num_complex::Complex64;
    let entry = spacetimes::kerr(1.0, 0.9);
    let metric = entry.metric.clone();
    let basis = covlax::clifford::build_gamma_basis(4, &metric.signature).unwrap();
    let phi = entry.ky("ky").unwrap();
    let kind = covlax::clifford::CliffordLaxKind::Ky(phi);
    let z = PhasePoint::new(vec![0.0, 8.0, 1.2, 0.3], vec![-0.95, 0.0, 1.0, 2.8]);
    let lam = covlax::clifford::clifford_lax_eval(&kind, &metric, &basis, &z).unwrap();
    let e = covlax::clifford::char_poly_invariants(&lam);
    // monic char poly: z^4 - e1 z^3 + e2 z^2 - e3 z + e4
    let coeffs = [
        Complex64::new(1.0, 0.0),
        -e[0],
        e[1],
        -e[2],
        e[3],
    ];
    let eval = |z: Complex64| {
        coeffs
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    };
    // Durand-Kerner iteration
    let mut roots: Vec<Complex64> = (0..4)
        .map(|k| {
            Complex64::new(0.4, 0.9).powu(k as u32 + 1) * Complex64::new(1.0, 0.0)
                + Complex64::new(0.1 * k as f64, 0.0)
        })
        .collect();
    for _ in 0..200 {
        let old = roots.clone();
        for i in 0..4 {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..4 {
                if j != i {
                    denom *= old[i] - old[j];
                }
            }
            roots[i] = old[i] - eval(old[i]) / denom;
        }
    }
    // elementary symmetric functions of the roots reproduce the invariants
    let e1: Complex64 = roots.iter().sum();
    let mut e2 = Complex64::new(0.0, 0.0);
    let mut e3 = Complex64::new(0.0, 0.0);
    for i in 0..4 {
        for j in (i + 1)..4 {
            e2 += roots[i] * roots[j];
            for k in (j + 1)..4 {
                e3 += roots[i] * roots[j] * roots[k];
            }
        }
    }
    let e4 = roots.iter().product::<Complex64>();
    let scale = e.iter().map(|c| c.norm()).fold(1.0, f64::max);
    assert!((e1 - e[0]).norm() <= 1e-8 * scale, "e1");
    assert!((e2 - e[1]).norm() <= 1e-8 * scale, "e2");
    assert!((e3 - e[2]).norm() <= 1e-8 * scale, "e3");
    assert!((e4 - e[3]).norm() <= 1e-8 * scale, "e4");
}

#[test]
fn gamma_hermiticity_pattern_follows_signature() {
    // (gamma^a)† = gamma^a for spacelike legs, -gamma^a for the timelike one;
    // rank-2 products are Hermitian exactly when one index is timelike.
    let basis = covlax::clifford::build_gamma_basis(4, &[-1, 1, 1, 1]).unwrap();
    for a in 0..4 {
        let g = basis.gamma(a);
        let sign = if a == 0 { -1.0 } else { 1.0 };
        assert!(
            g.adjoint()
                .sub(&g.scale(num_complex::Complex64::new(sign, 0.0)))
                .max_abs()
                == 0.0
        );
    }
    for a in 0..4 {
        for b in (a + 1)..4 {
            let g = basis.gamma_antisym(&[a, b]).unwrap();
            let timelike_count = usize::from(a == 0) + usize::from(b == 0);
            let sign = if timelike_count == 1 { 1.0 } else { -1.0 };
            assert!(
                g.adjoint()
                    .sub(&g.scale(num_complex::Complex64::new(sign, 0.0)))
                    .max_abs()
                    == 0.0,
                "gamma^({a}{b}) hermiticity"
            );
        }
    }
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    fn arb_form(dim: usize, rank: usize) -> impl Strategy<Value = Form<f64>> {
        let combos = increasing_tuples(dim, rank);
        let n = combos.len();
        proptest::collection::vec(-3.0f64..3.0, n).prop_map(move |vals| {
            let mut f = Form::zero(dim, rank);
            for (combo, v) in combos.iter().zip(vals) {
                f.set_antisym(combo, v);
            }
            f
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn wedge_is_graded_commutative(
            a in arb_form(4, 1),
            b in arb_form(4, 2),
            c in arb_form(4, 1),
        ) {
            // (-1)^{rs}: 1x2 commutes, 1x1 anticommutes
            prop_assert!(a.wedge(&b).sub(&b.wedge(&a)).max_abs() <= 1e-12);
            prop_assert!(a.wedge(&c).add(&c.wedge(&a)).max_abs() <= 1e-12);
        }

        #[test]
        fn wedge_is_associative(
            a in arb_form(4, 1),
            b in arb_form(4, 1),
            c in arb_form(4, 2),
        ) {
            let left = a.wedge(&b).wedge(&c);
            let right = a.wedge(&b.wedge(&c));
            prop_assert!(left.sub(&right).max_abs() <= 1e-11);
        }

        #[test]
        fn operations_preserve_antisymmetry(
            a in arb_form(4, 2),
            b in arb_form(4, 1),
            v in proptest::collection::vec(-2.0f64..2.0, 4),
        ) {
            let w = a.wedge(&b);
            for combo in increasing_tuples(4, 3) {
                let mut swapped = combo.clone();
                swapped.swap(0, 2);
                prop_assert!((w.get(&combo) + w.get(&swapped)).abs() <= 1e-12);
            }
            let contracted = a.contract_up(&v).unwrap();
            let double = contracted.contract_up(&v).unwrap();
            prop_assert!(double.max_abs() <= 1e-12);
        }

        #[test]
        fn double_hodge_has_fixed_sign(a in arb_form(4, 2), r1 in arb_form(3, 1)) {
            // Minkowski rank 2: ** = s(-1)^{r(D-r)} = -1
            let mink = SqMatrix::from_fn(4, |i, j| {
                if i == j { if i == 0 { -1.0 } else { 1.0 } } else { 0.0 }
            });
            let dd = hodge(&mink, &hodge(&mink, &a).unwrap()).unwrap();
            prop_assert!(dd.add(&a).max_abs() <= 1e-12);
            // Euclidean D=3 rank 1: ** = +1
            let euc = SqMatrix::<f64>::identity(3);
            let dd = hodge(&euc, &hodge(&euc, &r1).unwrap()).unwrap();
            prop_assert!(dd.sub(&r1).max_abs() <= 1e-12);
        }
    }
}
