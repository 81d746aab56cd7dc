//! Catalog of metrics with their registered symmetry structures.
//!
//! Line elements (coordinate order and orientation are fixed by these):
//!
//! - `minkowski4`: `ds^2 = -dt^2 + dx^2 + dy^2 + dz^2`.
//! - `euclidean3`: `ds^2 = dx^2 + dy^2 + dz^2`.
//! - `schwarzschild(M)`, coordinates `(t, r, theta, phi)`:
//!   `ds^2 = -f dt^2 + dr^2/f + r^2 dtheta^2 + r^2 sin^2(theta) dphi^2`,
//!   `f = 1 - 2M/r`.
//! - `kerr(M, a)`, Boyer-Lindquist `(t, r, theta, phi)`:
//!   `ds^2 = -(1 - 2Mr/S) dt^2 - (4Mar sin^2(theta)/S) dt dphi + (S/D) dr^2`
//!   `      + S dtheta^2 + (r^2 + a^2 + 2Ma^2 r sin^2(theta)/S) sin^2(theta) dphi^2`,
//!   `S = r^2 + a^2 cos^2(theta)`, `D = r^2 - 2Mr + a^2`.
//!
//! Registered symmetry components are treated as untrusted input: the
//! `verify_ky` / `verify_ccky` gates in [`validate_entry`] must pass before an
//! entry is used, and the test suite runs the gates on every shipped entry.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::dual::{Dual, Scalar};
use crate::error::{Error, Result};
use crate::forms::{hodge, Form};
use crate::linalg::SqMatrix;
use crate::manifold::MetricSpec;
use crate::phasespace::CovectorField;
use crate::symmetry::{ccky_xi, verify_ccky, verify_ky, CckyField, FormField, KyField};

/// Gate tolerance for literature-sourced symmetry components.
pub const GATE_TOLERANCE: f64 = 1e-9;
/// Number of quasi-random chart points per gate.
pub const GATE_POINTS: usize = 64;
/// Coordinate-distance guard against horizons and axes.
pub const CHART_MARGIN: f64 = 1e-6;

/// A metric together with its registered symmetry objects.
#[derive(Clone)]
pub struct SpacetimeEntry {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub metric: MetricSpec,
    pub ky_fields: Vec<(String, KyField)>,
    pub ccky_fields: Vec<(String, CckyField)>,
    /// Primary Killing vector (divergence of the principal CCKY tensor).
    pub primary_xi: Option<CovectorField>,
    /// Test-field coupling `e` for charged entries (`qA = e xi`).
    pub coupling: Option<f64>,
    /// Per-coordinate ranges for quasi-random chart sampling.
    pub sample_ranges: Vec<(f64, f64)>,
    /// Documented points used in tests.
    pub reference_points: Vec<Vec<f64>>,
}

impl SpacetimeEntry {
    pub fn ky(&self, name: &str) -> Result<KyField> {
        self.ky_fields
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, f)| f.clone())
            .ok_or_else(|| Error::UnknownSpacetime(format!("{}::ky::{}", self.name, name)))
    }

    pub fn ccky(&self, name: &str) -> Result<CckyField> {
        self.ccky_fields
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, f)| f.clone())
            .ok_or_else(|| Error::UnknownSpacetime(format!("{}::ccky::{}", self.name, name)))
    }

    /// First registered rank-2 CCKY field, if any (the principal tensor).
    pub fn principal_ccky(&self) -> Option<CckyField> {
        self.ccky_fields
            .iter()
            .map(|(_, f)| f.clone())
            .find(|f| f.0.rank() == 2)
    }

    /// Quasi-random chart points from a Halton sequence over `sample_ranges`.
    pub fn sample_points(&self, n: usize) -> Vec<Vec<f64>> {
        const BASES: [u64; 6] = [2, 3, 5, 7, 11, 13];
        (0..n)
            .map(|i| {
                self.sample_ranges
                    .iter()
                    .enumerate()
                    .map(|(k, &(lo, hi))| lo + (hi - lo) * halton(i as u64 + 1, BASES[k]))
                    .collect()
            })
            .collect()
    }
}

fn halton(mut index: u64, base: u64) -> f64 {
    let mut fraction = 1.0;
    let mut result = 0.0;
    while index > 0 {
        fraction /= base as f64;
        result += fraction * (index % base) as f64;
        index /= base;
    }
    result
}

// ---------------------------------------------------------------------------
// metric functions, generic over the scalar so duals flow through

fn minkowski_g<T: Scalar>(dim: usize) -> SqMatrix<T> {
    SqMatrix::from_fn(dim, |i, j| {
        if i == j {
            if i == 0 {
                -T::ONE
            } else {
                T::ONE
            }
        } else {
            T::ZERO
        }
    })
}

fn schwarzschild_g<T: Scalar>(m: f64, x: &[T]) -> SqMatrix<T> {
    let r = x[1];
    let sin = x[2].sin();
    let f = T::ONE - T::from_f64(2.0 * m) / r;
    let mut g = SqMatrix::zeros(4);
    g[(0, 0)] = -f;
    g[(1, 1)] = T::ONE / f;
    g[(2, 2)] = r * r;
    g[(3, 3)] = r * r * sin * sin;
    g
}

fn kerr_g<T: Scalar>(m: f64, a: f64, x: &[T]) -> SqMatrix<T> {
    let r = x[1];
    let sin = x[2].sin();
    let cos = x[2].cos();
    let sin2 = sin * sin;
    let a_t = T::from_f64(a);
    let two_m = T::from_f64(2.0 * m);
    let r2 = r * r;
    let a2 = a_t * a_t;
    let sigma = r2 + a2 * cos * cos;
    let delta = r2 - two_m * r + a2;
    let mut g = SqMatrix::zeros(4);
    g[(0, 0)] = -(T::ONE - two_m * r / sigma);
    let gtphi = -two_m * a_t * r * sin2 / sigma;
    g[(0, 3)] = gtphi;
    g[(3, 0)] = gtphi;
    g[(1, 1)] = sigma / delta;
    g[(2, 2)] = sigma;
    g[(3, 3)] = (r2 + a2 + two_m * a2 * r * sin2 / sigma) * sin2;
    g
}

// ---------------------------------------------------------------------------
// catalog entries

pub fn minkowski4() -> SpacetimeEntry {
    let metric = MetricSpec::new(
        4,
        vec![-1, 1, 1, 1],
        Arc::new(|x: &[Dual]| minkowski_g(x.len())),
        MetricSpec::open_chart(),
    );
    SpacetimeEntry {
        name: "minkowski4".into(),
        params: BTreeMap::new(),
        metric,
        ky_fields: vec![],
        ccky_fields: vec![],
        primary_xi: None,
        coupling: None,
        sample_ranges: vec![(-2.0, 2.0); 4],
        reference_points: vec![vec![0.0; 4], vec![0.3, 1.0, -2.0, 0.7]],
    }
}

/// Flat 3-space with the radial closed conformal Killing vector `h_a = x_a`
/// and the two-parameter flat KY 2-form family
/// `phi_ab = omega_ab + mu eps_abc x^c`.
pub fn euclidean3() -> SpacetimeEntry {
    let metric = MetricSpec::new(
        3,
        vec![1, 1, 1],
        Arc::new(|x: &[Dual]| {
            let _ = x;
            SqMatrix::identity(3)
        }),
        MetricSpec::open_chart(),
    );
    let radial = CckyField(FormField::new(
        1,
        Arc::new(|x: &[Dual]| Form::one_form(x)),
    ));
    let family = flat_ky_two_form([0.4, -0.7, 1.2], 0.8);
    SpacetimeEntry {
        name: "euclidean3".into(),
        params: BTreeMap::new(),
        metric,
        ky_fields: vec![("ky_family".into(), family)],
        ccky_fields: vec![("radial".into(), radial)],
        primary_xi: None,
        coupling: None,
        sample_ranges: vec![(-2.0, 2.0); 3],
        reference_points: vec![vec![1.0, 0.0, 0.0], vec![0.5, -1.2, 2.0]],
    }
}

/// The flat KY 2-form family in `D = 3`: a constant 2-form `omega` plus
/// `mu eps_abc x^c`, whose covariant derivative `mu eps_abd` is totally
/// antisymmetric.
pub fn flat_ky_two_form(omega: [f64; 3], mu: f64) -> KyField {
    KyField(FormField::new(
        2,
        Arc::new(move |x: &[Dual]| {
            let mut f = Form::<Dual>::zero(3, 2);
            f.set_antisym(
                &[0, 1],
                Dual::constant(omega[0]) + Dual::constant(mu) * x[2],
            );
            f.set_antisym(
                &[0, 2],
                Dual::constant(omega[1]) - Dual::constant(mu) * x[1],
            );
            f.set_antisym(
                &[1, 2],
                Dual::constant(omega[2]) + Dual::constant(mu) * x[0],
            );
            f
        }),
    ))
}

pub fn schwarzschild(mass: f64) -> SpacetimeEntry {
    let m = mass;
    let metric = MetricSpec::new(
        4,
        vec![-1, 1, 1, 1],
        Arc::new(move |x: &[Dual]| schwarzschild_g(m, x)),
        Arc::new(move |x: &[f64]| {
            if x[1] <= 2.0 * m + CHART_MARGIN {
                return Some(format!("r <= 2M + {CHART_MARGIN} (horizon guard, r = {})", x[1]));
            }
            if x[2].sin() <= CHART_MARGIN {
                return Some(format!("sin(theta) <= {CHART_MARGIN} (axis), theta = {}", x[2]));
            }
            None
        }),
    );
    // principal CCKY: h = r dt ^ dr, divergence = d/dt
    let ccky = CckyField(FormField::new(
        2,
        Arc::new(move |x: &[Dual]| {
            let mut f = Form::<Dual>::zero(4, 2);
            f.set_antisym(&[0, 1], x[1]);
            f
        }),
    ));
    let ky = ky_from_ccky_dual(&metric, &ccky);
    let xi = xi_time_translation(&metric);
    let mut params = BTreeMap::new();
    params.insert("mass".into(), mass);
    SpacetimeEntry {
        name: "schwarzschild".into(),
        params,
        metric,
        ky_fields: vec![("ky".into(), ky)],
        ccky_fields: vec![("principal".into(), ccky)],
        primary_xi: Some(xi),
        coupling: None,
        sample_ranges: vec![
            (0.0, 1.0),
            (2.0 * mass + 0.5, 12.0 * mass),
            (0.35, std::f64::consts::PI - 0.35),
            (0.0, 6.28),
        ],
        reference_points: vec![vec![0.0, 4.0, std::f64::consts::FRAC_PI_2, 0.0]],
    }
}

pub fn kerr(mass: f64, spin: f64) -> SpacetimeEntry {
    assert!(spin.abs() < mass, "subextremal Kerr requires |a| < M");
    let (m, a) = (mass, spin);
    let r_plus = m + (m * m - a * a).sqrt();
    let metric = MetricSpec::new(
        4,
        vec![-1, 1, 1, 1],
        Arc::new(move |x: &[Dual]| kerr_g(m, a, x)),
        Arc::new(move |x: &[f64]| {
            if x[1] <= r_plus + CHART_MARGIN {
                return Some(format!(
                    "r <= r_+ + {CHART_MARGIN} (horizon guard, r = {}, r_+ = {r_plus})",
                    x[1]
                ));
            }
            if x[2].sin() <= CHART_MARGIN {
                return Some(format!("sin(theta) <= {CHART_MARGIN} (axis), theta = {}", x[2]));
            }
            None
        }),
    );
    // Principal CCKY tensor in Boyer-Lindquist components:
    //   h = r dt^dr + a^2 sc dt^dtheta + a r s^2 dr^dphi + a (r^2+a^2) sc dtheta^dphi
    // with s = sin(theta), c = cos(theta). Its divergence is d/dt.
    let ccky = CckyField(FormField::new(
        2,
        Arc::new(move |x: &[Dual]| {
            let r = x[1];
            let sin = x[2].sin();
            let cos = x[2].cos();
            let a_t = Dual::constant(a);
            let mut f = Form::<Dual>::zero(4, 2);
            f.set_antisym(&[0, 1], r);
            f.set_antisym(&[0, 2], a_t * a_t * sin * cos);
            f.set_antisym(&[1, 3], a_t * r * sin * sin);
            f.set_antisym(&[2, 3], a_t * (r * r + a_t * a_t) * sin * cos);
            f
        }),
    ));
    let ky = ky_from_ccky_dual(&metric, &ccky);
    let xi = xi_time_translation(&metric);
    let mut params = BTreeMap::new();
    params.insert("mass".into(), mass);
    params.insert("spin".into(), spin);
    SpacetimeEntry {
        name: "kerr".into(),
        params,
        metric,
        ky_fields: vec![("ky".into(), ky)],
        ccky_fields: vec![("principal".into(), ccky)],
        primary_xi: Some(xi),
        coupling: None,
        // stay outside the ergosphere (r > 2M) so the t-first frame exists
        sample_ranges: vec![
            (0.0, 1.0),
            (2.0 * mass + 0.2, 12.0 * mass),
            (0.35, std::f64::consts::PI - 0.35),
            (0.0, 6.28),
        ],
        reference_points: vec![vec![0.0, 6.0, 1.2, 0.5]],
    }
}

/// Kerr with the aligned test electromagnetic field `qA = e xi`.
pub fn kerr_charged(mass: f64, spin: f64, coupling: f64) -> SpacetimeEntry {
    let mut entry = kerr(mass, spin);
    entry.name = "kerr_charged".into();
    entry.params.insert("coupling".into(), coupling);
    entry.coupling = Some(coupling);
    entry
}

/// `xi_a = g_{a t}`: the time-translation Killing covector of a stationary
/// metric, which equals the divergence of the catalog principal tensors.
fn xi_time_translation(metric: &MetricSpec) -> CovectorField {
    let metric = metric.clone();
    Arc::new(move |x: &[Dual]| {
        let g = metric.metric_dual(x);
        (0..g.dim()).map(|a| g[(a, 0)]).collect()
    })
}

/// Register the Hodge dual of a CCKY field as a KY field (dual-capable).
fn ky_from_ccky_dual(metric: &MetricSpec, h: &CckyField) -> KyField {
    let metric = metric.clone();
    let h = h.clone();
    let rank = metric.dim - h.0.rank();
    KyField(FormField::new(
        rank,
        Arc::new(move |x: &[Dual]| {
            let g = metric.metric_dual(x);
            hodge(&g, &h.0.at_dual(x)).expect("hodge of registered field")
        }),
    ))
}

// ---------------------------------------------------------------------------
// catalog and gates

/// Shipped entries with their documented default parameters.
pub fn catalog() -> Vec<SpacetimeEntry> {
    vec![
        minkowski4(),
        euclidean3(),
        schwarzschild(1.0),
        kerr(1.0, 0.9),
        kerr_charged(1.0, 0.9, 0.05),
    ]
}

/// Resolve a catalog name with optional parameter overrides
/// (`mass`, `spin`, `coupling`).
pub fn by_name(name: &str, params: &BTreeMap<String, f64>) -> Result<SpacetimeEntry> {
    let get = |key: &str, default: f64| params.get(key).copied().unwrap_or(default);
    match name {
        "minkowski4" => Ok(minkowski4()),
        "euclidean3" => Ok(euclidean3()),
        "schwarzschild" => Ok(schwarzschild(get("mass", 1.0))),
        "kerr" => Ok(kerr(get("mass", 1.0), get("spin", 0.9))),
        "kerr_charged" => Ok(kerr_charged(
            get("mass", 1.0),
            get("spin", 0.9),
            get("coupling", 0.05),
        )),
        other => Err(Error::UnknownSpacetime(other.into())),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GateCheck {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl GateCheck {
    fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        GateCheck {
            name: name.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GateReport {
    pub spacetime: String,
    pub checks: Vec<GateCheck>,
}

impl GateReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&GateCheck> {
        self.checks.iter().find(|c| !c.pass)
    }
}

/// Run every verification gate of an entry: metric invariants, KY/CCKY
/// residuals at [`GATE_POINTS`] quasi-random chart points, and the
/// xi-divergence check for charged-capable entries.
pub fn validate_entry(entry: &SpacetimeEntry) -> Result<GateReport> {
    let points = entry.sample_points(GATE_POINTS);
    let mut checks = Vec::new();

    let mut sym_res: f64 = 0.0;
    let mut compat_res: f64 = 0.0;
    let mut signature_ok = true;
    for x in &points {
        let g = entry.metric.metric_at(x)?;
        sym_res = sym_res.max(g.symmetry_residual());
        compat_res = compat_res.max(entry.metric.metric_compatibility_residual(x)?);
        let eig = g.symmetric_eigenvalues();
        let mut found: Vec<i8> = eig.iter().map(|&e| if e < 0.0 { -1 } else { 1 }).collect();
        found.sort_unstable();
        let mut expected = entry.metric.signature.clone();
        expected.sort_unstable();
        if found != expected {
            signature_ok = false;
        }
    }
    checks.push(GateCheck::new("metric_symmetry", sym_res, 1e-12));
    checks.push(GateCheck::new(
        "metric_signature",
        if signature_ok { 0.0 } else { 1.0 },
        0.5,
    ));
    checks.push(GateCheck::new("metric_compatibility", compat_res, 1e-10));

    for (name, phi) in &entry.ky_fields {
        let mut worst: f64 = 0.0;
        for x in &points {
            worst = worst.max(verify_ky(&entry.metric, phi, x)?);
        }
        checks.push(GateCheck::new(format!("ky::{name}"), worst, GATE_TOLERANCE));
    }
    for (name, h) in &entry.ccky_fields {
        let mut worst: f64 = 0.0;
        for x in &points {
            worst = worst.max(verify_ccky(&entry.metric, h, x)?);
        }
        checks.push(GateCheck::new(
            format!("ccky::{name}"),
            worst,
            GATE_TOLERANCE,
        ));
    }

    if let (Some(xi), Some(h)) = (&entry.primary_xi, &entry.principal_ccky()) {
        let mut worst: f64 = 0.0;
        for x in &points {
            let div = ccky_xi(&entry.metric, h, x)?;
            let xi_x = xi(&crate::dual::lift(x));
            for a in 0..entry.metric.dim {
                worst = worst.max((div.get(&[a]) - xi_x[a].re).abs());
            }
        }
        checks.push(GateCheck::new("xi_divergence", worst, GATE_TOLERANCE));
    }

    Ok(GateReport {
        spacetime: entry.name.clone(),
        checks,
    })
}

/// Validate and return the entry, erroring on the first failed gate.
pub fn validated(entry: SpacetimeEntry) -> Result<SpacetimeEntry> {
    let report = validate_entry(&entry)?;
    if let Some(fail) = report.first_failure() {
        return Err(Error::GateFailure {
            check: format!("{}::{}", entry.name, fail.name),
            residual: fail.residual,
            tolerance: fail.tolerance,
        });
    }
    Ok(entry)
}
