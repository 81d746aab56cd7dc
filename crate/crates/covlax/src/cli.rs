//! Config-driven command layer.
//!
//! One TOML document describes a run (spacetime, Hamiltonian, initial phase
//! point, integrator, Lax operators, observables, tolerances); each command
//! turns it into machine-readable artifacts:
//!
//! - JSON reports: one top-level object `{config, checks: [...]}` where every
//!   check is `{name, residual, tolerance, pass}`;
//! - CSV time series: `t, x^0.., p_0.., <observable columns>` at full double
//!   precision.
//!
//! Reports are deterministic given the config: fixed ordering, fixed
//! formatting, no timestamps.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::{
    build_gamma_basis, char_poly_invariants, clifford_lax_pair_residual,
    gamma_compatibility_residual, CliffordLaxKind,
};
use crate::dynamics::{
    integrate, monitor, write_trajectory_csv, IntegratorConfig, NamedObservable, StepMode,
    Trajectory,
};
use crate::error::{Error, Result};
use crate::lax::{
    charged_constants, covariant_lax_residual, genkt_coefficients, lax_pair_residual,
    trace_invariants, LaxOperator,
};
use crate::phasespace::{HamiltonianSpec, PhasePoint};
use crate::spacetimes::{by_name, validate_entry, SpacetimeEntry};
use crate::symmetry::killing_quadratic;

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct RunConfig {
    pub spacetime: SpacetimeSection,
    #[serde(default)]
    pub hamiltonian: HamiltonianSection,
    #[serde(default)]
    pub initial: Option<InitialSection>,
    #[serde(default)]
    pub integrator: IntegratorSection,
    #[serde(default)]
    pub lax: LaxSection,
    #[serde(default)]
    pub observables: Vec<String>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct SpacetimeSection {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct HamiltonianSection {
    #[serde(default = "default_kind")]
    pub kind: String,
    #[serde(default = "default_mass")]
    pub mass: f64,
    #[serde(default)]
    pub coupling: Option<f64>,
}

fn default_kind() -> String {
    "geodesic".into()
}
fn default_mass() -> f64 {
    1.0
}

impl Default for HamiltonianSection {
    fn default() -> Self {
        HamiltonianSection {
            kind: default_kind(),
            mass: default_mass(),
            coupling: None,
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct InitialSection {
    pub x: Vec<f64>,
    pub p: Vec<f64>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct IntegratorSection {
    #[serde(default = "default_mode")]
    pub mode: String,
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "default_abs_tol")]
    pub abs_tol: f64,
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
    #[serde(default)]
    pub dense_grid: Option<usize>,
}

fn default_mode() -> String {
    "adaptive".into()
}
fn default_rel_tol() -> f64 {
    1e-12
}
fn default_abs_tol() -> f64 {
    1e-14
}
fn default_step() -> f64 {
    1e-3
}
fn default_t_end() -> f64 {
    10.0
}
fn default_max_steps() -> usize {
    50_000_000
}

impl Default for IntegratorSection {
    fn default() -> Self {
        IntegratorSection {
            mode: default_mode(),
            rel_tol: default_rel_tol(),
            abs_tol: default_abs_tol(),
            step: default_step(),
            t_end: default_t_end(),
            max_steps: default_max_steps(),
            dense_grid: None,
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, Default)]
pub struct LaxSection {
    #[serde(default)]
    pub operators: Vec<OperatorSection>,
    #[serde(default = "default_jmax")]
    pub jmax: usize,
}

fn default_jmax() -> usize {
    4
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct OperatorSection {
    pub kind: String,
    #[serde(default)]
    pub field: Option<String>,
}

#[derive(Serialize, Clone, Debug)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }
}

#[derive(Serialize, Debug)]
pub struct Report {
    pub config: RunConfig,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Error::Config(format!("parse {}: {e}", path.display())))
}

fn write_json(out_dir: &Path, name: &str, report: &Report) -> Result<()> {
    std::fs::create_dir_all(out_dir)?;
    let path = out_dir.join(name);
    let text = serde_json::to_string_pretty(report)
        .map_err(|e| Error::Config(format!("serialize report: {e}")))?;
    std::fs::write(path, text)?;
    Ok(())
}

/// Everything resolved from a config: entry, Hamiltonian, initial point.
pub struct ResolvedRun {
    pub config: RunConfig,
    pub entry: SpacetimeEntry,
    pub hamiltonian: HamiltonianSpec,
    pub initial: Option<PhasePoint>,
    pub tol_scale: f64,
}

impl ResolvedRun {
    pub fn new(config: RunConfig, tol_scale: f64) -> Result<Self> {
        let entry = by_name(&config.spacetime.name, &config.spacetime.params)?;
        let hamiltonian = match config.hamiltonian.kind.as_str() {
            "geodesic" => HamiltonianSpec::geodesic(config.hamiltonian.mass),
            "charged" => {
                let coupling = config
                    .hamiltonian
                    .coupling
                    .or(entry.coupling)
                    .ok_or_else(|| {
                        Error::Config("charged hamiltonian needs a coupling".into())
                    })?;
                let xi = entry.primary_xi.clone().ok_or_else(|| {
                    Error::Config(format!(
                        "spacetime {} has no primary Killing vector",
                        entry.name
                    ))
                })?;
                HamiltonianSpec::charged(config.hamiltonian.mass, coupling, xi)
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown hamiltonian kind `{other}` (geodesic | charged)"
                )))
            }
        };
        let initial = match &config.initial {
            Some(init) => {
                if init.x.len() != entry.metric.dim || init.p.len() != entry.metric.dim {
                    return Err(Error::Config(format!(
                        "initial point must have dimension {}",
                        entry.metric.dim
                    )));
                }
                let z = PhasePoint::new(init.x.clone(), init.p.clone());
                entry.metric.check_chart(&z.x)?;
                Some(z)
            }
            None => None,
        };
        Ok(ResolvedRun {
            config,
            entry,
            hamiltonian,
            initial,
            tol_scale,
        })
    }

    pub fn initial(&self) -> Result<&PhasePoint> {
        self.initial
            .as_ref()
            .ok_or_else(|| Error::Config("this command needs an [initial] section".into()))
    }

    pub fn tolerance(&self, key: &str, default: f64) -> f64 {
        self.config
            .tolerances
            .get(key)
            .copied()
            .unwrap_or(default)
            * self.tol_scale
    }

    pub fn integrator_config(&self) -> Result<IntegratorConfig> {
        let s = &self.config.integrator;
        let mode = match s.mode.as_str() {
            "adaptive" => StepMode::Adaptive {
                rel_tol: s.rel_tol,
                abs_tol: s.abs_tol,
            },
            "fixed" => StepMode::Fixed { step: s.step },
            other => {
                return Err(Error::Config(format!(
                    "unknown integrator mode `{other}` (adaptive | fixed)"
                )))
            }
        };
        Ok(IntegratorConfig {
            mode,
            max_steps: s.max_steps,
            dense_grid: s.dense_grid,
        })
    }

    pub fn resolve_operator(&self, section: &OperatorSection) -> Result<LaxOperator> {
        let pick_ccky = |rank: usize| -> Result<crate::symmetry::CckyField> {
            match &section.field {
                Some(name) => self.entry.ccky(name),
                None => self
                    .entry
                    .ccky_fields
                    .iter()
                    .map(|(_, f)| f.clone())
                    .find(|f| f.0.rank() == rank)
                    .ok_or_else(|| {
                        Error::Config(format!(
                            "{} has no registered rank-{rank} CCKY field",
                            self.entry.name
                        ))
                    }),
            }
        };
        let pick_ky = |rank: usize| -> Result<crate::symmetry::KyField> {
            match &section.field {
                Some(name) => self.entry.ky(name),
                None => self
                    .entry
                    .ky_fields
                    .iter()
                    .map(|(_, f)| f.clone())
                    .find(|f| f.0.rank() == rank)
                    .ok_or_else(|| {
                        Error::Config(format!(
                            "{} has no registered rank-{rank} KY field",
                            self.entry.name
                        ))
                    }),
            }
        };
        let op = match section.kind.as_str() {
            "momentum_square" => LaxOperator::MomentumSquare,
            "cckv_rank1" => LaxOperator::CckvRank1 { h: pick_ccky(1)? },
            "f_rank2" => LaxOperator::FRank2 { h: pick_ccky(2)? },
            "ky_rank3" => LaxOperator::KyRank3 { phi: pick_ky(3)? },
            "phi_rank2" => LaxOperator::PhiRank2 { phi: pick_ky(2)? },
            "ky_partial_square" => LaxOperator::KyPartialSquare { phi: pick_ky(2)? },
            "f_square" => LaxOperator::FSquare { h: pick_ccky(2)? },
            "charged_f" => {
                let coupling = self
                    .config
                    .hamiltonian
                    .coupling
                    .or(self.entry.coupling)
                    .ok_or_else(|| Error::Config("charged_f needs a coupling".into()))?;
                let xi = self.entry.primary_xi.clone().ok_or_else(|| {
                    Error::Config("charged_f needs a primary Killing vector".into())
                })?;
                LaxOperator::ChargedF {
                    h: pick_ccky(2)?,
                    coupling,
                    xi,
                }
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown lax operator kind `{other}`"
                )))
            }
        };
        op.check_ranks()?;
        Ok(op)
    }

    /// Resolve an observable name into an evaluator.
    pub fn resolve_observable(&self, name: &str) -> Result<NamedObservable> {
        let metric = self.entry.metric.clone();
        let make = |eval: Arc<dyn Fn(&PhasePoint) -> Result<f64> + Send + Sync>| {
            NamedObservable::new(name, eval)
        };
        if name == "hamiltonian" {
            let h = self.hamiltonian.clone();
            return Ok(make(Arc::new(move |z| h.value(&metric, z))));
        }
        if name == "p2" {
            return Ok(make(Arc::new(move |z| z.p_squared(&metric))));
        }
        if name == "carter" {
            let phi = self
                .entry
                .ky_fields
                .iter()
                .map(|(_, f)| f.clone())
                .find(|f| f.0.rank() == 2)
                .ok_or_else(|| Error::Config("carter needs a rank-2 KY field".into()))?;
            return Ok(make(Arc::new(move |z| killing_quadratic(&metric, &phi, z))));
        }
        if let Some(rest) = name.strip_prefix("tr_l") {
            let (j_str, kind) = rest
                .split_once(':')
                .ok_or_else(|| Error::Config(format!("bad trace observable `{name}`")))?;
            let j: usize = j_str
                .parse()
                .map_err(|_| Error::Config(format!("bad trace order in `{name}`")))?;
            let op = self.resolve_operator(&OperatorSection {
                kind: kind.to_string(),
                field: None,
            })?;
            return Ok(make(Arc::new(move |z| {
                Ok(trace_invariants(&op, &metric, z, j)?[j - 1])
            })));
        }
        if let Some(j_str) = name.strip_prefix("genkt_c") {
            let j: usize = j_str
                .parse()
                .map_err(|_| Error::Config(format!("bad genkt observable `{name}`")))?;
            let h = self
                .entry
                .principal_ccky()
                .ok_or_else(|| Error::Config("genkt needs a rank-2 CCKY field".into()))?;
            return Ok(make(Arc::new(move |z| {
                Ok(genkt_coefficients(&h, &metric, z)?.coefficients[j])
            })));
        }
        for (prefix, selector) in [
            ("Ktilde", 0usize),
            ("K", 1),
            ("L", 2),
        ] {
            if let Some(j_str) = name.strip_prefix(prefix) {
                if let Ok(j) = j_str.parse::<usize>() {
                    let h = self
                        .entry
                        .principal_ccky()
                        .ok_or_else(|| Error::Config("charged constants need a rank-2 CCKY".into()))?;
                    let xi = self.entry.primary_xi.clone().ok_or_else(|| {
                        Error::Config("charged constants need a primary Killing vector".into())
                    })?;
                    let coupling = self
                        .config
                        .hamiltonian
                        .coupling
                        .or(self.entry.coupling)
                        .ok_or_else(|| Error::Config("charged constants need a coupling".into()))?;
                    return Ok(make(Arc::new(move |z| {
                        let c = charged_constants(&h, &xi, coupling, &metric, z)?;
                        Ok(match selector {
                            0 => c.ktilde[j],
                            1 => c.k[j],
                            _ => c.l[j],
                        })
                    })));
                }
            }
        }
        Err(Error::Config(format!("unknown observable `{name}`")))
    }

    fn resolved_observables(&self) -> Result<Vec<NamedObservable>> {
        let names: Vec<String> = if self.config.observables.is_empty() {
            let mut names = vec!["hamiltonian".to_string(), "p2".to_string()];
            for op in &self.config.lax.operators {
                names.push(format!("tr_l2:{}", op.kind));
            }
            names
        } else {
            self.config.observables.clone()
        };
        names.iter().map(|n| self.resolve_observable(n)).collect()
    }

    fn integrate_configured(&self) -> Result<Trajectory> {
        let z0 = self.initial()?;
        integrate(
            &self.hamiltonian,
            &self.entry.metric,
            z0,
            self.config.integrator.t_end,
            &self.integrator_config()?,
        )
    }
}

/// `integrate`: trajectory CSV plus a drift report on the monitored
/// observables.
pub fn cmd_integrate(run: &ResolvedRun, out_dir: &Path) -> Result<Report> {
    let traj = run.integrate_configured()?;
    let observables = run.resolved_observables()?;
    std::fs::create_dir_all(out_dir)?;
    let mut file = std::fs::File::create(out_dir.join("trajectory.csv"))?;
    write_trajectory_csv(&mut file, &traj, &observables)?;

    let drift_tol = run.tolerance("drift", 1e-8);
    let report_drift = monitor(&traj, &observables)?;
    let checks = report_drift
        .entries
        .iter()
        .map(|e| Check::new(format!("drift::{}", e.name), e.relative_drift, drift_tol))
        .collect();
    let report = Report {
        config: run.config.clone(),
        checks,
    };
    write_json(out_dir, "integrate.json", &report)?;
    Ok(report)
}

/// `verify-lax`: covariant Lax residual at seeded random phase points and the
/// ordinary Lax-pair residual along the configured trajectory, per operator.
pub fn cmd_verify_lax(run: &ResolvedRun, out_dir: &Path, seed: u64) -> Result<Report> {
    let mut checks = Vec::new();
    let cov_tol = run.tolerance("covariant_lax", 1e-9);
    let pair_tol = run.tolerance("lax_pair", 1e-6);
    let points = random_phase_points(&run.entry, seed, 20);

    // uniform grid for the pair residual
    let grid = run.config.integrator.dense_grid.unwrap_or(400);
    let traj = integrate(
        &run.hamiltonian,
        &run.entry.metric,
        run.initial()?,
        run.config.integrator.t_end,
        &run.integrator_config()?.with_dense_grid(grid),
    )?;

    for section in &run.config.lax.operators {
        let op = run.resolve_operator(section)?;
        let mut worst: f64 = 0.0;
        for z in &points {
            worst = worst.max(covariant_lax_residual(
                &op,
                &run.hamiltonian,
                &run.entry.metric,
                z,
            )?);
        }
        checks.push(Check::new(
            format!("covariant_lax::{}", section.kind),
            worst,
            cov_tol,
        ));
        let pair = lax_pair_residual(&traj, &op, &run.hamiltonian, &run.entry.metric)?;
        checks.push(Check::new(
            format!("lax_pair::{}", section.kind),
            pair,
            pair_tol,
        ));
    }
    let report = Report {
        config: run.config.clone(),
        checks,
    };
    write_json(out_dir, "verify_lax.json", &report)?;
    Ok(report)
}

/// `invariants`: CSV of the monitored constants over time plus drift checks.
pub fn cmd_invariants(run: &ResolvedRun, out_dir: &Path) -> Result<Report> {
    let traj = run.integrate_configured()?;
    let mut observables = run.resolved_observables()?;
    // trace invariants up to jmax for each configured operator
    for section in &run.config.lax.operators {
        for j in 1..=run.config.lax.jmax {
            let name = format!("tr_l{j}:{}", section.kind);
            if observables.iter().all(|o| o.name != name) {
                observables.push(run.resolve_observable(&name)?);
            }
        }
    }
    std::fs::create_dir_all(out_dir)?;
    let mut file = std::fs::File::create(out_dir.join("invariants.csv"))?;
    write_trajectory_csv(&mut file, &traj, &observables)?;

    let drift_tol = run.tolerance("drift", 1e-8);
    let drift = monitor(&traj, &observables)?;
    let checks = drift
        .entries
        .iter()
        .map(|e| Check::new(format!("drift::{}", e.name), e.relative_drift, drift_tol))
        .collect();
    let report = Report {
        config: run.config.clone(),
        checks,
    };
    write_json(out_dir, "invariants.json", &report)?;
    Ok(report)
}

/// `gate`: run every registration gate of the named spacetime.
pub fn cmd_gate(run: &ResolvedRun, out_dir: &Path) -> Result<Report> {
    let gates = validate_entry(&run.entry)?;
    let checks = gates
        .checks
        .iter()
        .map(|c| Check::new(c.name.clone(), c.residual, c.tolerance * run.tol_scale))
        .collect();
    let report = Report {
        config: run.config.clone(),
        checks,
    };
    write_json(out_dir, "gate.json", &report)?;
    Ok(report)
}

/// `clifford`: anticommutation, spin-connection compatibility, and Clifford
/// Lax-pair residuals.
pub fn cmd_clifford(run: &ResolvedRun, out_dir: &Path) -> Result<Report> {
    let metric = &run.entry.metric;
    let basis = build_gamma_basis(metric.dim, &metric.signature)?;
    let mut checks = Vec::new();

    checks.push(Check::new(
        "anticommutators",
        basis.anticommutator_residual(),
        0.0,
    ));

    let mut compat: f64 = 0.0;
    for x in run.entry.sample_points(16) {
        compat = compat.max(gamma_compatibility_residual(metric, &basis, &x)?);
    }
    checks.push(Check::new(
        "spin_connection_compatibility",
        compat,
        run.tolerance("spin_compat", 1e-10),
    ));

    // pair residual along a uniform grid
    let grid = run.config.integrator.dense_grid.unwrap_or(400);
    let traj = integrate(
        &run.hamiltonian,
        metric,
        run.initial()?,
        run.config.integrator.t_end,
        &run.integrator_config()?.with_dense_grid(grid),
    )?;
    let mut kinds: Vec<(String, CliffordLaxKind)> =
        vec![("momentum".into(), CliffordLaxKind::Momentum)];
    if let Some((name, phi)) = run.entry.ky_fields.first() {
        kinds.push((format!("ky::{name}"), CliffordLaxKind::Ky(phi.clone())));
    }
    let pair_tol = run.tolerance("clifford_pair", 1e-6);
    let drift_tol = run.tolerance("drift", 1e-8);
    for (name, kind) in &kinds {
        let r = clifford_lax_pair_residual(&traj, kind, &run.hamiltonian, metric, &basis)?;
        checks.push(Check::new(format!("clifford_pair::{name}"), r, pair_tol));
        // conjugation-invariant drift along the trajectory
        let first = char_poly_invariants(&crate::clifford::clifford_lax_eval(
            kind,
            metric,
            &basis,
            &traj.states[0],
        )?);
        let scale = first.iter().map(|c| c.norm()).fold(1.0, f64::max);
        let mut drift: f64 = 0.0;
        for z in &traj.states[1..] {
            let inv = char_poly_invariants(&crate::clifford::clifford_lax_eval(
                kind, metric, &basis, z,
            )?);
            for (a, b) in inv.iter().zip(&first) {
                drift = drift.max((a - b).norm() / scale);
            }
        }
        checks.push(Check::new(
            format!("clifford_invariant_drift::{name}"),
            drift,
            drift_tol,
        ));
    }
    let report = Report {
        config: run.config.clone(),
        checks,
    };
    write_json(out_dir, "clifford.json", &report)?;
    Ok(report)
}

/// Seeded random phase points in the entry's sample box with momenta in
/// `[-2, 2]` and `|p^2|` bounded away from zero.
pub fn random_phase_points(entry: &SpacetimeEntry, seed: u64, count: usize) -> Vec<PhasePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = entry.metric.dim;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x: Vec<f64> = entry
            .sample_ranges
            .iter()
            .map(|&(lo, hi)| rng.random_range(lo..hi))
            .collect();
        if entry.metric.check_chart(&x).is_err() {
            continue;
        }
        let p: Vec<f64> = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
        let z = PhasePoint::new(x, p);
        match z.p_squared(&entry.metric) {
            Ok(p2) if p2.abs() > 1e-3 => out.push(z),
            _ => continue,
        }
    }
    out
}
