//! Gamma-matrix representations in arbitrary dimension and signature,
//! antisymmetrized products, form-to-Clifford maps, the spin connection, and
//! Clifford Lax tensors.
//!
//! The representation is the recursive Kronecker (Pauli-doubling)
//! construction, so matrix entries are exactly `0, +-1, +-i` and all
//! anticommutators close without rounding. Timelike legs multiply the
//! corresponding Euclidean generator by `i`.

use num_complex::Complex64;

use crate::dual::lift_seeded;
use crate::error::{Error, Result};
use crate::forms::{all_tuples, factorial, permutations_signed, Form};
use crate::manifold::{FrameField, MetricSpec};
use crate::phasespace::{HamiltonianSpec, PhasePoint};
use crate::symmetry::{CckyField, KyField};

/// Dense complex `n x n` matrix; the Clifford elements of this crate.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    n: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        CMat {
            n,
            data: vec![Complex64::ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matmul(&self, other: &CMat) -> CMat {
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMat) -> CMat {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> CMat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn commutator(&self, other: &CMat) -> CMat {
        self.matmul(other).sub(&other.matmul(self))
    }

    pub fn anticommutator(&self, other: &CMat) -> CMat {
        self.matmul(other).add(&other.matmul(self))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> CMat {
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Kronecker product.
    pub fn kron(&self, other: &CMat) -> CMat {
        let (n, m) = (self.n, other.n);
        let mut out = CMat::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self[(i, j)];
                if a == Complex64::ZERO {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out[(i * m + k, j * m + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

fn pauli(k: usize) -> CMat {
    let i = Complex64::I;
    let one = Complex64::ONE;
    let mut m = CMat::zeros(2);
    match k {
        1 => {
            m[(0, 1)] = one;
            m[(1, 0)] = one;
        }
        2 => {
            m[(0, 1)] = -i;
            m[(1, 0)] = i;
        }
        3 => {
            m[(0, 0)] = one;
            m[(1, 1)] = -one;
        }
        _ => unreachable!(),
    }
    m
}

/// Flat-frame gamma matrices `gamma^a` with
/// `gamma^a gamma^b + gamma^b gamma^a = 2 eta^{ab} 1` exactly.
#[derive(Clone)]
pub struct GammaBasis {
    pub dim: usize,
    pub signature: Vec<i8>,
    pub n: usize,
    gammas: Vec<CMat>,
}

/// Recursive Kronecker construction of the gamma basis for `2 <= D <= 10`.
pub fn build_gamma_basis(dim: usize, signature: &[i8]) -> Result<GammaBasis> {
    if !(2..=10).contains(&dim) {
        return Err(Error::Unsupported(format!(
            "gamma basis supports 2 <= D <= 10, got {dim}"
        )));
    }
    assert_eq!(signature.len(), dim);
    let k = dim / 2;
    let n = 1usize << k;
    // Euclidean generators by Pauli doubling:
    //   E_{2j-1} = s3^(j-1) x s1 x 1..,  E_{2j} = s3^(j-1) x s2 x 1..
    // odd D appends E_D = s3^k.
    let mut euclid: Vec<CMat> = Vec::with_capacity(dim);
    for j in 1..=k {
        for &s in &[1usize, 2] {
            let mut m = CMat::identity(1);
            for _ in 0..(j - 1) {
                m = m.kron(&pauli(3));
            }
            m = m.kron(&pauli(s));
            for _ in 0..(k - j) {
                m = m.kron(&CMat::identity(2));
            }
            euclid.push(m);
        }
    }
    if dim % 2 == 1 {
        let mut m = CMat::identity(1);
        for _ in 0..k {
            m = m.kron(&pauli(3));
        }
        euclid.push(m);
    }
    let gammas = euclid
        .into_iter()
        .zip(signature)
        .map(|(e, &s)| if s < 0 { e.scale(Complex64::I) } else { e })
        .collect();
    Ok(GammaBasis {
        dim,
        signature: signature.to_vec(),
        n,
        gammas,
    })
}

impl GammaBasis {
    pub fn gamma(&self, a: usize) -> &CMat {
        &self.gammas[a]
    }

    /// Max-abs of `{gamma^a, gamma^b} - 2 eta^{ab} 1` over all pairs;
    /// exactly zero for this construction.
    pub fn anticommutator_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..self.dim {
            for b in 0..self.dim {
                let anti = self.gammas[a].anticommutator(&self.gammas[b]);
                let eta = if a == b {
                    2.0 * f64::from(self.signature[a])
                } else {
                    0.0
                };
                let target = CMat::identity(self.n).scale(Complex64::new(eta, 0.0));
                worst = worst.max(anti.sub(&target).max_abs());
            }
        }
        worst
    }

    /// Antisymmetrized product
    /// `gamma^{a1..ar} = (1/r!) sum_sigma sign(sigma) gamma^{a_sigma(1)} .. gamma^{a_sigma(r)}`.
    pub fn gamma_antisym(&self, indices: &[usize]) -> Result<CMat> {
        for &i in indices {
            if i >= self.dim {
                return Err(Error::Dimension(format!(
                    "gamma index {i} out of range for D = {}",
                    self.dim
                )));
            }
        }
        if indices.is_empty() {
            return Ok(CMat::identity(self.n));
        }
        let mut acc = CMat::zeros(self.n);
        for (perm, sign) in permutations_signed(indices) {
            let mut prod = self.gammas[perm[0]].clone();
            for &idx in &perm[1..] {
                prod = prod.matmul(&self.gammas[idx]);
            }
            acc = acc.add(&prod.scale(Complex64::new(sign, 0.0)));
        }
        Ok(acc.scale(Complex64::new(1.0 / factorial(indices.len()) as f64, 0.0)))
    }
}

/// Convert a form's coordinate components to frame components:
/// `omega_{a^..} = omega_{a..} e_{a^}^a ..` (contraction with the frame legs).
pub fn form_to_frame(form: &Form<f64>, frame: &FrameField<f64>) -> Form<f64> {
    let d = form.dim();
    let r = form.rank();
    let mut out = Form::zero(d, r);
    for combo in crate::forms::increasing_tuples(d, r) {
        let mut acc = 0.0;
        for idx in all_tuples(d, r) {
            let mut weight = 1.0;
            for slot in 0..r {
                weight *= frame.legs[(combo[slot], idx[slot])];
            }
            if weight != 0.0 {
                acc += weight * form.get(&idx);
            }
        }
        out.set_antisym(&combo, acc);
    }
    out
}

/// `Lambda = sum_r (1/r!) omega_{a^1..a^r} gamma^{a^1..a^r}` for an
/// inhomogeneous form given as a list of homogeneous pieces in coordinate
/// components.
pub fn form_to_clifford(
    pieces: &[Form<f64>],
    basis: &GammaBasis,
    frame: &FrameField<f64>,
) -> Result<CMat> {
    let mut acc = CMat::zeros(basis.n);
    for piece in pieces {
        if piece.rank() > basis.dim {
            return Err(Error::Rank(format!(
                "form rank {} exceeds dimension {}",
                piece.rank(),
                basis.dim
            )));
        }
        let framed = form_to_frame(piece, frame);
        let r = piece.rank();
        if r == 0 {
            acc = acc.add(&CMat::identity(basis.n).scale(Complex64::new(framed.get(&[]), 0.0)));
            continue;
        }
        let norm = 1.0 / factorial(r) as f64;
        for idx in all_tuples(basis.dim, r) {
            let c = framed.get(&idx);
            if c != 0.0 {
                let g = basis.gamma_antisym(&idx)?;
                acc = acc.add(&g.scale(Complex64::new(c * norm, 0.0)));
            }
        }
    }
    Ok(acc)
}

/// Spin connection `Sigma_a = (1/4) RR_{a m^ n^} gamma^{m^ n^}` at a point,
/// one Clifford element per coordinate direction.
#[derive(Clone)]
pub struct SpinConnection {
    pub sigma: Vec<CMat>,
}

pub fn spin_connection_at(
    metric: &MetricSpec,
    basis: &GammaBasis,
    x: &[f64],
) -> Result<SpinConnection> {
    let d = metric.dim;
    let rr = metric.ricci_rotation_at(x)?;
    let mut sigma = Vec::with_capacity(d);
    for a in 0..d {
        let mut acc = CMat::zeros(basis.n);
        for mh in 0..d {
            for nh in 0..d {
                // lower the first frame index with eta
                let coeff = f64::from(metric.signature[mh]) * rr.get(mh, a, nh);
                if coeff != 0.0 {
                    let g = basis.gamma_antisym(&[mh, nh])?;
                    acc = acc.add(&g.scale(Complex64::new(0.25 * coeff, 0.0)));
                }
            }
        }
        sigma.push(acc);
    }
    Ok(SpinConnection { sigma })
}

/// Residual of `nabla_a gamma^b = d_a gamma^b + Gamma^b_an gamma^n
/// + [Sigma_a, gamma^b] = 0` with `gamma^b(x) = e_{a^}^b gamma^{a^}`.
pub fn gamma_compatibility_residual(
    metric: &MetricSpec,
    basis: &GammaBasis,
    x: &[f64],
) -> Result<f64> {
    let d = metric.dim;
    let frame = metric.frame_at(x)?;
    let gamma = metric.christoffel_at(x)?;
    let sc = spin_connection_at(metric, basis, x)?;
    // coordinate gammas and their partials
    let coord_gamma = |legs: &crate::linalg::SqMatrix<f64>, b: usize| -> CMat {
        let mut acc = CMat::zeros(basis.n);
        for ah in 0..d {
            let c = legs[(ah, b)];
            if c != 0.0 {
                acc = acc.add(&basis.gamma(ah).scale(Complex64::new(c, 0.0)));
            }
        }
        acc
    };
    let gammas_x: Vec<CMat> = (0..d).map(|b| coord_gamma(&frame.legs, b)).collect();
    let mut worst: f64 = 0.0;
    for a in 0..d {
        let dframe = metric.frame_dual(&lift_seeded(x, a))?.legs.deriv_part();
        for b in 0..d {
            let mut res = coord_gamma(&dframe, b);
            for n in 0..d {
                let c = gamma.get(b, a, n);
                if c != 0.0 {
                    res = res.add(&gammas_x[n].scale(Complex64::new(c, 0.0)));
                }
            }
            res = res.add(&sc.sigma[a].commutator(&gammas_x[b]));
            worst = worst.max(res.max_abs());
        }
    }
    Ok(worst)
}

/// Clifford Lax tensor kinds.
#[derive(Clone)]
pub enum CliffordLaxKind {
    /// `Lambda = p_{a^} gamma^{a^}`.
    Momentum,
    /// `Lambda = kappa_{a^..} gamma^{a^..}` with `kappa = phi . p`.
    Ky(KyField),
    /// `Lambda = mu_{a^..} gamma^{a^..}` with `mu = h ^ p`.
    Ccky(CckyField),
    /// Scalar-observable multiple of an inner kind.
    Scaled {
        inner: Box<CliffordLaxKind>,
        factor: crate::phasespace::ScalarObservable,
    },
}

impl CliffordLaxKind {
    pub fn kind_name(&self) -> &'static str {
        match self {
            CliffordLaxKind::Momentum => "momentum",
            CliffordLaxKind::Ky(_) => "ky",
            CliffordLaxKind::Ccky(_) => "ccky",
            CliffordLaxKind::Scaled { .. } => "scaled",
        }
    }
}

/// Evaluate a Clifford Lax tensor at a phase point. The dense index sum (no
/// `1/r!`) follows the convention used for the conserved-form tensors.
pub fn clifford_lax_eval(
    kind: &CliffordLaxKind,
    metric: &MetricSpec,
    basis: &GammaBasis,
    z: &PhasePoint,
) -> Result<CMat> {
    let frame = metric.frame_at(&z.x)?;
    match kind {
        CliffordLaxKind::Momentum => {
            let p_form = Form::one_form(&z.p);
            dense_clifford(&p_form, basis, &frame)
        }
        CliffordLaxKind::Ky(phi) => {
            let kappa = crate::symmetry::kappa(phi, metric, z)?;
            dense_clifford(&kappa, basis, &frame)
        }
        CliffordLaxKind::Ccky(h) => {
            let mu = crate::symmetry::mu(h, metric, z)?;
            dense_clifford(&mu, basis, &frame)
        }
        CliffordLaxKind::Scaled { inner, factor } => {
            let base = clifford_lax_eval(inner, metric, basis, z)?;
            let value = factor(&crate::dual::lift(&z.x), &crate::dual::lift(&z.p)).re;
            Ok(base.scale(Complex64::new(value, 0.0)))
        }
    }
}

fn dense_clifford(form: &Form<f64>, basis: &GammaBasis, frame: &FrameField<f64>) -> Result<CMat> {
    let framed = form_to_frame(form, frame);
    let r = form.rank();
    let mut acc = CMat::zeros(basis.n);
    if r == 0 {
        return Ok(CMat::identity(basis.n).scale(Complex64::new(framed.get(&[]), 0.0)));
    }
    for idx in all_tuples(basis.dim, r) {
        let c = framed.get(&idx);
        if c != 0.0 {
            acc = acc.add(&basis.gamma_antisym(&idx)?.scale(Complex64::new(c, 0.0)));
        }
    }
    Ok(acc)
}

/// Lax pair `(L, M)` with `L = Lambda(z)` and `M = (dH/dp_n) Sigma_n`.
pub fn clifford_lax_pair(
    kind: &CliffordLaxKind,
    h: &HamiltonianSpec,
    metric: &MetricSpec,
    basis: &GammaBasis,
    z: &PhasePoint,
) -> Result<(CMat, CMat)> {
    let l = clifford_lax_eval(kind, metric, basis, z)?;
    let u = h.grad_p(metric, z)?;
    let sc = spin_connection_at(metric, basis, &z.x)?;
    let mut m = CMat::zeros(basis.n);
    for (un, sn) in u.iter().zip(&sc.sigma) {
        if *un != 0.0 {
            m = m.add(&sn.scale(Complex64::new(*un, 0.0)));
        }
    }
    Ok((l, m))
}

/// Max over interior samples of `|Lambda_dot - [Lambda, M]|` by centered
/// differences along a uniform-grid trajectory.
pub fn clifford_lax_pair_residual(
    traj: &crate::dynamics::Trajectory,
    kind: &CliffordLaxKind,
    h: &HamiltonianSpec,
    metric: &MetricSpec,
    basis: &GammaBasis,
) -> Result<f64> {
    if traj.len() < 3 {
        return Err(Error::TooFewSamples {
            needed: 3,
            got: traj.len(),
        });
    }
    let step = traj.uniform_step().ok_or_else(|| {
        Error::Unsupported("clifford_lax_pair_residual needs a uniform output grid".into())
    })?;
    let mut ls = Vec::with_capacity(traj.len());
    for z in &traj.states {
        ls.push(clifford_lax_eval(kind, metric, basis, z)?);
    }
    let mut worst: f64 = 0.0;
    for i in 1..traj.len() - 1 {
        let ldot = ls[i + 1]
            .sub(&ls[i - 1])
            .scale(Complex64::new(1.0 / (2.0 * step), 0.0));
        let (_, m) = clifford_lax_pair(kind, h, metric, basis, &traj.states[i])?;
        let bracket = ls[i].commutator(&m);
        worst = worst.max(ldot.sub(&bracket).max_abs());
    }
    Ok(worst)
}

/// Conjugation invariants of a Clifford element: the elementary symmetric
/// functions of its eigenvalues (characteristic-polynomial coefficients),
/// obtained from `tr Lambda^j` by Newton's identities. No eigensolver needed.
pub fn char_poly_invariants(m: &CMat) -> Vec<Complex64> {
    let n = m.dim();
    let mut traces = Vec::with_capacity(n);
    let mut power = m.clone();
    traces.push(power.trace());
    for _ in 1..n {
        power = power.matmul(m);
        traces.push(power.trace());
    }
    let mut e = vec![Complex64::ZERO; n + 1];
    e[0] = Complex64::ONE;
    for k in 1..=n {
        let mut acc = Complex64::ZERO;
        for j in 1..=k {
            let sign = if j % 2 == 1 {
                Complex64::ONE
            } else {
                -Complex64::ONE
            };
            acc += sign * e[k - j] * traces[j - 1];
        }
        e[k] = acc / Complex64::new(k as f64, 0.0);
    }
    e[1..].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spacetimes;

    #[test]
    fn pauli_pair_d2() {
        let basis = build_gamma_basis(2, &[1, 1]).unwrap();
        assert_eq!(basis.n, 2);
        assert_eq!(basis.anticommutator_residual(), 0.0);
    }

    #[test]
    fn lorentzian_d4_anticommutators_exact() {
        let basis = build_gamma_basis(4, &[-1, 1, 1, 1]).unwrap();
        assert_eq!(basis.n, 4);
        assert_eq!(basis.anticommutator_residual(), 0.0);
    }

    #[test]
    fn d5_last_gamma_proportional_to_product() {
        let basis = build_gamma_basis(5, &[1; 5]).unwrap();
        assert_eq!(basis.n, 4);
        let prod = basis
            .gamma(0)
            .matmul(basis.gamma(1))
            .matmul(basis.gamma(2))
            .matmul(basis.gamma(3));
        // gamma^5 = +- phase * product; check proportionality entrywise
        let g5 = basis.gamma(4);
        let mut ratio: Option<Complex64> = None;
        for i in 0..4 {
            for j in 0..4 {
                if g5[(i, j)].norm() > 1e-12 {
                    let r = prod[(i, j)] / g5[(i, j)];
                    match ratio {
                        None => ratio = Some(r),
                        Some(r0) => assert!((r - r0).norm() < 1e-12),
                    }
                }
            }
        }
        let r = ratio.expect("nonzero overlap");
        assert!((r.norm() - 1.0).abs() < 1e-12, "unit phase, got {r}");
    }

    #[test]
    fn gamma_antisym_rank2_is_half_commutator() {
        let basis = build_gamma_basis(4, &[-1, 1, 1, 1]).unwrap();
        let g12 = basis.gamma_antisym(&[1, 2]).unwrap();
        let comm = basis
            .gamma(1)
            .commutator(basis.gamma(2))
            .scale(Complex64::new(0.5, 0.0));
        assert!(g12.sub(&comm).max_abs() < 1e-15);
        // repeated index cancels pairwise in the signed sum
        let rep = basis.gamma_antisym(&[1, 1]).unwrap();
        assert_eq!(rep.max_abs(), 0.0);
    }

    #[test]
    fn gamma_antisym_rank3_matches_bruteforce() {
        let basis = build_gamma_basis(5, &[1; 5]).unwrap();
        let idx = [0, 2, 4];
        let direct = basis.gamma_antisym(&idx).unwrap();
        let mut acc = CMat::zeros(basis.n);
        for (perm, sign) in permutations_signed(&idx) {
            let prod = basis
                .gamma(perm[0])
                .matmul(basis.gamma(perm[1]))
                .matmul(basis.gamma(perm[2]));
            acc = acc.add(&prod.scale(Complex64::new(sign / 6.0, 0.0)));
        }
        assert!(direct.sub(&acc).max_abs() < 1e-15);
    }

    #[test]
    fn traces_vanish_below_top_rank() {
        for d in 2..=6usize {
            let sig: Vec<i8> = std::iter::once(-1).chain(std::iter::repeat(1)).take(d).collect();
            let basis = build_gamma_basis(d, &sig).unwrap();
            let top = if d % 2 == 0 { d } else { d - 1 };
            for r in 1..=top {
                let idx: Vec<usize> = (0..r).collect();
                let g = basis.gamma_antisym(&idx).unwrap();
                assert!(
                    g.trace().norm() < 1e-13,
                    "tr gamma^(rank {r}) in D={d} must vanish"
                );
            }
        }
    }

    #[test]
    fn dimension_range_enforced() {
        assert!(build_gamma_basis(1, &[1]).is_err());
        assert!(build_gamma_basis(11, &[1; 11]).is_err());
        let big = build_gamma_basis(10, &[1; 10]).unwrap();
        assert_eq!(big.n, 32);
    }

    #[test]
    fn rank_one_antisym_is_the_generator_itself() {
        let basis = build_gamma_basis(4, &[-1, 1, 1, 1]).unwrap();
        for a in 0..4 {
            let g = basis.gamma_antisym(&[a]).unwrap();
            assert!(g.sub(basis.gamma(a)).max_abs() == 0.0);
        }
        assert!(basis.gamma_antisym(&[7]).is_err(), "index out of range");
    }

    #[test]
    fn scalar_form_maps_to_identity() {
        let entry = spacetimes::minkowski4();
        let basis = build_gamma_basis(4, &entry.metric.signature).unwrap();
        let frame = entry.metric.frame_at(&[0.0; 4]).unwrap();
        let lam = form_to_clifford(&[Form::scalar(4, 2.5)], &basis, &frame).unwrap();
        let expect = CMat::identity(4).scale(Complex64::new(2.5, 0.0));
        assert!(lam.sub(&expect).max_abs() == 0.0);
    }

    #[test]
    fn flat_clifford_pair_has_zero_m() {
        let entry = spacetimes::minkowski4();
        let basis = build_gamma_basis(4, &entry.metric.signature).unwrap();
        let h = HamiltonianSpec::geodesic(1.0);
        let z = PhasePoint::new(vec![0.2; 4], vec![-1.0, 0.4, 0.1, 0.3]);
        let (l, m) = clifford_lax_pair(&CliffordLaxKind::Momentum, &h, &entry.metric, &basis, &z)
            .unwrap();
        assert_eq!(m.max_abs(), 0.0);
        assert!(l.max_abs() > 0.0);
    }

    #[test]
    fn flat_spin_connection_vanishes() {
        let entry = spacetimes::minkowski4();
        let basis = build_gamma_basis(4, &entry.metric.signature).unwrap();
        let sc = spin_connection_at(&entry.metric, &basis, &[0.0; 4]).unwrap();
        for s in &sc.sigma {
            assert_eq!(s.max_abs(), 0.0);
        }
    }

    #[test]
    fn schwarzschild_gamma_compatibility() {
        let entry = spacetimes::schwarzschild(1.0);
        let basis = build_gamma_basis(4, &entry.metric.signature).unwrap();
        let x = [0.0, 5.7, 1.1, 0.8];
        let r = gamma_compatibility_residual(&entry.metric, &basis, &x).unwrap();
        assert!(r < 1e-10, "residual {r}");
    }

    #[test]
    fn momentum_clifford_squares_to_p2() {
        let entry = spacetimes::minkowski4();
        let basis = build_gamma_basis(4, &entry.metric.signature).unwrap();
        // unit spacelike momentum
        let z = PhasePoint::new(vec![0.0; 4], vec![0.0, 1.0, 0.0, 0.0]);
        let lam = clifford_lax_eval(&CliffordLaxKind::Momentum, &entry.metric, &basis, &z).unwrap();
        let sq = lam.matmul(&lam);
        assert!(sq.sub(&CMat::identity(4)).max_abs() < 1e-14);
        // tr Lambda^2 = N p^2
        assert!((sq.trace().re - 4.0).abs() < 1e-13);
    }

    #[test]
    fn two_sphere_spin_connection_coefficient() {
        // ds^2 = dtheta^2 + sin^2 theta dphi^2; Sigma_phi should be
        // proportional to gamma^{12} with coefficient -cos(theta)/2... the
        // ricci rotation gives RR^1_{phi 2} = -cos(theta) and
        // Sigma_phi = (1/4)(RR_{phi 1 2} - RR_{phi 2 1}) gamma^{12}
        //           = (1/2) RR_{phi 1 2} gamma^{12}.
        use crate::dual::Scalar as _;
        use std::sync::Arc;
        let metric = MetricSpec::new(
            2,
            vec![1, 1],
            Arc::new(|x: &[crate::dual::Dual]| {
                let sin = x[0].sin();
                let mut g = crate::linalg::SqMatrix::zeros(2);
                g[(0, 0)] = crate::dual::Dual::constant(1.0);
                g[(1, 1)] = sin * sin;
                g
            }),
            MetricSpec::open_chart(),
        );
        let theta = std::f64::consts::FRAC_PI_3;
        let basis = build_gamma_basis(2, &[1, 1]).unwrap();
        let sc = spin_connection_at(&metric, &basis, &[theta, 0.3]).unwrap();
        let rr = metric.ricci_rotation_at(&[theta, 0.3]).unwrap();
        let g12 = basis.gamma_antisym(&[0, 1]).unwrap();
        let expected = g12.scale(Complex64::new(0.5 * rr.get(0, 1, 1), 0.0));
        assert!(sc.sigma[1].sub(&expected).max_abs() < 1e-12);
        assert!(sc.sigma[0].max_abs() < 1e-12);
        // the classic value: RR^1_{phi 2} with legs (d_theta, d_phi/sin):
        // nabla_phi e_2 = ... coefficient -cos(theta)
        assert!((rr.get(0, 1, 1) + theta.cos()).abs() < 1e-10);
    }
}
