//! Exterior algebra of totally antisymmetric forms.
//!
//! Components are stored dense over all `D^r` index tuples. At `D <= 6` and
//! `r <= 4` that is at most 1296 entries, and dense storage keeps every
//! contraction a plain loop.
//!
//! Conventions fixed here and relied on by the symmetry and Lax modules:
//! - the contraction slot is always the **last** index:
//!   `(alpha . p)_{a1..a_{r-1}} = alpha_{a1..a_{r-1} n} p^n`;
//! - `wedge` uses the normalized antisymmetrizer,
//!   `alpha ^ beta = (r+s)!/(r!s!) Alt(alpha x beta)`, so basis 1-forms obey
//!   `(dx ^ dy)_{xy} = +1`;
//! - Hodge orientation follows coordinate order.

use crate::dual::Scalar;
use crate::error::{Error, Result};
use crate::linalg::SqMatrix;

/// Rank-`r` totally antisymmetric covariant tensor with dense components.
#[derive(Clone, Debug, PartialEq)]
pub struct Form<T = f64> {
    dim: usize,
    rank: usize,
    comps: Vec<T>,
    /// Set when a wedge exceeded the dimension and the result was truncated
    /// to the (identically zero) rank-`D` form.
    pub rank_overflow: bool,
}

impl<T: Scalar> Form<T> {
    pub fn zero(dim: usize, rank: usize) -> Self {
        assert!(rank <= dim, "rank {rank} exceeds dimension {dim}");
        Form {
            dim,
            rank,
            comps: vec![T::ZERO; dim.pow(rank as u32)],
            rank_overflow: false,
        }
    }

    /// Rank-0 form (a scalar).
    pub fn scalar(dim: usize, value: T) -> Self {
        Form {
            dim,
            rank: 0,
            comps: vec![value],
            rank_overflow: false,
        }
    }

    /// Rank-1 form from covariant components.
    pub fn one_form(comps: &[T]) -> Self {
        Form {
            dim: comps.len(),
            rank: 1,
            comps: comps.to_vec(),
            rank_overflow: false,
        }
    }

    /// Build from values on strictly increasing index tuples; all other
    /// components follow by antisymmetry.
    pub fn from_increasing(dim: usize, rank: usize, mut f: impl FnMut(&[usize]) -> T) -> Self {
        let mut form = Form::zero(dim, rank);
        for combo in increasing_tuples(dim, rank) {
            let v = f(&combo);
            form.set_antisym(&combo, v);
        }
        form
    }

    /// Antisymmetrize an arbitrary dense component array.
    pub fn antisymmetrized(dim: usize, rank: usize, dense: &[T]) -> Self {
        assert_eq!(dense.len(), dim.pow(rank as u32));
        let mut form = Form::zero(dim, rank);
        let fact = T::from_f64(1.0 / factorial(rank) as f64);
        for combo in increasing_tuples(dim, rank) {
            let mut acc = T::ZERO;
            for (perm, sign) in permutations_signed(&combo) {
                acc += T::from_f64(sign) * dense[tuple_index(dim, &perm)];
            }
            form.set_antisym(&combo, acc * fact);
        }
        form
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn get(&self, idx: &[usize]) -> T {
        self.comps[tuple_index(self.dim, idx)]
    }

    /// Set the component at `idx` and propagate to every permutation with the
    /// appropriate sign. Repeated indices force zero.
    pub fn set_antisym(&mut self, idx: &[usize], v: T) {
        debug_assert_eq!(idx.len(), self.rank);
        if has_repeat(idx) {
            return;
        }
        for (perm, sign) in permutations_signed(idx) {
            self.comps[tuple_index(self.dim, &perm)] = T::from_f64(sign) * v;
        }
    }

    pub fn components(&self) -> &[T] {
        &self.comps
    }

    pub fn max_abs(&self) -> f64 {
        self.comps
            .iter()
            .map(|v| v.value().abs())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, s: T) -> Form<T> {
        Form {
            dim: self.dim,
            rank: self.rank,
            comps: self.comps.iter().map(|&c| c * s).collect(),
            rank_overflow: self.rank_overflow,
        }
    }

    pub fn add(&self, other: &Form<T>) -> Form<T> {
        assert_eq!(self.rank, other.rank);
        assert_eq!(self.dim, other.dim);
        Form {
            dim: self.dim,
            rank: self.rank,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(&a, &b)| a + b)
                .collect(),
            rank_overflow: false,
        }
    }

    pub fn sub(&self, other: &Form<T>) -> Form<T> {
        self.add(&other.scale(-T::ONE))
    }

    /// Wedge product with the normalized antisymmetrizer convention.
    ///
    /// When `r + s > D` the result is the zero rank-`D` form with
    /// `rank_overflow` set.
    pub fn wedge(&self, other: &Form<T>) -> Form<T> {
        assert_eq!(self.dim, other.dim, "wedge: dimension mismatch");
        let (r, s, d) = (self.rank, other.rank, self.dim);
        if r + s > d {
            let mut z = Form::zero(d, d);
            z.rank_overflow = true;
            return z;
        }
        let mut out = Form::zero(d, r + s);
        for combo in increasing_tuples(d, r + s) {
            let mut acc = T::ZERO;
            for (subset, sign) in shuffles(r + s, r) {
                let a_idx: Vec<usize> = subset.iter().map(|&pos| combo[pos]).collect();
                let b_idx: Vec<usize> = (0..r + s)
                    .filter(|pos| !subset.contains(pos))
                    .map(|pos| combo[pos])
                    .collect();
                acc += T::from_f64(sign) * self.get(&a_idx) * other.get(&b_idx);
            }
            out.set_antisym(&combo, acc);
        }
        out
    }

    /// Wedge with a covariant vector treated as a 1-form.
    pub fn wedge1(&self, covector: &[T]) -> Form<T> {
        self.wedge(&Form::one_form(covector))
    }

    /// Contraction on the last slot with a contravariant vector:
    /// `(alpha . v)_{a1..a_{r-1}} = alpha_{a1..a_{r-1} n} v^n`.
    pub fn contract_up(&self, v_up: &[T]) -> Result<Form<T>> {
        if self.rank == 0 {
            return Err(Error::Rank("cannot contract a rank-0 form".into()));
        }
        let d = self.dim;
        let mut out = Form::zero(d, self.rank - 1);
        for combo in increasing_tuples(d, self.rank - 1) {
            let mut acc = T::ZERO;
            let mut idx = combo.clone();
            idx.push(0);
            for n in 0..d {
                *idx.last_mut().unwrap() = n;
                acc += self.get(&idx) * v_up[n];
            }
            out.set_antisym(&combo, acc);
        }
        Ok(out)
    }

    /// Contraction on the last slot with a covariant vector raised by `g_inv`.
    pub fn contract(&self, covector: &[T], g_inv: &SqMatrix<T>) -> Result<Form<T>> {
        self.contract_up(&g_inv.matvec(covector))
    }

    /// Raise every index with `g_inv`. The result still changes sign under
    /// transpositions; the container is reused for upper-index components.
    pub fn raise_all(&self, g_inv: &SqMatrix<T>) -> Form<T> {
        let d = self.dim;
        let r = self.rank;
        let mut out = Form::zero(d, r);
        for combo in increasing_tuples(d, r) {
            let mut acc = T::ZERO;
            for idx in all_tuples(d, r) {
                let mut weight = T::ONE;
                for k in 0..r {
                    weight *= g_inv[(combo[k], idx[k])];
                }
                acc += weight * self.get(&idx);
            }
            out.set_antisym(&combo, acc);
        }
        out
    }

    /// Full contraction with another form of the same rank (no metric):
    /// `sum over all tuples alpha_A beta^A / 1` -- callers pair a lowered and
    /// a raised argument.
    pub fn dot_dense(&self, other: &Form<T>) -> T {
        assert_eq!(self.rank, other.rank);
        let mut acc = T::ZERO;
        for (a, b) in self.comps.iter().zip(&other.comps) {
            acc += *a * *b;
        }
        acc
    }
}

/// Hodge dual with respect to `g` at fixed orientation (coordinate order):
/// `(*a)_{b1..b_{D-r}} = (1/r!) sqrt|det g| eps_{a1..ar b1..b_{D-r}} a^{a1..ar}`.
pub fn hodge<T: Scalar>(g: &SqMatrix<T>, form: &Form<T>) -> Result<Form<T>> {
    let d = g.dim();
    let r = form.rank();
    let (g_inv, _) = g.inverse()?;
    let raised = form.raise_all(&g_inv);
    let sqrt_abs_det = g.det().abs().sqrt();
    let fact = T::from_f64(1.0 / factorial(r) as f64);
    let mut out = Form::zero(d, d - r);
    for combo in increasing_tuples(d, d - r) {
        let mut acc = T::ZERO;
        for a_idx in all_tuples(d, r) {
            let mut eps_idx = a_idx.clone();
            eps_idx.extend_from_slice(&combo);
            let sign = permutation_symbol(&eps_idx, d);
            if sign != 0.0 {
                acc += T::from_f64(sign) * raised.get(&a_idx);
            }
        }
        out.set_antisym(&combo, acc * fact * sqrt_abs_det);
    }
    Ok(out)
}

/// `|| (a.p)^p + (a^p).p - p^2 a ||_maxabs` with `p^a = g^ab p_b`.
pub fn form_identity_residual<T: Scalar>(
    form: &Form<T>,
    p_cov: &[T],
    g: &SqMatrix<T>,
) -> Result<f64> {
    let (g_inv, _) = g.inverse()?;
    let p_up = g_inv.matvec(p_cov);
    let p2 = crate::linalg::dot(p_cov, &p_up);
    let term1 = if form.rank() == 0 {
        // contraction of a scalar is undefined; the identity degenerates to
        // 0 + p^2 a - p^2 a for rank 0, so report zero directly.
        return Ok(0.0);
    } else {
        form.contract_up(&p_up)?.wedge1(p_cov)
    };
    let wedged = form.wedge1(p_cov);
    let term2 = if wedged.rank_overflow {
        Form::zero(form.dim(), form.rank())
    } else {
        wedged.contract_up(&p_up)?
    };
    let rhs = form.scale(p2);
    Ok(term1.add(&term2).sub(&rhs).max_abs())
}

/// Antisymmetrize a dense rank-`k` array over a subset of slots.
pub fn antisymmetrize_slots(
    dim: usize,
    rank: usize,
    comps: &[f64],
    slots: &[usize],
) -> Vec<f64> {
    let mut out = vec![0.0; comps.len()];
    let k = slots.len();
    let norm = 1.0 / factorial(k) as f64;
    for idx in all_tuples(dim, rank) {
        let base: Vec<usize> = slots.iter().map(|&s| idx[s]).collect();
        let mut acc = 0.0;
        for (perm, sign) in permutations_signed(&base) {
            let mut src = idx.clone();
            for (slot_pos, &slot) in slots.iter().enumerate() {
                src[slot] = perm[slot_pos];
            }
            acc += sign * comps[tuple_index(dim, &src)];
        }
        out[tuple_index(dim, &idx)] = acc * norm;
    }
    out
}

// ---------------------------------------------------------------------------
// index bookkeeping

#[inline]
pub fn tuple_index(dim: usize, idx: &[usize]) -> usize {
    let mut acc = 0;
    for &i in idx {
        acc = acc * dim + i;
    }
    acc
}

pub fn has_repeat(idx: &[usize]) -> bool {
    for i in 0..idx.len() {
        for j in (i + 1)..idx.len() {
            if idx[i] == idx[j] {
                return true;
            }
        }
    }
    false
}

/// All `dim^rank` index tuples in lexicographic order.
pub fn all_tuples(dim: usize, rank: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(dim.pow(rank as u32));
    let mut cur = vec![0usize; rank];
    loop {
        out.push(cur.clone());
        let mut k = rank;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < dim {
                break;
            }
            cur[k] = 0;
        }
    }
}

/// Strictly increasing tuples (canonical representatives).
pub fn increasing_tuples(dim: usize, rank: usize) -> Vec<Vec<usize>> {
    if rank == 0 {
        return vec![vec![]];
    }
    if rank > dim {
        return vec![];
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..rank).collect();
    loop {
        out.push(cur.clone());
        // next combination
        let mut i = rank;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < dim - (rank - i) {
                cur[i] += 1;
                for j in (i + 1)..rank {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All permutations of `base` with their signs (Heap's algorithm).
pub fn permutations_signed(base: &[usize]) -> Vec<(Vec<usize>, f64)> {
    let n = base.len();
    let mut out = Vec::with_capacity(factorial(n));
    let mut arr = base.to_vec();
    let mut c = vec![0usize; n];
    let mut sign = 1.0;
    out.push((arr.clone(), sign));
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                arr.swap(0, i);
            } else {
                arr.swap(c[i], i);
            }
            sign = -sign;
            out.push((arr.clone(), sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Sign of the permutation placing `subset` (in order) before its complement
/// (in order), as used by shuffle sums. Returns `(subset positions, sign)`.
pub fn shuffles(n: usize, r: usize) -> Vec<(Vec<usize>, f64)> {
    increasing_tuples(n, r)
        .into_iter()
        .map(|subset| {
            let mut inversions = 0usize;
            for (j, &pos) in subset.iter().enumerate() {
                inversions += pos - j;
            }
            let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
            (subset, sign)
        })
        .collect()
}

/// Totally antisymmetric permutation symbol on `0..dim`; zero on repeats.
pub fn permutation_symbol(idx: &[usize], dim: usize) -> f64 {
    debug_assert_eq!(idx.len(), dim);
    if has_repeat(idx) {
        return 0.0;
    }
    let mut inversions = 0usize;
    for i in 0..dim {
        for j in (i + 1)..dim {
            if idx[i] > idx[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product::<usize>().max(1)
}
