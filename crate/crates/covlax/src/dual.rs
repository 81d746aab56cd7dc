//! Forward-mode dual numbers.
//!
//! A dual number `a + eps a'` carries a value and a first-order derivative
//! through arithmetic, with `eps^2 = 0`. Every field evaluator in this crate
//! (metrics, symmetry forms, Hamiltonians, Lax operators) is written against
//! dual inputs, so exact directional derivatives cost one extra evaluation and
//! no step-size tuning.

use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// `re + eps * du` with `eps^2 = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Dual {
    pub re: f64,
    pub du: f64,
}

impl Dual {
    pub const ZERO: Dual = Dual { re: 0.0, du: 0.0 };
    pub const ONE: Dual = Dual { re: 1.0, du: 0.0 };

    #[inline]
    pub fn new(re: f64, du: f64) -> Self {
        Dual { re, du }
    }

    /// A constant: zero infinitesimal part.
    #[inline]
    pub fn constant(re: f64) -> Self {
        Dual { re, du: 0.0 }
    }

    /// A seeded variable: unit infinitesimal part.
    #[inline]
    pub fn seeded(re: f64) -> Self {
        Dual { re, du: 1.0 }
    }
}

/// Scalar arithmetic shared by `f64` and [`Dual`].
///
/// Generic kernels (matrix inversion, Gram-Schmidt frames, exterior algebra)
/// are written once over this trait and instantiated at both types.
pub trait Scalar:
    Copy
    + std::fmt::Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    const ZERO: Self;
    const ONE: Self;

    fn from_f64(v: f64) -> Self;
    /// The value part (drops any derivative payload).
    fn value(self) -> f64;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn powi(self, n: i32) -> Self;
}

impl Scalar for f64 {
    const ZERO: f64 = 0.0;
    const ONE: f64 = 1.0;

    #[inline]
    fn from_f64(v: f64) -> f64 {
        v
    }
    #[inline]
    fn value(self) -> f64 {
        self
    }
    #[inline]
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    #[inline]
    fn sqrt(self) -> f64 {
        f64::sqrt(self)
    }
    #[inline]
    fn sin(self) -> f64 {
        f64::sin(self)
    }
    #[inline]
    fn cos(self) -> f64 {
        f64::cos(self)
    }
    #[inline]
    fn powi(self, n: i32) -> f64 {
        f64::powi(self, n)
    }
}

impl Scalar for Dual {
    const ZERO: Dual = Dual::ZERO;
    const ONE: Dual = Dual::ONE;

    #[inline]
    fn from_f64(v: f64) -> Dual {
        Dual::constant(v)
    }
    #[inline]
    fn value(self) -> f64 {
        self.re
    }
    #[inline]
    fn abs(self) -> Dual {
        // Sign convention at re = 0: treat as +. All catalog uses stay away from 0.
        if self.re < 0.0 {
            -self
        } else {
            self
        }
    }
    #[inline]
    fn sqrt(self) -> Dual {
        let r = self.re.sqrt();
        Dual::new(r, self.du / (2.0 * r))
    }
    #[inline]
    fn sin(self) -> Dual {
        Dual::new(self.re.sin(), self.du * self.re.cos())
    }
    #[inline]
    fn cos(self) -> Dual {
        Dual::new(self.re.cos(), -self.du * self.re.sin())
    }
    #[inline]
    fn powi(self, n: i32) -> Dual {
        Dual::new(
            self.re.powi(n),
            self.du * f64::from(n) * self.re.powi(n - 1),
        )
    }
}

impl Add for Dual {
    type Output = Dual;
    #[inline]
    fn add(self, o: Dual) -> Dual {
        Dual::new(self.re + o.re, self.du + o.du)
    }
}

impl Sub for Dual {
    type Output = Dual;
    #[inline]
    fn sub(self, o: Dual) -> Dual {
        Dual::new(self.re - o.re, self.du - o.du)
    }
}

impl Mul for Dual {
    type Output = Dual;
    #[inline]
    fn mul(self, o: Dual) -> Dual {
        Dual::new(self.re * o.re, self.re * o.du + self.du * o.re)
    }
}

impl Div for Dual {
    type Output = Dual;
    #[inline]
    fn div(self, o: Dual) -> Dual {
        let inv = 1.0 / o.re;
        Dual::new(self.re * inv, (self.du - self.re * o.du * inv) * inv)
    }
}

impl Neg for Dual {
    type Output = Dual;
    #[inline]
    fn neg(self) -> Dual {
        Dual::new(-self.re, -self.du)
    }
}

impl AddAssign for Dual {
    #[inline]
    fn add_assign(&mut self, o: Dual) {
        *self = *self + o;
    }
}
impl SubAssign for Dual {
    #[inline]
    fn sub_assign(&mut self, o: Dual) {
        *self = *self - o;
    }
}
impl MulAssign for Dual {
    #[inline]
    fn mul_assign(&mut self, o: Dual) {
        *self = *self * o;
    }
}
impl DivAssign for Dual {
    #[inline]
    fn div_assign(&mut self, o: Dual) {
        *self = *self / o;
    }
}

/// Lift real coordinates to constant duals.
pub fn lift(xs: &[f64]) -> Vec<Dual> {
    xs.iter().map(|&v| Dual::constant(v)).collect()
}

/// Lift real coordinates with a unit seed on slot `i`.
pub fn lift_seeded(xs: &[f64], i: usize) -> Vec<Dual> {
    let mut out = lift(xs);
    out[i].du = 1.0;
    out
}
