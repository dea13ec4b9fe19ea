//! Real quaternions in coordinates `(w, x, y, z)` relative to `1, i, j, k`.
//!
//! Every quaternionic slice `span{1, I, J, K}` of the octonions is isomorphic
//! to this algebra via `i ↦ I, j ↦ J, k ↦ K`, so slice-internal computations
//! (Fueter polynomials, kernel derivatives) are carried out here and embedded
//! with [`Frame::embed`](crate::geometry::Frame::embed).

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quaternion<T> {
    pub c: [T; 4],
}

impl<T: Real> Quaternion<T> {
    pub const fn new(c: [T; 4]) -> Self {
        Self { c }
    }

    pub fn zero() -> Self {
        Self { c: [T::zero(); 4] }
    }

    pub fn one() -> Self {
        Self::real(T::one())
    }

    pub fn real(r: T) -> Self {
        Self { c: [r, T::zero(), T::zero(), T::zero()] }
    }

    /// Unit `1, i, j, k` for `k = 0..4`.
    pub fn unit(k: usize) -> Self {
        let mut c = [T::zero(); 4];
        c[k] = T::one();
        Self { c }
    }

    pub fn conj(self) -> Self {
        Self { c: [self.c[0], -self.c[1], -self.c[2], -self.c[3]] }
    }

    pub fn norm_sq(self) -> T {
        self.c.iter().fold(T::zero(), |a, &v| a + v * v)
    }

    pub fn scale(self, s: T) -> Self {
        Self { c: self.c.map(|v| v * s) }
    }

    pub fn max_abs(self) -> T {
        self.c.iter().fold(T::zero(), |a, &v| a.max(v.abs()))
    }

    pub fn is_zero(self) -> bool {
        self.c.iter().all(|v| v.is_zero())
    }
}

impl<T: Real> Add for Quaternion<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { c: std::array::from_fn(|i| self.c[i] + o.c[i]) }
    }
}

impl<T: Real> AddAssign for Quaternion<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for Quaternion<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { c: std::array::from_fn(|i| self.c[i] - o.c[i]) }
    }
}

impl<T: Real> Neg for Quaternion<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { c: self.c.map(|v| -v) }
    }
}

impl<T: Real> Mul for Quaternion<T> {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let [a0, a1, a2, a3] = self.c;
        let [b0, b1, b2, b3] = b.c;
        Self {
            c: [
                a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
                a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
                a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
                a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
            ],
        }
    }
}
