//! Fourth-order central finite differences in ℝ⁴.

use crate::octonion::Octonion;
use crate::quaternion::Quaternion;
use crate::scalar::{Real, FD_STEP};

/// Values that can be combined linearly by a difference stencil.
pub trait FdValue<T: Real>: Copy {
    fn lincomb(terms: &[(T, Self)]) -> Self;
}

impl<T: Real> FdValue<T> for T {
    fn lincomb(terms: &[(T, Self)]) -> Self {
        terms.iter().fold(T::zero(), |a, &(w, v)| a + w * v)
    }
}

impl<T: Real> FdValue<T> for Quaternion<T> {
    fn lincomb(terms: &[(T, Self)]) -> Self {
        terms.iter().fold(Quaternion::zero(), |a, &(w, v)| a + v.scale(w))
    }
}

impl<T: Real> FdValue<T> for Octonion<T> {
    fn lincomb(terms: &[(T, Self)]) -> Self {
        terms.iter().fold(Octonion::zero(), |a, &(w, v)| a + v.scale(w))
    }
}

impl<T: Real, const N: usize> FdValue<T> for [Octonion<T>; N] {
    fn lincomb(terms: &[(T, Self)]) -> Self {
        std::array::from_fn(|i| terms.iter().fold(Octonion::zero(), |a, (w, v)| a + v[i].scale(*w)))
    }
}

/// Default step `1e−4 · max(1, |x_k|)`.
pub fn step<T: Real>(xk: T) -> T {
    T::lit(FD_STEP) * T::one().max(xk.abs())
}

fn shifted<T: Real>(x: &[T; 4], k: usize, d: T) -> [T; 4] {
    let mut y = *x;
    y[k] = y[k] + d;
    y
}

/// `∂f/∂x_k` with step `h`.
pub fn partial<T: Real, V: FdValue<T>>(f: impl Fn(&[T; 4]) -> V, x: &[T; 4], k: usize, h: T) -> V {
    let two = T::lit(2.0);
    let w = T::one() / (T::lit(12.0) * h);
    V::lincomb(&[
        (-w, f(&shifted(x, k, two * h))),
        (T::lit(8.0) * w, f(&shifted(x, k, h))),
        (-T::lit(8.0) * w, f(&shifted(x, k, -h))),
        (w, f(&shifted(x, k, -two * h))),
    ])
}

/// All four first partials with the default step.
pub fn gradient<T: Real, V: FdValue<T>>(f: impl Fn(&[T; 4]) -> V, x: &[T; 4]) -> [V; 4] {
    std::array::from_fn(|k| partial(&f, x, k, step(x[k])))
}

/// `∂²f/∂x_k²` with step `h`.
pub fn second_partial<T: Real, V: FdValue<T>>(f: impl Fn(&[T; 4]) -> V, x: &[T; 4], k: usize, h: T) -> V {
    let two = T::lit(2.0);
    let w = T::one() / (T::lit(12.0) * h * h);
    V::lincomb(&[
        (-w, f(&shifted(x, k, two * h))),
        (T::lit(16.0) * w, f(&shifted(x, k, h))),
        (-T::lit(30.0) * w, f(x)),
        (T::lit(16.0) * w, f(&shifted(x, k, -h))),
        (-w, f(&shifted(x, k, -two * h))),
    ])
}

/// `Σ_k ∂²f/∂x_k²` with a common step `h`.
pub fn laplacian<T: Real, V: FdValue<T>>(f: impl Fn(&[T; 4]) -> V, x: &[T; 4], h: T) -> V {
    let parts: Vec<(T, V)> = (0..4).map(|k| (T::one(), second_partial(&f, x, k, h))).collect();
    V::lincomb(&parts)
}
