//! Sparse polynomials in `(x₀, x₁, x₂, x₃)` with coefficients in ℝ, ℍ or 𝕆.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::octonion::Octonion;
use crate::quaternion::Quaternion;
use crate::scalar::Real;

/// Exponent vector of a monomial `x₀^a x₁^b x₂^c x₃^d`.
pub type Exponent = [u32; 4];

/// Coefficient ring of a [`Poly`]: a real vector space.
pub trait Coefficient<T: Real>: Copy + PartialEq + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self> {
    fn zero() -> Self;
    fn from_real(r: T) -> Self;
    fn scale(self, s: T) -> Self;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

impl<T: Real> Coefficient<T> for T {
    fn zero() -> Self {
        T::zero()
    }
    fn from_real(r: T) -> Self {
        r
    }
    fn scale(self, s: T) -> Self {
        self * s
    }
}

impl<T: Real> Coefficient<T> for Quaternion<T> {
    fn zero() -> Self {
        Quaternion::zero()
    }
    fn from_real(r: T) -> Self {
        Quaternion::real(r)
    }
    fn scale(self, s: T) -> Self {
        Quaternion::scale(self, s)
    }
}

impl<T: Real> Coefficient<T> for Octonion<T> {
    fn zero() -> Self {
        Octonion::zero()
    }
    fn from_real(r: T) -> Self {
        Octonion::real(r)
    }
    fn scale(self, s: T) -> Self {
        Octonion::scale(&self, s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T, C> {
    terms: BTreeMap<Exponent, C>,
    _scalar: std::marker::PhantomData<T>,
}

pub type RealPoly<T> = Poly<T, T>;
pub type QuatPoly<T> = Poly<T, Quaternion<T>>;
pub type OctPoly<T> = Poly<T, Octonion<T>>;

impl<T: Real, C: Coefficient<T>> Default for Poly<T, C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Real, C: Coefficient<T>> Poly<T, C> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new(), _scalar: std::marker::PhantomData }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial([0; 4], c)
    }

    pub fn monomial(exp: Exponent, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c);
        p
    }

    /// The coordinate `x_k` with unit coefficient.
    pub fn var(k: usize) -> Self {
        let mut e = [0; 4];
        e[k] = 1;
        Self::monomial(e, C::from_real(T::one()))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponent, C)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: Exponent, c: C) {
        let entry = self.terms.entry(exp).or_insert_with(C::zero);
        *entry = *entry + c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exp: &Exponent) -> C {
        self.terms.get(exp).copied().unwrap_or_else(C::zero)
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (*e, c.scale(s))))
    }

    pub fn map_coefficients<D: Coefficient<T>>(&self, f: impl Fn(C) -> D) -> Poly<T, D> {
        Poly::from_terms(self.terms.iter().map(|(e, c)| (*e, f(*c))))
    }

    /// Product with a real polynomial.
    pub fn mul_real(&self, r: &RealPoly<T>) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, &cb) in r.terms() {
                out.add_term(add_exp(ea, eb), ca.scale(cb));
            }
        }
        out
    }

    /// `∂/∂x_k`, exact.
    pub fn derivative(&self, k: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[k] > 0 {
                let mut d = *e;
                d[k] -= 1;
                out.add_term(d, c.scale(T::lit(e[k] as f64)));
            }
        }
        out
    }

    /// Mixed partial `∂₀^{a₀} ∂₁^{a₁} ∂₂^{a₂} ∂₃^{a₃}`.
    pub fn derivative_multi(&self, orders: Exponent) -> Self {
        let mut p = self.clone();
        for (k, &n) in orders.iter().enumerate() {
            for _ in 0..n {
                p = p.derivative(k);
            }
        }
        p
    }

    pub fn eval(&self, x: &[T; 4]) -> C {
        let deg = self.terms.keys().flat_map(|e| e.iter().copied()).max().unwrap_or(0) as usize;
        let mut pows = vec![[T::one(); 4]; deg + 1];
        for p in 1..=deg {
            for k in 0..4 {
                pows[p][k] = pows[p - 1][k] * x[k];
            }
        }
        self.terms.iter().fold(C::zero(), |acc, (e, c)| {
            let m = pows[e[0] as usize][0] * pows[e[1] as usize][1] * pows[e[2] as usize][2] * pows[e[3] as usize][3];
            acc + c.scale(m)
        })
    }
}

impl<T: Real, C: Coefficient<T> + Mul<Output = C>> Poly<T, C> {
    /// Product `self · other` with coefficients multiplied in that order.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                out.add_term(add_exp(ea, eb), ca * cb);
            }
        }
        out
    }
}

impl<T: Real, C: Coefficient<T>> Add for &Poly<T, C> {
    type Output = Poly<T, C>;
    fn add(self, o: Self) -> Poly<T, C> {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, *c);
        }
        out
    }
}

impl<T: Real, C: Coefficient<T>> Sub for &Poly<T, C> {
    type Output = Poly<T, C>;
    fn sub(self, o: Self) -> Poly<T, C> {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, -*c);
        }
        out
    }
}

fn add_exp(a: &Exponent, b: &Exponent) -> Exponent {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

/// `x₁² + x₂² + x₃²`.
pub fn radial_sq<T: Real>() -> RealPoly<T> {
    RealPoly::from_terms([([0, 2, 0, 0], T::one()), ([0, 0, 2, 0], T::one()), ([0, 0, 0, 2], T::one())])
}

/// `x₀² + x₁² + x₂² + x₃²`.
pub fn norm_sq<T: Real>() -> RealPoly<T> {
    &radial_sq::<T>() + &RealPoly::monomial([2, 0, 0, 0], T::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_and_eval() {
        // p = 3 x0² x1 + 2 x3
        let p = RealPoly::<f64>::from_terms([([2, 1, 0, 0], 3.0), ([0, 0, 0, 1], 2.0)]);
        assert_eq!(p.eval(&[2.0, 5.0, 0.0, -1.0]), 58.0);
        let d0 = p.derivative(0);
        assert_eq!(d0, RealPoly::monomial([1, 1, 0, 0], 6.0));
        assert_eq!(p.derivative_multi([2, 1, 0, 0]), RealPoly::constant(6.0));
        assert!(p.derivative(2).is_empty());
        assert_eq!(p.degree(), 3);
    }

    #[test]
    fn cancellation_removes_terms() {
        let a = RealPoly::<f64>::var(1);
        let z = &a - &a;
        assert!(z.is_empty());
    }

    #[test]
    fn quaternion_product_order() {
        let i = QuatPoly::<f64>::constant(Quaternion::unit(1));
        let j = QuatPoly::<f64>::constant(Quaternion::unit(2));
        assert_eq!(i.mul(&j).coefficient(&[0; 4]), Quaternion::unit(3));
        assert_eq!(j.mul(&i).coefficient(&[0; 4]), -Quaternion::unit(3));
    }
}
