//! Octonion arithmetic over the structure constants ε_{ijk}.
//!
//! The product of imaginary units is `e_i e_j = −δ_{ij} + ε_{ijk} e_k` where
//! ε is totally antisymmetric and its non-zero entries are the signed orbit
//! of [`SIGMA`]. The algebra is alternative but not associative, so every
//! product in this crate is written with explicit parenthesization.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::LazyLock;

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;
use crate::scalar::Real;

/// Oriented triples generating the structure table.
pub const SIGMA: [(usize, usize, usize); 7] =
    [(1, 2, 3), (1, 4, 5), (2, 4, 6), (3, 4, 7), (5, 3, 6), (6, 1, 7), (7, 2, 5)];

/// Dense signed table ε_{ijk} for `i, j, k ∈ 1..=7` (index 0 unused).
#[derive(Clone, PartialEq, Eq)]
pub struct StructureTable {
    eps: [[[i8; 8]; 8]; 8],
    // e_i e_j = sign · e_index for i, j in 0..8, derived from `eps`.
    prod: [[(u8, i8); 8]; 8],
}

static STANDARD: LazyLock<StructureTable> = LazyLock::new(|| StructureTable::from_triples(&SIGMA));

impl StructureTable {
    /// The table generated by [`SIGMA`]; used by the `*` operator on [`Octonion`].
    pub fn standard() -> &'static StructureTable {
        &STANDARD
    }

    pub fn from_triples(triples: &[(usize, usize, usize)]) -> Self {
        // Even permutations of (0,1,2) carry sign +1, odd ones −1.
        const PERMS: [([usize; 3], i8); 6] = [
            ([0, 1, 2], 1),
            ([1, 2, 0], 1),
            ([2, 0, 1], 1),
            ([1, 0, 2], -1),
            ([0, 2, 1], -1),
            ([2, 1, 0], -1),
        ];
        let mut eps = [[[0i8; 8]; 8]; 8];
        for &(a, b, c) in triples {
            let t = [a, b, c];
            for (p, s) in PERMS {
                eps[t[p[0]]][t[p[1]]][t[p[2]]] = s;
            }
        }
        Self::from_eps(eps)
    }

    fn from_eps(eps: [[[i8; 8]; 8]; 8]) -> Self {
        let mut prod = [[(0u8, 0i8); 8]; 8];
        for (i, row) in prod.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = match (i, j) {
                    (0, j) => (j as u8, 1),
                    (i, 0) => (i as u8, 1),
                    (i, j) if i == j => (0, -1),
                    (i, j) => (1..8)
                        .find(|&k| eps[i][j][k] != 0)
                        .map(|k| (k as u8, eps[i][j][k]))
                        .unwrap_or((0, 0)),
                };
            }
        }
        Self { eps, prod }
    }

    pub fn eps(&self, i: usize, j: usize, k: usize) -> i8 {
        self.eps[i][j][k]
    }

    /// Copy of the table with the single entry ε_{ijk} negated. Only used to
    /// demonstrate that the algebraic law checks detect a corrupted table.
    pub fn with_flipped_entry(&self, i: usize, j: usize, k: usize) -> Self {
        let mut eps = self.eps;
        eps[i][j][k] = -eps[i][j][k];
        Self::from_eps(eps)
    }

    pub fn is_totally_antisymmetric(&self) -> bool {
        (1..8).all(|i| {
            (1..8).all(|j| {
                (1..8).all(|k| {
                    let e = self.eps[i][j][k];
                    e == -self.eps[j][i][k] && e == -self.eps[i][k][j] && e == self.eps[j][k][i]
                })
            })
        })
    }

    /// Product of two basis units as `(index, sign)`.
    pub fn unit_product(&self, i: usize, j: usize) -> (usize, i8) {
        let (k, s) = self.prod[i][j];
        (k as usize, s)
    }

    pub fn mul<T: Real>(&self, x: &Octonion<T>, y: &Octonion<T>) -> Octonion<T> {
        let mut z = [T::zero(); 8];
        for (i, &xi) in x.c.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, &yj) in y.c.iter().enumerate() {
                let (k, s) = self.prod[i][j];
                match s {
                    1 => z[k as usize] = z[k as usize] + xi * yj,
                    -1 => z[k as usize] = z[k as usize] - xi * yj,
                    _ => {}
                }
            }
        }
        Octonion { c: z }
    }
}

impl fmt::Debug for StructureTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut nonzero = Vec::new();
        for i in 1..8 {
            for j in 1..8 {
                for k in 1..8 {
                    if self.eps[i][j][k] == 1 && i < j {
                        nonzero.push((i, j, k));
                    }
                }
            }
        }
        f.debug_struct("StructureTable").field("positive_ij", &nonzero).finish()
    }
}

/// An octonion `c₀ + Σ c_k e_k` in the standard basis.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Octonion<T> {
    c: [T; 8],
}

impl<T: Real> Octonion<T> {
    pub const fn new(c: [T; 8]) -> Self {
        Self { c }
    }

    pub fn zero() -> Self {
        Self { c: [T::zero(); 8] }
    }

    pub fn one() -> Self {
        Self::real(T::one())
    }

    pub fn real(r: T) -> Self {
        let mut c = [T::zero(); 8];
        c[0] = r;
        Self { c }
    }

    /// Basis unit `e_k`, with `e_0 = 1`.
    pub fn basis(k: usize) -> Self {
        let mut c = [T::zero(); 8];
        c[k] = T::one();
        Self { c }
    }

    pub fn from_f64(c: [f64; 8]) -> Self {
        Self { c: c.map(T::lit) }
    }

    /// Embeds a quaternion in the standard slice `span{1, e1, e2, e3}`.
    pub fn from_quaternion(q: Quaternion<T>) -> Self {
        let mut c = [T::zero(); 8];
        c[..4].copy_from_slice(&q.c);
        Self { c }
    }

    pub fn coords(&self) -> &[T; 8] {
        &self.c
    }

    pub fn coord(&self, k: usize) -> T {
        self.c[k]
    }

    pub fn re(&self) -> T {
        self.c[0]
    }

    pub fn im(&self) -> Self {
        let mut c = self.c;
        c[0] = T::zero();
        Self { c }
    }

    pub fn conj(&self) -> Self {
        let mut c = self.c.map(|v| -v);
        c[0] = self.c[0];
        Self { c }
    }

    pub fn norm_sq(&self) -> T {
        self.c.iter().fold(T::zero(), |a, &v| a + v * v)
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.norm_sq();
        if n.is_zero() {
            return Err(Error::DivisionByZero("inverse of the zero octonion"));
        }
        Ok(self.conj().scale(T::one() / n))
    }

    pub fn scale(&self, s: T) -> Self {
        Self { c: self.c.map(|v| v * s) }
    }

    /// Euclidean inner product on ℝ⁸.
    pub fn dot(&self, o: &Self) -> T {
        self.c.iter().zip(o.c.iter()).fold(T::zero(), |a, (&x, &y)| a + x * y)
    }

    /// Largest coordinate magnitude.
    pub fn max_abs(&self) -> T {
        self.c.iter().fold(T::zero(), |a, &v| a.max(v.abs()))
    }

    /// Coordinatewise distance `max_k |x_k − y_k|`.
    pub fn dist(&self, o: &Self) -> T {
        (*self - *o).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|v| v.is_finite())
    }

    pub fn cast<U: Real>(&self) -> Octonion<U> {
        Octonion { c: self.c.map(|v| U::lit(v.as_f64())) }
    }

    pub fn to_f64(&self) -> [f64; 8] {
        self.c.map(|v| v.as_f64())
    }
}

impl<T: fmt::Debug> fmt::Debug for Octonion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Octonion{:?}", self.c)
    }
}

impl<T: Real> fmt::Display for Octonion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.c[0])?;
        for k in 1..8 {
            let v = self.c[k];
            if v < T::zero() {
                write!(f, " - {}e{k}", -v)?;
            } else {
                write!(f, " + {v}e{k}")?;
            }
        }
        Ok(())
    }
}

impl<T: Real> Add for Octonion<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { c: std::array::from_fn(|i| self.c[i] + o.c[i]) }
    }
}

impl<T: Real> AddAssign for Octonion<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for Octonion<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { c: std::array::from_fn(|i| self.c[i] - o.c[i]) }
    }
}

impl<T: Real> SubAssign for Octonion<T> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Real> Neg for Octonion<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { c: self.c.map(|v| -v) }
    }
}

impl<T: Real> Mul for Octonion<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        StructureTable::standard().mul(&self, &o)
    }
}

impl<T: Real> std::iter::Sum for Octonion<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

/// Left multiplication operator `L_a z = a z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeftMul<T> {
    pub a: Octonion<T>,
}

impl<T: Real> LeftMul<T> {
    pub fn new(a: Octonion<T>) -> Self {
        Self { a }
    }

    pub fn apply(&self, z: &Octonion<T>) -> Octonion<T> {
        self.a * *z
    }

    /// `L_self ∘ L_other`, evaluated without re-associating.
    pub fn then_apply(&self, other: &LeftMul<T>, z: &Octonion<T>) -> Octonion<T> {
        self.apply(&other.apply(z))
    }
}

/// Octonion written as `a + e4·b` with `a, b ∈ span{1, e1, e2, e3}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuaternionPair<T> {
    pub a: Octonion<T>,
    pub b: Octonion<T>,
}

impl<T: Real> QuaternionPair<T> {
    pub fn new(a: Octonion<T>, b: Octonion<T>) -> Self {
        Self { a, b }
    }

    /// Splits `x` into its pair; always succeeds.
    pub fn from_octonion(x: &Octonion<T>) -> Self {
        let c = x.coords();
        let a = Octonion::new([c[0], c[1], c[2], c[3], T::zero(), T::zero(), T::zero(), T::zero()]);
        // e4⁻¹ = −e4 and e4⁻¹(e4 b) = b by alternativity.
        let b = (-Octonion::basis(4)) * (*x - a);
        Self { a, b }
    }

    pub fn to_octonion(&self) -> Octonion<T> {
        self.a + Octonion::basis(4) * self.b
    }

    fn slice_residual(&self) -> T {
        [self.a, self.b]
            .iter()
            .flat_map(|q| q.coords()[4..].iter().copied())
            .fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

/// Cayley–Dickson doubling product
/// `(a + e4 b)(c + e4 d) = (ac − d b̄) + e4(ā d + c b)`.
///
/// Only products inside `span{1, e1, e2, e3}` are used, so this is an
/// independent check on the full structure table.
pub fn cayley_dickson_mul<T: Real>(
    x: &QuaternionPair<T>,
    y: &QuaternionPair<T>,
    tol: T,
) -> Result<QuaternionPair<T>> {
    let residual = x.slice_residual().max(y.slice_residual());
    if residual > tol {
        return Err(Error::NotInSlice { residual: residual.as_f64() });
    }
    let (a, b, c, d) = (x.a, x.b, y.a, y.b);
    Ok(QuaternionPair { a: a * c - d * b.conj(), b: a.conj() * d + c * b })
}
