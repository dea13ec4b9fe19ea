//! Fueter polynomials `P_α`, kernel derivatives `V_α = ∂_α V`, and the
//! Taylor and Laurent expansions built from them.
//!
//! Both families are computed once as quaternion-coefficient polynomials in
//! slice coordinates and embedded into a slice with [`Frame::embed`], so they
//! do not depend on the frame.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dirac::{cf_check, dirac_fd, dirac_right_fd, Derivatives};
use crate::error::{Error, Result};
use crate::geometry::{Frame, R4Point, ShellSpec};
use crate::octonion::Octonion;
use crate::poly::{norm_sq, QuatPoly, RealPoly};
use crate::quadrature::{integrate, QuadCounts, SphereRule};
use crate::quaternion::Quaternion;
use crate::scalar::{Real, CF_TOLERANCE_ANALYTIC, CF_TOLERANCE_FD};
use crate::stem::{RepMatrix, SliceFunction, StemFunction};

/// Largest supported `|α|`.
pub const ORDER_CAP: usize = 8;

/// `α = (α₁, α₂, α₃)`; `∂_α = ∂₁^{α₁} ∂₂^{α₂} ∂₃^{α₃}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MultiIndex(pub [u32; 3]);

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex([0; 3]);

    pub fn new(a1: u32, a2: u32, a3: u32) -> Self {
        Self([a1, a2, a3])
    }

    pub fn order(&self) -> usize {
        self.0.iter().sum::<u32>() as usize
    }

    /// `α! = α₁! α₂! α₃!`.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&a| factorial(a as usize)).product()
    }

    /// Derivative orders in `(x₀, x₁, x₂, x₃)`.
    pub fn exponent(&self) -> [u32; 4] {
        [0, self.0[0], self.0[1], self.0[2]]
    }

    /// `α − e_i` for `i ∈ {1, 2, 3}`, if nonnegative.
    pub fn lowered(&self, i: usize) -> Option<Self> {
        let mut a = self.0;
        a[i - 1] = a[i - 1].checked_sub(1)?;
        Some(Self(a))
    }

    /// All `α` with `|α| = n`, lexicographically descending.
    pub fn of_order(n: usize) -> Vec<Self> {
        let n = n as u32;
        let mut out = Vec::new();
        for a1 in (0..=n).rev() {
            for a2 in (0..=n - a1).rev() {
                out.push(Self([a1, a2, n - a1 - a2]));
            }
        }
        out
    }

    /// All `α` with `|α| ≤ n` in graded lexicographic order.
    pub fn up_to(n: usize) -> Vec<Self> {
        (0..=n).flat_map(Self::of_order).collect()
    }

    fn check_cap(&self) -> Result<()> {
        if self.order() > ORDER_CAP {
            Err(Error::Capacity { order: self.order(), cap: ORDER_CAP })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `z_i = x_i − e_i x₀` with `e_i ∈ {i, j, k}`.
fn z<T: Real>(i: usize) -> QuatPoly<T> {
    let mut e = [0; 4];
    e[i] = 1;
    QuatPoly::from_terms([(e, Quaternion::one()), ([1, 0, 0, 0], -Quaternion::unit(i))])
}

/// `P_α` as a quaternion polynomial.
///
/// `S(α) = Σ_{α_i > 0} z_i S(α − e_i)` enumerates every distinct ordering of
/// the factors once; `P_α = (α!/n!) S(α)`.
pub fn fueter_polynomial<T: Real>(alpha: MultiIndex) -> Result<QuatPoly<T>> {
    alpha.check_cap()?;
    let mut memo = BTreeMap::new();
    let s = ordered_sum(alpha, &mut memo);
    Ok(s.scale(T::lit(alpha.factorial() / factorial(alpha.order()))))
}

fn ordered_sum<T: Real>(alpha: MultiIndex, memo: &mut BTreeMap<MultiIndex, QuatPoly<T>>) -> QuatPoly<T> {
    if alpha == MultiIndex::ZERO {
        return QuatPoly::constant(Quaternion::one());
    }
    if let Some(p) = memo.get(&alpha) {
        return p.clone();
    }
    let mut acc = QuatPoly::zero();
    for i in 1..=3 {
        if let Some(lower) = alpha.lowered(i) {
            acc = &acc + &z(i).mul(&ordered_sum(lower, memo));
        }
    }
    memo.insert(alpha, acc.clone());
    acc
}

/// `P_α(𝕀xᵀ)`.
pub fn fueter_poly<T: Real>(alpha: MultiIndex, frame: &Frame<T>, x: &R4Point<T>) -> Result<Octonion<T>> {
    Ok(frame.embed(fueter_polynomial::<T>(alpha)?.eval(&x.x)))
}

/// `P(x) / |x|^{2m}` with a quaternion polynomial `P`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalKernelTerm<T: Real> {
    pub numerator: QuatPoly<T>,
    pub power: u32,
}

impl<T: Real> RationalKernelTerm<T> {
    /// `V(x) = x̄ / (2π²|x|⁴)`.
    pub fn kernel() -> Self {
        let c = T::lit(1.0 / (2.0 * PI * PI));
        let numerator = QuatPoly::from_terms((0..4).map(|k| {
            let mut e = [0; 4];
            e[k] = 1;
            let sign = if k == 0 { c } else { -c };
            (e, Quaternion::unit(k).scale(sign))
        }));
        Self { numerator, power: 2 }
    }

    /// `∂/∂x_k (P/|x|^{2m}) = (|x|² ∂_k P − 2m x_k P) / |x|^{2m+2}`.
    pub fn derivative(&self, k: usize) -> Self {
        let s: RealPoly<T> = norm_sq();
        let xk = RealPoly::monomial(
            {
                let mut e = [0; 4];
                e[k] = 1;
                e
            },
            T::lit(2.0 * self.power as f64),
        );
        let numerator = &self.numerator.derivative(k).mul_real(&s) - &self.numerator.mul_real(&xk);
        Self { numerator, power: self.power + 1 }
    }

    pub fn eval(&self, x: &[T; 4]) -> Result<Quaternion<T>> {
        let s = x.iter().fold(T::zero(), |a, &c| a + c * c);
        if s.sqrt() <= T::lit(crate::cauchy::SINGULARITY_TOLERANCE) {
            return Err(Error::Singularity { distance: s.sqrt().as_f64() });
        }
        Ok(self.numerator.eval(x).scale(T::one() / s.powi(self.power as i32)))
    }
}

/// `V_α` in closed form.
pub fn kernel_derivative<T: Real>(alpha: MultiIndex) -> Result<RationalKernelTerm<T>> {
    alpha.check_cap()?;
    let mut t = RationalKernelTerm::kernel();
    for (i, &a) in alpha.0.iter().enumerate() {
        for _ in 0..a {
            t = t.derivative(i + 1);
        }
    }
    Ok(t)
}

/// `V_α(u)` for `u` in the slice of `frame`.
pub fn kernel_deriv<T: Real>(alpha: MultiIndex, frame: &Frame<T>, u: &Octonion<T>) -> Result<Octonion<T>> {
    let x = frame.coords(u, T::lit(1e-10))?;
    Ok(frame.embed(kernel_derivative::<T>(alpha)?.eval(&x.x)?))
}

/// `P_α` and `V_α` for every `|α| ≤ N`, in graded lexicographic order.
#[derive(Clone, Debug)]
pub struct FueterBasis<T: Real> {
    pub indices: Vec<MultiIndex>,
    pub polynomials: Vec<QuatPoly<T>>,
    pub kernels: Vec<RationalKernelTerm<T>>,
}

impl<T: Real> FueterBasis<T> {
    pub fn new(degree: usize) -> Result<Self> {
        if degree > ORDER_CAP {
            return Err(Error::Capacity { order: degree, cap: ORDER_CAP });
        }
        let indices = MultiIndex::up_to(degree);
        let mut memo = BTreeMap::new();
        let polynomials = indices
            .iter()
            .map(|a| ordered_sum::<T>(*a, &mut memo).scale(T::lit(a.factorial() / factorial(a.order()))))
            .collect();
        let kernels = indices.iter().map(|a| kernel_derivative(*a)).collect::<Result<_>>()?;
        Ok(Self { indices, polynomials, kernels })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    Taylor,
    Laurent,
}

/// Where Taylor coefficients come from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CoefficientSource {
    /// `∂_α f(q₀)/α!` by exact differentiation of a polynomial stem.
    Analytic,
    /// `((−1)ⁿ/α!) ∫ V_α(ξ − q₀)(n(ξ) f(ξ)) dS` over the domain's outer sphere.
    Boundary(QuadCounts),
}

/// A truncated Taylor series or Laurent biseries about `q₀ = 𝕀x₀ᵀ`.
#[derive(Clone, Debug)]
pub struct SeriesExpansion<T: Real> {
    pub kind: SeriesKind,
    pub frame: Frame<T>,
    pub center: R4Point<T>,
    pub degree: usize,
    pub inner: T,
    pub outer: T,
    /// Taylor coefficients, or `A_α` for a Laurent series.
    pub regular: Vec<Octonion<T>>,
    /// `B_α`; empty for a Taylor series.
    pub principal: Vec<Octonion<T>>,
    basis: Arc<FueterBasis<T>>,
}

impl<T: Real> SeriesExpansion<T> {
    pub fn indices(&self) -> &[MultiIndex] {
        &self.basis.indices
    }

    /// The same expansion cut at `|α| ≤ degree`.
    pub fn truncated(&self, degree: usize) -> Self {
        let degree = degree.min(self.degree);
        let n = self.indices().iter().take_while(|a| a.order() <= degree).count();
        let basis = FueterBasis {
            indices: self.basis.indices[..n].to_vec(),
            polynomials: self.basis.polynomials[..n].to_vec(),
            kernels: self.basis.kernels[..n].to_vec(),
        };
        Self {
            degree,
            regular: self.regular[..n].to_vec(),
            principal: self.principal.iter().take(n).copied().collect(),
            basis: Arc::new(basis),
            ..self.clone()
        }
    }

    pub fn coefficient(&self, alpha: MultiIndex) -> Option<Octonion<T>> {
        self.indices().iter().position(|a| *a == alpha).map(|i| self.regular[i])
    }

    pub fn principal_coefficient(&self, alpha: MultiIndex) -> Option<Octonion<T>> {
        self.indices().iter().position(|a| *a == alpha).and_then(|i| self.principal.get(i).copied())
    }

    fn check_point(&self, x: &R4Point<T>) -> Result<()> {
        let r = x.sub(&self.center).norm();
        let ok = match self.kind {
            SeriesKind::Taylor => r < self.outer,
            SeriesKind::Laurent => r > self.inner && r < self.outer,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::OutsideDomain(format!("|q − q₀| = {} outside ({}, {})", r, self.inner, self.outer)))
        }
    }

    /// Truncated series at `𝕀xᵀ`, `𝕀` the expansion frame.
    pub fn eval(&self, x: &R4Point<T>) -> Result<Octonion<T>> {
        self.check_point(x)?;
        self.eval_unchecked(x)
    }

    fn eval_unchecked(&self, x: &R4Point<T>) -> Result<Octonion<T>> {
        let y = x.sub(&self.center).x;
        let mut acc = Octonion::zero();
        for (i, p) in self.basis.polynomials.iter().enumerate() {
            acc += self.frame.embed(p.eval(&y)) * self.regular[i];
        }
        for (i, b) in self.principal.iter().enumerate() {
            acc += self.frame.embed(self.basis.kernels[i].eval(&y)?) * *b;
        }
        Ok(acc)
    }

    /// Truncated series at `𝕀′xᵀ` through the representation matrix:
    /// `Σ 𝒫_α(q, q₀, 𝕀′) A_α + Σ 𝒱_α(q, q₀, 𝕀′) B_α`.
    pub fn eval_in_frame(&self, x: &R4Point<T>, frame_prime: &Frame<T>) -> Result<Octonion<T>> {
        let pts = x.reflections();
        let mut vals = [Octonion::zero(); 4];
        for (v, p) in vals.iter_mut().zip(&pts) {
            self.check_point(p)?;
            *v = self.eval_unchecked(p)?;
        }
        Ok(frame_prime.contract(&RepMatrix::new(&self.frame).apply(&vals)))
    }

    /// Rows `α₁,α₂,α₃,kind,c0..c7`.
    pub fn coefficients_csv(&self) -> String {
        let mut out = String::from("alpha1,alpha2,alpha3,kind,c0,c1,c2,c3,c4,c5,c6,c7\n");
        let regular_kind = match self.kind {
            SeriesKind::Taylor => "taylor",
            SeriesKind::Laurent => "A",
        };
        let mut row = |a: &MultiIndex, kind: &str, c: &Octonion<T>| {
            let coords: Vec<String> = c.to_f64().iter().map(|v| format!("{v:?}")).collect();
            out.push_str(&format!("{},{},{},{},{}\n", a.0[0], a.0[1], a.0[2], kind, coords.join(",")));
        };
        for (a, c) in self.indices().iter().zip(&self.regular) {
            row(a, regular_kind, c);
        }
        for (a, c) in self.indices().iter().zip(&self.principal) {
            row(a, "B", c);
        }
        out
    }

    pub fn manifest(&self) -> SeriesManifest {
        SeriesManifest {
            kind: self.kind,
            center: self.frame.compose(&self.center).to_f64(),
            frame: self.frame.units().map(|u| u.to_f64()),
            degree: self.degree,
            inner_radius: self.inner.as_f64(),
            outer_radius: finite_or_none(self.outer.as_f64()),
            coefficients: self.regular.len() + self.principal.len(),
        }
    }
}

fn finite_or_none(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesManifest {
    pub kind: SeriesKind,
    pub center: [f64; 8],
    pub frame: [[f64; 8]; 4],
    pub degree: usize,
    pub inner_radius: f64,
    pub outer_radius: Option<f64>,
    pub coefficients: usize,
}

fn require_regular<T: Real>(f: &SliceFunction<T>, domain: &ShellSpec<T>) -> Result<()> {
    let stem = f.stem();
    let tol = T::lit(if stem.has_analytic_derivatives() { CF_TOLERANCE_ANALYTIC } else { CF_TOLERANCE_FD });
    let rep = cf_check(stem, 64, tol, 0x5eed, Some(domain), Derivatives::Auto)?;
    if rep.pass {
        Ok(())
    } else {
        Err(Error::NotRegular { residual: rep.max_residual.as_f64(), tolerance: tol.as_f64() })
    }
}

/// Node data `(ξ − q₀, weight · n(ξ) f(ξ))` on a sphere about the centre.
fn sphere_data<T: Real>(
    f: &SliceFunction<T>,
    frame: &Frame<T>,
    center: &R4Point<T>,
    radius: T,
    counts: &QuadCounts,
) -> Vec<([T; 4], Octonion<T>)> {
    let rule = SphereRule::new(*center, radius, counts);
    rule.nodes
        .par_iter()
        .map(|n| {
            let nf = frame.compose(&n.normal) * f.eval_in_frame(frame, &n.point);
            (n.point.sub(center).x, nf.scale(n.weight))
        })
        .collect()
}

/// `((−1)ⁿ/α!) ∫ K_α(ξ − q₀)(n f) dS` for each `α`, `K_α` given as a quaternion-valued map.
fn boundary_coefficients<T: Real>(
    frame: &Frame<T>,
    data: &[([T; 4], Octonion<T>)],
    indices: &[MultiIndex],
    kernel: impl Fn(usize, &[T; 4]) -> Quaternion<T> + Sync + Send,
) -> Vec<Octonion<T>> {
    indices
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let sign = if a.order() % 2 == 0 { 1.0 } else { -1.0 };
            let s = integrate(data, |(y, w)| frame.embed(kernel(i, y)) * *w);
            s.scale(T::lit(sign / a.factorial()))
        })
        .collect()
}

/// Taylor expansion of degree `N` about the centre of `domain`, a ball in
/// the slice of its frame.
pub fn taylor<T: Real>(
    f: &SliceFunction<T>,
    domain: &ShellSpec<T>,
    degree: usize,
    source: CoefficientSource,
) -> Result<SeriesExpansion<T>> {
    if !domain.is_ball() {
        return Err(Error::InvalidConfig("Taylor expansion needs a ball".into()));
    }
    require_regular(f, domain)?;
    let basis = Arc::new(FueterBasis::new(degree)?);
    let frame = *domain.frame();
    let center = domain.center_coords();
    let regular = match source {
        CoefficientSource::Analytic => {
            let poly = f.stem().as_poly().ok_or_else(|| {
                Error::NotPolynomial(format!("`{}` needs boundary-integral coefficients", f.name()))
            })?;
            basis
                .indices
                .iter()
                .map(|a| {
                    let d = poly.derivative_multi(a.exponent()).eval(&center);
                    frame.contract(&d).scale(T::lit(1.0 / a.factorial()))
                })
                .collect()
        }
        CoefficientSource::Boundary(counts) => {
            if !domain.outer().is_finite() {
                return Err(Error::InvalidConfig("boundary coefficients need a finite radius".into()));
            }
            let data = sphere_data(f, &frame, &center, domain.outer(), &counts);
            boundary_coefficients(&frame, &data, &basis.indices, |i, y| {
                basis.kernels[i].eval(y).expect("sphere nodes avoid the centre")
            })
        }
    };
    Ok(SeriesExpansion {
        kind: SeriesKind::Taylor,
        frame,
        center,
        degree,
        inner: T::zero(),
        outer: domain.outer(),
        regular,
        principal: Vec::new(),
        basis,
    })
}

/// Laurent expansion of degree `N` on a shell `R₁ < |q − q₀| < R₂`:
/// `A_α = ((−1)ⁿ/α!) ∫_{S₂} V_α(ξ − q₀)(n f) dS`,
/// `B_α = ((−1)ⁿ/α!) ∫_{S₁} P_α(ξ − q₀)(n f) dS`, both with `n` the outward
/// sphere normal, summed as `P_α(q − q₀)A_α + V_α(q − q₀)B_α`.
pub fn laurent<T: Real>(
    f: &SliceFunction<T>,
    shell: &ShellSpec<T>,
    degree: usize,
    counts: &QuadCounts,
) -> Result<SeriesExpansion<T>> {
    if shell.is_ball() || !shell.outer().is_finite() {
        return Err(Error::InvalidConfig("Laurent expansion needs a shell with 0 < R1 < R2 < ∞".into()));
    }
    require_regular(f, shell)?;
    let basis = Arc::new(FueterBasis::new(degree)?);
    let frame = *shell.frame();
    let center = shell.center_coords();
    let outer = sphere_data(f, &frame, &center, shell.outer(), counts);
    let inner = sphere_data(f, &frame, &center, shell.inner(), counts);
    let regular = boundary_coefficients(&frame, &outer, &basis.indices, |i, y| {
        basis.kernels[i].eval(y).expect("sphere nodes avoid the centre")
    });
    let principal = boundary_coefficients(&frame, &inner, &basis.indices, |i, y| basis.polynomials[i].eval(y));
    Ok(SeriesExpansion {
        kind: SeriesKind::Laurent,
        frame,
        center,
        degree,
        inner: shell.inner(),
        outer: shell.outer(),
        regular,
        principal,
        basis,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisRegularityReport {
    pub alpha: MultiIndex,
    pub polynomial_left: f64,
    pub polynomial_right: f64,
    pub kernel_left: f64,
    pub kernel_right: f64,
    pub pass: bool,
}

/// Polynomial residual threshold for [`dirac_regularity_of_basis`].
pub const BASIS_POLY_TOLERANCE: f64 = 1e-8;
/// Kernel residual threshold for [`dirac_regularity_of_basis`].
pub const BASIS_KERNEL_TOLERANCE: f64 = 1e-6;

/// Finite-difference `D P_α`, `P_α D` on `[−1, 1]⁴` and `D V_α`, `V_α D`
/// on `1/2 ≤ |x| ≤ 2`, maximized over `samples` points of a random slice.
pub fn dirac_regularity_of_basis(alpha: MultiIndex, samples: usize, seed: u64) -> Result<BasisRegularityReport> {
    let p = fueter_polynomial::<f64>(alpha)?;
    let v = kernel_derivative::<f64>(alpha)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let frame = Frame::random(&mut rng);
    let pf = |y: &[f64; 4]| frame.embed(p.eval(y));
    let vf = |y: &[f64; 4]| frame.embed(v.eval(y).expect("sample points avoid the origin"));
    let mut r = [0.0f64; 4];
    for _ in 0..samples {
        let x: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        r[0] = r[0].max(dirac_fd(pf, &frame, &x).max_abs());
        r[1] = r[1].max(dirac_right_fd(pf, &frame, &x).max_abs());
        let dir: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n = dir.iter().map(|c| c * c).sum::<f64>().sqrt().max(1e-3);
        let rad = rng.random_range(0.5..2.0);
        let y = dir.map(|c| c / n * rad);
        r[2] = r[2].max(dirac_fd(vf, &frame, &y).max_abs());
        r[3] = r[3].max(dirac_right_fd(vf, &frame, &y).max_abs());
    }
    Ok(BasisRegularityReport {
        alpha,
        polynomial_left: r[0],
        polynomial_right: r[1],
        kernel_left: r[2],
        kernel_right: r[3],
        pass: r[0] <= BASIS_POLY_TOLERANCE
            && r[1] <= BASIS_POLY_TOLERANCE
            && r[2] <= BASIS_KERNEL_TOLERANCE
            && r[3] <= BASIS_KERNEL_TOLERANCE,
    })
}

/// `Σ_{|α| = n} P_α` as a slice-independent stem.
pub fn fueter_sum_stem<T: Real>(n: usize) -> Result<crate::stem::PolyStem<T>> {
    let mut comps: [crate::poly::OctPoly<T>; 4] = Default::default();
    for a in MultiIndex::of_order(n) {
        let p = fueter_polynomial::<T>(a)?;
        for (e, c) in p.terms() {
            for (k, comp) in comps.iter_mut().enumerate() {
                if !c.c[k].is_zero() {
                    comp.add_term(*e, Octonion::real(c.c[k]));
                }
            }
        }
    }
    Ok(crate::stem::PolyStem::new(format!("fueter-sum-{n}"), comps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::{builtin_stem, remark62_stem};
    use crate::fd;

    type O = Octonion<f64>;

    #[test]
    fn multi_index_order() {
        let v = MultiIndex::up_to(2);
        let expected = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]];
        assert_eq!(v.iter().map(|a| a.0).collect::<Vec<_>>(), expected);
        assert_eq!(MultiIndex::new(2, 1, 3).factorial(), 12.0);
        assert_eq!(MultiIndex::up_to(4).len(), 35);
    }

    #[test]
    fn fueter_examples() {
        let frame = Frame::canonical();
        let p = fueter_poly(MultiIndex::new(1, 0, 0), &frame, &R4Point::new([0.0, 1.0, 0.0, 0.0])).unwrap();
        assert_eq!(p, O::one());
        let x = R4Point::new([0.7, 0.0, 0.0, 0.0]);
        assert_eq!(fueter_poly(MultiIndex::new(1, 0, 0), &frame, &x).unwrap(), O::basis(1).scale(-0.7));
        assert_eq!(fueter_polynomial::<f64>(MultiIndex::ZERO).unwrap(), QuatPoly::constant(Quaternion::one()));
        assert!(matches!(fueter_polynomial::<f64>(MultiIndex::new(3, 3, 3)), Err(Error::Capacity { order: 9, cap: 8 })));
    }

    /// Sum over all distinct orderings, multiplied left to right.
    fn brute_force(alpha: MultiIndex, x: &[f64; 4]) -> Quaternion<f64> {
        fn rec(rem: [u32; 3], acc: Quaternion<f64>, x: &[f64; 4], out: &mut Quaternion<f64>) {
            if rem == [0; 3] {
                *out += acc;
                return;
            }
            for i in 0..3 {
                if rem[i] > 0 {
                    let mut r = rem;
                    r[i] -= 1;
                    let zi = Quaternion::real(x[i + 1]) - Quaternion::unit(i + 1).scale(x[0]);
                    rec(r, acc * zi, x, out);
                }
            }
        }
        let mut out = Quaternion::zero();
        rec(alpha.0, Quaternion::one(), x, &mut out);
        out.scale(alpha.factorial() / factorial(alpha.order()))
    }

    #[test]
    fn recursion_matches_enumeration() {
        let x = [0.3, -0.8, 0.5, 1.2];
        for a in MultiIndex::up_to(5) {
            let p = fueter_polynomial::<f64>(a).unwrap().eval(&x);
            assert!((p - brute_force(a, &x)).max_abs() < 1e-13, "{a}");
        }
    }

    #[test]
    fn degree_two_sum_is_half_the_listed_polynomials() {
        let sum = fueter_sum_stem::<f64>(2).unwrap();
        let listed = remark62_stem::<f64>();
        for k in 0..4 {
            let doubled = sum.components()[k].scale(2.0);
            assert_eq!(doubled.len(), listed.components()[k].len());
            for (e, c) in listed.components()[k].terms() {
                assert!(doubled.coefficient(e).dist(c) <= 1e-12);
            }
        }
    }

    #[test]
    fn kernel_derivative_examples() {
        let frame = Frame::canonical();
        let v = kernel_deriv(MultiIndex::ZERO, &frame, &O::one()).unwrap();
        assert!((v.re() - 1.0 / (2.0 * PI * PI)).abs() < 1e-16);
        assert!(matches!(kernel_deriv(MultiIndex::ZERO, &frame, &O::zero()), Err(Error::Singularity { .. })));

        let x = [0.4, -0.3, 0.9, 0.2];
        for a in MultiIndex::up_to(2) {
            let sym = kernel_derivative::<f64>(a).unwrap().eval(&x).unwrap();
            let v = RationalKernelTerm::<f64>::kernel();
            // apply the partials of α one at a time with nested differences
            let numeric = match a.order() {
                0 => v.eval(&x).unwrap(),
                1 => {
                    let i = a.0.iter().position(|&c| c == 1).unwrap() + 1;
                    fd::partial(|p| v.eval(p).unwrap(), &x, i, 1e-4)
                }
                _ => {
                    let mut idx = Vec::new();
                    for (i, &c) in a.0.iter().enumerate() {
                        idx.extend(std::iter::repeat_n(i + 1, c as usize));
                    }
                    let inner = |p: &[f64; 4]| fd::partial(|r| v.eval(r).unwrap(), p, idx[1], 1e-4);
                    fd::partial(inner, &x, idx[0], 1e-4)
                }
            };
            assert!((sym - numeric).max_abs() < 1e-6, "{a}: {:e}", (sym - numeric).max_abs());
        }
    }

    #[test]
    fn basis_regularity_examples() {
        for a in [MultiIndex::new(1, 0, 0), MultiIndex::new(2, 1, 0), MultiIndex::ZERO] {
            let r = dirac_regularity_of_basis(a, 20, 1).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn taylor_analytic_examples() {
        let frame = Frame::canonical();
        let ball = ShellSpec::unit_ball(frame);
        let e44 = SliceFunction::new(builtin_stem("example44").unwrap());
        let s = taylor(&e44, &ball, 1, CoefficientSource::Analytic).unwrap();
        let x = R4Point::new([0.2, -0.3, 0.4, 0.1]);
        assert!(s.eval(&x).unwrap().dist(&e44.eval_in_frame(&frame, &x)) < 1e-14);

        let c = O::from_f64([1.0, 0.0, 2.0, 0.0, -1.0, 0.0, 0.0, 0.5]);
        let cst = SliceFunction::from_stem(crate::builtins::constant_stem(c));
        let s = taylor(&cst, &ball, 3, CoefficientSource::Analytic).unwrap();
        assert_eq!(s.coefficient(MultiIndex::ZERO), Some(c));
        assert!(s.regular[1..].iter().all(|v| v.max_abs() == 0.0));

        let id = SliceFunction::new(builtin_stem("identity").unwrap());
        assert!(matches!(taylor(&id, &ball, 2, CoefficientSource::Analytic), Err(Error::NotRegular { .. })));
    }

    #[test]
    fn quintic_truncation() {
        let frame = Frame::canonical();
        let ball = ShellSpec::unit_ball(frame);
        let f = SliceFunction::new(builtin_stem("quintic").unwrap());
        let s5 = taylor(&f, &ball, 5, CoefficientSource::Analytic).unwrap();
        let s4 = taylor(&f, &ball, 4, CoefficientSource::Analytic).unwrap();
        let x = R4Point::new([0.5, 0.3, -0.2, 0.4]);
        let exact = f.eval_in_frame(&frame, &x);
        assert!(s5.eval(&x).unwrap().dist(&exact) < 1e-10);
        assert!(s4.eval(&x).unwrap().dist(&exact) > 1e-4);

        let prime = Frame::complete(O::basis(6), 1e-12).unwrap();
        let via = s5.eval_in_frame(&x, &prime).unwrap();
        assert!(via.dist(&f.eval(&prime.compose(&x)).unwrap()) < 1e-10);
    }

    #[test]
    fn csv_and_manifest() {
        let ball = ShellSpec::unit_ball(Frame::<f64>::canonical());
        let f = SliceFunction::new(builtin_stem("example44").unwrap());
        let s = taylor(&f, &ball, 1, CoefficientSource::Analytic).unwrap();
        let csv = s.coefficients_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "alpha1,alpha2,alpha3,kind,c0,c1,c2,c3,c4,c5,c6,c7");
        assert_eq!(lines[1], "0,0,0,taylor,0.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0");
        assert_eq!(lines.len(), 5);
        let m = serde_json::to_value(s.manifest()).unwrap();
        assert_eq!(m["kind"], "taylor");
        assert_eq!(m["degree"], 1);
    }
    fn mid_shell_points() -> Vec<R4Point<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        (0..40)
            .map(|_| {
                let d: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
                let n = d.iter().map(|c| c * c).sum::<f64>().sqrt();
                let r = rng.random_range(0.8..1.3);
                R4Point::new(d.map(|c| c / n * r))
            })
            .collect()
    }

    #[test]
    fn laurent_of_kernel() {
        let frame = Frame::<f64>::canonical();
        let shell = ShellSpec::shell(frame, O::zero(), 0.5, 2.0).unwrap();
        let f = SliceFunction::new(builtin_stem("kernelV").unwrap()).with_domain(shell);
        let s = laurent(&f, &shell, 4, &QuadCounts::default()).unwrap();
        let b0 = s.principal_coefficient(MultiIndex::ZERO).unwrap();
        assert!(b0.dist(&O::one()) < 1e-10, "{b0:?}");
        assert!(s.regular.iter().all(|a| a.norm() < 1e-6));
        assert!(s.principal[1..].iter().all(|b| b.norm() < 1e-6));
        for x in mid_shell_points() {
            assert!(s.eval(&x).unwrap().dist(&f.eval_in_frame(&frame, &x)) < 1e-6);
        }
        assert!(matches!(s.eval(&R4Point::new([0.1, 0.0, 0.0, 0.0])), Err(Error::OutsideDomain(_))));
    }

    #[test]
    fn laurent_of_regular_functions() {
        let frame = Frame::<f64>::canonical();
        let shell = ShellSpec::shell(frame, O::zero(), 0.5, 2.0).unwrap();
        let one = SliceFunction::from_stem(crate::builtins::constant_stem(O::one()));
        let s = laurent(&one, &shell, 2, &QuadCounts::default()).unwrap();
        assert!(s.regular[0].dist(&O::one()) < 1e-10);
        assert!(s.principal.iter().all(|b| b.norm() < 1e-10));

        let f = SliceFunction::new(builtin_stem("quintic").unwrap());
        let s = laurent(&f, &shell, 4, &QuadCounts::default()).unwrap();
        let t = taylor(&f, &ShellSpec::ball(frame, O::zero(), 2.0).unwrap(), 4, CoefficientSource::Analytic).unwrap();
        assert!(s.principal.iter().all(|b| b.norm() < 1e-6));
        for (a, c) in s.regular.iter().zip(&t.regular) {
            assert!(a.dist(c) < 1e-6);
        }
    }

    #[test]
    fn boundary_taylor_coefficients() {
        let frame = Frame::<f64>::canonical();
        let ball = ShellSpec::unit_ball(frame);
        let f = SliceFunction::new(builtin_stem("quintic").unwrap());
        let a = taylor(&f, &ball, 5, CoefficientSource::Analytic).unwrap();
        let b = taylor(&f, &ball, 5, CoefficientSource::Boundary(QuadCounts::default())).unwrap();
        for (x, y) in a.regular.iter().zip(&b.regular) {
            assert!(x.dist(y) < 1e-8);
        }
    }
}
