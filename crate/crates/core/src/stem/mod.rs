//! Stem functions `F: ℝ⁴ → 𝕆⁴`, the slice functions they induce, and the
//! representation formula.

pub mod json;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fd;
use crate::geometry::{decompose, Frame, OrthoAction, R4Point, ShellSpec};
use crate::octonion::Octonion;
use crate::poly::{Exponent, OctPoly};
use crate::scalar::Real;

pub use json::{parse_stem_json, stem_to_json};

/// `(F₀, F₁, F₂, F₃)` at one point.
pub type StemValue<T> = [Octonion<T>; 4];

/// `jac[j][k] = ∂F_j/∂x_k`.
pub type StemJacobian<T> = [[Octonion<T>; 4]; 4];

pub trait StemFunction<T: Real>: Send + Sync {
    fn name(&self) -> &str;

    fn eval(&self, x: &R4Point<T>) -> StemValue<T>;

    /// Closed-form first partials, if the stem has them.
    fn analytic_jacobian(&self, _x: &R4Point<T>) -> Option<StemJacobian<T>> {
        None
    }

    fn has_analytic_derivatives(&self) -> bool {
        false
    }

    /// Exact polynomial form, for stems that are polynomial.
    fn as_poly(&self) -> Option<&PolyStem<T>> {
        None
    }

    /// Fourth-order central differences of [`eval`](Self::eval).
    fn fd_jacobian(&self, x: &R4Point<T>) -> StemJacobian<T> {
        let cols = fd::gradient(|p: &[T; 4]| self.eval(&R4Point::new(*p)), &x.x);
        std::array::from_fn(|j| std::array::from_fn(|k| cols[k][j]))
    }

    /// Analytic partials when available, finite differences otherwise.
    fn jacobian(&self, x: &R4Point<T>) -> StemJacobian<T> {
        self.analytic_jacobian(x).unwrap_or_else(|| self.fd_jacobian(x))
    }
}

/// Stem whose components are octonion-coefficient polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyStem<T: Real> {
    name: String,
    components: [OctPoly<T>; 4],
    partials: [[OctPoly<T>; 4]; 4],
}

impl<T: Real> PolyStem<T> {
    pub fn new(name: impl Into<String>, components: [OctPoly<T>; 4]) -> Self {
        let partials = std::array::from_fn(|j| std::array::from_fn(|k| components[j].derivative(k)));
        Self { name: name.into(), components, partials }
    }

    pub fn components(&self) -> &[OctPoly<T>; 4] {
        &self.components
    }

    pub fn degree(&self) -> u32 {
        self.components.iter().map(|c| c.degree()).max().unwrap_or(0)
    }

    /// The stem `∂₀^{a₀}…∂₃^{a₃} F`, differentiated componentwise.
    pub fn derivative_multi(&self, orders: Exponent) -> Self {
        let comps = std::array::from_fn(|j| self.components[j].derivative_multi(orders));
        Self::new(format!("{}'", self.name), comps)
    }

    pub fn rename(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

impl<T: Real> StemFunction<T> for PolyStem<T> {
    fn name(&self) -> &str {
        &self.name
    }

    fn eval(&self, x: &R4Point<T>) -> StemValue<T> {
        std::array::from_fn(|j| self.components[j].eval(&x.x))
    }

    fn analytic_jacobian(&self, x: &R4Point<T>) -> Option<StemJacobian<T>> {
        Some(std::array::from_fn(|j| std::array::from_fn(|k| self.partials[j][k].eval(&x.x))))
    }

    fn has_analytic_derivatives(&self) -> bool {
        true
    }

    fn as_poly(&self) -> Option<&PolyStem<T>> {
        Some(self)
    }
}

/// Outcome of sampling `F(x) = g⁻¹F(gx)`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntrinsicReport<T> {
    pub pass: bool,
    pub trials: usize,
    /// Largest coordinate of `F(x) − g⁻¹F(gx)`, divided by `max(1, |F(x)|∞)`.
    pub max_residual: T,
    pub worst_sample: Option<(R4Point<T>, OrthoAction<T>)>,
}

/// Half-width of the sampling box `[−2, 2]⁴`.
pub const SAMPLE_BOX: f64 = 2.0;

/// Points closer than this to the real axis are rejected when sampling.
pub const AXIS_EXCLUSION: f64 = 1e-6;

/// Uniform point of `[−2, 2]⁴` off the real axis or, if `domain` is given,
/// uniform inside it (bounded by the domain's box when its radius is finite).
pub fn sample_point<T: Real, R: Rng + ?Sized>(rng: &mut R, domain: Option<&ShellSpec<T>>) -> R4Point<T> {
    let (center, half) = match domain {
        Some(d) if d.outer().is_finite() => (d.center_coords().x.map(|c| c.as_f64()), d.outer().as_f64()),
        Some(d) => (d.center_coords().x.map(|c| c.as_f64()), SAMPLE_BOX),
        None => ([0.0; 4], SAMPLE_BOX),
    };
    loop {
        let x = R4Point::new(std::array::from_fn(|k| T::lit(center[k] + rng.random_range(-half..half))));
        if x.radial() < T::lit(AXIS_EXCLUSION) {
            continue;
        }
        if domain.is_none_or(|d| d.contains_coords(&x) && d.boundary_distance(&x) > T::lit(1e-3)) {
            return x;
        }
    }
}

fn stem_max_abs<T: Real>(v: &StemValue<T>) -> T {
    v.iter().fold(T::zero(), |a, o| a.max(o.max_abs()))
}

/// Samples the intrinsic property over random `x` and random `g ∈ O(3)`.
///
/// `domain`, when given, must be centred on the real axis so that it is
/// O(3)-invariant; samples are drawn inside it.
pub fn check_intrinsic<T: Real>(
    stem: &dyn StemFunction<T>,
    trials: usize,
    tol: T,
    seed: u64,
    domain: Option<&ShellSpec<T>>,
) -> Result<IntrinsicReport<T>> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_residual = T::zero();
    let mut worst = None;
    for _ in 0..trials {
        let x = sample_point(&mut rng, domain);
        let g = OrthoAction::random(&mut rng);
        let fx = stem.eval(&x);
        let back = g.inverse().act(&stem.eval(&g.act_point(&x)));
        let diff = std::array::from_fn(|k| fx[k] - back[k]);
        let r = stem_max_abs(&diff) / T::one().max(stem_max_abs(&fx));
        if r > max_residual || worst.is_none() {
            max_residual = max_residual.max(r);
            worst = Some((x, g));
        }
    }
    Ok(IntrinsicReport { pass: max_residual <= tol, trials, max_residual, worst_sample: worst })
}

/// Slice function `f(𝕀xᵀ) = 𝕀F(x)ᵀ` induced by a stem, with an optional
/// ball/shell domain (`None` means all of 𝕆).
#[derive(Clone)]
pub struct SliceFunction<T: Real> {
    stem: Arc<dyn StemFunction<T>>,
    domain: Option<ShellSpec<T>>,
}

impl<T: Real> std::fmt::Debug for SliceFunction<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SliceFunction").field("stem", &self.stem.name()).field("domain", &self.domain).finish()
    }
}

impl<T: Real> SliceFunction<T> {
    pub fn new(stem: Arc<dyn StemFunction<T>>) -> Self {
        Self { stem, domain: None }
    }

    pub fn from_stem(stem: impl StemFunction<T> + 'static) -> Self {
        Self::new(Arc::new(stem))
    }

    pub fn with_domain(mut self, domain: ShellSpec<T>) -> Self {
        self.domain = Some(domain);
        self
    }

    pub fn stem(&self) -> &dyn StemFunction<T> {
        self.stem.as_ref()
    }

    pub fn stem_arc(&self) -> Arc<dyn StemFunction<T>> {
        Arc::clone(&self.stem)
    }

    pub fn domain(&self) -> Option<&ShellSpec<T>> {
        self.domain.as_ref()
    }

    pub fn name(&self) -> &str {
        self.stem.name()
    }

    pub fn check_domain(&self, q: &Octonion<T>) -> Result<()> {
        match &self.domain {
            Some(d) if !d.contains(q) => Err(Error::OutsideDomain(format!(
                "|q − q₀| = {} not in ({}, {})",
                (*q - d.center()).norm(),
                d.inner(),
                d.outer()
            ))),
            _ => Ok(()),
        }
    }

    /// `f(q)`, decomposing `q` into its own slice.
    pub fn eval(&self, q: &Octonion<T>) -> Result<Octonion<T>> {
        self.check_domain(q)?;
        let (frame, x) = decompose(q);
        Ok(frame.contract(&self.stem.eval(&x)))
    }

    /// `f(𝕀xᵀ)` without a domain check.
    pub fn eval_in_frame(&self, frame: &Frame<T>, x: &R4Point<T>) -> Octonion<T> {
        frame.contract(&self.stem.eval(x))
    }

    /// `∂f/∂x_k` along the slice of `frame`.
    pub fn slice_partials(&self, frame: &Frame<T>, x: &R4Point<T>) -> [Octonion<T>; 4] {
        let jac = self.stem.jacobian(x);
        std::array::from_fn(|k| frame.contract(&std::array::from_fn(|j| jac[j][k])))
    }
}

/// The matrix `M_𝕀` of the representation formula.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RepMatrix<T> {
    frame: Frame<T>,
    m: [[Octonion<T>; 4]; 4],
}

impl<T: Real> RepMatrix<T> {
    pub fn new(frame: &Frame<T>) -> Self {
        const SIGNS: [[i8; 4]; 4] = [[1, 1, 1, 1], [-1, -1, 1, 1], [-1, 1, -1, 1], [-1, 1, 1, -1]];
        let quarter = T::lit(0.25);
        let u = frame.units();
        let m = std::array::from_fn(|r| std::array::from_fn(|c| u[r].scale(quarter * T::lit(SIGNS[r][c] as f64))));
        Self { frame: *frame, m }
    }

    pub fn frame(&self) -> &Frame<T> {
        &self.frame
    }

    pub fn entries(&self) -> &[[Octonion<T>; 4]; 4] {
        &self.m
    }

    /// `M_𝕀 v`.
    pub fn apply(&self, v: &[Octonion<T>; 4]) -> [Octonion<T>; 4] {
        std::array::from_fn(|r| (0..4).map(|c| self.m[r][c] * v[c]).sum())
    }

    /// Largest entry of `(2M)(2M)* − Id`.
    pub fn orthogonality_residual(&self) -> T {
        let two = T::lit(2.0);
        let mut worst = T::zero();
        for r in 0..4 {
            for s in 0..4 {
                let p: Octonion<T> = (0..4).map(|c| self.m[r][c].scale(two) * self.m[s][c].scale(two).conj()).sum();
                let id = if r == s { Octonion::one() } else { Octonion::zero() };
                worst = worst.max((p - id).max_abs());
            }
        }
        worst
    }
}

/// `𝓕(q) = (f(q), f(α(q)), f(β(q)), f(γ(q)))` for `q = 𝕀xᵀ`.
pub fn reflection_samples<T: Real>(f: &SliceFunction<T>, frame: &Frame<T>, x: &R4Point<T>) -> Result<[Octonion<T>; 4]> {
    let pts = x.reflections();
    let mut out = [Octonion::zero(); 4];
    for (o, p) in out.iter_mut().zip(pts.iter()) {
        *o = f.eval(&frame.compose(p))?;
    }
    Ok(out)
}

/// Stem values recovered from the reflection samples, `M_𝕀 𝓕(q)`.
pub fn recover_stem<T: Real>(f: &SliceFunction<T>, frame: &Frame<T>, x: &R4Point<T>) -> Result<StemValue<T>> {
    Ok(RepMatrix::new(frame).apply(&reflection_samples(f, frame, x)?))
}

/// `f(𝕀′xᵀ)` computed from the values of `f` on the slice of `frame_eval`.
pub fn represent<T: Real>(
    f: &SliceFunction<T>,
    frame_eval: &Frame<T>,
    x: &R4Point<T>,
    frame_prime: &Frame<T>,
) -> Result<Octonion<T>> {
    Ok(frame_prime.contract(&recover_stem(f, frame_eval, x)?))
}
