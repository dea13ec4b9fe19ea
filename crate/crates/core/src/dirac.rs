//! The slice Dirac operator `D_𝕀 = ∂₀ + I∂₁ + J∂₂ + K∂₃`, the
//! Cauchy–Fueter system on stems, ODE-pair stems and the splitting lemma.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fd;
use crate::geometry::{Frame, R4Point, ShellSpec};
use crate::octonion::Octonion;
use crate::scalar::Real;
use crate::stem::{sample_point, SliceFunction, StemFunction, StemJacobian, StemValue};

/// Which partials to use when differentiating a stem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Derivatives {
    /// Analytic when the stem provides them, finite differences otherwise.
    #[default]
    Auto,
    FiniteDifference,
}

fn jacobian<T: Real>(stem: &dyn StemFunction<T>, x: &R4Point<T>, d: Derivatives) -> StemJacobian<T> {
    match d {
        Derivatives::Auto => stem.jacobian(x),
        Derivatives::FiniteDifference => stem.fd_jacobian(x),
    }
}

fn slice_partials<T: Real>(jac: &StemJacobian<T>, frame: &Frame<T>) -> [Octonion<T>; 4] {
    std::array::from_fn(|k| frame.contract(&std::array::from_fn(|j| jac[j][k])))
}

/// `D_𝕀 f(𝕀xᵀ)`.
pub fn apply_dirac<T: Real>(f: &SliceFunction<T>, frame: &Frame<T>, x: &R4Point<T>, d: Derivatives) -> Result<Octonion<T>> {
    f.check_domain(&frame.compose(x))?;
    Ok(dirac_in_frame(f, frame, x, d))
}

/// [`apply_dirac`] without the domain check.
pub fn dirac_in_frame<T: Real>(f: &SliceFunction<T>, frame: &Frame<T>, x: &R4Point<T>, d: Derivatives) -> Octonion<T> {
    dirac_from_partials(frame, &slice_partials(&jacobian(f.stem(), x, d), frame))
}

/// `f D_𝕀 = ∂₀f + (∂₁f)I + (∂₂f)J + (∂₃f)K`.
pub fn apply_dirac_right<T: Real>(
    f: &SliceFunction<T>,
    frame: &Frame<T>,
    x: &R4Point<T>,
    d: Derivatives,
) -> Result<Octonion<T>> {
    f.check_domain(&frame.compose(x))?;
    let p = slice_partials(&jacobian(f.stem(), x, d), frame);
    let u = frame.units();
    Ok(p[0] + (1..4).map(|k| p[k] * u[k]).sum())
}

/// `Σ u_k ∂_k` from the four slice partials.
pub fn dirac_from_partials<T: Real>(frame: &Frame<T>, p: &[Octonion<T>; 4]) -> Octonion<T> {
    let u = frame.units();
    p[0] + (1..4).map(|k| u[k] * p[k]).sum()
}

/// `D_𝕀 g` of an arbitrary map on the slice, by finite differences.
pub fn dirac_fd<T: Real>(g: impl Fn(&[T; 4]) -> Octonion<T>, frame: &Frame<T>, x: &[T; 4]) -> Octonion<T> {
    dirac_from_partials(frame, &fd::gradient(g, x))
}

/// `g D_𝕀` of an arbitrary map on the slice, by finite differences.
pub fn dirac_right_fd<T: Real>(g: impl Fn(&[T; 4]) -> Octonion<T>, frame: &Frame<T>, x: &[T; 4]) -> Octonion<T> {
    let p = fd::gradient(g, x);
    let u = frame.units();
    p[0] + (1..4).map(|k| p[k] * u[k]).sum()
}

/// `D̄_𝕀 g = ∂₀g − I∂₁g − J∂₂g − K∂₃g`, by finite differences.
pub fn conj_dirac_fd<T: Real>(g: impl Fn(&[T; 4]) -> Octonion<T>, frame: &Frame<T>, x: &[T; 4]) -> Octonion<T> {
    let p = fd::gradient(g, x);
    let u = frame.units();
    p[0] - (1..4).map(|k| u[k] * p[k]).sum()
}

/// The four rows of the Cauchy–Fueter system at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CfResidual<T> {
    pub rows: [Octonion<T>; 4],
    pub norm: T,
}

impl<T: Real> CfResidual<T> {
    pub fn from_jacobian(j: &StemJacobian<T>) -> Self {
        // j[component][variable]
        let rows = [
            j[0][0] - j[1][1] - j[2][2] - j[3][3],
            j[0][1] + j[1][0] - j[2][3] + j[3][2],
            j[0][2] + j[1][3] + j[2][0] - j[3][1],
            j[0][3] - j[1][2] + j[2][1] + j[3][0],
        ];
        let norm = rows.iter().fold(T::zero(), |a, r| a.max(r.max_abs()));
        Self { rows, norm }
    }
}

pub fn cf_residual<T: Real>(stem: &dyn StemFunction<T>, x: &R4Point<T>, d: Derivatives) -> CfResidual<T> {
    CfResidual::from_jacobian(&jacobian(stem, x, d))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CfReport<T> {
    pub pass: bool,
    pub samples: usize,
    pub tolerance: T,
    pub max_residual: T,
    pub worst_point: R4Point<T>,
    pub worst: CfResidual<T>,
}

/// Evaluates the CF system at random interior points.
pub fn cf_check<T: Real>(
    stem: &dyn StemFunction<T>,
    samples: usize,
    tol: T,
    seed: u64,
    domain: Option<&ShellSpec<T>>,
    d: Derivatives,
) -> Result<CfReport<T>> {
    if samples == 0 {
        return Err(Error::InvalidConfig("samples must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(R4Point<T>, CfResidual<T>)> = None;
    for _ in 0..samples {
        let x = sample_point(&mut rng, domain);
        let r = cf_residual(stem, &x, d);
        if best.as_ref().is_none_or(|(_, b)| r.norm > b.norm) {
            best = Some((x, r));
        }
    }
    let (worst_point, worst) = best.expect("at least one sample");
    Ok(CfReport { pass: worst.norm <= tol, samples, tolerance: tol, max_residual: worst.norm, worst_point, worst })
}

/// Scalar map `(x, y) ↦ 𝕆` used by ODE-pair stems.
pub type PlaneFn<T> = Arc<dyn Fn(T, T) -> Octonion<T> + Send + Sync>;

/// `S, h` and optionally their first partials.
#[derive(Clone)]
pub struct OdePair<T> {
    pub s: PlaneFn<T>,
    pub h: PlaneFn<T>,
    /// `(S_x, S_y, h_x, h_y)`.
    pub partials: Option<[PlaneFn<T>; 4]>,
}

impl<T: Real> OdePair<T> {
    pub fn new(s: PlaneFn<T>, h: PlaneFn<T>) -> Self {
        Self { s, h, partials: None }
    }

    pub fn with_partials(mut self, sx: PlaneFn<T>, sy: PlaneFn<T>, hx: PlaneFn<T>, hy: PlaneFn<T>) -> Self {
        self.partials = Some([sx, sy, hx, hy]);
        self
    }

    /// `(S_x, S_y, h_x, h_y)` at `(x, y)`, by finite differences if not supplied.
    pub fn derivatives(&self, x: T, y: T) -> [Octonion<T>; 4] {
        match &self.partials {
            Some(p) => std::array::from_fn(|k| p[k](x, y)),
            None => {
                let s = fd::gradient(|p: &[T; 4]| (self.s)(p[0], p[1]), &[x, y, T::zero(), T::zero()]);
                let h = fd::gradient(|p: &[T; 4]| (self.h)(p[0], p[1]), &[x, y, T::zero(), T::zero()]);
                [s[0], s[1], h[0], h[1]]
            }
        }
    }

    /// `(y h_y + 3h − S_x, y h_x + S_y)`.
    pub fn residual(&self, x: T, y: T) -> [Octonion<T>; 2] {
        let [sx, sy, hx, hy] = self.derivatives(x, y);
        let h = (self.h)(x, y);
        [hy.scale(y) + h.scale(T::lit(3.0)) - sx, hx.scale(y) + sy]
    }
}

/// `F₀ = S(x₀, r)`, `Fᵢ = xᵢ h(x₀, r)` with `r = |(x₁, x₂, x₃)|`.
#[derive(Clone)]
pub struct OdeStem<T> {
    name: String,
    pair: OdePair<T>,
}

impl<T: Real> OdeStem<T> {
    pub fn pair(&self) -> &OdePair<T> {
        &self.pair
    }
}

impl<T: Real> StemFunction<T> for OdeStem<T> {
    fn name(&self) -> &str {
        &self.name
    }

    fn eval(&self, x: &R4Point<T>) -> StemValue<T> {
        let r = x.radial();
        let h = (self.pair.h)(x.x[0], r);
        [(self.pair.s)(x.x[0], r), h.scale(x.x[1]), h.scale(x.x[2]), h.scale(x.x[3])]
    }

    fn analytic_jacobian(&self, x: &R4Point<T>) -> Option<StemJacobian<T>> {
        let p = self.pair.partials.as_ref()?;
        let (x0, r) = (x.x[0], x.radial());
        let [sx, sy, hx, hy] = std::array::from_fn(|k| p[k](x0, r));
        let h = (self.pair.h)(x0, r);
        // xᵢ/r is bounded; its limit is taken as 0 on the axis
        let unit: [T; 4] = std::array::from_fn(|k| if k == 0 || r.is_zero() { T::zero() } else { x.x[k] / r });
        let mut j = [[Octonion::zero(); 4]; 4];
        j[0][0] = sx;
        for i in 1..4 {
            j[0][i] = sy.scale(unit[i]);
            j[i][0] = hx.scale(x.x[i]);
            for k in 1..4 {
                let delta = if i == k { h } else { Octonion::zero() };
                j[i][k] = delta + hy.scale(x.x[i] * unit[k]);
            }
        }
        Some(j)
    }

    fn has_analytic_derivatives(&self) -> bool {
        self.pair.partials.is_some()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OdeReport<T> {
    pub samples: usize,
    pub max_residual: T,
    pub warning: Option<String>,
}

/// Samples the ODE pair on `x ∈ [−2, 2]`, `y ∈ [10⁻⁶, 2]`.
pub fn check_ode_pair<T: Real>(pair: &OdePair<T>, samples: usize, tol: T, seed: u64) -> OdeReport<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_residual = T::zero();
    for _ in 0..samples {
        let x = T::lit(rng.random_range(-2.0..2.0));
        let y = T::lit(rng.random_range(1e-6..2.0));
        let [a, b] = pair.residual(x, y);
        max_residual = max_residual.max(a.max_abs()).max(b.max_abs());
    }
    let warning = (max_residual > tol)
        .then(|| format!("ODE pair residual {:e} exceeds {:e}; the stem need not be regular", max_residual.as_f64(), tol.as_f64()));
    OdeReport { samples, max_residual, warning }
}

/// Builds the stem of an ODE pair and reports how well the pair satisfies
/// `y h_y + 3h = S_x`, `y h_x = −S_y`.
pub fn ode_stem<T: Real>(
    name: impl Into<String>,
    pair: OdePair<T>,
    samples: usize,
    tol: T,
    seed: u64,
) -> (OdeStem<T>, OdeReport<T>) {
    let report = check_ode_pair(&pair, samples, tol, seed);
    (OdeStem { name: name.into(), pair }, report)
}

fn plane<T: Real>(f: impl Fn(T, T) -> T + Send + Sync + 'static) -> PlaneFn<T> {
    Arc::new(move |x, y| Octonion::real(f(x, y)))
}

/// `S = ⅗x⁵ − 2x³y² + ⅗xy⁴`, `h = x⁴ − (6/5)x²y² + (3/35)y⁴` with exact partials.
pub fn quintic_pair<T: Real>() -> OdePair<T> {
    let c = |v: f64| T::lit(v);
    OdePair::new(
        plane(move |x: T, y: T| c(0.6) * x.powi(5) - c(2.0) * x.powi(3) * y * y + c(0.6) * x * y.powi(4)),
        plane(move |x: T, y: T| x.powi(4) - c(1.2) * x * x * y * y + c(3.0 / 35.0) * y.powi(4)),
    )
    .with_partials(
        plane(move |x: T, y: T| c(3.0) * x.powi(4) - c(6.0) * x * x * y * y + c(0.6) * y.powi(4)),
        plane(move |x: T, y: T| -c(4.0) * x.powi(3) * y + c(2.4) * x * y.powi(3)),
        plane(move |x: T, y: T| c(4.0) * x.powi(3) - c(2.4) * x * y * y),
        plane(move |x: T, y: T| -c(2.4) * x * x * y + c(12.0 / 35.0) * y.powi(3)),
    )
}

/// `S = 3x`, `h = 1`.
pub fn example44_pair<T: Real>() -> OdePair<T> {
    let zero = || plane(|_: T, _: T| T::zero());
    OdePair::new(plane(|x: T, _| T::lit(3.0) * x), plane(|_: T, _: T| T::one()))
        .with_partials(plane(|_: T, _: T| T::lit(3.0)), zero(), zero(), zero())
}

/// `f(q) = G₁(q) + e₄G₂(q)` with `G₁, G₂ ∈ ℍ_𝕀`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitPair<T> {
    pub g1: Octonion<T>,
    pub g2: Octonion<T>,
    pub e4: Octonion<T>,
}

impl<T: Real> SplitPair<T> {
    pub fn reconstruct(&self) -> Octonion<T> {
        self.g1 + self.e4 * self.g2
    }
}

/// Splits a value of `f` on the slice of `frame` along the unit `e4 ⊥ ℍ_𝕀`.
pub fn split_value<T: Real>(frame: &Frame<T>, e4: &Octonion<T>, v: &Octonion<T>) -> Result<SplitPair<T>> {
    let tol = T::lit(crate::scalar::DEFAULT_TOLERANCE);
    let perp = frame.units().iter().fold(T::zero(), |a, u| a.max(u.dot(e4).abs()));
    let unit = (e4.norm() - T::one()).abs();
    if perp > tol || unit > tol {
        return Err(Error::NotPerpendicular { residual: perp.max(unit).as_f64() });
    }
    let g1: Octonion<T> = frame.units().iter().map(|u| u.scale(u.dot(v))).sum();
    let g2 = -(*e4 * (*v - g1));
    Ok(SplitPair { g1, g2, e4: *e4 })
}

/// [`split_value`] applied to `f(𝕀xᵀ)`.
pub fn split<T: Real>(f: &SliceFunction<T>, frame: &Frame<T>, e4: &Octonion<T>, x: &R4Point<T>) -> Result<SplitPair<T>> {
    let q = frame.compose(x);
    f.check_domain(&q)?;
    split_value(frame, e4, &f.eval_in_frame(frame, x))
}

/// `(|D_𝕀G₁|, |D̄_𝕀G₂|)` by finite differences at `𝕀xᵀ`.
pub fn split_regularity<T: Real>(f: &SliceFunction<T>, frame: &Frame<T>, e4: &Octonion<T>, x: &R4Point<T>) -> Result<(T, T)> {
    split(f, frame, e4, x)?;
    let part = |which: usize| {
        move |p: &[T; 4]| {
            let s = split_value(frame, e4, &f.eval_in_frame(frame, &R4Point::new(*p))).expect("e4 validated");
            if which == 1 {
                s.g1
            } else {
                s.g2
            }
        }
    };
    Ok((dirac_fd(part(1), frame, &x.x).max_abs(), conj_dirac_fd(part(2), frame, &x.x).max_abs()))
}

/// Largest real-coordinate FD Laplacian of `G₁` at `𝕀xᵀ` with step `h`.
pub fn g1_laplacian<T: Real>(f: &SliceFunction<T>, frame: &Frame<T>, e4: &Octonion<T>, x: &R4Point<T>, h: T) -> Result<T> {
    split(f, frame, e4, x)?;
    let g1 = |p: &[T; 4]| split_value(frame, e4, &f.eval_in_frame(frame, &R4Point::new(*p))).expect("e4 validated").g1;
    Ok(fd::laplacian(g1, &x.x, h).max_abs())
}
