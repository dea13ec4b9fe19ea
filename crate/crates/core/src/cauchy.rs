//! The Cauchy kernel `V(u) = ū / (2π²|u|⁴)` and the integral formulas built on it.

use std::f64::consts::PI;

use crate::dirac::{conj_dirac_fd, dirac_fd, dirac_in_frame, dirac_right_fd, Derivatives};
use crate::error::{Error, Result};
use crate::geometry::{BallSpec, Frame, R4Point};
use crate::octonion::Octonion;
use crate::quadrature::{polar_volume_rule, try_integrate, QuadCounts, SphereRule};
use crate::scalar::Real;
use crate::stem::{RepMatrix, SliceFunction};

/// Default minimum distance to the boundary, as a fraction of the radius.
pub const DELTA_MIN_RATIO: f64 = 0.05;

/// Below this `|ξ − q|` the kernel is treated as singular.
pub const SINGULARITY_TOLERANCE: f64 = 1e-14;

/// `V(u)` without a singularity check.
pub fn kernel<T: Real>(u: &Octonion<T>) -> Octonion<T> {
    let n2 = u.norm_sq();
    u.conj().scale(T::one() / (T::lit(2.0 * PI * PI) * n2 * n2))
}

/// `V(u)`, rejecting `|u| ≤ 10⁻¹⁴`.
pub fn kernel_checked<T: Real>(u: &Octonion<T>) -> Result<Octonion<T>> {
    let d = u.norm();
    if d <= T::lit(SINGULARITY_TOLERANCE) {
        return Err(Error::Singularity { distance: d.as_f64() });
    }
    Ok(kernel(u))
}

/// `V(ξ − q)`.
pub fn cauchy_kernel<T: Real>(xi: &Octonion<T>, q: &Octonion<T>) -> Result<Octonion<T>> {
    kernel_checked(&(*xi - *q))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CauchyOptions {
    pub counts: QuadCounts,
    pub delta_min_ratio: f64,
    pub derivatives: Derivatives,
}

impl Default for CauchyOptions {
    fn default() -> Self {
        Self { counts: QuadCounts::default(), delta_min_ratio: DELTA_MIN_RATIO, derivatives: Derivatives::Auto }
    }
}

impl CauchyOptions {
    pub fn with_counts(counts: QuadCounts) -> Self {
        Self { counts, ..Self::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PompeiuResult<T> {
    /// `boundary − volume`.
    pub value: Octonion<T>,
    pub boundary: Octonion<T>,
    pub volume: Octonion<T>,
    pub boundary_distance: T,
}

fn require_ball<T: Real>(ball: &BallSpec<T>) -> Result<()> {
    if ball.is_ball() {
        Ok(())
    } else {
        Err(Error::InvalidConfig("integral formulas need a ball domain".into()))
    }
}

fn check_interior<T: Real>(ball: &BallSpec<T>, x: &R4Point<T>, ratio: f64) -> Result<T> {
    require_ball(ball)?;
    let d = ball.boundary_distance(x);
    let required = T::lit(ratio) * ball.outer();
    if d <= T::zero() {
        return Err(Error::OutsideDomain(format!("point at distance {} outside the ball", -d)));
    }
    if d < required {
        return Err(Error::TooCloseToBoundary { distance: d.as_f64(), required: required.as_f64() });
    }
    Ok(d)
}

fn check_exterior<T: Real>(ball: &BallSpec<T>, x: &R4Point<T>, ratio: f64) -> Result<T> {
    require_ball(ball)?;
    let d = -ball.boundary_distance(x);
    let required = T::lit(ratio) * ball.outer();
    if d <= T::zero() {
        return Err(Error::InvalidConfig("exterior formula evaluated at an interior point".into()));
    }
    if d < required {
        return Err(Error::TooCloseToBoundary { distance: d.as_f64(), required: required.as_f64() });
    }
    Ok(d)
}

/// `∫_{∂B} V(ξ − q)(n(ξ) f(ξ)) dS` on a sphere of the slice of `frame`.
pub fn sphere_integral<T: Real>(
    f: &SliceFunction<T>,
    frame: &Frame<T>,
    rule: &SphereRule<T>,
    x: &R4Point<T>,
) -> Result<Octonion<T>> {
    let q = frame.compose(x);
    try_integrate(&rule.nodes, |node| {
        let xi = frame.compose(&node.point);
        let n = frame.compose(&node.normal);
        let fx = f.eval_in_frame(frame, &node.point);
        Ok((cauchy_kernel(&xi, &q)? * (n * fx)).scale(node.weight))
    })
}

/// Boundary term with a rule aligned toward `x`.
pub fn boundary_term<T: Real>(f: &SliceFunction<T>, ball: &BallSpec<T>, x: &R4Point<T>, counts: &QuadCounts) -> Result<Octonion<T>> {
    let rule = SphereRule::aligned(ball.center_coords(), ball.outer(), counts, x);
    sphere_integral(f, ball.frame(), &rule, x)
}

/// `∫_B V(ξ − q)(D_𝕀 f(ξ)) dm` with the polar rule centred at `x`.
pub fn volume_term<T: Real>(
    f: &SliceFunction<T>,
    ball: &BallSpec<T>,
    x: &R4Point<T>,
    counts: &QuadCounts,
    d: Derivatives,
) -> Result<Octonion<T>> {
    let frame = ball.frame();
    let q = frame.compose(x);
    let nodes = polar_volume_rule(&ball.center_coords(), ball.outer(), x, counts)?;
    try_integrate(&nodes, |node| {
        let xi = frame.compose(&node.point);
        let df = dirac_in_frame(f, frame, &node.point, d);
        Ok((cauchy_kernel(&xi, &q)? * df).scale(node.weight))
    })
}

/// Boundary-minus-volume reconstruction of `f(𝕀xᵀ)` for any `C¹` slice function.
pub fn pompeiu<T: Real>(f: &SliceFunction<T>, ball: &BallSpec<T>, x: &R4Point<T>, opts: &CauchyOptions) -> Result<PompeiuResult<T>> {
    let boundary_distance = check_interior(ball, x, opts.delta_min_ratio)?;
    let boundary = boundary_term(f, ball, x, &opts.counts)?;
    let volume = volume_term(f, ball, x, &opts.counts, opts.derivatives)?;
    Ok(PompeiuResult { value: boundary - volume, boundary, volume, boundary_distance })
}

/// Boundary-only reconstruction of a Dirac-regular `f(𝕀xᵀ)`.
pub fn cauchy<T: Real>(f: &SliceFunction<T>, ball: &BallSpec<T>, x: &R4Point<T>, opts: &CauchyOptions) -> Result<Octonion<T>> {
    check_interior(ball, x, opts.delta_min_ratio)?;
    boundary_term(f, ball, x, &opts.counts)
}

/// The boundary integral at an exterior point; zero for Dirac-regular `f`.
pub fn cauchy_exterior<T: Real>(f: &SliceFunction<T>, ball: &BallSpec<T>, x: &R4Point<T>, opts: &CauchyOptions) -> Result<Octonion<T>> {
    check_exterior(ball, x, opts.delta_min_ratio)?;
    boundary_term(f, ball, x, &opts.counts)
}

/// `𝒱(ξ, q, 𝕀′) w = 𝕀′ M_𝕀 (V(ξ − q)w, V(ξ − α(q))w, V(ξ − β(q))w, V(ξ − γ(q))w)ᵀ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SliceCauchyKernel<T> {
    frame: Frame<T>,
    frame_prime: Frame<T>,
    points: [Octonion<T>; 4],
    rep: RepMatrix<T>,
}

impl<T: Real> SliceCauchyKernel<T> {
    pub fn new(frame: &Frame<T>, frame_prime: &Frame<T>, x: &R4Point<T>) -> Self {
        Self {
            frame: *frame,
            frame_prime: *frame_prime,
            points: x.reflections().map(|p| frame.compose(&p)),
            rep: RepMatrix::new(frame),
        }
    }

    pub fn frame(&self) -> &Frame<T> {
        &self.frame
    }

    pub fn apply(&self, xi: &Octonion<T>, w: &Octonion<T>) -> Result<Octonion<T>> {
        let mut v = [Octonion::zero(); 4];
        for (out, p) in v.iter_mut().zip(&self.points) {
            *out = cauchy_kernel(xi, p)? * *w;
        }
        Ok(self.frame_prime.contract(&self.rep.apply(&v)))
    }
}

fn check_orbit<T: Real>(ball: &BallSpec<T>, x: &R4Point<T>, ratio: f64) -> Result<()> {
    for p in x.reflections() {
        check_interior(ball, &p, ratio).map_err(|e| match e {
            Error::OutsideDomain(m) => Error::OutsideDomain(format!("reflection orbit not contained in the ball: {m}")),
            other => other,
        })?;
    }
    Ok(())
}

/// `f(𝕀′xᵀ)` from data on the slice of the ball's frame: the
/// Cauchy–Pompeiu reconstruction at `q, α(q), β(q), γ(q)` combined through
/// `M_𝕀` and `𝕀′`.
pub fn slice_cauchy<T: Real>(
    f: &SliceFunction<T>,
    ball: &BallSpec<T>,
    x: &R4Point<T>,
    frame_prime: &Frame<T>,
    opts: &CauchyOptions,
) -> Result<Octonion<T>> {
    check_orbit(ball, x, opts.delta_min_ratio)?;
    let mut vals = [Octonion::zero(); 4];
    for (v, p) in vals.iter_mut().zip(x.reflections()) {
        *v = pompeiu(f, ball, &p, opts)?.value;
    }
    Ok(frame_prime.contract(&RepMatrix::new(ball.frame()).apply(&vals)))
}

/// Boundary integral of `𝒱(ξ, q, 𝕀′)(n(ξ) f(ξ))` on one rule with its pole along `e₀`.
pub fn slice_cauchy_kernel_boundary<T: Real>(
    f: &SliceFunction<T>,
    ball: &BallSpec<T>,
    x: &R4Point<T>,
    frame_prime: &Frame<T>,
    counts: &QuadCounts,
) -> Result<Octonion<T>> {
    check_orbit(ball, x, DELTA_MIN_RATIO)?;
    let frame = ball.frame();
    let k = SliceCauchyKernel::new(frame, frame_prime, x);
    let rule = SphereRule::new(ball.center_coords(), ball.outer(), counts);
    try_integrate(&rule.nodes, |node| {
        let xi = frame.compose(&node.point);
        let nf = frame.compose(&node.normal) * f.eval_in_frame(frame, &node.point);
        Ok(k.apply(&xi, &nf)?.scale(node.weight))
    })
}

/// `(|D_ξ V(ξ − q)|, |V(ξ − q) D_ξ|)` by finite differences.
pub fn kernel_regularity_residual<T: Real>(frame: &Frame<T>, xi: &R4Point<T>, q: &R4Point<T>) -> (T, T) {
    let qo = frame.compose(q);
    let g = |p: &[T; 4]| kernel(&(frame.compose(&R4Point::new(*p)) - qo));
    (dirac_fd(g, frame, &xi.x).max_abs(), dirac_right_fd(g, frame, &xi.x).max_abs())
}

/// `|V(ξ − q) + (1/4π²) D̄_ξ |ξ − q|⁻²|` by finite differences.
pub fn kernel_potential_residual<T: Real>(frame: &Frame<T>, xi: &R4Point<T>, q: &R4Point<T>) -> T {
    let g = |p: &[T; 4]| Octonion::real(T::one() / R4Point::new(*p).sub(q).x.iter().fold(T::zero(), |a, &c| a + c * c));
    let d = conj_dirac_fd(g, frame, &xi.x);
    let v = kernel(&frame.compose(&xi.sub(q)));
    (v + d.scale(T::lit(1.0 / (4.0 * PI * PI)))).max_abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::builtin_stem;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type O = Octonion<f64>;

    fn slice(name: &str) -> SliceFunction<f64> {
        SliceFunction::new(builtin_stem(name).unwrap())
    }

    fn unit_ball() -> BallSpec<f64> {
        BallSpec::unit_ball(Frame::canonical())
    }

    #[test]
    fn kernel_examples() {
        assert!((cauchy_kernel(&O::one(), &O::zero()).unwrap().re() - 0.0506605918211689).abs() < 1e-15);
        let v = cauchy_kernel(&O::basis(1), &O::zero()).unwrap();
        assert!(v.dist(&O::basis(1).scale(-1.0 / (2.0 * PI * PI))) < 1e-16);
        let u = O::from_f64([0.3, -0.2, 0.5, 0.1, 0.0, 0.4, 0.0, 0.0]);
        let (a, b) = (kernel(&u.scale(2.0)), kernel(&u).scale(1.0 / 8.0));
        assert!(a.dist(&b) < 1e-15);
        assert!(matches!(cauchy_kernel(&u, &u), Err(Error::Singularity { .. })));
    }

    #[test]
    fn pompeiu_examples() {
        let opts = CauchyOptions::default();
        let ball = unit_ball();
        let x = R4Point::new([0.2, 0.1, 0.0, 0.0]);
        let r = pompeiu(&slice("example44"), &ball, &x, &opts).unwrap();
        assert!(r.value.dist(&O::from_f64([0.6, 0.1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])) < 1e-6, "{:?}", r);
        assert!(r.volume.max_abs() < 1e-12);

        let x = R4Point::new([0.3, 0.0, 0.0, 0.0]);
        let r = pompeiu(&slice("identity"), &ball, &x, &opts).unwrap();
        assert!(r.value.dist(&O::real(0.3)) < 1e-5, "{:?}", r);
        assert!(r.volume.max_abs() > 1e-3);

        let c = slice("constant:1");
        let x = R4Point::new([-0.4, 0.2, 0.3, -0.1]);
        assert!(cauchy(&c, &ball, &x, &opts).unwrap().dist(&O::one()) < 1e-6);
    }

    #[test]
    fn boundary_conditioning() {
        let opts = CauchyOptions::default();
        let near = R4Point::new([0.97, 0.0, 0.0, 0.0]);
        assert!(matches!(pompeiu(&slice("identity"), &unit_ball(), &near, &opts), Err(Error::TooCloseToBoundary { .. })));
        assert!(matches!(cauchy(&slice("identity"), &unit_ball(), &R4Point::new([1.5, 0.0, 0.0, 0.0]), &opts), Err(Error::OutsideDomain(_))));
        assert!(cauchy_exterior(&slice("identity"), &unit_ball(), &R4Point::new([0.5, 0.0, 0.0, 0.0]), &opts).is_err());
    }

    #[test]
    fn cauchy_and_exterior() {
        let opts = CauchyOptions::default();
        let f = slice("quintic");
        let x = R4Point::new([0.0, 0.0, 0.3, 0.0]);
        let exact = f.eval_in_frame(&Frame::canonical(), &x);
        assert!(cauchy(&f, &unit_ball(), &x, &opts).unwrap().dist(&exact) < 1e-6);
        let ext = cauchy_exterior(&f, &unit_ball(), &R4Point::new([2.0, 0.0, 0.0, 0.0]), &opts).unwrap();
        assert!(ext.max_abs() < 1e-6);
    }

    #[test]
    fn slice_cauchy_examples() {
        let opts = CauchyOptions::default();
        let ball = unit_ball();
        let frame = *ball.frame();
        let x = R4Point::new([0.2, 0.1, 0.1, 0.1]);
        let f = slice("example44");
        let same = slice_cauchy(&f, &ball, &x, &frame, &opts).unwrap();
        let direct = pompeiu(&f, &ball, &x, &opts).unwrap().value;
        assert!(same.dist(&direct) <= 1e-12);

        let prime = Frame::complete(O::basis(4), 1e-12).unwrap();
        let p = slice_cauchy(&f, &ball, &x, &prime, &opts).unwrap();
        assert!(p.dist(&f.eval(&prime.compose(&x)).unwrap()) < 1e-5);

        let k = SliceCauchyKernel::new(&frame, &frame, &x);
        let xi = O::from_f64([0.6, 0.0, 0.8, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let w = O::from_f64([0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8]);
        let reduced = cauchy_kernel(&xi, &frame.compose(&x)).unwrap() * w;
        assert!(k.apply(&xi, &w).unwrap().dist(&reduced) < 1e-13);

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let prime = Frame::random(&mut rng);
        let fq = slice("quintic");
        let via_kernel = slice_cauchy_kernel_boundary(&fq, &ball, &x, &prime, &opts.counts.doubled()).unwrap();
        let exact = fq.eval(&prime.compose(&x)).unwrap();
        assert!(via_kernel.dist(&exact) < 1e-5, "{}", via_kernel.dist(&exact));
    }

    #[test]
    fn orbit_must_be_inside() {
        let frame = Frame::canonical();
        let opts = CauchyOptions::default();
        let f = slice("example44");
        let axial = BallSpec::ball(frame, O::real(0.5), 0.6).unwrap();
        assert!(slice_cauchy(&f, &axial, &R4Point::new([0.5, 0.1, 0.1, 0.0]), &frame, &opts).is_ok());
        let off = BallSpec::ball(frame, frame.compose(&R4Point::new([0.5, 0.1, 0.0, 0.0])), 0.15).unwrap();
        let x = R4Point::new([0.5, 0.1, 0.0, 0.0]);
        assert!(pompeiu(&f, &off, &x, &opts).is_ok());
        assert!(matches!(slice_cauchy(&f, &off, &x, &frame, &opts), Err(Error::OutsideDomain(_))));
    }

    #[test]
    fn kernel_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let frame = Frame::random(&mut rng);
        let q = R4Point::new([0.1, -0.2, 0.3, 0.0]);
        for xi in [R4Point::new([0.9, 0.1, 0.0, -0.3]), R4Point::new([-0.5, 0.6, 0.7, 0.2])] {
            let (l, r) = kernel_regularity_residual(&frame, &xi, &q);
            assert!(l <= 1e-6 && r <= 1e-6, "{l:e} {r:e}");
            assert!(kernel_potential_residual(&frame, &xi, &q) <= 1e-6);
        }
    }
}
