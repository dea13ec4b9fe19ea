//! Book structure of the octonions.
//!
//! A [`Frame`] `𝕀 = (1, I, J, K)` spans the associative quaternionic slice
//! `ℍ_𝕀`; every octonion lies in at least one such slice. Points of a slice are
//! written `𝕀xᵀ = x₀ + I x₁ + J x₂ + K x₃` for [`R4Point`] coordinates `x`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::octonion::Octonion;
use crate::quaternion::Quaternion;
use crate::scalar::{Real, AXIS_TOLERANCE, FRAME_SCAN_THRESHOLD};

/// Coordinates `(x₀, x₁, x₂, x₃)` of a slice point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct R4Point<T> {
    pub x: [T; 4],
}

impl<T: Real> R4Point<T> {
    pub const fn new(x: [T; 4]) -> Self {
        Self { x }
    }

    pub fn from_f64(x: [f64; 4]) -> Self {
        Self { x: x.map(T::lit) }
    }

    pub fn alpha(&self) -> Self {
        let [a, b, c, d] = self.x;
        Self { x: [a, b, -c, -d] }
    }

    pub fn beta(&self) -> Self {
        let [a, b, c, d] = self.x;
        Self { x: [a, -b, c, -d] }
    }

    pub fn gamma(&self) -> Self {
        let [a, b, c, d] = self.x;
        Self { x: [a, -b, -c, d] }
    }

    /// `(x, α(x), β(x), γ(x))`, the orbit sampled by the representation formula.
    pub fn reflections(&self) -> [Self; 4] {
        [*self, self.alpha(), self.beta(), self.gamma()]
    }

    pub fn norm(&self) -> T {
        self.x.iter().fold(T::zero(), |a, &v| a + v * v).sqrt()
    }

    /// Distance of the point to the real axis, `√(x₁² + x₂² + x₃²)`.
    pub fn radial(&self) -> T {
        (self.x[1] * self.x[1] + self.x[2] * self.x[2] + self.x[3] * self.x[3]).sqrt()
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { x: std::array::from_fn(|i| self.x[i] - o.x[i]) }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { x: std::array::from_fn(|i| self.x[i] + o.x[i]) }
    }

    pub fn scale(&self, s: T) -> Self {
        Self { x: self.x.map(|v| v * s) }
    }

    pub fn to_quaternion(&self) -> Quaternion<T> {
        Quaternion::new(self.x)
    }
}

/// A frame `(1, I, J, K)` with `I, J ∈ 𝕊⁶`, `I ⊥ J` and `K = IJ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame<T> {
    units: [Octonion<T>; 4],
}

impl<T: Real> Frame<T> {
    /// Builds the frame `(1, I, IJ)`, validating both units.
    pub fn new(i: Octonion<T>, j: Octonion<T>, tol: T) -> Result<Self> {
        for (name, u) in [("I", &i), ("J", &j)] {
            let residual = (*u * *u + Octonion::one()).max_abs();
            if residual > tol {
                return Err(Error::InvalidFrame(format!(
                    "{name} is not a unit imaginary (|{name}² + 1| = {:e})",
                    residual.as_f64()
                )));
            }
        }
        let ip = i.dot(&j).abs();
        if ip > tol {
            return Err(Error::InvalidFrame(format!("⟨I, J⟩ = {:e}", ip.as_f64())));
        }
        Ok(Self { units: [Octonion::one(), i, j, i * j] })
    }

    /// `(1, e1, e2, e3)`.
    pub fn canonical() -> Self {
        Self { units: [0, 1, 2, 3].map(Octonion::basis) }
    }

    /// Completes a unit imaginary `I` to a frame.
    ///
    /// `J` is the normalized component orthogonal to `I` of the first basis
    /// unit `e_k` (in index order) whose orthogonal residual is at least
    /// `1e-6`; `K = IJ`.
    pub fn complete(i: Octonion<T>, tol: T) -> Result<Self> {
        let residual = (i * i + Octonion::one()).max_abs();
        if residual > tol || !i.is_finite() {
            return Err(Error::NotUnitImaginary { residual: residual.as_f64() });
        }
        let threshold = T::lit(FRAME_SCAN_THRESHOLD);
        for k in 1..8 {
            let ek = Octonion::<T>::basis(k);
            let v = ek - i.scale(ek.dot(&i));
            let n = v.norm();
            if n >= threshold {
                let j = v.scale(T::one() / n);
                return Ok(Self { units: [Octonion::one(), i, j, i * j] });
            }
        }
        unreachable!("a unit vector cannot be parallel to all seven imaginary units")
    }

    /// Uniformly oriented random frame drawn from `rng`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let gaussian_im = |rng: &mut R| {
            let mut c = [T::zero(); 8];
            for v in c.iter_mut().skip(1) {
                *v = T::lit(rng.sample::<f64, _>(StandardNormal));
            }
            Octonion::new(c)
        };
        let i = normalized(gaussian_im(rng));
        let v = gaussian_im(rng);
        let j = normalized(v - i.scale(v.dot(&i)));
        Self { units: [Octonion::one(), i, j, i * j] }
    }

    pub fn units(&self) -> &[Octonion<T>; 4] {
        &self.units
    }

    pub fn i(&self) -> Octonion<T> {
        self.units[1]
    }

    pub fn j(&self) -> Octonion<T> {
        self.units[2]
    }

    pub fn k(&self) -> Octonion<T> {
        self.units[3]
    }

    /// `𝕀xᵀ = x₀ + I x₁ + J x₂ + K x₃`.
    pub fn compose(&self, x: &R4Point<T>) -> Octonion<T> {
        (0..4).fold(Octonion::zero(), |acc, k| acc + self.units[k].scale(x.x[k]))
    }

    /// `𝕀yᵀ = y₀ + I·y₁ + J·y₂ + K·y₃` for octonion-valued `y`.
    pub fn contract(&self, y: &[Octonion<T>; 4]) -> Octonion<T> {
        (0..4).fold(Octonion::zero(), |acc, k| acc + self.units[k] * y[k])
    }

    /// Embeds a quaternion via `1, i, j, k ↦ 1, I, J, K`.
    pub fn embed(&self, q: Quaternion<T>) -> Octonion<T> {
        self.compose(&R4Point::new(q.c))
    }

    /// Orthogonal projection coordinates of `q` onto the slice, together with
    /// the norm of the rejected part.
    pub fn project(&self, q: &Octonion<T>) -> (R4Point<T>, T) {
        let x = R4Point::new(std::array::from_fn(|k| q.dot(&self.units[k])));
        let residual = (*q - self.compose(&x)).norm();
        (x, residual)
    }

    /// Slice coordinates of `q`; fails if `q ∉ ℍ_𝕀` beyond `tol`.
    pub fn coords(&self, q: &Octonion<T>, tol: T) -> Result<R4Point<T>> {
        let (x, residual) = self.project(q);
        if residual > tol {
            return Err(Error::NotInSlice { residual: residual.as_f64() });
        }
        Ok(x)
    }

    pub fn to_quaternion(&self, q: &Octonion<T>, tol: T) -> Result<Quaternion<T>> {
        self.coords(q, tol).map(|x| x.to_quaternion())
    }

    /// Largest distance from `span{1, I, J, K}` over the 16 unit products.
    pub fn closure_residual(&self) -> T {
        let mut worst = T::zero();
        for a in &self.units {
            for b in &self.units {
                worst = worst.max(self.project(&(*a * *b)).1);
            }
        }
        worst
    }

    /// Frame `𝕀g⁻¹` under which the same point has coordinates `g x`.
    /// Only orientation-preserving `g` keep `K = IJ`.
    pub fn reparametrized(&self, g: &OrthoAction<T>, tol: T) -> Result<Self> {
        if g.det() < T::zero() {
            return Err(Error::InvalidFrame("reparametrization by det −1 element".into()));
        }
        let mut units = self.units;
        for (c, unit) in units.iter_mut().enumerate().skip(1) {
            *unit = (1..4).fold(Octonion::zero(), |acc, r| acc + self.units[r].scale(g.p[c - 1][r - 1]));
        }
        Frame::new(units[1], units[2], tol)
    }

    /// Orthogonal complement unit `e4 ⊥ ℍ_𝕀`: the first standard unit whose
    /// component off the slice has norm above `1e-8`, normalized.
    pub fn perpendicular_unit(&self) -> Octonion<T> {
        for k in 1..8 {
            let ek = Octonion::<T>::basis(k);
            let (x, _) = self.project(&ek);
            let v = ek - self.compose(&x);
            let n = v.norm();
            if n > T::lit(1e-8) {
                return v.scale(T::one() / n);
            }
        }
        unreachable!("a 4-dimensional slice cannot contain all of e1..e7")
    }

    pub fn cast<U: Real>(&self) -> Frame<U> {
        Frame { units: self.units.map(|u| u.cast()) }
    }
}

fn normalized<T: Real>(v: Octonion<T>) -> Octonion<T> {
    v.scale(T::one() / v.norm())
}

/// Splits `q` as `x₀ + I x₁` with `I = Im(q)/|Im(q)|`, completing `I` to a
/// frame. Points within the axis tolerance get the canonical frame.
pub fn decompose<T: Real>(q: &Octonion<T>) -> (Frame<T>, R4Point<T>) {
    let im = q.im();
    let r = im.norm();
    if r < T::lit(AXIS_TOLERANCE) {
        return (Frame::canonical(), R4Point::new([q.re(), T::zero(), T::zero(), T::zero()]));
    }
    let i = im.scale(T::one() / r);
    // `i` is unit imaginary up to rounding, so completion cannot fail.
    let frame = Frame::complete(i, T::lit(1e-6)).expect("normalized imaginary part");
    (frame, R4Point::new([q.re(), r, T::zero(), T::zero()]))
}

/// Element `g = diag(1, P)` of the O(3) subgroup of O(4) fixing the real axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrthoAction<T> {
    pub p: [[T; 3]; 3],
}

impl<T: Real> OrthoAction<T> {
    pub fn new(p: [[T; 3]; 3], tol: T) -> Result<Self> {
        let g = Self { p };
        let r = g.orthogonality_residual();
        if r > tol {
            return Err(Error::InvalidConfig(format!("matrix is not orthogonal (residual {:e})", r.as_f64())));
        }
        Ok(g)
    }

    pub fn identity() -> Self {
        Self { p: std::array::from_fn(|i| std::array::from_fn(|j| if i == j { T::one() } else { T::zero() })) }
    }

    pub fn diag(d: [T; 3]) -> Self {
        Self { p: std::array::from_fn(|i| std::array::from_fn(|j| if i == j { d[i] } else { T::zero() })) }
    }

    /// `max |PᵀP − Id|`.
    pub fn orthogonality_residual(&self) -> T {
        let mut worst = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                let s = (0..3).fold(T::zero(), |a, k| a + self.p[k][i] * self.p[k][j]);
                let id = if i == j { T::one() } else { T::zero() };
                worst = worst.max((s - id).abs());
            }
        }
        worst
    }

    pub fn det(&self) -> T {
        let p = &self.p;
        p[0][0] * (p[1][1] * p[2][2] - p[1][2] * p[2][1]) - p[0][1] * (p[1][0] * p[2][2] - p[1][2] * p[2][0])
            + p[0][2] * (p[1][0] * p[2][1] - p[1][1] * p[2][0])
    }

    pub fn inverse(&self) -> Self {
        Self { p: std::array::from_fn(|i| std::array::from_fn(|j| self.p[j][i])) }
    }

    /// `g x` on ℝ⁴.
    pub fn act_point(&self, x: &R4Point<T>) -> R4Point<T> {
        let mut y = [x.x[0], T::zero(), T::zero(), T::zero()];
        for i in 0..3 {
            y[i + 1] = (0..3).fold(T::zero(), |a, j| a + self.p[i][j] * x.x[j + 1]);
        }
        R4Point::new(y)
    }

    /// `g v` on 𝕆⁴: `v₀` fixed, `(v₁, v₂, v₃)` mixed by `P`.
    pub fn act(&self, v: &[Octonion<T>; 4]) -> [Octonion<T>; 4] {
        let mut out = [v[0], Octonion::zero(), Octonion::zero(), Octonion::zero()];
        for i in 0..3 {
            out[i + 1] = (0..3).fold(Octonion::zero(), |a, j| a + v[j + 1].scale(self.p[i][j]));
        }
        out
    }

    /// Approximately Haar-distributed element of O(3), drawn from `rng`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut cols: [[f64; 3]; 3] = [[0.0; 3]; 3];
        for c in 0..3 {
            loop {
                let mut v: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
                for prev in cols.iter().take(c) {
                    let d: f64 = (0..3).map(|k| v[k] * prev[k]).sum();
                    for k in 0..3 {
                        v[k] -= d * prev[k];
                    }
                }
                let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
                if n > 1e-8 {
                    cols[c] = v.map(|a| a / n);
                    break;
                }
            }
        }
        Self { p: std::array::from_fn(|i| std::array::from_fn(|j| T::lit(cols[j][i]))) }
    }
}

/// Deterministic O(3) sample for a given seed.
pub fn sample_o3<T: Real>(seed: u64) -> OrthoAction<T> {
    OrthoAction::random(&mut ChaCha8Rng::seed_from_u64(seed))
}

/// Spherical shell `R₁ < |q − q₀| < R₂` centred in a declared slice; a ball
/// when `R₁ = 0` (the centre included).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShellSpec<T> {
    frame: Frame<T>,
    center: R4Point<T>,
    inner: T,
    outer: T,
}

pub type BallSpec<T> = ShellSpec<T>;

impl<T: Real> ShellSpec<T> {
    pub fn ball(frame: Frame<T>, center: Octonion<T>, radius: T) -> Result<Self> {
        Self::shell(frame, center, T::zero(), radius)
    }

    pub fn shell(frame: Frame<T>, center: Octonion<T>, inner: T, outer: T) -> Result<Self> {
        if !(inner >= T::zero() && inner < outer) {
            return Err(Error::InvalidConfig(format!(
                "radii must satisfy 0 ≤ R1 < R2 (got {}, {})",
                inner, outer
            )));
        }
        let center = frame.coords(&center, T::lit(1e-12)).map_err(|_| {
            Error::InvalidConfig("domain centre does not lie in the declared frame".into())
        })?;
        Ok(Self { frame, center, inner, outer })
    }

    /// Unit ball about the origin of the given frame.
    pub fn unit_ball(frame: Frame<T>) -> Self {
        Self { frame, center: R4Point::default(), inner: T::zero(), outer: T::one() }
    }

    pub fn frame(&self) -> &Frame<T> {
        &self.frame
    }

    pub fn center(&self) -> Octonion<T> {
        self.frame.compose(&self.center)
    }

    pub fn center_coords(&self) -> R4Point<T> {
        self.center
    }

    pub fn inner(&self) -> T {
        self.inner
    }

    pub fn outer(&self) -> T {
        self.outer
    }

    pub fn is_ball(&self) -> bool {
        self.inner.is_zero()
    }

    fn contains_distance(&self, d: T) -> bool {
        let lower_ok = if self.is_ball() { d >= T::zero() } else { d > self.inner };
        lower_ok && d < self.outer
    }

    pub fn contains(&self, q: &Octonion<T>) -> bool {
        self.contains_distance((*q - self.center()).norm())
    }

    /// Membership of `𝕀xᵀ` for slice coordinates in the domain's own frame.
    pub fn contains_coords(&self, x: &R4Point<T>) -> bool {
        self.contains_distance(x.sub(&self.center).norm())
    }

    /// `x, α(x), β(x), γ(x)` all inside (the symmetrized set).
    pub fn contains_orbit(&self, x: &R4Point<T>) -> bool {
        x.reflections().iter().all(|p| self.contains_coords(p))
    }

    /// Signed distance to the nearest boundary sphere (positive inside).
    pub fn boundary_distance(&self, x: &R4Point<T>) -> T {
        let d = x.sub(&self.center).norm();
        let outer = self.outer - d;
        if self.is_ball() {
            outer
        } else {
            outer.min(d - self.inner)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type O = Octonion<f64>;

    #[test]
    fn decompose_examples() {
        let q = O::one() + O::basis(1) + O::basis(2) + O::basis(3) + O::basis(4);
        let (frame, x) = decompose(&q);
        let expected_i = (O::basis(1) + O::basis(2) + O::basis(3) + O::basis(4)).scale(0.5);
        assert!(frame.i().dist(&expected_i) < 1e-15);
        assert_eq!(x, R4Point::new([1.0, 2.0, 0.0, 0.0]));
        assert!(frame.compose(&x).dist(&q) < 1e-13);

        let (frame, x) = decompose(&O::real(5.0));
        assert_eq!(frame, Frame::canonical());
        assert_eq!(x, R4Point::new([5.0, 0.0, 0.0, 0.0]));

        let (frame, x) = decompose(&O::basis(7).scale(3.0));
        assert_eq!(frame.i(), O::basis(7));
        assert_eq!(x, R4Point::new([0.0, 3.0, 0.0, 0.0]));
    }

    #[test]
    fn complete_frame_rule() {
        let f = Frame::complete(O::basis(1), 1e-12).unwrap();
        assert_eq!(f.j(), O::basis(2));
        assert_eq!(f.k(), O::basis(1) * O::basis(2));
        assert_eq!(f.k(), O::basis(3));

        let f = Frame::complete(O::basis(7), 1e-12).unwrap();
        assert_eq!(f.j(), O::basis(1));
        assert!(f.j().dot(&O::basis(7)).abs() < 1e-15);
        assert!(f.closure_residual() < 1e-12);

        let s = 0.5f64.sqrt();
        let f = Frame::complete((O::basis(1) + O::basis(2)).scale(s), 1e-12).unwrap();
        for u in &f.units()[1..] {
            assert!((*u * *u + O::one()).max_abs() < 1e-12);
        }
        assert!(f.i().dot(&f.j()).abs() < 1e-12);
        assert!(f.closure_residual() < 1e-12);

        assert!(matches!(Frame::complete(O::basis(1).scale(2.0), 1e-12), Err(Error::NotUnitImaginary { .. })));
        assert!(Frame::complete(O::one(), 1e-12).is_err());
    }

    #[test]
    fn involutions() {
        let x = R4Point::new([1.0, 2.0, 3.0, 4.0]);
        assert_eq!(x.alpha(), R4Point::new([1.0, 2.0, -3.0, -4.0]));
        assert_eq!(x.beta().beta(), x);
        assert_eq!(R4Point::new([1.0, 0.0, 0.0, 0.0]).gamma(), R4Point::new([1.0, 0.0, 0.0, 0.0]));
        assert_eq!(x.alpha().beta(), x.gamma());
        assert_eq!(x.alpha().beta(), x.beta().alpha());
    }

    #[test]
    fn o3_action() {
        let v = [O::basis(0), O::basis(1), O::basis(5), O::basis(6).scale(2.0)];
        assert_eq!(OrthoAction::identity().act(&v), v);
        let g = OrthoAction::diag([1.0, -1.0, -1.0]);
        assert_eq!(g.act(&v), [v[0], v[1], -v[2], -v[3]]);
        let g = sample_o3::<f64>(7);
        let back = g.inverse().act(&g.act(&v));
        for k in 0..4 {
            assert!(back[k].dist(&v[k]) < 1e-12);
        }
    }

    #[test]
    fn sample_o3_contract() {
        let mut pos = 0;
        let mut neg = 0;
        for seed in 1..=1000u64 {
            let g = sample_o3::<f64>(seed);
            assert!(g.orthogonality_residual() < 1e-12);
            if g.det() > 0.0 {
                pos += 1;
            } else {
                neg += 1;
            }
        }
        assert!(pos > 0 && neg > 0, "det signs: +{pos} −{neg}");
        assert_eq!(sample_o3::<f64>(42).p.map(|r| r.map(f64::to_bits)), sample_o3::<f64>(42).p.map(|r| r.map(f64::to_bits)));
    }

    #[test]
    fn reparametrized_frame_keeps_points() {
        let frame = Frame::complete(O::basis(3), 1e-12).unwrap();
        let mut seed = 3;
        let g = loop {
            let g = sample_o3::<f64>(seed);
            if g.det() > 0.0 {
                break g;
            }
            seed += 1;
        };
        let x = R4Point::new([0.3, -0.7, 1.1, 0.2]);
        let frame2 = frame.reparametrized(&g, 1e-12).unwrap();
        assert!(frame2.compose(&g.act_point(&x)).dist(&frame.compose(&x)) < 1e-14);
    }

    #[test]
    fn domains() {
        let frame = Frame::canonical();
        assert!(ShellSpec::shell(frame, O::zero(), 2.0, 1.0).is_err());
        assert!(ShellSpec::ball(frame, O::basis(5), 1.0).is_err());
        let b = ShellSpec::ball(frame, O::zero(), 1.0).unwrap();
        assert!(b.contains(&O::zero()));
        assert!(!b.contains(&O::basis(6)));
        let s = ShellSpec::shell(frame, O::zero(), 0.5, 2.0).unwrap();
        assert!(!s.contains(&O::real(0.2)));
        assert!(s.contains(&O::basis(6)));
        assert!(s.contains_orbit(&R4Point::new([0.5, 0.5, 0.5, 0.5])));
    }
}
