//! Product rules on `S³_ρ` and `B⁴_ρ` in slice coordinates.
//!
//! Hyperspherical coordinates about a pole `d`:
//! `y = ρ(cos ψ₁ d + sin ψ₁ cos ψ₂ e₁' + sin ψ₁ sin ψ₂ cos φ e₂' + sin ψ₁ sin ψ₂ sin φ e₃')`,
//! `dS = ρ³ sin²ψ₁ sin ψ₂ dψ₁ dψ₂ dφ`, with Gauss–Legendre in `ψ₁, ψ₂` and the
//! trapezoid rule in `φ`.

use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::str::FromStr;

use gauss_quad::GaussLegendre;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::R4Point;
use crate::octonion::Octonion;
use crate::scalar::Real;

/// Node counts `(N₁, N₂, N₃, N_r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadCounts {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub nr: usize,
}

impl Default for QuadCounts {
    fn default() -> Self {
        Self { n1: 24, n2: 24, n3: 48, nr: 24 }
    }
}

impl QuadCounts {
    pub fn new(n1: usize, n2: usize, n3: usize, nr: usize) -> Result<Self> {
        if [n1, n2, n3, nr].contains(&0) {
            return Err(Error::InvalidConfig("quadrature counts must be positive".into()));
        }
        Ok(Self { n1, n2, n3, nr })
    }

    pub fn doubled(&self) -> Self {
        Self { n1: 2 * self.n1, n2: 2 * self.n2, n3: 2 * self.n3, nr: 2 * self.nr }
    }

    pub fn surface_nodes(&self) -> usize {
        self.n1 * self.n2 * self.n3
    }
}

impl FromStr for QuadCounts {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<usize> = s
            .split(',')
            .map(|p| p.trim().parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidConfig(format!("quadrature counts `{s}`: {e}")))?;
        match v[..] {
            [a, b, c, d] => Self::new(a, b, c, d),
            [a, b, c] => Self::new(a, b, c, Self::default().nr),
            _ => Err(Error::InvalidConfig(format!("expected N1,N2,N3[,Nr], got `{s}`"))),
        }
    }
}

/// Gauss–Legendre nodes and weights on `[a, b]`.
pub fn gauss_legendre<T: Real>(n: usize, a: T, b: T) -> Vec<(T, T)> {
    let n = NonZeroUsize::new(n).expect("positive node count");
    let rule = GaussLegendre::new(n);
    let (mid, half) = ((a + b) / T::lit(2.0), (b - a) / T::lit(2.0));
    rule.iter().map(|(x, w)| (mid + half * T::lit(*x), half * T::lit(*w))).collect()
}

type Mat4<T> = [[T; 4]; 4];

/// Orthogonal map sending `e₀` to the unit vector `d` (a Householder
/// reflection, or the identity when `d = e₀`).
fn pole_map<T: Real>(d: &[T; 4]) -> Mat4<T> {
    let v = [T::one() - d[0], -d[1], -d[2], -d[3]];
    let vv = v.iter().fold(T::zero(), |a, &c| a + c * c);
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let id = if i == j { T::one() } else { T::zero() };
            if vv <= T::lit(1e-30) {
                id
            } else {
                id - T::lit(2.0) * v[i] * v[j] / vv
            }
        })
    })
}

fn apply<T: Real>(m: &Mat4<T>, y: &[T; 4]) -> [T; 4] {
    std::array::from_fn(|i| (0..4).fold(T::zero(), |a, j| a + m[i][j] * y[j]))
}

fn unit_direction<T: Real>(v: &R4Point<T>) -> Option<[T; 4]> {
    let n = v.norm();
    (n > T::lit(1e-12)).then(|| v.x.map(|c| c / n))
}

/// Unit directions of `S³` with weights summing to `2π²`, pole along `d`.
fn unit_sphere<T: Real>(counts: &QuadCounts, pole: Option<[T; 4]>) -> Vec<([T; 4], T)> {
    let pi = T::lit(PI);
    let g1 = gauss_legendre(counts.n1, T::zero(), pi);
    let g2 = gauss_legendre(counts.n2, T::zero(), pi);
    let dphi = T::lit(2.0 * PI / counts.n3 as f64);
    let rot = pole.map(|d| pole_map(&d));
    let mut out = Vec::with_capacity(counts.surface_nodes());
    for &(p1, w1) in &g1 {
        let (s1, c1) = p1.sin_cos();
        for &(p2, w2) in &g2 {
            let (s2, c2) = p2.sin_cos();
            for k in 0..counts.n3 {
                let phi = dphi * T::lit(k as f64);
                let (s3, c3) = phi.sin_cos();
                let y = [c1, s1 * c2, s1 * s2 * c3, s1 * s2 * s3];
                let y = rot.as_ref().map_or(y, |m| apply(m, &y));
                out.push((y, w1 * w2 * dphi * s1 * s1 * s2));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfaceNode<T> {
    pub point: R4Point<T>,
    /// Unit outward normal of the sphere.
    pub normal: R4Point<T>,
    pub weight: T,
}

/// Product rule on the sphere `|y − c| = ρ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereRule<T> {
    pub center: R4Point<T>,
    pub radius: T,
    pub nodes: Vec<SurfaceNode<T>>,
}

impl<T: Real> SphereRule<T> {
    /// Rule with its polar axis along `e₀`.
    pub fn new(center: R4Point<T>, radius: T, counts: &QuadCounts) -> Self {
        Self::build(center, radius, counts, None)
    }

    /// Rule with its polar axis pointing from the centre toward `target`,
    /// clustering nodes where a kernel singular at `target` varies fastest.
    pub fn aligned(center: R4Point<T>, radius: T, counts: &QuadCounts, target: &R4Point<T>) -> Self {
        Self::build(center, radius, counts, unit_direction(&target.sub(&center)))
    }

    fn build(center: R4Point<T>, radius: T, counts: &QuadCounts, pole: Option<[T; 4]>) -> Self {
        let r3 = radius * radius * radius;
        let nodes = unit_sphere(counts, pole)
            .into_iter()
            .map(|(y, w)| SurfaceNode {
                point: center.add(&R4Point::new(y).scale(radius)),
                normal: R4Point::new(y),
                weight: w * r3,
            })
            .collect();
        Self { center, radius, nodes }
    }

    pub fn weight_sum(&self) -> T {
        pairwise_sum_real(&self.nodes.iter().map(|n| n.weight).collect::<Vec<_>>())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolumeNode<T> {
    pub point: R4Point<T>,
    pub weight: T,
}

/// Rule on the ball `|y − c| < ρ` from spherical shells about `c`.
pub fn ball_volume_rule<T: Real>(center: &R4Point<T>, radius: T, counts: &QuadCounts) -> Vec<VolumeNode<T>> {
    let dirs = unit_sphere(counts, None);
    let radial = gauss_legendre(counts.nr, T::zero(), radius);
    let mut out = Vec::with_capacity(dirs.len() * radial.len());
    for (y, w) in &dirs {
        for &(s, ws) in &radial {
            out.push(VolumeNode { point: center.add(&R4Point::new(*y).scale(s)), weight: *w * ws * s * s * s });
        }
    }
    out
}

/// Rule on the ball `|y − c| < ρ` from rays leaving the interior point `q`.
///
/// The ray in direction `ω` exits at `s = −b + √(b² + ρ² − |q − c|²)`,
/// `b = ⟨q − c, ω⟩`; the `s³` Jacobian cancels integrable singularities of
/// order `|y − q|⁻³` at `q`.
pub fn polar_volume_rule<T: Real>(
    center: &R4Point<T>,
    radius: T,
    q: &R4Point<T>,
    counts: &QuadCounts,
) -> Result<Vec<VolumeNode<T>>> {
    let d = q.sub(center);
    let dd = d.x.iter().fold(T::zero(), |a, &c| a + c * c);
    if dd >= radius * radius {
        return Err(Error::OutsideDomain("polar volume rule needs an interior point".into()));
    }
    let dirs = unit_sphere(counts, unit_direction(&d));
    let unit = gauss_legendre(counts.nr, T::zero(), T::one());
    let mut out = Vec::with_capacity(dirs.len() * unit.len());
    for (w_dir, wt) in &dirs {
        let b = (0..4).fold(T::zero(), |a, k| a + d.x[k] * w_dir[k]);
        let reach = -b + (b * b + radius * radius - dd).sqrt();
        for &(t, wr) in &unit {
            let s = t * reach;
            out.push(VolumeNode { point: q.add(&R4Point::new(*w_dir).scale(s)), weight: *wt * wr * reach * s * s * s });
        }
    }
    Ok(out)
}

const PAIRWISE_BLOCK: usize = 8;

/// Sum in a fixed binary-tree order, independent of thread count.
pub fn pairwise_sum<T: Real>(v: &[Octonion<T>]) -> Octonion<T> {
    if v.len() <= PAIRWISE_BLOCK {
        return v.iter().copied().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

pub fn pairwise_sum_real<T: Real>(v: &[T]) -> T {
    if v.len() <= PAIRWISE_BLOCK {
        return v.iter().copied().fold(T::zero(), |a, b| a + b);
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum_real(a) + pairwise_sum_real(b)
}

/// `Σ f(node)` evaluated in parallel and summed deterministically.
pub fn integrate<N: Sync, T: Real>(nodes: &[N], f: impl Fn(&N) -> Octonion<T> + Sync + Send) -> Octonion<T> {
    let vals: Vec<Octonion<T>> = nodes.par_iter().map(f).collect();
    pairwise_sum(&vals)
}

/// Fallible variant of [`integrate`]; the first error in node order wins.
pub fn try_integrate<N: Sync, T: Real>(nodes: &[N], f: impl Fn(&N) -> Result<Octonion<T>> + Sync + Send) -> Result<Octonion<T>> {
    let vals: Vec<Octonion<T>> = nodes.par_iter().map(f).collect::<Result<_>>()?;
    Ok(pairwise_sum(&vals))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_sums() {
        let c = QuadCounts::default();
        let center = R4Point::new([0.1, -0.2, 0.0, 0.3]);
        for rho in [0.5, 1.0, 2.0] {
            let area = 2.0 * PI * PI * rho * rho * rho;
            let s = SphereRule::new(center, rho, &c);
            assert!((s.weight_sum() / area - 1.0).abs() <= 1e-10);
            let a = SphereRule::aligned(center, rho, &c, &R4Point::new([0.4, 0.1, 0.2, 0.3]));
            assert!((a.weight_sum() / area - 1.0).abs() <= 1e-10);

            let vol = PI * PI * rho.powi(4) / 2.0;
            let b: f64 = pairwise_sum_real(&ball_volume_rule(&center, rho, &c).iter().map(|n| n.weight).collect::<Vec<_>>());
            assert!((b / vol - 1.0).abs() <= 1e-10);
            let q = center.add(&R4Point::new([0.3, 0.1, -0.2, 0.0]).scale(rho));
            let p: f64 = pairwise_sum_real(&polar_volume_rule(&center, rho, &q, &c).unwrap().iter().map(|n| n.weight).collect::<Vec<_>>());
            assert!((p / vol - 1.0).abs() <= 1e-10, "{p} {vol}");
        }
    }

    #[test]
    fn nodes_lie_on_sphere_with_outward_normals() {
        let center = R4Point::<f64>::new([1.0, 0.0, 2.0, 0.0]);
        let r = SphereRule::aligned(center, 0.5, &QuadCounts::new(4, 4, 8, 2).unwrap(), &R4Point::new([0.0, 1.0, 0.0, 0.0]));
        for n in &r.nodes {
            assert!((n.point.sub(&center).norm() - 0.5).abs() < 1e-14);
            assert!((n.normal.norm() - 1.0).abs() < 1e-14);
            assert!(n.point.sub(&center).scale(2.0).sub(&n.normal).norm() < 1e-14);
        }
    }

    #[test]
    fn polynomial_moments() {
        // ∫_{S³} y₀² dS = π²/2 on the unit sphere; any pole
        let c = QuadCounts::default();
        for target in [R4Point::<f64>::new([1.0, 0.0, 0.0, 0.0]), R4Point::new([0.3, -0.5, 0.2, 0.7])] {
            let r = SphereRule::aligned(R4Point::default(), 1.0, &c, &target);
            let m = pairwise_sum_real(&r.nodes.iter().map(|n| n.weight * n.point.x[0] * n.point.x[0]).collect::<Vec<_>>());
            assert!((m - PI * PI / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn counts_parse() {
        assert_eq!("24,24,48,24".parse::<QuadCounts>().unwrap(), QuadCounts::default());
        assert!("1,2".parse::<QuadCounts>().is_err());
        assert!("0,2,3,4".parse::<QuadCounts>().is_err());
    }

    #[test]
    fn pairwise_is_order_fixed() {
        let v: Vec<Octonion<f64>> = (0..1000).map(|k| Octonion::real(1.0 / (k as f64 + 1.0))).collect();
        assert_eq!(pairwise_sum(&v), pairwise_sum(&v.clone()));
        assert!((pairwise_sum(&v).re() - v.iter().map(|o| o.re()).sum::<f64>()).abs() < 1e-12);
    }
}
