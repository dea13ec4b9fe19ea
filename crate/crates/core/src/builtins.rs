//! Registry of named stems.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::R4Point;
use crate::octonion::Octonion;
use crate::poly::{radial_sq, OctPoly, RealPoly};
use crate::scalar::Real;
use crate::stem::{PolyStem, StemFunction, StemJacobian, StemValue};

/// Names accepted by [`builtin_stem`]; `constant` takes `:<8 coords>`.
pub const BUILTIN_NAMES: [&str; 6] = ["example44", "quintic", "identity", "constant:<c0,..,c7>", "remark62", "kernelV"];

/// Stems that are singular at the origin and only make sense on shells.
pub fn is_shell_only(name: &str) -> bool {
    name == "kernelV"
}

fn real_stem<T: Real>(name: &str, comps: [RealPoly<T>; 4]) -> PolyStem<T> {
    PolyStem::new(name, comps.map(|p| p.map_coefficients(Octonion::real)))
}

fn term<T: Real>(exp: [u32; 4], c: f64) -> RealPoly<T> {
    RealPoly::monomial(exp, T::lit(c))
}

/// `F₀ = 3x₀`, `Fᵢ = xᵢ`.
pub fn example44_stem<T: Real>() -> PolyStem<T> {
    real_stem("example44", [term([1, 0, 0, 0], 3.0), RealPoly::var(1), RealPoly::var(2), RealPoly::var(3)])
}

/// `F₀ = S(x₀, r)`, `Fᵢ = xᵢ h(x₀, r)` with
/// `S = ⅗x⁵ − 2x³y² + ⅗xy⁴`, `h = x⁴ − (6/5)x²y² + (3/35)y⁴`.
pub fn quintic_stem<T: Real>() -> PolyStem<T> {
    let r2 = radial_sq::<T>();
    let r4 = r2.mul(&r2);
    let s = &(&term([5, 0, 0, 0], 0.6) - &term([3, 0, 0, 0], 2.0).mul(&r2)) + &term([1, 0, 0, 0], 0.6).mul(&r4);
    let h = &(&term([4, 0, 0, 0], 1.0) - &term([2, 0, 0, 0], 1.2).mul(&r2)) + &r4.scale(T::lit(3.0 / 35.0));
    real_stem("quintic", [s, RealPoly::var(1).mul(&h), RealPoly::var(2).mul(&h), RealPoly::var(3).mul(&h)])
}

/// `F(x) = x`, so `f(q) = q`.
pub fn identity_stem<T: Real>() -> PolyStem<T> {
    real_stem("identity", std::array::from_fn(RealPoly::var))
}

/// `F = (c, 0, 0, 0)`.
pub fn constant_stem<T: Real>(c: Octonion<T>) -> PolyStem<T> {
    let mut comps: [OctPoly<T>; 4] = Default::default();
    comps[0] = OctPoly::constant(c);
    PolyStem::new("constant", comps)
}

/// `F₀ = −6x₀² + (x₁+x₂+x₃)² + x₁² + x₂² + x₃²`,
/// `Fᵢ = −2x₀(x₁+x₂+x₃) − 2x₀xᵢ`.
pub fn remark62_stem<T: Real>() -> PolyStem<T> {
    let s = &(&RealPoly::var(1) + &RealPoly::var(2)) + &RealPoly::var(3);
    let f0 = &(&s.mul(&s) + &radial_sq()) - &term([2, 0, 0, 0], 6.0);
    let x0s = term([1, 0, 0, 0], -2.0).mul(&s);
    let fi = |i: usize| &x0s - &term([1, 0, 0, 0], 2.0).mul(&RealPoly::var(i));
    real_stem("remark62", [f0, fi(1), fi(2), fi(3)])
}

/// Stem of `q ↦ V(q)c`: `F₀ = x₀c/(2π²|x|⁴)`, `Fᵢ = −xᵢc/(2π²|x|⁴)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelStem<T> {
    coef: Octonion<T>,
}

impl<T: Real> KernelStem<T> {
    pub fn new(coef: Octonion<T>) -> Self {
        Self { coef }
    }

    fn phi(x: &R4Point<T>) -> (T, T) {
        let s = x.x.iter().fold(T::zero(), |a, &v| a + v * v);
        (s, T::one() / (T::lit(2.0 * PI * PI) * s * s))
    }
}

const KERNEL_SIGN: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

impl<T: Real> StemFunction<T> for KernelStem<T> {
    fn name(&self) -> &str {
        "kernelV"
    }

    fn eval(&self, x: &R4Point<T>) -> StemValue<T> {
        let (_, phi) = Self::phi(x);
        std::array::from_fn(|j| self.coef.scale(T::lit(KERNEL_SIGN[j]) * x.x[j] * phi))
    }

    fn analytic_jacobian(&self, x: &R4Point<T>) -> Option<StemJacobian<T>> {
        let (s, phi) = Self::phi(x);
        let four = T::lit(4.0);
        Some(std::array::from_fn(|j| {
            std::array::from_fn(|k| {
                let delta = if j == k { phi } else { T::zero() };
                let d = delta - four * x.x[j] * x.x[k] * phi / s;
                self.coef.scale(T::lit(KERNEL_SIGN[j]) * d)
            })
        }))
    }

    fn has_analytic_derivatives(&self) -> bool {
        true
    }
}

/// Up to eight comma-separated coordinates; missing ones are zero.
pub fn parse_constant<T: Real>(spec: &str) -> Result<Octonion<T>> {
    let vals: Vec<f64> = spec
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidConfig(format!("constant stem coordinates: {e}")))?;
    if vals.len() > 8 || vals.is_empty() {
        return Err(Error::InvalidConfig(format!("constant stem takes 1 to 8 coordinates, got {}", vals.len())));
    }
    let mut c = [0.0; 8];
    c[..vals.len()].copy_from_slice(&vals);
    Ok(Octonion::from_f64(c))
}

/// Looks up a registered stem by name.
pub fn builtin_stem<T: Real>(name: &str) -> Result<Arc<dyn StemFunction<T>>> {
    Ok(match name {
        "example44" => Arc::new(example44_stem()),
        "quintic" => Arc::new(quintic_stem()),
        "identity" => Arc::new(identity_stem()),
        "remark62" => Arc::new(remark62_stem()),
        "kernelV" => Arc::new(KernelStem::new(Octonion::one())),
        _ => match name.strip_prefix("constant:") {
            Some(spec) => Arc::new(constant_stem(parse_constant(spec)?)),
            None => {
                return Err(Error::UnknownStem { name: name.to_string(), available: BUILTIN_NAMES.join(", ") })
            }
        },
    })
}
