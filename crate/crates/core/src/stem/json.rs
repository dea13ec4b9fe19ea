//! JSON form of polynomial stems:
//! `{"name": str, "components": [{"monomials": [{"exp": [a,b,c,d], "coef": [8 reals]}]} ×4]}`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::PolyStem;
use crate::error::{Error, Result};
use crate::octonion::Octonion;
use crate::poly::OctPoly;
use crate::scalar::Real;

#[derive(Serialize, Deserialize)]
struct MonomialJson {
    exp: [u32; 4],
    coef: [f64; 8],
}

#[derive(Serialize)]
struct ComponentJson {
    monomials: Vec<MonomialJson>,
}

#[derive(Serialize)]
struct StemJson {
    name: String,
    components: Vec<ComponentJson>,
}

fn parse_error(location: impl Into<String>, message: impl ToString) -> Error {
    Error::StemParse { location: location.into(), message: message.to_string() }
}

pub fn parse_stem_json<T: Real>(text: &str) -> Result<PolyStem<T>> {
    let root: Value = serde_json::from_str(text).map_err(|e| parse_error("document", e))?;
    let name = root
        .get("name")
        .and_then(Value::as_str)
        .ok_or_else(|| parse_error("name", "missing or not a string"))?;
    let comps = root
        .get("components")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_error("components", "missing or not an array"))?;
    if comps.len() != 4 {
        return Err(parse_error("components", format!("expected 4 components, found {}", comps.len())));
    }
    let mut out: [OctPoly<T>; 4] = Default::default();
    for (j, comp) in comps.iter().enumerate() {
        let monomials = comp
            .get("monomials")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_error(format!("components[{j}]"), "missing `monomials` array"))?;
        for (m, mono) in monomials.iter().enumerate() {
            let loc = format!("components[{j}].monomials[{m}]");
            let parsed: MonomialJson = serde_json::from_value(mono.clone()).map_err(|e| parse_error(&loc, e))?;
            if parsed.coef.iter().any(|c| !c.is_finite()) {
                return Err(parse_error(loc, "non-finite coefficient"));
            }
            out[j].add_term(parsed.exp, Octonion::from_f64(parsed.coef));
        }
    }
    Ok(PolyStem::new(name, out))
}

pub fn stem_to_json<T: Real>(stem: &PolyStem<T>) -> String {
    use super::StemFunction;
    let doc = StemJson {
        name: stem.name().to_string(),
        components: stem
            .components()
            .iter()
            .map(|c| ComponentJson {
                monomials: c.terms().map(|(e, v)| MonomialJson { exp: *e, coef: v.to_f64() }).collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("stem serialization cannot fail")
}
