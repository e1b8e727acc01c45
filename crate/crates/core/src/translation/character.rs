use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::algebra::{format_rational, parse_multi_index, parse_rational, ratio, z, Coeff, Forest, MultiIndex};
use crate::error::{invalid, Error, Result};

/// Translation character `ℓ_i`: exact values on populated multi-indices,
/// multiplicative on forests, `ℓ(∅) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    direction: usize,
    terms: BTreeMap<MultiIndex, Coeff>,
}

impl Character {
    pub fn new<I: IntoIterator<Item = (MultiIndex, Coeff)>>(direction: usize, terms: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (m, c) in terms {
            if !m.is_populated() {
                return invalid(format!("character key {m} is not populated"));
            }
            if !c.is_zero() {
                *map.entry(m).or_insert_with(Coeff::zero) += c;
            }
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Self { direction, terms: map })
    }

    /// `ℓ_i = δ_{z_(i,0)}`, under which nothing moves.
    pub fn identity(direction: usize) -> Self {
        Self::new(direction, [(z(direction as u32, 0), Coeff::one())]).expect("populated")
    }

    pub fn direction(&self) -> usize {
        self.direction
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Coeff> {
        &self.terms
    }

    pub fn value(&self, m: &MultiIndex) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn eval_forest(&self, f: &Forest) -> Coeff {
        let mut p = Coeff::one();
        for m in f.items() {
            p *= self.value(m);
            if p.is_zero() {
                break;
            }
        }
        p
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.direction)
    }

    /// Largest alphabet letter used by the support.
    pub fn max_letter(&self) -> usize {
        self.terms.keys().filter_map(|m| m.max_letter()).max().unwrap_or(0) as usize
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// `N_ℓ = max |key|_γ` over the support (0 when empty).
    pub fn support_bound(&self, gamma: Rational64) -> Rational64 {
        self.terms.keys().map(|m| m.gamma_degree(gamma)).max().unwrap_or_else(Rational64::zero)
    }

    pub fn to_json(&self) -> Value {
        let terms: Map<String, Value> =
            self.terms.iter().map(|(m, c)| (m.to_string(), Value::String(format_rational(c)))).collect();
        json!({"direction": self.direction, "terms": terms})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let direction = v
            .get("direction")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::InvalidInput("character needs integer \"direction\"".into()))? as usize;
        let terms = v
            .get("terms")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::InvalidInput("character needs object \"terms\"".into()))?;
        let mut out = Vec::with_capacity(terms.len());
        for (k, c) in terms {
            let c = match c {
                Value::String(s) => parse_rational(s)?,
                Value::Number(n) if n.is_i64() => ratio(n.as_i64().expect("i64"), 1),
                _ => return invalid(format!("value of {k} must be a \"p/q\" string")),
            };
            out.push((parse_multi_index(k)?, c));
        }
        Self::new(direction, out)
    }
}

/// Direction-0 Itô to Stratonovich character: `ℓ(z_(0,0)) = 1`,
/// `ℓ(z_(j,0) z_(j,1)) = 1/2` for `j = 1..=d`.
pub fn ito_strat_character(d: usize) -> Character {
    let mut terms = vec![(z(0, 0), Coeff::one())];
    for j in 1..=d as u32 {
        terms.push((z(j, 0).mul(&z(j, 1)), ratio(1, 2)));
    }
    Character::new(0, terms).expect("populated")
}

/// One character per direction `0..=d`; missing directions get the
/// identity.
pub fn complete_characters(chars: &[Character], d: usize) -> Result<Vec<Character>> {
    let mut out: Vec<Option<Character>> = vec![None; d + 1];
    for c in chars {
        if c.direction > d {
            return invalid(format!("character direction {} exceeds d = {d}", c.direction));
        }
        if c.max_letter() > d {
            return invalid(format!("character for direction {} uses letter {} > d = {d}", c.direction, c.max_letter()));
        }
        if out[c.direction].is_some() {
            return invalid(format!("two characters for direction {}", c.direction));
        }
        out[c.direction] = Some(c.clone());
    }
    Ok(out.into_iter().enumerate().map(|(i, c)| c.unwrap_or_else(|| Character::identity(i))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ito_strat_support() {
        let l = ito_strat_character(1);
        assert_eq!(l.terms().len(), 2);
        assert_eq!(l.value(&z(0, 0)), Coeff::one());
        assert_eq!(l.value(&z(1, 0).mul(&z(1, 1))), ratio(1, 2));
        assert_eq!(l.eval_forest(&Forest::empty()), Coeff::one());
        assert_eq!(Character::from_json(&l.to_json()).unwrap(), l);
        assert_eq!(l.support_bound(Rational64::new(1, 3)), Rational64::from_integer(3));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Character::new(0, [(z(1, 1), Coeff::one())]).is_err());
        let v: Value = serde_json::from_str(r#"{"direction":0,"terms":{"z(0,0)":"1","z(0,0)":"1/2"}}"#).unwrap();
        assert!(Character::from_json(&v).is_ok());
        assert!(complete_characters(&[Character::identity(0), Character::identity(0)], 1).is_err());
        assert_eq!(complete_characters(&[], 1).unwrap()[1], Character::identity(1));
    }
}
