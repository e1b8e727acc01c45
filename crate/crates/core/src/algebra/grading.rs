use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Truncation level `N` together with an exact regularity `γ ∈ (0,1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "GradingRepr", into = "GradingRepr")]
pub struct Grading {
    max_norm: usize,
    gamma: Rational64,
}

impl Grading {
    pub fn new(max_norm: usize, gamma: Rational64) -> Result<Self> {
        if max_norm < 1 {
            return invalid("max_norm must be at least 1");
        }
        if gamma <= Rational64::from_integer(0) || gamma >= Rational64::from_integer(1) {
            return invalid(format!("gamma {gamma} not in (0,1)"));
        }
        Ok(Self { max_norm, gamma })
    }

    /// `N = N_γ = ⌊1/γ⌋`, the usual choice for a rough path of regularity γ.
    pub fn for_gamma(gamma: Rational64) -> Result<Self> {
        if gamma <= Rational64::from_integer(0) {
            return invalid(format!("gamma {gamma} not in (0,1)"));
        }
        let n = (gamma.recip().floor().to_integer()).max(1) as usize;
        Self::new(n, gamma)
    }

    pub fn max_norm(&self) -> usize {
        self.max_norm
    }

    pub fn gamma(&self) -> Rational64 {
        self.gamma
    }

    /// `N_γ = ⌊1/γ⌋`, always recomputed from γ.
    pub fn n_gamma(&self) -> usize {
        let r = self.gamma.recip();
        r.numer().div_floor(r.denom()) as usize
    }

    pub fn gamma_f64(&self) -> f64 {
        *self.gamma.numer() as f64 / *self.gamma.denom() as f64
    }

    pub fn with_max_norm(&self, max_norm: usize) -> Result<Self> {
        Self::new(max_norm, self.gamma)
    }
}

/// Parse `"p/q"` (or an integer-free decimal like `"0.5"`) into an exact rational.
pub fn parse_rational64(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("cannot parse rational {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational64::new(p, q));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let ip: i64 = if ip.is_empty() || ip == "-" { 0 } else { ip.parse().map_err(|_| bad())? };
        if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) || fp.len() > 15 {
            return Err(bad());
        }
        let den = 10i64.pow(fp.len() as u32);
        let f: i64 = fp.parse().map_err(|_| bad())?;
        let mag = ip.abs() * den + f;
        return Ok(Rational64::new(if neg { -mag } else { mag }, den));
    }
    let p: i64 = s.parse().map_err(|_| bad())?;
    Ok(Rational64::from_integer(p))
}

pub fn format_rational64(r: Rational64) -> String {
    if *r.denom() == 1 {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Serialize, Deserialize)]
struct GradingRepr {
    max_norm: usize,
    gamma: String,
}

impl TryFrom<GradingRepr> for Grading {
    type Error = Error;
    fn try_from(r: GradingRepr) -> Result<Self> {
        Grading::new(r.max_norm, parse_rational64(&r.gamma)?)
    }
}

impl From<Grading> for GradingRepr {
    fn from(g: Grading) -> Self {
        GradingRepr { max_norm: g.max_norm, gamma: format_rational64(g.gamma) }
    }
}
