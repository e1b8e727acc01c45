use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{format_rational, Coeff};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Univariate polynomial with exact rational coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    c: Vec<Coeff>,
}

impl Poly {
    pub fn zero() -> Self {
        Self { c: Vec::new() }
    }

    pub fn constant(a: Coeff) -> Self {
        Self::from_coeffs(vec![a])
    }

    /// The identity `y ↦ y`.
    pub fn x() -> Self {
        Self::from_coeffs(vec![Coeff::zero(), Coeff::one()])
    }

    pub fn from_coeffs(mut c: Vec<Coeff>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Self { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
    }

    pub fn coeffs(&self) -> &[Coeff] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Poly {
        Self::from_coeffs(
            self.c.iter().enumerate().skip(1).map(|(j, a)| a * BigRational::from_integer(BigInt::from(j))).collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> Poly {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Self::from_coeffs(
            (0..n)
                .map(|j| {
                    let a = self.c.get(j).cloned().unwrap_or_else(Coeff::zero);
                    a + o.c.get(j).cloned().unwrap_or_else(Coeff::zero)
                })
                .collect(),
        )
    }

    pub fn scale(&self, a: &Coeff) -> Poly {
        Self::from_coeffs(self.c.iter().map(|x| x * a).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Coeff::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::from_coeffs(c)
    }

    pub fn pow(&self, n: u32) -> Poly {
        (0..n).fold(Poly::constant(Coeff::one()), |p, _| p.mul(self))
    }

    pub fn eval_exact(&self, y: &Coeff) -> Coeff {
        self.c.iter().rev().fold(Coeff::zero(), |acc, a| acc * y + a)
    }

    /// Horner evaluation with coefficients rounded to `T`.
    pub fn eval<T: Scalar>(&self, y: T) -> T {
        self.c.iter().rev().fold(T::zero(), |acc, a| acc * y + T::of(a.to_f64().unwrap_or(f64::NAN)))
    }

    /// Coefficients rounded to binary64.
    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.c.iter().map(|a| a.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

/// Parse `"3"`, `"-1/2"`, `"0.125"` exactly; other float syntax (exponents)
/// goes through binary64 and is then exact in that value.
pub fn parse_exact(s: &str) -> Result<Coeff> {
    let t = s.trim();
    let bad = || Error::InvalidInput(format!("cannot parse coefficient {s:?}"));
    if t.contains('/') {
        return crate::algebra::parse_rational(t).map_err(|_| bad());
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let simple = !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit() || b == b'.') && body.matches('.').count() <= 1;
    let v = if simple {
        let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
        let digits = format!("{ip}{fp}");
        if digits.is_empty() {
            return Err(bad());
        }
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        BigRational::new(n, num_traits::pow(BigInt::from(10), fp.len()))
    } else {
        let x: f64 = body.parse().map_err(|_| bad())?;
        BigRational::from_float(x).ok_or_else(bad)?
    };
    Ok(if neg { -v } else { v })
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let sign = if a.is_negative() { "-" } else if first { "" } else { "+" };
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{sign}{}", format_rational(&a.abs()))?;
            match j {
                0 => {}
                1 => write!(f, "·y")?,
                _ => write!(f, "·y^{j}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;

    #[test]
    fn calculus() {
        let p = Poly::from_i64(&[1, 0, 3]);
        assert_eq!(p.derivative(), Poly::from_i64(&[0, 6]));
        assert_eq!(p.nth_derivative(3), Poly::zero());
        assert_eq!(p.mul(&Poly::x()), Poly::from_i64(&[0, 1, 0, 3]));
        assert_eq!(p.eval_exact(&ratio(2, 1)), ratio(13, 1));
        assert_eq!(p.eval(2.0f64), 13.0);
        assert_eq!(Poly::x().pow(3).degree(), Some(3));
    }

    #[test]
    fn exact_parsing() {
        assert_eq!(parse_exact("0.125").unwrap(), ratio(1, 8));
        assert_eq!(parse_exact("-3/6").unwrap(), ratio(-1, 2));
        assert_eq!(parse_exact("7").unwrap(), ratio(7, 1));
        assert_eq!(parse_exact("1e-1").unwrap(), BigRational::from_float(0.1).unwrap());
        assert!(parse_exact("abc").is_err());
        assert!(parse_exact(".").is_err());
    }
}
