//! Exact rational scalars and sup-norm coefficient vectors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::Error;

/// Arbitrary-precision rational, always stored reduced.
pub type Ratio = BigRational;

/// Shorthand for an integer rational.
pub fn ratio(n: i64) -> Ratio {
    Ratio::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`.
pub fn frac(n: i64, d: i64) -> Ratio {
    Ratio::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `num/den` or a bare integer.
pub fn parse_ratio(s: &str) -> Result<Ratio, Error> {
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Ratio::new(n, d))
        }
        None => {
            let n: BigInt = s.trim().parse().map_err(|_| bad())?;
            Ok(Ratio::from_integer(n))
        }
    }
}

/// Renders as `num/den`, the form used by every machine-readable surface.
pub fn format_ratio(r: &Ratio) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// A value in the coefficient space: a finite-dimensional rational vector
/// measured in the sup norm.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vector(pub Vec<Ratio>);

impl Vector {
    pub fn zero(dim: usize) -> Self {
        Vector(vec![Ratio::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Sup norm: the largest coordinate in absolute value.
    pub fn sup_norm(&self) -> Ratio {
        self.0
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(Ratio::zero)
    }
}

impl std::ops::Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl std::ops::Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl std::ops::Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }
}

impl std::ops::Mul<&Ratio> for &Vector {
    type Output = Vector;
    fn mul(self, rhs: &Ratio) -> Vector {
        Vector(self.0.iter().map(|a| a * rhs).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/4", "-7/2", "5", "-12", "0/9"] {
            let r = parse_ratio(s).unwrap();
            let back = parse_ratio(&format_ratio(&r)).unwrap();
            assert_eq!(r, back);
        }
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("x").is_err());
    }

    #[test]
    fn sup_norm_takes_abs_max() {
        let v = Vector(vec![frac(-3, 2), ratio(1)]);
        assert_eq!(v.sup_norm(), frac(3, 2));
        assert!(Vector::zero(3).is_zero());
    }
}
