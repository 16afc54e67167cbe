//! Exact rational numbers used by the unit-interval and weighted carriers.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, One, Zero};

use crate::error::Error;

/// An exact rational in lowest terms with a positive denominator.
///
/// Arithmetic is checked; an overflow of the 128-bit representation panics
/// with a message naming the operation. Values produced by the samplers and
/// by problems at desk scale stay far below that limit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(Ratio<i128>);

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational(Ratio::new_raw(1, 1));

    /// Builds `numer / denom` reduced to lowest terms.
    ///
    /// # Panics
    ///
    /// Panics if `denom` is zero.
    pub fn new(numer: i128, denom: i128) -> Self {
        Rational(Ratio::new(numer, denom))
    }

    pub fn from_integer(n: i128) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.numer() < 0
    }

    pub fn in_unit_interval(&self) -> bool {
        !self.is_negative() && self.numer() <= self.denom()
    }

    pub fn add(&self, other: &Rational) -> Rational {
        // Integer fast path: weighted problems mostly carry whole numbers.
        if self.denom() == 1 && other.denom() == 1 {
            let n = self
                .numer()
                .checked_add(other.numer())
                .expect("rational overflow in addition");
            return Rational::from_integer(n);
        }
        Rational(
            self.0
                .checked_add(&other.0)
                .expect("rational overflow in addition"),
        )
    }

    pub fn mul(&self, other: &Rational) -> Rational {
        Rational(
            self.0
                .checked_mul(&other.0)
                .expect("rational overflow in multiplication"),
        )
    }

    pub fn max(self, other: Rational) -> Rational {
        std::cmp::max(self, other)
    }

    pub fn min(self, other: Rational) -> Rational {
        std::cmp::min(self, other)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p/q`, integers and finite decimals such as `0.75`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: i128 = p.trim().parse().map_err(|_| bad())?;
            let q: i128 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            return Ok(Rational::new(p, q));
        }
        if let Some((whole, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 30 {
                return Err(bad());
            }
            let negative = whole.starts_with('-');
            let whole: i128 = match whole.trim_start_matches(['-', '+']) {
                "" => 0,
                w => w.parse().map_err(|_| bad())?,
            };
            let scale = 10i128.pow(frac.len() as u32);
            let frac: i128 = frac.parse().map_err(|_| bad())?;
            let numer = whole
                .checked_mul(scale)
                .and_then(|w| w.checked_add(frac))
                .ok_or_else(bad)?;
            let numer = if negative { -numer } else { numer };
            return Ok(Rational::new(numer, scale));
        }
        let n: i128 = s.parse().map_err(|_| bad())?;
        Ok(Rational::from_integer(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!("3/6".parse::<Rational>().unwrap(), Rational::new(1, 2));
        assert_eq!("0.7".parse::<Rational>().unwrap(), Rational::new(7, 10));
        assert_eq!("5".parse::<Rational>().unwrap(), Rational::from_integer(5));
        assert_eq!("-.5".parse::<Rational>().unwrap(), Rational::new(-1, 2));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
        assert!("1.".parse::<Rational>().is_err());
    }

    #[test]
    fn display_is_lowest_terms() {
        assert_eq!(Rational::new(4, 8).to_string(), "1/2");
        assert_eq!(Rational::new(6, 3).to_string(), "2");
        assert_eq!(Rational::new(1, -2).to_string(), "-1/2");
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = Rational::new(7, 10);
        assert_eq!(a.mul(&a), Rational::new(49, 100));
        assert_eq!(a.add(&Rational::new(3, 10)), Rational::ONE);
    }
}
