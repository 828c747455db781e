use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed};

/// Exact field of coefficients.
///
/// Every decision procedure in the crate relies on exact zero tests, so only
/// exact fields implement this trait.
pub trait Scalar:
    Clone + Eq + Ord + Hash + Debug + Display + FromStr + Num + Signed + Send + Sync + 'static
{
    fn from_i64(n: i64) -> Self;

    fn ratio(numer: i64, denom: i64) -> Self {
        Self::from_i64(numer) / Self::from_i64(denom)
    }

    fn is_integer(&self) -> bool;

    /// max(|numerator|, denominator) as a float, used only for ordering candidates.
    fn height(&self) -> f64;
}

impl Scalar for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn is_integer(&self) -> bool {
        Ratio::is_integer(self)
    }

    fn height(&self) -> f64 {
        let n = self.numer().abs();
        let d = self.denom().clone();
        let m = if n > d { n } else { d };
        m.to_string().parse().unwrap_or(f64::MAX)
    }
}

macro_rules! small_ratio_scalar {
    ($t:ty) => {
        impl Scalar for Ratio<$t> {
            fn from_i64(n: i64) -> Self {
                Ratio::from_integer(n as $t)
            }

            fn is_integer(&self) -> bool {
                Ratio::is_integer(self)
            }

            fn height(&self) -> f64 {
                let n = self.numer().abs() as f64;
                let d = *self.denom() as f64;
                n.max(d)
            }
        }
    };
}

small_ratio_scalar!(i64);
small_ratio_scalar!(i128);

/// Parse a scalar from "p/q" or "p".
pub fn parse_scalar<F: Scalar>(s: &str) -> Option<F> {
    F::from_str(s.trim()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    #[test]
    fn normalization_of_negative_denominator() {
        let q = BigRational::new(BigInt::from(4), BigInt::from(-6));
        assert_eq!(q, BigRational::ratio(-2, 3));
        assert_eq!(q.to_string(), "-2/3");
    }

    #[test]
    fn parse_forms() {
        let a: BigRational = parse_scalar("3/2").unwrap();
        assert_eq!(a, BigRational::ratio(3, 2));
        let b: Ratio<i64> = parse_scalar("-7").unwrap();
        assert_eq!(b, Ratio::from_integer(-7));
        assert!(parse_scalar::<BigRational>("x").is_none());
    }

    #[test]
    fn small_ratio_behaves() {
        let h = Ratio::<i128>::ratio(1, 2);
        assert!(!Scalar::is_integer(&h));
        assert_eq!(h.clone() + h, Ratio::one());
        assert!(Ratio::<i64>::zero().is_zero());
    }
}
