//! Scalar abstraction shared by every geometric and topological routine.
//!
//! All algorithms in this crate are written against [`Scalar`]. The exact
//! instantiation ([`crate::Rational`]) turns every incidence test into a
//! decision procedure; the floating-point instantiations exist for quick
//! previews and rendering and treat values below a small threshold as zero.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

pub trait Scalar: Clone + Debug + Display + PartialOrd + Num + Signed + Send + Sync + 'static {
    /// True when arithmetic never rounds.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    /// `num / den`; `den` must be non-zero.
    fn ratio(num: i64, den: i64) -> Self;

    fn floor(&self) -> Self;

    fn ceil(&self) -> Self;

    /// The value as an `i64`, if it is an integer that fits.
    fn as_i64(&self) -> Option<i64>;

    fn as_f64(&self) -> f64;

    /// A total order consistent with `PartialOrd` wherever the latter is defined.
    fn total_cmp(&self, other: &Self) -> Ordering;

    /// Zero test used by every incidence predicate. Exact types compare with
    /// zero; floating types allow a small absolute slack.
    fn is_negligible(&self) -> bool;

    /// Parses an integer literal or a `p/q` literal.
    fn parse_literal(text: &str) -> Option<Self>;

    /// Inverse of [`Scalar::parse_literal`] for exact types.
    fn to_literal(&self) -> String;

    fn half() -> Self {
        Self::ratio(1, 2)
    }

    fn is_integer(&self) -> bool {
        (self.clone() - self.floor()).is_negligible()
    }

    /// Fractional part in `[0, 1)`.
    fn fract_part(&self) -> Self {
        self.clone() - self.floor()
    }

    fn min_of(a: Self, b: Self) -> Self {
        if a.total_cmp(&b) == Ordering::Greater {
            b
        } else {
            a
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if a.total_cmp(&b) == Ordering::Less {
            b
        } else {
            a
        }
    }

    fn approx_eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_negligible()
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn floor(&self) -> Self {
        BigRational::floor(self)
    }

    fn ceil(&self) -> Self {
        BigRational::ceil(self)
    }

    fn as_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn parse_literal(text: &str) -> Option<Self> {
        let text = text.trim();
        let valid = !text.is_empty() && text.chars().all(|c| c.is_ascii_digit() || c == '/' || c == '-' || c == '+');
        if !valid {
            return None;
        }
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (BigInt::from_str(n).ok()?, BigInt::from_str(d).ok()?),
            None => (BigInt::from_str(text).ok()?, BigInt::one()),
        };
        if den.is_zero() {
            return None;
        }
        Some(BigRational::new(num, den))
    }

    fn to_literal(&self) -> String {
        self.to_string()
    }

    fn is_integer(&self) -> bool {
        BigRational::is_integer(self)
    }
}

macro_rules! float_scalar {
    ($t:ty, $eps:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_i64(n: i64) -> Self {
                n as $t
            }

            fn ratio(num: i64, den: i64) -> Self {
                num as $t / den as $t
            }

            fn floor(&self) -> Self {
                <$t>::floor(*self)
            }

            fn ceil(&self) -> Self {
                <$t>::ceil(*self)
            }

            fn as_i64(&self) -> Option<i64> {
                let r = self.round();
                if (self - r).abs() <= $eps && r.abs() < 9.0e15 {
                    Some(r as i64)
                } else {
                    None
                }
            }

            fn as_f64(&self) -> f64 {
                *self as f64
            }

            fn total_cmp(&self, other: &Self) -> Ordering {
                <$t>::total_cmp(self, other)
            }

            fn is_negligible(&self) -> bool {
                self.abs() <= $eps
            }

            fn parse_literal(text: &str) -> Option<Self> {
                let exact = BigRational::parse_literal(text)?;
                Some(exact.as_f64() as $t)
            }

            fn to_literal(&self) -> String {
                self.to_string()
            }
        }
    };
}

float_scalar!(f64, 1e-9);
float_scalar!(f32, 1e-5);
