//! Exact dyadic rationals `n / 2^k`.
//!
//! Every probability produced by program enumeration is a finite sum of
//! terms `2^-|p|`, so numerator and exponent are all we need. Values are
//! kept normalized: the numerator is odd, or zero with exponent zero.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: BigUint,
    exponent: u32,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            numerator: BigUint::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            numerator: BigUint::one(),
            exponent: 0,
        }
    }

    /// `2^-k`.
    pub fn pow2_neg(k: u32) -> Self {
        Dyadic {
            numerator: BigUint::one(),
            exponent: k,
        }
    }

    pub fn new(numerator: impl Into<BigUint>, exponent: u32) -> Self {
        let mut d = Dyadic {
            numerator: numerator.into(),
            exponent,
        };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self.numerator.trailing_zeros().unwrap_or(0);
        let shift = tz.min(self.exponent as u64) as u32;
        if shift > 0 {
            self.numerator >>= shift;
            self.exponent -= shift;
        }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    /// `k` in the reduced form `n / 2^k`.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Numerator over the denominator `2^k` for a caller-chosen `k` no
    /// smaller than the reduced exponent.
    pub fn numerator_at(&self, k: u32) -> BigUint {
        assert!(k >= self.exponent);
        &self.numerator << (k - self.exponent)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        // Scale so the numerator keeps a manageable number of significant bits.
        let bits = self.numerator.bits();
        let drop = bits.saturating_sub(60);
        let top = (&self.numerator >> drop).to_f64().unwrap_or(f64::INFINITY);
        top * 2f64.powi(drop as i32 - self.exponent as i32)
    }

    /// `log2` of the value; `-inf` for zero.
    pub fn log2(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.numerator.bits();
        let drop = bits.saturating_sub(60);
        let top = (&self.numerator >> drop).to_f64().unwrap_or(f64::INFINITY);
        top.log2() + drop as f64 - self.exponent as f64
    }

    /// Text form `n/2^k`, as printed by the command-line tool.
    pub fn to_fraction_string(&self) -> String {
        format!("{}/2^{}", self.numerator, self.exponent)
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let k = self.exponent.max(other.exponent);
        self.numerator_at(k).cmp(&other.numerator_at(k))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add<&Dyadic> for &Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: &Dyadic) -> Dyadic {
        let k = self.exponent.max(rhs.exponent);
        Dyadic::new(self.numerator_at(k) + rhs.numerator_at(k), k)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        *self = &*self + rhs;
    }
}

impl std::iter::Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Self {
        iter.fold(Dyadic::zero(), |acc, x| &acc + &x)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_fraction_string())
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({self})")
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
