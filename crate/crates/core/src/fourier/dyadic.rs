use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// An exact dyadic rational `num / 2^log2_den`, kept normalized so that `num`
/// is odd or the value is exactly zero (with `log2_den = 0`).
///
/// Fourier coefficients of truth-table-defined Boolean functions always have
/// power-of-two denominators, so this type makes every identity in the crate
/// checkable with no epsilon.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dyadic {
    num: i64,
    log2_den: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, log2_den: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, log2_den: 0 };

    pub fn new(num: i64, log2_den: u32) -> Self {
        Self::from_scaled(num as i128, log2_den)
    }

    /// Normalizes `num / 2^log2_den` given a possibly wide numerator.
    pub fn from_scaled(mut num: i128, mut log2_den: u32) -> Self {
        if num == 0 {
            return Self::ZERO;
        }
        while num % 2 == 0 && log2_den > 0 {
            num /= 2;
            log2_den -= 1;
        }
        Self {
            num: i64::try_from(num).expect("dyadic numerator overflow"),
            log2_den,
        }
    }

    pub fn from_int(v: i64) -> Self {
        Self { num: v, log2_den: 0 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn log2_den(&self) -> u32 {
        self.log2_den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }

    pub fn abs(&self) -> Self {
        Self {
            num: self.num.abs(),
            log2_den: self.log2_den,
        }
    }

    pub fn square(&self) -> Self {
        *self * *self
    }

    /// True iff the value is an integer multiple of 2^exp (exp may be
    /// negative). Relies on the normalized representation.
    pub fn is_multiple_of_pow2(&self, exp: i32) -> bool {
        self.num == 0 || -(self.log2_den as i32) >= exp
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / (self.log2_den as f64).exp2()
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        let e = self.log2_den.max(rhs.log2_den);
        let a = (self.num as i128) << (e - self.log2_den);
        let b = (rhs.num as i128) << (e - rhs.log2_den);
        Dyadic::from_scaled(a + b, e)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        self + (-rhs)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -self.num,
            log2_den: self.log2_den,
        }
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        Dyadic::from_scaled(
            self.num as i128 * rhs.num as i128,
            self.log2_den + rhs.log2_den,
        )
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.log2_den.max(other.log2_den);
        let a = (self.num as i128) << (e - self.log2_den);
        let b = (other.num as i128) << (e - other.log2_den);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.log2_den == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, 1u64 << self.log2_den)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({self})")
    }
}
