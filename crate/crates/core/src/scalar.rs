//! Probability scalars.
//!
//! Every probabilistic computation in the crate is generic over [`Probability`].
//! Screening-off conditions are equalities, so the exact [`crate::Rational`]
//! instance is what the checkers and the hunter use; the float instances exist
//! for quick exploratory runs where exactness is not needed.

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Zero};

pub trait Probability:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + Send
    + Sync
    + 'static
{
    fn from_ratio(numerator: u64, denominator: u64) -> Self;

    fn mul_ref(&self, other: &Self) -> Self;

    /// Parses `p/q`, an integer, or (for float scalars) a decimal.
    fn parse(text: &str) -> Option<Self>;

    /// Whether a total mass counts as a normalized measure.
    fn is_unit_total(&self) -> bool {
        self.is_one()
    }

    /// Unnormalized weights used by the sweep engines. Screening conditions
    /// are homogeneous of degree two, so any positive common scale works.
    type Mass: Mass;

    fn masses(weights: &[Self]) -> Vec<Self::Mass>;
}

/// Additive and multiplicative arithmetic on history weights.
pub trait Mass: Clone + Debug + PartialEq + Send + Sync + 'static {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
}

/// Non-negative integer that stays in `u128` until it overflows.
#[derive(Clone, Debug)]
pub enum IntMass {
    Small(u128),
    Big(BigInt),
}

impl IntMass {
    fn from_big(value: BigInt) -> Self {
        match u128::try_from(&value) {
            Ok(v) => IntMass::Small(v),
            Err(_) => IntMass::Big(value),
        }
    }

    fn to_big(&self) -> BigInt {
        match self {
            IntMass::Small(v) => BigInt::from(*v),
            IntMass::Big(v) => v.clone(),
        }
    }
}

impl PartialEq for IntMass {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (IntMass::Small(a), IntMass::Small(b)) => a == b,
            // Big values never fit in u128
            (IntMass::Big(a), IntMass::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Mass for IntMass {
    fn zero() -> Self {
        IntMass::Small(0)
    }

    fn is_zero(&self) -> bool {
        matches!(self, IntMass::Small(0))
    }

    fn add(&self, other: &Self) -> Self {
        if let (IntMass::Small(a), IntMass::Small(b)) = (self, other) {
            if let Some(v) = a.checked_add(*b) {
                return IntMass::Small(v);
            }
        }
        IntMass::from_big(self.to_big() + other.to_big())
    }

    fn mul(&self, other: &Self) -> Self {
        if let (IntMass::Small(a), IntMass::Small(b)) = (self, other) {
            if let Some(v) = a.checked_mul(*b) {
                return IntMass::Small(v);
            }
        }
        IntMass::from_big(self.to_big() * other.to_big())
    }
}

impl Mass for f64 {
    fn zero() -> Self {
        0.0
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

impl Mass for f32 {
    fn zero() -> Self {
        0.0
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

impl Probability for BigRational {
    fn from_ratio(numerator: u64, denominator: u64) -> Self {
        BigRational::new(BigInt::from(numerator), BigInt::from(denominator))
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        if let Ok(r) = BigRational::from_str(text) {
            return Some(r);
        }
        // allow terminating decimals such as "0.25"
        let (int, frac) = text.split_once('.')?;
        let negative = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches('-'), frac);
        let numerator = BigInt::from_str(&digits).ok()?;
        let denominator = num_traits::pow(BigInt::from(10u32), frac.len());
        let value = BigRational::new(numerator, denominator);
        Some(if negative { -value } else { value })
    }

    type Mass = IntMass;

    /// Weights scaled by the least common denominator.
    fn masses(weights: &[Self]) -> Vec<IntMass> {
        let lcd = weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        weights
            .iter()
            .map(|w| IntMass::from_big(w.numer() * (&lcd / w.denom())))
            .collect()
    }
}

const FLOAT_TOTAL_TOLERANCE: f64 = 1e-9;

impl Probability for f64 {
    fn from_ratio(numerator: u64, denominator: u64) -> Self {
        numerator as f64 / denominator as f64
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        match text.split_once('/') {
            Some((p, q)) => Some(p.trim().parse::<f64>().ok()? / q.trim().parse::<f64>().ok()?),
            None => text.parse().ok(),
        }
    }

    fn is_unit_total(&self) -> bool {
        (self - 1.0).abs() <= FLOAT_TOTAL_TOLERANCE
    }

    type Mass = f64;

    fn masses(weights: &[Self]) -> Vec<f64> {
        weights.to_vec()
    }
}

impl Probability for f32 {
    fn from_ratio(numerator: u64, denominator: u64) -> Self {
        (numerator as f64 / denominator as f64) as f32
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn parse(text: &str) -> Option<Self> {
        <f64 as Probability>::parse(text).map(|v| v as f32)
    }

    fn is_unit_total(&self) -> bool {
        (f64::from(*self) - 1.0).abs() <= 1e-5
    }

    type Mass = f32;

    fn masses(weights: &[Self]) -> Vec<f32> {
        weights.to_vec()
    }
}
