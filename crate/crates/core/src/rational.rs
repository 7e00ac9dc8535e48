//! Exact cost arithmetic.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{ToPrimitive, Zero};

pub type Rational = num_rational::Ratio<i128>;

/// Converts to `f64`; exact for small numerators and denominators.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Largest multiple of `1/den` not exceeding `x`.
pub fn floor_to_grid(x: f64, den: i128) -> Rational {
    Rational::new((x * den as f64).floor() as i128, den)
}

/// Smallest multiple of `1/den` not below `x`.
pub fn ceil_to_grid(x: f64, den: i128) -> Rational {
    Rational::new((x * den as f64).ceil() as i128, den)
}

/// A set-on-machine cost: finite and positive, or forbidden.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cost {
    Finite(Rational),
    Infinite,
}

impl Cost {
    pub fn finite(self) -> Option<Rational> {
        match self {
            Cost::Finite(c) => Some(c),
            Cost::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Cost::Infinite)
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Cost::Finite(c) => to_f64(&c),
            Cost::Infinite => f64::INFINITY,
        }
    }
}

impl From<Rational> for Cost {
    fn from(r: Rational) -> Self {
        Cost::Finite(r)
    }
}

impl From<i128> for Cost {
    fn from(v: i128) -> Self {
        Cost::Finite(Rational::from_integer(v))
    }
}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cost {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Cost::Finite(a), Cost::Finite(b)) => a.cmp(b),
            (Cost::Finite(_), Cost::Infinite) => Ordering::Less,
            (Cost::Infinite, Cost::Finite(_)) => Ordering::Greater,
            (Cost::Infinite, Cost::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(c) => write!(f, "{c}"),
            Cost::Infinite => f.write_str("inf"),
        }
    }
}

/// Coverage per unit of makespan, compared exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DensityValue {
    pub covered: u64,
    pub makespan: Rational,
}

impl DensityValue {
    pub fn new(covered: u64, makespan: Rational) -> Self {
        debug_assert!(makespan > Rational::zero());
        DensityValue { covered, makespan }
    }

    pub fn value(&self) -> Rational {
        Rational::from_integer(self.covered as i128) / self.makespan
    }

    pub fn to_f64(&self) -> f64 {
        self.covered as f64 / to_f64(&self.makespan)
    }
}

impl PartialOrd for DensityValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DensityValue {
    // a/b vs c/d with b, d > 0: compare a*d against c*b.
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.makespan.denom() * other.makespan.numer() * self.covered as i128;
        let rhs = other.makespan.denom() * self.makespan.numer() * other.covered as i128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for DensityValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.covered, self.makespan)
    }
}
