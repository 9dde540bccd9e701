//! Value groups and the extended value type with a bottom element.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub type Rat = BigRational;

/// Build a rational from a numerator and a nonzero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// A totally ordered abelian group that is divisible by positive integers.
pub trait ValueGroup: Clone + Ord + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul_int(&self, k: i64) -> Self;
    /// Division by a positive integer. Panics on zero.
    fn div_int(&self, k: u64) -> Self;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
    fn abs(&self) -> Self {
        if *self < Self::zero() {
            self.neg()
        } else {
            self.clone()
        }
    }
}

impl ValueGroup for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul_int(&self, k: i64) -> Self {
        self * rat_int(k)
    }
    fn div_int(&self, k: u64) -> Self {
        assert!(k > 0, "division by zero in value group");
        self / Rat::from_integer(BigInt::from(k))
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
}

/// ℚ × ℚ with the lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LexPair {
    pub major: Rat,
    pub minor: Rat,
}

impl LexPair {
    pub fn new(major: Rat, minor: Rat) -> Self {
        LexPair { major, minor }
    }
}

impl fmt::Display for LexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.major, self.minor)
    }
}

impl ValueGroup for LexPair {
    fn zero() -> Self {
        LexPair::new(Zero::zero(), Zero::zero())
    }
    fn add(&self, other: &Self) -> Self {
        LexPair::new(&self.major + &other.major, &self.minor + &other.minor)
    }
    fn neg(&self) -> Self {
        LexPair::new(-&self.major, -&self.minor)
    }
    fn mul_int(&self, k: i64) -> Self {
        LexPair::new(self.major.mul_int(k), self.minor.mul_int(k))
    }
    fn div_int(&self, k: u64) -> Self {
        LexPair::new(self.major.div_int(k), self.minor.div_int(k))
    }
}

/// An element of Λ ∪ {−∞}. `Bottom` sorts below every finite value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LambdaVal<G = Rat> {
    Bottom,
    Finite(G),
}

impl<G: ValueGroup> LambdaVal<G> {
    pub fn zero() -> Self {
        LambdaVal::Finite(G::zero())
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, LambdaVal::Bottom)
    }

    pub fn finite(&self) -> Option<&G> {
        match self {
            LambdaVal::Finite(g) => Some(g),
            LambdaVal::Bottom => None,
        }
    }

    /// Addition absorbing into bottom.
    pub fn plus(&self, other: &Self) -> Self {
        match (self, other) {
            (LambdaVal::Finite(a), LambdaVal::Finite(b)) => LambdaVal::Finite(a.add(b)),
            _ => LambdaVal::Bottom,
        }
    }

    pub fn plus_g(&self, g: &G) -> Self {
        match self {
            LambdaVal::Finite(a) => LambdaVal::Finite(a.add(g)),
            LambdaVal::Bottom => LambdaVal::Bottom,
        }
    }

    pub fn max_of(a: Self, b: Self) -> Self {
        std::cmp::max(a, b)
    }
}

impl<G: ValueGroup> fmt::Display for LambdaVal<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaVal::Finite(g) => write!(f, "{g}"),
            LambdaVal::Bottom => write!(f, "-inf"),
        }
    }
}

impl<G: ValueGroup> From<G> for LambdaVal<G> {
    fn from(g: G) -> Self {
        LambdaVal::Finite(g)
    }
}
