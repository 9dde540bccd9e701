//! Ordered field of truncated Puiseux series over ℚ and its value group.

mod lambda;
mod parse;
mod series;

pub use lambda::{rat, rat_int, LambdaVal, LexPair, Rat, ValueGroup};
pub use parse::{parse, print};
pub use series::{rational_sqrt, PuiseuxElem};

/// Shorthand for `t^e` with exponent `num/den`.
pub fn tpow(num: i64, den: i64) -> PuiseuxElem {
    PuiseuxElem::monomial(rat_int(1), rat(num, den))
}
