//! Truncated Puiseux series with rational coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::lambda::{rat_int, LambdaVal, Rat};
use crate::error::{precision, Error, Result};

/// A finite sum `Σ c_e t^e` plus, when `floor` is set, an unknown tail whose
/// exponents are all `<= floor`.
///
/// Terms are kept with strictly descending exponents, nonzero coefficients,
/// and every exponent strictly above the floor. The variable `t` is larger
/// than every rational number.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PuiseuxElem {
    terms: Vec<(Rat, Rat)>,
    floor: Option<Rat>,
}

fn lcm_denominators<'a>(exps: impl Iterator<Item = &'a Rat>) -> BigInt {
    exps.fold(BigInt::one(), |acc, e| acc.lcm(e.denom()))
}

/// Largest point of `(1/den)·ℤ` strictly below `f`.
fn lattice_below(f: &Rat, den: &BigInt) -> Rat {
    let scaled = f * Rat::from_integer(den.clone());
    let m = scaled.ceil().to_integer() - BigInt::one();
    Rat::new(m, den.clone())
}

impl PuiseuxElem {
    pub fn zero() -> Self {
        PuiseuxElem { terms: Vec::new(), floor: None }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    /// The infinitely large element `t`.
    pub fn t() -> Self {
        Self::monomial(Rat::one(), Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(c, Rat::zero())
    }

    pub fn monomial(coeff: Rat, exp: Rat) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        PuiseuxElem { terms: vec![(exp, coeff)], floor: None }
    }

    /// Builds an element from arbitrary `(exponent, coefficient)` pairs.
    /// Repeated exponents are summed.
    pub fn from_terms(mut terms: Vec<(Rat, Rat)>, floor: Option<Rat>) -> Self {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Rat, Rat)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(e, c)| !c.is_zero() && floor.as_ref().is_none_or(|f| e > f));
        PuiseuxElem { terms: out, floor }
    }

    pub fn terms(&self) -> &[(Rat, Rat)] {
        &self.terms
    }

    pub fn floor(&self) -> Option<&Rat> {
        self.floor.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.floor.is_none()
    }

    /// True only for the exact zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.floor.is_none()
    }

    pub fn is_monomial(&self) -> bool {
        self.floor.is_none() && self.terms.len() == 1
    }

    /// Coefficient of `t^e` when it is known.
    pub fn coeff(&self, e: &Rat) -> Result<Rat> {
        if let Some(f) = &self.floor {
            if e <= f {
                return Err(precision(format!("coefficient of t^({e}) is below the floor {f}")));
            }
        }
        Ok(self
            .terms
            .iter()
            .find(|(x, _)| x == e)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero))
    }

    /// Coarsens the precision so that nothing at or below `f` is kept.
    pub fn truncate(&self, f: &Rat) -> Self {
        let floor = match &self.floor {
            Some(g) if g >= f => g.clone(),
            _ => f.clone(),
        };
        Self::from_terms(self.terms.clone(), Some(floor))
    }

    /// Leading (exponent, coefficient) if it is determined.
    pub fn lead(&self) -> Option<(&Rat, &Rat)> {
        self.terms.first().map(|(e, c)| (e, c))
    }

    /// An upper bound for the leading exponent, `None` for the exact zero.
    fn negval_bound(&self) -> Option<Rat> {
        match (self.terms.first(), &self.floor) {
            (Some((e, _)), _) => Some(e.clone()),
            (None, Some(f)) => Some(f.clone()),
            (None, None) => None,
        }
    }

    /// The order-preserving valuation `−v`: the leading exponent.
    pub fn negval(&self) -> Result<LambdaVal> {
        match (self.terms.first(), &self.floor) {
            (Some((e, _)), _) => Ok(LambdaVal::Finite(e.clone())),
            (None, None) => Ok(LambdaVal::Bottom),
            (None, Some(f)) => Err(precision(format!("valuation masked by O(t^({f}))"))),
        }
    }

    /// Sign of the element.
    pub fn signum(&self) -> Result<Ordering> {
        match (self.terms.first(), &self.floor) {
            (Some((_, c)), _) => Ok(c.cmp(&Rat::zero())),
            (None, None) => Ok(Ordering::Equal),
            (None, Some(f)) => Err(precision(format!("sign masked by O(t^({f}))"))),
        }
    }

    pub fn cmp_val(&self, other: &Self) -> Result<Ordering> {
        (self - other).signum()
    }

    /// Membership in the valuation ring `O = {negval <= 0}`.
    pub fn in_o(&self) -> Result<bool> {
        match (self.terms.first(), &self.floor) {
            (Some((e, _)), _) => Ok(*e <= Rat::zero()),
            (None, None) => Ok(true),
            (None, Some(f)) if *f <= Rat::zero() => Ok(true),
            (None, Some(f)) => Err(precision(format!("ring membership masked by O(t^({f}))"))),
        }
    }

    pub fn is_unit(&self) -> Result<bool> {
        match (self.terms.first(), &self.floor) {
            (Some((e, _)), _) => Ok(e.is_zero()),
            (None, None) => Ok(false),
            (None, Some(f)) if *f < Rat::zero() => Ok(false),
            (None, Some(f)) => Err(precision(format!("unit test masked by O(t^({f}))"))),
        }
    }

    /// Image in the residue field: the coefficient of `t^0`.
    pub fn residue(&self) -> Result<Rat> {
        if !self.in_o()? {
            return Err(Error::NotInRing);
        }
        self.coeff(&Rat::zero())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        PuiseuxElem {
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
            floor: self.floor.clone(),
        }
    }

    /// Multiplication by `t^e`.
    pub fn shift(&self, e: &Rat) -> Self {
        PuiseuxElem {
            terms: self.terms.iter().map(|(x, c)| (x + e, c.clone())).collect(),
            floor: self.floor.as_ref().map(|f| f + e),
        }
    }

    fn add_ref(&self, other: &Self) -> Self {
        let floor = match (&self.floor, &other.floor) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (Some(a), Some(b)) => Some(a.max(b).clone()),
        };
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let pick = if i == a.len() {
                Ordering::Less
            } else if j == b.len() {
                Ordering::Greater
            } else {
                a[i].0.cmp(&b[j].0)
            };
            match pick {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        if let Some(f) = &floor {
            out.retain(|(e, _)| e > f);
        }
        PuiseuxElem { terms: out, floor }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let floor = match (&self.floor, &other.floor) {
            (None, None) => None,
            (fa, fb) => {
                let ua = self.negval_bound().expect("nonzero");
                let ub = other.negval_bound().expect("nonzero");
                let ca = fa.as_ref().map(|f| f + &ub);
                let cb = fb.as_ref().map(|f| f + &ua);
                match (ca, cb) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (Some(x), None) | (None, Some(x)) => Some(x),
                    (None, None) => unreachable!(),
                }
            }
        };
        let mut prod = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if floor.as_ref().is_some_and(|f| &e <= f) {
                    continue;
                }
                prod.push((e, ca * cb));
            }
        }
        Self::from_terms(prod, floor)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Splits a nonzero element as `c·t^e·(1 − ε)` with `negval(ε) < 0`,
    /// returning `(e, c, ε)`. The tail of `ε` inherits the floor.
    fn normalize_lead(&self) -> Result<(Rat, Rat, PuiseuxElem)> {
        let (e0, c0) = match self.lead() {
            Some((e, c)) => (e.clone(), c.clone()),
            None if self.is_zero() => return Err(Error::ZeroDivision),
            None => return Err(precision("leading term masked by the floor")),
        };
        let ce = -Rat::one() / &c0;
        let eps = PuiseuxElem {
            terms: self.terms[1..].iter().map(|(e, c)| (e - &e0, c * &ce)).collect(),
            floor: self.floor.as_ref().map(|f| f - &e0),
        };
        Ok((e0, c0, eps))
    }

    /// Multiplicative inverse, correct for all exponents above the returned
    /// floor, which is at most `target_floor`. Monomials invert exactly.
    pub fn inv(&self, target_floor: &Rat) -> Result<Self> {
        let (e0, c0, eps) = self.normalize_lead()?;
        let scale = Rat::one() / &c0;
        if eps.is_zero() {
            return Ok(PuiseuxElem::monomial(scale, -e0));
        }
        let den = lcm_denominators(self.terms.iter().map(|(e, _)| e));
        let mut floor = lattice_below(target_floor, &den);
        if let Some(fa) = &self.floor {
            let tail = fa - &e0 - &e0;
            if tail > floor {
                floor = tail;
            }
        }
        // Relative cutoff for Σ ε^m: exponent of the result is rel − e0.
        let rel_floor = &floor + &e0;
        let sum = geometric(&eps, &rel_floor, |_| Rat::one());
        Ok(sum.scale(&scale).shift(&-e0).truncate(&floor))
    }

    pub fn div(&self, other: &Self, target_floor: &Rat) -> Result<Self> {
        if other.is_monomial() {
            let (e, c) = other.lead().expect("monomial");
            return Ok(self.scale(&(Rat::one() / c)).shift(&-e));
        }
        let inv = other.inv(target_floor)?;
        Ok(self * &inv)
    }

    /// Nonnegative square root of a positive element whose leading
    /// coefficient is a rational square.
    pub fn sqrt_pos(&self, target_floor: &Rat) -> Result<Self> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if self.signum()? == Ordering::Less {
            return Err(Error::NegativeInput);
        }
        let (e0, c0, eps) = self.normalize_lead()?;
        let root = rational_sqrt(&c0).ok_or_else(|| Error::NotASquare(c0.to_string()))?;
        let half = &e0 / rat_int(2);
        if eps.is_zero() {
            return Ok(PuiseuxElem::monomial(root, half));
        }
        let den = lcm_denominators(self.terms.iter().map(|(e, _)| e)) * BigInt::from(2);
        let mut floor = lattice_below(target_floor, &den);
        if let Some(fa) = &self.floor {
            let tail = fa - &half;
            if tail > floor {
                floor = tail;
            }
        }
        let rel_floor = &floor - &half;
        // (1 − ε)^(1/2) = Σ binom(1/2, m)(−1)^m ε^m
        let sum = geometric(&eps, &rel_floor, |m| {
            let mut b = Rat::one();
            for k in 0..m {
                b = b * (Rat::new(BigInt::one(), BigInt::from(2)) - rat_int(k as i64))
                    / rat_int(k as i64 + 1);
            }
            if m % 2 == 1 {
                -b
            } else {
                b
            }
        });
        Ok(sum.scale(&root).shift(&half).truncate(&floor))
    }
}

/// `Σ_m coef(m)·ε^m`, keeping exponents above `rel_floor` (`ε` has negative
/// valuation so the sum terminates).
fn geometric(eps: &PuiseuxElem, rel_floor: &Rat, coef: impl Fn(usize) -> Rat) -> PuiseuxElem {
    let eps = eps.truncate(rel_floor);
    let mut sum = PuiseuxElem::constant(coef(0)).truncate(rel_floor);
    let mut power = PuiseuxElem::one();
    let mut m = 0usize;
    loop {
        m += 1;
        power = (&power * &eps).truncate(rel_floor);
        if power.terms.is_empty() {
            break;
        }
        sum = &sum + &power.scale(&coef(m));
    }
    // The tail of ε contributes at most at its own floor.
    sum
}

/// Exact square root of a nonnegative rational, when it exists.
pub fn rational_sqrt(c: &Rat) -> Option<Rat> {
    if c.is_negative() {
        return None;
    }
    let (n, d) = (c.numer(), c.denom());
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(Rat::new(rn, rd))
    } else {
        None
    }
}

impl Add for &PuiseuxElem {
    type Output = PuiseuxElem;
    fn add(self, rhs: &PuiseuxElem) -> PuiseuxElem {
        self.add_ref(rhs)
    }
}

impl Sub for &PuiseuxElem {
    type Output = PuiseuxElem;
    fn sub(self, rhs: &PuiseuxElem) -> PuiseuxElem {
        self.add_ref(&-rhs)
    }
}

impl Mul for &PuiseuxElem {
    type Output = PuiseuxElem;
    fn mul(self, rhs: &PuiseuxElem) -> PuiseuxElem {
        self.mul_ref(rhs)
    }
}

impl Neg for &PuiseuxElem {
    type Output = PuiseuxElem;
    fn neg(self) -> PuiseuxElem {
        PuiseuxElem {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
            floor: self.floor.clone(),
        }
    }
}

impl Add for PuiseuxElem {
    type Output = PuiseuxElem;
    fn add(self, rhs: PuiseuxElem) -> PuiseuxElem {
        self.add_ref(&rhs)
    }
}

impl Sub for PuiseuxElem {
    type Output = PuiseuxElem;
    fn sub(self, rhs: PuiseuxElem) -> PuiseuxElem {
        &self - &rhs
    }
}

impl Mul for PuiseuxElem {
    type Output = PuiseuxElem;
    fn mul(self, rhs: PuiseuxElem) -> PuiseuxElem {
        self.mul_ref(&rhs)
    }
}

impl Neg for PuiseuxElem {
    type Output = PuiseuxElem;
    fn neg(self) -> PuiseuxElem {
        -&self
    }
}

impl fmt::Display for PuiseuxElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::parse::print(self))
    }
}
