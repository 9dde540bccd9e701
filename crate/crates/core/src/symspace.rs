//! The non-standard symmetric space of `SL(n)` over the series field:
//! positive-definite determinant-one matrices with the action `g.x = g x gᵀ`.
//!
//! No square roots and no series inversions are used. Valuations of the
//! Cartan projection come from the Newton polygon of `det(λx − y)`, and the
//! Iwasawa retraction from ratios of trailing principal minors.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::apartment::ApartmentVec;
use crate::error::{precision, Error, Result};
use crate::matrix::{RatMatrix, SeriesMatrix};
use crate::valfield::{rat_int, LambdaVal, PuiseuxElem, Rat};

/// An element of `SL(n, F)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SeriesMatrix", into = "SeriesMatrix")]
pub struct GroupElem(SeriesMatrix);

/// A point of the symmetric space: symmetric, determinant one, positive
/// definite.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SeriesMatrix", into = "SeriesMatrix")]
pub struct SPDPoint(SeriesMatrix);

/// Valuations `μ_1 ≥ … ≥ μ_n` (sum zero) of the Cartan projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanVals {
    pub mu: Vec<Rat>,
}

fn consistent_with_one(d: &PuiseuxElem) -> bool {
    let diff = d - &PuiseuxElem::one();
    diff.terms().is_empty()
}

impl GroupElem {
    pub fn new(m: SeriesMatrix) -> Result<Self> {
        if !consistent_with_one(&m.det()) {
            return Err(Error::Invalid("determinant is not 1".into()));
        }
        Ok(GroupElem(m))
    }

    /// Wraps a matrix known to have determinant one.
    pub(crate) fn new_unchecked(m: SeriesMatrix) -> Self {
        debug_assert!(consistent_with_one(&m.det()));
        GroupElem(m)
    }

    pub fn identity(n: usize) -> Self {
        GroupElem(SeriesMatrix::identity(n))
    }

    pub fn from_rational(q: &RatMatrix) -> Result<Self> {
        Self::new(SeriesMatrix::from_rational(q))
    }

    pub fn matrix(&self) -> &SeriesMatrix {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn get(&self, i: usize, j: usize) -> &PuiseuxElem {
        self.0.get(i, j)
    }

    pub fn mul(&self, other: &GroupElem) -> GroupElem {
        GroupElem(self.0.mul(&other.0))
    }

    /// Inverse as the adjugate; exact because the determinant is one.
    pub fn inverse(&self) -> GroupElem {
        GroupElem(self.0.adjugate())
    }

    pub fn transpose(&self) -> GroupElem {
        GroupElem(self.0.transpose())
    }
}

impl TryFrom<SeriesMatrix> for GroupElem {
    type Error = Error;
    fn try_from(m: SeriesMatrix) -> Result<Self> {
        GroupElem::new(m)
    }
}

impl From<GroupElem> for SeriesMatrix {
    fn from(g: GroupElem) -> SeriesMatrix {
        g.0
    }
}

impl SPDPoint {
    pub fn new(m: SeriesMatrix) -> Result<Self> {
        if !m.is_symmetric() {
            return Err(Error::Invalid("matrix is not symmetric".into()));
        }
        if !consistent_with_one(&m.det()) {
            return Err(Error::Invalid("determinant is not 1".into()));
        }
        for k in 1..=m.n() {
            let idx: Vec<usize> = (0..k).collect();
            if m.principal_minor(&idx).signum()? != Ordering::Greater {
                return Err(Error::Invalid(format!("leading minor of size {k} is not positive")));
            }
        }
        Ok(SPDPoint(m))
    }

    pub fn identity(n: usize) -> Self {
        SPDPoint(SeriesMatrix::identity(n))
    }

    /// `diag(t^{2μ_1}, …, t^{2μ_n})`, the image of `diag(t^μ)` acting on `Id`.
    pub fn apartment_point(mu: &[Rat]) -> Result<Self> {
        if mu.iter().fold(Rat::zero(), |a, b| a + b) != Rat::zero() {
            return Err(Error::Invalid("coordinates must sum to zero".into()));
        }
        let two = rat_int(2);
        Ok(SPDPoint(SeriesMatrix::diag(
            mu.iter().map(|m| PuiseuxElem::monomial(Rat::one(), m * &two)).collect(),
        )))
    }

    pub fn matrix(&self) -> &SeriesMatrix {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }
}

impl TryFrom<SeriesMatrix> for SPDPoint {
    type Error = Error;
    fn try_from(m: SeriesMatrix) -> Result<Self> {
        SPDPoint::new(m)
    }
}

impl From<SPDPoint> for SeriesMatrix {
    fn from(x: SPDPoint) -> SeriesMatrix {
        x.0
    }
}

/// `g.x = g x gᵀ`.
pub fn act(g: &GroupElem, x: &SPDPoint) -> Result<SPDPoint> {
    if g.n() != x.n() {
        return Err(Error::Dimension(format!("{}x{} acting on {}x{}", g.n(), g.n(), x.n(), x.n())));
    }
    let gx = g.0.mul(&x.0);
    let mut out = gx.mul(&g.0.transpose());
    // Mirrored entries can differ only in their error floors; keep the coarser.
    let n = out.n();
    let half = Rat::new(1.into(), 2.into());
    for i in 0..n {
        for j in 0..i {
            if out.get(i, j) != out.get(j, i) {
                let merged = (out.get(i, j) + out.get(j, i)).scale(&half);
                out.set(i, j, merged.clone());
                out.set(j, i, merged);
            }
        }
    }
    Ok(SPDPoint(out))
}

/// Inverse of the Vandermonde matrix on nodes `0, 1, …, n`.
fn vandermonde_inverse(n: usize) -> RatMatrix {
    let v = RatMatrix::from_fn(n + 1, |m, k| {
        let base = rat_int(m as i64);
        (0..k).fold(Rat::one(), |acc, _| acc * &base)
    });
    v.inverse().expect("nodes are distinct")
}

/// Coefficients `c_0, …, c_n` of `q(λ) = det(λx − y)`, by evaluation at
/// `λ = 0, …, n` and exact interpolation.
pub fn pencil_coefficients(x: &SeriesMatrix, y: &SeriesMatrix) -> Vec<PuiseuxElem> {
    let n = x.n();
    let values: Vec<PuiseuxElem> = (0..=n).map(|m| x.scale(&rat_int(m as i64)).sub(y).det()).collect();
    let vinv = vandermonde_inverse(n);
    (0..=n)
        .map(|k| {
            (0..=n).fold(PuiseuxElem::zero(), |acc, m| {
                let w = vinv.get(k, m);
                if w.is_zero() {
                    acc
                } else {
                    &acc + &values[m].scale(w)
                }
            })
        })
        .collect()
}

/// Valuations of the roots of `Σ c_k λ^k`, from the upper concave hull of
/// the points `(k, negval(c_k))`, sorted descending.
pub fn root_valuations(coeffs: &[PuiseuxElem]) -> Result<Vec<Rat>> {
    let mut known: Vec<(Rat, Rat)> = Vec::new();
    let mut masked: Vec<(usize, Rat)> = Vec::new();
    for (k, c) in coeffs.iter().enumerate() {
        match c.negval() {
            Ok(LambdaVal::Finite(h)) => known.push((rat_int(k as i64), h)),
            Ok(LambdaVal::Bottom) => {}
            Err(_) => masked.push((k, c.floor().expect("masked implies a floor").clone())),
        }
    }
    let deg = coeffs.len() - 1;
    if known.first().map(|p| p.0.clone()) != Some(Rat::zero())
        || known.last().map(|p| p.0.clone()) != Some(rat_int(deg as i64))
    {
        return Err(precision("extreme coefficients of the pencil are not determined"));
    }
    let mut hull: Vec<(Rat, Rat)> = Vec::new();
    for p in known {
        while hull.len() >= 2 {
            let (a, b) = (&hull[hull.len() - 2], &hull[hull.len() - 1]);
            let cross = (&b.0 - &a.0) * (&p.1 - &a.1) - (&b.1 - &a.1) * (&p.0 - &a.0);
            if cross >= Rat::zero() {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let hull_at = |k: &Rat| -> Rat {
        for w in hull.windows(2) {
            if &w[0].0 <= k && k <= &w[1].0 {
                return &w[0].1 + (&w[1].1 - &w[0].1) * (k - &w[0].0) / (&w[1].0 - &w[0].0);
            }
        }
        hull[0].1.clone()
    };
    for (k, f) in masked {
        if f >= hull_at(&rat_int(k as i64)) {
            return Err(precision(format!("coefficient {k} of the pencil is masked near the hull")));
        }
    }
    let mut out = Vec::with_capacity(deg);
    for w in hull.windows(2) {
        let width = &w[1].0 - &w[0].0;
        let slope = (&w[1].1 - &w[0].1) / &width;
        let mult = width.to_integer().try_into().expect("small degree");
        for _ in 0..mult {
            out.push(-slope.clone());
        }
    }
    out.sort_by(|a, b| b.cmp(a));
    Ok(out)
}

/// Valuations of the Cartan projection of `(x, y)`: half the root
/// valuations of `det(λx − y)`.
pub fn cartan_valuations(x: &SPDPoint, y: &SPDPoint) -> Result<CartanVals> {
    if x.n() != y.n() {
        return Err(Error::Dimension("points of different size".into()));
    }
    let coeffs = pencil_coefficients(&x.0, &y.0);
    let half = Rat::new(1.into(), 2.into());
    let mu = root_valuations(&coeffs)?.into_iter().map(|r| r * &half).collect();
    Ok(CartanVals { mu })
}

/// `Σ_{i≠j} |μ_i − μ_j|` of the Cartan valuations.
pub fn distance(x: &SPDPoint, y: &SPDPoint) -> Result<Rat> {
    let mu = cartan_valuations(x, y)?.mu;
    // sorted descending, so every pair with i < j contributes μ_i − μ_j
    let n = mu.len();
    let mut total = Rat::zero();
    for (i, m) in mu.iter().enumerate() {
        let k = rat_int(n as i64 - 1 - 2 * i as i64);
        total += m * k;
    }
    Ok(total * rat_int(2))
}

pub fn equivalent(x: &SPDPoint, y: &SPDPoint) -> Result<bool> {
    Ok(distance(x, y)?.is_zero())
}

/// Iwasawa retraction onto the standard apartment: `x = u·D·uᵀ` with `u`
/// upper unipotent gives `μ_i = negval(D_i)/2`, read off from trailing
/// principal minors.
pub fn retract(x: &SPDPoint) -> Result<ApartmentVec> {
    ApartmentVec::from_mu(&retract_mu(x)?)
}

pub fn retract_mu(x: &SPDPoint) -> Result<Vec<Rat>> {
    let n = x.n();
    let mut minors = Vec::with_capacity(n + 1);
    for i in 0..n {
        let idx: Vec<usize> = (i..n).collect();
        let m = x.0.principal_minor(&idx);
        match m.negval()? {
            LambdaVal::Finite(v) => minors.push(v),
            LambdaVal::Bottom => return Err(Error::Invalid("singular trailing minor".into())),
        }
    }
    minors.push(Rat::zero());
    let half = Rat::new(1.into(), 2.into());
    Ok((0..n).map(|i| (&minors[i] - &minors[i + 1]) * &half).collect())
}
