//! The model apartment `Span(Φ) ⊗ Λ`: norm, metric, walls, half-apartments,
//! the affine Weyl group, and W-convex sets.
//!
//! Points are stored by their coefficients in the basis of simple roots. For
//! type `A_{n-1}` the same point has a sum-zero view `μ ∈ Λⁿ` with
//! `b(x, α_ij∨) = μ_i − μ_j`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::{Kind, RootSystem, WeylElem};
use crate::valfield::{LambdaVal, Rat, ValueGroup};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ApartmentVec<G = Rat> {
    coords: Vec<G>,
}

impl<G: ValueGroup> ApartmentVec<G> {
    pub fn zero(rank: usize) -> Self {
        ApartmentVec { coords: vec![G::zero(); rank] }
    }

    pub fn from_coords(coords: Vec<G>) -> Self {
        ApartmentVec { coords }
    }

    pub fn coords(&self) -> &[G] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    /// From the sum-zero view: `λ_k = μ_1 + … + μ_k`.
    pub fn from_mu(mu: &[G]) -> Result<Self> {
        let total = mu.iter().fold(G::zero(), |a, b| a.add(b));
        if !total.is_zero() {
            return Err(Error::Invalid(format!("coordinates sum to {total}, not zero")));
        }
        let mut acc = G::zero();
        let coords = mu[..mu.len().saturating_sub(1)]
            .iter()
            .map(|m| {
                acc = acc.add(m);
                acc.clone()
            })
            .collect();
        Ok(ApartmentVec { coords })
    }

    /// Sum-zero view: `μ_k = λ_k − λ_{k−1}` with `λ_0 = λ_n = 0`.
    pub fn mu(&self) -> Vec<G> {
        let r = self.coords.len();
        (0..=r)
            .map(|k| {
                let hi = if k < r { self.coords[k].clone() } else { G::zero() };
                let lo = if k > 0 { self.coords[k - 1].clone() } else { G::zero() };
                hi.sub(&lo)
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        ApartmentVec { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        ApartmentVec { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        ApartmentVec { coords: self.coords.iter().map(|a| a.neg()).collect() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// `{x : b(x, α∨) ≥ ℓ}` (Plus) or `{x : b(x, α∨) ≤ ℓ}` (Minus). A bottom
/// threshold on a Plus half-apartment is the whole apartment.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfApartment<G = Rat> {
    pub root: Vec<i64>,
    pub threshold: LambdaVal<G>,
    pub sign: Sign,
}

impl<G: ValueGroup> HalfApartment<G> {
    /// `{μ : μ_i − μ_j ≥ ℓ}` in a type-A system.
    pub fn diff(rs: &RootSystem, i: usize, j: usize, ell: G) -> Self {
        HalfApartment { root: rs.alpha(i, j), threshold: LambdaVal::Finite(ell), sign: Sign::Plus }
    }

    /// The same set as a lower bound on `μ_i − μ_j`, or `None` when it is the
    /// whole apartment.
    pub fn as_diff(&self, rs: &RootSystem) -> Result<Option<(usize, usize, G)>> {
        let (i, j) = rs.as_pair(&self.root).ok_or(Error::UnsupportedConstraint)?;
        match (&self.threshold, self.sign) {
            (LambdaVal::Bottom, Sign::Plus) => Ok(None),
            (LambdaVal::Bottom, Sign::Minus) => {
                Err(Error::Invalid("upper bound −∞ describes the empty set".into()))
            }
            (LambdaVal::Finite(l), Sign::Plus) => Ok(Some((i, j, l.clone()))),
            (LambdaVal::Finite(l), Sign::Minus) => Ok(Some((j, i, l.neg()))),
        }
    }
}

/// A finite intersection of half-apartments; empty list = whole apartment.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WConvexSet<G = Rat> {
    pub constraints: Vec<HalfApartment<G>>,
}

impl<G: ValueGroup> WConvexSet<G> {
    pub fn whole() -> Self {
        WConvexSet { constraints: Vec::new() }
    }

    pub fn contains(&self, rs: &RootSystem, x: &ApartmentVec<G>) -> Result<bool> {
        for h in &self.constraints {
            if !in_half(rs, h, x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Difference-form constraints `(i, j, ℓ)` meaning `μ_i − μ_j ≥ ℓ`.
    pub fn diffs(&self, rs: &RootSystem) -> Result<Vec<(usize, usize, G)>> {
        let mut out = Vec::new();
        for h in &self.constraints {
            if let Some(d) = h.as_diff(rs)? {
                out.push(d);
            }
        }
        Ok(out)
    }
}

/// `x ↦ translation + spherical(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineWeylElem<G = Rat> {
    pub translation: ApartmentVec<G>,
    pub spherical: WeylElem,
}

impl<G: ValueGroup> AffineWeylElem<G> {
    pub fn identity(rs: &RootSystem) -> Self {
        AffineWeylElem { translation: ApartmentVec::zero(rs.rank()), spherical: rs.weyl_identity() }
    }

    pub fn translation(rs: &RootSystem, c: ApartmentVec<G>) -> Self {
        AffineWeylElem { translation: c, spherical: rs.weyl_identity() }
    }

    /// The element acting as `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let moved = ApartmentVec::from_coords(self.spherical.act(other.translation.coords()));
        AffineWeylElem {
            translation: self.translation.add(&moved),
            spherical: self.spherical.compose(&other.spherical),
        }
    }

    pub fn inverse(&self) -> Self {
        let s_inv = self.spherical.inverse();
        let t = ApartmentVec::from_coords(s_inv.act(self.translation.coords())).neg();
        AffineWeylElem { translation: t, spherical: s_inv }
    }
}

/// `b(x, α∨)` extended Λ-linearly.
pub fn b_ext<G: ValueGroup>(rs: &RootSystem, x: &ApartmentVec<G>, alpha: &[i64]) -> Result<G> {
    rs.pairing_ext(x.coords(), alpha)
}

/// `N(x) = Σ_{α > 0} |b(x, α∨)|`.
pub fn norm<G: ValueGroup>(rs: &RootSystem, x: &ApartmentVec<G>) -> G {
    rs.positive_roots()
        .iter()
        .map(|a| b_ext(rs, x, a).expect("positive root").abs())
        .fold(G::zero(), |acc, v| acc.add(&v))
}

pub fn dist<G: ValueGroup>(rs: &RootSystem, x: &ApartmentVec<G>, y: &ApartmentVec<G>) -> G {
    norm(rs, &x.sub(y))
}

/// Membership in the fundamental chamber `{b(x, δ∨) ≥ 0 for all simple δ}`.
pub fn in_chamber_c0<G: ValueGroup>(rs: &RootSystem, x: &ApartmentVec<G>) -> bool {
    (0..rs.rank()).all(|k| {
        let mut d = vec![0; rs.rank()];
        d[k] = 1;
        b_ext(rs, x, &d).expect("simple root") >= G::zero()
    })
}

pub fn in_half<G: ValueGroup>(rs: &RootSystem, h: &HalfApartment<G>, x: &ApartmentVec<G>) -> Result<bool> {
    let v = LambdaVal::Finite(b_ext(rs, x, &h.root)?);
    Ok(match h.sign {
        Sign::Plus => v >= h.threshold,
        Sign::Minus => v <= h.threshold,
    })
}

/// Membership in the wall `{b(x, α∨) = ℓ}`.
pub fn on_wall<G: ValueGroup>(rs: &RootSystem, alpha: &[i64], ell: &G, x: &ApartmentVec<G>) -> Result<bool> {
    Ok(b_ext(rs, x, alpha)? == *ell)
}

pub fn apply_weyl<G: ValueGroup>(w: &AffineWeylElem<G>, x: &ApartmentVec<G>) -> ApartmentVec<G> {
    w.translation.add(&ApartmentVec::from_coords(w.spherical.act(x.coords())))
}

fn size_of(rs: &RootSystem) -> Result<usize> {
    match rs.kind() {
        Kind::TypeA(n) => Ok(n + 1),
        Kind::FromCartan => Err(Error::UnsupportedConstraint),
    }
}

/// Upper bounds `D[i][j]` on `μ_j − μ_i` implied by the constraints, or
/// `None` if the system is infeasible. Unbounded entries are `None`.
pub fn difference_bounds<G: ValueGroup>(
    rs: &RootSystem,
    set: &WConvexSet<G>,
) -> Result<Option<Vec<Vec<Option<G>>>>> {
    let n = size_of(rs)?;
    let mut d: Vec<Vec<Option<G>>> = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(G::zero());
    }
    for (i, j, ell) in set.diffs(rs)? {
        // μ_i − μ_j ≥ ℓ  ⇔  μ_j − μ_i ≤ −ℓ
        let w = ell.neg();
        if d[i][j].as_ref().is_none_or(|cur| w < *cur) {
            d[i][j] = Some(w);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (&d[i][k], &d[k][j]) {
                    let via = a.add(b);
                    if d[i][j].as_ref().is_none_or(|cur| via < *cur) {
                        d[i][j] = Some(via);
                    }
                }
            }
        }
    }
    if (0..n).any(|i| d[i][i].as_ref().is_some_and(|v| *v < G::zero())) {
        return Ok(None);
    }
    Ok(Some(d))
}

/// A point of the set, found from shortest-path potentials (Bellman–Ford
/// from a virtual source, edges relaxed in index order) and shifted to sum
/// zero. `None` when the set is empty.
pub fn wconvex_witness<G: ValueGroup>(rs: &RootSystem, set: &WConvexSet<G>) -> Result<Option<ApartmentVec<G>>> {
    let n = size_of(rs)?;
    let mut edges: Vec<(usize, usize, G)> = set.diffs(rs)?.into_iter().map(|(i, j, l)| (i, j, l.neg())).collect();
    edges.sort_by_key(|e| (e.0, e.1));
    let mut pot = vec![G::zero(); n];
    for round in 0..=n {
        let mut changed = false;
        for (u, v, w) in &edges {
            let cand = pot[*u].add(w);
            if cand < pot[*v] {
                pot[*v] = cand;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        if round == n {
            return Ok(None);
        }
    }
    let mean = pot.iter().fold(G::zero(), |a, b| a.add(b)).div_int(n as u64);
    let mu: Vec<G> = pot.iter().map(|p| p.sub(&mean)).collect();
    Ok(Some(ApartmentVec::from_mu(&mu)?))
}

pub fn wconvex_feasible<G: ValueGroup>(rs: &RootSystem, set: &WConvexSet<G>) -> Result<bool> {
    Ok(wconvex_witness(rs, set)?.is_some())
}

/// Whether two W-convex sets are equal, compared through their tight
/// difference bounds.
pub fn wconvex_equal<G: ValueGroup>(rs: &RootSystem, a: &WConvexSet<G>, b: &WConvexSet<G>) -> Result<bool> {
    Ok(difference_bounds(rs, a)? == difference_bounds(rs, b)?)
}

/// Whether every point of `a` lies in `b`.
pub fn wconvex_subset<G: ValueGroup>(rs: &RootSystem, a: &WConvexSet<G>, b: &WConvexSet<G>) -> Result<bool> {
    let Some(da) = difference_bounds(rs, a)? else {
        return Ok(true);
    };
    for (i, j, ell) in b.diffs(rs)? {
        // need min over a of μ_i − μ_j ≥ ℓ, i.e. max of μ_j − μ_i ≤ −ℓ
        match &da[i][j] {
            Some(m) if *m <= ell.neg() => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

#[derive(Serialize, Deserialize)]
struct DiffJson {
    i: usize,
    j: usize,
    ell: String,
}

/// JSON form `[{i, j, ell}, …]` of a type-A W-convex set over ℚ.
pub fn wconvex_to_json(rs: &RootSystem, set: &WConvexSet<Rat>) -> Result<serde_json::Value> {
    let items: Vec<DiffJson> =
        set.diffs(rs)?.into_iter().map(|(i, j, l)| DiffJson { i, j, ell: l.to_string() }).collect();
    Ok(serde_json::to_value(items).expect("serializable"))
}

pub fn wconvex_from_json(rs: &RootSystem, v: &serde_json::Value) -> Result<WConvexSet<Rat>> {
    let items: Vec<DiffJson> =
        serde_json::from_value(v.clone()).map_err(|e| Error::Invalid(e.to_string()))?;
    let mut constraints = Vec::new();
    for d in items {
        let ell: Rat = d.ell.parse().map_err(|_| Error::Invalid(format!("bad rational {}", d.ell)))?;
        if d.i == d.j || d.i > rs.rank() || d.j > rs.rank() {
            return Err(Error::Invalid("constraint indices out of range".into()));
        }
        constraints.push(HalfApartment::diff(rs, d.i, d.j, ell));
    }
    Ok(WConvexSet { constraints })
}
