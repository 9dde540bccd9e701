//! Apartment charts of the building of `SL(n)`, tropical chart membership,
//! the overlap of a chart with the standard apartment, root-group
//! valuations, affine reflections, and stabilizer predicates.
//!
//! # Chart membership
//!
//! For `g ∈ SL(n)` and `a = diag(t^μ)`, the point `g·a·o` lies in the
//! standard apartment iff `c⁻¹·g·a ∈ SL(n, O)` for some diagonal monomial
//! `c = diag(t^ν)`. Entry `(i, j)` of `c⁻¹ g a` has negated valuation
//! `T_ij + μ_j − ν_i` with `T = trop(g)`, so the condition is `ν_i ≥ r_i`
//! where `r_i = max_j (T_ij + μ_j)`. Since `Σ ν_i = 0` this needs `Σ r_i ≤ 0`.
//! On the other hand `det(g a) = 1` has a term from some permutation `σ`
//! with `Σ_i (T_iσ(i) + μ_σ(i)) ≥ 0`, hence `Σ r_i ≥ 0`. So the point lies in
//! the apartment iff `Σ r_i = 0`, and then `ν = r` (coordinates in the
//! apartment are unique).
//!
//! # Overlap
//!
//! Write `P = max_σ Σ_i T_iσ(i)` (the tropical permanent, `≥ 0` because the
//! determinant is one). For any `σ`, `Σ r_i ≥ P_σ`, so the overlap is empty
//! when `P > 0`. When `P = 0` and `σ` is optimal, `Σ r_i = 0` forces
//! `r_i = T_iσ(i) + μ_σ(i)` for every `i`, so the overlap is exactly
//! `region(σ) = {μ : T_ij + μ_j ≤ T_iσ(i) + μ_σ(i)}` and on it
//! `ν_i = T_iσ(i) + μ_σ(i)`.

use std::cmp::Ordering;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::apartment::{wconvex_from_json, wconvex_subset, wconvex_to_json, AffineWeylElem, ApartmentVec};
use crate::apartment::{HalfApartment, WConvexSet};
use crate::error::{Error, Result};
use crate::matrix::SeriesMatrix;
use crate::rootsys::RootSystem;
use crate::symspace::{act, retract_mu, GroupElem, SPDPoint};
use crate::valfield::{rat_int, LambdaVal, PuiseuxElem, Rat};

/// Largest `n` for which overlaps enumerate all permutations by default.
pub const DEFAULT_PERM_BOUND: usize = 5;

/// How far below `−negval(s)` the series `1/s` is expanded in [`m_of`]
/// when `s` is not a monomial.
pub const REFLECTION_EXPANSION: i64 = 8;

/// Entrywise negated valuations of a matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TropMatrix {
    n: usize,
    data: Vec<LambdaVal>,
}

impl TropMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> LambdaVal) -> Self {
        let data = (0..n * n).map(|k| f(k / n, k % n)).collect();
        TropMatrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &LambdaVal {
        &self.data[i * self.n + j]
    }

    /// Max-plus product.
    pub fn maxplus(&self, other: &Self) -> Self {
        let n = self.n;
        Self::from_fn(n, |i, j| {
            (0..n).fold(LambdaVal::Bottom, |acc, k| LambdaVal::max_of(acc, self.get(i, k).plus(other.get(k, j))))
        })
    }

    /// Entrywise `self ≤ other`.
    pub fn le(&self, other: &Self) -> bool {
        self.data.iter().zip(&other.data).all(|(a, b)| a <= b)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j).to_string()).collect()).collect()
    }
}

pub fn trop(g: &GroupElem) -> Result<TropMatrix> {
    let n = g.n();
    let mut data = Vec::with_capacity(n * n);
    for e in g.matrix().entries() {
        data.push(e.negval()?);
    }
    Ok(TropMatrix { n, data })
}

/// The apartment `g·𝔸`, parametrized by `μ ↦ g·diag(t^{2μ})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chart {
    pub g: GroupElem,
}

impl Chart {
    pub fn standard(n: usize) -> Self {
        Chart { g: GroupElem::identity(n) }
    }

    pub fn point(&self, mu: &[Rat]) -> Result<SPDPoint> {
        act(&self.g, &SPDPoint::apartment_point(mu)?)
    }

    /// Standard-apartment coordinates of the chart point at `μ`, if any.
    pub fn image(&self, mu: &[Rat]) -> Result<Option<Vec<Rat>>> {
        chart_image_mu(&trop(&self.g)?, mu)
    }
}

/// `Id + s·E_ij`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootElem {
    pub n: usize,
    pub i: usize,
    pub j: usize,
    pub s: PuiseuxElem,
}

impl RootElem {
    pub fn new(n: usize, i: usize, j: usize, s: PuiseuxElem) -> Result<Self> {
        if i == j || i >= n || j >= n {
            return Err(Error::Dimension(format!("({i}, {j}) is not a root position for n = {n}")));
        }
        Ok(RootElem { n, i, j, s })
    }

    pub fn matrix(&self) -> SeriesMatrix {
        let mut m = SeriesMatrix::identity(self.n);
        m.set(self.i, self.j, self.s.clone());
        m
    }

    pub fn group_elem(&self) -> GroupElem {
        GroupElem::new_unchecked(self.matrix())
    }

    pub fn is_identity(&self) -> bool {
        self.s.is_zero()
    }
}

/// `r_i = max_j (T_ij + μ_j)`; the image is `r` when `Σ r_i = 0`.
pub fn chart_image_mu(t: &TropMatrix, mu: &[Rat]) -> Result<Option<Vec<Rat>>> {
    let n = t.n();
    if mu.len() != n {
        return Err(Error::Dimension(format!("point of size {} for n = {n}", mu.len())));
    }
    let mut r = Vec::with_capacity(n);
    for i in 0..n {
        let best = (0..n).fold(LambdaVal::Bottom, |acc, j| LambdaVal::max_of(acc, t.get(i, j).plus_g(&mu[j])));
        match best {
            LambdaVal::Finite(v) => r.push(v),
            LambdaVal::Bottom => return Err(Error::Invalid("matrix has a zero row".into())),
        }
    }
    let total = r.iter().fold(Rat::zero(), |a, b| a + b);
    Ok(if total.is_zero() { Some(r) } else { None })
}

pub fn chart_image(g: &GroupElem, mu: &ApartmentVec) -> Result<Option<ApartmentVec>> {
    match chart_image_mu(&trop(g)?, &mu.mu())? {
        Some(nu) => Ok(Some(ApartmentVec::from_mu(&nu)?)),
        None => Ok(None),
    }
}

/// Result of [`apartment_overlap`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Overlap {
    Empty,
    Region { set: WConvexSet, weyl: AffineWeylElem },
}

impl Overlap {
    pub fn set(&self) -> Option<&WConvexSet> {
        match self {
            Overlap::Empty => None,
            Overlap::Region { set, .. } => Some(set),
        }
    }

    pub fn weyl(&self) -> Option<&AffineWeylElem> {
        match self {
            Overlap::Empty => None,
            Overlap::Region { weyl, .. } => Some(weyl),
        }
    }

    pub fn to_json(&self, rs: &RootSystem) -> Result<serde_json::Value> {
        Ok(match self {
            Overlap::Empty => serde_json::json!({ "empty": true }),
            Overlap::Region { set, weyl } => serde_json::json!({
                "constraints": wconvex_to_json(rs, set)?,
                "weyl": {
                    "perm": weyl.spherical.perm().ok_or(Error::UnsupportedConstraint)?,
                    "translation": weyl.translation.mu().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                },
            }),
        })
    }

    pub fn from_json(rs: &RootSystem, v: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize, Serialize)]
        struct WeylJson {
            perm: Vec<usize>,
            translation: Vec<String>,
        }
        if v.get("empty").and_then(|e| e.as_bool()) == Some(true) {
            return Ok(Overlap::Empty);
        }
        let set = wconvex_from_json(rs, v.get("constraints").ok_or(Error::Invalid("missing constraints".into()))?)?;
        let w: WeylJson = serde_json::from_value(v.get("weyl").cloned().unwrap_or_default())
            .map_err(|e| Error::Invalid(e.to_string()))?;
        let size = rs.rank() + 1;
        let mut seen = vec![false; size];
        if w.perm.len() != size || w.perm.iter().any(|&p| p >= size || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Invalid("weyl.perm is not a permutation".into()));
        }
        let c = w
            .translation
            .iter()
            .map(|s| s.parse::<Rat>().map_err(|_| Error::Invalid(format!("bad rational {s}"))))
            .collect::<Result<Vec<_>>>()?;
        if c.len() != size {
            return Err(Error::Invalid("weyl.translation has the wrong length".into()));
        }
        Ok(Overlap::Region {
            set,
            weyl: AffineWeylElem { translation: ApartmentVec::from_mu(&c)?, spherical: rs.weyl_from_perm(&w.perm) },
        })
    }
}

fn perm_weight(t: &TropMatrix, sigma: &[usize]) -> LambdaVal {
    sigma.iter().enumerate().fold(LambdaVal::zero(), |acc, (i, &s)| acc.plus(t.get(i, s)))
}

/// `{μ : μ_σ(i) − μ_j ≥ T_ij − T_iσ(i)}` over finite `T_ij`.
fn region(rs: &RootSystem, t: &TropMatrix, sigma: &[usize]) -> WConvexSet {
    let n = t.n();
    let mut constraints = Vec::new();
    for (i, &s) in sigma.iter().enumerate() {
        let diag = t.get(i, s).finite().expect("optimal permutation has finite entries");
        for j in 0..n {
            if j == s {
                continue;
            }
            if let LambdaVal::Finite(v) = t.get(i, j) {
                constraints.push(HalfApartment::diff(rs, s, j, v - diag));
            }
        }
    }
    WConvexSet { constraints }
}

/// Overlap of the chart `g·𝔸` with the standard apartment, as a W-convex
/// set `Ω` of chart coordinates together with an affine Weyl element `w`
/// such that the chart point at `μ ∈ Ω` has standard coordinates `w(μ)`.
pub fn apartment_overlap(g: &GroupElem) -> Result<Overlap> {
    apartment_overlap_bounded(g, DEFAULT_PERM_BOUND)
}

pub fn apartment_overlap_bounded(g: &GroupElem, max_n: usize) -> Result<Overlap> {
    let n = g.n();
    if n > max_n {
        return Err(Error::EnumerationBound(max_n));
    }
    let rs = RootSystem::type_a(n - 1);
    let t = trop(g)?;
    let perms: Vec<Vec<usize>> = rs
        .weyl_elements(usize::MAX)?
        .into_iter()
        .map(|w| w.perm().expect("type A").to_vec())
        .collect();
    let weights: Vec<LambdaVal> = perms.iter().map(|s| perm_weight(&t, s)).collect();
    let best = weights.iter().max().cloned().unwrap_or(LambdaVal::Bottom);
    match best.cmp(&LambdaVal::zero()) {
        Ordering::Greater => return Ok(Overlap::Empty),
        Ordering::Less => {
            return Err(Error::Invalid("tropical permanent below zero; determinant is not 1".into()));
        }
        Ordering::Equal => {}
    }
    let optimal: Vec<&Vec<usize>> = perms.iter().zip(&weights).filter(|(_, w)| **w == best).map(|(p, _)| p).collect();
    let regions: Vec<WConvexSet> = optimal.iter().map(|s| region(&rs, &t, s)).collect();
    // Permutations come in lexicographic order, so the first that works is
    // the canonical choice.
    for (k, sigma) in optimal.iter().enumerate() {
        let mut covers = true;
        for (m, other) in regions.iter().enumerate() {
            if m != k && !wconvex_subset(&rs, other, &regions[k])? {
                covers = false;
                break;
            }
        }
        if covers {
            let c: Vec<Rat> =
                sigma.iter().enumerate().map(|(i, &s)| t.get(i, s).finite().expect("finite").clone()).collect();
            let weyl = AffineWeylElem { translation: ApartmentVec::from_mu(&c)?, spherical: rs.weyl_from_perm(sigma) };
            return Ok(Overlap::Region { set: regions[k].clone(), weyl });
        }
    }
    Err(Error::AmbiguousWeyl)
}

/// Whether `g` fixes the base point `o = Id`, i.e. all entries lie in `O`.
pub fn stab_o(g: &GroupElem) -> Result<bool> {
    for e in g.matrix().entries() {
        if !e.in_o()? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Root-group valuation: `negval(s)`, bottom for the identity.
pub fn phi(u: &RootElem) -> Result<LambdaVal> {
    u.s.negval()
}

/// `{μ : μ_i − μ_j ≥ φ(u)}`.
pub fn fixed_set_root(u: &RootElem) -> Result<HalfApartment> {
    let rs = RootSystem::type_a(u.n - 1);
    match phi(u)? {
        LambdaVal::Bottom => Err(Error::IdentityElement),
        LambdaVal::Finite(l) => Ok(HalfApartment::diff(&rs, u.i, u.j, l)),
    }
}

fn check_upper_unipotent(u: &GroupElem) -> Result<()> {
    let n = u.n();
    for i in 0..n {
        for j in 0..=i {
            let e = u.get(i, j);
            let want = if i == j { PuiseuxElem::one() } else { PuiseuxElem::zero() };
            if *e != want {
                return Err(Error::NotUnipotent);
            }
        }
    }
    Ok(())
}

/// Positions above the diagonal in factor order: `(i, j − i)` descending.
pub fn factor_order(n: usize) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    out.sort_by_key(|&(i, j)| std::cmp::Reverse((i, j - i)));
    out
}

/// Parameters `s_ij` with `u = Π (Id + s_ij E_ij)` over [`factor_order`].
pub fn unipotent_factors(u: &GroupElem) -> Result<Vec<RootElem>> {
    check_upper_unipotent(u)?;
    let n = u.n();
    let order = factor_order(n);
    let mut params: Vec<PuiseuxElem> = vec![PuiseuxElem::zero(); order.len()];
    let product = |params: &[PuiseuxElem]| {
        order.iter().zip(params).fold(SeriesMatrix::identity(n), |acc, (&(i, j), s)| {
            if s.is_zero() {
                acc
            } else {
                let mut f = SeriesMatrix::identity(n);
                f.set(i, j, s.clone());
                acc.mul(&f)
            }
        })
    };
    for height in 1..n {
        let p = product(&params);
        for (k, &(i, j)) in order.iter().enumerate() {
            if j - i == height {
                params[k] = u.get(i, j) - p.get(i, j);
            }
        }
    }
    Ok(order.iter().zip(params).map(|(&(i, j), s)| RootElem { n, i, j, s }).collect())
}

/// Fixed set of an upper unipotent element: `μ_i − μ_j ≥ φ` for each
/// nontrivial factor.
pub fn fixed_set_unipotent(u: &GroupElem) -> Result<WConvexSet> {
    let rs = RootSystem::type_a(u.n() - 1);
    let mut constraints = Vec::new();
    for f in unipotent_factors(u)? {
        if let LambdaVal::Finite(l) = phi(&f)? {
            constraints.push(HalfApartment::diff(&rs, f.i, f.j, l));
        }
    }
    Ok(WConvexSet { constraints })
}

/// Reflection datum of `m(u)`: the wall `μ_i − μ_j = ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reflection {
    pub m: GroupElem,
    pub root: (usize, usize),
    pub ell: LambdaVal,
}

/// `1/s`, exact for monomials and expanded [`REFLECTION_EXPANSION`] below
/// the leading exponent otherwise.
fn reciprocal(s: &PuiseuxElem) -> Result<PuiseuxElem> {
    let lead = match s.negval()? {
        LambdaVal::Finite(v) => v,
        LambdaVal::Bottom => return Err(Error::IdentityElement),
    };
    s.inv(&(-lead - rat_int(REFLECTION_EXPANSION)))
}

/// The lower root element `Id − s⁻¹·E_ji` with `m(u) = u′·u·u′`.
pub fn reflection_partner(u: &RootElem) -> Result<RootElem> {
    Ok(RootElem { n: u.n, i: u.j, j: u.i, s: -reciprocal(&u.s)? })
}

/// `m(u)`: the block `[[0, s], [−1/s, 0]]` at rows and columns `(i, j)`.
pub fn m_of(u: &RootElem) -> Result<Reflection> {
    if u.is_identity() {
        return Err(Error::IdentityElement);
    }
    let inv = reciprocal(&u.s)?;
    let mut m = SeriesMatrix::identity(u.n);
    m.set(u.i, u.i, PuiseuxElem::zero());
    m.set(u.j, u.j, PuiseuxElem::zero());
    m.set(u.i, u.j, u.s.clone());
    m.set(u.j, u.i, -inv);
    Ok(Reflection { m: GroupElem::new(m)?, root: (u.i, u.j), ell: phi(u)? })
}

/// Subsets of the building whose pointwise stabilizers have a matrix form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StabTarget {
    /// The base point `o`.
    PointO,
    /// The standard apartment.
    ApartmentPointwise,
    /// The fundamental chamber `C₀`.
    ChamberC0,
    /// The half-apartment `{μ_i − μ_j ≥ ℓ}`.
    HalfApt { i: usize, j: usize, ell: Rat },
}

fn is_zero_entry(e: &PuiseuxElem) -> Result<bool> {
    Ok(e.negval()?.is_bottom())
}

pub fn stab_predicates(g: &GroupElem, target: &StabTarget) -> Result<bool> {
    let n = g.n();
    let diag_units = || -> Result<bool> {
        for i in 0..n {
            if !g.get(i, i).is_unit()? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    match target {
        StabTarget::PointO => stab_o(g),
        StabTarget::ApartmentPointwise => {
            for i in 0..n {
                for j in 0..n {
                    if i != j && !is_zero_entry(g.get(i, j))? {
                        return Ok(false);
                    }
                }
            }
            diag_units()
        }
        StabTarget::ChamberC0 => {
            for i in 0..n {
                for j in 0..i {
                    if !is_zero_entry(g.get(i, j))? {
                        return Ok(false);
                    }
                }
            }
            Ok(diag_units()? && stab_o(g)?)
        }
        StabTarget::HalfApt { i, j, ell } => {
            if i == j || *i >= n || *j >= n {
                return Err(Error::Dimension(format!("({i}, {j}) is not a root position for n = {n}")));
            }
            for a in 0..n {
                for b in 0..n {
                    if a != b && (a, b) != (*i, *j) && !is_zero_entry(g.get(a, b))? {
                        return Ok(false);
                    }
                }
            }
            Ok(diag_units()? && g.get(*i, *j).negval()? <= LambdaVal::Finite(ell.clone()))
        }
    }
}

/// Truncation depths tried by [`mixed_iwasawa`], in steps below the
/// starting cutoff.
pub const IWASAWA_ATTEMPTS: i64 = 8;

/// `g = u·a·k` with `u` upper unipotent, `a = diag(t^μ)` and `k ∈ SL(n, O)`,
/// all with exact entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedIwasawa {
    pub u: GroupElem,
    pub a: GroupElem,
    pub k: GroupElem,
}

fn exact_part(x: &PuiseuxElem) -> PuiseuxElem {
    PuiseuxElem::from_terms(x.terms().to_vec(), None)
}

/// Upper unipotent `u` with `x ≈ u·D·uᵀ`, entries cut below `cutoff`.
fn udu_unipotent(x: &SeriesMatrix, cutoff: &Rat) -> Result<SeriesMatrix> {
    let n = x.n();
    let mut w = x.clone();
    let mut u = SeriesMatrix::identity(n);
    for c in (1..n).rev() {
        let piv = w.get(c, c).clone();
        for i in 0..c {
            u.set(i, c, exact_part(&w.get(i, c).div(&piv, cutoff)?));
        }
        for i in 0..c {
            for j in 0..c {
                let v = w.get(i, j) - &(&(u.get(i, c) * &piv) * u.get(j, c));
                w.set(i, j, v);
            }
        }
    }
    Ok(u)
}

/// Inverse of an upper unipotent matrix by back substitution.
fn unipotent_inverse(u: &SeriesMatrix) -> SeriesMatrix {
    let n = u.n();
    let mut inv = SeriesMatrix::identity(n);
    for j in 0..n {
        for i in (0..j).rev() {
            let mut s = PuiseuxElem::zero();
            for k in i + 1..=j {
                s = &s + &(u.get(i, k) * inv.get(k, j));
            }
            inv.set(i, j, -s);
        }
    }
    inv
}

/// Exact factorization `g = u·a·k` into the unipotent radical, the diagonal
/// torus and `SL(n, O)`.
///
/// `a` comes from the Iwasawa retraction of `g·o`, `u` from a `u·D·uᵀ`
/// splitting of `g·gᵀ` truncated at increasing depth, and `k = a⁻¹u⁻¹g` is
/// accepted once all its entries lie in `O`.
pub fn mixed_iwasawa(g: &GroupElem) -> Result<MixedIwasawa> {
    let n = g.n();
    let x = act(g, &SPDPoint::identity(n))?;
    let mu = retract_mu(&x)?;
    let mono = |sign: i64| {
        SeriesMatrix::diag(mu.iter().map(|m| PuiseuxElem::monomial(rat_int(1), m * rat_int(sign))).collect())
    };
    let (a, a_inv) = (mono(1), mono(-1));
    let mut spread = Rat::zero();
    for e in g.matrix().entries() {
        if let LambdaVal::Finite(v) = e.negval()? {
            spread = spread.max(num_traits::Signed::abs(&v));
        }
    }
    for attempt in 1..=IWASAWA_ATTEMPTS {
        let cutoff = -(&spread * rat_int(2) + rat_int(4 * attempt));
        let u = udu_unipotent(x.matrix(), &cutoff)?;
        let k = a_inv.mul(&unipotent_inverse(&u)).mul(g.matrix());
        let mut integral = true;
        for e in k.entries() {
            if !e.in_o()? {
                integral = false;
                break;
            }
        }
        if integral {
            return Ok(MixedIwasawa {
                u: GroupElem::new(u)?,
                a: GroupElem::new(a)?,
                k: GroupElem::new(k)?,
            });
        }
    }
    Err(Error::Precision(format!("no integral factor within {IWASAWA_ATTEMPTS} truncation depths")))
}
