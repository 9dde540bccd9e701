//! The residue building at `o` and the building at infinity, exposed through
//! stabilizer predicates and sampled corroboration.
//!
//! The residue field of the representable subfield is ℚ: the residue of an
//! element of `O` is its `t⁰` coefficient.

use num_traits::{One, Zero};

use crate::building::{chart_image_mu, trop, TropMatrix};
use crate::error::{Error, Result};
use crate::matrix::{RatMatrix, SeriesMatrix};
use crate::symspace::GroupElem;
use crate::valfield::{rat, rat_int, LambdaVal, Rat};

/// Germ radii tried by [`germ_sample_equal`].
pub const GERM_RADII: [(i64, i64); 3] = [(1, 1), (1, 2), (1, 4)];

/// Entrywise reduction of an element of `SL(n, O)` to `SL(n, ℚ)`.
pub fn reduce(g: &GroupElem) -> Result<RatMatrix> {
    let n = g.n();
    let mut vals = Vec::with_capacity(n * n);
    for e in g.matrix().entries() {
        if !e.in_o()? {
            return Err(Error::NotInRing);
        }
        vals.push(e.residue()?);
    }
    Ok(RatMatrix::from_fn(n, |i, j| vals[i * n + j].clone()))
}

/// Germ at `o` of the sector `g·s₀`, for `g ∈ SL(n, O)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorGerm {
    pub g: GroupElem,
}

/// Class of the sector `g·s₀` under parallelism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorAtInfinity {
    pub g: GroupElem,
}

fn relative(g1: &GroupElem, g2: &GroupElem) -> Result<GroupElem> {
    if g1.n() != g2.n() {
        return Err(Error::Dimension("charts of different size".into()));
    }
    Ok(g2.inverse().mul(g1))
}

/// The germs agree iff `reduce(g₂⁻¹g₁)` lies in the upper Borel subgroup.
pub fn germ_equal(s1: &SectorGerm, s2: &SectorGerm) -> Result<bool> {
    Ok(reduce(&relative(&s1.g, &s2.g)?)?.is_upper_triangular())
}

/// Fixed interior directions of `C₀`, scaled to `Σ|μ_i| = 1`.
pub fn chamber_directions(n: usize) -> Vec<Vec<Rat>> {
    let mut out = Vec::new();
    // ρ and a few skewed interior vectors, built from strictly decreasing
    // integer sequences
    let bases: [fn(usize) -> i64; 3] = [|k| -2 * k as i64, |k| -((k * k) as i64), |k| -((3 * k + k * k) as i64)];
    for f in bases {
        let raw: Vec<i64> = (0..n).map(f).collect();
        let mean = rat(raw.iter().sum::<i64>(), n as i64);
        let mu: Vec<Rat> = raw.iter().map(|&v| rat_int(v) - &mean).collect();
        let total = mu.iter().fold(Rat::zero(), |a, b| a + num_traits::Signed::abs(b));
        out.push(mu.iter().map(|m| m / &total).collect());
    }
    out
}

/// Sample points of `C₀` with `Σ|μ_i| ≤ ε`.
pub fn germ_samples(n: usize, eps: &Rat) -> Vec<Vec<Rat>> {
    let mut out = Vec::new();
    for d in chamber_directions(n) {
        for scale in [rat(1, 1), rat(1, 2), rat(1, 3)] {
            let s = eps * scale;
            out.push(d.iter().map(|x| x * &s).collect());
        }
    }
    out
}

fn fixes(t: &TropMatrix, mu: &[Rat]) -> Result<bool> {
    Ok(chart_image_mu(t, mu)?.as_deref() == Some(mu))
}

/// Sampled germ comparison: for some radius in [`GERM_RADII`], the relative
/// element fixes every sample point of `C₀` within that radius.
pub fn germ_sample_equal(s1: &SectorGerm, s2: &SectorGerm) -> Result<bool> {
    let h = relative(&s1.g, &s2.g)?;
    let t = trop(&h)?;
    for (p, q) in GERM_RADII {
        let eps = rat(p, q);
        let mut all = true;
        for mu in germ_samples(h.n(), &eps) {
            if !fixes(&t, &mu)? {
                all = false;
                break;
            }
        }
        if all {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Constant relating kernel elements to the radius of the ball they fix.
pub fn kernel_constant(n: usize) -> Rat {
    rat(n as i64 - 1, n as i64)
}

/// For `g` with `reduce(g) = Id`: a radius `λ` such that `g` fixes every
/// apartment point within distance `λ` of `o`, from
/// `negval(g − Id) ≤ −2C′λ`. `None` when `g = Id`.
pub fn kernel_radius(g: &GroupElem) -> Result<Option<Rat>> {
    let n = g.n();
    if reduce(g)? != RatMatrix::identity(n) {
        return Err(Error::Invalid("residue is not the identity".into()));
    }
    let diff = g.matrix().sub(&SeriesMatrix::identity(n));
    let mut worst = LambdaVal::Bottom;
    for e in diff.entries() {
        worst = LambdaVal::max_of(worst, e.negval()?);
    }
    Ok(worst.finite().map(|m| -m / (rat_int(2) * kernel_constant(n))))
}

/// `h ∈ SL(n, ℚ)` carrying the germ of `s1` to that of `s2`, found as
/// `reduce(g₂)·reduce(g₁)⁻¹` and checked with [`germ_equal`].
pub fn strong_transitivity_witness(s1: &SectorGerm, s2: &SectorGerm) -> Result<RatMatrix> {
    let (r1, r2) = (reduce(&s1.g)?, reduce(&s2.g)?);
    let r1_inv = r1.inverse().ok_or(Error::Invalid("singular residue".into()))?;
    let h = r2.mul(&r1_inv);
    let lifted = GroupElem::from_rational(&h)?;
    let moved = SectorGerm { g: lifted.mul(&s1.g) };
    if !germ_equal(&moved, s2)? {
        return Err(Error::Invalid("residue solution does not match germs".into()));
    }
    Ok(h)
}

/// The sectors are parallel iff `g₂⁻¹g₁` is upper triangular.
pub fn infinity_equal(c1: &SectorAtInfinity, c2: &SectorAtInfinity) -> Result<bool> {
    let h = relative(&c1.g, &c2.g)?;
    let n = h.n();
    for i in 0..n {
        for j in 0..i {
            if !h.get(i, j).negval()?.is_bottom() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Sampled parallelism: deep points `Kρ + v` of the fundamental sector are
/// carried by `g₂⁻¹g₁` into the standard apartment by one common
/// translation, so a subsector of `s₀` is mapped onto a translate of a
/// subsector of `s₀`. Returns that translation when it exists.
pub fn infinity_witness(c1: &SectorAtInfinity, c2: &SectorAtInfinity) -> Result<Option<Vec<Rat>>> {
    let h = relative(&c1.g, &c2.g)?;
    let n = h.n();
    let t = trop(&h)?;
    let finite: Vec<&Rat> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter_map(|(i, j)| t.get(i, j).finite()).collect();
    let spread = match (finite.iter().max(), finite.iter().min()) {
        (Some(hi), Some(lo)) => *hi - *lo,
        _ => Rat::zero(),
    };
    let depth = spread + Rat::one();
    let dirs = chamber_directions(n);
    let base: Vec<Rat> = dirs[0].iter().map(|d| d * &depth * rat_int(4 * n as i64)).collect();
    let mut shift: Option<Vec<Rat>> = None;
    for d in dirs.iter() {
        for k in 0..3 {
            let mu: Vec<Rat> = base.iter().zip(d).map(|(b, v)| b + v * &depth * rat_int(k)).collect();
            let Some(nu) = chart_image_mu(&t, &mu)? else {
                return Ok(None);
            };
            let c: Vec<Rat> = nu.iter().zip(&mu).map(|(a, b)| a - b).collect();
            match &shift {
                None => shift = Some(c),
                Some(prev) if *prev == c => {}
                Some(_) => return Ok(None),
            }
        }
    }
    Ok(shift)
}
