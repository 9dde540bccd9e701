//! Sample points of the apartment in sum-zero coordinates.

use num_traits::Zero;
use rand::Rng;

use crate::apartment::{wconvex_witness, ApartmentVec, WConvexSet};
use crate::building::TropMatrix;
use crate::error::Result;
use crate::rootsys::RootSystem;
use crate::valfield::{rat, rat_int, Rat};

/// All `μ` with `μ_0, …, μ_{n−2}` on `{k/den : |k/den| ≤ bound}` and the
/// last coordinate fixed by the sum; for `n ≥ 3` only `μ_0, μ_1` vary.
pub fn grid(n: usize, bound: i64, den: i64) -> Vec<Vec<Rat>> {
    let vals: Vec<Rat> = (-bound * den..=bound * den).map(|k| rat(k, den)).collect();
    let mut out = Vec::new();
    if n == 2 {
        for a in &vals {
            out.push(vec![a.clone(), -a.clone()]);
        }
        return out;
    }
    for a in &vals {
        for b in &vals {
            let mut mu = vec![Rat::zero(); n];
            mu[0] = a.clone();
            mu[1] = b.clone();
            mu[n - 1] = -(a + b);
            out.push(mu);
        }
    }
    out
}

/// A random sum-zero vector with small half-integer entries.
pub fn small_vec(n: usize, rng: &mut impl Rng) -> Vec<Rat> {
    let mut v: Vec<Rat> = (0..n - 1).map(|_| rat(rng.gen_range(-6..=6), 2)).collect();
    let last = -v.iter().fold(Rat::zero(), |a, b| a + b);
    v.push(last);
    v
}

/// `count` points of a nonempty W-convex set: a shortest-path witness moved
/// along random directions by the largest step in `{2, 1, 1/2, …, 1/64}`
/// that stays inside (or not at all).
pub fn points_in_set(rs: &RootSystem, set: &WConvexSet, count: usize, rng: &mut impl Rng) -> Result<Vec<Vec<Rat>>> {
    let Some(x0) = wconvex_witness(rs, set)? else {
        return Ok(Vec::new());
    };
    let base = x0.mu();
    let n = base.len();
    let mut out = vec![base.clone()];
    while out.len() < count {
        let v = small_vec(n, rng);
        let mut step = rat(2, 1);
        let mut chosen = base.clone();
        for _ in 0..8 {
            let cand: Vec<Rat> = base.iter().zip(&v).map(|(b, d)| b + d * &step).collect();
            if set.contains(rs, &ApartmentVec::from_mu(&cand)?)? {
                chosen = cand;
                break;
            }
            step /= rat_int(2);
        }
        out.push(chosen);
    }
    Ok(out)
}

/// Sum-zero `ρ = (n−1, n−3, …, 1−n)`.
pub fn rho(n: usize) -> Vec<Rat> {
    (0..n).map(|k| rat_int(n as i64 - 1 - 2 * k as i64)).collect()
}

/// A depth beyond which `ρ`-scaled points dominate every gap of `t`.
pub fn depth_for(t: &TropMatrix) -> Rat {
    let n = t.n();
    let finite: Vec<&Rat> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter_map(|(i, j)| t.get(i, j).finite()).collect();
    match (finite.iter().max(), finite.iter().min()) {
        (Some(hi), Some(lo)) => *hi - *lo + rat_int(1),
        _ => rat_int(1),
    }
}

/// `depth·ρ` permuted into every Weyl chamber, plus the origin.
pub fn chamber_representatives(n: usize, depth: &Rat) -> Vec<Vec<Rat>> {
    let r: Vec<Rat> = rho(n).iter().map(|x| x * depth).collect();
    let rs = RootSystem::type_a(n - 1);
    let mut out = vec![vec![Rat::zero(); n]];
    for w in rs.weyl_elements(usize::MAX).expect("type A") {
        let p = w.perm().expect("type A");
        out.push(p.iter().map(|&k| r[k].clone()).collect());
    }
    out
}

/// Points of the closed chamber `C₀` at several scales.
pub fn chamber_points(n: usize, scales: &[Rat]) -> Vec<Vec<Rat>> {
    let mut out = Vec::new();
    let dirs: Vec<Vec<Rat>> = vec![
        rho(n),
        (0..n).map(|k| if k == 0 { rat_int(n as i64 - 1) } else { rat_int(-1) }).collect(),
        (0..n).map(|k| if k == n - 1 { rat_int(1 - n as i64) } else { rat_int(1) }).collect(),
        (0..n).map(|k| rat_int(((n - 1 - k) * (n - 1 - k)) as i64) - rat((0..n).map(|m| (m * m) as i64).sum(), n as i64)).collect(),
    ];
    for s in scales {
        for d in &dirs {
            out.push(d.iter().map(|x| x * s).collect());
        }
    }
    out
}
