//! Suites for the building axioms A1, A2, A3 (restricted), TI, A4 and EC.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::gen::{gen_borel, gen_group_elem, gen_mu, gen_normalizer, gen_point, gen_root_elem};
use super::sample::{chamber_points, depth_for, grid, points_in_set, rho, small_vec};
use super::{run, Record, Report, TrialConfig, TrialFn};
use crate::apartment::{apply_weyl, dist, wconvex_equal, ApartmentVec, HalfApartment, WConvexSet};
use crate::building::{apartment_overlap, chart_image_mu, trop, Overlap, RootElem};
use crate::error::{Error, Result};
use crate::rootsys::RootSystem;
use crate::symspace::{act, distance, equivalent, GroupElem, SPDPoint};
use crate::valfield::{rat_int, LambdaVal, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axiom {
    A1,
    A2,
    A3r,
    TI,
    A4,
    EC,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [Axiom::A1, Axiom::A2, Axiom::A3r, Axiom::TI, Axiom::A4, Axiom::EC];

    pub fn name(&self) -> &'static str {
        match self {
            Axiom::A1 => "A1",
            Axiom::A2 => "A2",
            Axiom::A3r => "A3r",
            Axiom::TI => "TI",
            Axiom::A4 => "A4",
            Axiom::EC => "EC",
        }
    }

    fn max_n(&self) -> usize {
        match self {
            Axiom::A2 | Axiom::EC => 4,
            _ => 5,
        }
    }

    pub fn trial_fn(&self, cfg: &TrialConfig) -> Result<TrialFn> {
        cfg.validate(self.max_n())?;
        Ok(match self {
            Axiom::A1 => trial_a1,
            Axiom::A2 => trial_a2,
            Axiom::A3r => trial_a3r,
            Axiom::TI => trial_ti,
            Axiom::A4 => trial_a4,
            Axiom::EC => trial_ec,
        })
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axiom {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Axiom::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown axiom {s}")))
    }
}

pub fn check_axiom(cfg: &TrialConfig, which: Axiom) -> Result<Report> {
    let f = which.trial_fn(cfg)?;
    run(cfg, which.name(), f)
}

pub(crate) fn strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

pub(crate) fn weyl_mu(w: &crate::apartment::AffineWeylElem, mu: &[Rat]) -> Result<Vec<Rat>> {
    Ok(apply_weyl(w, &ApartmentVec::from_mu(mu)?).mu())
}

fn apt(mu: &[Rat]) -> Result<SPDPoint> {
    SPDPoint::apartment_point(mu)
}

/// Chart `g` composed with `w` agrees with chart `g·n_w`.
fn trial_a1(cfg: &TrialConfig, rng: &mut ChaCha8Rng, rec: &mut Record) -> Result<Option<String>> {
    let g = gen_group_elem(cfg, rng);
    rec.put("g", &g);
    let (nw, w) = gen_normalizer(cfg, rng);
    rec.put("n_w", &nw);
    let gn = g.mul(&nw);
    let t = trop(&nw)?;
    for _ in 0..3 {
        let mu = small_vec(cfg.n, rng);
        let wmu = weyl_mu(&w, &mu)?;
        if chart_image_mu(&t, &mu)?.as_deref() != Some(&wmu[..]) {
            return Ok(Some(format!("n_w does not act as w at {:?}", strings(&mu))));
        }
        if !equivalent(&act(&gn, &apt(&mu)?)?, &act(&g, &apt(&wmu)?)?)? {
            return Ok(Some(format!("g·n_w and g∘w differ at {:?}", strings(&mu))));
        }
    }
    Ok(None)
}

fn draw_nonempty_overlap(
    cfg: &TrialConfig,
    rng: &mut ChaCha8Rng,
    rec: &mut Record,
) -> Result<Option<(GroupElem, WConvexSet, crate::apartment::AffineWeylElem)>> {
    for attempt in 0..500 {
        let g = gen_group_elem(cfg, rng);
        match apartment_overlap(&g)? {
            Overlap::Region { set, weyl } => {
                rec.put("g", &g);
                rec.put("attempt", attempt);
                return Ok(Some((g, set, weyl)));
            }
            Overlap::Empty => {
                // Empty overlaps must miss every sampled point.
                let t = trop(&g)?;
                for _ in 0..3 {
                    let mu = small_vec(cfg.n, rng);
                    if chart_image_mu(&t, &mu)?.is_some() {
                        rec.put("g", &g);
                        return Ok(None);
                    }
                }
            }
        }
    }
    Err(Error::Invalid("no chart with a nonempty overlap in 500 draws".into()))
}

/// Overlap coherence: few constraints, one affine Weyl element reproducing
/// every chart image, exact membership, and agreement with the symmetric
/// space on two points.
fn trial_a2(cfg: &TrialConfig, rng: &mut ChaCha8Rng, rec: &mut Record) -> Result<Option<String>> {
    let n = cfg.n;
    let rs = RootSystem::type_a(n - 1);
    let Some((g, set, weyl)) = draw_nonempty_overlap(cfg, rng, rec)? else {
        return Ok(Some("a sampled point maps into the apartment although the overlap is empty".into()));
    };
    if set.constraints.len() > n * (n - 1) {
        return Ok(Some(format!("{} constraints", set.constraints.len())));
    }
    let t = trop(&g)?;
    let inside = points_in_set(&rs, &set, 20, rng)?;
    for (k, mu) in inside.iter().enumerate() {
        let want = weyl_mu(&weyl, mu)?;
        match chart_image_mu(&t, mu)? {
            Some(nu) if nu == want => {}
            other => {
                return Ok(Some(format!(
                    "at {:?}: chart image {:?}, w gives {:?}",
                    strings(mu),
                    other.map(|v| strings(&v)),
                    strings(&want)
                )))
            }
        }
        if k < 2 && !equivalent(&act(&g, &apt(mu)?)?, &apt(&want)?)? {
            return Ok(Some(format!("symmetric space disagrees at {:?}", strings(mu))));
        }
    }
    for _ in 0..10 {
        let mu: Vec<Rat> = small_vec(n, rng).iter().map(|x| x * rat_int(2)).collect();
        let member = set.contains(&rs, &ApartmentVec::from_mu(&mu)?)?;
        if chart_image_mu(&t, &mu)?.is_some() != member {
            return Ok(Some(format!("membership mismatch at {:?}", strings(&mu))));
        }
    }
    Ok(None)
}

/// Two points of one chart: their distance is the apartment distance, and
/// it is the same when read in a second chart through the same points.
fn trial_a3r(cfg: &TrialConfig, rng: &mut ChaCha8Rng, rec: &mut Record) -> Result<Option<String>> {
    let n = cfg.n;
    let rs = RootSystem::type_a(n - 1);
    let h = gen_group_elem(cfg, rng);
    let mu = gen_mu(cfg, rng);
    rec.put("h", &h);
    rec.put("mu", strings(&mu));
    let x = act(&h, &SPDPoint::identity(n))?;
    let y = act(&h, &apt(&mu)?)?;
    let zero = ApartmentVec::zero(n - 1);
    let p = ApartmentVec::from_mu(&mu)?;
    let in_chart = dist(&rs, &zero, &p) * rat_int(2);
    let d = distance(&x, &y)?;
    if d != in_chart {
        return Ok(Some(format!("distance {d} but chart distance {in_chart}")));
    }
    let (nw, w) = gen_normalizer(cfg, rng);
    rec.put("n_w", &nw);
    let h2 = h.mul(&nw);
    let winv = w.inverse();
    let (x2, y2) = (apply_weyl(&winv, &zero), apply_weyl(&winv, &p));
    if act(&h2, &apt(&x2.mu())?)? != x || act(&h2, &apt(&y2.mu())?)? != y {
        return Ok(Some("second chart does not contain both points".into()));
    }
    if dist(&rs, &x2, &y2) * rat_int(2) != d {
        return Ok(Some("distance depends on the chart".into()));
    }
    Ok(None)
}

fn trial_ti(cfg: &TrialConfig, rng: &mut ChaCha8Rng, rec: &mut Record) -> Result<Option<String>> {
    let (x, y, z) = (gen_point(cfg, rng), gen_point(cfg, rng), gen_point(cfg, rng));
    rec.put("x", &x);
    rec.put("y", &y);
    rec.put("z", &z);
    let dxy = distance(&x, &y)?;
    let dyx = distance(&y, &x)?;
    let dyz = distance(&y, &z)?;
    let dxz = distance(&x, &z)?;
    if dxy != dyx {
        return Ok(Some(format!("d(x,y) = {dxy} but d(y,x) = {dyx}")));
    }
    if dxy < Rat::zero() || dyz < Rat::zero() || dxz < Rat::zero() {
        return Ok(Some("negative distance".into()));
    }
    if dxz > &dxy + &dyz {
        return Ok(Some(format!("d(x,z) = {dxz} > {dxy} + {dyz}")));
    }
    Ok(None)
}

/// Deep points of the fundamental sector for the element with tropical
/// matrix `t`.
fn deep_points(t: &crate::building::TropMatrix, n: usize) -> Vec<Vec<Rat>> {
    let depth = depth_for(t) * rat_int(2);
    let base: Vec<Rat> = rho(n).iter().map(|r| r * &depth).collect();
    chamber_points(n, &[Rat::zero(), rat_int(1), rat_int(3)])
        .into_iter()
        .map(|v| base.iter().zip(&v).map(|(b, d)| b + d).collect())
        .collect()
}

/// Sectors `s₀` and `g·s₀` with `g = b₁·n·b₂`: deep subsectors of both lie
/// in the chart `b₁`.
fn trial_a4(cfg: &TrialConfig, rng: &mut ChaCha8Rng, rec: &mut Record) -> Result<Option<String>> {
    let n = cfg.n;
    let b1 = gen_borel(cfg, rng);
    let (nw, _) = gen_normalizer(cfg, rng);
    let b2 = gen_borel(cfg, rng);
    let g = b1.mul(&nw).mul(&b2);
    rec.put("b1", &b1);
    rec.put("n", &nw);
    rec.put("b2", &b2);
    let b1_inv = b1.inverse();
    let t1 = trop(&b1_inv)?;
    for mu in deep_points(&t1, n) {
        if chart_image_mu(&t1, &mu)?.is_none() {
            return Ok(Some(format!("s₀ point {:?} is outside the common chart", strings(&mu))));
        }
    }
    let rel = b1_inv.mul(&g);
    let t2 = trop(&rel)?;
    let mut checked = false;
    for mu in deep_points(&t2, n) {
        let Some(nu) = chart_image_mu(&t2, &mu)? else {
            return Ok(Some(format!("g·s₀ point {:?} is outside the common chart", strings(&mu))));
        };
        if !checked {
            checked = true;
            if !equivalent(&act(&g, &apt(&mu)?)?, &act(&b1, &apt(&nu)?)?)? {
                return Ok(Some("chart coordinates disagree with the symmetric space".into()));
            }
        }
    }
    Ok(None)
}

/// Exchange condition for a root element `u` and `h = Id + s⁻¹E_ji`: the
/// chart `h` meets the standard chart in `H⁻`, the chart `u` in `H⁺`, and
/// these two pieces cover it and meet along the wall.
fn trial_ec(cfg: &TrialConfig, rng: &mut ChaCha8Rng, rec: &mut Record) -> Result<Option<String>> {
    let n = cfg.n;
    let rs = RootSystem::type_a(n - 1);
    let u = gen_root_elem(cfg, rng);
    rec.put("u", u.group_elem());
    let ell = match u.s.negval()? {
        LambdaVal::Finite(l) => l,
        LambdaVal::Bottom => return Err(Error::IdentityElement),
    };
    let (i, j) = (u.i, u.j);
    let inv = u.s.inv(&Rat::zero())?;
    let h = RootElem::new(n, j, i, inv)?.group_elem();
    let ug = u.group_elem();
    let rel = ug.inverse().mul(&h);
    let plus = WConvexSet { constraints: vec![HalfApartment::diff(&rs, i, j, ell.clone())] };
    let minus = WConvexSet { constraints: vec![HalfApartment::diff(&rs, j, i, -ell.clone())] };
    let expect = [(&ug, &plus, "f1 ∩ f2"), (&h, &minus, "f1 ∩ f3"), (&rel, &plus, "f3 ∩ f2")];
    for (g, want, name) in expect {
        match apartment_overlap(g)? {
            Overlap::Region { set, .. } if wconvex_equal(&rs, &set, want)? => {}
            other => return Ok(Some(format!("{name} is {other:?}"))),
        }
    }
    let (t13, t23, t21) = (trop(&h)?, trop(&rel)?, trop(&ug.inverse())?);
    for mu in grid(n, 5, 2) {
        let gap = &mu[i] - &mu[j];
        let in1 = chart_image_mu(&t13, &mu)?;
        let in2 = chart_image_mu(&t23, &mu)?.is_some();
        if in1.is_some() != (gap <= ell) || in2 != (gap >= ell) {
            return Ok(Some(format!("f3 point {:?} is misclassified", strings(&mu))));
        }
        if let Some(nu) = in1 {
            // a point of f3 ∩ f1 is also in f2 only on the wall
            let shared = chart_image_mu(&t21, &nu)?.is_some();
            if shared != (gap == ell) {
                return Ok(Some(format!("symmetric difference fails at {:?}", strings(&mu))));
            }
        }
    }
    Ok(None)
}
