//! Suites for stabilizer, retraction, residue and infinity statements.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::axioms::strings;
use super::gen::{
    gen_borel, gen_borel_integral, gen_coeff, gen_exponent, gen_group_elem, gen_integral_elem, gen_kernel_elem,
    gen_mu, gen_normalizer, gen_point, gen_sign_diag,
};
use super::sample::{chamber_points, chamber_representatives, depth_for, small_vec};
use super::{run, Record, Report, TrialConfig, TrialFn};
use crate::apartment::{dist, ApartmentVec};
use crate::boundaries::{
    germ_equal, germ_sample_equal, infinity_equal, infinity_witness, kernel_radius, reduce,
    strong_transitivity_witness, SectorAtInfinity, SectorGerm,
};
use crate::building::{chart_image_mu, stab_o, stab_predicates, trop, RootElem, StabTarget, TropMatrix};
use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::rootsys::RootSystem;
use crate::symspace::{act, distance, equivalent, retract_mu, GroupElem, SPDPoint};
use crate::valfield::{rat, rat_int, PuiseuxElem, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Theorem {
    StabO,
    StabA,
    StabC0,
    HalfAptStab,
    Retract,
    GermBorel,
    InfinityBorel,
    IwasawaO,
}

impl Theorem {
    pub const ALL: [Theorem; 8] = [
        Theorem::StabO,
        Theorem::StabA,
        Theorem::StabC0,
        Theorem::HalfAptStab,
        Theorem::Retract,
        Theorem::GermBorel,
        Theorem::InfinityBorel,
        Theorem::IwasawaO,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Theorem::StabO => "Stab_o",
            Theorem::StabA => "Stab_A",
            Theorem::StabC0 => "Stab_C0",
            Theorem::HalfAptStab => "HalfAptStab",
            Theorem::Retract => "Retract",
            Theorem::GermBorel => "GermBorel",
            Theorem::InfinityBorel => "InfinityBorel",
            Theorem::IwasawaO => "IwasawaO",
        }
    }

    pub fn trial_fn(&self, cfg: &TrialConfig) -> Result<TrialFn> {
        cfg.validate(5)?;
        Ok(match self {
            Theorem::StabO => trial_stab_o,
            Theorem::StabA => trial_stab_a,
            Theorem::StabC0 => trial_stab_c0,
            Theorem::HalfAptStab => trial_half_apt,
            Theorem::Retract => trial_retract,
            Theorem::GermBorel => trial_germ,
            Theorem::InfinityBorel => trial_infinity,
            Theorem::IwasawaO => trial_iwasawa,
        })
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown theorem {s}")))
    }
}

pub fn check_theorem(cfg: &TrialConfig, which: Theorem) -> Result<Report> {
    let f = which.trial_fn(cfg)?;
    run(cfg, which.name(), f)
}

fn fixes_all(t: &TropMatrix, points: &[Vec<Rat>]) -> Result<Option<Vec<Rat>>> {
    for mu in points {
        if chart_image_mu(t, mu)?.as_deref() != Some(&mu[..]) {
            return Ok(Some(mu.clone()));
        }
    }
    Ok(None)
}

fn verdict(name: &str, predicate: bool, moved: Option<Vec<Rat>>) -> Option<String> {
    match (predicate, moved) {
        (true, Some(mu)) => Some(format!("{name} holds but {:?} is moved", strings(&mu))),
        (false, None) => Some(format!("{name} fails but every sample is fixed")),
        _ => None,
    }
}

/// `stab_o(g)` iff `d(o, g·o) = 0`.
fn trial_stab_o(cfg: &TrialConfig, rng: &mut ChaCha8Rng, rec: &mut Record) -> Result<Option<String>> {
    let g = if rng.gen_bool(0.5) { gen_integral_elem(cfg, rng) } else { gen_group_elem(cfg, rng) };
    rec.put("g", &g);
    let o = SPDPoint::identity(cfg.n);
    let pred = stab_o(&g)?;
    let d = distance(&o, &act(&g, &o)?)?;
    Ok((pred != d.is_zero()).then(|| format!("stab_o = {pred} but d(o, g·o) = {d}")))
}

/// Pointwise stabilizer of the standard apartment: diagonal with unit
/// entries.
fn trial_stab_a(cfg: &TrialConfig, rng: &mut ChaCha8Rng, rec: &mut Record) -> Result<Option<String>> {
    let n = cfg.n;
    let g = match rng.gen_range(0..4) {
        0 => {
            let d = gen_sign_diag(n, rng);
            let cs: Vec<Rat> = (0..n - 1).map(|_| gen_coeff(rng)).collect();
            let prod = cs.iter().fold(rat(1, 1), |a, b| a * b);
            let mut entries: Vec<PuiseuxElem> = cs.into_iter().map(PuiseuxElem::constant).collect();
            entries.push(PuiseuxElem::constant(prod.recip()));
            let unit = GroupElem::new(crate::matrix::SeriesMatrix::diag(entries))?;
            d.mul(&unit)
        }
        1 => gen_integral_elem(cfg, rng),
        2 => gen_borel(cfg, rng),
        _ => gen_group_elem(cfg, rng),
    };
    rec.put("g", &g);
    let t = trop(&g)?;
    let mut points = chamber_representatives(n, &(depth_for(&t) * rat_int(2)));
    points.extend((0..3).map(|_| small_vec(n, rng)));
    let pred = stab_predicates(&g, &StabTarget::ApartmentPointwise)?;
    let moved = fixes_all(&t, &points)?;
    if pred && moved.is_none() && !equivalent(&act(&g, &SPDPoint::apartment_point(&points[1])?)?, &SPDPoint::apartment_point(&points[1])?)? {
        return Ok(Some("symmetric space sees a moved point".into()));
    }
    Ok(verdict("ApartmentPointwise", pred, moved))
}

/// Pointwise stabilizer of `C₀`: upper triangular over `O` with unit
/// diagonal.
fn trial_stab_c0(cfg: &TrialConfig, rng: &mut ChaCha8Rng, rec: &mut Record) -> Result<Option<String>> {
    let n = cfg.n;
    let g = match rng.gen_range(0..4) {
        0 | 1 => gen_borel_integral(cfg, rng),
        2 => gen_integral_elem(cfg, rng),
        _ => gen_group_elem(cfg, rng),
    };
    rec.put("g", &g);
    let t = trop(&g)?;
    let depth = depth_for(&t);
    let points = chamber_points(n, &[Rat::zero(), rat(1, 2), rat_int(1), depth.clone(), depth * rat_int(3)]);
    let pred = stab_predicates(&g, &StabTarget::ChamberC0)?;
    Ok(verdict("ChamberC0", pred, fixes_all(&t, &points)?))
}

/// Pointwise stabilizer of `{μ_i − μ_j ≥ ℓ}`.
fn trial_half_apt(cfg: &TrialConfig, rng: &mut ChaCha8Rng, rec: &mut Record) -> Result<Option<String>> {
    let n = cfg.n;
    let i = rng.gen_range(0..n);
    let j = (i + rng.gen_range(1..n)) % n;
    let ell = gen_exponent(cfg, rng);
    let root_elem = |exp: Rat, rng: &mut ChaCha8Rng| -> GroupElem {
        RootElem::new(n, i, j, PuiseuxElem::monomial(gen_coeff(rng), exp)).expect("valid").group_elem()
    };
    let g = match rng.gen_range(0..5) {
        0 | 1 => {
            let drop = rat(rng.gen_range(0..=4), 2);
            root_elem(&ell - drop, rng).mul(&gen_sign_diag(n, rng))
        }
        2 => root_elem(&ell + rat(1, 2), rng),
        3 => {
            let base = root_elem(ell.clone(), rng);
            let (a, b) = loop {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                if a != b && (a, b) != (i, j) {
                    break (a, b);
                }
            };
            let extra = RootElem::new(n, a, b, PuiseuxElem::monomial(gen_coeff(rng), gen_exponent(cfg, rng)))?;
            base.mul(&extra.group_elem())
        }
        _ => gen_integral_elem(cfg, rng),
    };
    rec.put("g", &g);
    rec.put("half", (i, j, ell.to_string()));
    let t = trop(&g)?;
    let depth = depth_for(&t) + ell.clone().max(-ell.clone()) + rat_int(1);
    let mut points = Vec::new();
    for mut p in chamber_representatives(n, &(depth * rat_int(2))).into_iter().chain((0..4).map(|_| small_vec(n, rng))) {
        let gap = &p[i] - &p[j];
        if gap < ell {
            let half = (&ell - &gap) / rat_int(2);
            p[i] += &half;
            p[j] -= &half;
        }
        points.push(p);
    }
    let pred = stab_predicates(&g, &StabTarget::HalfApt { i, j, ell })?;
    Ok(verdict("HalfApt", pred, fixes_all(&t, &points)?))
}

/// The Iwasawa retraction does not increase distances and fixes the
/// standard apartment.
fn trial_retract(cfg: &TrialConfig, rng: &mut ChaCha8Rng, rec: &mut Record) -> Result<Option<String>> {
    let (x, y) = (gen_point(cfg, rng), gen_point(cfg, rng));
    rec.put("x", &x);
    rec.put("y", &y);
    let (rx, ry) = (retract_mu(&x)?, retract_mu(&y)?);
    let d = distance(&x, &y)?;
    let dr = distance(&SPDPoint::apartment_point(&rx)?, &SPDPoint::apartment_point(&ry)?)?;
    if dr > d {
        return Ok(Some(format!("d(ρx, ρy) = {dr} > d(x, y) = {d}")));
    }
    let mu = gen_mu(cfg, rng);
    let back = retract_mu(&SPDPoint::apartment_point(&mu)?)?;
    Ok((back != mu).then(|| format!("ρ moves apartment point {:?}", strings(&mu))))
}

/// The germ of `g·s₀` equals that of `s₀` iff the residue of `g` is upper
/// triangular; transitivity on germs through the residue group; the
/// kernel of reduction fixes a ball around `o`.
fn trial_germ(cfg: &TrialConfig, rng: &mut ChaCha8Rng, rec: &mut Record) -> Result<Option<String>> {
    let n = cfg.n;
    let g = match rng.gen_range(0..4) {
        0 => gen_integral_elem(cfg, rng),
        1 => gen_borel_integral(cfg, rng),
        2 => gen_kernel_elem(cfg, rng),
        _ => gen_kernel_elem(cfg, rng).mul(&gen_borel_integral(cfg, rng)),
    };
    rec.put("g", &g);
    let s1 = SectorGerm { g: g.clone() };
    let s0 = SectorGerm { g: GroupElem::identity(n) };
    let pred = germ_equal(&s1, &s0)?;
    let sampled = germ_sample_equal(&s1, &s0)?;
    if pred != sampled {
        return Ok(Some(format!("Borel predicate {pred}, sampled germs {sampled}")));
    }
    let other = gen_integral_elem(cfg, rng);
    rec.put("other", &other);
    let h = strong_transitivity_witness(&s1, &SectorGerm { g: other })?;
    if h.det() != rat(1, 1) {
        return Ok(Some("transitivity witness has determinant other than 1".into()));
    }
    if reduce(&g)? == RatMatrix::identity(n) {
        if let Some(radius) = kernel_radius(&g)? {
            let rs = RootSystem::type_a(n - 1);
            let t = trop(&g)?;
            let zero = ApartmentVec::zero(n - 1);
            for p in chamber_representatives(n, &rat_int(1)).into_iter().skip(1) {
                let size = dist(&rs, &zero, &ApartmentVec::from_mu(&p)?);
                let scaled: Vec<Rat> = p.iter().map(|x| x * &radius / &size).collect();
                if chart_image_mu(&t, &scaled)?.as_deref() != Some(&scaled[..]) {
                    return Ok(Some(format!("kernel element moves {:?} within radius {radius}", strings(&scaled))));
                }
            }
        }
    }
    Ok(None)
}

/// Sectors are parallel iff the relative element is upper triangular.
fn trial_infinity(cfg: &TrialConfig, rng: &mut ChaCha8Rng, rec: &mut Record) -> Result<Option<String>> {
    let base = gen_group_elem(cfg, rng);
    let x = match rng.gen_range(0..4) {
        0 | 1 => gen_borel(cfg, rng),
        2 => gen_normalizer(cfg, rng).0.mul(&gen_borel(cfg, rng)),
        _ => gen_group_elem(cfg, rng),
    };
    rec.put("base", &base);
    rec.put("x", &x);
    let c1 = SectorAtInfinity { g: base.mul(&x) };
    let c2 = SectorAtInfinity { g: base };
    let pred = infinity_equal(&c1, &c2)?;
    let witness = infinity_witness(&c1, &c2)?.is_some();
    Ok((pred != witness).then(|| format!("upper-triangular predicate {pred}, subsector witness {witness}")))
}

/// Elements of `SL(n, O)` retract `o` to `o`.
fn trial_iwasawa(cfg: &TrialConfig, rng: &mut ChaCha8Rng, rec: &mut Record) -> Result<Option<String>> {
    let g = gen_integral_elem(cfg, rng);
    rec.put("g", &g);
    let mu = retract_mu(&act(&g, &SPDPoint::identity(cfg.n))?)?;
    Ok((!mu.iter().all(|m| m.is_zero())).then(|| format!("ρ(g·o) = {:?}", strings(&mu))))
}
