//! Seeded generators of exact test data. Every group element is built as a
//! product of factors whose determinant is exactly one.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use super::TrialConfig;
use crate::apartment::{AffineWeylElem, ApartmentVec};
use crate::building::RootElem;
use crate::matrix::{RatMatrix, SeriesMatrix};
use crate::rootsys::RootSystem;
use crate::symspace::{act, GroupElem, SPDPoint};
use crate::valfield::{rat, PuiseuxElem, Rat};

/// A random exponent `p/q` with `q ≤ exponent_denominator_bound` and
/// `|p/q| ≤ exponent_magnitude_bound`.
pub fn gen_exponent(cfg: &TrialConfig, rng: &mut impl Rng) -> Rat {
    let q = rng.gen_range(1..=cfg.exponent_denominator_bound as i64);
    let m = cfg.exponent_magnitude_bound * q;
    rat(rng.gen_range(-m..=m), q)
}

/// A random exponent that is at most zero.
pub fn gen_exponent_nonpos(cfg: &TrialConfig, rng: &mut impl Rng) -> Rat {
    let q = rng.gen_range(1..=cfg.exponent_denominator_bound as i64);
    rat(-rng.gen_range(0..=cfg.exponent_magnitude_bound * q), q)
}

/// A random exponent that is strictly negative.
pub fn gen_exponent_neg(cfg: &TrialConfig, rng: &mut impl Rng) -> Rat {
    let q = rng.gen_range(1..=cfg.exponent_denominator_bound as i64);
    rat(-rng.gen_range(1..=(cfg.exponent_magnitude_bound * q).max(1)), q)
}

/// A small nonzero rational coefficient.
pub fn gen_coeff(rng: &mut impl Rng) -> Rat {
    let num = *[-3, -2, -1, 1, 2, 3].choose(rng).expect("nonempty");
    rat(num, rng.gen_range(1..=2))
}

pub fn gen_monomial(cfg: &TrialConfig, rng: &mut impl Rng) -> PuiseuxElem {
    PuiseuxElem::monomial(gen_coeff(rng), gen_exponent(cfg, rng))
}

/// A sum-zero coordinate vector with entries on the exponent lattice.
pub fn gen_mu(cfg: &TrialConfig, rng: &mut impl Rng) -> Vec<Rat> {
    let n = cfg.n;
    let mut mu: Vec<Rat> = (0..n - 1).map(|_| gen_exponent(cfg, rng)).collect();
    let last = -mu.iter().fold(Rat::zero(), |a, b| a + b);
    mu.push(last);
    mu
}

fn unipotent(n: usize, upper: bool, mut entry: impl FnMut() -> Option<PuiseuxElem>) -> SeriesMatrix {
    let mut m = SeriesMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            if (upper && i < j) || (!upper && i > j) {
                if let Some(e) = entry() {
                    m.set(i, j, e);
                }
            }
        }
    }
    m
}

/// `diag(c_1 t^{e_1}, …)` with `Π c_i = 1` and `Σ e_i = 0`.
fn diagonal(n: usize, mut coeff: impl FnMut() -> Rat, mut exp: impl FnMut() -> Rat) -> SeriesMatrix {
    let mut cs: Vec<Rat> = (0..n - 1).map(|_| coeff()).collect();
    let mut es: Vec<Rat> = (0..n - 1).map(|_| exp()).collect();
    let prod = cs.iter().fold(Rat::one(), |a, b| a * b);
    let sum = es.iter().fold(Rat::zero(), |a, b| a + b);
    cs.push(prod.recip());
    es.push(-sum);
    SeriesMatrix::diag(cs.into_iter().zip(es).map(|(c, e)| PuiseuxElem::monomial(c, e)).collect())
}

/// Rational orthogonal matrix `(I − S)(I + S)⁻¹` for a random skew `S`.
#[allow(clippy::needless_range_loop)]
pub fn gen_orthogonal(n: usize, rng: &mut impl Rng) -> RatMatrix {
    let mut s = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rat(rng.gen_range(-2..=2), rng.gen_range(1..=2));
            s[j][i] = -v.clone();
            s[i][j] = v;
        }
    }
    let minus = RatMatrix::from_fn(n, |i, j| if i == j { Rat::one() } else { Rat::zero() } - &s[i][j]);
    let plus = RatMatrix::from_fn(n, |i, j| if i == j { Rat::one() } else { Rat::zero() } + &s[i][j]);
    minus.mul(&plus.inverse().expect("I + S is invertible for skew S"))
}

fn product(n: usize, factors: Vec<SeriesMatrix>) -> GroupElem {
    let m = factors.into_iter().fold(SeriesMatrix::identity(n), |acc, f| acc.mul(&f));
    GroupElem::new(m).expect("factors have determinant one")
}

/// A random product of `factor_count` factors, each upper or lower
/// unipotent with monomial entries, a diagonal monomial, or rational
/// orthogonal.
pub fn gen_group_elem(cfg: &TrialConfig, rng: &mut impl Rng) -> GroupElem {
    let n = cfg.n;
    let factors = (0..cfg.factor_count)
        .map(|_| match rng.gen_range(0..4) {
            0 | 1 => {
                let upper = rng.gen_bool(0.5);
                unipotent(n, upper, || rng.gen_bool(0.6).then(|| gen_monomial(cfg, rng)))
            }
            2 => {
                let cs: Vec<Rat> = (0..n).map(|_| gen_coeff(rng)).collect();
                let es: Vec<Rat> = (0..n).map(|_| gen_exponent(cfg, rng)).collect();
                let (mut ci, mut ei) = (cs.into_iter(), es.into_iter());
                diagonal(n, || ci.next().expect("enough"), || ei.next().expect("enough"))
            }
            _ => SeriesMatrix::from_rational(&gen_orthogonal(n, rng)),
        })
        .collect();
    product(n, factors)
}

/// `g·Id` for a random `g`.
pub fn gen_point(cfg: &TrialConfig, rng: &mut impl Rng) -> SPDPoint {
    let g = gen_group_elem(cfg, rng);
    act(&g, &SPDPoint::identity(cfg.n)).expect("matching sizes")
}

pub fn gen_root_elem(cfg: &TrialConfig, rng: &mut impl Rng) -> RootElem {
    let n = cfg.n;
    let i = rng.gen_range(0..n);
    let j = (i + rng.gen_range(1..n)) % n;
    RootElem::new(n, i, j, gen_monomial(cfg, rng)).expect("valid position")
}

/// An element of `SL(n, O)`: unipotent factors with exponents `≤ 0`,
/// diagonal factors with constant entries, and orthogonal factors.
pub fn gen_integral_elem(cfg: &TrialConfig, rng: &mut impl Rng) -> GroupElem {
    let n = cfg.n;
    let count = cfg.factor_count.max(1);
    let factors = (0..count)
        .map(|_| match rng.gen_range(0..4) {
            0 | 1 => {
                let upper = rng.gen_bool(0.5);
                unipotent(n, upper, || {
                    rng.gen_bool(0.6).then(|| PuiseuxElem::monomial(gen_coeff(rng), gen_exponent_nonpos(cfg, rng)))
                })
            }
            2 => {
                let cs: Vec<Rat> = (0..n).map(|_| gen_coeff(rng)).collect();
                let mut ci = cs.into_iter();
                diagonal(n, || ci.next().expect("enough"), Rat::zero)
            }
            _ => SeriesMatrix::from_rational(&gen_orthogonal(n, rng)),
        })
        .collect();
    product(n, factors)
}

/// An element with residue `Id`: unipotent factors with negative exponents.
pub fn gen_kernel_elem(cfg: &TrialConfig, rng: &mut impl Rng) -> GroupElem {
    let n = cfg.n;
    let factors = (0..cfg.factor_count.max(1))
        .map(|_| {
            let upper = rng.gen_bool(0.5);
            unipotent(n, upper, || {
                rng.gen_bool(0.6).then(|| PuiseuxElem::monomial(gen_coeff(rng), gen_exponent_neg(cfg, rng)))
            })
        })
        .collect();
    product(n, factors)
}

/// An element of `U(O)·A(O)·M`: upper unipotent with exponents `≤ 0`
/// times a constant diagonal.
pub fn gen_borel_integral(cfg: &TrialConfig, rng: &mut impl Rng) -> GroupElem {
    let n = cfg.n;
    let u = unipotent(n, true, || {
        rng.gen_bool(0.7).then(|| PuiseuxElem::monomial(gen_coeff(rng), gen_exponent_nonpos(cfg, rng)))
    });
    let cs: Vec<Rat> = (0..n).map(|_| gen_coeff(rng)).collect();
    let mut ci = cs.into_iter();
    product(n, vec![u, diagonal(n, || ci.next().expect("enough"), Rat::zero)])
}

/// An element of the upper Borel subgroup over the series field.
pub fn gen_borel(cfg: &TrialConfig, rng: &mut impl Rng) -> GroupElem {
    let n = cfg.n;
    let u = unipotent(n, true, || rng.gen_bool(0.7).then(|| gen_monomial(cfg, rng)));
    let cs: Vec<Rat> = (0..n).map(|_| gen_coeff(rng)).collect();
    let es: Vec<Rat> = (0..n).map(|_| gen_exponent(cfg, rng)).collect();
    let (mut ci, mut ei) = (cs.into_iter(), es.into_iter());
    product(n, vec![u, diagonal(n, || ci.next().expect("enough"), || ei.next().expect("enough"))])
}

/// A constant diagonal matrix with entries `±1` and determinant one.
pub fn gen_sign_diag(n: usize, rng: &mut impl Rng) -> GroupElem {
    let mut signs: Vec<i64> = (0..n).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    if signs.iter().product::<i64>() < 0 {
        signs[0] = -signs[0];
    }
    GroupElem::new(SeriesMatrix::diag(signs.into_iter().map(|s| PuiseuxElem::constant(rat(s, 1))).collect()))
        .expect("determinant one")
}

/// Monomial matrix `diag(t^c)·P_σ` (one row negated when `σ` is odd)
/// realizing `μ ↦ c + σμ` with `(σμ)_i = μ_σ(i)`.
pub fn normalizer_elem(perm: &[usize], c: &[Rat]) -> GroupElem {
    let n = perm.len();
    let mut inversions = 0;
    for a in 0..n {
        for b in a + 1..n {
            if perm[a] > perm[b] {
                inversions += 1;
            }
        }
    }
    let mut m = SeriesMatrix::from_fn(n, |_, _| PuiseuxElem::zero());
    for i in 0..n {
        let sign = if i == 0 && inversions % 2 == 1 { -Rat::one() } else { Rat::one() };
        m.set(i, perm[i], PuiseuxElem::monomial(sign, c[i].clone()));
    }
    GroupElem::new(m).expect("determinant one")
}

/// A random affine Weyl element and its monomial representative.
pub fn gen_normalizer(cfg: &TrialConfig, rng: &mut impl Rng) -> (GroupElem, AffineWeylElem) {
    let n = cfg.n;
    let rs = RootSystem::type_a(n - 1);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let c = gen_mu(cfg, rng);
    let w = AffineWeylElem {
        translation: ApartmentVec::from_mu(&c).expect("sum zero"),
        spherical: rs.weyl_from_perm(&perm),
    };
    (normalizer_elem(&perm, &c), w)
}
