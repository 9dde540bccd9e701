//! Oracles shared by the integration tests. None of them go through the
//! tropical shortcut used by the library.

#![allow(dead_code)]

use std::collections::HashMap;

use lbldg_core::matrix::SeriesMatrix;
use lbldg_core::symspace::GroupElem;
use lbldg_core::valfield::{rat, rat_int, LambdaVal, PuiseuxElem, Rat};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

fn diag_monomials(mu: &[Rat]) -> SeriesMatrix {
    SeriesMatrix::diag(mu.iter().map(|m| PuiseuxElem::monomial(rat_int(1), m.clone())).collect())
}

/// All `ν` (sum zero, on the lattice `(1/den)ℤ`, `|ν_i| ≤ bound`) such that
/// `diag(t^{−ν})·g·diag(t^μ)` has every entry in `O`, found by search over
/// the actual series entries.
pub fn brute_chart_images(g: &GroupElem, mu: &[Rat]) -> Vec<Vec<Rat>> {
    let n = g.n();
    let ga = g.matrix().mul(&diag_monomials(mu));
    let mut den: i64 = 1;
    let mut bound = Rat::zero();
    for e in g.matrix().entries() {
        for (x, _) in e.terms() {
            den = den.lcm(&x.denom().to_i64().expect("small"));
        }
        if let LambdaVal::Finite(v) = e.negval().expect("exact") {
            bound = bound.max(v.abs());
        }
    }
    for m in mu {
        den = den.lcm(&m.denom().to_i64().expect("small"));
    }
    bound += mu.iter().map(|m| m.abs()).max().unwrap_or_else(Rat::zero);
    let steps = (&bound * rat_int(den)).ceil().to_integer().to_i64().expect("small");
    let vals: Vec<Rat> = (-steps..=steps).map(|k| rat(k, den)).collect();

    let mut memo: HashMap<(usize, Rat), bool> = HashMap::new();
    let mut row_ok = |i: usize, v: &Rat| -> bool {
        *memo.entry((i, v.clone())).or_insert_with(|| {
            (0..n).all(|j| ga.get(i, j).shift(&-v.clone()).in_o().expect("exact"))
        })
    };

    let mut found = Vec::new();
    let mut prefix: Vec<Rat> = Vec::with_capacity(n);
    search(n, &vals, &bound, &mut prefix, &mut row_ok, &mut found);
    found
}

fn search(
    n: usize,
    vals: &[Rat],
    bound: &Rat,
    prefix: &mut Vec<Rat>,
    row_ok: &mut impl FnMut(usize, &Rat) -> bool,
    found: &mut Vec<Vec<Rat>>,
) {
    let i = prefix.len();
    if i == n - 1 {
        let last = -prefix.iter().fold(Rat::zero(), |a, b| a + b);
        if last.abs() <= *bound && row_ok(i, &last) {
            let mut nu = prefix.clone();
            nu.push(last);
            found.push(nu);
        }
        return;
    }
    for v in vals {
        if row_ok(i, v) {
            prefix.push(v.clone());
            search(n, vals, bound, prefix, row_ok, found);
            prefix.pop();
        }
    }
}

/// The unique brute-force image, panicking if the search is ambiguous.
pub fn brute_chart_image(g: &GroupElem, mu: &[Rat]) -> Option<Vec<Rat>> {
    let mut all = brute_chart_images(g, mu);
    assert!(all.len() <= 1, "several apartment coordinates for one point: {all:?}");
    all.pop()
}

/// `μ ↦ ν` for the affine reflection in the wall `μ_i − μ_j = ℓ`.
pub fn reflect_in_wall(mu: &[Rat], i: usize, j: usize, ell: &Rat) -> Vec<Rat> {
    let mut out = mu.to_vec();
    out[i] = &mu[j] + ell;
    out[j] = &mu[i] - ell;
    out
}
