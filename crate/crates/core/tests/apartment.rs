use lbldg_core::apartment::{
    apply_weyl, b_ext, dist, in_chamber_c0, in_half, norm, on_wall, wconvex_equal, wconvex_feasible, wconvex_from_json,
    wconvex_subset, wconvex_to_json, wconvex_witness, AffineWeylElem, ApartmentVec, HalfApartment, Sign, WConvexSet,
};
use lbldg_core::rootsys::RootSystem;
use lbldg_core::symspace::{distance, SPDPoint};
use lbldg_core::valfield::{rat, rat_int, LambdaVal, LexPair, Rat};
use lbldg_core::Error;
use proptest::prelude::*;
use serde_json::json;

fn ints(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| rat_int(x)).collect()
}

fn pt(mu: &[Rat]) -> ApartmentVec {
    ApartmentVec::from_mu(mu).unwrap()
}

fn set(rs: &RootSystem, cs: &[(usize, usize, Rat)]) -> WConvexSet {
    WConvexSet { constraints: cs.iter().map(|(i, j, l)| HalfApartment::diff(rs, *i, *j, l.clone())).collect() }
}

/// Affine reflection in the wall `μ_i − μ_j = ℓ`.
fn wall_reflection(rs: &RootSystem, i: usize, j: usize, ell: &Rat) -> AffineWeylElem {
    let n = rs.rank() + 1;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.swap(i, j);
    let mut c = vec![rat_int(0); n];
    c[i] = ell.clone();
    c[j] = -ell.clone();
    AffineWeylElem { translation: pt(&c), spherical: rs.weyl_from_perm(&perm) }
}

#[test]
fn mu_view_round_trip() {
    let mu = vec![rat(3, 2), rat_int(-1), rat(-1, 2)];
    let x = pt(&mu);
    assert_eq!(x.coords(), &[rat(3, 2), rat(1, 2)]);
    assert_eq!(x.mu(), mu);
    assert!(matches!(ApartmentVec::from_mu(&ints(&[1, 1])), Err(Error::Invalid(_))));
}

#[test]
fn pairing_extension() {
    let rs = RootSystem::type_a(2);
    let d1 = ApartmentVec::from_coords(ints(&[1, 0]));
    assert_eq!(b_ext(&rs, &d1, &[1, 0]).unwrap(), rat_int(2));
    assert_eq!(b_ext(&rs, &ApartmentVec::<Rat>::zero(2), &[1, 1]).unwrap(), rat_int(0));
    let x = pt(&ints(&[1, 0, -1]));
    assert_eq!(b_ext(&rs, &x, &rs.alpha(0, 2)).unwrap(), rat_int(2));
    assert_eq!(b_ext(&rs, &x, &[2, 0]), Err(Error::NotARoot));
}

#[test]
fn norm_examples() {
    let rs = RootSystem::type_a(2);
    assert_eq!(norm(&rs, &ApartmentVec::from_coords(ints(&[1, 0]))), rat_int(4));
    assert_eq!(norm(&rs, &ApartmentVec::<Rat>::zero(2)), rat_int(0));
}

#[test]
fn distance_examples() {
    let rs = RootSystem::type_a(1);
    let x = pt(&ints(&[1, -1]));
    let o = pt(&ints(&[0, 0]));
    assert_eq!(dist(&rs, &x, &x), rat_int(0));
    // One positive root with |μ_0 − μ_1| = 2.
    assert_eq!(dist(&rs, &x, &o), rat_int(2));
    // The symmetric-space distance sums over all roots, twice the apartment value.
    let sx = SPDPoint::apartment_point(&x.mu()).unwrap();
    let so = SPDPoint::identity(2);
    assert_eq!(distance(&sx, &so).unwrap(), rat_int(4));
}

#[test]
fn chamber_membership() {
    let rs = RootSystem::type_a(2);
    assert!(in_chamber_c0(&rs, &ApartmentVec::<Rat>::zero(2)));
    assert!(in_chamber_c0(&rs, &pt(&ints(&[2, 1, -3]))));
    assert!(!in_chamber_c0(&rs, &pt(&ints(&[1, 2, -3]))));
}

#[test]
fn walls_and_halves() {
    let rs = RootSystem::type_a(2);
    let x = pt(&ints(&[1, 0, -1]));
    let a = rs.alpha(0, 1);
    assert!(on_wall(&rs, &a, &rat_int(1), &x).unwrap());
    assert!(!on_wall(&rs, &a, &rat_int(2), &x).unwrap());
    let plus = HalfApartment { root: a.clone(), threshold: LambdaVal::Finite(rat_int(1)), sign: Sign::Plus };
    let minus = HalfApartment { root: a.clone(), threshold: LambdaVal::Finite(rat(1, 2)), sign: Sign::Minus };
    assert!(in_half(&rs, &plus, &x).unwrap());
    assert!(!in_half(&rs, &minus, &x).unwrap());
    let whole = HalfApartment { root: a, threshold: LambdaVal::Bottom, sign: Sign::Plus };
    assert!(in_half(&rs, &whole, &pt(&ints(&[-9, 9, 0]))).unwrap());
}

#[test]
fn affine_weyl_examples() {
    let rs = RootSystem::type_a(1);
    let x = pt(&ints(&[3, -3]));
    assert_eq!(apply_weyl(&AffineWeylElem::identity(&rs), &x), x);
    let c = pt(&ints(&[2, -2]));
    let fwd = AffineWeylElem::translation(&rs, c.clone());
    let back = AffineWeylElem::translation(&rs, c.neg());
    assert_eq!(apply_weyl(&back, &apply_weyl(&fwd, &x)), x);
    let swap = AffineWeylElem { translation: pt(&ints(&[1, -1])), spherical: rs.weyl_from_perm(&[1, 0]) };
    assert_eq!(apply_weyl(&swap, &pt(&ints(&[0, 0]))).mu(), ints(&[1, -1]));
    assert_eq!(apply_weyl(&swap, &x).mu(), ints(&[-2, 2]));
}

#[test]
fn feasibility_examples() {
    let rs = RootSystem::type_a(1);
    assert!(wconvex_feasible(&rs, &WConvexSet::<Rat>::whole()).unwrap());
    assert!(!wconvex_feasible(&rs, &set(&rs, &[(0, 1, rat_int(1)), (1, 0, rat_int(0))])).unwrap());
    let rs = RootSystem::type_a(2);
    let s = set(&rs, &[(0, 1, rat_int(1)), (1, 2, rat_int(1))]);
    let w = wconvex_witness(&rs, &s).unwrap().expect("feasible");
    assert!(s.contains(&rs, &w).unwrap());
    assert_eq!(w.mu(), ints(&[1, 0, -1]));
}

#[test]
fn feasibility_needs_type_a() {
    let b2 = RootSystem::from_cartan(vec![vec![2, -2], vec![-1, 2]]).unwrap();
    let s = WConvexSet {
        constraints: vec![HalfApartment { root: vec![1, 0], threshold: LambdaVal::Finite(rat_int(1)), sign: Sign::Plus }],
    };
    assert_eq!(wconvex_feasible(&b2, &s), Err(Error::UnsupportedConstraint));
}

#[test]
fn equality_and_containment() {
    let rs = RootSystem::type_a(2);
    let a = set(&rs, &[(0, 1, rat_int(1)), (1, 2, rat_int(1))]);
    // The implied bound μ_0 − μ_2 ≥ 2 is redundant.
    let b = set(&rs, &[(0, 1, rat_int(1)), (1, 2, rat_int(1)), (0, 2, rat_int(2))]);
    let c = set(&rs, &[(0, 2, rat_int(2))]);
    assert!(wconvex_equal(&rs, &a, &b).unwrap());
    assert!(!wconvex_equal(&rs, &a, &c).unwrap());
    assert!(wconvex_subset(&rs, &a, &c).unwrap());
    assert!(!wconvex_subset(&rs, &c, &a).unwrap());
    let empty = set(&rs, &[(0, 1, rat_int(1)), (1, 0, rat_int(0))]);
    assert!(wconvex_subset(&rs, &empty, &a).unwrap());
}

#[test]
fn json_round_trip() {
    let rs = RootSystem::type_a(2);
    let a = set(&rs, &[(0, 1, rat(1, 2)), (2, 1, rat_int(-3))]);
    let v = wconvex_to_json(&rs, &a).unwrap();
    assert_eq!(v, json!([{"i": 0, "j": 1, "ell": "1/2"}, {"i": 2, "j": 1, "ell": "-3"}]));
    assert_eq!(wconvex_from_json(&rs, &v).unwrap(), a);
    assert!(wconvex_from_json(&rs, &json!([{"i": 0, "j": 3, "ell": "1"}])).is_err());
    assert!(wconvex_from_json(&rs, &json!([{"i": 1, "j": 1, "ell": "1"}])).is_err());
}

#[test]
fn lex_pair_values() {
    let rs = RootSystem::type_a(1);
    let lp = |a: i64, b: i64| LexPair::new(rat_int(a), rat_int(b));
    let tight = WConvexSet {
        constraints: vec![HalfApartment::diff(&rs, 0, 1, lp(0, 1)), HalfApartment::diff(&rs, 1, 0, lp(0, -1))],
    };
    assert!(wconvex_feasible(&rs, &tight).unwrap());
    let bad = WConvexSet {
        constraints: vec![HalfApartment::diff(&rs, 0, 1, lp(0, 1)), HalfApartment::diff(&rs, 1, 0, lp(0, 0))],
    };
    assert!(!wconvex_feasible(&rs, &bad).unwrap());
    let x = ApartmentVec::from_mu(&[lp(1, -5), lp(-1, 5)]).unwrap();
    assert_eq!(norm(&rs, &x), lp(2, -10));
}

fn half_int() -> impl Strategy<Value = Rat> {
    (-12i64..=12).prop_map(|k| rat(k, 2))
}

fn mu_vec(n: usize) -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec(half_int(), n - 1).prop_map(|mut v| {
        let s: Rat = v.iter().sum();
        v.push(-s);
        v
    })
}

/// Quarter-unit brute force: feasible iff some difference vector
/// `(μ_0 − μ_1, …, μ_{n−2} − μ_{n−1})` on a grid of step 1/4 satisfies all
/// constraints. Bounds and thresholds are in quarter units.
fn brute_feasible(n: usize, cons: &[(usize, usize, i64)]) -> bool {
    let range = -20i64..=20;
    let mut d = vec![range.start().to_owned(); n - 1];
    loop {
        // μ_k in quarter units with μ_0 = 0; a common shift does not matter.
        let mut mu = vec![0i64; n];
        for k in 1..n {
            mu[k] = mu[k - 1] - d[k - 1];
        }
        if cons.iter().all(|&(i, j, l)| mu[i] - mu[j] >= l) {
            return true;
        }
        let mut k = 0;
        loop {
            if k == n - 1 {
                return false;
            }
            if d[k] < *range.end() {
                d[k] += 1;
                break;
            }
            d[k] = *range.start();
            k += 1;
        }
    }
}

fn constraint_sets(n: usize) -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    prop::collection::vec((0..n, 0..n, -4i64..=4), 1..=4)
        .prop_map(|v| v.into_iter().filter(|(i, j, _)| i != j).map(|(i, j, l)| (i, j, 2 * l)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn feasibility_matches_brute_force(cons in constraint_sets(3)) {
        let rs = RootSystem::type_a(2);
        let s = set(&rs, &cons.iter().map(|&(i, j, l)| (i, j, rat(l, 4))).collect::<Vec<_>>());
        let w = wconvex_witness(&rs, &s).unwrap();
        prop_assert_eq!(w.is_some(), brute_feasible(3, &cons));
        if let Some(w) = w {
            prop_assert!(s.contains(&rs, &w).unwrap());
        }
    }

    #[test]
    fn feasibility_matches_brute_force_a3(cons in constraint_sets(4)) {
        let rs = RootSystem::type_a(3);
        let s = set(&rs, &cons.iter().map(|&(i, j, l)| (i, j, rat(l, 4))).collect::<Vec<_>>());
        prop_assert_eq!(wconvex_feasible(&rs, &s).unwrap(), brute_feasible(4, &cons));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn triangle_inequality_a3(x in mu_vec(4), y in mu_vec(4), z in mu_vec(4)) {
        let rs = RootSystem::type_a(3);
        let (x, y, z) = (pt(&x), pt(&y), pt(&z));
        prop_assert!(dist(&rs, &x, &z) <= dist(&rs, &x, &y) + dist(&rs, &y, &z));
        prop_assert_eq!(dist(&rs, &x, &y), dist(&rs, &y, &x));
        prop_assert_eq!(dist(&rs, &x, &y) == rat_int(0), x == y);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn norm_is_weyl_invariant_a2(x in mu_vec(3)) {
        let rs = RootSystem::type_a(2);
        let x = pt(&x);
        for w in rs.weyl_elements(100).unwrap() {
            let wx = apply_weyl(&AffineWeylElem { translation: ApartmentVec::zero(2), spherical: w }, &x);
            prop_assert_eq!(norm(&rs, &wx), norm(&rs, &x));
        }
    }

    #[test]
    fn norm_is_weyl_invariant_a3(x in mu_vec(4), k in 0usize..24) {
        let rs = RootSystem::type_a(3);
        let x = pt(&x);
        let w = rs.weyl_elements(100).unwrap()[k].clone();
        // The permutation view acts on μ directly.
        let perm = w.perm().unwrap().to_vec();
        let wx = ApartmentVec::from_coords(w.act(x.coords()));
        let mu = x.mu();
        prop_assert_eq!(wx.mu(), perm.iter().map(|&p| mu[p].clone()).collect::<Vec<_>>());
        prop_assert_eq!(norm(&rs, &wx), norm(&rs, &x));
    }

    #[test]
    fn chamber_distance_is_linear(x in mu_vec(4), y in mu_vec(4)) {
        let rs = RootSystem::type_a(3);
        let (x, y) = (pt(&x), pt(&y));
        let diff = x.sub(&y);
        if in_chamber_c0(&rs, &diff) {
            let lin: Rat = rs.positive_roots().iter().map(|a| b_ext(&rs, &diff, a).unwrap()).sum();
            prop_assert_eq!(dist(&rs, &x, &y), lin);
        }
    }

    #[test]
    fn affine_action_is_a_homomorphism(
        x in mu_vec(3), c1 in mu_vec(3), c2 in mu_vec(3), k1 in 0usize..6, k2 in 0usize..6,
    ) {
        let rs = RootSystem::type_a(2);
        let ws = rs.weyl_elements(100).unwrap();
        let a = AffineWeylElem { translation: pt(&c1), spherical: ws[k1].clone() };
        let b = AffineWeylElem { translation: pt(&c2), spherical: ws[k2].clone() };
        let x = pt(&x);
        prop_assert_eq!(apply_weyl(&a.compose(&b), &x), apply_weyl(&a, &apply_weyl(&b, &x)));
        prop_assert_eq!(apply_weyl(&a.inverse(), &apply_weyl(&a, &x)), x);
    }

    #[test]
    fn wall_reflections(x in mu_vec(3), i in 0usize..3, j in 0usize..3, ell in half_int()) {
        prop_assume!(i != j);
        let rs = RootSystem::type_a(2);
        let r = wall_reflection(&rs, i, j, &ell);
        let xv = pt(&x);
        let root = rs.alpha(i, j);
        let rx = apply_weyl(&r, &xv);
        prop_assert_eq!(apply_weyl(&r, &rx), xv.clone());
        let side = b_ext(&rs, &xv, &root).unwrap() - &ell;
        let image_side = b_ext(&rs, &rx, &root).unwrap() - &ell;
        prop_assert_eq!(image_side, -side.clone());
        // Project onto the wall: points there are fixed.
        let mut on = x.clone();
        let shift = side / rat_int(2);
        on[i] -= &shift;
        on[j] += &shift;
        let onv = pt(&on);
        prop_assert!(on_wall(&rs, &root, &ell, &onv).unwrap());
        prop_assert_eq!(apply_weyl(&r, &onv), onv);
    }
}
