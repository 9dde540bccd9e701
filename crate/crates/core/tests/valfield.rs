use std::cmp::Ordering;

use lbldg_core::valfield::{parse, print, rat, rat_int, tpow, LambdaVal, LexPair, PuiseuxElem, Rat, ValueGroup};
use lbldg_core::Error;
use proptest::prelude::*;

fn p(s: &str) -> PuiseuxElem {
    parse(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn fin(v: Rat) -> LambdaVal {
    LambdaVal::Finite(v)
}

#[test]
fn parse_exact_terms() {
    let x = p("3/2*t^(1/2) + 1");
    assert!(x.is_exact());
    assert_eq!(x.terms(), &[(rat(1, 2), rat(3, 2)), (rat_int(0), rat_int(1))]);
}

#[test]
fn parse_with_floor() {
    let x = p("t^2 - t^(-1) + O(t^(-5))");
    assert_eq!(x.terms(), &[(rat_int(2), rat_int(1)), (rat_int(-1), rat_int(-1))]);
    assert_eq!(x.floor(), Some(&rat_int(-5)));
}

#[test]
fn parse_zero() {
    let x = p("0");
    assert!(x.is_zero());
    assert!(x.terms().is_empty());
}

#[test]
fn parse_rejects_garbage() {
    assert!(matches!(parse("t^"), Err(Error::Syntax { .. })));
    assert!(matches!(parse("3 +"), Err(Error::Syntax { .. })));
    assert!(matches!(parse("t^(1/0)"), Err(Error::Syntax { .. })));
    assert!(matches!(parse("t + 2*t"), Err(Error::DuplicateExponent(_))));
}

#[test]
fn print_canonical() {
    assert_eq!(print(&p("3/2*t^(1/2) + 1")), "3/2*t^(1/2) + 1");
    assert_eq!(print(&p("t^(-1)")), "t^(-1)");
    assert_eq!(print(&p("-t")), "-t");
    assert_eq!(print(&PuiseuxElem::zero()), "0");
}

#[test]
fn products() {
    assert_eq!(&p("t + 1") * &p("t - 1"), p("t^2 - 1"));
    assert_eq!(&tpow(1, 2) * &tpow(1, 2), PuiseuxElem::t());
}

#[test]
fn floor_absorbs_constant() {
    let x = &p("t^2 + O(t^0)") + &PuiseuxElem::one();
    assert_eq!(x, p("t^2 + O(t^0)"));
}

#[test]
fn inverse_of_monomial_is_exact() {
    let x = PuiseuxElem::t().inv(&rat_int(-10)).unwrap();
    assert_eq!(x, tpow(-1, 1));
    assert!(x.is_exact());
}

#[test]
fn inverse_geometric_series() {
    let x = p("1 - t^(-1)").inv(&rat_int(-3)).unwrap();
    assert_eq!(x, p("1 + t^(-1) + t^(-2) + t^(-3) + O(t^(-4))"));
    // Multiplying back leaves only the unknown tail.
    let back = &x * &p("1 - t^(-1)");
    assert_eq!(back.coeff(&rat_int(0)).unwrap(), rat_int(1));
    for k in 1..=3 {
        assert_eq!(back.coeff(&rat_int(-k)).unwrap(), rat_int(0));
    }
}

#[test]
fn inverse_of_zero() {
    assert_eq!(PuiseuxElem::zero().inv(&rat_int(-1)), Err(Error::ZeroDivision));
}

#[test]
fn ordering() {
    assert_eq!(PuiseuxElem::t().cmp_val(&PuiseuxElem::constant(rat_int(1_000_000))).unwrap(), Ordering::Greater);
    assert_eq!(tpow(-1, 1).cmp_val(&PuiseuxElem::zero()).unwrap(), Ordering::Greater);
    assert!(matches!(p("1 + O(t^0)").cmp_val(&PuiseuxElem::one()), Err(Error::Precision(_))));
}

#[test]
fn valuations() {
    assert_eq!(p("t^(3/2) + 2").negval().unwrap(), fin(rat(3, 2)));
    assert_eq!(PuiseuxElem::one().negval().unwrap(), fin(rat_int(0)));
    assert_eq!(PuiseuxElem::zero().negval().unwrap(), LambdaVal::Bottom);
    assert!(matches!(p("0 + O(t^1)").negval(), Err(Error::Precision(_))));
}

#[test]
fn valuation_ring() {
    assert!(p("t^(-2) + 5").in_o().unwrap());
    assert!(!PuiseuxElem::t().in_o().unwrap());
    assert!(!tpow(-1, 1).is_unit().unwrap());
    assert!(p("3 + t^(-1)").is_unit().unwrap());
}

#[test]
fn residues() {
    assert_eq!(p("3 + t^(-1)").residue().unwrap(), rat_int(3));
    assert_eq!(tpow(-5, 1).residue().unwrap(), rat_int(0));
    assert_eq!(PuiseuxElem::t().residue(), Err(Error::NotInRing));
}

#[test]
fn square_roots() {
    assert_eq!(p("t^2").sqrt_pos(&rat_int(-5)).unwrap(), PuiseuxElem::t());
    let r = p("1 + t^(-1)").sqrt_pos(&rat_int(-3)).unwrap();
    assert_eq!(r.floor(), Some(&rat(-7, 2)));
    // Binomial series of (1 + x)^(1/2): 1, 1/2, -1/8, 1/16.
    assert_eq!(r.coeff(&rat_int(0)).unwrap(), rat_int(1));
    assert_eq!(r.coeff(&rat_int(-1)).unwrap(), rat(1, 2));
    assert_eq!(r.coeff(&rat_int(-2)).unwrap(), rat(-1, 8));
    assert_eq!(r.coeff(&rat_int(-3)).unwrap(), rat(1, 16));
    let sq = &r * &r;
    for k in 0..=3 {
        let want = if k <= 1 { rat_int(1) } else { rat_int(0) };
        assert_eq!(sq.coeff(&rat_int(-k)).unwrap(), want);
    }
    assert!(matches!(PuiseuxElem::constant(rat_int(2)).sqrt_pos(&rat_int(-1)), Err(Error::NotASquare(_))));
    assert_eq!(p("-t").sqrt_pos(&rat_int(-1)), Err(Error::NegativeInput));
}

#[test]
fn bottom_absorbs_and_sorts_low() {
    let b: LambdaVal = LambdaVal::Bottom;
    assert!(b.plus(&fin(rat_int(5))).is_bottom());
    assert!(b < fin(rat_int(-1_000)));
    assert_eq!(LambdaVal::max_of(b, fin(rat_int(-3))), fin(rat_int(-3)));
}

#[test]
fn lex_pairs_order_lexicographically() {
    let a = LexPair::new(rat_int(1), rat_int(-100));
    let b = LexPair::new(rat_int(0), rat_int(100));
    assert!(a > b);
    assert_eq!(a.add(&a.neg()), LexPair::zero());
    assert_eq!(a.mul_int(3).div_int(3), a);
}

fn exact_series() -> impl Strategy<Value = PuiseuxElem> {
    prop::collection::vec(((-8i64..=8, 1i64..=2), (-6i64..=6, 1i64..=3)), 0..4).prop_map(|ts| {
        PuiseuxElem::from_terms(ts.into_iter().map(|((en, ed), (cn, cd))| (rat(en, ed), rat(cn, cd))).collect(), None)
    })
}

fn nonzero_series() -> impl Strategy<Value = PuiseuxElem> {
    exact_series().prop_filter("nonzero", |x| !x.is_zero())
}

fn neg_val(x: &PuiseuxElem) -> LambdaVal {
    x.negval().expect("exact")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_laws(a in exact_series(), b in exact_series(), c in exact_series()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &PuiseuxElem::one(), a.clone());
    }

    #[test]
    fn order_compatible(a in nonzero_series(), b in nonzero_series()) {
        let (a, b) = if a.signum().unwrap() == Ordering::Less { (-a, b) } else { (a, b) };
        let b = if b.signum().unwrap() == Ordering::Less { -b } else { b };
        let (hi, lo) = if a.cmp_val(&b).unwrap() == Ordering::Less { (b, a) } else { (a, b) };
        prop_assert!(neg_val(&hi) >= neg_val(&lo));
    }

    #[test]
    fn order_is_translation_invariant(a in exact_series(), b in exact_series(), c in exact_series()) {
        prop_assert_eq!(a.cmp_val(&b).unwrap(), (&a + &c).cmp_val(&(&b + &c)).unwrap());
    }

    #[test]
    fn valuation_is_multiplicative(a in exact_series(), b in exact_series()) {
        prop_assert_eq!(neg_val(&(&a * &b)), neg_val(&a).plus(&neg_val(&b)));
    }

    #[test]
    fn ultrametric(a in exact_series(), b in exact_series()) {
        let (va, vb) = (neg_val(&a), neg_val(&b));
        let vs = neg_val(&(&a + &b));
        prop_assert!(vs <= LambdaVal::max_of(va.clone(), vb.clone()));
        if va != vb {
            prop_assert_eq!(vs, LambdaVal::max_of(va, vb));
        }
    }

    #[test]
    fn inverse_residual(a in nonzero_series(), f in -12i64..=-1) {
        let f = rat_int(f);
        let inv = a.inv(&f).unwrap();
        let resid = &(&a * &inv) - &PuiseuxElem::one();
        let LambdaVal::Finite(va) = neg_val(&a) else { unreachable!() };
        // Nothing known survives, and the unknown tail sits at or below f + negval(a).
        prop_assert!(resid.terms().is_empty(), "residual {}", resid);
        prop_assert!(resid.is_zero() || resid.floor().is_some_and(|g| *g <= &f + &va));
    }

    #[test]
    fn parse_print_round_trip(a in exact_series(), floor in prop::option::of(-12i64..=-9)) {
        let a = match floor {
            Some(f) => a.truncate(&rat_int(f)),
            None => a,
        };
        let s = print(&a);
        prop_assert_eq!(parse(&s).unwrap(), a.clone());
        prop_assert_eq!(print(&parse(&s).unwrap()), s);
    }

    #[test]
    fn squares_have_roots(a in nonzero_series()) {
        let sq = &a * &a;
        let r = sq.sqrt_pos(&rat_int(-20)).unwrap();
        let abs = if a.signum().unwrap() == Ordering::Less { -a } else { a };
        // Exact squares of finite series have finite roots; compare above the floor.
        for (e, c) in abs.terms() {
            if let Some(f) = r.floor() {
                if e <= f { continue; }
            }
            prop_assert_eq!(&r.coeff(e).unwrap(), c);
        }
    }
}
