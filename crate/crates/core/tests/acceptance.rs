//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p lbldg-core --test acceptance`.

mod common;

use std::cmp::Ordering;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{brute_chart_images, reflect_in_wall};
use lbldg_core::apartment::{in_half, ApartmentVec};
use lbldg_core::boundaries::{germ_equal, strong_transitivity_witness, SectorGerm};
use lbldg_core::building::{chart_image_mu, fixed_set_root, m_of, trop};
use lbldg_core::harness::gen::{gen_group_elem, gen_integral_elem, gen_monomial, gen_mu, gen_orthogonal, gen_root_elem};
use lbldg_core::harness::sample::{grid, small_vec};
use lbldg_core::harness::{check_axiom, check_theorem, trial_rng, Axiom, Report, Theorem, TrialConfig};
use lbldg_core::rootsys::RootSystem;
use lbldg_core::symspace::{act, cartan_valuations, retract_mu, GroupElem, SPDPoint};
use lbldg_core::valfield::{parse, print, rat, rat_int, LambdaVal, PuiseuxElem, Rat};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: lbldg_core::Error) -> String {
    e.to_string()
}

fn report_ok(r: &Report) -> Result<(), String> {
    ensure(r.all_passed(), || {
        let first = r.counterexamples.first().map(|c| format!("trial {}: {}", c.trial, c.detail)).unwrap_or_default();
        format!("{r}; {first}")
    })
}

fn criterion(results: &mut Vec<bool>, id: usize, name: &str, f: impl FnOnce() -> Outcome) {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panic: {}", msg.unwrap_or_default()))
    });
    let secs = start.elapsed().as_secs_f64();
    match &outcome {
        Ok(detail) => println!("PASS [{id:2}] {name}: {detail} ({secs:.1} s)"),
        Err(detail) => println!("FAIL [{id:2}] {name}: {detail} ({secs:.1} s)"),
    }
    results.push(outcome.is_ok());
}

fn triangle_inequality() -> Outcome {
    let limit = Duration::from_secs(60);
    let start = Instant::now();
    let r = check_axiom(&TrialConfig::new(3, 500, 1), Axiom::TI).map_err(err)?;
    let took = start.elapsed();
    report_ok(&r)?;
    ensure(took < limit, || format!("500 triples took {took:?}, limit {limit:?}"))?;
    Ok(format!("{} triples in {:.1} s", r.passed, took.as_secs_f64()))
}

fn retraction() -> Outcome {
    let cfg = TrialConfig::new(3, 200, 2);
    let r = check_theorem(&cfg, Theorem::Retract).map_err(err)?;
    report_ok(&r)?;
    let mut rng = trial_rng(2, 1000);
    for _ in 0..20 {
        let mu = gen_mu(&cfg, &mut rng);
        let back = retract_mu(&SPDPoint::apartment_point(&mu).map_err(err)?).map_err(err)?;
        ensure(back == mu, || format!("apartment point {mu:?} moved to {back:?}"))?;
    }
    Ok(format!("{} pairs diminishing, 20 apartment points fixed", r.passed))
}

fn stab_o() -> Outcome {
    let r = check_theorem(&TrialConfig::new(3, 200, 3), Theorem::StabO).map_err(err)?;
    report_ok(&r)?;
    Ok(format!("{} trials", r.passed))
}

fn brute_force_oracle() -> Outcome {
    let mut compared = 0;
    for (n, points, count) in [(2, grid(2, 3, 2), 25), (3, grid(3, 3, 1), 10)] {
        let cfg = TrialConfig::new(n, 0, 4);
        for k in 0..count {
            let g = gen_group_elem(&cfg, &mut trial_rng(4, k));
            let t = trop(&g).map_err(err)?;
            for mu in &points {
                let fast = chart_image_mu(&t, mu).map_err(err)?;
                let mut slow = brute_chart_images(&g, mu);
                ensure(slow.len() <= 1, || format!("n={n} trial {k}: {} brute-force images at {mu:?}", slow.len()))?;
                let slow = slow.pop();
                ensure(fast == slow, || format!("n={n} trial {k} at {mu:?}: tropical {fast:?}, brute force {slow:?}"))?;
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} comparisons, 0 disagreements"))
}

fn a2() -> Outcome {
    let r = check_axiom(&TrialConfig::new(3, 100, 5), Axiom::A2).map_err(err)?;
    report_ok(&r)?;
    Ok(format!("{} trials", r.passed))
}

fn root_fixed_sets() -> Outcome {
    let rs = RootSystem::type_a(2);
    let cfg = TrialConfig::new(3, 0, 6);
    let vals: Vec<Rat> = (-4..=4).map(|k| rat(k, 2)).collect();
    let mut fixed = 0;
    for k in 0..20 {
        let u = gen_root_elem(&cfg, &mut trial_rng(6, k));
        let h = fixed_set_root(&u).map_err(err)?;
        let t = trop(&u.group_elem()).map_err(err)?;
        for a in &vals {
            for b in &vals {
                let mu = vec![a.clone(), b.clone(), -(a + b)];
                let image = chart_image_mu(&t, &mu).map_err(err)?;
                let is_fixed = image.as_ref() == Some(&mu);
                let inside = in_half(&rs, &h, &ApartmentVec::from_mu(&mu).map_err(err)?).map_err(err)?;
                ensure(image.is_none() || is_fixed, || format!("trial {k}: {mu:?} maps to {image:?}"))?;
                ensure(inside == is_fixed, || format!("trial {k} at {mu:?}: half-apartment {inside}, chart {is_fixed}"))?;
                fixed += is_fixed as usize;
            }
        }
    }
    Ok(format!("20 root elements on a 9x9 grid, {fixed} fixed points"))
}

/// A random point on the wall `μ_i − μ_j = ℓ`.
fn wall_point(n: usize, i: usize, j: usize, ell: &Rat, rng: &mut ChaCha8Rng) -> Vec<Rat> {
    let mut mu = small_vec(n, rng);
    let c = (ell - (&mu[i] - &mu[j])) / rat_int(2);
    mu[i] += &c;
    mu[j] -= &c;
    mu
}

fn reflections() -> Outcome {
    let cfg = TrialConfig::new(3, 0, 7);
    for k in 0..20 {
        let mut rng = trial_rng(7, k);
        let u = gen_root_elem(&cfg, &mut rng);
        let r = m_of(&u).map_err(err)?;
        let LambdaVal::Finite(ell) = r.ell.clone() else { return Err("identity root element".into()) };
        let (i, j) = r.root;
        let t = trop(&r.m).map_err(err)?;
        for _ in 0..5 {
            let mu = wall_point(3, i, j, &ell, &mut rng);
            let image = chart_image_mu(&t, &mu).map_err(err)?;
            ensure(image.as_ref() == Some(&mu), || format!("trial {k}: wall point {mu:?} maps to {image:?}"))?;
        }
        for _ in 0..5 {
            let mu = small_vec(3, &mut rng);
            let want = reflect_in_wall(&mu, i, j, &ell);
            let image = chart_image_mu(&t, &mu).map_err(err)?;
            ensure(image.as_ref() == Some(&want), || format!("trial {k}: {mu:?} maps to {image:?}, want {want:?}"))?;
            let back = chart_image_mu(&t, &want).map_err(err)?;
            ensure(back.as_ref() == Some(&mu), || format!("trial {k}: pair {mu:?} / {want:?} not swapped"))?;
        }
        let sq = trop(&r.m.mul(&r.m)).map_err(err)?;
        for _ in 0..10 {
            let mu = small_vec(3, &mut rng);
            let image = chart_image_mu(&sq, &mu).map_err(err)?;
            ensure(image.as_ref() == Some(&mu), || format!("trial {k}: m² moves {mu:?}"))?;
        }
    }
    Ok("20 root elements: walls fixed, pairs swapped, m² trivial".into())
}

fn newton_oracle() -> Outcome {
    let cfg = TrialConfig::new(3, 0, 8);
    for k in 0..50 {
        let mut rng = trial_rng(8, k);
        let mut mu = gen_mu(&cfg, &mut rng);
        let g = GroupElem::from_rational(&gen_orthogonal(3, &mut rng)).map_err(err)?;
        let x = act(&g, &SPDPoint::apartment_point(&mu).map_err(err)?).map_err(err)?;
        let got = cartan_valuations(&SPDPoint::identity(3), &x).map_err(err)?.mu;
        mu.sort_by(|a, b| b.cmp(a));
        ensure(got == mu, || format!("trial {k}: Newton polygon gives {got:?}, want {mu:?}"))?;
    }
    Ok("50 points".into())
}

fn germ_borel() -> Outcome {
    for n in [2, 3] {
        report_ok(&check_theorem(&TrialConfig::new(n, 100, 9), Theorem::GermBorel).map_err(err)?)?;
    }
    let cfg = TrialConfig::new(3, 0, 9);
    let mut hits = 0;
    for k in 0..100 {
        let mut rng = trial_rng(9, 1000 + k);
        let s1 = SectorGerm { g: gen_integral_elem(&cfg, &mut rng) };
        let s2 = SectorGerm { g: gen_integral_elem(&cfg, &mut rng) };
        let h = strong_transitivity_witness(&s1, &s2).map_err(err)?;
        let moved = SectorGerm { g: GroupElem::from_rational(&h).map_err(err)?.mul(&s1.g) };
        hits += germ_equal(&moved, &s2).map_err(err)? as usize;
    }
    ensure(hits == 100, || format!("strong transitivity {hits}/100"))?;
    Ok("n=2,3 100 trials each; strong transitivity 100/100".into())
}

fn infinity_borel() -> Outcome {
    for n in [2, 3] {
        report_ok(&check_theorem(&TrialConfig::new(n, 100, 10), Theorem::InfinityBorel).map_err(err)?)?;
    }
    Ok("n=2,3 100 trials each".into())
}

fn series(cfg: &TrialConfig, rng: &mut ChaCha8Rng) -> PuiseuxElem {
    let count = rng.gen_range(0..=4);
    (0..count).fold(PuiseuxElem::zero(), |acc, _| &acc + &gen_monomial(cfg, rng))
}

fn nonzero_series(cfg: &TrialConfig, rng: &mut ChaCha8Rng) -> PuiseuxElem {
    loop {
        let x = series(cfg, rng);
        if !x.is_zero() {
            return x;
        }
    }
}

fn valfield_invariants(suite_start: Instant) -> Outcome {
    let cfg = TrialConfig::new(2, 0, 11);
    let one = PuiseuxElem::one();
    for k in 0..200 {
        let mut rng = trial_rng(11, k);
        let (a, b, c) = (series(&cfg, &mut rng), series(&cfg, &mut rng), series(&cfg, &mut rng));
        let ctx = || format!("trial {k}: a = {a}, b = {b}, c = {c}");
        ensure(&a + &b == &b + &a && &a * &b == &b * &a, ctx)?;
        ensure(&(&a + &b) + &c == &a + &(&b + &c) && &(&a * &b) * &c == &a * &(&b * &c), ctx)?;
        ensure(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), ctx)?;
        ensure((&a + &(-a.clone())).is_zero() && &a * &one == a, ctx)?;
        let (va, vb) = (a.negval().map_err(err)?, b.negval().map_err(err)?);
        ensure((&a * &b).negval().map_err(err)? == va.plus(&vb), ctx)?;
        let vs = (&a + &b).negval().map_err(err)?;
        let top = LambdaVal::max_of(va.clone(), vb.clone());
        ensure(vs <= top && (va == vb || vs == top), ctx)?;
        let ord = a.cmp_val(&b).map_err(err)?;
        ensure((&a + &c).cmp_val(&(&b + &c)).map_err(err)? == ord, ctx)?;
        // Positive elements are closed under sums and products.
        let pa = if a.signum().map_err(err)? == Ordering::Less { -a.clone() } else { a.clone() };
        let pb = if b.signum().map_err(err)? == Ordering::Less { -b.clone() } else { b.clone() };
        ensure((&pa + &pb).signum().map_err(err)? != Ordering::Less, ctx)?;
        ensure((&pa * &pb).signum().map_err(err)? != Ordering::Less, ctx)?;
        for y in [a.clone(), a.truncate(&rat_int(-rng.gen_range(5..=12)))] {
            let text = print(&y);
            let back = parse(&text).map_err(err)?;
            ensure(back == y && print(&back) == text, || format!("trial {k}: {text} does not round-trip"))?;
        }
        let x = nonzero_series(&cfg, &mut rng);
        let f = rat_int(-rng.gen_range(1..=12));
        let resid = &(&x * &x.inv(&f).map_err(err)?) - &one;
        let LambdaVal::Finite(vx) = x.negval().map_err(err)? else { return Err("zero".into()) };
        ensure(resid.terms().is_empty(), || format!("trial {k}: residual {resid} for {x}"))?;
        ensure(resid.is_zero() || resid.floor().is_some_and(|g| *g <= &f + &vx), || {
            format!("trial {k}: residual floor of {resid} above {f} + {vx}")
        })?;
    }
    let limit = Duration::from_secs(120);
    let total = suite_start.elapsed();
    ensure(total < limit, || format!("whole suite took {total:?}, limit {limit:?}"))?;
    Ok(format!("200 trials; whole suite {:.1} s", total.as_secs_f64()))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut results = Vec::new();
    criterion(&mut results, 1, "triangle inequality (SL3, 500 triples, < 60 s)", triangle_inequality);
    criterion(&mut results, 2, "retraction diminishes distance and fixes the apartment", retraction);
    criterion(&mut results, 3, "stabilizer of o", stab_o);
    criterion(&mut results, 4, "tropical overlap vs brute force", brute_force_oracle);
    criterion(&mut results, 5, "A2 (n=3, 100 trials)", a2);
    criterion(&mut results, 6, "root fixed sets vs chart images", root_fixed_sets);
    criterion(&mut results, 7, "m(u) acts as a wall reflection", reflections);
    criterion(&mut results, 8, "Newton polygon oracle", newton_oracle);
    criterion(&mut results, 9, "sector germs and the residue Borel", germ_borel);
    criterion(&mut results, 10, "sectors at infinity and the Borel", infinity_borel);
    criterion(&mut results, 11, "valued field invariants (suite < 2 min)", || valfield_invariants(start));
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
