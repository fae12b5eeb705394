//! One pass/fail line per acceptance criterion.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use padchar::apartment::ApartmentPoint;
use padchar::arith::{
    field, fq_norm_one_sgn, fq_sgn, gauss_sum, gauss_sum_direct, odd_prime_power, Depth, FourthRoot, Fq, Rational,
    Sign,
};
use padchar::charform::{class_context, stability_check, untwisted_discrepancies};
use padchar::disc::{check_part_disc, disc_val_gamma};
use padchar::elements::Approximation;
use padchar::fuzz;
use padchar::mp::{index_product_const, index_product_cor, verify_gxf_card, TorusLattice};
use padchar::rootgal::systems::System;
use padchar::rootgal::{IntMatrix, ResidueField, RootGalois};
use padchar::scenario::{Built, Scenario};
use padchar::signs::{
    assemble, check_stable_invariance_at, check_stable_sign_identity, e_quot, eps_ram, SignContext,
};
use rand::seq::SliceRandom;
use rand::Rng;

const FIXTURES: [&str; 5] = ["a1_split", "a1_elliptic", "a2_rotation", "c2_pgsp4_even", "c2_pgsp4_odd"];
const ELLIPTIC: [&str; 3] = ["a1_elliptic", "c2_pgsp4_even", "c2_pgsp4_odd"];
const F3: ResidueField = ResidueField { p: 3, f: 1 };
const F5: ResidueField = ResidueField { p: 5, f: 1 };

fn load(name: &str) -> (Scenario, Built) {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).join("scenario.json");
    let s = Scenario::load(p).unwrap();
    let b = s.build().unwrap();
    (s, b)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Γ-orbits on a set of roots, by closing under the Frobenius and inertia matrices.
fn orbit_count(rg: &RootGalois, roots: &BTreeSet<usize>) -> usize {
    let rd = rg.datum();
    let gens: Vec<&IntMatrix> = std::iter::once(&rg.galois().frobenius).chain(&rg.galois().inertia).collect();
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for &start in roots {
        if !seen.insert(start) {
            continue;
        }
        count += 1;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for g in &gens {
                let j = rd.index_of(&g.apply(&rd.roots[i])).unwrap();
                if seen.insert(j) {
                    stack.push(j);
                }
            }
        }
    }
    count
}

fn twist_trivial(b: &Built, class: &str) -> Option<bool> {
    let c = b.classes.classes.iter().find(|c| c.id == class).unwrap();
    assemble(&class_context(&b.input(), c).unwrap()).unwrap().twisting_character.trivial_class
}

fn c1_pgsp4() -> Result<String, String> {
    let (_, even) = load("c2_pgsp4_even");
    let (_, odd) = load("c2_pgsp4_odd");
    let got = [
        twist_trivial(&even, "Tx"),
        twist_trivial(&even, "Ty"),
        twist_trivial(&odd, "Tx"),
        twist_trivial(&odd, "Ty"),
    ];
    ensure(got == [Some(false), Some(true), Some(true), Some(false)], || format!("twisting classes {got:?}"))?;
    for b in [&even, &odd] {
        for c in &b.classes.classes {
            let rep = assemble(&class_context(&b.input(), c).unwrap()).unwrap();
            ensure(rep.pi.tilde_e == Sign::Plus, || format!("ε̃ at {} is −1", c.id))?;
        }
    }
    Ok("twisting class β at (x, even) and (y, odd), trivial otherwise; ε̃ = +1".into())
}

fn c2_stable_sign() -> Result<String, String> {
    for name in FIXTURES {
        let (_, b) = load(name);
        ensure(check_stable_sign_identity(&b.ctx).unwrap(), || format!("fixture {name}"))?;
    }
    let mut rng = fuzz::rng(2);
    let mut n = 0;
    for sys in System::ALL {
        for _ in 0..100 {
            let ctx = fuzz::random_unramified_context(sys, F3, &mut rng).unwrap();
            ensure(check_stable_sign_identity(&ctx).unwrap(), || format!("{sys}: library identity fails"))?;
            // orbit parity against the rank oracle
            let all: BTreeSet<usize> = (0..ctx.rg.datum().len()).collect();
            let h = fuzz::roots_of(&ctx.rg, &ctx.approx.centralizer_orbits());
            let off: BTreeSet<usize> = all.difference(&h).copied().collect();
            let lhs = Sign::pow_of_minus_one(orbit_count(&ctx.rg, &off) as i64);
            let rk = ctx.ranks.unwrap();
            let rk_t = padchar::rootgal::fixed_rank(&ctx.rg.galois().frobenius) as u32;
            ensure(rk.g_prime == rk_t && rk.h_prime == rk_t, || "toral ranks".into())?;
            let rhs = Sign::pow_of_minus_one((rk.g + rk.h) as i64);
            ensure(lhs == rhs, || format!("{sys}: orbit parity {lhs:?} vs ranks {rhs:?}"))?;
            let tilde = assemble(&ctx).unwrap().pi.tilde_e;
            ensure(tilde == lhs * e_quot(&ctx).unwrap(), || format!("{sys}: ε̃ vs orbit parity"))?;
            n += 1;
        }
    }
    Ok(format!("{} fixtures and {n} random contexts", FIXTURES.len()))
}

fn c3_invariance() -> Result<String, String> {
    let mut rng = fuzz::rng(3);
    let mut n = 0;
    for sys in System::ALL {
        for ramified in [false, true] {
            let mut ctx =
                if ramified { fuzz::random_ramified_context(sys, F3, &mut rng) } else { fuzz::random_unramified_context(sys, F3, &mut rng) }
                    .unwrap();
            let mut done = 0;
            while done < 100 {
                if done % 10 == 0 && done > 0 {
                    ctx = if ramified {
                        fuzz::random_ramified_context(sys, F3, &mut rng)
                    } else {
                        fuzz::random_unramified_context(sys, F3, &mut rng)
                    }
                    .unwrap();
                }
                let w = fuzz::random_transport(sys, &mut rng);
                let point = if ramified { None } else { Some(fuzz::random_point(&ctx.rg, "y", &mut rng).unwrap()) };
                let moved = ctx.transported(&w, point.clone()).unwrap();
                ensure(e_quot(&ctx).unwrap() == e_quot(&moved).unwrap(), || format!("{sys}: e moved"))?;
                ensure(eps_ram(&ctx).unwrap() == eps_ram(&moved).unwrap(), || format!("{sys}: ε^ram moved"))?;
                ensure(check_stable_invariance_at(&ctx, &w, point).unwrap(), || format!("{sys}: library check"))?;
                done += 1;
                n += 1;
            }
        }
    }
    Ok(format!("{n} transports over 8 families"))
}

fn c4_gxf() -> Result<String, String> {
    let mut rng = fuzz::rng(4);
    let mut n = 0;
    for sys in System::ALL {
        let frobs = fuzz::frobenius_choices(sys);
        for k in 0..200 {
            let frob = frobs.choose(&mut rng).unwrap().clone();
            let rg = if k % 4 == 3 { fuzz::ramified_model(sys, F5, frob) } else { fuzz::unramified_model(sys, F5, frob) }
                .unwrap();
            let pt = fuzz::random_point(&rg, "x", &mut rng).unwrap();
            let (f, g) = fuzz::random_depth_pair(&rg, &mut rng);
            let tl = TorusLattice::default_for(&rg);
            ensure(verify_gxf_card(&rg, &pt, &f, &g, &tl).unwrap(), || format!("{sys}: {f:?} {g:?}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} pairs (f, g)"))
}

fn c5_index_products() -> Result<String, String> {
    let check = |ctx: &SignContext, what: &str| -> Result<(), String> {
        let tl = TorusLattice::default_for(&ctx.rg);
        index_product_const(ctx, &tl).map_err(|e| format!("{what}: {e}"))?;
        let cor = index_product_cor(ctx, &tl).map_err(|e| format!("{what}: {e}"))?;
        ensure(cor.lhs.same_cardinality(&cor.rhs).unwrap(), || format!("{what}: ratio {} vs {}", cor.lhs, cor.rhs))?;
        ensure(cor.disc_h_xstar.same_cardinality(&cor.disc_h_xstar_closed).unwrap(), || format!("{what}: D_H(X*)"))
    };
    for name in FIXTURES {
        check(&load(name).1.ctx, name)?;
    }
    let mut rng = fuzz::rng(5);
    let mut n = 0;
    for sys in System::ALL {
        let frobs = fuzz::frobenius_choices(sys);
        for _ in 0..100 {
            let rg = fuzz::unramified_model(sys, F3, frobs.choose(&mut rng).unwrap().clone()).unwrap();
            let subs = fuzz::centralizer_subsets(&rg);
            let (root_h, _) = subs.choose(&mut rng).unwrap().clone();
            let levis: Vec<BTreeSet<usize>> = subs.iter().filter(|(_, m)| *m == 0).map(|(s, _)| s.clone()).collect();
            let levi = if rng.gen_bool(0.5) { BTreeSet::new() } else { levis.choose(&mut rng).unwrap().clone() };
            let mut ctx = fuzz::random_context_with(rg, &root_h, &levi, &mut rng).unwrap();
            ctx.point = fuzz::random_point(&ctx.rg, "x", &mut rng).unwrap();
            check(&ctx, &sys.to_string())?;
            n += 1;
        }
    }
    Ok(format!("{} fixtures and {n} random contexts", FIXTURES.len()))
}

fn c6_part_disc() -> Result<String, String> {
    let mut rng = fuzz::rng(6);
    let mut n = 0;
    for sys in System::ALL {
        for ramified in [false, true] {
            for _ in 0..50 {
                let frob = fuzz::frobenius_choices(sys).choose(&mut rng).unwrap().clone();
                let rg = if ramified { fuzz::ramified_model(sys, F3, frob) } else { fuzz::unramified_model(sys, F3, frob) }
                    .unwrap();
                let mut depths = vec![Depth::Infinity; rg.orbits().len()];
                for o in rg.orbits() {
                    if o.id > o.negative {
                        continue;
                    }
                    let d = match rng.gen_range(0..6) {
                        0 => Depth::Infinity,
                        _ if ramified => {
                            let k = rng.gen_range(0..4);
                            if k == 0 { Depth::int(0) } else { Depth::at(Rational::new(2 * k - 1, 2)) }
                        }
                        _ => Depth::int(rng.gen_range(0..5)),
                    };
                    depths[o.id] = d.clone();
                    depths[o.negative] = d;
                }
                let gamma = fuzz::random_profile(&rg, &depths, &mut rng).unwrap();
                let r = Rational::new(rng.gen_range(1..12), 2);
                let ap = Approximation::new(r.clone(), gamma);
                // oracle: sum over individual roots
                let (mut total, mut head, mut tail) = (Rational::zero(), Rational::zero(), Rational::zero());
                for i in 0..rg.datum().len() {
                    if let Some(d) = ap.gamma.value_at_root(&rg, i).depth.value().cloned() {
                        total = &total + &d;
                        if d < r {
                            head = &head + &d;
                        } else {
                            tail = &tail + &d;
                        }
                    }
                }
                ensure(disc_val_gamma(&rg, &ap.gamma) == total, || format!("{sys}: disc"))?;
                ensure(disc_val_gamma(&rg, &ap.head()) == head, || format!("{sys}: head disc"))?;
                ensure(total == &head + &tail && check_part_disc(&rg, &ap), || format!("{sys}: factorization"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} approximations"))
}

fn c7_gauss() -> Result<String, String> {
    let mut n = 0;
    for q in (3..=2000u64).step_by(2) {
        if odd_prime_power(q).is_err() {
            continue;
        }
        let (re, im) = gauss_sum_direct(q).unwrap();
        let s = (q as f64).sqrt();
        let (a, b) = gauss_sum(q).unwrap().parts();
        ensure((re / s - a as f64).abs() < 1e-6 && (im / s - b as f64).abs() < 1e-6, || format!("q = {q}"))?;
        n += 1;
    }
    ensure(gauss_sum(9).unwrap() == FourthRoot::ONE, || "G_9".into())?;
    Ok(format!("{n} odd prime powers q ≤ 2000"))
}

fn c8_stability() -> Result<String, String> {
    let mut rng = fuzz::rng(8);
    let mut n = 0;
    for name in ELLIPTIC {
        let (_, b) = load(name);
        let sys: System = match name {
            "a1_elliptic" => System::A1,
            _ => System::C2,
        };
        for _ in 0..50 {
            let w = fuzz::random_transport(sys, &mut rng);
            let out = stability_check(&b.input(), &b.chi, &b.stable, &w, None, None).unwrap();
            ensure(out.holds, || format!("{name}: {} vs {}", out.at_gamma, out.at_conjugate))?;
            n += 1;
        }
    }
    for name in ["c2_pgsp4_even", "c2_pgsp4_odd"] {
        let d = untwisted_discrepancies(&load(name).1.input()).unwrap();
        ensure(d.len() == 1 && d[0].2 == Sign::Minus, || format!("{name}: untwisted discrepancy {d:?}"))?;
    }
    Ok(format!("{n} twists; untwisted PGSp4 sums differ by −1 at both parities"))
}

fn c9_sign_calculus() -> Result<String, String> {
    let mut pairs = 0u64;
    for q in (3..=121u64).step_by(2) {
        let Ok((p, k)) = odd_prime_power(q) else { continue };
        let f = field(p, k).unwrap();
        let units: Vec<Fq> = Fq::elements(&f).filter(|x| !x.is_zero()).collect();
        let sg: Vec<Sign> = units.iter().map(|x| fq_sgn(x).unwrap()).collect();
        let index = |x: &Fq| units.iter().position(|y| y == x).unwrap();
        for (i, x) in units.iter().enumerate() {
            for (j, y) in units.iter().enumerate() {
                let xy = x.mul(y).unwrap();
                ensure(sg[index(&xy)] == sg[i] * sg[j], || format!("sgn on F_{q}"))?;
                pairs += 1;
            }
        }
        if k % 2 == 0 {
            let half = (p as u128).pow(k / 2);
            let norm_one: Vec<&Fq> = units.iter().filter(|x| x.pow(half + 1).is_one()).collect();
            for x in &norm_one {
                for y in &norm_one {
                    let xy = x.mul(y).unwrap();
                    let lhs = fq_norm_one_sgn(&xy).unwrap();
                    ensure(lhs == fq_norm_one_sgn(x).unwrap() * fq_norm_one_sgn(y).unwrap(), || format!("norm-one sgn on F_{q}"))?;
                }
            }
        }
    }
    // elliptic fixtures: the same signs at lattice translates of the base point
    let mut points = 0;
    for name in ELLIPTIC {
        let (s, b) = load(name);
        let base = assemble(&b.ctx).unwrap();
        let rank = b.ctx.rg.rank();
        for shift in [1i64, -2, 3] {
            let coords: Vec<Rational> = (0..rank).map(|i| Rational::from_int(if i == 0 { shift } else { -shift })).collect();
            let pt = ApartmentPoint::at_coordinates("x'", coords).resolve(&b.ctx.rg).unwrap();
            let mut moved = b.ctx.clone();
            moved.point = pt;
            let rep = assemble(&moved).unwrap();
            ensure(
                rep.pi == base.pi && rep.levels == base.levels && rep.composed == base.composed,
                || format!("{} at translate {shift}", s.name),
            )?;
            points += 1;
        }
    }
    Ok(format!("{pairs} products; {points} translated points"))
}

fn main() {
    type Check = fn() -> Result<String, String>;
    let criteria: [(&str, Check, Option<Duration>); 9] = [
        ("PGSp4 reproduction", c1_pgsp4, Some(Duration::from_secs(1))),
        ("stable-sign cross-identity", c2_stable_sign, Some(Duration::from_secs(10))),
        ("e and ε^ram under Weyl transport", c3_invariance, None),
        ("cardinality lemma", c4_gxf, Some(Duration::from_secs(30))),
        ("index-product ledgers", c5_index_products, None),
        ("discriminant factorization", c6_part_disc, None),
        ("Gauss sums", c7_gauss, Some(Duration::from_secs(10))),
        ("stability harness", c8_stability, None),
        ("sign calculus", c9_sign_calculus, None),
    ];
    let mut failed = vec![];
    for (k, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let took = start.elapsed();
        let outcome = match (outcome, budget) {
            (Ok(msg), Some(b)) if took > *b => Err(format!("{msg}; took {took:?} > {b:?}")),
            (o, _) => o,
        };
        match &outcome {
            Ok(msg) => println!("criterion {}: PASS  {name} ({msg}; {took:.2?})", k + 1),
            Err(msg) => {
                println!("criterion {}: FAIL  {name} ({msg}; {took:.2?})", k + 1);
                failed.push(k + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
