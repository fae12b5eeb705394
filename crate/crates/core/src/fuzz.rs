//! Random models, points, profiles and depth functions for property checks,
//! and an independent split-rank oracle.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::apartment::ResolvedPoint;
use crate::arith::{Depth, Fq, Rational, Sign};
use crate::elements::{Approximation, CovectorProfile, CovectorValue, ElementProfile, OrbitValue};
use crate::error::Result;
use crate::mp::DepthFunction;
use crate::rootgal::systems::{root_system, System};
use crate::rootgal::{closure, fixed_rank, pairing, GaloisModel, IntMatrix, OrbitKind, ResidueField, RootGalois};
use crate::signs::{RamifiedExtra, Ranks, SignContext};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Frobenius candidates: the Weyl group, and `−W` for `A2` where `−1 ∉ W`.
pub fn frobenius_choices(sys: System) -> Vec<IntMatrix> {
    let w = root_system(sys).weyl_group();
    let mut out = w.clone();
    if sys == System::A2 {
        out.extend(w.iter().map(|g| g.mul(&IntMatrix::scalar(2, -1))));
    }
    out
}

pub fn unramified_model(sys: System, residue: ResidueField, frob: IntMatrix) -> Result<RootGalois> {
    RootGalois::new(root_system(sys), GaloisModel::unramified(frob), residue)
}

/// Inertia acting by `−1`, so every orbit is symmetric ramified with `e = 2`.
pub fn ramified_model(sys: System, residue: ResidueField, frob: IntMatrix) -> Result<RootGalois> {
    let n = root_system(sys).rank;
    RootGalois::new(root_system(sys), GaloisModel { frobenius: frob, inertia: vec![IntMatrix::scalar(n, -1)] }, residue)
}

/// Split rank of the quasi-split group with maximal torus `T` and roots
/// `roots` (root indices): the fixed rank of `w ∘ Frob` where `w ∈ W(roots)`
/// carries the Frobenius image of a positive system back to itself.
pub fn split_rank(rg: &RootGalois, roots: &BTreeSet<usize>) -> usize {
    let rd = rg.datum();
    let xi: Vec<i64> = (0..rd.rank).map(|i| 10i64.pow(i as u32)).collect();
    let positive: BTreeSet<usize> = roots.iter().copied().filter(|&i| pairing(&rd.roots[i], &xi) > 0).collect();
    let frob = &rg.galois().frobenius;
    let moved: BTreeSet<usize> = positive.iter().map(|&i| rd.act(frob, i).expect("roots are permuted")).collect();
    let gens: Vec<IntMatrix> = roots.iter().map(|&i| rd.reflection(i)).collect();
    let id = IntMatrix::identity(rd.rank);
    for w in closure(&id, &gens) {
        let image: BTreeSet<usize> = moved.iter().map(|&i| rd.act(&w, i).expect("roots are permuted")).collect();
        if image == positive {
            return fixed_rank(&w.mul(frob));
        }
    }
    unreachable!("the Weyl group acts transitively on positive systems")
}

/// Orbit-id sets of `{α : ⟨α, λ⟩ ≡ 0 mod m}` that are Galois-stable, for small
/// `λ` and `m`; `m = 0` gives Levi subsystems. Each set comes with its `m`.
pub fn centralizer_subsets(rg: &RootGalois) -> Vec<(BTreeSet<usize>, u32)> {
    let rd = rg.datum();
    let n = rd.rank;
    let mut out: Vec<(BTreeSet<usize>, u32)> = vec![];
    let mut lambda = vec![-3i64; n];
    loop {
        for m in [0u32, 2, 3, 4] {
            let roots: BTreeSet<usize> = (0..rd.len())
                .filter(|&i| {
                    let v = pairing(&rd.roots[i], &lambda);
                    if m == 0 { v == 0 } else { v.rem_euclid(m as i64) == 0 }
                })
                .collect();
            let stable = rg.group_elements().all(|(g, _, _)| roots.iter().all(|&i| roots.contains(&rd.act(g, i).unwrap())));
            if !stable {
                continue;
            }
            let ids: BTreeSet<usize> = roots.iter().map(|&i| rg.orbit_of_root(i)).collect();
            if !out.iter().any(|(s, k)| *s == ids && (*k == 0) == (m == 0)) {
                out.push((ids, m));
            }
        }
        let Some(k) = lambda.iter().position(|&x| x < 3) else { break };
        lambda[k] += 1;
        for x in &mut lambda[..k] {
            *x = -3;
        }
    }
    out
}

pub fn roots_of(rg: &RootGalois, orbits: &BTreeSet<usize>) -> BTreeSet<usize> {
    orbits.iter().flat_map(|&o| rg.orbit(o).roots.iter().copied()).collect()
}

pub fn random_unit(rg: &RootGalois, orbit: usize, rng: &mut impl Rng) -> Fq {
    let f = rg.orbit_field(orbit);
    Fq::from_index(&f, rng.gen_range(1..f.order()))
}

/// A nonzero `c^Q − c`, where `Q` is the order of the fixed field of the symmetry.
fn anti_invariant(rg: &RootGalois, orbit: usize, rng: &mut impl Rng) -> Fq {
    let o = rg.orbit(orbit);
    let half_q = rg.q().pow(o.f / 2);
    loop {
        let c = random_unit(rg, orbit, rng);
        if let Ok(x) = c.pow(half_q).sub(&c) {
            if !x.is_zero() {
                return x;
            }
        }
    }
}

/// A norm-one element other than 1 in the orbit's field.
fn norm_one(rg: &RootGalois, orbit: usize, rng: &mut impl Rng) -> Fq {
    let o = rg.orbit(orbit);
    let half_q = rg.q().pow(o.f / 2);
    loop {
        let c = random_unit(rg, orbit, rng);
        let x = c.pow(half_q - 1);
        if !x.is_one() {
            return x;
        }
    }
}

/// A random point: nonsymmetric cosets in `(1/(e·k))Z` with `k ≤ 4`,
/// symmetric cosets `0` or `1/(2e)`.
pub fn random_point(rg: &RootGalois, name: &str, rng: &mut impl Rng) -> Result<ResolvedPoint> {
    let mut cosets = vec![None; rg.orbits().len()];
    for o in rg.orbits() {
        if cosets[o.id].is_some() {
            continue;
        }
        let e = o.e as i64;
        if o.kind.is_symmetric() {
            cosets[o.id] = Some(Rational::new(rng.gen_range(0..2), 2 * e));
        } else {
            let k = rng.gen_range(1..=4);
            let c = Rational::new(rng.gen_range(0..k), k * e);
            cosets[o.negative] = Some(-&c);
            cosets[o.id] = Some(c);
        }
    }
    ResolvedPoint::from_cosets(name, rg, cosets)
}

pub fn origin(rg: &RootGalois) -> Result<ResolvedPoint> {
    ResolvedPoint::from_cosets("o", rg, vec![Some(Rational::zero()); rg.orbits().len()])
}

/// A value of a profile at a given depth, satisfying the orbit's rules.
fn random_value(rg: &RootGalois, orbit: usize, depth: &Depth, rng: &mut impl Rng) -> OrbitValue {
    let o = rg.orbit(orbit);
    let f = rg.orbit_field(orbit);
    let one = Fq::one(&f);
    let Some(d) = depth.value() else { return OrbitValue::trivial(rg, orbit) };
    if d.is_zero() {
        let residue = match o.kind {
            OrbitKind::Nonsymmetric => loop {
                let x = random_unit(rg, orbit, rng);
                if !x.is_one() {
                    break x;
                }
            },
            OrbitKind::SymmetricUnramified => norm_one(rg, orbit, rng),
            OrbitKind::SymmetricRamified => one.neg(),
        };
        let lead = residue.sub(&one).expect("same field");
        return OrbitValue { depth: depth.clone(), residue, lead: Some(lead) };
    }
    let lead = match o.kind {
        OrbitKind::SymmetricUnramified => anti_invariant(rg, orbit, rng),
        _ => random_unit(rg, orbit, rng),
    };
    OrbitValue { depth: depth.clone(), residue: one, lead: Some(lead) }
}

/// A profile with prescribed depths at orbit representatives. Negative
/// orbits are derived, so `depths` should already be `±`-invariant.
pub fn random_profile(rg: &RootGalois, depths: &[Depth], rng: &mut impl Rng) -> Result<ElementProfile> {
    let mut values: Vec<Option<OrbitValue>> = vec![None; depths.len()];
    for o in rg.orbits() {
        if values[o.id].is_some() {
            continue;
        }
        let v = random_value(rg, o.id, &depths[o.id], rng);
        if o.negative != o.id {
            values[o.negative] = Some(v.negated()?);
        }
        values[o.id] = Some(v);
    }
    let values: Vec<OrbitValue> = values.into_iter().map(|v| v.expect("every orbit filled")).collect();
    let bounded = values.iter().all(|v| v.depth >= Depth::int(0));
    Ok(ElementProfile { values, bounded })
}

/// A covector with `Root′ = levi` satisfying GE1.
pub fn random_covector(rg: &RootGalois, r: &Rational, levi: &BTreeSet<usize>, rng: &mut impl Rng) -> CovectorProfile {
    let mut values: Vec<Option<CovectorValue>> = vec![None; rg.orbits().len()];
    for o in rg.orbits() {
        if values[o.id].is_some() {
            continue;
        }
        if levi.contains(&o.id) {
            values[o.id] = Some(CovectorValue { depth: Depth::Infinity, lead: None });
            values[o.negative] = Some(CovectorValue { depth: Depth::Infinity, lead: None });
            continue;
        }
        let lead = match o.kind {
            OrbitKind::SymmetricUnramified => anti_invariant(rg, o.id, rng),
            _ => random_unit(rg, o.id, rng),
        };
        values[o.negative] = Some(CovectorValue { depth: Depth::at(-r), lead: Some(lead.neg()) });
        values[o.id] = Some(CovectorValue { depth: Depth::at(-r), lead: Some(lead) });
    }
    CovectorProfile { values: values.into_iter().map(|v| v.expect("every orbit filled")).collect(), levi: levi.clone() }
}

/// Pairs `f ≤ g` meeting the hypotheses of the cardinality lemma, with
/// values in `(1/(4e))Z`.
pub fn random_depth_pair(rg: &RootGalois, rng: &mut impl Rng) -> (DepthFunction, DepthFunction) {
    let n = rg.orbits().len();
    let mut f = vec![Depth::Infinity; n];
    let mut g = vec![Depth::Infinity; n];
    let quarter = |k: i64, e: i64| Rational::new(k, 4 * e);
    for o in rg.orbits() {
        if o.id > o.negative || (o.id == o.negative && f[o.id].is_finite()) {
            continue;
        }
        let e = o.e as i64;
        match rng.gen_range(0..6) {
            0 => continue,
            1 => {
                // f infinite forces g infinite
                continue;
            }
            _ => {}
        }
        if o.id == o.negative {
            // f(α) = f(−α) with 2f(α) ∈ Z_α
            let fa = Rational::new(rng.gen_range(-4..=4), 2 * e);
            let ga = &fa + &Rational::new(rng.gen_range(0..=4), 2 * e);
            f[o.id] = Depth::at(fa);
            g[o.id] = Depth::at(ga);
            continue;
        }
        let fa = quarter(rng.gen_range(-8..=8), e);
        let fb = &Rational::new(rng.gen_range(-2..=2), e) - &fa;
        let da = quarter(rng.gen_range(0..=8), e);
        // smallest m with m/e ≥ da
        let m0 = (&da * &Rational::from_int(e)).ceil();
        let m0: i64 = m0.try_into().expect("small");
        let m = m0 + rng.gen_range(0..=2);
        let db = &Rational::new(m, e) - &da;
        g[o.id] = Depth::at(&fa + &da);
        g[o.negative] = Depth::at(&fb + &db);
        f[o.id] = Depth::at(fa);
        f[o.negative] = Depth::at(fb);
    }
    let f0 = Rational::new(rng.gen_range(-8..=8), 4);
    let g0 = &f0 + &Rational::new(rng.gen_range(0..=8), 4);
    (DepthFunction::new(Depth::at(f0), f), DepthFunction::new(Depth::at(g0), g))
}

/// Ranks of `G, G′, H, H′` from the oracle, with `Root_H` read at `γ_{<r}`.
pub fn oracle_ranks(ctx: &SignContext) -> Ranks {
    let rg = &ctx.rg;
    let all: BTreeSet<usize> = (0..rg.orbits().len()).collect();
    let h = ctx.approx.centralizer_orbits();
    let levi = &ctx.covector.levi;
    let hp: BTreeSet<usize> = h.intersection(levi).copied().collect();
    let rk = |s: &BTreeSet<usize>| split_rank(rg, &roots_of(rg, s)) as u32;
    Ranks { g: rk(&all), g_prime: rk(levi), h: rk(&h), h_prime: rk(&hp) }
}

/// An unramified context at the origin with `G′ = T` and `Root_H` equal to a
/// random Galois-stable centralizer subsystem: depths `≥ r` on it and
/// integers in `[0, r)` off it.
pub fn random_unramified_context(sys: System, residue: ResidueField, rng: &mut impl Rng) -> Result<SignContext> {
    let frob = frobenius_choices(sys).choose(rng).expect("nonempty").clone();
    let rg = unramified_model(sys, residue, frob)?;
    let subsets = centralizer_subsets(&rg);
    let (root_h, _) = subsets.choose(rng).expect("Root itself is always present").clone();
    random_context_with(rg, &root_h, &BTreeSet::new(), rng)
}

/// As [`random_unramified_context`] but with the given `Root_H`, `Root′`
/// (orbit ids) and model; the point is the origin.
pub fn random_context_with(
    rg: RootGalois,
    root_h: &BTreeSet<usize>,
    levi: &BTreeSet<usize>,
    rng: &mut impl Rng,
) -> Result<SignContext> {
    let r = rng.gen_range(1..=3i64);
    let mut depths = vec![Depth::Infinity; rg.orbits().len()];
    for o in rg.orbits() {
        if o.id > o.negative {
            continue;
        }
        let d = if root_h.contains(&o.id) {
            match rng.gen_range(0..3) {
                0 => Depth::Infinity,
                k => Depth::int(r + k as i64 - 1),
            }
        } else {
            Depth::int(rng.gen_range(0..r))
        };
        depths[o.id] = d.clone();
        depths[o.negative] = d;
    }
    let gamma = random_profile(&rg, &depths, rng)?;
    let r = Rational::from_int(r);
    let covector = random_covector(&rg, &r, levi, rng);
    let point = origin(&rg)?;
    let mut ctx = SignContext::new(rg, point, Approximation::new(r, gamma), covector);
    ctx.ranks = Some(oracle_ranks(&ctx));
    ctx.maximally_split_levi = true;
    Ok(ctx)
}

/// A context on a model with inertia `−1`: `r ∈ {1/2, 3/2, 5/2}`, depths `0`,
/// odd multiples of `1/2` or infinite, cosets `0` or `1/4` (the latter only
/// where the depth is positive), and random ramified extras.
pub fn random_ramified_context(sys: System, residue: ResidueField, rng: &mut impl Rng) -> Result<SignContext> {
    let frob = frobenius_choices(sys).choose(rng).expect("nonempty").clone();
    let rg = ramified_model(sys, residue, frob)?;
    let r = Rational::new(2 * rng.gen_range(0..3) + 1, 2);
    let n = rg.orbits().len();
    let mut depths = vec![Depth::Infinity; n];
    let mut cosets = vec![Some(Rational::zero()); n];
    for o in rg.orbits() {
        depths[o.id] = match rng.gen_range(0..5) {
            0 => Depth::int(0),
            4 => Depth::Infinity,
            k => Depth::at(Rational::new(2 * k - 1, 2)),
        };
        if depths[o.id] != Depth::int(0) && rng.gen_bool(0.5) {
            cosets[o.id] = Some(Rational::new(1, 4));
        }
    }
    let gamma = random_profile(&rg, &depths, rng)?;
    let covector = random_covector(&rg, &r, &BTreeSet::new(), rng);
    let point = ResolvedPoint::from_cosets("x", &rg, cosets)?;
    let mut ctx = SignContext::new(rg, point, Approximation::new(r, gamma), covector);
    for o in ctx.rg.orbits() {
        let extra = RamifiedExtra {
            w_unit: rng.gen_bool(0.5).then(|| random_unit(&ctx.rg, o.id, rng)),
            rank_pm: rng.gen_range(1..3),
            kottwitz_sign: if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus },
        };
        ctx.extras.insert(o.id, extra);
    }
    Ok(ctx)
}

/// A random element of the Weyl group (or `±W` for `A2`).
pub fn random_transport(sys: System, rng: &mut impl Rng) -> IntMatrix {
    frobenius_choices(sys).choose(rng).expect("nonempty").clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    const F3: ResidueField = ResidueField { p: 3, f: 1 };

    #[test]
    fn rank_oracle_examples() {
        // split A2: rank 2; Coxeter torus in SL3: rank 0 but SL3 split
        let split = unramified_model(System::A2, F3, IntMatrix::identity(2)).unwrap();
        let all: BTreeSet<usize> = (0..6).collect();
        assert_eq!(split_rank(&split, &all), 2);
        let rot = IntMatrix::from_rows(&[vec![0, -1], vec![1, -1]]).unwrap();
        let cox = unramified_model(System::A2, F3, rot).unwrap();
        assert_eq!(split_rank(&cox, &BTreeSet::new()), 0);
        assert_eq!(split_rank(&cox, &all), 2);
        // Frobenius −1 on A2: the quasi-split unitary group has rank 1
        let minus = unramified_model(System::A2, F3, IntMatrix::scalar(2, -1)).unwrap();
        assert_eq!(split_rank(&minus, &all), 1);
        // C2 with −1: PGSp4 is split
        let c2 = unramified_model(System::C2, F3, IntMatrix::scalar(2, -1)).unwrap();
        assert_eq!(split_rank(&c2, &(0..8).collect()), 2);
    }

    #[test]
    fn generated_data_is_valid() {
        let mut g = rng(7);
        for sys in System::ALL {
            for _ in 0..20 {
                let ctx = random_unramified_context(sys, F3, &mut g).unwrap();
                assert!(ctx.violations().is_empty(), "{sys}: {:?}", ctx.violations());
                let ctx = random_ramified_context(sys, F3, &mut g).unwrap();
                assert!(ctx.violations().is_empty(), "{sys} ramified: {:?}", ctx.violations());
                let p = random_point(&ctx.rg, "p", &mut g).unwrap();
                assert!(p.violations(&ctx.rg).is_empty());
            }
        }
    }

    #[test]
    fn centralizers_include_extremes() {
        let rg = unramified_model(System::C2, F3, IntMatrix::scalar(2, -1)).unwrap();
        let subs = centralizer_subsets(&rg);
        assert!(subs.iter().any(|(s, _)| s.is_empty()));
        assert!(subs.iter().any(|(s, _)| s.len() == rg.orbits().len()));
        // long roots only: a pseudo-Levi that is not a Levi
        assert!(subs.iter().any(|(s, m)| s.len() == 2 && *m == 2));
    }
}
