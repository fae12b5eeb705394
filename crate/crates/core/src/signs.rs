//! The sign calculus attached to a toral datum and an element: orbit-count
//! signs, quadratic-character signs, the ramified fourth roots of unity, and
//! their layered quotients.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::apartment::{ord_x_contains, ResolvedPoint};
use crate::arith::{fq_norm_one_sgn, fq_sgn, gauss_sum, Depth, FourthRoot, Fq, Rational, Sign};
use crate::elements::{Approximation, CovectorProfile, ElementProfile};
use crate::error::{Error, Result};
use crate::rootgal::{IntMatrix, OrbitKind, RootGalois, Vector};

/// Per-orbit data needed for symmetric ramified orbits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamifiedExtra {
    /// Unit part of `w_α`; `None` means 1.
    pub w_unit: Option<Fq>,
    /// `rk_{F_{±α}} G_{±α}`.
    pub rank_pm: u32,
    /// `sgn_{F_{±α}}(G_{±α})`.
    pub kottwitz_sign: Sign,
}

/// Split ranks over `F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ranks {
    #[serde(rename = "G")]
    pub g: u32,
    #[serde(rename = "Gprime")]
    pub g_prime: u32,
    #[serde(rename = "H")]
    pub h: u32,
    #[serde(rename = "Hprime")]
    pub h_prime: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    G,
    GPrime,
    H,
    HPrime,
}

/// A quotient `upper/lower` of two levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Layer {
    GOverGPrime,
    HOverHPrime,
}

impl Layer {
    fn levels(self) -> (Level, Level) {
        match self {
            Layer::GOverGPrime => (Level::G, Level::GPrime),
            Layer::HOverHPrime => (Level::H, Level::HPrime),
        }
    }
}

/// Which element the root sets are read at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalPoint {
    /// `γ_{<r}`; the `H`-levels then see no moving roots.
    #[default]
    Head,
    Full,
}

#[derive(Debug, Clone)]
pub struct SignContext {
    pub rg: RootGalois,
    pub point: ResolvedPoint,
    pub approx: Approximation,
    pub covector: CovectorProfile,
    /// Keyed by orbit id.
    pub extras: BTreeMap<usize, RamifiedExtra>,
    pub ranks: Option<Ranks>,
    /// Whether `G′` contains a maximally unramified-split torus of `G`.
    pub maximally_split_levi: bool,
    pub evaluate_at: EvalPoint,
}

/// Orbit-id sets `Root_{x,r/2}`, `Root_{x,(r−ord_γ)/2}` and `Root(π′,γ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSets {
    pub x_half_r: BTreeSet<usize>,
    pub x_shifted: BTreeSet<usize>,
    pub pi_prime: BTreeSet<usize>,
}

impl SignContext {
    pub fn new(rg: RootGalois, point: ResolvedPoint, approx: Approximation, covector: CovectorProfile) -> SignContext {
        SignContext {
            rg,
            point,
            approx,
            covector,
            extras: BTreeMap::new(),
            ranks: None,
            maximally_split_levi: false,
            evaluate_at: EvalPoint::Head,
        }
    }

    pub fn r(&self) -> &Rational {
        &self.approx.r
    }

    /// Every structural violation, with a location prefix.
    pub fn violations(&self) -> Vec<String> {
        let mut out: Vec<String> = vec![];
        out.extend(self.approx.gamma.validate(&self.rg).into_iter().map(|v| format!("gamma: {v}")));
        out.extend(self.covector.validate(&self.rg, self.r()).into_iter().map(|v| format!("xstar: {v}")));
        out.extend(self.point.violations(&self.rg).into_iter().map(|v| format!("point {}: {v}", self.point.name)));
        if !self.r().is_negative() && self.r().is_zero() {
            out.push("depth r must be positive".into());
        }
        for (id, extra) in &self.extras {
            if *id >= self.rg.orbits().len() || self.rg.orbit(*id).kind != OrbitKind::SymmetricRamified {
                out.push(format!("ramified data given for orbit {id}, which is not symmetric ramified"));
                continue;
            }
            if let Some(w) = &extra.w_unit {
                if w.field() != &self.rg.orbit_field(*id) || w.is_zero() {
                    out.push(format!("orbit {id}: w_unit must be a unit of the orbit's residue field"));
                }
            }
            if extra.rank_pm == 0 {
                out.push(format!("orbit {id}: rank_pm must be positive"));
            }
        }
        if let Some(rk) = &self.ranks {
            if rk.g_prime > rk.g || rk.h_prime > rk.h {
                out.push("ranks: a subgroup has larger rank than its ambient group".into());
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Signs(v.join("; ")))
        }
    }

    fn element(&self) -> ElementProfile {
        match self.evaluate_at {
            EvalPoint::Head => self.approx.head(),
            EvalPoint::Full => self.approx.gamma.clone(),
        }
    }

    pub fn level_orbits(&self, level: Level) -> BTreeSet<usize> {
        let all: BTreeSet<usize> = (0..self.rg.orbits().len()).collect();
        let h = self.approx.centralizer_orbits();
        match level {
            Level::G => all,
            Level::GPrime => self.covector.levi.clone(),
            Level::H => h,
            Level::HPrime => h.intersection(&self.covector.levi).copied().collect(),
        }
    }

    /// Transported context: the model moves by `w`, the profiles are carried
    /// unchanged and the point is either moved along or replaced.
    pub fn transported(&self, w: &IntMatrix, point: Option<ResolvedPoint>) -> Result<SignContext> {
        let t = self.rg.transport(w)?;
        let point = match point {
            Some(p) => p,
            None => self.point.transported(w)?,
        };
        let mut ctx = self.clone();
        ctx.approx.gamma = self.approx.gamma.transported(&t);
        ctx.rg = t.model;
        ctx.point = point;
        Ok(ctx)
    }
}

/// See [`RootSets`].
pub fn root_sets(ctx: &SignContext) -> Result<RootSets> {
    let gamma = ctx.element();
    let r = ctx.r();
    let two = Rational::from_int(2);
    let mut x_half_r = BTreeSet::new();
    let mut x_shifted = BTreeSet::new();
    for o in ctx.rg.orbits() {
        if ord_x_contains(&ctx.point, o, &(r / &two))? {
            x_half_r.insert(o.id);
        }
        if let Depth::Finite { value, .. } = &gamma.values[o.id].depth {
            if ord_x_contains(&ctx.point, o, &(&(r - value) / &two))? {
                x_shifted.insert(o.id);
            }
        }
    }
    let pi_prime = x_shifted.difference(&ctx.covector.levi).copied().collect();
    Ok(RootSets { x_half_r, x_shifted, pi_prime })
}

/// `ε̃(L, T, γ)`: parity of the number of orbits of `Root_{x,(r−ord_γ)/2}` in `L`.
pub fn tilde_e(ctx: &SignContext, level: Level) -> Result<Sign> {
    let sets = root_sets(ctx)?;
    let n = sets.x_shifted.intersection(&ctx.level_orbits(level)).count();
    Ok(Sign::from_parity(n % 2 == 1))
}

pub fn eps_unram(ctx: &SignContext, level: Level) -> Result<Sign> {
    let sets = root_sets(ctx)?;
    let gamma = ctx.element();
    let mut s = Sign::Plus;
    for id in sets.x_half_r.intersection(&ctx.level_orbits(level)) {
        if ctx.rg.orbit(*id).kind == OrbitKind::SymmetricUnramified {
            s = s * fq_norm_one_sgn(&gamma.values[*id].residue).map_err(|e| Error::Signs(format!("orbit {id}: {e}")))?;
        }
    }
    Ok(s)
}

/// Runs over `±Γ`-orbits, one representative per pair.
pub fn eps_nosymm(ctx: &SignContext, level: Level) -> Result<Sign> {
    let sets = root_sets(ctx)?;
    let gamma = ctx.element();
    let inside = ctx.level_orbits(level);
    let mut s = Sign::Plus;
    for (a, b) in ctx.rg.pm_orbits() {
        if a != b && sets.x_half_r.contains(&a) && inside.contains(&a) {
            s = s * fq_sgn(&gamma.values[a].residue)?;
        }
    }
    Ok(s)
}

pub fn eps_noram(ctx: &SignContext, level: Level) -> Result<Sign> {
    Ok(eps_nosymm(ctx, level)? * eps_unram(ctx, level)?)
}

fn layer_orbits(ctx: &SignContext, layer: Layer) -> BTreeSet<usize> {
    let (up, low) = layer.levels();
    ctx.level_orbits(up).difference(&ctx.level_orbits(low)).copied().collect()
}

/// `(−1)^{e_α(r − ord_γ α)}` for one orbit.
fn e_factor(ctx: &SignContext, id: usize, d: &Rational) -> Result<Sign> {
    let o = ctx.rg.orbit(id);
    let x = &(ctx.r() - d) * &Rational::from_int(o.e as i64);
    if !x.is_integer() {
        return Err(Error::NonIntegerExponent { orbit: id, value: x.to_string() });
    }
    Ok(Sign::from_parity(x.floor() % 2u32 != 0.into()))
}

/// `e` on a layer, one factor per `Γ`-orbit of moving roots.
pub fn e_layer(ctx: &SignContext, layer: Layer) -> Result<Sign> {
    let gamma = ctx.element();
    let mut s = Sign::Plus;
    for id in layer_orbits(ctx, layer) {
        if let Depth::Finite { value, .. } = &gamma.values[id].depth {
            s = s * e_factor(ctx, id, value)?;
        }
    }
    Ok(s)
}

/// `e(π′, γ)`.
pub fn e_quot(ctx: &SignContext) -> Result<Sign> {
    Ok(e_layer(ctx, Layer::GOverGPrime)? * e_layer(ctx, Layer::HOverHPrime)?)
}

/// One ramified orbit's factor, with the residue `t̄_α` it was read from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamifiedContribution {
    pub root: Vector,
    pub w_unit: Vec<u64>,
    pub t_bar: Vec<u64>,
    pub t_sign: Sign,
    pub factor: FourthRoot,
}

/// Residue of `t_α`. Leading residues of symmetric ramified orbits are read
/// against a uniformizer `ϖ_α` with `σ(ϖ_α) = −ϖ_α`, so that
/// `N(w_α) ≡ (−1)^k w_unit²` with `k = e_α(r − ord_γ α)/2`.
pub fn t_bar(ctx: &SignContext, id: usize) -> Result<Fq> {
    let o = ctx.rg.orbit(id);
    let gamma = ctx.element();
    let f = ctx.rg.orbit_field(id);
    let extra = ctx.extras.get(&id).ok_or_else(|| {
        Error::Signs(format!("missing ramified data for the orbit of {:?}", ctx.rg.datum().roots[o.rep]))
    })?;
    let v = &gamma.values[id];
    let (Depth::Finite { value: d, .. }, Some(lambda)) = (&v.depth, &v.lead) else {
        return Err(Error::Signs(format!("orbit {id} does not move under the element")));
    };
    let nu = ctx.covector.values[id]
        .lead
        .as_ref()
        .ok_or_else(|| Error::Signs(format!("orbit {id} lies in the Levi")))?;
    let twice_k = &(ctx.r() - d) * &Rational::from_int(o.e as i64);
    let k = &twice_k / &Rational::from_int(2);
    if !k.is_integer() {
        return Err(Error::Hypothesis {
            clause: "w_α of valuation (r − ord_γ α)/2 with w_α² ∈ F_{±α} exists",
            at: format!("orbit {id}, e_α(r − ord_γ α) = {twice_k}"),
        });
    }
    let p = f.p;
    if (o.e as u64).is_multiple_of(p) {
        return Err(Error::Signs(format!("orbit {id}: e_α = {} is divisible by p", o.e)));
    }
    let half_e = Fq::from_int(&f, o.e as i64).mul(&Fq::from_int(&f, 2).inv()?)?;
    let w = extra.w_unit.clone().unwrap_or_else(|| Fq::one(&f));
    let mut t = half_e.mul(&w)?.mul(&w)?.mul(nu)?.mul(lambda)?;
    if k.floor() % 2u32 != 0.into() {
        t = t.neg();
    }
    if t.is_zero() {
        return Err(Error::Signs(format!("orbit {id}: t_α has zero residue")));
    }
    Ok(t)
}

fn ram_contributions(ctx: &SignContext, layer: Layer) -> Result<Vec<(usize, RamifiedContribution)>> {
    let sets = root_sets(ctx)?;
    let inside = layer_orbits(ctx, layer);
    let g = gauss_sum(ctx.rg.q() as u64)?;
    let mut out = vec![];
    for id in sets.x_shifted.intersection(&inside) {
        let o = ctx.rg.orbit(*id);
        if o.kind != OrbitKind::SymmetricRamified {
            continue;
        }
        let t = t_bar(ctx, *id)?;
        let extra = &ctx.extras[id];
        let t_sign = fq_sgn(&t)?;
        let factor = (-g).pow(o.f as i64)
            * Sign::pow_of_minus_one(extra.rank_pm as i64 - 1)
            * t_sign
            * extra.kottwitz_sign;
        let w = extra.w_unit.clone().unwrap_or_else(|| Fq::one(&t.field().clone()));
        out.push((
            *id,
            RamifiedContribution {
                root: ctx.rg.datum().roots[o.rep].clone(),
                w_unit: w.coeffs().to_vec(),
                t_bar: t.coeffs().to_vec(),
                t_sign,
                factor,
            },
        ));
    }
    Ok(out)
}

pub fn eps_ram_layer(ctx: &SignContext, layer: Layer) -> Result<FourthRoot> {
    Ok(ram_contributions(ctx, layer)?.into_iter().map(|(_, c)| c.factor).product())
}

/// `ε^ram(π′, γ)`.
pub fn eps_ram(ctx: &SignContext) -> Result<FourthRoot> {
    Ok(eps_ram_layer(ctx, Layer::GOverGPrime)? * eps_ram_layer(ctx, Layer::HOverHPrime)?.inv())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LevelSigns {
    pub tilde_e: Sign,
    pub eps_unram: Sign,
    pub eps_nosymm: Sign,
    pub eps_noram: Sign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LayerSigns {
    pub tilde_e: Sign,
    pub eps_unram: Sign,
    pub eps_nosymm: Sign,
    pub eps_noram: Sign,
    pub e: Sign,
    pub eps_ram: FourthRoot,
}

impl LayerSigns {
    fn quotient(up: &LevelSigns, low: &LevelSigns, e: Sign, eps_ram: FourthRoot) -> LayerSigns {
        LayerSigns {
            tilde_e: up.tilde_e * low.tilde_e,
            eps_unram: up.eps_unram * low.eps_unram,
            eps_nosymm: up.eps_nosymm * low.eps_nosymm,
            eps_noram: up.eps_noram * low.eps_noram,
            e,
            eps_ram,
        }
    }

    fn over(&self, other: &LayerSigns) -> LayerSigns {
        LayerSigns {
            tilde_e: self.tilde_e * other.tilde_e,
            eps_unram: self.eps_unram * other.eps_unram,
            eps_nosymm: self.eps_nosymm * other.eps_nosymm,
            eps_noram: self.eps_noram * other.eps_noram,
            e: self.e * other.e,
            eps_ram: self.eps_ram * other.eps_ram.inv(),
        }
    }
}

/// The character `γ ↦ ε^noram(π′, γ)` of `T`, as the list of orbit
/// representatives whose quadratic characters it multiplies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistingCharacter {
    pub roots: Vec<Vector>,
    /// Sum of the representatives in `X*/2X*`, when all of them carry the
    /// same kind of character.
    pub class: Option<Vector>,
    pub trivial_class: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StableIdentity {
    pub lhs: Sign,
    pub rhs: Sign,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootSetReport {
    pub x_half_r: Vec<Vector>,
    pub x_shifted: Vec<Vector>,
    pub pi_prime: Vec<Vector>,
}

/// One factor of `ε^unram` or `ε^nosymm` at level `G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitSign {
    pub root: Vector,
    pub kind: OrbitKind,
    pub sign: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignReport {
    pub levels: BTreeMap<Level, LevelSigns>,
    pub g_over_gprime: LayerSigns,
    pub h_over_hprime: LayerSigns,
    pub pi: LayerSigns,
    /// `ε^ram(π′,γ)·ε^noram(π′,γ)·ε̃(π′,γ)`.
    pub composed: FourthRoot,
    pub root_sets: RootSetReport,
    pub twisting_character: TwistingCharacter,
    pub noram_contributions: Vec<OrbitSign>,
    pub ramified: Vec<RamifiedContribution>,
    pub stable_identity: Option<StableIdentity>,
}

fn level_signs(ctx: &SignContext, level: Level) -> Result<LevelSigns> {
    let eps_unram = eps_unram(ctx, level)?;
    let eps_nosymm = eps_nosymm(ctx, level)?;
    let eps_noram = eps_noram(ctx, level)?;
    assert_eq!(eps_noram, eps_nosymm * eps_unram);
    Ok(LevelSigns { tilde_e: tilde_e(ctx, level)?, eps_unram, eps_nosymm, eps_noram })
}

/// The factors of `ε^noram(G)`, one per symmetric unramified orbit and one per
/// nonsymmetric `±Γ`-pair in `Root_{x,r/2}`.
pub fn noram_contributions(ctx: &SignContext) -> Result<Vec<OrbitSign>> {
    let sets = root_sets(ctx)?;
    let gamma = ctx.element();
    let inside = ctx.level_orbits(Level::G);
    let mut out = vec![];
    for (a, b) in ctx.rg.pm_orbits() {
        if !sets.x_half_r.contains(&a) || !inside.contains(&a) {
            continue;
        }
        let o = ctx.rg.orbit(a);
        let residue = &gamma.values[a].residue;
        let sign = match o.kind {
            OrbitKind::Nonsymmetric if a != b => fq_sgn(residue)?,
            OrbitKind::SymmetricUnramified => fq_norm_one_sgn(residue)?,
            _ => continue,
        };
        out.push(OrbitSign { root: ctx.rg.datum().roots[o.rep].clone(), kind: o.kind, sign });
    }
    Ok(out)
}

pub fn twisting_character(ctx: &SignContext) -> Result<TwistingCharacter> {
    let sets = root_sets(ctx)?;
    let upper = layer_orbits(ctx, Layer::GOverGPrime);
    let mut ids = vec![];
    for (a, b) in ctx.rg.pm_orbits() {
        if !sets.x_half_r.contains(&a) || !upper.contains(&a) {
            continue;
        }
        let kind = ctx.rg.orbit(a).kind;
        if (a != b) || kind == OrbitKind::SymmetricUnramified {
            ids.push(a);
        }
    }
    let roots: Vec<Vector> = ids.iter().map(|&id| ctx.rg.datum().roots[ctx.rg.orbit(id).rep].clone()).collect();
    let homogeneous = ids.windows(2).all(|w| {
        let (a, b) = (ctx.rg.orbit(w[0]), ctx.rg.orbit(w[1]));
        (a.kind, a.q_alpha) == (b.kind, b.q_alpha)
    });
    let class = homogeneous.then(|| {
        let mut sum = vec![0i64; ctx.rg.rank()];
        for r in &roots {
            for (s, c) in sum.iter_mut().zip(r) {
                *s += c;
            }
        }
        sum.into_iter().map(|c| c.rem_euclid(2)).collect::<Vector>()
    });
    let trivial_class = class.as_ref().map(|c| c.iter().all(|x| *x == 0));
    Ok(TwistingCharacter { roots, class, trivial_class })
}

pub fn assemble(ctx: &SignContext) -> Result<SignReport> {
    ctx.validate()?;
    let mut levels = BTreeMap::new();
    for l in [Level::G, Level::GPrime, Level::H, Level::HPrime] {
        levels.insert(l, level_signs(ctx, l)?);
    }
    let g_over_gprime = LayerSigns::quotient(
        &levels[&Level::G],
        &levels[&Level::GPrime],
        e_layer(ctx, Layer::GOverGPrime)?,
        eps_ram_layer(ctx, Layer::GOverGPrime)?,
    );
    let h_over_hprime = LayerSigns::quotient(
        &levels[&Level::H],
        &levels[&Level::HPrime],
        e_layer(ctx, Layer::HOverHPrime)?,
        eps_ram_layer(ctx, Layer::HOverHPrime)?,
    );
    let pi = g_over_gprime.over(&h_over_hprime);
    let composed = pi.eps_ram * pi.eps_noram * pi.tilde_e;
    let sets = root_sets(ctx)?;
    let reps = |s: &BTreeSet<usize>| -> Vec<Vector> {
        s.iter().map(|&id| ctx.rg.datum().roots[ctx.rg.orbit(id).rep].clone()).collect()
    };
    let root_sets = RootSetReport {
        x_half_r: reps(&sets.x_half_r),
        x_shifted: reps(&sets.x_shifted),
        pi_prime: reps(&sets.pi_prime),
    };
    let stable_identity = match (ctx.ranks, ctx.maximally_split_levi) {
        (Some(rk), true) => {
            let rhs = rank_sign(&rk) * pi.e;
            Some(StableIdentity { lhs: pi.tilde_e, rhs, holds: rhs == pi.tilde_e })
        }
        _ => None,
    };
    let mut ramified: Vec<RamifiedContribution> = ram_contributions(ctx, Layer::GOverGPrime)?.into_iter().map(|(_, c)| c).collect();
    ramified.extend(ram_contributions(ctx, Layer::HOverHPrime)?.into_iter().map(|(_, c)| c));
    Ok(SignReport {
        levels,
        g_over_gprime,
        h_over_hprime,
        pi,
        composed,
        root_sets,
        twisting_character: twisting_character(ctx)?,
        noram_contributions: noram_contributions(ctx)?,
        ramified,
        stable_identity,
    })
}

fn rank_sign(rk: &Ranks) -> Sign {
    Sign::pow_of_minus_one((rk.g + rk.g_prime + rk.h + rk.h_prime) as i64)
}

/// `ε̃(π′,γ) = (−1)^{rk G − rk G′}(−1)^{rk H − rk H′} e(π′,γ)`.
pub fn check_stable_sign_identity(ctx: &SignContext) -> Result<bool> {
    if !ctx.maximally_split_levi {
        return Err(Error::Hypothesis {
            clause: "G′ contains a maximally unramified-split torus of G",
            at: "scenario flags".into(),
        });
    }
    let rk = ctx.ranks.ok_or_else(|| Error::Signs("split ranks are required".into()))?;
    let lhs = tilde_e(ctx, Level::G)? * tilde_e(ctx, Level::GPrime)? * tilde_e(ctx, Level::H)? * tilde_e(ctx, Level::HPrime)?;
    Ok(lhs == rank_sign(&rk) * e_quot(ctx)?)
}

/// Whether `e` and `ε^ram` survive transport by `w`. When a new point is
/// given, the cosets of symmetric ramified orbits must agree with the old ones.
pub fn check_stable_invariance_at(ctx: &SignContext, w: &IntMatrix, point: Option<ResolvedPoint>) -> Result<bool> {
    if let Some(p) = &point {
        for o in ctx.rg.orbits() {
            if o.kind == OrbitKind::SymmetricRamified && p.coset(o.id)? != ctx.point.coset(o.id)? {
                return Err(Error::Hypothesis {
                    clause: "ord_x α = ord_y α on symmetric ramified roots",
                    at: format!("orbit {}", o.id),
                });
            }
        }
    }
    let moved = ctx.transported(w, point)?;
    Ok(e_quot(ctx)? == e_quot(&moved)? && eps_ram(ctx)? == eps_ram(&moved)?)
}

pub fn check_stable_invariance(ctx: &SignContext, w: &IntMatrix) -> Result<bool> {
    check_stable_invariance_at(ctx, w, None)
}

/// Layered signs of several contexts built on different tori through the
/// same element, side by side. Nothing is asserted about their agreement.
pub fn compare_tori(ctxs: &[SignContext]) -> Result<Vec<LayerSigns>> {
    ctxs.iter().map(|c| Ok(assemble(c)?.g_over_gprime)).collect()
}
