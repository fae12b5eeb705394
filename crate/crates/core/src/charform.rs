//! Character-formula evaluators over a table of conjugacy classes, with
//! orbital integrals and depth-`(<r)` character values supplied as oracles.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::apartment::ResolvedPoint;
use crate::arith::{FourthRoot, Qi, Sign};
use crate::error::{Error, Result};
use crate::rootgal::{IntMatrix, OrbitKind};
use crate::signs::{assemble, e_quot, eps_noram, eps_ram, Level, SignContext};

fn yes() -> bool {
    true
}

/// One conjugacy class of pairs `(S, θ)`, described by the transport `weyl`
/// from the base torus and a point given in base coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub id: String,
    pub weyl: IntMatrix,
    pub point: String,
    /// Rationally conjugate to the base pair.
    #[serde(default = "yes")]
    pub rational: bool,
    /// Whether `γ_{<r}` lies in `S`.
    #[serde(default = "yes")]
    pub contains_head: bool,
    pub h_stable_class: String,
    pub g_class: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConjClassTable {
    pub classes: Vec<ClassRecord>,
}

impl ConjClassTable {
    pub fn base(&self) -> Option<&ClassRecord> {
        self.classes.first()
    }

    pub fn validate(&self, points: &BTreeMap<String, ResolvedPoint>) -> Result<()> {
        let err = |id: &str, msg: String| Err(Error::Class(id.into(), msg));
        let Some(base) = self.base() else {
            return err("-", "class table is empty".into());
        };
        if !base.weyl.is_identity() || !base.rational {
            return err(&base.id, "the first class must be the base pair (identity transport, rational)".into());
        }
        let mut seen = BTreeSet::new();
        for c in &self.classes {
            if !seen.insert(c.id.as_str()) {
                return err(&c.id, "duplicate class id".into());
            }
            if !points.contains_key(&c.point) {
                return err(&c.id, format!("unknown point {}", c.point));
            }
            if c.h_stable_class.is_empty() || c.g_class.is_empty() {
                return err(&c.id, "grouping keys must be nonempty".into());
            }
            if c.rational != (c.g_class == base.g_class) {
                return err(&c.id, "rational classes are exactly those in the base G-class".into());
            }
        }
        Ok(())
    }

    pub fn h_stable_classes(&self) -> Vec<&str> {
        let mut out: Vec<&str> = vec![];
        for c in &self.classes {
            if !out.contains(&c.h_stable_class.as_str()) {
                out.push(&c.h_stable_class);
            }
        }
        out
    }

    pub fn g_classes(&self) -> Vec<&str> {
        let mut out: Vec<&str> = vec![];
        for c in &self.classes {
            if !out.contains(&c.g_class.as_str()) {
                out.push(&c.g_class);
            }
        }
        out
    }
}

/// Values of `Ô` (or `ŜO` in stable mode), keyed by class and element.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OrbitalOracle {
    pub entries: BTreeMap<(String, String), Qi>,
    pub stable_mode: bool,
}

impl OrbitalOracle {
    pub fn get(&self, class: &str, element: &str) -> Result<Qi> {
        self.entries
            .get(&(class.to_string(), element.to_string()))
            .cloned()
            .ok_or_else(|| Error::Class(class.into(), format!("no orbital value for element {element}")))
    }
}

/// Values of `Φ(γ_{<r})`, or `θ(γ_{<r})` for toral data, keyed by class.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CharOracle {
    pub values: BTreeMap<String, Qi>,
}

impl CharOracle {
    pub fn get(&self, class: &str) -> Result<Qi> {
        self.values.get(class).cloned().ok_or_else(|| Error::Class(class.into(), "no character value".into()))
    }
}

/// Everything the evaluators read: the base context, the element key of
/// `γ_{≥r}`, the named points and the class table.
#[derive(Debug, Clone, Copy)]
pub struct CharInput<'a> {
    pub ctx: &'a SignContext,
    pub element: &'a str,
    pub points: &'a BTreeMap<String, ResolvedPoint>,
    pub classes: &'a ConjClassTable,
}

/// The sign context of one class: the base context transported to `S`, at the class's point.
pub fn class_context(input: &CharInput, class: &ClassRecord) -> Result<SignContext> {
    let point = input.points.get(&class.point).ok_or_else(|| Error::Class(class.id.clone(), "unknown point".into()))?;
    input.ctx.transported(&class.weyl, Some(point.clone()))
}

/// The signs entering one term of the sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TermSigns {
    pub eps_ram: FourthRoot,
    pub eps_noram: Sign,
    pub tilde_e: Sign,
    pub e: Sign,
}

pub fn term_signs(ctx: &SignContext) -> Result<TermSigns> {
    let rep = assemble(ctx)?;
    Ok(TermSigns { eps_ram: rep.pi.eps_ram, eps_noram: rep.pi.eps_noram, tilde_e: rep.pi.tilde_e, e: rep.pi.e })
}

fn rational_sum(input: &CharInput, chi: &CharOracle, orbital: &OrbitalOracle, twisted: bool, g_class: Option<&str>) -> Result<Qi> {
    input.classes.validate(input.points)?;
    if orbital.stable_mode {
        return Err(Error::Class("-".into(), "expected an oracle of plain orbital integrals".into()));
    }
    let mut total = Qi::zero();
    for c in &input.classes.classes {
        let included = match g_class {
            Some(g) => c.g_class == g,
            None => c.rational,
        };
        if !included || !c.contains_head {
            continue;
        }
        let s = term_signs(&class_context(input, c)?)?;
        let mut z = s.eps_ram * s.tilde_e;
        if !twisted {
            z = z * s.eps_noram;
        }
        total = total + (chi.get(&c.id)? * orbital.get(&c.id, input.element)?).scale(z);
    }
    Ok(total)
}

/// `Σ ε^ram·ε^noram·Φ·ε̃·Ô` over the rational classes containing `γ_{<r}`.
pub fn eval_char(input: &CharInput, chi: &CharOracle, orbital: &OrbitalOracle) -> Result<Qi> {
    rational_sum(input, chi, orbital, false, None)
}

fn require_toral(ctx: &SignContext) -> Result<()> {
    if !ctx.covector.levi.is_empty() {
        return Err(Error::Hypothesis { clause: "the pair is toral (Root′ = ∅)", at: "xstar.levi_roots".into() });
    }
    Ok(())
}

/// The character of the twisted induction: the sum without `ε^noram`.
pub fn eval_twisted_char(input: &CharInput, chi: &CharOracle, orbital: &OrbitalOracle) -> Result<Qi> {
    require_toral(input.ctx)?;
    rational_sum(input, chi, orbital, true, None)
}

/// [`eval_twisted_char`] for the pair of another `G`-class in the table.
pub fn eval_twisted_char_in(input: &CharInput, chi: &CharOracle, orbital: &OrbitalOracle, g_class: &str) -> Result<Qi> {
    require_toral(input.ctx)?;
    rational_sum(input, chi, orbital, true, Some(g_class))
}

/// `Σ ε^ram·θ·e·(−1)^{rk H}·ŜO` over `H`-stable classes containing `γ_{<r}`.
pub fn eval_stable_sum(input: &CharInput, chi: &CharOracle, stable: &OrbitalOracle) -> Result<Qi> {
    let ctx = input.ctx;
    require_toral(ctx)?;
    if !ctx.rg.inertia_is_trivial() {
        return Err(Error::Hypothesis { clause: "T splits over an unramified extension", at: "galois.inertia".into() });
    }
    if !stable.stable_mode {
        return Err(Error::Class("-".into(), "expected an oracle of stable orbital integrals".into()));
    }
    let ranks = ctx.ranks.ok_or_else(|| Error::Signs("split ranks are required".into()))?;
    input.classes.validate(input.points)?;
    let mut total = Qi::zero();
    for key in input.classes.h_stable_classes() {
        let members: Vec<&ClassRecord> =
            input.classes.classes.iter().filter(|c| c.h_stable_class == key && c.contains_head).collect();
        let Some(rep) = members.first() else { continue };
        let theta = chi.get(&rep.id)?;
        if let Some(other) = members.iter().find(|c| chi.get(&c.id).ok().as_ref() != Some(&theta)) {
            return Err(Error::Class(other.id.clone(), format!("character value differs within H-stable class {key}")));
        }
        let cctx = class_context(input, rep)?;
        let z = eps_ram(&cctx)? * e_quot(&cctx)? * Sign::pow_of_minus_one(ranks.h as i64);
        total = total + (theta * stable.get(key, input.element)?).scale(z);
    }
    Ok(total)
}

/// `ŜO` built from plain orbital integrals by summing over the classes of
/// each `H`-stable class.
pub fn stable_from_plain(classes: &ConjClassTable, plain: &OrbitalOracle, element: &str) -> Result<OrbitalOracle> {
    let mut entries = BTreeMap::new();
    for key in classes.h_stable_classes() {
        let mut sum = Qi::zero();
        for c in classes.classes.iter().filter(|c| c.h_stable_class == key && c.contains_head) {
            sum = sum + plain.get(&c.id, element)?;
        }
        entries.insert((key.to_string(), element.to_string()), sum);
    }
    Ok(OrbitalOracle { entries, stable_mode: true })
}

/// Outcome of comparing the stable sums at `γ` and at a stable conjugate `γ′`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityOutcome {
    pub at_gamma: Qi,
    pub at_conjugate: Qi,
    pub holds: bool,
}

/// Transports the whole scenario by `twist` (optionally to new points) and
/// compares stable sums. The oracle at `γ′` is generated from the one at `γ`
/// by `(−1)^{rk J}·ŜO^J = (−1)^{rk H}·ŜO^H`.
pub fn stability_check(
    input: &CharInput,
    chi: &CharOracle,
    stable: &OrbitalOracle,
    twist: &IntMatrix,
    twist_points: Option<&BTreeMap<String, ResolvedPoint>>,
    rank_j: Option<u32>,
) -> Result<StabilityOutcome> {
    let ctx = input.ctx;
    let ranks = ctx.ranks.ok_or_else(|| Error::Signs("split ranks are required".into()))?;
    let at_gamma = eval_stable_sum(input, chi, stable)?;
    let points = twist_points.unwrap_or(input.points);
    for (name, p) in points {
        let Some(old) = input.points.get(name) else { continue };
        for o in ctx.rg.orbits() {
            if o.kind == OrbitKind::SymmetricRamified && p.coset(o.id)? != old.coset(o.id)? {
                return Err(Error::Hypothesis {
                    clause: "ord_x α = ord_y α on symmetric ramified roots",
                    at: format!("point {name}, orbit {}", o.id),
                });
            }
        }
    }
    let base_point = points
        .get(&input.classes.base().map(|c| c.point.clone()).unwrap_or_default())
        .cloned();
    let mut moved = ctx.transported(twist, base_point)?;
    let rank_j = rank_j.unwrap_or(ranks.h);
    if let Some(rk) = moved.ranks.as_mut() {
        rk.h = rank_j;
    }
    let flip = Sign::pow_of_minus_one((ranks.h + rank_j) as i64);
    let stable_j = OrbitalOracle {
        entries: stable.entries.iter().map(|(k, v)| (k.clone(), v.signed(flip))).collect(),
        stable_mode: true,
    };
    let moved_input = CharInput { ctx: &moved, element: input.element, points, classes: input.classes };
    let at_conjugate = eval_stable_sum(&moved_input, chi, &stable_j)?;
    Ok(StabilityOutcome { holds: at_gamma == at_conjugate, at_gamma, at_conjugate })
}

/// For each pair of classes in one `H`-stable class, the ratio of their
/// `ε^noram(π′)` signs. A `−1` means the untwisted sum cannot be stable.
pub fn untwisted_discrepancies(input: &CharInput) -> Result<Vec<(String, String, Sign)>> {
    input.classes.validate(input.points)?;
    let mut out = vec![];
    for key in input.classes.h_stable_classes() {
        let members: Vec<&ClassRecord> =
            input.classes.classes.iter().filter(|c| c.h_stable_class == key && c.contains_head).collect();
        let Some(first) = members.first() else { continue };
        let s0 = noram_pi(&class_context(input, first)?)?;
        for c in &members[1..] {
            out.push((first.id.clone(), c.id.clone(), s0 * noram_pi(&class_context(input, c)?)?));
        }
    }
    Ok(out)
}

fn noram_pi(ctx: &SignContext) -> Result<Sign> {
    Ok(eps_noram(ctx, Level::G)?
        * eps_noram(ctx, Level::GPrime)?
        * eps_noram(ctx, Level::H)?
        * eps_noram(ctx, Level::HPrime)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apartment::{ApartmentPoint, CosetEntry};
    use crate::arith::{Depth, Fq, Rational};
    use crate::elements::{Approximation, CovectorProfile, ElementProfile, OrbitValue};
    use crate::rootgal::systems::{root_system, System};
    use crate::rootgal::{GaloisModel, ResidueField, RootGalois};
    use crate::signs::Ranks;

    struct Fixture {
        ctx: SignContext,
        points: BTreeMap<String, ResolvedPoint>,
        classes: ConjClassTable,
    }

    fn class(id: &str, point: &str, h: &str, g: &str, rational: bool) -> ClassRecord {
        ClassRecord {
            id: id.into(),
            weyl: IntMatrix::identity(1),
            point: point.into(),
            rational,
            contains_head: true,
            h_stable_class: h.into(),
            g_class: g.into(),
        }
    }

    /// Split A1 over F_5 with a non-square residue, r = 2, at a vertex
    /// `x` (coset Z) and at `y` (coset Z + 1/2).
    fn split_a1() -> Fixture {
        let rg = RootGalois::new(
            root_system(System::A1),
            GaloisModel::unramified(IntMatrix::identity(1)),
            ResidueField { p: 5, f: 1 },
        )
        .unwrap();
        let f = rg.orbit_field(0);
        let v = |rho: i64| {
            let rho = Fq::from_int(&f, rho);
            OrbitValue { depth: Depth::int(0), residue: rho.clone(), lead: Some(rho.sub(&Fq::one(&f)).unwrap()) }
        };
        // 2 is a non-square mod 5 and 2⁻¹ = 3
        let gamma = ElementProfile { values: vec![v(2), v(3)], bounded: true };
        let r = Rational::from_int(2);
        let cv = CovectorProfile::toral(&r, vec![Fq::one(&f), Fq::one(&f).neg()]);
        let x = ApartmentPoint::origin("x", 1).resolve(&rg).unwrap();
        let y = ApartmentPoint::with_cosets("y", vec![CosetEntry { root: vec![1], coset: Rational::new(1, 2) }])
            .resolve(&rg)
            .unwrap();
        let mut ctx = SignContext::new(rg, x.clone(), Approximation::new(r, gamma), cv);
        ctx.ranks = Some(Ranks { g: 1, g_prime: 1, h: 1, h_prime: 1 });
        ctx.maximally_split_levi = true;
        assert!(ctx.violations().is_empty(), "{:?}", ctx.violations());
        let points = [("x".to_string(), x), ("y".to_string(), y)].into_iter().collect();
        let classes = ConjClassTable {
            classes: vec![class("cx", "x", "s", "g0", true), class("cy", "y", "s", "g0", true)],
        };
        Fixture { ctx, points, classes }
    }

    fn oracles(fx: &Fixture, c: Qi) -> (CharOracle, OrbitalOracle) {
        let chi = CharOracle { values: fx.classes.classes.iter().map(|k| (k.id.clone(), Qi::one())).collect() };
        let orb = OrbitalOracle {
            entries: fx.classes.classes.iter().map(|k| ((k.id.clone(), "g".to_string()), c.clone())).collect(),
            stable_mode: false,
        };
        (chi, orb)
    }

    #[test]
    fn opposite_signs_cancel() {
        let fx = split_a1();
        let input = CharInput { ctx: &fx.ctx, element: "g", points: &fx.points, classes: &fx.classes };
        let c: Qi = "3/2".parse().unwrap();
        let (chi, orb) = oracles(&fx, c.clone());
        assert_eq!(eval_char(&input, &chi, &orb).unwrap(), Qi::zero());
        // without ε^noram both terms are +c
        assert_eq!(eval_twisted_char(&input, &chi, &orb).unwrap(), c.clone() + c.clone());
        let d = untwisted_discrepancies(&input).unwrap();
        assert_eq!(d, vec![("cx".to_string(), "cy".to_string(), Sign::Minus)]);
    }

    #[test]
    fn empty_and_single() {
        let mut fx = split_a1();
        let (chi, orb) = oracles(&fx, Qi::one());
        for c in fx.classes.classes.iter_mut() {
            c.contains_head = false;
        }
        let input = CharInput { ctx: &fx.ctx, element: "g", points: &fx.points, classes: &fx.classes };
        assert_eq!(eval_char(&input, &chi, &orb).unwrap(), Qi::zero());

        let mut fx = split_a1();
        fx.classes.classes.truncate(1);
        fx.classes.classes[0].point = "y".into();
        let c: Qi = "2 - i".parse().unwrap();
        let (chi, orb) = oracles(&fx, c.clone());
        let input = CharInput { ctx: &fx.ctx, element: "g", points: &fx.points, classes: &fx.classes };
        assert_eq!(eval_char(&input, &chi, &orb).unwrap(), c);
        let mut missing = orb.clone();
        missing.entries.clear();
        assert!(matches!(eval_char(&input, &chi, &missing), Err(Error::Class(..))));
    }

    #[test]
    fn stable_sum_matches_twisted_sums() {
        let fx = split_a1();
        let input = CharInput { ctx: &fx.ctx, element: "g", points: &fx.points, classes: &fx.classes };
        let (chi, orb) = oracles(&fx, "1 + i".parse().unwrap());
        let stable = stable_from_plain(&fx.classes, &orb, "g").unwrap();
        let lhs = eval_stable_sum(&input, &chi, &stable).unwrap();
        let mut rhs = Qi::zero();
        for g in fx.classes.g_classes() {
            rhs = rhs + eval_twisted_char_in(&input, &chi, &orb, g).unwrap();
        }
        assert_eq!(lhs, rhs.signed(Sign::pow_of_minus_one(fx.ctx.ranks.unwrap().g as i64)));
        let out = stability_check(&input, &chi, &stable, &IntMatrix::scalar(1, -1), None, None).unwrap();
        assert!(out.holds);
        let out = stability_check(&input, &chi, &stable, &IntMatrix::identity(1), None, Some(0)).unwrap();
        assert!(out.holds);
    }

    #[test]
    fn table_validation() {
        let mut fx = split_a1();
        fx.classes.classes[1].id = "cx".into();
        assert!(fx.classes.validate(&fx.points).is_err());
        let mut fx = split_a1();
        fx.classes.classes[1].point = "z".into();
        assert!(fx.classes.validate(&fx.points).is_err());
        let mut fx = split_a1();
        fx.classes.classes[1].rational = false;
        assert!(fx.classes.validate(&fx.points).is_err());
    }
}
