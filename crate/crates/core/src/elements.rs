//! Root-value profiles of torus elements and of the generic covector, and
//! the bookkeeping of an approximation `γ = γ_{<r} γ_{≥r}`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{Depth, Fq, Rational};
use crate::error::{Error, Result};
use crate::rootgal::{OrbitKind, RootGalois, Transport, Vector};

/// Data of `α(γ)` at an orbit representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitValue {
    /// `ord(α(γ) − 1)`.
    pub depth: Depth,
    /// Reduction of `α(γ)`.
    pub residue: Fq,
    /// Leading residue of `α(γ) − 1`; absent at infinite depth.
    pub lead: Option<Fq>,
}

impl OrbitValue {
    /// Value of `(−α)(γ)` from that of `α(γ)`.
    pub fn negated(&self) -> Result<OrbitValue> {
        let inv = self.residue.inv()?;
        let lead = match (&self.lead, &self.depth) {
            (Some(l), Depth::Finite { value, .. }) if value.is_zero() => Some(l.neg().mul(&inv)?),
            (Some(l), _) => Some(l.neg()),
            (None, _) => None,
        };
        Ok(OrbitValue { depth: self.depth.clone(), residue: inv, lead })
    }

    fn frobenius_twist(&self, power: u128) -> OrbitValue {
        OrbitValue {
            depth: self.depth.clone(),
            residue: self.residue.pow(power),
            lead: self.lead.as_ref().map(|l| l.pow(power)),
        }
    }

    pub fn trivial(rg: &RootGalois, orbit: usize) -> OrbitValue {
        OrbitValue { depth: Depth::Infinity, residue: Fq::one(&rg.orbit_field(orbit)), lead: None }
    }

    pub fn is_finite_depth(&self) -> bool {
        self.depth.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementProfile {
    pub values: Vec<OrbitValue>,
    pub bounded: bool,
}

/// A violated profile rule, naming the orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub orbit: usize,
    pub rule: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "orbit {}: {}", self.orbit, self.rule)
    }
}

fn q_pow(rg: &RootGalois, j: u32) -> u128 {
    rg.q().pow(j)
}

impl ElementProfile {
    pub fn depth(&self, orbit: usize) -> &Depth {
        &self.values[orbit].depth
    }

    /// Whether `α(γ) ≠ 1`.
    pub fn moves(&self, orbit: usize) -> bool {
        self.values[orbit].depth.is_finite()
    }

    /// Value at an arbitrary root: Frobenius acts on residues by `x ↦ x^{1/q}`.
    pub fn value_at_root(&self, rg: &RootGalois, root: usize) -> OrbitValue {
        let o = rg.orbit(rg.orbit_of_root(root));
        let j = rg.frobenius_exponent_to(root);
        self.values[o.id].frobenius_twist(q_pow(rg, (o.f - j) % o.f))
    }

    /// Profile of `γ⁻¹`.
    pub fn inverse(&self) -> Result<ElementProfile> {
        let values = self
            .values
            .iter()
            .map(|v| {
                let inv = v.residue.inv()?;
                let lead = match &v.lead {
                    Some(l) => Some(l.neg().mul(&inv)?),
                    None => None,
                };
                Ok(OrbitValue { depth: v.depth.clone(), residue: inv, lead })
            })
            .collect::<Result<_>>()?;
        Ok(ElementProfile { values, bounded: self.bounded })
    }

    /// Product of two depth-zero-or-trivial profiles, read off residues.
    pub fn residue_product(&self, other: &ElementProfile) -> Result<ElementProfile> {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| {
                let rho = a.residue.mul(&b.residue)?;
                if rho.is_one() {
                    Ok(OrbitValue { depth: Depth::int(1), residue: rho.clone(), lead: Some(Fq::one(rho.field())) })
                } else {
                    let lead = rho.sub(&Fq::one(rho.field()))?;
                    Ok(OrbitValue { depth: Depth::int(0), residue: rho, lead: Some(lead) })
                }
            })
            .collect::<Result<_>>()?;
        Ok(ElementProfile { values, bounded: self.bounded && other.bounded })
    }

    /// Checks every profile rule; an empty list means the profile is valid.
    pub fn validate(&self, rg: &RootGalois) -> Vec<Violation> {
        let mut out = vec![];
        let mut push = |orbit: usize, rule: String| out.push(Violation { orbit, rule });
        if self.values.len() != rg.orbits().len() {
            push(0, format!("{} values for {} orbits", self.values.len(), rg.orbits().len()));
            return out;
        }
        for o in rg.orbits() {
            let v = &self.values[o.id];
            let f = rg.orbit_field(o.id);
            let one = Fq::one(&f);
            if v.residue.field() != &f || v.lead.as_ref().is_some_and(|l| l.field() != &f) {
                push(o.id, format!("residues must lie in F_{}", o.q_alpha));
                continue;
            }
            if v.residue.is_zero() {
                push(o.id, "residue is zero".into());
                continue;
            }
            let Depth::Finite { value: d, plus } = &v.depth else {
                if !v.residue.is_one() {
                    push(o.id, "residue must be 1 at infinite depth".into());
                }
                continue;
            };
            if *plus {
                push(o.id, "depth may not be of the form r+".into());
            }
            if !d.in_lattice(o.e) {
                push(o.id, format!("depth {d} not in (1/{})Z", o.e));
            }
            if self.bounded && d.is_negative() {
                push(o.id, format!("bounded element with negative depth {d}"));
            }
            let Some(lead) = &v.lead else {
                push(o.id, "missing leading residue".into());
                continue;
            };
            if lead.is_zero() {
                push(o.id, "leading residue is zero".into());
            }
            let positive = !d.is_zero() && !d.is_negative();
            if positive && !v.residue.is_one() {
                push(o.id, "residue must be 1 at positive depth".into());
            }
            if d.is_zero() {
                if v.residue.is_one() {
                    push(o.id, "residue 1 at depth 0".into());
                }
                if v.residue.sub(&one).ok().as_ref() != Some(lead) {
                    push(o.id, "at depth 0 the residue must equal 1 + lead".into());
                }
            }
            let half_q = rg.q().pow(o.f / 2);
            match o.kind {
                OrbitKind::SymmetricUnramified if d.is_zero() => {
                    if !v.residue.pow(half_q + 1).is_one() {
                        push(o.id, "residue is not in the norm-one subgroup".into());
                    }
                }
                OrbitKind::SymmetricUnramified if positive => {
                    if lead.pow(half_q) != lead.neg() {
                        push(o.id, "leading residue is not anti-invariant under the symmetry".into());
                    }
                }
                OrbitKind::SymmetricRamified if d.is_zero() => {
                    if !v.residue.mul(&v.residue).map(|x| x.is_one()).unwrap_or(false) {
                        push(o.id, "ramified symmetric residue must square to 1".into());
                    }
                }
                OrbitKind::SymmetricRamified if positive => {
                    let ed = d * &Rational::from_int(o.e as i64);
                    if ed.is_integer() && !(ed.floor() % 2u32 != 0.into()) {
                        push(o.id, "ramified symmetric depth must have odd valuation".into());
                    }
                }
                _ => {}
            }
        }
        for (a, b) in rg.pm_orbits() {
            if a == b {
                continue;
            }
            match self.values[a].negated() {
                Ok(neg) if neg == self.values[b] => {}
                _ => push(b, format!("data is not the negation of orbit {a}")),
            }
        }
        out
    }

    /// Residue relations `ρ_{α+β} = ρ_α ρ_β` forced by reduction of a bounded
    /// element. Triples whose residue fields differ are skipped.
    pub fn residue_relations(&self, rg: &RootGalois) -> Vec<Violation> {
        let mut out = Vec::new();
        if !self.bounded {
            return out;
        }
        let rd = rg.datum();
        for i in 0..rd.len() {
            for j in i..rd.len() {
                let sum: Vector = rd.roots[i].iter().zip(&rd.roots[j]).map(|(a, b)| a + b).collect();
                let Some(k) = rd.index_of(&sum) else { continue };
                let (a, b, c) =
                    (self.value_at_root(rg, i), self.value_at_root(rg, j), self.value_at_root(rg, k));
                if a.residue.field() != b.residue.field() || a.residue.field() != c.residue.field() {
                    continue;
                }
                if a.residue.mul(&b.residue).ok().as_ref() != Some(&c.residue) {
                    out.push(Violation {
                        orbit: rg.orbit_of_root(k),
                        rule: format!("residue at {sum:?} is not the product of those at its summands"),
                    });
                }
            }
        }
        out
    }

    /// Relabels along a transport. Orbit ids are aligned, so data is carried unchanged.
    pub fn transported(&self, t: &Transport) -> ElementProfile {
        debug_assert_eq!(self.values.len(), t.model.orbits().len());
        self.clone()
    }
}

/// See [`ElementProfile::transported`].
pub fn transport_profile(ap: &Approximation, t: &Transport) -> ElementProfile {
    ap.gamma.transported(t)
}

/// See [`ElementProfile::validate`].
pub fn validate(rg: &RootGalois, profile: &ElementProfile) -> Vec<Violation> {
    profile.validate(rg)
}

/// An element profile together with the cut depth `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Approximation {
    pub r: Rational,
    pub gamma: ElementProfile,
}

impl Approximation {
    pub fn new(r: Rational, gamma: ElementProfile) -> Approximation {
        Approximation { r, gamma }
    }

    fn in_root_h(&self, orbit: usize) -> bool {
        self.gamma.values[orbit].depth >= Depth::at(self.r.clone())
    }

    /// Orbits with `ord_γ α ≥ r`.
    pub fn centralizer_orbits(&self) -> BTreeSet<usize> {
        (0..self.gamma.values.len()).filter(|&o| self.in_root_h(o)).collect()
    }

    /// Profile of `γ_{<r}`.
    pub fn head(&self) -> ElementProfile {
        let values = self
            .gamma
            .values
            .iter()
            .enumerate()
            .map(|(o, v)| {
                if self.in_root_h(o) {
                    OrbitValue { depth: Depth::Infinity, residue: Fq::one(v.residue.field()), lead: None }
                } else {
                    v.clone()
                }
            })
            .collect();
        ElementProfile { values, bounded: self.gamma.bounded }
    }

    /// Profile of `γ_{≥r}` seen from the roots of `H`.
    pub fn tail(&self) -> ElementProfile {
        let values = self
            .gamma
            .values
            .iter()
            .enumerate()
            .map(|(o, v)| {
                if self.in_root_h(o) {
                    v.clone()
                } else {
                    OrbitValue { depth: Depth::Infinity, residue: Fq::one(v.residue.field()), lead: None }
                }
            })
            .collect();
        ElementProfile { values, bounded: true }
    }
}

/// Root indices of `Root_H`.
pub fn centralizer_roots(rg: &RootGalois, ap: &Approximation) -> BTreeSet<usize> {
    let orbits = ap.centralizer_orbits();
    (0..rg.datum().len()).filter(|i| orbits.contains(&rg.orbit_of_root(*i))).collect()
}

/// Data of `dα∨(X*)` at an orbit representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CovectorValue {
    pub depth: Depth,
    pub lead: Option<Fq>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CovectorProfile {
    pub values: Vec<CovectorValue>,
    /// Orbits of `Root′`.
    pub levi: BTreeSet<usize>,
}

impl CovectorProfile {
    /// A toral covector (`Root′ = ∅`) satisfying GE1 with the given residues.
    pub fn toral(r: &Rational, leads: Vec<Fq>) -> CovectorProfile {
        let values = leads.into_iter().map(|l| CovectorValue { depth: Depth::at(-r), lead: Some(l) }).collect();
        CovectorProfile { values, levi: BTreeSet::new() }
    }

    pub fn validate(&self, rg: &RootGalois, r: &Rational) -> Vec<Violation> {
        let mut out = vec![];
        let mut push = |orbit: usize, rule: String| out.push(Violation { orbit, rule });
        if self.values.len() != rg.orbits().len() {
            push(0, "covector has the wrong number of orbits".into());
            return out;
        }
        for o in rg.orbits() {
            let v = &self.values[o.id];
            if self.levi.contains(&o.id) != self.levi.contains(&o.negative) {
                push(o.id, "Levi roots are not closed under negation".into());
            }
            if self.levi.contains(&o.id) {
                if v.depth != Depth::Infinity {
                    push(o.id, "Levi roots must have infinite depth".into());
                }
                continue;
            }
            if v.depth != Depth::at(-r) {
                push(o.id, format!("depth {} violates GE1 (expected {})", v.depth, -r));
            }
            let Some(lead) = &v.lead else {
                push(o.id, "missing leading residue".into());
                continue;
            };
            if lead.field() != &rg.orbit_field(o.id) || lead.is_zero() {
                push(o.id, "leading residue must be a unit of the orbit's residue field".into());
                continue;
            }
            match o.kind {
                OrbitKind::SymmetricUnramified => {
                    if lead.pow(rg.q().pow(o.f / 2)) != lead.neg() {
                        push(o.id, "leading residue is not anti-invariant under the symmetry".into());
                    }
                }
                OrbitKind::SymmetricRamified => {
                    let er = r * &Rational::from_int(o.e as i64);
                    if !er.is_integer() || er.floor() % 2u32 == 0.into() {
                        push(o.id, "ramified symmetric orbit needs e·r odd".into());
                    }
                }
                OrbitKind::Nonsymmetric => {}
            }
        }
        for (a, b) in rg.pm_orbits() {
            if a == b || self.levi.contains(&a) {
                continue;
            }
            if self.values[b].lead != self.values[a].lead.as_ref().map(|l| l.neg()) {
                push(b, format!("data is not the negation of orbit {a}"));
            }
        }
        out
    }
}

/// Scenario form of a root value, keyed by any root of the orbit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootValueSpec {
    pub root: Vector,
    pub depth: Depth,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lead: Option<Vec<i64>>,
}

fn default_element_id() -> String {
    "gamma".into()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileSpec {
    #[serde(default = "default_element_id")]
    pub element_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounded: Option<bool>,
    pub orbits: Vec<RootValueSpec>,
}

impl ProfileSpec {
    pub fn resolve(&self, rg: &RootGalois) -> Result<ElementProfile> {
        let n = rg.orbits().len();
        let mut values: Vec<Option<OrbitValue>> = vec![None; n];
        for spec in &self.orbits {
            let root = rg
                .datum()
                .index_of(&spec.root)
                .ok_or_else(|| Error::Profile(format!("{:?} is not a root", spec.root)))?;
            let id = rg.orbit_of_root(root);
            let f = rg.orbit_field(id);
            let one = Fq::one(&f);
            let positive = spec.depth > Depth::int(0);
            let residue = match &spec.residue {
                Some(c) => Fq::new(&f, c)?,
                None if positive => one.clone(),
                None => match &spec.lead {
                    Some(l) if spec.depth == Depth::int(0) => Fq::new(&f, l)?.add(&one)?,
                    _ => return Err(Error::Profile(format!("missing residue at {:?}", spec.root))),
                },
            };
            let lead = match (&spec.lead, &spec.depth) {
                (Some(l), _) => Some(Fq::new(&f, l)?),
                (None, Depth::Infinity) => None,
                (None, d) if *d == Depth::int(0) => Some(residue.sub(&one)?),
                (None, _) => return Err(Error::Profile(format!("missing lead at {:?}", spec.root))),
            };
            let at_root = OrbitValue { depth: spec.depth.clone(), residue, lead };
            let j = rg.frobenius_exponent_to(root);
            let value = at_root.frobenius_twist(q_pow(rg, j));
            if values[id].as_ref().is_some_and(|v| *v != value) {
                return Err(Error::Profile(format!("conflicting data on the orbit of {:?}", spec.root)));
            }
            values[id] = Some(value);
        }
        for o in rg.orbits() {
            if values[o.id].is_none() {
                if let Some(v) = values[o.negative].clone() {
                    values[o.id] = Some(v.negated()?);
                }
            }
        }
        let values: Vec<OrbitValue> = values
            .into_iter()
            .enumerate()
            .map(|(id, v)| {
                v.ok_or_else(|| {
                    Error::Profile(format!("no data for the orbit of {:?}", rg.datum().roots[rg.orbit(id).rep]))
                })
            })
            .collect::<Result<_>>()?;
        let bounded = self.bounded.unwrap_or_else(|| values.iter().all(|v| v.depth >= Depth::int(0)));
        Ok(ElementProfile { values, bounded })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CovectorValueSpec {
    pub root: Vector,
    pub lead: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CovectorSpec {
    #[serde(default)]
    pub levi_roots: Vec<Vector>,
    #[serde(default)]
    pub orbits: Vec<CovectorValueSpec>,
}

impl CovectorSpec {
    /// Depths follow GE1: `−r` off the Levi, infinite on it.
    pub fn resolve(&self, rg: &RootGalois, r: &Rational) -> Result<CovectorProfile> {
        let mut levi = BTreeSet::new();
        for v in &self.levi_roots {
            let id = rg.orbit_of_vector(v).ok_or_else(|| Error::Profile(format!("{v:?} is not a root")))?;
            levi.insert(id);
        }
        let n = rg.orbits().len();
        let mut leads: Vec<Option<Fq>> = vec![None; n];
        for spec in &self.orbits {
            let root = rg
                .datum()
                .index_of(&spec.root)
                .ok_or_else(|| Error::Profile(format!("{:?} is not a root", spec.root)))?;
            let id = rg.orbit_of_root(root);
            let lead = Fq::new(&rg.orbit_field(id), &spec.lead)?.pow(q_pow(rg, rg.frobenius_exponent_to(root)));
            if leads[id].as_ref().is_some_and(|l| *l != lead) {
                return Err(Error::Profile(format!("conflicting covector data at {:?}", spec.root)));
            }
            leads[id] = Some(lead);
        }
        for o in rg.orbits() {
            if leads[o.id].is_none() {
                leads[o.id] = leads[o.negative].as_ref().map(|l| l.neg());
            }
        }
        let values = rg
            .orbits()
            .iter()
            .map(|o| {
                if levi.contains(&o.id) {
                    Ok(CovectorValue { depth: Depth::Infinity, lead: None })
                } else {
                    let lead = leads[o.id].clone().ok_or_else(|| {
                        Error::Profile(format!("no covector data for the orbit of {:?}", rg.datum().roots[o.rep]))
                    })?;
                    Ok(CovectorValue { depth: Depth::at(-r), lead: Some(lead) })
                }
            })
            .collect::<Result<_>>()?;
        Ok(CovectorProfile { values, levi })
    }
}
