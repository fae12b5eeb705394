//! The `padchar/1` scenario format: one JSON document describing a root
//! datum with Galois action, named points, an approximation, a covector,
//! a class table and oracle values.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::apartment::{ApartmentPoint, ResolvedPoint};
use crate::arith::{Fq, Qi, Rational, Sign};
use crate::charform::{CharInput, CharOracle, ClassRecord, ConjClassTable, OrbitalOracle};
use crate::elements::{Approximation, CovectorSpec, ProfileSpec};
use crate::error::{Error, Result};
use crate::rootgal::systems::{root_system, System};
use crate::rootgal::{GaloisModel, ResidueField, RootDatum, RootGalois, Vector};
use crate::signs::{RamifiedExtra, Ranks, SignContext};

pub const SCHEMA: &str = "padchar/1";

/// Either a built-in system name or explicit roots and coroots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DatumSpec {
    System { system: String },
    Explicit { rank: usize, roots: Vec<Vector>, coroots: Vec<Vector> },
}

impl DatumSpec {
    pub fn resolve(&self) -> Result<RootDatum> {
        match self {
            DatumSpec::System { system } => Ok(root_system(system.parse::<System>()?)),
            DatumSpec::Explicit { rank, roots, coroots } => RootDatum::new(*rank, roots.clone(), coroots.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamifiedExtraSpec {
    pub root: Vector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_unit: Option<Vec<i64>>,
    pub rank_pm: u32,
    pub kottwitz_sign: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitalEntry {
    pub class: String,
    pub element: String,
    pub value: Qi,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OracleSpec {
    #[serde(default)]
    pub orbital: Vec<OrbitalEntry>,
    #[serde(default)]
    pub stable_orbital: Vec<OrbitalEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaEntry {
    pub class: String,
    pub value: Qi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Flags {
    /// Asserts that inertia acts trivially; checked against the model.
    #[serde(default)]
    pub unramified_split: bool,
    #[serde(default)]
    pub maximally_split_levi: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub schema: String,
    #[serde(default)]
    pub name: String,
    pub residue_field: ResidueField,
    pub root_datum: DatumSpec,
    pub galois: GaloisModel,
    pub points: Vec<ApartmentPoint>,
    pub base_point: String,
    pub depth_r: Rational,
    pub gamma: ProfileSpec,
    #[serde(default)]
    pub xstar: CovectorSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranks: Option<Ranks>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ramified_extras: Vec<RamifiedExtraSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub classes: Vec<ClassRecord>,
    #[serde(default)]
    pub oracles: OracleSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub theta_values: Vec<ThetaEntry>,
    #[serde(default)]
    pub flags: Flags,
}

/// A resolved scenario.
#[derive(Debug, Clone)]
pub struct Built {
    pub name: String,
    pub ctx: SignContext,
    pub points: BTreeMap<String, ResolvedPoint>,
    pub element: String,
    pub classes: ConjClassTable,
    pub chi: CharOracle,
    pub orbital: OrbitalOracle,
    pub stable: OrbitalOracle,
}

impl Built {
    pub fn input(&self) -> CharInput<'_> {
        CharInput { ctx: &self.ctx, element: &self.element, points: &self.points, classes: &self.classes }
    }
}

fn scen(msg: impl Into<String>) -> Error {
    Error::Scenario(msg.into())
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario> {
        serde_json::from_str(text).map_err(|e| scen(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Scenario> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| scen(format!("{}: {e}", path.display())))?;
        Scenario::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn model(&self) -> Result<RootGalois> {
        if self.schema != SCHEMA {
            return Err(scen(format!("unsupported schema {:?}", self.schema)));
        }
        let rg = RootGalois::new(self.root_datum.resolve()?, self.galois.clone(), self.residue_field)?;
        if self.flags.unramified_split && !rg.inertia_is_trivial() {
            return Err(scen("flag unramified_split is set but inertia acts nontrivially"));
        }
        Ok(rg)
    }

    /// Resolves everything and checks structural validity. Profile rule
    /// violations are reported through [`SignContext::violations`], not here.
    pub fn build(&self) -> Result<Built> {
        let rg = self.model()?;
        let mut points = BTreeMap::new();
        for p in &self.points {
            if points.insert(p.name.clone(), p.resolve(&rg)?).is_some() {
                return Err(scen(format!("point {} defined twice", p.name)));
            }
        }
        let base = points.get(&self.base_point).ok_or_else(|| scen(format!("unknown base point {}", self.base_point)))?;
        let gamma = self.gamma.resolve(&rg)?;
        let covector = self.xstar.resolve(&rg, &self.depth_r)?;
        let approx = Approximation::new(self.depth_r.clone(), gamma);
        let mut ctx = SignContext::new(rg, base.clone(), approx, covector);
        ctx.ranks = self.ranks;
        ctx.maximally_split_levi = self.flags.maximally_split_levi;
        for x in &self.ramified_extras {
            let id = ctx.rg.orbit_of_vector(&x.root).ok_or_else(|| scen(format!("{:?} is not a root", x.root)))?;
            let w_unit = match &x.w_unit {
                Some(c) => Some(Fq::new(&ctx.rg.orbit_field(id), c)?),
                None => None,
            };
            let extra = RamifiedExtra { w_unit, rank_pm: x.rank_pm, kottwitz_sign: x.kottwitz_sign };
            let neg = ctx.rg.orbit(id).negative;
            for key in [id, neg] {
                if ctx.extras.insert(key, extra.clone()).is_some_and(|old| old != extra) {
                    return Err(scen(format!("conflicting ramified data at {:?}", x.root)));
                }
            }
        }

        let classes = ConjClassTable { classes: self.classes.clone() };
        if !classes.classes.is_empty() {
            classes.validate(&points)?;
            for c in &classes.classes {
                ctx.rg.datum().check_automorphism(&c.weyl).map_err(|e| Error::Class(c.id.clone(), e.to_string()))?;
            }
        }
        let known = |class: &str| classes.classes.iter().any(|c| c.id == class);
        let known_stable = |class: &str| classes.classes.iter().any(|c| c.h_stable_class == class);
        let collect = |entries: &[OrbitalEntry], stable_mode: bool| -> Result<OrbitalOracle> {
            let mut out = OrbitalOracle { entries: BTreeMap::new(), stable_mode };
            for e in entries {
                let ok = if stable_mode { known_stable(&e.class) } else { known(&e.class) };
                if !ok {
                    return Err(scen(format!("oracle value for unknown class {}", e.class)));
                }
                out.entries.insert((e.class.clone(), e.element.clone()), e.value.clone());
            }
            Ok(out)
        };
        let orbital = collect(&self.oracles.orbital, false)?;
        let stable = collect(&self.oracles.stable_orbital, true)?;
        let mut chi = CharOracle::default();
        for t in &self.theta_values {
            if !known(&t.class) {
                return Err(scen(format!("character value for unknown class {}", t.class)));
            }
            chi.values.insert(t.class.clone(), t.value.clone());
        }
        Ok(Built {
            name: self.name.clone(),
            ctx,
            points,
            element: self.gamma.element_id.clone(),
            classes,
            chi,
            orbital,
            stable,
        })
    }

    /// All problems found, structural or profile-level; empty means valid.
    pub fn problems(&self) -> Vec<String> {
        match self.build() {
            Err(e) => vec![e.to_string()],
            Ok(b) => {
                let mut out = b.ctx.violations();
                out.extend(b.ctx.approx.gamma.residue_relations(&b.ctx.rg).iter().map(|v| format!("gamma {v}")));
                for (name, p) in &b.points {
                    out.extend(p.violations(&b.ctx.rg).into_iter().map(|v| format!("point {name}: {v}")));
                }
                out
            }
        }
    }
}
