//! Points of the apartment, recorded as the affine-root cosets `ord_x α`.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::{Depth, Rational};
use crate::error::{Error, Result};
use crate::rootgal::{IntMatrix, OrbitInfo, OrbitKind, RootGalois, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetEntry {
    pub root: Vector,
    pub coset: Rational,
}

/// A named point, given either by coordinates in `X_* ⊗ Q` or by a table
/// of cosets keyed by roots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApartmentPoint {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cosets: Option<Vec<CosetEntry>>,
}

impl ApartmentPoint {
    pub fn at_coordinates(name: &str, coords: Vec<Rational>) -> ApartmentPoint {
        ApartmentPoint { name: name.into(), coordinates: Some(coords), cosets: None }
    }

    pub fn with_cosets(name: &str, cosets: Vec<CosetEntry>) -> ApartmentPoint {
        ApartmentPoint { name: name.into(), coordinates: None, cosets: Some(cosets) }
    }

    pub fn origin(name: &str, rank: usize) -> ApartmentPoint {
        ApartmentPoint::at_coordinates(name, vec![Rational::zero(); rank])
    }

    /// Validates against a model and computes one coset per orbit.
    pub fn resolve(&self, rg: &RootGalois) -> Result<ResolvedPoint> {
        let err = |msg: String| Error::Point { point: self.name.clone(), msg };
        let norbits = rg.orbits().len();
        let mut cosets: Vec<Option<Rational>> = vec![None; norbits];
        match (&self.coordinates, &self.cosets) {
            (Some(x), None) => {
                if x.len() != rg.rank() {
                    return Err(err(format!("{} coordinates for rank {}", x.len(), rg.rank())));
                }
                if rg.orbits().iter().any(|o| o.e != 1) {
                    return Err(err("coordinates are only meaningful without ramification".into()));
                }
                for o in rg.orbits() {
                    let value = |i: usize| {
                        let r = &rg.datum().roots[i];
                        r.iter().zip(x).fold(Rational::zero(), |a, (c, xi)| a + xi * &Rational::from_int(*c))
                    };
                    let c = value(o.rep).reduce_mod(1);
                    if o.roots.iter().any(|&i| value(i).reduce_mod(1) != c) {
                        return Err(err(format!(
                            "not Galois-invariant on the orbit of {:?}",
                            rg.datum().roots[o.rep]
                        )));
                    }
                    cosets[o.id] = Some(c);
                }
            }
            (None, Some(table)) => {
                for entry in table {
                    let id = rg
                        .orbit_of_vector(&entry.root)
                        .ok_or_else(|| err(format!("{:?} is not a root", entry.root)))?;
                    let c = entry.coset.reduce_mod(rg.orbit(id).e);
                    match &cosets[id] {
                        Some(old) if *old != c => {
                            return Err(err(format!("conflicting cosets on the orbit of {:?}", entry.root)))
                        }
                        _ => cosets[id] = Some(c),
                    }
                }
                for o in rg.orbits() {
                    if cosets[o.id].is_none() {
                        if let Some(c) = cosets[o.negative].clone() {
                            cosets[o.id] = Some((-c).reduce_mod(o.e));
                        }
                    }
                }
            }
            _ => return Err(err("give exactly one of coordinates and cosets".into())),
        }
        let pt = ResolvedPoint { name: self.name.clone(), cosets, coordinates: self.coordinates.clone() };
        let violations = pt.violations(rg);
        if let Some(v) = violations.into_iter().next() {
            return Err(err(v));
        }
        Ok(pt)
    }
}

/// A point with one coset representative `c_ω ∈ [0, 1/e_ω)` per orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedPoint {
    pub name: String,
    pub cosets: Vec<Option<Rational>>,
    pub coordinates: Option<Vec<Rational>>,
}

impl ResolvedPoint {
    pub fn from_cosets(name: &str, rg: &RootGalois, cosets: Vec<Option<Rational>>) -> Result<ResolvedPoint> {
        let cosets = cosets
            .into_iter()
            .zip(rg.orbits())
            .map(|(c, o)| c.map(|c| c.reduce_mod(o.e)))
            .collect();
        let pt = ResolvedPoint { name: name.into(), cosets, coordinates: None };
        match pt.violations(rg).into_iter().next() {
            Some(msg) => Err(Error::Point { point: name.into(), msg }),
            None => Ok(pt),
        }
    }

    /// Structural violations: antisymmetry under negation and the
    /// restriction on symmetric orbits.
    pub fn violations(&self, rg: &RootGalois) -> Vec<String> {
        let mut out = vec![];
        for o in rg.orbits() {
            let Some(c) = &self.cosets[o.id] else { continue };
            let zalpha = Rational::new(1, o.e as i64);
            if let Some(cn) = &self.cosets[o.negative] {
                if !(c + cn).in_lattice(o.e) {
                    out.push(format!("orbit {}: cosets of ±α are not negatives", o.id));
                }
            }
            if o.kind != OrbitKind::Nonsymmetric {
                let half = &zalpha / &Rational::from_int(2);
                if !c.is_zero() && *c != half {
                    out.push(format!("orbit {}: symmetric coset {} is neither 0 nor 1/(2e)", o.id, c));
                }
            }
        }
        out
    }

    pub fn coset(&self, orbit: usize) -> Result<&Rational> {
        self.cosets.get(orbit).and_then(|c| c.as_ref()).ok_or(Error::MissingCoset(orbit))
    }

    /// Image under a transport; coordinates move by the contragredient.
    pub fn transported(&self, w: &IntMatrix) -> Result<ResolvedPoint> {
        let coordinates = match &self.coordinates {
            Some(x) => Some(w.contragredient()?.apply_rational(x)),
            None => None,
        };
        Ok(ResolvedPoint { name: self.name.clone(), cosets: self.cosets.clone(), coordinates })
    }

    /// Value of `⟨α, x⟩` for coordinate points.
    pub fn pair_with(&self, root: &[i64]) -> Option<Rational> {
        self.coordinates.as_ref().map(|x| {
            let ints: Vec<Rational> = root.iter().map(|c| Rational::from_int(*c)).collect();
            ints.iter().zip(x).fold(Rational::zero(), |a, (r, xi)| a + r * xi)
        })
    }
}

/// Whether `d ∈ ord_x α`.
pub fn ord_x_contains(pt: &ResolvedPoint, orbit: &OrbitInfo, d: &Rational) -> Result<bool> {
    let c = pt.coset(orbit.id)?;
    Ok((d - c).in_lattice(orbit.e))
}

/// Number of points of `c + (1/e)Z` in `[lo, hi)`, in the order of the
/// extended depth line.
pub fn count_points(c: &Rational, e: u32, lo: &Depth, hi: &Depth) -> Result<u64> {
    let bad = || Error::BadInterval(lo.to_string(), hi.to_string());
    let (Depth::Finite { value: lv, plus: lp }, Depth::Finite { value: hv, plus: hp }) = (lo, hi) else {
        return Err(bad());
    };
    if lo > hi {
        return Err(bad());
    }
    let scale = Rational::from_int(e as i64);
    let lo_s = &(lv - c) * &scale;
    let hi_s = &(hv - c) * &scale;
    let kmin = if *lp { lo_s.floor() + 1 } else { lo_s.ceil() };
    let kmax = if *hp { hi_s.floor() } else { hi_s.ceil() - 1 };
    if kmax < kmin {
        return Ok(0);
    }
    (kmax - kmin + num_bigint::BigInt::from(1)).to_u64().ok_or_else(bad)
}

/// Number of points of `ord_x α` in `[lo, hi)`.
pub fn count_coset_points(pt: &ResolvedPoint, orbit: &OrbitInfo, lo: &Depth, hi: &Depth) -> Result<u64> {
    count_points(pt.coset(orbit.id)?, orbit.e, lo, hi)
}
