//! Root data, finite Galois models acting on the character lattice, and
//! the classification of Galois orbits of roots.

mod matrix;
pub mod systems;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use matrix::{fixed_rank, IntMatrix};

use crate::arith::{field, FieldSpec};
use crate::error::{Error, Result};

pub type Vector = Vec<i64>;

pub fn pairing(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn negate(v: &[i64]) -> Vector {
    v.iter().map(|x| -x).collect()
}

/// Roots in `X*(T)` and matching coroots in `X_*(T)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDatum {
    pub rank: usize,
    pub roots: Vec<Vector>,
    pub coroots: Vec<Vector>,
    #[serde(skip)]
    index: HashMap<Vector, usize>,
}

impl RootDatum {
    pub fn new(rank: usize, roots: Vec<Vector>, coroots: Vec<Vector>) -> Result<RootDatum> {
        let bad = |m: String| Err(Error::RootDatum(m));
        if roots.len() != coroots.len() {
            return bad("roots and coroots differ in number".into());
        }
        let mut index = HashMap::new();
        for (i, (a, c)) in roots.iter().zip(&coroots).enumerate() {
            if a.len() != rank || c.len() != rank {
                return bad(format!("root {i} has the wrong length"));
            }
            if a.iter().all(|x| *x == 0) {
                return bad(format!("root {i} is zero"));
            }
            if pairing(a, c) != 2 {
                return bad(format!("<{a:?}, {c:?}> != 2"));
            }
            if index.insert(a.clone(), i).is_some() {
                return bad(format!("root {a:?} listed twice"));
            }
        }
        let rd = RootDatum { rank, roots, coroots, index };
        for (i, a) in rd.roots.iter().enumerate() {
            let neg = rd.index_of(&negate(a));
            match neg {
                Some(j) if rd.coroots[j] == negate(&rd.coroots[i]) => {}
                _ => return bad(format!("negation closure fails at {a:?}")),
            }
            let doubled: Vector = a.iter().map(|x| 2 * x).collect();
            if rd.index_of(&doubled).is_some() {
                return bad(format!("{a:?} and its double are both roots"));
            }
        }
        for i in 0..rd.roots.len() {
            let s = rd.reflection(i);
            let sc = s.contragredient()?;
            for (j, b) in rd.roots.iter().enumerate() {
                match rd.index_of(&s.apply(b)) {
                    Some(k) if rd.coroots[k] == sc.apply(&rd.coroots[j]) => {}
                    _ => return bad(format!("reflection in root {i} does not permute the roots")),
                }
            }
        }
        Ok(rd)
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn index_of(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn neg_index(&self, i: usize) -> usize {
        self.index_of(&negate(&self.roots[i])).expect("negation closed")
    }

    /// `s_α(v) = v − ⟨v, α∨⟩α` on `X*`.
    pub fn reflection(&self, i: usize) -> IntMatrix {
        let (a, c) = (&self.roots[i], &self.coroots[i]);
        let rows: Vec<Vector> = (0..self.rank)
            .map(|r| (0..self.rank).map(|s| (r == s) as i64 - a[r] * c[s]).collect())
            .collect();
        IntMatrix::from_rows(&rows).expect("square")
    }

    /// Image of root `i` under `g`, as a root index.
    pub fn act(&self, g: &IntMatrix, i: usize) -> Option<usize> {
        self.index_of(&g.apply(&self.roots[i]))
    }

    /// Whether `g` permutes roots and coroots compatibly.
    pub fn check_automorphism(&self, g: &IntMatrix) -> Result<()> {
        if g.dim() != self.rank {
            return Err(Error::Galois(format!("matrix of size {} on rank {}", g.dim(), self.rank)));
        }
        let gc = g.contragredient()?;
        for i in 0..self.len() {
            match self.act(g, i) {
                Some(j) if self.coroots[j] == gc.apply(&self.coroots[i]) => {}
                _ => {
                    return Err(Error::Galois(format!(
                        "{g:?} does not preserve the root datum at {:?}",
                        self.roots[i]
                    )))
                }
            }
        }
        Ok(())
    }

    /// The Weyl group, enumerated as matrices.
    pub fn weyl_group(&self) -> Vec<IntMatrix> {
        let gens: Vec<IntMatrix> = (0..self.len()).map(|i| self.reflection(i)).collect();
        closure(&IntMatrix::identity(self.rank), &gens)
    }

    fn rebuild_index(&mut self) {
        self.index = self.roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    }
}

pub(crate) fn closure(id: &IntMatrix, gens: &[IntMatrix]) -> Vec<IntMatrix> {
    let mut seen: BTreeSet<IntMatrix> = BTreeSet::new();
    let mut out = vec![id.clone()];
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id.clone()]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = s.mul(&g);
            if seen.insert(h.clone()) {
                out.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    out
}

/// A finite quotient of the Galois group: inertia generators and a Frobenius.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisModel {
    pub frobenius: IntMatrix,
    #[serde(default)]
    pub inertia: Vec<IntMatrix>,
}

impl GaloisModel {
    pub fn unramified(frobenius: IntMatrix) -> GaloisModel {
        GaloisModel { frobenius, inertia: vec![] }
    }

    /// `Int(w) ∘ self`.
    pub fn conjugate(&self, w: &IntMatrix) -> Result<GaloisModel> {
        let wi = w.inverse()?;
        let c = |g: &IntMatrix| w.mul(g).mul(&wi);
        Ok(GaloisModel { frobenius: c(&self.frobenius), inertia: self.inertia.iter().map(c).collect() })
    }
}

/// Residue field `F_q`, `q = p^f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueField {
    pub p: u64,
    pub f: u32,
}

impl ResidueField {
    pub fn q(&self) -> u128 {
        (self.p as u128).pow(self.f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitKind {
    Nonsymmetric,
    SymmetricUnramified,
    SymmetricRamified,
}

impl OrbitKind {
    pub fn is_symmetric(self) -> bool {
        self != OrbitKind::Nonsymmetric
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitInfo {
    pub id: usize,
    pub rep: usize,
    pub roots: Vec<usize>,
    pub n: u32,
    pub e: u32,
    pub f: u32,
    pub q_alpha: u128,
    pub kind: OrbitKind,
    pub sigma_witness: Option<IntMatrix>,
    /// Orbit of the negatives.
    pub negative: usize,
}

#[derive(Debug, Clone)]
struct GroupElement {
    matrix: IntMatrix,
    frob_exp: u32,
    in_inertia: bool,
}

/// A root datum with a Galois model and residue field, with orbits computed.
#[derive(Debug, Clone)]
pub struct RootGalois {
    datum: RootDatum,
    galois: GaloisModel,
    residue: ResidueField,
    group: Vec<GroupElement>,
    frob_order: u32,
    orbits: Vec<OrbitInfo>,
    root_orbit: Vec<usize>,
}

impl RootGalois {
    pub fn new(datum: RootDatum, galois: GaloisModel, residue: ResidueField) -> Result<RootGalois> {
        field(residue.p, residue.f)?;
        datum.check_automorphism(&galois.frobenius)?;
        for g in &galois.inertia {
            datum.check_automorphism(g)?;
        }
        let n = datum.rank;
        let id = IntMatrix::identity(n);
        let inertia = closure(&id, &galois.inertia);
        let inertia_set: BTreeSet<IntMatrix> = inertia.iter().cloned().collect();
        let frob = &galois.frobenius;
        let frob_inv = frob.inverse()?;
        for g in &inertia {
            if !inertia_set.contains(&frob.mul(g).mul(&frob_inv)) {
                return Err(Error::Galois("inertia is not normalized by Frobenius".into()));
            }
        }
        let mut gens = galois.inertia.clone();
        gens.push(frob.clone());
        let all = closure(&id, &gens);
        let frob_order = (all.len() / inertia.len()) as u32;
        let mut group = Vec::with_capacity(all.len());
        for g in all {
            let mut x = g.clone();
            let mut j = 0u32;
            while !inertia_set.contains(&x) {
                x = frob_inv.mul(&x);
                j += 1;
                if j > frob_order {
                    return Err(Error::Galois("group is not generated by inertia and Frobenius".into()));
                }
            }
            group.push(GroupElement { in_inertia: j == 0, matrix: g, frob_exp: j });
        }
        let mut rg = RootGalois {
            datum,
            galois,
            residue,
            group,
            frob_order,
            orbits: vec![],
            root_orbit: vec![],
        };
        rg.compute_orbits();
        Ok(rg)
    }

    fn orbit_under(&self, i: usize, inertia_only: bool) -> BTreeSet<usize> {
        self.group
            .iter()
            .filter(|g| !inertia_only || g.in_inertia)
            .map(|g| self.datum.act(&g.matrix, i).expect("checked automorphism"))
            .collect()
    }

    fn compute_orbits(&mut self) {
        let nroots = self.datum.len();
        let mut root_orbit = vec![usize::MAX; nroots];
        let mut orbits: Vec<OrbitInfo> = vec![];
        let q = self.residue.q();
        for start in 0..nroots {
            if root_orbit[start] != usize::MAX {
                continue;
            }
            let neg = self.datum.neg_index(start);
            for rep in [start, neg] {
                if root_orbit[rep] != usize::MAX {
                    continue;
                }
                let orbit = self.orbit_under(rep, false);
                let inertia_orbit = self.orbit_under(rep, true);
                let neg_rep = self.datum.neg_index(rep);
                let symmetric = orbit.contains(&neg_rep);
                let ramified = inertia_orbit.contains(&neg_rep);
                let kind = match (symmetric, ramified) {
                    (false, _) => OrbitKind::Nonsymmetric,
                    (true, false) => OrbitKind::SymmetricUnramified,
                    (true, true) => OrbitKind::SymmetricRamified,
                };
                let sigma_witness = if symmetric {
                    self.group
                        .iter()
                        .filter(|g| !ramified || g.in_inertia)
                        .find(|g| self.datum.act(&g.matrix, rep) == Some(neg_rep))
                        .map(|g| g.matrix.clone())
                } else {
                    None
                };
                let (n, e) = (orbit.len() as u32, inertia_orbit.len() as u32);
                let id = orbits.len();
                for &r in &orbit {
                    root_orbit[r] = id;
                }
                orbits.push(OrbitInfo {
                    id,
                    rep,
                    roots: orbit.into_iter().collect(),
                    n,
                    e,
                    f: n / e,
                    q_alpha: q.pow(n / e),
                    kind,
                    sigma_witness,
                    negative: usize::MAX,
                });
            }
        }
        for o in orbits.iter_mut() {
            o.negative = root_orbit[self.datum.neg_index(o.rep)];
        }
        self.orbits = orbits;
        self.root_orbit = root_orbit;
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn galois(&self) -> &GaloisModel {
        &self.galois
    }

    pub fn residue(&self) -> ResidueField {
        self.residue
    }

    pub fn q(&self) -> u128 {
        self.residue.q()
    }

    pub fn rank(&self) -> usize {
        self.datum.rank
    }

    pub fn orbits(&self) -> &[OrbitInfo] {
        &self.orbits
    }

    pub fn orbit(&self, id: usize) -> &OrbitInfo {
        &self.orbits[id]
    }

    pub fn orbit_of_root(&self, i: usize) -> usize {
        self.root_orbit[i]
    }

    pub fn orbit_of_vector(&self, v: &[i64]) -> Option<usize> {
        self.datum.index_of(v).map(|i| self.root_orbit[i])
    }

    pub fn group_order(&self) -> usize {
        self.group.len()
    }

    pub fn inertia_order(&self) -> usize {
        self.group.iter().filter(|g| g.in_inertia).count()
    }

    pub fn frobenius_order(&self) -> u32 {
        self.frob_order
    }

    pub fn inertia_is_trivial(&self) -> bool {
        self.inertia_order() == 1
    }

    pub fn group_elements(&self) -> impl Iterator<Item = (&IntMatrix, u32, bool)> {
        self.group.iter().map(|g| (&g.matrix, g.frob_exp, g.in_inertia))
    }

    /// Residue field of an orbit, `F_{q^{f_α}}`.
    pub fn orbit_field(&self, id: usize) -> Arc<FieldSpec> {
        field(self.residue.p, self.residue.f * self.orbits[id].f).expect("validated residue field")
    }

    /// Frobenius exponent `j` (mod `f_α`) of an element carrying the orbit
    /// representative to root `i`.
    pub fn frobenius_exponent_to(&self, i: usize) -> u32 {
        let o = &self.orbits[self.root_orbit[i]];
        let g = self
            .group
            .iter()
            .find(|g| self.datum.act(&g.matrix, o.rep) == Some(i))
            .expect("root lies in its orbit");
        g.frob_exp % o.f
    }

    /// Orbits grouped under negation, each pair listed once (smaller id first).
    pub fn pm_orbits(&self) -> Vec<(usize, usize)> {
        self.orbits.iter().filter(|o| o.id <= o.negative).map(|o| (o.id, o.negative)).collect()
    }

    /// Transport along a root-preserving lattice automorphism `w`: roots are
    /// relabeled `α ↦ wα` index by index and the Galois model conjugated.
    pub fn transport(&self, w: &IntMatrix) -> Result<Transport> {
        self.datum.check_automorphism(w).map_err(|_| {
            Error::Galois(format!("{w:?} does not preserve the roots"))
        })?;
        let wc = w.contragredient()?;
        let mut datum = self.datum.clone();
        datum.roots = self.datum.roots.iter().map(|r| w.apply(r)).collect();
        datum.coroots = self.datum.coroots.iter().map(|c| wc.apply(c)).collect();
        datum.rebuild_index();
        let model = RootGalois::new(datum, self.galois.conjugate(w)?, self.residue)?;
        for (a, b) in self.orbits.iter().zip(&model.orbits) {
            debug_assert_eq!(a.rep, b.rep);
            if (a.n, a.e, a.f, a.q_alpha, a.kind, a.negative) != (b.n, b.e, b.f, b.q_alpha, b.kind, b.negative)
                || a.roots != b.roots
            {
                return Err(Error::Galois("transport changed orbit invariants".into()));
            }
        }
        let root_image: Vec<usize> = (0..self.datum.len())
            .map(|i| self.datum.act(w, i).expect("checked automorphism"))
            .collect();
        let orbit_image = self
            .orbits
            .iter()
            .map(|o| {
                let image: BTreeSet<usize> = o.roots.iter().map(|&i| root_image[i]).collect();
                let target = self.root_orbit[root_image[o.rep]];
                let original: BTreeSet<usize> = self.orbits[target].roots.iter().copied().collect();
                (image == original).then_some(target)
            })
            .collect();
        Ok(Transport { model, root_image, orbit_image })
    }
}

/// Result of [`RootGalois::transport`].
#[derive(Debug, Clone)]
pub struct Transport {
    /// The transported model; its orbit ids agree with the source's.
    pub model: RootGalois,
    /// Index in the source datum of `w·α_i`.
    pub root_image: Vec<usize>,
    /// Source orbit equal to `w·ω`, when `w·ω` is an orbit of the source model.
    pub orbit_image: Vec<Option<usize>>,
}

/// Enumerates orbits of a root datum under a Galois model over `F_q`.
pub fn orbits(rd: &RootDatum, gm: &GaloisModel, residue: ResidueField) -> Result<Vec<OrbitInfo>> {
    Ok(RootGalois::new(rd.clone(), gm.clone(), residue)?.orbits)
}

/// See [`RootGalois::transport`].
pub fn weyl_transport(rg: &RootGalois, w: &IntMatrix) -> Result<Transport> {
    rg.transport(w)
}

#[cfg(test)]
mod tests {
    use super::systems::{root_system, System};
    use super::*;

    const Q3: ResidueField = ResidueField { p: 3, f: 1 };

    fn model(sys: System, frob: IntMatrix, inertia: Vec<IntMatrix>) -> RootGalois {
        RootGalois::new(root_system(sys), GaloisModel { frobenius: frob, inertia }, Q3).unwrap()
    }

    #[test]
    fn a1_inversion() {
        let rg = model(System::A1, IntMatrix::scalar(1, -1), vec![]);
        let o = &rg.orbits()[0];
        assert_eq!(rg.orbits().len(), 1);
        assert_eq!((o.kind, o.e, o.f, o.n, o.q_alpha), (OrbitKind::SymmetricUnramified, 1, 2, 2, 9));
        assert_eq!(o.negative, 0);
    }

    #[test]
    fn c2_inversion() {
        let rg = model(System::C2, IntMatrix::scalar(2, -1), vec![]);
        assert_eq!(rg.orbits().len(), 4);
        for o in rg.orbits() {
            assert_eq!((o.kind, o.f, o.e), (OrbitKind::SymmetricUnramified, 2, 1));
            assert_eq!(o.roots.len(), 2);
        }
    }

    #[test]
    fn a1_ramified() {
        let rg = model(System::A1, IntMatrix::identity(1), vec![IntMatrix::scalar(1, -1)]);
        let o = &rg.orbits()[0];
        assert_eq!((o.kind, o.e, o.f, o.n), (OrbitKind::SymmetricRamified, 2, 1, 2));
        assert_eq!(o.sigma_witness, Some(IntMatrix::scalar(1, -1)));
    }

    #[test]
    fn split_pairs_up() {
        let rg = model(System::A2, IntMatrix::identity(2), vec![]);
        assert_eq!(rg.orbits().len(), 6);
        for o in rg.orbits() {
            assert_eq!(o.kind, OrbitKind::Nonsymmetric);
            assert_ne!(o.negative, o.id);
            assert_eq!(rg.orbit(o.negative).negative, o.id);
        }
        assert_eq!(rg.pm_orbits().len(), 3);
    }

    #[test]
    fn transports() {
        let rg = model(System::C2, IntMatrix::scalar(2, -1), vec![]);
        let t = rg.transport(&IntMatrix::identity(2)).unwrap();
        assert_eq!(t.orbit_image, (0..4).map(Some).collect::<Vec<_>>());

        let rd = rg.datum();
        let alpha = rd.index_of(&[1, 0]).unwrap();
        let s = rd.reflection(alpha);
        let t = rg.transport(&s).unwrap();
        let beta = rg.orbit_of_vector(&[0, 1]).unwrap();
        let long = rg.orbit_of_vector(&[2, 1]).unwrap();
        assert_eq!(t.orbit_image[beta], Some(long));
        assert_eq!(t.orbit_image[long], Some(beta));

        let a1 = model(System::A1, IntMatrix::scalar(1, -1), vec![]);
        assert_eq!(a1.transport(&IntMatrix::scalar(1, -1)).unwrap().orbit_image, vec![Some(0)]);
        assert!(rg.transport(&IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap()).is_err());
    }

    #[test]
    fn witnesses_by_exhaustion() {
        let c2 = root_system(System::C2);
        for frob in c2.weyl_group() {
            let rg = RootGalois::new(c2.clone(), GaloisModel::unramified(frob), Q3).unwrap();
            for o in rg.orbits() {
                let neg = rg.datum().neg_index(o.rep);
                let any = rg.group_elements().any(|(g, _, _)| rg.datum().act(g, o.rep) == Some(neg));
                let inert = rg.group_elements().any(|(g, _, i)| i && rg.datum().act(g, o.rep) == Some(neg));
                assert_eq!(any, o.kind.is_symmetric());
                assert_eq!(inert, o.kind == OrbitKind::SymmetricRamified);
                let n = rg.orbit(o.negative);
                assert_eq!((n.n, n.e, n.f, n.q_alpha, n.kind), (o.n, o.e, o.f, o.q_alpha, o.kind));
            }
        }
    }

    #[test]
    fn rejects_bad_generators() {
        let a2 = root_system(System::A2);
        let shear = IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        assert!(RootGalois::new(a2, GaloisModel::unramified(shear), Q3).is_err());
    }
}
