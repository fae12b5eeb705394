//! Benchmark workloads.

use std::path::PathBuf;

use padchar::apartment::ResolvedPoint;
use padchar::arith::{field, fq_sgn, gauss_sum_direct, Fq};
use padchar::fuzz;
use padchar::mp::{verify_gxf_card, DepthFunction, TorusLattice};
use padchar::rootgal::systems::System;
use padchar::rootgal::{ResidueField, RootGalois};
use padchar::scenario::{Built, Scenario};
use padchar::signs::{assemble, SignContext};
use rand::seq::SliceRandom;

const F5: ResidueField = ResidueField { p: 5, f: 1 };

pub fn fixture(name: &str) -> Built {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).join("scenario.json");
    Scenario::load(p).unwrap().build().unwrap()
}

pub fn random_contexts(sys: System, n: usize, seed: u64) -> Vec<SignContext> {
    let mut rng = fuzz::rng(seed);
    (0..n).map(|_| fuzz::random_unramified_context(sys, F5, &mut rng).unwrap()).collect()
}

pub fn assemble_all(ctxs: &[SignContext]) -> usize {
    ctxs.iter().filter(|c| assemble(c).unwrap().stable_identity.is_some_and(|s| s.holds)).count()
}

pub struct GxfCase {
    pub rg: RootGalois,
    pub point: ResolvedPoint,
    pub f: DepthFunction,
    pub g: DepthFunction,
}

/// Same mix as the acceptance run: every fourth model is ramified.
pub fn gxf_cases(sys: System, n: usize, seed: u64) -> Vec<GxfCase> {
    let mut rng = fuzz::rng(seed);
    let frobs = fuzz::frobenius_choices(sys);
    (0..n)
        .map(|k| {
            let frob = frobs.choose(&mut rng).unwrap().clone();
            let rg = if k % 4 == 3 { fuzz::ramified_model(sys, F5, frob) } else { fuzz::unramified_model(sys, F5, frob) }
                .unwrap();
            let point = fuzz::random_point(&rg, "x", &mut rng).unwrap();
            let (f, g) = fuzz::random_depth_pair(&rg, &mut rng);
            GxfCase { rg, point, f, g }
        })
        .collect()
}

pub fn gxf_all(cases: &[GxfCase]) -> usize {
    cases
        .iter()
        .filter(|c| verify_gxf_card(&c.rg, &c.point, &c.f, &c.g, &TorusLattice::default_for(&c.rg)).unwrap())
        .count()
}

pub fn gauss_direct_upto(bound: u64) -> f64 {
    (3..=bound).step_by(2).filter_map(|q| gauss_sum_direct(q).ok()).map(|(re, im)| re + im).sum()
}

pub fn sgn_table(p: u64, k: u32) -> i64 {
    let f = field(p, k).unwrap();
    Fq::elements(&f).filter(|x| !x.is_zero()).map(|x| fq_sgn(&x).unwrap().to_i64()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workloads_run() {
        let ctxs = random_contexts(System::A2, 5, 1);
        assert_eq!(assemble_all(&ctxs), 5);
        let cases = gxf_cases(System::C2, 8, 2);
        assert_eq!(gxf_all(&cases), 8);
        assert_eq!(sgn_table(3, 2), 0);
        assert!(gauss_direct_upto(30).is_finite());
        assert_eq!(assemble(&fixture("c2_pgsp4_even").ctx).unwrap().pi.tilde_e, padchar::arith::Sign::Plus);
    }
}
