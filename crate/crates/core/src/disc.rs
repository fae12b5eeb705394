//! Valuations of reduced discriminants, read off root profiles.

use crate::arith::{Depth, Rational};
use crate::elements::{Approximation, CovectorProfile, ElementProfile};
use crate::rootgal::RootGalois;

fn weighted_sum<'a>(rg: &RootGalois, depths: impl Iterator<Item = (usize, &'a Depth)>) -> Rational {
    let mut v = Rational::zero();
    for (o, d) in depths {
        if let Depth::Finite { value, .. } = d {
            v = v + value * &Rational::from_int(rg.orbit(o).n as i64);
        }
    }
    v
}

/// `v` with `|D_G(γ)| = q^{−v}`: each root with `α(γ) ≠ 1` contributes `ord_γ α`.
pub fn disc_val_gamma(rg: &RootGalois, profile: &ElementProfile) -> Rational {
    weighted_sum(rg, profile.values.iter().map(|v| &v.depth).enumerate())
}

/// Valuation of `D_G(X*)`: the sum of `ord_{X*} α` over roots off the Levi.
pub fn disc_val_xstar(rg: &RootGalois, cv: &CovectorProfile) -> Rational {
    weighted_sum(
        rg,
        cv.values.iter().enumerate().filter(|(o, _)| !cv.levi.contains(o)).map(|(o, v)| (o, &v.depth)),
    )
}

/// Discriminant of `γ_{≥r}` in `H`.
pub fn disc_val_tail(rg: &RootGalois, ap: &Approximation) -> Rational {
    let h = ap.centralizer_orbits();
    weighted_sum(rg, ap.gamma.values.iter().enumerate().filter(|(o, _)| h.contains(o)).map(|(o, v)| (o, &v.depth)))
}

/// `|D_G(γ)| = |D_G(γ_{<r})|·|D_H(γ_{≥r})|`.
pub fn check_part_disc(rg: &RootGalois, ap: &Approximation) -> bool {
    disc_val_gamma(rg, &ap.gamma) == disc_val_gamma(rg, &ap.head()) + disc_val_tail(rg, ap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{field, Fq};
    use crate::elements::{CovectorValue, OrbitValue};
    use crate::rootgal::systems::{root_system, System};
    use crate::rootgal::{GaloisModel, IntMatrix, ResidueField};
    use std::collections::BTreeSet;

    fn split(sys: System) -> RootGalois {
        let rank = root_system(sys).rank;
        RootGalois::new(root_system(sys), GaloisModel::unramified(IntMatrix::identity(rank)), ResidueField { p: 5, f: 1 })
            .unwrap()
    }

    fn profile(rg: &RootGalois, depth: impl Fn(usize) -> Depth) -> ElementProfile {
        let f = field(5, 1).unwrap();
        let values = rg
            .orbits()
            .iter()
            .map(|o| {
                let d = depth(o.rep);
                if d == Depth::int(0) {
                    OrbitValue { depth: d, residue: Fq::from_int(&f, 2), lead: Some(Fq::one(&f)) }
                } else {
                    let lead = if d.is_finite() { Some(Fq::one(&f)) } else { None };
                    OrbitValue { depth: d, residue: Fq::one(&f), lead }
                }
            })
            .collect();
        ElementProfile { values, bounded: true }
    }

    #[test]
    fn gamma_examples() {
        let a1 = split(System::A1);
        assert_eq!(disc_val_gamma(&a1, &profile(&a1, |_| Depth::int(0))), Rational::zero());
        assert_eq!(disc_val_gamma(&a1, &profile(&a1, |_| Depth::at(Rational::new(1, 2)))), Rational::one());
        let c2 = split(System::C2);
        let long = |r: usize| c2.datum().roots[r][0] % 2 == 0;
        let p = profile(&c2, |r| if long(r) { Depth::int(2) } else { Depth::int(0) });
        assert_eq!(disc_val_gamma(&c2, &p), Rational::from_int(8));
        let ap = Approximation::new(Rational::new(3, 2), p.clone());
        assert!(check_part_disc(&c2, &ap));
        assert_eq!(disc_val_gamma(&c2, &ap.head()), Rational::zero());
        assert_eq!(disc_val_tail(&c2, &ap), Rational::from_int(8));
        assert_eq!(disc_val_gamma(&c2, &p.inverse().unwrap()), Rational::from_int(8));
    }

    #[test]
    fn xstar_examples() {
        let c2 = split(System::C2);
        let f = field(5, 1).unwrap();
        let r = Rational::from_int(3);
        let toral = crate::elements::CovectorProfile::toral(&r, vec![Fq::one(&f); c2.orbits().len()]);
        assert_eq!(disc_val_xstar(&c2, &toral), Rational::from_int(-24));
        let all = CovectorProfile {
            values: vec![CovectorValue { depth: Depth::Infinity, lead: None }; c2.orbits().len()],
            levi: (0..c2.orbits().len()).collect::<BTreeSet<_>>(),
        };
        assert_eq!(disc_val_xstar(&c2, &all), Rational::zero());
        let a1 = split(System::A1);
        let half = crate::elements::CovectorProfile::toral(&Rational::new(1, 2), vec![Fq::one(&f); 2]);
        assert_eq!(disc_val_xstar(&a1, &half), Rational::from_int(-1));
    }

    #[test]
    fn extreme_cuts() {
        let c2 = split(System::C2);
        let p = profile(&c2, |_| Depth::int(0));
        assert!(check_part_disc(&c2, &Approximation::new(Rational::one(), p)));
        let central = profile(&c2, |_| Depth::Infinity);
        let ap = Approximation::new(Rational::one(), central);
        assert_eq!(ap.centralizer_orbits().len(), c2.orbits().len());
        assert!(check_part_disc(&c2, &ap));
    }
}
