//! Built-in adjoint root data of rank at most two, in simple-root coordinates.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::{pairing, RootDatum, Vector};
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum System {
    A1,
    A2,
    B2,
    C2,
}

impl System {
    pub const ALL: [System; 4] = [System::A1, System::A2, System::B2, System::C2];

    /// Cartan matrix entries `⟨α_i, α_j∨⟩`.
    fn cartan(self) -> Vec<Vec<i64>> {
        match self {
            System::A1 => vec![vec![2]],
            System::A2 => vec![vec![2, -1], vec![-1, 2]],
            // α₁ long, α₂ short
            System::B2 => vec![vec![2, -2], vec![-1, 2]],
            // α₁ short, α₂ long
            System::C2 => vec![vec![2, -1], vec![-2, 2]],
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for System {
    type Err = Error;
    fn from_str(s: &str) -> Result<System, Error> {
        match s.to_ascii_uppercase().as_str() {
            "A1" => Ok(System::A1),
            "A2" => Ok(System::A2),
            "B2" => Ok(System::B2),
            "C2" => Ok(System::C2),
            other => Err(Error::RootDatum(format!("unknown system {other}"))),
        }
    }
}

/// Adjoint root datum: `X*` is the root lattice with the simple roots as basis.
pub fn root_system(sys: System) -> RootDatum {
    let c = sys.cartan();
    let n = c.len();
    let simple: Vec<Vector> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    // α_j∨ in the dual basis has coordinates ⟨α_i, α_j∨⟩
    let simple_co: Vec<Vector> = (0..n).map(|j| (0..n).map(|i| c[i][j]).collect()).collect();
    let mut pairs: BTreeSet<(Vector, Vector)> = (0..n).map(|i| (simple[i].clone(), simple_co[i].clone())).collect();
    loop {
        let mut grown = pairs.clone();
        for (b, bc) in &pairs {
            for i in 0..n {
                let k = pairing(b, &simple_co[i]);
                let l = pairing(&simple[i], bc);
                let nb: Vector = (0..n).map(|t| b[t] - k * simple[i][t]).collect();
                let nbc: Vector = (0..n).map(|t| bc[t] - l * simple_co[i][t]).collect();
                grown.insert((nb, nbc));
            }
        }
        if grown.len() == pairs.len() {
            break;
        }
        pairs = grown;
    }
    let mut list: Vec<(Vector, Vector)> = pairs.into_iter().collect();
    let key = |v: &Vector| {
        let h: i64 = v.iter().sum();
        (h < 0, h.abs(), v.iter().map(|x| x.abs()).rev().collect::<Vec<_>>())
    };
    list.sort_by_key(|(r, _)| key(r));
    let (roots, coroots) = list.into_iter().unzip();
    RootDatum::new(n, roots, coroots).expect("built-in systems are valid")
}
