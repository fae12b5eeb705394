use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::Rational;
use crate::error::{Error, Result};

/// Square integer matrix acting on column vectors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    n: usize,
    a: Vec<i64>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> IntMatrix {
        let mut a = vec![0; n * n];
        for i in 0..n {
            a[i * n + i] = 1;
        }
        IntMatrix { n, a }
    }

    pub fn scalar(n: usize, c: i64) -> IntMatrix {
        let mut m = IntMatrix::identity(n);
        for x in m.a.iter_mut() {
            *x *= c;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<IntMatrix> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Galois("matrix is not square".into()));
        }
        Ok(IntMatrix { n, a: rows.concat() })
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.a.chunks(self.n.max(1)).map(|c| c.to_vec()).collect()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.a[i * self.n + j]
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        let n = self.n;
        let mut a = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = self.get(i, k);
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    a[i * n + j] += x * o.get(k, j);
                }
            }
        }
        IntMatrix { n, a }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    pub fn apply_rational(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(Rational::zero(), |acc, j| acc + &v[j] * &Rational::from_int(self.get(i, j)))
            })
            .collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.n;
        let mut a = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[j * n + i] = self.get(i, j);
            }
        }
        IntMatrix { n, a }
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.n)
    }

    /// Inverse over `Z`; fails unless the matrix is unimodular.
    pub fn inverse(&self) -> Result<IntMatrix> {
        let n = self.n;
        let mut m: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| {
                        if j < n {
                            Rational::from_int(self.get(i, j))
                        } else {
                            Rational::from_int((j - n == i) as i64)
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !m[r][col].is_zero())
                .ok_or_else(|| Error::Galois("singular matrix".into()))?;
            m.swap(col, pivot);
            let inv = Rational::one() / m[col][col].clone();
            for x in m[col].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let factor = m[r][col].clone();
                    let pivot = m[col].clone();
                    for (x, y) in m[r].iter_mut().zip(&pivot) {
                        *x = &*x - &(&factor * y);
                    }
                }
            }
        }
        let mut a = Vec::with_capacity(n * n);
        for row in &m {
            for x in &row[n..] {
                a.push(x.to_i64().ok_or_else(|| Error::Galois("matrix is not unimodular".into()))?);
            }
        }
        Ok(IntMatrix { n, a })
    }

    /// Action on the dual lattice, `(g⁻¹)ᵀ`, so that pairings are preserved.
    pub fn contragredient(&self) -> Result<IntMatrix> {
        Ok(self.inverse()?.transpose())
    }

    pub fn pow(&self, e: u32) -> IntMatrix {
        (0..e).fold(IntMatrix::identity(self.n), |acc, _| acc.mul(self))
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<IntMatrix, D::Error> {
        let rows = Vec::<Vec<i64>>::deserialize(d)?;
        IntMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Dimension of the fixed space of `m` over `Q`.
pub fn fixed_rank(m: &IntMatrix) -> usize {
    let n = m.dim();
    let mut rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| Rational::from_int(m.get(i, j) - (i == j) as i64)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..n).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, p);
        for r in 0..n {
            if r != rank && !rows[r][col].is_zero() {
                let f = &rows[r][col] / &rows[rank][col];
                let pivot = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        rank += 1;
    }
    n - rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_fixed_rank() {
        let m = IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        assert_eq!(m.mul(&m.inverse().unwrap()), IntMatrix::identity(2));
        assert!(IntMatrix::scalar(2, 2).inverse().is_err());
        assert_eq!(fixed_rank(&m), 1);
        assert_eq!(fixed_rank(&IntMatrix::scalar(2, -1)), 0);
        assert_eq!(fixed_rank(&IntMatrix::identity(3)), 3);
    }
}
