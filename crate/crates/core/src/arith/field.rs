use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;

use crate::error::{Error, Result};

/// The finite field `F_{p^k}` presented as `F_p[x]/(m)`, where `m` is the
/// lexicographically smallest monic irreducible of degree `k`, comparing
/// coefficients from the constant term upward.
#[derive(Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u64,
    pub degree: u32,
    /// Monic modulus, low degree first, length `degree + 1`.
    pub modulus: Vec<u64>,
}

impl FieldSpec {
    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.degree)
    }
}

type FieldCache = HashMap<(u64, u32), Arc<FieldSpec>>;

static FIELDS: Lazy<Mutex<FieldCache>> = Lazy::new(Default::default);

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits an odd prime power into `(p, k)`.
pub fn odd_prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 3 || q.is_multiple_of(2) {
        return Err(Error::NotOddPrimePower(q));
    }
    let mut p = 3;
    while !q.is_multiple_of(p) {
        p += 2;
    }
    let (mut m, mut k) = (q, 0);
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    if m != 1 {
        return Err(Error::NotOddPrimePower(q));
    }
    Ok((p, k))
}

/// The canonical field of order `p^k`.
pub fn field(p: u64, k: u32) -> Result<Arc<FieldSpec>> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if k == 0 {
        return Err(Error::BadSubfield { sub: 0, degree: 0 });
    }
    if let Some(f) = FIELDS.lock().unwrap().get(&(p, k)) {
        return Ok(f.clone());
    }
    let spec = Arc::new(FieldSpec { p, degree: k, modulus: smallest_irreducible(p, k) });
    FIELDS.lock().unwrap().insert((p, k), spec.clone());
    Ok(spec)
}

fn smallest_irreducible(p: u64, k: u32) -> Vec<u64> {
    let total = (p as u128).pow(k);
    for idx in 0..total {
        let mut m = vec![0u64; k as usize + 1];
        let mut rest = idx;
        for i in (0..k as usize).rev() {
            m[i] = (rest % p as u128) as u64;
            rest /= p as u128;
        }
        m[k as usize] = 1;
        if poly::irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

pub(crate) mod poly {
    //! Dense polynomials over `F_p`, low degree first.

    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn inv_mod(a: u64, p: u64) -> u64 {
        pow_mod(a, p - 2, p)
    }

    pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1u64;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top] * lead_inv % p;
            let shift = top - dm;
            for (i, mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn pow_x_mod(e: u128, m: &[u64], p: u64) -> Vec<u64> {
        let mut result = vec![1u64];
        let mut base = rem(&[0, 1], m, p);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = rem(&mul(&result, &base, p), m, p);
            }
            base = rem(&mul(&base, &base, p), m, p);
            e >>= 1;
        }
        result
    }

    fn prime_factors(mut n: u64) -> Vec<u64> {
        let mut out = vec![];
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                out.push(d);
                while n.is_multiple_of(d) {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            out.push(n);
        }
        out
    }

    /// Rabin's irreducibility test for a monic polynomial.
    pub fn irreducible(m: &[u64], p: u64) -> bool {
        let k = (m.len() - 1) as u64;
        if k == 1 {
            return true;
        }
        if m[0] == 0 {
            return false;
        }
        let x = vec![0, 1];
        let full = pow_x_mod((p as u128).pow(k as u32), m, p);
        if !sub(&full, &x, p).is_empty() {
            return false;
        }
        for l in prime_factors(k) {
            let h = pow_x_mod((p as u128).pow((k / l) as u32), m, p);
            let g = gcd(m, &sub(&h, &x, p), p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

/// An element of a canonical finite field.
#[derive(Clone)]
pub struct Fq {
    field: Arc<FieldSpec>,
    coeffs: Vec<u64>,
}

impl PartialEq for Fq {
    fn eq(&self, other: &Fq) -> bool {
        self.field.p == other.field.p
            && self.field.degree == other.field.degree
            && self.coeffs == other.coeffs
    }
}

impl Eq for Fq {}

impl Hash for Fq {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.field.p.hash(h);
        self.field.degree.hash(h);
        self.coeffs.hash(h);
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}@F{}^{}", self.coeffs, self.field.p, self.field.degree)
    }
}

impl Fq {
    /// Element from low-degree-first coordinates; missing trailing
    /// coordinates are zero and values are reduced mod p.
    pub fn new(field: &Arc<FieldSpec>, coeffs: &[i64]) -> Result<Fq> {
        if coeffs.len() > field.degree as usize {
            return Err(Error::Profile(format!(
                "{} coordinates given for a field of degree {}",
                coeffs.len(),
                field.degree
            )));
        }
        let p = field.p as i64;
        let mut c = vec![0u64; field.degree as usize];
        for (i, v) in coeffs.iter().enumerate() {
            c[i] = v.rem_euclid(p) as u64;
        }
        Ok(Fq { field: field.clone(), coeffs: c })
    }

    pub fn from_int(field: &Arc<FieldSpec>, n: i64) -> Fq {
        Fq::new(field, &[n]).expect("degree at least one")
    }

    pub fn zero(field: &Arc<FieldSpec>) -> Fq {
        Fq::from_int(field, 0)
    }

    pub fn one(field: &Arc<FieldSpec>) -> Fq {
        Fq::from_int(field, 1)
    }

    /// The element with index `idx` in the base-p enumeration of coordinates.
    pub fn from_index(field: &Arc<FieldSpec>, mut idx: u128) -> Fq {
        let p = field.p as u128;
        let mut c = vec![0u64; field.degree as usize];
        for slot in c.iter_mut() {
            *slot = (idx % p) as u64;
            idx /= p;
        }
        Fq { field: field.clone(), coeffs: c }
    }

    pub fn elements(field: &Arc<FieldSpec>) -> impl Iterator<Item = Fq> + '_ {
        (0..field.order()).map(move |i| Fq::from_index(field, i))
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn order(&self) -> u128 {
        self.field.order()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|c| *c == 0)
    }

    fn same_field(&self, other: &Fq) -> Result<()> {
        if self.field.p != other.field.p || self.field.degree != other.field.degree {
            return Err(Error::FieldMismatch(
                format!("{}^{}", self.field.p, self.field.degree),
                format!("{}^{}", other.field.p, other.field.degree),
            ));
        }
        Ok(())
    }

    fn with_poly(&self, v: Vec<u64>) -> Fq {
        let mut c = vec![0u64; self.field.degree as usize];
        for (i, x) in v.into_iter().enumerate() {
            c[i] = x;
        }
        Fq { field: self.field.clone(), coeffs: c }
    }

    pub fn add(&self, other: &Fq) -> Result<Fq> {
        self.same_field(other)?;
        let p = self.field.p;
        let c = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a + b) % p).collect();
        Ok(Fq { field: self.field.clone(), coeffs: c })
    }

    pub fn sub(&self, other: &Fq) -> Result<Fq> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Fq {
        let p = self.field.p;
        let c = self.coeffs.iter().map(|a| (p - a) % p).collect();
        Fq { field: self.field.clone(), coeffs: c }
    }

    pub fn mul(&self, other: &Fq) -> Result<Fq> {
        self.same_field(other)?;
        let p = self.field.p;
        let prod = poly::mul(&poly::trim(self.coeffs.clone()), &poly::trim(other.coeffs.clone()), p);
        Ok(self.with_poly(poly::rem(&prod, &self.field.modulus, p)))
    }

    pub fn pow(&self, mut e: u128) -> Fq {
        let mut result = Fq::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).expect("same field");
            }
            base = base.mul(&base).expect("same field");
            e >>= 1;
        }
        result
    }

    pub fn inv(&self) -> Result<Fq> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.pow(self.order() - 2))
    }

    /// Product of the conjugates of `self` over the subfield of degree `sub`.
    pub fn norm(&self, sub: u32) -> Result<Fq> {
        let k = self.field.degree;
        if sub == 0 || !k.is_multiple_of(sub) {
            return Err(Error::BadSubfield { sub, degree: k });
        }
        let big_q = (self.field.p as u128).pow(sub);
        let mut acc = Fq::one(&self.field);
        let mut conj = self.clone();
        for _ in 0..(k / sub) {
            acc = acc.mul(&conj)?;
            conj = conj.pow(big_q);
        }
        Ok(acc)
    }

    /// Whether `self` lies in the subfield of degree `sub`.
    pub fn in_subfield(&self, sub: u32) -> bool {
        self.field.degree.is_multiple_of(sub) && self.pow((self.field.p as u128).pow(sub)) == *self
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self) -> Result<u128> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let n = self.order() - 1;
        let mut ord = n;
        for l in factor_u128(n) {
            while ord.is_multiple_of(l) && self.pow(ord / l).is_one() {
                ord /= l;
            }
        }
        Ok(ord)
    }

    /// The first generator of the multiplicative group in index order.
    pub fn generator(field: &Arc<FieldSpec>) -> Fq {
        let n = field.order() - 1;
        Fq::elements(field)
            .skip(1)
            .find(|x| x.mult_order().ok() == Some(n))
            .expect("multiplicative group is cyclic")
    }
}

pub(crate) fn factor_u128(mut n: u128) -> Vec<u128> {
    let mut out = vec![];
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A sign `±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Sign {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn pow_of_minus_one(n: i64) -> Sign {
        Sign::from_parity(n.rem_euclid(2) == 1)
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(n: i64) -> Option<Sign> {
        match n {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, o: Sign) -> Sign {
        Sign::from_parity((self == Sign::Minus) != (o == Sign::Minus))
    }
}

impl std::iter::Product for Sign {
    fn product<I: Iterator<Item = Sign>>(iter: I) -> Sign {
        iter.fold(Sign::Plus, |a, b| a * b)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

fn read_sign(x: &Fq) -> Sign {
    if x.is_one() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Quadratic character of `F_q^×`.
pub fn fq_sgn(x: &Fq) -> Result<Sign> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    Ok(read_sign(&x.pow((x.order() - 1) / 2)))
}

/// The nontrivial `±1`-character of the norm-one subgroup of `F_{q²}^×`.
pub fn fq_norm_one_sgn(x: &Fq) -> Result<Sign> {
    let k = x.field().degree;
    if !k.is_multiple_of(2) {
        return Err(Error::BadSubfield { sub: k / 2, degree: k });
    }
    let q = (x.field().p as u128).pow(k / 2);
    if !x.pow(q + 1).is_one() {
        return Err(Error::NormNotOne);
    }
    Ok(read_sign(&x.pow(q.div_ceil(2))))
}

/// Norm of `x` down to the subfield of degree `sub`.
pub fn fq_norm(x: &Fq, sub: u32) -> Result<Fq> {
    x.norm(sub)
}
