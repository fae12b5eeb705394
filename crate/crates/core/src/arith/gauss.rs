use super::field::{field, odd_prime_power, Fq};
use super::FourthRoot;
use crate::error::Result;

/// Normalized quadratic Gauss sum `q^{-1/2} Σ_t ψ(t²)` for the additive
/// character `ψ(t) = exp(2πi Tr(t)/p)`.
pub fn gauss_sum(q: u64) -> Result<FourthRoot> {
    let (p, k) = odd_prime_power(q)?;
    let base = if p % 4 == 1 { FourthRoot::ONE } else { FourthRoot::I };
    let sign = if k % 2 == 0 { FourthRoot::MINUS_ONE } else { FourthRoot::ONE };
    Ok(sign * base.pow(k as i64))
}

/// Raw sum `Σ_t exp(2πi Tr(t²)/p)` computed in floating point by direct
/// enumeration of the field.
pub fn gauss_sum_direct(q: u64) -> Result<(f64, f64)> {
    let (p, k) = odd_prime_power(q)?;
    let f = field(p, k)?;
    // trace is linear: precompute it on the power basis
    let basis_trace: Vec<u64> = (0..k as usize)
        .map(|i| {
            let mut c = vec![0i64; k as usize];
            c[i] = 1;
            let x = Fq::new(&f, &c).expect("coordinates fit");
            let mut acc = Fq::zero(&f);
            let mut conj = x;
            for _ in 0..k {
                acc = acc.add(&conj).expect("same field");
                conj = conj.pow(p as u128);
            }
            acc.coeffs()[0]
        })
        .collect();
    let (mut re, mut im) = (0.0, 0.0);
    for t in Fq::elements(&f) {
        let s = t.mul(&t)?;
        let tr = s.coeffs().iter().zip(&basis_trace).fold(0u64, |a, (c, b)| (a + c * b) % p);
        let angle = 2.0 * std::f64::consts::PI * tr as f64 / p as f64;
        re += angle.cos();
        im += angle.sin();
    }
    Ok((re, im))
}
