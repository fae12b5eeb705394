//! Exact rationals, the extended depth line, finite fields, signs and Gauss sums.

mod depth;
pub mod field;
mod fourth;
mod gauss;
mod qi;
mod rational;

pub use depth::Depth;
pub use field::{field, fq_norm, fq_norm_one_sgn, fq_sgn, odd_prime_power, FieldSpec, Fq, Sign};
pub use fourth::FourthRoot;
pub use gauss::{gauss_sum, gauss_sum_direct};
pub use qi::Qi;
pub use rational::Rational;

/// Tilde involution on depths; see [`Depth::tilde`].
pub fn depth_tilde(d: &Depth) -> crate::Result<Depth> {
    d.tilde()
}
