#![allow(dead_code)]

use lievf_core::poly::{Monomial, Rat};
use lievf_core::{Poly2, VectorField2};
use num_bigint::BigInt;
use proptest::prelude::*;

/// Rationals with numerator and denominator below `2^bits` in magnitude.
pub fn rational(bits: u32) -> impl Strategy<Value = Rat> {
    let bound = 1i64 << bits;
    (-bound + 1..bound, 1i64..bound).prop_map(|(n, d)| Rat::new(BigInt::from(n), BigInt::from(d)))
}

pub fn poly2(max_deg: u32, bits: u32) -> impl Strategy<Value = Poly2> {
    let monos: Vec<Monomial<2>> = (0..=max_deg)
        .flat_map(|d| (0..=d).map(move |i| Monomial([i, d - i])))
        .collect();
    let n = monos.len();
    prop::collection::vec(prop::option::weighted(0.3, rational(bits)), n).prop_map(move |cs| {
        Poly2::from_terms(monos.iter().zip(cs).filter_map(|(m, c)| c.map(|c| (*m, c))))
    })
}

pub fn field(max_deg: u32) -> impl Strategy<Value = VectorField2> {
    (poly2(max_deg, 4), poly2(max_deg, 4)).prop_map(|(p, q)| VectorField2::new(p, q))
}
