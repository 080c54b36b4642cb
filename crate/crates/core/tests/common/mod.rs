#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use ymps_core::{Poly, RatFun, Rational};

pub fn small_poly(max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-6i64..=6, 0..=max_len).prop_map(Poly::from_ints)
}

pub fn small_ratfun() -> impl Strategy<Value = RatFun> {
    (small_poly(5), small_poly(4))
        .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
        .prop_map(|(n, d)| RatFun::new(n, d).unwrap())
}

/// Rational functions whose denominator does not vanish at 0.
pub fn power_series_ratfun() -> impl Strategy<Value = RatFun> {
    (small_poly(5), small_poly(4), 1i64..=4)
        .prop_map(|(n, d, c)| {
            let den = &(&d * &Poly::from_ints([0, 1])) + &Poly::from_ints([c]);
            RatFun::new(n, den).unwrap()
        })
}

/// Truncated expansion of a polynomial: just its coefficients padded.
pub fn poly_series(p: &Poly, order: usize) -> Vec<BigInt> {
    (0..=order).map(|k| p.coeff(k).to_integer()).collect()
}

/// `1/(1 - t^k)` truncated: a 1 at every multiple of k.
pub fn geometric_series(k: usize, order: usize) -> Vec<BigInt> {
    (0..=order)
        .map(|i| if i % k == 0 { BigInt::from(1) } else { BigInt::zero() })
        .collect()
}

pub fn convolve(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().min(b.len());
    (0..n)
        .map(|k| (0..=k).map(|i| &a[i] * &b[k - i]).sum())
        .collect()
}

pub fn shift(a: &[BigInt], by: usize) -> Vec<BigInt> {
    (0..a.len())
        .map(|k| if k >= by { a[k - by].clone() } else { BigInt::zero() })
        .collect()
}

pub fn add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `(1 + t^k)^e` truncated, by repeated convolution.
pub fn binomial_power(k: usize, e: u32, order: usize) -> Vec<BigInt> {
    let base = poly_series(&Poly::one_plus_t_pow(k), order);
    let mut acc = poly_series(&Poly::one(), order);
    for _ in 0..e {
        acc = convolve(&acc, &base);
    }
    acc
}

/// `P_t(BU(n))` truncated, as a product of geometric series.
pub fn bu_expansion(n: usize, order: usize) -> Vec<BigInt> {
    (1..=n).fold(poly_series(&Poly::one(), order), |acc, i| {
        convolve(&acc, &geometric_series(2 * i, order))
    })
}

/// The rank 3 closed-form series expanded by convolution of truncated
/// factors only, without any rational-function division.
pub fn theorem1_by_convolution(g: u32, order: usize) -> Vec<BigInt> {
    let p = |c: &[i64]| poly_series(&Poly::from_ints(c.iter().copied()), order);
    let pow = |v: Vec<BigInt>, e: u32| {
        (0..e).fold(p(&[1]), |acc, _| convolve(&acc, &v))
    };
    let odd = convolve(&pow(p(&[1, 0, 0, 1]), g), &pow(p(&[1, 0, 0, 0, 0, 1]), g));
    let even = convolve(&p(&[1, 0, 1, 0, 1]), &pow(p(&[0, 0, 0, 1, 2, 1]), g));
    let bracket = add(&odd, &even);
    let front = convolve(&binomial_power(1, g, order), &bracket);
    convolve(&front, &bu_expansion(3, order))
}

pub fn to_ints(r: &RatFun, order: usize) -> Vec<BigInt> {
    r.expand(order).unwrap().to_integers().unwrap()
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
