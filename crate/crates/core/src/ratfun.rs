//! Normalized rational functions in `t` and their truncated expansions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::poly::Poly;
use crate::Rational;

/// Truncation order used when the caller does not supply one.
pub const DEFAULT_TRUNCATION: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatFunError {
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("denominator vanishes at t = 0; not a power series at the origin")]
    NotPowerSeries,
    #[error("pole of order {order} at t = 1")]
    PoleAtOne { order: usize },
}

/// A quotient `num / den` of polynomials, kept in canonical form:
/// `num` and `den` are integer polynomials with no common factor, the
/// combined integer content is 1, and `den` has positive leading
/// coefficient. Zero is `0 / 1`. Structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    /// Builds `num / den` and normalizes it.
    pub fn new(num: Poly, den: Poly) -> Result<Self, RatFunError> {
        if den.is_zero() {
            return Err(RatFunError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFun::zero());
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let (cn, pn) = num.primitive_part();
        let (cd, pd) = den.primitive_part();
        // primitive parts have positive leading coefficients, so the sign
        // of the scalar ratio lands on the numerator
        let q = cn / cd;
        let num = Poly::from_bigints(&pn).scale(&Rational::from_integer(q.numer().clone()));
        let den = Poly::from_bigints(&pd).scale(&Rational::from_integer(q.denom().clone()));
        Ok(RatFun { num, den })
    }

    pub fn zero() -> Self {
        RatFun {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFun::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun::new(p, Poly::one()).expect("unit denominator")
    }

    pub fn constant(c: Rational) -> Self {
        RatFun::from_poly(Poly::constant(c))
    }

    pub fn integer(c: i64) -> Self {
        RatFun::constant(Rational::from_integer(c.into()))
    }

    /// `t^k`.
    pub fn t_pow(k: usize) -> Self {
        RatFun::from_poly(Poly::monomial(Rational::one(), k))
    }

    /// `1 / (1 - t^k)`.
    pub fn geometric(k: usize) -> Self {
        RatFun::new(Poly::one(), Poly::one_minus_t_pow(k)).expect("nonzero denominator")
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn checked_div(&self, rhs: &RatFun) -> Result<RatFun, RatFunError> {
        if rhs.is_zero() {
            return Err(RatFunError::DivisionByZero);
        }
        RatFun::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn recip(&self) -> Result<RatFun, RatFunError> {
        RatFun::one().checked_div(self)
    }

    pub fn pow(&self, e: u32) -> RatFun {
        // powers of coprime polynomials stay coprime
        RatFun {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: usize) -> RatFun {
        self * &RatFun::t_pow(k)
    }

    /// The pair `(num, den)` with the overall sign chosen so that the
    /// lowest nonzero coefficient of the denominator is positive. This is
    /// the orientation used for display, where `1/(1-t)` reads better than
    /// `-1/(t-1)`.
    pub fn display_parts(&self) -> (Poly, Poly) {
        let low = self
            .den
            .coeffs()
            .iter()
            .find(|c| !c.is_zero())
            .expect("nonzero denominator");
        if low.is_negative() {
            (-self.num.clone(), -self.den.clone())
        } else {
            (self.num.clone(), self.den.clone())
        }
    }

    /// Integer coefficients of the display-oriented numerator/denominator.
    pub fn integer_parts(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let (n, d) = self.display_parts();
        let to_ints = |p: &Poly| -> Vec<BigInt> {
            p.coeffs().iter().map(|c| c.to_integer()).collect()
        };
        (to_ints(&n), to_ints(&d))
    }

    /// Maclaurin coefficients through `t^order`.
    pub fn expand(&self, order: usize) -> Result<Series, RatFunError> {
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return Err(RatFunError::NotPowerSeries);
        }
        let den = self.den.coeffs();
        let mut out: Vec<Rational> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut acc = self.num.coeff(k);
            for (i, d) in den.iter().enumerate().skip(1).take(k) {
                if !d.is_zero() {
                    acc -= d * &out[k - i];
                }
            }
            out.push(acc / &d0);
        }
        Ok(Series { coeffs: out })
    }

    /// Exact value of `lim_{t -> 1}`. Zero when the numerator vanishes to
    /// higher order at 1 than the denominator.
    pub fn limit_at_one(&self) -> Result<Rational, RatFunError> {
        if self.is_zero() {
            return Ok(Rational::zero());
        }
        let (a, n) = self.num.split_one_minus_t();
        let (b, d) = self.den.split_one_minus_t();
        match a.cmp(&b) {
            std::cmp::Ordering::Greater => Ok(Rational::zero()),
            std::cmp::Ordering::Equal => {
                let one = Rational::one();
                Ok(n.eval(&one) / d.eval(&one))
            }
            std::cmp::Ordering::Less => Err(RatFunError::PoleAtOne { order: b - a }),
        }
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }
}

impl Default for RatFun {
    fn default() -> Self {
        RatFun::zero()
    }
}

impl From<Poly> for RatFun {
    fn from(p: Poly) -> Self {
        RatFun::from_poly(p)
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        if self.den == rhs.den {
            return RatFun::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero den");
        }
        RatFun::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("nonzero den")
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs.clone())
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        RatFun::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero den")
    }
}

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -self.num,
            den: self.den,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RatFun {
            type Output = RatFun;
            fn $m(self, rhs: RatFun) -> RatFun {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatFun> for RatFun {
            type Output = RatFun;
            fn $m(self, rhs: &RatFun) -> RatFun {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl std::iter::Sum for RatFun {
    fn sum<I: Iterator<Item = RatFun>>(iter: I) -> Self {
        iter.fold(RatFun::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for RatFun {
    fn product<I: Iterator<Item = RatFun>>(iter: I) -> Self {
        iter.fold(RatFun::one(), |a, b| a * b)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::render::plain(self))
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFun({self})")
    }
}

/// A power series truncated modulo `t^(order+1)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Series {
    coeffs: Vec<Rational>,
}

impl Series {
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least t^0");
        Series { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Series {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    /// Truncated product; the result has the smaller of the two orders.
    pub fn mul_truncated(&self, rhs: &Series) -> Series {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n)
            .map(|k| {
                (0..=k)
                    .map(|i| &self.coeffs[i] * &rhs.coeffs[k - i])
                    .fold(Rational::zero(), |a, b| a + b)
            })
            .collect();
        Series { coeffs }
    }

    pub fn add(&self, rhs: &Series) -> Series {
        let n = self.order().min(rhs.order());
        Series {
            coeffs: (0..=n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect(),
        }
    }

    /// Adds `t^shift * rhs`, dropping anything above this series' order.
    pub fn add_shifted(&mut self, rhs: &Series, shift: usize) {
        for (k, c) in rhs.coeffs.iter().enumerate() {
            match self.coeffs.get_mut(k + shift) {
                Some(slot) => *slot += c,
                None => break,
            }
        }
    }

    /// The coefficients as integers, or the first degree whose
    /// coefficient is not an integer.
    pub fn to_integers(&self) -> Result<Vec<BigInt>, usize> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if c.is_integer() { Ok(c.to_integer()) } else { Err(k) })
            .collect()
    }
}

/// `∏ (1 - t^{2i})` for `i = 1..=n`.
pub fn even_cyclotomic_product(n: usize) -> Poly {
    (1..=n).fold(Poly::one(), |acc, i| &acc * &Poly::one_minus_t_pow(2 * i))
}

/// Poincaré series of `BU(n)`: `∏ 1/(1 - t^{2i})`.
pub fn bu_series(n: usize) -> RatFun {
    RatFun::new(Poly::one(), even_cyclotomic_product(n)).expect("nonzero denominator")
}
