//! Closed-form assembly of the antiperfect Morse identity
//!
//! ```text
//! P(A_ss) = P(A) + Σ_{μ ≠ 0} t^{λ_μ - 1} P(A_μ)
//! ```
//!
//! for rank 2 and rank 3 bundles. The stratum series is constant along each
//! family of types and the index is affine in `r`, so every infinite sum is
//! a geometric series and is evaluated exactly.

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::hn::{self, BundleSpec, HnError, HnType, StratumRecord};
use crate::poly::Poly;
use crate::ratfun::{bu_series, RatFun, RatFunError};
use crate::render;
use crate::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorseError {
    #[error(transparent)]
    Hn(#[from] HnError),
    #[error(transparent)]
    RatFun(#[from] RatFunError),
    #[error("Betti number at degree {degree} is not an integer")]
    NonIntegral { degree: usize },
    #[error("Betti number at degree {degree} is negative")]
    Negative { degree: usize },
    #[error("invalid geometric family: {0}")]
    BadFamily(String),
}

/// `Σ_{k ≥ 0} shape · t^{slope·(r0 + k·step) + offset}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricFamily {
    pub shape: RatFun,
    pub slope: u64,
    pub offset: i64,
    pub r0: u64,
    pub step: u64,
}

impl GeometricFamily {
    pub fn new(shape: RatFun, slope: u64, offset: i64, r0: u64, step: u64) -> Result<Self, MorseError> {
        let f = GeometricFamily { shape, slope, offset, r0, step };
        if slope == 0 || step == 0 {
            return Err(MorseError::BadFamily(format!(
                "exponent slope {slope} and step {step} must both be positive"
            )));
        }
        if f.exponent_i128(r0) < 0 {
            return Err(MorseError::BadFamily(format!(
                "exponent at r0 = {r0} is negative"
            )));
        }
        Ok(f)
    }

    fn exponent_i128(&self, r: u64) -> i128 {
        i128::from(self.slope) * i128::from(r) + i128::from(self.offset)
    }

    /// The exponent of the `r`-th member. Members before `r0` are not part
    /// of the family and may have negative exponents.
    pub fn exponent(&self, r: u64) -> i64 {
        self.exponent_i128(r) as i64
    }

    /// Parameters `r0, r0 + step, ...` of the members.
    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        (0u64..).map(move |k| self.r0 + k * self.step)
    }
}

/// `shape · t^{exponent(r0)} / (1 - t^{slope·step})`.
pub fn sum_family(f: &GeometricFamily) -> RatFun {
    let lead = f.exponent(f.r0) as usize;
    let ratio = (f.slope * f.step) as usize;
    f.shape.shift(lead) * RatFun::geometric(ratio)
}

/// The nonsemistable strata of a rank 2 or rank 3 bundle as a single
/// geometric family of `t^{λ_r - 1} P(A_r)`.
///
/// The family parameters are read off the stratum data itself: the shape
/// from the first member's series and the exponent from the indices of the
/// first two members.
pub fn unstable_family(bundle: BundleSpec, gbar: u32) -> Result<GeometricFamily, MorseError> {
    let rank = bundle.rank();
    let (r0, step) = match rank {
        2 => (hn::rank2_first_r(bundle.degree_class(), gbar), 2),
        3 => (1, 1),
        n => return Err(HnError::UnsupportedRank(n).into()),
    };
    let first = HnType::extremal(rank, r0);
    let second = HnType::extremal(rank, r0 + step);
    let l0 = hn::index_of_type(&first, gbar)?;
    let l1 = hn::index_of_type(&second, gbar)?;
    let slope = (l1 - l0) / step;
    let offset = l0 as i64 - 1 - (slope * r0) as i64;
    GeometricFamily::new(hn::stratum_series(&first, gbar)?, slope, offset, r0, step)
}

/// Equivariant Poincaré series of the flat connections, i.e. of the
/// semistable stratum.
pub fn flat_moduli_series(bundle: BundleSpec, gbar: u32) -> Result<RatFun, MorseError> {
    let family = unstable_family(bundle, gbar)?;
    Ok(hn::ambient_series(bundle.rank(), gbar) + sum_family(&family))
}

/// `(1+t)^g [ (1+t^3)^g (1+t^5)^g + (1+t^2+t^4)(t^3+2t^4+t^5)^g ] P_t(BU(3))`,
/// transcribed term by term.
pub fn theorem1_closed_form(gbar: u32) -> RatFun {
    let p = |c: &[i64]| Poly::from_ints(c.iter().copied());
    let odd = &p(&[1, 0, 0, 1]).pow(gbar) * &p(&[1, 0, 0, 0, 0, 1]).pow(gbar);
    let even = &p(&[1, 0, 1, 0, 1]) * &p(&[0, 0, 0, 1, 2, 1]).pow(gbar);
    let bracket = &odd + &even;
    RatFun::from_poly(&p(&[1, 1]).pow(gbar) * &bracket) * bu_series(3)
}

#[derive(Debug, Clone)]
pub struct Theorem1Report {
    pub gbar: u32,
    pub assembled: RatFun,
    pub closed_form: RatFun,
    pub verdict: Verdict,
}

impl Theorem1Report {
    pub fn to_json(&self) -> Value {
        json!({
            "gbar": self.gbar,
            "assembled": render::plain(&self.assembled),
            "closed_form": render::plain(&self.closed_form),
            "verdict": self.verdict.as_str(),
        })
    }
}

/// Compares the assembled rank 3 series with the closed form.
pub fn verify_theorem1(gbar: u32) -> Result<Theorem1Report, MorseError> {
    let assembled = flat_moduli_series(BundleSpec::new(3, 0)?, gbar)?;
    let closed_form = theorem1_closed_form(gbar);
    let verdict = Verdict::from_bool(assembled == closed_form);
    Ok(Theorem1Report { gbar, assembled, closed_form, verdict })
}

/// [`verify_theorem1`] for `gbar = 0..=gbar_max`, computed in parallel and
/// returned in order of `gbar`.
pub fn verify_theorem1_range(gbar_max: u32) -> Result<Vec<Theorem1Report>, MorseError> {
    (0..=gbar_max).into_par_iter().map(verify_theorem1).collect()
}

/// Betti numbers `b_0..b_N` of the flat-moduli stack.
#[derive(Debug, Clone, PartialEq)]
pub struct BettiTable {
    pub rank: usize,
    pub degree_class: u8,
    pub gbar: u32,
    pub betti: Vec<BigInt>,
    pub series: RatFun,
}

impl BettiTable {
    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank,
            "degree_class": self.degree_class,
            "gbar": self.gbar,
            "betti": self.betti.iter().map(|b| {
                serde_json::Number::from_string_unchecked(b.to_string())
            }).collect::<Vec<_>>(),
            "series": render::plain(&self.series),
        })
    }
}

/// Expands a series and insists every coefficient is a nonnegative integer.
pub fn betti_numbers(series: &RatFun, max_degree: usize) -> Result<Vec<BigInt>, MorseError> {
    let expansion = series.expand(max_degree)?;
    let ints = expansion
        .to_integers()
        .map_err(|degree| MorseError::NonIntegral { degree })?;
    if let Some(degree) = ints.iter().position(Signed::is_negative) {
        return Err(MorseError::Negative { degree });
    }
    Ok(ints)
}

pub fn betti_table(bundle: BundleSpec, gbar: u32, max_degree: usize) -> Result<BettiTable, MorseError> {
    let series = flat_moduli_series(bundle, gbar)?;
    Ok(BettiTable {
        rank: bundle.rank(),
        degree_class: bundle.degree_class(),
        gbar,
        betti: betti_numbers(&series, max_degree)?,
        series,
    })
}

/// Stratum records with `r ≤ cutoff`, the semistable stratum first
/// carrying the flat-moduli series.
pub fn stratum_records(bundle: BundleSpec, gbar: u32, cutoff: u64) -> Result<Vec<StratumRecord>, MorseError> {
    let types = hn::index_set(bundle, gbar, cutoff)?;
    types
        .into_iter()
        .map(|mu| {
            if mu.is_semistable() {
                Ok(StratumRecord {
                    index: 0,
                    series: flat_moduli_series(bundle, gbar)?,
                    summands: Vec::new(),
                    mu,
                })
            } else {
                Ok(StratumRecord::unstable(mu, gbar)?)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;
    use crate::ratfun::Series;
    use crate::Rational;
    use num_traits::Zero;

    fn r(s: &str) -> RatFun {
        parse(s).unwrap()
    }

    fn ints(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|b| i64::try_from(b.clone()).unwrap()).collect()
    }

    /// Adds members one by one until the exponent passes `order`.
    fn termwise(f: &GeometricFamily, order: usize) -> Series {
        let shape = f.shape.expand(order).unwrap();
        let mut acc = Series::zero(order);
        for r in f.members() {
            let e = f.exponent(r) as usize;
            if e > order {
                break;
            }
            acc.add_shifted(&shape, e);
        }
        acc
    }

    #[test]
    fn sum_family_examples() {
        let f = GeometricFamily::new(RatFun::one(), 2, 0, 1, 2).unwrap();
        assert_eq!(sum_family(&f), r("t^2/(1-t^4)"));
        let f = GeometricFamily::new(RatFun::one(), 1, 0, 1, 1).unwrap();
        assert_eq!(sum_family(&f), r("t/(1-t)"));
        let f = GeometricFamily::new(r("(1+t)^3/(1-t^2)^2"), 4, -1, 1, 1).unwrap();
        let closed = sum_family(&f);
        assert_eq!(closed, r("t^3*(1+t)^3/((1-t^2)^2*(1-t^4))"));
        assert_eq!(closed.expand(40).unwrap(), termwise(&f, 40));
    }

    #[test]
    fn family_validation() {
        assert!(GeometricFamily::new(RatFun::one(), 0, 0, 1, 1).is_err());
        assert!(GeometricFamily::new(RatFun::one(), 1, 0, 1, 0).is_err());
        assert!(GeometricFamily::new(RatFun::one(), 1, -2, 1, 1).is_err());
        assert!(GeometricFamily::new(RatFun::one(), 1, -1, 1, 1).is_ok());
    }

    #[test]
    fn unstable_family_parameters() {
        for g in 0..5 {
            let f = unstable_family(BundleSpec::new(3, 0).unwrap(), g).unwrap();
            assert_eq!((f.slope, f.offset, f.r0, f.step), (4, 3 * g as i64 - 4, 1, 1));
            for d in 0..2u8 {
                let f = unstable_family(BundleSpec::new(2, d).unwrap(), g).unwrap();
                assert_eq!((f.slope, f.offset, f.step), (2, g as i64 - 2, 2));
                assert_eq!(f.r0 % 2, (u64::from(d) + u64::from(g) + 1) % 2);
            }
        }
    }

    #[test]
    fn rank3_g0_matches_closed_form() {
        let s = flat_moduli_series(BundleSpec::new(3, 0).unwrap(), 0).unwrap();
        assert_eq!(s, r("(2+t^2+t^4)/((1-t^2)*(1-t^4)*(1-t^6))"));
    }

    #[test]
    fn rank2_d1_g1_series() {
        // ambient (1+t)(1+t^3)/((1-t^2)(1-t^4)) plus the odd-r family,
        // which starts at t^{λ_1 - 1} = t^1
        let ambient = r("(1+t)*(1+t^3)/((1-t^2)*(1-t^4))");
        let tail = r("t*(1+t)^2/((1-t^2)*(1-t^4))");
        let expected = &ambient + &tail;
        assert_eq!(expected, r("(1+2*t+2*t^2+2*t^3+t^4)/((1-t^2)*(1-t^4))"));
        assert_eq!(flat_moduli_series(BundleSpec::new(2, 1).unwrap(), 1).unwrap(), expected);
    }

    #[test]
    fn rank3_degree_class_irrelevant() {
        for g in 0..6 {
            assert_eq!(
                flat_moduli_series(BundleSpec::new(3, 0).unwrap(), g).unwrap(),
                flat_moduli_series(BundleSpec::new(3, 1).unwrap(), g).unwrap()
            );
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(theorem1_closed_form(0), r("(2+t^2+t^4)/((1-t^2)*(1-t^4)*(1-t^6))"));
        assert_eq!(
            theorem1_closed_form(1),
            r("(1+t)*((1+t^3)*(1+t^5)+(1+t^2+t^4)*(t^3+2*t^4+t^5))/((1-t^2)*(1-t^4)*(1-t^6))")
        );
        // b_0: two components over RP^2, connected once gbar >= 1
        let at_zero = |g| theorem1_closed_form(g).eval(&Rational::zero()).unwrap();
        assert_eq!(at_zero(0), Rational::from_integer(2.into()));
        for g in 1..8 {
            assert_eq!(at_zero(g), Rational::from_integer(1.into()));
        }
    }

    #[test]
    fn verify_small_g() {
        for g in [0, 1, 5] {
            assert!(verify_theorem1(g).unwrap().verdict.is_pass());
        }
        let reports = verify_theorem1_range(4).unwrap();
        assert_eq!(reports.iter().map(|r| r.gbar).collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn betti_examples() {
        let b3 = |g, n| ints(&betti_table(BundleSpec::new(3, 0).unwrap(), g, n).unwrap().betti);
        assert_eq!(b3(1, 3), vec![1, 1, 1, 3]);
        assert_eq!(b3(0, 2), vec![2, 0, 3]);
        let t = betti_table(BundleSpec::new(2, 1).unwrap(), 1, 2).unwrap();
        assert_eq!(ints(&t.betti), vec![1, 2, 3]);
    }

    #[test]
    fn betti_rejects_nonintegral_and_negative() {
        assert_eq!(betti_numbers(&r("1/(2-t)"), 3), Err(MorseError::NonIntegral { degree: 0 }));
        assert_eq!(betti_numbers(&r("1-t"), 3), Err(MorseError::Negative { degree: 1 }));
        assert_eq!(
            betti_numbers(&r("1/t"), 3),
            Err(MorseError::RatFun(RatFunError::NotPowerSeries))
        );
    }

    #[test]
    fn records_start_with_semistable() {
        let recs = stratum_records(BundleSpec::new(3, 0).unwrap(), 1, 3).unwrap();
        assert_eq!(recs.len(), 4);
        assert_eq!(recs[0].index, 0);
        assert_eq!(recs[0].series, theorem1_closed_form(1));
        assert_eq!(recs.iter().map(|r| r.index).collect::<Vec<_>>(), vec![0, 4, 8, 12]);
    }

    #[test]
    fn betti_json_shape() {
        let t = betti_table(BundleSpec::new(3, 0).unwrap(), 1, 3).unwrap();
        assert_eq!(t.to_json()["betti"].to_string(), "[1,1,1,3]");
    }
}
