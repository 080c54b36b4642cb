//! Euler-characteristic limits at `t = 1`.
//!
//! If the flat-moduli series is `p(t) · P_t(BU(n))`, then `p(1)` counts the
//! total Betti number of the torus-fixed locus, which is `2^{n-1}` copies of
//! `(S^1)^{n·gbar}`. This gives an exact check on the rank 2 and rank 3
//! series and, in rank `n ≥ 4`, shows that the antiperfect identity cannot
//! hold.

use num_bigint::BigInt;
use num_traits::Pow;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::hn::{BundleSpec, HnError};
use crate::morse::{self, GeometricFamily, MorseError};
use crate::poly::Poly;
use crate::ratfun::{even_cyclotomic_product, RatFun, RatFunError};
use crate::{Rational, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EulerError {
    #[error(transparent)]
    RatFun(#[from] RatFunError),
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error("rank {0} is not supported here")]
    UnsupportedRank(usize),
}

impl From<HnError> for EulerError {
    fn from(e: HnError) -> Self {
        EulerError::Morse(e.into())
    }
}

fn pow2(e: u64) -> BigInt {
    BigInt::from(2u8).pow(e)
}

/// `lim_{t→1} series · ∏_{i=1}^n (1 - t^{2i})`.
pub fn euler_limit(series: &RatFun, n: usize) -> Result<Rational, EulerError> {
    let cleared = series * &RatFun::from_poly(even_cyclotomic_product(n));
    Ok(cleared.limit_at_one()?)
}

/// `2^{(gbar+1)n - 1}`, the closed form for `p(1)`.
pub fn expected_euler(n: usize, gbar: u32) -> BigInt {
    pow2((u64::from(gbar) + 1) * n as u64 - 1)
}

/// Total Betti number of the fixed locus, counted directly:
/// `2^{n-1}` components, each a torus of dimension `n·gbar`.
pub fn fixed_point_oracle(n: usize, gbar: u32) -> BigInt {
    let components = pow2(n as u64 - 1);
    let torus_betti = pow2(n as u64 * u64::from(gbar));
    components * torus_betti
}

#[derive(Debug, Clone, PartialEq)]
pub struct EulerReport {
    pub rank: usize,
    pub degree_class: u8,
    pub gbar: u32,
    pub computed_limit: Rational,
    pub expected: BigInt,
    pub oracle: BigInt,
    pub verdict: Verdict,
}

impl EulerReport {
    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank,
            "degree_class": self.degree_class,
            "gbar": self.gbar,
            "computed_limit": self.computed_limit.to_string(),
            "expected": self.expected.to_string(),
            "oracle": self.oracle.to_string(),
            "verdict": self.verdict.as_str(),
        })
    }
}

pub fn lemma71_report(bundle: BundleSpec, gbar: u32) -> Result<EulerReport, EulerError> {
    let n = bundle.rank();
    if !(2..=3).contains(&n) {
        return Err(EulerError::UnsupportedRank(n));
    }
    let series = morse::flat_moduli_series(bundle, gbar)?;
    let computed_limit = euler_limit(&series, n)?;
    let expected = expected_euler(n, gbar);
    let oracle = fixed_point_oracle(n, gbar);
    let verdict = Verdict::from_bool(
        computed_limit == Rational::from_integer(expected.clone()) && expected == oracle,
    );
    Ok(EulerReport {
        rank: n,
        degree_class: bundle.degree_class(),
        gbar,
        computed_limit,
        expected,
        oracle,
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureVerdict {
    Consistent,
    Contradiction,
    Slack,
}

impl FailureVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            FailureVerdict::Consistent => "consistent",
            FailureVerdict::Contradiction => "contradiction",
            FailureVerdict::Slack => "slack",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FailureReport {
    pub rank: usize,
    pub gbar: u32,
    pub j_limit: Rational,
    pub budget: Rational,
    pub verdict: FailureVerdict,
}

impl FailureReport {
    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank,
            "gbar": self.gbar,
            "j_limit": self.j_limit.to_string(),
            "budget": self.budget.to_string(),
            "verdict": self.verdict.as_str(),
        })
    }
}

/// The strata `(d, 0, ..., 0, -d)`, `d ≥ 1`, of a rank `n` bundle, with
/// each stratum series multiplied by `∏_{i=1}^n (1 - t^{2i})` and the
/// unknown rank `n-2` numerator replaced by its value at 1.
///
/// Returns the closed-form sum `Σ_d t^{λ_d - 1} · (cleared series)`.
pub fn j_family_sum(n: usize, gbar: u32) -> Result<RatFun, EulerError> {
    if n < 3 {
        return Err(EulerError::UnsupportedRank(n));
    }
    let q_at_one = Rational::from_integer(expected_euler(n - 2, gbar));
    let line_part = RatFun::from_poly(Poly::one_plus_t_pow(1).pow(2 * gbar))
        * RatFun::geometric(2);
    let cleared = RatFun::from_poly(
        &Poly::one_minus_t_pow(2 * n - 2) * &Poly::one_minus_t_pow(2 * n),
    );
    let shape = RatFun::constant(q_at_one) * line_part * cleared;
    // λ_d from the index of (d, 0, ..., 0, -d)
    let l1 = crate::hn::index_of_type(&crate::hn::HnType::extremal(n, 1), gbar)?;
    let l2 = crate::hn::index_of_type(&crate::hn::HnType::extremal(n, 2), gbar)?;
    let slope = l2 - l1;
    let offset = l1 as i64 - 1 - slope as i64;
    let family = GeometricFamily::new(shape, slope, offset, 1, 1)?;
    Ok(morse::sum_family(&family))
}

pub fn prop_failure_report(n: usize, gbar: u32) -> Result<FailureReport, EulerError> {
    let j_limit = j_family_sum(n, gbar)?.limit_at_one()?;
    let budget = Rational::from_integer(expected_euler(n, gbar) - pow2(n as u64 * u64::from(gbar)));
    let verdict = match j_limit.cmp(&budget) {
        std::cmp::Ordering::Equal => FailureVerdict::Consistent,
        std::cmp::Ordering::Greater => FailureVerdict::Contradiction,
        std::cmp::Ordering::Less => FailureVerdict::Slack,
    };
    Ok(FailureReport { rank: n, gbar, j_limit, budget, verdict })
}

/// Euler reports for rank 2 (both degree classes) and rank 3 over
/// `gbar = 0..=gbar_max`, ordered by rank, degree class, then `gbar`.
pub fn lemma71_suite(gbar_max: u32) -> Result<Vec<EulerReport>, EulerError> {
    let cases: Vec<(usize, u8, u32)> = [(2, 0), (2, 1), (3, 0)]
        .into_iter()
        .flat_map(|(n, d)| (0..=gbar_max).map(move |g| (n, d, g)))
        .collect();
    cases
        .into_par_iter()
        .map(|(n, d, g)| lemma71_report(BundleSpec::new(n, d)?, g))
        .collect()
}

/// `n · 2^{(gbar+1)n - 3}`, the closed form the J-family limit should reach.
pub fn expected_j_limit(n: usize, gbar: u32) -> BigInt {
    BigInt::from(n) * pow2((u64::from(gbar) + 1) * n as u64 - 3)
}
