//! Dimension bookkeeping for an ordered stratification `M = ⊔ M_p`.
//!
//! Column `p` of the first page of the stratification spectral sequence is
//! the cohomology of `M_p` shifted up by its codimension `λ_p`. At the level
//! of Poincaré series that gives two identities worth checking:
//!
//! * perfect: `P(M_0) = P(M) - Σ_{p>0} t^{λ_p} P(M_p)`
//! * antiperfect: `P(M_0) = P(M) + Σ_{p>0} t^{λ_p - 1} P(M_p)`
//!
//! Differentials are never modelled; only these graded dimensions are.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hn::BundleSpec;
use crate::morse::{self, GeometricFamily, MorseError};
use crate::parse::{parse, ParseError};
use crate::ratfun::RatFun;
use crate::{render, Rational, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: {source}")]
    Series { path: String, source: ParseError },
    #[error("family {family}: {message}")]
    DivergentFamily { family: usize, message: String },
    #[error("stratum {p} has index {index}; the shift t^(index-1) is not a power series")]
    NegativeShift { p: usize, index: u64 },
    #[error("stratum {0} does not exist")]
    OutOfRange(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Morse(#[from] MorseError),
}

/// A single explicitly listed stratum.
#[derive(Debug, Clone, PartialEq)]
pub struct Stratum {
    pub index: u64,
    pub series: RatFun,
}

/// Infinitely many strata `r = r0, r0 + step, ...`, all with Poincaré series
/// `shape` and index `a·r + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyTail {
    pub shape: RatFun,
    pub a: u64,
    pub b: i64,
    pub r0: u64,
    pub step: u64,
}

impl FamilyTail {
    fn index_at(&self, r: u64) -> i128 {
        i128::from(self.a) * i128::from(r) + i128::from(self.b)
    }

    /// The family of `t^{λ_r + extra} · shape` as a [`GeometricFamily`].
    fn shifted(&self, extra: i64, family: usize) -> Result<GeometricFamily, SpectralError> {
        GeometricFamily::new(self.shape.clone(), self.a, self.b + extra, self.r0, self.step).map_err(
            |e| SpectralError::DivergentFamily {
                family,
                message: e.to_string(),
            },
        )
    }
}

/// Ambient series plus the strata, `p = 0` first.
///
/// When `strata` is empty the space is its own semistable stratum and
/// `series_0` is the ambient series.
#[derive(Debug, Clone, PartialEq)]
pub struct StratificationData {
    pub ambient: RatFun,
    pub strata: Vec<Stratum>,
    pub families: Vec<FamilyTail>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawData {
    ambient: String,
    #[serde(default)]
    strata: Vec<RawStratum>,
    #[serde(default)]
    families: Vec<RawFamily>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStratum {
    index: u64,
    series: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    shape: String,
    a: u64,
    b: i64,
    r0: u64,
    step: u64,
}

fn parse_at(path: String, text: &str) -> Result<RatFun, SpectralError> {
    parse(text).map_err(|source| SpectralError::Series { path, source })
}

impl StratificationData {
    /// The rank 2 or rank 3 Yang–Mills stratification: the flat-moduli
    /// series as stratum 0 and the unstable strata as one family tail.
    pub fn yang_mills(bundle: BundleSpec, gbar: u32) -> Result<Self, SpectralError> {
        let family = morse::unstable_family(bundle, gbar)?;
        let ambient = crate::hn::ambient_series(bundle.rank(), gbar);
        let series_0 = &ambient + &morse::sum_family(&family);
        Ok(StratificationData {
            ambient,
            strata: vec![Stratum { index: 0, series: series_0 }],
            families: vec![FamilyTail {
                shape: family.shape,
                a: family.slope,
                // the Morse family carries the t^{λ-1} shift
                b: family.offset + 1,
                r0: family.r0,
                step: family.step,
            }],
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self, SpectralError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: RawData = serde_path_to_error::deserialize(de).map_err(|e| SpectralError::Schema {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
        let ambient = parse_at("ambient".into(), &raw.ambient)?;
        let strata = raw
            .strata
            .iter()
            .enumerate()
            .map(|(i, s)| {
                Ok(Stratum {
                    index: s.index,
                    series: parse_at(format!("strata[{i}].series"), &s.series)?,
                })
            })
            .collect::<Result<_, SpectralError>>()?;
        let families = raw
            .families
            .iter()
            .enumerate()
            .map(|(i, f)| {
                Ok(FamilyTail {
                    shape: parse_at(format!("families[{i}].shape"), &f.shape)?,
                    a: f.a,
                    b: f.b,
                    r0: f.r0,
                    step: f.step,
                })
            })
            .collect::<Result<_, SpectralError>>()?;
        Ok(StratificationData { ambient, strata, families })
    }

    pub fn to_json_string(&self) -> String {
        let raw = RawData {
            ambient: render::plain(&self.ambient),
            strata: self
                .strata
                .iter()
                .map(|s| RawStratum { index: s.index, series: render::plain(&s.series) })
                .collect(),
            families: self
                .families
                .iter()
                .map(|f| RawFamily {
                    shape: render::plain(&f.shape),
                    a: f.a,
                    b: f.b,
                    r0: f.r0,
                    step: f.step,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("plain data serializes")
    }

    pub fn series_0(&self) -> &RatFun {
        self.strata.first().map_or(&self.ambient, |s| &s.series)
    }

    /// Strata `p ≥ 1` in order of index: the explicit ones after the first,
    /// merged with the family members. Infinite when there are families.
    pub fn unstable(&self) -> UnstableStrata<'_> {
        let mut heap = BinaryHeap::new();
        if self.strata.len() > 1 {
            heap.push(Reverse((i128::from(self.strata[1].index), 0usize, 1u64)));
        }
        for (i, f) in self.families.iter().enumerate() {
            if f.step > 0 {
                heap.push(Reverse((f.index_at(f.r0), i + 1, f.r0)));
            }
        }
        UnstableStrata { data: self, heap }
    }

    /// `(λ_p, series_p)` for `p ≥ 0`.
    pub fn stratum(&self, p: usize) -> Option<(i128, RatFun)> {
        if p == 0 {
            return Some((0, self.series_0().clone()));
        }
        self.unstable().nth(p - 1).map(|(l, s)| (l, s.clone()))
    }
}

/// Iterator behind [`StratificationData::unstable`].
pub struct UnstableStrata<'a> {
    data: &'a StratificationData,
    // (index, source, position): source 0 is the explicit list, source i the
    // family i-1; position is the list slot or the family parameter r
    heap: BinaryHeap<Reverse<(i128, usize, u64)>>,
}

impl<'a> Iterator for UnstableStrata<'a> {
    type Item = (i128, &'a RatFun);

    fn next(&mut self) -> Option<Self::Item> {
        let Reverse((index, source, pos)) = self.heap.pop()?;
        if source == 0 {
            let next = pos as usize + 1;
            if let Some(s) = self.data.strata.get(next) {
                self.heap.push(Reverse((i128::from(s.index), 0, next as u64)));
            }
            Some((index, &self.data.strata[pos as usize].series))
        } else {
            let f = &self.data.families[source - 1];
            let r = pos + f.step;
            self.heap.push(Reverse((f.index_at(r), source, r)));
            Some((index, &f.shape))
        }
    }
}

/// Result of [`validate_stratification`].
#[derive(Debug, Clone, PartialEq)]
pub struct Validation {
    pub verdict: Verdict,
    /// Largest `c` with `λ_p ≥ p + c` for all `p`, when one exists.
    pub c: Option<i128>,
    pub problems: Vec<String>,
}

fn check_series(name: &str, s: &RatFun, order: usize, problems: &mut Vec<String>) {
    match s.expand(order) {
        Err(e) => problems.push(format!("{name}: {e}")),
        Ok(series) => match series.to_integers() {
            Err(k) => problems.push(format!("{name}: coefficient of t^{k} is not an integer")),
            Ok(ints) => {
                if let Some(k) = ints.iter().position(Signed::is_negative) {
                    problems.push(format!("{name}: coefficient of t^{k} is negative"));
                }
            }
        },
    }
}

/// Checks the standing hypotheses: `λ_0 = 0`, positive and nondecreasing
/// indices for `p ≥ 1`, families that grow fast enough that `λ_p ≥ p + c`
/// for some `c`, and Poincaré series with nonnegative integer coefficients
/// through `t^order`.
pub fn validate_stratification(data: &StratificationData, order: usize) -> Validation {
    let mut problems = Vec::new();
    if let Some(first) = data.strata.first() {
        if first.index != 0 {
            problems.push(format!("stratum 0 has index {}, expected 0", first.index));
        }
    }
    for (p, w) in data.strata.windows(2).enumerate().skip(1) {
        if w[1].index < w[0].index {
            problems.push(format!(
                "stratum {} has index {} below index {} of stratum {}",
                p + 1,
                w[1].index,
                w[0].index,
                p
            ));
        }
    }
    for (p, s) in data.strata.iter().enumerate().skip(1) {
        if s.index == 0 {
            problems.push(format!("stratum {p} has index 0; only stratum 0 may"));
        }
    }

    let mut density = Rational::zero();
    let mut period: u64 = 1;
    let mut families_ok = true;
    for (i, f) in data.families.iter().enumerate() {
        if f.a == 0 || f.step == 0 {
            problems.push(format!("family {i}: a and step must be positive"));
            families_ok = false;
            continue;
        }
        if f.index_at(f.r0) < 1 {
            problems.push(format!("family {i}: index at r0 = {} is {}", f.r0, f.index_at(f.r0)));
        }
        density += Rational::new(1.into(), (f.a * f.step).into());
        period = period.lcm(&(f.a * f.step));
    }
    if density > Rational::from_integer(1.into()) {
        problems.push(format!(
            "families place {density} strata per unit of index; no c satisfies λ_p ≥ p + c"
        ));
        families_ok = false;
    }

    let mut c = None;
    if families_ok {
        // with density ≤ 1, λ_p - p is eventually periodic or increasing, so
        // its minimum is reached before every source has started and run
        // through two periods
        let horizon = data
            .strata
            .iter()
            .map(|s| i128::from(s.index))
            .chain(data.families.iter().map(|f| f.index_at(f.r0)))
            .max()
            .unwrap_or(0)
            + 2 * i128::from(period);
        let mut min = 0i128;
        for (k, (index, _)) in data.unstable().enumerate() {
            if index > horizon {
                break;
            }
            min = min.min(index - (k as i128 + 1));
        }
        c = Some(min);
    }

    check_series("ambient", &data.ambient, order, &mut problems);
    for (p, s) in data.strata.iter().enumerate() {
        check_series(&format!("stratum {p}"), &s.series, order, &mut problems);
    }
    for (i, f) in data.families.iter().enumerate() {
        check_series(&format!("family {i}"), &f.shape, order, &mut problems);
    }

    Validation {
        verdict: Verdict::from_bool(problems.is_empty()),
        c,
        problems,
    }
}

/// Column `p` of the first page: `t^{λ_p} · P(M_p)`.
pub fn e1_column(data: &StratificationData, p: usize) -> Result<RatFun, SpectralError> {
    let (index, series) = data.stratum(p).ok_or(SpectralError::OutOfRange(p))?;
    let shift = usize::try_from(index).map_err(|_| SpectralError::OutOfRange(p))?;
    Ok(series.shift(shift))
}

/// Both sides of a series identity and whether they agree.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub verdict: Verdict,
    pub lhs: RatFun,
    pub rhs: RatFun,
}

/// `Σ_{p>0} t^{λ_p + extra} P(M_p)` in closed form.
fn shifted_unstable_sum(data: &StratificationData, extra: i64) -> Result<RatFun, SpectralError> {
    let mut total = RatFun::zero();
    for (p, s) in data.strata.iter().enumerate().skip(1) {
        let e = s.index as i64 + extra;
        if e < 0 {
            return Err(SpectralError::NegativeShift { p, index: s.index });
        }
        total = total + s.series.shift(e as usize);
    }
    for (i, f) in data.families.iter().enumerate() {
        total = total + morse::sum_family(&f.shifted(extra, i)?);
    }
    Ok(total)
}

pub fn check_antiperfect(data: &StratificationData) -> Result<IdentityCheck, SpectralError> {
    let rhs = &data.ambient + &shifted_unstable_sum(data, -1)?;
    let lhs = data.series_0().clone();
    Ok(IdentityCheck { verdict: Verdict::from_bool(lhs == rhs), lhs, rhs })
}

pub fn check_perfect(data: &StratificationData) -> Result<IdentityCheck, SpectralError> {
    let rhs = &data.ambient - &shifted_unstable_sum(data, 0)?;
    let lhs = data.series_0().clone();
    Ok(IdentityCheck { verdict: Verdict::from_bool(lhs == rhs), lhs, rhs })
}

/// Graded pieces `gr^p H^*(M, M_0) ≅ H^{*-λ_p}(M_p)` for `p = 1..=pmax`,
/// as Poincaré series. Requires the antiperfect identity.
pub fn graded_pair_dims(data: &StratificationData, pmax: usize) -> Result<Vec<RatFun>, SpectralError> {
    if !check_antiperfect(data)?.verdict.is_pass() {
        return Err(SpectralError::Precondition(
            "stratification is not antiperfect".into(),
        ));
    }
    (1..=pmax).map(|p| e1_column(data, p)).collect()
}
