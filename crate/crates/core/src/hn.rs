//! Harder–Narasimhan types and the Morse strata they index on a
//! nonorientable surface.
//!
//! The surface is the connected sum of `gbar + 1` real projective planes;
//! its orientation double cover has genus `gbar`. Pulling a bundle back to
//! the double cover turns degrees into a symmetric slope vector, so every
//! type that occurs satisfies `μ_i = -μ_{n+1-i}`.

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::poly::Poly;
use crate::ratfun::{bu_series, RatFun};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HnError {
    #[error("HN type must have at least one slope")]
    Empty,
    #[error("slopes must be weakly decreasing")]
    NotDecreasing,
    #[error("slopes must satisfy mu_i = -mu_(n+1-i)")]
    NotSymmetric,
    #[error("Morse index {0} is not a nonnegative integer")]
    InvalidIndex(Rational),
    #[error("rank {0} is not supported here")]
    UnsupportedRank(usize),
    #[error("degree class must be 0 or 1, got {0}")]
    BadDegreeClass(u8),
    #[error("type {0} is semistable; use the flat-moduli series instead")]
    Semistable(HnType),
    #[error("type {0} has no known stratum series")]
    UnsupportedType(HnType),
}

/// Nonorientable surface `#^{gbar+1} RP^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceSpec {
    pub gbar: u32,
}

/// A Hermitian bundle over the surface, up to isomorphism: rank plus
/// `c_1 ∈ H^2(Σ) ≅ ℤ/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BundleSpec {
    rank: usize,
    degree_class: u8,
}

impl BundleSpec {
    pub fn new(rank: usize, degree_class: u8) -> Result<Self, HnError> {
        if rank == 0 {
            return Err(HnError::UnsupportedRank(0));
        }
        if degree_class > 1 {
            return Err(HnError::BadDegreeClass(degree_class));
        }
        Ok(BundleSpec { rank, degree_class })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree_class(&self) -> u8 {
        self.degree_class
    }
}

/// A maximal run of equal slopes in an HN type.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Block {
    pub slope: Rational,
    pub mult: usize,
}

/// Weakly decreasing, symmetric slope vector, stored as runs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HnType {
    blocks: Vec<Block>,
}

impl HnType {
    pub fn from_slopes(slopes: &[Rational]) -> Result<Self, HnError> {
        if slopes.is_empty() {
            return Err(HnError::Empty);
        }
        if slopes.windows(2).any(|w| w[0] < w[1]) {
            return Err(HnError::NotDecreasing);
        }
        let n = slopes.len();
        if (0..n).any(|i| slopes[i] != -slopes[n - 1 - i].clone()) {
            return Err(HnError::NotSymmetric);
        }
        let mut blocks: Vec<Block> = Vec::new();
        for s in slopes {
            match blocks.last_mut() {
                Some(b) if &b.slope == s => b.mult += 1,
                _ => blocks.push(Block { slope: s.clone(), mult: 1 }),
            }
        }
        Ok(HnType { blocks })
    }

    pub fn from_ints(slopes: &[i64]) -> Result<Self, HnError> {
        let v: Vec<Rational> = slopes
            .iter()
            .map(|&s| Rational::from_integer(s.into()))
            .collect();
        HnType::from_slopes(&v)
    }

    /// The semistable type `(0, ..., 0)`.
    pub fn semistable(rank: usize) -> Self {
        HnType {
            blocks: vec![Block { slope: Rational::zero(), mult: rank }],
        }
    }

    /// `(r, -r)` for rank 2, `(r, 0, ..., 0, -r)` for rank at least 3.
    /// `r = 0` gives the semistable type.
    pub fn extremal(rank: usize, r: u64) -> Self {
        assert!(rank >= 2, "extremal types need rank >= 2");
        if r == 0 {
            return HnType::semistable(rank);
        }
        let r = Rational::from_integer(r.into());
        let mut blocks = vec![Block { slope: r.clone(), mult: 1 }];
        if rank > 2 {
            blocks.push(Block { slope: Rational::zero(), mult: rank - 2 });
        }
        blocks.push(Block { slope: -r, mult: 1 });
        HnType { blocks }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn rank(&self) -> usize {
        self.blocks.iter().map(|b| b.mult).sum()
    }

    pub fn slopes(&self) -> Vec<Rational> {
        self.blocks
            .iter()
            .flat_map(|b| std::iter::repeat_n(b.slope.clone(), b.mult))
            .collect()
    }

    pub fn is_semistable(&self) -> bool {
        self.blocks.len() == 1
    }

    /// `r` when the type is `(r, -r)` or `(r, 0, ..., 0, -r)` with integral
    /// `r > 0`.
    pub fn extremal_parameter(&self) -> Option<u64> {
        let top = &self.blocks.first()?.slope;
        if !top.is_integer() || !top.is_positive() {
            return None;
        }
        let r = top.to_integer().to_u64()?;
        (*self == HnType::extremal(self.rank(), r)).then_some(r)
    }
}

impl fmt::Display for HnType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.slopes().iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `deg / rank` as an exact rational.
pub fn slope(degree: i64, rank: usize) -> Rational {
    assert!(rank >= 1, "rank must be positive");
    Rational::new(degree.into(), (rank as i64).into())
}

/// Morse index `λ_μ = Σ_{μ_i > μ_j} (μ_i - μ_j + gbar - 1)` over position
/// pairs `i < j`.
pub fn index_of_type(mu: &HnType, gbar: u32) -> Result<u64, HnError> {
    let shift = Rational::from_integer(i64::from(gbar).into()) - Rational::one();
    let blocks = mu.blocks();
    let mut total = Rational::zero();
    for (a, hi) in blocks.iter().enumerate() {
        for lo in &blocks[a + 1..] {
            let pairs = Rational::from_integer(((hi.mult * lo.mult) as i64).into());
            total += pairs * (&hi.slope - &lo.slope + &shift);
        }
    }
    if !total.is_integer() || total.is_negative() {
        return Err(HnError::InvalidIndex(total));
    }
    total
        .to_integer()
        .to_u64()
        .ok_or(HnError::InvalidIndex(total))
}

/// Index set of a rank 2 or rank 3 bundle, truncated at slope parameter
/// `cutoff`, ordered by increasing `r`.
pub fn index_set(bundle: BundleSpec, gbar: u32, cutoff: u64) -> Result<Vec<HnType>, HnError> {
    match bundle.rank() {
        2 => {
            let parity = (u64::from(bundle.degree_class()) + u64::from(gbar) + 1) % 2;
            let mut out = vec![HnType::semistable(2)];
            out.extend(
                (1..=cutoff)
                    .filter(|r| r % 2 == parity)
                    .map(|r| HnType::extremal(2, r)),
            );
            Ok(out)
        }
        3 => Ok((0..=cutoff).map(|r| HnType::extremal(3, r)).collect()),
        n => Err(HnError::UnsupportedRank(n)),
    }
}

/// Smallest `r > 0` admitted by the rank 2 parity rule.
pub fn rank2_first_r(degree_class: u8, gbar: u32) -> u64 {
    if (u64::from(degree_class) + u64::from(gbar) + 1) % 2 == 1 {
        1
    } else {
        2
    }
}

/// `(1 + t)^k`.
fn one_plus_t(k: u32) -> RatFun {
    RatFun::from_poly(Poly::one_plus_t_pow(1).pow(k))
}

/// Equivariant Poincaré series of a nonsemistable stratum.
///
/// Rank 2 strata are `(S^1)^{2g} × BU(1)`; rank 3 strata are
/// `(S^1)^{3g} × BU(1)^2`. Neither depends on `r`.
pub fn stratum_series(mu: &HnType, gbar: u32) -> Result<RatFun, HnError> {
    if mu.is_semistable() {
        return Err(HnError::Semistable(mu.clone()));
    }
    let rank = mu.rank();
    if !(2..=3).contains(&rank) {
        return Err(HnError::UnsupportedRank(rank));
    }
    if mu.extremal_parameter().is_none() {
        return Err(HnError::UnsupportedType(mu.clone()));
    }
    let bu1 = bu_series(1);
    Ok(match rank {
        2 => one_plus_t(2 * gbar) * bu1,
        _ => one_plus_t(3 * gbar) * bu1.pow(2),
    })
}

/// Series of the whole space of connections: `H^*(U(n)^g) ⊗ H^*(BU(n))`.
pub fn ambient_series(n: usize, gbar: u32) -> RatFun {
    let unitary = (1..=n).fold(Poly::one(), |acc, i| &acc * &Poly::one_plus_t_pow(2 * i - 1));
    RatFun::from_poly(unitary.pow(gbar)) * bu_series(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EulerClass {
    Vanishing,
    Invertible,
    Unknown,
}

impl EulerClass {
    pub fn as_str(self) -> &'static str {
        match self {
            EulerClass::Vanishing => "vanishing",
            EulerClass::Invertible => "invertible",
            EulerClass::Unknown => "unknown",
        }
    }
}

/// One summand of the normal bundle, labelled by a 1-based HN block pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalSummand {
    pub pair: (usize, usize),
    pub class: EulerClass,
}

/// Splits the normal bundle of the stratum into involution orbits of block
/// pairs `(i, j)`, `i < j`. The involution sends `(i, j)` to
/// `(k+1-j, k+1-i)` for `k` blocks. A fixed pair carries a vanishing Euler
/// class when block `i` has rank one; a swapped pair contributes one
/// summand with invertible Euler class. Summands are listed by decreasing
/// slope gap, ties by pair.
pub fn classify_normal_summands(mu: &HnType) -> Result<Vec<NormalSummand>, HnError> {
    let rank = mu.rank();
    if mu.is_semistable() {
        return Ok(Vec::new());
    }
    if !(2..=3).contains(&rank) {
        return Err(HnError::UnsupportedRank(rank));
    }
    let blocks = mu.blocks();
    let k = blocks.len();
    let mut out: Vec<(Rational, NormalSummand)> = Vec::new();
    for i in 1..=k {
        for j in i + 1..=k {
            let image = (k + 1 - j, k + 1 - i);
            if image < (i, j) {
                continue;
            }
            let class = if image == (i, j) {
                if blocks[i - 1].mult == 1 {
                    EulerClass::Vanishing
                } else {
                    EulerClass::Unknown
                }
            } else {
                EulerClass::Invertible
            };
            let gap = &blocks[i - 1].slope - &blocks[j - 1].slope;
            out.push((gap, NormalSummand { pair: (i, j), class }));
        }
    }
    out.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.pair.cmp(&b.1.pair)));
    Ok(out.into_iter().map(|(_, s)| s).collect())
}

/// A stratum with its index, series and normal-bundle classification.
#[derive(Debug, Clone, PartialEq)]
pub struct StratumRecord {
    pub mu: HnType,
    pub index: u64,
    pub series: RatFun,
    pub summands: Vec<NormalSummand>,
}

impl StratumRecord {
    /// Record for a nonsemistable type.
    pub fn unstable(mu: HnType, gbar: u32) -> Result<Self, HnError> {
        Ok(StratumRecord {
            index: index_of_type(&mu, gbar)?,
            series: stratum_series(&mu, gbar)?,
            summands: classify_normal_summands(&mu)?,
            mu,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "mu": self.mu.slopes().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "index": self.index,
            "series": crate::render::plain(&self.series),
            "summands": self.summands.iter().map(|s| json!({
                "pair": [s.pair.0, s.pair.1],
                "class": s.class.as_str(),
            })).collect::<Vec<_>>(),
        })
    }
}
