//! Exact equivariant Poincaré series for Yang–Mills moduli stacks over
//! compact nonorientable surfaces.
//!
//! The crate is layered bottom-up:
//!
//! * [`poly`], [`ratfun`], [`parse`], [`render`]: exact arithmetic in ℚ(t)
//!   with truncated expansion and limits at `t = 1`.
//! * [`hn`]: Harder–Narasimhan types, Morse indices, index sets and
//!   stratum series for rank 2 and rank 3 bundles.
//! * [`morse`]: closed-form summation of the antiperfect Morse identity,
//!   flat-moduli series and Betti tables.
//! * [`spectral`]: dimension bookkeeping for arbitrary ordered
//!   stratifications.
//! * [`euler`]: Euler-characteristic limits and the failure of
//!   antiperfection in rank at least 4.

pub mod euler;
pub mod hn;
pub mod morse;
pub mod parse;
pub mod poly;
pub mod ratfun;
pub mod render;
pub mod spectral;

pub use hn::{BundleSpec, HnType, StratumRecord, SurfaceSpec};
pub use parse::{parse, ParseError};
pub use poly::Poly;
pub use ratfun::{RatFun, RatFunError, Series};
pub use render::Format;

/// Exact rational coefficient.
pub type Rational = num_rational::BigRational;

/// Outcome of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Reads the expansion order from `YMPS_TRUNCATION`, falling back to
/// [`ratfun::DEFAULT_TRUNCATION`] when unset or unparsable.
pub fn truncation_order() -> usize {
    std::env::var("YMPS_TRUNCATION")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(ratfun::DEFAULT_TRUNCATION)
}
