//! Text, JSON and LaTeX renderings of [`RatFun`].
//!
//! All three use the display orientation from [`RatFun::display_parts`],
//! so they agree on every coefficient.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::ratfun::RatFun;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Plain,
    Json,
    Latex,
}

pub fn render(r: &RatFun, format: Format) -> String {
    match format {
        Format::Plain => plain(r),
        Format::Json => json_value(r).to_string(),
        Format::Latex => latex(r),
    }
}

fn terms(coeffs: &[BigInt]) -> impl Iterator<Item = (usize, &BigInt)> {
    coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
}

fn plain_poly(coeffs: &[BigInt]) -> String {
    let mut out = String::new();
    for (i, (k, c)) in terms(coeffs).enumerate() {
        let mag = c.abs();
        match (i, c.is_negative()) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let var = match k {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{k}"),
        };
        if var.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&var);
        } else {
            out.push_str(&format!("{mag}*{var}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn term_count(coeffs: &[BigInt]) -> usize {
    terms(coeffs).count()
}

/// Plain text accepted back by [`crate::parse::parse`].
pub fn plain(r: &RatFun) -> String {
    let (num, den) = r.integer_parts();
    let n = plain_poly(&num);
    if den.len() == 1 && den[0].is_one() {
        return n;
    }
    let n = if term_count(&num) > 1 { format!("({n})") } else { n };
    let d = plain_poly(&den);
    // a single bare integer or power of t can follow '/' unparenthesized
    let bare = term_count(&den) == 1 && !d.contains('*');
    if bare {
        format!("{n}/{d}")
    } else {
        format!("{n}/({d})")
    }
}

fn sparse(coeffs: &[BigInt]) -> Value {
    Value::Array(
        terms(coeffs)
            .map(|(k, c)| json!([k, c.to_string()]))
            .collect(),
    )
}

/// `{"num": [[deg, "coeff"], ...], "den": [[deg, "coeff"], ...]}`.
pub fn json_value(r: &RatFun) -> Value {
    let (num, den) = r.integer_parts();
    json!({ "num": sparse(&num), "den": sparse(&den) })
}

fn latex_poly(coeffs: &[BigInt]) -> String {
    let mut out = String::new();
    for (i, (k, c)) in terms(coeffs).enumerate() {
        let mag = c.abs();
        match (i, c.is_negative()) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let var = match k {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{{{k}}}"),
        };
        if var.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&var);
        } else {
            out.push_str(&format!("{mag} {var}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn latex(r: &RatFun) -> String {
    let (num, den) = r.integer_parts();
    let n = latex_poly(&num);
    if den.len() == 1 && den[0].is_one() {
        return n;
    }
    format!("\\frac{{{n}}}{{{}}}", latex_poly(&den))
}
