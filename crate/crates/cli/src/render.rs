//! JSON and CSV encodings. Exact values print as `"p/q"` strings; irrationals
//! as `{expr, lower, upper}` with outward-rounded decimal bounds. With
//! `--decimals D` every value prints as a rounded midpoint tagged with its
//! error bound instead.

use diophant::transfer::RatEnclosure;
use diophant::Real;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};

/// Digits in the bounds of an irrational's enclosure.
const BOUND_DIGITS: u32 = 30;

#[derive(Debug, Clone, Copy)]
pub struct Render {
    pub decimals: Option<u32>,
}

fn pow10(d: u32) -> BigInt {
    BigInt::from(10u32).pow(d)
}

/// `x` scaled by `10^d` and already rounded, printed as a decimal.
fn decimal_string(scaled: &BigInt, d: u32) -> String {
    let digits = scaled.abs().to_string();
    let d = d as usize;
    let padded = format!("{digits:0>width$}", width = d + 1);
    let (int, frac) = padded.split_at(padded.len() - d);
    let sign = if scaled.is_negative() { "-" } else { "" };
    if d == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

fn enclosure_of(x: &Real, d: u32) -> (BigRational, BigRational) {
    match x.to_rational() {
        Some(q) => (q.clone(), q),
        None => {
            let e = x.enclose(4 * d + 64);
            (e.lower(), e.upper())
        }
    }
}

impl Render {
    pub fn real(&self, x: &Real) -> Value {
        if let Some(d) = self.decimals {
            return self.approx(x, d);
        }
        match x.to_rational() {
            Some(q) => Value::String(q.to_string()),
            None => {
                let (lo, hi) = x.decimal_bounds(BOUND_DIGITS);
                json!({ "expr": x.to_string(), "lower": lo, "upper": hi })
            }
        }
    }

    pub fn rational(&self, q: &BigRational) -> Value {
        self.real(&Real::from_rational(q.clone()))
    }

    pub fn enclosure(&self, e: &RatEnclosure) -> Value {
        json!({ "lower": self.rational(&e.lo), "upper": self.rational(&e.hi) })
    }

    /// Rounded midpoint `m` with `|x − m| ≤ 10^-d`.
    fn approx(&self, x: &Real, d: u32) -> Value {
        let (lo, hi) = enclosure_of(x, d);
        let mid = (lo + hi) / BigRational::from_integer(2.into());
        let scaled = (mid * BigRational::from_integer(pow10(d))).round().to_integer();
        json!({ "decimal": decimal_string(&scaled, d), "error": format!("1e-{d}") })
    }

    /// CSV cell: exact rational, or `midpoint±1e-D` with `--decimals`.
    pub fn cell(&self, x: &Real) -> String {
        match (self.decimals, x.to_rational()) {
            (None, Some(q)) => q.to_string(),
            (None, None) => {
                let (lo, hi) = x.decimal_bounds(BOUND_DIGITS);
                format!("[{lo};{hi}]")
            }
            (Some(d), _) => match self.approx(x, d) {
                Value::Object(m) => format!(
                    "{}±{}",
                    m["decimal"].as_str().unwrap_or_default(),
                    m["error"].as_str().unwrap_or_default()
                ),
                _ => unreachable!("approx returns an object"),
            },
        }
    }
}

/// JSON number when it fits in `i64`, decimal string otherwise.
pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn ints(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int).collect())
}

pub fn rows(m: &[Vec<BigInt>]) -> Value {
    Value::Array(m.iter().map(|r| ints(r)).collect())
}

/// Pretty JSON with keys sorted (serde_json's default map is ordered).
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
