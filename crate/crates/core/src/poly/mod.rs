//! Exact arithmetic: Gaussian rationals, Laurent polynomials in `a, z` and `s`,
//! and truncated power series in `h, z`.

mod gaussian;
mod laurent;
mod series;

use num_traits::ToPrimitive;
use serde_json::{json, Value};
use thiserror::Error;

pub use gaussian::{fmt_rational, rat, ratio, GaussianRational, Rational};
pub use laurent::{LaurentPoly1, LaurentPoly2};
pub use series::{Series1, TruncatedSeries2};

/// Default series cutoff: every order-4 coefficient plus one spare order.
pub const DEFAULT_CUTOFF: u32 = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("series cutoffs differ ({0} vs {1})")]
    CutoffMismatch(u32, u32),
    #[error("coefficient {0} is not real")]
    NonReal(String),
    #[error("negative z exponent {0} in a power-series expansion")]
    NegativeZExponent(i32),
    #[error("image of {0} is not an invertible monomial")]
    NotInvertible(&'static str),
}

/// `[num, den]`, numbers when they fit in `i64`, decimal strings otherwise.
pub fn rational_json(r: &Rational) -> Value {
    let part = |x: &num_bigint::BigInt| match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    };
    json!([part(r.numer()), part(r.denom())])
}

/// Inverse of [`rational_json`].
pub fn rational_from_json(v: &Value) -> Option<Rational> {
    let arr = v.as_array()?;
    if arr.len() != 2 {
        return None;
    }
    let part = |x: &Value| -> Option<num_bigint::BigInt> {
        match x {
            Value::Number(n) => n.as_i64().map(Into::into),
            Value::String(s) => s.parse().ok(),
            _ => None,
        }
    };
    let (n, d) = (part(&arr[0])?, part(&arr[1])?);
    if d == 0.into() {
        return None;
    }
    Some(Rational::new(n, d))
}
