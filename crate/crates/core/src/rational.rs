//! Exact rational scalars for prices, utilities, probabilities, and welfare.
//!
//! Every monetary comparison in this crate is exact: a `Rational` is a
//! reduced `i64` fraction, parsed from `"p/q"`, integer, or plain decimal
//! text, and rendered back in the same canonical forms. Floats appear only
//! in [`crate::dayahead::relaxed_cost`], which is explicitly real-valued.

use crate::error::{Error, Result};
use num_rational::Ratio;
use num_traits::{Signed, Zero};

pub type Rational = Ratio<i64>;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Ratio::from_integer(n)
}

pub fn ratq(numer: i64, denom: i64) -> Rational {
    Ratio::new(numer, denom)
}

/// Parses `"p/q"`, `"-3"`, or decimal text like `"10.5"` into an exact value.
/// Decimal digits convert via powers of ten, so `"0.1"` is exactly 1/10.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let text = s.trim();
    let bad = || Error::ParseRational {
        input: s.to_string(),
    };
    if text.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = text.split_once('/') {
        let n: i64 = num.trim().parse().map_err(|_| bad())?;
        let d: i64 = den.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(n, d));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.chars().all(|c| c.is_ascii_digit())
            || !frac.chars().all(|c| c.is_ascii_digit())
            || frac.is_empty()
            || frac.len() > 15
        {
            return Err(bad());
        }
        let int_part: i64 = if whole_digits.is_empty() {
            0
        } else {
            whole_digits.parse().map_err(|_| bad())?
        };
        let frac_part: i64 = frac.parse().map_err(|_| bad())?;
        let scale = 10i64.checked_pow(frac.len() as u32).ok_or_else(bad)?;
        let numer = int_part
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac_part))
            .ok_or_else(bad)?;
        let value = Ratio::new(numer, scale);
        return Ok(if negative { -value } else { value });
    }
    let n: i64 = text.parse().map_err(|_| bad())?;
    Ok(Ratio::from_integer(n))
}

/// Canonical text form: integers render bare, everything else as `"p/q"`.
pub fn format_rational(r: Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_nonnegative(r: Rational) -> bool {
    !r.is_negative() || r.is_zero()
}
