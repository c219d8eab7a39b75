//! Text form of complex scalars and curve classes.
//!
//! Complex numbers read and write as `a+bi` / `a-bi`. Output uses 17
//! significant digits so every finite `f64` pair survives a round trip.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Formats a real with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{:.16e}", x)
}

pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", fmt17(z.re), sign, fmt17(z.im.abs()))
}

/// Parses `a+bi`, `a-bi`, a bare real `a`, or a bare imaginary `bi`.
pub fn parse_complex(input: &str) -> Result<Complex64> {
    let err = || Error::Parse {
        input: input.to_string(),
        what: "a complex number (a+bi)",
    };
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err());
    }
    let Some(body) = s.strip_suffix('i') else {
        let re: f64 = s.parse().map_err(|_| err())?;
        return Ok(Complex64::new(re, 0.0));
    };
    // split at the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re.parse().map_err(|_| err())?;
    let im: f64 = im.parse().map_err(|_| err())?;
    Ok(Complex64::new(re, im))
}

/// Parses a curve class written `p,q` into its raw integer pair.
pub fn parse_pair(input: &str) -> Result<(i64, i64)> {
    let err = || Error::Parse {
        input: input.to_string(),
        what: "an integer pair (p,q)",
    };
    let (p, q) = input.split_once(',').ok_or_else(err)?;
    let p = p.trim().parse().map_err(|_| err())?;
    let q = q.trim().parse().map_err(|_| err())?;
    Ok((p, q))
}
