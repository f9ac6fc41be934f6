//! Round-trip-safe float encodings: shortest decimal or C99-style hex.

use std::fmt;
use std::str::FromStr;

use clap::ValueEnum;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum FloatFormat {
    /// Shortest decimal that parses back to the same bits.
    #[default]
    Decimal,
    /// `0x1.<13 hex digits>p<exp>`.
    Hex,
}

impl FloatFormat {
    pub fn encode(self, v: f64) -> String {
        match self {
            FloatFormat::Decimal => format!("{v:e}"),
            FloatFormat::Hex => to_hex(v),
        }
    }
}

impl fmt::Display for FloatFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FloatFormat::Decimal => "decimal",
            FloatFormat::Hex => "hex",
        })
    }
}

const MANTISSA_BITS: u32 = 52;
const MANTISSA_MASK: u64 = (1 << MANTISSA_BITS) - 1;

pub fn to_hex(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    let sign = if v.is_sign_negative() { "-" } else { "" };
    if v.is_infinite() {
        return format!("{sign}inf");
    }
    let bits = v.to_bits();
    let exp = ((bits >> MANTISSA_BITS) & 0x7ff) as i32;
    let mant = bits & MANTISSA_MASK;
    match (exp, mant) {
        (0, 0) => format!("{sign}0x0p+0"),
        (0, m) => format!("{sign}0x0.{m:013x}p-1022"),
        (e, m) => format!("{sign}0x1.{m:013x}p{:+}", e - 1023),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {0:?} as a float")]
pub struct ParseFloatError(pub String);

/// Parses output of [`to_hex`] back to the exact bits.
pub fn from_hex(text: &str) -> Result<f64, ParseFloatError> {
    let err = || ParseFloatError(text.to_string());
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let value = match body {
        "inf" => f64::INFINITY,
        "nan" => f64::NAN,
        _ => {
            let body = body.strip_prefix("0x").ok_or_else(err)?;
            let (mantissa, exp) = body.split_once('p').ok_or_else(err)?;
            let exp: i32 = exp.parse().map_err(|_| err())?;
            let (lead, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
            if frac.len() > 13 {
                return Err(err());
            }
            let frac_bits = if frac.is_empty() {
                0
            } else {
                u64::from_str_radix(frac, 16).map_err(|_| err())? << (4 * (13 - frac.len()))
            };
            match lead {
                "1" if (-1022..=1023).contains(&exp) => f64::from_bits((((exp + 1023) as u64) << MANTISSA_BITS) | frac_bits),
                "0" if frac_bits == 0 => 0.0,
                "0" if exp == -1022 => f64::from_bits(frac_bits),
                _ => return Err(err()),
            }
        }
    };
    Ok(if negative { -value } else { value })
}

/// Accepts either encoding.
pub fn parse_float(text: &str) -> Result<f64, ParseFloatError> {
    let t = text.trim();
    if t.contains("0x") || t.ends_with("inf") || t.ends_with("nan") {
        from_hex(t)
    } else {
        f64::from_str(t).map_err(|_| ParseFloatError(t.to_string()))
    }
}
