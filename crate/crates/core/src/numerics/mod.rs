//! Exact and certified arithmetic: rationals, interval-refinable reals, and
//! the weighted / multiplicative quasi-norms the rest of the toolkit
//! consumes.

pub mod interval;
pub mod powprod;
pub mod real;
pub mod weighted;

pub use interval::{
    decimal_string, ln2_bounds, ln_bounds, log2_bounds, nth_root_bounds, pow2, rat, rat_cmp,
    rat_int, rat_le, rat_lt, rat_max, rat_min, rat_to_f64, rat_to_f64_bounds, Rat, RatInterval,
};
pub use powprod::PowProd;
pub use real::{CertReal, DEFAULT_CAP};
pub use weighted::{
    mult_norms, weighted_norm, weighted_norm_int, weighted_norm_rat, WeightVector, WeightedValue,
};

use num_bigint::BigInt;
use std::str::FromStr;

/// Parse a rational literal: `p`, `p/q`, or a finite decimal like `0.25`.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|e| e.to_string())?;
        let d = BigInt::from_str(den.trim()).map_err(|e| e.to_string())?;
        if d == BigInt::from(0) {
            return Err(format!("zero denominator in `{s}`"));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let digits = frac_part.len() as u32;
        let combined = format!("{int_part}{frac_part}");
        let n = BigInt::from_str(&combined).map_err(|e| e.to_string())?;
        return Ok(Rat::new(n, BigInt::from(10u32).pow(digits)));
    }
    let n = BigInt::from_str(s).map_err(|e| e.to_string())?;
    Ok(Rat::from_integer(n))
}

/// Render a rational as `p/q` (or `p` when integral).
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse a certified-real token: a rational literal, `sqrt(r)`, `phi`, or
/// `liouville(base)` for the base-`b` factorial series.
pub fn parse_cert_real(s: &str) -> Result<CertReal, String> {
    let s = s.trim();
    if s == "phi" {
        return Ok(CertReal::phi());
    }
    if let Some(rest) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        let r = parse_rat(rest)?;
        if r < Rat::from_integer(BigInt::from(0)) {
            return Err(format!("sqrt of negative rational in `{s}`"));
        }
        return Ok(CertReal::sqrt_rat(r));
    }
    if let Some(rest) = s.strip_prefix("liouville(").and_then(|r| r.strip_suffix(')')) {
        // accept `liouville(b)` and `liouville(b, base)`; the last argument
        // is the series base
        let base_str = rest.split(',').last().unwrap_or(rest).trim();
        let base: u64 = base_str
            .parse()
            .map_err(|_| format!("bad liouville base in `{s}`"))?;
        if base < 2 {
            return Err(format!("liouville base must be >= 2 in `{s}`"));
        }
        return Ok(CertReal::liouville(base));
    }
    // allow simple sums like "1/3 + sqrt(2)" used for quadratic targets
    if let Some((a, b)) = s.split_once('+') {
        return Ok(parse_cert_real(a)? + parse_cert_real(b)?);
    }
    parse_rat(s).map(CertReal::from_rat)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rat("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rat("-7").unwrap(), rat_int(-7));
        assert_eq!(parse_rat("0.125").unwrap(), rat(1, 8));
        assert!(parse_rat("1/0").is_err());
    }

    #[test]
    fn parse_tokens() {
        assert!(parse_cert_real("phi").is_ok());
        assert!(parse_cert_real("sqrt(2)").is_ok());
        assert!(parse_cert_real("liouville(2)").is_ok());
        assert!(parse_cert_real("liouville(2, 2)").is_ok());
        assert!(parse_cert_real("1/3 + sqrt(2)").is_ok());
        assert!(parse_cert_real("sqrt(-1)").is_err());
    }

    #[test]
    fn format_round_trip() {
        let r = rat(-22, 7);
        assert_eq!(parse_rat(&format_rat(&r)).unwrap(), r);
    }
}
