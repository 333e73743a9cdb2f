//! Deterministic text and image output for landscapes.

use std::io::{self, Write};

use crate::landscape::{LandscapeResult, PhaseOnlyFactor};

/// Significant digits of every number written to a scan CSV.
pub const CSV_DIGITS: usize = 9;

/// Format like C's `%.{digits}g`.
pub fn format_g(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let digits = digits.max(1);
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `eta_rad,xi_rad,value` rows in grid order, LF line endings.
pub fn write_csv<W: Write>(result: &LandscapeResult, mut out: W) -> io::Result<()> {
    let spec = &result.spec;
    let mut buf = String::with_capacity(32 * (spec.len() + 1));
    buf.push_str("eta_rad,xi_rad,value\n");
    for i in 0..spec.eta_points {
        let eta = format_g(spec.eta(i), CSV_DIGITS);
        for j in 0..spec.xi_points {
            buf.push_str(&eta);
            buf.push(',');
            buf.push_str(&format_g(spec.xi(j), CSV_DIGITS));
            buf.push(',');
            buf.push_str(&format_g(result.value(i, j), CSV_DIGITS));
            buf.push('\n');
        }
    }
    out.write_all(buf.as_bytes())
}

/// `eta_rad,factor` rows of a phase-only factor curve.
pub fn write_factor_csv<W: Write>(factor: &PhaseOnlyFactor, mut out: W) -> io::Result<()> {
    let mut buf = String::from("eta_rad,factor\n");
    for &(eta, f) in &factor.curve {
        buf.push_str(&format_g(eta, CSV_DIGITS));
        buf.push(',');
        buf.push_str(&format_g(f, CSV_DIGITS));
        buf.push('\n');
    }
    out.write_all(buf.as_bytes())
}

/// 8-bit values, linearly mapped from `[min, max]` to `[0, 255]`.
/// A flat landscape maps to all zeros.
pub fn heatmap_bytes(result: &LandscapeResult) -> Vec<u8> {
    let span = result.max - result.min;
    result
        .values
        .iter()
        .map(|&v| if span > 0.0 { (255.0 * (v - result.min) / span).round().clamp(0.0, 255.0) as u8 } else { 0 })
        .collect()
}

/// Binary PGM (P5): rows follow `η` top to bottom, columns follow `ξ`.
pub fn write_pgm<W: Write>(result: &LandscapeResult, mut out: W) -> io::Result<()> {
    write!(out, "P5\n{} {}\n255\n", result.spec.xi_points, result.spec.eta_points)?;
    out.write_all(&heatmap_bytes(result))
}
