//! Number formatting shared by every emitted table.

use crate::Rational;

/// Exact rational as `p/q`, or `p` when the denominator is 1.
pub fn rational(value: Rational) -> String {
    if *value.denom() == 1 {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Formats `x` with `digits` significant digits.
///
/// Fixed notation is used for magnitudes in `[1e-4, 1e12)`, scientific
/// notation otherwise. The output depends only on the bit pattern of `x`.
pub fn sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return format!("{:.*}", digits.saturating_sub(1), 0.0);
    }
    let digits = digits.max(1);
    // Round first so that the exponent reflects the rounded value.
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .unwrap_or(0);
    if (-4..12).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{:.*}", decimals, x)
    } else {
        sci
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings() {
        assert_eq!(rational(Rational::new(5, 2)), "5/2");
        assert_eq!(rational(Rational::new(6, 2)), "3");
        assert_eq!(rational(Rational::new(-1, 4)), "-1/4");
    }

    #[test]
    fn significant_digits() {
        assert_eq!(sig(-0.5, 12), "-0.500000000000");
        assert_eq!(sig(-0.125, 12), "-0.125000000000");
        assert_eq!(sig(-1.0 / 18.0, 12), "-0.0555555555556");
        assert_eq!(sig(123.456, 4), "123.5");
        assert_eq!(sig(1.5e-7, 3), "1.50e-7");
        assert_eq!(sig(0.0, 3), "0.00");
        // rounding that bumps the exponent
        assert_eq!(sig(9.9999, 2), "10");
    }
}
