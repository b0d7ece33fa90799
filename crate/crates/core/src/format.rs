//! Byte-stable number formatting for emitted datasets: 9 significant digits,
//! fixed notation for moderate magnitudes and scientific otherwise.

pub const SIGNIFICANT_DIGITS: usize = 9;

/// Exponent range (inclusive) rendered in fixed notation.
const FIXED_EXPONENTS: std::ops::RangeInclusive<i32> = -4..=8;

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Formats `x` with [`SIGNIFICANT_DIGITS`] significant digits.
pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if FIXED_EXPONENTS.contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{:.*}", decimals, x)).to_string()
    } else {
        format!("{}e{}", trim_fraction(mantissa), exp)
    }
}
