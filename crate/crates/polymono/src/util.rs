//! Output formatting helpers shared by the CSV writers.

/// Formats like C's `%.{sig}g`: `sig` significant digits, fixed notation for
/// moderate exponents, scientific otherwise, trailing zeros trimmed.
pub fn format_g(x: f64, sig: usize) -> String {
    assert!(sig >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    // round first in scientific form so the exponent decision matches the
    // rounded value (e.g. 999.99 at 3 digits is 1e3, not 1000)
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp_str) = sci.split_once('e').expect("e-format");
    let exp: i32 = exp_str.parse().expect("exponent");
    if exp < -4 || exp >= sig as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    }
}

fn trim_zeros(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

#[cfg(test)]
mod tests {
    use super::format_g;

    #[test]
    fn matches_printf_g_behaviour() {
        assert_eq!(format_g(0.0, 12), "0");
        assert_eq!(format_g(1.0, 12), "1");
        assert_eq!(format_g(-2.5, 12), "-2.5");
        assert_eq!(format_g(150.0, 12), "150");
        assert_eq!(format_g(0.0001, 12), "0.0001");
        assert_eq!(format_g(0.00001, 12), "1e-5");
        assert_eq!(format_g(1e12, 12), "1e12");
        assert_eq!(format_g(123456789012.0, 12), "123456789012");
        assert_eq!(format_g(1234567890123.0, 12), "1.234567890123e12");
        assert_eq!(format_g(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_g(2.5625, 12), "2.5625");
    }

    #[test]
    fn rounding_can_promote_the_exponent() {
        assert_eq!(format_g(999.99, 3), "1e3");
        assert_eq!(format_g(999.99, 5), "999.99");
        assert_eq!(format_g(0.99999999, 3), "1");
    }
}
