//! Number rendering shared by the text format, reports and the CLI.

/// Render `x` with at most `digits` significant digits, in the style of C's
/// `%.{digits}g`: fixed notation for moderate exponents, scientific
/// otherwise, trailing zeros removed.
pub fn format_significant(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn renders_like_percent_g() {
        assert_eq!(format_significant(0.5, 17), "0.5");
        assert_eq!(format_significant(std::f64::consts::FRAC_PI_2, 17), "1.5707963267948966");
        assert_eq!(format_significant(std::f64::consts::PI, 17), "3.1415926535897931");
        assert_eq!(format_significant(0.1, 17), "0.10000000000000001");
        assert_eq!(format_significant(1e-20, 17), "9.9999999999999995e-21");
        assert_eq!(format_significant(1e-20, 15), "1e-20");
        assert_eq!(format_significant(-2.0, 17), "-2");
        assert_eq!(format_significant(0.125, 15), "0.125");
        assert_eq!(format_significant(1.0 / 3.0, 15), "0.333333333333333");
        assert_eq!(format_significant(0.0, 15), "0");
        assert_eq!(format_significant(1e20, 17), "1e20");
    }

    proptest! {
        #[test]
        fn seventeen_digits_round_trip(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL) {
            let s = format_significant(x, 17);
            prop_assert_eq!(s.parse::<f64>().unwrap(), x);
        }
    }
}
