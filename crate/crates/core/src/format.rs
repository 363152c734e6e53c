//! `%.17g`-style number formatting, enough digits to round-trip any f64.

/// Formats `v` like C's `%.17g`. Non-finite values yield `None`.
pub fn try_format_g17(v: f64) -> Option<String> {
    if !v.is_finite() {
        return None;
    }
    if v == 0.0 {
        return Some(if v.is_sign_negative() { "-0".into() } else { "0".into() });
    }
    // 17 significant digits in scientific form fixes the decimal exponent
    let sci = format!("{:.16e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let out = if !(-5..17).contains(&exp) {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (16 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, v)).to_string()
    };
    Some(out)
}

/// Like [`try_format_g17`] but panics on non-finite input.
pub fn format_g17(v: f64) -> String {
    try_format_g17(v).expect("finite value")
}

fn strip_zeros(s: &str) -> &str {
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
    fn matches_printf() {
        assert_eq!(format_g17(1.0), "1");
        assert_eq!(format_g17(4.5), "4.5");
        assert_eq!(format_g17(-2.0), "-2");
        assert_eq!(format_g17(0.1), "0.10000000000000001");
        assert_eq!(format_g17(1e-10), "1e-10");
        assert_eq!(format_g17(2.5e-7), "2.4999999999999999e-07");
        assert_eq!(format_g17(1e17), "1e+17");
        assert_eq!(format_g17(123456.0), "123456");
        assert_eq!(format_g17(0.0001), "0.0001");
        assert_eq!(format_g17(0.0), "0");
        assert_eq!(try_format_g17(f64::NAN), None);
    }

    proptest! {
        #[test]
        fn round_trips(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
            let s = format_g17(v);
            prop_assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }
}
