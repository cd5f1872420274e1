//! Number formatting for CLI and CSV output.
//!
//! Every value is written with 17 significant digits, which is enough for
//! any `f64` to parse back to the same bits. Moderate magnitudes use plain
//! decimal notation with trailing zeros removed; very small or very large
//! ones use scientific notation.

const SIG_DIGITS: usize = 17;

/// Smallest magnitude written in plain decimal notation.
const PLAIN_MIN: f64 = 1e-5;

/// Magnitude from which scientific notation is used again.
const PLAIN_MAX: f64 = 1e17;

/// Formats `x` with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        return "NaN".to_owned();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_owned();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.to_owned();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format has an exponent");
    let exponent: i32 = exponent.parse().expect("exponent is an integer");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();

    let magnitude = x.abs();
    let mut out = String::with_capacity(SIG_DIGITS + 8);
    if negative {
        out.push('-');
    }
    if (PLAIN_MIN..PLAIN_MAX).contains(&magnitude) {
        out.push_str(&plain(&digits, exponent));
    } else {
        let (head, tail) = digits.split_at(1);
        out.push_str(head);
        let tail = tail.trim_end_matches('0');
        if !tail.is_empty() {
            out.push('.');
            out.push_str(tail);
        }
        out.push('e');
        out.push_str(&exponent.to_string());
    }
    out
}

/// Places the decimal point in the digit string `d1 d2 ... d17` for value
/// `d1.d2... * 10^exponent`.
fn plain(digits: &str, exponent: i32) -> String {
    let (int_part, frac_part) = if exponent < 0 {
        let zeros = "0".repeat((-exponent - 1) as usize);
        ("0".to_owned(), format!("{zeros}{digits}"))
    } else {
        let split = (exponent as usize + 1).min(digits.len());
        let (i, f) = digits.split_at(split);
        let pad = "0".repeat(exponent as usize + 1 - split);
        (format!("{i}{pad}"), f.to_owned())
    };
    let frac_part = frac_part.trim_end_matches('0');
    if frac_part.is_empty() {
        int_part
    } else {
        format!("{int_part}.{frac_part}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn plain_and_scientific_forms() {
        assert_eq!(format_f64(1.0), "1");
        assert_eq!(format_f64(0.0), "0");
        assert_eq!(format_f64(-0.0), "-0");
        assert_eq!(format_f64(-2.5), "-2.5");
        assert_eq!(format_f64(1234.5), "1234.5");
        assert_eq!(format_f64(0.1), "0.10000000000000001");
        assert_eq!(format_f64(1e-5), "0.000010000000000000001");
        assert_eq!(format_f64(1e16), "10000000000000000");
        assert_eq!(format_f64(1e17), "1e17");
        assert_eq!(format_f64(2.5e-7), "2.4999999999999999e-7");
        assert_eq!(format_f64(f64::NAN), "NaN");
        assert_eq!(format_f64(f64::NEG_INFINITY), "-inf");
    }

    proptest! {
        #[test]
        fn round_trips(bits in any::<u64>()) {
            let x = f64::from_bits(bits);
            prop_assume!(!x.is_nan());
            let back: f64 = format_f64(x).parse().unwrap();
            prop_assert_eq!(back.to_bits(), x.to_bits());
        }

        #[test]
        fn round_trips_moderate(x in -1e6f64..1e6) {
            let back: f64 = format_f64(x).parse().unwrap();
            prop_assert_eq!(back.to_bits(), x.to_bits());
        }
    }
}
