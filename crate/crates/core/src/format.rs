//! Number formatting for exported artifacts.

/// Significant digits used for every exported number.
pub const SIG_DIGITS: usize = 12;

/// Rounds to [`SIG_DIGITS`] significant digits; `-0.0` becomes `0.0`.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{:.*e}", SIG_DIGITS - 1, x)
        .parse()
        .expect("scientific notation round-trips");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Shortest decimal string of [`round_sig`]`(x)`.
pub fn fmt_sig(x: f64) -> String {
    format!("{}", round_sig(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thirds_and_zero() {
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(2.0 / 3.0), "0.666666666667");
        assert_eq!(fmt_sig(0.6000000000000001), "0.6");
        assert_eq!(fmt_sig(44.0), "44");
    }
}
