//! Deterministic number formatting for tabular output.

/// Formats `x` rounded to 12 significant digits, in the shortest form that
/// reads back to the rounded value.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let rounded = round12(x);
    let mag = rounded.abs();
    if (1e-5..1e15).contains(&mag) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

/// `x` rounded to 12 significant digits, for JSON output.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

#[cfg(test)]
mod tests {
    use super::sig12;

    #[test]
    fn formats() {
        assert_eq!(sig12(0.5), "0.5");
        assert_eq!(sig12(-0.0), "0");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(4.0 * (1.0 - (-1.5f64).exp())), "3.10747935941");
        assert_eq!(sig12(2.5e-9), "2.5e-9");
        assert_eq!(sig12(123456789012345.0), "123456789012000");
    }
}
