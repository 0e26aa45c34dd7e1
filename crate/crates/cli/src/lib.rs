//! Report and scan formats written by the `lmr` command.

pub mod report;

/// Shortest round-trip text of `v`, in exponent form outside `[1e-4, 1e16)`.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || !v.is_finite() || (1e-4..1e16).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::format_number;

    #[test]
    fn numbers_round_trip() {
        for v in [0.0, 1.0, 1e-300, 1.5707963267948966e-6, 0.1 + 0.2, 123456.789, 1e20, -3.5e-9] {
            let s = format_number(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
        assert_eq!(format_number(1e-300), "1e-300");
        assert_eq!(format_number(0.5), "0.5");
    }
}
