//! Parsing of SI-suffixed quantity strings on the CLI.
//!
//! Lengths: `606nm`, `1.2um`, `0.5mm`, `3cm`, `0.001m`, bare numbers are
//! meters. Times: `ns`, `us`, `ms`, `s`, bare numbers are seconds. Rates:
//! `10MHz` style values are ordinary frequencies and are multiplied by
//! 2 pi to give angular rates unless the angular flag is set, in which
//! case the suffix only scales (so `10MHz` reads as 1e7 rad/s). Bare rate
//! numbers are always taken as rad/s.

use crate::{Error, Result};

fn split_suffix(s: &str) -> (&str, &str) {
    let s = s.trim();
    let split = s
        .char_indices()
        .rev()
        .take_while(|(_, c)| c.is_alphabetic() || *c == 'µ')
        .last()
        .map(|(i, _)| i)
        .unwrap_or(s.len());
    (&s[..split], &s[split..])
}

fn parse_number(num: &str, original: &str, kind: &str) -> Result<f64> {
    num.trim().parse::<f64>().map_err(|_| {
        Error::Usage(format!(
            "cannot parse {kind} `{original}`: `{num}` is not a number"
        ))
    })
}

/// Parse a length string into meters.
pub fn parse_length(s: &str) -> Result<f64> {
    let (num, suffix) = split_suffix(s);
    let scale = match suffix {
        "" | "m" => 1.0,
        "nm" => 1e-9,
        "um" | "µm" => 1e-6,
        "mm" => 1e-3,
        "cm" => 1e-2,
        "km" => 1e3,
        other => {
            return Err(Error::Usage(format!(
                "unknown length unit `{other}` in `{s}` (use nm, um, mm, cm, m)"
            )))
        }
    };
    Ok(parse_number(num, s, "length")? * scale)
}

/// Parse a time string into seconds.
pub fn parse_time(s: &str) -> Result<f64> {
    let (num, suffix) = split_suffix(s);
    let scale = match suffix {
        "" | "s" => 1.0,
        "ns" => 1e-9,
        "us" | "µs" => 1e-6,
        "ms" => 1e-3,
        other => {
            return Err(Error::Usage(format!(
                "unknown time unit `{other}` in `{s}` (use ns, us, ms, s)"
            )))
        }
    };
    Ok(parse_number(num, s, "time")? * scale)
}

/// Parse a rate string into rad/s.
///
/// A Hz-family suffix marks an ordinary frequency, converted by 2 pi;
/// with `angular = true` the value is taken to already be angular and the
/// suffix only supplies the power of ten. Bare numbers are rad/s.
pub fn parse_rate(s: &str, angular: bool) -> Result<f64> {
    let (num, suffix) = split_suffix(s);
    let (scale, is_frequency) = match suffix {
        "" => (1.0, false),
        "Hz" | "hz" => (1.0, true),
        "kHz" | "khz" => (1e3, true),
        "MHz" | "mhz" => (1e6, true),
        "GHz" | "ghz" => (1e9, true),
        "THz" | "thz" => (1e12, true),
        other => {
            return Err(Error::Usage(format!(
                "unknown rate unit `{other}` in `{s}` (use Hz, kHz, MHz, GHz or a bare rad/s value)"
            )))
        }
    };
    let v = parse_number(num, s, "rate")? * scale;
    Ok(if is_frequency && !angular {
        v * std::f64::consts::TAU
    } else {
        v
    })
}

/// Hz-equivalent of an angular rate, rate / 2 pi.
pub fn to_hz(angular_rate: f64) -> f64 {
    angular_rate / std::f64::consts::TAU
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn lengths() {
        assert_relative_eq!(parse_length("606nm").unwrap(), 606e-9);
        assert_relative_eq!(parse_length("0.5mm").unwrap(), 0.5e-3);
        assert_relative_eq!(parse_length("1e-6").unwrap(), 1e-6);
        assert_relative_eq!(parse_length(" 2.5 um ").unwrap(), 2.5e-6);
        assert!(parse_length("1foo").is_err());
    }

    #[test]
    fn times() {
        assert_relative_eq!(parse_time("164us").unwrap(), 164e-6);
        assert_relative_eq!(parse_time("5.66ms").unwrap(), 5.66e-3);
        assert_relative_eq!(parse_time("2").unwrap(), 2.0);
    }

    #[test]
    fn rates_convert_to_angular_by_default() {
        assert_relative_eq!(
            parse_rate("10MHz", false).unwrap(),
            10e6 * std::f64::consts::TAU
        );
        assert_relative_eq!(parse_rate("10MHz", true).unwrap(), 10e6);
        // Bare numbers are rad/s regardless of the flag.
        assert_relative_eq!(parse_rate("123.0", false).unwrap(), 123.0);
        assert_relative_eq!(parse_rate("123.0", true).unwrap(), 123.0);
    }

    #[test]
    fn hz_equivalent() {
        assert_relative_eq!(to_hz(std::f64::consts::TAU), 1.0);
    }
}
