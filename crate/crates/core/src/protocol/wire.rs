//! Low-level text codec: `(name v v …)` groups and the 6-significant-digit
//! numeric format shared by every message type.

use super::ProtocolError;

/// Significant digits carried by every real number on the wire.
pub const SIGNIFICANT_DIGITS: usize = 6;

/// One `(name v …)` group borrowed from a message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group<'a> {
    pub name: &'a str,
    pub values: Vec<&'a str>,
}

/// Splits a message into its parenthesised groups.
///
/// Whitespace (and trailing NUL bytes, which some C clients append) between
/// groups is ignored; any other byte outside a group is an error.
pub fn split_groups(message: &str) -> Result<Vec<Group<'_>>, ProtocolError> {
    let mut groups = Vec::new();
    let mut rest = message;
    loop {
        rest = rest.trim_start_matches(|c: char| c.is_ascii_whitespace() || c == '\0');
        if rest.is_empty() {
            return Ok(groups);
        }
        if !rest.starts_with('(') {
            return Err(ProtocolError::Malformed(format!(
                "unexpected text outside a group: {:?}",
                truncate(rest)
            )));
        }
        let close = rest.find(')').ok_or_else(|| {
            ProtocolError::Malformed(format!("unbalanced parentheses at {:?}", truncate(rest)))
        })?;
        let body = &rest[1..close];
        if body.contains('(') {
            return Err(ProtocolError::Malformed(format!(
                "nested or unbalanced parentheses at {:?}",
                truncate(rest)
            )));
        }
        let mut tokens = body.split_ascii_whitespace();
        let name = tokens
            .next()
            .ok_or_else(|| ProtocolError::Malformed("empty group".into()))?;
        groups.push(Group {
            name,
            values: tokens.collect(),
        });
        rest = &rest[close + 1..];
    }
}

fn truncate(s: &str) -> &str {
    match s.char_indices().nth(24) {
        Some((i, _)) => &s[..i],
        None => s,
    }
}

/// Parses one wire number. Non-finite values are rejected.
pub fn parse_number(name: &str, token: &str) -> Result<f64, ProtocolError> {
    match token.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(ProtocolError::BadNumber {
            name: name.to_string(),
            value: token.to_string(),
        }),
    }
}

/// Rounds `v` to the wire precision. Every parser applies this so that
/// `parse(encode(x)) == x` holds for anything a parser has produced.
pub fn quantize(v: f64) -> f64 {
    if !v.is_finite() {
        return v;
    }
    if v == 0.0 {
        return 0.0;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v)
        .parse()
        .unwrap_or(v)
}

/// Formats `v` as the shortest decimal string carrying the wire precision.
///
/// `200.0` becomes `200`, `0.5` becomes `0.5`, `-1.0` becomes `-1`.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("`{:e}` always has an exponent");
    let exp: i32 = exp.parse().expect("`{:e}` exponent is an integer");
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };

    let mut out = String::with_capacity(16);
    if negative {
        out.push('-');
    }
    if !(-7..21).contains(&exp) {
        out.push_str(&digits[..1]);
        if digits.len() > 1 {
            out.push('.');
            out.push_str(&digits[1..]);
        }
        out.push('e');
        out.push_str(&exp.to_string());
    } else if exp < 0 {
        out.push_str("0.");
        for _ in 0..(-exp - 1) {
            out.push('0');
        }
        out.push_str(digits);
    } else {
        let int_len = exp as usize + 1;
        if digits.len() <= int_len {
            out.push_str(digits);
            for _ in digits.len()..int_len {
                out.push('0');
            }
        } else {
            out.push_str(&digits[..int_len]);
            out.push('.');
            out.push_str(&digits[int_len..]);
        }
    }
    out
}

/// Appends `(name v0 v1 …)` to `out`.
pub fn push_group(out: &mut String, name: &str, values: &[f64]) {
    out.push('(');
    out.push_str(name);
    for v in values {
        out.push(' ');
        out.push_str(&format_number(*v));
    }
    out.push(')');
}

/// Appends `(name n)` for an integer-valued field.
pub fn push_int_group(out: &mut String, name: &str, value: i64) {
    out.push('(');
    out.push_str(name);
    out.push(' ');
    out.push_str(&value.to_string());
    out.push(')');
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn formats_integers_without_fraction() {
        assert_eq!(format_number(200.0), "200");
        assert_eq!(format_number(-1.0), "-1");
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(-0.0), "0");
        assert_eq!(format_number(1_000_000.0), "1000000");
    }

    #[test]
    fn formats_fractions_at_six_digits() {
        assert_eq!(format_number(0.5), "0.5");
        assert_eq!(format_number(0.366519), "0.366519");
        assert_eq!(format_number(std::f64::consts::PI), "3.14159");
        assert_eq!(format_number(-0.000123456789), "-0.000123457");
        assert_eq!(format_number(1628.3185307), "1628.32");
        assert_eq!(format_number(1.5e-9), "1.5e-9");
    }

    #[test]
    fn splits_groups_and_rejects_garbage() {
        let g = split_groups("(a 1 2)(b)  (c -3)\0").unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g[0].values, vec!["1", "2"]);
        assert!(g[1].values.is_empty());
        assert!(split_groups("(a 1").is_err());
        assert!(split_groups("(a (b 1))").is_err());
        assert!(split_groups("x(a 1)").is_err());
        assert!(split_groups("()").is_err());
        assert!(split_groups("").unwrap().is_empty());
    }

    #[test]
    fn rejects_non_finite() {
        assert!(parse_number("x", "nan").is_err());
        assert!(parse_number("x", "inf").is_err());
        assert!(parse_number("x", "abc").is_err());
        assert_eq!(parse_number("x", "-2.5").unwrap(), -2.5);
    }

    proptest! {
        #[test]
        fn quantized_values_survive_format(v in -1e9f64..1e9) {
            let q = quantize(v);
            prop_assert_eq!(format_number(q).parse::<f64>().unwrap(), q);
            prop_assert_eq!(quantize(q), q);
        }

        #[test]
        fn format_matches_quantize(v in -1e12f64..1e12) {
            prop_assert_eq!(format_number(v).parse::<f64>().unwrap(), quantize(v));
        }
    }
}
