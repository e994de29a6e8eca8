//! Text form of a quotient: `a1,a2,.../b1,b2,...`.

use cgf_core::polyq::QuotientSpec;
use thiserror::Error;

/// A malformed token; `position` is the 0-based character offset of the
/// token's first character in the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {}: {reason} ({token:?})", position + 1)]
pub struct ParseError {
    pub position: usize,
    pub token: String,
    pub reason: &'static str,
}

/// Parses `intlist "/" intlist`, where an intlist is a possibly empty
/// comma-separated list of positive decimal integers. Whitespace around
/// tokens is ignored. Both lists come back sorted.
pub fn parse_spec(text: &str) -> Result<QuotientSpec, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let slashes: Vec<usize> = chars.iter().enumerate().filter(|(_, &c)| c == '/').map(|(i, _)| i).collect();
    let split = match slashes.as_slice() {
        [one] => *one,
        [] => {
            return Err(ParseError {
                position: chars.len(),
                token: String::new(),
                reason: "expected '/' between numerator and denominator",
            })
        }
        [_, second, ..] => {
            return Err(ParseError {
                position: *second,
                token: "/".into(),
                reason: "more than one '/'",
            })
        }
    };
    let numerator = parse_list(&chars[..split], 0)?;
    let denominator = parse_list(&chars[split + 1..], split + 1)?;
    Ok(QuotientSpec::new(numerator, denominator).expect("entries are positive"))
}

/// Parses a comma-separated list of positive integers, e.g. semigroup
/// generators.
pub fn parse_int_list(text: &str) -> Result<Vec<u64>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    parse_list(&chars, 0)
}

fn parse_list(chars: &[char], offset: usize) -> Result<Vec<u64>, ParseError> {
    if chars.iter().all(|c| c.is_whitespace()) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut start = 0;
    for end in (0..=chars.len()).filter(|&i| i == chars.len() || chars[i] == ',') {
        out.push(parse_token(&chars[start..end], offset + start)?);
        start = end + 1;
    }
    Ok(out)
}

fn parse_token(raw: &[char], offset: usize) -> Result<u64, ParseError> {
    let lead = raw.iter().take_while(|c| c.is_whitespace()).count();
    let body: String = raw[lead..].iter().collect::<String>().trim_end().to_string();
    let err = |reason| ParseError {
        position: offset + lead,
        token: body.clone(),
        reason,
    };
    if body.is_empty() {
        return Err(err("empty entry"));
    }
    if !body.chars().all(|c| c.is_ascii_digit()) {
        return Err(err("expected a positive decimal integer"));
    }
    match body.parse::<u64>() {
        Ok(0) => Err(err("exponents must be at least 1")),
        Ok(v) => Ok(v),
        Err(_) => Err(err("integer does not fit in 64 bits")),
    }
}

/// Inverse of [`parse_spec`].
pub fn render_spec(spec: &QuotientSpec) -> String {
    spec.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let s = parse_spec("3,4/1,2").unwrap();
        assert_eq!((s.numerator(), s.denominator()), (&[3, 4][..], &[1, 2][..]));
        let s = parse_spec("105,3,5,7 / 35,21,15,1").unwrap();
        assert_eq!(s.numerator(), &[3, 5, 7, 105]);
        assert_eq!(s.denominator(), &[1, 15, 21, 35]);
        assert_eq!(parse_spec(" / ").unwrap(), QuotientSpec::empty());
        assert_eq!(parse_spec("7/").unwrap().denominator(), &[] as &[u64]);
    }

    #[test]
    fn reports_positions() {
        let e = parse_spec("0,2/1").unwrap_err();
        assert_eq!((e.position, e.token.as_str()), (0, "0"));
        let e = parse_spec("3, x4/1").unwrap_err();
        assert_eq!((e.position, e.token.as_str()), (3, "x4"));
        let e = parse_spec("3,,4/1").unwrap_err();
        assert_eq!(e.position, 2);
        let e = parse_spec("3/1/2").unwrap_err();
        assert_eq!(e.position, 3);
        let e = parse_spec("3,4").unwrap_err();
        assert_eq!(e.position, 3);
        let e = parse_spec("1/-2").unwrap_err();
        assert_eq!((e.position, e.token.as_str()), (2, "-2"));
        assert!(parse_spec("99999999999999999999/1").is_err());
    }

    #[test]
    fn round_trip() {
        for text in ["2,3,3,8,12/1,1,4,4,6", "/", "5/", "/1,1"] {
            let spec = parse_spec(text).unwrap();
            assert_eq!(parse_spec(&render_spec(&spec)).unwrap(), spec);
        }
    }
}
