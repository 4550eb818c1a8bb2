//! Shared helpers for the line-oriented text formats.

use num_bigint::BigUint;
use thiserror::Error;

/// Error raised while decoding one of the text formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("invalid hex integer `{0}`")]
    Hex(String),
    #[error("invalid decimal integer `{0}`")]
    Decimal(String),
    #[error("unexpected end of input: {0}")]
    Truncated(String),
    #[error("{0}")]
    Invalid(String),
}

impl FormatError {
    pub(crate) fn syntax(line: usize, msg: impl Into<String>) -> Self {
        FormatError::Syntax { line, msg: msg.into() }
    }
}

/// Lowercase big-endian hex without leading zeros (`0` for zero).
pub fn to_hex(x: &BigUint) -> String {
    x.to_str_radix(16)
}

/// Parses the canonical hex form produced by [`to_hex`]. Uppercase digits,
/// signs and leading zeros are rejected so that encodings stay bit-exact.
pub fn parse_hex(s: &str) -> Result<BigUint, FormatError> {
    let bytes = s.as_bytes();
    let valid = !bytes.is_empty()
        && bytes.iter().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f'))
        && !(bytes.len() > 1 && bytes[0] == b'0');
    if !valid {
        return Err(FormatError::Hex(s.to_string()));
    }
    BigUint::parse_bytes(bytes, 16).ok_or_else(|| FormatError::Hex(s.to_string()))
}

/// Parses a canonical unsigned decimal (no sign, no leading zeros).
pub fn parse_dec<T: std::str::FromStr>(s: &str) -> Result<T, FormatError> {
    let bytes = s.as_bytes();
    let valid = !bytes.is_empty() && bytes.iter().all(u8::is_ascii_digit) && !(bytes.len() > 1 && bytes[0] == b'0');
    if !valid {
        return Err(FormatError::Decimal(s.to_string()));
    }
    s.parse().map_err(|_| FormatError::Decimal(s.to_string()))
}

/// Cursor over numbered lines; numbering is 1-based for error messages.
pub(crate) struct Lines<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Lines<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        let mut lines: Vec<&str> = text.split('\n').collect();
        if lines.last() == Some(&"") {
            lines.pop();
        }
        Lines { lines, pos: 0 }
    }

    pub(crate) fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.pos).copied()
    }

    pub(crate) fn line_no(&self) -> usize {
        self.pos + 1
    }

    pub(crate) fn next_line(&mut self, what: &str) -> Result<(usize, &'a str), FormatError> {
        let line = self.lines.get(self.pos).copied().ok_or_else(|| FormatError::Truncated(what.to_string()))?;
        self.pos += 1;
        Ok((self.pos, line))
    }

    /// Consumes a `key=value` line with the given key and returns the value.
    pub(crate) fn expect_kv(&mut self, key: &str) -> Result<(usize, &'a str), FormatError> {
        let (no, line) = self.next_line(key)?;
        match line.split_once('=') {
            Some((k, v)) if k == key => Ok((no, v)),
            _ => Err(FormatError::syntax(no, format!("expected `{key}=`"))),
        }
    }

    pub(crate) fn expect_exact(&mut self, literal: &str) -> Result<usize, FormatError> {
        let (no, line) = self.next_line(literal)?;
        if line == literal {
            Ok(no)
        } else {
            Err(FormatError::syntax(no, format!("expected `{literal}`")))
        }
    }

    pub(crate) fn is_done(&self) -> bool {
        self.pos >= self.lines.len()
    }
}

/// Splits a comma-separated list, rejecting empty items and whitespace.
pub(crate) fn split_list(s: &str) -> Result<Vec<&str>, FormatError> {
    if s.is_empty() {
        return Err(FormatError::Invalid("empty list".into()));
    }
    let items: Vec<&str> = s.split(',').collect();
    if items.iter().any(|i| i.is_empty() || i.contains(char::is_whitespace)) {
        return Err(FormatError::Invalid(format!("malformed list `{s}`")));
    }
    Ok(items)
}
