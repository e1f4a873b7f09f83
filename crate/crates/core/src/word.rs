//! Letters shared by the operation algebras: an index with an optional
//! Bockstein flag (always unset at p = 2).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub beta: bool,
    pub index: i64,
}

impl Letter {
    pub const fn new(beta: bool, index: i64) -> Self {
        Letter { beta, index }
    }

    pub const fn plain(index: i64) -> Self {
        Letter { beta: false, index }
    }

    pub const fn bock(index: i64) -> Self {
        Letter { beta: true, index }
    }

    #[inline]
    pub fn eps(self) -> i64 {
        self.beta as i64
    }

    /// Formats with a symbol prefix, e.g. `R3`, `bR2`, `Q1`.
    pub fn show(self, symbol: &str) -> String {
        format!("{}{}{}", if self.beta { "b" } else { "" }, symbol, self.index)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.beta {
            write!(f, "b")?;
        }
        write!(f, "{}", self.index)
    }
}

/// Joins letters left to right (outermost first) with a symbol prefix.
pub fn show_word(letters: &[Letter], symbol: &str) -> String {
    if letters.is_empty() {
        return "1".to_string();
    }
    letters
        .iter()
        .map(|l| l.show(symbol))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Shorthand for a word of plain letters.
pub fn plain(indices: &[i64]) -> Vec<Letter> {
    indices.iter().map(|&i| Letter::plain(i)).collect()
}

/// One written letter such as `bR2`, `Sq3`, `P1`, `Q-2` or `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub symbol: String,
    pub letter: Letter,
    /// Whether an index was written; `B` carries none.
    pub indexed: bool,
}

/// Splits a word written outermost letter first into tokens. Letters are
/// separated by whitespace or `*`.
pub fn tokenize(s: &str) -> Result<Vec<Token>> {
    s.split(|c: char| c.is_whitespace() || c == '*')
        .filter(|t| !t.is_empty())
        .map(parse_token)
        .collect()
}

fn parse_token(t: &str) -> Result<Token> {
    let bad = || Error::InvalidWord(format!("cannot parse letter `{t}`"));
    let (beta, rest) = match t.strip_prefix('b') {
        Some(r) if r.starts_with(|c: char| c.is_ascii_uppercase()) => (true, r),
        _ => (false, t),
    };
    let split = rest
        .find(|c: char| !c.is_ascii_alphabetic())
        .unwrap_or(rest.len());
    let (symbol, num) = rest.split_at(split);
    if symbol.is_empty() {
        return Err(bad());
    }
    let (index, indexed) = if num.is_empty() {
        (0, false)
    } else {
        (num.parse::<i64>().map_err(|_| bad())?, true)
    };
    Ok(Token {
        symbol: symbol.to_string(),
        letter: Letter::new(beta, index),
        indexed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens() {
        let t = tokenize("bR2 R-1 B").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[0].letter, Letter::bock(2));
        assert_eq!(t[0].symbol, "R");
        assert_eq!(t[1].letter, Letter::plain(-1));
        assert!(!t[2].indexed);
        assert_eq!(tokenize("Sq2*Sq1").unwrap()[0].symbol, "Sq");
        assert!(tokenize("R2x").is_err());
        assert!(tokenize("3").is_err());
    }
}
