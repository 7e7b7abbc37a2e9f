//! Word literals: `a b^-1 [c, d^-1]^2 (a b)^3`, with `1` for the identity.
//! Factors may be separated by whitespace or `*`.

use super::word::{commutator_word, FreeWord, Generator};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WordParseError {
    #[error("column {column}: unknown generator `{name}`")]
    UnknownGenerator { name: String, column: usize },
    #[error("column {column}: {message}")]
    Syntax { message: String, column: usize },
}

impl WordParseError {
    /// Zero-based character offset of the problem within the literal.
    pub fn column(&self) -> usize {
        match self {
            WordParseError::UnknownGenerator { column, .. } | WordParseError::Syntax { column, .. } => {
                *column
            }
        }
    }
}

pub fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.'
}

struct Parser<'a, F> {
    chars: Vec<char>,
    pos: usize,
    resolve: &'a F,
}

impl<F: Fn(&str) -> Option<Generator>> Parser<'_, F> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, WordParseError> {
        Err(WordParseError::Syntax {
            message: message.into(),
            column: self.pos,
        })
    }

    fn expect(&mut self, c: char) -> Result<(), WordParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn word(&mut self) -> Result<FreeWord, WordParseError> {
        let mut acc = FreeWord::identity();
        let mut first = true;
        loop {
            match self.peek() {
                Some('*') if !first => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(c) if is_name_start(c) || c == '[' || c == '(' || c == '1' => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => break,
            }
            first = false;
        }
        if first {
            return self.err("expected a word");
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<FreeWord, WordParseError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.integer()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn integer(&mut self) -> Result<i32, WordParseError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map_err(|_| WordParseError::Syntax {
            message: "expected an integer exponent".into(),
            column: start,
        })
    }

    fn atom(&mut self) -> Result<FreeWord, WordParseError> {
        match self.peek() {
            Some('[') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(',')?;
                let v = self.word()?;
                self.expect(']')?;
                Ok(commutator_word(&u, &v))
            }
            Some('(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(')')?;
                Ok(w)
            }
            Some('1') => {
                self.pos += 1;
                Ok(FreeWord::identity())
            }
            Some(c) if is_name_start(c) => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|&c| is_name_char(c)) {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                match (self.resolve)(&name) {
                    Some(g) => Ok(FreeWord::generator(g)),
                    None => Err(WordParseError::UnknownGenerator { name, column: start }),
                }
            }
            _ => self.err("expected a generator, `1`, `[` or `(`"),
        }
    }
}

/// Parses a word literal, resolving generator names through `resolve`.
pub fn parse_word<F: Fn(&str) -> Option<Generator>>(
    text: &str,
    resolve: &F,
) -> Result<FreeWord, WordParseError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        resolve,
    };
    let w = p.word()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(w)
}

/// Parses a word against a list of generator names.
pub fn parse_word_in(text: &str, names: &[String]) -> Result<FreeWord, WordParseError> {
    parse_word(text, &|n: &str| names.iter().position(|m| m == n).map(|i| i as Generator))
}
