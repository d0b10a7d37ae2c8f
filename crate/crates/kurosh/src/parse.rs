//! Text syntax for free-product words.
//!
//! Grammar (whitespace ignored between tokens):
//!
//! ```text
//! word   := "1" | term+
//! term   := atom ("^" suffix)?
//! atom   := letter | "(" word ")"
//! suffix := integer | letter | "(" word ")"
//! ```
//!
//! `x^k` with an integer is a power (negative allowed), `x^y` with a letter or
//! parenthesized word is conjugation `y⁻¹ x y`. Letters are the free product's
//! display alphabet; adjacent same-factor letters merge during normalization,
//! so `bc` inside a Klein-four factor is a single syllable.

use crate::error::{Error, Result};
use crate::word::{FreeProduct, Word};

struct Parser<'a> {
    product: &'a FreeProduct,
    bytes: &'a [u8],
    pos: usize,
}

impl FreeProduct {
    /// Parse a word in the display syntax; the result is in normal form.
    pub fn parse_word(&self, input: &str) -> Result<Word> {
        let mut p = Parser { product: self, bytes: input.as_bytes(), pos: 0 };
        p.skip_ws();
        if p.peek().is_none() {
            return Err(p.err("empty input; write 1 for the identity"));
        }
        let w = p.parse_word_until(None)?;
        p.skip_ws();
        if let Some(c) = p.peek() {
            return Err(p.err(format!("unexpected character {:?}", c as char)));
        }
        Ok(w)
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::WordSyntax { pos: self.pos, msg: msg.into() }
    }

    /// Parse terms until `closer` (or end of input when `closer` is `None`).
    /// Does not consume the closer.
    fn parse_word_until(&mut self, closer: Option<u8>) -> Result<Word> {
        self.skip_ws();
        // the identity spelled "1"
        if self.peek() == Some(b'1') {
            self.bump();
            self.skip_ws();
            match (self.peek(), closer) {
                (None, None) => return Ok(Word::empty()),
                (Some(c), Some(cl)) if c == cl => return Ok(Word::empty()),
                _ => return Err(self.err("the identity 1 cannot be part of a longer word")),
            }
        }
        let mut acc = Word::empty();
        let mut any = false;
        loop {
            self.skip_ws();
            match (self.peek(), closer) {
                (None, None) => break,
                (Some(c), Some(cl)) if c == cl => break,
                (None, Some(cl)) => {
                    return Err(self.err(format!("expected {:?} before end of input", cl as char)))
                }
                _ => {}
            }
            let t = self.parse_term()?;
            acc = self.product.mul(&acc, &t);
            any = true;
        }
        if !any {
            return Err(self.err("expected a word"));
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<Word> {
        let atom = self.parse_atom()?;
        self.skip_ws();
        if self.peek() != Some(b'^') {
            return Ok(atom);
        }
        self.bump();
        self.skip_ws();
        match self.peek() {
            Some(c) if c == b'-' || c.is_ascii_digit() => {
                let k = self.parse_integer()?;
                Ok(self.product.pow(&atom, k))
            }
            Some(c) if c == b'(' || c.is_ascii_lowercase() => {
                let by = self.parse_atom()?;
                Ok(self.product.conjugate(&atom, &by))
            }
            _ => Err(self.err("expected an integer, a letter or ( after ^")),
        }
    }

    fn parse_atom(&mut self) -> Result<Word> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.bump();
                let w = self.parse_word_until(Some(b')'))?;
                self.bump(); // the closer, guaranteed present
                Ok(w)
            }
            Some(c) if c.is_ascii_lowercase() => {
                self.bump();
                let l = self
                    .product
                    .letter(c as char)
                    .ok_or_else(|| Error::WordSyntax {
                        pos: self.pos - 1,
                        msg: format!("unknown letter {:?}", c as char),
                    })?;
                Ok(Word::from_normalized(vec![(l.factor, l.element)]))
            }
            Some(c) => Err(self.err(format!("expected a letter or (, found {:?}", c as char))),
            None => Err(self.err("expected a letter or ( before end of input")),
        }
    }

    fn parse_integer(&mut self) -> Result<i64> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.bump();
        }
        let digits_start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == digits_start {
            return Err(self.err("expected digits"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::WordSyntax { pos: start, msg: "integer out of range".into() })
    }
}
