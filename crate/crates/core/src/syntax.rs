//! Tokenizer shared by the element and predicate parsers.

use crate::error::AlgebraError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(u64),
    Str(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Percent,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Ge,
    Gt,
    Le,
    Lt,
    EqEq,
    Bang,
    AndAnd,
    OrOr,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub offset: usize,
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, AlgebraError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let two = |a: char, b: char| c == a && bytes.get(i + 1).map(|&x| x as char) == Some(b);
        let tok = if two('>', '=') {
            i += 2;
            Tok::Ge
        } else if two('<', '=') {
            i += 2;
            Tok::Le
        } else if two('=', '=') {
            i += 2;
            Tok::EqEq
        } else if two('&', '&') {
            i += 2;
            Tok::AndAnd
        } else if two('|', '|') {
            i += 2;
            Tok::OrOr
        } else if c.is_ascii_digit() {
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            let n = src[start..i]
                .parse::<u64>()
                .map_err(|_| AlgebraError::parse("integer literal too large", start))?;
            Tok::Int(n)
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            Tok::Ident(src[start..i].to_string())
        } else if c == '"' {
            i += 1;
            while i < bytes.len() && bytes[i] != b'"' {
                i += 1;
            }
            if i >= bytes.len() {
                return Err(AlgebraError::parse("unterminated string", start));
            }
            i += 1;
            Tok::Str(src[start + 1..i - 1].to_string())
        } else {
            i += 1;
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '%' => Tok::Percent,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                ',' => Tok::Comma,
                '>' => Tok::Gt,
                '<' => Tok::Lt,
                '!' => Tok::Bang,
                other => {
                    return Err(AlgebraError::parse(format!("unexpected character `{other}`"), start))
                }
            }
        };
        out.push(Token { tok, offset: start });
    }
    Ok(out)
}

pub(crate) struct Cursor {
    toks: Vec<Token>,
    pos: usize,
    end: usize,
}

impl Cursor {
    pub fn new(src: &str) -> Result<Self, AlgebraError> {
        Ok(Cursor { toks: tokenize(src)?, pos: 0, end: src.len() })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    pub fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.offset)
    }

    pub fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: &Tok, what: &str) -> Result<(), AlgebraError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn error(&self, message: impl Into<String>) -> AlgebraError {
        AlgebraError::parse(message, self.offset())
    }

    pub fn signed_int(&mut self) -> Result<i64, AlgebraError> {
        let neg = self.eat(&Tok::Minus);
        match self.next() {
            Some(Tok::Int(n)) => {
                let v = i64::try_from(n).map_err(|_| self.error("integer out of range"))?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.error("expected integer")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_operators() {
        let toks: Vec<Tok> = tokenize("exp(0) >= -3 && !x^2").unwrap().into_iter().map(|t| t.tok).collect();
        assert_eq!(
            toks,
            vec![
                Tok::Ident("exp".into()),
                Tok::LParen,
                Tok::Int(0),
                Tok::RParen,
                Tok::Ge,
                Tok::Minus,
                Tok::Int(3),
                Tok::AndAnd,
                Tok::Bang,
                Tok::Ident("x".into()),
                Tok::Caret,
                Tok::Int(2),
            ]
        );
    }

    #[test]
    fn reports_offsets() {
        let err = tokenize("x # y").unwrap_err();
        assert_eq!(err, AlgebraError::parse("unexpected character `#`", 2));
    }
}
