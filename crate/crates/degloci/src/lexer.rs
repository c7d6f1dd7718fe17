//! Tokenizer. Newlines end statements except inside brackets; `#` starts a
//! comment running to the end of the line.

use crate::ast::Pos;
use crate::error::DslError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(u64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eq,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Newline,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier '{}'", s),
            Tok::Int(n) => format!("number {}", n),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
            other => format!("'{}'", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Eq => "=",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            _ => "",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, DslError> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match c {
            '\n' => {
                bump(&mut chars);
                if depth == 0 && !matches!(out.last(), Some(Token { tok: Tok::Newline, .. }) | None) {
                    out.push(Token { tok: Tok::Newline, pos });
                }
            }
            c if c.is_whitespace() => {
                bump(&mut chars);
            }
            '#' => {
                while matches!(chars.peek(), Some(&c) if c != '\n') {
                    bump(&mut chars);
                }
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while matches!(chars.peek(), Some(c) if c.is_ascii_digit()) {
                    s.push(bump(&mut chars));
                }
                let n = s.parse::<u64>().map_err(|_| DslError::lexical(pos, format!("number {} is too large", s)))?;
                out.push(Token { tok: Tok::Int(n), pos });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while matches!(chars.peek(), Some(c) if c.is_ascii_alphanumeric() || *c == '_') {
                    s.push(bump(&mut chars));
                }
                out.push(Token { tok: Tok::Ident(s), pos });
            }
            _ => {
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    ',' => Tok::Comma,
                    '=' => Tok::Eq,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    other => return Err(DslError::lexical(pos, format!("unexpected character '{}'", other))),
                };
                match tok {
                    Tok::LParen | Tok::LBracket => depth += 1,
                    Tok::RParen | Tok::RBracket => depth = depth.saturating_sub(1),
                    _ => {}
                }
                bump(&mut chars);
                out.push(Token { tok, pos });
            }
        }
    }
    out.push(Token { tok: Tok::Eof, pos: Pos { line, col } });
    Ok(out)
}
