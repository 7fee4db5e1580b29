use std::fmt;

use super::{Span, SpecError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    /// Identifiers, numbers and domain elements: `[A-Za-z0-9_][A-Za-z0-9_']*`.
    Ident(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Dot,
    DotDot,
    Eq,
    Pipe,
    Tilde,
    Amp,
    Slash,
    /// `->`
    Arrow,
    /// `<->`
    Iff,
    /// `>>`
    Compose,
    /// `=>`
    Entails,
    /// `:-`
    If,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Colon => ":",
            Tok::Dot => ".",
            Tok::DotDot => "..",
            Tok::Eq => "=",
            Tok::Pipe => "|",
            Tok::Tilde => "~",
            Tok::Amp => "&",
            Tok::Slash => "/",
            Tok::Arrow => "->",
            Tok::Iff => "<->",
            Tok::Compose => ">>",
            Tok::Entails => "=>",
            Tok::If => ":-",
            Tok::Eof => return f.write_str("end of input"),
        };
        write!(f, "`{s}`")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    is_ident_start(c) || c == '\''
}

/// Splits `text` into tokens; `%` and `//` start line comments.
pub fn lex(text: &str) -> Result<Vec<Token>, SpecError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        let next = chars.get(i + 1).copied();
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '%' || (c == '/' && next == Some('/')) {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token { tok: Tok::Ident(word), span });
            continue;
        }
        let (tok, len) = match (c, next) {
            ('<', Some('-')) if chars.get(i + 2) == Some(&'>') => (Tok::Iff, 3),
            ('-', Some('>')) => (Tok::Arrow, 2),
            ('>', Some('>')) => (Tok::Compose, 2),
            ('=', Some('>')) => (Tok::Entails, 2),
            (':', Some('-')) => (Tok::If, 2),
            ('.', Some('.')) => (Tok::DotDot, 2),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('[', _) => (Tok::LBracket, 1),
            (']', _) => (Tok::RBracket, 1),
            (',', _) => (Tok::Comma, 1),
            (';', _) => (Tok::Semi, 1),
            (':', _) => (Tok::Colon, 1),
            ('.', _) => (Tok::Dot, 1),
            ('=', _) => (Tok::Eq, 1),
            ('|', _) => (Tok::Pipe, 1),
            ('~', _) => (Tok::Tilde, 1),
            ('&', _) => (Tok::Amp, 1),
            ('/', _) => (Tok::Slash, 1),
            _ => {
                return Err(SpecError::Syntax { line, col, message: format!("unexpected character `{c}`") });
            }
        };
        out.push(Token { tok, span });
        i += len;
        col += len;
    }
    out.push(Token { tok: Tok::Eof, span: Span { line, col } });
    Ok(out)
}
