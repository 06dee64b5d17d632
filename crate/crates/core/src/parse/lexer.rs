//! Tokens shared by both surface grammars. ASCII spellings and the
//! UTF-8 symbols used by the printers lex to the same tokens.

use super::SyntaxError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Lambda,
    /// `/\`: type abstraction in λμ2, conjunction in the target.
    SlashBack,
    BigLambda,
    And,
    Mu,
    BoldMu,
    Forall,
    Exists,
    Not,
    Bot,
    Arrow,
    Dot,
    Colon,
    Comma,
    Bar,
    Equals,
    LParen,
    RParen,
    LBrack,
    RBrack,
    LAngle,
    RAngle,
    Star,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(x) => format!("`{x}`"),
            Tok::Eof => "end of input".into(),
            other => format!("{other:?}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

pub(crate) fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let next = chars.get(i + 1).copied();
        let (tok, width) = match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
                continue;
            }
            '\\' => (Tok::Lambda, 1),
            '/' if next == Some('\\') => (Tok::SlashBack, 2),
            '-' if next == Some('>') => (Tok::Arrow, 2),
            'λ' => (Tok::Lambda, 1),
            'Λ' => (Tok::BigLambda, 1),
            '∧' => (Tok::And, 1),
            'μ' => (Tok::Mu, 1),
            '𝛍' => (Tok::BoldMu, 1),
            '∀' => (Tok::Forall, 1),
            '∃' => (Tok::Exists, 1),
            '¬' => (Tok::Not, 1),
            '⊥' => (Tok::Bot, 1),
            '→' => (Tok::Arrow, 1),
            '.' => (Tok::Dot, 1),
            ':' => (Tok::Colon, 1),
            ',' => (Tok::Comma, 1),
            '|' => (Tok::Bar, 1),
            '=' => (Tok::Equals, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '[' => (Tok::LBrack, 1),
            ']' => (Tok::RBrack, 1),
            '<' | '⟨' => (Tok::LAngle, 1),
            '>' | '⟩' => (Tok::RAngle, 1),
            '*' | '⋆' => (Tok::Star, 1),
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i + 1;
                while j < chars.len() {
                    let d = chars[j];
                    let hyphen = d == '-' && chars.get(j + 1).is_some_and(|e| e.is_ascii_alphanumeric());
                    if d.is_ascii_alphanumeric() || d == '_' || d == '\'' || hyphen {
                        j += 1;
                    } else {
                        break;
                    }
                }
                let word: String = chars[i..j].iter().collect();
                let tok = match word.as_str() {
                    "mu" => Tok::Mu,
                    "bmu" => Tok::BoldMu,
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    "not" => Tok::Not,
                    "bot" => Tok::Bot,
                    _ => Tok::Ident(word),
                };
                (tok, j - i)
            }
            other => return Err(SyntaxError::new(pos, format!("unexpected character `{other}`"))),
        };
        out.push((tok, pos));
        i += width;
        col += width;
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

/// Cursor over a token stream.
pub(crate) struct Cursor {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Cursor {
    pub(crate) fn new(src: &str) -> Result<Self, SyntaxError> {
        Ok(Cursor { toks: lex(src)?, at: 0 })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    pub(crate) fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    pub(crate) fn mark(&self) -> usize {
        self.at
    }

    pub(crate) fn reset(&mut self, mark: usize) {
        self.at = mark;
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    pub(crate) fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == kw)
    }

    pub(crate) fn expect(&mut self, t: &Tok) -> Result<(), SyntaxError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.error(format!("expected {}, found {}", t.describe(), self.peek().describe())))
        }
    }

    pub(crate) fn expect_keyword(&mut self, kw: &str) -> Result<(), SyntaxError> {
        if self.is_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected `{kw}`, found {}", self.peek().describe())))
        }
    }

    pub(crate) fn ident(&mut self, reserved: &[&str]) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(x) if !reserved.contains(&x.as_str()) => {
                self.bump();
                Ok(x)
            }
            other => Err(self.error(format!("expected an identifier, found {}", other.describe()))),
        }
    }

    pub(crate) fn finish(&self) -> Result<(), SyntaxError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            other => Err(self.error(format!("unexpected {} after the end of the expression", other.describe()))),
        }
    }

    pub(crate) fn error(&self, msg: String) -> SyntaxError {
        SyntaxError::new(self.pos(), msg)
    }
}
