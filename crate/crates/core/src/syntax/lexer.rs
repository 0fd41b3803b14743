use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    LBrace,
    RBrace,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Comma,
    Colon,
    Semi,
    Eq,
    Bang,
    Amp,
    Turnstile,
    BiTurnstile,
    Arrow,
    MapsTo,
    Hash,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Semi => ";",
            Tok::Eq => "=",
            Tok::Bang => "!",
            Tok::Amp => "&",
            Tok::Turnstile => "|-",
            Tok::BiTurnstile => "-||-",
            Tok::Arrow => "->",
            Tok::MapsTo => "|->",
            Tok::Hash => "$",
        };
        write!(f, "`{s}`")
    }
}

#[derive(Debug, Clone)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | '*' | '.' | '∘')
}

/// Tokenizes DSL source. `#` starts a comment running to end of line.
pub fn lex(src: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
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
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 4)].iter().collect();
        let (tok, len) = if rest.starts_with("-||-") {
            (Tok::BiTurnstile, 4)
        } else if rest.starts_with("|->") {
            (Tok::MapsTo, 3)
        } else if rest.starts_with("|-") {
            (Tok::Turnstile, 2)
        } else if rest.starts_with("->") {
            (Tok::Arrow, 2)
        } else {
            let t = match c {
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '[' => Tok::LBrack,
                ']' => Tok::RBrack,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                ':' => Tok::Colon,
                ';' => Tok::Semi,
                '=' => Tok::Eq,
                '!' => Tok::Bang,
                '&' => Tok::Amp,
                '$' => Tok::Hash,
                c if ident_char(c) => {
                    let start = i;
                    while i < chars.len() && ident_char(chars[i]) {
                        i += 1;
                    }
                    let s: String = chars[start..i].iter().collect();
                    col += i - start;
                    out.push(Spanned { tok: Tok::Ident(s), line: l0, col: c0 });
                    continue;
                }
                other => {
                    return Err(Error::Parse {
                        line,
                        col,
                        msg: format!("unexpected character `{other}`"),
                    })
                }
            };
            (t, 1)
        };
        i += len;
        col += len;
        out.push(Spanned { tok, line: l0, col: c0 });
    }
    Ok(out)
}

/// Cursor over a token stream with position-aware errors.
pub struct Cursor {
    toks: Vec<Spanned>,
    pos: usize,
    eof: (usize, usize),
}

impl Cursor {
    pub fn new(src: &str) -> Result<Self> {
        let toks = lex(src)?;
        let lines = src.lines().count().max(1);
        let last = src.lines().last().map(|l| l.chars().count()).unwrap_or(0);
        Ok(Cursor { toks, pos: 0, eof: (lines, last + 1) })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    pub fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|s| &s.tok)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|s| (s.line, s.col)).unwrap_or(self.eof)
    }

    pub fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(Error::Parse { line, col, msg: msg.into() })
    }

    pub fn advance(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, t: &Tok) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.error(format!("expected {t}, found {found}")),
                None => self.error(format!("expected {t}, found end of input")),
            }
        }
    }

    pub fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            Some(found) => self.error(format!("expected identifier, found {found}")),
            None => self.error("expected identifier, found end of input"),
        }
    }

    pub fn keyword(&mut self, kw: &str) -> Result<()> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => self.error(format!("expected `{kw}`")),
        }
    }

    pub fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    pub fn number(&mut self) -> Result<u32> {
        let (line, col) = self.here();
        let s = self.ident()?;
        s.parse().map_err(|_| Error::Parse { line, col, msg: format!("expected number, found `{s}`") })
    }

    /// Comma-separated identifiers up to (not including) `close`.
    pub fn ident_list(&mut self, close: &Tok) -> Result<Vec<String>> {
        let mut v = Vec::new();
        if self.peek() == Some(close) {
            return Ok(v);
        }
        loop {
            v.push(self.ident()?);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(v)
    }
}
