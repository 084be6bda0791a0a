use crate::error::{Error, Pos, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Var(usize),
    Nat(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Dot,
    Comma,
    LParen,
    RParen,
    LAngle,
    RAngle,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Var(i) => format!("variable `x{i}`"),
            Tok::Nat(n) => format!("number `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LAngle => "`<`".into(),
            Tok::RAngle => "`>`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|&c| pred(c)) {
            s.push(c);
            self.bump();
        }
        s
    }
}

fn is_var(word: &str) -> Option<usize> {
    let digits = word.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        pos: Pos { line: 1, column: 1 },
    };
    let mut out = Vec::new();
    loop {
        cur.take_while(char::is_whitespace);
        let pos = cur.pos;
        let Some(c) = cur.peek() else {
            out.push(Token { tok: Tok::Eof, pos });
            return Ok(out);
        };
        let tok = if c.is_ascii_digit() {
            let digits = cur.take_while(|c| c.is_ascii_digit());
            if cur.peek() == Some('.') {
                let mut ahead = cur.chars.clone();
                ahead.next();
                if ahead.next().is_some_and(|c| c.is_ascii_digit()) {
                    return Err(Error::Syntax {
                        pos,
                        expected: "an integer or p/q literal".into(),
                        found: "a decimal literal".into(),
                    });
                }
            }
            Tok::Nat(digits)
        } else if c.is_alphabetic() || c == '_' {
            let word = cur.take_while(|c| c.is_alphanumeric() || c == '_');
            match is_var(&word) {
                Some(i) => Tok::Var(i),
                None if word.starts_with('x') && word[1..].bytes().all(|b| b.is_ascii_digit()) => {
                    return Err(Error::Syntax {
                        pos,
                        expected: "a variable index".into(),
                        found: format!("`{word}`"),
                    })
                }
                None => Tok::Ident(word),
            }
        } else {
            cur.bump();
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                '/' => Tok::Slash,
                '.' => Tok::Dot,
                ',' => Tok::Comma,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '<' => Tok::LAngle,
                '>' => Tok::RAngle,
                other => {
                    return Err(Error::Syntax {
                        pos,
                        expected: "a token".into(),
                        found: format!("character `{other}`"),
                    })
                }
            }
        };
        out.push(Token { tok, pos });
    }
}
