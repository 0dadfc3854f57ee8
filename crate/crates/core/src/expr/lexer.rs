use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Token {
    Num(f64),
    Ident(String),
    /// `#Name`
    Mark(String),
    Str(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Plus,
    Minus,
    Star,
    Slash,
    Lt,
    Le,
    Gt,
    Ge,
    EqEq,
    Ne,
    Assign,
    PlusAssign,
    MinusAssign,
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Num(v) => write!(f, "number {v}"),
            Token::Ident(s) => write!(f, "`{s}`"),
            Token::Mark(s) => write!(f, "`#{s}`"),
            Token::Str(_) => f.write_str("string"),
            Token::LParen => f.write_str("`(`"),
            Token::RParen => f.write_str("`)`"),
            Token::LBrace => f.write_str("`{`"),
            Token::RBrace => f.write_str("`}`"),
            Token::Comma => f.write_str("`,`"),
            Token::Semi => f.write_str("`;`"),
            Token::Plus => f.write_str("`+`"),
            Token::Minus => f.write_str("`-`"),
            Token::Star => f.write_str("`*`"),
            Token::Slash => f.write_str("`/`"),
            Token::Lt => f.write_str("`<`"),
            Token::Le => f.write_str("`<=`"),
            Token::Gt => f.write_str("`>`"),
            Token::Ge => f.write_str("`>=`"),
            Token::EqEq => f.write_str("`==`"),
            Token::Ne => f.write_str("`!=`"),
            Token::Assign => f.write_str("`=`"),
            Token::PlusAssign => f.write_str("`+=`"),
            Token::MinusAssign => f.write_str("`-=`"),
            Token::Eof => f.write_str("end of input"),
        }
    }
}

/// A token with its 1-based source position.
#[derive(Debug, Clone, PartialEq)]
pub struct Spanned {
    pub token: Token,
    pub line: usize,
    pub column: usize,
}

/// Tokenizer shared by expressions, model documents and fault-tree files.
///
/// `#` immediately followed by an identifier character is a marking
/// reference; any other `#` starts a comment running to end of line.
pub struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    src: &'a str,
    line: usize,
    column: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'a> Lexer<'a> {
    pub fn new(src: &'a str) -> Self {
        Self::with_origin(src, 1, 1)
    }

    /// Lex `src` as if it started at `line`/`column` of a larger text.
    pub fn with_origin(src: &'a str, line: usize, column: usize) -> Self {
        Self {
            chars: src.char_indices().peekable(),
            src,
            line,
            column,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next().map(|(_, c)| c)
    }

    fn pos(&mut self) -> usize {
        self.chars.peek().map_or(self.src.len(), |&(i, _)| i)
    }

    pub fn tokenize(mut self) -> Result<Vec<Spanned>, (usize, usize, String)> {
        let mut out = Vec::new();
        loop {
            let t = self.next_token()?;
            let eof = t.token == Token::Eof;
            out.push(t);
            if eof {
                return Ok(out);
            }
        }
    }

    fn next_token(&mut self) -> Result<Spanned, (usize, usize, String)> {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') if !self.peek2().is_some_and(is_ident_start) => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
        let (line, column) = (self.line, self.column);
        let spanned = |token| Spanned {
            token,
            line,
            column,
        };
        let Some(c) = self.peek() else {
            return Ok(spanned(Token::Eof));
        };
        let err = |msg: String| (line, column, msg);

        if c.is_ascii_digit() || (c == '.' && self.peek2().is_some_and(|d| d.is_ascii_digit())) {
            return self.number().map(spanned).map_err(err);
        }
        if is_ident_start(c) {
            return Ok(spanned(Token::Ident(self.ident())));
        }
        self.bump();
        let two = |lx: &mut Self, next: char, yes: Token, no: Token| {
            if lx.peek() == Some(next) {
                lx.bump();
                yes
            } else {
                no
            }
        };
        let token = match c {
            '#' => Token::Mark(self.ident()),
            '"' => {
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(err("unterminated string".into())),
                        Some('"') => break,
                        Some('\\') => match self.bump() {
                            Some('n') => s.push('\n'),
                            Some(c @ ('"' | '\\')) => s.push(c),
                            _ => return Err(err("bad escape in string".into())),
                        },
                        Some(c) => s.push(c),
                    }
                }
                Token::Str(s)
            }
            '(' => Token::LParen,
            ')' => Token::RParen,
            '{' => Token::LBrace,
            '}' => Token::RBrace,
            ',' => Token::Comma,
            ';' => Token::Semi,
            '*' => Token::Star,
            '/' => Token::Slash,
            '+' => two(self, '=', Token::PlusAssign, Token::Plus),
            '-' => two(self, '=', Token::MinusAssign, Token::Minus),
            '<' => two(self, '=', Token::Le, Token::Lt),
            '>' => two(self, '=', Token::Ge, Token::Gt),
            '=' => two(self, '=', Token::EqEq, Token::Assign),
            '!' if self.peek() == Some('=') => {
                self.bump();
                Token::Ne
            }
            other => return Err(err(format!("unexpected character {other:?}"))),
        };
        Ok(spanned(token))
    }

    fn ident(&mut self) -> String {
        let start = self.pos();
        while self.peek().is_some_and(is_ident_char) {
            self.bump();
        }
        self.src[start..self.pos()].to_string()
    }

    fn number(&mut self) -> Result<Token, String> {
        let start = self.pos();
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if self.peek() == Some('.') {
            self.bump();
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.bump();
            }
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let mut ahead = self.chars.clone();
            ahead.next();
            let mut next = ahead.next().map(|(_, c)| c);
            if matches!(next, Some('+' | '-')) {
                next = ahead.next().map(|(_, c)| c);
            }
            if next.is_some_and(|c| c.is_ascii_digit()) {
                self.bump();
                if matches!(self.peek(), Some('+' | '-')) {
                    self.bump();
                }
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.bump();
                }
            } else {
                return Err("malformed exponent".into());
            }
        }
        let text = &self.src[start..self.pos()];
        let v: f64 = text.parse().map_err(|_| format!("bad number {text:?}"))?;
        if !v.is_finite() {
            return Err(format!("number out of range {text:?}"));
        }
        Ok(Token::Num(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Token> {
        Lexer::new(s)
            .tokenize()
            .unwrap()
            .into_iter()
            .map(|t| t.token)
            .collect()
    }

    #[test]
    fn marks_versus_comments() {
        assert_eq!(
            toks("#Up >= 1 # trailing comment\n+2"),
            vec![
                Token::Mark("Up".into()),
                Token::Ge,
                Token::Num(1.0),
                Token::Plus,
                Token::Num(2.0),
                Token::Eof
            ]
        );
    }

    #[test]
    fn scientific_literals() {
        assert_eq!(toks("1.5e-3")[0], Token::Num(1.5e-3));
        assert_eq!(toks("2E+2")[0], Token::Num(200.0));
        assert_eq!(toks(".5")[0], Token::Num(0.5));
        assert!(Lexer::new("1e").tokenize().is_err());
        assert!(Lexer::new("1e999").tokenize().is_err());
    }

    #[test]
    fn positions_are_one_based() {
        let t = Lexer::new("a\n  b").tokenize().unwrap();
        assert_eq!((t[1].line, t[1].column), (2, 3));
    }
}
