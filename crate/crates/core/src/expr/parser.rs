use std::fmt;

use super::lexer::{Lexer, Spanned, Token};
use super::{BinOp, Expr, Func};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    /// What the parser would have accepted here; empty for lexical errors.
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at line {}, column {}: ", self.line, self.column)?;
        match self.expected.as_slice() {
            [] => write!(f, "{}", self.found),
            [one] => write!(f, "expected {one}, found {}", self.found),
            many => write!(f, "expected one of {}, found {}", many.join(", "), self.found),
        }
    }
}

impl SyntaxError {
    pub fn at(tok: &Spanned, expected: &[&str]) -> Self {
        Self {
            line: tok.line,
            column: tok.column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: tok.token.to_string(),
        }
    }

    pub(crate) fn lexical((line, column, msg): (usize, usize, String)) -> Self {
        Self {
            line,
            column,
            expected: Vec::new(),
            found: msg,
        }
    }
}

const KEYWORDS: &[&str] = &["if", "then", "else", "and", "or", "not", "min", "max"];

const OPERAND: &[&str] = &["number", "identifier", "`#place`", "`(`", "`-`", "`not`", "`if`"];

/// Recursive-descent parser over a token stream. Exposed so the document
/// and fault-tree readers can embed expressions in their own grammars.
pub struct ExprParser<'t> {
    tokens: &'t [Spanned],
    pos: usize,
}

/// Parse a complete expression; trailing tokens are an error.
pub fn parse_expression(text: &str) -> Result<Expr, SyntaxError> {
    let tokens = Lexer::new(text)
        .tokenize()
        .map_err(SyntaxError::lexical)?;
    let mut p = ExprParser::new(&tokens);
    let e = p.parse_expr()?;
    p.expect_eof()?;
    Ok(e)
}

impl<'t> ExprParser<'t> {
    /// `tokens` must end with [`Token::Eof`].
    pub fn new(tokens: &'t [Spanned]) -> Self {
        debug_assert!(matches!(tokens.last(), Some(t) if t.token == Token::Eof));
        Self { tokens, pos: 0 }
    }

    pub fn peek(&self) -> &'t Spanned {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    pub fn advance(&mut self) -> &'t Spanned {
        let t = self.peek();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, tok: &Token) -> bool {
        if &self.peek().token == tok {
            self.advance();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: &Token, what: &str) -> Result<&'t Spanned, SyntaxError> {
        if &self.peek().token == tok {
            Ok(self.advance())
        } else {
            Err(SyntaxError::at(self.peek(), &[what]))
        }
    }

    pub fn expect_eof(&self) -> Result<(), SyntaxError> {
        match self.peek().token {
            Token::Eof => Ok(()),
            _ => Err(SyntaxError::at(
                self.peek(),
                &["operator", "end of input"],
            )),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().token, Token::Ident(s) if s == kw)
    }

    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.is_keyword(kw) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), SyntaxError> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            Err(SyntaxError::at(self.peek(), &[&format!("`{kw}`")]))
        }
    }

    pub fn parse_expr(&mut self) -> Result<Expr, SyntaxError> {
        if self.eat_keyword("if") {
            let c = self.parse_expr()?;
            self.expect_keyword("then")?;
            let t = self.parse_expr()?;
            self.expect_keyword("else")?;
            let f = self.parse_expr()?;
            return Ok(Expr::If(Box::new(c), Box::new(t), Box::new(f)));
        }
        self.parse_or()
    }

    fn parse_or(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.parse_and()?;
        while self.eat_keyword("or") {
            lhs = Expr::binary(BinOp::Or, lhs, self.parse_and()?);
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.parse_not()?;
        while self.eat_keyword("and") {
            lhs = Expr::binary(BinOp::And, lhs, self.parse_not()?);
        }
        Ok(lhs)
    }

    fn parse_not(&mut self) -> Result<Expr, SyntaxError> {
        if self.eat_keyword("not") {
            return Ok(Expr::Not(Box::new(self.parse_not()?)));
        }
        self.parse_cmp()
    }

    fn parse_cmp(&mut self) -> Result<Expr, SyntaxError> {
        let lhs = self.parse_add()?;
        let op = match self.peek().token {
            Token::Lt => BinOp::Lt,
            Token::Le => BinOp::Le,
            Token::Gt => BinOp::Gt,
            Token::Ge => BinOp::Ge,
            Token::EqEq => BinOp::Eq,
            Token::Ne => BinOp::Ne,
            _ => return Ok(lhs),
        };
        self.advance();
        Ok(Expr::binary(op, lhs, self.parse_add()?))
    }

    fn parse_add(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.parse_mul()?;
        loop {
            let op = match self.peek().token {
                Token::Plus => BinOp::Add,
                Token::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance();
            lhs = Expr::binary(op, lhs, self.parse_mul()?);
        }
    }

    fn parse_mul(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.parse_unary()?;
        loop {
            let op = match self.peek().token {
                Token::Star => BinOp::Mul,
                Token::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.advance();
            lhs = Expr::binary(op, lhs, self.parse_unary()?);
        }
    }

    fn parse_unary(&mut self) -> Result<Expr, SyntaxError> {
        if self.eat(&Token::Minus) {
            if let Token::Num(v) = self.peek().token {
                self.advance();
                return Ok(Expr::Num(-v));
            }
            return Ok(Expr::Neg(Box::new(self.parse_unary()?)));
        }
        self.parse_atom()
    }

    fn parse_atom(&mut self) -> Result<Expr, SyntaxError> {
        let tok = self.peek();
        match &tok.token {
            Token::Num(v) => {
                self.advance();
                Ok(Expr::Num(*v))
            }
            Token::Mark(p) if !p.is_empty() => {
                self.advance();
                Ok(Expr::Mark(p.clone()))
            }
            Token::LParen => {
                self.advance();
                let e = self.parse_expr()?;
                self.expect(&Token::RParen, "`)`")?;
                Ok(e)
            }
            Token::Ident(name) if name == "min" || name == "max" => {
                let func = if name == "min" { Func::Min } else { Func::Max };
                self.advance();
                self.expect(&Token::LParen, "`(`")?;
                let a = self.parse_expr()?;
                self.expect(&Token::Comma, "`,`")?;
                let b = self.parse_expr()?;
                self.expect(&Token::RParen, "`)`")?;
                Ok(Expr::Call(func, Box::new(a), Box::new(b)))
            }
            Token::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                self.advance();
                Ok(Expr::Param(name.clone()))
            }
            _ => Err(SyntaxError::at(tok, OPERAND)),
        }
    }
}
