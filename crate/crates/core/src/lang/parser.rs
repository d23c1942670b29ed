use thiserror::Error;

use super::ast::{BinOp, CmpOp, Constant, Expr, ExprKind, Stmt};
use super::lexer::{tokenize, Span, Token, TokenKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message}")]
pub struct SyntaxError {
    pub message: String,
    pub span: Span,
    /// Token spellings or categories that would have been accepted.
    pub expected: Vec<String>,
}

/// One `;`-separated statement with its source text.
#[derive(Debug, Clone)]
pub struct Statement {
    pub text: String,
    pub span: Span,
    pub parsed: Result<Stmt, SyntaxError>,
}

/// Splits a script into statements and parses each one independently, so a
/// syntax error affects only its own statement. Empty statements are dropped.
pub fn parse_script(source: &str) -> Vec<Statement> {
    let tokens = tokenize(source);
    let mut out = Vec::new();
    for group in tokens.split(|t| t.is(TokenKind::Separator, ";")) {
        let (Some(first), Some(last)) = (group.first(), group.last()) else {
            continue;
        };
        let span = Span::new(first.span.start, last.span.end);
        out.push(Statement {
            text: source[span.start..span.end].to_string(),
            span,
            parsed: parse_statement(group),
        });
    }
    out
}

/// Parses a single statement given as tokens without the trailing `;`.
pub fn parse_statement(tokens: &[Token]) -> Result<Stmt, SyntaxError> {
    let mut p = Parser { tokens, pos: 0 };
    let stmt = p.statement()?;
    if p.peek().is_some() {
        return Err(p.unexpected(&["`;`", "end of input"]));
    }
    Ok(stmt)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, k: usize) -> Option<&'a Token> {
        self.tokens.get(self.pos + k)
    }

    fn end_span(&self) -> Span {
        let e = self.tokens.last().map_or(0, |t| t.span.end);
        Span::new(e, e)
    }

    fn error_at(&self, span: Span, message: String, expected: &[&str]) -> SyntaxError {
        SyntaxError {
            message,
            span,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn unexpected(&self, expected: &[&str]) -> SyntaxError {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Error => {
                self.error_at(t.span, format!("unknown character `{}`", t.text), expected)
            }
            Some(t) => self.error_at(t.span, format!("unexpected `{}`", t.text), expected),
            None => self.error_at(self.end_span(), "unexpected end of input".into(), expected),
        }
    }

    fn eat(&mut self, kind: TokenKind, text: &str) -> bool {
        if self
            .peek()
            .is_some_and(|t| t.kind == kind && t.op() == text)
        {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokenKind, text: &str) -> Result<&'a Token, SyntaxError> {
        match self.peek() {
            Some(t) if t.kind == kind && t.op() == text => {
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.unexpected(&[&format!("`{text}`")])),
        }
    }

    fn statement(&mut self) -> Result<Stmt, SyntaxError> {
        let assign = match (self.peek(), self.peek_at(1)) {
            (Some(a), Some(b))
                if a.kind == TokenKind::Identifier && b.is(TokenKind::Comparator, "=") =>
            {
                Some(a.text.clone())
            }
            _ => None,
        };
        let Some(name) = assign else {
            return Ok(Stmt::Expr(self.expression()?));
        };
        self.pos += 2;
        if name == "SPACE" {
            return self.space_decl();
        }
        let value = self.expression()?;
        Ok(match Constant::from_name(&name) {
            Some(c) => Stmt::SetConstant(c, value),
            None => Stmt::Assign(name, value),
        })
    }

    fn space_decl(&mut self) -> Result<Stmt, SyntaxError> {
        let kind = match self.peek() {
            Some(t) if t.kind == TokenKind::Identifier => t.text.clone(),
            _ => return Err(self.unexpected(&["Z", "Q", "Zp", "Zp32", "R64", "R"])),
        };
        self.pos += 1;
        self.expect(TokenKind::Bracket, "[")?;
        let mut vars = Vec::new();
        if !self.eat(TokenKind::Bracket, "]") {
            loop {
                match self.peek() {
                    Some(t) if t.kind == TokenKind::Identifier => vars.push(t.text.clone()),
                    _ => return Err(self.unexpected(&["variable name"])),
                }
                self.pos += 1;
                if self.eat(TokenKind::Bracket, "]") {
                    break;
                }
                if !self.eat(TokenKind::Separator, ",") {
                    return Err(self.unexpected(&["`,`", "`]`"]));
                }
            }
        }
        Ok(Stmt::Space { kind, vars })
    }

    fn expression(&mut self) -> Result<Expr, SyntaxError> {
        let lhs = self.additive()?;
        let op = match self.peek() {
            Some(t) if t.kind == TokenKind::Comparator => CmpOp::from_symbol(t.op()),
            _ => None,
        };
        let Some(op) = op else {
            return Ok(lhs);
        };
        self.pos += 1;
        let rhs = self.additive()?;
        let span = lhs.span.join(rhs.span);
        Ok(Expr::new(
            ExprKind::Compare(op, Box::new(lhs), Box::new(rhs)),
            span,
        ))
    }

    fn binary_op(&self, ops: &[(&str, BinOp)]) -> Option<BinOp> {
        let t = self.peek()?;
        if t.kind != TokenKind::Operator {
            return None;
        }
        ops.iter().find(|(s, _)| *s == t.op()).map(|(_, o)| *o)
    }

    fn additive(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.multiplicative()?;
        while let Some(op) = self.binary_op(&[("+", BinOp::Add), ("-", BinOp::Sub)]) {
            self.pos += 1;
            let rhs = self.multiplicative()?;
            let span = lhs.span.join(rhs.span);
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn multiplicative(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.binary_op(&[("*", BinOp::Mul), ("/", BinOp::Div)]) {
            self.pos += 1;
            let rhs = self.unary()?;
            let span = lhs.span.join(rhs.span);
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        let start = self.peek().map(|t| t.span);
        if self.eat(TokenKind::Operator, "-") {
            let inner = self.unary()?;
            let span = start.unwrap_or_default().join(inner.span);
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), span));
        }
        if self.eat(TokenKind::Operator, "+") {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, SyntaxError> {
        let base = self.postfix()?;
        if !self.eat(TokenKind::Operator, "^") {
            return Ok(base);
        }
        let exp = self.unary()?;
        let span = base.span.join(exp.span);
        Ok(Expr::new(
            ExprKind::Binary(BinOp::Pow, Box::new(base), Box::new(exp)),
            span,
        ))
    }

    fn postfix(&mut self) -> Result<Expr, SyntaxError> {
        let mut e = self.primary()?;
        while let Some(t) = self.peek().filter(|t| t.is(TokenKind::Operator, "°")) {
            self.pos += 1;
            let span = e.span.join(t.span);
            e = Expr::new(ExprKind::Degrees(Box::new(e)), span);
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<Expr, SyntaxError> {
        const STARTS: &[&str] = &["number", "name", "`\\function`", "`(`", "`[`", "`-`"];
        let Some(t) = self.peek() else {
            return Err(self.unexpected(STARTS));
        };
        match t.kind {
            TokenKind::Number => {
                self.pos += 1;
                Ok(Expr::new(ExprKind::Number(t.text.clone()), t.span))
            }
            TokenKind::Identifier => {
                self.pos += 1;
                Ok(Expr::new(ExprKind::Ident(t.text.clone()), t.span))
            }
            TokenKind::Function => {
                self.pos += 1;
                let name = t.text[1..].to_string();
                let close = match self.peek() {
                    Some(b) if b.is(TokenKind::Bracket, "(") => ")",
                    Some(b) if b.is(TokenKind::Bracket, "{") => "}",
                    _ => {
                        return Ok(Expr::new(
                            ExprKind::Call {
                                name,
                                args: Vec::new(),
                                bare: true,
                            },
                            t.span,
                        ))
                    }
                };
                self.pos += 1;
                let (args, end) = self.list(close)?;
                Ok(Expr::new(
                    ExprKind::Call {
                        name,
                        args,
                        bare: false,
                    },
                    t.span.join(end),
                ))
            }
            TokenKind::Bracket if t.text == "(" => {
                self.pos += 1;
                let inner = self.expression()?;
                self.expect(TokenKind::Bracket, ")")?;
                Ok(inner)
            }
            TokenKind::Bracket if t.text == "[" => {
                self.pos += 1;
                let (items, end) = self.list("]")?;
                Ok(Expr::new(ExprKind::Vector(items), t.span.join(end)))
            }
            _ => Err(self.unexpected(STARTS)),
        }
    }

    /// Comma-separated expressions up to `close`, which is consumed.
    fn list(&mut self, close: &str) -> Result<(Vec<Expr>, Span), SyntaxError> {
        let mut items = Vec::new();
        if let Some(t) = self.peek().filter(|t| t.is(TokenKind::Bracket, close)) {
            self.pos += 1;
            return Ok((items, t.span));
        }
        loop {
            items.push(self.expression()?);
            if let Some(t) = self.peek().filter(|t| t.is(TokenKind::Bracket, close)) {
                self.pos += 1;
                return Ok((items, t.span));
            }
            if !self.eat(TokenKind::Separator, ",") {
                return Err(self.unexpected(&["`,`", &format!("`{close}`")]));
            }
        }
    }
}
