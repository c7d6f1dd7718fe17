//! Recursive-descent parser.
//!
//! ```text
//! scenario  := { statement NEWLINE }
//! statement := ("variety" | "bundle") IDENT "=" expr | "query" IDENT "(" args ")"
//! expr      := term { ("+" | "-") term }
//! term      := unary { ("*" | "/") unary }
//! unary     := "-" unary | power
//! power     := primary [ "^" INT ]
//! primary   := INT | IDENT [ "(" args ")" ] | "[" [ expr { "," expr } ] "]" | "(" expr ")"
//! args      := [ arg { "," arg } ],  arg := [ IDENT "=" ] expr
//! ```

use crate::ast::{Arg, BinOp, DeclKind, Expr, ExprKind, Pos, Scenario, Statement};
use crate::error::DslError;
use crate::lexer::{tokenize, Tok, Token};
use crate::signature::check_scenario;

/// Parses and checks a script: syntax, then bindings and arities.
pub fn parse(src: &str) -> Result<Scenario, DslError> {
    let scenario = parse_syntax(src)?;
    check_scenario(&scenario)?;
    Ok(scenario)
}

/// Syntax only, without name resolution.
pub fn parse_syntax(src: &str) -> Result<Scenario, DslError> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, at: 0 };
    let mut statements = Vec::new();
    p.skip_newlines();
    while p.peek() != &Tok::Eof {
        statements.push(p.statement()?);
        match p.peek() {
            Tok::Newline => p.skip_newlines(),
            Tok::Eof => {}
            other => return Err(DslError::syntax(p.pos(), format!("expected end of line, found {}", other.describe()))),
        }
    }
    Ok(Scenario { statements })
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn peek2(&self) -> &Tok {
        &self.tokens[(self.at + 1).min(self.tokens.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn skip_newlines(&mut self) {
        while self.peek() == &Tok::Newline {
            self.next();
        }
    }

    /// Failure inside a bracket opened at `open`. When the offending token sits
    /// on a later line than the bracket, the bracket itself is reported.
    fn unclosed(&self, open: Pos, closer: &str) -> DslError {
        let found = self.peek().describe();
        if self.pos().line > open.line || self.peek() == &Tok::Eof {
            DslError::syntax(open, format!("this bracket is never closed: expected ',' or '{}', found {}", closer, found))
        } else {
            DslError::syntax(self.pos(), format!("expected ',' or '{}', found {}", closer, found))
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Pos, DslError> {
        if *self.peek() == tok {
            Ok(self.next().pos)
        } else {
            Err(DslError::syntax(self.pos(), format!("expected {}, found {}", what, self.peek().describe())))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Pos), DslError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let pos = self.next().pos;
                Ok((s, pos))
            }
            other => Err(DslError::syntax(self.pos(), format!("expected {}, found {}", what, other.describe()))),
        }
    }

    fn statement(&mut self) -> Result<Statement, DslError> {
        let (keyword, pos) = self.ident("'variety', 'bundle' or 'query'")?;
        match keyword.as_str() {
            "variety" | "bundle" => {
                let kind = if keyword == "variety" { DeclKind::Variety } else { DeclKind::Bundle };
                let (name, _) = self.ident("a name")?;
                self.expect(Tok::Eq, "'='")?;
                let value = self.expr()?;
                Ok(Statement::Decl { kind, name, value, pos })
            }
            "query" => {
                let (name, _) = self.ident("a query name")?;
                let open = self.expect(Tok::LParen, "'('")?;
                let args = self.args(open)?;
                Ok(Statement::Query { name, args, pos })
            }
            other => Err(DslError::syntax(pos, format!("expected 'variety', 'bundle' or 'query', found '{}'", other))),
        }
    }

    /// Arguments after an opening parenthesis, through the closing one.
    fn args(&mut self, open: Pos) -> Result<Vec<Arg>, DslError> {
        let mut args = Vec::new();
        if self.peek() == &Tok::RParen {
            self.next();
            return Ok(args);
        }
        loop {
            let pos = self.pos();
            let key = match (self.peek().clone(), self.peek2()) {
                (Tok::Ident(k), Tok::Eq) => {
                    self.next();
                    self.next();
                    Some(k)
                }
                _ => None,
            };
            let value = self.expr()?;
            args.push(Arg { key, value, pos });
            match self.peek() {
                Tok::Comma => {
                    self.next();
                }
                Tok::RParen => {
                    self.next();
                    return Ok(args);
                }
                _ => return Err(self.unclosed(open, ")")),
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.term()?;
            let pos = lhs.pos;
            lhs = Expr { kind: ExprKind::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) }, pos };
        }
    }

    fn term(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.unary()?;
            let pos = lhs.pos;
            lhs = Expr { kind: ExprKind::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) }, pos };
        }
    }

    fn unary(&mut self) -> Result<Expr, DslError> {
        if self.peek() == &Tok::Minus {
            let pos = self.next().pos;
            let inner = self.unary()?;
            return Ok(Expr { kind: ExprKind::Neg(Box::new(inner)), pos });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, DslError> {
        let base = self.primary()?;
        if self.peek() != &Tok::Caret {
            return Ok(base);
        }
        self.next();
        let pos = self.pos();
        match self.next().tok {
            Tok::Int(e) => {
                let exp = u32::try_from(e).map_err(|_| DslError::syntax(pos, "exponent is too large"))?;
                let bpos = base.pos;
                Ok(Expr { kind: ExprKind::Pow { base: Box::new(base), exp }, pos: bpos })
            }
            other => Err(DslError::syntax(pos, format!("expected an integer exponent, found {}", other.describe()))),
        }
    }

    fn primary(&mut self) -> Result<Expr, DslError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                Ok(Expr { kind: ExprKind::Int(n), pos })
            }
            Tok::Ident(name) => {
                self.next();
                if self.peek() == &Tok::LParen {
                    let open = self.next().pos;
                    let args = self.args(open)?;
                    Ok(Expr { kind: ExprKind::Call { name, args }, pos })
                } else {
                    Ok(Expr { kind: ExprKind::Ident(name), pos })
                }
            }
            Tok::LBracket => {
                self.next();
                let mut items = Vec::new();
                if self.peek() != &Tok::RBracket {
                    loop {
                        items.push(self.expr()?);
                        if self.peek() == &Tok::Comma {
                            self.next();
                        } else {
                            break;
                        }
                    }
                }
                if self.peek() != &Tok::RBracket {
                    return Err(self.unclosed(pos, "]"));
                }
                self.next();
                Ok(Expr { kind: ExprKind::List(items), pos })
            }
            Tok::LParen => {
                self.next();
                let inner = self.expr()?;
                if self.peek() != &Tok::RParen {
                    return Err(self.unclosed(pos, ")"));
                }
                self.next();
                Ok(inner)
            }
            other => Err(DslError::syntax(pos, format!("expected an expression, found {}", other.describe()))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let s = parse_syntax("query integrate(X, -a + 2*b^2 - c/3)").unwrap();
        let Statement::Query { args, .. } = &s.statements[0] else { panic!() };
        let ExprKind::Binary { op: BinOp::Sub, lhs, .. } = &args[1].value.kind else { panic!() };
        let ExprKind::Binary { op: BinOp::Add, lhs: neg, rhs } = &lhs.kind else { panic!() };
        assert!(matches!(neg.kind, ExprKind::Neg(_)));
        assert!(matches!(&rhs.kind, ExprKind::Binary { op: BinOp::Mul, .. }));
    }

    #[test]
    fn syntax_errors_name_the_line() {
        let err = parse_syntax("variety X = projective_space(2)\nbundle E = line(X, h\nquery chern(E)").unwrap_err();
        assert_eq!(err.kind, "syntax");
        assert_eq!((err.line, err.col), (2, 16), "{}", err);
        let err = parse_syntax("variety X projective_space(2)").unwrap_err();
        assert_eq!((err.line, err.col), (1, 11));
        assert!(parse_syntax("query chern(E) extra").is_err());
        assert!(parse_syntax("frobnicate X = 1").is_err());
    }
}
