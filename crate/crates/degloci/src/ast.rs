//! Syntax tree of scenario scripts.

use std::fmt;

/// 1-based source location. Locations are metadata: they never take part in
/// AST equality, so a pretty-printed script parses back to an equal tree.
#[derive(Clone, Copy, Debug, Default, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Pos) -> bool {
        true
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Int(u64),
    Ident(String),
    Call { name: String, args: Vec<Arg> },
    List(Vec<Expr>),
    Neg(Box<Expr>),
    Binary { op: BinOp, lhs: Box<Expr>, rhs: Box<Expr> },
    Pow { base: Box<Expr>, exp: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Arg {
    pub key: Option<String>,
    pub value: Expr,
    pub pos: Pos,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeclKind {
    Variety,
    Bundle,
}

impl DeclKind {
    pub fn keyword(self) -> &'static str {
        match self {
            DeclKind::Variety => "variety",
            DeclKind::Bundle => "bundle",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Statement {
    Decl { kind: DeclKind, name: String, value: Expr, pos: Pos },
    Query { name: String, args: Vec<Arg>, pos: Pos },
}

impl Statement {
    pub fn pos(&self) -> Pos {
        match self {
            Statement::Decl { pos, .. } | Statement::Query { pos, .. } => *pos,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Scenario {
    pub statements: Vec<Statement>,
}
