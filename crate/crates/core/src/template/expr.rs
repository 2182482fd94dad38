//! Integer expressions used by data-file templates.
//!
//! Grammar, loosest binding first:
//! `||`, `&&`, comparisons, `+ -`, `* / %`, unary `- !`, indexing `t[e]`.
//! Tuples are indexed from 1. Booleans are 0 and 1. Arithmetic is checked.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error in `{src}` at byte {pos}: {msg}")]
    Syntax { src: String, pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    Unknown(String),
    #[error("`{0}` is a tuple; index it")]
    NotScalar(String),
    #[error("`{0}` is not a tuple")]
    NotTuple(String),
    #[error("index {index} out of range for `{name}` of length {len}")]
    Index { name: String, index: i64, len: usize },
    #[error("arithmetic overflow")]
    Overflow,
    #[error("division by zero")]
    DivisionByZero,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Int(i64),
    Tuple(Vec<i64>),
}

/// Variable bindings.
#[derive(Debug, Clone, Default)]
pub struct Env {
    vars: BTreeMap<String, Value>,
}

impl Env {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, name: impl Into<String>, v: i64) -> &mut Self {
        self.vars.insert(name.into(), Value::Int(v));
        self
    }

    pub fn set_tuple(&mut self, name: impl Into<String>, v: Vec<i64>) -> &mut Self {
        self.vars.insert(name.into(), Value::Tuple(v));
        self
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.vars.get(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BinOp {
    Or,
    And,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
    Mul,
    Div,
    Rem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Node {
    Lit(i64),
    Var(String),
    Index(String, Box<Node>),
    Neg(Box<Node>),
    Not(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
}

/// A parsed expression; `Display` gives back the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    src: String,
    root: Node,
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.src)
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, ExprError> {
        let mut p = Parser { src, pos: 0 };
        let root = p.or()?;
        p.skip_ws();
        if p.pos != src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(Expr {
            src: src.to_string(),
            root,
        })
    }

    pub fn eval(&self, env: &Env) -> Result<i64, ExprError> {
        eval(&self.root, env)
    }
}

/// Parses and evaluates in one step.
pub fn eval_str(src: &str, env: &Env) -> Result<i64, ExprError> {
    Expr::parse(src)?.eval(env)
}

/// Replaces every `{expr}` in `pattern` by its value: `d{i-1}` with `i = 3` is `d2`.
pub fn interpolate(pattern: &str, env: &Env) -> Result<String, ExprError> {
    let mut out = String::with_capacity(pattern.len());
    let mut rest = pattern;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let tail = &rest[open + 1..];
        let Some(close) = tail.find('}') else {
            return Err(ExprError::Syntax {
                src: pattern.to_string(),
                pos: pattern.len() - rest.len() + open,
                msg: "unclosed `{`".into(),
            });
        };
        out.push_str(&eval_str(&tail[..close], env)?.to_string());
        rest = &tail[close + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

fn truth(b: bool) -> i64 {
    i64::from(b)
}

fn eval(n: &Node, env: &Env) -> Result<i64, ExprError> {
    match n {
        Node::Lit(v) => Ok(*v),
        Node::Var(name) => match env.get(name) {
            Some(Value::Int(v)) => Ok(*v),
            Some(Value::Tuple(_)) => Err(ExprError::NotScalar(name.clone())),
            None => Err(ExprError::Unknown(name.clone())),
        },
        Node::Index(name, idx) => {
            let i = eval(idx, env)?;
            match env.get(name) {
                Some(Value::Tuple(t)) => usize::try_from(i)
                    .ok()
                    .filter(|&i| (1..=t.len()).contains(&i))
                    .map(|i| t[i - 1])
                    .ok_or_else(|| ExprError::Index {
                        name: name.clone(),
                        index: i,
                        len: t.len(),
                    }),
                Some(Value::Int(_)) => Err(ExprError::NotTuple(name.clone())),
                None => Err(ExprError::Unknown(name.clone())),
            }
        }
        Node::Neg(a) => eval(a, env)?.checked_neg().ok_or(ExprError::Overflow),
        Node::Not(a) => Ok(truth(eval(a, env)? == 0)),
        Node::Bin(BinOp::Or, a, b) => Ok(truth(eval(a, env)? != 0 || eval(b, env)? != 0)),
        Node::Bin(BinOp::And, a, b) => Ok(truth(eval(a, env)? != 0 && eval(b, env)? != 0)),
        Node::Bin(op, a, b) => {
            let (x, y) = (eval(a, env)?, eval(b, env)?);
            match op {
                BinOp::Eq => Ok(truth(x == y)),
                BinOp::Ne => Ok(truth(x != y)),
                BinOp::Lt => Ok(truth(x < y)),
                BinOp::Le => Ok(truth(x <= y)),
                BinOp::Gt => Ok(truth(x > y)),
                BinOp::Ge => Ok(truth(x >= y)),
                BinOp::Add => x.checked_add(y).ok_or(ExprError::Overflow),
                BinOp::Sub => x.checked_sub(y).ok_or(ExprError::Overflow),
                BinOp::Mul => x.checked_mul(y).ok_or(ExprError::Overflow),
                BinOp::Div | BinOp::Rem if y == 0 => Err(ExprError::DivisionByZero),
                BinOp::Div => x.checked_div(y).ok_or(ExprError::Overflow),
                BinOp::Rem => x.checked_rem(y).ok_or(ExprError::Overflow),
                BinOp::Or | BinOp::And => unreachable!(),
            }
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ExprError {
        ExprError::Syntax {
            src: self.src.to_string(),
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn binary(
        &mut self,
        ops: &[(&str, BinOp)],
        next: fn(&mut Self) -> Result<Node, ExprError>,
    ) -> Result<Node, ExprError> {
        let mut lhs = next(self)?;
        'outer: loop {
            // `ops` lists longer tokens first, so `<=` wins over `<`
            for &(tok, op) in ops {
                if self.eat(tok) {
                    let rhs = next(self)?;
                    lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
                    continue 'outer;
                }
            }
            return Ok(lhs);
        }
    }

    fn or(&mut self) -> Result<Node, ExprError> {
        self.binary(&[("||", BinOp::Or)], Self::and)
    }

    fn and(&mut self) -> Result<Node, ExprError> {
        self.binary(&[("&&", BinOp::And)], Self::cmp)
    }

    fn cmp(&mut self) -> Result<Node, ExprError> {
        self.binary(
            &[
                ("==", BinOp::Eq),
                ("!=", BinOp::Ne),
                ("<=", BinOp::Le),
                (">=", BinOp::Ge),
                ("<", BinOp::Lt),
                (">", BinOp::Gt),
            ],
            Self::sum,
        )
    }

    fn sum(&mut self) -> Result<Node, ExprError> {
        self.binary(&[("+", BinOp::Add), ("-", BinOp::Sub)], Self::term)
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        self.binary(&[("*", BinOp::Mul), ("/", BinOp::Div), ("%", BinOp::Rem)], Self::unary)
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        if self.eat("-") {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.skip_ws();
        if self.src[self.pos..].starts_with('!') && !self.src[self.pos..].starts_with("!=") {
            self.pos += 1;
            return Ok(Node::Not(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Node, ExprError> {
        self.skip_ws();
        if self.eat("(") {
            let inner = self.or()?;
            if !self.eat(")") {
                return Err(self.err("expected `)`"));
            }
            return Ok(inner);
        }
        let rest = &self.src[self.pos..];
        let digits = rest.bytes().take_while(u8::is_ascii_digit).count();
        if digits > 0 {
            let v = rest[..digits].parse().map_err(|_| self.err("integer literal too large"))?;
            self.pos += digits;
            return Ok(Node::Lit(v));
        }
        let ident = rest
            .char_indices()
            .take_while(|&(i, c)| c == '_' || c.is_ascii_alphabetic() || (i > 0 && c.is_ascii_digit()))
            .count();
        if ident == 0 {
            return Err(self.err("expected a number, variable or `(`"));
        }
        let name = rest[..ident].to_string();
        self.pos += ident;
        if self.eat("[") {
            let idx = self.or()?;
            if !self.eat("]") {
                return Err(self.err("expected `]`"));
            }
            return Ok(Node::Index(name, Box::new(idx)));
        }
        Ok(Node::Var(name))
    }
}
