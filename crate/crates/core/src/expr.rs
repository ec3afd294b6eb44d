//! Arithmetic expressions and first-match piecewise definitions.
//!
//! Grammar (whitespace insensitive):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' unary)?
//! atom    := number | var | func '(' expr (',' expr)* ')' | '(' expr ')'
//! var     := x | y | x0 | t | s | u
//! func    := abs | exp | sqrt | min | max
//! ```
//!
//! A piece condition is `otherwise`, a union of intervals in bracket
//! notation (`[-1, 1]`, `(1, inf) U (-inf, -1)`) over the context's
//! default variable, or a comparison chain naming its variable
//! (`-1 <= x <= 1`, `y > 3`). Unicode `−`, `≤`, `≥`, `∞` and `∪` are
//! accepted.

use std::fmt;

use crate::error::{FdError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
    X0,
    T,
    S,
    U,
}

impl Var {
    const ALL: [Var; 6] = [Var::X, Var::Y, Var::X0, Var::T, Var::S, Var::U];

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::X0 => "x0",
            Var::T => "t",
            Var::S => "s",
            Var::U => "u",
        }
    }

    fn from_name(s: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == s)
    }

    fn slot(self) -> usize {
        self as usize
    }
}

/// Variable bindings for evaluation. Unbound variables are errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Env {
    values: [Option<f64>; 6],
}

impl Env {
    pub fn new() -> Self {
        Env { values: [None; 6] }
    }

    pub fn with(mut self, var: Var, value: f64) -> Self {
        self.values[var.slot()] = Some(value);
        self
    }

    pub fn set(&mut self, var: Var, value: f64) {
        self.values[var.slot()] = Some(value);
    }

    pub fn get(&self, var: Var) -> Option<f64> {
        self.values[var.slot()]
    }
}

impl Default for Env {
    fn default() -> Self {
        Env::new()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Abs,
    Exp,
    Sqrt,
    Min,
    Max,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Abs => "abs",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Min => "min",
            Func::Max => "max",
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        [Func::Abs, Func::Exp, Func::Sqrt, Func::Min, Func::Max]
            .into_iter()
            .find(|f| f.name() == s)
    }

    fn arity_ok(self, n: usize) -> bool {
        match self {
            Func::Abs | Func::Exp | Func::Sqrt => n == 1,
            Func::Min | Func::Max => n >= 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let mut p = Parser::new(src)?;
        let e = p.expr()?;
        p.expect_end()?;
        Ok(e)
    }

    pub fn eval(&self, env: &Env) -> Result<f64> {
        let v = match self {
            Expr::Num(v) => *v,
            Expr::Var(var) => env
                .get(*var)
                .ok_or_else(|| FdError::eval(format!("variable `{}` is not bound here", var.name())))?,
            Expr::Neg(e) => -e.eval(env)?,
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(env)?, b.eval(env)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(FdError::eval(format!("division by zero ({a}/0)")));
                        }
                        a / b
                    }
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(f, args) => match f {
                Func::Abs => args[0].eval(env)?.abs(),
                Func::Exp => args[0].eval(env)?.exp(),
                Func::Sqrt => {
                    let a = args[0].eval(env)?;
                    if a < 0.0 {
                        return Err(FdError::eval(format!("sqrt of negative number {a}")));
                    }
                    a.sqrt()
                }
                Func::Min | Func::Max => {
                    let mut acc = args[0].eval(env)?;
                    for a in &args[1..] {
                        let v = a.eval(env)?;
                        acc = if *f == Func::Min { acc.min(v) } else { acc.max(v) };
                    }
                    acc
                }
            },
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(FdError::eval(format!("`{self}` evaluates to {v}")))
        }
    }

    /// Value of an expression without variables.
    pub fn constant_value(&self) -> Option<f64> {
        if self.mentions_any_var() {
            None
        } else {
            self.eval(&Env::new()).ok()
        }
    }

    fn mentions_any_var(&self) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(_) => true,
            Expr::Neg(e) => e.mentions_any_var(),
            Expr::Bin(_, a, b) => a.mentions_any_var() || b.mentions_any_var(),
            Expr::Call(_, args) => args.iter().any(Expr::mentions_any_var),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Bin(BinOp::Pow, ..) => 4,
            Expr::Num(v) if *v < 0.0 => 3,
            _ => 5,
        }
    }
}

fn fmt_num(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    // `{:?}` keeps a decimal point or exponent and round-trips exactly.
    write!(f, "{v:?}")
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8| -> fmt::Result {
            if e.precedence() < min_prec {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Num(v) => fmt_num(f, *v),
            Expr::Var(v) => f.write_str(v.name()),
            Expr::Neg(e) => {
                f.write_str("-")?;
                wrap(f, e, 4)
            }
            Expr::Bin(op, a, b) => {
                let p = self.precedence();
                match op {
                    BinOp::Pow => {
                        wrap(f, a, 5)?;
                        f.write_str("^")?;
                        wrap(f, b, 4)
                    }
                    _ => {
                        wrap(f, a, p)?;
                        write!(f, " {} ", op.symbol())?;
                        wrap(f, b, p + 1)
                    }
                }
            }
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn contains(&self, v: f64) -> bool {
        let above = if self.lo_closed { v >= self.lo } else { v > self.lo };
        let below = if self.hi_closed { v <= self.hi } else { v < self.hi };
        above && below
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bound = |v: f64| {
            if v == f64::INFINITY {
                "inf".to_string()
            } else if v == f64::NEG_INFINITY {
                "-inf".to_string()
            } else {
                format!("{v:?}")
            }
        };
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            bound(self.lo),
            bound(self.hi),
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Condition {
    Otherwise,
    /// Union of intervals over `var`; `None` means the context's default
    /// variable.
    In {
        var: Option<Var>,
        intervals: Vec<Interval>,
    },
}

impl Condition {
    pub fn parse(src: &str) -> Result<Condition> {
        if src.trim() == "otherwise" {
            return Ok(Condition::Otherwise);
        }
        let mut p = Parser::new(src)?;
        let c = p.condition()?;
        p.expect_end()?;
        Ok(c)
    }

    fn matches(&self, env: &Env, default_var: Var) -> Result<bool> {
        match self {
            Condition::Otherwise => Ok(true),
            Condition::In { var, intervals } => {
                let var = var.unwrap_or(default_var);
                let v = env
                    .get(var)
                    .ok_or_else(|| FdError::eval(format!("condition variable `{}` is not bound", var.name())))?;
                Ok(intervals.iter().any(|iv| iv.contains(v)))
            }
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Otherwise => f.write_str("otherwise"),
            Condition::In { var, intervals } => {
                if let Some(v) = var {
                    write!(f, "{} in ", v.name())?;
                }
                for (i, iv) in intervals.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" U ")?;
                    }
                    write!(f, "{iv}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub condition: Condition,
    pub body: Expr,
}

/// Ordered pieces with first-match semantics.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseExpression {
    pieces: Vec<Piece>,
    default_var: Var,
}

impl PiecewiseExpression {
    pub fn new(pieces: Vec<Piece>, default_var: Var) -> Result<Self> {
        if pieces.is_empty() {
            return Err(FdError::Schema("piecewise expression needs at least one piece".into()));
        }
        if let Some(i) = pieces[..pieces.len() - 1]
            .iter()
            .position(|p| p.condition == Condition::Otherwise)
        {
            return Err(FdError::Schema(format!(
                "`otherwise` is only allowed as the last piece (found at piece {})",
                i + 1
            )));
        }
        Ok(PiecewiseExpression { pieces, default_var })
    }

    /// A single expression valid everywhere.
    pub fn single(body: Expr, default_var: Var) -> Self {
        PiecewiseExpression {
            pieces: vec![Piece {
                condition: Condition::Otherwise,
                body,
            }],
            default_var,
        }
    }

    pub fn parse_single(src: &str, default_var: Var) -> Result<Self> {
        Ok(Self::single(Expr::parse(src)?, default_var))
    }

    /// Parse pieces written as `<condition> : <expr>`.
    pub fn parse_pieces<S: AsRef<str>>(lines: &[S], default_var: Var) -> Result<Self> {
        let mut pieces = Vec::with_capacity(lines.len());
        for line in lines {
            pieces.push(parse_piece(line.as_ref())?);
        }
        Self::new(pieces, default_var)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn default_var(&self) -> Var {
        self.default_var
    }

    pub fn eval(&self, env: &Env) -> Result<f64> {
        for piece in &self.pieces {
            if piece.condition.matches(env, self.default_var)? {
                return piece.body.eval(env);
            }
        }
        let at = env
            .get(self.default_var)
            .map_or_else(String::new, |v| format!(" at {}={v}", self.default_var.name()));
        Err(FdError::eval(format!("no piece matches{at}")))
    }

    /// Finite interval endpoints of every condition.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for p in &self.pieces {
            if let Condition::In { intervals, .. } = &p.condition {
                for iv in intervals {
                    out.extend([iv.lo, iv.hi].into_iter().filter(|v| v.is_finite()));
                }
            }
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// Constant value if this is a single unconditioned constant body.
    pub fn constant_value(&self) -> Option<f64> {
        match self.pieces.as_slice() {
            [Piece {
                condition: Condition::Otherwise,
                body,
            }] => body.constant_value(),
            _ => None,
        }
    }

    /// One line per piece in `<condition> : <expr>` form.
    pub fn piece_lines(&self) -> Vec<String> {
        self.pieces
            .iter()
            .map(|p| format!("{} : {}", p.condition, p.body))
            .collect()
    }
}

impl fmt::Display for PiecewiseExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pieces.as_slice() {
            [Piece {
                condition: Condition::Otherwise,
                body,
            }] => write!(f, "{body}"),
            _ => f.write_str(&self.piece_lines().join("; ")),
        }
    }
}

fn parse_piece(line: &str) -> Result<Piece> {
    // The condition never contains ':' so the first one splits the piece.
    let (cond, body) = line.split_once(':').ok_or_else(|| FdError::Expression {
        column: 0,
        message: format!("piece `{line}` needs the form `<condition> : <expr>`"),
    })?;
    Ok(Piece {
        condition: Condition::parse(cond)?,
        body: Expr::parse(body)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Le,
    Lt,
    Ge,
    Gt,
    Union,
    End,
}

struct Lexer;

impl Lexer {
    fn tokens(src: &str) -> Result<Vec<(Tok, usize)>> {
        let chars: Vec<char> = src.chars().collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let tok = match c {
                '0'..='9' | '.' => {
                    let start = i;
                    while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                        i += 1;
                    }
                    if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                        let mut j = i + 1;
                        if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                            j += 1;
                        }
                        if j < chars.len() && chars[j].is_ascii_digit() {
                            i = j;
                            while i < chars.len() && chars[i].is_ascii_digit() {
                                i += 1;
                            }
                        }
                    }
                    let text: String = chars[start..i].iter().collect();
                    let v = text.parse::<f64>().map_err(|_| FdError::Expression {
                        column: col,
                        message: format!("bad number `{text}`"),
                    })?;
                    out.push((Tok::Num(v), col));
                    continue;
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = i;
                    while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    let text: String = chars[start..i].iter().collect();
                    let tok = if text == "U" { Tok::Union } else { Tok::Ident(text) };
                    out.push((tok, col));
                    continue;
                }
                '+' | '*' | '/' | '^' => Tok::Op(c),
                '-' | '\u{2212}' => Tok::Op('-'),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                ',' => Tok::Comma,
                '\u{2264}' => Tok::Le,
                '\u{2265}' => Tok::Ge,
                '\u{222A}' => Tok::Union,
                '\u{221E}' => Tok::Ident("inf".into()),
                '<' | '>' => {
                    let eq = chars.get(i + 1) == Some(&'=');
                    if eq {
                        i += 1;
                    }
                    match (c, eq) {
                        ('<', true) => Tok::Le,
                        ('<', false) => Tok::Lt,
                        ('>', true) => Tok::Ge,
                        _ => Tok::Gt,
                    }
                }
                other => {
                    return Err(FdError::Expression {
                        column: col,
                        message: format!("unexpected character `{other}`"),
                    })
                }
            };
            out.push((tok, col));
            i += 1;
        }
        out.push((Tok::End, chars.len() + 1));
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        Ok(Parser {
            toks: Lexer::tokens(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(FdError::Expression {
            column: self.col(),
            message: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}, found {:?}", self.peek()))
        }
    }

    fn expect_end(&mut self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            self.err(format!("unexpected trailing input {:?}", self.peek()))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Op('-') {
            self.bump();
            let inner = self.unary()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() == Tok::Op('^') {
            self.bump();
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.bump() {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if let Some(v) = Var::from_name(&name) {
                    return Ok(Expr::Var(v));
                }
                if name == "inf" {
                    return Ok(Expr::Num(f64::INFINITY));
                }
                let Some(func) = Func::from_name(&name) else {
                    self.pos -= 1;
                    return self.err(format!("unknown identifier `{name}`"));
                };
                self.expect(Tok::LParen, "`(` after function name")?;
                let mut args = vec![self.expr()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.expr()?);
                }
                self.expect(Tok::RParen, "`)`")?;
                if !func.arity_ok(args.len()) {
                    return self.err(format!("`{}` called with {} argument(s)", func.name(), args.len()));
                }
                Ok(Expr::Call(func, args))
            }
            other => {
                self.pos = self.pos.saturating_sub(1);
                self.err(format!("expected a number, variable, function or `(`, found {other:?}"))
            }
        }
    }

    fn const_bound(&mut self) -> Result<f64> {
        let col = self.col();
        let e = self.expr()?;
        match e {
            Expr::Num(v) if v.is_infinite() => Ok(v),
            Expr::Neg(ref inner) if matches!(**inner, Expr::Num(v) if v.is_infinite()) => Ok(f64::NEG_INFINITY),
            _ => e.constant_value().ok_or(FdError::Expression {
                column: col,
                message: format!("interval bound `{e}` must be a constant"),
            }),
        }
    }

    fn condition(&mut self) -> Result<Condition> {
        // Explicit `v in <intervals>`.
        if let (Tok::Ident(name), Tok::Ident(kw)) = (self.peek().clone(), self.peek_at(1).clone()) {
            if kw == "in" {
                let Some(var) = Var::from_name(&name) else {
                    return self.err(format!("unknown variable `{name}`"));
                };
                self.bump();
                self.bump();
                let intervals = self.interval_union()?;
                return Ok(Condition::In {
                    var: Some(var),
                    intervals,
                });
            }
        }
        if matches!(self.peek(), Tok::LBracket) || (matches!(self.peek(), Tok::LParen) && self.looks_like_interval()) {
            let intervals = self.interval_union()?;
            return Ok(Condition::In { var: None, intervals });
        }
        self.comparison_chain()
    }

    /// `(` starts an interval when a top-level comma follows before the
    /// matching `)`.
    fn looks_like_interval(&self) -> bool {
        let mut depth = 0usize;
        for (t, _) in &self.toks[self.pos..] {
            match t {
                Tok::LParen | Tok::LBracket => depth += 1,
                Tok::RParen | Tok::RBracket => {
                    depth -= 1;
                    if depth == 0 {
                        return false;
                    }
                }
                Tok::Comma if depth == 1 => return true,
                Tok::End => return false,
                _ => {}
            }
        }
        false
    }

    fn interval_union(&mut self) -> Result<Vec<Interval>> {
        let mut out = vec![self.interval()?];
        while *self.peek() == Tok::Union {
            self.bump();
            out.push(self.interval()?);
        }
        Ok(out)
    }

    fn interval(&mut self) -> Result<Interval> {
        let lo_closed = match self.bump() {
            Tok::LBracket => true,
            Tok::LParen => false,
            _ => {
                self.pos = self.pos.saturating_sub(1);
                return self.err("expected `[` or `(` to open an interval");
            }
        };
        let lo = self.const_bound()?;
        self.expect(Tok::Comma, "`,` between interval bounds")?;
        let hi = self.const_bound()?;
        let hi_closed = match self.bump() {
            Tok::RBracket => true,
            Tok::RParen => false,
            _ => {
                self.pos = self.pos.saturating_sub(1);
                return self.err("expected `]` or `)` to close an interval");
            }
        };
        if lo > hi {
            return self.err(format!("empty interval: {lo} > {hi}"));
        }
        Ok(Interval {
            lo,
            hi,
            lo_closed: lo_closed && lo.is_finite(),
            hi_closed: hi_closed && hi.is_finite(),
        })
    }

    /// `a <= x <= b`, `a < x`, `x >= a`, ...
    fn comparison_chain(&mut self) -> Result<Condition> {
        let first = self.expr()?;
        let mut items = vec![first];
        let mut ops = Vec::new();
        while let Tok::Le | Tok::Lt | Tok::Ge | Tok::Gt = self.peek() {
            ops.push(self.bump());
            items.push(self.expr()?);
        }
        if ops.is_empty() || ops.len() > 2 {
            return self.err("condition must be `otherwise`, an interval, or a comparison like `a <= x <= b`");
        }
        let var_pos = items
            .iter()
            .position(|e| matches!(e, Expr::Var(_)))
            .ok_or_else(|| FdError::Expression {
                column: self.col(),
                message: "comparison must mention a variable".into(),
            })?;
        let Expr::Var(var) = items[var_pos] else { unreachable!() };
        let mut iv = Interval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
            lo_closed: false,
            hi_closed: false,
        };
        for (k, op) in ops.iter().enumerate() {
            // Relation between items[k] and items[k+1].
            let (var_left, other) = if k == var_pos {
                (true, &items[k + 1])
            } else if k + 1 == var_pos {
                (false, &items[k])
            } else {
                return self.err("comparison chain must be anchored on its variable");
            };
            let c = match other {
                Expr::Num(v) if v.is_infinite() => *v,
                e => e.constant_value().ok_or_else(|| FdError::Expression {
                    column: self.col(),
                    message: format!("comparison bound `{e}` must be a constant"),
                })?,
            };
            // Normalize to "var <op> c".
            let op = if var_left { op.clone() } else { flip(op) };
            match op {
                Tok::Le => {
                    iv.hi = c;
                    iv.hi_closed = true;
                }
                Tok::Lt => {
                    iv.hi = c;
                    iv.hi_closed = false;
                }
                Tok::Ge => {
                    iv.lo = c;
                    iv.lo_closed = true;
                }
                Tok::Gt => {
                    iv.lo = c;
                    iv.lo_closed = false;
                }
                _ => unreachable!(),
            }
        }
        iv.lo_closed &= iv.lo.is_finite();
        iv.hi_closed &= iv.hi.is_finite();
        Ok(Condition::In {
            var: Some(var),
            intervals: vec![iv],
        })
    }
}

fn flip(op: &Tok) -> Tok {
    match op {
        Tok::Le => Tok::Ge,
        Tok::Lt => Tok::Gt,
        Tok::Ge => Tok::Le,
        Tok::Gt => Tok::Lt,
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn at_x(x: f64) -> Env {
        Env::new().with(Var::X, x)
    }

    #[test]
    fn precedence_and_associativity() {
        let e = Expr::parse("1 + 2 * 3 ^ 2").unwrap();
        assert_eq!(e.eval(&Env::new()).unwrap(), 19.0);
        assert_eq!(Expr::parse("-x^2").unwrap().eval(&at_x(3.0)).unwrap(), -9.0);
        assert_eq!(Expr::parse("2^3^2").unwrap().eval(&Env::new()).unwrap(), 512.0);
        assert_eq!(Expr::parse("8 - 3 - 2").unwrap().eval(&Env::new()).unwrap(), 3.0);
        assert_eq!(Expr::parse("8 / 4 / 2").unwrap().eval(&Env::new()).unwrap(), 1.0);
    }

    #[test]
    fn functions() {
        let env = at_x(-4.0);
        assert_eq!(Expr::parse("abs(x)").unwrap().eval(&env).unwrap(), 4.0);
        assert_eq!(Expr::parse("sqrt(abs(x))").unwrap().eval(&env).unwrap(), 2.0);
        assert_eq!(Expr::parse("min(x, 1, -7)").unwrap().eval(&env).unwrap(), -7.0);
        assert_eq!(Expr::parse("max(x, 1)").unwrap().eval(&env).unwrap(), 1.0);
        assert_eq!(Expr::parse("exp(0)").unwrap().eval(&env).unwrap(), 1.0);
    }

    #[test]
    fn unicode_minus() {
        let e = Expr::parse("exp(x)\u{2212}1").unwrap();
        assert_eq!(e.eval(&at_x(0.0)).unwrap(), 0.0);
    }

    #[test]
    fn evaluation_errors() {
        assert!(Expr::parse("sqrt(x)").unwrap().eval(&at_x(-1.0)).is_err());
        assert!(Expr::parse("1/x").unwrap().eval(&at_x(0.0)).is_err());
        assert!(Expr::parse("y").unwrap().eval(&at_x(0.0)).is_err());
    }

    #[test]
    fn parse_errors() {
        assert!(Expr::parse("1 +").is_err());
        assert!(Expr::parse("foo(1)").is_err());
        assert!(Expr::parse("abs(1, 2)").is_err());
        assert!(Expr::parse("(1").is_err());
        let err = Expr::parse("x $ 1").unwrap_err();
        assert!(matches!(err, FdError::Expression { column: 3, .. }));
    }

    #[test]
    fn bracket_and_chain_conditions() {
        let c = Condition::parse("[-1, 1]").unwrap();
        let c2 = Condition::parse("-1 <= x <= 1").unwrap();
        let c3 = Condition::parse("−1 ≤ x ≤ 1").unwrap();
        for x in [-1.5, -1.0, 0.0, 1.0, 1.0001] {
            let env = at_x(x);
            let want = (-1.0..=1.0).contains(&x);
            assert_eq!(c.matches(&env, Var::X).unwrap(), want);
            assert_eq!(c2.matches(&env, Var::X).unwrap(), want);
            assert_eq!(c3.matches(&env, Var::X).unwrap(), want);
        }
        let open = Condition::parse("(-inf, -1) U (1, inf)").unwrap();
        assert!(open.matches(&at_x(2.0), Var::X).unwrap());
        assert!(!open.matches(&at_x(1.0), Var::X).unwrap());
        let gt = Condition::parse("x > 3").unwrap();
        assert!(!gt.matches(&at_x(3.0), Var::X).unwrap());
        let rev = Condition::parse("3 < x").unwrap();
        assert_eq!(rev, gt);
        let y = Condition::parse("y in [0, 2)").unwrap();
        assert!(y.matches(&Env::new().with(Var::Y, 0.0), Var::X).unwrap());
    }

    #[test]
    fn t1_pieces() {
        let pw = PiecewiseExpression::parse_pieces(&["[-1, 1] : x", "otherwise : 2*x"], Var::X).unwrap();
        assert_eq!(pw.eval(&at_x(0.5)).unwrap(), 0.5);
        assert_eq!(pw.eval(&at_x(1.0)).unwrap(), 1.0);
        assert_eq!(pw.eval(&at_x(-3.0)).unwrap(), -6.0);
        assert_eq!(pw.breakpoints(), vec![-1.0, 1.0]);
    }

    #[test]
    fn otherwise_must_be_last() {
        let err = PiecewiseExpression::parse_pieces(&["otherwise : x", "[0,1] : 1"], Var::X);
        assert!(matches!(err, Err(FdError::Schema(_))));
    }

    #[test]
    fn no_matching_piece_is_an_error() {
        let pw = PiecewiseExpression::parse_pieces(&["[0, 1] : x"], Var::X).unwrap();
        assert!(pw.eval(&at_x(2.0)).is_err());
    }

    #[test]
    fn display_round_trips_samples() {
        for src in [
            "x^2 - 2",
            "-(x + 1)^2",
            "2 * (x - x0) / (1 + abs(x))",
            "exp(-y^2) + 1",
            "(-2)^2",
            "-2^2",
            "1 - (2 - 3)",
            "1e-9 * max(1, t, s)",
        ] {
            let e = Expr::parse(src).unwrap();
            let again = Expr::parse(&e.to_string()).unwrap();
            assert_eq!(e, again, "{src} -> {e}");
        }
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (-1e3f64..1e3).prop_map(Expr::Num),
            Just(Expr::Var(Var::X)),
            Just(Expr::Var(Var::X0)),
        ];
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (
                    prop_oneof![
                        Just(BinOp::Add),
                        Just(BinOp::Sub),
                        Just(BinOp::Mul),
                        Just(BinOp::Div),
                        Just(BinOp::Pow)
                    ],
                    inner.clone(),
                    inner.clone()
                )
                    .prop_map(|(op, a, b)| Expr::Bin(op, Box::new(a), Box::new(b))),
                inner.clone().prop_map(|e| Expr::Call(Func::Abs, vec![e])),
                (inner.clone(), inner).prop_map(|(a, b)| Expr::Call(Func::Max, vec![a, b])),
            ]
        })
    }

    proptest! {
        #[test]
        fn printed_expressions_reparse_to_the_same_tree(e in arb_expr()) {
            let printed = e.to_string();
            let again = Expr::parse(&printed).unwrap();
            // A negative literal prints as `-k` and reparses as Neg(k);
            // compare by value instead of by tree in that case.
            let env = Env::new().with(Var::X, 0.37).with(Var::X0, -1.25);
            match (e.eval(&env), again.eval(&env)) {
                (Ok(a), Ok(b)) => prop_assert!(a == b || (a - b).abs() <= 1e-12 * a.abs().max(1.0), "{} vs {}", a, b),
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "{printed}: {a:?} vs {b:?}"),
            }
        }
    }
}
