//! Expression-valued fields on a coordinate chart.
//!
//! Metric and structure-tensor components are stored as immutable expression
//! trees over the chart coordinates `x1..x{dim}`. Evaluation is exact real
//! arithmetic; first derivatives are exact as well, obtained by running the
//! same evaluator over dual numbers (`a + b·δ` with `δ² = 0`) instead of
//! symbolic rewriting. Only first derivatives are ever needed by the
//! connection formulas, so no higher-order machinery exists here.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' uint)?
//! base   := real | 'x' uint | ('sin'|'cos'|'exp') '(' expr ')' | '(' expr ')' | '-' base
//! ```
//!
//! Note the grammar binds unary minus tighter than `^`: `-x1^2` parses as
//! `(-x1)^2`. The printer is the exact inverse of the parser on trees.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{EvalError, ParseError};

/// A point of the chart; length must match the chart dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Copy of the point shifted by `delta` along `axis` (0-based).
    pub fn shifted(&self, axis: usize, delta: f64) -> Self {
        let mut coords = self.coords.clone();
        coords[axis] += delta;
        Point { coords }
    }
}

impl From<Vec<f64>> for Point {
    fn from(coords: Vec<f64>) -> Self {
        Point::new(coords)
    }
}

impl From<&[f64]> for Point {
    fn from(coords: &[f64]) -> Self {
        Point::new(coords.to_vec())
    }
}

/// Immutable expression tree. Coordinate indices are 0-based internally;
/// the surface syntax `x1..x{dim}` is 1-based.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Coord(usize),
    Neg(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Non-negative integer exponent only; keeps the derivative rule total.
    Pow(Box<Expr>, u32),
}

impl Expr {
    /// Constant leaf. Negative values are wrapped as `Neg(Const(|c|))` so
    /// every constructed tree is producible by the parser.
    pub fn constant(c: f64) -> Expr {
        if c < 0.0 {
            Expr::Neg(Box::new(Expr::Const(-c)))
        } else {
            Expr::Const(c)
        }
    }

    /// Coordinate leaf `x{axis+1}` (0-based argument).
    pub fn coord(axis: usize) -> Expr {
        Expr::Coord(axis)
    }

    pub fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }

    pub fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }

    pub fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }

    pub fn div(self, rhs: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(rhs))
    }

    pub fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }

    pub fn sin(self) -> Expr {
        Expr::Sin(Box::new(self))
    }

    pub fn cos(self) -> Expr {
        Expr::Cos(Box::new(self))
    }

    pub fn exp(self) -> Expr {
        Expr::Exp(Box::new(self))
    }

    pub fn pow(self, exponent: u32) -> Expr {
        Expr::Pow(Box::new(self), exponent)
    }

    pub fn is_zero_const(&self) -> bool {
        matches!(self, Expr::Const(c) if *c == 0.0)
    }

    /// Largest coordinate index used, if any.
    pub fn max_coord(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Coord(i) => Some(*i),
            Expr::Neg(e) | Expr::Sin(e) | Expr::Cos(e) | Expr::Exp(e) => e.max_coord(),
            Expr::Pow(e, _) => e.max_coord(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                match (a.max_coord(), b.max_coord()) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, None) => x,
                    (None, y) => y,
                }
            }
        }
    }

    /// Value at `p`.
    pub fn eval(&self, p: &Point) -> Result<f64, EvalError> {
        self.eval_scalar(p.coords(), |_| 0.0).map(|d| d.val)
    }

    /// Exact first partial derivative along `axis` (0-based) at `p`,
    /// computed by dual-number evaluation; no truncation error.
    pub fn derivative(&self, p: &Point, axis: usize) -> Result<f64, EvalError> {
        if axis >= p.dim() {
            return Err(EvalError::AxisOutOfRange {
                axis,
                dim: p.dim(),
            });
        }
        self.eval_scalar(p.coords(), |i| if i == axis { 1.0 } else { 0.0 })
            .map(|d| d.der)
    }

    fn eval_scalar(
        &self,
        coords: &[f64],
        seed: impl Fn(usize) -> f64 + Copy,
    ) -> Result<Dual, EvalError> {
        match self {
            Expr::Const(c) => Ok(Dual::new(*c, 0.0)),
            Expr::Coord(i) => {
                if *i >= coords.len() {
                    return Err(EvalError::CoordOutOfRange {
                        index: *i + 1,
                        dim: coords.len(),
                    });
                }
                Ok(Dual::new(coords[*i], seed(*i)))
            }
            Expr::Neg(e) => Ok(e.eval_scalar(coords, seed)?.neg()),
            Expr::Sin(e) => Ok(e.eval_scalar(coords, seed)?.sin()),
            Expr::Cos(e) => Ok(e.eval_scalar(coords, seed)?.cos()),
            Expr::Exp(e) => Ok(e.eval_scalar(coords, seed)?.exp()),
            Expr::Add(a, b) => Ok(a.eval_scalar(coords, seed)?.add(b.eval_scalar(coords, seed)?)),
            Expr::Sub(a, b) => Ok(a.eval_scalar(coords, seed)?.sub(b.eval_scalar(coords, seed)?)),
            Expr::Mul(a, b) => Ok(a.eval_scalar(coords, seed)?.mul(b.eval_scalar(coords, seed)?)),
            Expr::Div(a, b) => {
                let num = a.eval_scalar(coords, seed)?;
                let den = b.eval_scalar(coords, seed)?;
                if den.val == 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                Ok(num.div(den))
            }
            Expr::Pow(e, n) => Ok(e.eval_scalar(coords, seed)?.powi(*n)),
        }
    }
}

/// Canonical printing; `parse_expression(print(e)) == e` for every tree
/// reachable from the constructors above.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl Expr {
    // Precedence: 1 add/sub, 2 mul/div, 3 pow operand position, 4 atom.
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Pow(..) => 3,
            // Neg binds tighter than '^' in this grammar (base := '-' base),
            // so a negation is printable wherever a base is expected.
            Expr::Neg(_) => 3,
            _ => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        let me = self.prec();
        let parens = me < ctx;
        if parens {
            write!(f, "(")?;
        }
        match self {
            Expr::Const(c) => write!(f, "{}", fmt_const(*c))?,
            Expr::Coord(i) => write!(f, "x{}", i + 1)?,
            Expr::Neg(e) => {
                // the operand must be a syntactic base: '-' binds tighter
                // than '^', so a bare power after '-' would reassociate
                write!(f, "-")?;
                if e.prec() < 4 {
                    write!(f, "({})", e)?;
                } else {
                    e.fmt_prec(f, 4)?;
                }
            }
            Expr::Sin(e) => write!(f, "sin({})", e)?,
            Expr::Cos(e) => write!(f, "cos({})", e)?,
            Expr::Exp(e) => write!(f, "exp({})", e)?,
            Expr::Add(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " + ")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " - ")?;
                b.fmt_prec(f, 2)?;
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "*")?;
                b.fmt_prec(f, 3)?;
            }
            Expr::Div(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "/")?;
                b.fmt_prec(f, 3)?;
            }
            Expr::Pow(e, n) => {
                // '^' applies to a bare base; anything looser needs parens.
                // A Neg operand would reassociate ( -a^2 parses as (-a)^2 ),
                // except when the Neg is the parsed form itself, which the
                // parser never produces under '^'. Parenthesize to be exact.
                if e.prec() < 4 {
                    write!(f, "({})", e)?;
                } else {
                    e.fmt_prec(f, 4)?;
                }
                write!(f, "^{}", n)?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

// Shortest representation that round-trips through f64 parsing; integers
// get a plain form ("2" not "2e0").
fn fmt_const(c: f64) -> String {
    format!("{}", c)
}

/// Dual number `val + der·δ`, `δ² = 0`. Drives exact differentiation of
/// expression trees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub val: f64,
    pub der: f64,
}

impl Dual {
    pub fn new(val: f64, der: f64) -> Self {
        Dual { val, der }
    }

    fn neg(self) -> Self {
        Dual::new(-self.val, -self.der)
    }

    fn add(self, o: Self) -> Self {
        Dual::new(self.val + o.val, self.der + o.der)
    }

    fn sub(self, o: Self) -> Self {
        Dual::new(self.val - o.val, self.der - o.der)
    }

    fn mul(self, o: Self) -> Self {
        Dual::new(self.val * o.val, self.der * o.val + self.val * o.der)
    }

    fn div(self, o: Self) -> Self {
        Dual::new(
            self.val / o.val,
            (self.der * o.val - self.val * o.der) / (o.val * o.val),
        )
    }

    fn sin(self) -> Self {
        Dual::new(self.val.sin(), self.der * self.val.cos())
    }

    fn cos(self) -> Self {
        Dual::new(self.val.cos(), -self.der * self.val.sin())
    }

    fn exp(self) -> Self {
        let e = self.val.exp();
        Dual::new(e, self.der * e)
    }

    fn powi(self, n: u32) -> Self {
        match n {
            0 => Dual::new(1.0, 0.0),
            _ => Dual::new(
                self.val.powi(n as i32),
                f64::from(n) * self.val.powi(n as i32 - 1) * self.der,
            ),
        }
    }
}

/// Parse `text` against the chart dimension `dim`; coordinate references
/// outside `x1..x{dim}` are rejected with their byte offset.
pub fn parse_expression(text: &str, dim: usize) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        dim,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> ParseError {
        ParseError {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(&format!("expected '{}'", c as char))),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = lhs.add(self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = lhs.sub(self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = lhs.mul(self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = lhs.div(self.factor()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let n = self.uint()?;
            Ok(base.pow(n))
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.base()?.neg())
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'x') => {
                self.pos += 1;
                let start = self.pos;
                let idx = self.uint_raw()? as usize;
                if idx < 1 || idx > self.dim {
                    return Err(ParseError {
                        offset: start,
                        message: format!(
                            "coordinate index {} out of range 1..{}",
                            idx, self.dim
                        ),
                    });
                }
                Ok(Expr::Coord(idx - 1))
            }
            Some(c) if c.is_ascii_digit() => self.real(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let mut end = self.pos;
                while end < self.src.len() && self.src[end].is_ascii_alphabetic() {
                    end += 1;
                }
                let name = &self.src[start..end];
                self.pos = end;
                let e = match name {
                    b"sin" => Expr::sin,
                    b"cos" => Expr::cos,
                    b"exp" => Expr::exp,
                    _ => {
                        self.pos = start;
                        return Err(self.err("unknown function name"));
                    }
                };
                self.expect(b'(')?;
                let arg = self.expr()?;
                self.expect(b')')?;
                Ok(e(arg))
            }
            _ => Err(self.err("expected a number, coordinate, function, '(' or '-'")),
        }
    }

    fn uint(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        self.uint_raw()
    }

    // digits only, no sign, no whitespace inside
    fn uint_raw(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(ParseError {
                offset: start,
                message: "expected an unsigned integer".to_string(),
            });
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<u32>()
            .map_err(|_| ParseError {
                offset: start,
                message: "integer literal out of range".to_string(),
            })
    }

    fn real(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            let frac_start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == frac_start {
                return Err(self.err("expected digits after '.'"));
            }
        }
        if self.pos < self.src.len() && (self.src[self.pos] == b'e' || self.src[self.pos] == b'E')
        {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && (self.src[self.pos] == b'+' || self.src[self.pos] == b'-')
            {
                self.pos += 1;
            }
            let exp_start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == exp_start {
                // 'e' belonged to something else (e.g. "2exp(..)" is not
                // valid anyway); treat as end of literal
                self.pos = mark;
            }
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        s.parse::<f64>().map(Expr::Const).map_err(|_| ParseError {
            offset: start,
            message: "invalid numeric literal".to_string(),
        })
    }
}

/// Square matrix of expressions; houses the chart components of the metric
/// and of the structure tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixField {
    dim: usize,
    entries: Vec<Expr>,
}

impl MatrixField {
    pub fn from_entries(dim: usize, entries: Vec<Expr>) -> Self {
        assert_eq!(entries.len(), dim * dim, "entry count must be dim^2");
        MatrixField { dim, entries }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Expr) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        MatrixField { dim, entries }
    }

    /// Constant field from a numeric matrix.
    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        assert_eq!(m.nrows(), m.ncols());
        MatrixField::from_fn(m.nrows(), |i, j| Expr::constant(m[(i, j)]))
    }

    pub fn identity(dim: usize) -> Self {
        MatrixField::from_fn(dim, |i, j| Expr::constant(if i == j { 1.0 } else { 0.0 }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &Expr {
        &self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Expr] {
        &self.entries
    }

    pub fn eval(&self, p: &Point) -> Result<DMatrix<f64>, EvalError> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = self.entry(i, j).eval(p)?;
            }
        }
        Ok(m)
    }

    /// All partials `∂_axis F(p)`, one matrix per axis.
    pub fn eval_partials(&self, p: &Point) -> Result<Vec<DMatrix<f64>>, EvalError> {
        let mut out = Vec::with_capacity(p.dim());
        for axis in 0..p.dim() {
            let mut m = DMatrix::zeros(self.dim, self.dim);
            for i in 0..self.dim {
                for j in 0..self.dim {
                    m[(i, j)] = self.entry(i, j).derivative(p, axis)?;
                }
            }
            out.push(m);
        }
        Ok(out)
    }

    /// Entrywise `A + B`.
    pub fn field_add(&self, other: &MatrixField) -> MatrixField {
        assert_eq!(self.dim, other.dim);
        MatrixField::from_fn(self.dim, |i, j| {
            self.entry(i, j).clone().add(other.entry(i, j).clone())
        })
    }

    /// Entrywise scaling by a constant.
    pub fn field_scale(&self, c: f64) -> MatrixField {
        MatrixField::from_fn(self.dim, |i, j| {
            Expr::constant(c).mul(self.entry(i, j).clone())
        })
    }

    /// Matrix product `A · B` at expression level.
    pub fn field_mul(&self, other: &MatrixField) -> MatrixField {
        assert_eq!(self.dim, other.dim);
        MatrixField::from_fn(self.dim, |i, j| {
            let mut acc: Option<Expr> = None;
            for k in 0..self.dim {
                let prod = self.entry(i, k).clone().mul(other.entry(k, j).clone());
                acc = Some(match acc {
                    None => prod,
                    Some(a) => a.add(prod),
                });
            }
            acc.expect("dim >= 1")
        })
    }

    /// Transpose at expression level.
    pub fn field_transpose(&self) -> MatrixField {
        MatrixField::from_fn(self.dim, |i, j| self.entry(j, i).clone())
    }
}
