//! Laurent polynomials in y over a field, and 2x2 matrices of them.

use std::collections::BTreeMap;
use std::fmt;

use super::field::Field;
use super::poly::{QPoly, RatFunc};
use crate::error::{Error, Result};
use crate::exactalg::Q;

#[derive(Clone, Debug, PartialEq)]
pub struct YLaurent<F: Field> {
    terms: BTreeMap<i64, F>,
}

impl<F: Field> Default for YLaurent<F> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<F: Field> YLaurent<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(F::one(), 0)
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(c, 0)
    }

    /// c * y^e
    pub fn monomial(c: F, e: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    pub fn y_pow(e: i64) -> Self {
        Self::monomial(F::one(), e)
    }

    pub fn add_term(&mut self, e: i64, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let s = old.add(&c);
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &F)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i64) -> F {
        self.terms.get(&e).cloned().unwrap_or_else(F::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                out.add_term(e1 + e2, c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, v)| (*e, v.mul(c))).collect() }
    }

    /// Multiply by y^k.
    pub fn shift(&self, k: i64) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    /// Coefficient-wise map into another field.
    pub fn map<G: Field>(&self, f: impl Fn(&F) -> Option<G>) -> Option<YLaurent<G>> {
        let mut out = YLaurent::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, f(c)?);
        }
        Some(out)
    }

    /// Single term c * y^e, if the polynomial is one.
    pub fn as_monomial(&self) -> Option<(i64, &F)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, c))
        } else {
            None
        }
    }
}

impl YLaurent<RatFunc> {
    /// Value at x = λ; None at a pole.
    pub fn eval_x(&self, lambda: &Q) -> Option<YLaurent<Q>> {
        self.map(|c| c.eval(lambda))
    }

    pub fn from_q(p: &YLaurent<Q>) -> Self {
        p.map(|c| Some(RatFunc::constant(c.clone()))).expect("total map")
    }
}

impl<F: Field> fmt::Display for YLaurent<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let cs = c.to_string();
                let cs = if cs.contains(['+', ' ']) || (cs.contains('-') && !cs.starts_with('-')) {
                    format!("({cs})")
                } else {
                    cs
                };
                match *e {
                    0 => cs,
                    _ => {
                        let y = if *e == 1 { "y".to_string() } else { format!("y^{e}") };
                        match cs.as_str() {
                            "1" => y,
                            "-1" => format!("-{y}"),
                            _ => format!("{cs}*{y}"),
                        }
                    }
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Row-major 2x2 matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat2<F: Field> {
    pub e: [[YLaurent<F>; 2]; 2],
}

impl<F: Field> Mat2<F> {
    pub fn new(e00: YLaurent<F>, e01: YLaurent<F>, e10: YLaurent<F>, e11: YLaurent<F>) -> Self {
        Self { e: [[e00, e01], [e10, e11]] }
    }

    pub fn identity() -> Self {
        Self::diag(YLaurent::one(), YLaurent::one())
    }

    pub fn diag(d0: YLaurent<F>, d1: YLaurent<F>) -> Self {
        Self::new(d0, YLaurent::zero(), YLaurent::zero(), d1)
    }

    /// diag(y^m, y^n)
    pub fn diag_y(m: i64, n: i64) -> Self {
        Self::diag(YLaurent::y_pow(m), YLaurent::y_pow(n))
    }

    /// Constant matrix from field entries.
    pub fn constant(m: [[F; 2]; 2]) -> Self {
        let [[a, b], [c, d]] = m;
        Self::new(YLaurent::constant(a), YLaurent::constant(b), YLaurent::constant(c), YLaurent::constant(d))
    }

    pub fn get(&self, i: usize, j: usize) -> &YLaurent<F> {
        &self.e[i][j]
    }

    pub fn mul(&self, o: &Self) -> Self {
        let cell = |i: usize, j: usize| self.e[i][0].mul(&o.e[0][j]).add(&self.e[i][1].mul(&o.e[1][j]));
        Self::new(cell(0, 0), cell(0, 1), cell(1, 0), cell(1, 1))
    }

    pub fn det(&self) -> YLaurent<F> {
        self.e[0][0].mul(&self.e[1][1]).sub(&self.e[0][1].mul(&self.e[1][0]))
    }

    pub fn adjugate(&self) -> Self {
        Self::new(self.e[1][1].clone(), self.e[0][1].neg(), self.e[1][0].neg(), self.e[0][0].clone())
    }

    /// Inverse when the determinant is a single term c*y^d.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        let (d, c) = det.as_monomial().ok_or(if det.is_zero() { Error::NotInvertible } else { Error::NonUnitDeterminant })?;
        let inv = YLaurent::monomial(c.inv(), -d);
        let adj = self.adjugate();
        Ok(Self { e: adj.e.map(|row| row.map(|x| x.mul(&inv))) })
    }

    pub fn scale_row(&self, i: usize, f: &F) -> Self {
        let mut out = self.clone();
        for j in 0..2 {
            out.e[i][j] = out.e[i][j].scale(f);
        }
        out
    }

    pub fn scale_col(&self, j: usize, f: &F) -> Self {
        let mut out = self.clone();
        for i in 0..2 {
            out.e[i][j] = out.e[i][j].scale(f);
        }
        out
    }

    pub fn swap_cols(&self) -> Self {
        let mut out = self.clone();
        for i in 0..2 {
            out.e[i].swap(0, 1);
        }
        out
    }

    pub fn column(&self, j: usize) -> [&YLaurent<F>; 2] {
        [&self.e[0][j], &self.e[1][j]]
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.e.iter().flatten().filter_map(YLaurent::min_exp).min()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.e.iter().flatten().filter_map(YLaurent::max_exp).max()
    }

    pub fn is_diagonal(&self) -> bool {
        self.e[0][1].is_zero() && self.e[1][0].is_zero()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> Option<G> + Copy) -> Option<Mat2<G>> {
        Some(Mat2::new(
            self.e[0][0].map(f)?,
            self.e[0][1].map(f)?,
            self.e[1][0].map(f)?,
            self.e[1][1].map(f)?,
        ))
    }
}

impl Mat2<RatFunc> {
    pub fn eval_x(&self, lambda: &Q) -> Option<Mat2<Q>> {
        self.map(|c| c.eval(lambda))
    }

    pub fn from_q(m: &Mat2<Q>) -> Self {
        m.map(|c| Some(RatFunc::constant(c.clone()))).expect("total map")
    }

    /// True when every coefficient is a polynomial in x.
    pub fn is_x_polynomial(&self) -> bool {
        self.e.iter().flatten().all(|p| p.terms().all(|(_, c)| c.is_poly()))
    }
}

impl<F: Field> fmt::Display for Mat2<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.e[0][0], self.e[0][1], self.e[1][0], self.e[1][1])
    }
}

pub type TransitionMat = Mat2<RatFunc>;

/// Parses `e00, e01; e10, e11` with entries built from integers, `x`, `y`,
/// `+ - * / ^` and parentheses. Division and negative powers need a
/// single-term divisor in y.
pub fn parse_transition(s: &str) -> Result<TransitionMat> {
    let rows: Vec<&str> = s.split(';').collect();
    if rows.len() != 2 {
        return Err(Error::Parse("expected two rows separated by ';'".into()));
    }
    let mut cells = Vec::new();
    for row in rows {
        let parts: Vec<&str> = row.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::Parse("expected two entries per row separated by ','".into()));
        }
        for p in parts {
            cells.push(parse_entry(p)?);
        }
    }
    let mut it = cells.into_iter();
    let mut next = || it.next().expect("four cells");
    Ok(Mat2::new(next(), next(), next(), next()))
}

pub fn parse_entry(s: &str) -> Result<YLaurent<RatFunc>> {
    let tokens = tokenize(s)?;
    let mut p = Parser { tokens, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!("trailing input in {s:?}")));
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(num_bigint::BigInt),
    X,
    Y,
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        match ch {
            ' ' | '\t' => i += 1,
            'x' => {
                out.push(Tok::X);
                i += 1;
            }
            'y' => {
                out.push(Tok::Y);
                i += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                out.push(Tok::Op(ch));
                i += 1;
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Tok::Num(text.parse().expect("digits")));
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

type Entry = YLaurent<RatFunc>;

impl Parser {
    fn peek_op(&self, c: char) -> bool {
        self.tokens.get(self.pos) == Some(&Tok::Op(c))
    }

    fn expr(&mut self) -> Result<Entry> {
        let mut acc = self.term()?;
        loop {
            if self.peek_op('+') {
                self.pos += 1;
                acc = acc.add(&self.term()?);
            } else if self.peek_op('-') {
                self.pos += 1;
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Entry> {
        let mut acc = self.unary()?;
        loop {
            if self.peek_op('*') {
                self.pos += 1;
                acc = acc.mul(&self.unary()?);
            } else if self.peek_op('/') {
                self.pos += 1;
                let d = self.unary()?;
                acc = acc.mul(&monomial_inverse(&d)?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Entry> {
        if self.peek_op('-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Entry> {
        let base = self.atom()?;
        if !self.peek_op('^') {
            return Ok(base);
        }
        self.pos += 1;
        let neg = self.peek_op('-');
        if neg {
            self.pos += 1;
        }
        let e = match self.tokens.get(self.pos) {
            Some(Tok::Num(n)) => u32::try_from(n).map_err(|_| Error::Parse("exponent too large".into()))?,
            _ => return Err(Error::Parse("expected integer exponent".into())),
        };
        self.pos += 1;
        let base = if neg { monomial_inverse(&base)? } else { base };
        let mut acc = Entry::one();
        for _ in 0..e {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Entry> {
        let tok = self.tokens.get(self.pos).cloned().ok_or_else(|| Error::Parse("unexpected end of entry".into()))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(Entry::constant(RatFunc::constant(Q::from_integer(n)))),
            Tok::X => Ok(Entry::constant(RatFunc::x())),
            Tok::Y => Ok(Entry::y_pow(1)),
            Tok::Op('(') => {
                let v = self.expr()?;
                if !self.peek_op(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                self.pos += 1;
                Ok(v)
            }
            Tok::Op(c) => Err(Error::Parse(format!("unexpected {c:?}"))),
        }
    }
}

fn monomial_inverse(d: &Entry) -> Result<Entry> {
    match d.as_monomial() {
        Some((e, c)) => Ok(Entry::monomial(c.inv(), -e)),
        None => Err(Error::Parse("can only divide by a single term c(x)*y^k".into())),
    }
}

/// Shorthand for a polynomial in x from integer coefficients, lowest degree first.
pub fn xpoly(cs: &[i64]) -> RatFunc {
    RatFunc::from_poly(QPoly::new(cs.iter().map(|c| crate::exactalg::q(*c)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_worked_matrix() {
        let a = parse_transition("y, x; 0, y^-1").unwrap();
        let want = Mat2::new(Entry::y_pow(1), Entry::constant(RatFunc::x()), Entry::zero(), Entry::y_pow(-1));
        assert_eq!(a, want);
        assert_eq!(a.det(), Entry::one());
        let b = parse_transition("y, (x-3)/2; 0, 1/y").unwrap();
        assert_eq!(b.get(0, 1), &Entry::constant(xpoly(&[-3, 1]).mul(&RatFunc::constant(crate::exactalg::qr(1, 2)))));
        assert!(parse_transition("y, x; 0").is_err());
        assert!(parse_entry("1/(1+y)").is_err());
    }

    #[test]
    fn inverse_of_unimodular() {
        let a = parse_transition("y, x; 0, y^-1").unwrap();
        assert_eq!(a.mul(&a.inverse().unwrap()), Mat2::identity());
        let sing = parse_transition("1, y; 1, y").unwrap();
        assert_eq!(sing.inverse(), Err(Error::NotInvertible));
    }
}
