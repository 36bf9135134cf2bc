//! Exact polynomial kernels over the rationals: Laurent polynomials in z,
//! truncated polynomial rings, forms in (y0, y1) with Laurent coefficients,
//! and a small sparse multivariate Laurent polynomial type.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Binomial coefficient as a big integer; zero outside 0 <= k <= n.
pub fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// Parse "a", "-a" or "a/b".
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

// Renders sum c_e * var^e for a sorted list of (e, c).
fn fmt_univariate<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (i64, &'a Q)>,
    var: &str,
) -> fmt::Result {
    let mut first = true;
    for (e, c) in terms {
        let neg = c.is_negative();
        let abs = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { "-" } else { "+" })?;
        }
        first = false;
        let mono = match e {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{e}"),
        };
        if mono.is_empty() {
            write!(f, "{}", fmt_q(&abs))?;
        } else if abs.is_one() {
            write!(f, "{mono}")?;
        } else {
            write!(f, "{}*{mono}", fmt_q(&abs))?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

macro_rules! forward_binops {
    ($t:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, rhs: &'a $t) -> $t { (&self).$m(rhs) }
        }
    )*};
}

/// Element of Q[z, 1/z], stored sparsely without zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Q>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(c, 0)
    }

    /// c * z^e
    pub fn monomial(c: Q, e: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(e, c);
        }
        Self { coeffs }
    }

    pub fn z() -> Self {
        Self::monomial(Q::one(), 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Q)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Coefficients from z^0 upward.
    pub fn from_dense(coeffs: &[Q]) -> Self {
        Self::from_terms(coeffs.iter().cloned().enumerate().map(|(i, c)| (i as i64, c)))
    }

    pub fn add_term(&mut self, e: i64, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: i64) -> Q {
        self.coeffs.get(&e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Q)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    /// Multiply by z^k.
    pub fn shift(&self, k: i64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(e, v)| (e + k, v.clone())).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Keep only the exponents in lo..=hi.
    pub fn window(&self, lo: i64, hi: i64) -> Self {
        if lo > hi {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.range(lo..=hi).map(|(e, c)| (*e, c.clone())).collect() }
    }

    pub fn eval(&self, z: &Q) -> Option<Q> {
        if z.is_zero() && self.min_exp().is_some_and(|e| e < 0) {
            return None;
        }
        let mut acc = Q::zero();
        for (e, c) in &self.coeffs {
            let p = if *e >= 0 { pow_q(z, *e as u64) } else { pow_q(&z.recip(), (-e) as u64) };
            acc += c * p;
        }
        Some(acc)
    }
}

fn pow_q(x: &Q, n: u64) -> Q {
    let mut acc = Q::one();
    for _ in 0..n {
        acc *= x;
    }
    acc
}

/// f(z) -> f(1/z).
pub fn laurent_subst_inv(f: &LaurentPoly) -> LaurentPoly {
    LaurentPoly { coeffs: f.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect() }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

forward_binops!(LaurentPoly, Add add, Sub sub, Mul mul);

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_univariate(f, self.terms(), "z")
    }
}

/// Element of Q[z]/(z^{r+1}); `coeffs` always has length r + 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncPoly {
    coeffs: Vec<Q>,
}

impl TruncPoly {
    /// Pads with zeros or drops exponents above `bound`.
    pub fn new(bound: usize, mut coeffs: Vec<Q>) -> Self {
        coeffs.resize(bound + 1, Q::zero());
        Self { coeffs }
    }

    pub fn zero(bound: usize) -> Self {
        Self::new(bound, Vec::new())
    }

    pub fn one(bound: usize) -> Self {
        Self::new(bound, vec![Q::one()])
    }

    pub fn monomial(bound: usize, e: usize, c: Q) -> Self {
        let mut p = Self::zero(bound);
        if e <= bound {
            p.coeffs[e] = c;
        }
        p
    }

    pub fn from_ints(bound: usize, coeffs: &[i64]) -> Self {
        Self::new(bound, coeffs.iter().map(|c| q(*c)).collect())
    }

    pub fn bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, e: usize) -> Q {
        self.coeffs.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self { coeffs: self.coeffs.iter().map(|v| v * c).collect() }
    }

    pub fn to_laurent(&self) -> LaurentPoly {
        LaurentPoly::from_dense(&self.coeffs)
    }

    /// Reads exponents 0..=bound of a Laurent polynomial; other exponents are dropped.
    pub fn from_laurent(bound: usize, f: &LaurentPoly) -> Self {
        let mut p = Self::zero(bound);
        for (e, c) in f.terms() {
            if e >= 0 && (e as usize) <= bound {
                p.coeffs[e as usize] = c.clone();
            }
        }
        p
    }

    /// Same polynomial read in Q[z]/(z^{bound+1}).
    pub fn with_bound(&self, bound: usize) -> Self {
        Self::new(bound, self.coeffs.clone())
    }

    /// f(g) for g with zero constant term.
    pub fn compose(&self, g: &TruncPoly) -> Result<TruncPoly> {
        let r = self.bound();
        if !g.coeff(0).is_zero() {
            return Err(Error::RangeViolation("inner series must have zero constant term".into()));
        }
        let g = g.with_bound(r);
        let mut acc = TruncPoly::zero(r);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &g) + &TruncPoly::monomial(r, 0, c.clone());
        }
        Ok(acc)
    }

    fn check_bounds(&self, other: &TruncPoly) {
        assert_eq!(self.bound(), other.bound(), "truncation bounds differ");
    }
}

impl<'a> Add<&'a TruncPoly> for &'a TruncPoly {
    type Output = TruncPoly;
    fn add(self, rhs: &TruncPoly) -> TruncPoly {
        self.check_bounds(rhs);
        TruncPoly { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a TruncPoly> for &'a TruncPoly {
    type Output = TruncPoly;
    fn sub(self, rhs: &TruncPoly) -> TruncPoly {
        self.check_bounds(rhs);
        TruncPoly { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl<'a> Mul<&'a TruncPoly> for &'a TruncPoly {
    type Output = TruncPoly;
    fn mul(self, rhs: &TruncPoly) -> TruncPoly {
        self.check_bounds(rhs);
        let r = self.bound();
        let mut out = vec![Q::zero(); r + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(r + 1 - i) {
                out[i + j] += a * b;
            }
        }
        TruncPoly { coeffs: out }
    }
}

impl Neg for &TruncPoly {
    type Output = TruncPoly;
    fn neg(self) -> TruncPoly {
        TruncPoly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

forward_binops!(TruncPoly, Add add, Sub sub, Mul mul);

impl fmt::Display for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero());
        fmt_univariate(f, terms.map(|(e, c)| (e as i64, c)), "z")
    }
}

/// Inverse in Q[z]/(z^{r+1}).
pub fn trunc_inverse(f: &TruncPoly) -> Result<TruncPoly> {
    let f0 = f.coeff(0);
    if f0.is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let r = f.bound();
    let inv0 = f0.recip();
    let mut g: Vec<Q> = Vec::with_capacity(r + 1);
    g.push(inv0.clone());
    for n in 1..=r {
        let mut s = Q::zero();
        for k in 1..=n {
            s += f.coeff(k) * &g[n - k];
        }
        g.push(-s * &inv0);
    }
    Ok(TruncPoly { coeffs: g })
}

/// Homogeneous form of degree b in (y0, y1) with Laurent coefficients in z.
/// Row i is the coefficient of y0^i y1^(b-i).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiHomogLaurent {
    rows: Vec<LaurentPoly>,
}

/// Linear substitutions of (y0, y1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum YSubst {
    /// (y0, y1) -> (y0, y1 + y0 R(z))
    Shear(LaurentPoly),
    /// (y0, y1) -> (a y0 + b y1, c y0 + d y1)
    Gl2(Q, Q, Q, Q),
}

impl BiHomogLaurent {
    pub fn new(rows: Vec<LaurentPoly>) -> Self {
        assert!(!rows.is_empty(), "a form needs at least one row");
        Self { rows }
    }

    pub fn zero(b: usize) -> Self {
        Self { rows: vec![LaurentPoly::zero(); b + 1] }
    }

    /// c(z) * y0^i y1^(b-i)
    pub fn monomial(b: usize, i: usize, c: LaurentPoly) -> Self {
        let mut p = Self::zero(b);
        p.rows[i] = c;
        p
    }

    /// l0 * y0 + l1 * y1
    pub fn linear(l0: LaurentPoly, l1: LaurentPoly) -> Self {
        Self { rows: vec![l1, l0] }
    }

    pub fn b(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn rows(&self) -> &[LaurentPoly] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &LaurentPoly {
        &self.rows[i]
    }

    pub fn into_rows(self) -> Vec<LaurentPoly> {
        self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(LaurentPoly::is_zero)
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self { rows: self.rows.iter().map(|r| r.scale(c)).collect() }
    }

    pub fn mul_laurent(&self, f: &LaurentPoly) -> Self {
        Self { rows: self.rows.iter().map(|r| r * f).collect() }
    }

    /// Product of forms; degrees add.
    pub fn mul_form(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.b() + other.b());
        for (i, f) in self.rows.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            for (j, g) in other.rows.iter().enumerate() {
                if !g.is_zero() {
                    out.rows[i + j] = &out.rows[i + j] + &(f * g);
                }
            }
        }
        out
    }

    /// Value at y0 = 1, y1 = t for a constant t.
    pub fn dehomogenize_at(&self, y1: &Q) -> LaurentPoly {
        let b = self.b();
        let mut acc = LaurentPoly::zero();
        for (i, f) in self.rows.iter().enumerate() {
            acc = &acc + &f.scale(&pow_q(y1, (b - i) as u64));
        }
        acc
    }

    /// P(L0, L1) for linear forms L0, L1.
    pub fn subst_linear(&self, l0: &Self, l1: &Self) -> Self {
        assert!(l0.b() == 1 && l1.b() == 1, "substitution needs linear forms");
        let b = self.b();
        let mut p0 = vec![Self::monomial(0, 0, LaurentPoly::one())];
        let mut p1 = vec![Self::monomial(0, 0, LaurentPoly::one())];
        for k in 0..b {
            p0.push(p0[k].mul_form(l0));
            p1.push(p1[k].mul_form(l1));
        }
        let mut out = Self::zero(b);
        for (i, f) in self.rows.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let term = p0[i].mul_form(&p1[b - i]).mul_laurent(f);
            out = &out + &term;
        }
        out
    }
}

impl<'a> Add<&'a BiHomogLaurent> for &'a BiHomogLaurent {
    type Output = BiHomogLaurent;
    fn add(self, rhs: &BiHomogLaurent) -> BiHomogLaurent {
        assert_eq!(self.b(), rhs.b(), "forms of different degree");
        BiHomogLaurent { rows: self.rows.iter().zip(&rhs.rows).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a BiHomogLaurent> for &'a BiHomogLaurent {
    type Output = BiHomogLaurent;
    fn sub(self, rhs: &BiHomogLaurent) -> BiHomogLaurent {
        assert_eq!(self.b(), rhs.b(), "forms of different degree");
        BiHomogLaurent { rows: self.rows.iter().zip(&rhs.rows).map(|(a, b)| a - b).collect() }
    }
}

forward_binops!(BiHomogLaurent, Add add, Sub sub);

impl fmt::Display for BiHomogLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.b();
        let mut first = true;
        for (i, r) in self.rows.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut mono = Vec::new();
            if i > 0 {
                mono.push(if i == 1 { "y0".to_string() } else { format!("y0^{i}") });
            }
            if b - i > 0 {
                mono.push(if b - i == 1 { "y1".to_string() } else { format!("y1^{}", b - i) });
            }
            write!(f, "({r})")?;
            if !mono.is_empty() {
                write!(f, "*{}", mono.join("*"))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Expands P under a linear change of (y0, y1).
pub fn subst_y_affine(p: &BiHomogLaurent, kind: &YSubst) -> Result<BiHomogLaurent> {
    let (l0, l1) = match kind {
        YSubst::Shear(r) => (
            BiHomogLaurent::linear(LaurentPoly::one(), LaurentPoly::zero()),
            BiHomogLaurent::linear(r.clone(), LaurentPoly::one()),
        ),
        YSubst::Gl2(a, b, c, d) => {
            if (a * d - b * c).is_zero() {
                return Err(Error::SingularMatrix);
            }
            let k = |x: &Q| LaurentPoly::constant(x.clone());
            (BiHomogLaurent::linear(k(a), k(b)), BiHomogLaurent::linear(k(c), k(d)))
        }
    };
    Ok(p.subst_linear(&l0, &l1))
}

/// Sparse Laurent polynomial in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, Q>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn monomial(nvars: usize, exps: Vec<i64>, c: Q) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        p.add_term(exps, c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, Q::one())
    }

    /// var(i)^k for any integer k.
    pub fn var_pow(nvars: usize, i: usize, k: i64) -> Self {
        let mut e = vec![0; nvars];
        e[i] = k;
        Self::monomial(nvars, e, Q::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, exps: Vec<i64>, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[i64]) -> Q {
        self.terms.get(exps).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Q)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes images[i] for variable i. Negative exponents need a monomial image.
    pub fn subst(&self, images: &[MPoly]) -> Option<MPoly> {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map_or(0, |p| p.nvars);
        let mut out = MPoly::zero(target);
        for (exps, c) in &self.terms {
            let mut term = MPoly::constant(target, c.clone());
            for (i, e) in exps.iter().enumerate() {
                let factor = if *e >= 0 {
                    images[i].pow(*e as u32)
                } else {
                    images[i].monomial_inverse()?.pow((-e) as u32)
                };
                term = &term * &factor;
            }
            out = &out + &term;
        }
        Some(out)
    }

    fn monomial_inverse(&self) -> Option<MPoly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        Some(MPoly::monomial(self.nvars, e.iter().map(|x| -x).collect(), c.recip()))
    }

    pub fn fmt_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        // highest total degree first reads more naturally
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|a, b| {
            let da: i64 = a.0.iter().sum();
            let db: i64 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (k, (e, c)) in ts.into_iter().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .zip(names)
                .filter(|(x, _)| **x != 0)
                .map(|(x, n)| if *x == 1 { n.to_string() } else { format!("{n}^{x}") })
                .collect();
            let abs = c.abs();
            if mono.is_empty() {
                out.push_str(&fmt_q(&abs));
            } else if abs.is_one() {
                out.push_str(&mono.join("*"));
            } else {
                out.push_str(&format!("{}*{}", fmt_q(&abs), mono.join("*")));
            }
        }
        out
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-Q::one())
    }
}

forward_binops!(MPoly, Add add, Sub sub, Mul mul);

/// 2x2 matrix of multivariate polynomials.
pub type MMat = [[MPoly; 2]; 2];

pub fn mmat_mul(a: &MMat, b: &MMat) -> MMat {
    let e = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn mmat_det(a: &MMat) -> MPoly {
    &(&a[0][0] * &a[1][1]) - &(&a[0][1] * &a[1][0])
}

pub fn mmat_scale(a: &MMat, f: &MPoly) -> MMat {
    [[&a[0][0] * f, &a[0][1] * f], [&a[1][0] * f, &a[1][1] * f]]
}
