//! Q[x], Q(x), and the small field abstraction used by the splitting code.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactalg::{fmt_q, Q};

/// Dense polynomial in x, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<Q>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::new(vec![Q::zero(), Q::one()])
    }

    /// x - r
    pub fn linear_root(r: &Q) -> Self {
        Self::new(vec![-r.clone(), Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with -1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lead(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * Q::from_integer(BigInt::from(i))).collect())
    }

    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        if rem.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let inv_lead = d.lead().recip();
        let mut quot = vec![Q::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &inv_lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (QPoly::new(quot), QPoly::new(rem))
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scalar multiple with coprime integer coefficients and positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let l = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().is_some_and(|c| c.is_negative()) { -BigInt::one() } else { BigInt::one() };
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }

    /// Distinct rational roots, ordered by numerator then denominator.
    pub fn rational_roots(&self) -> Vec<Q> {
        let mut roots = Vec::new();
        if self.degree() < 1 {
            return roots;
        }
        let ints = self.primitive_integer();
        let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
        if low > 0 {
            roots.push(Q::zero());
        }
        let trimmed = &ints[low..];
        if trimmed.len() > 1 {
            let p_divs = divisors(&trimmed[0]);
            let q_divs = divisors(trimmed.last().unwrap());
            for p in &p_divs {
                for qd in &q_divs {
                    for sign in [1, -1] {
                        let cand = Q::new(p * BigInt::from(sign), qd.clone());
                        if !roots.contains(&cand) && self.eval(&cand).is_zero() {
                            roots.push(cand);
                        }
                    }
                }
            }
        }
        roots.sort_by(root_order);
        roots
    }

    /// Removes every rational root with multiplicity.
    pub fn strip_rational_roots(&self) -> QPoly {
        let mut f = self.clone();
        for r in self.rational_roots() {
            let lin = QPoly::linear_root(&r);
            loop {
                let (qt, rem) = f.div_rem(&lin);
                if !rem.is_zero() {
                    break;
                }
                f = qt;
            }
        }
        f
    }

    pub fn squarefree(&self) -> QPoly {
        if self.degree() < 1 {
            return self.monic();
        }
        self.div_rem(&self.gcd(&self.derivative())).0.monic()
    }

    pub fn pow(&self, n: u32) -> QPoly {
        let mut acc = QPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

/// Numerator first, then denominator.
pub fn root_order(a: &Q, b: &Q) -> Ordering {
    a.numer().cmp(b.numer()).then_with(|| a.denom().cmp(b.denom()))
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl<'a> Add<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn add(self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn sub(self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn mul(self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let abs = c.abs();
            let mono = match e {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{e}"),
            };
            match (mono.is_empty(), abs.is_one()) {
                (true, _) => write!(f, "{}", fmt_q(&abs))?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{}*{mono}", fmt_q(&abs))?,
            }
        }
        Ok(())
    }
}

/// Reduced fraction num/den with monic den.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: QPoly,
    den: QPoly,
}

impl RatFunc {
    pub fn new(num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::from_poly(QPoly::zero());
        }
        let g = num.gcd(&den);
        let (mut n, _) = num.div_rem(&g);
        let (mut d, _) = den.div_rem(&g);
        let l = d.lead();
        if !l.is_one() {
            let inv = l.recip();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Self { num: n, den: d }
    }

    pub fn from_poly(p: QPoly) -> Self {
        Self { num: p, den: QPoly::one() }
    }

    pub fn constant(c: Q) -> Self {
        Self::from_poly(QPoly::constant(c))
    }

    pub fn x() -> Self {
        Self::from_poly(QPoly::x())
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_poly(&self) -> bool {
        self.den.degree() == 0
    }

    /// None at a pole.
    pub fn eval(&self, x: &Q) -> Option<Q> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }
}

impl super::field::Field for RatFunc {
    fn zero() -> Self {
        Self::from_poly(QPoly::zero())
    }
    fn one() -> Self {
        Self::from_poly(QPoly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(&self.num + &o.num, self.den.clone());
        }
        Self::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_poly() && o.is_poly() {
            return Self::from_poly(&self.num * &o.num);
        }
        Self::new(&self.num * &o.num, &self.den * &o.den)
    }
    fn neg(&self) -> Self {
        Self { num: -&self.num, den: self.den.clone() }
    }
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Self::new(self.den.clone(), self.num.clone())
    }
    fn from_q(c: Q) -> Self {
        Self::constant(c)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &QPoly| {
            let s = p.to_string();
            if p.coeffs.iter().filter(|c| !c.is_zero()).count() > 1 || s.contains('/') {
                format!("({s})")
            } else {
                s
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::field::Field;
    use crate::exactalg::{q, qr};

    fn p(cs: &[i64]) -> QPoly {
        QPoly::new(cs.iter().map(|c| q(*c)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let f = &p(&[-1, 0, 1]) * &p(&[2, 1]);
        let (qt, r) = f.div_rem(&p(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(qt, &p(&[-1, 1]) * &p(&[2, 1]));
        assert_eq!(f.gcd(&p(&[3, 3])), p(&[1, 1]));
    }

    #[test]
    fn roots_in_fixed_order() {
        // (x + 1)(2x - 1)(x - 1) x^2
        let f = &(&(&p(&[1, 1]) * &p(&[-1, 2])) * &p(&[-1, 1])) * &p(&[0, 0, 1]);
        assert_eq!(f.rational_roots(), vec![q(-1), q(0), q(1), qr(1, 2)]);
        assert_eq!(f.strip_rational_roots().degree(), 0);
        let irr = &p(&[1, 0, 1]) * &p(&[-3, 1]);
        assert_eq!(irr.strip_rational_roots().monic(), p(&[1, 0, 1]));
    }

    #[test]
    fn ratfunc_normal_form() {
        let r = RatFunc::new(p(&[0, 2]), p(&[0, 0, 4]));
        assert_eq!(r.num(), &QPoly::constant(qr(1, 2)));
        assert_eq!(r.den(), &p(&[0, 1]));
        assert_eq!(r.mul(&r.inv()), RatFunc::one());
        assert_eq!(r.to_string(), "(1/2)/x");
        assert_eq!(r.eval(&q(0)), None);
    }
}
