//! Bundle descriptors, numerical invariants and canonical forms of the
//! gluing polynomial P.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactalg::{binom, BiHomogLaurent, LaurentPoly, TruncPoly, Q};
use crate::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NumericalInvariants {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl NumericalInvariants {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    /// Length of row i: exponents z^(ai+1) .. z^(c-1).
    pub fn row_len(&self, i: usize) -> usize {
        (self.c - 1 - self.a * i as i64).max(0) as usize
    }

    /// Number of free coefficients of P before projectivizing.
    pub fn window_size(&self) -> usize {
        if self.b <= 0 {
            return 0;
        }
        (0..=self.b as usize).map(|i| self.row_len(i)).sum()
    }
}

impl fmt::Display for NumericalInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Canonical representative of P. Row i holds the coefficients of
/// z^(ai+1), ..., z^(c-1) in the y0^i y1^(b-i) part, so its entry j is the
/// z^j coefficient of P_i.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalP {
    inv: NumericalInvariants,
    rows: Vec<Vec<Q>>,
}

impl CanonicalP {
    pub fn zero(inv: NumericalInvariants) -> Self {
        let inv = if inv.b == 0 { NumericalInvariants::new(inv.a, 0, -inv.c.abs()) } else { inv };
        let rows = (0..=inv.b as usize).map(|i| vec![Q::zero(); inv.row_len(i)]).collect();
        Self { inv, rows }
    }

    /// Builds from explicit rows, padding short rows with zeros. Does not rescale.
    pub fn from_rows(inv: NumericalInvariants, rows: Vec<Vec<Q>>) -> Result<Self> {
        if inv.a < 0 || inv.b < 0 {
            return Err(Error::InvalidDescriptor(format!("negative invariants {inv}")));
        }
        if rows.len() != inv.b as usize + 1 {
            return Err(Error::DegreeMismatch { expected: inv.b as usize, found: rows.len().saturating_sub(1) });
        }
        let mut p = Self::zero(inv);
        for (i, row) in rows.into_iter().enumerate() {
            let len = p.rows[i].len();
            if row.len() > len && row[len..].iter().any(|c| !c.is_zero()) {
                return Err(Error::InvalidDescriptor(format!("row {i} exceeds its window of {len} coefficients")));
            }
            for (j, c) in row.into_iter().take(len).enumerate() {
                p.rows[i][j] = c;
            }
        }
        Ok(p)
    }

    pub fn inv(&self) -> NumericalInvariants {
        self.inv
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    /// P_i as an element of Q[z]_{<= c-2-ai}; None for a forced-zero row.
    pub fn row_trunc(&self, i: usize) -> Option<TruncPoly> {
        let row = &self.rows[i];
        if row.is_empty() {
            None
        } else {
            Some(TruncPoly::new(row.len() - 1, row.clone()))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(Zero::is_zero)
    }

    /// Re-expands to P(y0, y1, z) = sum y0^i y1^(b-i) P_i(z) z^(ai+1).
    pub fn embed(&self) -> BiHomogLaurent {
        let a = self.inv.a;
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let base = a * i as i64 + 1;
                LaurentPoly::from_terms(row.iter().enumerate().map(|(j, c)| (base + j as i64, c.clone())))
            })
            .collect();
        BiHomogLaurent::new(rows)
    }

    /// Divides by the first nonzero coefficient in row-major order.
    pub fn rescaled(mut self) -> Self {
        let lead = self.rows.iter().flatten().find(|c| !c.is_zero()).cloned();
        if let Some(lead) = lead {
            if !lead.is_one() {
                let inv = lead.recip();
                for c in self.rows.iter_mut().flatten() {
                    *c *= &inv;
                }
            }
        }
        self
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self.rows.iter().map(|r| json::q_vec_to_json(r)).collect();
        json!({"a": self.inv.a, "b": self.inv.b, "c": self.inv.c, "rows": rows})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = json::as_object(v)?;
        let inv = NumericalInvariants::new(
            json::i64_from_json(json::field(obj, "a")?)?,
            json::i64_from_json(json::field(obj, "b")?)?,
            json::i64_from_json(json::field(obj, "c")?)?,
        );
        let rows = json::field(obj, "rows")?
            .as_array()
            .ok_or_else(|| Error::Parse("rows must be an array".into()))?
            .iter()
            .map(json::q_vec_from_json)
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(inv, rows)
    }
}

impl fmt::Display for CanonicalP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                if r.is_empty() {
                    "-".to_string()
                } else {
                    TruncPoly::new(r.len() - 1, r.clone()).to_string()
                }
            })
            .collect();
        write!(f, "{} [{}]", self.inv, parts.join("; "))
    }
}

/// The reduction of Lemma-style equivalence: keep the window z^(ai+1)..z^(c-1)
/// of each row, then scale so the first nonzero coefficient is 1.
pub fn normalize(a: i64, b: i64, c: i64, raw: &BiHomogLaurent) -> Result<CanonicalP> {
    if a < 0 || b < 0 {
        return Err(Error::RangeViolation(format!("a = {a}, b = {b} must be nonnegative")));
    }
    let inv = NumericalInvariants::new(a, b, c);
    if b == 0 {
        return Ok(CanonicalP::zero(inv));
    }
    if raw.b() != b as usize {
        return Err(Error::DegreeMismatch { expected: b as usize, found: raw.b() });
    }
    let mut p = CanonicalP::zero(inv);
    for (i, row) in p.rows.iter_mut().enumerate() {
        let base = a * i as i64 + 1;
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = raw.row(i).coeff(base + j as i64);
        }
    }
    Ok(p.rescaled())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BundleDesc {
    DecFa { a: i64, b: i64, c: i64 },
    DecP2 { b: i64 },
    Umemura { a: i64, b: i64, c: i64 },
    Schwarz { b: i64 },
    V1 { b: i64 },
    HatSchwarz { b: i64 },
    Raw(CanonicalP),
}

impl BundleDesc {
    pub fn family(&self) -> &'static str {
        match self {
            BundleDesc::DecFa { .. } => "DecFa",
            BundleDesc::DecP2 { .. } => "DecP2",
            BundleDesc::Umemura { .. } => "Umemura",
            BundleDesc::Schwarz { .. } => "Schwarz",
            BundleDesc::V1 { .. } => "V1",
            BundleDesc::HatSchwarz { .. } => "HatSchwarz",
            BundleDesc::Raw(_) => "Raw",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidDescriptor(format!("{self}: {why}")));
        match *self {
            BundleDesc::DecFa { a, b, c } => {
                if a < 0 || b < 0 {
                    return bad("a and b must be nonnegative");
                }
                if b == 0 && c > 0 {
                    return bad("c must be <= 0 when b = 0");
                }
            }
            BundleDesc::DecP2 { b } if b < 0 => return bad("b must be nonnegative"),
            BundleDesc::Umemura { a, b, c } => {
                if umemura_k(a, b, c).is_none() {
                    return Err(Error::InvalidUmemura(a, b, c));
                }
            }
            BundleDesc::Schwarz { b } | BundleDesc::HatSchwarz { b } if b < 1 => return bad("b must be >= 1"),
            BundleDesc::V1 { b } if b < 2 => return bad("b must be >= 2"),
            BundleDesc::Raw(ref p) => {
                let inv = p.inv();
                if inv.b == 0 && inv.c > 0 {
                    return bad("c must be <= 0 when b = 0");
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut v = match self {
            BundleDesc::DecFa { a, b, c } | BundleDesc::Umemura { a, b, c } => json!({"a": a, "b": b, "c": c}),
            BundleDesc::DecP2 { b } | BundleDesc::Schwarz { b } | BundleDesc::V1 { b } | BundleDesc::HatSchwarz { b } => {
                json!({"b": b})
            }
            BundleDesc::Raw(p) => p.to_json(),
        };
        v["family"] = Value::String(self.family().into());
        v
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = json::as_object(v)?;
        let family = json::field(obj, "family")?
            .as_str()
            .ok_or_else(|| Error::Parse("family must be a string".into()))?;
        let get = |k: &str| json::field(obj, k).and_then(json::i64_from_json);
        let desc = match family {
            "DecFa" => BundleDesc::DecFa { a: get("a")?, b: get("b")?, c: get("c")? },
            "Umemura" => BundleDesc::Umemura { a: get("a")?, b: get("b")?, c: get("c")? },
            "DecP2" => BundleDesc::DecP2 { b: get("b")? },
            "Schwarz" => BundleDesc::Schwarz { b: get("b")? },
            "V1" => BundleDesc::V1 { b: get("b")? },
            "HatSchwarz" => BundleDesc::HatSchwarz { b: get("b")? },
            "Raw" => BundleDesc::Raw(CanonicalP::from_json(v)?),
            other => return Err(Error::Parse(format!("unknown family {other:?}"))),
        };
        desc.validate()?;
        Ok(desc)
    }
}

impl fmt::Display for BundleDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BundleDesc::DecFa { a, b, c } => write!(f, "DecFa({a},{b},{c})"),
            BundleDesc::Umemura { a, b, c } => write!(f, "Umemura({a},{b},{c})"),
            BundleDesc::DecP2 { b } => write!(f, "DecP2({b})"),
            BundleDesc::Schwarz { b } => write!(f, "Schwarz({b})"),
            BundleDesc::V1 { b } => write!(f, "V1({b})"),
            BundleDesc::HatSchwarz { b } => write!(f, "HatSchwarz({b})"),
            BundleDesc::Raw(p) => write!(f, "Raw{p}"),
        }
    }
}

/// Parses the compact forms printed by `Display`, e.g. `DecFa(2,1,1)` or `Schwarz(3)`.
impl FromStr for BundleDesc {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("cannot parse descriptor {s:?}"));
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let args = rest.strip_suffix(')').ok_or_else(bad)?;
        let nums: Vec<i64> = args
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        let desc = match (name.trim(), nums.as_slice()) {
            ("DecFa", &[a, b, c]) => BundleDesc::DecFa { a, b, c },
            ("Umemura", &[a, b, c]) => BundleDesc::Umemura { a, b, c },
            ("DecP2", &[b]) => BundleDesc::DecP2 { b },
            ("Schwarz", &[b]) => BundleDesc::Schwarz { b },
            ("V1", &[b]) => BundleDesc::V1 { b },
            ("HatSchwarz", &[b]) => BundleDesc::HatSchwarz { b },
            _ => return Err(bad()),
        };
        desc.validate()?;
        Ok(desc)
    }
}

impl Serialize for BundleDesc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BundleDesc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        BundleDesc::from_json(&v).map_err(serde::de::Error::custom)
    }
}

/// k with c = ak + 2 and 0 <= k <= b, if (a, b, c) is a valid Umemura triple.
pub fn umemura_k(a: i64, b: i64, c: i64) -> Option<i64> {
    if a < 1 || b < 1 || c < 2 || (c - 2) % a != 0 {
        return None;
    }
    let k = (c - 2) / a;
    (k <= b).then_some(k)
}

pub fn invariants_of(desc: &BundleDesc) -> Result<NumericalInvariants> {
    match *desc {
        BundleDesc::DecFa { a, b, c } | BundleDesc::Umemura { a, b, c } => Ok(NumericalInvariants::new(a, b, c)),
        BundleDesc::HatSchwarz { b } => Ok(NumericalInvariants::new(0, b, b + 2)),
        BundleDesc::Raw(ref p) => Ok(p.inv()),
        BundleDesc::DecP2 { .. } | BundleDesc::Schwarz { .. } | BundleDesc::V1 { .. } => {
            Err(Error::NotOverHirzebruch(desc.to_string()))
        }
    }
}

pub fn canonical_p_of(desc: &BundleDesc) -> Result<CanonicalP> {
    desc.validate()?;
    match *desc {
        BundleDesc::DecFa { a, b, c } => Ok(CanonicalP::zero(NumericalInvariants::new(a, b, c))),
        BundleDesc::Umemura { a, b, c } => {
            let k = umemura_k(a, b, c).ok_or(Error::InvalidUmemura(a, b, c))? as usize;
            let mut p = CanonicalP::zero(NumericalInvariants::new(a, b, c));
            p.rows[k][0] = Q::one();
            Ok(p)
        }
        BundleDesc::HatSchwarz { b } => {
            let mut p = CanonicalP::zero(NumericalInvariants::new(0, b, b + 2));
            for i in 0..=b as usize {
                p.rows[i][i] = Q::one();
            }
            Ok(p)
        }
        BundleDesc::Raw(ref p) => Ok(p.clone()),
        BundleDesc::DecP2 { .. } | BundleDesc::Schwarz { .. } | BundleDesc::V1 { .. } => {
            Err(Error::UnsupportedFamily(desc.to_string()))
        }
    }
}

pub fn is_decomposable(p: &CanonicalP) -> bool {
    p.is_zero()
}

/// The named family over F_a whose canonical form is `p`, if any.
pub fn identify(p: &CanonicalP) -> Option<BundleDesc> {
    let NumericalInvariants { a, b, c } = p.inv();
    if p.is_zero() {
        let c = if b == 0 { -c.abs() } else { c };
        return Some(BundleDesc::DecFa { a, b, c });
    }
    let p = p.clone().rescaled();
    let candidates = [BundleDesc::Umemura { a, b, c }, BundleDesc::HatSchwarz { b }];
    candidates.into_iter().find(|d| {
        d.validate().is_ok() && invariants_of(d).ok() == Some(p.inv()) && canonical_p_of(d).ok().as_ref() == Some(&p)
    })
}

/// Both sides of C(r+1, p-k) = sum_{i=k}^{p} C(i, i-k) C(r-i, p-i).
pub fn binomial_identity(r: i64, p: i64, k: i64) -> Result<(BigInt, BigInt)> {
    if !(0 <= k && k <= p && p <= r) {
        return Err(Error::RangeViolation(format!("need 0 <= k <= p <= r, got r={r}, p={p}, k={k}")));
    }
    let lhs = binom(r + 1, p - k);
    let rhs = (k..=p).map(|i| binom(i, i - k) * binom(r - i, p - i)).sum();
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::q;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|(e, c)| (*e, q(*c))))
    }

    fn rows(p: &CanonicalP) -> Vec<Vec<i64>> {
        p.rows().iter().map(|r| r.iter().map(|c| c.to_integer().try_into().unwrap()).collect()).collect()
    }

    #[test]
    fn normalize_examples() {
        let raw = BiHomogLaurent::new(vec![lp(&[(1, 1)]), LaurentPoly::zero()]);
        assert_eq!(rows(&normalize(1, 1, 3, &raw).unwrap()), vec![vec![1, 0], vec![0]]);

        let raw = BiHomogLaurent::new(vec![lp(&[(5, 1), (-3, 7)]), lp(&[(3, 4)])]);
        let p = normalize(2, 1, 2, &raw).unwrap();
        assert!(is_decomposable(&p));
        assert_eq!(rows(&p), vec![vec![0], vec![]]);

        let raw = BiHomogLaurent::new(vec![lp(&[(1, 2), (2, 2)]), LaurentPoly::zero()]);
        assert_eq!(rows(&normalize(0, 1, 3, &raw).unwrap()), vec![vec![1, 1], vec![0, 0]]);

        let raw = BiHomogLaurent::new(vec![LaurentPoly::z()]);
        assert_eq!(normalize(0, 2, 3, &raw), Err(Error::DegreeMismatch { expected: 2, found: 0 }));
    }

    #[test]
    fn b_zero_keeps_nonpositive_c() {
        let p = normalize(1, 0, 3, &BiHomogLaurent::zero(5)).unwrap();
        assert_eq!(p.inv(), NumericalInvariants::new(1, 0, -3));
        assert!(p.is_zero());
    }

    #[test]
    fn family_canonical_forms() {
        assert_eq!(rows(&canonical_p_of(&BundleDesc::DecFa { a: 3, b: 2, c: 5 }).unwrap()), vec![vec![0; 4], vec![0], vec![]]);
        assert_eq!(rows(&canonical_p_of(&BundleDesc::Umemura { a: 2, b: 2, c: 4 }).unwrap()), vec![vec![0, 0, 0], vec![1], vec![]]);
        assert_eq!(
            rows(&canonical_p_of(&BundleDesc::HatSchwarz { b: 2 }).unwrap()),
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]
        );
        assert!(matches!(canonical_p_of(&BundleDesc::Schwarz { b: 2 }), Err(Error::UnsupportedFamily(_))));
        assert!(!is_decomposable(&canonical_p_of(&BundleDesc::Umemura { a: 1, b: 1, c: 3 }).unwrap()));
    }

    #[test]
    fn invariants_examples() {
        assert_eq!(invariants_of(&BundleDesc::HatSchwarz { b: 3 }).unwrap(), NumericalInvariants::new(0, 3, 5));
        assert_eq!(invariants_of(&BundleDesc::Umemura { a: 2, b: 3, c: 4 }).unwrap(), NumericalInvariants::new(2, 3, 4));
        assert!(matches!(invariants_of(&BundleDesc::V1 { b: 2 }), Err(Error::NotOverHirzebruch(_))));
    }

    #[test]
    fn binomial_examples() {
        let pair = |r, p, k| {
            let (l, r) = binomial_identity(r, p, k).unwrap();
            (i64::try_from(l).unwrap(), i64::try_from(r).unwrap())
        };
        assert_eq!(pair(0, 0, 0), (1, 1));
        assert_eq!(pair(2, 1, 0), (3, 3));
        assert_eq!(pair(5, 4, 2), (15, 15));
        assert!(binomial_identity(2, 3, 0).is_err());
    }

    #[test]
    fn descriptor_text_and_json() {
        for s in ["DecFa(2,1,1)", "Umemura(2,2,4)", "Schwarz(3)", "V1(2)", "HatSchwarz(1)", "DecP2(0)"] {
            let d: BundleDesc = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
            assert_eq!(BundleDesc::from_json(&d.to_json()).unwrap(), d);
        }
        assert!("Umemura(2,1,5)".parse::<BundleDesc>().is_err());
        assert!("DecFa(1,0,2)".parse::<BundleDesc>().is_err());
        let raw = BundleDesc::Raw(canonical_p_of(&BundleDesc::HatSchwarz { b: 2 }).unwrap());
        assert_eq!(BundleDesc::from_json(&raw.to_json()).unwrap(), raw);
    }
}
