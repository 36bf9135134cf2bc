//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_traits::{One, Zero};
use p1bundles::exactalg::Q;
use p1bundles::transitions::{Mat2, YLaurent};

/// Rank of a dense matrix over Q by Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, piv);
        let inv = rows[r][col].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                let pivot = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(pivot) {
                    *x -= &f * p;
                }
            }
        }
        r += 1;
    }
    r
}

const PRIMES: [u64; 2] = [2_305_843_009_213_693_951, 4_611_686_018_427_387_847];

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u128;
    let mut b128 = b as u128 % p as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b128 % p as u128;
        }
        b128 = b128 * b128 % p as u128;
        e >>= 1;
    }
    b = acc as u64;
    b
}

fn reduce(c: &Q, p: u64) -> Option<u64> {
    use num_bigint::BigInt;
    let pm = BigInt::from(p);
    let to_u = |n: &BigInt| -> u64 { ((n % &pm + &pm) % &pm).try_into().unwrap() };
    let den = to_u(c.denom());
    (den != 0).then(|| (to_u(c.numer()) as u128 * pow_mod(den, p - 2, p) as u128 % p as u128) as u64)
}

fn rank_mod(rows: &[Vec<Q>], p: u64) -> Option<usize> {
    let mut m: Vec<Vec<u64>> = Vec::with_capacity(rows.len());
    for row in rows {
        m.push(row.iter().map(|c| reduce(c, p)).collect::<Option<Vec<_>>>()?);
    }
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][col] != 0) else { continue };
        m.swap(r, piv);
        let inv = pow_mod(m[r][col], p - 2, p);
        for v in m[r].iter_mut() {
            *v = (*v as u128 * inv as u128 % p as u128) as u64;
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[col] != 0 {
                let f = row[col] as u128;
                for (x, q) in row.iter_mut().zip(&pivot) {
                    let sub = f * *q as u128 % p as u128;
                    *x = ((*x as u128 + p as u128 - sub) % p as u128) as u64;
                }
            }
        }
        r += 1;
    }
    Some(r)
}

/// Rank over Q through reductions modulo two large primes. Each modular rank
/// is a lower bound, exact for all but finitely many primes; falls back to
/// exact elimination when a denominator vanishes.
pub fn fast_rank(rows: Vec<Vec<Q>>) -> usize {
    let mods: Option<Vec<usize>> = PRIMES.iter().map(|&p| rank_mod(&rows, p)).collect();
    match mods {
        Some(rs) => rs.into_iter().max().unwrap_or(0),
        None => rank(rows),
    }
}

fn exps(a: &Mat2<Q>) -> (i64, i64) {
    let mut lo = 0;
    let mut hi = 0;
    for i in 0..2 {
        for j in 0..2 {
            for (e, _) in a.get(i, j).terms() {
                lo = lo.min(e);
                hi = hi.max(e);
            }
        }
    }
    (lo, hi)
}

/// dim { v in Q[y]^2 : y^k A v has no positive powers of y }.
pub fn section_dim(a: &Mat2<Q>, k: i64) -> usize {
    let (lo, hi) = exps(a);
    let span = hi - lo;
    // sections are C·w with deg C <= span and deg w <= -k - lo
    let n = (2 * span + (-k - lo).max(0) + 2) as usize;
    let idx = |j: usize, d: usize| j * (n + 1) + d;
    let width = 2 * (n + 1);
    let mut eqs = Vec::new();
    let top = hi + k + n as i64;
    for i in 0..2 {
        for e in 1..=top.max(0) {
            let mut row = vec![Q::zero(); width];
            for j in 0..2 {
                for (ae, c) in a.get(i, j).terms() {
                    let d = e - k - ae;
                    if d >= 0 && d as usize <= n {
                        row[idx(j, d as usize)] += c;
                    }
                }
            }
            if row.iter().any(|x| !x.is_zero()) {
                eqs.push(row);
            }
        }
    }
    width - fast_rank(eqs)
}

/// Splitting exponents (m, n), m >= n, of the bundle on P¹ glued by A,
/// recovered from section counts alone: the largest k with a nonzero
/// section is -n, and m = deg det - n.
pub fn splitting(a: &Mat2<Q>) -> (i64, i64) {
    let det = a.det();
    let total = det.terms().next().map(|(e, _)| e).expect("invertible");
    let mut k = 0;
    if section_dim(a, k) > 0 {
        while section_dim(a, k + 1) > 0 {
            k += 1;
        }
    } else {
        while section_dim(a, k) == 0 {
            k -= 1;
        }
    }
    let (n, m) = (-k, total + k);
    assert!(m >= n, "section counts inconsistent with deg det");
    let count = |k: i64| ((1 - k - m).max(0) + (1 - k - n).max(0)) as usize;
    for j in [k + 1, k, k - 1, k - 2, n - m - 1] {
        assert_eq!(section_dim(a, j), count(j), "count mismatch at k = {j}");
    }
    (m, n)
}

pub fn ylaurent(terms: &[(i64, i64)]) -> YLaurent<Q> {
    let mut p = YLaurent::zero();
    for &(e, c) in terms {
        p.add_term(e, Q::from_integer(c.into()));
    }
    p
}

pub fn one() -> Q {
    Q::one()
}

use p1bundles::transitions::{QPoly, RatFunc, TransitionMat};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub struct Planted {
    pub matrix: TransitionMat,
    /// (λ, multiplicity) of the planted x-factor.
    pub roots: Vec<(Q, u32)>,
}

fn small_poly(rng: &mut ChaCha8Rng, deg: usize) -> QPoly {
    QPoly::new((0..=deg).map(|_| Q::from_integer(rng.gen_range(-3i64..=3).into())).collect())
}

fn entry(p: QPoly, e: i64) -> YLaurent<RatFunc> {
    YLaurent::monomial(RatFunc::from_poly(p), e)
}

/// L·[[y^p, f(x) y^q], [0, y^-p]]·R with unipotent L over Q[x, 1/y] and R
/// over Q[x, y], where f has the planted rational roots.
pub fn planted(rng: &mut ChaCha8Rng) -> Planted {
    let p = rng.gen_range(1i64..=2);
    let q = rng.gen_range(-p + 1..p);
    let pool = [Q::from_integer(0.into()), Q::new(1.into(), 1.into()), Q::new((-1).into(), 2.into()), Q::new(2.into(), 3.into())];
    let nroots = rng.gen_range(1usize..=2);
    let start = rng.gen_range(0..pool.len());
    let roots: Vec<(Q, u32)> = (0..nroots).map(|i| (pool[(start + i) % pool.len()].clone(), rng.gen_range(1u32..=2))).collect();
    let mut f = QPoly::constant(Q::from_integer(rng.gen_range(1i64..=3).into()));
    for (r, m) in &roots {
        f = &f * &QPoly::linear_root(r).pow(*m);
    }
    let zero = || YLaurent::zero();
    let one = || YLaurent::one();
    let core = Mat2::new(entry(QPoly::one(), p), entry(f, q), zero(), entry(QPoly::one(), -p));
    let left = Mat2::new(one(), entry(small_poly(rng, 1), -1), zero(), one())
        .mul(&Mat2::new(one(), zero(), entry(small_poly(rng, 1), 0), one()));
    let right = Mat2::new(one(), zero(), entry(small_poly(rng, 1), 1), one());
    let matrix = left.mul(&core).mul(&right);
    Planted { matrix, roots }
}
