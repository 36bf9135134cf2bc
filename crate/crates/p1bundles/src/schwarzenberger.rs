//! Schwarzenberger transition matrices in the symmetric coordinates
//! u = s + t, v = st, and the polynomial identities tying them to the
//! bundles over P¹×P¹.

use num_traits::Zero;

use crate::bundles::{canonical_p_of, BundleDesc};
use crate::error::{Error, Result};
use crate::exactalg::{mmat_mul, mmat_scale, q, MMat, MPoly, Q};
use crate::transitions::transition_of;

/// Polynomial in (u, v).
pub type SymPoly = MPoly;

pub const UV: [&str; 2] = ["u", "v"];
pub const ST: [&str; 2] = ["s", "t"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchwarzMat {
    pub b: i64,
    pub entries: MMat,
}

impl SchwarzMat {
    /// Entries with u = s + t, v = st.
    pub fn in_st(&self) -> MMat {
        self.entries.clone().map(|row| row.map(|p| sym_to_st(&p)))
    }

    pub fn fmt_uv(&self) -> String {
        fmt_mat(&self.entries, &UV)
    }

    pub fn fmt_st(&self) -> String {
        fmt_mat(&self.in_st(), &ST)
    }
}

pub fn fmt_mat(m: &MMat, names: &[&str]) -> String {
    format!(
        "[[{}, {}], [{}, {}]]",
        m[0][0].fmt_with(names),
        m[0][1].fmt_with(names),
        m[1][0].fmt_with(names),
        m[1][1].fmt_with(names)
    )
}

fn u() -> SymPoly {
    MPoly::var(2, 0)
}

fn v() -> SymPoly {
    MPoly::var(2, 1)
}

/// p(s + t, st) as a polynomial in (s, t).
pub fn sym_to_st(p: &SymPoly) -> MPoly {
    let s = MPoly::var(2, 0);
    let t = MPoly::var(2, 1);
    p.subst(&[&s + &t, &s * &t]).expect("polynomial substitution")
}

/// h_0 = 0, h_1 = 1, h_{n+1} = u h_n - v h_{n-1}; equals (s^n - t^n)/(s - t).
pub fn h_poly(n: i64) -> Result<SymPoly> {
    if n < 0 {
        return Err(Error::RangeViolation(format!("h_poly needs n >= 0, got {n}")));
    }
    let (mut prev, mut cur) = (MPoly::zero(2), MPoly::one(2));
    if n == 0 {
        return Ok(prev);
    }
    for _ in 1..n {
        let next = &(&u() * &cur) - &(&v() * &prev);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

pub fn schwarz_matrix(b: i64) -> Result<SchwarzMat> {
    let c = |n: i64| MPoly::constant(2, q(n));
    let entries = match b {
        _ if b < -1 => return Err(Error::RangeViolation(format!("schwarz_matrix needs b >= -1, got {b}"))),
        -1 => [[c(1), c(0)], [c(0), -&v()]],
        0 => [[c(0), c(-1)], [c(1), c(0)]],
        _ => {
            let (hm, h, hp) = (h_poly(b - 1)?, h_poly(b)?, h_poly(b + 1)?);
            [[h.clone(), &v() * &hm], [hp, &v() * &h]]
        }
    };
    Ok(SchwarzMat { b, entries })
}

/// [[s^b - t^b, st(s^(b-1) - t^(b-1))], [s^(b+1) - t^(b+1), st(s^b - t^b)]]
/// with Laurent terms allowed, so b = 0 is covered as well.
pub fn unsymmetrized(b: i64) -> MMat {
    let d = |n: i64| &MPoly::var_pow(2, 0, n) - &MPoly::var_pow(2, 1, n);
    let st = MPoly::monomial(2, vec![1, 1], q(1));
    [[d(b), &st * &d(b - 1)], [d(b + 1), &st * &d(b)]]
}

/// Same shape with + in place of -.
pub fn plus_matrix(b: i64) -> MMat {
    let p = |n: i64| &MPoly::var_pow(2, 0, n) + &MPoly::var_pow(2, 1, n);
    let st = MPoly::monomial(2, vec![1, 1], q(1));
    [[p(b), &st * &p(b - 1)], [p(b + 1), &st * &p(b)]]
}

/// (s - t) * schwarz_matrix(b)(s + t, st) equals the un-symmetrized matrix.
pub fn substitution_identity(b: i64) -> Result<bool> {
    if b < 0 {
        return Err(Error::RangeViolation(format!("substitution identity needs b >= 0, got {b}")));
    }
    let s_minus_t = &MPoly::var(2, 0) - &MPoly::var(2, 1);
    Ok(mmat_scale(&schwarz_matrix(b)?.in_st(), &s_minus_t) == unsymmetrized(b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialIso {
    DecP2(i64),
    /// Schwarz(1), also known as P(T_{P²}).
    TangentBundle,
}

impl SpecialIso {
    pub fn desc(&self) -> BundleDesc {
        match *self {
            SpecialIso::DecP2(b) => BundleDesc::DecP2 { b },
            SpecialIso::TangentBundle => BundleDesc::Schwarz { b: 1 },
        }
    }
}

pub fn special_iso(b: i64) -> Result<SpecialIso> {
    match b {
        -1 => Ok(SpecialIso::DecP2(1)),
        0 => Ok(SpecialIso::DecP2(0)),
        1 => Ok(SpecialIso::TangentBundle),
        _ => Err(Error::RangeViolation(format!("special isomorphisms exist only for b in {{-1, 0, 1}}, got {b}"))),
    }
}

/// Index of the Hirzebruch surface over a line: b on tangent lines, b mod 2 otherwise.
pub fn restrict_line(b: i64, tangent: bool) -> Result<i64> {
    if b < 1 {
        return Err(Error::RangeViolation(format!("restrict_line needs b >= 1, got {b}")));
    }
    Ok(if tangent { b } else { b % 2 })
}

/// Whether the line aX + bY + cZ = 0 is tangent to the conic Y² = 4XZ.
pub fn is_tangent_to_conic(a: &Q, b: &Q, c: &Q) -> bool {
    if a.is_zero() && b.is_zero() && c.is_zero() {
        return false;
    }
    b * b == a * c
}

/// M = κ·T for some scalar function κ, tested through the (0, 0) entry of T.
fn proportional(m: &MMat, t: &MMat) -> bool {
    let t00 = &t[0][0];
    let m00 = &m[0][0];
    !m00.is_zero()
        && (0..2).all(|i| (0..2).all(|j| &m[i][j] * t00 == &t[i][j] * m00))
}

fn adjugate(m: &MMat) -> MMat {
    [[m[1][1].clone(), -&m[0][1]], [-&m[1][0], m[0][0].clone()]]
}

/// Pull-back of S_b to P¹×P¹ in the chart (y0, y1) = (1, y), z for the
/// second factor: conjugating by the two chart involutions gives the gluing
/// of the hat bundle, and it must match the canonical P_i = z^i data.
pub fn lift_identity_check(b: i64) -> bool {
    if b < 1 {
        return false;
    }
    // variables (y, z)
    let y = MPoly::var(2, 0);
    let z = MPoly::var(2, 1);
    let one = MPoly::one(2);
    let zero = MPoly::zero(2);
    let h: MPoly = (0..=b).fold(MPoly::zero(2), |acc, i| &acc + &MPoly::monomial(2, vec![i, b - i], q(1)));
    let telescoped = &(&y - &z) * &h;
    if telescoped != &MPoly::var_pow(2, 0, b + 1) - &MPoly::var_pow(2, 1, b + 1) {
        return false;
    }
    let Ok(sm) = schwarz_matrix(b) else { return false };
    let Some(theta) = sm.entries.clone().into_iter().map(|row| {
        row.into_iter().map(|p| p.subst(&[&y + &z, &y * &z])).collect::<Option<Vec<_>>>()
    }).collect::<Option<Vec<_>>>() else {
        return false;
    };
    let theta: MMat = [[theta[0][0].clone(), theta[0][1].clone()], [theta[1][0].clone(), theta[1][1].clone()]];
    let chart0: MMat = [[-&one, -&z], [zero.clone(), one.clone()]];
    let chart1: MMat = [[-&one, MPoly::var_pow(2, 1, -1)], [zero.clone(), one.clone()]];
    let n = mmat_mul(&mmat_mul(&chart1, &theta), &chart0);
    let expected: MMat = [
        [MPoly::monomial(2, vec![b, -1], q(1)), zero.clone()],
        [h.clone(), MPoly::var_pow(2, 1, b + 1)],
    ];
    if !proportional(&n, &expected) {
        return false;
    }
    // move to the chart [1 : y] of F_b, where x1 picks up y^b
    let rechart: MMat = [[one.clone(), zero.clone()], [zero.clone(), MPoly::var_pow(2, 0, b)]];
    let lifted = mmat_mul(&rechart, &n);
    let Ok(p) = canonical_p_of(&BundleDesc::HatSchwarz { b }) else { return false };
    let nu = transition_of(&p).nu_matrix();
    let at_chart = |m: &MPoly| m.subst(&[one.clone(), y.clone(), z.clone()]);
    let Some(nu) = nu.into_iter().map(|row| row.into_iter().map(|e| at_chart(&e)).collect::<Option<Vec<_>>>()).collect::<Option<Vec<_>>>() else {
        return false;
    };
    let nu: MMat = [[nu[0][0].clone(), nu[0][1].clone()], [nu[1][0].clone(), nu[1][1].clone()]];
    let z_h = &z * &h;
    nu[1][0] == z_h && proportional(&lifted, &nu)
}

/// The blow-up of the diagonal section of F_0^{m,m}, m = b + 1, followed by
/// the contraction, turns the gluing [x0 : x1 z^m] into the hat-bundle gluing.
pub fn hat_blowdown_check(b: i64) -> bool {
    if b < 1 {
        return false;
    }
    let m = b + 1;
    // variables (y0, y1, z)
    let y0 = MPoly::var(3, 0);
    let y1 = MPoly::var(3, 1);
    let z = MPoly::var(3, 2);
    let zinv = MPoly::var_pow(3, 2, -1);
    let one = MPoly::one(3);
    let zero = MPoly::zero(3);
    let phi0 = |w: &MPoly| -> MMat { [[&(&y0 * w) - &y1, zero.clone()], [-&y0.pow(m as u32), one.clone()]] };
    let phi1 = |w: &MPoly| -> MMat { [[&y0 - &(&y1 * w), zero.clone()], [-&y1.pow(m as u32), one.clone()]] };
    let theta_prime: MMat = [[one.clone(), zero.clone()], [zero.clone(), MPoly::var_pow(3, 2, m)]];
    let composed = mmat_mul(&mmat_mul(&phi1(&zinv), &theta_prime), &adjugate(&phi0(&z)));

    let y0z = &y0 * &z;
    let qsum = (0..m).fold(MPoly::zero(3), |acc, i| &acc + &(&y0z.pow(i as u32) * &y1.pow((m - 1 - i) as u32)));
    if &qsum * &(&y0z - &y1) != &y0z.pow(m as u32) - &y1.pow(m as u32) {
        return false;
    }
    let target: MMat = [[one.clone(), zero.clone()], [&z * &qsum, MPoly::var_pow(3, 2, m + 1)]];
    let factor = &(&y0z - &y1) * &zinv;
    if composed != mmat_scale(&target, &factor) {
        return false;
    }
    let Ok(p) = canonical_p_of(&BundleDesc::HatSchwarz { b }) else { return false };
    transition_of(&p).nu_matrix() == target
}

/// [[-s-t, 2], [-2st, s+t]]·M_b = M_b·[[s+t, 2st], [-2, -s-t]], and both
/// sides are (s - t)·plus_matrix(b).
pub fn involution_identity_check(b: i64) -> bool {
    if b < 2 {
        return false;
    }
    let s = MPoly::var(2, 0);
    let t = MPoly::var(2, 1);
    let sum = &s + &t;
    let st = &s * &t;
    let two = MPoly::constant(2, q(2));
    let left: MMat = [[-&sum, two.clone()], [-&(&two * &st), sum.clone()]];
    let right: MMat = [[sum.clone(), &two * &st], [-&two, -&sum]];
    let mb = unsymmetrized(b);
    let plus = mmat_scale(&plus_matrix(b), &(&s - &t));
    let lhs = mmat_mul(&left, &mb);
    lhs == mmat_mul(&mb, &right) && lhs == plus
}

/// h_n(0, v): zero for even n, (-1)^((n-1)/2) v^((n-1)/2) for odd n.
pub fn h_parity_check(n: i64) -> bool {
    let Ok(h) = h_poly(n) else { return false };
    let Some(at0) = h.subst(&[MPoly::zero(2), v()]) else { return false };
    let expected = if n % 2 == 0 {
        MPoly::zero(2)
    } else {
        let k = (n - 1) / 2;
        MPoly::monomial(2, vec![0, k], q(if k % 2 == 0 { 1 } else { -1 }))
    };
    at0 == expected
}

pub fn det_sym(m: &SchwarzMat) -> SymPoly {
    crate::exactalg::mmat_det(&m.entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(terms: &[(i64, i64, i64)]) -> SymPoly {
        let mut p = MPoly::zero(2);
        for (c, eu, ev) in terms {
            p.add_term(vec![*eu, *ev], q(*c));
        }
        p
    }

    #[test]
    fn h_examples() {
        assert!(h_poly(0).unwrap().is_zero());
        assert_eq!(h_poly(2).unwrap(), sp(&[(1, 1, 0)]));
        assert_eq!(h_poly(4).unwrap(), sp(&[(1, 3, 0), (-2, 1, 1)]));
    }

    #[test]
    fn matrix_examples() {
        let m = |b| schwarz_matrix(b).unwrap().entries;
        assert_eq!(m(-1), [[sp(&[(1, 0, 0)]), sp(&[])], [sp(&[]), sp(&[(-1, 0, 1)])]]);
        assert_eq!(m(1), [[sp(&[(1, 0, 0)]), sp(&[])], [sp(&[(1, 1, 0)]), sp(&[(1, 0, 1)])]]);
        assert_eq!(m(2), [[sp(&[(1, 1, 0)]), sp(&[(1, 0, 1)])], [sp(&[(1, 2, 0), (-1, 0, 1)]), sp(&[(1, 1, 1)])]]);
        assert!(schwarz_matrix(-2).is_err());
        assert_eq!(schwarz_matrix(1).unwrap().fmt_uv(), "[[1, 0], [u, v]]");
    }

    #[test]
    fn small_isomorphisms() {
        assert_eq!(special_iso(-1).unwrap().desc(), BundleDesc::DecP2 { b: 1 });
        assert_eq!(special_iso(0).unwrap().desc(), BundleDesc::DecP2 { b: 0 });
        assert_eq!(special_iso(1).unwrap(), SpecialIso::TangentBundle);
        assert!(special_iso(2).is_err());
    }

    #[test]
    fn lines() {
        assert_eq!(restrict_line(3, true).unwrap(), 3);
        assert_eq!(restrict_line(4, false).unwrap(), 0);
        assert_eq!(restrict_line(5, false).unwrap(), 1);
        // X = 0 meets Y² = 4XZ only at [0:0:1], doubly
        assert!(is_tangent_to_conic(&q(1), &q(0), &q(0)));
        assert!(!is_tangent_to_conic(&q(0), &q(1), &q(0)));
    }

    #[test]
    fn identities_small_b() {
        for b in 0..=4 {
            assert!(substitution_identity(b).unwrap(), "b = {b}");
        }
        for b in 1..=3 {
            assert!(lift_identity_check(b), "lift b = {b}");
            assert!(hat_blowdown_check(b), "blowdown b = {b}");
        }
        for n in 0..=8 {
            assert!(h_parity_check(n), "n = {n}");
        }
        assert!(involution_identity_check(2));
        assert!(involution_identity_check(3));
    }
}
