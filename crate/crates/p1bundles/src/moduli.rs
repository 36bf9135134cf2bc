//! The projective spaces of non-decomposable classes with fixed (a, b, c) and
//! the action of Aut°(F_a) on them.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bundles::{normalize, CanonicalP, NumericalInvariants};
use crate::error::{Error, Result};
use crate::exactalg::{binom, q, subst_y_affine, trunc_inverse, BiHomogLaurent, LaurentPoly, TruncPoly, YSubst, Q};

/// GL2 entries (α, β, γ, δ).
pub type Gl2 = (Q, Q, Q, Q);

pub fn gl2(a: i64, b: i64, c: i64, d: i64) -> Gl2 {
    (q(a), q(b), q(c), q(d))
}

pub fn gl2_mul(g: &Gl2, h: &Gl2) -> Gl2 {
    (
        &g.0 * &h.0 + &g.1 * &h.2,
        &g.0 * &h.1 + &g.1 * &h.3,
        &g.2 * &h.0 + &g.3 * &h.2,
        &g.2 * &h.1 + &g.3 * &h.3,
    )
}

pub fn gl2_det(g: &Gl2) -> Q {
    &g.0 * &g.3 - &g.1 * &g.2
}

pub fn gl2_inv(g: &Gl2) -> Result<Gl2> {
    let d = gl2_det(g);
    if d.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let r = d.recip();
    Ok((&g.3 * &r, -&g.1 * &r, -&g.2 * &r, &g.0 * &r))
}

/// A non-decomposable class, stored through its scaled canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuliPoint {
    p: CanonicalP,
}

impl ModuliPoint {
    pub fn new(p: CanonicalP) -> Result<Self> {
        let inv = p.inv();
        if inv.b < 1 || inv.c < 2 {
            return Err(Error::RangeViolation(format!("moduli need b >= 1 and c >= 2, got {inv}")));
        }
        if p.is_zero() {
            return Err(Error::RangeViolation("the decomposable class is not a moduli point".into()));
        }
        Ok(Self { p: p.rescaled() })
    }

    pub fn p(&self) -> &CanonicalP {
        &self.p
    }

    pub fn inv(&self) -> NumericalInvariants {
        self.p.inv()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FaGenerator {
    ZGl2(Gl2),
    /// Only for a = 0.
    YGl2(Gl2),
    /// R(z) = sum r_j z^j with deg R <= a; only for a >= 1.
    Shear(Vec<Q>),
}

/// dim of the moduli space: (d+1)(2(c-1) - ad)/2 - 1 with d the largest
/// integer d <= b such that ad <= c - 2.
pub fn dim_moduli(a: i64, b: i64, c: i64) -> Result<i64> {
    if a < 0 || b < 1 || c < 2 {
        return Err(Error::RangeViolation(format!("dim_moduli needs a >= 0, b >= 1, c >= 2, got ({a}, {b}, {c})")));
    }
    let d = if a == 0 { b } else { b.min((c - 2) / a) };
    Ok((d + 1) * (2 * (c - 1) - a * d) / 2 - 1)
}

/// Symmetric-power action on Q[z]_{<=r}: z^i is weighted by C(r, i),
/// homogenized to s^i t^(r-i), and (s, t) is replaced by (αs + γt, βs + δt).
pub fn act_symr(g: &Gl2, p: &TruncPoly) -> Result<TruncPoly> {
    if gl2_det(g).is_zero() {
        return Err(Error::SingularMatrix);
    }
    let (al, be, ga, de) = g;
    let r = p.bound() as i64;
    let pow = |x: &Q, n: i64| (0..n).fold(Q::one(), |acc, _| acc * x);
    let mut out = vec![Q::zero(); r as usize + 1];
    for i in 0..=r {
        let a = p.coeff(i as usize);
        if a.is_zero() {
            continue;
        }
        let w = a * Q::from_integer(binom(r, i));
        // (αs + γt)^i (βs + δt)^(r-i)
        for j in 0..=i {
            let left = Q::from_integer(binom(i, j)) * pow(al, j) * pow(ga, i - j);
            if left.is_zero() {
                continue;
            }
            for k in 0..=(r - i) {
                let right = Q::from_integer(binom(r - i, k)) * pow(be, k) * pow(de, r - i - k);
                out[(j + k) as usize] += &w * &left * right;
            }
        }
    }
    for (i, c) in out.iter_mut().enumerate() {
        *c /= Q::from_integer(binom(r, i as i64));
    }
    Ok(TruncPoly::new(r as usize, out))
}

/// P = α δ^(-r) (βz + α)^(-1) P̂(δz / (βz + α)) in Q[z]/(z^(r+1)), for
/// P̂ = act_symr((α, β, 0, δ), P).
pub fn upper_triangular_identity(alpha: &Q, beta: &Q, delta: &Q, p: &TruncPoly) -> Result<bool> {
    let r = p.bound();
    let hat = act_symr(&(alpha.clone(), beta.clone(), Q::zero(), delta.clone()), p)?;
    let w = trunc_inverse(&TruncPoly::new(r, vec![alpha.clone(), beta.clone()]))?;
    let inner = &TruncPoly::monomial(r, 1, delta.clone()) * &w;
    let composed = hat.compose(&inner)?;
    let scale = alpha * (0..r).fold(Q::one(), |acc, _| acc / delta);
    let rhs = (&w * &composed).scale(&scale);
    Ok(rhs == *p)
}

fn check_generator(a: i64, g: &FaGenerator) -> Result<()> {
    match g {
        FaGenerator::ZGl2(m) | FaGenerator::YGl2(m) if gl2_det(m).is_zero() => Err(Error::SingularMatrix),
        FaGenerator::YGl2(_) if a != 0 => Err(Error::IllegalGenerator(a)),
        FaGenerator::Shear(_) if a == 0 => Err(Error::IllegalGenerator(a)),
        FaGenerator::Shear(r) if r.len() as i64 > a + 1 && r[(a + 1) as usize..].iter().any(|c| !c.is_zero()) => {
            Err(Error::RangeViolation(format!("shear polynomial must have degree <= {a}")))
        }
        _ => Ok(()),
    }
}

fn act_zgl2(g: &Gl2, p: &CanonicalP) -> Result<CanonicalP> {
    let mut rows = Vec::with_capacity(p.rows().len());
    for i in 0..p.rows().len() {
        rows.push(match p.row_trunc(i) {
            Some(t) => act_symr(g, &t)?.coeffs().to_vec(),
            None => Vec::new(),
        });
    }
    Ok(CanonicalP::from_rows(p.inv(), rows)?.rescaled())
}

/// Action on an arbitrary representative of the class with invariants `inv`.
pub fn act_on_raw(inv: NumericalInvariants, g: &FaGenerator, raw: &BiHomogLaurent) -> Result<CanonicalP> {
    let NumericalInvariants { a, b, c } = inv;
    check_generator(a, g)?;
    match g {
        FaGenerator::ZGl2(m) => act_zgl2(m, &normalize(a, b, c, raw)?),
        FaGenerator::YGl2(m) => {
            let (al, be, ga, de) = gl2_inv(m)?;
            let moved = subst_y_affine(raw, &YSubst::Gl2(al, be, ga, de))?;
            normalize(a, b, c, &moved)
        }
        FaGenerator::Shear(r) => {
            let minus_r = LaurentPoly::from_dense(r).scale(&-Q::one());
            let moved = subst_y_affine(raw, &YSubst::Shear(minus_r))?;
            normalize(a, b, c, &moved)
        }
    }
}

pub fn act_on_moduli(a: i64, g: &FaGenerator, m: &ModuliPoint) -> Result<ModuliPoint> {
    let inv = m.inv();
    if inv.a != a {
        return Err(Error::RangeViolation(format!("point lives over F_{}, not F_{a}", inv.a)));
    }
    let p = match g {
        FaGenerator::ZGl2(h) => {
            check_generator(a, g)?;
            act_zgl2(h, m.p())?
        }
        _ => act_on_raw(inv, g, &m.p().embed())?,
    };
    ModuliPoint::new(p)
}

/// Structured GL2 samples: swap, diag(t, 1) for t in {2, 3, 5}, and the two unipotents.
pub fn structured_gl2() -> Vec<Gl2> {
    vec![gl2(0, 1, 1, 0), gl2(2, 0, 0, 1), gl2(3, 0, 0, 1), gl2(5, 0, 0, 1), gl2(1, 1, 0, 1), gl2(1, 0, 1, 1)]
}

fn small_q(rng: &mut ChaCha8Rng) -> Q {
    Q::new(rng.gen_range(-6i64..=6).into(), rng.gen_range(1i64..=3).into())
}

pub fn random_gl2(rng: &mut ChaCha8Rng) -> Gl2 {
    loop {
        let g = (small_q(rng), small_q(rng), small_q(rng), small_q(rng));
        if !gl2_det(&g).is_zero() {
            return g;
        }
    }
}

/// Sample-based fixed-point test. For a = 0 each GL2 element acts on both
/// factors at once; for a >= 1 the z-action and the shears are tested
/// separately. A `false` is a proof of non-fixedness, a `true` is evidence.
pub fn is_fixed_diag(a: i64, m: &ModuliPoint, trials: usize) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e37_79b9 ^ trials as u64);
    let mut gens: Vec<Vec<FaGenerator>> = Vec::new();
    let mut mats = structured_gl2();
    mats.extend((0..trials).map(|_| random_gl2(&mut rng)));
    if a == 0 {
        gens.extend(mats.into_iter().map(|g| vec![FaGenerator::ZGl2(g.clone()), FaGenerator::YGl2(g)]));
    } else {
        gens.extend(mats.into_iter().map(|g| vec![FaGenerator::ZGl2(g)]));
        let au = a as usize;
        for j in 0..=au {
            let mut r = vec![Q::zero(); au + 1];
            r[j] = Q::one();
            gens.push(vec![FaGenerator::Shear(r)]);
        }
        gens.push(vec![FaGenerator::Shear(vec![Q::one(); au + 1])]);
        for _ in 0..trials {
            gens.push(vec![FaGenerator::Shear((0..=au).map(|_| small_q(&mut rng)).collect())]);
        }
    }
    gens.iter().all(|word| {
        let mut cur = m.clone();
        for g in word {
            match act_on_moduli(a, g, &cur) {
                Ok(next) => cur = next,
                Err(_) => return false,
            }
        }
        cur == *m
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundles::{canonical_p_of, BundleDesc};
    use crate::exactalg::qr;

    fn point(d: BundleDesc) -> ModuliPoint {
        ModuliPoint::new(canonical_p_of(&d).unwrap()).unwrap()
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dim_moduli(0, 1, 3).unwrap(), 3);
        assert_eq!(dim_moduli(2, 3, 4).unwrap(), 3);
        assert_eq!(dim_moduli(1, 2, 2).unwrap(), 0);
        assert!(dim_moduli(1, 0, 3).is_err());
        assert!(dim_moduli(1, 2, 1).is_err());
    }

    #[test]
    fn symr_examples() {
        let p = TruncPoly::from_ints(1, &[1, 2]);
        assert_eq!(act_symr(&gl2(0, 1, 1, 0), &p).unwrap(), TruncPoly::from_ints(1, &[2, 1]));
        assert_eq!(act_symr(&gl2(1, 0, 0, 1), &p).unwrap(), p);
        assert_eq!(act_symr(&gl2(1, 1, 0, 1), &TruncPoly::one(1)).unwrap(), TruncPoly::from_ints(1, &[1, 1]));
        assert_eq!(act_symr(&gl2(1, 2, 2, 4), &p), Err(Error::SingularMatrix));
    }

    #[test]
    fn upper_triangular_samples() {
        let p = TruncPoly::new(3, vec![q(1), qr(-2, 3), q(0), q(5)]);
        assert!(upper_triangular_identity(&q(2), &q(-1), &qr(1, 3), &p).unwrap());
        assert!(upper_triangular_identity(&q(1), &q(0), &q(1), &TruncPoly::one(0)).unwrap());
    }

    #[test]
    fn moduli_examples() {
        let u = point(BundleDesc::Umemura { a: 1, b: 2, c: 3 });
        let moved = act_on_moduli(1, &FaGenerator::Shear(vec![q(0), q(1)]), &u).unwrap();
        assert_eq!(moved, u);

        let h = point(BundleDesc::HatSchwarz { b: 1 });
        let swapped = act_on_moduli(0, &FaGenerator::ZGl2(gl2(0, 1, 1, 0)), &h).unwrap();
        let back = act_on_moduli(0, &FaGenerator::YGl2(gl2(0, 1, 1, 0)), &swapped).unwrap();
        assert_eq!(back, h);

        assert_eq!(act_on_moduli(1, &FaGenerator::YGl2(gl2(0, 1, 1, 0)), &u), Err(Error::IllegalGenerator(1)));
        assert_eq!(act_on_moduli(0, &FaGenerator::Shear(vec![q(1)]), &h), Err(Error::IllegalGenerator(0)));
    }

    #[test]
    fn fixed_point_examples() {
        assert!(is_fixed_diag(2, &point(BundleDesc::Umemura { a: 2, b: 2, c: 4 }), 5));
        assert!(is_fixed_diag(0, &point(BundleDesc::HatSchwarz { b: 2 }), 5));
        let inv = NumericalInvariants::new(0, 1, 3);
        let p = CanonicalP::from_rows(inv, vec![vec![q(1)], vec![]]).unwrap();
        assert!(!is_fixed_diag(0, &ModuliPoint::new(p).unwrap(), 5));
    }
}
