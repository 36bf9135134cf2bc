//! Transition matrices of P¹-bundles over A¹×P¹: splitting over Q and Q(x),
//! jumping fibres, and their removal by elementary modifications.

mod field;
mod matrix;
mod poly;

pub use matrix::{parse_entry, parse_transition, xpoly, Mat2, TransitionMat, YLaurent};
pub use field::Field;
pub use poly::{root_order, QPoly, RatFunc};

use serde_json::{json, Value};

use crate::bundles::CanonicalP;
use crate::error::{Error, Result};
use crate::exactalg::{q, BiHomogLaurent, MMat, MPoly, Q};
use crate::json;

/// Fields over which a split can be brought to a preferred normal form.
pub trait Splittable: Field {
    /// Rescales column pairs of (B, C) by common factors; identity by default.
    fn clear_columns(b: Mat2<Self>, c: Mat2<Self>) -> (Mat2<Self>, Mat2<Self>) {
        (b, c)
    }
}

impl Splittable for Q {}

impl Splittable for RatFunc {
    /// Makes every column pair polynomial in x with trivial common content.
    fn clear_columns(mut b: Mat2<Self>, mut c: Mat2<Self>) -> (Mat2<Self>, Mat2<Self>) {
        for j in 0..2 {
            let coeffs: Vec<RatFunc> = b
                .column(j)
                .into_iter()
                .chain(c.column(j))
                .flat_map(|p| p.terms().map(|(_, r)| r.clone()).collect::<Vec<_>>())
                .collect();
            let mut lcm = QPoly::one();
            for r in &coeffs {
                let g = lcm.gcd(r.den());
                lcm = (&lcm * r.den()).div_rem(&g).0;
            }
            let mut content = QPoly::zero();
            for r in &coeffs {
                let n = (r.num() * &lcm).div_rem(r.den()).0;
                content = content.gcd(&n);
            }
            if content.is_zero() {
                continue;
            }
            let factor = RatFunc::new(lcm, content);
            if !factor.is_one() {
                b = b.scale_col(j, &factor);
                c = c.scale_col(j, &factor);
            }
        }
        (b, c)
    }
}

/// B⁻¹·A·C = diag(y^m, y^n) with m ≥ n, for the unit-normalized `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitData<F: Field> {
    pub a: Mat2<F>,
    pub b: Mat2<F>,
    pub c: Mat2<F>,
    pub m: i64,
    pub n: i64,
}

impl<F: Field> SplitData<F> {
    pub fn generic_b(&self) -> i64 {
        self.m - self.n
    }

    /// B·diag(y^m, y^n) = A·C
    pub fn factorization_holds(&self) -> bool {
        self.b.mul(&Mat2::diag_y(self.m, self.n)) == self.a.mul(&self.c)
    }
}

impl SplitData<RatFunc> {
    pub fn det_b(&self) -> QPoly {
        det_in_x(&self.b).expect("det B is a polynomial in x")
    }

    pub fn det_c(&self) -> QPoly {
        det_in_x(&self.c).expect("det C is a polynomial in x")
    }
}

fn det_in_x(m: &TransitionMat) -> Option<QPoly> {
    let d = m.det();
    if d.is_zero() {
        return Some(QPoly::zero());
    }
    match d.as_monomial() {
        Some((0, r)) if r.is_poly() => Some(r.num().clone()),
        _ => None,
    }
}

/// Divides row 0 by μ where det A = μ·y^d; returns the new matrix and d.
pub fn unit_normalize<F: Field>(a: &Mat2<F>) -> Result<(Mat2<F>, i64)> {
    let det = a.det();
    if det.is_zero() {
        return Err(Error::NotInvertible);
    }
    let (d, mu) = det.as_monomial().ok_or(Error::NonUnitDeterminant)?;
    Ok((a.scale_row(0, &mu.inv()), d))
}

/// Column degree reduction: y^N·A·C is made column reduced by unimodular C.
pub fn birkhoff_split<F: Splittable>(a: &Mat2<F>) -> Result<SplitData<F>> {
    let (a, d) = unit_normalize(a)?;
    let shift = (-a.min_exp().unwrap_or(0)).max(0);
    let mut work = Mat2 { e: a.e.clone().map(|row| row.map(|p| p.shift(shift))) };
    let mut c = Mat2::<F>::identity();
    loop {
        let deg = col_degrees(&work);
        let lead = |i: usize, j: usize| work.e[i][j].coeff(deg[j]);
        let det_l = lead(0, 0).mul(&lead(1, 1)).sub(&lead(0, 1).mul(&lead(1, 0)));
        if !det_l.is_zero() {
            break;
        }
        let mut alpha = [lead(0, 1), lead(0, 0).neg()];
        if alpha.iter().all(Field::is_zero) {
            alpha = [lead(1, 1), lead(1, 0).neg()];
        }
        let j = (0..2).filter(|&j| !alpha[j].is_zero()).max_by_key(|&j| (deg[j], j)).expect("kernel vector is nonzero");
        let inv = alpha[j].inv();
        for m in [&mut work, &mut c] {
            let mut col = [YLaurent::zero(), YLaurent::zero()];
            for (i, al) in alpha.iter().enumerate() {
                if al.is_zero() {
                    continue;
                }
                let f = al.mul(&inv);
                for (r, slot) in col.iter_mut().enumerate() {
                    *slot = slot.add(&m.e[r][i].shift(deg[j] - deg[i]).scale(&f));
                }
            }
            let [c0, c1] = col;
            m.e[0][j] = c0;
            m.e[1][j] = c1;
        }
        let new_deg = col_degrees(&work);
        assert!(new_deg[j] < deg[j], "column reduction must lower the degree");
    }
    let deg = col_degrees(&work);
    let mut b = work.mul(&Mat2::diag_y(-deg[0], -deg[1]));
    let (mut m, mut n) = (deg[0] - shift, deg[1] - shift);
    if m < n {
        b = b.swap_cols();
        c = c.swap_cols();
        std::mem::swap(&mut m, &mut n);
    }
    debug_assert_eq!(m + n, d);
    let (b, c) = F::clear_columns(b, c);
    Ok(SplitData { a, b, c, m, n })
}

fn col_degrees<F: Field>(m: &Mat2<F>) -> [i64; 2] {
    let deg = |j: usize| {
        m.e[0][j].max_exp().into_iter().chain(m.e[1][j].max_exp()).max().expect("invertible matrices have no zero column")
    };
    [deg(0), deg(1)]
}

#[derive(Clone, Debug, PartialEq)]
pub struct JumpReport {
    pub generic_b: i64,
    /// (λ, ε) with fibre index generic_b + 2ε over x = λ.
    pub jumps: Vec<(Q, i64)>,
    /// Squarefree part of det B left after all rational roots are removed.
    pub unresolved: Vec<QPoly>,
}

/// One elementary modification performed by `remove_jumps`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModStep {
    pub lambda: Q,
    pub before_b: i64,
    pub deg_det_before: i64,
    pub deg_det_after: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JumpRemoval {
    pub matrix: TransitionMat,
    pub steps: Vec<ModStep>,
    /// deg det B after the initial split and after every reduction.
    pub degree_trace: Vec<i64>,
}

enum LocalStep {
    Spurious,
    Jump { eps: i64, b_tilde: i64 },
}

struct State {
    s: SplitData<RatFunc>,
}

fn x_minus(lambda: &Q) -> RatFunc {
    RatFunc::from_poly(QPoly::linear_root(lambda))
}

impl State {
    fn new(a: &TransitionMat) -> Result<Self> {
        Ok(Self { s: birkhoff_split(a)? })
    }

    fn det_b(&self) -> QPoly {
        self.s.det_b()
    }

    /// Conjugates by the splitters of A(λ) so that A(λ) is diagonal; returns (m̃, ñ).
    fn normalize_at(&mut self, lambda: &Q) -> Result<(i64, i64)> {
        let a0 = self.s.a.eval_x(lambda).ok_or_else(|| Error::NotNormalizedAtLambda(lambda.clone()))?;
        let local = birkhoff_split(&a0)?;
        let bt_inv = Mat2::from_q(&local.b.inverse()?);
        let ct = Mat2::from_q(&local.c);
        let ct_inv = Mat2::from_q(&local.c.inverse()?);
        self.s.a = bt_inv.mul(&self.s.a).mul(&ct);
        self.s.b = bt_inv.mul(&self.s.b);
        self.s.c = ct_inv.mul(&self.s.c);
        Ok((local.m, local.n))
    }

    fn divide_col(&mut self, j: usize, lambda: &Q) -> Result<()> {
        let f = x_minus(lambda).inv();
        self.s.b = self.s.b.scale_col(j, &f);
        self.s.c = self.s.c.scale_col(j, &f);
        self.check_polynomial(lambda)
    }

    fn check_polynomial(&self, lambda: &Q) -> Result<()> {
        if self.s.b.is_x_polynomial() && self.s.c.is_x_polynomial() {
            Ok(())
        } else {
            Err(Error::NotNormalizedAtLambda(lambda.clone()))
        }
    }

    /// One reduction at a root λ of det B. With `modify` false a genuine
    /// jump is reported and left in place.
    fn step_at(&mut self, lambda: &Q, modify: bool) -> Result<LocalStep> {
        let (mt, nt) = self.normalize_at(lambda)?;
        let eps = mt - self.s.m;
        let gb = self.s.generic_b();
        let bad = || Error::NotNormalizedAtLambda(lambda.clone());
        let b0 = self.s.b.eval_x(lambda).ok_or_else(bad)?;
        for j in 0..2 {
            if b0.e[0][j].is_zero() && b0.e[1][j].is_zero() {
                self.divide_col(j, lambda)?;
                return Ok(LocalStep::Spurious);
            }
        }
        if eps > 0 {
            if !modify {
                return Ok(LocalStep::Jump { eps, b_tilde: mt - nt });
            }
            let d = x_minus(lambda);
            let dinv = d.inv();
            let s = &mut self.s;
            s.a.e[0][1] = s.a.e[0][1].scale(&dinv);
            s.a.e[1][0] = s.a.e[1][0].scale(&d);
            s.b = s.b.scale_row(0, &dinv);
            s.c = s.c.scale_row(0, &dinv);
            self.check_polynomial(lambda)?;
            if self.s.a.eval_x(lambda).is_none() {
                return Err(bad());
            }
            return Ok(LocalStep::Jump { eps, b_tilde: mt - nt });
        }
        if eps < 0 {
            // semicontinuity puts the zero column in place already
            return Err(bad());
        }
        let beta = |i: usize, j: usize| b0.e[i][j].coeff(0);
        let (r, r_right) = if gb == 0 {
            if b0.e.iter().flatten().any(|p| p.terms().any(|(e, _)| e != 0)) {
                return Err(bad());
            }
            let mut v = [beta(0, 1), beta(0, 0).neg()];
            if v.iter().all(Field::is_zero) {
                v = [beta(1, 1), beta(1, 0).neg()];
            }
            let w = if v[1].is_zero() { [q(0), q(1)] } else { [q(1), q(0)] };
            let r = Mat2::from_q(&Mat2::constant([[v[0].clone(), w[0].clone()], [v[1].clone(), w[1].clone()]]));
            (r.clone(), r)
        } else {
            if !beta(0, 0).is_zero() || beta(1, 1).is_zero() {
                return Err(bad());
            }
            let (b10, b11) = (RatFunc::constant(beta(1, 0)), RatFunc::constant(beta(1, 1)));
            let r = Mat2::new(
                YLaurent::constant(b11.clone()),
                YLaurent::zero(),
                YLaurent::constant(b10.neg()),
                YLaurent::one(),
            );
            let r_right = Mat2::new(
                YLaurent::constant(b11),
                YLaurent::zero(),
                YLaurent::monomial(b10.neg(), gb),
                YLaurent::one(),
            );
            (r, r_right)
        };
        self.s.b = self.s.b.mul(&r);
        self.s.c = self.s.c.mul(&r_right);
        let b0 = self.s.b.eval_x(lambda).ok_or_else(bad)?;
        if !(b0.e[0][0].is_zero() && b0.e[1][0].is_zero()) {
            return Err(bad());
        }
        self.divide_col(0, lambda)?;
        Ok(LocalStep::Spurious)
    }
}

fn unresolved_of(det: &QPoly) -> Vec<QPoly> {
    let rest = det.strip_rational_roots();
    if rest.degree() > 0 {
        vec![rest.squarefree()]
    } else {
        Vec::new()
    }
}

pub fn detect_jumps(a: &TransitionMat) -> Result<JumpReport> {
    let mut st = State::new(a)?;
    let generic_b = st.s.generic_b();
    let mut jumps: Vec<(Q, i64)> = Vec::new();
    loop {
        let det = st.det_b();
        let next = det.rational_roots().into_iter().find(|r| !jumps.iter().any(|(l, _)| l == r));
        let Some(lambda) = next else { break };
        let before = det.degree();
        match st.step_at(&lambda, false)? {
            LocalStep::Spurious => {
                if st.det_b().degree() != before - 1 {
                    return Err(Error::NotNormalizedAtLambda(lambda));
                }
            }
            LocalStep::Jump { eps, .. } => jumps.push((lambda, eps)),
        }
    }
    jumps.sort_by(|x, y| root_order(&x.0, &y.0));
    let unresolved = unresolved_of(&st.det_b());
    Ok(JumpReport { generic_b, jumps, unresolved })
}

/// Δ⁻¹·A·Δ with Δ = diag(x − λ, 1), after diagonalizing A(λ).
pub fn elementary_modification(a: &TransitionMat, lambda: &Q) -> Result<TransitionMat> {
    let bad = || Error::NotNormalizedAtLambda(lambda.clone());
    let (a, _) = unit_normalize(a)?;
    let a0 = a.eval_x(lambda).ok_or_else(bad)?;
    let local = birkhoff_split(&a0)?;
    let a = Mat2::from_q(&local.b.inverse()?).mul(&a).mul(&Mat2::from_q(&local.c));
    if !a.eval_x(lambda).ok_or_else(bad)?.is_diagonal() {
        return Err(bad());
    }
    let d = x_minus(lambda);
    let mut out = a;
    out.e[0][1] = out.e[0][1].scale(&d.inv());
    out.e[1][0] = out.e[1][0].scale(&d);
    if out.eval_x(lambda).is_none() {
        return Err(bad());
    }
    Ok(out)
}

pub fn remove_jumps(a: &TransitionMat) -> Result<JumpRemoval> {
    let mut st = State::new(a)?;
    let mut steps = Vec::new();
    let mut trace = vec![st.det_b().degree()];
    loop {
        let det = st.det_b();
        let Some(lambda) = det.rational_roots().into_iter().next() else {
            let left = unresolved_of(&det);
            if !left.is_empty() {
                return Err(Error::UnresolvedJump(left.iter().map(ToString::to_string).collect()));
            }
            break;
        };
        let before = det.degree();
        let outcome = st.step_at(&lambda, true)?;
        let after = st.det_b().degree();
        if after != before - 1 {
            return Err(Error::NotNormalizedAtLambda(lambda));
        }
        trace.push(after);
        if let LocalStep::Jump { b_tilde, .. } = outcome {
            steps.push(ModStep { lambda, before_b: b_tilde, deg_det_before: before, deg_det_after: after });
        }
    }
    let matrix = st.s.a;
    let check = detect_jumps(&matrix)?;
    if !check.jumps.is_empty() {
        let lams = check.jumps.iter().map(|(l, _)| crate::exactalg::fmt_q(l)).collect();
        return Err(Error::UnresolvedJump(lams));
    }
    Ok(JumpRemoval { matrix, steps, degree_trace: trace })
}

/// The gluing ([x0 : x1 z^c + x0 P]; [y0 z^a : y1], 1/z) of a canonical class.
#[derive(Clone, Debug, PartialEq)]
pub struct NuPresentation {
    pub a: i64,
    pub c: i64,
    pub p: BiHomogLaurent,
}

impl NuPresentation {
    /// [[1, 0], [P, z^c]] acting on (x0, x1), in variables (y0, y1, z).
    pub fn nu_matrix(&self) -> MMat {
        let b = self.p.b();
        let mut p = MPoly::zero(3);
        for (i, row) in self.p.rows().iter().enumerate() {
            for (e, coef) in row.terms() {
                p.add_term(vec![i as i64, (b - i) as i64, e], coef.clone());
            }
        }
        [[MPoly::one(3), MPoly::zero(3)], [p, MPoly::var_pow(3, 2, self.c)]]
    }
}

pub fn transition_of(p: &CanonicalP) -> NuPresentation {
    let inv = p.inv();
    NuPresentation { a: inv.a, c: inv.c, p: p.embed() }
}

pub fn transition_to_json(m: &TransitionMat) -> Value {
    let entry = |p: &YLaurent<RatFunc>| {
        Value::Array(
            p.terms()
                .map(|(e, r)| {
                    json!({
                        "xnum": json::q_vec_to_json(r.num().coeffs()),
                        "xden": json::q_vec_to_json(r.den().coeffs()),
                        "yexp": e,
                    })
                })
                .collect(),
        )
    };
    json!({"entries": [[entry(&m.e[0][0]), entry(&m.e[0][1])], [entry(&m.e[1][0]), entry(&m.e[1][1])]]})
}

pub fn transition_from_json(v: &Value) -> Result<TransitionMat> {
    let obj = json::as_object(v)?;
    let rows = json::field(obj, "entries")?.as_array().filter(|r| r.len() == 2);
    let rows = rows.ok_or_else(|| Error::Parse("entries must be a 2x2 array".into()))?;
    let mut cells = Vec::new();
    for row in rows {
        let row = row.as_array().filter(|r| r.len() == 2).ok_or_else(|| Error::Parse("rows need two entries".into()))?;
        for cell in row {
            let terms = cell.as_array().ok_or_else(|| Error::Parse("entry must be an array of terms".into()))?;
            let mut p = YLaurent::zero();
            for t in terms {
                let t = json::as_object(t)?;
                let num = QPoly::new(json::q_vec_from_json(json::field(t, "xnum")?)?);
                let den = QPoly::new(json::q_vec_from_json(json::field(t, "xden")?)?);
                if den.is_zero() {
                    return Err(Error::Parse("zero denominator".into()));
                }
                p.add_term(json::i64_from_json(json::field(t, "yexp")?)?, RatFunc::new(num, den));
            }
            cells.push(p);
        }
    }
    let mut it = cells.into_iter();
    let mut next = || it.next().expect("four cells");
    Ok(Mat2::new(next(), next(), next(), next()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundles::{canonical_p_of, BundleDesc};
    use crate::exactalg::LaurentPoly;

    fn m(s: &str) -> TransitionMat {
        parse_transition(s).unwrap()
    }

    #[test]
    fn split_diagonal() {
        let s = birkhoff_split(&m("y, 0; 0, 1")).unwrap();
        assert_eq!((s.m, s.n), (1, 0));
        assert_eq!(s.b, Mat2::identity());
        assert_eq!(s.c, Mat2::identity());
    }

    #[test]
    fn split_worked_example() {
        let s = birkhoff_split(&m("y, x; 0, y^-1")).unwrap();
        assert_eq!((s.m, s.n), (0, 0));
        assert!(s.factorization_holds());
        assert_eq!(s.det_b(), QPoly::x());
        assert_eq!(s.det_c(), QPoly::x());
        assert_eq!(s.b, m("0, x; -1, y^-1"));
        assert_eq!(s.c, m("x, 0; -y, 1"));
    }

    #[test]
    fn split_rejects_non_units() {
        assert_eq!(birkhoff_split(&m("1, y; 1, y")), Err(Error::NotInvertible));
        assert_eq!(birkhoff_split(&m("1+y, 0; 0, 1")), Err(Error::NonUnitDeterminant));
        let s = birkhoff_split(&m("x, 0; 0, y^3")).unwrap();
        assert_eq!((s.m, s.n), (3, 0));
    }

    #[test]
    fn jump_examples() {
        let r = detect_jumps(&m("y, 0; 0, 1")).unwrap();
        assert_eq!((r.generic_b, r.jumps.len(), r.unresolved.len()), (1, 0, 0));
        let r = detect_jumps(&m("y, x; 0, y^-1")).unwrap();
        assert_eq!((r.generic_b, r.jumps.clone()), (0, vec![(q(0), 1)]));
        let r = detect_jumps(&m("y, x-3; 0, y^-1")).unwrap();
        assert_eq!(r.jumps, vec![(q(3), 1)]);
        let r = detect_jumps(&m("y, x^2+1; 0, y^-1")).unwrap();
        assert!(r.jumps.is_empty());
        assert_eq!(r.unresolved, vec![QPoly::new(vec![q(1), q(0), q(1)])]);
    }

    #[test]
    fn modification_examples() {
        assert_eq!(elementary_modification(&m("y, x; 0, y^-1"), &q(0)).unwrap(), m("y, 1; 0, y^-1"));
        assert_eq!(elementary_modification(&m("y^2, 0; 0, 1"), &q(0)).unwrap(), m("y^2, 0; 0, 1"));
        assert_eq!(elementary_modification(&m("y, x^2; 0, y^-1"), &q(0)).unwrap(), m("y, x; 0, y^-1"));
    }

    #[test]
    fn removal_examples() {
        let r = remove_jumps(&m("y, 0; 0, 1")).unwrap();
        assert!(r.steps.is_empty());
        assert_eq!(r.matrix, m("y, 0; 0, 1"));

        let r = remove_jumps(&m("y, x; 0, y^-1")).unwrap();
        assert_eq!(r.steps.iter().map(|s| (s.lambda.clone(), s.before_b)).collect::<Vec<_>>(), vec![(q(0), 2)]);
        assert_eq!(r.matrix, m("y, 1; 0, y^-1"));

        let r = remove_jumps(&m("y, x^2; 0, y^-1")).unwrap();
        assert_eq!(r.steps.len(), 2);
        assert!(r.degree_trace.windows(2).all(|w| w[1] < w[0]));

        assert!(matches!(remove_jumps(&m("y, x^2+1; 0, y^-1")), Err(Error::UnresolvedJump(_))));
    }

    #[test]
    fn nu_presentations() {
        let t = transition_of(&canonical_p_of(&BundleDesc::DecFa { a: 1, b: 1, c: 0 }).unwrap());
        assert_eq!(t.c, 0);
        assert!(t.p.is_zero());
        let t = transition_of(&canonical_p_of(&BundleDesc::Umemura { a: 1, b: 1, c: 3 }).unwrap());
        assert_eq!(t.c, 3);
        assert_eq!(t.p, BiHomogLaurent::new(vec![LaurentPoly::zero(), LaurentPoly::monomial(q(1), 2)]));
        let t = transition_of(&canonical_p_of(&BundleDesc::HatSchwarz { b: 1 }).unwrap());
        assert_eq!(t.c, 3);
        assert_eq!(t.p, BiHomogLaurent::new(vec![LaurentPoly::z(), LaurentPoly::monomial(q(1), 2)]));
    }

    #[test]
    fn json_roundtrip() {
        let a = m("y + x/(x+2), (x-3)/2; 0, 1/y");
        assert_eq!(transition_from_json(&transition_to_json(&a)).unwrap(), a);
    }
}
