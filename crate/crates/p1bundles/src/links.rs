//! Invariant curves and elementary links between the named families.
//!
//! A link is recorded as data: source, target, the blown-up centre and
//! whether the connected automorphism groups are conjugated into each other
//! in either direction.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bundles::{identify, umemura_k, BundleDesc};
use crate::error::{Error, Result};
use crate::exactalg::{mmat_mul, q, MMat, MPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Curve {
    /// x0 = y0 = 0
    L00,
    /// x1 = y0 = 0
    L10,
    CSchwarz,
    FiberOverMarkedPoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Center {
    Curve(Curve),
    /// Contraction of the preimage of the (-1)-curve of F_1; nothing is blown up.
    Contraction,
    /// Blow-up of the fibre over a chosen point of P².
    MarkedFibre,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LinkKind {
    DecShift,
    UmeShift,
    UmeToDec,
    F1ToP2,
    U1ToV,
    SchwarzInvolution,
    XSwap,
    HatToDec,
}

impl fmt::Display for LinkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LinkStep {
    pub source: BundleDesc,
    pub target: BundleDesc,
    pub center: Center,
    pub kind: LinkKind,
    /// Traverses `kind` against its named direction.
    pub inverse: bool,
    pub fwd_equivariant: bool,
    pub bwd_equivariant: bool,
    /// Conjugation lands in a proper subgroup of the target's group.
    pub strict: bool,
}

impl LinkStep {
    pub fn reversed(&self) -> LinkStep {
        let center = match (self.kind, self.center) {
            (LinkKind::DecShift | LinkKind::UmeShift, Center::Curve(Curve::L00)) => Center::Curve(Curve::L10),
            (LinkKind::DecShift | LinkKind::UmeShift, Center::Curve(Curve::L10)) => Center::Curve(Curve::L00),
            (LinkKind::UmeToDec, _) => Center::Curve(Curve::L10),
            (LinkKind::F1ToP2, _) if !self.inverse => Center::MarkedFibre,
            (LinkKind::F1ToP2, _) => Center::Contraction,
            (LinkKind::U1ToV, _) if !self.inverse => Center::Curve(Curve::FiberOverMarkedPoint),
            (LinkKind::U1ToV, _) => Center::Contraction,
            (_, c) => c,
        };
        let involutive = matches!(self.kind, LinkKind::SchwarzInvolution | LinkKind::XSwap);
        LinkStep {
            source: self.target.clone(),
            target: self.source.clone(),
            center,
            kind: self.kind,
            inverse: if involutive { self.inverse } else { !self.inverse },
            fwd_equivariant: self.bwd_equivariant,
            bwd_equivariant: self.fwd_equivariant,
            strict: false,
        }
    }

    pub fn is_involution(&self) -> bool {
        self.kind == LinkKind::SchwarzInvolution
    }
}

impl fmt::Display for LinkStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inv = if self.inverse { "^-1" } else { "" };
        let eq = match (self.fwd_equivariant, self.bwd_equivariant) {
            (true, true) => "<=>",
            (true, false) if self.strict => "=>(strict)",
            (true, false) => "=>",
            (false, true) => "<=",
            (false, false) => "--",
        };
        write!(f, "{} --{}{}--> {} [{}]", self.source, self.kind, inv, self.target, eq)
    }
}

fn dec_curves(a: i64, b: i64, c: i64) -> BTreeSet<Curve> {
    let mut s = BTreeSet::new();
    if a * b > 0 || a * c < 0 {
        s.insert(Curve::L00);
    }
    if a * c > 0 {
        s.insert(Curve::L10);
    }
    s
}

pub fn invariant_curves(desc: &BundleDesc) -> BTreeSet<Curve> {
    match *desc {
        BundleDesc::DecFa { a, b, c } => dec_curves(a, b, c),
        BundleDesc::Umemura { c, .. } => {
            let mut s = BTreeSet::from([Curve::L00]);
            if c > 2 {
                s.insert(Curve::L10);
            }
            s
        }
        BundleDesc::Schwarz { b } if b >= 2 => BTreeSet::from([Curve::CSchwarz]),
        BundleDesc::HatSchwarz { .. } => BTreeSet::from([Curve::CSchwarz]),
        BundleDesc::V1 { .. } => BTreeSet::from([Curve::FiberOverMarkedPoint]),
        BundleDesc::Schwarz { .. } | BundleDesc::DecP2 { .. } => BTreeSet::new(),
        // unrecognized raw classes are not analysed
        BundleDesc::Raw(ref p) => identify(p).map(|d| invariant_curves(&d)).unwrap_or_default(),
    }
}

/// Whether the flags agree with the centre: a curve centre gives a forward
/// equivariant link exactly when the curve is invariant in the source.
pub fn flags_coherent(step: &LinkStep) -> bool {
    match step.center {
        Center::Curve(c) => step.fwd_equivariant == invariant_curves(&step.source).contains(&c),
        Center::Contraction | Center::None => step.fwd_equivariant,
        Center::MarkedFibre => !step.fwd_equivariant,
    }
}

fn step(source: BundleDesc, target: BundleDesc, center: Center, kind: LinkKind, fwd: bool, bwd: bool) -> LinkStep {
    LinkStep { source, target, center, kind, inverse: false, fwd_equivariant: fwd, bwd_equivariant: bwd, strict: false }
}

/// Blow-up of l00 followed by contraction: F_a^{b,c} -> F_a^{b+1,c+a}.
pub fn link_dec(a: i64, b: i64, c: i64) -> Result<LinkStep> {
    if a < 0 || b < 0 {
        return Err(Error::RangeViolation(format!("link_dec needs a, b >= 0, got ({a},{b},{c})")));
    }
    Ok(step(
        BundleDesc::DecFa { a, b, c },
        BundleDesc::DecFa { a, b: b + 1, c: c + a },
        Center::Curve(Curve::L00),
        LinkKind::DecShift,
        a * b > 0 || a * c < 0,
        a * (c + a) > 0,
    ))
}

/// F_a^{b,c} -> F_a^{b-1,c-a}. The target may have b = 0 and c > 0; see `xswap`.
pub fn link_dec_inverse(a: i64, b: i64, c: i64) -> Result<LinkStep> {
    if b < 1 {
        return Err(Error::RangeViolation(format!("inverse shift needs b >= 1, got ({a},{b},{c})")));
    }
    Ok(link_dec(a, b - 1, c - a)?.reversed())
}

/// F_a^{0,c} = F_a^{0,-c}, exchanging x0 and x1.
pub fn xswap(a: i64, c: i64) -> LinkStep {
    step(BundleDesc::DecFa { a, b: 0, c }, BundleDesc::DecFa { a, b: 0, c: -c }, Center::None, LinkKind::XSwap, true, true)
}

pub fn link_ume(a: i64, b: i64, c: i64) -> Result<LinkStep> {
    umemura_k(a, b, c).ok_or(Error::InvalidUmemura(a, b, c))?;
    Ok(step(
        BundleDesc::Umemura { a, b, c },
        BundleDesc::Umemura { a, b: b + 1, c: c + a },
        Center::Curve(Curve::L00),
        LinkKind::UmeShift,
        true,
        true,
    ))
}

/// U_a^{b,c} -> U_a^{b-1,c-a}, defined when k >= 1 and b >= 2.
pub fn link_ume_inverse(a: i64, b: i64, c: i64) -> Result<LinkStep> {
    let k = umemura_k(a, b, c).ok_or(Error::InvalidUmemura(a, b, c))?;
    if k < 1 || b < 2 {
        return Err(Error::RangeViolation(format!("no Umemura bundle below U({a},{b},{c})")));
    }
    Ok(link_ume(a, b - 1, c - a)?.reversed())
}

/// U_a^{1,a+2} -> F_a^{0,2}, stored as DecFa(a,0,-2).
pub fn link_ume_to_dec(a: i64) -> Result<LinkStep> {
    if a < 1 {
        return Err(Error::RangeViolation(format!("link_ume_to_dec needs a >= 1, got {a}")));
    }
    let mut s = step(
        BundleDesc::Umemura { a, b: 1, c: a + 2 },
        BundleDesc::DecFa { a, b: 0, c: -2 },
        Center::Curve(Curve::L10),
        LinkKind::UmeToDec,
        true,
        false,
    );
    s.strict = true;
    Ok(s)
}

/// F_1^{b,c} over the contraction F_1 -> P², landing on P_{|b-c|}.
pub fn link_f1_to_p2(b: i64, c: i64) -> Result<LinkStep> {
    let source = BundleDesc::DecFa { a: 1, b, c };
    source.validate().map_err(|_| Error::RangeViolation(format!("{source} is not a valid F_1 bundle")))?;
    let mut s = step(source, BundleDesc::DecP2 { b: (b - c).abs() }, Center::Contraction, LinkKind::F1ToP2, true, false);
    s.strict = true;
    Ok(s)
}

/// U_1^{b,2} -> V_1^b, an equality of groups for b >= 2; V_1^1 is S_1.
pub fn link_u1_to_v(b: i64) -> Result<LinkStep> {
    if b < 1 {
        return Err(Error::RangeViolation(format!("link_u1_to_v needs b >= 1, got {b}")));
    }
    let source = BundleDesc::Umemura { a: 1, b, c: 2 };
    Ok(if b >= 2 {
        step(source, BundleDesc::V1 { b }, Center::Contraction, LinkKind::U1ToV, true, true)
    } else {
        let mut s = step(source, BundleDesc::Schwarz { b: 1 }, Center::Contraction, LinkKind::U1ToV, true, false);
        s.strict = true;
        s
    })
}

/// Blow-up of the invariant curve D, contraction of the preimage of the conic.
pub fn schwarz_involution(b: i64) -> Result<LinkStep> {
    if b < 2 {
        return Err(Error::RangeViolation(format!("S_{b} has no invariant curve")));
    }
    let s = BundleDesc::Schwarz { b };
    Ok(step(s.clone(), s, Center::Curve(Curve::CSchwarz), LinkKind::SchwarzInvolution, true, true))
}

/// Ŝ_b -> F_0^{b+1,b+1}: blow up C, contract the surface over the diagonal.
pub fn hat_to_dec(b: i64) -> Result<LinkStep> {
    if b < 1 {
        return Err(Error::RangeViolation(format!("hat_to_dec needs b >= 1, got {b}")));
    }
    let mut s = step(
        BundleDesc::HatSchwarz { b },
        BundleDesc::DecFa { a: 0, b: b + 1, c: b + 1 },
        Center::Curve(Curve::CSchwarz),
        LinkKind::HatToDec,
        true,
        false,
    );
    s.strict = true;
    Ok(s)
}

/// Type of the restriction of V_1^b over a line: F_b through the marked point, F_|b-2| otherwise.
pub fn v1_restrict_line(b: i64, through_marked_point: bool) -> Result<i64> {
    if b < 1 {
        return Err(Error::RangeViolation(format!("V_1^b needs b >= 1, got {b}")));
    }
    Ok(if through_marked_point { b } else { (b - 2).abs() })
}

/// [[0,1],[-1,1/z]]·[[1,0],[z,z²]]·[[1,-z],[0,1]] = z·Id: U_1^{b,2} is trivial near s_{-1}.
pub fn v1_trivialization_identity() -> bool {
    let c = |n: i64| MPoly::constant(1, q(n));
    let z = MPoly::var(1, 0);
    let left: MMat = [[c(0), c(1)], [c(-1), MPoly::var_pow(1, 0, -1)]];
    let mid: MMat = [[c(1), c(0)], [z.clone(), MPoly::var_pow(1, 0, 2)]];
    let right: MMat = [[c(1), -&z], [c(0), c(1)]];
    mmat_mul(&mmat_mul(&left, &mid), &right) == [[z.clone(), c(0)], [c(0), z]]
}

/// Every link leaving `desc` that this calculus knows about, with its flags.
pub fn outgoing(desc: &BundleDesc) -> Vec<LinkStep> {
    let mut out = Vec::new();
    match *desc {
        BundleDesc::DecFa { a, b, c } => {
            out.extend(link_dec(a, b, c));
            if b >= 1 {
                out.extend(link_dec_inverse(a, b, c));
            }
            if b == 0 && c != 0 {
                out.push(xswap(a, c));
            }
            if a == 1 {
                out.extend(link_f1_to_p2(b, c));
            }
            if a >= 1 && b == 0 && c == -2 {
                out.extend(link_ume_to_dec(a).map(|s| s.reversed()));
            }
            if a == 0 && b >= 2 && c == b {
                out.extend(hat_to_dec(b - 1).map(|s| s.reversed()));
            }
        }
        BundleDesc::Umemura { a, b, c } => {
            out.extend(link_ume(a, b, c));
            out.extend(link_ume_inverse(a, b, c));
            if b == 1 && c == a + 2 {
                out.extend(link_ume_to_dec(a));
            }
            if a == 1 && c == 2 {
                out.extend(link_u1_to_v(b));
            }
        }
        BundleDesc::Schwarz { b } => {
            out.extend(schwarz_involution(b));
            if b == 1 {
                out.extend(link_u1_to_v(1).map(|s| s.reversed()));
            }
        }
        BundleDesc::V1 { b } => out.extend(link_u1_to_v(b).map(|s| s.reversed())),
        BundleDesc::HatSchwarz { b } => out.extend(hat_to_dec(b)),
        BundleDesc::DecP2 { .. } | BundleDesc::Raw(_) => {}
    }
    out
}
