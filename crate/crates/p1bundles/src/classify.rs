//! Maximality, stiffness and superstiffness of the connected automorphism
//! group, and explicit equivariant reduction to a maximal model.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bundles::{identify, umemura_k, BundleDesc};
use crate::error::{Error, Result};
use crate::links::{
    hat_to_dec, link_dec, link_dec_inverse, link_f1_to_p2, link_u1_to_v, link_ume_inverse, link_ume_to_dec, outgoing,
    xswap, LinkKind, LinkStep,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Reason {
    /// a = 0 or b = c = 0
    DecTrivialWindow,
    /// a >= 2 and -a < c < ab
    DecMaximalWindow,
    DecOverF1,
    DecOutsideWindow,
    DecP2,
    UmemuraMaximal,
    UmemuraNotMaximal,
    SchwarzHomogeneous,
    SchwarzInvolution,
    V1Contraction,
    HatSchwarzDescends,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Verdict {
    pub maximal: bool,
    pub stiff: bool,
    pub superstiff: bool,
    pub reason: Reason,
}

impl Verdict {
    fn new(maximal: bool, stiff: bool, superstiff: bool, reason: Reason) -> Self {
        Verdict { maximal, stiff, superstiff, reason }
    }

    pub fn glyphs(&self) -> &'static str {
        match (self.maximal, self.stiff, self.superstiff) {
            (true, true, true) => "M,S,SS",
            (true, true, false) => "M,S",
            (true, false, _) => "M",
            _ => "-",
        }
    }
}

fn resolve(desc: &BundleDesc) -> Result<BundleDesc> {
    desc.validate().map_err(|e| Error::InvalidDescriptor(format!("{desc}: {e}")))?;
    match desc {
        BundleDesc::Raw(p) => identify(p).ok_or_else(|| {
            Error::UnsupportedFamily(format!("{desc} is not the canonical form of a named family"))
        }),
        d => Ok(d.clone()),
    }
}

pub fn verdict(desc: &BundleDesc) -> Result<Verdict> {
    use Reason::*;
    Ok(match resolve(desc)? {
        BundleDesc::DecFa { a, b, c } => {
            if a == 0 || (b == 0 && c == 0 && a != 1) {
                Verdict::new(true, true, true, DecTrivialWindow)
            } else if a == 1 {
                Verdict::new(false, false, false, DecOverF1)
            } else if -a < c && c < a * b {
                Verdict::new(true, false, false, DecMaximalWindow)
            } else {
                Verdict::new(false, false, false, DecOutsideWindow)
            }
        }
        BundleDesc::DecP2 { .. } => Verdict::new(true, true, true, DecP2),
        BundleDesc::Umemura { a, b, c } => {
            let e = c - a * b;
            if (a >= 2 && e < 2) || (a == 1 && e < 1) {
                Verdict::new(true, false, false, UmemuraMaximal)
            } else {
                Verdict::new(false, false, false, UmemuraNotMaximal)
            }
        }
        BundleDesc::Schwarz { b: 1 } => Verdict::new(true, true, true, SchwarzHomogeneous),
        BundleDesc::Schwarz { .. } => Verdict::new(true, true, false, SchwarzInvolution),
        BundleDesc::V1 { .. } => Verdict::new(true, false, false, V1Contraction),
        BundleDesc::HatSchwarz { .. } => Verdict::new(false, false, false, HatSchwarzDescends),
        BundleDesc::Raw(_) => unreachable!("resolved above"),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionResult {
    pub target: BundleDesc,
    pub chain: Vec<LinkStep>,
}

fn push(chain: &mut Vec<LinkStep>, s: LinkStep) -> BundleDesc {
    let t = s.target.clone();
    chain.push(s);
    t
}

/// Deterministic chain of forward-equivariant links to a maximal model,
/// using the fewest shifts that reach the maximal window.
pub fn maximal_model(desc: &BundleDesc) -> Result<ReductionResult> {
    let mut cur = resolve(desc)?;
    let mut chain = Vec::new();
    while !verdict(&cur)?.maximal {
        cur = match cur {
            BundleDesc::DecFa { a: 1, b, c } => push(&mut chain, link_f1_to_p2(b, c)?),
            BundleDesc::DecFa { a, b, c } if c >= a * b => {
                let (mut b, mut c) = (b, c);
                while b > 0 {
                    push(&mut chain, link_dec_inverse(a, b, c)?);
                    b -= 1;
                    c -= a;
                }
                if c > 0 {
                    push(&mut chain, xswap(a, c));
                    c = -c;
                    for _ in 0..(-c) / a {
                        push(&mut chain, link_dec(a, b, c)?);
                        b += 1;
                        c += a;
                    }
                }
                BundleDesc::DecFa { a, b, c }
            }
            BundleDesc::DecFa { a, b, c } => {
                let (mut b, mut c) = (b, c);
                for _ in 0..(-c) / a {
                    push(&mut chain, link_dec(a, b, c)?);
                    b += 1;
                    c += a;
                }
                BundleDesc::DecFa { a, b, c }
            }
            BundleDesc::Umemura { a, b, c } => {
                let k = umemura_k(a, b, c).ok_or(Error::InvalidUmemura(a, b, c))?;
                let (mut b, mut c) = (b, c);
                if k == b {
                    while b > 1 {
                        push(&mut chain, link_ume_inverse(a, b, c)?);
                        b -= 1;
                        c -= a;
                    }
                    push(&mut chain, link_ume_to_dec(a)?)
                } else {
                    // a = 1 and k = b - 1
                    while b > 1 {
                        push(&mut chain, link_ume_inverse(a, b, c)?);
                        b -= 1;
                        c -= a;
                    }
                    push(&mut chain, link_u1_to_v(1)?)
                }
            }
            BundleDesc::HatSchwarz { b } => push(&mut chain, hat_to_dec(b)?),
            other => return Err(Error::UnsupportedFamily(format!("no reduction rule for {other}"))),
        };
    }
    Ok(ReductionResult { target: cur, chain })
}

/// Descriptor with the b = 0 sign convention applied.
pub fn normal_desc(d: &BundleDesc) -> BundleDesc {
    match *d {
        BundleDesc::DecFa { a, b: 0, c } => BundleDesc::DecFa { a, b: 0, c: -c.abs() },
        ref other => other.clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkGraph {
    pub nodes: BTreeMap<BundleDesc, Verdict>,
    pub edges: BTreeSet<LinkStep>,
}

/// Everything reachable from `desc` in at most `radius` forward-equivariant
/// links. Sign swaps are folded into the nodes.
pub fn link_graph(desc: &BundleDesc, radius: usize) -> Result<LinkGraph> {
    let start = normal_desc(&resolve(desc)?);
    let mut nodes = BTreeMap::new();
    let mut edges = BTreeSet::new();
    let mut queue = VecDeque::from([(start.clone(), 0usize)]);
    nodes.insert(start.clone(), verdict(&start)?);
    while let Some((d, dist)) = queue.pop_front() {
        if dist == radius {
            continue;
        }
        for s in outgoing(&d) {
            if !s.fwd_equivariant || s.kind == LinkKind::XSwap {
                continue;
            }
            let mut s = s;
            s.target = normal_desc(&s.target);
            if s.target.validate().is_err() {
                continue;
            }
            if !nodes.contains_key(&s.target) {
                nodes.insert(s.target.clone(), verdict(&s.target)?);
                queue.push_back((s.target.clone(), dist + 1));
            }
            if s.bwd_equivariant {
                let mut r = s.reversed();
                r.strict = false;
                edges.insert(r);
            }
            edges.insert(s);
        }
    }
    Ok(LinkGraph { nodes, edges })
}

impl LinkGraph {
    pub fn to_dot(&self) -> String {
        let ids: BTreeMap<&BundleDesc, usize> = self.nodes.keys().enumerate().map(|(i, d)| (d, i)).collect();
        let mut out = String::from("strict digraph links {\n");
        for (d, v) in &self.nodes {
            let _ = writeln!(out, "  n{} [label=\"{} [{}]\"];", ids[d], d, v.glyphs());
        }
        let mut arcs: Vec<(usize, usize, String)> = self
            .edges
            .iter()
            .map(|s| {
                let inv = if s.inverse { "^-1" } else { "" };
                (ids[&s.source], ids[&s.target], format!("{}{}", s.kind, inv))
            })
            .collect();
        arcs.sort();
        arcs.dedup();
        for (i, j, label) in arcs {
            let _ = writeln!(out, "  n{i} -> n{j} [label=\"{label}\"];");
        }
        out.push_str("}\n");
        out
    }
}

/// All valid descriptors of DecFa, DecP2, Umemura, Schwarz and V1 within the
/// bounds, ordered by family, a, b, then c (|c| when b = 0).
pub fn enumerate(a_max: i64, b_max: i64, c_abs_max: i64) -> Vec<(BundleDesc, Verdict)> {
    let mut descs = Vec::new();
    for a in 0..=a_max {
        for b in 0..=b_max {
            if b == 0 {
                descs.extend((0..=c_abs_max).map(|n| BundleDesc::DecFa { a, b, c: -n }));
            } else {
                descs.extend((-c_abs_max..=c_abs_max).map(|c| BundleDesc::DecFa { a, b, c }));
            }
        }
    }
    descs.extend((0..=b_max).map(|b| BundleDesc::DecP2 { b }));
    for a in 1..=a_max {
        for b in 1..=b_max {
            for k in 0..=b {
                let c = a * k + 2;
                if c <= c_abs_max {
                    descs.push(BundleDesc::Umemura { a, b, c });
                }
            }
        }
    }
    descs.extend((1..=b_max).map(|b| BundleDesc::Schwarz { b }));
    descs.extend((2..=b_max).map(|b| BundleDesc::V1 { b }));
    descs
        .into_iter()
        .map(|d| {
            let v = verdict(&d).expect("enumerated descriptors are valid");
            (d, v)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dec(a: i64, b: i64, c: i64) -> BundleDesc {
        BundleDesc::DecFa { a, b, c }
    }

    #[test]
    fn verdict_examples() {
        let v = verdict(&dec(0, 3, -2)).unwrap();
        assert!(v.maximal && v.superstiff);
        let v = verdict(&BundleDesc::Umemura { a: 2, b: 2, c: 4 }).unwrap();
        assert!(v.maximal && !v.stiff);
        assert!(!verdict(&BundleDesc::Umemura { a: 1, b: 2, c: 3 }).unwrap().maximal);
        let v = verdict(&dec(2, 1, 1)).unwrap();
        assert_eq!((v.maximal, v.stiff, v.superstiff), (true, false, false));
        assert!(verdict(&dec(-1, 0, 0)).is_err());
    }

    #[test]
    fn reduction_examples() {
        let r = maximal_model(&dec(2, 1, 2)).unwrap();
        assert_eq!(r.target, dec(2, 0, 0));
        assert_eq!(r.chain.len(), 1);
        let r = maximal_model(&dec(2, 0, -4)).unwrap();
        assert_eq!(r.target, dec(2, 2, 0));
        assert_eq!(r.chain.len(), 2);
        let r = maximal_model(&BundleDesc::Umemura { a: 1, b: 3, c: 4 }).unwrap();
        let path: Vec<_> = r.chain.iter().map(|s| s.target.to_string()).collect();
        assert_eq!(path, ["Umemura(1,2,3)", "Umemura(1,1,2)", "Schwarz(1)"]);
        assert_eq!(maximal_model(&dec(1, 2, 1)).unwrap().target, BundleDesc::DecP2 { b: 1 });
        assert!(maximal_model(&dec(3, 1, 1)).unwrap().chain.is_empty());
    }

    #[test]
    fn graphs() {
        let g = link_graph(&dec(0, 1, 0), 5).unwrap();
        assert_eq!((g.nodes.len(), g.edges.len()), (1, 0));
        let g = link_graph(&BundleDesc::Umemura { a: 2, b: 2, c: 4 }, 2).unwrap();
        let names: Vec<_> = g.nodes.keys().map(|d| d.to_string()).collect();
        assert_eq!(names, ["Umemura(2,1,2)", "Umemura(2,2,4)", "Umemura(2,3,6)", "Umemura(2,4,8)"]);
        let g = link_graph(&BundleDesc::Schwarz { b: 3 }, 1).unwrap();
        assert_eq!(g.nodes.len(), 1);
        assert!(g.to_dot().contains("n0 -> n0 [label=\"SchwarzInvolution\"]"));
    }

    #[test]
    fn enumerate_examples() {
        let names: Vec<_> = enumerate(0, 1, 1).into_iter().map(|(d, _)| d.to_string()).collect();
        assert_eq!(
            names,
            [
                "DecFa(0,0,0)",
                "DecFa(0,0,-1)",
                "DecFa(0,1,-1)",
                "DecFa(0,1,0)",
                "DecFa(0,1,1)",
                "DecP2(0)",
                "DecP2(1)",
                "Schwarz(1)"
            ]
        );
        let names: Vec<_> = enumerate(0, 0, 0).into_iter().map(|(d, _)| d.to_string()).collect();
        assert_eq!(names, ["DecFa(0,0,0)", "DecP2(0)"]);
        let t = enumerate(1, 1, 2);
        let (_, v) = t.iter().find(|(d, _)| *d == BundleDesc::Umemura { a: 1, b: 1, c: 2 }).unwrap();
        assert!(!v.maximal);
    }
}
