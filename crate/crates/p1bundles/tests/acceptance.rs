//! Acceptance criteria, one PASS/FAIL line each; exits nonzero on failure.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use p1bundles::bundles::{binomial_identity, canonical_p_of, normalize, BundleDesc, CanonicalP, NumericalInvariants};
use p1bundles::classify::{enumerate, maximal_model, verdict};
use p1bundles::exactalg::{q, BiHomogLaurent, LaurentPoly, MPoly, TruncPoly, Q};
use p1bundles::links::flags_coherent;
use p1bundles::moduli::{act_symr, dim_moduli, gl2, gl2_mul, is_fixed_diag, random_gl2, upper_triangular_identity, ModuliPoint};
use p1bundles::schwarzenberger::{
    h_parity_check, hat_blowdown_check, involution_identity_check, lift_identity_check, schwarz_matrix,
    substitution_identity,
};
use p1bundles::transitions::{detect_jumps, parse_transition, remove_jumps};

fn small_rat(rng: &mut ChaCha8Rng) -> Q {
    Q::new(rng.gen_range(-7i64..=7).into(), rng.gen_range(1i64..=4).into())
}

fn nonzero_rat(rng: &mut ChaCha8Rng) -> Q {
    loop {
        let c = small_rat(rng);
        if !c.is_zero() {
            return c;
        }
    }
}

fn random_trunc(rng: &mut ChaCha8Rng, r: usize) -> TruncPoly {
    TruncPoly::new(r, (0..=r).map(|_| small_rat(rng)).collect())
}

// Theorem A, restated from scratch.
fn maximal_by_statement(d: &BundleDesc) -> bool {
    match *d {
        BundleDesc::DecFa { a, b, c } => a == 0 || (b == 0 && c == 0 && a != 1) || (a >= 2 && -a < c && c < a * b),
        BundleDesc::Umemura { a, b, c } => (a >= 2 && c - a * b < 2) || (a == 1 && c - a * b < 1),
        BundleDesc::Schwarz { b } => b >= 1,
        BundleDesc::DecP2 { b } => b >= 0,
        BundleDesc::V1 { b } => b >= 2,
        _ => false,
    }
}

fn criterion_1() {
    let table = enumerate(4, 6, 12);
    let got: BTreeSet<_> = table.iter().filter(|(_, v)| v.maximal).map(|(d, _)| d.clone()).collect();
    let want: BTreeSet<_> = table.iter().map(|(d, _)| d.clone()).filter(maximal_by_statement).collect();
    assert_eq!(got, want);
    // the box really contains every family
    for fam in ["DecFa", "DecP2", "Umemura", "Schwarz", "V1"] {
        assert!(table.iter().any(|(d, _)| d.family() == fam), "{fam}");
    }
}

fn criterion_2() {
    let table = enumerate(4, 6, 12);
    for (d, v) in &table {
        assert!(!v.superstiff || v.stiff, "{d}");
        assert!(!v.stiff || v.maximal, "{d}");
        let superstiff = match *d {
            BundleDesc::DecFa { a, b, c } => a == 0 || (b == 0 && c == 0 && a != 1),
            BundleDesc::DecP2 { .. } => true,
            BundleDesc::Schwarz { b } => b == 1,
            _ => false,
        };
        let stiff = superstiff || matches!(*d, BundleDesc::Schwarz { b } if b >= 2);
        assert_eq!(v.superstiff, superstiff, "{d}");
        assert_eq!(v.stiff, stiff, "{d}");
    }
}

fn criterion_3() {
    let dims: Vec<i64> = (1..=6).map(|b| dim_moduli(0, b, b + 2).unwrap()).collect();
    assert_eq!(dims, [3, 8, 15, 24, 35, 48]);
    for b in 1..=6i64 {
        assert_eq!(dim_moduli(0, b, b + 2).unwrap(), (b + 1) * (b + 1) - 1);
    }
    assert_eq!(dim_moduli(2, 3, 4).unwrap(), 3);
    assert_eq!(dim_moduli(1, 2, 2).unwrap(), 0);
}

fn criterion_4() {
    let swap = gl2(0, 1, 1, 0);
    for r in 0..=8usize {
        for i in 0..=r {
            let got = act_symr(&swap, &TruncPoly::monomial(r, i, q(1))).unwrap();
            assert_eq!(got, TruncPoly::monomial(r, r - i, q(1)), "r = {r}, i = {i}");
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let r = rng.gen_range(0..=8);
        let p = random_trunc(&mut rng, r);
        let (al, be, de) = (nonzero_rat(&mut rng), small_rat(&mut rng), nonzero_rat(&mut rng));
        assert!(upper_triangular_identity(&al, &be, &de, &p).unwrap());
    }
    for _ in 0..50 {
        let r = rng.gen_range(0..=8);
        let p = random_trunc(&mut rng, r);
        let (g, h) = (random_gl2(&mut rng), random_gl2(&mut rng));
        let lhs = act_symr(&g, &act_symr(&h, &p).unwrap()).unwrap();
        assert_eq!(lhs, act_symr(&gl2_mul(&g, &h), &p).unwrap());
    }
}

fn criterion_5() {
    let mut pascal = vec![vec![BigInt::from(1)]];
    for n in 1..=13usize {
        let prev = &pascal[n - 1];
        let row: Vec<BigInt> = (0..=n)
            .map(|k| {
                let left = if k > 0 { prev[k - 1].clone() } else { BigInt::zero() };
                let right = prev.get(k).cloned().unwrap_or_default();
                left + right
            })
            .collect();
        pascal.push(row);
    }
    let mut cases = 0;
    for r in 0..=12i64 {
        for p in 0..=r {
            for k in 0..=p {
                let (lhs, rhs) = binomial_identity(r, p, k).unwrap();
                assert_eq!(lhs, rhs, "(r, p, k) = ({r}, {p}, {k})");
                assert_eq!(lhs, pascal[(r + 1) as usize][(p - k) as usize]);
                cases += 1;
            }
        }
    }
    assert_eq!(cases, 455);
}

fn criterion_6() {
    for a in 1..=3i64 {
        for b in 1..=4i64 {
            for k in 0..=b {
                let d = BundleDesc::Umemura { a, b, c: a * k + 2 };
                let m = ModuliPoint::new(canonical_p_of(&d).unwrap()).unwrap();
                assert!(is_fixed_diag(a, &m, 6), "{d}");
            }
        }
    }
    for b in 1..=4 {
        let m = ModuliPoint::new(canonical_p_of(&BundleDesc::HatSchwarz { b }).unwrap()).unwrap();
        assert!(is_fixed_diag(0, &m, 6), "HatSchwarz({b})");
    }
    let inv = NumericalInvariants::new(0, 1, 3);
    let perturbed = CanonicalP::from_rows(inv, vec![vec![q(1), q(0)], vec![q(0), q(0)]]).unwrap();
    assert!(!is_fixed_diag(0, &ModuliPoint::new(perturbed).unwrap(), 6));
}

fn criterion_7() {
    for b in 0..=8 {
        assert!(substitution_identity(b).unwrap(), "substitution b = {b}");
    }
    let c = |n: i64| MPoly::constant(2, q(n));
    let u = MPoly::var(2, 0);
    let v = MPoly::var(2, 1);
    assert_eq!(schwarz_matrix(-1).unwrap().entries, [[c(1), c(0)], [c(0), -&v]]);
    assert_eq!(schwarz_matrix(0).unwrap().entries, [[c(0), c(-1)], [c(1), c(0)]]);
    assert_eq!(schwarz_matrix(1).unwrap().entries, [[c(1), c(0)], [u, v]]);
    for b in 2..=6 {
        assert!(involution_identity_check(b), "involution b = {b}");
    }
    for n in 0..=12 {
        assert!(h_parity_check(n), "parity n = {n}");
    }
    for b in 1..=4 {
        assert!(lift_identity_check(b), "lift b = {b}");
        assert!(hat_blowdown_check(b), "blow-down b = {b}");
    }
}

fn criterion_8() {
    let oracle_b = |m: &p1bundles::transitions::TransitionMat, x: &Q| {
        let (hi, lo) = common::splitting(&m.eval_x(x).expect("no pole"));
        hi - lo
    };
    let a = parse_transition("y, x; 0, y^-1").unwrap();
    let rep = detect_jumps(&a).unwrap();
    assert_eq!((rep.generic_b, rep.jumps.clone()), (0, vec![(q(0), 1)]));
    assert_eq!((oracle_b(&a, &q(3)), oracle_b(&a, &q(0))), (0, 2));
    let fixed = remove_jumps(&a).unwrap();
    assert_eq!(fixed.steps.len(), 1);
    assert!(detect_jumps(&fixed.matrix).unwrap().jumps.is_empty());
    assert_eq!(oracle_b(&fixed.matrix, &q(0)), 0);
    let a2 = parse_transition("y, x^2; 0, y^-1").unwrap();
    assert_eq!(remove_jumps(&a2).unwrap().steps.len(), 2);

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let pl = common::planted(&mut rng);
        let rep = detect_jumps(&pl.matrix).unwrap();
        for (lambda, eps) in &rep.jumps {
            assert_eq!(oracle_b(&pl.matrix, lambda), rep.generic_b + 2 * eps);
        }
        let fixed = remove_jumps(&pl.matrix).unwrap();
        assert!(fixed.degree_trace.windows(2).all(|w| w[1] < w[0]), "{:?}", fixed.degree_trace);
        assert!(detect_jumps(&fixed.matrix).unwrap().jumps.is_empty());
        for (r, _) in &pl.roots {
            assert_eq!(oracle_b(&fixed.matrix, r), rep.generic_b);
        }
    }
}

fn random_form(rng: &mut ChaCha8Rng, b: usize, lo: i64, hi: i64) -> BiHomogLaurent {
    BiHomogLaurent::new(
        (0..=b)
            .map(|_| LaurentPoly::from_terms((0..4).map(|_| (rng.gen_range(lo..=hi), small_rat(rng)))))
            .collect(),
    )
}

fn criterion_9() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (a, b, c) in [(1i64, 2usize, 4i64), (2, 3, 5), (0, 2, 4)] {
        let base = random_form(&mut rng, b, 0, c);
        let want = normalize(a, b as i64, c, &base).unwrap();
        for _ in 0..100 {
            let lambda = nonzero_rat(&mut rng);
            let q1 = random_form(&mut rng, b, 0, 3);
            let q2 = random_form(&mut rng, b, 0, 3);
            let rows = (0..=b)
                .map(|i| {
                    let mut row = base.row(i).scale(&lambda);
                    for (e, x) in q1.row(i).terms() {
                        row.add_term(e + c, x.clone());
                    }
                    // Q2(y0 z^a, y1, 1/z)
                    for (e, x) in q2.row(i).terms() {
                        row.add_term(a * i as i64 - e, x.clone());
                    }
                    row
                })
                .collect();
            assert_eq!(normalize(a, b as i64, c, &BiHomogLaurent::new(rows)).unwrap(), want);
        }
    }
}

fn criterion_10() {
    for (d, v) in enumerate(4, 6, 12) {
        if v.maximal {
            continue;
        }
        let r = maximal_model(&d).unwrap();
        assert!(!r.chain.is_empty(), "{d}");
        assert!(r.chain.iter().all(|s| s.fwd_equivariant && flags_coherent(s)), "{d}");
        assert!(verdict(&r.target).unwrap().maximal, "{d}");
    }
    let golden = [
        (BundleDesc::DecFa { a: 1, b: 2, c: 1 }, BundleDesc::DecP2 { b: 1 }),
        (BundleDesc::Umemura { a: 1, b: 3, c: 4 }, BundleDesc::Schwarz { b: 1 }),
        (BundleDesc::DecFa { a: 2, b: 0, c: -4 }, BundleDesc::DecFa { a: 2, b: 2, c: 0 }),
    ];
    for (src, dst) in golden {
        assert_eq!(maximal_model(&src).unwrap().target, dst);
    }
}

fn main() -> ExitCode {
    let criteria: [(u32, fn()); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = 0;
    for (n, f) in criteria {
        let ok = catch_unwind(AssertUnwindSafe(f)).is_ok();
        println!("criterion {n}: {}", if ok { "PASS" } else { "FAIL" });
        failed += usize::from(!ok);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
