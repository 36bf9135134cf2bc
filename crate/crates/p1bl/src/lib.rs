//! Command-line front end. `run` is the whole program; `main` only wires it
//! to the process streams.

use std::io::Write;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use p1bundles::bundles::{binomial_identity, identify, normalize, BundleDesc, CanonicalP, NumericalInvariants};
use p1bundles::classify::{enumerate, link_graph, maximal_model, verdict, Verdict};
use p1bundles::exactalg::{fmt_q, parse_q, BiHomogLaurent, LaurentPoly, MPoly, TruncPoly, Q};
use p1bundles::json::{laurent_from_json, q_to_json, q_vec_from_json};
use p1bundles::moduli::{act_on_raw, act_symr, dim_moduli, gl2, gl2_mul, random_gl2, upper_triangular_identity, FaGenerator, Gl2};
use p1bundles::schwarzenberger::{
    det_sym, h_parity_check, hat_blowdown_check, involution_identity_check, lift_identity_check, schwarz_matrix,
    special_iso, substitution_identity, ST, UV,
};
use p1bundles::transitions::{detect_jumps, parse_transition, remove_jumps, transition_from_json, transition_to_json, TransitionMat};
use p1bundles::Error;

#[derive(Parser, Debug)]
#[command(name = "p1bl", version, about = "Exact computations with P1-bundles over Hirzebruch surfaces and P2")]
struct Cli {
    /// Print a single JSON document instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Maximality and stiffness verdict for a bundle.
    Classify(DescArgs),
    /// Chain of links to a maximal model.
    Reduce(DescArgs),
    /// Classification table over a box of parameters.
    Enumerate {
        #[arg(long, default_value_t = 3)]
        a_max: i64,
        #[arg(long, default_value_t = 4)]
        b_max: i64,
        #[arg(long, default_value_t = 8)]
        c_max: i64,
    },
    /// Dimension of the moduli space of (a, b, c).
    ModuliDim {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long)]
        c: i64,
    },
    /// Apply one generator of the automorphism group to a canonical form.
    Act(ActArgs),
    /// Canonical form of a raw bihomogeneous form.
    Normalize {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long)]
        c: i64,
        /// JSON array of b+1 rows, each {"exp": [num, den], ...}
        #[arg(long)]
        raw: String,
    },
    /// Schwarzenberger transition matrix in u, v and in s, t.
    Schwarz {
        #[arg(long)]
        b: i64,
    },
    /// Jumping fibres of a transition matrix over A1 x P1.
    Jumps {
        /// `e00, e01; e10, e11` in x and y, or the JSON encoding
        #[arg(long)]
        matrix: String,
        /// Also remove the jumps by elementary modifications.
        #[arg(long)]
        remove: bool,
    },
    /// Link graph around a bundle, as DOT (or JSON with --json).
    Graph {
        #[command(flatten)]
        desc: DescArgs,
        #[arg(long, default_value_t = 2)]
        radius: usize,
    },
    /// Run the identity battery.
    Selftest,
}

#[derive(Args, Debug)]
struct DescArgs {
    /// DecFa, DecP2, Umemura, Schwarz, V1 or HatSchwarz
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    a: Option<i64>,
    #[arg(long)]
    b: Option<i64>,
    #[arg(long)]
    c: Option<i64>,
    /// Whole descriptor, e.g. `DecFa(2,1,1)` or its JSON form.
    #[arg(long, conflicts_with_all = ["family", "a", "b", "c"])]
    desc: Option<String>,
}

#[derive(Args, Debug)]
struct ActArgs {
    #[arg(long)]
    a: i64,
    #[arg(long)]
    b: i64,
    #[arg(long)]
    c: i64,
    /// JSON array of the b+1 coefficient rows of the canonical form.
    #[arg(long)]
    rows: String,
    /// z-GL2 element `a,b,c,d`
    #[arg(long, group = "generator")]
    z_gl2: Option<String>,
    /// y-GL2 element `a,b,c,d` (a = 0 only)
    #[arg(long, group = "generator")]
    y_gl2: Option<String>,
    /// shear coefficients `r0,...,ra` (a >= 1 only)
    #[arg(long, group = "generator")]
    shear: Option<String>,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnresolvedJump(_) | Error::NotNormalizedAtLambda(_) | Error::ZeroConstantTerm | Error::SingularMatrix => {
                Failure::Internal(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// Output of one subcommand, in both renderings.
struct Report {
    json: Value,
    text: String,
    ok: bool,
}

impl Report {
    fn new(json: Value, text: String) -> Self {
        Report { json, text, ok: true }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    // c is routinely negative
    let cmd = Cli::command().mut_subcommands(|s| s.allow_negative_numbers(true));
    let cli = match cmd.try_get_matches_from(args).and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let report = match dispatch(&cli.cmd) {
        Ok(r) => r,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            return 2;
        }
        Err(Failure::Internal(m)) => {
            let _ = writeln!(err, "internal error: {m}");
            return 1;
        }
    };
    let mut doc = if cli.json {
        serde_json::to_string_pretty(&report.json).expect("values serialize")
    } else {
        report.text
    };
    if !doc.ends_with('\n') {
        doc.push('\n');
    }
    let written = match &cli.out {
        Some(path) => std::fs::write(path, doc),
        None => out.write_all(doc.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "internal error: cannot write output: {e}");
        return 1;
    }
    if report.ok {
        0
    } else {
        1
    }
}

fn dispatch(cmd: &Cmd) -> Result<Report, Failure> {
    match cmd {
        Cmd::Classify(d) => classify_cmd(&d.resolve()?),
        Cmd::Reduce(d) => reduce_cmd(&d.resolve()?),
        Cmd::Enumerate { a_max, b_max, c_max } => {
            if *a_max < 0 || *b_max < 0 || *c_max < 0 {
                return Err(Failure::Usage("enumeration bounds must be non-negative".into()));
            }
            Ok(enumerate_cmd(*a_max, *b_max, *c_max))
        }
        Cmd::ModuliDim { a, b, c } => {
            let d = dim_moduli(*a, *b, *c)?;
            Ok(Report::new(json!({"a": a, "b": b, "c": c, "dim": d}), d.to_string()))
        }
        Cmd::Act(args) => act_cmd(args),
        Cmd::Normalize { a, b, c, raw } => normalize_cmd(*a, *b, *c, raw),
        Cmd::Schwarz { b } => schwarz_cmd(*b),
        Cmd::Jumps { matrix, remove } => jumps_cmd(matrix, *remove),
        Cmd::Graph { desc, radius } => {
            let g = link_graph(&desc.resolve()?, *radius)?;
            let nodes: Vec<Value> = g.nodes.iter().map(|(d, v)| verdict_json(d, v)).collect();
            let edges = serde_json::to_value(&g.edges).map_err(|e| Failure::Internal(e.to_string()))?;
            Ok(Report::new(json!({"nodes": nodes, "edges": edges}), g.to_dot()))
        }
        Cmd::Selftest => Ok(selftest()),
    }
}

impl DescArgs {
    fn resolve(&self) -> Result<BundleDesc, Failure> {
        if let Some(s) = &self.desc {
            let s = s.trim();
            return Ok(if s.starts_with('{') {
                let v: Value = serde_json::from_str(s).map_err(|e| Failure::Usage(format!("bad JSON: {e}")))?;
                BundleDesc::from_json(&v)?
            } else {
                s.parse()?
            });
        }
        let family = self.family.as_deref().ok_or_else(|| Failure::Usage("need --family or --desc".into()))?;
        // everything goes through the JSON schema so there is one validation path
        let mut v = json!({"family": family});
        for (k, x) in [("a", self.a), ("b", self.b), ("c", self.c)] {
            if let Some(x) = x {
                v[k] = json!(x);
            }
        }
        Ok(BundleDesc::from_json(&v)?)
    }
}

fn verdict_json(d: &BundleDesc, v: &Verdict) -> Value {
    json!({
        "descriptor": d.to_json(),
        "maximal": v.maximal,
        "stiff": v.stiff,
        "superstiff": v.superstiff,
        "reason": format!("{:?}", v.reason),
    })
}

fn classify_cmd(d: &BundleDesc) -> Result<Report, Failure> {
    let v = verdict(d)?;
    let text = format!("{d}: {} ({:?})", v.glyphs(), v.reason);
    Ok(Report::new(verdict_json(d, &v), text))
}

fn reduce_cmd(d: &BundleDesc) -> Result<Report, Failure> {
    let r = maximal_model(d)?;
    let mut text = String::new();
    if r.chain.is_empty() {
        text.push_str(&format!("{d} is already maximal\n"));
    }
    for s in &r.chain {
        text.push_str(&format!("{s}\n"));
    }
    text.push_str(&format!("maximal model: {}", r.target));
    let chain = serde_json::to_value(&r.chain).map_err(|e| Failure::Internal(e.to_string()))?;
    Ok(Report::new(json!({"source": d.to_json(), "target": r.target.to_json(), "chain": chain}), text))
}

fn enumerate_cmd(a_max: i64, b_max: i64, c_max: i64) -> Report {
    let rows = enumerate(a_max, b_max, c_max);
    let text = rows
        .iter()
        .map(|(d, v)| format!("{:<20} {:<7} {:?}", d.to_string(), v.glyphs(), v.reason))
        .collect::<Vec<_>>()
        .join("\n");
    Report::new(Value::Array(rows.iter().map(|(d, v)| verdict_json(d, v)).collect()), text)
}

fn parse_gl2(s: &str) -> Result<Gl2, Failure> {
    let xs = s.split(',').map(|t| parse_q(t.trim())).collect::<Result<Vec<Q>, _>>()?;
    match <[Q; 4]>::try_from(xs) {
        Ok([a, b, c, d]) => Ok((a, b, c, d)),
        Err(_) => Err(Failure::Usage(format!("expected four entries a,b,c,d, got {s:?}"))),
    }
}

fn parse_json(s: &str) -> Result<Value, Failure> {
    serde_json::from_str(s).map_err(|e| Failure::Usage(format!("bad JSON: {e}")))
}

fn act_cmd(args: &ActArgs) -> Result<Report, Failure> {
    let inv = NumericalInvariants::new(args.a, args.b, args.c);
    let rows = parse_json(&args.rows)?;
    let rows = rows
        .as_array()
        .ok_or_else(|| Failure::Usage("--rows must be a JSON array".into()))?
        .iter()
        .map(q_vec_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    let p = CanonicalP::from_rows(inv, rows)?;
    let gen = match (&args.z_gl2, &args.y_gl2, &args.shear) {
        (Some(s), _, _) => FaGenerator::ZGl2(parse_gl2(s)?),
        (_, Some(s), _) => FaGenerator::YGl2(parse_gl2(s)?),
        (_, _, Some(s)) => {
            FaGenerator::Shear(s.split(',').map(|t| parse_q(t.trim())).collect::<Result<Vec<_>, _>>()?)
        }
        _ => return Err(Failure::Usage("need one of --z-gl2, --y-gl2, --shear".into())),
    };
    let moved = act_on_raw(inv, &gen, &p.embed())?;
    Ok(Report::new(moved.to_json(), moved.to_string()))
}

fn normalize_cmd(a: i64, b: i64, c: i64, raw: &str) -> Result<Report, Failure> {
    let v = parse_json(raw)?;
    let rows = v
        .as_array()
        .ok_or_else(|| Failure::Usage("--raw must be a JSON array of rows".into()))?
        .iter()
        .map(laurent_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    let p = normalize(a, b, c, &BiHomogLaurent::new(rows))?;
    let named = identify(&p);
    let mut doc = p.to_json();
    doc["identified"] = named.as_ref().map_or(Value::Null, BundleDesc::to_json);
    let mut text = p.to_string();
    if let Some(d) = named {
        text.push_str(&format!("\nidentified as {d}"));
    }
    Ok(Report::new(doc, text))
}

fn schwarz_cmd(b: i64) -> Result<Report, Failure> {
    let m = schwarz_matrix(b)?;
    let st = m.in_st();
    let grid = |mm: &[[MPoly; 2]; 2], names: &[&str]| {
        json!(mm.iter().map(|row| row.iter().map(|p| p.fmt_with(names)).collect::<Vec<_>>()).collect::<Vec<_>>())
    };
    let iso = special_iso(b).ok().map(|s| s.desc());
    let mut text = format!("u,v: {}\ns,t: {}", m.fmt_uv(), m.fmt_st());
    if let Some(d) = &iso {
        text.push_str(&format!("\nisomorphic to {d}"));
    }
    let doc = json!({
        "b": b,
        "uv": grid(&m.entries, &UV),
        "st": grid(&st, &ST),
        "special_iso": iso.as_ref().map_or(Value::Null, BundleDesc::to_json),
    });
    Ok(Report::new(doc, text))
}

fn jumps_cmd(src: &str, remove: bool) -> Result<Report, Failure> {
    let m: TransitionMat = if src.trim_start().starts_with('{') {
        transition_from_json(&parse_json(src)?)?
    } else {
        parse_transition(src)?
    };
    let rep = detect_jumps(&m)?;
    let jumps: Vec<Value> = rep.jumps.iter().map(|(l, e)| json!({"lambda": q_to_json(l), "eps": e})).collect();
    let unresolved: Vec<String> = rep.unresolved.iter().map(|p| p.to_string()).collect();
    let mut text = format!("generic fibre index: {}", rep.generic_b);
    for (l, e) in &rep.jumps {
        text.push_str(&format!("\njump at x = {}: index {}", fmt_q(l), rep.generic_b + 2 * e));
    }
    if !unresolved.is_empty() {
        text.push_str(&format!("\nirrational jump locus: {}", unresolved.join(", ")));
    }
    let mut doc = json!({"generic_b": rep.generic_b, "jumps": jumps, "unresolved": unresolved});
    if remove {
        let r = remove_jumps(&m)?;
        let steps: Vec<Value> = r
            .steps
            .iter()
            .map(|s| {
                json!({
                    "lambda": q_to_json(&s.lambda),
                    "before_b": s.before_b,
                    "deg_det_before": s.deg_det_before,
                    "deg_det_after": s.deg_det_after,
                })
            })
            .collect();
        for s in &r.steps {
            text.push_str(&format!(
                "\nmodify at x = {}: deg det {} -> {}",
                fmt_q(&s.lambda),
                s.deg_det_before,
                s.deg_det_after
            ));
        }
        text.push_str(&format!("\nresult: {}", r.matrix));
        doc["removal"] = json!({
            "steps": steps,
            "degree_trace": r.degree_trace,
            "matrix": transition_to_json(&r.matrix),
        });
    }
    Ok(Report::new(doc, text))
}

fn max_degree() -> i64 {
    std::env::var("P1BL_MAX_DEGREE").ok().and_then(|s| s.trim().parse().ok()).filter(|&d| d >= 1).unwrap_or(6)
}

fn small_rat(rng: &mut ChaCha8Rng) -> Q {
    Q::new(rng.gen_range(-5i64..=5).into(), rng.gen_range(1i64..=3).into())
}

fn group_binomial() -> bool {
    (0..=12).all(|r| (0..=r).all(|p| (0..=p).all(|k| binomial_identity(r, p, k).is_ok_and(|(l, r)| l == r))))
}

fn group_action(cap: i64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let r_max = cap.max(1) as usize + 2;
    let swap_ok = (0..=r_max).all(|r| {
        (0..=r).all(|i| {
            act_symr(&gl2(0, 1, 1, 0), &TruncPoly::monomial(r, i, Q::from_integer(1.into())))
                .is_ok_and(|p| p == TruncPoly::monomial(r, r - i, Q::from_integer(1.into())))
        })
    });
    let random_ok = (0..30).all(|_| {
        let r = rng.gen_range(0..=r_max);
        let p = TruncPoly::new(r, (0..=r).map(|_| small_rat(&mut rng)).collect());
        let (g, h) = (random_gl2(&mut rng), random_gl2(&mut rng));
        let law = act_symr(&g, &act_symr(&h, &p).unwrap()).unwrap() == act_symr(&gl2_mul(&g, &h), &p).unwrap();
        let mut al = small_rat(&mut rng);
        if al.is_zero() {
            al = Q::from_integer(2.into());
        }
        law && upper_triangular_identity(&al, &small_rat(&mut rng), &Q::from_integer(3.into()), &p).unwrap_or(false)
    });
    swap_ok && random_ok
}

fn group_schwarz(cap: i64) -> bool {
    let v = MPoly::var(2, 1);
    (0..=cap).all(|b| substitution_identity(b).unwrap_or(false))
        && (1..=cap).all(|b| schwarz_matrix(b).is_ok_and(|m| det_sym(&m) == v.pow(b as u32)))
        && (0..=2 * cap).all(h_parity_check)
        && (2..=cap).all(involution_identity_check)
}

fn group_lift(cap: i64) -> bool {
    (1..=cap.min(4)).all(|b| lift_identity_check(b) && hat_blowdown_check(b))
}

fn group_equivalence() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let form = |rng: &mut ChaCha8Rng, b: usize, lo: i64, hi: i64| {
        BiHomogLaurent::new(
            (0..=b)
                .map(|_| LaurentPoly::from_terms((0..3).map(|_| (rng.gen_range(lo..=hi), small_rat(rng)))))
                .collect(),
        )
    };
    [(1i64, 2usize, 4i64), (2, 3, 5), (0, 2, 4)].into_iter().all(|(a, b, c)| {
        let base = form(&mut rng, b, 0, c);
        let Ok(want) = normalize(a, b as i64, c, &base) else { return false };
        (0..20).all(|_| {
            let lambda = Q::from_integer(rng.gen_range(1i64..=5).into());
            let (hi, lo) = (form(&mut rng, b, 0, 3), form(&mut rng, b, 0, 3));
            let rows = (0..=b)
                .map(|i| {
                    let mut row = base.row(i).scale(&lambda);
                    for (e, x) in hi.row(i).terms() {
                        row.add_term(e + c, x.clone());
                    }
                    for (e, x) in lo.row(i).terms() {
                        row.add_term(a * i as i64 - e, x.clone());
                    }
                    row
                })
                .collect();
            normalize(a, b as i64, c, &BiHomogLaurent::new(rows)).is_ok_and(|p| p == want)
        })
    })
}

fn group_jumps() -> bool {
    let check = |src: &str, steps: usize| {
        let Ok(m) = parse_transition(src) else { return false };
        remove_jumps(&m).is_ok_and(|r| {
            r.steps.len() == steps
                && r.degree_trace.windows(2).all(|w| w[1] < w[0])
                && detect_jumps(&r.matrix).is_ok_and(|j| j.jumps.is_empty())
        })
    };
    check("y, x; 0, y^-1", 1) && check("y, x^2; 0, y^-1", 2) && check("y^2, x*y; 0, y^-2", 1)
}

fn selftest() -> Report {
    let cap = max_degree();
    let groups: Vec<(&str, bool)> = vec![
        ("binomial identity", group_binomial()),
        ("symmetric power action", group_action(cap)),
        ("schwarzenberger identities", group_schwarz(cap)),
        ("lift and blow-down", group_lift(cap)),
        ("equivalence soundness", group_equivalence()),
        ("jump removal", group_jumps()),
    ];
    let ok = groups.iter().all(|(_, p)| *p);
    let text = groups
        .iter()
        .map(|(n, p)| format!("{n}: {}", if *p { "PASS" } else { "FAIL" }))
        .collect::<Vec<_>>()
        .join("\n");
    let json = json!({
        "max_degree": cap,
        "groups": groups.iter().map(|(n, p)| json!({"name": n, "pass": p})).collect::<Vec<_>>(),
        "pass": ok,
    });
    Report { json, text, ok }
}
