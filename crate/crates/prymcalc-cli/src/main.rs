use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use prymcalc::catalog::Catalog;
use prymcalc::certificates::{
    bigness_certificate, resolve_term, solve_coefficients, verify_combination, BigReport, Certificate, Solution,
    Source, Term, Verdict,
};
use prymcalc::morphisms::canonical_class;
use prymcalc::pd::{pd_class, Partition};
use prymcalc::reference::{reference_case, Comparison};
use prymcalc::series::count_report;
use prymcalc::singularity::{is_noncanonical, is_smooth_point, star_admissible, AutGenerator, ComponentDatum, CurveSketch};
use prymcalc::test_curves::{intersect, slope_locus_margin, test_curve, CurveKind};
use prymcalc::{parse_class, parse_generator, Affine, Bound, Class, Error, Family, Map, Rational, SpaceId};

#[derive(Parser)]
#[command(name = "prymcalc", version, about = "Exact divisor-class calculus on moduli of (Prym) curves")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Extra catalog entries (JSON).
    #[arg(long, global = true, value_name = "FILE")]
    catalog: Vec<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct SpaceArgs {
    /// Family: m_gn, m_g2_z2, r_g, r_g2, cnr_g or the full family name.
    #[arg(long)]
    space: String,
    #[arg(long)]
    g: u32,
    #[arg(long)]
    n: Option<u32>,
}

impl SpaceArgs {
    fn resolve(&self) -> Result<SpaceId, Error> {
        space_from(&self.space, self.g, self.n)
    }
}

fn space_from(family: &str, g: u32, n: Option<u32>) -> Result<SpaceId, Error> {
    let family = Family::parse(family).ok_or_else(|| Error::InvalidSpace(format!("unknown family '{family}'")))?;
    let n = n.or(family.fixed_marks()).unwrap_or(0);
    SpaceId::new(family, g, n)
}

#[derive(Subcommand)]
enum Cmd {
    /// List the generator inventory of a space.
    Generators(SpaceArgs),
    /// Parse a class and print its canonical form.
    Parse {
        #[command(flatten)]
        space: SpaceArgs,
        class: String,
    },
    /// Pull a class back along a named map, e.g. `i_star:16∘pi_star:17`.
    Pullback {
        #[arg(long)]
        map: String,
        /// Class on the map's source space, or a catalog entry name.
        #[arg(long)]
        class: String,
    },
    /// Canonical class of M̄_{g,2}/Z₂ or R̄_{g,2}.
    Canonical(SpaceArgs),
    /// Class of a Prym-canonical divisorial stratum.
    PdClass {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, value_delimiter = ',')]
        partition: Vec<u32>,
    },
    /// Effectivity or bigness decomposition of the canonical class.
    Certificate(CertArgs),
    /// Limit linear series count and the binomial identities.
    CountG1 {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        check_identities: bool,
    },
    /// Smoothness and non-canonicity verdicts for a curve sketch.
    Audit {
        #[arg(long)]
        input: PathBuf,
    },
    /// Intersect a test curve (`A1i:i` or `Aeta:i`) with a class.
    Intersect {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        class: String,
    },
    /// `s − 10`, the slope margin.
    SlopeMargin {
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// List catalog entries or show one.
    Catalog {
        name: Option<String>,
    },
}

#[derive(Args)]
struct CertArgs {
    #[arg(long)]
    g: u32,
    #[arg(long, default_value = "r_g2")]
    space: String,
    /// `entry@map` items; defaults to the reference decomposition for g.
    #[arg(long)]
    terms: Option<String>,
    /// Fixed coefficients, one per term; skips solving.
    #[arg(long, value_delimiter = ',')]
    coefficients: Vec<String>,
    /// `pinned=gen,gen,...`
    #[arg(long)]
    solve: Option<String>,
    /// `p/q` or `auto`.
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<String>,
    /// Target class; defaults to the canonical class.
    #[arg(long)]
    target: Option<String>,
}

/// Outcome of a subcommand: what to print and whether the verdict was
/// positive.
struct Output {
    text: String,
    json: Value,
    positive: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Output {
        Output { text, json, positive: true }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&out.json).expect("serializable")
            } else {
                out.text.trim_end().to_string()
            };
            // a closed pipe (e.g. `| head`) is not an error
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            ExitCode::from(if out.positive { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn rat(s: &str) -> Result<Rational, Error> {
    s.trim().parse::<Rational>().map_err(|_| Error::Parameter(format!("'{s}' is not a rational number")))
}

fn load_catalog(cli: &Cli) -> Result<Catalog<Rational>, Error> {
    let mut cat = Catalog::builtin();
    for path in &cli.catalog {
        cat.load_file(path)?;
    }
    Ok(cat)
}

fn bound_json(b: &Bound) -> Value {
    match b {
        Bound::Exact(v) => json!(v.to_string()),
        Bound::AtLeast(m) => json!({ "atLeast": m.to_string() }),
        Bound::AtMost(m) => json!({ "atMost": m.to_string() }),
        Bound::Unknown => json!("unknown"),
    }
}

fn space_json(s: SpaceId) -> Value {
    json!({ "family": s.family().name(), "g": s.g(), "n": s.n() })
}

fn affine_json(a: &Affine<Rational>) -> Value {
    json!({ "constant": a.constant.to_string(), "epsilon": a.slope.to_string() })
}

fn run(cli: &Cli) -> Result<Output, Error> {
    match &cli.cmd {
        Cmd::Generators(sa) => {
            let sp = sa.resolve()?;
            let gens: Vec<String> = sp.generators().iter().map(ToString::to_string).collect();
            Ok(Output::ok(gens.join("\n"), json!({ "space": space_json(sp), "generators": gens })))
        }
        Cmd::Parse { space, class } => {
            let sp = space.resolve()?;
            let c: Class = parse_class(class, sp)?;
            Ok(Output::ok(c.to_string(), json!({ "space": space_json(sp), "class": c.to_string() })))
        }
        Cmd::Pullback { map, class } => {
            let m = Map::by_name(map)?;
            let cat = load_catalog(cli)?;
            let src = match cat.entry(class.trim()) {
                Ok(e) if e.space == m.source() => e.bounded_class(),
                Ok(e) => return Err(Error::SpaceMismatch { left: e.space.to_string(), right: m.source().to_string() }),
                Err(_) => parse_class(class, m.source())?,
            };
            let img = m.apply(&src)?;
            Ok(Output::ok(
                img.to_string(),
                json!({ "map": m.name(), "source": space_json(m.source()), "target": space_json(m.target()), "class": img.to_string() }),
            ))
        }
        Cmd::Canonical(sa) => {
            let sp = sa.resolve()?;
            let k: Class = canonical_class(sp)?;
            Ok(Output::ok(k.to_string(), json!({ "space": space_json(sp), "class": k.to_string() })))
        }
        Cmd::PdClass { g, n, partition } => {
            if partition.len() as u32 != *n {
                return Err(Error::Partition(format!("{} parts given for n = {n}", partition.len())));
            }
            let d = Partition::new(*g, partition.clone())?;
            let c: Class = pd_class(&d)?;
            let sp = d.space()?;
            Ok(Output::ok(
                c.to_string(),
                json!({ "space": space_json(sp), "partition": d.parts(), "class": c.to_string() }),
            ))
        }
        Cmd::Certificate(args) => certificate(cli, args),
        Cmd::CountG1 { g, check_identities } => {
            if *g == 0 {
                return Err(Error::Parameter("g must be at least 1".into()));
            }
            let r = count_report(*g);
            let mut text = format!("g = {g}\ncount = {}\ncatalan = {}", r.count, r.catalan);
            let mut js = json!({ "g": g, "count": r.count.to_string(), "catalan": r.catalan.to_string() });
            let mut positive = r.count == Rational::from_integer(r.catalan.clone());
            if *check_identities {
                let ok = r.identities_ok();
                text.push_str(&format!(
                    "\nsquare-difference = {}\nnarayana: {} = {} ({})\ncentral binomial: {} = {} ({})\nidentities ok: {ok}",
                    r.square_difference,
                    r.narayana.lhs,
                    r.narayana.rhs,
                    r.narayana.holds,
                    r.central_binomial.lhs,
                    r.central_binomial.rhs,
                    r.central_binomial.holds
                ));
                js["identitiesOk"] = json!(ok);
                js["squareDifference"] = json!(r.square_difference.to_string());
                js["narayana"] = json!({ "lhs": r.narayana.lhs.to_string(), "rhs": r.narayana.rhs.to_string(), "equal": r.narayana.holds });
                positive &= ok;
            }
            Ok(Output { text, json: js, positive })
        }
        Cmd::Audit { input } => audit(input),
        Cmd::Intersect { curve, class } => {
            let (name, i) = curve
                .split_once(':')
                .ok_or_else(|| Error::Parameter(format!("curve '{curve}' should look like A1i:5")))?;
            let kind: CurveKind = name.parse()?;
            let i: u32 = i.trim().parse().map_err(|_| Error::Parameter(format!("bad curve parameter '{i}'")))?;
            let c = test_curve::<Rational>(kind, i)?;
            let cls: Class = parse_class(class, c.space)?;
            let v = intersect(&c, &cls)?;
            let text = match &v {
                Bound::Exact(x) => x.to_string(),
                Bound::AtLeast(m) => format!("<= {}", -m.clone()),
                Bound::AtMost(m) => format!(">= {}", -m.clone()),
                Bound::Unknown => "unknown".into(),
            };
            Ok(Output::ok(text, json!({ "curve": format!("{kind}:{i}"), "space": space_json(c.space), "value": bound_json(&v) })))
        }
        Cmd::SlopeMargin { s } => {
            let s = rat(s)?;
            let m = slope_locus_margin(&s)?;
            let contains = m.is_negative();
            let text = format!("margin = {m}{}", if contains { " (slope below 10: the test-curve loci lie in the divisor)" } else { "" });
            Ok(Output::ok(text, json!({ "s": s.to_string(), "margin": m.to_string(), "containsLoci": contains })))
        }
        Cmd::Catalog { name } => {
            let cat = load_catalog(cli)?;
            match name {
                None => {
                    let names: Vec<&str> = cat.names().collect();
                    let mut text = names.join("\n");
                    text.push_str("\nBN_g_r_d (any ρ = −1 triple, built on demand)");
                    Ok(Output::ok(text, json!({ "entries": names })))
                }
                Some(n) => {
                    let e = cat.entry(n)?;
                    let js = e.to_json();
                    let mut text = format!("{} on {}\n{}", e.name, e.space, e.class);
                    if !e.unknown.is_empty() {
                        let u: Vec<String> = e.unknown.iter().map(ToString::to_string).collect();
                        text.push_str(&format!("\nunknown: {}", u.join(", ")));
                    }
                    if !e.provenance.is_empty() {
                        text.push_str(&format!("\n{}", e.provenance));
                    }
                    Ok(Output::ok(text, js))
                }
            }
        }
    }
}

/// Splits `a@m1,b@m2:3,4` on the commas that start a new term.
fn split_terms(s: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for piece in s.split(',') {
        match out.last_mut() {
            Some(last) if !piece.contains('@') => {
                last.push(',');
                last.push_str(piece);
            }
            _ => out.push(piece.trim().to_string()),
        }
    }
    out
}

fn certificate(cli: &Cli, args: &CertArgs) -> Result<Output, Error> {
    let sp = space_from(&args.space, args.g, None)?;
    let cat = load_catalog(cli)?;
    let reference = reference_case(args.g).ok().filter(|_| sp == SpaceId::branched_prym2(args.g).expect("valid"));
    let term_specs = match (&args.terms, &reference) {
        (Some(t), _) => split_terms(t),
        (None, Some(r)) => r.terms.clone(),
        (None, None) => return Err(Error::Parameter(format!("no default terms for g = {}; pass --terms", args.g))),
    };
    let is_reference = reference.as_ref().is_some_and(|r| r.terms == term_specs);
    let target: Class = match &args.target {
        Some(t) => parse_class(t, sp)?,
        None => canonical_class(sp)?,
    };
    let sources = term_specs.iter().map(|t| resolve_term(&cat, t)).collect::<Result<Vec<_>, _>>()?;
    for s in &sources {
        if s.class.space() != sp {
            return Err(Error::SpaceMismatch { left: s.class.space().to_string(), right: sp.to_string() });
        }
    }

    let mut js = json!({
        "space": space_json(sp),
        "target": target.to_string(),
        "terms": sources.iter().map(|s| json!({ "term": s.label, "class": s.class.to_string() })).collect::<Vec<_>>(),
    });
    let mut text = format!("target K = {target}\n");
    for s in &sources {
        text.push_str(&format!("{} = {}\n", s.label, s.class));
    }

    if !args.coefficients.is_empty() {
        if args.coefficients.len() != sources.len() {
            return Err(Error::Parameter(format!("{} coefficients for {} terms", args.coefficients.len(), sources.len())));
        }
        let eps = match args.epsilon.as_deref() {
            None | Some("auto") => Rational::from_integer(0.into()),
            Some(e) => rat(e)?,
        };
        let terms: Vec<Term<Rational>> = sources
            .iter()
            .zip(&args.coefficients)
            .map(|(s, c)| Ok(Term { source: s.clone(), coeff: rat(c)? }))
            .collect::<Result<_, Error>>()?;
        let cert = verify_combination(&target, &terms, &eps)?;
        text.push_str(&certificate_text(&cert));
        js["certificate"] = certificate_json(&cert);
        js["verdict"] = json!(cert.verdict.to_string());
        return Ok(Output { text, json: js, positive: cert.verdict.is_witness() });
    }

    let pinned_names: Vec<String> = match &args.solve {
        Some(s) => {
            let list = s.strip_prefix("pinned=").unwrap_or(s);
            list.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect()
        }
        None => vec!["psi".into(), "lambda".into(), "d0p".into()],
    };
    let pinned = pinned_names.iter().map(|p| parse_generator(p, sp)).collect::<Result<Vec<_>, _>>()?;

    let (verdict, cert) = match args.epsilon.as_deref() {
        None | Some("auto") => {
            let report = bigness_certificate(&target, &sources, &pinned)?;
            text.push_str(&big_text(&report));
            js["solution"] = solution_json(&report.solution);
            js["epsilon0"] = json!(report.epsilon0.as_ref().map(ToString::to_string));
            js["blocking"] = json!(report.blocking);
            (report.verdict.clone(), report.certificate.clone())
        }
        Some(e) => {
            let eps = rat(e)?;
            let sol = solve_coefficients(&target, &sources, &pinned, true)?;
            js["solution"] = solution_json(&sol);
            text.push_str(&solution_text(&sol));
            match sol.at(&eps) {
                Some(cs) if !matches!(sol, Solution::ZeroEpsilonOnly(_)) || eps.is_zero() => {
                    let terms: Vec<Term<Rational>> =
                        sources.iter().zip(cs).map(|(s, c)| Term { source: s.clone(), coeff: c }).collect();
                    match verify_combination(&target, &terms, &eps) {
                        Ok(c) => (c.verdict.clone(), Some(c)),
                        Err(Error::NegativeCoefficient(m)) => (Verdict::Inconclusive(vec![format!("negative coefficient {m}")]), None),
                        Err(e) => return Err(e),
                    }
                }
                Some(_) => (Verdict::Infeasible("pinned equations hold only at ε = 0".into()), None),
                None => (Verdict::Infeasible("pinned equations are contradictory".into()), None),
            }
        }
    };
    if let Some(c) = &cert {
        text.push_str(&certificate_text(c));
        js["certificate"] = certificate_json(c);
    } else {
        text.push_str(&format!("verdict: {verdict}\n"));
    }
    js["verdict"] = json!(verdict.to_string());

    if is_reference {
        let comparisons = printed_comparisons(args.g, &sources, &js)?;
        if !comparisons.is_empty() {
            text.push_str("printed comparison:\n");
            for c in &comparisons {
                text.push_str(&comparison_text(c));
            }
            js["printedComparison"] = comparisons.iter().map(comparison_json).collect::<Vec<_>>().into();
        }
    }
    Ok(Output { text, json: js, positive: verdict.is_witness() })
}

fn printed_comparisons(g: u32, sources: &[Source<Rational>], _js: &Value) -> Result<Vec<Comparison<Rational>>, Error> {
    let cat = Catalog::builtin();
    let r = prymcalc::reference::run_reference(&cat, g)?;
    debug_assert_eq!(r.sources.len(), sources.len());
    Ok(r.comparisons)
}

fn solution_json(s: &Solution<Rational>) -> Value {
    match s {
        Solution::Unique(c) => json!({ "kind": "unique", "coefficients": c.iter().map(affine_json).collect::<Vec<_>>() }),
        Solution::ZeroEpsilonOnly(c) => {
            json!({ "kind": "zeroEpsilonOnly", "coefficients": c.iter().map(ToString::to_string).collect::<Vec<_>>() })
        }
        Solution::Infeasible { reason, multipliers } => json!({
            "kind": "infeasible",
            "reason": reason,
            "multipliers": multipliers.iter().map(|(g, v)| json!({ "generator": g.to_string(), "multiplier": v.to_string() })).collect::<Vec<_>>(),
        }),
    }
}

fn solution_text(s: &Solution<Rational>) -> String {
    match s {
        Solution::Unique(c) => c.iter().enumerate().map(|(k, a)| format!("c{} = {a}\n", k + 1)).collect(),
        Solution::ZeroEpsilonOnly(c) => {
            let mut t = String::from("solvable at eps = 0 only\n");
            for (k, v) in c.iter().enumerate() {
                t.push_str(&format!("c{} = {v}\n", k + 1));
            }
            t
        }
        Solution::Infeasible { reason, multipliers } => {
            let rows: Vec<String> = multipliers.iter().map(|(g, v)| format!("{v}·[{g}]")).collect();
            format!("infeasible: {reason}; combine rows {}\n", rows.join(" + "))
        }
    }
}

fn big_text(r: &BigReport<Rational>) -> String {
    let mut t = solution_text(&r.solution);
    if let Some(e0) = &r.epsilon0 {
        t.push_str(&format!("eps0 = {e0} (binding: {})\n", r.blocking.join(", ")));
    } else if !r.blocking.is_empty() {
        t.push_str(&format!("blocking: {}\n", r.blocking.join(", ")));
    }
    t
}

fn certificate_text(c: &Certificate<Rational>) -> String {
    let mut t = format!("eps = {}\n", c.epsilon);
    for term in &c.terms {
        t.push_str(&format!("  {} · {}\n", term.coeff, term.source.label));
    }
    t.push_str(&format!("combination = {}\n", c.combination));
    t.push_str(&format!("residual = {}\n", c.residual));
    t.push_str(&format!("verdict: {}\n", c.verdict));
    t
}

fn certificate_json(c: &Certificate<Rational>) -> Value {
    json!({
        "epsilon": c.epsilon.to_string(),
        "coefficients": c.terms.iter().map(|t| json!({ "term": t.source.label, "coefficient": t.coeff.to_string() })).collect::<Vec<_>>(),
        "combination": c.combination.to_string(),
        "residual": c.residual.to_string(),
        "signLedger": c.ledger.iter().map(|e| json!({
            "generator": e.gen.to_string(),
            "residual": bound_json(&e.residual),
            "requirement": format!("{:?}", e.requirement),
            "status": format!("{:?}", e.status),
        })).collect::<Vec<_>>(),
        "verdict": c.verdict.to_string(),
    })
}

fn comparison_text(c: &Comparison<Rational>) -> String {
    let (pn, pd) = c.printed.constant;
    let printed = match c.printed.slope {
        Some((sn, sd)) => format!("{pn}/{pd} + ({sn}/{sd})*eps"),
        None => format!("{pn}/{pd}"),
    };
    let mark = |b: bool| if b { "MATCH" } else { "MISMATCH" };
    let slope = match c.slope_matches {
        Some(b) => format!(", eps part {}", mark(b)),
        None => String::new(),
    };
    format!("  {}: printed {printed}, solved {}: constant {}{slope}\n", c.label, c.solved, mark(c.constant_matches))
}

fn comparison_json(c: &Comparison<Rational>) -> Value {
    let frac = |(n, d): (i64, i64)| format!("{n}/{d}");
    json!({
        "label": c.label,
        "printedConstant": frac(c.printed.constant),
        "printedEpsilon": c.printed.slope.map(frac),
        "solved": affine_json(&c.solved),
        "constant": if c.constant_matches { "MATCH" } else { "MISMATCH" },
        "epsilon": c.slope_matches.map(|b| if b { "MATCH" } else { "MISMATCH" }),
    })
}

fn audit(input: &PathBuf) -> Result<Output, Error> {
    let text = std::fs::read_to_string(input).map_err(|e| Error::Sketch(format!("{}: {e}", input.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Sketch(e.to_string()))?;
    let sketch: CurveSketch = serde_json::from_value(v.get("sketch").cloned().unwrap_or(Value::Null))
        .map_err(|e| Error::Sketch(format!("sketch: {e}")))?;
    let gens: Vec<AutGenerator> = match v.get("generators") {
        Some(g) => serde_json::from_value(g.clone()).map_err(|e| Error::Sketch(format!("generators: {e}")))?,
        None => Vec::new(),
    };
    let comps: Vec<ComponentDatum> = match v.get("components") {
        Some(c) => serde_json::from_value(c.clone()).map_err(|e| Error::Sketch(format!("components: {e}")))?,
        None => Vec::new(),
    };
    let genus = sketch.validate()?;
    let smooth = is_smooth_point(&sketch, &gens)?;
    let noncanonical = is_noncanonical(&sketch)?;
    let star = star_admissible::<Rational>(&comps)?;
    let ledger: Vec<Value> = star
        .entries
        .iter()
        .map(|e| json!({ "component": serde_json::to_value(e.datum).expect("serializable"), "w": e.w.to_string(), "excluded": e.excluded }))
        .collect();
    let note = if noncanonical {
        "an elliptic tail with j = 0 and trivial Prym bundle makes the point non-canonical"
    } else {
        "no table row certifies non-canonicity"
    };
    let mut text = format!("arithmetic genus {genus}\nsmooth: {smooth}\nnon-canonical: {noncanonical} ({note})\n");
    for e in &star.entries {
        text.push_str(&format!("  {}: w = {}{}\n", e.datum, e.w, if e.excluded { " (excluded, > 1/3)" } else { "" }));
    }
    text.push_str(&format!("age lower bound total: {}\n", star.total));
    let js = json!({
        "genus": genus,
        "smooth": smooth,
        "nonCanonical": noncanonical,
        "note": note,
        "ageLedger": { "entries": ledger, "total": star.total.to_string(), "admissible": star.admissible, "allZero": star.all_zero },
    });
    Ok(Output::ok(text, js))
}
