//! `edleg`: censuses, claim verification, map evaluation and parameter
//! classification from the command line.
//!
//! Exit status: 0 success, 1 usage error, 2 a verification failed, 3 a
//! precondition or size bound was violated.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use edwards_legendre::census::{self, CensusTable, Claim, SpectrumMethod};
use edwards_legendre::curves::{CountMethod, Curve, Point};
use edwards_legendre::ff::{field_ctx_bounded, FieldCtx, FieldElement, PowerClass, DEFAULT_MAX_Q};
use edwards_legendre::maps::{self, DefinedOver};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "edleg", version, about = "Edwards and Legendre curves over small finite fields")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Characteristic of the field.
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Extension degree: the field is F_{p^m}.
    #[arg(long, global = true, default_value_t = 1)]
    m: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest field size accepted.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_Q)]
    max_q: u64,
    /// Worker threads for the parallel scans.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Trace census of all Legendre parameters.
    Census,
    /// Check census claims.
    Verify {
        /// 6.5, 7.1, 7.2, katz, 7.6, 7.7, 7.8, 8.1, 8.2, 8.4, classes,
        /// bijection, a claim name, or all.
        #[arg(long, default_value = "all")]
        theorem: String,
    },
    /// Evaluate a catalog map at a point, or check it is an isogeny.
    Map {
        #[arg(long)]
        name: String,
        #[arg(long)]
        d: Option<String>,
        /// First parameter of the twisted maps (a, d).
        #[arg(long)]
        a: Option<String>,
        /// Second Huff parameter.
        #[arg(long)]
        b: Option<String>,
        /// "x,y", "inf" or "exc:LABEL"; without it the map is verified.
        #[arg(long)]
        point: Option<String>,
        /// Accept maps whose radicals live in F_{q²} or F_{q⁴}.
        #[arg(long)]
        allow_extension: bool,
        /// Homomorphism pairs sampled when verifying.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Everything known about one parameter d.
    Classify {
        #[arg(long)]
        d: String,
    },
    /// The Hasse–Deuring polynomial and its roots in F_{p^m}.
    Deuring,
    /// Legendre parameters isomorphic to L_d, and Edwards parameters isomorphic to E_d.
    Orbit {
        #[arg(long)]
        d: String,
    },
}

enum Failure {
    Usage(String),
    Verification(String),
    Precondition(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Verification(_) => 2,
            Failure::Precondition(_) => 3,
        }
    }
    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Verification(m) | Failure::Precondition(m) => m,
        }
    }
}

fn pre<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Precondition(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("edleg: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let g = &cli.global;
    if let Some(n) = g.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let p = g.p.ok_or_else(|| Failure::Usage("--p is required".into()))?;
    let ctx = field_ctx_bounded(p, g.m, None, g.max_q).map_err(pre)?;
    let (text, verdict) = match &cli.command {
        Command::Census => (census_cmd(ctx, g)?, Ok(())),
        Command::Verify { theorem } => verify_cmd(ctx, g, theorem)?,
        Command::Map { name, d, a, b, point, allow_extension, samples } => {
            let args = MapArgs { name, d: d.as_deref(), a: a.as_deref(), b: b.as_deref(), point: point.as_deref() };
            map_cmd(ctx, g, &args, *allow_extension, *samples)?
        }
        Command::Classify { d } => (classify_cmd(ctx, g, d)?, Ok(())),
        Command::Deuring => (deuring_cmd(ctx, g)?, Ok(())),
        Command::Orbit { d } => (orbit_cmd(ctx, g, d)?, Ok(())),
    };
    emit(g, &text)?;
    verdict
}

fn emit(g: &Global, text: &str) -> Result<(), Failure> {
    match &g.out {
        Some(path) => std::fs::write(path, text).map_err(|e| pre(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| pre(e.to_string()))
        }
    }
}

fn element(ctx: &'static FieldCtx, flag: &str, text: &str) -> Result<FieldElement, Failure> {
    ctx.parse_element(text).map_err(|e| Failure::Usage(format!("--{flag} {text:?}: {e}")))
}

fn json_text(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn spectrum(ctx: &'static FieldCtx, g: &Global) -> Result<CensusTable, Failure> {
    let method =
        if ctx.q() >= census::CORRELATION_MIN_Q { SpectrumMethod::Correlation } else { SpectrumMethod::PerParameter };
    census::trace_spectrum_with(ctx, method, g.max_q).map_err(pre)
}

fn census_cmd(ctx: &'static FieldCtx, g: &Global) -> Result<String, Failure> {
    let t = spectrum(ctx, g)?;
    Ok(match g.format {
        Format::Csv => t.to_csv(),
        Format::Json => t.to_json(),
    })
}

enum Target {
    Claim(Claim),
    Bijection,
}

fn targets(id: &str, ctx: &FieldCtx) -> Result<Vec<Target>, Failure> {
    let claim = match id {
        "all" => {
            let mut v: Vec<Target> = Claim::ALL.into_iter().filter(|c| c.applies_to(ctx)).map(Target::Claim).collect();
            if ctx.q() % 4 == 1 {
                v.push(Target::Bijection);
            }
            return Ok(v);
        }
        "bijection" => return Ok(vec![Target::Bijection]),
        "classes" => Claim::ClassCount,
        "6.5" => Claim::SupersingularCount,
        "7.1" | "7.2" | "7.1-7.2" | "katz" => Claim::KatzRatio,
        "7.6" => Claim::NonsquaresOneMod4,
        "7.7" => Claim::NonsquaresThreeMod4,
        "7.8" => Claim::CompleteInEveryClass,
        "8.1" => Claim::FourthPowersThreeMod4,
        "8.2" => Claim::FourthPowersOneMod4,
        "8.4" => Claim::SquareNonsquareBalance,
        other => other.parse().map_err(Failure::Usage)?,
    };
    Ok(vec![Target::Claim(claim)])
}

fn verify_cmd(ctx: &'static FieldCtx, g: &Global, id: &str) -> Result<(String, Result<(), Failure>), Failure> {
    let targets = targets(id, ctx)?;
    let t = spectrum(ctx, g)?;
    let mut reports: Vec<Value> = Vec::new();
    let mut text = String::new();
    let mut failed = Vec::new();
    for target in targets {
        match target {
            Target::Claim(c) => {
                let r = census::theorem_report(&t, c).map_err(pre)?;
                let _ = writeln!(
                    text,
                    "{} {}: {} checks",
                    if r.passed() { "VERIFIED" } else { "FAILED" },
                    c,
                    r.checks.len()
                );
                for ch in &r.checks {
                    let a = ch.a.map(|a| format!("A = {a}: ")).unwrap_or_default();
                    let mark = if ch.ok { "ok" } else { "MISMATCH" };
                    let _ = writeln!(
                        text,
                        "  {mark} {a}{}: expected {}, observed {}",
                        ch.statement, ch.expected, ch.observed
                    );
                }
                for f in &r.flags {
                    let _ = writeln!(text, "  flag: {f}");
                }
                if !r.passed() {
                    failed.push(c.to_string());
                }
                reports.push(serde_json::to_value(&r).expect("serializable"));
            }
            Target::Bijection => {
                let (v, ok, n, bad) = bijection_summary(&t)?;
                let _ = writeln!(text, "{} bijection: {n} parameters", if ok { "VERIFIED" } else { "FAILED" });
                for b in bad {
                    let _ = writeln!(text, "  MISMATCH d = {b}");
                }
                if !ok {
                    failed.push("bijection".into());
                }
                reports.push(v);
            }
        }
    }
    let out = match g.format {
        Format::Csv => text,
        Format::Json => json_text(&reports),
    };
    let verdict = if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("failed over {}: {}", ctx, failed.join(", "))))
    };
    Ok((out, verdict))
}

fn bijection_summary(t: &CensusTable) -> Result<(Value, bool, usize, Vec<String>), Failure> {
    let ctx = t.ctx;
    let mut bad = Vec::new();
    let mut failures = Vec::new();
    let mut n = 0;
    for d in ctx.elements().filter(|d| !d.is_one() && d.fourth_power_class() == PowerClass::SquareNotFourth) {
        let r = census::bijection_trace(d, t).map_err(pre)?;
        n += 1;
        if !r.passed() {
            bad.push(d.atom());
            failures.push(serde_json::to_value(&r).expect("serializable"));
        }
    }
    let ok = bad.is_empty();
    let v = json!({
        "format_version": census::FORMAT_VERSION,
        "claim": "bijection",
        "field": ctx.to_string(),
        "q": ctx.q(),
        "status": if ok { "verified" } else { "failed" },
        "parameters_checked": n,
        "counterexamples": failures,
    });
    Ok((v, ok, n, bad))
}

struct MapArgs<'a> {
    name: &'a str,
    d: Option<&'a str>,
    a: Option<&'a str>,
    b: Option<&'a str>,
    point: Option<&'a str>,
}

fn map_cmd(
    ctx: &'static FieldCtx,
    g: &Global,
    args: &MapArgs,
    allow_extension: bool,
    samples: usize,
) -> Result<(String, Result<(), Failure>), Failure> {
    let need = |flag: &str, v: Option<&str>| -> Result<FieldElement, Failure> {
        element(ctx, flag, v.ok_or_else(|| Failure::Usage(format!("map {} needs --{flag}", args.name)))?)
    };
    if args.name == "huff" {
        return huff_cmd(g, need("a", args.a)?, need("b", args.b)?);
    }
    if !maps::MAP_NAMES.contains(&args.name) {
        return Err(Failure::Usage(format!(
            "unknown map {:?}; known: huff, {}",
            args.name,
            maps::MAP_NAMES.join(", ")
        )));
    }
    let d = need("d", args.d)?;
    let params = if args.name.starts_with("psi-twisted") { vec![need("a", args.a)?, d] } else { vec![d] };
    let map = maps::by_name(args.name, &params).map_err(pre)?;
    if map.defined_over() != DefinedOver::BaseField && !allow_extension {
        return Err(Failure::Precondition(format!(
            "{} over {ctx} needs F_{{q^{}}}; pass --allow-extension",
            args.name,
            map.defined_over().degree()
        )));
    }
    let Some(text) = args.point else {
        let r = maps::verify_isogeny(&map, samples).map_err(pre)?;
        let verdict =
            if r.passed() { Ok(()) } else { Err(Failure::Verification(format!("{} is not an isogeny here", r.map))) };
        let out = match g.format {
            Format::Json => json_text(&r),
            Format::Csv => format!(
                "{} {} -> {} over {}: membership {}, homomorphism {} ({} pairs), counts {}, kernel {}\n",
                if r.passed() { "VERIFIED" } else { "FAILED" },
                r.map,
                r.codomain,
                r.field,
                r.membership,
                r.homomorphism,
                r.pairs_checked,
                r.counts_equal,
                r.kernel
            ),
        };
        return Ok((out, verdict));
    };
    let pt = Point::parse(text, ctx).map_err(|e| Failure::Usage(format!("--point {text:?}: {e}")))?;
    let image = map.eval_base(&pt).map_err(pre)?;
    let out = match g.format {
        Format::Csv => format!("{image}\n"),
        Format::Json => json_text(&json!({
            "map": args.name,
            "domain": map.base_domain().to_string(),
            "codomain": map.codomain().to_string(),
            "field": map.field().to_string(),
            "point": pt.to_string(),
            "image": image.to_string(),
        })),
    };
    Ok((out, Ok(())))
}

fn huff_cmd(g: &Global, a: FieldElement, b: FieldElement) -> Result<(String, Result<(), Failure>), Failure> {
    let d = maps::huff_param(a, b).map_err(pre)?;
    let huff = maps::huff_t_model_count(a, b).map_err(pre)?;
    let edwards = Curve::edwards(d).and_then(|e| e.count_points(CountMethod::Exhaustive)).map_err(pre)?;
    let ok = huff == edwards;
    let out = match g.format {
        Format::Csv => format!("d = {}\n#H = {huff}, #E_d = {edwards}\n", d.atom()),
        Format::Json => json_text(&json!({
            "a": a.to_string(), "b": b.to_string(), "d": d.to_string(),
            "huff_count": huff, "edwards_count": edwards, "counts_equal": ok,
        })),
    };
    let verdict = if ok { Ok(()) } else { Err(Failure::Verification("Huff and Edwards counts differ".into())) };
    Ok((out, verdict))
}

fn classify_cmd(ctx: &'static FieldCtx, g: &Global, d: &str) -> Result<String, Failure> {
    let c = census::classify(element(ctx, "d", d)?).map_err(pre)?;
    Ok(match g.format {
        Format::Json => json_text(&c),
        Format::Csv => {
            let v = serde_json::to_value(&c).expect("serializable");
            let mut s = String::new();
            for (k, val) in v.as_object().expect("a record") {
                let _ = writeln!(s, "{k},{}", flat(val));
            }
            s
        }
    })
}

/// One CSV cell: strings bare, lists space-separated, objects as JSON.
fn flat(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) => xs.iter().map(flat).collect::<Vec<_>>().join(" "),
        Value::Object(_) => format!("\"{}\"", v.to_string().replace('"', "\"\"")),
        other => other.to_string(),
    }
}

fn deuring_cmd(ctx: &'static FieldCtx, g: &Global) -> Result<String, Failure> {
    let p = ctx.p();
    let h = census::deuring_poly(p).map_err(pre)?;
    let roots: Vec<String> = census::supersingular_params(ctx).map_err(pre)?.iter().map(|d| d.atom()).collect();
    let class_number = if p % 4 == 3 && p > 3 { census::class_number_oracle(p).ok() } else { None };
    Ok(match g.format {
        Format::Json => json_text(&json!({
            "field": ctx.to_string(),
            "p": p,
            "coeffs": h.coeffs,
            "degree": h.degree(),
            "roots": roots,
            "class_number": class_number,
        })),
        Format::Csv => {
            let mut s = format!("H_{p} coefficients (low degree first): {:?}\n", h.coeffs);
            let _ = writeln!(s, "roots in {ctx}: {}", roots.join(" "));
            if let Some(h) = class_number {
                let _ = writeln!(s, "h(-{p}) = {h}");
            }
            s
        }
    })
}

fn orbit_cmd(ctx: &'static FieldCtx, g: &Global, d: &str) -> Result<String, Failure> {
    let d = element(ctx, "d", d)?;
    let orbit: Vec<String> = maps::orbit(d).map_err(pre)?.iter().map(|x| x.atom()).collect();
    let iso: Option<Vec<String>> = maps::edwards_iso_class(d).ok().map(|v| v.iter().map(|x| x.atom()).collect());
    Ok(match g.format {
        Format::Json => json_text(&json!({
            "field": ctx.to_string(),
            "d": d.to_string(),
            "orbit": orbit,
            "edwards_iso_class": iso,
        })),
        Format::Csv => {
            let mut s = format!("orbit,{}\n", orbit.join(" "));
            if let Some(iso) = iso {
                let _ = writeln!(s, "edwards_iso_class,{}", iso.join(" "));
            }
            s
        }
    })
}
