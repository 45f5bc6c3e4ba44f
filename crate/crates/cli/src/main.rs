use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use mindisc::classify::{classify_form, verify_bound};
use mindisc::elimination::{disc_affine, resultant_y};
use mindisc::gaction::{apply_affine, apply_form, divisibility_report, g_reduce, GMat};
use mindisc::localinv::{critical_values, local_invariants, teissier_check};
use mindisc::minimality::{
    extract_automorphism, minimality_report, monic_family_check, random_coordinate, symmetry_report,
    verify_appendix_c, AutWord,
};
use mindisc::param::{param_report, search_minimal, RatParam, SearchConfig};
use mindisc::poly::{fmt_rat, parse_form_product, parse_upoly};
use mindisc::polytope::{edge_char_data, generic_polytope};
use mindisc::{parse_form, parse_poly, Error, Rat};

/// Exact discriminant-degree toolkit for bivariate polynomials over Q.
/// Every command prints JSON on standard output; inputs starting with `@`
/// are read from the named file.
#[derive(Parser)]
#[command(name = "mindisc", version)]
struct Cli {
    /// Worker threads for `search` and `selftest`.
    #[arg(long, global = true, env = "MINDISC_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Discriminant in y and its degree bookkeeping.
    Disc { f: String },
    /// Resultant in y.
    Resultant { f: String, g: String },
    /// Generic Newton polytope and its parameters.
    Polytope { f: String },
    /// Characteristic polynomial of the right edge.
    Charpoly { f: String },
    /// Minimality report.
    Minimal { f: String },
    /// Reduction in the GL2(Q[x]) orbit; `--cases` adds the divisibility case.
    Reduce {
        f: String,
        #[arg(long)]
        cases: bool,
    },
    /// Applies a matrix to a polynomial or form, or a generator word to a polynomial.
    Orbit {
        f: String,
        #[arg(long, conflicts_with = "word", required_unless_present = "word")]
        matrix: Option<String>,
        #[arg(long)]
        word: Option<String>,
    },
    /// Coordinate polynomials.
    Coordinate {
        #[command(subcommand)]
        op: CoordinateOp,
    },
    /// Monic reducible equality case.
    Family { f: String },
    /// Symmetry of the two discriminant degrees.
    Symmetry { f: String },
    /// Local invariants over x = alpha, or over every rational critical value.
    Local {
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
    },
    /// Implicit equation of (u(s), v1(s)/v2(s)).
    Implicitize {
        u: String,
        #[arg(allow_hyphen_values = true)]
        v1: String,
        #[arg(default_value = "1", allow_hyphen_values = true)]
        v2: String,
    },
    /// Seeded search for minimal polynomials; prints one JSON line per hit.
    Search {
        #[arg(long, default_value = "4,3,1")]
        shape: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        resume: u64,
        #[arg(long = "box", default_value_t = 2)]
        coeff_box: i64,
    },
    /// Discriminant bound and equality classification of a factored form.
    Classify {
        product: String,
        /// Only check the bound.
        #[arg(long)]
        bound_only: bool,
    },
    /// Automorphism identities for a generator word.
    Appendixc { word: String },
    /// Runs the invariant suite.
    Selftest,
}

#[derive(Subcommand)]
enum CoordinateOp {
    /// Word sigma with f o sigma = y.
    Extract { f: String },
    /// Seeded random coordinate polynomial.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        steps: usize,
        #[arg(long, default_value_t = 3)]
        coeff_bound: i64,
        #[arg(long, default_value_t = 3)]
        deg_bound: usize,
    },
}

type Outcome = Result<Value, Error>;

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialise")
}

fn read_arg(s: &str) -> Result<String, Error> {
    match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map(|t| t.trim().to_string())
            .map_err(|e| Error::BadParams(format!("cannot read {path}: {e}"))),
        None => Ok(s.to_string()),
    }
}

fn parse_rat(s: &str) -> Result<Rat, Error> {
    let u = parse_upoly(s, 'x')?;
    if !u.is_constant() {
        return Err(Error::Syntax { offset: 0, message: "expected a rational number".into() });
    }
    Ok(u.coeff(0))
}

fn parse_shape(s: &str) -> Result<(usize, usize, usize), Error> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Error::Syntax { offset: 0, message: format!("expected dU,dV1,dV2, got {s:?}") };
    if parts.len() != 3 {
        return Err(bad());
    }
    let n: Vec<usize> = parts.iter().map(|p| p.parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
    Ok((n[0], n[1], n[2]))
}

fn envelope(command: &str, input: Value, outcome: Outcome) -> (Value, ExitCode) {
    match outcome {
        Ok(result) => (json!({"command": command, "input": input, "status": "ok", "result": result}), ExitCode::SUCCESS),
        Err(e) => {
            let code = if e.is_usage() { 2 } else { 1 };
            let error = json!({"kind": e.kind(), "message": e.to_string(), "offset": e.offset()});
            (
                json!({"command": command, "input": input, "status": "error", "result": null, "error": error}),
                ExitCode::from(code),
            )
        }
    }
}

fn emit(v: &Value) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{v}");
}

fn disc(f: &str) -> Outcome {
    let r = disc_affine(&parse_poly(f)?)?;
    let mut v = to_value(&r);
    v["bound"] = json!(r.upper_bound);
    Ok(v)
}

fn orbit(f: &str, matrix: Option<&str>, word: Option<&str>) -> Outcome {
    if let Some(m) = matrix {
        let sigma = GMat::parse(m)?;
        if f.contains('Y') {
            let form = parse_form(f)?;
            return Ok(json!({"matrix": sigma, "image": apply_form(&sigma, &form)}));
        }
        let image = apply_affine(&sigma, &parse_poly(f)?)?;
        return Ok(json!({"matrix": sigma, "image": image}));
    }
    let w = AutWord::parse(word.expect("clap enforces one of matrix/word"))?;
    let image = w.apply(&parse_poly(f)?);
    Ok(json!({"word": w, "image": image}))
}

fn local(f: &str, alpha: Option<&str>) -> Outcome {
    let f = parse_poly(f)?;
    let alphas = match alpha {
        Some(a) => vec![parse_rat(a)?],
        None => critical_values(&f)?,
    };
    let mut fibers = Vec::new();
    for a in &alphas {
        let report = local_invariants(&f, a)?;
        let teissier = teissier_check(&f, a)?;
        fibers.push(json!({"report": report, "teissier": teissier}));
    }
    Ok(json!({"alphas": alphas.iter().map(fmt_rat).collect::<Vec<_>>(), "fibers": fibers}))
}

fn search(shape: &str, seed: u64, budget: u64, resume: u64, coeff_box: i64) -> ExitCode {
    const CHUNK: u64 = 250;
    let input = json!({"shape": shape, "seed": seed, "budget": budget, "resume": resume, "box": coeff_box});
    let shape = match parse_shape(shape) {
        Ok(s) => s,
        Err(e) => {
            let (v, code) = envelope("search", input, Err(e));
            emit(&v);
            return code;
        }
    };
    let mut cfg = SearchConfig::new(shape, seed, 0);
    cfg.coeff_box = coeff_box;
    cfg.offset = resume;
    let (mut examined, mut hits, mut grid) = (0u64, 0usize, 0u64);
    while examined < budget {
        cfg.budget = CHUNK.min(budget - examined);
        let out = match search_minimal(&cfg) {
            Ok(o) => o,
            Err(e) => {
                let (v, code) = envelope("search", input, Err(e));
                emit(&v);
                return code;
            }
        };
        grid = out.grid_size;
        for h in &out.hits {
            emit(&json!({"command": "search", "status": "ok", "hit": h}));
        }
        hits += out.hits.len();
        examined += out.examined;
        cfg.offset = out.next_offset;
        if out.examined == 0 {
            break;
        }
    }
    let summary = json!({"grid_size": grid, "examined": examined, "hits": hits, "next_offset": cfg.offset});
    let (v, code) = envelope("search", input, Ok(summary));
    emit(&v);
    code
}

fn run(cli: Cli) -> ExitCode {
    let text = |s: &str| read_arg(s);
    let (name, input, outcome): (&str, Value, Outcome) = match &cli.cmd {
        Cmd::Disc { f } => ("disc", json!(f), text(f).and_then(|f| disc(&f))),
        Cmd::Resultant { f, g } => (
            "resultant",
            json!([f, g]),
            (|| {
                let r = resultant_y(&parse_poly(&text(f)?)?, &parse_poly(&text(g)?)?)?;
                Ok(json!({"resultant": r, "deg": r.deg()}))
            })(),
        ),
        Cmd::Polytope { f } => ("polytope", json!(f), (|| Ok(to_value(&generic_polytope(&parse_poly(&text(f)?)?)?)))()),
        Cmd::Charpoly { f } => ("charpoly", json!(f), (|| Ok(to_value(&edge_char_data(&parse_poly(&text(f)?)?)?)))()),
        Cmd::Minimal { f } => ("minimal", json!(f), (|| Ok(to_value(&minimality_report(&parse_poly(&text(f)?)?)?)))()),
        Cmd::Reduce { f, cases } => (
            "reduce",
            json!(f),
            (|| {
                let f = parse_poly(&text(f)?)?;
                Ok(if *cases { to_value(&divisibility_report(&f)?) } else { to_value(&g_reduce(&f)?) })
            })(),
        ),
        Cmd::Orbit { f, matrix, word } => (
            "orbit",
            json!({"f": f, "matrix": matrix, "word": word}),
            (|| {
                let m = matrix.as_deref().map(text).transpose()?;
                let w = word.as_deref().map(text).transpose()?;
                orbit(&text(f)?, m.as_deref(), w.as_deref())
            })(),
        ),
        Cmd::Coordinate { op: CoordinateOp::Extract { f } } => (
            "coordinate",
            json!(f),
            (|| {
                let f = parse_poly(&text(f)?)?;
                let w = extract_automorphism(&f)?;
                Ok(json!({"word": w, "check": w.apply(&f)}))
            })(),
        ),
        Cmd::Coordinate { op: CoordinateOp::Random { seed, steps, coeff_bound, deg_bound } } => (
            "coordinate",
            json!({"seed": seed, "steps": steps, "coeff_bound": coeff_bound, "deg_bound": deg_bound}),
            random_coordinate(*seed, *steps, *coeff_bound, *deg_bound).map(|(f, w)| json!({"f": f, "word": w})),
        ),
        Cmd::Family { f } => ("family", json!(f), (|| Ok(to_value(&monic_family_check(&parse_poly(&text(f)?)?)?)))()),
        Cmd::Symmetry { f } => ("symmetry", json!(f), (|| Ok(to_value(&symmetry_report(&parse_poly(&text(f)?)?)?)))()),
        Cmd::Local { f, alpha } => ("local", json!({"f": f, "alpha": alpha}), (|| local(&text(f)?, alpha.as_deref()))()),
        Cmd::Implicitize { u, v1, v2 } => (
            "implicitize",
            json!([u, v1, v2]),
            (|| Ok(to_value(&param_report(&RatParam::parse(&text(u)?, &text(v1)?, &text(v2)?)?)?)))(),
        ),
        Cmd::Search { shape, seed, budget, resume, coeff_box } => {
            return search(shape, *seed, *budget, *resume, *coeff_box);
        }
        Cmd::Classify { product, bound_only } => (
            "classify",
            json!(product),
            (|| {
                let factors = parse_form_product(&text(product)?)?;
                Ok(if *bound_only { to_value(&verify_bound(&factors)?) } else { to_value(&classify_form(&factors)?) })
            })(),
        ),
        Cmd::Appendixc { word } => (
            "appendixc",
            json!(word),
            (|| Ok(to_value(&verify_appendix_c(&AutWord::parse(&text(word)?)?)?)))(),
        ),
        Cmd::Selftest => {
            let report = mindisc::selftest::run();
            for c in &report.checks {
                eprintln!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            eprintln!("{} passed, {} failed", report.passed, report.failed);
            let failed = report.failed;
            let (mut v, _) = envelope("selftest", Value::Null, Ok(to_value(&report)));
            if failed > 0 {
                v["status"] = json!("error");
                v["error"] = json!({"kind": "SelftestFailed", "message": format!("{failed} checks failed"), "offset": null});
            }
            emit(&v);
            return if failed > 0 { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let (v, code) = envelope(name, input, outcome);
    emit(&v);
    code
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let error = json!({"kind": "UsageError", "message": e.kind().to_string(), "offset": null});
            emit(&json!({"command": null, "input": null, "status": "error", "result": null, "error": error}));
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    if let Some(n) = cli.threads {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    run(cli)
}
