//! Command-line surface: build catalog complexes, compute invariants and
//! certificates, run the census, and convert between the on-disk formats.
//!
//! Exit codes: 0 success, 1 domain error (a structured JSON error record is
//! written to stderr), 2 usage error.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::process::ExitCode;

use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

use kappa_core::bounds::{certificate, counting_bounds, CountingBounds, SigmaBounds};
use kappa_core::census::{census, CensusBudget};
use kappa_core::colored::{check_properties, decode, encode, ColoredGraph};
use kappa_core::compile::{complex_to_presentation, presentation_to_complex};
use kappa_core::constructions;
use kappa_core::group::GroupSpec;
use kappa_core::homology::{homology_summary, Coefficients};

use kappa_core::metric::{homological_systole, EdgeMetric};
use kappa_core::presentation::{format_word, parse_word, Presentation};
use kappa_core::{MarkedComplex, Simplex2Complex};

const USAGE: &str = "kappa <verb> [args]

verbs:
  build <name>            build a catalog complex (rp2 | torus | moebius |
                          circle | telescope:n | cyclic:m |
                          abelian:r:(n1,...) | surface:l |
                          freeprod:(name,...))
  invariants              counts, Euler characteristic, homology of a complex
  bounds --group <spec>   certified kappa/sigma bound certificate
  census                  enumerate small minimal-candidate complexes
  encode                  complex -> 3-colored graph
  decode                  3-colored graph -> complex
  compile --gens N --rel W [--rel W ...]   presentation -> complex
  present                 complex -> presentation (raw + simplified)
  systole [--ring R]      shortest homologically nontrivial cycle (R: z |
                          z2 | zp:P; default z when H1 has rank, else z2)
  count <T> [--sigma]     counting bounds in log2 space

flags:
  --format json|table     output format (default json)
  --in FILE               input file (default stdin)
  --out FILE              output file (default stdout)
  --max-T N               census triangle ceiling (default 6, max 10
                          without --allow-large)
  --budget-nodes N        census node budget per search branch
  --budget-seconds S      census wall-clock budget (marks output incomplete)
  --workers N             census worker threads (output is identical)
";

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match run(&argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("{USAGE}");
            ExitCode::from(2)
        }
        Err(CliError::Domain { code, message }) => {
            let record = json!({"error": {"code": code, "message": message}});
            eprintln!("{record}");
            ExitCode::from(1)
        }
    }
}

enum CliError {
    Usage(String),
    Domain { code: String, message: String },
}

fn domain(code: &str, err: impl std::fmt::Display) -> CliError {
    CliError::Domain {
        code: code.into(),
        message: err.to_string(),
    }
}

struct Args {
    positional: Vec<String>,
    values: BTreeMap<String, String>,
    relators: Vec<String>,
    sigma: bool,
    allow_large: bool,
}

const VALUE_FLAGS: &[&str] = &[
    "--format",
    "--in",
    "--out",
    "--group",
    "--gens",
    "--ring",
    "--max-T",
    "--budget-nodes",
    "--budget-seconds",
    "--workers",
];

fn parse_args(argv: &[String]) -> Result<Args, CliError> {
    let mut args = Args {
        positional: Vec::new(),
        values: BTreeMap::new(),
        relators: Vec::new(),
        sigma: false,
        allow_large: false,
    };
    let mut i = 0;
    while i < argv.len() {
        let token = &argv[i];
        if token == "--sigma" {
            args.sigma = true;
        } else if token == "--allow-large" {
            args.allow_large = true;
        } else if token == "--rel" {
            i += 1;
            let w = argv
                .get(i)
                .ok_or_else(|| CliError::Usage("--rel needs a word".into()))?;
            args.relators.push(w.clone());
        } else if VALUE_FLAGS.contains(&token.as_str()) {
            i += 1;
            let v = argv
                .get(i)
                .ok_or_else(|| CliError::Usage(format!("{token} needs a value")))?;
            args.values.insert(token.clone(), v.clone());
        } else if token.starts_with("--") {
            return Err(CliError::Usage(format!("unknown flag {token}")));
        } else {
            args.positional.push(token.clone());
        }
        i += 1;
    }
    Ok(args)
}

fn run(argv: &[String]) -> Result<(), CliError> {
    let Some(verb) = argv.first() else {
        return Err(CliError::Usage("missing verb".into()));
    };
    let args = parse_args(&argv[1..])?;
    let format = match args.values.get("--format").map(String::as_str) {
        None | Some("json") => Format::Json,
        Some("table") => Format::Table,
        Some(other) => return Err(CliError::Usage(format!("unknown format {other}"))),
    };
    let output = match verb.as_str() {
        "build" => cmd_build(&args)?,
        "invariants" => cmd_invariants(&args)?,
        "bounds" => cmd_bounds(&args)?,
        "census" => cmd_census(&args)?,
        "encode" => cmd_encode(&args)?,
        "decode" => cmd_decode(&args)?,
        "compile" => cmd_compile(&args)?,
        "present" => cmd_present(&args)?,
        "systole" => cmd_systole(&args)?,
        "count" => cmd_count(&args)?,
        other => return Err(CliError::Usage(format!("unknown verb {other}"))),
    };
    let rendered = match output {
        Output::Value(v) => render(&v, format),
        Output::Raw(s) => s,
    };
    write_output(&args, &rendered)
}

enum Output {
    Value(Value),
    Raw(String),
}

#[derive(Clone, Copy)]
enum Format {
    Json,
    Table,
}

fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string(value).expect("serializable");
            s.push('\n');
            s
        }
        Format::Table => {
            let mut out = String::new();
            match value {
                Value::Object(map) => {
                    for (k, v) in map {
                        out.push_str(&format!("{k}\t{v}\n"));
                    }
                }
                other => out.push_str(&format!("{other}\n")),
            }
            out
        }
    }
}

fn write_output(args: &Args, rendered: &str) -> Result<(), CliError> {
    match args.values.get("--out") {
        None => {
            std::io::stdout()
                .write_all(rendered.as_bytes())
                .map_err(|e| domain("Io", e))?;
            Ok(())
        }
        Some(path) => std::fs::write(path, rendered).map_err(|e| domain("Io", e)),
    }
}

fn read_input(args: &Args) -> Result<String, CliError> {
    match args.values.get("--in") {
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| domain("Io", e))?;
            Ok(buf)
        }
        Some(path) => std::fs::read_to_string(path).map_err(|e| domain("Io", e)),
    }
}

fn read_complex(args: &Args) -> Result<MarkedComplex, CliError> {
    let text = read_input(args)?;
    serde_json::from_str::<MarkedComplex>(&text).map_err(|e| domain("InvalidComplex", e))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn bigint_number(n: &num_bigint::BigInt) -> Value {
    // Arbitrary-precision JSON numbers (the serde_json feature is enabled).
    let number: serde_json::Number = n.to_string().parse().expect("integer literal");
    Value::Number(number)
}

fn cmd_build(args: &Args) -> Result<Output, CliError> {
    let name = args
        .positional
        .first()
        .ok_or_else(|| CliError::Usage("build needs a construction name".into()))?;
    let built = constructions::build(name).map_err(|e| domain("Construction", e))?;
    Ok(Output::Value(to_value(&built)))
}

fn invariants_value(x: &Simplex2Complex) -> Value {
    let stats = x.stats();
    let h = homology_summary(x);
    json!({
        "s0": stats.s0,
        "s1": stats.s1,
        "s2": stats.s2,
        "euler": stats.euler,
        "betti": [h.betti.0, h.betti.1, h.betti.2],
        "torsion": h.h1_torsion_factors.iter().map(bigint_number).collect::<Vec<_>>(),
    })
}

fn cmd_invariants(args: &Args) -> Result<Output, CliError> {
    let marked = read_complex(args)?;
    Ok(Output::Value(invariants_value(marked.complex())))
}

fn sigma_value(sigma: &SigmaBounds) -> Value {
    json!({
        "lo": sigma.lo.decimal_lo(30),
        "lo_reason": to_value(&sigma.lo_reason),
        "hi": sigma.hi.decimal_hi(30),
        "hi_reason": to_value(&sigma.hi_reason),
        "kappa_hi_used": sigma.kappa_hi_used,
        "exact": sigma.known_exact.as_ref().map(|e| e.decimal_lo(30)),
    })
}

fn cmd_bounds(args: &Args) -> Result<Output, CliError> {
    let spec_str = args
        .values
        .get("--group")
        .ok_or_else(|| CliError::Usage("bounds needs --group".into()))?;
    let spec = GroupSpec::parse(spec_str).map_err(|e| domain("GroupSpec", e))?;
    let cert = certificate(&spec).map_err(|e| domain("Bounds", e))?;
    let kappa = &cert.kappa;
    let mut notes = kappa.notes.clone();
    notes.extend(cert.sigma.notes.iter().cloned());
    let value = json!({
        "spec": spec.to_string(),
        "kappa": {
            "lo": kappa.lo,
            "lo_reason": to_value(&kappa.lo_reason),
            "hi": kappa.hi,
            "hi_witness": to_value(&kappa.hi_provenance),
            "exact": kappa.known_exact,
        },
        "sigma": sigma_value(&cert.sigma),
        "notes": notes,
    });
    Ok(Output::Value(value))
}

fn cmd_census(args: &Args) -> Result<Output, CliError> {
    let max_t: u64 = match args.values.get("--max-T") {
        None => 6,
        Some(v) => v
            .parse()
            .map_err(|_| CliError::Usage("--max-T needs an integer".into()))?,
    };
    if max_t > 10 && !args.allow_large {
        return Err(CliError::Usage(
            "census above T = 10 needs --allow-large (expect a long run)".into(),
        ));
    }
    let parse_u64 = |key: &str| -> Result<Option<u64>, CliError> {
        args.values
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| CliError::Usage(format!("{key} needs an integer")))
            })
            .transpose()
    };
    let budget = CensusBudget {
        max_nodes_per_branch: parse_u64("--budget-nodes")?,
        max_seconds: parse_u64("--budget-seconds")?,
        workers: parse_u64("--workers")?.unwrap_or(1) as usize,
    };
    let result = census(max_t, &budget);
    Ok(Output::Raw(result.to_ndjson()))
}

fn cmd_encode(args: &Args) -> Result<Output, CliError> {
    let marked = read_complex(args)?;
    let gc = encode(marked.complex());
    let s2 = marked.complex().triangles().len() as u64;
    let report = check_properties(&gc, s2);
    let mut value = to_value(&gc);
    value["properties_at_own_size"] = to_value(&report);
    Ok(Output::Value(value))
}

fn cmd_decode(args: &Args) -> Result<Output, CliError> {
    let text = read_input(args)?;
    let gc: ColoredGraph =
        serde_json::from_str(&text).map_err(|e| domain("InvalidColoredGraph", e))?;
    let x = decode(&gc).map_err(|e| domain("NotAComplex", e))?;
    Ok(Output::Value(to_value(&x)))
}

fn cmd_compile(args: &Args) -> Result<Output, CliError> {
    let gens: usize = args
        .values
        .get("--gens")
        .ok_or_else(|| CliError::Usage("compile needs --gens".into()))?
        .parse()
        .map_err(|_| CliError::Usage("--gens needs an integer".into()))?;
    let mut relators = Vec::new();
    for word in &args.relators {
        relators.push(parse_word(word, gens).map_err(|e| domain("Presentation", e))?);
    }
    let p = Presentation::new(gens, relators).map_err(|e| domain("Presentation", e))?;
    let x = presentation_to_complex(&p).map_err(|e| domain("Compile", e))?;
    Ok(Output::Value(to_value(&x)))
}

fn cmd_present(args: &Args) -> Result<Output, CliError> {
    let marked = read_complex(args)?;
    let p = complex_to_presentation(marked.complex()).map_err(|e| domain("Extract", e))?;
    let simplified = p.tietze_simplify();
    let ab = simplified.abelianization();
    let words =
        |q: &Presentation| -> Vec<String> { q.relators().iter().map(|w| format_word(w)).collect() };
    Ok(Output::Value(json!({
        "generators": p.generator_count(),
        "relators": words(&p),
        "simplified": {
            "generators": simplified.generator_count(),
            "relators": words(&simplified),
        },
        "abelianization": {
            "rank": ab.free_rank,
            "torsion": ab.torsion.iter().map(bigint_number).collect::<Vec<_>>(),
        },
    })))
}

fn cmd_systole(args: &Args) -> Result<Output, CliError> {
    let marked = read_complex(args)?;
    let x = marked.complex();
    let coeffs = match args.values.get("--ring").map(String::as_str) {
        Some("z") => Coefficients::Integers,
        Some("z2") => Coefficients::ModP(2),
        Some(other) => {
            if let Some(p) = other.strip_prefix("zp:") {
                let p: u64 = p
                    .parse()
                    .map_err(|_| CliError::Usage("zp:P needs a prime".into()))?;
                Coefficients::ModP(p)
            } else {
                return Err(CliError::Usage(format!("unknown ring {other}")));
            }
        }
        None => {
            let h = homology_summary(x);
            if h.betti.1 > 0 {
                Coefficients::Integers
            } else {
                Coefficients::ModP(2)
            }
        }
    };
    let metric = EdgeMetric::unit(x);
    let result = homological_systole(x, &metric, coeffs).map_err(|e| domain("Systole", e))?;
    let ring = match result.coefficients {
        Coefficients::Integers => "z".to_string(),
        Coefficients::ModP(p) => format!("zp:{p}"),
    };
    let length = rational_string(&result.length);
    Ok(Output::Value(json!({
        "length": length,
        "witness_cycle": result.witness_cycle,
        "ring": ring,
    })))
}

fn rational_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn cmd_count(args: &Args) -> Result<Output, CliError> {
    let t: u64 = args
        .positional
        .first()
        .ok_or_else(|| CliError::Usage("count needs T".into()))?
        .parse()
        .map_err(|_| CliError::Usage("count needs an integer T".into()))?;
    match counting_bounds(t, args.sigma).map_err(|e| domain("Counting", e))? {
        CountingBounds::Kappa(k) => Ok(Output::Value(json!({
            "side": "kappa",
            "t": k.t,
            "log2_full": k.log2_full,
            "log2_simplified": k.log2_simplified,
            "log2_lower_abelian": k.log2_lower_abelian,
        }))),
        CountingBounds::Sigma(s) => Ok(Output::Value(json!({
            "side": "sigma",
            "t": s.t,
            "log2_lower": s.log2_lower.decimal_lo(30),
            "log2_upper": s.log2_upper.decimal_hi(30),
        }))),
    }
}
