use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::process::ExitCode;
use t36::curve::{CurveData, LambdaMode};
use t36::factor::{build_q, complement, QMatrix};
use t36::field::{PrimeField, Rationals};
use t36::io::{matrix_to_json, matrix_to_latex, parse_lambda, parse_matrix_json, parse_pencil_json, AnyPencil};
use t36::pencil::{decompose, EigenSearch, Pencil, PencilError};
use t36::poly::{PolyMatrix, Rational};
use t36::verify::{branch_invariants, report, BranchInvariant, ReportJson, DEFAULT_LAMBDA0};
use t36::words::{blocks_to_words, enumerate, Word};

#[derive(Parser)]
#[command(name = "t36", version, about = "Matrix factorizations of x(x - y^2)(x - l*y^2)")]
struct Cli {
    /// "symbolic" or a rational p/q outside {0, 1}
    #[arg(long, global = true, env = "T36_LAMBDA", default_value = "symbolic")]
    lambda: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// seed for the randomized self-checks of `invariants`
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the word types up to a size
    Words {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_n: u64,
    },
    /// Build or verify matrix factorizations
    Mf {
        #[command(subcommand)]
        cmd: MfCmd,
    },
    /// Kronecker decomposition of a pencil file
    Pencil {
        #[command(subcommand)]
        cmd: PencilCmd,
    },
    /// Smith-form valuations along the three branches
    Invariants(Target),
}

#[derive(Subcommand)]
enum MfCmd {
    /// Print the Q-matrix of a word
    Build {
        #[arg(long)]
        word: String,
        /// also print the complementary factor
        #[arg(long)]
        with_complement: bool,
    },
    /// Check Q·ψ = ψ·Q = F·I and minimality
    Verify(Target),
}

#[derive(Subcommand)]
enum PencilCmd {
    Decompose { file: String },
}

#[derive(Args)]
struct Target {
    #[arg(long, conflicts_with_all = ["matrix", "all"])]
    word: Option<String>,
    /// matrix JSON file
    #[arg(long, conflicts_with = "all")]
    matrix: Option<String>,
    /// every word up to --max-n
    #[arg(long, requires = "max_n")]
    all: bool,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_n: Option<u64>,
}

/// Exit 2: bad input; exit 1: the mathematics failed.
enum Failure {
    Usage(String),
    Check(String),
}

type Outcome = Result<String, Failure>;

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn curve_for(mode: LambdaMode) -> Result<CurveData, Failure> {
    t36::curve::make_curve(mode).map_err(usage)
}

fn parse_word(s: &str) -> Result<Word, Failure> {
    s.parse().map_err(usage)
}

fn read_file(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

fn labeled_text(q: &QMatrix) -> String {
    let mut out = format!("{} ({}×{})\n", q.word, q.q.rows(), q.q.cols());
    let _ = writeln!(out, "generators: {}", q.labels.join(", "));
    out.push_str(&q.q.to_string());
    out
}

/// Rule between row generators (u…) and column generators (v…).
fn v_split(labels: &[String]) -> Option<usize> {
    labels.iter().position(|l| l.starts_with('v'))
}

fn cmd_words(max_n: usize, fmt: Format) -> Outcome {
    let words = enumerate(max_n);
    Ok(match fmt {
        Format::Json => {
            let v: Vec<_> = words
                .iter()
                .map(|w| {
                    json!({
                        "word": w.to_string(),
                        "family": w.family.code(),
                        "n": w.n,
                        "left_cut": w.left_cut,
                        "right_cut": w.right_cut,
                        "letters": w.letters_string(),
                    })
                })
                .collect();
            serde_json::to_string_pretty(&v).expect("serializable")
        }
        _ => words.iter().map(|w| format!("{w}\t{}", w.letters_string())).collect::<Vec<_>>().join("\n"),
    })
}

fn cmd_build(word: &str, with_complement: bool, mode: LambdaMode, fmt: Format) -> Outcome {
    let w = parse_word(word)?;
    let curve = curve_for(mode.clone())?;
    let q = build_q(&w, &curve);
    let (r, _) = report(None, &q.q, &curve);
    if !r.passed() {
        return Err(Failure::Check(format!(
            "{w}: built matrix fails verification ({})",
            r.detail.unwrap_or_default()
        )));
    }
    let psi = if with_complement {
        Some(complement(&q.q, &curve).map_err(|e| Failure::Check(e.to_string()))?)
    } else {
        None
    };
    Ok(match fmt {
        Format::Json => match psi {
            None => matrix_to_json(&q.q, &mode),
            Some(psi) => {
                let parse = |s: String| serde_json::from_str::<serde_json::Value>(&s).expect("valid JSON");
                let v = json!({
                    "word": w.to_string(),
                    "labels": q.labels,
                    "q": parse(matrix_to_json(&q.q, &mode)),
                    "psi": parse(matrix_to_json(&psi, &mode)),
                });
                serde_json::to_string_pretty(&v).expect("serializable")
            }
        },
        Format::Latex => {
            let split = v_split(&q.labels);
            let mut out = matrix_to_latex(&q.q, split);
            if let Some(psi) = psi {
                out.push_str("\n\n");
                out.push_str(&matrix_to_latex(&psi, split));
            }
            out
        }
        Format::Text => {
            let mut out = labeled_text(&q);
            if let Some(psi) = psi {
                out.push_str("\ncomplement:\n");
                out.push_str(&psi.to_string());
            }
            out
        }
    })
}

fn report_line(r: &ReportJson) -> String {
    let name = r.word.clone().unwrap_or_else(|| "matrix".into());
    let status = if r.ok && r.minimal { "ok" } else { "FAIL" };
    let det = r
        .det_exponents
        .as_ref()
        .map(|d| format!("det=x^{} z^{} z'^{}", d.x, d.z, d.zp))
        .unwrap_or_else(|| "det=?".into());
    let mut line = format!(
        "{name}\t{status}\tsize={}\t{det}\tminimal={}\treduced={}",
        r.size, r.minimal, r.reduced
    );
    if let Some(v) = &r.branch_valuations {
        let _ = write!(line, "\tbranches={v}");
    }
    if let Some(d) = &r.detail {
        let _ = write!(line, "\t({d})");
    }
    line
}

/// Matrices to work on: one word, one file, or every word up to max_n.
fn targets(t: &Target, mode: &LambdaMode) -> Result<Vec<(Option<String>, PolyMatrix, LambdaMode)>, Failure> {
    if let Some(path) = &t.matrix {
        let (m, file_mode) = parse_matrix_json(&read_file(path)?).map_err(usage)?;
        return Ok(vec![(None, m, file_mode)]);
    }
    let words = match (&t.word, t.all) {
        (Some(w), _) => vec![parse_word(w)?],
        (None, true) => enumerate(t.max_n.unwrap_or(1) as usize),
        (None, false) => return Err(Failure::Usage("give --word, --matrix or --all".into())),
    };
    let curve = curve_for(mode.clone())?;
    Ok(words
        .par_iter()
        .map(|w| (Some(w.to_string()), build_q(w, &curve).q, mode.clone()))
        .collect())
}

fn cmd_verify(t: &Target, mode: LambdaMode, fmt: Format) -> Outcome {
    let jobs = targets(t, &mode)?;
    let reports: Vec<ReportJson> = jobs
        .par_iter()
        .map(|(w, m, md)| {
            let curve = t36::curve::make_curve(md.clone()).expect("validated λ");
            report(w.clone(), m, &curve).1
        })
        .collect();
    let all_ok = reports.iter().all(|r| r.ok && r.minimal);
    let text = match fmt {
        Format::Json if t.all => serde_json::to_string_pretty(&reports).expect("serializable"),
        Format::Json => serde_json::to_string_pretty(&reports[0]).expect("serializable"),
        _ => {
            let mut s: Vec<String> = reports.iter().map(report_line).collect();
            if t.all {
                let n_ok = reports.iter().filter(|r| r.ok && r.minimal).count();
                s.push(format!("{n_ok}/{} passed", reports.len()));
            }
            s.join("\n")
        }
    };
    if all_ok {
        Ok(text)
    } else {
        Err(Failure::Check(text))
    }
}

fn stable_under_unimodular(m: &PolyMatrix, curve: &CurveData, inv: &BranchInvariant, seed: u64) -> bool {
    use rand::SeedableRng;
    use t36::curve::branch_eval;
    use t36::verify::{cap_valuations, local_valuations, mul_univariate, random_unimodular, to_univariate};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let branches = curve.branches(&inv.lambda0);
    (0..3).all(|_| {
        branches.iter().zip(&inv.valuations).all(|(b, want)| {
            let prec = want.iter().flatten().max().map_or(1, |v| v + 2);
            let base = to_univariate(&branch_eval(m, b)).expect("polynomial in t");
            let u = random_unimodular(base.len(), &mut rng);
            let v = random_unimodular(base.first().map_or(0, Vec::len), &mut rng);
            let moved = mul_univariate(&mul_univariate(&u, &base), &v);
            local_valuations(&moved, prec) == cap_valuations(want, prec)
        })
    })
}

fn cmd_invariants(t: &Target, mode: LambdaMode, fmt: Format, seed: u64) -> Outcome {
    let jobs = targets(t, &mode)?;
    let lambda0 = Rational::from_integer(DEFAULT_LAMBDA0.into());
    let rows: Vec<(String, BranchInvariant, bool)> = jobs
        .par_iter()
        .map(|(w, m, md)| {
            let curve = t36::curve::make_curve(md.clone()).expect("validated λ");
            let inv = branch_invariants(m, &curve, &lambda0);
            let stable = stable_under_unimodular(m, &curve, &inv, seed);
            (w.clone().unwrap_or_else(|| "matrix".into()), inv, stable)
        })
        .collect();
    // words sharing identical invariants
    let mut groups: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (w, inv, _) in &rows {
        groups.entry(inv.to_json().to_string()).or_default().push(w.clone());
    }
    let collisions: Vec<&Vec<String>> = groups.values().filter(|g| g.len() > 1).collect();
    let stable = rows.iter().all(|r| r.2);
    let text = match fmt {
        Format::Json => {
            let v = json!({
                "lambda0": rows.first().map(|r| r.1.lambda0.to_string()),
                "lambda_mode": mode.to_string(),
                "invariants": rows.iter().map(|(w, inv, st)| json!({
                    "word": w, "branch_valuations": inv.to_json(), "stable": st,
                })).collect::<Vec<_>>(),
                "collisions": collisions,
            });
            serde_json::to_string_pretty(&v).expect("serializable")
        }
        _ => {
            let mut s: Vec<String> =
                rows.iter().map(|(w, inv, st)| format!("{w}\t{}\tstable={st}", inv.to_json())).collect();
            if rows.len() > 1 {
                s.push(format!("collisions: {}", collisions.len()));
                for g in &collisions {
                    s.push(format!("  {}", g.join(" ")));
                }
            }
            s.join("\n")
        }
    };
    if stable {
        Ok(text)
    } else {
        Err(Failure::Check(text))
    }
}

fn decompose_any<F: EigenSearch>(k: &F, p: &Pencil<F::Elem>, fmt: Format) -> Outcome {
    let blocks = decompose(k, p).map_err(|e| match e {
        PencilError::EigenvalueNotInField(_) => Failure::Check(e.to_string()),
        other => Failure::Usage(other.to_string()),
    })?;
    let names: Vec<String> = blocks.iter().map(|b| b.display(k)).collect();
    let words = blocks_to_words(&blocks, &[]).ok();
    Ok(match fmt {
        Format::Json => {
            let v = json!({
                "field": k.descriptor(),
                "blocks": names,
                "words": words.map(|ws| ws.iter().map(|w| w.to_string()).collect::<Vec<_>>()),
            });
            serde_json::to_string_pretty(&v).expect("serializable")
        }
        _ => {
            let mut s = names.join(", ");
            if let Some(ws) = words {
                let ws: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
                let _ = write!(s, "\nwords: {}", ws.join(" "));
            }
            s
        }
    })
}

fn cmd_pencil(file: &str, fmt: Format) -> Outcome {
    match parse_pencil_json(&read_file(file)?).map_err(usage)? {
        AnyPencil::Q(p) => decompose_any(&Rationals, &p, fmt),
        AnyPencil::Fp(k, p) => decompose_any::<PrimeField>(&k, &p, fmt),
    }
}

fn run(cli: Cli) -> Outcome {
    let mode = parse_lambda(&cli.lambda).map_err(usage)?;
    match &cli.cmd {
        Cmd::Words { max_n } => cmd_words(*max_n as usize, cli.format),
        Cmd::Mf { cmd: MfCmd::Build { word, with_complement } } => {
            cmd_build(word, *with_complement, mode, cli.format)
        }
        Cmd::Mf { cmd: MfCmd::Verify(t) } => cmd_verify(t, mode, cli.format),
        Cmd::Pencil { cmd: PencilCmd::Decompose { file } } => cmd_pencil(file, cli.format),
        Cmd::Invariants(t) => cmd_invariants(t, mode, cli.format, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Check(out)) => {
            println!("{out}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
