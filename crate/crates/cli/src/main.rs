mod input;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use warrow::classify::{
    decide_homotopy, decide_wk, homotopy_normal_form, make_lk, make_ti, wk_normal_form, AlphaRange, HomotopyDecision,
    WkDecision,
};
use warrow::expand::{expand_once, full_expand, surgery};
use warrow::ftcheck::{alternating_sum, crossing_subsets, Functional, DEFAULT_SUBSET_LIMIT};
use warrow::group::{alexander, alexander_gcd, alpha_coeffs, wirtinger};
use warrow::milnor::{format_sequence, milnor_many, nonrepeated_sequences, parse_sequence};
use warrow::moves::{trace, MoveSpec};
use warrow::{Presentation, StrandKind};

use input::{parse_input, Input};

const DEFAULT_MAX_DEGREE: usize = 8;
const EXIT_DOMAIN: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DISTINCT: u8 = 3;

/// Invariants and rewriting for welded knotted objects given as w-tree
/// presentations or Gauss codes.
#[derive(Parser, Debug)]
#[command(name = "warrow", version)]
struct Cli {
    /// Input file (JSON presentation, JSON Gauss code, or Gauss text); stdin
    /// when absent.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Treat each non-empty input line as a separate object and print one
    /// JSON result per line.
    #[arg(long, global = true)]
    batch: bool,
    /// Worker threads for --batch.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    /// Print JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// All invariants that apply to the input.
    Invariants,
    /// Normalized Alexander polynomial (long knots) or the gcd of minors.
    Alexander,
    /// Coefficients α_2..α_K of a long knot.
    Alpha {
        #[arg(long)]
        kmax: usize,
    },
    /// Welded Milnor invariants of a string link.
    Milnor {
        /// Index sequence such as 123 or 1(10)2.
        #[arg(long, conflicts_with = "all_nonrepeated")]
        seq: Option<String>,
        /// Every sequence of distinct indices up to this length.
        #[arg(long, value_name = "N")]
        all_nonrepeated: Option<usize>,
    },
    /// Expand w-trees into w-arrows.
    Expand {
        /// Apply a single expansion to this tree only.
        #[arg(long)]
        tree: Option<usize>,
    },
    /// Gauss code of the surgery diagram.
    Surgery {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Apply a list of moves (JSON array or JSON lines) and print the trace
    /// followed by the resulting presentation.
    Moves {
        #[arg(long)]
        trace: PathBuf,
    },
    /// Normal form representative and exponents.
    Normalize(ModeArgs),
    /// Decide equivalence with another input; exit 0 when equal, 3 when
    /// distinct.
    Equiv {
        #[arg(long)]
        other: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Generator presentations.
    Generate {
        /// The long knot L_k.
        #[arg(long = "Lk", value_name = "K", conflicts_with = "ti")]
        lk: Option<usize>,
        /// The string link with tree T_I.
        #[arg(long = "TI", value_name = "SEQ", requires = "n")]
        ti: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        /// Use the inverse generator.
        #[arg(long)]
        inv: bool,
    },
    /// Alternating sums of an invariant over subsets of crossings.
    Ftcheck {
        /// alpha:K, alphas:K, mu:I or crossings.
        #[arg(long)]
        functional: String,
        /// Comma separated crossing ids.
        #[arg(long, conflicts_with = "size")]
        subset: Option<String>,
        /// Every subset of this size.
        #[arg(long)]
        size: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SUBSET_LIMIT)]
        limit: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Wk,
    Homotopy,
}

#[derive(Args, Debug)]
struct ModeArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    /// Degree for --mode wk.
    #[arg(long)]
    k: Option<usize>,
    /// Classify by α_2..α_{k-1} instead of α_2..α_k.
    #[arg(long)]
    exclusive: bool,
}

/// A command result: structured value, its plain-text rendering, and exit
/// code.
struct Reply {
    json: Value,
    text: String,
    code: u8,
}

impl Reply {
    fn new(json: Value, text: impl Into<String>) -> Self {
        Reply { json, text: text.into(), code: 0 }
    }

    fn presentation(p: &Presentation) -> Self {
        Reply::new(serde_json::from_str(&p.to_json()).expect("presentation JSON"), p.to_json())
    }
}

#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Usage(msg.into()).into())
}

fn max_degree() -> Result<usize> {
    match std::env::var("WARROW_MAX_DEGREE") {
        Ok(v) => v.trim().parse().map_err(|_| Usage(format!("WARROW_MAX_DEGREE must be a positive integer, got {v:?}")).into()),
        Err(_) => Ok(DEFAULT_MAX_DEGREE),
    }
}

fn check_degree(k: usize) -> Result<()> {
    let cap = max_degree()?;
    if k > cap {
        return usage(format!("degree {k} exceeds WARROW_MAX_DEGREE={cap}"));
    }
    Ok(())
}

fn read_text(path: &Option<PathBuf>) -> Result<String> {
    match path {
        Some(p) => std::fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display())),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("cannot read stdin")?;
            Ok(s)
        }
    }
}

fn read_input(path: &PathBuf) -> Result<Input> {
    parse_input(&read_text(&Some(path.clone()))?).with_context(|| format!("in {}", path.display()))
}

fn is_long_knot(p: &Presentation) -> bool {
    p.diagram.strands == [StrandKind::Open]
}

fn alexander_reply(p: &Presentation) -> Result<Reply> {
    if is_long_knot(p) {
        let d = alexander(p)?;
        Ok(Reply::new(json!({ "normalized": true, "degenerate": d.degenerate, "poly": d.poly }), d.poly.to_string()))
    } else {
        let g = alexander_gcd(&wirtinger(p))?;
        Ok(Reply::new(json!({ "normalized": false, "poly": g }), g.to_string()))
    }
}

fn milnor_reply(p: &Presentation, seqs: &[Vec<usize>]) -> Result<Reply> {
    for s in seqs {
        check_degree(s.len())?;
    }
    let values = milnor_many(p, seqs)?;
    let map: serde_json::Map<String, Value> = seqs.iter().zip(&values).map(|(s, v)| (format_sequence(s), json!(v))).collect();
    let text = if seqs.len() == 1 {
        values[0].to_string()
    } else {
        seqs.iter().zip(&values).map(|(s, v)| format!("{} {v}", format_sequence(s))).collect::<Vec<_>>().join("\n")
    };
    Ok(Reply::new(Value::Object(map), text))
}

fn invariants(p: &Presentation) -> Result<Reply> {
    let cap = max_degree()?;
    let alex = alexander_reply(p)?;
    let mut out = json!({ "strands": p.diagram.strands, "trees": p.trees.len(), "max_degree": p.max_degree(), "alexander": alex.text });
    let mut lines = vec![format!("alexander: {}", alex.text)];
    if is_long_knot(p) {
        let d = alexander(p)?;
        if !d.degenerate && cap >= 2 {
            let a = alpha_coeffs(&d.poly, cap)?;
            lines.push(format!("alpha: {}", a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")));
            out["alpha"] = json!(a);
        }
    } else if p.diagram.is_string_link() {
        let n = p.diagram.len();
        let seqs = nonrepeated_sequences(n, n.min(cap));
        let m = milnor_reply(p, &seqs)?;
        lines.extend(m.text.lines().map(|l| format!("mu {l}")));
        out["milnor"] = m.json;
    }
    Ok(Reply::new(out, lines.join("\n")))
}

fn wk_k(mode: &ModeArgs) -> Result<usize> {
    let Some(k) = mode.k else { return usage("--mode wk needs --k") };
    check_degree(k)?;
    Ok(k)
}

fn range(mode: &ModeArgs) -> AlphaRange {
    if mode.exclusive {
        AlphaRange::Exclusive
    } else {
        AlphaRange::Inclusive
    }
}

fn normalize(p: &Presentation, mode: &ModeArgs) -> Result<Reply> {
    match mode.mode {
        Mode::Wk => {
            let nf = wk_normal_form(p, wk_k(mode)?, range(mode))?;
            let rep: Value = serde_json::from_str(&nf.representative.to_json())?;
            let text = format!("exponents: {:?}\n{}", nf.exponents, nf.representative.to_json());
            Ok(Reply::new(json!({ "k": nf.k, "exponents": nf.exponents, "representative": rep }), text))
        }
        Mode::Homotopy => {
            let nf = homotopy_normal_form(p)?;
            let rep: Value = serde_json::from_str(&nf.representative.to_json())?;
            let exps = nf.exponents();
            let text = format!(
                "exponents: {}\n{}",
                exps.iter().map(|(s, x)| format!("{s}={x}")).collect::<Vec<_>>().join(" "),
                nf.representative.to_json()
            );
            Ok(Reply::new(json!({ "n": nf.n, "exponents": exps, "representative": rep }), text))
        }
    }
}

fn equiv(p: &Presentation, q: &Presentation, mode: &ModeArgs) -> Result<Reply> {
    let (json, text) = match mode.mode {
        Mode::Wk => {
            let d = decide_wk(p, q, wk_k(mode)?, range(mode))?;
            let text = match &d {
                WkDecision::Equal => "equal".to_string(),
                WkDecision::Distinct { index, left, right } => format!("distinct at alpha_{index}: {left} vs {right}"),
            };
            (serde_json::to_value(&d)?, text)
        }
        Mode::Homotopy => {
            let d = decide_homotopy(p, q)?;
            let text = match &d {
                HomotopyDecision::Equal => "equal".to_string(),
                HomotopyDecision::Distinct { sequence, left, right } => format!("distinct at mu_{sequence}: {left} vs {right}"),
            };
            (serde_json::to_value(&d)?, text)
        }
    };
    let equal = text == "equal";
    Ok(Reply { json, text, code: if equal { 0 } else { EXIT_DISTINCT } })
}

fn parse_moves(text: &str) -> Result<Vec<MoveSpec>> {
    let t = text.trim();
    if t.starts_with('[') {
        return serde_json::from_str(t).context("invalid move list");
    }
    t.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).with_context(|| format!("invalid move on line {}", i + 1)))
        .collect()
}

fn ftcheck(input: &Input, functional: &str, subset: &Option<String>, size: Option<usize>, limit: usize) -> Result<Reply> {
    let f: Functional = functional.parse().map_err(|e: warrow::Error| Usage(e.to_string()))?;
    let g = input.gauss();
    let subsets = match (subset, size) {
        (Some(s), None) => {
            let ids: Result<std::collections::BTreeSet<u32>> = s
                .split(',')
                .filter(|x| !x.trim().is_empty())
                .map(|x| x.trim().parse::<u32>().map_err(|_| Usage(format!("bad crossing id {x:?}")).into()))
                .collect();
            vec![ids?]
        }
        (None, Some(k)) => crossing_subsets(&g, k),
        _ => return usage("ftcheck needs --subset or --size"),
    };
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    for s in subsets {
        let v = alternating_sum(|c| f.evaluate(c), &g, &s, limit)?;
        let ids: Vec<String> = s.iter().map(|c| c.to_string()).collect();
        lines.push(format!("{{{}}} {}", ids.join(","), v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")));
        rows.push(json!({ "subset": s, "sum": v }));
    }
    Ok(Reply::new(json!({ "functional": f.to_string(), "code": g.to_string(), "sums": rows }), lines.join("\n")))
}

fn generate(lk: Option<usize>, ti: &Option<String>, n: Option<usize>, inv: bool) -> Result<Reply> {
    match (lk, ti) {
        (Some(k), None) => {
            check_degree(k)?;
            Ok(Reply::presentation(&make_lk(k, inv)?))
        }
        (None, Some(seq)) => {
            let seq = parse_sequence(seq)?;
            check_degree(seq.len())?;
            Ok(Reply::presentation(&make_ti(&seq, n.expect("clap requires --n"), inv)?))
        }
        _ => usage("generate needs --Lk or --TI"),
    }
}

/// Runs a command that consumes one input object.
fn run_one(cmd: &Command, input: &Input) -> Result<Reply> {
    match cmd {
        Command::Invariants => invariants(&input.presentation()?),
        Command::Alexander => alexander_reply(&input.presentation()?),
        Command::Alpha { kmax } => {
            check_degree(*kmax)?;
            let p = input.presentation()?;
            let d = alexander(&p)?;
            if d.degenerate {
                bail!(warrow::Error::NotLongKnot("all minors vanish".into()));
            }
            let a = alpha_coeffs(&d.poly, *kmax)?;
            Ok(Reply::new(json!(a), a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")))
        }
        Command::Milnor { seq, all_nonrepeated } => {
            let p = input.presentation()?;
            let seqs = match (seq, all_nonrepeated) {
                (Some(s), None) => vec![parse_sequence(s)?],
                (None, Some(m)) => nonrepeated_sequences(p.require_string_link()?, *m),
                _ => return usage("milnor needs --seq or --all-nonrepeated"),
            };
            milnor_reply(&p, &seqs)
        }
        Command::Expand { tree } => {
            let p = input.presentation()?;
            let q = match tree {
                Some(i) => expand_once(&p, *i)?,
                None => full_expand(&p),
            };
            Ok(Reply::presentation(&q))
        }
        Command::Surgery { format } => {
            let g = surgery(&full_expand(&input.presentation()?));
            let text = match format {
                Format::Text => g.to_string(),
                Format::Json => g.to_json(),
            };
            Ok(Reply::new(serde_json::to_value(&g)?, text))
        }
        Command::Moves { trace: path } => {
            let moves = parse_moves(&read_text(&Some(path.clone()))?)?;
            let (q, log) = trace(&input.presentation()?, &moves)?;
            let mut lines: Vec<String> = log.iter().map(|e| e.to_json_line()).collect();
            lines.push(q.to_json());
            let json = json!({ "log": log, "result": serde_json::from_str::<Value>(&q.to_json())? });
            Ok(Reply::new(json, lines.join("\n")))
        }
        Command::Normalize(mode) => normalize(&input.presentation()?, mode),
        Command::Equiv { other, mode } => equiv(&input.presentation()?, &read_input(other)?.presentation()?, mode),
        Command::Ftcheck { functional, subset, size, limit } => ftcheck(input, functional, subset, *size, *limit),
        Command::Generate { .. } => unreachable!("generate takes no input"),
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Usage>().is_some() {
        return EXIT_USAGE;
    }
    match e.downcast_ref::<warrow::Error>() {
        Some(warrow::Error::Argument(_)) | Some(warrow::Error::Limit(_)) | Some(warrow::Error::Sequence(_)) => EXIT_USAGE,
        _ => EXIT_DOMAIN,
    }
}

fn batch(cli: &Cli) -> Result<u8> {
    if matches!(cli.command, Command::Generate { .. }) {
        return usage("generate takes no input and cannot run in batch mode");
    }
    let text = read_text(&cli.input)?;
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    let work = || -> Vec<(String, u8)> {
        lines
            .par_iter()
            .map(|line| match parse_input(line).and_then(|i| run_one(&cli.command, &i)) {
                Ok(r) => (r.json.to_string(), r.code),
                Err(e) => (json!({ "error": format!("{e:#}") }).to_string(), exit_code(&e)),
            })
            .collect()
    };
    let results = match cli.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build()?.install(work),
        None => work(),
    };
    let mut code = 0;
    for (line, c) in results {
        println!("{line}");
        code = code.max(c);
    }
    Ok(code)
}

fn run(cli: &Cli) -> Result<u8> {
    if cli.batch {
        return batch(cli);
    }
    let reply = match &cli.command {
        Command::Generate { lk, ti, n, inv } => generate(*lk, ti, *n, *inv)?,
        cmd => run_one(cmd, &parse_input(&read_text(&cli.input)?)?)?,
    };
    if cli.json {
        println!("{}", reply.json);
    } else {
        println!("{}", reply.text);
    }
    Ok(reply.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
