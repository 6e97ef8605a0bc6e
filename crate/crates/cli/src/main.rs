use std::fs;
use std::io::{self, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;
use shirshov::{
    amitsur_levitzski_check, analyze, complexity, construct, eventually_periodic_check, longest_witness_free,
    recurrence, verify_frontier, Alphabet, AnalysisReport, AnalyzeOptions, BoundReport, ComplexityProfile,
    DecompBudget, Generator, IdentityReport, Mode, Outcome, SearchBudget, StrongDecompCertificate, Witness,
    Word,
};

#[derive(Parser)]
#[command(
    name = "shirshov",
    version,
    about = "Power and decomposition witnesses in words, avoidance bounds, morphic words, identity checks"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Find a p-power or a (strongly) q-decomposable subword.
    #[command(after_help = "Example:\n  shirshov analyze --word abab --p 2 --q 2\n  \
        reports the square (ab)^2 at [1,4].")]
    Analyze(AnalyzeArgs),
    /// Longest word avoiding p-powers and q-decomposable subwords.
    #[command(after_help = "Example:\n  shirshov bound --m 2 --p 2 --q 9\n  \
        every binary word of length 4 has a square, so the longest square-free word has length 3.")]
    Bound(BoundArgs),
    /// Print a prefix of a generated infinite word.
    #[command(after_help = "Example:\n  shirshov gen --generator thue-morse --length 8\n  prints abbabaab.")]
    Gen(GenArgs),
    /// Subword complexity ω(n) and an eventual-periodicity check.
    #[command(
        after_help = "Example:\n  shirshov complexity --generator fibonacci --length 500 --n-max 20\n  \
        reports ω(n) = n + 1 for every n up to 20."
    )]
    Complexity(ComplexityArgs),
    /// Recurrence gaps and window constant of a pattern.
    #[command(after_help = "Example:\n  shirshov recur --word ababab --pattern ab\n  \
        reports max_gap 2 and window_constant 3.")]
    Recur(RecurArgs),
    /// Build a certified strongly q-decomposable subword.
    #[command(
        after_help = "Example:\n  shirshov construct --generator fibonacci --length 400 --q 2 > cert.json\n  \
        writes a certificate that `shirshov verify cert.json` accepts."
    )]
    Construct(ConstructArgs),
    /// Re-check a certificate, analysis, bound or identity report.
    #[command(after_help = "Example:\n  shirshov verify cert.json\n  \
        prints PASS, or FAIL with the first violated clause (exit status 1).")]
    Verify(VerifyArgs),
    /// Standard identity s_2n on n×n matrices, exact arithmetic.
    #[command(after_help = "Example:\n  shirshov identity --n 2 --trials 100 --seed 42\n  \
        confirms s_4 vanishes on 100 random 2×2 tuples and finds a triple of matrix units where s_3 does not.")]
    Identity(IdentityArgs),
}

#[derive(Args)]
struct WordArgs {
    /// The word, letters a..z.
    #[arg(long, conflicts_with = "word_file")]
    word: Option<String>,
    /// File holding the word (first non-empty line).
    #[arg(long)]
    word_file: Option<PathBuf>,
    /// Alphabet size; defaults to the largest letter used.
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Args)]
struct SourceArgs {
    #[command(flatten)]
    word: WordArgs,
    /// Named generator: thue-morse, fibonacci, tribonacci, period-<k>, or a name from --config.
    #[arg(long, conflicts_with_all = ["word", "word_file"])]
    generator: Option<String>,
    /// Generator config file, one `name: a->ab, b->ba, seed=a` or `name: period=abc` per line.
    #[arg(long, conflicts_with_all = ["word", "word_file"])]
    config: Option<PathBuf>,
    /// Prefix length taken from the generator.
    #[arg(long, requires = "generator_source")]
    length: Option<usize>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    word: WordArgs,
    #[arg(long, default_value_t = 2)]
    p: usize,
    #[arg(long, default_value_t = 2)]
    q: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Plain)]
    mode: ModeArg,
    /// Also search for a decomposition when a power was found.
    #[arg(long)]
    exhaustive: bool,
    /// Longest word the decomposition search accepts.
    #[arg(long, default_value_t = DecompBudget::default().max_length)]
    max_length: usize,
    /// Split budget for the decomposition search.
    #[arg(long, default_value_t = DecompBudget::default().max_splits)]
    max_splits: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Plain,
    Strong,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Plain => Mode::Plain,
            ModeArg::Strong => Mode::Strong,
        }
    }
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Plain)]
    mode: ModeArg,
    #[arg(long, default_value_t = SearchBudget::default().max_depth)]
    max_depth: usize,
    /// Node budget per first-letter branch.
    #[arg(long, default_value_t = SearchBudget::default().max_nodes)]
    max_nodes: u64,
    /// Worker threads; the report does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Print node counts per depth to standard error.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("generator_source").args(["generator", "config"]).multiple(true).required(true))]
struct GenArgs {
    #[arg(long)]
    generator: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    length: usize,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("generator_source").args(["generator", "config"]).multiple(true))]
struct ComplexityArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Largest n; defaults to min(20, length).
    #[arg(long)]
    n_max: Option<usize>,
    /// Largest period tried by the periodicity check, at most half the length.
    /// Defaults to a quarter of the length, so a reported period repeats at least four times.
    #[arg(long)]
    max_period: Option<usize>,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("generator_source").args(["generator", "config"]).multiple(true))]
struct RecurArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    pattern: String,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("generator_source").args(["generator", "config"]).multiple(true))]
struct ConstructArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    q: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// JSON document written by construct, analyze, bound or identity.
    input: PathBuf,
}

#[derive(Args)]
struct IdentityArgs {
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = shirshov::identity::DEFAULT_SEED)]
    seed: u64,
}

/// Exit status 2: bad flags or inputs.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type Run<T> = Result<T, UsageError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Run<ExitCode> {
    let format = cli.format;
    let json = format != Some(Format::Text);
    match cli.command {
        Command::Analyze(a) => {
            let w = read_word(&a.word)?;
            let opts = AnalyzeOptions {
                exhaustive: a.exhaustive,
                budget: DecompBudget {
                    max_length: a.max_length,
                    max_splits: a.max_splits,
                },
            };
            let report = analyze(&w, a.p, a.q, a.mode.into(), opts)?;
            emit(json, &report, || analysis_text(&report))?;
        }
        Command::Bound(b) => {
            let budget = SearchBudget::new(b.max_depth, b.max_nodes)?;
            let threads = match b.threads {
                Some(0) => return Err(UsageError("--threads must be at least 1".into())),
                Some(t) => t,
                None => std::thread::available_parallelism().map_or(1, |n| n.get()),
            };
            let report = longest_witness_free(b.m, b.p, b.q, b.mode.into(), budget, threads)?;
            if b.trace {
                for (depth, count) in report.nodes_per_depth.iter().enumerate() {
                    eprintln!("depth {depth}: {count} nodes");
                }
            }
            emit(json, &report, || bound_text(&report))?;
        }
        Command::Gen(g) => {
            let gen = load_generator(g.generator.as_deref(), g.config.as_ref())?;
            let w = gen.prefix(g.length)?;
            // a generated word is text unless JSON was asked for
            if format == Some(Format::Json) {
                let doc = GenDoc {
                    generator: gen.name().unwrap_or("").to_string(),
                    m: w.alphabet().size(),
                    length: w.len(),
                    word: w.render(),
                };
                print_json(&doc)?;
            } else {
                println!("{w}");
            }
        }
        Command::Complexity(c) => {
            let w = read_source(&c.source)?;
            let n_max = c.n_max.unwrap_or(w.len().min(20));
            let profile = complexity(&w, n_max)?;
            let max_period = c.max_period.unwrap_or(w.len() / 4);
            if max_period > w.len() / 2 {
                return Err(UsageError(format!(
                    "--max-period {max_period} exceeds half the length {}",
                    w.len()
                )));
            }
            let periodic = eventually_periodic_check(&w, max_period)
                .map(|(preperiod, period)| Periodicity { preperiod, period });
            let doc = ComplexityDoc {
                m: w.alphabet().size(),
                profile,
                max_period,
                eventually_periodic: periodic,
            };
            emit(json, &doc, || complexity_text(&doc))?;
        }
        Command::Recur(r) => {
            let w = read_source(&r.source)?;
            let v = Word::parse(&r.pattern, w.alphabet())?;
            let profile = recurrence(&w, &v)?;
            emit(json, &profile, || {
                let window = profile
                    .window_constant
                    .map_or("none".to_string(), |l| l.to_string());
                format!(
                    "pattern {} in a prefix of length {}: {} occurrences, max gap {}, window constant {} (prefix-certified only)",
                    profile.pattern, profile.prefix_length, profile.occurrences, profile.max_gap, window
                )
            })?;
        }
        Command::Construct(c) => {
            let w = read_source(&c.source)?;
            let cert = construct(&w, c.q)?;
            emit(json, &cert, || certificate_text(&cert))?;
        }
        Command::Verify(v) => return verify(&v.input, format == Some(Format::Json)),
        Command::Identity(i) => {
            let report = amitsur_levitzski_check(i.n, i.trials, i.seed)?;
            emit(json, &report, || identity_text(&report))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

// ---- inputs ----

fn read_word(args: &WordArgs) -> Run<Word> {
    let text = match (&args.word, &args.word_file) {
        (Some(w), _) => w.clone(),
        (None, Some(path)) => {
            let content =
                fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            content
                .lines()
                .map(str::trim)
                .find(|l| !l.is_empty())
                .unwrap_or("")
                .to_string()
        }
        (None, None) => return Err(UsageError("give a word with --word or --word-file".into())),
    };
    Ok(match args.m {
        Some(m) => Word::parse(&text, Alphabet::new(m)?)?,
        None => Word::parse_minimal(&text)?,
    })
}

fn load_generator(name: Option<&str>, config: Option<&PathBuf>) -> Run<Generator> {
    match config {
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            let all = Generator::parse_config(&text)?;
            match name {
                Some(n) => all
                    .into_iter()
                    .find(|g| g.name() == Some(n))
                    .ok_or_else(|| UsageError(format!("no generator named {n:?} in {}", path.display()))),
                None if all.len() == 1 => Ok(all.into_iter().next().expect("one entry")),
                None => Err(UsageError(format!(
                    "{} defines {} generators, pick one with --generator",
                    path.display(),
                    all.len()
                ))),
            }
        }
        None => {
            let n = name.ok_or_else(|| UsageError("give --generator or --config".into()))?;
            Generator::builtin(n).ok_or_else(|| {
                UsageError(format!(
                    "unknown generator {n:?}, expected one of {}",
                    shirshov::morphic::BUILTIN_NAMES.join(", ")
                ))
            })
        }
    }
}

fn read_source(args: &SourceArgs) -> Run<Word> {
    if args.generator.is_none() && args.config.is_none() {
        return read_word(&args.word);
    }
    let gen = load_generator(args.generator.as_deref(), args.config.as_ref())?;
    let len = args
        .length
        .ok_or_else(|| UsageError("--length is required with a generator".into()))?;
    let w = gen.prefix(len)?;
    match args.word.m {
        Some(m) => Ok(w.with_alphabet(Alphabet::new(m)?)?),
        None => Ok(w),
    }
}

// ---- outputs ----

#[derive(Serialize)]
struct GenDoc {
    generator: String,
    m: usize,
    length: usize,
    word: String,
}

#[derive(Serialize)]
struct Periodicity {
    preperiod: usize,
    period: usize,
}

#[derive(Serialize)]
struct ComplexityDoc {
    m: usize,
    profile: ComplexityProfile,
    max_period: usize,
    eventually_periodic: Option<Periodicity>,
}

#[derive(Serialize)]
struct VerifyDoc {
    document: &'static str,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    clause: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

fn print_json<T: Serialize>(value: &T) -> Run<()> {
    let text = serde_json::to_string_pretty(value)?;
    let mut out = io::stdout().lock();
    writeln!(out, "{text}")?;
    Ok(())
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) -> Run<()> {
    if json {
        print_json(value)
    } else {
        println!("{}", text());
        Ok(())
    }
}

fn outcome_text(o: &Outcome) -> String {
    match o.witness() {
        Some(Witness::Power(p)) => {
            format!(
                "power ({})^{} at [{},{}]",
                p.base, p.exponent, p.position.start, p.position.end
            )
        }
        Some(Witness::Decomposition(d)) => {
            let factors: Vec<String> = d.factors.iter().map(Word::render).collect();
            let kind = if d.strong {
                "strong decomposition"
            } else {
                "decomposition"
            };
            format!(
                "{kind} ({}) at [{},{}]",
                factors.join(", "),
                d.position.start,
                d.position.end
            )
        }
        None => o.kind().replace('_', " "),
    }
}

fn analysis_text(r: &AnalysisReport) -> String {
    let mut s = format!(
        "{} (p = {}, q = {}, {}): {}",
        r.word,
        r.p,
        r.q,
        r.mode,
        outcome_text(&r.outcome)
    );
    if let Some(extra) = &r.additional {
        s.push_str(&format!("\nalso: {}", outcome_text(extra)));
    }
    s
}

fn bound_text(r: &BoundReport) -> String {
    let claim = if r.exhausted {
        "exact"
    } else {
        "lower bound, budget exhausted"
    };
    let words: Vec<String> = r.exemplars.iter().map(Word::render).collect();
    format!(
        "m = {}, p = {}, q = {}, {}: longest witness-free length {} ({claim}), {} nodes\nexemplars: {}",
        r.alphabet.size(),
        r.p,
        r.q,
        r.mode,
        r.longest_witness_free_length,
        r.nodes_visited,
        words.join(" ")
    )
}

fn complexity_text(d: &ComplexityDoc) -> String {
    let mut lines: Vec<String> = d
        .profile
        .values
        .iter()
        .map(|v| format!("ω({}) = {}", v.n, v.omega))
        .collect();
    lines.push(match &d.eventually_periodic {
        Some(p) => format!(
            "eventually periodic: preperiod {}, period {}",
            p.preperiod, p.period
        ),
        None => format!("no period up to {}", d.max_period),
    });
    lines.join("\n")
}

fn certificate_text(c: &StrongDecompCertificate) -> String {
    let markers: Vec<String> = c.markers.iter().map(Word::render).collect();
    let factors: Vec<String> = c.factors.iter().map(Word::render).collect();
    let r = &c.inequalities;
    format!(
        "q = {}, N = {}, L = {}\nmarkers: {}\npositions: {:?}\nfactors: {}\nlength {} = {} >= {} > {} >= {}",
        c.q,
        c.marker_length,
        c.recurrence_constant,
        markers.join(" "),
        c.positions,
        factors.join(" "),
        r.total_length,
        r.total_by_formula,
        r.total_lower_bound,
        r.chain_middle,
        r.weighted_max_factor
    )
}

fn identity_text(r: &IdentityReport) -> String {
    let vanished = if r.all_vanished {
        "vanished on every tuple"
    } else {
        "did NOT vanish"
    };
    let lower = if r.lower_degree_witness.is_some() {
        "found"
    } else {
        "not found"
    };
    format!(
        "s_{} on {}x{} matrices, {} trials (seed {}): {vanished}; s_{} witness among matrix units {lower}",
        r.degree,
        r.dimension,
        r.dimension,
        r.trials,
        r.seed,
        r.degree - 1
    )
}

// ---- verify ----

fn fail(clause: &str, detail: &str) -> (String, String) {
    (clause.to_string(), detail.to_string())
}

/// A document of a recognised kind that does not parse fails the "format" clause.
fn parse_doc<T: serde::de::DeserializeOwned>(value: Value) -> Result<T, (String, String)> {
    serde_json::from_value(value).map_err(|e| ("format".to_string(), e.to_string()))
}

fn verify(path: &PathBuf, json: bool) -> Run<ExitCode> {
    let text = fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)?;
    let has = |key: &str| value.get(key).is_some();
    let (document, result): (&'static str, Result<(), (String, String)>) = if has("inequalities") {
        let result = parse_doc(value).and_then(|cert: StrongDecompCertificate| {
            cert.check().map_err(|v| (v.clause.to_string(), v.detail))
        });
        ("certificate", result)
    } else if has("outcome") {
        let result = parse_doc(value).and_then(|report: AnalysisReport| {
            report
                .verify()
                .then_some(())
                .ok_or(fail("witness", "a witness does not re-check against the word"))
        });
        ("analysis", result)
    } else if has("longest_witness_free_length") {
        let result = parse_doc(value).and_then(|report: BoundReport| {
            verify_frontier(&report)
                .then_some(())
                .ok_or(fail("frontier", "exemplars or frontier claim do not re-check"))
        });
        ("bound", result)
    } else if has("all_vanished") {
        let result = parse_doc(value).and_then(|report: IdentityReport| {
            report.verify().then_some(()).ok_or(fail(
                "re-evaluation",
                "a recorded tuple does not evaluate as claimed",
            ))
        });
        ("identity", result)
    } else {
        return Err(UsageError(format!(
            "{}: not a certificate, analysis, bound or identity document",
            path.display()
        )));
    };
    let pass = result.is_ok();
    let (clause, detail) = match result {
        Ok(()) => (None, None),
        Err((c, d)) => (Some(c), Some(d)),
    };
    let doc = VerifyDoc {
        document,
        pass,
        clause,
        detail,
    };
    emit(json, &doc, || match (&doc.clause, &doc.detail) {
        (Some(c), Some(d)) => format!("FAIL {document}: {c}: {d}"),
        _ => format!("PASS {document}"),
    })?;
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
