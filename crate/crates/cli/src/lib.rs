//! Command-line front end. [`run`] parses arguments, executes one
//! subcommand and returns the report together with the exit code, so the
//! binary and the tests share one code path.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use displace::dcfg::{build_dyck_grammar, derive, enumerate_language, DcfgError, DeriveOutcome, Grammar, Recognizer};
use displace::monoids::{is_dyck_by_monoid, is_dyck_by_partition, RankedAlphabet, DEFAULT_PARTITION_CAP};
use displace::search::{Outcome, RunBudget};
use displace::terms::eval_ground_term;
use displace::transducer::{image_up_to, DyckSource, FiniteSource, FiniteTransducer, WordSource};
use displace::two_stack::{
    check_garland, desugar_keep_gstsa, desugar_keep_stsa, eliminate_lookup_gstsa, extract_garland_cycles,
    parse_garland_word, run_gstsa, run_stsa, stsa_to_gstsa, Gstsa, Stsa,
};
use displace::valence::{eliminate_lookup_pda, pda_to_valence, run_lookup_pda, run_valence, LookupPda, ValenceAutomaton};
use displace::word::{for_each_index_word, render, tokenize};

pub const EXIT_ACCEPT: i32 = 0;
pub const EXIT_REJECT: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_PARSE: i32 = 65;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Input(_) => EXIT_PARSE,
        }
    }
}

/// Output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "displace", version, about = "Grammars, multibracket languages and stack automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Budget overrides; unset fields keep the defaults scaled to the word.
#[derive(Args, Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BudgetArgs {
    /// Distinct configurations explored per run
    #[arg(long)]
    pub max_configs: Option<usize>,
    /// Largest total stack height or register size
    #[arg(long)]
    pub max_stack: Option<usize>,
    /// Longest run of moves that read no input
    #[arg(long)]
    pub max_silent: Option<usize>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct MachineArgs {
    #[arg(long)]
    grammar: Option<PathBuf>,
    #[arg(long)]
    stsa: Option<PathBuf>,
    #[arg(long)]
    gstsa: Option<PathBuf>,
    #[arg(long)]
    valence: Option<PathBuf>,
    #[arg(long)]
    pda: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct ConversionArgs {
    #[arg(long)]
    keep_desugar: bool,
    #[arg(long)]
    eliminate_lookup: bool,
    #[arg(long)]
    pda_to_valence: bool,
    #[arg(long)]
    stsa_to_gstsa: bool,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct SourceArgs {
    /// Language of a grammar
    #[arg(long)]
    grammar: Option<PathBuf>,
    /// Generalized Dyck language of a ranked alphabet
    #[arg(long)]
    alphabet: Option<PathBuf>,
    /// One word per line; `_` stands for the empty word
    #[arg(long)]
    words: Option<PathBuf>,
    /// A single input word
    #[arg(long)]
    word: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum DyckMethod {
    Monoid,
    Partition,
    Grammar,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide membership of a word
    Check {
        #[command(flatten)]
        machine: MachineArgs,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// List accepted words up to a length
    Enumerate {
        #[command(flatten)]
        machine: MachineArgs,
        #[arg(long)]
        max_len: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Print a leftmost derivation of a word
    Derive {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Chart items built before giving up
        #[arg(long, default_value_t = 1_000_000)]
        max_steps: usize,
    },
    /// Decide membership in a generalized Dyck language
    ValidateDyck {
        #[arg(long)]
        alphabet: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, value_enum, default_value_t = DyckMethod::Monoid)]
        method: DyckMethod,
        /// Longest word the partition search accepts
        #[arg(long, default_value_t = DEFAULT_PARTITION_CAP)]
        cap: usize,
    },
    /// Check the garland conditions on a word of pair letters
    ValidateGarland {
        /// Letters like `<a,a> <a',b>`
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        k: usize,
    },
    /// Translate a machine into an equivalent one
    Convert {
        #[command(flatten)]
        machine: MachineArgs,
        #[command(flatten)]
        conversion: ConversionArgs,
        /// Write the result here instead of standard output
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compare two machines on every word up to a length
    Crossvalidate {
        /// Machine file; the kind comes from the extension or a `kind:` prefix
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        max_len: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Apply a transducer to a word or a language
    Image {
        #[arg(long)]
        transducer: PathBuf,
        #[command(flatten)]
        source: SourceArgs,
        /// Longest output word listed
        #[arg(long)]
        max_len: usize,
    },
}

/// Runs the command line `args` (program name first).
pub fn run<I, T>(args: I) -> Report
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Report {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Report {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let mut out = String::new();
    match execute(cli.command, &mut out) {
        Ok(code) => Report {
            code,
            stdout: out,
            stderr: String::new(),
        },
        Err(e) => Report {
            code: e.exit_code(),
            stdout: out,
            stderr: format!("error: {e}\n"),
        },
    }
}

fn execute(command: Command, out: &mut String) -> Result<i32, CliError> {
    match command {
        Command::Check { machine, word, budget } => {
            let m = Machine::from_args(&machine)?;
            let w = tokenize(&word);
            let outcome = m.run(&w, budget)?;
            line(out, "machine", m.kind());
            line(out, "word", &show(&w));
            Ok(report_outcome(out, outcome))
        }
        Command::Enumerate { machine, max_len, budget } => {
            let m = Machine::from_args(&machine)?;
            enumerate(&m, max_len, budget, out)
        }
        Command::Derive {
            grammar,
            word,
            max_steps,
        } => {
            let g = load_grammar(&grammar)?;
            let w = tokenize(&word);
            line(out, "word", &show(&w));
            match derive(&g, &w, max_steps).map_err(input_error)? {
                DeriveOutcome::Found(d) => {
                    line(out, "outcome", "accept");
                    line(out, "steps", &d.rules.len().to_string());
                    for (i, form) in d.forms.iter().enumerate() {
                        line(out, &format!("form {i}"), &form.to_string());
                    }
                    let value = eval_ground_term(d.ground_term()).map_err(|e| CliError::Input(e.to_string()))?;
                    line(out, "value", &value.to_string());
                    Ok(EXIT_ACCEPT)
                }
                DeriveOutcome::Absent => Ok(report_outcome(out, Outcome::Reject)),
                DeriveOutcome::BudgetExhausted => {
                    line(out, "outcome", "unknown");
                    line(out, "budget", "max-steps");
                    Ok(EXIT_UNKNOWN)
                }
            }
        }
        Command::ValidateDyck {
            alphabet,
            word,
            method,
            cap,
        } => {
            let x = load(&alphabet, RankedAlphabet::parse)?;
            let letters = x.parse_word(&word).map_err(input_error)?;
            let accepted = match method {
                DyckMethod::Monoid => is_dyck_by_monoid(&x, &letters),
                DyckMethod::Partition => is_dyck_by_partition(&x, &letters, cap).map_err(input_error)?,
                DyckMethod::Grammar => {
                    let tokens: Vec<String> = word.split_whitespace().map(String::from).collect();
                    Recognizer::new(&build_dyck_grammar(&x))
                        .and_then(|mut r| r.recognize(&tokens))
                        .map_err(input_error)?
                }
            };
            line(out, "method", method.to_possible_value().expect("not skipped").get_name());
            line(out, "length", &letters.len().to_string());
            Ok(report_outcome(out, if accepted { Outcome::Accept } else { Outcome::Reject }))
        }
        Command::ValidateGarland { word, k } => {
            let w = parse_garland_word(&word).map_err(CliError::Input)?;
            line(out, "k", &k.to_string());
            match check_garland(&w, k) {
                Ok(()) => {
                    let cycles = extract_garland_cycles(&w, k).unwrap_or_default();
                    line(out, "outcome", "accept");
                    for c in cycles {
                        let c: Vec<String> = c.iter().map(ToString::to_string).collect();
                        line(out, "cycle", &c.join(" "));
                    }
                    Ok(EXIT_ACCEPT)
                }
                Err(v) => {
                    line(out, "outcome", "reject");
                    line(out, "violation", &v.to_string());
                    Ok(EXIT_REJECT)
                }
            }
        }
        Command::Convert {
            machine,
            conversion,
            output,
        } => {
            let m = Machine::from_args(&machine)?;
            let (name, result) = convert(m, &conversion)?;
            let text = result.to_text();
            match output {
                Some(path) => {
                    std::fs::write(&path, &text).map_err(|source| CliError::Io {
                        path: path.clone(),
                        source,
                    })?;
                    line(out, "conversion", name);
                    line(out, "machine", result.kind());
                    line(out, "states", &result.state_count().to_string());
                    line(out, "output", &path.display().to_string());
                }
                None => out.push_str(&text),
            }
            Ok(0)
        }
        Command::Crossvalidate {
            left,
            right,
            max_len,
            budget,
        } => {
            let l = Machine::from_spec(&left)?;
            let r = Machine::from_spec(&right)?;
            crossvalidate(&l, &r, max_len, budget, out)
        }
        Command::Image {
            transducer,
            source,
            max_len,
        } => {
            let t = load(&transducer, FiniteTransducer::parse)?;
            if let Some(word) = &source.word {
                let (image, capped) = t.apply_to_word(&tokenize(word), max_len);
                line(out, "count", &image.len().to_string());
                line(out, "truncated", &capped.to_string());
                for w in &image {
                    line(out, "word", &show(w));
                }
                return Ok(0);
            }
            let src: Box<dyn WordSource> = if let Some(p) = &source.grammar {
                Box::new(load_grammar(p)?)
            } else if let Some(p) = &source.alphabet {
                Box::new(DyckSource(load(p, RankedAlphabet::parse)?))
            } else {
                let p = source.words.as_ref().expect("clap requires one source");
                let text = read(p)?;
                let words = text
                    .lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty() && !l.starts_with('#'))
                    .map(|l| if l == "_" { Vec::new() } else { tokenize(l) })
                    .collect();
                Box::new(FiniteSource(words))
            };
            let image = image_up_to(&t, src.as_ref(), max_len).map_err(input_error)?;
            line(out, "count", &image.len().to_string());
            for w in &image {
                line(out, "word", &show(w));
            }
            Ok(0)
        }
    }
}

fn line(out: &mut String, key: &str, value: &str) {
    let _ = writeln!(out, "{key}: {value}");
}

fn show<S: AsRef<str>>(w: &[S]) -> String {
    if w.is_empty() {
        "\"\"".to_string()
    } else {
        render(w)
    }
}

fn report_outcome(out: &mut String, outcome: Outcome) -> i32 {
    line(out, "outcome", &outcome.to_string());
    match outcome {
        Outcome::Accept => EXIT_ACCEPT,
        Outcome::Reject => EXIT_REJECT,
        Outcome::Unknown(dim) => {
            line(out, "budget", &dim.to_string());
            EXIT_UNKNOWN
        }
    }
}

fn input_error(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load<T, E: std::fmt::Display>(path: &Path, parse: impl FnOnce(&str) -> Result<T, E>) -> Result<T, CliError> {
    parse(&read(path)?).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn load_grammar(path: &Path) -> Result<Grammar, CliError> {
    let g = load(path, Grammar::parse)?;
    g.validate().map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    Ok(g)
}

/// A loaded machine of any supported kind.
pub enum Machine {
    Grammar(RefCell<Recognizer>),
    Stsa(Stsa),
    Gstsa(Gstsa),
    Valence(ValenceAutomaton),
    Pda(LookupPda),
}

impl Machine {
    fn from_args(a: &MachineArgs) -> Result<Self, CliError> {
        let pick = [
            ("grammar", &a.grammar),
            ("stsa", &a.stsa),
            ("gstsa", &a.gstsa),
            ("valence", &a.valence),
            ("pda", &a.pda),
        ];
        let (kind, path) = pick
            .into_iter()
            .find_map(|(k, p)| p.as_ref().map(|p| (k, p)))
            .expect("clap requires one machine");
        Machine::load(kind, path)
    }

    /// `kind:path`, or a path whose extension names the kind.
    pub fn from_spec(spec: &str) -> Result<Self, CliError> {
        if let Some((kind, path)) = spec.split_once(':') {
            if KINDS.contains(&kind) {
                return Machine::load(kind, Path::new(path));
            }
        }
        let path = Path::new(spec);
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        let kind = match ext {
            "dcfg" | "grammar" => "grammar",
            "stsa" => "stsa",
            "gstsa" => "gstsa",
            "val" | "valence" => "valence",
            "pda" => "pda",
            _ => {
                return Err(CliError::Usage(format!(
                    "cannot tell the machine kind of `{spec}`; use a known extension or a prefix like `stsa:`"
                )))
            }
        };
        Machine::load(kind, path)
    }

    pub fn load(kind: &str, path: &Path) -> Result<Self, CliError> {
        Ok(match kind {
            "grammar" => {
                let g = load_grammar(path)?;
                Machine::Grammar(RefCell::new(Recognizer::new(&g).map_err(|e: DcfgError| CliError::Parse {
                    path: path.to_path_buf(),
                    message: e.to_string(),
                })?))
            }
            "stsa" => {
                let m = load(path, Stsa::parse)?;
                m.validate().map_err(|e| CliError::Parse {
                    path: path.to_path_buf(),
                    message: e.to_string(),
                })?;
                Machine::Stsa(m)
            }
            "gstsa" => Machine::Gstsa(load(path, Gstsa::parse)?),
            "valence" => Machine::Valence(load(path, ValenceAutomaton::parse)?),
            "pda" => Machine::Pda(load(path, LookupPda::parse)?),
            other => return Err(CliError::Usage(format!("unknown machine kind `{other}`"))),
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Machine::Grammar(_) => "grammar",
            Machine::Stsa(_) => "stsa",
            Machine::Gstsa(_) => "gstsa",
            Machine::Valence(_) => "valence",
            Machine::Pda(_) => "pda",
        }
    }

    pub fn alphabet(&self) -> Vec<String> {
        match self {
            Machine::Grammar(r) => r.borrow().grammar().alphabet.clone(),
            Machine::Stsa(m) => m.alphabet.names().to_vec(),
            Machine::Gstsa(m) => m.alphabet.names().to_vec(),
            Machine::Valence(m) => m.alphabet.names().to_vec(),
            Machine::Pda(m) => m.alphabet.names().to_vec(),
        }
    }

    fn state_count(&self) -> usize {
        match self {
            Machine::Grammar(r) => r.borrow().grammar().nonterminals.len(),
            Machine::Stsa(m) => m.states.len(),
            Machine::Gstsa(m) => m.states.len(),
            Machine::Valence(m) => m.states.len(),
            Machine::Pda(m) => m.states.len(),
        }
    }

    fn to_text(&self) -> String {
        match self {
            Machine::Grammar(r) => r.borrow().grammar().to_text(),
            Machine::Stsa(m) => m.to_text(),
            Machine::Gstsa(m) => m.to_text(),
            Machine::Valence(m) => m.to_text(),
            Machine::Pda(m) => m.to_text(),
        }
    }

    /// Membership of `w`, with default budgets scaled to `w` and the rank.
    pub fn run(&self, w: &[String], b: BudgetArgs) -> Result<Outcome, CliError> {
        let budget = |k: usize| RunBudget::for_word(w.len(), k).with_overrides(b.max_configs, b.max_stack, b.max_silent);
        Ok(match self {
            Machine::Grammar(r) => {
                if w.iter().any(|s| !r.borrow().grammar().alphabet.contains(s)) {
                    return Ok(Outcome::Reject);
                }
                if r.borrow_mut().recognize(w).map_err(input_error)? {
                    Outcome::Accept
                } else {
                    Outcome::Reject
                }
            }
            Machine::Stsa(m) => run_stsa(m, w, &budget(m.rank)),
            Machine::Gstsa(m) => run_gstsa(m, w, &budget(m.rank)),
            Machine::Valence(m) => run_valence(m, w, &budget(m.components)),
            Machine::Pda(m) => run_lookup_pda(m, w, &budget(1)),
        })
    }
}

const KINDS: [&str; 5] = ["grammar", "stsa", "gstsa", "valence", "pda"];

fn convert(m: Machine, c: &ConversionArgs) -> Result<(&'static str, Machine), CliError> {
    let mismatch = |op: &str, m: &Machine| CliError::Usage(format!("{op} does not apply to a {}", m.kind()));
    if c.keep_desugar {
        return match m {
            Machine::Stsa(s) => Ok(("keep-desugar", Machine::Stsa(desugar_keep_stsa(&s)))),
            Machine::Gstsa(g) => Ok(("keep-desugar", Machine::Gstsa(desugar_keep_gstsa(&g)))),
            other => Err(mismatch("--keep-desugar", &other)),
        };
    }
    if c.eliminate_lookup {
        return match m {
            Machine::Pda(p) => Ok(("eliminate-lookup", Machine::Pda(eliminate_lookup_pda(&p)))),
            Machine::Gstsa(g) => Ok(("eliminate-lookup", Machine::Gstsa(eliminate_lookup_gstsa(&g)))),
            other => Err(mismatch("--eliminate-lookup", &other)),
        };
    }
    if c.pda_to_valence {
        return match m {
            Machine::Pda(p) => Ok(("pda-to-valence", Machine::Valence(pda_to_valence(&p).map_err(input_error)?))),
            other => Err(mismatch("--pda-to-valence", &other)),
        };
    }
    match m {
        Machine::Stsa(s) => Ok(("stsa-to-gstsa", Machine::Gstsa(stsa_to_gstsa(&s)))),
        other => Err(mismatch("--stsa-to-gstsa", &other)),
    }
}

fn enumerate(m: &Machine, max_len: usize, budget: BudgetArgs, out: &mut String) -> Result<i32, CliError> {
    let mut words = Vec::new();
    let mut unknown = None;
    if let Machine::Grammar(r) = m {
        words = enumerate_language(r.borrow().grammar(), max_len).map_err(input_error)?;
    } else {
        let alphabet = sorted_alphabet(&m.alphabet());
        let mut err = None;
        for_each_index_word(alphabet.len(), max_len, |w| {
            if err.is_some() {
                return;
            }
            let w: Vec<String> = w.iter().map(|&i| alphabet[i].clone()).collect();
            match m.run(&w, budget) {
                Ok(Outcome::Accept) => words.push(w),
                Ok(Outcome::Unknown(d)) => {
                    unknown.get_or_insert((w, d));
                }
                Ok(Outcome::Reject) => {}
                Err(e) => err = Some(e),
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    line(out, "max-len", &max_len.to_string());
    line(out, "count", &words.len().to_string());
    for w in &words {
        line(out, "word", &show(w));
    }
    if let Some((w, d)) = unknown {
        line(out, "outcome", "unknown");
        line(out, "first-unknown", &show(&w));
        line(out, "budget", &d.to_string());
        return Ok(EXIT_UNKNOWN);
    }
    Ok(0)
}

fn sorted_alphabet(a: &[String]) -> Vec<String> {
    a.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect()
}

// A word and the two outcomes on it.
type Disagreement = (Vec<String>, Outcome, Outcome);

fn crossvalidate(l: &Machine, r: &Machine, max_len: usize, budget: BudgetArgs, out: &mut String) -> Result<i32, CliError> {
    let mut alphabet = l.alphabet();
    alphabet.extend(r.alphabet());
    let alphabet = sorted_alphabet(&alphabet);
    let mut checked = 0usize;
    let mut verdict: Option<Result<Disagreement, CliError>> = None;
    for_each_index_word(alphabet.len(), max_len, |w| {
        if verdict.is_some() {
            return;
        }
        let w: Vec<String> = w.iter().map(|&i| alphabet[i].clone()).collect();
        let pair = l.run(&w, budget).and_then(|a| Ok((a, r.run(&w, budget)?)));
        match pair {
            Err(e) => verdict = Some(Err(e)),
            Ok((a, b)) => {
                checked += 1;
                if a != b || a.is_unknown() {
                    verdict = Some(Ok((w, a, b)));
                }
            }
        }
    });
    line(out, "left", l.kind());
    line(out, "right", r.kind());
    line(out, "max-len", &max_len.to_string());
    match verdict {
        None => {
            line(out, "checked", &checked.to_string());
            line(out, "result", "equal");
            Ok(0)
        }
        Some(Err(e)) => Err(e),
        Some(Ok((w, a, b))) => {
            line(out, "checked", &checked.to_string());
            let unknown = a.is_unknown() || b.is_unknown();
            line(out, "result", if unknown { "unknown" } else { "counterexample" });
            line(out, "word", &show(&w));
            line(out, "left-outcome", &a.to_string());
            line(out, "right-outcome", &b.to_string());
            for o in [a, b] {
                if let Outcome::Unknown(d) = o {
                    line(out, "budget", &d.to_string());
                }
            }
            Ok(if unknown { EXIT_UNKNOWN } else { EXIT_REJECT })
        }
    }
}
