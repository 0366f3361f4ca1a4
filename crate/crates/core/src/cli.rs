//! The `lealc` command line.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{ArgMatches, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::kb::KnowledgeBase;
use crate::model::build_model;
use crate::query::{Answer, Query, QueryError, Reasoner};
use crate::tableau::{Completion, SaturationConfig};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "lealc", version, about = "Reasoner for the description logic LE-ALC")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Attach derivations to answers.
    #[arg(long, global = true)]
    pub trace: bool,
    /// Let naming queries return synthetic individuals.
    #[arg(long, global = true)]
    pub include_synthetic: bool,
    /// Budget of rule applications per saturation run.
    #[arg(long, global = true)]
    pub max_steps: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide consistency of a knowledge base.
    Check { kb: PathBuf },
    /// Answer queries. Each flag takes the query text as one or more words.
    Ask(Box<AskArgs>),
    /// Export the universal model.
    Model {
        kb: PathBuf,
        /// Write the incidence matrix as CSV instead.
        #[arg(long)]
        csv: bool,
    },
    /// Dump every rule application of the saturation run.
    Trace { kb: PathBuf },
}

#[derive(Debug, clap::Args)]
pub struct AskArgs {
    pub kb: PathBuf,
    /// `LHS ROLE RHS`
    #[arg(long, num_args = 1.., value_name = "TERM")]
    pub rel: Vec<String>,
    /// `NAME : CONCEPT` or `NAME :: CONCEPT`
    #[arg(long, num_args = 1.., value_name = "TERM")]
    pub member: Vec<String>,
    /// `C1 sub C2`
    #[arg(long, num_args = 1.., value_name = "AXIOM")]
    pub subsume: Vec<String>,
    /// Positive terms separated by `;`
    #[arg(long, num_args = 1.., value_name = "TERMS")]
    pub disj: Vec<String>,
    /// A relational term, a membership or `C1 sub C2`, to be refuted.
    #[arg(long, num_args = 1.., value_name = "TERM")]
    pub neg: Vec<String>,
    /// `B D [ROLE]` or `ROLE ROLE NAME`
    #[arg(long, num_args = 1.., value_name = "ARGS")]
    pub sep: Vec<String>,
    /// `B D [ROLE]`
    #[arg(long, num_args = 1.., value_name = "ARGS")]
    pub dif: Vec<String>,
    /// `B D`
    #[arg(long, num_args = 1.., value_name = "ARGS")]
    pub identity: Vec<String>,
    /// `NAME ROLE` or `ROLE NAME`
    #[arg(long, num_args = 1.., value_name = "ARGS")]
    pub list_related: Vec<String>,
    /// `[extent|intent] CONCEPT`
    #[arg(long, num_args = 1.., value_name = "ARGS")]
    pub list_members: Vec<String>,
    /// Compare the ABox with the ABox of another file.
    #[arg(long, value_name = "FILE")]
    pub equiv: Option<PathBuf>,
    /// File with one query per line, in the form `KIND ARGS`.
    #[arg(long, value_name = "FILE")]
    pub batch: Option<PathBuf>,
}

/// Failure of a whole command.
#[derive(Debug)]
struct Failure {
    kind: &'static str,
    message: String,
    position: Option<(usize, usize)>,
    code: i32,
}

impl Failure {
    fn usage(kind: &'static str, message: impl Into<String>) -> Failure {
        Failure {
            kind,
            message: message.into(),
            position: None,
            code: 2,
        }
    }

    fn to_json(&self) -> Value {
        let mut v = json!({ "kind": self.kind, "message": self.message });
        if let Some((line, col)) = self.position {
            v["line"] = json!(line);
            v["col"] = json!(col);
        }
        json!({ "error": v })
    }
}

fn query_failure(e: QueryError) -> Failure {
    let (kind, code) = match &e {
        QueryError::Inconsistent => ("inconsistent", 1),
        QueryError::Parse(_) => ("parse", 2),
        QueryError::TBox(_) => ("tbox", 2),
        QueryError::Saturation(_) => ("resource", 2),
        QueryError::UnknownName(_) => ("unknown-name", 2),
        QueryError::Unsupported(_) | QueryError::Rule(_) => ("unsupported", 2),
    };
    let position = match &e {
        QueryError::Parse(p) => Some(p.position()),
        _ => None,
    };
    Failure {
        kind,
        message: e.to_string(),
        position,
        code,
    }
}

fn load(path: &Path) -> Result<KnowledgeBase, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::usage("io", format!("{}: {e}", path.display())))?;
    KnowledgeBase::parse(&text).map_err(|e| Failure {
        kind: "parse",
        message: format!("{}: {e}", path.display()),
        position: Some(e.position()),
        code: 2,
    })
}

struct Output {
    body: String,
    code: i32,
}

fn json_body<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn reasoner(cli: &Cli, kb: KnowledgeBase) -> Result<Reasoner, Failure> {
    let mut config = SaturationConfig::default();
    if let Some(n) = cli.max_steps {
        config.max_steps = n;
    }
    Ok(Reasoner::with_config(kb, config)
        .map_err(query_failure)?
        .include_synthetic(cli.include_synthetic))
}

fn stats(c: &Completion) -> Value {
    let (objs, feats) = c.individuals();
    json!({
        "input": c.input().len(),
        "assertions": c.len(),
        "steps": c.steps().len(),
        "objects": objs.len(),
        "features": feats.len(),
        "rules": c.stats(),
    })
}

fn check(cli: &Cli, path: &Path) -> Result<Output, Failure> {
    let r = reasoner(cli, load(path)?)?;
    let c = r.completion().map_err(query_failure)?;
    let clash = c.clash();
    let code = i32::from(clash.is_some());
    let certificate = c.clash_certificate();
    if cli.format == Format::Text {
        let mut body = String::new();
        let _ = writeln!(body, "{}", if clash.is_some() { "inconsistent" } else { "consistent" });
        let _ = writeln!(body, "assertions: {}, steps: {}", c.len(), c.steps().len());
        if let Some(k) = clash {
            let _ = writeln!(body, "clash: {} / {}", k.positive, k.negative);
        }
        for s in certificate.iter().flatten() {
            let _ = writeln!(body, "{}", step_line(s));
        }
        return Ok(Output { body, code });
    }
    let mut v = json!({
        "command": "check",
        "consistent": clash.is_none(),
        "stats": stats(c),
    });
    if let Some(k) = clash {
        v["clash"] = json!({ "positive": k.positive, "negative": k.negative });
        v["certificate"] = json!(certificate);
    }
    if cli.trace {
        v["trace"] = json!(c.step_views());
    }
    Ok(Output {
        body: json_body(&v),
        code,
    })
}

fn step_line(s: &crate::tableau::StepView) -> String {
    let list = |xs: &[crate::syntax::Assertion]| xs.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(", ");
    format!(
        "{:>4}  {:<14} {}  =>  {}",
        s.step,
        s.rule.to_string(),
        list(&s.premises),
        list(&s.conclusions)
    )
}

const QUERY_FLAGS: [&str; 10] = [
    "rel",
    "member",
    "subsume",
    "disj",
    "neg",
    "sep",
    "dif",
    "identity",
    "list_related",
    "list_members",
];

/// One query text per flag occurrence, in command-line order.
fn query_texts(args: &AskArgs, matches: &ArgMatches) -> Result<Vec<String>, Failure> {
    let mut placed = Vec::new();
    for id in QUERY_FLAGS {
        let (Some(occurrences), Some(mut indices)) = (matches.get_occurrences::<String>(id), matches.indices_of(id))
        else {
            continue;
        };
        let kind = id.replace('_', "-");
        for words in occurrences {
            let words: Vec<&str> = words.map(String::as_str).collect();
            let first = indices.next().unwrap_or(usize::MAX);
            indices.by_ref().take(words.len().saturating_sub(1)).for_each(drop);
            placed.push((first, format!("{kind} {}", words.join(" "))));
        }
    }
    placed.sort_by_key(|&(k, _)| k);
    let mut out: Vec<String> = placed.into_iter().map(|(_, q)| q).collect();
    if let Some(path) = &args.batch {
        let text =
            std::fs::read_to_string(path).map_err(|e| Failure::usage("io", format!("{}: {e}", path.display())))?;
        out.extend(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_owned),
        );
    }
    Ok(out)
}

/// Answers `texts` on scoped threads, keeping input order.
fn answer_all(r: &Reasoner, texts: &[String]) -> Vec<Result<Answer, QueryError>> {
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(texts.len().max(1));
    if workers <= 1 {
        return texts.iter().map(|t| r.ask_text(t)).collect();
    }
    let chunk = texts.len().div_ceil(workers);
    std::thread::scope(|s| {
        let handles: Vec<_> = texts
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(|t| r.ask_text(t)).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("query thread panicked"))
            .collect()
    })
}

fn ask(cli: &Cli, args: &AskArgs, matches: &ArgMatches) -> Result<Output, Failure> {
    let kb = load(&args.kb)?;
    let texts = query_texts(args, matches)?;
    let equiv = match &args.equiv {
        Some(p) => {
            let other = load(p)?;
            if !other.tbox.is_empty() && other.tbox != kb.tbox {
                return Err(Failure::usage(
                    "usage",
                    "--equiv needs an ABox-only file or the same TBox",
                ));
            }
            Some(other.abox)
        }
        None => None,
    };
    if texts.is_empty() && equiv.is_none() {
        return Err(Failure::usage("usage", "no query given"));
    }
    let r = reasoner(cli, kb)?;
    if !r.is_consistent().map_err(query_failure)? {
        return Err(query_failure(QueryError::Inconsistent));
    }
    let mut results = answer_all(&r, &texts);
    let mut labels = texts.clone();
    if let Some(other) = equiv {
        results.push(r.ask(&Query::Equivalence(r.kb().abox.clone(), other)));
        labels.push(format!("equiv {}", args.equiv.as_ref().expect("set").display()));
    }
    let mut code = 0;
    let mut entries = Vec::new();
    let mut text = String::new();
    for (label, res) in labels.iter().zip(results) {
        match res {
            Ok(mut a) => {
                if !cli.trace {
                    a.certificate = None;
                }
                let shown = match &a.answer {
                    crate::query::Value::Bool(b) => {
                        if *b {
                            "yes".to_owned()
                        } else {
                            "no".to_owned()
                        }
                    }
                    crate::query::Value::Names(n) => format!("[{}]", n.join(", ")),
                };
                let _ = writeln!(text, "{}\t{shown}", a.query);
                for s in a.certificate.iter().flat_map(|c| &c.steps) {
                    let _ = writeln!(text, "{}", step_line(s));
                }
                entries.push(serde_json::to_value(&a).expect("serializable"));
            }
            Err(e) => {
                code = 2;
                let f = query_failure(e);
                let _ = writeln!(text, "{label}\terror: {}", f.message);
                let mut v = f.to_json();
                v["query"] = json!(label);
                entries.push(v);
            }
        }
    }
    let body = match cli.format {
        Format::Json => json_body(&json!({ "command": "ask", "answers": entries })),
        Format::Text => text,
    };
    Ok(Output { body, code })
}

fn model(cli: &Cli, path: &Path, csv: bool) -> Result<Output, Failure> {
    let r = reasoner(cli, load(path)?)?;
    let c = r.completion().map_err(query_failure)?;
    if c.clash().is_some() {
        return Err(query_failure(QueryError::Inconsistent));
    }
    let m = build_model(c).map_err(|e| Failure::usage("model", e.to_string()))?;
    let body = if csv {
        m.to_csv()
    } else if cli.format == Format::Text {
        let d = m.document();
        let mut s = String::new();
        for (obj, feats) in &d.incidence {
            let _ = writeln!(s, "{obj} I {}", feats.join(" "));
        }
        for (i, rel) in &d.boxes {
            for (obj, feats) in rel {
                let _ = writeln!(s, "{obj} Rbox{i} {}", feats.join(" "));
            }
        }
        for (i, rel) in &d.diamonds {
            for (feat, objs) in rel {
                let _ = writeln!(s, "{feat} Rdia{i} {}", objs.join(" "));
            }
        }
        s
    } else {
        json_body(&m.document())
    };
    Ok(Output { body, code: 0 })
}

fn trace(cli: &Cli, path: &Path) -> Result<Output, Failure> {
    let r = reasoner(cli, load(path)?)?;
    let c = r.completion().map_err(query_failure)?;
    let body = match cli.format {
        Format::Json => c.trace_ndjson(),
        Format::Text => c.step_views().iter().map(|v| step_line(v) + "\n").collect(),
    };
    Ok(Output {
        body,
        code: i32::from(c.clash().is_some()),
    })
}

fn dispatch(cli: &Cli, matches: &ArgMatches) -> Result<Output, Failure> {
    match &cli.command {
        Command::Check { kb } => check(cli, kb),
        Command::Ask(args) => {
            let sub = matches.subcommand_matches("ask").expect("ask matches");
            ask(cli, args, sub)
        }
        Command::Model { kb, csv } => model(cli, kb, *csv),
        Command::Trace { kb } => trace(cli, kb),
    }
}

/// Runs the CLI, writing to `out` and `err`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let text_requested =
        args.windows(2).any(|w| w[0] == "--format" && w[1] == "text") || args.iter().any(|a| a == "--format=text");
    let parsed = Cli::command()
        .try_get_matches_from(&args)
        .and_then(|m| Cli::from_arg_matches(&m).map(|c| (c, m)));
    let (cli, matches) = match parsed {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let _ = write!(err, "{e}");
            if !text_requested {
                let message = match e.kind() {
                    ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => "a subcommand is required".to_owned(),
                    _ => e
                        .to_string()
                        .lines()
                        .take_while(|l| !l.starts_with("Usage:"))
                        .map(str::trim)
                        .filter(|l| !l.is_empty())
                        .collect::<Vec<_>>()
                        .join(" ")
                        .trim_start_matches("error: ")
                        .to_owned(),
                };
                let f = Failure::usage("usage", message);
                let _ = out.write_all(json_body(&f.to_json()).as_bytes());
            }
            return 2;
        }
    };
    match dispatch(&cli, &matches) {
        Ok(o) => {
            let _ = out.write_all(o.body.as_bytes());
            o.code
        }
        Err(f) => {
            let _ = writeln!(err, "lealc: {}", f.message);
            if cli.format == Format::Json {
                let _ = out.write_all(json_body(&f.to_json()).as_bytes());
            }
            f.code
        }
    }
}
