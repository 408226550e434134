//! Command-line front end. Exit codes: 0 success or positive verdict,
//! 1 negative verdict (not PMDS, uncorrectable, no completion), 2 usage or
//! input error, 3 search budget exceeded, 4 oracle and classifier disagree.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::classify::{classify_s1, completion_search, standardize, Budget, SearchError};
use crate::construct::{build_ell1_general_s, build_s1};
use crate::decode::{decode_generic, encode, DecodeError, StructuredParityCheck};
use crate::difftest::{differential_test, DEFAULT_SEED};
use crate::field::FieldSpec;
use crate::format::{format_word, parse_vector, parse_word, CodeFile, TemplateFile};
use crate::mds::mds_code_exists;
use crate::pmds::{
    field_size_bound_general_s, field_size_bound_s1, mr_check, necessary_conditions_general_s, pmds_oracle,
    PmdsParams,
};

pub const SCHEMA_VERSION: u32 = 1;
/// JSON schema for `--json` reports.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_DISAGREE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "pmds", version, about = "Construct, verify, classify and decode partial-MDS codes")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Mode {
    /// Brute-force block and puncture checks.
    Oracle,
    /// Standard-form classification (s = 1 only).
    Classify,
    /// Oracle and classifier, which must agree.
    Both,
    /// Every erasure pattern against the correctable family.
    Mr,
}

#[derive(Debug, clap::Args)]
struct ParamArgs {
    #[arg(long)]
    m: usize,
    /// Locality.
    #[arg(long = "l")]
    ell: usize,
    /// Local redundancies, comma separated (default: 1 per block).
    #[arg(long, value_delimiter = ',')]
    r: Option<Vec<usize>>,
    /// Global parity.
    #[arg(long, default_value_t = 1)]
    s: usize,
}

impl ParamArgs {
    fn params(&self) -> Result<PmdsParams, String> {
        let r = self.r.clone().unwrap_or_else(|| vec![1; self.m]);
        PmdsParams::with_s(self.m, self.ell, r, self.s).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a PMDS generator matrix.
    Construct {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        field: FieldSpec,
        /// Write the matrix file here instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Check whether a generator matrix file is PMDS.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Oracle)]
        mode: Mode,
    },
    /// Recover erased symbols of a received word.
    Decode {
        code: PathBuf,
        word: PathBuf,
        /// Use the rank-based decoder instead of the structured one.
        #[arg(long)]
        generic: bool,
    },
    /// Multiply a message by the generator matrix.
    Encode {
        code: PathBuf,
        /// Message file (one row of k elements).
        message: Option<PathBuf>,
        /// Message given inline, e.g. "1 1 1".
        #[arg(long = "message", conflicts_with = "message")]
        inline: Option<String>,
    },
    /// Complete a template with `*` entries to a PMDS code.
    Search {
        template: PathBuf,
        /// Largest number of assignments the search may face.
        #[arg(long, default_value_t = Budget::default().max_assignments)]
        budget: u64,
        #[arg(long, default_value_t = Budget::default().max_wildcards)]
        max_wildcards: usize,
        /// Enumerate every completion instead of stopping at the first.
        #[arg(long)]
        all: bool,
    },
    /// Field-size bounds for a parameter set.
    Bounds {
        #[command(flatten)]
        params: ParamArgs,
        /// Also evaluate the necessary MDS conditions over this field.
        #[arg(long)]
        field: Option<FieldSpec>,
    },
    /// Bring a generator matrix into block standard form (s = 1).
    Standardize { file: PathBuf },
    /// Seeded differential test of the classifier against the oracle.
    Difftest {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        field: FieldSpec,
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Construct { .. } => "construct",
            Command::Verify { .. } => "verify",
            Command::Decode { .. } => "decode",
            Command::Encode { .. } => "encode",
            Command::Search { .. } => "search",
            Command::Bounds { .. } => "bounds",
            Command::Standardize { .. } => "standardize",
            Command::Difftest { .. } => "difftest",
        }
    }
}

/// What a command produced: text for humans, a JSON result, an exit code.
struct Outcome {
    field: Option<FieldSpec>,
    params: Option<PmdsParams>,
    text: String,
    result: Value,
    code: i32,
}

impl Outcome {
    fn new(field: &FieldSpec, params: &PmdsParams, text: String, result: Value, code: i32) -> Self {
        Self {
            field: Some(field.clone()),
            params: Some(params.clone()),
            text,
            result,
            code,
        }
    }
}

#[derive(Serialize)]
struct Report<'a> {
    schema_version: u32,
    command: &'a str,
    argv: Vec<String>,
    field: Option<String>,
    params: Option<&'a PmdsParams>,
    result: &'a Value,
    elapsed_ms: f64,
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let start = Instant::now();
    let outcome = match execute(&cli.command) {
        Ok(o) => o,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    if cli.json {
        let report = Report {
            schema_version: SCHEMA_VERSION,
            command: cli.command.name(),
            argv: argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect(),
            field: outcome.field.as_ref().map(ToString::to_string),
            params: outcome.params.as_ref(),
            result: &outcome.result,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        };
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        let _ = write!(out, "{}", outcome.text);
    }
    outcome.code
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_code(path: &Path) -> Result<CodeFile, String> {
    CodeFile::parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn execute(cmd: &Command) -> Result<Outcome, String> {
    match cmd {
        Command::Construct { params, field, out } => construct(params, field, out.as_deref()),
        Command::Verify { file, mode } => verify(&read_code(file)?, *mode),
        Command::Decode { code, word, generic } => decode(&read_code(code)?, &read(word)?, *generic),
        Command::Encode { code, message, inline } => {
            let code = read_code(code)?;
            let text = match (message, inline) {
                (Some(path), None) => read(path)?,
                (None, Some(s)) => s.clone(),
                _ => return Err("give the message as a file or with --message".into()),
            };
            let msg = parse_vector(&text, code.field(), code.params.k).map_err(|e| e.to_string())?;
            let cw = encode(&code.matrix, &msg).map_err(|e| e.to_string())?;
            Ok(Outcome::new(code.field(), &code.params, format_word(&cw), json!({ "message": msg, "codeword": cw }), EXIT_OK))
        }
        Command::Search {
            template,
            budget,
            max_wildcards,
            all,
        } => {
            let t = TemplateFile::parse(&read(template)?).map_err(|e| format!("{}: {e}", template.display()))?;
            let budget = Budget {
                max_wildcards: *max_wildcards,
                max_assignments: *budget,
            };
            search(&t, &budget, *all)
        }
        Command::Bounds { params, field } => bounds(&params.params()?, field.as_ref()),
        Command::Standardize { file } => {
            let code = read_code(file)?;
            let form = standardize(&code.matrix, &code.params).map_err(|e| e.to_string())?;
            match form {
                Ok(form) => {
                    let file = CodeFile::new(form.params().clone(), form.assemble()).expect("shape");
                    let text = format!(
                        "# block order: {:?}\n# column order: {:?}\n# alphas: {:?}\n{}",
                        form.block_order(),
                        form.column_order(),
                        form.alphas(),
                        file.to_text()
                    );
                    let result = json!({ "standard_form": form, "matrix": file.matrix });
                    Ok(Outcome::new(code.field(), &code.params, text, result, EXIT_OK))
                }
                Err(failure) => {
                    let result = json!({ "standard_form": null, "failure": failure });
                    let text = format!("no standard form: {}\n", to_value(&failure));
                    Ok(Outcome::new(code.field(), &code.params, text, result, EXIT_FALSE))
                }
            }
        }
        Command::Difftest {
            params,
            field,
            count,
            seed,
        } => {
            let p = params.params()?;
            let report = differential_test(&p, field, *count, *seed).map_err(|e| e.to_string())?;
            let text = format!(
                "seed {}: {} instances, {} PMDS, {} agreements, {} disagreements\n",
                report.seed,
                report.instances,
                report.oracle_positive,
                report.agreements,
                report.disagreements.len()
            );
            let code = if report.all_agree() { EXIT_OK } else { EXIT_DISAGREE };
            Ok(Outcome::new(field, &p, text, to_value(&report), code))
        }
    }
}

fn construct(args: &ParamArgs, field: &FieldSpec, out: Option<&Path>) -> Result<Outcome, String> {
    let params = args.params()?;
    let g = if params.s() == 1 {
        build_s1(&params, field)
    } else if params.ell == 1 {
        build_ell1_general_s(params.m, params.s(), &params.r, field)
    } else {
        return Err(format!(
            "no construction for l = {} with s = {}; constructions cover s = 1, and l = 1 with any s",
            params.ell,
            params.s()
        ));
    }
    .map_err(|e| e.to_string())?;
    let file = CodeFile::new(params.clone(), g).expect("builder output matches parameters");
    let mut text = file.to_text();
    if let Some(path) = out {
        std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display()))?;
        text = format!("wrote {}\n", path.display());
    }
    Ok(Outcome::new(field, &params, text, json!({ "matrix": file.matrix }), EXIT_OK))
}

fn verify(code: &CodeFile, mode: Mode) -> Result<Outcome, String> {
    let (g, p) = (&code.matrix, &code.params);
    let needs_s1 = matches!(mode, Mode::Classify | Mode::Both);
    if needs_s1 && p.s() != 1 {
        return Err(format!("classification needs s = 1, this code has s = {}", p.s()));
    }
    let mut result = json!({ "mode": mode });
    let mut text = String::new();
    let mut verdicts = Vec::new();
    if matches!(mode, Mode::Oracle | Mode::Both) {
        let v = pmds_oracle(g, p).map_err(|e| e.to_string())?;
        text += &line("oracle", v.is_pmds, v.failure.as_ref().map(to_value));
        verdicts.push(v.is_pmds);
        result["oracle"] = to_value(&v);
    }
    if needs_s1 {
        let v = classify_s1(g, p).map_err(|e| e.to_string())?;
        text += &line("classify", v.is_pmds, v.failure.as_ref().map(to_value));
        verdicts.push(v.is_pmds);
        result["classify"] = to_value(&v);
    }
    if mode == Mode::Mr {
        let v = mr_check(g, p).map_err(|e| e.to_string())?;
        text += &match &v.counterexample {
            Some(c) => format!("mr: not maximally recoverable {}\n", to_value(c)),
            None => "mr: maximally recoverable\n".to_string(),
        };
        text += &format!("patterns checked: {}, family size: {}\n", v.patterns_checked, v.family_size);
        verdicts.push(v.holds);
        result["mr"] = to_value(&v);
    }
    let is_pmds = verdicts[0];
    result["is_pmds"] = is_pmds.into();
    let mut code_out = if is_pmds { EXIT_OK } else { EXIT_FALSE };
    if mode == Mode::Both {
        let agree = verdicts[0] == verdicts[1];
        result["agree"] = agree.into();
        if !agree {
            text += "oracle and classifier disagree\n";
            code_out = EXIT_DISAGREE;
        }
    }
    Ok(Outcome::new(code.field(), p, text, result, code_out))
}

fn line(name: &str, ok: bool, witness: Option<Value>) -> String {
    match witness {
        Some(w) if !ok => format!("{name}: not PMDS {w}\n"),
        _ => format!("{name}: {}\n", if ok { "PMDS" } else { "not PMDS" }),
    }
}

fn decode(code: &CodeFile, word_text: &str, generic: bool) -> Result<Outcome, String> {
    let (g, p) = (&code.matrix, &code.params);
    let word = parse_word(word_text, code.field(), p.n()).map_err(|e| e.to_string())?;
    let erased = word.pattern().erased().to_vec();
    // the structured decoder covers s = 1 codes with a standard form and
    // patterns in the family; anything else goes to the generic decoder
    let structured = (!generic && p.s() == 1)
        .then(|| StructuredParityCheck::from_generator(g, p).ok())
        .flatten()
        .filter(|_| p.excess(&erased) <= 1);
    let (decoder, outcome) = match &structured {
        Some(h) => ("structured", h.decode_erasures(&word).map(|d| (d.codeword, Some(d.trace)))),
        None => ("generic", decode_generic(g, &word).map(|c| (c, None))),
    };
    let mut result = json!({ "decoder": decoder, "erased": erased });
    match outcome {
        Ok((cw, trace)) => {
            result["codeword"] = to_value(&cw);
            result["trace"] = to_value(&trace);
            Ok(Outcome::new(code.field(), p, format_word(&cw), result, EXIT_OK))
        }
        Err(e @ (DecodeError::Uncorrectable { .. } | DecodeError::Inconsistent | DecodeError::OutsideFamily { .. })) => {
            result["codeword"] = Value::Null;
            result["error"] = e.to_string().into();
            Ok(Outcome::new(code.field(), p, format!("decoding failed: {e}\n"), result, EXIT_FALSE))
        }
        Err(e) => Err(e.to_string()),
    }
}

fn search(t: &TemplateFile, budget: &Budget, all: bool) -> Result<Outcome, String> {
    let p = &t.params;
    let f = t.template.field();
    let wildcards = t.template.wildcards().len();
    match completion_search(&t.template, p, budget, all) {
        Ok(outcome) => {
            let completions: Vec<Vec<Vec<u32>>> = outcome.completions.iter().map(|m| m.to_rows()).collect();
            let result = json!({
                "wildcards": wildcards,
                "nodes": outcome.nodes,
                "leaves": outcome.leaves,
                "completions": completions,
                "budget_exceeded": false,
            });
            let text = if outcome.completions.is_empty() {
                "none\n".to_string()
            } else {
                outcome
                    .completions
                    .iter()
                    .map(|m| CodeFile::new(p.clone(), m.clone()).expect("shape").to_text())
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            let code = if outcome.completions.is_empty() { EXIT_FALSE } else { EXIT_OK };
            Ok(Outcome::new(f, p, text, result, code))
        }
        Err(e @ SearchError::BudgetExceeded { .. }) => {
            let result = json!({
                "wildcards": wildcards,
                "nodes": 0,
                "leaves": 0,
                "completions": [],
                "budget_exceeded": true,
                "error": e.to_string(),
            });
            Ok(Outcome::new(f, p, format!("{e}\n"), result, EXIT_BUDGET))
        }
        Err(e) => Err(e.to_string()),
    }
}

fn bounds(p: &PmdsParams, field: Option<&FieldSpec>) -> Result<Outcome, String> {
    let s = p.s();
    let mut result = json!({ "s": s });
    let (bound, conjecture, tight) = if s == 1 {
        (field_size_bound_s1(p.ell, p.max_r()), p.ell > 1, true)
    } else if p.ell == 1 {
        // the local codes are repetition codes; only the outer [m, m - s] MDS code matters
        let q = (2u32..)
            .filter_map(|q| FieldSpec::with_order(q).ok())
            .find(|f| mds_code_exists(f, p.m, p.m - s))
            .expect("some field admits the outer code");
        (q.order() as usize, true, true)
    } else {
        let b = field_size_bound_general_s(p).map_err(|e| e.to_string())?;
        result["general_s"] = to_value(&b);
        (b.bound, b.assumes_mds_conjecture, false)
    };
    let minimal = FieldSpec::smallest_with_order_at_least(bound as u32).map_err(|e| e.to_string())?;
    result["bound"] = bound.into();
    result["minimal_field"] = minimal.to_string().into();
    result["assumes_mds_conjecture"] = conjecture.into();
    // for s = 1 and for l = 1 a construction meets the bound
    result["attained_by_construction"] = tight.into();
    let mut text = format!("minimal q = {bound} ({minimal})\n");
    if !tight {
        text += "lower bound only: no construction is known to meet it\n";
    }
    if conjecture {
        text += "assumes the MDS conjecture\n";
    }
    let mut code = EXIT_OK;
    if let Some(f) = field {
        let nc = necessary_conditions_general_s(p, f);
        text += &format!(
            "over {f}: necessary MDS conditions {}\n",
            if nc.holds { "hold" } else { "fail" }
        );
        if !nc.holds || (f.order() as usize) < bound {
            code = EXIT_FALSE;
        }
        result["necessary_conditions"] = to_value(&nc);
    }
    Ok(Outcome {
        field: field.cloned(),
        params: Some(p.clone()),
        text,
        result,
        code,
    })
}
