//! Command-line interface.
//!
//! Subcommands:
//! * `classify`   - enumerate deformation classes at one parameter pair,
//! * `verify`     - recompute the invariants of reference data,
//! * `invariants` - analyse a single ring datum from a JSON file,
//! * `count`      - count classes over a parameter grid.
//!
//! Exit codes: `0` success, `1` invalid usage or input, `2` candidate budget
//! exhausted, `3` the datum given to `invariants` failed validation.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coxring::{RingData, RingDataJson};
use crate::enumerate::{
    classify, count_types, ClassifiedVariety, ClassifyError, ClassifyOptions, TorsionFilter,
};
use crate::fixtures::{all_fixtures, Fixture};
use crate::invariants::{compute_all, rational_string};
use crate::strata::minimal_supports;

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_RESOURCE: i32 = 2;
const EXIT_INVALID_DATA: i32 = 3;

#[derive(Parser)]
#[command(
    name = "coxfano",
    version,
    about = "Exact classification of Q-factorial Fano varieties with a torus \
             action of complexity one and Picard number one"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate deformation classes at a fixed dimension and Picard index.
    Classify(ClassifyArgs),
    /// Recompute invariants of reference data and compare.
    Verify(VerifyArgs),
    /// Compute the invariants of one ring datum from a JSON file.
    Invariants(InvariantsArgs),
    /// Count deformation classes over a parameter grid.
    Count(CountArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum TorsionArg {
    Any,
    Nontrivial,
    Trivial,
}

impl From<TorsionArg> for TorsionFilter {
    fn from(v: TorsionArg) -> Self {
        match v {
            TorsionArg::Any => TorsionFilter::Any,
            TorsionArg::Nontrivial => TorsionFilter::NontrivialOnly,
            TorsionArg::Trivial => TorsionFilter::TrivialOnly,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Json,
    Table,
    Latex,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Dimension of the varieties.
    #[arg(long)]
    dim: usize,
    /// Index of the Picard group inside the divisor class group.
    #[arg(long)]
    picard_index: i64,
    /// Restriction on the torsion part of the class group.
    #[arg(long, value_enum, default_value_t = TorsionArg::Any)]
    torsion: TorsionArg,
    /// Also enumerate data without relations.
    #[arg(long)]
    include_toric: bool,
    /// Drop the Fano requirement.
    #[arg(long)]
    no_fano: bool,
    /// Restrict to relations involving only singleton blocks.
    #[arg(long)]
    separated_only: bool,
    /// Output rendering.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the rendered result to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Abort after this many candidate visits.
    #[arg(long, default_value_t = 100_000_000)]
    max_candidates: u64,
    /// Cache directory; the COXFANO_CACHE_DIR environment variable is used
    /// when the flag is absent.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// JSON file with fixtures; the built-in reference data when absent.
    #[arg(long)]
    fixtures: Option<PathBuf>,
}

#[derive(Args)]
struct InvariantsArgs {
    /// JSON file holding one ring datum.
    #[arg(long)]
    input: PathBuf,
    /// Output rendering.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct CountArgs {
    /// Dimension range, e.g. `2..3` (inclusive) or a single value.
    #[arg(long)]
    dim_range: String,
    /// Picard index range, e.g. `1..6` (inclusive) or a single value.
    #[arg(long)]
    mu_range: String,
    /// Restriction on the torsion part of the class group.
    #[arg(long, value_enum, default_value_t = TorsionArg::Any)]
    torsion: TorsionArg,
    /// Also count data without relations (reported in the `toric` column).
    #[arg(long)]
    include_toric: bool,
    /// Drop the Fano requirement.
    #[arg(long)]
    no_fano: bool,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Abort after this many candidate visits per cell.
    #[arg(long, default_value_t = 100_000_000)]
    max_candidates: u64,
}

#[derive(Debug)]
struct CliError {
    message: String,
    code: i32,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: EXIT_USAGE,
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        let code = match e {
            ClassifyError::ResourceCap(_) => EXIT_RESOURCE,
            ClassifyError::InvalidOptions(_) => EXIT_USAGE,
        };
        CliError {
            message: e.to_string(),
            code,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::usage(e.to_string())
    }
}

/// Parses the process arguments, runs the requested command and returns the
/// process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp
                    | ErrorKind::DisplayVersion
                    | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            ) =>
        {
            let _ = write_stdout(&e.to_string());
            return EXIT_OK;
        }
        Err(e) => {
            eprint!("{e}");
            return EXIT_USAGE;
        }
    };
    let outcome = match cli.command {
        Command::Classify(args) => cmd_classify(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Invariants(args) => cmd_invariants(args),
        Command::Count(args) => cmd_count(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

// ---------------------------------------------------------------------------
// Result sets and rendering

/// Serializable result of one classification run.  Two runs with the same
/// options produce identical sets up to `elapsed_ms`.
#[derive(Serialize, Deserialize)]
pub struct ResultSet {
    pub tool: String,
    pub version: String,
    pub options: OptionsEcho,
    pub total: usize,
    pub varieties: Vec<VarietyRecord>,
    pub elapsed_ms: u64,
}

#[derive(PartialEq, Eq, Serialize, Deserialize)]
pub struct OptionsEcho {
    pub dimension: usize,
    pub picard_index: i64,
    pub torsion: String,
    pub include_toric: bool,
    pub require_fano: bool,
    pub separated_only: bool,
}

#[derive(Serialize, Deserialize)]
pub struct VarietyRecord {
    /// One-based position in the canonical order.
    pub index: usize,
    pub case: String,
    pub class_group: String,
    pub data: RingDataJson,
    /// Generators and trinomial relations; coefficients `a_k` are the
    /// continuous parameters of the class.
    pub presentation: String,
    /// The variable degrees, free part first, then residues.
    pub degrees: String,
    pub picard_index: i64,
    pub self_intersection: String,
    pub gorenstein_index: i64,
    pub moduli: usize,
}

fn torsion_name(f: TorsionFilter) -> &'static str {
    match f {
        TorsionFilter::Any => "any",
        TorsionFilter::NontrivialOnly => "nontrivial",
        TorsionFilter::TrivialOnly => "trivial",
    }
}

fn echo_options(opts: &ClassifyOptions) -> OptionsEcho {
    OptionsEcho {
        dimension: opts.dimension,
        picard_index: opts.picard_index,
        torsion: torsion_name(opts.torsion_filter).to_string(),
        include_toric: opts.include_toric,
        require_fano: opts.require_fano,
        separated_only: opts.separated_only,
    }
}

fn class_group_name(data: &RingData) -> String {
    let mut parts = vec!["Z".to_string()];
    parts.extend(data.group.torsion().iter().map(|t| format!("Z/{t}")));
    parts.join(" x ")
}

/// Name of variable `idx` in the blocks-then-free ordering.
fn variable_name(data: &RingData, idx: usize) -> String {
    let n = data.n_total();
    if idx < n {
        format!("T{}", idx + 1)
    } else {
        format!("S{}", idx - n + 1)
    }
}

fn monomial_string(data: &RingData, block: usize, latex: bool) -> String {
    let start: usize = data.blocks[..block].iter().map(|b| b.len()).sum();
    data.blocks[block]
        .exponents
        .iter()
        .enumerate()
        .map(|(j, &l)| {
            let name = if latex {
                format!("T_{{{}}}", start + j + 1)
            } else {
                format!("T{}", start + j + 1)
            };
            match (l, latex) {
                (1, _) => name,
                (_, true) => format!("{name}^{{{l}}}"),
                (_, false) => format!("{name}^{l}"),
            }
        })
        .collect::<Vec<_>>()
        .join(if latex { "" } else { "*" })
}

/// Human-readable presentation: the trinomial relations, with coefficients
/// `a_k` on the third monomial of every relation after the first.
fn presentation_string(data: &RingData, latex: bool) -> String {
    if !data.has_relations() {
        let vars: Vec<String> = (0..data.var_count())
            .map(|i| {
                let name = variable_name(data, i);
                if latex {
                    name.replacen('S', "S_", 1).replacen('T', "T_", 1)
                } else {
                    name
                }
            })
            .collect();
        return format!("K[{}]", vars.join(","));
    }
    let r = data.r();
    (0..r - 1)
        .map(|i| {
            let coeff = match (i, latex) {
                (0, _) => String::new(),
                (_, true) => format!("\\lambda_{{{i}}}"),
                (_, false) => format!("a{i}*"),
            };
            format!(
                "{} + {} + {}{}",
                monomial_string(data, i, latex),
                monomial_string(data, i + 1, latex),
                coeff,
                monomial_string(data, i + 2, latex)
            )
        })
        .collect::<Vec<_>>()
        .join(if latex { ",\\; " } else { "; " })
}

fn degrees_string(data: &RingData) -> String {
    data.weight_list()
        .iter()
        .map(|w| {
            let free = w.free()[0].to_string();
            if w.torsion().is_empty() {
                format!("({free})")
            } else {
                let res: Vec<String> = w.torsion().iter().map(|r| r.to_string()).collect();
                format!("({free}; {})", res.join(","))
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn to_record(index: usize, v: &ClassifiedVariety) -> VarietyRecord {
    VarietyRecord {
        index,
        case: v.case_tag.to_string(),
        class_group: class_group_name(&v.data),
        data: v.data.to_json(),
        presentation: presentation_string(&v.data, false),
        degrees: degrees_string(&v.data),
        picard_index: v.invariants.picard_index,
        self_intersection: rational_string(&v.invariants.self_intersection),
        gorenstein_index: v.invariants.gorenstein_index,
        moduli: v.moduli_count,
    }
}

fn build_result_set(
    opts: &ClassifyOptions,
    varieties: &[ClassifiedVariety],
    elapsed_ms: u64,
) -> ResultSet {
    ResultSet {
        tool: "coxfano".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        options: echo_options(opts),
        total: varieties.len(),
        varieties: varieties
            .iter()
            .enumerate()
            .map(|(i, v)| to_record(i + 1, v))
            .collect(),
        elapsed_ms,
    }
}

fn render_table(set: &ResultSet) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "dimension {} picard-index {} torsion {} fano {} toric {} separated {}: {} classes\n",
        set.options.dimension,
        set.options.picard_index,
        set.options.torsion,
        set.options.require_fano,
        set.options.include_toric,
        set.options.separated_only,
        set.total
    ));
    if set.varieties.is_empty() {
        return out;
    }
    out.push_str(&format!(
        "{:<4} {:<5} {:<14} {:>8} {:>5} {:>7}  {:<34} {}\n",
        "no.", "case", "class group", "dX", "iota", "moduli", "degrees", "relations"
    ));
    for v in &set.varieties {
        out.push_str(&format!(
            "{:<4} {:<5} {:<14} {:>8} {:>5} {:>7}  {:<34} {}\n",
            v.index,
            v.case,
            v.class_group,
            v.self_intersection,
            v.gorenstein_index,
            v.moduli,
            v.degrees,
            v.presentation
        ));
    }
    out
}

fn latex_group_name(data: &RingData) -> String {
    let mut parts = vec!["\\mathbb{Z}".to_string()];
    parts.extend(
        data.group
            .torsion()
            .iter()
            .map(|t| format!("\\mathbb{{Z}}/{t}")),
    );
    parts.join(" \\oplus ")
}

fn render_latex(set: &ResultSet, varieties: &[ClassifiedVariety]) -> String {
    let mut out = String::new();
    out.push_str("\\begin{longtable}{rlllll}\n");
    out.push_str(
        "No. & $R(X)$ & $\\operatorname{Cl}(X)$ & degrees & $d_X$ & $\\iota_X$ \\\\\n\\hline\n",
    );
    for (record, v) in set.varieties.iter().zip(varieties) {
        let frac = if v.invariants.self_intersection.is_integer() {
            record.self_intersection.clone()
        } else {
            let parts: Vec<&str> = record.self_intersection.split('/').collect();
            format!("\\tfrac{{{}}}{{{}}}", parts[0], parts[1])
        };
        out.push_str(&format!(
            "{} & ${}$ & ${}$ & ${}$ & ${}$ & ${}$ \\\\\n",
            record.index,
            presentation_string(&v.data, true),
            latex_group_name(&v.data),
            record.degrees.replace("; ", ";\\, "),
            frac,
            record.gorenstein_index
        ));
    }
    out.push_str("\\end{longtable}\n");
    out
}

// ---------------------------------------------------------------------------
// classify

fn cache_file(dir: &Path, echo: &OptionsEcho) -> PathBuf {
    let key = format!(
        "{}|{}",
        env!("CARGO_PKG_VERSION"),
        serde_json::to_string(echo).expect("echo serializes")
    );
    let digest = Sha256::digest(key.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    dir.join(format!("coxfano-{hex}.json"))
}

fn load_cache(path: &PathBuf, echo: &OptionsEcho) -> Option<ResultSet> {
    let text = fs::read_to_string(path).ok()?;
    let set: ResultSet = serde_json::from_str(&text).ok()?;
    (set.version == env!("CARGO_PKG_VERSION") && &set.options == echo).then_some(set)
}

fn cmd_classify(args: ClassifyArgs) -> Result<i32, CliError> {
    let opts = ClassifyOptions {
        dimension: args.dim,
        picard_index: args.picard_index,
        torsion_filter: args.torsion.into(),
        include_toric: args.include_toric,
        require_fano: !args.no_fano,
        separated_only: args.separated_only,
        max_candidates: args.max_candidates,
        jobs: args.jobs,
    };
    let echo = echo_options(&opts);
    let cache_dir = args
        .cache_dir
        .or_else(|| std::env::var_os("COXFANO_CACHE_DIR").map(PathBuf::from));
    let cache_path = cache_dir.as_ref().map(|d| cache_file(d, &echo));

    // The LaTeX renderer needs the domain objects, so cached sets are only
    // reused for the other formats.
    if args.format != Format::Latex {
        if let Some(set) = cache_path.as_ref().and_then(|p| load_cache(p, &echo)) {
            let rendered = match args.format {
                Format::Json => serde_json::to_string_pretty(&set).expect("serializes"),
                Format::Table => render_table(&set),
                Format::Latex => unreachable!(),
            };
            emit(args.out.as_ref(), rendered)?;
            return Ok(EXIT_OK);
        }
    }

    let start = Instant::now();
    let varieties = classify(&opts)?;
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let set = build_result_set(&opts, &varieties, elapsed_ms);

    if let (Some(dir), Some(path)) = (cache_dir.as_ref(), cache_path.as_ref()) {
        let stored = fs::create_dir_all(dir).and_then(|_| {
            fs::write(
                path,
                serde_json::to_string_pretty(&set).expect("serializes"),
            )
        });
        if let Err(e) = stored {
            eprintln!("warning: cannot write cache {}: {e}", path.display());
        }
    }

    let rendered = match args.format {
        Format::Json => serde_json::to_string_pretty(&set).expect("serializes"),
        Format::Table => render_table(&set),
        Format::Latex => render_latex(&set, &varieties),
    };
    emit(args.out.as_ref(), rendered)?;
    Ok(EXIT_OK)
}

fn emit(out: Option<&PathBuf>, mut rendered: String) -> Result<(), CliError> {
    if !rendered.ends_with('\n') {
        rendered.push('\n');
    }
    match out {
        Some(path) => fs::write(path, rendered)?,
        None => write_stdout(&rendered)?,
    }
    Ok(())
}

/// Writes to standard output, treating a closed pipe as a normal end of
/// output rather than an error, so `coxfano ... | head` exits cleanly.
fn write_stdout(text: &str) -> Result<(), CliError> {
    use std::io::Write;
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

// ---------------------------------------------------------------------------
// verify

#[derive(Serialize, Deserialize)]
struct FixtureRecord {
    name: String,
    data: RingDataJson,
    expected: ExpectedRecord,
}

#[derive(Serialize, Deserialize)]
struct ExpectedRecord {
    dimension: usize,
    picard_index: i64,
    self_intersection: String,
    gorenstein_index: i64,
    moduli_count: usize,
}

fn embedded_fixture_records() -> Vec<(String, RingData, ExpectedRecord)> {
    all_fixtures()
        .into_iter()
        .map(|f: Fixture| {
            let (p, q) = f.expected.self_intersection;
            let expected = ExpectedRecord {
                dimension: f.expected.dimension,
                picard_index: f.expected.picard_index,
                self_intersection: if q == 1 {
                    format!("{p}")
                } else {
                    format!("{p}/{q}")
                },
                gorenstein_index: f.expected.gorenstein_index,
                moduli_count: f.expected.moduli_count,
            };
            (f.name.to_string(), f.data, expected)
        })
        .collect()
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, CliError> {
    let records: Vec<(String, RingData, ExpectedRecord)> = match &args.fixtures {
        None => embedded_fixture_records(),
        Some(path) => {
            let text = fs::read_to_string(path)?;
            let parsed: Vec<FixtureRecord> = serde_json::from_str(&text)
                .map_err(|e| CliError::usage(format!("cannot parse fixtures: {e}")))?;
            parsed
                .into_iter()
                .map(|r| {
                    RingData::from_json(&r.data)
                        .map(|data| (r.name, data, r.expected))
                        .map_err(|e| CliError::usage(format!("fixture datum: {e}")))
                })
                .collect::<Result<_, _>>()?
        }
    };
    let mut out = String::new();
    let mut failures = 0usize;
    for (name, data, expected) in &records {
        let mut problems: Vec<String> = Vec::new();
        let report = data.validate();
        if !report.is_valid() {
            problems.push(format!("validation failed: {:?}", report.failures()));
        } else {
            let inv = compute_all(data);
            if inv.dimension != expected.dimension {
                problems.push(format!(
                    "dimension {} != {}",
                    inv.dimension, expected.dimension
                ));
            }
            if inv.picard_index != expected.picard_index {
                problems.push(format!(
                    "picard index {} != {}",
                    inv.picard_index, expected.picard_index
                ));
            }
            let got = rational_string(&inv.self_intersection);
            if got != expected.self_intersection {
                problems.push(format!(
                    "self-intersection {got} != {}",
                    expected.self_intersection
                ));
            }
            if inv.gorenstein_index != expected.gorenstein_index {
                problems.push(format!(
                    "gorenstein index {} != {}",
                    inv.gorenstein_index, expected.gorenstein_index
                ));
            }
            if inv.moduli_count != expected.moduli_count {
                problems.push(format!(
                    "moduli {} != {}",
                    inv.moduli_count, expected.moduli_count
                ));
            }
        }
        if problems.is_empty() {
            writeln!(
                out,
                "PASS {name} (mu={}, dX={}, iota={})",
                expected.picard_index, expected.self_intersection, expected.gorenstein_index
            )
            .expect("string write");
        } else {
            failures += 1;
            writeln!(out, "FAIL {name}: {}", problems.join("; ")).expect("string write");
        }
    }
    writeln!(
        out,
        "{} of {} fixtures passed",
        records.len() - failures,
        records.len()
    )
    .expect("string write");
    write_stdout(&out)?;
    Ok(if failures == 0 { EXIT_OK } else { EXIT_USAGE })
}

// ---------------------------------------------------------------------------
// invariants

fn cmd_invariants(args: InvariantsArgs) -> Result<i32, CliError> {
    let text = fs::read_to_string(&args.input)?;
    let json: RingDataJson = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("cannot parse input: {e}")))?;
    let data = RingData::from_json(&json)
        .map_err(|e| CliError::usage(format!("inconsistent datum: {e}")))?;
    let report = data.validate();
    if !report.is_valid() {
        let mut out = String::new();
        match args.format {
            Format::Json => {
                let checks: Vec<serde_json::Value> = report
                    .checks
                    .iter()
                    .map(|c| {
                        serde_json::json!({
                            "name": c.name,
                            "passed": c.passed,
                            "detail": c.detail,
                        })
                    })
                    .collect();
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({
                        "valid": false,
                        "checks": checks,
                    }))
                    .expect("serializes")
                )
                .expect("string write");
            }
            _ => {
                writeln!(out, "invalid datum:").expect("string write");
                for c in &report.checks {
                    let status = if c.passed { "ok  " } else { "FAIL" };
                    writeln!(out, "  {status} {}: {}", c.name, c.detail).expect("string write");
                }
            }
        }
        write_stdout(&out)?;
        return Ok(EXIT_INVALID_DATA);
    }

    let inv = compute_all(&data);
    let supports = minimal_supports(&data);
    let support_names: Vec<String> = supports
        .iter()
        .map(|s| {
            let names: Vec<String> = s.iter().map(|&i| variable_name(&data, i)).collect();
            format!("{{{}}}", names.join(","))
        })
        .collect();
    let minus_k = data.anticanonical_class();
    let mut out = String::new();
    match args.format {
        Format::Json => {
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "valid": true,
                    "dimension": inv.dimension,
                    "class_group": class_group_name(&data),
                    "picard_index": inv.picard_index,
                    "torsion_order": data.group.torsion_order(),
                    "anticanonical_class": {
                        "free": minus_k.free()[0],
                        "torsion": minus_k.torsion(),
                    },
                    "self_intersection": rational_string(&inv.self_intersection),
                    "gorenstein_index": inv.gorenstein_index,
                    "fano": inv.fano,
                    "toric": inv.toric,
                    "moduli": inv.moduli_count,
                    "minimal_supports": supports,
                }))
                .expect("serializes")
            )
            .expect("string write");
        }
        _ => {
            writeln!(out, "valid: yes").expect("string write");
            writeln!(out, "dimension: {}", inv.dimension).expect("string write");
            writeln!(out, "class group: {}", class_group_name(&data)).expect("string write");
            writeln!(out, "picard index: {}", inv.picard_index).expect("string write");
            writeln!(out, "torsion order: {}", data.group.torsion_order()).expect("string write");
            let res: Vec<String> = minus_k.torsion().iter().map(|r| r.to_string()).collect();
            writeln!(
                out,
                "anticanonical class: ({}{})",
                minus_k.free()[0],
                if res.is_empty() {
                    String::new()
                } else {
                    format!("; {}", res.join(","))
                }
            )
            .expect("string write");
            writeln!(
                out,
                "self-intersection: {}",
                rational_string(&inv.self_intersection)
            )
            .expect("string write");
            writeln!(out, "gorenstein index: {}", inv.gorenstein_index).expect("string write");
            writeln!(out, "fano: {}", inv.fano).expect("string write");
            writeln!(out, "toric: {}", inv.toric).expect("string write");
            writeln!(out, "moduli: {}", inv.moduli_count).expect("string write");
            writeln!(out, "minimal supports: {}", support_names.join(", ")).expect("string write");
        }
    }
    write_stdout(&out)?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// count

fn parse_range(text: &str) -> Result<(i64, i64), CliError> {
    let parse = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|_| CliError::usage(format!("invalid range endpoint {s:?}")))
    };
    match text.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (parse(a)?, parse(b)?);
            if a > b {
                return Err(CliError::usage(format!("empty range {text:?}")));
            }
            Ok((a, b))
        }
        None => {
            let v = parse(text)?;
            Ok((v, v))
        }
    }
}

fn cmd_count(args: CountArgs) -> Result<i32, CliError> {
    let (d0, d1) = parse_range(&args.dim_range)?;
    let (m0, m1) = parse_range(&args.mu_range)?;
    if d0 < 1 || m0 < 1 {
        return Err(CliError::usage("ranges must start at 1"));
    }
    let mut out = String::new();
    writeln!(
        out,
        "{:<4} {:<4} {:>9} {:>7} {:<22}",
        "dim", "mu", "classes", "toric", "upper bound"
    )
    .expect("string write");
    for d in d0..=d1 {
        for mu in m0..=m1 {
            let opts = ClassifyOptions {
                torsion_filter: args.torsion.into(),
                include_toric: args.include_toric,
                require_fano: !args.no_fano,
                max_candidates: args.max_candidates,
                jobs: args.jobs,
                ..ClassifyOptions::new(d as usize, mu)
            };
            let report = count_types(&opts)?;
            let toric = if args.include_toric {
                report.toric.to_string()
            } else {
                "-".to_string()
            };
            writeln!(
                out,
                "{:<4} {:<4} {:>9} {:>7} {:<22}",
                d, mu, report.nontoric, toric, report.upper_bound
            )
            .expect("string write");
        }
    }
    write_stdout(&out)?;
    Ok(EXIT_OK)
}
