//! Job descriptions and the pipeline runner behind the command line.

use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::corpus;
use crate::covering::{
    branched_presentation, branched_presentation_unreduced, direct_branched_presentation,
    expand_kernel_word, gk_image, kernel_presentation, rewrite_kernel_word, CoverError, KernelWord,
};
use crate::frontend::parse::{parse_input, print_input, print_presentation, Input};
use crate::invariants::verify::{
    verify_core_double_cover, verify_cyclic_cover, Status, VerificationReport, VerifyOptions,
};
use crate::invariants::{
    abelian_invariants, hom_count_with, FiniteGroup, HomCountError, HomSearch, DEFAULT_NODE_BUDGET,
};
use crate::presentations::Presentation;
use crate::words::{Letter, Sign, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Wirtinger,
    Core,
    UnorientedWirtinger,
    Kernel,
    Cover,
    DirectCover,
    Abelianize,
    Homcount,
    Verify13,
    Verify15,
    RoundtripSelftest,
}

impl Command {
    pub const ALL: [Command; 11] = [
        Command::Wirtinger,
        Command::Core,
        Command::UnorientedWirtinger,
        Command::Kernel,
        Command::Cover,
        Command::DirectCover,
        Command::Abelianize,
        Command::Homcount,
        Command::Verify13,
        Command::Verify15,
        Command::RoundtripSelftest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Wirtinger => "wirtinger",
            Command::Core => "core",
            Command::UnorientedWirtinger => "unoriented-wirtinger",
            Command::Kernel => "kernel",
            Command::Cover => "cover",
            Command::DirectCover => "direct-cover",
            Command::Abelianize => "abelianize",
            Command::Homcount => "homcount",
            Command::Verify13 => "verify13",
            Command::Verify15 => "verify15",
            Command::RoundtripSelftest => "roundtrip-selftest",
        }
    }

    pub fn from_name(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == name)
    }

    fn needs_k(self) -> bool {
        matches!(
            self,
            Command::Kernel | Command::Cover | Command::DirectCover | Command::Verify15
        )
    }

    fn needs_targets(self) -> bool {
        matches!(
            self,
            Command::Homcount | Command::Verify13 | Command::Verify15
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Structured,
}

/// Process exit codes. Verification failure and budget exhaustion never share
/// a code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(i32)]
pub enum ExitStatus {
    Success = 0,
    Usage = 2,
    Parse = 3,
    Precondition = 4,
    VerificationFailed = 5,
    BudgetExhausted = 6,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobSpec {
    pub command: Command,
    pub k: Option<usize>,
    pub targets: Vec<String>,
    pub budget: Option<u64>,
    pub format: OutputFormat,
    /// Generator name, or 1-based index, of the direct-cover transversal.
    pub axis: Option<String>,
    pub unreduced: bool,
    pub input: Option<Input>,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        JobSpec {
            command,
            k: None,
            targets: Vec::new(),
            budget: None,
            format: OutputFormat::Text,
            axis: None,
            unreduced: false,
            input: None,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.command.needs_k() && self.k.is_none() {
            return Err(format!("`{}` requires --k", self.command.name()));
        }
        if self.command.needs_targets() && self.targets.is_empty() {
            return Err(format!("`{}` requires --targets", self.command.name()));
        }
        if self.command != Command::RoundtripSelftest && self.input.is_none() {
            return Err(format!("`{}` requires an input", self.command.name()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: ExitStatus,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            status: ExitStatus::Success,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(status: ExitStatus, message: impl Into<String>) -> Self {
        Outcome {
            status,
            stdout: String::new(),
            stderr: format!("error: {}\n", message.into()),
        }
    }
}

/// Parses `source` (when given) into the job's input, then runs it. Parse
/// warnings go to `stderr`.
pub fn run_source(mut job: JobSpec, source: Option<&str>) -> Outcome {
    let mut warnings = String::new();
    if let Some(text) = source {
        match parse_input(text) {
            Ok(parsed) => {
                for w in &parsed.warnings {
                    let _ = writeln!(warnings, "{w}");
                }
                job.input = Some(parsed.input);
            }
            Err(e) => return Outcome::error(ExitStatus::Parse, format!("input:{e}")),
        }
    }
    let mut outcome = run(&job);
    outcome.stderr.insert_str(0, &warnings);
    outcome
}

pub fn run(job: &JobSpec) -> Outcome {
    if let Err(msg) = job.validate() {
        return Outcome::error(ExitStatus::Usage, msg);
    }
    let targets = match job
        .targets
        .iter()
        .map(|t| FiniteGroup::builtin(t))
        .collect::<Result<Vec<_>, _>>()
    {
        Ok(t) => t,
        Err(e) => return Outcome::error(ExitStatus::Usage, format!("--targets: {e}")),
    };
    let search = HomSearch::with_budget(job.budget.unwrap_or(DEFAULT_NODE_BUDGET));
    match execute(job, &targets, &search) {
        Ok(outcome) => outcome,
        Err(outcome) => outcome,
    }
}

fn precondition(msg: impl Into<String>) -> Outcome {
    Outcome::error(ExitStatus::Precondition, msg)
}

fn cover_error(e: CoverError) -> Outcome {
    precondition(e.to_string())
}

fn execute(job: &JobSpec, targets: &[FiniteGroup], search: &HomSearch) -> Result<Outcome, Outcome> {
    let input = job.input.as_ref();
    let name = input.map_or("selftest", Input::name);
    let k = job.k.unwrap_or(2);

    if job.command.needs_k() {
        if k < 2 {
            return Err(precondition(format!("--k must be at least 2, got {k}")));
        }
        if let Some(Input::Diagram(d)) = input {
            if !d.is_oriented() && k != 2 {
                return Err(precondition(format!(
                    "diagram `{}` is unoriented: only the double cover (--k 2) is defined, got --k {k}",
                    d.name()
                )));
            }
        }
    }

    let diagram = || match input {
        Some(Input::Diagram(d)) => Ok(d),
        _ => Err(precondition(format!(
            "`{}` requires a diagram input",
            job.command.name()
        ))),
    };
    let base = || match input {
        Some(Input::Diagram(d)) => d.base_presentation(),
        Some(Input::Presentation(p)) => p.presentation.clone(),
        None => unreachable!("validated"),
    };

    let emit = |suffix: String, p: &Presentation| {
        Ok(Outcome::ok(render_presentation(
            &format!("{name}-{suffix}"),
            p,
            job.format,
        )))
    };

    match job.command {
        Command::Wirtinger => {
            let p = diagram()?
                .wirtinger_presentation()
                .map_err(|e| precondition(e.to_string()))?;
            emit("wirtinger".into(), &p)
        }
        Command::Core => emit("core".into(), &diagram()?.core_presentation()),
        Command::UnorientedWirtinger => emit(
            "unoriented-wirtinger".into(),
            &diagram()?.unoriented_wirtinger(),
        ),
        Command::Kernel => emit(
            format!("kernel-k{k}"),
            &kernel_presentation(&base(), k).map_err(cover_error)?,
        ),
        Command::Cover => {
            let p = if job.unreduced {
                branched_presentation_unreduced(&base(), k)
            } else {
                branched_presentation(&base(), k)
            };
            let suffix = if job.unreduced {
                format!("cover-k{k}-unreduced")
            } else {
                format!("cover-k{k}")
            };
            emit(suffix, &p.map_err(cover_error)?)
        }
        Command::DirectCover => {
            let b = base();
            let axis = resolve_axis(job.axis.as_deref(), &b)?;
            emit(
                format!("direct-cover-k{k}"),
                &direct_branched_presentation(&b, k, axis).map_err(cover_error)?,
            )
        }
        Command::Abelianize => {
            let inv = abelian_invariants(&base());
            let out = match job.format {
                OutputFormat::Text => format!("{inv}\n"),
                OutputFormat::Structured => pretty(&json!({
                    "input": name,
                    "free_rank": inv.free_rank,
                    "torsion": inv.torsion.iter().map(big_json).collect::<Vec<_>>(),
                })),
            };
            Ok(Outcome::ok(out))
        }
        Command::Homcount => Ok(homcount(name, &base(), targets, search, job.format)),
        Command::Verify13 => {
            let opts = VerifyOptions {
                search: *search,
                axis: 0,
            };
            let report = verify_core_double_cover(diagram()?, targets, &opts)
                .map_err(|e| precondition(e.to_string()))?;
            Ok(report_outcome(&report, job.format))
        }
        Command::Verify15 => {
            let b = base();
            let axis = resolve_axis(job.axis.as_deref(), &b)?;
            let opts = VerifyOptions {
                search: *search,
                axis,
            };
            let report = verify_cyclic_cover(&b, k, targets, &opts)
                .map_err(|e| precondition(e.to_string()))?;
            Ok(report_outcome(&report, job.format))
        }
        Command::RoundtripSelftest => Ok(selftest(input, job.format)),
    }
}

fn resolve_axis(axis: Option<&str>, base: &Presentation) -> Result<usize, Outcome> {
    let Some(axis) = axis else { return Ok(0) };
    if let Some(i) = base.generator_index(axis) {
        return Ok(i);
    }
    match axis.parse::<usize>() {
        Ok(i) if (1..=base.generator_count()).contains(&i) => Ok(i - 1),
        _ => Err(precondition(format!("--axis `{axis}` names no generator"))),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

/// Number when it fits in `u64`, string otherwise.
fn big_json<T: ToString>(n: &T) -> Value {
    let s = n.to_string();
    s.parse::<u64>()
        .map(Value::from)
        .unwrap_or(Value::String(s))
}

pub fn render_presentation(name: &str, p: &Presentation, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => format!("# {p}\n{}", print_presentation(name, p)),
        OutputFormat::Structured => pretty(&json!({
            "name": name,
            "generators": p.generators(),
            "relators": p.relators().iter().map(|r| r.display_with(p.generators()).to_string()).collect::<Vec<_>>(),
        })),
    }
}

fn homcount(
    name: &str,
    p: &Presentation,
    targets: &[FiniteGroup],
    search: &HomSearch,
    format: OutputFormat,
) -> Outcome {
    let results: Vec<(&FiniteGroup, Result<_, HomCountError>)> = targets
        .iter()
        .map(|t| (t, hom_count_with(p, t, search)))
        .collect();
    let exhausted = results.iter().any(|(_, r)| r.is_err());
    let stdout = match format {
        OutputFormat::Text => {
            let mut s = format!("{:<8}{:<7}homomorphisms\n", "target", "order");
            for (t, r) in &results {
                let count = match r {
                    Ok(n) => n.to_string(),
                    Err(e) => e.to_string(),
                };
                let _ = writeln!(s, "{:<8}{:<7}{}", t.name(), t.order(), count);
            }
            s
        }
        OutputFormat::Structured => pretty(&json!({
            "input": name,
            "counts": results.iter().map(|(t, r)| match r {
                Ok(n) => json!({"target": t.name(), "order": t.order(), "status": "ok", "count": big_json(n)}),
                Err(_) => json!({"target": t.name(), "order": t.order(), "status": "budget-exhausted", "count": Value::Null}),
            }).collect::<Vec<_>>(),
        })),
    };
    let status = if exhausted {
        ExitStatus::BudgetExhausted
    } else {
        ExitStatus::Success
    };
    Outcome {
        status,
        stdout,
        stderr: String::new(),
    }
}

fn report_outcome(report: &VerificationReport, format: OutputFormat) -> Outcome {
    let stdout = match format {
        OutputFormat::Text => format!("{report}\n"),
        OutputFormat::Structured => format!("{}\n", report.to_json()),
    };
    let status = match report.overall {
        Status::Pass => ExitStatus::Success,
        Status::Fail => ExitStatus::VerificationFailed,
        Status::Inconclusive => ExitStatus::BudgetExhausted,
    };
    Outcome {
        status,
        stdout,
        stderr: String::new(),
    }
}

/// Outcome of randomized rewrite round trips.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTripSummary {
    pub trials: usize,
    pub failures: Vec<String>,
}

/// A random reduced word of length at most `max_len` over `alphabet`
/// generators whose exponent sum is 0 mod `k`.
pub fn random_kernel_word<R: Rng>(rng: &mut R, alphabet: usize, max_len: usize, k: usize) -> Word {
    loop {
        let len = rng.random_range(0..=max_len);
        let word = Word::reduced((0..len).map(|_| {
            let sign = if rng.random_bool(0.5) {
                Sign::Pos
            } else {
                Sign::Neg
            };
            Letter::new(rng.random_range(0..alphabet), sign)
        }));
        if gk_image(&word, k) == 0 {
            return word;
        }
    }
}

/// Checks `expand ∘ rewrite = free_reduce` and the kernel-word text round
/// trip on `trials` random kernel words (alphabet ≤ 5, length ≤ 40,
/// k ∈ {2, 3, 5}), seeded deterministically.
pub fn rewrite_round_trips(trials: usize, seed: u64) -> RoundTripSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for _ in 0..trials {
        let alphabet = rng.random_range(1..=5);
        let k = [2, 3, 5][rng.random_range(0..3)];
        let special = rng.random_range(0..alphabet);
        let w = random_kernel_word(&mut rng, alphabet, 40, k);
        let rewritten = match rewrite_kernel_word(&w, k, special) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("{w} (k={k}): {e}"));
                continue;
            }
        };
        if expand_kernel_word(&rewritten, k, special) != w.free_reduce() {
            failures.push(format!(
                "{w} (k={k}, special x{}): expansion differs",
                special + 1
            ));
        }
        if rewritten.to_string().parse::<KernelWord>().as_ref() != Ok(&rewritten) {
            failures.push(format!("{rewritten}: kernel word text round trip differs"));
        }
    }
    RoundTripSummary { trials, failures }
}

fn selftest(input: Option<&Input>, format: OutputFormat) -> Outcome {
    const TRIALS: usize = 1000;
    const SEED: u64 = 0x5eed;
    let started = Instant::now();
    let summary = rewrite_round_trips(TRIALS, SEED);
    let elapsed = started.elapsed();

    let mut texts: Vec<String> = corpus::ALL
        .iter()
        .map(|t| print_input(&corpus::input(t)))
        .collect();
    if let Some(i) = input {
        texts.push(print_input(i));
    }
    let print_failures: Vec<String> = texts
        .iter()
        .filter(|t| parse_input(t).map(|p| print_input(&p.input)).as_ref() != Ok(*t))
        .map(|t| t.lines().next().unwrap_or_default().to_string())
        .collect();

    let pass = summary.failures.is_empty() && print_failures.is_empty();
    let stdout = match format {
        OutputFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "rewrite round trip: {}/{} ({} ms)",
                TRIALS - summary.failures.len(),
                TRIALS,
                elapsed.as_millis()
            );
            for f in &summary.failures {
                let _ = writeln!(s, "  failed: {f}");
            }
            let _ = writeln!(
                s,
                "print/parse round trip: {}/{}",
                texts.len() - print_failures.len(),
                texts.len()
            );
            for f in &print_failures {
                let _ = writeln!(s, "  failed: {f}");
            }
            let _ = writeln!(s, "overall: {}", if pass { "pass" } else { "FAIL" });
            s
        }
        OutputFormat::Structured => pretty(&json!({
            "rewrite_trials": TRIALS,
            "rewrite_failures": summary.failures,
            "print_parse_inputs": texts.len(),
            "print_parse_failures": print_failures,
            "overall": if pass { "pass" } else { "fail" },
        })),
    };
    let status = if pass {
        ExitStatus::Success
    } else {
        ExitStatus::VerificationFailed
    };
    Outcome {
        status,
        stdout,
        stderr: String::new(),
    }
}
