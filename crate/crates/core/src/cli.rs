//! Command-line front end. Exit codes: 0 pass / done, 1 negative verdict,
//! 2 usage or input error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::construct::{density_report, greedy_repair, ConstructionLog, Strategy};
use crate::error::{Error, Result};
use crate::intset::{blocks, IntegerSet};
use crate::parallel::{available_threads, with_threads};
use crate::repcount::{rep_count, rep_table, sumset, Exactness};
use crate::verify::{
    check_premise, is_bhs, min_threshold, round_sig12, run_theorem, BlockStatus, TheoremId,
    TheoremParams, TheoremReport,
};
use crate::{selftest, SCHEMA_VERSION};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    #[value(alias = "structured")]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "sumrep",
    version,
    about = "Exact sumset representation counts and certified growth bounds"
)]
pub struct Cli {
    /// Worker threads for the counting engine (results do not depend on it).
    #[arg(long, global = true, env = "SUMREP_THREADS")]
    pub threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,

    /// Omit the metadata block (timestamp, thread count) from structured output.
    #[arg(long, global = true)]
    pub no_meta: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SetArg {
    /// Set file: one nonnegative integer per line, `#` comments.
    #[arg(long = "set")]
    pub path: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// h-fold sumset, optionally capped.
    Sumset {
        #[command(flatten)]
        set: SetArg,
        #[arg(long)]
        h: u64,
        #[arg(long)]
        cap: Option<u64>,
    },
    /// r_{A,h}(n) for one n, or a table over [lo, hi].
    Rep {
        #[command(flatten)]
        set: SetArg,
        #[arg(long)]
        h: u64,
        #[arg(long, conflicts_with_all = ["lo", "hi"])]
        n: Option<u64>,
        #[arg(long)]
        lo: Option<u64>,
        #[arg(long)]
        hi: Option<u64>,
        /// `complete` or `prefix:M`.
        #[arg(long, default_value = "complete")]
        mode: String,
    },
    /// B_{h,s} check (Sidon: h = 2, s = 1).
    Bhs {
        #[command(flatten)]
        set: SetArg,
        #[arg(long)]
        h: u64,
        #[arg(long)]
        s: u64,
        #[arg(long, default_value = "complete")]
        mode: String,
    },
    /// r_{A,h}(n) >= ell for every n in hA with n0 <= n <= exactness bound.
    Premise {
        #[command(flatten)]
        set: SetArg,
        #[arg(long)]
        h: u64,
        #[arg(long)]
        ell: u64,
        /// Defaults to the least threshold that passes.
        #[arg(long)]
        n0: Option<u64>,
        #[arg(long, default_value = "complete")]
        mode: String,
    },
    /// End-to-end growth-theorem check with certificates.
    Theorem {
        #[arg(long)]
        id: String,
        #[command(flatten)]
        set: SetArg,
        #[arg(long, default_value_t = 2)]
        h: u64,
        #[arg(long, default_value_t = 2)]
        ell: u64,
        #[arg(long, default_value_t = 1)]
        s: u64,
        #[arg(long)]
        n0: Option<u64>,
        #[arg(long, default_value = "complete")]
        mode: String,
    },
    /// Decomposition into blocks A_k = A ∩ [h^(k-1), h^k).
    Blocks {
        #[command(flatten)]
        set: SetArg,
        #[arg(long)]
        h: u64,
    },
    /// Greedy repair construction (h = 2).
    Construct {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        horizon: u64,
        #[arg(long, default_value = "smallest-new")]
        strategy: String,
        /// Seed set file; defaults to {0, 1}.
        #[arg(long)]
        seed_set: Option<PathBuf>,
        /// Also write the JSON log here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Density table of a construction log.
    Density {
        #[arg(long)]
        log: PathBuf,
    },
    /// Randomized oracle-equivalence suite.
    Selftest {
        #[arg(long, default_value_t = 500)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Sumset { .. } => "sumset",
            Command::Rep { .. } => "rep",
            Command::Bhs { .. } => "bhs",
            Command::Premise { .. } => "premise",
            Command::Theorem { .. } => "theorem",
            Command::Blocks { .. } => "blocks",
            Command::Construct { .. } => "construct",
            Command::Density { .. } => "density",
            Command::Selftest { .. } => "selftest",
        }
    }
}

#[derive(Serialize)]
struct Meta {
    tool: &'static str,
    version: &'static str,
    generated_unix: u64,
    threads: usize,
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    meta: Option<Meta>,
    result: T,
}

struct Output {
    stdout: String,
    stderr: String,
    code: i32,
}

impl Output {
    fn new() -> Self {
        Output {
            stdout: String::new(),
            stderr: String::new(),
            code: EXIT_PASS,
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.stdout.push_str(s.as_ref());
        self.stdout.push('\n');
    }

    fn warn(&mut self, s: impl AsRef<str>) {
        self.stderr.push_str("warning: ");
        self.stderr.push_str(s.as_ref());
        self.stderr.push('\n');
    }

    fn verdict(&mut self, pass: bool) {
        if !pass {
            self.code = EXIT_FAIL;
        }
    }
}

struct Ctx {
    format: Format,
    meta: Option<Meta>,
}

impl Ctx {
    fn document<T: Serialize>(
        &mut self,
        out: &mut Output,
        command: &str,
        result: &T,
    ) -> Result<()> {
        let doc = Document {
            schema_version: SCHEMA_VERSION,
            command,
            meta: self.meta.take(),
            result,
        };
        let text = serde_json::to_string_pretty(&doc)
            .map_err(|e| Error::InvalidParameter(format!("serialization failed: {e}")))?;
        out.line(text);
        Ok(())
    }
}

fn load_set(arg: &SetArg) -> Result<IntegerSet> {
    IntegerSet::load(&arg.path).map_err(|e| match e {
        Error::Parse { line, msg } => Error::Parse {
            line,
            msg: format!("{}: {msg}", arg.path.display()),
        },
        Error::Io(msg) => Error::Io(format!("{}: {msg}", arg.path.display())),
        other => other,
    })
}

fn sig(v: f64) -> String {
    format!("{}", round_sig12(v))
}

/// Parses `args` (including the program name) and runs the command,
/// writing to the given streams. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_ERROR
            } else {
                EXIT_PASS
            };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let threads = cli.threads.unwrap_or_else(available_threads);
    let meta = (!cli.no_meta).then(|| Meta {
        tool: "sumrep",
        version: env!("CARGO_PKG_VERSION"),
        generated_unix: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs()),
        threads,
    });
    let mut ctx = Ctx {
        format: cli.format,
        meta,
    };
    let result = with_threads(threads, || dispatch(&cli.command, &mut ctx)).and_then(|r| r);
    match result {
        Ok(out) => {
            let _ = stdout.write_all(out.stdout.as_bytes());
            let _ = stderr.write_all(out.stderr.as_bytes());
            out.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}: {e}", cli.command.name());
            EXIT_ERROR
        }
    }
}

fn dispatch(command: &Command, ctx: &mut Ctx) -> Result<Output> {
    let mut out = Output::new();
    let name = command.name();
    match command {
        Command::Sumset { set, h, cap } => {
            let a = load_set(set)?;
            let s = sumset(&a, *h, *cap)?;
            match ctx.format {
                Format::Json => ctx.document(&mut out, name, &s)?,
                Format::Csv => {
                    out.line("n");
                    s.iter().for_each(|n| out.line(n.to_string()));
                }
                Format::Text => {
                    out.line(format!("|{h}A| = {}", s.len()));
                    out.line(s.to_string());
                }
            }
        }
        Command::Rep {
            set,
            h,
            n,
            lo,
            hi,
            mode,
        } => {
            let a = load_set(set)?;
            let mode: Exactness = mode.parse()?;
            if let Some(n) = n {
                let r = rep_count(&a, *h, *n)?;
                if let Some(bound) = mode.bound(&a, *h)? {
                    if *n > bound {
                        out.warn(format!(
                            "n = {n} lies outside the exactness window (bound {bound})"
                        ));
                    }
                }
                match ctx.format {
                    Format::Json => {
                        #[derive(Serialize)]
                        struct Single {
                            h: u64,
                            n: u64,
                            count: u64,
                        }
                        ctx.document(
                            &mut out,
                            name,
                            &Single {
                                h: *h,
                                n: *n,
                                count: r,
                            },
                        )?
                    }
                    Format::Csv => {
                        out.line("n,count");
                        out.line(format!("{n},{r}"));
                    }
                    Format::Text => out.line(format!("r={r}")),
                }
            } else {
                let top = a.scaled_max(*h)?.unwrap_or(0);
                let prefix = match mode {
                    Exactness::Prefix(m) => Some(m),
                    Exactness::Complete => None,
                };
                let table = rep_table(&a, *h, lo.unwrap_or(0), hi.unwrap_or(top), prefix)?;
                if table.trimmed {
                    out.warn(format!("window trimmed at h * max(A) = {top}"));
                }
                match ctx.format {
                    Format::Json => ctx.document(&mut out, name, &table)?,
                    Format::Csv => out.stdout.push_str(&table.to_csv()),
                    Format::Text => {
                        out.line(format!(
                            "# h={} exactness_bound={}",
                            table.h, table.exactness_bound
                        ));
                        for (n, c) in table.iter() {
                            let flag = if table.is_exact_at(n) {
                                ""
                            } else {
                                "  (outside exactness window)"
                            };
                            out.line(format!("{n} {c}{flag}"));
                        }
                    }
                }
            }
        }
        Command::Bhs { set, h, s, mode } => {
            let a = load_set(set)?;
            let check = is_bhs(&a, *h, *s, mode.parse()?)?;
            out.verdict(check.holds);
            match ctx.format {
                Format::Json => ctx.document(&mut out, name, &check)?,
                Format::Csv => {
                    out.line("n,count");
                    for (n, c) in &check.violations {
                        out.line(format!("{n},{c}"));
                    }
                }
                Format::Text => {
                    out.line(format!("B_{{{h},{s}}}: {}", check.holds));
                    for (n, c) in check.violations.iter().take(20) {
                        out.line(format!("  violation: r({n}) = {c}"));
                    }
                }
            }
        }
        Command::Premise {
            set,
            h,
            ell,
            n0,
            mode,
        } => {
            let a = load_set(set)?;
            let mode: Exactness = mode.parse()?;
            let n0 = match n0 {
                Some(n) => Some(*n),
                None => min_threshold(&a, *h, *ell, mode)?,
            };
            let report = check_premise(&a, *h, *ell, n0.unwrap_or(0), mode)?;
            let holds = n0.is_some() && report.holds;
            out.verdict(holds);
            match ctx.format {
                Format::Json => ctx.document(&mut out, name, &report)?,
                Format::Csv => {
                    out.line("n,count");
                    for (n, c) in &report.violations {
                        out.line(format!("{n},{c}"));
                    }
                }
                Format::Text => {
                    match n0 {
                        Some(n0) => out.line(format!(
                            "premise r_{{A,{h}}}(n) >= {ell} on [{n0}, {}]: {}",
                            report.window.1, report.holds
                        )),
                        None => out.line(format!(
                            "premise r_{{A,{h}}}(n) >= {ell}: no threshold n0 within [0, {}]",
                            report.window.1
                        )),
                    }
                    out.line(format!("checked {} sums", report.checked_count));
                    for (n, c) in report.violations.iter().take(20) {
                        out.line(format!("  violation: r({n}) = {c}"));
                    }
                }
            }
        }
        Command::Theorem {
            id,
            set,
            h,
            ell,
            s,
            n0,
            mode,
        } => {
            let a = load_set(set)?;
            let id: TheoremId = id.parse()?;
            let params = TheoremParams {
                id,
                h: *h,
                ell: *ell,
                s: *s,
            };
            let report = run_theorem(&a, &params, mode.parse()?, *n0)?;
            out.verdict(report.verdict.pass);
            match ctx.format {
                Format::Json => ctx.document(&mut out, name, &report)?,
                Format::Csv => out.stdout.push_str(&report.bound_csv()),
                Format::Text => theorem_text(&mut out, &report),
            }
        }
        Command::Blocks { set, h } => {
            let a = load_set(set)?;
            let d = blocks(&a, *h)?;
            match ctx.format {
                Format::Json => ctx.document(&mut out, name, &d)?,
                Format::Csv => {
                    out.line("k,size,max");
                    for b in &d.blocks {
                        out.line(format!("{},{},{}", b.k, b.members.len(), b.top()));
                    }
                }
                Format::Text => {
                    for b in &d.blocks {
                        out.line(format!("k={}: {}", b.k, b.members));
                    }
                    if d.zero_excluded {
                        out.line("(0 excluded)");
                    }
                }
            }
        }
        Command::Construct {
            ell,
            horizon,
            strategy,
            seed_set,
            out: path,
        } => {
            let strategy: Strategy = strategy.parse()?;
            let seed = match seed_set {
                Some(p) => load_set(&SetArg { path: p.clone() })?,
                None => IntegerSet::from_unsorted(vec![0, 1]),
            };
            let log = greedy_repair(*ell, *horizon, strategy, &seed)?;
            out.verdict(log.is_certified());
            if let Some(p) = path {
                let json = serde_json::to_string_pretty(&log)
                    .map_err(|e| Error::InvalidParameter(e.to_string()))?;
                std::fs::write(p, json + "\n")?;
            }
            match ctx.format {
                Format::Json => ctx.document(&mut out, name, &log)?,
                Format::Csv => {
                    out.line("x,Ax");
                    for (x, c) in &log.density_curve {
                        out.line(format!("{x},{c}"));
                    }
                }
                Format::Text => {
                    out.line(format!(
                        "ell={} horizon={} strategy={} final |A|={} additions={} failures={}",
                        log.target_ell,
                        log.horizon,
                        log.strategy,
                        log.final_set.len(),
                        log.additions.len(),
                        log.failures.len()
                    ));
                    match log.certification {
                        Some(c) => out.line(format!(
                            "certified: r(n) >= {} for n in 2A, {} <= n <= W = {}",
                            log.target_ell, c.n0, c.watermark
                        )),
                        None => {
                            out.line(format!("not certified (W = {})", log.certified_watermark))
                        }
                    }
                }
            }
        }
        Command::Density { log } => {
            let text = std::fs::read_to_string(log)?;
            let log: ConstructionLog = serde_json::from_str(&text).map_err(|e| Error::Parse {
                line: e.line(),
                msg: format!("construction log: {e}"),
            })?;
            let report = density_report(&log)?;
            out.verdict(report.all_above_bound());
            match ctx.format {
                Format::Json => ctx.document(&mut out, name, &report)?,
                Format::Csv => out.stdout.push_str(&report.to_csv()),
                Format::Text => {
                    out.line(format!(
                        "lower bound: {} with k0 = {}",
                        report.bound_theorem, report.k0
                    ));
                    for r in &report.rows {
                        out.line(format!(
                            "x={} A(x)={} bound={} (log x)^2={} ratio={}",
                            r.x,
                            r.count,
                            sig(r.lower_bound),
                            sig(r.log_sq_ref),
                            sig(r.ratio)
                        ));
                    }
                }
            }
        }
        Command::Selftest { cases, seed } => {
            let report = selftest::run(*cases, *seed)?;
            out.verdict(report.pass);
            match ctx.format {
                Format::Json => ctx.document(&mut out, name, &report)?,
                _ => out.line(format!(
                    "selftest: {} cases, {} comparisons, {} mismatches: {}",
                    report.cases,
                    report.comparisons,
                    report.mismatches.len(),
                    if report.pass { "PASS" } else { "FAIL" }
                )),
            }
        }
    }
    Ok(out)
}

fn theorem_text(out: &mut Output, r: &TheoremReport) {
    out.line(format!(
        "theorem {} h={} ell={} s={} mode={} |A|={}",
        r.theorem, r.h, r.ell, r.s, r.mode, r.set_size
    ));
    let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
    out.line(format!(
        "n0={} a0={} k0={} w0={}",
        opt(r.n0.map(|v| v.to_string())),
        opt(r.a0.map(|v| v.to_string())),
        opt(r.k0.map(|v| v.to_string())),
        opt(r.w0.map(|v| v.to_string()))
    ));
    if let Some(b) = &r.bhs_premise {
        out.line(format!("B_{{{},{}}} premise: {}", b.h, b.s, b.holds));
    }
    if let Some(p) = &r.premise {
        out.line(format!(
            "premise on [{}, {}]: {} ({} sums checked)",
            p.window.0, p.window.1, p.holds, p.checked_count
        ));
    }
    if let Some(g) = &r.block_checks {
        for row in &g.rows {
            let status = match row.status {
                BlockStatus::Pass => "pass",
                BlockStatus::PassWindowEdge => "pass (edge of window)",
                BlockStatus::Fail => "FAIL",
            };
            let wit = row
                .witness
                .as_ref()
                .map(|w| format!(" witness {}={:?}", w.target, w.representation))
                .unwrap_or_default();
            out.line(format!(
                "  k={} |A_k|={} required={} {status}{wit}",
                row.k, row.actual, row.required
            ));
        }
    }
    if let Some(b) = &r.bound_checks {
        let min = b.points.iter().min_by(|x, y| x.margin.total_cmp(&y.margin));
        if let Some(p) = min {
            out.line(format!(
                "counting bound on [{}, {}]: {} points, smallest margin {} at x={}",
                r.h,
                b.x_max,
                b.points.len(),
                sig(p.margin),
                p.x
            ));
        }
    }
    for note in &r.notes {
        out.line(format!("note: {note}"));
    }
    match &r.verdict.failure {
        None => out.line("verdict: PASS"),
        Some(f) => out.line(format!("verdict: FAIL at {}: {}", f.stage, f.detail)),
    }
}
