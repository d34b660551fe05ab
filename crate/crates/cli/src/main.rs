//! `sdstjsp`: benchmark harness for the sdst-jsp solver library.
//!
//! Subcommands: `solve` (one deterministic pass), `sample` (multi-pass
//! biased sampling, CSV on stdout), `enumerate` (full decision tree of a
//! scheme), `verify` (feasibility + schedule classes of a schedule file),
//! `generate` (random instances), `report` (aggregate tables from a runs
//! CSV). Exit codes: 0 success, 1 usage error, 2 validation failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use sdst_jsp::classify;
use sdst_jsp::enumerate;
use sdst_jsp::gantt::gantt_svg;
use sdst_jsp::instances::{self, GeneratorConfig};
use sdst_jsp::model::{validate_schedule, Instance, Schedule, Time};
use sdst_jsp::report::{build_report, RunRecord};
use sdst_jsp::rules::RuleKind;
use sdst_jsp::sampling::{self, SamplerConfig, DEFAULT_ALPHA};
use sdst_jsp::sgs::SgsKind;

#[derive(Parser)]
#[command(name = "sdstjsp", version, about = "Job-shop scheduling with sequence-dependent setup times")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build one schedule with a deterministic rule-guided pass.
    Solve {
        /// Scheme: semiactive, serial, egt1, egt2, nd1, nd2.
        #[arg(long)]
        sgs: SgsKind,
        /// Rule: MWKR, SST, SSTPT, MINSLACK, MOPER, RAND, MINSTART,
        /// MINSTSTART, MINEND.
        #[arg(long)]
        rule: RuleKind,
        /// Instance file.
        file: PathBuf,
        /// Print the schedule as JSON instead of text.
        #[arg(long)]
        json: bool,
        /// Also write an SVG Gantt chart here.
        #[arg(long, value_name = "PATH")]
        gantt: Option<PathBuf>,
    },
    /// Multi-pass biased sampling; one CSV row per configuration.
    Sample {
        /// Scheme name or `all`.
        #[arg(long, default_value = "all")]
        sgs: String,
        /// Rule name or `all`.
        #[arg(long, default_value = "all")]
        rule: String,
        #[arg(long, default_value_t = 1000)]
        iters: usize,
        /// Probability of deviating from the rule's choice, in [0, 1).
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads (default: all cores). Results do not depend on it.
        #[arg(long)]
        threads: Option<usize>,
        /// Instance files.
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Expand every selection path of a scheme and summarize the leaves.
    Enumerate {
        #[arg(long)]
        sgs: SgsKind,
        /// Node budget; expansion stops (and says so) when exceeded.
        #[arg(long, default_value_t = enumerate::DEFAULT_NODE_CAP)]
        cap: usize,
        /// Print every distinct leaf.
        #[arg(long)]
        dump: bool,
        file: PathBuf,
    },
    /// Check a schedule file against an instance and classify it.
    Verify {
        file: PathBuf,
        /// JSON file: {"starts": [...], "makespan": n}.
        schedule: PathBuf,
    },
    /// Write a random instance in the text format.
    Generate {
        #[arg(long)]
        jobs: usize,
        #[arg(long)]
        machines: usize,
        /// Setup types shared per job; omit for one type per operation.
        #[arg(long)]
        types: Option<usize>,
        /// Approximate largest setup time.
        #[arg(long, default_value_t = 100)]
        scale: Time,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file (default: stdout).
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Aggregate a runs CSV (from `sample`) into summary tables.
    Report {
        runs: PathBuf,
        #[arg(long, value_enum, default_value_t = TableFormat::Markdown)]
        format: TableFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Markdown,
    Csv,
}

#[derive(Debug)]
enum CliError {
    /// Bad flags or flag values: exit 1.
    Usage(String),
    /// Bad input data or a failed check: exit 2.
    Validation(String),
}

#[derive(Serialize, Deserialize)]
struct ScheduleJson {
    /// One start per operation in flat order (job 1's operations first).
    starts: Vec<Time>,
    makespan: Time,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            e.print().expect("stderr is writable");
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))
}

fn read_instance(path: &Path) -> Result<Instance, CliError> {
    let text = read_file(path)?;
    let parsed = instances::parse(&text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    if let Some(w) = parsed.triangle_warning {
        eprintln!(
            "warning: {}: setup matrix violates the triangle inequality ({w}); \
             constructed schedules stay feasible but may waste setup time",
            path.display()
        );
    }
    Ok(parsed.instance)
}

fn instance_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn parse_kinds(s: &str) -> Result<Vec<SgsKind>, CliError> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(SgsKind::ALL.to_vec());
    }
    s.parse()
        .map(|k| vec![k])
        .map_err(|e| CliError::Usage(format!("{e}")))
}

fn parse_rules(s: &str) -> Result<Vec<RuleKind>, CliError> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(RuleKind::ALL.to_vec());
    }
    s.parse()
        .map(|r| vec![r])
        .map_err(|e| CliError::Usage(format!("{e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Solve {
            sgs,
            rule,
            file,
            json,
            gantt,
        } => solve(sgs, rule, &file, json, gantt.as_deref()),
        Cmd::Sample {
            sgs,
            rule,
            iters,
            alpha,
            seed,
            threads,
            files,
        } => sample(&sgs, &rule, iters, alpha, seed, threads, &files),
        Cmd::Enumerate {
            sgs,
            cap,
            dump,
            file,
        } => enumerate_cmd(sgs, cap, dump, &file),
        Cmd::Verify { file, schedule } => verify(&file, &schedule),
        Cmd::Generate {
            jobs,
            machines,
            types,
            scale,
            seed,
            out,
        } => generate(jobs, machines, types, scale, seed, out.as_deref()),
        Cmd::Report { runs, format } => report(&runs, format),
    }
}

fn solve(
    kind: SgsKind,
    rule: RuleKind,
    file: &Path,
    json: bool,
    gantt: Option<&Path>,
) -> Result<(), CliError> {
    let inst = read_instance(file)?;
    let sched = sampling::single_pass(&inst, kind, rule);
    if json {
        let doc = ScheduleJson {
            starts: sched.starts().to_vec(),
            makespan: sched.makespan(),
        };
        println!("{}", serde_json::to_string(&doc).expect("plain data serializes"));
    } else {
        println!("makespan {}", sched.makespan());
        for machine in 1..=inst.machines() {
            let mut line = format!("machine {machine}:");
            for &op in sched.sequence(machine) {
                write!(line, " {}@{}", inst.op_label(op), sched.start(op)).unwrap();
            }
            println!("{line}");
        }
    }
    if let Some(path) = gantt {
        write_file(path, &gantt_svg(&inst, &sched))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn sample(
    sgs: &str,
    rule: &str,
    iters: usize,
    alpha: f64,
    seed: u64,
    threads: Option<usize>,
    files: &[PathBuf],
) -> Result<(), CliError> {
    let kinds = parse_kinds(sgs)?;
    let rules = parse_rules(rule)?;
    if iters == 0 {
        return Err(CliError::Usage("--iters must be at least 1".into()));
    }
    if !(0.0..1.0).contains(&alpha) {
        return Err(CliError::Usage(format!(
            "--alpha must be in [0, 1), got {alpha}"
        )));
    }
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot size the thread pool: {e}")))?;
    }
    println!("instance,sgs,rule,iters,alpha,seed,makespan");
    for file in files {
        let inst = read_instance(file)?;
        let name = instance_name(file);
        for &kind in &kinds {
            for &rule in &rules {
                let cfg = SamplerConfig {
                    iterations: iters,
                    alpha,
                    seed,
                    ..SamplerConfig::new(kind, rule)
                };
                let t0 = Instant::now();
                let out = sampling::multi_pass(&inst, &cfg);
                let elapsed = t0.elapsed();
                eprintln!(
                    "# {name} {kind}/{rule}: best {} at iteration {} in {:.3}s",
                    out.best.makespan(),
                    out.best_iteration,
                    elapsed.as_secs_f64()
                );
                println!(
                    "{name},{kind},{rule},{iters},{alpha},{seed},{}",
                    out.best.makespan()
                );
            }
        }
    }
    Ok(())
}

fn enumerate_cmd(kind: SgsKind, cap: usize, dump: bool, file: &Path) -> Result<(), CliError> {
    let inst = read_instance(file)?;
    let tree = enumerate::enumerate_tree(kind, &inst, cap);
    println!("scheme {kind}");
    println!("nodes {}", tree.node_count);
    println!("leaves {}", tree.leaf_count());
    println!("distinct {}", tree.distinct_count());
    match tree.min_makespan() {
        Some(m) => println!("min-makespan {m}"),
        None => println!("min-makespan none"),
    }
    println!("truncated {}", tree.truncated);
    if tree.truncated {
        eprintln!("warning: node budget {cap} exhausted; the summary covers a partial tree");
    }
    if dump {
        for (starts, stat) in tree.leaves() {
            let starts = starts
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            println!("leaf makespan {} count {} starts [{starts}]", stat.makespan, stat.count);
        }
    }
    Ok(())
}

fn verify(file: &Path, schedule: &Path) -> Result<(), CliError> {
    let inst = read_instance(file)?;
    let text = read_file(schedule)?;
    let doc: ScheduleJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", schedule.display())))?;
    if doc.starts.len() != inst.n_ops() {
        return Err(CliError::Validation(format!(
            "schedule has {} starts but the instance has {} operations",
            doc.starts.len(),
            inst.n_ops()
        )));
    }
    let sched = Schedule::from_starts(&inst, &doc.starts);
    if let Err(v) = validate_schedule(&inst, &sched) {
        return Err(CliError::Validation(format!("infeasible schedule: {v}")));
    }
    if sched.makespan() != doc.makespan {
        return Err(CliError::Validation(format!(
            "declared makespan {} but the starts give {}",
            doc.makespan,
            sched.makespan()
        )));
    }
    println!("feasible, makespan {}", sched.makespan());
    match classify::semi_active_witness(&inst, &sched) {
        None => println!("semi-active: yes"),
        Some(w) => println!(
            "semi-active: no ({} could start at {} in place)",
            inst.op_label(w.op),
            w.start
        ),
    }
    match classify::active_witness(&inst, &sched) {
        None => println!("active: yes"),
        Some(w) => println!(
            "active: no ({} fits at position {} of its machine, starting at {})",
            inst.op_label(w.op),
            w.position,
            w.start
        ),
    }
    match classify::nondelay_1_witness(&inst, &sched) {
        None => println!("nondelay-1: yes"),
        Some(w) => println!(
            "nondelay-1: no (machine {} could run {} at {} instead of waiting for {})",
            w.machine,
            inst.op_label(w.waiting),
            w.at,
            inst.op_label(w.incumbent)
        ),
    }
    match classify::nondelay_2_witness(&inst, &sched) {
        None => println!("nondelay-2: yes"),
        Some(w) => println!(
            "nondelay-2: no (machine {} could start the setup of {} at {} ahead of {})",
            w.machine,
            inst.op_label(w.waiting),
            w.at,
            inst.op_label(w.incumbent)
        ),
    }
    Ok(())
}

fn generate(
    jobs: usize,
    machines: usize,
    types: Option<usize>,
    scale: Time,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    if jobs == 0 || machines == 0 {
        return Err(CliError::Usage("--jobs and --machines must be at least 1".into()));
    }
    if types == Some(0) {
        return Err(CliError::Usage("--types must be at least 1".into()));
    }
    let inst = instances::random_instance(&GeneratorConfig {
        jobs,
        machines,
        type_count: types,
        scale,
        seed,
    });
    let text = instances::emit(&inst);
    match out {
        Some(path) => {
            write_file(path, &text)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn report(runs: &Path, format: TableFormat) -> Result<(), CliError> {
    let text = read_file(runs)?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| CliError::Validation("empty runs file".into()))?;
    let columns: Vec<&str> = header.split(',').map(str::trim).collect();
    let col = |name: &str| {
        columns
            .iter()
            .position(|c| c.eq_ignore_ascii_case(name))
            .ok_or_else(|| CliError::Validation(format!("runs file lacks a `{name}` column")))
    };
    let (c_inst, c_sgs, c_rule, c_mk) = (col("instance")?, col("sgs")?, col("rule")?, col("makespan")?);
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let field = |c: usize| {
            fields.get(c).copied().ok_or_else(|| {
                CliError::Validation(format!("row {}: expected {} columns", i + 2, columns.len()))
            })
        };
        let bad = |what: &str, got: &str| {
            CliError::Validation(format!("row {}: bad {what} `{got}`", i + 2))
        };
        records.push(RunRecord {
            instance: field(c_inst)?.to_string(),
            kind: field(c_sgs)?.parse().map_err(|_| bad("sgs", field(c_sgs).unwrap()))?,
            rule: field(c_rule)?.parse().map_err(|_| bad("rule", field(c_rule).unwrap()))?,
            makespan: field(c_mk)?.parse().map_err(|_| bad("makespan", field(c_mk).unwrap()))?,
        });
    }
    let tables = build_report(&records).map_err(|e| CliError::Validation(e.to_string()))?;
    eprintln!("# {} instances", tables.instances);
    match format {
        TableFormat::Markdown => print!("{}", tables.markdown),
        TableFormat::Csv => print!("{}", tables.csv),
    }
    Ok(())
}
