//! Instance text format, generators, and benchmark derivations.
//!
//! Text format (`#` starts a comment running to end of line, numbers are
//! decimal ASCII separated by whitespace):
//!
//! ```text
//! n m T
//! <n job lines: m triples "machine duration type", 1-based machine/type>
//! <T+1 rows of T integers: row 0 = initial setups, row t = from type t>
//! ```
//!
//! [`emit`] produces a canonical rendering (single spaces, one job or
//! matrix row per line, trailing newline), so emit -> parse -> emit is
//! byte-identical. A violated triangle inequality is reported as a warning
//! next to the parsed instance, not as an error: the data is usable, but
//! greedy constructions lose their feasibility shortcut.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::model::{Instance, ModelError, OpSpec, SetupMatrix, Time, TriangleViolation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected end of input, expected {0}")]
    UnexpectedEnd(&'static str),
    #[error("`{0}` is not a non-negative integer")]
    BadNumber(String),
    #[error("{0} must be at least 1, got {1}")]
    BadHeader(&'static str, usize),
    #[error("unexpected trailing input")]
    TrailingInput,
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

/// Parsed instance plus a non-fatal triangle inequality warning.
#[derive(Debug, Clone)]
pub struct ParsedInstance {
    pub instance: Instance,
    pub triangle_warning: Option<TriangleViolation>,
}

struct Tokens<'a> {
    iter: std::iter::Peekable<TokenIter<'a>>,
    last: (usize, usize),
}

struct TokenIter<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
    current: Option<(usize, std::str::SplitAsciiWhitespace<'a>, &'a str)>,
}

impl<'a> Iterator for TokenIter<'a> {
    /// (line, column, token), both 1-based.
    type Item = (usize, usize, &'a str);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some((line_no, words, line)) = &mut self.current {
                for word in words.by_ref() {
                    if word.starts_with('#') {
                        break;
                    }
                    // Offset of this word within the line; split tokens are
                    // disjoint slices of it.
                    let col = word.as_ptr() as usize - line.as_ptr() as usize + 1;
                    return Some((*line_no, col, word));
                }
            }
            let (idx, line) = self.lines.next()?;
            let visible = line.split('#').next().unwrap_or("");
            self.current = Some((idx + 1, visible.split_ascii_whitespace(), line));
        }
    }
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        Tokens {
            iter: TokenIter {
                lines: text.lines().enumerate(),
                current: None,
            }
            .peekable(),
            last: (1, 1),
        }
    }

    fn number(&mut self, what: &'static str) -> Result<usize, ParseError> {
        match self.iter.next() {
            None => Err(ParseError {
                line: self.last.0,
                col: self.last.1,
                kind: ParseErrorKind::UnexpectedEnd(what),
            }),
            Some((line, col, tok)) => {
                self.last = (line, col);
                tok.parse::<usize>().map_err(|_| ParseError {
                    line,
                    col,
                    kind: ParseErrorKind::BadNumber(tok.to_string()),
                })
            }
        }
    }

    fn time(&mut self, what: &'static str) -> Result<Time, ParseError> {
        let (line, col) = self.peek_pos();
        let v = self.number(what)?;
        Time::try_from(v).map_err(|_| ParseError {
            line,
            col,
            kind: ParseErrorKind::BadNumber(v.to_string()),
        })
    }

    fn peek_pos(&mut self) -> (usize, usize) {
        self.iter.peek().map_or(self.last, |&(l, c, _)| (l, c))
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.iter.next() {
            None => Ok(()),
            Some((line, col, _)) => Err(ParseError {
                line,
                col,
                kind: ParseErrorKind::TrailingInput,
            }),
        }
    }
}

fn header_field(tokens: &mut Tokens<'_>, name: &'static str) -> Result<usize, ParseError> {
    let (line, col) = tokens.peek_pos();
    let v = tokens.number(name)?;
    if v == 0 {
        return Err(ParseError {
            line,
            col,
            kind: ParseErrorKind::BadHeader(name, v),
        });
    }
    Ok(v)
}

pub fn parse(text: &str) -> Result<ParsedInstance, ParseError> {
    let mut tokens = Tokens::new(text);
    let jobs = header_field(&mut tokens, "job count")?;
    let machines = header_field(&mut tokens, "machine count")?;
    let types = header_field(&mut tokens, "setup type count")?;
    let mut ops: Vec<OpSpec> = Vec::with_capacity(jobs * machines);
    for _ in 0..jobs * machines {
        let machine = tokens.number("a machine index")?;
        let duration = tokens.time("a duration")?;
        let ty = tokens.number("a setup type")?;
        ops.push((machine, duration, ty));
    }
    let mut rows = Vec::with_capacity(types + 1);
    for _ in 0..=types {
        let mut row = Vec::with_capacity(types);
        for _ in 0..types {
            row.push(tokens.time("a setup entry")?);
        }
        rows.push(row);
    }
    let err_here = |tokens: &Tokens<'_>, e: ModelError| ParseError {
        line: tokens.last.0,
        col: tokens.last.1,
        kind: ParseErrorKind::Model(e),
    };
    let matrix = SetupMatrix::new(types, rows).map_err(|e| err_here(&tokens, e))?;
    let instance =
        Instance::new(jobs, machines, &ops, matrix).map_err(|e| err_here(&tokens, e))?;
    tokens.finish()?;
    let triangle_warning = instance.validate_triangle().err();
    Ok(ParsedInstance {
        instance,
        triangle_warning,
    })
}

/// Canonical text rendering; see the module header.
pub fn emit(instance: &Instance) -> String {
    use fmt::Write;
    let mut out = String::new();
    let types = instance.setup().types();
    writeln!(out, "{} {} {}", instance.jobs(), instance.machines(), types).unwrap();
    for job in 1..=instance.jobs() {
        let mut line = String::new();
        for pos in 1..=instance.machines() {
            let op = instance.op(job, pos);
            if pos > 1 {
                line.push(' ');
            }
            write!(
                line,
                "{} {} {}",
                instance.machine_of(op),
                instance.duration(op),
                instance.setup_type_of(op)
            )
            .unwrap();
        }
        out.push_str(&line);
        out.push('\n');
    }
    for row in instance.setup().rows() {
        let mut line = String::new();
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            write!(line, "{v}").unwrap();
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Classic job-shop text format: `n m` header, then per job `m` pairs
/// `machine duration` with 0-based machines. Imported with a single setup
/// type and an all-zero matrix.
pub fn parse_classic_jsp(text: &str) -> Result<Instance, ParseError> {
    let mut tokens = Tokens::new(text);
    let jobs = header_field(&mut tokens, "job count")?;
    let machines = header_field(&mut tokens, "machine count")?;
    let mut ops: Vec<OpSpec> = Vec::with_capacity(jobs * machines);
    for _ in 0..jobs * machines {
        let machine = tokens.number("a machine index")?;
        let duration = tokens.time("a duration")?;
        ops.push((machine + 1, duration, 1));
    }
    let err_here = |tokens: &Tokens<'_>, e: ModelError| ParseError {
        line: tokens.last.0,
        col: tokens.last.1,
        kind: ParseErrorKind::Model(e),
    };
    let instance = Instance::new(jobs, machines, &ops, SetupMatrix::zero(1))
        .map_err(|e| err_here(&tokens, e))?;
    tokens.finish()?;
    Ok(instance)
}

/// Random setup matrix that satisfies the triangle inequality exactly.
///
/// `types + 1` points (index 0 is the machine's initial state) are drawn
/// uniformly in a square whose diagonal is `scale`, entries are the floored
/// pairwise Euclidean distances, and a shortest-path closure repairs the
/// off-by-one the flooring can introduce. Entries land in `[0, scale]`.
pub fn euclidean_setups(types: usize, scale: Time, seed: u64) -> SetupMatrix {
    assert!(types >= 1);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let side = f64::from(scale) / std::f64::consts::SQRT_2;
    let points: Vec<(f64, f64)> = (0..=types)
        .map(|_| (rng.random::<f64>() * side, rng.random::<f64>() * side))
        .collect();
    let mut d = vec![vec![0u64; types + 1]; types + 1];
    for i in 0..=types {
        for j in 0..=types {
            let dist = (points[i].0 - points[j].0).hypot(points[i].1 - points[j].1);
            d[i][j] = dist.floor() as u64;
        }
    }
    for k in 0..=types {
        for i in 0..=types {
            for j in 0..=types {
                d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
            }
        }
    }
    let rows: Vec<Vec<Time>> = d
        .into_iter()
        .map(|row| row[1..].iter().map(|&v| v as Time).collect())
        .collect();
    let matrix = SetupMatrix::new(types, rows).expect("closure preserves shape");
    debug_assert_eq!(matrix.validate_triangle(), Ok(()));
    matrix
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub jobs: usize,
    pub machines: usize,
    /// `None`: one setup type per operation. `Some(t)`: all operations of a
    /// job share a type, assigned round-robin over `1..=t`.
    pub type_count: Option<usize>,
    /// Approximate largest setup; 0 disables setups.
    pub scale: Time,
    pub seed: u64,
}

/// Random instance: each job visits the machines in a random permutation
/// with durations uniform in 1..=100; setups come from
/// [`euclidean_setups`] at the requested scale.
pub fn random_instance(cfg: &GeneratorConfig) -> Instance {
    assert!(cfg.jobs >= 1 && cfg.machines >= 1);
    let n = cfg.jobs * cfg.machines;
    let types = match cfg.type_count {
        None => n,
        Some(t) => {
            assert!(t >= 1);
            t.min(cfg.jobs)
        }
    };
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let mut ops: Vec<OpSpec> = Vec::with_capacity(n);
    let mut route: Vec<usize> = (1..=cfg.machines).collect();
    for job in 1..=cfg.jobs {
        route.shuffle(&mut rng);
        for pos in 1..=cfg.machines {
            let ty = match cfg.type_count {
                None => pos + (job - 1) * cfg.machines,
                Some(_) => (job - 1) % types + 1,
            };
            ops.push((route[pos - 1], rng.random_range(1..=100), ty));
        }
    }
    let matrix_seed = rng.random::<u64>();
    let matrix = euclidean_setups(types, cfg.scale, matrix_seed);
    Instance::new(cfg.jobs, cfg.machines, &ops, matrix).expect("generated data is well formed")
}

/// Staircase setup matrix: `s[0][u] = 10u` and
/// `s[t][u] = 10 * ((u - t) mod T)`, so cycling through the types in
/// ascending wrap-around order is free of detours. Satisfies the triangle
/// inequality with equality along ascending chains.
pub fn staircase_matrix(types: usize) -> SetupMatrix {
    assert!(types >= 1);
    let mut rows = Vec::with_capacity(types + 1);
    rows.push((1..=types).map(|u| 10 * u as Time).collect());
    for t in 1..=types {
        rows.push(
            (1..=types)
                .map(|u| 10 * ((u + types - t) % types) as Time)
                .collect(),
        );
    }
    SetupMatrix::new(types, rows).expect("shape is correct")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariantTarget {
    /// Fold job types onto `1..=5` and install the 5-type staircase matrix.
    Five,
    /// Fold job types onto `1..=10` and install the 10-type staircase matrix.
    Ten,
    /// One type per operation with a random Euclidean matrix at scale 100.
    Distinct { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VariantError {
    #[error("job {job} mixes setup types; folding requires one type per job")]
    NotJobUniform { job: usize },
    #[error("expected one setup type per operation")]
    NotDistinctTypes,
}

/// Re-types an instance onto a different setup-type granularity, keeping
/// routing and durations.
pub fn derive_variant(instance: &Instance, target: VariantTarget) -> Result<Instance, VariantError> {
    let n = instance.n_ops();
    match target {
        VariantTarget::Five | VariantTarget::Ten => {
            let fold = if matches!(target, VariantTarget::Five) { 5 } else { 10 };
            let mut ops: Vec<OpSpec> = Vec::with_capacity(n);
            for job in 1..=instance.jobs() {
                let first = instance.setup_type_of(instance.op(job, 1));
                for pos in 1..=instance.machines() {
                    let op = instance.op(job, pos);
                    if instance.setup_type_of(op) != first {
                        return Err(VariantError::NotJobUniform { job });
                    }
                    ops.push((
                        instance.machine_of(op),
                        instance.duration(op),
                        (first - 1) % fold + 1,
                    ));
                }
            }
            Ok(
                Instance::new(instance.jobs(), instance.machines(), &ops, staircase_matrix(fold))
                    .expect("retyped data is well formed"),
            )
        }
        VariantTarget::Distinct { seed } => {
            let ops: Vec<OpSpec> = instance
                .iter_ops()
                .map(|op| (instance.machine_of(op), instance.duration(op), op.index()))
                .collect();
            Ok(
                Instance::new(
                    instance.jobs(),
                    instance.machines(),
                    &ops,
                    euclidean_setups(n, 100, seed),
                )
                .expect("retyped data is well formed"),
            )
        }
    }
}

/// Setup magnitudes for sensitivity sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetupScale {
    Zero,
    Small,
    Medium,
    Large,
}

impl SetupScale {
    pub const ALL: [SetupScale; 4] = [
        SetupScale::Zero,
        SetupScale::Small,
        SetupScale::Medium,
        SetupScale::Large,
    ];

    pub fn scale(self) -> Time {
        match self {
            SetupScale::Zero => 0,
            SetupScale::Small => 20,
            SetupScale::Medium => 100,
            SetupScale::Large => 600,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SetupScale::Zero => "zero",
            SetupScale::Small => "small",
            SetupScale::Medium => "medium",
            SetupScale::Large => "large",
        }
    }
}

impl fmt::Display for SetupScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SetupScale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SetupScale::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown setup scale `{s}`"))
    }
}

/// Regenerates the setup matrix of a one-type-per-operation instance at a
/// different magnitude.
pub fn scale_setups(
    instance: &Instance,
    magnitude: SetupScale,
    seed: u64,
) -> Result<Instance, VariantError> {
    let n = instance.n_ops();
    let distinct = instance.setup().types() == n
        && instance.iter_ops().all(|op| instance.setup_type_of(op) == op.index());
    if !distinct {
        return Err(VariantError::NotDistinctTypes);
    }
    let ops: Vec<OpSpec> = instance
        .iter_ops()
        .map(|op| (instance.machine_of(op), instance.duration(op), op.index()))
        .collect();
    Ok(Instance::new(
        instance.jobs(),
        instance.machines(),
        &ops,
        euclidean_setups(n, magnitude.scale(), seed),
    )
    .expect("retyped data is well formed"))
}
