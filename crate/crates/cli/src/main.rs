//! `dilset`: command-line access to the dilated-sumset toolkit.

mod manifest;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use dilset::algebra::{
    companion_operator, h_of_operator, h_of_poly, reduce_to_number_field, IntPolynomial, NumberFieldVector,
    RationalMatrix,
};
use dilset::continuous::{equality_body, verify_bound, ConvexPolygon};
use dilset::extremal::{
    box_construction, box_sweep, conjectured_constant, enumerate_ap, exhaustive_min_with_budget, local_search_min,
    omega_construction, omega_sweep, strictly_increasing, to_csv, Polytope, ProperAP,
};
use dilset::rational::parse_rational;
use dilset::sumset::{analyze, nf_tuple_dilate_sumset, LatticeSet, LogBase};
use dilset::Error;

use manifest::{sha256_hex, RunManifest};

#[derive(Debug, Parser, Serialize)]
#[command(name = "dilset", version, about = "Exact dilated sumsets, H-constants and extremal searches")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
struct Common {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Numeric tolerance for root isolation and bound checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, global = true, default_value = "natural")]
    log_base: LogBase,
    /// Write the result here and the manifest next to it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

/// A polynomial or matrix, given positionally or by flag.
#[derive(Debug, Clone, Args, Serialize)]
struct OperatorArg {
    /// Polynomial such as `x^2-2`, or matrix rows such as `0,2;1,0`.
    #[arg(value_name = "OPERATOR", allow_hyphen_values = true)]
    operator: Option<String>,
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["operator", "matrix"])]
    poly: Option<String>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "operator")]
    matrix: Option<String>,
}

enum Operator {
    Poly(IntPolynomial),
    Matrix(RationalMatrix),
}

impl OperatorArg {
    fn resolve(&self) -> Result<Operator, Failure> {
        if let Some(p) = &self.poly {
            return Ok(Operator::Poly(p.parse()?));
        }
        if let Some(m) = &self.matrix {
            return Ok(Operator::Matrix(m.parse()?));
        }
        match &self.operator {
            Some(s) if s.contains('x') => Ok(Operator::Poly(s.parse()?)),
            Some(s) => Ok(Operator::Matrix(s.parse()?)),
            None => Err(Failure::Usage("an operator is required (positional, --poly or --matrix)".into())),
        }
    }

    fn matrix(&self) -> Result<RationalMatrix, Failure> {
        match self.resolve()? {
            Operator::Poly(f) => Ok(companion_operator(&f)?),
            Operator::Matrix(m) => Ok(m),
        }
    }
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
enum Command {
    /// H(f) of a primitive integer polynomial.
    Hf(OperatorArg),
    /// H(T) = ∏(1 + |λ|) over the eigenvalues of an operator.
    Ht(OperatorArg),
    /// Sizes, ratio and lower bound for A + TA.
    Analyze {
        points: PathBuf,
        #[command(flatten)]
        op: OperatorArg,
    },
    /// Smallest |A + αA| over n-point sets.
    Search {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        radius: u32,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: SearchMode,
        #[arg(long, default_value_t = 10_000)]
        iters: u64,
        /// Largest number of candidate sets an exhaustive run may visit.
        #[arg(long, default_value_t = dilset::extremal::DEFAULT_NODE_BUDGET)]
        budget: u128,
    },
    /// Ratio tables for the box and Ω_M families.
    Sweep {
        #[arg(long, value_enum)]
        kind: Family,
        #[arg(long, default_value = "x^2-2", allow_hyphen_values = true)]
        poly: String,
        /// Scales: M for Ω_M, or M with N = round(√2·M) for boxes.
        #[arg(long, value_delimiter = ',')]
        ms: Vec<u64>,
        /// Explicit box sides as `NxM`.
        #[arg(long, value_delimiter = ',')]
        sides: Vec<String>,
        #[command(flatten)]
        body: BodyArg,
    },
    /// Checks area(K + TK) ≥ H(T)·area(K) for a polygon.
    Continuous {
        polygon: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        /// Use the near-equality body of the matrix instead of a file.
        #[arg(long, conflicts_with = "polygon")]
        equality: bool,
        #[arg(long, default_value_t = 6)]
        prec: u32,
    },
    /// min H(g) over the irreducible factors of the characteristic polynomial.
    Conjecture(OperatorArg),
    /// Writes a point set: a box, an Ω_M set or a progression.
    Construct {
        #[arg(long, value_enum)]
        kind: Construction,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long, default_value = "x^2-2", allow_hyphen_values = true)]
        poly: String,
        #[command(flatten)]
        body: BodyArg,
        /// Progression base point, e.g. `0,0`.
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
        /// Progression generators, e.g. `1,0;0,1`.
        #[arg(long, allow_hyphen_values = true)]
        gens: Option<String>,
        #[arg(long, value_delimiter = ',')]
        lengths: Vec<u64>,
    },
    /// Maps a set of tuples over ℚ[α] injectively into ℚ[α].
    Reduce {
        tuples: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SearchMode {
    Exhaustive,
    Local,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Family {
    Box,
    Omega,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Construction {
    Box,
    Omega,
    Ap,
}

/// The body K for Ω_M: a polygon file, or the near-equality body of the
/// companion operator at the given precision.
#[derive(Debug, Clone, Args, Serialize)]
struct BodyArg {
    #[arg(long)]
    body: Option<PathBuf>,
    #[arg(long, default_value_t = 6)]
    prec: u32,
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(Error::Parse { .. } | Error::ParseLine { .. }) | Failure::Usage(_) => 2,
            Failure::Core(Error::SearchTooLarge { .. } | Error::IterationCap(_)) => 5,
            Failure::Core(Error::NonConvergence { .. } | Error::FactorizationUnverified(_)) => 6,
            Failure::Core(_) | Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Usage(s) | Failure::Io(s) => s.clone(),
        }
    }
}

/// Records the digest of every input file read during a run.
#[derive(Default)]
struct Inputs {
    digests: BTreeMap<String, String>,
}

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let bytes = std::fs::read(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        self.digests.insert(path.display().to_string(), sha256_hex(&bytes));
        String::from_utf8(bytes).map_err(|_| Failure::Io(format!("{}: not UTF-8", path.display())))
    }
}

/// A finished command: its printed result and, for theorem-backed checks,
/// the failure to report after printing.
struct Outcome {
    text: String,
    check: Option<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, check: None }
    }
}

/// `x` to 12 significant digits without trailing zeros.
fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let decimals = (11 - x.abs().log10().floor() as i32).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn body_polytope(arg: &BodyArg, f: &IntPolynomial, inputs: &mut Inputs) -> Result<Polytope, Failure> {
    if let Some(path) = &arg.body {
        let polygon = ConvexPolygon::parse(&inputs.read(path)?)?;
        return Ok(Polytope::from_polygon(&polygon)?);
    }
    if f.degree() != 2 {
        return Err(Failure::Usage("degree != 2 needs an explicit --body".into()));
    }
    Ok(Polytope::from_polygon(&equality_body(&companion_operator(f)?, arg.prec)?)?)
}

fn parse_point(s: &str) -> Result<Vec<i64>, Failure> {
    s.split(',')
        .map(|c| c.trim().parse().map_err(|_| Failure::Usage(format!("bad integer {c:?} in {s:?}"))))
        .collect()
}

fn parse_tuples(text: &str, field: &Arc<IntPolynomial>) -> Result<Vec<Vec<NumberFieldVector>>, Failure> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |message: String| Failure::Core(Error::ParseLine { line: i + 1, message });
        let tuple = line
            .split(';')
            .map(|part| {
                let coords = part
                    .split(',')
                    .map(parse_rational)
                    .collect::<dilset::Result<Vec<_>>>()
                    .map_err(|e| bad(e.to_string()))?;
                NumberFieldVector::new(coords, field.clone()).map_err(|e| bad(e.to_string()))
            })
            .collect::<Result<Vec<_>, Failure>>()?;
        out.push(tuple);
    }
    Ok(out)
}

fn run(cli: &Cli, inputs: &mut Inputs) -> Result<Outcome, Failure> {
    let common = &cli.common;
    let format = common.format;
    if format == Some(Format::Csv) && !matches!(cli.command, Command::Sweep { .. }) {
        return Err(Failure::Usage("csv output is only available for sweep".into()));
    }
    match &cli.command {
        Command::Hf(op) => {
            let f = match op.resolve()? {
                Operator::Poly(f) => f,
                Operator::Matrix(_) => return Err(Failure::Usage("hf takes a polynomial".into())),
            };
            let h = h_of_poly(&f, common.tol.min(1e-12))?;
            let record = json!({ "poly": f, "h": h.value, "error": h.error });
            Ok(Outcome::ok(format!("{}\n{record}\n", sig12(h.value))))
        }
        Command::Ht(op) => {
            let m = op.matrix()?;
            let h = h_of_operator(&m, common.tol.min(1e-12))?;
            let record = json!({ "matrix": m, "h": h.value, "error": h.error });
            Ok(Outcome::ok(format!("{}\n{record}\n", sig12(h.value))))
        }
        Command::Analyze { points, op } => {
            let a = LatticeSet::parse(&inputs.read(points)?)?;
            let m = op.matrix()?;
            let report = analyze(&a, &m, common.log_base)?;
            let check = (!report.bound_satisfied).then(|| "the lower bound for |A + TA| failed".to_string());
            Ok(Outcome { text: format!("{}\n", to_json(&report)), check })
        }
        Command::Search { poly, n, radius, mode, iters, budget } => {
            let f: IntPolynomial = poly.parse()?;
            let result = match mode {
                SearchMode::Exhaustive => exhaustive_min_with_budget(&f, *n, *radius, *budget)?,
                SearchMode::Local => local_search_min(&f, *n, *radius, *iters, common.seed)?,
            };
            Ok(Outcome::ok(format!("{}\n", to_json(&result))))
        }
        Command::Sweep { kind, poly, ms, sides, body } => {
            let rows = match kind {
                Family::Box => {
                    let mut dims: Vec<(u64, u64)> = ms
                        .iter()
                        .map(|&m| (((m as f64) * std::f64::consts::SQRT_2).round() as u64, m))
                        .collect();
                    for s in sides {
                        let (n, m) = s
                            .split_once('x')
                            .and_then(|(n, m)| Some((n.trim().parse().ok()?, m.trim().parse().ok()?)))
                            .ok_or_else(|| Failure::Usage(format!("bad box sides {s:?}, expected NxM")))?;
                        dims.push((n, m));
                    }
                    box_sweep(&dims)?
                }
                Family::Omega => {
                    let f: IntPolynomial = poly.parse()?;
                    let k = body_polytope(body, &f, inputs)?;
                    omega_sweep(&f, &k, ms)?
                }
            };
            if rows.is_empty() {
                return Err(Failure::Usage("nothing to sweep: give --ms or --sides".into()));
            }
            let text = match format.unwrap_or(Format::Csv) {
                Format::Csv => to_csv(&rows),
                Format::Json => {
                    let list: Vec<_> = rows
                        .iter()
                        .map(|r| {
                            json!({
                                "param": r.param,
                                "size": r.size,
                                "sum_size": r.sum_size,
                                "ratio": dilset::rational::to_fraction_string(&r.ratio),
                            })
                        })
                        .collect();
                    format!("{}\n", json!({ "rows": list, "increasing": strictly_increasing(&rows) }))
                }
            };
            Ok(Outcome::ok(text))
        }
        Command::Continuous { polygon, matrix, equality, prec } => {
            let m: RationalMatrix = matrix.parse()?;
            let k = match (polygon, equality) {
                (_, true) => equality_body(&m, *prec)?,
                (Some(path), false) => ConvexPolygon::parse(&inputs.read(path)?)?,
                (None, false) => return Err(Failure::Usage("give a polygon file or --equality".into())),
            };
            let report = verify_bound(&k, &m, common.tol)?;
            let check = (!report.holds_within_tol).then(|| "area(K + TK) fell below H(T)·area(K)".to_string());
            Ok(Outcome { text: format!("{}\n", to_json(&report)), check })
        }
        Command::Conjecture(op) => {
            let m = op.matrix()?;
            let c = conjectured_constant(&m, common.tol.min(1e-12))?;
            let mut text = match c.value {
                Some(v) => format!("{}\n", sig12(v)),
                None => "infinity\n".to_string(),
            };
            for fv in &c.factors {
                let _ = writeln!(text, "{}\t{}", fv.factor, sig12(fv.h.value));
            }
            let _ = writeln!(text, "{}", json!({ "matrix": m, "constant": c }));
            Ok(Outcome::ok(text))
        }
        Command::Construct { kind, n, m, poly, body, base, gens, lengths } => {
            let set = match kind {
                Construction::Box => {
                    let (n, m) = n.zip(*m).ok_or_else(|| Failure::Usage("box needs --n and --m".into()))?;
                    box_construction(n, m)?
                }
                Construction::Omega => {
                    let f: IntPolynomial = poly.parse()?;
                    let scale = m.ok_or_else(|| Failure::Usage("omega needs --m".into()))?;
                    omega_construction(&f, scale, &body_polytope(body, &f, inputs)?)?
                }
                Construction::Ap => {
                    let base = parse_point(base.as_deref().ok_or_else(|| Failure::Usage("ap needs --base".into()))?)?;
                    let gens = gens
                        .as_deref()
                        .ok_or_else(|| Failure::Usage("ap needs --gens".into()))?
                        .split(';')
                        .map(parse_point)
                        .collect::<Result<Vec<_>, _>>()?;
                    let ap = ProperAP::new(base, gens, lengths.clone())?;
                    let set = enumerate_ap(&ap)?;
                    if set.len() as u128 != ap.nominal_size() {
                        eprintln!("note: progression is not proper ({} of {} sums distinct)", set.len(), ap.nominal_size());
                    }
                    set
                }
            };
            Ok(Outcome::ok(set.to_text()))
        }
        Command::Reduce { tuples, poly } => {
            let f: IntPolynomial = poly.parse()?;
            let field = Arc::new(f);
            let a = parse_tuples(&inputs.read(tuples)?, &field)?;
            let r = reduce_to_number_field(&a, common.seed)?;
            let tuple_sum = nf_tuple_dilate_sumset(&a)?.len();
            let image_sum = dilset::sumset::nf_dilate_sumset(&r.image)?.len();
            let record = json!({
                "weights": r.weights.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                "height": r.height,
                "attempts": r.attempts,
                "image": r.image.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "size": a.len(),
                "tuple_sum_size": tuple_sum,
                "image_sum_size": image_sum,
            });
            Ok(Outcome::ok(format!("{record}\n")))
        }
    }
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Hf(_) => "hf",
        Command::Ht(_) => "ht",
        Command::Analyze { .. } => "analyze",
        Command::Search { .. } => "search",
        Command::Sweep { .. } => "sweep",
        Command::Continuous { .. } => "continuous",
        Command::Conjecture(_) => "conjecture",
        Command::Construct { .. } => "construct",
        Command::Reduce { .. } => "reduce",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let result = run(&cli, &mut inputs);

    let mut code = 0u8;
    match &result {
        Ok(outcome) => {
            let written = match &cli.common.out {
                Some(path) => std::fs::write(path, &outcome.text).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{}", outcome.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                code = 3;
            } else if let Some(msg) = &outcome.check {
                eprintln!("check failed: {msg}");
                code = 4;
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            code = f.exit_code();
        }
    }

    let manifest = RunManifest {
        subcommand: subcommand_name(&cli.command).to_string(),
        parameters: serde_json::to_value(&cli).expect("serializable arguments"),
        input_digests: inputs.digests,
        seed: cli.common.seed,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        duration_ms: start.elapsed().as_secs_f64() * 1e3,
        exit_code: code as i32,
    };
    let text = serde_json::to_string_pretty(&manifest).expect("serializable manifest");
    match &cli.common.out {
        Some(out) => {
            if let Err(e) = std::fs::write(RunManifest::path_for(out), text + "\n") {
                eprintln!("error: manifest: {e}");
                code = code.max(3);
            }
        }
        None => eprintln!("{text}"),
    }
    ExitCode::from(code)
}
