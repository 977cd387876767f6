//! Command-line surface. [`run`] takes the argument list and two writers and
//! returns the process exit code: 0 on success, 1 for malformed input, 2 for
//! nonconvex input, sizes that are not powers of two, and exceeded caps.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::error::LftError;
use crate::fixtures::{ex1, ex1_conjugate, ex2, ex2_conjugate, ex3, ex3_conjugate};
use crate::function::{discrete_gradients, nontrivial_dual_range, FunctionSpec};
use crate::grid::{regular_dual_grid, DualGrid};
use crate::hardness::{
    bits_to_string, recover_via_point_queries, recover_via_sampling, rescale_instance, HiddenStringInstance,
    SamplingOutcome, MAX_BRUTE_D,
};
use crate::io::{Cell, DocumentError, Format, Instance, InstanceFile, ResultFile, Table};
use crate::lft::{default_epsilon, lft_adaptive, lft_brute, lft_regular, lft_regular_clamped, AdaptiveVariant};
use crate::multi::{lft_nd_adaptive, lft_nd_brute, lft_nd_regular, shared_dual_grids, TensorConjugate};
use crate::qsim::{
    digital_to_analog, run_qlft_1d_adaptive, run_qlft_1d_regular, run_qlft_nd_adaptive, run_qlft_nd_regular,
    SimRun, SizePolicy,
};
use crate::scalar::{format_rational, int, parse_rational, Rational};
use crate::witness::witness_params;

#[derive(Debug, Parser)]
#[command(name = "lftlab", version, about = "Discrete Legendre-Fenchel transforms, exact quantum-algorithm simulation and hardness reductions")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Output file; for `fixtures emit`, the output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Render rationals as decimals with this many digits.
    #[arg(long, global = true)]
    pub precision: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classical transform of an instance file.
    Lft(LftArgs),
    /// Simulated quantum transform.
    Qlft(QlftArgs),
    /// Hidden-string reductions and rescaling.
    #[command(subcommand)]
    Hardness(HardnessCommand),
    /// Worked-example instance files and plot data.
    #[command(subcommand)]
    Fixtures(FixturesCommand),
}

#[derive(Debug, Args)]
pub struct LftArgs {
    pub instance: PathBuf,
    /// `regular:K` (or `regular:KxK...`), `adaptive:centered|right|left`, or a
    /// comma-separated list of dual points (optionally prefixed `explicit:`).
    #[arg(long, allow_hyphen_values = true)]
    pub dual: Option<String>,
    /// Cross-check against exhaustive maximization.
    #[arg(long)]
    pub brute: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Regular,
    Adaptive,
}

#[derive(Debug, Args)]
pub struct QlftArgs {
    pub instance: PathBuf,
    /// Dual size per axis; one value is repeated for every axis.
    #[arg(long = "dual-size", num_args = 1.., value_delimiter = ',')]
    pub dual_size: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Mode::Regular)]
    pub mode: Mode,
    #[arg(long, env = "LFTLAB_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Trial `t` uses seed `seed + t`; the final state is seed-independent, so
    /// trials after the first only redraw the attempt count.
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    /// Also convert the conjugate register into amplitudes.
    #[arg(long)]
    pub omega: bool,
    /// Embed sizes that are not powers of two instead of rejecting them.
    #[arg(long)]
    pub embed: bool,
    /// Write the step transcript of the first trial as JSON lines.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum HardnessCommand {
    /// Recover `z` from the conjugate at the unit vectors.
    PointQueries {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        z: String,
    },
    /// Recover `z` from uniformly sampled conjugate pairs.
    Sampling {
        #[arg(long)]
        d: usize,
        /// Hidden string; drawn from the seed when absent.
        #[arg(long)]
        z: Option<String>,
        #[arg(long, default_value_t = 6)]
        t: usize,
        #[arg(long, env = "LFTLAB_SEED", default_value_t = 0)]
        seed: u64,
        /// Independent recoveries with seeds `seed + r`.
        #[arg(long, default_value_t = 1)]
        trials: u64,
    },
    /// Normalize spacing and gradient jumps and check that `W` is unchanged.
    Rescale {
        instance: PathBuf,
        /// Dual size; defaults to the number of primal points.
        #[arg(long = "dual-size")]
        dual_size: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Ex1,
    Ex2,
    Ex3,
    All,
}

#[derive(Debug, Subcommand)]
pub enum FixturesCommand {
    /// Write instance files (and plot CSVs) into `--out` (default `fixtures`).
    Emit {
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
        #[arg(long)]
        plot_data: bool,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error(transparent)]
    Lft(#[from] LftError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        let lft = match self {
            CliError::Lft(e) | CliError::Document(DocumentError::Lft(e)) => e,
            _ => return 1,
        };
        match lft {
            LftError::NonConvexInput { .. }
            | LftError::NonConvexSlice { .. }
            | LftError::NotPowerOfTwo(_)
            | LftError::SizeCap { .. } => 2,
            _ => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(summary) => {
            if !summary.is_empty() {
                let _ = writeln!(stderr, "{summary}");
            }
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command, writes its document and returns the summary line.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> CliResult<String> {
    let format = match cli.format {
        OutputFormat::Json => Format::Json,
        OutputFormat::Csv => Format::Csv,
    };
    let result = match &cli.command {
        Command::Lft(a) => cmd_lft(a)?,
        Command::Qlft(a) => cmd_qlft(a)?,
        Command::Hardness(h) => cmd_hardness(h)?,
        Command::Fixtures(FixturesCommand::Emit { which, plot_data }) => {
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("fixtures"));
            let r = cmd_fixtures(*which, *plot_data, &dir, cli.precision)?;
            stdout.write_all(r.render(format, cli.precision)?.as_bytes())?;
            return Ok(r.summary);
        }
    };
    let text = result.render(format, cli.precision)?;
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(result.summary)
}

fn load(path: &Path) -> CliResult<Instance> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(InstanceFile::parse(&text)?.resolve()?)
}

/// Parsed `--dual` argument.
#[derive(Debug, Clone, PartialEq)]
pub enum DualChoice {
    /// Per-axis sizes; empty means one point per primal point.
    Regular(Vec<usize>),
    Adaptive(AdaptiveVariant),
    Explicit(Vec<Rational>),
}

impl DualChoice {
    pub fn parse(text: &str) -> CliResult<Self> {
        let bad = || CliError::Usage(format!("unrecognized dual specification `{text}`"));
        if let Some(rest) = text.strip_prefix("regular:") {
            let ks = rest.split(['x', ',']).map(|k| k.trim().parse::<usize>()).collect::<Result<Vec<_>, _>>();
            return ks.map(DualChoice::Regular).map_err(|_| bad());
        }
        if let Some(rest) = text.strip_prefix("adaptive:") {
            return match rest {
                "centered" => Ok(DualChoice::Adaptive(AdaptiveVariant::Centered)),
                "right" => Ok(DualChoice::Adaptive(AdaptiveVariant::Right)),
                "left" => Ok(DualChoice::Adaptive(AdaptiveVariant::Left)),
                _ => Err(bad()),
            };
        }
        let list = text.strip_prefix("explicit:").unwrap_or(text);
        list.split(',')
            .map(|p| parse_rational(p.trim()))
            .collect::<Option<Vec<_>>>()
            .filter(|v| !v.is_empty())
            .map(DualChoice::Explicit)
            .ok_or_else(bad)
    }
}

fn per_axis(ks: &[usize], dims: &[usize]) -> CliResult<Vec<usize>> {
    match ks.len() {
        0 => Ok(dims.to_vec()),
        1 => Ok(vec![ks[0]; dims.len()]),
        n if n == dims.len() => Ok(ks.to_vec()),
        n => Err(CliError::Usage(format!("{n} dual sizes given for {} axes", dims.len()))),
    }
}

fn regular_dual_1d(f: &FunctionSpec, k: usize) -> CliResult<DualGrid> {
    let g = discrete_gradients(f, int(1))?;
    Ok(regular_dual_grid(nontrivial_dual_range(&g), k)?)
}

fn status(ok: bool) -> &'static str {
    if ok {
        "MATCH"
    } else {
        "MISMATCH"
    }
}

pub fn cmd_lft(a: &LftArgs) -> CliResult<ResultFile> {
    let choice = match &a.dual {
        Some(text) => DualChoice::parse(text)?,
        None => DualChoice::Regular(Vec::new()),
    };
    match load(&a.instance)? {
        Instance::OneD(f) => lft_1d(&f, &choice, a.brute),
        Instance::MultiD(t) => {
            let result = match &choice {
                DualChoice::Regular(ks) => {
                    let ks = per_axis(ks, t.shape().dims())?;
                    lft_nd_regular(&t, &shared_dual_grids(&t, &ks)?)?
                }
                DualChoice::Adaptive(AdaptiveVariant::Centered) => lft_nd_adaptive(&t)?,
                _ => return Err(CliError::Usage("multi-axis instances take regular or adaptive:centered duals".into())),
            };
            let brute = if a.brute { Some(lft_nd_brute(&t, &result.duals.to_list())?) } else { None };
            Ok(nd_result(&result, brute.as_ref(), t.d()))
        }
    }
}

fn lft_1d(f: &FunctionSpec, choice: &DualChoice, brute: bool) -> CliResult<ResultFile> {
    let result = match choice {
        DualChoice::Regular(ks) => lft_regular(f, &regular_dual_1d(f, per_axis(ks, &[f.n()])?[0])?)?,
        DualChoice::Adaptive(v) => lft_adaptive(f, *v)?,
        DualChoice::Explicit(points) => {
            f.check_convex()?;
            lft_regular_clamped(f, &DualGrid::explicit(points.clone())?)?
        }
    };
    let mut r = ResultFile::new("lft");
    r.diag("n", f.n()).diag("k", result.len());
    if let Some(gs) = result.dual.gamma_s().filter(|gs| **gs > int(0)) {
        let g = discrete_gradients(f, default_epsilon(&result.dual))?;
        let w = witness_params(&g, f.grid(), &result.dual)?;
        r.diag("gamma_s", gs).diag("w", w.w).diag("nu", w.nu).diag("success_probability", w.success_probability);
    }
    let oracle = brute.then(|| lft_brute(f, &result.dual));
    let mut cols = vec!["j", "s", "fstar", "optimizer", "x_star"];
    if oracle.is_some() {
        cols.push("fstar_brute");
    }
    let mut t = Table::new("conjugate", &cols);
    for j in 0..result.len() {
        let i = result.optimizer_index[j];
        let mut row: Vec<Cell> =
            vec![j.into(), result.dual.point(j).into(), (&result.values[j]).into(), i.into(), f.grid().point(i).into()];
        if let Some(o) = &oracle {
            row.push((&o.values[j]).into());
        }
        t.push(row);
    }
    r.tables.push(t);
    r.summary = format!("k={} values={}", result.len(), join(&result.values));
    if let Some(o) = oracle {
        let s = status(o.values == result.values);
        r.diag("brute_check", s);
        r.summary.push_str(&format!(" brute={s}"));
    }
    Ok(r)
}

fn join(values: &[Rational]) -> String {
    values.iter().map(format_rational).collect::<Vec<_>>().join(",")
}

fn nd_result(result: &TensorConjugate, brute: Option<&TensorConjugate>, d: usize) -> ResultFile {
    let mut r = ResultFile::new("lft");
    r.diag("d", d).diag("k", result.values.len());
    let mut cols: Vec<String> = vec!["q".into()];
    cols.extend((0..d).map(|a| format!("s{a}")));
    cols.push("fstar".into());
    cols.extend((0..d).map(|a| format!("i{a}")));
    if brute.is_some() {
        cols.push("fstar_brute".into());
    }
    let mut t = Table::new("conjugate", &cols.iter().map(String::as_str).collect::<Vec<_>>());
    for (q, v) in result.values.iter().enumerate() {
        let mut row: Vec<Cell> = vec![q.into()];
        row.extend(result.duals.point(q).into_iter().map(Cell::from));
        row.push(v.into());
        row.extend(result.optimizers[q].iter().map(|&i| Cell::from(i)));
        if let Some(b) = brute {
            row.push((&b.values[q]).into());
        }
        t.push(row);
    }
    r.tables.push(t);
    r.summary = format!("d={d} k={}", result.values.len());
    if let Some(b) = brute {
        let s = status(b.values == result.values);
        r.diag("brute_check", s);
        r.summary.push_str(&format!(" brute={s}"));
    }
    r
}

pub fn cmd_qlft(a: &QlftArgs) -> CliResult<ResultFile> {
    let policy = if a.embed { SizePolicy::Embed } else { SizePolicy::Strict };
    let instance = load(&a.instance)?;
    if a.trials == 0 {
        return Err(CliError::Usage("--trials must be positive".into()));
    }
    let one = |seed: u64| -> CliResult<SimRun> {
        Ok(match (&instance, a.mode) {
            (Instance::OneD(f), Mode::Regular) => run_qlft_1d_regular(f, per_axis(&a.dual_size, &[f.n()])?[0], seed, policy)?,
            (Instance::OneD(f), Mode::Adaptive) => run_qlft_1d_adaptive(f, policy)?,
            (Instance::MultiD(t), Mode::Regular) => run_qlft_nd_regular(t, &per_axis(&a.dual_size, t.shape().dims())?, seed, policy)?,
            (Instance::MultiD(t), Mode::Adaptive) => run_qlft_nd_adaptive(t, policy)?,
        })
    };
    let first = one(a.seed)?;
    let mut trials = Table::new("trials", &["trial", "seed", "attempts"]);
    let mut total: u64 = 0;
    for t in 0..a.trials {
        let seed = a.seed.wrapping_add(t);
        let run = first.reseeded(seed);
        total += run.attempts;
        trials.push(vec![t.into(), seed.into(), run.attempts.into()]);
    }
    if let Some(path) = &a.trace {
        fs::write(path, first.transcript())?;
    }

    let mut r = ResultFile::new("qlft");
    let mode = match a.mode {
        Mode::Regular => "regular",
        Mode::Adaptive => "adaptive",
    };
    r.diag("mode", mode).diag("d", instance.d()).diag("rng_seed", a.seed).diag("trials", a.trials);
    r.diag("success_probability", &first.success_probability);
    r.diag("pass_acceptance", first.pass_acceptance.iter().map(format_rational).collect::<Vec<_>>().join(","));
    r.diag("pass_w", first.pass_w.iter().map(usize::to_string).collect::<Vec<_>>().join(","));
    r.diag("expected_aa_repetitions", first.expected_aa_repetitions);
    r.diag("total_attempts", total);
    let t_rat = Rational::from_integer(a.trials.into());
    r.diag("mean_attempts", Rational::from_integer(total.into()) / &t_rat);
    if total > 0 {
        r.diag("empirical_acceptance", t_rat / Rational::from_integer(total.into()));
    }

    let (ok, table) = match &instance {
        Instance::OneD(f) => qlft_table_1d(f, &first, a.mode)?,
        Instance::MultiD(t) => qlft_table_nd(&first, t.d(), a.mode)?,
    };
    if let (Instance::OneD(f), Mode::Regular) = (&instance, a.mode) {
        let g = discrete_gradients(f, default_epsilon(&first.dual[0]))?;
        if let Ok(w) = witness_params(&g, f.grid(), &first.dual[0]) {
            r.diag("w", w.w).diag("k_over_nw", w.success_probability);
        }
    }
    let verdict = status(ok);
    r.diag("verification", verdict);
    if let Some(v) = &first.verification {
        r.diag("exact_pairs", v.exact_pairs).diag("missing_labels", v.missing_labels.len());
        r.diag("value_mismatches", v.value_mismatches.len());
        if let Some(e) = &v.max_abs_error {
            r.diag("max_abs_error", e);
        }
    }
    if a.omega {
        let analog = digital_to_analog(&first.final_state, a.seed)?;
        r.diag("omega", analog.omega).diag("analog_attempts", analog.attempts);
    }
    r.tables.push(table);
    r.tables.push(trials);
    let mut mism = Table::new("mismatches", &["index", "observed", "expected"]);
    if let Some(v) = &first.verification {
        for m in &v.value_mismatches {
            let idx = m.index.iter().map(usize::to_string).collect::<Vec<_>>().join(":");
            mism.push(vec![idx.into(), (&m.observed).into(), (&m.expected).into()]);
        }
    }
    r.tables.push(mism);
    r.summary = format!(
        "verification={verdict} success_probability={} mean_attempts={}",
        format_rational(&first.success_probability),
        format_rational(&(Rational::from_integer(total.into()) / Rational::from_integer(a.trials.into())))
    );
    Ok(r)
}

fn qlft_table_1d(f: &FunctionSpec, run: &SimRun, mode: Mode) -> CliResult<(bool, Table)> {
    let observed = run.values()?;
    let (reference, duals) = match mode {
        Mode::Regular => {
            let c = lft_regular(f, &run.dual[0])?;
            (c.values, run.dual[0].points())
        }
        Mode::Adaptive => {
            let c = lft_adaptive(f, AdaptiveVariant::Centered)?;
            (c.values, c.dual.points())
        }
    };
    let got: Vec<Rational> = observed.iter().map(|(_, v)| v.clone()).collect();
    let mut t = Table::new("conjugate", &["j", "s", "fstar", "fstar_classical"]);
    for (j, v) in &observed {
        t.push(vec![(*j).into(), (&duals[*j]).into(), v.into(), (&reference[*j]).into()]);
    }
    Ok((got == reference, t))
}

fn qlft_table_nd(run: &SimRun, d: usize, mode: Mode) -> CliResult<(bool, Table)> {
    let prefix = match mode {
        Mode::Regular => "j",
        Mode::Adaptive => "i",
    };
    let mut rows = run
        .final_state
        .labels()
        .map(|l| {
            let idx = (0..d).map(|a| l.index(&format!("{prefix}{a}"))).collect::<Result<Vec<_>, _>>()?;
            let s = match mode {
                Mode::Regular => idx.iter().enumerate().map(|(a, &j)| run.dual[a].point(j)).collect(),
                Mode::Adaptive => {
                    (0..d).map(|a| l.defined_value(&format!("s{a}")).cloned()).collect::<Result<Vec<_>, _>>()?
                }
            };
            Ok((idx, s, l.defined_value("fstar")?.clone()))
        })
        .collect::<Result<Vec<_>, LftError>>()?;
    rows.sort();
    let mut cols: Vec<String> = (0..d).map(|a| format!("{prefix}{a}")).collect();
    cols.extend((0..d).map(|a| format!("s{a}")));
    cols.push("fstar".into());
    let mut t = Table::new("conjugate", &cols.iter().map(String::as_str).collect::<Vec<_>>());
    for (idx, s, v) in rows {
        let mut row: Vec<Cell> = idx.into_iter().map(Cell::from).collect();
        row.extend(s.into_iter().map(Cell::from));
        row.push(v.into());
        t.push(row);
    }
    let ok = run.verification.as_ref().is_some_and(|v| v.is_match());
    Ok((ok, t))
}

fn hidden_string(d: usize, z: &str) -> CliResult<Vec<u8>> {
    if d > MAX_BRUTE_D {
        return Err(LftError::SizeCap { n: d, cap: MAX_BRUTE_D }.into());
    }
    let bits = HiddenStringInstance::parse_bits(z)?;
    if bits.len() != d {
        return Err(LftError::BadHiddenString.into());
    }
    Ok(bits)
}

/// Hidden string drawn from a generator stream separate from the sampling stream.
fn seeded_string(d: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    (0..d).map(|_| if rng.gen_bool(0.5) { '1' } else { '0' }).collect()
}

pub fn cmd_hardness(h: &HardnessCommand) -> CliResult<ResultFile> {
    match h {
        HardnessCommand::PointQueries { d, z } => {
            let mut inst = HiddenStringInstance::point_query(hidden_string(*d, z)?)?;
            let rec = recover_via_point_queries(&mut inst)?;
            let recovered = bits_to_string(&rec.recovered);
            let mut r = ResultFile::new("hardness point-queries");
            r.diag("d", *d).diag("recovered", recovered.clone()).diag("queries", rec.queries);
            r.diag("correct", rec.recovered == inst.z());
            let mut t = Table::new("values", &["j", "fstar_e_j"]);
            for (j, v) in rec.values.iter().enumerate() {
                t.push(vec![j.into(), v.into()]);
            }
            r.tables.push(t);
            r.summary = format!("recovered={recovered} queries={}", rec.queries);
            Ok(r)
        }
        HardnessCommand::Sampling { d, z, t, seed, trials } => {
            let z = z.clone().unwrap_or_else(|| seeded_string(*d, *seed));
            let bits = hidden_string(*d, &z)?;
            let mut table = Table::new("trials", &["trial", "seed", "success", "rank", "oracle_queries"]);
            let mut equations = Table::new("equations", &["s", "value"]);
            let mut successes = 0u64;
            let mut recovered = None;
            for r in 0..(*trials).max(1) {
                let mut inst = HiddenStringInstance::sampling(bits.clone())?;
                let rec = recover_via_sampling(&mut inst, *t, seed.wrapping_add(r))?;
                let rank = match &rec.outcome {
                    SamplingOutcome::Recovered(x) => {
                        if r == 0 {
                            recovered = Some(bits_to_string(x));
                        }
                        successes += u64::from(x == &bits);
                        *d
                    }
                    SamplingOutcome::RankDeficient { rank } => *rank,
                };
                if r == 0 {
                    for e in &rec.equations {
                        equations.push(vec![bits_to_string(&e.s).into(), (&e.value).into()]);
                    }
                }
                table.push(vec![r.into(), seed.wrapping_add(r).into(), rec.succeeded().into(), rank.into(), rec.queries.into()]);
            }
            let n = (*trials).max(1);
            let mut r = ResultFile::new("hardness sampling");
            r.diag("d", *d).diag("t", *t).diag("samples_per_trial", d + t).diag("trials", n);
            r.diag("success", recovered.is_some());
            if let Some(rec) = &recovered {
                r.diag("recovered", rec.clone());
            }
            let rate = Rational::new(successes.into(), n.into());
            r.diag("success_rate", rate.clone());
            r.diag("bound", int(1) - Rational::new(1.into(), num_bigint::BigInt::from(2).pow(*t as u32)));
            r.tables.push(table);
            r.tables.push(equations);
            r.summary = format!(
                "success={} recovered={} equations={} success_rate={}",
                recovered.is_some(),
                recovered.as_deref().unwrap_or("-"),
                d + t,
                format_rational(&rate)
            );
            Ok(r)
        }
        HardnessCommand::Rescale { instance, dual_size } => {
            let Instance::OneD(f) = load(instance)? else {
                return Err(CliError::Usage("rescale takes a one-axis instance".into()));
            };
            let dual = regular_dual_1d(&f, dual_size.unwrap_or(f.n()))?;
            let res = rescale_instance(&f, &dual)?;
            let a = lft_regular(&f, &dual)?;
            let b = lft_regular(&res.f, &res.dual)?;
            let mut r = ResultFile::new("hardness rescale");
            r.diag("xi", &res.xi).diag("gamma_x", &res.gamma_x).diag("value_scale", &res.value_scale);
            r.diag("dual_scale", &res.dual_scale).diag("w", res.w).diag("w_tilde", res.w_tilde);
            r.diag("mapping_exact", res.mapping_exact);
            let mut t = Table::new("mapping", &["j", "s", "s_tilde", "fstar", "fstar_tilde", "scaled_fstar_tilde"]);
            for j in 0..dual.len() {
                t.push(vec![
                    j.into(),
                    dual.point(j).into(),
                    res.dual.point(j).into(),
                    (&a.values[j]).into(),
                    (&b.values[j]).into(),
                    (res.value_scale.clone() * &b.values[j]).into(),
                ]);
            }
            r.tables.push(t);
            r.summary = format!(
                "W={} W~={} mapping={}",
                res.w,
                res.w_tilde,
                if res.mapping_exact { "exact" } else { "inexact" }
            );
            Ok(r)
        }
    }
}

struct Example {
    name: &'static str,
    f: FunctionSpec,
    k: usize,
    conjugate: fn(&Rational) -> Rational,
}

fn examples(which: Which) -> Vec<Example> {
    let all = vec![
        Example { name: "ex1", f: ex1(), k: 4, conjugate: ex1_conjugate },
        Example { name: "ex2", f: ex2(), k: 5, conjugate: ex2_conjugate },
        Example { name: "ex3", f: ex3(), k: 5, conjugate: ex3_conjugate },
    ];
    let keep = match which {
        Which::Ex1 => "ex1",
        Which::Ex2 => "ex2",
        Which::Ex3 => "ex3",
        Which::All => return all,
    };
    all.into_iter().filter(|e| e.name == keep).collect()
}

/// Points of the dense plot grid: 65 points from `c_0 - 1/2` to `c_{n-2} + 1/2`.
const CURVE_POINTS: i64 = 65;

fn plot_tables(e: &Example) -> CliResult<Vec<(String, Table)>> {
    let cols = ["s", "fstar_discrete", "fstar_continuous"];
    let table = |dual: &DualGrid, values: &[Rational]| {
        let mut t = Table::new("plot", &cols);
        for (j, v) in values.iter().enumerate() {
            let s = dual.point(j);
            t.push(vec![s.clone().into(), v.into(), (e.conjugate)(&s).into()]);
        }
        t
    };
    let mut out = Vec::new();
    let reg = lft_regular(&e.f, &regular_dual_1d(&e.f, e.k)?)?;
    out.push(("regular".to_string(), table(&reg.dual, &reg.values)));
    for (name, v) in
        [("adaptive-centered", AdaptiveVariant::Centered), ("adaptive-right", AdaptiveVariant::Right), ("adaptive-left", AdaptiveVariant::Left)]
    {
        let c = lft_adaptive(&e.f, v)?;
        out.push((name.to_string(), table(&c.dual, &c.values)));
    }
    let (lo, hi) = nontrivial_dual_range(&discrete_gradients(&e.f, int(1))?);
    let (lo, hi) = (lo - Rational::new(1.into(), 2.into()), hi + Rational::new(1.into(), 2.into()));
    let step = (hi - lo.clone()) / Rational::from_integer((CURVE_POINTS - 1).into());
    let dense = DualGrid::regular(lo, step, CURVE_POINTS as usize)?;
    let c = lft_brute(&e.f, &dense);
    out.push(("curve".to_string(), table(&dense, &c.values)));
    Ok(out)
}

pub fn cmd_fixtures(which: Which, plot_data: bool, dir: &Path, precision: Option<usize>) -> CliResult<ResultFile> {
    fs::create_dir_all(dir)?;
    let mut files = Table::new("files", &["path", "bytes"]);
    let mut write = |name: String, text: String| -> CliResult<()> {
        let path = dir.join(&name);
        fs::write(&path, &text)?;
        files.push(vec![path.display().to_string().into(), text.len().into()]);
        Ok(())
    };
    for e in examples(which) {
        write(format!("{}.json", e.name), InstanceFile::from_function(&e.f).to_json())?;
        if plot_data {
            for (kind, t) in plot_tables(&e)? {
                write(format!("{}_{kind}.csv", e.name), t.to_csv(precision)?)?;
            }
        }
    }
    let mut r = ResultFile::new("fixtures emit");
    r.summary = format!("wrote {} files to {}", files.rows.len(), dir.display());
    r.tables.push(files);
    Ok(r)
}
