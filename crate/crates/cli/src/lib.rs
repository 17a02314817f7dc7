//! Library side of the `levy-smalltime` binary: run configuration, command
//! dispatch and report emission (JSON for verdicts, tidy CSV for series).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Display};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use levy_smalltime::classifier::{Classification, ClassificationValue, Classifier, QueryResult};
use levy_smalltime::functionals::functional_grid;
use levy_smalltime::integral::{critical_constant, CriticalConstant, CriticalValue, Engine, IntegralVerdict};
use levy_smalltime::simulator::{sample_paths, trend_from_paths, SimConfig, TrendMode, TrendVerdict};
use levy_smalltime::{FunctionalKind, JumpMeasure, LevyProcessSpec, Side};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Environment variable capping the rayon pool size.
pub const THREADS_ENV: &str = "LEVY_SMALLTIME_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Classify,
    Test,
    Critical,
    Functional,
    Simulate,
    Sweep,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Test => "test",
            Command::Critical => "critical",
            Command::Functional => "functional",
            Command::Simulate => "simulate",
            Command::Sweep => "sweep",
        }
    }

    fn allowed(&self) -> &'static [&'static str] {
        match self {
            Command::Classify => &["kappa", "all_kappa", "w_side", "engine"],
            Command::Test => &["test", "kappa", "param", "side", "engine"],
            Command::Critical => &["test", "kappa", "side", "engine"],
            Command::Functional => &["name", "kappa", "x_min", "points"],
            Command::Simulate => &[
                "kappa",
                "r",
                "depth",
                "paths",
                "seed",
                "mode",
                "cutoff_scale",
                "gaussian_refinement",
                "dump_paths",
            ],
            Command::Sweep => &["kappas", "target", "w_side", "engine"],
        }
    }
}

impl Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Both,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub spec_path: PathBuf,
    /// Command-specific `key = value` pairs, keys in snake_case.
    pub parameters: BTreeMap<String, String>,
    pub output_dir: PathBuf,
    pub format: Format,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("missing parameter: {0}")]
    Missing(&'static str),

    #[error("invalid parameter {key} = {value:?}: {reason}")]
    Invalid { key: String, value: String, reason: String },

    #[error("unknown parameter {key} for {command}")]
    Unknown { key: String, command: Command },

    #[error("cannot read spec {}: {source}", path.display())]
    SpecRead { path: PathBuf, source: std::io::Error },

    #[error("cannot parse spec {}: {source}", path.display())]
    SpecParse {
        path: PathBuf,
        source: levy_smalltime::Error,
    },

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },

    #[error(transparent)]
    Core(#[from] levy_smalltime::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Definite,
    Inconclusive,
}

impl Status {
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Definite => 0,
            Status::Inconclusive => 2,
        }
    }

    fn and(self, other: Status) -> Status {
        if self == Status::Inconclusive || other == Status::Inconclusive {
            Status::Inconclusive
        } else {
            Status::Definite
        }
    }
}

/// A tidy table; `suffix` distinguishes several tables of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub suffix: Option<&'static str>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultBundle {
    pub command: Command,
    /// Deterministic file stem derived from command, spec and parameters.
    pub stem: String,
    pub status: Status,
    pub report: Value,
    pub tables: Vec<Table>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub status: Status,
    pub files: Vec<PathBuf>,
    pub bundle: ResultBundle,
}

pub fn exit_code(r: &Result<RunOutcome, CliError>) -> i32 {
    match r {
        Ok(o) => o.status.exit_code(),
        Err(_) => 1,
    }
}

/// Sizes the global rayon pool from [`THREADS_ENV`] when set.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(text) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = parse_value(THREADS_ENV, &text)?;
    // a second initialization in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Reads a [`LevyProcessSpec`]; a bare jump measure gets `gamma = sigma2 = 0`.
pub fn load_spec(path: &Path) -> Result<LevyProcessSpec, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::SpecRead {
        path: path.to_path_buf(),
        source,
    })?;
    match LevyProcessSpec::from_json(&text) {
        Ok(s) => Ok(s),
        Err(spec_err) => match JumpMeasure::from_json(&text) {
            Ok(m) => LevyProcessSpec::new(0.0, 0.0, m).map_err(|source| CliError::SpecParse {
                path: path.to_path_buf(),
                source,
            }),
            Err(_) => Err(CliError::SpecParse {
                path: path.to_path_buf(),
                source: spec_err,
            }),
        },
    }
}

pub fn run(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    for key in cfg.parameters.keys() {
        if !cfg.command.allowed().contains(&key.as_str()) {
            return Err(CliError::Unknown {
                key: key.clone(),
                command: cfg.command,
            });
        }
    }
    let spec = load_spec(&cfg.spec_path)?;
    let bundle = execute(cfg, &spec)?;
    fs::create_dir_all(&cfg.output_dir).map_err(|source| CliError::Io {
        path: cfg.output_dir.clone(),
        source,
    })?;
    let mut files = Vec::new();
    if matches!(cfg.format, Format::Json | Format::Both) {
        files.push(write_report(&bundle, &cfg.output_dir)?);
    }
    if matches!(cfg.format, Format::Csv | Format::Both) {
        files.extend(emit_plot_data(&bundle, &cfg.output_dir)?);
    }
    Ok(RunOutcome {
        status: bundle.status,
        files,
        bundle,
    })
}

/// Runs the command without touching the file system.
pub fn execute(cfg: &RunConfig, spec: &LevyProcessSpec) -> Result<ResultBundle, CliError> {
    let p = Params(&cfg.parameters);
    let (status, result, tables) = match cfg.command {
        Command::Classify => classify(spec, &p)?,
        Command::Test => test(spec, &p)?,
        Command::Critical => critical(spec, &p)?,
        Command::Functional => functional(spec, &p)?,
        Command::Simulate => simulate(spec, &p)?,
        Command::Sweep => sweep(spec, &p)?,
    };
    let mut citations = BTreeSet::new();
    collect_citations(&result, &mut citations);
    let report = json!({
        "command": cfg.command,
        "spec": spec,
        "parameters": cfg.parameters,
        "status": status,
        "citations": citations,
        "result": result,
    });
    Ok(ResultBundle {
        command: cfg.command,
        stem: file_stem(cfg),
        status,
        report,
        tables,
    })
}

pub fn write_report(b: &ResultBundle, dir: &Path) -> Result<PathBuf, CliError> {
    let path = dir.join(format!("{}.json", b.stem));
    let mut text = serde_json::to_string_pretty(&b.report).expect("reports are plain JSON values");
    text.push('\n');
    fs::write(&path, text).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

/// Writes every table of the bundle as CSV; returns the paths written.
pub fn emit_plot_data(b: &ResultBundle, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut out = Vec::new();
    for t in &b.tables {
        let name = match t.suffix {
            Some(s) => format!("{}_{s}.csv", b.stem),
            None => format!("{}.csv", b.stem),
        };
        let path = dir.join(name);
        let csv_err = |source| CliError::Csv {
            path: path.clone(),
            source,
        };
        let mut w = csv::Writer::from_path(&path).map_err(csv_err)?;
        w.write_record(&t.header).map_err(csv_err)?;
        for row in &t.rows {
            w.write_record(row).map_err(csv_err)?;
        }
        w.flush().map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        out.push(path);
    }
    Ok(out)
}

/// `command_specstem_key-value_...` with anything outside `[A-Za-z0-9.-]` replaced.
pub fn file_stem(cfg: &RunConfig) -> String {
    let spec = cfg
        .spec_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut parts = vec![cfg.command.name().to_string(), spec];
    for (k, v) in &cfg.parameters {
        parts.push(format!("{k}-{v}"));
    }
    parts
        .iter()
        .map(|p| {
            p.chars()
                .map(|c| {
                    if c.is_ascii_alphanumeric() || c == '.' || c == '-' {
                        c
                    } else {
                        '-'
                    }
                })
                .collect::<String>()
        })
        .collect::<Vec<_>>()
        .join("_")
}

/// Shortest round-trip decimal, scientific outside `[1e-4, 1e15)`;
/// `inf`, `-inf` and `NaN` for the rest.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x.is_finite() && x != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn parse_value<T: FromStr>(key: &str, text: &str) -> Result<T, CliError>
where
    T::Err: Display,
{
    text.trim().parse().map_err(|e: T::Err| CliError::Invalid {
        key: key.to_string(),
        value: text.to_string(),
        reason: e.to_string(),
    })
}

fn invalid(key: &str, value: &str, reason: impl Into<String>) -> CliError {
    CliError::Invalid {
        key: key.to_string(),
        value: value.to_string(),
        reason: reason.into(),
    }
}

struct Params<'a>(&'a BTreeMap<String, String>);

impl Params<'_> {
    fn raw(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn opt<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: Display,
    {
        self.raw(key).map(|v| parse_value(key, v)).transpose()
    }

    fn req<T: FromStr>(&self, key: &'static str) -> Result<T, CliError>
    where
        T::Err: Display,
    {
        self.opt(key)?.ok_or(CliError::Missing(key))
    }

    fn or<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: Display,
    {
        Ok(self.opt(key)?.unwrap_or(default))
    }

    fn kappa(&self) -> Result<f64, CliError> {
        let k: f64 = self.req("kappa")?;
        if !(k > 0.0 && k.is_finite()) {
            return Err(invalid("kappa", self.raw("kappa").unwrap_or(""), "must be positive"));
        }
        Ok(k)
    }

    fn side(&self, key: &str, default: Side) -> Result<Side, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => parse_side(key, v),
        }
    }

    fn engine(&self) -> Result<Engine, CliError> {
        match self.raw("engine") {
            None | Some("analytic") => Ok(Engine::default()),
            Some("numeric") => Ok(Engine::numeric()),
            Some(v) => Err(invalid("engine", v, "expected analytic or numeric")),
        }
    }

    fn classifier(&self) -> Result<Classifier, CliError> {
        Ok(Classifier {
            engine: self.engine()?,
            w_side: self.side("w_side", Side::Negative)?,
        })
    }
}

fn parse_side(key: &str, v: &str) -> Result<Side, CliError> {
    match v {
        "positive" | "plus" | "+" => Ok(Side::Positive),
        "negative" | "minus" | "-" => Ok(Side::Negative),
        _ => Err(invalid(key, v, "expected positive or negative")),
    }
}

/// `a:b:step` (inclusive) or a comma-separated list.
pub fn parse_grid(key: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let values = if parts.len() == 3 {
        let a: f64 = parse_value(key, parts[0])?;
        let b: f64 = parse_value(key, parts[1])?;
        let step: f64 = parse_value(key, parts[2])?;
        if !(step > 0.0 && b >= a) {
            return Err(invalid(key, text, "need a <= b and step > 0"));
        }
        let n = ((b - a) / step + 1e-9).floor() as usize + 1;
        // snap to 12 decimals so 0.6 + 3 * 0.1 prints as 0.9
        (0..n).map(|i| ((a + i as f64 * step) * 1e12).round() / 1e12).collect()
    } else {
        text.split(',')
            .map(|v| parse_value::<f64>(key, v))
            .collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() || values.iter().any(|k| !(*k > 0.0 && k.is_finite())) {
        return Err(invalid(key, text, "values must be positive"));
    }
    Ok(values)
}

type Outcome = (Status, Value, Vec<Table>);

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("core types serialize")
}

fn collect_citations(v: &Value, out: &mut BTreeSet<String>) {
    match v {
        Value::Object(m) => {
            // classifications carry both the tag and the rule
            if let (Some(Value::String(tag)), Some(_)) = (m.get("basis"), m.get("rule")) {
                out.insert(tag.clone());
            }
            m.values().for_each(|x| collect_citations(x, out));
        }
        Value::Array(a) => a.iter().for_each(|x| collect_citations(x, out)),
        _ => {}
    }
}

/// Numeric reading of a classification value, empty when there is none.
fn value_number(v: &ClassificationValue) -> String {
    use ClassificationValue::*;
    match *v {
        Zero => "0".into(),
        FinitePositive { value: Some(x) } | FiniteNegative { value: Some(x) } => fmt_f64(x),
        Infinite => fmt_f64(f64::INFINITY),
        MinusInfinite => fmt_f64(f64::NEG_INFINITY),
        EqualsDrift { delta } => fmt_f64(delta),
        EqualsSigma { sigma } => fmt_f64(sigma),
        _ => String::new(),
    }
}

/// Inconclusive core errors become report entries; anything else propagates.
fn inconclusive_entry(e: levy_smalltime::Error) -> Result<Value, CliError> {
    match e {
        levy_smalltime::Error::Inconclusive { ref label, ref verdict } => Ok(json!({
            "message": e.to_string(),
            "label": label,
            "verdict": verdict,
        })),
        levy_smalltime::Error::InconclusiveBracket { param } => Ok(json!({
            "message": e.to_string(),
            "param": param,
        })),
        e => Err(e.into()),
    }
}

fn classify(spec: &LevyProcessSpec, p: &Params) -> Result<Outcome, CliError> {
    let c = p.classifier()?;
    let kappas = match p.raw("all_kappa") {
        Some(g) => parse_grid("all_kappa", g)?,
        None => vec![p.kappa()?],
    };
    let results: Vec<(f64, levy_smalltime::Result<QueryResult>)> =
        kappas.par_iter().map(|&k| (k, c.query(spec, k))).collect();
    let mut status = Status::Definite;
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    for (k, r) in results {
        match r {
            Ok(q) => {
                let parts: [(&str, &Classification); 4] = [
                    ("two_sided_limsup", &q.two_sided_limsup),
                    ("one_sided_limsup", &q.one_sided_limsup),
                    ("one_sided_liminf", &q.one_sided_liminf),
                    ("limit", &q.limit),
                ];
                for (name, cl) in parts {
                    rows.push(vec![
                        fmt_f64(k),
                        name.into(),
                        cl.value.short_name().into(),
                        value_number(&cl.value),
                        cl.basis.clone(),
                    ]);
                }
                entries.push(to_value(&q));
            }
            Err(e) => {
                status = Status::Inconclusive;
                rows.push(vec![
                    fmt_f64(k),
                    "query".into(),
                    "inconclusive".into(),
                    String::new(),
                    String::new(),
                ]);
                entries.push(json!({ "kappa": k, "inconclusive": inconclusive_entry(e)? }));
            }
        }
    }
    let result = if p.raw("all_kappa").is_some() {
        Value::Array(entries)
    } else {
        entries.pop().expect("one kappa")
    };
    let table = Table {
        suffix: None,
        header: ["kappa", "quantity", "verdict", "value", "basis"]
            .map(String::from)
            .to_vec(),
        rows,
    };
    Ok((status, result, vec![table]))
}

fn verdict_status(v: &IntegralVerdict) -> Status {
    if v.is_inconclusive() {
        Status::Inconclusive
    } else {
        Status::Definite
    }
}

fn blocks_table(v: &IntegralVerdict) -> Table {
    Table {
        suffix: None,
        header: ["block", "u_lo", "u_hi", "value"].map(String::from).to_vec(),
        rows: v
            .blocks
            .iter()
            .enumerate()
            .map(|(i, b)| vec![i.to_string(), i.to_string(), (i + 1).to_string(), fmt_f64(*b)])
            .collect(),
    }
}

fn test(spec: &LevyProcessSpec, p: &Params) -> Result<Outcome, CliError> {
    let engine = p.engine()?;
    let m = &spec.jump;
    let name = p.raw("test").unwrap_or("cond2");
    let v = match name {
        "cond2" => {
            let side = p
                .raw("side")
                .filter(|s| *s != "both")
                .map(|s| parse_side("side", s))
                .transpose()?;
            engine.condition_2(m, p.kappa()?, side)?
        }
        "I" => engine.i_test(m, p.req("param")?)?,
        "J" => engine.j_test(m, p.req("param")?, p.kappa()?, p.side("side", Side::Negative)?)?,
        "K" => engine.k_test(m, p.req("param")?, p.kappa()?)?,
        "5.1" => engine.test_5_1(m, p.kappa()?)?,
        "33b" => engine.test_33b(m)?,
        other => return Err(invalid("test", other, "expected cond2, I, J, K, 5.1 or 33b")),
    };
    Ok((verdict_status(&v), to_value(&v), vec![blocks_table(&v)]))
}

fn critical(spec: &LevyProcessSpec, p: &Params) -> Result<Outcome, CliError> {
    let engine = p.engine()?;
    let m = &spec.jump;
    let r = match p.raw("test").unwrap_or("I") {
        "I" => critical_constant(&|a| engine.i_test(m, a)),
        "J" => {
            let (kappa, side) = (p.kappa()?, p.side("side", Side::Negative)?);
            critical_constant(&|l| engine.j_test(m, l, kappa, side))
        }
        "K" => {
            let kappa = p.kappa()?;
            critical_constant(&|d| engine.k_test(m, d, kappa))
        }
        other => return Err(invalid("test", other, "expected I, J or K")),
    };
    match r {
        Ok(c) => {
            let row = critical_row(&c);
            let table = Table {
                suffix: None,
                header: ["lo", "hi", "value", "verdict_lo", "verdict_hi"]
                    .map(String::from)
                    .to_vec(),
                rows: vec![row],
            };
            Ok((Status::Definite, to_value(&c), vec![table]))
        }
        Err(e) => Ok((
            Status::Inconclusive,
            json!({ "inconclusive": inconclusive_entry(e)? }),
            vec![],
        )),
    }
}

fn critical_row(c: &CriticalConstant) -> Vec<String> {
    let value = match c.value {
        CriticalValue::Zero => 0.0,
        CriticalValue::Finite { value } => value,
        CriticalValue::Infinite => f64::INFINITY,
    };
    let label = |v: &Option<IntegralVerdict>| v.as_ref().map(|v| v.outcome.label().to_string()).unwrap_or_default();
    vec![
        fmt_f64(c.bracket.0),
        fmt_f64(c.bracket.1.unwrap_or(f64::INFINITY)),
        fmt_f64(value),
        label(&c.verdict_lo),
        label(&c.verdict_hi),
    ]
}

fn functional_kind(p: &Params) -> Result<FunctionalKind, CliError> {
    let name: String = p.req("name")?;
    Ok(match name.as_str() {
        "V" => FunctionalKind::V,
        "U" => FunctionalKind::U,
        "W_plus" => FunctionalKind::W { side: Side::Positive },
        "W_minus" => FunctionalKind::W { side: Side::Negative },
        "A_plus" => FunctionalKind::APlus,
        "A_minus" => FunctionalKind::AMinus,
        "rho_kappa" => FunctionalKind::RhoKappa { kappa: p.kappa()? },
        "U_plus" => FunctionalKind::UPlus,
        "m_T" => FunctionalKind::MT,
        _ => {
            return Err(invalid(
                "name",
                &name,
                "expected V, U, W_plus, W_minus, A_plus, A_minus, rho_kappa, U_plus or m_T",
            ))
        }
    })
}

fn functional(spec: &LevyProcessSpec, p: &Params) -> Result<Outcome, CliError> {
    let k = functional_kind(p)?;
    let x_min = p.or("x_min", 1e-12)?;
    let n = p.or("points", 50usize)?;
    if n == 0 {
        return Err(invalid("points", "0", "need at least one point"));
    }
    let grid = functional_grid(&spec.jump, k, x_min, n)?;
    let asymptotic = levy_smalltime::asymptotic_of(&spec.jump, k).ok();
    let name = match k {
        FunctionalKind::RhoKappa { .. } => "rho_kappa".to_string(),
        _ => k.name(),
    };
    let table = Table {
        suffix: None,
        header: vec!["x".into(), name.clone()],
        rows: grid.iter().map(|(x, v)| vec![fmt_f64(*x), fmt_f64(*v)]).collect(),
    };
    let result = json!({
        "functional": k,
        "name": name,
        "points": grid,
        "asymptotic": asymptotic,
    });
    Ok((Status::Definite, result, vec![table]))
}

fn parse_bool(p: &Params, key: &str, default: bool) -> Result<bool, CliError> {
    p.or(key, default)
}

fn simulate(spec: &LevyProcessSpec, p: &Params) -> Result<Outcome, CliError> {
    let d = SimConfig::default();
    let cfg = SimConfig {
        r: p.or("r", d.r)?,
        depth: p.or("depth", d.depth)?,
        paths: p.or("paths", d.paths)?,
        seed: p.or("seed", d.seed)?,
        cutoff_scale: p.or("cutoff_scale", d.cutoff_scale)?,
        gaussian_refinement: parse_bool(p, "gaussian_refinement", d.gaussian_refinement)?,
    };
    let kappa = p.kappa()?;
    let mode = match p.raw("mode").unwrap_or("absolute") {
        "absolute" => TrendMode::Absolute,
        "signed" => TrendMode::Signed,
        other => return Err(invalid("mode", other, "expected signed or absolute")),
    };
    let paths = sample_paths(spec, &cfg)?;
    let report = trend_from_paths(&paths, &cfg, kappa, mode);
    let status = match report.verdict {
        TrendVerdict::Inconclusive => Status::Inconclusive,
        _ => Status::Definite,
    };
    let mut tables = vec![Table {
        suffix: None,
        header: ["depth", "t", "median_stat", "q75_stat"].map(String::from).to_vec(),
        rows: report
            .depths
            .iter()
            .map(|d| {
                vec![
                    d.depth.to_string(),
                    fmt_f64(d.t),
                    fmt_f64(d.median_stat),
                    fmt_f64(d.q75_stat),
                ]
            })
            .collect(),
    }];
    if parse_bool(p, "dump_paths", false)? {
        let rows = paths
            .iter()
            .flat_map(|g| {
                g.values
                    .iter()
                    .map(|v| vec![g.path_index.to_string(), v.n.to_string(), fmt_f64(v.t), fmt_f64(v.x)])
            })
            .collect();
        tables.push(Table {
            suffix: Some("paths"),
            header: ["path", "n", "t", "x"].map(String::from).to_vec(),
            rows,
        });
    }
    Ok((status, to_value(&report), tables))
}

fn sweep(spec: &LevyProcessSpec, p: &Params) -> Result<Outcome, CliError> {
    let c = p.classifier()?;
    let kappas = parse_grid("kappas", p.raw("kappas").ok_or(CliError::Missing("kappas"))?)?;
    let target = p.raw("target").unwrap_or("two_sided");
    let f: fn(&Classifier, &LevyProcessSpec, f64) -> levy_smalltime::Result<Classification> = match target {
        "two_sided" => Classifier::two_sided,
        "one_sided" => Classifier::one_sided,
        "liminf" => |c, s, k| c.one_sided(&s.negated(), k).map(Classification::flipped),
        "limit" => Classifier::limit,
        other => {
            return Err(invalid(
                "target",
                other,
                "expected two_sided, one_sided, liminf or limit",
            ))
        }
    };
    let results: Vec<(f64, levy_smalltime::Result<Classification>)> =
        kappas.par_iter().map(|&k| (k, f(&c, spec, k))).collect();
    let mut status = Status::Definite;
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for (k, r) in results {
        match r {
            Ok(cl) => {
                rows.push(vec![
                    fmt_f64(k),
                    cl.value.short_name().into(),
                    value_number(&cl.value),
                    cl.basis.clone(),
                ]);
                entries.push(json!({ "kappa": k, "classification": cl }));
            }
            Err(e) => {
                status = status.and(Status::Inconclusive);
                rows.push(vec![fmt_f64(k), "inconclusive".into(), String::new(), String::new()]);
                entries.push(json!({ "kappa": k, "inconclusive": inconclusive_entry(e)? }));
            }
        }
    }
    let table = Table {
        suffix: None,
        header: ["kappa", "verdict", "value", "basis"].map(String::from).to_vec(),
        rows,
    };
    Ok((status, json!({ "target": target, "rows": entries }), vec![table]))
}
