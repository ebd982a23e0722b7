//! Sectioned `key = value` experiment configuration.
//!
//! ```text
//! file     := line*
//! line     := blank | comment | header | entry
//! comment  := ('#' | ';') text
//! header   := '[' section ']'
//! entry    := key '=' value [ '#' comment ]
//! ```
//!
//! Every problem found is reported, each with its line number. The full key
//! list and defaults are in the repository README.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use markov_orlicz::function::{FunctionKind, FunctionRep};
use markov_orlicz::measure::QuadratureConfig;
use markov_orlicz::norms::LorentzIndex;
use markov_orlicz::transform::PhiSpec;
use serde::Serialize;

const SCHEMA: &[(&str, &[&str])] = &[
    ("experiment", &["command", "seed", "bound_scale"]),
    ("phi", &["family", "m", "r", "nu", "table"]),
    ("function", &["rep", "generator", "degree"]),
    ("norm", &["kind", "p", "b", "r"]),
    ("sweep", &["family", "n"]),
    ("rational", &["rep", "a", "r", "p", "k"]),
    ("tail", &["m", "r", "s", "u_max", "prefactor"]),
    ("extremal", &["n", "restarts"]),
    ("quadrature", &["rel_tol", "max_depth", "nodes_per_panel", "grading"]),
    ("output", &["path", "format"]),
];

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

/// All errors of a rejected configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Norm,
    Transform,
    MarkovSweep,
    Equivalence,
    Rational,
    Tail,
    Extremal,
}

impl Command {
    pub const ALL: [(&'static str, Command); 7] = [
        ("norm", Command::Norm),
        ("transform", Command::Transform),
        ("markov-sweep", Command::MarkovSweep),
        ("equivalence", Command::Equivalence),
        ("rational", Command::Rational),
        ("tail", Command::Tail),
        ("extremal", Command::Extremal),
    ];

    pub fn name(self) -> &'static str {
        Self::ALL.iter().find(|(_, c)| *c == self).unwrap().0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    #[default]
    Json,
    Both,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "both" => Ok(Format::Both),
            _ => Err(format!("unknown format `{s}` (expected csv, json or both)")),
        }
    }
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Both => "both",
        }
    }
}

#[derive(Debug, Clone)]
pub enum PhiConfig {
    PowerLog { m: f64, r: f64 },
    LogPower { nu: f64 },
    Table { path: PathBuf, points: Vec<(f64, f64)> },
}

impl PhiConfig {
    pub fn spec(&self) -> markov_orlicz::Result<PhiSpec> {
        match self {
            PhiConfig::PowerLog { m, r } => PhiSpec::power_log(*m, *r),
            PhiConfig::LogPower { nu } => PhiSpec::log_power(*nu),
            PhiConfig::Table { path, points } => PhiSpec::tabulated(path.display().to_string(), points.clone()),
        }
    }
}

#[derive(Debug, Clone)]
pub enum FunctionInput {
    Inline(FunctionRep),
    Generator { kind: FunctionKind, degree: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    Lp,
    Sup,
    Orlicz,
    G,
    Lorentz,
    WeightedLorentz,
    V,
}

const NORM_KINDS: [(&str, NormKind); 7] = [
    ("lp", NormKind::Lp),
    ("sup", NormKind::Sup),
    ("orlicz", NormKind::Orlicz),
    ("g", NormKind::G),
    ("lorentz", NormKind::Lorentz),
    ("weighted-lorentz", NormKind::WeightedLorentz),
    ("v", NormKind::V),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormConfig {
    pub kind: NormKind,
    pub p: f64,
    pub b: LorentzIndex,
    pub r: u32,
}

impl Default for NormConfig {
    fn default() -> Self {
        Self {
            kind: NormKind::Orlicz,
            p: 2.0,
            b: LorentzIndex::EqualsP,
            r: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFamilyKind {
    Jacobi22,
    Chebyshev,
    RandomPoly,
}

#[derive(Debug, Clone)]
pub struct RationalConfig {
    pub reps: Vec<markov_orlicz::function::RationalRep>,
    pub a: Vec<f64>,
    pub r: Vec<u32>,
    /// Chebyshev numerator degrees for the degree-scaled family `T_k/(x²+a)`.
    pub k: Vec<usize>,
    /// `Some(p)` runs the `L_p` form instead of the Orlicz one.
    pub p: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailConfig {
    pub m: f64,
    pub r: u32,
    pub s: Option<f64>,
    pub u_max: f64,
    pub prefactor: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub command: Command,
    pub seed: Option<u64>,
    pub bound_scale: f64,
    pub phi: PhiConfig,
    pub function: Option<FunctionInput>,
    pub norm: NormConfig,
    pub sweep_family: SweepFamilyKind,
    pub sweep_n: Vec<usize>,
    pub rational: RationalConfig,
    pub tail: TailConfig,
    pub extremal_n: usize,
    pub extremal_restarts: usize,
    pub quadrature: QuadratureConfig,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    /// Effective settings, defaults included, as `section -> key -> value`.
    pub echo: BTreeMap<String, BTreeMap<String, String>>,
}

impl ExperimentConfig {
    /// The effective configuration as config text; parsing it back yields
    /// the same experiment.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (section, keys) in &self.echo {
            out.push_str(&format!("[{section}]\n"));
            for (k, v) in keys {
                out.push_str(&format!("{k} = {v}\n"));
            }
            out.push('\n');
        }
        out
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.seed = Some(seed);
        self.echo
            .entry("experiment".into())
            .or_default()
            .insert("seed".into(), seed.to_string());
    }

    pub fn set_output(&mut self, path: Option<PathBuf>, format: Option<Format>) {
        let out = self.echo.entry("output".into()).or_default();
        if let Some(p) = path {
            out.insert("path".into(), p.display().to_string());
            self.output_path = Some(p);
        }
        if let Some(f) = format {
            out.insert("format".into(), f.name().into());
            self.format = f;
        }
    }
}

struct Entry {
    value: String,
    line: usize,
}

struct Reader {
    sections: BTreeMap<String, BTreeMap<String, Entry>>,
    errors: Vec<ConfigError>,
    echo: BTreeMap<String, BTreeMap<String, String>>,
    base_dir: PathBuf,
}

fn suggest<'a>(word: &str, candidates: impl IntoIterator<Item = &'a str>) -> Option<&'a str> {
    candidates
        .into_iter()
        .map(|c| (strsim::levenshtein(word, c), c))
        .filter(|(d, _)| *d <= 2)
        .min()
        .map(|(_, c)| c)
}

fn did_you_mean(s: Option<&str>) -> String {
    s.map(|c| format!("; did you mean `{c}`?")).unwrap_or_default()
}

impl Reader {
    fn err(&mut self, line: Option<usize>, message: impl Into<String>) {
        self.errors.push(ConfigError {
            line,
            message: message.into(),
        });
    }

    fn has(&self, section: &str, key: &str) -> bool {
        self.sections.get(section).is_some_and(|s| s.contains_key(key))
    }

    fn raw(&self, section: &str, key: &str) -> Option<(String, usize)> {
        self.sections
            .get(section)
            .and_then(|s| s.get(key))
            .map(|e| (e.value.clone(), e.line))
    }

    fn record(&mut self, section: &str, key: &str, value: String) {
        self.echo
            .entry(section.into())
            .or_default()
            .insert(key.into(), value);
    }

    /// Typed value with a default; the effective value is echoed.
    fn get<T: FromStr + ToString>(&mut self, section: &str, key: &str, default: T) -> T
    where
        T::Err: fmt::Display,
    {
        match self.opt(section, key) {
            Some(v) => v,
            None => {
                self.record(section, key, default.to_string());
                default
            }
        }
    }

    fn opt<T: FromStr>(&mut self, section: &str, key: &str) -> Option<T>
    where
        T::Err: fmt::Display,
    {
        let (raw, line) = self.raw(section, key)?;
        match raw.parse::<T>() {
            Ok(v) => {
                self.record(section, key, raw);
                Some(v)
            }
            Err(e) => {
                self.err(Some(line), format!("[{section}] {key}: cannot parse `{raw}`: {e}"));
                None
            }
        }
    }

    fn required<T: FromStr>(&mut self, section: &str, key: &str) -> Option<T>
    where
        T::Err: fmt::Display,
    {
        if !self.has(section, key) {
            self.err(None, format!("missing required key `{key}` in [{section}]"));
            return None;
        }
        self.opt(section, key)
    }

    fn positive(&mut self, section: &str, key: &str, default: f64) -> f64 {
        let v = self.get(section, key, default);
        if !(v > 0.0 && v.is_finite()) {
            let line = self.raw(section, key).map(|(_, l)| l);
            self.err(line, format!("[{section}] {key} must be positive and finite, got {v}"));
        }
        v
    }

    fn list<T: FromStr>(&mut self, section: &str, key: &str, default: &str) -> Vec<T>
    where
        T::Err: fmt::Display,
    {
        let (raw, line) = self.raw(section, key).unwrap_or((default.to_string(), 0));
        let mut out = Vec::new();
        for item in raw.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item.parse::<T>() {
                Ok(v) => out.push(v),
                Err(e) => self.err(
                    (line > 0).then_some(line),
                    format!("[{section}] {key}: cannot parse `{item}`: {e}"),
                ),
            }
        }
        self.record(section, key, raw);
        out
    }

    /// `a..b` (inclusive) or a comma list of degrees.
    fn degrees(&mut self, section: &str, key: &str, default: &str) -> Vec<usize> {
        let (raw, line) = self.raw(section, key).unwrap_or((default.to_string(), 0));
        let line = (line > 0).then_some(line);
        self.record(section, key, raw.clone());
        if let Some((a, b)) = raw.split_once("..") {
            match (a.trim().parse::<usize>(), b.trim().parse::<usize>()) {
                (Ok(a), Ok(b)) if a <= b => return (a..=b).collect(),
                _ => {
                    self.err(line, format!("[{section}] {key}: malformed range `{raw}` (expected a..b with a <= b)"));
                    return Vec::new();
                }
            }
        }
        let mut out = Vec::new();
        for item in raw.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item.parse() {
                Ok(v) => out.push(v),
                Err(e) => self.err(line, format!("[{section}] {key}: cannot parse `{item}`: {e}")),
            }
        }
        if out.is_empty() {
            self.err(line, format!("[{section}] {key}: empty degree list"));
        }
        out
    }

    fn choice<T: Copy>(&mut self, section: &str, key: &str, default: &str, options: &[(&str, T)]) -> Option<T> {
        let (raw, line) = self.raw(section, key).unwrap_or((default.to_string(), 0));
        self.record(section, key, raw.clone());
        match options.iter().find(|(n, _)| *n == raw) {
            Some((_, v)) => Some(*v),
            None => {
                let names: Vec<&str> = options.iter().map(|(n, _)| *n).collect();
                let hint = did_you_mean(suggest(&raw, names.iter().copied()));
                self.err(
                    (line > 0).then_some(line),
                    format!("[{section}] {key}: unknown value `{raw}` (expected one of {}){hint}", names.join(", ")),
                );
                None
            }
        }
    }

    fn path(&mut self, section: &str, key: &str) -> Option<PathBuf> {
        let (raw, line) = self.raw(section, key)?;
        self.record(section, key, raw.clone());
        let p = Path::new(&raw);
        let p = if p.is_absolute() { p.to_path_buf() } else { self.base_dir.join(p) };
        if !p.exists() {
            self.err(Some(line), format!("[{section}] {key}: file `{}` does not exist", p.display()));
            return None;
        }
        Some(p)
    }
}

fn lex(text: &str, reader: &mut Reader) {
    let known_sections = || SCHEMA.iter().map(|(s, _)| *s);
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() || body.starts_with(';') {
            continue;
        }
        if let Some(rest) = body.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                reader.err(Some(line), format!("malformed section header `{body}`"));
                current = None;
                continue;
            };
            let name = name.trim();
            if !known_sections().any(|s| s == name) {
                let hint = did_you_mean(suggest(name, known_sections()));
                reader.err(Some(line), format!("unknown section [{name}]{hint}"));
                current = None;
                continue;
            }
            reader.sections.entry(name.to_string()).or_default();
            current = Some(name.to_string());
            continue;
        }
        let Some((key, value)) = body.split_once('=') else {
            reader.err(Some(line), format!("expected `key = value`, got `{body}`"));
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        let Some(section) = current.clone() else {
            reader.err(Some(line), format!("key `{key}` appears before any section header"));
            continue;
        };
        let keys = SCHEMA.iter().find(|(s, _)| *s == section).unwrap().1;
        if !keys.contains(&key) {
            let hint = did_you_mean(suggest(key, keys.iter().copied()));
            reader.err(Some(line), format!("unknown key `{key}` in [{section}]{hint}"));
            continue;
        }
        let map = reader.sections.get_mut(&section).unwrap();
        if let Some(prev) = map.get(key) {
            let prev = prev.line;
            reader.err(Some(line), format!("duplicate key `{key}` in [{section}] (first set on line {prev})"));
            continue;
        }
        map.insert(
            key.to_string(),
            Entry {
                value: value.to_string(),
                line,
            },
        );
    }
}

fn read_table(path: &Path) -> Result<Vec<(f64, f64)>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let Some((z, v)) = l.split_once(',') else {
            return Err(format!("table line {}: expected `z, phi`", i + 1));
        };
        let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("table line {}: {e}", i + 1));
        out.push((parse(z)?, parse(v)?));
    }
    Ok(out)
}

fn read_phi(rd: &mut Reader) -> Option<PhiConfig> {
    let family = rd.choice(
        "phi",
        "family",
        "power-log",
        &[("power-log", 0u8), ("log-power", 1), ("table", 2)],
    )?;
    match family {
        0 => {
            let m = rd.positive("phi", "m", 2.0);
            let r: f64 = rd.get("phi", "r", 0.0);
            Some(PhiConfig::PowerLog { m, r })
        }
        1 => {
            let nu: f64 = rd.get("phi", "nu", 1.0);
            Some(PhiConfig::LogPower { nu })
        }
        _ => {
            if !rd.has("phi", "table") {
                rd.err(None, "missing required key `table` in [phi] for family = table");
                return None;
            }
            let line = rd.raw("phi", "table").map(|(_, l)| l);
            let path = rd.path("phi", "table")?;
            match read_table(&path) {
                Ok(points) => Some(PhiConfig::Table { path, points }),
                Err(e) => {
                    rd.err(line, format!("[phi] table: {e}"));
                    None
                }
            }
        }
    }
}

fn read_function(rd: &mut Reader, required: bool) -> Option<FunctionInput> {
    let has_rep = rd.has("function", "rep");
    let has_gen = rd.has("function", "generator");
    match (has_rep, has_gen) {
        (true, true) => {
            let line = rd.raw("function", "generator").map(|(_, l)| l);
            rd.err(line, "[function] set either `rep` or `generator`, not both");
            None
        }
        (true, false) => rd.opt::<FunctionRep>("function", "rep").map(FunctionInput::Inline),
        (false, true) => {
            let kind = rd.opt::<FunctionKind>("function", "generator")?;
            let degree = rd.required::<usize>("function", "degree")?;
            if !rd.has("experiment", "seed") {
                rd.err(None, "a function generator needs `seed` in [experiment]");
            }
            Some(FunctionInput::Generator { kind, degree })
        }
        (false, false) => {
            if required {
                rd.err(None, "[function] needs `rep` or `generator`");
            }
            None
        }
    }
}

fn read_norm(rd: &mut Reader) -> NormConfig {
    let kind = rd.choice("norm", "kind", "orlicz", &NORM_KINDS).unwrap_or(NormKind::Orlicz);
    let p = rd.positive("norm", "p", 2.0);
    let (b_raw, line) = rd.raw("norm", "b").unwrap_or(("p".into(), 0));
    rd.record("norm", "b", b_raw.clone());
    let b = match b_raw.as_str() {
        "p" => LorentzIndex::EqualsP,
        "inf" => LorentzIndex::Infinite,
        s => match s.parse::<f64>() {
            Ok(v) if v >= 1.0 => LorentzIndex::Finite(v),
            _ => {
                rd.err((line > 0).then_some(line), format!("[norm] b: expected a number >= 1, `inf` or `p`, got `{s}`"));
                LorentzIndex::EqualsP
            }
        },
    };
    let r = rd.get("norm", "r", 1u32);
    if r < 1 {
        let line = rd.raw("norm", "r").map(|(_, l)| l);
        rd.err(line, "[norm] r must be >= 1");
    }
    NormConfig { kind, p, b, r }
}

fn read_quadrature(rd: &mut Reader) -> QuadratureConfig {
    let d = QuadratureConfig::default();
    let rel_tol = rd.positive("quadrature", "rel_tol", d.rel_tol);
    let max_depth = rd.get("quadrature", "max_depth", d.max_depth);
    let nodes_per_panel = rd.get("quadrature", "nodes_per_panel", d.nodes_per_panel);
    let grading = rd.get("quadrature", "grading", d.grading);
    let q = QuadratureConfig {
        rel_tol,
        max_depth,
        nodes_per_panel,
        grading,
    };
    if let Err(e) = q.validate() {
        rd.err(None, format!("[quadrature] {e}"));
    }
    q
}

/// Parses and validates a configuration. Relative file paths resolve
/// against `base_dir`.
pub fn parse_config_in(text: &str, base_dir: &Path) -> Result<ExperimentConfig, ConfigErrors> {
    let mut rd = Reader {
        sections: BTreeMap::new(),
        errors: Vec::new(),
        echo: BTreeMap::new(),
        base_dir: base_dir.to_path_buf(),
    };
    lex(text, &mut rd);

    let command = if rd.has("experiment", "command") {
        rd.choice("experiment", "command", "", &Command::ALL)
    } else {
        rd.err(None, "missing required key `command` in [experiment]");
        None
    };
    let seed = rd.opt::<u64>("experiment", "seed");
    let bound_scale = rd.positive("experiment", "bound_scale", 1.0);
    let phi = read_phi(&mut rd);
    let function = read_function(&mut rd, command == Some(Command::Norm));
    let norm = read_norm(&mut rd);
    let quadrature = read_quadrature(&mut rd);

    let mut sweep_family = SweepFamilyKind::Jacobi22;
    let mut sweep_n = Vec::new();
    let mut rational = RationalConfig {
        reps: Vec::new(),
        a: Vec::new(),
        r: Vec::new(),
        k: Vec::new(),
        p: None,
    };
    let mut tail = TailConfig {
        m: 2.0,
        r: 1,
        s: None,
        u_max: 1e3,
        prefactor: None,
    };
    let (mut extremal_n, mut extremal_restarts) = (1, 0);

    match command {
        Some(Command::MarkovSweep) => {
            sweep_family = rd
                .choice(
                    "sweep",
                    "family",
                    "jacobi22",
                    &[
                        ("jacobi22", SweepFamilyKind::Jacobi22),
                        ("chebyshev", SweepFamilyKind::Chebyshev),
                        ("random-poly", SweepFamilyKind::RandomPoly),
                    ],
                )
                .unwrap_or(SweepFamilyKind::Jacobi22);
            sweep_n = rd.degrees("sweep", "n", "2..40");
            if sweep_family == SweepFamilyKind::RandomPoly && seed.is_none() {
                rd.err(None, "sweep family random-poly needs `seed` in [experiment]");
            }
            if sweep_family == SweepFamilyKind::Jacobi22 && sweep_n.iter().any(|&n| n > 200) {
                let line = rd.raw("sweep", "n").map(|(_, l)| l);
                rd.err(line, "[sweep] n: Jacobi degrees are limited to 200");
            }
        }
        Some(Command::Rational) => {
            if rd.has("rational", "rep") {
                if let Some(q) = rd.opt("rational", "rep") {
                    match q {
                        FunctionRep::Rational(q) => rational.reps.push(q),
                        other => {
                            let line = rd.raw("rational", "rep").map(|(_, l)| l);
                            rd.err(line, format!("[rational] rep must be rational[...], got a {}", other.kind_name()));
                        }
                    }
                }
            } else {
                rational.a = rd.list("rational", "a", "0.5, 1, 4");
                rational.k = rd.list("rational", "k", "0");
            }
            rational.r = rd.list("rational", "r", "1, 2, 3");
            if rational.r.iter().any(|r| *r < 1) {
                let line = rd.raw("rational", "r").map(|(_, l)| l);
                rd.err(line, "[rational] r values must be >= 1");
            }
            rational.p = rd.opt("rational", "p");
            if rational.p.is_some_and(|p| !(p >= 4.0)) {
                let line = rd.raw("rational", "p").map(|(_, l)| l);
                rd.err(line, "[rational] p must be >= 4");
            }
        }
        Some(Command::Tail) => {
            tail.m = rd.positive("tail", "m", 2.0);
            tail.r = rd.get("tail", "r", 1u32);
            if tail.r < 1 {
                rd.err(None, "[tail] r must be >= 1");
            }
            tail.s = rd.opt("tail", "s");
            if let Some(s) = tail.s {
                if !(s > 0.0 && s < 1.0) {
                    let line = rd.raw("tail", "s").map(|(_, l)| l);
                    rd.err(line, format!("[tail] s must lie in (0, 1), got {s}"));
                }
            } else if function.is_none() {
                rd.err(None, "tail needs `s` in [tail] or a [function]");
            }
            tail.u_max = rd.positive("tail", "u_max", 1e3);
            if tail.u_max <= 3.0 {
                rd.err(None, "[tail] u_max must exceed 3");
            }
            tail.prefactor = rd.opt("tail", "prefactor");
        }
        Some(Command::Extremal) => {
            extremal_n = rd.required("extremal", "n").unwrap_or(1);
            if extremal_n < 1 {
                rd.err(None, "[extremal] n must be >= 1");
            }
            extremal_restarts = rd.get("extremal", "restarts", 4usize);
            if seed.is_none() && extremal_restarts > 0 {
                rd.err(None, "extremal restarts need `seed` in [experiment]");
            }
        }
        _ => {}
    }

    let output_path = rd.opt::<String>("output", "path").map(PathBuf::from);
    let format = rd.get("output", "format", Format::Json.name().to_string());
    let format = match format.parse::<Format>() {
        Ok(f) => f,
        Err(e) => {
            let line = rd.raw("output", "format").map(|(_, l)| l);
            rd.err(line, format!("[output] {e}"));
            Format::Json
        }
    };

    if !rd.errors.is_empty() {
        rd.errors.sort_by_key(|e| e.line.unwrap_or(usize::MAX));
        return Err(ConfigErrors(rd.errors));
    }
    // keep sections that only apply to other commands out of the echo
    let command = command.unwrap();
    let used: &[&str] = match command {
        Command::Norm => &["function", "norm"],
        Command::Transform => &[],
        Command::MarkovSweep => &["sweep", "norm"],
        Command::Equivalence => &[],
        Command::Rational => &["rational"],
        Command::Tail => &["tail", "function"],
        Command::Extremal => &["extremal", "norm"],
    };
    let mut echo = rd.echo;
    echo.retain(|s, _| ["experiment", "phi", "quadrature", "output"].contains(&s.as_str()) || used.contains(&s.as_str()));
    if let Some(PhiConfig::PowerLog { .. }) = phi {
        if let Some(p) = echo.get_mut("phi") {
            p.remove("nu");
        }
    }
    if let Some(PhiConfig::LogPower { .. }) = phi {
        if let Some(p) = echo.get_mut("phi") {
            p.retain(|k, _| k == "family" || k == "nu");
        }
    }
    Ok(ExperimentConfig {
        command,
        seed,
        bound_scale,
        phi: phi.unwrap(),
        function,
        norm,
        sweep_family,
        sweep_n,
        rational,
        tail,
        extremal_n,
        extremal_restarts,
        quadrature,
        output_path,
        format,
        echo,
    })
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigErrors> {
    parse_config_in(text, Path::new("."))
}
