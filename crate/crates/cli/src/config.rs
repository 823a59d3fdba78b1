//! Run configuration files.
//!
//! Plain text with `[section]` headers and whitespace-separated `key=value`
//! pairs; a header may share its line with pairs. `#` starts a comment.
//!
//! ```text
//! [potential] family=coulomb charge=1
//! [domain]    kind=halfline l=0
//! [solve]     emin=-0.6 emax=-0.004
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use riccati_spectra::problem::natural_tails;
use riccati_spectra::{Domain, PotentialSpec, ProblemSpec, SpectrumConfig, TailClass};

/// A configuration problem tied to the line and key it was found at.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct ConfigError {
    /// 1-based line, 0 when the whole file is at fault.
    pub line: usize,
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "key `{}`: {}", self.key, self.message)
        } else {
            write!(f, "line {}: key `{}`: {}", self.line, self.key, self.message)
        }
    }
}

fn err(line: usize, key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError { line, key: key.to_string(), message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Solve,
    Scan,
    Count,
    Eigenfunction,
    Verify,
}

impl CommandKind {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "solve" => Self::Solve,
            "scan" => Self::Scan,
            "count" => Self::Count,
            "eigenfunction" => Self::Eigenfunction,
            "verify" => Self::Verify,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Solve {
        e_min: f64,
        e_max: f64,
    },
    Scan {
        e_min: f64,
        e_max: f64,
        samples: usize,
    },
    Count {
        e_ceiling: f64,
    },
    /// Level `n` searched for in `[e_min, e_max]`, sampled on `grid`
    /// (`lo, hi, points`) or on the working interval.
    Eigenfunction {
        n: usize,
        e_min: f64,
        e_max: f64,
        grid: Option<(f64, f64, usize)>,
    },
    Verify {
        e_min: f64,
        e_max: f64,
        fd_grid: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Csv,
}

/// Where energies in the file and in the output are measured from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnergyZero {
    #[default]
    Absolute,
    /// Relative to the continuum threshold of the problem.
    Threshold,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    pub command: Command,
    pub tolerances: SpectrumConfig,
    pub energy_zero: EnergyZero,
    /// `None` writes to standard output.
    pub output: Option<PathBuf>,
    pub format: Format,
    /// Optional `(E, Γ)` CSV written alongside `solve`.
    pub scan_out: Option<PathBuf>,
}

impl RunConfig {
    /// Offset added to energies read from the file and removed from the
    /// energies written out.
    pub fn energy_offset(&self) -> f64 {
        match self.energy_zero {
            EnergyZero::Absolute => 0.0,
            EnergyZero::Threshold => self.problem.threshold(),
        }
    }
}

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: usize,
}

#[derive(Debug, Clone, Default)]
struct Section {
    line: usize,
    entries: BTreeMap<String, Entry>,
}

const SECTIONS: [(&str, &[&str]); 4] = [
    (
        "potential",
        &[
            "family",
            "omega",
            "cutoff",
            "omega_left",
            "omega_right",
            "depth",
            "left",
            "right",
            "breakpoints",
            "values",
            "charge",
            "lambda",
            "samples",
        ],
    ),
    ("domain", &["kind", "l", "interval", "left_tail", "right_tail"]),
    ("solve", &["command", "emin", "emax", "samples", "ceiling", "n", "grid", "fd_grid", "energy_zero"]),
    (
        "tolerances",
        &[
            "rel_tol",
            "abs_tol",
            "max_steps",
            "initial_step",
            "e_tol",
            "residual_tol",
            "kappa",
            "scan_samples",
            "n_terms",
            "max_refine_depth",
        ],
    ),
];

struct Document {
    sections: BTreeMap<&'static str, Section>,
}

impl Document {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut sections: BTreeMap<&'static str, Section> = BTreeMap::new();
        let mut current: Option<&'static str> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("");
            for token in body.split_whitespace() {
                if let Some(name) = token.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
                    let Some((known, _)) = SECTIONS.iter().find(|(s, _)| *s == name) else {
                        return Err(err(line, name, "unknown section"));
                    };
                    if sections.contains_key(known) {
                        return Err(err(line, name, "section appears twice"));
                    }
                    sections.insert(known, Section { line, entries: BTreeMap::new() });
                    current = Some(known);
                    continue;
                }
                let Some((key, value)) = token.split_once('=') else {
                    return Err(err(line, token, "expected key=value"));
                };
                let Some(section) = current else {
                    return Err(err(line, key, "key outside any section"));
                };
                let allowed = SECTIONS.iter().find(|(s, _)| *s == section).map(|(_, k)| *k).unwrap_or(&[]);
                if !allowed.contains(&key) {
                    return Err(err(line, key, format!("unknown key in [{section}]")));
                }
                if value.is_empty() {
                    return Err(err(line, key, "empty value"));
                }
                let entries = &mut sections.get_mut(section).expect("section registered").entries;
                if entries.contains_key(key) {
                    return Err(err(line, key, "key given twice"));
                }
                entries.insert(key.to_string(), Entry { value: value.to_string(), line });
            }
        }
        Ok(Self { sections })
    }

    fn entry(&self, section: &str, key: &str) -> Option<&Entry> {
        self.sections.get(section).and_then(|s| s.entries.get(key))
    }

    fn require(&self, section: &str, key: &str) -> Result<&Entry, ConfigError> {
        self.entry(section, key).ok_or_else(|| {
            let line = self.sections.get(section).map_or(0, |s| s.line);
            err(line, key, format!("missing required key in [{section}]"))
        })
    }

    fn string(&self, section: &str, key: &str) -> Option<(&str, usize)> {
        self.entry(section, key).map(|e| (e.value.as_str(), e.line))
    }

    fn opt_f64(&self, section: &str, key: &str) -> Result<Option<f64>, ConfigError> {
        self.entry(section, key).map(|e| number(e, key)).transpose()
    }

    fn f64(&self, section: &str, key: &str) -> Result<f64, ConfigError> {
        number(self.require(section, key)?, key)
    }

    fn opt_usize(&self, section: &str, key: &str) -> Result<Option<usize>, ConfigError> {
        self.entry(section, key)
            .map(|e| e.value.parse::<usize>().map_err(|_| err(e.line, key, format!("`{}` is not a count", e.value))))
            .transpose()
    }

    fn list(&self, section: &str, key: &str) -> Result<Vec<f64>, ConfigError> {
        let e = self.require(section, key)?;
        e.value
            .split(',')
            .map(|v| v.parse::<f64>().map_err(|_| err(e.line, key, format!("`{v}` is not a number"))))
            .collect()
    }
}

fn number(e: &Entry, key: &str) -> Result<f64, ConfigError> {
    match e.value.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(err(e.line, key, format!("`{}` is not a finite number", e.value))),
    }
}

fn potential(doc: &Document) -> Result<PotentialSpec, ConfigError> {
    let family = doc.require("potential", "family")?;
    let line = family.line;
    let p = match family.value.as_str() {
        "truncated_oscillator" => PotentialSpec::TruncatedOscillator {
            omega: doc.f64("potential", "omega")?,
            cutoff_a: doc.f64("potential", "cutoff")?,
        },
        "hybrid_oscillator" => {
            let both = doc.opt_f64("potential", "omega")?;
            let side = |key| match (doc.opt_f64("potential", key)?, both) {
                (Some(w), _) | (None, Some(w)) => Ok(w),
                (None, None) => doc.f64("potential", key),
            };
            PotentialSpec::HybridOscillator { omega_left: side("omega_left")?, omega_right: side("omega_right")? }
        }
        "square_well" => PotentialSpec::SquareWell {
            depth: doc.f64("potential", "depth")?,
            left: doc.f64("potential", "left")?,
            right: doc.f64("potential", "right")?,
        },
        "piecewise_constant" => PotentialSpec::PiecewiseConstant {
            breakpoints: doc.list("potential", "breakpoints")?,
            values: doc.list("potential", "values")?,
        },
        "coulomb" => PotentialSpec::Coulomb { charge: doc.opt_f64("potential", "charge")?.unwrap_or(1.0) },
        "yukawa" => PotentialSpec::Yukawa { screening_lambda: doc.f64("potential", "lambda")? },
        "quark" => PotentialSpec::QuarkHybrid { omega: doc.f64("potential", "omega")? },
        "tabulated" => {
            let e = doc.require("potential", "samples")?;
            let samples = e
                .value
                .split(',')
                .map(|pair| {
                    let parsed = pair.split_once(':').and_then(|(t, v)| Some((t.parse().ok()?, v.parse().ok()?)));
                    parsed.ok_or_else(|| err(e.line, "samples", format!("`{pair}` is not a t:V pair")))
                })
                .collect::<Result<Vec<(f64, f64)>, _>>()?;
            PotentialSpec::Tabulated { samples }
        }
        other => return Err(err(line, "family", format!("unknown potential family `{other}`"))),
    };
    p.validate().map_err(|e| err(line, "family", e.to_string()))?;
    Ok(p)
}

fn tail_name(t: &TailClass) -> &'static str {
    match t {
        TailClass::ConstantLevel { .. } => "constant",
        TailClass::OscillatorTail { .. } => "oscillator",
        TailClass::CoulombTail { .. } => "coulomb",
        TailClass::YukawaTail { .. } => "yukawa",
        TailClass::QuarkTail { .. } => "quark",
        TailClass::CoulombZeroSingularity { .. } => "coulomb_zero",
        TailClass::YukawaZeroSingularity { .. } => "yukawa_zero",
        TailClass::QuarkZeroSingularity { .. } => "quark_zero",
    }
}

fn problem(doc: &Document) -> Result<ProblemSpec, ConfigError> {
    let potential = potential(doc)?;
    let kind = doc.require("domain", "kind")?;
    let domain = match kind.value.as_str() {
        "wholeline" => Domain::WholeLine,
        "halfline" => {
            let e = doc.require("domain", "l")?;
            let l = e
                .value
                .parse::<u32>()
                .map_err(|_| err(e.line, "l", format!("`{}` is not a nonnegative integer", e.value)))?;
            Domain::HalfLine { l }
        }
        other => return Err(err(kind.line, "kind", format!("unknown domain kind `{other}`"))),
    };
    let (left, right) = natural_tails(&potential, domain).map_err(|e| err(kind.line, "kind", e.to_string()))?;
    for (key, natural) in [("left_tail", left), ("right_tail", right)] {
        if let Some((given, line)) = doc.string("domain", key) {
            if given != tail_name(&natural) {
                return Err(err(
                    line,
                    key,
                    format!(
                        "tail class `{given}` does not match the potential, which has `{}` there",
                        tail_name(&natural)
                    ),
                ));
            }
        }
    }
    let mut problem = ProblemSpec::new(potential, domain).map_err(|e| err(kind.line, "kind", e.to_string()))?;
    if let Some(e) = doc.entry("domain", "interval") {
        let ab: Vec<f64> = doc.list("domain", "interval")?;
        if ab.len() != 2 {
            return Err(err(e.line, "interval", "expected two numbers a,b"));
        }
        problem = problem.with_interval(ab[0], ab[1]).map_err(|x| err(e.line, "interval", x.to_string()))?;
    }
    Ok(problem)
}

fn tolerances(doc: &Document) -> Result<SpectrumConfig, ConfigError> {
    let mut cfg = SpectrumConfig::default();
    let t = "tolerances";
    if let Some(v) = doc.opt_f64(t, "rel_tol")? {
        cfg.integrator.rel_tol = v;
    }
    if let Some(v) = doc.opt_f64(t, "abs_tol")? {
        cfg.integrator.abs_tol = v;
    }
    if let Some(v) = doc.opt_usize(t, "max_steps")? {
        cfg.integrator.max_steps = v;
    }
    if let Some(v) = doc.opt_f64(t, "initial_step")? {
        cfg.integrator.initial_step = v;
    }
    if let Some(v) = doc.opt_f64(t, "e_tol")? {
        cfg.e_tol = v;
    }
    if let Some(v) = doc.opt_f64(t, "residual_tol")? {
        cfg.residual_tol = v;
    }
    if let Some(v) = doc.opt_f64(t, "kappa")? {
        cfg.kappa = v;
    }
    if let Some(v) = doc.opt_usize(t, "scan_samples")? {
        cfg.scan_samples = v;
    }
    if let Some(v) = doc.opt_usize(t, "n_terms")? {
        cfg.n_terms = v;
    }
    if let Some(v) = doc.opt_usize(t, "max_refine_depth")? {
        cfg.max_refine_depth = v;
    }
    let line = doc.sections.get(t).map_or(0, |s| s.line);
    cfg.validate().map_err(|e| err(line, "tolerances", e.to_string()))?;
    Ok(cfg)
}

fn range(doc: &Document) -> Result<(f64, f64), ConfigError> {
    let (e_min, e_max) = (doc.f64("solve", "emin")?, doc.f64("solve", "emax")?);
    if !(e_min < e_max) {
        let line = doc.require("solve", "emax")?.line;
        return Err(err(line, "emax", format!("emax must exceed emin, got [{e_min}, {e_max}]")));
    }
    Ok((e_min, e_max))
}

fn command(doc: &Document, kind: CommandKind) -> Result<Command, ConfigError> {
    Ok(match kind {
        CommandKind::Solve => {
            let (e_min, e_max) = range(doc)?;
            Command::Solve { e_min, e_max }
        }
        CommandKind::Scan => {
            let (e_min, e_max) = range(doc)?;
            let samples = doc.opt_usize("solve", "samples")?.unwrap_or(200);
            if samples < 2 {
                return Err(err(doc.require("solve", "samples")?.line, "samples", "need at least two samples"));
            }
            Command::Scan { e_min, e_max, samples }
        }
        CommandKind::Count => Command::Count { e_ceiling: doc.f64("solve", "ceiling")? },
        CommandKind::Eigenfunction => {
            let (e_min, e_max) = range(doc)?;
            let n = doc.opt_usize("solve", "n")?.ok_or_else(|| doc.require("solve", "n").unwrap_err())?;
            let grid = match doc.entry("solve", "grid") {
                None => None,
                Some(e) => {
                    let g = doc.list("solve", "grid")?;
                    if g.len() != 3 || !(g[0] < g[1]) || g[2] < 2.0 || g[2].fract() != 0.0 {
                        return Err(err(e.line, "grid", "expected lo,hi,points with lo < hi and at least two points"));
                    }
                    Some((g[0], g[1], g[2] as usize))
                }
            };
            Command::Eigenfunction { n, e_min, e_max, grid }
        }
        CommandKind::Verify => {
            let (e_min, e_max) = range(doc)?;
            let fd_grid = doc.opt_usize("solve", "fd_grid")?.unwrap_or(8000);
            if fd_grid < 64 {
                return Err(err(doc.require("solve", "fd_grid")?.line, "fd_grid", "must be at least 64"));
            }
            Command::Verify { e_min, e_max, fd_grid }
        }
    })
}

/// Parses a configuration; the command comes from `command=` in `[solve]`
/// (default `solve`).
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let doc = Document::parse(text)?;
    let kind = match doc.string("solve", "command") {
        None => CommandKind::Solve,
        Some((s, line)) => {
            CommandKind::parse(s).ok_or_else(|| err(line, "command", format!("unknown command `{s}`")))?
        }
    };
    build(&doc, kind)
}

/// Parses a configuration for an explicitly chosen command, ignoring any
/// `command=` key.
pub fn parse_config_for(text: &str, kind: CommandKind) -> Result<RunConfig, ConfigError> {
    build(&Document::parse(text)?, kind)
}

fn build(doc: &Document, kind: CommandKind) -> Result<RunConfig, ConfigError> {
    let problem = problem(doc)?;
    let energy_zero = match doc.string("solve", "energy_zero") {
        None | Some(("absolute", _)) => EnergyZero::Absolute,
        Some(("threshold", line)) => {
            if !problem.threshold().is_finite() {
                return Err(err(line, "energy_zero", "this problem has no continuum threshold"));
            }
            EnergyZero::Threshold
        }
        Some((other, line)) => {
            return Err(err(line, "energy_zero", format!("expected absolute or threshold, got `{other}`")))
        }
    };
    Ok(RunConfig {
        problem,
        command: command(doc, kind)?,
        tolerances: tolerances(doc)?,
        energy_zero,
        output: None,
        format: Format::Table,
        scan_out: None,
    })
}
