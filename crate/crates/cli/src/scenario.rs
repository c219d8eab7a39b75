//! Scenarios: a validated, serializable description of one CLI run.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use extremal_core::beltrami::FieldSpec;
use extremal_core::spectral::is_valid_grid;
use extremal_core::{CurveClass, Modulus, ToleranceProfile};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Ext,
    Levi,
    Vary1,
    Vary2,
    PairSum,
    SolveField,
    Eq11,
    Eq15,
    Distance,
    Bound,
    Sweep,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Ext => "ext",
            Command::Levi => "levi",
            Command::Vary1 => "vary1",
            Command::Vary2 => "vary2",
            Command::PairSum => "pair-sum",
            Command::SolveField => "solve-field",
            Command::Eq11 => "eq11",
            Command::Eq15 => "eq15",
            Command::Distance => "distance",
            Command::Bound => "bound",
            Command::Sweep => "sweep",
            Command::Verify => "verify",
        }
    }

    /// Scenario keys besides `command`, `out` and `format` that the command
    /// accepts.
    fn accepts(self) -> &'static [&'static str] {
        match self {
            Command::Ext => &["tau", "curve", "mu", "t"],
            Command::Levi => &["tau", "curve", "mu", "t", "step"],
            Command::Vary1 | Command::Vary2 => &["tau", "curve", "mu", "step"],
            Command::PairSum => &["tau", "curve", "mu"],
            Command::SolveField | Command::Eq15 => &["tau", "curve", "mu", "grid"],
            Command::Eq11 => &["tau", "curve", "mu", "grid", "tol"],
            Command::Distance => &["tau", "tau2", "max_pq"],
            Command::Bound => &["tau", "curve", "mu", "step"],
            Command::Sweep => &["curve", "re", "im"],
            Command::Verify => &["tol", "seed"],
        }
    }

    fn requires(self) -> &'static [&'static str] {
        match self {
            Command::Ext | Command::Levi => &["tau", "curve"],
            Command::Vary1 | Command::Vary2 | Command::PairSum => &["tau", "curve", "mu"],
            Command::SolveField | Command::Eq11 | Command::Eq15 | Command::Bound => &["tau", "curve", "mu"],
            Command::Distance => &["tau", "tau2"],
            Command::Sweep => &["curve", "re", "im"],
            Command::Verify => &[],
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Inclusive arithmetic range `lo:hi:step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Range {
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.lo + i as f64 * self.step).collect()
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts.as_slice() else {
            return Err(format!("expected lo:hi:step, got '{s}'"));
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("'{x}' is not a number"));
        let r = Range {
            lo: num(lo)?,
            hi: num(hi)?,
            step: num(step)?,
        };
        if !(r.lo.is_finite() && r.hi.is_finite() && r.step.is_finite()) {
            return Err("range bounds must be finite".into());
        }
        if r.step <= 0.0 || r.hi < r.lo {
            return Err(format!("need lo <= hi and step > 0, got '{s}'"));
        }
        if (r.hi - r.lo) / r.step > 1e6 {
            return Err(format!("range '{s}' has more than a million points"));
        }
        Ok(r)
    }
}

impl TryFrom<String> for Range {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<Range> for String {
    fn from(r: Range) -> String {
        format!("{}:{}:{}", r.lo, r.hi, r.step)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Modulus>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau2: Option<Modulus>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<FieldSpec>,
    #[serde(default, rename = "N", skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_pq: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub re: Option<Range>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Range>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tol: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

pub const DEFAULT_GRID: usize = 64;
pub const DEFAULT_MAX_PQ: u32 = 50;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_BOUND_STEP: f64 = 1e-3;

impl Scenario {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            tau: None,
            tau2: None,
            curve: None,
            mu: None,
            grid: None,
            t: None,
            step: None,
            max_pq: None,
            re: None,
            im: None,
            tol: BTreeMap::new(),
            seed: None,
            out: None,
            format: None,
        }
    }

    fn present(&self) -> Vec<&'static str> {
        let mut keys = Vec::new();
        let mut mark = |on: bool, key| {
            if on {
                keys.push(key)
            }
        };
        mark(self.tau.is_some(), "tau");
        mark(self.tau2.is_some(), "tau2");
        mark(self.curve.is_some(), "curve");
        mark(self.mu.is_some(), "mu");
        mark(self.grid.is_some(), "grid");
        mark(self.t.is_some(), "t");
        mark(self.step.is_some(), "step");
        mark(self.max_pq.is_some(), "max_pq");
        mark(self.re.is_some(), "re");
        mark(self.im.is_some(), "im");
        mark(!self.tol.is_empty(), "tol");
        mark(self.seed.is_some(), "seed");
        keys
    }

    /// Checks the parameters against the command's schema. Runs before any
    /// computation; a failure here is an argument error.
    pub fn validate(&self) -> Result<(), String> {
        let cmd = self.command;
        let present = self.present();
        if let Some(extra) = present.iter().find(|k| !cmd.accepts().contains(k)) {
            return Err(format!("{} does not accept {}", cmd, flag(extra)));
        }
        if let Some(missing) = cmd.requires().iter().find(|k| !present.contains(k)) {
            return Err(format!("{} requires {}", cmd, flag(missing)));
        }
        if let Some(FieldSpec::Function { n, .. }) = &self.mu {
            check_grid(*n, "--grid")?;
        }
        if let Some(n) = self.grid {
            check_grid(n, "--grid")?;
        }
        if let (Some(FieldSpec::Function { n, .. }), Some(g)) = (&self.mu, self.grid) {
            if *n != g {
                return Err(format!("--grid {g} does not match the field grid {n}"));
            }
        }
        if let Some(mu) = &self.mu {
            // resolves catalog names and complex literals
            mu.build(self.tau.unwrap_or_else(Modulus::square)).map_err(|e| format!("--mu: {e}"))?;
        }
        if matches!(cmd, Command::Ext | Command::Levi) && self.mu.is_some() != self.t.is_some() {
            return Err("--mu and --t go together".into());
        }
        if self.t.is_some() && !matches!(self.mu, Some(FieldSpec::Constant { .. })) {
            return Err("--t needs a constant --mu".into());
        }
        if matches!(cmd, Command::PairSum | Command::Bound) && !matches!(self.mu, Some(FieldSpec::Constant { .. })) {
            return Err(format!("{cmd} needs a constant --mu a+bi"));
        }
        if matches!(cmd, Command::Vary1 | Command::Vary2)
            && self.step.is_some()
            && !matches!(self.mu, Some(FieldSpec::Constant { .. }))
        {
            return Err("--step needs a constant --mu a+bi".into());
        }
        if let Some(t) = self.t {
            if !t.is_finite() {
                return Err(format!("--t must be finite, got {t}"));
            }
        }
        if let Some(h) = self.step {
            if !(h.is_finite() && h > 0.0) {
                return Err(format!("--step must be positive, got {h}"));
            }
        }
        if self.max_pq == Some(0) {
            return Err("--max-pq must be at least 1".into());
        }
        if let Some(im) = self.im {
            if im.lo <= 0.0 {
                return Err(format!(
                    "--im: tau must lie in the upper half-plane (got Im tau = {})",
                    im.lo
                ));
            }
        }
        self.profile()?;
        Ok(())
    }

    /// Default profile with the `--tol` overrides applied.
    pub fn profile(&self) -> Result<ToleranceProfile, String> {
        let mut p = ToleranceProfile::default();
        for (k, v) in &self.tol {
            p.set(k, *v).map_err(|e| format!("--tol: {e}"))?;
        }
        p.validate().map_err(|e| format!("--tol: {e}"))?;
        Ok(p)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(match self.command {
            Command::Sweep => Format::Csv,
            _ => Format::Json,
        })
    }
}

fn check_grid(n: usize, name: &str) -> Result<(), String> {
    if is_valid_grid(n) {
        Ok(())
    } else {
        Err(format!("{name} must be a power of two >= 4, got {n}"))
    }
}

fn flag(key: &str) -> String {
    match key {
        "tau2" => "a second --tau".into(),
        "max_pq" => "--max-pq".into(),
        "grid" => "--grid".into(),
        "mu" => "--mu or --mu-fn".into(),
        other => format!("--{other}"),
    }
}
