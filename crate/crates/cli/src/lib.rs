//! Command-line front end for `extremal-core`.
//!
//! Exit codes: 0 success, 1 computation failure (including failed asserted
//! checks), 2 argument error, 3 I/O error.

pub mod args;
pub mod scenario;

use std::ffi::OsString;
use std::fs;
use std::io::Write;

use clap::Parser;
use extremal_core::beltrami::{modulus_path_constant, BeltramiField, FieldSpec};
use extremal_core::cnum::{fmt17, format_complex};
use extremal_core::variation::{identity_eq11_with_tolerance, IdentityReport};
use extremal_core::verify::render_table;
use extremal_core::{
    extremal_length, fd_first_variation, fd_levi_form, fd_second_variation, first_variation, hyperbolic_distance,
    identity_eq15_evaluate, kerckhoff_distance, levi_form, pair_sum_levi, run_suite, second_variation,
    solve_variation_field, teich_bound_check, Complex64, CurveClass, Modulus,
};
use serde_json::{json, Map, Value};

pub use args::Cli;
pub use scenario::{Command, Format, Range, Scenario};
use scenario::{DEFAULT_BOUND_STEP, DEFAULT_GRID, DEFAULT_MAX_PQ, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Why a command line did not produce a scenario. `code` 0 means help or
/// version text, which goes to standard output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Halt {
    pub code: i32,
    pub message: String,
}

impl Halt {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

/// Parses `argv` (including the program name) into a validated scenario.
pub fn parse_arguments<I, T>(argv: I) -> Result<Scenario, Halt>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                Halt {
                    code: if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                        EXIT_USAGE
                    } else {
                        EXIT_OK
                    },
                    message: e.to_string(),
                }
            }
            _ => {
                let text = e.to_string();
                let line = text
                    .lines()
                    .map(str::trim)
                    .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
                    .filter(|l| !l.is_empty() && !l.starts_with("tip:"))
                    .collect::<Vec<_>>()
                    .join(" ");
                Halt::usage(line)
            }
        }
    })?;
    let scenario = match (cli.scenario, cli.command) {
        (Some(path), _) => {
            let text = fs::read_to_string(&path).map_err(|e| Halt {
                code: EXIT_IO,
                message: format!("error: cannot read scenario {}: {e}", path.display()),
            })?;
            serde_json::from_str::<Scenario>(&text)
                .map_err(|e| Halt::usage(format!("error: --scenario {}: {e}", path.display())))?
        }
        (None, Some(sub)) => sub.into_scenario().map_err(|e| Halt::usage(format!("error: {e}")))?,
        (None, None) => return Err(Halt::usage("error: a subcommand or --scenario is required")),
    };
    scenario.validate().map_err(|e| Halt::usage(format!("error: {e}")))?;
    Ok(scenario)
}

/// Result of a command before formatting.
#[derive(Debug, Clone, PartialEq)]
pub enum Rendered {
    Record(Map<String, Value>),
    Rows(Vec<Map<String, Value>>),
}

impl Rendered {
    pub fn json(&self) -> String {
        match self {
            Rendered::Record(m) => Value::Object(m.clone()).to_string(),
            Rendered::Rows(rows) => Value::Array(rows.iter().cloned().map(Value::Object).collect()).to_string(),
        }
    }

    pub fn csv(&self) -> String {
        let rows: Vec<&Map<String, Value>> = match self {
            Rendered::Record(m) => vec![m],
            Rendered::Rows(rows) => rows.iter().collect(),
        };
        let mut w = csv::Writer::from_writer(Vec::new());
        if let Some(first) = rows.first() {
            w.write_record(first.keys()).expect("in-memory write");
        }
        for row in rows {
            w.write_record(row.values().map(cell)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }

    pub fn text(&self, format: Format) -> String {
        match format {
            Format::Json => self.json() + "\n",
            Format::Csv => self.csv(),
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => fmt17(n.as_f64().unwrap_or(f64::NAN)),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

fn record(pairs: Vec<(&str, Value)>) -> Rendered {
    Rendered::Record(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}

fn report_map(r: &IdentityReport) -> Map<String, Value> {
    match serde_json::to_value(r).expect("reports serialize") {
        Value::Object(m) => m,
        _ => unreachable!("reports are objects"),
    }
}

fn curve_json(c: CurveClass) -> Value {
    json!([c.p(), c.q()])
}

struct Computed {
    output: Rendered,
    ok: bool,
    table: Option<String>,
}

fn done(output: Rendered) -> Computed {
    Computed {
        output,
        ok: true,
        table: None,
    }
}

fn constant_mu(s: &Scenario) -> Option<Complex64> {
    match (&s.mu, s.tau) {
        (Some(spec @ FieldSpec::Constant { .. }), Some(tau)) => spec.build(tau).ok().and_then(|f| {
            if f.is_constant() {
                Some(f.mean())
            } else {
                None
            }
        }),
        _ => None,
    }
}

fn field_grid(field: &BeltramiField, s: &Scenario) -> usize {
    field.grid_size().or(s.grid).unwrap_or(DEFAULT_GRID)
}

fn compute(s: &Scenario) -> extremal_core::Result<Computed> {
    // validate() has guaranteed the required keys
    let tau = || s.tau.expect("validated");
    let curve = || s.curve.expect("validated");
    let field = || s.mu.as_ref().expect("validated").build(tau());
    let m = || constant_mu(s).expect("validated");

    Ok(match s.command {
        Command::Ext | Command::Levi => {
            let at = match s.t {
                Some(t) => modulus_path_constant(tau(), m(), t)?,
                None => tau(),
            };
            let mut pairs = if s.command == Command::Ext {
                vec![("ext", json!(extremal_length(at, curve())))]
            } else {
                vec![("levi", json!(levi_form(at, curve())))]
            };
            if let Some(h) = s.step {
                pairs.push(("fd_levi", json!(fd_levi_form(at, curve(), h)?)));
            }
            if s.t.is_some() {
                pairs.push(("tau", json!(at.to_string())));
            }
            done(record(pairs))
        }
        Command::Vary1 => {
            let mut pairs = vec![("first_variation", json!(first_variation(tau(), curve(), &field()?)?))];
            if let Some(h) = s.step {
                pairs.push(("fd_first_variation", json!(fd_first_variation(tau(), curve(), m(), h)?)));
            }
            done(record(pairs))
        }
        Command::Vary2 => {
            let mut pairs = vec![("second_variation", json!(second_variation(tau(), curve(), &field()?)?))];
            if let Some(h) = s.step {
                pairs.push(("fd_second_variation", json!(fd_second_variation(tau(), curve(), m(), h)?)));
            }
            done(record(pairs))
        }
        Command::PairSum => {
            let v = pair_sum_levi(tau(), curve(), m())?;
            done(record(vec![("pair_sum", json!(v)), ("positive", json!(v > 0.0))]))
        }
        Command::SolveField => {
            let f = field()?;
            let n = field_grid(&f, s);
            let sol = solve_variation_field(tau(), curve(), &f, n)?;
            let ok = sol.residual_ok();
            let output = match s.format() {
                Format::Json => {
                    let values: Vec<f64> = (0..n * n).map(|i| sol.value(i % n, i / n)).collect();
                    record(vec![
                        ("tau", json!(tau().to_string())),
                        ("curve", curve_json(curve())),
                        ("N", json!(n)),
                        ("affine", json!([format_complex(sol.affine.0), format_complex(sol.affine.1)])),
                        ("residual", json!(sol.residual)),
                        ("rhs_norm", json!(sol.rhs_norm)),
                        ("values", json!(values)),
                    ])
                }
                Format::Csv => Rendered::Rows(
                    (0..n * n)
                        .map(|i| {
                            let (j, k) = (i % n, i / n);
                            [
                                ("s".to_string(), json!(j as f64 / n as f64)),
                                ("t".to_string(), json!(k as f64 / n as f64)),
                                ("value".to_string(), json!(sol.value(j, k))),
                            ]
                            .into_iter()
                            .collect()
                        })
                        .collect(),
                ),
            };
            Computed {
                output,
                ok,
                table: None,
            }
        }
        Command::Eq11 | Command::Eq15 => {
            let f = field()?;
            let n = field_grid(&f, s);
            let r = if s.command == Command::Eq11 {
                let tol = s.profile().expect("validated").spectral_tol;
                identity_eq11_with_tolerance(tau(), curve(), &f, n, tol)?
            } else {
                identity_eq15_evaluate(tau(), curve(), &f, n)?
            };
            Computed {
                ok: !r.asserted || r.pass,
                output: Rendered::Record(report_map(&r)),
                table: None,
            }
        }
        Command::Distance => {
            let (t1, t2) = (tau(), s.tau2.expect("validated"));
            let k = kerckhoff_distance(t1, t2, s.max_pq.unwrap_or(DEFAULT_MAX_PQ))?;
            done(record(vec![
                ("distance", json!(k.distance)),
                ("maximizer", curve_json(k.maximizer)),
                ("ratio", json!(k.ratio)),
                ("half_hyperbolic", json!(0.5 * hyperbolic_distance(t1, t2))),
            ]))
        }
        Command::Bound => {
            let r = teich_bound_check(tau(), curve(), m(), s.step.unwrap_or(DEFAULT_BOUND_STEP))?;
            Computed {
                ok: r.pass,
                output: Rendered::Record(report_map(&r)),
                table: None,
            }
        }
        Command::Sweep => {
            let c = curve();
            let (res, ims) = (s.re.expect("validated").points(), s.im.expect("validated").points());
            let mut rows = Vec::with_capacity(res.len() * ims.len());
            for &y in &ims {
                for &x in &res {
                    let t = Modulus::new(x, y)?;
                    rows.push(
                        [
                            ("re".to_string(), json!(x)),
                            ("im".to_string(), json!(y)),
                            ("ext".to_string(), json!(extremal_length(t, c))),
                            ("levi".to_string(), json!(levi_form(t, c))),
                        ]
                        .into_iter()
                        .collect(),
                    );
                }
            }
            done(Rendered::Rows(rows))
        }
        Command::Verify => {
            let profile = s.profile().expect("validated");
            let result = run_suite(&profile, s.seed.unwrap_or(DEFAULT_SEED))?;
            Computed {
                ok: result.all_passed,
                output: Rendered::Rows(result.reports.iter().map(report_map).collect()),
                table: Some(render_table(&result)),
            }
        }
    })
}

/// Runs a validated scenario, writing results to `stdout` (or the `out`
/// path) and diagnostics to `stderr`. Returns the exit code.
pub fn execute(s: &Scenario, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    if let Err(e) = s.validate() {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_USAGE;
    }
    let computed = match compute(s) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_COMPUTATION;
        }
    };
    let text = computed.output.text(s.format());
    let written = match &s.out {
        Some(path) => fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| format!("cannot write output: {e}")),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_IO;
    }
    if let Some(table) = computed.table {
        // the table shares stdout only when the data went to a file
        let sink: &mut dyn Write = if s.out.is_some() { stdout } else { stderr };
        let _ = sink.write_all(table.as_bytes());
    }
    if computed.ok {
        EXIT_OK
    } else {
        EXIT_COMPUTATION
    }
}

/// Full entry point: parse, execute, report.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_arguments(argv) {
        Ok(s) => execute(&s, stdout, stderr),
        Err(h) => {
            let sink: &mut dyn Write = if h.code == EXIT_OK { stdout } else { stderr };
            let msg = h.message.trim_end();
            let _ = writeln!(sink, "{msg}");
            h.code
        }
    }
}
