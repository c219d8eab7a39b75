//! Command-line grammar. Every subcommand parses into a [`Scenario`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use extremal_core::beltrami::FieldSpec;
use extremal_core::cnum::{format_complex, parse_complex};
use extremal_core::{Complex64, CurveClass, Modulus};

use crate::scenario::{Command, Format, Range, Scenario};

#[derive(Debug, Parser)]
#[command(
    name = "extremal",
    version,
    about = "Extremal length, harmonic maps and Beltrami variations on the torus",
    subcommand_required = false,
    arg_required_else_help = true,
    args_conflicts_with_subcommands = true
)]
pub struct Cli {
    /// Read the whole run from a JSON scenario file instead of flags
    #[arg(long, value_name = "FILE")]
    pub scenario: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Sub>,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Extremal length |p + q tau|^2 / Im tau
    Ext(PointArgs),
    /// Levi form (1/4 Laplacian in the tau chart) of extremal length
    Levi(LeviArgs),
    /// First variation of extremal length along a Beltrami field
    Vary1(VaryArgs),
    /// Second variation of extremal length along a harmonic Beltrami field
    Vary2(VaryArgs),
    /// Sum of second variations along mu and i mu (twice the Levi form on the tangent)
    PairSum(PairArgs),
    /// Solve the linearized harmonic map equation for the variation field
    SolveField(FieldArgs),
    /// Check the integration-by-parts identity for the variation field
    Eq11(Eq11Args),
    /// Evaluate both sides of the pair-sum integrand identity
    Eq15(FieldArgs),
    /// Sup-ratio (Kerckhoff) distance by enumeration of curves
    Distance(DistanceArgs),
    /// Second difference of extremal length along a unit Teichmüller geodesic
    Bound(BoundArgs),
    /// Extremal length and Levi form over a grid of moduli (CSV)
    Sweep(SweepArgs),
    /// Run the full verification suite
    Verify(VerifyArgs),
}

fn complex(s: &str) -> Result<Complex64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

fn tol_pair(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got '{s}'"))?;
    let v = v.trim().parse::<f64>().map_err(|_| format!("'{v}' is not a number"))?;
    Ok((k.trim().to_string(), v))
}

#[derive(Debug, Args)]
pub struct TauCurve {
    /// Lattice modulus, a complex number a+bi with b > 0
    #[arg(long, value_name = "a+bi", allow_hyphen_values = true)]
    pub tau: Modulus,
    /// Primitive curve class p,q (the curve p + q tau)
    #[arg(long, value_name = "p,q", allow_hyphen_values = true)]
    pub curve: CurveClass,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the result to this file instead of standard output
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Output format [default: json; csv for sweep]
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct MuArgs {
    /// Constant Beltrami coefficient a+bi (dimensionless, |mu| < 1 along paths)
    #[arg(long, value_name = "a+bi", value_parser = complex, allow_hyphen_values = true,
          conflicts_with = "mu_fn")]
    pub mu: Option<Complex64>,
    /// Catalog field: one, cos2pis, sin2pis, exp2pis, cos2pit, exp2pit,
    /// cos2pis_cos2pit, exp2pi_s_plus_t, mixed_modes
    #[arg(long, value_name = "NAME", requires = "grid")]
    pub mu_fn: Option<String>,
    /// Grid size N (power of two >= 4); sample points per period
    #[arg(long, value_name = "N")]
    pub grid: Option<usize>,
    /// Complex factor applied to the catalog field [default: 1+0i]
    #[arg(long, value_name = "a+bi", value_parser = complex, allow_hyphen_values = true,
          requires = "mu_fn")]
    pub mu_scale: Option<Complex64>,
}

impl MuArgs {
    fn spec(&self) -> Option<FieldSpec> {
        if let Some(m) = self.mu {
            return Some(FieldSpec::Constant {
                constant: format_complex(m),
            });
        }
        self.mu_fn.as_ref().map(|name| FieldSpec::Function {
            function: name.clone(),
            n: self.grid.unwrap_or(0),
            scale: self.mu_scale.map(format_complex),
        })
    }

    /// Grid size given on its own, i.e. not consumed by `--mu-fn`.
    fn free_grid(&self) -> Option<usize> {
        if self.mu_fn.is_some() {
            None
        } else {
            self.grid
        }
    }
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub at: TauCurve,
    /// Constant Beltrami coefficient a+bi; with --t, evaluate at the deformed modulus
    #[arg(long, value_name = "a+bi", value_parser = complex, allow_hyphen_values = true, requires = "t")]
    pub mu: Option<Complex64>,
    /// Path parameter t (dimensionless, |t mu| < 1) along z -> z + t mu conj(z)
    #[arg(long, value_name = "T", allow_hyphen_values = true, requires = "mu")]
    pub t: Option<f64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct LeviArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Also report the five-point finite-difference Levi form with this step in tau [no default, at most 1e-3]
    #[arg(long, value_name = "H")]
    pub step: Option<f64>,
}

#[derive(Debug, Args)]
pub struct VaryArgs {
    #[command(flatten)]
    pub at: TauCurve,
    #[command(flatten)]
    pub mu: MuArgs,
    /// Also report the central finite difference with this step in t [no default]
    #[arg(long, value_name = "H")]
    pub step: Option<f64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[command(flatten)]
    pub at: TauCurve,
    /// Constant Beltrami coefficient a+bi, nonzero
    #[arg(long, value_name = "a+bi", value_parser = complex, allow_hyphen_values = true)]
    pub mu: Complex64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[command(flatten)]
    pub at: TauCurve,
    #[command(flatten)]
    pub mu: MuArgs,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct Eq11Args {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Tolerance override key=value (repeatable); eq11 reads spectral_tol [default: 1e-10]
    #[arg(long = "tol", value_name = "KEY=VALUE", value_parser = tol_pair)]
    pub tol: Vec<(String, f64)>,
}

#[derive(Debug, Args)]
pub struct DistanceArgs {
    /// The two moduli, given as --tau a+bi --tau c+di
    #[arg(long, value_name = "a+bi", num_args = 1, required = true, allow_hyphen_values = true)]
    pub tau: Vec<Modulus>,
    /// Enumerate curves with |p|, |q| <= N [default: 50]
    #[arg(long, value_name = "N")]
    pub max_pq: Option<u32>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub at: TauCurve,
    /// Unit-modulus direction a+bi of the geodesic
    #[arg(long, value_name = "a+bi", value_parser = complex, allow_hyphen_values = true)]
    pub mu: Complex64,
    /// Second-difference step in geodesic time [default: 1e-3, at most 1e-2]
    #[arg(long, value_name = "H")]
    pub step: Option<f64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Primitive curve class p,q
    #[arg(long, value_name = "p,q", allow_hyphen_values = true)]
    pub curve: CurveClass,
    /// Range of Re tau, lo:hi:step (inclusive)
    #[arg(long, value_name = "LO:HI:STEP", allow_hyphen_values = true)]
    pub re: Range,
    /// Range of Im tau, lo:hi:step (inclusive, lo > 0)
    #[arg(long, value_name = "LO:HI:STEP", allow_hyphen_values = true)]
    pub im: Range,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Tolerance override key=value (repeatable). Keys and defaults:
    /// fd_step_first=1e-4, fd_step_second=1e-3, rel_tol_first=1e-6,
    /// rel_tol_second=1e-5, spectral_tol=1e-10, exact_tol=1e-12
    #[arg(long = "tol", value_name = "KEY=VALUE", value_parser = tol_pair)]
    pub tol: Vec<(String, f64)>,
    /// Sampling seed [default: 42]
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub output: Output,
}

fn with_output(mut s: Scenario, o: Output) -> Scenario {
    s.out = o.out;
    s.format = o.format;
    s
}

fn with_point(mut s: Scenario, at: TauCurve) -> Scenario {
    s.tau = Some(at.tau);
    s.curve = Some(at.curve);
    s
}

fn with_field(s: Scenario, a: FieldArgs) -> Scenario {
    let mut s = with_output(with_point(s, a.at), a.output);
    s.mu = a.mu.spec();
    s.grid = a.mu.free_grid();
    s
}

fn point(cmd: Command, a: PointArgs) -> Scenario {
    let mut s = with_output(with_point(Scenario::new(cmd), a.at), a.output);
    s.mu = a.mu.map(|m| FieldSpec::Constant {
        constant: format_complex(m),
    });
    s.t = a.t;
    s
}

fn vary(cmd: Command, a: VaryArgs) -> Scenario {
    let mut s = with_field(
        Scenario::new(cmd),
        FieldArgs {
            at: a.at,
            mu: a.mu,
            output: a.output,
        },
    );
    s.step = a.step;
    s
}

fn constant(m: Complex64) -> Option<FieldSpec> {
    Some(FieldSpec::Constant {
        constant: format_complex(m),
    })
}

impl Sub {
    pub fn into_scenario(self) -> Result<Scenario, String> {
        let s = match self {
            Sub::Ext(a) => point(Command::Ext, a),
            Sub::Levi(a) => {
                let mut s = point(Command::Levi, a.point);
                s.step = a.step;
                s
            }
            Sub::Vary1(a) => vary(Command::Vary1, a),
            Sub::Vary2(a) => vary(Command::Vary2, a),
            Sub::PairSum(a) => {
                let mut s = with_output(with_point(Scenario::new(Command::PairSum), a.at), a.output);
                s.mu = constant(a.mu);
                s
            }
            Sub::SolveField(a) => with_field(Scenario::new(Command::SolveField), a),
            Sub::Eq11(a) => {
                let mut s = with_field(Scenario::new(Command::Eq11), a.field);
                s.tol = a.tol.into_iter().collect();
                s
            }
            Sub::Eq15(a) => with_field(Scenario::new(Command::Eq15), a),
            Sub::Distance(a) => {
                let [t1, t2] = a.tau.as_slice() else {
                    return Err(format!("--tau: distance takes exactly two moduli, got {}", a.tau.len()));
                };
                let mut s = with_output(Scenario::new(Command::Distance), a.output);
                s.tau = Some(*t1);
                s.tau2 = Some(*t2);
                s.max_pq = a.max_pq;
                s
            }
            Sub::Bound(a) => {
                let mut s = with_output(with_point(Scenario::new(Command::Bound), a.at), a.output);
                s.mu = constant(a.mu);
                s.step = a.step;
                s
            }
            Sub::Sweep(a) => {
                let mut s = with_output(Scenario::new(Command::Sweep), a.output);
                s.curve = Some(a.curve);
                s.re = Some(a.re);
                s.im = Some(a.im);
                s
            }
            Sub::Verify(a) => {
                let mut s = with_output(Scenario::new(Command::Verify), a.output);
                s.tol = a.tol.into_iter().collect();
                s.seed = a.seed;
                s
            }
        };
        Ok(s)
    }
}

