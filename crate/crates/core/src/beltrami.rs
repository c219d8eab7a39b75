//! Doubly periodic Beltrami differentials on the flat torus.
//!
//! A field is either an exact constant (the harmonic Beltrami
//! differentials of the torus) or an `n x n` grid of samples in lattice
//! coordinates. Only constant fields generate closed-form paths in the
//! moduli space.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cnum::{format_complex, parse_complex};
use crate::error::{Error, Result};
use crate::harmonic::{scaled_measure, HopfDifferential};
use crate::moduli::{Modulus, MIN_IM};
use crate::spectral::{self, Multipliers};

/// Relative tolerance for deciding two moduli describe the same torus.
const SAME_TAU_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Constant(Complex64),
    Grid { n: usize, samples: Vec<Complex64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeltramiField {
    tau: Modulus,
    repr: Repr,
}

/// Named test functions of the lattice coordinates `(s, t)`.
pub const CATALOG: &[&str] = &[
    "one",
    "cos2pis",
    "sin2pis",
    "exp2pis",
    "cos2pit",
    "exp2pit",
    "cos2pis_cos2pit",
    "exp2pi_s_plus_t",
    "mixed_modes",
];

pub fn catalog_function(name: &str) -> Result<fn(f64, f64) -> Complex64> {
    let f: fn(f64, f64) -> Complex64 = match name {
        "one" => |_, _| Complex64::new(1.0, 0.0),
        "cos2pis" => |s, _| Complex64::new((2.0 * PI * s).cos(), 0.0),
        "sin2pis" => |s, _| Complex64::new((2.0 * PI * s).sin(), 0.0),
        "exp2pis" => |s, _| Complex64::cis(2.0 * PI * s),
        "cos2pit" => |_, t| Complex64::new((2.0 * PI * t).cos(), 0.0),
        "exp2pit" => |_, t| Complex64::cis(2.0 * PI * t),
        "cos2pis_cos2pit" => |s, t| Complex64::new((2.0 * PI * s).cos() * (2.0 * PI * t).cos(), 0.0),
        "exp2pi_s_plus_t" => |s, t| Complex64::cis(2.0 * PI * (s + t)),
        "mixed_modes" => |s, t| {
            0.3 * Complex64::cis(2.0 * PI * (2.0 * s - t))
                + 0.2 * (2.0 * PI * 3.0 * t).cos()
                + Complex64::new(0.0, 0.1) * (2.0 * PI * (s + 2.0 * t)).sin()
        },
        other => return Err(Error::UnknownFunction(other.to_string())),
    };
    Ok(f)
}

impl BeltramiField {
    pub fn constant(tau: Modulus, m: Complex64) -> Result<Self> {
        if !(m.re.is_finite() && m.im.is_finite()) {
            return Err(Error::NonFiniteSample);
        }
        Ok(Self {
            tau,
            repr: Repr::Constant(m),
        })
    }

    pub fn from_samples(tau: Modulus, n: usize, samples: Vec<Complex64>) -> Result<Self> {
        if !spectral::is_valid_grid(n) {
            return Err(Error::InvalidGridSize(n));
        }
        if samples.len() != n * n {
            return Err(Error::SampleCount {
                expected: n * n,
                got: samples.len(),
            });
        }
        if samples.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFiniteSample);
        }
        Ok(Self {
            tau,
            repr: Repr::Grid { n, samples },
        })
    }

    /// Samples `f(s, t)` at `(j / n, k / n)`.
    pub fn from_function(tau: Modulus, n: usize, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        if !spectral::is_valid_grid(n) {
            return Err(Error::InvalidGridSize(n));
        }
        let h = 1.0 / n as f64;
        let samples = (0..n)
            .flat_map(|k| (0..n).map(move |j| (j as f64 * h, k as f64 * h)))
            .map(|(s, t)| f(s, t))
            .collect();
        Self::from_samples(tau, n, samples)
    }

    /// `scale * f` for a named catalog function `f`.
    pub fn from_catalog(tau: Modulus, name: &str, n: usize, scale: Complex64) -> Result<Self> {
        let f = catalog_function(name)?;
        Self::from_function(tau, n, |s, t| scale * f(s, t))
    }

    pub fn tau(&self) -> Modulus {
        self.tau
    }

    /// Grid size, or `None` for an exact constant.
    pub fn grid_size(&self) -> Option<usize> {
        match &self.repr {
            Repr::Constant(_) => None,
            Repr::Grid { n, .. } => Some(*n),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.repr, Repr::Constant(_))
    }

    /// True when the field has no fluctuation about its mean. On the torus
    /// these are exactly the harmonic Beltrami differentials.
    pub fn is_harmonic(&self) -> bool {
        match &self.repr {
            Repr::Constant(_) => true,
            Repr::Grid { samples, .. } => {
                let m = spectral::mean(samples);
                let dev = samples.iter().map(|v| (v - m).norm()).fold(0.0, f64::max);
                dev <= 1e-14 * m.norm().max(1.0)
            }
        }
    }

    pub fn mean(&self) -> Complex64 {
        match &self.repr {
            Repr::Constant(m) => *m,
            Repr::Grid { samples, .. } => spectral::mean(samples),
        }
    }

    /// Samples on an `n`-grid; constants broadcast and coarser grids are
    /// interpolated spectrally.
    pub fn samples_on(&self, n: usize) -> Result<Vec<Complex64>> {
        if !spectral::is_valid_grid(n) {
            return Err(Error::InvalidGridSize(n));
        }
        match &self.repr {
            Repr::Constant(m) => Ok(vec![*m; n * n]),
            Repr::Grid { n: own, samples } if *own == n => Ok(samples.clone()),
            Repr::Grid { n: own, .. } if *own > n => Err(Error::GridTooCoarse {
                requested: n,
                field: *own,
            }),
            Repr::Grid { n: own, samples } => Ok(spectral::upsample(samples, *own, n)),
        }
    }

    /// Grid samples for a grid field; `None` for a constant.
    pub fn samples(&self) -> Option<&[Complex64]> {
        match &self.repr {
            Repr::Constant(_) => None,
            Repr::Grid { samples, .. } => Some(samples),
        }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let repr = match &self.repr {
            Repr::Constant(m) => Repr::Constant(c * m),
            Repr::Grid { n, samples } => Repr::Grid {
                n: *n,
                samples: samples.iter().map(|v| c * v).collect(),
            },
        };
        Self { tau: self.tau, repr }
    }

    fn derivative(&self, symbol: impl Fn(&Multipliers, i64, i64) -> Complex64) -> Self {
        let repr = match &self.repr {
            Repr::Constant(_) => Repr::Constant(Complex64::new(0.0, 0.0)),
            Repr::Grid { n, samples } => {
                let mult = Multipliers::new(self.tau);
                Repr::Grid {
                    n: *n,
                    samples: spectral::apply(samples, *n, |k1, k2| symbol(&mult, k1, k2)),
                }
            }
        };
        Self { tau: self.tau, repr }
    }

    /// Spectral `d/dzbar`.
    pub fn dzbar(&self) -> Self {
        self.derivative(|m, k1, k2| m.dzbar(k1, k2))
    }

    /// Spectral `d/dz`.
    pub fn dz(&self) -> Self {
        self.derivative(|m, k1, k2| m.dz(k1, k2))
    }

    pub fn sup_norm(&self) -> f64 {
        match &self.repr {
            Repr::Constant(m) => m.norm(),
            Repr::Grid { samples, .. } => samples.iter().map(|v| v.norm()).fold(0.0, f64::max),
        }
    }

    pub fn l2_mean_square(&self) -> f64 {
        match &self.repr {
            Repr::Constant(m) => m.norm_sqr(),
            Repr::Grid { samples, .. } => {
                samples.iter().map(|v| v.norm_sqr()).sum::<f64>() / samples.len() as f64
            }
        }
    }
}

/// Wire form: `{tau, N, samples: [[re, im], ...]}` for grids and
/// `{tau, constant: "a+bi"}` for constants.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FieldJson {
    Grid {
        tau: Modulus,
        #[serde(rename = "N")]
        n: usize,
        samples: Vec<[f64; 2]>,
    },
    Constant {
        tau: Modulus,
        constant: String,
    },
}

impl Serialize for BeltramiField {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let json = match &self.repr {
            Repr::Constant(m) => FieldJson::Constant {
                tau: self.tau,
                constant: format_complex(*m),
            },
            Repr::Grid { n, samples } => FieldJson::Grid {
                tau: self.tau,
                n: *n,
                samples: samples.iter().map(|v| [v.re, v.im]).collect(),
            },
        };
        json.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for BeltramiField {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match FieldJson::deserialize(de)? {
            FieldJson::Grid { tau, n, samples } => {
                let samples = samples.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
                BeltramiField::from_samples(tau, n, samples).map_err(D::Error::custom)
            }
            FieldJson::Constant { tau, constant } => {
                let m = parse_complex(&constant).map_err(D::Error::custom)?;
                BeltramiField::constant(tau, m).map_err(D::Error::custom)
            }
        }
    }
}

/// How a scenario names a field: `{"constant": "a+bi"}` or
/// `{"function": "cos2pis", "N": 64, "scale": "0+1i"}` (scale optional).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum FieldSpec {
    Constant {
        constant: String,
    },
    Function {
        function: String,
        #[serde(rename = "N")]
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<String>,
    },
}

impl FieldSpec {
    pub fn build(&self, tau: Modulus) -> Result<BeltramiField> {
        match self {
            FieldSpec::Constant { constant } => BeltramiField::constant(tau, parse_complex(constant)?),
            FieldSpec::Function { function, n, scale } => {
                let scale = match scale {
                    Some(s) => parse_complex(s)?,
                    None => Complex64::new(1.0, 0.0),
                };
                BeltramiField::from_catalog(tau, function, *n, scale)
            }
        }
    }
}

/// Modulus of the image of the torus under `z -> z + t m conj(z)`.
pub fn modulus_path_constant(tau: Modulus, m: Complex64, t: f64) -> Result<Modulus> {
    let tm = t * m;
    if tm.norm() >= 1.0 {
        return Err(Error::DegenerateDeformation(tm.norm()));
    }
    let z = tau.as_complex();
    let image = (z + tm * z.conj()) / (1.0 + tm);
    if !(image.im > MIN_IM) {
        return Err(Error::LeavesHalfPlane);
    }
    Modulus::from_complex(image)
}

/// `d tau / dt` at `t = 0` along [`modulus_path_constant`].
pub fn constant_tangent(tau: Modulus, m: Complex64) -> Complex64 {
    let z = tau.as_complex();
    m * (z.conj() - z)
}

fn check_unit(m: Complex64) -> Result<()> {
    if (m.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnitDirection(m.norm()));
    }
    Ok(())
}

/// Unit-speed Teichmüller geodesic through `tau` in the direction `m`.
pub fn teich_geodesic_constant(tau: Modulus, m: Complex64, t: f64) -> Result<Modulus> {
    check_unit(m)?;
    modulus_path_constant(tau, m, t.tanh())
}

/// `[[Phi mu]]` for the constant-coefficient quadratic differential `phi`.
pub fn pair_hopf(field: &BeltramiField, phi: &HopfDifferential, tau: Modulus) -> Result<Complex64> {
    if !field.tau().approx_eq(&tau, SAME_TAU_TOL) {
        return Err(Error::MismatchedModulus);
    }
    let mean = field.mean() * phi.coeff;
    Ok(Complex64::new(
        scaled_measure(tau, mean.re),
        scaled_measure(tau, mean.im),
    ))
}
