//! Closed-form geometry of the Teichmüller space of the torus.
//!
//! A point of the space is a modulus `tau` in the upper half-plane, the
//! flat torus `C / (Z + tau Z)`. A simple closed curve is a primitive
//! lattice vector `p + q tau`. Everything here is an explicit formula in
//! those two pieces of data.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cnum::{format_complex, parse_complex, parse_pair};
use crate::error::{Error, Result};

/// Smallest imaginary part accepted for a modulus.
pub const MIN_IM: f64 = 1e-12;

/// A marked flat torus, given by its modulus in the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Modulus {
    re: f64,
    im: f64,
}

impl Modulus {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::NonFiniteModulus);
        }
        if im <= MIN_IM {
            return Err(Error::NotInUpperHalfPlane(im));
        }
        Ok(Self { re, im })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    /// The point `i`, the square torus.
    pub fn square() -> Self {
        Self { re: 0.0, im: 1.0 }
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    /// Equality up to a relative tolerance, used to match objects that were
    /// built over "the same" torus through different arithmetic.
    pub fn approx_eq(&self, other: &Modulus, tol: f64) -> bool {
        let scale = self.as_complex().norm().max(other.as_complex().norm());
        (self.as_complex() - other.as_complex()).norm() <= tol * scale
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_complex(self.as_complex()))
    }
}

impl FromStr for Modulus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_complex(parse_complex(s)?)
    }
}

impl TryFrom<String> for Modulus {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Modulus> for String {
    fn from(m: Modulus) -> String {
        m.to_string()
    }
}

/// Isotopy class of an oriented simple closed curve: a primitive lattice
/// vector `p * 1 + q * tau`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[i64; 2]", into = "[i64; 2]")]
pub struct CurveClass {
    p: i64,
    q: i64,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl CurveClass {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        match gcd(p, q) {
            0 => Err(Error::ZeroCurve),
            1 => Ok(Self { p, q }),
            _ => Err(Error::NonPrimitiveCurve(p, q)),
        }
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// The lattice vector `p + q tau` of the geodesic representative.
    pub fn vector(&self, tau: Modulus) -> Complex64 {
        self.p as f64 + self.q as f64 * tau.as_complex()
    }

    /// The same curve with reversed orientation.
    pub fn reversed(&self) -> Self {
        Self {
            p: -self.p,
            q: -self.q,
        }
    }

    /// Orientation-free representative: `q > 0`, or `q == 0` and `p > 0`.
    pub fn canonical(&self) -> Self {
        if self.q > 0 || (self.q == 0 && self.p > 0) {
            *self
        } else {
            self.reversed()
        }
    }

    pub fn same_unoriented(&self, other: &CurveClass) -> bool {
        self.canonical() == other.canonical()
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.p, self.q)
    }
}

impl FromStr for CurveClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (p, q) = parse_pair(s)?;
        Self::new(p, q)
    }
}

impl TryFrom<[i64; 2]> for CurveClass {
    type Error = Error;

    fn try_from(v: [i64; 2]) -> Result<Self> {
        Self::new(v[0], v[1])
    }
}

impl From<CurveClass> for [i64; 2] {
    fn from(c: CurveClass) -> [i64; 2] {
        [c.p, c.q]
    }
}

/// An element of SL(2, Z) acting as a change of marking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingClass {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl MappingClass {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a * d - b * c;
        if det != 1 {
            return Err(Error::NotUnimodular(det));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self {
            a: 1,
            b: 0,
            c: 0,
            d: 1,
        }
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

/// `|p + q tau|^2 / Im tau`.
pub fn extremal_length(tau: Modulus, curve: CurveClass) -> f64 {
    curve.vector(tau).norm_sqr() / tau.im()
}

/// Modulus (height over circumference) of the maximal flat cylinder whose
/// core curve is in the class.
pub fn cylinder_modulus(tau: Modulus, curve: CurveClass) -> f64 {
    let w = curve.vector(tau);
    // height = area / circumference, modulus = height / circumference
    let circumference = w.norm();
    let height = tau.im() / circumference;
    height / circumference
}

/// Extremal length of the weighted curve `weight * curve`.
pub fn weighted_extremal_length(weight: f64, tau: Modulus, curve: CurveClass) -> Result<f64> {
    if !(weight.is_finite() && weight > 0.0) {
        return Err(Error::InvalidWeight(weight));
    }
    Ok(weight * weight * extremal_length(tau, curve))
}

/// `d^2 Ext / d tau d tau-bar` in the global coordinate `tau`.
pub fn levi_form(tau: Modulus, curve: CurveClass) -> f64 {
    let y = tau.im();
    curve.vector(tau).norm_sqr() / (2.0 * y * y * y)
}

/// The Levi form evaluated on the tangent vector `xi` (expressed in the
/// `tau` chart): `levi_form * |xi|^2`.
pub fn levi_form_on(tau: Modulus, curve: CurveClass, xi: Complex64) -> f64 {
    levi_form(tau, curve) * xi.norm_sqr()
}

/// Simultaneous change of marking on the modulus and the curve; extremal
/// length is invariant under it.
pub fn apply_mapping_class(
    tau: Modulus,
    curve: CurveClass,
    m: MappingClass,
) -> (Modulus, CurveClass) {
    let [a, b, c, d] = m.entries();
    let t = tau.as_complex();
    let image = (a as f64 * t + b as f64) / (c as f64 * t + d as f64);
    // Im of the image is Im(tau)/|c tau + d|^2 > 0, so this cannot fail for
    // moduli that are not already at the MIN_IM floor
    let image = Modulus {
        re: image.re,
        im: image.im,
    };
    let (p, q) = (curve.p(), curve.q());
    let curve = CurveClass {
        p: p * a - q * b,
        q: -p * c + q * d,
    };
    (image, curve)
}

/// Distance in the curvature -1 metric `|d tau| / Im tau`.
pub fn hyperbolic_distance(tau1: Modulus, tau2: Modulus) -> f64 {
    let diff = (tau1.as_complex() - tau2.as_complex()).norm_sqr();
    let arg = 1.0 + diff / (2.0 * tau1.im() * tau2.im());
    arg.acosh()
}

/// Result of the truncated sup-ratio distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KerckhoffDistance {
    pub distance: f64,
    pub maximizer: CurveClass,
    pub ratio: f64,
}

/// Half the log of the largest ratio `Ext_gamma(tau2) / Ext_gamma(tau1)`
/// over primitive classes with `|p|, |q| <= max_index`.
///
/// Classes are enumerated up to orientation, so the reported maximizer is
/// always in canonical form.
pub fn kerckhoff_distance(
    tau1: Modulus,
    tau2: Modulus,
    max_index: u32,
) -> Result<KerckhoffDistance> {
    if max_index < 1 {
        return Err(Error::InvalidMaxIndex);
    }
    let n = max_index as i64;
    let mut best: Option<(f64, CurveClass)> = None;
    for q in 0..=n {
        let p_range = if q == 0 { 1..=n } else { -n..=n };
        for p in p_range {
            if gcd(p, q) != 1 {
                continue;
            }
            let curve = CurveClass { p, q };
            let ratio = extremal_length(tau2, curve) / extremal_length(tau1, curve);
            if best.map_or(true, |(r, _)| ratio > r) {
                best = Some((ratio, curve));
            }
        }
    }
    let (ratio, maximizer) = best.expect("(1,0) is always enumerated");
    Ok(KerckhoffDistance {
        distance: 0.5 * ratio.ln().max(0.0),
        maximizer,
        ratio,
    })
}
