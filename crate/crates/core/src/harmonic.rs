//! The equivariant harmonic map from a flat torus to the real line (the
//! R-tree of a simple closed curve), its energy and its Hopf differential.
//!
//! On the torus the map is linear: `omega(z) = Re(a z)`, with `a` fixed by
//! the translation lengths of the two lattice generators.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::moduli::{CurveClass, Modulus};

/// Scale between the `dz dz-bar` integrals used throughout and Lebesgue
/// area: `[[f]] = MEASURE_SCALE * integral of f dA` over a fundamental
/// domain. Chosen so the energy of the harmonic map equals extremal length.
pub const MEASURE_SCALE: f64 = 4.0;

/// `[[f]]` for a quantity whose grid mean over the torus is `mean`.
pub fn scaled_measure(tau: Modulus, mean: f64) -> f64 {
    MEASURE_SCALE * tau.im() * mean
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicMapTorus {
    pub tau: Modulus,
    pub curve: CurveClass,
    pub coeff: Complex64,
    /// Translation lengths of the generators `1` and `tau`.
    pub periods: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HopfDifferential {
    /// Coefficient of `dz^2`.
    pub coeff: Complex64,
}

/// Solves `Re(a) = t1`, `Re(a tau) = t2` for `a`. The system has
/// determinant `Im tau > 0`.
pub(crate) fn solve_periods(lambda1: Complex64, lambda2: Complex64, t1: f64, t2: f64) -> Complex64 {
    // Re(a l) = a.re l.re - a.im l.im
    let det = -lambda1.re * lambda2.im + lambda1.im * lambda2.re;
    let re = (-t1 * lambda2.im + lambda1.im * t2) / det;
    let im = (lambda1.re * t2 - lambda2.re * t1) / det;
    Complex64::new(re, im)
}

/// The harmonic map for `curve` with `omega(0) = 0` and periods `(q, -p)`.
pub fn build_harmonic_map(tau: Modulus, curve: CurveClass) -> HarmonicMapTorus {
    let periods = [curve.q() as f64, -curve.p() as f64];
    let coeff = solve_periods(Complex64::new(1.0, 0.0), tau.as_complex(), periods[0], periods[1]);
    HarmonicMapTorus {
        tau,
        curve,
        coeff,
        periods,
    }
}

impl HarmonicMapTorus {
    pub fn eval(&self, z: Complex64) -> f64 {
        (self.coeff * z).re
    }

    /// Value at lattice coordinates `(s, t)`, i.e. at `z = s + t tau`.
    pub fn eval_lattice(&self, s: f64, t: f64) -> f64 {
        self.eval(s + t * self.tau.as_complex())
    }

    pub fn omega_z(&self) -> Complex64 {
        self.coeff / 2.0
    }

    pub fn omega_zbar(&self) -> Complex64 {
        self.coeff.conj() / 2.0
    }
}

/// `[[|omega_z|^2 + |omega_zbar|^2]] / 2`, which is `|a|^2 Im tau`.
pub fn energy(map: &HarmonicMapTorus) -> f64 {
    let density = 0.5 * (map.omega_z().norm_sqr() + map.omega_zbar().norm_sqr());
    scaled_measure(map.tau, density)
}

pub fn hopf(map: &HarmonicMapTorus) -> HopfDifferential {
    HopfDifferential {
        coeff: map.omega_z() * map.omega_z(),
    }
}

/// `|omega_z|^2 - |omega_zbar|^2`; zero for a real-valued map.
pub fn jacobian_defect(map: &HarmonicMapTorus) -> f64 {
    map.omega_z().norm_sqr() - map.omega_zbar().norm_sqr()
}
