//! Extremal length on the torus model of Teichmüller space.
//!
//! The crate computes extremal length of simple closed curves on flat tori,
//! the equivariant harmonic maps to the associated R-trees, their Hopf
//! differentials, and the first and second variations of extremal length
//! along Beltrami deformations. Every closed form is paired with an
//! independent finite-difference, enumeration or spectral oracle in
//! [`verify`].

pub mod beltrami;
pub mod cnum;
pub mod error;
pub mod harmonic;
pub mod moduli;
pub mod spectral;
pub mod variation;
pub mod verify;

pub use beltrami::{
    constant_tangent, modulus_path_constant, pair_hopf, teich_geodesic_constant, BeltramiField, FieldSpec,
};
pub use error::{Error, Result};
pub use harmonic::{build_harmonic_map, energy, hopf, jacobian_defect, HarmonicMapTorus, HopfDifferential, MEASURE_SCALE};
pub use moduli::{
    apply_mapping_class, cylinder_modulus, extremal_length, hyperbolic_distance, kerckhoff_distance, levi_form,
    levi_form_on, weighted_extremal_length, CurveClass, KerckhoffDistance, MappingClass, Modulus,
};
pub use num_complex::Complex64;
pub use variation::{
    first_variation, identity_eq11_check, identity_eq15_evaluate, pair_sum_levi, second_variation,
    second_variation_constant, solve_variation_field, teich_bound_check, IdentityReport, VariationField,
};
pub use verify::{fd_first_variation, fd_levi_form, fd_second_variation, run_suite, SuiteResult, ToleranceProfile};
