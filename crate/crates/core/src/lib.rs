//! Fractional Hausdorff operators on the real line.
pub mod cli;
pub mod error;
pub mod exponents;
pub mod fourier;
pub mod function;
pub mod grid;
pub mod hardy_space;
pub mod inequalities;
pub mod kernels;
pub mod norms;
pub mod operator;
pub mod quad;
pub mod report;
pub mod weights;

pub use error::{Error, Result};
pub use exponents::ExponentSet;
pub use fourier::{
    commutation_check, fourier_transform, hilbert_transform, hypothesis_integrals_g, hypothesis_integrals_phi,
    kernel_decay_probe, CommuteConfig, DecayProbe, HypothesisReport, Profile, Spectrum, UniformGrid,
};
pub use function::{RealFunction, Sides, Support, TestFunction};
pub use hardy_space::{dilation_invariance_check, exponent_relation_probe, hardy_quasi_norm, hilbert_hardy_quasi_norm, radial_maximal, MaximalConfig, ScalingInput};
pub use grid::{make_log_grid, ComplexGridFunction, GridFunction, Interval, LogGrid};
pub use inequalities::{
    empirical_operator_norm, extremal_test_function, hardy_inequality_check, verify_sandwich_decreasing,
    verify_sandwich_increasing, young_mult_check, HardyDirection, Monotonicity, SandwichReport,
};
pub use kernels::{fourier_of_kernel, verify_bounds, BoundRegion, Kernel, KernelBounds, TabulatedKernel};
pub use norms::{a_constant, b_constant, k_constant, k_general, weak_lp_norm, weighted_lp_norm, KSplit, ScaleConstant};
pub use operator::{apply_hausdorff, apply_on_grid, hausdorff_as_mellin, mult_convolve, GridImage, HausdorffImage};
pub use quad::{integrate, sup_over_scale, NormValue, QuadConfig, ScaleSup};
pub use report::{Check, VerificationReport};
pub use weights::{ap_characteristic, critical_index, radial_moment, Direction, MonotoneProfile, Weight};
