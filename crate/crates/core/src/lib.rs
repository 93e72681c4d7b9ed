//! Quadratic-phase Fourier–Bessel transforms on the half line.
//!
//! The crate provides the forward and inverse transform with five phase
//! parameters (a, b, c, d, e) and a Bessel order γ > -1/2, the generalized
//! translation and convolution attached to the transform, and tools for
//! measuring time/frequency concentration on sets.
//!
//! All integrals are taken against the weight s^{2γ+1} ds on [0, ∞), truncated
//! to [0, R] and evaluated with composite Gauss rules ([`QuadratureRule`]).

pub mod convolution;
pub mod error;
pub mod gauss;
pub mod quadrature;
pub mod signals;
pub mod specfun;
pub mod transform;
pub mod translation;
pub mod uncertainty;

pub use convolution::{convolve, convolve_at, young_check, young_exponent, ConvolutionReport};
pub use error::{Error, Result};
pub use quadrature::{
    build_rule, inner_product, integrate, weighted_norm, QuadratureRule, RadialFunction,
    RadialGrid, Resolution, Signal,
};
pub use signals::TestSignal;
pub use specfun::{bessel_j, c_gamma, gamma_fn, normalized_bessel, Order};
pub use transform::{
    classical_fbt, complex_power_ib, forward, forward_via_classical, inverse, kernel,
    parseval_check, reduce_params, riemann_lebesgue_check, scaling_identity_check, QpfbParams,
    Reduction, TransformResult,
};
pub use translation::{
    kernel_mass, translate, triangle_area, w_classical, SupportRule, Translated,
    TranslationKernelEval,
};
pub use uncertainty::{
    band_limit, donoho_stark_check, epsilon_concentrations, hs_bound, hs_norm_estimate,
    lp_concentration_check, time_limit, weighted_measure, ConcentrationReport, Concentrations,
    LpConcentrationReport, MeasurableSet, RulePair,
};
