//! Gamma-family functions and Meijer G / Fox H evaluation.

pub mod gamma;
pub mod meijer;
pub mod mellin;
pub mod scaled;

pub use gamma::{ln_gamma, ln_gamma_real, ln_gamma_signed, log_gamma_complex, trigamma};
pub use meijer::{delta_expand, delta_expand_list, fox_h, meijer_g, FoxHSpec, MeijerGSpec};
pub use mellin::{Diagnostics, EvalOptions, Evaluation, GammaFactor, MellinBarnes};
pub use scaled::Scaled;
