//! RF (η-μ) and FSO (double generalized Gamma) hop models.

pub mod dgg;
pub mod eta_mu;
pub mod rng;
pub mod special;

pub use dgg::{Detection, DggLink, DggSampler, Turbulence};
pub use eta_mu::{EtaMuLink, EtaMuSampler};
pub use rng::RngStream;
pub use special::{special_case_constructor, Link, SpecialCase};
