//! Secrecy performance of a dual-hop decode-and-forward RF-FSO link.
//!
//! The RF hop fades as η-μ, the FSO hop follows double generalized Gamma
//! turbulence with pointing errors. Closed forms are expressed through
//! Meijer G and Fox H functions evaluated by Mellin-Barnes integration.

pub mod channels;
pub mod cli;
pub mod dualhop;
pub mod error;
pub mod montecarlo;
pub mod quadrature;
pub mod secrecy;
pub mod specfun;

pub use error::{Error, Result};
