//! Named reductions of the two fading families.

use super::dgg::{DggLink, Detection, Turbulence};
use super::eta_mu::EtaMuLink;
use crate::error::{Error, Result};

/// η used in place of the limits η → 0 / η → ∞.
///
/// At η = 1e-4 the in-phase component still shifts the CDF by about 1e-4,
/// so the surrogate sits two decades further out.
pub const ETA_SMALL: f64 = 1e-6;
pub const ETA_LARGE: f64 = 1e6;

#[derive(Debug, Clone, PartialEq)]
pub enum SpecialCase {
    Rayleigh { avg_snr: f64 },
    NakagamiM { m: f64, avg_snr: f64 },
    OneSidedGaussian { avg_snr: f64 },
    Hoyt { q: f64, avg_snr: f64 },
    DoubleWeibull { a: f64, omega1: f64, omega2: f64, eps: f64, detection: Detection, electrical_snr: f64 },
    GammaGamma { b1: f64, b2: f64, eps: f64, detection: Detection, electrical_snr: f64 },
    KDistribution { b1: f64, eps: f64, detection: Detection, electrical_snr: f64 },
    Lognormal,
}

#[derive(Debug, Clone)]
pub enum Link {
    EtaMu(EtaMuLink),
    Dgg(DggLink),
}

impl Link {
    pub fn eta_mu(self) -> Option<EtaMuLink> {
        match self {
            Link::EtaMu(l) => Some(l),
            Link::Dgg(_) => None,
        }
    }

    pub fn dgg(self) -> Option<DggLink> {
        match self {
            Link::Dgg(l) => Some(l),
            Link::EtaMu(_) => None,
        }
    }
}

pub fn rayleigh(avg_snr: f64) -> Result<EtaMuLink> {
    EtaMuLink::new(ETA_SMALL, 1, avg_snr)
}

pub fn nakagami_m(m: f64, avg_snr: f64) -> Result<EtaMuLink> {
    EtaMuLink::with_real_mu(ETA_SMALL, m, avg_snr)
}

pub fn gamma_gamma(b1: f64, b2: f64, eps: f64, detection: Detection, electrical_snr: f64) -> Result<DggLink> {
    let t = Turbulence { a1: 1.0, a2: 1.0, b1, b2, omega1: 1.0, omega2: 1.0, lambda1: 1, lambda2: 1 };
    DggLink::new(t, eps, detection, electrical_snr)
}

pub fn k_distribution(b1: f64, eps: f64, detection: Detection, electrical_snr: f64) -> Result<DggLink> {
    gamma_gamma(b1, 1.0, eps, detection, electrical_snr)
}

pub fn double_weibull(
    a: f64,
    omega1: f64,
    omega2: f64,
    eps: f64,
    detection: Detection,
    electrical_snr: f64,
) -> Result<DggLink> {
    let t = Turbulence { a1: a, a2: a, b1: 1.0, b2: 1.0, omega1, omega2, lambda1: 1, lambda2: 1 };
    DggLink::new(t, eps, detection, electrical_snr)
}

/// Build the link a named special case reduces to.
pub fn special_case_constructor(case: &SpecialCase) -> Result<Link> {
    Ok(match *case {
        SpecialCase::Rayleigh { avg_snr } => Link::EtaMu(rayleigh(avg_snr)?),
        SpecialCase::NakagamiM { m, avg_snr } => Link::EtaMu(nakagami_m(m, avg_snr)?),
        SpecialCase::OneSidedGaussian { .. } | SpecialCase::Hoyt { .. } => {
            return Err(Error::Unsupported(
                "one-sided Gaussian and Hoyt need mu = 0.5, which the integer-mu η-μ form cannot represent".into(),
            ))
        }
        SpecialCase::DoubleWeibull { a, omega1, omega2, eps, detection, electrical_snr } => {
            Link::Dgg(double_weibull(a, omega1, omega2, eps, detection, electrical_snr)?)
        }
        SpecialCase::GammaGamma { b1, b2, eps, detection, electrical_snr } => {
            Link::Dgg(gamma_gamma(b1, b2, eps, detection, electrical_snr)?)
        }
        SpecialCase::KDistribution { b1, eps, detection, electrical_snr } => {
            Link::Dgg(k_distribution(b1, eps, detection, electrical_snr)?)
        }
        SpecialCase::Lognormal => {
            return Err(Error::Unsupported(
                "the lognormal limit (a -> 0, b -> inf) is not reachable numerically in the DGG parameterization".into(),
            ))
        }
    })
}
