//! Decode-and-forward combination of the RF and FSO hops.

use crate::channels::{DggLink, EtaMuLink};
use crate::error::{Error, Result};

/// S-R-D chain; the end-to-end SNR is the minimum of the two hop SNRs.
#[derive(Debug, Clone, PartialEq)]
pub struct DualHopChannel {
    pub rf: EtaMuLink,
    pub fso: DggLink,
}

impl DualHopChannel {
    pub fn new(rf: EtaMuLink, fso: DggLink) -> Self {
        DualHopChannel { rf, fso }
    }

    /// CDF of `min(γ_r, γ_f)` from the expanded RF sum:
    /// `1 - 𝒜 Σ Y (lγ)^x/x! e^{-lγ} (1 - F_f)`.
    pub fn min_combine_cdf(&self, gamma: f64) -> Result<f64> {
        if gamma.is_nan() || gamma < 0.0 {
            return Err(Error::Domain(format!("SNR must be non-negative, got {gamma}")));
        }
        if gamma == 0.0 {
            return Ok(0.0);
        }
        let ccdf_f = self.fso.ccdf(gamma)?;
        let rf = &self.rf;
        let mut acc = 0.0;
        for n in 0..2 {
            let l = rf.l[n];
            let e = (-l * gamma).exp();
            for v in 0..rf.mu {
                let mut term = 1.0;
                for x in 0..(rf.mu - v) {
                    if x > 0 {
                        term *= l * gamma / f64::from(x);
                    }
                    acc += term * e * rf.y[n][v as usize];
                }
            }
        }
        Ok((1.0 - rf.coef * acc * ccdf_f).clamp(0.0, 1.0))
    }

    /// Density of `min(γ_r, γ_f)`:
    /// `𝒜 Σ e^{-lγ} [X γ^{μ-v-1} (1 - F_f) + Σ_x (l^x/x!) γ^x Y f_f]`.
    pub fn min_combine_pdf(&self, gamma: f64) -> Result<f64> {
        if gamma.is_nan() || gamma <= 0.0 {
            return Err(Error::Domain(format!("SNR must be positive, got {gamma}")));
        }
        if gamma.is_infinite() {
            return Ok(0.0);
        }
        let ccdf_f = self.fso.ccdf(gamma)?;
        let pdf_f = self.fso.pdf(gamma)?;
        let rf = &self.rf;
        let mu = rf.mu;
        let mut acc = 0.0;
        for n in 0..2 {
            let l = rf.l[n];
            let e = (-l * gamma).exp();
            for v in 0..mu {
                acc += e * rf.x[n][v as usize] * gamma.powi((mu - v - 1) as i32) * ccdf_f;
                let mut term = 1.0;
                for x in 0..(mu - v) {
                    if x > 0 {
                        term *= l * gamma / f64::from(x);
                    }
                    acc += e * term * rf.y[n][v as usize] * pdf_f;
                }
            }
        }
        Ok((rf.coef * acc).max(0.0))
    }
}

/// Secrecy capacity of scenario 1 in bits/s/Hz.
pub fn instantaneous_sc_scenario1(gamma_d: f64, gamma_re: f64) -> f64 {
    if gamma_d > gamma_re {
        (1.0 + gamma_d).log2() - (1.0 + gamma_re).log2()
    } else {
        0.0
    }
}

/// Secrecy capacity of scenario 2: the worse of the first-hop rate and the
/// FSO secrecy rate, both carrying the half-duplex factor ½.
pub fn instantaneous_sc_scenario2(gamma_r0: f64, gamma_d0: f64, gamma_de: f64) -> f64 {
    let t_s = 0.5 * (1.0 + gamma_r0).log2();
    let t_r = if gamma_d0 > gamma_de { 0.5 * ((1.0 + gamma_d0).log2() - (1.0 + gamma_de).log2()) } else { 0.0 };
    t_s.min(t_r)
}
