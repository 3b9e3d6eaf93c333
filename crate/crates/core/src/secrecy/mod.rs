//! Closed-form secrecy metrics for the two eavesdropping scenarios.
//!
//! Scenario 1: the eavesdropper listens to the RF hop. Scenario 2: the
//! eavesdropper listens to the FSO hop.

mod scenario1;
mod scenario2;

pub use scenario1::{
    sop1_asymptotic, sop1_asymptotic_gap, sop1_exact_quadrature, sop1_lower, spsc1,
};
pub use scenario2::{
    sop2_asymptotic, sop2_asymptotic_gap, sop2_exact_quadrature, sop2_lower, spsc2,
};

use crate::channels::{DggLink, EtaMuLink};
use crate::error::{Error, Result};
use crate::specfun::ln_gamma_signed;

/// Clamp excess above which a metric is flagged.
pub const CLAMP_FLAG: f64 = 1e-9;

/// Relative shift applied to coincident leading poles in the asymptotes.
pub const PERTURBATION: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario1Config {
    pub rf_main: EtaMuLink,
    pub rf_eve: EtaMuLink,
    pub fso_main: DggLink,
    /// Target secrecy rate in bits/s/Hz.
    pub target_rate: f64,
}

impl Scenario1Config {
    pub fn new(rf_main: EtaMuLink, rf_eve: EtaMuLink, fso_main: DggLink, target_rate: f64) -> Result<Self> {
        check_rate(target_rate)?;
        Ok(Scenario1Config { rf_main, rf_eve, fso_main, target_rate })
    }

    pub fn phi1(&self) -> f64 {
        2f64.powf(self.target_rate)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario2Config {
    pub rf_main: EtaMuLink,
    pub fso_main: DggLink,
    pub fso_eve: DggLink,
    pub target_rate: f64,
}

impl Scenario2Config {
    /// The two FSO links must share every turbulence and pointing parameter;
    /// only detection and electrical SNR may differ.
    pub fn new(rf_main: EtaMuLink, fso_main: DggLink, fso_eve: DggLink, target_rate: f64) -> Result<Self> {
        check_rate(target_rate)?;
        if !fso_main.same_shape(&fso_eve) {
            return Err(Error::InvalidParameter(
                "main and eavesdropper FSO links must share turbulence and pointing parameters".into(),
            ));
        }
        Ok(Scenario2Config { rf_main, fso_main, fso_eve, target_rate })
    }

    pub fn phi2(&self) -> f64 {
        2f64.powf(2.0 * self.target_rate)
    }
}

fn check_rate(r: f64) -> Result<()> {
    if r >= 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("target rate must be non-negative, got {r}")))
    }
}

/// A probability after clamping to [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metric {
    pub value: f64,
    /// Value before clamping.
    pub raw: f64,
    /// Pole perturbation used by an asymptote, 0 if none.
    pub perturbation: f64,
}

impl Metric {
    pub fn new(raw: f64) -> Result<Self> {
        if !raw.is_finite() {
            return Err(Error::Accuracy { estimate: raw, error_bound: f64::INFINITY });
        }
        Ok(Metric { value: raw.clamp(0.0, 1.0), raw, perturbation: 0.0 })
    }

    pub fn clamp_excess(&self) -> f64 {
        (self.raw - 1.0).max(-self.raw).max(0.0)
    }

    pub fn clamped(&self) -> bool {
        self.clamp_excess() > CLAMP_FLAG
    }
}

/// Neumaier compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

pub(crate) fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| f64::from(k).ln()).sum()
}

/// Variants of a leading-pole vector used by the residue sums: the vector
/// itself when its poles are simple, otherwise a `+` and a `-` shifted copy
/// to be averaged. Returns the variants and the shift used.
pub(crate) fn pole_variants(j: &[f64]) -> (Vec<Vec<f64>>, f64) {
    let mut marked = vec![false; j.len()];
    for p in 0..j.len() {
        for h in 0..p {
            let d = j[h] - j[p];
            if (d - d.round()).abs() < 1e-9 {
                marked[p] = true;
            }
        }
    }
    if !marked.iter().any(|&m| m) {
        return (vec![j.to_vec()], 0.0);
    }
    let mut plus = j.to_vec();
    let mut minus = j.to_vec();
    let mut k = 0.0;
    for (i, &m) in marked.iter().enumerate() {
        if m {
            k += 1.0;
            plus[i] += k * PERTURBATION;
            minus[i] -= k * PERTURBATION;
        }
    }
    (vec![plus, minus], PERTURBATION)
}

/// Signed ln|Π Γ(x_i)|; sign 0 if any factor sits on a pole.
pub(crate) fn ln_gamma_prod<I: IntoIterator<Item = f64>>(xs: I) -> (f64, f64) {
    let mut ln = 0.0;
    let mut sign = 1.0;
    for x in xs {
        let (l, s) = ln_gamma_signed(x);
        if s == 0.0 {
            return (f64::INFINITY, 0.0);
        }
        ln += l;
        sign *= s;
    }
    (ln, sign)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_keeps_small_terms() {
        let mut s = Compensated::default();
        for x in [1e16, 1.0, -1e16, 1.0] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn pole_variants_split_coincident_entries() {
        let (v, p) = pole_variants(&[0.3, 0.7]);
        assert_eq!(v.len(), 1);
        assert_eq!(p, 0.0);
        let (v, p) = pole_variants(&[1.0, 0.5, 1.0, 2.5]);
        assert_eq!(v.len(), 2);
        assert_eq!(p, PERTURBATION);
        assert!(v[0][2] > 1.0 && v[1][2] < 1.0);
        assert!(v[0][3] > 2.5 && v[1][3] < 2.5);
        assert_eq!(v[0][0], 1.0);
    }

    #[test]
    fn metric_clamping() {
        let m = Metric::new(1.0 + 1e-8).unwrap();
        assert_eq!(m.value, 1.0);
        assert!(m.clamped());
        assert!(!Metric::new(0.3).unwrap().clamped());
        assert!(Metric::new(f64::NAN).is_err());
    }
}
