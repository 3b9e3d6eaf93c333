//! η-μ fading (format 1) with integer μ.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::rng::RngStream;
use crate::error::{Error, Result};
use crate::specfun::ln_gamma_real;

/// One η-μ faded RF hop. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaMuLink {
    pub eta: f64,
    pub mu: u32,
    /// Linear average SNR φ.
    pub avg_snr: f64,
    pub k: f64,
    pub big_k: f64,
    /// Leading constant `k^μ / (K^μ Γ(μ))`.
    pub coef: f64,
    /// `x[N-1][v]`, `y[N-1][v]` for N = 1, 2 and v = 0..μ-1.
    pub x: [Vec<f64>; 2],
    pub y: [Vec<f64>; 2],
    /// Decay rates `l_1`, `l_2`.
    pub l: [f64; 2],
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

impl EtaMuLink {
    pub fn new(eta: f64, mu: u32, avg_snr: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::InvalidParameter(format!("eta must be positive, got {eta}")));
        }
        if mu == 0 {
            return Err(Error::InvalidParameter("mu must be a positive integer".into()));
        }
        if !(avg_snr > 0.0 && avg_snr.is_finite()) {
            return Err(Error::InvalidParameter(format!("average SNR must be positive, got {avg_snr}")));
        }
        let k = (2.0 + 1.0 / eta + eta) / 4.0;
        let big_k = (1.0 / eta - eta) / 4.0;
        if big_k.abs() <= 1e-9 {
            return Err(Error::InvalidParameter(
                "eta = 1 makes the finite-sum η-μ form singular; use a surrogate such as 1e-6".into(),
            ));
        }
        let m = f64::from(mu);
        // k ∓ K and k/K in forms free of cancellation for extreme η.
        let k_minus = 0.5 * (1.0 + eta);
        let k_plus = 0.5 * (1.0 + 1.0 / eta);
        let coef = ((1.0 + eta) / (1.0 - eta)).powi(mu as i32) / factorial(mu - 1);
        let l = [2.0 * m * k_minus / avg_snr, 2.0 * m * k_plus / avg_snr];
        if !(l[0] > 0.0 && l[1] > 0.0) {
            return Err(Error::InvalidParameter("decay rates must be positive".into()));
        }
        let sign_mu = if mu % 2 == 0 { 1.0 } else { -1.0 };
        let mut x = [Vec::new(), Vec::new()];
        let mut y = [Vec::new(), Vec::new()];
        for v in 0..mu {
            let vf = f64::from(v);
            let sign_v = if v % 2 == 0 { 1.0 } else { -1.0 };
            let g = (ln_gamma_real(m + vf)? - ln_gamma_real(m - vf)?).exp() / factorial(v);
            let xb = g * m.powi((mu - v) as i32)
                / (4f64.powi(v as i32) * avg_snr.powi((mu - v) as i32) * big_k.powi(v as i32));
            x[0].push(xb * sign_v);
            x[1].push(xb * sign_mu);
            let gy = ln_gamma_real(m + vf)?.exp() / factorial(v) / big_k.powi(v as i32)
                / 2f64.powi((mu + v) as i32);
            y[0].push(gy * sign_v / k_minus.powi((mu - v) as i32));
            y[1].push(gy * sign_mu / k_plus.powi((mu - v) as i32));
        }
        Ok(EtaMuLink { eta, mu, avg_snr, k, big_k, coef, x, y, l })
    }

    /// Rejects non-integer μ instead of rounding it.
    pub fn with_real_mu(eta: f64, mu: f64, avg_snr: f64) -> Result<Self> {
        if !(mu >= 1.0) || mu.fract() != 0.0 || mu > f64::from(u32::MAX) {
            return Err(Error::Unsupported(format!(
                "mu = {mu} is not a positive integer; the finite-sum η-μ form needs integer mu"
            )));
        }
        EtaMuLink::new(eta, mu as u32, avg_snr)
    }

    /// Same link with a different average SNR.
    pub fn with_avg_snr(&self, avg_snr: f64) -> Result<Self> {
        EtaMuLink::new(self.eta, self.mu, avg_snr)
    }

    fn check(gamma: f64) -> Result<()> {
        if gamma < 0.0 || gamma.is_nan() {
            Err(Error::Domain(format!("SNR must be non-negative, got {gamma}")))
        } else {
            Ok(())
        }
    }

    /// Below this `l_max·γ` the finite sums cancel and the mixture is used.
    fn use_mixture(&self, gamma: f64) -> bool {
        self.l[0].max(self.l[1]) * gamma < 2.0 * f64::from(self.mu) + 10.0
    }

    /// `(pdf, cdf)` from γ as a negative-binomial mixture of
    /// `Gamma(2μ + j, l_max)` laws. Every term is positive.
    fn mixture(&self, gamma: f64) -> (f64, f64) {
        let (lmin, lmax) = (self.l[0].min(self.l[1]), self.l[0].max(self.l[1]));
        let m = f64::from(self.mu);
        let x = lmax * gamma;
        let q = 1.0 - lmin / lmax;
        let a0 = 2.0 * m;
        // T(a) = x^a e^{-x} / Γ(a+1); the j-th density is lmax·T(a-1).
        let ln_t = (a0 - 1.0) * x.ln() - x - ln_gamma_real(a0).unwrap_or(f64::INFINITY);
        let mut t_prev = ln_t.exp();
        if t_prev == 0.0 || !t_prev.is_finite() {
            return (0.0, 0.0);
        }
        let mut w = (lmin / lmax).powf(m);
        let mut pdf = 0.0;
        let mut ws = Vec::new();
        let mut ts = Vec::new();
        let mut cdf_bound = 0.0;
        for j in 0..200_000u32 {
            let a = a0 + f64::from(j);
            let t = t_prev * x / a;
            pdf += w * t_prev;
            ws.push(w);
            ts.push(t);
            cdf_bound += w * t;
            if a + 1.0 > 2.0 * x && w * t_prev <= 1e-17 * pdf && 2.0 * w * t <= 1e-17 * cdf_bound {
                break;
            }
            w *= q * (m + f64::from(j)) / f64::from(j + 1);
            t_prev = t;
        }
        // P(a, x) = T(a) s(a) with s(a) = 1 + x/(a+1) s(a+1), run downwards.
        let top = a0 + (ws.len() - 1) as f64;
        let mut s = 1.0;
        let mut term = 1.0;
        for k in 1..10_000 {
            term *= x / (top + f64::from(k));
            s += term;
            if term <= 1e-17 * s {
                break;
            }
        }
        let mut cdf = 0.0;
        for i in (0..ws.len()).rev() {
            if i + 1 < ws.len() {
                s = 1.0 + x / (a0 + i as f64 + 1.0) * s;
            }
            cdf += ws[i] * ts[i] * s;
        }
        (lmax * pdf, cdf.min(1.0))
    }

    pub fn pdf(&self, gamma: f64) -> Result<f64> {
        Self::check(gamma)?;
        if gamma.is_infinite() {
            return Ok(0.0);
        }
        if self.use_mixture(gamma) {
            return Ok(self.mixture(gamma).0);
        }
        Ok(self.finite_pdf(gamma))
    }

    fn finite_pdf(&self, gamma: f64) -> f64 {
        let mut acc = 0.0;
        for n in 0..2 {
            let e = (-self.l[n] * gamma).exp();
            for v in 0..self.mu {
                acc += self.x[n][v as usize] * gamma.powi((self.mu - v - 1) as i32) * e;
            }
        }
        (self.coef * acc).max(0.0)
    }

    /// 1 - CDF, summed directly so small tails keep their relative accuracy.
    pub fn ccdf(&self, gamma: f64) -> Result<f64> {
        Self::check(gamma)?;
        if gamma.is_infinite() {
            return Ok(0.0);
        }
        if self.use_mixture(gamma) {
            return Ok(1.0 - self.mixture(gamma).1);
        }
        Ok(self.finite_ccdf(gamma))
    }

    fn finite_ccdf(&self, gamma: f64) -> f64 {
        let mut acc = 0.0;
        for n in 0..2 {
            let l = self.l[n];
            let e = (-l * gamma).exp();
            for v in 0..self.mu {
                let mut term = 1.0;
                let mut s = 0.0;
                for x in 0..(self.mu - v) {
                    if x > 0 {
                        term *= l * gamma / f64::from(x);
                    }
                    s += term;
                }
                acc += self.y[n][v as usize] * s * e;
            }
        }
        (self.coef * acc).clamp(0.0, 1.0)
    }

    pub fn cdf(&self, gamma: f64) -> Result<f64> {
        Self::check(gamma)?;
        if gamma == 0.0 {
            return Ok(0.0);
        }
        if self.use_mixture(gamma) {
            return Ok(self.mixture(gamma).1);
        }
        Ok((1.0 - self.ccdf(gamma)?).clamp(0.0, 1.0))
    }

    pub fn mean(&self) -> f64 {
        self.avg_snr
    }

    pub fn sample(&self, rng: &mut RngStream, n: usize) -> Vec<f64> {
        let s = EtaMuSampler::new(self);
        (0..n).map(|_| s.draw(rng)).collect()
    }

    pub fn sample_one(&self, rng: &mut RngStream) -> f64 {
        self.sample(rng, 1)[0]
    }
}

/// Sum of 4μ squared Gaussians: 2μ in-phase with variance η·σ², 2μ
/// quadrature with variance σ², scaled so the mean is φ.
#[derive(Debug, Clone)]
pub struct EtaMuSampler {
    nx: Normal<f64>,
    ny: Normal<f64>,
    clusters: usize,
}

impl EtaMuSampler {
    pub fn new(link: &EtaMuLink) -> Self {
        let sy2 = link.avg_snr / (2.0 * f64::from(link.mu) * (1.0 + link.eta));
        EtaMuSampler {
            nx: Normal::new(0.0, (link.eta * sy2).sqrt()).expect("finite sigma"),
            ny: Normal::new(0.0, sy2.sqrt()).expect("finite sigma"),
            clusters: 2 * link.mu as usize,
        }
    }

    #[inline]
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let mut g = 0.0;
        for _ in 0..self.clusters {
            let a: f64 = self.nx.sample(rng);
            let b: f64 = self.ny.sample(rng);
            g += a * a + b * b;
        }
        g
    }
}
