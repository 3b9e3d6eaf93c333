//! Monte-Carlo estimates of the four secrecy metrics.
//!
//! Samples are split into fixed-size chunks, chunk `i` drawing from its own
//! ChaCha stream derived from `(seed, stream_id, i)`. Hit counts are summed
//! as integers, so the estimate does not depend on the number of threads.

use rand::Rng;
use rayon::prelude::*;

use crate::channels::{DggLink, DggSampler, EtaMuSampler, RngStream};
use crate::dualhop::instantaneous_sc_scenario2;
use crate::error::{Error, Result};
use crate::secrecy::{Scenario1Config, Scenario2Config};

pub const DEFAULT_SAMPLES: u64 = 100_000;
pub const MIN_SAMPLES: u64 = 10_000;
pub const DEFAULT_CHUNK: u64 = 1 << 16;

const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub ci95_low: f64,
    pub ci95_high: f64,
}

impl MCEstimate {
    /// Bernoulli estimate from a hit count. The interval is the normal one
    /// unless fewer than 10 hits or misses are expected, then Wilson's.
    pub fn from_counts(hits: u64, n: u64) -> Self {
        assert!(n > 0 && hits <= n, "need 0 <= hits <= n and n > 0");
        let nf = n as f64;
        let p = hits as f64 / nf;
        let se = (p * (1.0 - p) / nf).sqrt();
        let (lo, hi) = if nf * p < 10.0 || nf * (1.0 - p) < 10.0 {
            let z2 = Z95 * Z95;
            let den = 1.0 + z2 / nf;
            let mid = (p + z2 / (2.0 * nf)) / den;
            let half = Z95 * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / den;
            (mid - half, mid + half)
        } else {
            (p - Z95 * se, p + Z95 * se)
        };
        MCEstimate { value: p, std_error: se, n_samples: n, ci95_low: lo.clamp(0.0, p), ci95_high: hi.clamp(p, 1.0) }
    }

    pub fn hits(&self) -> u64 {
        (self.value * self.n_samples as f64).round() as u64
    }

    /// `|x − value| ≤ k·σ`, with σ the larger of the sample standard error
    /// and the binomial error implied by `x`, so a zero-hit estimate still
    /// has a usable scale.
    pub fn agrees_with(&self, x: f64, k: f64) -> bool {
        let sx = (x.clamp(0.0, 1.0) * (1.0 - x.clamp(0.0, 1.0)) / self.n_samples as f64).sqrt();
        (x - self.value).abs() <= k * self.std_error.max(sx)
    }
}

/// How FSO SNRs are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FsoSampling {
    /// Product of two generalized-Gamma irradiances and a pointing loss.
    #[default]
    Physical,
    /// Inversion of a tabulated analytic CDF.
    InverseCdf,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McOptions {
    pub sampling: FsoSampling,
    pub chunk: u64,
}

impl Default for McOptions {
    fn default() -> Self {
        McOptions { sampling: FsoSampling::Physical, chunk: DEFAULT_CHUNK }
    }
}

/// Inverse-CDF draws from the analytic DGG CDF tabulated on a log grid.
///
/// The grid spans the range where the CDF lies in `[1e-9, 1 − 1e-9]` and
/// is refined until linear interpolation in `ln γ` is within
/// [`Self::TOL`] of the CDF at every interval midpoint. Draws outside the
/// grid are pinned to its end points.
#[derive(Debug, Clone)]
pub struct InverseCdfSampler {
    ln_g: Vec<f64>,
    cdf: Vec<f64>,
}

impl InverseCdfSampler {
    pub const TOL: f64 = 2e-6;

    pub fn new(link: &DggLink) -> Result<Self> {
        let u = link.electrical_snr;
        let mut lo = 0.0;
        while link.cdf(u * f64::exp(lo))? > 1e-9 && lo > -300.0 {
            lo -= 1.0;
        }
        let mut hi = 0.0;
        while link.ccdf(u * f64::exp(hi))? > 1e-9 && hi < 80.0 {
            hi += 0.5;
        }
        let f = |t: f64| link.cdf((u.ln() + t).exp());
        let coarse = 256;
        let mut pts: Vec<(f64, f64)> = Vec::new();
        let mut prev = (lo, f(lo)?);
        pts.push(prev);
        for i in 1..=coarse {
            let t = lo + (hi - lo) * i as f64 / coarse as f64;
            let next = (t, f(t)?);
            let mut stack = vec![(prev, next, 0)];
            while let Some((a, b, depth)) = stack.pop() {
                let m = 0.5 * (a.0 + b.0);
                let fm = f(m)?;
                if depth < 20 && (fm - 0.5 * (a.1 + b.1)).abs() > Self::TOL {
                    // Right half first so the left half is emitted first.
                    stack.push(((m, fm), b, depth + 1));
                    stack.push((a, (m, fm), depth + 1));
                } else {
                    pts.push((m, fm));
                    pts.push(b);
                }
            }
            prev = next;
        }
        let ln_g: Vec<f64> = pts.iter().map(|p| u.ln() + p.0).collect();
        let mut cdf: Vec<f64> = pts.iter().map(|p| p.1).collect();
        for i in 1..cdf.len() {
            cdf[i] = cdf[i].max(cdf[i - 1]);
        }
        Ok(InverseCdfSampler { ln_g, cdf })
    }

    pub fn len(&self) -> usize {
        self.ln_g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ln_g.is_empty()
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let v: f64 = rng.random();
        let i = self.cdf.partition_point(|&c| c < v);
        if i == 0 {
            return self.ln_g[0].exp();
        }
        if i >= self.cdf.len() {
            return self.ln_g[self.ln_g.len() - 1].exp();
        }
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let w = if c1 > c0 { (v - c0) / (c1 - c0) } else { 0.5 };
        (self.ln_g[i - 1] + w * (self.ln_g[i] - self.ln_g[i - 1])).exp()
    }
}

#[derive(Debug, Clone)]
enum FsoDraw {
    Physical(DggSampler),
    Inverse(Box<InverseCdfSampler>),
}

impl FsoDraw {
    fn new(link: &DggLink, sampling: FsoSampling) -> Result<Self> {
        Ok(match sampling {
            FsoSampling::Physical => FsoDraw::Physical(DggSampler::new(link)?),
            FsoSampling::InverseCdf => FsoDraw::Inverse(Box::new(InverseCdfSampler::new(link)?)),
        })
    }

    #[inline]
    fn draw(&self, rng: &mut RngStream) -> f64 {
        match self {
            FsoDraw::Physical(s) => s.draw(rng),
            FsoDraw::Inverse(s) => s.draw(rng),
        }
    }
}

fn check_n(n: u64) -> Result<()> {
    if n < MIN_SAMPLES {
        Err(Error::InvalidParameter(format!("need at least {MIN_SAMPLES} samples, got {n}")))
    } else {
        Ok(())
    }
}

fn chunk_stream(rng: &RngStream, i: u64) -> RngStream {
    RngStream::new(rng.seed, rng.stream_id.wrapping_mul(1 << 24).wrapping_add(i))
}

/// Runs `count(stream, m)` over the chunks of `n` in parallel.
fn run_chunks<F>(n: u64, rng: &RngStream, chunk: u64, count: F) -> Result<MCEstimate>
where
    F: Fn(&mut RngStream, u64) -> u64 + Sync,
{
    check_n(n)?;
    let chunk = chunk.max(1);
    let k = n.div_ceil(chunk);
    let hits: u64 = (0..k)
        .into_par_iter()
        .map(|i| {
            let m = chunk.min(n - i * chunk);
            count(&mut chunk_stream(rng, i), m)
        })
        .sum();
    Ok(MCEstimate::from_counts(hits, n))
}

struct Sim1 {
    rm: EtaMuSampler,
    re: EtaMuSampler,
    f: FsoDraw,
    phi1: f64,
}

impl Sim1 {
    fn new(cfg: &Scenario1Config, opts: &McOptions) -> Result<Self> {
        Ok(Sim1 {
            rm: EtaMuSampler::new(&cfg.rf_main),
            re: EtaMuSampler::new(&cfg.rf_eve),
            f: FsoDraw::new(&cfg.fso_main, opts.sampling)?,
            phi1: cfg.phi1(),
        })
    }

    /// `(γ_d, γ_re)`.
    #[inline]
    fn draw(&self, rng: &mut RngStream) -> (f64, f64) {
        let gr = self.rm.draw(rng);
        let gf = self.f.draw(rng);
        let ge = self.re.draw(rng);
        (gr.min(gf), ge)
    }

    fn count_sop(&self, rng: &mut RngStream, m: u64, exact_event: bool) -> u64 {
        let shift = if exact_event { self.phi1 - 1.0 } else { 0.0 };
        (0..m)
            .filter(|_| {
                let (gd, ge) = self.draw(rng);
                gd <= self.phi1 * ge + shift
            })
            .count() as u64
    }

    fn count_spsc(&self, rng: &mut RngStream, m: u64) -> u64 {
        (0..m)
            .filter(|_| {
                let (gd, ge) = self.draw(rng);
                gd > ge
            })
            .count() as u64
    }
}

struct Sim2 {
    rm: EtaMuSampler,
    fm: FsoDraw,
    fe: FsoDraw,
    phi2: f64,
    rate: f64,
}

impl Sim2 {
    fn new(cfg: &Scenario2Config, opts: &McOptions) -> Result<Self> {
        Ok(Sim2 {
            rm: EtaMuSampler::new(&cfg.rf_main),
            fm: FsoDraw::new(&cfg.fso_main, opts.sampling)?,
            fe: FsoDraw::new(&cfg.fso_eve, opts.sampling)?,
            phi2: cfg.phi2(),
            rate: cfg.target_rate,
        })
    }

    /// `(γ_r0, γ_d0, γ_de)`.
    #[inline]
    fn draw(&self, rng: &mut RngStream) -> (f64, f64, f64) {
        (self.rm.draw(rng), self.fm.draw(rng), self.fe.draw(rng))
    }

    fn count_sop(&self, rng: &mut RngStream, m: u64, exact_event: bool) -> u64 {
        (0..m)
            .filter(|_| {
                let (gr, gd, ge) = self.draw(rng);
                if exact_event {
                    instantaneous_sc_scenario2(gr, gd, ge) <= self.rate
                } else {
                    0.5 * (1.0 + gr).log2() <= self.rate || gd <= self.phi2 * ge
                }
            })
            .count() as u64
    }

    fn count_spsc(&self, rng: &mut RngStream, m: u64) -> u64 {
        (0..m)
            .filter(|_| {
                let (_, gd, ge) = self.draw(rng);
                gd > ge
            })
            .count() as u64
    }
}

/// Scenario-1 outage: `γ_d ≤ φ1 γ_re + φ1 − 1` when `exact_event`, else the
/// lower-bound event `γ_d ≤ φ1 γ_re`.
pub fn estimate_sop1(cfg: &Scenario1Config, n: u64, rng: &RngStream, exact_event: bool) -> Result<MCEstimate> {
    estimate_sop1_with(cfg, n, rng, exact_event, &McOptions::default())
}

pub fn estimate_sop1_with(
    cfg: &Scenario1Config,
    n: u64,
    rng: &RngStream,
    exact_event: bool,
    opts: &McOptions,
) -> Result<MCEstimate> {
    let sim = Sim1::new(cfg, opts)?;
    run_chunks(n, rng, opts.chunk, |r, m| sim.count_sop(r, m, exact_event))
}

/// Scenario-2 outage: `min(T_S, T_R) ≤ T` when `exact_event`, else the
/// lower-bound event `T_S ≤ T or γ_d0 ≤ φ2 γ_de`.
pub fn estimate_sop2(cfg: &Scenario2Config, n: u64, rng: &RngStream, exact_event: bool) -> Result<MCEstimate> {
    estimate_sop2_with(cfg, n, rng, exact_event, &McOptions::default())
}

pub fn estimate_sop2_with(
    cfg: &Scenario2Config,
    n: u64,
    rng: &RngStream,
    exact_event: bool,
    opts: &McOptions,
) -> Result<MCEstimate> {
    let sim = Sim2::new(cfg, opts)?;
    run_chunks(n, rng, opts.chunk, |r, m| sim.count_sop(r, m, exact_event))
}

/// `Pr{γ_d > γ_re}`.
pub fn estimate_spsc1(cfg: &Scenario1Config, n: u64, rng: &RngStream) -> Result<MCEstimate> {
    estimate_spsc1_with(cfg, n, rng, &McOptions::default())
}

pub fn estimate_spsc1_with(cfg: &Scenario1Config, n: u64, rng: &RngStream, opts: &McOptions) -> Result<MCEstimate> {
    let sim = Sim1::new(cfg, opts)?;
    run_chunks(n, rng, opts.chunk, |r, m| sim.count_spsc(r, m))
}

/// `Pr{γ_d0 > γ_de}`.
pub fn estimate_spsc2(cfg: &Scenario2Config, n: u64, rng: &RngStream) -> Result<MCEstimate> {
    estimate_spsc2_with(cfg, n, rng, &McOptions::default())
}

pub fn estimate_spsc2_with(cfg: &Scenario2Config, n: u64, rng: &RngStream, opts: &McOptions) -> Result<MCEstimate> {
    let sim = Sim2::new(cfg, opts)?;
    run_chunks(n, rng, opts.chunk, |r, m| sim.count_spsc(r, m))
}

/// The stream used for chunk `i` of an estimate keyed by `rng`.
pub fn chunk_rng(rng: &RngStream, i: u64) -> RngStream {
    chunk_stream(rng, i)
}

/// Hits of the scenario-1 outage event on one stream, sequentially.
pub fn count_sop1(cfg: &Scenario1Config, m: u64, rng: &mut RngStream, exact_event: bool) -> Result<u64> {
    Ok(Sim1::new(cfg, &McOptions::default())?.count_sop(rng, m, exact_event))
}

/// Kolmogorov-Smirnov distance between a sample and a CDF.
pub fn ks_distance<F>(sample: &mut [f64], mut cdf: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    sample.sort_by(f64::total_cmp);
    let n = sample.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sample.iter().enumerate() {
        let c = cdf(x)?;
        d = d.max((i as f64 + 1.0) / n - c).max(c - i as f64 / n);
    }
    Ok(d)
}

/// Two-sample Kolmogorov-Smirnov distance.
pub fn ks_two_sample(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic KS critical value `c(α)/√n` (α = 0.01 gives c = 1.628).
pub fn ks_critical(n: usize, alpha: f64) -> f64 {
    (-0.5 * (alpha / 2.0).ln()).sqrt() / (n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_estimate() {
        let e = MCEstimate::from_counts(300, 1000);
        assert!((e.std_error - (0.3f64 * 0.7 / 1000.0).sqrt()).abs() < 1e-15);
        assert!(e.ci95_low <= e.value && e.value <= e.ci95_high);
        let z = MCEstimate::from_counts(0, 100_000);
        assert_eq!(z.value, 0.0);
        assert!(z.ci95_high > 0.0 && z.ci95_low == 0.0);
        assert!(z.agrees_with(1e-5, 3.0));
        assert!(!z.agrees_with(1e-3, 3.0));
    }

    #[test]
    fn ks_helpers() {
        let mut s: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        assert!(ks_distance(&mut s, |x| Ok(x)).unwrap() <= 0.0005 + 1e-12);
        let mut a = vec![1.0, 2.0, 3.0];
        let mut b = vec![1.0, 2.0, 3.0];
        assert_eq!(ks_two_sample(&mut a, &mut b), 0.0);
        assert!((ks_critical(100_000, 0.01) - 1.6276 / 316.227_766).abs() < 1e-5);
    }
}
