//! Scenario 1: eavesdropper on the RF hop.

use std::collections::HashMap;

use rayon::prelude::*;

use super::{ln_factorial, ln_gamma_prod, pole_variants, Compensated, Metric, Scenario1Config};
use crate::channels::DggLink;
use crate::error::Result;
use crate::quadrature::{integrate_to_infinity, QuadOptions};
use crate::specfun::{ln_gamma_real, FoxHSpec};

/// One `(N0, v, x, Ne, w)` term of the lower-bound sum.
#[derive(Debug, Clone, Copy)]
struct Term {
    /// `(l^x/x!) Y_{N0,v} X_{Ne,w}`.
    weight: f64,
    x: u32,
    z1: u32,
    /// `ln ℱ = ln(φ1 l_{N0} + l_{Ne})`.
    ln_f: f64,
}

fn terms(cfg: &Scenario1Config) -> Vec<Term> {
    let (m, e) = (&cfg.rf_main, &cfg.rf_eve);
    let phi1 = cfg.phi1();
    let mut out = Vec::new();
    for n0 in 0..2 {
        let l = m.l[n0];
        for v in 0..m.mu {
            for x in 0..(m.mu - v) {
                let lx = (f64::from(x) * l.ln() - ln_factorial(x)).exp();
                for ne in 0..2 {
                    let f = phi1 * l + e.l[ne];
                    for w in 0..e.mu {
                        out.push(Term {
                            weight: lx * m.y[n0][v as usize] * e.x[ne][w as usize],
                            x,
                            z1: e.mu - w + x,
                            ln_f: f.ln(),
                        });
                    }
                }
            }
        }
    }
    out
}

type Key = (u32, u64);

fn key(t: &Term) -> Key {
    (t.z1, t.ln_f.to_bits())
}

/// `H^{δ,2}_{s+2,δ+1}[· | (1-z1,τ), (1,1), (j3,1); (j4,1), (0,1)]` with the
/// given leading parameters `j4`.
fn q2_spec(f: &DggLink, j4: &[f64], z1: f64) -> FoxHSpec {
    let mut a = vec![(1.0 - z1, f.tau), (1.0, 1.0)];
    a.extend(f.j3.iter().map(|&j| (j, 1.0)));
    let mut b: Vec<(f64, f64)> = j4.iter().map(|&j| (j, 1.0)).collect();
    b.push((0.0, 1.0));
    FoxHSpec { m: j4.len(), n: 2, a, b }
}

fn q2_ln_arg(cfg: &Scenario1Config, ln_f: f64) -> f64 {
    let f = &cfg.fso_main;
    f.ln_b4 + f.tau * (cfg.phi1().ln() - f.electrical_snr.ln() - ln_f)
}

/// Q2 Fox H values for every distinct `(z1, ℱ)`.
fn q2_values(cfg: &Scenario1Config, ts: &[Term]) -> Result<HashMap<Key, f64>> {
    let mut keys: Vec<(Key, Term)> = ts.iter().map(|t| (key(t), *t)).collect();
    keys.sort_by(|a, b| a.0.cmp(&b.0));
    keys.dedup_by(|a, b| a.0 == b.0);
    let f = &cfg.fso_main;
    keys.par_iter()
        .map(|(k, t)| {
            let spec = q2_spec(f, &f.j4, f64::from(t.z1));
            let h = spec.eval_ln(q2_ln_arg(cfg, t.ln_f), &f.opts)?;
            Ok((*k, h.to_f64()))
        })
        .collect()
}

/// Lower bound on the secrecy outage probability, `Pr{γ_d ≤ φ1 γ_re}`.
pub fn sop1_lower(cfg: &Scenario1Config) -> Result<Metric> {
    let ts = terms(cfg);
    let q2 = q2_values(cfg, &ts)?;
    let phi1 = cfg.phi1();
    let ln_b3 = cfg.fso_main.ln_b3;
    let mut acc = Compensated::default();
    for t in &ts {
        let z1 = f64::from(t.z1);
        let ln_q = f64::from(t.x) * phi1.ln() - z1 * t.ln_f;
        let q1 = (ln_q + ln_gamma_real(z1)?).exp();
        let q2 = ln_q.exp() * q2[&key(t)];
        acc.add(t.weight * (q1 - ln_b3.exp() * q2));
    }
    Metric::new(1.0 - cfg.rf_main.coef * cfg.rf_eve.coef * acc.value())
}

/// Leading residues of the Q2 Fox H function at `s = -j4_p`.
fn q2_leading(f: &DggLink, j4: &[f64], z1: f64, ln_x: f64) -> f64 {
    let mut acc = Compensated::default();
    for (p, &jp) in j4.iter().enumerate() {
        let (l1, s1) = ln_gamma_prod(j4.iter().enumerate().filter(|&(h, _)| h != p).map(|(_, &jh)| jh - jp));
        let (l2, s2) = ln_gamma_prod(f.j3.iter().map(|&j| j - jp));
        if s1 == 0.0 || s2 == 0.0 {
            continue;
        }
        let l3 = ln_gamma_real(z1 + f.tau * jp).unwrap_or(f64::INFINITY);
        acc.add(s1 * s2 * (l1 - l2 + l3 - jp.ln() + jp * ln_x).exp());
    }
    acc.value()
}

/// High-SNR asymptote of [`sop1_lower`]: the FSO Fox H term replaced by its
/// leading residues.
pub fn sop1_asymptotic(cfg: &Scenario1Config) -> Result<Metric> {
    let f = &cfg.fso_main;
    let (variants, pert) = pole_variants(&f.j4);
    let phi1 = cfg.phi1();
    let mut acc = Compensated::default();
    for t in terms(cfg) {
        let z1 = f64::from(t.z1);
        let ln_q = f64::from(t.x) * phi1.ln() - z1 * t.ln_f;
        let q1 = (ln_q + ln_gamma_real(z1)?).exp();
        let ln_x = q2_ln_arg(cfg, t.ln_f);
        let h: f64 = variants.iter().map(|j4| q2_leading(f, j4, z1, ln_x)).sum::<f64>() / variants.len() as f64;
        acc.add(t.weight * (q1 - f.ln_b3.exp() * ln_q.exp() * h));
    }
    let mut m = Metric::new(1.0 - cfg.rf_main.coef * cfg.rf_eve.coef * acc.value())?;
    m.perturbation = pert;
    Ok(m)
}

/// `sop1_asymptotic − sop1_lower`, computed from the Fox H remainder past the
/// leading poles so it stays accurate after both values agree to every
/// printed digit.
pub fn sop1_asymptotic_gap(cfg: &Scenario1Config) -> Result<f64> {
    let f = &cfg.fso_main;
    let (variants, _) = pole_variants(&f.j4);
    let ts = terms(cfg);
    let mut keys: Vec<(Key, Term)> = ts.iter().map(|t| (key(t), *t)).collect();
    keys.sort_by(|a, b| a.0.cmp(&b.0));
    keys.dedup_by(|a, b| a.0 == b.0);
    let rem: HashMap<Key, f64> = keys
        .par_iter()
        .map(|(k, t)| {
            let z1 = f64::from(t.z1);
            let ln_x = q2_ln_arg(cfg, t.ln_f);
            let mut r = 0.0;
            for j4 in &variants {
                let lead: Vec<f64> = j4.iter().map(|&j| -j).collect();
                r += q2_spec(f, j4, z1).to_mellin()?.evaluate_beyond(ln_x, &lead, true, &f.opts)?.to_f64();
            }
            Ok((*k, r / variants.len() as f64))
        })
        .collect::<Result<_>>()?;
    let phi1 = cfg.phi1();
    let mut acc = Compensated::default();
    for t in &ts {
        let ln_q = f64::from(t.x) * phi1.ln() - f64::from(t.z1) * t.ln_f;
        acc.add(t.weight * ln_q.exp() * rem[&key(t)]);
    }
    Ok(-cfg.rf_main.coef * cfg.rf_eve.coef * f.ln_b3.exp() * acc.value())
}

/// `H^{δ+1,1}_{s+2,δ+1}[B4 (Uσ)^{-τ} | (1-z,τ), (j3,1), (1,1); (0,1), (j4,1)]`.
fn h1_spec(f: &DggLink, z: f64) -> FoxHSpec {
    let mut a = vec![(1.0 - z, f.tau)];
    a.extend(f.j3.iter().map(|&j| (j, 1.0)));
    a.push((1.0, 1.0));
    let mut b = vec![(0.0, 1.0)];
    b.extend(f.j4.iter().map(|&j| (j, 1.0)));
    FoxHSpec { m: f.delta + 1, n: 1, a, b }
}

/// `H^{δ,1}_{s+1,δ}[B4 (Uσ)^{-τ} | (1-x,τ), (j3,1); (j4,1)]`.
fn h2_spec(f: &DggLink, x: f64) -> FoxHSpec {
    let mut a = vec![(1.0 - x, f.tau)];
    a.extend(f.j3.iter().map(|&j| (j, 1.0)));
    FoxHSpec { m: f.delta, n: 1, a, b: f.j4.iter().map(|&j| (j, 1.0)).collect() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum RKind {
    /// `∫ γ^{z-1} e^{-σγ} (1 - F_f) dγ`
    Ccdf,
    /// `∫ γ^{z} e^{-σγ} f_f dγ`
    Pdf,
}

/// Strictly positive secrecy capacity, `Pr{γ_d > γ_re}`.
pub fn spsc1(cfg: &Scenario1Config) -> Result<Metric> {
    let (m, e, f) = (&cfg.rf_main, &cfg.rf_eve, &cfg.fso_main);
    // Every R term is B3·σ^{-z}·H(z, σ) (times τ for the density terms).
    let mut wanted: Vec<(RKind, u32, u64)> = Vec::new();
    for n0 in 0..2 {
        let l = m.l[n0];
        for v in 0..m.mu {
            let z2 = m.mu - v;
            wanted.push((RKind::Ccdf, z2, l.to_bits()));
            for x in 0..z2 {
                wanted.push((RKind::Pdf, x, l.to_bits()));
            }
            for ne in 0..2 {
                let hh = l + e.l[ne];
                for w in 0..e.mu {
                    for y in 0..(e.mu - w) {
                        wanted.push((RKind::Ccdf, z2 + y, hh.to_bits()));
                        for x in 0..z2 {
                            wanted.push((RKind::Pdf, x + y, hh.to_bits()));
                        }
                    }
                }
            }
        }
    }
    wanted.sort();
    wanted.dedup();
    let r: HashMap<(RKind, u32, u64), f64> = wanted
        .par_iter()
        .map(|&(kind, z, sb)| {
            let sigma = f64::from_bits(sb);
            let ln_arg = f.ln_b4 - f.tau * (f.electrical_snr.ln() + sigma.ln());
            let zf = f64::from(z);
            let (spec, pre) = match kind {
                RKind::Ccdf => (h1_spec(f, zf), 0.0),
                RKind::Pdf => (h2_spec(f, zf), f.tau.ln()),
            };
            let h = spec.eval_ln(ln_arg, &f.opts)?.value;
            Ok(((kind, z, sb), h.mul_exp(pre + f.ln_b3 - zf * sigma.ln()).to_f64()))
        })
        .collect::<Result<_>>()?;
    let rv = |kind, z: u32, sigma: f64| r[&(kind, z, sigma.to_bits())];

    let mut acc = Compensated::default();
    for n0 in 0..2 {
        let l = m.l[n0];
        for v in 0..m.mu {
            let z2 = m.mu - v;
            let xv = m.x[n0][v as usize];
            let yv = m.y[n0][v as usize];
            let lx = |x: u32| (f64::from(x) * l.ln() - ln_factorial(x)).exp();
            let mut inner = xv * rv(RKind::Ccdf, z2, l);
            for x in 0..z2 {
                inner += lx(x) * yv * rv(RKind::Pdf, x, l);
            }
            let mut eve = Compensated::default();
            for ne in 0..2 {
                let le = e.l[ne];
                let hh = l + le;
                for w in 0..e.mu {
                    for y in 0..(e.mu - w) {
                        let ly = (f64::from(y) * le.ln() - ln_factorial(y)).exp() * e.y[ne][w as usize];
                        let mut t = xv * rv(RKind::Ccdf, z2 + y, hh);
                        for x in 0..z2 {
                            t += lx(x) * yv * rv(RKind::Pdf, x + y, hh);
                        }
                        eve.add(ly * t);
                    }
                }
            }
            acc.add(inner - e.coef * eve.value());
        }
    }
    Metric::new(m.coef * acc.value())
}

/// `Pr{γ_d ≤ φ1 γ_re + φ1 − 1}` by adaptive quadrature over the
/// eavesdropper density.
pub fn sop1_exact_quadrature(cfg: &Scenario1Config) -> Result<Metric> {
    let (m, e, f) = (&cfg.rf_main, &cfg.rf_eve, &cfg.fso_main);
    let phi1 = cfg.phi1();
    let scale = e.avg_snr;
    let opts = QuadOptions { abs_tol: 1e-10, rel_tol: 1e-10, max_evals: 20_000 };
    let survive = integrate_to_infinity(
        |y| {
            let g = scale * y;
            let pe = e.pdf(g)?;
            if pe == 0.0 {
                return Ok(0.0);
            }
            let u = phi1 * g + phi1 - 1.0;
            Ok(scale * pe * m.ccdf(u)? * f.ccdf(u)?)
        },
        0.0,
        &opts,
    )?;
    Metric::new(1.0 - survive.value)
}
