//! Scenario 2: eavesdropper on the FSO hop.

use super::{ln_gamma_prod, pole_variants, Compensated, Metric, Scenario2Config};
use crate::channels::DggLink;
use crate::error::Result;
use crate::quadrature::{integrate_panels, QuadOptions};
use crate::specfun::{MeijerGSpec, Scaled};

/// `G^{δe+1,δ0}_{se+δ0+1,s0+δe+1}[· | 1-j4, 1, j5; j6, 0, 1-j3]` with the
/// main link's leading parameters `j4` supplied separately.
fn p_spec(main: &DggLink, eve: &DggLink, j4: &[f64]) -> MeijerGSpec {
    let mut a: Vec<f64> = j4.iter().map(|&j| 1.0 - j).collect();
    a.push(1.0);
    a.extend(eve.j3.iter().copied());
    let mut b = eve.j4.clone();
    b.push(0.0);
    b.extend(main.j3.iter().map(|&j| 1.0 - j));
    MeijerGSpec { m: eve.delta + 1, n: j4.len(), p: a.len(), q: b.len(), a_params: a, b_params: b, argument: 1.0 }
}

fn p_ln_arg(main: &DggLink, eve: &DggLink, phi2: f64) -> f64 {
    eve.ln_b4 - main.ln_b4 + main.tau * (main.electrical_snr.ln() - eve.electrical_snr.ln() - phi2.ln())
}

/// `Pr{γ_d0 ≤ φ2 γ_de}` in closed form.
fn below(main: &DggLink, eve: &DggLink, phi2: f64) -> Result<f64> {
    let g = p_spec(main, eve, &main.j4).eval_ln(p_ln_arg(main, eve, phi2), &main.opts)?;
    Ok(g.value.mul_exp(main.ln_b3 + eve.ln_b3).to_f64())
}

/// Leading residues at `s = j4_p`.
fn below_leading(main: &DggLink, eve: &DggLink, j4: &[f64], ln_z: f64) -> f64 {
    let mut acc = Compensated::default();
    for (p, &jp) in j4.iter().enumerate() {
        let (l1, s1) = ln_gamma_prod(j4.iter().enumerate().filter(|&(h, _)| h != p).map(|(_, &jh)| jh - jp));
        let (l2, s2) = ln_gamma_prod(eve.j4.iter().map(|&j| j + jp));
        let (l3, s3) = ln_gamma_prod(main.j3.iter().map(|&j| j - jp));
        let (l4, s4) = ln_gamma_prod(eve.j3.iter().map(|&j| j + jp));
        if s1 == 0.0 || s2 == 0.0 || s3 == 0.0 || s4 == 0.0 {
            continue;
        }
        acc.add(s1 * s2 * s3 * s4 * (l1 + l2 - l3 - l4 - jp.ln() - jp * ln_z).exp());
    }
    Scaled::from_f64(acc.value()).mul_exp(main.ln_b3 + eve.ln_b3).to_f64()
}

/// Lower bound on the secrecy outage probability:
/// `1 − (1 − F_r(φ2−1))·(1 − Pr{γ_d0 ≤ φ2 γ_de})`.
pub fn sop2_lower(cfg: &Scenario2Config) -> Result<Metric> {
    let phi2 = cfg.phi2();
    let p = below(&cfg.fso_main, &cfg.fso_eve, phi2)?;
    Metric::new(1.0 - cfg.rf_main.ccdf(phi2 - 1.0)? * (1.0 - p))
}

/// High-SNR asymptote of [`sop2_lower`].
pub fn sop2_asymptotic(cfg: &Scenario2Config) -> Result<Metric> {
    let (main, eve) = (&cfg.fso_main, &cfg.fso_eve);
    let phi2 = cfg.phi2();
    let (variants, pert) = pole_variants(&main.j4);
    let ln_z = p_ln_arg(main, eve, phi2);
    let p = variants.iter().map(|j4| below_leading(main, eve, j4, ln_z)).sum::<f64>() / variants.len() as f64;
    let mut m = Metric::new(1.0 - cfg.rf_main.ccdf(phi2 - 1.0)? * (1.0 - p))?;
    m.perturbation = pert;
    Ok(m)
}

/// `sop2_asymptotic − sop2_lower` from the Meijer G remainder past the
/// leading poles.
pub fn sop2_asymptotic_gap(cfg: &Scenario2Config) -> Result<f64> {
    let (main, eve) = (&cfg.fso_main, &cfg.fso_eve);
    let phi2 = cfg.phi2();
    let (variants, _) = pole_variants(&main.j4);
    let ln_z = p_ln_arg(main, eve, phi2);
    let mut rem = 0.0;
    for j4 in &variants {
        let mb = p_spec(main, eve, j4).as_fox_h().to_mellin()?;
        rem += mb.evaluate_beyond(ln_z, j4, false, &main.opts)?.value.mul_exp(main.ln_b3 + eve.ln_b3).to_f64();
    }
    rem /= variants.len() as f64;
    Ok(-cfg.rf_main.ccdf(phi2 - 1.0)? * rem)
}

/// Strictly positive secrecy capacity of the FSO pair, `Pr{γ_d0 > γ_de}`.
pub fn spsc2(cfg: &Scenario2Config) -> Result<Metric> {
    Metric::new(1.0 - below(&cfg.fso_main, &cfg.fso_eve, 1.0)?)
}

/// `1 − (1 − F_r(φ2−1))·Pr{γ_d0 > φ2 γ_de + φ2 − 1}` by quadrature over
/// `ln γ_de`.
pub fn sop2_exact_quadrature(cfg: &Scenario2Config) -> Result<Metric> {
    let (main, eve) = (&cfg.fso_main, &cfg.fso_eve);
    let phi2 = cfg.phi2();
    let u0 = eve.electrical_snr;
    let shift = |g: f64| phi2 * g + phi2 - 1.0;
    // Cut the log axis where the eavesdropper has negligible mass.
    let mut t_lo = 0.0;
    while eve.cdf(u0 * f64::exp(t_lo))? > 1e-13 && t_lo > -200.0 {
        t_lo -= 2.0;
    }
    let mut t_hi = 0.0;
    while eve.ccdf(u0 * f64::exp(t_hi))? > 1e-14 && t_hi < 60.0 {
        t_hi += 1.0;
    }
    let mut breaks = Vec::new();
    let mut t = t_lo;
    while t < t_hi {
        breaks.push(t);
        t += 1.0;
    }
    breaks.push(t_hi);
    let opts = QuadOptions { abs_tol: 1e-10, rel_tol: 1e-10, max_evals: 40_000 };
    let body = integrate_panels(
        |t| {
            let g = u0 * t.exp();
            Ok(g * eve.pdf(g)? * main.ccdf(shift(g))?)
        },
        &breaks,
        &opts,
    )?;
    let g_lo = u0 * t_lo.exp();
    let g_hi = u0 * t_hi.exp();
    let tails = eve.cdf(g_lo)? * main.ccdf(shift(g_lo))? + eve.ccdf(g_hi)? * main.ccdf(shift(g_hi))?;
    let secure = body.value + tails;
    Metric::new(1.0 - cfg.rf_main.ccdf(phi2 - 1.0)? * secure)
}
