//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Exits 0 after printing every line so the rest of `cargo test` still
//! runs; set `ACCEPTANCE_STRICT=1` to exit 1 when any criterion fails.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use common::{closed, gamma_gamma_cdf, integrate_log, k0_asymptotic, k0_series, logspace, ordering_violations, rel_err};
use rfso_secrecy::channels::special::{gamma_gamma, nakagami_m, rayleigh};
use rfso_secrecy::channels::{Detection, DggLink, EtaMuLink, RngStream, Turbulence};
use rfso_secrecy::cli::{figure_preset, Axis, Metric, ScenarioConfig};
use rfso_secrecy::montecarlo::{estimate_sop1, estimate_sop2, estimate_spsc1, estimate_spsc2, MCEstimate};
use rfso_secrecy::secrecy::{
    sop1_asymptotic_gap, sop1_exact_quadrature, sop1_lower, sop2_asymptotic_gap, sop2_exact_quadrature, sop2_lower,
    spsc1, spsc2,
};
use rfso_secrecy::specfun::{meijer_g, EvalOptions, MeijerGSpec};
use statrs::function::gamma::gamma_lr;

const SEED: u64 = 20261016;

const REGIMES: [Turbulence; 3] = [Turbulence::STRONG, Turbulence::MODERATE, Turbulence::WEAK];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(t: Duration, limit_s: u64) -> bool {
    t.as_secs_f64() < limit_s as f64
}

fn g(m: usize, n: usize, a: &[f64], b: &[f64], z: f64) -> f64 {
    let spec = MeijerGSpec::new(m, n, a.to_vec(), b.to_vec(), z).unwrap();
    meijer_g(&spec, &EvalOptions::default()).unwrap()
}

fn c1_identities() -> Outcome {
    let t = Instant::now();
    let pts = logspace(1e-2, 50.0, 40);
    let e1 = pts.iter().map(|&z| rel_err(g(1, 0, &[], &[0.0], z), (-z).exp())).fold(0.0, f64::max);
    let e2 = pts.iter().map(|&z| rel_err(g(1, 1, &[0.0], &[0.0], z), 1.0 / (1.0 + z))).fold(0.0, f64::max);
    // G^{2,0}_{0,2}[z | -; 0, 0] = 2 K_0(2√z): series below 9, expansion above 25.
    let mut e3 = 0.0f64;
    for z in logspace(1e-2, 9.0, 40) {
        e3 = e3.max(rel_err(g(2, 0, &[], &[0.0, 0.0], z), 2.0 * k0_series(2.0 * z.sqrt())));
    }
    for z in logspace(25.0, 50.0, 10) {
        e3 = e3.max(rel_err(g(2, 0, &[], &[0.0, 0.0], z), 2.0 * k0_asymptotic(2.0 * z.sqrt())));
    }
    let el = t.elapsed();
    outcome(
        e1 <= 1e-10 && e2 <= 1e-10 && e3 <= 1e-8 && within(el, 10),
        format!("exp {e1:.1e}, 1/(1+z) {e2:.1e}, K0 {e3:.1e}, {:.2}s", el.as_secs_f64()),
    )
}

fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64) -> f64 {
    let h = 1e-4 * x;
    (f(x + h) - f(x - h)) / (2.0 * h)
}

fn c2_distributions() -> Outcome {
    let t = Instant::now();
    let (mut norm, mut deriv) = (0.0f64, 0.0f64);
    for eta in [0.5, 5.0, 20.0, 50.0] {
        for mu in 1..=4 {
            let l = EtaMuLink::new(eta, mu, 1.0).unwrap();
            norm = norm.max((integrate_log(|x| l.pdf(x).unwrap(), -30.0, 6.0, 1e-10) - 1.0).abs());
            for x in logspace(0.02, 5.0, 20) {
                deriv = deriv.max(rel_err(central_diff(|y| l.cdf(y).unwrap(), x), l.pdf(x).unwrap()));
            }
        }
    }
    for tb in REGIMES {
        for d in [Detection::Hd, Detection::ImDd] {
            for eps in [1.0, 6.7] {
                let l = DggLink::new(tb, eps, d, 10.0).unwrap();
                let u = l.electrical_snr;
                norm = norm.max((integrate_log(|x| l.pdf(x).unwrap(), u.ln() - 60.0, u.ln() + 30.0, 1e-9) - 1.0).abs());
                for x in logspace(0.05 * u, 5.0 * u, 20) {
                    let d = if l.cdf(x).unwrap() < 0.5 {
                        central_diff(|y| l.cdf(y).unwrap(), x)
                    } else {
                        -central_diff(|y| l.ccdf(y).unwrap(), x)
                    };
                    deriv = deriv.max(rel_err(d, l.pdf(x).unwrap()));
                }
            }
        }
    }
    let el = t.elapsed();
    outcome(
        norm <= 1e-6 && deriv <= 1e-4 && within(el, 300),
        format!("normalization {norm:.1e}, derivative {deriv:.1e}, {:.1}s", el.as_secs_f64()),
    )
}

fn c3_reductions() -> Outcome {
    let mut ray = 0.0f64;
    for avg in [0.1, 1.0, 10.0, 300.0] {
        let l = rayleigh(avg).unwrap();
        for x in logspace(1e-4 * avg, 40.0 * avg, 400) {
            ray = ray.max((l.cdf(x).unwrap() - (1.0 - (-x / avg).exp())).abs());
        }
    }
    let mut nak = 0.0f64;
    for m in 1..=4 {
        let mf = f64::from(m);
        for avg in [0.5, 10.0] {
            let l = nakagami_m(mf, avg).unwrap();
            for x in logspace(1e-4 * avg, 20.0 * avg, 400) {
                nak = nak.max((l.cdf(x).unwrap() - gamma_lr(mf, mf * x / avg)).abs());
            }
        }
    }
    let mut gg = 0.0f64;
    for d in [Detection::Hd, Detection::ImDd] {
        let l = gamma_gamma(2.296, 1.822, 1.0, d, 10.0).unwrap();
        for x in logspace(1e-2, 300.0, 12) {
            gg = gg.max(rel_err(l.cdf(x).unwrap(), gamma_gamma_cdf(2.296, 1.822, 1.0, d.s() as u32, 10.0, x)));
        }
    }
    outcome(
        ray <= 1e-5 && nak <= 1e-5 && gg <= 1e-8,
        format!("Rayleigh sup {ray:.1e}, Nakagami sup {nak:.1e}, Gamma-Gamma rel {gg:.1e}"),
    )
}

fn estimate(metric: Metric, sc: &ScenarioConfig, n: u64, rng: &RngStream) -> MCEstimate {
    let s = sc.build().unwrap();
    match metric {
        Metric::Sop1 => estimate_sop1(&s.s1, n, rng, false),
        Metric::Sop2 => estimate_sop2(&s.s2, n, rng, false),
        Metric::Spsc1 => estimate_spsc1(&s.s1, n, rng),
        Metric::Spsc2 => estimate_spsc2(&s.s2, n, rng),
    }
    .unwrap()
}

fn c4_closed_vs_mc() -> Outcome {
    let t = Instant::now();
    let mut total = 0u64;
    let mut worst = 0.0f64;
    let mut misses = Vec::new();
    for fig in ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"] {
        let p = figure_preset(fig).unwrap();
        let (a, b) = (p.sweep.start, p.sweep.stop);
        for c in &p.curves {
            for x in [a, 0.5 * (a + b), b] {
                let sc = c.scenario.with_axis(p.sweep.axis, x);
                for &m in Metric::ALL {
                    let v = closed(m, &sc).value;
                    let est = estimate(m, &sc, 1_000_000, &RngStream::new(SEED, total));
                    total += 1;
                    let s = est.std_error.max((v * (1.0 - v) / est.n_samples as f64).sqrt());
                    let z = (est.value - v).abs() / s;
                    worst = worst.max(z);
                    if !est.agrees_with(v, 3.0) {
                        misses.push((fig, c.label.clone(), x, m, v, est, z));
                    }
                }
            }
        }
    }
    let el = t.elapsed();
    let mut detail = format!(
        "{} of {total} comparisons beyond 3σ (largest {worst:.2}σ), {:.0}s",
        misses.len(),
        el.as_secs_f64()
    );
    for (k, (fig, label, x, m, v, est, z)) in misses.iter().enumerate() {
        let sc = figure_preset(fig).unwrap().curves.into_iter().find(|c| &c.label == label).unwrap().scenario;
        let sc = sc.with_axis(figure_preset(fig).unwrap().sweep.axis, *x);
        let big = estimate(*m, &sc, 10_000_000, &RngStream::new(SEED + 1, k as u64));
        let zb = (big.value - v).abs() / big.std_error.max(1e-300);
        detail.push_str(&format!(
            "\n      {fig} '{label}' at {x} {m}: closed {v:.6e}, mc {:.6e} ({z:.2}σ); independent 1e7 run {:.6e} ({zb:.2}σ)",
            est.value, big.value
        ));
    }
    outcome(misses.is_empty() && within(el, 1800), detail)
}

fn matrix() -> Vec<ScenarioConfig> {
    let mut v = Vec::new();
    for t in REGIMES {
        for d in [Detection::Hd, Detection::ImDd] {
            for eps in [1.0, 6.7] {
                v.push(ScenarioConfig { turbulence: t, s0: d, se: d, eps, ..ScenarioConfig::default() });
            }
        }
    }
    v
}

fn c5_complements() -> Outcome {
    let (mut e1, mut e2) = (0.0f64, 0.0f64);
    for base in matrix() {
        for ud in [0.0, 20.0, 40.0] {
            let s = ScenarioConfig { target_rate: 0.0, ud_db: ud, ue_db: 5.0, ..base.clone() }.build().unwrap();
            e1 = e1.max((sop1_lower(&s.s1).unwrap().raw + spsc1(&s.s1).unwrap().raw - 1.0).abs());
            e2 = e2.max((sop2_lower(&s.s2).unwrap().raw + spsc2(&s.s2).unwrap().raw - 1.0).abs());
        }
    }
    outcome(e1 <= 1e-8 && e2 <= 1e-8, format!("scenario 1 {e1:.1e}, scenario 2 {e2:.1e} over 36 configs"))
}

fn c6_bound_direction() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    let mut n = 0;
    for base in matrix() {
        for rate in [0.5, 1.5] {
            let s = ScenarioConfig { target_rate: rate, ud_db: 10.0, ..base.clone() }.build().unwrap();
            worst = worst.max(sop1_lower(&s.s1).unwrap().value - sop1_exact_quadrature(&s.s1).unwrap().value);
            n += 1;
        }
    }
    for base in matrix().into_iter().filter(|b| b.eps == 1.0) {
        let s = ScenarioConfig { target_rate: 1.0, ue_db: -5.0, ..base }.build().unwrap();
        worst = worst.max(sop2_lower(&s.s2).unwrap().value - sop2_exact_quadrature(&s.s2).unwrap().value);
        n += 1;
    }
    outcome(worst <= 1e-7, format!("max(lower - exact) = {worst:.2e} over {n} configs"))
}

fn c7_asymptotes() -> Outcome {
    let mut ok = true;
    let mut worst80 = 0.0f64;
    let mut notes = Vec::new();
    for fig in ["fig3", "fig5"] {
        for c in figure_preset(fig).unwrap().curves {
            let mut prev = f64::INFINITY;
            for ud in [40.0, 50.0, 60.0, 70.0, 80.0] {
                let s = c.scenario.with_axis(Axis::UdDb, ud).build().unwrap();
                let rel = if fig == "fig3" {
                    sop1_asymptotic_gap(&s.s1).unwrap().abs() / sop1_lower(&s.s1).unwrap().raw
                } else {
                    sop2_asymptotic_gap(&s.s2).unwrap().abs() / sop2_lower(&s.s2).unwrap().raw
                };
                if !(rel < prev) {
                    ok = false;
                    notes.push(format!("{fig} '{}' not decreasing at {ud} dB", c.label));
                }
                prev = rel;
            }
            worst80 = worst80.max(prev);
        }
    }
    ok &= worst80 <= 0.01;
    let mut d = format!("largest relative gap at 80 dB {worst80:.2e}");
    for n in notes {
        d.push_str(&format!("\n      {n}"));
    }
    outcome(ok, d)
}

fn c8_orderings() -> Outcome {
    let grid: Vec<f64> = (0..=20).map(|k| 2.0 * f64::from(k)).collect();
    let (checked, bad) = ordering_violations(&grid);
    let mut d = format!("{} of {checked} pointwise orderings violated", bad.len());
    for v in &bad {
        d.push_str(&format!(
            "\n      {} at Ud = {} dB: '{}' {:.6e} vs '{}' {:.6e}",
            v.figure, v.ud_db, v.better, v.values.0, v.worse, v.values.1
        ));
    }
    outcome(bad.is_empty(), d)
}

fn c9_symmetry() -> Outcome {
    let mut worst = 0.0f64;
    for base in matrix() {
        for u in [-5.0, 20.0, 45.0] {
            let sc = ScenarioConfig { ud_db: u, ue_db: u, ..base.clone() };
            worst = worst.max((closed(Metric::Spsc2, &sc).raw - 0.5).abs());
        }
    }
    outcome(worst <= 1e-8, format!("max |spsc2 - 0.5| = {worst:.1e} over 36 configs"))
}

fn c10_reproducible() -> Outcome {
    let run = |args: &[&str]| Command::new(env!("CARGO_BIN_EXE_rfso-secrecy")).args(args).output().unwrap();
    let cases: [&[&str]; 3] = [
        &["--preset", "fig3", "--points", "5", "--mc-samples", "20000", "--seed", "9"],
        &["--preset", "fig10", "--points", "4", "--evaluators", "closed,mc,mc_exact", "--mc-samples", "20000", "--seed", "9"],
        &["--preset", "wt", "--points", "3", "--evaluators", "closed,exact_quadrature,mc", "--mc-samples", "10000", "--seed", "123"],
    ];
    let mut ok = true;
    let mut bytes = 0;
    for args in cases {
        let (a, b) = (run(args), run(args));
        ok &= a.status.success() && a.stdout == b.stdout && !a.stdout.is_empty();
        bytes += a.stdout.len();
    }
    outcome(ok, format!("3 invocations, {bytes} bytes compared"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("special-function identities", c1_identities),
        ("distribution normalization and derivatives", c2_distributions),
        ("special-case reductions", c3_reductions),
        ("closed form vs Monte Carlo (1e6)", c4_closed_vs_mc),
        ("complement identities at zero rate", c5_complements),
        ("lower bound below exact SOP", c6_bound_direction),
        ("asymptote tightness", c7_asymptotes),
        ("qualitative orderings", c8_orderings),
        ("identical-link symmetry", c9_symmetry),
        ("CLI reproducibility", c10_reproducible),
    ];
    let mut passed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        passed += usize::from(o.pass);
        println!("[{}] criterion {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {passed} of {} criteria passed", criteria.len());
    if passed < criteria.len() && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
