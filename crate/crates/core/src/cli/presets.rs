//! Ready-made sweeps: one per reference figure plus the three turbulence
//! regimes on default link parameters.

use super::{Axis, Curve, Evaluator, Metric, ScenarioConfig, SweepSpec};
use crate::channels::special::ETA_SMALL;
use crate::channels::{Detection, Turbulence};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub curves: Vec<Curve>,
    pub sweep: SweepSpec,
}

pub fn preset_names() -> &'static [&'static str] {
    &["fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "st", "mt", "wt", "lognormal"]
}

const REGIMES: [(&str, Turbulence); 3] =
    [("st", Turbulence::STRONG), ("mt", Turbulence::MODERATE), ("wt", Turbulence::WEAK)];

fn sweep(axis: Axis, metric: Metric) -> SweepSpec {
    SweepSpec { axis, metrics: vec![metric], evaluators: vec![Evaluator::Closed, Evaluator::Mc], ..SweepSpec::default() }
}

fn curve(label: impl Into<String>, scenario: ScenarioConfig) -> Curve {
    Curve { label: label.into(), scenario }
}

/// Turbulence regime × detection, `se` following `s0`.
fn regimes_by_detection(base: &ScenarioConfig) -> Vec<Curve> {
    let mut out = Vec::new();
    for (name, t) in REGIMES {
        for d in [Detection::Hd, Detection::ImDd] {
            let sc = ScenarioConfig { turbulence: t, s0: d, se: d, ..base.clone() };
            out.push(curve(format!("{name} s={}", d.s()), sc));
        }
    }
    out
}

fn regimes_by_eps(base: &ScenarioConfig) -> Vec<Curve> {
    let mut out = Vec::new();
    for (name, t) in REGIMES {
        for eps in [1.0, 6.7] {
            out.push(curve(format!("{name} eps={eps}"), ScenarioConfig { turbulence: t, eps, ..base.clone() }));
        }
    }
    out
}

/// The supported rows of the special-case overlay table: RF family
/// `(η, μ)` and FSO turbulence.
fn special_rows() -> Vec<(&'static str, f64, u32, Turbulence)> {
    let unit = Turbulence { a1: 1.0, a2: 1.0, b1: 1.0, b2: 1.0, omega1: 1.0, omega2: 1.0, lambda1: 1, lambda2: 1 };
    vec![
        ("rayleigh-k", ETA_SMALL, 1, Turbulence { b2: 1.8, ..unit }),
        ("rayleigh-double-weibull", ETA_SMALL, 1, Turbulence { a1: 2.1, a2: 2.1, omega1: 1.07, omega2: 1.06, ..unit }),
        ("nakagami-dgg", 20.0, 2, Turbulence::MODERATE),
        ("eta-mu-gamma-gamma", 100.0, 2, Turbulence { b1: 2.296, b2: 1.822, ..unit }),
    ]
}

pub fn figure_preset(name: &str) -> Result<Preset> {
    let d = ScenarioConfig::default();
    let (curves, sweep) = match name {
        "fig1" => {
            let base = ScenarioConfig { ud_db: 10.0, ..d };
            let curves = [10.0, 0.0, -10.0]
                .iter()
                .map(|&p| curve(format!("phi_se_db={p}"), ScenarioConfig { phi_se_db: p, ..base.clone() }))
                .collect();
            (curves, sweep(Axis::PhiSrDb, Metric::Spsc1))
        }
        "fig2" => {
            let base = ScenarioConfig { turbulence: Turbulence::STRONG, ..d };
            let curves = [30.0, 10.0, -10.0]
                .iter()
                .map(|&u| curve(format!("Ue_db={u}"), ScenarioConfig { ue_db: u, ..base.clone() }))
                .collect();
            (curves, sweep(Axis::UdDb, Metric::Spsc2))
        }
        "fig3" => {
            let base = ScenarioConfig { eta0: 50.0, eta_e: 50.0, mu0: 3, mu_e: 3, ..d };
            let mut sw = sweep(Axis::UdDb, Metric::Sop1);
            sw.evaluators = vec![Evaluator::Closed, Evaluator::Asymptotic, Evaluator::Mc];
            (regimes_by_detection(&base), sw)
        }
        "fig4" => {
            let base = ScenarioConfig { eta0: 25.0, eta_e: 25.0, mu0: 2, mu_e: 2, phi_sr_db: 5.0, ..d };
            (regimes_by_detection(&base), sweep(Axis::UdDb, Metric::Spsc1))
        }
        "fig5" => {
            let base = ScenarioConfig { eta0: 5.0, mu0: 1, phi_sr_db: 12.0, ue_db: -10.0, ..d };
            (regimes_by_detection(&base), sweep(Axis::UdDb, Metric::Sop2))
        }
        "fig6" => {
            let base = ScenarioConfig { eta0: 25.0, eta_e: 25.0, mu0: 4, mu_e: 4, phi_sr_db: 5.0, ..d };
            (regimes_by_eps(&base), sweep(Axis::UdDb, Metric::Sop1))
        }
        "fig7" => {
            let base = ScenarioConfig { eta0: 2.0, mu0: 1, phi_sr_db: 10.0, ue_db: -12.0, ..d };
            (regimes_by_eps(&base), sweep(Axis::UdDb, Metric::Sop2))
        }
        "fig8" => {
            let base = ScenarioConfig { ue_db: -10.0, ..d };
            (regimes_by_eps(&base), sweep(Axis::UdDb, Metric::Spsc2))
        }
        "fig9" => {
            let base = ScenarioConfig { phi_se_db: -5.0, ud_db: 5.0, eps: 6.7, ..d };
            let curves = special_rows()
                .into_iter()
                .map(|(label, eta, mu, t)| {
                    curve(label, ScenarioConfig { eta0: eta, eta_e: eta, mu0: mu, mu_e: mu, turbulence: t, ..base.clone() })
                })
                .collect();
            (curves, sweep(Axis::PhiSrDb, Metric::Sop1))
        }
        "fig10" => {
            let base = ScenarioConfig { phi_sr_db: 12.0, ue_db: -5.0, ..d };
            let curves = special_rows()
                .into_iter()
                .map(|(label, eta, mu, t)| {
                    curve(label, ScenarioConfig { eta0: eta, eta_e: eta, mu0: mu, mu_e: mu, turbulence: t, ..base.clone() })
                })
                .collect();
            (curves, sweep(Axis::UdDb, Metric::Sop2))
        }
        "st" | "mt" | "wt" => {
            let t = REGIMES.iter().find(|r| r.0 == name).map(|r| r.1).unwrap_or(Turbulence::WEAK);
            let mut sw = sweep(Axis::UdDb, Metric::Sop1);
            sw.metrics = Metric::ALL.to_vec();
            (vec![curve(name, ScenarioConfig { turbulence: t, ..d })], sw)
        }
        "lognormal" => {
            return Err(Error::Unsupported(
                "the lognormal row needs a1, a2 -> 0 and b1, b2 -> infinity; the DGG closed forms cannot be evaluated \
                 numerically in that limit"
                    .into(),
            ))
        }
        other => {
            return Err(Error::Config(format!("unknown preset '{other}', expected one of: {}", preset_names().join(", "))))
        }
    };
    Ok(Preset { curves, sweep })
}
