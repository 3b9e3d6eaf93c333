//! Scenario configuration, figure presets and parameter sweeps.
//!
//! A sweep varies one parameter of a [`ScenarioConfig`] and evaluates the
//! requested metrics with the requested evaluators at every point, writing
//! one CSV row per `(curve, point, metric, evaluator)`.

mod config;
mod presets;
mod sweep;

pub use config::{load_config, parse_config};
pub use presets::{figure_preset, preset_names, Preset};
pub use sweep::{run_sweep, write_csv, ResultRow, CSV_HEADER};

use std::fmt;
use std::str::FromStr;

use crate::channels::{Detection, DggLink, EtaMuLink, Turbulence};
use crate::error::{Error, Result};
use crate::montecarlo::DEFAULT_SAMPLES;
use crate::secrecy::{Scenario1Config, Scenario2Config};

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Parameters of all four links plus the target rate. SNRs are kept in dB
/// here and converted when the links are built.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub eta0: f64,
    pub mu0: u32,
    pub phi_sr_db: f64,
    pub eta_e: f64,
    pub mu_e: u32,
    pub phi_se_db: f64,
    pub turbulence: Turbulence,
    pub eps: f64,
    pub s0: Detection,
    pub se: Detection,
    pub ud_db: f64,
    pub ue_db: f64,
    pub target_rate: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            eta0: 20.0,
            mu0: 2,
            phi_sr_db: 10.0,
            eta_e: 20.0,
            mu_e: 2,
            phi_se_db: 0.0,
            turbulence: Turbulence::WEAK,
            eps: 1.0,
            s0: Detection::Hd,
            se: Detection::Hd,
            ud_db: 20.0,
            ue_db: 0.0,
            target_rate: 0.5,
        }
    }
}

/// The built links of one sweep point.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub s1: Scenario1Config,
    pub s2: Scenario2Config,
}

impl ScenarioConfig {
    pub fn with_axis(&self, axis: Axis, value: f64) -> ScenarioConfig {
        let mut c = self.clone();
        match axis {
            Axis::PhiSrDb => c.phi_sr_db = value,
            Axis::PhiSeDb => c.phi_se_db = value,
            Axis::UdDb => c.ud_db = value,
            Axis::UeDb => c.ue_db = value,
            Axis::TargetRate => c.target_rate = value,
            Axis::Eps => c.eps = value,
        }
        c
    }

    pub fn rf_main(&self) -> Result<EtaMuLink> {
        EtaMuLink::new(self.eta0, self.mu0, db_to_linear(self.phi_sr_db))
    }

    pub fn rf_eve(&self) -> Result<EtaMuLink> {
        EtaMuLink::new(self.eta_e, self.mu_e, db_to_linear(self.phi_se_db))
    }

    pub fn fso_main(&self) -> Result<DggLink> {
        DggLink::new(self.turbulence, self.eps, self.s0, db_to_linear(self.ud_db))
    }

    pub fn fso_eve(&self) -> Result<DggLink> {
        DggLink::new(self.turbulence, self.eps, self.se, db_to_linear(self.ue_db))
    }

    pub fn build(&self) -> Result<Scenario> {
        let rf = self.rf_main()?;
        let fso = self.fso_main()?;
        Ok(Scenario {
            s1: Scenario1Config::new(rf.clone(), self.rf_eve()?, fso.clone(), self.target_rate)?,
            s2: Scenario2Config::new(rf, fso, self.fso_eve()?, self.target_rate)?,
        })
    }
}

macro_rules! named_enum {
    ($(#[$m:meta])* $name:ident { $($var:ident => $s:literal),+ $(,)? }) => {
        $(#[$m])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name { $($var),+ }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$var),+];

            pub fn as_str(self) -> &'static str {
                match self { $($name::$var => $s),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim() {
                    $($s => Ok($name::$var),)+
                    other => Err(Error::Config(format!(
                        "unknown {} '{other}', expected one of: {}",
                        stringify!($name).to_lowercase(),
                        [$($s),+].join(", ")
                    ))),
                }
            }
        }
    };
}

named_enum!(
    /// Swept parameter.
    Axis {
        PhiSrDb => "phi_sr_db",
        PhiSeDb => "phi_se_db",
        UdDb => "Ud_db",
        UeDb => "Ue_db",
        TargetRate => "target_rate",
        Eps => "eps",
    }
);

named_enum!(Metric {
    Sop1 => "sop1",
    Sop2 => "sop2",
    Spsc1 => "spsc1",
    Spsc2 => "spsc2",
});

named_enum!(
    /// `mc` simulates the event the closed form computes (the lower-bound
    /// event for SOP); `mc_exact` simulates the exact SOP event.
    Evaluator {
        Closed => "closed",
        Asymptotic => "asymptotic",
        ExactQuadrature => "exact_quadrature",
        Mc => "mc",
        McExact => "mc_exact",
    }
);

impl Metric {
    pub fn is_sop(self) -> bool {
        matches!(self, Metric::Sop1 | Metric::Sop2)
    }
}

impl Evaluator {
    pub fn supports(self, m: Metric) -> bool {
        match self {
            Evaluator::Asymptotic | Evaluator::McExact => m.is_sop(),
            _ => true,
        }
    }

    pub fn is_mc(self) -> bool {
        matches!(self, Evaluator::Mc | Evaluator::McExact)
    }
}

/// Parses a comma-separated list, sorted and deduplicated.
pub fn parse_list<T: FromStr<Err = Error> + Ord>(s: &str) -> Result<Vec<T>> {
    let mut v = s.split(',').filter(|x| !x.trim().is_empty()).map(T::from_str).collect::<Result<Vec<T>>>()?;
    v.sort();
    v.dedup();
    if v.is_empty() {
        return Err(Error::Config("empty list".into()));
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub metrics: Vec<Metric>,
    pub evaluators: Vec<Evaluator>,
    pub mc_samples: u64,
    pub seed: u64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            axis: Axis::UdDb,
            start: 0.0,
            stop: 40.0,
            points: 21,
            metrics: vec![Metric::Sop1],
            evaluators: vec![Evaluator::Closed],
            mc_samples: DEFAULT_SAMPLES,
            seed: 1,
        }
    }
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points - 1;
        (0..self.points).map(|i| self.start + (self.stop - self.start) * i as f64 / n as f64).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start < self.stop) {
            return Err(Error::Config(format!("sweep needs start < stop, got {} and {}", self.start, self.stop)));
        }
        if self.points < 2 {
            return Err(Error::Config(format!("sweep needs at least 2 points, got {}", self.points)));
        }
        if self.metrics.is_empty() || self.evaluators.is_empty() {
            return Err(Error::Config("sweep needs at least one metric and one evaluator".into()));
        }
        for &e in &self.evaluators {
            for &m in &self.metrics {
                if !e.supports(m) {
                    return Err(Error::Config(format!("evaluator {e} is only defined for sop1 and sop2, not {m}")));
                }
            }
        }
        if self.evaluators.iter().any(|e| e.is_mc()) && self.mc_samples < crate::montecarlo::MIN_SAMPLES {
            return Err(Error::Config(format!(
                "mc_samples must be at least {}, got {}",
                crate::montecarlo::MIN_SAMPLES,
                self.mc_samples
            )));
        }
        Ok(())
    }
}

/// A named scenario on a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    pub scenario: ScenarioConfig,
}

/// Checks every curve builds at both ends of the sweep.
pub fn validate(curves: &[Curve], sweep: &SweepSpec) -> Result<()> {
    sweep.validate()?;
    for c in curves {
        for v in [sweep.start, sweep.stop] {
            c.scenario
                .with_axis(sweep.axis, v)
                .build()
                .map_err(|e| Error::Config(format!("curve '{}' at {} = {v}: {e}", c.label, sweep.axis)))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enum_round_trip() {
        for a in Axis::ALL {
            assert_eq!(a.as_str().parse::<Axis>().unwrap(), *a);
        }
        assert!("Ud".parse::<Axis>().is_err());
        assert_eq!(parse_list::<Metric>("spsc2, sop1,sop1").unwrap(), vec![Metric::Sop1, Metric::Spsc2]);
    }

    #[test]
    fn sweep_grid() {
        let s = SweepSpec::default();
        let v = s.values();
        assert_eq!(v.len(), 21);
        assert_eq!(v[1], 2.0);
        assert_eq!(v[20], 40.0);
        let bad = SweepSpec { metrics: vec![Metric::Spsc1], evaluators: vec![Evaluator::Asymptotic], ..s };
        assert!(bad.validate().is_err());
    }
}
