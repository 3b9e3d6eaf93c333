//! Sweep evaluation and CSV output.

use std::io::{self, Write};

use rayon::prelude::*;

use super::{Axis, Curve, Evaluator, Metric, Scenario, SweepSpec};
use crate::channels::RngStream;
use crate::error::{Error, Result};
use crate::montecarlo::{estimate_sop1, estimate_sop2, estimate_spsc1, estimate_spsc2};
use crate::secrecy::{self, Scenario1Config, Scenario2Config};

pub const CSV_HEADER: &str = "axis_name,axis_value,metric,evaluator,value,std_error,n_samples,error_flag,curve";

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub curve: String,
    pub axis: Axis,
    pub axis_value: f64,
    pub metric: Metric,
    pub evaluator: Evaluator,
    pub value: Option<f64>,
    pub std_error: Option<f64>,
    pub n_samples: Option<u64>,
    /// Empty, `clamped`, or the error kind of a failed cell.
    pub error_flag: String,
    pub error: Option<String>,
}

impl ResultRow {
    pub fn failed(&self) -> bool {
        self.error.is_some()
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Pole { .. } => "pole",
        Error::Degenerate(_) => "degenerate",
        Error::Accuracy { .. } => "accuracy",
        Error::Domain(_) => "domain",
        Error::InvalidParameter(_) => "invalid_parameter",
        Error::Unsupported(_) => "unsupported",
        Error::Quadrature { .. } => "quadrature",
        Error::Parse { .. } | Error::Config(_) => "config",
    }
}

struct Outcome {
    value: f64,
    std_error: Option<f64>,
    n_samples: Option<u64>,
    clamped: bool,
}

fn closed(m: secrecy::Metric) -> Outcome {
    Outcome { value: m.value, std_error: None, n_samples: None, clamped: m.clamped() }
}

fn complement(m: secrecy::Metric) -> Outcome {
    Outcome { value: 1.0 - m.value, std_error: None, n_samples: None, clamped: m.clamped() }
}

fn at_zero_rate1(c: &Scenario1Config) -> Scenario1Config {
    Scenario1Config { target_rate: 0.0, ..c.clone() }
}

fn at_zero_rate2(c: &Scenario2Config) -> Scenario2Config {
    Scenario2Config { target_rate: 0.0, ..c.clone() }
}

fn evaluate(sc: &Scenario, metric: Metric, ev: Evaluator, n: u64, rng: &RngStream) -> Result<Outcome> {
    use Evaluator as E;
    use Metric as M;
    let mc = |e: crate::montecarlo::MCEstimate| Outcome {
        value: e.value,
        std_error: Some(e.std_error),
        n_samples: Some(e.n_samples),
        clamped: false,
    };
    Ok(match (metric, ev) {
        (M::Sop1, E::Closed) => closed(secrecy::sop1_lower(&sc.s1)?),
        (M::Sop1, E::Asymptotic) => closed(secrecy::sop1_asymptotic(&sc.s1)?),
        (M::Sop1, E::ExactQuadrature) => closed(secrecy::sop1_exact_quadrature(&sc.s1)?),
        (M::Sop1, E::Mc) => mc(estimate_sop1(&sc.s1, n, rng, false)?),
        (M::Sop1, E::McExact) => mc(estimate_sop1(&sc.s1, n, rng, true)?),
        (M::Sop2, E::Closed) => closed(secrecy::sop2_lower(&sc.s2)?),
        (M::Sop2, E::Asymptotic) => closed(secrecy::sop2_asymptotic(&sc.s2)?),
        (M::Sop2, E::ExactQuadrature) => closed(secrecy::sop2_exact_quadrature(&sc.s2)?),
        (M::Sop2, E::Mc) => mc(estimate_sop2(&sc.s2, n, rng, false)?),
        (M::Sop2, E::McExact) => mc(estimate_sop2(&sc.s2, n, rng, true)?),
        (M::Spsc1, E::Closed) => closed(secrecy::spsc1(&sc.s1)?),
        (M::Spsc1, E::ExactQuadrature) => complement(secrecy::sop1_exact_quadrature(&at_zero_rate1(&sc.s1))?),
        (M::Spsc1, E::Mc) => mc(estimate_spsc1(&sc.s1, n, rng)?),
        (M::Spsc2, E::Closed) => closed(secrecy::spsc2(&sc.s2)?),
        (M::Spsc2, E::ExactQuadrature) => complement(secrecy::sop2_exact_quadrature(&at_zero_rate2(&sc.s2))?),
        (M::Spsc2, E::Mc) => mc(estimate_spsc2(&sc.s2, n, rng)?),
        (m, e) => return Err(Error::Unsupported(format!("evaluator {e} for {m}"))),
    })
}

/// Stream id of one Monte-Carlo cell; distinct per curve, point, metric
/// and event.
fn stream_id(curve: usize, point: usize, metric: Metric, ev: Evaluator) -> u64 {
    let m = Metric::ALL.iter().position(|&x| x == metric).unwrap_or(0) as u64;
    let e = u64::from(ev == Evaluator::McExact);
    (((curve as u64) << 12 | point as u64) * 4 + m) * 2 + e
}

/// Evaluates every cell. Rows come back ordered by axis point, then curve,
/// metric and evaluator, whatever order the pool finishes them in.
pub fn run_sweep(curves: &[Curve], sweep: &SweepSpec) -> Vec<ResultRow> {
    let values = sweep.values();
    let groups: Vec<(usize, usize)> =
        (0..values.len()).flat_map(|p| (0..curves.len()).map(move |c| (p, c))).collect();
    groups
        .par_iter()
        .map(|&(p, c)| {
            let x = values[p];
            let built = curves[c].scenario.with_axis(sweep.axis, x).build();
            let mut rows = Vec::new();
            for &metric in &sweep.metrics {
                for &ev in &sweep.evaluators {
                    let rng = RngStream::new(sweep.seed, stream_id(c, p, metric, ev));
                    let res = built.as_ref().map_err(Clone::clone).and_then(|sc| evaluate(sc, metric, ev, sweep.mc_samples, &rng));
                    let mut row = ResultRow {
                        curve: curves[c].label.clone(),
                        axis: sweep.axis,
                        axis_value: x,
                        metric,
                        evaluator: ev,
                        value: None,
                        std_error: None,
                        n_samples: None,
                        error_flag: String::new(),
                        error: None,
                    };
                    match res {
                        Ok(o) => {
                            row.value = Some(o.value);
                            row.std_error = o.std_error;
                            row.n_samples = o.n_samples;
                            if o.clamped {
                                row.error_flag = "clamped".into();
                            }
                        }
                        Err(e) => {
                            row.error_flag = error_kind(&e).into();
                            row.error = Some(e.to_string());
                        }
                    }
                    rows.push(row);
                }
            }
            rows
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn write_csv<W: Write>(rows: &[ResultRow], mut w: W) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.axis,
            r.axis_value,
            r.metric,
            r.evaluator,
            opt(r.value),
            opt(r.std_error),
            r.n_samples.map(|n| n.to_string()).unwrap_or_default(),
            r.error_flag,
            csv_field(&r.curve)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::ScenarioConfig;

    #[test]
    fn rows_in_axis_order_with_flags() {
        let curves = vec![
            Curve { label: "a".into(), scenario: ScenarioConfig::default() },
            Curve { label: "b, quoted".into(), scenario: ScenarioConfig { eps: 6.7, ..ScenarioConfig::default() } },
        ];
        let sweep = SweepSpec {
            axis: Axis::UeDb,
            start: -10.0,
            stop: 10.0,
            points: 3,
            metrics: vec![Metric::Spsc2],
            evaluators: vec![Evaluator::Closed, Evaluator::Mc],
            mc_samples: 10_000,
            seed: 3,
        };
        let rows = run_sweep(&curves, &sweep);
        assert_eq!(rows.len(), 12);
        assert!(rows.windows(2).all(|w| w[0].axis_value <= w[1].axis_value));
        assert!(rows.iter().all(|r| !r.failed()));
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 13);
        assert!(text.lines().nth(2).unwrap().ends_with(",10000,,a"));
        assert!(text.lines().nth(3).unwrap().ends_with(",\"b, quoted\""));
    }

    #[test]
    fn failing_cells_are_flagged() {
        let bad = ScenarioConfig { mu0: 0, ..ScenarioConfig::default() };
        let curves = vec![Curve { label: "bad".into(), scenario: bad }];
        let sweep = SweepSpec { points: 2, ..SweepSpec::default() };
        let rows = run_sweep(&curves, &sweep);
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.failed() && r.value.is_none() && r.error_flag == "invalid_parameter"));
    }
}
