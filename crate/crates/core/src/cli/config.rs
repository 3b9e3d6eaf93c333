//! `key = value` config files with `[scenario]` and `[sweep]` sections.

use std::collections::HashSet;
use std::path::Path;

use super::{parse_list, Axis, ScenarioConfig, SweepSpec};
use crate::channels::{Detection, Turbulence};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Scenario,
    Sweep,
}

pub fn load_config(path: &Path) -> Result<(ScenarioConfig, SweepSpec)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

fn turbulence_preset(name: &str) -> Result<Turbulence> {
    match name {
        "st" => Ok(Turbulence::STRONG),
        "mt" => Ok(Turbulence::MODERATE),
        "wt" => Ok(Turbulence::WEAK),
        _ => Err(Error::Config(format!("unknown turbulence preset '{name}', expected st, mt or wt"))),
    }
}

/// Parses a config file body. Shape keys (`a1` .. `lambda2`) override the
/// turbulence preset wherever they appear.
pub fn parse_config(text: &str) -> Result<(ScenarioConfig, SweepSpec)> {
    let mut sc = ScenarioConfig::default();
    let mut sw = SweepSpec::default();
    let mut section = None;
    let mut seen = HashSet::new();
    let mut turbulence_set = false;
    let mut shape: Vec<(usize, String, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |msg: String| Error::Parse { line, msg };
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(name) = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
            section = Some(match name.trim() {
                "scenario" => Section::Scenario,
                "sweep" => Section::Sweep,
                other => return Err(err(format!("unknown section [{other}]"))),
            });
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| err(format!("expected key = value, got '{body}'")))?;
        let (key, value) = (key.trim(), value.trim());
        let sec = section.ok_or_else(|| err(format!("key '{key}' outside a section")))?;
        if !seen.insert((sec == Section::Sweep, key.to_string())) {
            return Err(err(format!("duplicate key '{key}'")));
        }
        let num = || value.parse::<f64>().map_err(|_| err(format!("{key}: '{value}' is not a number")));
        let int = || value.parse::<u64>().map_err(|_| err(format!("{key}: '{value}' is not a non-negative integer")));
        let wrap = |e: Error| err(format!("{key}: {e}"));
        match sec {
            Section::Scenario => match key {
                "turbulence" | "preset" => {
                    if turbulence_set {
                        return Err(err("turbulence given twice".into()));
                    }
                    turbulence_set = true;
                    sc.turbulence = turbulence_preset(value).map_err(wrap)?;
                }
                "a1" | "a2" | "b1" | "b2" | "omega1" | "omega2" | "lambda1" | "lambda2" => {
                    shape.push((line, key.to_string(), value.to_string()));
                }
                "eta0" => sc.eta0 = num()?,
                "mu0" => sc.mu0 = u32::try_from(int()?).map_err(|_| err("mu0 too large".into()))?,
                "eta_e" => sc.eta_e = num()?,
                "mu_e" => sc.mu_e = u32::try_from(int()?).map_err(|_| err("mu_e too large".into()))?,
                "phi_sr_db" => sc.phi_sr_db = num()?,
                "phi_se_db" => sc.phi_se_db = num()?,
                "Ud_db" => sc.ud_db = num()?,
                "Ue_db" => sc.ue_db = num()?,
                "eps" => sc.eps = num()?,
                "s0" => sc.s0 = Detection::from_s(int()? as usize).map_err(wrap)?,
                "se" => sc.se = Detection::from_s(int()? as usize).map_err(wrap)?,
                "target_rate" => sc.target_rate = num()?,
                _ => return Err(err(format!("unknown scenario key '{key}'"))),
            },
            Section::Sweep => match key {
                "axis" => sw.axis = value.parse::<Axis>().map_err(wrap)?,
                "start" => sw.start = num()?,
                "stop" => sw.stop = num()?,
                "points" => sw.points = int()? as usize,
                "metrics" => sw.metrics = parse_list(value).map_err(wrap)?,
                "evaluators" => sw.evaluators = parse_list(value).map_err(wrap)?,
                "mc_samples" => sw.mc_samples = int()?,
                "seed" => sw.seed = int()?,
                _ => return Err(err(format!("unknown sweep key '{key}'"))),
            },
        }
    }
    if !turbulence_set && shape.len() < 8 {
        return Err(Error::Config("scenario needs 'turbulence' or all eight shape keys a1 .. lambda2".into()));
    }
    for (line, key, value) in shape {
        let err = |msg: String| Error::Parse { line, msg };
        let t = &mut sc.turbulence;
        if key.starts_with("lambda") {
            let v = value.parse::<u32>().map_err(|_| err(format!("{key}: '{value}' is not a positive integer")))?;
            if key == "lambda1" {
                t.lambda1 = v;
            } else {
                t.lambda2 = v;
            }
        } else {
            let v = value.parse::<f64>().map_err(|_| err(format!("{key}: '{value}' is not a number")))?;
            *match key.as_str() {
                "a1" => &mut t.a1,
                "a2" => &mut t.a2,
                "b1" => &mut t.b1,
                "b2" => &mut t.b2,
                "omega1" => &mut t.omega1,
                _ => &mut t.omega2,
            } = v;
        }
    }
    sc.turbulence.validate().map_err(|e| Error::Config(e.to_string()))?;
    sw.validate()?;
    Ok((sc, sw))
}
