//! Meijer G and Fox H functions on top of the Mellin-Barnes engine.

use super::mellin::{EvalOptions, Evaluation, GammaFactor, MellinBarnes};
use crate::error::{Error, Result};

/// `Δ(p:q) = [q/p, (q+1)/p, …, (q+p-1)/p]`.
pub fn delta_expand(p: usize, q: f64) -> Vec<f64> {
    assert!(p >= 1, "delta_expand needs p >= 1");
    (0..p).map(|i| (q + i as f64) / p as f64).collect()
}

/// Concatenation of `Δ(sigma:L_i)` over the list.
pub fn delta_expand_list(sigma: usize, list: &[f64]) -> Vec<f64> {
    list.iter().flat_map(|&q| delta_expand(sigma, q)).collect()
}

/// `G^{m,n}_{p,q}[argument | a; b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeijerGSpec {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub a_params: Vec<f64>,
    pub b_params: Vec<f64>,
    pub argument: f64,
}

impl MeijerGSpec {
    pub fn new(m: usize, n: usize, a_params: Vec<f64>, b_params: Vec<f64>, argument: f64) -> Result<Self> {
        let spec = MeijerGSpec { m, n, p: a_params.len(), q: b_params.len(), a_params, b_params, argument };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p != self.a_params.len() || self.q != self.b_params.len() {
            return Err(Error::InvalidParameter("p, q must match the parameter list lengths".into()));
        }
        if self.m > self.q || self.n > self.p {
            return Err(Error::InvalidParameter(format!(
                "orders m={}, n={} exceed q={}, p={}",
                self.m, self.n, self.q, self.p
            )));
        }
        if !(self.argument > 0.0) || !self.argument.is_finite() {
            return Err(Error::Domain(format!("argument {} must be positive", self.argument)));
        }
        Ok(())
    }

    pub fn as_fox_h(&self) -> FoxHSpec {
        FoxHSpec {
            m: self.m,
            n: self.n,
            a: self.a_params.iter().map(|&a| (a, 1.0)).collect(),
            b: self.b_params.iter().map(|&b| (b, 1.0)).collect(),
        }
    }

    /// Evaluate at `exp(ln_argument)`, ignoring `self.argument`.
    pub fn eval_ln(&self, ln_argument: f64, opts: &EvalOptions) -> Result<Evaluation> {
        self.as_fox_h().eval_ln(ln_argument, opts)
    }
}

/// `H^{m,n}_{p,q}[x | (a_i, A_i); (b_j, B_j)]` with positive scales.
#[derive(Debug, Clone, PartialEq)]
pub struct FoxHSpec {
    pub m: usize,
    pub n: usize,
    pub a: Vec<(f64, f64)>,
    pub b: Vec<(f64, f64)>,
}

impl FoxHSpec {
    pub fn validate(&self) -> Result<()> {
        if self.m > self.b.len() || self.n > self.a.len() {
            return Err(Error::InvalidParameter("orders exceed parameter counts".into()));
        }
        if self.a.iter().chain(&self.b).any(|&(_, s)| !(s > 0.0)) {
            return Err(Error::InvalidParameter("Fox H scales must be positive".into()));
        }
        Ok(())
    }

    pub fn to_mellin(&self) -> Result<MellinBarnes> {
        self.validate()?;
        let mut numer = Vec::with_capacity(self.m + self.n);
        let mut denom = Vec::new();
        for (j, &(b, s)) in self.b.iter().enumerate() {
            if j < self.m {
                numer.push(GammaFactor::new(b, s));
            } else {
                denom.push(GammaFactor::new(1.0 - b, -s));
            }
        }
        for (i, &(a, s)) in self.a.iter().enumerate() {
            if i < self.n {
                numer.push(GammaFactor::new(1.0 - a, -s));
            } else {
                denom.push(GammaFactor::new(a, s));
            }
        }
        MellinBarnes::new(numer, denom)
    }

    pub fn eval_ln(&self, ln_argument: f64, opts: &EvalOptions) -> Result<Evaluation> {
        self.to_mellin()?.evaluate(ln_argument, opts)
    }
}

/// Meijer G at `spec.argument`.
pub fn meijer_g(spec: &MeijerGSpec, opts: &EvalOptions) -> Result<f64> {
    spec.validate()?;
    Ok(spec.eval_ln(spec.argument.ln(), opts)?.to_f64())
}

/// Fox H at `exp(ln_argument)`.
pub fn fox_h(spec: &FoxHSpec, ln_argument: f64, opts: &EvalOptions) -> Result<Evaluation> {
    spec.eval_ln(ln_argument, opts)
}
