//! Mellin-Barnes integrals of gamma-function ratios.
//!
//! Evaluates
//!
//! ```text
//! V(x) = 1/(2πi) ∫_L  Π Γ(a_i + α_i s) / Π Γ(b_j + β_j s) · x^{-s} ds
//! ```
//!
//! where `L` separates the poles of numerator factors with `α_i > 0`
//! ("left" poles) from those with `α_i < 0` ("right" poles). Meijer G and
//! Fox H functions are the special cases built in [`super::meijer`].
//!
//! The contour is a vertical line through the saddle of `|integrand|` inside
//! the separating strip. When no usable strip exists the line is placed
//! elsewhere and the poles it jumps over are added back as residues, which
//! are integrated numerically on small circles so poles of any order are
//! handled alike.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::gamma::{log_gamma_complex, trigamma};
use super::scaled::Scaled;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_panels, QuadOptions};

/// `Γ(shift + scale·s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFactor {
    pub shift: f64,
    pub scale: f64,
}

impl GammaFactor {
    pub fn new(shift: f64, scale: f64) -> Self {
        GammaFactor { shift, scale }
    }

    /// The n-th pole in s.
    #[inline]
    fn pole(&self, n: usize) -> f64 {
        -(self.shift + n as f64) / self.scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub target_abs_tol: f64,
    pub target_rel_tol: f64,
    pub max_quadrature_nodes: usize,
    pub pole_separation_tol: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            target_abs_tol: 1e-12,
            target_rel_tol: 1e-10,
            max_quadrature_nodes: 30_000,
            pole_separation_tol: 1e-8,
        }
    }
}

impl EvalOptions {
    pub fn validate(&self) -> Result<()> {
        let ok = self.target_abs_tol > 0.0
            && self.target_rel_tol > 0.0
            && self.pole_separation_tol > 0.0
            && self.max_quadrature_nodes >= 64;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(
                "tolerances must be positive and max_quadrature_nodes >= 64".into(),
            ))
        }
    }
}

/// What the evaluator did, for callers that want to audit a value.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagnostics {
    pub abscissa: f64,
    pub strip: (f64, f64),
    pub crossed_poles: usize,
    pub nodes: usize,
    pub decay_rate: f64,
    /// Relative parameter perturbation applied by a caller, 0 if none.
    pub perturbation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub value: Scaled,
    /// Estimated absolute error, same scale as `value`.
    pub error: Scaled,
    pub diagnostics: Diagnostics,
}

impl Evaluation {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MellinBarnes {
    pub numer: Vec<GammaFactor>,
    pub denom: Vec<GammaFactor>,
}

const STRIP_MIN_WIDTH: f64 = 1e-6;
const CIRCLE_NODES: usize = 64;

#[derive(Debug, Clone)]
struct Cluster {
    center: f64,
    half_span: f64,
    left: bool,
    count: usize,
}

impl MellinBarnes {
    pub fn new(numer: Vec<GammaFactor>, denom: Vec<GammaFactor>) -> Result<Self> {
        for f in numer.iter().chain(&denom) {
            if !(f.shift.is_finite() && f.scale.is_finite()) || f.scale == 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "gamma factor ({}, {}) must have finite shift and non-zero scale",
                    f.shift, f.scale
                )));
            }
        }
        Ok(MellinBarnes { numer, denom })
    }

    /// Exponential decay rate of |integrand| along vertical lines, in units of π/2.
    pub fn decay_rate(&self) -> f64 {
        self.numer.iter().map(|f| f.scale.abs()).sum::<f64>()
            - self.denom.iter().map(|f| f.scale.abs()).sum::<f64>()
    }

    /// log of the integrand including `x^{-s}`; `None` where a denominator
    /// pole makes it vanish.
    pub fn log_integrand(&self, s: Complex64, ln_x: f64) -> Result<Option<Complex64>> {
        let mut acc = -s * ln_x;
        for f in &self.numer {
            acc += log_gamma_complex(f.shift + f.scale * s)?;
        }
        for f in &self.denom {
            match log_gamma_complex(f.shift + f.scale * s) {
                Ok(v) => acc -= v,
                Err(Error::Pole { .. }) => return Ok(None),
                Err(e) => return Err(e),
            }
        }
        Ok(Some(acc))
    }

    fn log_abs_real(&self, c: f64, ln_x: f64) -> f64 {
        match self.log_integrand(Complex64::new(c, 0.0), ln_x) {
            Ok(Some(v)) => v.re,
            Ok(None) => f64::NEG_INFINITY,
            Err(_) => f64::INFINITY,
        }
    }

    fn curvature(&self, c: f64) -> f64 {
        let mut g2 = 0.0;
        for f in &self.numer {
            g2 += f.scale * f.scale * trigamma(f.shift + f.scale * c);
        }
        for f in &self.denom {
            g2 -= f.scale * f.scale * trigamma(f.shift + f.scale * c);
        }
        g2
    }

    /// Rightmost left pole and leftmost right pole.
    pub fn strip(&self) -> (f64, f64) {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for f in &self.numer {
            let p = f.pole(0);
            if f.scale > 0.0 {
                lo = lo.max(p);
            } else {
                hi = hi.min(p);
            }
        }
        (lo, hi)
    }

    fn poles_in(&self, lo: f64, hi: f64, want_left: Option<bool>) -> Vec<(f64, bool)> {
        let mut out = Vec::new();
        for f in &self.numer {
            let left = f.scale > 0.0;
            if want_left.is_some_and(|w| w != left) {
                continue;
            }
            let step = 1.0 / f.scale.abs();
            let first = f.pole(0);
            let mut n = 0usize;
            loop {
                let p = if left { first - n as f64 * step } else { first + n as f64 * step };
                if (left && p < lo) || (!left && p > hi) || n > 100_000 {
                    break;
                }
                if p >= lo && p <= hi {
                    out.push((p, left));
                }
                n += 1;
            }
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    }

    fn check_collisions(&self, tol: f64) -> Result<()> {
        let (lo, hi) = self.strip();
        if lo < hi {
            return Ok(());
        }
        let lefts = self.poles_in(hi - tol, lo + tol, Some(true));
        let rights = self.poles_in(hi - tol, lo + tol, Some(false));
        for &(l, _) in &lefts {
            for &(r, _) in &rights {
                if (l - r).abs() <= tol * l.abs().max(1.0) {
                    return Err(Error::Degenerate(format!(
                        "left and right pole families collide at s = {l}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn minimize_on(&self, a: f64, b: f64, ln_x: f64) -> f64 {
        let g = |c: f64| self.log_abs_real(c, ln_x);
        let mut pts: Vec<f64> = match (a.is_finite(), b.is_finite()) {
            (true, true) => (0..64).map(|i| a + (b - a) * (i as f64 + 0.5) / 64.0).collect(),
            (true, false) => (0..120).map(|k| a + 1e-3 * 2f64.powf(k as f64 / 4.0)).collect(),
            (false, true) => (0..120).rev().map(|k| b - 1e-3 * 2f64.powf(k as f64 / 4.0)).collect(),
            (false, false) => (-60..=60).map(|k| k as f64 * 0.5).collect(),
        };
        let mut vals: Vec<f64> = pts.iter().map(|&c| g(c)).collect();
        // Far tails put the saddle beyond the initial grid.
        if a.is_finite() != b.is_finite() {
            if !a.is_finite() {
                pts.reverse();
                vals.reverse();
            }
            let mut k = 120;
            while k < 240 && vals.iter().all(|&u| !(u < vals[vals.len() - 1])) {
                let off = 1e-3 * 2f64.powf(k as f64 / 4.0);
                let p = if a.is_finite() { a + off } else { b - off };
                pts.push(p);
                vals.push(g(p));
                k += 1;
            }
            if !a.is_finite() {
                pts.reverse();
                vals.reverse();
            }
        }
        let mut best = 0;
        for i in 1..pts.len() {
            if vals[i] < vals[best] || (vals[best].is_nan() && !vals[i].is_nan()) {
                best = i;
            }
        }
        let mut l = if best > 0 { pts[best - 1] } else { if a.is_finite() { a } else { pts[0] - 1.0 } };
        let mut r = if best + 1 < pts.len() { pts[best + 1] } else { if b.is_finite() { b } else { pts[best] + 1.0 } };
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = r - phi * (r - l);
        let mut x2 = l + phi * (r - l);
        let mut f1 = g(x1);
        let mut f2 = g(x2);
        for _ in 0..60 {
            if f1 < f2 {
                r = x2;
                x2 = x1;
                f2 = f1;
                x1 = r - phi * (r - l);
                f1 = g(x1);
            } else {
                l = x1;
                x1 = x2;
                f1 = f2;
                x2 = l + phi * (r - l);
                f2 = g(x2);
            }
            if (r - l).abs() < 1e-9 * (1.0 + l.abs()) {
                break;
            }
        }
        let mut c = 0.5 * (l + r);
        // Never sit on a zero of the integrand: the scale would be -inf.
        let width = if a.is_finite() && b.is_finite() { b - a } else { 1.0 };
        let mut k = 0;
        while !g(c).is_finite() && k < 20 {
            c += 1e-3 * width * if k % 2 == 0 { 1.0 } else { -2.0 };
            k += 1;
        }
        c
    }

    /// Value of the integral, choosing the contour automatically.
    pub fn evaluate(&self, ln_x: f64, opts: &EvalOptions) -> Result<Evaluation> {
        opts.validate()?;
        if !ln_x.is_finite() {
            return Err(Error::Domain(format!("argument logarithm {ln_x} is not finite")));
        }
        if self.decay_rate() <= 0.0 {
            return Err(Error::Unsupported(
                "Mellin-Barnes integrand does not decay along vertical lines".into(),
            ));
        }
        self.check_collisions(opts.pole_separation_tol)?;
        let (lo, hi) = self.strip();
        let c = if hi - lo >= STRIP_MIN_WIDTH {
            self.minimize_on(lo, hi, ln_x)
        } else {
            self.crossing_abscissa(lo, hi, ln_x)
        };
        self.evaluate_on_line(ln_x, c, opts)
    }

    fn crossing_abscissa(&self, lo: f64, hi: f64, ln_x: f64) -> f64 {
        let a = hi.min(lo) - 1.0;
        let b = hi.max(lo) + 1.0;
        let poles = self.poles_in(a, b, None);
        let mut edges: Vec<f64> = vec![a];
        edges.extend(poles.iter().map(|p| p.0));
        edges.push(b);
        let mut best = (f64::INFINITY, 0.5 * (a + b));
        for w in edges.windows(2) {
            if w[1] - w[0] < 1e-3 {
                continue;
            }
            let c = self.minimize_on(w[0], w[1], ln_x);
            let v = self.log_abs_real(c, ln_x);
            if v < best.0 {
                best = (v, c);
            }
        }
        best.1
    }

    /// Value of the integral using the vertical line through `c`; poles on
    /// the wrong side of `c` are accounted for by residues.
    pub fn evaluate_on_line(&self, ln_x: f64, c: f64, opts: &EvalOptions) -> Result<Evaluation> {
        let (line, mut diag) = self.line_integral(ln_x, c, opts)?;
        let (lo, hi) = self.strip();
        diag.strip = (lo, hi);
        let mut value = line.value;
        let mut error = line.error;
        let clusters = self.crossed_clusters(c, opts)?;
        for cl in &clusters {
            let (res, err) = self.cluster_residue(ln_x, cl, c)?;
            value = if cl.left { value + res } else { value - res };
            error = error + err;
            diag.crossed_poles += cl.count;
        }
        Ok(Evaluation { value, error, diagnostics: diag })
    }

    /// The bare line integral `1/(2πi) ∫_{c-i∞}^{c+i∞}` with no residue terms.
    pub fn line_integral(&self, ln_x: f64, c: f64, opts: &EvalOptions) -> Result<(Evaluation, Diagnostics)> {
        opts.validate()?;
        if self.decay_rate() <= 0.0 {
            return Err(Error::Unsupported(
                "Mellin-Barnes integrand does not decay along vertical lines".into(),
            ));
        }
        let scale = match self.log_integrand(Complex64::new(c, 0.0), ln_x)? {
            Some(v) => v.re,
            None => {
                return Err(Error::Domain(format!("contour abscissa {c} hits a zero of the integrand")));
            }
        };
        let g2 = self.curvature(c);
        let w = if g2 > 0.0 && g2.is_finite() { (1.0 / g2.sqrt()).clamp(1e-4, 1e4) } else { 1.0 };

        let mag = |y: f64| -> f64 {
            match self.log_integrand(Complex64::new(c, y), ln_x) {
                Ok(Some(v)) => (v.re - scale).exp(),
                _ => 0.0,
            }
        };
        // Walk out until the envelope is negligible and falling.
        let mut breaks = vec![0.0];
        let mut y = 0.0;
        let mut step = w;
        let mut below = 0;
        let mut prev = 1.0f64;
        let mut k = 0usize;
        loop {
            y += step;
            k += 1;
            breaks.push(y);
            let m = mag(y);
            if m < 1e-22 && m <= prev {
                below += 1;
                if below >= 3 {
                    break;
                }
            } else {
                below = 0;
            }
            prev = m;
            if k >= 16 {
                step *= 1.25;
            }
            if k > 400 {
                return Err(Error::Accuracy { estimate: f64::NAN, error_bound: f64::INFINITY });
            }
        }

        let f = |y: f64| -> Result<f64> {
            Ok(match self.log_integrand(Complex64::new(c, y), ln_x)? {
                Some(v) => {
                    let e = (v.re - scale).exp();
                    e * v.im.cos()
                }
                None => 0.0,
            })
        };
        let qopts = QuadOptions {
            abs_tol: opts.target_abs_tol * PI,
            rel_tol: opts.target_rel_tol,
            max_evals: opts.max_quadrature_nodes.max(15 * breaks.len() + 30),
        };
        let diag = Diagnostics {
            abscissa: c,
            strip: self.strip(),
            crossed_poles: 0,
            nodes: 0,
            decay_rate: self.decay_rate(),
            perturbation: 0.0,
        };
        match integrate_panels(f, &breaks, &qopts) {
            Ok(r) => {
                let diag = Diagnostics { nodes: r.evals, ..diag };
                let ev = Evaluation {
                    value: Scaled::new(r.value / PI, scale),
                    error: Scaled::new(r.error / PI, scale),
                    diagnostics: diag.clone(),
                };
                Ok((ev, diag))
            }
            // An error bound below the smallest normal f64 is as good as exact.
            Err(Error::Quadrature { estimate, error }) if Scaled::new(error / PI, scale).to_f64() < f64::MIN_POSITIVE => {
                let ev = Evaluation {
                    value: Scaled::new(estimate / PI, scale),
                    error: Scaled::new(error / PI, scale),
                    diagnostics: diag.clone(),
                };
                Ok((ev, diag))
            }
            Err(Error::Quadrature { estimate, error }) => Err(Error::Accuracy {
                estimate: Scaled::new(estimate / PI, scale).to_f64(),
                error_bound: Scaled::new(error / PI, scale).to_f64(),
            }),
            Err(e) => Err(e),
        }
    }

    /// The integral minus the residue terms of the poles listed in
    /// `leading`, which must all belong to the left family (`left = true`)
    /// or all to the right family.
    ///
    /// The line is moved just past the outermost listed pole and only the
    /// other poles it crosses are added back, so the result keeps full
    /// relative accuracy even when the listed residues dominate the value.
    pub fn evaluate_beyond(&self, ln_x: f64, leading: &[f64], left: bool, opts: &EvalOptions) -> Result<Evaluation> {
        opts.validate()?;
        if leading.is_empty() {
            return self.evaluate(ln_x, opts);
        }
        let tol = 1e-9;
        let (lo, hi) = if left {
            let edge = leading.iter().copied().fold(f64::INFINITY, f64::min);
            let next = self
                .poles_in(edge - 3.0, edge, None)
                .into_iter()
                .map(|p| p.0)
                .filter(|&p| p < edge - tol)
                .fold(edge - 1.0, f64::max);
            (next, edge)
        } else {
            let edge = leading.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let next = self
                .poles_in(edge, edge + 3.0, None)
                .into_iter()
                .map(|p| p.0)
                .filter(|&p| p > edge + tol)
                .fold(edge + 1.0, f64::min);
            (edge, next)
        };
        if hi - lo < STRIP_MIN_WIDTH {
            return Err(Error::Degenerate(format!("no room for a contour between {lo} and {hi}")));
        }
        let c = self.minimize_on(lo, hi, ln_x);
        let (line, mut diag) = self.line_integral(ln_x, c, opts)?;
        let mut value = line.value;
        let mut error = line.error;
        for cl in self.crossed_clusters(c, opts)? {
            let (a, b) = (cl.center - cl.half_span - tol, cl.center + cl.half_span + tol);
            let listed = leading.iter().filter(|&&p| p >= a && p <= b).count();
            if listed == cl.count && cl.left == left {
                continue;
            }
            if listed > 0 {
                return Err(Error::Degenerate(format!(
                    "pole at s = {} coincides with a pole outside the leading set",
                    cl.center
                )));
            }
            let (res, err) = self.cluster_residue(ln_x, &cl, c)?;
            value = if cl.left { value + res } else { value - res };
            error = error + err;
            diag.crossed_poles += cl.count;
        }
        Ok(Evaluation { value, error, diagnostics: diag })
    }

    fn crossed_clusters(&self, c: f64, opts: &EvalOptions) -> Result<Vec<Cluster>> {
        let (lo, hi) = self.strip();
        let mut crossed: Vec<(f64, bool)> = Vec::new();
        if lo > c {
            crossed.extend(self.poles_in(c, lo, Some(true)).into_iter().filter(|p| p.0 > c));
        }
        if hi < c {
            crossed.extend(self.poles_in(hi, c, Some(false)).into_iter().filter(|p| p.0 < c));
        }
        crossed.sort_by(|a, b| a.0.total_cmp(&b.0));
        let merge = 1e-3f64.max(opts.pole_separation_tol);
        let mut clusters: Vec<Cluster> = Vec::new();
        for (p, left) in crossed {
            if let Some(last) = clusters.last_mut() {
                let right_end = last.center + last.half_span;
                if last.left == left && p - right_end < merge {
                    let start = last.center - last.half_span;
                    last.center = 0.5 * (start + p);
                    last.half_span = 0.5 * (p - start);
                    last.count += 1;
                    continue;
                }
            }
            clusters.push(Cluster { center: p, half_span: 0.0, left, count: 1 });
        }
        Ok(clusters)
    }

    fn cluster_residue(&self, ln_x: f64, cl: &Cluster, c: f64) -> Result<(Scaled, Scaled)> {
        let near = self.poles_in(cl.center - 2.0, cl.center + 2.0, None);
        let mut d = f64::INFINITY;
        for &(p, _) in &near {
            let off = (p - cl.center).abs();
            if off > cl.half_span + 1e-12 {
                d = d.min(off);
            }
        }
        d = d.min((c - cl.center).abs());
        let mut r = (0.5 * (d + cl.half_span)).min(0.25);
        if ln_x.abs() > 0.0 {
            r = r.min((4.0 / ln_x.abs()).max(2.0 * cl.half_span));
        }
        if r <= 1.05 * cl.half_span || r <= 0.0 {
            return Err(Error::Degenerate(format!(
                "cannot isolate pole cluster at s = {} from its neighbours",
                cl.center
            )));
        }
        let full = self.circle_residue(ln_x, cl.center, r, CIRCLE_NODES)?;
        let half = self.circle_residue(ln_x, cl.center, r, CIRCLE_NODES / 2)?;
        let err = (full - half).abs();
        Ok((full, err))
    }

    /// `1/(2πi) ∮` over a circle of radius `r` around `center`.
    pub fn circle_residue(&self, ln_x: f64, center: f64, r: f64, m: usize) -> Result<Scaled> {
        let mut logs = Vec::with_capacity(m);
        let mut ref_scale = f64::NEG_INFINITY;
        for k in 0..m {
            let th = 2.0 * PI * (k as f64 + 0.5) / m as f64;
            let e = Complex64::from_polar(1.0, th);
            let s = center + r * e;
            let l = self.log_integrand(s, ln_x)?.map(|v| v + (r * e).ln());
            if let Some(v) = l {
                ref_scale = ref_scale.max(v.re);
            }
            logs.push(l);
        }
        if !ref_scale.is_finite() {
            return Ok(Scaled::ZERO);
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for v in logs.into_iter().flatten() {
            sum += (v - ref_scale).exp();
        }
        Ok(Scaled::new(sum.re / m as f64, ref_scale))
    }
}
