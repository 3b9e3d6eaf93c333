//! Real numbers carried as `mant · e^ln_scale`.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mant: f64,
    pub ln_scale: f64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled { mant: 0.0, ln_scale: 0.0 };

    pub fn new(mant: f64, ln_scale: f64) -> Self {
        Scaled { mant, ln_scale }.normalized()
    }

    pub fn from_f64(x: f64) -> Self {
        Scaled::new(x, 0.0)
    }

    /// `sign · e^ln_abs`.
    pub fn from_ln(ln_abs: f64, sign: f64) -> Self {
        Scaled { mant: sign.signum(), ln_scale: ln_abs }
    }

    fn normalized(self) -> Self {
        if self.mant == 0.0 || !self.mant.is_finite() {
            return Scaled { mant: self.mant, ln_scale: if self.mant == 0.0 { 0.0 } else { self.ln_scale } };
        }
        let l = self.mant.abs().ln();
        Scaled { mant: self.mant.signum(), ln_scale: self.ln_scale + l }
    }

    pub fn to_f64(self) -> f64 {
        if self.mant == 0.0 {
            0.0
        } else {
            self.mant * self.ln_scale.exp()
        }
    }

    /// ln|x|, `-inf` for zero.
    pub fn ln_abs(self) -> f64 {
        if self.mant == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.ln_scale + self.mant.abs().ln()
        }
    }

    pub fn abs(self) -> Self {
        Scaled { mant: self.mant.abs(), ln_scale: self.ln_scale }
    }

    pub fn signum(self) -> f64 {
        if self.mant == 0.0 {
            0.0
        } else {
            self.mant.signum()
        }
    }

    pub fn is_zero(self) -> bool {
        self.mant == 0.0
    }

    pub fn is_finite(self) -> bool {
        self.mant.is_finite() && self.ln_scale.is_finite()
    }

    /// Multiply by `e^ln_factor`.
    pub fn mul_exp(self, ln_factor: f64) -> Self {
        Scaled { mant: self.mant, ln_scale: self.ln_scale + ln_factor }
    }

    pub fn scale_by(self, factor: f64) -> Self {
        Scaled::new(self.mant * factor, self.ln_scale)
    }
}

impl Add for Scaled {
    type Output = Scaled;
    fn add(self, rhs: Scaled) -> Scaled {
        if self.mant == 0.0 {
            return rhs;
        }
        if rhs.mant == 0.0 {
            return self;
        }
        let (hi, lo) = if self.ln_scale >= rhs.ln_scale { (self, rhs) } else { (rhs, self) };
        Scaled::new(hi.mant + lo.mant * (lo.ln_scale - hi.ln_scale).exp(), hi.ln_scale)
    }
}

impl Neg for Scaled {
    type Output = Scaled;
    fn neg(self) -> Scaled {
        Scaled { mant: -self.mant, ln_scale: self.ln_scale }
    }
}

impl Sub for Scaled {
    type Output = Scaled;
    fn sub(self, rhs: Scaled) -> Scaled {
        self + (-rhs)
    }
}

impl Mul for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: Scaled) -> Scaled {
        Scaled::new(self.mant * rhs.mant, self.ln_scale + rhs.ln_scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_extremes() {
        let a = Scaled::from_ln(-800.0, 1.0);
        let b = Scaled::from_ln(-801.0, -1.0);
        let s = a + b;
        assert!((s.ln_abs() - (-800.0 + (1.0 - (-1.0f64).exp()).ln())).abs() < 1e-12);
        assert_eq!(s.to_f64(), 0.0);
        assert!((Scaled::from_f64(3.0) * Scaled::from_f64(-2.0)).to_f64() + 6.0 < 1e-14);
        assert_eq!((Scaled::from_f64(2.0) - Scaled::from_f64(2.0)).to_f64(), 0.0);
    }
}
