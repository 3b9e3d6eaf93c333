//! Principal-branch complex log-gamma and a real trigamma.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const SMALLX: f64 = 7.0;
const SMALLY: f64 = 7.0;
const HLOG2PI: f64 = 0.918_938_533_204_672_7;
const LOGPI: f64 = 1.144_729_885_849_400_2;

// Stirling tail coefficients, highest power of 1/z^2 first.
const STIRLING: [f64; 8] = [
    -2.955_065_359_477_124_183e-2,
    6.410_256_410_256_410_256_4e-3,
    -1.917_526_917_526_917_526_9e-3,
    8.417_508_417_508_417_508_4e-4,
    -5.952_380_952_380_952_381e-4,
    7.936_507_936_507_936_507_9e-4,
    -2.777_777_777_777_777_777_8e-3,
    8.333_333_333_333_333_333_3e-2,
];

/// Principal branch of log Γ(z).
///
/// The branch cut runs along the negative real axis and the imaginary part
/// is continuous elsewhere, so `exp` of the result is Γ(z) and sums of these
/// values can be exponentiated without losing the phase.
pub fn log_gamma_complex(z: Complex64) -> Result<Complex64> {
    if z.re.is_nan() || z.im.is_nan() {
        return Ok(Complex64::new(f64::NAN, f64::NAN));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor() {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    Ok(log_gamma_unchecked(z))
}

/// Alias of [`log_gamma_complex`].
#[inline]
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    log_gamma_complex(z)
}

fn log_gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re > SMALLX || z.im.abs() > SMALLY {
        stirling(z)
    } else if (z - 1.0).norm() < TAYLOR_RADIUS {
        taylor(z)
    } else if (z - 2.0).norm() < TAYLOR_RADIUS {
        (z - 1.0).ln() + taylor(z - 1.0)
    } else if z.re < 0.1 {
        reflection(z)
    } else if z.im >= 0.0 {
        recurrence(z)
    } else {
        recurrence(z.conj()).conj()
    }
}

// Series of log Γ about 1 in powers of (z - 1), highest first.
const TAYLOR: [f64; 23] = [
    -4.347_826_605_304_025_936_1e-2,
    4.545_455_629_320_466_944_2e-2,
    -4.761_907_033_014_222_799_1e-2,
    5.000_004_769_810_169_364e-2,
    -5.263_167_937_961_666_073_4e-2,
    5.555_576_762_740_361_110_2e-2,
    -5.882_397_865_868_458_233_9e-2,
    6.250_095_514_121_304_074_2e-2,
    -6.666_870_588_242_046_803_3e-2,
    7.143_294_629_536_133_605_9e-2,
    -7.693_251_641_135_219_147_3e-2,
    8.335_384_054_610_900_402_5e-2,
    -9.095_401_714_582_904_223_3e-2,
    1.000_994_575_127_818_085_3e-1,
    -1.113_342_658_695_646_904_9e-1,
    1.255_096_695_247_430_424_2e-1,
    -1.440_498_967_688_461_181_2e-1,
    1.695_571_769_974_081_899_5e-1,
    -2.073_855_510_286_739_852_7e-1,
    2.705_808_084_277_845_478_8e-1,
    -4.006_856_343_865_314_284_7e-1,
    8.224_670_334_241_132_182_4e-1,
    -5.772_156_649_015_328_606_1e-1,
];
const TAYLOR_RADIUS: f64 = 0.2;

fn taylor(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut poly = Complex64::new(TAYLOR[0], 0.0);
    for c in &TAYLOR[1..] {
        poly = poly * z + c;
    }
    z * poly
}

fn stirling(z: Complex64) -> Complex64 {
    let rz = z.inv();
    let rzz = rz * rz;
    let mut poly = Complex64::new(STIRLING[0], 0.0);
    for c in &STIRLING[1..] {
        poly = poly * rzz + c;
    }
    (z - 0.5) * z.ln() - z + HLOG2PI + rz * poly
}

// Shift up until Stirling applies, counting how often the running product
// crosses the cut so the imaginary part stays on the principal branch.
fn recurrence(z: Complex64) -> Complex64 {
    let mut signflips = 0i32;
    let mut sb = false;
    let mut shiftprod = z;
    let mut z = z + 1.0;
    while z.re <= SMALLX {
        shiftprod *= z;
        let nsb = shiftprod.im.is_sign_negative();
        if nsb && !sb {
            signflips += 1;
        }
        sb = nsb;
        z += 1.0;
    }
    stirling(z) - shiftprod.ln() - Complex64::new(0.0, f64::from(signflips) * 2.0 * PI)
}

fn reflection(z: Complex64) -> Complex64 {
    let tmp = (2.0 * PI).copysign(z.im) * (0.5 * z.re + 0.25).floor();
    Complex64::new(LOGPI, tmp) - sinpi_complex(z).ln() - log_gamma_unchecked(1.0 - z)
}

/// sin(πx) with exact zeros at the integers.
pub fn sinpi(x: f64) -> f64 {
    let s = if x < 0.0 { -1.0 } else { 1.0 };
    let r = x.abs() % 2.0;
    let v = if r < 0.5 {
        (PI * r).sin()
    } else if r < 1.5 {
        (PI * (1.0 - r)).sin()
    } else {
        (PI * (r - 2.0)).sin()
    };
    s * v
}

/// cos(πx) with exact zeros at the half-integers.
pub fn cospi(x: f64) -> f64 {
    let r = x.abs() % 2.0;
    if r == 0.5 || r == 1.5 {
        return 0.0;
    }
    if r < 1.0 {
        -(PI * (r - 0.5)).sin()
    } else {
        (PI * (r - 1.5)).sin()
    }
}

fn sinpi_complex(z: Complex64) -> Complex64 {
    let piy = PI * z.im;
    Complex64::new(sinpi(z.re) * piy.cosh(), cospi(z.re) * piy.sinh())
}

/// ln|Γ(x)| for real x, erroring at the poles.
pub fn ln_gamma_real(x: f64) -> Result<f64> {
    Ok(log_gamma_complex(Complex64::new(x, 0.0))?.re)
}

/// `(ln|Γ(x)|, sign Γ(x))` for real x; the sign is 0 at the poles, where
/// `1/Γ` vanishes.
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if x <= 0.0 && x == x.floor() {
        return (f64::INFINITY, 0.0);
    }
    let ln = log_gamma_unchecked(Complex64::new(x, 0.0)).re;
    let sign = if x > 0.0 || (-x).floor() % 2.0 == 1.0 { 1.0 } else { -1.0 };
    (ln, sign)
}

/// ψ'(x) for real x away from the poles.
pub fn trigamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::INFINITY;
    }
    if x < 0.5 {
        let s = sinpi(x);
        return PI * PI / (s * s) - trigamma(1.0 - x);
    }
    let mut acc = 0.0;
    let mut x = x;
    while x < 10.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let r = 1.0 / x;
    let r2 = r * r;
    let tail = r2
        * r
        * (1.0 / 6.0 + r2 * (-1.0 / 30.0 + r2 * (1.0 / 42.0 + r2 * (-1.0 / 30.0 + r2 * 5.0 / 66.0))));
    acc + r + 0.5 * r2 + tail
}
