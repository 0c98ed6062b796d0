//! Spherical Hankel functions of the first kind in the normalization
//! `ĥ_n(t) = √(2/π) · h_n^{(1)}(t)`.
//!
//! Values come from the terminating series
//!
//! ```text
//! h_n^{(1)}(t) = (-i)^{n+1} e^{it}/t · Σ_{m=0}^{n} (n+m)!/(m!(n-m)!) · (i/(2t))^m
//! ```
//!
//! whose magnitude is the quantity every stability estimate consumes. The
//! series is badly conditioned near `t ≈ n` (cancellation of up to twelve
//! decimal digits at `n = 60`), so both the terms and the running sums are
//! carried in double-double arithmetic.
//!
//! [`hankel_magnitude_oracle`] is an independent path through the classical
//! three-term recurrences and exists to cross-check the series.

use std::f64::consts::FRAC_2_PI;

use num_complex::Complex64;

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};

/// Largest order accepted by the series evaluator and the oracle.
pub const MAX_SUPPORTED_ORDER: usize = 60;

/// Smallest argument accepted by the recurrence oracle.
pub const ORACLE_MIN_ARGUMENT: f64 = 0.1;

/// Any partial term or sum above this magnitude is reported as a capacity
/// error.
pub const CAPACITY_LIMIT: f64 = 1.0e300;

/// Value and argument-derivative of `ĥ_n` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HankelValue {
    pub order: usize,
    pub argument: f64,
    pub value: Complex64,
    pub derivative: Complex64,
}

impl HankelValue {
    pub fn magnitude(&self) -> f64 {
        self.value.norm()
    }

    pub fn derivative_magnitude(&self) -> f64 {
        self.derivative.norm()
    }
}

fn check_arguments(n: usize, t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!(
            "Hankel argument must be positive and finite, got t = {t}"
        )));
    }
    if n > MAX_SUPPORTED_ORDER {
        return Err(Error::OrderOutOfRange {
            order: n,
            max: MAX_SUPPORTED_ORDER,
        });
    }
    Ok(())
}

/// The two finite sums shared by the value and its derivative:
/// `S = Σ c_m i^m` and `T = Σ m c_m i^m` with `c_m = (n+m)!/(m!(n-m)!(2t)^m)`.
struct SeriesSums {
    s_re: DoubleDouble,
    s_im: DoubleDouble,
    t_re: DoubleDouble,
    t_im: DoubleDouble,
}

fn series_sums(n: usize, t: f64) -> Result<SeriesSums> {
    let two_t = 2.0 * t;
    let mut term = DoubleDouble::from_f64(1.0);
    let mut sums = SeriesSums {
        s_re: DoubleDouble::ZERO,
        s_im: DoubleDouble::ZERO,
        t_re: DoubleDouble::ZERO,
        t_im: DoubleDouble::ZERO,
    };
    for m in 0..=n {
        if m > 0 {
            // c_m / c_{m-1} = (n+m)(n-m+1) / (2t m)
            let num = ((n + m) * (n - m + 1)) as f64;
            term = term.mul_f64(num).div_f64(m as f64).div_f64(two_t);
        }
        let weighted = term.mul_f64(m as f64);
        if !(term.hi() <= CAPACITY_LIMIT) || !(weighted.hi() <= CAPACITY_LIMIT) {
            return Err(Error::Capacity(format!(
                "series term {m} of h_{n}({t}) exceeds {CAPACITY_LIMIT:e}"
            )));
        }
        match m % 4 {
            0 => {
                sums.s_re = sums.s_re + term;
                sums.t_re = sums.t_re + weighted;
            }
            1 => {
                sums.s_im = sums.s_im + term;
                sums.t_im = sums.t_im + weighted;
            }
            2 => {
                sums.s_re = sums.s_re - term;
                sums.t_re = sums.t_re - weighted;
            }
            _ => {
                sums.s_im = sums.s_im - term;
                sums.t_im = sums.t_im - weighted;
            }
        }
    }
    Ok(sums)
}

/// `√(2/π) · (-i)^{n+1} · e^{it} / t`
fn prefactor(n: usize, t: f64) -> Complex64 {
    let phase = match (n + 1) % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };
    let (sin, cos) = t.sin_cos();
    phase * Complex64::new(cos, sin) * (FRAC_2_PI.sqrt() / t)
}

/// Evaluate `ĥ_n(t)` and `ĥ_n'(t)` together.
pub fn hankel(n: usize, t: f64) -> Result<HankelValue> {
    check_arguments(n, t)?;
    let sums = series_sums(n, t)?;
    let pre = prefactor(n, t);

    let s = Complex64::new(sums.s_re.to_f64(), sums.s_im.to_f64());
    // d/dt [e^{it}/t · S] = e^{it}/t · (i S - (S + T)/t)
    let d_re = -sums.s_im - (sums.s_re + sums.t_re).div_f64(t);
    let d_im = sums.s_re - (sums.s_im + sums.t_im).div_f64(t);
    let d = Complex64::new(d_re.to_f64(), d_im.to_f64());

    let value = pre * s;
    let derivative = pre * d;
    if !value.is_finite() || !derivative.is_finite() {
        return Err(Error::Capacity(format!(
            "h_{n}({t}) is not representable in double precision"
        )));
    }
    Ok(HankelValue {
        order: n,
        argument: t,
        value,
        derivative,
    })
}

/// `ĥ_n(t)` from the finite series.
pub fn hankel_value(n: usize, t: f64) -> Result<Complex64> {
    hankel(n, t).map(|h| h.value)
}

/// `d/dt ĥ_n(t)` from the differentiated finite series.
pub fn hankel_derivative(n: usize, t: f64) -> Result<Complex64> {
    hankel(n, t).map(|h| h.derivative)
}

/// `√(2/π) · √(j_n(t)² + y_n(t)²)` via upward recurrence for `y_n` and a
/// normalized downward (Miller) recurrence for `j_n`.
pub fn hankel_magnitude_oracle(n: usize, t: f64) -> Result<f64> {
    if !(t >= ORACLE_MIN_ARGUMENT) || !t.is_finite() {
        return Err(Error::Domain(format!(
            "oracle requires t >= {ORACLE_MIN_ARGUMENT}, got t = {t}"
        )));
    }
    if n > MAX_SUPPORTED_ORDER {
        return Err(Error::OrderOutOfRange {
            order: n,
            max: MAX_SUPPORTED_ORDER,
        });
    }
    let j = spherical_j_miller(n, t);
    let y = spherical_y_upward(n, t);
    Ok(FRAC_2_PI.sqrt() * j.hypot(y))
}

fn spherical_y_upward(n: usize, t: f64) -> f64 {
    let (sin, cos) = t.sin_cos();
    let y0 = -cos / t;
    if n == 0 {
        return y0;
    }
    let mut prev = y0;
    let mut cur = -cos / (t * t) - sin / t;
    for k in 1..n {
        let next = (2 * k + 1) as f64 / t * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Downward recurrence normalized with `Σ (2k+1) j_k(t)² = 1`, which has no
/// trouble near zeros of `j_0` or `j_1`.
fn spherical_j_miller(n: usize, t: f64) -> f64 {
    const RESCALE_ABOVE: f64 = 1.0e100;
    const RESCALE_BY: f64 = 1.0e-100;

    let reach = (n as f64).max(t);
    let start = reach.ceil() as usize + 20 + (10.0 * reach.cbrt()).ceil() as usize;

    let mut next = 0.0_f64; // f_{k+1}
    let mut cur = 1.0e-30_f64; // f_k
    let mut norm = (2 * start + 1) as f64 * cur * cur;
    let mut target = if start == n { cur } else { 0.0 };

    for k in (1..=start).rev() {
        let prev = (2 * k + 1) as f64 / t * cur - next;
        next = cur;
        cur = prev;
        norm += (2 * (k - 1) + 1) as f64 * cur * cur;
        if k - 1 == n {
            target = cur;
        }
        if cur.abs() > RESCALE_ABOVE {
            cur *= RESCALE_BY;
            next *= RESCALE_BY;
            norm *= RESCALE_BY * RESCALE_BY;
            target *= RESCALE_BY;
        }
    }
    target / norm.sqrt()
}
