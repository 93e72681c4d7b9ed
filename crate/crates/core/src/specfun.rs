//! Special functions: Gamma, Bessel functions of the first kind of real order,
//! and the normalized Bessel function
//!
//! ```text
//! j_γ(x) = 2^γ Γ(γ+1) J_γ(x) / x^γ = Γ(γ+1) Σ (-1)^n (x/2)^{2n} / (n! Γ(n+γ+1))
//! ```
//!
//! which equals 1 at the origin and is bounded by 1 in modulus for γ ≥ -1/2.
//!
//! `J_ν` is evaluated in three regimes: the power series for small arguments,
//! Miller's backward recurrence in the middle range, and the Hankel asymptotic
//! expansion for large arguments.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Arguments at or below this use the power series.
pub const SERIES_LIMIT: f64 = 8.0;
/// Lower bound of the Hankel asymptotic regime; raised for large orders.
pub const ASYMPTOTIC_LIMIT: f64 = 35.0;

const SERIES_REL_TOL: f64 = 1e-17;
const SERIES_MAX_TERMS: usize = 400;

/// Bessel order γ with the constraint γ > -1/2.
///
/// Γ(γ+1) is cached at construction since every kernel evaluation needs it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Order {
    gamma: f64,
    gamma_fn_p1: f64,
}

impl Order {
    pub fn new(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma <= -0.5 {
            return Err(Error::InvalidOrder(gamma));
        }
        Ok(Self {
            gamma,
            gamma_fn_p1: lanczos_gamma(gamma + 1.0),
        })
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.gamma
    }

    /// Exponent 2γ+1 of the radial weight s^{2γ+1}.
    #[inline]
    pub fn weight_exponent(&self) -> f64 {
        2.0 * self.gamma + 1.0
    }

    /// Γ(γ+1).
    #[inline]
    pub fn gamma_fn_p1(&self) -> f64 {
        self.gamma_fn_p1
    }

    /// Normalized Bessel function j_γ(x) for finite x; callers validate.
    #[inline]
    pub(crate) fn j(&self, x: f64) -> f64 {
        let x = x.abs();
        if x <= SERIES_LIMIT {
            normalized_series(self.gamma, x)
        } else {
            let nu = self.gamma;
            (2.0 * x.recip()).powf(nu) * self.gamma_fn_p1 * bessel_j_large(nu, x)
        }
    }
}

impl TryFrom<f64> for Order {
    type Error = Error;

    fn try_from(gamma: f64) -> Result<Self> {
        Order::new(gamma)
    }
}

impl From<Order> for f64 {
    fn from(order: Order) -> f64 {
        order.gamma
    }
}

/// Gamma function for positive real arguments.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain {
            what: "gamma argument",
            value: x,
        });
    }
    Ok(lanczos_gamma(x))
}

// Lanczos approximation (g = 7, 9 terms); shifts small arguments up by one.
pub(crate) fn lanczos_gamma(x: f64) -> f64 {
    if x < 0.5 {
        return lanczos_gamma(x + 1.0) / x;
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    // t^(x+1/2) split in two halves to postpone overflow.
    let half = t.powf(0.5 * (x + 0.5));
    (2.0 * PI).sqrt() * half * ((-t).exp() * half) * acc
}

/// The constant c_γ = 1 / (2^γ Γ(γ+1)).
pub fn c_gamma(order: Order) -> f64 {
    1.0 / (2f64.powf(order.gamma) * order.gamma_fn_p1)
}

/// Normalized Bessel function j_γ(x); even in x.
pub fn normalized_bessel(order: Order, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain {
            what: "bessel argument",
            value: x,
        });
    }
    Ok(order.j(x))
}

/// Bessel function of the first kind J_ν(x) for ν > -1 and x ≥ 0.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !(nu.is_finite() && nu > -1.0) {
        return Err(Error::Domain {
            what: "bessel order",
            value: nu,
        });
    }
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::Domain {
            what: "bessel argument",
            value: x,
        });
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if x <= SERIES_LIMIT {
        Ok((0.5 * x).powf(nu) / lanczos_gamma(nu + 1.0) * normalized_series(nu, x))
    } else {
        Ok(bessel_j_large(nu, x))
    }
}

// Σ (-x²/4)^n Γ(ν+1) / (n! Γ(n+ν+1)), summed until the next term is
// negligible against the partial sum.
fn normalized_series(nu: f64, x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..SERIES_MAX_TERMS {
        let n = n as f64;
        term *= q / (n * (n + nu));
        sum += term;
        if term.abs() < SERIES_REL_TOL * sum.abs() {
            break;
        }
    }
    sum
}

fn asymptotic_threshold(nu: f64) -> f64 {
    ASYMPTOTIC_LIMIT.max(2.0 * nu * nu)
}

fn bessel_j_large(nu: f64, x: f64) -> f64 {
    if x >= asymptotic_threshold(nu) {
        hankel_asymptotic(nu, x)
    } else {
        miller(nu, x)
    }
}

// Hankel expansion J_ν(x) ~ sqrt(2/(πx)) (P cos χ - Q sin χ), χ = x - (ν/2 + 1/4)π.
// The series is asymptotic, so summation stops at the smallest term.
fn hankel_asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= (mu - odd * odd) / (8.0 * kf * x);
        let mag = term.abs();
        if mag > prev {
            break;
        }
        // a_k / x^k enters P (even k) or Q (odd k) with sign (-1)^{floor(k/2)}.
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if mag < 1e-17 {
            break;
        }
        prev = mag;
    }
    let chi = x - (0.5 * nu + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

// Miller's backward recurrence on orders φ-1+k, normalized with
// (x/2)^β = Σ_j (β+2j) Γ(β+j)/j! J_{β+2j}(x), β = φ+1 ∈ [1, 2).
fn miller(nu: f64, x: f64) -> f64 {
    let m = nu.floor();
    let phi = nu - m;
    let target = (m + 1.0) as usize;
    let start = (x + 25.0 + 4.0 * x.sqrt()).ceil() as usize + target;
    let top = start + (start % 2);

    let mut f = vec![0.0_f64; top + 2];
    f[top] = 1e-30;
    for k in (1..=top).rev() {
        let order = phi - 1.0 + k as f64;
        let next = 2.0 * order / x * f[k] - f[k + 1];
        f[k - 1] = next;
        if next.abs() > 1e250 {
            for v in &mut f[k - 1..] {
                *v *= 1e-250;
            }
        }
    }

    let beta = phi + 1.0;
    let mut coeff = lanczos_gamma(beta);
    let mut norm = 0.0;
    let mut j = 0usize;
    while 2 + 2 * j <= top {
        let jf = j as f64;
        norm += (beta + 2.0 * jf) * coeff * f[2 + 2 * j];
        coeff *= (beta + jf) / (jf + 1.0);
        j += 1;
    }
    f[target] * (0.5 * x).powf(beta) / norm
}
