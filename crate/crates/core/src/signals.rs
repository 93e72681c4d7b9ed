//! Closed-form test signals.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::quadrature::RadialFunction;

fn one() -> f64 {
    1.0
}

/// Signals given by formula rather than samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TestSignal {
    /// amplitude · e^{-α s²}
    Gaussian {
        alpha: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// amplitude · s^k e^{-α s²}
    PowerGaussian {
        k: u32,
        alpha: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    Zero,
}

impl TestSignal {
    pub fn gaussian(alpha: f64) -> Self {
        TestSignal::Gaussian {
            alpha,
            amplitude: 1.0,
        }
    }

    pub fn power_gaussian(k: u32, alpha: f64) -> Self {
        TestSignal::PowerGaussian {
            k,
            alpha,
            amplitude: 1.0,
        }
    }

    pub fn name(&self) -> String {
        match self {
            TestSignal::Gaussian { alpha, .. } => format!("gaussian(alpha={alpha})"),
            TestSignal::PowerGaussian { k, alpha, .. } => format!("s^{k}*gaussian(alpha={alpha})"),
            TestSignal::Zero => "zero".to_string(),
        }
    }

    /// Radius beyond which |h| < tol·amplitude.
    pub fn essential_radius(&self, tol: f64) -> f64 {
        let log_tol = -tol.ln();
        match *self {
            TestSignal::Gaussian { alpha, .. } => (log_tol / alpha).sqrt(),
            TestSignal::PowerGaussian { k, alpha, .. } => {
                // s^k e^{-αs²} ≤ e^{-αs²/2} once s is past the peak of s^k e^{-αs²/2}
                let peak = (k as f64 / alpha).sqrt();
                (2.0 * log_tol / alpha).sqrt().max(2.0 * peak)
            }
            TestSignal::Zero => 0.0,
        }
    }

    /// sup over s ≥ 0 of |h(s)|.
    pub fn sup_norm(&self) -> f64 {
        match *self {
            TestSignal::Gaussian { amplitude, .. } => amplitude.abs(),
            TestSignal::PowerGaussian {
                k,
                alpha,
                amplitude,
            } => {
                let peak = (k as f64 / (2.0 * alpha)).sqrt();
                self.value(peak)
                    .abs()
                    .max(amplitude.abs() * if k == 0 { 1.0 } else { 0.0 })
            }
            TestSignal::Zero => 0.0,
        }
    }

    pub fn value(&self, s: f64) -> f64 {
        match *self {
            TestSignal::Gaussian { alpha, amplitude } => amplitude * (-alpha * s * s).exp(),
            TestSignal::PowerGaussian {
                k,
                alpha,
                amplitude,
            } => amplitude * s.powi(k as i32) * (-alpha * s * s).exp(),
            TestSignal::Zero => 0.0,
        }
    }
}

impl RadialFunction for TestSignal {
    fn eval(&self, s: f64) -> Complex64 {
        Complex64::new(self.value(s), 0.0)
    }
}
