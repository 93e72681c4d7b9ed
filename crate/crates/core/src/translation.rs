//! Generalized translation attached to the transform.
//!
//! The classical Bessel translation is
//!
//! ```text
//! 𝒯_t h(s) = ∫ h(u) W_γ(s, t, u) u^{2γ+1} du,   u ∈ [|s-t|, s+t]
//! W_γ(s, t, u) = 2^{2γ-1} Γ(γ+1) / (√π Γ(γ+1/2)) · Δ^{2γ-1} / (s t u)^{2γ}
//! ```
//!
//! with Δ the area of the triangle with sides s, t, u. The quadratic-phase
//! translation multiplies by the kernel phase e^{-i[a(s²+t²+u²)+d(s+t+u)]}
//! and the factor e^{i(au²+du)}, so that
//!
//! ```text
//! T_t h(s) = e^{-i[a(s²+t²) + d(s+t)]} 𝒯_t h(s).
//! ```
//!
//! Integrals over the support are evaluated in the angle θ of the triangle
//! opposite u, where u² = s² + t² + 2 s t cos θ and the integral becomes
//! K_γ ∫₀^π h(u(θ)) sin^{2γ}θ dθ. The sin^{2γ} factor carries the endpoint
//! behaviour of Δ^{2γ-1}; it is absorbed into a Gauss–Jacobi rule so no node
//! sits on an endpoint. The third side is formed from 1 ± cos θ computed by
//! half angles, which keeps thin triangles accurate.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::gauss::GaussJacobi;
use crate::quadrature::{RadialFunction, RadialGrid, Signal};
use crate::specfun::{lanczos_gamma, Order};
use crate::transform::QpfbParams;

/// Default number of nodes in a [`SupportRule`].
pub const DEFAULT_SUPPORT_NODES: usize = 64;
/// Below this shift the translation returns its t → 0 limit directly.
pub const ZERO_SHIFT: f64 = 1e-12;

/// Area of the triangle with sides s, t, u (Heron), or 0 when the triangle
/// inequality fails.
pub fn triangle_area(s: f64, t: f64, u: f64) -> f64 {
    // Kahan's ordering keeps thin triangles accurate
    let mut sides = [s, t, u];
    sides.sort_by(|x, y| y.total_cmp(x));
    let [a, b, c] = sides;
    let prod = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    if prod > 0.0 {
        0.25 * prod.sqrt()
    } else {
        0.0
    }
}

fn kernel_constant(order: Order) -> f64 {
    let g = order.value();
    order.gamma_fn_p1() / (PI.sqrt() * lanczos_gamma(g + 0.5))
}

fn on_support(s: f64, t: f64, u: f64) -> bool {
    u > (s - t).abs() && u < s + t
}

/// The classical translation kernel W_γ(s, t, u), zero off [|s-t|, s+t].
pub fn w_classical(order: Order, s: f64, t: f64, u: f64) -> Result<f64> {
    for v in [s, t, u] {
        if !v.is_finite() {
            return Err(Error::NonFinite("translation kernel argument"));
        }
        if v <= 0.0 {
            return Err(Error::Domain {
                what: "translation kernel argument",
                value: v,
            });
        }
    }
    if !on_support(s, t, u) {
        return Ok(0.0);
    }
    let g = order.value();
    let area = triangle_area(s, t, u);
    if area == 0.0 {
        return Ok(0.0);
    }
    let c = 2f64.powf(2.0 * g - 1.0) * kernel_constant(order);
    Ok(c * area.powf(2.0 * g - 1.0) / (s * t * u).powf(2.0 * g))
}

/// W_γ together with the quadratic-phase factor at one (s, t, u).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranslationKernelEval {
    pub s: f64,
    pub t: f64,
    pub u: f64,
    /// W_γ(s, t, u)
    pub value: f64,
    /// e^{-i[a(s²+t²+u²)+d(s+t+u)]} e^{i(au²+du)}
    pub phase: Complex64,
}

impl TranslationKernelEval {
    pub fn new(params: &QpfbParams, s: f64, t: f64, u: f64) -> Result<Self> {
        let value = w_classical(params.order(), s, t, u)?;
        let outer = params.input_phase(s) + params.input_phase(t) + params.input_phase(u);
        let phase = Complex64::from_polar(1.0, params.input_phase(u) - outer);
        Ok(Self {
            s,
            t,
            u,
            value,
            phase,
        })
    }

    pub fn kernel(&self) -> Complex64 {
        self.phase * self.value
    }
}

/// Gauss–Jacobi rules for integrals over the translation support.
///
/// Translations use a rule in θ with weight sin^{2γ}θ, whose nodes crowd
/// the ends of the support and resolve sharp signals there. The literal W_γ
/// formula is too ill-conditioned for that crowding when γ is near -1/2, so
/// [`SupportRule::kernel_mass`] uses a second rule in x = cos θ.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportRule {
    order: Order,
    gaps: Vec<(f64, f64)>,
    weights: Vec<f64>,
    mass_gaps: Vec<(f64, f64)>,
    mass_weights: Vec<f64>,
}

impl SupportRule {
    pub fn new(order: Order, nodes: usize) -> Result<Self> {
        let g = order.value();
        let k = kernel_constant(order);

        let angular = GaussJacobi::new(nodes, 2.0 * g, 2.0 * g)?;
        let mut gaps = Vec::with_capacity(nodes);
        let mut weights = Vec::with_capacity(nodes);
        for (&y, &w) in angular.nodes.iter().zip(&angular.weights) {
            let half = FRAC_PI_4 * (1.0 + y);
            let (sh, ch) = half.sin_cos();
            let smooth = if g == 0.0 {
                1.0
            } else {
                (2.0 * sh * ch / (1.0 - y * y)).powf(2.0 * g)
            };
            gaps.push((2.0 * ch * ch, 2.0 * sh * sh));
            weights.push(w * smooth * FRAC_PI_2 * k);
        }

        let jacobi = GaussJacobi::new(nodes, g - 0.5, g - 0.5)?;
        Ok(Self {
            order,
            gaps,
            weights,
            mass_gaps: jacobi.nodes.iter().map(|x| (1.0 + x, 1.0 - x)).collect(),
            mass_weights: jacobi.weights,
        })
    }

    pub fn with_default_nodes(order: Order) -> Result<Self> {
        Self::new(order, DEFAULT_SUPPORT_NODES)
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    fn third_side(&self, k: usize, s: f64, t: f64) -> f64 {
        third_side(self.gaps[k], s, t)
    }

    /// Points u_k on [|s-t|, s+t] at which `classical` samples h.
    pub fn support_points(&self, s: f64, t: f64) -> Vec<f64> {
        (0..self.len()).map(|k| self.third_side(k, s, t)).collect()
    }

    /// Classical translation 𝒯_t h(s).
    pub fn classical<H: RadialFunction + ?Sized>(&self, h: &H, s: f64, t: f64) -> Complex64 {
        if s.min(t) < ZERO_SHIFT {
            return h.eval(s.max(t));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &w) in self.weights.iter().enumerate() {
            acc += h.eval(self.third_side(k, s, t)) * w;
        }
        acc
    }

    /// ∫ W_γ(s,t,u) u^{2γ+1} du evaluated from the literal W_γ formula.
    pub fn kernel_mass(&self, s: f64, t: f64) -> Result<f64> {
        let g = self.order.value();
        let mut mass = 0.0;
        for (&(plus, minus), &w) in self.mass_gaps.iter().zip(&self.mass_weights) {
            let u = third_side((plus, minus), s, t);
            // u du = s t dx; the weight carries (1 - x²)^{γ-1/2}
            let integrand = w_classical(self.order, s, t, u)? * u.powf(2.0 * g) * s * t;
            mass += w * integrand / (plus * minus).powf(g - 0.5);
        }
        Ok(mass)
    }
}

/// Third side for cos θ = x, given the gaps (1 + x, 1 - x).
fn third_side((plus, minus): (f64, f64), s: f64, t: f64) -> f64 {
    let sq = if plus < minus {
        (s - t) * (s - t) + 2.0 * s * t * plus
    } else {
        (s + t) * (s + t) - 2.0 * s * t * minus
    };
    sq.max(0.0).sqrt()
}

/// ∫ W_γ(s,t,u) u^{2γ+1} du over the support, which should equal 1.
pub fn kernel_mass(order: Order, s: f64, t: f64, support: &SupportRule) -> Result<f64> {
    if support.order() != order {
        return Err(Error::OrderMismatch {
            rule: support.order().value(),
            params: order.value(),
        });
    }
    for v in [s, t] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Domain {
                what: "translation kernel argument",
                value: v,
            });
        }
    }
    support.kernel_mass(s, t)
}

/// T_t h as a function of s.
pub struct Translated<'a, H: ?Sized> {
    params: QpfbParams,
    support: &'a SupportRule,
    h: &'a H,
    t: f64,
}

impl<'a, H: RadialFunction + ?Sized> Translated<'a, H> {
    pub fn new(params: &QpfbParams, t: f64, h: &'a H, support: &'a SupportRule) -> Result<Self> {
        if params.order() != support.order() {
            return Err(Error::OrderMismatch {
                rule: support.order().value(),
                params: params.order().value(),
            });
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Domain {
                what: "translation shift",
                value: t,
            });
        }
        Ok(Self {
            params: *params,
            support,
            h,
            t,
        })
    }

    pub fn shift(&self) -> f64 {
        self.t
    }
}

impl<H: RadialFunction + ?Sized> RadialFunction for Translated<'_, H> {
    fn eval(&self, s: f64) -> Complex64 {
        if s < 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let phase = self.params.input_phase(s) + self.params.input_phase(self.t);
        self.support.classical(self.h, s, self.t) * Complex64::from_polar(1.0, -phase)
    }
}

/// T_t h sampled on `out_grid`.
///
/// At t = 0 this returns e^{-i(as²+ds)} h(s), which is h itself when
/// a = d = 0.
pub fn translate<H: RadialFunction + ?Sized>(
    params: &QpfbParams,
    t: f64,
    h: &H,
    out_grid: &RadialGrid,
    support: &SupportRule,
) -> Result<Signal> {
    let op = Translated::new(params, t, h, support)?;
    let values: Vec<Complex64> = out_grid.points().par_iter().map(|&s| op.eval(s)).collect();
    if values
        .iter()
        .any(|v| !(v.re.is_finite() && v.im.is_finite()))
    {
        return Err(Error::NonFinite("translated signal"));
    }
    Signal::new(out_grid.clone(), values)
}
