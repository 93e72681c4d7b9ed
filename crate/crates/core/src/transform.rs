//! The quadratic-phase Fourier–Bessel transform
//!
//! ```text
//! B[h](t) = c_γ / (ib)^{γ+1} ∫₀^∞ e^{-i(a s² + c t² + d s + e t)} j_γ(s t / b) h(s) s^{2γ+1} ds
//! ```
//!
//! with its inverse (the same transform with parameters (-c, -b, -a, -e, -d)),
//! the factorization through the classical Fourier–Bessel transform, the
//! parameter reductions, and numerical checks of the transform identities.
//!
//! Powers (ib)^{γ+1} use the principal branch, Arg(ib) = ±π/2. With that
//! choice the forward and inverse prefactors multiply to |b|^{-(2γ+2)} c_γ²,
//! which is what makes the inverse exact.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::quadrature::{
    build_rule, check_exponent, QuadratureRule, RadialFunction, RadialGrid, Resolution, Signal,
};
use crate::specfun::{c_gamma, Order};

/// Absolute tolerance of the scaling identity check.
pub const SCALING_TOLERANCE: f64 = 1e-8;
/// Relative slack allowed on top of the L¹ → L^∞ bound.
pub const SUP_BOUND_SLACK: f64 = 1e-10;

/// The five phase parameters (a, b, c, d, e) and the order γ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct QpfbParams {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    e: f64,
    order: Order,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct RawParams {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    e: f64,
    gamma: f64,
}

impl TryFrom<RawParams> for QpfbParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        QpfbParams::new(raw.a, raw.b, raw.c, raw.d, raw.e, raw.gamma)
    }
}

impl From<QpfbParams> for RawParams {
    fn from(p: QpfbParams) -> Self {
        RawParams {
            a: p.a,
            b: p.b,
            c: p.c,
            d: p.d,
            e: p.e,
            gamma: p.order.value(),
        }
    }
}

impl QpfbParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64, e: f64, gamma: f64) -> Result<Self> {
        Self::with_order(a, b, c, d, e, Order::new(gamma)?)
    }

    pub fn with_order(a: f64, b: f64, c: f64, d: f64, e: f64, order: Order) -> Result<Self> {
        for (what, v) in [("a", a), ("b", b), ("c", c), ("d", d), ("e", e)] {
            if !v.is_finite() {
                return Err(Error::Domain {
                    what: param_name(what),
                    value: v,
                });
            }
        }
        if b == 0.0 {
            return Err(Error::ZeroB);
        }
        Ok(Self {
            a,
            b,
            c,
            d,
            e,
            order,
        })
    }

    /// a = c = d = e = 0, b = 1.
    pub fn classical(order: Order) -> Self {
        Self {
            a: 0.0,
            b: 1.0,
            c: 0.0,
            d: 0.0,
            e: 0.0,
            order,
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }
    pub fn e(&self) -> f64 {
        self.e
    }
    pub fn order(&self) -> Order {
        self.order
    }
    pub fn gamma(&self) -> f64 {
        self.order.value()
    }

    /// Parameters of the inverse transform: (-c, -b, -a, -e, -d).
    pub fn inverse(&self) -> Self {
        Self {
            a: -self.c,
            b: -self.b,
            c: -self.a,
            d: -self.e,
            e: -self.d,
            order: self.order,
        }
    }

    /// c_γ / (ib)^{γ+1}.
    pub fn prefactor(&self) -> Complex64 {
        let power = principal_power_ib(self.b, self.order.value());
        c_gamma(self.order) / power
    }

    /// c_γ / |b|^{γ+1}, the L¹ → L^∞ operator bound.
    pub fn sup_bound_constant(&self) -> f64 {
        c_gamma(self.order) / self.b.abs().powf(self.order.value() + 1.0)
    }

    /// Phase a s² + d s of the input variable.
    #[inline]
    pub fn input_phase(&self, s: f64) -> f64 {
        (self.a * s + self.d) * s
    }

    /// Phase c t² + e t of the output variable.
    #[inline]
    pub fn output_phase(&self, t: f64) -> f64 {
        (self.c * t + self.e) * t
    }
}

fn param_name(p: &str) -> &'static str {
    match p {
        "a" => "parameter a",
        "b" => "parameter b",
        "c" => "parameter c",
        "d" => "parameter d",
        _ => "parameter e",
    }
}

fn principal_power_ib(b: f64, gamma: f64) -> Complex64 {
    let arg = if b > 0.0 { FRAC_PI_2 } else { -FRAC_PI_2 };
    let p = gamma + 1.0;
    Complex64::from_polar((p * b.abs().ln()).exp(), p * arg)
}

/// (ib)^{γ+1} on the principal branch, Arg(ib) ∈ (-π, π].
pub fn complex_power_ib(b: f64, gamma: f64) -> Result<Complex64> {
    if b == 0.0 {
        return Err(Error::ZeroB);
    }
    if !(b.is_finite() && gamma.is_finite()) {
        return Err(Error::NonFinite("complex power"));
    }
    Ok(principal_power_ib(b, gamma))
}

/// The kernel e^{-i(a s² + c t² + d s + e t)} j_γ(s t / b).
#[inline]
pub fn kernel(params: &QpfbParams, t: f64, s: f64) -> Complex64 {
    let phase = params.input_phase(s) + params.output_phase(t);
    Complex64::from_polar(params.order.j(s * t / params.b), -phase)
}

/// Transform values on an output grid, with the prefactor that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformResult {
    pub signal: Signal,
    pub params: QpfbParams,
    pub prefactor: Complex64,
    pub resolution: Resolution,
}

impl TransformResult {
    pub fn grid(&self) -> &RadialGrid {
        self.signal.grid()
    }

    pub fn values(&self) -> &[Complex64] {
        self.signal.values()
    }
}

impl RadialFunction for TransformResult {
    fn eval(&self, s: f64) -> Complex64 {
        self.signal.eval(s)
    }

    fn sample(&self, points: &[f64]) -> Vec<Complex64> {
        self.signal.sample(points)
    }
}

fn check_order(params: &QpfbParams, rule: &QuadratureRule) -> Result<()> {
    if params.order != rule.order() {
        return Err(Error::OrderMismatch {
            rule: rule.order().value(),
            params: params.order.value(),
        });
    }
    Ok(())
}

/// Transform of samples taken on `rule`'s nodes, evaluated at `points`.
pub(crate) fn transform_samples(
    params: &QpfbParams,
    samples: &[Complex64],
    rule: &QuadratureRule,
    points: &[f64],
) -> Vec<Complex64> {
    let pre = params.prefactor();
    // the chirps separate: e^{-i(as²+ds)} goes into the node weights and
    // e^{-i(ct²+et)} multiplies each output, leaving only j_γ in the double sum
    let weighted: Vec<(f64, Complex64)> = rule
        .nodes()
        .iter()
        .zip(rule.weights())
        .zip(samples)
        .map(|((&s, &w), &h)| {
            (
                s / params.b,
                h * Complex64::from_polar(w, -params.input_phase(s)),
            )
        })
        .collect();
    points
        .par_iter()
        .map(|&t| {
            let acc = weighted
                .iter()
                .fold(Complex64::new(0.0, 0.0), |acc, &(sb, wh)| {
                    acc + wh * params.order.j(sb * t)
                });
            pre * Complex64::from_polar(1.0, -params.output_phase(t)) * acc
        })
        .collect()
}

/// Forward transform of `h` sampled on `rule`, evaluated on `out_grid`.
pub fn forward<H: RadialFunction + ?Sized>(
    params: &QpfbParams,
    h: &H,
    out_grid: &RadialGrid,
    rule: &QuadratureRule,
) -> Result<TransformResult> {
    check_order(params, rule)?;
    let samples = rule.sample(h)?;
    let values = transform_samples(params, &samples, rule, out_grid.points());
    Ok(TransformResult {
        signal: Signal::new(out_grid.clone(), values)?,
        params: *params,
        prefactor: params.prefactor(),
        resolution: rule.resolution(),
    })
}

/// Classical Fourier–Bessel transform c_γ ∫ j_γ(s x) h(s) s^{2γ+1} ds at `points`.
pub fn classical_fbt<H: RadialFunction + ?Sized>(
    order: Order,
    h: &H,
    points: &[f64],
    rule: &QuadratureRule,
) -> Result<Vec<Complex64>> {
    if order != rule.order() {
        return Err(Error::OrderMismatch {
            rule: rule.order().value(),
            params: order.value(),
        });
    }
    let samples = rule.sample(h)?;
    let cg = c_gamma(order);
    Ok(points
        .par_iter()
        .map(|&x| {
            let mut acc = Complex64::new(0.0, 0.0);
            for ((&s, &w), &v) in rule.nodes().iter().zip(rule.weights()).zip(&samples) {
                acc += v * (w * order.j(s * x));
            }
            acc * cg
        })
        .collect())
}

/// Forward transform computed as e^{-i(ct²+et)} / (ib)^{γ+1} · B_γ[e^{-i(as²+ds)} h](t/b).
pub fn forward_via_classical<H: RadialFunction + ?Sized>(
    params: &QpfbParams,
    h: &H,
    out_grid: &RadialGrid,
    rule: &QuadratureRule,
) -> Result<TransformResult> {
    check_order(params, rule)?;
    let chirped = |s: f64| h.eval(s) * Complex64::from_polar(1.0, -params.input_phase(s));
    let scaled: Vec<f64> = out_grid.points().iter().map(|t| t / params.b).collect();
    let classical = classical_fbt(params.order, &chirped, &scaled, rule)?;
    let power = principal_power_ib(params.b, params.order.value());
    let values = out_grid
        .points()
        .iter()
        .zip(classical)
        .map(|(&t, v)| v * Complex64::from_polar(1.0, -params.output_phase(t)) / power)
        .collect();
    Ok(TransformResult {
        signal: Signal::new(out_grid.clone(), values)?,
        params: *params,
        prefactor: params.prefactor(),
        resolution: rule.resolution(),
    })
}

/// Inverse transform: the transform with parameters (-c, -b, -a, -e, -d).
///
/// `rule` integrates over the transform variable, so it should cover the
/// support of `transformed`.
pub fn inverse<H: RadialFunction + ?Sized>(
    params: &QpfbParams,
    transformed: &H,
    out_grid: &RadialGrid,
    rule: &QuadratureRule,
) -> Result<Signal> {
    Ok(forward(&params.inverse(), transformed, out_grid, rule)?.signal)
}

/// Named special cases of the transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Reduction {
    /// The classical Fourier–Bessel transform.
    ClassicalFbt,
    /// Fractional Fourier–Bessel transform of angle θ.
    Fractional { theta: f64 },
    /// Linear canonical Fourier–Bessel transform with kernel phase
    /// e^{(i/2)(a/b s² + d/b t²)}.
    LinearCanonical { a: f64, b: f64, d: f64 },
}

/// Phase parameters reproducing one of the classical special cases.
pub fn reduce_params(kind: Reduction, order: Order) -> Result<QpfbParams> {
    match kind {
        Reduction::ClassicalFbt => Ok(QpfbParams::classical(order)),
        Reduction::Fractional { theta } => {
            if !theta.is_finite() {
                return Err(Error::NonFinite("fractional angle"));
            }
            let (sin, cos) = theta.sin_cos();
            if sin.abs() < 1e-12 {
                return Err(Error::SingularAngle(theta));
            }
            let quad = -0.5 * cos / sin;
            QpfbParams::with_order(quad, sin, quad, 0.0, 0.0, order)
        }
        Reduction::LinearCanonical { a, b, d } => {
            if b == 0.0 {
                return Err(Error::ZeroB);
            }
            QpfbParams::with_order(-a / (2.0 * b), b, -d / (2.0 * b), 0.0, 0.0, order)
        }
    }
}

/// Parseval and Plancherel discrepancies at a given resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParsevalReport {
    /// |⟨h, g⟩ - ⟨Bh, Bg⟩|
    pub inner_product_gap: f64,
    /// |‖Bh‖₂ - ‖h‖₂|
    pub norm_gap: f64,
    pub norm_signal: f64,
    pub norm_transform: f64,
    pub signal_resolution: Resolution,
    pub transform_resolution: Resolution,
}

impl ParsevalReport {
    pub fn relative_norm_gap(&self) -> f64 {
        if self.norm_signal == 0.0 {
            self.norm_gap
        } else {
            self.norm_gap / self.norm_signal
        }
    }
}

/// Compares inner products and norms before and after the transform.
///
/// `signal_rule` integrates in s; `transform_rule` integrates in t and should
/// cover the essential support of both transforms.
pub fn parseval_check<H, G>(
    params: &QpfbParams,
    h: &H,
    g: &G,
    signal_rule: &QuadratureRule,
    transform_rule: &QuadratureRule,
) -> Result<ParsevalReport>
where
    H: RadialFunction + ?Sized,
    G: RadialFunction + ?Sized,
{
    check_order(params, signal_rule)?;
    check_order(params, transform_rule)?;
    let hs = signal_rule.sample(h)?;
    let gs = signal_rule.sample(g)?;
    let bh = transform_samples(params, &hs, signal_rule, transform_rule.nodes());
    let bg = transform_samples(params, &gs, signal_rule, transform_rule.nodes());

    let dot = |rule: &QuadratureRule, x: &[Complex64], y: &[Complex64]| {
        let prod: Vec<Complex64> = x.iter().zip(y).map(|(a, b)| a * b.conj()).collect();
        rule.sum(&prod)
    };
    let before = dot(signal_rule, &hs, &gs)?;
    let after = dot(transform_rule, &bh, &bg)?;
    let norm_signal = signal_rule.norm_of(&hs, 2.0)?;
    let norm_transform = transform_rule.norm_of(&bh, 2.0)?;
    Ok(ParsevalReport {
        inner_product_gap: (before - after).norm(),
        norm_gap: (norm_transform - norm_signal).abs(),
        norm_signal,
        norm_transform,
        signal_resolution: signal_rule.resolution(),
        transform_resolution: transform_rule.resolution(),
    })
}

/// Sup-norm bound and decay evidence of the transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RiemannLebesgueReport {
    /// max over the probes of |B[h](t)|
    pub sup: f64,
    /// (c_γ/|b|^{γ+1}) ‖h‖_{γ,1}
    pub bound: f64,
    pub pass: bool,
    /// largest probe point and |B[h]| there
    pub tail_t: f64,
    pub tail_value: f64,
    pub resolution: Resolution,
}

pub fn riemann_lebesgue_check<H: RadialFunction + ?Sized>(
    params: &QpfbParams,
    h: &H,
    rule: &QuadratureRule,
    probes: &RadialGrid,
) -> Result<RiemannLebesgueReport> {
    check_order(params, rule)?;
    let samples = rule.sample(h)?;
    let l1 = rule.norm_of(&samples, 1.0)?;
    let values = transform_samples(params, &samples, rule, probes.points());
    let sup = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let bound = params.sup_bound_constant() * l1;
    let (tail_t, tail_value) = probes
        .points()
        .last()
        .map(|&t| (t, values.last().map_or(0.0, |v| v.norm())))
        .unwrap_or((0.0, 0.0));
    Ok(RiemannLebesgueReport {
        sup,
        bound,
        pass: sup <= bound * (1.0 + SUP_BOUND_SLACK),
        tail_t,
        tail_value,
        resolution: rule.resolution(),
    })
}

/// Outcome of comparing B[h](k t) with k^{-(2γ+2)} B'[h_k](t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingReport {
    pub k: f64,
    pub discrepancy: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub lhs_resolution: Resolution,
    pub rhs_resolution: Resolution,
}

/// Checks the scaling identity with a' = a/k², c' = c k², d' = d/k, e' = e k
/// and h_k(v) = h(v/k).
///
/// The left side is integrated with `rule`; the right side with an
/// independent rule on [0, kR] carrying twice as many panels.
pub fn scaling_identity_check<H: RadialFunction + ?Sized>(
    params: &QpfbParams,
    h: &H,
    k: f64,
    rule: &QuadratureRule,
    out_grid: &RadialGrid,
) -> Result<ScalingReport> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::Domain {
            what: "scaling factor",
            value: k,
        });
    }
    check_order(params, rule)?;
    let res = rule.resolution();
    let scaled_params = QpfbParams::with_order(
        params.a / (k * k),
        params.b,
        params.c * k * k,
        params.d / k,
        params.e * k,
        params.order,
    )?;
    let scaled_rule = build_rule(
        params.order,
        k * res.radius,
        2 * res.panels,
        res.nodes_per_panel,
    )?;
    let h_k = |v: f64| h.eval(v / k);

    let lhs_points: Vec<f64> = out_grid.points().iter().map(|t| k * t).collect();
    let samples = rule.sample(h)?;
    let lhs = transform_samples(params, &samples, rule, &lhs_points);

    let scaled_samples = scaled_rule.sample(&h_k)?;
    let rhs = transform_samples(
        &scaled_params,
        &scaled_samples,
        &scaled_rule,
        out_grid.points(),
    );
    let factor = k.powf(-(2.0 * params.order.value() + 2.0));

    let discrepancy = lhs
        .iter()
        .zip(&rhs)
        .map(|(l, r)| (l - r * factor).norm())
        .fold(0.0, f64::max);
    Ok(ScalingReport {
        k,
        discrepancy,
        tolerance: SCALING_TOLERANCE,
        pass: discrepancy <= SCALING_TOLERANCE,
        lhs_resolution: res,
        rhs_resolution: scaled_rule.resolution(),
    })
}

/// Weighted p-norm of a transform result on its own output grid nodes is not
/// a quadrature; callers integrate on a rule. This helper evaluates ‖B[h]‖_{γ,p}
/// on `transform_rule`.
pub fn transform_norm<H: RadialFunction + ?Sized>(
    params: &QpfbParams,
    h: &H,
    p: f64,
    signal_rule: &QuadratureRule,
    transform_rule: &QuadratureRule,
) -> Result<f64> {
    check_exponent(p)?;
    check_order(params, signal_rule)?;
    let samples = signal_rule.sample(h)?;
    let values = transform_samples(params, &samples, signal_rule, transform_rule.nodes());
    transform_rule.norm_of(&values, p)
}
