#![allow(dead_code)]

use num_complex::Complex64;
use qpfb::{Order, QpfbParams, QuadratureRule, TestSignal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Widest panel allowed in either domain.
pub const MAX_PANEL_WIDTH: f64 = 0.25;
pub const NODES: usize = 16;
/// Signal-domain truncation for Gaussians with α ≥ 1/2.
pub const SIGNAL_RADIUS: f64 = 12.0;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn order(g: f64) -> Order {
    Order::new(g).unwrap()
}

/// Rule on [0, radius] whose panels are no wider than `width`.
pub fn rule_with_width(order: Order, radius: f64, width: f64) -> QuadratureRule {
    let panels = (radius / width).ceil().max(1.0) as usize;
    QuadratureRule::new(order, radius, panels, NODES).unwrap()
}

/// Radius beyond which |B[e^{-αs²}]| is below e^{-36} of its peak, widened by
/// the linear phase.
pub fn transform_radius(p: &QpfbParams, alpha: f64) -> f64 {
    let spread = ((alpha * alpha + p.a() * p.a()) / alpha).sqrt();
    p.b().abs() * (12.0 * spread + 2.0 * p.d().abs())
}

/// Signal-side rule: resolves h e^{-i(as²+ds)} j_γ(st/b) for t up to `t_max`.
pub fn signal_rule(p: &QpfbParams, radius: f64, t_max: f64) -> QuadratureRule {
    let freq = 2.0 * p.a().abs() * radius + p.d().abs() + t_max / p.b().abs();
    rule_with_width(p.order(), radius, MAX_PANEL_WIDTH.min(6.0 / freq.max(1e-9)))
}

/// Transform-side rule for inverting: the c and e chirps cancel against the
/// inverse kernel, leaving oscillation on the scale s/|b|.
pub fn transform_rule(p: &QpfbParams, radius: f64, s_max: f64) -> QuadratureRule {
    let freq = 2.0 * s_max / p.b().abs();
    rule_with_width(p.order(), radius, MAX_PANEL_WIDTH.min(6.0 / freq.max(1e-9)))
}

/// Nodes per panel for the high-order variants below.
pub const WIDE_NODES: usize = 48;
/// Phase (radians) a `WIDE_NODES` panel resolves to near machine precision.
const WIDE_PHASE: f64 = 38.0;

fn wide_rule(order: Order, radius: f64, freq: f64) -> QuadratureRule {
    let width = 1.0f64.min(WIDE_PHASE / freq.max(1e-9));
    let panels = (radius / width).ceil().max(1.0) as usize;
    QuadratureRule::new(order, radius, panels, WIDE_NODES).unwrap()
}

/// [`signal_rule`] with 48-node panels, for strongly oscillating kernels.
pub fn wide_signal_rule(p: &QpfbParams, radius: f64, t_max: f64) -> QuadratureRule {
    wide_rule(
        p.order(),
        radius,
        2.0 * p.a().abs() * radius + p.d().abs() + t_max / p.b().abs(),
    )
}

/// [`transform_rule`] with 48-node panels.
pub fn wide_transform_rule(p: &QpfbParams, radius: f64, s_max: f64) -> QuadratureRule {
    wide_rule(p.order(), radius, 2.0 * s_max / p.b().abs())
}

pub fn random_params<R: Rng>(rng: &mut R, gamma: f64) -> QpfbParams {
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    QpfbParams::new(
        rng.gen_range(-0.5..0.5),
        sign * rng.gen_range(0.5..2.0),
        rng.gen_range(-0.5..0.5),
        rng.gen_range(-0.5..0.5),
        rng.gen_range(-0.5..0.5),
        gamma,
    )
    .unwrap()
}

/// Five Gaussian-class signals.
pub fn gaussian_class() -> Vec<TestSignal> {
    vec![
        TestSignal::gaussian(0.5),
        TestSignal::gaussian(1.0),
        TestSignal::power_gaussian(1, 1.0),
        TestSignal::power_gaussian(2, 0.5),
        TestSignal::Gaussian {
            alpha: 0.75,
            amplitude: -2.5,
        },
    ]
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Transform-domain radius for `h`: starting from `start`, grows by half
/// until the L² mass of B[h] on [R, 1.5R] is below `tol` relative to ‖h‖.
/// Linear phases and odd signals leave algebraically decaying spectra, so a
/// Gaussian-based radius alone is not enough.
pub fn spectral_radius<H: qpfb::RadialFunction + ?Sized>(
    p: &QpfbParams,
    h: &H,
    rs: f64,
    start: f64,
    tol: f64,
) -> f64 {
    let mut r = start;
    loop {
        let srule = wide_signal_rule(p, rs, 1.5 * r);
        let norm_h = srule.norm_of(&srule.sample(h).unwrap(), 2.0).unwrap();
        let width = 1.0f64.min(WIDE_PHASE * p.b().abs() / (2.0 * rs));
        let band =
            QuadratureRule::on_intervals(p.order(), &[(r, 1.5 * r)], width, WIDE_NODES).unwrap();
        let spectrum = qpfb::forward(p, h, &band.grid(), &srule).unwrap();
        let tail = band.norm_of(spectrum.values(), 2.0).unwrap() / norm_h;
        if tail < tol || r > 1000.0 {
            return r;
        }
        r *= 1.5;
    }
}
