//! Weighted quadrature on the truncated half line.
//!
//! Every integral in this crate has the form ∫₀^R f(s) s^{2γ+1} ds. The
//! weight s^{2γ+1} is folded into the quadrature weights: interior panels use
//! Gauss–Legendre nodes scaled by the weight, and a panel touching the origin
//! uses Gauss–Jacobi with the weight (1+x)^{2γ+1}, so monomials times the
//! weight are integrated exactly there as well.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::gauss::GaussJacobi;
use crate::specfun::Order;

/// Number of points used by off-grid interpolation of sampled signals.
pub const INTERPOLATION_POINTS: usize = 8;

/// Anything that can be evaluated on the half line.
///
/// Closures `Fn(f64) -> Complex64` implement this directly; [`Signal`]
/// implements it through local interpolation.
pub trait RadialFunction: Sync {
    fn eval(&self, s: f64) -> Complex64;

    fn sample(&self, points: &[f64]) -> Vec<Complex64> {
        points.iter().map(|&s| self.eval(s)).collect()
    }
}

impl<F> RadialFunction for F
where
    F: Fn(f64) -> Complex64 + Sync,
{
    #[inline]
    fn eval(&self, s: f64) -> Complex64 {
        self(s)
    }
}

/// Strictly increasing sample points on [0, R].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    points: Vec<f64>,
    radius: f64,
}

impl RadialGrid {
    pub fn new(points: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "truncation radius must be positive and finite, got {radius}"
            )));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidGrid(format!("point {i} is not finite")));
        }
        if let Some(&first) = points.first() {
            if first < 0.0 {
                return Err(Error::InvalidGrid(format!(
                    "first point {first} is negative"
                )));
            }
        }
        if let Some(&last) = points.last() {
            if last > radius {
                return Err(Error::InvalidGrid(format!(
                    "last point {last} exceeds truncation radius {radius}"
                )));
            }
        }
        if let Some(i) = points.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid(format!(
                "points must be strictly increasing (index {})",
                i + 1
            )));
        }
        Ok(Self { points, radius })
    }

    /// `count` equispaced points from `lo` to `hi` inclusive; the radius is `hi`.
    pub fn uniform(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidGrid(
                "uniform grid needs at least 2 points".into(),
            ));
        }
        let step = (hi - lo) / (count - 1) as f64;
        let mut points: Vec<f64> = (0..count).map(|i| lo + step * i as f64).collect();
        points[count - 1] = hi;
        Self::new(points, hi)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Panel layout of a composite rule, carried into every report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resolution {
    pub radius: f64,
    pub panels: usize,
    pub nodes_per_panel: usize,
}

impl Resolution {
    pub fn panel_width(&self) -> f64 {
        self.radius / self.panels as f64
    }

    pub fn total_nodes(&self) -> usize {
        self.panels * self.nodes_per_panel
    }
}

impl Default for Resolution {
    /// [0, 12] in 64 panels of 16 nodes.
    fn default() -> Self {
        Self {
            radius: 12.0,
            panels: 64,
            nodes_per_panel: 16,
        }
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}x{} on [0, {}]",
            self.panels, self.nodes_per_panel, self.radius
        )
    }
}

/// Composite rule for ∫ f(s) s^{2γ+1} ds with the weight folded in.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    order: Order,
    resolution: Resolution,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Composite Gauss rule on [0, R] with `panels` equal panels.
pub fn build_rule(
    order: Order,
    radius: f64,
    panels: usize,
    nodes_per_panel: usize,
) -> Result<QuadratureRule> {
    QuadratureRule::new(order, radius, panels, nodes_per_panel)
}

impl QuadratureRule {
    pub fn new(order: Order, radius: f64, panels: usize, nodes_per_panel: usize) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::Domain {
                what: "truncation radius",
                value: radius,
            });
        }
        if panels == 0 {
            return Err(Error::Domain {
                what: "panel count",
                value: 0.0,
            });
        }
        let resolution = Resolution {
            radius,
            panels,
            nodes_per_panel,
        };
        let width = radius / panels as f64;
        let breaks: Vec<f64> = (0..=panels)
            .map(|i| {
                if i == panels {
                    radius
                } else {
                    width * i as f64
                }
            })
            .collect();
        let spans: Vec<(f64, f64)> = breaks.windows(2).map(|w| (w[0], w[1])).collect();
        Self::from_panels(order, resolution, &spans)
    }

    pub fn with_resolution(order: Order, resolution: Resolution) -> Result<Self> {
        Self::new(
            order,
            resolution.radius,
            resolution.panels,
            resolution.nodes_per_panel,
        )
    }

    /// Rule covering a union of disjoint intervals, each split into panels no
    /// wider than `max_panel_width`.
    pub fn on_intervals(
        order: Order,
        intervals: &[(f64, f64)],
        max_panel_width: f64,
        nodes_per_panel: usize,
    ) -> Result<Self> {
        if !(max_panel_width.is_finite() && max_panel_width > 0.0) {
            return Err(Error::Domain {
                what: "panel width",
                value: max_panel_width,
            });
        }
        let mut spans = Vec::new();
        for &(lo, hi) in intervals {
            if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && hi >= lo) {
                return Err(Error::InvalidSet(format!("bad interval [{lo}, {hi}]")));
            }
            if hi == lo {
                continue;
            }
            let count = ((hi - lo) / max_panel_width).ceil().max(1.0) as usize;
            let width = (hi - lo) / count as f64;
            for i in 0..count {
                let a = lo + width * i as f64;
                let b = if i + 1 == count {
                    hi
                } else {
                    lo + width * (i + 1) as f64
                };
                spans.push((a, b));
            }
        }
        let radius = intervals.iter().map(|iv| iv.1).fold(0.0_f64, f64::max);
        let resolution = Resolution {
            radius,
            panels: spans.len(),
            nodes_per_panel,
        };
        Self::from_panels(order, resolution, &spans)
    }

    /// Rule on `intervals ∩ [0, R]` with this rule's panel width and node count.
    pub fn restricted_to(&self, intervals: &[(f64, f64)]) -> Result<Self> {
        let radius = self.resolution.radius;
        let clipped: Vec<(f64, f64)> = intervals
            .iter()
            .filter_map(|&(lo, hi)| {
                let lo = lo.max(0.0);
                let hi = hi.min(radius);
                (hi > lo).then_some((lo, hi))
            })
            .collect();
        let mut rule = Self::on_intervals(
            self.order,
            &clipped,
            self.resolution.panel_width(),
            self.resolution.nodes_per_panel,
        )?;
        rule.resolution.radius = radius;
        Ok(rule)
    }

    fn from_panels(order: Order, resolution: Resolution, spans: &[(f64, f64)]) -> Result<Self> {
        let n = resolution.nodes_per_panel;
        if n < 2 {
            return Err(Error::Domain {
                what: "nodes per panel",
                value: n as f64,
            });
        }
        let legendre = GaussJacobi::legendre(n)?;
        let expo = order.weight_exponent();
        let origin = GaussJacobi::new(n, 0.0, expo)?;

        let mut nodes = Vec::with_capacity(spans.len() * n);
        let mut weights = Vec::with_capacity(spans.len() * n);
        for &(lo, hi) in spans {
            let half = 0.5 * (hi - lo);
            if lo == 0.0 {
                // s = half (1 + x): s^{2γ+1} ds = half^{2γ+2} (1+x)^{2γ+1} dx
                let scale = half.powf(expo + 1.0);
                for (&x, &w) in origin.nodes.iter().zip(&origin.weights) {
                    nodes.push(half * (1.0 + x));
                    weights.push(scale * w);
                }
            } else {
                let mid = lo + half;
                for (&x, &w) in legendre.nodes.iter().zip(&legendre.weights) {
                    let s = mid + half * x;
                    nodes.push(s);
                    weights.push(half * w * s.powf(expo));
                }
            }
        }
        Ok(Self {
            order,
            resolution,
            nodes,
            weights,
        })
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn radius(&self) -> f64 {
        self.resolution.radius
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The nodes as a grid, so that signals sampled there integrate without
    /// interpolation.
    pub fn grid(&self) -> RadialGrid {
        RadialGrid {
            points: self.nodes.clone(),
            radius: self.resolution.radius,
        }
    }

    /// Samples `f` on the nodes, rejecting non-finite values.
    pub fn sample<F: RadialFunction + ?Sized>(&self, f: &F) -> Result<Vec<Complex64>> {
        let values = f.sample(&self.nodes);
        ensure_finite(&values, "integrand")?;
        Ok(values)
    }

    /// Σ wᵢ vᵢ for values already sampled on the nodes.
    pub fn sum(&self, values: &[Complex64]) -> Result<Complex64> {
        if values.len() != self.nodes.len() {
            return Err(Error::LengthMismatch {
                expected: self.nodes.len(),
                got: values.len(),
            });
        }
        Ok(self
            .weights
            .iter()
            .zip(values)
            .fold(Complex64::new(0.0, 0.0), |acc, (&w, &v)| acc + v * w))
    }

    /// Weighted p-norm of values sampled on the nodes. `p = ∞` gives the
    /// maximum over the nodes, a surrogate for the essential supremum.
    pub fn norm_of(&self, values: &[Complex64], p: f64) -> Result<f64> {
        check_exponent(p)?;
        if values.len() != self.nodes.len() {
            return Err(Error::LengthMismatch {
                expected: self.nodes.len(),
                got: values.len(),
            });
        }
        if p.is_infinite() {
            return Ok(values.iter().map(|v| v.norm()).fold(0.0, f64::max));
        }
        let total: f64 = self
            .weights
            .iter()
            .zip(values)
            .map(|(&w, v)| {
                let m = v.norm();
                if p == 1.0 {
                    w * m
                } else if p == 2.0 {
                    w * m * m
                } else {
                    w * m.powf(p)
                }
            })
            .sum();
        Ok(if p == 1.0 {
            total
        } else if p == 2.0 {
            total.sqrt()
        } else {
            total.powf(p.recip())
        })
    }
}

/// ∫₀^R f(s) s^{2γ+1} ds.
pub fn integrate<F: RadialFunction + ?Sized>(rule: &QuadratureRule, f: &F) -> Result<Complex64> {
    let values = rule.sample(f)?;
    rule.sum(&values)
}

/// ‖f‖_{γ,p} on the truncated domain.
pub fn weighted_norm<F: RadialFunction + ?Sized>(
    f: &F,
    rule: &QuadratureRule,
    p: f64,
) -> Result<f64> {
    check_exponent(p)?;
    let values = rule.sample(f)?;
    rule.norm_of(&values, p)
}

/// ⟨f, g⟩_γ = ∫ f(s) conj(g(s)) s^{2γ+1} ds.
pub fn inner_product<F, G>(rule: &QuadratureRule, f: &F, g: &G) -> Result<Complex64>
where
    F: RadialFunction + ?Sized,
    G: RadialFunction + ?Sized,
{
    let fv = rule.sample(f)?;
    let gv = rule.sample(g)?;
    let prod: Vec<Complex64> = fv.iter().zip(&gv).map(|(a, b)| a * b.conj()).collect();
    rule.sum(&prod)
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(format!(
            "p must lie in [1, inf], got {p}"
        )));
    }
    Ok(())
}

pub(crate) fn ensure_finite(values: &[Complex64], what: &'static str) -> Result<()> {
    if values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Complex samples on a [`RadialGrid`].
///
/// Off-grid values come from local barycentric interpolation through the
/// nearest [`INTERPOLATION_POINTS`] samples; beyond the truncation radius the
/// signal is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    grid: RadialGrid,
    values: Vec<Complex64>,
}

impl Signal {
    pub fn new(grid: RadialGrid, values: Vec<Complex64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        ensure_finite(&values, "signal")?;
        Ok(Self { grid, values })
    }

    /// Samples a function on `grid`.
    pub fn from_fn<F: RadialFunction + ?Sized>(grid: RadialGrid, f: &F) -> Result<Self> {
        let values = f.sample(grid.points());
        Self::new(grid, values)
    }

    pub fn zeros(grid: RadialGrid) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); grid.len()];
        Self { grid, values }
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    fn interpolate(&self, s: f64) -> Complex64 {
        let pts = self.grid.points();
        let n = pts.len();
        if n == 0 || s > self.grid.radius() || s < 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let idx = pts.partition_point(|&p| p < s);
        if idx < n && pts[idx] == s {
            return self.values[idx];
        }
        let m = INTERPOLATION_POINTS.min(n);
        let start = idx.saturating_sub(m / 2).min(n - m);
        let xs = &pts[start..start + m];
        let ys = &self.values[start..start + m];

        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for (j, &xj) in xs.iter().enumerate() {
            let mut w = 1.0;
            for (k, &xk) in xs.iter().enumerate() {
                if k != j {
                    w /= xj - xk;
                }
            }
            let c = w / (s - xj);
            num += ys[j] * c;
            den += c;
        }
        num / den
    }
}

impl RadialFunction for Signal {
    fn eval(&self, s: f64) -> Complex64 {
        self.interpolate(s)
    }

    fn sample(&self, points: &[f64]) -> Vec<Complex64> {
        if points == self.grid.points() {
            return self.values.clone();
        }
        points.iter().map(|&s| self.interpolate(s)).collect()
    }
}
