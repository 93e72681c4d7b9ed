//! Time and band limiting, Hilbert–Schmidt estimates and concentration
//! uncertainty checks.
//!
//! Set sizes |M| are weighted measures ∫_M s^{2γ+1} ds throughout. Norms
//! restricted to a set or its complement are integrated with rules cut at the
//! set's endpoints, so indicators are integrated without smoothing error.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{QuadratureRule, RadialFunction, RadialGrid, Resolution, Signal};
use crate::specfun::{c_gamma, Order};
use crate::transform::{transform_samples, QpfbParams};

/// Absolute tolerance of the Donoho–Stark, Hilbert–Schmidt and L^p checks.
pub const CONCENTRATION_TOLERANCE: f64 = 1e-8;

/// A finite union of disjoint intervals in [0, ∞).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct MeasurableSet {
    intervals: Vec<(f64, f64)>,
}

impl TryFrom<Vec<(f64, f64)>> for MeasurableSet {
    type Error = Error;

    fn try_from(v: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<MeasurableSet> for Vec<(f64, f64)> {
    fn from(set: MeasurableSet) -> Self {
        set.intervals
    }
}

impl MeasurableSet {
    /// Intervals must be finite, non-degenerate, ordered and non-overlapping.
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        let mut prev_hi = 0.0;
        for (i, &(lo, hi)) in intervals.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(Error::InvalidSet(format!("interval {i} is not finite")));
            }
            if lo < 0.0 {
                return Err(Error::InvalidSet(format!(
                    "interval {i} starts below 0: {lo}"
                )));
            }
            if lo >= hi {
                return Err(Error::InvalidSet(format!(
                    "interval {i} is empty: [{lo}, {hi}]"
                )));
            }
            if i > 0 && lo < prev_hi {
                return Err(Error::InvalidSet(format!(
                    "interval {i} overlaps or precedes the previous one"
                )));
            }
            prev_hi = hi;
        }
        Ok(Self { intervals })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![(lo, hi)])
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn sup(&self) -> f64 {
        self.intervals.last().map_or(0.0, |iv| iv.1)
    }

    pub fn contains(&self, s: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| s >= lo && s <= hi)
    }

    /// [0, R] minus the set.
    pub fn complement_within(&self, radius: f64) -> Self {
        let mut out = Vec::new();
        let mut cursor = 0.0;
        for &(lo, hi) in &self.intervals {
            if lo >= radius {
                break;
            }
            if lo > cursor {
                out.push((cursor, lo));
            }
            cursor = hi;
        }
        if cursor < radius {
            out.push((cursor, radius));
        }
        Self { intervals: out }
    }

    /// ∫_M s^{2γ+1} ds.
    pub fn weighted_measure(&self, order: Order) -> f64 {
        let e = order.weight_exponent() + 1.0;
        self.intervals
            .iter()
            .map(|&(lo, hi)| (hi.powf(e) - lo.powf(e)) / e)
            .sum()
    }

    /// Plain length of the set.
    pub fn lebesgue_measure(&self) -> f64 {
        self.intervals.iter().map(|&(lo, hi)| hi - lo).sum()
    }

    fn check_within(&self, rule: &QuadratureRule, role: &str) -> Result<()> {
        if self.sup() > rule.radius() {
            return Err(Error::InvalidSet(format!(
                "{role} set reaches {} beyond the truncation radius {}",
                self.sup(),
                rule.radius()
            )));
        }
        Ok(())
    }
}

/// ∫_M s^{2γ+1} ds.
pub fn weighted_measure(set: &MeasurableSet, order: Order) -> f64 {
    set.weighted_measure(order)
}

/// Quadrature rules for the signal variable s and the transform variable t.
#[derive(Debug, Clone, PartialEq)]
pub struct RulePair {
    pub signal: QuadratureRule,
    pub transform: QuadratureRule,
}

impl RulePair {
    pub fn new(signal: QuadratureRule, transform: QuadratureRule) -> Result<Self> {
        if signal.order() != transform.order() {
            return Err(Error::OrderMismatch {
                rule: transform.order().value(),
                params: signal.order().value(),
            });
        }
        Ok(Self { signal, transform })
    }

    /// The same rule in both variables.
    pub fn symmetric(rule: QuadratureRule) -> Self {
        Self {
            transform: rule.clone(),
            signal: rule,
        }
    }

    pub fn order(&self) -> Order {
        self.signal.order()
    }

    fn check(&self, params: &QpfbParams) -> Result<()> {
        if params.order() != self.order() {
            return Err(Error::OrderMismatch {
                rule: self.order().value(),
                params: params.gamma(),
            });
        }
        Ok(())
    }
}

/// χ_M h sampled on `grid`.
pub fn time_limit<H: RadialFunction + ?Sized>(
    h: &H,
    set: &MeasurableSet,
    grid: &RadialGrid,
) -> Result<Signal> {
    let values = grid
        .points()
        .iter()
        .map(|&s| {
            if set.contains(s) {
                h.eval(s)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Signal::new(grid.clone(), values)
}

/// Q_N h = B^{-1}[χ_N B[h]] sampled on `grid`.
pub fn band_limit<H: RadialFunction + ?Sized>(
    params: &QpfbParams,
    h: &H,
    set: &MeasurableSet,
    rules: &RulePair,
    grid: &RadialGrid,
) -> Result<Signal> {
    rules.check(params)?;
    set.check_within(&rules.transform, "band")?;
    let hs = rules.signal.sample(h)?;
    let band = rules.transform.restricted_to(set.intervals())?;
    let spectrum = transform_samples(params, &hs, &rules.signal, band.nodes());
    let values = transform_samples(&params.inverse(), &spectrum, &band, grid.points());
    Signal::new(grid.clone(), values)
}

/// p-norms of a function inside and outside a set, on rules cut at the set's
/// endpoints.
fn split_norms<H: RadialFunction + ?Sized>(
    h: &H,
    set: &MeasurableSet,
    rule: &QuadratureRule,
    p: f64,
) -> Result<(f64, f64)> {
    let inside = rule.restricted_to(set.intervals())?;
    let outside = rule.restricted_to(set.complement_within(rule.radius()).intervals())?;
    let inner = inside.norm_of(&inside.sample(h)?, p)?;
    let outer = outside.norm_of(&outside.sample(h)?, p)?;
    Ok((inner, outer))
}

fn combine(inner: f64, outer: f64, p: f64) -> f64 {
    if p.is_infinite() {
        inner.max(outer)
    } else {
        (inner.powf(p) + outer.powf(p)).powf(1.0 / p)
    }
}

/// Spectrum B[h] evaluated lazily from samples of h on the signal rule.
struct Spectrum<'a> {
    params: &'a QpfbParams,
    samples: Vec<Complex64>,
    rule: &'a QuadratureRule,
}

impl<'a> Spectrum<'a> {
    fn new<H: RadialFunction + ?Sized>(
        params: &'a QpfbParams,
        h: &H,
        rule: &'a QuadratureRule,
    ) -> Result<Self> {
        Ok(Self {
            params,
            samples: rule.sample(h)?,
            rule,
        })
    }

    /// p-norms of B[h] inside and outside `set` on `rule`.
    fn split_norms(
        &self,
        set: &MeasurableSet,
        rule: &QuadratureRule,
        p: f64,
    ) -> Result<(f64, f64)> {
        let inside = rule.restricted_to(set.intervals())?;
        let outside = rule.restricted_to(set.complement_within(rule.radius()).intervals())?;
        let inner_vals = transform_samples(self.params, &self.samples, self.rule, inside.nodes());
        let outer_vals = transform_samples(self.params, &self.samples, self.rule, outside.nodes());
        Ok((
            inside.norm_of(&inner_vals, p)?,
            outside.norm_of(&outer_vals, p)?,
        ))
    }
}

/// ε values of a signal for the sets M and N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Concentrations {
    /// ‖h - χ_M h‖_{γ,2}
    pub eps_m: f64,
    /// ‖B[h] - χ_N B[h]‖_{γ,2}
    pub eps_n: f64,
    /// ‖h‖_{γ,2}
    pub norm: f64,
}

/// Unnormalized ε_M and ε_N in L²; divide by `norm` for the unit-norm signal.
pub fn epsilon_concentrations<H: RadialFunction + ?Sized>(
    params: &QpfbParams,
    h: &H,
    m: &MeasurableSet,
    n: &MeasurableSet,
    rules: &RulePair,
) -> Result<Concentrations> {
    rules.check(params)?;
    m.check_within(&rules.signal, "time")?;
    n.check_within(&rules.transform, "band")?;
    let (inner, eps_m) = split_norms(h, m, &rules.signal, 2.0)?;
    let norm = combine(inner, eps_m, 2.0);
    if norm == 0.0 {
        return Err(Error::ZeroSignal);
    }
    let spectrum = Spectrum::new(params, h, &rules.signal)?;
    let (_, eps_n) = spectrum.split_norms(n, &rules.transform, 2.0)?;
    Ok(Concentrations { eps_m, eps_n, norm })
}

/// Outcome of |M|_γ |N|_γ ≥ (|b|^{2γ+2}/c_γ²)(1 - ε_M - ε_N)² for the
/// normalized signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub eps_m: f64,
    pub eps_n: f64,
    pub measure_m: f64,
    pub measure_n: f64,
    pub lebesgue_m: f64,
    pub lebesgue_n: f64,
    pub bound: f64,
    pub observed: f64,
    /// ε_M + ε_N ≥ 1: the bound says nothing
    pub vacuous: bool,
    pub pass: bool,
    /// ‖h‖_{γ,2} before normalization
    pub norm_factor: f64,
    pub signal_resolution: Resolution,
    pub transform_resolution: Resolution,
}

impl ConcentrationReport {
    pub fn slack(&self) -> f64 {
        self.observed - self.bound
    }
}

pub fn donoho_stark_check<H: RadialFunction + ?Sized>(
    params: &QpfbParams,
    h: &H,
    m: &MeasurableSet,
    n: &MeasurableSet,
    rules: &RulePair,
) -> Result<ConcentrationReport> {
    let conc = epsilon_concentrations(params, h, m, n, rules)?;
    let eps_m = conc.eps_m / conc.norm;
    let eps_n = conc.eps_n / conc.norm;
    let order = params.order();
    let g = order.value();
    let cg = c_gamma(order);
    let measure_m = m.weighted_measure(order);
    let measure_n = n.weighted_measure(order);
    let deficit = 1.0 - eps_m - eps_n;
    let vacuous = deficit <= 0.0;
    let bound = params.b().abs().powf(2.0 * (g + 1.0)) / (cg * cg) * deficit * deficit;
    let observed = measure_m * measure_n;
    Ok(ConcentrationReport {
        eps_m,
        eps_n,
        measure_m,
        measure_n,
        lebesgue_m: m.lebesgue_measure(),
        lebesgue_n: n.lebesgue_measure(),
        bound,
        observed,
        vacuous,
        pass: vacuous || observed >= bound - CONCENTRATION_TOLERANCE,
        norm_factor: conc.norm,
        signal_resolution: rules.signal.resolution(),
        transform_resolution: rules.transform.resolution(),
    })
}

/// √( c_γ²/|b|^{2γ+2} ∬_{M×N} |j_γ(st/b)|² s^{2γ+1} t^{2γ+1} ds dt ), the
/// Hilbert–Schmidt norm of P_M Q_N.
pub fn hs_norm_estimate(
    params: &QpfbParams,
    m: &MeasurableSet,
    n: &MeasurableSet,
    rules: &RulePair,
) -> Result<f64> {
    rules.check(params)?;
    m.check_within(&rules.signal, "time")?;
    n.check_within(&rules.transform, "band")?;
    let sm = rules.signal.restricted_to(m.intervals())?;
    let tn = rules.transform.restricted_to(n.intervals())?;
    let order = params.order();
    let b = params.b();
    let rows: Vec<f64> = sm
        .nodes()
        .par_iter()
        .zip(sm.weights())
        .map(|(&s, &ws)| {
            let inner: f64 = tn
                .nodes()
                .iter()
                .zip(tn.weights())
                .map(|(&t, &wt)| {
                    let j = order.j(s * t / b);
                    wt * j * j
                })
                .sum();
            ws * inner
        })
        .collect();
    let total: f64 = rows.iter().sum();
    let k = params.sup_bound_constant();
    Ok(k * total.sqrt())
}

/// (c_γ/|b|^{γ+1}) √(|M|_γ |N|_γ).
pub fn hs_bound(params: &QpfbParams, m: &MeasurableSet, n: &MeasurableSet) -> f64 {
    let order = params.order();
    params.sup_bound_constant() * (m.weighted_measure(order) * n.weighted_measure(order)).sqrt()
}

/// Both sides of (1-ε_M)(1-ε_N)‖B[h]‖_{γ,q} ≤ (c_γ/|b|^{γ+1}) |M|^{1/p} |N|^{1/q} ‖h‖_{γ,q}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LpConcentrationReport {
    pub p: f64,
    pub q: f64,
    /// ‖h - χ_M h‖_{γ,1} / ‖h‖_{γ,1}
    pub eps_m: f64,
    /// ‖B[h] - χ_N B[h]‖_{γ,q} / ‖B[h]‖_{γ,q}
    pub eps_n: f64,
    pub measure_m: f64,
    pub measure_n: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
    pub signal_resolution: Resolution,
    pub transform_resolution: Resolution,
}

pub fn lp_concentration_check<H: RadialFunction + ?Sized>(
    params: &QpfbParams,
    h: &H,
    m: &MeasurableSet,
    n: &MeasurableSet,
    p: f64,
    rules: &RulePair,
) -> Result<LpConcentrationReport> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::InvalidExponent(format!(
            "p must lie in (1, 2], got {p}"
        )));
    }
    rules.check(params)?;
    m.check_within(&rules.signal, "time")?;
    n.check_within(&rules.transform, "band")?;
    let q = p / (p - 1.0);

    let (in_m, out_m) = split_norms(h, m, &rules.signal, 1.0)?;
    let l1 = in_m + out_m;
    if l1 == 0.0 {
        return Err(Error::ZeroSignal);
    }
    let spectrum = Spectrum::new(params, h, &rules.signal)?;
    let (in_n, out_n) = spectrum.split_norms(n, &rules.transform, q)?;
    let spectrum_norm = combine(in_n, out_n, q);
    let eps_m = out_m / l1;
    let eps_n = if spectrum_norm == 0.0 {
        0.0
    } else {
        out_n / spectrum_norm
    };
    let (hq_in, hq_out) = split_norms(h, m, &rules.signal, q)?;
    let hq = combine(hq_in, hq_out, q);

    let order = params.order();
    let measure_m = m.weighted_measure(order);
    let measure_n = n.weighted_measure(order);
    let lhs = (1.0 - eps_m) * (1.0 - eps_n) * spectrum_norm;
    let rhs = params.sup_bound_constant() * measure_m.powf(1.0 / p) * measure_n.powf(1.0 / q) * hq;
    Ok(LpConcentrationReport {
        p,
        q,
        eps_m,
        eps_n,
        measure_m,
        measure_n,
        lhs,
        rhs,
        pass: lhs <= rhs + CONCENTRATION_TOLERANCE,
        signal_resolution: rules.signal.resolution(),
        transform_resolution: rules.transform.resolution(),
    })
}
