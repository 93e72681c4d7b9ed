//! Verification suites behind `qpfb verify`.

use clap::ValueEnum;
use num_complex::Complex64;
use qpfb::convolution::YOUNG_SLACK;
use qpfb::transform::SUP_BOUND_SLACK;
use qpfb::uncertainty::CONCENTRATION_TOLERANCE;
use qpfb::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::io::Num;

const PARSEVAL_TOLERANCE: f64 = 1e-5;
const TWO_PATH_TOLERANCE: f64 = 1e-9;
const ROUNDTRIP_TOLERANCE: f64 = 1e-4;
const KERNEL_MASS_TOLERANCE: f64 = 1e-8;
const SYMMETRY_TOLERANCE: f64 = 1e-9;
const CONTRACTION_SLACK: f64 = 1e-6;
const COMMUTATIVITY_TOLERANCE: f64 = 1e-7;
const HS_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Parseval,
    Roundtrip,
    Young,
    Translation,
    DonohoStark,
    All,
}

impl Suite {
    fn label(self) -> &'static str {
        match self {
            Suite::Parseval => "parseval",
            Suite::Roundtrip => "roundtrip",
            Suite::Young => "young",
            Suite::Translation => "translation",
            Suite::DonohoStark => "donoho-stark",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "|lhs - rhs| <= tolerance")]
    Close,
    #[serde(rename = "lhs <= rhs + tolerance")]
    AtMost,
    #[serde(rename = "lhs >= rhs - tolerance")]
    AtLeast,
}

impl Relation {
    fn holds(self, lhs: f64, rhs: f64, tol: f64) -> bool {
        match self {
            Relation::Close => (lhs - rhs).abs() <= tol,
            Relation::AtMost => lhs <= rhs + tol,
            Relation::AtLeast => lhs >= rhs - tol,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResolutionOut {
    pub radius: Num,
    pub panels: usize,
    pub nodes_per_panel: usize,
}

impl From<Resolution> for ResolutionOut {
    fn from(r: Resolution) -> Self {
        Self {
            radius: Num(r.radius),
            panels: r.panels,
            nodes_per_panel: r.nodes_per_panel,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: Num,
    pub rhs: Num,
    pub tolerance: Num,
    pub relation: Relation,
    /// every rule the numbers came from
    pub resolution: Vec<ResolutionOut>,
    pub pass: bool,
}

impl Check {
    fn new(
        name: impl Into<String>,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
        relation: Relation,
        rules: &[Resolution],
    ) -> Self {
        Self {
            name: name.into(),
            lhs: Num(lhs),
            rhs: Num(rhs),
            tolerance: Num(tolerance),
            relation,
            resolution: rules.iter().map(|&r| r.into()).collect(),
            pass: relation.holds(lhs, rhs, tolerance),
        }
    }

    /// Carries a verdict computed by the library instead of recomputing it.
    fn with_verdict(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ParamsOut {
    pub a: Num,
    pub b: Num,
    pub c: Num,
    pub d: Num,
    pub e: Num,
    pub gamma: Num,
}

impl From<&QpfbParams> for ParamsOut {
    fn from(p: &QpfbParams) -> Self {
        Self {
            a: Num(p.a()),
            b: Num(p.b()),
            c: Num(p.c()),
            d: Num(p.d()),
            e: Num(p.e()),
            gamma: Num(p.gamma()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: &'static str,
    pub params: ParamsOut,
    pub signal: String,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
    pub pass: bool,
}

fn max_diff(x: &[Complex64], y: &[Complex64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

struct Context<'a> {
    config: &'a RunConfig,
    params: QpfbParams,
    h: TestSignal,
    signal: QuadratureRule,
    band: QuadratureRule,
    out: RadialGrid,
}

fn parseval(cx: &Context) -> CliResult<Vec<Check>> {
    let (p, h, s, t) = (&cx.params, &cx.h, &cx.signal, &cx.band);
    let g = TestSignal::power_gaussian(1, 1.0);
    let both = [s.resolution(), t.resolution()];
    let rep = parseval_check(p, h, &g, s, t)?;

    let rl = riemann_lebesgue_check(p, h, s, &cx.out)?;
    let direct = forward(p, h, &cx.out, s)?;
    let via = forward_via_classical(p, h, &cx.out, s)?;
    let scaling = scaling_identity_check(p, h, 2.0, s, &cx.out)?;

    Ok(vec![
        Check::new(
            "parseval.plancherel",
            rep.norm_transform,
            rep.norm_signal,
            PARSEVAL_TOLERANCE * rep.norm_signal,
            Relation::Close,
            &both,
        ),
        Check::new(
            "parseval.inner_product",
            rep.inner_product_gap,
            0.0,
            PARSEVAL_TOLERANCE,
            Relation::Close,
            &both,
        ),
        Check::new(
            "parseval.sup_bound",
            rl.sup,
            rl.bound,
            rl.bound * SUP_BOUND_SLACK,
            Relation::AtMost,
            &[rl.resolution],
        )
        .with_verdict(rl.pass),
        Check::new(
            "parseval.two_path",
            max_diff(direct.values(), via.values()),
            0.0,
            TWO_PATH_TOLERANCE,
            Relation::Close,
            &[s.resolution()],
        ),
        Check::new(
            "parseval.scaling_k2",
            scaling.discrepancy,
            0.0,
            scaling.tolerance,
            Relation::Close,
            &[scaling.lhs_resolution, scaling.rhs_resolution],
        )
        .with_verdict(scaling.pass),
    ])
}

fn roundtrip(cx: &Context) -> CliResult<Vec<Check>> {
    let p = &cx.params;
    let scale = cx.config.roundtrip_band_scale;
    let band = cx.band.resolution();
    let wide = QuadratureRule::with_resolution(
        p.order(),
        Resolution {
            radius: band.radius * scale as f64,
            panels: band.panels * scale,
            nodes_per_panel: band.nodes_per_panel,
        },
    )?;
    let signals = [
        ("roundtrip.signal", cx.h),
        ("roundtrip.s2_gaussian", TestSignal::power_gaussian(2, 1.0)),
    ];
    signals
        .into_iter()
        .map(|(name, h)| {
            let spectrum = forward(p, &h, &wide.grid(), &cx.signal)?;
            let back = inverse(p, &spectrum, &cx.signal.grid(), &wide)?;
            let original = cx.signal.sample(&h)?;
            let diff: Vec<Complex64> = back
                .values()
                .iter()
                .zip(&original)
                .map(|(x, y)| x - y)
                .collect();
            let err = cx.signal.norm_of(&diff, 2.0)? / cx.signal.norm_of(&original, 2.0)?;
            Ok(Check::new(
                name,
                err,
                0.0,
                ROUNDTRIP_TOLERANCE,
                Relation::Close,
                &[cx.signal.resolution(), wide.resolution()],
            ))
        })
        .collect()
}

fn translation(cx: &Context) -> CliResult<Vec<Check>> {
    let (p, h, s) = (&cx.params, &cx.h, &cx.signal);
    let support = SupportRule::with_default_nodes(p.order())?;
    let res = [s.resolution()];
    let mut checks = vec![Check::new(
        "translation.kernel_mass",
        kernel_mass(p.order(), 1.3, 2.1, &support)?,
        1.0,
        KERNEL_MASS_TOLERANCE,
        Relation::Close,
        &res,
    )];

    let mut asym: f64 = 0.0;
    for (x, y) in [(0.4, 1.7), (1.1, 2.9), (2.5, 0.3)] {
        let xy = Translated::new(p, y, h, &support)?.eval(x);
        let yx = Translated::new(p, x, h, &support)?.eval(y);
        asym = asym.max((xy - yx).norm());
    }
    checks.push(Check::new(
        "translation.symmetry",
        asym,
        0.0,
        SYMMETRY_TOLERANCE,
        Relation::Close,
        &res,
    ));

    let shifted = Translated::new(p, 1.5, h, &support)?;
    let tv = s.sample(&shifted)?;
    let hv = s.sample(h)?;
    for (label, q) in [("p1", 1.0), ("p2", 2.0), ("pinf", f64::INFINITY)] {
        let rhs = s.norm_of(&hv, q)?;
        checks.push(Check::new(
            format!("translation.contraction_{label}"),
            s.norm_of(&tv, q)?,
            rhs,
            rhs * CONTRACTION_SLACK,
            Relation::AtMost,
            &res,
        ));
    }
    Ok(checks)
}

fn young(cx: &Context) -> CliResult<Vec<Check>> {
    let (p, s) = (&cx.params, &cx.signal);
    let support = SupportRule::with_default_nodes(p.order())?;
    let h = TestSignal::gaussian(0.5);
    let g = TestSignal::gaussian(1.0);
    let points = [0.3, 0.9, 1.7, 2.6, 4.0];
    let hg = convolve_at(p, &h, &g, &points, s, &support)?;
    let gh = convolve_at(p, &g, &h, &points, s, &support)?;
    let mut checks = vec![Check::new(
        "young.commutativity",
        max_diff(&hg, &gh),
        0.0,
        COMMUTATIVITY_TOLERANCE,
        Relation::Close,
        &[s.resolution()],
    )];
    for (label, a, b) in [
        ("p1_q1", 1.0, 1.0),
        ("p1_q2", 1.0, 2.0),
        ("p4/3_q4/3", 4.0 / 3.0, 4.0 / 3.0),
    ] {
        let rep = young_check(p, &h, &g, a, b, s, &support)?;
        checks.push(
            Check::new(
                format!("young.{label}"),
                rep.lhs,
                rep.rhs,
                rep.rhs * YOUNG_SLACK,
                Relation::AtMost,
                &[rep.resolution],
            )
            .with_verdict(rep.pass),
        );
    }
    Ok(checks)
}

fn donoho_stark(cx: &Context) -> CliResult<Vec<Check>> {
    let p = &cx.params;
    let rules = RulePair::new(cx.signal.clone(), cx.band.clone())?;
    let both = [cx.signal.resolution(), cx.band.resolution()];
    let m = MeasurableSet::interval(0.0, 2.0)?;
    let n = MeasurableSet::interval(0.0, 2.0)?;
    let ds = donoho_stark_check(p, &cx.h, &m, &n, &rules)?;
    let mut checks = vec![
        Check::new(
            "donoho-stark.l2",
            ds.observed,
            ds.bound,
            CONCENTRATION_TOLERANCE,
            Relation::AtLeast,
            &both,
        )
        .with_verdict(ds.pass),
        Check::new(
            "donoho-stark.hs_bound",
            hs_norm_estimate(p, &m, &n, &rules)?,
            hs_bound(p, &m, &n),
            HS_TOLERANCE,
            Relation::AtMost,
            &both,
        ),
    ];
    for (label, q) in [("p1.25", 1.25), ("p1.5", 1.5), ("p2", 2.0)] {
        let rep = lp_concentration_check(p, &cx.h, &m, &n, q, &rules)?;
        checks.push(
            Check::new(
                format!("donoho-stark.lp_{label}"),
                rep.lhs,
                rep.rhs,
                CONCENTRATION_TOLERANCE,
                Relation::AtMost,
                &both,
            )
            .with_verdict(rep.pass),
        );
    }
    Ok(checks)
}

type SuiteFn = fn(&Context) -> CliResult<Vec<Check>>;

pub fn run(suite: Suite, config: &RunConfig) -> CliResult<Report> {
    let cx = Context {
        config,
        params: config.params,
        h: config.signal.unwrap_or(TestSignal::gaussian(0.5)),
        signal: config.signal_rule()?,
        band: config.band_rule()?,
        out: config.output_grid.grid()?,
    };
    let suites: &[SuiteFn] = match suite {
        Suite::Parseval => &[parseval],
        Suite::Roundtrip => &[roundtrip],
        Suite::Young => &[young],
        Suite::Translation => &[translation],
        Suite::DonohoStark => &[donoho_stark],
        Suite::All => &[parseval, roundtrip, translation, young, donoho_stark],
    };
    let mut checks = Vec::new();
    for run in suites {
        checks.extend(run(&cx)?);
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    let failed = checks.len() - passed;
    Ok(Report {
        suite: suite.label(),
        params: (&cx.params).into(),
        signal: cx.h.name(),
        checks,
        passed,
        failed,
        pass: failed == 0,
    })
}
