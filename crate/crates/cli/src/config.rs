//! Run configuration: defaults, then the JSON file, then command-line flags.

use std::path::Path;

use qpfb::{MeasurableSet, QpfbParams, QuadratureRule, RadialGrid, Resolution, TestSignal};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const DEFAULT_PARAMS: [f64; 6] = [0.5, 1.0, -0.3, 0.2, 0.1, 0.0];
pub const DEFAULT_OUTPUT_POINTS: usize = 121;
pub const DEFAULT_ROUNDTRIP_BAND_SCALE: usize = 4;
const DEFAULT_SWEEP_RADII: [f64; 10] = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0];

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialParams {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub c: Option<f64>,
    pub d: Option<f64>,
    pub e: Option<f64>,
    pub gamma: Option<f64>,
}

impl PartialParams {
    /// Parses `a=0.5,b=1,gamma=0`; keys left out stay unset.
    pub fn parse(spec: &str) -> CliResult<Self> {
        let mut out = PartialParams::default();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("--param entry `{item}` is not key=value"))
            })?;
            let value: f64 = value.trim().parse().map_err(|_| {
                CliError::Usage(format!("--param {key}: `{value}` is not a number"))
            })?;
            let slot = match key.trim() {
                "a" => &mut out.a,
                "b" => &mut out.b,
                "c" => &mut out.c,
                "d" => &mut out.d,
                "e" => &mut out.e,
                "gamma" | "γ" => &mut out.gamma,
                other => {
                    return Err(CliError::Usage(format!(
                        "--param: unknown key `{other}` (expected a, b, c, d, e, gamma)"
                    )))
                }
            };
            *slot = Some(value);
        }
        Ok(out)
    }

    fn overlay(&mut self, top: &PartialParams) {
        for (slot, value) in [
            (&mut self.a, top.a),
            (&mut self.b, top.b),
            (&mut self.c, top.c),
            (&mut self.d, top.d),
            (&mut self.e, top.e),
            (&mut self.gamma, top.gamma),
        ] {
            if value.is_some() {
                *slot = value;
            }
        }
    }

    fn resolve(&self) -> CliResult<QpfbParams> {
        let [a, b, c, d, e, g] = DEFAULT_PARAMS;
        Ok(QpfbParams::new(
            self.a.unwrap_or(a),
            self.b.unwrap_or(b),
            self.c.unwrap_or(c),
            self.d.unwrap_or(d),
            self.e.unwrap_or(e),
            self.gamma.unwrap_or(g),
        )?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn grid(&self) -> CliResult<RadialGrid> {
        Ok(RadialGrid::uniform(self.start, self.end, self.count)?)
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandSpec {
    pub truncation: Option<f64>,
    pub panels: Option<usize>,
    pub nodes: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub m_radii: Option<Vec<f64>>,
    pub n_radii: Option<Vec<f64>>,
    pub m_sets: Option<Vec<Vec<(f64, f64)>>>,
    pub n_sets: Option<Vec<Vec<(f64, f64)>>>,
    pub params: Option<Vec<QpfbParams>>,
    pub signal: Option<TestSignal>,
}

/// The JSON config document. Every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub params: Option<PartialParams>,
    pub truncation: Option<f64>,
    pub panels: Option<usize>,
    pub nodes: Option<usize>,
    /// transform-domain rule; defaults to the signal rule
    pub band: Option<BandSpec>,
    pub output_grid: Option<GridSpec>,
    pub signal: Option<TestSignal>,
    /// the round-trip checks integrate the spectrum over this many times the band radius
    pub roundtrip_band_scale: Option<usize>,
    pub sweep: Option<SweepSpec>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            line: e.line() as u64,
            message: e.to_string(),
        })
    }
}

/// Values given on the command line; they win over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub params: Option<PartialParams>,
    pub truncation: Option<f64>,
    pub panels: Option<usize>,
    pub nodes: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: QpfbParams,
    pub signal_resolution: Resolution,
    pub band_resolution: Resolution,
    pub output_grid: GridSpec,
    pub signal: Option<TestSignal>,
    pub roundtrip_band_scale: usize,
    pub sweep: SweepSpec,
}

impl RunConfig {
    pub fn resolve(file: FileConfig, flags: Overrides) -> CliResult<Self> {
        let mut partial = file.params.unwrap_or_default();
        if let Some(top) = &flags.params {
            partial.overlay(top);
        }
        let params = partial.resolve()?;

        let defaults = Resolution::default();
        let signal_resolution = Resolution {
            radius: flags
                .truncation
                .or(file.truncation)
                .unwrap_or(defaults.radius),
            panels: flags.panels.or(file.panels).unwrap_or(defaults.panels),
            nodes_per_panel: flags
                .nodes
                .or(file.nodes)
                .unwrap_or(defaults.nodes_per_panel),
        };
        let band = file.band.unwrap_or_default();
        let band_resolution = Resolution {
            radius: band.truncation.unwrap_or(signal_resolution.radius),
            panels: band.panels.unwrap_or(signal_resolution.panels),
            nodes_per_panel: band.nodes.unwrap_or(signal_resolution.nodes_per_panel),
        };
        // build both rules once so that bad resolutions fail at parse time
        QuadratureRule::with_resolution(params.order(), signal_resolution)?;
        QuadratureRule::with_resolution(params.order(), band_resolution)?;

        let output_grid = file.output_grid.unwrap_or(GridSpec {
            start: 0.0,
            end: signal_resolution.radius,
            count: DEFAULT_OUTPUT_POINTS,
        });
        output_grid.grid()?;

        let roundtrip_band_scale = file
            .roundtrip_band_scale
            .unwrap_or(DEFAULT_ROUNDTRIP_BAND_SCALE);
        if roundtrip_band_scale == 0 {
            return Err(CliError::Config(
                "roundtrip_band_scale must be at least 1".into(),
            ));
        }

        Ok(RunConfig {
            params,
            signal_resolution,
            band_resolution,
            output_grid,
            signal: file.signal,
            roundtrip_band_scale,
            sweep: file.sweep.unwrap_or_default(),
        })
    }

    pub fn signal_rule(&self) -> CliResult<QuadratureRule> {
        Ok(QuadratureRule::with_resolution(
            self.params.order(),
            self.signal_resolution,
        )?)
    }

    pub fn band_rule(&self) -> CliResult<QuadratureRule> {
        Ok(QuadratureRule::with_resolution(
            self.params.order(),
            self.band_resolution,
        )?)
    }
}

/// One row group of a sweep: the parameter sets and the M, N families.
pub struct SweepPlan {
    pub params: Vec<QpfbParams>,
    pub m: Vec<MeasurableSet>,
    pub n: Vec<MeasurableSet>,
    pub signal: TestSignal,
}

fn sets(
    name: &str,
    radii: &Option<Vec<f64>>,
    explicit: &Option<Vec<Vec<(f64, f64)>>>,
) -> CliResult<Vec<MeasurableSet>> {
    match (radii, explicit) {
        (Some(_), Some(_)) => Err(CliError::Config(format!(
            "sweep: give either {name}_radii or {name}_sets, not both"
        ))),
        (_, Some(list)) => list
            .iter()
            .map(|s| Ok(MeasurableSet::new(s.clone())?))
            .collect(),
        (radii, None) => radii
            .as_deref()
            .unwrap_or(&DEFAULT_SWEEP_RADII)
            .iter()
            .map(|&r| Ok(MeasurableSet::interval(0.0, r)?))
            .collect(),
    }
}

impl SweepPlan {
    pub fn new(config: &RunConfig) -> CliResult<Self> {
        let spec = &config.sweep;
        let m = sets("m", &spec.m_radii, &spec.m_sets)?;
        let n = sets("n", &spec.n_radii, &spec.n_sets)?;
        if m.is_empty() || n.is_empty() {
            return Err(CliError::Config("sweep: empty set family".into()));
        }
        let params = spec.params.clone().unwrap_or_else(|| vec![config.params]);
        if params.is_empty() {
            return Err(CliError::Config("sweep: empty params list".into()));
        }
        let signal = spec
            .signal
            .or(config.signal)
            .unwrap_or(TestSignal::gaussian(0.5));
        Ok(SweepPlan {
            params,
            m,
            n,
            signal,
        })
    }
}
