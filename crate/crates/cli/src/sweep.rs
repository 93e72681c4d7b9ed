//! Concentration sweeps behind `qpfb sweep`.

use std::io::Write;

use qpfb::{
    donoho_stark_check, ConcentrationReport, MeasurableSet, QpfbParams, QuadratureRule, RulePair,
};
use rayon::prelude::*;

use crate::config::{RunConfig, SweepPlan};
use crate::error::CliResult;
use crate::io::fmt17;

pub struct Row {
    pub params: QpfbParams,
    pub m: MeasurableSet,
    pub n: MeasurableSet,
    pub report: ConcentrationReport,
}

const HEADER: [&str; 25] = [
    "a",
    "b",
    "c",
    "d",
    "e",
    "gamma",
    "m",
    "n",
    "eps_m",
    "eps_n",
    "measure_m",
    "measure_n",
    "lebesgue_m",
    "lebesgue_n",
    "bound",
    "observed",
    "slack",
    "vacuous",
    "pass",
    "signal_radius",
    "signal_panels",
    "signal_nodes",
    "band_radius",
    "band_panels",
    "band_nodes",
];

fn set_label(set: &MeasurableSet) -> String {
    set.intervals()
        .iter()
        .map(|(lo, hi)| format!("[{lo},{hi}]"))
        .collect::<Vec<_>>()
        .join(";")
}

/// Runs every (params, M, N) instance; rows come back in plan order.
pub fn run(config: &RunConfig, plan: &SweepPlan) -> CliResult<Vec<Row>> {
    let mut jobs = Vec::new();
    for params in &plan.params {
        let rules = RulePair::new(
            QuadratureRule::with_resolution(params.order(), config.signal_resolution)?,
            QuadratureRule::with_resolution(params.order(), config.band_resolution)?,
        )?;
        for m in &plan.m {
            for n in &plan.n {
                jobs.push((*params, m.clone(), n.clone(), rules.clone()));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(params, m, n, rules)| {
            let report = donoho_stark_check(&params, &plan.signal, &m, &n, &rules)?;
            Ok(Row {
                params,
                m,
                n,
                report,
            })
        })
        .collect()
}

pub fn write(out: &mut dyn Write, rows: &[Row]) -> std::io::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(HEADER)?;
    for row in rows {
        let (p, r) = (&row.params, &row.report);
        let (sr, br) = (r.signal_resolution, r.transform_resolution);
        let mut record: Vec<String> = [p.a(), p.b(), p.c(), p.d(), p.e(), p.gamma()]
            .into_iter()
            .map(fmt17)
            .collect();
        record.push(set_label(&row.m));
        record.push(set_label(&row.n));
        record.extend(
            [
                r.eps_m,
                r.eps_n,
                r.measure_m,
                r.measure_n,
                r.lebesgue_m,
                r.lebesgue_n,
                r.bound,
                r.observed,
                r.slack(),
            ]
            .into_iter()
            .map(fmt17),
        );
        record.push(r.vacuous.to_string());
        record.push(r.pass.to_string());
        for res in [sr, br] {
            record.push(fmt17(res.radius));
            record.push(res.panels.to_string());
            record.push(res.nodes_per_panel.to_string());
        }
        writer.write_record(&record)?;
    }
    writer.flush()
}
