//! CSV reports: the per-design summary row, per-target coverage, coverage
//! curves and the baseline comparison summary.

use std::io;

use serde::Serialize;

use satfuzz_core::{CircuitGraph, CoverageReport, CurvePoint, GenReport, TargetSpec};

fn fixed(x: f64) -> String {
    format!("{x:.2}")
}

/// Column order: design, gates, nodes, inputs, %targets, patterns, time,
/// state coverage, site coverage, D_max.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub design: String,
    pub gates: usize,
    pub nodes: usize,
    pub inputs: usize,
    pub pct_targets: String,
    pub patterns: usize,
    /// Seconds; empty unless timing was requested.
    pub time: Option<String>,
    pub state_coverage: String,
    pub site_coverage: String,
    pub d_max: usize,
}

impl TableRow {
    pub fn new(
        design: &str,
        graph: &CircuitGraph,
        spec: &TargetSpec,
        gen: &GenReport,
        coverage: &CoverageReport,
        seconds: Option<f64>,
    ) -> Self {
        TableRow {
            design: design.to_string(),
            gates: graph.gate_count(),
            nodes: graph.node_count(),
            inputs: graph.input_count(),
            pct_targets: fixed(100.0 * spec.len() as f64 / graph.node_count().max(1) as f64),
            patterns: gen.patterns.len(),
            time: seconds.map(|s| format!("{s:.4}")),
            state_coverage: fixed(coverage.state_coverage_pct),
            site_coverage: fixed(coverage.site_coverage_pct),
            d_max: gen.observed_d_max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetRow {
    pub node: String,
    pub desired: u8,
    pub reached: u8,
    pub saw_0: u8,
    pub saw_1: u8,
    /// 1-based number of the first pattern that reached the desired value.
    pub first_reach: Option<usize>,
}

pub fn target_rows(graph: &CircuitGraph, coverage: &CoverageReport) -> Vec<TargetRow> {
    coverage
        .per_target
        .iter()
        .map(|t| TargetRow {
            node: graph.node(t.node).name.clone(),
            desired: t.desired as u8,
            reached: t.reached_state as u8,
            saw_0: t.saw_0 as u8,
            saw_1: t.saw_1 as u8,
            first_reach: t.first_reach_index.map(|i| i + 1),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRow {
    pub method: String,
    pub trial: usize,
    pub patterns: usize,
    pub state_pct: String,
    pub site_pct: String,
}

pub fn curve_rows(method: &str, trial: usize, curve: &[CurvePoint]) -> Vec<CurveRow> {
    curve
        .iter()
        .map(|p| CurveRow {
            method: method.to_string(),
            trial,
            patterns: p.patterns,
            state_pct: fixed(p.state_pct),
            site_pct: fixed(p.site_pct),
        })
        .collect()
}

/// One method's result over its trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub method: String,
    pub trials: usize,
    pub patterns: usize,
    pub state_mean: String,
    pub state_min: String,
    pub state_max: String,
    pub site_mean: String,
    pub site_min: String,
    pub site_max: String,
    /// Mean number of patterns until every target had reached its state;
    /// a trial that never gets there counts as `patterns + 1`.
    pub full_state_at_mean: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub state_pct: f64,
    pub site_pct: f64,
    pub patterns: usize,
    /// 1-based pattern count at full state coverage.
    pub full_state_at: Option<usize>,
}

impl TrialOutcome {
    pub fn from_report(report: &CoverageReport) -> Self {
        TrialOutcome {
            state_pct: report.state_coverage_pct,
            site_pct: report.site_coverage_pct,
            patterns: report.patterns_applied,
            full_state_at: report.full_state_index().map(|i| i + 1),
        }
    }

    /// Full-state pattern count, `budget + 1` when never reached.
    pub fn full_state_or(&self, budget: usize) -> usize {
        self.full_state_at.unwrap_or(budget + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregate {
    pub state_mean: f64,
    pub state_min: f64,
    pub state_max: f64,
    pub site_mean: f64,
    pub site_min: f64,
    pub site_max: f64,
    pub full_state_at_mean: f64,
}

pub fn aggregate(trials: &[TrialOutcome], budget: usize) -> Aggregate {
    let n = trials.len().max(1) as f64;
    let fold = |f: fn(&TrialOutcome) -> f64| {
        let vals: Vec<f64> = trials.iter().map(f).collect();
        let mean = vals.iter().sum::<f64>() / n;
        let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if vals.is_empty() {
            (0.0, 0.0, 0.0)
        } else {
            (mean, min, max)
        }
    };
    let (state_mean, state_min, state_max) = fold(|t| t.state_pct);
    let (site_mean, site_min, site_max) = fold(|t| t.site_pct);
    let full_state_at_mean = trials.iter().map(|t| t.full_state_or(budget) as f64).sum::<f64>() / n;
    Aggregate { state_mean, state_min, state_max, site_mean, site_min, site_max, full_state_at_mean }
}

impl SummaryRow {
    pub fn new(method: &str, trials: &[TrialOutcome], budget: usize) -> Self {
        let a = aggregate(trials, budget);
        SummaryRow {
            method: method.to_string(),
            trials: trials.len(),
            patterns: trials.iter().map(|t| t.patterns).max().unwrap_or(0),
            state_mean: fixed(a.state_mean),
            state_min: fixed(a.state_min),
            state_max: fixed(a.state_max),
            site_mean: fixed(a.site_mean),
            site_min: fixed(a.site_min),
            site_max: fixed(a.site_max),
            full_state_at_mean: fixed(a.full_state_at_mean),
        }
    }
}

pub fn write_csv<T: Serialize>(out: impl io::Write, rows: &[T]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(io::Error::other)?;
    }
    w.flush()
}

pub fn csv_string<T: Serialize>(rows: &[T]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregate_counts_misses_as_budget_plus_one() {
        let t = |s, at| TrialOutcome { state_pct: s, site_pct: 0.0, patterns: 10, full_state_at: at };
        let a = aggregate(&[t(100.0, Some(2)), t(0.0, None)], 10);
        assert_eq!(a.state_mean, 50.0);
        assert_eq!((a.state_min, a.state_max), (0.0, 100.0));
        assert_eq!(a.full_state_at_mean, 6.5);
    }

    #[test]
    fn csv_layout() {
        let rows = vec![TargetRow { node: "n22".into(), desired: 1, reached: 1, saw_0: 0, saw_1: 1, first_reach: Some(1) }];
        assert_eq!(csv_string(&rows), "node,desired,reached,saw_0,saw_1,first_reach\nn22,1,1,0,1,1\n");
        let row = TableRow {
            design: "c17".into(),
            gates: 6,
            nodes: 11,
            inputs: 5,
            pct_targets: "9.09".into(),
            patterns: 3,
            time: None,
            state_coverage: "100.00".into(),
            site_coverage: "0.00".into(),
            d_max: 4,
        };
        assert_eq!(
            csv_string(&[row]),
            "design,gates,nodes,inputs,pct_targets,patterns,time,state_coverage,site_coverage,d_max\nc17,6,11,5,9.09,3,,100.00,0.00,4\n"
        );
    }
}
