//! Monte-Carlo and exact-enumeration experiments on the neighborhood sampling bounds, plus
//! success-rate sweeps of the triangle-free pipeline.
//!
//! Every experiment returns an [`ExperimentReport`]. Trials run in parallel
//! chunks whose seeds are `seed::derive(master, chunk)`; counts are summed, so
//! results do not depend on the thread count. Empirical frequencies carry 99%
//! Wilson intervals.

mod experiments;
mod instances;
mod stats;

use serde::Serialize;
use thiserror::Error;

use crate::colorer::ColorerError;
use crate::cover::CoverError;
use crate::exact::TooLarge;
use crate::graph::GraphError;
use crate::sampler::SamplerError;

pub use experiments::{
    cap_degree, chernoff_check, chernoff_experiment, factorial_bound_experiment, negcorr_experiment,
    shearer_experiment, survival_experiment, sweep, sweep_csv, SweepConfig, SweepFamily, SweepRow, Tail,
};
pub use instances::{capped_residual, layered_case, star_case, NeighborhoodCase};
pub use stats::{binomial_sigma, chi_square_p_value, wilson, WILSON_Z};

/// Slack for comparisons between exactly computed probabilities.
pub const EXACT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Colorer(#[from] ColorerError),
    #[error(transparent)]
    TooLarge(#[from] TooLarge),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{0}")]
    Domain(String),
}

/// One measured or computed quantity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub quantity: String,
    pub value: f64,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub exact: Option<f64>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl Row {
    pub fn new(quantity: impl Into<String>, value: f64) -> Self {
        Row {
            quantity: quantity.into(),
            value,
            ci_low: None,
            ci_high: None,
            exact: None,
            lower: None,
            upper: None,
        }
    }

    /// A frequency `hits / trials` with its Wilson interval.
    pub fn frequency(quantity: impl Into<String>, hits: u64, trials: u64) -> Self {
        let (lo, hi) = wilson(hits, trials);
        Row {
            ci_low: Some(lo),
            ci_high: Some(hi),
            ..Row::new(quantity, if trials == 0 { 0.0 } else { hits as f64 / trials as f64 })
        }
    }

    pub fn exact(mut self, v: f64) -> Self {
        self.exact = Some(v);
        self
    }

    pub fn lower(mut self, v: f64) -> Self {
        self.lower = Some(v);
        self
    }

    pub fn upper(mut self, v: f64) -> Self {
        self.upper = Some(v);
        self
    }
}

/// The outcome of checking one inequality. Ungated verdicts are reported but
/// do not fail the experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub inequality: String,
    pub holds: bool,
    pub gated: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub seed: u64,
    pub parameters: Vec<(String, String)>,
    pub rows: Vec<Row>,
    pub verdicts: Vec<Verdict>,
    /// Generated instances, in their text formats, for replay.
    pub corpus: Vec<String>,
}

impl ExperimentReport {
    pub fn new(experiment: impl Into<String>, seed: u64) -> Self {
        ExperimentReport {
            experiment: experiment.into(),
            seed,
            parameters: Vec::new(),
            rows: Vec::new(),
            verdicts: Vec::new(),
            corpus: Vec::new(),
        }
    }

    pub fn param(&mut self, name: &str, value: impl ToString) {
        self.parameters.push((name.to_string(), value.to_string()));
    }

    pub fn row(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub fn verdict(&mut self, inequality: impl Into<String>, holds: bool, gated: bool, detail: impl Into<String>) {
        self.verdicts.push(Verdict {
            inequality: inequality.into(),
            holds,
            gated,
            detail: detail.into(),
        });
    }

    pub fn find_row(&self, quantity: &str) -> Option<&Row> {
        self.rows.iter().find(|r| r.quantity == quantity)
    }

    /// True iff every gated verdict holds.
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.holds || !v.gated)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| v.gated && !v.holds)
    }

    /// One CSV table: parameter, measurement and verdict rows, distinguished by
    /// the `kind` column.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        w.write_record([
            "experiment", "kind", "name", "value", "ci_low", "ci_high", "exact", "lower", "upper", "holds", "gated",
        ])
        .expect("in-memory write");
        for (name, value) in &self.parameters {
            w.write_record([&self.experiment, "param", name, value, "", "", "", "", "", "", ""])
                .expect("in-memory write");
        }
        for r in &self.rows {
            w.write_record([
                self.experiment.as_str(),
                "measure",
                &r.quantity,
                &r.value.to_string(),
                &opt(r.ci_low),
                &opt(r.ci_high),
                &opt(r.exact),
                &opt(r.lower),
                &opt(r.upper),
                "",
                "",
            ])
            .expect("in-memory write");
        }
        for v in &self.verdicts {
            w.write_record([
                self.experiment.as_str(),
                "verdict",
                &v.inequality,
                &v.detail,
                "",
                "",
                "",
                "",
                "",
                &v.holds.to_string(),
                &v.gated.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_csv_and_gating() {
        let mut r = ExperimentReport::new("demo", 7);
        r.param("k", 3);
        r.row(Row::frequency("p", 1, 4).exact(0.25).upper(0.5));
        r.verdict("p ≤ 1/2, always", true, true, "");
        r.verdict("report only", false, false, "x");
        assert!(r.passed());
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[1], "demo,param,k,3,,,,,,,");
        assert!(lines[2].starts_with("demo,measure,p,0.25,"));
        assert_eq!(lines[3], "demo,verdict,\"p ≤ 1/2, always\",,,,,,,true,true");
        r.verdict("gated", false, true, "");
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
    }
}
