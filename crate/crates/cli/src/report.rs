//! The JSON reproduction report.

use serde::{Deserialize, Serialize};

use lmr_core::apps::SharpConstantReport;
use lmr_core::roots::RootOptions;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub tol_x: f64,
    /// `null` when the residual tolerance scales with the initial bracket.
    pub tol_f: Option<f64>,
    pub max_iter: usize,
}

impl From<&RootOptions> for Tolerances {
    fn from(o: &RootOptions) -> Self {
        Tolerances { tol_x: o.tol_x, tol_f: o.tol_f, max_iter: o.max_iter }
    }
}

/// Floats are written in their shortest round-trip form, so parsing a
/// report gives back the same values bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReproductionReport {
    pub proposition_id: String,
    pub parameter: Option<f64>,
    pub root: f64,
    pub constant: f64,
    pub residual: f64,
    pub bracket: [f64; 2],
    pub tolerances: Tolerances,
    pub runtime_ms: u64,
    pub engine_version: String,
}

impl ReproductionReport {
    pub fn new(r: &SharpConstantReport, opts: &RootOptions, runtime_ms: u64) -> ReproductionReport {
        ReproductionReport {
            proposition_id: r.proposition_id.id().to_string(),
            parameter: r.parameter,
            root: r.root,
            constant: r.constant,
            residual: r.residual,
            bracket: [r.bracket.0, r.bracket.1],
            tolerances: opts.into(),
            runtime_ms,
            engine_version: lmr_core::VERSION.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report fields are serializable");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<ReproductionReport> {
        serde_json::from_str(s)
    }
}
