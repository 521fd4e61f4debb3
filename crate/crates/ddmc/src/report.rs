//! Serializable views of verdicts and traces.

use ddmc_core::classify::{Verdict, Witness, WitnessDetail};
use ddmc_core::minimize::{DescentTrace, ScalingTrace};
use ddmc_core::LatticePoint;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessRecord {
    pub x: Vec<i64>,
    pub y: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl From<&Witness> for WitnessRecord {
    fn from(w: &Witness) -> Self {
        let detail = w.detail.as_ref().map(|d| match d {
            WitnessDetail::Levels(j) => json!({ "levels": j }),
            WitnessDetail::Shift(s) => json!({ "shift": s }),
            WitnessDetail::Outside(p) => json!({ "outside": p.coords() }),
        });
        WitnessRecord { x: w.x.coords().to_vec(), y: w.y.coords().to_vec(), detail }
    }
}

/// One verdict, keyed by the class or property it decides.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassRecord {
    pub class: String,
    pub holds: bool,
    pub witness: Option<WitnessRecord>,
    pub pairs_checked: u64,
}

impl ClassRecord {
    pub fn new(class: impl Into<String>, v: &Verdict) -> Self {
        ClassRecord {
            class: class.into(),
            holds: v.holds,
            witness: v.witness.as_ref().map(WitnessRecord::from),
            pairs_checked: v.pairs_checked,
        }
    }

    pub fn human(&self) -> String {
        let mut s = format!("{:<12} {}", self.class, if self.holds { "holds" } else { "VIOLATED" });
        if let Some(w) = &self.witness {
            s.push_str(&format!("  x={:?} y={:?}", w.x, w.y));
            if let Some(d) = &w.detail {
                s.push_str(&format!(" {d}"));
            }
        }
        s.push_str(&format!("  ({} pairs)", self.pairs_checked));
        s
    }
}

fn coords(points: &[LatticePoint]) -> Vec<Vec<i64>> {
    points.iter().map(|p| p.coords().to_vec()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescentRecord {
    pub algo: &'static str,
    pub minimizer: Vec<i64>,
    pub value: f64,
    pub iterations: u64,
    pub oracle_evals: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

impl DescentRecord {
    pub fn new(t: &DescentTrace, trace: bool) -> Self {
        DescentRecord {
            algo: "descent",
            minimizer: t.minimizer.coords().to_vec(),
            value: *t.values.last().unwrap_or(&f64::NAN),
            iterations: t.iterations,
            oracle_evals: t.oracle_evals,
            path: trace.then(|| coords(&t.path)),
            values: trace.then(|| t.values.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRecord {
    pub algo: &'static str,
    pub minimizer: Vec<i64>,
    pub value: f64,
    pub k_inf: u64,
    pub phases: usize,
    pub total_calls: u64,
    pub oracle_evals: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase_points: Option<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase_calls: Option<Vec<u64>>,
}

impl ScalingRecord {
    pub fn new(t: &ScalingTrace, value: f64, trace: bool) -> Self {
        ScalingRecord {
            algo: "scaling",
            minimizer: t.minimizer.coords().to_vec(),
            value,
            k_inf: t.k_inf,
            phases: t.alphas.len(),
            total_calls: t.total_calls,
            oracle_evals: t.oracle_evals,
            alphas: trace.then(|| t.alphas.clone()),
            phase_points: trace.then(|| coords(&t.phase_points)),
            phase_calls: trace.then(|| t.phase_calls.clone()),
        }
    }
}
