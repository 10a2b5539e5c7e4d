use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Outcome of a property sweep: the observed range of a comparability ratio
/// and the parameters at which the extremes occurred.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub n_samples: usize,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub worst_case_params: BTreeMap<String, f64>,
    pub pass: bool,
}

impl SweepReport {
    /// `ratio_max / ratio_min`.
    pub fn spread(&self) -> f64 {
        self.ratio_max / self.ratio_min
    }
}

#[derive(Debug, Clone)]
pub struct SweepAccumulator {
    n: usize,
    min: f64,
    max: f64,
    at_min: Vec<(String, f64)>,
    at_max: Vec<(String, f64)>,
}

impl Default for SweepAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl SweepAccumulator {
    pub fn new() -> Self {
        Self {
            n: 0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            at_min: Vec::new(),
            at_max: Vec::new(),
        }
    }

    pub fn observe(&mut self, ratio: f64, params: &[(&str, f64)]) {
        self.n += 1;
        let own = || params.iter().map(|(k, v)| (k.to_string(), *v)).collect::<Vec<_>>();
        // NaN ratios are pinned to both ends so they cannot pass silently.
        if ratio < self.min || ratio.is_nan() {
            self.min = if ratio.is_nan() { f64::NAN } else { ratio };
            self.at_min = own();
        }
        if ratio > self.max || ratio.is_nan() {
            self.max = if ratio.is_nan() { f64::NAN } else { ratio };
            self.at_max = own();
        }
    }

    pub fn count(&self) -> usize {
        self.n
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn finish(self, pass: impl FnOnce(f64, f64) -> bool) -> SweepReport {
        let mut worst_case_params = BTreeMap::new();
        for (k, v) in self.at_min {
            worst_case_params.insert(format!("at_min.{k}"), v);
        }
        for (k, v) in self.at_max {
            worst_case_params.insert(format!("at_max.{k}"), v);
        }
        let valid = self.n > 0 && self.min.is_finite() && self.max.is_finite();
        SweepReport {
            n_samples: self.n,
            ratio_min: self.min,
            ratio_max: self.max,
            worst_case_params,
            pass: valid && pass(self.min, self.max),
        }
    }
}
