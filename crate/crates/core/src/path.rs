use serde::Serialize;

/// A process sampled on a time grid. `values[k]` is the value at `times[k]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Path {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl Path {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Self {
        debug_assert_eq!(times.len(), values.len());
        Self { times, values }
    }

    /// Uniform grid `k·horizon/steps`, `k = 0..=steps`.
    pub fn uniform_times(steps: usize, horizon: f64) -> Vec<f64> {
        let dt = horizon / steps as f64;
        (0..=steps).map(|k| k as f64 * dt).collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn terminal(&self) -> f64 {
        *self.values.last().expect("empty path")
    }

    /// Right-continuous step reading: the grid value in force on `[t_k, t_{k+1})`.
    pub fn step_value_at(&self, t: f64) -> f64 {
        let idx = self.times.partition_point(|&s| s <= t);
        self.values[idx.saturating_sub(1)]
    }

    /// Piecewise-linear reading between grid vertices, clamped at the ends.
    pub fn linear_value_at(&self, t: f64) -> f64 {
        let idx = self.times.partition_point(|&s| s <= t);
        if idx == 0 {
            return self.values[0];
        }
        if idx >= self.times.len() {
            return self.terminal();
        }
        let (t0, t1) = (self.times[idx - 1], self.times[idx]);
        let (v0, v1) = (self.values[idx - 1], self.values[idx]);
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }
}
