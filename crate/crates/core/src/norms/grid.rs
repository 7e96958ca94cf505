use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{MorreyError, Result};

pub const MIN_CELLS: usize = 16;
pub const MAX_CELLS: usize = 4096;

/// A nonnegative radial simple function: `values[i]` on `(knots[i], knots[i+1]]`,
/// zero outside `(knots[0], knots[m]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    knots: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    knot: f64,
    value: f64,
}

impl GridFunction {
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let m = values.len();
        if knots.len() != m + 1 {
            return Err(MorreyError::InvalidGrid(format!(
                "{} knots cannot carry {m} cell values",
                knots.len()
            )));
        }
        if !(MIN_CELLS..=MAX_CELLS).contains(&m) {
            return Err(MorreyError::InvalidGrid(format!(
                "cell count must be in {MIN_CELLS}..={MAX_CELLS}, got {m}"
            )));
        }
        if knots.iter().any(|k| !(k.is_finite() && *k > 0.0)) || knots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(MorreyError::InvalidGrid("knots must be positive, finite and strictly ascending".into()));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(MorreyError::InvalidGrid("cell values must be finite and nonnegative".into()));
        }
        Ok(GridFunction { knots, values })
    }

    /// `m + 1` log-spaced knots from `lo` to `hi`.
    pub fn log_knots(lo: f64, hi: f64, m: usize) -> Vec<f64> {
        let (a, b) = (lo.ln(), hi.ln());
        let mut k: Vec<f64> = (0..=m).map(|i| (a + (b - a) * i as f64 / m as f64).exp()).collect();
        k[0] = lo;
        k[m] = hi;
        k
    }

    pub fn zero(knots: Vec<f64>) -> Result<Self> {
        let m = knots.len().saturating_sub(1);
        Self::new(knots, vec![0.0; m])
    }

    /// Cell values `f(midpoint)` with geometric midpoints.
    pub fn from_fn(knots: Vec<f64>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = knots.windows(2).map(|w| f((w[0] * w[1]).sqrt())).collect();
        Self::new(knots, values)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn cells(&self) -> usize {
        self.values.len()
    }

    /// Same knots, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(self.knots.clone(), values)
    }

    pub fn scaled(&self, c: f64) -> Self {
        GridFunction {
            knots: self.knots.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn eval(&self, rho: f64) -> f64 {
        if rho <= self.knots[0] || rho > *self.knots.last().unwrap() {
            return 0.0;
        }
        let i = self.knots.partition_point(|&k| k < rho);
        self.values[i - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Writes `knot,value` rows; the last knot carries value 0.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| MorreyError::InvalidGrid(format!("CSV write failed: {e}"));
        for (i, &knot) in self.knots.iter().enumerate() {
            let value = self.values.get(i).copied().unwrap_or(0.0);
            wr.serialize(CsvRow { knot, value }).map_err(io)?;
        }
        wr.flush().map_err(|e| MorreyError::InvalidGrid(format!("CSV write failed: {e}")))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let mut knots = Vec::new();
        let mut values = Vec::new();
        for row in rd.deserialize::<CsvRow>() {
            let row = row.map_err(|e| MorreyError::InvalidGrid(format!("CSV parse failed: {e}")))?;
            knots.push(row.knot);
            values.push(row.value);
        }
        values.pop();
        Self::new(knots, values)
    }
}
