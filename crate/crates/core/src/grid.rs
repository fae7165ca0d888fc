//! Inclusive `start:stop:step` grids.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::invalid("grid", "non-finite bound"));
        }
        if stop < start {
            return Err(Error::invalid("grid", format!("stop {stop} < start {start}")));
        }
        if !(step > 0.0) {
            return Err(Error::invalid("grid", format!("step {step} must be > 0")));
        }
        Ok(Self { start, stop, step })
    }

    /// `round((stop - start) / step) + 1`.
    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step).round() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Values `start + k step`; the last one is pinned to `stop`.
    pub fn values(&self) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|k| if k + 1 == n { self.stop } else { self.start + k as f64 * self.step })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::invalid("grid", format!("`{t}`: {e}")))
        };
        match parts.as_slice() {
            [v] => {
                let v = num(v)?;
                Grid::new(v, v, 1.0)
            }
            [a, b, c] => Grid::new(num(a)?, num(b)?, num(c)?),
            _ => Err(Error::invalid("grid", format!("`{text}` is not start:stop:step"))),
        }
    }
}
