use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Primitives of the reduced-form favor-exchange model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Per-link, per-period probability that a favor is needed.
    pub p: f64,
    pub v: f64,
    pub c: f64,
    pub delta: f64,
    pub n: usize,
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.v > self.c && self.c > 0.0) {
            return Err(Error::Parameter(format!(
                "need v > c > 0, got v={} c={}",
                self.v, self.c
            )));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Parameter(format!(
                "discount factor must lie in (0,1), got {}",
                self.delta
            )));
        }
        if self.p.is_nan() || self.p < 0.0 {
            return Err(Error::Parameter(format!(
                "p must be non-negative, got {}",
                self.p
            )));
        }
        let pairs = (self.n * self.n.saturating_sub(1)) as f64;
        if pairs * self.p > 1.0 {
            return Err(Error::Parameter(format!(
                "n(n-1)p = {} exceeds 1",
                pairs * self.p
            )));
        }
        Ok(())
    }
}

/// Discounted value of one favor-exchange relationship, `p(v-c)/(1-delta)`.
pub fn theoretical_b(params: &ModelParams) -> Result<f64> {
    params.validate()?;
    Ok(params.p * (params.v - params.c) / (1.0 - params.delta))
}

/// `m*b > c > (m-1)*b`.
pub fn in_range(m: usize, b: f64, c: f64) -> bool {
    m as f64 * b > c && c > (m as f64 - 1.0) * b
}

/// `2b > c > b`.
pub fn in_range_m2(b: f64, c: f64) -> bool {
    in_range(2, b, c)
}

/// `2b > c + h*c > b`: the cost still sits between one and two links even
/// after adding the expected gain `h*c` from a follow-up deletion.
pub fn corner_case_holds(b: f64, c: f64, h: f64) -> bool {
    let cost = c + h * c;
    2.0 * b > cost && cost > b
}

/// Supremum of `h` for which [`corner_case_holds`], i.e. `(2b - c) / c`.
pub fn corner_case_bound(b: f64, c: f64) -> f64 {
    (2.0 * b - c) / c
}
