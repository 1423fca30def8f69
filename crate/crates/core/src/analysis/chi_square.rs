use serde::Serialize;

use super::gamma;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Upper-tail probability of the chi-square distribution.
pub fn chi_square_p_value(statistic: f64, dof: usize) -> f64 {
    assert!(dof > 0, "chi-square needs at least one degree of freedom");
    gamma::regularized_upper(dof as f64 / 2.0, statistic / 2.0).clamp(0.0, 1.0)
}

/// Pearson goodness-of-fit statistic with `len - 1` degrees of freedom.
pub fn chi_square_statistic(observed: &[u64], expected: &[f64]) -> Result<ChiSquareResult> {
    if observed.len() != expected.len() {
        return Err(Error::config(format!(
            "{} observed categories but {} expected",
            observed.len(),
            expected.len()
        )));
    }
    if observed.len() < 2 {
        return Err(Error::config("chi-square needs at least two categories"));
    }
    if let Some(pos) = expected.iter().position(|&e| !(e > 0.0 && e.is_finite())) {
        return Err(Error::config(format!(
            "expected count at category {pos} must be positive, got {}",
            expected[pos]
        )));
    }
    let statistic = observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| {
            let diff = o as f64 - e;
            diff * diff / e
        })
        .sum::<f64>();
    let dof = observed.len() - 1;
    Ok(ChiSquareResult {
        statistic,
        dof,
        p_value: chi_square_p_value(statistic, dof),
    })
}
