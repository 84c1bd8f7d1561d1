use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::oracle::AmplitudeOracle;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XebScore {
    pub value: f64,
    pub samples: usize,
}

/// Linear XEB: 2^n · mean(π_ideal(x)) − 1.
pub fn xeb(samples: &[u64], ideal: &AmplitudeOracle) -> Result<XebScore> {
    if samples.is_empty() {
        return Err(invalid("XEB needs at least one sample"));
    }
    let scale = (2.0f64).powi(ideal.n() as i32);
    let mean = samples.iter().map(|&x| ideal.prob(x)).sum::<f64>() / samples.len() as f64;
    Ok(XebScore {
        value: scale * mean - 1.0,
        samples: samples.len(),
    })
}
