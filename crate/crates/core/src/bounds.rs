//! Chernoff tail bounds for weighted sums of independent `[0, 1]` variables.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::stream_rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `P[X >= (1 + delta) mu]`.
    Upper,
    /// `P[X <= (1 - delta) mu]`.
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    pub mu: f64,
    pub delta: f64,
    pub side: Side,
    pub value: f64,
}

impl TailBound {
    pub fn new(mu: f64, delta: f64, side: Side) -> Result<Self> {
        let value = match side {
            Side::Upper => chernoff_upper(mu, delta)?,
            Side::Lower => chernoff_lower(mu, delta)?,
        };
        Ok(TailBound { mu, delta, side, value })
    }
}

fn check_mu(mu: f64) -> Result<()> {
    if !(mu >= 0.0 && mu.is_finite()) {
        return Err(Error::Domain(format!("mu must be finite and nonnegative, got {mu}")));
    }
    Ok(())
}

/// `min(1, (e^d / (1 + d)^(1 + d))^mu)`, computed in log space.
pub fn chernoff_upper(mu: f64, delta: f64) -> Result<f64> {
    check_mu(mu)?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    let log = mu * (delta - (1.0 + delta) * delta.ln_1p());
    Ok(log.exp().clamp(0.0, 1.0))
}

/// `min(1, (e^-d / (1 - d)^(1 - d))^mu)` for `d` in `(0, 1)`.
pub fn chernoff_lower(mu: f64, delta: f64) -> Result<f64> {
    check_mu(mu)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    let log = mu * (-delta - (1.0 - delta) * (-delta).ln_1p());
    Ok(log.exp().clamp(0.0, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloCheck {
    pub empirical_tail: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Samples `X = sum w_i X_i` with `X_i ~ Bernoulli(p_i)` and compares the
/// tail frequency with the bound, allowing three standard errors plus 0.01.
pub fn validate_bound_monte_carlo(
    weights: &[f64],
    probs: &[f64],
    delta: f64,
    side: Side,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloCheck> {
    if weights.len() != probs.len() {
        return Err(Error::Domain(format!(
            "{} weights but {} probabilities",
            weights.len(),
            probs.len()
        )));
    }
    if let Some(w) = weights.iter().chain(probs).find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::Domain(format!("weights and probabilities must lie in [0, 1], got {w}")));
    }
    if trials < 10_000 {
        return Err(Error::Domain(format!("at least 10000 trials required, got {trials}")));
    }
    let mu: f64 = weights.iter().zip(probs).map(|(w, p)| w * p).sum();
    let bound = TailBound::new(mu, delta, side)?.value;
    let threshold = match side {
        Side::Upper => (1.0 + delta) * mu,
        Side::Lower => (1.0 - delta) * mu,
    };
    let mut rng = stream_rng(seed, 0);
    let mut hits = 0u64;
    for _ in 0..trials {
        let x: f64 = weights
            .iter()
            .zip(probs)
            .map(|(w, &p)| if rng.random::<f64>() < p { *w } else { 0.0 })
            .sum();
        let tail = match side {
            Side::Upper => x >= threshold - 1e-12,
            Side::Lower => x <= threshold + 1e-12,
        };
        hits += tail as u64;
    }
    let empirical = hits as f64 / trials as f64;
    let slack = 3.0 * (bound * (1.0 - bound) / trials as f64).sqrt() + 0.01;
    Ok(MonteCarloCheck {
        empirical_tail: empirical,
        bound,
        holds: empirical <= bound + slack,
    })
}
