use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;

use super::QuantumState;
use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::scalar::Scalar;

/// Measurement histogram over computational-basis outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotCounts {
    pub counts: BTreeMap<usize, u64>,
    pub total_shots: u64,
    pub seed: u64,
}

impl ShotCounts {
    pub fn count(&self, outcome: usize) -> u64 {
        self.counts.get(&outcome).copied().unwrap_or(0)
    }

    pub fn frequency(&self, outcome: usize) -> f64 {
        self.count(outcome) as f64 / self.total_shots as f64
    }
}

/// Draws `shots` full-register measurements from `|amplitudes|²`.
pub fn sample<T: Scalar>(state: &QuantumState<T>, shots: u64, seed: u64) -> Result<ShotCounts> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let probs: Vec<f64> = state.probabilities().into_iter().map(Scalar::as_f64).collect();
    let dist = WeightedIndex::new(&probs).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut rng = stream_rng(seed, 0);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        *counts.entry(dist.sample(&mut rng)).or_insert(0) += 1;
    }
    Ok(ShotCounts { counts, total_shots: shots, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::Gate;

    #[test]
    fn deterministic_state_puts_all_shots_on_one_outcome() {
        let s = QuantumState::<f64>::zero(2).unwrap();
        let c = sample(&s, 100, 1).unwrap();
        assert_eq!(c.count(0), 100);
        assert_eq!(c.counts.len(), 1);
    }

    #[test]
    fn uniform_qubit_frequency() {
        let s = QuantumState::<f64>::zero(1).unwrap().apply_gate(&Gate::h(), &[0]).unwrap();
        let c = sample(&s, 1_000_000, 3).unwrap();
        // 3σ of a fair binomial at 10^6 shots is 0.0015
        assert!((c.frequency(0) - 0.5).abs() < 0.002);
        assert_eq!(c.counts.values().sum::<u64>(), c.total_shots);
    }

    #[test]
    fn same_seed_same_counts() {
        let s = QuantumState::<f64>::normalized_from_real(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(sample(&s, 5000, 11).unwrap(), sample(&s, 5000, 11).unwrap());
        assert!(sample(&s, 0, 11).is_err());
    }
}
