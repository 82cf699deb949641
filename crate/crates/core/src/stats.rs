//! Cycle-type tallies and distances between distributions.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::tree::CycleType;

/// A probability distribution over cycle types.
pub type Distribution = BTreeMap<CycleType, f64>;

/// Exact integer tally of cycle types over a finite population.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CycleTypeCounts {
    pub counts: BTreeMap<CycleType, u64>,
    pub total: u64,
}

impl CycleTypeCounts {
    pub fn add(&mut self, ct: CycleType) {
        *self.counts.entry(ct).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn merge(&mut self, other: CycleTypeCounts) {
        for (k, v) in other.counts {
            *self.counts.entry(k).or_insert(0) += v;
        }
        self.total += other.total;
    }

    pub fn probability(&self, ct: &CycleType) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.counts.get(ct).copied().unwrap_or(0) as f64 / self.total as f64
    }

    pub fn probabilities(&self) -> Distribution {
        self.counts
            .iter()
            .map(|(k, &v)| (k.clone(), v as f64 / self.total as f64))
            .collect()
    }

    /// Number of tallied elements with at least one fixed point.
    pub fn fixed_point_count(&self) -> u64 {
        self.counts
            .iter()
            .filter(|(k, _)| k.has_fixed_point())
            .map(|(_, &v)| v)
            .sum()
    }

    pub fn fixed_point_mass(&self) -> f64 {
        self.fixed_point_count() as f64 / self.total as f64
    }
}

/// Total variation distance `½ Σ |d1 - d2|` over the union of supports.
pub fn tv_distance(d1: &Distribution, d2: &Distribution) -> f64 {
    let mut sum = 0.0;
    for (k, &a) in d1 {
        sum += (a - d2.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, &b) in d2 {
        if !d1.contains_key(k) {
            sum += b.abs();
        }
    }
    (0.5 * sum).clamp(0.0, 1.0)
}

/// Renders a distribution with canonical `3+3+3` keys, as used in JSON output.
pub fn keyed_by_string(d: &Distribution) -> BTreeMap<String, f64> {
    d.iter().map(|(k, &v)| (k.to_string(), v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ct(s: &str) -> CycleType {
        s.parse().unwrap()
    }

    #[test]
    fn tv_examples() {
        let d: Distribution = [(ct("1+1"), 0.5), (ct("2"), 0.5)].into_iter().collect();
        assert_eq!(tv_distance(&d, &d), 0.0);
        let a: Distribution = [(ct("1+1"), 1.0)].into_iter().collect();
        let b: Distribution = [(ct("2"), 1.0)].into_iter().collect();
        assert_eq!(tv_distance(&a, &b), 1.0);
        let e: Distribution = [(ct("1+1"), 0.75), (ct("2"), 0.25)].into_iter().collect();
        assert!((tv_distance(&d, &e) - 0.25).abs() < 1e-15);
    }
}
