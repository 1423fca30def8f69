use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use serde::Serialize;

use crate::container::NBitString;

/// Exact probability mass over supports `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalDistribution {
    mass: BTreeMap<(usize, NBitString), Ratio<u128>>,
}

/// `D(P || Q)` in nats, or infinite when `P` puts mass outside `Q`'s support.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "nats", rename_all = "lowercase")]
pub enum RelativeEntropy {
    Finite(f64),
    Infinite,
}

impl EmpiricalDistribution {
    /// Normalizes integer counts by their sum.
    pub fn from_counts(counts: BTreeMap<(usize, NBitString), u64>) -> Self {
        let total: u128 = counts.values().map(|&c| u128::from(c)).sum();
        assert!(total > 0, "distribution needs positive mass");
        let mass = counts
            .into_iter()
            .filter(|&(_, c)| c > 0)
            .map(|(k, c)| (k, Ratio::new(u128::from(c), total)))
            .collect();
        EmpiricalDistribution { mass }
    }

    /// Uniform over `r` bases times every `n`-bit plane value.
    pub fn uniform_supports(r: usize, n: usize) -> Self {
        let points = r as u128 * (1u128 << n);
        let p = Ratio::new(1, points);
        let mut mass = BTreeMap::new();
        for i in 0..r {
            for j in 0..1u64 << n {
                mass.insert((i, NBitString::from_u64(j, n).expect("j < 2^n")), p);
            }
        }
        EmpiricalDistribution { mass }
    }

    pub fn probability(&self, i: usize, j: &NBitString) -> Ratio<u128> {
        self.mass.get(&(i, j.clone())).copied().unwrap_or_else(|| Ratio::from_integer(0))
    }

    pub fn support_size(&self) -> usize {
        self.mass.len()
    }

    pub fn total_mass(&self) -> Ratio<u128> {
        self.mass.values().fold(Ratio::from_integer(0), |acc, &p| acc + p)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, NBitString), &Ratio<u128>)> {
        self.mass.iter()
    }

    /// Half the L1 distance.
    pub fn total_variation(&self, other: &EmpiricalDistribution) -> Ratio<u128> {
        let keys: BTreeSet<_> = self.mass.keys().chain(other.mass.keys()).collect();
        let zero = Ratio::from_integer(0);
        let l1 = keys.into_iter().fold(zero, |acc, key| {
            let p = self.mass.get(key).copied().unwrap_or(zero);
            let q = other.mass.get(key).copied().unwrap_or(zero);
            acc + if p >= q { p - q } else { q - p }
        });
        l1 / 2
    }

    pub fn relative_entropy(&self, other: &EmpiricalDistribution) -> RelativeEntropy {
        let mut nats = 0.0;
        for (key, p) in &self.mass {
            let Some(q) = other.mass.get(key) else {
                return RelativeEntropy::Infinite;
            };
            let (p, q) = (to_f64(p), to_f64(q));
            nats += p * (p / q).ln();
        }
        RelativeEntropy::Finite(nats.max(0.0))
    }
}

fn to_f64(r: &Ratio<u128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(i: usize, j: u64) -> (usize, NBitString) {
        (i, NBitString::from_u64(j, 2).unwrap())
    }

    #[test]
    fn uniform_mass_sums_to_one() {
        let u = EmpiricalDistribution::uniform_supports(3, 4);
        assert_eq!(u.support_size(), 48);
        assert_eq!(u.total_mass(), Ratio::from_integer(1));
    }

    #[test]
    fn tv_and_relative_entropy() {
        let u = EmpiricalDistribution::uniform_supports(1, 2);
        assert_eq!(u.total_variation(&u), Ratio::from_integer(0));
        assert_eq!(u.relative_entropy(&u), RelativeEntropy::Finite(0.0));

        let point = EmpiricalDistribution::from_counts([(key(0, 3), 5)].into_iter().collect());
        assert_eq!(point.total_variation(&u), Ratio::new(3, 4));
        assert_eq!(u.total_variation(&point), Ratio::new(3, 4));
        match point.relative_entropy(&u) {
            RelativeEntropy::Finite(x) => assert!((x - 4f64.ln()).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        assert_eq!(u.relative_entropy(&point), RelativeEntropy::Infinite);
    }
}
