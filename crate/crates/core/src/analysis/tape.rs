use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Explicit randomness consumed by a probabilistic distinguisher.
///
/// A tape either replays a recorded list of draws or pulls fresh draws
/// from a seeded stream. Every draw is logged, so a stream tape can be
/// turned back into a recorded one with [`CoinTape::history`].
#[derive(Clone, Debug)]
pub struct CoinTape {
    source: Source,
    log: Vec<u64>,
}

#[derive(Clone, Debug)]
enum Source {
    Recorded { draws: Vec<u64>, next: usize },
    Stream(Box<ChaCha20Rng>),
}

impl CoinTape {
    /// Tape with no coins. Drawing from it panics.
    pub fn empty() -> Self {
        Self::recorded(Vec::new())
    }

    pub fn recorded(draws: Vec<u64>) -> Self {
        CoinTape {
            source: Source::Recorded { draws, next: 0 },
            log: Vec::new(),
        }
    }

    pub fn from_rng(rng: ChaCha20Rng) -> Self {
        CoinTape {
            source: Source::Stream(Box::new(rng)),
            log: Vec::new(),
        }
    }

    pub fn from_seed(seed: u64) -> Self {
        Self::from_rng(ChaCha20Rng::seed_from_u64(seed))
    }

    /// Uniform draw from `0..bound`.
    ///
    /// Panics if `bound` is zero, or if a recorded tape is exhausted or
    /// holds a value outside the requested range.
    pub fn draw_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "coin draw with empty range");
        let value = match &mut self.source {
            Source::Recorded { draws, next } => {
                let value = *draws
                    .get(*next)
                    .unwrap_or_else(|| panic!("coin tape exhausted after {} draws", *next));
                assert!(value < bound, "recorded coin {value} outside 0..{bound}");
                *next += 1;
                value
            }
            Source::Stream(rng) => rng.random_range(0..bound),
        };
        self.log.push(value);
        value
    }

    pub fn history(&self) -> &[u64] {
        &self.log
    }
}

/// Every tape over the given coin radices, in mixed-radix order.
pub(crate) fn enumerate_tapes(radices: &[u64]) -> impl Iterator<Item = CoinTape> + '_ {
    let total: u64 = radices.iter().product();
    (0..total).map(move |mut index| {
        let mut draws = Vec::with_capacity(radices.len());
        for &radix in radices {
            draws.push(index % radix);
            index /= radix;
        }
        CoinTape::recorded(draws)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stream_history_replays() {
        let mut tape = CoinTape::from_seed(7);
        let first: Vec<u64> = (1..20).map(|b| tape.draw_below(b)).collect();
        let mut replay = CoinTape::recorded(tape.history().to_vec());
        let second: Vec<u64> = (1..20).map(|b| replay.draw_below(b)).collect();
        assert_eq!(first, second);
    }

    #[test]
    #[should_panic(expected = "exhausted")]
    fn empty_tape_panics() {
        CoinTape::empty().draw_below(2);
    }

    #[test]
    fn enumeration_covers_every_tuple_once() {
        let mut seen: Vec<Vec<u64>> = enumerate_tapes(&[2, 3])
            .map(|mut t| vec![t.draw_below(2), t.draw_below(3)])
            .collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 6);
        assert_eq!(enumerate_tapes(&[]).count(), 1);
    }
}
