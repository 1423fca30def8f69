//! Arm evaluation shared by the generator and stego games.
//!
//! Monte-Carlo randomness is split per trial: trial `t` of arm `a` draws its
//! samples from ChaCha20 seeded with `master_seed` (via
//! `SeedableRng::seed_from_u64`) on stream `a << 56 | 0 << 48 | t`, and its
//! coin tape from stream `a << 56 | 1 << 48 | t`. Counts are summed, so the
//! result does not depend on how trials are scheduled across workers.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use super::report::{GameConfig, Tally};
use crate::analysis::{enumerate_tapes, CoinTape};
use crate::error::{Error, Result};

/// Cap on the number of distinct coin tapes enumerated per input.
pub const MAX_COIN_TAPES: u64 = 1 << 16;

pub const MAX_TRIALS: u64 = 1 << 48;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ArmId {
    /// Pseudorandom or stego arm.
    Primary = 0,
    Uniform = 1,
}

const SAMPLE_STREAM: u64 = 0;
const COIN_STREAM: u64 = 1;

pub fn trial_rng(master_seed: u64, arm: u64, purpose: u64, trial: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(master_seed);
    rng.set_stream(arm << 56 | purpose << 48 | trial);
    rng
}

pub(crate) fn checked_coin_space(radices: &[u64]) -> Result<Vec<u64>> {
    let mut total: u64 = 1;
    for &radix in radices {
        if radix == 0 {
            return Err(Error::config("coin draw with an empty range"));
        }
        total = total
            .checked_mul(radix)
            .filter(|&t| t <= MAX_COIN_TAPES)
            .ok_or_else(|| Error::config(format!("more than {MAX_COIN_TAPES} coin tapes to enumerate")))?;
    }
    Ok(radices.to_vec())
}

fn in_pool<T: Send>(config: &GameConfig, job: impl FnOnce() -> T + Send) -> Result<T> {
    match config.workers {
        None => Ok(job()),
        Some(workers) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers.max(1))
                .build()
                .map_err(|e| Error::config(format!("cannot start {workers} workers: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

/// Evaluates `eval` on every input index and every coin tape.
pub(crate) fn exhaustive_frequency<F>(config: &GameConfig, points: u64, coins: &[u64], eval: F) -> Result<Tally>
where
    F: Fn(u64, &mut CoinTape) -> Result<bool> + Sync,
{
    let tapes: u64 = coins.iter().product();
    let hits = in_pool(config, || {
        (0..points)
            .into_par_iter()
            .map(|index| {
                let mut hits = 0u64;
                for mut tape in enumerate_tapes(coins) {
                    hits += u64::from(eval(index, &mut tape)?);
                }
                Ok::<u64, Error>(hits)
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))
    })??;
    Ok(Tally {
        hits,
        total: points * tapes,
    })
}

/// Evaluates `eval` on `trials` independently seeded samples.
pub(crate) fn sampled_frequency<F>(config: &GameConfig, arm: ArmId, trials: u64, eval: F) -> Result<Tally>
where
    F: Fn(&mut ChaCha20Rng, &mut CoinTape) -> Result<bool> + Sync,
{
    if trials == 0 {
        return Err(Error::config("a Monte-Carlo game needs at least one trial"));
    }
    if trials > MAX_TRIALS {
        return Err(Error::config(format!("at most {MAX_TRIALS} trials per arm")));
    }
    let seed = config.master_seed;
    let arm = arm as u64;
    let hits = in_pool(config, || {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(seed, arm, SAMPLE_STREAM, t);
                let mut tape = CoinTape::from_rng(trial_rng(seed, arm, COIN_STREAM, t));
                eval(&mut rng, &mut tape).map(u64::from)
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))
    })??;
    Ok(Tally { hits, total: trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_distinct() {
        let a: u64 = trial_rng(1, 0, 0, 0).random();
        let b: u64 = trial_rng(1, 1, 0, 0).random();
        let c: u64 = trial_rng(1, 0, 1, 0).random();
        let d: u64 = trial_rng(1, 0, 0, 1).random();
        let e: u64 = trial_rng(2, 0, 0, 0).random();
        let all = [a, b, c, d, e];
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                assert_ne!(all[i], all[j]);
            }
        }
        assert_eq!(a, trial_rng(1, 0, 0, 0).random::<u64>());
    }

    #[test]
    fn worker_count_does_not_change_tallies() {
        let eval = |rng: &mut ChaCha20Rng, tape: &mut CoinTape| Ok(rng.random_range(0..7u8) + tape.draw_below(3) as u8 > 5);
        let base = GameConfig::monte_carlo(5_000, 77);
        let reference = sampled_frequency(&base.clone().with_workers(1), ArmId::Primary, 5_000, eval).unwrap();
        for workers in [2, 3, 8] {
            let got = sampled_frequency(&base.clone().with_workers(workers), ArmId::Primary, 5_000, eval).unwrap();
            assert_eq!(got, reference);
        }
    }

    #[test]
    fn coin_space_limits() {
        assert!(checked_coin_space(&[0]).is_err());
        assert!(checked_coin_space(&[1 << 8, 1 << 9]).is_err());
        assert_eq!(checked_coin_space(&[4, 4]).unwrap(), vec![4, 4]);
    }

    #[test]
    fn exhaustive_counts_coins() {
        let t = exhaustive_frequency(&GameConfig::exhaustive(), 5, &[2], |i, tape| Ok(i < 2 && tape.draw_below(2) == 1)).unwrap();
        assert_eq!(t, Tally { hits: 2, total: 10 });
    }
}
