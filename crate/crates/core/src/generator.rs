//! Key expanders `G: {0,1}^ℓ -> {0,1}^N` and the generator distinguishing game.

use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::Distinguisher;
use crate::container::NBitString;
use crate::error::{Error, Result};
use crate::game::runner::{self, ArmId};
use crate::game::{AdvantageReport, GameConfig, GameKind, GameMode};

/// Multiplier of the 16-bit linear congruential generator behind
/// [`GeneratorKind::ShortCycle`].
pub const SHORT_CYCLE_MULTIPLIER: u32 = 25_173;
pub const SHORT_CYCLE_INCREMENT: u32 = 13_849;
pub const SHORT_CYCLE_MAX_KEY_BITS: usize = 16;
pub const COUNTER_STREAM_MAX_KEY_BITS: usize = 256;

/// Largest `ℓ` and `N` the exhaustive generator game accepts.
pub const GENERATOR_EXHAUSTIVE_MAX_BITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    /// `ℓ = N`, output equals the key.
    OneTimePad,
    /// ChaCha20 keystream under the zero-padded key, truncated to `N` bits.
    CounterStream,
    /// Always `0^N`.
    ConstantZero,
    /// Top bit of successive states of `x <- 25173 x + 13849 mod 2^16`,
    /// seeded with the key.
    ShortCycle,
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "otp" | "one-time-pad" => Ok(GeneratorKind::OneTimePad),
            "counter" | "counter-stream" => Ok(GeneratorKind::CounterStream),
            "zero" | "constant-zero" => Ok(GeneratorKind::ConstantZero),
            "short-cycle" | "lcg" => Ok(GeneratorKind::ShortCycle),
            other => Err(Error::config(format!("unknown generator `{other}`"))),
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeneratorKind::OneTimePad => "one-time-pad",
            GeneratorKind::CounterStream => "counter-stream",
            GeneratorKind::ConstantZero => "constant-zero",
            GeneratorKind::ShortCycle => "short-cycle",
        })
    }
}

/// A deterministic expander together with its declared time budget.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    kind: GeneratorKind,
    key_len: usize,
    out_len: usize,
    time_budget: u64,
}

impl Generator {
    pub fn new(kind: GeneratorKind, key_len: usize, out_len: usize) -> Result<Self> {
        let ok = match kind {
            GeneratorKind::OneTimePad => key_len == out_len,
            GeneratorKind::CounterStream => (1..=COUNTER_STREAM_MAX_KEY_BITS).contains(&key_len),
            GeneratorKind::ConstantZero => true,
            GeneratorKind::ShortCycle => key_len <= SHORT_CYCLE_MAX_KEY_BITS,
        };
        if !ok {
            return Err(Error::config(format!(
                "{kind} does not support {key_len}-bit keys with {out_len}-bit output"
            )));
        }
        Ok(Generator {
            kind,
            key_len,
            out_len,
            // one step per output bit
            time_budget: out_len as u64,
        })
    }

    pub fn one_time_pad(n: usize) -> Self {
        Self::new(GeneratorKind::OneTimePad, n, n).expect("ℓ = N is always valid")
    }

    pub fn counter_stream(key_len: usize, out_len: usize) -> Result<Self> {
        Self::new(GeneratorKind::CounterStream, key_len, out_len)
    }

    pub fn constant_zero(key_len: usize, out_len: usize) -> Result<Self> {
        Self::new(GeneratorKind::ConstantZero, key_len, out_len)
    }

    pub fn short_cycle(key_len: usize, out_len: usize) -> Result<Self> {
        Self::new(GeneratorKind::ShortCycle, key_len, out_len)
    }

    pub fn with_time_budget(mut self, budget: u64) -> Self {
        self.time_budget = budget;
        self
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    /// Key length `ℓ` in bits.
    pub fn key_len(&self) -> usize {
        self.key_len
    }

    /// Output length `N` in bits.
    pub fn out_len(&self) -> usize {
        self.out_len
    }

    pub fn time_budget(&self) -> u64 {
        self.time_budget
    }

    pub fn expand(&self, key: &NBitString) -> Result<NBitString> {
        if key.len() != self.key_len {
            return Err(Error::structural(format!(
                "{} expects a {}-bit key, got {} bits",
                self.kind,
                self.key_len,
                key.len()
            )));
        }
        let out = match self.kind {
            GeneratorKind::OneTimePad => key.clone(),
            GeneratorKind::ConstantZero => NBitString::zeros(self.out_len),
            GeneratorKind::ShortCycle => {
                let mut state = key.to_u64().expect("short-cycle keys fit in 16 bits") as u32;
                let mut out = NBitString::zeros(self.out_len);
                for t in 0..self.out_len {
                    state = (SHORT_CYCLE_MULTIPLIER * state + SHORT_CYCLE_INCREMENT) & 0xffff;
                    out.set(t, state >> 15 == 1);
                }
                out
            }
            GeneratorKind::CounterStream => {
                let mut seed = [0u8; 32];
                seed[..key.as_bytes().len()].copy_from_slice(key.as_bytes());
                let mut stream = ChaCha20Rng::from_seed(seed);
                let mut bytes = vec![0u8; self.out_len.div_ceil(8)];
                stream.fill_bytes(&mut bytes);
                if !self.out_len.is_multiple_of(8) {
                    if let Some(last) = bytes.last_mut() {
                        *last &= (1u8 << (self.out_len % 8)) - 1;
                    }
                }
                NBitString::from_bytes(bytes, self.out_len)?
            }
        };
        Ok(out)
    }
}

/// Measures how well `d` separates `G(k)` for uniform `k` from uniform
/// `N`-bit strings.
///
/// Arm A evaluates `d(G(k))`, arm B evaluates `d(y)`. In exhaustive mode
/// every key, every string and every coin tape is enumerated, so both
/// frequencies are exact.
pub fn generator_game(
    d: &dyn Distinguisher<NBitString>,
    g: &Generator,
    config: &GameConfig,
) -> Result<AdvantageReport> {
    let (key_len, out_len) = (g.key_len(), g.out_len());
    match config.mode {
        GameMode::Exhaustive => {
            if key_len > GENERATOR_EXHAUSTIVE_MAX_BITS || out_len > GENERATOR_EXHAUSTIVE_MAX_BITS {
                return Err(Error::config(format!(
                    "exhaustive generator game needs ℓ, N ≤ {GENERATOR_EXHAUSTIVE_MAX_BITS}, got ℓ = {key_len}, N = {out_len}"
                )));
            }
            let coins = runner::checked_coin_space(&d.coin_space())?;
            let pseudo = runner::exhaustive_frequency(config, 1u64 << key_len, &coins, |index, tape| {
                let key = NBitString::from_u64(index, key_len)?;
                Ok(d.decide(&g.expand(&key)?, tape))
            })?;
            let uniform = runner::exhaustive_frequency(config, 1u64 << out_len, &coins, |index, tape| {
                Ok(d.decide(&NBitString::from_u64(index, out_len)?, tape))
            })?;
            Ok(AdvantageReport::exhaustive(GameKind::Generator, pseudo, uniform))
        }
        GameMode::MonteCarlo { trials } => {
            let pseudo = runner::sampled_frequency(config, ArmId::Primary, trials, |rng, tape| {
                let key = NBitString::random(key_len, rng);
                Ok(d.decide(&g.expand(&key)?, tape))
            })?;
            let uniform = runner::sampled_frequency(config, ArmId::Uniform, trials, |rng, tape| {
                Ok(d.decide(&NBitString::random(out_len, rng), tape))
            })?;
            Ok(AdvantageReport::sampled(
                GameKind::Generator,
                pseudo,
                uniform,
                trials,
                config.master_seed,
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{constant_distinguisher, equals_distinguisher};
    use num_rational::Ratio;

    fn bits(v: u64, n: usize) -> NBitString {
        NBitString::from_u64(v, n).unwrap()
    }

    #[test]
    fn one_time_pad_is_identity() {
        let g = Generator::one_time_pad(4);
        assert_eq!(g.expand(&bits(0b1011, 4)).unwrap(), bits(0b1011, 4));
        assert!(Generator::new(GeneratorKind::OneTimePad, 4, 5).is_err());
    }

    #[test]
    fn constant_zero_is_zero() {
        let g = Generator::constant_zero(6, 4).unwrap();
        for k in 0..64 {
            assert_eq!(g.expand(&bits(k, 6)).unwrap(), NBitString::zeros(4));
        }
    }

    #[test]
    fn short_cycle_matches_published_recurrence() {
        // values from tests/oracles/oracle.py
        let g = Generator::short_cycle(16, 16).unwrap();
        assert_eq!(g.expand(&bits(0x1234, 16)).unwrap().to_u64(), Some(0x7e6a));
        let g8 = Generator::short_cycle(8, 8).unwrap();
        assert_eq!(g8.expand(&bits(0xa5, 8)).unwrap().to_u64(), Some(0x17));
        assert!(Generator::short_cycle(17, 4).is_err());
    }

    #[test]
    fn counter_stream_shape() {
        let g = Generator::counter_stream(128, 13).unwrap();
        let mut rng = rand::rng();
        let k = NBitString::random(128, &mut rng);
        let a = g.expand(&k).unwrap();
        assert_eq!(a.len(), 13);
        assert_eq!(a, g.expand(&k).unwrap());
        assert!(Generator::counter_stream(0, 8).is_err());
        assert!(Generator::counter_stream(257, 8).is_err());
    }

    #[test]
    fn key_length_mismatch() {
        let g = Generator::one_time_pad(4);
        assert!(matches!(g.expand(&NBitString::zeros(5)), Err(Error::Structural(_))));
    }

    #[test]
    fn constant_distinguisher_has_zero_advantage() {
        let g = Generator::short_cycle(8, 6).unwrap();
        let d = constant_distinguisher(true);
        let report = generator_game(&d, &g, &GameConfig::exhaustive()).unwrap();
        assert_eq!(report.advantage.ratio(), Ratio::from_integer(0));
        assert_eq!(report.arm_a.ratio(), Ratio::from_integer(1));
        let mc = generator_game(&d, &g, &GameConfig::monte_carlo(50, 3)).unwrap();
        assert_eq!(mc.advantage.ratio(), Ratio::from_integer(0));
    }

    #[test]
    fn constant_zero_against_zero_detector() {
        let g = Generator::constant_zero(4, 4).unwrap();
        let d = equals_distinguisher(NBitString::zeros(4));
        let report = generator_game(&d, &g, &GameConfig::exhaustive()).unwrap();
        assert_eq!(report.advantage.ratio(), Ratio::new(15, 16));
    }

    #[test]
    fn exhaustive_bounds() {
        let g = Generator::one_time_pad(13);
        let d = constant_distinguisher(true);
        assert!(matches!(generator_game(&d, &g, &GameConfig::exhaustive()), Err(Error::Config(_))));
        assert!(matches!(
            generator_game(&d, &g, &GameConfig::monte_carlo(0, 1)),
            Err(Error::Config(_))
        ));
    }
}
