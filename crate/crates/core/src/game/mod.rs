//! Distinguishing games, exact stego-security checks and the reduction
//! from stegosystem distinguishers to generator distinguishers.

mod distribution;
mod reduction;
mod report;
pub(crate) mod runner;
mod stego;

pub use distribution::{EmpiricalDistribution, RelativeEntropy};
pub use reduction::{reduce, ReductionWrapper};
pub use report::{hoeffding_half_width, AdvantageReport, Frequency, GameConfig, GameKind, GameMode, CI_DELTA};
pub use runner::{trial_rng, MAX_COIN_TAPES};
pub use stego::{
    pad_imbalance, stego_distribution, stego_game, verify_stego_security, MessageDivergence, StegoSecurityReport,
    STEGO_EXHAUSTIVE_MAX_BITS,
};

pub use crate::generator::generator_game;
