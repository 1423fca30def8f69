//! Distinguishers: the decision procedures that games pit against
//! generators and stegosystems.

mod chi_square;
mod distinguishers;
pub mod gamma;
mod tape;

pub use chi_square::{chi_square_p_value, chi_square_statistic, ChiSquareResult};
pub use distinguishers::{
    chi_square_lsb_distinguisher, constant_distinguisher, equals_distinguisher, replay_distinguisher,
    ChiSquareLsb, ConstantDistinguisher, EqualsDistinguisher, LsbChiSquareReport, ReplayDistinguisher,
    DEFAULT_THRESHOLD_P, MAX_REPLAY_KEYS,
};
pub use tape::CoinTape;
pub(crate) use tape::enumerate_tapes;

/// A probabilistic decision procedure over inputs of type `I`.
///
/// `decide` must be a pure function of the input and the coins it draws
/// from `tape`. A distinguisher that draws coins lists the range of each
/// draw, in order, in [`coin_space`](Distinguisher::coin_space), which lets
/// exhaustive games enumerate every tape.
pub trait Distinguisher<I: ?Sized>: Send + Sync {
    /// `true` means 1 ("stego" or "pseudorandom").
    fn decide(&self, input: &I, tape: &mut CoinTape) -> bool;

    /// Declared abstract running time.
    fn time_budget(&self) -> u64;

    fn description(&self) -> String;

    fn coin_space(&self) -> Vec<u64> {
        Vec::new()
    }
}

impl<I: ?Sized, D: Distinguisher<I> + ?Sized> Distinguisher<I> for std::sync::Arc<D> {
    fn decide(&self, input: &I, tape: &mut CoinTape) -> bool {
        (**self).decide(input, tape)
    }

    fn time_budget(&self) -> u64 {
        (**self).time_budget()
    }

    fn description(&self) -> String {
        (**self).description()
    }

    fn coin_space(&self) -> Vec<u64> {
        (**self).coin_space()
    }
}

impl<I: ?Sized, D: Distinguisher<I> + ?Sized> Distinguisher<I> for Box<D> {
    fn decide(&self, input: &I, tape: &mut CoinTape) -> bool {
        (**self).decide(input, tape)
    }

    fn time_budget(&self) -> u64 {
        (**self).time_budget()
    }

    fn description(&self) -> String {
        (**self).description()
    }

    fn coin_space(&self) -> Vec<u64> {
        (**self).coin_space()
    }
}
