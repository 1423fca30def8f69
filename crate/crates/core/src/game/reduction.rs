//! Turns a stegosystem distinguisher into a generator distinguisher.
//!
//! Given `y`, the wrapper draws a base index `i` uniformly from its coin
//! tape, forms the support `s(i, m0 ^ y)` and returns the inner decision.
//! If `y = G(k)` the input is exactly an embedding of `m0` under `k`; if `y`
//! is uniform the input is a uniform support. The wrapper therefore has the
//! same advantage against `G` as the inner distinguisher has against the
//! stegosystem, at cost `T' + T1 + N + 1`.

use std::sync::Arc;

use crate::analysis::{CoinTape, Distinguisher};
use crate::container::{Content, NBitString};
use crate::error::{Error, Result};
use crate::stegosystem::SupportFamily;

#[derive(Clone)]
pub struct ReductionWrapper {
    inner: Arc<dyn Distinguisher<Content>>,
    family: Arc<SupportFamily>,
    m0: NBitString,
}

pub fn reduce(
    inner: Arc<dyn Distinguisher<Content>>,
    family: Arc<SupportFamily>,
    m0: NBitString,
) -> Result<ReductionWrapper> {
    if m0.len() != family.n_bits() {
        return Err(Error::structural(format!(
            "m0 has {} bits, the plane holds {}",
            m0.len(),
            family.n_bits()
        )));
    }
    Ok(ReductionWrapper { inner, family, m0 })
}

impl ReductionWrapper {
    /// `T' + T1 + N + 1`.
    pub fn declared_cost(&self) -> u64 {
        self.inner.time_budget() + self.family.support_cost() + self.family.n_bits() as u64 + 1
    }

    /// The support the wrapper hands to the inner distinguisher for input
    /// `y` and base draw `i`.
    pub fn support_for(&self, y: &NBitString, i: usize) -> Result<Content> {
        self.family.support(i, &self.m0.xor(y)?)
    }

    pub fn m0(&self) -> &NBitString {
        &self.m0
    }
}

impl Distinguisher<NBitString> for ReductionWrapper {
    /// Inputs of the wrong width are rejected with 0.
    fn decide(&self, y: &NBitString, tape: &mut CoinTape) -> bool {
        let i = tape.draw_below(self.family.len() as u64) as usize;
        match self.support_for(y, i) {
            Ok(s) => self.inner.decide(&s, tape),
            Err(_) => false,
        }
    }

    fn time_budget(&self) -> u64 {
        self.declared_cost()
    }

    fn description(&self) -> String {
        format!("reduction of [{}] at m0 = {}", self.inner.description(), self.m0.to_hex())
    }

    fn coin_space(&self) -> Vec<u64> {
        let mut coins = vec![self.family.len() as u64];
        coins.extend(self.inner.coin_space());
        coins
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::constant_distinguisher;
    use crate::container::{Content, PositionPolicy};

    #[test]
    fn cost_accounting() {
        struct Budgeted;
        impl Distinguisher<Content> for Budgeted {
            fn decide(&self, _: &Content, _: &mut CoinTape) -> bool {
                true
            }
            fn time_budget(&self) -> u64 {
                100
            }
            fn description(&self) -> String {
                "budget 100".into()
            }
        }
        let base = Content::raw(vec![0x80; 6]).unwrap();
        let family = SupportFamily::new(vec![base], 4, PositionPolicy::LsbPerByte)
            .unwrap()
            .with_support_cost(7);
        let w = reduce(Arc::new(Budgeted), Arc::new(family), NBitString::zeros(4)).unwrap();
        assert_eq!(w.declared_cost(), 112);
        assert_eq!(w.time_budget(), 112);
    }

    #[test]
    fn rejects_wrong_m0() {
        let base = Content::raw(vec![0; 6]).unwrap();
        let family = Arc::new(SupportFamily::new(vec![base], 4, PositionPolicy::LsbPerByte).unwrap());
        assert!(reduce(Arc::new(constant_distinguisher(true)), family, NBitString::zeros(5)).is_err());
    }
}
