use std::collections::HashSet;

use serde::Serialize;

use super::chi_square::{chi_square_statistic, ChiSquareResult};
use super::{CoinTape, Distinguisher};
use crate::container::{read_plane, Content, NBitString, PositionMap};
use crate::error::{Error, Result};
use crate::generator::Generator;

pub const DEFAULT_THRESHOLD_P: f64 = 0.95;

/// Largest key set the replay attack will enumerate.
pub const MAX_REPLAY_KEYS: u64 = 1 << 16;

/// Always answers the same bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstantDistinguisher {
    bit: bool,
}

pub fn constant_distinguisher(bit: bool) -> ConstantDistinguisher {
    ConstantDistinguisher { bit }
}

impl<I: ?Sized> Distinguisher<I> for ConstantDistinguisher {
    fn decide(&self, _input: &I, _tape: &mut CoinTape) -> bool {
        self.bit
    }

    fn time_budget(&self) -> u64 {
        1
    }

    fn description(&self) -> String {
        format!("constant {}", u8::from(self.bit))
    }
}

/// Accepts exactly one bit string. Useful against generators with a
/// degenerate output distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualsDistinguisher {
    target: NBitString,
}

pub fn equals_distinguisher(target: NBitString) -> EqualsDistinguisher {
    EqualsDistinguisher { target }
}

impl Distinguisher<NBitString> for EqualsDistinguisher {
    fn decide(&self, input: &NBitString, _tape: &mut CoinTape) -> bool {
        *input == self.target
    }

    fn time_budget(&self) -> u64 {
        self.target.len() as u64
    }

    fn description(&self) -> String {
        format!("equals {}", self.target.to_hex())
    }
}

/// Outcome of the pairs-of-values test on one content.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LsbChiSquareReport {
    pub decision: bool,
    pub result: Option<ChiSquareResult>,
    pub nonempty_pairs: usize,
    pub undecidable: bool,
}

/// Pairs-of-values steganalyzer.
///
/// Byte values are grouped into pairs `(2u, 2u + 1)`. A plane overwritten
/// with uniform bits tends to equalize the two counts of each pair, so the
/// test compares the even count against the pair mean and answers 1
/// ("stego") when the fit is good, i.e. `p_value > threshold_p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiSquareLsb {
    threshold_p: f64,
}

pub fn chi_square_lsb_distinguisher(threshold_p: f64) -> Result<ChiSquareLsb> {
    if !(threshold_p > 0.0 && threshold_p < 1.0) {
        return Err(Error::config(format!(
            "threshold p must lie strictly between 0 and 1, got {threshold_p}"
        )));
    }
    Ok(ChiSquareLsb { threshold_p })
}

impl ChiSquareLsb {
    pub fn threshold_p(&self) -> f64 {
        self.threshold_p
    }

    pub fn analyze(&self, content: &Content) -> LsbChiSquareReport {
        let mut histogram = [0u64; 256];
        for &b in content.payload() {
            histogram[usize::from(b)] += 1;
        }
        let mut observed = Vec::new();
        let mut expected = Vec::new();
        for pair in histogram.chunks_exact(2) {
            let total = pair[0] + pair[1];
            if total > 0 {
                observed.push(pair[0]);
                expected.push(total as f64 / 2.0);
            }
        }
        let nonempty_pairs = observed.len();
        if nonempty_pairs < 2 {
            return LsbChiSquareReport {
                decision: false,
                result: None,
                nonempty_pairs,
                undecidable: true,
            };
        }
        let result = chi_square_statistic(&observed, &expected)
            .expect("pair means are positive and there are at least two pairs");
        LsbChiSquareReport {
            decision: result.p_value > self.threshold_p,
            result: Some(result),
            nonempty_pairs,
            undecidable: false,
        }
    }
}

impl Distinguisher<Content> for ChiSquareLsb {
    fn decide(&self, input: &Content, _tape: &mut CoinTape) -> bool {
        self.analyze(input).decision
    }

    fn time_budget(&self) -> u64 {
        // histogram pass over payloads up to 4 KiB plus one term per value pair
        4096 + 128
    }

    fn description(&self) -> String {
        format!("chi-square pairs of values, accept if p > {}", self.threshold_p)
    }
}

/// Accepts contents whose plane equals `m0 ^ G(k)` for some enumerated key.
///
/// Keys are the integers `0..key_space_limit` read as `ℓ`-bit strings. The
/// reachable planes are tabulated once at construction; the declared time
/// budget covers a single decision (plane read plus one lookup).
#[derive(Clone, Debug)]
pub struct ReplayDistinguisher {
    reachable: HashSet<NBitString>,
    pmap: PositionMap,
    keys: u64,
}

pub fn replay_distinguisher(
    m0: &NBitString,
    weak_g: &Generator,
    key_space_limit: u64,
    pmap: &PositionMap,
) -> Result<ReplayDistinguisher> {
    if m0.len() != weak_g.out_len() || pmap.len() != weak_g.out_len() {
        return Err(Error::structural(format!(
            "message ({}), generator output ({}) and plane ({}) widths differ",
            m0.len(),
            weak_g.out_len(),
            pmap.len()
        )));
    }
    let key_len = weak_g.key_len();
    if key_len < 64 && key_space_limit > 1u64 << key_len {
        return Err(Error::config(format!(
            "key space limit {key_space_limit} exceeds 2^{key_len}"
        )));
    }
    if key_space_limit > MAX_REPLAY_KEYS {
        return Err(Error::config(format!(
            "key space limit {key_space_limit} exceeds the enumeration cap {MAX_REPLAY_KEYS}"
        )));
    }
    let mut reachable = HashSet::new();
    for k in 0..key_space_limit {
        let key = NBitString::from_u64(k, key_len)?;
        reachable.insert(m0.xor(&weak_g.expand(&key)?)?);
    }
    Ok(ReplayDistinguisher {
        reachable,
        pmap: pmap.clone(),
        keys: key_space_limit,
    })
}

impl ReplayDistinguisher {
    pub fn reachable(&self) -> &HashSet<NBitString> {
        &self.reachable
    }
}

impl Distinguisher<Content> for ReplayDistinguisher {
    fn decide(&self, input: &Content, _tape: &mut CoinTape) -> bool {
        read_plane(input, &self.pmap).is_ok_and(|plane| self.reachable.contains(&plane))
    }

    fn time_budget(&self) -> u64 {
        self.pmap.len() as u64 + 1
    }

    fn description(&self) -> String {
        format!(
            "plane replay over {} keys ({} reachable planes)",
            self.keys,
            self.reachable.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::container::{designate_positions, write_plane, PositionPolicy};

    fn tape() -> CoinTape {
        CoinTape::empty()
    }

    #[test]
    fn constants() {
        let c = Content::raw(vec![1, 2, 3]).unwrap();
        assert!(constant_distinguisher(true).decide(&c, &mut tape()));
        assert!(!constant_distinguisher(false).decide(&c, &mut tape()));
        let y = NBitString::zeros(4);
        assert!(Distinguisher::<NBitString>::decide(&constant_distinguisher(true), &y, &mut tape()));
    }

    #[test]
    fn constant_payload_is_undecidable() {
        let d = chi_square_lsb_distinguisher(DEFAULT_THRESHOLD_P).unwrap();
        let report = d.analyze(&Content::raw(vec![0x42; 100]).unwrap());
        assert!(report.undecidable);
        assert!(!report.decision);
        assert_eq!(report.nonempty_pairs, 1);
        assert!(report.result.is_none());
    }

    #[test]
    fn threshold_bounds() {
        assert!(chi_square_lsb_distinguisher(0.0).is_err());
        assert!(chi_square_lsb_distinguisher(1.0).is_err());
        assert!(chi_square_lsb_distinguisher(f64::NAN).is_err());
    }

    #[test]
    fn crafted_natural_payload_is_rejected() {
        // even values 16..78, value v repeated (v mod 7) + 1 times
        let payload: Vec<u8> = (16u8..80)
            .step_by(2)
            .flat_map(|v| std::iter::repeat_n(v, usize::from(v % 7) + 1))
            .collect();
        assert_eq!(payload.len(), 129);
        let d = chi_square_lsb_distinguisher(DEFAULT_THRESHOLD_P).unwrap();
        let report = d.analyze(&Content::raw(payload).unwrap());
        let result = report.result.unwrap();
        assert_eq!(result.statistic, 64.5);
        assert_eq!(result.dof, 31);
        assert!((result.p_value - 0.000_385_068_445_655_844_3).abs() < 1e-10);
        assert!(!report.decision);
    }

    #[test]
    fn replay_membership_and_empty_key_set() {
        let g = Generator::constant_zero(4, 4).unwrap();
        let base = Content::raw(vec![0x10; 8]).unwrap();
        let pmap = designate_positions(&base, 4, PositionPolicy::LsbPerByte).unwrap();
        let m0 = NBitString::from_u64(0b1001, 4).unwrap();
        let d = replay_distinguisher(&m0, &g, 1, &pmap).unwrap();
        let hit = write_plane(&base, &pmap, &m0).unwrap();
        assert!(d.decide(&hit, &mut tape()));
        let miss = write_plane(&base, &pmap, &NBitString::from_u64(0b1000, 4).unwrap()).unwrap();
        assert!(!d.decide(&miss, &mut tape()));

        let empty = replay_distinguisher(&m0, &g, 0, &pmap).unwrap();
        assert!(!empty.decide(&hit, &mut tape()));
    }

    #[test]
    fn replay_rejects_oversized_key_space() {
        let g = Generator::constant_zero(4, 4).unwrap();
        let base = Content::raw(vec![0; 8]).unwrap();
        let pmap = designate_positions(&base, 4, PositionPolicy::LsbPerByte).unwrap();
        let m0 = NBitString::zeros(4);
        assert!(matches!(replay_distinguisher(&m0, &g, 17, &pmap), Err(Error::Config(_))));
        assert!(replay_distinguisher(&NBitString::zeros(3), &g, 1, &pmap).is_err());
        let wide = Generator::constant_zero(32, 4).unwrap();
        assert!(replay_distinguisher(&m0, &wide, MAX_REPLAY_KEYS + 1, &pmap).is_err());
    }
}
