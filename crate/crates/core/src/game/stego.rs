use std::collections::BTreeMap;

use num_rational::Ratio;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::distribution::{EmpiricalDistribution, RelativeEntropy};
use super::report::{AdvantageReport, Frequency, GameConfig, GameKind, GameMode};
use super::runner::{self, ArmId};
use crate::analysis::Distinguisher;
use crate::container::{Content, NBitString};
use crate::error::{Error, Result};
use crate::stegosystem::Stegosystem;

/// Largest `ℓ` and `N` accepted by exhaustive stego games and by
/// [`verify_stego_security`].
pub const STEGO_EXHAUSTIVE_MAX_BITS: usize = 10;

fn check_enumerable(sys: &Stegosystem) -> Result<()> {
    let (key_len, n) = (sys.key_len(), sys.n_bits());
    if key_len > STEGO_EXHAUSTIVE_MAX_BITS || n > STEGO_EXHAUSTIVE_MAX_BITS {
        return Err(Error::config(format!(
            "exhaustive enumeration needs ℓ, N ≤ {STEGO_EXHAUSTIVE_MAX_BITS}, got ℓ = {key_len}, N = {n}"
        )));
    }
    Ok(())
}

/// Measures how well `d` separates embeddings of `m` from uniform supports.
///
/// Arm A draws `k` uniformly from the key space and `i` uniformly from the
/// bases and evaluates `d(embed(i, m, k))`. Arm B draws a support uniformly,
/// as a uniform pair `(i, j)`, and evaluates `d(s(i, j))`.
pub fn stego_game(
    d: &dyn Distinguisher<Content>,
    sys: &Stegosystem,
    m: &NBitString,
    config: &GameConfig,
) -> Result<AdvantageReport> {
    if m.len() != sys.n_bits() {
        return Err(Error::structural(format!(
            "message has {} bits, the plane holds {}",
            m.len(),
            sys.n_bits()
        )));
    }
    let family = sys.family();
    let r = family.len();
    let (key_len, n) = (sys.key_len(), sys.n_bits());
    match config.mode {
        GameMode::Exhaustive => {
            check_enumerable(sys)?;
            let coins = runner::checked_coin_space(&d.coin_space())?;
            let r64 = r as u64;
            let stego = runner::exhaustive_frequency(config, (1u64 << key_len) * r64, &coins, |index, tape| {
                let key = NBitString::from_u64(index / r64, key_len)?;
                let c = sys.embed((index % r64) as usize, m, &key)?;
                Ok(d.decide(&c, tape))
            })?;
            let uniform = runner::exhaustive_frequency(config, r64 << n, &coins, |index, tape| {
                let j = NBitString::from_u64(index & ((1u64 << n) - 1), n)?;
                let c = family.support((index >> n) as usize, &j)?;
                Ok(d.decide(&c, tape))
            })?;
            Ok(AdvantageReport::exhaustive(GameKind::Stego, stego, uniform))
        }
        GameMode::MonteCarlo { trials } => {
            let stego = runner::sampled_frequency(config, ArmId::Primary, trials, |rng, tape| {
                let key = NBitString::random(key_len, rng);
                let i = rng.random_range(0..r);
                Ok(d.decide(&sys.embed(i, m, &key)?, tape))
            })?;
            let uniform = runner::sampled_frequency(config, ArmId::Uniform, trials, |rng, tape| {
                let i = rng.random_range(0..r);
                let j = NBitString::random(n, rng);
                Ok(d.decide(&family.support(i, &j)?, tape))
            })?;
            Ok(AdvantageReport::sampled(
                GameKind::Stego,
                stego,
                uniform,
                trials,
                config.master_seed,
            ))
        }
    }
}

/// Per-message discrepancy between the stego and cover distributions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MessageDivergence {
    #[serde(serialize_with = "hex_bits")]
    pub message: NBitString,
    pub tv_distance: Frequency,
    pub relative_entropy: RelativeEntropy,
}

fn hex_bits<S: serde::Serializer>(bits: &NBitString, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&bits.to_hex())
}

#[derive(Clone, Debug)]
pub struct StegoSecurityReport {
    /// Uniform distribution over the family's supports.
    pub cover: EmpiricalDistribution,
    /// Stego distribution for the message with the largest distance.
    pub worst_stego: EmpiricalDistribution,
    pub worst_message: NBitString,
    pub max_tv: Frequency,
    pub per_message: Vec<MessageDivergence>,
}

impl StegoSecurityReport {
    /// Stego and cover distributions coincide for every message.
    pub fn is_stego_secure(&self) -> bool {
        self.max_tv.is_zero()
    }
}

/// Stego distribution of `m`: the law of `index_of(embed(i, m, k))` under
/// uniform `(i, k)`.
pub fn stego_distribution(sys: &Stegosystem, m: &NBitString) -> Result<EmpiricalDistribution> {
    check_enumerable(sys)?;
    let family = sys.family();
    let mut counts = BTreeMap::new();
    for k in 0..1u64 << sys.key_len() {
        let key = NBitString::from_u64(k, sys.key_len())?;
        for i in 0..family.len() {
            let point = family.index_of(&sys.embed(i, m, &key)?)?;
            *counts.entry(point).or_insert(0u64) += 1;
        }
    }
    Ok(EmpiricalDistribution::from_counts(counts))
}

/// Compares, for every message, the exact stego distribution with the
/// uniform cover distribution and reports the worst total-variation
/// distance. Zero means the embedding is stego-secure on this family.
pub fn verify_stego_security(sys: &Stegosystem) -> Result<StegoSecurityReport> {
    check_enumerable(sys)?;
    let n = sys.n_bits();
    let cover = EmpiricalDistribution::uniform_supports(sys.family().len(), n);
    let per_message: Vec<(MessageDivergence, EmpiricalDistribution)> = (0..1u64 << n)
        .into_par_iter()
        .map(|v| {
            let m = NBitString::from_u64(v, n)?;
            let stego = stego_distribution(sys, &m)?;
            let divergence = MessageDivergence {
                tv_distance: stego.total_variation(&cover).into(),
                relative_entropy: stego.relative_entropy(&cover),
                message: m,
            };
            Ok((divergence, stego))
        })
        .collect::<Result<_>>()?;

    let worst = per_message
        .iter()
        .enumerate()
        .max_by(|(ia, (a, _)), (ib, (b, _))| a.tv_distance.cmp(&b.tv_distance).then(ib.cmp(ia)))
        .map(|(idx, _)| idx)
        .expect("at least one message");
    let (worst_div, worst_stego) = per_message[worst].clone();
    Ok(StegoSecurityReport {
        cover,
        worst_stego,
        worst_message: worst_div.message.clone(),
        max_tv: worst_div.tv_distance,
        per_message: per_message.into_iter().map(|(d, _)| d).collect(),
    })
}

/// Total variation between the pad distribution `G(k)` and uniform, an
/// independent route to the per-message distance.
pub fn pad_imbalance(sys: &Stegosystem) -> Result<Ratio<u128>> {
    check_enumerable(sys)?;
    let (key_len, n) = (sys.key_len(), sys.n_bits());
    let mut counts = vec![0u128; 1 << n];
    for k in 0..1u64 << key_len {
        let pad = sys.generator().expand(&NBitString::from_u64(k, key_len)?)?;
        counts[pad.to_u64().expect("N ≤ 10") as usize] += 1;
    }
    let keys = 1u128 << key_len;
    let cells = 1u128 << n;
    // 1/2 Σ |c/keys - 1/cells| over a common denominator keys * cells
    let l1: u128 = counts.iter().map(|&c| (c * cells).abs_diff(keys)).sum();
    Ok(Ratio::new(l1, 2 * keys * cells))
}
