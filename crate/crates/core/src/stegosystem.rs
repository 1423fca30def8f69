//! The symmetric stegosystem `(embed, extract, inv)` over a support family.
//!
//! A family holds `r` base contents whose designated plane is normalized to
//! zero. The support `s(i, j)` is base `i` with its plane set to `j`, and
//! embedding `m` under key `k` into base `i` yields `s(i, m ^ G(k))`.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::container::{
    designate_positions, read_plane, write_plane, Content, NBitString, PositionMap, PositionPolicy,
};
use crate::error::{Error, Result};
use crate::generator::Generator;

#[derive(Clone, Debug)]
pub struct SupportFamily {
    bases: Vec<Content>,
    pmap: PositionMap,
    policy: Option<PositionPolicy>,
    t1: u64,
    lookup: HashMap<Content, usize>,
}

impl SupportFamily {
    /// Builds a family whose plane is chosen by `policy` on the first base.
    pub fn new(bases: Vec<Content>, n_bits: usize, policy: PositionPolicy) -> Result<Self> {
        let first = bases
            .first()
            .ok_or_else(|| Error::config("a support family needs at least one base"))?;
        let pmap = designate_positions(first, n_bits, policy)?;
        let mut family = Self::with_positions(bases, pmap)?;
        family.policy = Some(policy);
        Ok(family)
    }

    /// Builds a family over an explicit plane.
    ///
    /// Every base must share the first base's payload length and container
    /// format. Planes are zeroed, and bases that coincide after zeroing are
    /// rejected so that `index_of` stays a function.
    pub fn with_positions(bases: Vec<Content>, pmap: PositionMap) -> Result<Self> {
        let first = bases
            .first()
            .ok_or_else(|| Error::config("a support family needs at least one base"))?;
        let (len, format) = (first.len(), first.kind().format());
        let zero = NBitString::zeros(pmap.len());
        let mut normalized = Vec::with_capacity(bases.len());
        let mut lookup = HashMap::with_capacity(bases.len());
        for (i, base) in bases.iter().enumerate() {
            if base.len() != len || base.kind().format() != format {
                return Err(Error::structural(format!(
                    "base {i} is a {}-byte {} content, base 0 is a {len}-byte {format}",
                    base.len(),
                    base.kind().format()
                )));
            }
            if pmap.len() > base.len() {
                return Err(Error::Capacity {
                    requested: pmap.len(),
                    capacity: base.len(),
                });
            }
            let norm = write_plane(base, &pmap, &zero)?;
            if let Some(&first) = lookup.get(&norm) {
                return Err(Error::Collision { first, second: i });
            }
            lookup.insert(norm.clone(), i);
            normalized.push(norm);
        }
        Ok(SupportFamily {
            t1: len as u64,
            bases: normalized,
            pmap,
            policy: None,
            lookup,
        })
    }

    /// Overrides the declared cost `T1` of computing one support from
    /// `(i, j)`. Defaults to the payload length in bytes.
    pub fn with_support_cost(mut self, t1: u64) -> Self {
        self.t1 = t1;
        self
    }

    /// Number of bases `r`.
    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    /// Plane width `N`.
    pub fn n_bits(&self) -> usize {
        self.pmap.len()
    }

    pub fn pmap(&self) -> &PositionMap {
        &self.pmap
    }

    pub fn policy(&self) -> Option<PositionPolicy> {
        self.policy
    }

    pub fn support_cost(&self) -> u64 {
        self.t1
    }

    /// Base `i` with its plane zeroed.
    pub fn base(&self, i: usize) -> Result<&Content> {
        self.bases.get(i).ok_or_else(|| {
            Error::structural(format!("base index {i} out of range for {} bases", self.bases.len()))
        })
    }

    pub fn bases(&self) -> &[Content] {
        &self.bases
    }

    /// Support `s(i, j)`.
    pub fn support(&self, i: usize, j: &NBitString) -> Result<Content> {
        write_plane(self.base(i)?, &self.pmap, j)
    }

    /// The unique `(i, j)` with `content == s(i, j)`.
    pub fn index_of(&self, content: &Content) -> Result<(usize, NBitString)> {
        if content.len() != self.bases[0].len() {
            return Err(Error::NotInFamily);
        }
        let j = read_plane(content, &self.pmap)?;
        let norm = write_plane(content, &self.pmap, &NBitString::zeros(self.pmap.len()))?;
        let i = *self.lookup.get(&norm).ok_or(Error::NotInFamily)?;
        Ok((i, j))
    }
}

/// Deterministic family of `r` raw bases resembling smooth natural
/// signals: each base is a bounded random walk seeded from `seed` and the
/// base index.
pub fn synthetic_family(r: usize, n_bits: usize, payload_len: usize, seed: u64) -> Result<SupportFamily> {
    let bases = (0..r)
        .map(|i| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut level: i32 = rng.random_range(48..208);
            let payload = (0..payload_len)
                .map(|_| {
                    level = (level + rng.random_range(-6..=6)).clamp(0, 255);
                    level as u8
                })
                .collect();
            Content::raw(payload)
        })
        .collect::<Result<Vec<_>>>()?;
    SupportFamily::new(bases, n_bits, PositionPolicy::LsbPerByte)
}

/// Keyed-XOR stegosystem. Symmetric: the extraction key is the embedding key.
#[derive(Clone, Debug)]
pub struct Stegosystem {
    family: Arc<SupportFamily>,
    generator: Generator,
}

impl Stegosystem {
    pub fn new(family: Arc<SupportFamily>, generator: Generator) -> Result<Self> {
        if generator.out_len() != family.n_bits() {
            return Err(Error::structural(format!(
                "generator emits {} bits but the plane holds {}",
                generator.out_len(),
                family.n_bits()
            )));
        }
        Ok(Stegosystem { family, generator })
    }

    pub fn family(&self) -> &Arc<SupportFamily> {
        &self.family
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn key_len(&self) -> usize {
        self.generator.key_len()
    }

    pub fn n_bits(&self) -> usize {
        self.family.n_bits()
    }

    fn check_message(&self, m: &NBitString) -> Result<()> {
        if m.len() != self.n_bits() {
            return Err(Error::structural(format!(
                "message has {} bits, the plane holds {}",
                m.len(),
                self.n_bits()
            )));
        }
        Ok(())
    }

    /// Embeds `m` into base `i`: the result is `s(i, m ^ G(k))`.
    pub fn embed(&self, i: usize, m: &NBitString, k: &NBitString) -> Result<Content> {
        self.check_message(m)?;
        let pad = self.generator.expand(k)?;
        self.family.support(i, &m.xor(&pad)?)
    }

    /// Recovers the message as `plane(c) ^ G(k)`.
    pub fn extract(&self, c: &Content, k: &NBitString) -> Result<NBitString> {
        let expected = self.family.bases[0].len();
        if c.len() != expected {
            return Err(Error::structural(format!(
                "content has {} payload bytes, the family uses {expected}",
                c.len()
            )));
        }
        let pad = self.generator.expand(k)?;
        read_plane(c, self.family.pmap())?.xor(&pad)
    }

    /// Extraction key for embedding key `k`; the identity.
    pub fn inv(&self, k: &NBitString) -> NBitString {
        k.clone()
    }

    /// Declared cost of one embedding: `T1 + N + cost(G)`.
    pub fn embed_cost(&self) -> u64 {
        self.family.support_cost() + self.n_bits() as u64 + self.generator.time_budget()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::container::ContainerKind;

    fn bits(v: u64, n: usize) -> NBitString {
        NBitString::from_u64(v, n).unwrap()
    }

    fn family(r: usize, n: usize) -> Arc<SupportFamily> {
        let bases = (0..r)
            .map(|i| Content::raw((0..n + 4).map(|b| (b * 29 + i * 64) as u8).collect()).unwrap())
            .collect();
        Arc::new(SupportFamily::new(bases, n, PositionPolicy::LsbPerByte).unwrap())
    }

    #[test]
    fn embed_xors_pad_into_plane() {
        // G(k) = 0b0110 via the one-time pad, m = 0b1010
        let sys = Stegosystem::new(family(2, 4), Generator::one_time_pad(4)).unwrap();
        let c = sys.embed(1, &bits(0b1010, 4), &bits(0b0110, 4)).unwrap();
        assert_eq!(read_plane(&c, sys.family().pmap()).unwrap(), bits(0b1100, 4));
        assert_eq!(sys.extract(&c, &bits(0b0110, 4)).unwrap(), bits(0b1010, 4));
    }

    #[test]
    fn zero_message_under_one_time_pad_exposes_key() {
        let sys = Stegosystem::new(family(1, 5), Generator::one_time_pad(5)).unwrap();
        let k = bits(0b10011, 5);
        let c = sys.embed(0, &NBitString::zeros(5), &k).unwrap();
        assert_eq!(read_plane(&c, sys.family().pmap()).unwrap(), k);
    }

    #[test]
    fn constant_zero_writes_message() {
        let sys = Stegosystem::new(family(1, 4), Generator::constant_zero(7, 4).unwrap()).unwrap();
        let m = bits(0b1001, 4);
        for k in [0, 5, 127] {
            let c = sys.embed(0, &m, &bits(k, 7)).unwrap();
            assert_eq!(read_plane(&c, sys.family().pmap()).unwrap(), m);
        }
    }

    #[test]
    fn wrong_key_garbles() {
        let sys = Stegosystem::new(family(1, 6), Generator::one_time_pad(6)).unwrap();
        let m = bits(0b101010, 6);
        let k = bits(0b000111, 6);
        let c = sys.embed(0, &m, &k).unwrap();
        for other in 0..64 {
            let k2 = bits(other, 6);
            let got = sys.extract(&c, &k2).unwrap();
            assert_eq!(got, m.xor(&k).unwrap().xor(&k2).unwrap());
            assert_eq!(got == m, k2 == k);
        }
    }

    #[test]
    fn inv_is_identity() {
        let sys = Stegosystem::new(family(1, 4), Generator::short_cycle(8, 4).unwrap()).unwrap();
        assert_eq!(sys.inv(&NBitString::zeros(8)), NBitString::zeros(8));
        let mut rng = rand::rng();
        for _ in 0..16 {
            let k = NBitString::random(8, &mut rng);
            assert_eq!(sys.inv(&k), k);
            assert_eq!(sys.inv(&sys.inv(&k)), k);
        }
    }

    #[test]
    fn index_of_members_and_strangers() {
        let fam = family(3, 4);
        let s = fam.support(1, &bits(9, 4)).unwrap();
        assert_eq!(fam.index_of(&s).unwrap(), (1, bits(9, 4)));
        let stranger = Content::raw(vec![0xee; 8]).unwrap();
        assert!(matches!(fam.index_of(&stranger), Err(Error::NotInFamily)));
        let short = Content::raw(vec![0; 3]).unwrap();
        assert!(matches!(fam.index_of(&short), Err(Error::NotInFamily)));
    }

    #[test]
    fn index_of_embed_output_exhaustive() {
        let fam = family(2, 4);
        let sys = Stegosystem::new(fam.clone(), Generator::short_cycle(6, 4).unwrap()).unwrap();
        let g = sys.generator().clone();
        for i in 0..2 {
            for m in 0..16 {
                for k in 0..64 {
                    let (m, k) = (bits(m, 4), bits(k, 6));
                    let c = sys.embed(i, &m, &k).unwrap();
                    let expected = m.xor(&g.expand(&k).unwrap()).unwrap();
                    assert_eq!(fam.index_of(&c).unwrap(), (i, expected));
                }
            }
        }
    }

    #[test]
    fn bases_are_normalized() {
        let fam = family(2, 4);
        for base in fam.bases() {
            assert_eq!(read_plane(base, fam.pmap()).unwrap().to_u64(), Some(0));
        }
    }

    #[test]
    fn collisions_rejected() {
        let a = Content::raw(vec![0x10, 0x20, 0x30, 0x40, 0x50]).unwrap();
        let b = Content::raw(vec![0x11, 0x21, 0x30, 0x41, 0x50]).unwrap();
        let err = SupportFamily::new(vec![a.clone(), b], 4, PositionPolicy::LsbPerByte).unwrap_err();
        assert!(matches!(err, Error::Collision { first: 0, second: 1 }));
        let err = SupportFamily::new(vec![a.clone(), a], 4, PositionPolicy::LsbPerByte).unwrap_err();
        assert!(matches!(err, Error::Collision { .. }));
    }

    #[test]
    fn mismatched_bases_rejected() {
        let a = Content::raw(vec![1; 4]).unwrap();
        let b = Content::raw(vec![1; 5]).unwrap();
        assert!(SupportFamily::new(vec![a.clone(), b], 2, PositionPolicy::LsbPerByte).is_err());
        let g = Content::graymap(2, 2, vec![3; 4]).unwrap();
        assert!(SupportFamily::new(vec![a.clone(), g], 2, PositionPolicy::LsbPerByte).is_err());
        assert!(matches!(
            SupportFamily::new(vec![a], 5, PositionPolicy::LsbPerByte),
            Err(Error::Capacity { .. })
        ));
        assert!(SupportFamily::new(Vec::new(), 1, PositionPolicy::LsbPerByte).is_err());
    }

    #[test]
    fn graymap_family_keeps_header() {
        let g = Content::graymap(4, 2, vec![200; 8]).unwrap();
        let fam = Arc::new(SupportFamily::new(vec![g], 4, PositionPolicy::LsbPerByte).unwrap());
        let s = fam.support(0, &bits(3, 4)).unwrap();
        assert!(matches!(s.kind(), ContainerKind::Graymap(_)));
        assert_eq!(fam.index_of(&s).unwrap(), (0, bits(3, 4)));
    }

    #[test]
    fn structural_errors() {
        let sys = Stegosystem::new(family(2, 4), Generator::one_time_pad(4)).unwrap();
        assert!(sys.embed(2, &bits(0, 4), &bits(0, 4)).is_err());
        assert!(sys.embed(0, &bits(0, 3), &bits(0, 4)).is_err());
        assert!(sys.embed(0, &bits(0, 4), &bits(0, 5)).is_err());
        let short = Content::raw(vec![0; 2]).unwrap();
        assert!(matches!(sys.extract(&short, &bits(0, 4)), Err(Error::Structural(_))));
        assert!(Stegosystem::new(family(1, 4), Generator::one_time_pad(5)).is_err());
    }

    #[test]
    fn synthetic_family_is_deterministic() {
        let a = synthetic_family(3, 8, 64, 11).unwrap();
        let b = synthetic_family(3, 8, 64, 11).unwrap();
        assert_eq!(a.bases(), b.bases());
        assert_eq!(a.len(), 3);
        assert_ne!(a.bases(), synthetic_family(3, 8, 64, 12).unwrap().bases());
    }

    #[test]
    fn embed_cost_arithmetic() {
        let fam = Arc::new(
            Arc::try_unwrap(family(1, 4)).unwrap().with_support_cost(7),
        );
        let g = Generator::short_cycle(8, 4).unwrap().with_time_budget(30);
        let sys = Stegosystem::new(fam, g).unwrap();
        assert_eq!(sys.embed_cost(), 7 + 4 + 30);
    }
}
