//! Keyed-XOR bit-plane steganography with executable security games.
//!
//! A [`SupportFamily`] holds `r` base contents sharing an `N`-bit plane of
//! low-information bits. Embedding a message `m` under key `k` rewrites the
//! plane of a base to `m ^ G(k)`, where `G` is a key [`Generator`]. The
//! [`game`] module measures how well a [`Distinguisher`] separates stego
//! contents from uniformly drawn supports, enumerates the stego distribution
//! exactly for small parameters, and wraps stego distinguishers into
//! generator distinguishers with matching advantage.

pub mod analysis;
pub mod cli;
pub mod container;
pub mod error;
pub mod game;
pub mod manifest;
pub mod generator;
pub mod stegosystem;

pub use analysis::{CoinTape, Distinguisher};
pub use container::{ContainerKind, Content, NBitString, PositionMap, PositionPolicy};
pub use error::{Error, Result};
pub use game::{AdvantageReport, Frequency, GameMode};
pub use generator::{Generator, GeneratorKind};
pub use stegosystem::{synthetic_family, Stegosystem, SupportFamily};
