//! Support-family manifest files.
//!
//! ```json
//! {"n_bits": 4, "policy": "lsb-per-byte", "format": "raw", "bases": ["fam.bases/base-0.bin"]}
//! ```
//!
//! Base paths are resolved relative to the manifest's directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::container::{ContainerFormat, Content, PositionPolicy};
use crate::error::Result;
use crate::stegosystem::SupportFamily;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyManifest {
    pub n_bits: usize,
    pub policy: PositionPolicy,
    pub format: ContainerFormat,
    pub bases: Vec<PathBuf>,
    /// Declared cost of computing one support; defaults to the payload length.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support_cost: Option<u64>,
}

impl FamilyManifest {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_slice(&fs::read(path)?)?)
    }

    pub fn store(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }

    /// Loads the bases and builds the family. `manifest_dir` anchors
    /// relative base paths.
    pub fn build(&self, manifest_dir: &Path) -> Result<SupportFamily> {
        let bases = self
            .bases
            .iter()
            .map(|p| Content::load(manifest_dir.join(p), self.format))
            .collect::<Result<Vec<_>>>()?;
        let family = SupportFamily::new(bases, self.n_bits, self.policy)?;
        Ok(match self.support_cost {
            Some(t1) => family.with_support_cost(t1),
            None => family,
        })
    }
}

/// Loads a manifest and builds its family in one step.
pub fn load_family(path: impl AsRef<Path>) -> Result<(FamilyManifest, SupportFamily)> {
    let path = path.as_ref();
    let manifest = FamilyManifest::load(path)?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let family = manifest.build(dir)?;
    Ok((manifest, family))
}
