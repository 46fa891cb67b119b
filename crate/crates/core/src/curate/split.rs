// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::Item;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Val, Split::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }
}

/// Maps SHA-256(seed LE bytes, id) to [0,1) and picks the split whose
/// cumulative ratio interval contains it.
pub fn split_for(id: &str, seed: u64, ratios: [f64; 3]) -> Split {
    let digest = Sha256::new().chain_update(seed.to_le_bytes()).chain_update(id.as_bytes()).finalize();
    let x = u64::from_be_bytes(digest[..8].try_into().unwrap());
    let u = (x >> 11) as f64 / (1u64 << 53) as f64;
    if u < ratios[0] {
        Split::Train
    } else if u < ratios[0] + ratios[1] {
        Split::Val
    } else {
        Split::Test
    }
}

/// Fills in splits that the manifest did not pre-assign.
pub fn assign_splits(items: &mut [Item], ratios: [f64; 3], seed: u64) {
    for it in items {
        if it.record.split.is_none() {
            it.record.split = Some(split_for(&it.record.id, seed, ratios));
        }
    }
}
