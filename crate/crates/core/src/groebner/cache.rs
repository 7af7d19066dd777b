//! On-disk cache of finished Groebner basis computations, keyed by a SHA-256
//! hash of the ring, ambient module, order and input generators.

use std::fs;
use std::path::PathBuf;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::layout::TermOrder;
use crate::module::{FreeModule, Vector};
use crate::poly::Ring;

static CACHE_DIR: RwLock<Option<PathBuf>> = RwLock::new(None);

/// Enables the cache under `dir`, or disables it with `None`.
pub fn set_cache_dir(dir: Option<PathBuf>) {
    *CACHE_DIR.write().unwrap() = dir;
}

pub fn cache_dir() -> Option<PathBuf> {
    CACHE_DIR.read().unwrap().clone()
}

/// Packed `(monomial, component, coefficient)` triples.
pub(crate) type PackedVector = Vec<(u64, u32, u32)>;

#[derive(Serialize, Deserialize)]
pub(crate) struct Entry {
    pub elems: Vec<(i32, PackedVector)>,
    pub kept: Vec<usize>,
    pub syzygies: Vec<PackedVector>,
}

pub(crate) fn key(ring: &Ring, module: &FreeModule, order: &TermOrder, inputs: &[Vector]) -> String {
    let mut h = Sha256::new();
    h.update(format!(
        "v1 p={} n={} twists={:?} split={:?}\n",
        ring.characteristic(),
        ring.nvars,
        module.twists,
        order.split
    ));
    for v in inputs {
        for t in v.terms() {
            h.update(t.mono.raw().to_le_bytes());
            h.update(t.comp.to_le_bytes());
            h.update(t.coef.to_le_bytes());
        }
        h.update(b";");
    }
    hex::encode(h.finalize())
}

pub(crate) fn load(key: &str) -> Option<Entry> {
    let dir = cache_dir()?;
    let text = fs::read_to_string(dir.join(format!("{key}.json"))).ok()?;
    match serde_json::from_str(&text) {
        Ok(e) => Some(e),
        Err(err) => {
            log::warn!("ignoring unreadable cache entry {key}: {err}");
            None
        }
    }
}

pub(crate) fn store(key: &str, entry: &Entry) {
    let Some(dir) = cache_dir() else { return };
    let result = fs::create_dir_all(&dir).and_then(|_| {
        let tmp = dir.join(format!("{key}.tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(entry).expect("cache entry serializes"))?;
        fs::rename(&tmp, dir.join(format!("{key}.json")))
    });
    if let Err(err) = result {
        log::warn!("could not write cache entry {key}: {err}");
    }
}
