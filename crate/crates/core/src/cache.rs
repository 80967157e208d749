//! On-disk cache of reduced Weyl modules.
//!
//! Entries are keyed by a SHA-256 over the Cartan matrix, the highest weight, the
//! prime, the sign convention and the code version. A stored entry whose recorded
//! key does not match the requested one is never decoded; the module is rebuilt
//! and the file replaced.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::charzero::layout_entries;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::Matrix;
use crate::module::{GradedOp, Layout, Side, WeightModule};
use crate::report::CODE_VERSION;
use crate::rootsys::{RootSystem, Weight, SIGN_CONVENTION};
use crate::weylmod::{weyl_module_capped, WeylModuleP};

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "PBWSPLIT_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CacheKey {
    pub cartan: Vec<Vec<i64>>,
    pub lambda: Weight,
    pub p: u64,
    pub sign_convention: String,
    pub code_version: String,
}

impl CacheKey {
    pub fn new(rs: &RootSystem, lambda: &Weight, p: u64) -> Self {
        CacheKey {
            cartan: rs.cartan().matrix.clone(),
            lambda: lambda.clone(),
            p,
            sign_convention: SIGN_CONVENTION.to_string(),
            code_version: CODE_VERSION.to_string(),
        }
    }

    pub fn digest(&self) -> String {
        let body = serde_json::to_string(self).expect("key serializes");
        hex::encode(Sha256::digest(body.as_bytes()))
    }
}

/// One nonzero block of a graded operator: source weight index, target weight
/// index and the row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockPayload {
    pub src: usize,
    pub tgt: usize,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModulePayload {
    pub layout: Vec<(Weight, usize)>,
    /// `e_ops[b][k-1]` lists the blocks of `E_{beta_b}^(k)`
    pub e_ops: Vec<Vec<Vec<BlockPayload>>>,
    pub f_ops: Vec<Vec<Vec<BlockPayload>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CacheEntry {
    pub key: String,
    pub key_input: CacheKey,
    pub payload: ModulePayload,
}

impl CacheEntry {
    pub fn encode(rs: &RootSystem, m: &WeylModuleP) -> Self {
        let key_input = CacheKey::new(rs, m.lambda(), m.p());
        let module = m.module();
        let ops = |side: Side| -> Vec<Vec<Vec<BlockPayload>>> {
            (0..rs.num_positive())
                .map(|b| {
                    (1..=module.max_power(side, b))
                        .map(|k| encode_op(module.op(side, b, k).expect("in range")))
                        .collect()
                })
                .collect()
        };
        CacheEntry {
            key: key_input.digest(),
            payload: ModulePayload {
                layout: layout_entries(module.layout()),
                e_ops: ops(Side::E),
                f_ops: ops(Side::F),
            },
            key_input,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("cache entry serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Rebuilds the module after checking the key against `expected` and the
    /// payload against the root system.
    pub fn decode(&self, rs: &Arc<RootSystem>, expected: &CacheKey) -> Result<WeylModuleP> {
        if &self.key_input != expected || self.key != expected.digest() {
            return Err(Error::Cache("key mismatch".into()));
        }
        let p = self.key_input.p;
        let field = PrimeField::new(p)?;
        let pl = &self.payload;
        let rank = rs.rank();
        if pl.layout.is_empty() || pl.layout[0] != (self.key_input.lambda.clone(), 1) {
            return Err(Error::Cache(
                "layout does not start at the highest weight".into(),
            ));
        }
        let mut seen = std::collections::HashSet::new();
        for (w, d) in &pl.layout {
            if w.rank() != rank || *d == 0 || !seen.insert(w) {
                return Err(Error::Cache(format!("bad layout entry {w}")));
            }
        }
        let layout = Arc::new(Layout::new(pl.layout.clone()));
        let ops = |side: Side, raw: &[Vec<Vec<BlockPayload>>]| -> Result<Vec<Vec<GradedOp<u64>>>> {
            if raw.len() != rs.num_positive() {
                return Err(Error::Cache("wrong number of roots".into()));
            }
            raw.iter()
                .enumerate()
                .map(|(b, powers)| {
                    powers
                        .iter()
                        .enumerate()
                        .map(|(i, blocks)| decode_op(rs, &layout, p, side, b, i as i64 + 1, blocks))
                        .collect()
                })
                .collect()
        };
        let e_ops = ops(Side::E, &pl.e_ops)?;
        let f_ops = ops(Side::F, &pl.f_ops)?;
        let module = WeightModule::new(
            field,
            rs.clone(),
            layout,
            self.key_input.lambda.clone(),
            e_ops,
            f_ops,
        );
        Ok(WeylModuleP::from_module(p, module))
    }
}

fn encode_op(op: &GradedOp<u64>) -> Vec<BlockPayload> {
    op.blocks()
        .iter()
        .enumerate()
        .filter_map(|(src, b)| {
            b.as_ref().map(|(tgt, m)| BlockPayload {
                src,
                tgt: *tgt,
                rows: m.rows(),
                cols: m.cols(),
                data: m.data().to_vec(),
            })
        })
        .collect()
}

fn decode_op(
    rs: &RootSystem,
    layout: &Layout,
    p: u64,
    side: Side,
    root: usize,
    k: i64,
    raw: &[BlockPayload],
) -> Result<GradedOp<u64>> {
    let n = layout.num_weights();
    let shift = rs
        .root_weight(root)
        .scale(if side == Side::E { k } else { -k });
    let mut blocks: Vec<Option<(usize, Matrix<u64>)>> = vec![None; n];
    for b in raw {
        let bad = |what: &str| Error::Cache(format!("block {}->{}: {what}", b.src, b.tgt));
        if b.src >= n || b.tgt >= n || blocks[b.src].is_some() {
            return Err(bad("index out of range or repeated"));
        }
        if layout.weight(b.tgt) != &layout.weight(b.src).add(&shift) {
            return Err(bad("target weight inconsistent with the root"));
        }
        if b.rows != layout.dim_at(b.tgt)
            || b.cols != layout.dim_at(b.src)
            || b.rows.checked_mul(b.cols) != Some(b.data.len())
        {
            return Err(bad("shape"));
        }
        if b.data.iter().any(|&x| x >= p) {
            return Err(bad("entry not reduced"));
        }
        blocks[b.src] = Some((b.tgt, Matrix::from_vec(b.rows, b.cols, b.data.clone())));
    }
    Ok(GradedOp::from_blocks(blocks))
}

/// How a module was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Miss,
    /// a file existed but did not match the key or failed validation
    Replaced,
}

#[derive(Clone, Debug)]
pub struct ModuleCache {
    dir: PathBuf,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl ModuleCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ModuleCache { dir: dir.into() }
    }

    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_DIR_ENV)
            .filter(|v| !v.is_empty())
            .map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.json", key.digest()))
    }

    /// Returns the cached module if a valid entry exists.
    pub fn load(
        &self,
        rs: &Arc<RootSystem>,
        lambda: &Weight,
        p: u64,
    ) -> Result<Option<WeylModuleP>> {
        let key = CacheKey::new(rs, lambda, p);
        let path = self.path_for(&key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        match CacheEntry::from_json(&text).and_then(|e| e.decode(rs, &key)) {
            Ok(m) => Ok(Some(m)),
            Err(e) => {
                log::warn!("discarding cache entry {}: {e}", path.display());
                Ok(None)
            }
        }
    }

    /// Writes the entry to a temporary file in the cache directory and renames it
    /// into place.
    pub fn store(&self, rs: &RootSystem, m: &WeylModuleP) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let entry = CacheEntry::encode(rs, m);
        let path = self.dir.join(format!("{}.json", entry.key));
        let tmp = self.dir.join(format!(
            ".{}.{}.{}.tmp",
            entry.key,
            std::process::id(),
            TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        let written = (|| -> std::io::Result<()> {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(entry.to_json().as_bytes())?;
            f.sync_all()?;
            fs::rename(&tmp, &path)
        })();
        if let Err(e) = written {
            let _ = fs::remove_file(&tmp);
            return Err(e.into());
        }
        Ok(path)
    }

    /// Loads the module or builds and stores it.
    pub fn weyl_module(
        &self,
        rs: &Arc<RootSystem>,
        lambda: &Weight,
        p: u64,
        cap: u128,
    ) -> Result<(WeylModuleP, CacheStatus)> {
        let existed = self.path_for(&CacheKey::new(rs, lambda, p)).exists();
        if let Some(m) = self.load(rs, lambda, p)? {
            return Ok((m, CacheStatus::Hit));
        }
        let m = weyl_module_capped(rs, lambda, p, cap)?;
        self.store(rs, &m)?;
        Ok((
            m,
            if existed {
                CacheStatus::Replaced
            } else {
                CacheStatus::Miss
            },
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weylmod::weyl_module;

    fn g2() -> Arc<RootSystem> {
        Arc::new(RootSystem::from_label("G2").unwrap())
    }

    #[test]
    fn roundtrip_is_byte_identical_and_faithful() {
        let rs = g2();
        let m = weyl_module(&rs, &Weight(vec![1, 0]), 7).unwrap();
        let entry = CacheEntry::encode(&rs, &m);
        let json = entry.to_json();
        let back = CacheEntry::from_json(&json).unwrap();
        assert_eq!(back.to_json(), json);
        let m2 = back
            .decode(&rs, &CacheKey::new(&rs, &Weight(vec![1, 0]), 7))
            .unwrap();
        assert_eq!(m2.dim(), m.dim());
        for b in 0..rs.num_positive() {
            for side in [Side::E, Side::F] {
                assert_eq!(
                    m2.module().max_power(side, b),
                    m.module().max_power(side, b)
                );
                for k in 1..=m.module().max_power(side, b) {
                    assert_eq!(m2.module().op(side, b, k), m.module().op(side, b, k));
                }
            }
        }
    }

    #[test]
    fn mismatched_key_is_not_decoded() {
        let rs = g2();
        let m = weyl_module(&rs, &Weight(vec![1, 0]), 7).unwrap();
        let entry = CacheEntry::encode(&rs, &m);
        assert!(entry
            .decode(&rs, &CacheKey::new(&rs, &Weight(vec![1, 0]), 11))
            .is_err());
        let mut forged = entry.clone();
        forged.key_input.code_version = "0.0.0".into();
        assert!(forged
            .decode(&rs, &CacheKey::new(&rs, &Weight(vec![1, 0]), 7))
            .is_err());
    }

    #[test]
    fn store_then_hit() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ModuleCache::new(dir.path());
        let rs = g2();
        let w = Weight(vec![0, 1]);
        let (m, s) = cache.weyl_module(&rs, &w, 11, 1 << 20).unwrap();
        assert_eq!(s, CacheStatus::Miss);
        let (m2, s2) = cache.weyl_module(&rs, &w, 11, 1 << 20).unwrap();
        assert_eq!(s2, CacheStatus::Hit);
        assert_eq!(m.dim(), m2.dim());
        let files: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
        assert_eq!(files.len(), 1);
    }

    #[test]
    fn corrupt_file_is_replaced() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ModuleCache::new(dir.path());
        let rs = g2();
        let w = Weight(vec![1, 0]);
        fs::write(cache.path_for(&CacheKey::new(&rs, &w, 5)), "{\"key\":1}").unwrap();
        let (_, s) = cache.weyl_module(&rs, &w, 5, 1 << 20).unwrap();
        assert_eq!(s, CacheStatus::Replaced);
        assert!(cache.load(&rs, &w, 5).unwrap().is_some());
    }
}
