//! JSON artifacts and the on-disk cache of structure-constant tables.
//!
//! A cache file is a hex SHA-256 line followed by a JSON body; the digest
//! covers the body bytes exactly, so truncation or editing is caught before
//! parsing. Metadata that changes the numbers (word choice, operator
//! variant, precision, law) is stored alongside and compared on load.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::fgl::Fgl;
use crate::schubert::Theory;

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "COBORDIA_CACHE_DIR";

const FORMAT_VERSION: u32 = 1;

pub fn cache_dir_from_env() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

/// One monomial of a coefficient: generator exponents and an integer written in decimal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialJson {
    pub exponents: BTreeMap<String, u32>,
    pub coefficient: String,
}

pub fn coeff_json(law: &Fgl, c: &Coeff) -> Vec<MonomialJson> {
    law.coeff_monomials(c)
        .into_iter()
        .map(|(exps, k)| MonomialJson { exponents: exps.into_iter().collect(), coefficient: k.to_string() })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub w: String,
    pub text: String,
    pub monomials: Vec<MonomialJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductJson {
    pub u: String,
    pub v: String,
    pub terms: Vec<TermJson>,
}

/// Human- and machine-readable structure-constant table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableJson {
    pub meta: CacheMeta,
    pub products: Vec<ProductJson>,
}

pub fn table_json(th: &Theory, table: &[Vec<Vec<Coeff>>]) -> TableJson {
    let words = th.word_table();
    let mut products = Vec::new();
    for u in 0..table.len() {
        for v in u..table.len() {
            let terms = table[u][v]
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(w, c)| TermJson {
                    w: words[w].clone(),
                    text: th.law().format_coeff(c),
                    monomials: coeff_json(th.law(), c),
                })
                .collect();
            products.push(ProductJson { u: words[u].clone(), v: words[v].clone(), terms });
        }
    }
    TableJson { meta: CacheMeta::of(th), products }
}

/// Everything a cached table depends on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheMeta {
    pub version: u32,
    pub group: String,
    pub law: String,
    pub truncation: u32,
    pub precision: u32,
    pub variant: String,
    pub words: Vec<String>,
}

impl CacheMeta {
    pub fn of(th: &Theory) -> Self {
        CacheMeta {
            version: FORMAT_VERSION,
            group: th.root_datum().label(),
            law: th.law().kind().to_string(),
            truncation: th.law().trunc(),
            precision: th.precision(),
            variant: th.variant(),
            words: th.word_table(),
        }
    }

    /// File name keyed by theory only, so a precision or word-table change
    /// lands on the same file and is reported as stale.
    pub fn file_name(&self, kind: &str) -> String {
        let safe: String = format!("{}-{}-d{}", self.group, self.law, self.truncation)
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
            .collect();
        format!("{kind}-{safe}.json")
    }
}

#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    meta: CacheMeta,
    payload: T,
}

/// Writes `payload` under `path` with checksum; the rename makes the write exclusive.
pub fn write_checked<T: Serialize>(path: &Path, meta: &CacheMeta, payload: &T) -> Result<()> {
    let body = serde_json::to_vec(&Envelope { meta: meta.clone(), payload })?;
    let digest = hex::encode(Sha256::digest(&body));
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    static SEQ: AtomicU64 = AtomicU64::new(0);
    let tmp = dir.join(format!(
        ".{}.{}.{}.tmp",
        path.file_name().and_then(|s| s.to_str()).unwrap_or("cache"),
        std::process::id(),
        SEQ.fetch_add(1, Ordering::Relaxed)
    ));
    {
        let mut f = fs::OpenOptions::new().write(true).create_new(true).open(&tmp)?;
        f.write_all(digest.as_bytes())?;
        f.write_all(b"\n")?;
        f.write_all(&body)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Reads a checked file. `Checksum` on corruption, `CacheStale` when the
/// stored metadata differs from `expected`.
pub fn read_checked<T: DeserializeOwned>(path: &Path, expected: &CacheMeta) -> Result<T> {
    let raw = fs::read(path)?;
    let nl = raw
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::Checksum(format!("{}: no header", path.display())))?;
    let (head, body) = (&raw[..nl], &raw[nl + 1..]);
    let digest = hex::encode(Sha256::digest(body));
    if head != digest.as_bytes() {
        return Err(Error::Checksum(format!("{}: digest mismatch", path.display())));
    }
    let env: Envelope<T> = serde_json::from_slice(body)?;
    if &env.meta != expected {
        return Err(Error::CacheStale(describe_mismatch(&env.meta, expected)));
    }
    Ok(env.payload)
}

fn describe_mismatch(got: &CacheMeta, want: &CacheMeta) -> String {
    let mut diffs = Vec::new();
    if got.version != want.version {
        diffs.push(format!("format {} vs {}", got.version, want.version));
    }
    if got.group != want.group || got.law != want.law || got.truncation != want.truncation {
        diffs.push("theory".to_string());
    }
    if got.precision != want.precision {
        diffs.push(format!("precision {} vs {}", got.precision, want.precision));
    }
    if got.variant != want.variant {
        diffs.push("operator variant".to_string());
    }
    if got.words != want.words {
        diffs.push("word table".to_string());
    }
    diffs.join(", ")
}

/// Where a table came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CacheOutcome {
    Hit,
    Computed,
    /// The cached copy was stale and has been replaced.
    Recomputed(String),
}

/// Structure constants through the cache in `dir`.
///
/// Stale metadata triggers a recompute; a checksum failure is returned as an error.
pub fn cached_structure_constants(th: &Theory, dir: Option<&Path>) -> Result<(Vec<Vec<Vec<Coeff>>>, CacheOutcome)> {
    let Some(dir) = dir else {
        return Ok((th.structure_constants()?, CacheOutcome::Computed));
    };
    let meta = CacheMeta::of(th);
    let path = dir.join(meta.file_name("table"));
    let outcome = if path.exists() {
        match read_checked(&path, &meta) {
            Ok(t) => return Ok((t, CacheOutcome::Hit)),
            Err(Error::CacheStale(why)) => CacheOutcome::Recomputed(why),
            Err(e) => return Err(e),
        }
    } else {
        CacheOutcome::Computed
    };
    let table = th.structure_constants()?;
    write_checked(&path, &meta, &table)?;
    Ok((table, outcome))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::RootDatum;
    use crate::schubert::TheoryOptions;
    use std::sync::Arc;

    fn theory() -> Theory {
        let rd = Arc::new(RootDatum::named("SL3").unwrap());
        Theory::new(rd, Arc::new(Fgl::universal(3).unwrap()), &TheoryOptions::default()).unwrap()
    }

    #[test]
    fn roundtrip_and_hit() {
        let dir = tempfile::tempdir().unwrap();
        let th = theory();
        let (t1, o1) = cached_structure_constants(&th, Some(dir.path())).unwrap();
        assert_eq!(o1, CacheOutcome::Computed);
        let (t2, o2) = cached_structure_constants(&th, Some(dir.path())).unwrap();
        assert_eq!(o2, CacheOutcome::Hit);
        assert_eq!(t1, t2);
    }

    #[test]
    fn truncated_file_fails_checksum() {
        let dir = tempfile::tempdir().unwrap();
        let th = theory();
        cached_structure_constants(&th, Some(dir.path())).unwrap();
        let path = dir.path().join(CacheMeta::of(&th).file_name("table"));
        let raw = fs::read(&path).unwrap();
        fs::write(&path, &raw[..raw.len() - 10]).unwrap();
        assert!(matches!(cached_structure_constants(&th, Some(dir.path())), Err(Error::Checksum(_))));
    }

    #[test]
    fn precision_mismatch_signals_stale() {
        let dir = tempfile::tempdir().unwrap();
        let th = theory();
        let table = th.structure_constants().unwrap();
        let path = dir.path().join("t.json");
        write_checked(&path, &CacheMeta::of(&th), &table).unwrap();
        let other = th.with_precision(th.precision() + 1).unwrap();
        let r: Result<Vec<Vec<Vec<Coeff>>>> = read_checked(&path, &CacheMeta::of(&other));
        match r {
            Err(Error::CacheStale(why)) => assert!(why.contains("precision")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn stale_cache_is_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let th = theory();
        cached_structure_constants(&th, Some(dir.path())).unwrap();
        let other = th.with_precision(th.precision() + 1).unwrap();
        let (_, o) = cached_structure_constants(&other, Some(dir.path())).unwrap();
        assert!(matches!(o, CacheOutcome::Recomputed(ref why) if why.contains("precision")));
        let (_, o) = cached_structure_constants(&other, Some(dir.path())).unwrap();
        assert_eq!(o, CacheOutcome::Hit);
    }

    #[test]
    fn integers_are_strings() {
        let th = theory();
        let table = th.structure_constants().unwrap();
        let t = table_json(&th, &table);
        let j = serde_json::to_value(&t).unwrap();
        let mut seen = 0;
        for p in j["products"].as_array().unwrap() {
            for term in p["terms"].as_array().unwrap() {
                for m in term["monomials"].as_array().unwrap() {
                    assert!(m["coefficient"].is_string());
                    seen += 1;
                }
            }
        }
        assert!(seen > 0);
    }
}
