use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use aspectprobe_core::corpus::{attach_opinions, filter_conflicts, parse, Dataset, DatasetMeta, Format, Split};
use aspectprobe_core::strategies::{read_enriched, GeneratedInstance};
use sha2::{Digest, Sha256};

pub fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn read_string(path: &Path) -> Result<String> {
    String::from_utf8(read(path)?).with_context(|| format!("{} is not UTF-8", path.display()))
}

/// Write through a temporary file in the destination directory and rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).with_context(|| format!("cannot write in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn sha256(bytes: &[u8]) -> String {
    hex(&Sha256::digest(bytes))
}

/// Digest of a file, or of a directory's files in name order.
pub fn digest_path(path: &Path) -> Result<String> {
    if !path.is_dir() {
        return Ok(sha256(&read(path)?));
    }
    let mut entries: Vec<PathBuf> = fs::read_dir(path)
        .with_context(|| format!("cannot list {}", path.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    entries.sort();
    let mut h = Sha256::new();
    for p in entries {
        let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        h.update((name.len() as u64).to_le_bytes());
        h.update(name.as_bytes());
        h.update(Sha256::digest(read(&p)?));
    }
    Ok(hex(&h.finalize()))
}

pub fn infer_format(path: &Path, explicit: Option<Format>) -> Format {
    explicit.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("xml") => Format::Xml,
        _ => Format::Jsonl,
    })
}

/// Parse a corpus, attach opinions and drop conflict-labelled aspects.
pub fn load_corpus(path: &Path, format: Option<Format>, opinions: Option<&Path>, meta: &DatasetMeta) -> Result<Dataset> {
    let format = infer_format(path, format);
    let parsed = parse(&read(path)?, format, meta).with_context(|| format!("{}", path.display()))?;
    if !parsed.repairs.is_empty() {
        eprintln!("{}: repaired {} aspect offsets", path.display(), parsed.repairs.len());
    }
    let mut ds = parsed.dataset;
    if let Some(op) = opinions {
        ds = attach_opinions(ds, &read(op)?).with_context(|| format!("{}", op.display()))?;
    }
    Ok(filter_conflicts(ds).0)
}

pub fn meta(domain: &str, split: Split) -> DatasetMeta {
    DatasetMeta {
        domain: domain.to_string(),
        split,
    }
}

pub fn load_enriched(path: &Path) -> Result<Vec<GeneratedInstance>> {
    let instances = read_enriched(&read(path)?).with_context(|| format!("{}", path.display()))?;
    if instances.is_empty() {
        bail!("{} holds no instances", path.display());
    }
    Ok(instances)
}

pub fn model_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}
