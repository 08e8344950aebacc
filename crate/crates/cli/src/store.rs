//! Content-addressed run store.
//!
//! Layout: `<root>/<key>/manifest.json` and `<root>/<key>/outputs/<name>`.
//! The key hashes everything that determines the outputs (tool version,
//! arguments and the bytes of every input file), never the wall clock.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const STORE_ENV: &str = "CHAINDYN_STORE";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    pub fn new(name: impl Into<String>, bytes: impl Into<Vec<u8>>) -> Self {
        Artifact { name: name.into(), bytes: bytes.into() }
    }
}

/// File contents read during a run, keyed by the path given on the command
/// line. On replay the recorded contents are served instead of the files.
#[derive(Clone, Debug, Default)]
pub struct Inputs {
    files: BTreeMap<String, String>,
    frozen: bool,
}

impl Inputs {
    pub fn replaying(files: BTreeMap<String, String>) -> Self {
        Inputs { files, frozen: true }
    }

    pub fn read(&mut self, path: &Path) -> Result<String> {
        let key = path.to_string_lossy().into_owned();
        if let Some(text) = self.files.get(&key) {
            return Ok(text.clone());
        }
        if self.frozen {
            bail!("input {key} is not recorded in the manifest");
        }
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {key}"))?;
        self.files.insert(key, text.clone());
        Ok(text)
    }

    pub fn files(&self) -> &BTreeMap<String, String> {
        &self.files
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub args: Vec<String>,
    pub inputs: BTreeMap<String, String>,
    /// sha256 of the `--system` config, when there is one.
    pub system_hash: Option<String>,
    /// `--boxes`, `--delta`, `--schedule` and `--grid` values as given.
    pub resolution: BTreeMap<String, String>,
    /// Output name to sha256.
    pub outputs: BTreeMap<String, String>,
    pub wall_clock_ms: u64,
}

#[derive(Serialize)]
struct KeyMaterial<'a> {
    tool: &'a str,
    version: &'a str,
    args: &'a [String],
    inputs: &'a BTreeMap<String, String>,
}

impl Manifest {
    pub fn key(&self) -> String {
        let material = KeyMaterial { tool: &self.tool, version: &self.version, args: &self.args, inputs: &self.inputs };
        sha256_hex(&serde_json::to_vec(&material).expect("plain data serializes"))
    }
}

pub struct Store {
    root: PathBuf,
}

impl Store {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Store { root: root.into() }
    }

    /// `$CHAINDYN_STORE`, else `.chaindyn-store` in the working directory.
    pub fn from_env() -> Self {
        Store::new(std::env::var_os(STORE_ENV).map_or_else(|| PathBuf::from(".chaindyn-store"), PathBuf::from))
    }

    pub fn persist(&self, manifest: &Manifest, artifacts: &[Artifact]) -> Result<String> {
        let key = manifest.key();
        let dir = self.root.join(&key);
        fs::create_dir_all(dir.join("outputs")).with_context(|| format!("cannot create {}", dir.display()))?;
        for a in artifacts {
            fs::write(dir.join("outputs").join(&a.name), &a.bytes)?;
        }
        let text = serde_json::to_string_pretty(manifest)? + "\n";
        fs::write(dir.join("manifest.json"), text)?;
        Ok(key)
    }

    /// Loads an entry and checks it against its own hashes.
    pub fn load(&self, key: &str) -> Result<(Manifest, Vec<Artifact>)> {
        let dir = self.root.join(key);
        let text = fs::read_to_string(dir.join("manifest.json"))
            .with_context(|| format!("no stored run {key} under {}", self.root.display()))?;
        let manifest: Manifest =
            serde_json::from_str(&text).map_err(|e| anyhow!("integrity error: unreadable manifest: {e}"))?;
        if manifest.key() != key {
            bail!("integrity error: manifest of {key} hashes to {}", manifest.key());
        }
        if let Some(h) = &manifest.system_hash {
            if !manifest.inputs.values().any(|t| &sha256_hex(t.as_bytes()) == h) {
                bail!("integrity error: recorded system config does not match its hash");
            }
        }
        let mut artifacts = Vec::new();
        for (name, hash) in &manifest.outputs {
            let bytes = fs::read(dir.join("outputs").join(name))
                .map_err(|e| anyhow!("integrity error: output {name} unreadable: {e}"))?;
            if &sha256_hex(&bytes) != hash {
                bail!("integrity error: output {name} does not match its hash");
            }
            artifacts.push(Artifact { name: name.clone(), bytes });
        }
        Ok((manifest, artifacts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifest(args: &[&str]) -> Manifest {
        Manifest {
            tool: "chaindyn".into(),
            version: "0".into(),
            args: args.iter().map(|s| s.to_string()).collect(),
            inputs: BTreeMap::new(),
            system_hash: None,
            resolution: BTreeMap::new(),
            outputs: BTreeMap::new(),
            wall_clock_ms: 0,
        }
    }

    #[test]
    fn key_ignores_the_clock() {
        let a = manifest(&["decompose", "--delta", "1/8"]);
        let b = Manifest { wall_clock_ms: 99, ..a.clone() };
        assert_eq!(a.key(), b.key());
        assert_ne!(a.key(), manifest(&["decompose", "--delta", "1/16"]).key());
    }

    #[test]
    fn tampered_outputs_are_detected() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::new(dir.path());
        let mut m = manifest(&["thick"]);
        let art = Artifact::new("out.json", "{}\n");
        m.outputs.insert(art.name.clone(), sha256_hex(&art.bytes));
        let key = store.persist(&m, &[art]).unwrap();
        assert!(store.load(&key).is_ok());
        fs::write(dir.path().join(&key).join("outputs/out.json"), "[]\n").unwrap();
        assert!(store.load(&key).unwrap_err().to_string().contains("integrity"));
    }
}
