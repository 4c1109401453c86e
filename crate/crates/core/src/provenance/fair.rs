//! FAIR metadata descriptor, schema `veritas_fair_v1`.
//!
//! JSON with fields in the order `schema, identifier, title, creators,
//! license, datasets, keywords, harness_version, manifest_sha256`; each
//! dataset is `{name, source, sha256}` with a lowercase hex SHA-256 of the
//! dataset file's bytes.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::checksum::{is_sha256_hex, sha256_file};
use crate::error::{Error, Result};

pub const FAIR_SCHEMA: &str = "veritas_fair_v1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetReference {
    pub name: String,
    /// URL, DOI or path the dataset can be obtained from.
    pub source: String,
    pub sha256: String,
}

impl DatasetReference {
    /// Reference a local file, checksumming its bytes.
    pub fn from_file(name: &str, path: &Path) -> Result<Self> {
        Ok(DatasetReference { name: name.into(), source: path.display().to_string(), sha256: sha256_file(path)? })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FairDescriptor {
    pub schema: String,
    pub identifier: String,
    pub title: String,
    #[serde(default)]
    pub creators: Vec<String>,
    pub license: String,
    #[serde(default)]
    pub datasets: Vec<DatasetReference>,
    #[serde(default)]
    pub keywords: Vec<String>,
    pub harness_version: String,
    #[serde(default)]
    pub manifest_sha256: String,
}

impl FairDescriptor {
    pub fn new(identifier: &str, title: &str, license: &str) -> Self {
        FairDescriptor {
            schema: FAIR_SCHEMA.into(),
            identifier: identifier.into(),
            title: title.into(),
            creators: Vec::new(),
            license: license.into(),
            datasets: Vec::new(),
            keywords: Vec::new(),
            harness_version: crate::HARNESS_VERSION.into(),
            manifest_sha256: String::new(),
        }
    }

    pub fn with_manifest(mut self, manifest: &Path) -> Result<Self> {
        self.manifest_sha256 = sha256_file(manifest)?;
        Ok(self)
    }

    /// Reasons the descriptor does not support a FAIR data claim; empty
    /// when it does.
    pub fn completeness_issues(&self) -> Vec<String> {
        let mut issues = Vec::new();
        if self.schema != FAIR_SCHEMA {
            issues.push(format!("schema is {:?}, expected {FAIR_SCHEMA}", self.schema));
        }
        if self.identifier.trim().is_empty() {
            issues.push("identifier missing".into());
        }
        if self.license.trim().is_empty() {
            issues.push("license missing".into());
        }
        if self.datasets.is_empty() {
            issues.push("no dataset references".into());
        }
        for (i, d) in self.datasets.iter().enumerate() {
            if d.name.trim().is_empty() || d.source.trim().is_empty() {
                issues.push(format!("dataset {i} lacks a name or source"));
            }
            if !is_sha256_hex(&d.sha256) {
                issues.push(format!("dataset {i} lacks a SHA-256 checksum"));
            }
        }
        issues
    }

    pub fn is_complete(&self) -> bool {
        self.completeness_issues().is_empty()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        fs::write(path, s).map_err(|e| Error::io(format!("writing {}", path.display()), e))
    }
}
