use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use blockineq::Tolerance;

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Provenance block embedded in every report.
///
/// The timestamp comes from `SOURCE_DATE_EPOCH` when set, so that repeated
/// runs with the same flags produce identical bytes.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub version: &'static str,
    pub seed: Option<u64>,
    pub tolerance: Tolerance,
    pub inputs: Vec<InputDigest>,
    pub timestamp: Option<String>,
}

impl RunManifest {
    pub fn new(command: Vec<String>, seed: Option<u64>, tolerance: Tolerance) -> Self {
        Self {
            command,
            version: env!("CARGO_PKG_VERSION"),
            seed,
            tolerance,
            inputs: Vec::new(),
            timestamp: std::env::var("SOURCE_DATE_EPOCH").ok(),
        }
    }

    pub fn add_input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: format!("{:x}", Sha256::digest(bytes)),
        });
    }
}

#[derive(Serialize)]
pub struct Envelope<'a, R: Serialize> {
    pub manifest: &'a RunManifest,
    pub report: R,
}
