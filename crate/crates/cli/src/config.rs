use std::path::Path;

use serde::{Deserialize, Serialize};

/// Schema version understood by this build.
pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub version: u32,
    /// Report destination; the `--out` flag takes precedence.
    #[serde(default)]
    pub out: Option<String>,
    /// Worker threads; the `--jobs` flag takes precedence.
    #[serde(default)]
    pub jobs: Option<usize>,
    #[serde(default, rename = "case")]
    pub cases: Vec<CaseSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CaseSpec {
    Arr {
        #[serde(default)]
        id: Option<String>,
        n: u32,
        prime: u32,
        bundle: String,
    },
    ArrRelative {
        #[serde(default)]
        id: Option<String>,
        m: u32,
        n: u32,
        prime: u32,
        bundle: String,
    },
    Tau {
        #[serde(default)]
        id: Option<String>,
        rank: u32,
        prime: u32,
        /// Also run the direct-sum check `τ(E' ⊕ E'') = τ(E') ⊗ τ(E'')` with
        /// this split of the rank.
        #[serde(default)]
        split: Option<u32>,
    },
    Frobenius {
        #[serde(default)]
        id: Option<String>,
        #[serde(default)]
        vars: Option<u32>,
        prime: u32,
        #[serde(default)]
        hypersurface: Option<String>,
        #[serde(default)]
        samples: Option<String>,
    },
    Equivariant {
        #[serde(default)]
        id: Option<String>,
        l: u32,
        omega: String,
        #[serde(default = "default_ambient")]
        ambient: String,
    },
    Properties {
        #[serde(default)]
        id: Option<String>,
        property: String,
        seed: u64,
        #[serde(default = "default_count")]
        count: u32,
        #[serde(default)]
        n: Option<u32>,
        #[serde(default)]
        prime: Option<u32>,
    },
}

fn default_ambient() -> String {
    "p1".into()
}

fn default_count() -> u32 {
    20
}

impl CaseSpec {
    pub fn explicit_id(&self) -> Option<&str> {
        match self {
            CaseSpec::Arr { id, .. }
            | CaseSpec::ArrRelative { id, .. }
            | CaseSpec::Tau { id, .. }
            | CaseSpec::Frobenius { id, .. }
            | CaseSpec::Equivariant { id, .. }
            | CaseSpec::Properties { id, .. } => id.as_deref(),
        }
    }
}

impl SuiteConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        let config: SuiteConfig = toml::from_str(text).map_err(|e| e.to_string())?;
        if config.version != CONFIG_VERSION {
            return Err(format!(
                "unsupported config version {} (expected {CONFIG_VERSION})",
                config.version
            ));
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}
