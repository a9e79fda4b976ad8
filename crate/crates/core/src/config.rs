//! Tool configuration: a TOML document, overridable from the command line.
//!
//! ```toml
//! scale = "unit"             # or "polar"
//! subset = "subset.txt"      # relative to this file
//!
//! [basic_emotions]           # term alias or explicit [v, a, d] override
//! worried = "anxious"
//! neutral = [0.0, 0.0, 0.0]
//!
//! [clustering]
//! max_iterations = 300
//! tolerance = 1e-9
//! pin_neutral = false
//!
//! [open_vocab]
//! radius = 0.25
//! exclude = []
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::clustering::KMeansParams;
use crate::emotion::BasicEmotion;
use crate::error::{Error, Result};
use crate::lexicon::{EmotionSource, LexiconConfig, NativeScale};
use crate::transcode::DEFAULT_RADIUS;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    scale: Option<NativeScale>,
    subset: Option<PathBuf>,
    #[serde(default)]
    basic_emotions: BTreeMap<String, EmotionSource>,
    #[serde(default)]
    clustering: ClusteringSection,
    #[serde(default)]
    open_vocab: OpenVocabSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClusteringSection {
    max_iterations: Option<usize>,
    tolerance: Option<f64>,
    pin_neutral: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OpenVocabSection {
    radius: Option<f64>,
    exclude: Option<Vec<String>>,
}

/// Fully resolved settings shared by every command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Settings {
    pub scale: NativeScale,
    #[serde(skip)]
    pub subset: Option<PathBuf>,
    pub basic_emotions: [EmotionSource; 6],
    pub clustering: KMeansParams,
    pub radius: f64,
    pub exclude: Vec<String>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            scale: NativeScale::default(),
            subset: None,
            basic_emotions: LexiconConfig::default_sources(),
            clustering: KMeansParams::default(),
            radius: DEFAULT_RADIUS,
            exclude: Vec::new(),
        }
    }
}

impl Settings {
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        let mut settings = Settings::default();
        if let Some(scale) = file.scale {
            settings.scale = scale;
        }
        settings.subset = file.subset.map(|p| base_dir.join(p));
        for (name, source) in file.basic_emotions {
            let emotion: BasicEmotion = name
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("unknown basic emotion `{name}`")))?;
            settings.basic_emotions[emotion.index()] = source;
        }
        let c = file.clustering;
        if let Some(v) = c.max_iterations {
            settings.clustering.max_iterations = v;
        }
        if let Some(v) = c.tolerance {
            settings.clustering.tolerance = v;
        }
        if let Some(v) = c.pin_neutral {
            settings.clustering.pin_neutral = v;
        }
        if let Some(r) = file.open_vocab.radius {
            settings.radius = r;
        }
        if let Some(ex) = file.open_vocab.exclude {
            settings.exclude = ex.into_iter().map(|t| t.to_lowercase()).collect();
        }
        settings.validate()?;
        Ok(settings)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml(&text, base)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius.is_finite() && self.radius >= 0.0) {
            return Err(Error::InvalidRadius(self.radius));
        }
        if !(self.clustering.tolerance.is_finite() && self.clustering.tolerance >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerance must be non-negative, got {}",
                self.clustering.tolerance
            )));
        }
        Ok(())
    }

    pub fn lexicon_config(&self, subset_terms: Option<Vec<String>>) -> LexiconConfig {
        LexiconConfig {
            native_scale: self.scale,
            subset_terms,
            basic_emotions: self.basic_emotions.clone(),
        }
    }

    /// SHA-256 of the canonical JSON form of these settings (subset identity
    /// is tracked separately by the term hash).
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("settings serialize");
        hex::encode(Sha256::digest(&json))
    }
}
