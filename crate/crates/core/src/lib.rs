//! Discrete and continuous emotion labels in one valence-arousal-dominance space.
//!
//! A VAD lexicon is rescaled to `[-1, 1]` and embedded as an [`EmotionSpace`].
//! Seeded six-cluster k-means turns the space into a classifier that maps any
//! VAD point to one of the basic emotions, while radius queries produce
//! open-vocabulary emotion sets. The [`harness`] module scores prediction
//! files with regression and classification metrics.

pub mod clustering;
pub mod config;
pub mod emotion;
pub mod error;
pub mod harness;
pub mod lexicon;
pub mod metrics;
pub mod similarity;
pub mod space;
pub mod transcode;

pub use clustering::{assign, kmeans_seeded, wcss, ClusterModel, KMeansParams};
pub use config::Settings;
pub use emotion::BasicEmotion;
pub use error::{Error, Result};
pub use lexicon::{basic_emotion_seed, build_space, parse_lexicon, to_polar, LexiconConfig, NativeScale};
pub use space::{l2_distance, EmotionSpace, Neighbor, VadPoint};
pub use transcode::{discrete_to_vad, open_vocab, vad_to_discrete, OpenVocabResult, DEFAULT_RADIUS};
