use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// The six discrete classes. Ordinal order is fixed and doubles as the
/// cluster index each emotion seeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasicEmotion {
    Happy,
    Sad,
    Worried,
    Surprised,
    Angry,
    Neutral,
}

impl BasicEmotion {
    pub const COUNT: usize = 6;

    pub const ALL: [BasicEmotion; 6] = [
        BasicEmotion::Happy,
        BasicEmotion::Sad,
        BasicEmotion::Worried,
        BasicEmotion::Surprised,
        BasicEmotion::Angry,
        BasicEmotion::Neutral,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            BasicEmotion::Happy => "happy",
            BasicEmotion::Sad => "sad",
            BasicEmotion::Worried => "worried",
            BasicEmotion::Surprised => "surprised",
            BasicEmotion::Angry => "angry",
            BasicEmotion::Neutral => "neutral",
        }
    }
}

impl fmt::Display for BasicEmotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BasicEmotion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lowered = s.trim().to_lowercase();
        Self::ALL
            .iter()
            .copied()
            .find(|e| e.name() == lowered)
            .ok_or_else(|| Error::UnknownLabel(s.to_string()))
    }
}

impl Serialize for BasicEmotion {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for BasicEmotion {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
