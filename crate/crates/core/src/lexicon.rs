//! VAD lexicon ingestion: tab-separated parsing, polar rescaling, subset
//! selection and resolution of the six basic-emotion seeds.

use std::collections::{HashMap, HashSet};
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::emotion::BasicEmotion;
use crate::error::{Error, Result};
use crate::space::{EmotionSpace, VadPoint};

const SCALE_TOLERANCE: f64 = 1e-12;

/// Range the scores in a lexicon file are expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NativeScale {
    /// `[0, 1]`, the convention of the published NRC-VAD lexicon.
    #[default]
    Unit,
    /// `[-1, 1]`, already polar.
    Polar,
}

impl NativeScale {
    fn bounds(self) -> (f64, f64) {
        match self {
            NativeScale::Unit => (0.0, 1.0),
            NativeScale::Polar => (-1.0, 1.0),
        }
    }

    fn label(self) -> &'static str {
        match self {
            NativeScale::Unit => "[0, 1]",
            NativeScale::Polar => "[-1, 1]",
        }
    }
}

/// One lexicon record as read from the file, before rescaling.
#[derive(Debug, Clone, PartialEq)]
pub struct RawLexiconEntry {
    pub term: String,
    pub valence: f64,
    pub arousal: f64,
    pub dominance: f64,
}

/// Where a basic emotion's seed point comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EmotionSource {
    /// Look the term up in the lexicon.
    Term(String),
    /// Use this point verbatim.
    Point(VadPoint),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LexiconConfig {
    pub native_scale: NativeScale,
    pub subset_terms: Option<Vec<String>>,
    /// Indexed by [`BasicEmotion::index`].
    pub basic_emotions: [EmotionSource; 6],
}

impl LexiconConfig {
    /// Each emotion resolves to its own lexicon term, except neutral which is
    /// pinned to the origin.
    pub fn default_sources() -> [EmotionSource; 6] {
        BasicEmotion::ALL.map(|e| match e {
            BasicEmotion::Neutral => EmotionSource::Point(VadPoint::ORIGIN),
            other => EmotionSource::Term(other.name().to_string()),
        })
    }
}

impl Default for LexiconConfig {
    fn default() -> Self {
        LexiconConfig {
            native_scale: NativeScale::default(),
            subset_terms: None,
            basic_emotions: Self::default_sources(),
        }
    }
}

/// Maps a unit-interval score onto `[-1, 1]` via `2x - 1`.
pub fn to_polar(score: f64) -> Result<f64> {
    if !(-SCALE_TOLERANCE..=1.0 + SCALE_TOLERANCE).contains(&score) {
        return Err(Error::ScoreOutOfRange {
            value: score,
            range: NativeScale::Unit.label(),
            context: None,
        });
    }
    Ok((2.0 * score - 1.0).clamp(-1.0, 1.0))
}

/// Parses a `term<TAB>valence<TAB>arousal<TAB>dominance` file.
///
/// A first line whose score fields are not numeric is taken as a header.
/// Blank lines are skipped. Terms are lowercased.
pub fn parse_lexicon<R: BufRead>(source: R, scale: NativeScale) -> Result<Vec<RawLexiconEntry>> {
    let (lo, hi) = scale.bounds();
    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    let mut first_record = true;

    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::MalformedLine {
            line: line_no,
            reason: e.to_string(),
        })?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(Error::MalformedLine {
                line: line_no,
                reason: format!("expected 4 tab-separated fields, found {}", fields.len()),
            });
        }
        let parsed: Vec<Option<f64>> = fields[1..].iter().map(|f| f.trim().parse().ok()).collect();
        let is_header = first_record && parsed.iter().all(Option::is_none);
        first_record = false;
        if is_header {
            continue;
        }

        let term = fields[0].trim().to_lowercase();
        if term.is_empty() {
            return Err(Error::MalformedLine {
                line: line_no,
                reason: "empty term".into(),
            });
        }
        let mut scores = [0.0; 3];
        for (slot, (value, raw)) in scores.iter_mut().zip(parsed.iter().zip(&fields[1..])) {
            let value = value.ok_or_else(|| Error::MalformedLine {
                line: line_no,
                reason: format!("unparseable score `{raw}`"),
            })?;
            if !(lo - SCALE_TOLERANCE..=hi + SCALE_TOLERANCE).contains(&value) {
                return Err(Error::ScoreOutOfRange {
                    value,
                    range: scale.label(),
                    context: Some(format!("line {line_no}, term `{term}`")),
                });
            }
            *slot = value;
        }
        if !seen.insert(term.clone()) {
            return Err(Error::DuplicateTerm { line: line_no, term });
        }
        entries.push(RawLexiconEntry {
            term,
            valence: scores[0],
            arousal: scores[1],
            dominance: scores[2],
        });
    }
    Ok(entries)
}

/// Reads a subset list: one term per line, blank lines ignored.
pub fn parse_subset<R: BufRead>(source: R) -> Result<Vec<String>> {
    let mut terms = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line = line.map_err(|e| Error::MalformedLine {
            line: idx + 1,
            reason: e.to_string(),
        })?;
        let term = line.trim();
        if !term.is_empty() {
            terms.push(term.to_lowercase());
        }
    }
    Ok(terms)
}

fn rescale(entry: &RawLexiconEntry, scale: NativeScale) -> Result<VadPoint> {
    let [v, a, d] = [entry.valence, entry.arousal, entry.dominance];
    let polar = match scale {
        NativeScale::Unit => [to_polar(v)?, to_polar(a)?, to_polar(d)?],
        NativeScale::Polar => [v, a, d].map(|x| x.clamp(-1.0, 1.0)),
    };
    VadPoint::new(polar[0], polar[1], polar[2])
}

/// Builds the emotion space: rescales to polar once, keeps the configured
/// subset and resolves the six basic-emotion seeds.
///
/// Seed terms are looked up in the full lexicon, so a basic emotion does not
/// have to be part of the subset.
pub fn build_space(entries: &[RawLexiconEntry], config: &LexiconConfig) -> Result<EmotionSpace> {
    let mut polar: HashMap<&str, VadPoint> = HashMap::with_capacity(entries.len());
    for entry in entries {
        polar.insert(entry.term.as_str(), rescale(entry, config.native_scale)?);
    }

    let kept: Vec<(String, VadPoint)> = match &config.subset_terms {
        Some(subset) => {
            let mut seen = HashSet::new();
            let mut kept = Vec::with_capacity(subset.len());
            for term in subset {
                let key = term.to_lowercase();
                if !seen.insert(key.clone()) {
                    continue;
                }
                let point = polar
                    .get(key.as_str())
                    .ok_or_else(|| Error::SubsetTermMissing(term.clone()))?;
                kept.push((key, *point));
            }
            kept
        }
        None => entries
            .iter()
            .map(|e| (e.term.clone(), polar[e.term.as_str()]))
            .collect(),
    };

    let mut seeds = [VadPoint::ORIGIN; 6];
    for emotion in BasicEmotion::ALL {
        seeds[emotion.index()] = match &config.basic_emotions[emotion.index()] {
            EmotionSource::Point(p) => *p,
            EmotionSource::Term(term) => *polar
                .get(term.to_lowercase().as_str())
                .ok_or_else(|| Error::BasicEmotionUnresolvable(emotion.name().to_string()))?,
        };
    }

    EmotionSpace::new(kept, seeds)
}

/// The resolved seed point for a basic emotion.
pub fn basic_emotion_seed(space: &EmotionSpace, emotion: BasicEmotion) -> VadPoint {
    space.seed(emotion)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, scale: NativeScale) -> Result<Vec<RawLexiconEntry>> {
        parse_lexicon(text.as_bytes(), scale)
    }

    #[test]
    fn direct_field_mapping() {
        let e = parse("delighted\t0.91\t0.75\t0.60\n", NativeScale::Unit).unwrap();
        assert_eq!(
            e,
            vec![RawLexiconEntry {
                term: "delighted".into(),
                valence: 0.91,
                arousal: 0.75,
                dominance: 0.60
            }]
        );
    }

    #[test]
    fn empty_stream_is_empty() {
        assert!(parse("", NativeScale::Unit).unwrap().is_empty());
    }

    #[test]
    fn header_detected_and_terms_lowercased() {
        let e = parse("Word\tValence\tArousal\tDominance\nHappy\t1\t0.7\t0.7\n", NativeScale::Unit).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].term, "happy");
    }

    #[test]
    fn header_only_allowed_on_first_line() {
        let err = parse("happy\t1\t0.7\t0.7\nWord\tV\tA\tD\n", NativeScale::Unit).unwrap_err();
        assert!(matches!(err, Error::MalformedLine { line: 2, .. }));
    }

    #[test]
    fn wrong_field_count_reports_line() {
        let err = parse("a\t0.1\t0.2\t0.3\nb\t0.1\t0.2\n", NativeScale::Unit).unwrap_err();
        assert!(matches!(err, Error::MalformedLine { line: 2, .. }));
    }

    #[test]
    fn unparseable_number() {
        let err = parse("a\t0.1\tx\t0.3\n", NativeScale::Unit).unwrap_err();
        assert!(matches!(err, Error::MalformedLine { line: 1, .. }));
    }

    #[test]
    fn duplicate_terms_rejected_case_insensitively() {
        let err = parse("Calm\t0.8\t0.1\t0.5\ncalm\t0.8\t0.1\t0.5\n", NativeScale::Unit).unwrap_err();
        assert!(matches!(err, Error::DuplicateTerm { line: 2, .. }));
    }

    #[test]
    fn range_checked_against_scale() {
        assert!(matches!(
            parse("a\t-0.5\t0.2\t0.3\n", NativeScale::Unit),
            Err(Error::ScoreOutOfRange { .. })
        ));
        assert!(parse("a\t-0.5\t0.2\t0.3\n", NativeScale::Polar).is_ok());
        assert!(matches!(
            parse("a\t1.5\t0.2\t0.3\n", NativeScale::Polar),
            Err(Error::ScoreOutOfRange { .. })
        ));
    }

    #[test]
    fn polar_rescale_values() {
        assert_eq!(to_polar(0.5).unwrap(), 0.0);
        assert_eq!(to_polar(1.0).unwrap(), 1.0);
        assert_eq!(to_polar(0.0).unwrap(), -1.0);
        assert_eq!(to_polar(0.75).unwrap(), 0.5);
        assert!(to_polar(1.0 + 1e-13).is_ok());
        assert!(matches!(to_polar(1.1), Err(Error::ScoreOutOfRange { .. })));
        assert!(to_polar(-0.01).is_err());
        assert!(to_polar(f64::NAN).is_err());
    }

    const SMALL: &str = "happy\t1.0\t0.75\t0.75\nsad\t0.25\t0.25\t0.25\nworried\t0.1\t0.8\t0.3\n\
surprised\t0.8\t0.9\t0.5\nangry\t0.1\t0.9\t0.6\ncalm\t0.8\t0.1\t0.5\n";

    #[test]
    fn build_rescales_and_resolves_seeds() {
        let entries = parse(SMALL, NativeScale::Unit).unwrap();
        let space = build_space(&entries, &LexiconConfig::default()).unwrap();
        assert_eq!(space.len(), 6);
        assert_eq!(basic_emotion_seed(&space, BasicEmotion::Neutral), VadPoint::ORIGIN);
        assert_eq!(
            basic_emotion_seed(&space, BasicEmotion::Happy),
            VadPoint::new(1.0, 0.5, 0.5).unwrap()
        );
        assert_eq!(space.get("sad").unwrap(), VadPoint::new(-0.5, -0.5, -0.5).unwrap());
    }

    #[test]
    fn subset_selection() {
        let entries = parse(SMALL, NativeScale::Unit).unwrap();
        let config = LexiconConfig {
            subset_terms: Some(vec!["Calm".into(), "sad".into()]),
            ..Default::default()
        };
        let space = build_space(&entries, &config).unwrap();
        assert_eq!(space.terms().collect::<Vec<_>>(), ["calm", "sad"]);
        // seeds still resolve from the full lexicon
        assert_eq!(space.seed(BasicEmotion::Happy), VadPoint::new(1.0, 0.5, 0.5).unwrap());

        let missing = LexiconConfig {
            subset_terms: Some(vec!["calm".into(), "jealous".into()]),
            ..Default::default()
        };
        assert_eq!(
            build_space(&entries, &missing).unwrap_err(),
            Error::SubsetTermMissing("jealous".into())
        );
    }

    #[test]
    fn unresolvable_basic_emotion() {
        let entries = parse("happy\t1\t0.5\t0.5\n", NativeScale::Unit).unwrap();
        assert_eq!(
            build_space(&entries, &LexiconConfig::default()).unwrap_err(),
            Error::BasicEmotionUnresolvable("sad".into())
        );
    }

    #[test]
    fn aliases_and_overrides() {
        let text = SMALL.replace("worried", "anxious");
        let entries = parse(&text, NativeScale::Unit).unwrap();
        let mut config = LexiconConfig::default();
        config.basic_emotions[BasicEmotion::Worried.index()] = EmotionSource::Term("Anxious".into());
        config.basic_emotions[BasicEmotion::Happy.index()] =
            EmotionSource::Point(VadPoint::new(0.9, 0.4, 0.4).unwrap());
        let space = build_space(&entries, &config).unwrap();
        assert_eq!(space.seed(BasicEmotion::Worried), space.get("anxious").unwrap());
        assert_eq!(space.seed(BasicEmotion::Happy), VadPoint::new(0.9, 0.4, 0.4).unwrap());
    }

    #[test]
    fn polar_input_is_not_rescaled_again() {
        let entries = parse(SMALL, NativeScale::Unit).unwrap();
        let space = build_space(&entries, &LexiconConfig::default()).unwrap();
        let again = parse(&space.to_tsv(), NativeScale::Polar).unwrap();
        let config = LexiconConfig {
            native_scale: NativeScale::Polar,
            ..Default::default()
        };
        let rebuilt = build_space(&again, &config).unwrap();
        assert_eq!(rebuilt.entries(), space.entries());
    }

    #[test]
    fn subset_file_parsing() {
        let terms = parse_subset("Calm\n\n  sad \n".as_bytes()).unwrap();
        assert_eq!(terms, ["calm", "sad"]);
    }
}
