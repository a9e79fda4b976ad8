//! Geometry of the 3D valence-arousal-dominance space.
//!
//! All retrieval is an exhaustive scan over the (small) term set. Results are
//! ordered by ascending distance with ties broken by term, so every query is
//! deterministic.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::emotion::BasicEmotion;
use crate::error::{Error, Result};

/// Slack admitted at the edges of `[-1, 1]` for values that went through arithmetic.
pub const RANGE_TOLERANCE: f64 = 1e-9;

/// A point in polar VAD space, each component in `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VadPoint {
    pub valence: f64,
    pub arousal: f64,
    pub dominance: f64,
}

impl VadPoint {
    pub const ORIGIN: VadPoint = VadPoint {
        valence: 0.0,
        arousal: 0.0,
        dominance: 0.0,
    };

    pub fn new(valence: f64, arousal: f64, dominance: f64) -> Result<Self> {
        let p = VadPoint {
            valence,
            arousal,
            dominance,
        };
        for c in p.to_array() {
            if !c.is_finite() {
                return Err(Error::InvalidPoint(format!("non-finite component in {p}")));
            }
            if c.abs() > 1.0 + RANGE_TOLERANCE {
                return Err(Error::InvalidPoint(format!("component outside [-1, 1] in {p}")));
            }
        }
        Ok(p)
    }

    /// Clamps each component into `[-1, 1]`. The flag reports whether any
    /// component moved. Non-finite input is still an error.
    pub fn clamped(valence: f64, arousal: f64, dominance: f64) -> Result<(Self, bool)> {
        let raw = [valence, arousal, dominance];
        if raw.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPoint(format!(
                "non-finite component in ({valence}, {arousal}, {dominance})"
            )));
        }
        let c = raw.map(|x| x.clamp(-1.0, 1.0));
        let moved = c != raw;
        Ok((Self::from_array(c), moved))
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.valence, self.arousal, self.dominance]
    }

    pub(crate) fn from_array(a: [f64; 3]) -> Self {
        VadPoint {
            valence: a[0],
            arousal: a[1],
            dominance: a[2],
        }
    }
}

impl fmt::Display for VadPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.valence, self.arousal, self.dominance)
    }
}

impl Serialize for VadPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_array().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for VadPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [v, a, d] = <[f64; 3]>::deserialize(deserializer)?;
        VadPoint::new(v, a, d).map_err(serde::de::Error::custom)
    }
}

pub fn l2_distance(a: VadPoint, b: VadPoint) -> f64 {
    let dv = a.valence - b.valence;
    let da = a.arousal - b.arousal;
    let dd = a.dominance - b.dominance;
    (dv * dv + da * da + dd * dd).sqrt()
}

/// A retrieved term with its distance to the query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Neighbor {
    pub term: String,
    pub distance: f64,
}

fn neighbor_order(a: &Neighbor, b: &Neighbor) -> Ordering {
    a.distance
        .total_cmp(&b.distance)
        .then_with(|| a.term.cmp(&b.term))
}

/// Lexicon terms embedded in VAD space together with the six basic-emotion seeds.
///
/// Entries are kept sorted by term, which makes every downstream computation
/// independent of input order.
#[derive(Debug, Clone, PartialEq)]
pub struct EmotionSpace {
    entries: Vec<(String, VadPoint)>,
    seeds: [VadPoint; 6],
}

impl EmotionSpace {
    pub fn new(entries: Vec<(String, VadPoint)>, seeds: [VadPoint; 6]) -> Result<Self> {
        let mut entries = entries;
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        for (i, pair) in entries.windows(2).enumerate() {
            if pair[0].0 == pair[1].0 {
                return Err(Error::DuplicateTerm {
                    line: i + 2,
                    term: pair[0].0.clone(),
                });
            }
        }
        for (term, p) in &entries {
            VadPoint::new(p.valence, p.arousal, p.dominance)
                .map_err(|e| Error::InvalidPoint(format!("`{term}`: {e}")))?;
        }
        Ok(EmotionSpace { entries, seeds })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(String, VadPoint)] {
        &self.entries
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(t, _)| t.as_str())
    }

    pub fn get(&self, term: &str) -> Option<VadPoint> {
        let key = term.to_lowercase();
        self.entries
            .binary_search_by(|(t, _)| t.as_str().cmp(&key))
            .ok()
            .map(|i| self.entries[i].1)
    }

    pub fn seed(&self, emotion: BasicEmotion) -> VadPoint {
        self.seeds[emotion.index()]
    }

    pub fn seeds(&self) -> &[VadPoint; 6] {
        &self.seeds
    }

    /// SHA-256 over the newline-joined sorted term list, hex encoded.
    pub fn term_hash(&self) -> String {
        let mut hasher = Sha256::new();
        for (term, _) in &self.entries {
            hasher.update(term.as_bytes());
            hasher.update(b"\n");
        }
        hex::encode(hasher.finalize())
    }

    /// Serializes the entries in lexicon file form (polar scores, no header).
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (term, p) in &self.entries {
            out.push_str(&format!(
                "{term}\t{}\t{}\t{}\n",
                p.valence, p.arousal, p.dominance
            ));
        }
        out
    }

    fn scan(&self, query: VadPoint) -> impl Iterator<Item = Neighbor> + '_ {
        self.entries.iter().map(move |(term, p)| Neighbor {
            term: term.clone(),
            distance: l2_distance(query, *p),
        })
    }

    /// All terms within the closed ball of `radius` around `query`.
    pub fn neighbors_within(&self, query: VadPoint, radius: f64) -> Result<Vec<Neighbor>> {
        check_radius(radius)?;
        let mut hits: Vec<Neighbor> = self.scan(query).filter(|n| n.distance <= radius).collect();
        hits.sort_by(neighbor_order);
        Ok(hits)
    }

    /// The `n` closest terms to `query`.
    pub fn nearest(&self, query: VadPoint, n: usize) -> Result<Vec<Neighbor>> {
        if n == 0 || n > self.len() {
            return Err(Error::InvalidCount {
                requested: n,
                available: self.len(),
            });
        }
        let mut all: Vec<Neighbor> = self.scan(query).collect();
        all.sort_by(neighbor_order);
        all.truncate(n);
        Ok(all)
    }

    /// Mean size of the radius neighborhood over a probe set.
    pub fn mean_neighbor_count(&self, probes: &[VadPoint], radius: f64) -> Result<f64> {
        if probes.is_empty() {
            return Err(Error::EmptyProbeSet);
        }
        check_radius(radius)?;
        let total: usize = probes
            .iter()
            .map(|&q| self.scan(q).filter(|n| n.distance <= radius).count())
            .sum();
        Ok(total as f64 / probes.len() as f64)
    }

    /// Smallest probe-to-entry distance at which the mean neighborhood size
    /// reaches `target_mean`.
    ///
    /// The mean count is a step function of the radius that only changes at
    /// observed distances, so the exact minimizer is found by walking the sorted
    /// distance multiset.
    pub fn calibrate_radius(&self, probes: &[VadPoint], target_mean: f64) -> Result<RadiusCalibration> {
        if probes.is_empty() {
            return Err(Error::EmptyProbeSet);
        }
        if !(target_mean.is_finite() && target_mean > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "target mean must be positive, got {target_mean}"
            )));
        }
        if target_mean > self.len() as f64 {
            return Err(Error::TargetUnreachable {
                target: target_mean,
                entries: self.len(),
            });
        }
        let mut distances: Vec<f64> = probes
            .iter()
            .flat_map(|&q| self.entries.iter().map(move |(_, p)| l2_distance(q, *p)))
            .collect();
        distances.sort_by(f64::total_cmp);

        let probe_count = probes.len() as f64;
        let mut predecessor = None;
        let mut i = 0;
        while i < distances.len() {
            let d = distances[i];
            let mut j = i;
            while j < distances.len() && distances[j] == d {
                j += 1;
            }
            let mean = j as f64 / probe_count;
            if mean >= target_mean {
                return Ok(RadiusCalibration {
                    radius: d,
                    mean_count: mean,
                    target_mean,
                    predecessor,
                });
            }
            predecessor = Some((d, mean));
            i = j;
        }
        unreachable!("target mean bounded by entry count is always reached at the largest distance")
    }
}

fn check_radius(radius: f64) -> Result<()> {
    if radius.is_nan() || radius < 0.0 {
        return Err(Error::InvalidRadius(radius));
    }
    Ok(())
}

/// Outcome of [`EmotionSpace::calibrate_radius`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusCalibration {
    pub radius: f64,
    /// Mean neighborhood size at `radius`.
    pub mean_count: f64,
    pub target_mean: f64,
    /// The next smaller candidate distance and its mean count, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predecessor: Option<(f64, f64)>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: f64, a: f64, d: f64) -> VadPoint {
        VadPoint::new(v, a, d).unwrap()
    }

    fn seeds() -> [VadPoint; 6] {
        [
            p(0.9, 0.5, 0.5),
            p(-0.6, -0.3, -0.7),
            p(-0.7, 0.4, -0.4),
            p(0.5, 0.7, 0.1),
            p(-0.8, 0.7, 0.2),
            VadPoint::ORIGIN,
        ]
    }

    fn toy() -> EmotionSpace {
        // distances from the origin: a = 0.1, b = 0.3, c = 0.5
        EmotionSpace::new(
            vec![
                ("c".into(), p(0.0, 0.0, 0.5)),
                ("a".into(), p(0.1, 0.0, 0.0)),
                ("b".into(), p(0.0, 0.3, 0.0)),
            ],
            seeds(),
        )
        .unwrap()
    }

    #[test]
    fn distance_basics() {
        let x = p(0.3, -0.2, 0.9);
        assert_eq!(l2_distance(x, x), 0.0);
        assert_eq!(l2_distance(VadPoint::ORIGIN, p(1.0, 0.0, 0.0)), 1.0);
        // 0.25 + 0.09 + 0.16 = 0.5, sqrt(0.5) by hand
        let d = l2_distance(p(0.2, -0.1, 0.4), p(-0.3, 0.2, 0.0));
        assert!((d - 0.707_106_781_186_547_5).abs() < 1e-12);
    }

    #[test]
    fn point_validation() {
        assert!(VadPoint::new(1.0 + 1e-10, 0.0, 0.0).is_ok());
        assert!(VadPoint::new(1.01, 0.0, 0.0).is_err());
        assert!(VadPoint::new(f64::NAN, 0.0, 0.0).is_err());
        let (c, moved) = VadPoint::clamped(1.4, -0.2, -3.0).unwrap();
        assert!(moved);
        assert_eq!(c, p(1.0, -0.2, -1.0));
        assert!(!VadPoint::clamped(0.1, 0.2, 0.3).unwrap().1);
    }

    #[test]
    fn entries_sorted_and_unique() {
        let s = toy();
        assert_eq!(s.terms().collect::<Vec<_>>(), ["a", "b", "c"]);
        let dup = EmotionSpace::new(
            vec![("a".into(), VadPoint::ORIGIN), ("a".into(), VadPoint::ORIGIN)],
            seeds(),
        );
        assert!(matches!(dup, Err(Error::DuplicateTerm { .. })));
    }

    #[test]
    fn radius_zero_hits_colocated_terms() {
        let s = EmotionSpace::new(
            vec![
                ("y".into(), p(0.2, 0.2, 0.2)),
                ("x".into(), p(0.2, 0.2, 0.2)),
                ("z".into(), p(0.3, 0.2, 0.2)),
            ],
            seeds(),
        )
        .unwrap();
        let hits = s.neighbors_within(p(0.2, 0.2, 0.2), 0.0).unwrap();
        let terms: Vec<_> = hits.iter().map(|n| n.term.as_str()).collect();
        assert_eq!(terms, ["x", "y"]);
    }

    #[test]
    fn saturating_radius_returns_everything() {
        let s = toy();
        let hits = s.neighbors_within(VadPoint::ORIGIN, 2.0 * 3f64.sqrt()).unwrap();
        assert_eq!(hits.len(), 3);
        assert!(s.neighbors_within(VadPoint::ORIGIN, -0.1).is_err());
    }

    #[test]
    fn nearest_contract() {
        let s = toy();
        let all = s.nearest(VadPoint::ORIGIN, 3).unwrap();
        assert_eq!(all.iter().map(|n| n.term.as_str()).collect::<Vec<_>>(), ["a", "b", "c"]);
        let own = s.nearest(p(0.0, 0.3, 0.0), 1).unwrap();
        assert_eq!(own[0].term, "b");
        assert_eq!(own[0].distance, 0.0);
        assert!(matches!(s.nearest(VadPoint::ORIGIN, 0), Err(Error::InvalidCount { .. })));
        assert!(matches!(s.nearest(VadPoint::ORIGIN, 4), Err(Error::InvalidCount { .. })));
    }

    #[test]
    fn mean_count_edges() {
        let s = toy();
        let off = [p(0.9, 0.9, 0.9), p(-0.9, -0.9, -0.9)];
        assert_eq!(s.mean_neighbor_count(&off, 0.0).unwrap(), 0.0);
        assert_eq!(s.mean_neighbor_count(&off, 4.0).unwrap(), 3.0);
        assert!(matches!(s.mean_neighbor_count(&[], 0.5), Err(Error::EmptyProbeSet)));
    }

    #[test]
    fn calibration_on_hand_enumerated_toy() {
        // probe at the origin: sorted distances 0.1, 0.3, 0.5 give counts 1, 2, 3
        let s = toy();
        let probes = [VadPoint::ORIGIN];
        let c = s.calibrate_radius(&probes, 2.0).unwrap();
        assert_eq!(c.radius, 0.3);
        assert_eq!(c.mean_count, 2.0);
        assert_eq!(c.predecessor, Some((0.1, 1.0)));
        let c = s.calibrate_radius(&probes, 1.5).unwrap();
        assert_eq!(c.radius, 0.3);
        let c = s.calibrate_radius(&probes, 0.5).unwrap();
        assert_eq!(c.radius, 0.1);
        assert_eq!(c.predecessor, None);
        // saturation: target = entry count gives the largest distance
        assert_eq!(s.calibrate_radius(&probes, 3.0).unwrap().radius, 0.5);
        assert!(matches!(
            s.calibrate_radius(&probes, 3.5),
            Err(Error::TargetUnreachable { .. })
        ));
        assert!(matches!(s.calibrate_radius(&[], 1.0), Err(Error::EmptyProbeSet)));
    }

    #[test]
    fn calibration_with_two_probes() {
        // probes at the origin and at b. Distances from b: b 0, a sqrt(0.1), c sqrt(0.34).
        // Pooled sorted: 0, 0.1, 0.3, sqrt(0.1)=0.316.., 0.5, sqrt(0.34)=0.583..
        // Cumulative counts / 2: 0.5, 1, 1.5, 2, 2.5, 3
        let s = toy();
        let probes = [VadPoint::ORIGIN, p(0.0, 0.3, 0.0)];
        let c = s.calibrate_radius(&probes, 2.0).unwrap();
        assert_eq!(c.radius, (0.1f64 * 0.1 + 0.3 * 0.3).sqrt());
        assert_eq!(c.mean_count, 2.0);
        assert_eq!(c.predecessor, Some((0.3, 1.5)));
    }
}
