//! Independent reference implementations and fixture helpers for the
//! integration tests. Nothing here calls into the library's algorithms;
//! the oracles work on plain arrays.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use emovad::config::Settings;
use emovad::harness::pipeline::load_space;
use emovad::space::{EmotionSpace, VadPoint};
use emovad::BasicEmotion;
use rand::Rng;

pub type P3 = [f64; 3];

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn data(name: &str) -> PathBuf {
    data_dir().join(name)
}

pub fn fixture_settings() -> Settings {
    Settings::load(&data("config.toml")).expect("fixture config loads")
}

pub fn fixture_space() -> EmotionSpace {
    load_space(&data("lexicon.tsv"), &fixture_settings()).expect("fixture space builds")
}

/// Reads one row of the fixture lexicon straight from the file, in unit scale.
pub fn raw_lexicon_row(term: &str) -> Option<P3> {
    let text = std::fs::read_to_string(data("lexicon.tsv")).unwrap();
    text.lines().skip(1).find_map(|line| {
        let f: Vec<&str> = line.split('\t').collect();
        (f[0] == term).then(|| [f[1].parse().unwrap(), f[2].parse().unwrap(), f[3].parse().unwrap()])
    })
}

pub fn subset_terms() -> Vec<String> {
    std::fs::read_to_string(data("subset.txt"))
        .unwrap()
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect()
}

pub fn p3(p: VadPoint) -> P3 {
    [p.valence, p.arousal, p.dominance]
}

pub fn vad(p: P3) -> VadPoint {
    VadPoint::new(p[0], p[1], p[2]).unwrap()
}

pub fn dist(a: P3, b: P3) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    s.sqrt()
}

pub fn random_point<R: Rng>(rng: &mut R) -> P3 {
    [
        rng.random_range(-1.0..=1.0),
        rng.random_range(-1.0..=1.0),
        rng.random_range(-1.0..=1.0),
    ]
}

/// A random space of `n` points named so that term order equals generation order.
pub fn random_space<R: Rng>(rng: &mut R, n: usize) -> (EmotionSpace, Vec<P3>, [P3; 6]) {
    let points: Vec<P3> = (0..n).map(|_| random_point(rng)).collect();
    let mut seeds = [[0.0; 3]; 6];
    for i in 0..6 {
        loop {
            let s = random_point(rng);
            if !seeds[..i].contains(&s) {
                seeds[i] = s;
                break;
            }
        }
    }
    let entries = points
        .iter()
        .enumerate()
        .map(|(i, &p)| (format!("t{i:05}"), vad(p)))
        .collect();
    let space = EmotionSpace::new(entries, seeds.map(vad)).unwrap();
    (space, points, seeds)
}

pub struct LloydResult {
    pub labels: Vec<usize>,
    pub centroids: [P3; 6],
    pub iterations: usize,
    pub wcss: f64,
}

fn closest(c: &[P3; 6], p: P3) -> usize {
    let mut best = 0;
    for k in 1..6 {
        if dist(p, c[k]) < dist(p, c[best]) {
            best = k;
        }
    }
    best
}

/// Plain Lloyd iteration: lowest index wins ties, empty clusters stay put,
/// stop once the largest centroid shift drops below `tol`.
pub fn lloyd(points: &[P3], seeds: [P3; 6], max_iter: usize, tol: f64, pin: Option<usize>) -> LloydResult {
    let mut c = seeds;
    let mut labels: Vec<usize> = points.iter().map(|&p| closest(&c, p)).collect();
    let mut iterations = 0;
    while iterations < max_iter {
        let mut next = c;
        let mut shift: f64 = 0.0;
        for k in 0..6 {
            if Some(k) == pin {
                continue;
            }
            let members: Vec<P3> = points.iter().zip(&labels).filter(|(_, &l)| l == k).map(|(p, _)| *p).collect();
            if members.is_empty() {
                continue;
            }
            let mut sum = [0.0; 3];
            for m in &members {
                for a in 0..3 {
                    sum[a] += m[a];
                }
            }
            next[k] = sum.map(|s| s / members.len() as f64);
            shift = shift.max(dist(c[k], next[k]));
        }
        c = next;
        iterations += 1;
        labels = points.iter().map(|&p| closest(&c, p)).collect();
        if shift < tol {
            break;
        }
    }
    let wcss = points.iter().zip(&labels).map(|(&p, &l)| dist(p, c[l]).powi(2)).sum();
    LloydResult {
        labels,
        centroids: c,
        iterations,
        wcss,
    }
}

/// Exhaustive scan: every (term, distance) within `radius`, sorted by distance then term.
pub fn scan_within(entries: &[(String, P3)], q: P3, radius: f64) -> Vec<(String, f64)> {
    let mut out: Vec<(String, f64)> = entries
        .iter()
        .map(|(t, p)| (t.clone(), dist(q, *p)))
        .filter(|(_, d)| *d <= radius)
        .collect();
    out.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    out
}

pub fn scan_nearest(entries: &[(String, P3)], q: P3, n: usize) -> Vec<(String, f64)> {
    let mut out = scan_within(entries, q, f64::INFINITY);
    out.truncate(n);
    out
}

pub fn space_entries(space: &EmotionSpace) -> Vec<(String, P3)> {
    space.entries().iter().map(|(t, p)| (t.clone(), p3(*p))).collect()
}

/// Double-loop mean neighborhood size.
pub fn mean_count(entries: &[(String, P3)], probes: &[P3], radius: f64) -> f64 {
    let mut total = 0usize;
    for q in probes {
        for (_, p) in entries {
            if dist(*q, *p) <= radius {
                total += 1;
            }
        }
    }
    total as f64 / probes.len() as f64
}

pub fn mse(t: &[P3], p: &[P3]) -> f64 {
    let mut s = 0.0;
    for i in 0..t.len() {
        for a in 0..3 {
            s += (t[i][a] - p[i][a]).powi(2);
        }
    }
    s / (3 * t.len()) as f64
}

pub fn mae(t: &[P3], p: &[P3]) -> f64 {
    let mut s = 0.0;
    for i in 0..t.len() {
        for a in 0..3 {
            s += (t[i][a] - p[i][a]).abs();
        }
    }
    s / (3 * t.len()) as f64
}

pub fn mean_l2(t: &[P3], p: &[P3]) -> f64 {
    let mut s = 0.0;
    for i in 0..t.len() {
        s += dist(t[i], p[i]);
    }
    s / t.len() as f64
}

pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if sxx == 0.0 || syy == 0.0 {
        None
    } else {
        Some(sxy / (sxx.sqrt() * syy.sqrt()))
    }
}

pub fn cross_entropy(y: &[usize], p: &[[f64; 6]]) -> f64 {
    let mut s = 0.0;
    for i in 0..y.len() {
        s += -(p[i][y[i]].max(1e-12)).ln();
    }
    s / y.len() as f64
}

pub struct Tally {
    pub precision: [f64; 6],
    pub recall: [f64; 6],
    pub f1: [f64; 6],
    pub support: [u64; 6],
    pub accuracy: f64,
}

/// Per-class counts of true positives, false positives and false negatives.
pub fn tally(truth: &[BasicEmotion], pred: &[BasicEmotion]) -> Tally {
    let (mut tp, mut fp, mut fneg) = ([0u64; 6], [0u64; 6], [0u64; 6]);
    let mut correct = 0;
    for (t, p) in truth.iter().zip(pred) {
        if t == p {
            tp[t.index()] += 1;
            correct += 1;
        } else {
            fp[p.index()] += 1;
            fneg[t.index()] += 1;
        }
    }
    let frac = |a: u64, b: u64| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let mut out = Tally {
        precision: [0.0; 6],
        recall: [0.0; 6],
        f1: [0.0; 6],
        support: [0; 6],
        accuracy: frac(correct, truth.len() as u64),
    };
    for k in 0..6 {
        out.precision[k] = frac(tp[k], tp[k] + fp[k]);
        out.recall[k] = frac(tp[k], tp[k] + fneg[k]);
        let (p, r) = (out.precision[k], out.recall[k]);
        out.f1[k] = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
        out.support[k] = tp[k] + fneg[k];
    }
    out
}

pub fn cos(u: &[f64], v: &[f64]) -> f64 {
    let mut dot = 0.0;
    let mut nu = 0.0;
    let mut nv = 0.0;
    for i in 0..u.len() {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    dot / (nu.sqrt() * nv.sqrt())
}

/// Mean best-match cosine in both directions over in-vocabulary terms.
pub fn set_score(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let best = |from: &[Vec<f64>], to: &[Vec<f64>]| {
        from.iter()
            .map(|u| to.iter().map(|v| cos(u, v)).fold(f64::NEG_INFINITY, f64::max))
            .sum::<f64>()
            / from.len() as f64
    };
    (best(a, b) + best(b, a)) / 2.0
}

pub fn random_label<R: Rng>(rng: &mut R) -> BasicEmotion {
    BasicEmotion::ALL[rng.random_range(0..6)]
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
