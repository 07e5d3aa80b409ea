use std::collections::BTreeMap;

use serde::Serialize;

/// Outcome counts over repeated shots.
///
/// Outcomes are integers whose bit `i` is the value of the `i`-th measured
/// qubit; labels print that qubit leftmost.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Histogram {
    width: usize,
    counts: BTreeMap<u64, u64>,
    shots: u64,
}

impl Histogram {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            counts: BTreeMap::new(),
            shots: 0,
        }
    }

    pub fn record(&mut self, outcome: u64) {
        self.record_n(outcome, 1);
    }

    pub fn record_n(&mut self, outcome: u64, n: u64) {
        if n == 0 {
            return;
        }
        *self.counts.entry(outcome).or_default() += n;
        self.shots += n;
    }

    pub fn merge(&mut self, other: &Histogram) {
        for (&k, &v) in &other.counts {
            self.record_n(k, v);
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn count(&self, outcome: u64) -> u64 {
        self.counts.get(&outcome).copied().unwrap_or(0)
    }

    pub fn frequency(&self, outcome: u64) -> f64 {
        if self.shots == 0 {
            0.0
        } else {
            self.count(outcome) as f64 / self.shots as f64
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    /// Most frequent outcome; ties go to the smaller integer.
    pub fn mode(&self) -> Option<u64> {
        self.mode_by_key(|o| o)
    }

    /// Most frequent outcome; ties go to the smaller label, i.e. the smaller
    /// number when the first measured qubit is read as most significant.
    pub fn mode_by_label(&self) -> Option<u64> {
        let w = self.width;
        self.mode_by_key(|o| reverse_bits(o, w))
    }

    fn mode_by_key(&self, key: impl Fn(u64) -> u64) -> Option<u64> {
        self.counts
            .iter()
            .max_by(|(a, ca), (b, cb)| ca.cmp(cb).then_with(|| key(**b).cmp(&key(**a))))
            .map(|(&o, _)| o)
    }

    pub fn label(&self, outcome: u64) -> String {
        label(outcome, self.width)
    }

    /// Counts keyed by label, in label order.
    pub fn labelled(&self) -> BTreeMap<String, u64> {
        self.counts
            .iter()
            .map(|(&k, &v)| (self.label(k), v))
            .collect()
    }
}

/// Render `outcome` with bit 0 leftmost.
pub fn label(outcome: u64, width: usize) -> String {
    (0..width)
        .map(|i| if (outcome >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

fn reverse_bits(x: u64, width: usize) -> u64 {
    if width == 0 {
        0
    } else {
        x.reverse_bits() >> (64 - width)
    }
}
