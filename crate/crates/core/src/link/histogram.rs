//! Clock-synchronized time-bin histograms of detection events.

use super::DetectionEvent;

/// Time reference of a histogram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HistogramOrigin {
    /// Bins span the events' absolute time range.
    Absolute,
    /// Event times are folded modulo a synchronization period.
    Folded { period_ns: f64 },
}

/// Binned counts; bin `i` covers `[origin + i·bin, origin + (i+1)·bin)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bin_ns: f64,
    pub origin_ns: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    /// Empty folded histogram covering one period.
    pub fn folded(period_ns: f64, bin_ns: f64) -> Self {
        assert!(bin_ns > 0.0 && period_ns > 0.0);
        let n = (period_ns / bin_ns).ceil() as usize;
        Self {
            bin_ns,
            origin_ns: 0.0,
            counts: vec![0; n.max(1)],
        }
    }

    /// Adds one event at folded/relative time `t_ns`.
    pub fn add(&mut self, t_ns: f64) {
        let span = self.counts.len() as f64 * self.bin_ns;
        let rel = (t_ns - self.origin_ns).rem_euclid(span);
        let idx = ((rel / self.bin_ns) as usize).min(self.counts.len() - 1);
        self.counts[idx] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `(bin start, count)` rows.
    pub fn rows(&self) -> impl Iterator<Item = (f64, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (self.origin_ns + i as f64 * self.bin_ns, c))
    }
}

/// Bins detection events relative to the synchronized clock. Total
/// counts always equal the number of input events.
pub fn tia_histogram(events: &[DetectionEvent], bin_ns: f64, origin: HistogramOrigin) -> Histogram {
    assert!(bin_ns > 0.0, "bin width must be positive");
    match origin {
        HistogramOrigin::Folded { period_ns } => {
            let mut h = Histogram::folded(period_ns, bin_ns);
            for e in events {
                h.add(e.time_ns.rem_euclid(period_ns));
            }
            h
        }
        HistogramOrigin::Absolute => {
            if events.is_empty() {
                return Histogram {
                    bin_ns,
                    origin_ns: 0.0,
                    counts: Vec::new(),
                };
            }
            let min = events
                .iter()
                .map(|e| e.time_ns)
                .fold(f64::INFINITY, f64::min);
            let max = events
                .iter()
                .map(|e| e.time_ns)
                .fold(f64::NEG_INFINITY, f64::max);
            let first_bin = (min / bin_ns).floor();
            let n = ((max / bin_ns).floor() - first_bin) as usize + 1;
            let mut h = Histogram {
                bin_ns,
                origin_ns: first_bin * bin_ns,
                counts: vec![0; n],
            };
            for e in events {
                let idx = (((e.time_ns - h.origin_ns) / bin_ns) as usize).min(n - 1);
                h.counts[idx] += 1;
            }
            h
        }
    }
}
