use rayon::prelude::*;

/// Samples per work item in [`parallel_mean`]. Chunk boundaries are fixed, so
/// the reduction order never depends on the thread count.
pub const CHUNK_LEN: u64 = 4096;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: u64,
}

#[derive(Clone, Copy)]
struct Partial {
    n: u64,
    sum: NeumaierSum,
    mean: f64,
    m2: f64,
}

fn chunk_stats<F: Fn(u64) -> f64>(range: std::ops::Range<u64>, f: &F) -> Partial {
    let mut p = Partial {
        n: 0,
        sum: NeumaierSum::default(),
        mean: 0.0,
        m2: 0.0,
    };
    for i in range {
        let x = f(i);
        p.n += 1;
        p.sum.add(x);
        let delta = x - p.mean;
        p.mean += delta / p.n as f64;
        p.m2 += delta * (x - p.mean);
    }
    p
}

/// Mean of `f(0), …, f(n-1)` evaluated in parallel on the current rayon pool.
///
/// Bit-identical for a given `(n, f)` whatever the pool size: chunks are
/// fixed-length and partial results are merged sequentially in index order.
pub fn parallel_mean<F>(n: u64, f: F) -> MeanEstimate
where
    F: Fn(u64) -> f64 + Sync,
{
    assert!(n > 0, "parallel_mean needs at least one sample");
    let chunks = n.div_ceil(CHUNK_LEN);
    let partials: Vec<Partial> = (0..chunks)
        .into_par_iter()
        .map(|c| chunk_stats(c * CHUNK_LEN..((c + 1) * CHUNK_LEN).min(n), &f))
        .collect();

    let mut sum = NeumaierSum::default();
    let (mut count, mut mean, mut m2) = (0u64, 0.0f64, 0.0f64);
    for p in &partials {
        sum.add(p.sum.total());
        let total = count + p.n;
        let delta = p.mean - mean;
        m2 += p.m2 + delta * delta * (count as f64) * (p.n as f64) / total as f64;
        mean += delta * p.n as f64 / total as f64;
        count = total;
    }
    let variance = if n > 1 { m2 / (n - 1) as f64 } else { 0.0 };
    MeanEstimate {
        mean: sum.total() / n as f64,
        std_error: (variance / n as f64).sqrt(),
        n,
    }
}
