//! Order-fixed reductions and the small set of statistics the Monte Carlo
//! checks need.

/// Neumaier-compensated running sum. Feeding the same values in the same
/// order always yields the same bits.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

pub fn compensated_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = CompensatedSum::new();
    for x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Sample mean, unbiased variance and the standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SampleStats {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
}

impl SampleStats {
    /// Two-pass estimate with compensated sums. Panics on an empty sample.
    pub fn from_slice(xs: &[f64]) -> Self {
        assert!(!xs.is_empty(), "empty sample");
        let n = xs.len();
        let mean = compensated_sum(xs.iter().copied()) / n as f64;
        let variance = if n > 1 {
            compensated_sum(xs.iter().map(|x| (x - mean) * (x - mean))) / (n - 1) as f64
        } else {
            0.0
        };
        Self {
            count: n,
            mean,
            variance,
            std_error: (variance / n as f64).sqrt(),
        }
    }

    /// Standard error of the sample variance, assuming near-Gaussian data
    /// (`σ²·√(2/(n−1))`).
    pub fn variance_std_error(&self) -> f64 {
        self.variance * (2.0 / (self.count as f64 - 1.0)).sqrt()
    }
}

/// Sample skewness (biased moment estimator) of `xs`.
pub fn skewness(xs: &[f64]) -> f64 {
    let s = SampleStats::from_slice(xs);
    let n = xs.len() as f64;
    let m2 = compensated_sum(xs.iter().map(|x| (x - s.mean).powi(2))) / n;
    let m3 = compensated_sum(xs.iter().map(|x| (x - s.mean).powi(3))) / n;
    m3 / m2.powf(1.5)
}

/// Two-sample Kolmogorov-Smirnov statistic `sup |F_a − F_b|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
pub fn ks_one_sample(xs: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = xs.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic KS critical value `c(α)·√((n+m)/(n·m))` with
/// `c(α) = √(−ln(α/2)/2)`. Pass `m = None` for the one-sample test.
pub fn ks_critical(alpha: f64, n: usize, m: Option<usize>) -> f64 {
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    let n = n as f64;
    match m {
        Some(m) => {
            let m = m as f64;
            c * ((n + m) / (n * m)).sqrt()
        }
        None => c / n.sqrt(),
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
