//! Descriptive statistics and the significance tests used to compare
//! algorithm variants: one-way ANOVA, pairwise t-tests with a pooled standard
//! deviation and Benjamini-Hochberg adjustment, and the Wilcoxon signed-rank
//! test with continuity correction.

use statrs::function::beta::beta_reg;

use crate::error::{invalid, Error, Result};

/// A labelled sample, typically the best fitness of each run of one variant.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGroup {
    pub label: String,
    pub values: Vec<f64>,
}

impl SampleGroup {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let label = label.into();
        if values.len() < 2 {
            return Err(invalid(format!(
                "group '{label}' needs at least two values"
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid(format!("group '{label}' has non-finite values")));
        }
        Ok(Self { label, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    /// Sum of squared deviations from the mean.
    fn sum_sq_dev(&self) -> f64 {
        let m = self.mean();
        self.values.iter().map(|v| (v - m) * (v - m)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Description {
    pub count: usize,
    pub sum: f64,
    pub mean: f64,
    /// Sample variance with divisor n - 1.
    pub variance: f64,
}

impl Description {
    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }
}

pub fn describe(g: &SampleGroup) -> Result<Description> {
    let count = g.len();
    if count < 2 {
        return Err(invalid("describe needs at least two values"));
    }
    let sum: f64 = g.values.iter().sum();
    Ok(Description {
        count,
        sum,
        mean: sum / count as f64,
        variance: g.sum_sq_dev() / (count - 1) as f64,
    })
}

/// Median of `values`; the mean of the two middle values for even counts.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnovaResult {
    pub ss_between: f64,
    pub ss_within: f64,
    pub df_between: usize,
    pub df_within: usize,
    pub ms_between: f64,
    pub ms_within: f64,
    pub f_statistic: f64,
    pub p_value: f64,
}

impl AnovaResult {
    pub fn ss_total(&self) -> f64 {
        self.ss_between + self.ss_within
    }
}

/// Upper tail of the F distribution.
pub fn f_survival(f: f64, d1: f64, d2: f64) -> f64 {
    if f <= 0.0 {
        return 1.0;
    }
    beta_reg(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f))
}

/// Two-sided p-value of Student's t with `df` degrees of freedom.
pub fn t_two_sided(t: f64, df: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    beta_reg(df / 2.0, 0.5, df / (df + t * t))
}

/// Two-sided p-value of a standard normal deviate.
pub fn normal_two_sided(z: f64) -> f64 {
    libm::erfc(z.abs() / std::f64::consts::SQRT_2)
}

fn check_groups(groups: &[SampleGroup]) -> Result<()> {
    if groups.len() < 2 {
        return Err(invalid("at least two groups are required"));
    }
    if let Some(g) = groups.iter().find(|g| g.len() < 2) {
        return Err(invalid(format!(
            "group '{}' has fewer than two values",
            g.label
        )));
    }
    Ok(())
}

pub fn anova_one_way(groups: &[SampleGroup]) -> Result<AnovaResult> {
    check_groups(groups)?;
    let n: usize = groups.iter().map(SampleGroup::len).sum();
    let grand = groups.iter().flat_map(|g| &g.values).sum::<f64>() / n as f64;
    let ss_between: f64 = groups
        .iter()
        .map(|g| g.len() as f64 * (g.mean() - grand).powi(2))
        .sum();
    let ss_within: f64 = groups.iter().map(SampleGroup::sum_sq_dev).sum();
    let df_between = groups.len() - 1;
    let df_within = n - groups.len();
    let ms_between = ss_between / df_between as f64;
    let ms_within = ss_within / df_within as f64;
    if ms_within == 0.0 {
        return Err(invalid("zero within-group variance; F is undefined"));
    }
    let f_statistic = ms_between / ms_within;
    Ok(AnovaResult {
        ss_between,
        ss_within,
        df_between,
        df_within,
        ms_between,
        ms_within,
        f_statistic,
        p_value: f_survival(f_statistic, df_between as f64, df_within as f64),
    })
}

/// Benjamini-Hochberg step-up adjustment, returned in input order.
pub fn benjamini_hochberg(p: &[f64]) -> Vec<f64> {
    let m = p.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p[b].total_cmp(&p[a]));
    let mut adjusted = vec![0.0; m];
    let mut running = 1.0f64;
    for (k, &i) in order.iter().enumerate() {
        let rank = m - k;
        running = running.min(p[i] * m as f64 / rank as f64);
        adjusted[i] = running;
    }
    adjusted
}

/// Pairwise comparison matrices; entry `[i][j]` is `None` on the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseResult {
    pub labels: Vec<String>,
    pub raw: Vec<Vec<Option<f64>>>,
    pub adjusted: Vec<Vec<Option<f64>>>,
    pub pooled_sd: f64,
    pub df: usize,
}

impl PairwiseResult {
    pub fn adjusted_by_label(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.labels.iter().position(|l| l == a)?;
        let j = self.labels.iter().position(|l| l == b)?;
        self.adjusted[i][j]
    }
}

/// t-tests between every pair of groups using the standard deviation pooled
/// over all groups, BH-adjusted across all pairs.
pub fn pairwise_t_bh(groups: &[SampleGroup]) -> Result<PairwiseResult> {
    check_groups(groups)?;
    let df: usize = groups.iter().map(|g| g.len() - 1).sum();
    let ss: f64 = groups.iter().map(SampleGroup::sum_sq_dev).sum();
    let pooled_var = ss / df as f64;
    if pooled_var == 0.0 {
        return Err(invalid("zero pooled variance"));
    }
    let pooled_sd = pooled_var.sqrt();
    let k = groups.len();
    let means: Vec<f64> = groups.iter().map(SampleGroup::mean).collect();
    let mut pairs = Vec::with_capacity(k * (k - 1) / 2);
    let mut raw_p = Vec::with_capacity(pairs.capacity());
    for i in 0..k {
        for j in i + 1..k {
            let se =
                pooled_sd * (1.0 / groups[i].len() as f64 + 1.0 / groups[j].len() as f64).sqrt();
            let t = (means[i] - means[j]) / se;
            pairs.push((i, j));
            raw_p.push(t_two_sided(t, df as f64));
        }
    }
    let adj_p = benjamini_hochberg(&raw_p);
    let mut raw = vec![vec![None; k]; k];
    let mut adjusted = vec![vec![None; k]; k];
    for (((i, j), r), a) in pairs.into_iter().zip(raw_p).zip(adj_p) {
        raw[i][j] = Some(r);
        raw[j][i] = Some(r);
        adjusted[i][j] = Some(a);
        adjusted[j][i] = Some(a);
    }
    Ok(PairwiseResult {
        labels: groups.iter().map(|g| g.label.clone()).collect(),
        raw,
        adjusted,
        pooled_sd,
        df,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WilcoxonResult {
    /// Sum of ranks of the positive differences `x - y`.
    pub v: f64,
    /// Number of nonzero differences.
    pub n: usize,
    pub z: f64,
    pub p_value: f64,
}

/// Average ranks (1-based) of `values`, ties sharing the mean of their ranks.
/// Also returns the tie correction term sum(t^3 - t).
fn average_ranks(values: &[f64]) -> (Vec<f64>, f64) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        let t = (j - i + 1) as f64;
        ties += t * t * t - t;
        i = j + 1;
    }
    (ranks, ties)
}

/// Paired two-sided Wilcoxon signed-rank test with normal approximation,
/// tie-corrected variance and continuity correction. Zero differences are
/// dropped.
pub fn wilcoxon_signed_rank(x: &[f64], y: &[f64]) -> Result<WilcoxonResult> {
    if x.len() != y.len() {
        return Err(invalid(format!(
            "paired samples differ in length: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.is_empty() {
        return Err(invalid("paired samples are empty"));
    }
    let d: Vec<f64> = x
        .iter()
        .zip(y)
        .map(|(a, b)| a - b)
        .filter(|&d| d != 0.0)
        .collect();
    if d.is_empty() {
        return Err(Error::UndefinedTest(
            "all paired differences are zero".into(),
        ));
    }
    let n = d.len();
    let abs: Vec<f64> = d.iter().map(|v| v.abs()).collect();
    let (ranks, ties) = average_ranks(&abs);
    let v: f64 = d
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| r)
        .sum();
    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - ties / 48.0;
    if var <= 0.0 {
        return Err(Error::UndefinedTest(
            "zero variance of the signed-rank statistic".into(),
        ));
    }
    let diff = v - mean;
    let correction = if diff == 0.0 {
        0.0
    } else {
        0.5 * diff.signum()
    };
    let z = (diff - correction) / var.sqrt();
    Ok(WilcoxonResult {
        v,
        n,
        z,
        p_value: normal_two_sided(z),
    })
}
