use statrs::function::erf::erfc;

use crate::error::StatsError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    /// Two-sided.
    pub p_value: f64,
}

fn two_sided_normal_p(z: f64) -> f64 {
    erfc(z.abs() / std::f64::consts::SQRT_2).min(1.0)
}

/// Pooled two-proportion z-test of x1/n1 against x2/n2.
pub fn two_proportion_test(x1: u64, n1: u64, x2: u64, n2: u64) -> Result<TestResult, StatsError> {
    if n1 == 0 || n2 == 0 {
        return Err(StatsError::EmptyInput);
    }
    if x1 > n1 || x2 > n2 {
        return Err(StatsError::InvalidArgument("count exceeds sample size"));
    }
    let (n1f, n2f) = (n1 as f64, n2 as f64);
    let pooled = (x1 + x2) as f64 / (n1f + n2f);
    if x1 + x2 == 0 || x1 + x2 == n1 + n2 {
        return Err(StatsError::DegenerateInput("pooled proportion is 0 or 1"));
    }
    let se = (pooled * (1.0 - pooled) * (1.0 / n1f + 1.0 / n2f)).sqrt();
    let z = (x1 as f64 / n1f - x2 as f64 / n2f) / se;
    Ok(TestResult {
        statistic: z,
        p_value: two_sided_normal_p(z),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankSumResult {
    /// Sum of the midranks of the first sample.
    pub rank_sum: f64,
    /// Continuity-corrected z; the test statistic.
    pub z: f64,
    pub p_value: f64,
    /// Tie-corrected null variance of the rank sum.
    pub variance: f64,
}

/// Midranks of `values` (1-based), with the tie groups' sizes.
pub fn midranks(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        ties.push(j - i + 1);
        i = j + 1;
    }
    (ranks, ties)
}

/// Null variance of the first sample's rank sum, with the tie correction.
pub fn rank_sum_variance(n1: usize, n2: usize, ties: &[usize]) -> f64 {
    let n = (n1 + n2) as f64;
    let t: f64 = ties.iter().map(|&t| (t as f64).powi(3) - t as f64).sum();
    (n1 * n2) as f64 / 12.0 * ((n + 1.0) - t / (n * (n - 1.0)))
}

/// Wilcoxon rank-sum test: midranks, tie-corrected variance, continuity
/// correction, two-sided normal p.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64]) -> Result<RankSumResult, StatsError> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(StatsError::InvalidArgument("non-finite observation"));
    }
    let all: Vec<f64> = a.iter().chain(b).copied().collect();
    let (ranks, ties) = midranks(&all);
    if ties.len() == 1 {
        return Err(StatsError::DegenerateInput("all observations are identical"));
    }
    let (n1, n2) = (a.len(), b.len());
    let rank_sum: f64 = ranks[..n1].iter().sum();
    let mean = n1 as f64 * (all.len() as f64 + 1.0) / 2.0;
    let variance = rank_sum_variance(n1, n2, &ties);
    let diff = rank_sum - mean;
    let corrected = (diff.abs() - 0.5).max(0.0) * diff.signum();
    let z = corrected / variance.sqrt();
    Ok(RankSumResult {
        rank_sum,
        z,
        p_value: two_sided_normal_p(z),
        variance,
    })
}

/// `p_i < alpha / m` for each of the m p-values.
pub fn bonferroni(pvalues: &[f64], alpha: f64) -> Result<Vec<bool>, StatsError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(StatsError::InvalidArgument("alpha must lie in (0, 1)"));
    }
    let m = pvalues.len() as f64;
    Ok(pvalues.iter().map(|&p| p < alpha / m).collect())
}

/// Fraction of positions where the two columns agree, over the positions the
/// mask keeps.
pub fn agreement_rate<T: PartialEq>(
    reproduced: &[T],
    recorded: &[T],
    mask: Option<&[bool]>,
) -> Result<f64, StatsError> {
    if reproduced.len() != recorded.len() {
        return Err(StatsError::LengthMismatch {
            left: reproduced.len(),
            right: recorded.len(),
        });
    }
    if let Some(m) = mask {
        if m.len() != reproduced.len() {
            return Err(StatsError::LengthMismatch {
                left: reproduced.len(),
                right: m.len(),
            });
        }
    }
    let (mut kept, mut agree) = (0usize, 0usize);
    for (i, (a, b)) in reproduced.iter().zip(recorded).enumerate() {
        if mask.is_some_and(|m| !m[i]) {
            continue;
        }
        kept += 1;
        if a == b {
            agree += 1;
        }
    }
    if kept == 0 {
        return Err(StatsError::EmptyInput);
    }
    Ok(agree as f64 / kept as f64)
}
