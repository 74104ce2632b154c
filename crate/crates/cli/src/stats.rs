use std::fmt;
use std::str::FromStr;

use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("sample {0} is empty")]
    EmptySample(char),
    #[error("sample contains a non-finite value")]
    NonFinite,
    /// Every value in both samples is equal; no ordering information.
    #[error("all values are identical")]
    DegenerateSamples,
    #[error("unknown alternative {0:?}; expected two-sided, greater or less")]
    UnknownAlternative(String),
}

/// Alternative hypothesis about sample A relative to sample B.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Alternative {
    TwoSided,
    /// A tends to be larger than B.
    Greater,
    /// A tends to be smaller than B.
    Less,
}

impl FromStr for Alternative {
    type Err = StatsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "two-sided" => Ok(Alternative::TwoSided),
            "greater" => Ok(Alternative::Greater),
            "less" => Ok(Alternative::Less),
            other => Err(StatsError::UnknownAlternative(other.to_owned())),
        }
    }
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Alternative::TwoSided => "two-sided",
            Alternative::Greater => "greater",
            Alternative::Less => "less",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MwuResult {
    /// Pairs with a > b, ties counting one half.
    pub u_a: f64,
    pub u_b: f64,
    pub p: f64,
    /// Whether `p` comes from the exact null distribution.
    pub exact: bool,
}

/// Largest `n·m` for which the exact null distribution is used.
pub const EXACT_LIMIT: usize = 400;

/// Mann-Whitney U test with mid-ranks for ties. Exact when `n·m` is at most
/// [`EXACT_LIMIT`], otherwise a continuity-corrected normal approximation
/// with tie correction.
pub fn mann_whitney_u(a: &[f64], b: &[f64], alternative: Alternative) -> Result<MwuResult, StatsError> {
    if a.is_empty() {
        return Err(StatsError::EmptySample('A'));
    }
    if b.is_empty() {
        return Err(StatsError::EmptySample('B'));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let (n, m) = (a.len(), b.len());
    let ranks = mid_ranks(a.iter().chain(b).copied());
    if ranks.iter().all(|&r| r == ranks[0]) {
        return Err(StatsError::DegenerateSamples);
    }
    let rank_sum_a: f64 = ranks[..n].iter().sum();
    let u_a = rank_sum_a - (n * (n + 1)) as f64 / 2.0;
    let u_b = (n * m) as f64 - u_a;
    let (p, exact) = if n * m <= EXACT_LIMIT {
        (exact_p(&ranks, n, u_a, alternative), true)
    } else {
        (normal_p(&ranks, n, m, u_a, alternative), false)
    };
    Ok(MwuResult { u_a, u_b, p: p.clamp(0.0, 1.0), exact })
}

/// 1-based ranks, ties sharing the mean of their positions.
fn mid_ranks(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let values: Vec<f64> = values.collect();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
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
        i = j + 1;
    }
    ranks
}

/// Exact p from the distribution of A's rank sum over every way of
/// choosing `n` of the pooled ranks. Ranks are doubled so mid-ranks stay
/// integral.
fn exact_p(ranks: &[f64], n: usize, u_a: f64, alternative: Alternative) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (r * 2.0).round() as usize).collect();
    let max_sum: usize = doubled.iter().sum();
    // ways[k][s]: subsets of size k with doubled rank sum s.
    let mut ways = vec![vec![0.0f64; max_sum + 1]; n + 1];
    ways[0][0] = 1.0;
    for &r in &doubled {
        for k in (1..=n).rev() {
            let (lower, upper) = ways.split_at_mut(k);
            for s in (r..=max_sum).rev() {
                upper[0][s] += lower[k - 1][s - r];
            }
        }
    }
    let total: f64 = ways[n].iter().sum();
    let offset = (n * (n + 1)) as f64;
    let observed = 2.0 * u_a;
    let centre = (n * (ranks.len() - n)) as f64;
    let eps = 1e-9;
    let mut p = 0.0;
    for (s, &count) in ways[n].iter().enumerate() {
        if count == 0.0 {
            continue;
        }
        // Doubled U for this rank sum.
        let u2 = s as f64 - offset;
        let hit = match alternative {
            Alternative::Greater => u2 >= observed - eps,
            Alternative::Less => u2 <= observed + eps,
            Alternative::TwoSided => (u2 - centre).abs() >= (observed - centre).abs() - eps,
        };
        if hit {
            p += count;
        }
    }
    p / total
}

fn normal_p(ranks: &[f64], n: usize, m: usize, u_a: f64, alternative: Alternative) -> f64 {
    let big_n = (n + m) as f64;
    let mut sorted = ranks.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }
    let (nf, mf) = (n as f64, m as f64);
    let var = nf * mf / 12.0 * ((big_n + 1.0) - tie_term / (big_n * (big_n - 1.0)));
    let sd = var.sqrt();
    let mean = nf * mf / 2.0;
    let std_normal = Normal::new(0.0, 1.0).expect("unit normal");
    let upper = |z: f64| 1.0 - std_normal.cdf(z);
    match alternative {
        Alternative::Greater => upper((u_a - mean - 0.5) / sd),
        Alternative::Less => std_normal.cdf((u_a - mean + 0.5) / sd),
        Alternative::TwoSided => {
            let d = ((u_a - mean).abs() - 0.5).max(0.0);
            (2.0 * upper(d / sd)).min(1.0)
        }
    }
}

/// Median of a non-empty sample.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[k] } else { (v[k - 1] + v[k]) / 2.0 })
}
