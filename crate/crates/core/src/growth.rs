//! Growth functions `f(n) = dim S_n`, GK-dimension estimates and the
//! linear-growth bound on the number of ends.

use std::fmt::Write as _;

use serde::Serialize;

use crate::algebra::AlgebraSpec;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthProfile {
    pub n_max: u64,
    /// `f[i] = dim S_{i+1}`.
    pub f: Vec<u64>,
    /// `gaps[i] = f(i+2) - f(i+1)`.
    pub gaps: Vec<u64>,
    /// `log f(n) / log n`, undefined at `n = 1`.
    pub log_ratio: Vec<Option<f64>>,
    /// Mean of the log ratios over the last quartile of the range.
    pub tail_average: Option<f64>,
    /// Smallest `C` with `f(n) <= C n` over the range, present only when
    /// the gaps look bounded.
    pub linear_constant: Option<u64>,
    /// Always set: every conclusion here only covers `1..=n_max`.
    pub range_limited: bool,
}

impl GrowthProfile {
    pub fn f_at(&self, n: u64) -> Option<u64> {
        n.checked_sub(1).and_then(|i| self.f.get(i as usize)).copied()
    }

    /// Columns `n,f,gap,log_ratio`; the gap column holds `f(n+1) - f(n)`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,f,gap,log_ratio\n");
        for (i, f) in self.f.iter().enumerate() {
            let gap = self.gaps.get(i).map(u64::to_string).unwrap_or_default();
            let ratio = self.log_ratio[i].map(|r| format!("{r:.6}")).unwrap_or_default();
            let _ = writeln!(out, "{},{f},{gap},{ratio}", i + 1);
        }
        out
    }
}

/// Bounded-gap heuristic: the largest gap in the second half of the range
/// does not exceed the largest gap in the first half.
fn gaps_look_bounded(gaps: &[u64]) -> bool {
    if gaps.len() < 2 {
        return true;
    }
    let (head, tail) = gaps.split_at(gaps.len() / 2);
    tail.iter().max() <= head.iter().max()
}

pub fn growth_function(alg: &AlgebraSpec, n_max: u64) -> GrowthProfile {
    let n_max = n_max.max(1);
    let mut f = Vec::with_capacity(n_max as usize);
    let mut acc = alg.degree_block(0).len() as u64;
    for n in 1..=n_max {
        acc += alg.degree_block(n).len() as u64;
        f.push(acc);
    }
    let gaps: Vec<u64> = f.windows(2).map(|w| w[1] - w[0]).collect();
    let log_ratio: Vec<Option<f64>> = f
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let n = (i + 1) as f64;
            (i > 0).then(|| (v as f64).ln() / n.ln())
        })
        .collect();
    let start = (3 * n_max as usize) / 4;
    let tail: Vec<f64> = log_ratio[start..].iter().flatten().copied().collect();
    let tail_average = (!tail.is_empty()).then(|| tail.iter().sum::<f64>() / tail.len() as f64);
    let linear_constant = gaps_look_bounded(&gaps).then(|| {
        f.iter().enumerate().map(|(i, &v)| v.div_ceil(i as u64 + 1)).max().unwrap_or(0)
    });
    GrowthProfile { n_max, f, gaps, log_ratio, tail_average, linear_constant, range_limited: true }
}

/// Upper bound on the number of ends for (empirically) linear growth.
pub fn end_upper_bound(profile: &GrowthProfile) -> Option<u64> {
    profile.linear_constant
}
