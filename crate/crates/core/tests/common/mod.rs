#![allow(dead_code)]

use statrs::distribution::{ChiSquared, ContinuousCDF};

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn variance(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() as f64 - 1.0)
}

pub fn sd(v: &[f64]) -> f64 {
    variance(v).sqrt()
}

pub fn correlation(x: &[f64], y: &[f64]) -> f64 {
    let (mx, my) = (mean(x), mean(y));
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    cov / (sx * sy).sqrt()
}

/// Statistic over the whole sample and its standard error from `batches`
/// equal batches (batch-means method).
pub fn batched<F: Fn(&[usize]) -> f64>(n: usize, batches: usize, stat: F) -> (f64, f64) {
    let all: Vec<usize> = (0..n).collect();
    let size = n / batches;
    let per: Vec<f64> = (0..batches).map(|b| stat(&all[b * size..(b + 1) * size])).collect();
    (stat(&all), sd(&per) / (batches as f64).sqrt())
}

/// One-sample Kolmogorov–Smirnov distance.
pub fn ks_distance<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    let mut v = sample.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Asymptotic 1% critical value of the one-sample KS distance.
pub fn ks_critical_01(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

/// Upper-tail p-value of a chi-square statistic.
pub fn chi_square_sf(stat: f64, df: usize) -> f64 {
    ChiSquared::new(df as f64).unwrap().sf(stat)
}

/// Chi-square goodness of fit of values on [0, 1] to the uniform law, `bins` equal cells.
pub fn uniform_gof_p(u: &[f64], bins: usize) -> f64 {
    let mut counts = vec![0usize; bins];
    for &x in u {
        counts[((x * bins as f64) as usize).min(bins - 1)] += 1;
    }
    let e = u.len() as f64 / bins as f64;
    let stat: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
    chi_square_sf(stat, bins - 1)
}

/// Joint uniformity of pairs on [0, 1]^2 over a `bins` x `bins` grid.
pub fn uniform2_gof_p(u: &[(f64, f64)], bins: usize) -> f64 {
    let mut counts = vec![0usize; bins * bins];
    let cell = |x: f64| ((x * bins as f64) as usize).min(bins - 1);
    for &(a, b) in u {
        counts[cell(a) * bins + cell(b)] += 1;
    }
    let e = u.len() as f64 / (bins * bins) as f64;
    let stat: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
    chi_square_sf(stat, bins * bins - 1)
}

/// Two-sample chi-square homogeneity test on a 2-D grid whose cell edges are
/// the marginal quantiles of the pooled sample.
pub fn two_sample_2d_p(a: &[(f64, f64)], b: &[(f64, f64)], bins: usize) -> f64 {
    let edges = |pick: fn(&(f64, f64)) -> f64| {
        let mut v: Vec<f64> = a.iter().chain(b).map(pick).collect();
        v.sort_by(f64::total_cmp);
        (1..bins).map(|i| v[i * v.len() / bins]).collect::<Vec<f64>>()
    };
    let (ex, ey) = (edges(|p| p.0), edges(|p| p.1));
    let cell = |p: &(f64, f64)| ex.partition_point(|e| *e <= p.0) * bins + ey.partition_point(|e| *e <= p.1);
    let count = |s: &[(f64, f64)]| {
        let mut c = vec![0f64; bins * bins];
        for p in s {
            c[cell(p)] += 1.0;
        }
        c
    };
    let (ca, cb) = (count(a), count(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut stat = 0.0;
    let mut used = 0;
    for (x, y) in ca.iter().zip(&cb) {
        let tot = x + y;
        if tot == 0.0 {
            continue;
        }
        used += 1;
        let (exa, exb) = (tot * na / (na + nb), tot * nb / (na + nb));
        stat += (x - exa).powi(2) / exa + (y - exb).powi(2) / exb;
    }
    chi_square_sf(stat, used - 1)
}
