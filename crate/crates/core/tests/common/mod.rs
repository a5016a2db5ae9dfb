//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subsep::Partition;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        rng.sample::<f64, _>(rand_distr::StandardNormal)
    })
}

pub fn gaussian_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len)
        .map(|_| rng.sample(rand_distr::StandardNormal))
        .collect()
}

/// Gaussian dictionary with unit-norm columns.
pub fn unit_columns(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    let mut a = gaussian(rng, rows, cols);
    for mut col in a.column_iter_mut() {
        let n = col.norm();
        col /= n;
    }
    a
}

/// Random partition of a random interval, interior gaps at least `min_gap`
/// of the interval length.
pub fn random_partition(rng: &mut ChaCha8Rng, max_interior: usize, min_gap: f64) -> Partition {
    let c = rng.random_range(-5.0..5.0);
    let d = c + rng.random_range(0.5..10.0);
    let n = rng.random_range(0..=max_interior);
    loop {
        let mut t: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
        t.sort_by(f64::total_cmp);
        let mut all = vec![0.0];
        all.extend_from_slice(&t);
        all.push(1.0);
        if all.windows(2).all(|w| w[1] - w[0] >= min_gap) {
            let interior = t.iter().map(|u| c + u * (d - c)).collect();
            return Partition::new(c, d, interior).expect("valid partition");
        }
    }
}

/// `n` uniform points covering `[c, d]` including both ends.
pub fn uniform_grid(c: f64, d: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                d
            } else {
                c + (d - c) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Least squares restricted to `support`, by Householder QR.
pub fn restricted_lsq(dict: &DMatrix<f64>, target: &[f64], support: &[usize]) -> (Vec<f64>, f64) {
    let f = DVector::from_column_slice(target);
    if support.is_empty() {
        return (vec![0.0; dict.ncols()], f.norm());
    }
    let sub = dict.select_columns(support);
    let qr = sub.clone().qr();
    let rhs = qr.q().tr_mul(&f);
    let x = qr
        .r()
        .solve_upper_triangular(&rhs)
        .expect("restricted system has full rank");
    let resid = (&f - &sub * &x).norm();
    let mut full = vec![0.0; dict.ncols()];
    for (k, &j) in support.iter().enumerate() {
        full[j] = x[k];
    }
    (full, resid)
}

/// Smallest support (size <= `max_size`) whose restricted fit leaves a residual
/// below `tol * ||target||`, found by exhaustive enumeration; ties broken by
/// smallest residual.
pub fn brute_force_support(
    dict: &DMatrix<f64>,
    target: &[f64],
    max_size: usize,
    tol: f64,
) -> Option<Vec<usize>> {
    let norm = target.iter().map(|v| v * v).sum::<f64>().sqrt();
    let m = dict.ncols();
    for size in 0..=max_size {
        let mut best: Option<(f64, Vec<usize>)> = None;
        for s in combinations(m, size) {
            let (_, r) = restricted_lsq(dict, target, &s);
            if r <= tol * norm && best.as_ref().is_none_or(|b| r < b.0) {
                best = Some((r, s));
            }
        }
        if let Some((_, s)) = best {
            return Some(s);
        }
    }
    None
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn norm(a: &[f64]) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
