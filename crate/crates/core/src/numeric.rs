//! Summation helpers with a reduction order that does not depend on the
//! number of worker threads.

use rayon::prelude::*;

/// Fixed block length for parallel reductions. Block partial sums are
/// combined left to right, so results are bitwise stable for a given length.
pub const BLOCK: usize = 4096;

/// Neumaier compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
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

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    if a.len() <= BLOCK {
        return a.iter().zip(b).map(|(x, y)| x * y).sum();
    }
    let partial: Vec<f64> = a
        .par_chunks(BLOCK)
        .zip(b.par_chunks(BLOCK))
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum())
        .collect();
    partial.iter().sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sum(a: &[f64]) -> f64 {
    if a.len() <= BLOCK {
        return a.iter().sum();
    }
    let partial: Vec<f64> = a.par_chunks(BLOCK).map(|x| x.iter().sum()).collect();
    partial.iter().sum()
}

pub fn abs_sum(a: &[f64]) -> f64 {
    a.iter().map(|x| x.abs()).sum()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_recovers_small_terms() {
        let s: CompensatedSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn blocked_dot_is_thread_count_independent() {
        let a: Vec<f64> = (0..50_000).map(|k| ((k * 7919) % 1000) as f64 * 1e-3 - 0.37).collect();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| (dot(&a, &a), sum(&a)))
        };
        let (d1, s1) = run(1);
        let (d4, s4) = run(4);
        assert_eq!(d1.to_bits(), d4.to_bits());
        assert_eq!(s1.to_bits(), s4.to_bits());
    }
}
