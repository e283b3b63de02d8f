//! Banded LU factorization with partial pivoting.
//!
//! Storage follows the usual band layout: an `n x n` matrix with `kl` sub- and
//! `ku` super-diagonals keeps `2 kl + ku + 1` entries per column, the extra
//! `kl` rows absorbing fill-in from row interchanges.

// Index loops mirror the textbook factorization across several arrays.
#![allow(clippy::needless_range_loop)]

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    /// Column-major, `ldab = 2 kl + ku + 1` entries per column.
    ab: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let ldab = 2 * kl + ku + 1;
        Self {
            n,
            kl,
            ku,
            ab: vec![0.0; ldab * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn ldab(&self) -> usize {
        2 * self.kl + self.ku + 1
    }

    fn in_band(&self, i: usize, j: usize) -> bool {
        i + self.ku >= j && j + self.kl >= i
    }

    fn pos(&self, i: usize, j: usize) -> usize {
        // row kl + ku + i - j of column j
        j * self.ldab() + self.kl + self.ku + i - j
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i < self.n && j < self.n && self.in_band(i, j) {
            self.ab[self.pos(i, j)]
        } else {
            0.0
        }
    }

    /// Sets an entry; panics outside the band.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(
            i < self.n && j < self.n && self.in_band(i, j),
            "({i}, {j}) outside the band"
        );
        let p = self.pos(i, j);
        self.ab[p] = v;
    }

    /// Factorizes in place and returns the factors.
    pub fn lu(mut self) -> Result<BandLu> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let kv = kl + ku; // upper bandwidth of U after pivoting
        let mut piv = vec![0usize; n];
        let scale = self.ab.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = self.ab[self.pos_lu(k, k)].abs();
            for i in k + 1..=last {
                let v = self.ab[self.pos_lu(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            piv[k] = p;
            if best <= f64::EPSILON * 1e-2 * scale {
                return Err(Error::numeric(format!("singular banded matrix at column {k}")));
            }
            let jmax = (k + kv).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    let (a, b) = (self.pos_lu(k, j), self.pos_lu(p, j));
                    self.ab.swap(a, b);
                }
            }
            let pivot = self.ab[self.pos_lu(k, k)];
            for i in k + 1..=last {
                let l = self.ab[self.pos_lu(i, k)] / pivot;
                let at = self.pos_lu(i, k);
                self.ab[at] = l;
                if l != 0.0 {
                    for j in k + 1..=jmax {
                        let kj = self.ab[self.pos_lu(k, j)];
                        let ij = self.pos_lu(i, j);
                        self.ab[ij] -= l * kj;
                    }
                }
            }
        }
        Ok(BandLu { m: self, piv })
    }

    /// Like `pos`, but also admits the fill-in diagonals above the band.
    fn pos_lu(&self, i: usize, j: usize) -> usize {
        debug_assert!(i + self.kl + self.ku >= j && j + self.kl >= i);
        j * self.ldab() + self.kl + self.ku + i - j
    }
}

/// `P A = L U` in band storage.
#[derive(Debug, Clone)]
pub struct BandLu {
    m: BandMatrix,
    piv: Vec<usize>,
}

impl BandLu {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let a = &self.m;
        let (n, kl, kv) = (a.n, a.kl, a.kl + a.ku);
        assert_eq!(b.len(), n);
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.piv[k]);
            let xk = x[k];
            for i in k + 1..=(k + kl).min(n.saturating_sub(1)) {
                x[i] -= a.ab[a.pos_lu(i, k)] * xk;
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for j in k + 1..=(k + kv).min(n - 1) {
                s -= a.ab[a.pos_lu(k, j)] * x[j];
            }
            x[k] = s / a.ab[a.pos_lu(k, k)];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_dense_lu() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (n, kl, ku) in [(1, 0, 0), (5, 1, 1), (12, 2, 2), (30, 3, 3), (9, 1, 3)] {
            let mut band = BandMatrix::zeros(n, kl, ku);
            let mut dense = DMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    if i + ku >= j && j + kl >= i {
                        // weak diagonal so that pivoting actually happens
                        let v = rng.random_range(-1.0..1.0) + if i == j { 0.05 } else { 0.0 };
                        band.set(i, j, v);
                        dense[(i, j)] = v;
                    }
                }
            }
            let b: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let x = band.lu().unwrap().solve(&b);
            let y = dense.lu().solve(&DVector::from_vec(b.clone())).unwrap();
            for i in 0..n {
                assert!(
                    (x[i] - y[i]).abs() <= 1e-9 * (1.0 + y[i].abs()),
                    "n={n}: {} vs {}",
                    x[i],
                    y[i]
                );
            }
        }
    }

    #[test]
    fn singular_is_reported() {
        let mut band = BandMatrix::zeros(3, 1, 1);
        band.set(0, 0, 1.0);
        band.set(1, 1, 0.0);
        band.set(2, 2, 1.0);
        assert!(matches!(band.lu(), Err(Error::Numeric(_))));
    }

    #[test]
    fn outside_band_reads_zero() {
        let band = BandMatrix::zeros(4, 1, 1);
        assert_eq!(band.get(0, 3), 0.0);
        assert_eq!(band.dim(), 4);
    }
}
