//! Banded LU with partial pivoting for the collocation systems, plus a thin
//! dense wrapper over nalgebra.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Square band matrix with `kl` sub- and `ku` super-diagonals, stored by
/// columns with `kl` extra rows reserved for pivoting fill-in.
#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    ld: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let ld = 2 * kl + ku + 1;
        BandMatrix { n, kl, ku, ld, data: vec![0.0; ld * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        j * self.ld + self.kl + self.ku + i - j
    }

    fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && i <= j + self.kl && j <= i + self.ku
    }

    /// Adds `v` to entry `(i, j)`.
    ///
    /// # Panics
    /// If `(i, j)` lies outside the declared band.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside band (kl = {}, ku = {})", self.kl, self.ku);
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[self.idx(i, j)]
        } else {
            0.0
        }
    }

    /// `A x`, using the unfactored band.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// Solves `A x = rhs` in place, consuming the matrix.
    pub fn solve(mut self, rhs: &mut [f64]) -> Result<()> {
        let n = self.n;
        assert_eq!(rhs.len(), n);
        let reach = self.kl + self.ku;
        for k in 0..n {
            let last_row = (k + self.kl).min(n - 1);
            let last_col = (k + reach).min(n - 1);
            let mut p = k;
            let mut best = self.data[self.idx(k, k)].abs();
            for i in k + 1..=last_row {
                let v = self.data[self.idx(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::Singular);
            }
            if p != k {
                for j in k..=last_col {
                    let (a, b) = (self.idx(k, j), self.idx(p, j));
                    self.data.swap(a, b);
                }
                rhs.swap(k, p);
            }
            let pivot = self.data[self.idx(k, k)];
            for i in k + 1..=last_row {
                let ik = self.idx(i, k);
                let l = self.data[ik] / pivot;
                if l == 0.0 {
                    continue;
                }
                self.data[ik] = 0.0;
                for j in k + 1..=last_col {
                    let kj = self.data[self.idx(k, j)];
                    let ij = self.idx(i, j);
                    self.data[ij] -= l * kj;
                }
                rhs[i] -= l * rhs[k];
            }
        }
        for k in (0..n).rev() {
            let last_col = (k + reach).min(n - 1);
            let s: f64 = (k + 1..=last_col).map(|j| self.data[self.idx(k, j)] * rhs[j]).sum();
            rhs[k] = (rhs[k] - s) / self.data[self.idx(k, k)];
        }
        if rhs.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::Singular)
        }
    }
}

/// Dense solve by LU with partial pivoting.
pub fn solve_dense(a: DMatrix<f64>, b: DVector<f64>) -> Result<DVector<f64>> {
    let x = a.lu().solve(&b).ok_or(Error::Singular)?;
    if x.iter().all(|v| v.is_finite()) {
        Ok(x)
    } else {
        Err(Error::Singular)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_of(band: &BandMatrix) -> DMatrix<f64> {
        let n = band.dim();
        DMatrix::from_fn(n, n, |i, j| band.get(i, j))
    }

    #[test]
    fn tridiagonal_matches_dense() {
        let n = 12;
        let mut band = BandMatrix::zeros(n, 1, 1);
        for i in 0..n {
            band.add(i, i, 2.0 + i as f64 * 0.1);
            if i > 0 {
                band.add(i, i - 1, -1.0);
            }
            if i + 1 < n {
                band.add(i, i + 1, -0.7);
            }
        }
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let dense = solve_dense(dense_of(&band), DVector::from_vec(b.clone())).unwrap();
        let mut x = b;
        band.solve(&mut x).unwrap();
        for i in 0..n {
            assert!((x[i] - dense[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn pivoting_needed() {
        // zero on the diagonal forces a row swap
        let mut band = BandMatrix::zeros(3, 1, 1);
        band.add(0, 1, 1.0);
        band.add(1, 0, 1.0);
        band.add(1, 2, 2.0);
        band.add(2, 1, 3.0);
        band.add(2, 2, 1.0);
        let x_true = [1.0, -2.0, 0.5];
        let mut b = band.mul_vec(&x_true);
        band.solve(&mut b).unwrap();
        for i in 0..3 {
            assert!((b[i] - x_true[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn wide_random_band() {
        let (n, kl, ku) = (40, 3, 5);
        let mut band = BandMatrix::zeros(n, kl, ku);
        let mut seed = 7u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                band.add(i, j, next());
            }
        }
        let x_true: Vec<f64> = (0..n).map(|i| 1.0 + i as f64).collect();
        let mut b = band.mul_vec(&x_true);
        band.solve(&mut b).unwrap();
        for i in 0..n {
            assert!((b[i] - x_true[i]).abs() < 1e-8 * x_true[i], "{i}: {}", b[i]);
        }
    }

    #[test]
    fn singular_reported() {
        let mut band = BandMatrix::zeros(2, 1, 1);
        band.add(0, 0, 1.0);
        band.add(0, 1, 1.0);
        band.add(1, 0, 1.0);
        band.add(1, 1, 1.0);
        let mut b = vec![1.0, 2.0];
        assert_eq!(band.solve(&mut b), Err(Error::Singular));
    }

    #[test]
    #[should_panic]
    fn outside_band_panics() {
        let mut band = BandMatrix::zeros(4, 1, 1);
        band.add(0, 3, 1.0);
    }
}
