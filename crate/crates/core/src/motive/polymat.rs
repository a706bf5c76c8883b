//! Matrices over `K[t]`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::tower::{Field, TPoly};

#[derive(Clone, Debug)]
pub struct PolyMat<K: Field> {
    rows: usize,
    cols: usize,
    data: Vec<TPoly<K>>,
}

impl<K: Field> PolyMat<K> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMat {
            rows,
            cols,
            data: alloc::vec![TPoly::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> TPoly<K>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        PolyMat { rows, cols, data }
    }

    /// `p·I_n`.
    pub fn scalar(n: usize, p: &TPoly<K>) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { p.clone() } else { TPoly::zero() })
    }

    pub fn identity(k: &K, n: usize) -> Self {
        Self::scalar(n, &TPoly::one(k))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &TPoly<K> {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: TPoly<K>) {
        self.data[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[TPoly<K>] {
        &self.data
    }

    pub fn map(&self, f: impl Fn(&TPoly<K>) -> TPoly<K>) -> Self {
        PolyMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn add(&self, k: &K, o: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).add(k, o.get(i, j))
        })
    }

    pub fn mul(&self, k: &K, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        Self::from_fn(self.rows, o.cols, |i, j| {
            (0..self.cols).fold(TPoly::zero(), |acc, l| {
                acc.add(k, &self.get(i, l).mul(k, o.get(l, j)))
            })
        })
    }

    pub fn mul_vec(&self, k: &K, v: &[TPoly<K>]) -> Vec<TPoly<K>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(TPoly::zero(), |acc, l| {
                    acc.add(k, &self.get(i, l).mul(k, &v[l]))
                })
            })
            .collect()
    }

    pub fn scale(&self, k: &K, p: &TPoly<K>) -> Self {
        self.map(|x| x.mul(k, p))
    }

    pub fn twist(&self, k: &K) -> Self {
        self.map(|x| x.twist(k))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn kron(&self, k: &K, o: &Self) -> Self {
        Self::from_fn(self.rows * o.rows, self.cols * o.cols, |i, j| {
            self.get(i / o.rows, j / o.cols)
                .mul(k, o.get(i % o.rows, j % o.cols))
        })
    }

    pub fn direct_sum(&self, o: &Self) -> Self {
        Self::from_fn(self.rows + o.rows, self.cols + o.cols, |i, j| {
            match (i < self.rows, j < self.cols) {
                (true, true) => self.get(i, j).clone(),
                (false, false) => o.get(i - self.rows, j - self.cols).clone(),
                _ => TPoly::zero(),
            }
        })
    }

    fn minor(&self, skip_r: usize, skip_c: usize) -> Self {
        Self::from_fn(self.rows - 1, self.cols - 1, |i, j| {
            let ii = if i < skip_r { i } else { i + 1 };
            let jj = if j < skip_c { j } else { j + 1 };
            self.get(ii, jj).clone()
        })
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self, k: &K) -> TPoly<K> {
        assert_eq!(self.rows, self.cols);
        match self.rows {
            0 => TPoly::one(k),
            1 => self.get(0, 0).clone(),
            2 => self
                .get(0, 0)
                .mul(k, self.get(1, 1))
                .sub(k, &self.get(0, 1).mul(k, self.get(1, 0))),
            n => {
                let mut acc = TPoly::zero();
                for j in 0..n {
                    if self.get(0, j).is_zero() {
                        continue;
                    }
                    let t = self.get(0, j).mul(k, &self.minor(0, j).det(k));
                    acc = if j % 2 == 0 {
                        acc.add(k, &t)
                    } else {
                        acc.sub(k, &t)
                    };
                }
                acc
            }
        }
    }

    /// Adjugate: `adj(A)·A = det(A)·I`.
    pub fn adjugate(&self, k: &K) -> Self {
        let n = self.rows;
        if n == 1 {
            return Self::identity(k, 1);
        }
        Self::from_fn(n, n, |i, j| {
            let c = self.minor(j, i).det(k);
            if (i + j) % 2 == 0 {
                c
            } else {
                c.neg(k)
            }
        })
    }

    pub fn max_degree(&self) -> usize {
        self.data
            .iter()
            .filter_map(|p| p.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }

    pub fn render(&self, k: &K) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = (0..self.cols).map(|j| self.get(i, j).render(k)).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::Gf;

    #[test]
    fn adjugate_identity() {
        let k = Gf::new(3, 1).unwrap();
        let p = |c: &[i64]| TPoly::from_ints(&k, c);
        let m = PolyMat::from_fn(3, 3, |i, j| p(&[(i + 2 * j) as i64, (i * j) as i64, 1]));
        let d = m.det(&k);
        let prod = m.adjugate(&k).mul(&k, &m);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { d.clone() } else { TPoly::zero() };
                assert!(prod.get(i, j).eq_poly(&k, &want));
            }
        }
    }
}
