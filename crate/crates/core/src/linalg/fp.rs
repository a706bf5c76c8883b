//! Dense linear algebra over a prime field `F_p`.
//!
//! Every lattice question in the crate ends up here: `σ` is `F_p`-linear, so
//! stability, membership and twisted equations on a finite window of
//! `π`-adic digits are linear systems over `F_p`.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMat {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

#[inline]
fn mulmod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse.
    let mut out = 1u32;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            out = mulmod(out, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    out
}

impl FpMat {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMat {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u32, cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(p, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, x % p);
            }
        }
        m
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u32) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn push_row(&mut self, r: &[u32]) {
        assert_eq!(r.len(), self.cols);
        self.data.extend_from_slice(r);
        self.rows += 1;
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &FpMat) -> FpMat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FpMat {
            p: self.p,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn transpose(&self) -> FpMat {
        let mut t = FpMat::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, o: &FpMat) -> FpMat {
        assert_eq!(self.cols, o.rows);
        let p = self.p;
        let mut out = FpMat::zeros(p, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b != 0 {
                        let idx = i * o.cols + j;
                        out.data[idx] = (out.data[idx] + mulmod(a, b, p)) % p;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p as u64)
                    as u32
            })
            .collect()
    }

    fn row_axpy(&mut self, dst: usize, src: usize, c: u32) {
        // row[dst] -= c * row[src]
        let p = self.p;
        let cols = self.cols;
        let neg = (p - c % p) % p;
        for j in 0..cols {
            let s = self.data[src * cols + j];
            if s != 0 {
                let d = &mut self.data[dst * cols + j];
                *d = (*d + mulmod(neg, s, p)) % p;
            }
        }
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..self.cols {
                    self.data.swap(piv * self.cols + j, r * self.cols + j);
                }
            }
            let inv = inv_mod(self.get(r, c), p);
            for j in 0..self.cols {
                let x = self.get(r, j);
                self.set(r, j, mulmod(x, inv, p));
            }
            for i in 0..self.rows {
                if i != r {
                    let f = self.get(i, c);
                    if f != 0 {
                        self.row_axpy(i, r, f);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        self.rows = r;
        self.data.truncate(r * self.cols);
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{x : self·x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let p = self.p;
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut out = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; self.cols];
            v[f] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = (p - m.get(r, f)) % p;
            }
            out.push(v);
        }
        out
    }

    /// A solution of `self·x = b` with every free variable set to zero, or
    /// `None` if the system is inconsistent. Columns to the left are preferred
    /// as pivots, so callers order unknowns by priority.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = FpMat::zeros(self.p, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i] % self.p);
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols);
        }
        Some(x)
    }

    /// The row space in reduced echelon form.
    pub fn row_space(&self) -> FpMat {
        let mut m = self.clone();
        m.rref();
        m
    }
}

/// Subspace of `F_p^n` stored by a reduced basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    basis: FpMat,
}

impl Subspace {
    pub fn zero(p: u32, n: usize) -> Self {
        Subspace {
            basis: FpMat::zeros(p, 0, n),
        }
    }

    pub fn full(p: u32, n: usize) -> Self {
        Subspace {
            basis: FpMat::identity(p, n),
        }
    }

    pub fn span(p: u32, n: usize, vecs: &[Vec<u32>]) -> Self {
        let mut b = FpMat::from_rows(p, n, vecs);
        b.rref();
        Subspace { basis: b }
    }

    /// `{x : c·x = 0}`.
    pub fn kernel_of(c: &FpMat) -> Self {
        Self::span(c.p(), c.cols(), &c.kernel())
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> Vec<Vec<u32>> {
        (0..self.basis.rows())
            .map(|i| self.basis.row(i).to_vec())
            .collect()
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut m = self.basis.clone();
        m.push_row(v);
        m.rank() == self.dim()
    }

    pub fn sum(&self, o: &Subspace) -> Subspace {
        let mut m = self.basis.vstack(&o.basis);
        m.rref();
        Subspace { basis: m }
    }

    /// Constraint rows `c` with `self = {x : c·x = 0}`.
    pub fn constraints(&self) -> FpMat {
        let n = self.ambient();
        let rows = self.basis.kernel();
        FpMat::from_rows(self.basis.p(), n, &rows)
    }

    pub fn intersect(&self, o: &Subspace) -> Subspace {
        Subspace::kernel_of(&self.constraints().vstack(&o.constraints()))
    }

    /// Image under `a` (vectors are columns: `x ↦ a·x`).
    pub fn image(&self, a: &FpMat) -> Subspace {
        let vs: Vec<Vec<u32>> = self.basis().iter().map(|v| a.mul_vec(v)).collect();
        Subspace::span(a.p(), a.rows(), &vs)
    }

    /// `{x : a·x ∈ self}`.
    pub fn preimage(&self, a: &FpMat) -> Subspace {
        Subspace::kernel_of(&self.constraints().mul(a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_prefers_left_pivots() {
        // x0 + x1 = 1 over F_2: pivot on x0, free x1 = 0.
        let a = FpMat::from_rows(2, 2, &[vec![1, 1]]);
        assert_eq!(a.solve(&[1]), Some(vec![1, 0]));
        let b = FpMat::from_rows(2, 2, &[vec![1, 1], vec![1, 1]]);
        assert_eq!(b.solve(&[1, 0]), None);
    }

    #[test]
    fn kernel_and_preimage() {
        let a = FpMat::from_rows(3, 3, &[vec![1, 2, 0], vec![0, 0, 1]]);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(|&x| x == 0));
        let w = Subspace::span(3, 2, &[vec![1, 0]]);
        let pre = w.preimage(&a);
        assert_eq!(pre.dim(), 2);
        for v in pre.basis() {
            assert!(w.contains(&a.mul_vec(&v)));
        }
    }

    #[test]
    fn intersections() {
        let u = Subspace::span(2, 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        let v = Subspace::span(2, 3, &[vec![0, 1, 0], vec![0, 0, 1]]);
        let w = u.intersect(&v);
        assert_eq!(w.dim(), 1);
        assert!(w.contains(&[0, 1, 0]));
        assert_eq!(u.sum(&v).dim(), 3);
    }
}
