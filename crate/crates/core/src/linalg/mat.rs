//! Matrices of Laurent series.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::tower::{Field, LaurentSeries, TwistStyle};

/// A dense row-major matrix over `K((π))`.
#[derive(Clone, Debug)]
pub struct SMat<K: Field> {
    field: K,
    rows: usize,
    cols: usize,
    data: Vec<LaurentSeries<K>>,
}

impl<K: Field> SMat<K> {
    pub fn zeros(field: &K, rows: usize, cols: usize, prec: i64) -> Self {
        let z = LaurentSeries::zero(field.clone(), prec);
        SMat {
            field: field.clone(),
            rows,
            cols,
            data: alloc::vec![z; rows * cols],
        }
    }

    pub fn identity(field: &K, n: usize, prec: i64) -> Self {
        let mut m = Self::zeros(field, n, n, prec);
        for i in 0..n {
            m.set(i, i, LaurentSeries::one(field.clone(), prec));
        }
        m
    }

    pub fn from_fn(
        field: &K,
        rows: usize,
        cols: usize,
        f: impl Fn(usize, usize) -> LaurentSeries<K>,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        SMat {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    /// A diagonal matrix.
    pub fn diag(field: &K, d: &[LaurentSeries<K>], prec: i64) -> Self {
        let mut m = Self::zeros(field, d.len(), d.len(), prec);
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn field(&self) -> &K {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentSeries<K> {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: LaurentSeries<K>) {
        self.data[i * self.cols + j] = x;
    }

    pub fn col(&self, j: usize) -> Vec<LaurentSeries<K>> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<LaurentSeries<K>> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn from_cols(field: &K, cols: &[Vec<LaurentSeries<K>>]) -> Self {
        let rows = cols.first().map_or(0, |c| c.len());
        Self::from_fn(field, rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn map(&self, f: impl Fn(&LaurentSeries<K>) -> LaurentSeries<K>) -> Self {
        SMat {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self::from_fn(&self.field, self.rows, self.cols, |i, j| {
            self.get(i, j).add(o.get(i, j))
        })
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self::from_fn(&self.field, self.rows, self.cols, |i, j| {
            self.get(i, j).sub(o.get(i, j))
        })
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        Self::from_fn(&self.field, self.rows, o.cols, |i, j| {
            let mut acc: Option<LaurentSeries<K>> = None;
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = o.get(k, j);
                let t = a.mul(b);
                acc = Some(match acc {
                    None => t,
                    Some(s) => s.add(&t),
                });
            }
            acc.unwrap_or_else(|| LaurentSeries::zero(self.field.clone(), i64::MAX / 4))
        })
    }

    pub fn mul_vec(&self, v: &[LaurentSeries<K>]) -> Vec<LaurentSeries<K>> {
        let m = Self::from_cols(&self.field, &[v.to_vec()]);
        self.mul(&m).col(0)
    }

    pub fn scale(&self, c: &LaurentSeries<K>) -> Self {
        self.map(|x| x.mul(c))
    }

    /// Multiplies every entry by `π^k`.
    pub fn shift(&self, k: i64) -> Self {
        self.map(|x| x.shift(k))
    }

    pub fn twist(&self, style: TwistStyle) -> Self {
        self.map(|x| x.frobenius(style))
    }

    pub fn truncate(&self, prec: i64) -> Self {
        self.map(|x| x.truncate(prec))
    }

    pub fn with_prec(&self, prec: i64) -> Self {
        self.map(|x| x.with_prec(prec))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    /// Kronecker product.
    pub fn kron(&self, o: &Self) -> Self {
        Self::from_fn(
            &self.field,
            self.rows * o.rows,
            self.cols * o.cols,
            |i, j| {
                self.get(i / o.rows, j / o.cols)
                    .mul(o.get(i % o.rows, j % o.cols))
            },
        )
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, o: &Self, prec: i64) -> Self {
        let mut m = Self::zeros(&self.field, self.rows + o.rows, self.cols + o.cols, prec);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..o.rows {
            for j in 0..o.cols {
                m.set(self.rows + i, self.cols + j, o.get(i, j).clone());
            }
        }
        m
    }

    /// Smallest entry valuation; `None` if every entry is zero to precision.
    pub fn min_valuation(&self) -> Option<i64> {
        self.data.iter().filter_map(|x| x.valuation()).min()
    }

    /// Smallest precision among the entries.
    pub fn min_prec(&self) -> i64 {
        self.data
            .iter()
            .map(|x| x.prec())
            .min()
            .unwrap_or(i64::MAX / 4)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn eq_to_prec(&self, o: &Self) -> bool {
        (self.rows, self.cols) == (o.rows, o.cols) && self.sub(o).is_zero()
    }

    /// Inverse over `K((π))` by Gauss–Jordan with minimal-valuation pivots.
    pub fn inverse(&self) -> Result<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let prec = self.min_prec();
        let mut a = self.clone();
        let mut inv = Self::identity(&self.field, n, prec.max(1) + n as i64 * 4);
        for c in 0..n {
            let piv = (c..n)
                .filter_map(|i| a.get(i, c).valuation().map(|v| (v, i)))
                .min()
                .ok_or_else(|| {
                    Error::PrecisionExhausted(format!("no certified pivot in column {}", c))
                })?
                .1;
            a.swap_rows(c, piv);
            inv.swap_rows(c, piv);
            let pinv = a.get(c, c).invert()?;
            a.scale_row(c, &pinv);
            inv.scale_row(c, &pinv);
            for i in 0..n {
                if i == c || a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).clone();
                a.axpy_row(i, c, &f);
                inv.axpy_row(i, c, &f);
            }
        }
        Ok(inv)
    }

    /// Determinant by elimination with minimal-valuation pivots.
    pub fn det(&self) -> Result<LaurentSeries<K>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut det = LaurentSeries::one(self.field.clone(), self.min_prec().max(1));
        for c in 0..n {
            let Some((_, piv)) = (c..n)
                .filter_map(|i| a.get(i, c).valuation().map(|v| (v, i)))
                .min()
            else {
                return Err(Error::PrecisionExhausted(format!(
                    "determinant: column {} is zero to precision",
                    c
                )));
            };
            if piv != c {
                a.swap_rows(c, piv);
                det = det.neg();
            }
            det = det.mul(a.get(c, c));
            let pinv = a.get(c, c).invert()?;
            for i in c + 1..n {
                if a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).mul(&pinv);
                a.axpy_row(i, c, &f);
            }
        }
        Ok(det)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn scale_row(&mut self, i: usize, c: &LaurentSeries<K>) {
        for j in 0..self.cols {
            let x = self.get(i, j).mul(c);
            self.set(i, j, x);
        }
    }

    /// `row[dst] -= f · row[src]`.
    pub fn axpy_row(&mut self, dst: usize, src: usize, f: &LaurentSeries<K>) {
        for j in 0..self.cols {
            let x = self.get(dst, j).sub(&self.get(src, j).mul(f));
            self.set(dst, j, x);
        }
    }

    /// `col[dst] -= f · col[src]`.
    pub fn axpy_col(&mut self, dst: usize, src: usize, f: &LaurentSeries<K>) {
        for i in 0..self.rows {
            let x = self.get(i, dst).sub(&self.get(i, src).mul(f));
            self.set(i, dst, x);
        }
    }

    pub fn render(&self) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = (0..self.cols).map(|j| self.get(i, j).render()).collect();
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
    fn inverse_roundtrip() {
        let k = Gf::new(3, 1).unwrap();
        let s = |t: &[(i64, u32)]| LaurentSeries::from_terms(k.clone(), t, 20);
        let m = SMat::from_fn(&k, 2, 2, |i, j| match (i, j) {
            (0, 0) => s(&[(1, 1)]),
            (0, 1) => s(&[(-1, 2), (0, 1)]),
            (1, 0) => s(&[(0, 1)]),
            _ => s(&[(2, 1)]),
        });
        let inv = m.inverse().unwrap();
        let id = m.mul(&inv);
        assert!(id.eq_to_prec(&SMat::identity(&k, 2, 10)));
        let d = m.det().unwrap();
        // π·π² − (2π⁻¹ + 1)
        assert_eq!(d.valuation(), Some(-1));
    }
}
