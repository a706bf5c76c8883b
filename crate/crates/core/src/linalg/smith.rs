//! Elementary divisors over the valuation ring of `K((π))`.

use alloc::format;
use alloc::vec::Vec;

use super::mat::SMat;
use crate::error::{Error, Result};
use crate::tower::Field;

/// Valuations of the Smith normal form of `m` over `K[[π]]`, ascending.
///
/// Pivots are chosen by lowest valuation, then lowest row and column. Fails
/// with `PrecisionExhausted` if a pivot cannot be certified, which includes
/// rank-deficient input.
pub fn smith_valuations<K: Field>(m: &SMat<K>) -> Result<Vec<i64>> {
    let n = m.rows().min(m.cols());
    let mut a = m.clone();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut best: Option<(i64, usize, usize)> = None;
        for i in k..a.rows() {
            for j in k..a.cols() {
                if let Some(v) = a.get(i, j).valuation() {
                    if best.is_none_or(|b| v < b.0) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else {
            return Err(Error::PrecisionExhausted(format!(
                "elementary divisor {} is zero to precision",
                k + 1
            )));
        };
        a.swap_rows(k, pi);
        a.swap_cols(k, pj);
        let pinv = a.get(k, k).invert()?;
        for i in k + 1..a.rows() {
            if !a.get(i, k).is_zero() {
                let f = a.get(i, k).mul(&pinv);
                a.axpy_row(i, k, &f);
            }
        }
        for j in k + 1..a.cols() {
            if !a.get(k, j).is_zero() {
                let f = a.get(k, j).mul(&pinv);
                a.axpy_col(j, k, &f);
            }
        }
        out.push(v);
    }
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::{Gf, LaurentSeries};

    #[test]
    fn jordan_block_type() {
        let k = Gf::new(2, 1).unwrap();
        let s = |t: &[(i64, u32)]| LaurentSeries::from_terms(k.clone(), t, 30);
        // [[π, 1], [0, π]] has type (0, 2).
        let m = SMat::from_fn(&k, 2, 2, |i, j| match (i, j) {
            (0, 0) | (1, 1) => s(&[(1, 1)]),
            (0, 1) => s(&[(0, 1)]),
            _ => s(&[]),
        });
        assert_eq!(smith_valuations(&m).unwrap(), [0, 2]);
        let d = SMat::diag(&k, &[s(&[(0, 1)]), s(&[(2, 1)])], 30);
        assert_eq!(smith_valuations(&d).unwrap(), [0, 2]);
        let z = SMat::zeros(&k, 1, 1, 30);
        assert!(smith_valuations(&z).is_err());
    }
}
