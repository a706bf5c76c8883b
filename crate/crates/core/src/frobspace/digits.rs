//! `F_p`-coordinates on windows of `π`-adic digits.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::FpMat;
use crate::tower::{Gf, LaurentSeries, Series};

/// Coefficients of `π^e` for `lo ≤ e < hi` in each of `n` components, each
/// split into its `f` digits over `F_p`.
///
/// Coordinates are exponent-major. With `descending` set, higher exponents
/// come first, so a solver that prefers left pivots leaves low digits free.
#[derive(Clone, Debug)]
pub struct Window {
    pub n: usize,
    pub lo: i64,
    pub hi: i64,
    pub f: usize,
    pub descending: bool,
}

impl Window {
    pub fn new(k: &Gf, n: usize, lo: i64, hi: i64) -> Self {
        Window {
            n,
            lo,
            hi: hi.max(lo),
            f: k.degree() as usize,
            descending: false,
        }
    }

    pub fn descending(mut self) -> Self {
        self.descending = true;
        self
    }

    pub fn width(&self) -> usize {
        (self.hi - self.lo) as usize
    }

    pub fn len(&self) -> usize {
        self.n * self.width() * self.f
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, comp: usize, exp: i64, d: usize) -> usize {
        let e = if self.descending {
            self.hi - 1 - exp
        } else {
            exp - self.lo
        } as usize;
        (e * self.n + comp) * self.f + d
    }

    /// `(component, exponent, digit)` of a coordinate.
    pub fn coords(&self, idx: usize) -> (usize, i64, usize) {
        let d = idx % self.f;
        let comp = (idx / self.f) % self.n;
        let e = (idx / self.f / self.n) as i64;
        let exp = if self.descending {
            self.hi - 1 - e
        } else {
            self.lo + e
        };
        (comp, exp, d)
    }

    pub fn contains_exp(&self, e: i64) -> bool {
        self.lo <= e && e < self.hi
    }

    /// Digits of the coefficients of `v` inside the window.
    pub fn encode(&self, k: &Gf, v: &[Series]) -> Vec<u32> {
        let mut out = vec![0u32; self.len()];
        for (comp, x) in v.iter().enumerate() {
            for (e, &c) in x.terms() {
                if self.contains_exp(e) {
                    for (d, digit) in k.digits(c).into_iter().enumerate() {
                        out[self.index(comp, e, d)] = digit;
                    }
                }
            }
        }
        out
    }

    pub fn decode(&self, k: &Gf, digits: &[u32], prec: i64) -> Vec<Series> {
        (0..self.n)
            .map(|comp| {
                let terms: Vec<(i64, u32)> = (self.lo..self.hi)
                    .filter_map(|e| {
                        let ds: Vec<u32> = (0..self.f)
                            .map(|d| digits[self.index(comp, e, d)])
                            .collect();
                        let c = k.from_digits(&ds);
                        (c != 0).then_some((e, c))
                    })
                    .collect();
                LaurentSeries::from_terms(k.clone(), &terms, prec)
            })
            .collect()
    }

    /// The vector with a single nonzero digit at coordinate `idx`.
    pub fn unit(&self, k: &Gf, idx: usize, prec: i64) -> Vec<Series> {
        let (comp, exp, d) = self.coords(idx);
        (0..self.n)
            .map(|c| {
                if c == comp {
                    LaurentSeries::monomial(k.clone(), k.basis_elem(d as u32), exp, prec)
                } else {
                    LaurentSeries::zero(k.clone(), prec)
                }
            })
            .collect()
    }
}

/// The `F_p`-matrix of an additive map `src → dst`, read off on unit vectors.
/// Output digits outside `dst` are dropped.
pub fn matrix_of(
    k: &Gf,
    src: &Window,
    dst: &Window,
    prec: i64,
    map: impl Fn(&[Series]) -> Vec<Series>,
) -> FpMat {
    let mut m = FpMat::zeros(k.p(), dst.len(), src.len());
    for j in 0..src.len() {
        let y = map(&src.unit(k, j, prec));
        for (i, x) in dst.encode(k, &y).into_iter().enumerate() {
            if x != 0 {
                m.set(i, j, x);
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let k = Gf::new(4, 1).unwrap();
        let w = Window::new(&k, 2, -2, 3).descending();
        let v = vec![
            LaurentSeries::from_terms(k.clone(), &[(-2, 3), (1, 2)], 10),
            LaurentSeries::from_terms(k.clone(), &[(0, 1), (2, 3)], 10),
        ];
        let d = w.encode(&k, &v);
        let back = w.decode(&k, &d, 10);
        assert!(back.iter().zip(&v).all(|(a, b)| a.eq_to_prec(b)));
        for i in 0..w.len() {
            let (c, e, dd) = w.coords(i);
            assert_eq!(w.index(c, e, dd), i);
        }
    }
}
