//! Full-rank `O_E`-lattices in `E^n` in Hermite normal form.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::SMat;
use crate::tower::{Gf, LaurentSeries, Series};

/// A lattice given by an upper-triangular basis (columns) with diagonal
/// entries exactly `π^{dᵢ}` and every entry of row `i` to the right of the
/// diagonal reduced modulo `π^{dᵢ}`. This form is unique, so two lattices are
/// equal iff their normal forms are.
///
/// Pivots are found bottom-up, lowest valuation first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OLattice {
    k: Gf,
    n: usize,
    diag: Vec<i64>,
    /// `upper[j][i]` for `i < j`: nonzero terms `(exponent, coefficient)` with
    /// exponent `< diag[i]`.
    upper: Vec<Vec<Vec<(i64, u32)>>>,
}

fn terms_of(x: &Series) -> Vec<(i64, u32)> {
    x.terms().map(|(e, &c)| (e, c)).collect()
}

impl OLattice {
    /// `π^a O^n`.
    pub fn scaled_standard(k: &Gf, n: usize, a: i64) -> Self {
        OLattice {
            k: k.clone(),
            n,
            diag: vec![a; n],
            upper: (0..n).map(|j| vec![Vec::new(); j]).collect(),
        }
    }

    pub fn standard(k: &Gf, n: usize) -> Self {
        Self::scaled_standard(k, n, 0)
    }

    /// The lattice generated by `gens` together with `π^floor O^n`.
    ///
    /// Generators are read as exact Laurent polynomials; only their
    /// coefficients below `floor` matter.
    pub fn from_generators(k: &Gf, n: usize, gens: &[Vec<Series>], floor: i64) -> Self {
        let lowest = gens
            .iter()
            .flat_map(|g| g.iter().map(|x| x.val_bound()))
            .min()
            .unwrap_or(floor)
            .min(floor);
        let work = 2 * floor - lowest + 2;
        let exact = |x: &Series| x.truncate(floor).extend_prec(work);
        let mut pool: Vec<Vec<Series>> =
            gens.iter().map(|g| g.iter().map(exact).collect()).collect();
        for i in 0..n {
            let mut e = vec![LaurentSeries::zero(k.clone(), work); n];
            e[i] = LaurentSeries::monomial(k.clone(), 1, floor, work);
            pool.push(e);
        }
        let mut cols: Vec<Option<Vec<Series>>> = vec![None; n];
        let mut diag = vec![0i64; n];
        for i in (0..n).rev() {
            let (pos, d) = pool
                .iter()
                .enumerate()
                .filter_map(|(idx, g)| g[i].valuation().map(|v| (v, idx)))
                .min()
                .map(|(v, idx)| (idx, v))
                .expect("pi^floor e_i is always available");
            let g = pool.swap_remove(pos);
            let unit = g[i].shift(-d);
            let uinv = unit.invert().expect("pivot is a unit");
            let g: Vec<Series> = g.iter().map(|x| exact(&x.mul(&uinv))).collect();
            for h in pool.iter_mut() {
                if h[i].is_zero() {
                    continue;
                }
                let c = h[i].shift(-d);
                for r in 0..=i {
                    h[r] = exact(&h[r].sub(&g[r].mul(&c)));
                }
                h[i] = LaurentSeries::zero(k.clone(), work);
            }
            pool.retain(|h| h.iter().any(|x| !x.is_zero()));
            diag[i] = d;
            let mut g = g;
            g[i] = LaurentSeries::monomial(k.clone(), 1, d, work);
            for x in g.iter_mut().skip(i + 1) {
                *x = LaurentSeries::zero(k.clone(), work);
            }
            cols[i] = Some(g);
        }
        let mut cols: Vec<Vec<Series>> = cols.into_iter().map(|c| c.unwrap()).collect();
        for j in 0..n {
            for i in (0..j).rev() {
                let q = high_part(&cols[j][i], diag[i]);
                if q.is_zero() {
                    continue;
                }
                for r in 0..=i {
                    let v = exact(&cols[j][r].sub(&cols[i][r].mul(&q)));
                    cols[j][r] = v;
                }
            }
        }
        let upper = (0..n)
            .map(|j| {
                (0..j)
                    .map(|i| terms_of(&cols[j][i].truncate(diag[i])))
                    .collect()
            })
            .collect();
        OLattice {
            k: k.clone(),
            n,
            diag,
            upper,
        }
    }

    /// The lattice spanned by the columns of `b` (assumed nonsingular);
    /// `floor` must satisfy `π^floor O^n ⊆ L`.
    pub fn from_basis(b: &SMat<Gf>, floor: i64) -> Self {
        let gens: Vec<Vec<Series>> = (0..b.cols()).map(|j| b.col(j)).collect();
        Self::from_generators(b.field(), b.rows(), &gens, floor)
    }

    pub fn residue_field(&self) -> &Gf {
        &self.k
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Diagonal exponents `dᵢ`.
    pub fn diag(&self) -> &[i64] {
        &self.diag
    }

    /// `Σ dᵢ`: the index of `O^n` relative to this lattice, as a length.
    pub fn covolume(&self) -> i64 {
        self.diag.iter().sum()
    }

    /// Smallest `N` with `π^N O^n ⊆ L`.
    pub fn floor(&self) -> i64 {
        let top = self.diag.iter().copied().max().unwrap_or(0);
        let spread = top - self.lowest_exponent();
        let prec = top + spread * (self.n as i64 + 1) + 2;
        let mut n = top;
        loop {
            let ok = (0..self.n).all(|i| {
                let mut e = alloc::vec![LaurentSeries::zero(self.k.clone(), prec); self.n];
                e[i] = LaurentSeries::monomial(self.k.clone(), 1, n, prec);
                self.contains(&e).unwrap_or(false)
            });
            if ok {
                return n;
            }
            n += 1;
        }
    }

    /// Lowest exponent appearing in the basis.
    pub fn lowest_exponent(&self) -> i64 {
        let mut lo = self.diag.iter().copied().min().unwrap_or(0);
        for col in &self.upper {
            for e in col {
                if let Some(t) = e.first() {
                    lo = lo.min(t.0);
                }
            }
        }
        lo
    }

    pub fn entry(&self, i: usize, j: usize, prec: i64) -> Series {
        let k = self.k.clone();
        if i == j {
            LaurentSeries::monomial(k, 1, self.diag[i], prec)
        } else if i < j {
            LaurentSeries::from_terms(k, &self.upper[j][i], prec)
        } else {
            LaurentSeries::zero(k, prec)
        }
    }

    /// Basis matrix with entries declared exact to `prec`.
    pub fn basis(&self, prec: i64) -> SMat<Gf> {
        SMat::from_fn(&self.k, self.n, self.n, |i, j| self.entry(i, j, prec))
    }

    pub fn columns(&self, prec: i64) -> Vec<Vec<Series>> {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.entry(i, j, prec)).collect())
            .collect()
    }

    /// `π^k L`.
    pub fn scale(&self, k: i64) -> Self {
        OLattice {
            k: self.k.clone(),
            n: self.n,
            diag: self.diag.iter().map(|d| d + k).collect(),
            upper: self
                .upper
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|t| t.iter().map(|&(e, x)| (e + k, x)).collect())
                        .collect()
                })
                .collect(),
        }
    }

    /// `L ∩ E^m` for the first `m` coordinates; by triangularity this is the
    /// top-left `m × m` block of the normal form.
    pub fn leading_block(&self, m: usize) -> Self {
        let m = m.min(self.n);
        OLattice {
            k: self.k.clone(),
            n: m,
            diag: self.diag[..m].to_vec(),
            upper: self.upper[..m].to_vec(),
        }
    }

    /// `L ⊕ ⋯ ⊕ L` (`copies` times) in `E^{n·copies}`.
    pub fn block_diagonal(&self, copies: usize) -> Self {
        let n = self.n;
        let mut diag = Vec::with_capacity(n * copies);
        let mut upper = Vec::with_capacity(n * copies);
        for b in 0..copies {
            diag.extend_from_slice(&self.diag);
            for j in 0..n {
                let mut col = vec![Vec::new(); b * n];
                col.extend(self.upper[j].iter().cloned());
                upper.push(col);
            }
        }
        OLattice {
            k: self.k.clone(),
            n: n * copies,
            diag,
            upper,
        }
    }

    /// Coordinates `c ∈ O^n` with `x = B·c`, or `None` if `x ∉ L`.
    pub fn coordinates(&self, x: &[Series]) -> Result<Option<Vec<Series>>> {
        let n = self.n;
        let prec = x.iter().map(|s| s.prec()).min().unwrap_or(0);
        let mut x: Vec<Series> = x.to_vec();
        let mut c = vec![LaurentSeries::zero(self.k.clone(), prec); n];
        for i in (0..n).rev() {
            let d = self.diag[i];
            if x[i].is_zero() {
                if x[i].prec() < d {
                    return Err(Error::PrecisionExhausted(format!(
                        "membership: coordinate {} known only to O(pi^{})",
                        i,
                        x[i].prec()
                    )));
                }
                continue;
            }
            if x[i].val_bound() < d {
                return Ok(None);
            }
            let ci = x[i].shift(-d);
            for r in 0..i {
                let v = x[r].sub(&self.entry(r, i, prec).mul(&ci));
                x[r] = v;
            }
            x[i] = LaurentSeries::zero(self.k.clone(), x[i].prec());
            c[i] = ci;
        }
        Ok(Some(c))
    }

    pub fn contains(&self, x: &[Series]) -> Result<bool> {
        Ok(self.coordinates(x)?.is_some())
    }

    /// `self ⊆ other`.
    pub fn is_sublattice_of(&self, other: &OLattice) -> bool {
        let prec = other.diag.iter().max().copied().unwrap_or(0) + 1;
        self.columns(prec.max(self.floor() + 1))
            .iter()
            .all(|c| other.contains(c).unwrap_or(false))
    }

    /// `self + other`.
    pub fn sum(&self, other: &OLattice) -> OLattice {
        let floor = self.floor().min(other.floor());
        let prec = floor + 1;
        let mut gens = self.columns(prec);
        gens.extend(other.columns(prec));
        OLattice::from_generators(&self.k, self.n, &gens, floor)
    }

    pub fn render(&self) -> String {
        let b = self.basis(self.floor().max(0) + 1);
        let cols: Vec<String> = (0..self.n)
            .map(|j| {
                let c: Vec<String> = (0..self.n)
                    .map(|i| {
                        let x = b.get(i, j);
                        if x.is_zero() {
                            "0".into()
                        } else {
                            let s = x.render();
                            s.rsplit_once(" (prec")
                                .map_or(s.clone(), |p| String::from(p.0))
                        }
                    })
                    .collect();
                format!("({})", c.join(", "))
            })
            .collect();
        format!("O-span[{}]", cols.join(", "))
    }
}

/// The part of `x` with exponents `≥ d`, divided by `π^d`.
fn high_part(x: &Series, d: i64) -> Series {
    let terms: Vec<(i64, u32)> = x
        .terms()
        .filter(|(e, _)| *e >= d)
        .map(|(e, &c)| (e - d, c))
        .collect();
    LaurentSeries::from_terms(x.field().clone(), &terms, x.prec() - d)
}

/// Coordinates of the columns of `m` (entries over `E`) in the lattice basis,
/// i.e. `B⁻¹·m`, computed to precision `prec`.
pub fn in_basis(l: &OLattice, m: &SMat<Gf>, prec: i64) -> Result<SMat<Gf>> {
    let b = l.basis(prec + l.floor().abs() + 2);
    let binv = b.inverse()?;
    Ok(binv.mul(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(k: &Gf, t: &[(i64, u32)], prec: i64) -> Series {
        LaurentSeries::from_terms(k.clone(), t, prec)
    }

    #[test]
    fn hnf_is_canonical() {
        let k = Gf::new(2, 1).unwrap();
        // (π⁻¹, 1) and (0, π) generate; their combination π·(π⁻¹, 1) − (0, π) = e₀.
        let g1 = vec![s(&k, &[(-1, 1)], 20), s(&k, &[(0, 1)], 20)];
        let g2 = vec![s(&k, &[], 20), s(&k, &[(1, 1)], 20)];
        let l = OLattice::from_generators(&k, 2, &[g1.clone(), g2.clone()], 5);
        assert_eq!(l.diag(), &[0, 0]);
        // Same lattice from a different generating set.
        let g3 = vec![s(&k, &[(-1, 1), (0, 1)], 20), s(&k, &[(0, 1), (1, 1)], 20)];
        let l2 = OLattice::from_generators(&k, 2, &[g3, g2], 5);
        assert_eq!(l, l2);
        assert!(l.contains(&g1).unwrap());
        assert!(!l
            .contains(&[s(&k, &[(-1, 1)], 20), s(&k, &[], 20)])
            .unwrap());
    }

    #[test]
    fn scaling_and_sum() {
        let k = Gf::new(3, 1).unwrap();
        let a = OLattice::scaled_standard(&k, 2, 2);
        let b = OLattice::scaled_standard(&k, 2, -1);
        assert!(a.is_sublattice_of(&b));
        assert!(!b.is_sublattice_of(&a));
        assert_eq!(a.sum(&b), b);
        assert_eq!(a.scale(-3), b);
        assert_eq!(b.covolume(), -2);
    }
}
