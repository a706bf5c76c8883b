//! Brute-force enumeration of stable lattices, for cross-checking models on
//! small instances.

use alloc::vec;
use alloc::vec::Vec;

use super::{FrobeniusSpace, OLattice};
use crate::error::Result;
use crate::tower::{Gf, LaurentSeries, Series};

/// Every lattice `L` with `π^hi O^n ⊆ L ⊆ π^lo O^n`, by enumerating Hermite
/// normal forms. Exponential in `n·(hi − lo)`.
pub fn lattices_between(k: &Gf, n: usize, lo: i64, hi: i64) -> Vec<OLattice> {
    let mut out = Vec::new();
    let mut diag = vec![lo; n];
    loop {
        enumerate_upper(k, n, lo, hi, &diag, &mut out);
        // Next diagonal in [lo, hi]^n.
        let mut i = 0;
        while i < n && diag[i] == hi {
            diag[i] = lo;
            i += 1;
        }
        if i == n {
            break;
        }
        diag[i] += 1;
    }
    out
}

fn enumerate_upper(k: &Gf, n: usize, lo: i64, hi: i64, diag: &[i64], out: &mut Vec<OLattice>) {
    // Slots: for each (i, j) with i < j, the digits at exponents [lo, d_i).
    let mut slots: Vec<(usize, usize, i64)> = Vec::new();
    for j in 0..n {
        for i in 0..j {
            for e in lo..diag[i] {
                slots.push((i, j, e));
            }
        }
    }
    let size = k.size() as u64;
    let total = size.checked_pow(slots.len() as u32).unwrap_or(u64::MAX);
    let prec = hi + 1;
    for code in 0..total {
        let mut cols: Vec<Vec<Series>> = (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| {
                        if i == j {
                            LaurentSeries::monomial(k.clone(), 1, diag[i], prec)
                        } else {
                            LaurentSeries::zero(k.clone(), prec)
                        }
                    })
                    .collect()
            })
            .collect();
        let mut c = code;
        for &(i, j, e) in &slots {
            let d = (c % size) as u32;
            c /= size;
            if d != 0 {
                let t = LaurentSeries::monomial(k.clone(), d, e, prec);
                cols[j][i] = cols[j][i].add(&t);
            }
        }
        let l = OLattice::from_generators(
            k,
            n,
            &cols,
            hi.max(diag.iter().copied().max().unwrap_or(hi)) + 4 * (hi - lo),
        );
        if l.floor() <= hi && l.diag() == diag {
            out.push(l);
        }
    }
}

/// Stable lattices between `π^hi O^n` and `π^lo O^n`.
pub fn stable_lattices(v: &FrobeniusSpace, lo: i64, hi: i64) -> Result<Vec<OLattice>> {
    let mut out = Vec::new();
    for l in lattices_between(v.residue_field(), v.dim(), lo, hi) {
        if v.is_model(&l)? {
            out.push(l);
        }
    }
    Ok(out)
}

/// The maximal stable lattice found by exhaustive search over the window
/// `T ⊆ L ⊆ π^{−s}T`, `T = π^a O^n`.
pub fn maximal_by_search(v: &FrobeniusSpace) -> Result<OLattice> {
    let (a, s) = v.start_bounds()?;
    let stable = stable_lattices(v, a - s, a)?;
    let mut acc = OLattice::scaled_standard(v.residue_field(), v.dim(), a);
    for l in &stable {
        acc = acc.sum(l);
    }
    Ok(acc)
}
