//! Fitting decomposition of `φ` on `V_O/π^n V_O`.

use alloc::vec::Vec;

use super::digits::Window;
use super::{FrobeniusSpace, OLattice};
use crate::error::Result;
use crate::linalg::{FpMat, SMat, Subspace};
use crate::tower::Gf;

/// `V_O/π^n V_O = A ⊕ B` with `φ` bijective on `A` and nilpotent on `B`.
///
/// Both parts are `F_p`-subspaces of the digit window of `V_O/π^n` in `V_O`
/// coordinates; they are `k`-subspaces as well.
#[derive(Clone, Debug)]
pub struct FittingParts {
    pub level: i64,
    pub integral_model: OLattice,
    pub window: Window,
    pub phi: FpMat,
    pub a: Subspace,
    pub b: Subspace,
    degree: usize,
}

impl FittingParts {
    /// `k`-dimension of the bijective part.
    pub fn dim_a(&self) -> usize {
        self.a.dim() / self.degree
    }

    /// `k`-dimension of the nilpotent part.
    pub fn dim_b(&self) -> usize {
        self.b.dim() / self.degree
    }

    /// Splits digit vector `v` as `a + b`.
    pub fn split(&self, v: &[u32]) -> (Vec<u32>, Vec<u32>) {
        let p = self.phi.p();
        let ab = self.a.basis();
        let bb = self.b.basis();
        let len = v.len();
        let mut m = FpMat::zeros(p, len, ab.len() + bb.len());
        for (j, col) in ab.iter().chain(bb.iter()).enumerate() {
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        let c = m.solve(v).expect("A and B span the whole quotient");
        let mut a = alloc::vec![0u32; len];
        for (j, col) in ab.iter().enumerate() {
            for i in 0..len {
                a[i] = ((a[i] as u64 + c[j] as u64 * col[i] as u64) % p as u64) as u32;
            }
        }
        let b = (0..len).map(|i| (v[i] + p - a[i]) % p).collect();
        (a, b)
    }
}

impl FrobeniusSpace {
    pub fn fitting_decomposition(&self, level: i64) -> Result<FittingParts> {
        let (vo, g) = self.integral_matrix()?;
        Ok(self.fitting_with(vo, &g, level))
    }

    /// Fitting parts from a known `V_O` and integral matrix `g`.
    pub(crate) fn fitting_with(&self, vo: OLattice, g: &SMat<Gf>, level: i64) -> FittingParts {
        let (window, phi) = self.reduction_matrix(g, level);
        let p = phi.p();
        let len = window.len();
        let mut a = Subspace::full(p, len);
        loop {
            let next = a.image(&phi);
            if next.dim() == a.dim() {
                break;
            }
            a = next;
        }
        let mut b = Subspace::zero(p, len);
        loop {
            let next = b.preimage(&phi);
            if next.dim() == b.dim() {
                break;
            }
            b = next;
        }
        let degree = self.residue_field().degree() as usize;
        FittingParts {
            level,
            integral_model: vo,
            window,
            phi,
            a,
            b,
            degree,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::{LaurentSeries, LocalField};

    fn diag_space(q: u64, vals: &[i64]) -> FrobeniusSpace {
        let field = LocalField::over(q, 1).unwrap();
        let k = field.residue_field().clone();
        let d: Vec<_> = vals
            .iter()
            .map(|&v| LaurentSeries::monomial(k.clone(), 1, v, 30))
            .collect();
        FrobeniusSpace::new(field, SMat::diag(&k, &d, 30)).unwrap()
    }

    #[test]
    fn fitting_examples() {
        let id = diag_space(2, &[0, 0]).fitting_decomposition(1).unwrap();
        assert_eq!((id.dim_a(), id.dim_b()), (2, 0));
        // Needs q ≥ 3: for q = 2, V_O = π⁻¹O and φ is a unit there.
        let nil = diag_space(3, &[1]).fitting_decomposition(2).unwrap();
        assert_eq!((nil.dim_a(), nil.dim_b()), (0, 2));
        let mixed = diag_space(3, &[0, 1]).fitting_decomposition(1).unwrap();
        assert_eq!((mixed.dim_a(), mixed.dim_b()), (1, 1));
        // Line 1 is e₀, line 2 is e₁.
        let w = &mixed.window;
        let mut e0 = alloc::vec![0u32; w.len()];
        e0[w.index(0, 0, 0)] = 1;
        assert!(mixed.a.contains(&e0));
        let mut e1 = alloc::vec![0u32; w.len()];
        e1[w.index(1, 0, 0)] = 1;
        assert!(mixed.b.contains(&e1));
    }
}
