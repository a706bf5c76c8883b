//! Frobenius spaces `(V, φ)` over `E = k((π))` with `k` finite: lattices,
//! elementary divisors, maximal integral and good models, Fitting
//! decompositions and Artin–Schreier membership.
//!
//! `φ` acts by `x ↦ F·σ(x)` where `σ` raises every coefficient and `π` to the
//! `q`-th power. All lattice computations reduce to `F_p`-linear algebra on
//! finite digit windows, since `σ` is additive and `F_p`-linear.

pub mod digits;
pub mod fitting;
pub mod lattice;
pub mod oracle;
pub mod solve;

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{smith_valuations, FpMat, SMat, Subspace};
use crate::tower::{Gf, LaurentSeries, LocalField, Series, TwistStyle};
use digits::{matrix_of, Window};

pub use fitting::FittingParts;
pub use lattice::OLattice;
pub use solve::{twisted_solve, twisted_solve_mod, UnramifiedWitness};

/// Elementary divisor data of `φ` relative to a lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorData {
    /// Valuations `e₁ ≤ … ≤ e_n`.
    pub ty: Vec<i64>,
    pub discriminant: i64,
    pub range: i64,
}

impl DivisorData {
    pub fn from_type(ty: Vec<i64>) -> Self {
        let discriminant = ty.iter().sum();
        let range = ty.last().copied().unwrap_or(0);
        DivisorData {
            ty,
            discriminant,
            range,
        }
    }

    pub fn is_stable(&self) -> bool {
        self.ty.first().is_none_or(|&e| e >= 0)
    }
}

/// The maximal good model together with the data it was computed from.
#[derive(Clone, Debug)]
pub struct GoodModel {
    /// `V_good + π^N V_O` in standard coordinates.
    pub lattice: OLattice,
    /// The same lattice in coordinates of the `V_O` basis.
    pub relative: OLattice,
    /// Rank of `V_good`.
    pub rank: usize,
    /// The level `N`.
    pub level: i64,
    /// Generators of `V_good` modulo `π^N V_O`, standard coordinates.
    pub generators: Vec<Vec<Series>>,
}

#[derive(Clone, Debug)]
pub struct FrobeniusSpace {
    field: LocalField,
    f: SMat<Gf>,
    det_val: i64,
}

/// Default level for good models and Fitting decompositions.
pub const DEFAULT_LEVEL: i64 = 8;

impl FrobeniusSpace {
    pub fn new(field: LocalField, f: SMat<Gf>) -> Result<Self> {
        if f.rows() != f.cols() {
            return Err(Error::InvalidInput(format!(
                "Frobenius matrix must be square, got {}x{}",
                f.rows(),
                f.cols()
            )));
        }
        let det_val = f.det()?.valuation().ok_or(Error::SingularMatrix)?;
        Ok(FrobeniusSpace { field, f, det_val })
    }

    /// `(E, x ↦ f·x^q)`.
    pub fn rank_one(field: LocalField, f: Series) -> Result<Self> {
        let k = field.residue_field().clone();
        Self::new(field, SMat::from_fn(&k, 1, 1, |_, _| f.clone()))
    }

    pub fn field(&self) -> &LocalField {
        &self.field
    }

    pub fn residue_field(&self) -> &Gf {
        self.field.residue_field()
    }

    pub fn q(&self) -> i64 {
        self.residue_field().q() as i64
    }

    pub fn dim(&self) -> usize {
        self.f.rows()
    }

    pub fn matrix(&self) -> &SMat<Gf> {
        &self.f
    }

    pub fn det_valuation(&self) -> i64 {
        self.det_val
    }

    /// `φ(x) = F·σ(x)`.
    pub fn phi(&self, x: &[Series]) -> Vec<Series> {
        let sx: Vec<Series> = x
            .iter()
            .map(|v| v.frobenius(TwistStyle::FullFrobenius))
            .collect();
        self.f.mul_vec(&sx)
    }

    /// The space in the basis `P`: matrix `P⁻¹·F·σ(P)`.
    pub fn change_basis(&self, p: &SMat<Gf>) -> Result<FrobeniusSpace> {
        let g = p
            .inverse()?
            .mul(&self.f)
            .mul(&p.twist(TwistStyle::FullFrobenius));
        FrobeniusSpace::new(self.field.clone(), g)
    }

    fn basis_prec(&self, l: &OLattice) -> i64 {
        let spread = l.floor().abs() + l.lowest_exponent().abs();
        self.f.min_prec() + (self.q() + 2) * spread + 8
    }

    /// Matrix of `φ` relative to the basis of `l`.
    pub fn matrix_in(&self, l: &OLattice) -> Result<SMat<Gf>> {
        let p = l.basis(self.basis_prec(l));
        Ok(p.inverse()?
            .mul(&self.f)
            .mul(&p.twist(TwistStyle::FullFrobenius)))
    }

    pub fn smith_type(&self, l: &OLattice) -> Result<DivisorData> {
        Ok(DivisorData::from_type(smith_valuations(
            &self.matrix_in(l)?,
        )?))
    }

    pub fn is_model(&self, l: &OLattice) -> Result<bool> {
        let g = self.matrix_in(l)?;
        for i in 0..g.rows() {
            for j in 0..g.cols() {
                let x = g.get(i, j);
                match x.valuation() {
                    Some(v) if v < 0 => return Ok(false),
                    Some(_) => {}
                    None if x.prec() < 0 => {
                        return Err(Error::PrecisionExhausted(format!(
                            "entry ({}, {}) of the lattice matrix is O(pi^{})",
                            i,
                            j,
                            x.prec()
                        )))
                    }
                    None => {}
                }
            }
        }
        Ok(true)
    }

    /// The scaling exponent `a` making `π^a O^n` stable, and the bound `s`
    /// with `V_O ⊆ π^{a−s} O^n`.
    pub fn start_bounds(&self) -> Result<(i64, i64)> {
        let q = self.q();
        let vf = self.f.min_valuation().ok_or(Error::SingularMatrix)?;
        let a = if vf >= 0 { 0 } else { (-vf + q - 2) / (q - 1) };
        let ty = smith_valuations(&self.f)?;
        let range = (q - 1) * a + ty.last().copied().unwrap_or(0);
        let s = (range + q - 2) / (q - 1);
        Ok((a, s.max(0)))
    }

    /// The maximal `φ`-stable lattice `V_O`.
    ///
    /// Starting from the stable lattice `T = π^a O^n`, the window
    /// `X = π^b O^n / T` with `b = a − s` contains `V_O / T`. The largest
    /// `F_p`-subspace `W ⊆ X` with `φ(W) ⊆ W + T` is found by the descending
    /// chain `W_{i+1} = {x ∈ W_i : φ(x) ∈ W_i}`, and `V_O = T + W`.
    pub fn maximal_integral_model(&self) -> Result<OLattice> {
        let k = self.residue_field().clone();
        let n = self.dim();
        let q = self.q();
        let (a, s) = self.start_bounds()?;
        if s == 0 {
            return Ok(OLattice::scaled_standard(&k, n, a));
        }
        let b = a - s;
        let vf = self.f.min_valuation().ok_or(Error::SingularMatrix)?;
        if self.f.min_prec() < a - q * b {
            return Err(Error::PrecisionExhausted(format!(
                "maximal model needs the Frobenius matrix to O(pi^{}), have O(pi^{})",
                a - q * b,
                self.f.min_prec()
            )));
        }
        let c = b.min(q * b + vf);
        let x = Window::new(&k, n, b, a);
        let prec = a + 1;
        let phi = |v: &[Series]| self.phi(v);
        let phi_in = matrix_of(&k, &x, &x, prec, phi);
        let phi_out = matrix_of(&k, &x, &Window::new(&k, n, c, b), prec, phi);
        let mut h = phi_out.row_space();
        loop {
            let next = h.vstack(&h.mul(&phi_in)).row_space();
            if next.rows() == h.rows() {
                break;
            }
            h = next;
        }
        let w = Subspace::kernel_of(&h);
        let gens: Vec<Vec<Series>> = w.basis().iter().map(|v| x.decode(&k, v, prec)).collect();
        Ok(OLattice::from_generators(&k, n, &gens, a))
    }

    /// Matrix of `φ` in a basis of `V_O`, which is integral.
    pub fn integral_matrix(&self) -> Result<(OLattice, SMat<Gf>)> {
        let vo = self.maximal_integral_model()?;
        let g = self.matrix_in(&vo)?;
        Ok((vo, g))
    }

    /// `V_good`, represented modulo `π^level V_O`.
    ///
    /// In `V_O` coordinates the chain `Λ₀ = O^n`, `Λ_{i+1} = O·φ(Λ_i) + π^N O^n`
    /// stabilises at `V_good + π^N O^n`.
    pub fn maximal_good_model_at(&self, level: i64) -> Result<GoodModel> {
        let k = self.residue_field().clone();
        let n = self.dim();
        let (vo, g) = self.integral_matrix()?;
        if g.min_prec() < level {
            return Err(Error::PrecisionExhausted(format!(
                "good model at level {} needs the integral matrix to O(pi^{}), have O(pi^{})",
                level,
                level,
                g.min_prec()
            )));
        }
        let work = level + 1;
        let mut lam = OLattice::standard(&k, n);
        loop {
            let gens: Vec<Vec<Series>> = lam
                .columns(work)
                .iter()
                .map(|c| {
                    let sc: Vec<Series> = c
                        .iter()
                        .map(|x| x.frobenius(TwistStyle::FullFrobenius))
                        .collect();
                    g.mul_vec(&sc)
                })
                .collect();
            let next = OLattice::from_generators(&k, n, &gens, level);
            if next == lam {
                break;
            }
            lam = next;
        }
        let p = vo.basis(self.basis_prec(&vo) + level);
        let cols = lam.columns(work);
        let std_cols: Vec<Vec<Series>> = cols.iter().map(|c| p.mul_vec(c)).collect();
        let rank = lam.diag().iter().filter(|&&d| d < level).count();
        let generators = lam
            .diag()
            .iter()
            .zip(&std_cols)
            .filter(|(d, _)| **d < level)
            .map(|(_, c)| c.clone())
            .collect();
        let lattice = OLattice::from_generators(&k, n, &std_cols, level + vo.floor());
        Ok(GoodModel {
            lattice,
            relative: lam,
            rank,
            level,
            generators,
        })
    }

    pub fn maximal_good_model(&self) -> Result<GoodModel> {
        self.maximal_good_model_at(DEFAULT_LEVEL)
    }

    /// `V_O` is good, i.e. `φ` has Smith type all zero on `V_O`.
    pub fn has_good_reduction(&self) -> Result<bool> {
        let vo = self.maximal_integral_model()?;
        Ok(self.smith_type(&vo)?.ty.iter().all(|&e| e == 0))
    }

    /// `φ` on `V_O/π^level` as an `F_p`-matrix in digit coordinates.
    pub(crate) fn reduction_matrix(&self, g: &SMat<Gf>, level: i64) -> (Window, FpMat) {
        let k = self.residue_field();
        let w = Window::new(k, self.dim(), 0, level);
        let m = matrix_of(k, &w, &w, level + 1, |v| {
            let sv: Vec<Series> = v
                .iter()
                .map(|x| x.frobenius(TwistStyle::FullFrobenius))
                .collect();
            g.mul_vec(&sv)
        });
        (w, m)
    }

    pub fn zero_vector(&self, prec: i64) -> Vec<Series> {
        alloc::vec![LaurentSeries::zero(self.residue_field().clone(), prec); self.dim()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(q: u64, entries: &[&[(i64, u32)]], prec: i64) -> FrobeniusSpace {
        let field = LocalField::over(q, 1).unwrap();
        let k = field.residue_field().clone();
        let n = (entries.len() as f64).sqrt() as usize;
        let f = SMat::from_fn(&k, n, n, |i, j| {
            LaurentSeries::from_terms(k.clone(), entries[i * n + j], prec)
        });
        FrobeniusSpace::new(field, f).unwrap()
    }

    #[test]
    fn smith_type_examples() {
        let v = space(2, &[&[(0, 1)], &[], &[], &[(2, 1)]], 30);
        let std = OLattice::standard(v.residue_field(), 2);
        let d = v.smith_type(&std).unwrap();
        assert_eq!(
            (d.ty.clone(), d.discriminant, d.range),
            (alloc::vec![0, 2], 2, 2)
        );
        let j = space(2, &[&[(1, 1)], &[(0, 1)], &[], &[(1, 1)]], 30);
        assert_eq!(j.smith_type(&std).unwrap().ty, [0, 2]);
    }

    #[test]
    fn is_model_examples() {
        let k = Gf::new(2, 1).unwrap();
        let a = space(2, &[&[(1, 1)]], 30);
        let b = space(2, &[&[(-1, 1)]], 30);
        let o = OLattice::standard(&k, 1);
        assert!(a.is_model(&o).unwrap());
        assert!(!b.is_model(&o).unwrap());
        assert!(b.is_model(&o.scale(1)).unwrap());
    }

    #[test]
    fn maximal_model_rank_one() {
        // q = 3, f = π(1+π)²: V_O = (1+π)⁻¹ O.
        let v = space(3, &[&[(1, 1), (2, 2), (3, 1)]], 40);
        let vo = v.maximal_integral_model().unwrap();
        let h_inv = LaurentSeries::from_terms(v.residue_field().clone(), &[(0, 1)], 40).sub(
            &LaurentSeries::from_terms(v.residue_field().clone(), &[(1, 1)], 40),
        );
        let expect = OLattice::from_generators(v.residue_field(), 1, &[alloc::vec![h_inv]], 5);
        assert_eq!(vo, expect);
        // h = π: f = π³ gives π⁻¹O.
        let v = space(3, &[&[(3, 1)]], 40);
        assert_eq!(v.maximal_integral_model().unwrap().diag(), &[-1]);
        let id = space(2, &[&[(0, 1)], &[], &[], &[(0, 1)]], 20);
        assert_eq!(
            id.maximal_integral_model().unwrap(),
            OLattice::standard(id.residue_field(), 2)
        );
    }

    #[test]
    fn maximal_model_scales_pole() {
        // x ↦ π⁻³x² over F₂: π^c O is stable iff 2c − 3 ≥ c.
        let v = space(2, &[&[(-3, 1)]], 30);
        let vo = v.maximal_integral_model().unwrap();
        assert_eq!(vo.diag(), &[3]);
    }

    #[test]
    fn good_model_examples() {
        let one = space(2, &[&[(0, 1)]], 30);
        let g = one.maximal_good_model().unwrap();
        assert_eq!(g.rank, 1);
        assert_eq!(g.lattice, OLattice::standard(one.residue_field(), 1));
        let nil = space(3, &[&[(1, 1)]], 30);
        assert_eq!(nil.maximal_good_model().unwrap().rank, 0);
        // Over F₂, x ↦ πx² has V_O = π⁻¹O, on which φ is x ↦ x².
        let two = space(2, &[&[(1, 1)]], 30);
        assert_eq!(two.maximal_integral_model().unwrap().diag(), &[-1]);
        assert!(two.has_good_reduction().unwrap());
        let d = space(3, &[&[(0, 1)], &[], &[], &[(1, 1)]], 30);
        let g = d.maximal_good_model().unwrap();
        assert_eq!(g.rank, 1);
        assert_eq!(g.relative.diag(), &[0, DEFAULT_LEVEL]);
        assert!(!d.has_good_reduction().unwrap());
        assert!(one.has_good_reduction().unwrap());
    }
}
