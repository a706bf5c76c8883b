//! Local motives at a coefficient place `ℓ`: the Frobenius spaces
//! `M/ℓⁿM`, maximal integral and good `O_E[t]`-models, good reduction.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{LocalMotive, PolyMat};
use crate::error::{Error, Result};
use crate::frobspace::{FrobeniusSpace, OLattice};
use crate::linalg::SMat;
use crate::tower::{poly, Field, Gf, LaurentSeries, LocalField, Series, TPoly};

/// Degree bound `D`: models are compared through `M ∩ E[t]_{<D}`.
pub const DEFAULT_BLOCK: usize = 2;
pub const DEFAULT_N_MAX: u32 = 12;

/// A maximal ideal `ℓ ⊂ F_q[t]`, with the verdict on condition `C_ℓ`
/// (`ℓ(θ)` a unit of `O_E`).
#[derive(Clone, Debug)]
pub struct EllContext {
    base: Gf,
    ell: Vec<u32>,
    cl: bool,
}

impl EllContext {
    /// `ℓ` given by its coefficients in `F_q`, low degree first. Fails unless
    /// `ℓ` is monic irreducible and `C_ℓ` holds for `m`.
    pub fn new(m: &LocalMotive, ell: Vec<u32>) -> Result<Self> {
        let ctx = Self::unchecked(m, ell)?;
        if !ctx.cl {
            return Err(Error::ConditionClViolated(format!(
                "ell({}) is not a unit at theta",
                ctx.render()
            )));
        }
        Ok(ctx)
    }

    /// As [`EllContext::new`] without requiring `C_ℓ`; reductions then go
    /// through [`reduce_mod_ell_n_unchecked`] only.
    pub fn unchecked(m: &LocalMotive, ell: Vec<u32>) -> Result<Self> {
        let base = m.field().residue_field().base();
        let ell = poly::trim(ell);
        if ell.last() != Some(&1) || !poly::is_irreducible(&base, &ell) {
            return Err(Error::InvalidInput(format!(
                "{} is not monic irreducible over F_{}",
                poly::render(&base, &ell, "t"),
                base.q()
            )));
        }
        let mut ctx = EllContext {
            base,
            ell,
            cl: false,
        };
        let v = ctx
            .poly_over(m.field())?
            .eval(m.field(), m.theta())
            .valuation();
        ctx.cl = v == Some(0);
        Ok(ctx)
    }

    /// The smallest-degree `ℓ` (first in lexicographic order) satisfying `C_ℓ`.
    pub fn default_for(m: &LocalMotive) -> Result<Self> {
        let base = m.field().residue_field().base();
        for d in 1..=8u32 {
            for f in poly::monic_of_degree(&base, d) {
                if !poly::is_irreducible(&base, &f) {
                    continue;
                }
                let ctx = Self::unchecked(m, f)?;
                if ctx.cl {
                    return Ok(ctx);
                }
            }
        }
        Err(Error::ConditionClViolated(String::from(
            "no ell of degree <= 8 is a unit at theta",
        )))
    }

    pub fn ell(&self) -> &[u32] {
        &self.ell
    }

    pub fn degree(&self) -> usize {
        self.ell.len() - 1
    }

    pub fn cl_holds(&self) -> bool {
        self.cl
    }

    pub fn render(&self) -> String {
        poly::render(&self.base, &self.ell, "t")
    }

    /// `ℓ` as a polynomial over `E`.
    pub fn poly_over(&self, e: &LocalField) -> Result<TPoly<LocalField>> {
        let k = e.residue_field();
        let emb = k.embedding_from(&self.base).ok_or_else(|| {
            Error::InvalidInput(String::from("coefficient field does not contain F_q"))
        })?;
        Ok(TPoly::new(
            e,
            self.ell
                .iter()
                .map(|&c| e.constant(emb[c as usize]))
                .collect(),
        ))
    }
}

/// The Frobenius space `M/ℓⁿM` with basis `tⁱe_a` (`i < n·deg ℓ`), indexed
/// `i·r + a`.
pub fn reduce_mod_ell_n(m: &LocalMotive, ctx: &EllContext, n: u32) -> Result<FrobeniusSpace> {
    if !ctx.cl {
        return Err(Error::ConditionClViolated(format!(
            "ell({}) is not a unit at theta",
            ctx.render()
        )));
    }
    reduce_mod_ell_n_unchecked(m, ctx, n)
}

/// Arithmetic in `E[t]/ℓⁿ` with `j` inverted.
pub(crate) struct EllAdic {
    field: LocalField,
    modulus: TPoly<LocalField>,
    jinv: TPoly<LocalField>,
    dim: usize,
}

impl EllAdic {
    pub(crate) fn new(m: &LocalMotive, ctx: &EllContext, n: u32) -> Result<Self> {
        let e = m.field();
        let modulus = ctx.poly_over(e)?.pow(e, n);
        // ℓⁿ = j·Q + ℓⁿ(θ), so j⁻¹ ≡ −Q/ℓⁿ(θ).
        let (quo, rem) = modulus.divrem(e, &m.j()).expect("j is monic");
        let inv = e.inv(&rem.coeff(e, 0)).ok_or_else(|| {
            Error::ConditionClViolated(format!("ell({}) vanishes at theta", ctx.render()))
        })?;
        let mut out = EllAdic {
            field: e.clone(),
            modulus,
            jinv: TPoly::zero(),
            dim: n as usize * ctx.degree(),
        };
        out.jinv = out.reduce(&quo.scale(e, &e.neg(&inv)));
        Ok(out)
    }

    pub(crate) fn reduce(&self, p: &TPoly<LocalField>) -> TPoly<LocalField> {
        p.divrem(&self.field, &self.modulus).expect("monic").1
    }

    /// `j^{−k}` modulo `ℓⁿ`.
    pub(crate) fn jinv_pow(&self, k: u32) -> TPoly<LocalField> {
        let mut out = TPoly::one(&self.field);
        for _ in 0..k {
            out = self.reduce(&out.mul(&self.field, &self.jinv));
        }
        out
    }

    /// Coordinates of `j^{−pole}·x` in the basis `tⁱe_a`.
    pub(crate) fn coordinates(&self, pole: u32, x: &[TPoly<LocalField>]) -> Vec<Series> {
        let e = &self.field;
        let r = x.len();
        let jp = self.jinv_pow(pole);
        let mut out = vec![e.zero_series(); r * self.dim];
        for (a, p) in x.iter().enumerate() {
            let v = self.reduce(&p.mul(e, &jp));
            for (deg, c) in v.coeffs().iter().enumerate() {
                out[deg * r + a] = c.clone();
            }
        }
        out
    }
}

/// [`reduce_mod_ell_n`] needing only `ℓ(θ) ≠ 0`.
pub fn reduce_mod_ell_n_unchecked(
    m: &LocalMotive,
    ctx: &EllContext,
    n: u32,
) -> Result<FrobeniusSpace> {
    let e = m.field();
    let r = m.rank();
    let adic = EllAdic::new(m, ctx, n)?;
    let pole = adic.jinv_pow(m.pole_order());
    let num: PolyMat<LocalField> = m.numerator().map(|p| adic.reduce(&p.mul(e, &pole)));
    let dim = adic.dim;
    let mut f = SMat::zeros(e.residue_field(), r * dim, r * dim, e.precision());
    let mut tpow = TPoly::one(e);
    for i in 0..dim {
        for b in 0..r {
            for a in 0..r {
                let v = adic.reduce(&num.get(a, b).mul(e, &tpow));
                for (deg, c) in v.coeffs().iter().enumerate() {
                    f.set(deg * r + a, i * r + b, c.clone());
                }
            }
        }
        tpow = tpow.shift(e, 1);
    }
    FrobeniusSpace::new(e.clone(), f)
}

/// `j^{−pole}·x ∈ M[j⁻¹]` as a vector of `M/ℓⁿM`.
pub fn reduce_element_mod_ell_n(
    m: &LocalMotive,
    ctx: &EllContext,
    n: u32,
    pole: u32,
    x: &[TPoly<LocalField>],
) -> Result<Vec<Series>> {
    Ok(EllAdic::new(m, ctx, n)?.coordinates(pole, x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Integral,
    Good,
    Bound,
}

/// An `O_E[t]`-model `L ⊆ M`, known through `L ∩ E[t]^r_{<D}` as an
/// `O_E`-lattice in coordinates `tⁱe_a ↦ i·r + a`, and through a basis of
/// constant vectors when one exists.
#[derive(Clone, Debug)]
pub struct TModel {
    pub kind: ModelKind,
    /// Rank over `O_E[t]`.
    pub rank: usize,
    pub motive_rank: usize,
    pub block: OLattice,
    pub block_degree: usize,
    /// `L = B·O_E[t]^r` with `B` constant, when such a basis exists.
    pub basis: Option<SMat<Gf>>,
    /// Level `n` at which the chain was seen to be stationary.
    pub level: u32,
}

impl TModel {
    /// Equality of modules through the canonical normal form of the block.
    pub fn same_module(&self, o: &TModel) -> bool {
        self.rank == o.rank && self.block_degree == o.block_degree && self.block == o.block
    }

    /// `Some(a)` when `L = π^a·O_E[t]^r`.
    pub fn scaled_standard_exponent(&self) -> Option<i64> {
        if self.rank != self.motive_rank {
            return None;
        }
        let a = *self.block.diag().first()?;
        (self.block == OLattice::scaled_standard(self.block.residue_field(), self.block.dim(), a))
            .then_some(a)
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0
    }

    /// Membership of `x ∈ E[t]^r`.
    pub fn contains(&self, x: &[TPoly<LocalField>]) -> Result<bool> {
        if self.rank == 0 {
            return Ok(x.iter().all(|p| p.is_zero()));
        }
        let r = self.motive_rank;
        let deg = x.iter().filter_map(|p| p.degree()).max();
        let Some(deg) = deg else { return Ok(true) };
        if let Some(b) = &self.basis {
            let binv = b.inverse()?;
            for i in 0..=deg {
                let v: Vec<Series> = x.iter().map(|p| coeff_series(p, i, b.min_prec())).collect();
                if binv
                    .mul_vec(&v)
                    .iter()
                    .any(|c| c.val_bound() < 0 && !c.is_zero())
                {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        if deg >= self.block_degree {
            return Err(Error::PrecisionExhausted(format!(
                "membership of degree {} beyond the known block of degree < {}",
                deg, self.block_degree
            )));
        }
        let prec = self.block.floor() + 1;
        let mut v = Vec::with_capacity(self.block.dim());
        for i in 0..self.block_degree {
            for p in x.iter().take(r) {
                v.push(coeff_series(p, i, prec));
            }
        }
        self.block.contains(&v)
    }

    pub fn render(&self) -> String {
        if self.rank == 0 {
            return String::from("0");
        }
        if let Some(a) = self.scaled_standard_exponent() {
            return match a {
                0 => String::from("O_E[t]^r"),
                _ => format!("pi^{}*O_E[t]^r", a),
            };
        }
        match &self.basis {
            Some(b) => format!("O_E[t]-span of columns {}", b.render()),
            None => format!("rank {} with block {}", self.rank, self.block.render()),
        }
    }
}

fn coeff_series(p: &TPoly<LocalField>, i: usize, prec: i64) -> Series {
    p.coeffs().get(i).cloned().unwrap_or_else(|| {
        let k = p.coeffs().first().map(|c| c.field().clone());
        LaurentSeries::zero(k.unwrap_or_else(|| Gf::new(2, 1).unwrap()), prec)
    })
}

/// Level spaces `M/ℓⁿM`, built on demand.
struct Levels<'a> {
    motive: &'a LocalMotive,
    ctx: &'a EllContext,
    spaces: Vec<FrobeniusSpace>,
}

impl<'a> Levels<'a> {
    fn new(motive: &'a LocalMotive, ctx: &'a EllContext) -> Result<Self> {
        if !ctx.cl {
            return Err(Error::ConditionClViolated(format!(
                "ell({}) is not a unit at theta",
                ctx.render()
            )));
        }
        Ok(Levels {
            motive,
            ctx,
            spaces: Vec::new(),
        })
    }

    fn get(&mut self, n: u32) -> Result<&FrobeniusSpace> {
        while self.spaces.len() < n as usize {
            let next = self.spaces.len() as u32 + 1;
            self.spaces
                .push(reduce_mod_ell_n(self.motive, self.ctx, next)?);
        }
        Ok(&self.spaces[n as usize - 1])
    }
}

fn first_level(block: usize, d: usize) -> u32 {
    block.div_ceil(d).max(1) as u32
}

/// Runs the level chain until two consecutive leading blocks agree.
fn stabilize(
    m: &LocalMotive,
    ctx: &EllContext,
    block: usize,
    n_max: u32,
    kind: ModelKind,
) -> Result<TModel> {
    let r = m.rank();
    let d = ctx.degree();
    let mut levels = Levels::new(m, ctx)?;
    let mut prev: Option<(OLattice, usize)> = None;
    for n in first_level(block, d)..=n_max {
        let v = levels.get(n)?;
        let (lat, rank) = match kind {
            ModelKind::Good => {
                let g = v.maximal_good_model()?;
                (g.lattice, g.rank / (n as usize * d))
            }
            _ => (v.maximal_integral_model()?, r),
        };
        let lead = lat.leading_block(r * block);
        if let Some((p, pr)) = &prev {
            if *p == lead && *pr == rank {
                let basis = constant_basis(&lead, r, block, rank, m.field().precision());
                return Ok(TModel {
                    kind,
                    rank,
                    motive_rank: r,
                    block: lead,
                    block_degree: block,
                    basis,
                    level: n,
                });
            }
        }
        prev = Some((lead, rank));
    }
    Err(Error::NotStabilized(n_max))
}

fn constant_basis(
    lead: &OLattice,
    r: usize,
    block: usize,
    rank: usize,
    prec: i64,
) -> Option<SMat<Gf>> {
    if rank != r {
        return None;
    }
    let b0 = lead.leading_block(r);
    (b0.block_diagonal(block) == *lead).then(|| b0.basis(prec))
}

pub fn maximal_o_model(m: &LocalMotive, ctx: &EllContext) -> Result<TModel> {
    maximal_o_model_with(m, ctx, DEFAULT_BLOCK, DEFAULT_N_MAX)
}

pub fn maximal_o_model_with(
    m: &LocalMotive,
    ctx: &EllContext,
    block: usize,
    n_max: u32,
) -> Result<TModel> {
    stabilize(m, ctx, block, n_max, ModelKind::Integral)
}

pub fn maximal_good_model_motive(m: &LocalMotive, ctx: &EllContext) -> Result<TModel> {
    maximal_good_model_motive_with(m, ctx, DEFAULT_BLOCK, DEFAULT_N_MAX)
}

pub fn maximal_good_model_motive_with(
    m: &LocalMotive,
    ctx: &EllContext,
    block: usize,
    n_max: u32,
) -> Result<TModel> {
    stabilize(m, ctx, block, n_max, ModelKind::Good)
}

/// `M_good = M_O`, tested as good reduction of every level space up to the
/// level where the integral chain became stationary.
pub fn has_good_reduction(m: &LocalMotive, ctx: &EllContext) -> Result<bool> {
    let model = maximal_o_model(m, ctx)?;
    let mut levels = Levels::new(m, ctx)?;
    for n in 1..=model.level {
        if !levels.get(n)?.has_good_reduction()? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Gauss valuation of a polynomial over `E`.
fn gauss_valuation(p: &TPoly<LocalField>) -> Option<i64> {
    p.coeffs().iter().filter_map(|c| c.valuation()).min()
}

/// `π^s·O_E[t]^r` with `s = ⌈v(τ_M^{−1})/(q−1)⌉` for the Gauss valuation,
/// which contains `M_O`.
pub fn bound_lattice(m: &LocalMotive) -> Result<TModel> {
    let e = m.field();
    let r = m.rank();
    let q = e.residue_field().q() as i64;
    let adj = m.numerator().adjugate(e);
    let v_adj = adj
        .entries()
        .iter()
        .filter_map(gauss_valuation)
        .min()
        .ok_or(Error::SingularMatrix)?;
    let vj = m.theta().valuation().map_or(0, |v| v.min(0));
    let (c, n) = m.certificate();
    let vc = c.valuation().ok_or(Error::SingularMatrix)?;
    let pole = m.pole_order() as i64;
    let v_inv = v_adj + pole * vj - vc - (n + r as i64 * pole) * vj;
    let s = v_inv.div_euclid(q - 1) + i64::from(v_inv.rem_euclid(q - 1) != 0);
    let k = e.residue_field();
    let basis = SMat::diag(k, &vec![e.monomial(1, s); r], e.precision());
    Ok(TModel {
        kind: ModelKind::Bound,
        rank: r,
        motive_rank: r,
        block: OLattice::scaled_standard(k, r * DEFAULT_BLOCK, s),
        block_degree: DEFAULT_BLOCK,
        basis: Some(basis),
        level: 0,
    })
}

/// `τ_M` is an isomorphism on the completion of `M` at `ℓ`, i.e. the level-one
/// reduction is invertible.
pub fn finite_place_slope_zero_check(m: &LocalMotive, ctx: &EllContext) -> Result<bool> {
    let v = reduce_mod_ell_n_unchecked(m, ctx, 1)?;
    Ok(v.matrix().det()?.valuation().is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(q: u64) -> LocalField {
        LocalField::over(q, 1).unwrap()
    }

    #[test]
    fn carlitz_level_one() {
        let e = field(3);
        let th = e.from_terms(&[(0, 1), (1, 1)]);
        let c = LocalMotive::carlitz(e.clone(), th.clone(), 1);
        let ctx = EllContext::new(&c, vec![0, 1]).unwrap();
        let v = reduce_mod_ell_n(&c, &ctx, 1).unwrap();
        assert!(v.matrix().get(0, 0).eq_to_prec(&e.neg(&th)));
        let a1 = c.dual().unwrap();
        let w = reduce_mod_ell_n(&a1, &ctx, 1).unwrap();
        assert!(w
            .matrix()
            .get(0, 0)
            .eq_to_prec(&e.inv(&e.neg(&th)).unwrap()));
        let one = LocalMotive::unit(e.clone(), th, 1);
        let u = reduce_mod_ell_n(&one, &ctx, 3).unwrap();
        assert!(u
            .matrix()
            .eq_to_prec(&SMat::identity(e.residue_field(), 3, 64)));
    }

    #[test]
    fn default_ell_skips_nonunits() {
        let e = field(2);
        let m = LocalMotive::unit(e.clone(), e.pi(), 1);
        let ctx = EllContext::default_for(&m).unwrap();
        assert_eq!(ctx.ell(), &[1, 1]);
        assert!(EllContext::new(&m, vec![0, 1]).is_err());
    }

    #[test]
    fn models_of_basic_motives() {
        let e = field(3);
        let th = e.from_terms(&[(0, 1), (1, 1)]);
        let one = LocalMotive::unit(e.clone(), th.clone(), 1);
        let ctx = EllContext::default_for(&one).unwrap();
        let mo = maximal_o_model(&one, &ctx).unwrap();
        assert_eq!(mo.scaled_standard_exponent(), Some(0));
        assert!(has_good_reduction(&one, &ctx).unwrap());
        let c = LocalMotive::carlitz(e.clone(), th.clone(), 1);
        assert_eq!(
            maximal_o_model(&c, &ctx)
                .unwrap()
                .scaled_standard_exponent(),
            Some(0)
        );
        assert!(maximal_good_model_motive(&c, &ctx)
            .unwrap()
            .same_module(&maximal_o_model(&c, &ctx).unwrap()));
        assert!(has_good_reduction(&c, &ctx).unwrap());
        assert!(finite_place_slope_zero_check(&c, &ctx).unwrap());
    }

    #[test]
    fn pi_scalar_and_its_power() {
        let e = field(3);
        let th = e.from_terms(&[(0, 1), (1, 1)]);
        let m = LocalMotive::scalar(e.clone(), th.clone(), e.pi()).unwrap();
        let ctx = EllContext::default_for(&m).unwrap();
        assert_eq!(
            maximal_o_model(&m, &ctx)
                .unwrap()
                .scaled_standard_exponent(),
            Some(0)
        );
        assert!(maximal_good_model_motive(&m, &ctx).unwrap().is_zero());
        assert!(!has_good_reduction(&m, &ctx).unwrap());
        let m2 = m.tensor_power(2).unwrap();
        assert_eq!(
            maximal_o_model(&m2, &ctx)
                .unwrap()
                .scaled_standard_exponent(),
            Some(-1)
        );
        assert_eq!(
            bound_lattice(&m2).unwrap().scaled_standard_exponent(),
            Some(-1)
        );
    }

    #[test]
    fn frobenius_mismatch() {
        // τ = ϖ^{q−1} − ϖ^{q−2}t with θ = ϖ.
        let e = field(2);
        let th = e.pi();
        let t = TPoly::t(&e);
        let n = TPoly::constant(&e, e.pi()).sub(&e, &t);
        let m = LocalMotive::new(e.clone(), th, 0, PolyMat::scalar(1, &n)).unwrap();
        let ctx = EllContext::default_for(&m).unwrap();
        assert_eq!(
            maximal_o_model(&m, &ctx)
                .unwrap()
                .scaled_standard_exponent(),
            Some(0)
        );
        let bad = EllContext::unchecked(&m, vec![0, 1]).unwrap();
        assert!(!bad.cl_holds());
        assert!(reduce_mod_ell_n(&m, &bad, 1).is_err());
        let v = reduce_mod_ell_n_unchecked(&m, &bad, 1).unwrap();
        let vo = v.maximal_integral_model().unwrap();
        assert_eq!(vo, OLattice::scaled_standard(e.residue_field(), 1, -1));
    }
}
