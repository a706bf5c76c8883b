//! Extensions of `𝟙` by an A-motive `M`, parametrized by
//! `ι: M[j⁻¹] → Ext¹(𝟙, M)` with kernel `(id − τ_M)(M)`, and the decision
//! procedures on classes.

pub mod counterexample;
mod rank1;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::decision::{Certificate, Decision, Obstruction};
use crate::error::{Error, Result};
use crate::frobspace::{twisted_solve, twisted_solve_mod};
use crate::linalg::SMat;
use crate::motive::local::{maximal_o_model, reduce_element_mod_ell_n, reduce_mod_ell_n};
use crate::motive::{EllContext, LocalMotive, Motive, PolyMat};
use crate::tower::{
    jadic_expand_fraction, poly, taylor_shift, Field, JLaurentPoly, LocalField, Series, TPoly,
    TwistStyle,
};

pub use counterexample::{build_counterexample_51, Counterexample51, CounterexampleReport};

/// The class `ι(m)` of `m = j^{−pole}·num ∈ M[j⁻¹]`.
#[derive(Clone, Debug)]
pub struct ExtClass<K: Field> {
    motive: Motive<K>,
    pole: u32,
    num: Vec<TPoly<K>>,
}

impl<K: Field> ExtClass<K> {
    pub fn iota(motive: &Motive<K>, pole: u32, num: Vec<TPoly<K>>) -> Result<Self> {
        if num.len() != motive.rank() {
            return Err(Error::InvalidInput(format!(
                "representative has {} entries, motive has rank {}",
                num.len(),
                motive.rank()
            )));
        }
        let mut x = ExtClass {
            motive: motive.clone(),
            pole,
            num,
        };
        x.normalize();
        Ok(x)
    }

    /// `ι` of an element of `M` itself.
    pub fn from_poly(motive: &Motive<K>, num: Vec<TPoly<K>>) -> Result<Self> {
        Self::iota(motive, 0, num)
    }

    pub fn zero(motive: &Motive<K>) -> Self {
        ExtClass {
            motive: motive.clone(),
            pole: 0,
            num: vec![TPoly::zero(); motive.rank()],
        }
    }

    fn normalize(&mut self) {
        let k = self.motive.field().clone();
        let theta = self.motive.theta().clone();
        let j = TPoly::j(&k, &theta);
        while self.pole > 0 && self.num.iter().all(|p| k.is_zero(&p.eval(&k, &theta))) {
            self.num = self
                .num
                .iter()
                .map(|p| p.divrem(&k, &j).expect("j is monic").0)
                .collect();
            self.pole -= 1;
        }
    }

    pub fn motive(&self) -> &Motive<K> {
        &self.motive
    }

    pub fn pole(&self) -> u32 {
        self.pole
    }

    pub fn numerator(&self) -> &[TPoly<K>] {
        &self.num
    }

    /// The representative is zero (not merely split).
    pub fn is_zero_rep(&self) -> bool {
        let k = self.motive.field();
        self.num
            .iter()
            .all(|p| p.coeffs().iter().all(|c| k.is_zero(c)))
    }

    /// The representative as `j`-adic Laurent polynomials.
    pub fn jadic(&self) -> Vec<JLaurentPoly<K>> {
        let k = self.motive.field();
        self.num
            .iter()
            .map(|p| jadic_expand_fraction(k, p, self.motive.theta(), self.pole))
            .collect()
    }

    fn lift(&self, pole: u32) -> Vec<TPoly<K>> {
        let k = self.motive.field();
        let f = self.motive.j().pow(k, pole - self.pole);
        self.num.iter().map(|p| p.mul(k, &f)).collect()
    }

    /// Baer sum, realized on representatives.
    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.motive.rank() != o.motive.rank() {
            return Err(Error::InvalidInput(String::from(
                "classes of different motives",
            )));
        }
        let k = self.motive.field();
        let pole = self.pole.max(o.pole);
        let num = self
            .lift(pole)
            .iter()
            .zip(o.lift(pole))
            .map(|(a, b)| a.add(k, &b))
            .collect();
        Self::iota(&self.motive, pole, num)
    }

    pub fn neg(&self) -> Self {
        let k = self.motive.field();
        ExtClass {
            motive: self.motive.clone(),
            pole: self.pole,
            num: self.num.iter().map(|p| p.neg(k)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    /// `a(t)·x`.
    pub fn a_action(&self, a: &TPoly<K>) -> Self {
        let k = self.motive.field();
        let mut x = ExtClass {
            motive: self.motive.clone(),
            pole: self.pole,
            num: self.num.iter().map(|p| p.mul(k, a)).collect(),
        };
        x.normalize();
        x
    }

    /// `ι((id − τ_M)(ξ))` for `ξ ∈ M`.
    pub fn coboundary(motive: &Motive<K>, xi: &[TPoly<K>]) -> Result<Self> {
        let k = motive.field();
        let (e, t) = motive.apply_tau(xi);
        let je = motive.j().pow(k, e);
        let num = xi
            .iter()
            .zip(&t)
            .map(|(x, y)| x.mul(k, &je).sub(k, y))
            .collect();
        Self::iota(motive, e, num)
    }

    /// Whether `m − (id − τ_M)(ξ)` vanishes.
    pub fn verify_split(&self, xi: &[TPoly<K>]) -> Result<bool> {
        Ok(self
            .sub(&Self::coboundary(&self.motive, xi)?)?
            .is_zero_rep())
    }

    pub fn render(&self) -> String {
        let k = self.motive.field();
        let parts: Vec<String> = self.jadic().iter().map(|p| p.render(k)).collect();
        format!("iota({})", parts.join(", "))
    }
}

pub fn iota<K: Field>(motive: &Motive<K>, pole: u32, num: Vec<TPoly<K>>) -> Result<ExtClass<K>> {
    ExtClass::iota(motive, pole, num)
}

pub fn baer_sum<K: Field>(x: &ExtClass<K>, y: &ExtClass<K>) -> Result<ExtClass<K>> {
    x.add(y)
}

pub fn a_action<K: Field>(a: &TPoly<K>, x: &ExtClass<K>) -> ExtClass<K> {
    x.a_action(a)
}

/// Transports the class of `[M ⊕ N, ((τ_M, u), (0, τ_N))]` in `Ext¹(N, M)`,
/// `u = j^{−pole}·num`, to `Ext¹(𝟙, M ⊗ N^∨)`. The representative is the
/// matrix `u·τ_N^{−1}` read row by row.
pub fn hom_twist<K: Field>(
    n: &Motive<K>,
    m: &Motive<K>,
    pole: u32,
    num: &PolyMat<K>,
) -> Result<(Motive<K>, ExtClass<K>)> {
    let k = n.field();
    if num.rows() != m.rank() || num.cols() != n.rank() {
        return Err(Error::InvalidInput(String::from(
            "u must be rank(M) x rank(N)",
        )));
    }
    let target = m.tensor(&n.dual()?)?;
    let (c, det_n) = n.certificate();
    let cinv = k.inv(c).ok_or(Error::SingularMatrix)?;
    let rn = n.rank() as i64;
    let prod = num
        .mul(k, &n.numerator().adjugate(k))
        .map(|p| p.scale(k, &cinv));
    let mut total = pole as i64 + det_n + (rn - 1) * n.pole_order() as i64;
    let mut entries: Vec<TPoly<K>> = prod.entries().to_vec();
    if total < 0 {
        let f = n.j().pow(k, (-total) as u32);
        entries = entries.iter().map(|p| p.mul(k, &f)).collect();
        total = 0;
    }
    let x = ExtClass::iota(&target, total as u32, entries)?;
    Ok((target, x))
}

/// Whether `m ∈ M + τ_M(τ*M)`, i.e. `ι(m)` is regulated. The witness `y`
/// satisfies `m − j^{−e}·N·y ∈ M`.
pub fn is_regulated<K: Field>(x: &ExtClass<K>) -> Decision<Vec<TPoly<K>>> {
    let mot = x.motive();
    let k = mot.field();
    let r = mot.rank();
    let e = mot.pole_order();
    let p = x.pole();
    if p == 0 {
        return Decision::Yes(vec![TPoly::zero(); r]);
    }
    if p > e {
        return Decision::No(Certificate::new(
            Obstruction::Degree,
            format!(
                "pole of order {} at j exceeds the pole order {} of tau_M",
                p, e
            ),
        ));
    }
    // N·y ≡ j^{e−p}·num (mod j^e), unknowns y_{b,u} with u < e.
    let theta = mot.theta();
    let n_exp: Vec<Vec<K::Elem>> = mot
        .numerator()
        .entries()
        .iter()
        .map(|q| taylor_shift(k, q, theta))
        .collect();
    let jf = mot.j().pow(k, e - p);
    let rhs_exp: Vec<Vec<K::Elem>> = x
        .numerator()
        .iter()
        .map(|q| taylor_shift(k, &q.mul(k, &jf), theta))
        .collect();
    let at = |v: &Vec<K::Elem>, i: usize| v.get(i).cloned().unwrap_or_else(|| k.zero());
    let e = e as usize;
    let dim = r * e;
    let mut a = vec![vec![k.zero(); dim]; dim];
    let mut b = vec![k.zero(); dim];
    for row in 0..r {
        for w in 0..e {
            let eq = row * e + w;
            b[eq] = at(&rhs_exp[row], w);
            for col in 0..r {
                for u in 0..=w {
                    a[eq][col * e + u] = at(&n_exp[row * r + col], w - u);
                }
            }
        }
    }
    match solve_linear(k, a, b) {
        Some(sol) => {
            let j = mot.j();
            let y = (0..r)
                .map(|col| {
                    (0..e).rev().fold(TPoly::zero(), |acc, u| {
                        acc.mul(k, &j)
                            .add(k, &TPoly::constant(k, sol[col * e + u].clone()))
                    })
                })
                .collect();
            Decision::Yes(y)
        }
        None => Decision::No(Certificate::new(
            Obstruction::Linear,
            "principal part at j is not in the span of the columns of tau_M",
        )),
    }
}

/// Gaussian elimination over `K`; `None` if inconsistent.
fn solve_linear<K: Field>(
    k: &K,
    mut a: Vec<Vec<K::Elem>>,
    mut b: Vec<K::Elem>,
) -> Option<Vec<K::Elem>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !k.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, pr);
        b.swap(r, pr);
        let inv = k.inv(&a[r][c]).expect("nonzero pivot");
        for x in a[r].iter_mut() {
            *x = k.mul(x, &inv);
        }
        b[r] = k.mul(&b[r], &inv);
        for i in 0..rows {
            if i != r && !k.is_zero(&a[i][c]) {
                let f = a[i][c].clone();
                for cc in 0..cols {
                    let v = k.sub(&a[i][cc], &k.mul(&f, &a[r][cc]));
                    a[i][cc] = v;
                }
                b[i] = k.sub(&b[i], &k.mul(&f, &b[r]));
            }
        }
        pivots.push(c);
        r += 1;
    }
    if (r..rows).any(|i| !k.is_zero(&b[i])) {
        return None;
    }
    let mut x = vec![k.zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = b[i].clone();
    }
    Some(x)
}

/// `τ_M` on `e_i` is `c_i·j^{k_i}` when `N` is diagonal with monomial
/// `j`-adic entries.
fn diagonal_form(m: &LocalMotive) -> Option<Vec<(Series, i64)>> {
    let e = m.field();
    let n = m.numerator();
    let r = m.rank();
    let mut out = Vec::with_capacity(r);
    for a in 0..r {
        for b in 0..r {
            if a != b && !n.get(a, b).coeffs().iter().all(|c| e.is_zero(c)) {
                return None;
            }
        }
        let exp = taylor_shift(e, n.get(a, a), m.theta());
        let mut nz = exp.iter().enumerate().filter(|(_, c)| !e.is_zero(c));
        let (i, c) = nz.next()?;
        if nz.next().is_some() {
            return None;
        }
        out.push((c.clone(), i as i64 - m.pole_order() as i64));
    }
    Some(out)
}

/// `N` constant in `t` and no pole: the constant matrix.
fn constant_form(m: &LocalMotive) -> Option<SMat<crate::tower::Gf>> {
    if m.pole_order() != 0 || m.numerator().max_degree() != 0 {
        return None;
    }
    let e = m.field();
    let r = m.rank();
    Some(SMat::from_fn(e.residue_field(), r, r, |a, b| {
        m.numerator().get(a, b).coeff(e, 0)
    }))
}

fn combine<W>(parts: Vec<Decision<W>>) -> Decision<Vec<W>> {
    let mut out = Vec::with_capacity(parts.len());
    let mut unknown = None;
    for (i, d) in parts.into_iter().enumerate() {
        match d {
            Decision::Yes(w) => out.push(w),
            Decision::No(mut c) => {
                c.detail = format!("component {}: {}", i, c.detail);
                return Decision::No(c);
            }
            Decision::Unknown(s) => unknown = Some(format!("component {}: {}", i, s)),
        }
    }
    match unknown {
        Some(s) => Decision::Unknown(s),
        None => Decision::Yes(out),
    }
}

/// Coefficient vectors `(p_a)_s` of a vector of polynomials, for `s ≤ deg`.
fn coefficient_vectors(e: &LocalField, v: &[TPoly<LocalField>]) -> Vec<Vec<Series>> {
    let deg = v.iter().filter_map(|p| p.degree()).max();
    match deg {
        None => Vec::new(),
        Some(d) => (0..=d)
            .map(|s| v.iter().map(|p| p.coeff(e, s)).collect())
            .collect(),
    }
}

fn from_coefficient_vectors(
    e: &LocalField,
    r: usize,
    cols: &[Vec<Series>],
) -> Vec<TPoly<LocalField>> {
    (0..r)
        .map(|a| TPoly::new(e, cols.iter().map(|c| c[a].clone()).collect()))
        .collect()
}

/// Decides `m ∈ (id − τ_M)(M)`; the witness `ξ` has `m = ξ − τ_M(τ*ξ)`.
pub fn is_split(x: &ExtClass<LocalField>) -> Decision<Vec<TPoly<LocalField>>> {
    let mot = x.motive();
    let e = mot.field();
    let r = mot.rank();
    if x.is_zero_rep() {
        return Decision::Yes(vec![TPoly::zero(); r]);
    }
    if let Some(diag) = diagonal_form(mot) {
        let parts = diag
            .iter()
            .zip(x.numerator())
            .map(|((c, k), num)| rank1::split(e, mot.theta(), c, *k, x.pole(), num))
            .collect();
        return combine(parts);
    }
    if let Some(f) = constant_form(mot) {
        if x.pole() > 0 {
            return Decision::No(Certificate::new(
                Obstruction::Degree,
                "tau_M is pole-free, so (id - tau_M)(M) has no pole at j",
            ));
        }
        let parts = coefficient_vectors(e, x.numerator())
            .iter()
            .map(|v| twisted_solve(&f, v, TwistStyle::FullFrobenius))
            .collect();
        return combine(parts).map(|cols| from_coefficient_vectors(e, r, &cols));
    }
    Decision::Unknown(String::from(
        "splitting is decided for diagonal or constant Frobenius matrices only",
    ))
}

/// `a(t)` with `is_split(a·x)`, and the splitting witness.
#[derive(Clone, Debug)]
pub struct Annihilator {
    pub a: TPoly<LocalField>,
    pub xi: Vec<TPoly<LocalField>>,
}

/// Default search bound `2·(e + r)` on the degree of the annihilator.
pub fn default_torsion_bound(m: &LocalMotive) -> u32 {
    2 * (m.pole_order() + m.rank() as u32)
}

/// Searches monic `a ∈ F_q[t]` by degree, then lexicographically, with
/// `a·x` split.
pub fn is_torsion(x: &ExtClass<LocalField>, degree_bound: u32) -> Decision<Annihilator> {
    let e = x.motive().field();
    let k = e.residue_field();
    let base = k.base();
    let Some(emb) = k.embedding_from(&base) else {
        return Decision::Unknown(String::from("coefficient field does not contain F_q"));
    };
    let mut unknown = None;
    for d in 0..=degree_bound {
        for a in poly::monic_of_degree(&base, d) {
            let ap = TPoly::new(e, a.iter().map(|&c| e.constant(emb[c as usize])).collect());
            match is_split(&x.a_action(&ap)) {
                Decision::Yes(xi) => return Decision::Yes(Annihilator { a: ap, xi }),
                Decision::No(_) => {}
                Decision::Unknown(s) => unknown = Some(s),
            }
        }
    }
    match unknown {
        Some(s) => Decision::Unknown(format!(
            "no annihilator found; some candidates undecided: {}",
            s
        )),
        None => Decision::No(Certificate::new(
            Obstruction::Exhausted,
            format!(
                "no monic a(t) of degree <= {} splits the class",
                degree_bound
            ),
        )),
    }
}

/// Decides `m ∈ M_O[j⁻¹] + (id − τ_M)(M)`. The witness `ξ` has
/// `m − (id − τ_M)(ξ) ∈ M_O[j⁻¹]`.
pub fn is_integral(x: &ExtClass<LocalField>, ctx: &EllContext) -> Decision<Vec<TPoly<LocalField>>> {
    let mot = x.motive();
    let e = mot.field();
    let r = mot.rank();
    if x.is_zero_rep() {
        return Decision::Yes(vec![TPoly::zero(); r]);
    }
    let model = match maximal_o_model(mot, ctx) {
        Ok(m) => m,
        Err(err) => return Decision::Unknown(format!("maximal model: {}", err)),
    };
    let Some(b) = model.basis.clone() else {
        return Decision::Unknown(String::from("maximal model has no constant basis"));
    };
    if mot.theta().val_bound() < 0 {
        return Decision::Unknown(String::from("theta is not integral"));
    }
    let binv = match b.inverse() {
        Ok(m) => m,
        Err(err) => return Decision::Unknown(format!("{}", err)),
    };
    let sb = b.twist(TwistStyle::FullFrobenius);
    let const_mul =
        |m: &SMat<crate::tower::Gf>, v: &[TPoly<LocalField>]| -> Vec<TPoly<LocalField>> {
            (0..m.rows())
                .map(|a| {
                    (0..m.cols()).fold(TPoly::zero(), |acc, c| {
                        acc.add(e, &v[c].scale(e, m.get(a, c)))
                    })
                })
                .collect()
        };
    // N' = B⁻¹·N·σ(B), columnwise.
    let n = mot.numerator();
    let mut cols: Vec<Vec<TPoly<LocalField>>> = Vec::with_capacity(r);
    for c in 0..r {
        let col: Vec<TPoly<LocalField>> = (0..r)
            .map(|a| {
                (0..r).fold(TPoly::zero(), |acc, d| {
                    acc.add(e, &n.get(a, d).scale(e, sb.get(d, c)))
                })
            })
            .collect();
        cols.push(const_mul(&binv, &col));
    }
    let n2 = PolyMat::from_fn(r, r, |a, c| cols[c][a].clone());
    let mot2 = match Motive::new(e.clone(), mot.theta().clone(), mot.pole_order(), n2) {
        Ok(m) => m,
        Err(err) => return Decision::Unknown(format!("model basis change: {}", err)),
    };
    let num2 = const_mul(&binv, x.numerator());
    let d = if let Some(diag) = diagonal_form(&mot2) {
        let parts = diag
            .iter()
            .zip(&num2)
            .map(|((c, k), num)| rank1::integral(e, mot.theta(), c, *k, x.pole(), num))
            .collect();
        combine(parts)
    } else if let Some(f) = constant_form(&mot2) {
        let jp = mot.j().pow(e, x.pole());
        let mut quot = Vec::with_capacity(r);
        for (a, p) in num2.iter().enumerate() {
            let (q, rem) = p.divrem(e, &jp).expect("monic");
            if !rank1::is_integral_poly(&rem) {
                return Decision::No(Certificate::new(
                    Obstruction::Valuation,
                    format!("component {}: principal part at j is not integral", a),
                ));
            }
            quot.push(q);
        }
        let parts = coefficient_vectors(e, &quot)
            .iter()
            .map(|v| twisted_solve_mod(&f, v, 0))
            .collect();
        combine(parts).map(|cols| from_coefficient_vectors(e, r, &cols))
    } else {
        Decision::Unknown(String::from(
            "integrality is decided for diagonal or constant Frobenius matrices in a model basis",
        ))
    };
    d.map(|xi2| const_mul(&b, &xi2))
}

/// Per-level verdict: `Yes(n)` means good reduction modulo `ℓ^i` for all
/// `i ≤ n`.
#[derive(Clone, Debug)]
pub struct LevelVerdict {
    pub decision: Decision<u32>,
    /// The motive is not effective, so the per-level test is not known to be
    /// complete.
    pub best_effort: bool,
}

pub fn has_good_reduction_ell(
    x: &ExtClass<LocalField>,
    ctx: &EllContext,
    n_max: u32,
) -> LevelVerdict {
    let mot = x.motive();
    let best_effort = !mot.is_effective();
    let mut decision = Decision::Yes(n_max);
    for n in 1..=n_max {
        let v = match reduce_mod_ell_n(mot, ctx, n) {
            Ok(v) => v,
            Err(err) => {
                decision = Decision::Unknown(format!("level {}: {}", n, err));
                break;
            }
        };
        let vec = match reduce_element_mod_ell_n(mot, ctx, n, x.pole(), x.numerator()) {
            Ok(v) => v,
            Err(err) => {
                decision = Decision::Unknown(format!("level {}: {}", n, err));
                break;
            }
        };
        match v.unramified_membership(&vec) {
            Decision::Yes(_) => {}
            Decision::No(c) => {
                decision = Decision::No(c.at_level(n));
                break;
            }
            Decision::Unknown(s) => {
                decision = Decision::Unknown(format!("level {}: {}", n, s));
                break;
            }
        }
    }
    LevelVerdict {
        decision,
        best_effort,
    }
}

#[cfg(test)]
mod tests;
