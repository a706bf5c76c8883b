//! A-motives over `F = F_q(θ)` with `R = F_q[θ]`: completions at finite
//! places, bad places, the maximal `R[t]`-model as an intersection of local
//! maximal models, and integrality of extension classes.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::decision::{Certificate, Decision};
use crate::error::{Error, Result};
use crate::extcalc::{is_integral, ExtClass};
use crate::motive::local::maximal_o_model;
use crate::motive::{EllContext, GlobalMotive, LocalMotive, Motive, PolyMat, TModel};
use crate::tower::poly::{self, Poly};
use crate::tower::{Field, Gf, LaurentSeries, LocalField, RatFunc, RatFuncField, Series, TPoly};

/// A finite place `p(θ)` of `F_q(θ)` with completion `F_{q^d}((π))`,
/// `π = p(θ)`.
#[derive(Clone, Debug)]
pub struct Place {
    poly: Poly,
    base: Gf,
    field: LocalField,
    emb: Vec<u32>,
    theta: Series,
}

impl Place {
    /// `p` monic irreducible over `F_q`, coefficients low degree first.
    pub fn new(f: &RatFuncField, p: Poly, precision: i64) -> Result<Self> {
        let base = f.base().clone();
        let p = poly::trim(p);
        if p.last() != Some(&1) || !poly::is_irreducible(&base, &p) {
            return Err(Error::InvalidInput(format!(
                "{} is not monic irreducible",
                poly::render(&base, &p, f.symbol())
            )));
        }
        let d = (p.len() - 1) as u32;
        let k = Gf::new(base.q(), d)
            .ok_or_else(|| Error::InvalidInput(String::from("residue field too large")))?;
        let emb = k
            .embedding_from(&base)
            .expect("F_q embeds in its extensions");
        let pk: Vec<u32> = p.iter().map(|&c| emb[c as usize]).collect();
        let alpha = k
            .find_root(&pk)
            .expect("an irreducible polynomial splits in its residue field");
        let field = LocalField::new(k, precision);
        let mut place = Place {
            poly: p,
            base,
            field,
            emb,
            theta: LaurentSeries::zero(Gf::new(2, 1).unwrap(), 0),
        };
        place.theta = place.lift_root(alpha)?;
        Ok(place)
    }

    /// Newton iteration for `p(x) = π`, `x ≡ α`.
    fn lift_root(&self, alpha: u32) -> Result<Series> {
        let e = &self.field;
        let dp = poly::derivative(&self.base, &self.poly);
        let mut x = e.constant(alpha);
        let mut steps = 0;
        let mut good = 1i64;
        while good < e.precision() {
            let fx = e.sub(&self.eval(&self.poly, &x), &e.pi());
            let dfx = e.inv(&self.eval(&dp, &x)).ok_or_else(|| {
                Error::InvalidInput(String::from("place polynomial is inseparable"))
            })?;
            x = e.sub(&x, &e.mul(&fx, &dfx));
            good *= 2;
            steps += 1;
            if steps > 64 {
                return Err(Error::NotConverged(steps));
            }
        }
        Ok(x)
    }

    fn eval(&self, a: &[u32], x: &Series) -> Series {
        let e = &self.field;
        a.iter().rev().fold(e.zero(), |acc, &c| {
            e.add(&e.mul(&acc, x), &e.constant(self.emb[c as usize]))
        })
    }

    pub fn poly(&self) -> &[u32] {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn field(&self) -> &LocalField {
        &self.field
    }

    /// The image of `θ`.
    pub fn theta(&self) -> &Series {
        &self.theta
    }

    /// The `π`-adic expansion of `a`.
    pub fn expand(&self, a: &RatFunc) -> Result<Series> {
        let n = self.eval(&a.num, &self.theta);
        let d = self.eval(&a.den, &self.theta);
        n.div(&d)
    }

    /// `Σ cᵢπⁱ ↦ Σ cᵢ·p(θ)ⁱ`, for a finite expansion with coefficients in `F_q`.
    pub fn collapse(&self, f: &RatFuncField, x: &Series) -> Option<RatFunc> {
        let inv: Vec<Option<u32>> = {
            let mut t = vec![None; self.field.residue_field().size() as usize];
            for (i, &c) in self.emb.iter().enumerate() {
                t[c as usize] = Some(i as u32);
            }
            t
        };
        let pp = f.from_poly(self.poly.clone());
        let mut acc = f.zero();
        for (i, c) in x.terms() {
            let c = inv[*c as usize]?;
            acc = f.add(&acc, &f.mul(&f.constant(c), &f.powi(&pp, i)?));
        }
        Some(acc)
    }

    pub fn render(&self, f: &RatFuncField) -> String {
        poly::render(&self.base, &self.poly, f.symbol())
    }
}

/// Default localization precision: `32 + 4·(largest denominator valuation)`.
pub fn default_precision(m: &GlobalMotive, p: &[u32]) -> i64 {
    let f = m.field();
    let worst = m
        .numerator()
        .entries()
        .iter()
        .flat_map(|e| e.coeffs().iter())
        .map(|c| poly::valuation(f.base(), &c.den, p))
        .max()
        .unwrap_or(0);
    32 + 4 * worst
}

pub fn localize(m: &GlobalMotive, place: &Place) -> Result<LocalMotive> {
    let e = place.field();
    let n = m.numerator();
    let mut entries = Vec::with_capacity(n.rows() * n.cols());
    for p in n.entries() {
        entries.push(localize_poly(place, p)?);
    }
    let r = n.cols();
    let nl = PolyMat::from_fn(n.rows(), r, |i, j| entries[i * r + j].clone());
    Motive::new(e.clone(), place.theta().clone(), m.pole_order(), nl)
}

pub fn localize_poly(place: &Place, p: &TPoly<RatFuncField>) -> Result<TPoly<LocalField>> {
    let mut c = Vec::with_capacity(p.coeffs().len());
    for a in p.coeffs() {
        c.push(place.expand(a)?);
    }
    Ok(TPoly::new(place.field(), c))
}

pub fn localize_class(
    x: &ExtClass<RatFuncField>,
    local: &LocalMotive,
    place: &Place,
) -> Result<ExtClass<LocalField>> {
    let mut num = Vec::with_capacity(x.numerator().len());
    for p in x.numerator() {
        num.push(localize_poly(place, p)?);
    }
    ExtClass::iota(local, x.pole(), num)
}

fn sort_places(mut ps: Vec<Poly>) -> Vec<Poly> {
    ps.sort_by(|a, b| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.iter().rev().cmp(b.iter().rev()))
    });
    ps.dedup();
    ps
}

fn prime_factors(k: &Gf, a: &[u32], out: &mut Vec<Poly>) {
    if poly::deg(a) <= 0 {
        return;
    }
    for (f, _) in poly::factor(k, a).1 {
        out.push(f);
    }
}

fn denominator_places(f: &RatFuncField, ps: &[TPoly<RatFuncField>]) -> Vec<Poly> {
    let mut out = Vec::new();
    for p in ps {
        for c in p.coeffs() {
            prime_factors(f.base(), &c.den, &mut out);
        }
    }
    sort_places(out)
}

/// Places dividing a denominator of `N` or the numerator or denominator of
/// the determinant constant, by degree and then lexicographically.
pub fn bad_places(m: &GlobalMotive) -> Vec<Poly> {
    let f = m.field();
    let mut out = denominator_places(f, m.numerator().entries());
    let (c, _) = m.certificate();
    prime_factors(f.base(), &c.num, &mut out);
    prime_factors(f.base(), &c.den, &mut out);
    sort_places(out)
}

/// A local maximal model at one bad place.
#[derive(Clone, Debug)]
pub struct LocalModel {
    pub place: Place,
    pub motive: LocalMotive,
    pub ctx: EllContext,
    pub model: TModel,
}

/// `M_R`: the standard lattice away from the bad places, the local maximal
/// models at them.
#[derive(Clone, Debug)]
pub struct GlobalModel {
    pub rank: usize,
    pub local: Vec<LocalModel>,
    /// Columns of a constant basis of `M_R`, row-major, when one was found.
    pub basis: Option<Vec<RatFunc>>,
}

fn local_model(m: &GlobalMotive, p: Poly) -> Result<LocalModel> {
    let prec = default_precision(m, &p);
    let place = Place::new(m.field(), p, prec)?;
    let motive = localize(m, &place)?;
    let ctx = EllContext::default_for(&motive)?;
    let model = maximal_o_model(&motive, &ctx)?;
    Ok(LocalModel {
        place,
        motive,
        ctx,
        model,
    })
}

pub fn maximal_r_model(m: &GlobalMotive) -> Result<GlobalModel> {
    let f = m.field();
    let r = m.rank();
    let mut local = Vec::new();
    for p in bad_places(m) {
        local.push(local_model(m, p)?);
    }
    let scalar = local.iter().try_fold(f.one(), |acc, l| {
        let a = l.model.scaled_standard_exponent()?;
        Some(f.mul(&acc, &f.powi(&f.from_poly(l.place.poly.clone()), a)?))
    });
    let basis = match scalar {
        Some(s) => Some(
            (0..r * r)
                .map(|i| if i / r == i % r { s.clone() } else { f.zero() })
                .collect(),
        ),
        None if local.len() == 1 && local[0].place.degree() == 1 => {
            local[0].model.basis.as_ref().and_then(|b| {
                let mut out = Vec::with_capacity(r * r);
                for i in 0..r {
                    for j in 0..r {
                        out.push(local[0].place.collapse(f, b.get(i, j))?);
                    }
                }
                Some(out)
            })
        }
        None => None,
    };
    Ok(GlobalModel {
        rank: r,
        local,
        basis,
    })
}

impl GlobalModel {
    /// `x ∈ M_R`, equivalently `x ∈ M_R[j⁻¹]` for `x ∈ F[t]^r`.
    pub fn contains(&self, f: &RatFuncField, x: &[TPoly<RatFuncField>]) -> Result<bool> {
        for p in denominator_places(f, x) {
            if !self.local.iter().any(|l| l.place.poly == p) {
                return Ok(false);
            }
        }
        for l in &self.local {
            let mut v = Vec::with_capacity(x.len());
            for p in x {
                v.push(localize_poly(&l.place, p)?);
            }
            if !l.model.contains(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn render(&self, f: &RatFuncField) -> String {
        let sym = f.symbol();
        let q = f.base().q();
        match &self.basis {
            Some(b)
                if (0..self.rank * self.rank)
                    .all(|i| i / self.rank == i % self.rank || f.is_zero(&b[i])) =>
            {
                let s = &b[0];
                if f.is_one(s) {
                    format!("F_{}[{}][t]^{}", q, sym, self.rank)
                } else {
                    format!("({})*F_{}[{}][t]^{}", f.render(s), q, sym, self.rank)
                }
            }
            Some(b) => {
                let cols: Vec<String> = b.iter().map(|x| f.render(x)).collect();
                format!("F_{}[{}][t]-span of [{}]", q, sym, cols.join(", "))
            }
            None => {
                let parts: Vec<String> = self
                    .local
                    .iter()
                    .map(|l| format!("{} at ({})", l.model.render(), l.place.render(f)))
                    .collect();
                format!("standard away from bad places; {}", parts.join("; "))
            }
        }
    }
}

/// Decides `m ∈ M_R[j⁻¹] + (id − τ_M)(M)`. The witness `ξ ∈ M` has
/// `m − (id − τ_M)(ξ) ∈ M_R[j⁻¹]`.
pub fn is_integral_global(x: &ExtClass<RatFuncField>) -> Decision<Vec<TPoly<RatFuncField>>> {
    let mot = x.motive();
    let f = mot.field();
    let r = mot.rank();
    let model = match maximal_r_model(mot) {
        Ok(m) => m,
        Err(e) => return Decision::Unknown(format!("maximal model: {}", e)),
    };
    match model.contains(f, x.numerator()) {
        Ok(true) => return Decision::Yes(vec![TPoly::zero(); r]),
        Ok(false) => {}
        Err(e) => return Decision::Unknown(format!("membership: {}", e)),
    }
    let mut places: Vec<Poly> = model.local.iter().map(|l| l.place.poly.clone()).collect();
    places.extend(denominator_places(f, x.numerator()));
    let places = sort_places(places);

    let mut xi: Vec<TPoly<RatFuncField>> = vec![TPoly::zero(); r];
    let mut unknown = None;
    for p in places {
        let lm = match model.local.iter().find(|l| l.place.poly == p) {
            Some(l) => l.clone(),
            None => match local_model(mot, p) {
                Ok(l) => l,
                Err(e) => return Decision::Unknown(format!("local model: {}", e)),
            },
        };
        let lx = match localize_class(x, &lm.motive, &lm.place) {
            Ok(v) => v,
            Err(e) => return Decision::Unknown(format!("localization: {}", e)),
        };
        match is_integral(&lx, &lm.ctx) {
            Decision::Yes(w) => {
                if unknown.is_none() {
                    match correction(f, &lm, &w) {
                        Some(c) => xi = xi.iter().zip(&c).map(|(a, b)| a.add(f, b)).collect(),
                        None => {
                            unknown =
                                Some(format!("no global correction at ({})", lm.place.render(f)))
                        }
                    }
                }
            }
            Decision::No(c) => {
                return Decision::No(Certificate::new(
                    c.kind,
                    format!("at ({}): {}", lm.place.render(f), c.detail),
                ))
            }
            Decision::Unknown(s) => unknown = Some(format!("at ({}): {}", lm.place.render(f), s)),
        }
    }
    if let Some(s) = unknown {
        return Decision::Unknown(s);
    }
    let residual = ExtClass::coboundary(mot, &xi).and_then(|c| x.sub(&c));
    match residual.and_then(|res| model.contains(f, res.numerator())) {
        Ok(true) => Decision::Yes(xi),
        Ok(false) => Decision::Unknown(String::from(
            "local witnesses do not recombine to a global one",
        )),
        Err(e) => Decision::Unknown(format!("recombination: {}", e)),
    }
}

/// The part of a local witness below the model exponent, as a global element.
fn correction(
    f: &RatFuncField,
    lm: &LocalModel,
    w: &[TPoly<LocalField>],
) -> Option<Vec<TPoly<RatFuncField>>> {
    let a = lm.model.scaled_standard_exponent()?;
    let e = lm.place.field();
    w.iter()
        .map(|p| {
            let mut c = Vec::with_capacity(p.coeffs().len());
            for s in p.coeffs() {
                let terms: Vec<(i64, u32)> = s
                    .terms()
                    .filter(|(i, _)| *i < a)
                    .map(|(i, c)| (i, *c))
                    .collect();
                let low =
                    LaurentSeries::from_terms(e.residue_field().clone(), &terms, e.precision());
                c.push(lm.place.collapse(f, &low)?);
            }
            Some(TPoly::new(f, c))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(q: u64) -> RatFuncField {
        RatFuncField::new(q, "theta").unwrap()
    }

    fn theta_scalar(f: &RatFuncField) -> GlobalMotive {
        Motive::scalar(f.clone(), f.gen(), f.gen()).unwrap()
    }

    #[test]
    fn bad_place_examples() {
        let f = rf(2);
        assert_eq!(bad_places(&theta_scalar(&f)), vec![vec![0, 1]]);
        assert!(bad_places(&Motive::unit(f.clone(), f.gen(), 2)).is_empty());
        assert!(bad_places(&Motive::carlitz(f.clone(), f.gen(), 1)).is_empty());
    }

    #[test]
    fn place_expansion() {
        let f = rf(2);
        let p = Place::new(&f, vec![1, 1], 32).unwrap();
        let e = p.field();
        assert!(e.eq_elem(p.theta(), &e.from_terms(&[(0, 1), (1, 1)])));
        // 1/θ = 1 + π + π² + … at θ = 1.
        let inv = p.expand(&f.fraction(&[1], &[0, 1]).unwrap()).unwrap();
        assert!(e.eq_elem(&e.mul(&inv, p.theta()), &e.one()));

        // Degree two: p(θ̂) = π.
        let p2 = Place::new(&f, vec![1, 1, 1], 32).unwrap();
        let pi = p2.expand(&f.from_poly(vec![1, 1, 1])).unwrap();
        assert!(p2.field().eq_elem(&pi, &p2.field().pi()));
        assert_eq!(p2.degree(), 2);
    }

    #[test]
    fn localizations() {
        let f = rf(2);
        let c = Motive::carlitz(f.clone(), f.gen(), 1);
        let p = Place::new(&f, vec![1, 1], 32).unwrap();
        let lc = localize(&c, &p).unwrap();
        assert!(lc
            .field()
            .eq_elem(lc.theta(), &lc.field().from_terms(&[(0, 1), (1, 1)])));

        let m = theta_scalar(&f);
        let p0 = Place::new(&f, vec![0, 1], 32).unwrap();
        let lm = localize(&m, &p0).unwrap();
        let e = lm.field();
        assert!(e.eq_elem(&lm.numerator().get(0, 0).coeff(e, 0), &e.pi()));
    }

    #[test]
    fn models() {
        let f = rf(2);
        let m = theta_scalar(&f);
        let model = maximal_r_model(&m).unwrap();
        let b = model.basis.clone().unwrap();
        assert_eq!(b, vec![f.fraction(&[1], &[0, 1]).unwrap()]);
        let th = |k: i64| TPoly::constant(&f, f.powi(&f.gen(), k).unwrap());
        assert!(model.contains(&f, &[th(-1)]).unwrap());
        assert!(!model.contains(&f, &[th(-2)]).unwrap());
        let at_one = f.fraction(&[1], &[1, 1]).unwrap();
        assert!(!model.contains(&f, &[TPoly::constant(&f, at_one)]).unwrap());

        let one = maximal_r_model(&Motive::unit(f.clone(), f.gen(), 1)).unwrap();
        assert_eq!(one.render(&f), "F_2[theta][t]^1");
        let c = maximal_r_model(&Motive::carlitz(f.clone(), f.gen(), 1)).unwrap();
        assert!(c.local.is_empty());
    }

    #[test]
    fn integral_classes() {
        let f = rf(2);
        let m = theta_scalar(&f);
        let th = |k: i64| TPoly::constant(&f, f.powi(&f.gen(), k).unwrap());
        let x = ExtClass::from_poly(&m, vec![th(-1)]).unwrap();
        assert!(is_integral_global(&x).is_yes());
        let y = ExtClass::from_poly(&m, vec![th(-2)]).unwrap();
        let d = is_integral_global(&y);
        assert!(d.is_no(), "{:?}", d);
    }

    #[test]
    fn recombination_at_a_good_place() {
        // On 𝟙 over F_2(θ), 1/(θ+1) has odd valuation at (θ+1), which
        // y − y² never has.
        let f = rf(2);
        let one = Motive::unit(f.clone(), f.gen(), 1);
        let a = f.fraction(&[1], &[1, 1]).unwrap();
        let x = ExtClass::from_poly(&one, vec![TPoly::constant(&f, a)]).unwrap();
        assert!(is_integral_global(&x).is_no());
        // A coboundary with poles at a good place is integral.
        let g = f.fraction(&[1], &[1, 0, 1]).unwrap();
        let y = ExtClass::coboundary(&one, &[TPoly::constant(&f, g)]).unwrap();
        let d = is_integral_global(&y);
        let Decision::Yes(xi) = d else {
            panic!("{:?}", d)
        };
        let res = y.sub(&ExtClass::coboundary(&one, &xi).unwrap()).unwrap();
        assert!(maximal_r_model(&one)
            .unwrap()
            .contains(&f, res.numerator())
            .unwrap());
    }
}
