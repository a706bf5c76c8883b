//! A-motives of rank `r` over a field `K` containing `θ`, for `A = F_q[t]`.
//!
//! `τ_M = j^{−e}·N` on `M = K[t]^r` with `N` a polynomial matrix, acting by
//! `τ_M(τ*x) = j^{−e}·N·x^{(1)}`, where `x^{(1)}` applies the Frobenius of
//! `K` to every coefficient.

pub mod local;
mod polymat;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::isocrystal::{Isocrystal, Slope};
use crate::linalg::{smith_valuations, SMat};
use crate::tower::{taylor_shift, Field, LaurentSeries, LocalField, RatFuncField, TPoly};

pub use local::{EllContext, ModelKind, TModel, DEFAULT_BLOCK, DEFAULT_N_MAX};
pub use polymat::PolyMat;

#[derive(Clone, Debug)]
pub struct Motive<K: Field> {
    field: K,
    theta: K::Elem,
    pole: u32,
    n: PolyMat<K>,
    cert_c: K::Elem,
    cert_n: i64,
}

pub type LocalMotive = Motive<LocalField>;
pub type GlobalMotive = Motive<RatFuncField>;

/// `w₁ ≤ … ≤ w_r` and the vertices of the polygon through their partial sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgePolygon {
    pub weights: Vec<i64>,
    pub vertices: Vec<(i64, i64)>,
}

impl HodgePolygon {
    pub fn from_weights(mut weights: Vec<i64>) -> Self {
        weights.sort_unstable();
        let mut vertices = vec![(0, 0)];
        let mut acc = 0;
        for (i, w) in weights.iter().enumerate() {
            acc += w;
            vertices.push((i as i64 + 1, acc));
        }
        HodgePolygon { weights, vertices }
    }
}

/// Whether `j` divides `p`.
fn divisible_by_j<K: Field>(k: &K, p: &TPoly<K>, theta: &K::Elem) -> bool {
    k.is_zero(&p.eval(k, theta))
}

fn div_j<K: Field>(k: &K, p: &TPoly<K>, theta: &K::Elem) -> TPoly<K> {
    p.divrem(k, &TPoly::j(k, theta)).expect("j is monic").0
}

impl<K: Field> Motive<K> {
    /// `τ_M = j^{−pole}·n`. Fails with `SingularMatrix` unless `det n` is a
    /// nonzero constant times a power of `j`.
    pub fn new(field: K, theta: K::Elem, pole: u32, n: PolyMat<K>) -> Result<Self> {
        if n.rows() != n.cols() || n.rows() == 0 {
            return Err(Error::InvalidInput(String::from(
                "motive matrix must be square and nonempty",
            )));
        }
        let mut pole = pole;
        let mut n = n;
        while pole > 0
            && n.entries()
                .iter()
                .all(|p| divisible_by_j(&field, p, &theta))
        {
            n = n.map(|p| div_j(&field, p, &theta));
            pole -= 1;
        }
        let det = n.det(&field);
        let expansion = taylor_shift(&field, &det, &theta);
        let mut nonzero = expansion
            .iter()
            .enumerate()
            .filter(|(_, c)| !field.is_zero(c));
        let (m, c) = nonzero.next().ok_or(Error::SingularMatrix)?;
        if nonzero.next().is_some() {
            return Err(Error::SingularMatrix);
        }
        let r = n.rows() as i64;
        let cert_n = m as i64 - r * pole as i64;
        let cert_c = c.clone();
        Ok(Motive {
            field,
            theta,
            pole,
            n,
            cert_c,
            cert_n,
        })
    }

    /// The unit motive `𝟙^r`.
    pub fn unit(field: K, theta: K::Elem, r: usize) -> Self {
        let n = PolyMat::identity(&field, r);
        Motive::new(field, theta, 0, n).expect("identity is invertible")
    }

    /// `τ = jⁿ`; `carlitz(1)` is `C`, `carlitz(−1)` is `A(1)`.
    pub fn carlitz(field: K, theta: K::Elem, n: i64) -> Self {
        let j = TPoly::j(&field, &theta);
        let (pole, num) = if n >= 0 {
            (0, j.pow(&field, n as u32))
        } else {
            (n.unsigned_abs() as u32, TPoly::one(&field))
        };
        Motive::new(field, theta, pole, PolyMat::scalar(1, &num))
            .expect("powers of j are invertible")
    }

    /// Rank one with `τ = c`.
    pub fn scalar(field: K, theta: K::Elem, c: K::Elem) -> Result<Self> {
        let n = PolyMat::scalar(1, &TPoly::constant(&field, c));
        Motive::new(field, theta, 0, n)
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn theta(&self) -> &K::Elem {
        &self.theta
    }

    pub fn rank(&self) -> usize {
        self.n.rows()
    }

    pub fn pole_order(&self) -> u32 {
        self.pole
    }

    pub fn numerator(&self) -> &PolyMat<K> {
        &self.n
    }

    /// `(c, n)` with `det τ_M = c·jⁿ`.
    pub fn certificate(&self) -> (&K::Elem, i64) {
        (&self.cert_c, self.cert_n)
    }

    pub fn is_effective(&self) -> bool {
        self.pole == 0
    }

    pub fn j(&self) -> TPoly<K> {
        TPoly::j(&self.field, &self.theta)
    }

    fn check_same_base(&self, o: &Self) -> Result<()> {
        if self.field != o.field || !self.field.eq_elem(&self.theta, &o.theta) {
            return Err(Error::InvalidInput(String::from(
                "motives over different bases",
            )));
        }
        Ok(())
    }

    pub fn tensor(&self, o: &Self) -> Result<Self> {
        self.check_same_base(o)?;
        let n = self.n.kron(&self.field, &o.n);
        Motive::new(
            self.field.clone(),
            self.theta.clone(),
            self.pole + o.pole,
            n,
        )
    }

    pub fn tensor_power(&self, k: u32) -> Result<Self> {
        let mut out = Motive::unit(self.field.clone(), self.theta.clone(), 1);
        for _ in 0..k {
            out = out.tensor(self)?;
        }
        Ok(out)
    }

    pub fn direct_sum(&self, o: &Self) -> Result<Self> {
        self.check_same_base(o)?;
        let e = self.pole.max(o.pole);
        let j = self.j();
        let a = self
            .n
            .scale(&self.field, &j.pow(&self.field, e - self.pole));
        let b = o.n.scale(&self.field, &j.pow(&self.field, e - o.pole));
        Motive::new(self.field.clone(), self.theta.clone(), e, a.direct_sum(&b))
    }

    /// `M^∨` with `τ_{M^∨} = (τ_M^{−1})^T`.
    pub fn dual(&self) -> Result<Self> {
        let k = &self.field;
        let r = self.rank() as i64;
        let cinv = k.inv(&self.cert_c).ok_or(Error::SingularMatrix)?;
        let mut n = self.n.adjugate(k).transpose().map(|p| p.scale(k, &cinv));
        let mut e = self.cert_n + (r - 1) * self.pole as i64;
        if e < 0 {
            n = n.scale(k, &self.j().pow(k, (-e) as u32));
            e = 0;
        }
        Motive::new(k.clone(), self.theta.clone(), e as u32, n)
    }

    /// `τ_M(τ*x)` for `x ∈ M`, as `(pole, numerator)` meaning `j^{−pole}·numerator`.
    pub fn apply_tau(&self, x: &[TPoly<K>]) -> (u32, Vec<TPoly<K>>) {
        let tw: Vec<TPoly<K>> = x.iter().map(|p| p.twist(&self.field)).collect();
        (self.pole, self.n.mul_vec(&self.field, &tw))
    }

    /// Elementary divisors of `τ_M` over `K[[j]]`, shifted by the pole order.
    pub fn hodge_polygon(&self) -> Result<HodgePolygon> {
        let k = &self.field;
        let r = self.rank();
        let bound = self.cert_n + (r as i64) * self.pole as i64;
        let prec = (self.n.max_degree() as i64).max(bound) + 2;
        let m = SMat::from_fn(k, r, r, |a, b| {
            let c = taylor_shift(k, self.n.get(a, b), &self.theta);
            LaurentSeries::new(k.clone(), 0, c, prec)
        });
        let ty = smith_valuations(&m)?;
        Ok(HodgePolygon::from_weights(
            ty.iter().map(|w| w - self.pole as i64).collect(),
        ))
    }

    /// `τ_M` over `K((z))` with `t = z^{−1}`, where `j^{−1} = z(1−θz)^{−1}`.
    pub fn isocrystal_at_infty(&self, prec: i64) -> Result<Isocrystal<K>> {
        let k = &self.field;
        let r = self.rank();
        let one_minus =
            LaurentSeries::from_terms(k.clone(), &[(0, k.one()), (1, k.neg(&self.theta))], prec);
        let jinv = one_minus.invert()?.shift(1);
        let factor = jinv.pow(self.pole as u64);
        let u = SMat::from_fn(k, r, r, |a, b| {
            let p = self.n.get(a, b);
            let terms: Vec<(i64, K::Elem)> = p
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| (-(i as i64), c.clone()))
                .collect();
            let deg = p.degree().unwrap_or(0) as i64;
            LaurentSeries::from_terms(k.clone(), &terms, prec - deg).mul(&factor)
        });
        Isocrystal::new(k.clone(), u)
    }

    /// Negatives of the Newton slopes at infinity.
    pub fn weights(&self, prec: i64) -> Result<Vec<Slope>> {
        let iso = self.isocrystal_at_infty(prec)?;
        let slopes = iso.newton_slopes(iso.default_level())?;
        let mut w: Vec<Slope> = slopes.slopes.iter().map(|s| -s).collect();
        w.sort();
        Ok(w)
    }

    pub fn render(&self) -> String {
        let k = &self.field;
        if self.pole == 0 {
            format!("tau = {}", self.n.render(k))
        } else {
            format!("tau = (t-theta)^-{} * {}", self.pole, self.n.render(k))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(q: u64) -> (LocalField, crate::tower::Series) {
        let e = LocalField::over(q, 1).unwrap();
        let theta = e.from_terms(&[(0, 1), (1, 1)]);
        (e, theta)
    }

    #[test]
    fn carlitz_certificates() {
        let (e, th) = setup(2);
        let c = LocalMotive::carlitz(e.clone(), th.clone(), 1);
        assert_eq!(c.certificate().1, 1);
        assert!(e.is_one(c.certificate().0));
        let cc = c.tensor(&c).unwrap();
        assert_eq!(cc.certificate().1, 2);
        let a1 = c.dual().unwrap();
        assert_eq!(a1.pole_order(), 1);
        assert_eq!(a1.certificate().1, -1);
        assert!(a1.numerator().get(0, 0).eq_poly(&e, &TPoly::one(&e)));
        assert!(a1.dual().unwrap().numerator().get(0, 0).eq_poly(&e, &c.j()));
    }

    #[test]
    fn singular_rejected() {
        let (e, th) = setup(2);
        let t = TPoly::t(&e);
        assert_eq!(
            LocalMotive::new(e.clone(), th.clone(), 0, PolyMat::scalar(1, &t)).unwrap_err(),
            Error::SingularMatrix
        );
        let z = PolyMat::zeros(2, 2);
        assert!(LocalMotive::new(e, th, 0, z).is_err());
    }

    #[test]
    fn dual_of_rank_two() {
        let (e, th) = setup(3);
        let j = TPoly::j(&e, &th);
        let one = TPoly::one(&e);
        let n = PolyMat::from_fn(2, 2, |a, b| match (a, b) {
            (0, 0) => j.clone(),
            (0, 1) => one.clone(),
            (1, 1) => one.clone(),
            _ => TPoly::zero(),
        });
        let m = LocalMotive::new(e.clone(), th.clone(), 0, n).unwrap();
        let d = m.dual().unwrap();
        // τ_{M^∨}ᵀ·τ_M = 1.
        let k = &e;
        let prod = d.numerator().transpose().mul(k, m.numerator());
        let scale = j.pow(k, d.pole_order());
        for a in 0..2 {
            for b in 0..2 {
                let want = if a == b { scale.clone() } else { TPoly::zero() };
                assert!(prod.get(a, b).eq_poly(k, &want));
            }
        }
    }

    #[test]
    fn hodge_examples() {
        let (e, th) = setup(2);
        let c = LocalMotive::carlitz(e.clone(), th.clone(), 1);
        assert_eq!(c.hodge_polygon().unwrap().weights, vec![1]);
        for n in 1..=4 {
            let a = LocalMotive::carlitz(e.clone(), th.clone(), -n);
            assert_eq!(a.hodge_polygon().unwrap().weights, vec![-n]);
        }
        let one = LocalMotive::unit(e.clone(), th.clone(), 1);
        let h = one.direct_sum(&c).unwrap().hodge_polygon().unwrap();
        assert_eq!(h.weights, vec![0, 1]);
        assert_eq!(h.vertices, vec![(0, 0), (1, 0), (2, 1)]);
    }

    #[test]
    fn weights_at_infinity() {
        let f = RatFuncField::new(2, "theta").unwrap();
        let th = f.gen();
        let a1 = GlobalMotive::carlitz(f.clone(), th.clone(), -1);
        assert_eq!(a1.weights(16).unwrap(), vec![Slope::from_integer(-1)]);
        let c = GlobalMotive::carlitz(f.clone(), th.clone(), 1);
        let iso = c.isocrystal_at_infty(16).unwrap();
        assert_eq!(iso.degree(), -1);
        let cs = c.direct_sum(&GlobalMotive::unit(f, th, 1)).unwrap();
        assert_eq!(
            cs.weights(16).unwrap(),
            vec![Slope::from_integer(0), Slope::from_integer(1)]
        );
    }
}
