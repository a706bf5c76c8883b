//! Isocrystals `(D, φ_D)` over `F((π))` with `φ_D(v) = U·τ(v)`, where `τ`
//! twists coefficients only. Degree, slope, purity, Newton slopes and
//! stable lines of rank-2 isocrystals.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_integer::Integer;
use num_rational::Ratio;

use crate::decision::{Certificate, Obstruction};
use crate::error::{Error, Result};
use crate::linalg::{smith_valuations, SMat};
use crate::tower::{Field, LaurentSeries, TwistStyle};

pub type Slope = Ratio<i64>;

/// Slopes `λ₁ ≤ … ≤ λ_r` with the level at which they were certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeData {
    pub slopes: Vec<Slope>,
    pub level: u32,
}

#[derive(Clone, Debug)]
pub struct Isocrystal<K: Field> {
    field: K,
    u: SMat<K>,
    deg: i64,
}

const STYLE: TwistStyle = TwistStyle::CoefficientOnly;

fn lcm_upto(r: usize) -> i64 {
    (1..=r as i64).fold(1, |acc, x| acc.lcm(&x))
}

impl<K: Field> Isocrystal<K> {
    pub fn new(field: K, u: SMat<K>) -> Result<Self> {
        if u.rows() != u.cols() {
            return Err(Error::InvalidInput(String::from(
                "isocrystal matrix must be square",
            )));
        }
        let deg = u.det()?.valuation().ok_or(Error::SingularMatrix)?;
        Ok(Isocrystal { field, u, deg })
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn matrix(&self) -> &SMat<K> {
        &self.u
    }

    pub fn rank(&self) -> usize {
        self.u.rows()
    }

    pub fn degree(&self) -> i64 {
        self.deg
    }

    pub fn degree_and_slope(&self) -> (i64, Slope) {
        (self.deg, Slope::new(self.deg, self.rank().max(1) as i64))
    }

    /// Matrix of `φ^n` in the standard basis: `U·τ(U)⋯τ^{n−1}(U)`.
    pub fn power_matrix(&self, n: u32) -> SMat<K> {
        let mut m = SMat::identity(&self.field, self.rank(), self.u.min_prec());
        let mut t = self.u.clone();
        for _ in 0..n {
            m = m.mul(&t);
            t = t.twist(STYLE);
        }
        m
    }

    /// `P⁻¹·U·τ(P)`.
    pub fn conjugate(&self, p: &SMat<K>) -> Result<Self> {
        let u = p.inverse()?.mul(&self.u).mul(&p.twist(STYLE));
        Isocrystal::new(self.field.clone(), u)
    }

    pub fn direct_sum(&self, o: &Self) -> Result<Self> {
        let prec = self.u.min_prec().min(o.u.min_prec());
        Isocrystal::new(self.field.clone(), self.u.direct_sum(&o.u, prec))
    }

    pub fn tensor(&self, o: &Self) -> Result<Self> {
        Isocrystal::new(self.field.clone(), self.u.kron(&o.u))
    }

    /// Whether `⟨φ^r L⟩ = π^s L` for the lattice `L` spanned by the columns
    /// of `basis`; true certifies purity of slope `s/r`.
    pub fn purity_check(&self, s: i64, r: u32, basis: &SMat<K>) -> Result<bool> {
        let mut m = SMat::identity(&self.field, self.rank(), self.u.min_prec());
        let mut t = self.u.clone();
        for _ in 0..r {
            m = m.mul(&t);
            t = t.twist(STYLE);
        }
        let mut pr = basis.clone();
        for _ in 0..r {
            pr = pr.twist(STYLE);
        }
        let rel = basis.inverse()?.mul(&m).mul(&pr);
        Ok(smith_valuations(&rel)?.iter().all(|&e| e == s))
    }

    /// Elementary divisors of `φ^n` relative to the standard lattice.
    pub fn hodge_of_power(&self, n: u32) -> Result<Vec<i64>> {
        smith_valuations(&self.power_matrix(n))
    }

    /// Newton slopes as limits of `eᵢ(n)/n`, certified once the increments
    /// over one period `lcm(1..r)` repeat and sum to the degree.
    pub fn newton_slopes(&self, n_max: u32) -> Result<SlopeData> {
        let r = self.rank();
        let l = lcm_upto(r);
        let mut es: Vec<Vec<i64>> = Vec::new();
        let mut m = SMat::identity(&self.field, r, self.u.min_prec());
        let mut t = self.u.clone();
        es.push(alloc::vec![0; r]);
        for n in 1..=n_max as i64 {
            m = m.mul(&t);
            t = t.twist(STYLE);
            es.push(smith_valuations(&m)?);
            let base = n - 2 * l;
            if base < 1 {
                continue;
            }
            let (a, b, c) = (
                &es[base as usize],
                &es[(base + l) as usize],
                &es[n as usize],
            );
            let d1: Vec<i64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
            let d2: Vec<i64> = b.iter().zip(c).map(|(x, y)| y - x).collect();
            if d1 == d2 && d1.iter().sum::<i64>() == l * self.deg {
                let mut slopes: Vec<Slope> = d1.iter().map(|&d| Slope::new(d, l)).collect();
                slopes.sort();
                return Ok(SlopeData {
                    slopes,
                    level: n as u32,
                });
            }
        }
        Err(Error::NotConverged(n_max))
    }

    /// Default level bound `(r+2)·lcm(1..r)`.
    pub fn default_level(&self) -> u32 {
        ((self.rank() as i64 + 2) * lcm_upto(self.rank())) as u32
    }
}

/// Result of the rank-2 stable line search.
#[derive(Clone, Debug)]
pub struct LineSearch<K: Field> {
    /// Generators of stable lines with their eigen-factors `φ(v) = λ·v`.
    pub lines: Vec<(Vec<LaurentSeries<K>>, LaurentSeries<K>)>,
    /// Why no other line is stable.
    pub exclusions: Vec<Certificate>,
    /// Set when part of the search fell outside the implemented cases.
    pub incomplete: Option<String>,
}

impl<K: Field> Isocrystal<K> {
    /// All `φ`-stable lines of a rank-2 isocrystal with upper-triangular `U`.
    ///
    /// `e₀` is stable. A line through `(x, 1)` is stable iff
    /// `u₀₀·τ(x) + u₀₁ = u₁₁·x`; when `v(u₁₁) > v(u₀₀)` this reads
    /// `τ(x) = c·x + b` with `v(c) > 0` and is solved top-down by `q`-th roots,
    /// so a missing root excludes every such line. When `v(u₁₁) < v(u₀₀)` the
    /// equation is a contraction with a unique solution.
    pub fn rank1_subisocrystal_search(&self, prec: i64) -> Result<LineSearch<K>> {
        if self.rank() != 2 {
            return Err(Error::InvalidInput(String::from(
                "line search needs rank 2",
            )));
        }
        let k = &self.field;
        let u = &self.u;
        if !u.get(1, 0).is_zero() {
            return Ok(LineSearch {
                lines: Vec::new(),
                exclusions: Vec::new(),
                incomplete: Some(String::from("matrix is not upper triangular")),
            });
        }
        let zero = LaurentSeries::zero(k.clone(), prec);
        let one = LaurentSeries::one(k.clone(), prec);
        let mut lines = alloc::vec![(alloc::vec![one.clone(), zero.clone()], u.get(0, 0).clone())];
        let mut exclusions = Vec::new();
        let mut incomplete = None;
        let (u00, u01, u11) = (u.get(0, 0), u.get(0, 1), u.get(1, 1));
        let v00 = u00.valuation().ok_or(Error::SingularMatrix)?;
        let v11 = u11.valuation().ok_or(Error::SingularMatrix)?;
        if v11 > v00 {
            let inv00 = u00.invert()?;
            let c = u11.mul(&inv00);
            let b = u01.mul(&inv00).neg();
            match twisted_qth_root_solve(k, &c, &b, prec) {
                Ok(x) => lines.push((alloc::vec![x, one], u11.clone())),
                Err(cert) => exclusions.push(cert),
            }
        } else if v11 < v00 {
            // x = c⁻¹(τ(x) − b) with v(c⁻¹) > 0.
            let inv11 = u11.invert()?;
            let a = u00.mul(&inv11);
            let b = u01.mul(&inv11);
            let mut x = b.clone();
            let steps = (prec - b.val_bound()).max(0) / (v00 - v11) + 2;
            for _ in 0..steps {
                x = a.mul(&x.frobenius(STYLE)).add(&b);
            }
            lines.push((alloc::vec![x, one], u11.clone()));
        } else {
            incomplete = Some(String::from("diagonal valuations coincide"));
        }
        Ok(LineSearch {
            lines,
            exclusions,
            incomplete,
        })
    }
}

/// Solves `τ(x) = c·x + b` with `v(c) > 0` coefficient by coefficient:
/// `x_i^q = (c·x)_i + b_i`, where `(c·x)_i` only involves `x_j` with `j < i`.
/// Any solution has `v(x) ≥ v(b)`.
pub fn twisted_qth_root_solve<K: Field>(
    k: &K,
    c: &LaurentSeries<K>,
    b: &LaurentSeries<K>,
    prec: i64,
) -> core::result::Result<LaurentSeries<K>, Certificate> {
    let start = b.val_bound().min(prec);
    let mut terms: Vec<(i64, K::Elem)> = Vec::new();
    for i in start..prec {
        let x = LaurentSeries::from_terms(k.clone(), &terms, prec);
        let rhs = k.add(&c.mul(&x).coeff(i), &b.coeff(i));
        match k.qth_root(&rhs) {
            Some(r) => {
                if !k.is_zero(&r) {
                    terms.push((i, r));
                }
            }
            None => {
                return Err(Certificate::new(
                    Obstruction::QthRoot,
                    format!(
                        "coefficient of pi^{}: x^{} = {} has no solution in the coefficient field",
                        i,
                        k.q(),
                        k.render(&rhs)
                    ),
                ))
            }
        }
    }
    Ok(LaurentSeries::from_terms(k.clone(), &terms, prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::{Gf, RatFuncField};

    fn iso(k: &Gf, entries: &[&[(i64, u32)]]) -> Isocrystal<Gf> {
        let n = if entries.len() == 4 { 2 } else { 1 };
        let u = SMat::from_fn(k, n, n, |i, j| {
            LaurentSeries::from_terms(k.clone(), entries[i * n + j], 40)
        });
        Isocrystal::new(k.clone(), u).unwrap()
    }

    #[test]
    fn degree_and_slopes() {
        let k = Gf::new(2, 1).unwrap();
        let c = iso(&k, &[&[], &[(1, 1)], &[(0, 1)], &[]]);
        assert_eq!(c.degree_and_slope(), (1, Slope::new(1, 2)));
        let s = c.newton_slopes(c.default_level()).unwrap();
        assert_eq!(s.slopes, [Slope::new(1, 2), Slope::new(1, 2)]);
        assert!(c.purity_check(1, 2, &SMat::identity(&k, 2, 40)).unwrap());
        let d = iso(&k, &[&[(0, 1)], &[], &[], &[(1, 1)]]);
        assert_eq!(
            d.newton_slopes(d.default_level()).unwrap().slopes,
            [Slope::from(0), Slope::from(1)]
        );
        assert!(!d.purity_check(1, 2, &SMat::identity(&k, 2, 40)).unwrap());
        let r1 = iso(&k, &[&[(3, 1)]]);
        assert_eq!(r1.newton_slopes(3).unwrap().slopes, [Slope::from(3)]);
    }

    #[test]
    fn mornev_lines() {
        let f = RatFuncField::new(2, "theta").unwrap();
        let th = f.gen();
        let prec = 12;
        // π(1 − θπ)⁻¹.
        let one_m = LaurentSeries::from_terms(f.clone(), &[(0, f.one()), (1, th.clone())], prec);
        let u11 =
            LaurentSeries::monomial(f.clone(), f.one(), 1, prec).mul(&one_m.invert().unwrap());
        let mk = |alpha: &crate::tower::RatFunc| {
            let u = SMat::from_fn(&f, 2, 2, |i, j| match (i, j) {
                (0, 0) => LaurentSeries::one(f.clone(), prec),
                (0, 1) => LaurentSeries::constant(f.clone(), alpha.clone(), prec),
                (1, 0) => LaurentSeries::zero(f.clone(), prec),
                _ => u11.clone(),
            });
            Isocrystal::new(f.clone(), u).unwrap()
        };
        let res = mk(&th).rank1_subisocrystal_search(prec).unwrap();
        assert_eq!(res.lines.len(), 1);
        assert_eq!(res.exclusions.len(), 1);
        // θ² is a square but the next stage needs a square root of θ.
        let res = mk(&f.mul(&th, &th))
            .rank1_subisocrystal_search(prec)
            .unwrap();
        assert_eq!(res.lines.len(), 1);
        assert!(res.exclusions[0].detail.contains("pi^1"));
        let res = mk(&f.zero()).rank1_subisocrystal_search(prec).unwrap();
        assert_eq!(res.lines.len(), 2);
    }
}
