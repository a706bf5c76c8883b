//! Polynomials in `t` over a coefficient field, and their `j`-adic expansions
//! with `j = t − θ`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::field::Field;

/// A polynomial `Σ cᵢ tⁱ`; trailing zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct TPoly<K: Field> {
    coeffs: Vec<K::Elem>,
}

impl<K: Field> TPoly<K> {
    pub fn new(k: &K, mut coeffs: Vec<K::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| k.is_zero(c)) {
            coeffs.pop();
        }
        TPoly { coeffs }
    }

    pub fn zero() -> Self {
        TPoly { coeffs: Vec::new() }
    }

    pub fn constant(k: &K, c: K::Elem) -> Self {
        Self::new(k, vec![c])
    }

    pub fn one(k: &K) -> Self {
        Self::constant(k, k.one())
    }

    /// The variable `t`.
    pub fn t(k: &K) -> Self {
        Self::new(k, vec![k.zero(), k.one()])
    }

    /// `t − θ`.
    pub fn j(k: &K, theta: &K::Elem) -> Self {
        Self::new(k, vec![k.neg(theta), k.one()])
    }

    /// A polynomial with coefficients in the prime field, given as integers.
    pub fn from_ints(k: &K, c: &[i64]) -> Self {
        Self::new(k, c.iter().map(|&x| k.from_int(x)).collect())
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[K::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, k: &K, i: usize) -> K::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| k.zero())
    }

    pub fn add(&self, k: &K, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(
            k,
            (0..n)
                .map(|i| k.add(&self.coeff(k, i), &o.coeff(k, i)))
                .collect(),
        )
    }

    pub fn neg(&self, k: &K) -> Self {
        TPoly {
            coeffs: self.coeffs.iter().map(|c| k.neg(c)).collect(),
        }
    }

    pub fn sub(&self, k: &K, o: &Self) -> Self {
        self.add(k, &o.neg(k))
    }

    pub fn mul(&self, k: &K, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![k.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = k.add(&out[i + j], &k.mul(a, b));
            }
        }
        Self::new(k, out)
    }

    pub fn scale(&self, k: &K, c: &K::Elem) -> Self {
        Self::new(k, self.coeffs.iter().map(|x| k.mul(x, c)).collect())
    }

    pub fn pow(&self, k: &K, e: u32) -> Self {
        let mut out = Self::one(k);
        for _ in 0..e {
            out = out.mul(k, self);
        }
        out
    }

    /// Multiplies by `t^s`.
    pub fn shift(&self, k: &K, s: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![k.zero(); s];
        c.extend(self.coeffs.iter().cloned());
        TPoly { coeffs: c }
    }

    /// Applies the Frobenius of `K` to every coefficient; `t` is fixed.
    pub fn twist(&self, k: &K) -> Self {
        Self::new(k, self.coeffs.iter().map(|c| k.frobenius(c)).collect())
    }

    pub fn map<L: Field>(&self, l: &L, f: impl Fn(&K::Elem) -> L::Elem) -> TPoly<L> {
        TPoly::new(l, self.coeffs.iter().map(f).collect())
    }

    pub fn eval(&self, k: &K, x: &K::Elem) -> K::Elem {
        self.coeffs
            .iter()
            .rev()
            .fold(k.zero(), |acc, c| k.add(&k.mul(&acc, x), c))
    }

    /// Division with remainder by a polynomial with invertible leading coefficient.
    pub fn divrem(&self, k: &K, d: &Self) -> Option<(Self, Self)> {
        let dd = d.degree()?;
        let lead_inv = k.inv(&d.coeffs[dd])?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut quo = vec![k.zero(); r.len() - dd];
        for s in (0..quo.len()).rev() {
            let c = k.mul(&r[s + dd], &lead_inv);
            if k.is_zero(&c) {
                continue;
            }
            for (i, y) in d.coeffs.iter().enumerate() {
                r[s + i] = k.sub(&r[s + i], &k.mul(&c, y));
            }
            quo[s] = c;
        }
        r.truncate(dd);
        Some((Self::new(k, quo), Self::new(k, r)))
    }

    /// Componentwise equality using the field's zero test.
    pub fn eq_poly(&self, k: &K, o: &Self) -> bool {
        self.sub(k, o).coeffs.iter().all(|c| k.is_zero(c))
    }

    pub fn render(&self, k: &K) -> String {
        render_in(k, &self.coeffs, "t")
    }
}

pub(crate) fn render_in<K: Field>(k: &K, coeffs: &[K::Elem], var: &str) -> String {
    let mut parts = Vec::new();
    for (i, c) in coeffs.iter().enumerate() {
        if k.is_zero(c) {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.into(),
            _ => format!("{}^{}", var, i),
        };
        parts.push(match (mono.is_empty(), k.is_one(c)) {
            (true, _) => k.render(c),
            (false, true) => mono,
            (false, false) => format!("({})*{}", k.render(c), mono),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// `Σ_{i ≥ −e} aᵢ (t−θ)ⁱ`, stored as `coeffs[k] = a_{k−e}`; `θ` lives in the
/// surrounding context.
#[derive(Clone, Debug)]
pub struct JLaurentPoly<K: Field> {
    pub pole: u32,
    pub coeffs: Vec<K::Elem>,
}

impl<K: Field> JLaurentPoly<K> {
    /// Coefficient of `(t−θ)^i`.
    pub fn coeff(&self, k: &K, i: i64) -> K::Elem {
        let idx = i + self.pole as i64;
        if idx < 0 {
            return k.zero();
        }
        self.coeffs
            .get(idx as usize)
            .cloned()
            .unwrap_or_else(|| k.zero())
    }

    pub fn render(&self, k: &K) -> String {
        let mut parts = Vec::new();
        for (idx, c) in self.coeffs.iter().enumerate() {
            if k.is_zero(c) {
                continue;
            }
            let i = idx as i64 - self.pole as i64;
            let mono = match i {
                0 => String::new(),
                1 => "(t-theta)".into(),
                _ => format!("(t-theta)^{}", i),
            };
            parts.push(match (mono.is_empty(), k.is_one(c)) {
                (true, _) => k.render(c),
                (false, true) => mono,
                (false, false) => format!("({})*{}", k.render(c), mono),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Taylor expansion of `p` around `θ`, stored with pole slot `pole`; the
/// represented element is `p` itself.
pub fn jadic_expand<K: Field>(k: &K, p: &TPoly<K>, theta: &K::Elem, pole: u32) -> JLaurentPoly<K> {
    let mut coeffs = vec![k.zero(); pole as usize];
    coeffs.extend(taylor_shift(k, p, theta));
    JLaurentPoly { pole, coeffs }
}

/// Expansion of `p·(t−θ)^{−pole}`.
pub fn jadic_expand_fraction<K: Field>(
    k: &K,
    p: &TPoly<K>,
    theta: &K::Elem,
    pole: u32,
) -> JLaurentPoly<K> {
    JLaurentPoly {
        pole,
        coeffs: taylor_shift(k, p, theta),
    }
}

/// Numerator `N` with `x = N·(t−θ)^{−pole}`.
pub fn jadic_collapse<K: Field>(k: &K, x: &JLaurentPoly<K>, theta: &K::Elem) -> (TPoly<K>, u32) {
    let j = TPoly::j(k, theta);
    let mut out = TPoly::zero();
    for c in x.coeffs.iter().rev() {
        out = out.mul(k, &j).add(k, &TPoly::constant(k, c.clone()));
    }
    (out, x.pole)
}

/// Coefficients `aᵢ` with `p(t) = Σ aᵢ (t−θ)ⁱ`.
pub fn taylor_shift<K: Field>(k: &K, p: &TPoly<K>, theta: &K::Elem) -> Vec<K::Elem> {
    let j = TPoly::j(k, theta);
    let mut rest = p.clone();
    let mut out = Vec::new();
    while !rest.is_zero() {
        let (quo, r) = rest.divrem(k, &j).expect("t - theta is monic");
        out.push(r.coeff(k, 0));
        rest = quo;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::gf::Gf;

    #[test]
    fn expand_examples() {
        let k = Gf::new(5, 1).unwrap();
        let th = 3;
        let t = TPoly::t(&k);
        let e = jadic_expand(&k, &t, &th, 0);
        assert_eq!(e.coeffs, vec![3, 1]);
        let e2 = jadic_expand(&k, &t.mul(&k, &t), &th, 0);
        // θ² + 2θ(t−θ) + (t−θ)²
        assert_eq!(e2.coeffs, vec![9 % 5, 6 % 5, 1]);
        let one = jadic_expand(&k, &TPoly::one(&k), &th, 1);
        assert_eq!(one.coeff(&k, -1), 0);
        assert_eq!(one.coeff(&k, 0), 1);
        let (n, pole) = jadic_collapse(&k, &one, &th);
        assert_eq!(pole, 1);
        assert!(n.eq_poly(&k, &TPoly::j(&k, &th)));
    }

    #[test]
    fn divrem_identity() {
        let k = Gf::new(3, 1).unwrap();
        let a = TPoly::from_ints(&k, &[1, 2, 0, 1, 2]);
        let b = TPoly::from_ints(&k, &[2, 1, 1]);
        let (quo, r) = a.divrem(&k, &b).unwrap();
        assert!(quo.mul(&k, &b).add(&k, &r).eq_poly(&k, &a));
        assert!(r.degree() < b.degree());
    }
}
