//! Laurent series in `π` with absolute precision.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::field::Field;
use crate::error::Error;

/// How a Frobenius twist acts on a series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TwistStyle {
    /// `Σ cᵢπⁱ ↦ Σ cᵢ^q π^{qi}`.
    FullFrobenius,
    /// `Σ cᵢπⁱ ↦ Σ cᵢ^q πⁱ`.
    CoefficientOnly,
}

/// A Laurent series `Σ cᵢπⁱ` whose coefficients are known for `i < prec`.
///
/// Stored normalized: `coeffs[0]` is the first nonzero coefficient (at
/// exponent `start`), or `coeffs` is empty and `start == prec` when the series
/// is zero to the known precision.
#[derive(Clone, Debug)]
pub struct LaurentSeries<K: Field> {
    field: K,
    start: i64,
    coeffs: Vec<K::Elem>,
    prec: i64,
}

impl<K: Field> LaurentSeries<K> {
    /// Builds `Σ coeffs[i] π^{start+i} + O(π^prec)`, dropping terms at or past `prec`.
    pub fn new(field: K, start: i64, coeffs: Vec<K::Elem>, prec: i64) -> Self {
        let mut s = LaurentSeries {
            field,
            start,
            coeffs,
            prec,
        };
        s.normalize();
        s
    }

    pub fn zero(field: K, prec: i64) -> Self {
        LaurentSeries {
            field,
            start: prec,
            coeffs: Vec::new(),
            prec,
        }
    }

    pub fn constant(field: K, c: K::Elem, prec: i64) -> Self {
        Self::new(field, 0, vec![c], prec)
    }

    pub fn one(field: K, prec: i64) -> Self {
        let one = field.one();
        Self::constant(field, one, prec)
    }

    /// `c·π^e`.
    pub fn monomial(field: K, c: K::Elem, e: i64, prec: i64) -> Self {
        Self::new(field, e, vec![c], prec)
    }

    /// Builds a series from `(exponent, coefficient)` pairs.
    pub fn from_terms(field: K, terms: &[(i64, K::Elem)], prec: i64) -> Self {
        let Some(lo) = terms.iter().map(|t| t.0).min() else {
            return Self::zero(field, prec);
        };
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![field.zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            let i = (e - lo) as usize;
            coeffs[i] = field.add(&coeffs[i], c);
        }
        Self::new(field, lo, coeffs, prec)
    }

    fn normalize(&mut self) {
        let keep = (self.prec - self.start).clamp(0, self.coeffs.len() as i64) as usize;
        self.coeffs.truncate(keep);
        let lead = self.coeffs.iter().position(|c| !self.field.is_zero(c));
        match lead {
            None => {
                self.coeffs.clear();
                self.start = self.prec;
            }
            Some(i) => {
                self.coeffs.drain(..i);
                self.start += i as i64;
                while self.coeffs.last().is_some_and(|c| self.field.is_zero(c)) {
                    self.coeffs.pop();
                }
            }
        }
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    /// Absolute precision: coefficients are known below this exponent.
    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// The exact valuation, or `None` if the series is zero to precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    /// The valuation, or the precision when zero to precision.
    pub fn val_bound(&self) -> i64 {
        self.start
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `π^i`; zero outside the stored range.
    pub fn coeff(&self, i: i64) -> K::Elem {
        if i < self.start || i >= self.start + self.coeffs.len() as i64 {
            self.field.zero()
        } else {
            self.coeffs[(i - self.start) as usize].clone()
        }
    }

    /// Leading coefficient, if any.
    pub fn lead(&self) -> Option<&K::Elem> {
        self.coeffs.first()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &K::Elem)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.field.is_zero(c))
            .map(move |(i, c)| (self.start + i as i64, c))
    }

    /// Exponent one past the last stored coefficient.
    pub fn end(&self) -> i64 {
        self.start + self.coeffs.len() as i64
    }

    /// Forgets coefficients at exponents `≥ prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        Self::new(self.field.clone(), self.start, self.coeffs.clone(), prec)
    }

    /// Declares the series exact up to `prec` (unknown terms become zero).
    pub fn extend_prec(&self, prec: i64) -> Self {
        let mut s = self.clone();
        if prec > s.prec {
            if s.coeffs.is_empty() {
                s.start = prec;
            }
            s.prec = prec;
        }
        s
    }

    pub fn with_prec(&self, prec: i64) -> Self {
        if prec <= self.prec {
            self.truncate(prec)
        } else {
            self.extend_prec(prec)
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let lo = self.start.min(other.start);
        if lo >= prec {
            return Self::zero(self.field.clone(), prec);
        }
        let hi = self.end().max(other.end()).min(prec);
        let coeffs = (lo..hi)
            .map(|i| self.field.add(&self.coeff(i), &other.coeff(i)))
            .collect();
        Self::new(self.field.clone(), lo, coeffs, prec)
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            field: self.field.clone(),
            start: self.start,
            coeffs: self.coeffs.iter().map(|c| self.field.neg(c)).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = (self.start + other.prec).min(other.start + self.prec);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field.clone(), prec);
        }
        let start = self.start + other.start;
        let len = ((prec - start).max(0) as usize).min(self.coeffs.len() + other.coeffs.len() - 1);
        let mut out = vec![self.field.zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if self.field.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = self.field.add(&out[i + j], &self.field.mul(a, b));
            }
        }
        Self::new(self.field.clone(), start, out, prec)
    }

    pub fn scale(&self, c: &K::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|x| self.field.mul(x, c)).collect();
        Self::new(self.field.clone(), self.start, coeffs, self.prec)
    }

    /// Multiplies by `π^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            field: self.field.clone(),
            start: self.start + k,
            coeffs: self.coeffs.clone(),
            prec: self.prec + k,
        }
    }

    /// Multiplicative inverse, keeping the relative precision.
    pub fn invert(&self) -> Result<Self, Error> {
        let v = self.valuation().ok_or(Error::ZeroToPrecision(self.prec))?;
        let rel = (self.prec - v) as usize;
        let f = &self.field;
        let a0_inv = f
            .inv(&self.coeffs[0])
            .ok_or(Error::ZeroToPrecision(self.prec))?;
        let mut b: Vec<K::Elem> = Vec::with_capacity(rel);
        for n in 0..rel {
            if n == 0 {
                b.push(a0_inv.clone());
                continue;
            }
            let mut acc = f.zero();
            for i in 1..=n.min(self.coeffs.len() - 1) {
                acc = f.add(&acc, &f.mul(&self.coeffs[i], &b[n - i]));
            }
            b.push(f.neg(&f.mul(&acc, &a0_inv)));
        }
        Ok(Self::new(f.clone(), -v, b, self.prec - 2 * v))
    }

    pub fn div(&self, other: &Self) -> Result<Self, Error> {
        Ok(self.mul(&other.invert()?))
    }

    /// `self^k`; `x^0` is `1` at the precision of `x` (at least 1).
    pub fn pow(&self, k: u64) -> Self {
        if k == 0 {
            return Self::one(self.field.clone(), self.prec.max(1));
        }
        let mut out: Option<Self> = None;
        let mut base = self.clone();
        let mut k = k;
        loop {
            if k & 1 == 1 {
                out = Some(match out {
                    None => base.clone(),
                    Some(o) => o.mul(&base),
                });
            }
            k >>= 1;
            if k == 0 {
                return out.unwrap();
            }
            base = base.mul(&base);
        }
    }

    pub fn powi(&self, k: i64) -> Result<Self, Error> {
        if k >= 0 {
            Ok(self.pow(k as u64))
        } else {
            Ok(self.invert()?.pow(k.unsigned_abs()))
        }
    }

    pub fn frobenius(&self, style: TwistStyle) -> Self {
        let f = &self.field;
        match style {
            TwistStyle::CoefficientOnly => LaurentSeries {
                field: f.clone(),
                start: self.start,
                coeffs: self.coeffs.iter().map(|c| f.frobenius(c)).collect(),
                prec: self.prec,
            },
            TwistStyle::FullFrobenius => {
                let q = f.q() as i64;
                if self.is_zero() {
                    return Self::zero(f.clone(), self.prec * q);
                }
                let mut coeffs = vec![f.zero(); (self.coeffs.len() - 1) * q as usize + 1];
                for (i, c) in self.coeffs.iter().enumerate() {
                    coeffs[i * q as usize] = f.frobenius(c);
                }
                Self::new(f.clone(), self.start * q, coeffs, self.prec * q)
            }
        }
    }

    pub fn frobenius_iter(&self, style: TwistStyle, n: u32) -> Self {
        let mut x = self.clone();
        for _ in 0..n {
            x = x.frobenius(style);
        }
        x
    }

    /// `y` with `y^q = self` under the full Frobenius, when it exists.
    pub fn qth_root(&self) -> Option<Self> {
        let f = &self.field;
        let q = f.q() as i64;
        let prec = self.prec.div_euclid(q) + i64::from(self.prec.rem_euclid(q) != 0);
        if self.is_zero() {
            return Some(Self::zero(f.clone(), prec));
        }
        let mut terms = Vec::new();
        for (e, c) in self.terms() {
            if e.rem_euclid(q) != 0 {
                return None;
            }
            terms.push((e / q, f.qth_root(c)?));
        }
        Some(Self::from_terms(f.clone(), &terms, prec))
    }

    /// Equality on the common known range.
    pub fn eq_to_prec(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    pub fn render_with(&self, var: &str) -> String {
        let f = &self.field;
        let mut parts = Vec::new();
        for (e, c) in self.terms() {
            let mono = match e {
                0 => String::new(),
                1 => var.into(),
                _ => format!("{}^{}", var, e),
            };
            parts.push(match (mono.is_empty(), f.is_one(c)) {
                (true, _) => f.render(c),
                (false, true) => mono,
                (false, false) => format!("{}*{}", f.render(c), mono),
            });
        }
        if parts.is_empty() {
            format!("O({}^{})", var, self.prec)
        } else {
            format!("{} (prec {})", parts.join(" + "), self.prec)
        }
    }

    pub fn render(&self) -> String {
        self.render_with("pi")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::gf::Gf;

    fn f2() -> Gf {
        Gf::new(2, 1).unwrap()
    }

    fn s(k: &Gf, terms: &[(i64, u32)], prec: i64) -> LaurentSeries<Gf> {
        LaurentSeries::from_terms(k.clone(), terms, prec)
    }

    #[test]
    fn frobenius_styles() {
        let k = f2();
        let x = s(&k, &[(0, 1), (1, 1)], 10);
        let full = x.frobenius(TwistStyle::FullFrobenius);
        assert!(full.eq_to_prec(&s(&k, &[(0, 1), (2, 1)], 20)));
        assert_eq!(full.prec(), 20);
        assert!(x.frobenius(TwistStyle::CoefficientOnly).eq_to_prec(&x));

        let k4 = Gf::new(2, 2).unwrap();
        let w = k4.generator();
        let y = s(&k4, &[(1, w)], 10).frobenius(TwistStyle::CoefficientOnly);
        assert_eq!(y.coeff(1), k4.mul(w, w));
    }

    #[test]
    fn invert_examples() {
        let k = f2();
        let x = s(&k, &[(0, 1), (1, 1)], 8);
        let y = x.invert().unwrap();
        assert!(y.eq_to_prec(&s(&k, &(0..8).map(|i| (i, 1)).collect::<Vec<_>>(), 8)));
        let pi = s(&k, &[(1, 1)], 8);
        let pinv = pi.invert().unwrap();
        assert_eq!(pinv.valuation(), Some(-1));
        assert_eq!(pinv.prec(), 6);
        assert_eq!(
            LaurentSeries::zero(k, 3).invert().unwrap_err(),
            Error::ZeroToPrecision(3)
        );
    }

    #[test]
    fn precision_rules() {
        let k = f2();
        let a = s(&k, &[(-1, 1)], 5);
        let b = s(&k, &[(2, 1)], 7);
        assert_eq!(a.add(&b).prec(), 5);
        assert_eq!(a.mul(&b).prec(), 6);
        assert_eq!(a.render(), "pi^-1 (prec 5)");
        let c = s(&k, &[(-1, 1), (0, 1), (3, 1)], 64);
        assert_eq!(c.render(), "pi^-1 + 1 + pi^3 (prec 64)");
    }

    #[test]
    fn qth_root_of_square() {
        let k = f2();
        let x = s(&k, &[(-1, 1), (2, 1)], 9);
        let y = x.frobenius(TwistStyle::FullFrobenius);
        assert!(y.qth_root().unwrap().eq_to_prec(&x));
        assert!(x.qth_root().is_none());
    }
}
