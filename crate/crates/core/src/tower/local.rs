//! The local field `E = k((π))` over a finite field `k`.

use alloc::string::String;

use super::field::Field;
use super::gf::Gf;
use super::series::{LaurentSeries, TwistStyle};

/// Default working precision for new constants.
pub const DEFAULT_PRECISION: i64 = 64;

pub type Series = LaurentSeries<Gf>;

/// `k((π))` with the `q`-Frobenius `σ(x) = x^q`; new constants are created at
/// the field's working precision.
///
/// Zero tests are only up to precision.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalField {
    k: Gf,
    prec: i64,
}

impl LocalField {
    pub fn new(k: Gf, prec: i64) -> Self {
        LocalField { k, prec }
    }

    /// `F_{q^d}((π))` at the default precision.
    pub fn over(q: u64, d: u32) -> Option<Self> {
        Some(LocalField::new(Gf::new(q, d)?, DEFAULT_PRECISION))
    }

    pub fn residue_field(&self) -> &Gf {
        &self.k
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn with_precision(&self, prec: i64) -> Self {
        LocalField {
            k: self.k.clone(),
            prec,
        }
    }

    pub fn pi(&self) -> Series {
        LaurentSeries::monomial(self.k.clone(), 1, 1, self.prec)
    }

    pub fn constant(&self, c: u32) -> Series {
        LaurentSeries::constant(self.k.clone(), c, self.prec)
    }

    pub fn monomial(&self, c: u32, e: i64) -> Series {
        LaurentSeries::monomial(self.k.clone(), c, e, self.prec)
    }

    pub fn from_terms(&self, terms: &[(i64, u32)]) -> Series {
        LaurentSeries::from_terms(self.k.clone(), terms, self.prec)
    }

    pub fn zero_series(&self) -> Series {
        LaurentSeries::zero(self.k.clone(), self.prec)
    }
}

impl Field for LocalField {
    type Elem = Series;

    fn characteristic(&self) -> u32 {
        self.k.p()
    }
    fn q(&self) -> u64 {
        self.k.q()
    }
    fn zero(&self) -> Series {
        self.zero_series()
    }
    fn one(&self) -> Series {
        self.constant(1)
    }
    fn from_int(&self, n: i64) -> Series {
        self.constant(self.k.from_int(n))
    }
    fn add(&self, a: &Series, b: &Series) -> Series {
        a.add(b)
    }
    fn neg(&self, a: &Series) -> Series {
        a.neg()
    }
    fn mul(&self, a: &Series, b: &Series) -> Series {
        a.mul(b)
    }
    fn inv(&self, a: &Series) -> Option<Series> {
        a.invert().ok()
    }
    fn is_zero(&self, a: &Series) -> bool {
        a.is_zero()
    }
    fn frobenius(&self, a: &Series) -> Series {
        // Keep iterated Frobenius at working precision.
        a.frobenius(TwistStyle::FullFrobenius)
            .truncate(self.prec.max(a.prec()))
    }
    fn qth_root(&self, a: &Series) -> Option<Series> {
        a.qth_root()
    }
    fn render(&self, a: &Series) -> String {
        a.render()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_carry_working_precision() {
        let e = LocalField::over(3, 1).unwrap();
        assert_eq!(e.one().prec(), DEFAULT_PRECISION);
        let th = e.from_terms(&[(0, 1), (1, 1)]);
        let inv = e.inv(&th).unwrap();
        assert!(e.is_one(&e.mul(&th, &inv)));
        assert!(e.inv(&e.zero()).is_none());
    }
}
