//! The rational function field `F_q(θ)`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::field::Field;
use super::gf::Gf;
use super::poly::{self, Poly};

/// `F_q(θ)`, non-perfect: `qth_root` is partial.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFuncField {
    k: Gf,
    symbol: String,
}

/// A reduced fraction with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RatFuncField {
    /// `F_q(symbol)`.
    pub fn new(q: u64, symbol: &str) -> Option<Self> {
        Some(RatFuncField {
            k: Gf::new(q, 1)?,
            symbol: symbol.into(),
        })
    }

    pub fn base(&self) -> &Gf {
        &self.k
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    /// The generator `θ`.
    pub fn gen(&self) -> RatFunc {
        RatFunc {
            num: vec![0, 1],
            den: vec![1],
        }
    }

    pub fn from_poly(&self, p: Poly) -> RatFunc {
        RatFunc {
            num: poly::trim(p),
            den: vec![1],
        }
    }

    pub fn constant(&self, c: u32) -> RatFunc {
        self.from_poly(vec![c])
    }

    /// `num/den` in lowest terms; `None` if `den = 0`.
    pub fn fraction(&self, num: &[u32], den: &[u32]) -> Option<RatFunc> {
        if poly::deg(den) < 0 {
            return None;
        }
        let num = poly::trim(num.to_vec());
        if num.is_empty() {
            return Some(RatFunc { num, den: vec![1] });
        }
        let g = poly::gcd(&self.k, &num, den);
        let (n, _) = poly::divrem(&self.k, &num, &g);
        let (d, _) = poly::divrem(&self.k, den, &g);
        let (d, lc) = poly::monic(&self.k, &d);
        let n = poly::scale(&self.k, &n, self.k.inv(lc).unwrap());
        Some(RatFunc { num: n, den: d })
    }

    /// Valuation at the place given by a monic irreducible polynomial.
    pub fn valuation(&self, a: &RatFunc, place: &[u32]) -> Option<i64> {
        if a.num.is_empty() {
            return None;
        }
        Some(poly::valuation(&self.k, &a.num, place) - poly::valuation(&self.k, &a.den, place))
    }
}

impl Field for RatFuncField {
    type Elem = RatFunc;

    fn characteristic(&self) -> u32 {
        self.k.p()
    }
    fn q(&self) -> u64 {
        self.k.q()
    }
    fn zero(&self) -> RatFunc {
        RatFunc {
            num: Vec::new(),
            den: vec![1],
        }
    }
    fn one(&self) -> RatFunc {
        self.constant(1)
    }
    fn from_int(&self, n: i64) -> RatFunc {
        self.constant(self.k.from_int(n))
    }
    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        if a.den == b.den {
            return self
                .fraction(&poly::add(&self.k, &a.num, &b.num), &a.den)
                .unwrap();
        }
        let n = poly::add(
            &self.k,
            &poly::mul(&self.k, &a.num, &b.den),
            &poly::mul(&self.k, &b.num, &a.den),
        );
        self.fraction(&n, &poly::mul(&self.k, &a.den, &b.den))
            .unwrap()
    }
    fn neg(&self, a: &RatFunc) -> RatFunc {
        RatFunc {
            num: poly::neg(&self.k, &a.num),
            den: a.den.clone(),
        }
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        self.fraction(
            &poly::mul(&self.k, &a.num, &b.num),
            &poly::mul(&self.k, &a.den, &b.den),
        )
        .unwrap()
    }
    fn inv(&self, a: &RatFunc) -> Option<RatFunc> {
        self.fraction(&a.den, &a.num)
    }
    fn is_zero(&self, a: &RatFunc) -> bool {
        a.num.is_empty()
    }
    fn frobenius(&self, a: &RatFunc) -> RatFunc {
        RatFunc {
            num: poly::frobenius(&self.k, &a.num),
            den: poly::frobenius(&self.k, &a.den),
        }
    }
    /// A reduced fraction is a `q`-th power iff numerator and denominator are.
    fn qth_root(&self, a: &RatFunc) -> Option<RatFunc> {
        let n = poly::qth_root(&self.k, &a.num)?;
        let d = poly::qth_root(&self.k, &a.den)?;
        Some(RatFunc { num: n, den: d })
    }
    fn render(&self, a: &RatFunc) -> String {
        let n = poly::render(&self.k, &a.num, &self.symbol);
        if a.den == [1] {
            return if poly::deg(&a.num) > 0 && a.num.iter().filter(|&&c| c != 0).count() > 1 {
                format!("({})", n)
            } else {
                n
            };
        }
        format!("({})/({})", n, poly::render(&self.k, &a.den, &self.symbol))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qth_root_in_f2_theta() {
        let f = RatFuncField::new(2, "theta").unwrap();
        let th = f.gen();
        let th2 = f.mul(&th, &th);
        assert_eq!(f.qth_root(&th2), Some(th.clone()));
        assert_eq!(f.qth_root(&th), None);
        let x = f.fraction(&[1, 1], &[0, 1, 1, 1]).unwrap();
        assert_eq!(f.qth_root(&f.frobenius(&x)), Some(x));
    }

    #[test]
    fn reduced_with_monic_denominator() {
        let f = RatFuncField::new(3, "theta").unwrap();
        // (2θ + 2)/(2θ² + 2θ) = 1/θ
        let x = f.fraction(&[2, 2], &[0, 2, 2]).unwrap();
        assert_eq!(
            x,
            RatFunc {
                num: vec![1],
                den: vec![0, 1]
            }
        );
        assert_eq!(f.valuation(&x, &[0, 1]), Some(-1));
    }
}
