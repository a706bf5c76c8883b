use alloc::string::String;
use core::fmt::Debug;

use super::gf::Gf;

/// A field of characteristic `p` carrying the `q`-Frobenius `x ↦ x^q`.
///
/// Implemented by finite fields, rational function fields over `F_q` and the
/// local fields `k((π))`; the latter compare elements only up to precision.
pub trait Field: Clone + Debug + PartialEq {
    type Elem: Clone + Debug;

    fn characteristic(&self) -> u32;
    fn q(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_int(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem;
    /// `y` with `y^q = a`, when it exists in the field.
    fn qth_root(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn render(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn eq_elem(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.is_zero(&self.sub(a, b))
    }
    fn is_one(&self, a: &Self::Elem) -> bool {
        self.eq_elem(a, &self.one())
    }
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|b| self.mul(a, &b))
    }
    fn pow(&self, a: &Self::Elem, k: u64) -> Self::Elem {
        let mut out = self.one();
        let mut base = a.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = self.mul(&out, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        out
    }
    /// `a^n` for any integer `n`; `None` when `a` is not invertible and `n < 0`.
    fn powi(&self, a: &Self::Elem, n: i64) -> Option<Self::Elem> {
        if n >= 0 {
            Some(self.pow(a, n as u64))
        } else {
            self.inv(a).map(|b| self.pow(&b, n.unsigned_abs()))
        }
    }
    fn frobenius_iter(&self, a: &Self::Elem, n: u32) -> Self::Elem {
        let mut x = a.clone();
        for _ in 0..n {
            x = self.frobenius(&x);
        }
        x
    }
}

impl Field for Gf {
    type Elem = u32;

    fn characteristic(&self) -> u32 {
        self.p()
    }
    fn q(&self) -> u64 {
        Gf::q(self)
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn from_int(&self, n: i64) -> u32 {
        Gf::from_int(self, n)
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        Gf::add(self, *a, *b)
    }
    fn neg(&self, a: &u32) -> u32 {
        Gf::neg(self, *a)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        Gf::mul(self, *a, *b)
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        Gf::inv(self, *a)
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn frobenius(&self, a: &u32) -> u32 {
        Gf::frobenius(self, *a)
    }
    fn qth_root(&self, a: &u32) -> Option<u32> {
        Gf::qth_root(self, *a)
    }
    fn render(&self, a: &u32) -> String {
        Gf::render(self, *a)
    }
    fn pow(&self, a: &u32, k: u64) -> u32 {
        Gf::pow(self, *a, k)
    }
}
