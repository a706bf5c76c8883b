//! Finite fields `F_{q^d}` with the `q`-Frobenius attached.
//!
//! Elements are packed base-`p` digit strings: the value `Σ dᵢ pⁱ` stands for
//! the polynomial `Σ dᵢ xⁱ` modulo the field's defining polynomial.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Largest field size we build tables for.
pub const MAX_FIELD_SIZE: u32 = 1 << 16;

struct Inner {
    p: u32,
    /// Degree over the prime field.
    f: u32,
    /// `q = p^e` is the Frobenius exponent.
    e: u32,
    size: u32,
    /// Low coefficients of the monic defining polynomial (length `f`).
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// The field `F_{q^d}` with distinguished Frobenius `x ↦ x^q`.
///
/// The defining polynomial is the lexicographically first primitive monic
/// polynomial of degree `[F : F_p]`, so element encodings are reproducible.
#[derive(Clone)]
pub struct Gf(Arc<Inner>);

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.f == other.0.f && self.0.e == other.0.e)
    }
}
impl Eq for Gf {}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}, q={})", self.0.p, self.0.f, self.q())
    }
}

/// Splits a prime power into `(p, e)`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut e = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p as u32, e))
}

impl Gf {
    /// `F_{q^d}` with Frobenius `x ↦ x^q`. Returns `None` if `q` is not a
    /// prime power or the field is too large to tabulate.
    pub fn new(q: u64, d: u32) -> Option<Gf> {
        let (p, e) = prime_power(q)?;
        let f = e.checked_mul(d)?;
        if d == 0 {
            return None;
        }
        let size = (p as u64).checked_pow(f)?;
        if size > MAX_FIELD_SIZE as u64 {
            return None;
        }
        let size = size as u32;
        let (modulus, exp) = first_primitive(p, f, size);
        let mut log = vec![0u32; size as usize];
        for (i, &x) in exp.iter().enumerate().take(size as usize - 1) {
            log[x as usize] = i as u32;
        }
        Some(Gf(Arc::new(Inner {
            p,
            f,
            e,
            size,
            modulus,
            exp,
            log,
        })))
    }

    /// The prime field `F_p` viewed with Frobenius exponent `p`.
    pub fn prime(p: u64) -> Option<Gf> {
        Gf::new(p, 1)
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    /// Degree over `F_p`.
    pub fn degree(&self) -> u32 {
        self.0.f
    }
    /// Degree over `F_q`.
    pub fn relative_degree(&self) -> u32 {
        self.0.f / self.0.e
    }
    pub fn q(&self) -> u64 {
        (self.0.p as u64).pow(self.0.e)
    }
    pub fn size(&self) -> u32 {
        self.0.size
    }
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// The subfield `F_q` (same Frobenius exponent, relative degree 1).
    pub fn base(&self) -> Gf {
        if self.relative_degree() == 1 {
            self.clone()
        } else {
            Gf::new(self.q(), 1).expect("subfield of a tabulated field")
        }
    }

    /// The generator `x` of the multiplicative group.
    pub fn generator(&self) -> u32 {
        self.0.exp[1 % (self.0.size as usize - 1).max(1)]
    }

    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.0.p as i64) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut w = 1;
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * w;
            a /= p;
            b /= p;
            w *= p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0;
        let mut w = 1;
        while a > 0 {
            out += ((p - a % p) % p) * w;
            a /= p;
            w *= p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.0.size - 1;
        let i = (self.0.log[a as usize] + self.0.log[b as usize]) % n;
        self.0.exp[i as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.0.size - 1;
        let i = (n - self.0.log[a as usize]) % n;
        Some(self.0.exp[i as usize])
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.0.size - 1) as u64;
        let i = (self.0.log[a as usize] as u64 * (k % n)) % n;
        self.0.exp[i as usize]
    }

    /// `x ↦ x^q`.
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.q())
    }

    /// Inverse of the Frobenius; always defined since finite fields are perfect.
    pub fn frobenius_inv(&self, a: u32) -> u32 {
        let d = self.relative_degree() as u64;
        let mut x = a;
        for _ in 1..d {
            x = self.frobenius(x);
        }
        x
    }

    /// `y` with `y^q = a`.
    pub fn qth_root(&self, a: u32) -> Option<u32> {
        Some(self.frobenius_inv(a))
    }

    /// Digits over `F_p`, least significant first, padded to the degree.
    pub fn digits(&self, a: u32) -> Vec<u32> {
        let p = self.0.p;
        let mut a = a;
        (0..self.0.f)
            .map(|_| {
                let d = a % p;
                a /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, d: &[u32]) -> u32 {
        let p = self.0.p;
        d.iter().rev().fold(0, |acc, &x| acc * p + x % p)
    }

    /// The `F_p`-basis element with a single digit `1` in position `i`.
    pub fn basis_elem(&self, i: u32) -> u32 {
        self.0.p.pow(i)
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.0.size
    }

    /// A root of `poly` (coefficients over `self`, low degree first), if any.
    pub fn find_root(&self, poly: &[u32]) -> Option<u32> {
        self.elements().find(|&x| {
            poly.iter()
                .rev()
                .fold(0, |acc, &c| self.add(self.mul(acc, x), c))
                == 0
        })
    }

    /// Table of a field embedding `sub → self`, indexed by the encoding of
    /// `sub`. Deterministic: uses the first root of `sub`'s defining
    /// polynomial.
    pub fn embedding_from(&self, sub: &Gf) -> Option<Vec<u32>> {
        if sub.p() != self.p() || !self.degree().is_multiple_of(sub.degree()) {
            return None;
        }
        let mut poly = sub.modulus().to_vec();
        poly.push(1);
        let beta = if sub.degree() == 1 {
            0
        } else {
            self.find_root(&poly)?
        };
        let powers: Vec<u32> = (0..sub.degree())
            .map(|i| self.pow(beta, i as u64))
            .collect();
        Some(
            sub.elements()
                .map(|a| {
                    sub.digits(a)
                        .iter()
                        .zip(&powers)
                        .fold(0, |acc, (&d, &b)| self.add(acc, self.mul(d, b)))
                })
                .collect(),
        )
    }

    pub fn render(&self, a: u32) -> alloc::string::String {
        use alloc::format;
        use alloc::string::ToString;
        if self.0.f == 1 {
            return a.to_string();
        }
        if a == 0 {
            return "0".into();
        }
        let d = self.digits(a);
        let mut terms = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => "1".to_string(),
                1 => "w".to_string(),
                _ => format!("w^{}", i),
            };
            terms.push(match (c, i) {
                (1, _) => mono,
                (_, 0) => c.to_string(),
                _ => format!("{}*{}", c, mono),
            });
        }
        if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            format!("({})", terms.join("+"))
        }
    }
}

/// Multiplies the packed polynomial `a` by `x` modulo the monic polynomial
/// whose low coefficients are `m`.
fn mul_x(a: u32, p: u32, f: u32, m: &[u32]) -> u32 {
    let mut d: Vec<u32> = Vec::with_capacity(f as usize + 1);
    let mut t = a;
    for _ in 0..f {
        d.push(t % p);
        t /= p;
    }
    d.insert(0, 0);
    let top = d.pop().unwrap();
    if top != 0 {
        for i in 0..f as usize {
            d[i] = (d[i] + (p - top) * m[i]) % p;
        }
    }
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn first_primitive(p: u32, f: u32, size: u32) -> (Vec<u32>, Vec<u32>) {
    let order = size - 1;
    for code in 0..size {
        let mut m = Vec::with_capacity(f as usize);
        let mut c = code;
        for _ in 0..f {
            m.push(c % p);
            c /= p;
        }
        if m[0] == 0 {
            continue;
        }
        // x has order `size - 1` iff the polynomial is primitive.
        let mut exp = Vec::with_capacity(2 * order as usize);
        let mut x = 1u32;
        let mut ok = true;
        for i in 0..order {
            if i > 0 && x == 1 {
                ok = false;
                break;
            }
            exp.push(x);
            x = mul_x(x, p, f, &m);
        }
        if ok && x == 1 {
            let tail = exp.clone();
            exp.extend(tail);
            return (m, exp);
        }
    }
    unreachable!("every finite field has a primitive polynomial")
}
