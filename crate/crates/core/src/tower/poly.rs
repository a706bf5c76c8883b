//! Dense univariate polynomials over a finite field, low degree first.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::gf::Gf;

pub type Poly = Vec<u32>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Degree, with `-1` for the zero polynomial.
pub fn deg(a: &[u32]) -> i64 {
    a.iter().rposition(|&c| c != 0).map_or(-1, |i| i as i64)
}

pub fn add(k: &Gf, a: &[u32], b: &[u32]) -> Poly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| k.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect(),
    )
}

pub fn neg(k: &Gf, a: &[u32]) -> Poly {
    a.iter().map(|&c| k.neg(c)).collect()
}

pub fn sub(k: &Gf, a: &[u32], b: &[u32]) -> Poly {
    add(k, a, &neg(k, b))
}

pub fn scale(k: &Gf, a: &[u32], c: u32) -> Poly {
    trim(a.iter().map(|&x| k.mul(x, c)).collect())
}

pub fn mul(k: &Gf, a: &[u32], b: &[u32]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = k.add(out[i + j], k.mul(x, y));
        }
    }
    trim(out)
}

pub fn pow(k: &Gf, a: &[u32], e: u32) -> Poly {
    let mut out = vec![1];
    for _ in 0..e {
        out = mul(k, &out, a);
    }
    out
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem(k: &Gf, a: &[u32], b: &[u32]) -> (Poly, Poly) {
    let db = deg(b);
    assert!(db >= 0, "polynomial division by zero");
    let mut r = trim(a.to_vec());
    let lead_inv = k.inv(b[db as usize]).unwrap();
    if deg(&r) < db {
        return (Vec::new(), r);
    }
    let mut quo = vec![0; (deg(&r) - db + 1) as usize];
    while deg(&r) >= db {
        let dr = deg(&r) as usize;
        let c = k.mul(r[dr], lead_inv);
        let s = dr - db as usize;
        quo[s] = c;
        for (i, &y) in b.iter().enumerate() {
            r[s + i] = k.sub(r[s + i], k.mul(c, y));
        }
        r = trim(r);
    }
    (trim(quo), r)
}

pub fn monic(k: &Gf, a: &[u32]) -> (Poly, u32) {
    let d = deg(a);
    if d < 0 {
        return (Vec::new(), 0);
    }
    let lc = a[d as usize];
    (scale(k, a, k.inv(lc).unwrap()), lc)
}

pub fn gcd(k: &Gf, a: &[u32], b: &[u32]) -> Poly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = divrem(k, &a, &b);
        a = b;
        b = r;
    }
    monic(k, &a).0
}

pub fn eval(k: &Gf, a: &[u32], x: u32) -> u32 {
    a.iter().rev().fold(0, |acc, &c| k.add(k.mul(acc, x), c))
}

pub fn derivative(k: &Gf, a: &[u32]) -> Poly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| k.mul(k.from_int(i as i64), c))
            .collect(),
    )
}

/// Applies the `q`-Frobenius: `Σ cᵢxⁱ ↦ Σ cᵢ^q x^{qi}`.
pub fn frobenius(k: &Gf, a: &[u32]) -> Poly {
    let q = k.q() as usize;
    if a.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; (a.len() - 1) * q + 1];
    for (i, &c) in a.iter().enumerate() {
        out[i * q] = k.frobenius(c);
    }
    trim(out)
}

/// `b` with `b^q = a`, if `a` is a `q`-th power.
pub fn qth_root(k: &Gf, a: &[u32]) -> Option<Poly> {
    let q = k.q() as usize;
    let mut out = Vec::new();
    for (i, &c) in a.iter().enumerate() {
        if c != 0 && i % q != 0 {
            return None;
        }
        if i % q == 0 {
            out.push(k.frobenius_inv(c));
        }
    }
    Some(trim(out))
}

/// Multiplicity of the monic irreducible `p` in `a` (nonzero).
pub fn valuation(k: &Gf, a: &[u32], p: &[u32]) -> i64 {
    let mut a = trim(a.to_vec());
    let mut v = 0;
    loop {
        let (quo, r) = divrem(k, &a, p);
        if !r.is_empty() {
            return v;
        }
        a = quo;
        v += 1;
    }
}

/// Monic polynomials of degree `d` in a fixed lexicographic order.
pub fn monic_of_degree(k: &Gf, d: u32) -> impl Iterator<Item = Poly> + '_ {
    let size = k.size() as u64;
    let count = size.pow(d);
    (0..count).map(move |code| {
        let mut c = code;
        let mut out = Vec::with_capacity(d as usize + 1);
        for _ in 0..d {
            out.push((c % size) as u32);
            c /= size;
        }
        out.push(1);
        out
    })
}

pub fn is_irreducible(k: &Gf, a: &[u32]) -> bool {
    let d = deg(a);
    if d < 1 {
        return false;
    }
    for e in 1..=(d / 2) as u32 {
        for f in monic_of_degree(k, e) {
            if divrem(k, a, &f).1.is_empty() {
                return false;
            }
        }
    }
    true
}

/// Monic irreducible factors with multiplicity, sorted by degree then
/// lexicographically; the leading coefficient is returned separately.
pub fn factor(k: &Gf, a: &[u32]) -> (u32, Vec<(Poly, u32)>) {
    let (mut a, lc) = monic(k, a);
    let mut out = Vec::new();
    let mut e = 1u32;
    while 2 * e as i64 <= deg(&a) {
        for f in monic_of_degree(k, e) {
            let v = valuation(k, &a, &f);
            if v > 0 {
                for _ in 0..v {
                    a = divrem(k, &a, &f).0;
                }
                out.push((f, v as u32));
            }
        }
        e += 1;
    }
    if deg(&a) > 0 {
        out.push((a, 1));
    }
    out.sort_by_key(|(f, _)| (f.len(), f.iter().rev().copied().collect::<Vec<_>>()));
    (lc, out)
}

pub fn render(k: &Gf, a: &[u32], var: &str) -> String {
    if deg(a) < 0 {
        return "0".into();
    }
    let mut terms = Vec::new();
    for (i, &c) in a.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.into(),
            _ => format!("{}^{}", var, i),
        };
        let coeff = k.render(c);
        terms.push(match (mono.is_empty(), c == 1) {
            (true, _) => coeff,
            (false, true) => mono,
            (false, false) => format!("{}*{}", coeff, mono),
        });
    }
    terms.join(" + ")
}
