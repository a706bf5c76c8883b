//! A class of `Ext¹(𝟙, 𝟙)` over `F_q((π))`, `θ = 1 + π`, with good
//! reduction at `ℓ = (t)` that is neither integral nor regulated.
//!
//! With `k = q²` and `n'ᵢ = θⁱ(π⁻¹ − π^{−q})`, the class is
//! `m = Σ_{i=1..k} mᵢ·j^{−i}` where `mᵢ = (−θ)ⁱ·m'_{i−1}` and
//! `S_k(0)·m' = n'`, `S_k(l)` the Pascal matrix `(C(i+j+l, i+l))`. As a power
//! series in `t` it equals `f − f^{(1)}` with `f = Σ f_l t^l`,
//! `f_l − f_l^q = θ^{−l}·n'_{l mod k}` and `f_l` constant on blocks of length `k`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{has_good_reduction_ell, is_integral, is_regulated, ExtClass};
use crate::decision::Decision;
use crate::error::{Error, Result};
use crate::frobspace::twisted_solve;
use crate::linalg::SMat;
use crate::motive::{EllContext, LocalMotive, Motive};
use crate::tower::{Field, Gf, LocalField, Series, TPoly, TwistStyle};

#[derive(Clone, Debug)]
pub struct Counterexample51 {
    pub q: u64,
    pub k: usize,
    pub field: LocalField,
    pub theta: Series,
    pub n_prime: Vec<Series>,
    /// `m'₀, …, m'_{k−1}`.
    pub m_prime: Vec<Series>,
    /// `m₁, …, m_k` (index 0 holds `m₁`).
    pub m: Vec<Series>,
    /// `f_{ck}` for `c = 0, 1, …`, one per block of `k` coefficients.
    pub f_blocks: Vec<Series>,
    pub motive: LocalMotive,
    pub class: ExtClass<LocalField>,
}

#[derive(Clone, Debug)]
pub struct CounterexampleReport {
    pub det_s0_is_one: bool,
    pub cyclic_shift_mod_p: bool,
    pub periodic_mod_p: bool,
    /// `v(θ^{−k} − 1) ≥ q²`.
    pub roots_exist: bool,
    /// Largest `N` with `m ≡ f − f^{(1)} mod tᴺ`, up to the requested level.
    pub congruence_levels: u32,
    pub min_valuation_m: i64,
    pub good_reduction: Decision<u32>,
    pub integral: Decision<()>,
    pub regulated: Decision<()>,
}

impl CounterexampleReport {
    /// The separating pattern: good reduction at every checked level, neither
    /// integral nor regulated.
    pub fn separates(&self, levels: u32) -> bool {
        self.det_s0_is_one
            && self.cyclic_shift_mod_p
            && self.periodic_mod_p
            && self.roots_exist
            && self.congruence_levels >= levels
            && self.min_valuation_m < 0
            && matches!(self.good_reduction, Decision::Yes(n) if n >= levels)
            && self.integral.is_no()
            && self.regulated.is_no()
    }
}

fn binom_u128(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `C(n, r) mod p` by Lucas.
fn binom_mod(mut n: u64, mut r: u64, p: u64) -> u64 {
    let mut acc = 1;
    while r > 0 || n > 0 {
        let (a, b) = (n % p, r % p);
        if b > a {
            return 0;
        }
        acc = acc * (binom_u128(a, b) % p as u128) as u64 % p;
        n /= p;
        r /= p;
    }
    acc
}

fn pascal_mod(k: usize, l: u64, p: u64) -> Vec<Vec<u64>> {
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| binom_mod((i + j) as u64 + l, i as u64 + l, p))
                .collect()
        })
        .collect()
}

/// Exact determinant of `S_k(0)` by fraction-free elimination.
fn pascal_det(k: usize) -> Option<i128> {
    let mut a: Vec<Vec<i128>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| binom_u128((i + j) as u64, i as u64) as i128)
                .collect()
        })
        .collect();
    let mut prev: i128 = 1;
    let mut sign = 1;
    for c in 0..k {
        let piv = (c..k).find(|&r| a[r][c] != 0)?;
        if piv != c {
            a.swap(piv, c);
            sign = -sign;
        }
        for r in c + 1..k {
            for cc in c + 1..k {
                let v = a[r][cc]
                    .checked_mul(a[c][c])?
                    .checked_sub(a[r][c].checked_mul(a[c][cc])?)?;
                a[r][cc] = v / prev;
            }
            a[r][c] = 0;
        }
        prev = a[c][c];
    }
    Some(sign * prev)
}

/// Inverse of an integer matrix modulo the prime `p`.
fn inverse_mod(a: &[Vec<u64>], p: u64) -> Option<Vec<Vec<u64>>> {
    let n = a.len();
    let mut m: Vec<Vec<u64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    let inv = |x: u64| (1..p).find(|y| x * y % p == 1);
    for c in 0..n {
        let piv = (c..n).find(|&r| m[r][c] != 0)?;
        m.swap(piv, c);
        let s = inv(m[c][c])?;
        for x in m[c].iter_mut() {
            *x = *x * s % p;
        }
        for r in 0..n {
            if r != c && m[r][c] != 0 {
                let f = m[r][c];
                for cc in 0..2 * n {
                    m[r][cc] = (m[r][cc] + (p - f) * m[c][cc]) % p;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Coefficients of `t⁰, …, t^{n−1}` of `Σ mᵢ·j^{−i}` in `E[[t]]`, from
/// `j⁻¹ = −θ⁻¹·Σ (t/θ)^l`.
fn expand_in_t(e: &LocalField, theta: &Series, m: &[Series], n: usize) -> Result<Vec<Series>> {
    let ti = e.inv(theta).ok_or(Error::SingularMatrix)?;
    let mut jinv = Vec::with_capacity(n);
    let mut c = e.neg(&ti);
    for _ in 0..n {
        jinv.push(c.clone());
        c = e.mul(&c, &ti);
    }
    let mul = |a: &[Series], b: &[Series]| -> Vec<Series> {
        (0..n)
            .map(|l| (0..=l).fold(e.zero(), |acc, i| e.add(&acc, &e.mul(&a[i], &b[l - i]))))
            .collect()
    };
    let mut pow = jinv.clone();
    let mut out = vec![e.zero(); n];
    for mi in m {
        for l in 0..n {
            out[l] = e.add(&out[l], &e.mul(mi, &pow[l]));
        }
        pow = mul(&pow, &jinv);
    }
    Ok(out)
}

fn strip<W>(d: Decision<W>) -> Decision<()> {
    d.map(|_| ())
}

/// Builds the class for `F_q`, checks every ingredient, and runs the three
/// decision procedures with `ℓ = (t)` up to `levels`.
pub fn build_counterexample_51(
    q: u64,
    precision: i64,
    levels: u32,
) -> Result<(Counterexample51, CounterexampleReport)> {
    let gf =
        Gf::new(q, 1).ok_or_else(|| Error::InvalidInput(format!("{} is not a prime power", q)))?;
    let p = gf.p() as u64;
    let k = (q * q) as usize;
    let need = (k as i64) * levels as i64 + 2 * q as i64;
    if precision < need {
        return Err(Error::PrecisionExhausted(format!(
            "need precision >= {}, have {}",
            need, precision
        )));
    }
    let e = LocalField::new(gf.clone(), precision);
    let theta = e.from_terms(&[(0, 1), (1, 1)]);
    let base = e.sub(&e.pi().powi(-1)?, &e.pi().powi(-(q as i64))?);
    let n_prime: Vec<Series> = (0..k)
        .map(|i| e.mul(&e.powi(&theta, i as i64).expect("theta is a unit"), &base))
        .collect();

    let det_s0_is_one = pascal_det(k) == Some(1);
    let cyclic_shift_mod_p = (0..2 * k as u64).all(|l| {
        let (s, s1) = (pascal_mod(k, l, p), pascal_mod(k, l + 1, p));
        (0..k).all(|i| s1[i] == s[(i + 1) % k])
    });
    let periodic_mod_p =
        (0..k as u64).all(|l| pascal_mod(k, l, p) == pascal_mod(k, l + k as u64, p));
    let theta_k = e.powi(&theta, -(k as i64)).expect("theta is a unit");
    let roots_exist = e.sub(&theta_k, &e.one()).val_bound() >= k as i64;

    let sinv = inverse_mod(&pascal_mod(k, 0, p), p).ok_or(Error::SingularMatrix)?;
    let m_prime: Vec<Series> = (0..k)
        .map(|i| {
            (0..k).fold(e.zero(), |acc, j| {
                e.add(&acc, &e.mul(&e.from_int(sinv[i][j] as i64), &n_prime[j]))
            })
        })
        .collect();
    let neg_theta = e.neg(&theta);
    let m: Vec<Series> = (1..=k)
        .map(|i| {
            e.mul(
                &e.powi(&neg_theta, i as i64).expect("theta is a unit"),
                &m_prime[i - 1],
            )
        })
        .collect();
    let min_valuation_m = m
        .iter()
        .filter_map(|x| x.valuation())
        .min()
        .unwrap_or(i64::MAX);

    let blocks = (levels as usize).div_ceil(k).max(1);
    let one = SMat::identity(&gf, 1, precision);
    let mut f_blocks = Vec::with_capacity(blocks);
    for c in 0..blocks {
        let rhs = e.mul(
            &e.powi(&theta, -((c * k) as i64)).expect("theta is a unit"),
            &n_prime[0],
        );
        match twisted_solve(&one, &[rhs], TwistStyle::FullFrobenius) {
            Decision::Yes(v) => f_blocks.push(v[0].clone()),
            Decision::No(cert) => {
                return Err(Error::InvalidInput(format!(
                    "no Artin-Schreier root: {}",
                    cert.detail
                )))
            }
            Decision::Unknown(s) => return Err(Error::PrecisionExhausted(s)),
        }
    }

    let coeffs = expand_in_t(&e, &theta, &m, levels as usize)?;
    let mut congruence_levels = 0;
    for (l, c) in coeffs.iter().enumerate() {
        let f = &f_blocks[l / k];
        if !e.eq_elem(c, &e.sub(f, &e.frobenius(f))) {
            break;
        }
        congruence_levels = l as u32 + 1;
    }

    let motive = Motive::unit(e.clone(), theta.clone(), 1);
    let j = TPoly::j(&e, &theta);
    let num = (1..=k).fold(TPoly::zero(), |acc, i| {
        acc.add(&e, &j.pow(&e, (k - i) as u32).scale(&e, &m[i - 1]))
    });
    let class = ExtClass::iota(&motive, k as u32, vec![num])?;
    let ctx = EllContext::new(&motive, vec![0, 1])?;
    let good_reduction = has_good_reduction_ell(&class, &ctx, levels).decision;
    let integral = strip(is_integral(&class, &ctx));
    let regulated = strip(is_regulated(&class));

    let data = Counterexample51 {
        q,
        k,
        field: e,
        theta,
        n_prime,
        m_prime,
        m,
        f_blocks,
        motive,
        class,
    };
    let report = CounterexampleReport {
        det_s0_is_one,
        cyclic_shift_mod_p,
        periodic_mod_p,
        roots_exist,
        congruence_levels,
        min_valuation_m,
        good_reduction,
        integral,
        regulated,
    };
    Ok((data, report))
}

impl CounterexampleReport {
    pub fn render(&self) -> String {
        format!(
            "det S(0) = 1: {}\ncyclic shift mod p: {}\nperiodic mod p: {}\nroots exist: {}\ncongruence levels: {}\nmin v(m_i): {}\ngood reduction: {}\nintegral: {}\nregulated: {}",
            self.det_s0_is_one,
            self.cyclic_shift_mod_p,
            self.periodic_mod_p,
            self.roots_exist,
            self.congruence_levels,
            self.min_valuation_m,
            self.good_reduction.verdict(),
            self.integral.verdict(),
            self.regulated.verdict(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pascal_claims() {
        assert_eq!(pascal_det(4), Some(1));
        assert_eq!(pascal_det(9), Some(1));
        assert_eq!(binom_mod(6, 2, 2), 15 % 2);
        assert_eq!(binom_mod(10, 3, 3), 120 % 3);
    }

    #[test]
    fn pascal_small_entries() {
        // C(i+j, i) for k = 3.
        let s = pascal_mod(3, 0, 5);
        assert_eq!(s, vec![vec![1, 1, 1], vec![1, 2, 3], vec![1, 3, 1]]);
    }
}
