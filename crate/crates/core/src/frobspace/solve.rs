//! Twisted equations `ξ − F·σ(ξ) = m` and Artin–Schreier membership.
//!
//! `ξ ↦ ξ − F·σ(ξ)` is `F_p`-linear, so on a window of digits it is a finite
//! linear system. A lower bound on `v(ξ)` comes from `F⁻¹`; above
//! `⌊−v(F)/(q−1)⌋` every equation is a contraction and is solvable digit by
//! digit, so consistency of the truncated system decides the full one. This
//! covers the Artin–Schreier stages `X − cX^q = b` over the residue field
//! without enumerating it.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::digits::{matrix_of, Window};
use super::FrobeniusSpace;
use crate::decision::{Certificate, Decision, Obstruction};
use crate::linalg::SMat;
use crate::tower::{Gf, LaurentSeries, Series, TwistStyle};

fn div_floor(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -(-a).div_euclid(b)
}

fn min_val(v: &[Series]) -> Option<i64> {
    v.iter().filter_map(|x| x.valuation()).min()
}

fn min_prec(v: &[Series]) -> i64 {
    v.iter().map(|x| x.prec()).min().unwrap_or(i64::MAX / 4)
}

fn twist_apply(f: &SMat<Gf>, x: &[Series], style: TwistStyle) -> Vec<Series> {
    let sx: Vec<Series> = x.iter().map(|v| v.frobenius(style)).collect();
    f.mul_vec(&sx)
}

/// `ξ − F·σ(ξ) − m`.
pub fn twisted_residual(
    f: &SMat<Gf>,
    xi: &[Series],
    m: &[Series],
    style: TwistStyle,
) -> Vec<Series> {
    let t = twist_apply(f, xi, style);
    xi.iter()
        .zip(&t)
        .zip(m)
        .map(|((a, b), c)| a.sub(b).sub(c))
        .collect()
}

/// Solves `ξ − F·σ(ξ) ≡ m` on equations `[eq_lo, eq_hi)` with unknown digits
/// in `[lo, hi)`. Low digits are left free (set to zero).
fn solve_window(
    k: &Gf,
    f: &SMat<Gf>,
    m: &[Series],
    lo: i64,
    hi: i64,
    eq_lo: i64,
    eq_hi: i64,
) -> Option<Vec<Series>> {
    let n = f.rows();
    let unknowns = Window::new(k, n, lo, hi).descending();
    let eqs = Window::new(k, n, eq_lo, eq_hi);
    let prec = hi.max(eq_hi) + 1;
    let a = matrix_of(k, &unknowns, &eqs, prec, |x| {
        let t = twist_apply(f, x, TwistStyle::FullFrobenius);
        x.iter().zip(&t).map(|(u, v)| u.sub(v)).collect()
    });
    let rhs = eqs.encode(k, m);
    let sol = a.solve(&rhs)?;
    Some(unknowns.decode(k, &sol, prec))
}

fn unknown_prec(need: i64, have: i64, what: &str) -> String {
    format!(
        "{} needs precision O(pi^{}), have O(pi^{})",
        what, need, have
    )
}

/// Decides `ξ − F·σ(ξ) = m` over `E = k((π))`.
///
/// With `FullFrobenius` the answer is exact whenever `F` is invertible to
/// precision; the witness is returned to the precision the inputs support.
/// With `CoefficientOnly` only the contracting case `v(F) > 0` is handled.
pub fn twisted_solve(f: &SMat<Gf>, m: &[Series], style: TwistStyle) -> Decision<Vec<Series>> {
    let k = f.field().clone();
    let n = f.rows();
    let pm = min_prec(m);
    let Some(vf) = f.min_valuation() else {
        return Decision::Yes(m.to_vec());
    };
    if style == TwistStyle::CoefficientOnly {
        if vf <= 0 {
            return Decision::Unknown(String::from(
                "coefficient-only twist with non-contracting matrix",
            ));
        }
        let mut xi = m.to_vec();
        let steps = (pm - min_val(m).unwrap_or(pm)).max(0) / vf + 2;
        for _ in 0..steps {
            let t = twist_apply(f, &xi, style);
            xi = m.iter().zip(&t).map(|(a, b)| a.add(b)).collect();
        }
        return Decision::Yes(xi);
    }
    let q = k.q() as i64;
    let finv = match f.inverse() {
        Ok(x) => x,
        Err(e) => return Decision::Unknown(format!("matrix not invertible to precision: {}", e)),
    };
    let Some(vfi) = finv.min_valuation() else {
        return Decision::Unknown(String::from("inverse matrix is zero to precision"));
    };
    let Some(vm) = min_val(m) else {
        let z = (0..n).map(|_| LaurentSeries::zero(k.clone(), pm)).collect();
        return Decision::Yes(z);
    };
    let w = vm.min(div_ceil(vfi, q - 1));
    let i0 = div_floor(-vf, q - 1) + 1;
    let top = pm.min(q * w + f.min_prec());
    let need = i0.max(w).max(div_ceil(i0 - vf, q));
    if top < need {
        return Decision::Unknown(unknown_prec(need, top, "twisted solve"));
    }
    let eq_lo = w.min(q * w + vf);
    match solve_window(&k, f, m, w, top, eq_lo, top) {
        Some(xi) => Decision::Yes(xi.iter().map(|x| x.with_prec(top)).collect()),
        None => {
            if n == 1 && vf == 0 && w >= 0 {
                let c = f.get(0, 0).coeff(0);
                let b = m[0].coeff(0);
                Decision::No(Certificate::new(
                    Obstruction::ResidueEquation,
                    format!(
                        "X - ({})*X^{} = {} has no root in F_{}",
                        k.render(c),
                        q,
                        k.render(b),
                        k.size()
                    ),
                ))
            } else {
                Decision::No(Certificate::new(
                    Obstruction::Valuation,
                    format!(
                        "no solution with valuation >= {}: coefficients below pi^{} are inconsistent",
                        w, i0
                    ),
                ))
            }
        }
    }
}

/// Decides `ξ − F·σ(ξ) ≡ m (mod π^c O^n)` for some `ξ ∈ E^n`.
///
/// The witness is determined modulo digits that cannot affect the equation.
pub fn twisted_solve_mod(f: &SMat<Gf>, m: &[Series], c: i64) -> Decision<Vec<Series>> {
    let k = f.field().clone();
    let n = f.rows();
    let q = k.q() as i64;
    let zero = || {
        (0..n)
            .map(|_| LaurentSeries::zero(k.clone(), c))
            .collect::<Vec<_>>()
    };
    let vm = min_val(m).unwrap_or(c).min(c);
    if vm >= c {
        return Decision::Yes(zero());
    }
    let Some(vf) = f.min_valuation() else {
        // ξ = m works.
        return Decision::Yes(m.to_vec());
    };
    let vfi = match f.inverse() {
        Ok(finv) => finv.min_valuation(),
        Err(_) => None,
    };
    let Some(vfi) = vfi else {
        return Decision::Unknown(String::from("matrix not invertible to precision"));
    };
    let w = vm.min(div_ceil(vfi, q - 1));
    let top = c.max(div_ceil(c - vf, q));
    if min_prec(m) < c {
        return Decision::Unknown(unknown_prec(c, min_prec(m), "right-hand side"));
    }
    if f.min_prec() < c - q * w {
        return Decision::Unknown(unknown_prec(c - q * w, f.min_prec(), "twisted solve"));
    }
    let eq_lo = w.min(q * w + vf);
    match solve_window(&k, f, m, w, top, eq_lo, c) {
        Some(xi) => Decision::Yes(xi),
        None => Decision::No(Certificate::new(
            Obstruction::Valuation,
            format!(
                "no element with valuation >= {} solves the equation modulo pi^{}",
                w, c
            ),
        )),
    }
}

/// `x = g + (y − φ(y))` with `g ∈ V_good` modulo `π^level V_O`.
#[derive(Clone, Debug)]
pub struct UnramifiedWitness {
    pub y: Vec<Series>,
    pub g: Vec<Series>,
    pub level: i64,
}

impl FrobeniusSpace {
    /// Decides `x ∈ V_O + (1 − φ)(V)`.
    pub fn unramified_membership(&self, x: &[Series]) -> Decision<UnramifiedWitness> {
        let k = self.residue_field().clone();
        let (vo, g) = match self.integral_matrix() {
            Ok(t) => t,
            Err(e) => return Decision::Unknown(format!("maximal model: {}", e)),
        };
        let prec = min_prec(x).max(1) + vo.floor().abs() + vo.lowest_exponent().abs() + 4;
        let p = vo.basis(prec + self.matrix().min_prec());
        let pinv = match p.inverse() {
            Ok(m) => m,
            Err(e) => return Decision::Unknown(format!("{}", e)),
        };
        let xr = pinv.mul_vec(x);
        let y = match twisted_solve_mod(&g, &xr, 0) {
            Decision::Yes(y) => y,
            Decision::No(c) => return Decision::No(c),
            Decision::Unknown(s) => return Decision::Unknown(s),
        };
        let level = super::DEFAULT_LEVEL.min(g.min_prec()).min(min_prec(&xr));
        let res = twisted_residual(&g, &y, &xr, TwistStyle::FullFrobenius);
        // res = y − φ(y) − x', so g' = −res is integral.
        let gr: Vec<Series> = res.iter().map(|v| v.neg()).collect();
        let (vr, gr) = if level > 0 {
            let parts = self.fitting_with(vo.clone(), &g, level);
            let win = &parts.window;
            let (a, mut b) = parts.split(&win.encode(&k, &gr));
            let mut beta = alloc::vec![0u32; b.len()];
            let pp = k.p();
            while b.iter().any(|&d| d != 0) {
                for (s, d) in beta.iter_mut().zip(&b) {
                    *s = (*s + d) % pp;
                }
                b = parts.phi.mul_vec(&b);
            }
            let beta = win.decode(&k, &beta, level);
            let v: Vec<Series> = y.iter().zip(&beta).map(|(u, w)| u.add(w)).collect();
            (v, win.decode(&k, &a, level))
        } else {
            (y, gr)
        };
        Decision::Yes(UnramifiedWitness {
            y: p.mul_vec(&vr),
            g: p.mul_vec(&gr),
            level,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::LocalField;

    fn scalar(k: &Gf, t: &[(i64, u32)], prec: i64) -> SMat<Gf> {
        SMat::from_fn(k, 1, 1, |_, _| {
            LaurentSeries::from_terms(k.clone(), t, prec)
        })
    }

    #[test]
    fn contraction_example() {
        // ξ − πξ² = 1 over F₂.
        let k = Gf::new(2, 1).unwrap();
        let f = scalar(&k, &[(1, 1)], 40);
        let m = alloc::vec![LaurentSeries::one(k.clone(), 40)];
        let xi = twisted_solve(&f, &m, TwistStyle::FullFrobenius)
            .witness()
            .cloned()
            .unwrap();
        for (e, c) in [(0, 1), (1, 1), (2, 0), (3, 1), (4, 0), (7, 1)] {
            assert_eq!(xi[0].coeff(e), c, "coefficient {}", e);
        }
        let r = twisted_residual(&f, &xi, &m, TwistStyle::FullFrobenius);
        assert!(r[0].is_zero());
    }

    #[test]
    fn artin_schreier_residue() {
        let k2 = Gf::new(2, 1).unwrap();
        let m = |k: &Gf| alloc::vec![LaurentSeries::one(k.clone(), 30)];
        let f = scalar(&k2, &[(0, 1)], 30);
        let d = twisted_solve(&f, &m(&k2), TwistStyle::FullFrobenius);
        assert!(d.is_no());
        let k4 = Gf::new(2, 2).unwrap();
        let f = scalar(&k4, &[(0, 1)], 30);
        let d = twisted_solve(&f, &m(&k4), TwistStyle::FullFrobenius);
        let xi = d.witness().unwrap();
        let w = xi[0].coeff(0);
        assert_eq!(k4.add(k4.mul(w, w), w), 1);
    }

    #[test]
    fn membership_examples() {
        let field = LocalField::over(2, 1).unwrap();
        let k = field.residue_field().clone();
        let v = FrobeniusSpace::rank_one(field, LaurentSeries::one(k.clone(), 40)).unwrap();
        let x = |t: &[(i64, u32)]| alloc::vec![LaurentSeries::from_terms(k.clone(), t, 40)];
        assert!(v.unramified_membership(&x(&[(-1, 1)])).is_no());
        assert!(v.unramified_membership(&x(&[(0, 1)])).is_yes());
        assert!(v.unramified_membership(&x(&[(-2, 1)])).is_no());
        assert!(v.unramified_membership(&x(&[(-2, 1), (-1, 1)])).is_yes());
        assert!(v.unramified_membership(&x(&[(-3, 1), (3, 1)])).is_no());
    }
}
