//! Rank one: `τ e = c·j^k e`. After clearing denominators by `j^S` the class
//! `j^{−P}·num` is split (resp. integral) when
//! `j^a·ξ − c·j^b·σ(ξ) = num·j^{S−P}` has a solution `ξ ∈ E[t]`
//! (resp. a solution modulo `O_E[t]`), with `a = S`, `b = S + k`.
//!
//! For `a ≠ b` the leading coefficient in `t` of the left side comes from one
//! of the two terms only, so the coefficients of `ξ` are forced from the top
//! down.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::decision::{Certificate, Decision, Obstruction};
use crate::frobspace::{twisted_solve, twisted_solve_mod};
use crate::linalg::SMat;
use crate::tower::{Field, LaurentSeries, LocalField, Series, TPoly, TwistStyle};

struct Setup {
    a: usize,
    b: usize,
    rhs: TPoly<LocalField>,
    ja: TPoly<LocalField>,
    cjb: TPoly<LocalField>,
}

fn setup(
    e: &LocalField,
    theta: &Series,
    c: &Series,
    k: i64,
    pole: u32,
    num: &TPoly<LocalField>,
) -> Setup {
    let ei = (-k).max(0);
    let s = (pole as i64).max(ei);
    let (a, b) = (s as usize, (s + k) as usize);
    let j = TPoly::j(e, theta);
    let rhs = num.mul(e, &j.pow(e, (s - pole as i64) as u32));
    let ja = j.pow(e, a as u32);
    let cjb = j.pow(e, b as u32).scale(e, c);
    Setup { a, b, rhs, ja, cjb }
}

impl Setup {
    /// Subtracts `(j^a − c·j^b·σ)(x·tⁱ)` from `res` coefficientwise, so that
    /// entries which are zero to precision keep their precision.
    fn reduce(&self, e: &LocalField, res: &mut [Series], x: &Series, i: usize) {
        let sx = e.frobenius(x);
        for (d, c) in self.ja.coeffs().iter().enumerate() {
            res[i + d] = res[i + d].sub(&c.mul(x));
        }
        for (d, c) in self.cjb.coeffs().iter().enumerate() {
            res[i + d] = res[i + d].add(&c.mul(&sx));
        }
    }

    fn one_by_one(c: &Series) -> SMat<crate::tower::Gf> {
        SMat::from_fn(c.field(), 1, 1, |_, _| c.clone())
    }
}

fn polar_part(e: &LocalField, x: &Series) -> Series {
    let terms: Vec<(i64, u32)> = x
        .terms()
        .filter(|(i, _)| *i < 0)
        .map(|(i, c)| (i, *c))
        .collect();
    LaurentSeries::from_terms(e.residue_field().clone(), &terms, e.precision())
}

pub(super) fn is_integral_poly(p: &TPoly<LocalField>) -> bool {
    p.coeffs().iter().all(|c| c.is_zero() || c.val_bound() >= 0)
}

fn degree_no(what: &str) -> Decision<TPoly<LocalField>> {
    Decision::No(Certificate::new(Obstruction::Degree, String::from(what)))
}

/// Exact: `j^{−P}·num ∈ (id − τ)(M)`.
pub(super) fn split(
    e: &LocalField,
    theta: &Series,
    c: &Series,
    k: i64,
    pole: u32,
    num: &TPoly<LocalField>,
) -> Decision<TPoly<LocalField>> {
    let st = setup(e, theta, c, k, pole, num);
    let Some(deg) = st.rhs.degree() else {
        return Decision::Yes(TPoly::zero());
    };
    if st.a == st.b {
        let (quo, rem) = st.rhs.divrem(e, &st.ja).expect("monic");
        if !rem.is_zero() && !rem.coeffs().iter().all(|x| x.is_zero()) {
            return degree_no("not divisible by the power of j in tau");
        }
        let f = Setup::one_by_one(c);
        let mut xi = Vec::new();
        for s in 0..=quo.degree().unwrap_or(0) {
            match twisted_solve(&f, &[quo.coeff(e, s)], TwistStyle::FullFrobenius) {
                Decision::Yes(v) => xi.push(v[0].clone()),
                Decision::No(cert) => {
                    return Decision::No(Certificate::new(
                        cert.kind,
                        format!("t^{}: {}", s, cert.detail),
                    ))
                }
                Decision::Unknown(u) => return Decision::Unknown(u),
            }
        }
        return Decision::Yes(TPoly::new(e, xi));
    }
    let top = st.a.max(st.b);
    if deg < top {
        return degree_no("degree in t is below the degree of tau");
    }
    let mut res: Vec<Series> = (0..=deg).map(|i| st.rhs.coeff(e, i)).collect();
    let mut xi = vec![e.zero_series(); deg - top + 1];
    for i in (0..=deg - top).rev() {
        let r = res[i + top].clone();
        let x = if st.a > st.b {
            r
        } else {
            let Ok(y) = r.neg().div(c) else {
                return Decision::Unknown(String::from(
                    "tau coefficient not invertible to precision",
                ));
            };
            match y.qth_root() {
                Some(z) => z,
                None => {
                    return Decision::No(Certificate::new(
                        Obstruction::QthRoot,
                        format!("coefficient of t^{} is not a q-th power", i),
                    ))
                }
            }
        };
        st.reduce(e, &mut res, &x, i);
        xi[i] = x;
    }
    if res.iter().all(|x| x.is_zero()) {
        if xi.iter().any(|x| x.prec() <= 0) {
            return Decision::Unknown(String::from("precision exhausted in the residual"));
        }
        Decision::Yes(TPoly::new(e, xi))
    } else {
        Decision::No(Certificate::new(
            Obstruction::Linear,
            "residual in low degree does not vanish",
        ))
    }
}

/// Modulo `O_E[t]`: `j^{−P}·num ∈ O_E[t][j⁻¹] + (id − τ)(M)`, for `θ` integral.
pub(super) fn integral(
    e: &LocalField,
    theta: &Series,
    c: &Series,
    k: i64,
    pole: u32,
    num: &TPoly<LocalField>,
) -> Decision<TPoly<LocalField>> {
    let st = setup(e, theta, c, k, pole, num);
    let Some(vc) = c.valuation() else {
        return Decision::Unknown(String::from("tau coefficient is zero to precision"));
    };
    let Some(deg) = st.rhs.degree() else {
        return Decision::Yes(TPoly::zero());
    };
    if st.a == st.b {
        let (quo, rem) = st.rhs.divrem(e, &st.ja).expect("monic");
        if !is_integral_poly(&rem) {
            return Decision::No(Certificate::new(
                Obstruction::Valuation,
                "remainder modulo the power of j in tau is not integral",
            ));
        }
        let f = Setup::one_by_one(c);
        let mut xi = Vec::new();
        for s in 0..=quo.degree().unwrap_or(0) {
            match twisted_solve_mod(&f, &[quo.coeff(e, s)], 0) {
                Decision::Yes(v) => xi.push(v[0].clone()),
                Decision::No(cert) => {
                    return Decision::No(Certificate::new(
                        cert.kind,
                        format!("t^{}: {}", s, cert.detail),
                    ))
                }
                Decision::Unknown(u) => return Decision::Unknown(u),
            }
        }
        return Decision::Yes(TPoly::new(e, xi));
    }
    if st.a > st.b && vc < 0 {
        return Decision::Unknown(String::from("tau coefficient is not integral"));
    }
    if st.a < st.b && vc != 0 {
        return Decision::Unknown(String::from("tau coefficient is not a unit"));
    }
    let top = st.a.max(st.b);
    let mut res: Vec<Series> = (0..=deg).map(|i| st.rhs.coeff(e, i)).collect();
    let mut xi = vec![e.zero_series(); (deg + 1).saturating_sub(top)];
    for i in (0..xi.len()).rev() {
        let r = res[i + top].clone();
        if r.prec() <= 0 {
            return Decision::Unknown(String::from("precision exhausted before the integral part"));
        }
        let x = if st.a > st.b {
            polar_part(e, &r)
        } else {
            let Ok(y) = r.neg().div(c) else {
                return Decision::Unknown(String::from(
                    "tau coefficient not invertible to precision",
                ));
            };
            match polar_part(e, &y).qth_root() {
                Some(z) => z,
                None => {
                    return Decision::No(Certificate::new(
                        Obstruction::QthRoot,
                        format!("polar part at t^{} is not a q-th power", i),
                    ))
                }
            }
        };
        st.reduce(e, &mut res, &x, i);
        xi[i] = x;
    }
    if res.iter().all(|c| c.is_zero() || c.val_bound() >= 0) {
        Decision::Yes(TPoly::new(e, xi))
    } else {
        Decision::No(Certificate::new(
            Obstruction::Valuation,
            "low-degree part of the residual is not integral",
        ))
    }
}
