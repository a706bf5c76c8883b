use proptest::prelude::*;

use tmodels_core::extcalc::{a_action, has_good_reduction_ell, iota, is_split, ExtClass};
use tmodels_core::frobspace::{twisted_solve, FrobeniusSpace, OLattice};
use tmodels_core::global::{localize, Place};
use tmodels_core::isocrystal::{Isocrystal, Slope};
use tmodels_core::linalg::SMat;
use tmodels_core::motive::local::maximal_o_model;
use tmodels_core::motive::{EllContext, GlobalMotive, LocalMotive};
use tmodels_core::tower::{
    Field, Gf, LaurentSeries, LocalField, RatFuncField, Series, TPoly, TwistStyle,
};
use tmodels_core::Decision;

const PREC: i64 = 32;

/// Fields `F_{q^d}((π))` small enough to sample exhaustively.
fn field_params() -> impl Strategy<Value = (u64, u32)> {
    prop_oneof![Just((2, 1)), Just((3, 1)), Just((2, 2)), Just((5, 1))]
}

/// A series `π^v·Σ dᵢπⁱ` from raw digits reduced into the residue field.
fn series(k: &Gf, v: i64, digits: &[u32], prec: i64) -> Series {
    let terms: Vec<(i64, u32)> = digits
        .iter()
        .enumerate()
        .map(|(i, d)| (v + i as i64, d % k.size()))
        .collect();
    LaurentSeries::from_terms(k.clone(), &terms, prec)
}

fn digits() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..25, 1..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_ring_laws((q, d) in field_params(), va in -3i64..3, vb in -3i64..3, vc in -3i64..3,
                        da in digits(), db in digits(), dc in digits()) {
        let k = Gf::new(q, d).unwrap();
        let (a, b, c) = (series(&k, va, &da, PREC), series(&k, vb, &db, PREC), series(&k, vc, &dc, PREC));
        prop_assert!(a.mul(&b).mul(&c).eq_to_prec(&a.mul(&b.mul(&c))));
        prop_assert!(a.mul(&b.add(&c)).eq_to_prec(&a.mul(&b).add(&a.mul(&c))));
        prop_assert!(a.mul(&b).eq_to_prec(&b.mul(&a)));
        let full = TwistStyle::FullFrobenius;
        prop_assert!(a.mul(&b).frobenius(full).eq_to_prec(&a.frobenius(full).mul(&b.frobenius(full))));
        prop_assert!(a.add(&b).frobenius(full).eq_to_prec(&a.frobenius(full).add(&b.frobenius(full))));
        if let Ok(inv) = a.invert() {
            prop_assert!(a.mul(&inv).sub(&LaurentSeries::one(k.clone(), PREC)).is_zero());
        }
        let root = a.frobenius(full).qth_root().unwrap();
        prop_assert!(root.sub(&a).is_zero());
    }

    #[test]
    fn twisted_solve_is_sound((q, d) in field_params(), n in 1usize..=2, vf in 0i64..3,
                              fd in prop::collection::vec(digits(), 4), xd in prop::collection::vec(digits(), 2)) {
        // m = ξ − F·σ(ξ) always has a solution, and any witness must verify.
        let e = LocalField::new(Gf::new(q, d).unwrap(), PREC);
        let k = e.residue_field().clone();
        let f = SMat::from_fn(&k, n, n, |a, b| {
            let s = series(&k, vf, &fd[a * n + b], PREC);
            if a == b { s.add(&LaurentSeries::one(k.clone(), PREC)) } else { s }
        });
        prop_assume!(FrobeniusSpace::new(e.clone(), f.clone()).is_ok());
        let xi: Vec<Series> = (0..n).map(|i| series(&k, -1, &xd[i], PREC)).collect();
        let sx: Vec<Series> = xi.iter().map(|x| x.frobenius(TwistStyle::FullFrobenius)).collect();
        let fx = f.mul_vec(&sx);
        let m: Vec<Series> = xi.iter().zip(&fx).map(|(a, b)| a.sub(b)).collect();
        match twisted_solve(&f, &m, TwistStyle::FullFrobenius) {
            Decision::Yes(w) => {
                let sw: Vec<Series> = w.iter().map(|x| x.frobenius(TwistStyle::FullFrobenius)).collect();
                let fw = f.mul_vec(&sw);
                for i in 0..n {
                    prop_assert!(w[i].sub(&fw[i]).sub(&m[i]).is_zero(), "residual in component {}", i);
                }
            }
            Decision::No(c) => prop_assert!(false, "solvable system rejected: {:?}", c),
            Decision::Unknown(_) => {}
        }
    }

    #[test]
    fn maximal_model_is_stable_and_maximal(q in prop_oneof![Just(2u64), Just(3)], n in 1usize..=2, vmin in -3i64..=0,
                                           fd in prop::collection::vec(digits(), 4), vs in prop::collection::vec(0i64..4, 4)) {
        let e = LocalField::over(q, 1).unwrap().with_precision(24);
        let k = e.residue_field().clone();
        let f = SMat::from_fn(&k, n, n, |a, b| series(&k, vmin + vs[a * n + b], &fd[a * n + b], 24));
        let Ok(v) = FrobeniusSpace::new(e.clone(), f) else { return Ok(()) };
        let vo = v.maximal_integral_model().unwrap();
        prop_assert!(v.is_model(&vo).unwrap());
        let (a, _) = v.start_bounds().unwrap();
        prop_assert!(OLattice::scaled_standard(&k, n, a).is_sublattice_of(&vo));
        // Enlarging V_O by any single extra π-step breaks stability.
        for i in 0..n {
            let mut gens = vo.columns(vo.floor() + 2);
            let mut extra = vec![LaurentSeries::zero(k.clone(), vo.floor() + 2); n];
            extra[i] = LaurentSeries::monomial(k.clone(), 1, vo.diag()[i] - 1, vo.floor() + 2);
            gens.push(extra);
            let bigger = OLattice::from_generators(&k, n, &gens, vo.floor());
            prop_assert!(!v.is_model(&bigger).unwrap());
        }
    }

    #[test]
    fn discriminant_under_scaling(q in prop_oneof![Just(2u64), Just(3)], n in 1usize..=2, a in -2i64..3,
                                  fd in prop::collection::vec(digits(), 4)) {
        let e = LocalField::over(q, 1).unwrap().with_precision(24);
        let k = e.residue_field().clone();
        let f = SMat::from_fn(&k, n, n, |i, j| series(&k, 0, &fd[i * n + j], 24));
        let Ok(v) = FrobeniusSpace::new(e.clone(), f) else { return Ok(()) };
        let d0 = v.smith_type(&OLattice::standard(&k, n)).unwrap().discriminant;
        let da = v.smith_type(&OLattice::scaled_standard(&k, n, a)).unwrap().discriminant;
        prop_assert_eq!(da - d0, n as i64 * (q as i64 - 1) * a);
    }

    #[test]
    fn hnf_is_canonical(dd in prop::collection::vec(digits(), 4), vs in prop::collection::vec(-2i64..2, 4)) {
        let k = Gf::new(3, 1).unwrap();
        let g: Vec<Vec<Series>> = (0..2).map(|j| (0..2).map(|i| series(&k, vs[2 * j + i], &dd[2 * j + i], 16)).collect()).collect();
        let l = OLattice::from_generators(&k, 2, &g, 6);
        let sum: Vec<Series> = g[0].iter().zip(&g[1]).map(|(a, b)| a.add(b)).collect();
        let shuffled = vec![g[1].clone(), sum, g[0].clone()];
        prop_assert_eq!(l, OLattice::from_generators(&k, 2, &shuffled, 6));
    }

    #[test]
    fn iota_is_linear(n in -1i64..=2, pa in 0u32..3, pb in 0u32..3, da in digits(), db in digits()) {
        let e = LocalField::over(3, 1).unwrap().with_precision(PREC);
        let k = e.residue_field().clone();
        let th = e.from_terms(&[(0, 1), (1, 1)]);
        let m = LocalMotive::carlitz(e.clone(), th.clone(), n);
        let u = TPoly::new(&e, vec![series(&k, -1, &da, PREC), series(&k, 0, &db, PREC)]);
        let w = TPoly::new(&e, vec![series(&k, 0, &db, PREC), e.one(), series(&k, 1, &da, PREC)]);
        let x = iota(&m, pa, vec![u.clone()]).unwrap();
        let y = iota(&m, pb, vec![w.clone()]).unwrap();
        let j = m.j();
        let p = pa.max(pb);
        let lift = |v: &TPoly<LocalField>, pv: u32| v.mul(&e, &j.pow(&e, p - pv));
        let z = iota(&m, p, vec![lift(&u, pa).add(&e, &lift(&w, pb))]).unwrap();
        prop_assert!(x.add(&y).unwrap().sub(&z).unwrap().is_zero_rep());
        let t = TPoly::t(&e);
        let tx = iota(&m, pa, vec![u.mul(&e, &t)]).unwrap();
        prop_assert!(a_action(&t, &x).sub(&tx).unwrap().is_zero_rep());
    }

    #[test]
    fn coboundaries_split(n in -1i64..=2, da in digits(), db in digits()) {
        let e = LocalField::over(3, 1).unwrap().with_precision(PREC);
        let k = e.residue_field().clone();
        let th = e.from_terms(&[(0, 1), (1, 1)]);
        let m = LocalMotive::carlitz(e.clone(), th, n);
        let xi = vec![TPoly::new(&e, vec![series(&k, 0, &da, PREC), series(&k, 0, &db, PREC), e.one()])];
        let x = ExtClass::coboundary(&m, &xi).unwrap();
        match is_split(&x) {
            Decision::Yes(w) => prop_assert!(x.verify_split(&w).unwrap()),
            Decision::No(c) => prop_assert!(false, "coboundary reported non-split: {:?}", c),
            Decision::Unknown(_) => {}
        }
    }

    #[test]
    fn integral_classes_have_good_reduction(n in 0i64..=2, pole in 0u32..=2, da in digits(), db in digits()) {
        let e = LocalField::over(2, 1).unwrap().with_precision(48);
        let k = e.residue_field().clone();
        let th = e.from_terms(&[(0, 1), (1, 1)]);
        let m = LocalMotive::carlitz(e.clone(), th, n);
        let ctx = EllContext::new(&m, vec![0, 1]).unwrap();
        let num = TPoly::new(&e, vec![series(&k, 0, &da, 48), series(&k, 1, &db, 48)]);
        let x = iota(&m, pole, vec![num]).unwrap();
        let v = has_good_reduction_ell(&x, &ctx, 4);
        prop_assert!(matches!(v.decision, Decision::Yes(4)), "{:?}", v.decision);
    }

    #[test]
    fn newton_slopes_sum_to_degree(r in 1usize..=3, dd in prop::collection::vec(digits(), 9), vs in prop::collection::vec(-2i64..3, 9)) {
        let k = Gf::new(2, 1).unwrap();
        let u = SMat::from_fn(&k, r, r, |a, b| series(&k, vs[a * r + b], &dd[a * r + b], 8).extend_prec(96));
        let Ok(iso) = Isocrystal::new(k.clone(), u) else { return Ok(()) };
        let sd = match iso.newton_slopes(iso.default_level()) {
            Ok(sd) => sd,
            Err(tmodels_core::Error::NotConverged(_) | tmodels_core::Error::PrecisionExhausted(_)) => {
                return Err(TestCaseError::reject("precision"))
            }
            Err(e) => return Err(TestCaseError::fail(format!("{:?}", e))),
        };
        let sum: Slope = sd.slopes.iter().sum();
        prop_assert_eq!(sum, Slope::from_integer(iso.degree()));
        prop_assert!(sd.slopes.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn hodge_weights_add(a in -3i64..=3, b in -3i64..=3) {
        let e = LocalField::over(2, 1).unwrap().with_precision(PREC);
        let th = e.from_terms(&[(0, 1), (1, 1)]);
        let ca = LocalMotive::carlitz(e.clone(), th.clone(), a);
        let cb = LocalMotive::carlitz(e.clone(), th.clone(), b);
        prop_assert_eq!(ca.tensor(&cb).unwrap().hodge_polygon().unwrap().weights, vec![a + b]);
        let mut both = vec![a, b];
        both.sort();
        prop_assert_eq!(ca.direct_sum(&cb).unwrap().hodge_polygon().unwrap().weights, both);
    }
}

#[test]
fn good_places_have_standard_models() {
    // τ = θ·1 is bad only at (θ).
    let f = RatFuncField::new(2, "theta").unwrap();
    let th = f.gen();
    let m = GlobalMotive::scalar(f.clone(), th.clone(), th).unwrap();
    for p in [vec![1, 1], vec![1, 1, 1], vec![1, 1, 0, 1]] {
        let place = Place::new(&f, p.clone(), 32).unwrap();
        let local = localize(&m, &place).unwrap();
        let ctx = EllContext::default_for(&local).unwrap();
        let mo = maximal_o_model(&local, &ctx).unwrap();
        assert_eq!(mo.scaled_standard_exponent(), Some(0), "place {:?}", p);
    }
    let bad = Place::new(&f, vec![0, 1], 32).unwrap();
    let local = localize(&m, &bad).unwrap();
    let ctx = EllContext::default_for(&local).unwrap();
    assert_eq!(
        maximal_o_model(&local, &ctx)
            .unwrap()
            .scaled_standard_exponent(),
        Some(-1)
    );
}
