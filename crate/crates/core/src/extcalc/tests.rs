use super::*;
use crate::motive::Motive;
use crate::tower::Gf;

fn field(q: u64, d: u32) -> LocalField {
    LocalField::over(q, d).unwrap()
}

fn one_plus_pi(e: &LocalField) -> Series {
    e.from_terms(&[(0, 1), (1, 1)])
}

fn c(e: &LocalField, s: Series) -> TPoly<LocalField> {
    TPoly::constant(e, s)
}

#[test]
fn iota_module_laws() {
    let e = field(3, 1);
    let th = one_plus_pi(&e);
    let m = Motive::carlitz(e.clone(), th.clone(), 1);
    let a = TPoly::new(&e, vec![e.pi(), e.one()]);
    let x = iota(&m, 2, vec![a.clone()]).unwrap();
    assert!(baer_sum(&x, &x.neg()).unwrap().is_zero_rep());
    assert!(ExtClass::zero(&m).is_zero_rep());

    let one = Motive::unit(e.clone(), th.clone(), 1);
    let y = a_action(
        &TPoly::t(&e),
        &ExtClass::from_poly(&one, vec![TPoly::one(&e)]).unwrap(),
    );
    let want = ExtClass::from_poly(&one, vec![TPoly::t(&e)]).unwrap();
    assert!(y.sub(&want).unwrap().is_zero_rep());

    // ι(u) + ι(v) = ι(u + v) with different poles.
    let u = iota(&m, 1, vec![TPoly::one(&e)]).unwrap();
    let v = iota(&m, 0, vec![a.clone()]).unwrap();
    let j = m.j();
    let sum = iota(&m, 1, vec![TPoly::one(&e).add(&e, &a.mul(&e, &j))]).unwrap();
    assert!(u.add(&v).unwrap().sub(&sum).unwrap().is_zero_rep());
}

#[test]
fn split_depends_on_coefficient_field() {
    // ξ − ξ² = 1 is X² + X + 1 = 0.
    let e2 = field(2, 1);
    let one = Motive::unit(e2.clone(), one_plus_pi(&e2), 1);
    let x = ExtClass::from_poly(&one, vec![TPoly::one(&e2)]).unwrap();
    let d = is_split(&x);
    assert!(d.is_no(), "{:?}", d);

    let e4 = field(2, 2);
    let one = Motive::unit(e4.clone(), one_plus_pi(&e4), 1);
    let x = ExtClass::from_poly(&one, vec![TPoly::one(&e4)]).unwrap();
    let Decision::Yes(xi) = is_split(&x) else {
        panic!("expected split over F_4")
    };
    let w = xi[0].coeff(&e4, 0);
    let wc = w.coeff(0);
    assert!(
        wc >= 2,
        "witness must be a primitive cube root of unity, got {}",
        wc
    );
    assert!(x.verify_split(&xi).unwrap());
}

#[test]
fn eta_example() {
    let e = field(2, 1);
    let th = one_plus_pi(&e);
    let eta = e.powi(&th, -2).unwrap();
    let eta_q = e.frobenius(&eta);

    let carlitz = Motive::carlitz(e.clone(), th.clone(), 1);
    let x = ExtClass::from_poly(&carlitz, vec![c(&e, eta_q.clone())]).unwrap();
    let d = is_split(&x);
    assert!(
        matches!(&d, Decision::No(cert) if cert.kind == Obstruction::Degree),
        "{:?}",
        d
    );

    let c2 = Motive::carlitz(e.clone(), th.clone(), 2);
    let x = ExtClass::from_poly(&c2, vec![c(&e, eta_q)]).unwrap();
    let Decision::Yes(ann) = is_torsion(&x, default_torsion_bound(&c2)) else {
        panic!("expected torsion")
    };
    assert!(ann.a.eq_poly(&e, &TPoly::t(&e).pow(&e, 2)));
    assert!(x.a_action(&ann.a).verify_split(&ann.xi).unwrap());
    assert!(e.eq_elem(&ann.xi[0].coeff(&e, 0), &eta));
}

#[test]
fn split_witnesses_verify() {
    let e = field(3, 1);
    let th = one_plus_pi(&e);
    let m = Motive::carlitz(e.clone(), th.clone(), 1);
    let xi = vec![TPoly::new(&e, vec![e.pi(), e.from_int(2), e.one()])];
    let x = ExtClass::coboundary(&m, &xi).unwrap();
    let Decision::Yes(w) = is_split(&x) else {
        panic!("coboundary must split")
    };
    assert!(x.verify_split(&w).unwrap());

    let a1 = Motive::carlitz(e.clone(), th.clone(), -1);
    let xi = vec![TPoly::new(&e, vec![e.one(), th.clone()])];
    let x = ExtClass::coboundary(&a1, &xi).unwrap();
    assert!(x.pole() > 0);
    let Decision::Yes(w) = is_split(&x) else {
        panic!("coboundary must split")
    };
    assert!(x.verify_split(&w).unwrap());
}

#[test]
fn split_keeps_precision_of_lost_digits() {
    // Two q-th roots leave the constant term of ξ known only mod π², so the
    // π² in it must not show up as a nonzero residual.
    let e = field(3, 1);
    let th = one_plus_pi(&e);
    let m = Motive::carlitz(e.clone(), th, 1);
    let xi = vec![TPoly::new(
        &e,
        vec![e.pi().powi(2).unwrap(), e.zero_series(), e.one()],
    )];
    let x = ExtClass::coboundary(&m, &xi).unwrap();
    let Decision::Yes(w) = is_split(&x) else {
        panic!("coboundary must split")
    };
    assert!(x.verify_split(&w).unwrap());
}

#[test]
fn pi_inverse_on_unit() {
    let e = field(2, 1);
    let th = one_plus_pi(&e);
    let one = Motive::unit(e.clone(), th.clone(), 1);
    let x = ExtClass::from_poly(&one, vec![c(&e, e.pi().powi(-1).unwrap())]).unwrap();
    assert!(is_torsion(&x, default_torsion_bound(&one)).is_no());
    let ctx = EllContext::new(&one, vec![0, 1]).unwrap();
    let d = is_integral(&x, &ctx);
    assert!(d.is_no(), "{:?}", d);
    let v = has_good_reduction_ell(&x, &ctx, 3);
    match v.decision {
        Decision::No(cert) => assert_eq!(cert.level, Some(1)),
        other => panic!("expected No at level 1, got {:?}", other),
    }
    assert!(!v.best_effort);

    let y = ExtClass::from_poly(&one, vec![c(&e, e.pi())]).unwrap();
    assert!(is_integral(&y, &ctx).is_yes());
    assert!(has_good_reduction_ell(&y, &ctx, 3).decision.is_yes());
    let z = iota(&one, 2, vec![TPoly::new(&e, vec![e.one(), e.pi()])]).unwrap();
    assert!(is_integral(&z, &ctx).is_yes());
}

#[test]
fn regulated_examples() {
    let e = field(3, 1);
    let th = one_plus_pi(&e);
    let a1 = Motive::carlitz(e.clone(), th.clone(), -1);
    let x = iota(&a1, 1, vec![TPoly::one(&e)]).unwrap();
    assert!(is_regulated(&x).is_yes());
    let x2 = iota(&a1, 2, vec![TPoly::one(&e)]).unwrap();
    assert!(is_regulated(&x2).is_no());

    let carlitz = Motive::carlitz(e.clone(), th.clone(), 1);
    let y = iota(&carlitz, 1, vec![TPoly::one(&e)]).unwrap();
    assert!(is_regulated(&y).is_no());
    let z = ExtClass::from_poly(&carlitz, vec![TPoly::t(&e)]).unwrap();
    assert!(is_regulated(&z).is_yes());
}

#[test]
fn hom_twist_transport() {
    let e = field(3, 1);
    let th = one_plus_pi(&e);
    let one = Motive::unit(e.clone(), th.clone(), 1);
    let carlitz = Motive::carlitz(e.clone(), th.clone(), 1);

    let u = PolyMat::scalar(1, &TPoly::one(&e));
    let (target, x) = hom_twist(&carlitz, &one, 0, &u).unwrap();
    assert_eq!(target.certificate().1, -1);
    let want = iota(&target, 0, vec![TPoly::one(&e)]).unwrap();
    assert!(is_split(&x.sub(&want).unwrap()).is_yes());

    let m = PolyMat::scalar(1, &TPoly::new(&e, vec![e.pi(), e.one()]));
    let (target, x) = hom_twist(&one, &one, 0, &m).unwrap();
    assert_eq!(target.rank(), 1);
    assert!(x
        .sub(&iota(&target, 0, vec![m.get(0, 0).clone()]).unwrap())
        .unwrap()
        .is_zero_rep());

    let jm = PolyMat::scalar(1, &carlitz.j());
    let (target, x) = hom_twist(&carlitz, &carlitz, 0, &jm).unwrap();
    assert_eq!(target.certificate().1, 0);
    let want = iota(&target, 0, vec![TPoly::one(&e)]).unwrap();
    assert!(x.sub(&want).unwrap().is_zero_rep());
}

#[test]
fn constant_rank_two() {
    // τ swaps the basis vectors. (1, 1) = (id − τσ)(0, 1); (1, 0) needs
    // X − X⁴ = 1, and X⁴ + X + 1 is irreducible over F_2.
    let e = field(2, 1);
    let th = one_plus_pi(&e);
    let n = PolyMat::from_fn(2, 2, |a, b| {
        if a != b {
            TPoly::one(&e)
        } else {
            TPoly::zero()
        }
    });
    let m = Motive::new(e.clone(), th, 0, n).unwrap();
    let x = ExtClass::from_poly(&m, vec![TPoly::one(&e), TPoly::one(&e)]).unwrap();
    let Decision::Yes(xi) = is_split(&x) else {
        panic!("expected split")
    };
    assert!(x.verify_split(&xi).unwrap());
    let y = ExtClass::from_poly(&m, vec![TPoly::one(&e), TPoly::zero()]).unwrap();
    assert!(is_split(&y).is_no());
}

#[test]
fn counterexample_q2() {
    let (data, report) = build_counterexample_51(2, 64, 8).unwrap();
    assert_eq!(data.k, 4);
    assert_eq!(report.min_valuation_m, -2);
    assert!(report.det_s0_is_one);
    assert!(report.cyclic_shift_mod_p && report.periodic_mod_p && report.roots_exist);
    assert_eq!(report.congruence_levels, 8);
    assert!(
        matches!(report.good_reduction, Decision::Yes(8)),
        "{:?}",
        report.good_reduction
    );
    assert!(report.integral.is_no(), "{:?}", report.integral);
    assert!(report.regulated.is_no());
    assert!(report.separates(8));
    let _ = Gf::new(2, 1);
}
