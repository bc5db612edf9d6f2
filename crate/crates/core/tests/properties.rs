mod common;

use common::*;
use monge_core::forms::DiffForm;
use monge_core::integrals::{
    check_surface, verify_contact_map, verify_intermediate_integral, verify_normal_form, ContactMap, NormalFormData,
    SurfaceMap, SurfaceVerdict,
};
use monge_core::ma::{Kind, MACoefficients, MongeAmpereSystem};
use monge_core::pfaff::{Containment, PfaffianSystem};
use monge_core::{Chart, Rational, ScalarExpr};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

fn expr(r: &Raw) -> ScalarExpr {
    ScalarExpr::from_poly(to_poly(r))
}

fn constant(q: &Rational) -> ScalarExpr {
    ScalarExpr::rational(q.clone())
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |q| *q != Rational::from_integer(0.into()))
}

/// Coefficients with `A·E = 0` and `B·D = 0`, so the roots are `±C`.
fn split_coefficients() -> impl Strategy<Value = MACoefficients> {
    (prop::collection::vec(raw(5, 2, 1), 5), 0usize..2, 0usize..2).prop_map(|(cs, ae, bd)| {
        let mut v: Vec<ScalarExpr> = cs.iter().map(expr).collect();
        v[if ae == 0 { 0 } else { 4 }] = ScalarExpr::zero();
        v[if bd == 0 { 1 } else { 3 }] = ScalarExpr::zero();
        MACoefficients::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone(), v[4].clone())
    })
}

fn reject(why: &'static str) -> TestCaseError {
    TestCaseError::reject(why)
}

#[test]
fn partials_commute() {
    runner(200)
        .run(&(fraction(), 0usize..5, 0usize..5), |(f, i, j)| {
            let e = f.expr();
            prop_assert_eq!(e.partial(i).partial(j), e.partial(j).partial(i));
            Ok(())
        })
        .unwrap();
}

#[test]
fn leibniz_for_partials() {
    runner(200)
        .run(&(fraction(), fraction(), 0usize..5), |(a, b, v)| {
            let (a, b) = (a.expr(), b.expr());
            prop_assert_eq!((&a * &b).partial(v), &(&a.partial(v) * &b) + &(&a * &b.partial(v)));
            Ok(())
        })
        .unwrap();
}

#[test]
fn accepted_differentials_reassemble() {
    let base = Chart::base();
    runner(100)
        .run(
            &(raw(5, 3, 2).prop_filter("nonconstant", |r| !to_poly(r).is_constant()), one_form(1), one_form(1)),
            |(f, g2, g3)| {
                let f = expr(&f);
                let df = df(&base, &f);
                let Ok(j) = PfaffianSystem::new(&base, vec![df.clone(), g2, g3]) else {
                    return Err(reject("dependent generators"));
                };
                let Containment::Contained(fs) = j.contains_differential(&f).unwrap() else {
                    return Err(TestCaseError::fail("dF refused by a system it generates"));
                };
                let sum =
                    j.generators().iter().zip(&fs).fold(DiffForm::zero(&base, 1), |acc, (g, c)| &acc + &g.scale(c));
                prop_assert_eq!(sum, df);
                Ok(())
            },
        )
        .unwrap();
}

#[test]
fn derived_system_shape_follows_structure_coefficients() {
    let base = Chart::base();
    runner(100)
        .run(&(one_form(1), one_form(1)), |(w1, w2)| {
            let th = theta();
            let Ok(j) = PfaffianSystem::new(&base, vec![th.clone(), w1, w2]) else {
                return Err(reject("dependent generators"));
            };
            let sc = j.structure_coefficients().unwrap();
            let j1 = j.derived_system().unwrap();
            if sc.r0.is_zero() && sc.r1.is_zero() && sc.r2.is_zero() {
                prop_assert_eq!(j1.rank(), 3);
                return Ok(());
            }
            prop_assert_eq!(j1.rank(), 2);
            prop_assert_eq!(j1.contains_form(&th), sc.r0.is_zero());
            let j2 = j1.derived_system().unwrap();
            if sc.r0.is_zero() && j2.rank() < 2 && j2.rank() > 0 {
                prop_assert_eq!(j2.rank(), 1);
                prop_assert!(!j2.contains_form(&th));
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn characteristic_factors_reverify() {
    let base = Chart::base();
    runner(100)
        .run(&split_coefficients(), |co| {
            let Ok(s) = MongeAmpereSystem::from_equation(&base, co) else {
                return Err(reject("not a Monge-Ampère system"));
            };
            let Ok(systems) = s.characteristic_systems() else {
                return Err(reject("degenerate"));
            };
            let pivots = s.theta_pivots();
            for cs in &systems {
                let target = (s.omega() + &s.dtheta().scale(&cs.lambda)).reduce_mod(&pivots);
                prop_assert_eq!(cs.omega1.wedge(&cs.omega2).reduce_mod(&pivots), target);
                prop_assert!(cs.system.contains_form(s.theta()));
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn linear_coefficient_vanishes_for_equations() {
    let base = Chart::base();
    runner(200)
        .run(&prop::collection::vec(raw(5, 3, 2), 5), |cs| {
            let v: Vec<ScalarExpr> = cs.iter().map(expr).collect();
            let co = MACoefficients::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone(), v[4].clone());
            let Ok(s) = MongeAmpereSystem::from_equation(&base, co) else {
                return Err(reject("not a Monge-Ampère system"));
            };
            let quad = s.characteristic_quadratic();
            prop_assert!(quad.c1.is_zero());
            prop_assert_eq!(quad.c2, int(-2));
            Ok(())
        })
        .unwrap();
}

fn sorted_roots(s: &MongeAmpereSystem) -> Vec<ScalarExpr> {
    let mut r = s.classify().roots;
    r.sort();
    r
}

#[test]
fn shifting_omega_by_dtheta_shifts_roots() {
    let base = Chart::base();
    runner(60)
        .run(&(split_coefficients(), rational()), |(co, l0)| {
            let Ok(s) = MongeAmpereSystem::from_equation(&base, co) else {
                return Err(reject("not a Monge-Ampère system"));
            };
            let l0 = constant(&l0);
            let shifted = MongeAmpereSystem::from_forms(s.theta().clone(), s.omega() + &s.dtheta().scale(&l0)).unwrap();
            let before = s.classify();
            let after = shifted.classify();
            prop_assert_eq!(before.kind, after.kind);
            let mut expected: Vec<ScalarExpr> = before.roots.iter().map(|r| r - &l0).collect();
            expected.sort();
            prop_assert_eq!(sorted_roots(&shifted), expected);
            if let (Ok(a), Ok(b)) = (s.characteristic_systems(), shifted.characteristic_systems()) {
                prop_assert_eq!(a.len(), b.len());
                for ca in &a {
                    let partner = b.iter().find(|cb| cb.lambda == &ca.lambda - &l0);
                    prop_assert!(partner.is_some_and(|cb| cb.system.same_span(&ca.system)));
                }
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn rescaling_omega_rescales_roots() {
    let base = Chart::base();
    runner(60)
        .run(&(split_coefficients(), nonzero_rational()), |(co, c)| {
            let Ok(s) = MongeAmpereSystem::from_equation(&base, co) else {
                return Err(reject("not a Monge-Ampère system"));
            };
            let c = constant(&c);
            let scaled = MongeAmpereSystem::from_forms(s.theta().clone(), s.omega().scale(&c)).unwrap();
            prop_assert_eq!(s.classify().kind, scaled.classify().kind);
            let mut expected: Vec<ScalarExpr> = s.classify().roots.iter().map(|r| r * &c).collect();
            expected.sort();
            prop_assert_eq!(sorted_roots(&scaled), expected);
            Ok(())
        })
        .unwrap();
}

/// `z = f(x) + g(y)` solves the wave equation `z_xy = 0`.
#[test]
fn wave_solutions_annihilate_the_ideal() {
    let base = Chart::base();
    let uv = Chart::surface();
    let wave = MongeAmpereSystem::from_equation(&base, MACoefficients::from_ints([0, 0, 1, 0, 0])).unwrap();
    let one_var = |v: usize| {
        raw(2, 3, 3).prop_map(move |r| {
            r.into_iter()
                .map(|(mut e, c)| {
                    e[1 - v] = 0;
                    (e, c)
                })
                .collect::<Raw>()
        })
    };
    runner(60)
        .run(
            &(one_var(0), one_var(1), one_form(1), raw(5, 2, 1), raw(5, 2, 1), raw(5, 2, 1)),
            |(f, g, alpha, a, b, c)| {
                let (f, g) = (expr(&f), expr(&g));
                let n = SurfaceMap::new(&uv, &base, vec![var(0), var(1), &f + &g, f.partial(0), g.partial(1)]).unwrap();
                let r = check_surface(&wave, &n, None, None).unwrap();
                prop_assert_eq!(r.verdict, SurfaceVerdict::Solution);
                let th = wave.theta();
                let combo = &(&th.scale(&expr(&a)).wedge(&alpha) + &alpha.wedge(th)) + &wave.omega().scale(&expr(&b));
                let combo = &combo + &wave.dtheta().scale(&expr(&c));
                prop_assert!(n.pull_form(&combo).unwrap().is_zero());
                prop_assert!(n.pull_form(&th.scale(&expr(&a))).unwrap().is_zero());
                Ok(())
            },
        )
        .unwrap();
}

#[test]
fn exceptional_surfaces_kill_b_and_c() {
    let base = Chart::base();
    let uv = Chart::surface();
    let s = MongeAmpereSystem::from_equation(&base, MACoefficients::from_ints([0, 0, 0, 0, 1])).unwrap();
    let cs = s.characteristic_systems().unwrap().remove(0);
    let f = var(2);
    let cert = verify_intermediate_integral(&s, &cs, &f).unwrap();
    runner(60)
        .run(&(raw(2, 3, 2), raw(2, 3, 2)), |(phi, psi)| {
            let Ok(n) = SurfaceMap::new(&uv, &base, vec![expr(&phi), expr(&psi), int(0), int(0), int(0)]) else {
                return Err(reject("not immersed"));
            };
            let r = check_surface(&s, &n, Some(&f), Some(&cert)).unwrap();
            prop_assert_eq!(r.verdict, SurfaceVerdict::Exceptional);
            prop_assert_eq!(r.pulled_b, Some(ScalarExpr::zero()));
            prop_assert_eq!(r.pulled_c, Some(ScalarExpr::zero()));
            prop_assert!(r.pulled_theta.is_zero());
            prop_assert!(!r.pulled_omega.is_zero());
            Ok(())
        })
        .unwrap();
}

fn scaling(a: &Rational, b: &Rational, c: &Rational) -> ContactMap {
    let (a, b, c) = (constant(a), constant(b), constant(c));
    let ca = c.div(&a).unwrap();
    let cb = c.div(&b).unwrap();
    ContactMap::new(&Chart::base(), vec![&a * &var(0), &b * &var(1), &c * &var(2), &ca * &var(3), &cb * &var(4)])
}

fn legendre() -> ContactMap {
    let (x, y, z, p, q) = (var(0), var(1), var(2), var(3), var(4));
    ContactMap::new(&Chart::base(), vec![p.clone(), q.clone(), &(&z - &(&p * &x)) - &(&q * &y), -x, -y])
}

#[test]
fn composed_contact_factors_multiply() {
    let th = theta();
    runner(100)
        .run(&(nonzero_rational(), nonzero_rational(), nonzero_rational(), any::<bool>()), |(a, b, c, first)| {
            let s = scaling(&a, &b, &c);
            let l = legendre();
            let mu_s = verify_contact_map(&s, &th, &th).unwrap();
            let mu_l = verify_contact_map(&l, &th, &th).unwrap();
            prop_assert_eq!(&mu_s, &constant(&c));
            let composed = if first { s.then(&l).unwrap() } else { l.then(&s).unwrap() };
            prop_assert_eq!(verify_contact_map(&composed, &th, &th).unwrap(), &mu_s * &mu_l);
            Ok(())
        })
        .unwrap();
}

#[test]
fn normal_form_straightens_omega() {
    let base = Chart::base();
    let (x, y, z, p, q) = (var(0), var(1), var(2), var(3), var(4));
    let big_z = &(&z - &(&p * &x)) - &(&q * &y);
    let cases = [
        (
            [0, 0, 0, 0, 1],
            NormalFormData { x: x.clone(), y: y.clone(), z: z.clone(), p: p.clone(), q: q.clone(), f: var(2) },
        ),
        ([1, 0, 0, 0, 0], NormalFormData { x: p.clone(), y: q.clone(), z: big_z, p: -&x, q: -&y, f: var(2) }),
    ];
    for (co, data) in cases {
        let s = MongeAmpereSystem::from_equation(&base, MACoefficients::from_ints(co)).unwrap();
        let cs = s.characteristic_systems().unwrap().remove(0);
        let nf = verify_normal_form(&cs.system, &data).unwrap();
        let factor = nf.omega_factor(&s, &cs).unwrap();
        assert!(!factor.is_zero());
        let m = nf.contact_map(&base);
        assert_eq!(verify_contact_map(&m, s.theta(), &theta()).unwrap(), &nf.f_z * &nf.kappa);
        assert_eq!(s.classify().kind, Kind::Parabolic);
    }
}
