#![allow(dead_code)]

use monge_core::forms::DiffForm;
use monge_core::scalar::Monomial;
use monge_core::{Chart, Poly, Rational, ScalarExpr};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, FileFailurePersistence, RngAlgorithm, TestRng, TestRunner};

/// Terms `(exponents, coefficient)` kept outside the kernel so tests can
/// evaluate and differentiate them independently.
pub type Raw = Vec<(Vec<u32>, i64)>;

pub fn runner(cases: u32) -> TestRunner {
    let config =
        Config { cases, failure_persistence: Some(Box::new(FileFailurePersistence::Off)), ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

pub fn raw(nvars: usize, max_terms: usize, max_deg: u32) -> impl Strategy<Value = Raw> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, nvars), -3i64..=3), 0..=max_terms)
        .prop_map(move |ts| ts.into_iter().filter(|(e, c)| *c != 0 && e.iter().sum::<u32>() <= max_deg).collect())
}

pub fn nonzero_raw(nvars: usize, max_terms: usize, max_deg: u32) -> impl Strategy<Value = Raw> {
    raw(nvars, max_terms, max_deg).prop_filter("nonzero", |r| !to_poly(r).is_zero())
}

pub fn to_poly(r: &Raw) -> Poly {
    r.iter().fold(Poly::zero(), |acc, (e, c)| {
        acc.add(&Poly::monomial(Monomial::from_exponents(e.clone()), Rational::from_integer((*c).into())))
    })
}

pub fn eval_raw(r: &Raw, pt: &[Rational]) -> Rational {
    let mut total = Rational::zero();
    for (e, c) in r {
        let mut t = Rational::from_integer(BigInt::from(*c));
        for (x, &k) in pt.iter().zip(e) {
            for _ in 0..k {
                t *= x;
            }
        }
        total += t;
    }
    total
}

pub fn diff_raw(r: &Raw, v: usize) -> Raw {
    r.iter()
        .filter(|(e, _)| e[v] > 0)
        .map(|(e, c)| {
            let mut e2 = e.clone();
            e2[v] -= 1;
            (e2, c * i64::from(e[v]))
        })
        .collect()
}

/// A polynomial numerator over a nonzero polynomial denominator.
#[derive(Clone, Debug)]
pub struct RawFraction {
    pub num: Raw,
    pub den: Raw,
}

impl RawFraction {
    pub fn expr(&self) -> ScalarExpr {
        ScalarExpr::new(to_poly(&self.num), to_poly(&self.den)).expect("nonzero denominator")
    }

    /// `None` at a pole.
    pub fn eval(&self, pt: &[Rational]) -> Option<Rational> {
        let d = eval_raw(&self.den, pt);
        (!d.is_zero()).then(|| eval_raw(&self.num, pt) / d)
    }
}

pub fn fraction() -> impl Strategy<Value = RawFraction> {
    (raw(5, 3, 2), nonzero_raw(5, 2, 1)).prop_map(|(num, den)| RawFraction { num, den })
}

pub fn polynomial() -> impl Strategy<Value = RawFraction> {
    raw(5, 3, 2).prop_map(|num| RawFraction { num, den: vec![(vec![0; 5], 1)] })
}

pub fn rational() -> impl Strategy<Value = Rational> {
    (-7i64..=7, 1i64..=4).prop_map(|(a, b)| Rational::new(a.into(), b.into()))
}

/// Eight points with small rational coordinates.
pub fn points(nvars: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    prop::collection::vec(prop::collection::vec(rational(), nvars), 8)
}

pub fn one_form(max_deg: u32) -> impl Strategy<Value = DiffForm> {
    prop::collection::vec(raw(5, 2, max_deg), 5).prop_map(|cs| {
        DiffForm::one_form(&Chart::base(), &cs.iter().map(|r| ScalarExpr::from_poly(to_poly(r))).collect::<Vec<_>>())
    })
}

pub fn raw_one_form(max_deg: u32) -> impl Strategy<Value = Vec<Raw>> {
    prop::collection::vec(raw(5, 2, max_deg), 5)
}

pub fn form_from_raw(chart: &Chart, cs: &[Raw]) -> DiffForm {
    DiffForm::one_form(chart, &cs.iter().map(|r| ScalarExpr::from_poly(to_poly(r))).collect::<Vec<_>>())
}

pub fn int(n: i64) -> ScalarExpr {
    ScalarExpr::integer(n)
}

pub fn var(i: usize) -> ScalarExpr {
    ScalarExpr::var(i)
}

pub fn d(chart: &Chart, i: usize) -> DiffForm {
    DiffForm::differential(chart, i)
}

pub fn df(chart: &Chart, f: &ScalarExpr) -> DiffForm {
    DiffForm::function(chart, f.clone()).d()
}

pub fn theta() -> DiffForm {
    let b = Chart::base();
    &(&d(&b, 2) - &d(&b, 0).scale(&var(3))) - &d(&b, 1).scale(&var(4))
}

pub fn one() -> Rational {
    Rational::one()
}
