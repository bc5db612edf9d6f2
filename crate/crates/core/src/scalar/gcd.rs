//! Multivariate polynomial GCD over the rationals.
//!
//! Each shared variable first gets a degree bound from a univariate GCD of
//! images at an integer point. A zero bound for every shared variable proves
//! coprimality; a zero bound for one variable reduces to the coefficients in
//! that variable. Otherwise a recursive primitive PRS runs in the variable
//! with the smallest bound.

use alloc::vec::Vec;

use super::poly::{Monomial, Poly, Rational};
use num_traits::{One, Zero};

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    if a.terms().len() == 1 {
        return monomial_gcd(&a.terms()[0].0, b);
    }
    if b.terms().len() == 1 {
        return monomial_gcd(&b.terms()[0].0, a);
    }
    let (ma, a) = split_monomial(a);
    let (mb, b) = split_monomial(b);
    let mono = Poly::monomial(ma.gcd(&mb), Rational::one());
    if !mono.is_one() {
        return mono.mul(&gcd(&a, &b)).monic();
    }
    let (a, b) = (&a, &b);
    let n = a.nvars().max(b.nvars());
    let shared: Vec<usize> = (0..n).filter(|&v| a.uses_var(v) && b.uses_var(v)).collect();
    if shared.is_empty() {
        return Poly::one();
    }
    let bounds: Vec<(usize, Option<u32>)> = shared.iter().map(|&v| (v, degree_bound(a, b, v))).collect();
    if bounds.iter().all(|(_, d)| *d == Some(0)) {
        return Poly::one();
    }
    if let Some(&(v, _)) = bounds.iter().find(|(_, d)| *d == Some(0)) {
        // the gcd is free of v, so it divides every coefficient in v
        let coeffs: Vec<Poly> = a.coefficients_in(v).into_iter().chain(b.coefficients_in(v)).collect();
        return gcd_many(&coeffs);
    }
    let v =
        bounds.iter().min_by_key(|(v, d)| (d.unwrap_or(u32::MAX), *v)).map(|(v, _)| *v).expect("shared is nonempty");

    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let g = if pa.degree_in(v) == 0 || pb.degree_in(v) == 0 { Poly::one() } else { primitive_prs(pa, pb, v) };
    c.mul(&g).monic()
}

/// Integer points tried for the images; fixed so results are reproducible.
const PROBES: [i64; 4] = [3, -5, 7, 11];

/// Upper bound on the degree in `v` of `gcd(a, b)`, or `None` when every
/// probe point kills a leading coefficient.
fn degree_bound(a: &Poly, b: &Poly, v: usize) -> Option<u32> {
    let n = a.nvars().max(b.nvars());
    let la = leading_in(a, v);
    let lb = leading_in(b, v);
    for (k, &base) in PROBES.iter().enumerate() {
        let point: Vec<Rational> = (0..n)
            .map(|i| Rational::from_integer((base + 2 * i as i64 * (k as i64 + 1) + i as i64 * i as i64).into()))
            .collect();
        if la.eval(&point).is_zero() || lb.eval(&point).is_zero() {
            continue;
        }
        let ia = image(a, v, &point);
        let ib = image(b, v, &point);
        return Some(univariate_gcd_degree(ia, ib));
    }
    None
}

/// Dense coefficients in `v` after substituting `point` for every other variable.
fn image(p: &Poly, v: usize, point: &[Rational]) -> Vec<Rational> {
    let mut out = alloc::vec![Rational::zero(); p.degree_in(v) as usize + 1];
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for (i, &e) in m.exponents().iter().enumerate() {
            if i != v && e > 0 {
                t *= num_traits::pow(point[i].clone(), e as usize);
            }
        }
        out[m.exponent(v) as usize] += t;
    }
    out
}

fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn univariate_gcd_degree(mut a: Vec<Rational>, mut b: Vec<Rational>) -> u32 {
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        core::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let lb = b.last().expect("nonempty").clone();
        while a.len() >= b.len() {
            let q = a.last().expect("nonempty").clone() / &lb;
            let shift = a.len() - b.len();
            for (i, bi) in b.iter().enumerate() {
                a[i + shift] -= &q * bi;
            }
            a.pop();
            trim(&mut a);
        }
        // keep coefficients small
        if let Some(l) = a.last().cloned() {
            for c in a.iter_mut() {
                *c /= &l;
            }
        }
        core::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1) as u32
}

pub fn lcm(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let g = gcd(a, b);
    a.div_exact(&g).expect("gcd divides").mul(b).monic()
}

/// `p = m · rest` with `m` the largest monomial dividing `p`.
fn split_monomial(p: &Poly) -> (Monomial, Poly) {
    let mut terms = p.terms().iter();
    let first = terms.next().map(|(m, _)| m.clone()).unwrap_or_else(Monomial::one);
    let m = terms.fold(first, |acc, (t, _)| acc.gcd(t));
    if m.is_one() {
        return (m, p.clone());
    }
    let rest = Poly::from_terms(p.terms().iter().map(|(t, c)| (t.div(&m).expect("common monomial"), c.clone())));
    (m, rest)
}

fn monomial_gcd(m: &Monomial, p: &Poly) -> Poly {
    let g = p.terms().iter().fold(m.clone(), |acc, (t, _)| acc.gcd(t));
    Poly::monomial(g, Rational::one())
}

/// Monic GCD of a list, smallest members first; a member the running GCD
/// already divides costs one trial division.
pub fn gcd_many(ps: &[Poly]) -> Poly {
    let mut ps: Vec<&Poly> = ps.iter().filter(|p| !p.is_zero()).collect();
    ps.sort_by_key(|p| p.terms().len());
    let mut acc = Poly::zero();
    for p in ps {
        if !acc.is_zero() && p.div_exact(&acc).is_some() {
            continue;
        }
        acc = gcd(&acc, p);
        if acc.is_one() {
            break;
        }
    }
    acc
}

/// GCD of the coefficients of `p` viewed as a polynomial in `v`.
fn content_in(p: &Poly, v: usize) -> Poly {
    if p.degree_in(v) == 0 {
        return p.monic();
    }
    gcd_many(&p.coefficients_in(v))
}

fn primitive_part_in(p: &Poly, v: usize) -> Poly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides").monic()
}

fn leading_in(p: &Poly, v: usize) -> Poly {
    let mut cs = p.coefficients_in(v);
    cs.pop().unwrap_or_else(Poly::zero)
}

/// Pseudo-remainder of `a` by `b` in the variable `v`.
fn prem(a: &Poly, b: &Poly, v: usize) -> Poly {
    let db = b.degree_in(v);
    let lb = leading_in(b, v);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = leading_in(&r, v);
        let shift = Monomial::from_exponents({
            let mut e = alloc::vec![0; v + 1];
            e[v] = dr - db;
            e
        });
        r = r.mul(&lb).sub(&lr.mul(b).mul_term(&shift, &Rational::one()));
    }
    r
}

fn primitive_prs(mut a: Poly, mut b: Poly, v: usize) -> Poly {
    if a.degree_in(v) < b.degree_in(v) {
        core::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = prem(&a, &b, v);
        if r.is_zero() {
            return b;
        }
        if r.degree_in(v) == 0 {
            return Poly::one();
        }
        a = b;
        b = primitive_part_in(&r, v);
    }
}
