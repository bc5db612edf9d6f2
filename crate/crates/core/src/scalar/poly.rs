//! Sparse multivariate polynomials over the rationals.
//!
//! Variables are plain indices; the chart that names them lives one level up.
//! Terms are kept in strictly descending graded-lexicographic order with no
//! zero coefficients, so structural equality is polynomial equality.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// Exponent vector with trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(mut e: Vec<u32>) -> Self {
        while e.last() == Some(&0) {
            e.pop();
        }
        Monomial(e)
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        Monomial::from_exponents((0..n).map(|i| self.exponent(i) + other.exponent(i)).collect())
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        if other.0.len() > self.0.len() && other.0[self.0.len()..].iter().any(|&e| e > 0) {
            return None;
        }
        let mut e = Vec::with_capacity(self.0.len());
        for (i, &a) in self.0.iter().enumerate() {
            e.push(a.checked_sub(other.exponent(i))?);
        }
        Some(Monomial::from_exponents(e))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let n = self.0.len().min(other.0.len());
        Monomial::from_exponents((0..n).map(|i| self.0[i].min(other.0[i])).collect())
    }

    fn sqrt(&self) -> Option<Self> {
        if self.0.iter().any(|e| e % 2 != 0) {
            return None;
        }
        Some(Monomial(self.0.iter().map(|e| e / 2).collect()))
    }

    fn with_exponent(&self, i: usize, value: u32) -> Self {
        let mut e = self.0.clone();
        if e.len() <= i {
            e.resize(i + 1, 0);
        }
        e[i] = value;
        Monomial::from_exponents(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            for i in 0..n {
                match self.exponent(i).cmp(&other.exponent(i)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Monomial, Rational)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::monomial(Monomial::one(), c)
    }

    pub fn integer(n: i64) -> Self {
        Poly::constant(Rational::from_integer(BigInt::from(n)))
    }

    pub fn var(i: usize) -> Self {
        Poly::monomial(Monomial::var(i), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    fn from_map(map: BTreeMap<Monomial, Rational>) -> Self {
        Poly { terms: map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect() }
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            *map.entry(m).or_insert_with(Rational::zero) += c;
        }
        Poly::from_map(map)
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn lc(&self) -> Rational {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|t| t.0.degree()).unwrap_or(0)
    }

    /// One past the largest variable index that occurs.
    pub fn nvars(&self) -> usize {
        self.terms.iter().map(|t| t.0 .0.len()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|t| t.0.exponent(v)).max().unwrap_or(0)
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.degree_in(v) > 0
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ma.cmp(mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), cb.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = ca + cb;
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Poly { terms: out }
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    /// Multiplication by a single term keeps the order, so no re-sort is needed.
    pub fn mul_term(&self, m: &Monomial, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(a, c)| (a.mul(m), c * k)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *map.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Poly::from_map(map)
    }

    pub fn pow(&self, mut n: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Coefficients with respect to variable `v`; entry `k` multiplies `v^k`.
    pub fn coefficients_in(&self, v: usize) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let k = m.exponent(v) as usize;
            buckets[k].push((m.with_exponent(v, 0), c.clone()));
        }
        buckets.into_iter().map(Poly::from_terms).collect()
    }

    /// Scales so the leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.terms.first() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        if d.is_constant() {
            return Some(self.scale(&dc.recip()));
        }
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        while let Some((rm, rc)) = rem.leading() {
            let m = rm.div(dm)?;
            let c = rc / dc;
            rem = rem.sub(&d.mul_term(&m, &c));
            quotient.push((m, c));
        }
        // quotient terms were produced in descending order
        Some(Poly { terms: quotient })
    }

    pub fn partial(&self, v: usize) -> Poly {
        Poly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(v);
            if e == 0 {
                None
            } else {
                Some((m.with_exponent(v, e - 1), c * Rational::from_integer(BigInt::from(e))))
            }
        }))
    }

    /// Evaluates at a point; variables beyond the point's length read as zero.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        let zero = Rational::zero();
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(point.get(i).unwrap_or(&zero).clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Rescales to integer coefficients with gcd 1 and positive leading coefficient.
    /// Returns the scaled polynomial and the factor it was multiplied by.
    pub fn integer_primitive(&self) -> (Poly, Rational) {
        if self.is_zero() {
            return (Poly::zero(), Rational::one());
        }
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for (_, c) in &self.terms {
            den = num_integer::lcm(den, c.denom().clone());
            num = num_integer::gcd(num, c.numer().clone());
        }
        let mut k = Rational::new(den, num);
        if self.lc().is_negative() {
            k = -k;
        }
        (self.scale(&k), k)
    }

    /// Exact square root, when the polynomial is a perfect square.
    pub fn sqrt(&self) -> Option<Poly> {
        let Some((lm, lc)) = self.leading() else {
            return Some(Poly::zero());
        };
        let root_m = lm.sqrt()?;
        let root_c = rational_sqrt(lc)?;
        let twice_lead = &root_c + &root_c;
        let mut root = Poly::monomial(root_m.clone(), root_c);
        let mut last = root_m.clone();
        loop {
            let rem = self.sub(&root.mul(&root));
            let Some((m, c)) = rem.leading() else {
                return Some(root);
            };
            let next = m.div(&root_m)?;
            if next >= last {
                return None;
            }
            root = root.add(&Poly::monomial(next.clone(), c / &twice_lead));
            last = next;
        }
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            match a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}
