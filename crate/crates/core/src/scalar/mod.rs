//! Exact rational functions over a named coordinate chart.

pub mod gcd;
pub mod linalg;
pub mod poly;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
pub use poly::{Monomial, Poly, Rational};

/// Differential tokens reserved by the input grammar; no coordinate may use these names.
pub const RESERVED_DIFFERENTIALS: [&str; 12] = ["dx", "dy", "dz", "dp", "dq", "dX", "dY", "dZ", "dP", "dQ", "du", "dv"];

/// Largest chart the form kernel supports (index subsets are bitmasks).
pub const MAX_CHART: usize = 32;

/// An ordered list of distinct coordinate names.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Chart(Arc<[String]>);

impl Chart {
    pub fn new<I, S>(names: I) -> Result<Chart>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidChart("no coordinates".into()));
        }
        if names.len() > MAX_CHART {
            return Err(Error::InvalidChart(format!("more than {MAX_CHART} coordinates")));
        }
        for (i, n) in names.iter().enumerate() {
            let mut chars = n.chars();
            let ok_start = chars.next().is_some_and(|c| c.is_alphabetic() || c == '_');
            if !ok_start || !chars.all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::InvalidChart(format!("`{n}` is not an identifier")));
            }
            if RESERVED_DIFFERENTIALS.contains(&n.as_str()) {
                return Err(Error::InvalidChart(format!("`{n}` is a reserved differential")));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidChart(format!("duplicate coordinate `{n}`")));
            }
        }
        Ok(Chart(names.into()))
    }

    /// `x, y, z, p, q`
    pub fn base() -> Chart {
        Chart::new(["x", "y", "z", "p", "q"]).expect("valid chart")
    }

    /// `X, Y, Z, P, Q`
    pub fn normal() -> Chart {
        Chart::new(["X", "Y", "Z", "P", "Q"]).expect("valid chart")
    }

    /// `u, v`
    pub fn surface() -> Chart {
        Chart::new(["u", "v"]).expect("valid chart")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.0.iter().position(|n| n == name).ok_or_else(|| Error::UnknownCoordinate(name.into()))
    }

    pub fn var(&self, name: &str) -> Result<ScalarExpr> {
        self.index(name).map(ScalarExpr::var)
    }

    /// All coordinate functions, in chart order.
    pub fn vars(&self) -> Vec<ScalarExpr> {
        (0..self.len()).map(ScalarExpr::var).collect()
    }

    pub fn partial(&self, e: &ScalarExpr, coordinate: &str) -> Result<ScalarExpr> {
        Ok(e.partial(self.index(coordinate)?))
    }

    /// Simultaneous substitution; `sigma` must assign every coordinate of this chart.
    pub fn substitute(&self, e: &ScalarExpr, sigma: &BTreeMap<String, ScalarExpr>) -> Result<ScalarExpr> {
        let images = self
            .0
            .iter()
            .map(|n| sigma.get(n).cloned().ok_or_else(|| Error::MissingAssignment(n.clone())))
            .collect::<Result<Vec<_>>>()?;
        e.substitute(&images)
    }

    pub fn eval_at(&self, e: &ScalarExpr, point: &BTreeMap<String, Rational>) -> Result<Rational> {
        let values = self
            .0
            .iter()
            .map(|n| point.get(n).cloned().ok_or_else(|| Error::MissingAssignment(n.clone())))
            .collect::<Result<Vec<_>>>()?;
        e.eval(&values)
    }
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// A rational function `numerator / denominator` in lowest terms with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScalarExpr {
    num: Poly,
    den: Poly,
}

impl ScalarExpr {
    /// Brings `num / den` to canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(ScalarExpr::zero());
        }
        if let Some(c) = den.constant_value() {
            return Ok(ScalarExpr { num: num.scale(&c.recip()), den: Poly::one() });
        }
        let g = gcd::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.lc().recip();
        Ok(ScalarExpr { num: num.scale(&lc), den: den.scale(&lc) })
    }

    /// `num / den` already in lowest terms; only the denominator is made monic.
    fn from_coprime(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return ScalarExpr::zero();
        }
        let lc = den.lc();
        if lc.is_one() {
            return ScalarExpr { num, den };
        }
        let k = lc.recip();
        ScalarExpr { num: num.scale(&k), den: den.scale(&k) }
    }

    pub fn zero() -> Self {
        ScalarExpr { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        ScalarExpr::from_poly(Poly::one())
    }

    pub fn integer(n: i64) -> Self {
        ScalarExpr::from_poly(Poly::integer(n))
    }

    pub fn rational(q: Rational) -> Self {
        ScalarExpr::from_poly(Poly::constant(q))
    }

    pub fn var(i: usize) -> Self {
        ScalarExpr::from_poly(Poly::var(i))
    }

    pub fn from_poly(p: Poly) -> Self {
        ScalarExpr { num: p, den: Poly::one() }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars().max(self.den.nvars())
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.num.uses_var(v) || self.den.uses_var(v)
    }

    pub fn inv(&self) -> Result<Self> {
        ScalarExpr::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &ScalarExpr) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv = ScalarExpr::from_coprime(rhs.den.clone(), rhs.num.clone());
        Ok(self * &inv)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return ScalarExpr::zero();
        }
        ScalarExpr { num: self.num.scale(k), den: self.den.clone() }
    }

    pub fn pow(&self, n: u32) -> Self {
        ScalarExpr { num: self.num.pow(n), den: self.den.pow(n) }
    }

    /// Quotient-rule partial derivative with respect to variable `v`.
    pub fn partial(&self, v: usize) -> Self {
        if !self.uses_var(v) {
            return ScalarExpr::zero();
        }
        if self.den.is_one() {
            return ScalarExpr::from_poly(self.num.partial(v));
        }
        let top = self.num.partial(v).mul(&self.den).sub(&self.num.mul(&self.den.partial(v)));
        ScalarExpr::new(top, self.den.mul(&self.den)).expect("nonzero denominator")
    }

    /// Replaces variable `i` by `images[i]` simultaneously.
    pub fn substitute(&self, images: &[ScalarExpr]) -> Result<Self> {
        let n = self.nvars();
        if n > images.len() {
            return Err(Error::MissingAssignment(format!("#{}", images.len())));
        }
        let num = substitute_poly(&self.num, images);
        let den = substitute_poly(&self.den, images);
        num.div(&den)
    }

    /// Exact evaluation; a vanishing denominator is reported as [`Error::Pole`].
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(Error::Pole);
        }
        Ok(self.num.eval(point) / d)
    }

    /// Renders with the chart's coordinate names in the input grammar's syntax.
    pub fn display<'a>(&'a self, chart: &'a Chart) -> DisplayScalar<'a> {
        DisplayScalar { expr: self, names: chart.names() }
    }

    /// Sign-normalized square root in the field, if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        let n = self.num.sqrt()?;
        let d = self.den.sqrt()?;
        let n = if n.lc().is_negative() { n.neg() } else { n };
        ScalarExpr::new(n, d).ok()
    }
}

fn substitute_poly(p: &Poly, images: &[ScalarExpr]) -> ScalarExpr {
    let mut powers: BTreeMap<(usize, u32), ScalarExpr> = BTreeMap::new();
    let mut acc = ScalarExpr::zero();
    for (m, c) in p.terms() {
        let mut t = ScalarExpr::rational(c.clone());
        for (i, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let pw = powers.entry((i, e)).or_insert_with(|| images[i].pow(e)).clone();
            t = &t * &pw;
        }
        acc = &acc + &t;
    }
    acc
}

impl Default for ScalarExpr {
    fn default() -> Self {
        ScalarExpr::zero()
    }
}

impl Ord for ScalarExpr {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.num.cmp(&other.num).then_with(|| self.den.cmp(&other.den))
    }
}

impl PartialOrd for ScalarExpr {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, rhs: &ScalarExpr) -> ScalarExpr {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let den = self.den.clone();
            if den.is_one() {
                return ScalarExpr::from_poly(self.num.add(&rhs.num));
            }
            return ScalarExpr::new(self.num.add(&rhs.num), den).expect("nonzero denominator");
        }
        // Henrici: only the common part of the denominators can cancel
        let g = gcd::gcd(&self.den, &rhs.den);
        if g.is_one() {
            return ScalarExpr::from_coprime(
                self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
                self.den.mul(&rhs.den),
            );
        }
        let ad = self.den.div_exact(&g).expect("gcd divides");
        let bd = rhs.den.div_exact(&g).expect("gcd divides");
        let t = self.num.mul(&bd).add(&rhs.num.mul(&ad));
        let g2 = gcd::gcd(&t, &g);
        let t = t.div_exact(&g2).expect("gcd divides");
        let rest = g.div_exact(&g2).expect("gcd divides");
        ScalarExpr::from_coprime(t, ad.mul(&bd).mul(&rest))
    }
}

impl Sub for &ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, rhs: &ScalarExpr) -> ScalarExpr {
        self + &(-rhs)
    }
}

impl Mul for &ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, rhs: &ScalarExpr) -> ScalarExpr {
        if self.is_zero() || rhs.is_zero() {
            return ScalarExpr::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return ScalarExpr::from_poly(self.num.mul(&rhs.num));
        }
        // Henrici: cross-cancel, the results are already coprime
        let g1 = gcd::gcd(&self.num, &rhs.den);
        let g2 = gcd::gcd(&rhs.num, &self.den);
        let cut = |p: &Poly, g: &Poly| if g.is_one() { p.clone() } else { p.div_exact(g).expect("gcd divides") };
        ScalarExpr::from_coprime(
            cut(&self.num, &g1).mul(&cut(&rhs.num, &g2)),
            cut(&self.den, &g2).mul(&cut(&rhs.den, &g1)),
        )
    }
}

impl Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        ScalarExpr { num: self.num.neg(), den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for ScalarExpr {
            type Output = ScalarExpr;
            fn $m(self, rhs: ScalarExpr) -> ScalarExpr { (&self).$m(&rhs) }
        }
        impl $tr<&ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $m(self, rhs: &ScalarExpr) -> ScalarExpr { (&self).$m(rhs) }
        }
        impl $tr<ScalarExpr> for &ScalarExpr {
            type Output = ScalarExpr;
            fn $m(self, rhs: ScalarExpr) -> ScalarExpr { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        -&self
    }
}

pub struct DisplayScalar<'a> {
    expr: &'a ScalarExpr,
    names: &'a [String],
}

impl fmt::Display for DisplayScalar<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.expr;
        if e.den.is_one() {
            return write_poly(f, &e.num, self.names);
        }
        if e.num.terms().len() == 1 {
            write_poly(f, &e.num, self.names)?;
        } else {
            f.write_str("(")?;
            write_poly(f, &e.num, self.names)?;
            f.write_str(")")?;
        }
        f.write_str("/")?;
        let single_var = matches!(e.den.terms(), [(m, _)] if m.exponents().iter().filter(|&&x| x > 0).count() == 1);
        if single_var {
            write_poly(f, &e.den, self.names)
        } else {
            f.write_str("(")?;
            write_poly(f, &e.den, self.names)?;
            f.write_str(")")
        }
    }
}

pub(crate) fn rational_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, names: &[String]) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        match names.get(i) {
            Some(n) => f.write_str(n)?,
            None => write!(f, "v{i}")?,
        }
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

fn write_poly(f: &mut fmt::Formatter<'_>, p: &Poly, names: &[String]) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    for (k, (m, c)) in p.terms().iter().enumerate() {
        let abs = c.abs();
        if k == 0 {
            if c.is_negative() {
                f.write_str("-")?;
            }
        } else if c.is_negative() {
            f.write_str(" - ")?;
        } else {
            f.write_str(" + ")?;
        }
        if m.is_one() {
            f.write_str(&rational_string(&abs))?;
        } else {
            if !abs.is_one() {
                write!(f, "{}*", rational_string(&abs))?;
            }
            write_monomial(f, m, names)?;
        }
    }
    Ok(())
}

/// Integer literal helper used across tests and builders.
pub fn int(n: i64) -> ScalarExpr {
    ScalarExpr::integer(n)
}

/// `a / b` as an exact rational constant.
pub fn frac(a: i64, b: i64) -> ScalarExpr {
    ScalarExpr::rational(Rational::new(BigInt::from(a), BigInt::from(b)))
}
