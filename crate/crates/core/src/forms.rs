//! Homogeneous differential forms with rational-function coefficients.
//!
//! A `k`-form stores one coefficient per strictly increasing index set of
//! size `k`, encoded as a bitmask over the chart; every permutation sign is
//! resolved on insertion, so two forms are equal iff their term maps are.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::linalg::{self, Matrix};
use crate::scalar::{Chart, Poly, ScalarExpr};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiffForm {
    chart: Chart,
    degree: usize,
    terms: BTreeMap<u32, ScalarExpr>,
}

fn indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

/// True when `dx_a ∧ dx_b` (each already sorted) needs a minus sign to sort.
fn wedge_is_odd(a: u32, b: u32) -> bool {
    let mut swaps = 0;
    for j in indices(b) {
        swaps += a.checked_shr(j as u32 + 1).unwrap_or(0).count_ones();
    }
    swaps % 2 == 1
}

impl DiffForm {
    pub fn zero(chart: &Chart, degree: usize) -> Self {
        DiffForm { chart: chart.clone(), degree, terms: BTreeMap::new() }
    }

    /// A function viewed as a 0-form.
    pub fn function(chart: &Chart, f: ScalarExpr) -> Self {
        let mut form = DiffForm::zero(chart, 0);
        if !f.is_zero() {
            form.terms.insert(0, f);
        }
        form
    }

    /// The coordinate differential `d(chart[i])`.
    pub fn differential(chart: &Chart, i: usize) -> Self {
        assert!(i < chart.len(), "coordinate index out of range");
        let mut form = DiffForm::zero(chart, 1);
        form.terms.insert(1 << i, ScalarExpr::one());
        form
    }

    pub fn one_form(chart: &Chart, coefficients: &[ScalarExpr]) -> Self {
        assert_eq!(coefficients.len(), chart.len(), "one coefficient per coordinate");
        let mut form = DiffForm::zero(chart, 1);
        for (i, c) in coefficients.iter().enumerate() {
            if !c.is_zero() {
                form.terms.insert(1 << i, c.clone());
            }
        }
        form
    }

    /// Builds a form from unsorted index lists, resolving permutation signs.
    /// Lists with a repeated index contribute nothing.
    pub fn from_terms<I>(chart: &Chart, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, ScalarExpr)>,
    {
        let mut form = DiffForm::zero(chart, degree);
        for (idx, c) in terms {
            if idx.len() != degree {
                return Err(Error::DegreeMismatch(format!("term of degree {} in a {degree}-form", idx.len())));
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= chart.len()) {
                return Err(Error::UnknownCoordinate(format!("#{bad}")));
            }
            let mut mask = 0u32;
            let mut odd = false;
            let mut repeated = false;
            for &i in &idx {
                if mask & (1 << i) != 0 {
                    repeated = true;
                    break;
                }
                odd ^= mask.checked_shr(i as u32 + 1).unwrap_or(0).count_ones() % 2 == 1;
                mask |= 1 << i;
            }
            if repeated {
                continue;
            }
            form.accumulate(mask, if odd { -c } else { c });
        }
        Ok(form)
    }

    fn accumulate(&mut self, mask: u32, c: ScalarExpr) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&mask) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&mask);
        } else {
            self.terms.insert(mask, sum);
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms as (sorted index list, coefficient), in lexicographic index order.
    pub fn terms(&self) -> Vec<(Vec<usize>, &ScalarExpr)> {
        let mut out: Vec<_> = self.terms.iter().map(|(&m, c)| (indices(m), c)).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Coefficient on `d(idx[0]) ∧ … ∧ d(idx[k-1])`, for any ordering of `idx`.
    pub fn coefficient(&self, idx: &[usize]) -> ScalarExpr {
        let probe = DiffForm::from_terms(&self.chart, idx.len(), [(idx.to_vec(), ScalarExpr::one())]);
        match probe {
            Ok(p) if idx.len() == self.degree => match p.terms.iter().next() {
                Some((m, sign)) => self.terms.get(m).map_or_else(ScalarExpr::zero, |c| c * sign),
                None => ScalarExpr::zero(),
            },
            _ => ScalarExpr::zero(),
        }
    }

    /// Coefficients of a 1-form on `dx_0, …, dx_{n-1}`.
    pub fn one_form_coefficients(&self) -> Vec<ScalarExpr> {
        assert_eq!(self.degree, 1, "not a 1-form");
        (0..self.chart.len()).map(|i| self.terms.get(&(1 << i)).cloned().unwrap_or_default()).collect()
    }

    /// The function of a 0-form.
    pub fn as_function(&self) -> Option<ScalarExpr> {
        (self.degree == 0).then(|| self.terms.get(&0).cloned().unwrap_or_default())
    }

    pub fn scale(&self, f: &ScalarExpr) -> Self {
        let mut out = DiffForm::zero(&self.chart, self.degree);
        if f.is_zero() {
            return out;
        }
        for (&m, c) in &self.terms {
            out.terms.insert(m, c * f);
        }
        out
    }

    pub fn try_add(&self, other: &DiffForm) -> Result<Self> {
        if self.chart != other.chart {
            return Err(Error::DegreeMismatch("forms live on different charts".into()));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(format!("mixed degrees {} and {}", self.degree, other.degree)));
        }
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.accumulate(m, c.clone());
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &DiffForm) -> Self {
        assert_eq!(self.chart, other.chart, "wedge of forms on different charts");
        let mut out = DiffForm::zero(&self.chart, self.degree + other.degree);
        for (&a, ca) in &self.terms {
            for (&b, cb) in &other.terms {
                if a & b != 0 {
                    continue;
                }
                let c = ca * cb;
                out.accumulate(a | b, if wedge_is_odd(a, b) { -c } else { c });
            }
        }
        out
    }

    /// Exterior derivative.
    pub fn d(&self) -> Self {
        let n = self.chart.len();
        let mut out = DiffForm::zero(&self.chart, self.degree + 1);
        for (&m, f) in &self.terms {
            for c in 0..n {
                if m & (1 << c) != 0 || !f.uses_var(c) {
                    continue;
                }
                let df = f.partial(c);
                let odd = (m & ((1u32 << c) - 1)).count_ones() % 2 == 1;
                out.accumulate(m | (1 << c), if odd { -df } else { df });
            }
        }
        out
    }

    /// Replaces each `dx_i` by the 1-form `images[i]`, keeping coefficients.
    pub fn substitute_differentials(&self, images: &[DiffForm]) -> Self {
        assert_eq!(images.len(), self.chart.len(), "one image per coordinate");
        let target = images.first().map_or(&self.chart, |f| &f.chart);
        let mut out = DiffForm::zero(target, self.degree);
        for (&m, c) in &self.terms {
            let mut acc = DiffForm::function(target, c.clone());
            for i in indices(m) {
                acc = acc.wedge(&images[i]);
                if acc.is_zero() {
                    break;
                }
            }
            for (mm, cc) in acc.terms {
                out.accumulate(mm, cc);
            }
        }
        out
    }

    /// Pulls back along the map sending source coordinate `i` to `images[i]`
    /// (functions on `target`).
    pub fn pullback(&self, target: &Chart, images: &[ScalarExpr]) -> Result<Self> {
        if images.len() != self.chart.len() {
            return Err(Error::MissingAssignment(format!(
                "{} images for {} coordinates",
                images.len(),
                self.chart.len()
            )));
        }
        let differentials: Vec<DiffForm> = images.iter().map(|f| DiffForm::function(target, f.clone()).d()).collect();
        let mut out = DiffForm::zero(target, self.degree);
        for (&m, c) in &self.terms {
            let mut acc = DiffForm::function(target, c.substitute(images)?);
            for i in indices(m) {
                acc = acc.wedge(&differentials[i]);
                if acc.is_zero() {
                    break;
                }
            }
            for (mm, cc) in acc.terms {
                out.accumulate(mm, cc);
            }
        }
        Ok(out)
    }

    /// Rewrites the form with every pivot differential eliminated.
    pub fn reduce_mod(&self, pivots: &Pivots) -> Self {
        assert_eq!(self.chart, pivots.chart, "pivots on a different chart");
        if pivots.solved.is_empty() {
            return self.clone();
        }
        let mut images: Vec<DiffForm> = (0..self.chart.len()).map(|i| DiffForm::differential(&self.chart, i)).collect();
        for (k, e) in &pivots.solved {
            images[*k] = e.clone();
        }
        self.substitute_differentials(&images)
    }

    /// `reduce_mod` with pivots chosen by [`Pivots::new`].
    pub fn reduce_mod_forms(&self, forms: &[DiffForm]) -> Result<Self> {
        Ok(self.reduce_mod(&Pivots::new(&self.chart, forms)?))
    }

    /// Whether a 2-form satisfies `w ∧ w = 0`.
    pub fn is_decomposable(&self) -> Result<bool> {
        if self.degree != 2 {
            return Err(Error::DegreeMismatch(format!("expected a 2-form, got degree {}", self.degree)));
        }
        Ok(self.wedge(self).is_zero())
    }

    /// Splits a decomposable 2-form as `ω¹ ∧ ω²`.
    ///
    /// With `c_ij` the first nonzero coefficient in lexicographic pair order,
    /// `ω¹ = (1/c_ij) Σ_k c_kj dx_k` and `ω² = Σ_k c_ik dx_k` (antisymmetric
    /// extension of the coefficients). The product is checked before returning.
    pub fn factor_decomposable(&self) -> Result<(DiffForm, DiffForm)> {
        if !self.is_decomposable()? {
            return Err(Error::NotDecomposable);
        }
        let n = self.chart.len();
        let entry = |i: usize, j: usize| -> ScalarExpr {
            if i == j {
                ScalarExpr::zero()
            } else {
                self.coefficient(&[i, j])
            }
        };
        let (i, j) = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !entry(i, j).is_zero())
            .ok_or(Error::ZeroForm)?;
        let pivot_inv = entry(i, j).inv()?;
        let first: Vec<ScalarExpr> = (0..n).map(|k| &entry(k, j) * &pivot_inv).collect();
        let second: Vec<ScalarExpr> = (0..n).map(|k| entry(i, k)).collect();
        let w1 = DiffForm::one_form(&self.chart, &first);
        let w2 = DiffForm::one_form(&self.chart, &second);
        if &w1.wedge(&w2) != self {
            return Err(Error::NotDecomposable);
        }
        Ok((w1, w2))
    }

    /// Renders in the input grammar (`coeff*dx/\dy + …`).
    pub fn display(&self) -> DisplayForm<'_> {
        DisplayForm(self)
    }
}

impl fmt::Debug for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffForm<{}>({})", self.degree, self.display())
    }
}

impl Add for &DiffForm {
    type Output = DiffForm;
    fn add(self, rhs: &DiffForm) -> DiffForm {
        self.try_add(rhs).expect("forms of equal degree on one chart")
    }
}

impl Sub for &DiffForm {
    type Output = DiffForm;
    fn sub(self, rhs: &DiffForm) -> DiffForm {
        self.try_add(&-rhs).expect("forms of equal degree on one chart")
    }
}

impl Neg for &DiffForm {
    type Output = DiffForm;
    fn neg(self) -> DiffForm {
        DiffForm {
            chart: self.chart.clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(&m, c)| (m, -c)).collect(),
        }
    }
}

impl Add for DiffForm {
    type Output = DiffForm;
    fn add(self, rhs: DiffForm) -> DiffForm {
        &self + &rhs
    }
}

impl Sub for DiffForm {
    type Output = DiffForm;
    fn sub(self, rhs: DiffForm) -> DiffForm {
        &self - &rhs
    }
}

impl Neg for DiffForm {
    type Output = DiffForm;
    fn neg(self) -> DiffForm {
        -&self
    }
}

pub struct DisplayForm<'a>(&'a DiffForm);

impl fmt::Display for DisplayForm<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let form = self.0;
        let chart = &form.chart;
        let wedge_of = |idx: &[usize]| -> String {
            idx.iter().map(|&i| format!("d{}", chart.name(i))).collect::<Vec<_>>().join("/\\")
        };
        if form.degree == 0 {
            return write!(f, "{}", form.as_function().unwrap_or_default().display(chart));
        }
        if form.is_zero() {
            let idx: Vec<usize> = (0..form.degree.min(chart.len())).collect();
            return write!(f, "0*{}", wedge_of(&idx));
        }
        for (k, (idx, c)) in form.terms().into_iter().enumerate() {
            let basis = wedge_of(&idx);
            let simple = c.is_polynomial() && c.numer().terms().len() == 1;
            let negative = simple && c.numer().lc() < num_traits::Zero::zero();
            let shown = if negative { -c } else { c.clone() };
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if shown.is_one() {
                f.write_str(&basis)?;
            } else if simple {
                write!(f, "{}*{}", shown.display(chart), basis)?;
            } else {
                write!(f, "({})*{}", shown.display(chart), basis)?;
            }
        }
        Ok(())
    }
}

/// Linear relations `dx_k = expr` used to reduce forms modulo 1-forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pivots {
    chart: Chart,
    /// `(k, e)`: `dx_k ≡ e` modulo the generators; no `e` mentions a pivot differential.
    solved: Vec<(usize, DiffForm)>,
}

impl Pivots {
    /// Solves the generators in order. Each takes as pivot the first
    /// coordinate (chart order) whose remaining coefficient is a nonzero
    /// constant, else the first with a nonzero coefficient; for
    /// `dz - p dx - q dy` that is `dz`.
    pub fn new(chart: &Chart, forms: &[DiffForm]) -> Result<Self> {
        Pivots::build(chart, forms, None)
    }

    /// Solves with explicitly chosen pivot coordinates.
    pub fn with_coordinates(chart: &Chart, forms: &[DiffForm], coords: &[usize]) -> Result<Self> {
        if coords.len() != forms.len() {
            return Err(Error::DegreeMismatch("one pivot coordinate per generator".into()));
        }
        Pivots::build(chart, forms, Some(coords))
    }

    fn build(chart: &Chart, forms: &[DiffForm], coords: Option<&[usize]>) -> Result<Self> {
        let mut pivots = Pivots { chart: chart.clone(), solved: Vec::new() };
        for (g, form) in forms.iter().enumerate() {
            if form.degree != 1 || &form.chart != chart {
                return Err(Error::DegreeMismatch("pivots must be 1-forms on the same chart".into()));
            }
            let current = form.reduce_mod(&pivots);
            let coeffs = current.one_form_coefficients();
            let k = match coords {
                Some(cs) => {
                    let k = cs[g];
                    if k >= chart.len() || coeffs[k].is_zero() || pivots.solved.iter().any(|s| s.0 == k) {
                        return Err(Error::NonInvertiblePivot(form.display().to_string()));
                    }
                    k
                }
                None => coeffs
                    .iter()
                    .position(|c| c.is_constant() && !c.is_zero())
                    .or_else(|| coeffs.iter().position(|c| !c.is_zero()))
                    .ok_or_else(|| Error::NonInvertiblePivot(form.display().to_string()))?,
            };
            let inv = coeffs[k].inv()?;
            let mut rest = coeffs.clone();
            rest[k] = ScalarExpr::zero();
            let rest: Vec<ScalarExpr> = rest.iter().map(|c| -(c * &inv)).collect();
            let expr = DiffForm::one_form(chart, &rest);
            let single = Pivots { chart: chart.clone(), solved: vec![(k, expr.clone())] };
            for s in pivots.solved.iter_mut() {
                s.1 = s.1.reduce_mod(&single);
            }
            pivots.solved.push((k, expr));
        }
        Ok(pivots)
    }

    pub fn coordinates(&self) -> Vec<usize> {
        self.solved.iter().map(|s| s.0).collect()
    }

    pub fn solutions(&self) -> &[(usize, DiffForm)] {
        &self.solved
    }
}

/// A basis of 1-forms at the generic point of a chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coframe {
    forms: Vec<DiffForm>,
    matrix: Matrix,
}

fn coefficient_matrix(forms: &[DiffForm]) -> Matrix {
    forms.iter().map(DiffForm::one_form_coefficients).collect()
}

/// Generic rank of a list of 1-forms.
pub fn rank_of(forms: &[DiffForm]) -> usize {
    if forms.is_empty() {
        0
    } else {
        linalg::rank(&coefficient_matrix(forms))
    }
}

impl Coframe {
    pub fn new(forms: Vec<DiffForm>) -> Result<Self> {
        let chart = forms.first().ok_or(Error::SingularCoframe)?.chart.clone();
        if forms.len() != chart.len() || forms.iter().any(|f| f.degree != 1 || f.chart != chart) {
            return Err(Error::SingularCoframe);
        }
        let matrix = coefficient_matrix(&forms);
        if linalg::determinant(&matrix).is_zero() {
            return Err(Error::SingularCoframe);
        }
        Ok(Coframe { forms, matrix })
    }

    /// Appends coordinate differentials, in chart order, that keep the set
    /// independent until it spans.
    pub fn complete(chart: &Chart, partial: &[DiffForm]) -> Result<Self> {
        if partial.iter().any(|f| f.degree != 1 || &f.chart != chart) {
            return Err(Error::DegreeMismatch("coframe members must be 1-forms on the chart".into()));
        }
        if rank_of(partial) < partial.len() {
            return Err(Error::DependentGenerators);
        }
        let mut forms = partial.to_vec();
        let mut r = forms.len();
        for c in 0..chart.len() {
            if r == chart.len() {
                break;
            }
            forms.push(DiffForm::differential(chart, c));
            if rank_of(&forms) > r {
                r += 1;
            } else {
                forms.pop();
            }
        }
        Coframe::new(forms)
    }

    pub fn forms(&self) -> &[DiffForm] {
        &self.forms
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn chart(&self) -> &Chart {
        &self.forms[0].chart
    }

    /// The unique `c` with `alpha = Σ c_i · forms[i]`.
    pub fn coefficients(&self, alpha: &DiffForm) -> Result<Vec<ScalarExpr>> {
        if alpha.degree != 1 || &alpha.chart != self.chart() {
            return Err(Error::DegreeMismatch("expected a 1-form on the coframe's chart".into()));
        }
        linalg::solve(&linalg::transpose(&self.matrix), &alpha.one_form_coefficients())
    }

    /// Labels `w1, …, wn` naming the coframe members in [`Coframe::expand`].
    pub fn frame_chart(&self) -> Chart {
        Chart::new((1..=self.len()).map(|i| format!("w{i}"))).expect("valid labels")
    }

    /// Re-expresses `form` in the wedge basis of the coframe; coordinate `i`
    /// of the result stands for `forms[i]`.
    pub fn expand(&self, form: &DiffForm) -> Result<DiffForm> {
        let frame = self.frame_chart();
        // row c of (Mᵀ)⁻¹ᵀ = column c of (Mᵀ)⁻¹ expresses dx_c in the coframe
        let inv = linalg::inverse(&linalg::transpose(&self.matrix))?;
        let images: Vec<DiffForm> = (0..self.len())
            .map(|c| DiffForm::one_form(&frame, &inv.iter().map(|r| r[c].clone()).collect::<Vec<_>>()))
            .collect();
        Ok(form.substitute_differentials(&images))
    }
}

/// Scales a 1-form to polynomial coefficients with no common factor and
/// integer content 1. The sign makes the first constant coefficient
/// positive (the same slot [`Pivots::new`] would solve for), or failing
/// that the leading coefficient of the first nonzero entry. Also returns the common polynomial factor that was
/// divided out (1 when there was none).
pub fn clear_denominators(alpha: &DiffForm) -> (DiffForm, Poly) {
    let coeffs = alpha.one_form_coefficients();
    let den = coeffs.iter().fold(Poly::one(), |acc, c| crate::scalar::gcd::lcm(&acc, c.denom()));
    let nums: Vec<Poly> =
        coeffs.iter().map(|c| c.numer().mul(&den.div_exact(c.denom()).expect("lcm is a multiple"))).collect();
    let common = nums.iter().fold(Poly::zero(), |acc, p| crate::scalar::gcd::gcd(&acc, p));
    if common.is_zero() {
        return (alpha.clone(), Poly::one());
    }
    let nums: Vec<Poly> = nums.iter().map(|p| p.div_exact(&common).expect("gcd divides")).collect();
    let mut den_lcm = num_bigint::BigInt::from(1);
    let mut num_gcd = num_bigint::BigInt::from(0);
    for (_, c) in nums.iter().flat_map(|p| p.terms()) {
        den_lcm = num_integer::lcm(den_lcm, c.denom().clone());
        num_gcd = num_integer::gcd(num_gcd, c.numer().clone());
    }
    let mut k = crate::scalar::Rational::new(den_lcm, num_gcd);
    let lead = nums
        .iter()
        .find(|p| !p.is_zero() && p.is_constant())
        .or_else(|| nums.iter().find(|p| !p.is_zero()))
        .expect("nonzero form");
    if lead.lc() < num_traits::Zero::zero() {
        k = -k;
    }
    let coeffs: Vec<ScalarExpr> = nums.iter().map(|p| ScalarExpr::from_poly(p.scale(&k))).collect();
    (DiffForm::one_form(&alpha.chart, &coeffs), common)
}
