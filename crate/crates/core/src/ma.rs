//! Monge-Ampère systems `I = {θ, dθ, Ω}` on a 5-dimensional chart.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::forms::{clear_denominators, DiffForm, Pivots};
use crate::pfaff::PfaffianSystem;
use crate::scalar::{int, Chart, ScalarExpr};

/// Coefficients of `A(z_xx z_yy − z_xy²) + B z_xx + 2C z_xy + D z_yy + E = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MACoefficients {
    pub a: ScalarExpr,
    pub b: ScalarExpr,
    pub c: ScalarExpr,
    pub d: ScalarExpr,
    pub e: ScalarExpr,
}

impl MACoefficients {
    pub fn new(a: ScalarExpr, b: ScalarExpr, c: ScalarExpr, d: ScalarExpr, e: ScalarExpr) -> Self {
        MACoefficients { a, b, c, d, e }
    }

    pub fn from_ints(v: [i64; 5]) -> Self {
        let [a, b, c, d, e] = v.map(int);
        MACoefficients { a, b, c, d, e }
    }

    pub fn as_array(&self) -> [&ScalarExpr; 5] {
        [&self.a, &self.b, &self.c, &self.d, &self.e]
    }

    pub fn all_zero(&self) -> bool {
        self.as_array().iter().all(|c| c.is_zero())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MongeAmpereSystem {
    chart: Chart,
    theta: DiffForm,
    omega: DiffForm,
    source: Option<MACoefficients>,
}

/// `c2 λ² + c1 λ + c0`, the top-degree coefficient of `(Ω + λdθ)²` mod θ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadratic {
    pub c2: ScalarExpr,
    pub c1: ScalarExpr,
    pub c0: ScalarExpr,
}

impl Quadratic {
    pub fn discriminant(&self) -> ScalarExpr {
        &self.c1 * &self.c1 - int(4) * &self.c2 * &self.c0
    }

    pub fn eval(&self, lambda: &ScalarExpr) -> ScalarExpr {
        &(&self.c2 * &(lambda * lambda)) + &(&(&self.c1 * lambda) + &self.c0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Parabolic,
    Hyperbolic,
    Elliptic,
    /// Sign and squareness of the discriminant are not decidable in the field.
    Indefinite,
    Degenerate,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Parabolic => "parabolic",
            Kind::Hyperbolic => "hyperbolic",
            Kind::Elliptic => "elliptic",
            Kind::Indefinite => "indefinite",
            Kind::Degenerate => "degenerate",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub quadratic: Quadratic,
    pub discriminant: ScalarExpr,
    pub kind: Kind,
    /// Roots in the rational function field, largest first.
    pub roots: Vec<ScalarExpr>,
}

/// `J = {θ, ω¹, ω²}` for one decomposable representative `Ω + λdθ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicSystem {
    pub lambda: ScalarExpr,
    /// Exact factors: `ω¹ ∧ ω² = (Ω + λdθ) mod θ`.
    pub omega1: DiffForm,
    pub omega2: DiffForm,
    /// `θ` and the factors cleared to polynomial form.
    pub system: PfaffianSystem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    TheoremApplies,
    PropositionApplies,
    NotCovered,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::TheoremApplies => "Theorem applies",
            Verdict::PropositionApplies => "Proposition applies (exceptional manifolds possible)",
            Verdict::NotCovered => "Neither applies (hypotheses fail)",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    pub lambda: ScalarExpr,
    pub integrable: bool,
    /// `dθ ≡ 0 mod J`.
    pub assumption1: bool,
    /// `θ ∧ dθ ∧ ω¹ ∧ ω²` is not identically zero.
    pub assumption2: bool,
    /// The 5-form `θ ∧ dθ ∧ ω¹ ∧ ω²`.
    pub five_form: DiffForm,
    pub verdict: Verdict,
}

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;
const P: usize = 3;
const Q: usize = 4;

impl MongeAmpereSystem {
    /// Builds `θ = dz − p dx − q dy` and
    /// `Ω = A dp∧dq + B dp∧dy + C(dx∧dp + dq∧dy) + D dx∧dq + E dx∧dy`,
    /// reading the chart's five coordinates in the roles `x, y, z, p, q`.
    pub fn from_equation(chart: &Chart, coefficients: MACoefficients) -> Result<Self> {
        if chart.len() != 5 {
            return Err(Error::NotMongeAmpere(format!("chart has {} coordinates, need 5", chart.len())));
        }
        if coefficients.all_zero() {
            return Err(Error::NotMongeAmpere("all coefficients vanish".into()));
        }
        let d = |i| DiffForm::differential(chart, i);
        let theta = &(&d(Z) - &d(X).scale(&ScalarExpr::var(P))) - &d(Y).scale(&ScalarExpr::var(Q));
        let mc = &coefficients;
        let omega = [
            d(P).wedge(&d(Q)).scale(&mc.a),
            d(P).wedge(&d(Y)).scale(&mc.b),
            (&d(X).wedge(&d(P)) + &d(Q).wedge(&d(Y))).scale(&mc.c),
            d(X).wedge(&d(Q)).scale(&mc.d),
            d(X).wedge(&d(Y)).scale(&mc.e),
        ]
        .iter()
        .fold(DiffForm::zero(chart, 2), |acc, t| &acc + t);
        let mut system = MongeAmpereSystem::from_forms(theta, omega)?;
        system.source = Some(coefficients);
        Ok(system)
    }

    /// Validates the contact condition and independence of `Ω, dθ` mod θ.
    pub fn from_forms(theta: DiffForm, omega: DiffForm) -> Result<Self> {
        let chart = theta.chart().clone();
        if theta.degree() != 1 || omega.degree() != 2 || omega.chart() != &chart {
            return Err(Error::DegreeMismatch("need a 1-form θ and a 2-form Ω on one chart".into()));
        }
        if chart.len() != 5 {
            return Err(Error::NotMongeAmpere(format!("chart has {} coordinates, need 5", chart.len())));
        }
        let dtheta = theta.d();
        if theta.wedge(&dtheta).wedge(&dtheta).is_zero() {
            return Err(Error::NotMongeAmpere("θ∧(dθ)² = 0".into()));
        }
        let pivots = Pivots::new(&chart, core::slice::from_ref(&theta))?;
        let om = omega.reduce_mod(&pivots);
        let dt = dtheta.reduce_mod(&pivots);
        let free: Vec<usize> = (0..5).filter(|i| !pivots.coordinates().contains(i)).collect();
        let pairs: Vec<[usize; 2]> =
            (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))).map(|(a, b)| [free[a], free[b]]).collect();
        let m = vec![
            pairs.iter().map(|ij| om.coefficient(ij)).collect::<Vec<_>>(),
            pairs.iter().map(|ij| dt.coefficient(ij)).collect::<Vec<_>>(),
        ];
        if crate::scalar::linalg::rank(&m) < 2 {
            return Err(Error::NotMongeAmpere("Ω and dθ are dependent modulo θ".into()));
        }
        Ok(MongeAmpereSystem { chart, theta, omega, source: None })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn theta(&self) -> &DiffForm {
        &self.theta
    }

    pub fn dtheta(&self) -> DiffForm {
        self.theta.d()
    }

    pub fn omega(&self) -> &DiffForm {
        &self.omega
    }

    pub fn source(&self) -> Option<&MACoefficients> {
        self.source.as_ref()
    }

    pub fn theta_pivots(&self) -> Pivots {
        Pivots::new(&self.chart, core::slice::from_ref(&self.theta)).expect("θ is nonzero")
    }

    /// Reduces modulo θ and reads the single top-degree coefficient.
    fn top_coefficient(&self, four_form: &DiffForm, pivots: &Pivots) -> ScalarExpr {
        let free: Vec<usize> = (0..5).filter(|i| !pivots.coordinates().contains(i)).collect();
        four_form.reduce_mod(pivots).coefficient(&free)
    }

    pub fn characteristic_quadratic(&self) -> Quadratic {
        let pivots = self.theta_pivots();
        let om = self.omega.reduce_mod(&pivots);
        let dt = self.dtheta().reduce_mod(&pivots);
        Quadratic {
            c2: self.top_coefficient(&dt.wedge(&dt), &pivots),
            c1: int(2) * self.top_coefficient(&om.wedge(&dt), &pivots),
            c0: self.top_coefficient(&om.wedge(&om), &pivots),
        }
    }

    pub fn classify(&self) -> Classification {
        let quadratic = self.characteristic_quadratic();
        let discriminant = quadratic.discriminant();
        let Quadratic { c2, c1, c0 } = &quadratic;
        let (kind, mut roots) = if c2.is_zero() {
            let roots = if c1.is_zero() { vec![] } else { vec![(-c0).div(c1).expect("c1 ≠ 0")] };
            (Kind::Degenerate, roots)
        } else {
            let two_c2 = int(2) * c2;
            if discriminant.is_zero() {
                (Kind::Parabolic, vec![(-c1).div(&two_c2).expect("c2 ≠ 0")])
            } else if let Some(s) = discriminant.sqrt() {
                let plus = (&(-c1) + &s).div(&two_c2).expect("c2 ≠ 0");
                let minus = (&(-c1) - &s).div(&two_c2).expect("c2 ≠ 0");
                (Kind::Hyperbolic, vec![plus, minus])
            } else if (-&discriminant).sqrt().is_some() {
                (Kind::Elliptic, vec![])
            } else {
                (Kind::Indefinite, vec![])
            }
        };
        roots.sort_by(|a, b| b.cmp(a));
        Classification { quadratic, discriminant, kind, roots }
    }

    /// One system for a parabolic system, two for a hyperbolic one.
    pub fn characteristic_systems(&self) -> Result<Vec<CharacteristicSystem>> {
        let cls = self.classify();
        match cls.kind {
            Kind::Parabolic | Kind::Hyperbolic => {}
            Kind::Elliptic => {
                return Err(Error::Unsupported("elliptic systems have no real characteristic factors".into()))
            }
            Kind::Indefinite => return Err(Error::RootNotInField),
            Kind::Degenerate => return Err(Error::Unsupported("degenerate λ-quadratic".into())),
        }
        let pivots = self.theta_pivots();
        let dtheta = self.dtheta();
        cls.roots
            .into_iter()
            .map(|lambda| {
                let rep = (&self.omega + &dtheta.scale(&lambda)).reduce_mod(&pivots);
                let (omega1, omega2) = rep.factor_decomposable()?;
                if omega1.wedge(&omega2) != rep {
                    return Err(Error::IdentityFailed("ω¹∧ω² ≠ Ω + λdθ mod θ".into()));
                }
                let system = PfaffianSystem::new(
                    &self.chart,
                    vec![self.theta.clone(), clear_denominators(&omega1).0, clear_denominators(&omega2).0],
                )?;
                Ok(CharacteristicSystem { lambda, omega1, omega2, system })
            })
            .collect()
    }

    /// Evaluates the hypotheses of the non-integrable theorem for one
    /// characteristic system. Assumption 2 uses the decomposable
    /// representative `ω¹∧ω²`, not the raw `Ω`.
    pub fn check_theorem_hypotheses(&self, cs: &CharacteristicSystem) -> Result<HypothesisReport> {
        let integrable = cs.system.is_integrable()?;
        let dtheta = self.dtheta();
        let assumption1 = dtheta.reduce_mod_forms(cs.system.generators())?.is_zero();
        let five_form = self.theta.wedge(&dtheta).wedge(&cs.omega1.wedge(&cs.omega2));
        let assumption2 = !five_form.is_zero();
        let verdict = if integrable {
            Verdict::PropositionApplies
        } else if assumption1 || assumption2 {
            Verdict::TheoremApplies
        } else {
            Verdict::NotCovered
        };
        Ok(HypothesisReport { lambda: cs.lambda.clone(), integrable, assumption1, assumption2, five_form, verdict })
    }
}
