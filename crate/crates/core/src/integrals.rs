//! Intermediate integrals, integral surfaces, contact maps and the
//! normal form of an integrable characteristic system.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::forms::DiffForm;
use crate::ma::{CharacteristicSystem, MongeAmpereSystem};
use crate::pfaff::{Containment, PfaffianSystem};
use crate::scalar::linalg;
use crate::scalar::{Chart, ScalarExpr};

/// A parametrized surface: `components[i]` is the image of target coordinate `i`
/// as a function on the parameter chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceMap {
    params: Chart,
    target: Chart,
    components: Vec<ScalarExpr>,
}

impl SurfaceMap {
    pub fn new(params: &Chart, target: &Chart, components: Vec<ScalarExpr>) -> Result<Self> {
        if components.len() != target.len() {
            return Err(Error::MissingAssignment(format!(
                "{} components for {} coordinates",
                components.len(),
                target.len()
            )));
        }
        let jac: linalg::Matrix =
            (0..params.len()).map(|u| components.iter().map(|c| c.partial(u)).collect()).collect();
        let r = linalg::rank(&jac);
        if r < params.len() {
            return Err(Error::NotImmersed(r));
        }
        Ok(SurfaceMap { params: params.clone(), target: target.clone(), components })
    }

    pub fn params(&self) -> &Chart {
        &self.params
    }

    pub fn target(&self) -> &Chart {
        &self.target
    }

    pub fn components(&self) -> &[ScalarExpr] {
        &self.components
    }

    pub fn pull_form(&self, form: &DiffForm) -> Result<DiffForm> {
        form.pullback(&self.params, &self.components)
    }

    pub fn pull_function(&self, f: &ScalarExpr) -> Result<ScalarExpr> {
        f.substitute(&self.components)
    }
}

/// `dF = aθ + bω¹ + cω²` where `ω¹, ω²` are the cleared generators of `J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralCertificate {
    pub f: ScalarExpr,
    pub a: ScalarExpr,
    pub b: ScalarExpr,
    pub c: ScalarExpr,
    /// Some coefficient is a nonzero constant, so `a, b, c` never vanish together.
    pub nonvanishing: bool,
    pub in_last_derived: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SurfaceVerdict {
    Solution,
    Exceptional,
    NotInK,
}

impl SurfaceVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            SurfaceVerdict::Solution => "solution",
            SurfaceVerdict::Exceptional => "exceptional",
            SurfaceVerdict::NotInK => "not-in-K",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalReport {
    pub surface: SurfaceMap,
    pub pulled_theta: DiffForm,
    pub pulled_dtheta: DiffForm,
    pub pulled_omega: DiffForm,
    pub pulled_f: Option<ScalarExpr>,
    pub pulled_b: Option<ScalarExpr>,
    pub pulled_c: Option<ScalarExpr>,
    /// Pullback of `dx∧dy`.
    pub independence: DiffForm,
    pub verdict: SurfaceVerdict,
}

pub fn verify_intermediate_integral(
    _s: &MongeAmpereSystem,
    cs: &CharacteristicSystem,
    f: &ScalarExpr,
) -> Result<IntegralCertificate> {
    let j = &cs.system;
    if f.is_constant() {
        return Err(Error::VanishingDifferential);
    }
    let coeffs = match j.contains_differential(f)? {
        Containment::Contained(c) => c,
        Containment::Refused { residual } => {
            let chart = j.chart();
            let parts: Vec<String> =
                residual.iter().map(|(w, c)| format!("({})*({})", c.display(chart), w.display())).collect();
            return Err(Error::NotInSystem(parts.join(" + ")));
        }
    };
    let in_last_derived = j.derived_flag()?.last().contains_differential(f)?.is_contained();
    if !in_last_derived {
        return Err(Error::IdentityFailed("dF ∈ J but not in the last derived system".into()));
    }
    let [a, b, c]: [ScalarExpr; 3] =
        coeffs.try_into().map_err(|_| Error::RankMismatch { expected: 3, found: j.rank() })?;
    let nonvanishing = [&a, &b, &c].iter().any(|x| x.is_constant() && !x.is_zero());
    Ok(IntegralCertificate { f: f.clone(), a, b, c, nonvanishing, in_last_derived })
}

/// Pulls the system (and optionally `F` and a certificate) back to a surface.
pub fn check_surface(
    s: &MongeAmpereSystem,
    n: &SurfaceMap,
    f: Option<&ScalarExpr>,
    cert: Option<&IntegralCertificate>,
) -> Result<ExceptionalReport> {
    if n.target() != s.chart() {
        return Err(Error::InvalidChart("surface and system use different charts".into()));
    }
    let pulled_theta = n.pull_form(s.theta())?;
    let pulled_dtheta = n.pull_form(&s.dtheta())?;
    if pulled_dtheta != pulled_theta.d() {
        return Err(Error::IdentityFailed("i*dθ ≠ d(i*θ)".into()));
    }
    let pulled_omega = n.pull_form(s.omega())?;
    let chart = s.chart();
    let independence = n.pull_form(&DiffForm::differential(chart, 0).wedge(&DiffForm::differential(chart, 1)))?;
    let pulled_f = f.map(|f| n.pull_function(f)).transpose()?;
    let verdict = if pulled_theta.is_zero() && pulled_omega.is_zero() {
        SurfaceVerdict::Solution
    } else if pulled_theta.is_zero() && pulled_f.as_ref().is_some_and(ScalarExpr::is_zero) {
        SurfaceVerdict::Exceptional
    } else {
        SurfaceVerdict::NotInK
    };
    let (pulled_b, pulled_c) = match cert {
        Some(cert) => (Some(n.pull_function(&cert.b)?), Some(n.pull_function(&cert.c)?)),
        None => (None, None),
    };
    if verdict == SurfaceVerdict::Exceptional {
        let vanish = |x: &Option<ScalarExpr>| x.as_ref().is_none_or(ScalarExpr::is_zero);
        if !vanish(&pulled_b) || !vanish(&pulled_c) {
            return Err(Error::IdentityFailed("i*b and i*c must vanish on an exceptional surface".into()));
        }
    }
    Ok(ExceptionalReport {
        surface: n.clone(),
        pulled_theta,
        pulled_dtheta,
        pulled_omega,
        pulled_f,
        pulled_b,
        pulled_c,
        independence,
        verdict,
    })
}

/// `mu` with `alpha = mu·beta`, if it exists.
fn proportionality(alpha: &DiffForm, beta: &DiffForm) -> Option<ScalarExpr> {
    let (idx, b) = beta.terms().into_iter().next()?;
    let mu = alpha.coefficient(&idx).div(b).ok()?;
    (&beta.scale(&mu) == alpha).then_some(mu)
}

/// A map from `source` to a 5-dimensional target; `components[i]` is the
/// pullback of target coordinate `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContactMap {
    pub source: Chart,
    pub components: Vec<ScalarExpr>,
}

impl ContactMap {
    pub fn new(source: &Chart, components: Vec<ScalarExpr>) -> Self {
        ContactMap { source: source.clone(), components }
    }

    pub fn identity(chart: &Chart) -> Self {
        ContactMap::new(chart, chart.vars())
    }

    /// `other ∘ self`: first `self`, then `other` (whose source is this target).
    pub fn then(&self, other: &ContactMap) -> Result<ContactMap> {
        let components = other.components.iter().map(|c| c.substitute(&self.components)).collect::<Result<Vec<_>>>()?;
        Ok(ContactMap::new(&self.source, components))
    }

    pub fn pull(&self, form: &DiffForm) -> Result<DiffForm> {
        form.pullback(&self.source, &self.components)
    }
}

/// Returns `mu` with `m*(target_theta) = mu·source_theta`.
pub fn verify_contact_map(m: &ContactMap, source_theta: &DiffForm, target_theta: &DiffForm) -> Result<ScalarExpr> {
    let pulled = m.pull(target_theta)?;
    match proportionality(&pulled, source_theta) {
        Some(mu) if !mu.is_zero() => Ok(mu),
        _ => Err(Error::NotContact(format!("{}", pulled.display()))),
    }
}

/// Pulls `target` back along `m` and validates the result.
pub fn transport_system(m: &ContactMap, target: &MongeAmpereSystem) -> Result<MongeAmpereSystem> {
    MongeAmpereSystem::from_forms(m.pull(target.theta())?, m.pull(target.omega())?)
}

/// User-supplied functions for the normal form. `x..q` live on the system's
/// chart; `f` lives on [`Chart::normal`] and may use only `X, Y, Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormData {
    pub x: ScalarExpr,
    pub y: ScalarExpr,
    pub z: ScalarExpr,
    pub p: ScalarExpr,
    pub q: ScalarExpr,
    pub f: ScalarExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    /// `dZ − P dX − Q dY = kappa·θ`.
    pub kappa: ScalarExpr,
    pub f_z: ScalarExpr,
    /// `(x̃, ỹ, z̃, p̃, q̃)` on the system's chart.
    pub coordinates: [ScalarExpr; 5],
    /// `z̃ = p̃ = q̃ = 0`.
    pub exceptional: [ScalarExpr; 3],
}

impl NormalForm {
    /// The map to the new coordinates; it is contact with factor `f_z·kappa`.
    pub fn contact_map(&self, chart: &Chart) -> ContactMap {
        ContactMap::new(chart, self.coordinates.to_vec())
    }

    /// `mu` with `ω¹∧ω² ≡ mu·dX∧dY mod θ`.
    pub fn omega_factor(&self, s: &MongeAmpereSystem, cs: &CharacteristicSystem) -> Result<ScalarExpr> {
        let chart = s.chart();
        let pivots = s.theta_pivots();
        let d = |f: &ScalarExpr| DiffForm::function(chart, f.clone()).d();
        let dxy = d(&self.coordinates[0]).wedge(&d(&self.coordinates[1]));
        let lhs = cs.omega1.wedge(&cs.omega2).reduce_mod(&pivots);
        proportionality(&lhs, &dxy.reduce_mod(&pivots))
            .ok_or_else(|| Error::IdentityFailed("Ω is not a multiple of dX∧dY mod θ".into()))
    }
}

pub fn verify_normal_form(j: &PfaffianSystem, nf: &NormalFormData) -> Result<NormalForm> {
    if !j.is_integrable()? {
        return Err(Error::NotIntegrable);
    }
    let chart = j.chart();
    let d = |f: &ScalarExpr| DiffForm::function(chart, f.clone()).d();
    let span = PfaffianSystem::new(chart, vec![d(&nf.x), d(&nf.y), d(&nf.z)])
        .map_err(|_| Error::IdentityFailed("dX, dY, dZ are dependent".into()))?;
    if !span.same_span(j) {
        return Err(Error::IdentityFailed("span{dX, dY, dZ} ≠ J".into()));
    }
    let theta = &j.generators()[0];
    let pfaff = &(&d(&nf.z) - &d(&nf.x).scale(&nf.p)) - &d(&nf.y).scale(&nf.q);
    let kappa = proportionality(&pfaff, theta)
        .filter(|k| !k.is_zero())
        .ok_or_else(|| Error::IdentityFailed("dZ − P dX − Q dY is not a multiple of θ".into()))?;
    if nf.f.uses_var(3) || nf.f.uses_var(4) {
        return Err(Error::IdentityFailed("F may depend on X, Y, Z only".into()));
    }
    let images = [nf.x.clone(), nf.y.clone(), nf.z.clone(), nf.p.clone(), nf.q.clone()];
    let at = |e: ScalarExpr| e.substitute(&images);
    let f_x = at(nf.f.partial(0))?;
    let f_y = at(nf.f.partial(1))?;
    let f_z = at(nf.f.partial(2))?;
    if f_z.is_zero() {
        return Err(Error::IdentityFailed("F_Z vanishes identically".into()));
    }
    let zt = at(nf.f.clone())?;
    let pt = &f_x + &(&nf.p * &f_z);
    let qt = &f_y + &(&nf.q * &f_z);
    let lhs = &(&d(&zt) - &d(&nf.x).scale(&pt)) - &d(&nf.y).scale(&qt);
    if lhs != theta.scale(&(&f_z * &kappa)) {
        return Err(Error::IdentityFailed("dz̃ − p̃ dx̃ − q̃ dỹ ≠ F_Z·θ".into()));
    }
    Ok(NormalForm {
        kappa,
        f_z,
        coordinates: [nf.x.clone(), nf.y.clone(), zt.clone(), pt.clone(), qt.clone()],
        exceptional: [zt, pt, qt],
    })
}
