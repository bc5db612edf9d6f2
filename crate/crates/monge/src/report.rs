//! Runs requested analyses on a [`SystemSpec`] and collects the results.

use std::fmt::Write;

use monge_core::integrals::{
    check_surface, transport_system, verify_contact_map, verify_intermediate_integral, verify_normal_form,
    IntegralCertificate, SurfaceVerdict,
};
use monge_core::ma::{CharacteristicSystem, MongeAmpereSystem, Verdict};
use monge_core::sample::sample;
use monge_core::{Chart, Error, Rational, ScalarExpr};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dsl::{Check, SystemSpec};

/// Exit status of a run, ordered by severity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok = 0,
    Negative = 1,
    ParseError = 2,
    Unsupported = 3,
}

impl Status {
    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Request {
    Classify,
    Characteristics,
    DerivedFlag,
    Hypotheses,
    Integrals,
    Surfaces,
    NormalForm,
    /// The checks listed in the file, or everything when none are.
    Report,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationOut {
    pub kind: String,
    pub c2: String,
    pub c1: String,
    pub c0: String,
    pub discriminant: String,
    pub roots: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacteristicOut {
    pub lambda: String,
    pub omega1: String,
    pub omega2: String,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlagOut {
    pub lambda: String,
    pub dims: Vec<usize>,
    #[serde(rename = "final")]
    pub last: Vec<String>,
    pub excluded: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HypothesesOut {
    pub lambda: String,
    pub integrable: bool,
    pub assumption1: bool,
    pub assumption2: bool,
    pub verdict: String,
    pub five_form: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralOut {
    pub name: String,
    pub f: String,
    pub certified: bool,
    pub lambda: Option<String>,
    pub a: Option<String>,
    pub b: Option<String>,
    pub c: Option<String>,
    pub in_last_derived: bool,
    pub refusal: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SurfaceOut {
    pub name: String,
    pub integral: Option<String>,
    pub verdict: String,
    pub pulled_theta: String,
    pub pulled_dtheta: String,
    pub pulled_omega: String,
    pub pulled_f: Option<String>,
    pub pulled_b: Option<String>,
    pub pulled_c: Option<String>,
    pub independence: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalFormOut {
    pub lambda: String,
    pub passed: bool,
    pub kappa: Option<String>,
    pub f_z: Option<String>,
    pub coordinates: Vec<String>,
    pub exceptional: Vec<String>,
    pub omega_factor: Option<String>,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransportOut {
    pub name: String,
    pub mu: Option<String>,
    pub theta: Option<String>,
    pub omega: Option<String>,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AnalysisReport {
    pub system: String,
    pub classification: Option<ClassificationOut>,
    pub characteristics: Vec<CharacteristicOut>,
    pub flags: Vec<FlagOut>,
    pub hypotheses: Vec<HypothesesOut>,
    pub integrals: Vec<IntegralOut>,
    pub surfaces: Vec<SurfaceOut>,
    pub normal_form: Vec<NormalFormOut>,
    pub transports: Vec<TransportOut>,
    pub warnings: Vec<String>,
    pub errors: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    /// Points per numeric sampling check; 0 disables sampling.
    pub samples: usize,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { samples: monge_core::sample::DEFAULT_SAMPLES, seed: 0 }
    }
}

struct Run<'a> {
    spec: &'a SystemSpec,
    options: Options,
    rng: ChaCha8Rng,
    report: AnalysisReport,
    status: Status,
    system: Option<MongeAmpereSystem>,
    characteristics: Option<Result<Vec<CharacteristicSystem>, Error>>,
    certificates: Vec<(String, IntegralCertificate)>,
}

fn status_of(e: &Error) -> Status {
    match e {
        Error::Unsupported(_) | Error::RootNotInField | Error::NotIntegrable | Error::NotMongeAmpere(_) => {
            Status::Unsupported
        }
        _ => Status::Negative,
    }
}

fn point_text(chart: &Chart, pt: &[Rational]) -> String {
    chart.names().iter().zip(pt).map(|(n, v)| format!("{n} = {v}")).collect::<Vec<_>>().join(", ")
}

impl<'a> Run<'a> {
    fn chart(&self) -> &'a Chart {
        &self.spec.chart
    }

    fn scalar(&self, e: &ScalarExpr) -> String {
        e.display(self.chart()).to_string()
    }

    fn fail(&mut self, status: Status, message: String) {
        self.status = self.status.max(status);
        self.report.errors.push(message);
    }

    /// Warns when sampling finds a point where every expression vanishes.
    fn sample_zero(&mut self, what: &str, exprs: &[ScalarExpr], chart: &Chart) {
        if self.options.samples == 0 || exprs.iter().all(|e| e.is_constant()) {
            return;
        }
        let r = sample(exprs, chart.len(), self.options.samples, &mut self.rng);
        if let Some(pt) = &r.common_zero {
            self.report.warnings.push(format!("{what} vanishes at {}", point_text(chart, pt)));
        }
        if r.samples < self.options.samples {
            self.report
                .warnings
                .push(format!("{what}: only {} of {} sample points were regular", r.samples, self.options.samples));
        }
    }

    /// A certificate for `f` against any characteristic system, without reporting failures.
    fn certificate(&mut self, s: &MongeAmpereSystem, name: &str, f: &ScalarExpr) -> Option<IntegralCertificate> {
        if let Some((_, c)) = self.certificates.iter().find(|(n, _)| n == name) {
            return Some(c.clone());
        }
        let systems = self.characteristics.get_or_insert_with(|| s.characteristic_systems()).as_ref().ok()?;
        systems.iter().find_map(|cs| verify_intermediate_integral(s, cs, f).ok())
    }

    fn characteristic_systems(&mut self) -> Option<Vec<CharacteristicSystem>> {
        let s = self.system.as_ref()?;
        let cached = self.characteristics.get_or_insert_with(|| s.characteristic_systems()).clone();
        match cached {
            Ok(v) => Some(v),
            Err(e) => {
                if !self.report.errors.iter().any(|m| m.starts_with("characteristic systems")) {
                    self.fail(status_of(&e), format!("characteristic systems: {e}"));
                }
                None
            }
        }
    }

    fn classify(&mut self) {
        let Some(s) = &self.system else { return };
        let c = s.classify();
        let out = ClassificationOut {
            kind: c.kind.as_str().into(),
            c2: self.scalar(&c.quadratic.c2),
            c1: self.scalar(&c.quadratic.c1),
            c0: self.scalar(&c.quadratic.c0),
            discriminant: self.scalar(&c.discriminant),
            roots: c.roots.iter().map(|r| self.scalar(r)).collect(),
        };
        if !c.discriminant.is_constant() {
            self.report
                .warnings
                .push(format!("classification is generic: the discriminant {} is not constant", out.discriminant));
        }
        self.report.classification = Some(out);
    }

    fn characteristics(&mut self) {
        let Some(systems) = self.characteristic_systems() else { return };
        self.report.characteristics = systems
            .iter()
            .map(|cs| CharacteristicOut {
                lambda: self.scalar(&cs.lambda),
                omega1: cs.omega1.display().to_string(),
                omega2: cs.omega2.display().to_string(),
                generators: cs.system.generators().iter().map(|g| g.display().to_string()).collect(),
            })
            .collect();
    }

    fn derived_flags(&mut self) {
        let Some(systems) = self.characteristic_systems() else { return };
        for cs in &systems {
            let lambda = self.scalar(&cs.lambda);
            match cs.system.derived_flag() {
                Ok(flag) => {
                    let excluded: Vec<String> = flag.excluded.iter().map(|e| self.scalar(e)).collect();
                    for (e, text) in flag.excluded.iter().zip(&excluded) {
                        self.report.warnings.push(format!("derived flag for λ = {lambda} assumes {text} ≠ 0"));
                        self.sample_zero(&format!("pivot {text}"), std::slice::from_ref(e), self.chart());
                    }
                    self.report.flags.push(FlagOut {
                        lambda,
                        dims: flag.dims.clone(),
                        last: flag.last().generators().iter().map(|g| g.display().to_string()).collect(),
                        excluded,
                    });
                }
                Err(e) => self.fail(status_of(&e), format!("derived flag for λ = {lambda}: {e}")),
            }
        }
    }

    fn hypotheses(&mut self) {
        let Some(s) = self.system.clone() else { return };
        let Some(systems) = self.characteristic_systems() else { return };
        for cs in &systems {
            let lambda = self.scalar(&cs.lambda);
            match s.check_theorem_hypotheses(cs) {
                Ok(h) => {
                    if h.verdict == Verdict::NotCovered {
                        self.status = self.status.max(Status::Negative);
                    }
                    if h.assumption2 {
                        let coeffs: Vec<ScalarExpr> = h.five_form.terms().into_iter().map(|(_, c)| c.clone()).collect();
                        self.sample_zero(&format!("θ∧dθ∧ω¹∧ω² for λ = {lambda}"), &coeffs, self.chart());
                    }
                    self.report.hypotheses.push(HypothesesOut {
                        lambda,
                        integrable: h.integrable,
                        assumption1: h.assumption1,
                        assumption2: h.assumption2,
                        verdict: h.verdict.as_str().into(),
                        five_form: h.five_form.display().to_string(),
                    });
                }
                Err(e) => self.fail(status_of(&e), format!("hypotheses for λ = {lambda}: {e}")),
            }
        }
    }

    fn integral(&mut self, name: &str) {
        let Some(f) = self.spec.integral(name).cloned() else { return };
        let Some(s) = self.system.clone() else { return };
        let Some(systems) = self.characteristic_systems() else { return };
        let mut refusals = Vec::new();
        for cs in &systems {
            match verify_intermediate_integral(&s, cs, &f) {
                Ok(cert) => {
                    if !cert.nonvanishing {
                        let abc = [cert.a.clone(), cert.b.clone(), cert.c.clone()];
                        self.sample_zero(&format!("(a, b, c) for {name}"), &abc, self.chart());
                    }
                    self.report.integrals.push(IntegralOut {
                        name: name.into(),
                        f: self.scalar(&f),
                        certified: true,
                        lambda: Some(self.scalar(&cs.lambda)),
                        a: Some(self.scalar(&cert.a)),
                        b: Some(self.scalar(&cert.b)),
                        c: Some(self.scalar(&cert.c)),
                        in_last_derived: cert.in_last_derived,
                        refusal: None,
                    });
                    self.certificates.push((name.into(), cert));
                    return;
                }
                Err(e) => refusals.push(format!("λ = {}: {e}", self.scalar(&cs.lambda))),
            }
        }
        let refusal = refusals.join("; ");
        self.fail(Status::Negative, format!("integral {name}: {refusal}"));
        self.report.integrals.push(IntegralOut {
            name: name.into(),
            f: self.scalar(&f),
            certified: false,
            lambda: None,
            a: None,
            b: None,
            c: None,
            in_last_derived: false,
            refusal: Some(refusal),
        });
    }

    fn surface(&mut self, name: &str, with: Option<&str>) {
        let Some(s) = self.system.clone() else { return };
        let n = match self.spec.surface(name) {
            Some(Ok(n)) => n,
            Some(Err(e)) => return self.fail(Status::Negative, format!("surface {name}: {e}")),
            None => return,
        };
        let with = with.map(str::to_string).or_else(|| self.spec.integrals.first().map(|(n, _)| n.clone()));
        let f = with.as_deref().and_then(|w| self.spec.integral(w)).cloned();
        let cert = match (&with, &f) {
            (Some(w), Some(f)) => self.certificate(&s, w, f),
            _ => None,
        };
        match check_surface(&s, &n, f.as_ref(), cert.as_ref()) {
            Ok(r) => {
                let uv = Chart::surface();
                let ind: Vec<ScalarExpr> = r.independence.terms().into_iter().map(|(_, c)| c.clone()).collect();
                if r.independence.is_zero() {
                    self.report.warnings.push(format!("surface {name} violates the independence condition"));
                } else {
                    self.sample_zero(&format!("independence form of {name}"), &ind, &uv);
                }
                if r.verdict != SurfaceVerdict::Solution {
                    self.status = self.status.max(Status::Negative);
                }
                let on_uv = |e: &Option<ScalarExpr>| e.as_ref().map(|e| e.display(&uv).to_string());
                self.report.surfaces.push(SurfaceOut {
                    name: name.into(),
                    integral: with,
                    verdict: r.verdict.as_str().into(),
                    pulled_theta: r.pulled_theta.display().to_string(),
                    pulled_dtheta: r.pulled_dtheta.display().to_string(),
                    pulled_omega: r.pulled_omega.display().to_string(),
                    pulled_f: on_uv(&r.pulled_f),
                    pulled_b: on_uv(&r.pulled_b),
                    pulled_c: on_uv(&r.pulled_c),
                    independence: r.independence.display().to_string(),
                });
            }
            Err(e) => self.fail(status_of(&e), format!("surface {name}: {e}")),
        }
    }

    fn normal_form(&mut self) {
        let Some(data) = self.spec.normal_form.clone() else { return };
        let Some(s) = self.system.clone() else { return };
        let Some(systems) = self.characteristic_systems() else { return };
        let mut worst = Status::Unsupported;
        let mut outs = Vec::new();
        for cs in &systems {
            let lambda = self.scalar(&cs.lambda);
            match verify_normal_form(&cs.system, &data) {
                Ok(nf) => {
                    worst = Status::Ok;
                    self.sample_zero(&format!("F_Z·κ for λ = {lambda}"), &[&nf.f_z * &nf.kappa], self.chart());
                    let factor = nf.omega_factor(&s, cs);
                    outs.push(NormalFormOut {
                        lambda,
                        passed: true,
                        kappa: Some(self.scalar(&nf.kappa)),
                        f_z: Some(self.scalar(&nf.f_z)),
                        coordinates: nf.coordinates.iter().map(|c| self.scalar(c)).collect(),
                        exceptional: nf.exceptional.iter().map(|c| self.scalar(c)).collect(),
                        omega_factor: factor.as_ref().ok().map(|m| self.scalar(m)),
                        failure: factor.err().map(|e| e.to_string()),
                    });
                }
                Err(e) => {
                    worst = worst.min(status_of(&e));
                    outs.push(NormalFormOut {
                        lambda,
                        passed: false,
                        kappa: None,
                        f_z: None,
                        coordinates: Vec::new(),
                        exceptional: Vec::new(),
                        omega_factor: None,
                        failure: Some(e.to_string()),
                    });
                }
            }
        }
        if worst != Status::Ok {
            let why: Vec<String> = outs.iter().filter_map(|o| o.failure.clone()).collect();
            self.fail(worst, format!("normal form: {}", why.join("; ")));
        }
        self.report.normal_form = outs;
    }

    fn transport(&mut self, name: &str) {
        let Some(s) = self.system.clone() else { return };
        let Some(m) = self.spec.contact(name) else { return };
        let result = verify_contact_map(&m, s.theta(), s.theta()).and_then(|mu| Ok((mu, transport_system(&m, &s)?)));
        match result {
            Ok((mu, t)) => {
                self.sample_zero(&format!("contact factor of {name}"), std::slice::from_ref(&mu), self.chart());
                self.report.transports.push(TransportOut {
                    name: name.into(),
                    mu: Some(self.scalar(&mu)),
                    theta: Some(t.theta().display().to_string()),
                    omega: Some(t.omega().display().to_string()),
                    failure: None,
                });
            }
            Err(e) => {
                self.fail(status_of(&e), format!("transport {name}: {e}"));
                self.report.transports.push(TransportOut {
                    name: name.into(),
                    mu: None,
                    theta: None,
                    omega: None,
                    failure: Some(e.to_string()),
                });
            }
        }
    }
}

fn everything(spec: &SystemSpec) -> Vec<Check> {
    let mut checks = vec![Check::Classify, Check::Characteristics, Check::DerivedFlag, Check::Hypotheses];
    checks.extend(spec.integrals.iter().map(|(n, _)| Check::Integral(n.clone())));
    checks.extend(spec.surfaces.iter().map(|(n, _)| Check::Surface { name: n.clone(), with: None }));
    if spec.normal_form.is_some() {
        checks.push(Check::NormalForm);
    }
    checks.extend(spec.contacts.iter().map(|(n, _)| Check::Transport(n.clone())));
    checks
}

fn checks_for(spec: &SystemSpec, request: Request) -> Vec<Check> {
    let listed_with = |name: &str| {
        spec.checks.iter().find_map(|c| match c {
            Check::Surface { name: n, with } if n == name => with.clone(),
            _ => None,
        })
    };
    match request {
        Request::Classify => vec![Check::Classify],
        Request::Characteristics => vec![Check::Classify, Check::Characteristics],
        Request::DerivedFlag => vec![Check::DerivedFlag],
        Request::Hypotheses => vec![Check::Hypotheses],
        Request::Integrals => spec.integrals.iter().map(|(n, _)| Check::Integral(n.clone())).collect(),
        Request::Surfaces => {
            spec.surfaces.iter().map(|(n, _)| Check::Surface { name: n.clone(), with: listed_with(n) }).collect()
        }
        Request::NormalForm => vec![Check::NormalForm],
        Request::Report if spec.checks.is_empty() => everything(spec),
        Request::Report => spec.checks.clone(),
    }
}

/// Runs `request` and returns the report with its exit status.
pub fn analyze(spec: &SystemSpec, request: Request, options: Options) -> (AnalysisReport, Status) {
    let mut run = Run {
        spec,
        options,
        rng: ChaCha8Rng::seed_from_u64(options.seed),
        report: AnalysisReport { system: spec.name.clone(), ..AnalysisReport::default() },
        status: Status::Ok,
        system: None,
        characteristics: None,
        certificates: Vec::new(),
    };
    match spec.system() {
        Ok(s) => run.system = Some(s),
        Err(e) => {
            run.fail(status_of(&e), format!("system: {e}"));
            return (run.report, run.status);
        }
    }
    let checks = checks_for(spec, request);
    if checks.is_empty() {
        run.report.warnings.push("nothing to check".into());
    }
    for check in &checks {
        match check {
            Check::Classify => run.classify(),
            Check::Characteristics => run.characteristics(),
            Check::DerivedFlag => run.derived_flags(),
            Check::Hypotheses => run.hypotheses(),
            Check::Integral(n) => run.integral(n),
            Check::Surface { name, with } => run.surface(name, with.as_deref()),
            Check::NormalForm if spec.normal_form.is_none() => {
                run.fail(Status::Unsupported, "normal form: no normalform block".into())
            }
            Check::NormalForm => run.normal_form(),
            Check::Transport(n) => run.transport(n),
        }
    }
    (run.report, run.status)
}

fn opt(s: &Option<String>) -> &str {
    s.as_deref().unwrap_or("-")
}

/// Plain-text rendering of a report.
pub fn render_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "system {}", r.system);
    if let Some(c) = &r.classification {
        let _ = writeln!(out, "classification: {}", c.kind);
        let _ = writeln!(out, "  quadratic: c2 = {}, c1 = {}, c0 = {}", c.c2, c.c1, c.c0);
        let _ = writeln!(out, "  discriminant: {}", c.discriminant);
        let _ = writeln!(out, "  roots: [{}]", c.roots.join(", "));
    }
    for c in &r.characteristics {
        let _ = writeln!(out, "characteristic system λ = {}", c.lambda);
        let _ = writeln!(out, "  ω¹ = {}", c.omega1);
        let _ = writeln!(out, "  ω² = {}", c.omega2);
        let _ = writeln!(out, "  J = {{{}}}", c.generators.join(", "));
    }
    for f in &r.flags {
        let dims: Vec<String> = f.dims.iter().map(ToString::to_string).collect();
        let _ =
            writeln!(out, "derived flag λ = {}: dims [{}], final {{{}}}", f.lambda, dims.join(", "), f.last.join(", "));
    }
    for h in &r.hypotheses {
        let _ = writeln!(out, "hypotheses λ = {}: {}", h.lambda, h.verdict);
        let _ = writeln!(
            out,
            "  integrable: {}, assumption 1: {}, assumption 2: {}",
            h.integrable, h.assumption1, h.assumption2
        );
        let _ = writeln!(out, "  θ∧dθ∧ω¹∧ω² = {}", h.five_form);
    }
    for i in &r.integrals {
        if i.certified {
            let _ = writeln!(
                out,
                "integral {} = {}: dF = ({})θ + ({})ω¹ + ({})ω²",
                i.name,
                i.f,
                opt(&i.a),
                opt(&i.b),
                opt(&i.c)
            );
            let _ = writeln!(out, "  λ = {}, in last derived system: {}", opt(&i.lambda), i.in_last_derived);
        } else {
            let _ = writeln!(out, "integral {} = {}: refused ({})", i.name, i.f, opt(&i.refusal));
        }
    }
    for s in &r.surfaces {
        let _ = writeln!(out, "surface {}: {}", s.name, s.verdict);
        let _ = writeln!(out, "  i*θ = {}", s.pulled_theta);
        let _ = writeln!(out, "  i*Ω = {}", s.pulled_omega);
        let _ = writeln!(out, "  i*(dx∧dy) = {}", s.independence);
        if let Some(f) = &s.pulled_f {
            let _ = writeln!(out, "  i*{} = {}", opt(&s.integral), f);
        }
        if let (Some(b), Some(c)) = (&s.pulled_b, &s.pulled_c) {
            let _ = writeln!(out, "  i*b = {b}, i*c = {c}");
        }
    }
    for n in &r.normal_form {
        if n.passed {
            let _ = writeln!(out, "normal form λ = {}: passed, F_Z = {}, κ = {}", n.lambda, opt(&n.f_z), opt(&n.kappa));
            let _ = writeln!(out, "  coordinates: ({})", n.coordinates.join(", "));
            let _ = writeln!(out, "  exceptional: {} = 0", n.exceptional.join(" = "));
            if let Some(m) = &n.omega_factor {
                let _ = writeln!(out, "  ω¹∧ω² ≡ ({m}) dX∧dY mod θ");
            }
        } else {
            let _ = writeln!(out, "normal form λ = {}: failed ({})", n.lambda, opt(&n.failure));
        }
    }
    for t in &r.transports {
        match &t.failure {
            None => {
                let _ = writeln!(out, "transport {}: contact with μ = {}", t.name, opt(&t.mu));
                let _ = writeln!(out, "  θ = {}", opt(&t.theta));
                let _ = writeln!(out, "  Ω = {}", opt(&t.omega));
            }
            Some(why) => {
                let _ = writeln!(out, "transport {}: {why}", t.name);
            }
        }
    }
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}
