use std::fmt::Write;

use monge_core::{Chart, ScalarExpr};

use super::{Check, Mode, SystemSpec, Value};

fn scalar(e: &ScalarExpr, chart: &Chart) -> String {
    e.display(chart).to_string()
}

fn assignments(keys: &[String], values: &[ScalarExpr], chart: &Chart) -> String {
    keys.iter().zip(values).map(|(k, v)| format!("{k} = {}", scalar(v, chart))).collect::<Vec<_>>().join(", ")
}

pub fn check_text(c: &Check) -> String {
    match c {
        Check::Classify => "classify".into(),
        Check::Characteristics => "characteristics".into(),
        Check::DerivedFlag => "derived-flag".into(),
        Check::Hypotheses => "hypotheses".into(),
        Check::Integral(n) => format!("integral {n}"),
        Check::Surface { name, with: None } => format!("surface {name}"),
        Check::Surface { name, with: Some(f) } => format!("surface {name} with {f}"),
        Check::NormalForm => "normal-form".into(),
        Check::Transport(n) => format!("transport {n}"),
    }
}

pub fn render(spec: &SystemSpec) -> String {
    let chart = &spec.chart;
    let mut out = String::new();
    let _ = writeln!(out, "system \"{}\"", spec.name);
    let _ = writeln!(out, "coords {}", chart.names().join(" "));
    match &spec.mode {
        Mode::Equation(c) => {
            for (k, v) in "ABCDE".chars().zip(c.as_array()) {
                let _ = writeln!(out, "{k} = {}", scalar(v, chart));
            }
        }
        Mode::Forms { theta, omega } => {
            let _ = writeln!(out, "theta = {}", theta.display());
            let _ = writeln!(out, "omega = {}", omega.display());
        }
    }
    for (name, v) in &spec.declarations {
        let text = match v {
            Value::Scalar(s) => scalar(s, chart),
            Value::Form(f) => f.display().to_string(),
        };
        let _ = writeln!(out, "let {name} = {text}");
    }
    for (name, f) in &spec.integrals {
        let _ = writeln!(out, "integral {name} = {}", scalar(f, chart));
    }
    for (name, comps) in &spec.surfaces {
        let _ = writeln!(out, "surface {name}: {}", assignments(chart.names(), comps, &Chart::surface()));
    }
    for (name, comps) in &spec.contacts {
        let _ = writeln!(out, "contact {name}: {}", assignments(chart.names(), comps, chart));
    }
    if let Some(nf) = &spec.normal_form {
        let keys: Vec<String> = ["X", "Y", "Z", "P", "Q"].iter().map(|s| s.to_string()).collect();
        let values = [nf.x.clone(), nf.y.clone(), nf.z.clone(), nf.p.clone(), nf.q.clone()];
        let _ = writeln!(
            out,
            "normalform: {}, F = {}",
            assignments(&keys, &values, chart),
            scalar(&nf.f, &Chart::normal())
        );
    }
    if !spec.checks.is_empty() {
        let _ = writeln!(out, "check {}", spec.checks.iter().map(check_text).collect::<Vec<_>>().join(" "));
    }
    out
}
