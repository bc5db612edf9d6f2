use monge::dsl::{parse_form, parse_scalar, parse_system_file, Check, Mode, SystemSpec};
use monge::examples::BUILTIN;
use monge_core::forms::DiffForm;
use monge_core::ma::MACoefficients;
use monge_core::scalar::int;
use monge_core::{Chart, ScalarExpr};
use proptest::prelude::*;
use proptest::test_runner::{Config, FileFailurePersistence, RngAlgorithm, TestRng, TestRunner};

fn runner(cases: u32) -> TestRunner {
    let config =
        Config { cases, failure_persistence: Some(Box::new(FileFailurePersistence::Off)), ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

/// Sum of `c·Π var^e` over random terms.
fn poly(nvars: usize) -> impl Strategy<Value = ScalarExpr> {
    prop::collection::vec((prop::collection::vec(0u32..3, nvars), -9i64..=9), 0..4).prop_map(|terms| {
        terms.into_iter().fold(ScalarExpr::zero(), |acc, (e, c)| {
            let m = e.iter().enumerate().fold(int(c), |m, (i, &k)| &m * &ScalarExpr::var(i).pow(k));
            &acc + &m
        })
    })
}

fn fraction(nvars: usize) -> impl Strategy<Value = ScalarExpr> {
    (poly(nvars), poly(nvars)).prop_map(|(a, b)| if b.is_zero() { a } else { a.div(&b).unwrap() })
}

fn form(degree: usize) -> impl Strategy<Value = DiffForm> {
    prop::collection::vec(fraction(5), 10).prop_map(move |cs| {
        let chart = Chart::base();
        let mut out = DiffForm::zero(&chart, degree);
        let mut k = 0;
        for i in 0..5 {
            let di = DiffForm::differential(&chart, i);
            if degree == 1 {
                out = &out + &di.scale(&cs[i]);
                continue;
            }
            for j in i + 1..5 {
                let w = di.wedge(&DiffForm::differential(&chart, j));
                out = &out + &w.scale(&cs[k]);
                k += 1;
            }
        }
        out
    })
}

fn spec() -> impl Strategy<Value = SystemSpec> {
    let mode = prop_oneof![
        prop::collection::vec(fraction(5), 5).prop_map(|v| Mode::Equation(MACoefficients::new(
            v[0].clone(),
            v[1].clone(),
            v[2].clone(),
            v[3].clone(),
            v[4].clone()
        ))),
        (form(1), form(2)).prop_map(|(theta, omega)| Mode::Forms { theta, omega }),
    ];
    (
        mode,
        prop::collection::vec(fraction(5), 0..3),
        prop::collection::vec(prop::collection::vec(fraction(2), 5), 0..3),
        prop::option::of(prop::collection::vec(fraction(5), 5)),
        prop::collection::vec(0usize..6, 0..6),
        "[a-z]{1,8}",
    )
        .prop_map(|(mode, integrals, surfaces, contact, checks, name)| {
            let integrals: Vec<(String, ScalarExpr)> =
                integrals.into_iter().enumerate().map(|(i, f)| (format!("F{i}"), f)).collect();
            let surfaces: Vec<(String, Vec<ScalarExpr>)> =
                surfaces.into_iter().enumerate().map(|(i, s)| (format!("N{i}"), s)).collect();
            let contacts: Vec<(String, Vec<ScalarExpr>)> = contact.into_iter().map(|c| ("M".to_string(), c)).collect();
            let mut out = Vec::new();
            for c in checks {
                out.push(match c {
                    0 => Check::Classify,
                    1 => Check::Characteristics,
                    2 => Check::DerivedFlag,
                    3 => Check::Hypotheses,
                    4 if !integrals.is_empty() => Check::Integral(integrals[0].0.clone()),
                    5 if !surfaces.is_empty() => {
                        Check::Surface { name: surfaces[0].0.clone(), with: integrals.first().map(|(n, _)| n.clone()) }
                    }
                    _ if !contacts.is_empty() => Check::Transport("M".into()),
                    _ => Check::Classify,
                });
            }
            SystemSpec {
                name,
                chart: Chart::base(),
                mode,
                declarations: Vec::new(),
                integrals,
                surfaces,
                contacts,
                normal_form: None,
                checks: out,
            }
        })
}

#[test]
fn rendered_specs_parse_back() {
    runner(200)
        .run(&spec(), |s| {
            let text = s.render();
            let parsed = parse_system_file(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
            prop_assert_eq!(&parsed, &s);
            prop_assert_eq!(parsed.render(), text);
            Ok(())
        })
        .unwrap();
}

#[test]
fn displayed_expressions_parse_back() {
    runner(300)
        .run(&(fraction(5), form(1), form(2)), |(f, w1, w2)| {
            let chart = Chart::base();
            prop_assert_eq!(parse_scalar(&f.display(&chart).to_string(), &chart).unwrap(), f);
            prop_assert_eq!(parse_form(&w1.display().to_string(), &chart).unwrap(), w1);
            prop_assert_eq!(parse_form(&w2.display().to_string(), &chart).unwrap(), w2);
            Ok(())
        })
        .unwrap();
}

const FRAGMENTS: [&str; 24] = [
    "system", "\"s\"", "coords", "x", "y", "A", "=", "1", "dx", "/\\", "+", "-", "*", "/", "^", "(", ")", "\n",
    "integral", "F", "surface", ":", ",", "check",
];

#[test]
fn parsing_is_total_and_deterministic() {
    runner(500)
        .run(&prop::collection::vec(prop::sample::select(&FRAGMENTS[..]), 0..40), |parts| {
            let text = parts.join(" ");
            let first = parse_system_file(&text);
            prop_assert_eq!(&first, &parse_system_file(&text));
            if let Err(e) = first {
                let lines = text.lines().count().max(1);
                prop_assert!(e.line >= 1 && e.line <= lines, "{e} in {text:?}");
                let width = text.lines().nth(e.line - 1).map_or(0, |l| l.chars().count());
                // the newline ending a line counts as its last column
                prop_assert!(e.column >= 1 && e.column <= width + 1, "{e} in {text:?}");
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn shipped_examples_round_trip() {
    for (name, text) in BUILTIN {
        let s = parse_system_file(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parse_system_file(&s.render()).unwrap(), s, "{name}");
    }
}

#[test]
fn counterexample_document() {
    let text = "system \"counterexample\"\nA = 0 B = 0 C = 0 D = 0 E = 1\nintegral F = z\nsurface N: x = u, y = v, z = 0, p = 0, q = 0\n";
    let s = parse_system_file(text).unwrap();
    assert_eq!(s.mode, Mode::Equation(MACoefficients::from_ints([0, 0, 0, 0, 1])));
    assert_eq!(s.integrals, vec![("F".to_string(), ScalarExpr::var(2))]);
    let n = s.surface("N").unwrap().unwrap();
    assert_eq!(n.components(), [ScalarExpr::var(0), ScalarExpr::var(1), int(0), int(0), int(0)]);
}

#[test]
fn error_locations() {
    let e = parse_system_file("system \"s\"\nA = 1\n  B = dx\n").unwrap_err();
    assert_eq!((e.line, e.column, e.message.as_str(), e.token.as_str()), (3, 7, "scalar expected", "dx"));
    let e = parse_system_file("system \"s\"\nA = (x + 1\n").unwrap_err();
    assert_eq!(e.message, "expected `)`");
    assert_eq!(e.line, 2);
}
