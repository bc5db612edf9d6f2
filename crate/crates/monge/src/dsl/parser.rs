use std::collections::{HashMap, HashSet};

use monge_core::forms::DiffForm;
use monge_core::integrals::NormalFormData;
use monge_core::ma::MACoefficients;
use monge_core::{Chart, Rational, ScalarExpr};

use super::lexer::{tokenize, Keyword, Token, TokenKind};
use super::{Check, Mode, ParseError, SystemSpec, Value};

type PResult<T> = Result<T, ParseError>;

struct Scope<'a> {
    chart: &'a Chart,
    bindings: Option<&'a HashMap<String, Value>>,
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(tokens: &'a [Token]) -> Self {
        Parser { tokens, pos: 0 }
    }

    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<&'a TokenKind> {
        self.peek().map(|t| &t.kind)
    }

    fn next(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn skip_newlines(&mut self) {
        while self.peek_kind() == Some(&TokenKind::Newline) {
            self.pos += 1;
        }
    }

    fn at_line_end(&self) -> bool {
        matches!(self.peek_kind(), None | Some(TokenKind::Newline))
    }

    fn error_here(&self, message: &str) -> ParseError {
        match self.peek() {
            Some(t) => error_at(t, message),
            None => self.error_eof(message),
        }
    }

    fn error_eof(&self, message: &str) -> ParseError {
        let last = self.tokens.iter().rev().find(|t| t.kind != TokenKind::Newline).or(self.tokens.last());
        match last {
            Some(t) => ParseError::new(t.line, t.column, message, "end of input"),
            None => ParseError::new(1, 1, message, "end of input"),
        }
    }

    fn expect(&mut self, kind: &TokenKind, what: &str) -> PResult<&'a Token> {
        match self.peek() {
            Some(t) if &t.kind == kind => {
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.error_here(&format!("expected {what}"))),
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(&'a Token, String)> {
        match self.peek() {
            Some(t @ Token { kind: TokenKind::Ident(name), .. }) => {
                self.pos += 1;
                Ok((t, name.clone()))
            }
            _ => Err(self.error_here(&format!("expected {what}"))),
        }
    }

    fn expression(&mut self, scope: &Scope) -> PResult<(Value, &'a Token)> {
        let start = self.peek().ok_or_else(|| self.error_eof("expected an expression"))?;
        Ok((self.sum(scope)?, start))
    }

    fn sum(&mut self, scope: &Scope) -> PResult<Value> {
        let mut acc = self.wedge(scope)?;
        while let Some(op @ Token { kind: TokenKind::Plus | TokenKind::Minus, .. }) = self.peek() {
            self.pos += 1;
            let rhs = self.wedge(scope)?;
            let rhs = if op.kind == TokenKind::Minus { negate(rhs) } else { rhs };
            acc = add(acc, rhs).map_err(|m| error_at(op, m))?;
        }
        Ok(acc)
    }

    fn wedge(&mut self, scope: &Scope) -> PResult<Value> {
        let mut acc = self.product(scope)?;
        while let Some(op @ Token { kind: TokenKind::Wedge, .. }) = self.peek() {
            self.pos += 1;
            let rhs = self.product(scope)?;
            acc = wedge(acc, rhs, scope.chart).map_err(|m| error_at(op, m))?;
        }
        Ok(acc)
    }

    fn product(&mut self, scope: &Scope) -> PResult<Value> {
        let mut acc = self.unary(scope)?;
        while let Some(op @ Token { kind: TokenKind::Star | TokenKind::Slash, .. }) = self.peek() {
            self.pos += 1;
            let rhs = self.unary(scope)?;
            acc = if op.kind == TokenKind::Star { multiply(acc, rhs) } else { divide(acc, rhs) }
                .map_err(|m| error_at(op, m))?;
        }
        Ok(acc)
    }

    fn unary(&mut self, scope: &Scope) -> PResult<Value> {
        if self.peek_kind() == Some(&TokenKind::Minus) {
            self.pos += 1;
            return Ok(negate(self.unary(scope)?));
        }
        self.power(scope)
    }

    fn power(&mut self, scope: &Scope) -> PResult<Value> {
        let base = self.atom(scope)?;
        let Some(op @ Token { kind: TokenKind::Caret, .. }) = self.peek() else {
            return Ok(base);
        };
        self.pos += 1;
        let exponent = match self.peek() {
            Some(t @ Token { kind: TokenKind::Int(n), .. }) => {
                self.pos += 1;
                u32::try_from(n).map_err(|_| error_at(t, "exponent too large"))?
            }
            _ => return Err(self.error_here("exponent must be a nonnegative integer")),
        };
        match base {
            Value::Scalar(s) => Ok(Value::Scalar(s.pow(exponent))),
            Value::Form(_) => Err(error_at(op, "^ needs a scalar base; use /\\ for forms")),
        }
    }

    fn atom(&mut self, scope: &Scope) -> PResult<Value> {
        let Some(t) = self.next() else {
            return Err(self.error_eof("expected an expression"));
        };
        match &t.kind {
            TokenKind::Int(n) => Ok(Value::Scalar(ScalarExpr::rational(Rational::from_integer(n.clone())))),
            TokenKind::Ident(name) => lookup(name, scope).ok_or_else(|| error_at(t, "unknown identifier")),
            TokenKind::Diff(name) => match scope.chart.index(name) {
                Ok(i) => Ok(Value::Form(DiffForm::differential(scope.chart, i))),
                Err(_) => Err(error_at(t, "unknown differential")),
            },
            TokenKind::LParen => {
                let v = self.sum(scope)?;
                self.expect(&TokenKind::RParen, "`)`")?;
                Ok(v)
            }
            _ => Err(error_at(t, "expected an expression")),
        }
    }
}

fn error_at(t: &Token, message: &str) -> ParseError {
    ParseError::new(t.line, t.column, message, &t.text)
}

fn lookup(name: &str, scope: &Scope) -> Option<Value> {
    if let Ok(i) = scope.chart.index(name) {
        return Some(Value::Scalar(ScalarExpr::var(i)));
    }
    if let Some(v) = scope.bindings.and_then(|b| b.get(name)) {
        return Some(v.clone());
    }
    let i = scope.chart.index(name.strip_prefix('d')?).ok()?;
    Some(Value::Form(DiffForm::differential(scope.chart, i)))
}

fn negate(v: Value) -> Value {
    match v {
        Value::Scalar(s) => Value::Scalar(-s),
        Value::Form(f) => Value::Form(-f),
    }
}

fn add(a: Value, b: Value) -> Result<Value, &'static str> {
    match (a, b) {
        (Value::Scalar(a), Value::Scalar(b)) => Ok(Value::Scalar(a + b)),
        (Value::Form(a), Value::Form(b)) if a.degree() == b.degree() => Ok(Value::Form(a + b)),
        _ => Err("mixed degrees"),
    }
}

fn multiply(a: Value, b: Value) -> Result<Value, &'static str> {
    match (a, b) {
        (Value::Scalar(a), Value::Scalar(b)) => Ok(Value::Scalar(a * b)),
        (Value::Scalar(s), Value::Form(f)) | (Value::Form(f), Value::Scalar(s)) => Ok(Value::Form(f.scale(&s))),
        _ => Err("use /\\ to multiply forms"),
    }
}

fn divide(a: Value, b: Value) -> Result<Value, &'static str> {
    let Value::Scalar(b) = b else {
        return Err("cannot divide by a form");
    };
    let inv = b.inv().map_err(|_| "division by zero")?;
    multiply(a, Value::Scalar(inv))
}

fn wedge(a: Value, b: Value, chart: &Chart) -> Result<Value, &'static str> {
    match (a, b) {
        (Value::Form(a), Value::Form(b)) => {
            if a.degree() + b.degree() > chart.len() {
                return Err("degree exceeds the dimension");
            }
            Ok(Value::Form(a.wedge(&b)))
        }
        (a, b) => multiply(a, b),
    }
}

fn finish_expression(p: &Parser) -> PResult<()> {
    let mut q = Parser { tokens: p.tokens, pos: p.pos };
    q.skip_newlines();
    match q.peek() {
        None => Ok(()),
        Some(t) => Err(error_at(t, "unexpected token after expression")),
    }
}

/// Parses a standalone expression on `chart`.
pub fn parse_expr(text: &str, chart: &Chart) -> Result<Value, ParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser::new(&tokens);
    p.skip_newlines();
    let (v, _) = p.expression(&Scope { chart, bindings: None })?;
    finish_expression(&p)?;
    Ok(v)
}

pub fn parse_scalar(text: &str, chart: &Chart) -> Result<ScalarExpr, ParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser::new(&tokens);
    p.skip_newlines();
    let (v, start) = p.expression(&Scope { chart, bindings: None })?;
    finish_expression(&p)?;
    match v {
        Value::Scalar(s) => Ok(s),
        Value::Form(_) => Err(error_at(start, "scalar expected")),
    }
}

pub fn parse_form(text: &str, chart: &Chart) -> Result<DiffForm, ParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser::new(&tokens);
    p.skip_newlines();
    let (v, start) = p.expression(&Scope { chart, bindings: None })?;
    finish_expression(&p)?;
    match v {
        Value::Form(f) => Ok(f),
        Value::Scalar(_) => Err(error_at(start, "form expected")),
    }
}

#[derive(Default)]
struct Builder {
    name: Option<String>,
    chart: Option<Chart>,
    coefficients: [Option<ScalarExpr>; 5],
    theta: Option<DiffForm>,
    omega: Option<DiffForm>,
    bindings: HashMap<String, Value>,
    used: HashSet<String>,
    declarations: Vec<(String, Value)>,
    integrals: Vec<(String, ScalarExpr)>,
    surfaces: Vec<(String, Vec<ScalarExpr>)>,
    contacts: Vec<(String, Vec<ScalarExpr>)>,
    normal_form: Option<NormalFormData>,
    checks: Vec<(Check, Token)>,
}

impl Builder {
    fn chart(&mut self) -> Chart {
        self.chart.get_or_insert_with(Chart::base).clone()
    }

    fn claim(&mut self, t: &Token, name: &str) -> PResult<()> {
        let chart = self.chart();
        if chart.index(name).is_ok() || !self.used.insert(name.to_string()) {
            return Err(error_at(t, "duplicate name"));
        }
        Ok(())
    }

    fn equation_mode(&self) -> bool {
        self.coefficients.iter().any(Option::is_some)
    }

    fn forms_mode(&self) -> bool {
        self.theta.is_some() || self.omega.is_some()
    }
}

fn scalar_of(v: Value, start: &Token) -> PResult<ScalarExpr> {
    match v {
        Value::Scalar(s) => Ok(s),
        Value::Form(_) => Err(error_at(start, "scalar expected")),
    }
}

fn form_of(v: Value, start: &Token, degree: usize) -> PResult<DiffForm> {
    match v {
        Value::Form(f) if f.degree() == degree => Ok(f),
        _ => Err(error_at(start, &format!("{degree}-form expected"))),
    }
}

/// `key = expr, key = expr, ...` with every key of `keys` exactly once.
fn assignments(
    p: &mut Parser,
    keys: &[String],
    scope_for: &dyn Fn(usize) -> (Chart, bool),
    bindings: &HashMap<String, Value>,
) -> PResult<Vec<ScalarExpr>> {
    let mut out: Vec<Option<ScalarExpr>> = vec![None; keys.len()];
    loop {
        let (t, key) = p.ident("an assignment")?;
        let slot = keys.iter().position(|k| *k == key).ok_or_else(|| error_at(t, "unknown assignment target"))?;
        if out[slot].is_some() {
            return Err(error_at(t, "duplicate assignment"));
        }
        p.expect(&TokenKind::Equals, "`=`")?;
        let (chart, with_bindings) = scope_for(slot);
        let scope = Scope { chart: &chart, bindings: with_bindings.then_some(bindings) };
        let (v, start) = p.expression(&scope)?;
        out[slot] = Some(scalar_of(v, start)?);
        if p.peek_kind() != Some(&TokenKind::Comma) {
            break;
        }
        p.pos += 1;
    }
    if let Some(missing) = out.iter().position(Option::is_none) {
        return Err(p.error_here(&format!("missing assignment for `{}`", keys[missing])));
    }
    Ok(out.into_iter().map(|v| v.expect("checked")).collect())
}

fn parse_check(p: &mut Parser, b: &mut Builder) -> PResult<()> {
    while !p.at_line_end() {
        let t = p.next().expect("not at end");
        let adjacent = |p: &Parser, word: &str| {
            matches!(
                (p.tokens.get(p.pos), p.tokens.get(p.pos + 1)),
                (Some(Token { kind: TokenKind::Minus, line, column, .. }), Some(Token { kind: TokenKind::Ident(w), .. }))
                    if *line == t.line && *column == t.column + t.text.chars().count() && w == word
            )
        };
        let check = match &t.kind {
            TokenKind::Ident(w) if w == "classify" => Check::Classify,
            TokenKind::Ident(w) if w == "characteristics" => Check::Characteristics,
            TokenKind::Ident(w) if w == "hypotheses" => Check::Hypotheses,
            TokenKind::Ident(w) if w == "derived" && adjacent(p, "flag") => {
                p.pos += 2;
                Check::DerivedFlag
            }
            TokenKind::Ident(w) if w == "normal" && adjacent(p, "form") => {
                p.pos += 2;
                Check::NormalForm
            }
            TokenKind::Ident(w) if w == "transport" => Check::Transport(p.ident("a contact map name")?.1),
            TokenKind::Keyword(Keyword::Integral) => Check::Integral(p.ident("an integral name")?.1),
            TokenKind::Keyword(Keyword::Surface) => {
                let name = p.ident("a surface name")?.1;
                let with = match p.peek_kind() {
                    Some(TokenKind::Ident(w)) if w == "with" => {
                        p.pos += 1;
                        Some(p.ident("an integral name")?.1)
                    }
                    _ => None,
                };
                Check::Surface { name, with }
            }
            _ => return Err(error_at(t, "unknown check")),
        };
        b.checks.push((check, t.clone()));
    }
    Ok(())
}

fn parse_statement(p: &mut Parser, b: &mut Builder, t: &Token) -> PResult<()> {
    let TokenKind::Keyword(kw) = &t.kind else {
        return Err(error_at(t, "expected a statement"));
    };
    p.pos += 1;
    match kw {
        Keyword::System => {
            if b.name.is_some() {
                return Err(error_at(t, "duplicate system name"));
            }
            let name = match p.next() {
                Some(Token { kind: TokenKind::Str(s) | TokenKind::Ident(s), .. }) => s.clone(),
                _ => return Err(p.error_here("expected a system name")),
            };
            b.name = Some(name);
        }
        Keyword::Coords => {
            if b.chart.is_some() {
                return Err(error_at(t, "coords must come once, before any expression"));
            }
            let mut names = Vec::new();
            while !p.at_line_end() {
                names.push(p.ident("a coordinate name")?.1);
            }
            if names.len() != 5 {
                return Err(error_at(t, "coords needs five names"));
            }
            let c = Chart::new(names).map_err(|e| error_at(t, &e.to_string()))?;
            if let Some(clash) = c.names().iter().find(|n| b.used.contains(*n)) {
                return Err(error_at(t, &format!("coordinate `{clash}` is already a name")));
            }
            b.chart = Some(c);
        }
        Keyword::Coefficient(c) => {
            if b.forms_mode() {
                return Err(error_at(t, "cannot mix A–E with theta/omega"));
            }
            let slot = "ABCDE".find(*c).expect("coefficient keyword");
            if b.coefficients[slot].is_some() {
                return Err(error_at(t, "duplicate coefficient"));
            }
            p.expect(&TokenKind::Equals, "`=`")?;
            let chart = b.chart();
            let (v, start) = p.expression(&Scope { chart: &chart, bindings: Some(&b.bindings) })?;
            b.coefficients[slot] = Some(scalar_of(v, start)?);
        }
        Keyword::Theta | Keyword::Omega => {
            if b.equation_mode() {
                return Err(error_at(t, "cannot mix A–E with theta/omega"));
            }
            let is_theta = *kw == Keyword::Theta;
            let slot_taken = if is_theta { b.theta.is_some() } else { b.omega.is_some() };
            if slot_taken {
                return Err(error_at(t, "duplicate definition"));
            }
            p.expect(&TokenKind::Equals, "`=`")?;
            let chart = b.chart();
            let (v, start) = p.expression(&Scope { chart: &chart, bindings: Some(&b.bindings) })?;
            if is_theta {
                b.theta = Some(form_of(v, start, 1)?);
            } else {
                b.omega = Some(form_of(v, start, 2)?);
            }
        }
        Keyword::Let | Keyword::Integral => {
            let (nt, name) = p.ident("a name")?;
            b.claim(nt, &name)?;
            p.expect(&TokenKind::Equals, "`=`")?;
            let chart = b.chart();
            let (v, start) = p.expression(&Scope { chart: &chart, bindings: Some(&b.bindings) })?;
            if *kw == Keyword::Integral {
                let f = scalar_of(v, start)?;
                b.integrals.push((name.clone(), f.clone()));
                b.bindings.insert(name, Value::Scalar(f));
            } else {
                b.declarations.push((name.clone(), v.clone()));
                b.bindings.insert(name, v);
            }
        }
        Keyword::Surface | Keyword::Contact => {
            let (nt, name) = p.ident("a name")?;
            b.claim(nt, &name)?;
            p.expect(&TokenKind::Colon, "`:`")?;
            let chart = b.chart();
            let keys = chart.names().to_vec();
            let surface = *kw == Keyword::Surface;
            let scope_for = |_: usize| if surface { (Chart::surface(), false) } else { (chart.clone(), true) };
            let comps = assignments(p, &keys, &scope_for, &b.bindings)?;
            if surface {
                b.surfaces.push((name, comps));
            } else {
                b.contacts.push((name, comps));
            }
        }
        Keyword::NormalForm => {
            if b.normal_form.is_some() {
                return Err(error_at(t, "duplicate normalform block"));
            }
            if p.peek_kind() == Some(&TokenKind::Colon) {
                p.pos += 1;
            }
            let chart = b.chart();
            let keys: Vec<String> = ["X", "Y", "Z", "P", "Q", "F"].iter().map(|s| s.to_string()).collect();
            let scope_for = |slot: usize| if slot == 5 { (Chart::normal(), false) } else { (chart.clone(), true) };
            let v = assignments(p, &keys, &scope_for, &b.bindings)?;
            let [x, y, z, pp, q, f]: [ScalarExpr; 6] = v.try_into().expect("six keys");
            b.normal_form = Some(NormalFormData { x, y, z, p: pp, q, f });
        }
        Keyword::Check => parse_check(p, b)?,
    }
    Ok(())
}

/// Parses a whole `.mag` document.
pub fn parse_system_file(text: &str) -> Result<SystemSpec, ParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser::new(&tokens);
    let mut b = Builder::default();
    loop {
        p.skip_newlines();
        let Some(t) = p.peek() else { break };
        parse_statement(&mut p, &mut b, t)?;
    }
    let name = b.name.clone().ok_or_else(|| p.error_eof("missing `system` name"))?;
    let chart = b.chart();
    let mode = if b.equation_mode() {
        let [a, bb, c, d, e] = b.coefficients.clone().map(Option::unwrap_or_default);
        Mode::Equation(MACoefficients::new(a, bb, c, d, e))
    } else {
        match (b.theta.take(), b.omega.take()) {
            (Some(theta), Some(omega)) => Mode::Forms { theta, omega },
            (None, None) => return Err(p.error_eof("missing A–E or theta/omega")),
            (None, _) => return Err(p.error_eof("missing theta")),
            (_, None) => return Err(p.error_eof("missing omega")),
        }
    };
    let mut checks = Vec::new();
    for (check, t) in b.checks {
        let known = |name: &str, list: &[&str]| list.contains(&name);
        let integrals: Vec<&str> = b.integrals.iter().map(|(n, _)| n.as_str()).collect();
        let surfaces: Vec<&str> = b.surfaces.iter().map(|(n, _)| n.as_str()).collect();
        let contacts: Vec<&str> = b.contacts.iter().map(|(n, _)| n.as_str()).collect();
        let ok = match &check {
            Check::Integral(n) => known(n, &integrals),
            Check::Surface { name, with } => {
                known(name, &surfaces) && with.as_deref().is_none_or(|w| known(w, &integrals))
            }
            Check::Transport(n) => known(n, &contacts),
            Check::NormalForm => b.normal_form.is_some(),
            _ => true,
        };
        if !ok {
            return Err(error_at(&t, "check refers to an undefined name"));
        }
        checks.push(check);
    }
    Ok(SystemSpec {
        name,
        chart,
        mode,
        declarations: b.declarations,
        integrals: b.integrals,
        surfaces: b.surfaces,
        contacts: b.contacts,
        normal_form: b.normal_form,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use monge_core::scalar::{frac, int};

    fn base() -> Chart {
        Chart::base()
    }

    fn d(i: usize) -> DiffForm {
        DiffForm::differential(&base(), i)
    }

    const WAVE: &str = "system \"wave\"
coords x y z p q
A = 0  B = 0  C = 1  D = 0  E = 0
integral F1 = p - x^2
surface N1: x = u, y = v, z = u^3/3, p = u^2, q = 0
check classify characteristics derived-flag hypotheses integral F1 surface N1 with F1
";

    #[test]
    fn precedence() {
        let x = ScalarExpr::var(0);
        assert_eq!(parse_scalar("-x^2", &base()).unwrap(), -(&x * &x));
        assert_eq!(parse_scalar("2/3*x", &base()).unwrap(), &frac(2, 3) * &x);
        assert_eq!(parse_scalar("1 - x*(2 + x)", &base()).unwrap(), &(&int(1) - &(&int(2) * &x)) - &(&x * &x));
    }

    #[test]
    fn generator_display() {
        let scope = |text: &str| parse_form(&text.replace('A', "1").replace('E', "0"), &base()).unwrap();
        assert_eq!(scope("A*dp/\\dq + E*dx/\\dy"), d(3).wedge(&d(4)));
    }

    #[test]
    fn contact_form() {
        let p = ScalarExpr::var(3);
        let q = ScalarExpr::var(4);
        let theta = &(&d(2) - &d(0).scale(&p)) - &d(1).scale(&q);
        assert_eq!(parse_form("dz - p*dx - q*dy", &base()).unwrap(), theta);
    }

    #[test]
    fn repeated_differential() {
        let f = parse_form("dx /\\ dx", &base()).unwrap();
        assert!(f.is_zero());
        assert_eq!(f.degree(), 2);
    }

    #[test]
    fn mixed_degrees() {
        let e = parse_form("dx + dx/\\dy", &base()).unwrap_err();
        assert_eq!(e.message, "mixed degrees");
        assert_eq!((e.line, e.column), (1, 4));
        let e = parse_scalar("x + y1", &base()).unwrap_err();
        assert_eq!((e.message.as_str(), e.token.as_str()), ("unknown identifier", "y1"));
    }

    #[test]
    fn wave_document() {
        let s = parse_system_file(WAVE).unwrap();
        assert_eq!(s.name, "wave");
        assert_eq!(s.integrals.len(), 1);
        assert_eq!(s.surfaces.len(), 1);
        assert_eq!(s.checks.len(), 6);
        assert_eq!(s.checks[2], Check::DerivedFlag);
        assert_eq!(s.checks[5], Check::Surface { name: "N1".into(), with: Some("F1".into()) });
        assert_eq!(s.mode, Mode::Equation(MACoefficients::from_ints([0, 0, 1, 0, 0])));
        let u = ScalarExpr::var(0);
        assert_eq!(s.surfaces[0].1[2], &frac(1, 3) * &u.pow(3));
    }

    #[test]
    fn scalar_expected() {
        let e = parse_system_file("system \"s\"\nA = dx\n").unwrap_err();
        assert_eq!(e.message, "scalar expected");
        assert_eq!((e.line, e.column, e.token.as_str()), (2, 5, "dx"));
    }

    #[test]
    fn forms_mode_and_bindings() {
        let text = "system s\nlet w = dz - p*dx - q*dy\ntheta = w\nomega = dx/\\dy\n";
        let s = parse_system_file(text).unwrap();
        let Mode::Forms { theta, omega } = &s.mode else { panic!("forms mode") };
        assert_eq!(theta, &parse_form("dz - p*dx - q*dy", &base()).unwrap());
        assert_eq!(omega, &d(0).wedge(&d(1)));
        assert_eq!(s.declarations.len(), 1);
    }

    #[test]
    fn document_errors() {
        let cases = [
            ("system s\nA = 1\ntheta = dz\n", "cannot mix A–E with theta/omega"),
            ("system s\nA = 1\nA = 2\n", "duplicate coefficient"),
            ("system s\nA = 1\nintegral F = z\nintegral F = p\n", "duplicate name"),
            ("system s\nA = 1\ncheck surface N\n", "check refers to an undefined name"),
            ("system s\nA = 1\nsurface N: x = u, y = v, z = 0, p = 0\n", "missing assignment for `q`"),
            ("system s\ntheta = dz\n", "missing omega"),
            ("A = 1\n", "missing `system` name"),
            ("system s\nA = 1\ncheck frobnicate\n", "unknown check"),
            ("system s\nA = x^-1\n", "exponent must be a nonnegative integer"),
            ("system s\nA = 1/(x - x)\n", "division by zero"),
        ];
        for (text, message) in cases {
            let e = parse_system_file(text).unwrap_err();
            assert_eq!(e.message, message, "{text}");
            assert!(e.line >= 1 && e.line <= text.lines().count(), "{text}: {e}");
        }
    }

    #[test]
    fn custom_coordinates() {
        let s = parse_system_file("system s\ncoords a b c r s\nE = a*dc/\\db\n");
        assert_eq!(s.unwrap_err().message, "scalar expected");
        let s = parse_system_file("system s\ncoords a b c r s\nE = a*b\n").unwrap();
        assert_eq!(s.chart.names(), ["a", "b", "c", "r", "s"]);
    }
}
