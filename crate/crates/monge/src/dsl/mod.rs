//! The `.mag` text format: expressions, systems, surfaces and requested checks.
//!
//! ```text
//! system "wave"
//! coords x y z p q
//! A = 0  B = 0  C = 1  D = 0  E = 0
//! integral F1 = p - x^2
//! surface N1: x = u, y = v, z = u^3/3, p = u^2, q = 0
//! check classify characteristics derived-flag hypotheses integral F1 surface N1 with F1
//! ```
//!
//! Precedence from tightest to loosest: `^`, unary `-`, `* /`, `/\`, `+ -`.

mod lexer;
mod parser;
mod render;

use std::fmt;

use monge_core::forms::DiffForm;
use monge_core::integrals::{ContactMap, NormalFormData, SurfaceMap};
use monge_core::ma::{MACoefficients, MongeAmpereSystem};
use monge_core::{Chart, ScalarExpr};

pub use lexer::{keyword_text, tokenize, Keyword, Token, TokenKind};
pub use parser::{parse_expr, parse_form, parse_scalar, parse_system_file};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub token: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: &str, token: &str) -> Self {
        ParseError { line, column, message: message.into(), token: token.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {} (at `{}`)", self.line, self.column, self.message, self.token)
    }
}

impl std::error::Error for ParseError {}

/// A parsed expression: a function or a form of positive degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Scalar(ScalarExpr),
    Form(DiffForm),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    Equation(MACoefficients),
    Forms { theta: DiffForm, omega: DiffForm },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Classify,
    Characteristics,
    DerivedFlag,
    Hypotheses,
    Integral(String),
    Surface { name: String, with: Option<String> },
    NormalForm,
    Transport(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemSpec {
    pub name: String,
    pub chart: Chart,
    pub mode: Mode,
    pub declarations: Vec<(String, Value)>,
    pub integrals: Vec<(String, ScalarExpr)>,
    /// Components on [`Chart::surface`], in coordinate order.
    pub surfaces: Vec<(String, Vec<ScalarExpr>)>,
    pub contacts: Vec<(String, Vec<ScalarExpr>)>,
    pub normal_form: Option<NormalFormData>,
    pub checks: Vec<Check>,
}

impl SystemSpec {
    pub fn system(&self) -> monge_core::Result<MongeAmpereSystem> {
        match &self.mode {
            Mode::Equation(c) => MongeAmpereSystem::from_equation(&self.chart, c.clone()),
            Mode::Forms { theta, omega } => MongeAmpereSystem::from_forms(theta.clone(), omega.clone()),
        }
    }

    pub fn integral(&self, name: &str) -> Option<&ScalarExpr> {
        self.integrals.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn surface(&self, name: &str) -> Option<monge_core::Result<SurfaceMap>> {
        let (_, comps) = self.surfaces.iter().find(|(n, _)| n == name)?;
        Some(SurfaceMap::new(&Chart::surface(), &self.chart, comps.clone()))
    }

    pub fn contact(&self, name: &str) -> Option<ContactMap> {
        let (_, comps) = self.contacts.iter().find(|(n, _)| n == name)?;
        Some(ContactMap::new(&self.chart, comps.clone()))
    }

    /// Canonical text; parsing it gives back an equal spec.
    pub fn render(&self) -> String {
        render::render(self)
    }
}
