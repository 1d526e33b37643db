//! Concrete syntax: a parenthesized s-expression language for scenarios,
//! formulas and trait stores, and the canonical printer used for golden
//! output.

mod elaborate;
mod print;
mod scenario;
mod sexpr;
mod traits;

pub use elaborate::{is_identifier, parse_real, Elaborator, FreeVars};
pub use print::{format_real, print_formula, print_scenario, print_term};
pub use scenario::{
    parse_scenario, Declaration, EffectRule, Fact, HornRule, Observation, ScenarioConfig, ScenarioDoc, ThetaSpec,
};
pub use sexpr::{read_all, Pos, SExpr};
pub use traits::{parse_traits, print_trait};

use crate::kernel::{Formula, Signature, Sort, Term};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{at}: syntax error: {message}")]
    Syntax { at: Pos, message: String },
    #[error("{at}: sort mismatch: {message}")]
    SortMismatch { at: Pos, message: String },
    #[error("{at}: undeclared symbol `{name}`")]
    UndeclaredSymbol { at: Pos, name: String },
    #[error("{at}: duplicate declaration of `{name}`")]
    DuplicateDeclaration { at: Pos, name: String },
}

impl ParseError {
    pub fn syntax(at: Pos, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            at,
            message: message.into(),
        }
    }

    pub fn pos(&self) -> Pos {
        match self {
            ParseError::Syntax { at, .. }
            | ParseError::SortMismatch { at, .. }
            | ParseError::UndeclaredSymbol { at, .. }
            | ParseError::DuplicateDeclaration { at, .. } => *at,
        }
    }
}

fn single(text: &str) -> Result<SExpr, ParseError> {
    let mut exprs = read_all(text)?;
    match exprs.len() {
        1 => Ok(exprs.remove(0)),
        0 => Err(ParseError::syntax(Pos { line: 1, col: 1 }, "expected one expression, found none")),
        _ => Err(ParseError::syntax(exprs[1].pos(), "expected exactly one expression")),
    }
}

/// Parses a closed formula: every identifier must be declared or bound.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    Elaborator::new(sig, FreeVars::Reject).formula(&single(text)?)
}

/// Parses a formula whose undeclared identifiers become free variables, with
/// sorts inferred from their positions.
pub fn parse_pattern(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    Elaborator::new(sig, FreeVars::Infer).formula(&single(text)?)
}

pub fn parse_term(text: &str, sig: &Signature, expected: Sort) -> Result<Term, ParseError> {
    Elaborator::new(sig, FreeVars::Reject).term(&single(text)?, expected)
}
