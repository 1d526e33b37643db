//! Sorted terms and formulas of the deontic cognitive event calculus
//! fragment, with substitution, matching and alpha-equivalence.
//!
//! Everything here is an immutable value; sharing across threads is free.

mod formula;
mod matching;
mod signature;
mod sort;
mod subst;
mod term;

pub use formula::{deontic_action, Formula, ModalOp};
pub use matching::{
    formula_variant, formulas_variant, match_formula, match_formula_into, match_term, match_term_into,
    pattern_variant, term_variant,
};
pub use signature::{builtin, Signature, BUILTIN_NAMES};
pub use sort::{Sort, UnknownSort};
pub use subst::Substitution;
pub use term::{Constant, FunctionSymbol, Head, SymbolKind, SymbolVar, Term, Var};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{symbol}` expects {expected} argument(s), found {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("sort mismatch in {context}: expected {expected}, found {found}")]
    SortMismatch { context: String, expected: Sort, found: Sort },
    #[error("`{0}` is already declared")]
    Duplicate(String),
    #[error("{0}")]
    Malformed(String),
}

/// Applies `s` to a term or formula. Sort discipline is enforced when
/// bindings are added to `s`, so this cannot fail.
pub fn apply_substitution(s: &Substitution, f: &Formula) -> Formula {
    s.apply(f)
}
