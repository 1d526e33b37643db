//! Turns s-expressions into sort-checked terms and formulas.

use std::collections::BTreeMap;

use crate::kernel::{Formula, Head, KernelError, ModalOp, Signature, Sort, SymbolVar, Term, Var};

use super::sexpr::{Pos, SExpr};
use super::ParseError;

pub const CONNECTIVES: [&str; 8] = ["not", "and", "or", "implies", "iff", "forall", "exists", "ought"];

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

pub fn parse_nat(s: &str) -> Option<u64> {
    if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) {
        s.parse().ok()
    } else {
        None
    }
}

/// Decimal reals: optional sign, digits, optional fraction. No exponents.
pub fn parse_real(s: &str) -> Option<f64> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    let (int, frac) = match body.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (body, None),
    };
    let digits = |d: &str| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit());
    if !digits(int) || frac.is_some_and(|f| !digits(f)) {
        return None;
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// How identifiers that are neither declared nor bound are treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FreeVars {
    /// Undeclared identifiers are errors.
    Reject,
    /// Undeclared identifiers in argument position become variables of the
    /// sort that position expects.
    Infer,
}

pub struct Elaborator<'a> {
    sig: &'a Signature,
    policy: FreeVars,
    bound: Vec<Var>,
    vars: BTreeMap<String, Var>,
    symbol_vars: BTreeMap<String, SymbolVar>,
}

fn sort_error(pos: Pos, err: KernelError) -> ParseError {
    match err {
        KernelError::SortMismatch { .. } => ParseError::SortMismatch {
            at: pos,
            message: err.to_string(),
        },
        KernelError::UnknownSymbol(name) => ParseError::UndeclaredSymbol { at: pos, name },
        other => ParseError::syntax(pos, other.to_string()),
    }
}

impl<'a> Elaborator<'a> {
    pub fn new(sig: &'a Signature, policy: FreeVars) -> Self {
        Elaborator {
            sig,
            policy,
            bound: Vec::new(),
            vars: BTreeMap::new(),
            symbol_vars: BTreeMap::new(),
        }
    }

    /// Pre-declares free variables (used by trait files).
    pub fn with_vars(mut self, vars: Vec<Var>, symbol_vars: Vec<SymbolVar>) -> Self {
        for v in vars {
            self.vars.insert(v.name.clone(), v);
        }
        for sv in symbol_vars {
            self.symbol_vars.insert(sv.name.clone(), sv);
        }
        self
    }

    pub fn free_vars(&self) -> impl Iterator<Item = &Var> {
        self.vars.values()
    }

    fn check_sort(&self, pos: Pos, found: Sort, expected: Sort, what: &str) -> Result<(), ParseError> {
        if found.is_subsort_of(expected) {
            Ok(())
        } else {
            Err(ParseError::SortMismatch {
                at: pos,
                message: format!("`{what}` has sort {found}, expected {expected}"),
            })
        }
    }

    pub fn term(&mut self, expr: &SExpr, expected: Sort) -> Result<Term, ParseError> {
        let pos = expr.pos();
        match expr {
            SExpr::Atom(text, _) => {
                if let Some(n) = parse_nat(text) {
                    self.check_sort(pos, Sort::Moment, expected, text)?;
                    return Ok(Term::Moment(n));
                }
                if !is_identifier(text) {
                    return Err(ParseError::syntax(pos, format!("expected a term, found `{text}`")));
                }
                if let Some(v) = self.bound.iter().rev().find(|v| &v.name == text) {
                    self.check_sort(pos, v.sort, expected, text)?;
                    return Ok(Term::Var(v.clone()));
                }
                if let Some(c) = self.sig.constant(text) {
                    self.check_sort(pos, c.sort, expected, text)?;
                    return Ok(Term::Const(c.clone()));
                }
                if let Some(v) = self.vars.get(text) {
                    self.check_sort(pos, v.sort, expected, text)?;
                    return Ok(Term::Var(v.clone()));
                }
                if let Some(symbol) = self.sig.symbol(text) {
                    return Err(ParseError::syntax(
                        pos,
                        format!("`{text}` is a function symbol of arity {}; write it applied, as `({text} ...)`", symbol.arity()),
                    ));
                }
                match self.policy {
                    FreeVars::Infer => {
                        let v = Var::new(text.clone(), expected);
                        self.vars.insert(text.clone(), v.clone());
                        Ok(Term::Var(v))
                    }
                    FreeVars::Reject => Err(ParseError::UndeclaredSymbol {
                        at: pos,
                        name: text.clone(),
                    }),
                }
            }
            SExpr::List(items, _) => {
                let Some((head, args)) = items.split_first() else {
                    return Err(ParseError::syntax(pos, "empty list is not a term"));
                };
                let Some(name) = head.as_atom() else {
                    return Err(ParseError::syntax(head.pos(), "expected a symbol in head position"));
                };
                let head = if let Some(symbol) = self.sig.symbol(name) {
                    Head::Symbol(symbol.clone())
                } else if let Some(sv) = self.symbol_vars.get(name) {
                    Head::Var(sv.clone())
                } else if self.sig.constant(name).is_some() {
                    return Err(ParseError::syntax(
                        head.pos(),
                        format!("`{name}` is a constant and cannot be applied"),
                    ));
                } else {
                    return Err(ParseError::UndeclaredSymbol {
                        at: head.pos(),
                        name: name.to_string(),
                    });
                };
                let sorts = head.arg_sorts().to_vec();
                if sorts.len() != args.len() {
                    return Err(ParseError::syntax(
                        pos,
                        KernelError::ArityMismatch {
                            symbol: name.to_string(),
                            expected: sorts.len(),
                            found: args.len(),
                        }
                        .to_string(),
                    ));
                }
                let args = args
                    .iter()
                    .zip(sorts)
                    .map(|(a, s)| self.term(a, s))
                    .collect::<Result<Vec<_>, _>>()?;
                self.check_sort(pos, head.result(), expected, name)?;
                Ok(Term::App(head, args))
            }
        }
    }

    fn arity(&self, expr: &SExpr, items: &[SExpr], n: usize) -> Result<(), ParseError> {
        if items.len() != n + 1 {
            let kw = items.first().and_then(SExpr::as_atom).unwrap_or("form");
            return Err(ParseError::syntax(
                expr.pos(),
                format!("`{kw}` takes {n} argument(s), found {}", items.len() - 1),
            ));
        }
        Ok(())
    }

    fn binders(&mut self, expr: &SExpr) -> Result<Vec<Var>, ParseError> {
        let Some(items) = expr.as_list() else {
            return Err(ParseError::syntax(expr.pos(), "expected a binder list `((name sort) ...)`"));
        };
        let mut vars = Vec::with_capacity(items.len());
        for item in items {
            let pair = item.as_list().filter(|p| p.len() == 2);
            let (name, sort) = match pair.map(|p| (p[0].as_atom(), p[1].as_atom())) {
                Some((Some(name), Some(sort))) => (name, sort),
                _ => return Err(ParseError::syntax(item.pos(), "expected `(name sort)`")),
            };
            if !is_identifier(name) {
                return Err(ParseError::syntax(item.pos(), format!("invalid variable name `{name}`")));
            }
            let sort: Sort = sort
                .parse()
                .map_err(|e: crate::kernel::UnknownSort| ParseError::syntax(item.pos(), e.to_string()))?;
            vars.push(Var::new(name, sort));
        }
        if vars.is_empty() {
            return Err(ParseError::syntax(expr.pos(), "quantifier binds no variables"));
        }
        Ok(vars)
    }

    pub fn formula(&mut self, expr: &SExpr) -> Result<Formula, ParseError> {
        let pos = expr.pos();
        let Some(items) = expr.as_list() else {
            let term = self.term(expr, Sort::Boolean)?;
            return Ok(Formula::Atom(term));
        };
        let keyword = items.first().and_then(SExpr::as_atom).unwrap_or("");
        match keyword {
            "not" => {
                self.arity(expr, items, 1)?;
                Ok(Formula::not(self.formula(&items[1])?))
            }
            "and" | "or" => {
                let parts = items[1..]
                    .iter()
                    .map(|i| self.formula(i))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(if keyword == "and" {
                    Formula::And(parts)
                } else {
                    Formula::Or(parts)
                })
            }
            "implies" | "iff" => {
                self.arity(expr, items, 2)?;
                let a = Box::new(self.formula(&items[1])?);
                let b = Box::new(self.formula(&items[2])?);
                Ok(if keyword == "implies" {
                    Formula::Implies(a, b)
                } else {
                    Formula::Iff(a, b)
                })
            }
            "forall" | "exists" => {
                self.arity(expr, items, 2)?;
                let vars = self.binders(&items[1])?;
                let mark = self.bound.len();
                self.bound.extend(vars.iter().cloned());
                let body = self.formula(&items[2]);
                self.bound.truncate(mark);
                let body = Box::new(body?);
                Ok(if keyword == "forall" {
                    Formula::ForAll(vars, body)
                } else {
                    Formula::Exists(vars, body)
                })
            }
            "ought" => {
                self.arity(expr, items, 4)?;
                let agent = self.term(&items[1], Sort::Agent)?;
                let time = self.term(&items[2], Sort::Moment)?;
                let condition = self.formula(&items[3])?;
                let action = self.formula(&items[4])?;
                Formula::ought(agent, time, condition, action).map_err(|e| sort_error(items[4].pos(), e))
            }
            kw => match ModalOp::from_keyword(kw) {
                Some(op) => {
                    let n_agents = op.agent_count();
                    self.arity(expr, items, n_agents + 2)?;
                    let agents = items[1..=n_agents]
                        .iter()
                        .map(|a| self.term(a, Sort::Agent))
                        .collect::<Result<Vec<_>, _>>()?;
                    let time = self.term(&items[n_agents + 1], Sort::Moment)?;
                    let body = self.formula(&items[n_agents + 2])?;
                    Formula::modal(op, agents, time, body).map_err(|e| sort_error(pos, e))
                }
                None => Ok(Formula::Atom(self.term(expr, Sort::Boolean)?)),
            },
        }
    }
}
