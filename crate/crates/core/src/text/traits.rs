//! Trait store files: one `(trait ...)` record per learnt trait, each
//! preceded by `;` provenance lines.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::kernel::{Signature, Sort, SymbolVar, Var};
use crate::learner::LearntTrait;

use super::elaborate::{is_identifier, Elaborator, FreeVars};
use super::sexpr::{read_all, SExpr};
use super::ParseError;

pub fn print_trait(t: &LearntTrait) -> String {
    let mut vars = BTreeSet::new();
    let mut symbol_vars = BTreeSet::new();
    for f in &t.pattern {
        vars.extend(f.free_vars());
        symbol_vars.extend(f.symbol_vars());
    }
    t.action_pattern.collect_vars(&mut vars);
    t.action_pattern.collect_symbol_vars(&mut symbol_vars);

    let mut decls: Vec<String> = vars.iter().map(|v| format!("({} {})", v.name, v.sort)).collect();
    decls.extend(symbol_vars.iter().map(|sv| {
        let args: Vec<_> = sv.arg_sorts.iter().map(|s| s.name()).collect();
        format!("({} ({}) {})", sv.name, args.join(" "), sv.result)
    }));
    let when: Vec<String> = t.pattern.iter().map(ToString::to_string).collect();

    let mut out = String::new();
    let _ = writeln!(out, "; exemplar: {}", t.exemplar);
    let _ = writeln!(out, "; sources: {}", t.source_situations.join(", "));
    let _ = writeln!(
        out,
        "(trait (exemplar {}) (vars ({})) (when {}) (do {}) (sources {}))",
        t.exemplar,
        decls.join(" "),
        when.join(" "),
        t.action_pattern,
        t.source_situations.join(" ")
    );
    out
}

fn section<'e>(items: &'e [SExpr], name: &str, at: &SExpr) -> Result<&'e [SExpr], ParseError> {
    items
        .iter()
        .find(|i| i.head() == Some(name))
        .and_then(SExpr::as_list)
        .map(|l| &l[1..])
        .ok_or_else(|| ParseError::syntax(at.pos(), format!("trait is missing `({name} ...)`")))
}

fn sort_of(expr: &SExpr) -> Result<Sort, ParseError> {
    let name = expr
        .as_atom()
        .ok_or_else(|| ParseError::syntax(expr.pos(), "expected a sort"))?;
    name.parse()
        .map_err(|e: crate::kernel::UnknownSort| ParseError::syntax(expr.pos(), e.to_string()))
}

fn var_decls(decls: &[SExpr], at: &SExpr) -> Result<(Vec<Var>, Vec<SymbolVar>), ParseError> {
    let list = match decls {
        [SExpr::List(items, _)] => items,
        [] => return Ok((Vec::new(), Vec::new())),
        _ => return Err(ParseError::syntax(at.pos(), "expected `(vars ((name sort) ...))`")),
    };
    let mut vars = Vec::new();
    let mut symbol_vars = Vec::new();
    for d in list {
        let parts = d
            .as_list()
            .ok_or_else(|| ParseError::syntax(d.pos(), "expected a variable declaration"))?;
        let name = parts
            .first()
            .and_then(SExpr::as_atom)
            .filter(|n| is_identifier(n))
            .ok_or_else(|| ParseError::syntax(d.pos(), "expected a variable name"))?;
        match parts {
            [_, sort] => vars.push(Var::new(name, sort_of(sort)?)),
            [_, SExpr::List(args, _), result] => {
                let args = args.iter().map(sort_of).collect::<Result<Vec<_>, _>>()?;
                symbol_vars.push(SymbolVar::new(name, args, sort_of(result)?));
            }
            _ => return Err(ParseError::syntax(d.pos(), "expected `(name sort)` or `(name (sort*) sort)`")),
        }
    }
    Ok((vars, symbol_vars))
}

/// Reads a trait store written by [`print_trait`], resolving symbols against
/// `sig`.
pub fn parse_traits(text: &str, sig: &Signature) -> Result<Vec<LearntTrait>, ParseError> {
    let mut out = Vec::new();
    for expr in read_all(text)? {
        if expr.head() != Some("trait") {
            return Err(ParseError::syntax(expr.pos(), "expected `(trait ...)`"));
        }
        let items = &expr.as_list().unwrap_or(&[])[1..];
        let (vars, symbol_vars) = var_decls(section(items, "vars", &expr)?, &expr)?;
        let mut ground = Elaborator::new(sig, FreeVars::Reject);
        let exemplar = match section(items, "exemplar", &expr)? {
            [a] => ground.term(a, Sort::Agent)?,
            _ => return Err(ParseError::syntax(expr.pos(), "expected `(exemplar AGENT)`")),
        };
        let mut el = Elaborator::new(sig, FreeVars::Reject).with_vars(vars, symbol_vars);
        let pattern = section(items, "when", &expr)?
            .iter()
            .map(|f| el.formula(f))
            .collect::<Result<Vec<_>, _>>()?;
        let action_pattern = match section(items, "do", &expr)? {
            [a] => el.term(a, Sort::ActionType)?,
            _ => return Err(ParseError::syntax(expr.pos(), "expected `(do ACTIONTYPE)`")),
        };
        let source_situations = section(items, "sources", &expr)?
            .iter()
            .map(|s| {
                s.as_atom()
                    .map(str::to_string)
                    .ok_or_else(|| ParseError::syntax(s.pos(), "expected a situation id"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(LearntTrait {
            pattern,
            action_pattern,
            exemplar,
            source_situations,
        });
    }
    Ok(out)
}
