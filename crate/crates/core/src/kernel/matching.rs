//! One-sided matching and equality up to variable renaming.

use std::collections::BTreeMap;

use super::{Formula, Head, Substitution, SymbolVar, Term, Var};

fn is_bound_name(name: &str) -> bool {
    name.starts_with('#')
}

fn mentions_bound(t: &Term) -> bool {
    match t {
        Term::Var(v) => is_bound_name(&v.name),
        Term::App(_, args) => args.iter().any(mentions_bound),
        _ => false,
    }
}

/// Extends `subst` so that `subst(pattern) == target`. On failure the
/// substitution may hold partial bindings; callers that backtrack should
/// work on a copy.
pub fn match_term_into(pattern: &Term, target: &Term, subst: &mut Substitution) -> bool {
    match (pattern, target) {
        (Term::Var(v), _) if is_bound_name(&v.name) => pattern == target,
        (Term::Var(v), _) => {
            if let Some(bound) = subst.get(v) {
                return bound == target;
            }
            if mentions_bound(target) {
                return false;
            }
            subst.bind(v.clone(), target.clone()).is_ok()
        }
        (Term::Const(_), _) | (Term::Moment(_), _) => pattern == target,
        (Term::App(ph, pargs), Term::App(th, targs)) => {
            if pargs.len() != targs.len() {
                return false;
            }
            let heads_ok = match (ph, th) {
                (Head::Symbol(p), Head::Symbol(t)) => p == t,
                (Head::Var(sv), Head::Symbol(sym)) => match subst.get_symbol(sv) {
                    Some(bound) => bound == sym,
                    None => subst.bind_symbol(sv.clone(), sym.clone()).is_ok(),
                },
                (Head::Var(a), Head::Var(b)) => a == b && subst.get_symbol(a).is_none(),
                (Head::Symbol(_), Head::Var(_)) => false,
            };
            heads_ok && pargs.iter().zip(targs).all(|(p, t)| match_term_into(p, t, subst))
        }
        _ => false,
    }
}

fn match_canonical(pattern: &Formula, target: &Formula, subst: &mut Substitution) -> bool {
    use Formula::*;
    match (pattern, target) {
        (Atom(p), Atom(t)) => match_term_into(p, t, subst),
        (Not(p), Not(t)) => match_canonical(p, t, subst),
        (And(ps), And(ts)) | (Or(ps), Or(ts)) => {
            std::mem::discriminant(pattern) == std::mem::discriminant(target)
                && ps.len() == ts.len()
                && ps.iter().zip(ts).all(|(p, t)| match_canonical(p, t, subst))
        }
        (Implies(pa, pb), Implies(ta, tb)) | (Iff(pa, pb), Iff(ta, tb)) => {
            std::mem::discriminant(pattern) == std::mem::discriminant(target)
                && match_canonical(pa, ta, subst)
                && match_canonical(pb, tb, subst)
        }
        (ForAll(pv, pb), ForAll(tv, tb)) | (Exists(pv, pb), Exists(tv, tb)) => {
            std::mem::discriminant(pattern) == std::mem::discriminant(target)
                && pv == tv
                && match_canonical(pb, tb, subst)
        }
        (
            Modal {
                op: pop,
                agents: pa,
                time: pt,
                body: pb,
            },
            Modal {
                op: top,
                agents: ta,
                time: tt,
                body: tb,
            },
        ) => {
            pop == top
                && pa.len() == ta.len()
                && pa.iter().zip(ta).all(|(p, t)| match_term_into(p, t, subst))
                && match_term_into(pt, tt, subst)
                && match_canonical(pb, tb, subst)
        }
        (
            Ought {
                agent: pa,
                time: pt,
                condition: pc,
                action: pact,
            },
            Ought {
                agent: ta,
                time: tt,
                condition: tc,
                action: tact,
            },
        ) => {
            match_term_into(pa, ta, subst)
                && match_term_into(pt, tt, subst)
                && match_canonical(pc, tc, subst)
                && match_canonical(pact, tact, subst)
        }
        _ => false,
    }
}

/// Formula version of [`match_term_into`]; bound variables are compared up to
/// alpha-renaming and are never captured by pattern variables.
pub fn match_formula_into(pattern: &Formula, target: &Formula, subst: &mut Substitution) -> bool {
    match_canonical(&pattern.canonical(), &target.canonical(), subst)
}

/// `Some(θ)` with `θ(pattern) = target`, or `None` when no such θ exists.
pub fn match_term(pattern: &Term, target: &Term) -> Option<Substitution> {
    let mut subst = Substitution::new();
    match_term_into(pattern, target, &mut subst).then_some(subst)
}

pub fn match_formula(pattern: &Formula, target: &Formula) -> Option<Substitution> {
    let mut subst = Substitution::new();
    match_formula_into(pattern, target, &mut subst).then_some(subst)
}

/// Renames free variables and symbol variables to `%0`, `%1`, … by first
/// occurrence across the whole sequence, after alpha-normalising binders.
#[derive(Default)]
struct Renamer {
    vars: BTreeMap<Var, String>,
    symbol_vars: BTreeMap<SymbolVar, String>,
}

impl Renamer {
    fn term(&mut self, t: &Term) -> Term {
        match t {
            Term::Var(v) if is_bound_name(&v.name) => t.clone(),
            Term::Var(v) => {
                let next = self.vars.len();
                let name = self.vars.entry(v.clone()).or_insert_with(|| format!("%{next}"));
                Term::var(name.clone(), v.sort)
            }
            Term::App(head, args) => {
                let head = match head {
                    Head::Var(sv) => {
                        let next = self.symbol_vars.len();
                        let name = self
                            .symbol_vars
                            .entry(sv.clone())
                            .or_insert_with(|| format!("%%{next}"));
                        Head::Var(SymbolVar::new(name.clone(), sv.arg_sorts.clone(), sv.result))
                    }
                    other => other.clone(),
                };
                Term::App(head, args.iter().map(|a| self.term(a)).collect())
            }
            _ => t.clone(),
        }
    }

    fn formula(&mut self, f: &Formula) -> Formula {
        f.canonical().map_terms(&mut |t| self.term(t))
    }
}

pub fn term_variant(a: &Term, b: &Term) -> bool {
    Renamer::default().term(a) == Renamer::default().term(b)
}

pub fn formula_variant(a: &Formula, b: &Formula) -> bool {
    Renamer::default().formula(a) == Renamer::default().formula(b)
}

/// Sequence-level variant check with one renaming shared across all items,
/// so `[p(X), q(X)]` is a variant of `[p(Y), q(Y)]` but not of `[p(Y), q(Z)]`.
pub fn formulas_variant(a: &[Formula], b: &[Formula]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut ra = Renamer::default();
    let mut rb = Renamer::default();
    a.iter().zip(b).all(|(x, y)| ra.formula(x) == rb.formula(y))
}

/// Variant check for a formula sequence followed by a term sharing its variables.
pub fn pattern_variant(a: (&[Formula], &Term), b: (&[Formula], &Term)) -> bool {
    if a.0.len() != b.0.len() {
        return false;
    }
    let mut ra = Renamer::default();
    let mut rb = Renamer::default();
    a.0.iter().zip(b.0).all(|(x, y)| ra.formula(x) == rb.formula(y)) && ra.term(a.1) == rb.term(b.1)
}
