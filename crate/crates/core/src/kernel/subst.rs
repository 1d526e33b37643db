use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::{Formula, FunctionSymbol, Head, KernelError, SymbolVar, Term, Var};

/// A finite, sort-preserving map from variables to terms and from symbol
/// variables to symbols. Bindings are checked when they are added, so
/// application itself cannot fail.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    terms: BTreeMap<Var, Term>,
    symbols: BTreeMap<SymbolVar, Arc<FunctionSymbol>>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty() && self.symbols.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len() + self.symbols.len()
    }

    pub fn bind(&mut self, var: Var, term: Term) -> Result<(), KernelError> {
        let found = term.sort();
        if !found.is_subsort_of(var.sort) {
            return Err(KernelError::SortMismatch {
                context: format!("binding for `{}`", var.name),
                expected: var.sort,
                found,
            });
        }
        self.terms.insert(var, term);
        Ok(())
    }

    pub fn bind_symbol(&mut self, var: SymbolVar, symbol: Arc<FunctionSymbol>) -> Result<(), KernelError> {
        if !var.accepts(&symbol) {
            return Err(KernelError::Malformed(format!(
                "symbol `{}` does not fit the signature of `{}`",
                symbol.name, var.name
            )));
        }
        self.symbols.insert(var, symbol);
        Ok(())
    }

    pub fn get(&self, var: &Var) -> Option<&Term> {
        self.terms.get(var)
    }

    pub fn get_symbol(&self, var: &SymbolVar) -> Option<&Arc<FunctionSymbol>> {
        self.symbols.get(var)
    }

    pub fn term_bindings(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.terms.iter()
    }

    pub fn symbol_bindings(&self) -> impl Iterator<Item = (&SymbolVar, &Arc<FunctionSymbol>)> {
        self.symbols.iter()
    }

    pub fn remove(&mut self, var: &Var) -> Option<Term> {
        self.terms.remove(var)
    }

    pub fn apply_term(&self, term: &Term) -> Term {
        match term {
            Term::Var(v) => self.terms.get(v).cloned().unwrap_or_else(|| term.clone()),
            Term::Const(_) | Term::Moment(_) => term.clone(),
            Term::App(head, args) => {
                let head = match head {
                    Head::Var(sv) => match self.symbols.get(sv) {
                        Some(symbol) => Head::Symbol(Arc::clone(symbol)),
                        None => head.clone(),
                    },
                    Head::Symbol(_) => head.clone(),
                };
                Term::App(head, args.iter().map(|a| self.apply_term(a)).collect())
            }
        }
    }

    /// Replaces free occurrences only. Binders that would capture a variable
    /// of the substituted terms are renamed.
    pub fn apply(&self, formula: &Formula) -> Formula {
        if self.is_empty() {
            return formula.clone();
        }
        match formula {
            Formula::ForAll(vars, body) | Formula::Exists(vars, body) => {
                let (vars, inner) = self.enter_binder(vars, body);
                let body = Box::new(inner.apply(body));
                if matches!(formula, Formula::ForAll(..)) {
                    Formula::ForAll(vars, body)
                } else {
                    Formula::Exists(vars, body)
                }
            }
            Formula::Atom(t) => Formula::Atom(self.apply_term(t)),
            Formula::Not(g) => Formula::Not(Box::new(self.apply(g))),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| self.apply(g)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| self.apply(g)).collect()),
            Formula::Implies(a, b) => Formula::Implies(Box::new(self.apply(a)), Box::new(self.apply(b))),
            Formula::Iff(a, b) => Formula::Iff(Box::new(self.apply(a)), Box::new(self.apply(b))),
            Formula::Modal { op, agents, time, body } => Formula::Modal {
                op: *op,
                agents: agents.iter().map(|a| self.apply_term(a)).collect(),
                time: self.apply_term(time),
                body: Box::new(self.apply(body)),
            },
            Formula::Ought {
                agent,
                time,
                condition,
                action,
            } => Formula::Ought {
                agent: self.apply_term(agent),
                time: self.apply_term(time),
                condition: Box::new(self.apply(condition)),
                action: Box::new(self.apply(action)),
            },
        }
    }

    fn enter_binder(&self, vars: &[Var], body: &Formula) -> (Vec<Var>, Substitution) {
        let mut inner = self.clone();
        for v in vars {
            inner.terms.remove(v);
        }
        let range_names: BTreeSet<String> = inner
            .terms
            .values()
            .flat_map(|t| t.vars())
            .map(|v| v.name)
            .collect();
        let mut taken: BTreeSet<String> = body.free_vars().into_iter().map(|v| v.name).collect();
        taken.extend(range_names.iter().cloned());
        taken.extend(vars.iter().map(|v| v.name.clone()));
        let mut renamed = Vec::with_capacity(vars.len());
        for v in vars {
            if range_names.contains(&v.name) {
                let fresh = (1..)
                    .map(|k| format!("{}_{k}", v.name))
                    .find(|n| !taken.contains(n))
                    .expect("an unused name exists");
                taken.insert(fresh.clone());
                let fresh_var = Var::new(fresh, v.sort);
                inner.terms.insert(v.clone(), Term::Var(fresh_var.clone()));
                renamed.push(fresh_var);
            } else {
                renamed.push(v.clone());
            }
        }
        (renamed, inner)
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        let mut first = true;
        for (sv, symbol) in &self.symbols {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "({} {})", sv.name, symbol.name)?;
        }
        for (v, t) in &self.terms {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "({} {t})", v.name)?;
        }
        f.write_str(")")
    }
}
