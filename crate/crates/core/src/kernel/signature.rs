use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use super::{Constant, Formula, FunctionSymbol, Head, KernelError, Sort, SymbolKind, Term};

/// Names of the event-calculus builtins, in declaration order.
pub const BUILTIN_NAMES: [&str; 8] = [
    "action",
    "initially",
    "holds",
    "happens",
    "clipped",
    "initiates",
    "terminates",
    "prior",
];

fn builtin_symbols() -> Vec<FunctionSymbol> {
    use Sort::*;
    let b = |name: &str, args: Vec<Sort>, result: Sort| FunctionSymbol::new(name, args, result, SymbolKind::Builtin);
    vec![
        b("action", vec![Agent, ActionType], Action),
        b("initially", vec![Fluent], Boolean),
        b("holds", vec![Fluent, Moment], Boolean),
        b("happens", vec![Event, Moment], Boolean),
        b("clipped", vec![Moment, Fluent, Moment], Boolean),
        b("initiates", vec![Event, Fluent, Moment], Boolean),
        b("terminates", vec![Event, Fluent, Moment], Boolean),
        b("prior", vec![Moment, Moment], Boolean),
    ]
}

fn builtin_table() -> &'static BTreeMap<String, Arc<FunctionSymbol>> {
    static TABLE: OnceLock<BTreeMap<String, Arc<FunctionSymbol>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        builtin_symbols()
            .into_iter()
            .map(|s| (s.name.clone(), Arc::new(s)))
            .collect()
    })
}

/// One of the event-calculus builtins, independent of any signature.
///
/// # Panics
/// If `name` is not in [`BUILTIN_NAMES`].
pub fn builtin(name: &str) -> Arc<FunctionSymbol> {
    Arc::clone(builtin_table().get(name).expect("not a builtin symbol"))
}

/// Symbol table: builtins, user function/predicate symbols, constants and
/// the declared agents (in declaration order).
#[derive(Clone, Debug)]
pub struct Signature {
    symbols: BTreeMap<String, Arc<FunctionSymbol>>,
    constants: BTreeMap<String, Constant>,
    agents: Vec<Term>,
}

impl Default for Signature {
    fn default() -> Self {
        Self::new()
    }
}

impl Signature {
    pub fn new() -> Self {
        Signature {
            symbols: builtin_table().clone(),
            constants: BTreeMap::new(),
            agents: Vec::new(),
        }
    }

    pub fn is_declared(&self, name: &str) -> bool {
        self.symbols.contains_key(name) || self.constants.contains_key(name)
    }

    pub fn declare_symbol(&mut self, symbol: FunctionSymbol) -> Result<Arc<FunctionSymbol>, KernelError> {
        if self.is_declared(&symbol.name) {
            return Err(KernelError::Duplicate(symbol.name));
        }
        let symbol = Arc::new(symbol);
        self.symbols.insert(symbol.name.clone(), Arc::clone(&symbol));
        Ok(symbol)
    }

    pub fn declare_constant(&mut self, name: &str, sort: Sort) -> Result<Term, KernelError> {
        if self.is_declared(name) {
            return Err(KernelError::Duplicate(name.to_string()));
        }
        let constant = Constant {
            name: name.to_string(),
            sort,
        };
        self.constants.insert(name.to_string(), constant.clone());
        let term = Term::Const(constant);
        if sort == Sort::Agent {
            self.agents.push(term.clone());
        }
        Ok(term)
    }

    pub fn declare_agent(&mut self, name: &str) -> Result<Term, KernelError> {
        self.declare_constant(name, Sort::Agent)
    }

    pub fn symbol(&self, name: &str) -> Option<&Arc<FunctionSymbol>> {
        self.symbols.get(name)
    }

    pub fn constant(&self, name: &str) -> Option<&Constant> {
        self.constants.get(name)
    }

    pub fn builtin(&self, name: &str) -> Arc<FunctionSymbol> {
        Arc::clone(self.symbols.get(name).expect("builtin symbols are always present"))
    }

    pub fn agents(&self) -> &[Term] {
        &self.agents
    }

    pub fn user_symbols(&self) -> impl Iterator<Item = &Arc<FunctionSymbol>> {
        self.symbols.values().filter(|s| s.kind == SymbolKind::User)
    }

    /// Checks a term against this table and returns its sort.
    pub fn sort_of(&self, term: &Term) -> Result<Sort, KernelError> {
        match term {
            Term::Var(v) => Ok(v.sort),
            Term::Moment(_) => Ok(Sort::Moment),
            Term::Const(c) => match self.constants.get(&c.name) {
                Some(declared) if declared.sort == c.sort => Ok(c.sort),
                Some(declared) => Err(KernelError::SortMismatch {
                    context: format!("constant `{}`", c.name),
                    expected: declared.sort,
                    found: c.sort,
                }),
                None => Err(KernelError::UnknownSymbol(c.name.clone())),
            },
            Term::App(head, args) => {
                if let Head::Symbol(symbol) = head {
                    match self.symbols.get(&symbol.name) {
                        Some(declared) if **declared == **symbol => {}
                        Some(_) => {
                            return Err(KernelError::Malformed(format!(
                                "`{}` used with a signature different from its declaration",
                                symbol.name
                            )))
                        }
                        None => return Err(KernelError::UnknownSymbol(symbol.name.clone())),
                    }
                }
                let expected = head.arg_sorts();
                if expected.len() != args.len() {
                    return Err(KernelError::ArityMismatch {
                        symbol: head.name().to_string(),
                        expected: expected.len(),
                        found: args.len(),
                    });
                }
                for (i, (arg, want)) in args.iter().zip(expected).enumerate() {
                    let got = self.sort_of(arg)?;
                    if !got.is_subsort_of(*want) {
                        return Err(KernelError::SortMismatch {
                            context: format!("argument {} of `{}`", i + 1, head.name()),
                            expected: *want,
                            found: got,
                        });
                    }
                }
                Ok(head.result())
            }
        }
    }

    /// Sort-checks every term position of a formula, including the obligation
    /// and modal shape constraints.
    pub fn check_formula(&self, formula: &Formula) -> Result<(), KernelError> {
        match formula {
            Formula::Atom(t) => {
                let sort = self.sort_of(t)?;
                if sort != Sort::Boolean {
                    return Err(KernelError::SortMismatch {
                        context: "atomic formula".into(),
                        expected: Sort::Boolean,
                        found: sort,
                    });
                }
                Ok(())
            }
            Formula::Not(f) | Formula::ForAll(_, f) | Formula::Exists(_, f) => self.check_formula(f),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().try_for_each(|f| self.check_formula(f)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                self.check_formula(a)?;
                self.check_formula(b)
            }
            Formula::Modal { op, agents, time, body } => {
                for a in agents {
                    self.sort_of(a)?;
                }
                self.sort_of(time)?;
                Formula::modal(*op, agents.clone(), time.clone(), Formula::And(vec![]))?;
                self.check_formula(body)
            }
            Formula::Ought {
                agent,
                time,
                condition,
                action,
            } => {
                self.sort_of(agent)?;
                self.sort_of(time)?;
                self.check_formula(condition)?;
                self.check_formula(action)?;
                Formula::ought(agent.clone(), time.clone(), Formula::And(vec![]), (**action).clone())?;
                Ok(())
            }
        }
    }
}
