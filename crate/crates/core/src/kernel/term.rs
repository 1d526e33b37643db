use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::Sort;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    Builtin,
    User,
}

/// A function or predicate symbol with its full signature. Applications carry
/// the symbol itself, so a term knows its own sort without a table lookup.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FunctionSymbol {
    pub name: String,
    pub arg_sorts: Vec<Sort>,
    pub result: Sort,
    pub kind: SymbolKind,
}

impl FunctionSymbol {
    pub fn new(name: impl Into<String>, arg_sorts: Vec<Sort>, result: Sort, kind: SymbolKind) -> Self {
        FunctionSymbol {
            name: name.into(),
            arg_sorts,
            result,
            kind,
        }
    }

    pub fn user(name: impl Into<String>, arg_sorts: Vec<Sort>, result: Sort) -> Arc<Self> {
        Arc::new(Self::new(name, arg_sorts, result, SymbolKind::User))
    }

    pub fn arity(&self) -> usize {
        self.arg_sorts.len()
    }

    pub fn same_signature(&self, other: &FunctionSymbol) -> bool {
        self.arg_sorts == other.arg_sorts && self.result == other.result
    }
}

/// A second-order variable standing for any symbol of the given signature.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolVar {
    pub name: String,
    pub arg_sorts: Vec<Sort>,
    pub result: Sort,
}

impl SymbolVar {
    pub fn new(name: impl Into<String>, arg_sorts: Vec<Sort>, result: Sort) -> Self {
        SymbolVar {
            name: name.into(),
            arg_sorts,
            result,
        }
    }

    pub fn accepts(&self, symbol: &FunctionSymbol) -> bool {
        self.arg_sorts == symbol.arg_sorts && self.result == symbol.result
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub name: String,
    pub sort: Sort,
}

impl Var {
    pub fn new(name: impl Into<String>, sort: Sort) -> Self {
        Var {
            name: name.into(),
            sort,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constant {
    pub name: String,
    pub sort: Sort,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Head {
    Symbol(Arc<FunctionSymbol>),
    Var(SymbolVar),
}

impl Head {
    pub fn name(&self) -> &str {
        match self {
            Head::Symbol(s) => &s.name,
            Head::Var(v) => &v.name,
        }
    }

    pub fn arg_sorts(&self) -> &[Sort] {
        match self {
            Head::Symbol(s) => &s.arg_sorts,
            Head::Var(v) => &v.arg_sorts,
        }
    }

    pub fn result(&self) -> Sort {
        match self {
            Head::Symbol(s) => s.result,
            Head::Var(v) => v.result,
        }
    }

    pub fn symbol(&self) -> Option<&Arc<FunctionSymbol>> {
        match self {
            Head::Symbol(s) => Some(s),
            Head::Var(_) => None,
        }
    }
}

/// A sorted term. Moments are non-negative integer constants.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    Const(Constant),
    Moment(u64),
    App(Head, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>, sort: Sort) -> Term {
        Term::Var(Var::new(name, sort))
    }

    pub fn constant(name: impl Into<String>, sort: Sort) -> Term {
        Term::Const(Constant {
            name: name.into(),
            sort,
        })
    }

    pub fn app(symbol: &Arc<FunctionSymbol>, args: Vec<Term>) -> Term {
        Term::App(Head::Symbol(Arc::clone(symbol)), args)
    }

    /// The sort the term denotes, trusting that it was built well-formed.
    /// Use [`super::Signature::sort_of`] to check a term from an untrusted source.
    pub fn sort(&self) -> Sort {
        match self {
            Term::Var(v) => v.sort,
            Term::Const(c) => c.sort,
            Term::Moment(_) => Sort::Moment,
            Term::App(head, _) => head.result(),
        }
    }

    pub fn as_moment(&self) -> Option<u64> {
        match self {
            Term::Moment(m) => Some(*m),
            _ => None,
        }
    }

    pub fn head_name(&self) -> Option<&str> {
        match self {
            Term::App(head, _) => Some(head.name()),
            _ => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::App(_, args) => args,
            _ => &[],
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) | Term::Moment(_) => true,
            Term::App(head, args) => matches!(head, Head::Symbol(_)) && args.iter().all(Term::is_ground),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) | Term::Moment(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_symbol_vars(&self, out: &mut BTreeSet<SymbolVar>) {
        if let Term::App(head, args) = self {
            if let Head::Var(v) = head {
                out.insert(v.clone());
            }
            args.iter().for_each(|a| a.collect_symbol_vars(out));
        }
    }

    pub fn contains_var_named(&self, name: &str) -> bool {
        match self {
            Term::Var(v) => v.name == name,
            Term::Const(_) | Term::Moment(_) => false,
            Term::App(_, args) => args.iter().any(|a| a.contains_var_named(name)),
        }
    }

    /// Replaces every occurrence of the moment constant `moment` by `with`.
    pub fn replace_moment(&self, moment: u64, with: &Term) -> Term {
        match self {
            Term::Moment(m) if *m == moment => with.clone(),
            Term::App(head, args) => Term::App(
                head.clone(),
                args.iter().map(|a| a.replace_moment(moment, with)).collect(),
            ),
            other => other.clone(),
        }
    }

    /// Number of nodes; used to break ties deterministically.
    pub fn size(&self) -> usize {
        match self {
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            _ => 1,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(&v.name),
            Term::Const(c) => f.write_str(&c.name),
            Term::Moment(m) => write!(f, "{m}"),
            Term::App(head, args) => {
                write!(f, "({}", head.name())?;
                for arg in args {
                    write!(f, " {arg}")?;
                }
                f.write_str(")")
            }
        }
    }
}
