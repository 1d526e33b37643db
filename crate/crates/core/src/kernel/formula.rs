use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{KernelError, Sort, SymbolVar, Term, Var};

/// Intensional operators. `Says` is the agent-to-agent form S(a,b,t,φ),
/// `Announces` the public announcement S(a,t,φ), `Common` has no agent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModalOp {
    Perceives,
    Knows,
    Believes,
    Desires,
    Intends,
    Says,
    Announces,
    Common,
}

impl ModalOp {
    pub const ALL: [ModalOp; 8] = [
        ModalOp::Perceives,
        ModalOp::Knows,
        ModalOp::Believes,
        ModalOp::Desires,
        ModalOp::Intends,
        ModalOp::Says,
        ModalOp::Announces,
        ModalOp::Common,
    ];

    pub fn agent_count(self) -> usize {
        match self {
            ModalOp::Common => 0,
            ModalOp::Says => 2,
            _ => 1,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            ModalOp::Perceives => "perceives",
            ModalOp::Knows => "knows",
            ModalOp::Believes => "believes",
            ModalOp::Desires => "desires",
            ModalOp::Intends => "intends",
            ModalOp::Says => "says",
            ModalOp::Announces => "announces",
            ModalOp::Common => "common",
        }
    }

    pub fn from_keyword(word: &str) -> Option<ModalOp> {
        ModalOp::ALL.iter().copied().find(|op| op.keyword() == word)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    ForAll(Vec<Var>, Box<Formula>),
    Exists(Vec<Var>, Box<Formula>),
    Modal {
        op: ModalOp,
        agents: Vec<Term>,
        time: Term,
        body: Box<Formula>,
    },
    Ought {
        agent: Term,
        time: Term,
        condition: Box<Formula>,
        action: Box<Formula>,
    },
}

fn expect_sort(context: &str, term: &Term, expected: Sort) -> Result<(), KernelError> {
    let found = term.sort();
    if found.is_subsort_of(expected) {
        Ok(())
    } else {
        Err(KernelError::SortMismatch {
            context: context.to_string(),
            expected,
            found,
        })
    }
}

impl Formula {
    pub fn atom(term: Term) -> Result<Formula, KernelError> {
        expect_sort("atomic formula", &term, Sort::Boolean)?;
        Ok(Formula::Atom(term))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(vars: Vec<Var>, body: Formula) -> Formula {
        if vars.is_empty() {
            body
        } else {
            Formula::ForAll(vars, Box::new(body))
        }
    }

    pub fn modal(op: ModalOp, agents: Vec<Term>, time: Term, body: Formula) -> Result<Formula, KernelError> {
        if agents.len() != op.agent_count() {
            return Err(KernelError::Malformed(format!(
                "`{}` takes {} agent(s), found {}",
                op.keyword(),
                op.agent_count(),
                agents.len()
            )));
        }
        for agent in &agents {
            expect_sort(op.keyword(), agent, Sort::Agent)?;
        }
        expect_sort(op.keyword(), &time, Sort::Moment)?;
        Ok(Formula::Modal {
            op,
            agents,
            time,
            body: Box::new(body),
        })
    }

    /// Builds O(a, t, φ, (¬)happens(action(a*, α), t′)), rejecting any other
    /// deontic body.
    pub fn ought(agent: Term, time: Term, condition: Formula, action: Formula) -> Result<Formula, KernelError> {
        expect_sort("ought", &agent, Sort::Agent)?;
        expect_sort("ought", &time, Sort::Moment)?;
        if deontic_action(&action).is_none() {
            return Err(KernelError::Malformed(format!(
                "obligation body must be (not) happens(action(agent, type), moment), found {action}"
            )));
        }
        Ok(Formula::Ought {
            agent,
            time,
            condition: Box::new(condition),
            action: Box::new(action),
        })
    }

    pub fn as_atom(&self) -> Option<&Term> {
        match self {
            Formula::Atom(t) => Some(t),
            _ => None,
        }
    }

    /// Modal nesting depth; `Ought` counts as one level.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f) | Formula::ForAll(_, f) | Formula::Exists(_, f) => f.modal_depth(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::modal_depth).max().unwrap_or(0),
            Formula::Implies(a, b) | Formula::Iff(a, b) => a.modal_depth().max(b.modal_depth()),
            Formula::Modal { body, .. } => 1 + body.modal_depth(),
            Formula::Ought { condition, action, .. } => 1 + condition.modal_depth().max(action.modal_depth()),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_vars(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        let visit_term = |t: &Term, bound: &Vec<Var>, out: &mut BTreeSet<Var>| {
            for v in t.vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self {
            Formula::Atom(t) => visit_term(t, bound, out),
            Formula::Not(f) => f.collect_free_vars(bound, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free_vars(bound, out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free_vars(bound, out);
                b.collect_free_vars(bound, out);
            }
            Formula::ForAll(vars, f) | Formula::Exists(vars, f) => {
                let mark = bound.len();
                bound.extend(vars.iter().cloned());
                f.collect_free_vars(bound, out);
                bound.truncate(mark);
            }
            Formula::Modal { agents, time, body, .. } => {
                agents.iter().for_each(|a| visit_term(a, bound, out));
                visit_term(time, bound, out);
                body.collect_free_vars(bound, out);
            }
            Formula::Ought {
                agent,
                time,
                condition,
                action,
            } => {
                visit_term(agent, bound, out);
                visit_term(time, bound, out);
                condition.collect_free_vars(bound, out);
                action.collect_free_vars(bound, out);
            }
        }
    }

    pub fn symbol_vars(&self) -> BTreeSet<SymbolVar> {
        let mut out = BTreeSet::new();
        self.for_each_term(&mut |t| t.collect_symbol_vars(&mut out));
        out
    }

    /// Visits every term position (atoms, modal agents and times) in order.
    pub fn for_each_term(&self, visit: &mut impl FnMut(&Term)) {
        match self {
            Formula::Atom(t) => visit(t),
            Formula::Not(f) | Formula::ForAll(_, f) | Formula::Exists(_, f) => f.for_each_term(visit),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.for_each_term(visit)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.for_each_term(visit);
                b.for_each_term(visit);
            }
            Formula::Modal { agents, time, body, .. } => {
                agents.iter().for_each(&mut *visit);
                visit(time);
                body.for_each_term(visit);
            }
            Formula::Ought {
                agent,
                time,
                condition,
                action,
            } => {
                visit(agent);
                visit(time);
                condition.for_each_term(visit);
                action.for_each_term(visit);
            }
        }
    }

    /// Rebuilds the formula with every term position mapped; binders are kept.
    pub fn map_terms(&self, f: &mut impl FnMut(&Term) -> Term) -> Formula {
        match self {
            Formula::Atom(t) => Formula::Atom(f(t)),
            Formula::Not(g) => Formula::Not(Box::new(g.map_terms(f))),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| g.map_terms(f)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| g.map_terms(f)).collect()),
            Formula::Implies(a, b) => Formula::Implies(Box::new(a.map_terms(f)), Box::new(b.map_terms(f))),
            Formula::Iff(a, b) => Formula::Iff(Box::new(a.map_terms(f)), Box::new(b.map_terms(f))),
            Formula::ForAll(vs, g) => Formula::ForAll(vs.clone(), Box::new(g.map_terms(f))),
            Formula::Exists(vs, g) => Formula::Exists(vs.clone(), Box::new(g.map_terms(f))),
            Formula::Modal { op, agents, time, body } => Formula::Modal {
                op: *op,
                agents: agents.iter().map(&mut *f).collect(),
                time: f(time),
                body: Box::new(body.map_terms(f)),
            },
            Formula::Ought {
                agent,
                time,
                condition,
                action,
            } => Formula::Ought {
                agent: f(agent),
                time: f(time),
                condition: Box::new(condition.map_terms(f)),
                action: Box::new(action.map_terms(f)),
            },
        }
    }

    pub fn is_ground(&self) -> bool {
        self.free_vars().is_empty() && self.symbol_vars().is_empty()
    }

    pub fn replace_moment(&self, moment: u64, with: &Term) -> Formula {
        self.map_terms(&mut |t| t.replace_moment(moment, with))
    }

    /// Alpha-normal form: bound variables are renamed `#0`, `#1`, … in binder
    /// order. Free variables are left alone.
    pub fn canonical(&self) -> Formula {
        let mut counter = 0;
        canonicalize(self, &mut BTreeMap::new(), &mut counter)
    }

    pub fn alpha_eq(&self, other: &Formula) -> bool {
        self == other || self.canonical() == other.canonical()
    }
}

/// The (possibly negated) `happens(action(a, α), t)` inside an obligation.
pub fn deontic_action(f: &Formula) -> Option<&Term> {
    let inner = match f {
        Formula::Not(g) => g.as_ref(),
        other => other,
    };
    let atom = inner.as_atom()?;
    if atom.head_name() != Some("happens") {
        return None;
    }
    let event = atom.args().first()?;
    if event.head_name() == Some("action") {
        Some(event)
    } else {
        None
    }
}

fn rename_term(t: &Term, scope: &BTreeMap<Var, Vec<String>>) -> Term {
    match t {
        Term::Var(v) => match scope.get(v).and_then(|stack| stack.last()) {
            Some(name) => Term::var(name.clone(), v.sort),
            None => t.clone(),
        },
        Term::App(head, args) => Term::App(head.clone(), args.iter().map(|a| rename_term(a, scope)).collect()),
        _ => t.clone(),
    }
}

fn canonicalize(f: &Formula, scope: &mut BTreeMap<Var, Vec<String>>, counter: &mut usize) -> Formula {
    let bind = |vars: &[Var], scope: &mut BTreeMap<Var, Vec<String>>, counter: &mut usize| -> Vec<Var> {
        vars.iter()
            .map(|v| {
                let name = format!("#{counter}");
                *counter += 1;
                scope.entry(v.clone()).or_default().push(name.clone());
                Var::new(name, v.sort)
            })
            .collect()
    };
    let unbind = |vars: &[Var], scope: &mut BTreeMap<Var, Vec<String>>| {
        for v in vars {
            if let Some(stack) = scope.get_mut(v) {
                stack.pop();
            }
        }
    };
    match f {
        Formula::ForAll(vars, body) | Formula::Exists(vars, body) => {
            let renamed = bind(vars, scope, counter);
            let body = canonicalize(body, scope, counter);
            unbind(vars, scope);
            if matches!(f, Formula::ForAll(..)) {
                Formula::ForAll(renamed, Box::new(body))
            } else {
                Formula::Exists(renamed, Box::new(body))
            }
        }
        Formula::Atom(t) => Formula::Atom(rename_term(t, scope)),
        Formula::Not(g) => Formula::Not(Box::new(canonicalize(g, scope, counter))),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| canonicalize(g, scope, counter)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| canonicalize(g, scope, counter)).collect()),
        Formula::Implies(a, b) => Formula::Implies(
            Box::new(canonicalize(a, scope, counter)),
            Box::new(canonicalize(b, scope, counter)),
        ),
        Formula::Iff(a, b) => Formula::Iff(
            Box::new(canonicalize(a, scope, counter)),
            Box::new(canonicalize(b, scope, counter)),
        ),
        Formula::Modal { op, agents, time, body } => Formula::Modal {
            op: *op,
            agents: agents.iter().map(|a| rename_term(a, scope)).collect(),
            time: rename_term(time, scope),
            body: Box::new(canonicalize(body, scope, counter)),
        },
        Formula::Ought {
            agent,
            time,
            condition,
            action,
        } => Formula::Ought {
            agent: rename_term(agent, scope),
            time: rename_term(time, scope),
            condition: Box::new(canonicalize(condition, scope, counter)),
            action: Box::new(canonicalize(action, scope, counter)),
        },
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, keyword: &str, items: &[Formula]) -> fmt::Result {
    write!(f, "({keyword}")?;
    for item in items {
        write!(f, " {item}")?;
    }
    f.write_str(")")
}

fn write_binder(f: &mut fmt::Formatter<'_>, keyword: &str, vars: &[Var], body: &Formula) -> fmt::Result {
    write!(f, "({keyword} (")?;
    for (i, v) in vars.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "({} {})", v.name, v.sort)?;
    }
    write!(f, ") {body})")
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(t) => write!(f, "{t}"),
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::And(gs) => write_list(f, "and", gs),
            Formula::Or(gs) => write_list(f, "or", gs),
            Formula::Implies(a, b) => write!(f, "(implies {a} {b})"),
            Formula::Iff(a, b) => write!(f, "(iff {a} {b})"),
            Formula::ForAll(vs, body) => write_binder(f, "forall", vs, body),
            Formula::Exists(vs, body) => write_binder(f, "exists", vs, body),
            Formula::Modal { op, agents, time, body } => {
                write!(f, "({}", op.keyword())?;
                for a in agents {
                    write!(f, " {a}")?;
                }
                write!(f, " {time} {body})")
            }
            Formula::Ought {
                agent,
                time,
                condition,
                action,
            } => write!(f, "(ought {agent} {time} {condition} {action})"),
        }
    }
}
