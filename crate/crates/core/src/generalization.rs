//! Anti-unification (least general generalization) of terms, formulas and
//! formula sets.
//!
//! Variables are introduced per *tuple* of differing input subterms: the
//! same tuple always yields the same variable, which is what makes the
//! result least general. Names are `X0, X1, …` for term variables and
//! `P0, P1, …` for symbol variables, numbered by first occurrence in a
//! leftmost, pre-order walk.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::kernel::{match_formula_into, Formula, Head, Substitution, SymbolVar, Term, Var};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    #[default]
    FirstOrder,
    /// Differing symbols with identical signatures become symbol variables.
    HigherOrder,
}

impl Mode {
    pub fn keyword(self) -> &'static str {
        match self {
            Mode::FirstOrder => "fo",
            Mode::HigherOrder => "ho",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Mode> {
        match word {
            "fo" => Some(Mode::FirstOrder),
            "ho" => Some(Mode::HigherOrder),
            _ => None,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneralizationError {
    #[error("cannot generalize {0}")]
    Incompatible(String),
    #[error("no formula can be aligned across all {0} sets")]
    NoAlignment(usize),
}

fn incompatible<T: fmt::Display>(inputs: &[T]) -> GeneralizationError {
    let shown: Vec<String> = inputs.iter().map(ToString::to_string).collect();
    GeneralizationError::Incompatible(shown.join(", "))
}

/// An anti-unification result: `substitutions[i]` applied to `pattern`
/// gives back input `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Generalization<P> {
    pub pattern: P,
    pub substitutions: Vec<Substitution>,
    pub mode: Mode,
    /// Whether every input formula was covered (always true for single
    /// terms and formulas).
    pub total: bool,
}

fn is_bound(t: &Term) -> bool {
    match t {
        Term::Var(v) => v.name.starts_with('#'),
        Term::App(_, args) => args.iter().any(is_bound),
        _ => false,
    }
}

/// Shared anti-unification state over a fixed number of inputs. Reusing one
/// state across several calls links variables between their results.
#[derive(Clone, Debug)]
pub struct AntiUnifier {
    mode: Mode,
    arity: usize,
    vars: BTreeMap<Vec<Term>, Var>,
    symbol_vars: BTreeMap<Vec<Head>, SymbolVar>,
}

impl AntiUnifier {
    pub fn new(mode: Mode, arity: usize) -> Self {
        AntiUnifier {
            mode,
            arity,
            vars: BTreeMap::new(),
            symbol_vars: BTreeMap::new(),
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Variables introduced so far, in creation order.
    pub fn introduced(&self) -> Vec<Var> {
        let mut vars: Vec<Var> = self.vars.values().cloned().collect();
        vars.sort_by_key(|v| v.name[1..].parse::<usize>().unwrap_or(usize::MAX));
        vars
    }

    pub fn introduced_symbols(&self) -> Vec<SymbolVar> {
        let mut vars: Vec<SymbolVar> = self.symbol_vars.values().cloned().collect();
        vars.sort_by_key(|v| v.name[1..].parse::<usize>().unwrap_or(usize::MAX));
        vars
    }

    /// θᵢ for every input index, covering all variables introduced so far.
    pub fn substitutions(&self) -> Vec<Substitution> {
        (0..self.arity)
            .map(|i| {
                let mut s = Substitution::new();
                for (heads, sv) in &self.symbol_vars {
                    if let Head::Symbol(sym) = &heads[i] {
                        s.bind_symbol(sv.clone(), sym.clone())
                            .expect("symbol variables share their symbols' signature");
                    }
                }
                for (tuple, v) in &self.vars {
                    s.bind(v.clone(), tuple[i].clone())
                        .expect("variable sort is the join of its inputs");
                }
                s
            })
            .collect()
    }

    fn variable_for(&mut self, inputs: &[Term]) -> Result<Term, GeneralizationError> {
        if let Some(v) = self.vars.get(inputs) {
            return Ok(Term::Var(v.clone()));
        }
        if inputs.iter().any(is_bound) {
            return Err(incompatible(inputs));
        }
        let mut sort = inputs[0].sort();
        for t in &inputs[1..] {
            sort = sort.join(t.sort()).ok_or_else(|| incompatible(inputs))?;
        }
        if sort == crate::kernel::Sort::Boolean {
            // a whole atom; only its symbol may be abstracted
            return Err(incompatible(inputs));
        }
        let v = Var::new(format!("X{}", self.vars.len()), sort);
        self.vars.insert(inputs.to_vec(), v.clone());
        Ok(Term::Var(v))
    }

    fn head_for(&mut self, heads: &[&Head]) -> Option<Head> {
        if heads.iter().all(|h| *h == heads[0]) {
            return Some(heads[0].clone());
        }
        if self.mode != Mode::HigherOrder {
            return None;
        }
        let first = heads[0];
        let same_signature = heads
            .iter()
            .all(|h| h.arg_sorts() == first.arg_sorts() && h.result() == first.result());
        if !same_signature {
            return None;
        }
        let key: Vec<Head> = heads.iter().map(|h| (*h).clone()).collect();
        let next = self.symbol_vars.len();
        let sv = self
            .symbol_vars
            .entry(key)
            .or_insert_with(|| SymbolVar::new(format!("P{next}"), first.arg_sorts().to_vec(), first.result()));
        Some(Head::Var(sv.clone()))
    }

    /// The lgg of `inputs` (one term per input index).
    pub fn terms(&mut self, inputs: &[Term]) -> Result<Term, GeneralizationError> {
        assert_eq!(inputs.len(), self.arity, "one term per input");
        if inputs.iter().all(|t| t == &inputs[0]) {
            return Ok(inputs[0].clone());
        }
        let apps: Option<Vec<(&Head, &[Term])>> = inputs
            .iter()
            .map(|t| match t {
                Term::App(h, args) => Some((h, args.as_slice())),
                _ => None,
            })
            .collect();
        if let Some(apps) = apps {
            let arity = apps[0].1.len();
            if apps.iter().all(|(_, args)| args.len() == arity) {
                let heads: Vec<&Head> = apps.iter().map(|(h, _)| *h).collect();
                // claim the symbol variable before visiting arguments
                let snapshot = (self.vars.clone(), self.symbol_vars.clone());
                if let Some(head) = self.head_for(&heads) {
                    let mut args = Vec::with_capacity(arity);
                    let mut failed = None;
                    for k in 0..arity {
                        let column: Vec<Term> = apps.iter().map(|(_, a)| a[k].clone()).collect();
                        match self.terms(&column) {
                            Ok(t) => args.push(t),
                            Err(e) => {
                                failed = Some(e);
                                break;
                            }
                        }
                    }
                    match failed {
                        None => return Ok(Term::App(head, args)),
                        Some(e) => {
                            (self.vars, self.symbol_vars) = snapshot;
                            if inputs.iter().any(is_bound) || inputs[0].sort() == crate::kernel::Sort::Boolean {
                                return Err(e);
                            }
                        }
                    }
                }
            }
        }
        self.variable_for(inputs)
    }

    fn all_same<'a, T: PartialEq + 'a>(items: impl Iterator<Item = &'a T>) -> bool {
        let items: Vec<&T> = items.collect();
        items.iter().all(|x| *x == items[0])
    }

    fn column<'f, T>(inputs: &[&'f Formula], pick: impl Fn(&'f Formula) -> Option<T>) -> Option<Vec<T>> {
        inputs.iter().map(|f| pick(f)).collect()
    }

    fn canonical_formulas(&mut self, inputs: &[&Formula]) -> Result<Formula, GeneralizationError> {
        use Formula::*;
        let err = || incompatible(inputs);
        match inputs[0] {
            Atom(_) => {
                let ts = Self::column(inputs, |f| f.as_atom().cloned()).ok_or_else(err)?;
                Ok(Atom(self.terms(&ts)?))
            }
            Not(_) => {
                let gs = Self::column(inputs, |f| match f {
                    Not(g) => Some(g.as_ref()),
                    _ => None,
                })
                .ok_or_else(err)?;
                Ok(Formula::not(self.canonical_formulas(&gs)?))
            }
            And(first) | Or(first) => {
                let is_and = matches!(inputs[0], And(_));
                let lists = Self::column(inputs, |f| match (f, is_and) {
                    (And(xs), true) | (Or(xs), false) => Some(xs),
                    _ => None,
                })
                .ok_or_else(err)?;
                if lists.iter().any(|l| l.len() != first.len()) {
                    return Err(err());
                }
                let mut parts = Vec::with_capacity(first.len());
                for k in 0..first.len() {
                    let col: Vec<&Formula> = lists.iter().map(|l| &l[k]).collect();
                    parts.push(self.canonical_formulas(&col)?);
                }
                Ok(if is_and { And(parts) } else { Or(parts) })
            }
            Implies(..) | Iff(..) => {
                let is_implies = matches!(inputs[0], Implies(..));
                let pairs = Self::column(inputs, |f| match (f, is_implies) {
                    (Implies(a, b), true) | (Iff(a, b), false) => Some((a.as_ref(), b.as_ref())),
                    _ => None,
                })
                .ok_or_else(err)?;
                let a = self.canonical_formulas(&pairs.iter().map(|p| p.0).collect::<Vec<_>>())?;
                let b = self.canonical_formulas(&pairs.iter().map(|p| p.1).collect::<Vec<_>>())?;
                Ok(if is_implies {
                    Implies(Box::new(a), Box::new(b))
                } else {
                    Iff(Box::new(a), Box::new(b))
                })
            }
            ForAll(vars, _) | Exists(vars, _) => {
                let is_forall = matches!(inputs[0], ForAll(..));
                let parts = Self::column(inputs, |f| match (f, is_forall) {
                    (ForAll(vs, b), true) | (Exists(vs, b), false) => Some((vs, b.as_ref())),
                    _ => None,
                })
                .ok_or_else(err)?;
                if !Self::all_same(parts.iter().map(|p| p.0)) {
                    return Err(err());
                }
                let body = self.canonical_formulas(&parts.iter().map(|p| p.1).collect::<Vec<_>>())?;
                Ok(if is_forall {
                    ForAll(vars.clone(), Box::new(body))
                } else {
                    Exists(vars.clone(), Box::new(body))
                })
            }
            Modal { op, agents, .. } => {
                let parts = Self::column(inputs, |f| match f {
                    Modal {
                        op: o,
                        agents: a,
                        time,
                        body,
                    } if o == op && a.len() == agents.len() => Some((a, time, body.as_ref())),
                    _ => None,
                })
                .ok_or_else(err)?;
                let mut new_agents = Vec::with_capacity(agents.len());
                for k in 0..agents.len() {
                    let col: Vec<Term> = parts.iter().map(|p| p.0[k].clone()).collect();
                    new_agents.push(self.terms(&col)?);
                }
                let times: Vec<Term> = parts.iter().map(|p| p.1.clone()).collect();
                let time = self.terms(&times)?;
                let body = self.canonical_formulas(&parts.iter().map(|p| p.2).collect::<Vec<_>>())?;
                Ok(Modal {
                    op: *op,
                    agents: new_agents,
                    time,
                    body: Box::new(body),
                })
            }
            Ought { .. } => {
                let parts = Self::column(inputs, |f| match f {
                    Ought {
                        agent,
                        time,
                        condition,
                        action,
                    } => Some((agent, time, condition.as_ref(), action.as_ref())),
                    _ => None,
                })
                .ok_or_else(err)?;
                let agent = self.terms(&parts.iter().map(|p| p.0.clone()).collect::<Vec<_>>())?;
                let time = self.terms(&parts.iter().map(|p| p.1.clone()).collect::<Vec<_>>())?;
                let condition = self.canonical_formulas(&parts.iter().map(|p| p.2).collect::<Vec<_>>())?;
                let action = self.canonical_formulas(&parts.iter().map(|p| p.3).collect::<Vec<_>>())?;
                Ok(Ought {
                    agent,
                    time,
                    condition: Box::new(condition),
                    action: Box::new(action),
                })
            }
        }
    }

    /// The lgg of `inputs` (one formula per input index). Bound variables
    /// keep the names they have in the first input.
    pub fn formulas(&mut self, inputs: &[Formula]) -> Result<Formula, GeneralizationError> {
        assert_eq!(inputs.len(), self.arity, "one formula per input");
        let canonical: Vec<Formula> = inputs.iter().map(Formula::canonical).collect();
        let refs: Vec<&Formula> = canonical.iter().collect();
        let snapshot = (self.vars.clone(), self.symbol_vars.clone());
        let pattern = self.canonical_formulas(&refs).inspect_err(|_| {
            (self.vars, self.symbol_vars) = snapshot;
        })?;
        Ok(restore_binders(&pattern, &inputs[0]))
    }
}

fn binders_in_order(f: &Formula, out: &mut Vec<Var>) {
    match f {
        Formula::ForAll(vs, b) | Formula::Exists(vs, b) => {
            out.extend(vs.iter().cloned());
            binders_in_order(b, out);
        }
        Formula::Atom(_) => {}
        Formula::Not(g) => binders_in_order(g, out),
        Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| binders_in_order(g, out)),
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            binders_in_order(a, out);
            binders_in_order(b, out);
        }
        Formula::Modal { body, .. } => binders_in_order(body, out),
        Formula::Ought { condition, action, .. } => {
            binders_in_order(condition, out);
            binders_in_order(action, out);
        }
    }
}

/// Renames the canonical binders `#k` of `pattern` back to the binder names
/// of `original`, avoiding the pattern's free variable names.
fn restore_binders(pattern: &Formula, original: &Formula) -> Formula {
    let mut names = Vec::new();
    binders_in_order(original, &mut names);
    if names.is_empty() {
        return pattern.clone();
    }
    let taken: BTreeSet<String> = pattern.free_vars().into_iter().map(|v| v.name).collect();
    let rename = |name: &str| -> Option<String> {
        let k: usize = name.strip_prefix('#')?.parse().ok()?;
        let base = &names.get(k)?.name;
        let mut candidate = base.clone();
        let mut i = 1;
        while taken.contains(&candidate) {
            candidate = format!("{base}_{i}");
            i += 1;
        }
        Some(candidate)
    };
    fn walk_term(t: &Term, rename: &dyn Fn(&str) -> Option<String>) -> Term {
        match t {
            Term::Var(v) => match rename(&v.name) {
                Some(n) => Term::var(n, v.sort),
                None => t.clone(),
            },
            Term::App(h, args) => Term::App(h.clone(), args.iter().map(|a| walk_term(a, rename)).collect()),
            _ => t.clone(),
        }
    }
    fn walk(f: &Formula, rename: &dyn Fn(&str) -> Option<String>) -> Formula {
        let vars = |vs: &[Var]| -> Vec<Var> {
            vs.iter()
                .map(|v| Var::new(rename(&v.name).unwrap_or_else(|| v.name.clone()), v.sort))
                .collect()
        };
        match f {
            Formula::ForAll(vs, b) => Formula::ForAll(vars(vs), Box::new(walk(b, rename))),
            Formula::Exists(vs, b) => Formula::Exists(vars(vs), Box::new(walk(b, rename))),
            Formula::Not(g) => Formula::Not(Box::new(walk(g, rename))),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| walk(g, rename)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| walk(g, rename)).collect()),
            Formula::Implies(a, b) => Formula::Implies(Box::new(walk(a, rename)), Box::new(walk(b, rename))),
            Formula::Iff(a, b) => Formula::Iff(Box::new(walk(a, rename)), Box::new(walk(b, rename))),
            Formula::Atom(t) => Formula::Atom(walk_term(t, rename)),
            Formula::Modal { op, agents, time, body } => Formula::Modal {
                op: *op,
                agents: agents.iter().map(|a| walk_term(a, rename)).collect(),
                time: walk_term(time, rename),
                body: Box::new(walk(body, rename)),
            },
            Formula::Ought {
                agent,
                time,
                condition,
                action,
            } => Formula::Ought {
                agent: walk_term(agent, rename),
                time: walk_term(time, rename),
                condition: Box::new(walk(condition, rename)),
                action: Box::new(walk(action, rename)),
            },
        }
    }
    walk(pattern, &rename)
}

/// Least general generalization of a nonempty list of terms.
pub fn anti_unify_terms(inputs: &[Term], mode: Mode) -> Result<Generalization<Term>, GeneralizationError> {
    assert!(!inputs.is_empty(), "anti-unification needs at least one input");
    let mut au = AntiUnifier::new(mode, inputs.len());
    let pattern = au.terms(inputs)?;
    Ok(Generalization {
        pattern,
        substitutions: au.substitutions(),
        mode,
        total: true,
    })
}

/// Least general generalization of a nonempty list of formulas.
pub fn anti_unify(inputs: &[Formula], mode: Mode) -> Result<Generalization<Formula>, GeneralizationError> {
    assert!(!inputs.is_empty(), "anti-unification needs at least one input");
    let mut au = AntiUnifier::new(mode, inputs.len());
    let pattern = au.formulas(inputs)?;
    Ok(Generalization {
        pattern,
        substitutions: au.substitutions(),
        mode,
        total: true,
    })
}

/// Alignment key: connective and modal skeleton plus predicate symbols (or,
/// in higher-order mode, predicate signatures).
fn structural_key(f: &Formula, mode: Mode, out: &mut String) {
    use std::fmt::Write;
    match f {
        Formula::Atom(t) => match (t, mode) {
            (Term::App(h, _), Mode::FirstOrder) => {
                let _ = write!(out, "{}", h.name());
            }
            (Term::App(h, _), Mode::HigherOrder) => {
                let sorts: Vec<_> = h.arg_sorts().iter().map(|s| s.name()).collect();
                let _ = write!(out, "<{}>", sorts.join(","));
            }
            (other, _) => {
                let _ = write!(out, "{other}");
            }
        },
        Formula::Not(g) => {
            out.push_str("(not ");
            structural_key(g, mode, out);
            out.push(')');
        }
        Formula::And(gs) | Formula::Or(gs) => {
            out.push_str(if matches!(f, Formula::And(_)) { "(and" } else { "(or" });
            for g in gs {
                out.push(' ');
                structural_key(g, mode, out);
            }
            out.push(')');
        }
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            out.push_str(if matches!(f, Formula::Implies(..)) { "(implies " } else { "(iff " });
            structural_key(a, mode, out);
            out.push(' ');
            structural_key(b, mode, out);
            out.push(')');
        }
        Formula::ForAll(vs, b) | Formula::Exists(vs, b) => {
            let sorts: Vec<_> = vs.iter().map(|v| v.sort.name()).collect();
            let kw = if matches!(f, Formula::ForAll(..)) { "forall" } else { "exists" };
            let _ = write!(out, "({kw} [{}] ", sorts.join(","));
            structural_key(b, mode, out);
            out.push(')');
        }
        Formula::Modal { op, body, .. } => {
            let _ = write!(out, "({} ", op.keyword());
            structural_key(body, mode, out);
            out.push(')');
        }
        Formula::Ought { condition, action, .. } => {
            out.push_str("(ought ");
            structural_key(condition, mode, out);
            out.push(' ');
            structural_key(action, mode, out);
            out.push(')');
        }
    }
}

fn key_of(f: &Formula, mode: Mode) -> String {
    let mut s = String::new();
    structural_key(f, mode, &mut s);
    s
}

/// Generalization of a list of formula sets.
#[derive(Clone, Debug, PartialEq)]
pub struct SetGeneralization {
    /// Open patterns; variables are shared between them.
    pub pattern: Vec<Formula>,
    /// Each pattern universally closed over the variables introduced here.
    pub closed: Vec<Formula>,
    pub substitutions: Vec<Substitution>,
    pub mode: Mode,
    pub total: bool,
}

/// Picks aligned tuples (one member of every set) greedily, cheapest first
/// by number of introduced variables, ties by print order.
fn align(sets: &[Vec<Formula>], mode: Mode) -> Vec<Vec<Formula>> {
    const EXHAUSTIVE_LIMIT: usize = 4096;
    let mut groups: BTreeMap<String, Vec<Vec<(String, &Formula)>>> = BTreeMap::new();
    for (i, set) in sets.iter().enumerate() {
        for f in set {
            let entry = groups
                .entry(key_of(f, mode))
                .or_insert_with(|| vec![Vec::new(); sets.len()]);
            entry[i].push((f.canonical().to_string(), f));
        }
    }
    let mut tuples: Vec<Vec<Formula>> = Vec::new();
    for members in groups.values_mut() {
        if members.iter().any(Vec::is_empty) {
            continue;
        }
        for m in members.iter_mut() {
            m.sort_by(|a, b| a.0.cmp(&b.0));
        }
        let mut used: Vec<Vec<bool>> = members.iter().map(|m| vec![false; m.len()]).collect();
        let rounds = members.iter().map(Vec::len).min().unwrap_or(0);
        let candidates: usize = members.iter().map(Vec::len).product();
        for _ in 0..rounds {
            let mut best: Option<(usize, Vec<usize>)> = None;
            if candidates <= EXHAUSTIVE_LIMIT {
                let mut idx = vec![0usize; members.len()];
                'outer: loop {
                    if idx.iter().enumerate().all(|(i, &j)| !used[i][j]) {
                        let tuple: Vec<Formula> = idx.iter().enumerate().map(|(i, &j)| members[i][j].1.clone()).collect();
                        let mut au = AntiUnifier::new(mode, tuple.len());
                        if au.formulas(&tuple).is_ok() {
                            let cost = au.vars.len() + au.symbol_vars.len();
                            if best.as_ref().is_none_or(|(c, _)| cost < *c) {
                                best = Some((cost, idx.clone()));
                            }
                        }
                    }
                    // odometer over member indices; earlier tuples are earlier in print order
                    for pos in (0..idx.len()).rev() {
                        idx[pos] += 1;
                        if idx[pos] < members[pos].len() {
                            continue 'outer;
                        }
                        idx[pos] = 0;
                    }
                    break;
                }
            } else {
                let idx: Vec<usize> = used
                    .iter()
                    .map(|u| u.iter().position(|x| !x).expect("a member remains"))
                    .collect();
                best = Some((0, idx));
            }
            let Some((_, idx)) = best else { break };
            for (i, &j) in idx.iter().enumerate() {
                used[i][j] = true;
            }
            tuples.push(idx.iter().enumerate().map(|(i, &j)| members[i][j].1.clone()).collect());
        }
    }
    tuples.sort_by_cached_key(|t| t[0].canonical().to_string());
    tuples
}

fn dedup(set: &[Formula]) -> Vec<Formula> {
    let mut seen = BTreeSet::new();
    set.iter().filter(|f| seen.insert(f.canonical())).cloned().collect()
}

/// Set-level generalization using (and extending) a shared anti-unifier.
pub fn generalize_sets_with(
    au: &mut AntiUnifier,
    gammas: &[Vec<Formula>],
) -> Result<SetGeneralization, GeneralizationError> {
    assert!(!gammas.is_empty(), "generalization needs at least one set");
    let mode = au.mode();
    let sets: Vec<Vec<Formula>> = gammas.iter().map(|g| dedup(g)).collect();
    if sets.iter().any(Vec::is_empty) {
        return Err(GeneralizationError::NoAlignment(sets.len()));
    }
    let tuples = align(&sets, mode);
    if tuples.is_empty() {
        return Err(GeneralizationError::NoAlignment(sets.len()));
    }
    let before: BTreeSet<Var> = au.vars.values().cloned().collect();
    let mut pattern = Vec::with_capacity(tuples.len());
    for tuple in &tuples {
        pattern.push(au.formulas(tuple)?);
    }
    let introduced: BTreeSet<Var> = au.vars.values().filter(|v| !before.contains(v)).cloned().collect();
    let order = au.introduced();
    let closed = pattern
        .iter()
        .map(|p| {
            let free = p.free_vars();
            let vars: Vec<Var> = order
                .iter()
                .filter(|v| introduced.contains(v) && free.contains(v))
                .cloned()
                .collect();
            Formula::forall(vars, p.clone())
        })
        .collect();
    let substitutions = au.substitutions();
    let aligned = sets.iter().all(|s| s.len() == tuples.len());
    let verified = sets.iter().all(|set| {
        set.iter().all(|f| {
            pattern.iter().any(|p| {
                let mut s = Substitution::new();
                match_formula_into(p, f, &mut s)
            })
        })
    });
    Ok(SetGeneralization {
        pattern,
        closed,
        substitutions,
        mode,
        total: aligned && verified,
    })
}

/// `g({Γ₁, …, Γₙ})`: aligns formulas across the sets and generalizes each
/// aligned tuple.
pub fn generalize_sets(gammas: &[Vec<Formula>], mode: Mode) -> Result<SetGeneralization, GeneralizationError> {
    let mut au = AntiUnifier::new(mode, gammas.len());
    generalize_sets_with(&mut au, gammas)
}
