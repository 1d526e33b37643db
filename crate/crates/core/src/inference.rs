//! Bounded forward reasoning: a ground Horn entailment oracle and
//! saturation under the knowledge, belief, intention and obligation
//! schemata.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::kernel::{Formula, ModalOp, Term};

pub const DEFAULT_MAX_DEPTH: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InferenceError {
    #[error("outside the ground Horn fragment: {0}")]
    UnsupportedFragment(Formula),
    #[error("{formula} has modal depth {depth}, above the limit {max}")]
    DepthExceeded { formula: Formula, depth: usize, max: usize },
}

/// A literal is an atom, a modal or obligation formula (both opaque here),
/// or the negation of one. Double negations are removed.
fn literal(f: &Formula) -> Option<Formula> {
    match f {
        Formula::Atom(_) | Formula::Modal { .. } | Formula::Ought { .. } => Some(f.canonical()),
        Formula::Not(g) => match g.as_ref() {
            Formula::Not(h) => literal(h),
            Formula::Atom(_) | Formula::Modal { .. } | Formula::Ought { .. } => Some(f.canonical()),
            _ => None,
        },
        _ => None,
    }
}

fn complement(lit: &Formula) -> Formula {
    match lit {
        Formula::Not(g) => g.as_ref().clone(),
        other => Formula::not(other.clone()),
    }
}

/// Flattens a conjunction of literals; `None` if any conjunct is not a
/// literal.
fn conjunction(f: &Formula, out: &mut Vec<Formula>) -> bool {
    match f {
        Formula::And(parts) => parts.iter().all(|p| conjunction(p, out)),
        _ => match literal(f) {
            Some(l) => {
                out.push(l);
                true
            }
            None => false,
        },
    }
}

#[derive(Clone, Debug, Default)]
struct Program {
    facts: BTreeSet<Formula>,
    rules: Vec<(Vec<Formula>, Vec<Formula>)>,
}

impl Program {
    /// Adds a KB formula. Returns false if it falls outside the fragment.
    fn add(&mut self, f: &Formula) -> bool {
        if !f.is_ground() {
            return false;
        }
        if let Some(l) = literal(f) {
            self.facts.insert(l);
            return true;
        }
        match f {
            Formula::And(parts) => parts.iter().all(|p| self.add(p)),
            Formula::Not(g) if matches!(g.as_ref(), Formula::Not(_)) => match g.as_ref() {
                Formula::Not(h) => self.add(h),
                _ => unreachable!(),
            },
            Formula::Implies(..) => {
                let mut body = Vec::new();
                let mut current = f;
                // (a -> (b -> c)) is read as (a & b) -> c
                while let Formula::Implies(a, b) = current {
                    if !conjunction(a, &mut body) {
                        return false;
                    }
                    current = b;
                }
                let mut head = Vec::new();
                if !conjunction(current, &mut head) {
                    return false;
                }
                self.rules.push((body, head));
                true
            }
            _ => false,
        }
    }

    fn close(mut self) -> BTreeSet<Formula> {
        let mut fired = vec![false; self.rules.len()];
        loop {
            let mut changed = false;
            for (i, (body, head)) in self.rules.iter().enumerate() {
                if !fired[i] && body.iter().all(|b| self.facts.contains(b)) {
                    fired[i] = true;
                    for h in head {
                        changed |= self.facts.insert(h.clone());
                    }
                }
            }
            if !changed {
                return self.facts;
            }
        }
    }
}

/// The set of literals derivable from a ground Horn KB by forward chaining.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornClosure {
    base: Vec<Formula>,
    lenient: bool,
    facts: BTreeSet<Formula>,
}

impl HornClosure {
    /// Strict closure: formulas outside the fragment are errors.
    pub fn new(gamma: &[Formula]) -> Result<Self, InferenceError> {
        Self::build(gamma, false)
    }

    /// Formulas outside the fragment are kept as opaque facts.
    pub fn lenient(gamma: &[Formula]) -> Self {
        Self::build(gamma, true).expect("lenient closure accepts every formula")
    }

    fn build(gamma: &[Formula], lenient: bool) -> Result<Self, InferenceError> {
        let mut program = Program::default();
        for f in gamma {
            let mut attempt = program.clone();
            if attempt.add(f) {
                program = attempt;
            } else if lenient {
                program.facts.insert(f.canonical());
            } else {
                return Err(InferenceError::UnsupportedFragment(f.clone()));
            }
        }
        Ok(HornClosure {
            base: gamma.to_vec(),
            lenient,
            facts: program.close(),
        })
    }

    pub fn facts(&self) -> &BTreeSet<Formula> {
        &self.facts
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.facts.contains(&f.canonical())
    }

    /// A derived pair `p`, `not p`, if there is one.
    pub fn contradiction(&self) -> Option<(Formula, Formula)> {
        self.facts.iter().find_map(|f| match f {
            Formula::Not(_) => None,
            p => {
                let np = complement(p);
                self.facts.contains(&np).then(|| (p.clone(), np))
            }
        })
    }

    pub fn is_inconsistent(&self) -> bool {
        self.contradiction().is_some()
    }

    /// Whether the query follows. Queries are literals, conjunctions, and
    /// implications whose antecedent may be added to the KB.
    pub fn entails(&self, phi: &Formula) -> Result<bool, InferenceError> {
        if self.is_inconsistent() {
            return Ok(true);
        }
        if let Some(l) = literal(phi) {
            return Ok(self.facts.contains(&l));
        }
        match phi {
            Formula::And(parts) => {
                for p in parts {
                    if !self.entails(p)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Implies(a, b) => {
                let mut extended = self.base.clone();
                extended.push(a.as_ref().clone());
                let closure = HornClosure::build(&extended, self.lenient)?;
                closure.entails(b)
            }
            _ => Err(InferenceError::UnsupportedFragment(phi.clone())),
        }
    }
}

/// `gamma ⊢₀ phi` for the ground Horn fragment. An inconsistent `gamma`
/// entails everything.
pub fn entails0(gamma: &[Formula], phi: &Formula) -> Result<bool, InferenceError> {
    if !phi.is_ground() {
        return Err(InferenceError::UnsupportedFragment(phi.clone()));
    }
    HornClosure::new(gamma)?.entails(phi)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnowledgeBase {
    pub formulas: BTreeSet<Formula>,
    pub max_depth: usize,
    /// Moments `0..=horizon` are always part of the instantiation range.
    pub horizon: u64,
}

impl KnowledgeBase {
    /// A KB over `formulas`, with the horizon set to the latest moment
    /// they mention.
    pub fn new(formulas: impl IntoIterator<Item = Formula>, max_depth: usize) -> Self {
        let formulas: BTreeSet<Formula> = formulas.into_iter().map(|f| f.canonical()).collect();
        let horizon = formulas.iter().flat_map(moments_of).max().unwrap_or(0);
        KnowledgeBase {
            formulas,
            max_depth,
            horizon,
        }
    }

    pub fn with_horizon(mut self, horizon: u64) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.formulas.contains(&f.canonical())
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }
}

fn collect_moments(t: &Term, out: &mut Vec<u64>) {
    match t {
        Term::Moment(m) => out.push(*m),
        Term::App(_, args) => args.iter().for_each(|a| collect_moments(a, out)),
        _ => {}
    }
}

fn moments_of(f: &Formula) -> Vec<u64> {
    let mut out = Vec::new();
    f.for_each_term(&mut |t| collect_moments(t, &mut out));
    out
}

fn modal(op: ModalOp, agent: &Term, t: u64, body: Formula) -> Formula {
    Formula::Modal {
        op,
        agents: vec![agent.clone()],
        time: Term::Moment(t),
        body: Box::new(body),
    }
}

/// `(agent, moment, body)` of a single-agent modal formula with operator `op`
/// and a numeral time.
fn unpack(f: &Formula, op: ModalOp) -> Option<(&Term, u64, &Formula)> {
    match f {
        Formula::Modal {
            op: o,
            agents,
            time,
            body,
        } if *o == op && agents.len() == 1 => Some((&agents[0], time.as_moment()?, body)),
        _ => None,
    }
}

/// One round of every schema over `kb`.
fn derive(kb: &BTreeSet<Formula>, universe: &BTreeSet<u64>) -> Vec<Formula> {
    let mut out = Vec::new();

    // Closure of knowledge and belief: everything held at t1 <= t2 and its consequences
    for op in [ModalOp::Knows, ModalOp::Believes] {
        let mut by_agent: BTreeMap<&Term, Vec<(u64, &Formula)>> = BTreeMap::new();
        for f in kb {
            if let Some((a, t, body)) = unpack(f, op) {
                by_agent.entry(a).or_default().push((t, body));
            }
        }
        for (agent, held) in by_agent {
            for &t2 in universe {
                let gamma: Vec<Formula> = held
                    .iter()
                    .filter(|(t1, _)| *t1 <= t2)
                    .map(|(_, b)| (*b).clone())
                    .collect();
                if gamma.is_empty() {
                    continue;
                }
                let closure = HornClosure::lenient(&gamma);
                let mut consequences: BTreeSet<Formula> = gamma.iter().map(Formula::canonical).collect();
                consequences.extend(closure.facts().iter().cloned());
                out.extend(consequences.into_iter().map(|phi| modal(op, agent, t2, phi)));
            }
        }
    }

    for f in kb {
        // Knowledge is veridical.
        if let Some((_, _, body)) = unpack(f, ModalOp::Knows) {
            out.push(body.clone());
        }
        // Intending brings later perception.
        if let Some((a, t, psi)) = unpack(f, ModalOp::Intends) {
            for &t2 in universe.range(t + 1..) {
                out.push(modal(ModalOp::Perceives, a, t2, psi.clone()));
            }
        }
        // A believed obligation whose condition is believed becomes a known intention.
        if let Formula::Ought {
            agent,
            time,
            condition,
            action,
        } = f
        {
            let Some(t) = time.as_moment() else { continue };
            let believes_condition = modal(ModalOp::Believes, agent, t, condition.as_ref().clone());
            let believes_obligation = modal(ModalOp::Believes, agent, t, f.clone());
            if kb.contains(&believes_condition.canonical()) && kb.contains(&believes_obligation.canonical()) {
                let intends = modal(ModalOp::Intends, agent, t, action.as_ref().clone());
                out.push(modal(ModalOp::Knows, agent, t, intends));
            }
        }
    }
    out
}

/// The least superset of `kb` closed under the schemata, keeping only
/// formulas of modal depth at most `kb.max_depth`.
pub fn saturate(kb: &KnowledgeBase) -> Result<KnowledgeBase, InferenceError> {
    for f in &kb.formulas {
        let depth = f.modal_depth();
        if depth > kb.max_depth {
            return Err(InferenceError::DepthExceeded {
                formula: f.clone(),
                depth,
                max: kb.max_depth,
            });
        }
        if !f.is_ground() {
            return Err(InferenceError::UnsupportedFragment(f.clone()));
        }
    }
    let mut universe: BTreeSet<u64> = (0..=kb.horizon).collect();
    universe.extend(kb.formulas.iter().flat_map(moments_of));

    let mut formulas: BTreeSet<Formula> = kb.formulas.iter().map(Formula::canonical).collect();
    loop {
        let before = formulas.len();
        for f in derive(&formulas, &universe) {
            if f.modal_depth() <= kb.max_depth {
                formulas.insert(f.canonical());
            }
        }
        if formulas.len() == before {
            break;
        }
    }
    Ok(KnowledgeBase {
        formulas,
        max_depth: kb.max_depth,
        horizon: kb.horizon,
    })
}
