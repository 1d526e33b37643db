//! Exemplar identification, trait detection, trait learning and trait
//! application.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::emotions::{EmotionKind, EmotionRecord};
use crate::generalization::{generalize_sets_with, AntiUnifier, GeneralizationError, Mode};
use crate::inference::{HornClosure, InferenceError};
use crate::kernel::{builtin, match_formula_into, match_term, Formula, Sort, Substitution, Term, Var};

/// What an agent faced at one moment: the formulas describing it, the
/// action types it could choose from, and the one it chose.
#[derive(Clone, Debug, PartialEq)]
pub struct Situation {
    pub id: String,
    pub time: u64,
    pub formulas: Vec<Formula>,
    pub alternatives: Vec<Term>,
    pub performed: Option<Term>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraitCriteria {
    /// m: minimum number of eligible situations.
    pub min_situations: usize,
    /// γ ∈ (0, 1]: minimum fraction of eligible situations in which the
    /// action was performed.
    pub fraction: f64,
    /// n: admirations needed before an agent becomes an exemplar.
    pub exemplar_threshold: usize,
}

impl Default for TraitCriteria {
    fn default() -> Self {
        TraitCriteria {
            min_situations: 2,
            fraction: 0.9,
            exemplar_threshold: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LearntTrait {
    /// Open formulas; `t` stands for the situation's moment.
    pub pattern: Vec<Formula>,
    pub action_pattern: Term,
    pub exemplar: Term,
    pub source_situations: Vec<String>,
}

impl LearntTrait {
    /// The trigger `happens(action(agent, actionPattern), t)`.
    pub fn trigger(&self, agent: &Term) -> Formula {
        Formula::Atom(Term::app(
            &builtin("happens"),
            vec![
                Term::app(&builtin("action"), vec![agent.clone(), self.action_pattern.clone()]),
                Term::Var(moment_var()),
            ],
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExemplarRecord {
    pub learner: Term,
    pub exemplar: Term,
    pub admiration_count: usize,
    pub admitted_at: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LearnError {
    #[error(transparent)]
    Generalization(#[from] GeneralizationError),
    #[error("action variable {0} does not occur in the situation pattern")]
    UnboundActionVariable(String),
    #[error("{situations} situations but {actions} performed actions")]
    LengthMismatch { situations: usize, actions: usize },
}

/// The variable standing for a situation's own moment in learnt patterns.
pub fn moment_var() -> Var {
    Var::new("t", Sort::Moment)
}

fn happens(agent: &Term, alpha: &Term, time: u64) -> Formula {
    Formula::Atom(Term::app(
        &builtin("happens"),
        vec![
            Term::app(&builtin("action"), vec![agent.clone(), alpha.clone()]),
            Term::Moment(time),
        ],
    ))
}

/// Some fluent initiated by one occurrence and terminated by another at the
/// same moment, among derived `happens`/`initiates`/`terminates` atoms.
fn effect_conflict(facts: &BTreeSet<Formula>) -> bool {
    let atoms: Vec<&Term> = facts.iter().filter_map(Formula::as_atom).collect();
    let happened: BTreeSet<(&Term, &Term)> = atoms
        .iter()
        .filter(|a| a.head_name() == Some("happens"))
        .map(|a| (&a.args()[0], &a.args()[1]))
        .collect();
    let effects = |name: &str| -> BTreeSet<(&Term, &Term)> {
        atoms
            .iter()
            .filter(|a| a.head_name() == Some(name))
            .filter(|a| happened.contains(&(&a.args()[0], &a.args()[2])))
            .map(|a| (&a.args()[1], &a.args()[2]))
            .collect()
    };
    let initiated = effects("initiates");
    !initiated.is_disjoint(&effects("terminates"))
}

/// Whether `agent` doing `alpha` in `sigma` is free of contradiction under
/// the Horn closure of the situation.
pub fn check_consistency(sigma: &Situation, alpha: &Term, agent: &Term) -> Result<bool, InferenceError> {
    let mut gamma = sigma.formulas.clone();
    gamma.push(happens(agent, alpha, sigma.time));
    let closure = HornClosure::new(&gamma)?;
    Ok(!closure.is_inconsistent() && !effect_conflict(closure.facts()))
}

fn instance_of(alpha: &Term, action: &Term) -> bool {
    match_term(alpha, action).is_some()
}

/// Situations where `alpha` (a possibly open action type) was a genuine,
/// consistent option, and how many of them saw it performed.
fn eligibility(history: &[Situation], alpha: &Term, agent: &Term) -> (usize, usize) {
    let mut eligible = 0;
    let mut performed = 0;
    for sigma in history {
        let genuine = sigma.alternatives.len() >= 2
            && sigma.alternatives.iter().any(|a| instance_of(alpha, a))
            && sigma
                .alternatives
                .iter()
                .all(|a| check_consistency(sigma, a, agent).unwrap_or(false));
        if genuine {
            eligible += 1;
            if sigma.performed.as_ref().is_some_and(|p| instance_of(alpha, p)) {
                performed += 1;
            }
        }
    }
    (eligible, performed)
}

/// Whether `agent`'s history shows `alpha` as a trait: at least m eligible
/// situations, with `alpha` performed in a fraction of at least γ of them.
pub fn detect_trait(history: &[Situation], alpha: &Term, agent: &Term, criteria: &TraitCriteria) -> bool {
    let (eligible, performed) = eligibility(history, alpha, agent);
    eligible > 0 && eligible >= criteria.min_situations && performed as f64 / eligible as f64 >= criteria.fraction
}

/// One record per agent `learner` admires, in exemplar order.
pub fn identify_exemplars(records: &[EmotionRecord], learner: &Term, criteria: &TraitCriteria) -> Vec<ExemplarRecord> {
    let mut by_object: BTreeMap<&Term, Vec<&EmotionRecord>> = BTreeMap::new();
    for r in records {
        if r.kind == EmotionKind::AdmirationFor && &r.subject == learner {
            if let Some(object) = &r.object {
                by_object.entry(object).or_default().push(r);
            }
        }
    }
    by_object
        .into_iter()
        .map(|(exemplar, mut admirations)| {
            admirations.sort();
            let n = criteria.exemplar_threshold;
            let admitted_at = (n > 0 && admirations.len() >= n).then(|| admirations[n - 1].hold_time);
            ExemplarRecord {
                learner: learner.clone(),
                exemplar: exemplar.clone(),
                admiration_count: admirations.len(),
                admitted_at,
            }
        })
        .collect()
}

/// The situation's formulas with its own moment replaced by `t`.
fn abstract_time(sigma: &Situation) -> Vec<Formula> {
    let t = Term::Var(moment_var());
    sigma.formulas.iter().map(|f| f.replace_moment(sigma.time, &t)).collect()
}

/// ⟨g({σ₁…σₙ}), α⟩ from situations and the action performed in each.
/// Situation and action variables that stand for the same tuple of ground
/// values are the same variable.
pub fn learn_trait(
    situations: &[Situation],
    performed: &[Term],
    mode: Mode,
    exemplar: &Term,
) -> Result<LearntTrait, LearnError> {
    if situations.len() != performed.len() || situations.is_empty() {
        return Err(LearnError::LengthMismatch {
            situations: situations.len(),
            actions: performed.len(),
        });
    }
    let gammas: Vec<Vec<Formula>> = situations.iter().map(abstract_time).collect();
    let mut au = AntiUnifier::new(mode, situations.len());
    let generalization = generalize_sets_with(&mut au, &gammas)?;
    let action_pattern = au.terms(performed)?;

    let mut anchored = BTreeSet::new();
    let mut anchored_symbols = BTreeSet::new();
    for f in &generalization.pattern {
        anchored.extend(f.free_vars());
        anchored_symbols.extend(f.symbol_vars());
    }
    if let Some(v) = action_pattern.vars().into_iter().find(|v| !anchored.contains(v)) {
        return Err(LearnError::UnboundActionVariable(v.name));
    }
    let mut action_symbols = BTreeSet::new();
    action_pattern.collect_symbol_vars(&mut action_symbols);
    if let Some(sv) = action_symbols.into_iter().find(|v| !anchored_symbols.contains(v)) {
        return Err(LearnError::UnboundActionVariable(sv.name));
    }
    Ok(LearntTrait {
        pattern: generalization.pattern,
        action_pattern,
        exemplar: exemplar.clone(),
        source_situations: situations.iter().map(|s| s.id.clone()).collect(),
    })
}

fn matches_all(pattern: &[Formula], sigma: &[Formula], subst: Substitution, out: &mut Vec<Substitution>) {
    let Some((first, rest)) = pattern.split_first() else {
        out.push(subst);
        return;
    };
    for f in sigma {
        let mut s = subst.clone();
        if match_formula_into(first, f, &mut s) {
            matches_all(rest, sigma, s, out);
        }
    }
}

/// Every `happens(action(learner, θ(actionPattern)), σ.time)` where θ
/// matches each pattern formula to some formula of `sigma` and the action
/// is consistent there. Sorted, without duplicates.
pub fn apply_trait(learnt: &LearntTrait, sigma: &Situation, learner: &Term) -> Vec<Formula> {
    let mut start = Substitution::new();
    start
        .bind(moment_var(), Term::Moment(sigma.time))
        .expect("moments have sort moment");
    let mut matches = Vec::new();
    matches_all(&learnt.pattern, &sigma.formulas, start, &mut matches);
    let mut out = BTreeSet::new();
    for theta in matches {
        let alpha = theta.apply_term(&learnt.action_pattern);
        if !alpha.is_ground() {
            continue;
        }
        if check_consistency(sigma, &alpha, learner).unwrap_or(false) {
            out.insert(happens(learner, &alpha, sigma.time));
        }
    }
    out.into_iter().collect()
}
