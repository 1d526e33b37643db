//! Discrete-time event-calculus projection.
//!
//! Effects of an occurrence at `t` are visible from `t + 1`. A fluent holds at
//! `t` when it held initially or was initiated at some earlier `t1`, and no
//! occurrence at a moment `s` with `t1 <= s < t` terminated it since.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::kernel::{match_term_into, Substitution, Term};
use crate::text::{Fact, HornRule, ScenarioDoc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EcError {
    #[error("{fluent} is both initiated and terminated at moment {time} (by {event})")]
    ConflictingEffects { event: Term, fluent: Term, time: u64 },
    #[error("{event} happens at moment {time}, past the horizon {horizon}")]
    HorizonExceeded { event: Term, time: u64, horizon: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occurrence {
    pub event: Term,
    pub time: u64,
    pub initiated: BTreeSet<Term>,
    pub terminated: BTreeSet<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Timeline {
    pub horizon: u64,
    /// `states[t]` is the set of fluents holding at `t`, for `t` in `0..=horizon`.
    states: Vec<BTreeSet<Term>>,
    /// Sorted by `(time, event)`; duplicates collapsed.
    pub occurrences: Vec<Occurrence>,
}

impl Timeline {
    pub fn holds(&self, fluent: &Term, t: u64) -> bool {
        self.states.get(t as usize).is_some_and(|s| s.contains(fluent))
    }

    pub fn fluents_at(&self, t: u64) -> &BTreeSet<Term> {
        static EMPTY: BTreeSet<Term> = BTreeSet::new();
        self.states.get(t as usize).unwrap_or(&EMPTY)
    }

    /// The `(fluent, moment)` relation in moment order.
    pub fn holds_set(&self) -> impl Iterator<Item = (&Term, u64)> {
        self.states
            .iter()
            .enumerate()
            .flat_map(|(t, s)| s.iter().map(move |f| (f, t as u64)))
    }

    pub fn occurrence(&self, event: &Term, t: u64) -> Option<&Occurrence> {
        self.occurrences.iter().find(|o| o.time == t && &o.event == event)
    }
}

/// Context the effect rules are evaluated in: what holds at the event's
/// moment, and every scheduled occurrence.
struct Context<'a> {
    now: &'a BTreeSet<Term>,
    time: u64,
    happenings: &'a [(Term, u64)],
}

fn satisfy(ants: &[Term], ctx: &Context<'_>, subst: Substitution, out: &mut Vec<Substitution>) {
    let Some((first, rest)) = ants.split_first() else {
        out.push(subst);
        return;
    };
    let args = first.args();
    match first.head_name() {
        Some("holds") => {
            let mut s = subst.clone();
            if !match_term_into(&args[1], &Term::Moment(ctx.time), &mut s) {
                // holds antecedents are only decidable at the event's own moment
                return;
            }
            for f in ctx.now {
                let mut s = s.clone();
                if match_term_into(&args[0], f, &mut s) {
                    satisfy(rest, ctx, s, out);
                }
            }
        }
        Some("happens") => {
            for (e, t) in ctx.happenings {
                let mut s = subst.clone();
                if match_term_into(&args[0], e, &mut s) && match_term_into(&args[1], &Term::Moment(*t), &mut s) {
                    satisfy(rest, ctx, s, out);
                }
            }
        }
        Some("prior") => {
            let a = subst.apply_term(&args[0]).as_moment();
            let b = subst.apply_term(&args[1]).as_moment();
            if matches!((a, b), (Some(a), Some(b)) if a < b) {
                satisfy(rest, ctx, subst, out);
            }
        }
        _ => {}
    }
}

fn rule_effects(rule: &HornRule, event: &Term, ctx: &Context<'_>, out: &mut BTreeSet<Term>) {
    let args = rule.consequent.args();
    let mut s = Substitution::new();
    if !match_term_into(&args[0], event, &mut s) || !match_term_into(&args[2], &Term::Moment(ctx.time), &mut s) {
        return;
    }
    // prior atoms need their moments bound; try them last
    let mut ants = rule.antecedents.clone();
    ants.sort_by_key(|a| a.head_name() == Some("prior"));
    let mut solutions = Vec::new();
    satisfy(&ants, ctx, s, &mut solutions);
    for s in solutions {
        let f = s.apply_term(&args[1]);
        if f.is_ground() {
            out.insert(f);
        }
    }
}

fn effects_in(event: &Term, doc: &ScenarioDoc, ctx: &Context<'_>) -> (BTreeSet<Term>, BTreeSet<Term>) {
    let mut initiated = BTreeSet::new();
    let mut terminated = BTreeSet::new();
    for fact in &doc.facts {
        let (rule, into) = match fact {
            Fact::Initiates(r) => (r, &mut initiated),
            Fact::Terminates(r) => (r, &mut terminated),
            Fact::Rule(h) => {
                let into = if h.consequent.head_name() == Some("initiates") {
                    &mut initiated
                } else {
                    &mut terminated
                };
                rule_effects(h, event, ctx, into);
                continue;
            }
            _ => continue,
        };
        let mut s = Substitution::new();
        if match_term_into(&rule.event, event, &mut s) && match_term_into(&rule.time, &Term::Moment(ctx.time), &mut s) {
            let f = s.apply_term(&rule.fluent);
            if f.is_ground() {
                into.insert(f);
            }
        }
    }
    (initiated, terminated)
}

fn happenings(doc: &ScenarioDoc) -> Vec<(Term, u64)> {
    let set: BTreeSet<(u64, Term)> = doc.happenings().map(|(e, t)| (t, e.clone())).collect();
    set.into_iter().map(|(t, e)| (e, t)).collect()
}

/// Fluents initiated and terminated by `event` at `time`. Conditional
/// (`rule`) effects consult the projected state at `time`, so an effect
/// conflict earlier in the document is reported here as well.
pub fn effects(event: &Term, time: u64, doc: &ScenarioDoc) -> Result<(BTreeSet<Term>, BTreeSet<Term>), EcError> {
    let timeline = project_with_horizon(doc, doc.horizon().max(time))?;
    let happenings = happenings(doc);
    let ctx = Context {
        now: timeline.fluents_at(time),
        time,
        happenings: &happenings,
    };
    Ok(effects_in(event, doc, &ctx))
}

pub fn project(doc: &ScenarioDoc) -> Result<Timeline, EcError> {
    project_with_horizon(doc, doc.horizon())
}

/// Projects `doc` over `[0, horizon]`, ignoring the document's own horizon.
pub fn project_with_horizon(doc: &ScenarioDoc, horizon: u64) -> Result<Timeline, EcError> {
    let happenings = happenings(doc);
    if let Some((event, time)) = happenings.iter().find(|(_, t)| *t > horizon) {
        return Err(EcError::HorizonExceeded {
            event: event.clone(),
            time: *time,
            horizon,
        });
    }
    let mut state: BTreeSet<Term> = doc
        .facts
        .iter()
        .filter_map(|f| match f {
            Fact::Initially(fl) => Some(fl.clone()),
            _ => None,
        })
        .collect();
    let mut states = Vec::with_capacity(horizon as usize + 1);
    let mut occurrences = Vec::new();
    let mut pending = happenings.iter().peekable();
    for t in 0..=horizon {
        let mut initiated_now = BTreeSet::new();
        let mut terminated_now: Vec<(Term, Term)> = Vec::new();
        let mut here = Vec::new();
        while let Some((event, _)) = pending.next_if(|(_, time)| *time == t) {
            let ctx = Context {
                now: &state,
                time: t,
                happenings: &happenings,
            };
            let (initiated, terminated) = effects_in(event, doc, &ctx);
            initiated_now.extend(initiated.iter().map(|f| (f.clone(), event.clone())));
            terminated_now.extend(terminated.iter().map(|f| (f.clone(), event.clone())));
            here.push(Occurrence {
                event: event.clone(),
                time: t,
                initiated,
                terminated,
            });
        }
        let initiated_now: BTreeSet<(Term, Term)> = initiated_now;
        for (f, event) in &terminated_now {
            if initiated_now.iter().any(|(g, _)| g == f) {
                return Err(EcError::ConflictingEffects {
                    event: event.clone(),
                    fluent: f.clone(),
                    time: t,
                });
            }
        }
        states.push(state.clone());
        for (f, _) in &terminated_now {
            state.remove(f);
        }
        state.extend(initiated_now.into_iter().map(|(f, _)| f));
        occurrences.extend(here);
    }
    Ok(Timeline {
        horizon,
        states,
        occurrences,
    })
}
