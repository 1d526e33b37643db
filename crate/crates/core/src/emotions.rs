//! Emotion fluents gated by Θ. Beliefs are read veridically: an agent
//! believes exactly what the projected world makes true.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::ec::{Occurrence, Timeline};
use crate::kernel::{builtin, Formula, FunctionSymbol, Sort, SymbolKind, Term};
use crate::text::{Fact, ScenarioDoc, ThetaSpec};
use crate::utility::{mu, mu_bar, nu_bar, NuTable, UtilityConfig, UtilityError};

/// When an agent's Θ gate is open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Theta {
    Always,
    Never,
    At(BTreeSet<u64>),
}

/// Θ per agent; agents without an entry are `Never`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ThetaTable {
    per_agent: BTreeMap<Term, Theta>,
}

impl ThetaTable {
    pub fn from_doc(doc: &ScenarioDoc) -> Self {
        let mut table = ThetaTable::default();
        for fact in &doc.facts {
            if let Fact::Theta { agent, spec } = fact {
                match spec {
                    ThetaSpec::Always => table.set(agent.clone(), Theta::Always),
                    ThetaSpec::Never => table.set(agent.clone(), Theta::Never),
                    ThetaSpec::At(t) => {
                        let entry = table
                            .per_agent
                            .entry(agent.clone())
                            .or_insert_with(|| Theta::At(BTreeSet::new()));
                        if let Theta::At(ts) = entry {
                            ts.insert(*t);
                        }
                    }
                }
            }
        }
        table
    }

    pub fn set(&mut self, agent: Term, theta: Theta) {
        self.per_agent.insert(agent, theta);
    }

    pub fn get(&self, agent: &Term) -> &Theta {
        self.per_agent.get(agent).unwrap_or(&Theta::Never)
    }

    pub fn holds(&self, agent: &Term, t: u64) -> bool {
        match self.get(agent) {
            Theta::Always => true,
            Theta::Never => false,
            Theta::At(ts) => ts.contains(&t),
        }
    }
}

/// Everything an emotion condition reads.
#[derive(Clone, Debug)]
pub struct World {
    pub timeline: Timeline,
    pub table: NuTable,
    pub theta: ThetaTable,
    pub agents: Vec<Term>,
    pub config: UtilityConfig,
}

impl World {
    pub fn new(timeline: Timeline, doc: &ScenarioDoc) -> Self {
        let config = UtilityConfig {
            horizon: timeline.horizon,
        };
        World {
            timeline,
            table: NuTable::from_doc(doc),
            theta: ThetaTable::from_doc(doc),
            agents: doc.agents().to_vec(),
            config,
        }
    }

    fn occurrence(&self, event: &Term, t: u64) -> Result<&Occurrence, UtilityError> {
        self.timeline.occurrence(event, t).ok_or_else(|| UtilityError::UnknownOccurrence {
            event: event.clone(),
            time: t,
        })
    }

    fn moments(&self) -> std::ops::RangeInclusive<u64> {
        0..=self.config.horizon
    }

    /// Some initiated fluent has a ν entry for `agent` on the wrong side of 0.
    fn initiated_has(&self, occ: &Occurrence, value: impl Fn(&Term, u64) -> f64, bad: fn(f64) -> bool) -> bool {
        occ.initiated
            .iter()
            .any(|f| self.moments().any(|y| bad(value(f, y))))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EmotionKind {
    Joy,
    Distress,
    HappyFor,
    Gloating,
    PityFor,
    Resentment,
    AdmirationFor,
}

impl EmotionKind {
    pub const ALL: [EmotionKind; 7] = [
        EmotionKind::Joy,
        EmotionKind::Distress,
        EmotionKind::HappyFor,
        EmotionKind::Gloating,
        EmotionKind::PityFor,
        EmotionKind::Resentment,
        EmotionKind::AdmirationFor,
    ];

    /// Fluent symbol name used when a record is printed.
    pub fn keyword(self) -> &'static str {
        match self {
            EmotionKind::Joy => "joy",
            EmotionKind::Distress => "distress",
            EmotionKind::HappyFor => "happy-for",
            EmotionKind::Gloating => "gloating",
            EmotionKind::PityFor => "pity-for",
            EmotionKind::Resentment => "resentment",
            EmotionKind::AdmirationFor => "admires",
        }
    }

    /// Whether the emotion is a pleased (rather than displeased) reaction.
    pub fn pleased(self) -> bool {
        matches!(
            self,
            EmotionKind::Joy | EmotionKind::HappyFor | EmotionKind::Gloating | EmotionKind::AdmirationFor
        )
    }

    pub fn is_other_directed(self) -> bool {
        !matches!(self, EmotionKind::Joy | EmotionKind::Distress)
    }

    /// The fluent symbol for this kind. Admiration is indexed by the admired
    /// agent and its action type; the others by the event.
    pub fn symbol(self) -> Arc<FunctionSymbol> {
        static SYMBOLS: OnceLock<Vec<Arc<FunctionSymbol>>> = OnceLock::new();
        let symbols = SYMBOLS.get_or_init(|| {
            use Sort::*;
            EmotionKind::ALL
                .iter()
                .map(|k| {
                    let args = match k {
                        EmotionKind::Joy | EmotionKind::Distress => vec![Agent, Event, Moment],
                        EmotionKind::AdmirationFor => vec![Agent, Agent, ActionType, Moment],
                        _ => vec![Agent, Agent, Event, Moment],
                    };
                    Arc::new(FunctionSymbol::new(k.keyword(), args, Fluent, SymbolKind::User))
                })
                .collect()
        });
        Arc::clone(&symbols[self as usize])
    }
}

impl fmt::Display for EmotionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// A true emotion instance. Field order is the sort order of records.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EmotionRecord {
    pub hold_time: u64,
    pub event_time: u64,
    /// For admiration, the admired `action(b, α)`.
    pub event: Term,
    pub kind: EmotionKind,
    pub subject: Term,
    pub object: Option<Term>,
}

impl EmotionRecord {
    /// The action type of an admired action.
    pub fn action_type(&self) -> Option<&Term> {
        match self.event.head_name() {
            Some("action") => self.event.args().get(1),
            _ => None,
        }
    }

    pub fn fluent(&self) -> Term {
        let mut args = vec![self.subject.clone()];
        args.extend(self.object.clone());
        match (self.kind, self.action_type()) {
            (EmotionKind::AdmirationFor, Some(alpha)) => args.push(alpha.clone()),
            _ => args.push(self.event.clone()),
        }
        args.push(Term::Moment(self.event_time));
        Term::app(&self.kind.symbol(), args)
    }

    /// `holds(fluent, hold_time)`.
    pub fn to_formula(&self) -> Formula {
        Formula::Atom(Term::app(
            &builtin("holds"),
            vec![self.fluent(), Term::Moment(self.hold_time)],
        ))
    }
}

impl fmt::Display for EmotionRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_formula().fmt(f)
    }
}

fn positive(x: f64) -> bool {
    x > 0.0
}

fn negative(x: f64) -> bool {
    x < 0.0
}

/// ν̄(b) on one side of 0 and no initiated fluent on the other side for `b`.
fn valenced(b: &Term, e: &Term, t: u64, w: &World, want_positive: bool) -> Result<bool, UtilityError> {
    let occ = w.occurrence(e, t)?;
    let total = nu_bar(b, e, t, &w.timeline, &w.table, w.config)?;
    let value = |f: &Term, y: u64| w.table.get(b, f, y);
    Ok(if want_positive {
        positive(total) && !w.initiated_has(occ, value, negative)
    } else {
        negative(total) && !w.initiated_has(occ, value, positive)
    })
}

pub fn eval_joy(a: &Term, e: &Term, t: u64, t_hold: u64, w: &World) -> Result<bool, UtilityError> {
    let condition = valenced(a, e, t, w, true)?;
    Ok(w.theta.holds(a, t_hold) && condition)
}

pub fn eval_distress(a: &Term, e: &Term, t: u64, t_hold: u64, w: &World) -> Result<bool, UtilityError> {
    let condition = valenced(a, e, t, w, false)?;
    Ok(w.theta.holds(a, t_hold) && condition)
}

pub fn eval_happy_for(a: &Term, b: &Term, e: &Term, t: u64, t_hold: u64, w: &World) -> Result<bool, UtilityError> {
    eval_occ_table_emotion(EmotionKind::HappyFor, a, b, e, t, t_hold, w)
}

/// The other-directed event emotions. HappyFor and Resentment share the
/// desirable-for-other condition; Gloating and PityFor the undesirable one.
///
/// # Panics
/// If `kind` is Joy, Distress or AdmirationFor.
pub fn eval_occ_table_emotion(
    kind: EmotionKind,
    a: &Term,
    b: &Term,
    e: &Term,
    t: u64,
    t_hold: u64,
    w: &World,
) -> Result<bool, UtilityError> {
    let desirable = match kind {
        EmotionKind::HappyFor | EmotionKind::Resentment => true,
        EmotionKind::Gloating | EmotionKind::PityFor => false,
        other => panic!("{other} is not an other-directed event emotion"),
    };
    let condition = valenced(b, e, t, w, desirable)?;
    Ok(w.theta.holds(a, t_hold) && a != b && condition)
}

/// `a` admires `b` for performing `alpha` at `t`.
pub fn eval_admiration(a: &Term, b: &Term, alpha: &Term, t: u64, t_hold: u64, w: &World) -> Result<bool, UtilityError> {
    let e = Term::app(&builtin("action"), vec![b.clone(), alpha.clone()]);
    let occ = w.occurrence(&e, t)?;
    let total = mu_bar(&e, t, &w.timeline, &w.table, &w.agents, w.config)?;
    let harmful = w.initiated_has(occ, |f, y| mu(f, y, &w.table, &w.agents), negative);
    Ok(w.theta.holds(a, t_hold) && a != b && positive(total) && !harmful)
}

/// Every true emotion instance over all agents, occurrences and hold times
/// in `[0, H]`, sorted.
pub fn sweep_emotions(w: &World) -> Vec<EmotionRecord> {
    let mut out = Vec::new();
    for occ in &w.timeline.occurrences {
        let (e, t) = (&occ.event, occ.time);
        let actor = match e.head_name() {
            Some("action") => Some((&e.args()[0], &e.args()[1])),
            _ => None,
        };
        for a in &w.agents {
            let open: Vec<u64> = w.moments().filter(|&th| w.theta.holds(a, th)).collect();
            if open.is_empty() {
                continue;
            }
            let mut emit = |kind, object: Option<&Term>| {
                for &th in &open {
                    out.push(EmotionRecord {
                        hold_time: th,
                        event_time: t,
                        event: e.clone(),
                        kind,
                        subject: a.clone(),
                        object: object.cloned(),
                    });
                }
            };
            let ok = |r: Result<bool, UtilityError>| r.expect("occurrence comes from the timeline");
            if ok(valenced(a, e, t, w, true)) {
                emit(EmotionKind::Joy, None);
            }
            if ok(valenced(a, e, t, w, false)) {
                emit(EmotionKind::Distress, None);
            }
            for b in w.agents.iter().filter(|b| *b != a) {
                if ok(valenced(b, e, t, w, true)) {
                    emit(EmotionKind::HappyFor, Some(b));
                    emit(EmotionKind::Resentment, Some(b));
                }
                if ok(valenced(b, e, t, w, false)) {
                    emit(EmotionKind::Gloating, Some(b));
                    emit(EmotionKind::PityFor, Some(b));
                }
            }
            if let Some((b, alpha)) = actor {
                // Θ is open at `open[0]`, so this reads the Θ-free condition
                if b != a && ok(eval_admiration(a, b, alpha, t, open[0], w)) {
                    emit(EmotionKind::AdmirationFor, Some(b));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}
