//! Agent-specific (ν) and agent-neutral (μ) utilities and their event totals.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::ec::{Occurrence, Timeline};
use crate::kernel::Term;
use crate::text::{Fact, ScenarioDoc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UtilityError {
    #[error("{event} does not occur at moment {time}")]
    UnknownOccurrence { event: Term, time: u64 },
}

/// Finite table of ν values; absent keys read as 0.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NuTable {
    entries: BTreeMap<(Term, Term, u64), f64>,
}

impl NuTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_doc(doc: &ScenarioDoc) -> Self {
        let mut table = NuTable::new();
        for fact in &doc.facts {
            if let Fact::Nu {
                agent,
                fluent,
                time,
                value,
            } = fact
            {
                table.insert(agent.clone(), fluent.clone(), *time, *value);
            }
        }
        table
    }

    /// Stores `value`, replacing any previous entry. Non-finite values are
    /// rejected with a panic since they would poison every sum.
    pub fn insert(&mut self, agent: Term, fluent: Term, time: u64, value: f64) {
        assert!(value.is_finite(), "utility values must be finite");
        self.entries.insert((agent, fluent, time), value);
    }

    pub fn get(&self, agent: &Term, fluent: &Term, time: u64) -> f64 {
        self.entries
            .get(&(agent.clone(), fluent.clone(), time))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Term, &Term, u64, f64)> {
        self.entries.iter().map(|((a, f, t), v)| (a, f, *t, *v))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UtilityConfig {
    pub horizon: u64,
}

pub fn nu(agent: &Term, fluent: &Term, t: u64, table: &NuTable) -> f64 {
    table.get(agent, fluent, t)
}

/// μ(f, t): the sum of ν over `agents`.
pub fn mu(fluent: &Term, t: u64, table: &NuTable, agents: &[Term]) -> f64 {
    agents.iter().map(|a| table.get(a, fluent, t)).sum()
}

fn occurrence<'a>(event: &Term, t: u64, timeline: &'a Timeline) -> Result<&'a Occurrence, UtilityError> {
    timeline.occurrence(event, t).ok_or_else(|| UtilityError::UnknownOccurrence {
        event: event.clone(),
        time: t,
    })
}

/// Σ_{y=t+1..H} [Σ_{f initiated} value(f, y) − Σ_{f terminated} value(f, y)].
fn total(occ: &Occurrence, cfg: UtilityConfig, value: impl Fn(&Term, u64) -> f64) -> f64 {
    let mut sum = 0.0;
    for y in occ.time + 1..=cfg.horizon {
        let gained: f64 = occ.initiated.iter().map(|f| value(f, y)).sum();
        let lost: f64 = occ.terminated.iter().map(|f| value(f, y)).sum();
        sum += gained - lost;
    }
    sum
}

/// ν̄(a, e, t): total utility of the occurrence `(e, t)` for `agent`.
pub fn nu_bar(
    agent: &Term,
    event: &Term,
    t: u64,
    timeline: &Timeline,
    table: &NuTable,
    cfg: UtilityConfig,
) -> Result<f64, UtilityError> {
    let occ = occurrence(event, t, timeline)?;
    Ok(total(occ, cfg, |f, y| table.get(agent, f, y)))
}

/// μ̄(e, t): total agent-neutral utility of the occurrence `(e, t)`.
pub fn mu_bar(
    event: &Term,
    t: u64,
    timeline: &Timeline,
    table: &NuTable,
    agents: &[Term],
    cfg: UtilityConfig,
) -> Result<f64, UtilityError> {
    let occ = occurrence(event, t, timeline)?;
    Ok(total(occ, cfg, |f, y| mu(f, y, table, agents)))
}
