//! observe → admire → learn → act over one scenario document.

use thiserror::Error;

use crate::ec::{project_with_horizon, EcError, Timeline};
use crate::emotions::{sweep_emotions, EmotionRecord, World};
use crate::generalization::{anti_unify_terms, Mode};
use crate::kernel::{Formula, Term};
use crate::learner::{
    apply_trait, detect_trait, identify_exemplars, learn_trait, ExemplarRecord, LearnError, LearntTrait, Situation,
    TraitCriteria,
};
use crate::text::ScenarioDoc;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Projection(#[from] EcError),
    #[error("learning from {exemplar}: {source}")]
    Learning { exemplar: Term, source: LearnError },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PipelineConfig {
    pub criteria: TraitCriteria,
    pub mode: Mode,
    pub horizon: Option<u64>,
}

impl PipelineConfig {
    /// Settings from the document, with defaults for anything it leaves out.
    pub fn from_doc(doc: &ScenarioDoc) -> Self {
        let defaults = TraitCriteria::default();
        let c = &doc.config;
        PipelineConfig {
            criteria: TraitCriteria {
                min_situations: c.min_situations.unwrap_or(defaults.min_situations),
                fraction: c.fraction.unwrap_or(defaults.fraction),
                exemplar_threshold: c.exemplar_threshold.unwrap_or(defaults.exemplar_threshold),
            },
            mode: c.mode.unwrap_or_default(),
            horizon: c.horizon,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LearnerOutcome {
    pub learner: Term,
    pub exemplars: Vec<ExemplarRecord>,
    pub traits: Vec<LearntTrait>,
    /// `(situation id, proposed happens formula)`.
    pub proposals: Vec<(String, Formula)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub timeline: Timeline,
    pub emotions: Vec<EmotionRecord>,
    pub learners: Vec<LearnerOutcome>,
}

/// The world for `doc` projected over the configured horizon.
pub fn world(doc: &ScenarioDoc, cfg: &PipelineConfig) -> Result<World, EcError> {
    let horizon = cfg.horizon.unwrap_or_else(|| doc.horizon());
    let timeline = project_with_horizon(doc, horizon)?;
    Ok(World::new(timeline, doc))
}

/// Traits learnt from `exemplar`'s situations observed at or after
/// `admitted_at`, one candidate per performed action-type symbol.
pub fn learn_from(
    doc: &ScenarioDoc,
    exemplar: &Term,
    admitted_at: u64,
    cfg: &PipelineConfig,
) -> Result<Vec<LearntTrait>, LearnError> {
    let history: Vec<Situation> = doc
        .situations_of(exemplar)
        .filter(|s| s.time >= admitted_at)
        .cloned()
        .collect();
    let mut heads: Vec<&str> = history
        .iter()
        .filter_map(|s| s.performed.as_ref()?.head_name())
        .collect();
    heads.sort_unstable();
    heads.dedup();

    let mut traits = Vec::new();
    for head in heads {
        let (situations, performed): (Vec<Situation>, Vec<Term>) = history
            .iter()
            .filter_map(|s| {
                let p = s.performed.as_ref()?;
                (p.head_name() == Some(head)).then(|| (s.clone(), p.clone()))
            })
            .unzip();
        let Ok(alpha) = anti_unify_terms(&performed, Mode::FirstOrder) else {
            continue;
        };
        if detect_trait(&history, &alpha.pattern, exemplar, &cfg.criteria) {
            traits.push(learn_trait(&situations, &performed, cfg.mode, exemplar)?);
        }
    }
    Ok(traits)
}

/// Proposals of every trait for each of `learner`'s `act` situations.
pub fn act(doc: &ScenarioDoc, learner: &Term, traits: &[LearntTrait]) -> Vec<(String, Formula)> {
    let mut out = Vec::new();
    for sigma in doc.probes_for(learner) {
        let mut here: Vec<Formula> = traits.iter().flat_map(|t| apply_trait(t, sigma, learner)).collect();
        here.sort();
        here.dedup();
        out.extend(here.into_iter().map(|f| (sigma.id.clone(), f)));
    }
    out
}

/// The whole pipeline for the configured learner, or every agent in
/// declaration order.
pub fn run(doc: &ScenarioDoc, cfg: &PipelineConfig) -> Result<RunOutcome, PipelineError> {
    let world = world(doc, cfg)?;
    let emotions = sweep_emotions(&world);
    let learners: Vec<Term> = match &doc.config.learner {
        Some(l) => vec![l.clone()],
        None => doc.agents().to_vec(),
    };
    let mut outcomes = Vec::with_capacity(learners.len());
    for learner in learners {
        let exemplars = identify_exemplars(&emotions, &learner, &cfg.criteria);
        let mut traits = Vec::new();
        for record in &exemplars {
            if let Some(at) = record.admitted_at {
                let learnt = learn_from(doc, &record.exemplar, at, cfg).map_err(|source| PipelineError::Learning {
                    exemplar: record.exemplar.clone(),
                    source,
                })?;
                traits.extend(learnt);
            }
        }
        let proposals = act(doc, &learner, &traits);
        outcomes.push(LearnerOutcome {
            learner,
            exemplars,
            traits,
            proposals,
        });
    }
    Ok(RunOutcome {
        timeline: world.timeline,
        emotions,
        learners: outcomes,
    })
}
