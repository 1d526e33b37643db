//! One function per subcommand, each turning a scenario into report lines.

use std::path::Path;

use thiserror::Error;
use virtue_core::ec::Timeline;
use virtue_core::emotions::{sweep_emotions, EmotionRecord};
use virtue_core::generalization::{generalize_sets, Mode};
use virtue_core::inference::{saturate, KnowledgeBase, DEFAULT_MAX_DEPTH};
use virtue_core::kernel::Term;
use virtue_core::learner::{ExemplarRecord, LearntTrait};
use virtue_core::pipeline::{self, PipelineConfig};
use virtue_core::text::{parse_scenario, parse_traits, print_trait, ParseError, ScenarioDoc};
use virtue_core::utility::{mu_bar, nu_bar, UtilityConfig};

use crate::report::Line;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{file}: {source}")]
    Io { file: String, source: std::io::Error },
    #[error("{file}:{source}")]
    Parse { file: String, source: ParseError },
    #[error("{file}: {message}")]
    Scenario { file: String, message: String },
}

/// Flag values that override the scenario's own settings.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub horizon: Option<u64>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub gamma: Option<f64>,
    pub mode: Option<Mode>,
    pub max_depth: Option<usize>,
}

impl Overrides {
    pub fn config(&self, doc: &ScenarioDoc) -> PipelineConfig {
        let mut cfg = PipelineConfig::from_doc(doc);
        if let Some(h) = self.horizon {
            cfg.horizon = Some(h);
        }
        if let Some(n) = self.n {
            cfg.criteria.exemplar_threshold = n;
        }
        if let Some(m) = self.m {
            cfg.criteria.min_situations = m;
        }
        if let Some(g) = self.gamma {
            cfg.criteria.fraction = g;
        }
        if let Some(mode) = self.mode {
            cfg.mode = mode;
        }
        cfg
    }
}

pub struct Input {
    pub file: String,
    pub doc: ScenarioDoc,
}

impl Input {
    pub fn load(path: &Path) -> Result<Input, CliError> {
        let file = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            file: file.clone(),
            source,
        })?;
        let doc = parse_scenario(&text).map_err(|source| CliError::Parse {
            file: file.clone(),
            source,
        })?;
        Ok(Input { file, doc })
    }

    fn fail(&self, message: impl ToString) -> CliError {
        CliError::Scenario {
            file: self.file.clone(),
            message: message.to_string(),
        }
    }
}

fn strings<T: ToString>(items: impl IntoIterator<Item = T>) -> Vec<String> {
    items.into_iter().map(|x| x.to_string()).collect()
}

pub fn check(input: &Input) -> Vec<Line> {
    let doc = &input.doc;
    let situations = doc
        .observations
        .iter()
        .chain(&doc.probes)
        .map(|o| o.situations.len())
        .sum();
    vec![Line::Check {
        file: input.file.clone(),
        declarations: doc.declarations.len(),
        facts: doc.facts.len(),
        situations,
    }]
}

fn timeline_lines(timeline: &Timeline, out: &mut Vec<Line>) {
    out.push(Line::Horizon {
        value: timeline.horizon,
    });
    for occ in &timeline.occurrences {
        out.push(Line::Occurrence {
            event: occ.event.to_string(),
            time: occ.time,
            initiated: strings(&occ.initiated),
            terminated: strings(&occ.terminated),
        });
    }
    for (fluent, time) in timeline.holds_set() {
        out.push(Line::Holds {
            fluent: fluent.to_string(),
            time,
        });
    }
}

pub fn project(input: &Input, o: &Overrides) -> Result<Vec<Line>, CliError> {
    let world = pipeline::world(&input.doc, &o.config(&input.doc)).map_err(|e| input.fail(e))?;
    let mut out = Vec::new();
    timeline_lines(&world.timeline, &mut out);
    Ok(out)
}

pub fn utility(input: &Input, o: &Overrides) -> Result<Vec<Line>, CliError> {
    let world = pipeline::world(&input.doc, &o.config(&input.doc)).map_err(|e| input.fail(e))?;
    let cfg = UtilityConfig {
        horizon: world.timeline.horizon,
    };
    let mut out = Vec::new();
    for occ in &world.timeline.occurrences {
        let (e, t) = (&occ.event, occ.time);
        let value = mu_bar(e, t, &world.timeline, &world.table, &world.agents, cfg).map_err(|err| input.fail(err))?;
        out.push(Line::MuBar {
            event: e.to_string(),
            time: t,
            value,
        });
        for a in &world.agents {
            let value = nu_bar(a, e, t, &world.timeline, &world.table, cfg).map_err(|err| input.fail(err))?;
            out.push(Line::NuBar {
                agent: a.to_string(),
                event: e.to_string(),
                time: t,
                value,
            });
        }
    }
    Ok(out)
}

fn emotion_line(r: &EmotionRecord) -> Line {
    Line::Emotion {
        kind: r.kind.keyword().to_string(),
        subject: r.subject.to_string(),
        object: r.object.as_ref().map(Term::to_string),
        event: r.event.to_string(),
        event_time: r.event_time,
        hold_time: r.hold_time,
        text: r.to_string(),
    }
}

pub fn emotions(input: &Input, o: &Overrides) -> Result<Vec<Line>, CliError> {
    let world = pipeline::world(&input.doc, &o.config(&input.doc)).map_err(|e| input.fail(e))?;
    Ok(sweep_emotions(&world).iter().map(emotion_line).collect())
}

pub fn infer(input: &Input, o: &Overrides) -> Result<Vec<Line>, CliError> {
    let max_depth = o
        .max_depth
        .or(input.doc.config.max_depth)
        .unwrap_or(DEFAULT_MAX_DEPTH);
    let mut kb = KnowledgeBase::new(input.doc.assertions.iter().cloned(), max_depth);
    if let Some(h) = o.horizon.or(input.doc.config.horizon) {
        kb = kb.with_horizon(h);
    }
    let saturated = saturate(&kb).map_err(|e| input.fail(e))?;
    let mut texts = strings(&saturated.formulas);
    texts.sort();
    Ok(texts.into_iter().map(|text| Line::Formula { text }).collect())
}

pub fn generalize(input: &Input, o: &Overrides) -> Result<Vec<Line>, CliError> {
    if input.doc.gammas.is_empty() {
        return Err(input.fail("no `(gamma ...)` formula sets to generalize"));
    }
    let mode = o.mode.or(input.doc.config.mode).unwrap_or_default();
    let g = generalize_sets(&input.doc.gammas, mode).map_err(|e| input.fail(e))?;
    let mut out: Vec<Line> = g.pattern.iter().map(|p| Line::Pattern { text: p.to_string() }).collect();
    out.extend(g.closed.iter().map(|c| Line::Closed { text: c.to_string() }));
    out.extend(g.substitutions.iter().enumerate().map(|(index, s)| Line::Subst {
        index,
        text: s.to_string(),
    }));
    out.push(Line::Total { value: g.total });
    Ok(out)
}

fn exemplar_line(r: &ExemplarRecord) -> Line {
    Line::Exemplar {
        learner: r.learner.to_string(),
        exemplar: r.exemplar.to_string(),
        count: r.admiration_count,
        admitted_at: r.admitted_at,
    }
}

fn trait_line(t: &LearntTrait) -> Line {
    Line::Trait {
        exemplar: t.exemplar.to_string(),
        when: strings(&t.pattern),
        action: t.action_pattern.to_string(),
        sources: t.source_situations.clone(),
    }
}

/// Exemplars and learnt traits; also returns the trait store text.
pub fn learn(input: &Input, o: &Overrides) -> Result<(Vec<Line>, String), CliError> {
    let outcome = pipeline::run(&input.doc, &o.config(&input.doc)).map_err(|e| input.fail(e))?;
    let mut out = Vec::new();
    let mut store = String::new();
    for l in &outcome.learners {
        out.extend(l.exemplars.iter().map(exemplar_line));
        for t in &l.traits {
            out.push(trait_line(t));
            store.push_str(&print_trait(t));
        }
    }
    Ok((out, store))
}

pub fn act(input: &Input, traits_path: &Path) -> Result<Vec<Line>, CliError> {
    let file = traits_path.display().to_string();
    let text = std::fs::read_to_string(traits_path).map_err(|source| CliError::Io {
        file: file.clone(),
        source,
    })?;
    let traits = parse_traits(&text, &input.doc.signature).map_err(|source| CliError::Parse { file, source })?;
    let mut learners: Vec<&Term> = input.doc.probes.iter().map(|p| &p.agent).collect();
    learners.dedup();
    let mut out = Vec::new();
    for learner in learners {
        for (situation, f) in pipeline::act(&input.doc, learner, &traits) {
            out.push(Line::Proposal {
                learner: learner.to_string(),
                situation,
                text: f.to_string(),
            });
        }
    }
    Ok(out)
}

/// The full observe → admire → learn → act report.
pub fn run(input: &Input, o: &Overrides) -> Result<Vec<Line>, CliError> {
    let outcome = pipeline::run(&input.doc, &o.config(&input.doc)).map_err(|e| input.fail(e))?;
    let name = Path::new(&input.file)
        .file_name()
        .map_or_else(|| input.file.clone(), |n| n.to_string_lossy().into_owned());
    let mut out = vec![Line::Scenario { file: name }];
    timeline_lines(&outcome.timeline, &mut out);
    out.extend(outcome.emotions.iter().map(emotion_line));
    for l in &outcome.learners {
        out.extend(l.exemplars.iter().map(exemplar_line));
        out.extend(l.traits.iter().map(trait_line));
        out.extend(l.proposals.iter().map(|(situation, f)| Line::Proposal {
            learner: l.learner.to_string(),
            situation: situation.clone(),
            text: f.to_string(),
        }));
    }
    out.push(Line::Status { value: "ok".into() });
    Ok(out)
}
