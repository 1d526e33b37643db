//! Report lines. Each line renders either as canonical s-expression text or
//! as one JSON object carrying the same fields.

use serde::Serialize;
use virtue_core::text::format_real;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "record", rename_all = "kebab-case")]
pub enum Line {
    Scenario {
        file: String,
    },
    Check {
        file: String,
        declarations: usize,
        facts: usize,
        situations: usize,
    },
    Horizon {
        value: u64,
    },
    Occurrence {
        event: String,
        time: u64,
        initiated: Vec<String>,
        terminated: Vec<String>,
    },
    Holds {
        fluent: String,
        time: u64,
    },
    MuBar {
        event: String,
        time: u64,
        value: f64,
    },
    NuBar {
        agent: String,
        event: String,
        time: u64,
        value: f64,
    },
    Emotion {
        kind: String,
        subject: String,
        object: Option<String>,
        event: String,
        event_time: u64,
        hold_time: u64,
        text: String,
    },
    Formula {
        text: String,
    },
    Pattern {
        text: String,
    },
    Closed {
        text: String,
    },
    Subst {
        index: usize,
        text: String,
    },
    Total {
        value: bool,
    },
    Exemplar {
        learner: String,
        exemplar: String,
        count: usize,
        admitted_at: Option<u64>,
    },
    Trait {
        exemplar: String,
        when: Vec<String>,
        action: String,
        sources: Vec<String>,
    },
    Proposal {
        learner: String,
        situation: String,
        text: String,
    },
    Status {
        value: String,
    },
}

impl Line {
    pub fn text(&self) -> String {
        match self {
            Line::Scenario { file } => format!("(scenario {file})"),
            Line::Check {
                file,
                declarations,
                facts,
                situations,
            } => format!("{file}: ok, {declarations} declarations, {facts} facts, {situations} situations"),
            Line::Horizon { value } => format!("(horizon {value})"),
            Line::Occurrence {
                event,
                time,
                initiated,
                terminated,
            } => {
                let list = |kw: &str, xs: &[String]| {
                    let mut s = format!("({kw}");
                    for x in xs {
                        s.push(' ');
                        s.push_str(x);
                    }
                    s.push(')');
                    s
                };
                format!(
                    "(occurrence {event} {time} {} {})",
                    list("initiates", initiated),
                    list("terminates", terminated)
                )
            }
            Line::Holds { fluent, time } => format!("(holds {fluent} {time})"),
            Line::MuBar { event, time, value } => format!("(mu-bar {event} {time} {})", format_real(*value)),
            Line::NuBar {
                agent,
                event,
                time,
                value,
            } => format!("(nu-bar {agent} {event} {time} {})", format_real(*value)),
            Line::Emotion { text, .. } | Line::Formula { text } => text.clone(),
            Line::Pattern { text } => format!("(pattern {text})"),
            Line::Closed { text } => format!("(closed {text})"),
            Line::Subst { index, text } => format!("(subst {index} {text})"),
            Line::Total { value } => format!("(total {value})"),
            Line::Exemplar {
                learner,
                exemplar,
                count,
                admitted_at,
            } => {
                let admitted = admitted_at.map_or_else(|| "none".to_string(), |t| t.to_string());
                format!("(exemplar {learner} {exemplar} (count {count}) (admitted {admitted}))")
            }
            Line::Trait {
                exemplar,
                when,
                action,
                sources,
            } => format!(
                "(learnt (exemplar {exemplar}) (when {}) (do {action}) (sources {}))",
                when.join(" "),
                sources.join(" ")
            ),
            Line::Proposal {
                learner,
                situation,
                text,
            } => format!("(propose {learner} {situation} {text})"),
            Line::Status { value } => format!("(status {value})"),
        }
    }

    pub fn json(&self) -> String {
        serde_json::to_string(self).expect("report lines serialize")
    }
}

/// Renders `lines` one per line, as text or JSON.
pub fn render(lines: &[Line], json: bool) -> String {
    let mut out = String::new();
    for line in lines {
        out.push_str(&if json { line.json() } else { line.text() });
        out.push('\n');
    }
    out
}
