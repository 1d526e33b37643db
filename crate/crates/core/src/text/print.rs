use std::fmt::Write;

use crate::kernel::{Formula, Sort, Term};
use crate::learner::Situation;

use super::scenario::{Declaration, Fact, ScenarioDoc, ThetaSpec};

/// Shortest decimal that reads back to the same `f64`, always with a
/// fractional part.
pub fn format_real(x: f64) -> String {
    let s = x.to_string();
    if s.contains('.') || !x.is_finite() {
        s
    } else {
        format!("{s}.0")
    }
}

pub fn print_term(term: &Term) -> String {
    term.to_string()
}

pub fn print_formula(formula: &Formula) -> String {
    formula.to_string()
}

fn sorts(args: &[Sort]) -> String {
    let names: Vec<_> = args.iter().map(|s| s.name()).collect();
    format!("({})", names.join(" "))
}

fn joined<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn situation(out: &mut String, s: &Situation) {
    let _ = write!(out, "\n  (situation {} (at {})", s.id, s.time);
    if !s.formulas.is_empty() {
        let _ = write!(out, " (facts {})", joined(&s.formulas));
    }
    if !s.alternatives.is_empty() {
        let _ = write!(out, " (alternatives {})", joined(&s.alternatives));
    }
    if let Some(p) = &s.performed {
        let _ = write!(out, " (performed {p})");
    }
    out.push(')');
}

/// Canonical text of a document. Parsing the output yields an equal
/// document.
pub fn print_scenario(doc: &ScenarioDoc) -> String {
    let mut out = String::new();
    for d in &doc.declarations {
        let _ = match d {
            Declaration::Agent(n) => writeln!(out, "(declare-agent {n})"),
            Declaration::ActionType { name, args } => writeln!(out, "(declare-action-type {name} {})", sorts(args)),
            Declaration::Fluent { name, args } => writeln!(out, "(declare-fluent {name} {})", sorts(args)),
            Declaration::Predicate { name, args } => writeln!(out, "(declare-predicate {name} {})", sorts(args)),
            Declaration::Constant { name, sort } => writeln!(out, "(declare-constant {name} {sort})"),
        };
    }
    let c = &doc.config;
    if let Some(h) = c.horizon {
        let _ = writeln!(out, "(horizon {h})");
    }
    if let Some(n) = c.exemplar_threshold {
        let _ = writeln!(out, "(set n {n})");
    }
    if let Some(m) = c.min_situations {
        let _ = writeln!(out, "(set m {m})");
    }
    if let Some(g) = c.fraction {
        let _ = writeln!(out, "(set gamma {})", format_real(g));
    }
    if let Some(d) = c.max_depth {
        let _ = writeln!(out, "(set max-depth {d})");
    }
    if let Some(mode) = c.mode {
        let _ = writeln!(out, "(set mode {})", mode.keyword());
    }
    if let Some(l) = &c.learner {
        let _ = writeln!(out, "(set learner {l})");
    }
    for f in &doc.facts {
        let _ = match f {
            Fact::Initially(fl) => writeln!(out, "(initially {fl})"),
            Fact::Happens { event, time } => writeln!(out, "(happens {event} {time})"),
            Fact::Nu {
                agent,
                fluent,
                time,
                value,
            } => writeln!(out, "(nu {agent} {fluent} {time} {})", format_real(*value)),
            Fact::Theta { agent, spec } => match spec {
                ThetaSpec::At(t) => writeln!(out, "(theta {agent} at {t})"),
                ThetaSpec::Always => writeln!(out, "(theta {agent} always)"),
                ThetaSpec::Never => writeln!(out, "(theta {agent} never)"),
            },
            Fact::Initiates(r) => writeln!(out, "(initiates {} {} {})", r.event, r.fluent, r.time),
            Fact::Terminates(r) => writeln!(out, "(terminates {} {} {})", r.event, r.fluent, r.time),
            Fact::Rule(r) => writeln!(out, "(rule ({}) {})", joined(&r.antecedents), r.consequent),
        };
    }
    for (keyword, group) in [("observe", &doc.observations), ("act", &doc.probes)] {
        for o in group {
            let _ = write!(out, "({keyword} {}", o.agent);
            for s in &o.situations {
                situation(&mut out, s);
            }
            out.push_str(")\n");
        }
    }
    for a in &doc.assertions {
        let _ = writeln!(out, "(assert {a})");
    }
    for g in &doc.gammas {
        let _ = writeln!(out, "(gamma {})", joined(g));
    }
    out
}
