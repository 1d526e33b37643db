use std::collections::{BTreeMap, BTreeSet};

use crate::generalization::Mode;
use crate::kernel::{FunctionSymbol, KernelError, Signature, Sort, SymbolKind, Term, BUILTIN_NAMES};
use crate::learner::Situation;

use super::elaborate::{is_identifier, parse_nat, parse_real, Elaborator, FreeVars, CONNECTIVES};
use super::sexpr::{read_all, Pos, SExpr};
use super::ParseError;
use crate::kernel::{Formula, ModalOp};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Declaration {
    Agent(String),
    ActionType { name: String, args: Vec<Sort> },
    Fluent { name: String, args: Vec<Sort> },
    Predicate { name: String, args: Vec<Sort> },
    Constant { name: String, sort: Sort },
}

/// `initiates`/`terminates` pattern. Variables in `fluent` are bound by
/// `event` or `time`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EffectRule {
    pub event: Term,
    pub fluent: Term,
    pub time: Term,
}

/// Conditional effect: when every antecedent atom holds at the event's
/// moment, the consequent `initiates`/`terminates` atom applies.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HornRule {
    pub antecedents: Vec<Term>,
    pub consequent: Term,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ThetaSpec {
    At(u64),
    Always,
    Never,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Fact {
    Initially(Term),
    Happens { event: Term, time: u64 },
    Nu { agent: Term, fluent: Term, time: u64, value: f64 },
    Theta { agent: Term, spec: ThetaSpec },
    Initiates(EffectRule),
    Terminates(EffectRule),
    Rule(HornRule),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScenarioConfig {
    pub horizon: Option<u64>,
    pub exemplar_threshold: Option<usize>,
    pub min_situations: Option<usize>,
    pub fraction: Option<f64>,
    pub max_depth: Option<usize>,
    pub mode: Option<Mode>,
    pub learner: Option<Term>,
}

/// Situations in which `agent` was observed (`observe`) or in which a
/// learner should act (`act`).
#[derive(Clone, Debug, PartialEq)]
pub struct Observation {
    pub agent: Term,
    pub situations: Vec<Situation>,
}

#[derive(Clone, Debug, Default)]
pub struct ScenarioDoc {
    pub signature: Signature,
    pub declarations: Vec<Declaration>,
    pub facts: Vec<Fact>,
    pub config: ScenarioConfig,
    pub observations: Vec<Observation>,
    pub probes: Vec<Observation>,
    pub assertions: Vec<Formula>,
    pub gammas: Vec<Vec<Formula>>,
}

impl ScenarioDoc {
    pub fn agents(&self) -> &[Term] {
        self.signature.agents()
    }

    /// The explicit horizon, or else the latest moment any fact mentions.
    pub fn horizon(&self) -> u64 {
        if let Some(h) = self.config.horizon {
            return h;
        }
        self.facts
            .iter()
            .filter_map(|f| match f {
                Fact::Happens { time, .. } | Fact::Nu { time, .. } => Some(*time),
                Fact::Theta {
                    spec: ThetaSpec::At(t), ..
                } => Some(*t),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn happenings(&self) -> impl Iterator<Item = (&Term, u64)> {
        self.facts.iter().filter_map(|f| match f {
            Fact::Happens { event, time } => Some((event, *time)),
            _ => None,
        })
    }

    pub fn situations_of(&self, agent: &Term) -> impl Iterator<Item = &Situation> {
        let agent = agent.clone();
        self.observations
            .iter()
            .filter(move |o| o.agent == agent)
            .flat_map(|o| o.situations.iter())
    }

    pub fn probes_for(&self, agent: &Term) -> impl Iterator<Item = &Situation> {
        let agent = agent.clone();
        self.probes
            .iter()
            .filter(move |o| o.agent == agent)
            .flat_map(|o| o.situations.iter())
    }
}

fn is_reserved(name: &str) -> bool {
    let numbered = |prefix: char| {
        name.strip_prefix(prefix)
            .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
    };
    name == "t"
        || numbered('X')
        || numbered('P')
        || CONNECTIVES.contains(&name)
        || ModalOp::from_keyword(name).is_some()
        || BUILTIN_NAMES.contains(&name)
}

struct DocParser {
    doc: ScenarioDoc,
    theta: BTreeMap<String, (ThetaSpec, Pos)>,
    nu_keys: BTreeSet<(Term, Term, u64)>,
    situation_ids: BTreeSet<String>,
}

fn items_of(expr: &SExpr) -> &[SExpr] {
    expr.as_list().unwrap_or(&[])
}

fn expect_len(expr: &SExpr, n: usize) -> Result<&[SExpr], ParseError> {
    let items = items_of(expr);
    if items.len() != n {
        let kw = expr.head().unwrap_or("form");
        return Err(ParseError::syntax(
            expr.pos(),
            format!("`{kw}` takes {} argument(s), found {}", n - 1, items.len().saturating_sub(1)),
        ));
    }
    Ok(items)
}

fn atom(expr: &SExpr, what: &str) -> Result<String, ParseError> {
    expr.as_atom()
        .map(str::to_string)
        .ok_or_else(|| ParseError::syntax(expr.pos(), format!("expected {what}")))
}

fn nat(expr: &SExpr, what: &str) -> Result<u64, ParseError> {
    expr.as_atom()
        .and_then(parse_nat)
        .ok_or_else(|| ParseError::syntax(expr.pos(), format!("expected {what} (a non-negative integer)")))
}

fn sort_list(expr: &SExpr) -> Result<Vec<Sort>, ParseError> {
    let Some(items) = expr.as_list() else {
        return Err(ParseError::syntax(expr.pos(), "expected a sort list `(sort ...)`"));
    };
    items
        .iter()
        .map(|i| {
            let name = atom(i, "a sort name")?;
            let sort: Sort = name
                .parse()
                .map_err(|e: crate::kernel::UnknownSort| ParseError::syntax(i.pos(), e.to_string()))?;
            if sort == Sort::Real || sort == Sort::Boolean {
                return Err(ParseError::syntax(i.pos(), format!("sort {sort} cannot be an argument sort")));
            }
            Ok(sort)
        })
        .collect()
}

impl DocParser {
    fn declare_name(&self, expr: &SExpr) -> Result<String, ParseError> {
        let name = atom(expr, "a name")?;
        if !is_identifier(&name) {
            return Err(ParseError::syntax(expr.pos(), format!("invalid identifier `{name}`")));
        }
        if is_reserved(&name) {
            return Err(ParseError::syntax(expr.pos(), format!("`{name}` is reserved")));
        }
        if self.doc.signature.is_declared(&name) {
            return Err(ParseError::DuplicateDeclaration {
                at: expr.pos(),
                name,
            });
        }
        Ok(name)
    }

    fn declare(&mut self, expr: &SExpr, keyword: &str) -> Result<(), ParseError> {
        let decl = match keyword {
            "declare-agent" => {
                let items = expect_len(expr, 2)?;
                Declaration::Agent(self.declare_name(&items[1])?)
            }
            "declare-constant" => {
                let items = expect_len(expr, 3)?;
                let name = self.declare_name(&items[1])?;
                let sort_name = atom(&items[2], "a sort")?;
                let sort: Sort = sort_name
                    .parse()
                    .map_err(|e: crate::kernel::UnknownSort| ParseError::syntax(items[2].pos(), e.to_string()))?;
                if sort == Sort::Real {
                    return Err(ParseError::syntax(items[2].pos(), "real constants are not supported"));
                }
                Declaration::Constant { name, sort }
            }
            _ => {
                let items = expect_len(expr, 3)?;
                let name = self.declare_name(&items[1])?;
                let args = sort_list(&items[2])?;
                match keyword {
                    "declare-action-type" => Declaration::ActionType { name, args },
                    "declare-fluent" => Declaration::Fluent { name, args },
                    _ => Declaration::Predicate { name, args },
                }
            }
        };
        let sig = &mut self.doc.signature;
        let result = match &decl {
            Declaration::Agent(name) => sig.declare_agent(name).map(drop),
            Declaration::Constant { name, sort } => sig.declare_constant(name, *sort).map(drop),
            Declaration::ActionType { name, args } => sig
                .declare_symbol(FunctionSymbol::new(name, args.clone(), Sort::ActionType, SymbolKind::User))
                .map(drop),
            Declaration::Fluent { name, args } => sig
                .declare_symbol(FunctionSymbol::new(name, args.clone(), Sort::Fluent, SymbolKind::User))
                .map(drop),
            Declaration::Predicate { name, args } => sig
                .declare_symbol(FunctionSymbol::new(name, args.clone(), Sort::Boolean, SymbolKind::User))
                .map(drop),
        };
        result.map_err(|e| match e {
            KernelError::Duplicate(name) => ParseError::DuplicateDeclaration { at: expr.pos(), name },
            other => ParseError::syntax(expr.pos(), other.to_string()),
        })?;
        self.doc.declarations.push(decl);
        Ok(())
    }

    fn ground(&self) -> Elaborator<'_> {
        Elaborator::new(&self.doc.signature, FreeVars::Reject)
    }

    fn effect_rule(&self, expr: &SExpr) -> Result<EffectRule, ParseError> {
        let items = expect_len(expr, 4)?;
        let mut el = Elaborator::new(&self.doc.signature, FreeVars::Infer);
        let event = el.term(&items[1], Sort::Event)?;
        let fluent = el.term(&items[2], Sort::Fluent)?;
        let time = el.term(&items[3], Sort::Moment)?;
        if !matches!(time, Term::Var(_) | Term::Moment(_)) {
            return Err(ParseError::syntax(items[3].pos(), "expected a moment variable or numeral"));
        }
        let mut bound = event.vars();
        time.collect_vars(&mut bound);
        if let Some(v) = fluent.vars().difference(&bound).next() {
            return Err(ParseError::syntax(
                items[2].pos(),
                format!("variable `{}` is not bound by the event or the moment", v.name),
            ));
        }
        Ok(EffectRule { event, fluent, time })
    }

    fn horn_rule(&self, expr: &SExpr) -> Result<HornRule, ParseError> {
        let items = expect_len(expr, 3)?;
        let Some(body) = items[1].as_list() else {
            return Err(ParseError::syntax(items[1].pos(), "expected an antecedent list `(atom ...)`"));
        };
        let mut el = Elaborator::new(&self.doc.signature, FreeVars::Infer);
        let antecedents = body
            .iter()
            .map(|a| el.term(a, Sort::Boolean))
            .collect::<Result<Vec<_>, _>>()?;
        for (a, expr) in antecedents.iter().zip(body) {
            if !matches!(a.head_name(), Some("holds" | "happens" | "prior")) {
                return Err(ParseError::syntax(
                    expr.pos(),
                    "rule antecedents must be `holds`, `happens` or `prior` atoms",
                ));
            }
        }
        let consequent = el.term(&items[2], Sort::Boolean)?;
        if !matches!(consequent.head_name(), Some("initiates" | "terminates")) {
            return Err(ParseError::syntax(
                items[2].pos(),
                "rule consequent must be an `initiates` or `terminates` atom",
            ));
        }
        let mut bound = BTreeSet::new();
        antecedents.iter().for_each(|a| a.collect_vars(&mut bound));
        let args = consequent.args();
        args[0].collect_vars(&mut bound);
        args[2].collect_vars(&mut bound);
        if let Some(v) = args[1].vars().difference(&bound).next() {
            return Err(ParseError::syntax(
                items[2].pos(),
                format!("variable `{}` in the effect is never bound", v.name),
            ));
        }
        Ok(HornRule {
            antecedents,
            consequent,
        })
    }

    fn fact(&mut self, expr: &SExpr, keyword: &str) -> Result<(), ParseError> {
        let fact = match keyword {
            "initially" => {
                let items = expect_len(expr, 2)?;
                Fact::Initially(self.ground().term(&items[1], Sort::Fluent)?)
            }
            "happens" => {
                let items = expect_len(expr, 3)?;
                let event = self.ground().term(&items[1], Sort::Event)?;
                let time = nat(&items[2], "a moment")?;
                Fact::Happens { event, time }
            }
            "nu" => {
                let items = expect_len(expr, 5)?;
                let agent = self.ground().term(&items[1], Sort::Agent)?;
                let fluent = self.ground().term(&items[2], Sort::Fluent)?;
                let time = nat(&items[3], "a moment")?;
                let value = items[4]
                    .as_atom()
                    .and_then(parse_real)
                    .ok_or_else(|| ParseError::syntax(items[4].pos(), "expected a finite decimal real"))?;
                if !self.nu_keys.insert((agent.clone(), fluent.clone(), time)) {
                    return Err(ParseError::DuplicateDeclaration {
                        at: expr.pos(),
                        name: format!("nu {agent} {fluent} {time}"),
                    });
                }
                Fact::Nu {
                    agent,
                    fluent,
                    time,
                    value,
                }
            }
            "theta" => {
                let items = items_of(expr);
                if items.len() < 3 {
                    return Err(ParseError::syntax(expr.pos(), "expected `(theta AGENT at N)`, `always` or `never`"));
                }
                let agent = self.ground().term(&items[1], Sort::Agent)?;
                let spec = match (items[2].as_atom(), items.len()) {
                    (Some("always"), 3) => ThetaSpec::Always,
                    (Some("never"), 3) => ThetaSpec::Never,
                    (Some("at"), 4) => ThetaSpec::At(nat(&items[3], "a moment")?),
                    _ => {
                        return Err(ParseError::syntax(
                            items[2].pos(),
                            "expected `at N`, `always` or `never`",
                        ))
                    }
                };
                let key = agent.to_string();
                if let Some((previous, _)) = self.theta.get(&key) {
                    let compatible = matches!((previous, spec), (ThetaSpec::At(_), ThetaSpec::At(_)));
                    if !compatible || *previous == spec {
                        return Err(ParseError::DuplicateDeclaration {
                            at: expr.pos(),
                            name: format!("theta {key}"),
                        });
                    }
                }
                self.theta.insert(key, (spec, expr.pos()));
                Fact::Theta { agent, spec }
            }
            "initiates" => Fact::Initiates(self.effect_rule(expr)?),
            "terminates" => Fact::Terminates(self.effect_rule(expr)?),
            _ => Fact::Rule(self.horn_rule(expr)?),
        };
        self.doc.facts.push(fact);
        Ok(())
    }

    fn config(&mut self, expr: &SExpr, keyword: &str) -> Result<(), ParseError> {
        let items = expect_len(expr, 3).or_else(|e| if keyword == "horizon" { expect_len(expr, 2) } else { Err(e) })?;
        let config = &mut self.doc.config;
        if keyword == "horizon" {
            if config.horizon.is_some() {
                return Err(ParseError::DuplicateDeclaration {
                    at: expr.pos(),
                    name: "horizon".into(),
                });
            }
            config.horizon = Some(nat(&items[1], "a horizon")?);
            return Ok(());
        }
        let key = atom(&items[1], "a setting name")?;
        let value = &items[2];
        let positive = |what: &str| -> Result<usize, ParseError> {
            match nat(value, what)? {
                0 => Err(ParseError::syntax(value.pos(), format!("{what} must be positive"))),
                n => Ok(n as usize),
            }
        };
        let duplicate = |set: bool| {
            if set {
                Err(ParseError::DuplicateDeclaration {
                    at: expr.pos(),
                    name: key.clone(),
                })
            } else {
                Ok(())
            }
        };
        match key.as_str() {
            "n" => {
                duplicate(config.exemplar_threshold.is_some())?;
                config.exemplar_threshold = Some(positive("n")?);
            }
            "m" => {
                duplicate(config.min_situations.is_some())?;
                config.min_situations = Some(positive("m")?);
            }
            "max-depth" => {
                duplicate(config.max_depth.is_some())?;
                config.max_depth = Some(positive("max-depth")?);
            }
            "gamma" => {
                duplicate(config.fraction.is_some())?;
                let g = value
                    .as_atom()
                    .and_then(parse_real)
                    .filter(|g| *g > 0.0 && *g <= 1.0)
                    .ok_or_else(|| ParseError::syntax(value.pos(), "gamma must be a real in (0, 1]"))?;
                config.fraction = Some(g);
            }
            "mode" => {
                duplicate(config.mode.is_some())?;
                let mode = value
                    .as_atom()
                    .and_then(Mode::from_keyword)
                    .ok_or_else(|| ParseError::syntax(value.pos(), "mode must be `fo` or `ho`"))?;
                config.mode = Some(mode);
            }
            "learner" => {
                duplicate(config.learner.is_some())?;
                let agent = Elaborator::new(&self.doc.signature, FreeVars::Reject).term(value, Sort::Agent)?;
                self.doc.config.learner = Some(agent);
            }
            other => {
                return Err(ParseError::syntax(
                    items[1].pos(),
                    format!("unknown setting `{other}` (expected n, m, gamma, max-depth, mode or learner)"),
                ))
            }
        }
        Ok(())
    }

    fn situation(&mut self, expr: &SExpr) -> Result<Situation, ParseError> {
        let items = items_of(expr);
        if expr.head() != Some("situation") || items.len() < 3 {
            return Err(ParseError::syntax(expr.pos(), "expected `(situation ID (at N) ...)`"));
        }
        let id = atom(&items[1], "a situation id")?;
        if !is_identifier(&id) {
            return Err(ParseError::syntax(items[1].pos(), format!("invalid situation id `{id}`")));
        }
        if !self.situation_ids.insert(id.clone()) {
            return Err(ParseError::DuplicateDeclaration { at: items[1].pos(), name: id });
        }
        let mut time = None;
        let mut formulas = Vec::new();
        let mut alternatives: Vec<Term> = Vec::new();
        let mut performed = None;
        for part in &items[2..] {
            let args = &items_of(part)[1.min(items_of(part).len())..];
            match part.head() {
                Some("at") if time.is_none() => {
                    let at = expect_len(part, 2)?;
                    time = Some(nat(&at[1], "a moment")?);
                }
                Some("facts") => {
                    for f in args {
                        let formula = self.ground().formula(f)?;
                        if !formulas.contains(&formula) {
                            formulas.push(formula);
                        }
                    }
                }
                Some("alternatives") => {
                    for a in args {
                        let alt = self.ground().term(a, Sort::ActionType)?;
                        if !alternatives.contains(&alt) {
                            alternatives.push(alt);
                        }
                    }
                }
                Some("performed") if performed.is_none() => {
                    let p = expect_len(part, 2)?;
                    performed = Some((self.ground().term(&p[1], Sort::ActionType)?, p[1].pos()));
                }
                _ => {
                    return Err(ParseError::syntax(
                        part.pos(),
                        "expected `(at N)`, `(facts ...)`, `(alternatives ...)` or `(performed ...)`",
                    ))
                }
            }
        }
        let time = time.ok_or_else(|| ParseError::syntax(expr.pos(), "situation needs `(at N)`"))?;
        if let Some((p, pos)) = &performed {
            if !alternatives.contains(p) {
                return Err(ParseError::syntax(*pos, format!("performed action {p} is not among the alternatives")));
            }
        }
        Ok(Situation {
            id,
            time,
            formulas,
            alternatives,
            performed: performed.map(|(p, _)| p),
        })
    }

    fn observation(&mut self, expr: &SExpr) -> Result<Observation, ParseError> {
        let items = items_of(expr);
        if items.len() < 2 {
            return Err(ParseError::syntax(expr.pos(), "expected an agent"));
        }
        let agent = self.ground().term(&items[1], Sort::Agent)?;
        let situations = items[2..]
            .iter()
            .map(|s| self.situation(s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Observation { agent, situations })
    }

    fn item(&mut self, expr: &SExpr) -> Result<(), ParseError> {
        let Some(keyword) = expr.head().map(str::to_string) else {
            return Err(ParseError::syntax(expr.pos(), "expected a top-level form `(keyword ...)`"));
        };
        match keyword.as_str() {
            "declare-agent" | "declare-action-type" | "declare-fluent" | "declare-predicate" | "declare-constant" => {
                self.declare(expr, &keyword)
            }
            "initially" | "happens" | "nu" | "theta" | "initiates" | "terminates" | "rule" => self.fact(expr, &keyword),
            "horizon" | "set" => self.config(expr, &keyword),
            "observe" => {
                let obs = self.observation(expr)?;
                self.doc.observations.push(obs);
                Ok(())
            }
            "act" => {
                let obs = self.observation(expr)?;
                for s in &obs.situations {
                    if s.performed.is_some() {
                        return Err(ParseError::syntax(expr.pos(), "situations to act in cannot have a performed action"));
                    }
                }
                self.doc.probes.push(obs);
                Ok(())
            }
            "assert" => {
                let items = expect_len(expr, 2)?;
                let f = self.ground().formula(&items[1])?;
                self.doc.assertions.push(f);
                Ok(())
            }
            "gamma" => {
                let items = items_of(expr);
                if items.len() < 2 {
                    return Err(ParseError::syntax(expr.pos(), "a formula set cannot be empty"));
                }
                let mut el = Elaborator::new(&self.doc.signature, FreeVars::Infer);
                let set = items[1..]
                    .iter()
                    .map(|f| el.formula(f))
                    .collect::<Result<Vec<_>, _>>()?;
                self.doc.gammas.push(set);
                Ok(())
            }
            other => Err(ParseError::syntax(expr.pos(), format!("unknown form `{other}`"))),
        }
    }
}

/// Parses and sort-checks a scenario document. The first error aborts the
/// parse; no partial document is returned.
pub fn parse_scenario(text: &str) -> Result<ScenarioDoc, ParseError> {
    let exprs = read_all(text)?;
    let mut parser = DocParser {
        doc: ScenarioDoc::default(),
        theta: BTreeMap::new(),
        nu_keys: BTreeSet::new(),
        situation_ids: BTreeSet::new(),
    };
    for expr in &exprs {
        parser.item(expr)?;
    }
    Ok(parser.doc)
}
