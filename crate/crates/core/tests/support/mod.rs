//! Test-only models and oracles shared by the integration suites.
//!
//! A [`Model`] is a small scenario described by indices. It renders to
//! scenario text for the library under test, and the oracle functions here
//! evaluate it straight from the definitions without calling into the
//! library. Reals print with three decimals, which the parser reads back as
//! exactly the model's values.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Effects {
    pub initiates: BTreeSet<usize>,
    pub terminates: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThetaM {
    Always,
    Never,
    At(BTreeSet<u64>),
}

/// Agents `a{i}`, nullary fluents `f{i}`, nullary action types `k{i}`.
/// Every action of type `k{i}` has the effects `kinds[i]`, whoever acts.
#[derive(Clone, Debug)]
pub struct Model {
    pub agents: usize,
    pub fluents: usize,
    pub kinds: Vec<Effects>,
    pub initially: BTreeSet<usize>,
    /// `(time, agent, kind)`.
    pub happens: BTreeSet<(u64, usize, usize)>,
    pub horizon: u64,
    /// `(agent, fluent, moment) -> value`; absent keys are 0.
    pub nu: BTreeMap<(usize, usize, u64), f64>,
    pub theta: Vec<ThetaM>,
}

pub fn agent(i: usize) -> String {
    format!("a{i}")
}

pub fn fluent(i: usize) -> String {
    format!("(f{i})")
}

pub fn kind(i: usize) -> String {
    format!("(k{i})")
}

pub fn event(a: usize, k: usize) -> String {
    format!("(action a{a} (k{k}))")
}

/// A random multiple of 0.25 in `[-2, 2]`, never 0.
pub fn quarter(rng: &mut impl Rng) -> f64 {
    let q = *[-8, -7, -6, -5, -4, -3, -2, -1, 1, 2, 3, 4, 5, 6, 7, 8].choose(rng).unwrap();
    q as f64 / 4.0
}

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub agents: usize,
    pub fluents: usize,
    pub kinds: usize,
    pub events: usize,
    pub horizon: u64,
    /// Expected number of ν entries per (agent, fluent).
    pub nu_density: f64,
}

impl Model {
    pub fn new(agents: usize, fluents: usize, kinds: Vec<Effects>, horizon: u64) -> Self {
        Model {
            agents,
            fluents,
            kinds,
            initially: BTreeSet::new(),
            happens: BTreeSet::new(),
            horizon,
            nu: BTreeMap::new(),
            theta: vec![ThetaM::Always; agents],
        }
    }

    /// Random effects never initiate and terminate the same fluent within one
    /// action type; conflicts between simultaneous events remain possible.
    pub fn random(rng: &mut impl Rng, lim: Limits) -> Self {
        let agents = rng.gen_range(1..=lim.agents);
        let fluents = rng.gen_range(1..=lim.fluents);
        let kinds = (0..rng.gen_range(1..=lim.kinds))
            .map(|_| {
                let mut e = Effects::default();
                for f in 0..fluents {
                    match rng.gen_range(0..4) {
                        0 => {
                            e.initiates.insert(f);
                        }
                        1 => {
                            e.terminates.insert(f);
                        }
                        _ => {}
                    }
                }
                e
            })
            .collect::<Vec<_>>();
        let horizon = rng.gen_range(0..=lim.horizon);
        let mut m = Model::new(agents, fluents, kinds, horizon);
        for f in 0..fluents {
            if rng.gen_bool(0.3) {
                m.initially.insert(f);
            }
        }
        for _ in 0..rng.gen_range(0..=lim.events) {
            let k = rng.gen_range(0..m.kinds.len());
            m.happens.insert((rng.gen_range(0..=horizon), rng.gen_range(0..agents), k));
        }
        let cells = (fluents * (horizon as usize + 1)) as f64;
        let p = (lim.nu_density / cells).min(1.0);
        for a in 0..agents {
            for f in 0..fluents {
                for y in 0..=horizon {
                    if rng.gen_bool(p) {
                        m.nu.insert((a, f, y), quarter(rng));
                    }
                }
            }
        }
        m.theta = (0..agents)
            .map(|_| match rng.gen_range(0..4) {
                0 => ThetaM::Never,
                1 => ThetaM::At((0..=horizon).filter(|_| rng.gen_bool(0.5)).collect()),
                _ => ThetaM::Always,
            })
            .collect();
        m
    }

    /// Drops events until no moment both initiates and terminates a fluent.
    pub fn without_conflicts(mut self) -> Self {
        while let Some(t) = self.conflict_moment() {
            let last = *self.happens.iter().rev().find(|h| h.0 == t).unwrap();
            self.happens.remove(&last);
        }
        self
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for a in 0..self.agents {
            writeln!(s, "(declare-agent {})", agent(a)).unwrap();
        }
        for f in 0..self.fluents {
            writeln!(s, "(declare-fluent f{f} ())").unwrap();
        }
        for k in 0..self.kinds.len() {
            writeln!(s, "(declare-action-type k{k} ())").unwrap();
        }
        writeln!(s, "(horizon {})", self.horizon).unwrap();
        for f in &self.initially {
            writeln!(s, "(initially {})", fluent(*f)).unwrap();
        }
        for (k, e) in self.kinds.iter().enumerate() {
            for f in &e.initiates {
                writeln!(s, "(initiates (action x {}) {} t)", kind(k), fluent(*f)).unwrap();
            }
            for f in &e.terminates {
                writeln!(s, "(terminates (action x {}) {} t)", kind(k), fluent(*f)).unwrap();
            }
        }
        for (t, a, k) in &self.happens {
            writeln!(s, "(happens {} {t})", event(*a, *k)).unwrap();
        }
        for ((a, f, y), v) in &self.nu {
            writeln!(s, "(nu {} {} {y} {v:.3})", agent(*a), fluent(*f)).unwrap();
        }
        for (a, th) in self.theta.iter().enumerate() {
            match th {
                ThetaM::Always => writeln!(s, "(theta {} always)", agent(a)).unwrap(),
                ThetaM::Never => writeln!(s, "(theta {} never)", agent(a)).unwrap(),
                ThetaM::At(ts) if ts.is_empty() => writeln!(s, "(theta {} never)", agent(a)).unwrap(),
                ThetaM::At(ts) => {
                    for t in ts {
                        writeln!(s, "(theta {} at {t})", agent(a)).unwrap();
                    }
                }
            }
        }
        s
    }

    // ---- event calculus ----

    pub fn effects(&self, k: usize) -> &Effects {
        &self.kinds[k]
    }

    pub fn conflict_moment(&self) -> Option<u64> {
        let mut by_time: BTreeMap<u64, (BTreeSet<usize>, BTreeSet<usize>)> = BTreeMap::new();
        for &(t, _, k) in &self.happens {
            let entry = by_time.entry(t).or_default();
            entry.0.extend(&self.kinds[k].initiates);
            entry.1.extend(&self.kinds[k].terminates);
        }
        by_time
            .into_iter()
            .find(|(_, (i, x))| !i.is_disjoint(x))
            .map(|(t, _)| t)
    }

    /// Some occurrence at `s` with `from <= s < to` terminates `f`.
    fn clipped(&self, from: u64, f: usize, to: u64) -> bool {
        self.happens
            .iter()
            .any(|&(s, _, k)| from <= s && s < to && self.kinds[k].terminates.contains(&f))
    }

    /// Initially true and never clipped, or initiated strictly earlier and
    /// not clipped since.
    pub fn holds(&self, f: usize, t: u64) -> bool {
        let from_start = self.initially.contains(&f) && !self.clipped(0, f, t);
        let initiated = self
            .happens
            .iter()
            .any(|&(s, _, k)| s < t && self.kinds[k].initiates.contains(&f) && !self.clipped(s, f, t));
        from_start || initiated
    }

    /// `(fluent text, moment)` for every pair that holds on `[0, H]`.
    pub fn holds_set(&self) -> BTreeSet<(String, u64)> {
        let mut out = BTreeSet::new();
        for t in 0..=self.horizon {
            for f in 0..self.fluents {
                if self.holds(f, t) {
                    out.insert((fluent(f), t));
                }
            }
        }
        out
    }

    // ---- utilities ----

    pub fn nu(&self, a: usize, f: usize, y: u64) -> f64 {
        self.nu.get(&(a, f, y)).copied().unwrap_or(0.0)
    }

    pub fn mu(&self, f: usize, y: u64) -> f64 {
        (0..self.agents).map(|a| self.nu(a, f, y)).sum()
    }

    fn event_total(&self, k: usize, t: u64, value: impl Fn(usize, u64) -> f64) -> f64 {
        let e = &self.kinds[k];
        let mut total = 0.0;
        for y in t + 1..=self.horizon {
            let gain: f64 = e.initiates.iter().map(|&f| value(f, y)).sum();
            let loss: f64 = e.terminates.iter().map(|&f| value(f, y)).sum();
            total += gain - loss;
        }
        total
    }

    pub fn nu_bar(&self, a: usize, k: usize, t: u64) -> f64 {
        self.event_total(k, t, |f, y| self.nu(a, f, y))
    }

    pub fn mu_bar(&self, k: usize, t: u64) -> f64 {
        self.event_total(k, t, |f, y| self.mu(f, y))
    }

    // ---- emotions ----

    pub fn theta(&self, a: usize, t: u64) -> bool {
        match &self.theta[a] {
            ThetaM::Always => true,
            ThetaM::Never => false,
            ThetaM::At(ts) => ts.contains(&t),
        }
    }

    /// Some initiated fluent has a value on the wrong side of 0 at some
    /// moment in `[0, H]`.
    fn initiated_any(&self, k: usize, value: impl Fn(usize, u64) -> f64, bad: impl Fn(f64) -> bool) -> bool {
        self.kinds[k]
            .initiates
            .iter()
            .any(|&f| (0..=self.horizon).any(|y| bad(value(f, y))))
    }

    fn desirable_for(&self, b: usize, k: usize, t: u64) -> bool {
        self.nu_bar(b, k, t) > 0.0 && !self.initiated_any(k, |f, y| self.nu(b, f, y), |v| v < 0.0)
    }

    fn undesirable_for(&self, b: usize, k: usize, t: u64) -> bool {
        self.nu_bar(b, k, t) < 0.0 && !self.initiated_any(k, |f, y| self.nu(b, f, y), |v| v > 0.0)
    }

    pub fn joy(&self, a: usize, k: usize, t: u64, th: u64) -> bool {
        self.theta(a, th) && self.desirable_for(a, k, t)
    }

    pub fn distress(&self, a: usize, k: usize, t: u64, th: u64) -> bool {
        self.theta(a, th) && self.undesirable_for(a, k, t)
    }

    pub fn happy_for(&self, a: usize, b: usize, k: usize, t: u64, th: u64) -> bool {
        self.theta(a, th) && a != b && self.desirable_for(b, k, t)
    }

    pub fn resentment(&self, a: usize, b: usize, k: usize, t: u64, th: u64) -> bool {
        self.happy_for(a, b, k, t, th)
    }

    pub fn gloating(&self, a: usize, b: usize, k: usize, t: u64, th: u64) -> bool {
        self.theta(a, th) && a != b && self.undesirable_for(b, k, t)
    }

    pub fn pity_for(&self, a: usize, b: usize, k: usize, t: u64, th: u64) -> bool {
        self.gloating(a, b, k, t, th)
    }

    /// `a` admires `actor` for its `k` action at `t`.
    pub fn admires(&self, a: usize, actor: usize, k: usize, t: u64, th: u64) -> bool {
        self.theta(a, th)
            && a != actor
            && self.mu_bar(k, t) > 0.0
            && !self.initiated_any(k, |f, y| self.mu(f, y), |v| v < 0.0)
    }

    /// Every true emotion instance, as
    /// `(hold time, event time, event, kind, subject, object)`.
    pub fn emotions(&self) -> BTreeSet<EmotionKey> {
        let mut out = BTreeSet::new();
        let keyed = |kind: &str, a: usize, b: Option<usize>, actor: usize, k: usize, t: u64, th: u64| {
            (th, t, event(actor, k), kind.to_string(), agent(a), b.map(agent))
        };
        for &(t, actor, k) in &self.happens {
            for th in 0..=self.horizon {
                for a in 0..self.agents {
                    if self.joy(a, k, t, th) {
                        out.insert(keyed("joy", a, None, actor, k, t, th));
                    }
                    if self.distress(a, k, t, th) {
                        out.insert(keyed("distress", a, None, actor, k, t, th));
                    }
                    if self.admires(a, actor, k, t, th) {
                        out.insert(keyed("admires", a, Some(actor), actor, k, t, th));
                    }
                    for b in 0..self.agents {
                        let cases = [
                            ("happy-for", self.happy_for(a, b, k, t, th)),
                            ("gloating", self.gloating(a, b, k, t, th)),
                            ("pity-for", self.pity_for(a, b, k, t, th)),
                            ("resentment", self.resentment(a, b, k, t, th)),
                        ];
                        for (kind, holds) in cases {
                            if holds {
                                out.insert(keyed(kind, a, Some(b), actor, k, t, th));
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

pub type EmotionKey = (u64, u64, String, String, String, Option<String>);

/// The fixed family enumerated by the exhaustive projection check: one
/// agent, four fluents, three action types, `H <= 5`, every initial state,
/// and every set of at most three distinct `(type, moment)` events.
pub fn ec_family() -> Vec<Model> {
    let kinds = vec![
        Effects {
            initiates: [0, 1].into(),
            terminates: [2].into(),
        },
        Effects {
            initiates: [2].into(),
            terminates: [0].into(),
        },
        Effects {
            initiates: [3].into(),
            terminates: [1].into(),
        },
    ];
    let mut out = Vec::new();
    for h in 0..=5u64 {
        let slots: Vec<(u64, usize, usize)> = (0..=h).flat_map(|t| (0..3).map(move |k| (t, 0, k))).collect();
        let mut event_sets: Vec<BTreeSet<(u64, usize, usize)>> = vec![BTreeSet::new()];
        for i in 0..slots.len() {
            event_sets.push([slots[i]].into());
            for j in i + 1..slots.len() {
                event_sets.push([slots[i], slots[j]].into());
                for l in j + 1..slots.len() {
                    event_sets.push([slots[i], slots[j], slots[l]].into());
                }
            }
        }
        for init in 0..16usize {
            for events in &event_sets {
                let mut m = Model::new(1, 4, kinds.clone(), h);
                m.initially = (0..4).filter(|f| init & (1 << f) != 0).collect();
                m.happens = events.clone();
                out.push(m);
            }
        }
    }
    out
}

// ---- first-order terms and least general generalizations ----

/// An oracle term: a symbol applied to arguments, or a variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum T {
    App(String, Vec<T>),
    Var(String),
}

impl T {
    pub fn c(name: &str) -> T {
        T::App(name.into(), vec![])
    }

    pub fn depth(&self) -> usize {
        match self {
            T::App(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
            T::Var(_) => 0,
        }
    }

    fn at(&self, path: &[usize]) -> &T {
        match (self, path.split_first()) {
            (_, None) => self,
            (T::App(_, args), Some((i, rest))) => args[*i].at(rest),
            (T::Var(_), Some(_)) => unreachable!("path runs past a variable"),
        }
    }

    fn paths(&self, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(prefix.clone());
        if let T::App(_, args) = self {
            for (i, a) in args.iter().enumerate() {
                prefix.push(i);
                a.paths(prefix, out);
                prefix.pop();
            }
        }
    }

    fn replace(&self, path: &[usize], with: &T) -> T {
        match (self, path.split_first()) {
            (_, None) => with.clone(),
            (T::App(name, args), Some((i, rest))) => {
                let mut args = args.clone();
                args[*i] = args[*i].replace(rest, with);
                T::App(name.clone(), args)
            }
            (T::Var(_), Some(_)) => unreachable!("path runs past a variable"),
        }
    }
}

/// One-way matching: `pattern` instantiated by some substitution is `target`.
pub fn omatch(pattern: &T, target: &T) -> bool {
    fn go(p: &T, t: &T, s: &mut BTreeMap<String, T>) -> bool {
        match (p, t) {
            (T::Var(v), _) => match s.get(v) {
                Some(bound) => bound == t,
                None => {
                    s.insert(v.clone(), t.clone());
                    true
                }
            },
            (T::App(f, xs), T::App(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| go(x, y, s))
            }
            (T::App(..), T::Var(_)) => false,
        }
    }
    go(pattern, target, &mut BTreeMap::new())
}

pub fn variant(a: &T, b: &T) -> bool {
    omatch(a, b) && omatch(b, a)
}

fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = items.split_first() else {
        return vec![vec![]];
    };
    let mut out = Vec::new();
    for p in set_partitions(rest) {
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].push(first);
            out.push(q);
        }
        let mut q = p;
        q.push(vec![first]);
        out.push(q);
    }
    out
}

/// Every generalization of `s` up to renaming: choose positions that are
/// pairwise non-nested, partition them into blocks of equal subterms, and
/// put one fresh variable per block.
pub fn generalizations(s: &T) -> Vec<T> {
    let mut paths = Vec::new();
    s.paths(&mut Vec::new(), &mut paths);
    let n = paths.len();
    let nested = |a: &[usize], b: &[usize]| a.starts_with(b) || b.starts_with(a);
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let chosen: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let antichain = chosen
            .iter()
            .enumerate()
            .all(|(x, &i)| chosen[x + 1..].iter().all(|&j| !nested(&paths[i], &paths[j])));
        if !antichain {
            continue;
        }
        for blocks in set_partitions(&chosen) {
            let coherent = blocks
                .iter()
                .all(|b| b.iter().all(|&i| s.at(&paths[i]) == s.at(&paths[b[0]])));
            if !coherent {
                continue;
            }
            let mut g = s.clone();
            for (v, block) in blocks.iter().enumerate() {
                for &i in block {
                    g = g.replace(&paths[i], &T::Var(format!("V{v}")));
                }
            }
            out.push(g);
        }
    }
    out
}

/// The least general common generalization of `s` and `t`, found by
/// searching the generalizations of `s` for the one every other common
/// generalization subsumes.
pub fn brute_lgg(s: &T, t: &T) -> T {
    let common: Vec<T> = generalizations(s).into_iter().filter(|g| omatch(g, t)).collect();
    let least: Vec<&T> = common
        .iter()
        .filter(|g| common.iter().all(|other| omatch(other, g)))
        .collect();
    assert!(!least.is_empty(), "no least element for {s:?} and {t:?}");
    least[0].clone()
}

/// All ground terms of depth at most `depth` over constants `a`, `b`, unary
/// `f` and binary `g`.
pub fn ground_terms(depth: usize) -> Vec<T> {
    let mut terms = vec![T::c("a"), T::c("b")];
    for _ in 0..depth {
        let prev = terms.clone();
        let mut next = vec![T::c("a"), T::c("b")];
        next.extend(prev.iter().map(|x| T::App("f".into(), vec![x.clone()])));
        for x in &prev {
            for y in &prev {
                next.push(T::App("g".into(), vec![x.clone(), y.clone()]));
            }
        }
        terms = next;
    }
    terms
}

/// Constants `a`, `b`, unary `f`, binary `g`.
pub const FOUR: &[(&str, usize)] = &[("a", 0), ("b", 0), ("f", 1), ("g", 2)];
/// [`FOUR`] plus the constant `c`.
pub const FIVE: &[(&str, usize)] = &[("a", 0), ("b", 0), ("c", 0), ("f", 1), ("g", 2)];

/// A random ground term over `symbols`, at most `depth` deep.
pub fn random_term(rng: &mut impl Rng, depth: usize, symbols: &[(&str, usize)]) -> T {
    let pool: Vec<&(&str, usize)> = symbols.iter().filter(|s| depth > 0 || s.1 == 0).collect();
    let &&(name, arity) = pool.choose(rng).unwrap();
    T::App(name.into(), (0..arity).map(|_| random_term(rng, depth - 1, symbols)).collect())
}

// ---- propositional Horn knowledge bases ----

/// A clause over atoms `p0..p3`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Clause {
    Fact(usize),
    Denial(usize),
    Rule(Vec<usize>, usize),
}

pub fn atom(i: usize) -> String {
    format!("(p{i})")
}

impl Clause {
    pub fn text(&self) -> String {
        match self {
            Clause::Fact(i) => atom(*i),
            Clause::Denial(i) => format!("(not {})", atom(*i)),
            Clause::Rule(body, head) if body.len() == 1 => format!("(implies {} {})", atom(body[0]), atom(*head)),
            Clause::Rule(body, head) => {
                let body: Vec<String> = body.iter().map(|&i| atom(i)).collect();
                format!("(implies (and {}) {})", body.join(" "), atom(*head))
            }
        }
    }

    pub fn eval(&self, v: u32) -> bool {
        let at = |i: usize| v & (1 << i) != 0;
        match self {
            Clause::Fact(i) => at(*i),
            Clause::Denial(i) => !at(*i),
            Clause::Rule(body, head) => !body.iter().all(|&i| at(i)) || at(*head),
        }
    }
}

/// Facts, denials, single-premise and two-premise rules over four atoms.
pub fn clause_universe() -> Vec<Clause> {
    let mut out = Vec::new();
    for i in 0..4 {
        out.push(Clause::Fact(i));
        out.push(Clause::Denial(i));
    }
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                out.push(Clause::Rule(vec![i], j));
            }
        }
    }
    for i in 0..4 {
        for j in i + 1..4 {
            for h in 0..4 {
                if h != i && h != j {
                    out.push(Clause::Rule(vec![i, j], h));
                }
            }
        }
    }
    out
}

/// A query and its truth value under an assignment of `p0..p3`.
#[derive(Clone, Debug)]
pub enum Query {
    Atom(usize),
    Not(usize),
    And(usize, usize),
    Implies(usize, usize),
}

impl Query {
    pub fn all() -> Vec<Query> {
        let mut out = Vec::new();
        for i in 0..4 {
            out.push(Query::Atom(i));
            out.push(Query::Not(i));
            for j in 0..4 {
                if i != j {
                    out.push(Query::And(i, j));
                    out.push(Query::Implies(i, j));
                }
            }
        }
        out
    }

    pub fn text(&self) -> String {
        match self {
            Query::Atom(i) => atom(*i),
            Query::Not(i) => format!("(not {})", atom(*i)),
            Query::And(i, j) => format!("(and {} {})", atom(*i), atom(*j)),
            Query::Implies(i, j) => format!("(implies {} {})", atom(*i), atom(*j)),
        }
    }

    pub fn eval(&self, v: u32) -> bool {
        let at = |i: usize| v & (1 << i) != 0;
        match self {
            Query::Atom(i) => at(*i),
            Query::Not(i) => !at(*i),
            Query::And(i, j) => at(*i) && at(*j),
            Query::Implies(i, j) => !at(*i) || at(*j),
        }
    }
}

/// Classical entailment by truth table over the 16 assignments.
pub fn truth_table_entails(kb: &[Clause], q: &Query) -> bool {
    (0..16u32).all(|v| !kb.iter().all(|c| c.eval(v)) || q.eval(v))
}

pub const HORN_DECLS: &str = "(declare-predicate p0 ()) (declare-predicate p1 ()) \
                              (declare-predicate p2 ()) (declare-predicate p3 ())";
