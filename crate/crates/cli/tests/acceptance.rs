//! Acceptance suite. Each criterion is its own test and also writes one
//! `PASS`/`FAIL` line straight to stdout, so the verdicts show up in the
//! test log even when output capture is on.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use support::{
    brute_lgg, clause_universe, ec_family, ground_terms, omatch, quarter, random_term, truth_table_entails, variant,
    Clause, EmotionKey, Limits, Model, Query, ThetaM, FOUR, HORN_DECLS, T,
};
use virtue_core::ec::{project, Timeline};
use virtue_core::emotions::{
    eval_admiration, eval_distress, eval_happy_for, eval_joy, eval_occ_table_emotion, sweep_emotions, EmotionKind,
    EmotionRecord, World,
};
use virtue_core::generalization::{anti_unify_terms, generalize_sets, Mode};
use virtue_core::inference::{entails0, saturate, KnowledgeBase};
use virtue_core::kernel::{builtin, pattern_variant, Formula, FunctionSymbol, Head, Sort, Term};
use virtue_core::learner::{detect_trait, identify_exemplars, Situation, TraitCriteria};
use virtue_core::pipeline::{self, PipelineConfig};
use virtue_core::text::{parse_formula, parse_scenario, parse_traits, ScenarioDoc};
use virtue_core::utility::{mu, mu_bar, nu, nu_bar, NuTable, UtilityConfig};

type Verdict = Result<String, String>;

/// Writes the verdict line and fails the test on `Err`.
fn report(name: &str, verdict: Verdict) {
    let line = match &verdict {
        Ok(detail) => format!("PASS {name}: {detail}\n"),
        Err(why) => format!("FAIL {name}: {why}\n"),
    };
    let _ = std::io::stdout().write_all(line.as_bytes());
    if let Err(why) = verdict {
        panic!("{name}: {why}");
    }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if $cond {
        } else {
            return Err(format!($($msg)+));
        }
    };
}

fn scenarios_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

fn load(name: &str) -> ScenarioDoc {
    let text = std::fs::read_to_string(scenarios_dir().join(name)).expect("corpus file");
    parse_scenario(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn corpus() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(scenarios_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "vz"))
        .collect();
    files.sort();
    files
}

// ---- marketplace ----

fn marketplace() -> Verdict {
    let doc = load("marketplace.vz");
    let outcome = pipeline::run(&doc, &PipelineConfig::from_doc(&doc)).map_err(|e| e.to_string())?;
    let learner = &outcome.learners[0];
    ensure!(learner.traits.len() == 1, "expected one trait, got {}", learner.traits.len());
    let learnt = &learner.traits[0];
    let expected = parse_traits(
        "(trait (exemplar seller) (vars ((x fluent) (t moment))) (when (holds x t)) (do (utter x)) (sources s1 s2))",
        &doc.signature,
    )
    .map_err(|e| e.to_string())?;
    ensure!(
        pattern_variant(
            (&learnt.pattern, &learnt.action_pattern),
            (&expected[0].pattern, &expected[0].action_pattern)
        ),
        "learnt {:?} / {}",
        learnt.pattern.iter().map(ToString::to_string).collect::<Vec<_>>(),
        learnt.action_pattern
    );
    let proposals: Vec<String> = learner.proposals.iter().map(|(s, f)| format!("{s} {f}")).collect();
    ensure!(
        proposals == ["p1 (happens (action observer (utter (broken))) 5)"],
        "proposals {proposals:?}"
    );
    Ok(format!(
        "learnt <{}, {}>, proposed utter(broken) at 5",
        learnt.pattern[0], learnt.action_pattern
    ))
}

#[test]
fn criterion_marketplace_golden() {
    report("marketplace golden", marketplace());
}

// ---- anti-unification goldens ----

fn au_goldens() -> Verdict {
    let cases = [
        ("talking.vz", "(forall ((x agent)) (implies (talkingWith x) (Honesty)))", true),
        ("likes.vz", "(likes jill X0)", false),
        ("likes-ho.vz", "(P0 jill X0)", false),
        ("hungry.vz", "(hungry X0)", false),
    ];
    for (file, want, closed) in cases {
        let doc = load(file);
        let mode = doc.config.mode.unwrap_or_default();
        let g = generalize_sets(&doc.gammas, mode).map_err(|e| format!("{file}: {e}"))?;
        ensure!(g.total, "{file}: not total");
        if closed {
            let expected = parse_formula(want, &doc.signature).map_err(|e| e.to_string())?;
            ensure!(g.closed.len() == 1 && g.closed[0].alpha_eq(&expected), "{file}: {:?}", g.closed);
        } else {
            ensure!(
                g.pattern.len() == 1 && g.pattern[0].to_string() == want,
                "{file}: {}",
                g.pattern[0]
            );
        }
    }
    Ok("talkingWith, likes, higher-order likes/loves, hungry".into())
}

#[test]
fn criterion_anti_unification_goldens() {
    report("anti-unification goldens", au_goldens());
}

// ---- lgg suite ----

fn kernel_term(t: &T) -> Term {
    match t {
        T::App(name, args) if args.is_empty() => Term::constant(name.as_str(), Sort::Fluent),
        T::App(name, args) => {
            let symbol: Arc<FunctionSymbol> =
                FunctionSymbol::user(name.as_str(), vec![Sort::Fluent; args.len()], Sort::Fluent);
            Term::app(&symbol, args.iter().map(kernel_term).collect())
        }
        T::Var(v) => Term::var(v.as_str(), Sort::Fluent),
    }
}

fn oracle_term(t: &Term) -> T {
    match t {
        Term::Var(v) => T::Var(v.name.clone()),
        Term::Const(c) => T::c(&c.name),
        Term::App(Head::Symbol(s), args) => T::App(s.name.clone(), args.iter().map(oracle_term).collect()),
        other => panic!("unexpected term {other}"),
    }
}

fn lgg_suite() -> Verdict {
    let terms = ground_terms(2);
    let mut pairs = 0;
    for s in &terms {
        for t in &terms {
            let g = anti_unify_terms(&[kernel_term(s), kernel_term(t)], Mode::FirstOrder).map_err(|e| e.to_string())?;
            let got = oracle_term(&g.pattern);
            let want = brute_lgg(s, t);
            ensure!(variant(&got, &want), "{s:?} / {t:?}: {got:?} vs {want:?}");
            pairs += 1;
        }
    }
    let mut rng = StdRng::seed_from_u64(0x1966);
    for _ in 0..1000 {
        let inputs = [random_term(&mut rng, 5, FOUR), random_term(&mut rng, 5, FOUR)];
        let terms: Vec<Term> = inputs.iter().map(kernel_term).collect();
        let g = anti_unify_terms(&terms, Mode::FirstOrder).map_err(|e| e.to_string())?;
        for ((theta, x), o) in g.substitutions.iter().zip(&terms).zip(&inputs) {
            ensure!(&theta.apply_term(&g.pattern) == x, "round trip failed for {x}");
            ensure!(omatch(&oracle_term(&g.pattern), o), "pattern does not subsume {x}");
        }
    }
    Ok(format!("{pairs} exhaustive pairs, 1000 random deeper pairs"))
}

#[test]
fn criterion_lgg_property_suite() {
    report("lgg property suite", lgg_suite());
}

// ---- utility identities ----

struct Built {
    doc: ScenarioDoc,
    timeline: Timeline,
    table: NuTable,
    cfg: UtilityConfig,
}

fn build(m: &Model) -> Built {
    let doc = parse_scenario(&m.to_text()).expect("generated text parses");
    let timeline = project(&doc).expect("conflict-free scenario projects");
    let cfg = UtilityConfig {
        horizon: timeline.horizon,
    };
    let table = NuTable::from_doc(&doc);
    Built {
        doc,
        timeline,
        table,
        cfg,
    }
}

fn utility_identities() -> Verdict {
    let lim = Limits {
        agents: 4,
        fluents: 4,
        kinds: 3,
        events: 5,
        horizon: 8,
        nu_density: 8.0,
    };
    let mut rng = StdRng::seed_from_u64(0x2024);
    for round in 0..500 {
        let mut m = Model::random(&mut rng, lim).without_conflicts();
        for v in m.nu.values_mut() {
            *v = rng.gen_range(-5000..=5000) as f64 / 1000.0;
        }
        let b = build(&m);
        let agents = b.doc.agents();
        for (_, f, y, _) in b.table.entries() {
            let sum: f64 = agents.iter().map(|a| nu(a, f, y, &b.table)).sum();
            ensure!((mu(f, y, &b.table, agents) - sum).abs() <= 1e-9, "round {round}: mu({f},{y})");
        }
        for occ in &b.timeline.occurrences {
            let total = mu_bar(&occ.event, occ.time, &b.timeline, &b.table, agents, b.cfg).map_err(|e| e.to_string())?;
            let mut sum = 0.0;
            for a in agents {
                sum += nu_bar(a, &occ.event, occ.time, &b.timeline, &b.table, b.cfg).map_err(|e| e.to_string())?;
            }
            ensure!((total - sum).abs() <= 1e-9, "round {round}: {total} vs {sum}");
        }
    }
    let small = Limits {
        horizon: 6,
        ..lim
    };
    let mut occurrences = 0;
    for round in 0..100 {
        let m = Model::random(&mut rng, small).without_conflicts();
        let b = build(&m);
        for &(t, actor, k) in &m.happens {
            let e = Term::app(
                &builtin("action"),
                vec![b.doc.agents()[actor].clone(), parse_action_type(&b.doc, k)],
            );
            let got = mu_bar(&e, t, &b.timeline, &b.table, b.doc.agents(), b.cfg).map_err(|e| e.to_string())?;
            ensure!(got == m.mu_bar(k, t), "round {round}: {e}@{t}: {got} vs {}", m.mu_bar(k, t));
            occurrences += 1;
        }
    }
    Ok(format!(
        "500 random tables within 1e-9, {occurrences} occurrences exact over 100 small scenarios"
    ))
}

fn parse_action_type(doc: &ScenarioDoc, k: usize) -> Term {
    let symbol = doc.signature.symbol(&format!("k{k}")).expect("declared action type");
    Term::app(symbol, vec![])
}

#[test]
fn criterion_utility_identities() {
    report("utility identities", utility_identities());
}

// ---- event calculus ----

fn holds_of(tl: &Timeline) -> BTreeSet<(String, u64)> {
    tl.holds_set().map(|(f, t)| (f.to_string(), t)).collect()
}

fn ec_oracle() -> Verdict {
    let family = ec_family();
    let mut conflicts = 0;
    for m in &family {
        let doc = parse_scenario(&m.to_text()).map_err(|e| e.to_string())?;
        match (project(&doc), m.conflict_moment()) {
            (Ok(tl), None) => ensure!(holds_of(&tl) == m.holds_set(), "disagreement on\n{}", m.to_text()),
            (Err(_), Some(_)) => conflicts += 1,
            (got, want) => return Err(format!("{got:?} vs conflict {want:?} on\n{}", m.to_text())),
        }
    }
    let lim = Limits {
        agents: 2,
        fluents: 5,
        kinds: 4,
        events: 6,
        horizon: 10,
        nu_density: 0.0,
    };
    let mut rng = StdRng::seed_from_u64(0x1986);
    for _ in 0..1000 {
        let m = Model::random(&mut rng, lim).without_conflicts();
        let tl = project(&parse_scenario(&m.to_text()).unwrap()).map_err(|e| e.to_string())?;
        ensure!(holds_of(&tl) == m.holds_set(), "random disagreement on\n{}", m.to_text());
        for (f, t) in tl.holds_set() {
            for later in t + 1..=tl.horizon {
                let clipped = tl
                    .occurrences
                    .iter()
                    .any(|o| o.time >= t && o.time < later && o.terminated.contains(f));
                ensure!(clipped || tl.holds(f, later), "inertia broken for {f} {t}->{later}");
            }
            let initially = m.initially.iter().any(|&i| support::fluent(i) == f.to_string());
            let caused = tl.occurrences.iter().any(|o| o.time < t && o.initiated.contains(f));
            ensure!(initially || caused, "{f} holds at {t} without a cause");
        }
    }
    Ok(format!(
        "{} exhaustive scenarios ({conflicts} conflicting), 1000 random scenarios",
        family.len()
    ))
}

#[test]
fn criterion_event_calculus_oracle() {
    report("event-calculus oracle equivalence", ec_oracle());
}

// ---- emotions ----

fn world_of(m: &Model) -> World {
    let doc = parse_scenario(&m.to_text()).unwrap();
    pipeline::world(&doc, &PipelineConfig::from_doc(&doc)).unwrap()
}

fn key(r: &EmotionRecord) -> EmotionKey {
    (
        r.hold_time,
        r.event_time,
        r.event.to_string(),
        r.kind.keyword().to_string(),
        r.subject.to_string(),
        r.object.as_ref().map(ToString::to_string),
    )
}

fn evaluations_agree(m: &Model, w: &World) -> Result<(), String> {
    let agents = &w.agents;
    for &(t, actor, k) in &m.happens {
        let e = Term::app(&builtin("action"), vec![agents[actor].clone(), w_action_type(w, t, actor, k)]);
        let alpha = e.args()[1].clone();
        for th in 0..=m.horizon {
            for (i, a) in agents.iter().enumerate() {
                let ok = |r: Result<bool, _>| r.map_err(|e: virtue_core::utility::UtilityError| e.to_string());
                ensure!(ok(eval_joy(a, &e, t, th, w))? == m.joy(i, k, t, th), "joy {a} {e}");
                ensure!(ok(eval_distress(a, &e, t, th, w))? == m.distress(i, k, t, th), "distress {a} {e}");
                ensure!(
                    ok(eval_admiration(a, &agents[actor], &alpha, t, th, w))? == m.admires(i, actor, k, t, th),
                    "admiration {a} {e}"
                );
                for (j, b) in agents.iter().enumerate() {
                    ensure!(
                        ok(eval_happy_for(a, b, &e, t, th, w))? == m.happy_for(i, j, k, t, th),
                        "happy-for {a} {b} {e}"
                    );
                    for (kind, want) in [
                        (EmotionKind::Gloating, m.gloating(i, j, k, t, th)),
                        (EmotionKind::PityFor, m.pity_for(i, j, k, t, th)),
                        (EmotionKind::Resentment, m.resentment(i, j, k, t, th)),
                    ] {
                        ensure!(ok(eval_occ_table_emotion(kind, a, b, &e, t, th, w))? == want, "{kind} {a} {b} {e}");
                    }
                }
            }
        }
    }
    Ok(())
}

/// The action type of the model's `k` action, as the timeline holds it.
fn w_action_type(w: &World, t: u64, actor: usize, k: usize) -> Term {
    let name = support::event(actor, k);
    let occ = w
        .timeline
        .occurrences
        .iter()
        .find(|o| o.time == t && o.event.to_string() == name)
        .expect("occurrence projected");
    occ.event.args()[1].clone()
}

fn redistribute(m: &Model, rng: &mut impl Rng) -> Model {
    let mut out = m.clone();
    out.nu.clear();
    for f in 0..m.fluents {
        for y in 0..=m.horizon {
            let mut rest = m.mu(f, y);
            for a in 0..m.agents - 1 {
                let v = if rng.gen_bool(0.7) { quarter(rng) } else { 0.0 };
                rest -= v;
                if v != 0.0 {
                    out.nu.insert((a, f, y), v);
                }
            }
            if rest != 0.0 {
                out.nu.insert((m.agents - 1, f, y), rest);
            }
        }
    }
    out
}

fn emotion_suite() -> Verdict {
    let lim = Limits {
        agents: 3,
        fluents: 3,
        kinds: 3,
        events: 4,
        horizon: 5,
        nu_density: 5.0,
    };
    let mut rng = StdRng::seed_from_u64(0x0CC);
    let mut records = 0;
    for round in 0..300 {
        let m = Model::random(&mut rng, lim).without_conflicts();
        let w = world_of(&m);
        let sweep = sweep_emotions(&w);
        records += sweep.len();
        let keys: BTreeSet<EmotionKey> = sweep.iter().map(key).collect();
        ensure!(keys == m.emotions(), "round {round}: sweep differs from the definitions");
        evaluations_agree(&m, &w).map_err(|e| format!("round {round}: {e}"))?;

        let joy: BTreeSet<_> = sweep
            .iter()
            .filter(|r| r.kind == EmotionKind::Joy)
            .map(|r| (&r.subject, &r.event, r.event_time, r.hold_time))
            .collect();
        ensure!(
            sweep
                .iter()
                .filter(|r| r.kind == EmotionKind::Distress)
                .all(|r| !joy.contains(&(&r.subject, &r.event, r.event_time, r.hold_time))),
            "round {round}: joy and distress together"
        );

        let silenced = rng.gen_range(0..m.agents);
        let mut quiet = m.clone();
        quiet.theta[silenced] = ThetaM::Never;
        let after: BTreeSet<EmotionKey> = sweep_emotions(&world_of(&quiet)).iter().map(key).collect();
        let name = support::agent(silenced);
        let expected: BTreeSet<EmotionKey> = keys.into_iter().filter(|k| k.4 != name).collect();
        ensure!(after == expected, "round {round}: theta never changed other records");
    }
    ensure!(records > 1000, "too few records ({records}) to be meaningful");

    let mut admirations = 0;
    for round in 0..100 {
        let mut m = Model::random(&mut rng, lim).without_conflicts();
        m.theta = vec![ThetaM::Always; m.agents];
        let admired = |m: &Model| -> BTreeSet<EmotionKey> {
            sweep_emotions(&world_of(m))
                .iter()
                .filter(|r| r.kind == EmotionKind::AdmirationFor)
                .map(key)
                .collect()
        };
        let before = admired(&m);
        admirations += before.len();
        ensure!(before == admired(&redistribute(&m, &mut rng)), "round {round}: admiration moved");
    }
    ensure!(admirations > 0, "no admiration records were exercised");

    // A corpus file for good measure.
    let doc = load("emotions.vz");
    let w = pipeline::world(&doc, &PipelineConfig::from_doc(&doc)).unwrap();
    ensure!(!sweep_emotions(&w).is_empty(), "corpus emotions are empty");
    Ok(format!(
        "300 scenarios ({records} records) against the definitions, 100 redistributions ({admirations} admirations)"
    ))
}

#[test]
fn criterion_emotion_definitions() {
    report("emotion definition suite", emotion_suite());
}

// ---- inference ----

fn inference_suite() -> Verdict {
    let doc = load("obligations.vz");
    let sig = &doc.signature;
    let f = |t: &str| parse_formula(t, sig).unwrap();
    let kb = KnowledgeBase::new(doc.assertions.iter().cloned(), 3).with_horizon(3);
    let s = saturate(&kb).map_err(|e| e.to_string())?;
    ensure!(s.contains(&f("(p)")), "knowledge was not veridical");
    ensure!(s.contains(&f("(q)")), "knowledge closure did not yield q");
    ensure!(
        s.contains(&f("(knows a 1 (intends a 1 (happens (action a (help b)) 2)))")),
        "the obligation did not become a known intention"
    );
    ensure!(saturate(&KnowledgeBase::new(vec![], 3)).unwrap().is_empty(), "empty KB grew");

    let kb_decls = "(declare-agent a) (declare-agent b) (declare-action-type help ()) \
                    (declare-predicate p0 ()) (declare-predicate p1 ()) (declare-predicate p2 ())";
    let kb_sig = parse_scenario(kb_decls).unwrap().signature;
    let mut rng = StdRng::seed_from_u64(0x62);
    for round in 0..200 {
        let n = rng.gen_range(0..6);
        let formulas: Vec<Formula> = (0..n)
            .map(|_| parse_formula(&random_kb_formula(&mut rng, 2), &kb_sig).unwrap())
            .collect();
        let kb = KnowledgeBase::new(formulas, 3).with_horizon(2);
        let once = saturate(&kb).map_err(|e| e.to_string())?;
        ensure!(kb.formulas.is_subset(&once.formulas), "round {round}: not monotone");
        let twice = saturate(&once).map_err(|e| e.to_string())?;
        ensure!(twice.formulas == once.formulas, "round {round}: not idempotent");
    }

    let hsig = parse_scenario(HORN_DECLS).unwrap().signature;
    let universe = clause_universe();
    let parsed: Vec<Formula> = universe.iter().map(|c| parse_formula(&c.text(), &hsig).unwrap()).collect();
    let queries: Vec<(Query, Formula)> = Query::all()
        .into_iter()
        .map(|q| {
            let f = parse_formula(&q.text(), &hsig).unwrap();
            (q, f)
        })
        .collect();
    let n = universe.len();
    let mut kbs = 0;
    let mut check = |idx: &[usize]| -> Result<(), String> {
        let clauses: Vec<Clause> = idx.iter().map(|&i| universe[i].clone()).collect();
        let gamma: Vec<Formula> = idx.iter().map(|&i| parsed[i].clone()).collect();
        for (q, f) in &queries {
            let got = entails0(&gamma, f).map_err(|e| e.to_string())?;
            ensure!(!got || truth_table_entails(&clauses, q), "unsound: {clauses:?} |- {}", q.text());
        }
        kbs += 1;
        Ok(())
    };
    check(&[])?;
    for i in 0..n {
        check(&[i])?;
        for j in i + 1..n {
            check(&[i, j])?;
            for k in j + 1..n {
                check(&[i, j, k])?;
            }
        }
    }
    Ok(format!(
        "veridicality and obligation goldens, 200 random KBs, entails0 sound on {kbs} Horn KBs"
    ))
}

fn random_kb_formula(rng: &mut impl Rng, depth: usize) -> String {
    let agent = if rng.gen_bool(0.5) { "a" } else { "b" };
    let t = rng.gen_range(0..=2);
    let p = rng.gen_range(0..3);
    match if depth == 0 { rng.gen_range(0..3) } else { rng.gen_range(0..8) } {
        0 => format!("(p{p})"),
        1 => format!("(not (p{p}))"),
        2 => format!("(implies (p{p}) (p{}))", rng.gen_range(0..3)),
        3 => format!("(knows {agent} {t} {})", random_kb_formula(rng, depth - 1)),
        4 => format!("(believes {agent} {t} {})", random_kb_formula(rng, depth - 1)),
        5 => format!("(intends {agent} {t} (happens (action {agent} (help)) {}))", rng.gen_range(0..=2)),
        6 => format!("(ought {agent} {t} (p{p}) (happens (action {agent} (help)) {t}))"),
        _ => format!("(believes {agent} {t} (ought {agent} {t} (p{p}) (happens (action {agent} (help)) {t})))"),
    }
}

#[test]
fn criterion_inference_suite() {
    report("inference suite", inference_suite());
}

// ---- thresholds ----

fn nullary_action(name: &str) -> Term {
    Term::app(&FunctionSymbol::user(name, vec![], Sort::ActionType), vec![])
}

fn thresholds() -> Verdict {
    let agent = Term::constant("e", Sort::Agent);
    let learner = Term::constant("l", Sort::Agent);
    let mut rng = StdRng::seed_from_u64(7);
    for n in 1..=5usize {
        let mut holds: Vec<u64> = (0..8).map(|_| rng.gen_range(0..20)).collect();
        holds.shuffle(&mut rng);
        let criteria = TraitCriteria {
            exemplar_threshold: n,
            ..TraitCriteria::default()
        };
        let mut records = Vec::new();
        for (count, &h) in holds.iter().enumerate() {
            records.push(EmotionRecord {
                hold_time: h,
                event_time: 0,
                event: Term::app(&builtin("action"), vec![agent.clone(), nullary_action("help")]),
                kind: EmotionKind::AdmirationFor,
                subject: learner.clone(),
                object: Some(agent.clone()),
            });
            let out = identify_exemplars(&records, &learner, &criteria);
            let mut sorted: Vec<u64> = holds[..=count].to_vec();
            sorted.sort();
            let want = sorted.get(n - 1).copied();
            ensure!(
                out[0].admitted_at == want,
                "n={n} after {} admirations: {:?} vs {want:?}",
                count + 1,
                out[0].admitted_at
            );
        }
    }

    let truthful = nullary_action("beTruthful");
    let history = |k: usize| -> Vec<Situation> {
        (0..10)
            .map(|i| Situation {
                id: format!("s{i}"),
                time: i,
                formulas: vec![],
                alternatives: vec![truthful.clone(), nullary_action("lie")],
                performed: Some(if (i as usize) < k { truthful.clone() } else { nullary_action("lie") }),
            })
            .collect()
    };
    let mut flips = Vec::new();
    for gamma in [0.5, 0.8, 0.9, 1.0] {
        let criteria = TraitCriteria {
            fraction: gamma,
            ..TraitCriteria::default()
        };
        let verdicts: Vec<bool> = (0..=10).map(|k| detect_trait(&history(k), &truthful, &agent, &criteria)).collect();
        let flip = verdicts.iter().position(|&v| v).ok_or(format!("gamma {gamma} never detected"))?;
        ensure!(verdicts[flip..].iter().all(|&v| v), "gamma {gamma}: not monotone");
        ensure!(
            flip as f64 / 10.0 >= gamma && (flip == 0 || (flip - 1) as f64 / 10.0 < gamma),
            "gamma {gamma} flips at {flip}/10"
        );
        flips.push(format!("{gamma}->{flip}/10"));
    }
    Ok(format!("admission at the n-th admiration for n=1..5; flips {}", flips.join(", ")))
}

#[test]
fn criterion_threshold_behavior() {
    report("threshold behavior", thresholds());
}

// ---- determinism ----

fn run_corpus(json: bool) -> Result<Vec<u8>, String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_vz"));
    cmd.arg("run").args(corpus());
    if json {
        cmd.arg("--json");
    }
    let out = cmd.output().map_err(|e| e.to_string())?;
    ensure!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    Ok(out.stdout)
}

fn determinism() -> Verdict {
    let files = corpus().len();
    for json in [false, true] {
        let first = run_corpus(json)?;
        let second = run_corpus(json)?;
        ensure!(!first.is_empty(), "empty report");
        ensure!(first == second, "reports differ (json: {json})");
    }
    Ok(format!("{files} corpus files, text and JSON reports byte-identical"))
}

#[test]
fn criterion_determinism() {
    report("determinism", determinism());
}
