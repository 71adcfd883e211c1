//! Independent brute-force checkers.
//!
//! Two kinds of cross-validation live here, both deliberately sharing as
//! little code as possible with the engine under test:
//!
//! * the identification formulas: `Ex y [box [y = x]]` and
//!   `all y [dia [y != x]]` are evaluated by a literal, exhaustive
//!   re-implementation of their block semantics and compared against the
//!   direct definitions in [`crate::state`] and against the real update
//!   engine;
//! * the readings engine: candidate boxes are re-generated from scratch as
//!   concrete text, parsed, and evaluated, and the surviving set is compared
//!   against [`crate::readings::filter_candidates`].
//!
//! Oracles may be exponential; instances are kept small (at most 4 worlds,
//! 6 individuals, 64 possibilities) and generation is seeded.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use std::collections::BTreeMap;

use crate::eval::{run_discourse, update, Env, Outcome};
use crate::lexicon::{DeterminerClass, Lexicon, Polarity};
use crate::logic::{conjoin, BoxDref, Condition, DiscourseBox, FileBase, Formula, Term};
use crate::model::{Individual, Model, Predicate, Sort, Value, World};
use crate::parser::parse_discourse;
use crate::readings::{filter_candidates, ReadingLine, Scope, Skeleton};
use crate::state::{Dref, File, FileVar, Possibility};
use crate::{Error, Result};

/// A seeded random model/file pair within oracle bounds, with a designated
/// referent to query.
#[derive(Debug, Clone)]
pub struct SmallInstance {
    pub model: Model,
    pub file: File,
    pub dref: Dref,
}

/// Generate one non-absurd instance: at most 4 worlds, 6 individuals, and 64
/// possibilities over a domain of 1–3 referents.  The model carries two
/// predicates `r1`/`r2` with random extensions so generated formulas have
/// something to test.
pub fn gen_instance(rng: &mut ChaCha8Rng) -> SmallInstance {
    let world_count = rng.gen_range(1..=4usize);
    let indiv_count = rng.gen_range(2..=6usize);
    let worlds: Vec<World> = (1..=world_count).map(|k| World(format!("w{k}"))).collect();
    let individuals: Vec<Individual> = (0..indiv_count)
        .map(|k| Individual(format!("a{k}")))
        .collect();
    let mut model = Model {
        worlds: worlds.iter().cloned().collect(),
        individuals: individuals.iter().cloned().collect(),
        ..Model::default()
    };
    for (name, arity) in [("r1", 1usize), ("r2", 2usize)] {
        let mut extensions: BTreeMap<World, BTreeSet<Vec<Value>>> = BTreeMap::new();
        for w in &worlds {
            let mut tuples = BTreeSet::new();
            for _ in 0..rng.gen_range(0..=indiv_count) {
                let tuple: Vec<Value> = (0..arity)
                    .map(|_| {
                        Value::Atom(individuals[rng.gen_range(0..individuals.len())].clone())
                    })
                    .collect();
                tuples.insert(tuple);
            }
            if !tuples.is_empty() {
                extensions.insert(w.clone(), tuples);
            }
        }
        model.predicates.insert(
            name.to_string(),
            Predicate {
                arity,
                group_ok: false,
                extensions,
            },
        );
    }
    let dref_count = rng.gen_range(1..=3usize);
    let domain: BTreeSet<Dref> = (1..=dref_count).map(|k| Dref(format!("x{k}"))).collect();
    let target = rng.gen_range(1..=dref_count);
    let mut possibilities = BTreeSet::new();
    let attempts = rng.gen_range(1..=16usize);
    for _ in 0..attempts {
        let world = worlds[rng.gen_range(0..worlds.len())].clone();
        let assignment = domain
            .iter()
            .map(|d| {
                let ind = individuals[rng.gen_range(0..individuals.len())].clone();
                (d.clone(), Value::Atom(ind))
            })
            .collect();
        possibilities.insert(Possibility { assignment, world });
    }
    let file = File::new(domain, possibilities).expect("generated possibilities are total");
    SmallInstance {
        model,
        file,
        dref: Dref(format!("x{target}")),
    }
}

/// Which formula shapes a semantic generator may produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaKind {
    /// Anything that can only discard possibilities: no random assignment.
    Eliminative,
    /// A whole-state test: rooted at a consistency or necessity modal, so
    /// updating either returns the file unchanged or crashes it.
    Test,
    /// Any shape, including referent-introducing existentials.
    Any,
}

/// Generate a formula that evaluates without errors on the instance: atoms
/// use the instance's predicates, referent terms stay within scope, and
/// quantified referents are always fresh.
pub fn gen_semantic_formula(
    rng: &mut ChaCha8Rng,
    inst: &SmallInstance,
    depth: usize,
    kind: FormulaKind,
) -> Formula {
    let mut bound: Vec<Dref> = inst.file.domain().iter().cloned().collect();
    let mut fresh = 0usize;
    let consts: Vec<String> = inst.model.individuals.iter().map(|i| i.0.clone()).collect();
    match kind {
        FormulaKind::Test => {
            let body = sem_formula(rng, depth, &mut bound, &mut fresh, &consts, true);
            if rng.gen_bool(0.5) {
                Formula::Diamond(Box::new(body))
            } else {
                Formula::Nec(Box::new(body))
            }
        }
        FormulaKind::Eliminative => {
            sem_formula(rng, depth, &mut bound, &mut fresh, &consts, false)
        }
        FormulaKind::Any => sem_formula(rng, depth, &mut bound, &mut fresh, &consts, true),
    }
}

fn fresh_dref(fresh: &mut usize) -> Dref {
    *fresh += 1;
    Dref(format!("y{fresh}"))
}

fn sem_term(rng: &mut ChaCha8Rng, bound: &[Dref], consts: &[String]) -> Term {
    if !bound.is_empty() && rng.gen_bool(0.6) {
        Term::Dref(bound[rng.gen_range(0..bound.len())].clone())
    } else {
        Term::Const(consts[rng.gen_range(0..consts.len())].clone())
    }
}

fn sem_formula(
    rng: &mut ChaCha8Rng,
    depth: usize,
    bound: &mut Vec<Dref>,
    fresh: &mut usize,
    consts: &[String],
    allow_intro: bool,
) -> Formula {
    let leaf_only = depth == 0;
    let choice = if leaf_only {
        rng.gen_range(0..4)
    } else if allow_intro {
        rng.gen_range(0..10)
    } else {
        rng.gen_range(0..9)
    };
    match choice {
        0 => Formula::atom("r1", vec![sem_term(rng, bound, consts)]),
        1 => Formula::atom(
            "r2",
            vec![sem_term(rng, bound, consts), sem_term(rng, bound, consts)],
        ),
        2 => Formula::Eq(sem_term(rng, bound, consts), sem_term(rng, bound, consts)),
        3 => Formula::Neq(sem_term(rng, bound, consts), sem_term(rng, bound, consts)),
        4 => {
            let parts: Vec<Formula> = (0..rng.gen_range(2..=3))
                .map(|_| sem_formula(rng, depth - 1, bound, fresh, consts, allow_intro))
                .collect();
            conjoin(parts).expect("nonempty")
        }
        5 => Formula::Not(Box::new(sem_formula(
            rng,
            depth - 1,
            bound,
            fresh,
            consts,
            allow_intro,
        ))),
        6 => Formula::Diamond(Box::new(sem_formula(
            rng,
            depth - 1,
            bound,
            fresh,
            consts,
            allow_intro,
        ))),
        7 => Formula::Nec(Box::new(sem_formula(
            rng,
            depth - 1,
            bound,
            fresh,
            consts,
            allow_intro,
        ))),
        8 | 9 => {
            let y = fresh_dref(fresh);
            bound.push(y.clone());
            let body = sem_formula(rng, depth - 1, bound, fresh, consts, allow_intro);
            bound.pop();
            if choice == 8 {
                Formula::Forall(y, Box::new(body))
            } else {
                Formula::Exists(y, Box::new(body))
            }
        }
        _ => unreachable!(),
    }
}

/// Generate an arbitrary well-formed formula for display/parse round trips.
/// Shapes are unconstrained by any model; only the syntax matters.
pub fn gen_roundtrip_formula(rng: &mut ChaCha8Rng, depth: usize) -> Formula {
    let choice = if depth == 0 {
        rng.gen_range(0..4)
    } else {
        rng.gen_range(0..11)
    };
    match choice {
        0 => Formula::atom("r1", vec![rt_term(rng)]),
        1 => Formula::atom("r2", vec![rt_term(rng), rt_term(rng)]),
        2 => Formula::Eq(rt_term(rng), rt_term(rng)),
        3 => Formula::Neq(rt_term(rng), rt_term(rng)),
        4 => {
            let n = rng.gen_range(2..=3);
            let mut parts = Vec::new();
            for k in 0..n {
                // `&` chains display flat, so a conjunct that is itself a
                // conjunction only reparses to the same tree in the final
                // position, where right-nesting puts it anyway.
                loop {
                    let part = gen_roundtrip_formula(rng, depth - 1);
                    if k + 1 == n || !matches!(part, Formula::And(..)) {
                        parts.push(part);
                        break;
                    }
                }
            }
            conjoin(parts).expect("nonempty")
        }
        5 => Formula::Not(Box::new(gen_roundtrip_formula(rng, depth - 1))),
        6 => Formula::Diamond(Box::new(gen_roundtrip_formula(rng, depth - 1))),
        7 => Formula::Nec(Box::new(gen_roundtrip_formula(rng, depth - 1))),
        8 => Formula::Partial(Box::new(gen_roundtrip_formula(rng, depth - 1))),
        9 => Formula::Forall(rt_dref(rng), Box::new(gen_roundtrip_formula(rng, depth - 1))),
        10 => Formula::Exists(rt_dref(rng), Box::new(gen_roundtrip_formula(rng, depth - 1))),
        _ => unreachable!(),
    }
}

fn rt_term(rng: &mut ChaCha8Rng) -> Term {
    if rng.gen_bool(0.5) {
        Term::Dref(rt_dref(rng))
    } else {
        const CONSTS: [&str; 3] = ["a1", "b2", "carol"];
        Term::Const(CONSTS[rng.gen_range(0..CONSTS.len())].to_string())
    }
}

fn rt_dref(rng: &mut ChaCha8Rng) -> Dref {
    const DREFS: [&str; 4] = ["x1", "x2", "z1", "X3"];
    Dref(DREFS[rng.gen_range(0..DREFS.len())].to_string())
}

fn rt_filevar(rng: &mut ChaCha8Rng) -> FileVar {
    const VARS: [&str; 3] = ["p", "p2", "q1"];
    FileVar(VARS[rng.gen_range(0..VARS.len())].to_string())
}

fn rt_base(rng: &mut ChaCha8Rng) -> FileBase {
    match rng.gen_range(0..3) {
        0 => FileBase::Var(rt_filevar(rng)),
        1 => FileBase::Content(rt_term(rng)),
        _ => FileBase::Belief(rt_term(rng)),
    }
}

fn rt_sorts(rng: &mut ChaCha8Rng) -> BTreeSet<Sort> {
    let mut sorts = BTreeSet::new();
    sorts.insert(Sort::ALL[rng.gen_range(0..Sort::ALL.len())]);
    while rng.gen_bool(0.4) {
        sorts.insert(Sort::ALL[rng.gen_range(0..Sort::ALL.len())]);
    }
    sorts
}

fn leftmost_conjunct(f: &Formula) -> &Formula {
    match f {
        Formula::And(a, _) => leftmost_conjunct(a),
        other => other,
    }
}

fn rt_condition(rng: &mut ChaCha8Rng, depth: usize) -> Condition {
    let choice = if depth == 0 {
        rng.gen_range(0..6)
    } else {
        rng.gen_range(0..9)
    };
    match choice {
        0 => {
            // A condition-level `presup` prefix and a formula-level one
            // print identically, so a bare formula condition must not start
            // with the presupposition operator — not even as the first
            // conjunct of a flat `&` chain.
            let formula = loop {
                let f = gen_roundtrip_formula(rng, depth.min(2));
                if !matches!(leftmost_conjunct(&f), Formula::Partial(_)) {
                    break f;
                }
            };
            Condition::Pred(formula)
        }
        1 => Condition::Id {
            dref: rt_dref(rng),
            file: rt_filevar(rng),
        },
        2 => Condition::Ud {
            dref: rt_dref(rng),
            file: rt_filevar(rng),
        },
        3 => Condition::Approx {
            base: rt_base(rng),
            var: rt_filevar(rng),
        },
        4 => Condition::SortIn {
            term: rt_term(rng),
            sorts: rt_sorts(rng),
        },
        5 => Condition::Sum {
            group: Dref("X4".into()),
            var: Dref("z2".into()),
            body: Box::new(gen_roundtrip_formula(rng, depth.min(1))),
        },
        6 => Condition::GenQ {
            det: ["most", "almost-every"][rng.gen_range(0..2)].to_string(),
            var: rt_dref(rng),
            restrictor: Box::new(gen_roundtrip_formula(rng, depth - 1)),
            spine: Box::new(gen_roundtrip_formula(rng, depth - 1)),
        },
        7 => Condition::Partial(Box::new(rt_condition(rng, depth - 1))),
        8 => Condition::FileDef {
            var: rt_filevar(rng),
            base: rt_base(rng),
            increment: gen_roundtrip_box(rng, depth - 1),
        },
        _ => unreachable!(),
    }
}

/// Generate an arbitrary discourse box for display/parse round trips.
pub fn gen_roundtrip_box(rng: &mut ChaCha8Rng, depth: usize) -> DiscourseBox {
    let mut drefs = Vec::new();
    if rng.gen_bool(0.6) {
        drefs.push(BoxDref::Indiv(Dref("x9".into())));
    }
    if rng.gen_bool(0.4) {
        drefs.push(BoxDref::File(FileVar("q9".into())));
    }
    let conditions: Vec<Condition> = (0..rng.gen_range(0..=3))
        .map(|_| rt_condition(rng, depth))
        .collect();
    DiscourseBox { drefs, conditions }
}

/// Evaluate `Ex y [box [y = x]]` literally: for each candidate value of `y`,
/// extend every possibility and apply the necessity test; the existential
/// block survives iff the test kept every extended possibility.
pub fn id_formula_oracle(model: &Model, file: &File, dref: &Dref) -> bool {
    model.universe().iter().any(|candidate| {
        let y = Value::Atom(candidate.clone());
        // box [y = x] is a whole-state test on the y-extended block: it
        // keeps the block iff no possibility disagrees.
        file.possibilities()
            .iter()
            .all(|p| p.assignment.get(dref) == Some(&y))
    })
}

/// Evaluate `all y [dia [y != x]]` literally via its negative expansion:
/// every candidate block must pass the possibility test that some extended
/// possibility differs from the candidate.
pub fn ud_formula_oracle(model: &Model, file: &File, dref: &Dref) -> bool {
    model.universe().iter().all(|candidate| {
        let y = Value::Atom(candidate.clone());
        file.possibilities()
            .iter()
            .any(|p| p.assignment.get(dref) != Some(&y))
    })
}

/// Agreement counts between the direct definitions, the formula oracles, and
/// the real update engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquivalenceStats {
    pub cases: usize,
    pub id_agreements: usize,
    pub ud_agreements: usize,
}

impl EquivalenceStats {
    pub fn all_agree(&self) -> bool {
        self.id_agreements == self.cases && self.ud_agreements == self.cases
    }
}

fn truth_of(file: &File, formula: &Formula, model: &Model) -> Result<bool> {
    match update(file, formula, model)? {
        Outcome::Proceed(updated) => Ok(!updated.is_absurd()),
        Outcome::PresupFailure(d) => Err(Error::Input(format!(
            "unexpected presupposition failure in oracle formula: {d}"
        ))),
    }
}

/// Run `cases` seeded instances and count agreements on the identified and
/// unidentified formulas.  Each case compares three answers: the direct
/// definition, the exhaustive formula oracle, and the update engine run on
/// the actual formula syntax tree.
pub fn equivalence_stats(seed: u64, cases: usize) -> Result<EquivalenceStats> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y = Dref("y1".to_string());
    let mut id_agreements = 0;
    let mut ud_agreements = 0;
    for _ in 0..cases {
        let inst = gen_instance(&mut rng);
        let x = &inst.dref;
        let id_formula = Formula::Exists(
            y.clone(),
            Box::new(Formula::Nec(Box::new(Formula::Eq(
                Term::Dref(y.clone()),
                Term::Dref(x.clone()),
            )))),
        );
        let ud_formula = Formula::Forall(
            y.clone(),
            Box::new(Formula::Diamond(Box::new(Formula::Neq(
                Term::Dref(y.clone()),
                Term::Dref(x.clone()),
            )))),
        );
        let direct_id = inst.file.is_identified(x)?;
        let direct_ud = inst.file.is_unidentified(x)?;
        let oracle_id = id_formula_oracle(&inst.model, &inst.file, x);
        let oracle_ud = ud_formula_oracle(&inst.model, &inst.file, x);
        let engine_id = truth_of(&inst.file, &id_formula, &inst.model)?;
        let engine_ud = truth_of(&inst.file, &ud_formula, &inst.model)?;
        if direct_id == oracle_id && oracle_id == engine_id {
            id_agreements += 1;
        }
        if direct_ud == oracle_ud && oracle_ud == engine_ud {
            ud_agreements += 1;
        }
    }
    Ok(EquivalenceStats {
        cases,
        id_agreements,
        ud_agreements,
    })
}

/// One candidate outcome as the oracle sees it: the candidate key and either
/// survival (`None`) or the failing condition's text.
pub type OracleOutcome = (String, Option<String>);

/// Re-derive every candidate's fate by writing its discourse box as concrete
/// text, parsing it, and evaluating it.  No construction code is shared with
/// the readings module.
pub fn exhaustive_reading_oracle(
    sk: &Skeleton,
    model: &Model,
    lexicon: &Lexicon,
) -> Result<Vec<OracleOutcome>> {
    sk.validate(model, lexicon)?;
    let det = lexicon.determiner(&sk.indef.det)?;
    let quant = det.class == DeterminerClass::Quantificational;
    let x1 = &sk.indef.dref.0;
    let restr = &sk.indef.restrictor;
    let spine = sk.spine.to_string().replace("HOLE", x1);

    // The stored conditions as text, given resolved antecedents.
    let stored_text = |y: &str, y_sort: Sort, q: &str| -> Result<String> {
        let stored = if let Some(p) = &sk.participle {
            let entry = lexicon.participle(p)?;
            Some((entry.polarity, entry.sorts.clone()))
        } else {
            det.idiom_sorts
                .as_ref()
                .map(|sorts| (Polarity::Id, sorts.clone()))
        };
        let Some((polarity, sorts)) = stored else {
            return Ok(String::new());
        };
        let mut out = String::new();
        if sorts.len() == 1 {
            let sort = sorts.iter().next().expect("nonempty");
            out.push_str(&format!(", presup [{sort}({y})]"));
        } else if !sorts.is_empty() {
            let names: Vec<String> = sorts.iter().map(|s| s.to_string()).collect();
            out.push_str(&format!(", presup sort({y}) in {{{}}}", names.join(" ")));
        }
        let base = base_text(y, y_sort);
        out.push_str(&format!(", presup {base} ~= {q}"));
        out.push_str(&format!(", {polarity}({x1}, {q})"));
        Ok(out)
    };

    let top_sort = model.sort_of(&Individual(sk.source.clone()))?;
    let top_base = base_text(&sk.source, top_sort);
    let mut outcomes = Vec::new();
    let mut candidates: Vec<(Scope, String, String, Sort, String)> = Vec::new();
    let scopes: Vec<Scope> = if sk.outer.is_some() {
        vec![Scope::Widest, Scope::Wide]
    } else if sk.embedded.is_some() {
        vec![Scope::Wide, Scope::Narrow]
    } else {
        vec![Scope::Wide]
    };
    for scope in scopes {
        candidates.push((
            scope,
            "top".to_string(),
            sk.source.clone(),
            top_sort,
            "p1".to_string(),
        ));
        if let Some(e) = &sk.embedded {
            let e_sort = model.sort_of(&Individual(e.name.clone()))?;
            candidates.push((scope, "p1".to_string(), e.name.clone(), e_sort, "p2".to_string()));
        }
    }
    candidates.sort_by(|a, b| (a.0, &a.2, &a.4).cmp(&(b.0, &b.2, &b.4)));

    for (scope, landing, y_name, y_sort, q) in candidates {
        let y_term = if q == "p2" {
            sk.embedded.as_ref().expect("p2 implies embedded").dref.0.clone()
        } else {
            y_name.clone()
        };
        let stored = stored_text(&y_term, y_sort, &q)?;
        let (stored_top, stored_inner) = if landing == "top" {
            (stored.as_str(), "")
        } else {
            ("", stored.as_str())
        };
        let inner = if let Some(e) = &sk.embedded {
            let e_sort = model.sort_of(&Individual(e.name.clone()))?;
            let x2 = &e.dref.0;
            let e_base = base_text(x2, e_sort);
            let intro = e.intro.to_string().replace(" & ", ", ");
            match (scope, quant) {
                (Scope::Wide, false) => format!(
                    "[{x1} {x2} p2 | {restr}({x1}), {intro}, \
                     p2 : {e_base} + [ | {spine}], {e_base} ~= p2{stored_inner}]"
                ),
                (Scope::Narrow, false) => format!(
                    "[{x2} p2 | {intro}, \
                     p2 : {e_base} + [{x1} | {spine}, {restr}({x1})], \
                     {e_base} ~= p2{stored_inner}]"
                ),
                (Scope::Wide, true) => format!(
                    "[{x2} p2 | quant {det} {x1} [{restr}({x1})] [{spine}], {intro}, \
                     p2 : {e_base} + [ | ], {e_base} ~= p2{stored_inner}]",
                    det = det.name
                ),
                (Scope::Narrow, true) => format!(
                    "[{x2} p2 | {intro}, \
                     p2 : {e_base} + [ | quant {det} {x1} [{restr}({x1})] [{spine}]], \
                     {e_base} ~= p2{stored_inner}]",
                    det = det.name
                ),
                (Scope::Widest, _) => unreachable!("widest needs an outer quantifier"),
            }
        } else if let Some(o) = &sk.outer {
            let z = &o.var.0;
            let orestr = &o.restrictor;
            match scope {
                Scope::Widest => format!(
                    "[{x1} | {restr}({x1}), not [Ex {z} [{orestr}({z}) & {spine}]]{stored_inner}]"
                ),
                Scope::Wide => format!(
                    "[ | not [Ex {z} [{orestr}({z}) & \
                     Ex {x1} [{restr}({x1}) & {spine}]]]{stored_inner}]"
                ),
                Scope::Narrow => unreachable!("narrow needs an embedded source"),
            }
        } else if quant {
            format!("[ | quant {det} {x1} [{restr}({x1})] [{spine}]{stored_inner}]", det = det.name)
        } else {
            format!("[{x1} | {restr}({x1}), {spine}{stored_inner}]")
        };
        let text = format!("[p1 | p1 : {top_base} + {inner}, {top_base} ~= p1{stored_top}]");
        let bx = parse_discourse(&text)?;
        let run = run_discourse(&bx, model, Env::new(), None)?;
        let key = format!("{scope}/{landing}/{y_name},{q}");
        outcomes.push((key, run.presup.map(|d| d.condition)));
    }
    Ok(outcomes)
}

fn base_text(y: &str, sort: Sort) -> String {
    match sort {
        Sort::BeliefHolder => format!("belief({y})"),
        Sort::Communication | Sort::Plan => format!("content({y})"),
    }
}

/// The readings engine's answer in the oracle's outcome shape.
pub fn engine_outcomes(
    sk: &Skeleton,
    model: &Model,
    lexicon: &Lexicon,
) -> Result<Vec<OracleOutcome>> {
    let report = filter_candidates(sk, model, lexicon)?;
    Ok(report
        .lines
        .iter()
        .map(|line: &ReadingLine| {
            let key = line.candidate.to_string();
            let diag = match &line.outcome {
                crate::readings::CandidateOutcome::Survives { .. } => None,
                crate::readings::CandidateOutcome::Filtered(d) => Some(d.condition.clone()),
            };
            (key, diag)
        })
        .collect())
}

/// Generate a coherent random scenario: a small model plus a skeleton that
/// validates against it.
pub fn gen_skeleton_instance(rng: &mut ChaCha8Rng, lexicon: &Lexicon) -> (Model, Skeleton) {
    let world_count = rng.gen_range(2..=4usize);
    let team_count = rng.gen_range(2..=3usize);
    let worlds: Vec<String> = (1..=world_count).map(|k| format!("v{k}")).collect();
    let teams: Vec<String> = (1..=team_count).map(|k| format!("t{k}")).collect();
    let with_embedded = rng.gen_bool(0.5);
    let with_outer = !with_embedded && rng.gen_bool(0.3);

    let sorts = ["communication", "plan", "belief-holder"];
    let top_sort = sorts[rng.gen_range(0..sorts.len())];
    let emb_sort = sorts[rng.gen_range(0..2)];
    let mut subset = |at_least_one: bool| -> Vec<String> {
        loop {
            let picked: Vec<String> = worlds
                .iter()
                .filter(|_| rng.gen_bool(0.6))
                .cloned()
                .collect();
            if !picked.is_empty() || !at_least_one {
                return picked;
            }
        }
    };
    let top_content = subset(true);
    let emb_content = subset(true);

    let mut text = String::new();
    text.push_str(&format!("worlds {};\n", worlds.join(" ")));
    let mut individuals = vec!["solange".to_string(), "src_a".to_string()];
    if with_embedded {
        individuals.push("src_b".to_string());
    }
    if with_outer {
        individuals.push("rival".to_string());
    }
    individuals.extend(teams.iter().cloned());
    text.push_str(&format!("individuals {};\n", individuals.join(" ")));
    text.push_str("const s = solange;\n");

    // Restrictor and spine extensions vary by world, but t1 always
    // qualifies and solange always signs with it: content files never
    // collapse before their conditions can resolve their antecedents.
    let mut restr_rows = Vec::new();
    let mut spine_rows = Vec::new();
    for w in &worlds {
        let mut names = vec!["t1".to_string()];
        names.extend(teams.iter().skip(1).filter(|_| rng.gen_bool(0.6)).cloned());
        restr_rows.push(format!("{w} {{{}}}", names.join(" ")));
        let mut tuples = vec!["(solange t1)".to_string()];
        for t in teams.iter().skip(1) {
            if rng.gen_bool(0.5) {
                tuples.push(format!("(solange {t})"));
            }
        }
        if with_outer {
            for t in &teams {
                if rng.gen_bool(0.4) {
                    tuples.push(format!("(rival {t})"));
                }
            }
        }
        spine_rows.push(format!("{w} {{{}}}", tuples.join(" ")));
    }
    if !restr_rows.is_empty() {
        text.push_str(&format!("pred club/1 : {};\n", restr_rows.join(", ")));
    } else {
        text.push_str("pred club/1;\n");
    }
    if !spine_rows.is_empty() {
        text.push_str(&format!("pred sign-with/2 : {};\n", spine_rows.join(", ")));
    } else {
        text.push_str("pred sign-with/2;\n");
    }
    if with_outer {
        let all: Vec<String> = worlds
            .iter()
            .map(|w| format!("{w} {{solange rival}}"))
            .collect();
        text.push_str(&format!("pred person/1 : {};\n", all.join(", ")));
    }
    if with_embedded {
        let all: Vec<String> = worlds.iter().map(|w| format!("{w} {{src_b}}")).collect();
        text.push_str(&format!("pred document/1 : {};\n", all.join(", ")));
    }
    text.push_str(&format!(
        "source src_a : {top_sort} content {{{}}};\n",
        top_content.join(" ")
    ));
    if with_embedded {
        text.push_str(&format!(
            "source src_b : {emb_sort} content {{{}}};\n",
            emb_content.join(" ")
        ));
    }
    let model = Model::parse(&text).expect("generated model parses");

    let dets: Vec<&str> = if with_outer {
        vec!["a", "two", "a_certain"]
    } else {
        vec!["a", "two", "most", "almost-every", "a_certain"]
    };
    let det = dets[rng.gen_range(0..dets.len())];
    let participle = if det == "a_certain" {
        None
    } else {
        let ps = ["undisclosed", "undetermined", "unspecified", "specified"];
        rng.gen_bool(0.85)
            .then(|| ps[rng.gen_range(0..ps.len())].to_string())
    };
    let mut sk_text = String::from("skeleton {\n  source src_a;\n");
    if with_embedded {
        sk_text.push_str("  embedded src_b x2 [document(x2)];\n");
    }
    if with_outer {
        sk_text.push_str("  spine [sign-with(z, HOLE)];\n");
    } else {
        sk_text.push_str("  spine [sign-with(s, HOLE)];\n");
    }
    sk_text.push_str(&format!("  indef {det} club x1;\n"));
    if let Some(p) = &participle {
        sk_text.push_str(&format!("  participle {p};\n"));
    }
    if with_outer {
        sk_text.push_str("  outer nobody person z;\n");
    }
    sk_text.push('}');
    let sk = Skeleton::parse(&sk_text).expect("generated skeleton parses");
    sk.validate(&model, lexicon)
        .expect("generated skeleton validates");
    (model, sk)
}

/// Compare the oracle's re-derivation with the readings engine on `count`
/// seeded scenarios; returns the number that agree exactly.
pub fn reading_agreement(seed: u64, count: usize, lexicon: &Lexicon) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut agreements = 0;
    for _ in 0..count {
        let (model, sk) = gen_skeleton_instance(&mut rng, lexicon);
        let expected = exhaustive_reading_oracle(&sk, &model, lexicon)?;
        let got = engine_outcomes(&sk, &model, lexicon)?;
        if expected == got {
            agreements += 1;
        }
    }
    Ok(agreements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn memo_instance(two_hotels: bool) -> SmallInstance {
        let model = Model {
            worlds: BTreeSet::from([World("w1".into()), World("w2".into())]),
            individuals: BTreeSet::from([
                Individual("colbert".into()),
                Individual("days".into()),
            ]),
            ..Model::default()
        };
        let x3 = Dref("x3".into());
        let mut possibilities = BTreeSet::new();
        if two_hotels {
            possibilities.insert(Possibility {
                assignment: BTreeMap::from([(
                    x3.clone(),
                    Value::Atom(Individual("colbert".into())),
                )]),
                world: World("w1".into()),
            });
        }
        possibilities.insert(Possibility {
            assignment: BTreeMap::from([(
                x3.clone(),
                Value::Atom(Individual("days".into())),
            )]),
            world: World("w2".into()),
        });
        let file = File::new(BTreeSet::from([x3.clone()]), possibilities).unwrap();
        SmallInstance {
            model,
            file,
            dref: x3,
        }
    }

    #[test]
    fn formula_oracles_match_the_memo_judgments() {
        let open = memo_instance(true);
        assert!(ud_formula_oracle(&open.model, &open.file, &open.dref));
        assert!(!id_formula_oracle(&open.model, &open.file, &open.dref));
        let settled = memo_instance(false);
        assert!(id_formula_oracle(&settled.model, &settled.file, &settled.dref));
        assert!(!ud_formula_oracle(&settled.model, &settled.file, &settled.dref));
    }

    #[test]
    fn sampled_equivalence_holds() {
        let stats = equivalence_stats(7, 120).unwrap();
        assert_eq!(stats.cases, 120);
        assert!(stats.all_agree(), "{stats:?}");
    }

    #[test]
    fn generated_instances_respect_the_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let inst = gen_instance(&mut rng);
            assert!(inst.model.worlds.len() <= 4);
            assert!(inst.model.individuals.len() <= 6);
            assert!(!inst.file.is_absurd());
            assert!(inst.file.possibilities().len() <= 64);
            assert!(inst.file.domain().contains(&inst.dref));
        }
    }

    const TEAM_MODEL: &str = "
        worlds w1 w2 w3 w4;
        individuals solange press_release agreement milan roma sparta;
        const s = solange;
        pred team-in-italy/1 : w1 {milan roma sparta}, w2 {milan roma sparta},
                               w3 {milan roma sparta}, w4 {milan roma};
        pred agreement/1 : w1 {agreement}, w2 {agreement};
        pred make/2 : w1 {(solange agreement)}, w2 {(solange agreement)};
        pred play-for/2 : w3 {(solange milan)}, w4 {(solange roma) (solange sparta)};
        source press_release : communication content {w1 w2};
        source agreement : plan content {w3 w4};
    ";

    fn team_skeleton(det: &str, participle: &str) -> Skeleton {
        Skeleton::parse(&format!(
            "skeleton {{
                source press_release;
                embedded agreement x2 [agreement(x2) & make(s, x2)];
                spine [play-for(s, HOLE)];
                indef {det} team-in-italy x1;
                participle {participle};
             }}"
        ))
        .unwrap()
    }

    #[test]
    fn reading_oracle_agrees_on_the_scope_table() {
        let lex = Lexicon::shipped();
        let model = Model::parse(TEAM_MODEL).unwrap();
        for participle in ["undisclosed", "undetermined", "unspecified", "specified"] {
            let sk = team_skeleton("a", participle);
            let expected = exhaustive_reading_oracle(&sk, &model, &lex).unwrap();
            let got = engine_outcomes(&sk, &model, &lex).unwrap();
            assert_eq!(expected, got, "{participle}");
        }
        let sk = team_skeleton("most", "unspecified");
        let expected = exhaustive_reading_oracle(&sk, &model, &lex).unwrap();
        assert!(expected.iter().all(|(_, diag)| diag.is_some()));
        assert_eq!(expected, engine_outcomes(&sk, &model, &lex).unwrap());
    }

    #[test]
    fn sampled_reading_agreement_holds() {
        let lex = Lexicon::shipped();
        assert_eq!(reading_agreement(21, 8, &lex).unwrap(), 8);
    }
}
