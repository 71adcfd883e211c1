//! The update engine: formulas update files by eliminating possibilities,
//! introducing referents block-wise, or testing the whole state; discourse
//! boxes additionally define file referents, check approximation and
//! identification conditions, and route assertion failures and
//! presupposition failures through separate channels.
//!
//! Conventions:
//!
//! * An existential introduces its referent by *blocks*: one copy of the
//!   state per individual, updated with the body, then unioned.  A referent
//!   can therefore remain open across possibilities.
//! * Modals and negation are whole-state tests.
//! * A referent mentioned in an increment but belonging to an outer file is
//!   resolved *ambiently*: the atom holds in a possibility if it holds for
//!   some value the outer file still allows.  Sub-files do not inherit the
//!   outer domain structurally.
//! * A failed asserted condition at the top level is recorded and evaluation
//!   continues; inside an increment it crashes the file under construction.
//!   A failed presupposed condition aborts the whole discourse with a
//!   diagnosis carrying the path to the condition.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::logic::{check_box, Condition, DiscourseBox, FileBase, Formula, ScopeSet, Term};
use crate::logic::BoxDref;
use crate::model::{Individual, Model, Sort, Value, World};
use crate::state::{Dref, File, FileVar, Possibility};
use crate::{Error, Result};

/// Bindings of file variables to files.  Write-once: a variable denotes the
/// same file for the rest of the discourse.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Env {
    bindings: BTreeMap<FileVar, File>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn bind(&mut self, var: FileVar, file: File) -> Result<()> {
        if self.bindings.contains_key(&var) {
            return Err(Error::Rebind(var.0));
        }
        self.bindings.insert(var, file);
        Ok(())
    }

    pub fn get(&self, var: &FileVar) -> Option<&File> {
        self.bindings.get(var)
    }

    pub fn lookup(&self, var: &FileVar) -> Result<&File> {
        self.bindings
            .get(var)
            .ok_or_else(|| Error::UnboundFileVar(var.0.clone()))
    }

    pub fn vars(&self) -> BTreeSet<FileVar> {
        self.bindings.keys().cloned().collect()
    }

    /// Each bound variable with its file's domain.
    pub fn domains(&self) -> BTreeMap<FileVar, BTreeSet<Dref>> {
        self.bindings
            .iter()
            .map(|(v, f)| (v.clone(), f.domain().clone()))
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FileVar, &File)> {
        self.bindings.iter()
    }
}

/// Why a presupposed condition was undefined or unsupported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresupKind {
    /// The condition is simply not supported by the state.
    Condition,
    /// An identification condition mentioned a referent outside the file's
    /// domain.
    DrefDomain,
    /// An identification condition was applied to the absurd file.
    AbsurdFile,
}

impl fmt::Display for PresupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PresupKind::Condition => "condition",
            PresupKind::DrefDomain => "dref-domain",
            PresupKind::AbsurdFile => "absurd-file",
        };
        write!(f, "{s}")
    }
}

/// Where and why a presupposition failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresupDiag {
    /// Path to the offending condition, e.g. `top[0].p1[4]`.
    pub path: String,
    /// The condition's text.
    pub condition: String,
    pub kind: PresupKind,
}

impl fmt::Display for PresupDiag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.path, self.condition)
    }
}

/// The result of one update: a new state, or an aborted one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Proceed(File),
    PresupFailure(PresupDiag),
}

/// The verdict of a whole discourse or formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    True,
    False { failed: Vec<String> },
    PresupFailure(PresupDiag),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::True => write!(f, "true"),
            Verdict::False { .. } => write!(f, "false"),
            Verdict::PresupFailure(d) => write!(f, "presup-failure: {d}"),
        }
    }
}

/// Everything a discourse run produces.
#[derive(Debug, Clone)]
pub struct DiscourseOutcome {
    pub env: Env,
    pub context: File,
    /// Asserted conditions that turned out not to hold.
    pub failed_assertions: Vec<String>,
    pub presup: Option<PresupDiag>,
}

impl DiscourseOutcome {
    pub fn verdict(&self) -> Verdict {
        if let Some(d) = &self.presup {
            Verdict::PresupFailure(d.clone())
        } else if self.context.is_absurd() || !self.failed_assertions.is_empty() {
            Verdict::False {
                failed: self.failed_assertions.clone(),
            }
        } else {
            Verdict::True
        }
    }
}

/// The values a term can take in one possibility.  A referent outside the
/// possibility's own assignment is looked up in the ambient files, innermost
/// first, and contributes its whole remaining value set.
fn term_candidates(
    model: &Model,
    poss: &Possibility,
    ambient: &[&File],
    term: &Term,
) -> Result<BTreeSet<Value>> {
    match term {
        Term::Const(c) => Ok([Value::Atom(model.constant_value(c)?)].into()),
        Term::Dref(d) => {
            if let Some(v) = poss.assignment.get(d) {
                return Ok([v.clone()].into());
            }
            for f in ambient.iter().rev() {
                if f.domain().contains(d) {
                    return f.values_of(d);
                }
            }
            Err(Error::UnboundDref(d.0.clone()))
        }
    }
}

fn exists_combination<F>(cands: &[BTreeSet<Value>], test: &mut F) -> Result<bool>
where
    F: FnMut(&[Value]) -> Result<bool>,
{
    fn rec<F>(cands: &[BTreeSet<Value>], chosen: &mut Vec<Value>, test: &mut F) -> Result<bool>
    where
        F: FnMut(&[Value]) -> Result<bool>,
    {
        if chosen.len() == cands.len() {
            return test(chosen);
        }
        for v in &cands[chosen.len()] {
            chosen.push(v.clone());
            let hit = rec(cands, chosen, test)?;
            chosen.pop();
            if hit {
                return Ok(true);
            }
        }
        Ok(false)
    }
    rec(cands, &mut Vec::new(), test)
}

fn value_has_sort(model: &Model, v: &Value, sorts: &BTreeSet<Sort>) -> bool {
    match v {
        Value::Atom(ind) => model
            .sources
            .get(ind)
            .is_some_and(|s| sorts.contains(&s.sort)),
        Value::Group(_) => false,
    }
}

fn satisfies_atom(
    model: &Model,
    poss: &Possibility,
    ambient: &[&File],
    pred: &str,
    args: &[Term],
) -> Result<bool> {
    let cands: Vec<BTreeSet<Value>> = args
        .iter()
        .map(|t| term_candidates(model, poss, ambient, t))
        .collect::<Result<_>>()?;
    if let Some(sort) = Sort::parse(pred) {
        if args.len() != 1 {
            return Err(Error::Arity {
                pred: pred.to_string(),
                expected: 1,
                got: args.len(),
            });
        }
        let sorts = [sort].into();
        return Ok(cands[0].iter().any(|v| value_has_sort(model, v, &sorts)));
    }
    exists_combination(&cands, &mut |vals| model.holds(pred, &poss.world, vals))
}

fn upd(
    model: &Model,
    file: &File,
    formula: &Formula,
    ambient: &[&File],
    path: &str,
) -> Result<Outcome> {
    match formula {
        Formula::Atom { pred, args } => Ok(Outcome::Proceed(file.filter(|i| {
            satisfies_atom(model, i, ambient, pred, args)
        })?)),
        Formula::Eq(a, b) | Formula::Neq(a, b) => {
            let negated = matches!(formula, Formula::Neq(..));
            Ok(Outcome::Proceed(file.filter(|i| {
                let ca = term_candidates(model, i, ambient, a)?;
                let cb = term_candidates(model, i, ambient, b)?;
                let hit = ca
                    .iter()
                    .any(|va| cb.iter().any(|vb| (va == vb) != negated));
                Ok(hit)
            })?))
        }
        Formula::And(a, b) => match upd(model, file, a, ambient, path)? {
            Outcome::Proceed(mid) => upd(model, &mid, b, ambient, path),
            fail => Ok(fail),
        },
        Formula::Exists(x, body) => {
            if file.domain().contains(x) {
                return Err(Error::DuplicateDref(x.0.clone()));
            }
            if model.individuals.is_empty() || file.is_absurd() {
                let mut domain = file.domain().clone();
                domain.insert(x.clone());
                return upd(model, &File::absurd(domain), body, ambient, path);
            }
            let mut acc: Option<File> = None;
            for ind in &model.individuals {
                let block = file.extend_with(x, &Value::Atom(ind.clone()))?;
                match upd(model, &block, body, ambient, path)? {
                    Outcome::Proceed(updated) => {
                        acc = Some(match acc {
                            None => updated,
                            Some(sofar) => sofar.union(&updated)?,
                        });
                    }
                    fail => return Ok(fail),
                }
            }
            Ok(Outcome::Proceed(acc.expect("at least one block")))
        }
        Formula::Forall(x, body) => {
            let dual = Formula::Not(Box::new(Formula::Exists(
                x.clone(),
                Box::new(Formula::Not(body.clone())),
            )));
            upd(model, file, &dual, ambient, path)
        }
        Formula::Diamond(body) => match upd(model, file, body, ambient, path)? {
            Outcome::Proceed(updated) => Ok(Outcome::Proceed(if updated.is_absurd() {
                File::absurd(file.domain().clone())
            } else {
                file.clone()
            })),
            fail => Ok(fail),
        },
        Formula::Nec(body) => {
            let dual = Formula::Not(Box::new(Formula::Diamond(Box::new(Formula::Not(
                body.clone(),
            )))));
            upd(model, file, &dual, ambient, path)
        }
        Formula::Not(body) => match upd(model, file, body, ambient, path)? {
            Outcome::Proceed(updated) => Ok(Outcome::Proceed(file.filter(|i| {
                Ok(!updated.possibilities().iter().any(|j| j.extends(i)))
            })?)),
            fail => Ok(fail),
        },
        Formula::Partial(body) => match upd(model, file, body, ambient, path)? {
            Outcome::Proceed(updated) => {
                if updated == *file {
                    Ok(Outcome::Proceed(updated))
                } else {
                    Ok(Outcome::PresupFailure(PresupDiag {
                        path: path.to_string(),
                        condition: body.to_string(),
                        kind: PresupKind::Condition,
                    }))
                }
            }
            fail => Ok(fail),
        },
    }
}

/// Update a file with a formula.  Referents free in the formula must be in
/// the file's domain.
pub fn update(file: &File, formula: &Formula, model: &Model) -> Result<Outcome> {
    upd(model, file, formula, &[], "top")
}

/// Resolve a term that is supposed to name a single attitude source.
fn resolve_source(
    model: &Model,
    term: &Term,
    file: &File,
    ambient: &[&File],
) -> Result<Individual> {
    match term {
        Term::Const(c) => model.constant_value(c),
        Term::Dref(d) => {
            let values = if file.domain().contains(d) {
                file.values_of(d)?
            } else {
                let mut found = None;
                for f in ambient.iter().rev() {
                    if f.domain().contains(d) {
                        found = Some(f.values_of(d)?);
                        break;
                    }
                }
                found.ok_or_else(|| Error::UnboundDref(d.0.clone()))?
            };
            if values.len() != 1 {
                return Err(Error::AmbiguousSource(format!(
                    "{d} has {} possible values",
                    values.len()
                )));
            }
            match values.into_iter().next().unwrap() {
                Value::Atom(ind) => Ok(ind),
                Value::Group(_) => Err(Error::AmbiguousSource(format!(
                    "{d} denotes a group, not a source"
                ))),
            }
        }
    }
}

fn base_worlds(
    model: &Model,
    base: &FileBase,
    file: &File,
    ambient: &[&File],
    env: &Env,
) -> Result<BTreeSet<World>> {
    match base {
        FileBase::Var(q) => Ok(env.lookup(q)?.world_projection()),
        FileBase::Content(t) | FileBase::Belief(t) => {
            let ind = resolve_source(model, t, file, ambient)?;
            Ok(model.content_of(&ind)?.clone())
        }
    }
}

fn base_file(
    model: &Model,
    base: &FileBase,
    file: &File,
    ambient: &[&File],
    env: &Env,
) -> Result<File> {
    match base {
        FileBase::Var(q) => Ok(env.lookup(q)?.clone()),
        _ => Ok(File::from_proposition(&base_worlds(
            model, base, file, ambient, env,
        )?)),
    }
}

enum Status {
    Holds,
    Fails,
    Undefined(PresupKind),
}

fn status_of(env: &Env, dref: &Dref, var: &FileVar, identified: bool) -> Result<Status> {
    let file = env.lookup(var)?;
    if !file.domain().contains(dref) {
        return Ok(Status::Undefined(PresupKind::DrefDomain));
    }
    if file.is_absurd() {
        return Ok(Status::Undefined(PresupKind::AbsurdFile));
    }
    let holds = if identified {
        file.is_identified(dref)?
    } else {
        file.is_unidentified(dref)?
    };
    Ok(if holds { Status::Holds } else { Status::Fails })
}

fn sort_filter(
    model: &Model,
    file: &File,
    ambient: &[&File],
    term: &Term,
    sorts: &BTreeSet<Sort>,
) -> Result<File> {
    file.filter(|i| {
        let cands = term_candidates(model, i, ambient, term)?;
        Ok(cands.iter().any(|v| value_has_sort(model, v, sorts)))
    })
}

/// Probe a presupposed condition: `Ok(())` if the state already supports it.
fn probe_condition(
    model: &Model,
    cond: &Condition,
    file: &File,
    ambient: &[&File],
    env: &Env,
    path: &str,
) -> Result<std::result::Result<(), PresupDiag>> {
    let diag = |condition: String, kind: PresupKind| PresupDiag {
        path: path.to_string(),
        condition,
        kind,
    };
    match cond {
        Condition::Pred(f) => match upd(model, file, f, ambient, path)? {
            Outcome::Proceed(updated) if updated == *file => Ok(Ok(())),
            Outcome::Proceed(_) => Ok(Err(diag(f.to_string(), PresupKind::Condition))),
            Outcome::PresupFailure(d) => Ok(Err(d)),
        },
        Condition::Approx { base, var } => {
            let target = base_worlds(model, base, file, ambient, env)?;
            if env.lookup(var)?.approximates(&target) {
                Ok(Ok(()))
            } else {
                Ok(Err(diag(cond.to_string(), PresupKind::Condition)))
            }
        }
        Condition::Id { dref, file: var } | Condition::Ud { dref, file: var } => {
            let identified = matches!(cond, Condition::Id { .. });
            match status_of(env, dref, var, identified)? {
                Status::Holds => Ok(Ok(())),
                Status::Fails => Ok(Err(diag(cond.to_string(), PresupKind::Condition))),
                Status::Undefined(kind) => Ok(Err(diag(cond.to_string(), kind))),
            }
        }
        Condition::SortIn { term, sorts } => {
            let filtered = sort_filter(model, file, ambient, term, sorts)?;
            if filtered == *file {
                Ok(Ok(()))
            } else {
                Ok(Err(diag(cond.to_string(), PresupKind::Condition)))
            }
        }
        Condition::Partial(inner) => probe_condition(model, inner, file, ambient, env, path),
        _ => Err(Error::Scope(
            "presupposed conditions must be tests".to_string(),
        )),
    }
}

/// Evaluate a box against a file under construction.
#[allow(clippy::too_many_arguments)]
fn eval_box(
    model: &Model,
    bx: &DiscourseBox,
    mut file: File,
    ambient: &[&File],
    env: &mut Env,
    prefix: &str,
    top_level: bool,
    failed: &mut Vec<String>,
) -> Result<Outcome> {
    for bd in &bx.drefs {
        if let BoxDref::Indiv(d) = bd {
            file = file.introduce(d, model)?;
        }
    }
    for (k, cond) in bx.conditions.iter().enumerate() {
        let cond_path = format!("{prefix}[{k}]");
        let note = |holds: bool, text: String, file: &mut File, failed: &mut Vec<String>| {
            if !holds {
                failed.push(text);
                if !top_level {
                    *file = File::absurd(file.domain().clone());
                }
            }
        };
        match cond {
            Condition::FileDef {
                var,
                base,
                increment,
            } => {
                let base_f = base_file(model, base, &file, ambient, env)?;
                let child_ambient: Vec<&File> = ambient
                    .iter()
                    .copied()
                    .chain(std::iter::once(&file))
                    .collect();
                let inner_prefix = format!("{cond_path}.{var}");
                match eval_box(
                    model,
                    increment,
                    base_f,
                    &child_ambient,
                    env,
                    &inner_prefix,
                    false,
                    failed,
                )? {
                    Outcome::Proceed(built) => env.bind(var.clone(), built)?,
                    fail => return Ok(fail),
                }
            }
            Condition::Approx { base, var } => {
                let target = base_worlds(model, base, &file, ambient, env)?;
                let holds = env.lookup(var)?.approximates(&target);
                note(holds, cond.to_string(), &mut file, failed);
            }
            Condition::Pred(f) => match upd(model, &file, f, ambient, &cond_path)? {
                Outcome::Proceed(updated) => file = updated,
                fail => return Ok(fail),
            },
            Condition::Id { dref, file: var } | Condition::Ud { dref, file: var } => {
                let identified = matches!(cond, Condition::Id { .. });
                match status_of(env, dref, var, identified)? {
                    Status::Holds => {}
                    Status::Fails => note(false, cond.to_string(), &mut file, failed),
                    Status::Undefined(kind) => {
                        return Ok(Outcome::PresupFailure(PresupDiag {
                            path: cond_path,
                            condition: cond.to_string(),
                            kind,
                        }))
                    }
                }
            }
            Condition::SortIn { term, sorts } => {
                file = sort_filter(model, &file, ambient, term, sorts)?;
            }
            Condition::Sum { group, var, body } => {
                let mut possibilities = BTreeSet::new();
                for i in file.possibilities() {
                    let single = File::new(file.domain().clone(), [i.clone()].into())?;
                    let mut witnesses = BTreeSet::new();
                    for ind in &model.individuals {
                        let probe = single.extend_with(var, &Value::Atom(ind.clone()))?;
                        match upd(model, &probe, body, ambient, &cond_path)? {
                            Outcome::Proceed(updated) => {
                                if !updated.is_absurd() {
                                    witnesses.insert(ind.clone());
                                }
                            }
                            fail => return Ok(fail),
                        }
                    }
                    if !witnesses.is_empty() {
                        possibilities.insert(i.extended(group, &Value::Group(witnesses)));
                    }
                }
                let mut domain = file.domain().clone();
                domain.insert(group.clone());
                file = File::new(domain, possibilities)?;
            }
            Condition::GenQ { .. } => {
                // Quantificational determiners contribute no referent to the
                // surrounding file; their truth conditions are out of scope.
            }
            Condition::Partial(inner) => {
                if let Err(d) = probe_condition(model, inner, &file, ambient, env, &cond_path)? {
                    return Ok(Outcome::PresupFailure(d));
                }
            }
        }
    }
    Ok(Outcome::Proceed(file))
}

/// Run a discourse box against a context (by default, the file of all the
/// model's worlds).  On a presupposition failure the returned context is the
/// input context, unchanged.
pub fn run_discourse(
    bx: &DiscourseBox,
    model: &Model,
    mut env: Env,
    context: Option<File>,
) -> Result<DiscourseOutcome> {
    let context = context.unwrap_or_else(|| File::from_proposition(&model.worlds));
    let scope = ScopeSet {
        drefs: context.domain().clone(),
        filevars: env.domains(),
    };
    check_box(bx, &scope)?;
    let mut failed = Vec::new();
    match eval_box(
        model,
        bx,
        context.clone(),
        &[],
        &mut env,
        "top",
        true,
        &mut failed,
    )? {
        Outcome::Proceed(updated) => Ok(DiscourseOutcome {
            env,
            context: updated,
            failed_assertions: failed,
            presup: None,
        }),
        Outcome::PresupFailure(d) => Ok(DiscourseOutcome {
            env,
            context,
            failed_assertions: failed,
            presup: Some(d),
        }),
    }
}

/// Verdict of a discourse box run against a fresh context.
pub fn check_sentence(bx: &DiscourseBox, model: &Model) -> Result<Verdict> {
    Ok(run_discourse(bx, model, Env::new(), None)?.verdict())
}

/// Verdict of a formula against a file: true iff the update leaves the state
/// consistent.
pub fn check_formula_truth(file: &File, formula: &Formula, model: &Model) -> Result<Verdict> {
    match update(file, formula, model)? {
        Outcome::Proceed(updated) => Ok(if updated.is_absurd() {
            Verdict::False {
                failed: vec![formula.to_string()],
            }
        } else {
            Verdict::True
        }),
        Outcome::PresupFailure(d) => Ok(Verdict::PresupFailure(d)),
    }
}
