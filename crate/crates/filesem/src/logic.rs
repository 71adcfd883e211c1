//! Syntax trees for the formula language and for discourse boxes, with
//! static scope checking.
//!
//! Formulas are the dynamic core: atoms, (in)equality, conjunction,
//! quantifiers, modals, negation, and a presupposition operator.  Discourse
//! boxes add file-level conditions: defining a file referent from a source's
//! content plus an increment, asserting that a source's content approximates
//! a file, identification status of a referent within a file, sort
//! restrictions, summation, and generalized quantifiers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::model::Sort;
use crate::state::{Dref, FileVar};
use crate::{Error, Result};

/// A term: a discourse referent or a constant interpreted by the model.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Term {
    Dref(Dref),
    Const(String),
}

impl Term {
    pub fn render(&self) -> String {
        match self {
            Term::Dref(d) => d.0.clone(),
            Term::Const(c) => c.clone(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// A formula of the dynamic language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Atom { pred: String, args: Vec<Term> },
    Eq(Term, Term),
    Neq(Term, Term),
    And(Box<Formula>, Box<Formula>),
    /// Random assignment plus scope: introduces the referent.
    Exists(Dref, Box<Formula>),
    /// Universal dual of `Exists`; a test.
    Forall(Dref, Box<Formula>),
    /// Consistency test: keeps the state iff the update would not crash it.
    Diamond(Box<Formula>),
    /// Necessity test: keeps the state iff every possibility survives.
    Nec(Box<Formula>),
    Not(Box<Formula>),
    /// Presupposition: defined only if the state already supports the body.
    Partial(Box<Formula>),
}

impl Formula {
    pub fn atom(pred: &str, args: Vec<Term>) -> Formula {
        Formula::Atom {
            pred: pred.to_string(),
            args,
        }
    }

    /// Whether updating with this formula can only discard possibilities,
    /// never extend the domain.
    pub fn is_eliminative(&self) -> bool {
        match self {
            Formula::Atom { .. } | Formula::Eq(..) | Formula::Neq(..) => true,
            Formula::And(a, b) => a.is_eliminative() && b.is_eliminative(),
            Formula::Exists(..) => false,
            Formula::Forall(..)
            | Formula::Diamond(_)
            | Formula::Nec(_)
            | Formula::Not(_)
            | Formula::Partial(_) => true,
        }
    }

    /// The referents this formula introduces into the input state: the
    /// existential spine, reading conjunction left to right.
    pub fn exports(&self) -> Vec<Dref> {
        match self {
            Formula::Exists(x, body) => {
                let mut out = vec![x.clone()];
                out.extend(body.exports());
                out
            }
            Formula::And(a, b) => {
                let mut out = a.exports();
                out.extend(b.exports());
                out
            }
            _ => Vec::new(),
        }
    }

    fn render(&self, sym: bool) -> String {
        let (ex, all, dia, nec, not, presup, and, neq) = if sym {
            ("∃", "∀", "◇", "□", "¬", "∂", " ∧ ", " ≠ ")
        } else {
            ("Ex", "all", "dia", "box", "not", "presup", " & ", " != ")
        };
        match self {
            Formula::Atom { pred, args } => {
                if args.is_empty() {
                    pred.clone()
                } else {
                    let parts: Vec<String> = args.iter().map(|t| t.render()).collect();
                    format!("{pred}({})", parts.join(", "))
                }
            }
            Formula::Eq(a, b) => format!("{} = {}", a.render(), b.render()),
            Formula::Neq(a, b) => format!("{}{neq}{}", a.render(), b.render()),
            Formula::And(a, b) => format!("{}{and}{}", a.render(sym), b.render(sym)),
            Formula::Exists(x, body) => format!("{ex} {x} [{}]", body.render(sym)),
            Formula::Forall(x, body) => format!("{all} {x} [{}]", body.render(sym)),
            Formula::Diamond(body) => format!("{dia} [{}]", body.render(sym)),
            Formula::Nec(body) => format!("{nec} [{}]", body.render(sym)),
            Formula::Not(body) => format!("{not} [{}]", body.render(sym)),
            Formula::Partial(body) => format!("{presup} [{}]", body.render(sym)),
        }
    }

    /// Unicode rendering, for diagnostics.
    pub fn symbolic(&self) -> String {
        self.render(true)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(false))
    }
}

/// Fold formulas into one right-nested conjunction.
pub fn conjoin(mut parts: Vec<Formula>) -> Option<Formula> {
    let last = parts.pop()?;
    Some(
        parts
            .into_iter()
            .rev()
            .fold(last, |acc, f| Formula::And(Box::new(f), Box::new(acc))),
    )
}

/// What a file definition grows from: another file, or the content carried
/// by a source term (its communicated/settled content, or a belief state).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FileBase {
    Var(FileVar),
    Content(Term),
    Belief(Term),
}

impl FileBase {
    fn render(&self) -> String {
        match self {
            FileBase::Var(v) => v.0.clone(),
            FileBase::Content(t) => format!("content({t})"),
            FileBase::Belief(t) => format!("belief({t})"),
        }
    }
}

impl fmt::Display for FileBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// One condition inside a discourse box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    /// `p : base + [increment]` — the file referent `p` is the base grown by
    /// the increment.
    FileDef {
        var: FileVar,
        base: FileBase,
        increment: DiscourseBox,
    },
    /// `base ~= p` — the base's worldly information is exactly the file's.
    Approx { base: FileBase, var: FileVar },
    /// An ordinary formula used as a condition.
    Pred(Formula),
    /// `Id(x, p)` — within file `p`, the referent is settled.
    Id { dref: Dref, file: FileVar },
    /// `Ud(x, p)` — within file `p`, the referent is left open.
    Ud { dref: Dref, file: FileVar },
    /// `sort(t) in {…}` — the term denotes a source of one of these sorts.
    SortIn { term: Term, sorts: BTreeSet<Sort> },
    /// `X = sum z [body]` — the group referent collects, per possibility,
    /// every individual satisfying the body.
    Sum {
        group: Dref,
        var: Dref,
        body: Box<Formula>,
    },
    /// `quant det x [restrictor] [spine]` — a generalized-quantifier
    /// determiner; introduces no referent into the surrounding file.
    GenQ {
        det: String,
        var: Dref,
        restrictor: Box<Formula>,
        spine: Box<Formula>,
    },
    /// `presup c` — the condition is presupposed rather than asserted.
    Partial(Box<Condition>),
}

impl Condition {
    fn render(&self, sym: bool) -> String {
        match self {
            Condition::FileDef {
                var,
                base,
                increment,
            } => format!("{var} : {} + {}", base.render(), increment.render(sym)),
            Condition::Approx { base, var } => {
                let approx = if sym { "≈" } else { "~=" };
                format!("{} {approx} {var}", base.render())
            }
            Condition::Pred(f) => f.render(sym),
            Condition::Id { dref, file } => format!("Id({dref}, {file})"),
            Condition::Ud { dref, file } => format!("Ud({dref}, {file})"),
            Condition::SortIn { term, sorts } => {
                let names: Vec<String> = sorts.iter().map(|s| s.to_string()).collect();
                let elem = if sym { "∈" } else { "in" };
                format!("sort({term}) {elem} {{{}}}", names.join(" "))
            }
            Condition::Sum { group, var, body } => {
                format!("{group} = sum {var} [{}]", body.render(sym))
            }
            Condition::GenQ {
                det,
                var,
                restrictor,
                spine,
            } => format!(
                "quant {det} {var} [{}] [{}]",
                restrictor.render(sym),
                spine.render(sym)
            ),
            Condition::Partial(inner) => {
                let presup = if sym { "∂" } else { "presup" };
                match inner.as_ref() {
                    Condition::Pred(f) => format!("{presup} [{}]", f.render(sym)),
                    other => format!("{presup} {}", other.render(sym)),
                }
            }
        }
    }

    /// Unicode rendering, for diagnostics.
    pub fn symbolic(&self) -> String {
        self.render(true)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(false))
    }
}

/// A referent declared in a box row: an individual referent or a file
/// referent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoxDref {
    Indiv(Dref),
    File(FileVar),
}

impl fmt::Display for BoxDref {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoxDref::Indiv(d) => write!(f, "{d}"),
            BoxDref::File(v) => write!(f, "{v}"),
        }
    }
}

/// A discourse box: a row of newly introduced referents and an ordered list
/// of conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscourseBox {
    pub drefs: Vec<BoxDref>,
    pub conditions: Vec<Condition>,
}

impl DiscourseBox {
    /// The individual referents this box adds to the file it updates: the
    /// declared row plus whatever its formula conditions export.
    pub fn introduced_drefs(&self) -> Vec<Dref> {
        let mut out = Vec::new();
        for bd in &self.drefs {
            if let BoxDref::Indiv(d) = bd {
                out.push(d.clone());
            }
        }
        for cond in &self.conditions {
            match cond {
                Condition::Pred(f) => out.extend(f.exports()),
                Condition::Sum { group, .. } => out.push(group.clone()),
                _ => {}
            }
        }
        out
    }

    fn render(&self, sym: bool) -> String {
        let row: Vec<String> = self.drefs.iter().map(|d| d.to_string()).collect();
        let conds: Vec<String> = self.conditions.iter().map(|c| c.render(sym)).collect();
        format!("[{} | {}]", row.join(" "), conds.join(", "))
    }

    /// Unicode rendering, for diagnostics.
    pub fn symbolic(&self) -> String {
        self.render(true)
    }
}

impl fmt::Display for DiscourseBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(false))
    }
}

/// The referents and file variables visible at some point of a checked
/// structure.  Each visible file variable carries the referents its file's
/// domain is known to contain, so identification conditions can be checked
/// from nested positions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScopeSet {
    pub drefs: BTreeSet<Dref>,
    pub filevars: BTreeMap<FileVar, BTreeSet<Dref>>,
}

fn check_term(t: &Term, scope: &ScopeSet) -> Result<()> {
    match t {
        Term::Dref(d) if !scope.drefs.contains(d) => Err(Error::UnboundDref(d.0.clone())),
        _ => Ok(()),
    }
}

/// Check binding discipline: every referent used is introduced or ambient,
/// and no referent is introduced twice along any path.
pub fn check_formula(f: &Formula, scope: &ScopeSet) -> Result<()> {
    match f {
        Formula::Atom { args, .. } => args.iter().try_for_each(|t| check_term(t, scope)),
        Formula::Eq(a, b) | Formula::Neq(a, b) => {
            check_term(a, scope)?;
            check_term(b, scope)
        }
        Formula::And(a, b) => {
            check_formula(a, scope)?;
            let mut rhs_scope = scope.clone();
            rhs_scope.drefs.extend(a.exports());
            check_formula(b, &rhs_scope)
        }
        Formula::Exists(x, body) | Formula::Forall(x, body) => {
            if scope.drefs.contains(x) {
                return Err(Error::Scope(format!("referent {x} introduced twice")));
            }
            let mut inner = scope.clone();
            inner.drefs.insert(x.clone());
            check_formula(body, &inner)
        }
        Formula::Diamond(body)
        | Formula::Nec(body)
        | Formula::Not(body)
        | Formula::Partial(body) => check_formula(body, scope),
    }
}

/// Check a discourse box: row novelty, definition-before-use for file
/// variables, bound terms everywhere, and the shape restrictions on
/// presupposed and summation conditions.
pub fn check_box(bx: &DiscourseBox, scope: &ScopeSet) -> Result<()> {
    check_box_inner(bx, scope).map(|_| ())
}

fn check_box_inner(
    bx: &DiscourseBox,
    scope: &ScopeSet,
) -> Result<BTreeMap<FileVar, BTreeSet<Dref>>> {
    let mut drefs = scope.drefs.clone();
    let ambient_files = scope.filevars.clone();
    let mut row_files: BTreeSet<FileVar> = BTreeSet::new();
    for bd in &bx.drefs {
        match bd {
            BoxDref::Indiv(d) => {
                if !drefs.insert(d.clone()) {
                    return Err(Error::Scope(format!("referent {d} introduced twice")));
                }
            }
            BoxDref::File(v) => {
                if ambient_files.contains_key(v) || !row_files.insert(v.clone()) {
                    return Err(Error::Scope(format!(
                        "file variable {v} introduced twice"
                    )));
                }
            }
        }
    }
    let mut defined: BTreeMap<FileVar, BTreeSet<Dref>> = BTreeMap::new();
    for cond in &bx.conditions {
        check_condition(cond, &mut drefs, &ambient_files, &row_files, &mut defined)?;
    }
    for v in &row_files {
        if !defined.contains_key(v) {
            return Err(Error::Scope(format!(
                "file variable {v} is declared but never defined"
            )));
        }
    }
    Ok(defined)
}

fn file_in_scope(
    v: &FileVar,
    ambient_files: &BTreeMap<FileVar, BTreeSet<Dref>>,
    defined: &BTreeMap<FileVar, BTreeSet<Dref>>,
) -> bool {
    ambient_files.contains_key(v) || defined.contains_key(v)
}

fn check_condition(
    cond: &Condition,
    drefs: &mut BTreeSet<Dref>,
    ambient_files: &BTreeMap<FileVar, BTreeSet<Dref>>,
    row_files: &BTreeSet<FileVar>,
    defined: &mut BTreeMap<FileVar, BTreeSet<Dref>>,
) -> Result<()> {
    let scope_now = |drefs: &BTreeSet<Dref>,
                     defined: &BTreeMap<FileVar, BTreeSet<Dref>>| {
        let mut filevars = ambient_files.clone();
        filevars.extend(defined.clone());
        ScopeSet {
            drefs: drefs.clone(),
            filevars,
        }
    };
    match cond {
        Condition::FileDef {
            var,
            base,
            increment,
        } => {
            if !row_files.contains(var) {
                return Err(Error::Scope(format!(
                    "file definition for {var}, which the row does not declare"
                )));
            }
            if defined.contains_key(var) {
                return Err(Error::Scope(format!("file variable {var} defined twice")));
            }
            match base {
                FileBase::Var(q) => {
                    if !file_in_scope(q, ambient_files, defined) {
                        return Err(Error::UnboundFileVar(q.0.clone()));
                    }
                }
                FileBase::Content(t) | FileBase::Belief(t) => {
                    check_term(t, &scope_now(drefs, defined))?
                }
            }
            let inner_defined = check_box_inner(increment, &scope_now(drefs, defined))?;
            let mut dom: BTreeSet<Dref> = increment.introduced_drefs().into_iter().collect();
            for inner_dom in inner_defined.values() {
                dom.extend(inner_dom.iter().cloned());
            }
            defined.insert(var.clone(), dom);
            Ok(())
        }
        Condition::Approx { base, var } => {
            if !file_in_scope(var, ambient_files, defined) {
                return Err(Error::UnboundFileVar(var.0.clone()));
            }
            match base {
                FileBase::Var(q) => {
                    if !file_in_scope(q, ambient_files, defined) {
                        return Err(Error::UnboundFileVar(q.0.clone()));
                    }
                    Ok(())
                }
                FileBase::Content(t) | FileBase::Belief(t) => {
                    check_term(t, &scope_now(drefs, defined))
                }
            }
        }
        Condition::Pred(f) => {
            check_formula(f, &scope_now(drefs, defined))?;
            drefs.extend(f.exports());
            Ok(())
        }
        // Whether the referent actually belongs to the file's domain is a
        // semantic question (it presupposes domain membership at run time),
        // so only the file variable itself is checked here.
        Condition::Id { file, .. } | Condition::Ud { file, .. } => {
            if !file_in_scope(file, ambient_files, defined) {
                return Err(Error::UnboundFileVar(file.0.clone()));
            }
            Ok(())
        }
        Condition::SortIn { term, .. } => check_term(term, &scope_now(drefs, defined)),
        Condition::Sum { group, var, body } => {
            if drefs.contains(group) {
                return Err(Error::Scope(format!("referent {group} introduced twice")));
            }
            if drefs.contains(var) || var == group {
                return Err(Error::Scope(format!("referent {var} introduced twice")));
            }
            if !body.is_eliminative() {
                return Err(Error::Scope(
                    "summation body must not introduce referents".to_string(),
                ));
            }
            let mut inner = scope_now(drefs, defined);
            inner.drefs.insert(var.clone());
            check_formula(body, &inner)?;
            drefs.insert(group.clone());
            Ok(())
        }
        Condition::GenQ {
            var,
            restrictor,
            spine,
            ..
        } => {
            if drefs.contains(var) {
                return Err(Error::Scope(format!("referent {var} introduced twice")));
            }
            let mut inner = scope_now(drefs, defined);
            inner.drefs.insert(var.clone());
            check_formula(restrictor, &inner)?;
            check_formula(spine, &inner)
        }
        Condition::Partial(inner) => {
            fn test_like(c: &Condition) -> bool {
                match c {
                    Condition::Pred(f) => f.is_eliminative(),
                    Condition::Approx { .. }
                    | Condition::Id { .. }
                    | Condition::Ud { .. }
                    | Condition::SortIn { .. } => true,
                    Condition::Partial(inner) => test_like(inner),
                    Condition::FileDef { .. }
                    | Condition::Sum { .. }
                    | Condition::GenQ { .. } => false,
                }
            }
            if !test_like(inner) {
                return Err(Error::Scope(
                    "presupposed conditions must be tests".to_string(),
                ));
            }
            check_condition(inner, drefs, ambient_files, row_files, defined)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: &str) -> Dref {
        Dref(n.into())
    }

    fn dterm(n: &str) -> Term {
        Term::Dref(x(n))
    }

    fn cterm(n: &str) -> Term {
        Term::Const(n.into())
    }

    fn hotel(t: Term) -> Formula {
        Formula::atom("hotel", vec![t])
    }

    #[test]
    fn display_is_canonical() {
        let f = Formula::Exists(
            x("x1"),
            Box::new(Formula::And(
                Box::new(hotel(dterm("x1"))),
                Box::new(Formula::Diamond(Box::new(Formula::Neq(
                    dterm("x1"),
                    cterm("colbert"),
                )))),
            )),
        );
        assert_eq!(f.to_string(), "Ex x1 [hotel(x1) & dia [x1 != colbert]]");
        assert_eq!(f.symbolic(), "∃ x1 [hotel(x1) ∧ ◇ [x1 ≠ colbert]]");
    }

    #[test]
    fn eliminativity_matches_exports() {
        let introducing = Formula::And(
            Box::new(hotel(cterm("colbert"))),
            Box::new(Formula::Exists(x("x1"), Box::new(hotel(dterm("x1"))))),
        );
        assert!(!introducing.is_eliminative());
        assert_eq!(introducing.exports(), vec![x("x1")]);
        let test = Formula::Not(Box::new(introducing.clone()));
        assert!(test.is_eliminative());
        assert!(test.exports().is_empty());
        let nested = Formula::Exists(
            x("x1"),
            Box::new(Formula::And(
                Box::new(hotel(dterm("x1"))),
                Box::new(Formula::Exists(x("x2"), Box::new(hotel(dterm("x2"))))),
            )),
        );
        assert_eq!(nested.exports(), vec![x("x1"), x("x2")]);
    }

    #[test]
    fn conjunction_binds_across_its_left_conjunct() {
        let f = Formula::And(
            Box::new(Formula::Exists(x("x1"), Box::new(hotel(dterm("x1"))))),
            Box::new(Formula::atom("stayin", vec![cterm("s"), dterm("x1")])),
        );
        assert!(check_formula(&f, &ScopeSet::default()).is_ok());
        let dangling = Formula::atom("stayin", vec![cterm("s"), dterm("x1")]);
        assert!(matches!(
            check_formula(&dangling, &ScopeSet::default()),
            Err(Error::UnboundDref(_))
        ));
    }

    #[test]
    fn reintroduction_is_rejected() {
        let f = Formula::Exists(
            x("x1"),
            Box::new(Formula::Exists(x("x1"), Box::new(hotel(dterm("x1"))))),
        );
        assert!(matches!(
            check_formula(&f, &ScopeSet::default()),
            Err(Error::Scope(_))
        ));
    }

    #[test]
    fn quantifier_scope_is_local() {
        let f = Formula::And(
            Box::new(Formula::Not(Box::new(Formula::Exists(
                x("x1"),
                Box::new(hotel(dterm("x1"))),
            )))),
            Box::new(hotel(dterm("x1"))),
        );
        assert!(matches!(
            check_formula(&f, &ScopeSet::default()),
            Err(Error::UnboundDref(_))
        ));
    }

    fn memo_box() -> DiscourseBox {
        let p = FileVar("p".into());
        DiscourseBox {
            drefs: vec![BoxDref::File(p.clone())],
            conditions: vec![
                Condition::FileDef {
                    var: p.clone(),
                    base: FileBase::Content(cterm("m2")),
                    increment: DiscourseBox {
                        drefs: vec![BoxDref::Indiv(x("x3"))],
                        conditions: vec![
                            Condition::Pred(hotel(dterm("x3"))),
                            Condition::Pred(Formula::atom(
                                "stayin",
                                vec![cterm("s"), dterm("x3")],
                            )),
                        ],
                    },
                },
                Condition::Approx {
                    base: FileBase::Content(cterm("m2")),
                    var: p.clone(),
                },
                Condition::Ud {
                    dref: x("x3"),
                    file: p,
                },
            ],
        }
    }

    #[test]
    fn box_display_shows_row_and_conditions() {
        assert_eq!(
            memo_box().to_string(),
            "[p | p : content(m2) + [x3 | hotel(x3), stayin(s, x3)], \
             content(m2) ~= p, Ud(x3, p)]"
        );
    }

    #[test]
    fn box_checks_accept_status_referents_from_the_file_domain() {
        assert!(check_box(&memo_box(), &ScopeSet::default()).is_ok());
    }

    #[test]
    fn box_checks_reject_undefined_and_redefined_files() {
        let mut bx = memo_box();
        bx.conditions.remove(0);
        assert!(matches!(
            check_box(&bx, &ScopeSet::default()),
            Err(Error::UnboundFileVar(_)) | Err(Error::Scope(_))
        ));
        let mut twice = memo_box();
        let again = twice.conditions[0].clone();
        twice.conditions.insert(1, again);
        assert!(matches!(
            check_box(&twice, &ScopeSet::default()),
            Err(Error::Scope(_))
        ));
    }

    #[test]
    fn status_referent_membership_is_not_checked_statically() {
        // Domain membership for Id/Ud referents is presupposed at run time
        // rather than rejected here, so a referent absent from every file
        // still passes the static check.
        let mut bx = memo_box();
        bx.conditions[2] = Condition::Ud {
            dref: x("x9"),
            file: FileVar("p".into()),
        };
        assert!(check_box(&bx, &ScopeSet::default()).is_ok());
        let mut unknown_file = memo_box();
        unknown_file.conditions[2] = Condition::Ud {
            dref: x("x3"),
            file: FileVar("q".into()),
        };
        assert!(matches!(
            check_box(&unknown_file, &ScopeSet::default()),
            Err(Error::UnboundFileVar(_))
        ));
    }

    #[test]
    fn presupposed_conditions_must_be_tests() {
        let bad = DiscourseBox {
            drefs: vec![],
            conditions: vec![Condition::Partial(Box::new(Condition::Pred(
                Formula::Exists(x("x1"), Box::new(hotel(dterm("x1")))),
            )))],
        };
        assert!(matches!(
            check_box(&bad, &ScopeSet::default()),
            Err(Error::Scope(_))
        ));
        let good = DiscourseBox {
            drefs: vec![],
            conditions: vec![Condition::Partial(Box::new(Condition::Pred(hotel(
                cterm("colbert"),
            ))))],
        };
        assert!(check_box(&good, &ScopeSet::default()).is_ok());
    }

    #[test]
    fn summation_exports_its_group_referent() {
        let bx = DiscourseBox {
            drefs: vec![],
            conditions: vec![
                Condition::Sum {
                    group: Dref("X1".into()),
                    var: x("z"),
                    body: Box::new(Formula::atom("member", vec![dterm("z")])),
                },
                Condition::Pred(Formula::atom("bribe", vec![cterm("s"), dterm("X1")])),
            ],
        };
        assert!(check_box(&bx, &ScopeSet::default()).is_ok());
        assert_eq!(bx.introduced_drefs(), vec![Dref("X1".into())]);
    }
}
