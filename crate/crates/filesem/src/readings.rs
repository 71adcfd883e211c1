//! Reading enumeration and filtering for sentence skeletons.
//!
//! A *skeleton* abstracts a report sentence: a top information source, an
//! optional embedded source created inside the top content, a predicate spine
//! templated over an indefinite's referent (`HOLE`), the indefinite itself
//! (determiner, restrictor, referent), an optional epistemic participle, and
//! an optional outer negative quantifier.  A *candidate* reading fixes a
//! scope for the indefinite, a landing site for the stored descriptive
//! conditions, and antecedents for their source and file slots.  Candidates
//! are built into full discourse boxes and filtered by evaluation: a
//! candidate survives unless its box hits a presupposition failure (truth or
//! falsity does not filter).

use std::collections::BTreeSet;
use std::fmt;

use crate::eval::{run_discourse, Env, PresupDiag, PresupKind};
use crate::lexicon::{DeterminerClass, Lexicon, StoredFormula};
use crate::logic::{BoxDref, Condition, DiscourseBox, FileBase, Formula, Term};
use crate::model::{Individual, Model, Sort, Value};
use crate::parser::{is_dref_name, parse_formula};
use crate::state::{Dref, File, FileVar};
use crate::{Error, Result};

/// The term the spine and restrictor leave open for the indefinite.
pub const HOLE: &str = "HOLE";

/// An embedded information source: an individual created inside the top
/// content (for example an agreement made there), with the conditions that
/// introduce it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedSource {
    /// The model individual the referent stands for.
    pub name: String,
    /// The referent that hosts it inside the top content.
    pub dref: Dref,
    /// Conditions introducing it, e.g. `agreement(x2) & make(s, x2)`.
    pub intro: Formula,
}

/// An outer negative quantifier taking scope over the spine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OuterQuant {
    pub det: String,
    pub restrictor: String,
    pub var: Dref,
}

/// The indefinite noun phrase under analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Indefinite {
    pub det: String,
    pub restrictor: String,
    pub dref: Dref,
}

/// A schematic report sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    pub source: String,
    pub embedded: Option<EmbeddedSource>,
    pub spine: Formula,
    pub indef: Indefinite,
    pub participle: Option<String>,
    pub outer: Option<OuterQuant>,
}

/// Scope of the indefinite, from outermost to innermost landing of the
/// referent itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Scope {
    /// Above the outer quantifier (only available when one is declared).
    Widest,
    /// At the top content level.
    Wide,
    /// Inside the embedded source's content.
    Narrow,
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Widest => write!(f, "widest"),
            Scope::Wide => write!(f, "wide"),
            Scope::Narrow => write!(f, "narrow"),
        }
    }
}

/// One candidate analysis: a scope, a landing site for the stored
/// conditions, and resolved source/file antecedents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub scope: Scope,
    /// Name of the level whose condition list receives the stored formula:
    /// `top` for the context box, `p1` for the top content's increment.
    pub landing: String,
    /// The source antecedent's individual name.
    pub antecedent: String,
    /// The file antecedent.
    pub file: FileVar,
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}/{},{}",
            self.scope, self.landing, self.antecedent, self.file
        )
    }
}

/// What filtering decided about one candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CandidateOutcome {
    Survives {
        /// Whether the box also came out true on the scenario model (truth
        /// is reported for interest; it does not affect survival).
        true_on_model: bool,
    },
    Filtered(PresupDiag),
}

/// One report line: a candidate and its fate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReadingLine {
    pub candidate: Candidate,
    pub outcome: CandidateOutcome,
}

impl ReadingLine {
    /// The diagnostic text shown for filtered candidates.
    pub fn diagnostic(&self) -> Option<String> {
        match &self.outcome {
            CandidateOutcome::Survives { .. } => None,
            CandidateOutcome::Filtered(d) => Some(render_diag(d)),
        }
    }
}

fn render_diag(d: &PresupDiag) -> String {
    match d.kind {
        PresupKind::Condition => format!("∂ {}", d.condition),
        PresupKind::DrefDomain => format!("dref-domain: {}", d.condition),
        PresupKind::AbsurdFile => format!("absurd-file: {}", d.condition),
    }
}

impl fmt::Display for ReadingLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            CandidateOutcome::Survives { .. } => write!(f, "{} => SURVIVES", self.candidate),
            CandidateOutcome::Filtered(d) => {
                write!(f, "{} => FILTERED({})", self.candidate, render_diag(d))
            }
        }
    }
}

/// The filtered candidate table for one skeleton, in deterministic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReadingReport {
    pub lines: Vec<ReadingLine>,
}

impl ReadingReport {
    /// The scopes with at least one surviving candidate.
    pub fn surviving_scopes(&self) -> BTreeSet<Scope> {
        self.lines
            .iter()
            .filter(|l| matches!(l.outcome, CandidateOutcome::Survives { .. }))
            .map(|l| l.candidate.scope)
            .collect()
    }

    /// The surviving candidates themselves.
    pub fn surviving(&self) -> Vec<&Candidate> {
        self.lines
            .iter()
            .filter(|l| matches!(l.outcome, CandidateOutcome::Survives { .. }))
            .map(|l| &l.candidate)
            .collect()
    }
}

impl fmt::Display for ReadingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

impl Skeleton {
    /// Parse the text form:
    ///
    /// ```text
    /// skeleton {
    ///   source press_release;
    ///   embedded agreement x2 [agreement(x2) & make(s, x2)];
    ///   spine [play-for(s, HOLE)];
    ///   indef a team-in-italy x1;
    ///   participle undetermined;
    ///   outer nobody person z;
    /// }
    /// ```
    pub fn parse(text: &str) -> Result<Skeleton> {
        let stripped: String = text
            .lines()
            .map(|l| match l.find('#') {
                Some(k) => &l[..k],
                None => l,
            })
            .collect::<Vec<_>>()
            .join("\n");
        let bad = |msg: &str| Error::InvalidSkeleton(msg.to_string());
        let open = stripped.find('{').ok_or_else(|| bad("missing `{`"))?;
        let close = stripped.rfind('}').ok_or_else(|| bad("missing `}`"))?;
        if stripped[..open].trim() != "skeleton" {
            return Err(bad("text must start with `skeleton {`"));
        }
        let mut source = None;
        let mut embedded = None;
        let mut spine = None;
        let mut indef = None;
        let mut participle = None;
        let mut outer = None;
        for stmt in stripped[open + 1..close].split(';') {
            let stmt = stmt.trim();
            if stmt.is_empty() {
                continue;
            }
            let (head, rest) = stmt.split_once(char::is_whitespace).unwrap_or((stmt, ""));
            let rest = rest.trim();
            let already = |field: &str| bad(&format!("duplicate `{field}` statement"));
            match head {
                "source" => {
                    if source.replace(expect_one_word(rest, "source")?).is_some() {
                        return Err(already("source"));
                    }
                }
                "embedded" => {
                    let (words, formula) = split_bracketed(rest, "embedded")?;
                    let [name, dref] = two_words(&words, "embedded")?;
                    let dref = expect_dref(&dref)?;
                    let entry = EmbeddedSource {
                        name,
                        dref,
                        intro: parse_formula(&formula)?,
                    };
                    if embedded.replace(entry).is_some() {
                        return Err(already("embedded"));
                    }
                }
                "spine" => {
                    let (words, formula) = split_bracketed(rest, "spine")?;
                    if !words.trim().is_empty() {
                        return Err(bad("spine takes only a bracketed formula"));
                    }
                    if spine.replace(parse_formula(&formula)?).is_some() {
                        return Err(already("spine"));
                    }
                }
                "indef" => {
                    let [det, restrictor, dref] = three_words(rest, "indef")?;
                    let entry = Indefinite {
                        det,
                        restrictor,
                        dref: expect_dref(&dref)?,
                    };
                    if indef.replace(entry).is_some() {
                        return Err(already("indef"));
                    }
                }
                "participle" => {
                    if participle
                        .replace(expect_one_word(rest, "participle")?)
                        .is_some()
                    {
                        return Err(already("participle"));
                    }
                }
                "outer" => {
                    let [det, restrictor, var] = three_words(rest, "outer")?;
                    let entry = OuterQuant {
                        det,
                        restrictor,
                        var: expect_dref(&var)?,
                    };
                    if outer.replace(entry).is_some() {
                        return Err(already("outer"));
                    }
                }
                other => return Err(bad(&format!("unknown statement `{other}`"))),
            }
        }
        Ok(Skeleton {
            source: source.ok_or_else(|| bad("missing `source`"))?,
            embedded,
            spine: spine.ok_or_else(|| bad("missing `spine`"))?,
            indef: indef.ok_or_else(|| bad("missing `indef`"))?,
            participle,
            outer,
        })
    }

    /// Check the skeleton against a model and lexicon.
    pub fn validate(&self, model: &Model, lexicon: &Lexicon) -> Result<()> {
        let bad = |msg: String| Error::InvalidSkeleton(msg);
        model.sort_of(&Individual(self.source.clone()))?;
        let det = lexicon.determiner(&self.indef.det)?;
        check_restrictor(model, &self.indef.restrictor)?;
        if !mentions_hole(&self.spine) {
            return Err(bad(format!("the spine never mentions {HOLE}")));
        }
        if !self.spine.is_eliminative() {
            return Err(bad("the spine must not introduce referents".into()));
        }
        if let Some(p) = &self.participle {
            lexicon.participle(p)?;
            if det.idiom_sorts.is_some() {
                return Err(bad(format!(
                    "determiner {} carries its own stored formula and cannot \
                     combine with participle {p}",
                    det.name
                )));
            }
        }
        if let Some(e) = &self.embedded {
            model.sort_of(&Individual(e.name.clone()))?;
            if !e.intro.is_eliminative() {
                return Err(bad(
                    "the embedded introduction must not introduce referents".into(),
                ));
            }
            if e.dref == self.indef.dref {
                return Err(bad("embedded referent collides with the indefinite".into()));
            }
        }
        if let Some(o) = &self.outer {
            if self.embedded.is_some() {
                return Err(bad(
                    "an outer quantifier cannot combine with an embedded source".into(),
                ));
            }
            if o.det != "nobody" {
                return Err(bad(format!(
                    "only the negative outer quantifier `nobody` is supported, got {}",
                    o.det
                )));
            }
            lexicon.determiner(&o.det)?;
            check_restrictor(model, &o.restrictor)?;
            if o.var == self.indef.dref {
                return Err(bad("outer variable collides with the indefinite".into()));
            }
            if det.class == DeterminerClass::Quantificational {
                return Err(bad(
                    "a quantificational indefinite under an outer quantifier has \
                     no box form"
                        .into(),
                ));
            }
        }
        Ok(())
    }

    /// The stored formula this skeleton contributes, if any: the
    /// participle's, or the determiner idiom's.
    fn stored(&self, lexicon: &Lexicon) -> Result<Option<StoredFormula>> {
        if let Some(p) = &self.participle {
            return Ok(Some(
                lexicon.participle(p)?.instantiate(&self.indef.dref),
            ));
        }
        Ok(lexicon
            .determiner(&self.indef.det)?
            .instantiate(&self.indef.dref))
    }

    /// Render back to the text form `parse` accepts.
    pub fn to_text(&self) -> String {
        let mut out = String::from("skeleton {\n");
        out.push_str(&format!("  source {};\n", self.source));
        if let Some(e) = &self.embedded {
            out.push_str(&format!("  embedded {} {} [{}];\n", e.name, e.dref, e.intro));
        }
        out.push_str(&format!("  spine [{}];\n", self.spine));
        out.push_str(&format!(
            "  indef {} {} {};\n",
            self.indef.det, self.indef.restrictor, self.indef.dref
        ));
        if let Some(p) = &self.participle {
            out.push_str(&format!("  participle {p};\n"));
        }
        if let Some(o) = &self.outer {
            out.push_str(&format!("  outer {} {} {};\n", o.det, o.restrictor, o.var));
        }
        out.push('}');
        out
    }
}

fn expect_one_word(rest: &str, field: &str) -> Result<String> {
    let mut words = rest.split_whitespace();
    match (words.next(), words.next()) {
        (Some(w), None) => Ok(w.to_string()),
        _ => Err(Error::InvalidSkeleton(format!(
            "`{field}` takes exactly one word"
        ))),
    }
}

fn two_words(rest: &str, field: &str) -> Result<[String; 2]> {
    let words: Vec<&str> = rest.split_whitespace().collect();
    match words.as_slice() {
        [a, b] => Ok([a.to_string(), b.to_string()]),
        _ => Err(Error::InvalidSkeleton(format!(
            "`{field}` takes a name and a referent before its formula"
        ))),
    }
}

fn three_words(rest: &str, field: &str) -> Result<[String; 3]> {
    let words: Vec<&str> = rest.split_whitespace().collect();
    match words.as_slice() {
        [a, b, c] => Ok([a.to_string(), b.to_string(), c.to_string()]),
        _ => Err(Error::InvalidSkeleton(format!(
            "`{field}` takes exactly three words"
        ))),
    }
}

fn expect_dref(word: &str) -> Result<Dref> {
    if is_dref_name(word) {
        Ok(Dref(word.to_string()))
    } else {
        Err(Error::InvalidSkeleton(format!(
            "`{word}` is not a referent name"
        )))
    }
}

/// Split `name x2 [formula]` into the part before the bracket and the
/// bracket's contents.
fn split_bracketed(rest: &str, field: &str) -> Result<(String, String)> {
    let open = rest.find('[').ok_or_else(|| {
        Error::InvalidSkeleton(format!("`{field}` needs a bracketed formula"))
    })?;
    let close = rest.rfind(']').ok_or_else(|| {
        Error::InvalidSkeleton(format!("`{field}` has an unterminated formula"))
    })?;
    Ok((
        rest[..open].to_string(),
        rest[open + 1..close].to_string(),
    ))
}

fn check_restrictor(model: &Model, name: &str) -> Result<()> {
    match model.predicates.get(name) {
        None => Err(Error::UnknownPredicate(name.to_string())),
        Some(p) if p.arity != 1 => Err(Error::Arity {
            pred: name.to_string(),
            expected: 1,
            got: p.arity,
        }),
        Some(_) => Ok(()),
    }
}

fn mentions_hole(f: &Formula) -> bool {
    let hole = Term::Const(HOLE.to_string());
    match f {
        Formula::Atom { args, .. } => args.contains(&hole),
        Formula::Eq(a, b) | Formula::Neq(a, b) => *a == hole || *b == hole,
        Formula::And(a, b) => mentions_hole(a) || mentions_hole(b),
        Formula::Exists(_, body)
        | Formula::Forall(_, body)
        | Formula::Diamond(body)
        | Formula::Nec(body)
        | Formula::Not(body)
        | Formula::Partial(body) => mentions_hole(body),
    }
}

/// Replace the `HOLE` placeholder with the indefinite's referent.
fn plug(f: &Formula, dref: &Dref) -> Formula {
    let swap = |t: &Term| match t {
        Term::Const(c) if c == HOLE => Term::Dref(dref.clone()),
        other => other.clone(),
    };
    match f {
        Formula::Atom { pred, args } => Formula::Atom {
            pred: pred.clone(),
            args: args.iter().map(swap).collect(),
        },
        Formula::Eq(a, b) => Formula::Eq(swap(a), swap(b)),
        Formula::Neq(a, b) => Formula::Neq(swap(a), swap(b)),
        Formula::And(a, b) => Formula::And(Box::new(plug(a, dref)), Box::new(plug(b, dref))),
        Formula::Exists(v, body) => Formula::Exists(v.clone(), Box::new(plug(body, dref))),
        Formula::Forall(v, body) => Formula::Forall(v.clone(), Box::new(plug(body, dref))),
        Formula::Diamond(body) => Formula::Diamond(Box::new(plug(body, dref))),
        Formula::Nec(body) => Formula::Nec(Box::new(plug(body, dref))),
        Formula::Not(body) => Formula::Not(Box::new(plug(body, dref))),
        Formula::Partial(body) => Formula::Partial(Box::new(plug(body, dref))),
    }
}

/// Flatten a conjunction into its conjuncts, in order.
fn conjuncts(f: &Formula) -> Vec<Formula> {
    match f {
        Formula::And(a, b) => {
            let mut out = conjuncts(a);
            out.extend(conjuncts(b));
            out
        }
        other => vec![other.clone()],
    }
}

fn file_base_for(term: Term, sort: Sort) -> FileBase {
    match sort {
        Sort::BeliefHolder => FileBase::Belief(term),
        Sort::Communication | Sort::Plan => FileBase::Content(term),
    }
}

/// All candidate analyses for a skeleton, in report order, before filtering.
pub fn enumerate_candidates(
    sk: &Skeleton,
    model: &Model,
    lexicon: &Lexicon,
) -> Result<Vec<Candidate>> {
    sk.validate(model, lexicon)?;
    let scopes: Vec<Scope> = if sk.outer.is_some() {
        vec![Scope::Widest, Scope::Wide]
    } else if sk.embedded.is_some() {
        vec![Scope::Wide, Scope::Narrow]
    } else {
        vec![Scope::Wide]
    };
    let mut pairs = vec![(sk.source.clone(), FileVar("p1".into()), "top".to_string())];
    if let Some(e) = &sk.embedded {
        pairs.push((e.name.clone(), FileVar("p2".into()), "p1".to_string()));
    }
    let mut out = Vec::new();
    for scope in &scopes {
        for (antecedent, file, landing) in &pairs {
            out.push(Candidate {
                scope: *scope,
                landing: landing.clone(),
                antecedent: antecedent.clone(),
                file: file.clone(),
            });
        }
    }
    out.sort_by(|a, b| {
        (a.scope, &a.antecedent, &a.file.0).cmp(&(b.scope, &b.antecedent, &b.file.0))
    });
    Ok(out)
}

/// Build the full discourse box for one candidate.
pub fn build_representation(
    sk: &Skeleton,
    cand: &Candidate,
    model: &Model,
    lexicon: &Lexicon,
) -> Result<DiscourseBox> {
    let p1 = FileVar("p1".into());
    let p2 = FileVar("p2".into());
    let x1 = &sk.indef.dref;
    let spine = plug(&sk.spine, x1);
    let restrictor = Formula::atom(&sk.indef.restrictor, vec![Term::Dref(x1.clone())]);
    let det = lexicon.determiner(&sk.indef.det)?.clone();
    let quantificational = det.class == DeterminerClass::Quantificational;

    // Resolve the stored formula's open slots from the candidate.
    let stored: Vec<Condition> = match sk.stored(lexicon)? {
        None => Vec::new(),
        Some(sf) => {
            let (y, y_sort) = if cand.file == p1 {
                let sort = model.sort_of(&Individual(sk.source.clone()))?;
                (Term::Const(sk.source.clone()), sort)
            } else {
                let e = sk.embedded.as_ref().ok_or_else(|| {
                    Error::InvalidSkeleton("no embedded source for this candidate".into())
                })?;
                let sort = model.sort_of(&Individual(e.name.clone()))?;
                (Term::Dref(e.dref.clone()), sort)
            };
            sf.conditions(&y, y_sort, &cand.file)
        }
    };
    let stored_at_top = cand.landing == "top";

    // The increment that grows the top source's content.
    let inner = if let Some(e) = &sk.embedded {
        let e_sort = model.sort_of(&Individual(e.name.clone()))?;
        let inner_base = file_base_for(Term::Dref(e.dref.clone()), e_sort);
        let mut drefs = Vec::new();
        let mut conditions = Vec::new();
        if cand.scope == Scope::Wide && !quantificational {
            drefs.push(BoxDref::Indiv(x1.clone()));
        }
        drefs.push(BoxDref::Indiv(e.dref.clone()));
        drefs.push(BoxDref::File(p2.clone()));
        if cand.scope == Scope::Wide {
            if quantificational {
                conditions.push(Condition::GenQ {
                    det: det.name.clone(),
                    var: x1.clone(),
                    restrictor: Box::new(restrictor.clone()),
                    spine: Box::new(spine.clone()),
                });
            } else {
                conditions.push(Condition::Pred(restrictor.clone()));
            }
        }
        for c in conjuncts(&e.intro) {
            conditions.push(Condition::Pred(c));
        }
        let innermost = match (cand.scope, quantificational) {
            // Wide scope: the embedded content only carries the spine, with
            // the indefinite resolved from outside.
            (Scope::Wide, false) => DiscourseBox {
                drefs: vec![],
                conditions: vec![Condition::Pred(spine.clone())],
            },
            (Scope::Wide, true) => DiscourseBox {
                drefs: vec![],
                conditions: vec![],
            },
            (Scope::Narrow, false) => DiscourseBox {
                drefs: vec![BoxDref::Indiv(x1.clone())],
                conditions: vec![
                    Condition::Pred(spine.clone()),
                    Condition::Pred(restrictor.clone()),
                ],
            },
            (Scope::Narrow, true) => DiscourseBox {
                drefs: vec![],
                conditions: vec![Condition::GenQ {
                    det: det.name.clone(),
                    var: x1.clone(),
                    restrictor: Box::new(restrictor.clone()),
                    spine: Box::new(spine.clone()),
                }],
            },
            (Scope::Widest, _) => {
                return Err(Error::InvalidSkeleton(
                    "widest scope requires an outer quantifier".into(),
                ))
            }
        };
        conditions.push(Condition::FileDef {
            var: p2.clone(),
            base: inner_base.clone(),
            increment: innermost,
        });
        conditions.push(Condition::Approx {
            base: inner_base,
            var: p2.clone(),
        });
        if !stored_at_top {
            conditions.extend(stored.iter().cloned());
        }
        DiscourseBox { drefs, conditions }
    } else if let Some(o) = &sk.outer {
        let outer_restr = Formula::atom(&o.restrictor, vec![Term::Dref(o.var.clone())]);
        match cand.scope {
            Scope::Widest => DiscourseBox {
                drefs: vec![BoxDref::Indiv(x1.clone())],
                conditions: vec![
                    Condition::Pred(restrictor.clone()),
                    Condition::Pred(Formula::Not(Box::new(Formula::Exists(
                        o.var.clone(),
                        Box::new(Formula::And(
                            Box::new(outer_restr),
                            Box::new(spine.clone()),
                        )),
                    )))),
                ],
            },
            Scope::Wide => DiscourseBox {
                drefs: vec![],
                conditions: vec![Condition::Pred(Formula::Not(Box::new(Formula::Exists(
                    o.var.clone(),
                    Box::new(Formula::And(
                        Box::new(outer_restr),
                        Box::new(Formula::Exists(
                            x1.clone(),
                            Box::new(Formula::And(
                                Box::new(restrictor.clone()),
                                Box::new(spine.clone()),
                            )),
                        )),
                    )),
                ))))],
            },
            Scope::Narrow => {
                return Err(Error::InvalidSkeleton(
                    "narrow scope requires an embedded source".into(),
                ))
            }
        }
    } else {
        match (cand.scope, quantificational) {
            (Scope::Wide, false) => DiscourseBox {
                drefs: vec![BoxDref::Indiv(x1.clone())],
                conditions: vec![
                    Condition::Pred(restrictor.clone()),
                    Condition::Pred(spine.clone()),
                ],
            },
            (Scope::Wide, true) => DiscourseBox {
                drefs: vec![],
                conditions: vec![Condition::GenQ {
                    det: det.name.clone(),
                    var: x1.clone(),
                    restrictor: Box::new(restrictor.clone()),
                    spine: Box::new(spine.clone()),
                }],
            },
            _ => {
                return Err(Error::InvalidSkeleton(
                    "this scope requires an embedded source or outer quantifier".into(),
                ))
            }
        }
    };

    let top_sort = model.sort_of(&Individual(sk.source.clone()))?;
    let top_base = file_base_for(Term::Const(sk.source.clone()), top_sort);
    let mut top_conditions = vec![
        Condition::FileDef {
            var: p1.clone(),
            base: top_base.clone(),
            increment: inner,
        },
        Condition::Approx {
            base: top_base,
            var: p1.clone(),
        },
    ];
    if stored_at_top {
        top_conditions.extend(stored);
    }
    Ok(DiscourseBox {
        drefs: vec![BoxDref::File(p1)],
        conditions: top_conditions,
    })
}

/// Build and evaluate every candidate, keeping those whose box runs without
/// a presupposition failure.
pub fn filter_candidates(
    sk: &Skeleton,
    model: &Model,
    lexicon: &Lexicon,
) -> Result<ReadingReport> {
    let mut lines = Vec::new();
    for cand in enumerate_candidates(sk, model, lexicon)? {
        let bx = build_representation(sk, &cand, model, lexicon)?;
        let run = run_discourse(&bx, model, Env::new(), None)?;
        let outcome = match run.presup {
            Some(diag) => CandidateOutcome::Filtered(diag),
            None => CandidateOutcome::Survives {
                true_on_model: run.failed_assertions.is_empty()
                    && !run.context.is_absurd(),
            },
        };
        lines.push(ReadingLine {
            candidate: cand,
            outcome,
        });
    }
    Ok(ReadingReport { lines })
}

/// Introduce a fresh group referent standing for a set of witnesses in every
/// possibility of a file.
pub fn summation(file: &File, group: &Dref, witnesses: &BTreeSet<Individual>) -> Result<File> {
    if witnesses.is_empty() {
        return Err(Error::EmptyGroup);
    }
    file.extend_with(group, &Value::Group(witnesses.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Model;

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

    fn team_model() -> Model {
        Model::parse(TEAM_MODEL).unwrap()
    }

    #[test]
    fn skeleton_text_round_trips() {
        let sk = team_skeleton("a", "undetermined");
        assert_eq!(sk.source, "press_release");
        assert_eq!(sk.indef.det, "a");
        assert_eq!(sk.indef.restrictor, "team-in-italy");
        assert_eq!(sk.spine.to_string(), "play-for(s, HOLE)");
        let again = Skeleton::parse(&sk.to_text()).unwrap();
        assert_eq!(again, sk);
        let outer = Skeleton::parse(
            "skeleton { source press_release; spine [play-for(HOLE, z)];
              indef a team-in-italy x1; outer nobody team-in-italy z; }",
        )
        .unwrap();
        assert_eq!(Skeleton::parse(&outer.to_text()).unwrap(), outer);
    }

    #[test]
    fn enumeration_crosses_scopes_with_level_coherent_antecedents() {
        let lex = Lexicon::shipped();
        let m = team_model();
        let cands = enumerate_candidates(&team_skeleton("a", "undisclosed"), &m, &lex).unwrap();
        let keys: Vec<String> = cands.iter().map(|c| c.to_string()).collect();
        assert_eq!(
            keys,
            vec![
                "wide/p1/agreement,p2",
                "wide/top/press_release,p1",
                "narrow/p1/agreement,p2",
                "narrow/top/press_release,p1",
            ]
        );
    }

    #[test]
    fn scope_table_matches_the_participle_lexicon() {
        let lex = Lexicon::shipped();
        let m = team_model();
        let survivors = |participle: &str| -> BTreeSet<Scope> {
            filter_candidates(&team_skeleton("a", participle), &m, &lex)
                .unwrap()
                .surviving_scopes()
        };
        assert_eq!(survivors("undisclosed"), BTreeSet::from([Scope::Wide]));
        assert_eq!(survivors("undetermined"), BTreeSet::from([Scope::Narrow]));
        assert_eq!(
            survivors("unspecified"),
            BTreeSet::from([Scope::Wide, Scope::Narrow])
        );
        assert_eq!(
            survivors("specified"),
            BTreeSet::from([Scope::Wide, Scope::Narrow])
        );
    }

    #[test]
    fn filtered_lines_name_the_failing_condition() {
        let lex = Lexicon::shipped();
        let m = team_model();
        let report = filter_candidates(&team_skeleton("a", "undetermined"), &m, &lex).unwrap();
        let texts: Vec<String> = report.lines.iter().map(|l| l.to_string()).collect();
        assert_eq!(
            texts,
            vec![
                "wide/p1/agreement,p2 => FILTERED(dref-domain: Ud(x1, p2))",
                "wide/top/press_release,p1 => FILTERED(∂ plan(press_release))",
                "narrow/p1/agreement,p2 => SURVIVES",
                "narrow/top/press_release,p1 => FILTERED(∂ plan(press_release))",
            ]
        );
    }

    #[test]
    fn quantificational_determiners_leave_no_reading() {
        let lex = Lexicon::shipped();
        let m = team_model();
        for det in ["most", "almost-every"] {
            let report =
                filter_candidates(&team_skeleton(det, "unspecified"), &m, &lex).unwrap();
            assert!(report.surviving_scopes().is_empty(), "{det}");
            for line in &report.lines {
                match &line.outcome {
                    CandidateOutcome::Filtered(d) => {
                        assert_eq!(d.kind, PresupKind::DrefDomain, "{line}")
                    }
                    other => panic!("expected filtering, got {other:?}"),
                }
            }
        }
        let report = filter_candidates(&team_skeleton("two", "unspecified"), &m, &lex).unwrap();
        assert!(!report.surviving_scopes().is_empty());
    }

    #[test]
    fn narrow_wide_boxes_have_the_documented_shape() {
        let lex = Lexicon::shipped();
        let m = team_model();
        let sk = team_skeleton("a", "undetermined");
        let cands = enumerate_candidates(&sk, &m, &lex).unwrap();
        let narrow = cands
            .iter()
            .find(|c| c.scope == Scope::Narrow && c.file.0 == "p2")
            .unwrap();
        let bx = build_representation(&sk, narrow, &m, &lex).unwrap();
        assert_eq!(
            bx.to_string(),
            "[p1 | p1 : content(press_release) + \
             [x2 p2 | agreement(x2), make(s, x2), \
             p2 : content(x2) + [x1 | play-for(s, x1), team-in-italy(x1)], \
             content(x2) ~= p2, \
             presup [plan(x2)], presup content(x2) ~= p2, Ud(x1, p2)], \
             content(press_release) ~= p1]"
        );
        let wide = cands
            .iter()
            .find(|c| c.scope == Scope::Wide && c.file.0 == "p1")
            .unwrap();
        let bx = build_representation(&sk, wide, &m, &lex).unwrap();
        assert_eq!(
            bx.to_string(),
            "[p1 | p1 : content(press_release) + \
             [x1 x2 p2 | team-in-italy(x1), agreement(x2), make(s, x2), \
             p2 : content(x2) + [ | play-for(s, x1)], content(x2) ~= p2], \
             content(press_release) ~= p1, \
             presup [plan(press_release)], presup content(press_release) ~= p1, \
             Ud(x1, p1)]"
        );
    }

    const BELIEF_MODEL: &str = "
        worlds e3 e4;
        individuals solange claude speaker actor_m actor_n;
        const s = solange;
        pred person/1 : e3 {solange claude}, e4 {solange claude};
        pred member-of-cast/1 : e3 {actor_m actor_n}, e4 {actor_m actor_n};
        pred likes/2 : e3 {(solange actor_n) (claude actor_n)},
                       e4 {(solange actor_n) (claude actor_n)};
        source claude : belief-holder content {e3 e4};
        source speaker : belief-holder content {e3 e4};
    ";

    #[test]
    fn outer_quantifier_forces_maximal_scope() {
        let lex = Lexicon::shipped();
        let m = Model::parse(BELIEF_MODEL).unwrap();
        let sk = Skeleton::parse(
            "skeleton { source speaker; spine [likes(z, HOLE)];
              indef a_certain member-of-cast x1; outer nobody person z; }",
        )
        .unwrap();
        let report = filter_candidates(&sk, &m, &lex).unwrap();
        assert_eq!(report.surviving_scopes(), BTreeSet::from([Scope::Widest]));
        let texts: Vec<String> = report.lines.iter().map(|l| l.to_string()).collect();
        assert_eq!(
            texts,
            vec![
                "widest/top/speaker,p1 => SURVIVES",
                "wide/top/speaker,p1 => FILTERED(∂ belief(speaker) ~= p1)",
            ]
        );
    }

    #[test]
    fn invalid_skeleton_combinations_are_rejected() {
        let lex = Lexicon::shipped();
        let m = team_model();
        let outer_and_embedded = Skeleton::parse(
            "skeleton { source press_release;
              embedded agreement x2 [agreement(x2)];
              spine [play-for(s, HOLE)]; indef a team-in-italy x1;
              outer nobody team-in-italy z; }",
        )
        .unwrap();
        assert!(matches!(
            outer_and_embedded.validate(&m, &lex),
            Err(Error::InvalidSkeleton(_))
        ));
        let idiom_and_participle = team_skeleton("a_certain", "specified");
        assert!(matches!(
            idiom_and_participle.validate(&m, &lex),
            Err(Error::InvalidSkeleton(_))
        ));
        let no_hole = Skeleton::parse(
            "skeleton { source press_release; spine [play-for(s, s)];
              indef a team-in-italy x1; }",
        )
        .unwrap();
        assert!(matches!(
            no_hole.validate(&m, &lex),
            Err(Error::InvalidSkeleton(_))
        ));
        let unknown_det = team_skeleton("the", "specified");
        assert!(matches!(
            unknown_det.validate(&m, &lex),
            Err(Error::UnknownLexeme(_))
        ));
    }

    #[test]
    fn summation_groups_witnesses_and_rejects_empty_sets() {
        let m = team_model();
        let file = File::from_proposition(&m.worlds);
        let group = Dref("X1".into());
        let witnesses = BTreeSet::from([
            Individual("milan".into()),
            Individual("roma".into()),
        ]);
        let grown = summation(&file, &group, &witnesses).unwrap();
        assert!(grown.domain().contains(&group));
        assert_eq!(grown.values_of(&group).unwrap().len(), 1);
        assert!(matches!(
            summation(&file, &group, &BTreeSet::new()),
            Err(Error::EmptyGroup)
        ));
    }
}
