//! Lexical entries for epistemic participles and determiners.
//!
//! A participle like *undisclosed* contributes a *stored formula*: a short
//! sequence of conditions (a sortal presupposition on the source, a
//! presupposed approximation between the source's content and a file, and an
//! identification-status assertion) that is held aside and appended at a
//! landing site chosen later by the readings engine.  Determiners are classed
//! by whether they introduce a discourse referent; one of them (`a_certain`)
//! is an attitude idiom that contributes a stored formula of its own.
//!
//! The lexicon is a data file (see `assets/default.lex`), not code, so tests
//! can add hypothetical entries.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use crate::logic::{Condition, FileBase, Formula, Term};
use crate::model::Sort;
use crate::state::{Dref, FileVar};
use crate::{Error, Result};

/// The shipped lexicon text, embedded so the engine works without a path.
pub const DEFAULT_LEXICON: &str = include_str!("../assets/default.lex");

/// Which identification status an entry asserts of its target referent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    /// All possibilities agree on the referent.
    Id,
    /// At least two possibilities disagree on the referent.
    Ud,
}

impl Polarity {
    fn parse(word: &str) -> Option<Polarity> {
        match word {
            "Id" => Some(Polarity::Id),
            "Ud" => Some(Polarity::Ud),
            _ => None,
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarity::Id => write!(f, "Id"),
            Polarity::Ud => write!(f, "Ud"),
        }
    }
}

/// A participle entry: polarity plus the sortal presupposition its source
/// antecedent must satisfy (empty set: unrestricted).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParticipleEntry {
    pub name: String,
    pub polarity: Polarity,
    pub sorts: BTreeSet<Sort>,
    /// The sort set is a guess beyond the attested table; such entries are
    /// usable but kept out of the shipped scenario expectations.
    pub extrapolated: bool,
}

impl ParticipleEntry {
    /// Fix the target referent; the source and file slots stay open until
    /// the readings engine resolves them.
    pub fn instantiate(&self, target: &Dref) -> StoredFormula {
        StoredFormula {
            polarity: self.polarity,
            sorts: self.sorts.clone(),
            target: target.clone(),
        }
    }
}

/// Whether a determiner contributes a discourse referent to its output
/// context or quantifies without one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeterminerClass {
    DrefIntroducing,
    Quantificational,
}

impl fmt::Display for DeterminerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeterminerClass::DrefIntroducing => write!(f, "dref-introducing"),
            DeterminerClass::Quantificational => write!(f, "quantificational"),
        }
    }
}

/// A determiner entry.  `idiom_sorts` is set only for the attitude idiom,
/// which behaves like an indefinite that additionally contributes an
/// identified-status stored formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterminerEntry {
    pub name: String,
    pub class: DeterminerClass,
    pub idiom_sorts: Option<BTreeSet<Sort>>,
}

impl DeterminerEntry {
    /// The idiom's stored formula, if this determiner carries one.
    pub fn instantiate(&self, target: &Dref) -> Option<StoredFormula> {
        self.idiom_sorts.as_ref().map(|sorts| StoredFormula {
            polarity: Polarity::Id,
            sorts: sorts.clone(),
            target: target.clone(),
        })
    }
}

/// The descriptive conditions an entry contributes, with the target referent
/// fixed and the source (`y`) and file (`q`) slots still open.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoredFormula {
    pub polarity: Polarity,
    pub sorts: BTreeSet<Sort>,
    pub target: Dref,
}

impl StoredFormula {
    /// Resolve the open slots and emit the conditions in their fixed order:
    /// presupposed sort restriction, presupposed approximation between the
    /// source's base and the file, then the identification-status assertion.
    /// The base is the source's content, except that belief holders
    /// contribute their belief state.
    pub fn conditions(&self, y: &Term, y_sort: Sort, q: &FileVar) -> Vec<Condition> {
        let mut out = Vec::new();
        if self.sorts.len() == 1 {
            let sort = self.sorts.iter().next().expect("nonempty");
            out.push(Condition::Partial(Box::new(Condition::Pred(
                Formula::atom(&sort.to_string(), vec![y.clone()]),
            ))));
        } else if !self.sorts.is_empty() {
            out.push(Condition::Partial(Box::new(Condition::SortIn {
                term: y.clone(),
                sorts: self.sorts.clone(),
            })));
        }
        let base = match y_sort {
            Sort::BeliefHolder => FileBase::Belief(y.clone()),
            Sort::Communication | Sort::Plan => FileBase::Content(y.clone()),
        };
        out.push(Condition::Partial(Box::new(Condition::Approx {
            base,
            var: q.clone(),
        })));
        out.push(match self.polarity {
            Polarity::Id => Condition::Id {
                dref: self.target.clone(),
                file: q.clone(),
            },
            Polarity::Ud => Condition::Ud {
                dref: self.target.clone(),
                file: q.clone(),
            },
        });
        out
    }
}

/// An immutable table of participle and determiner entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    participles: BTreeMap<String, ParticipleEntry>,
    determiners: BTreeMap<String, DeterminerEntry>,
}

impl Lexicon {
    /// The shipped entries.
    pub fn shipped() -> Lexicon {
        Lexicon::parse(DEFAULT_LEXICON).expect("shipped lexicon parses")
    }

    /// Parse lexicon text: one entry per line,
    /// `participle <name> polarity=<Id|Ud> sorts={...} [extrapolated]` or
    /// `determiner <name> class=<...> [idiom-sorts={...}]`; `#` comments.
    pub fn parse(text: &str) -> Result<Lexicon> {
        let mut lex = Lexicon {
            participles: BTreeMap::new(),
            determiners: BTreeMap::new(),
        };
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(k) => &raw[..k],
                None => raw,
            };
            let mut words = tokenize(line).into_iter().peekable();
            let Some(head) = words.next() else { continue };
            let fail = |msg: &str| Error::Lexicon(format!("line {}: {msg}", lineno + 1));
            match head.as_str() {
                "participle" => {
                    let name = words.next().ok_or_else(|| fail("missing name"))?;
                    let mut polarity = None;
                    let mut sorts = None;
                    let mut extrapolated = false;
                    for field in parse_fields(&mut words).map_err(|m| fail(&m))? {
                        match field {
                            Field::Flag(f) if f == "extrapolated" => extrapolated = true,
                            Field::Pair(k, v) if k == "polarity" => {
                                polarity = Some(
                                    Polarity::parse(&v)
                                        .ok_or_else(|| fail(&format!("bad polarity {v}")))?,
                                );
                            }
                            Field::Set(k, items) if k == "sorts" => {
                                sorts = Some(parse_sorts(&items).map_err(|m| fail(&m))?);
                            }
                            other => return Err(fail(&format!("unexpected field {other}"))),
                        }
                    }
                    let entry = ParticipleEntry {
                        name: name.clone(),
                        polarity: polarity.ok_or_else(|| fail("missing polarity"))?,
                        sorts: sorts.ok_or_else(|| fail("missing sorts"))?,
                        extrapolated,
                    };
                    if lex.participles.insert(name.clone(), entry).is_some() {
                        return Err(fail(&format!("duplicate participle {name}")));
                    }
                }
                "determiner" => {
                    let name = words.next().ok_or_else(|| fail("missing name"))?;
                    let mut class = None;
                    let mut idiom_sorts = None;
                    for field in parse_fields(&mut words).map_err(|m| fail(&m))? {
                        match field {
                            Field::Pair(k, v) if k == "class" => {
                                class = Some(match v.as_str() {
                                    "dref-introducing" => DeterminerClass::DrefIntroducing,
                                    "quantificational" => DeterminerClass::Quantificational,
                                    other => {
                                        return Err(fail(&format!("bad class {other}")))
                                    }
                                });
                            }
                            Field::Set(k, items) if k == "idiom-sorts" => {
                                idiom_sorts =
                                    Some(parse_sorts(&items).map_err(|m| fail(&m))?);
                            }
                            other => return Err(fail(&format!("unexpected field {other}"))),
                        }
                    }
                    let class = class.ok_or_else(|| fail("missing class"))?;
                    if class == DeterminerClass::Quantificational && idiom_sorts.is_some() {
                        return Err(fail("quantificational entries cannot carry idiom-sorts"));
                    }
                    let entry = DeterminerEntry {
                        name: name.clone(),
                        class,
                        idiom_sorts,
                    };
                    if lex.determiners.insert(name.clone(), entry).is_some() {
                        return Err(fail(&format!("duplicate determiner {name}")));
                    }
                }
                other => return Err(fail(&format!("unknown entry kind {other}"))),
            }
        }
        Ok(lex)
    }

    pub fn participle(&self, name: &str) -> Result<&ParticipleEntry> {
        self.participles
            .get(name)
            .ok_or_else(|| Error::UnknownLexeme(name.to_string()))
    }

    pub fn determiner(&self, name: &str) -> Result<&DeterminerEntry> {
        self.determiners
            .get(name)
            .ok_or_else(|| Error::UnknownLexeme(name.to_string()))
    }

    pub fn participles(&self) -> impl Iterator<Item = &ParticipleEntry> {
        self.participles.values()
    }

    pub fn determiners(&self) -> impl Iterator<Item = &DeterminerEntry> {
        self.determiners.values()
    }
}

impl Default for Lexicon {
    fn default() -> Lexicon {
        Lexicon::shipped()
    }
}

#[derive(Debug)]
enum Field {
    Flag(String),
    Pair(String, String),
    Set(String, Vec<String>),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Flag(w) => write!(f, "{w}"),
            Field::Pair(k, _) | Field::Set(k, _) => write!(f, "{k}"),
        }
    }
}

/// Split a line into words and the punctuation `=`, `{`, `}`.
fn tokenize(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut word = String::new();
    for c in line.chars() {
        match c {
            '=' | '{' | '}' => {
                if !word.is_empty() {
                    out.push(std::mem::take(&mut word));
                }
                out.push(c.to_string());
            }
            c if c.is_whitespace() || c == ',' => {
                if !word.is_empty() {
                    out.push(std::mem::take(&mut word));
                }
            }
            c => word.push(c),
        }
    }
    if !word.is_empty() {
        out.push(word);
    }
    out
}

fn parse_fields(
    words: &mut std::iter::Peekable<std::vec::IntoIter<String>>,
) -> std::result::Result<Vec<Field>, String> {
    let mut out = Vec::new();
    while let Some(key) = words.next() {
        if words.peek().map(String::as_str) != Some("=") {
            out.push(Field::Flag(key));
            continue;
        }
        words.next();
        match words.next().as_deref() {
            Some("{") => {
                let mut items = Vec::new();
                loop {
                    match words.next() {
                        Some(w) if w == "}" => break,
                        Some(w) => items.push(w),
                        None => return Err(format!("unterminated set for {key}")),
                    }
                }
                out.push(Field::Set(key, items));
            }
            Some(value) => out.push(Field::Pair(key, value.to_string())),
            None => return Err(format!("missing value for {key}")),
        }
    }
    Ok(out)
}

fn parse_sorts(items: &[String]) -> std::result::Result<BTreeSet<Sort>, String> {
    let mut out = BTreeSet::new();
    for item in items {
        let sort = Sort::parse(item).ok_or_else(|| format!("unknown sort {item}"))?;
        out.insert(sort);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dref(name: &str) -> Dref {
        Dref(name.to_string())
    }

    fn filevar(name: &str) -> FileVar {
        FileVar(name.to_string())
    }

    #[test]
    fn shipped_lexicon_has_the_expected_entries() {
        let lex = Lexicon::shipped();
        let undisclosed = lex.participle("undisclosed").unwrap();
        assert_eq!(undisclosed.polarity, Polarity::Ud);
        assert_eq!(
            undisclosed.sorts,
            BTreeSet::from([Sort::Communication])
        );
        assert!(!undisclosed.extrapolated);
        let undetermined = lex.participle("undetermined").unwrap();
        assert_eq!(undetermined.sorts, BTreeSet::from([Sort::Plan]));
        let specified = lex.participle("specified").unwrap();
        assert_eq!(specified.polarity, Polarity::Id);
        assert_eq!(
            specified.sorts,
            BTreeSet::from([Sort::Communication, Sort::Plan])
        );
        assert!(lex.participle("unknown").unwrap().extrapolated);
        let a = lex.determiner("a").unwrap();
        assert_eq!(a.class, DeterminerClass::DrefIntroducing);
        assert!(a.idiom_sorts.is_none());
        let most = lex.determiner("most").unwrap();
        assert_eq!(most.class, DeterminerClass::Quantificational);
        let idiom = lex.determiner("a_certain").unwrap();
        assert_eq!(idiom.class, DeterminerClass::DrefIntroducing);
        assert_eq!(
            idiom.idiom_sorts.clone().unwrap(),
            BTreeSet::from([Sort::Communication, Sort::Plan, Sort::BeliefHolder])
        );
        assert!(matches!(
            lex.participle("predicted"),
            Err(Error::UnknownLexeme(_))
        ));
        assert!(matches!(lex.determiner("the"), Err(Error::UnknownLexeme(_))));
    }

    #[test]
    fn single_sort_instantiation_orders_the_conditions() {
        let lex = Lexicon::shipped();
        let stored = lex
            .participle("undisclosed")
            .unwrap()
            .instantiate(&dref("x1"));
        let conds = stored.conditions(
            &Term::Const("press_release".into()),
            Sort::Communication,
            &filevar("p1"),
        );
        let texts: Vec<String> = conds.iter().map(|c| c.to_string()).collect();
        assert_eq!(
            texts,
            vec![
                "presup [communication(press_release)]",
                "presup content(press_release) ~= p1",
                "Ud(x1, p1)",
            ]
        );
    }

    #[test]
    fn multi_sort_instantiation_uses_a_sort_set_condition() {
        let lex = Lexicon::shipped();
        let stored = lex.participle("specified").unwrap().instantiate(&dref("x1"));
        let conds = stored.conditions(&Term::Dref(dref("x2")), Sort::Plan, &filevar("p2"));
        let texts: Vec<String> = conds.iter().map(|c| c.to_string()).collect();
        assert_eq!(
            texts,
            vec![
                "presup sort(x2) in {communication plan}",
                "presup content(x2) ~= p2",
                "Id(x1, p2)",
            ]
        );
    }

    #[test]
    fn belief_holders_anchor_to_their_belief_state() {
        let lex = Lexicon::shipped();
        let stored = lex
            .determiner("a_certain")
            .unwrap()
            .instantiate(&dref("x1"))
            .unwrap();
        assert_eq!(stored.polarity, Polarity::Id);
        let conds = stored.conditions(
            &Term::Const("claude".into()),
            Sort::BeliefHolder,
            &filevar("p1"),
        );
        let texts: Vec<String> = conds.iter().map(|c| c.to_string()).collect();
        assert_eq!(
            texts,
            vec![
                "presup sort(claude) in {communication plan belief-holder}",
                "presup belief(claude) ~= p1",
                "Id(x1, p1)",
            ]
        );
        assert!(lex.determiner("a").unwrap().instantiate(&dref("x1")).is_none());
    }

    #[test]
    fn parse_rejects_malformed_entries() {
        assert!(matches!(
            Lexicon::parse("participle foo polarity=Up sorts={plan}"),
            Err(Error::Lexicon(_))
        ));
        assert!(matches!(
            Lexicon::parse("participle foo polarity=Ud sorts={weather}"),
            Err(Error::Lexicon(_))
        ));
        assert!(matches!(
            Lexicon::parse("determiner every class=quantificational idiom-sorts={plan}"),
            Err(Error::Lexicon(_))
        ));
        assert!(matches!(
            Lexicon::parse("determiner a class=dref-introducing\ndeterminer a class=dref-introducing"),
            Err(Error::Lexicon(_))
        ));
        assert!(matches!(
            Lexicon::parse("verb run class=dref-introducing"),
            Err(Error::Lexicon(_))
        ));
        assert!(matches!(
            Lexicon::parse("participle foo polarity=Ud"),
            Err(Error::Lexicon(_))
        ));
    }

    #[test]
    fn comments_commas_and_blank_lines_are_tolerated() {
        let text = "# heading\n\nparticiple named polarity=Id sorts={communication, plan}\n";
        let lex = Lexicon::parse(text).unwrap();
        let entry = lex.participle("named").unwrap();
        assert_eq!(
            entry.sorts,
            BTreeSet::from([Sort::Communication, Sort::Plan])
        );
    }

    #[test]
    fn empty_sort_set_emits_no_sort_presupposition() {
        let lex = Lexicon::parse("participle loose polarity=Ud sorts={}").unwrap();
        let stored = lex.participle("loose").unwrap().instantiate(&dref("x1"));
        let conds = stored.conditions(
            &Term::Const("label".into()),
            Sort::Communication,
            &filevar("p1"),
        );
        let texts: Vec<String> = conds.iter().map(|c| c.to_string()).collect();
        assert_eq!(texts, vec!["presup content(label) ~= p1", "Ud(x1, p1)"]);
    }
}
