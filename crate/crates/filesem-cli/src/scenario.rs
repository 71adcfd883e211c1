//! Scenario fixtures: small `key: value` files pairing a model with a
//! formula, a discourse box, or a skeleton, plus the expected outcome.
//!
//! Fixture paths are relative to the corpus root; `*.scenario` files are
//! collected non-recursively and run in file-name order.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use filesem::eval::{check_formula_truth, run_discourse, Env, Verdict};
use filesem::lexicon::Lexicon;
use filesem::model::{Individual, Model};
use filesem::parser::{parse_discourse, parse_formula};
use filesem::readings::{filter_candidates, Scope, Skeleton};
use filesem::state::File;
use filesem::{Error, Result};

/// What the scenario runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    /// Evaluate a formula, optionally against a named source's content
    /// instead of the whole logical space.
    Formula {
        path: PathBuf,
        against: Option<String>,
    },
    /// Run a discourse box from the initial context.
    Discourse(PathBuf),
    /// Enumerate and filter a skeleton's readings.
    Skeleton(PathBuf),
}

/// What the scenario expects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expectation {
    True,
    False,
    PresupFailure,
    /// The exact set of surviving scopes; empty means every candidate is
    /// filtered out.
    Readings(BTreeSet<Scope>),
}

impl Expectation {
    fn parse_verdict(word: &str) -> Option<Expectation> {
        match word {
            "true" => Some(Expectation::True),
            "false" => Some(Expectation::False),
            "presup-failure" => Some(Expectation::PresupFailure),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Expectation::True => "true".into(),
            Expectation::False => "false".into(),
            Expectation::PresupFailure => "presup-failure".into(),
            Expectation::Readings(scopes) => describe_scopes(scopes),
        }
    }
}

fn describe_scopes(scopes: &BTreeSet<Scope>) -> String {
    if scopes.is_empty() {
        "(none)".into()
    } else {
        let words: Vec<String> = scopes.iter().map(|s| s.to_string()).collect();
        words.join(" ")
    }
}

/// Where the expectation comes from: a reported judgment, a value computed
/// from the definitions, or the definitions themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Judgment,
    Computed,
    Definition,
}

impl Provenance {
    fn parse(word: &str) -> Option<Provenance> {
        match word {
            "judgment" => Some(Provenance::Judgment),
            "computed" => Some(Provenance::Computed),
            "definition" => Some(Provenance::Definition),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioFixture {
    pub name: String,
    /// Model path, relative to the corpus root.
    pub model: PathBuf,
    pub action: Action,
    pub expectation: Expectation,
    pub provenance: Provenance,
    pub note: Option<String>,
}

fn fixture_err(path: &Path, msg: &str) -> Error {
    Error::Input(format!("{}: {msg}", path.display()))
}

fn check_dup<T>(slot: &Option<T>, path: &Path, key: &str) -> Result<()> {
    if slot.is_some() {
        Err(fixture_err(path, &format!("duplicate key `{key}`")))
    } else {
        Ok(())
    }
}

impl ScenarioFixture {
    /// Parse one fixture file.  Lines are `key: value`; `#` starts a
    /// comment; blank lines are ignored.
    pub fn parse(path: &Path, text: &str) -> Result<ScenarioFixture> {
        let mut name = None;
        let mut model = None;
        let mut action = None;
        let mut against = None;
        let mut expectation = None;
        let mut provenance = None;
        let mut note = None;
        for raw in text.lines() {
            let line = match raw.find('#') {
                Some(k) => &raw[..k],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| fixture_err(path, &format!("expected `key: value`, got `{line}`")))?;
            let key = key.trim();
            let value = value.trim().to_string();
            match key {
                "name" => {
                    check_dup(&name, path, key)?;
                    name = Some(value);
                }
                "model" => {
                    check_dup(&model, path, key)?;
                    model = Some(PathBuf::from(value));
                }
                "formula" | "discourse" | "skeleton" => {
                    if action.is_some() {
                        return Err(fixture_err(path, "more than one action key"));
                    }
                    let p = PathBuf::from(value);
                    action = Some(match key {
                        "formula" => Action::Formula {
                            path: p,
                            against: None,
                        },
                        "discourse" => Action::Discourse(p),
                        _ => Action::Skeleton(p),
                    });
                }
                "against" => {
                    check_dup(&against, path, key)?;
                    against = Some(value);
                }
                "expect" => {
                    if expectation.is_some() {
                        return Err(fixture_err(path, "duplicate expectation"));
                    }
                    expectation = Some(Expectation::parse_verdict(&value).ok_or_else(|| {
                        fixture_err(path, &format!("unknown verdict `{value}`"))
                    })?);
                }
                "expect-readings" => {
                    if expectation.is_some() {
                        return Err(fixture_err(path, "duplicate expectation"));
                    }
                    let mut scopes = BTreeSet::new();
                    if value != "(none)" {
                        for word in value.split_whitespace() {
                            let scope = match word {
                                "widest" => Scope::Widest,
                                "wide" => Scope::Wide,
                                "narrow" => Scope::Narrow,
                                other => {
                                    return Err(fixture_err(
                                        path,
                                        &format!("unknown scope `{other}`"),
                                    ))
                                }
                            };
                            scopes.insert(scope);
                        }
                    }
                    expectation = Some(Expectation::Readings(scopes));
                }
                "source" => {
                    check_dup(&provenance, path, key)?;
                    provenance = Some(Provenance::parse(&value).ok_or_else(|| {
                        fixture_err(path, &format!("unknown provenance `{value}`"))
                    })?);
                }
                "note" => {
                    check_dup(&note, path, key)?;
                    note = Some(value);
                }
                other => return Err(fixture_err(path, &format!("unknown key `{other}`"))),
            }
        }
        let mut action =
            action.ok_or_else(|| fixture_err(path, "missing formula/discourse/skeleton"))?;
        if let Some(src) = against {
            match &mut action {
                Action::Formula { against, .. } => *against = Some(src),
                _ => return Err(fixture_err(path, "`against` only applies to formulas")),
            }
        }
        let expectation = match (&action, expectation) {
            (_, None) => return Err(fixture_err(path, "missing expectation")),
            (Action::Skeleton(_), Some(e @ Expectation::Readings(_))) => e,
            (Action::Skeleton(_), Some(_)) => {
                return Err(fixture_err(path, "skeletons take `expect-readings`"))
            }
            (_, Some(Expectation::Readings(_))) => {
                return Err(fixture_err(path, "`expect-readings` needs a skeleton"))
            }
            (_, Some(e)) => e,
        };
        Ok(ScenarioFixture {
            name: name.ok_or_else(|| fixture_err(path, "missing name"))?,
            model: model.ok_or_else(|| fixture_err(path, "missing model"))?,
            action,
            expectation,
            provenance: provenance.ok_or_else(|| fixture_err(path, "missing source"))?,
            note,
        })
    }
}

/// Load every `*.scenario` file directly under `root`, in file-name order.
pub fn load_corpus(root: &Path) -> Result<Vec<ScenarioFixture>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(root)
        .map_err(|e| Error::Input(format!("{}: {e}", root.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "scenario"))
        .collect();
    paths.sort();
    let mut fixtures = Vec::new();
    for p in paths {
        let text = fs::read_to_string(&p).map_err(|e| Error::Input(format!("{}: {e}", p.display())))?;
        fixtures.push(ScenarioFixture::parse(&p, &text)?);
    }
    Ok(fixtures)
}

fn read_rel(root: &Path, rel: &Path) -> Result<String> {
    let full = root.join(rel);
    fs::read_to_string(&full).map_err(|e| Error::Input(format!("{}: {e}", full.display())))
}

/// The result of running one fixture.
#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub name: String,
    pub passed: bool,
    /// `got ...` description, shown for failures and in verbose listings.
    pub got: String,
}

/// Run one fixture against its model; paths resolve relative to `root`.
pub fn run_scenario(fx: &ScenarioFixture, root: &Path) -> Result<ScenarioOutcome> {
    let model = Model::parse(&read_rel(root, &fx.model)?)?;
    let got = match &fx.action {
        Action::Formula { path, against } => {
            let formula = parse_formula(&read_rel(root, path)?)?;
            let context = match against {
                Some(src) => {
                    File::from_proposition(model.content_of(&Individual(src.clone()))?)
                }
                None => File::from_proposition(&model.worlds),
            };
            verdict_expectation(&check_formula_truth(&context, &formula, &model)?)
        }
        Action::Discourse(path) => {
            let bx = parse_discourse(&read_rel(root, path)?)?;
            verdict_expectation(&run_discourse(&bx, &model, Env::new(), None)?.verdict())
        }
        Action::Skeleton(path) => {
            let sk = Skeleton::parse(&read_rel(root, path)?)?;
            let report = filter_candidates(&sk, &model, &Lexicon::shipped())?;
            Expectation::Readings(report.surviving_scopes())
        }
    };
    Ok(ScenarioOutcome {
        name: fx.name.clone(),
        passed: got == fx.expectation,
        got: got.describe(),
    })
}

fn verdict_expectation(v: &Verdict) -> Expectation {
    match v {
        Verdict::True => Expectation::True,
        Verdict::False { .. } => Expectation::False,
        Verdict::PresupFailure(_) => Expectation::PresupFailure,
    }
}
