//! The four commands: `eval`, `readings`, `scenarios`, and `oracle`.
//!
//! Every command builds its text output and the matching JSON value side by
//! side so `--json` carries exactly the fields the text shows.  All
//! iteration is over ordered collections and all randomness is seeded, so
//! repeated runs are byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use filesem::eval::{run_discourse, update, Env, Outcome, Verdict};
use filesem::lexicon::Lexicon;
use filesem::model::{Individual, Model};
use filesem::oracle::{equivalence_stats, reading_agreement};
use filesem::parser::{parse_discourse, parse_formula};
use filesem::readings::{filter_candidates, CandidateOutcome, Skeleton};
use filesem::state::File;
use filesem::{Error, Result};

use crate::scenario::{load_corpus, run_scenario};
use crate::{CmdOutput, EXIT_FAILURES, EXIT_INVALID};

fn invalid(e: &Error) -> CmdOutput {
    CmdOutput {
        text: format!("error: {e}"),
        json: json!({ "error": e.to_string() }),
        exit_code: EXIT_INVALID,
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<Model> {
    Model::parse(&read(path)?)
}

fn load_lexicon(path: &Option<PathBuf>) -> Result<Lexicon> {
    match path {
        Some(p) => Lexicon::parse(&read(p)?),
        None => Ok(Lexicon::shipped()),
    }
}

pub struct EvalArgs {
    pub model: PathBuf,
    pub discourse: Option<PathBuf>,
    pub formula: Option<PathBuf>,
    pub against: Option<String>,
    pub trace: bool,
}

/// Evaluate a discourse box or a bare formula.  Exit code encodes the
/// verdict: 0 true, 1 false, 2 presupposition failure.
pub fn cmd_eval(args: &EvalArgs) -> CmdOutput {
    match eval_inner(args) {
        Ok(out) => out,
        Err(e) => invalid(&e),
    }
}

fn eval_inner(args: &EvalArgs) -> Result<CmdOutput> {
    let model = load_model(&args.model)?;
    let (verdict, tables) = match (&args.discourse, &args.formula) {
        (Some(_), Some(_)) | (None, None) => {
            return Err(Error::Input(
                "pass exactly one of --discourse and --formula".into(),
            ))
        }
        (Some(path), None) => {
            if args.against.is_some() {
                return Err(Error::Input("--against only applies to --formula".into()));
            }
            let bx = parse_discourse(&read(path)?)?;
            let run = run_discourse(&bx, &model, Env::new(), None)?;
            let mut tables = vec![("context".to_string(), run.context.render_table())];
            for (var, file) in run.env.iter() {
                tables.push((var.0.clone(), file.render_table()));
            }
            (run.verdict(), tables)
        }
        (None, Some(path)) => {
            let formula = parse_formula(&read(path)?)?;
            let context = match &args.against {
                Some(src) => {
                    File::from_proposition(model.content_of(&Individual(src.clone()))?)
                }
                None => File::from_proposition(&model.worlds),
            };
            let (verdict, updated) = match update(&context, &formula, &model)? {
                Outcome::Proceed(f) => {
                    let v = if f.is_absurd() {
                        Verdict::False {
                            failed: vec![formula.to_string()],
                        }
                    } else {
                        Verdict::True
                    };
                    (v, f)
                }
                Outcome::PresupFailure(d) => {
                    let f = context.clone();
                    (Verdict::PresupFailure(d), f)
                }
            };
            (verdict, vec![("result".to_string(), updated.render_table())])
        }
    };

    let mut text = format!("verdict: {verdict}");
    let mut fields = serde_json::Map::new();
    fields.insert("verdict".into(), json!(verdict.to_string()));
    match &verdict {
        Verdict::True => {}
        Verdict::False { failed } => {
            for f in failed {
                write!(text, "\nfailed: {f}").unwrap();
            }
            fields.insert("failed".into(), json!(failed));
        }
        Verdict::PresupFailure(d) => {
            write!(text, "\nkind: {}", d.kind).unwrap();
            fields.insert("path".into(), json!(d.path));
            fields.insert("condition".into(), json!(d.condition));
            fields.insert("kind".into(), json!(d.kind.to_string()));
        }
    }
    if args.trace {
        let mut traced = serde_json::Map::new();
        for (name, table) in &tables {
            write!(text, "\n{name}:\n{table}").unwrap();
            traced.insert(name.clone(), json!(table));
        }
        fields.insert("trace".into(), Value::Object(traced));
    }
    let exit_code = match verdict {
        Verdict::True => 0,
        Verdict::False { .. } => 1,
        Verdict::PresupFailure(_) => 2,
    };
    Ok(CmdOutput {
        text,
        json: Value::Object(fields),
        exit_code,
    })
}

pub struct ReadingsArgs {
    pub model: PathBuf,
    pub skeleton: PathBuf,
    pub lexicon: Option<PathBuf>,
}

/// Enumerate, build, and filter a skeleton's readings.
pub fn cmd_readings(args: &ReadingsArgs) -> CmdOutput {
    match readings_inner(args) {
        Ok(out) => out,
        Err(e) => invalid(&e),
    }
}

fn readings_inner(args: &ReadingsArgs) -> Result<CmdOutput> {
    let model = load_model(&args.model)?;
    let lexicon = load_lexicon(&args.lexicon)?;
    let sk = Skeleton::parse(&read(&args.skeleton)?)?;
    let report = filter_candidates(&sk, &model, &lexicon)?;
    let mut text = String::new();
    let mut lines = Vec::new();
    for line in &report.lines {
        writeln!(text, "{line}").unwrap();
        let mut obj = serde_json::Map::new();
        obj.insert("candidate".into(), json!(line.candidate.to_string()));
        match &line.outcome {
            CandidateOutcome::Survives { true_on_model } => {
                obj.insert("outcome".into(), json!("survives"));
                obj.insert("true_on_model".into(), json!(true_on_model));
            }
            CandidateOutcome::Filtered(d) => {
                obj.insert("outcome".into(), json!("filtered"));
                obj.insert(
                    "diagnostic".into(),
                    json!(line.diagnostic().expect("filtered lines carry one")),
                );
                obj.insert("kind".into(), json!(d.kind.to_string()));
            }
        }
        lines.push(Value::Object(obj));
    }
    let scopes: Vec<String> = report
        .surviving_scopes()
        .iter()
        .map(|s| s.to_string())
        .collect();
    if scopes.is_empty() {
        write!(text, "scopes: (none)").unwrap();
    } else {
        write!(text, "scopes: {}", scopes.join(" ")).unwrap();
    }
    Ok(CmdOutput {
        text,
        json: json!({ "lines": lines, "scopes": scopes }),
        exit_code: 0,
    })
}

pub struct ScenariosArgs {
    pub corpus: PathBuf,
}

/// Run every scenario fixture in a corpus directory.
pub fn cmd_scenarios(args: &ScenariosArgs) -> CmdOutput {
    match scenarios_inner(args) {
        Ok(out) => out,
        Err(e) => invalid(&e),
    }
}

fn scenarios_inner(args: &ScenariosArgs) -> Result<CmdOutput> {
    let fixtures = load_corpus(&args.corpus)?;
    if fixtures.is_empty() {
        let text = format!(
            "warning: no scenarios found in {}",
            args.corpus.display()
        );
        return Ok(CmdOutput {
            json: json!({ "warning": text, "scenarios": [], "total": 0, "ok": 0, "failed": 0 }),
            text,
            exit_code: 0,
        });
    }
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut ok = 0usize;
    for fx in &fixtures {
        match run_scenario(fx, &args.corpus) {
            Ok(outcome) if outcome.passed => {
                ok += 1;
                writeln!(text, "{}: ok", outcome.name).unwrap();
                rows.push(json!({ "name": outcome.name, "status": "ok" }));
            }
            Ok(outcome) => {
                writeln!(
                    text,
                    "{}: FAIL expected {}, got {}",
                    outcome.name,
                    fx.expectation.describe(),
                    outcome.got
                )
                .unwrap();
                rows.push(json!({
                    "name": outcome.name,
                    "status": "fail",
                    "expected": fx.expectation.describe(),
                    "got": outcome.got,
                }));
            }
            Err(e) => {
                writeln!(text, "{}: ERROR {e}", fx.name).unwrap();
                rows.push(json!({ "name": fx.name, "status": "error", "error": e.to_string() }));
            }
        }
    }
    let failed = fixtures.len() - ok;
    write!(
        text,
        "summary: {} scenarios, {ok} ok, {failed} failed",
        fixtures.len()
    )
    .unwrap();
    Ok(CmdOutput {
        text,
        json: json!({
            "scenarios": rows,
            "total": fixtures.len(),
            "ok": ok,
            "failed": failed,
        }),
        exit_code: if failed == 0 { 0 } else { EXIT_FAILURES },
    })
}

pub struct OracleArgs {
    pub seed: u64,
    pub cases: usize,
    pub skeletons: usize,
}

/// Cross-check the engine against the independent oracles and print the
/// agreement table.
pub fn cmd_oracle(args: &OracleArgs) -> CmdOutput {
    match oracle_inner(args) {
        Ok(out) => out,
        Err(e) => invalid(&e),
    }
}

fn oracle_inner(args: &OracleArgs) -> Result<CmdOutput> {
    let stats = equivalence_stats(args.seed, args.cases)?;
    let lexicon = Lexicon::shipped();
    let readings_agree = reading_agreement(args.seed, args.skeletons, &lexicon)?;
    let rows = [
        ("id-direct-vs-formula", stats.cases, stats.id_agreements),
        ("ud-direct-vs-formula", stats.cases, stats.ud_agreements),
        ("reading-enumeration", args.skeletons, readings_agree),
    ];
    let mut text = format!("seed: {}\n", args.seed);
    writeln!(text, "{:<22} {:>6} {:>6}", "check", "cases", "agree").unwrap();
    let mut json_rows = Vec::new();
    let mut all_agree = true;
    for (check, cases, agree) in rows {
        writeln!(text, "{check:<22} {cases:>6} {agree:>6}").unwrap();
        json_rows.push(json!({ "check": check, "cases": cases, "agree": agree }));
        all_agree &= agree == cases;
    }
    write!(
        text,
        "agreement: {}",
        if all_agree { "total" } else { "BROKEN" }
    )
    .unwrap();
    Ok(CmdOutput {
        text,
        json: json!({
            "seed": args.seed,
            "rows": json_rows,
            "agreement": if all_agree { "total" } else { "BROKEN" },
        }),
        exit_code: if all_agree { 0 } else { EXIT_FAILURES },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus_root() -> PathBuf {
        PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../filesem/corpus"))
    }

    #[test]
    fn eval_exit_codes_follow_the_verdict() {
        let root = corpus_root();
        let base = EvalArgs {
            model: root.join("models/hotel.model"),
            discourse: Some(root.join("boxes/memo_ud_m2.box")),
            formula: None,
            against: None,
            trace: false,
        };
        assert_eq!(cmd_eval(&base).exit_code, 0);
        let false_case = EvalArgs {
            discourse: Some(root.join("boxes/memo_ud_m1.box")),
            ..base
        };
        assert_eq!(cmd_eval(&false_case).exit_code, 1);
        let presup_case = EvalArgs {
            discourse: Some(root.join("boxes/memo_unfamiliar.box")),
            ..false_case
        };
        let out = cmd_eval(&presup_case);
        assert_eq!(out.exit_code, 2);
        assert!(out.text.contains("kind: dref-domain"), "{}", out.text);
    }

    #[test]
    fn eval_formula_against_a_source() {
        let root = corpus_root();
        let out = cmd_eval(&EvalArgs {
            model: root.join("models/hotel.model"),
            discourse: None,
            formula: Some(root.join("formulas/hotel_open.fml")),
            against: Some("m2".into()),
            trace: true,
        });
        assert_eq!(out.exit_code, 0);
        assert!(out.text.starts_with("verdict: true\nresult:\n"), "{}", out.text);
        assert_eq!(out.json["verdict"], "true");
        assert!(out.json["trace"]["result"].is_string());
    }

    #[test]
    fn eval_rejects_bad_flag_combinations() {
        let root = corpus_root();
        let out = cmd_eval(&EvalArgs {
            model: root.join("models/hotel.model"),
            discourse: None,
            formula: None,
            against: None,
            trace: false,
        });
        assert_eq!(out.exit_code, EXIT_INVALID);
        assert!(out.text.starts_with("error: "));
    }

    #[test]
    fn readings_reports_lines_and_scopes() {
        let root = corpus_root();
        let out = cmd_readings(&ReadingsArgs {
            model: root.join("models/team.model"),
            skeleton: root.join("skeletons/team_undetermined.skel"),
            lexicon: None,
        });
        assert_eq!(out.exit_code, 0);
        assert!(out.text.ends_with("scopes: narrow"), "{}", out.text);
        assert_eq!(out.json["scopes"], json!(["narrow"]));
        let invalid = cmd_readings(&ReadingsArgs {
            model: root.join("models/team.model"),
            skeleton: root.join("models/team.model"),
            lexicon: None,
        });
        assert_eq!(invalid.exit_code, EXIT_INVALID);
    }

    #[test]
    fn scenarios_all_pass_and_empty_corpus_warns() {
        let out = cmd_scenarios(&ScenariosArgs {
            corpus: corpus_root(),
        });
        assert_eq!(out.exit_code, 0, "{}", out.text);
        assert!(out.text.contains("summary: "), "{}", out.text);
        assert_eq!(out.json["failed"], 0);

        let empty = corpus_root().join("models");
        let out = cmd_scenarios(&ScenariosArgs { corpus: empty });
        assert_eq!(out.exit_code, 0);
        assert!(out.text.starts_with("warning: no scenarios found"));
    }

    #[test]
    fn oracle_table_is_total_and_deterministic() {
        let args = OracleArgs {
            seed: 17,
            cases: 60,
            skeletons: 4,
        };
        let first = cmd_oracle(&args);
        let second = cmd_oracle(&args);
        assert_eq!(first.exit_code, 0, "{}", first.text);
        assert_eq!(first.text, second.text);
        assert_eq!(first.json, second.json);
        assert!(first.text.ends_with("agreement: total"), "{}", first.text);
    }
}
