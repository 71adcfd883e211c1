//! Concrete syntax for formulas, conditions, and discourse boxes.
//!
//! The surface language is ASCII with Unicode aliases: `Ex`/`∃`, `all`/`∀`,
//! `dia`/`◇`, `box`/`□`, `not`/`¬`, `presup`/`∂`, `&`/`∧`, `!=`/`≠`,
//! `~=`/`≈`.  Words are classified by shape: referent names start with one
//! of `u v w x y z` (either case) followed only by digits or underscores;
//! file variables are `p` or `q` followed only by digits; anything else is a
//! constant or predicate name.  `#` starts a comment.

use std::collections::BTreeSet;

use crate::logic::{
    check_box, BoxDref, Condition, DiscourseBox, FileBase, Formula, ScopeSet, Term,
};
use crate::model::Sort;
use crate::state::{Dref, FileVar};
use crate::{Error, Result};

/// Whether a word has the shape of a referent name.
pub fn is_dref_name(word: &str) -> bool {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) if "uvwxyzUVWXYZ".contains(c) => {
            chars.all(|c| c.is_ascii_digit() || c == '_')
        }
        _ => false,
    }
}

/// Whether a word has the shape of a file-variable name.
pub fn is_filevar_name(word: &str) -> bool {
    let mut chars = word.chars();
    match chars.next() {
        Some('p') | Some('q') => chars.all(|c| c.is_ascii_digit()),
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    LBrack,
    RBrack,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Pipe,
    Comma,
    Colon,
    Plus,
    Eq,
    Neq,
    Approx,
    Amp,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Neq => "`!=`".into(),
            Tok::Approx => "`~=`".into(),
            Tok::Amp => "`&`".into(),
        }
    }
}

struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '-' || c == '_'
}

fn lex(text: &str) -> Result<Vec<Lexed>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = match line.find('#') {
            Some(k) => &line[..k],
            None => line,
        };
        let mut chars = line.char_indices().peekable();
        let mut colno = 0usize;
        while let Some((_, c)) = chars.next() {
            colno += 1;
            let here = (lineno + 1, colno);
            let push = |out: &mut Vec<Lexed>, tok: Tok| {
                out.push(Lexed {
                    tok,
                    line: here.0,
                    col: here.1,
                })
            };
            match c {
                c if c.is_whitespace() => {}
                '[' => push(&mut out, Tok::LBrack),
                ']' => push(&mut out, Tok::RBrack),
                '(' => push(&mut out, Tok::LParen),
                ')' => push(&mut out, Tok::RParen),
                '{' => push(&mut out, Tok::LBrace),
                '}' => push(&mut out, Tok::RBrace),
                '|' => push(&mut out, Tok::Pipe),
                ',' => push(&mut out, Tok::Comma),
                ':' => push(&mut out, Tok::Colon),
                '+' => push(&mut out, Tok::Plus),
                '&' | '∧' => push(&mut out, Tok::Amp),
                '=' => push(&mut out, Tok::Eq),
                '≠' => push(&mut out, Tok::Neq),
                '≈' => push(&mut out, Tok::Approx),
                '∃' => push(&mut out, Tok::Word("Ex".into())),
                '∀' => push(&mut out, Tok::Word("all".into())),
                '◇' => push(&mut out, Tok::Word("dia".into())),
                '□' => push(&mut out, Tok::Word("box".into())),
                '¬' => push(&mut out, Tok::Word("not".into())),
                '∂' => push(&mut out, Tok::Word("presup".into())),
                '!' | '~' => {
                    let want = c;
                    match chars.peek() {
                        Some((_, '=')) => {
                            chars.next();
                            colno += 1;
                            push(
                                &mut out,
                                if want == '!' { Tok::Neq } else { Tok::Approx },
                            );
                        }
                        _ => {
                            return Err(Error::Syntax {
                                line: here.0,
                                col: here.1,
                                msg: format!("`{want}` must be followed by `=`"),
                            })
                        }
                    }
                }
                c if is_word_char(c) => {
                    let mut word = String::new();
                    word.push(c);
                    while let Some(&(_, nc)) = chars.peek() {
                        if is_word_char(nc) {
                            word.push(nc);
                            chars.next();
                            colno += 1;
                        } else {
                            break;
                        }
                    }
                    push(&mut out, Tok::Word(word));
                }
                other => {
                    return Err(Error::Syntax {
                        line: here.0,
                        col: here.1,
                        msg: format!("unexpected character `{other}`"),
                    })
                }
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Parser> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|l| &l.tok)
    }

    fn peek_word(&self) -> Option<&str> {
        match self.peek() {
            Some(Tok::Word(w)) => Some(w.as_str()),
            _ => None,
        }
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|l| (l.line, l.col))
            .unwrap_or((1, 1))
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.here();
        Error::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn bump(&mut self) -> Option<&Tok> {
        let k = self.pos;
        self.pos += 1;
        self.toks.get(k).map(|l| &l.tok)
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.err(format!(
                "expected {}, found {}",
                want.describe(),
                t.describe()
            ))),
            None => Err(self.err(format!("expected {}, found end of input", want.describe()))),
        }
    }

    fn word(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            Some(t) => Err(self.err(format!("expected a name, found {}", t.describe()))),
            None => Err(self.err("expected a name, found end of input")),
        }
    }

    fn dref(&mut self) -> Result<Dref> {
        let (line, col) = self.here();
        let w = self.word()?;
        if is_dref_name(&w) {
            Ok(Dref(w))
        } else {
            Err(Error::Syntax {
                line,
                col,
                msg: format!("expected a referent name, found `{w}`"),
            })
        }
    }

    fn filevar(&mut self) -> Result<FileVar> {
        let (line, col) = self.here();
        let w = self.word()?;
        if is_filevar_name(&w) {
            Ok(FileVar(w))
        } else {
            Err(Error::Syntax {
                line,
                col,
                msg: format!("expected a file variable, found `{w}`"),
            })
        }
    }

    fn term(&mut self) -> Result<Term> {
        let (line, col) = self.here();
        let w = self.word()?;
        if is_dref_name(&w) {
            Ok(Term::Dref(Dref(w)))
        } else if is_filevar_name(&w) {
            Err(Error::Syntax {
                line,
                col,
                msg: format!("file variable `{w}` used in term position"),
            })
        } else {
            Ok(Term::Const(w))
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut parts = vec![self.unary()?];
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            parts.push(self.unary()?);
        }
        Ok(crate::logic::conjoin(parts).expect("at least one conjunct"))
    }

    fn bracketed_formula(&mut self) -> Result<Formula> {
        self.expect(Tok::LBrack)?;
        let f = self.formula()?;
        self.expect(Tok::RBrack)?;
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::LBrack) => self.bracketed_formula(),
            Some(Tok::Word(w)) => match w.as_str() {
                "Ex" => {
                    self.pos += 1;
                    let x = self.dref()?;
                    Ok(Formula::Exists(x, Box::new(self.unary()?)))
                }
                "all" => {
                    self.pos += 1;
                    let x = self.dref()?;
                    Ok(Formula::Forall(x, Box::new(self.unary()?)))
                }
                "dia" => {
                    self.pos += 1;
                    Ok(Formula::Diamond(Box::new(self.bracketed_formula()?)))
                }
                "box" => {
                    self.pos += 1;
                    Ok(Formula::Nec(Box::new(self.bracketed_formula()?)))
                }
                "not" => {
                    self.pos += 1;
                    Ok(Formula::Not(Box::new(self.bracketed_formula()?)))
                }
                "presup" => {
                    self.pos += 1;
                    Ok(Formula::Partial(Box::new(self.bracketed_formula()?)))
                }
                _ => self.atom_or_equation(),
            },
            Some(t) => Err(self.err(format!("expected a formula, found {}", t.describe()))),
            None => Err(self.err("expected a formula, found end of input")),
        }
    }

    fn atom_or_equation(&mut self) -> Result<Formula> {
        if self.peek_at(1) == Some(&Tok::LParen) {
            let (line, col) = self.here();
            let pred = self.word()?;
            if is_dref_name(&pred) || is_filevar_name(&pred) {
                return Err(Error::Syntax {
                    line,
                    col,
                    msg: format!("`{pred}` cannot be used as a predicate"),
                });
            }
            self.expect(Tok::LParen)?;
            let mut args = Vec::new();
            if self.peek() != Some(&Tok::RParen) {
                args.push(self.term()?);
                while self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    args.push(self.term()?);
                }
            }
            self.expect(Tok::RParen)?;
            Ok(Formula::Atom { pred, args })
        } else {
            let lhs = self.term()?;
            match self.bump() {
                Some(Tok::Eq) => Ok(Formula::Eq(lhs, self.term()?)),
                Some(Tok::Neq) => Ok(Formula::Neq(lhs, self.term()?)),
                Some(t) => {
                    let t = t.describe();
                    Err(self.err(format!("expected `=` or `!=` after a term, found {t}")))
                }
                None => Err(self.err("expected `=` or `!=` after a term")),
            }
        }
    }

    fn file_base(&mut self) -> Result<FileBase> {
        match self.peek_word() {
            Some("content") if self.peek_at(1) == Some(&Tok::LParen) => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(FileBase::Content(t))
            }
            Some("belief") if self.peek_at(1) == Some(&Tok::LParen) => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(FileBase::Belief(t))
            }
            _ => Ok(FileBase::Var(self.filevar()?)),
        }
    }

    fn condition(&mut self) -> Result<Condition> {
        let head = self.peek_word().map(str::to_string);
        match head.as_deref() {
            Some("presup") => {
                self.pos += 1;
                if self.peek() == Some(&Tok::LBrack) {
                    let f = self.bracketed_formula()?;
                    Ok(Condition::Partial(Box::new(Condition::Pred(f))))
                } else {
                    Ok(Condition::Partial(Box::new(self.condition()?)))
                }
            }
            Some(w @ ("Id" | "Ud")) if self.peek_at(1) == Some(&Tok::LParen) => {
                let identified = w == "Id";
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let dref = self.dref()?;
                self.expect(Tok::Comma)?;
                let file = self.filevar()?;
                self.expect(Tok::RParen)?;
                Ok(if identified {
                    Condition::Id { dref, file }
                } else {
                    Condition::Ud { dref, file }
                })
            }
            Some("sort") if self.peek_at(1) == Some(&Tok::LParen) => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let term = self.term()?;
                self.expect(Tok::RParen)?;
                let kw = self.word()?;
                if kw != "in" {
                    return Err(self.err(format!("expected `in`, found `{kw}`")));
                }
                self.expect(Tok::LBrace)?;
                let mut sorts = BTreeSet::new();
                while self.peek() != Some(&Tok::RBrace) {
                    let (line, col) = self.here();
                    let name = self.word()?;
                    let sort = Sort::parse(&name).ok_or(Error::Syntax {
                        line,
                        col,
                        msg: format!("unknown sort `{name}`"),
                    })?;
                    sorts.insert(sort);
                }
                self.expect(Tok::RBrace)?;
                Ok(Condition::SortIn { term, sorts })
            }
            Some("quant") => {
                self.pos += 1;
                let det = self.word()?;
                let var = self.dref()?;
                let restrictor = Box::new(self.bracketed_formula()?);
                let spine = Box::new(self.bracketed_formula()?);
                Ok(Condition::GenQ {
                    det,
                    var,
                    restrictor,
                    spine,
                })
            }
            Some(w) if is_filevar_name(w) => match self.peek_at(1) {
                Some(Tok::Colon) => {
                    let var = self.filevar()?;
                    self.expect(Tok::Colon)?;
                    let base = self.file_base()?;
                    self.expect(Tok::Plus)?;
                    let increment = self.discourse_box()?;
                    Ok(Condition::FileDef {
                        var,
                        base,
                        increment,
                    })
                }
                Some(Tok::Approx) => {
                    let base = FileBase::Var(self.filevar()?);
                    self.expect(Tok::Approx)?;
                    let var = self.filevar()?;
                    Ok(Condition::Approx { base, var })
                }
                _ => Err(self.err(format!("file variable `{w}` used in term position"))),
            },
            Some(w @ ("content" | "belief")) if self.peek_at(1) == Some(&Tok::LParen) => {
                let base = self.file_base()?;
                if self.peek() == Some(&Tok::Approx) {
                    self.pos += 1;
                    let var = self.filevar()?;
                    Ok(Condition::Approx { base, var })
                } else {
                    Err(self.err(format!("expected `~=` after {w}(…)")))
                }
            }
            Some(w)
                if is_dref_name(w)
                    && self.peek_at(1) == Some(&Tok::Eq)
                    && self.peek_at(2) == Some(&Tok::Word("sum".into())) =>
            {
                let group = self.dref()?;
                self.expect(Tok::Eq)?;
                self.pos += 1; // `sum`
                let var = self.dref()?;
                let body = Box::new(self.bracketed_formula()?);
                Ok(Condition::Sum { group, var, body })
            }
            _ => Ok(Condition::Pred(self.formula()?)),
        }
    }

    fn discourse_box(&mut self) -> Result<DiscourseBox> {
        self.expect(Tok::LBrack)?;
        let mut drefs = Vec::new();
        while self.peek() != Some(&Tok::Pipe) {
            let (line, col) = self.here();
            let w = self.word().map_err(|_| Error::Syntax {
                line,
                col,
                msg: "expected a referent name or `|` in the box row".into(),
            })?;
            if is_dref_name(&w) {
                drefs.push(BoxDref::Indiv(Dref(w)));
            } else if is_filevar_name(&w) {
                drefs.push(BoxDref::File(FileVar(w)));
            } else {
                return Err(Error::Syntax {
                    line,
                    col,
                    msg: format!("`{w}` is neither a referent nor a file variable"),
                });
            }
        }
        self.expect(Tok::Pipe)?;
        let mut conditions = Vec::new();
        if self.peek() != Some(&Tok::RBrack) {
            conditions.push(self.condition()?);
            while self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
                conditions.push(self.condition()?);
            }
        }
        self.expect(Tok::RBrack)?;
        Ok(DiscourseBox { drefs, conditions })
    }

    fn finish(&self) -> Result<()> {
        if let Some(t) = self.peek() {
            Err(self.err(format!("unexpected trailing {}", t.describe())))
        } else {
            Ok(())
        }
    }
}

/// Parse a formula.  Referents may be free (they can be supplied by the
/// state the formula is evaluated against).
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parse a discourse box without any scope checking.
pub fn parse_box(text: &str) -> Result<DiscourseBox> {
    let mut p = Parser::new(text)?;
    let bx = p.discourse_box()?;
    p.finish()?;
    Ok(bx)
}

/// Parse a top-level discourse box and check its binding discipline.
pub fn parse_discourse(text: &str) -> Result<DiscourseBox> {
    let bx = parse_box(text)?;
    check_box(&bx, &ScopeSet::default())?;
    Ok(bx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_shapes() {
        for w in ["x1", "y", "z", "X1", "u_2", "w9"] {
            assert!(is_dref_name(w), "{w}");
        }
        for w in ["solange", "undetermined", "x1a", "press_release", "sparta"] {
            assert!(!is_dref_name(w), "{w}");
        }
        for w in ["p", "q", "p1", "q12"] {
            assert!(is_filevar_name(w), "{w}");
        }
        for w in ["plan", "press_release", "p_1", "P1"] {
            assert!(!is_filevar_name(w), "{w}");
        }
    }

    #[test]
    fn quantifier_body_is_one_unary() {
        let f = parse_formula(
            "Ex x3 [hotel(x3) & stayin(s, x3)] & all y dia [y != x3]",
        )
        .unwrap();
        match &f {
            Formula::And(lhs, rhs) => {
                assert!(matches!(**lhs, Formula::Exists(..)));
                assert!(matches!(**rhs, Formula::Forall(..)));
            }
            other => panic!("expected a conjunction, got {other}"),
        }
    }

    #[test]
    fn display_reparses_to_the_same_string() {
        let texts = [
            "Ex x3 [hotel(x3) & stayin(s, x3)] & all y [dia [y != x3]]",
            "Ex x3 [hotel(x3) & stayin(s, x3)] & Ex y [box [y = x3]]",
            "not [Ex z [member(z) & bribe(s, z)]]",
            "presup [team-in-italy(x1)]",
            "all y [dia [y != x1] & y = y]",
            "all y dia [y != x1]",
        ];
        for text in texts {
            let f = parse_formula(text).unwrap();
            let canonical = f.to_string();
            assert_eq!(parse_formula(&canonical).unwrap(), f);
            assert_eq!(parse_formula(&canonical).unwrap().to_string(), canonical);
        }
    }

    #[test]
    fn unicode_aliases_parse_to_the_same_tree() {
        let ascii = parse_formula("Ex y box [y = x3] & not [a = b]").unwrap();
        let fancy = parse_formula("∃ y □ [y = x3] ∧ ¬ [a = b]").unwrap();
        assert_eq!(ascii, fancy);
        let a = parse_formula("dia [x1 != roma]").unwrap();
        let b = parse_formula("◇ [x1 ≠ roma]").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn file_variables_are_not_terms() {
        assert!(matches!(
            parse_formula("hotel(p)"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_formula("p = x1"),
            Err(Error::Syntax { .. })
        ));
    }

    const MEMO: &str = "[p | p : content(m2) + [x3 | hotel(x3), stayin(s, x3)], \
                        content(m2) ~= p, Ud(x3, p)]";

    #[test]
    fn boxes_round_trip_through_display() {
        let bx = parse_discourse(MEMO).unwrap();
        assert_eq!(bx.to_string(), MEMO);
        assert_eq!(parse_discourse(&bx.to_string()).unwrap(), bx);
    }

    #[test]
    fn empty_box_and_empty_row_parse() {
        let bx = parse_discourse("[ | ]").unwrap();
        assert!(bx.drefs.is_empty() && bx.conditions.is_empty());
        let bx = parse_discourse("[ | colbert = colbert]").unwrap();
        assert_eq!(bx.conditions.len(), 1);
    }

    #[test]
    fn conditions_with_inner_commas_split_correctly() {
        let bx = parse_discourse(
            "[x1 x2 | person(x1), likes(x1, x2), sort(x2) in {communication plan}]",
        )
        .unwrap();
        assert_eq!(bx.conditions.len(), 3);
        assert!(matches!(bx.conditions[2], Condition::SortIn { .. }));
    }

    #[test]
    fn summation_and_quantifier_conditions_parse() {
        let bx = parse_discourse(
            "[p1 | p1 : content(story) + [ | X = sum z [member(z) & bribe(s, z)]], \
             content(story) ~= p1, Id(X, p1)]",
        )
        .unwrap();
        assert_eq!(bx.to_string().matches("sum").count(), 1);
        let q = parse_discourse(
            "[ | quant most x1 [team-in-italy(x1)] [play-for(s, x1)]]",
        )
        .unwrap();
        assert!(matches!(q.conditions[0], Condition::GenQ { .. }));
    }

    #[test]
    fn presupposed_conditions_parse_in_both_shapes() {
        let bx = parse_discourse(
            "[ | presup [team-in-italy(roma)], presup sort(agreement) in {plan}]",
        )
        .unwrap();
        assert!(matches!(bx.conditions[0], Condition::Partial(_)));
        assert!(matches!(bx.conditions[1], Condition::Partial(_)));
        let sym = parse_discourse("[ | ∂ [team-in-italy(roma)]]").unwrap();
        assert_eq!(sym.conditions.len(), 1);
    }

    #[test]
    fn discourse_parsing_runs_scope_checks() {
        assert!(matches!(
            parse_discourse("[x1 | hotel(x2)]"),
            Err(Error::UnboundDref(_))
        ));
        assert!(matches!(
            parse_discourse("[p | content(m2) ~= p]"),
            Err(Error::UnboundFileVar(_))
        ));
        assert!(matches!(
            parse_discourse("[p | Ud(x1, p)]"),
            Err(Error::UnboundFileVar(_))
        ));
        assert!(matches!(
            parse_discourse("[ | q ~= p]"),
            Err(Error::UnboundFileVar(_))
        ));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_formula("hotel(x1) &\n  dia y != x1") {
            Err(Error::Syntax { line, col, .. }) => {
                assert_eq!(line, 2);
                assert!(col >= 3);
            }
            other => panic!("expected a syntax error, got {other:?}"),
        }
    }
}
