//! Finite intensional models: worlds, individuals, predicates, and attitude
//! sources whose content is a set of worlds.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::{Error, Result};

/// A possible world, named.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct World(pub String);

impl fmt::Display for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An individual in the model's universe, named.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Individual(pub String);

impl fmt::Display for Individual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A value a discourse referent can take: a single individual or a plural
/// group of individuals (the result of summation).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Atom(Individual),
    Group(BTreeSet<Individual>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Atom(i) => write!(f, "{i}"),
            Value::Group(g) => {
                write!(f, "{{")?;
                for (k, i) in g.iter().enumerate() {
                    if k > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{i}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// The sort of an attitude source: what kind of thing carries the content.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    /// Pieces of communication: documents, press releases, labels, stories.
    Communication,
    /// Plans, agreements, decisions.
    Plan,
    /// Holders of belief states.
    BeliefHolder,
}

impl Sort {
    pub fn parse(s: &str) -> Option<Sort> {
        match s {
            "communication" => Some(Sort::Communication),
            "plan" => Some(Sort::Plan),
            "belief-holder" => Some(Sort::BeliefHolder),
            _ => None,
        }
    }

    pub const ALL: [Sort; 3] = [Sort::Communication, Sort::Plan, Sort::BeliefHolder];
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Sort::Communication => "communication",
            Sort::Plan => "plan",
            Sort::BeliefHolder => "belief-holder",
        };
        write!(f, "{s}")
    }
}

/// An individual that carries propositional content: a document, a plan, or
/// a belief holder.  The content is the set of worlds compatible with what
/// the source says, settles, or believes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttitudeSource {
    pub sort: Sort,
    pub content: BTreeSet<World>,
}

/// A predicate: fixed arity, per-world extensions.  Worlds with an empty
/// extension are simply absent from the map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predicate {
    pub arity: usize,
    /// Whether tuples may contain group values.
    pub group_ok: bool,
    pub extensions: BTreeMap<World, BTreeSet<Vec<Value>>>,
}

/// A finite intensional model.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Model {
    pub worlds: BTreeSet<World>,
    pub individuals: BTreeSet<Individual>,
    /// Explicit constant aliases.  Any declared individual additionally
    /// denotes itself when used as a constant.
    pub constants: BTreeMap<String, Individual>,
    pub predicates: BTreeMap<String, Predicate>,
    pub sources: BTreeMap<Individual, AttitudeSource>,
}

/// Predicate names intercepted by the evaluator as sort tests; a model may
/// not declare them as ordinary predicates.
const RESERVED_PREDICATES: [&str; 3] = ["communication", "plan", "belief-holder"];

impl Model {
    /// All individuals, in name order.
    pub fn universe(&self) -> Vec<Individual> {
        self.individuals.iter().cloned().collect()
    }

    /// The denotation of a constant symbol: an explicit alias if one is
    /// declared, otherwise the individual of the same name.
    pub fn constant_value(&self, name: &str) -> Result<Individual> {
        if let Some(i) = self.constants.get(name) {
            return Ok(i.clone());
        }
        let ind = Individual(name.to_string());
        if self.individuals.contains(&ind) {
            Ok(ind)
        } else {
            Err(Error::UnknownConstant(name.to_string()))
        }
    }

    /// The propositional content of an attitude source.
    pub fn content_of(&self, ind: &Individual) -> Result<&BTreeSet<World>> {
        self.sources
            .get(ind)
            .map(|s| &s.content)
            .ok_or_else(|| Error::UnknownSource(ind.0.clone()))
    }

    /// The sort of an attitude source.
    pub fn sort_of(&self, ind: &Individual) -> Result<Sort> {
        self.sources
            .get(ind)
            .map(|s| s.sort)
            .ok_or_else(|| Error::UnknownSource(ind.0.clone()))
    }

    /// The extension of a predicate at a world (empty if unlisted).
    pub fn extension(&self, pred: &str, world: &World) -> Result<BTreeSet<Vec<Value>>> {
        let p = self
            .predicates
            .get(pred)
            .ok_or_else(|| Error::UnknownPredicate(pred.to_string()))?;
        Ok(p.extensions.get(world).cloned().unwrap_or_default())
    }

    /// Whether `pred` holds of `args` at `world`.
    pub fn holds(&self, pred: &str, world: &World, args: &[Value]) -> Result<bool> {
        let p = self
            .predicates
            .get(pred)
            .ok_or_else(|| Error::UnknownPredicate(pred.to_string()))?;
        if p.arity != args.len() {
            return Err(Error::Arity {
                pred: pred.to_string(),
                expected: p.arity,
                got: args.len(),
            });
        }
        if !self.worlds.contains(world) {
            return Err(Error::UnknownWorld(world.0.clone()));
        }
        Ok(p.extensions
            .get(world)
            .map(|ext| ext.contains(args))
            .unwrap_or(false))
    }

    /// Check internal consistency: every name mentioned anywhere is declared,
    /// arities line up, and no reserved predicate name is used.
    pub fn validate(&self) -> Result<()> {
        for (name, ind) in &self.constants {
            if !self.individuals.contains(ind) {
                return Err(Error::Model(format!(
                    "constant {name} denotes undeclared individual {ind}"
                )));
            }
        }
        for (name, pred) in &self.predicates {
            if RESERVED_PREDICATES.contains(&name.as_str()) {
                return Err(Error::Model(format!(
                    "predicate name {name} is reserved for sort tests"
                )));
            }
            for (world, ext) in &pred.extensions {
                if !self.worlds.contains(world) {
                    return Err(Error::Model(format!(
                        "predicate {name} lists undeclared world {world}"
                    )));
                }
                for tuple in ext {
                    if tuple.len() != pred.arity {
                        return Err(Error::Model(format!(
                            "predicate {name} has a tuple of length {} but arity {}",
                            tuple.len(),
                            pred.arity
                        )));
                    }
                    for value in tuple {
                        match value {
                            Value::Atom(i) => {
                                if !self.individuals.contains(i) {
                                    return Err(Error::Model(format!(
                                        "predicate {name} mentions undeclared individual {i}"
                                    )));
                                }
                            }
                            Value::Group(g) => {
                                if !pred.group_ok {
                                    return Err(Error::Model(format!(
                                        "predicate {name} is not group-capable but has a group value"
                                    )));
                                }
                                if g.is_empty() {
                                    return Err(Error::Model(format!(
                                        "predicate {name} has an empty group value"
                                    )));
                                }
                                for i in g {
                                    if !self.individuals.contains(i) {
                                        return Err(Error::Model(format!(
                                            "predicate {name} mentions undeclared individual {i}"
                                        )));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        for (ind, source) in &self.sources {
            if !self.individuals.contains(ind) {
                return Err(Error::Model(format!(
                    "source {ind} is not a declared individual"
                )));
            }
            for w in &source.content {
                if !self.worlds.contains(w) {
                    return Err(Error::Model(format!(
                        "source {ind} has undeclared world {w} in its content"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Parse a model from its text form.  See the module tests for the
    /// statement shapes; `#` starts a comment, statements end with `;`.
    pub fn parse(text: &str) -> Result<Model> {
        let tokens = tokenize(text);
        let mut pos = 0usize;
        let mut model = Model::default();
        while pos < tokens.len() {
            let (tok, line, col) = &tokens[pos];
            let err = |msg: &str| Error::Syntax {
                line: *line,
                col: *col,
                msg: msg.to_string(),
            };
            match tok.as_str() {
                "worlds" => {
                    pos += 1;
                    while pos < tokens.len() && tokens[pos].0 != ";" {
                        model.worlds.insert(World(expect_name(&tokens, &mut pos)?));
                    }
                    expect(&tokens, &mut pos, ";")?;
                }
                "individuals" => {
                    pos += 1;
                    while pos < tokens.len() && tokens[pos].0 != ";" {
                        model
                            .individuals
                            .insert(Individual(expect_name(&tokens, &mut pos)?));
                    }
                    expect(&tokens, &mut pos, ";")?;
                }
                "const" => {
                    pos += 1;
                    let name = expect_name(&tokens, &mut pos)?;
                    expect(&tokens, &mut pos, "=")?;
                    let target = expect_name(&tokens, &mut pos)?;
                    expect(&tokens, &mut pos, ";")?;
                    model.constants.insert(name, Individual(target));
                }
                "pred" => {
                    pos += 1;
                    let name = expect_name(&tokens, &mut pos)?;
                    expect(&tokens, &mut pos, "/")?;
                    let arity: usize = expect_name(&tokens, &mut pos)?
                        .parse()
                        .map_err(|_| err("arity must be a number"))?;
                    let group_ok = if peek(&tokens, pos) == Some("group") {
                        pos += 1;
                        true
                    } else {
                        false
                    };
                    let mut extensions: BTreeMap<World, BTreeSet<Vec<Value>>> = BTreeMap::new();
                    if peek(&tokens, pos) == Some(":") {
                        pos += 1;
                        loop {
                            let mut group_worlds = Vec::new();
                            while peek(&tokens, pos).is_some_and(|t| {
                                t != "{" && t != ";" && t != ","
                            }) {
                                group_worlds.push(World(expect_name(&tokens, &mut pos)?));
                            }
                            expect(&tokens, &mut pos, "{")?;
                            let mut tuples = BTreeSet::new();
                            while peek(&tokens, pos).is_some_and(|t| t != "}") {
                                tuples.insert(parse_tuple(&tokens, &mut pos, arity)?);
                            }
                            expect(&tokens, &mut pos, "}")?;
                            if !tuples.is_empty() {
                                for w in &group_worlds {
                                    extensions.insert(w.clone(), tuples.clone());
                                }
                            }
                            if peek(&tokens, pos) == Some(",") {
                                pos += 1;
                            } else {
                                break;
                            }
                        }
                    }
                    expect(&tokens, &mut pos, ";")?;
                    model.predicates.insert(
                        name,
                        Predicate {
                            arity,
                            group_ok,
                            extensions,
                        },
                    );
                }
                "source" => {
                    pos += 1;
                    let ind = Individual(expect_name(&tokens, &mut pos)?);
                    expect(&tokens, &mut pos, ":")?;
                    let sort_name = expect_name(&tokens, &mut pos)?;
                    let sort = Sort::parse(&sort_name)
                        .ok_or_else(|| err(&format!("unknown sort {sort_name}")))?;
                    expect(&tokens, &mut pos, "content")?;
                    expect(&tokens, &mut pos, "{")?;
                    let mut content = BTreeSet::new();
                    while peek(&tokens, pos).is_some_and(|t| t != "}") {
                        content.insert(World(expect_name(&tokens, &mut pos)?));
                    }
                    expect(&tokens, &mut pos, "}")?;
                    expect(&tokens, &mut pos, ";")?;
                    model.sources.insert(ind, AttitudeSource { sort, content });
                }
                other => {
                    return Err(err(&format!("unexpected statement keyword {other}")));
                }
            }
        }
        model.validate()?;
        Ok(model)
    }

    /// Render to the same text form `parse` accepts.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.worlds.is_empty() {
            out.push_str("worlds");
            for w in &self.worlds {
                out.push(' ');
                out.push_str(&w.0);
            }
            out.push_str(";\n");
        }
        if !self.individuals.is_empty() {
            out.push_str("individuals");
            for i in &self.individuals {
                out.push(' ');
                out.push_str(&i.0);
            }
            out.push_str(";\n");
        }
        for (name, ind) in &self.constants {
            out.push_str(&format!("const {name} = {ind};\n"));
        }
        for (name, pred) in &self.predicates {
            out.push_str(&format!("pred {name}/{}", pred.arity));
            if pred.group_ok {
                out.push_str(" group");
            }
            // Coalesce worlds that share an extension into one group.
            let mut by_ext: BTreeMap<&BTreeSet<Vec<Value>>, Vec<&World>> = BTreeMap::new();
            for (w, ext) in &pred.extensions {
                by_ext.entry(ext).or_default().push(w);
            }
            let mut groups: Vec<(&Vec<&World>, &BTreeSet<Vec<Value>>)> =
                by_ext.iter().map(|(ext, ws)| (ws, *ext)).collect();
            groups.sort_by_key(|(ws, _)| ws[0].clone());
            if !groups.is_empty() {
                out.push_str(" :");
                for (k, (ws, ext)) in groups.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    for w in ws.iter() {
                        out.push(' ');
                        out.push_str(&w.0);
                    }
                    out.push_str(" {");
                    for (j, tuple) in ext.iter().enumerate() {
                        if j > 0 {
                            out.push(' ');
                        }
                        out.push_str(&render_tuple(tuple, pred.arity));
                    }
                    out.push('}');
                }
            }
            out.push_str(";\n");
        }
        for (ind, source) in &self.sources {
            out.push_str(&format!("source {ind} : {} content {{", source.sort));
            for (k, w) in source.content.iter().enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                out.push_str(&w.0);
            }
            out.push_str("};\n");
        }
        out
    }
}

fn render_tuple(tuple: &[Value], arity: usize) -> String {
    if arity == 1 {
        tuple[0].to_string()
    } else {
        let parts: Vec<String> = tuple.iter().map(|v| v.to_string()).collect();
        format!("({})", parts.join(" "))
    }
}

type Tok = (String, usize, usize);

fn tokenize(text: &str) -> Vec<Tok> {
    let mut tokens = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = match line.find('#') {
            Some(k) => &line[..k],
            None => line,
        };
        let mut chars = line.char_indices().peekable();
        while let Some(&(col, c)) = chars.peek() {
            if c.is_whitespace() {
                chars.next();
            } else if "();:,={}/".contains(c) {
                tokens.push((c.to_string(), lineno + 1, col + 1));
                chars.next();
            } else {
                let start = col;
                let mut word = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_whitespace() || "();:,={}/".contains(c) {
                        break;
                    }
                    word.push(c);
                    chars.next();
                }
                tokens.push((word, lineno + 1, start + 1));
            }
        }
    }
    tokens
}

fn peek(tokens: &[Tok], pos: usize) -> Option<&str> {
    tokens.get(pos).map(|t| t.0.as_str())
}

fn expect(tokens: &[Tok], pos: &mut usize, want: &str) -> Result<()> {
    match tokens.get(*pos) {
        Some((tok, _, _)) if tok == want => {
            *pos += 1;
            Ok(())
        }
        Some((tok, line, col)) => Err(Error::Syntax {
            line: *line,
            col: *col,
            msg: format!("expected `{want}`, found `{tok}`"),
        }),
        None => Err(Error::Syntax {
            line: 0,
            col: 0,
            msg: format!("expected `{want}`, found end of input"),
        }),
    }
}

fn expect_name(tokens: &[Tok], pos: &mut usize) -> Result<String> {
    match tokens.get(*pos) {
        Some((tok, line, col)) => {
            if "();:,={}/".contains(tok.as_str()) {
                Err(Error::Syntax {
                    line: *line,
                    col: *col,
                    msg: format!("expected a name, found `{tok}`"),
                })
            } else {
                *pos += 1;
                Ok(tok.clone())
            }
        }
        None => Err(Error::Syntax {
            line: 0,
            col: 0,
            msg: "expected a name, found end of input".to_string(),
        }),
    }
}

fn parse_value(tokens: &[Tok], pos: &mut usize) -> Result<Value> {
    if peek(tokens, *pos) == Some("{") {
        *pos += 1;
        let mut group = BTreeSet::new();
        while peek(tokens, *pos).is_some_and(|t| t != "}") {
            group.insert(Individual(expect_name(tokens, pos)?));
        }
        expect(tokens, pos, "}")?;
        Ok(Value::Group(group))
    } else {
        Ok(Value::Atom(Individual(expect_name(tokens, pos)?)))
    }
}

fn parse_tuple(tokens: &[Tok], pos: &mut usize, arity: usize) -> Result<Vec<Value>> {
    if arity == 1 && peek(tokens, *pos) != Some("(") {
        return Ok(vec![parse_value(tokens, pos)?]);
    }
    expect(tokens, pos, "(")?;
    let mut tuple = Vec::new();
    while peek(tokens, *pos).is_some_and(|t| t != ")") {
        tuple.push(parse_value(tokens, pos)?);
    }
    expect(tokens, pos, ")")?;
    Ok(tuple)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "
        # two worlds, three individuals
        worlds w1 w2;
        individuals solange colbert days;
        const s = solange;
        pred hotel/1 : w1 w2 {colbert days};
        pred stayin/2 : w1 {(solange colbert)}, w2 {(solange days)};
        source colbert : communication content {w1};
    ";

    #[test]
    fn parses_and_validates() {
        let m = Model::parse(SAMPLE).unwrap();
        assert_eq!(m.worlds.len(), 2);
        assert_eq!(m.individuals.len(), 3);
        assert_eq!(m.constant_value("s").unwrap(), Individual("solange".into()));
        assert_eq!(
            m.constant_value("colbert").unwrap(),
            Individual("colbert".into())
        );
        assert!(m.constant_value("nobody_here").is_err());
    }

    #[test]
    fn holds_checks_extension_per_world() {
        let m = Model::parse(SAMPLE).unwrap();
        let s = Value::Atom(Individual("solange".into()));
        let colbert = Value::Atom(Individual("colbert".into()));
        let days = Value::Atom(Individual("days".into()));
        let w1 = World("w1".into());
        let w2 = World("w2".into());
        assert!(m.holds("stayin", &w1, &[s.clone(), colbert.clone()]).unwrap());
        assert!(!m.holds("stayin", &w2, &[s.clone(), colbert]).unwrap());
        assert!(m.holds("stayin", &w2, &[s.clone(), days]).unwrap());
        assert!(matches!(
            m.holds("stayin", &w1, &[s]),
            Err(Error::Arity { .. })
        ));
    }

    #[test]
    fn round_trips_through_text() {
        let m = Model::parse(SAMPLE).unwrap();
        let again = Model::parse(&m.to_text()).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn rejects_reserved_predicate_names() {
        let bad = "worlds w1; individuals a; pred plan/1 : w1 {a};";
        assert!(matches!(Model::parse(bad), Err(Error::Model(_))));
    }

    #[test]
    fn rejects_undeclared_names_in_extensions() {
        let bad = "worlds w1; individuals a; pred f/1 : w1 {b};";
        assert!(Model::parse(bad).is_err());
        let bad2 = "worlds w1; individuals a; pred f/1 : w9 {a};";
        assert!(Model::parse(bad2).is_err());
        let bad3 = "worlds w1; individuals a; source b : plan content {w1};";
        assert!(Model::parse(bad3).is_err());
    }

    #[test]
    fn group_values_require_group_capable_predicate() {
        let good = "worlds w1; individuals a b; pred f/1 group : w1 {{a b}};";
        let m = Model::parse(good).unwrap();
        let g = Value::Group([Individual("a".into()), Individual("b".into())].into());
        assert!(m.holds("f", &World("w1".into()), &[g]).unwrap());
        let bad = "worlds w1; individuals a b; pred f/1 : w1 {{a b}};";
        assert!(matches!(Model::parse(bad), Err(Error::Model(_))));
    }

    #[test]
    fn empty_extension_entries_are_dropped() {
        let text = "worlds w1 w2; individuals a; pred f/1 : w1 {a}, w2 {};";
        let m = Model::parse(text).unwrap();
        assert!(!m.predicates["f"].extensions.contains_key(&World("w2".into())));
        assert!(m.extension("f", &World("w2".into())).unwrap().is_empty());
    }
}
