//! Files: information states whose possibilities pair a variable assignment
//! with a world, together with the domain of discourse referents the
//! assignments are defined on.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::model::{Model, Value, World};
use crate::{Error, Result};

/// A discourse referent, named.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dref(pub String);

impl fmt::Display for Dref {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A variable ranging over files, named.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FileVar(pub String);

impl fmt::Display for FileVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One way things might be: an assignment of values to discourse referents,
/// paired with a world.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Possibility {
    pub assignment: BTreeMap<Dref, Value>,
    pub world: World,
}

impl Possibility {
    /// A copy of this possibility with `dref` additionally mapped to `value`.
    pub fn extended(&self, dref: &Dref, value: &Value) -> Possibility {
        let mut assignment = self.assignment.clone();
        assignment.insert(dref.clone(), value.clone());
        Possibility {
            assignment,
            world: self.world.clone(),
        }
    }

    /// Whether `other` extends this possibility: same world, and every
    /// mapping here is preserved there.
    pub fn extends(&self, other: &Possibility) -> bool {
        self.world == other.world
            && other
                .assignment
                .iter()
                .all(|(d, v)| self.assignment.get(d) == Some(v))
    }
}

/// An information state: a set of possibilities, all total over the same
/// domain of discourse referents.  The empty set of possibilities is the
/// absurd file.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct File {
    domain: BTreeSet<Dref>,
    possibilities: BTreeSet<Possibility>,
}

impl File {
    /// Build a file, checking that every assignment is total over `domain`.
    pub fn new(domain: BTreeSet<Dref>, possibilities: BTreeSet<Possibility>) -> Result<File> {
        for p in &possibilities {
            let keys: BTreeSet<Dref> = p.assignment.keys().cloned().collect();
            if keys != domain {
                return Err(Error::FileInvariant(format!(
                    "assignment domain {{{}}} does not match file domain {{{}}}",
                    join(&keys),
                    join(&domain)
                )));
            }
        }
        Ok(File {
            domain,
            possibilities,
        })
    }

    /// The absurd file over a given domain: no possibility is left open.
    pub fn absurd(domain: BTreeSet<Dref>) -> File {
        File {
            domain,
            possibilities: BTreeSet::new(),
        }
    }

    /// The minimal file carrying a bare proposition: empty domain, one
    /// possibility per world.
    pub fn from_proposition(worlds: &BTreeSet<World>) -> File {
        File {
            domain: BTreeSet::new(),
            possibilities: worlds
                .iter()
                .map(|w| Possibility {
                    assignment: BTreeMap::new(),
                    world: w.clone(),
                })
                .collect(),
        }
    }

    pub fn domain(&self) -> &BTreeSet<Dref> {
        &self.domain
    }

    pub fn possibilities(&self) -> &BTreeSet<Possibility> {
        &self.possibilities
    }

    pub fn is_absurd(&self) -> bool {
        self.possibilities.is_empty()
    }

    /// Add a fresh referent and let it range over the whole universe: each
    /// possibility splits into one copy per individual.
    pub fn introduce(&self, dref: &Dref, model: &Model) -> Result<File> {
        if self.domain.contains(dref) {
            return Err(Error::DuplicateDref(dref.0.clone()));
        }
        let mut domain = self.domain.clone();
        domain.insert(dref.clone());
        let mut possibilities = BTreeSet::new();
        for p in &self.possibilities {
            for ind in &model.individuals {
                possibilities.insert(p.extended(dref, &Value::Atom(ind.clone())));
            }
        }
        Ok(File {
            domain,
            possibilities,
        })
    }

    /// Add a fresh referent pinned to a single value in every possibility.
    pub fn extend_with(&self, dref: &Dref, value: &Value) -> Result<File> {
        if self.domain.contains(dref) {
            return Err(Error::DuplicateDref(dref.0.clone()));
        }
        let mut domain = self.domain.clone();
        domain.insert(dref.clone());
        let possibilities = self
            .possibilities
            .iter()
            .map(|p| p.extended(dref, value))
            .collect();
        Ok(File {
            domain,
            possibilities,
        })
    }

    /// Keep exactly the possibilities the test accepts.
    pub fn filter<F>(&self, mut test: F) -> Result<File>
    where
        F: FnMut(&Possibility) -> Result<bool>,
    {
        let mut possibilities = BTreeSet::new();
        for p in &self.possibilities {
            if test(p)? {
                possibilities.insert(p.clone());
            }
        }
        Ok(File {
            domain: self.domain.clone(),
            possibilities,
        })
    }

    /// The set of values a referent takes across the possibilities.
    pub fn values_of(&self, dref: &Dref) -> Result<BTreeSet<Value>> {
        if !self.domain.contains(dref) {
            return Err(Error::DrefNotInDomain(dref.0.clone()));
        }
        Ok(self
            .possibilities
            .iter()
            .map(|p| p.assignment[dref].clone())
            .collect())
    }

    /// Whether the file settles which individual the referent is: every
    /// possibility assigns it the same value.  Undefined on the absurd file.
    pub fn is_identified(&self, dref: &Dref) -> Result<bool> {
        if !self.domain.contains(dref) {
            return Err(Error::DrefNotInDomain(dref.0.clone()));
        }
        if self.is_absurd() {
            return Err(Error::AbsurdFile);
        }
        Ok(self.values_of(dref)?.len() == 1)
    }

    /// Whether the file leaves the referent open: from any possibility there
    /// is another that disagrees about its value.  Undefined on the absurd
    /// file.
    pub fn is_unidentified(&self, dref: &Dref) -> Result<bool> {
        if !self.domain.contains(dref) {
            return Err(Error::DrefNotInDomain(dref.0.clone()));
        }
        if self.is_absurd() {
            return Err(Error::AbsurdFile);
        }
        Ok(self.values_of(dref)?.len() >= 2)
    }

    /// The worlds still open in this file.
    pub fn world_projection(&self) -> BTreeSet<World> {
        self.possibilities.iter().map(|p| p.world.clone()).collect()
    }

    /// Whether the file's worldly information is exactly `proposition`:
    /// nothing less, nothing more.
    pub fn approximates(&self, proposition: &BTreeSet<World>) -> bool {
        self.world_projection() == *proposition
    }

    /// Union of two files over the same domain.
    pub fn union(&self, other: &File) -> Result<File> {
        if self.domain != other.domain {
            return Err(Error::FileInvariant(format!(
                "cannot union files with domains {{{}}} and {{{}}}",
                join(&self.domain),
                join(&other.domain)
            )));
        }
        Ok(File {
            domain: self.domain.clone(),
            possibilities: self
                .possibilities
                .union(&other.possibilities)
                .cloned()
                .collect(),
        })
    }

    /// Render the file as an aligned table, one row per possibility, one
    /// column per referent plus a final world column.
    pub fn render_table(&self) -> String {
        let mut headers: Vec<String> = self.domain.iter().map(|d| d.0.clone()).collect();
        headers.push("world".to_string());
        let mut rows: Vec<Vec<String>> = Vec::new();
        for p in &self.possibilities {
            let mut row: Vec<String> = self
                .domain
                .iter()
                .map(|d| p.assignment[d].to_string())
                .collect();
            row.push(p.world.0.clone());
            rows.push(row);
        }
        let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
        for row in &rows {
            for (k, cell) in row.iter().enumerate() {
                widths[k] = widths[k].max(cell.len());
            }
        }
        let render_row = |cells: &[String]| -> String {
            let mut line = String::from("|");
            for (k, cell) in cells.iter().enumerate() {
                line.push_str(&format!(" {:width$} |", cell, width = widths[k]));
            }
            line.push('\n');
            line
        };
        let mut out = render_row(&headers);
        let mut rule = String::from("|");
        for w in &widths {
            rule.push_str(&"-".repeat(w + 2));
            rule.push('|');
        }
        rule.push('\n');
        out.push_str(&rule);
        if rows.is_empty() {
            out.push_str("(no possibilities)\n");
        } else {
            for row in &rows {
                out.push_str(&render_row(row));
            }
        }
        out
    }
}

fn join(drefs: &BTreeSet<Dref>) -> String {
    drefs
        .iter()
        .map(|d| d.0.clone())
        .collect::<Vec<_>>()
        .join(" ")
}
