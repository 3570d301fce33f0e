//! Violation reports shared by the validators.

use std::fmt;

use crate::set::BitSet;

/// One named component of a witness, already rendered with ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Part {
    pub name: &'static str,
    pub value: String,
}

/// A violated condition together with its minimal witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub condition: &'static str,
    pub witness: Vec<Part>,
}

impl Violation {
    pub fn get(&self, name: &str) -> Option<&str> {
        self.witness
            .iter()
            .find(|p| p.name == name)
            .map(|p| p.value.as_str())
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.condition)?;
        for p in &self.witness {
            write!(f, " {}={}", p.name, p.value)?;
        }
        Ok(())
    }
}

/// A witness under construction. Components are pushed in order; the sort
/// key is the total size of the set components followed by the components
/// themselves, compared lexicographically.
#[derive(Debug, Clone, Default)]
pub struct Candidate {
    size: usize,
    key: Vec<Vec<usize>>,
    parts: Vec<(&'static str, Item)>,
}

#[derive(Debug, Clone)]
enum Item {
    Token(usize, usize),
    Set(BitSet, usize),
}

impl Candidate {
    pub fn new() -> Self {
        Self::default()
    }

    /// A single element, drawn from the carrier with the given slot.
    pub fn token(mut self, name: &'static str, slot: usize, x: usize) -> Self {
        self.key.push(vec![x]);
        self.parts.push((name, Item::Token(x, slot)));
        self
    }

    /// A set of elements of the carrier with the given slot.
    pub fn set(mut self, name: &'static str, slot: usize, s: BitSet) -> Self {
        self.size += s.len();
        self.key.push(s.iter().collect());
        self.parts.push((name, Item::Set(s, slot)));
        self
    }

    fn sort_key(&self) -> (usize, &[Vec<usize>]) {
        (self.size, &self.key)
    }

    /// Render against the id lists, indexed by slot.
    pub fn render(&self, condition: &'static str, carriers: &[&[String]]) -> Violation {
        let witness = self
            .parts
            .iter()
            .map(|(name, item)| Part {
                name,
                value: match *item {
                    Item::Token(x, slot) => carriers[slot][x].clone(),
                    Item::Set(s, slot) => compact_set(s, carriers[slot]),
                },
            })
            .collect();
        Violation { condition, witness }
    }
}

/// Keeps the least candidate seen so far.
#[derive(Debug, Default)]
pub struct Minimum {
    best: Option<Candidate>,
}

impl Minimum {
    pub fn offer(&mut self, c: Candidate) {
        match &self.best {
            Some(b) if b.sort_key() <= c.sort_key() => {}
            _ => self.best = Some(c),
        }
    }

    pub fn is_some(&self) -> bool {
        self.best.is_some()
    }

    pub fn into_inner(self) -> Option<Candidate> {
        self.best
    }
}

/// Render a set compactly for witness output: `{a,b}`, `{}` when empty.
pub fn compact_set(s: BitSet, names: &[String]) -> String {
    let inner: Vec<&str> = s.iter().map(|i| names[i].as_str()).collect();
    format!("{{{}}}", inner.join(","))
}
