//! The line-oriented text format for all five structure kinds.
//!
//! A document starts with the header line `# dfk-format v1` and holds a
//! sequence of blocks, each opened by a kind keyword and a name and closed
//! by `end`. Mappings and relations name their source and target, which
//! must be defined earlier in the same document. `#` starts a comment.
//! Sets are written `{ a b }`, the empty set `{ }`.

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::cf::CfRelation;
use crate::check_id;
use crate::frame::InformationFrame;
use crate::mapping::ApproximableMapping;
use crate::order::FinitePoset;
use crate::rough::{CfSpace, GaSpace};
use crate::set::{render_set, BitSet, Relation};

pub const HEADER: &str = "# dfk-format v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("line {line}, column {col}: expected {expected}")]
    Parse {
        line: usize,
        col: usize,
        expected: String,
    },
    #[error("line {line}, column {col}: unknown token `{token}`")]
    UnknownToken {
        line: usize,
        col: usize,
        token: String,
    },
    #[error("line {line}: duplicate section `{section}`")]
    DuplicateSection { line: usize, section: String },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Structure {
    Poset(Arc<FinitePoset>),
    Frame(Arc<InformationFrame>),
    CfSpace(Arc<CfSpace>),
    Mapping {
        source: String,
        target: String,
        mapping: ApproximableMapping,
    },
    CfRelation {
        source: String,
        target: String,
        relation: CfRelation,
    },
}

impl Structure {
    pub fn kind(&self) -> &'static str {
        match self {
            Structure::Poset(_) => "poset",
            Structure::Frame(_) => "frame",
            Structure::CfSpace(_) => "cfspace",
            Structure::Mapping { .. } => "mapping",
            Structure::CfRelation { .. } => "cfrelation",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Named {
    pub name: String,
    pub structure: Structure,
}

/// An ordered list of named structures.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Document {
    pub items: Vec<Named>,
}

impl Document {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<&Structure> {
        self.items
            .iter()
            .find(|n| n.name == name)
            .map(|n| &n.structure)
    }

    pub fn push(&mut self, name: impl Into<String>, structure: Structure) {
        self.items.push(Named {
            name: name.into(),
            structure,
        });
    }

    fn frame(&self, name: &str) -> Option<Arc<InformationFrame>> {
        match self.get(name) {
            Some(Structure::Frame(f)) => Some(f.clone()),
            _ => None,
        }
    }

    fn space(&self, name: &str) -> Option<Arc<CfSpace>> {
        match self.get(name) {
            Some(Structure::CfSpace(s)) => Some(s.clone()),
            _ => None,
        }
    }
}

// ---------------------------------------------------------------- writing

fn join_ids<'a>(ids: impl IntoIterator<Item = &'a String>) -> String {
    ids.into_iter()
        .map(String::as_str)
        .collect::<Vec<_>>()
        .join(" ")
}

fn sets_line(sets: &[BitSet], names: &[String]) -> String {
    sets.iter()
        .map(|&s| render_set(s, names))
        .collect::<Vec<_>>()
        .join(" ")
}

fn write_frame(out: &mut String, name: &str, f: &InformationFrame) {
    let t = f.tokens();
    let _ = writeln!(out, "frame {name}");
    let _ = writeln!(out, "tokens {}", join_ids(t));
    for i in 0..f.len() {
        let _ = writeln!(out, "con {} : {}", t[i], sets_line(f.con(i), t));
    }
    for i in 0..f.len() {
        let pairs: Vec<String> = f
            .family(i)
            .flat_map(|(x, c)| c.iter().map(move |a| (x, a)))
            .map(|(x, a)| format!("{} |- {}", render_set(x, t), t[a]))
            .collect();
        let _ = writeln!(out, "ent {} :{}", t[i], list_tail(&pairs));
    }
    if let Some(tt) = f.truth() {
        let _ = writeln!(out, "truth {}", t[tt]);
    }
    out.push_str("end\n");
}

/// ` a ; b` for a nonempty list, nothing otherwise.
fn list_tail(items: &[String]) -> String {
    if items.is_empty() {
        String::new()
    } else {
        format!(" {}", items.join(" ; "))
    }
}

fn write_poset(out: &mut String, name: &str, p: &FinitePoset) {
    let _ = writeln!(out, "poset {name}");
    let _ = writeln!(out, "elements {}", join_ids(p.ids()));
    for (x, y) in p.covers() {
        let _ = writeln!(out, "leq {} <= {}", p.id(x), p.id(y));
    }
    out.push_str("end\n");
}

fn write_space(out: &mut String, name: &str, s: &CfSpace) {
    let u = s.universe();
    let _ = writeln!(out, "cfspace {name}");
    let _ = writeln!(out, "universe {}", join_ids(u));
    for (x, y) in s.base().theta().pairs() {
        let _ = writeln!(out, "theta {} -> {}", u[x], u[y]);
    }
    let fam = sets_line(s.family(), u);
    if fam.is_empty() {
        out.push_str("family\n");
    } else {
        let _ = writeln!(out, "family {fam}");
    }
    out.push_str("end\n");
}

fn write_mapping(out: &mut String, name: &str, src: &str, tgt: &str, h: &ApproximableMapping) {
    let (a, b) = (h.source(), h.target());
    let _ = writeln!(out, "mapping {name} : {src} -> {tgt}");
    for i in 0..a.len() {
        let pairs: Vec<String> = a
            .con(i)
            .iter()
            .flat_map(|&x| h.image(i, x).iter().map(move |e| (x, e)))
            .map(|(x, e)| format!("{} => {}", render_set(x, a.tokens()), b.token(e)))
            .collect();
        let _ = writeln!(out, "h {} :{}", a.token(i), list_tail(&pairs));
    }
    out.push_str("end\n");
}

fn write_relation(out: &mut String, name: &str, src: &str, tgt: &str, d: &CfRelation) {
    let (u, v) = (d.source(), d.target());
    let _ = writeln!(out, "cfrelation {name} : {src} -> {tgt}");
    for (f, g) in d.pairs() {
        let _ = writeln!(
            out,
            "d {} => {}",
            render_set(u.family()[f], u.universe()),
            render_set(v.family()[g], v.universe())
        );
    }
    out.push_str("end\n");
}

/// Canonical text of a document.
pub fn serialize(doc: &Document) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for item in &doc.items {
        out.push('\n');
        let name = item.name.as_str();
        match &item.structure {
            Structure::Poset(p) => write_poset(&mut out, name, p),
            Structure::Frame(f) => write_frame(&mut out, name, f),
            Structure::CfSpace(s) => write_space(&mut out, name, s),
            Structure::Mapping {
                source,
                target,
                mapping,
            } => write_mapping(&mut out, name, source, target, mapping),
            Structure::CfRelation {
                source,
                target,
                relation,
            } => write_relation(&mut out, name, source, target, relation),
        }
    }
    out
}

// ---------------------------------------------------------------- reading

#[derive(Debug, Clone, Copy)]
struct Word<'a> {
    col: usize,
    text: &'a str,
}

struct Line<'a> {
    no: usize,
    words: Vec<Word<'a>>,
}

fn lex(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let mut words = Vec::new();
        let mut start = None;
        for (ci, (bi, ch)) in body.char_indices().enumerate() {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some((ci, bi)),
                (true, Some((c0, b0))) => {
                    words.push(Word {
                        col: c0 + 1,
                        text: &body[b0..bi],
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if let Some((c0, b0)) = start {
            words.push(Word {
                col: c0 + 1,
                text: &body[b0..],
            });
        }
        if !words.is_empty() {
            out.push(Line { no: k + 1, words });
        }
    }
    out
}

/// A cursor over the words of one line.
struct Cur<'a, 'l> {
    line: &'l Line<'a>,
    pos: usize,
}

impl<'a, 'l> Cur<'a, 'l> {
    fn new(line: &'l Line<'a>) -> Self {
        Cur { line, pos: 0 }
    }

    fn end_col(&self) -> usize {
        self.line
            .words
            .last()
            .map_or(1, |w| w.col + w.text.chars().count())
    }

    fn err(&self, expected: impl Into<String>) -> IoError {
        let col = self
            .line
            .words
            .get(self.pos)
            .map_or_else(|| self.end_col(), |w| w.col);
        IoError::Parse {
            line: self.line.no,
            col,
            expected: expected.into(),
        }
    }

    fn peek(&self) -> Option<&'a str> {
        self.line.words.get(self.pos).map(|w| w.text)
    }

    fn next(&mut self, expected: &str) -> Result<Word<'a>, IoError> {
        let w = self
            .line
            .words
            .get(self.pos)
            .copied()
            .ok_or_else(|| self.err(expected))?;
        self.pos += 1;
        Ok(w)
    }

    fn keyword(&mut self, kw: &str) -> Result<(), IoError> {
        match self.peek() {
            Some(t) if t == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("`{kw}`"))),
        }
    }

    fn done(&self) -> Result<(), IoError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.err("end of line")),
        }
    }

    fn is_done(&self) -> bool {
        self.pos >= self.line.words.len()
    }

    fn ident(&mut self, what: &str) -> Result<Word<'a>, IoError> {
        let save = self.pos;
        let w = self.next(what)?;
        if !check_id(w.text) {
            self.pos = save;
            return Err(self.err(what));
        }
        Ok(w)
    }

    /// An id that must occur in `names`.
    fn lookup(&mut self, names: &[String], what: &str) -> Result<usize, IoError> {
        let w = self.ident(what)?;
        names
            .iter()
            .position(|n| n == w.text)
            .ok_or_else(|| IoError::UnknownToken {
                line: self.line.no,
                col: w.col,
                token: w.text.to_string(),
            })
    }

    fn set(&mut self, names: &[String]) -> Result<BitSet, IoError> {
        self.keyword("{")
            .map_err(|_| self.err("`{` opening a set"))?;
        let mut s = BitSet::EMPTY;
        loop {
            if self.peek() == Some("}") {
                self.pos += 1;
                return Ok(s);
            }
            if self.is_done() {
                return Err(self.err("`}` closing the set"));
            }
            s = s.with(self.lookup(names, "element id or `}`")?);
        }
    }

    fn sets(&mut self, names: &[String]) -> Result<Vec<BitSet>, IoError> {
        let mut out = Vec::new();
        while !self.is_done() {
            out.push(self.set(names)?);
        }
        Ok(out)
    }

    /// `item ; item ; ...`, possibly empty.
    fn list<T>(
        &mut self,
        mut item: impl FnMut(&mut Self) -> Result<T, IoError>,
    ) -> Result<Vec<T>, IoError> {
        let mut out = Vec::new();
        if self.is_done() {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.is_done() {
                return Ok(out);
            }
            self.keyword(";")
                .map_err(|_| self.err("`;` or end of line"))?;
        }
    }
}

fn ids_of(cur: &mut Cur, what: &str) -> Result<Vec<String>, IoError> {
    let mut out: Vec<String> = Vec::new();
    while !cur.is_done() {
        let w = cur.ident(what)?;
        if out.iter().any(|o| o == w.text) {
            return Err(IoError::DuplicateSection {
                line: cur.line.no,
                section: w.text.to_string(),
            });
        }
        out.push(w.text.to_string());
    }
    Ok(out)
}

fn invalid(line: usize, e: impl std::fmt::Display) -> IoError {
    IoError::Invalid {
        line,
        message: e.to_string(),
    }
}

fn once<T>(slot: &mut Option<T>, value: T, line: usize, section: &str) -> Result<(), IoError> {
    if slot.is_some() {
        return Err(IoError::DuplicateSection {
            line,
            section: section.to_string(),
        });
    }
    *slot = Some(value);
    Ok(())
}

fn missing(line: usize, what: &str) -> IoError {
    IoError::Parse {
        line,
        col: 1,
        expected: what.to_string(),
    }
}

/// Parse a document. Every structure is checked for typing only; the
/// validators are run separately.
pub fn parse(text: &str) -> Result<Document, IoError> {
    let first = text.lines().next().unwrap_or("");
    if first.trim_end() != HEADER {
        return Err(IoError::Parse {
            line: 1,
            col: 1,
            expected: format!("header `{HEADER}`"),
        });
    }
    let lines = lex(text);
    let mut doc = Document::new();
    let mut k = 0;
    while k < lines.len() {
        let head = &lines[k];
        let body_end = (k + 1..lines.len())
            .find(|&e| lines[e].words[0].text == "end")
            .ok_or_else(|| missing(lines.last().map_or(1, |l| l.no), "`end`"))?;
        let mut cur = Cur::new(head);
        let kind = cur.next("structure kind")?;
        let name = cur.ident("structure name")?;
        if doc.get(name.text).is_some() {
            return Err(IoError::DuplicateSection {
                line: head.no,
                section: name.text.to_string(),
            });
        }
        let body = &lines[k + 1..body_end];
        let end = Cur::new(&lines[body_end]);
        let structure = match kind.text {
            "frame" => {
                cur.done()?;
                Structure::Frame(Arc::new(parse_frame(body, head.no)?))
            }
            "poset" => {
                cur.done()?;
                Structure::Poset(Arc::new(parse_poset(body, head.no)?))
            }
            "cfspace" => {
                cur.done()?;
                Structure::CfSpace(Arc::new(parse_space(body, head.no)?))
            }
            "mapping" | "cfrelation" => {
                cur.keyword(":")?;
                let src = cur.ident("source name")?;
                cur.keyword("->")?;
                let tgt = cur.ident("target name")?;
                cur.done()?;
                let unknown = |w: Word| IoError::UnknownToken {
                    line: head.no,
                    col: w.col,
                    token: w.text.to_string(),
                };
                if kind.text == "mapping" {
                    let a = doc.frame(src.text).ok_or_else(|| unknown(src))?;
                    let b = doc.frame(tgt.text).ok_or_else(|| unknown(tgt))?;
                    Structure::Mapping {
                        source: src.text.to_string(),
                        target: tgt.text.to_string(),
                        mapping: parse_mapping(body, head.no, a, b)?,
                    }
                } else {
                    let a = doc.space(src.text).ok_or_else(|| unknown(src))?;
                    let b = doc.space(tgt.text).ok_or_else(|| unknown(tgt))?;
                    Structure::CfRelation {
                        source: src.text.to_string(),
                        target: tgt.text.to_string(),
                        relation: parse_relation(body, head.no, a, b)?,
                    }
                }
            }
            _ => {
                return Err(IoError::Parse {
                    line: head.no,
                    col: kind.col,
                    expected: "`frame`, `poset`, `cfspace`, `mapping` or `cfrelation`".into(),
                })
            }
        };
        let mut end = end;
        end.keyword("end")?;
        end.done()?;
        doc.push(name.text, structure);
        k = body_end + 1;
    }
    Ok(doc)
}

fn parse_frame(body: &[Line], head: usize) -> Result<InformationFrame, IoError> {
    let mut tokens: Option<Vec<String>> = None;
    let mut con: Vec<Option<Vec<BitSet>>> = Vec::new();
    let mut ent: Vec<Option<Vec<(BitSet, usize)>>> = Vec::new();
    let mut truth: Option<usize> = None;
    let mut seen_truth = false;
    for line in body {
        let mut cur = Cur::new(line);
        let kw = cur.next("section")?;
        match kw.text {
            "tokens" => {
                let ids = ids_of(&mut cur, "token id")?;
                con = vec![None; ids.len()];
                ent = vec![None; ids.len()];
                once(&mut tokens, ids, line.no, "tokens")?;
            }
            "con" | "ent" | "truth" => {
                let t = tokens
                    .as_deref()
                    .ok_or_else(|| invalid(line.no, "`tokens` must come first"))?;
                let i = cur.lookup(t, "token id")?;
                if kw.text == "truth" {
                    cur.done()?;
                    if seen_truth {
                        return Err(IoError::DuplicateSection {
                            line: line.no,
                            section: "truth".into(),
                        });
                    }
                    seen_truth = true;
                    truth = Some(i);
                    continue;
                }
                cur.keyword(":")?;
                let section = format!("{} {}", kw.text, t[i]);
                if kw.text == "con" {
                    let sets = cur.sets(t)?;
                    once(&mut con[i], sets, line.no, &section)?;
                } else {
                    let pairs = cur.list(|c| {
                        let x = c.set(t)?;
                        c.keyword("|-")?;
                        let a = c.lookup(t, "token id")?;
                        Ok((x, a))
                    })?;
                    once(&mut ent[i], pairs, line.no, &section)?;
                }
            }
            _ => {
                return Err(cur_err(
                    line,
                    kw,
                    "`tokens`, `con`, `ent`, `truth` or `end`",
                ))
            }
        }
    }
    let tokens = tokens.ok_or_else(|| missing(head, "`tokens` section"))?;
    let mut cons = Vec::with_capacity(tokens.len());
    for (i, c) in con.into_iter().enumerate() {
        cons.push(c.ok_or_else(|| missing(head, &format!("`con {}` section", tokens[i])))?);
    }
    let ents = ent.into_iter().map(Option::unwrap_or_default).collect();
    InformationFrame::new(tokens, cons, ents, truth).map_err(|e| invalid(head, e))
}

fn cur_err(line: &Line, w: Word, expected: &str) -> IoError {
    IoError::Parse {
        line: line.no,
        col: w.col,
        expected: expected.into(),
    }
}

fn parse_poset(body: &[Line], head: usize) -> Result<FinitePoset, IoError> {
    let mut ids: Option<Vec<String>> = None;
    let mut pairs = Vec::new();
    for line in body {
        let mut cur = Cur::new(line);
        let kw = cur.next("section")?;
        match kw.text {
            "elements" => {
                let v = ids_of(&mut cur, "element id")?;
                once(&mut ids, v, line.no, "elements")?;
            }
            "leq" => {
                let e = ids
                    .as_deref()
                    .ok_or_else(|| invalid(line.no, "`elements` must come first"))?;
                let x = cur.lookup(e, "element id")?;
                cur.keyword("<=")?;
                let y = cur.lookup(e, "element id")?;
                cur.done()?;
                pairs.push((x, y));
            }
            _ => return Err(cur_err(line, kw, "`elements`, `leq` or `end`")),
        }
    }
    let ids = ids.ok_or_else(|| missing(head, "`elements` section"))?;
    // the listed pairs generate the order
    let n = ids.len();
    let mut rel = Relation::from_fn(n, |x, y| x == y);
    for &(x, y) in &pairs {
        rel.insert(x, y);
    }
    for k in 0..n {
        for x in 0..n {
            if rel.contains(x, k) {
                for y in rel.row(k).iter() {
                    rel.insert(x, y);
                }
            }
        }
    }
    FinitePoset::from_relation(ids, &rel).map_err(|e| invalid(head, e))
}

fn parse_space(body: &[Line], head: usize) -> Result<CfSpace, IoError> {
    let mut ids: Option<Vec<String>> = None;
    let mut pairs = Vec::new();
    let mut family: Option<Vec<BitSet>> = None;
    for line in body {
        let mut cur = Cur::new(line);
        let kw = cur.next("section")?;
        match kw.text {
            "universe" => {
                let v = ids_of(&mut cur, "element id")?;
                once(&mut ids, v, line.no, "universe")?;
            }
            "theta" | "family" => {
                let u = ids
                    .as_deref()
                    .ok_or_else(|| invalid(line.no, "`universe` must come first"))?;
                if kw.text == "theta" {
                    let x = cur.lookup(u, "element id")?;
                    cur.keyword("->")?;
                    let y = cur.lookup(u, "element id")?;
                    cur.done()?;
                    pairs.push((x, y));
                } else {
                    let sets = cur.sets(u)?;
                    let mut sorted = sets.clone();
                    crate::set::canonicalize(&mut sorted);
                    if sorted.len() != sets.len() {
                        return Err(invalid(line.no, "a family member is listed twice"));
                    }
                    once(&mut family, sets, line.no, "family")?;
                }
            }
            _ => return Err(cur_err(line, kw, "`universe`, `theta`, `family` or `end`")),
        }
    }
    let ids = ids.ok_or_else(|| missing(head, "`universe` section"))?;
    let family = family.ok_or_else(|| missing(head, "`family` section"))?;
    let base = GaSpace::new(ids, &pairs).map_err(|e| invalid(head, e))?;
    CfSpace::from_parts(base, family).map_err(|e| invalid(head, e))
}

fn parse_mapping(
    body: &[Line],
    head: usize,
    a: Arc<InformationFrame>,
    b: Arc<InformationFrame>,
) -> Result<ApproximableMapping, IoError> {
    let mut rows: Vec<Option<Vec<(BitSet, usize)>>> = vec![None; a.len()];
    for line in body {
        let mut cur = Cur::new(line);
        let kw = cur.next("section")?;
        if kw.text != "h" {
            return Err(cur_err(line, kw, "`h` or `end`"));
        }
        let i = cur.lookup(a.tokens(), "source token")?;
        cur.keyword(":")?;
        let pairs = cur.list(|c| {
            let x = c.set(a.tokens())?;
            c.keyword("=>")?;
            let e = c.lookup(b.tokens(), "target token")?;
            Ok((x, e))
        })?;
        once(&mut rows[i], pairs, line.no, &format!("h {}", a.token(i)))?;
    }
    let pairs = rows.into_iter().map(Option::unwrap_or_default).collect();
    ApproximableMapping::new(a, b, pairs).map_err(|e| invalid(head, e))
}

fn parse_relation(
    body: &[Line],
    head: usize,
    u: Arc<CfSpace>,
    v: Arc<CfSpace>,
) -> Result<CfRelation, IoError> {
    let mut pairs = Vec::new();
    for line in body {
        let mut cur = Cur::new(line);
        let kw = cur.next("section")?;
        if kw.text != "d" {
            return Err(cur_err(line, kw, "`d` or `end`"));
        }
        let f = cur.set(u.universe())?;
        cur.keyword("=>")?;
        let g = cur.set(v.universe())?;
        cur.done()?;
        pairs.push((f, g));
    }
    CfRelation::new(u, v, &pairs).map_err(|e| invalid(head, e))
}
