//! The description format: line oriented, `#` starts a comment, tokens are
//! separated by whitespace.
//!
//! ```text
//! monoid M
//! elements 1 e
//! unit 1
//! table
//! 1 e
//! e e
//!
//! mset A over M
//! elements a b
//! action
//! a b
//! b b
//!
//! map f from A to A
//! a -> b
//! b -> b
//! ```

use std::sync::Arc;

use indexmap::IndexMap;

use crate::monoid::FiniteMonoid;
use crate::mset::{EquivariantMap, MSet};

const HEADERS: [&str; 3] = ["monoid", "mset", "map"];
const ARROW: &str = "->";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{file}:{line}:{col}: syntax error: expected {expected}, found {found}")]
    Syntax {
        file: String,
        line: usize,
        col: usize,
        expected: String,
        found: String,
    },
    #[error("{file}:{line}:{col}: unknown reference `{name}`")]
    UnknownReference {
        file: String,
        line: usize,
        col: usize,
        name: String,
    },
    #[error("{file}:{line}: invalid `{name}`: {message}")]
    Validation {
        file: String,
        line: usize,
        name: String,
        message: String,
    },
}

/// A named monoid, M-set or map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entity {
    Monoid(Arc<FiniteMonoid>),
    MSet { over: String, set: Arc<MSet> },
    Map { from: String, to: String, map: EquivariantMap },
}

impl Entity {
    pub fn kind(&self) -> &'static str {
        match self {
            Entity::Monoid(_) => "monoid",
            Entity::MSet { .. } => "mset",
            Entity::Map { .. } => "map",
        }
    }
}

/// Everything loaded so far, in load order. Names share one namespace.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    entities: IndexMap<String, Entity>,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `text` and adds its entities. On error nothing from `text` is
    /// kept.
    pub fn load(&mut self, file: &str, text: &str) -> Result<(), ParseError> {
        let mut staged = self.clone();
        Parser {
            file,
            lines: lex(text),
            pos: 0,
            ws: &mut staged,
        }
        .parse()?;
        *self = staged;
        Ok(())
    }

    pub fn parse(file: &str, text: &str) -> Result<Self, ParseError> {
        let mut ws = Workspace::new();
        ws.load(file, text)?;
        Ok(ws)
    }

    pub fn entities(&self) -> impl Iterator<Item = (&str, &Entity)> {
        self.entities.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn get(&self, name: &str) -> Option<&Entity> {
        self.entities.get(name)
    }

    pub fn monoid(&self, name: &str) -> Option<&Arc<FiniteMonoid>> {
        match self.entities.get(name)? {
            Entity::Monoid(m) => Some(m),
            _ => None,
        }
    }

    pub fn mset(&self, name: &str) -> Option<&Arc<MSet>> {
        match self.entities.get(name)? {
            Entity::MSet { set, .. } => Some(set),
            _ => None,
        }
    }

    pub fn map(&self, name: &str) -> Option<&EquivariantMap> {
        match self.entities.get(name)? {
            Entity::Map { map, .. } => Some(map),
            _ => None,
        }
    }

    /// Name under which `monoid` was loaded.
    pub fn monoid_name(&self, monoid: &Arc<FiniteMonoid>) -> Option<&str> {
        let mut fallback = None;
        for (name, entity) in &self.entities {
            if let Entity::Monoid(m) = entity {
                if Arc::ptr_eq(m, monoid) {
                    return Some(name);
                }
                if fallback.is_none() && **m == **monoid {
                    fallback = Some(name.as_str());
                }
            }
        }
        fallback
    }
}

struct Token<'a> {
    text: &'a str,
    col: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
    end: usize,
}

fn lex(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        let mut col = 0;
        for (byte, ch) in content.char_indices() {
            col += 1;
            if ch.is_whitespace() {
                if let Some((b, c)) = start.take() {
                    tokens.push(Token {
                        text: &content[b..byte],
                        col: c,
                    });
                }
            } else if start.is_none() {
                start = Some((byte, col));
            }
        }
        if let Some((b, c)) = start {
            tokens.push(Token { text: &content[b..], col: c });
        }
        if !tokens.is_empty() {
            out.push(Line {
                number: i + 1,
                tokens,
                end: col + 1,
            });
        }
    }
    out
}

fn is_header(line: &Line) -> bool {
    HEADERS.contains(&line.tokens[0].text) && line.tokens.get(1).is_none_or(|t| t.text != ARROW)
}

struct Parser<'a, 'w> {
    file: &'a str,
    lines: Vec<Line<'a>>,
    pos: usize,
    ws: &'w mut Workspace,
}

type Res<T> = Result<T, ParseError>;

impl<'a> Parser<'a, '_> {
    fn syntax(&self, line: usize, col: usize, expected: impl Into<String>, found: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            file: self.file.to_string(),
            line,
            col,
            expected: expected.into(),
            found: found.into(),
        }
    }

    fn unknown(&self, line: usize, token: &Token) -> ParseError {
        ParseError::UnknownReference {
            file: self.file.to_string(),
            line,
            col: token.col,
            name: token.text.to_string(),
        }
    }

    fn invalid(&self, line: usize, name: &str, message: impl Into<String>) -> ParseError {
        ParseError::Validation {
            file: self.file.to_string(),
            line,
            name: name.to_string(),
            message: message.into(),
        }
    }

    fn end_of_input(&self) -> ParseError {
        let (line, col) = self.lines.last().map_or((1, 1), |l| (l.number, l.end));
        self.syntax(line, col, "more input", "end of input")
    }

    fn parse(mut self) -> Res<()> {
        while self.pos < self.lines.len() {
            let line = &self.lines[self.pos];
            let head = &line.tokens[0];
            match head.text {
                "monoid" => self.monoid()?,
                "mset" => self.mset()?,
                "map" => self.map()?,
                other => return Err(self.syntax(line.number, head.col, "`monoid`, `mset` or `map`", format!("`{other}`"))),
            }
        }
        Ok(())
    }

    /// Takes the next line, which must start with `keyword` followed by
    /// exactly the given literal/name pattern. `None` marks a name slot.
    fn header(&mut self, pattern: &[Option<&str>]) -> Res<(usize, Vec<&'a str>, Vec<usize>)> {
        let line = self.lines.get(self.pos).ok_or_else(|| self.end_of_input())?;
        let number = line.number;
        let mut names = Vec::new();
        let mut cols = Vec::new();
        for (i, slot) in pattern.iter().enumerate() {
            let Some(token) = line.tokens.get(i) else {
                let expected = slot.map_or("a name".to_string(), |kw| format!("`{kw}`"));
                return Err(self.syntax(number, line.end, expected, "end of line"));
            };
            match slot {
                Some(kw) if token.text != *kw => {
                    return Err(self.syntax(number, token.col, format!("`{kw}`"), format!("`{}`", token.text)))
                }
                Some(_) => {}
                None => {
                    names.push(token.text);
                    cols.push(token.col);
                }
            }
        }
        if let Some(extra) = line.tokens.get(pattern.len()) {
            return Err(self.syntax(number, extra.col, "end of line", format!("`{}`", extra.text)));
        }
        self.pos += 1;
        Ok((number, names, cols))
    }

    /// Takes a line `keyword tok tok ...` and returns the tokens after it.
    fn list(&mut self, keyword: &str) -> Res<(usize, Vec<&'a str>)> {
        let line = self.lines.get(self.pos).ok_or_else(|| self.end_of_input())?;
        let head = &line.tokens[0];
        if head.text != keyword {
            return Err(self.syntax(line.number, head.col, format!("`{keyword}`"), format!("`{}`", head.text)));
        }
        for token in &line.tokens[1..] {
            if token.text == ARROW {
                return Err(self.syntax(line.number, token.col, "a label", format!("`{ARROW}`")));
            }
        }
        let out = (line.number, line.tokens[1..].iter().map(|t| t.text).collect());
        self.pos += 1;
        Ok(out)
    }

    /// Reads `rows` lines of exactly `width` labels each, resolved in
    /// `labels`.
    fn table(&mut self, rows: usize, width: usize, labels: &[&str]) -> Res<Vec<Vec<usize>>> {
        let mut out = Vec::with_capacity(rows);
        for r in 0..rows {
            let line = self.lines.get(self.pos).ok_or_else(|| {
                let (line, col) = self.lines.last().map_or((1, 1), |l| (l.number, l.end));
                self.syntax(line, col, format!("{} more table rows", rows - r), "end of input")
            })?;
            if line.tokens.len() < width {
                return Err(self.syntax(
                    line.number,
                    line.end,
                    format!("{width} entries in row {}", r + 1),
                    format!("{} entries", line.tokens.len()),
                ));
            }
            if let Some(extra) = line.tokens.get(width) {
                return Err(self.syntax(
                    line.number,
                    extra.col,
                    format!("end of line after {width} entries"),
                    format!("`{}`", extra.text),
                ));
            }
            let mut row = Vec::with_capacity(width);
            for token in &line.tokens {
                let idx = labels.iter().position(|l| *l == token.text).ok_or_else(|| self.unknown(line.number, token))?;
                row.push(idx);
            }
            out.push(row);
            self.pos += 1;
        }
        Ok(out)
    }

    fn define(&mut self, line: usize, name: &str, entity: Entity) -> Res<()> {
        if self.ws.entities.contains_key(name) {
            return Err(self.invalid(line, name, "name already defined"));
        }
        self.ws.entities.insert(name.to_string(), entity);
        Ok(())
    }

    fn monoid(&mut self) -> Res<()> {
        let (number, names, _) = self.header(&[Some("monoid"), None])?;
        let name = names[0];
        let (_, labels) = self.list("elements")?;
        if labels.is_empty() {
            let line = &self.lines[self.pos - 1];
            return Err(self.syntax(line.number, line.end, "at least one element", "end of line"));
        }
        let unit_line = self.pos;
        let (_, unit, cols) = self.header(&[Some("unit"), None])?;
        let identity = labels.iter().position(|l| *l == unit[0]).ok_or_else(|| {
            self.unknown(
                self.lines[unit_line].number,
                &Token {
                    text: unit[0],
                    col: cols[0],
                },
            )
        })?;
        self.header(&[Some("table")])?;
        let table = self.table(labels.len(), labels.len(), &labels)?;
        let monoid = FiniteMonoid::validate(labels.iter().map(|s| s.to_string()).collect(), table, identity)
            .map_err(|e| self.invalid(number, name, e.to_string()))?;
        self.define(number, name, Entity::Monoid(Arc::new(monoid)))
    }

    fn mset(&mut self) -> Res<()> {
        let (number, names, cols) = self.header(&[Some("mset"), None, Some("over"), None])?;
        let (name, over) = (names[0], names[1]);
        let monoid = self
            .ws
            .monoid(over)
            .cloned()
            .ok_or_else(|| self.unknown(number, &Token { text: over, col: cols[1] }))?;
        let (_, labels) = self.list("elements")?;
        self.header(&[Some("action")])?;
        let action = self.table(labels.len(), monoid.size(), &labels)?;
        let set = MSet::validate(monoid, labels.iter().map(|s| s.to_string()).collect(), action)
            .map_err(|e| self.invalid(number, name, e.to_string()))?;
        self.define(
            number,
            name,
            Entity::MSet {
                over: over.to_string(),
                set: Arc::new(set),
            },
        )
    }

    fn map(&mut self) -> Res<()> {
        let (number, names, cols) = self.header(&[Some("map"), None, Some("from"), None, Some("to"), None])?;
        let (name, from, to) = (names[0], names[1], names[2]);
        let dom = self
            .ws
            .mset(from)
            .cloned()
            .ok_or_else(|| self.unknown(number, &Token { text: from, col: cols[1] }))?;
        let cod = self
            .ws
            .mset(to)
            .cloned()
            .ok_or_else(|| self.unknown(number, &Token { text: to, col: cols[2] }))?;
        let mut mapping: Vec<Option<usize>> = vec![None; dom.size()];
        while let Some(line) = self.lines.get(self.pos) {
            if is_header(line) {
                break;
            }
            let t = &line.tokens;
            if t.len() < 2 || t[1].text != ARROW {
                let (col, found) = t.get(1).map_or((line.end, "end of line".to_string()), |x| (x.col, format!("`{}`", x.text)));
                return Err(self.syntax(line.number, col, format!("`{ARROW}`"), found));
            }
            if t.len() < 3 {
                return Err(self.syntax(line.number, line.end, "a label", "end of line"));
            }
            if let Some(extra) = t.get(3) {
                return Err(self.syntax(line.number, extra.col, "end of line", format!("`{}`", extra.text)));
            }
            let x = dom.index_of(t[0].text).ok_or_else(|| self.unknown(line.number, &t[0]))?;
            let y = cod.index_of(t[2].text).ok_or_else(|| self.unknown(line.number, &t[2]))?;
            if mapping[x].is_some() {
                return Err(self.invalid(line.number, name, format!("`{}` is mapped twice", t[0].text)));
            }
            mapping[x] = Some(y);
            self.pos += 1;
        }
        let mut table = Vec::with_capacity(dom.size());
        for (x, y) in mapping.into_iter().enumerate() {
            match y {
                Some(y) => table.push(y),
                None => return Err(self.invalid(number, name, format!("no image for `{}`", dom.label(x)))),
            }
        }
        let map = EquivariantMap::new(dom, cod, table).map_err(|e| self.invalid(number, name, e.to_string()))?;
        self.define(
            number,
            name,
            Entity::Map {
                from: from.to_string(),
                to: to.to_string(),
                map,
            },
        )
    }
}
