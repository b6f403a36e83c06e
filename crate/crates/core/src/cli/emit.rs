//! Rendering entities in the description format and as JSON.

use std::fmt::Write as _;
use std::sync::Arc;

use serde_json::{json, Value};

use super::parse::{Entity, Workspace};
use crate::monoid::FiniteMonoid;
use crate::mset::{EquivariantMap, MSet};

/// An ordered set of named entities to emit. Every M-set is preceded by its
/// monoid and every map by its domain and codomain, so the rendered text
/// parses on its own.
#[derive(Debug, Clone, Default)]
pub struct Definitions {
    blocks: Vec<(String, Entity)>,
}

impl Definitions {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every entity of `ws`, in load order and under the same names.
    pub fn from_workspace(ws: &Workspace) -> Self {
        Definitions {
            blocks: ws.entities().map(|(n, e)| (n.to_string(), e.clone())).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn entities(&self) -> impl Iterator<Item = (&str, &Entity)> {
        self.blocks.iter().map(|(n, e)| (n.as_str(), e))
    }

    fn taken(&self, name: &str) -> bool {
        self.blocks.iter().any(|(n, _)| n == name)
    }

    fn fresh(&self, base: &str) -> String {
        if !self.taken(base) {
            return base.to_string();
        }
        (1..)
            .map(|i| format!("{base}.{i}"))
            .find(|n| !self.taken(n))
            .expect("unbounded")
    }

    fn find_mset(&self, set: &Arc<MSet>) -> Option<&str> {
        let exact = self.blocks.iter().find(|(_, e)| matches!(e, Entity::MSet { set: s, .. } if Arc::ptr_eq(s, set)));
        let equal = || self.blocks.iter().find(|(_, e)| matches!(e, Entity::MSet { set: s, .. } if **s == **set));
        exact.or_else(equal).map(|(n, _)| n.as_str())
    }

    /// Registers `monoid`, reusing an equal one already present.
    pub fn monoid(&mut self, ws: &Workspace, monoid: &Arc<FiniteMonoid>) -> String {
        let existing = self
            .blocks
            .iter()
            .find(|(_, e)| matches!(e, Entity::Monoid(m) if Arc::ptr_eq(m, monoid) || **m == **monoid));
        if let Some((name, _)) = existing {
            return name.clone();
        }
        let name = self.fresh(ws.monoid_name(monoid).unwrap_or("M"));
        self.blocks.push((name.clone(), Entity::Monoid(monoid.clone())));
        name
    }

    /// Registers `set` under `name` unless this very object is already
    /// present. Returns the name it is emitted under.
    pub fn mset(&mut self, ws: &Workspace, name: &str, set: &Arc<MSet>) -> String {
        let existing = self
            .blocks
            .iter()
            .find(|(_, e)| matches!(e, Entity::MSet { set: s, .. } if Arc::ptr_eq(s, set)));
        if let Some((n, _)) = existing {
            return n.clone();
        }
        let over = self.monoid(ws, set.monoid());
        let name = self.fresh(name);
        self.blocks.push((
            name.clone(),
            Entity::MSet {
                over,
                set: set.clone(),
            },
        ));
        name
    }

    /// Registers `map` under `name`; its ends are looked up among the
    /// registered M-sets and added as `{name}.dom` / `{name}.cod` if absent.
    pub fn map(&mut self, ws: &Workspace, name: &str, map: &EquivariantMap) -> String {
        let from = match self.find_mset(map.dom()) {
            Some(n) => n.to_string(),
            None => self.mset(ws, &format!("{name}.dom"), map.dom()),
        };
        let to = match self.find_mset(map.cod()) {
            Some(n) => n.to_string(),
            None => self.mset(ws, &format!("{name}.cod"), map.cod()),
        };
        let name = self.fresh(name);
        self.blocks.push((
            name.clone(),
            Entity::Map {
                from,
                to,
                map: map.clone(),
            },
        ));
        name
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, (name, entity)) in self.blocks.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            render_text(&mut out, name, entity);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.blocks.iter().map(|(n, e)| entity_json(n, e)).collect())
    }
}

fn line(out: &mut String, words: impl IntoIterator<Item = impl AsRef<str>>) {
    let mut first = true;
    for w in words {
        if !first {
            out.push(' ');
        }
        out.push_str(w.as_ref());
        first = false;
    }
    out.push('\n');
}

fn render_text(out: &mut String, name: &str, entity: &Entity) {
    match entity {
        Entity::Monoid(m) => {
            line(out, ["monoid", name]);
            line(out, std::iter::once("elements").chain(m.labels().iter().map(|s| s.as_str())));
            line(out, ["unit", m.label(m.identity())]);
            line(out, ["table"]);
            for x in m.elements() {
                line(out, m.row(x).iter().map(|&y| m.label(y)));
            }
        }
        Entity::MSet { over, set } => {
            line(out, ["mset", name, "over", over]);
            line(out, std::iter::once("elements").chain(set.labels().iter().map(|s| s.as_str())));
            line(out, ["action"]);
            for x in set.elements() {
                line(out, set.orbit_row(x).iter().map(|&y| set.label(y)));
            }
        }
        Entity::Map { from, to, map } => {
            line(out, ["map", name, "from", from, "to", to]);
            for x in map.dom().elements() {
                let _ = writeln!(out, "{} -> {}", map.dom().label(x), map.cod().label(map.apply(x)));
            }
        }
    }
}

fn entity_json(name: &str, entity: &Entity) -> Value {
    match entity {
        Entity::Monoid(m) => json!({
            "kind": "monoid",
            "name": name,
            "elements": m.labels(),
            "unit": m.label(m.identity()),
            "table": m.elements().map(|x| m.row(x).iter().map(|&y| m.label(y)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }),
        Entity::MSet { over, set } => json!({
            "kind": "mset",
            "name": name,
            "over": over,
            "elements": set.labels(),
            "action": set.elements().map(|x| set.orbit_row(x).iter().map(|&y| set.label(y)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }),
        Entity::Map { from, to, map } => json!({
            "kind": "map",
            "name": name,
            "from": from,
            "to": to,
            "mapping": map.dom().elements().map(|x| [map.dom().label(x), map.cod().label(map.apply(x))]).collect::<Vec<_>>(),
        }),
    }
}
