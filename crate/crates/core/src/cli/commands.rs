use std::sync::Arc;

use serde_json::{json, Map, Value};

use super::parse::{Entity, Workspace};
use super::{Command, Failure, Method, Report};
use crate::congruence::{coequalizer, kernel_pair, quotients_up_to_iso};
use crate::error::Error;
use crate::guard::SizeGuard;
use crate::hull::{
    hull_uniqueness_iso, injective_hull_quotient, injective_hull_subobject, is_essential, is_injective, Essentiality,
    HullCertificate, Injectivity,
};
use crate::locally_finite::{monic_endo_inverse, power_cycle, schroeder_bernstein};
use crate::monoid::FiniteMonoid;
use crate::mset::{product, sub_msets, EquivariantMap, MSet};
use crate::search::{find_isomorphism, hom};
use crate::topos::{characteristic_map, exponential, omega, singleton, Exponential, Omega};

type Outcome = Result<Report, Failure>;

pub(super) struct Ctx<'a> {
    pub ws: &'a Workspace,
    pub guard: SizeGuard,
}

fn labels(set: &MSet, xs: impl IntoIterator<Item = usize>) -> Vec<&str> {
    xs.into_iter().map(|x| set.label(x)).collect()
}

fn blocks_json(set: &MSet, blocks: &[Vec<usize>]) -> Value {
    json!(blocks.iter().map(|b| labels(set, b.iter().copied())).collect::<Vec<_>>())
}

fn ideals_json(om: &Omega) -> Value {
    let m = om.object().monoid();
    let mut out = Map::new();
    for (k, ideal) in om.ideals().iter().enumerate() {
        let members: Vec<&str> = ideal.members().iter().map(|&x| m.label(x)).collect();
        out.insert(om.object().label(k).to_string(), json!(members));
    }
    Value::Object(out)
}

/// `F{k}` definitions: the table `(m, a) ↦ f(m, a)` of each listed element.
fn tables_json(exp: &Exponential, members: impl IntoIterator<Item = usize>) -> Value {
    let dom = exp.domain();
    let monoid = exp.object().monoid();
    let (base, target) = (exp.base(), exp.target());
    let mut out = Map::new();
    for k in members {
        let table = exp.table(k);
        let rows: Vec<[&str; 3]> = monoid
            .elements()
            .flat_map(|m| base.elements().map(move |a| (m, a)))
            .map(|(m, a)| [monoid.label(m), base.label(a), target.label(table[dom.pair(m, a)])])
            .collect();
        out.insert(exp.object().label(k).to_string(), json!(rows));
    }
    Value::Object(out)
}

fn count(n: usize, noun: &str) -> String {
    if n == 1 {
        format!("1 {noun}")
    } else {
        format!("{n} {noun}s")
    }
}

fn pair_json(set: &MSet, pair: (usize, usize)) -> Value {
    json!([set.label(pair.0), set.label(pair.1)])
}

impl Ctx<'_> {
    fn monoid(&self, name: &str) -> Result<&Arc<FiniteMonoid>, Failure> {
        self.ws
            .monoid(name)
            .ok_or_else(|| Failure::Input(format!("unknown reference `{name}`: no monoid of that name")))
    }

    fn mset(&self, name: &str) -> Result<&Arc<MSet>, Failure> {
        self.ws
            .mset(name)
            .ok_or_else(|| Failure::Input(format!("unknown reference `{name}`: no mset of that name")))
    }

    fn map(&self, name: &str) -> Result<(&EquivariantMap, &str, &str), Failure> {
        match self.ws.get(name) {
            Some(Entity::Map { from, to, map }) => Ok((map, from, to)),
            _ => Err(Failure::Input(format!("unknown reference `{name}`: no map of that name"))),
        }
    }

    fn report(&self) -> Report {
        Report::default()
    }

    fn put_mset(&self, r: &mut Report, name: &str, set: &Arc<MSet>) -> String {
        r.defs.mset(self.ws, name, set)
    }

    fn put_map(&self, r: &mut Report, name: &str, map: &EquivariantMap) -> String {
        r.defs.map(self.ws, name, map)
    }

    pub fn run(&self, command: &Command) -> Outcome {
        match command {
            Command::Validate => self.validate(),
            Command::Omega { monoid } => self.omega(monoid),
            Command::Hom { a, b } => self.hom(a, b),
            Command::Exp { a, b } => self.exp(a, b),
            Command::Product { a, b } => self.product(a, b),
            Command::Quotients { a } => self.quotients(a),
            Command::Subobjects { a } => self.subobjects(a),
            Command::Essential { map } => self.essential(map),
            Command::Injective { a } => self.injective(a),
            Command::Hull { a, method } => self.hull(a, *method),
            Command::Iso { a, b } => self.iso(a, b),
            Command::Sb { f, g } => self.sb(f, g),
            Command::Invert { f } => self.invert(f),
        }
    }

    fn validate(&self) -> Outcome {
        let mut r = self.report();
        r.holds = true;
        let mut counts = [0usize; 3];
        for (name, entity) in self.ws.entities() {
            let note = match entity {
                Entity::Monoid(m) => {
                    counts[0] += 1;
                    format!("{name}: monoid with {}", count(m.size(), "element"))
                }
                Entity::MSet { over, set } => {
                    counts[1] += 1;
                    format!("{name}: mset over {over} with {}", count(set.size(), "element"))
                }
                Entity::Map { from, to, map } => {
                    counts[2] += 1;
                    let kind = match (map.is_monic(), map.is_epic()) {
                        (true, true) => "iso",
                        (true, false) => "monic",
                        (false, true) => "epic",
                        (false, false) => "neither monic nor epic",
                    };
                    format!("{name}: map {from} -> {to}, {kind}")
                }
            };
            r.notes.push(note);
        }
        r.result.insert("monoids".into(), json!(counts[0]));
        r.result.insert("msets".into(), json!(counts[1]));
        r.result.insert("maps".into(), json!(counts[2]));
        r.defs = super::emit::Definitions::from_workspace(self.ws);
        Ok(r)
    }

    fn omega(&self, name: &str) -> Outcome {
        let m = self.monoid(name)?;
        let om = omega(m);
        let mut r = self.report();
        r.holds = true;
        let object = self.put_mset(&mut r, &format!("{name}.omega"), om.object());
        for (k, ideal) in om.ideals().iter().enumerate() {
            let members: Vec<&str> = ideal.members().iter().map(|&x| m.label(x)).collect();
            r.notes.push(format!("{} = {{{}}}", om.object().label(k), members.join(", ")));
        }
        let truth = om.object().label(om.truth()).to_string();
        r.notes.push(format!("truth = {truth}"));
        r.result.insert("object".into(), json!(object));
        r.result.insert("size".into(), json!(om.object().size()));
        r.result.insert("truth".into(), json!(truth));
        r.result.insert("generated".into(), json!({ object: ideals_json(&om) }));
        Ok(r)
    }

    fn hom(&self, an: &str, bn: &str) -> Outcome {
        let (a, b) = (self.mset(an)?, self.mset(bn)?);
        let maps = hom(a, b, &self.guard)?;
        let mut r = self.report();
        r.holds = true;
        self.put_mset(&mut r, an, a);
        self.put_mset(&mut r, bn, b);
        let names: Vec<String> = maps
            .iter()
            .enumerate()
            .map(|(k, f)| self.put_map(&mut r, &format!("hom.{an}.{bn}.{k}"), f))
            .collect();
        r.notes.push(format!("{} {an} -> {bn}", count(maps.len(), "map")));
        r.result.insert("count".into(), json!(maps.len()));
        r.result.insert("maps".into(), json!(names));
        Ok(r)
    }

    fn exp(&self, an: &str, bn: &str) -> Outcome {
        let (a, b) = (self.mset(an)?, self.mset(bn)?);
        let e = exponential(a, b, &self.guard)?;
        let mut r = self.report();
        r.holds = true;
        self.put_mset(&mut r, an, a);
        self.put_mset(&mut r, bn, b);
        let base = format!("exp.{an}.{bn}");
        let object = self.put_mset(&mut r, &base, e.object());
        let eval_dom = self.put_mset(&mut r, &format!("{base}.x.{an}"), &e.eval_product().object);
        let eval = self.put_map(&mut r, &format!("{base}.eval"), e.eval());
        r.notes.push(format!("{object} = {bn}^{an} has {}", count(e.object().size(), "element")));
        let monoid = r.defs.monoid(self.ws, a.monoid());
        r.notes.push(format!("F{{k}} is the k-th equivariant map {monoid} x {an} -> {bn} in lexicographic order"));
        r.result.insert("object".into(), json!(object));
        r.result.insert("size".into(), json!(e.object().size()));
        r.result.insert("eval".into(), json!({ "map": eval, "domain": eval_dom }));
        r.result.insert("generated".into(), json!({ object: tables_json(&e, e.object().elements()) }));
        Ok(r)
    }

    fn product(&self, an: &str, bn: &str) -> Outcome {
        let (a, b) = (self.mset(an)?, self.mset(bn)?);
        let p = product(a, b)?;
        let mut r = self.report();
        r.holds = true;
        self.put_mset(&mut r, an, a);
        self.put_mset(&mut r, bn, b);
        let base = format!("{an}.x.{bn}");
        let object = self.put_mset(&mut r, &base, &p.object);
        let p1 = self.put_map(&mut r, &format!("{base}.p1"), &p.proj1);
        let p2 = self.put_map(&mut r, &format!("{base}.p2"), &p.proj2);
        r.notes.push(format!("{object} has {}", count(p.object.size(), "element")));
        r.result.insert("object".into(), json!(object));
        r.result.insert("projections".into(), json!([p1, p2]));
        Ok(r)
    }

    fn quotients(&self, an: &str) -> Outcome {
        let a = self.mset(an)?;
        let qs = quotients_up_to_iso(a, &self.guard)?;
        let mut r = self.report();
        r.holds = true;
        self.put_mset(&mut r, an, a);
        let mut list = Vec::new();
        for (k, (q, proj)) in qs.iter().enumerate() {
            let object = self.put_mset(&mut r, &format!("{an}.quotient.{k}"), q);
            let projection = self.put_map(&mut r, &format!("{an}.quotient.{k}.proj"), proj);
            let blocks = kernel_pair(proj).block_members();
            list.push(json!({
                "object": object,
                "projection": projection,
                "size": q.size(),
                "congruence": blocks_json(a, &blocks),
            }));
        }
        r.notes.push(format!("{} of {an} up to isomorphism", count(qs.len(), "quotient")));
        r.result.insert("count".into(), json!(qs.len()));
        r.result.insert("quotients".into(), Value::Array(list));
        Ok(r)
    }

    fn subobjects(&self, an: &str) -> Outcome {
        let a = self.mset(an)?;
        let subs = sub_msets(a, &self.guard)?;
        let om = omega(a.monoid());
        let mut r = self.report();
        r.holds = true;
        self.put_mset(&mut r, an, a);
        let monoid = r.defs.monoid(self.ws, a.monoid());
        let omega_name = self.put_mset(&mut r, &format!("{monoid}.omega"), om.object());
        let mut list = Vec::new();
        for (k, sub) in subs.iter().enumerate() {
            let incl = sub.include();
            let chi = characteristic_map(sub, &om)?;
            let object = self.put_mset(&mut r, &format!("{an}.sub.{k}"), incl.dom());
            let inclusion = self.put_map(&mut r, &format!("{an}.sub.{k}.incl"), &incl);
            let characteristic = self.put_map(&mut r, &format!("{an}.sub.{k}.chi"), &chi);
            list.push(json!({
                "object": object,
                "inclusion": inclusion,
                "characteristic": characteristic,
                "members": labels(a, sub.members().iter().copied()),
            }));
        }
        r.notes.push(format!("{} of {an}", count(subs.len(), "sub-mset")));
        r.result.insert("count".into(), json!(subs.len()));
        r.result.insert("subobjects".into(), Value::Array(list));
        r.result.insert("generated".into(), json!({ omega_name: ideals_json(&om) }));
        Ok(r)
    }

    fn essential(&self, name: &str) -> Outcome {
        let (f, from, to) = self.map(name)?;
        let verdict = match is_essential(f) {
            Err(Error::NotMonic { .. }) => {
                let (x, y) = f.collision().expect("not monic");
                return Err(Failure::Input(format!(
                    "`{name}` is not monic: {} and {} both map to {}",
                    f.dom().label(x),
                    f.dom().label(y),
                    f.cod().label(f.apply(x))
                )));
            }
            other => other?,
        };
        let mut r = self.report();
        self.put_mset(&mut r, from, f.dom());
        self.put_mset(&mut r, to, f.cod());
        self.put_map(&mut r, name, f);
        let (dom, cod) = (f.dom(), f.cod());
        match verdict {
            Essentiality::Essential { witnesses } => {
                r.holds = true;
                r.notes.push(format!(
                    "{name} is essential: each of the {} pairs of {to} generates a congruence identifying two elements of {from}",
                    witnesses.len()
                ));
                let list: Vec<Value> = witnesses
                    .iter()
                    .map(|w| json!({ "pair": pair_json(cod, w.hull_pair), "identifies": pair_json(dom, w.base_pair) }))
                    .collect();
                r.witnesses.insert("pairs".into(), Value::Array(list));
            }
            Essentiality::NotEssential { pair, congruence } => {
                r.holds = false;
                let (q, proj) = coequalizer(&congruence);
                let composite = EquivariantMap::compose(&proj, f)?;
                let quotient = self.put_mset(&mut r, &format!("{name}.collapse"), &q);
                let projection = self.put_map(&mut r, &format!("{name}.collapse.proj"), &proj);
                let comp = self.put_map(&mut r, &format!("{name}.collapse.composite"), &composite);
                r.notes.push(format!(
                    "{name} is not essential: the congruence generated by ({}, {}) keeps {from} apart",
                    cod.label(pair.0),
                    cod.label(pair.1)
                ));
                r.notes.push(format!("{projection} is not monic but {comp} = {projection} . {name} is"));
                r.witnesses.insert("pair".into(), pair_json(cod, pair));
                r.witnesses.insert("congruence".into(), blocks_json(cod, &congruence.block_members()));
                r.witnesses.insert("quotient".into(), json!(quotient));
                r.witnesses.insert("projection".into(), json!(projection));
                r.witnesses.insert("composite".into(), json!(comp));
            }
        }
        r.result.insert("essential".into(), json!(r.holds));
        Ok(r)
    }

    fn injective(&self, an: &str) -> Outcome {
        let a = self.mset(an)?;
        let verdict = is_injective(a, &self.guard)?;
        let sing = singleton(a, &self.guard)?;
        let mut r = self.report();
        self.put_mset(&mut r, an, a);
        let monoid = r.defs.monoid(self.ws, a.monoid());
        let mut generated = Map::new();
        generated.insert(format!("{monoid}.omega"), ideals_json(&sing.omega));
        match verdict {
            Injectivity::Injective { singleton: s, retraction } => {
                r.holds = true;
                let power = self.put_mset(&mut r, &format!("{an}.power"), s.cod());
                let sm = self.put_map(&mut r, &format!("{an}.singleton"), &s);
                let ret = self.put_map(&mut r, &format!("{an}.retraction"), &retraction);
                r.notes.push(format!("{an} is injective: {ret} . {sm} is the identity"));
                generated.insert(power.clone(), tables_json(&sing.power, sing.power.object().elements()));
                r.witnesses.insert(
                    "retraction".into(),
                    json!({ "power": power, "singleton": sm, "retraction": ret }),
                );
            }
            Injectivity::NotInjective { extension } => {
                r.holds = false;
                let object = self.put_mset(&mut r, &format!("{an}.extension"), extension.cod());
                let embed = self.put_map(&mut r, &format!("{an}.extension.embed"), &extension);
                r.notes.push(format!(
                    "{an} is not injective: {embed} is a proper essential extension into {object} ({})",
                    count(extension.cod().size(), "element")
                ));
                let members = extension
                    .cod()
                    .labels()
                    .iter()
                    .map(|l| sing.power.object().index_of(l).expect("labels come from the power object"));
                generated.insert(object.clone(), tables_json(&sing.power, members));
                r.witnesses.insert("extension".into(), json!({ "object": object, "embedding": embed }));
            }
        }
        r.result.insert("injective".into(), json!(r.holds));
        r.result.insert("generated".into(), Value::Object(generated));
        Ok(r)
    }

    fn hull(&self, an: &str, method: Method) -> Outcome {
        let a = self.mset(an)?;
        let mut certs: Vec<HullCertificate> = Vec::new();
        match method {
            Method::Subobject => certs.push(injective_hull_subobject(a, &self.guard)?),
            Method::Quotient => certs.push(injective_hull_quotient(a, &self.guard)?),
            Method::Both => {
                let quotient = injective_hull_quotient(a, &self.guard)?;
                let (subobject, _) = *quotient.cross_check.clone().expect("quotient hulls carry their cross-check");
                certs.push(subobject);
                certs.push(quotient);
            }
        }
        let sing = singleton(a, &self.guard)?;
        let mut r = self.report();
        r.holds = true;
        self.put_mset(&mut r, an, a);
        let monoid = r.defs.monoid(self.ws, a.monoid());
        let mut generated = Map::new();
        generated.insert(format!("{monoid}.omega"), ideals_json(&sing.omega));
        let ambient = sing.power.object();
        let mut used = std::collections::BTreeSet::new();
        let mut hulls = Map::new();
        let mut witnesses = Map::new();
        for cert in &certs {
            let tag = cert.method.to_string();
            let object = self.put_mset(&mut r, &format!("{an}.hull.{tag}"), &cert.hull);
            let embedding = self.put_map(&mut r, &format!("{an}.embed.{tag}"), &cert.embedding);
            r.notes.push(format!(
                "{tag} method: {object} has {}, built inside Omega^{an} ({})",
                count(cert.hull.size(), "element"),
                count(cert.ambient.size(), "element")
            ));
            let mut info = json!({
                "object": object,
                "embedding": embedding,
                "size": cert.hull.size(),
                "ambient_size": cert.ambient.size(),
            });
            match &cert.collapse {
                None => {
                    used.extend(cert.hull.labels().iter().map(|l| ambient.index_of(l).expect("labels come from the power object")));
                }
                Some(collapse) => {
                    let bound = cert.ambient.size().saturating_sub(1);
                    r.notes.push(format!("quotient chain took {} (bound {bound})", count(cert.chain_steps, "proper epi")));
                    info["chain_steps"] = json!(cert.chain_steps);
                    info["chain_bound"] = json!(bound);
                    let mut classes = Map::new();
                    for block in kernel_pair(collapse).block_members() {
                        used.extend(block.iter().copied());
                        classes.insert(cert.hull.label(collapse.apply(block[0])).to_string(), json!(labels(ambient, block)));
                    }
                    generated.insert(object.clone(), Value::Object(classes));
                }
            }
            hulls.insert(tag.clone(), info);

            let power_exp = singleton(&cert.hull, &self.guard)?.power;
            let power = self.put_mset(&mut r, &format!("{an}.hull.{tag}.power"), cert.injectivity.singleton.cod());
            let sm = self.put_map(&mut r, &format!("{an}.hull.{tag}.singleton"), &cert.injectivity.singleton);
            let ret = self.put_map(&mut r, &format!("{an}.hull.{tag}.retraction"), &cert.injectivity.retraction);
            generated.insert(power.clone(), tables_json(&power_exp, power_exp.object().elements()));
            let essential: Vec<Value> = cert
                .essential_witnesses
                .iter()
                .map(|w| json!({ "pair": pair_json(&cert.hull, w.hull_pair), "identifies": pair_json(a, w.base_pair) }))
                .collect();
            witnesses.insert(
                tag,
                json!({
                    "essential": essential,
                    "injective": { "power": power, "singleton": sm, "retraction": ret },
                }),
            );
        }
        if let [sub, quot] = &certs[..] {
            let iso = hull_uniqueness_iso(&sub.embedding, &quot.embedding, &self.guard).map_err(|e| match e {
                Error::PreconditionFailed(m) => Failure::Internal(format!("hull cross-check: {m}")),
                other => other.into(),
            })?;
            let forward = self.put_map(&mut r, &format!("{an}.hull.iso"), &iso.forward);
            let backward = self.put_map(&mut r, &format!("{an}.hull.iso.inverse"), &iso.backward);
            r.notes.push(format!("methods agree: {forward} is an isomorphism over {an} with inverse {backward}"));
            r.result.insert("agree".into(), json!(true));
            r.result.insert("iso".into(), json!({ "forward": forward, "backward": backward }));
        }
        generated.insert(format!("{an}.power"), tables_json(&sing.power, used));
        r.result.insert("hulls".into(), Value::Object(hulls));
        r.result.insert("generated".into(), Value::Object(generated));
        r.witnesses = witnesses;
        Ok(r)
    }

    fn iso(&self, an: &str, bn: &str) -> Outcome {
        let (a, b) = (self.mset(an)?, self.mset(bn)?);
        let found = find_isomorphism(a, b, &self.guard)?;
        let mut r = self.report();
        self.put_mset(&mut r, an, a);
        self.put_mset(&mut r, bn, b);
        match found {
            Some(h) => {
                r.holds = true;
                let inv = h.inverse().expect("isomorphism");
                let forward = self.put_map(&mut r, &format!("{an}.iso.{bn}"), &h);
                let backward = self.put_map(&mut r, &format!("{an}.iso.{bn}.inverse"), &inv);
                r.notes.push(format!("{an} and {bn} are isomorphic via {forward}"));
                r.witnesses.insert("forward".into(), json!(forward));
                r.witnesses.insert("backward".into(), json!(backward));
            }
            None => {
                r.holds = false;
                if a.size() != b.size() {
                    r.notes.push(format!("not isomorphic: {an} has {}, {bn} has {}", count(a.size(), "element"), b.size()));
                    r.witnesses.insert("reason".into(), json!("cardinality"));
                    r.witnesses.insert("sizes".into(), json!([a.size(), b.size()]));
                } else {
                    let (oa, ob) = (orbit_sizes(a), orbit_sizes(b));
                    if oa != ob {
                        r.notes.push(format!("not isomorphic: orbit sizes {oa:?} and {ob:?} differ"));
                        r.witnesses.insert("reason".into(), json!("orbit sizes"));
                        r.witnesses.insert("orbit_sizes".into(), json!([oa, ob]));
                    } else {
                        r.notes.push("not isomorphic: exhaustive search found no bijective equivariant map".into());
                        r.witnesses.insert("reason".into(), json!("exhaustive search"));
                    }
                }
            }
        }
        r.result.insert("isomorphic".into(), json!(r.holds));
        Ok(r)
    }

    fn sb(&self, fname: &str, gname: &str) -> Outcome {
        let (f, fa, fb) = self.map(fname)?;
        let (g, _, _) = self.map(gname)?;
        if !MSet::same(f.dom(), g.cod()) || !MSet::same(f.cod(), g.dom()) {
            return Err(Failure::Input(format!("`{gname}` must go back from the codomain of `{fname}` to its domain")));
        }
        let mut r = self.report();
        self.put_mset(&mut r, fa, f.dom());
        self.put_mset(&mut r, fb, f.cod());
        self.put_map(&mut r, fname, f);
        self.put_map(&mut r, gname, g);
        match schroeder_bernstein(f, g) {
            Ok(sb) => {
                r.holds = true;
                let fi = self.put_map(&mut r, &format!("{fname}.inverse"), &sb.f_inverse);
                let gi = self.put_map(&mut r, &format!("{gname}.inverse"), &sb.g_inverse);
                r.notes.push(format!("both monic, hence isomorphisms: inverses {fi} and {gi}"));
                r.witnesses.insert("f_inverse".into(), json!(fi));
                r.witnesses.insert("g_inverse".into(), json!(gi));
            }
            Err(Error::NotMonic { which }) => {
                r.holds = false;
                let (bad, badname) = if which == "f" { (f, fname) } else { (g, gname) };
                let (x, y) = bad.collision().expect("not monic");
                r.notes.push(format!(
                    "{badname} is not monic: {} and {} both map to {}",
                    bad.dom().label(x),
                    bad.dom().label(y),
                    bad.cod().label(bad.apply(x))
                ));
                r.witnesses.insert("not_monic".into(), json!(badname));
                r.witnesses.insert("collision".into(), pair_json(bad.dom(), (x, y)));
            }
            Err(e) => return Err(e.into()),
        }
        r.result.insert("inverted".into(), json!(r.holds));
        Ok(r)
    }

    fn invert(&self, fname: &str) -> Outcome {
        let (f, from, _) = self.map(fname)?;
        if !f.is_endo() {
            return Err(Failure::Input(format!("`{fname}` is not an endomorphism")));
        }
        let mut r = self.report();
        self.put_mset(&mut r, from, f.dom());
        self.put_map(&mut r, fname, f);
        let cycle = power_cycle(f)?;
        r.result.insert("tail".into(), json!(cycle.tail));
        r.result.insert("period".into(), json!(cycle.period));
        if f.is_monic() {
            r.holds = true;
            let inv = monic_endo_inverse(f)?;
            let name = self.put_map(&mut r, &format!("{fname}.inverse"), &inv);
            r.notes.push(format!("{fname} has period {}; {name} = {fname}^{}", cycle.period, cycle.period - 1));
            r.witnesses.insert("inverse".into(), json!(name));
        } else {
            r.holds = false;
            let (x, y) = f.collision().expect("not monic");
            let missed = f.missed().expect("a non-monic endomorphism of a finite set is not epic");
            r.notes.push(format!(
                "{fname} is not invertible: {} and {} both map to {}, nothing maps to {}",
                f.dom().label(x),
                f.dom().label(y),
                f.cod().label(f.apply(x)),
                f.cod().label(missed)
            ));
            r.witnesses.insert("collision".into(), pair_json(f.dom(), (x, y)));
            r.witnesses.insert("missed".into(), json!(f.cod().label(missed)));
        }
        r.result.insert("invertible".into(), json!(r.holds));
        Ok(r)
    }
}

fn orbit_sizes(set: &MSet) -> Vec<usize> {
    let mut sizes: Vec<usize> = set.elements().map(|x| set.orbit(x).len()).collect();
    sizes.sort_unstable();
    sizes
}
