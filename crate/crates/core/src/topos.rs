//! Subobject classifier, exponentials and the singleton embedding.
//!
//! `Ω` is presented as the set of right ideals of the monoid with
//! `I·m = { n : m·n ∈ I }`. The exponential `B^A` is presented as the
//! equivariant maps `M × A → B` (with `M` acting on itself), acted on by
//! `(f·n)(m, a) = f(n·m, a)`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::guard::SizeGuard;
use crate::monoid::{FiniteMonoid, RightIdeal};
use crate::mset::{EquivariantMap, MSet, Product, SubMSet};
use crate::search::hom_tables;

/// The subobject classifier. Element `k` is labelled `I{k}` and is the
/// `k`-th right ideal in canonical order.
#[derive(Debug, Clone)]
pub struct Omega {
    object: Arc<MSet>,
    ideals: Vec<RightIdeal>,
    truth: usize,
    lookup: HashMap<Vec<usize>, usize>,
}

pub fn omega(monoid: &Arc<FiniteMonoid>) -> Omega {
    let ideals = monoid.right_ideals();
    let lookup: HashMap<Vec<usize>, usize> = ideals
        .iter()
        .enumerate()
        .map(|(k, i)| (i.members().to_vec(), k))
        .collect();
    let mut action = Vec::with_capacity(ideals.len() * monoid.size());
    for ideal in &ideals {
        for m in monoid.elements() {
            let moved: Vec<usize> = monoid.elements().filter(|&n| ideal.contains(monoid.mul(m, n))).collect();
            action.push(lookup[&moved]);
        }
    }
    let labels = (0..ideals.len()).map(|k| format!("I{k}")).collect();
    let object = Arc::new(MSet::from_parts(monoid.clone(), labels, action));
    let truth = ideals.len() - 1;
    debug_assert_eq!(ideals[truth].len(), monoid.size());
    Omega {
        object,
        ideals,
        truth,
        lookup,
    }
}

impl Omega {
    pub fn object(&self) -> &Arc<MSet> {
        &self.object
    }

    pub fn ideals(&self) -> &[RightIdeal] {
        &self.ideals
    }

    pub fn ideal(&self, k: usize) -> &RightIdeal {
        &self.ideals[k]
    }

    /// Index of the full ideal.
    pub fn truth(&self) -> usize {
        self.truth
    }

    /// Index of the ideal with exactly these (sorted) members.
    pub fn index_of(&self, members: &[usize]) -> Option<usize> {
        self.lookup.get(members).copied()
    }
}

/// `χ_S(x) = { m : x·m ∈ S }`.
pub fn characteristic_map(sub: &SubMSet, omega: &Omega) -> Result<EquivariantMap> {
    let parent = sub.parent();
    parent.same_monoid(omega.object())?;
    let monoid = parent.monoid();
    let mapping = parent
        .elements()
        .map(|x| {
            let members: Vec<usize> = monoid.elements().filter(|&m| sub.contains(parent.act(x, m))).collect();
            omega.index_of(&members).expect("characteristic set is a right ideal")
        })
        .collect();
    Ok(EquivariantMap::from_parts(parent.clone(), omega.object().clone(), mapping))
}

/// `{ x : χ(x) = true }`.
pub fn subobject_of_char(chi: &EquivariantMap, omega: &Omega) -> Result<SubMSet> {
    if !MSet::same(chi.cod(), omega.object()) {
        return Err(Error::ShapeMismatch("codomain is not the subobject classifier".into()));
    }
    let members = chi.dom().elements().filter(|&x| chi.apply(x) == omega.truth()).collect();
    Ok(SubMSet::new(chi.dom(), members).expect("truth is a fixed point, so the preimage is closed"))
}

/// `B^A` with its evaluation map. Element `k` is labelled `F{k}` and is the
/// `k`-th map `M × A → B` in lexicographic order of mapping tables.
#[derive(Debug, Clone)]
pub struct Exponential {
    base: Arc<MSet>,
    target: Arc<MSet>,
    object: Arc<MSet>,
    domain: Product,
    tables: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
    eval_product: Product,
    eval: EquivariantMap,
}

/// Builds `target^base`.
pub fn exponential(base: &Arc<MSet>, target: &Arc<MSet>, guard: &SizeGuard) -> Result<Exponential> {
    base.same_monoid(target)?;
    let monoid = base.monoid().clone();
    let regular = Arc::new(MSet::regular(&monoid));
    let domain = Product::new(&regular, base)?;
    let mut tables = hom_tables(&domain.object, target, guard)?;
    tables.sort_unstable();
    guard.check(tables.len())?;
    let lookup: HashMap<Vec<usize>, usize> = tables.iter().enumerate().map(|(k, t)| (t.clone(), k)).collect();

    let mut action = Vec::with_capacity(tables.len() * monoid.size());
    let mut moved = vec![0; domain.object.size()];
    for table in &tables {
        for n in monoid.elements() {
            for m in monoid.elements() {
                for a in base.elements() {
                    moved[domain.pair(m, a)] = table[domain.pair(monoid.mul(n, m), a)];
                }
            }
            action.push(lookup[&moved]);
        }
    }
    let labels = (0..tables.len()).map(|k| format!("F{k}")).collect();
    let object = Arc::new(MSet::from_parts(monoid.clone(), labels, action));

    let eval_product = Product::new(&object, base)?;
    let unit = monoid.identity();
    let mut eval_table = vec![0; eval_product.object.size()];
    for (k, table) in tables.iter().enumerate() {
        for a in base.elements() {
            eval_table[eval_product.pair(k, a)] = table[domain.pair(unit, a)];
        }
    }
    let eval = EquivariantMap::from_parts(eval_product.object.clone(), target.clone(), eval_table);
    Ok(Exponential {
        base: base.clone(),
        target: target.clone(),
        object,
        domain,
        tables,
        lookup,
        eval_product,
        eval,
    })
}

impl Exponential {
    pub fn object(&self) -> &Arc<MSet> {
        &self.object
    }

    /// The exponent `A`.
    pub fn base(&self) -> &Arc<MSet> {
        &self.base
    }

    /// The target `B`.
    pub fn target(&self) -> &Arc<MSet> {
        &self.target
    }

    /// `M × A`, the domain of every element's table.
    pub fn domain(&self) -> &Product {
        &self.domain
    }

    /// Table of element `k` as a map `M × A → B`, indexed by
    /// [`domain`](Self::domain) pairs.
    pub fn table(&self, k: usize) -> &[usize] {
        &self.tables[k]
    }

    pub fn index_of(&self, table: &[usize]) -> Option<usize> {
        self.lookup.get(table).copied()
    }

    /// `B^A × A`, the domain of [`eval`](Self::eval).
    pub fn eval_product(&self) -> &Product {
        &self.eval_product
    }

    /// `eval(f, a) = f(1, a)`.
    pub fn eval(&self) -> &EquivariantMap {
        &self.eval
    }

    /// The curried form `C → B^A` of `g: C × A → B`, where
    /// `transpose(g)(c)(m, a) = g(c·m, a)`.
    pub fn transpose(&self, product: &Product, g: &EquivariantMap) -> Result<EquivariantMap> {
        if !MSet::same(g.dom(), &product.object) {
            return Err(Error::ShapeMismatch("map is not defined on the given product".into()));
        }
        if !MSet::same(&product.right, &self.base) || !MSet::same(g.cod(), &self.target) {
            return Err(Error::ShapeMismatch("product or codomain does not match the exponential".into()));
        }
        let c = &product.left;
        let monoid = c.monoid();
        let mut table = vec![0; self.domain.object.size()];
        let mapping = c
            .elements()
            .map(|x| {
                for m in monoid.elements() {
                    for a in self.base.elements() {
                        table[self.domain.pair(m, a)] = g.apply(product.pair(c.act(x, m), a));
                    }
                }
                self.index_of(&table).expect("transpose lands in equivariant maps")
            })
            .collect();
        Ok(EquivariantMap::from_parts(c.clone(), self.object.clone(), mapping))
    }

    /// The uncurried form `C × A → B` of `h: C → B^A`.
    pub fn untranspose(&self, product: &Product, h: &EquivariantMap) -> Result<EquivariantMap> {
        if !MSet::same(h.cod(), &self.object) {
            return Err(Error::ShapeMismatch("map does not land in the exponential".into()));
        }
        if !MSet::same(&product.left, h.dom()) || !MSet::same(&product.right, &self.base) {
            return Err(Error::ShapeMismatch("product does not match the map and exponent".into()));
        }
        let unit = self.base.monoid().identity();
        let mut mapping = vec![0; product.object.size()];
        for c in h.dom().elements() {
            for a in self.base.elements() {
                mapping[product.pair(c, a)] = self.tables[h.apply(c)][self.domain.pair(unit, a)];
            }
        }
        Ok(EquivariantMap::from_parts(product.object.clone(), self.target.clone(), mapping))
    }
}

/// The singleton embedding `A → Ω^A` together with the objects it lives in.
#[derive(Debug, Clone)]
pub struct Singleton {
    pub omega: Omega,
    pub power: Exponential,
    pub map: EquivariantMap,
}

/// `a ↦ f_a` with `f_a(m, a') = { n : a·(m·n) = a'·n }`.
pub fn singleton(a: &Arc<MSet>, guard: &SizeGuard) -> Result<Singleton> {
    let monoid = a.monoid().clone();
    let omega = omega(&monoid);
    let power = exponential(a, omega.object(), guard)?;
    let domain = power.domain();
    let mut table = vec![0; domain.object.size()];
    let mapping = a
        .elements()
        .map(|x| {
            for m in monoid.elements() {
                for y in a.elements() {
                    let members: Vec<usize> = monoid
                        .elements()
                        .filter(|&n| a.act(x, monoid.mul(m, n)) == a.act(y, n))
                        .collect();
                    table[domain.pair(m, y)] = omega.index_of(&members).expect("right ideal");
                }
            }
            power.index_of(&table).expect("singleton lands in equivariant maps")
        })
        .collect();
    let map = EquivariantMap::from_parts(a.clone(), power.object().clone(), mapping);
    Ok(Singleton { omega, power, map })
}
