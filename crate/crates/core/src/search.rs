//! Backtracking search for equivariant maps.
//!
//! Every search assigns images to a generating set of the domain and
//! propagates each choice along the generator's orbit (`f(x·m) = f(x)·m`).
//! Candidates for `x` are pre-filtered by the orbit kernel: whenever
//! `x·m = x·n` the image must satisfy `y·m = y·n`.

use std::ops::ControlFlow;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::guard::SizeGuard;
use crate::mset::{EquivariantMap, MSet};

/// For each `m`, the first `n` with `x·n = x·m`.
fn kernel(set: &MSet, x: usize) -> Vec<usize> {
    let row = set.orbit_row(x);
    row.iter()
        .map(|v| row.iter().position(|w| w == v).expect("present"))
        .collect()
}

fn kernel_admits(kernel: &[usize], cod: &MSet, y: usize) -> bool {
    kernel
        .iter()
        .enumerate()
        .all(|(m, &n)| cod.act(y, m) == cod.act(y, n))
}

struct Frame {
    depth: usize,
    next: usize,
    trail: Vec<usize>,
}

pub(crate) struct MapSearch<'a> {
    dom: &'a MSet,
    cod: &'a MSet,
    assignment: Vec<Option<usize>>,
    preimage: Vec<Option<usize>>,
    injective: bool,
    candidates: Vec<Vec<usize>>,
    decisions: Vec<usize>,
    consistent: bool,
}

impl<'a> MapSearch<'a> {
    pub(crate) fn new(dom: &'a MSet, cod: &'a MSet) -> Self {
        let candidates = dom
            .elements()
            .map(|x| {
                let k = kernel(dom, x);
                cod.elements().filter(|&y| kernel_admits(&k, cod, y)).collect()
            })
            .collect();
        MapSearch {
            dom,
            cod,
            assignment: vec![None; dom.size()],
            preimage: vec![None; cod.size()],
            injective: false,
            candidates,
            decisions: dom.generators(),
            consistent: true,
        }
    }

    /// Only accept injective maps; candidates must then have exactly the same
    /// orbit kernel as the element they replace.
    pub(crate) fn injective(mut self) -> Self {
        self.injective = true;
        for x in self.dom.elements() {
            let k = kernel(self.dom, x);
            let cod = self.cod;
            self.candidates[x].retain(|&y| kernel(cod, y) == k);
        }
        self
    }

    /// Pins `f(x) = y` together with everything it forces along the orbit.
    pub(crate) fn fix(mut self, x: usize, y: usize) -> Self {
        if self.consistent {
            let mut trail = Vec::new();
            self.consistent = self.assign_orbit(x, y, &mut trail);
        }
        self
    }

    fn assign_orbit(&mut self, x: usize, y: usize, trail: &mut Vec<usize>) -> bool {
        for m in self.dom.monoid().elements() {
            let z = self.dom.act(x, m);
            let w = self.cod.act(y, m);
            match self.assignment[z] {
                Some(v) if v != w => return false,
                Some(_) => {}
                None => {
                    if self.injective {
                        if self.preimage[w].is_some() {
                            return false;
                        }
                        self.preimage[w] = Some(z);
                    }
                    self.assignment[z] = Some(w);
                    trail.push(z);
                }
            }
        }
        true
    }

    fn undo(&mut self, trail: &[usize]) {
        for &z in trail {
            if let Some(w) = self.assignment[z].take() {
                if self.injective {
                    self.preimage[w] = None;
                }
            }
        }
    }

    /// Visits every complete map in depth-first order until `visit` breaks.
    pub(crate) fn run(
        mut self,
        guard: &SizeGuard,
        mut visit: impl FnMut(&[usize]) -> ControlFlow<()>,
    ) -> Result<()> {
        if !self.consistent {
            return Ok(());
        }
        let mut budget = guard.budget();
        let mut current = Vec::with_capacity(self.dom.size());
        let first = self.next_open(0);
        if first == self.decisions.len() {
            budget.spend(1)?;
            let _ = self.emit(&mut current, &mut visit);
            return Ok(());
        }
        // Explicit stack: the number of generators can run into thousands.
        let mut stack = vec![Frame {
            depth: first,
            next: 0,
            trail: Vec::new(),
        }];
        while let Some(top) = stack.last_mut() {
            let mut trail = std::mem::take(&mut top.trail);
            self.undo(&trail);
            trail.clear();
            let x = self.decisions[top.depth];
            if top.next == self.candidates[x].len() {
                stack.pop();
                continue;
            }
            let y = self.candidates[x][top.next];
            top.next += 1;
            let depth = top.depth;
            budget.spend(1)?;
            let ok = self.assign_orbit(x, y, &mut trail);
            stack.last_mut().expect("present").trail = trail;
            if !ok {
                continue;
            }
            let open = self.next_open(depth + 1);
            if open == self.decisions.len() {
                budget.spend(1)?;
                if self.emit(&mut current, &mut visit).is_break() {
                    return Ok(());
                }
            } else {
                stack.push(Frame {
                    depth: open,
                    next: 0,
                    trail: Vec::new(),
                });
            }
        }
        Ok(())
    }

    /// First decision at or after `depth` whose generator is still unassigned.
    fn next_open(&self, mut depth: usize) -> usize {
        while depth < self.decisions.len() && self.assignment[self.decisions[depth]].is_some() {
            depth += 1;
        }
        depth
    }

    fn emit(&self, current: &mut Vec<usize>, visit: &mut impl FnMut(&[usize]) -> ControlFlow<()>) -> ControlFlow<()> {
        current.clear();
        current.extend(self.assignment.iter().map(|a| a.expect("generators cover the domain")));
        visit(current)
    }

    pub(crate) fn first(self, guard: &SizeGuard) -> Result<Option<Vec<usize>>> {
        let mut found = None;
        self.run(guard, |m| {
            found = Some(m.to_vec());
            ControlFlow::Break(())
        })?;
        Ok(found)
    }

    pub(crate) fn all(self, guard: &SizeGuard) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        self.run(guard, |m| {
            out.push(m.to_vec());
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }
}

/// Every equivariant map `A → B`, ordered lexicographically by mapping table.
pub fn hom(a: &Arc<MSet>, b: &Arc<MSet>, guard: &SizeGuard) -> Result<Vec<EquivariantMap>> {
    let mut tables = hom_tables(a, b, guard)?;
    tables.sort_unstable();
    Ok(tables
        .into_iter()
        .map(|t| EquivariantMap::from_parts(a.clone(), b.clone(), t))
        .collect())
}

/// Raw mapping tables of [`hom`], in search order.
pub(crate) fn hom_tables(a: &MSet, b: &MSet, guard: &SizeGuard) -> Result<Vec<Vec<usize>>> {
    a.same_monoid(b)?;
    MapSearch::new(a, b).all(guard)
}

/// Some isomorphism `A → B`, or `None` if the two are not isomorphic.
pub fn find_isomorphism(a: &Arc<MSet>, b: &Arc<MSet>, guard: &SizeGuard) -> Result<Option<EquivariantMap>> {
    a.same_monoid(b)?;
    if a.size() != b.size() || !same_kernel_profile(a, b) {
        return Ok(None);
    }
    let found = MapSearch::new(a, b).injective().first(guard)?;
    Ok(found.map(|t| EquivariantMap::from_parts(a.clone(), b.clone(), t)).filter(|h| h.inverse().is_some()))
}

/// An isomorphism `h: E → F` with `h ∘ e = f`, when one exists.
pub fn find_isomorphism_over(
    e: &EquivariantMap,
    f: &EquivariantMap,
    guard: &SizeGuard,
) -> Result<Option<EquivariantMap>> {
    if !MSet::same(e.dom(), f.dom()) {
        return Err(Error::DomainMismatch("embeddings have different domains".into()));
    }
    let (src, dst) = (e.cod(), f.cod());
    src.same_monoid(dst)?;
    if src.size() != dst.size() || !same_kernel_profile(src, dst) {
        return Ok(None);
    }
    let mut search = MapSearch::new(src, dst).injective();
    for a in e.dom().elements() {
        search = search.fix(e.apply(a), f.apply(a));
    }
    let found = search.first(guard)?;
    Ok(found.map(|t| EquivariantMap::from_parts(src.clone(), dst.clone(), t)).filter(|h| h.inverse().is_some()))
}

/// Some `g: E → B` with `g ∘ m = f`, searching only the part of `E` outside
/// the image of `m`.
pub(crate) fn extend(m: &EquivariantMap, f: &EquivariantMap, guard: &SizeGuard) -> Result<Option<EquivariantMap>> {
    let (src, dst) = (m.cod(), f.cod());
    src.same_monoid(dst)?;
    let mut search = MapSearch::new(src, dst);
    for a in m.dom().elements() {
        search = search.fix(m.apply(a), f.apply(a));
    }
    let found = search.first(guard)?;
    Ok(found.map(|t| EquivariantMap::from_parts(src.clone(), dst.clone(), t)))
}

/// Multiset of orbit kernels, an isomorphism invariant refining carrier
/// size, fixed-point counts per monoid element and orbit sizes.
fn same_kernel_profile(a: &MSet, b: &MSet) -> bool {
    let profile = |s: &MSet| {
        let mut ks: Vec<Vec<usize>> = s.elements().map(|x| kernel(s, x)).collect();
        ks.sort_unstable();
        ks
    };
    profile(a) == profile(b)
}
