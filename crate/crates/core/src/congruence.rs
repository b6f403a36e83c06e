//! Congruences on M-sets: kernel pairs, principal congruences, quotients.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::guard::SizeGuard;
use crate::mset::{EquivariantMap, MSet};
use crate::search::find_isomorphism;

/// An action-compatible partition of an M-set's carrier.
///
/// Block ids are normalised so that blocks are numbered in order of their
/// smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Congruence {
    parent: Arc<MSet>,
    blocks: Vec<usize>,
    count: usize,
}

impl Congruence {
    /// Checks that `partition` (element → arbitrary block tag) respects the
    /// action.
    pub fn new(parent: &Arc<MSet>, partition: &[usize]) -> Result<Self> {
        if partition.len() != parent.size() {
            return Err(Error::TableShape(format!(
                "partition has {} entries for {} elements",
                partition.len(),
                parent.size()
            )));
        }
        let (blocks, count) = normalise(partition);
        for x in parent.elements() {
            for y in (x + 1)..parent.size() {
                if blocks[x] != blocks[y] {
                    continue;
                }
                for m in parent.monoid().elements() {
                    if blocks[parent.act(x, m)] != blocks[parent.act(y, m)] {
                        return Err(Error::NotCompatible {
                            x: parent.label(x).to_string(),
                            y: parent.label(y).to_string(),
                            m: parent.monoid().label(m).to_string(),
                        });
                    }
                }
            }
        }
        Ok(Congruence {
            parent: parent.clone(),
            blocks,
            count,
        })
    }

    fn from_parts(parent: &Arc<MSet>, partition: &[usize]) -> Self {
        let (blocks, count) = normalise(partition);
        Congruence {
            parent: parent.clone(),
            blocks,
            count,
        }
    }

    pub fn discrete(parent: &Arc<MSet>) -> Self {
        let ids: Vec<usize> = parent.elements().collect();
        Self::from_parts(parent, &ids)
    }

    pub fn total(parent: &Arc<MSet>) -> Self {
        Self::from_parts(parent, &vec![0; parent.size()])
    }

    pub fn parent(&self) -> &Arc<MSet> {
        &self.parent
    }

    /// Block id of every element.
    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.count
    }

    pub fn relates(&self, x: usize, y: usize) -> bool {
        self.blocks[x] == self.blocks[y]
    }

    pub fn is_discrete(&self) -> bool {
        self.count == self.parent.size()
    }

    /// Members of each block, blocks in id order.
    pub fn block_members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (x, &b) in self.blocks.iter().enumerate() {
            out[b].push(x);
        }
        out
    }

    /// Every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Congruence) -> bool {
        let mut image = vec![None; self.count];
        self.blocks.iter().zip(&other.blocks).all(|(&b, &o)| match image[b] {
            None => {
                image[b] = Some(o);
                true
            }
            Some(prev) => prev == o,
        })
    }

    /// Two distinct elements of `among` that share a block, if any.
    pub fn identifies_within(&self, among: &[usize]) -> Option<(usize, usize)> {
        let mut seen = vec![None; self.count];
        for &x in among {
            let b = self.blocks[x];
            match seen[b] {
                Some(prev) if prev != x => return Some((prev, x)),
                _ => seen[b] = Some(x),
            }
        }
        None
    }
}

fn normalise(partition: &[usize]) -> (Vec<usize>, usize) {
    let mut rename = HashMap::new();
    let blocks = partition
        .iter()
        .map(|tag| {
            let next = rename.len();
            *rename.entry(*tag).or_insert(next)
        })
        .collect();
    (blocks, rename.len())
}

/// The congruence whose blocks are the non-empty fibres of `f`.
pub fn kernel_pair(f: &EquivariantMap) -> Congruence {
    Congruence::from_parts(f.dom(), f.mapping())
}

/// The quotient by a congruence with its (epic) projection. Each block is
/// labelled by its smallest member in brackets.
pub fn coequalizer(theta: &Congruence) -> (Arc<MSet>, EquivariantMap) {
    let parent = &theta.parent;
    let monoid = parent.monoid().clone();
    let members = theta.block_members();
    let labels = members.iter().map(|b| format!("[{}]", parent.label(b[0]))).collect();
    let mut action = Vec::with_capacity(theta.count * monoid.size());
    for block in &members {
        for m in monoid.elements() {
            let image = theta.blocks[parent.act(block[0], m)];
            debug_assert!(block.iter().all(|&x| theta.blocks[parent.act(x, m)] == image));
            action.push(image);
        }
    }
    let quotient = Arc::new(MSet::from_parts(monoid, labels, action));
    let proj = EquivariantMap::from_parts(parent.clone(), quotient.clone(), theta.blocks.clone());
    (quotient, proj)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
        self.parent[hi] = lo;
        true
    }
}

/// A congruence on a fixed M-set that only ever grows. Each class is
/// represented by its smallest member.
pub(crate) struct GrowingCongruence {
    set: Arc<MSet>,
    uf: UnionFind,
}

impl GrowingCongruence {
    pub(crate) fn discrete(set: &Arc<MSet>) -> Self {
        GrowingCongruence {
            set: set.clone(),
            uf: UnionFind::new(set.size()),
        }
    }

    pub(crate) fn rep(&mut self, x: usize) -> usize {
        self.uf.find(x)
    }

    /// Joins the principal congruence of `(b, b2)`.
    pub(crate) fn merge(&mut self, b: usize, b2: usize) {
        let mut pending = vec![(b, b2)];
        while let Some((x, y)) = pending.pop() {
            if self.uf.union(x, y) {
                for m in self.set.monoid().elements() {
                    pending.push((self.set.act(x, m), self.set.act(y, m)));
                }
            }
        }
    }

    /// Whether the join with the principal congruence of `(b, b2)` relates two
    /// members of `among` that are apart now. Nothing is merged.
    pub(crate) fn join_identifies(&mut self, b: usize, b2: usize, among: &[usize]) -> Option<(usize, usize)> {
        let mut overlay: HashMap<usize, usize> = HashMap::new();
        fn find(overlay: &HashMap<usize, usize>, mut x: usize) -> usize {
            while let Some(&p) = overlay.get(&x) {
                x = p;
            }
            x
        }
        let mut pending = vec![(b, b2)];
        while let Some((x, y)) = pending.pop() {
            let rx = find(&overlay, self.uf.find(x));
            let ry = find(&overlay, self.uf.find(y));
            if rx == ry {
                continue;
            }
            let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
            overlay.insert(hi, lo);
            for m in self.set.monoid().elements() {
                pending.push((self.set.act(x, m), self.set.act(y, m)));
            }
        }
        let mut seen: HashMap<usize, usize> = HashMap::new();
        for &x in among {
            let r = find(&overlay, self.uf.find(x));
            match seen.get(&r) {
                Some(&prev) if self.uf.find(prev) != self.uf.find(x) => return Some((prev, x)),
                _ => {
                    seen.insert(r, x);
                }
            }
        }
        None
    }

    pub(crate) fn finish(mut self) -> Congruence {
        let roots: Vec<usize> = self.set.elements().map(|x| self.uf.find(x)).collect();
        Congruence::from_parts(&self.set, &roots)
    }
}

/// The smallest congruence relating `b` and `b2`.
///
/// Merges the pair, then keeps merging `x·m` with `y·m` for every pair that
/// was actually joined until nothing changes.
pub fn principal_congruence(set: &Arc<MSet>, b: usize, b2: usize) -> Result<Congruence> {
    if b == b2 {
        return Err(Error::SameElement(set.label(b).to_string()));
    }
    let mut uf = UnionFind::new(set.size());
    let mut pending = vec![(b, b2)];
    while let Some((x, y)) = pending.pop() {
        if uf.union(x, y) {
            for m in set.monoid().elements() {
                pending.push((set.act(x, m), set.act(y, m)));
            }
        }
    }
    let roots: Vec<usize> = set.elements().map(|x| uf.find(x)).collect();
    Ok(Congruence::from_parts(set, &roots))
}

/// What `principal_congruence(set, b, b2)?.identifies_within(among)` returns,
/// touching only the elements the merge actually reaches.
pub(crate) fn principal_identifies(set: &MSet, b: usize, b2: usize, among: &[usize]) -> Option<(usize, usize)> {
    let mut parent: HashMap<usize, usize> = HashMap::new();
    fn find(parent: &mut HashMap<usize, usize>, mut x: usize) -> usize {
        while let Some(&p) = parent.get(&x) {
            if p == x {
                break;
            }
            x = p;
        }
        x
    }
    let mut pending = vec![(b, b2)];
    while let Some((x, y)) = pending.pop() {
        parent.entry(x).or_insert(x);
        parent.entry(y).or_insert(y);
        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
        if rx == ry {
            continue;
        }
        let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
        parent.insert(hi, lo);
        for m in set.monoid().elements() {
            pending.push((set.act(x, m), set.act(y, m)));
        }
    }
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for &x in among {
        if !parent.contains_key(&x) {
            continue;
        }
        let r = find(&mut parent, x);
        match seen.get(&r) {
            Some(&prev) if prev != x => return Some((prev, x)),
            _ => {
                seen.insert(r, x);
            }
        }
    }
    None
}

/// Every congruence on `set`, in restricted-growth-string order of the block
/// assignment (so the total congruence comes first).
pub fn enumerate_congruences(set: &Arc<MSet>, guard: &SizeGuard) -> Result<Vec<Congruence>> {
    let n = set.size();
    let mut budget = guard.budget();

    // Pairs inside the assigned prefix whose translates are also assigned
    // must stay together.
    fn consistent(set: &MSet, rgs: &[usize], upto: usize) -> bool {
        (0..=upto).all(|y| {
            ((y + 1)..=upto).all(|z| {
                rgs[y] != rgs[z]
                    || set.monoid().elements().all(|m| {
                        let (ym, zm) = (set.act(y, m), set.act(z, m));
                        ym > upto || zm > upto || rgs[ym] == rgs[zm]
                    })
            })
        })
    }

    fn descend(
        set: &MSet,
        i: usize,
        max_block: usize,
        rgs: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        budget: &mut crate::guard::Budget,
    ) -> Result<()> {
        budget.spend(1)?;
        if i == set.size() {
            out.push(rgs.clone());
            return Ok(());
        }
        for b in 0..=max_block {
            rgs[i] = b;
            if consistent(set, rgs, i) {
                let next_max = if b == max_block { max_block + 1 } else { max_block };
                descend(set, i + 1, next_max, rgs, out, budget)?;
            }
        }
        Ok(())
    }

    if n == 0 {
        return Ok(vec![Congruence::discrete(set)]);
    }
    let mut raw = Vec::new();
    let mut rgs = vec![0usize; n];
    descend(set, 1, 1, &mut rgs, &mut raw, &mut budget)?;
    Ok(raw.iter().map(|p| Congruence::from_parts(set, p)).collect())
}

/// One quotient per isomorphism class of epimorphic images of `set`, in the
/// order their first congruence appears.
pub fn quotients_up_to_iso(set: &Arc<MSet>, guard: &SizeGuard) -> Result<Vec<(Arc<MSet>, EquivariantMap)>> {
    let mut reps: Vec<(Arc<MSet>, EquivariantMap)> = Vec::new();
    for theta in enumerate_congruences(set, guard)? {
        let (q, proj) = coequalizer(&theta);
        let mut known = false;
        for (r, _) in &reps {
            if find_isomorphism(&q, r, guard)?.is_some() {
                known = true;
                break;
            }
        }
        if !known {
            reps.push((q, proj));
        }
    }
    Ok(reps)
}
