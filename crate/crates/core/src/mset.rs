//! Finite right M-sets and equivariant maps between them.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::guard::SizeGuard;
use crate::monoid::{check_distinct, FiniteMonoid};
use crate::subsets::closed_subsets;

/// A finite set with a right action of a finite monoid.
///
/// Two `MSet`s are the same object only when their presentations agree
/// (monoid, labels and action table); use
/// [`find_isomorphism`](crate::search::find_isomorphism) to compare up to
/// isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MSet {
    monoid: Arc<FiniteMonoid>,
    labels: Vec<String>,
    // row-major, size * monoid.size()
    action: Vec<usize>,
}

impl MSet {
    /// Checks an action table (row `x`, column `m` holds `x·m`) and builds the
    /// M-set.
    pub fn validate(monoid: Arc<FiniteMonoid>, labels: Vec<String>, action: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        let k = monoid.size();
        check_distinct(&labels)?;
        if action.len() != n {
            return Err(Error::TableShape(format!(
                "action table has {} rows for {} elements",
                action.len(),
                n
            )));
        }
        for (x, row) in action.iter().enumerate() {
            if row.len() != k {
                return Err(Error::TableShape(format!(
                    "action row {} has {} entries for a monoid of size {}",
                    labels[x],
                    row.len(),
                    k
                )));
            }
            if let Some(&v) = row.iter().find(|&&v| v >= n) {
                return Err(Error::IndexOutOfRange {
                    context: format!("action row {}", labels[x]),
                    index: v,
                    size: n,
                });
            }
        }
        let set = MSet {
            monoid,
            labels,
            action: action.into_iter().flatten().collect(),
        };
        set.check_laws()?;
        Ok(set)
    }

    fn check_laws(&self) -> Result<()> {
        let monoid = &self.monoid;
        for x in self.elements() {
            if self.act(x, monoid.identity()) != x {
                return Err(Error::UnitLawViolation {
                    x: self.labels[x].clone(),
                });
            }
            for m in monoid.elements() {
                let xm = self.act(x, m);
                for n in monoid.elements() {
                    if self.act(xm, n) != self.act(x, monoid.mul(m, n)) {
                        return Err(Error::ActionLawViolation {
                            x: self.labels[x].clone(),
                            m: monoid.label(m).to_string(),
                            n: monoid.label(n).to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Builds an M-set from a flat action table that is already known to be
    /// lawful. Laws are still checked in debug builds.
    pub(crate) fn from_parts(monoid: Arc<FiniteMonoid>, labels: Vec<String>, action: Vec<usize>) -> Self {
        debug_assert_eq!(action.len(), labels.len() * monoid.size());
        let set = MSet {
            monoid,
            labels,
            action,
        };
        debug_assert!(set.check_laws().is_ok(), "unlawful generated M-set");
        set
    }

    /// The monoid acting on itself by right multiplication.
    pub fn regular(monoid: &Arc<FiniteMonoid>) -> Self {
        let n = monoid.size();
        let action = (0..n).flat_map(|x| monoid.row(x).to_vec()).collect();
        Self::from_parts(monoid.clone(), monoid.labels().to_vec(), action)
    }

    /// A single fixed point.
    pub fn terminal(monoid: &Arc<FiniteMonoid>) -> Self {
        Self::from_parts(monoid.clone(), vec!["*".into()], vec![0; monoid.size()])
    }

    /// The empty M-set.
    pub fn empty(monoid: &Arc<FiniteMonoid>) -> Self {
        Self::from_parts(monoid.clone(), Vec::new(), Vec::new())
    }

    /// `n` fixed points labelled `x0..`; over the trivial monoid this is just
    /// an `n`-element set.
    pub fn discrete(monoid: &Arc<FiniteMonoid>, n: usize) -> Self {
        let labels = (0..n).map(|i| format!("x{i}")).collect();
        let action = (0..n).flat_map(|x| std::iter::repeat_n(x, monoid.size())).collect();
        Self::from_parts(monoid.clone(), labels, action)
    }

    pub fn monoid(&self) -> &Arc<FiniteMonoid> {
        &self.monoid
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.labels.len()
    }

    #[inline]
    pub fn act(&self, x: usize, m: usize) -> usize {
        self.action[x * self.monoid.size() + m]
    }

    /// `x·m` for every monoid element `m`, in monoid order.
    pub fn orbit_row(&self, x: usize) -> &[usize] {
        let k = self.monoid.size();
        &self.action[x * k..(x + 1) * k]
    }

    /// The sub-M-set generated by `x`, sorted.
    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut o = self.orbit_row(x).to_vec();
        o.sort_unstable();
        o.dedup();
        o
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The action as nested rows, suitable for re-validation.
    pub fn action_rows(&self) -> Vec<Vec<usize>> {
        self.elements().map(|x| self.orbit_row(x).to_vec()).collect()
    }

    /// Same object up to presentation; cheap when both handles are shared.
    pub fn same(a: &Arc<MSet>, b: &Arc<MSet>) -> bool {
        Arc::ptr_eq(a, b) || a == b
    }

    pub(crate) fn same_monoid(&self, other: &MSet) -> Result<()> {
        if Arc::ptr_eq(&self.monoid, &other.monoid) || self.monoid == other.monoid {
            Ok(())
        } else {
            Err(Error::MonoidMismatch)
        }
    }

    /// Elements that are not reachable from any element outside their own
    /// orbit. Every element lies in the orbit of one of these, so assigning
    /// them determines an equivariant map.
    pub(crate) fn generators(&self) -> Vec<usize> {
        let orbits: Vec<Vec<usize>> = self.elements().map(|x| self.orbit(x)).collect();
        let mut gens = Vec::new();
        let mut covered = vec![false; self.size()];
        // largest orbits first; ties by index
        let mut order: Vec<usize> = self.elements().collect();
        order.sort_by(|&a, &b| orbits[b].len().cmp(&orbits[a].len()).then(a.cmp(&b)));
        for x in order {
            if !covered[x] {
                gens.push(x);
                for &y in &orbits[x] {
                    covered[y] = true;
                }
            }
        }
        gens
    }
}

impl fmt::Display for MSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels.join(", "))
    }
}

/// An action-preserving function between two M-sets over the same monoid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EquivariantMap {
    dom: Arc<MSet>,
    cod: Arc<MSet>,
    mapping: Vec<usize>,
}

impl EquivariantMap {
    pub fn new(dom: Arc<MSet>, cod: Arc<MSet>, mapping: Vec<usize>) -> Result<Self> {
        dom.same_monoid(&cod)?;
        if mapping.len() != dom.size() {
            return Err(Error::TableShape(format!(
                "map has {} entries for a domain of size {}",
                mapping.len(),
                dom.size()
            )));
        }
        if let Some(&v) = mapping.iter().find(|&&v| v >= cod.size()) {
            return Err(Error::IndexOutOfRange {
                context: "map value".into(),
                index: v,
                size: cod.size(),
            });
        }
        let map = EquivariantMap { dom, cod, mapping };
        map.check_equivariant()?;
        Ok(map)
    }

    fn check_equivariant(&self) -> Result<()> {
        for x in self.dom.elements() {
            for m in self.dom.monoid().elements() {
                if self.mapping[self.dom.act(x, m)] != self.cod.act(self.mapping[x], m) {
                    return Err(Error::NotEquivariant {
                        x: self.dom.label(x).to_string(),
                        m: self.dom.monoid().label(m).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    pub(crate) fn from_parts(dom: Arc<MSet>, cod: Arc<MSet>, mapping: Vec<usize>) -> Self {
        let map = EquivariantMap { dom, cod, mapping };
        debug_assert!(map.check_equivariant().is_ok(), "generated map is not equivariant");
        map
    }

    pub fn identity(a: &Arc<MSet>) -> Self {
        Self::from_parts(a.clone(), a.clone(), a.elements().collect())
    }

    /// `g ∘ f`; requires `cod(f)` and `dom(g)` to be the same object.
    pub fn compose(g: &EquivariantMap, f: &EquivariantMap) -> Result<Self> {
        if !MSet::same(&f.cod, &g.dom) {
            return Err(Error::DomainMismatch(
                "codomain of the first map is not the domain of the second".into(),
            ));
        }
        let mapping = f.mapping.iter().map(|&x| g.mapping[x]).collect();
        Ok(Self::from_parts(f.dom.clone(), g.cod.clone(), mapping))
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &EquivariantMap) -> Result<Self> {
        Self::compose(self, f)
    }

    pub fn dom(&self) -> &Arc<MSet> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<MSet> {
        &self.cod
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.mapping[x]
    }

    pub fn is_endo(&self) -> bool {
        MSet::same(&self.dom, &self.cod)
    }

    pub fn is_identity(&self) -> bool {
        self.is_endo() && self.mapping.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Injective on elements.
    pub fn is_monic(&self) -> bool {
        self.collision().is_none()
    }

    /// Two distinct elements with the same image, if any.
    pub fn collision(&self) -> Option<(usize, usize)> {
        let mut seen = vec![None; self.cod.size()];
        for (x, &y) in self.mapping.iter().enumerate() {
            if let Some(prev) = seen[y] {
                return Some((prev, x));
            }
            seen[y] = Some(x);
        }
        None
    }

    /// Surjective onto the codomain.
    pub fn is_epic(&self) -> bool {
        self.missed().is_none()
    }

    /// A codomain element outside the image, if any.
    pub fn missed(&self) -> Option<usize> {
        let mut hit = vec![false; self.cod.size()];
        for &y in &self.mapping {
            hit[y] = true;
        }
        hit.iter().position(|h| !h)
    }

    pub fn is_iso(&self) -> bool {
        self.dom.size() == self.cod.size() && self.is_monic()
    }

    /// Sorted distinct image elements.
    pub fn image(&self) -> Vec<usize> {
        let mut img = self.mapping.clone();
        img.sort_unstable();
        img.dedup();
        img
    }

    /// The inverse table of a bijection, checked for equivariance.
    pub fn inverse(&self) -> Option<EquivariantMap> {
        if !self.is_iso() {
            return None;
        }
        let mut inv = vec![0; self.cod.size()];
        for (x, &y) in self.mapping.iter().enumerate() {
            inv[y] = x;
        }
        EquivariantMap::new(self.cod.clone(), self.dom.clone(), inv).ok()
    }

}

impl fmt::Display for EquivariantMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .mapping
            .iter()
            .enumerate()
            .map(|(x, &y)| format!("{}->{}", self.dom.label(x), self.cod.label(y)))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// `A × B` with its projections. Pair `(x, y)` sits at index `x·|B| + y`.
#[derive(Debug, Clone)]
pub struct Product {
    pub object: Arc<MSet>,
    pub left: Arc<MSet>,
    pub right: Arc<MSet>,
    pub proj1: EquivariantMap,
    pub proj2: EquivariantMap,
}

impl Product {
    pub fn new(a: &Arc<MSet>, b: &Arc<MSet>) -> Result<Self> {
        a.same_monoid(b)?;
        let monoid = a.monoid().clone();
        let (na, nb) = (a.size(), b.size());
        let mut labels = Vec::with_capacity(na * nb);
        let mut action = Vec::with_capacity(na * nb * monoid.size());
        for x in a.elements() {
            for y in b.elements() {
                labels.push(format!("({},{})", a.label(x), b.label(y)));
                for m in monoid.elements() {
                    action.push(a.act(x, m) * nb + b.act(y, m));
                }
            }
        }
        let object = Arc::new(MSet::from_parts(monoid, labels, action));
        let proj1 = EquivariantMap::from_parts(object.clone(), a.clone(), (0..na * nb).map(|p| p / nb).collect());
        let proj2 = EquivariantMap::from_parts(object.clone(), b.clone(), (0..na * nb).map(|p| p % nb).collect());
        Ok(Product {
            object,
            left: a.clone(),
            right: b.clone(),
            proj1,
            proj2,
        })
    }

    #[inline]
    pub fn pair(&self, x: usize, y: usize) -> usize {
        x * self.right.size() + y
    }

    /// `⟨f, g⟩: C → A × B`.
    pub fn pairing(&self, f: &EquivariantMap, g: &EquivariantMap) -> Result<EquivariantMap> {
        if !MSet::same(f.dom(), g.dom()) || !MSet::same(f.cod(), &self.left) || !MSet::same(g.cod(), &self.right) {
            return Err(Error::DomainMismatch("pairing legs do not match the product".into()));
        }
        let mapping = f.dom().elements().map(|c| self.pair(f.apply(c), g.apply(c))).collect();
        Ok(EquivariantMap::from_parts(f.dom().clone(), self.object.clone(), mapping))
    }
}

pub fn product(a: &Arc<MSet>, b: &Arc<MSet>) -> Result<Product> {
    Product::new(a, b)
}

/// An action-closed subset of an M-set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubMSet {
    parent: Arc<MSet>,
    members: Vec<usize>,
}

impl SubMSet {
    /// `None` if `members` is not closed under the action.
    pub fn new(parent: &Arc<MSet>, mut members: Vec<usize>) -> Option<Self> {
        members.sort_unstable();
        members.dedup();
        if members.iter().any(|&x| x >= parent.size()) {
            return None;
        }
        let closed = members
            .iter()
            .all(|&x| parent.orbit_row(x).iter().all(|y| members.binary_search(y).is_ok()));
        closed.then(|| SubMSet {
            parent: parent.clone(),
            members,
        })
    }

    /// The smallest sub-M-set containing `seeds`.
    pub fn generated_by(parent: &Arc<MSet>, seeds: impl IntoIterator<Item = usize>) -> Self {
        let mut inside = vec![false; parent.size()];
        for s in seeds {
            for &y in parent.orbit_row(s) {
                inside[y] = true;
            }
        }
        SubMSet {
            parent: parent.clone(),
            members: (0..parent.size()).filter(|&x| inside[x]).collect(),
        }
    }

    pub fn parent(&self) -> &Arc<MSet> {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The subobject as an M-set in its own right, keeping the parent's
    /// labels and relative element order.
    pub fn object(&self) -> MSet {
        let monoid = self.parent.monoid().clone();
        let labels = self.members.iter().map(|&x| self.parent.label(x).to_string()).collect();
        let action = self
            .members
            .iter()
            .flat_map(|&x| {
                self.parent
                    .orbit_row(x)
                    .iter()
                    .map(|y| self.members.binary_search(y).expect("closed"))
                    .collect::<Vec<_>>()
            })
            .collect();
        MSet::from_parts(monoid, labels, action)
    }

    /// The monic inclusion of [`object`](Self::object) into the parent.
    pub fn include(&self) -> EquivariantMap {
        EquivariantMap::from_parts(Arc::new(self.object()), self.parent.clone(), self.members.clone())
    }

    /// Corestricts `f` to this subobject of its codomain, if its image fits.
    pub fn corestrict(&self, f: &EquivariantMap, object: &Arc<MSet>) -> Option<EquivariantMap> {
        if !MSet::same(f.cod(), &self.parent) {
            return None;
        }
        let mapping = f
            .mapping()
            .iter()
            .map(|y| self.members.binary_search(y).ok())
            .collect::<Option<Vec<_>>>()?;
        Some(EquivariantMap::from_parts(f.dom().clone(), object.clone(), mapping))
    }
}

/// Every action-closed subset of `set`, smallest first, ties broken
/// lexicographically by sorted membership.
pub fn sub_msets(set: &Arc<MSet>, guard: &SizeGuard) -> Result<Vec<SubMSet>> {
    let principal: Vec<Vec<usize>> = set.elements().map(|x| set.orbit(x)).collect();
    let mut budget = guard.budget();
    Ok(closed_subsets(&principal, &mut budget)?
        .into_iter()
        .map(|members| SubMSet {
            parent: set.clone(),
            members,
        })
        .collect())
}

pub fn include(s: &SubMSet) -> EquivariantMap {
    s.include()
}

/// Image factorisation `f = m ∘ e` with `e` epic and `m` monic.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub image: SubMSet,
    pub epi: EquivariantMap,
    pub mono: EquivariantMap,
}

pub fn epi_mono_factorize(f: &EquivariantMap) -> Factorization {
    let image = SubMSet::new(f.cod(), f.image()).expect("image of an equivariant map is closed");
    let mono = image.include();
    let epi = image.corestrict(f, mono.dom()).expect("map factors through its image");
    Factorization { image, epi, mono }
}
