//! Finite monoids given by multiplication tables, and their right ideals.
//!
//! Elements are addressed by their index in declaration order. Products are
//! read row-first: `mul(i, j)` is the element `i·j`.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::guard::SizeGuard;
use crate::subsets::closed_subsets;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteMonoid {
    labels: Vec<String>,
    // row-major, size * size
    table: Vec<usize>,
    identity: usize,
}

impl FiniteMonoid {
    /// Checks a multiplication table and builds the monoid.
    ///
    /// Validation order is shape, then index range, then the unit laws, then
    /// associativity; the first violation found is reported.
    pub fn validate(labels: Vec<String>, table: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        let n = labels.len();
        check_distinct(&labels)?;
        if table.len() != n {
            return Err(Error::TableShape(format!(
                "monoid table has {} rows for {} elements",
                table.len(),
                n
            )));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::TableShape(format!(
                    "monoid table row {} has {} entries for {} elements",
                    labels[i],
                    row.len(),
                    n
                )));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::IndexOutOfRange {
                        context: format!("monoid table row {}", labels[i]),
                        index: v,
                        size: n,
                    });
                }
            }
        }
        if identity >= n {
            return Err(Error::IndexOutOfRange {
                context: "monoid identity".into(),
                index: identity,
                size: n,
            });
        }
        let monoid = FiniteMonoid {
            table: table.into_iter().flatten().collect(),
            labels,
            identity,
        };
        for x in 0..n {
            if monoid.mul(identity, x) != x || monoid.mul(x, identity) != x {
                return Err(Error::BadIdentity {
                    x: monoid.labels[x].clone(),
                });
            }
        }
        for x in 0..n {
            for y in 0..n {
                let xy = monoid.mul(x, y);
                for z in 0..n {
                    if monoid.mul(xy, z) != monoid.mul(x, monoid.mul(y, z)) {
                        return Err(Error::NotAssociative {
                            x: monoid.labels[x].clone(),
                            y: monoid.labels[y].clone(),
                            z: monoid.labels[z].clone(),
                        });
                    }
                }
            }
        }
        Ok(monoid)
    }

    /// The one-element monoid; its M-sets are plain finite sets.
    pub fn trivial() -> Self {
        Self::validate(vec!["1".into()], vec![vec![0]], 0).expect("trivial monoid")
    }

    /// `{1, e}` with `e·e = e`.
    pub fn idempotent() -> Self {
        Self::validate(
            vec!["1".into(), "e".into()],
            vec![vec![0, 1], vec![1, 1]],
            0,
        )
        .expect("idempotent monoid")
    }

    /// The cyclic group of order `n >= 1`, elements `1, g, g2, ...`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group needs at least one element");
        let labels = (0..n)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "g".to_string(),
                _ => format!("g{k}"),
            })
            .collect();
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::validate(labels, table, 0).expect("cyclic group")
    }

    /// An identity adjoined to `k` right zeros `z1..zk` (so `x·zi = zi`).
    pub fn right_zeros(k: usize) -> Self {
        let n = k + 1;
        let labels = (0..n)
            .map(|i| if i == 0 { "1".to_string() } else { format!("z{i}") })
            .collect();
        let table = (0..n)
            .map(|i| (0..n).map(|j| if j == 0 { i } else { j }).collect())
            .collect();
        Self::validate(labels, table, 0).expect("right-zero monoid")
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.labels.len() + y]
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

    /// Row `x` of the table: `x·m` for every `m`.
    pub fn row(&self, x: usize) -> &[usize] {
        let n = self.labels.len();
        &self.table[x * n..(x + 1) * n]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.labels.len()
    }

    /// Every right ideal of the monoid, smallest first, ties broken
    /// lexicographically by sorted membership. Always starts with the empty
    /// ideal and ends with the whole monoid.
    pub fn right_ideals(&self) -> Vec<RightIdeal> {
        let principal: Vec<Vec<usize>> = self
            .elements()
            .map(|x| {
                let mut ideal: Vec<usize> = self.row(x).to_vec();
                ideal.sort_unstable();
                ideal.dedup();
                ideal
            })
            .collect();
        // a monoid small enough to tabulate has few enough ideals to list
        let mut budget = SizeGuard::new(usize::MAX).budget();
        closed_subsets(&principal, &mut budget)
            .expect("unbounded budget")
            .into_iter()
            .map(|members| RightIdeal { members })
            .collect()
    }
}

pub(crate) fn check_distinct(labels: &[String]) -> Result<()> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

/// A set of monoid elements closed under right multiplication.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RightIdeal {
    members: Vec<usize>,
}

impl RightIdeal {
    /// Builds an ideal from arbitrary members, or `None` if they are not
    /// closed under right multiplication.
    pub fn new(monoid: &FiniteMonoid, mut members: Vec<usize>) -> Option<Self> {
        members.sort_unstable();
        members.dedup();
        let closed = members
            .iter()
            .all(|&i| monoid.row(i).iter().all(|p| members.binary_search(p).is_ok()));
        closed.then_some(RightIdeal { members })
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
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(ls: &[&str]) -> Vec<String> {
        ls.iter().map(|s| s.to_string()).collect()
    }

    /// All subsets closed under right multiplication, by plain filtering.
    fn ideals_by_filter(m: &FiniteMonoid) -> Vec<Vec<usize>> {
        let n = m.size();
        let mut out: Vec<Vec<usize>> = (0u32..(1 << n))
            .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect::<Vec<_>>())
            .filter(|s: &Vec<usize>| {
                s.iter()
                    .all(|&i| m.elements().all(|j| s.contains(&m.mul(i, j))))
            })
            .collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    #[test]
    fn trivial_monoid_validates() {
        let m = FiniteMonoid::validate(labels(&["1"]), vec![vec![0]], 0).unwrap();
        assert_eq!(m.size(), 1);
    }

    #[test]
    fn idempotent_monoid_validates() {
        let m = FiniteMonoid::validate(labels(&["1", "e"]), vec![vec![0, 1], vec![1, 1]], 0).unwrap();
        assert_eq!(m.mul(1, 1), 1);
    }

    #[test]
    fn bad_identity_is_rejected() {
        // claims e·1 = 1
        let err = FiniteMonoid::validate(labels(&["1", "e"]), vec![vec![0, 1], vec![0, 1]], 0).unwrap_err();
        assert_eq!(err, Error::BadIdentity { x: "e".into() });
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // a·a = b, a·b = a: (a·a)·a = b but a·(a·a) = a
        let t = vec![vec![0, 1, 2], vec![1, 2, 1], vec![2, 2, 1]];
        let err = FiniteMonoid::validate(labels(&["1", "a", "b"]), t, 0).unwrap_err();
        assert!(matches!(err, Error::NotAssociative { .. }), "{err:?}");
    }

    #[test]
    fn out_of_range_and_shape_errors() {
        let err = FiniteMonoid::validate(labels(&["1", "e"]), vec![vec![0, 5], vec![1, 1]], 0).unwrap_err();
        assert!(matches!(err, Error::IndexOutOfRange { index: 5, .. }));
        let err = FiniteMonoid::validate(labels(&["1", "e"]), vec![vec![0, 1]], 0).unwrap_err();
        assert!(matches!(err, Error::TableShape(_)));
        let err = FiniteMonoid::validate(labels(&["1", "1"]), vec![vec![0, 1], vec![1, 1]], 0).unwrap_err();
        assert_eq!(err, Error::DuplicateLabel("1".into()));
    }

    #[test]
    fn ideals_of_small_monoids() {
        let t = FiniteMonoid::trivial().right_ideals();
        assert_eq!(t.iter().map(|i| i.members().to_vec()).collect::<Vec<_>>(), vec![vec![], vec![0]]);

        let e = FiniteMonoid::idempotent().right_ideals();
        assert_eq!(
            e.iter().map(|i| i.members().to_vec()).collect::<Vec<_>>(),
            vec![vec![], vec![1], vec![0, 1]]
        );

        let c2 = FiniteMonoid::cyclic(2).right_ideals();
        assert_eq!(c2.iter().map(|i| i.members().to_vec()).collect::<Vec<_>>(), vec![vec![], vec![0, 1]]);
    }

    #[test]
    fn ideals_match_filter_oracle() {
        for m in [
            FiniteMonoid::trivial(),
            FiniteMonoid::idempotent(),
            FiniteMonoid::cyclic(2),
            FiniteMonoid::cyclic(3),
            FiniteMonoid::right_zeros(2),
            FiniteMonoid::right_zeros(3),
        ] {
            let got: Vec<Vec<usize>> = m.right_ideals().into_iter().map(|i| i.members).collect();
            assert_eq!(got, ideals_by_filter(&m));
            assert!(got.first().unwrap().is_empty());
            assert_eq!(got.last().unwrap().len(), m.size());
        }
    }

    #[test]
    fn right_zero_monoid_is_associative() {
        let m = FiniteMonoid::right_zeros(2);
        assert_eq!(m.mul(1, 2), 2);
        assert_eq!(m.mul(2, 1), 1);
        assert_eq!(m.mul(1, 0), 1);
    }

    #[test]
    fn ideal_constructor_rejects_unclosed_sets() {
        let m = FiniteMonoid::idempotent();
        assert!(RightIdeal::new(&m, vec![0]).is_none());
        assert!(RightIdeal::new(&m, vec![1]).is_some());
    }
}
