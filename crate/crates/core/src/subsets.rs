//! Enumeration of subsets closed under a family of principal closures.

use crate::error::Result;
use crate::guard::Budget;

/// All unions of the given principal closures, each exactly once, sorted by
/// size and then lexicographically by their sorted member lists.
///
/// `principal[i]` must contain `i` and be closed in its own right (so that
/// unions of closures are exactly the closed sets).
pub(crate) fn closed_subsets(principal: &[Vec<usize>], budget: &mut Budget) -> Result<Vec<Vec<usize>>> {
    let n = principal.len();
    let mut state = State {
        principal,
        included: vec![0usize; n],
        excluded: vec![false; n],
        out: Vec::new(),
    };
    state.descend(0, budget)?;
    let mut out = state.out;
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

struct State<'a> {
    principal: &'a [Vec<usize>],
    // inclusion count so that overlapping closures can be undone
    included: Vec<usize>,
    excluded: Vec<bool>,
    out: Vec<Vec<usize>>,
}

impl State<'_> {
    fn descend(&mut self, i: usize, budget: &mut Budget) -> Result<()> {
        budget.spend(1)?;
        if i == self.principal.len() {
            let members = (0..i).filter(|&j| self.included[j] > 0).collect();
            self.out.push(members);
            return Ok(());
        }
        if self.included[i] > 0 {
            return self.descend(i + 1, budget);
        }
        self.excluded[i] = true;
        self.descend(i + 1, budget)?;
        self.excluded[i] = false;

        let principal = self.principal;
        let closure = &principal[i];
        if closure.iter().all(|&j| !self.excluded[j]) {
            for &j in closure {
                self.included[j] += 1;
            }
            self.descend(i + 1, budget)?;
            for &j in closure {
                self.included[j] -= 1;
            }
        }
        Ok(())
    }
}
