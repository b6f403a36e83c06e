//! Inverses of monic and epic endomorphisms by power iteration, and
//! Schröder–Bernstein witnesses.
//!
//! Because every hom-set is finite, the powers `f^0, f^1, ...` of an
//! endomorphism must repeat: `f^(m+n+1) = f^m` for some `m, n`. When `f` is
//! cancellable the repetition can be cancelled down to `f^(n+1) = 1`, which
//! makes `f^n` a two-sided inverse.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::mset::EquivariantMap;

/// The exponents of the first repetition `f^(m+n+1) = f^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowerCycle {
    pub tail: usize,
    pub period: usize,
}

fn power(f: &EquivariantMap, k: usize) -> EquivariantMap {
    let mut p = EquivariantMap::identity(f.dom());
    for _ in 0..k {
        p = EquivariantMap::compose(f, &p).expect("endomorphism");
    }
    p
}

/// Iterates powers of an endomorphism until one repeats.
pub fn power_cycle(f: &EquivariantMap) -> Result<PowerCycle> {
    if !f.is_endo() {
        return Err(Error::NotEndo { which: "f".into() });
    }
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut current = EquivariantMap::identity(f.dom());
    let mut k = 0;
    loop {
        if let Some(&first) = seen.get(current.mapping()) {
            // f^k = f^first with k = first + period
            return Ok(PowerCycle {
                tail: first,
                period: k - first,
            });
        }
        seen.insert(current.mapping().to_vec(), k);
        current = EquivariantMap::compose(f, &current)?;
        k += 1;
    }
}

fn cycle_inverse(f: &EquivariantMap) -> Result<EquivariantMap> {
    let cycle = power_cycle(f)?;
    // f^(tail + period) = f^tail cancels to f^period = 1, so f^(period - 1)
    // is the inverse
    let inverse = power(f, cycle.period - 1);
    let id = EquivariantMap::identity(f.dom());
    let left = EquivariantMap::compose(&inverse, f)?;
    let right = EquivariantMap::compose(f, &inverse)?;
    if left != id || right != id {
        return Err(Error::InternalInconsistency(format!(
            "power {} of a cancellable endomorphism is not its inverse",
            cycle.period - 1
        )));
    }
    Ok(inverse)
}

/// The inverse of a monic endomorphism, which is always an automorphism.
pub fn monic_endo_inverse(f: &EquivariantMap) -> Result<EquivariantMap> {
    if !f.is_endo() {
        return Err(Error::NotEndo { which: "f".into() });
    }
    if !f.is_monic() {
        return Err(Error::NotMonic { which: "f".into() });
    }
    cycle_inverse(f)
}

/// The inverse of an epic endomorphism; the dual of [`monic_endo_inverse`].
pub fn epic_endo_inverse(f: &EquivariantMap) -> Result<EquivariantMap> {
    if !f.is_endo() {
        return Err(Error::NotEndo { which: "f".into() });
    }
    if !f.is_epic() {
        return Err(Error::NotEpic { which: "f".into() });
    }
    cycle_inverse(f)
}

/// Two-sided inverses of a pair of monics running in opposite directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchroederBernstein {
    /// `B → A`, inverse to `f`.
    pub f_inverse: EquivariantMap,
    /// `A → B`, inverse to `g`.
    pub g_inverse: EquivariantMap,
}

/// Given monics `f: A → B` and `g: B → A`, inverts both.
///
/// `g∘f` and `f∘g` are monic endomorphisms, hence invertible; then
/// `(g∘f)⁻¹∘g` inverts `f` and `(f∘g)⁻¹∘f` inverts `g`.
pub fn schroeder_bernstein(f: &EquivariantMap, g: &EquivariantMap) -> Result<SchroederBernstein> {
    if !f.is_monic() {
        return Err(Error::NotMonic { which: "f".into() });
    }
    if !g.is_monic() {
        return Err(Error::NotMonic { which: "g".into() });
    }
    let gf = EquivariantMap::compose(g, f)?;
    let fg = EquivariantMap::compose(f, g)?;
    let f_inverse = EquivariantMap::compose(&monic_endo_inverse(&gf)?, g)?;
    let g_inverse = EquivariantMap::compose(&monic_endo_inverse(&fg)?, f)?;

    let id_a = EquivariantMap::identity(f.dom());
    let id_b = EquivariantMap::identity(f.cod());
    let checks = [
        EquivariantMap::compose(&f_inverse, f)? == id_a,
        EquivariantMap::compose(f, &f_inverse)? == id_b,
        EquivariantMap::compose(&g_inverse, g)? == id_b,
        EquivariantMap::compose(g, &g_inverse)? == id_a,
    ];
    if checks.iter().any(|ok| !ok) {
        return Err(Error::InternalInconsistency(
            "Schröder–Bernstein witnesses failed an inverse identity".into(),
        ));
    }
    Ok(SchroederBernstein { f_inverse, g_inverse })
}
