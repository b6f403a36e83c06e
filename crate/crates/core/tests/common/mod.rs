//! Shared fixtures: the monoid pool and seeded random M-sets.
#![allow(dead_code)]

use std::sync::Arc;

use hullcalc::{coequalizer, hom, principal_congruence, EquivariantMap, FiniteMonoid, MSet, SizeGuard, SubMSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// trivial, `{1, e}` idempotent, C2, C3, and the identity with two right zeros.
pub fn monoid_pool() -> Vec<Arc<FiniteMonoid>> {
    vec![
        Arc::new(FiniteMonoid::trivial()),
        Arc::new(FiniteMonoid::idempotent()),
        Arc::new(FiniteMonoid::cyclic(2)),
        Arc::new(FiniteMonoid::cyclic(3)),
        Arc::new(FiniteMonoid::right_zeros(2)),
    ]
}

/// Re-presents an M-set with labels `a, b, c, ...`.
pub fn relabel(set: &MSet) -> Arc<MSet> {
    let labels = (0..set.size())
        .map(|i| {
            let c = (b'a' + (i % 26) as u8) as char;
            if i < 26 {
                c.to_string()
            } else {
                format!("{c}{}", i / 26)
            }
        })
        .collect();
    Arc::new(MSet::validate(set.monoid().clone(), labels, set.action_rows()).unwrap())
}

/// Disjoint union of `copies` regular M-sets and `points` fixed points.
pub fn free_plus_points(monoid: &Arc<FiniteMonoid>, copies: usize, points: usize) -> Arc<MSet> {
    let k = monoid.size();
    let mut rows = Vec::new();
    for c in 0..copies {
        for x in monoid.elements() {
            rows.push(monoid.row(x).iter().map(|&y| c * k + y).collect::<Vec<_>>());
        }
    }
    for p in 0..points {
        rows.push(vec![copies * k + p; k]);
    }
    let labels = (0..rows.len()).map(|i| format!("u{i}")).collect();
    relabel(&MSet::validate(monoid.clone(), labels, rows).unwrap())
}

/// A random M-set of size at most `max_size`: a quotient of a small free
/// M-set plus fixed points, optionally cut down to a random sub-M-set.
pub fn random_mset(monoid: &Arc<FiniteMonoid>, rng: &mut impl Rng, max_size: usize) -> Arc<MSet> {
    loop {
        let copies = rng.gen_range(0..=2);
        let points = rng.gen_range(0..=2);
        let mut set = free_plus_points(monoid, copies, points);
        let merges = rng.gen_range(0..=2);
        for _ in 0..merges {
            if set.size() < 2 {
                break;
            }
            let x = rng.gen_range(0..set.size());
            let y = rng.gen_range(0..set.size());
            if x != y {
                let theta = principal_congruence(&set, x, y).unwrap();
                set = coequalizer(&theta).0;
            }
        }
        if rng.gen_bool(0.3) && !set.is_empty() {
            let seed = rng.gen_range(0..set.size());
            set = Arc::new(SubMSet::generated_by(&set, [seed]).object());
        }
        if set.size() <= max_size {
            return relabel(&set);
        }
    }
}

/// Fixed small objects over `monoid` that every suite should see.
pub fn standard_msets(monoid: &Arc<FiniteMonoid>) -> Vec<Arc<MSet>> {
    vec![
        Arc::new(MSet::empty(monoid)),
        Arc::new(MSet::terminal(monoid)),
        Arc::new(MSet::discrete(monoid, 2)),
        Arc::new(MSet::regular(monoid)),
    ]
}

/// Standard objects plus `extra` random ones per monoid, all of size at most
/// `max_size`.
pub fn mset_pool(seed: u64, extra: usize, max_size: usize) -> Vec<Arc<MSet>> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for m in monoid_pool() {
        for s in standard_msets(&m) {
            if s.size() <= max_size {
                out.push(s);
            }
        }
        for _ in 0..extra {
            out.push(random_mset(&m, &mut r, max_size));
        }
    }
    out
}

pub fn monics(a: &Arc<MSet>, b: &Arc<MSet>) -> Vec<EquivariantMap> {
    hom(a, b, &SizeGuard::default())
        .unwrap()
        .into_iter()
        .filter(|f| f.is_monic())
        .collect()
}

/// The same M-set with its elements listed in a random order.
pub fn shuffled(set: &Arc<MSet>, rng: &mut impl Rng) -> (Arc<MSet>, Vec<usize>) {
    let mut perm: Vec<usize> = set.elements().collect();
    perm.shuffle(rng);
    // old element x sits at position pos[x]
    let mut pos = vec![0; set.size()];
    for (i, &x) in perm.iter().enumerate() {
        pos[x] = i;
    }
    let labels = perm.iter().map(|&x| format!("{}'", set.label(x))).collect();
    let rows = perm
        .iter()
        .map(|&x| set.orbit_row(x).iter().map(|&y| pos[y]).collect())
        .collect();
    (Arc::new(MSet::validate(set.monoid().clone(), labels, rows).unwrap()), pos)
}
