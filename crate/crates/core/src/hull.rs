//! Essential extensions, injectivity and injective hulls.
//!
//! A monic `e: A → B` is essential exactly when every principal congruence of
//! `B` identifies two distinct elements of the image of `e`: any proper
//! quotient of `B` factors through some principal one, and a principal
//! congruence that keeps the image apart gives a non-iso epi `g` with `g∘e`
//! still monic.
//!
//! Hulls are built inside `Ω^A`, which is injective, either by growing the
//! image of the singleton map to a maximal essential subobject or by
//! collapsing `Ω^A` along principal congruences that keep `A` embedded.

use std::fmt;
use std::sync::Arc;

use crate::congruence::{coequalizer, enumerate_congruences, principal_congruence, principal_identifies, Congruence, GrowingCongruence};
use crate::error::{Error, Result};
use crate::guard::SizeGuard;
use crate::locally_finite::monic_endo_inverse;
use crate::mset::{EquivariantMap, MSet, SubMSet};
use crate::search::{extend, find_isomorphism_over};
use crate::topos::{singleton, Singleton};

/// For a pair of distinct codomain elements, two distinct base elements whose
/// images the pair's principal congruence identifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairWitness {
    pub hull_pair: (usize, usize),
    pub base_pair: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Essentiality {
    /// One witness per unordered pair of distinct codomain elements, in
    /// lexicographic pair order.
    Essential { witnesses: Vec<PairWitness> },
    /// The first pair whose principal congruence keeps the image apart.
    /// Its coequalizer is a non-iso epi that stays monic on the image.
    NotEssential { pair: (usize, usize), congruence: Congruence },
}

impl Essentiality {
    pub fn is_essential(&self) -> bool {
        matches!(self, Essentiality::Essential { .. })
    }
}

type Pair = (usize, usize);

/// Checks pairs of `members` (a closed subset of `set`) against `image`.
/// Principal congruences are computed in `set`; restricted to a closed subset
/// they agree with the ones computed there.
fn scan_pairs(
    set: &Arc<MSet>,
    members: &[usize],
    image: &[usize],
    want_witnesses: bool,
) -> std::result::Result<Vec<(Pair, Pair)>, (Pair, Congruence)> {
    let mut witnesses = Vec::new();
    for (i, &b) in members.iter().enumerate() {
        for &b2 in &members[i + 1..] {
            match principal_identifies(set, b, b2, image) {
                Some(identified) => {
                    if want_witnesses {
                        witnesses.push(((b, b2), identified));
                    }
                }
                None => {
                    let theta = principal_congruence(set, b, b2).expect("distinct elements");
                    return Err(((b, b2), theta));
                }
            }
        }
    }
    Ok(witnesses)
}

/// Decides essentiality of a monic through principal congruences.
pub fn is_essential(e: &EquivariantMap) -> Result<Essentiality> {
    if !e.is_monic() {
        return Err(Error::NotMonic { which: "e".into() });
    }
    let cod = e.cod();
    let members: Vec<usize> = cod.elements().collect();
    let image = e.image();
    let mut preimage = vec![usize::MAX; cod.size()];
    for a in e.dom().elements() {
        preimage[e.apply(a)] = a;
    }
    Ok(match scan_pairs(cod, &members, &image, true) {
        Ok(found) => Essentiality::Essential {
            witnesses: found
                .into_iter()
                .map(|(hull_pair, (y, y2))| PairWitness {
                    hull_pair,
                    base_pair: (preimage[y], preimage[y2]),
                })
                .collect(),
        },
        Err((pair, congruence)) => Essentiality::NotEssential { pair, congruence },
    })
}

/// Essentiality straight from the definition, restricted to epis: every
/// congruence whose projection stays monic on the image must be discrete.
pub fn is_essential_bruteforce(e: &EquivariantMap, guard: &SizeGuard) -> Result<bool> {
    if !e.is_monic() {
        return Err(Error::NotMonic { which: "e".into() });
    }
    let image = e.image();
    for theta in enumerate_congruences(e.cod(), guard)? {
        let (_, proj) = coequalizer(&theta);
        let composite = EquivariantMap::compose(&proj, e)?;
        if composite.is_monic() && !proj.is_iso() {
            debug_assert!(theta.identifies_within(&image).is_none());
            return Ok(false);
        }
    }
    Ok(true)
}

/// Some `g: E → B` with `g ∘ m = f`.
pub fn extend_along_monic(m: &EquivariantMap, f: &EquivariantMap, guard: &SizeGuard) -> Result<Option<EquivariantMap>> {
    if !m.is_monic() {
        return Err(Error::NotMonic { which: "m".into() });
    }
    if !MSet::same(m.dom(), f.dom()) {
        return Err(Error::DomainMismatch("the monic and the map have different domains".into()));
    }
    extend(m, f, guard)
}

/// Members of a maximal essential extension of the singleton image inside
/// `Ω^A`, found greedily in canonical order.
///
/// The specified procedure restarts the scan after every success. A failed
/// candidate stays failed once `E` grows (the refuting pair survives and its
/// principal congruence lives in the ambient), so one pass gives the same
/// result. Pairs inside the old `E` are already known to be fine.
fn grow_essential(sing: &Singleton) -> Vec<usize> {
    let ambient = sing.power.object();
    let image = sing.map.image();
    let mut members = image.clone();
    for w in ambient.elements() {
        if members.binary_search(&w).is_ok() {
            continue;
        }
        // `members` is closed, so the enlargement adds exactly the orbit of `w`.
        let fresh: Vec<usize> = ambient
            .orbit(w)
            .into_iter()
            .filter(|x| members.binary_search(x).is_err())
            .collect();
        let keeps_essential = fresh.iter().enumerate().all(|(i, &b)| {
            members
                .iter()
                .chain(&fresh[i + 1..])
                .all(|&b2| principal_identifies(ambient, b, b2, &image).is_some())
        });
        if keeps_essential {
            members.extend(fresh);
            members.sort_unstable();
        }
    }
    members
}

#[derive(Debug, Clone)]
pub enum Injectivity {
    /// `retraction ∘ singleton = id`.
    Injective {
        singleton: EquivariantMap,
        retraction: EquivariantMap,
    },
    /// A proper essential extension of the object.
    NotInjective { extension: EquivariantMap },
}

impl Injectivity {
    pub fn is_injective(&self) -> bool {
        matches!(self, Injectivity::Injective { .. })
    }
}

/// Decides injectivity two ways and insists they agree. The greedy search
/// for a proper essential extension inside `Ω^A` gives one answer; the other
/// is an extension problem for `id_A`, posed along the singleton map when no
/// such extension turned up and along the extension found otherwise.
pub fn is_injective(a: &Arc<MSet>, guard: &SizeGuard) -> Result<Injectivity> {
    let sing = singleton(a, guard)?;
    let grown = grow_essential(&sing);
    let id = EquivariantMap::identity(a);
    if grown.len() == a.size() {
        return match extend(&sing.map, &id, guard)? {
            Some(retraction) => Ok(Injectivity::Injective {
                singleton: sing.map,
                retraction,
            }),
            None => Err(Error::InternalInconsistency(
                "no proper essential extension exists but the singleton map has no retraction".into(),
            )),
        };
    }
    let sub = SubMSet::new(sing.power.object(), grown).expect("closed");
    let object = Arc::new(sub.object());
    let extension = sub.corestrict(&sing.map, &object).expect("contains the image");
    match extend(&extension, &id, guard)? {
        None => Ok(Injectivity::NotInjective { extension }),
        Some(_) => Err(Error::InternalInconsistency(
            "a proper essential extension of the object retracts onto it".into(),
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HullMethod {
    SubobjectGrowth,
    QuotientChain,
}

impl fmt::Display for HullMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HullMethod::SubobjectGrowth => "subobject",
            HullMethod::QuotientChain => "quotient",
        })
    }
}

/// Proof that the hull is injective: a retraction of its own singleton map.
#[derive(Debug, Clone)]
pub struct InjectivityWitness {
    pub singleton: EquivariantMap,
    pub retraction: EquivariantMap,
}

/// An injective hull together with everything needed to re-check it.
#[derive(Debug, Clone)]
pub struct HullCertificate {
    pub base: Arc<MSet>,
    pub hull: Arc<MSet>,
    pub embedding: EquivariantMap,
    pub method: HullMethod,
    /// `Ω^A`, where both constructions start.
    pub ambient: Arc<MSet>,
    pub essential_witnesses: Vec<PairWitness>,
    pub injectivity: InjectivityWitness,
    /// Proper epis taken by the quotient chain; zero for subobject growth.
    pub chain_steps: usize,
    /// For the quotient chain: the composite projection `Ω^A → hull`.
    pub collapse: Option<EquivariantMap>,
    /// For the quotient chain: an isomorphism over `A` onto the subobject
    /// growth hull.
    pub cross_check: Option<Box<(HullCertificate, EquivariantMap)>>,
}

fn certify(
    base: &Arc<MSet>,
    embedding: EquivariantMap,
    method: HullMethod,
    ambient: Arc<MSet>,
    chain_steps: usize,
    guard: &SizeGuard,
) -> Result<HullCertificate> {
    let essential_witnesses = match is_essential(&embedding)? {
        Essentiality::Essential { witnesses } => witnesses,
        Essentiality::NotEssential { pair, .. } => {
            return Err(Error::InternalInconsistency(format!(
                "{method} hull is not essential: pair ({}, {}) refutes it",
                embedding.cod().label(pair.0),
                embedding.cod().label(pair.1)
            )))
        }
    };
    let hull = embedding.cod().clone();
    let injectivity = match is_injective(&hull, guard)? {
        Injectivity::Injective { singleton, retraction } => InjectivityWitness { singleton, retraction },
        Injectivity::NotInjective { .. } => {
            return Err(Error::InternalInconsistency(format!("{method} hull is not injective")))
        }
    };
    Ok(HullCertificate {
        base: base.clone(),
        hull,
        embedding,
        method,
        ambient,
        essential_witnesses,
        injectivity,
        chain_steps,
        collapse: None,
        cross_check: None,
    })
}

/// The hull as a maximal essential extension of `A` inside `Ω^A`.
pub fn injective_hull_subobject(a: &Arc<MSet>, guard: &SizeGuard) -> Result<HullCertificate> {
    let sing = singleton(a, guard)?;
    let members = grow_essential(&sing);
    let sub = SubMSet::new(sing.power.object(), members).expect("closed");
    let hull = Arc::new(sub.object());
    let embedding = sub.corestrict(&sing.map, &hull).expect("contains the image");
    certify(
        a,
        embedding,
        HullMethod::SubobjectGrowth,
        sing.power.object().clone(),
        0,
        guard,
    )
}

/// The hull as a quotient of `Ω^A`: repeatedly collapse the first pair whose
/// principal congruence keeps `A` embedded, until none is left. The result is
/// presented as `Ω^A` modulo the kernel of the composite projection, so each
/// element is labelled by the smallest member of its class.
pub fn injective_hull_quotient(a: &Arc<MSet>, guard: &SizeGuard) -> Result<HullCertificate> {
    let sing = singleton(a, guard)?;
    let ambient = sing.power.object().clone();
    let bound = ambient.size().saturating_sub(1);
    let image = sing.map.image();
    // The current quotient is the ambient modulo `phi`; the principal
    // congruence of two classes pulls back to the join of `phi` with the
    // principal congruence of their representatives. Pairs that pass keep
    // passing in every further quotient, and representatives keep their
    // order, so each scan resumes at the pair the previous one refuted.
    let mut phi = GrowingCongruence::discrete(&ambient);
    let n = ambient.size();
    let mut steps = 0;
    let mut cursor = (0, 1);
    loop {
        let mut refuted = None;
        'scan: for b in cursor.0..n {
            if phi.rep(b) != b {
                continue;
            }
            let from = if b == cursor.0 { cursor.1 } else { b + 1 };
            for b2 in from.max(b + 1)..n {
                if phi.rep(b2) == b2 && phi.join_identifies(b, b2, &image).is_none() {
                    refuted = Some((b, b2));
                    break 'scan;
                }
            }
        }
        let Some((b, b2)) = refuted else {
            break;
        };
        phi.merge(b, b2);
        cursor = (phi.rep(b), phi.rep(b2));
        steps += 1;
        if steps > bound {
            return Err(Error::InternalInconsistency(format!(
                "quotient chain took {steps} proper epis from an object of size {n}"
            )));
        }
    }
    let (_, collapse) = coequalizer(&phi.finish());
    let embedding = EquivariantMap::compose(&collapse, &sing.map)?;
    let mut cert = certify(a, embedding, HullMethod::QuotientChain, ambient, steps, guard)?;
    cert.collapse = Some(collapse);
    let reference = injective_hull_subobject(a, guard)?;
    let iso = find_isomorphism_over(&cert.embedding, &reference.embedding, guard)?.ok_or_else(|| {
        Error::InternalInconsistency("quotient-chain hull is not isomorphic over A to the subobject hull".into())
    })?;
    cert.cross_check = Some(Box::new((reference, iso)));
    Ok(cert)
}

/// An isomorphism `h: E → F` over `A` with its inverse.
#[derive(Debug, Clone)]
pub struct HullIso {
    pub forward: EquivariantMap,
    pub backward: EquivariantMap,
}

/// Given two injective essential extensions `e: A → E` and `f: A → F`,
/// extends `f` along `e` to `h` and `e` along `f` to `k`; both are monic, so
/// `k∘h` is an automorphism and `(k∘h)⁻¹∘k` inverts `h`.
pub fn hull_uniqueness_iso(e: &EquivariantMap, f: &EquivariantMap, guard: &SizeGuard) -> Result<HullIso> {
    if !MSet::same(e.dom(), f.dom()) {
        return Err(Error::PreconditionFailed("e and f have different domains".into()));
    }
    for (name, m) in [("e", e), ("f", f)] {
        if !m.is_monic() {
            return Err(Error::PreconditionFailed(format!("{name} is not monic")));
        }
        if !is_essential(m)?.is_essential() {
            return Err(Error::PreconditionFailed(format!("{name} is not essential")));
        }
        if !is_injective(m.cod(), guard)?.is_injective() {
            return Err(Error::PreconditionFailed(format!("codomain of {name} is not injective")));
        }
    }
    let inconsistent = |what: &str| Error::InternalInconsistency(what.to_string());
    let h = extend(e, f, guard)?.ok_or_else(|| inconsistent("f does not extend along e into an injective object"))?;
    let k = extend(f, e, guard)?.ok_or_else(|| inconsistent("e does not extend along f into an injective object"))?;
    if !h.is_monic() || !k.is_monic() {
        return Err(inconsistent("extension along an essential monic is not monic"));
    }
    let kh = EquivariantMap::compose(&k, &h)?;
    let backward = EquivariantMap::compose(&monic_endo_inverse(&kh)?, &k)?;
    let verified = EquivariantMap::compose(&backward, &h)?.is_identity()
        && EquivariantMap::compose(&h, &backward)?.is_identity()
        && &EquivariantMap::compose(&h, e)? == f;
    if !verified {
        return Err(inconsistent("uniqueness isomorphism failed verification"));
    }
    Ok(HullIso { forward: h, backward })
}
