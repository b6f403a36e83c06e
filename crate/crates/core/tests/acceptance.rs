//! Acceptance gate: one line per criterion, non-zero exit if any fails.
//!
//! Expected values come from the brute-force oracles below, which share no
//! code with the library beyond the data types.

mod common;

use std::collections::HashSet;
use std::io::Write;
use std::process::{Command, Stdio};
use std::sync::Arc;
use std::time::{Duration, Instant};

use hullcalc::cli::emit::Definitions;
use hullcalc::cli::parse::Workspace;
use hullcalc::*;
use rand::seq::SliceRandom;

// ---------------------------------------------------------------------------
// Oracles

fn bijective(table: &[usize], cod_size: usize) -> bool {
    table.len() == cod_size && table.iter().collect::<HashSet<_>>().len() == cod_size
}

fn injective(table: &[usize]) -> bool {
    table.iter().collect::<HashSet<_>>().len() == table.len()
}

fn equivariant(dom: &MSet, cod: &MSet, table: &[usize]) -> bool {
    dom.elements()
        .all(|x| dom.monoid().elements().all(|m| table[dom.act(x, m)] == cod.act(table[x], m)))
}

/// `g ∘ f` on raw tables.
fn after(g: &[usize], f: &[usize]) -> Vec<usize> {
    f.iter().map(|&y| g[y]).collect()
}

fn is_identity(table: &[usize]) -> bool {
    table.iter().enumerate().all(|(i, &x)| i == x)
}

/// Every function `n → k` as a table, in lexicographic order.
fn all_functions(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..k).map(move |y| {
                    let mut t = t.clone();
                    t.push(y);
                    t
                })
            })
            .collect();
    }
    out
}

fn brute_hom(dom: &MSet, cod: &MSet) -> Vec<Vec<usize>> {
    all_functions(dom.size(), cod.size())
        .into_iter()
        .filter(|t| equivariant(dom, cod, t))
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn brute_isos(a: &MSet, b: &MSet) -> Vec<Vec<usize>> {
    if a.size() != b.size() {
        return vec![];
    }
    permutations(a.size()).into_iter().filter(|p| equivariant(a, b, p)).collect()
}

fn brute_closed_subsets(set: &MSet) -> Vec<Vec<usize>> {
    let n = set.size();
    (0u32..(1 << n))
        .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect::<Vec<_>>())
        .filter(|s| {
            s.iter()
                .all(|&x| set.monoid().elements().all(|m| s.contains(&set.act(x, m))))
        })
        .collect()
}

fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in set_partitions(n - 1) {
        let blocks = p.iter().copied().max().map_or(0, |b| b + 1);
        for b in 0..=blocks {
            let mut q = p.clone();
            q.push(b);
            out.push(q);
        }
    }
    out
}

fn brute_congruences(set: &MSet) -> Vec<Vec<usize>> {
    set_partitions(set.size())
        .into_iter()
        .filter(|p| {
            set.elements().all(|x| {
                set.elements().all(|y| {
                    p[x] != p[y] || set.monoid().elements().all(|m| p[set.act(x, m)] == p[set.act(y, m)])
                })
            })
        })
        .collect()
}

/// Definitional essentiality restricted to quotients: a monic is essential
/// iff every non-discrete congruence identifies two image points.
fn brute_essential(image: &[usize], congruences: &[Vec<usize>], n: usize) -> bool {
    congruences.iter().all(|p| {
        let discrete = p.iter().collect::<HashSet<_>>().len() == n;
        discrete || image.iter().enumerate().any(|(i, &x)| image[i + 1..].iter().any(|&y| p[x] == p[y]))
    })
}

// ---------------------------------------------------------------------------
// Harness

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

fn guard() -> SizeGuard {
    SizeGuard::default()
}

/// The shared pool: the standard objects over every test monoid plus random
/// ones, all with at most six elements.
fn pool() -> Vec<Arc<MSet>> {
    common::mset_pool(2024, 24, 6)
}

/// Every automorphism of a randomly presented copy of each object in a
/// larger random pool.
fn criterion_1() -> Outcome {
    let mut rng = common::rng(1);
    let mut cases = Vec::new();
    for a in common::mset_pool(1, 40, 6).iter().filter(|a| !a.is_empty()) {
        let (b, _) = common::shuffled(a, &mut rng);
        for t in brute_isos(&b, &b) {
            cases.push(EquivariantMap::new(b.clone(), b.clone(), t).unwrap());
        }
    }
    cases.shuffle(&mut rng);
    if cases.len() < 200 {
        return fail(format!("only {} monic endomorphisms generated", cases.len()));
    }
    for f in &cases {
        let inv = match monic_endo_inverse(f) {
            Ok(inv) => inv,
            Err(e) => return fail(format!("monic_endo_inverse failed: {e}")),
        };
        let ok = equivariant(f.dom(), f.dom(), inv.mapping())
            && is_identity(&after(inv.mapping(), f.mapping()))
            && is_identity(&after(f.mapping(), inv.mapping()));
        if !ok {
            return fail(format!("wrong inverse for {f}"));
        }
    }
    pass(format!("{} monic endomorphisms, two-sided inverses verified", cases.len()))
}

fn criterion_2(pool: &[Arc<MSet>]) -> Outcome {
    let mut rng = common::rng(2);
    let mut count = 0;
    for a in pool.iter().filter(|a| !a.is_empty()) {
        for _ in 0..2 {
            let (b, _) = common::shuffled(a, &mut rng);
            let forward = brute_isos(a, &b);
            let backward = brute_isos(&b, a);
            let f = EquivariantMap::new(a.clone(), b.clone(), forward.choose(&mut rng).unwrap().clone()).unwrap();
            let g = EquivariantMap::new(b.clone(), a.clone(), backward.choose(&mut rng).unwrap().clone()).unwrap();
            let sb = match schroeder_bernstein(&f, &g) {
                Ok(sb) => sb,
                Err(e) => return fail(format!("schroeder_bernstein failed: {e}")),
            };
            let (fi, gi) = (sb.f_inverse.mapping(), sb.g_inverse.mapping());
            let ok = is_identity(&after(fi, f.mapping()))
                && is_identity(&after(f.mapping(), fi))
                && is_identity(&after(gi, g.mapping()))
                && is_identity(&after(g.mapping(), gi));
            if !ok {
                return fail(format!("inverse identities fail for {f} and {g}"));
            }
            count += 1;
        }
    }
    if count < 100 {
        return fail(format!("only {count} monic pairs"));
    }
    pass(format!("{count} monic pairs, all four inverse identities exact"))
}

fn criterion_3(pool: &[Arc<MSet>]) -> Outcome {
    let mut checked = 0;
    for x in pool {
        let om = omega(x.monoid());
        let subs = match sub_msets(x, &guard()) {
            Ok(s) => s,
            Err(e) => return fail(e.to_string()),
        };
        let chars = hom(x, om.object(), &guard()).unwrap();
        let expected_subs = brute_closed_subsets(x).len();
        let expected_chars = brute_hom(x, om.object()).len();
        if subs.len() != expected_subs || chars.len() != expected_chars || chars.len() != subs.len() {
            return fail(format!(
                "{x}: {} subobjects (oracle {expected_subs}), {} maps into Omega (oracle {expected_chars})",
                subs.len(),
                chars.len()
            ));
        }
        for s in &subs {
            let chi = characteristic_map(s, &om).unwrap();
            if subobject_of_char(&chi, &om).unwrap().members() != s.members() {
                return fail(format!("{x}: subobject round trip fails for {:?}", s.members()));
            }
        }
        for chi in &chars {
            let s = subobject_of_char(chi, &om).unwrap();
            if &characteristic_map(&s, &om).unwrap() != chi {
                return fail(format!("{x}: characteristic round trip fails for {chi}"));
            }
        }
        checked += subs.len();
    }
    pass(format!("{} objects, {checked} subobjects classified both ways", pool.len()))
}

fn criterion_4(pool: &[Arc<MSet>]) -> Outcome {
    let mut rng = common::rng(4);
    let small: Vec<&Arc<MSet>> = pool.iter().filter(|x| x.size() <= 4).collect();
    let mut triples = 0;
    let mut maps = 0;
    while triples < 100 {
        let c = *small.choose(&mut rng).unwrap();
        let same: Vec<&&Arc<MSet>> = small.iter().filter(|y| Arc::ptr_eq(y.monoid(), c.monoid())).collect();
        let a = **same.choose(&mut rng).unwrap();
        let b = **same.choose(&mut rng).unwrap();
        // keep the brute-force hom oracle small
        if (b.size() as f64).powi((c.size() * a.size()) as i32) > 50_000.0 {
            continue;
        }
        let e = match exponential(a, b, &guard()) {
            Ok(e) => e,
            Err(err) => return fail(err.to_string()),
        };
        let p = product(c, a).unwrap();
        let left = hom(&p.object, b, &guard()).unwrap();
        let right = hom(c, e.object(), &guard()).unwrap();
        if left.len() != brute_hom(&p.object, b).len() || left.len() != right.len() {
            return fail(format!("|hom(CxA, B)| = {} but |hom(C, B^A)| = {}", left.len(), right.len()));
        }
        let mut images = HashSet::new();
        let unit = c.monoid().identity();
        for g in &left {
            let h = e.transpose(&p, g).unwrap();
            if !equivariant(c, e.object(), h.mapping()) {
                return fail("transpose is not equivariant");
            }
            // eval(h(c), a) = g(c, a)
            let agrees = c.elements().all(|x| {
                a.elements()
                    .all(|y| e.table(h.apply(x))[e.domain().pair(unit, y)] == g.apply(p.pair(x, y)))
            });
            if !agrees || &e.untranspose(&p, &h).unwrap() != g {
                return fail(format!("transpose/untranspose disagree on {g}"));
            }
            images.insert(h.mapping().to_vec());
        }
        if images.len() != right.len() {
            return fail("transpose is not a bijection");
        }
        for h in &right {
            if &e.transpose(&p, &e.untranspose(&p, h).unwrap()).unwrap() != h {
                return fail(format!("round trip fails on {h}"));
            }
        }
        maps += left.len();
        triples += 1;
    }
    pass(format!("{triples} triples, {maps} maps curried and uncurried"))
}

fn criterion_5(pool: &[Arc<MSet>]) -> Outcome {
    let mut cases = 0;
    let mut essential = 0;
    let congruences: Vec<Vec<Vec<usize>>> = pool.iter().map(|b| brute_congruences(b)).collect();
    for a in pool {
        for (j, b) in pool.iter().enumerate() {
            if !Arc::ptr_eq(a.monoid(), b.monoid()) || b.size() > 6 || a.size() > b.size() {
                continue;
            }
            for f in hom(a, b, &guard()).unwrap() {
                if !injective(f.mapping()) {
                    continue;
                }
                let fast = is_essential(&f).unwrap().is_essential();
                let slow = is_essential_bruteforce(&f, &guard()).unwrap();
                let oracle = brute_essential(&f.image(), &congruences[j], b.size());
                if fast != slow || fast != oracle {
                    return fail(format!("{f}: principal {fast}, brute force {slow}, oracle {oracle}"));
                }
                cases += 1;
                essential += fast as usize;
            }
        }
    }
    if cases < 500 {
        return fail(format!("only {cases} monics"));
    }
    pass(format!("{cases} monics ({essential} essential), all three testers agree"))
}

/// Criteria 6 and 8 share the hull runs.
fn criteria_6_and_8(pool: &[Arc<MSet>]) -> (Outcome, Outcome) {
    let mut runs = 0;
    let mut longest = (0, 0);
    for a in pool {
        match singleton(a, &guard()) {
            Err(Error::SizeGuardExceeded { .. }) => continue,
            Err(e) => return (fail(e.to_string()), fail("not reached")),
            Ok(_) => {}
        }
        let sub = match injective_hull_subobject(a, &guard()) {
            Ok(c) => c,
            Err(e) => return (fail(format!("{a}: subobject hull: {e}")), fail("not reached")),
        };
        let quot = match injective_hull_quotient(a, &guard()) {
            Ok(c) => c,
            Err(e) => return (fail(format!("{a}: quotient hull: {e}")), fail("not reached")),
        };
        let iso = match hull_uniqueness_iso(&sub.embedding, &quot.embedding, &guard()) {
            Ok(iso) => iso,
            Err(e) => return (fail(format!("{a}: uniqueness iso: {e}")), fail("not reached")),
        };
        let (h, k) = (iso.forward.mapping(), iso.backward.mapping());
        if after(h, sub.embedding.mapping()) != quot.embedding.mapping()
            || !is_identity(&after(k, h))
            || !is_identity(&after(h, k))
            || !equivariant(&sub.hull, &quot.hull, h)
        {
            return (fail(format!("{a}: h∘e = f or inverse check fails")), fail("not reached"));
        }
        for cert in [&sub, &quot] {
            let e = &cert.embedding;
            if !injective(e.mapping()) || !equivariant(&cert.base, &cert.hull, e.mapping()) {
                return (fail(format!("{a}: {} embedding is not an equivariant monic", cert.method)), fail("not reached"));
            }
            let fast = is_essential(e).unwrap().is_essential();
            let slow = is_essential_bruteforce(e, &guard()).unwrap();
            if !fast || !slow {
                return (fail(format!("{a}: {} embedding essential: {fast}/{slow}", cert.method)), fail("not reached"));
            }
            match is_injective(&cert.hull, &guard()) {
                Ok(Injectivity::Injective { singleton, retraction }) => {
                    if !is_identity(&after(retraction.mapping(), singleton.mapping()))
                        || !equivariant(retraction.dom(), retraction.cod(), retraction.mapping())
                    {
                        return (fail(format!("{a}: bad retraction witness")), fail("not reached"));
                    }
                }
                Ok(Injectivity::NotInjective { .. }) => {
                    return (fail(format!("{a}: {} hull is not injective", cert.method)), fail("not reached"))
                }
                Err(e) => return (fail(e.to_string()), fail("not reached")),
            }
        }
        let bound = quot.ambient.size() - 1;
        if quot.chain_steps > bound {
            return (
                pass("hulls agree"),
                fail(format!("{a}: {} proper epis from |Omega^A| = {}", quot.chain_steps, quot.ambient.size())),
            );
        }
        if quot.chain_steps >= longest.0 {
            longest = (quot.chain_steps, bound);
        }
        runs += 1;
    }
    (
        pass(format!("{runs} objects, both hulls essential, injective and isomorphic over A")),
        pass(format!("{runs} chains within |Omega^A| - 1 (longest {} steps, bound {})", longest.0, longest.1)),
    )
}

fn criterion_7() -> Outcome {
    let t = Arc::new(FiniteMonoid::trivial());
    let set = |n: usize| Arc::new(MSet::discrete(&t, n));
    for method in ["subobject", "quotient"] {
        let run = |a: &Arc<MSet>| {
            if method == "subobject" {
                injective_hull_subobject(a, &guard())
            } else {
                injective_hull_quotient(a, &guard())
            }
        };
        let empty = run(&set(0)).unwrap();
        if empty.hull.size() != 1 {
            return fail(format!("{method}: hull of the empty set has {} elements", empty.hull.size()));
        }
        for n in 1..=5 {
            let c = run(&set(n)).unwrap();
            if !bijective(c.embedding.mapping(), c.hull.size()) {
                return fail(format!("{method}: hull of a {n}-element set is not the set itself"));
            }
        }
    }
    // X is injective iff every f: A → X extends along every injection A ↪ B,
    // for all sets A, B of size at most 3.
    let mut checked = 0;
    for x in 0..=3 {
        let mut definitional = true;
        'search: for na in 0..=3 {
            for nb in na..=3 {
                for m in all_functions(na, nb).into_iter().filter(|m| injective(m)) {
                    for f in all_functions(na, x) {
                        let extends = all_functions(nb, x).into_iter().any(|g| after(&g, &m) == f);
                        checked += 1;
                        if !extends {
                            definitional = false;
                            break 'search;
                        }
                    }
                }
            }
        }
        let computed = is_injective(&set(x), &guard()).unwrap().is_injective();
        if computed != definitional {
            return fail(format!("{x}-element set: is_injective {computed}, definition {definitional}"));
        }
    }
    pass(format!("hulls of sets of size 0..=5 exact, injectivity matches {checked} extension problems"))
}

fn criterion_9(pool: &[Arc<MSet>]) -> Outcome {
    let bin = env!("CARGO_BIN_EXE_hullcalc");
    let ws = Workspace::new();
    let mut runs = 0;
    let mut entities = 0;
    let inputs = pool.iter().filter(|a| {
        singleton(a, &guard()).is_ok_and(|s| s.power.object().size() <= 64)
    });
    for (i, a) in inputs.enumerate().step_by(3) {
        let mut defs = Definitions::new();
        defs.mset(&ws, "A", a);
        let input = defs.to_text();
        let run = |format: &str| {
            let mut child = Command::new(bin)
                .args(["hull", "A", "--method", "both", "--format", format])
                .stdin(Stdio::piped())
                .stdout(Stdio::piped())
                .stderr(Stdio::piped())
                .spawn()
                .expect("binary runs");
            child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
            child.wait_with_output().unwrap()
        };
        let first = run("json");
        let second = run("json");
        if first.status.code() != Some(0) {
            return fail(format!("input {i}: exit {:?}: {}", first.status.code(), String::from_utf8_lossy(&first.stderr)));
        }
        if first.stdout != second.stdout {
            return fail(format!("input {i}: re-run output differs"));
        }
        let doc: serde_json::Value = match serde_json::from_slice(&first.stdout) {
            Ok(v) => v,
            Err(e) => return fail(format!("input {i}: output is not JSON: {e}")),
        };
        for field in ["command", "inputs", "result", "witnesses"] {
            if doc.get(field).is_none() {
                return fail(format!("input {i}: missing `{field}`"));
            }
        }
        let text = doc["result"]["definitions"].as_str().unwrap_or_default();
        let parsed = match Workspace::parse("output", text) {
            Ok(ws) => ws,
            Err(e) => return fail(format!("input {i}: emitted definitions do not re-parse: {e}")),
        };
        if Definitions::from_workspace(&parsed).to_json() != doc["result"]["entities"] {
            return fail(format!("input {i}: structured entities differ from the re-parsed definitions"));
        }
        if Definitions::from_workspace(&parsed).to_text() != text {
            return fail(format!("input {i}: definitions are not presentationally stable"));
        }
        let plain = run("text");
        let plain = String::from_utf8_lossy(&plain.stdout);
        match Workspace::parse("text", &plain) {
            Ok(ws) if Definitions::from_workspace(&ws).to_text() == text => {}
            _ => return fail(format!("input {i}: text output does not re-parse to the same entities")),
        }
        entities += parsed.entities().count();
        runs += 1;
    }
    pass(format!("{runs} inputs, {entities} emitted entities re-parse; re-runs byte-identical"))
}

fn main() {
    let pool = pool();
    let mut failed = 0;
    let mut report = |n: &str, limit: Option<Duration>, elapsed: Duration, outcome: Outcome| {
        let ok = outcome.ok && limit.is_none_or(|l| elapsed <= l);
        let timing = match limit {
            Some(l) => format!("{:.2} s, limit {} s", elapsed.as_secs_f64(), l.as_secs()),
            None => "no time limit".to_string(),
        };
        println!("{} criterion {n}: {} ({timing})", if ok { "PASS" } else { "FAIL" }, outcome.detail);
        if !ok {
            failed += 1;
        }
    };
    let secs = |s| Some(Duration::from_secs(s));
    let timed = |f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let outcome = f();
        (t.elapsed(), outcome)
    };

    let (d, o) = timed(&criterion_1);
    report("1", secs(10), d, o);
    let (d, o) = timed(&|| criterion_2(&pool));
    report("2", secs(10), d, o);
    let (d, o) = timed(&|| criterion_3(&pool));
    report("3", secs(30), d, o);
    let (d, o) = timed(&|| criterion_4(&pool));
    report("4", secs(60), d, o);
    let (d, o) = timed(&|| criterion_5(&pool));
    report("5", secs(60), d, o);
    let t = Instant::now();
    let (six, eight) = criteria_6_and_8(&pool);
    let hull_time = t.elapsed();
    report("6", secs(300), hull_time, six);
    let (d, o) = timed(&criterion_7);
    report("7", secs(60), d, o);
    report("8", None, hull_time, eight);
    let (d, o) = timed(&|| criterion_9(&pool));
    report("9", secs(10), d, o);

    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    std::process::exit(if failed == 0 { 0 } else { 1 });
}
