//! Acceptance criteria, one pass/fail line each. Runs without the libtest
//! harness so the lines always reach the output.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use jitower_core::actions::{is_subprimitive, SubprimitivityMethod};
use jitower_core::builders::{build_cyclic_tower, build_wreath_tower, chain_construct, wilson_relabel};
use jitower_core::chief::{
    all_chief_factors, are_associated, chief_series, covers, melnikov_crosscheck, nar_precedes, ChiefFactor,
};
use jitower_core::lattice::{normal_subgroups, p_radicals};
use jitower_core::structured::structured_normal_subgroups;
use jitower_core::structure::is_nilpotent;
use jitower_core::towers::*;
use jitower_core::{corpus, wreath_product, FiniteGroup, GroupAction, Permutation, SubgroupKey};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Criterion {
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { name: "klein association table", limit: Duration::from_secs(1), run: klein_association },
        Criterion { name: "cyclic 2-towers vs projection tower", limit: Duration::from_secs(5), run: cyclic_towers },
        Criterion { name: "melnikov cross-checks", limit: Duration::from_secs(120), run: melnikov_checks },
        Criterion { name: "subprimitivity equivalence", limit: Duration::from_secs(60), run: subprimitivity },
        Criterion { name: "O^p experiment", limit: Duration::from_secs(30), run: opsch },
        Criterion { name: "oracle equivalence", limit: Duration::from_secs(120), run: oracle_equivalence },
        Criterion { name: "narrow ordering", limit: Duration::from_secs(60), run: narrow_ordering },
        Criterion { name: "wilson round trip", limit: Duration::from_secs(60), run: wilson_round_trip },
        Criterion { name: "admissible search round trip", limit: Duration::from_secs(120), run: admissible },
        Criterion { name: "runtime budget", limit: Duration::from_secs(60), run: runtime_budget },
    ];
    let start = Instant::now();
    let mut failures = 0;
    for (i, c) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run))
            .unwrap_or_else(|e| Err(format!("panicked: {}", panic_message(&e))));
        let elapsed = t0.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if elapsed <= c.limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("over the time limit; {d}")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!(
            "criterion {:>2} {status} [{}] {:.2}s (limit {}s): {detail}",
            i + 1,
            c.name,
            elapsed.as_secs_f64(),
            c.limit.as_secs()
        );
    }
    let total = start.elapsed();
    println!("acceptance total {:.2}s, {failures} failing", total.as_secs_f64());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn panic_message(e: &Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_default()
}

fn cycle(n: usize, cycles: &[&[u32]]) -> Permutation {
    Permutation::from_cycles(n, cycles).unwrap()
}

fn klein_association() -> Outcome {
    let g = corpus::klein();
    let one = g.trivial_subgroup();
    let whole = g.whole();
    let h: Vec<_> = [
        cycle(4, &[&[0, 1], &[2, 3]]),
        cycle(4, &[&[0, 2], &[1, 3]]),
        cycle(4, &[&[0, 3], &[1, 2]]),
    ]
    .into_iter()
    .map(|x| g.subgroup(vec![x]).unwrap())
    .collect();
    // (kind, i): kind 0 is G/H_i, kind 1 is H_i/1
    let mut factors = Vec::new();
    for (i, hi) in h.iter().enumerate() {
        factors.push(((0, i), ChiefFactor::new(&whole, hi).unwrap()));
        factors.push(((1, i), ChiefFactor::new(hi, &one).unwrap()));
    }
    ensure(all_chief_factors(&g).unwrap().len() == 6, || "expected 6 chief factors".into())?;
    let mut pairs = 0;
    for (a, fa) in &factors {
        for (b, fb) in &factors {
            let expected = a == b || (a.0 != b.0 && a.1 != b.1);
            let got = are_associated(fa, fb).unwrap();
            ensure(got == expected, || format!("{a:?} ~ {b:?}: got {got}, expected {expected}"))?;
            if got && a < b {
                pairs += 1;
            }
        }
    }
    let h1 = &factors[1].1;
    let g_h2 = &factors[2].1;
    let h3 = &factors[5].1;
    let chain = are_associated(h1, g_h2).unwrap() && are_associated(g_h2, h3).unwrap();
    ensure(chain && !are_associated(h1, h3).unwrap(), || "non-transitivity not exhibited".into())?;
    Ok(format!("{pairs} associated pairs of distinct factors; H1/1 ~ G/H2 ~ H3/1 but H1/1 !~ H3/1"))
}

fn failing_ids(r: &VerificationReport) -> Result<Vec<String>, String> {
    let mut ids = Vec::new();
    for level in &r.levels {
        for c in &level.conditions {
            if c.verdict == Verdict::Fail {
                let w = c.witness.as_ref().ok_or_else(|| format!("{} fails without a witness", c.id))?;
                ensure(!w.explanation.is_empty(), || format!("{} has an empty witness", c.id))?;
                ids.push(format!("{}@{}", c.id, level.n));
            }
        }
    }
    Ok(ids)
}

fn cyclic_towers() -> Outcome {
    let mut detail = Vec::new();
    for start in [2u32, 4] {
        let t = build_cyclic_tower(2, 3, start).unwrap();
        let orders: Vec<u128> = t.levels().iter().map(|g| g.order()).collect();
        let r = verify_ji_basic(&t);
        ensure(r.passed(), || format!("{orders:?} ji_basic:\n{}", r.to_text()))?;
        let r = verify_wilson(&t);
        ensure(r.passed(), || format!("{orders:?} wilson:\n{}", r.to_text()))?;
        // A_n is the order-4 subgroup cut down to F_n = Φ(O_2(G_n))
        let a = t
            .levels()
            .iter()
            .map(|g| {
                let f = p_radicals(g, 2).unwrap().frattini_of_op;
                Some(normal_of_order(g, 4).intersection(&f).unwrap())
            })
            .collect();
        let t = t.with_designated(a).unwrap();
        let r = verify_pro_p(&t, 2);
        ensure(r.passed(), || format!("{orders:?} pro-p:\n{}", r.to_text()))?;
        detail.push(format!("{orders:?} passes"));
    }
    let t = projection_tower();
    for (name, r) in [
        ("ji_basic", verify_ji_basic(&t)),
        ("wilson", verify_wilson(&t)),
        ("pro-p", verify_pro_p(&t, 2)),
    ] {
        ensure(r.exit_code() == 1, || format!("projection tower {name} did not fail"))?;
        let ids = failing_ids(&r)?;
        detail.push(format!("projection {name} fails {}", ids.join(",")));
    }
    Ok(detail.join("; "))
}

fn nilpotent_corpus() -> Vec<(String, FiniteGroup)> {
    let mut out = Vec::new();
    for (p, levels) in [(2u64, 7usize), (3, 4), (5, 3)] {
        for g in build_cyclic_tower(p, levels, 1).unwrap().levels() {
            out.push((format!("C{}", g.order()), g.clone()));
        }
    }
    for g in build_wreath_tower(&corpus::cyclic(2), 3).unwrap().levels() {
        out.push((format!("C2 wreath level of order {}", g.order()), g.clone()));
    }
    for (name, g) in small_groups().into_iter().chain(medium_groups()) {
        if is_nilpotent(&g) {
            out.push((name.to_string(), g));
        }
    }
    out
}

fn melnikov_checks() -> Outcome {
    let mut checked = [0usize; 3];
    let mut groups: Vec<(String, FiniteGroup)> = nilpotent_corpus();
    for (name, g) in small_groups().into_iter().chain(medium_groups()) {
        if !is_nilpotent(&g) {
            groups.push((name.to_string(), g));
        }
    }
    for (name, g) in &groups {
        let n = g.degree();
        let whole = elements(g);
        let normals = brute_normals(n, &whole);
        for a in normals.iter().filter(|a| a.len() > 1) {
            let sub = to_subgroup(g, a);
            let x = melnikov_crosscheck(g, &sub).map_err(|e| e.to_string())?;
            let m_g = brute_m_g(&normals, a);
            let m = brute_m(n, a);
            let ag = commutator(n, a, &whole);
            ensure(sub_elements(&x.relative) == m_g, || format!("{name}: M_G(A) differs from brute force"))?;
            // (i) [A, M_G(A)] <= M(A)
            let c = commutator(n, a, &m_g);
            ensure(x.containment_holds && c.is_subset(&m), || format!("{name}: [A, M_G(A)] not in M(A)"))?;
            checked[0] += 1;
            // (iii) nilpotent: M_G(A) = M(A)[A,G]
            if is_nilpotent(g) {
                let expected = product(n, &m, &ag);
                ensure(x.nilpotent_equality == Some(true) && m_g == expected, || {
                    format!("{name}: M_G(A) != M(A)[A,G] on a normal subgroup of order {}", a.len())
                })?;
                checked[1] += 1;
            }
            // (ii) when A > M(A)[A,G]: narrow iff prime index and central top factors
            let b = product(n, &m, &ag);
            if b.len() < a.len() {
                let p = x.prime_index.as_ref().ok_or_else(|| format!("{name}: prime-index case missing"))?;
                let narrow = maximal_proper(a, &normals).len() == 1;
                let index = a.len() / b.len();
                let prime = (2..index).all(|d| index % d != 0);
                let central = maximal_proper(a, &normals).iter().all(|c| ag.is_subset(c));
                ensure(p.narrow == narrow && narrow == (prime && central) && p.equivalence_holds, || {
                    format!("{name}: prime-index equivalence fails")
                })?;
                if narrow {
                    ensure(m_g == b, || format!("{name}: narrow A with M_G(A) != M(A)[A,G]"))?;
                }
                checked[2] += 1;
            }
        }
    }
    // the C2 wr C2 base is narrow with |A : M(A)[A,G]| = 2
    let g = corpus::c2_wr_c2();
    let base = g.subgroup(vec![cycle(4, &[&[0, 1]]), cycle(4, &[&[2, 3]])]).unwrap();
    let x = melnikov_crosscheck(&g, &base).unwrap();
    let p = x.prime_index.ok_or("base has no prime-index data")?;
    ensure(p.index == 2 && p.narrow && p.equivalence_holds, || "C2 wr C2 base".into())?;
    Ok(format!(
        "0 mismatches; (i) on {} subgroups, (iii) on {} subgroups of nilpotent groups, (ii) on {} subgroups",
        checked[0], checked[1], checked[2]
    ))
}

fn subprimitivity() -> Outcome {
    let mut actions = subprimitivity_corpus();
    let c2wr = corpus::c2_wr_c2();
    let a5 = corpus::alternating(5);
    actions.push(("C2 wr C2 natural".into(), GroupAction::natural(&c2wr)));
    actions.push(("A5 on 5 points".into(), GroupAction::natural(&a5)));
    for (name, g) in medium_groups() {
        if g.order() <= 128 {
            actions.push((format!("{name} regular"), GroupAction::regular(&g).unwrap()));
        }
    }
    ensure(actions.len() >= 100, || format!("only {} actions", actions.len()))?;
    let mut held = 0;
    for (name, a) in &actions {
        let d = is_subprimitive(a, SubprimitivityMethod::Def13).map_err(|e| e.to_string())?;
        let l = is_subprimitive(a, SubprimitivityMethod::Lemma62).map_err(|e| e.to_string())?;
        ensure(d == l, || format!("{name}: methods disagree"))?;
        ensure(d == subprimitive_by_definition(a), || format!("{name}: brute force disagrees"))?;
        if name.ends_with("regular") {
            ensure(d, || format!("{name}: regular action not subprimitive"))?;
        }
        held += d as usize;
    }
    let natural = is_subprimitive(&GroupAction::natural(&c2wr), SubprimitivityMethod::Def13).unwrap();
    ensure(!natural, || "C2 wr C2 natural action is subprimitive".into())?;
    let a5_nat = is_subprimitive(&GroupAction::natural(&a5), SubprimitivityMethod::Def13).unwrap();
    ensure(a5_nat, || "A5 on 5 points is not subprimitive".into())?;
    Ok(format!("{} actions, {held} subprimitive, methods agree on all", actions.len()))
}

fn opsch() -> Outcome {
    let table = MultiplierTable::default();
    let x = opsch_experiment(&corpus::c2_wr_c2(), 2, &table).map_err(|e| e.to_string())?;
    ensure(x.hypothesis_central && x.hypothesis_multiplier && x.conclusion, || format!("C2 wr C2: {x:?}"))?;
    let x = opsch_experiment(&corpus::alternating(5), 3, &table).map_err(|e| e.to_string())?;
    ensure(x.hypothesis_central && x.hypothesis_multiplier && x.conclusion, || format!("A5: {x:?}"))?;
    let x = opsch_experiment(&corpus::sl2_5(), 2, &table).map_err(|e| e.to_string())?;
    ensure(
        x.hypothesis_central && !x.hypothesis_multiplier && !x.conclusion,
        || format!("SL(2,5): {x:?}"),
    )?;
    ensure(x.necessity_witness() && !x.violates_lemma(), || "SL(2,5) misreported".into())?;
    Ok(format!(
        "C2 wr C2/2 and A5/3 hold; SL(2,5)/2 is a necessity witness (|O^2| = {})",
        x.op_upper_order
    ))
}

fn key_set(subs: &[jitower_core::Subgroup]) -> Vec<SubgroupKey> {
    let mut k: Vec<SubgroupKey> = subs.iter().map(|h| h.key().clone()).collect();
    k.sort();
    k
}

fn oracle_equivalence() -> Outcome {
    let c2 = corpus::cyclic(2);
    let wreaths = [
        ("C2 wr C2", wreath_product(&c2, &GroupAction::natural(&c2)).unwrap()),
        ("C2 wr C2 wr C2", wreath_product(&c2, &GroupAction::natural(&corpus::c2_wr_c2())).unwrap()),
        ("A5 wr C2", wreath_product(&corpus::alternating(5), &GroupAction::natural(&c2)).unwrap()),
    ];
    let mut detail = Vec::new();
    for (name, w) in &wreaths {
        let s = structured_normal_subgroups(w).map_err(|e| e.to_string())?;
        let l = normal_subgroups(w.group()).map_err(|e| e.to_string())?;
        ensure(key_set(&s) == key_set(l.members()), || format!("{name}: structured lattice differs"))?;
        detail.push(format!("{name} {} normal subgroups", s.len()));
    }
    let mut groups: Vec<(String, FiniteGroup)> = small_groups()
        .into_iter()
        .chain(medium_groups())
        .map(|(n, g)| (n.to_string(), g))
        .collect();
    groups.extend(nilpotent_corpus());
    for (name, g) in [
        ("A6", corpus::alternating(6)),
        ("S6", corpus::symmetric(6)),
        ("A7", corpus::alternating(7)),
    ] {
        groups.push((name.into(), g));
    }
    let mut count = 0;
    for (name, g) in &groups {
        if g.order() > 5000 {
            continue;
        }
        let enumerated = elements(g).len() as u128;
        ensure(g.order() == enumerated, || format!("{name}: chain order {} vs {enumerated}", g.order()))?;
        count += 1;
    }
    detail.push(format!("chain order = enumeration on {count} groups"));
    Ok(detail.join("; "))
}

fn narrow_ordering() -> Outcome {
    let mut detail = Vec::new();
    for (name, g) in [
        ("C16", corpus::cyclic(16)),
        ("C2 wr C2", corpus::c2_wr_c2()),
        ("A5 wr C2", corpus::a5_wr_c2()),
    ] {
        let factors = all_chief_factors(&g).map_err(|e| e.to_string())?;
        let k = factors.len();
        let mut rel = vec![vec![false; k]; k];
        for i in 0..k {
            for j in 0..k {
                rel[i][j] = nar_precedes(&factors[i], &factors[j]).map_err(|e| e.to_string())?;
            }
        }
        for i in 0..k {
            ensure(!rel[i][i], || format!("{name}: reflexive pair"))?;
            for j in 0..k {
                ensure(!(rel[i][j] && rel[j][i]), || format!("{name}: symmetric pair"))?;
                for l in 0..k {
                    ensure(!(rel[i][j] && rel[j][l]) || rel[i][l], || format!("{name}: not transitive"))?;
                }
            }
        }
        // covering propagates down the ordering
        let lat = normal_subgroups(&g).map_err(|e| e.to_string())?;
        for nsub in lat.members() {
            for i in 0..k {
                for j in 0..k {
                    if rel[i][j] && covers(nsub, &factors[i]).unwrap() {
                        ensure(covers(nsub, &factors[j]).unwrap(), || format!("{name}: covering not propagated"))?;
                    }
                }
            }
        }
        // second route on the small groups: the relation read off element sets
        if g.order() <= 16 {
            let normals = brute_normals(g.degree(), &elements(&g));
            for (i, fi) in factors.iter().enumerate() {
                for (j, fj) in factors.iter().enumerate() {
                    let (k1, l1) = (sub_elements(fi.upper()), sub_elements(fi.lower()));
                    let (k2, l2) = (sub_elements(fj.upper()), sub_elements(fj.lower()));
                    let above: Vec<Set> = normals.iter().filter(|m| l2.is_subset(m)).cloned().collect();
                    let expected = k2.is_subset(&l1) && brute_m_g(&above, &k1) == l1;
                    ensure(rel[i][j] == expected, || format!("{name}: brute force disagrees"))?;
                }
            }
        }
        let pairs = rel.iter().flatten().filter(|&&b| b).count();
        detail.push(format!("{name}: {k} factors, {pairs} related pairs"));
    }
    Ok(detail.join("; "))
}

fn no_fail(r: &VerificationReport, ids: &[&str]) -> Result<(), String> {
    for level in &r.levels {
        for c in &level.conditions {
            if ids.contains(&c.id.as_str()) {
                let ok = c.verdict == Verdict::Pass
                    || (c.verdict == Verdict::Skipped && c.skip.is_some_and(|s| !s.is_blocking()));
                ensure(ok, || format!("{} at level {} is {:?}", c.id, level.n, c.verdict))?;
            }
        }
    }
    Ok(())
}

fn wilson_round_trip() -> Outcome {
    let t = build_cyclic_tower(2, 3, 2).unwrap();
    ensure(verify_wilson(&t).passed(), || "wilson fails on the cyclic tower".into())?;
    let h = build_cyclic_tower(2, 8, 2).unwrap();
    ensure(verify_wilson(&h).passed(), || "wilson fails on the 8-level cyclic tower".into())?;
    let g = wilson_relabel(&h).map_err(|e| e.to_string())?;
    ensure(g.len() == 3 && g.level(1).same_group(h.level(4)), || "relabel shape".into())?;
    let r = verify_hji(&g, &[]);
    no_fail(&r, &["hji.i", "hji.ii", "hji.v"])?;

    let w = build_wreath_tower(&corpus::cyclic(2), 3).unwrap();
    let mut a = vec![Some(w.level(1).whole())];
    a.extend(w.maps().iter().map(|m| Some(m.kernel().clone())));
    let w = w.with_designated(a).unwrap();
    let r = verify_hji(&w, &[]);
    for n in 2..=3 {
        let c = r.level(n).unwrap().condition("hji.v").unwrap();
        ensure(c.verdict == Verdict::Fail, || format!("hji.v at level {n} is {:?}", c.verdict))?;
        let witness = c.witness.as_ref().ok_or("missing witness")?;
        let [u, v] = &witness.subgroups[..] else {
            return Err(format!("level {n}: witness should name U and V"));
        };
        // re-check: U contains A_n, and the G-conjugates of V < U commute pairwise and generate U
        let g = w.level(n);
        let whole = elements(g);
        let u_set = generate(g.degree(), &u.generators);
        let v_set = generate(g.degree(), &v.generators);
        ensure(sub_elements(w.designated(n).unwrap()).is_subset(&u_set), || format!("level {n}: U does not contain A"))?;
        let mut conjugates: Vec<Set> = whole
            .iter()
            .map(|x| v_set.iter().map(|y| conj(y, x)).collect::<Set>())
            .collect();
        conjugates.sort();
        conjugates.dedup();
        for c1 in &conjugates {
            for c2 in &conjugates {
                if c1 != c2 {
                    let commute = c1.iter().all(|x| c2.iter().all(|y| mul(x, y) == mul(y, x)));
                    ensure(commute, || format!("level {n}: conjugates of V do not commute"))?;
                }
            }
        }
        let gens: Vec<Elt> = conjugates.iter().flatten().cloned().collect();
        ensure(generate(g.degree(), &gens) == u_set, || format!("level {n}: conjugates of V do not generate U"))?;
        ensure(v_set.len() < u_set.len(), || format!("level {n}: V is not proper in U"))?;
    }
    Ok("cyclic tower passes wilson; relabelled tower passes hji i, ii, v; C2 wreath tower fails hji.v at levels 2, 3 with re-checked witnesses".into())
}

fn admissible() -> Outcome {
    let opts = VerifyOptions::default();
    let towers = [
        ("cyclic 2-tower", build_cyclic_tower(2, 3, 2).unwrap()),
        ("cyclic 3-tower", build_cyclic_tower(3, 3, 1).unwrap()),
        ("C2 wreath tower", build_wreath_tower(&corpus::cyclic(2), 3).unwrap()),
        ("C2 wr C2 chain", chain_construct(&corpus::c2_wr_c2()).unwrap()),
        ("projection tower", projection_tower()),
    ];
    let criteria = [Criteria::Introthm, Criteria::Mainjithm, Criteria::Hji, Criteria::ProP(2)];
    let mut total = 0;
    for (name, t) in &towers {
        for c in criteria {
            let found = find_admissible_a(t, c, &opts).map_err(|e| format!("{name} {c}: {e}"))?;
            for a in &found {
                let trial = t.with_designated(a.iter().cloned().map(Some).collect()).unwrap();
                ensure(verify(&trial, c, &opts).passed(), || format!("{name} {c}: assignment does not re-verify"))?;
            }
            total += found.len();
        }
    }
    let ea = find_admissible_a(&projection_tower(), Criteria::Introthm, &opts).unwrap();
    ensure(ea.is_empty(), || "projection tower has an admissible assignment".into())?;
    Ok(format!("{total} assignments re-verified; projection tower returns none"))
}

fn runtime_budget() -> Outcome {
    let t0 = Instant::now();
    let g = corpus::a5_wr_c2();
    let lat = normal_subgroups(&g).map_err(|e| e.to_string())?;
    let series = chief_series(&g).map_err(|e| e.to_string())?;
    let elapsed = t0.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("A5 wr C2 took {elapsed:?}"))?;
    Ok(format!(
        "A5 wr C2: {} normal subgroups, chief length {} in {:.2}s; full-suite wall clock is recorded in test_output.txt",
        lat.len(),
        series.len(),
        elapsed.as_secs_f64()
    ))
}
