mod common;

use common::*;
use jitower_core::actions::{action_profile, is_subprimitive, SubprimitivityMethod};
use jitower_core::builders::{build_cyclic_tower, build_wreath_tower};
use jitower_core::chief::{all_chief_factors, are_associated, chief_series, nar_precedes, ChiefFactor};
use jitower_core::lattice::{abstract_melnikov, all_subgroups, normal_subgroups, relative_melnikov};
use jitower_core::structure::commutator_subgroup;
use jitower_core::{corpus, FiniteGroup, Subgroup};

fn same_sets(subs: &[Subgroup], sets: &[Set]) -> bool {
    let mut a: Vec<Set> = subs.iter().map(sub_elements).collect();
    let mut b = sets.to_vec();
    a.sort();
    b.sort();
    a == b
}

#[test]
fn brute_normal_subgroup_routines_agree() {
    for (name, g) in small_groups() {
        let whole = elements(&g);
        let a = brute_normals(g.degree(), &whole);
        let b = normal_subgroups_by_classes(&whole);
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn normal_lattice_matches_brute_force() {
    for (name, g) in small_groups().into_iter().chain(medium_groups()) {
        let whole = elements(&g);
        let brute = brute_normals(g.degree(), &whole);
        let lat = normal_subgroups(&g).unwrap();
        assert!(same_sets(lat.members(), &brute), "{name}");
    }
}

#[test]
fn normal_lattice_matches_filtered_subgroup_enumeration() {
    for (name, g) in small_groups() {
        let normal: Vec<Subgroup> = all_subgroups(&g, g.order())
            .unwrap()
            .into_iter()
            .filter(|h| h.is_normal())
            .collect();
        let brute = brute_normals(g.degree(), &elements(&g));
        assert!(same_sets(&normal, &brute), "{name}");
    }
}

#[test]
fn chain_order_matches_enumeration() {
    let mut groups: Vec<(&str, FiniteGroup)> = small_groups();
    groups.extend(medium_groups());
    groups.push(("A6", corpus::alternating(6)));
    groups.push(("S6", corpus::symmetric(6)));
    groups.push(("A7", corpus::alternating(7)));
    for g in build_cyclic_tower(2, 4, 1).unwrap().levels() {
        groups.push(("cyclic preset", g.clone()));
    }
    for g in build_wreath_tower(&corpus::cyclic(2), 3).unwrap().levels() {
        groups.push(("wreath preset", g.clone()));
    }
    for (name, g) in groups {
        assert!(g.order() <= 5000);
        assert_eq!(g.order(), elements(&g).len() as u128, "{name}");
    }
}

#[test]
fn melnikov_subgroups_match_brute_force() {
    for (name, g) in small_groups().into_iter().chain(medium_groups()) {
        let whole = elements(&g);
        let normals = brute_normals(g.degree(), &whole);
        for a in normals.iter().filter(|a| a.len() > 1) {
            let sub = to_subgroup(&g, a);
            let rel = relative_melnikov(&sub).unwrap();
            let abs = abstract_melnikov(&sub).unwrap();
            assert_eq!(sub_elements(&rel), brute_m_g(&normals, a), "{name} M_G");
            assert_eq!(sub_elements(&abs), brute_m(g.degree(), a), "{name} M");
            let c = commutator_subgroup(&sub, &g.whole()).unwrap();
            assert_eq!(sub_elements(&c), commutator(g.degree(), a, &whole), "{name} [A,G]");
        }
    }
}

#[test]
fn chief_factors_match_brute_force() {
    for (name, g) in small_groups().into_iter().chain(medium_groups()) {
        let normals = brute_normals(g.degree(), &elements(&g));
        let mut brute: Vec<(Set, Set)> = chief_factors(&normals)
            .into_iter()
            .map(|(k, l)| (normals[k].clone(), normals[l].clone()))
            .collect();
        let mut ours: Vec<(Set, Set)> = all_chief_factors(&g)
            .unwrap()
            .iter()
            .map(|f| (sub_elements(f.upper()), sub_elements(f.lower())))
            .collect();
        brute.sort();
        ours.sort();
        assert_eq!(ours, brute, "{name}");
        let series = chief_series(&g).unwrap();
        let product: u128 = series.iter().map(|f| f.order()).product();
        assert_eq!(product, g.order(), "{name}");
    }
}

fn factor(g: &FiniteGroup, k: &Set, l: &Set) -> ChiefFactor {
    ChiefFactor::new(&to_subgroup(g, k), &to_subgroup(g, l)).unwrap()
}

#[test]
fn association_matches_brute_force() {
    for (name, g) in small_groups() {
        let n = g.degree();
        let normals = brute_normals(n, &elements(&g));
        let factors = chief_factors(&normals);
        for &(k1, l1) in &factors {
            for &(k2, l2) in &factors {
                let (k1s, l1s, k2s, l2s) = (&normals[k1], &normals[l1], &normals[k2], &normals[l2]);
                let l12 = product(n, l1s, l2s);
                let expected = product(n, k1s, l2s) == product(n, k2s, l1s)
                    && k1s.intersection(&l12).cloned().collect::<Set>() == *l1s
                    && k2s.intersection(&l12).cloned().collect::<Set>() == *l2s;
                let got = are_associated(&factor(&g, k1s, l1s), &factor(&g, k2s, l2s)).unwrap();
                assert_eq!(got, expected, "{name}");
            }
        }
    }
}

#[test]
fn nar_precedes_matches_the_realized_quotient() {
    for (name, g) in small_groups().into_iter().chain([("C16", corpus::cyclic(16))]) {
        let n = g.degree();
        let normals = brute_normals(n, &elements(&g));
        let factors = chief_factors(&normals);
        for &(k1, l1) in &factors {
            for &(k2, l2) in &factors {
                let (k1s, l1s, k2s, l2s) = (&normals[k1], &normals[l1], &normals[k2], &normals[l2]);
                // normal subgroups of G/L2 correspond to normal subgroups above L2
                let above: Vec<Set> = normals.iter().filter(|m| l2s.is_subset(m)).cloned().collect();
                let expected = k2s.is_subset(l1s) && brute_m_g(&above, k1s) == *l1s;
                let got = nar_precedes(&factor(&g, k1s, l1s), &factor(&g, k2s, l2s)).unwrap();
                assert_eq!(got, expected, "{name}");
            }
        }
    }
}

#[test]
fn subprimitivity_methods_agree_with_the_definition() {
    let corpus = subprimitivity_corpus();
    assert!(corpus.len() >= 100, "{}", corpus.len());
    for (name, a) in &corpus {
        let d = is_subprimitive(a, SubprimitivityMethod::Def13).unwrap();
        let l = is_subprimitive(a, SubprimitivityMethod::Lemma62).unwrap();
        assert_eq!(d, l, "{name}");
        assert_eq!(d, subprimitive_by_definition(a), "{name}");
    }
}

#[test]
fn faithful_intransitive_actions_are_subprimitive_orbitwise() {
    let mut checked = 0;
    for (name, a) in subprimitivity_corpus() {
        let profile = action_profile(&a);
        if !a.is_faithful() || profile.orbits.len() < 2 {
            continue;
        }
        let orbitwise = profile.orbits.iter().all(|o| {
            let r = restrict_to_orbit(&a, o);
            r.is_faithful() && is_subprimitive(&r, SubprimitivityMethod::Def13).unwrap()
        });
        assert_eq!(is_subprimitive(&a, SubprimitivityMethod::Def13).unwrap(), orbitwise, "{name}");
        checked += 1;
    }
    assert!(checked > 20, "{checked}");
}

#[test]
fn regular_and_primitive_faithful_actions_are_subprimitive() {
    for (name, a) in subprimitivity_corpus() {
        let p = action_profile(&a);
        if name.ends_with("regular") || (p.primitive && a.is_faithful()) {
            assert!(is_subprimitive(&a, SubprimitivityMethod::Def13).unwrap(), "{name}");
        }
    }
}
