//! Brute-force oracles on explicit element sets. Nothing here uses element
//! tables, stabilizer chains or the normal-lattice code.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use jitower_core::lattice::{all_subgroups, normal_subgroups};
use jitower_core::towers::Tower;
use jitower_core::{corpus, direct_product, FiniteGroup, GroupAction, GroupHom, Permutation, Subgroup};

pub type Elt = Vec<u32>;
pub type Set = BTreeSet<Elt>;

pub fn mul(a: &[u32], b: &[u32]) -> Elt {
    a.iter().map(|&x| b[x as usize]).collect()
}

pub fn inv(a: &[u32]) -> Elt {
    let mut out = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x as usize] = i as u32;
    }
    out
}

pub fn conj(a: &[u32], h: &[u32]) -> Elt {
    mul(&mul(&inv(h), a), h)
}

pub fn comm(a: &[u32], b: &[u32]) -> Elt {
    mul(&mul(&inv(a), &inv(b)), &mul(a, b))
}

pub fn identity(n: usize) -> Elt {
    (0..n as u32).collect()
}

/// Subgroup generated by `gens` inside `S_degree`.
pub fn generate(degree: usize, gens: &[Elt]) -> Set {
    let mut seen: HashSet<Elt> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(identity(degree));
    queue.push_back(identity(degree));
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = mul(&x, g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().collect()
}

pub fn elements(g: &FiniteGroup) -> Set {
    generate(g.degree(), &gens_of(g.generators()))
}

pub fn sub_elements(h: &Subgroup) -> Set {
    generate(h.degree(), &gens_of(h.generators()))
}

pub fn gens_of(ps: &[Permutation]) -> Vec<Elt> {
    ps.iter().map(|p| p.images().to_vec()).collect()
}

pub fn to_subgroup(g: &FiniteGroup, s: &Set) -> Subgroup {
    let gens = s
        .iter()
        .map(|x| Permutation::from_images(x.clone()).unwrap())
        .collect();
    g.subgroup(gens).unwrap()
}

/// Smallest subset of `whole` closed under conjugation by `whole` containing `seeds`,
/// then closed under products.
pub fn normal_closure(degree: usize, whole: &Set, seeds: &[Elt]) -> Set {
    let mut gens: Vec<Elt> = Vec::new();
    for s in seeds {
        for h in whole {
            gens.push(conj(s, h));
        }
    }
    gens.sort();
    gens.dedup();
    generate(degree, &gens)
}

pub fn product(degree: usize, a: &Set, b: &Set) -> Set {
    let gens: Vec<Elt> = a.iter().chain(b.iter()).cloned().collect();
    generate(degree, &gens)
}

/// All normal subgroups of the group with element set `whole`: normal
/// closures of single elements, closed under products.
pub fn brute_normals(degree: usize, whole: &Set) -> Vec<Set> {
    let mut atoms: Vec<Set> = Vec::new();
    for x in whole {
        let n = normal_closure(degree, whole, &[x.clone()]);
        if !atoms.contains(&n) {
            atoms.push(n);
        }
    }
    let mut all: Vec<Set> = atoms.clone();
    let mut i = 0;
    while i < all.len() {
        for a in &atoms {
            if a.is_subset(&all[i]) {
                continue;
            }
            let j = product(degree, &all[i], a);
            if !all.contains(&j) {
                all.push(j);
            }
        }
        i += 1;
    }
    all.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    all
}

/// Normal subgroups as unions of conjugacy classes closed under products;
/// only for groups with few classes.
pub fn normal_subgroups_by_classes(whole: &Set) -> Vec<Set> {
    let mut classes: Vec<Set> = Vec::new();
    let mut seen = Set::new();
    for x in whole {
        if seen.contains(x) {
            continue;
        }
        let class: Set = whole.iter().map(|h| conj(x, h)).collect();
        seen.extend(class.iter().cloned());
        classes.push(class);
    }
    // the identity class comes first in sorted order
    let id = classes.remove(0);
    let order = whole.len();
    let mut out = Vec::new();
    for mask in 0u64..(1 << classes.len()) {
        let size: usize = 1 + (0..classes.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| classes[i].len())
            .sum::<usize>();
        if order % size != 0 {
            continue;
        }
        let mut s = id.clone();
        for (i, c) in classes.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s.extend(c.iter().cloned());
            }
        }
        if s.iter().all(|x| s.iter().all(|y| s.contains(&mul(x, y)))) {
            out.push(s);
        }
    }
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out
}

pub fn intersect_all(whole: &Set, family: &[&Set]) -> Set {
    let mut out = whole.clone();
    for s in family {
        out = out.intersection(s).cloned().collect();
    }
    out
}

/// Maximal members of `family` among proper subsets of `top`.
pub fn maximal_proper<'a>(top: &Set, family: &'a [Set]) -> Vec<&'a Set> {
    let proper: Vec<&Set> = family.iter().filter(|s| s.len() < top.len() && s.is_subset(top)).collect();
    proper
        .iter()
        .copied()
        .filter(|s| !proper.iter().any(|t| t.len() > s.len() && s.is_subset(t)))
        .collect()
}

/// `M(A)`: intersection of the maximal normal subgroups of `A` in its own right.
pub fn brute_m(degree: usize, a: &Set) -> Set {
    let normals = brute_normals(degree, a);
    intersect_all(a, &maximal_proper(a, &normals))
}

/// `M_G(A)`: intersection of the maximal `G`-invariant proper subgroups of `A`.
pub fn brute_m_g(g_normals: &[Set], a: &Set) -> Set {
    intersect_all(a, &maximal_proper(a, g_normals))
}

/// `[A, B]` generated by all commutators.
pub fn commutator(degree: usize, a: &Set, b: &Set) -> Set {
    let mut gens: Vec<Elt> = Vec::new();
    for x in a {
        for y in b {
            gens.push(comm(x, y));
        }
    }
    gens.sort();
    gens.dedup();
    generate(degree, &gens)
}

/// Chief factors `(K, L)` among the normal subgroups: `L < K` with nothing between.
pub fn chief_factors(normals: &[Set]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (k, ks) in normals.iter().enumerate() {
        for (l, ls) in normals.iter().enumerate() {
            if ls.len() < ks.len()
                && ls.is_subset(ks)
                && !normals
                    .iter()
                    .any(|m| m.len() > ls.len() && m.len() < ks.len() && ls.is_subset(m) && m.is_subset(ks))
            {
                out.push((k, l));
            }
        }
    }
    out
}

/// Kernel of the action restricted to `points`, as the set of elements fixing each point.
pub fn pointwise_kernel(set: &Set, images: &dyn Fn(&Elt) -> Elt, points: &[u32]) -> Set {
    set.iter()
        .filter(|x| {
            let y = images(x);
            points.iter().all(|&p| y[p as usize] == p)
        })
        .cloned()
        .collect()
}

/// Restriction of an action to one of its orbits, relabelled as `0..len`.
pub fn restrict_to_orbit(a: &GroupAction, orbit: &[u32]) -> GroupAction {
    let mut index = vec![u32::MAX; a.degree()];
    for (i, &p) in orbit.iter().enumerate() {
        index[p as usize] = i as u32;
    }
    let images = a
        .images()
        .iter()
        .map(|g| {
            let v = orbit.iter().map(|&p| index[g.images()[p as usize] as usize]).collect();
            Permutation::from_images(v).unwrap()
        })
        .collect();
    GroupAction::new(a.group(), orbit.len(), images).unwrap()
}

/// Orbits of the image permutations.
pub fn orbits(degree: usize, gens: &[Elt]) -> Vec<Vec<u32>> {
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    for s in 0..degree {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut orbit = vec![s as u32];
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            i += 1;
            for g in gens {
                let y = g[x as usize];
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    orbit.push(y);
                }
            }
        }
        orbit.sort();
        out.push(orbit);
    }
    out
}

/// Subprimitivity straight from the definition: for every normal `H`, the
/// kernel of `H` on each of its orbits is `H ∩ K`, with `K` the global kernel.
pub fn subprimitive_by_definition(a: &GroupAction) -> bool {
    let g = a.group();
    let whole = elements(g);
    let hom = a.hom();
    let act = |x: &Elt| -> Elt {
        hom.apply(&Permutation::from_images(x.clone()).unwrap())
            .unwrap()
            .images()
            .to_vec()
    };
    let all_points: Vec<u32> = (0..a.degree() as u32).collect();
    let kernel = pointwise_kernel(&whole, &act, &all_points);
    for h in brute_normals(g.degree(), &whole) {
        let h_images: Vec<Elt> = h.iter().map(act).collect();
        let hk: Set = h.intersection(&kernel).cloned().collect();
        for orbit in orbits(a.degree(), &h_images) {
            if pointwise_kernel(&h, &act, &orbit) != hk {
                return false;
            }
        }
    }
    true
}

pub fn small_groups() -> Vec<(&'static str, FiniteGroup)> {
    vec![
        ("C1", corpus::cyclic(1)),
        ("C6", corpus::cyclic(6)),
        ("C12", corpus::cyclic(12)),
        ("V4", corpus::klein()),
        ("C2^3", corpus::elementary_abelian(2, 3)),
        ("C3^2", corpus::elementary_abelian(3, 2)),
        ("S3", corpus::symmetric(3)),
        ("S4", corpus::symmetric(4)),
        ("A4", corpus::alternating(4)),
        ("D5", corpus::dihedral(5)),
        ("D6", corpus::dihedral(6)),
        ("Q8", corpus::quaternion()),
        ("C2wrC2", corpus::c2_wr_c2()),
        ("C2xC4", direct_product(&corpus::cyclic(2), &corpus::cyclic(4)).unwrap()),
        ("S3xC2", direct_product(&corpus::symmetric(3), &corpus::cyclic(2)).unwrap()),
    ]
}

pub fn medium_groups() -> Vec<(&'static str, FiniteGroup)> {
    vec![
        ("A5", corpus::alternating(5)),
        ("S5", corpus::symmetric(5)),
        ("SL(2,5)", corpus::sl2_5()),
        ("S3xS3", direct_product(&corpus::symmetric(3), &corpus::symmetric(3)).unwrap()),
        ("C2wrC2wrC2", corpus::c2_wr_c2_wr_c2()),
    ]
}

pub fn subprimitivity_corpus() -> Vec<(String, GroupAction)> {
    let mut out = Vec::new();
    for n in [4usize, 5] {
        let s = corpus::symmetric(n);
        for h in all_subgroups(&s, s.order()).unwrap() {
            if h.order() <= 64 {
                out.push((format!("S{n} subgroup of order {}", h.order()), GroupAction::natural(h.group())));
            }
        }
    }
    for (name, g) in small_groups() {
        if g.degree() <= 8 && !g.is_trivial() {
            out.push((format!("{name} natural"), GroupAction::natural(&g)));
        }
        if g.order() <= 24 {
            out.push((format!("{name} regular"), GroupAction::regular(&g).unwrap()));
        }
    }
    let d8 = corpus::dihedral(8);
    for h in all_subgroups(&d8, d8.order()).unwrap() {
        out.push((format!("D8 subgroup of order {}", h.order()), GroupAction::natural(h.group())));
    }
    out
}


/// `C2 <- C2^2 <- C2^3`, each map forgetting the last coordinate, with `A_n = G_n`.
pub fn projection_tower() -> Tower {
    let gs: Vec<FiniteGroup> = (1..=3).map(|k| corpus::elementary_abelian(2, k)).collect();
    let maps = (0..2)
        .map(|i| {
            let (lower, upper) = (&gs[i], &gs[i + 1]);
            let mut images = lower.generators().to_vec();
            images.push(lower.identity());
            GroupHom::new(upper, lower, images).unwrap()
        })
        .collect();
    let a = gs.iter().map(|g| Some(g.whole())).collect();
    Tower::new(gs, maps, a).unwrap()
}

/// The first normal subgroup of the given order.
pub fn normal_of_order(g: &FiniteGroup, order: u128) -> Subgroup {
    normal_subgroups(g)
        .unwrap()
        .members()
        .iter()
        .find(|h| h.order() == order)
        .unwrap()
        .clone()
}
