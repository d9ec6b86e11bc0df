//! Normal-subgroup lattices, Mel'nikov subgroups, narrowness, `p`-radicals,
//! Frattini subgroups and obliquity cores.
//!
//! Every subgroup of a finite group is open, so "maximal open normal" below
//! reads as "maximal normal" throughout. An intersection over an empty
//! family is the whole group.

use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{ElementTable, FiniteGroup};
use crate::perm::Permutation;
use crate::structure::{commutator_subgroup, is_p_power, is_prime, prime_power};
use crate::subgroup::Subgroup;

/// All normal subgroups of a group, sorted by canonical key (so the trivial
/// subgroup comes first and the whole group last).
#[derive(Clone, Debug)]
pub struct NormalLattice {
    ambient: FiniteGroup,
    members: Vec<Subgroup>,
    bits: Vec<Arc<FixedBitSet>>,
    index: HashMap<FixedBitSet, usize>,
}

impl NormalLattice {
    fn from_parts(ambient: &FiniteGroup, parts: &[(FiniteGroup, Arc<FixedBitSet>)]) -> Self {
        let members: Vec<Subgroup> = parts
            .iter()
            .map(|(h, b)| Subgroup::from_group_and_bits(ambient.clone(), h.clone(), b.clone()))
            .collect();
        let bits: Vec<Arc<FixedBitSet>> = parts.iter().map(|(_, b)| b.clone()).collect();
        let index = bits
            .iter()
            .enumerate()
            .map(|(i, b)| ((**b).clone(), i))
            .collect();
        NormalLattice {
            ambient: ambient.clone(),
            members,
            bits,
            index,
        }
    }

    pub fn ambient(&self) -> &FiniteGroup {
        &self.ambient
    }

    pub fn members(&self) -> &[Subgroup] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &Subgroup {
        &self.members[i]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn trivial_index(&self) -> usize {
        0
    }

    pub fn whole_index(&self) -> usize {
        self.members.len() - 1
    }

    pub fn orders(&self) -> Vec<u128> {
        self.members.iter().map(|m| m.order()).collect()
    }

    pub fn bits(&self, i: usize) -> &FixedBitSet {
        &self.bits[i]
    }

    /// Index of a subgroup of the ambient group, if it is a member.
    pub fn position(&self, h: &Subgroup) -> Option<usize> {
        let h = h.reambient(&self.ambient);
        let bits = h.bits().ok()?;
        self.index.get(&*bits).copied()
    }

    pub fn position_of_bits(&self, bits: &FixedBitSet) -> Option<usize> {
        self.index.get(bits).copied()
    }

    /// Like `position`, but a subgroup that is not a member is an error.
    pub fn require(&self, h: &Subgroup) -> Result<usize> {
        self.position(h).ok_or_else(|| {
            Error::NotNormal(format!(
                "subgroup of order {} is not normal in the group of order {}",
                h.order(),
                self.ambient.order()
            ))
        })
    }

    #[inline]
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.bits[i].is_subset(&self.bits[j])
    }

    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.le(i, j)
    }

    /// Members strictly below member `j`.
    pub fn strictly_below(&self, j: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.lt(i, j)).collect()
    }

    /// Members `i ≤ j`.
    pub fn below(&self, j: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.le(i, j)).collect()
    }

    /// Members `i ≥ j`.
    pub fn above(&self, j: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.le(j, i)).collect()
    }

    /// Maximal members strictly below `j`: the maximal `G`-invariant subgroups of member `j`.
    pub fn maximal_below(&self, j: usize) -> Vec<usize> {
        let below = self.strictly_below(j);
        below
            .iter()
            .copied()
            .filter(|&i| !below.iter().any(|&k| self.lt(i, k)))
            .collect()
    }

    /// Minimal nontrivial members.
    pub fn minimal_normal(&self) -> Vec<usize> {
        let nontrivial: Vec<usize> = (1..self.len()).collect();
        nontrivial
            .iter()
            .copied()
            .filter(|&i| !nontrivial.iter().any(|&k| self.lt(k, i)))
            .collect()
    }

    pub fn maximal_normal(&self) -> Vec<usize> {
        self.maximal_below(self.whole_index())
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        let mut b = (*self.bits[i]).clone();
        b.intersect_with(&self.bits[j]);
        self.index[&b]
    }

    /// Meet of a family; the whole group for an empty family.
    pub fn meet_all(&self, family: &[usize]) -> usize {
        family
            .iter()
            .fold(self.whole_index(), |acc, &i| self.meet(acc, i))
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        if self.le(i, j) {
            return j;
        }
        if self.le(j, i) {
            return i;
        }
        let table = self.ambient.element_table().expect("tabulated");
        let gens = table
            .indices_of(self.members[j].generators())
            .expect("members");
        let b = table.right_closure(&self.bits[i], &gens);
        self.index[&b]
    }

    pub fn join_all(&self, family: &[usize]) -> usize {
        family.iter().fold(0, |acc, &i| self.join(acc, i))
    }

    /// A maximal chain `1 = N_0 < N_1 < ... < N_r = G`, chosen greedily by
    /// canonical order.
    pub fn maximal_chain(&self) -> Vec<usize> {
        let mut chain = vec![self.whole_index()];
        while *chain.last().expect("nonempty") != 0 {
            let top = *chain.last().expect("nonempty");
            let below = self.maximal_below(top);
            chain.push(below[0]);
        }
        chain.reverse();
        chain
    }

    pub fn export(&self) -> LatticeExport {
        LatticeExport {
            order: self.ambient.order(),
            members: self
                .members
                .iter()
                .map(ExportedSubgroup::of)
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportedSubgroup {
    pub order: u128,
    pub generators: Vec<Vec<u32>>,
}

impl ExportedSubgroup {
    pub fn of(h: &Subgroup) -> Self {
        ExportedSubgroup {
            order: h.order(),
            generators: h.generators().iter().map(|g| g.images().to_vec()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeExport {
    pub order: u128,
    pub members: Vec<ExportedSubgroup>,
}

/// All normal subgroups: normal closures of conjugacy classes, closed under joins.
pub fn normal_subgroups(g: &FiniteGroup) -> Result<NormalLattice> {
    if let Some(parts) = g.data().normals.get() {
        return Ok(NormalLattice::from_parts(g, parts));
    }
    let cap = g.caps().lattice;
    if g.order() > cap {
        return Err(Error::CapExceeded {
            what: "normal lattice",
            order: g.order(),
            cap,
        });
    }
    let table = g.element_table()?;
    let parts = Arc::new(compute_normal_subgroups(g, &table));
    let parts = g.data().normals.get_or_init(|| parts);
    Ok(NormalLattice::from_parts(g, parts))
}

fn compute_normal_subgroups(
    g: &FiniteGroup,
    table: &ElementTable,
) -> Vec<(FiniteGroup, Arc<FixedBitSet>)> {
    let classes = table.conjugacy_classes(g.generators());
    let mut class_closures: Vec<(FixedBitSet, Vec<usize>)> = Vec::new();
    let mut seen: HashMap<FixedBitSet, usize> = HashMap::new();
    // elements generating the same cyclic subgroup have the same normal closure
    let mut covered = table.empty_set();
    let mut scratch = table.scratch();
    for class in classes.iter().filter(|c| c[0] != 0) {
        let rep = class[0];
        if covered.contains(rep) {
            continue;
        }
        let rep_perm = table.element(rep).to_vec();
        let mut powers = vec![rep];
        let mut cur = rep;
        loop {
            cur = table.mul_perm_with(cur, &rep_perm, &mut scratch);
            if cur == 0 {
                break;
            }
            powers.push(cur);
        }
        let order = powers.len() + 1;
        for (k, &x) in powers.iter().enumerate() {
            if gcd(k + 1, order) == 1 {
                covered.insert(x);
            }
        }
        let mut bits = table.closure(&[]);
        let mut gens = Vec::new();
        for &x in class {
            if !bits.contains(x) {
                gens.push(x);
                bits = table.right_closure(&bits, &gens);
            }
        }
        if !seen.contains_key(&bits) {
            seen.insert(bits.clone(), class_closures.len());
            class_closures.push((bits, gens));
        }
    }
    let trivial = table.closure(&[]);
    let mut members: Vec<(FixedBitSet, Vec<usize>)> = vec![(trivial.clone(), Vec::new())];
    let mut index: HashMap<FixedBitSet, usize> = HashMap::new();
    index.insert(trivial, 0);
    let mut i = 0;
    while i < members.len() {
        for (cbits, cgens) in &class_closures {
            if cbits.is_subset(&members[i].0) {
                continue;
            }
            // both are normal, so the join is the product set
            let joined = if members[i].0.is_subset(cbits) {
                cbits.clone()
            } else {
                table.right_closure(&members[i].0, cgens)
            };
            if !index.contains_key(&joined) {
                let mut gens = members[i].1.clone();
                gens.extend_from_slice(cgens);
                index.insert(joined.clone(), members.len());
                members.push((joined, gens));
            }
        }
        i += 1;
    }
    let mut keyed: Vec<(usize, Vec<usize>, FixedBitSet)> = members
        .into_iter()
        .map(|(b, _)| (b.count_ones(..), b.ones().collect(), b))
        .collect();
    keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    keyed
        .into_iter()
        .map(|(_, _, b)| {
            let gens = table
                .reduce_generators(&b)
                .into_iter()
                .map(|x| table.perm(x))
                .collect();
            let h = g.derive(gens).expect("members");
            (h, Arc::new(b))
        })
        .collect()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Mel'nikov subgroups.
///
/// Without `relative_to`: `M(A)`, the intersection of the maximal normal
/// subgroups of `A` as a group in its own right. With `relative_to = G`:
/// `M_G(A)`, the intersection of the maximal `G`-invariant proper subgroups
/// of `A`. The result lives in `A`'s ambient group.
pub fn melnikov(a: &Subgroup, relative_to: Option<&FiniteGroup>) -> Result<Subgroup> {
    if a.is_trivial() {
        return Err(Error::TrivialSubgroup);
    }
    match relative_to {
        None => {
            let lat = normal_subgroups(a.group())?;
            let m = lat.meet_all(&lat.maximal_normal());
            Ok(lat.member(m).reambient(a.ambient()))
        }
        Some(g) => {
            let (lat, i) = locate_normal(g, a)?;
            let m = lat.meet_all(&lat.maximal_below(i));
            Ok(lat.member(m).reambient(a.ambient()))
        }
    }
}

/// `M(A)`, the Mel'nikov subgroup of `A` as an abstract group.
pub fn abstract_melnikov(a: &Subgroup) -> Result<Subgroup> {
    melnikov(a, None)
}

/// `M_G(A)` with `G` the ambient group of `A`.
pub fn relative_melnikov(a: &Subgroup) -> Result<Subgroup> {
    melnikov(a, Some(a.ambient()))
}

/// The lattice of `g` and the position of `a` in it; `a` must be normal in `g`.
pub(crate) fn locate_normal(g: &FiniteGroup, a: &Subgroup) -> Result<(NormalLattice, usize)> {
    if a.degree() != g.degree() || !a.generators().iter().all(|x| g.contains(x)) {
        return Err(Error::NotAMember);
    }
    let a = a.reambient(g);
    a.require_normal()?;
    let lat = normal_subgroups(g)?;
    let i = lat.require(&a)?;
    Ok((lat, i))
}

#[derive(Clone, Debug)]
pub struct Narrowness {
    pub narrow: bool,
    /// `M_G(A)` when `A` is narrow.
    pub unique_max: Option<Subgroup>,
    /// All maximal `G`-invariant proper subgroups of `A`.
    pub maximal: Vec<Subgroup>,
}

/// Whether `A` has a unique maximal `G`-invariant proper subgroup.
pub fn is_narrow(g: &FiniteGroup, a: &Subgroup) -> Result<Narrowness> {
    if a.is_trivial() {
        return Err(Error::TrivialSubgroup);
    }
    let (lat, i) = locate_normal(g, a)?;
    let maximal: Vec<Subgroup> = lat
        .maximal_below(i)
        .into_iter()
        .map(|j| lat.member(j).clone())
        .collect();
    let narrow = maximal.len() == 1;
    Ok(Narrowness {
        narrow,
        unique_max: narrow.then(|| maximal[0].clone()),
        maximal,
    })
}

#[derive(Clone, Debug)]
pub struct PRadicals {
    pub p: u64,
    /// `O_p(G)`, the largest normal `p`-subgroup.
    pub op_lower: Subgroup,
    /// `O^p(G)`, the intersection of the normal subgroups of `p`-power index.
    pub op_upper: Subgroup,
    /// `Φ(G)`; `None` when `G` is not a `p`-group and exceeds the subgroup cap.
    pub frattini: Option<Subgroup>,
    /// `Φ(O_p(G))`
    pub frattini_of_op: Subgroup,
}

pub fn p_radicals(g: &FiniteGroup, p: u64) -> Result<PRadicals> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let lat = normal_subgroups(g)?;
    let op_upper = op_upper_in(&lat, p);
    let op_lower = op_lower_in(&lat, p);
    let frattini_of_op = p_group_frattini(&op_lower, p);
    let frattini = match frattini(g) {
        Ok(f) => Some(f),
        Err(e) if e.is_cap() => None,
        Err(e) => return Err(e),
    };
    Ok(PRadicals {
        p,
        op_lower,
        op_upper,
        frattini,
        frattini_of_op,
    })
}

pub(crate) fn op_upper_in(lat: &NormalLattice, p: u64) -> Subgroup {
    let n = lat.ambient().order();
    let family: Vec<usize> = (0..lat.len())
        .filter(|&i| is_p_power(n / lat.member(i).order(), p))
        .collect();
    lat.member(lat.meet_all(&family)).clone()
}

pub(crate) fn op_lower_in(lat: &NormalLattice, p: u64) -> Subgroup {
    let family: Vec<usize> = (0..lat.len())
        .filter(|&i| is_p_power(lat.member(i).order(), p))
        .collect();
    lat.member(lat.join_all(&family)).clone()
}

/// `O^p(G)`
pub fn op_upper(g: &FiniteGroup, p: u64) -> Result<Subgroup> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(op_upper_in(&normal_subgroups(g)?, p))
}

/// `O_p(G)`
pub fn op_lower(g: &FiniteGroup, p: u64) -> Result<Subgroup> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(op_lower_in(&normal_subgroups(g)?, p))
}

/// `Φ(P) = [P,P] P^p` for a `p`-subgroup `P`, as a subgroup of `P`'s ambient group.
pub fn p_group_frattini(pgroup: &Subgroup, p: u64) -> Subgroup {
    let derived = commutator_subgroup(pgroup, pgroup).expect("same ambient");
    let mut gens: Vec<Permutation> = derived.generators().to_vec();
    gens.extend(pgroup.generators().iter().map(|x| x.pow(p as i64)));
    pgroup.ambient().subgroup_unchecked(gens)
}

/// `Φ(G)`: by `[G,G]G^p` for `p`-groups, otherwise as the intersection of the
/// maximal subgroups (subject to the subgroup cap).
pub fn frattini(g: &FiniteGroup) -> Result<Subgroup> {
    if g.is_trivial() {
        return Ok(g.trivial_subgroup());
    }
    if let Some((p, _)) = prime_power(g.order()) {
        return Ok(p_group_frattini(&g.whole(), p));
    }
    frattini_by_maximal_subgroups(g)
}

/// `Φ(G)` as the intersection of all maximal subgroups, by exhaustive search.
pub fn frattini_by_maximal_subgroups(g: &FiniteGroup) -> Result<Subgroup> {
    let subs = all_subgroups(g, g.caps().subgroups)?;
    let table = g.element_table()?;
    let proper: Vec<Arc<FixedBitSet>> = subs
        .iter()
        .filter(|s| !s.is_whole())
        .map(|s| s.bits())
        .collect::<Result<_>>()?;
    let mut acc = table.empty_set();
    acc.insert_range(..);
    for (i, b) in proper.iter().enumerate() {
        let maximal = !proper
            .iter()
            .enumerate()
            .any(|(j, c)| j != i && b.is_subset(c) && b.count_ones(..) < c.count_ones(..));
        if maximal {
            acc.intersect_with(b);
        }
    }
    Ok(Subgroup::from_bits(g, &table, acc))
}

/// Every subgroup of `G`, sorted by canonical key, by closing the cyclic
/// subgroups under joins with cyclic subgroups.
pub fn all_subgroups(g: &FiniteGroup, cap: u128) -> Result<Vec<Subgroup>> {
    if g.order() > cap {
        return Err(Error::CapExceeded {
            what: "subgroup enumeration",
            order: g.order(),
            cap,
        });
    }
    let table = g.element_table()?;
    let mut cyclic: Vec<(FixedBitSet, usize)> = Vec::new();
    let mut covered = table.empty_set();
    for x in 1..table.len() {
        if covered.contains(x) {
            continue;
        }
        let c = table.closure(&[x]);
        // generators of the same cyclic subgroup need not be revisited
        let order = c.count_ones(..);
        for y in c.ones() {
            if table.closure(&[y]).count_ones(..) == order {
                covered.insert(y);
            }
        }
        cyclic.push((c, x));
    }
    let trivial = table.closure(&[]);
    let mut subs: Vec<(FixedBitSet, Vec<usize>)> = vec![(trivial.clone(), Vec::new())];
    let mut index: HashMap<FixedBitSet, usize> = HashMap::new();
    index.insert(trivial, 0);
    for (c, x) in &cyclic {
        if !index.contains_key(c) {
            index.insert(c.clone(), subs.len());
            subs.push((c.clone(), vec![*x]));
        }
    }
    let mut i = 1;
    while i < subs.len() {
        for (c, x) in &cyclic {
            if c.is_subset(&subs[i].0) {
                continue;
            }
            let joined = table.join_elements(&subs[i].0, &subs[i].1, &[*x]);
            if !index.contains_key(&joined) {
                let mut gens = subs[i].1.clone();
                gens.push(*x);
                index.insert(joined.clone(), subs.len());
                subs.push((joined, gens));
            }
        }
        i += 1;
    }
    let mut out: Vec<Subgroup> = subs
        .into_iter()
        .map(|(b, gens)| {
            let h = g
                .derive(gens.iter().map(|&x| table.perm(x)).collect())
                .expect("members");
            Subgroup::from_group_and_bits(g.clone(), h, Arc::new(b))
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Obliquity cores.
///
/// Unstarred: `Ob_G(H) = H ∩ ⋂{K ⊴ G : K ≰ H}`. Starred:
/// `Ob*_G(H) = H ∩ ⋂{K ≤ G : H ≤ N_G(K), K ≰ H}`.
pub fn obliquity(g: &FiniteGroup, h: &Subgroup, starred: bool) -> Result<Subgroup> {
    let h = h.reambient(g);
    if !h.generators().iter().all(|x| g.contains(x)) {
        return Err(Error::NotAMember);
    }
    let table = g.element_table()?;
    let hb = h.bits()?;
    let mut acc = (*hb).clone();
    if starred {
        for k in all_subgroups(g, g.caps().subgroups)? {
            let kb = k.bits()?;
            if !kb.is_subset(&hb) && k.is_normalized_by(h.generators()) {
                acc.intersect_with(&kb);
            }
        }
    } else {
        let lat = normal_subgroups(g)?;
        for i in 0..lat.len() {
            if !lat.bits(i).is_subset(&hb) {
                acc.intersect_with(lat.bits(i));
            }
        }
    }
    Ok(Subgroup::from_bits(g, &table, acc))
}
