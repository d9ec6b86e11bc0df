//! Normal subgroups of a wreath product computed from its base and top.
//!
//! A normal subgroup `N` of `W = B ⋊ T` is determined by `M = N ∩ B`, a
//! `W`-invariant subgroup of the base, by the normal subgroup `R = NB/B` of
//! `T`, and by a choice of lifts `r·b` of generators of `R`, taken modulo `M`.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;

use crate::construct::WreathProduct;
use crate::error::Result;
use crate::group::ElementTable;
use crate::lattice::normal_subgroups;
use crate::perm::Permutation;
use crate::subgroup::Subgroup;

/// `W`-invariant subgroups of the base, as subgroups of `W`.
pub fn invariant_base_subgroups(w: &WreathProduct) -> Result<Vec<Subgroup>> {
    let g = w.group();
    let base = w.base();
    let tb = base.group().element_table()?;
    let mut scratch = tb.scratch();
    let mut seen = tb.empty_set();
    let mut class_closures: Vec<FixedBitSet> = Vec::new();
    for x in 0..tb.len() {
        if seen.contains(x) {
            continue;
        }
        let mut class = vec![x];
        seen.insert(x);
        let mut head = 0;
        while head < class.len() {
            let y = class[head];
            head += 1;
            for h in g.generators() {
                let z = tb.conj_perm_with(y, h.images(), &mut scratch);
                if !seen.put(z) {
                    class.push(z);
                }
            }
        }
        let c = tb.closure(&class);
        if !class_closures.contains(&c) {
            class_closures.push(c);
        }
    }
    // every invariant subgroup is a join of class closures
    let mut found: Vec<FixedBitSet> = class_closures.clone();
    let mut index: HashSet<FixedBitSet> = found.iter().cloned().collect();
    let mut head = 0;
    while head < found.len() {
        let a = found[head].clone();
        head += 1;
        for c in &class_closures {
            if c.is_subset(&a) {
                continue;
            }
            let mut gens = tb.reduce_generators(&a);
            gens.extend(tb.reduce_generators(c));
            let j = tb.closure(&gens);
            if index.insert(j.clone()) {
                found.push(j);
            }
        }
    }
    Ok(found
        .into_iter()
        .map(|bits| {
            let gens = tb.reduce_generators(&bits).into_iter().map(|i| tb.perm(i)).collect();
            g.subgroup_unchecked(gens)
        })
        .collect())
}

/// All normal subgroups of `W`, sorted by canonical key.
pub fn structured_normal_subgroups(w: &WreathProduct) -> Result<Vec<Subgroup>> {
    let g = w.group();
    let tw = g.element_table()?;
    let base_bits = bits_in(&tw, w.base().generators());
    let top_lattice = normal_subgroups(w.top())?;
    let mut found: Vec<FixedBitSet> = Vec::new();
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    for m in invariant_base_subgroups(w)? {
        let m_bits = bits_in(&tw, m.generators());
        let m_order = m.order() as usize;
        let reps = coset_representatives(&tw, &base_bits, &m_bits);
        for r in top_lattice.members() {
            let lifts: Vec<usize> = r
                .generators()
                .iter()
                .map(|t| Ok(tw.index_of(&w.lift_top(t)?).expect("lift lies in W")))
                .collect::<Result<_>>()?;
            let target = m_order * r.order() as usize;
            let mut search = LiftSearch {
                table: &tw,
                ambient_gens: g.generators(),
                base: &base_bits,
                m_order,
                target,
                lifts: &lifts,
                reps: &reps,
                out: Vec::new(),
            };
            let m_gens = tw.reduce_generators(&m_bits);
            search.run(0, m_bits.clone(), m_gens);
            for n in search.out {
                if seen.insert(n.clone()) {
                    found.push(n);
                }
            }
        }
    }
    let mut subs: Vec<Subgroup> = found
        .into_iter()
        .map(|bits| Subgroup::from_bits(g, &tw, bits))
        .collect();
    subs.sort_by(|a, b| a.key().cmp(b.key()));
    Ok(subs)
}

fn bits_in(table: &ElementTable, gens: &[Permutation]) -> FixedBitSet {
    let idx = table.indices_of(gens).expect("generators lie in the group");
    table.closure(&idx)
}

/// One representative of each coset `bM` of `M` in `B`.
fn coset_representatives(table: &ElementTable, base: &FixedBitSet, m: &FixedBitSet) -> Vec<usize> {
    let m_elems: Vec<usize> = m.ones().collect();
    let mut covered = table.empty_set();
    let mut reps = Vec::new();
    for b in base.ones() {
        if covered.contains(b) {
            continue;
        }
        reps.push(b);
        for &x in &m_elems {
            covered.insert(table.mul(b, x));
        }
    }
    reps
}

struct LiftSearch<'a> {
    table: &'a ElementTable,
    ambient_gens: &'a [Permutation],
    base: &'a FixedBitSet,
    m_order: usize,
    target: usize,
    lifts: &'a [usize],
    reps: &'a [usize],
    out: Vec<FixedBitSet>,
}

impl LiftSearch<'_> {
    fn run(&mut self, j: usize, current: FixedBitSet, gens: Vec<usize>) {
        if j == self.lifts.len() {
            let normal = self
                .ambient_gens
                .iter()
                .all(|h| self.table.conjugate_set(&current, h.images()) == current);
            if current.count_ones(..) == self.target && normal && !self.out.contains(&current) {
                self.out.push(current);
            }
            return;
        }
        for &b in self.reps {
            let x = self.table.mul(self.lifts[j], b);
            let next = self.table.join_elements(&current, &gens, &[x]);
            let count = next.count_ones(..);
            // the partial subgroup must still meet the base exactly in M
            if count > self.target || next.intersection(self.base).count() != self.m_order {
                continue;
            }
            let mut next_gens = gens.clone();
            next_gens.push(x);
            self.run(j + 1, next, next_gens);
        }
    }
}
