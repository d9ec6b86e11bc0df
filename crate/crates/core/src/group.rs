//! Finite permutation groups given by generators.

use std::fmt;
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::schreier::StabChain;
use crate::subgroup::Subgroup;

/// Size limits past which expensive computations refuse to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest subgroup whose canonical key lists element ranks.
    pub enumeration: u128,
    /// Largest group whose elements are tabulated for lattice work.
    pub lattice: u128,
    /// Largest group for exhaustive subgroup enumeration.
    pub subgroups: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration: 100_000,
            lattice: 1_000_000,
            subgroups: 10_000,
        }
    }
}

/// Cheaply clonable handle to an immutable permutation group.
#[derive(Clone)]
pub struct FiniteGroup(Arc<GroupData>);

pub(crate) struct GroupData {
    degree: usize,
    gens: Vec<Permutation>,
    chain: StabChain,
    order: u128,
    caps: Caps,
    table: OnceLock<Arc<ElementTable>>,
    pub(crate) normals: OnceLock<Arc<Vec<(FiniteGroup, Arc<FixedBitSet>)>>>,
}

impl FiniteGroup {
    pub fn new(degree: usize, gens: Vec<Permutation>) -> Result<Self> {
        Self::with_caps(degree, gens, Caps::default())
    }

    pub fn with_caps(degree: usize, gens: Vec<Permutation>, caps: Caps) -> Result<Self> {
        if degree == 0 && !gens.is_empty() {
            return Err(Error::InvalidParameters(
                "degree 0 with nonempty generators".into(),
            ));
        }
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::InconsistentDegree {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let chain = StabChain::new(degree, &gens);
        Ok(Self::from_chain(degree, gens, chain, caps)?)
    }

    pub(crate) fn from_chain(
        degree: usize,
        gens: Vec<Permutation>,
        chain: StabChain,
        caps: Caps,
    ) -> Result<Self> {
        let order = chain.order()?;
        Ok(FiniteGroup(Arc::new(GroupData {
            degree,
            gens,
            chain,
            order,
            caps,
            table: OnceLock::new(),
            normals: OnceLock::new(),
        })))
    }

    pub fn trivial(degree: usize) -> Self {
        Self::new(degree, Vec::new()).expect("trivial group")
    }

    /// Same degree and caps, new generators.
    pub fn derive(&self, gens: Vec<Permutation>) -> Result<Self> {
        Self::with_caps(self.degree(), gens, self.caps())
    }

    /// A new group in a possibly different degree that inherits this group's caps.
    pub fn derive_in(&self, degree: usize, gens: Vec<Permutation>) -> Result<Self> {
        Self::with_caps(degree, gens, self.caps())
    }

    /// The same group with different caps (fresh caches).
    pub fn with_new_caps(&self, caps: Caps) -> Self {
        Self::from_chain(self.degree(), self.0.gens.clone(), self.0.chain.clone(), caps)
            .expect("order already known")
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    #[inline]
    pub fn generators(&self) -> &[Permutation] {
        &self.0.gens
    }

    #[inline]
    pub fn order(&self) -> u128 {
        self.0.order
    }

    #[inline]
    pub fn caps(&self) -> Caps {
        self.0.caps
    }

    pub(crate) fn chain(&self) -> &StabChain {
        &self.0.chain
    }

    pub(crate) fn data(&self) -> &GroupData {
        &self.0
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.0.chain.contains(g)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .enumerate()
            .all(|(i, a)| gens[i + 1..].iter().all(|b| &(a * b) == &(b * a)))
    }

    pub fn ptr_eq(&self, other: &FiniteGroup) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Equal as sets of permutations.
    pub fn same_group(&self, other: &FiniteGroup) -> bool {
        self.ptr_eq(other)
            || (self.degree() == other.degree()
                && self.order() == other.order()
                && other.generators().iter().all(|g| self.contains(g)))
    }

    /// Subgroup containment, as sets of permutations of the same degree.
    pub fn is_subgroup_of(&self, other: &FiniteGroup) -> bool {
        self.degree() == other.degree()
            && other.order() % self.order() == 0
            && self.generators().iter().all(|g| other.contains(g))
    }

    /// The tabulated elements. Fails when the order exceeds the lattice cap.
    pub fn element_table(&self) -> Result<Arc<ElementTable>> {
        if let Some(t) = self.0.table.get() {
            return Ok(t.clone());
        }
        let cap = self.caps().lattice.max(self.caps().enumeration);
        if self.order() > cap {
            return Err(Error::CapExceeded {
                what: "element table",
                order: self.order(),
                cap,
            });
        }
        let table = Arc::new(ElementTable::build(self));
        Ok(self.0.table.get_or_init(|| table).clone())
    }

    /// Every element, in the fixed rank order of the stabilizer chain.
    pub fn elements(&self) -> Result<Vec<Permutation>> {
        let t = self.element_table()?;
        Ok((0..t.len()).map(|i| t.perm(i)).collect())
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_group(self.clone(), self.clone())
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        let t = self.derive(Vec::new()).expect("trivial");
        Subgroup::from_group(self.clone(), t)
    }

    pub fn subgroup(&self, gens: Vec<Permutation>) -> Result<Subgroup> {
        Subgroup::new(self, gens)
    }

    /// Subgroup generated by elements already known to lie in this group.
    pub(crate) fn subgroup_unchecked(&self, gens: Vec<Permutation>) -> Subgroup {
        let h = self.derive(gens).expect("degrees match");
        Subgroup::from_group(self.clone(), h)
    }

    /// Orbits of the group on its points, each sorted, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        orbits_of(self.degree(), self.generators())
    }
}

pub(crate) fn orbits_of(degree: usize, gens: &[Permutation]) -> Vec<Vec<u32>> {
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    for start in 0..degree {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start as u32];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for g in gens {
                let y = g.apply(x);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    orbit.push(y);
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("degree", &self.degree())
            .field("order", &self.order())
            .field("generators", &self.generators())
            .finish()
    }
}

/// All elements of a group, stored flat and indexed by stabilizer-chain rank.
/// Index 0 is the identity.
pub struct ElementTable {
    degree: usize,
    len: usize,
    data: Vec<u32>,
    chain: StabChain,
    weights: Vec<u128>,
    /// `gen_right[j][x]` = index of `x * g_j`
    gen_right: Vec<Vec<u32>>,
    gen_index: Vec<usize>,
}

impl ElementTable {
    fn build(g: &FiniteGroup) -> Self {
        let chain = g.chain().clone();
        let data = chain.enumerate_flat();
        let degree = g.degree();
        let len = g.order() as usize;
        let weights = chain.weights();
        let mut table = ElementTable {
            degree,
            len,
            data,
            chain,
            weights,
            gen_right: Vec::new(),
            gen_index: Vec::new(),
        };
        let mut scratch = vec![0u32; degree];
        let gen_index: Vec<usize> = g
            .generators()
            .iter()
            .map(|p| table.index_of_with(p.images(), &mut scratch).expect("generator"))
            .collect();
        let gen_right = g
            .generators()
            .iter()
            .map(|p| {
                (0..len)
                    .map(|x| table.mul_perm_with(x, p.images(), &mut scratch) as u32)
                    .collect()
            })
            .collect();
        table.gen_right = gen_right;
        table.gen_index = gen_index;
        table
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn element(&self, i: usize) -> &[u32] {
        &self.data[i * self.degree..(i + 1) * self.degree]
    }

    pub fn perm(&self, i: usize) -> Permutation {
        Permutation::from_images_unchecked(self.element(i).to_vec())
    }

    pub(crate) fn scratch(&self) -> Vec<u32> {
        vec![0; self.degree]
    }

    pub(crate) fn index_of_with(&self, g: &[u32], scratch: &mut [u32]) -> Option<usize> {
        if g.len() != self.degree {
            return None;
        }
        scratch.copy_from_slice(g);
        self.chain
            .rank_in_place(scratch, &self.weights)
            .map(|r| r as usize)
    }

    pub fn index_of(&self, g: &Permutation) -> Option<usize> {
        self.index_of_with(g.images(), &mut self.scratch())
    }

    /// Index of `x * p` where `p` is a member given by its images.
    pub(crate) fn mul_perm_with(&self, x: usize, p: &[u32], scratch: &mut [u32]) -> usize {
        for (s, &y) in scratch.iter_mut().zip(self.element(x)) {
            *s = p[y as usize];
        }
        self.chain
            .rank_in_place(scratch, &self.weights)
            .expect("product of members") as usize
    }

    pub(crate) fn mul_with(&self, x: usize, y: usize, scratch: &mut [u32]) -> usize {
        let d = self.degree;
        let (px, py) = (&self.data[x * d..(x + 1) * d], &self.data[y * d..(y + 1) * d]);
        for (s, &a) in scratch.iter_mut().zip(px) {
            *s = py[a as usize];
        }
        self.chain
            .rank_in_place(scratch, &self.weights)
            .expect("product of members") as usize
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul_with(x, y, &mut self.scratch())
    }

    /// Index of `g^-1 x g`, with `g` given by its images.
    pub(crate) fn conj_perm_with(&self, x: usize, g: &[u32], scratch: &mut [u32]) -> usize {
        for (i, &a) in self.element(x).iter().enumerate() {
            scratch[g[i] as usize] = g[a as usize];
        }
        self.chain
            .rank_in_place(scratch, &self.weights)
            .expect("conjugate of member") as usize
    }

    #[inline]
    pub(crate) fn gen_right(&self, j: usize, x: usize) -> usize {
        self.gen_right[j][x] as usize
    }

    pub(crate) fn num_gens(&self) -> usize {
        self.gen_right.len()
    }

    pub fn empty_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.len)
    }

    pub fn indices_of(&self, perms: &[Permutation]) -> Option<Vec<usize>> {
        let mut scratch = self.scratch();
        perms
            .iter()
            .map(|p| self.index_of_with(p.images(), &mut scratch))
            .collect()
    }

    /// Smallest set containing `start` and closed under right multiplication by
    /// `gens` (element indices). With `start = {1}` this is `<gens>`; with `start`
    /// a subgroup it is the subgroup generated by both.
    pub fn right_closure(&self, start: &FixedBitSet, gens: &[usize]) -> FixedBitSet {
        let mut bits = start.clone();
        let mut queue: Vec<usize> = bits.ones().collect();
        let mut scratch = self.scratch();
        let gen_perms: Vec<&[u32]> = gens.iter().map(|&g| self.element(g)).collect();
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for p in &gen_perms {
                let y = self.mul_perm_with(x, p, &mut scratch);
                if !bits.put(y) {
                    queue.push(y);
                }
            }
        }
        bits
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> FixedBitSet {
        let mut start = self.empty_set();
        start.insert(0);
        self.right_closure(&start, gens)
    }

    /// Subgroup generated by the subgroup `h` and extra elements.
    pub fn join_elements(&self, h: &FixedBitSet, h_gens: &[usize], extra: &[usize]) -> FixedBitSet {
        if extra.iter().all(|&x| h.contains(x)) {
            return h.clone();
        }
        let mut gens = h_gens.to_vec();
        gens.extend_from_slice(extra);
        self.right_closure(h, &gens)
    }

    /// Greedy generating set of a subgroup: walk its elements in index order,
    /// keeping each one not yet generated.
    pub fn reduce_generators(&self, h: &FixedBitSet) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = self.empty_set();
        current.insert(0);
        let total = h.count_ones(..);
        for x in h.ones() {
            if current.count_ones(..) == total {
                break;
            }
            if !current.contains(x) {
                gens.push(x);
                current = self.right_closure(&current, &gens);
            }
        }
        gens
    }

    /// Normal closure of `gens` under conjugation by the ambient generators.
    pub fn normal_closure(&self, gens: &[usize], ambient_gens: &[Permutation]) -> FixedBitSet {
        let mut gens = gens.to_vec();
        let mut bits = self.closure(&gens);
        let mut scratch = self.scratch();
        let mut i = 0;
        while i < gens.len() {
            let x = gens[i];
            i += 1;
            for g in ambient_gens {
                let c = self.conj_perm_with(x, g.images(), &mut scratch);
                if !bits.contains(c) {
                    gens.push(c);
                    bits = self.right_closure(&bits, &gens);
                }
            }
        }
        bits
    }

    /// Conjugate of a subset by the element with images `g`.
    pub fn conjugate_set(&self, h: &FixedBitSet, g: &[u32]) -> FixedBitSet {
        let mut out = self.empty_set();
        let mut scratch = self.scratch();
        for x in h.ones() {
            out.insert(self.conj_perm_with(x, g, &mut scratch));
        }
        out
    }

    /// Product set `A * B` of two subgroups, one of which normalizes the other.
    pub fn product(&self, a: &FixedBitSet, b_gens: &[usize]) -> FixedBitSet {
        self.right_closure(a, b_gens)
    }

    /// Conjugacy classes of the whole group, each sorted, in order of least member.
    pub fn conjugacy_classes(&self, ambient_gens: &[Permutation]) -> Vec<Vec<usize>> {
        let mut seen = self.empty_set();
        let mut scratch = self.scratch();
        let mut classes = Vec::new();
        for start in 0..self.len {
            if seen.put(start) {
                continue;
            }
            let mut class = vec![start];
            let mut head = 0;
            while head < class.len() {
                let x = class[head];
                head += 1;
                for g in ambient_gens {
                    let y = self.conj_perm_with(x, g.images(), &mut scratch);
                    if !seen.put(y) {
                        class.push(y);
                    }
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a5() -> FiniteGroup {
        FiniteGroup::new(
            5,
            vec![
                Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap(),
                Permutation::from_cycles(5, &[&[0, 1, 2]]).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn empty_generators_give_trivial_group() {
        let g = FiniteGroup::new(3, vec![]).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.contains(&Permutation::identity(3)));
    }

    #[test]
    fn degree_errors() {
        let p = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        assert!(matches!(
            FiniteGroup::new(4, vec![p.clone()]),
            Err(Error::InconsistentDegree { .. })
        ));
        assert!(FiniteGroup::new(0, vec![p]).is_err());
    }

    #[test]
    fn table_indices_follow_ranks() {
        let g = a5();
        let t = g.element_table().unwrap();
        assert_eq!(t.len(), 60);
        for i in 0..t.len() {
            assert_eq!(t.index_of(&t.perm(i)), Some(i));
        }
        assert!(Permutation::from_images(t.element(0).to_vec()).unwrap().is_identity());
        for i in 0..t.len() {
            let inv = t.index_of(&t.perm(i).inverse()).unwrap();
            assert_eq!(t.mul(i, inv), 0);
        }
    }

    #[test]
    fn classes_of_a5() {
        let g = a5();
        let t = g.element_table().unwrap();
        let mut sizes: Vec<usize> = t
            .conjugacy_classes(g.generators())
            .iter()
            .map(|c| c.len())
            .collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 12, 12, 15, 20]);
    }

    #[test]
    fn generator_reduction_regenerates() {
        let g = a5();
        let t = g.element_table().unwrap();
        let mut all = t.empty_set();
        all.insert_range(..);
        let gens = t.reduce_generators(&all);
        assert_eq!(t.closure(&gens).count_ones(..), 60);
        assert!(gens.len() <= 3);
    }
}
