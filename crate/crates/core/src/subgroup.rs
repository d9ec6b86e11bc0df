//! Subgroups of an ambient group, with a canonical identity key.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::{ElementTable, FiniteGroup};
use crate::perm::Permutation;
use crate::schreier::StabChain;

/// Canonical identity of a subgroup inside a fixed ambient group.
///
/// Small subgroups are keyed by the sorted ranks of their elements in the
/// ambient enumeration; larger ones by a reduced, sorted generating set.
/// Keys of distinct subgroups of one ambient group always differ; keys of
/// equal subgroups agree whenever the rank form is used.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubgroupKey {
    pub order: u128,
    pub repr: KeyRepr,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KeyRepr {
    Ranks(Vec<u128>),
    Generators(Vec<Vec<u32>>),
}

#[derive(Clone)]
pub struct Subgroup(Arc<SubData>);

struct SubData {
    ambient: FiniteGroup,
    group: FiniteGroup,
    bits: OnceLock<Arc<FixedBitSet>>,
    key: OnceLock<SubgroupKey>,
}

impl Subgroup {
    /// The subgroup of `ambient` generated by `gens`; each must be a member.
    pub fn new(ambient: &FiniteGroup, gens: Vec<Permutation>) -> Result<Self> {
        for g in &gens {
            if g.degree() != ambient.degree() {
                return Err(Error::InconsistentDegree {
                    expected: ambient.degree(),
                    found: g.degree(),
                });
            }
            if !ambient.contains(g) {
                return Err(Error::NotAMember);
            }
        }
        Ok(ambient.subgroup_unchecked(gens))
    }

    pub(crate) fn from_group(ambient: FiniteGroup, group: FiniteGroup) -> Self {
        Subgroup(Arc::new(SubData {
            ambient,
            group,
            bits: OnceLock::new(),
            key: OnceLock::new(),
        }))
    }

    pub(crate) fn from_group_and_bits(
        ambient: FiniteGroup,
        group: FiniteGroup,
        bits: Arc<FixedBitSet>,
    ) -> Self {
        let s = Self::from_group(ambient, group);
        let _ = s.0.bits.set(bits);
        s
    }

    /// Builds a handle from an element subset known to be a subgroup.
    pub(crate) fn from_bits(ambient: &FiniteGroup, table: &ElementTable, bits: FixedBitSet) -> Self {
        let gens = table
            .reduce_generators(&bits)
            .into_iter()
            .map(|i| table.perm(i))
            .collect();
        let group = ambient.derive(gens).expect("members");
        debug_assert_eq!(group.order(), bits.count_ones(..) as u128);
        Self::from_group_and_bits(ambient.clone(), group, Arc::new(bits))
    }

    pub fn ambient(&self) -> &FiniteGroup {
        &self.0.ambient
    }

    /// The subgroup as a group in its own right (same degree).
    pub fn group(&self) -> &FiniteGroup {
        &self.0.group
    }

    pub fn order(&self) -> u128 {
        self.0.group.order()
    }

    pub fn index(&self) -> u128 {
        self.ambient().order() / self.order()
    }

    pub fn generators(&self) -> &[Permutation] {
        self.0.group.generators()
    }

    pub fn degree(&self) -> usize {
        self.0.group.degree()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.0.group.contains(g)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.ambient().order()
    }

    /// Element set as a bitset over the ambient element table.
    pub fn bits(&self) -> Result<Arc<FixedBitSet>> {
        if let Some(b) = self.0.bits.get() {
            return Ok(b.clone());
        }
        let table = self.ambient().element_table()?;
        let bits = Arc::new(bits_of_group(&table, self.group()));
        Ok(self.0.bits.get_or_init(|| bits).clone())
    }

    pub fn key(&self) -> &SubgroupKey {
        self.0.key.get_or_init(|| self.compute_key())
    }

    fn compute_key(&self) -> SubgroupKey {
        let order = self.order();
        let caps = self.ambient().caps();
        if let Some(b) = self.0.bits.get() {
            return SubgroupKey {
                order,
                repr: KeyRepr::Ranks(b.ones().map(|i| i as u128).collect()),
            };
        }
        if order <= caps.enumeration {
            if let Ok(b) = self.bits() {
                return SubgroupKey {
                    order,
                    repr: KeyRepr::Ranks(b.ones().map(|i| i as u128).collect()),
                };
            }
            let mut ranker = self.ambient().chain().ranker();
            let flat = self.group().chain().enumerate_flat();
            let d = self.degree().max(1);
            let mut ranks: Vec<u128> = flat
                .chunks(d)
                .map(|g| ranker.rank(g).expect("member"))
                .collect();
            ranks.sort_unstable();
            return SubgroupKey {
                order,
                repr: KeyRepr::Ranks(ranks),
            };
        }
        let mut gens: Vec<Vec<u32>> = self
            .generators()
            .iter()
            .filter(|g| !g.is_identity())
            .map(|g| g.images().to_vec())
            .collect();
        gens.sort();
        gens.dedup();
        let mut kept: Vec<Permutation> = Vec::new();
        let mut chain = StabChain::new(self.degree(), &kept);
        for g in gens {
            let p = Permutation::from_images_unchecked(g);
            if !chain.contains(&p) {
                kept.push(p);
                chain = StabChain::new(self.degree(), &kept);
            }
        }
        let mut reduced: Vec<Vec<u32>> = kept.into_iter().map(|p| p.into_images()).collect();
        reduced.sort();
        SubgroupKey {
            order,
            repr: KeyRepr::Generators(reduced),
        }
    }

    pub(crate) fn check_same_ambient(&self, other: &Subgroup) -> Result<()> {
        if self.ambient().same_group(other.ambient()) {
            Ok(())
        } else {
            Err(Error::MismatchedAmbient)
        }
    }

    /// `self ≤ other` as sets.
    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.group().is_subgroup_of(other.group())
    }

    pub fn same_as(&self, other: &Subgroup) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }

    /// Normal in the ambient group.
    pub fn is_normal(&self) -> bool {
        self.is_normalized_by(self.ambient().generators())
    }

    pub fn is_normalized_by(&self, gens: &[Permutation]) -> bool {
        gens.iter().all(|h| {
            self.generators()
                .iter()
                .all(|g| self.contains(&g.conjugate_by(h)))
        })
    }

    /// Normal in the group generated by `other`.
    pub fn is_normal_in(&self, other: &Subgroup) -> bool {
        self.is_subgroup_of(other) && self.is_normalized_by(other.generators())
    }

    pub fn require_normal(&self) -> Result<()> {
        if self.is_normal() {
            Ok(())
        } else {
            Err(Error::NotNormal(format!(
                "subgroup of order {} is not normal in the group of order {}",
                self.order(),
                self.ambient().order()
            )))
        }
    }

    pub fn join(&self, other: &Subgroup) -> Result<Subgroup> {
        self.check_same_ambient(other)?;
        if other.is_subgroup_of(self) {
            return Ok(self.clone());
        }
        if self.is_subgroup_of(other) {
            return Ok(other.reambient(self.ambient()));
        }
        let mut gens = self.generators().to_vec();
        gens.extend(other.generators().iter().cloned());
        Ok(self.ambient().subgroup_unchecked(gens))
    }

    pub fn join_all<'a>(ambient: &FiniteGroup, subs: impl IntoIterator<Item = &'a Subgroup>) -> Subgroup {
        let gens = subs
            .into_iter()
            .flat_map(|s| s.generators().iter().cloned())
            .collect();
        ambient.subgroup_unchecked(gens)
    }

    pub fn intersection(&self, other: &Subgroup) -> Result<Subgroup> {
        self.check_same_ambient(other)?;
        if self.is_subgroup_of(other) {
            return Ok(self.clone());
        }
        if other.is_subgroup_of(self) {
            return Ok(other.reambient(self.ambient()));
        }
        let table = self.ambient().element_table()?;
        let mut bits = (*self.bits()?).clone();
        bits.intersect_with(&*other.bits()?);
        Ok(Subgroup::from_bits(self.ambient(), &table, bits))
    }

    /// `h^-1 H h`
    pub fn conjugate(&self, h: &Permutation) -> Subgroup {
        let gens = self.generators().iter().map(|g| g.conjugate_by(h)).collect();
        self.ambient().subgroup_unchecked(gens)
    }

    /// Normal closure in the ambient group.
    pub fn normal_closure(&self) -> Subgroup {
        let amb = self.ambient();
        let mut gens: Vec<Permutation> = self.generators().to_vec();
        let mut group = amb.derive(gens.clone()).expect("members");
        let mut i = 0;
        while i < gens.len() {
            let x = gens[i].clone();
            i += 1;
            for h in amb.generators() {
                let c = x.conjugate_by(h);
                if !group.contains(&c) {
                    gens.push(c);
                    group = amb.derive(gens.clone()).expect("members");
                }
            }
        }
        Subgroup::from_group(amb.clone(), group)
    }

    /// The same subgroup viewed inside another ambient group (which must contain it).
    pub fn reambient(&self, ambient: &FiniteGroup) -> Subgroup {
        if self.ambient().ptr_eq(ambient) {
            return self.clone();
        }
        Subgroup::from_group(ambient.clone(), self.group().clone())
    }

    /// Normalizer in the ambient group.
    pub fn normalizer(&self) -> Result<Subgroup> {
        let amb = self.ambient();
        if self.is_normal() {
            return Ok(amb.whole());
        }
        let table = amb.element_table()?;
        let bits = self.bits()?;
        let mut scratch = table.scratch();
        let mut gens: Vec<usize> = Vec::new();
        let mut found = table.closure(&[]);
        // members of H normalize it; start from them
        let h_idx = table.indices_of(self.generators()).expect("members");
        found = table.join_elements(&found, &gens, &h_idx);
        gens.extend(h_idx);
        for x in 0..table.len() {
            if found.contains(x) {
                continue;
            }
            let g = table.element(x);
            let ok = self.generators().iter().all(|h| {
                let i = table.index_of_with(h.images(), &mut scratch).expect("member");
                bits.contains(table.conj_perm_with(i, g, &mut scratch))
            });
            if ok {
                found = table.join_elements(&found, &gens, &[x]);
                gens.push(x);
            }
        }
        Ok(Subgroup::from_bits(amb, &table, found))
    }

    /// Centralizer in the ambient group.
    pub fn centralizer(&self) -> Result<Subgroup> {
        centralizer_of(self.ambient(), self.generators())
    }

    pub fn describe(&self) -> String {
        let gens: Vec<String> = self.generators().iter().map(|g| g.to_string()).collect();
        format!("order {} generated by [{}]", self.order(), gens.join(", "))
    }
}

/// Elements of the ambient group commuting with every element of `gens`.
pub fn centralizer_of(ambient: &FiniteGroup, gens: &[Permutation]) -> Result<Subgroup> {
    let table = ambient.element_table()?;
    let mut found = table.closure(&[]);
    let mut cgens: Vec<usize> = Vec::new();
    for x in 0..table.len() {
        if found.contains(x) {
            continue;
        }
        let g = table.element(x);
        let ok = gens.iter().all(|h| {
            let h = h.images();
            (0..g.len()).all(|i| h[g[i] as usize] == g[h[i] as usize])
        });
        if ok {
            found = table.join_elements(&found, &cgens, &[x]);
            cgens.push(x);
        }
    }
    Ok(Subgroup::from_bits(ambient, &table, found))
}

pub(crate) fn bits_of_group(table: &ElementTable, group: &FiniteGroup) -> FixedBitSet {
    let mut bits = table.empty_set();
    let d = group.degree().max(1);
    let mut scratch = table.scratch();
    if group.degree() == 0 {
        bits.insert(0);
        return bits;
    }
    for g in group.chain().enumerate_flat().chunks(d) {
        bits.insert(table.index_of_with(g, &mut scratch).expect("member"));
    }
    bits
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.ambient().same_group(other.ambient()) && self.same_as(other)
    }
}

impl Eq for Subgroup {}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order by key; only meaningful within one ambient group.
impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(other.key())
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup({})", self.describe())
    }
}
