//! Commutators, series and coarse structural classification.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::group::FiniteGroup;
use crate::lattice::normal_subgroups;
use crate::perm::Permutation;
use crate::subgroup::Subgroup;

/// Nonabelian simple groups are identified by order alone below this bound;
/// at and above it two simple groups can share an order.
pub const SIMPLE_ORDER_AMBIGUITY: u128 = 20160;

/// `[A, B]`: the normal closure in `<A, B>` of the commutators of generators.
pub fn commutator_subgroup(a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
    a.check_same_ambient(b)?;
    let mut conj: Vec<Permutation> = a.generators().to_vec();
    conj.extend(b.generators().iter().cloned());
    let seeds: Vec<Permutation> = a
        .generators()
        .iter()
        .flat_map(|x| b.generators().iter().map(move |y| x.commutator(y)))
        .filter(|c| !c.is_identity())
        .collect();
    Ok(closure_under_conjugation(a.ambient(), seeds, &conj))
}

/// Subgroup generated by `seeds` and all their conjugates under `<conj>`.
pub(crate) fn closure_under_conjugation(
    ambient: &FiniteGroup,
    seeds: Vec<Permutation>,
    conj: &[Permutation],
) -> Subgroup {
    let mut gens = seeds;
    let mut group = ambient.derive(gens.clone()).expect("members");
    let mut i = 0;
    while i < gens.len() {
        let x = gens[i].clone();
        i += 1;
        for h in conj {
            let c = x.conjugate_by(h);
            if !group.contains(&c) {
                gens.push(c);
                group = ambient.derive(gens.clone()).expect("members");
            }
        }
    }
    ambient.subgroup_unchecked(group.generators().to_vec())
}

pub fn derived_subgroup(g: &FiniteGroup) -> FiniteGroup {
    let w = g.whole();
    commutator_subgroup(&w, &w).expect("same ambient").group().clone()
}

/// `G = G^(0) > G^(1) > ...` until it stabilizes (the last entry repeats no term).
pub fn derived_series(g: &FiniteGroup) -> Vec<FiniteGroup> {
    let mut series = vec![g.clone()];
    loop {
        let last = series.last().expect("nonempty");
        let next = derived_subgroup(last);
        if next.order() == last.order() {
            return series;
        }
        series.push(next);
    }
}

/// `G = γ_1 > γ_2 = [G,G] > γ_3 = [γ_2, G] > ...` until it stabilizes.
pub fn lower_central_series(g: &FiniteGroup) -> Vec<Subgroup> {
    let whole = g.whole();
    let mut series = vec![whole.clone()];
    loop {
        let last = series.last().expect("nonempty");
        let next = commutator_subgroup(last, &whole).expect("same ambient");
        if next.order() == last.order() {
            return series;
        }
        series.push(next);
    }
}

pub fn is_perfect(g: &FiniteGroup) -> bool {
    derived_subgroup(g).order() == g.order()
}

pub fn is_soluble(g: &FiniteGroup) -> bool {
    derived_series(g).last().expect("nonempty").is_trivial()
}

pub fn is_nilpotent(g: &FiniteGroup) -> bool {
    lower_central_series(g).last().expect("nonempty").is_trivial()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum CharSimple {
    NotCharSimple,
    /// `C_p^k`
    ElemAbelian { p: u64, k: u32 },
    /// `T^k` with `T` nonabelian simple of the given order; `ambiguous` when
    /// the order alone does not determine `T`.
    SimplePower {
        simple_order: u128,
        k: u32,
        ambiguous: bool,
    },
}

impl std::fmt::Display for CharSimple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CharSimple::NotCharSimple => write!(f, "not characteristically simple"),
            CharSimple::ElemAbelian { p, k } => write!(f, "C{p}^{k}"),
            CharSimple::SimplePower {
                simple_order,
                k,
                ambiguous,
            } => {
                write!(f, "T^{k} with |T| = {simple_order}")?;
                if *ambiguous {
                    write!(f, " (T not determined by its order)")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureProfile {
    pub order: u128,
    pub perfect: bool,
    pub soluble: bool,
    pub nilpotent: bool,
    pub char_simple: CharSimple,
}

pub fn structure_profile(g: &FiniteGroup) -> Result<StructureProfile> {
    let perfect = is_perfect(g);
    let soluble = !perfect && is_soluble(g) || g.is_trivial();
    Ok(StructureProfile {
        order: g.order(),
        perfect,
        soluble,
        nilpotent: soluble && is_nilpotent(g),
        char_simple: classify_char_simple(g, perfect)?,
    })
}

/// Classifies `g` as characteristically simple or not.
pub fn char_simple_classification(g: &FiniteGroup) -> Result<CharSimple> {
    classify_char_simple(g, is_perfect(g))
}

fn classify_char_simple(g: &FiniteGroup, perfect: bool) -> Result<CharSimple> {
    if g.is_trivial() {
        return Ok(CharSimple::NotCharSimple);
    }
    if g.is_abelian() {
        return Ok(match prime_power(g.order()) {
            Some((p, k)) if g.generators().iter().all(|x| x.order() == 1 || x.order() == p) => {
                CharSimple::ElemAbelian { p, k }
            }
            _ => CharSimple::NotCharSimple,
        });
    }
    if !perfect {
        return Ok(CharSimple::NotCharSimple);
    }
    // A nonabelian group is characteristically simple iff its minimal normal
    // subgroups are simple of a common order and together generate it.
    let lattice = normal_subgroups(g)?;
    let minimal = lattice.minimal_normal();
    let s = lattice.members()[minimal[0]].order();
    if minimal.iter().any(|&i| lattice.members()[i].order() != s) {
        return Ok(CharSimple::NotCharSimple);
    }
    for &i in &minimal {
        if normal_subgroups(lattice.members()[i].group())?.len() != 2 {
            return Ok(CharSimple::NotCharSimple);
        }
    }
    let mut k = 0u32;
    let mut acc = 1u128;
    while acc < g.order() {
        acc *= s;
        k += 1;
    }
    let join = Subgroup::join_all(g, minimal.iter().map(|&i| &lattice.members()[i]));
    if acc != g.order() || join.order() != g.order() {
        return Ok(CharSimple::NotCharSimple);
    }
    Ok(CharSimple::SimplePower {
        simple_order: s,
        k,
        ambiguous: s >= SIMPLE_ORDER_AMBIGUITY,
    })
}

/// `n = p^k` with `p` prime and `k ≥ 1`.
pub fn prime_power(n: u128) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = smallest_prime_factor(n);
    let mut m = n;
    let mut k = 0;
    while m % p as u128 == 0 {
        m /= p as u128;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

pub fn smallest_prime_factor(n: u128) -> u64 {
    let mut d = 2u128;
    while d * d <= n {
        if n % d == 0 {
            return d as u64;
        }
        d += 1;
    }
    n as u64
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && smallest_prime_factor(n as u128) == n
}

pub fn is_p_power(n: u128, p: u64) -> bool {
    let mut m = n;
    while m > 1 && m % p as u128 == 0 {
        m /= p as u128;
    }
    m == 1
}

/// Prime factors of `n`, ascending, without multiplicity.
pub fn prime_factors(n: u128) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = n;
    let mut d = 2u128;
    while d * d <= m {
        if m % d == 0 {
            out.push(d as u64);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m as u64);
    }
    out
}
