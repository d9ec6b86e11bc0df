//! Group actions on finite sets and subprimitivity.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::construct::quotient_by;
use crate::error::{Error, Result};
use crate::group::{orbits_of, ElementTable, FiniteGroup};
use crate::hom::GroupHom;
use crate::lattice::{locate_normal, normal_subgroups};
use crate::perm::Permutation;
use crate::structure::is_soluble;
use crate::subgroup::{centralizer_of, Subgroup};

/// An action of `group` on `{0, .., degree-1}`, given by one permutation per
/// generator and validated as a homomorphism into the symmetric group.
#[derive(Clone, Debug)]
pub struct GroupAction {
    hom: GroupHom,
}

impl GroupAction {
    pub fn new(group: &FiniteGroup, degree: usize, images: Vec<Permutation>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::EmptyDomain);
        }
        let image = group.derive_in(degree, images.clone())?;
        let hom = GroupHom::new(group, &image, images)?;
        Ok(GroupAction { hom })
    }

    /// The action on the group's own points.
    pub fn natural(group: &FiniteGroup) -> Self {
        GroupAction {
            hom: GroupHom::identity(group),
        }
    }

    /// Right regular action on the elements, numbered by table index.
    pub fn regular(group: &FiniteGroup) -> Result<Self> {
        let table = group.element_table()?;
        let images = (0..table.num_gens())
            .map(|j| {
                Permutation::from_images_unchecked(
                    (0..table.len()).map(|x| table.gen_right(j, x) as u32).collect(),
                )
            })
            .collect();
        Self::new(group, table.len(), images)
    }

    pub fn group(&self) -> &FiniteGroup {
        self.hom.source()
    }

    pub fn degree(&self) -> usize {
        self.hom.target().degree()
    }

    pub fn images(&self) -> &[Permutation] {
        self.hom.images()
    }

    /// The permutation group induced on the points.
    pub fn image_group(&self) -> &FiniteGroup {
        self.hom.target()
    }

    pub fn hom(&self) -> &GroupHom {
        &self.hom
    }

    pub fn kernel(&self) -> &Subgroup {
        self.hom.kernel()
    }

    pub fn is_faithful(&self) -> bool {
        self.hom.is_injective()
    }

    /// The permutation by which a group element acts.
    pub fn act(&self, g: &Permutation) -> Result<Permutation> {
        self.hom.apply(g)
    }
}

#[derive(Clone, Debug)]
pub struct ActionProfile {
    pub orbits: Vec<Vec<u32>>,
    pub kernel: Subgroup,
    pub faithful: bool,
    pub transitive: bool,
    pub primitive: bool,
    /// a nontrivial block system, when transitive and imprimitive
    pub blocks: Option<Vec<Vec<u32>>>,
}

pub fn action_profile(a: &GroupAction) -> ActionProfile {
    let orbits = orbits_of(a.degree(), a.images());
    let transitive = orbits.len() == 1;
    let blocks = if transitive {
        (1..a.degree() as u32)
            .map(|b| minimal_block_system(a.degree(), a.images(), b))
            .find(|sys| sys.len() > 1)
    } else {
        None
    };
    ActionProfile {
        kernel: a.kernel().clone(),
        faithful: a.is_faithful(),
        primitive: transitive && blocks.is_none(),
        transitive,
        orbits,
        blocks,
    }
}

/// The finest block system in which `0` and `b` share a block.
pub fn minimal_block_system(degree: usize, gens: &[Permutation], b: u32) -> Vec<Vec<u32>> {
    let mut parent: Vec<u32> = (0..degree as u32).collect();
    fn find(parent: &mut [u32], x: u32) -> u32 {
        let mut r = x;
        while parent[r as usize] != r {
            r = parent[r as usize];
        }
        let mut y = x;
        while parent[y as usize] != r {
            let next = parent[y as usize];
            parent[y as usize] = r;
            y = next;
        }
        r
    }
    let mut queue = vec![(0u32, b)];
    let (r0, rb) = (find(&mut parent, 0), find(&mut parent, b));
    parent[r0.max(rb) as usize] = r0.min(rb);
    while let Some((x, y)) = queue.pop() {
        for g in gens {
            let (gx, gy) = (g.apply(x), g.apply(y));
            let (u, v) = (find(&mut parent, gx), find(&mut parent, gy));
            if u != v {
                parent[u.max(v) as usize] = u.min(v);
                queue.push((gx, gy));
            }
        }
    }
    let mut classes: HashMap<u32, Vec<u32>> = HashMap::new();
    for x in 0..degree as u32 {
        let r = find(&mut parent, x);
        classes.entry(r).or_default().push(x);
    }
    let mut out: Vec<Vec<u32>> = classes.into_values().collect();
    out.sort();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubprimitivityMethod {
    /// every normal `H` acts on each of its orbits with kernel `H ∩ K`
    Def13,
    /// for all `L ⊴ K ⊴ G`, `L` acts trivially or fixes no point
    Lemma62,
}

#[derive(Clone, Debug)]
pub struct Subprimitivity {
    pub holds: bool,
    /// the normal subgroup (or subnormal `L`) that breaks the condition
    pub witness: Option<Subgroup>,
}

/// Point stabilizers of an action, as bitsets over the element table.
struct Stabilizers {
    table: std::sync::Arc<ElementTable>,
    stab: Vec<FixedBitSet>,
}

impl Stabilizers {
    fn new(a: &GroupAction) -> Result<Self> {
        let g = a.group();
        let table = g.element_table()?;
        let m = a.degree();
        let mut stab: Vec<Option<FixedBitSet>> = vec![None; m];
        for orbit in orbits_of(m, a.images()) {
            let x = orbit[0];
            // image of x under every element, by BFS along generators
            let mut image = vec![u32::MAX; table.len()];
            image[0] = x;
            let mut queue = vec![0usize];
            let mut head = 0;
            while head < queue.len() {
                let e = queue[head];
                head += 1;
                for (j, p) in a.images().iter().enumerate() {
                    let f = table.gen_right(j, e);
                    if image[f] == u32::MAX {
                        image[f] = p.apply(image[e]);
                        queue.push(f);
                    }
                }
            }
            let mut sx = table.empty_set();
            let mut transversal: HashMap<u32, usize> = HashMap::new();
            for (e, &y) in image.iter().enumerate() {
                if y == x {
                    sx.insert(e);
                }
                transversal.entry(y).or_insert(e);
            }
            for &y in &orbit {
                let t = transversal[&y];
                stab[y as usize] = Some(if y == x {
                    sx.clone()
                } else {
                    table.conjugate_set(&sx, table.element(t))
                });
            }
        }
        Ok(Stabilizers {
            table,
            stab: stab.into_iter().map(|s| s.expect("every point lies in an orbit")).collect(),
        })
    }

    fn fixes_a_point(&self, bits: &FixedBitSet) -> bool {
        self.stab.iter().any(|s| bits.is_subset(s))
    }
}

pub fn is_subprimitive(a: &GroupAction, method: SubprimitivityMethod) -> Result<bool> {
    Ok(subprimitivity(a, method)?.holds)
}

pub fn subprimitivity(a: &GroupAction, method: SubprimitivityMethod) -> Result<Subprimitivity> {
    let g = a.group();
    let lat = normal_subgroups(g)?;
    let stabs = Stabilizers::new(a)?;
    let table = &stabs.table;
    let kernel = a.kernel().reambient(g).bits()?;
    match method {
        SubprimitivityMethod::Def13 => {
            for h in lat.members() {
                let hb = h.bits()?;
                let mut h_cap_k = (*hb).clone();
                h_cap_k.intersect_with(&kernel);
                let target = h_cap_k.count_ones(..);
                let h_images: Vec<Permutation> = h
                    .generators()
                    .iter()
                    .map(|x| a.act(x))
                    .collect::<Result<_>>()?;
                for orbit in orbits_of(a.degree(), &h_images) {
                    let mut on_orbit = (*hb).clone();
                    for &x in &orbit {
                        on_orbit.intersect_with(&stabs.stab[x as usize]);
                    }
                    if on_orbit.count_ones(..) != target {
                        return Ok(Subprimitivity {
                            holds: false,
                            witness: Some(h.clone()),
                        });
                    }
                }
            }
        }
        SubprimitivityMethod::Lemma62 => {
            for k in lat.members().iter().filter(|k| !k.is_trivial()) {
                let klat = normal_subgroups(k.group())?;
                for l in klat.members().iter().filter(|l| !l.is_trivial()) {
                    let l = l.reambient(g);
                    let lb = l.bits()?;
                    if lb.is_subset(&kernel) {
                        continue;
                    }
                    if stabs.fixes_a_point(&lb) {
                        return Ok(Subprimitivity {
                            holds: false,
                            witness: Some(l),
                        });
                    }
                }
            }
        }
    }
    let _ = table;
    Ok(Subprimitivity {
        holds: true,
        witness: None,
    })
}

/// A proper subgroup `V < U` whose distinct `G`-conjugates pairwise commute
/// and generate `U`, or `None` when `U` is basally centrally indecomposable.
///
/// Such a `V` is normalized by each of its conjugates and centralized by the
/// others, hence normal in `U`; so only normal subgroups of `U` are searched,
/// smallest order first, in canonical order.
pub fn basal_decomposition(g: &FiniteGroup, u: &Subgroup) -> Result<Option<Subgroup>> {
    let u = u.reambient(g);
    u.require_normal()?;
    let cap = g.caps().subgroups;
    if u.order() > cap {
        return Err(Error::CapExceeded {
            what: "basal decomposition search",
            order: u.order(),
            cap,
        });
    }
    if u.is_trivial() {
        return Ok(None);
    }
    let table = g.element_table()?;
    let ulat = normal_subgroups(u.group())?;
    let mut candidates: Vec<Subgroup> = ulat
        .members()
        .iter()
        .filter(|v| !v.is_trivial() && !v.is_whole())
        .map(|v| v.reambient(g))
        .collect();
    candidates.sort_by(|a, b| a.key().cmp(b.key()));
    for v in candidates {
        let class = conjugacy_class_of_subgroup(&table, g, &v)?;
        if class.len() < 2 {
            continue;
        }
        let members: Vec<Subgroup> = class
            .iter()
            .map(|b| Subgroup::from_bits(g, &table, b.clone()))
            .collect();
        let commute = members.iter().enumerate().all(|(i, x)| {
            members[i + 1..].iter().all(|y| {
                x.generators()
                    .iter()
                    .all(|a| y.generators().iter().all(|b| &(a * b) == &(b * a)))
            })
        });
        if commute && Subgroup::join_all(g, &members).order() == u.order() {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// The distinct conjugates of `v` under `g`, as element bitsets, starting with `v`.
pub(crate) fn conjugacy_class_of_subgroup(
    table: &ElementTable,
    g: &FiniteGroup,
    v: &Subgroup,
) -> Result<Vec<FixedBitSet>> {
    let start = (*v.bits()?).clone();
    let mut class = vec![start];
    let mut head = 0;
    while head < class.len() {
        let cur = class[head].clone();
        head += 1;
        for h in g.generators() {
            let c = table.conjugate_set(&cur, h.images());
            if !class.contains(&c) {
                class.push(c);
            }
        }
    }
    Ok(class)
}

/// Whether `N_G(F) / F C_G(F)` is soluble.
pub fn outer_quotient_soluble(g: &FiniteGroup, f: &Subgroup) -> Result<bool> {
    let f = f.reambient(g);
    let n = f.normalizer()?;
    let c = centralizer_of(g, f.generators())?;
    let fc = f.join(&c)?;
    let ng = n.group();
    let (q, _) = quotient_by(ng, &fc.reambient(ng))?;
    Ok(is_soluble(&q))
}

/// Conjugation action of `G` on the simple direct factors of a normal
/// subgroup `P` that is a direct power of a nonabelian simple group. The
/// factors are the minimal normal subgroups of `P`, numbered in canonical
/// order.
pub fn factor_permutation_action(g: &FiniteGroup, p: &Subgroup) -> Result<(GroupAction, Vec<Subgroup>)> {
    let (_, _) = locate_normal(g, p)?;
    let plat = normal_subgroups(p.group())?;
    let factors: Vec<Subgroup> = plat
        .minimal_normal()
        .into_iter()
        .map(|i| plat.member(i).clone())
        .collect();
    let images = g
        .generators()
        .iter()
        .map(|h| {
            let imgs = factors
                .iter()
                .map(|t| {
                    plat.position(&t.conjugate(h).reambient(p.group()))
                        .and_then(|pos| factors.iter().position(|f| plat.position(f) == Some(pos)))
                        .map(|j| j as u32)
                        .ok_or_else(|| Error::Structure("conjugate of a factor is not a factor".into()))
                })
                .collect::<Result<Vec<u32>>>()?;
            Permutation::from_images(imgs)
        })
        .collect::<Result<Vec<_>>>()?;
    let action = GroupAction::new(g, factors.len(), images)?;
    Ok((action, factors.into_iter().map(|f| f.reambient(g)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use SubprimitivityMethod::*;

    fn perm(n: usize, cycles: &[&[u32]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn profiles() {
        let t = FiniteGroup::trivial(3);
        let p = action_profile(&GroupAction::natural(&t));
        assert_eq!(p.orbits.len(), 3);
        let d8 = corpus::c2_wr_c2();
        let p = action_profile(&GroupAction::natural(&d8));
        assert!(p.transitive && !p.primitive && p.faithful);
        assert_eq!(p.blocks.unwrap(), vec![vec![0, 1], vec![2, 3]]);
        let p = action_profile(&GroupAction::natural(&corpus::alternating(5)));
        assert!(p.transitive && p.primitive);
    }

    #[test]
    fn subprimitivity_examples() {
        for g in [corpus::c2_wr_c2(), corpus::alternating(4), corpus::cyclic(6)] {
            let r = GroupAction::regular(&g).unwrap();
            assert!(is_subprimitive(&r, Def13).unwrap());
            assert!(is_subprimitive(&r, Lemma62).unwrap());
        }
        let a5 = GroupAction::natural(&corpus::alternating(5));
        assert!(is_subprimitive(&a5, Def13).unwrap());
        assert!(is_subprimitive(&a5, Lemma62).unwrap());
        let d8 = GroupAction::natural(&corpus::c2_wr_c2());
        let s = subprimitivity(&d8, Def13).unwrap();
        assert!(!s.holds);
        assert!(!is_subprimitive(&d8, Lemma62).unwrap());
    }

    #[test]
    fn basal_examples() {
        let g = corpus::c2_wr_c2();
        let base = g.subgroup(vec![perm(4, &[&[0, 1]]), perm(4, &[&[2, 3]])]).unwrap();
        let v = basal_decomposition(&g, &base).unwrap().unwrap();
        assert_eq!(v.order(), 2);
        assert!(!v.contains(&perm(4, &[&[0, 1], &[2, 3]])));
        let c4 = g.subgroup(vec![perm(4, &[&[0, 2, 1, 3]])]).unwrap();
        assert!(basal_decomposition(&g, &c4).unwrap().is_none());
        let a5 = corpus::alternating(5);
        assert!(basal_decomposition(&a5, &a5.whole()).unwrap().is_none());
    }

    #[test]
    fn outer_quotients() {
        let a5 = corpus::alternating(5);
        assert!(outer_quotient_soluble(&a5, &a5.whole()).unwrap());
        let s5 = corpus::symmetric(5);
        let a5_in_s5 = s5.subgroup(a5.generators().to_vec()).unwrap();
        assert!(outer_quotient_soluble(&s5, &a5_in_s5).unwrap());
        let w = corpus::a5_wr_c2();
        let left = w
            .subgroup(vec![perm(10, &[&[0, 1, 2, 3, 4]]), perm(10, &[&[0, 1, 2]])])
            .unwrap();
        assert_eq!(left.normalizer().unwrap().order(), 3600);
        assert!(outer_quotient_soluble(&w, &left).unwrap());
    }

    #[test]
    fn factor_action_of_a5_wr_c2() {
        let w = corpus::a5_wr_c2();
        let lat = normal_subgroups(&w).unwrap();
        let (act, factors) = factor_permutation_action(&w, lat.member(1)).unwrap();
        assert_eq!(factors.len(), 2);
        assert_eq!(act.degree(), 2);
        assert!(is_subprimitive(&act, Def13).unwrap());
        assert!(is_subprimitive(&act, Lemma62).unwrap());
    }
}
