//! Quotients, direct products and wreath products.

use crate::actions::GroupAction;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::hom::GroupHom;
use crate::perm::Permutation;
use crate::subgroup::Subgroup;

/// `G/N` as a permutation group together with the quotient map.
///
/// Tries the action of `G` on the orbits of `N` first and keeps it when its
/// kernel is exactly `N` (checked by order); otherwise falls back to the
/// action on right cosets of `N`, which needs the element table.
pub fn quotient_by(g: &FiniteGroup, n: &Subgroup) -> Result<(FiniteGroup, GroupHom)> {
    if !n.ambient().same_group(g) {
        return Err(Error::MismatchedAmbient);
    }
    n.require_normal()?;
    if n.is_trivial() {
        return Ok((g.clone(), GroupHom::identity(g)));
    }
    if n.order() == g.order() {
        let q = g.derive_in(1, Vec::new())?;
        let images = vec![Permutation::identity(1); g.generators().len()];
        let hom = GroupHom::new(g, &q, images)?;
        return Ok((q, hom));
    }
    if let Some(result) = quotient_on_orbits(g, n)? {
        return Ok(result);
    }
    quotient_on_cosets(g, n)
}

fn quotient_on_orbits(g: &FiniteGroup, n: &Subgroup) -> Result<Option<(FiniteGroup, GroupHom)>> {
    let orbits = n.group().orbits();
    let mut which = vec![0u32; g.degree()];
    for (i, orbit) in orbits.iter().enumerate() {
        for &x in orbit {
            which[x as usize] = i as u32;
        }
    }
    let k = orbits.len();
    let images: Vec<Permutation> = g
        .generators()
        .iter()
        .map(|p| {
            let imgs = orbits
                .iter()
                .map(|orbit| which[p.apply(orbit[0]) as usize])
                .collect();
            Permutation::from_images_unchecked(imgs)
        })
        .collect();
    let q = g.derive_in(k, images.clone())?;
    if q.order().checked_mul(n.order()) != Some(g.order()) {
        return Ok(None);
    }
    let (q, images) = shrink_to_moved_points(&q, images)?;
    let hom = GroupHom::new(g, &q, images)?;
    Ok(Some((q, hom)))
}

/// Drops points fixed by every generator.
fn shrink_to_moved_points(
    q: &FiniteGroup,
    images: Vec<Permutation>,
) -> Result<(FiniteGroup, Vec<Permutation>)> {
    let moved: Vec<u32> = (0..q.degree() as u32)
        .filter(|&x| images.iter().any(|p| p.apply(x) != x))
        .collect();
    if moved.len() == q.degree() {
        return Ok((q.clone(), images));
    }
    let keep: Vec<u32> = if moved.is_empty() { vec![0] } else { moved };
    let mut position = vec![u32::MAX; q.degree()];
    for (i, &x) in keep.iter().enumerate() {
        position[x as usize] = i as u32;
    }
    let images: Vec<Permutation> = images.iter().map(|p| p.restrict(&keep, &position)).collect();
    let q = q.derive_in(keep.len(), images.clone())?;
    Ok((q, images))
}

fn quotient_on_cosets(g: &FiniteGroup, n: &Subgroup) -> Result<(FiniteGroup, GroupHom)> {
    let table = g.element_table()?;
    let n_bits = n.bits()?;
    let n_elems: Vec<usize> = n_bits.ones().collect();
    let mut coset = vec![u32::MAX; table.len()];
    let mut reps = Vec::new();
    let mut scratch = table.scratch();
    for x in 0..table.len() {
        if coset[x] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(x);
        for &m in &n_elems {
            coset[table.mul_with(m, x, &mut scratch)] = id;
        }
    }
    let images: Vec<Permutation> = (0..table.num_gens())
        .map(|j| {
            let imgs = reps
                .iter()
                .map(|&r| coset[table.gen_right(j, r)])
                .collect();
            Permutation::from_images_unchecked(imgs)
        })
        .collect();
    let q = g.derive_in(reps.len(), images.clone())?;
    debug_assert_eq!(q.order() * n.order(), g.order());
    let hom = GroupHom::new(g, &q, images)?;
    Ok((q, hom))
}

/// `A × B` acting on `deg A + deg B` points, generated by the generators of
/// `A` followed by those of `B`.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<FiniteGroup> {
    let (da, db) = (a.degree(), b.degree());
    let mut gens: Vec<Permutation> = a
        .generators()
        .iter()
        .map(|g| Permutation::direct_sum(g, &Permutation::identity(db)))
        .collect();
    gens.extend(
        b.generators()
            .iter()
            .map(|g| Permutation::direct_sum(&Permutation::identity(da), g)),
    );
    a.derive_in(da + db, gens)
}

/// `S ≀_X T` in its imprimitive action, with enough bookkeeping to recover the
/// base, the coordinate subgroups and the projection onto `T`.
#[derive(Clone, Debug)]
pub struct WreathProduct {
    group: FiniteGroup,
    bottom: FiniteGroup,
    action: GroupAction,
    /// number of base generators; they come first in the generating set
    base_gen_count: usize,
}

impl WreathProduct {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn bottom(&self) -> &FiniteGroup {
        &self.bottom
    }

    pub fn top(&self) -> &FiniteGroup {
        self.action.group()
    }

    pub fn top_action(&self) -> &GroupAction {
        &self.action
    }

    /// `|X|`
    pub fn blocks(&self) -> usize {
        self.action.degree()
    }

    pub fn block_size(&self) -> usize {
        self.bottom.degree()
    }

    /// Embeds an element of `S` into coordinate `x` of the base.
    pub fn embed(&self, x: usize, s: &Permutation) -> Permutation {
        let m = self.block_size();
        let mut images: Vec<u32> = (0..self.group.degree() as u32).collect();
        for i in 0..m {
            images[x * m + i] = (x * m) as u32 + s.apply(i as u32);
        }
        Permutation::from_images_unchecked(images)
    }

    /// The copy of `S` acting on block `x`.
    pub fn coordinate(&self, x: usize) -> Subgroup {
        let gens = self
            .bottom
            .generators()
            .iter()
            .map(|s| self.embed(x, s))
            .collect();
        self.group.subgroup_unchecked(gens)
    }

    /// The element of the top complement corresponding to `t ∈ T`.
    pub fn lift_top(&self, t: &Permutation) -> Result<Permutation> {
        let img = self.action.act(t)?;
        let (m, k) = (self.block_size(), self.blocks());
        let extra = self.group.degree() - m * k;
        Ok(top_element(m, k, extra, t, &img))
    }

    /// The base `S^X`, the kernel of the projection onto `T`.
    pub fn base(&self) -> Subgroup {
        let gens = (0..self.blocks())
            .flat_map(|x| self.bottom.generators().iter().map(move |s| (x, s)))
            .map(|(x, s)| self.embed(x, s))
            .collect();
        self.group.subgroup_unchecked(gens)
    }

    /// The projection `S ≀ T → T`.
    pub fn projection(&self) -> Result<GroupHom> {
        let top = self.top();
        let mut images = vec![top.identity(); self.base_gen_count];
        images.extend(top.generators().iter().cloned());
        GroupHom::new(&self.group, top, images)
    }

    /// The product action on `Δ^X` where `Δ` is the point set of `S`.
    pub fn product_action(&self) -> Result<GroupAction> {
        let m = self.block_size();
        let k = self.blocks();
        let size = (m as u128)
            .checked_pow(k as u32)
            .filter(|&s| s <= u32::MAX as u128 / 2)
            .ok_or_else(|| Error::Unsupported("product action degree too large".into()))?
            as usize;
        let mut powers = vec![1usize; k];
        for x in 1..k {
            powers[x] = powers[x - 1] * m;
        }
        let images = self
            .group
            .generators()
            .iter()
            .map(|g| {
                // g maps block x to block x' and acts on it by some s_x
                let mut block_image = vec![0usize; k];
                let mut local = vec![vec![0u32; m]; k];
                for x in 0..k {
                    let y = g.apply((x * m) as u32) as usize / m;
                    block_image[x] = y;
                    for i in 0..m {
                        local[x][i] = g.apply((x * m + i) as u32) - (y * m) as u32;
                    }
                }
                let imgs: Vec<u32> = (0..size)
                    .map(|f| {
                        let mut out = 0usize;
                        for x in 0..k {
                            let digit = (f / powers[x]) % m;
                            out += local[x][digit] as usize * powers[block_image[x]];
                        }
                        out as u32
                    })
                    .collect();
                Permutation::from_images_unchecked(imgs)
            })
            .collect();
        GroupAction::new(&self.group, size, images)
    }
}

/// The top-complement element for `t ∈ T` acting on `X` as `img`.
fn top_element(m: usize, k: usize, extra: usize, t: &Permutation, img: &Permutation) -> Permutation {
    let mut images = vec![0u32; m * k + extra];
    for x in 0..k {
        let y = img.apply(x as u32) as usize;
        for i in 0..m {
            images[x * m + i] = (y * m + i) as u32;
        }
    }
    for i in 0..extra {
        images[m * k + i] = (m * k) as u32 + t.apply(i as u32);
    }
    Permutation::from_images_unchecked(images)
}

/// `S ≀_X T` where `T` acts on `X` through `action`.
///
/// Points are pairs `(x, i)` numbered `x * deg S + i`. When the action of `T`
/// is not faithful, the points of `T`'s own representation are appended so
/// that the result is still isomorphic to the abstract wreath product.
pub fn wreath_product(s: &FiniteGroup, action: &GroupAction) -> Result<WreathProduct> {
    let k = action.degree();
    if k == 0 {
        return Err(Error::EmptyDomain);
    }
    let m = s.degree();
    let top = action.group();
    let extra = if action.is_faithful() { 0 } else { top.degree() };
    let degree = m * k + extra;
    let embed = |x: usize, p: &Permutation| {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for i in 0..m {
            images[x * m + i] = (x * m) as u32 + p.apply(i as u32);
        }
        Permutation::from_images_unchecked(images)
    };
    let mut gens = Vec::new();
    let orbit_reps: Vec<usize> = crate::group::orbits_of(k, action.images())
        .iter()
        .map(|o| o[0] as usize)
        .collect();
    for &x in &orbit_reps {
        for p in s.generators() {
            gens.push(embed(x, p));
        }
    }
    let base_gen_count = gens.len();
    for (t, img) in top.generators().iter().zip(action.images()) {
        gens.push(top_element(m, k, extra, t, img));
    }
    let group = top.derive_in(degree, gens)?;
    Ok(WreathProduct {
        group,
        bottom: s.clone(),
        action: action.clone(),
        base_gen_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, c: &[u32]) -> Permutation {
        Permutation::from_cycles(n, &[c]).unwrap()
    }

    #[test]
    fn c2_wreath_c2() {
        let c2 = FiniteGroup::new(2, vec![cyc(2, &[0, 1])]).unwrap();
        let w = wreath_product(&c2, &GroupAction::natural(&c2)).unwrap();
        assert_eq!(w.group().order(), 8);
        assert_eq!(w.group().degree(), 4);
        assert!(!w.group().is_abelian());
        let p = w.projection().unwrap();
        assert_eq!(p.kernel(), &w.base());
        assert_eq!(w.base().order(), 4);
    }

    #[test]
    fn trivial_bottom_gives_top() {
        let s3 = FiniteGroup::new(3, vec![cyc(3, &[0, 1, 2]), cyc(3, &[0, 1])]).unwrap();
        let one = FiniteGroup::trivial(1);
        let w = wreath_product(&one, &GroupAction::natural(&s3)).unwrap();
        assert_eq!(w.group().order(), 6);
    }

    #[test]
    fn quotient_by_centre() {
        let c2 = FiniteGroup::new(2, vec![cyc(2, &[0, 1])]).unwrap();
        let w = wreath_product(&c2, &GroupAction::natural(&c2)).unwrap();
        let g = w.group();
        let z = g.subgroup(vec![Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap()]).unwrap();
        let (q, hom) = quotient_by(g, &z).unwrap();
        assert_eq!(q.order(), 4);
        assert!(q.generators().iter().all(|x| x.pow(2).is_identity()));
        assert_eq!(hom.kernel(), &z);
        let (q1, _) = quotient_by(g, &g.whole()).unwrap();
        assert_eq!(q1.order(), 1);
        let (q2, h2) = quotient_by(g, &g.trivial_subgroup()).unwrap();
        assert_eq!(q2.order(), 8);
        assert!(h2.is_injective());
    }

    #[test]
    fn coset_quotient_when_orbits_do_not_suffice() {
        // A4 on 4 points: the Klein subgroup is transitive, so its orbit
        // action is trivial and the coset action must be used.
        let a4 = FiniteGroup::new(4, vec![cyc(4, &[0, 1, 2]), cyc(4, &[1, 2, 3])]).unwrap();
        let v = a4
            .subgroup(vec![
                Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap(),
                Permutation::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap(),
            ])
            .unwrap();
        let (q, hom) = quotient_by(&a4, &v).unwrap();
        assert_eq!(q.order(), 3);
        assert_eq!(q.degree(), 3);
        assert_eq!(hom.kernel(), &v);
    }

    #[test]
    fn product_action_of_c2_wreath_c2() {
        let c2 = FiniteGroup::new(2, vec![cyc(2, &[0, 1])]).unwrap();
        let w = wreath_product(&c2, &GroupAction::natural(&c2)).unwrap();
        let a = w.product_action().unwrap();
        assert_eq!(a.degree(), 4);
        assert!(a.is_faithful());
    }
}
