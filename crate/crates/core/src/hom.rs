//! Homomorphisms between permutation groups, given on generators.
//!
//! A generator assignment is validated through its graph: the subgroup of
//! `source × target` (on `d + m` points) generated by the pairs `(g_i, φ(g_i))`.
//! It projects onto the source, so it is the graph of a homomorphism exactly
//! when its order equals `|source|`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::perm::Permutation;
use crate::schreier::{is_identity, StabChain};
use crate::subgroup::Subgroup;

#[derive(Clone)]
pub struct GroupHom(Arc<HomData>);

struct HomData {
    source: FiniteGroup,
    target: FiniteGroup,
    images: Vec<Permutation>,
    /// graph chain with the source points first in the base
    by_source: StabChain,
    /// graph chain with the target points first in the base
    by_target: OnceLock<StabChain>,
    kernel: OnceLock<Subgroup>,
    image: OnceLock<Subgroup>,
}

impl GroupHom {
    pub fn new(source: &FiniteGroup, target: &FiniteGroup, images: Vec<Permutation>) -> Result<Self> {
        if images.len() != source.generators().len() {
            return Err(Error::ImageCountMismatch {
                expected: source.generators().len(),
                found: images.len(),
            });
        }
        for im in &images {
            if im.degree() != target.degree() {
                return Err(Error::InconsistentDegree {
                    expected: target.degree(),
                    found: im.degree(),
                });
            }
            if !target.contains(im) {
                return Err(Error::NotAMember);
            }
        }
        let d = source.degree();
        let pairs = graph_generators(source, &images);
        let prefix: Vec<u32> = (0..d as u32).collect();
        let by_source = StabChain::with_base(d + target.degree(), &pairs, &prefix);
        let graph_order = by_source.order()?;
        if graph_order != source.order() {
            return Err(Error::InvalidHom {
                graph_order,
                source_order: source.order(),
            });
        }
        Ok(GroupHom(Arc::new(HomData {
            source: source.clone(),
            target: target.clone(),
            images,
            by_source,
            by_target: OnceLock::new(),
            kernel: OnceLock::new(),
            image: OnceLock::new(),
        })))
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        Self::new(g, g, g.generators().to_vec()).expect("identity is a homomorphism")
    }

    /// Inclusion of a subgroup into its ambient group.
    pub fn inclusion(h: &Subgroup) -> Self {
        Self::new(h.group(), h.ambient(), h.generators().to_vec()).expect("inclusion")
    }

    pub fn source(&self) -> &FiniteGroup {
        &self.0.source
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.0.target
    }

    pub fn images(&self) -> &[Permutation] {
        &self.0.images
    }

    /// Image of a source element.
    pub fn apply(&self, g: &Permutation) -> Result<Permutation> {
        if !self.source().contains(g) {
            return Err(Error::NotAMember);
        }
        let d = self.source().degree();
        let m = self.target().degree();
        let mut buf = Permutation::direct_sum(g, &Permutation::identity(m)).into_images();
        let chain = &self.0.by_source;
        chain.sift_prefix_in_place(&mut buf, chain.prefix_len());
        debug_assert!(is_identity(&buf[..d]));
        let (_, t) = Permutation::from_images_unchecked(buf).split_at(d);
        Ok(t.inverse())
    }

    fn by_target(&self) -> &StabChain {
        self.0.by_target.get_or_init(|| {
            let d = self.source().degree();
            let m = self.target().degree();
            let pairs = graph_generators(self.source(), self.images());
            let prefix: Vec<u32> = (d as u32..(d + m) as u32).collect();
            StabChain::with_base(d + m, &pairs, &prefix)
        })
    }

    pub fn kernel(&self) -> &Subgroup {
        self.0.kernel.get_or_init(|| {
            let d = self.source().degree();
            let chain = self.by_target();
            let gens = chain
                .stabilizer_gens(chain.prefix_len())
                .into_iter()
                .map(|p| p.split_at(d).0)
                .collect();
            self.source().subgroup_unchecked(gens)
        })
    }

    pub fn image(&self) -> &Subgroup {
        self.0
            .image
            .get_or_init(|| self.target().subgroup_unchecked(self.images().to_vec()))
    }

    pub fn is_surjective(&self) -> bool {
        self.image().order() == self.target().order()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    /// Some preimage of `t`, or `None` when `t` is outside the image.
    pub fn lift(&self, t: &Permutation) -> Option<Permutation> {
        if t.degree() != self.target().degree() {
            return None;
        }
        let d = self.source().degree();
        let mut buf = Permutation::direct_sum(&Permutation::identity(d), t).into_images();
        let chain = self.by_target();
        if !chain.sift_prefix_in_place(&mut buf, chain.prefix_len()) {
            return None;
        }
        if !is_identity(&buf[d..].iter().map(|&x| x - d as u32).collect::<Vec<_>>()) {
            return None;
        }
        let (s, _) = Permutation::from_images_unchecked(buf).split_at(d);
        Some(s.inverse())
    }

    /// Image of a subgroup of the source.
    pub fn map_subgroup(&self, h: &Subgroup) -> Result<Subgroup> {
        let gens = h
            .generators()
            .iter()
            .map(|g| self.apply(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.target().subgroup_unchecked(gens))
    }

    /// Full preimage of a subgroup of the target.
    pub fn preimage(&self, h: &Subgroup) -> Result<Subgroup> {
        let image = self.image();
        let h = if h.is_subgroup_of(image) {
            h.clone()
        } else {
            // only the part of h inside the image has a preimage
            h.reambient(self.target()).intersection(image)?
        };
        let mut gens: Vec<Permutation> = self.kernel().generators().to_vec();
        for g in h.generators() {
            gens.push(self.lift(g).ok_or(Error::NotAMember)?);
        }
        Ok(self.source().subgroup_unchecked(gens))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &GroupHom) -> Result<GroupHom> {
        if !self.target().same_group(next.source()) {
            return Err(Error::MismatchedAmbient);
        }
        let images = self
            .images()
            .iter()
            .map(|g| next.apply(g))
            .collect::<Result<Vec<_>>>()?;
        GroupHom::new(self.source(), next.target(), images)
    }
}

fn graph_generators(source: &FiniteGroup, images: &[Permutation]) -> Vec<Permutation> {
    source
        .generators()
        .iter()
        .zip(images)
        .map(|(g, t)| Permutation::direct_sum(g, t))
        .collect()
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupHom")
            .field("source_order", &self.source().order())
            .field("target_order", &self.target().order())
            .field("images", &self.images())
            .finish()
    }
}
