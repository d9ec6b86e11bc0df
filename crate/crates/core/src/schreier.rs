//! Deterministic Schreier-Sims with Schreier-vector transversals.
//!
//! Level `l` stores the base point `β_l`, the strong generators fixing
//! `β_0..β_{l-1}`, and a BFS tree of the orbit of `β_l` under them. The tree
//! gives transversal elements `u_p` with `β_l^{u_p} = p`. Sifting right-multiplies
//! by `u_p^-1`, walking the tree back to the root, entirely in place.
//!
//! Ranks: an element is the product `u^(k) ... u^(1) u^(0)` of one transversal
//! element per level; its rank is the mixed-radix number with level 0 as the
//! most significant digit. Ranks give a fixed enumeration of the group.

use crate::error::{Error, Result};
use crate::perm::{right_mul_in_place, Permutation};

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub(crate) struct Level {
    pub base: u32,
    pub gens: Vec<Permutation>,
    inv_gens: Vec<Permutation>,
    pub orbit: Vec<u32>,
    pos: Vec<u32>,
    /// by orbit position: (generator index, predecessor point)
    parent: Vec<(u32, u32)>,
}

impl Level {
    fn new(base: u32, degree: usize) -> Self {
        let mut level = Level {
            base,
            gens: Vec::new(),
            inv_gens: Vec::new(),
            orbit: Vec::new(),
            pos: vec![NONE; degree],
            parent: Vec::new(),
        };
        level.rebuild_orbit();
        level
    }

    fn add_gen(&mut self, g: Permutation) {
        self.inv_gens.push(g.inverse());
        self.gens.push(g);
        self.rebuild_orbit();
    }

    fn rebuild_orbit(&mut self) {
        for &p in &self.orbit {
            self.pos[p as usize] = NONE;
        }
        self.orbit.clear();
        self.parent.clear();
        self.orbit.push(self.base);
        self.parent.push((NONE, self.base));
        self.pos[self.base as usize] = 0;
        let mut head = 0;
        while head < self.orbit.len() {
            let q = self.orbit[head];
            head += 1;
            for (j, g) in self.gens.iter().enumerate() {
                let r = g.apply(q);
                if self.pos[r as usize] == NONE {
                    self.pos[r as usize] = self.orbit.len() as u32;
                    self.orbit.push(r);
                    self.parent.push((j as u32, q));
                }
            }
        }
    }

    #[inline]
    pub fn orbit_len(&self) -> usize {
        self.orbit.len()
    }

    #[inline]
    pub fn position(&self, p: u32) -> Option<usize> {
        match self.pos[p as usize] {
            NONE => None,
            i => Some(i as usize),
        }
    }

    /// `u_p` with `base^{u_p} = p`.
    pub fn transversal(&self, p: u32, degree: usize) -> Permutation {
        let mut path = Vec::new();
        let mut q = p;
        while q != self.base {
            let (j, prev) = self.parent[self.pos[q as usize] as usize];
            path.push(j);
            q = prev;
        }
        let mut buf: Vec<u32> = (0..degree as u32).collect();
        for &j in path.iter().rev() {
            right_mul_in_place(&mut buf, self.gens[j as usize].images());
        }
        Permutation::from_images_unchecked(buf)
    }

    /// Replaces `buf` by `buf * u_p^-1` where `p = base^buf`; returns the orbit
    /// position of `p`, or `None` when `p` lies outside the orbit.
    #[inline]
    pub fn sift_step(&self, buf: &mut [u32]) -> Option<usize> {
        let mut p = buf[self.base as usize];
        let idx = self.position(p)?;
        while p != self.base {
            let (j, prev) = self.parent[self.pos[p as usize] as usize];
            right_mul_in_place(buf, self.inv_gens[j as usize].images());
            p = prev;
        }
        Some(idx)
    }
}

#[derive(Clone, Debug)]
pub(crate) struct StabChain {
    degree: usize,
    levels: Vec<Level>,
    /// number of leading levels that came from a requested base prefix
    prefix_len: usize,
}

impl StabChain {
    pub fn new(degree: usize, gens: &[Permutation]) -> Self {
        Self::with_base(degree, gens, &[])
    }

    /// Builds a chain whose base starts with those points of `prefix` moved by
    /// the group, in the given order.
    pub fn with_base(degree: usize, gens: &[Permutation], prefix: &[u32]) -> Self {
        let gens: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut base: Vec<u32> = Vec::new();
        for &p in prefix {
            if !base.contains(&p) && gens.iter().any(|g| g.apply(p) != p) {
                base.push(p);
            }
        }
        let prefix_len = base.len();
        for g in &gens {
            if base.iter().all(|&b| g.apply(b) == b) {
                base.push(g.first_moved_point().expect("nonidentity"));
            }
        }
        let mut levels: Vec<Level> = base.iter().map(|&b| Level::new(b, degree)).collect();
        for g in &gens {
            for (l, level) in levels.iter_mut().enumerate() {
                if base[..l].iter().all(|&b| g.apply(b) == b) {
                    level.gens.push(g.clone());
                    level.inv_gens.push(g.inverse());
                }
            }
        }
        for level in &mut levels {
            level.rebuild_orbit();
        }
        let mut chain = StabChain {
            degree,
            levels,
            prefix_len,
        };
        chain.complete();
        chain
    }

    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let iu = i as usize;
            match self.failing_schreier_generator(iu) {
                None => i -= 1,
                Some((residue, j)) => {
                    if j == self.levels.len() {
                        let b = residue.first_moved_point().expect("nonidentity residue");
                        self.levels.push(Level::new(b, self.degree));
                    }
                    for l in iu + 1..=j {
                        self.levels[l].add_gen(residue.clone());
                    }
                    i = j as isize;
                }
            }
        }
    }

    fn failing_schreier_generator(&self, i: usize) -> Option<(Permutation, usize)> {
        let level = &self.levels[i];
        for &p in &level.orbit {
            let u = level.transversal(p, self.degree);
            for s in &level.gens {
                let mut buf = (&u * s).into_images();
                level.sift_step(&mut buf).expect("orbit is closed");
                if is_identity(&buf) {
                    continue;
                }
                let mut stopped = self.levels.len();
                for l in i + 1..self.levels.len() {
                    if self.levels[l].sift_step(&mut buf).is_none() {
                        stopped = l;
                        break;
                    }
                }
                if stopped < self.levels.len() || !is_identity(&buf) {
                    return Some((Permutation::from_images_unchecked(buf), stopped));
                }
            }
        }
        None
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix_len
    }

    pub fn order(&self) -> Result<u128> {
        self.levels.iter().try_fold(1u128, |acc, l| {
            acc.checked_mul(l.orbit_len() as u128)
                .ok_or(Error::OrderOverflow)
        })
    }

    /// Generators of the pointwise stabilizer of the first `depth` base points.
    pub fn stabilizer_gens(&self, depth: usize) -> Vec<Permutation> {
        self.levels
            .get(depth)
            .map(|l| l.gens.clone())
            .unwrap_or_default()
    }

    /// Sifts `buf` in place; returns true iff it sifts to the identity.
    pub fn sift_in_place(&self, buf: &mut [u32]) -> bool {
        for level in &self.levels {
            if level.sift_step(buf).is_none() {
                return false;
            }
        }
        is_identity(buf)
    }

    /// Sifts through the first `depth` levels only; returns false if some
    /// base image leaves its orbit.
    pub fn sift_prefix_in_place(&self, buf: &mut [u32], depth: usize) -> bool {
        for level in &self.levels[..depth.min(self.levels.len())] {
            if level.sift_step(buf).is_none() {
                return false;
            }
        }
        true
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let mut buf = g.images().to_vec();
        self.sift_in_place(&mut buf)
    }

    pub fn weights(&self) -> Vec<u128> {
        let mut w = vec![1u128; self.levels.len()];
        for l in (0..self.levels.len().saturating_sub(1)).rev() {
            w[l] = w[l + 1].saturating_mul(self.levels[l + 1].orbit_len() as u128);
        }
        w
    }

    /// Rank of the element in `buf` (consumed as scratch), or `None` for non-members.
    pub fn rank_in_place(&self, buf: &mut [u32], weights: &[u128]) -> Option<u128> {
        let mut rank = 0u128;
        for (level, &w) in self.levels.iter().zip(weights) {
            let idx = level.sift_step(buf)?;
            rank += idx as u128 * w;
        }
        is_identity(buf).then_some(rank)
    }

    pub fn ranker(&self) -> Ranker<'_> {
        Ranker {
            chain: self,
            weights: self.weights(),
            scratch: vec![0; self.degree],
        }
    }

    /// All elements, flattened, in rank order.
    pub fn enumerate_flat(&self) -> Vec<u32> {
        let d = self.degree;
        let mut current: Vec<u32> = (0..d as u32).collect();
        for level in self.levels.iter().rev() {
            let reps: Vec<Permutation> = level
                .orbit
                .iter()
                .map(|&p| level.transversal(p, d))
                .collect();
            let count = current.len() / d.max(1);
            let mut next = Vec::with_capacity(current.len() * reps.len());
            for u in &reps {
                for k in 0..count {
                    let x = &current[k * d..(k + 1) * d];
                    next.extend(x.iter().map(|&y| u.apply(y)));
                }
            }
            current = next;
        }
        current
    }
}

pub(crate) struct Ranker<'a> {
    chain: &'a StabChain,
    weights: Vec<u128>,
    scratch: Vec<u32>,
}

impl Ranker<'_> {
    pub fn rank(&mut self, g: &[u32]) -> Option<u128> {
        self.scratch.copy_from_slice(g);
        self.chain.rank_in_place(&mut self.scratch, &self.weights)
    }
}

#[inline]
pub(crate) fn is_identity(buf: &[u32]) -> bool {
    buf.iter().enumerate().all(|(i, &x)| i as u32 == x)
}
