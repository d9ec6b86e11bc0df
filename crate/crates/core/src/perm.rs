//! Permutations of `{0, .., n-1}` in one-line notation.
//!
//! Composition follows the right-action convention used throughout the crate:
//! `x^(a*b) = (x^a)^b`, so `a * b` applies `a` first. Conjugation is
//! `a^h = h^-1 a h` and the commutator is `[a, b] = a^-1 b^-1 a b`.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its image list, checking that it is a bijection.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection on 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Permutation::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// Builds a permutation of the given degree from a list of cycles.
    /// Cycles are applied left to right.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Self> {
        let mut p = Permutation::identity(degree);
        for cycle in cycles {
            let mut c = Permutation::identity(degree);
            for (i, &x) in cycle.iter().enumerate() {
                let y = cycle[(i + 1) % cycle.len()];
                if x as usize >= degree || y as usize >= degree {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle {cycle:?} leaves 0..{degree}"
                    )));
                }
                c.images[x as usize] = y;
            }
            let c = Permutation::from_images(c.images)?;
            p = &p * &c;
        }
        Ok(p)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, k: i64) -> Self {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `h^-1 * self * h`
    pub fn conjugate_by(&self, h: &Permutation) -> Self {
        // x^(h^-1 g h) = h(g(h^-1(x))); relabel points through h.
        let mut out = vec![0u32; self.images.len()];
        for (x, &gx) in self.images.iter().enumerate() {
            out[h.images[x] as usize] = h.images[gx as usize];
        }
        Permutation { images: out }
    }

    /// `[self, other] = self^-1 other^-1 self other`
    pub fn commutator(&self, other: &Permutation) -> Self {
        &(&self.inverse() * &other.inverse()) * &(self * other)
    }

    pub fn first_moved_point(&self) -> Option<u32> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &x)| *i as u32 != x)
            .map(|(i, _)| i as u32)
    }

    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.degree()];
        let mut acc: u64 = 1;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            acc = lcm(acc, len);
        }
        acc
    }

    /// Nontrivial cycles in canonical order (each starts at its least point).
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x as u32);
                x = self.images[x] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Embeds into a larger degree, fixing the new points.
    pub fn extend(&self, degree: usize) -> Self {
        assert!(degree >= self.degree());
        let mut images = self.images.clone();
        images.extend(self.degree() as u32..degree as u32);
        Permutation { images }
    }

    /// Restriction to a union of orbits, relabelled by position in `points`.
    pub(crate) fn restrict(&self, points: &[u32], position: &[u32]) -> Self {
        let images = points
            .iter()
            .map(|&x| position[self.images[x as usize] as usize])
            .collect();
        Permutation::from_images_unchecked(images)
    }

    /// Acts on `a.degree() + b.degree()` points, `a` on the first block and `b` on the second.
    pub fn direct_sum(a: &Permutation, b: &Permutation) -> Self {
        let shift = a.degree() as u32;
        let mut images = a.images.clone();
        images.extend(b.images.iter().map(|&x| x + shift));
        Permutation { images }
    }

    pub(crate) fn split_at(&self, at: usize) -> (Permutation, Permutation) {
        let left = self.images[..at].to_vec();
        let right = self.images[at..].iter().map(|&x| x - at as u32).collect();
        (
            Permutation::from_images_unchecked(left),
            Permutation::from_images_unchecked(right),
        )
    }

    pub(crate) fn into_images(self) -> Vec<u32> {
        self.images
    }
}

/// Right-multiplies a one-line image buffer by `p` in place.
#[inline]
pub(crate) fn right_mul_in_place(buf: &mut [u32], p: &[u32]) {
    for x in buf.iter_mut() {
        *x = p[*x as usize];
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), rhs.degree());
        Permutation {
            images: self
                .images
                .iter()
                .map(|&x| rhs.images[x as usize])
                .collect(),
        }
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<u32>) -> Result<Self> {
        Permutation::from_images(images)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Vec<u32> {
        p.images
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
