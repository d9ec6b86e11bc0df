//! Small named groups used as examples and test fixtures.

use crate::actions::GroupAction;
use crate::construct::{direct_product, wreath_product};
use crate::group::FiniteGroup;
use crate::perm::Permutation;

fn group(degree: usize, gens: Vec<Permutation>) -> FiniteGroup {
    FiniteGroup::new(degree, gens).expect("valid corpus group")
}

fn cycle(degree: usize, points: &[u32]) -> Permutation {
    Permutation::from_cycles(degree, &[points]).expect("valid cycle")
}

/// `C_n` acting regularly on `n` points.
pub fn cyclic(n: usize) -> FiniteGroup {
    if n <= 1 {
        return FiniteGroup::trivial(1);
    }
    let pts: Vec<u32> = (0..n as u32).collect();
    group(n, vec![cycle(n, &pts)])
}

/// `C_p^k` as a direct product of regular copies.
pub fn elementary_abelian(p: usize, k: usize) -> FiniteGroup {
    let mut g = cyclic(p);
    for _ in 1..k {
        g = direct_product(&g, &cyclic(p)).expect("direct product");
    }
    g
}

/// The Klein four-group acting regularly on 4 points.
pub fn klein() -> FiniteGroup {
    group(
        4,
        vec![
            Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap(),
            Permutation::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap(),
        ],
    )
}

pub fn symmetric(n: usize) -> FiniteGroup {
    if n <= 1 {
        return FiniteGroup::trivial(1);
    }
    let pts: Vec<u32> = (0..n as u32).collect();
    if n == 2 {
        return group(2, vec![cycle(2, &[0, 1])]);
    }
    group(n, vec![cycle(n, &pts), cycle(n, &[0, 1])])
}

pub fn alternating(n: usize) -> FiniteGroup {
    if n <= 2 {
        return FiniteGroup::trivial(n.max(1));
    }
    let gens = (0..n as u32 - 2).map(|i| cycle(n, &[i, i + 1, i + 2])).collect();
    group(n, gens)
}

/// Dihedral group of order `2n` on `n` points.
pub fn dihedral(n: usize) -> FiniteGroup {
    let rot: Vec<u32> = (0..n as u32).collect();
    let refl = Permutation::from_images((0..n as u32).map(|i| (n as u32 - i) % n as u32).collect())
        .expect("reflection");
    group(n, vec![cycle(n, &rot), refl])
}

/// Quaternion group of order 8 in its regular representation.
pub fn quaternion() -> FiniteGroup {
    // elements numbered 1, i, j, k, -1, -i, -j, -k; generators act by right multiplication
    let i = Permutation::from_images(vec![1, 4, 7, 2, 5, 0, 3, 6]).unwrap();
    let j = Permutation::from_images(vec![2, 3, 4, 5, 6, 7, 0, 1]).unwrap();
    group(8, vec![i, j])
}

/// `C_2 ≀ C_2`, the dihedral group of order 8, on 4 points.
pub fn c2_wr_c2() -> FiniteGroup {
    group(
        4,
        vec![
            cycle(4, &[0, 1]),
            cycle(4, &[2, 3]),
            Permutation::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap(),
        ],
    )
}

/// `C_2 ≀ C_2 ≀ C_2` of order 128 on 8 points.
pub fn c2_wr_c2_wr_c2() -> FiniteGroup {
    let c2 = cyclic(2);
    let inner = c2_wr_c2();
    wreath_product(&c2, &GroupAction::natural(&inner))
        .expect("wreath")
        .group()
        .clone()
}

/// `A_5 ≀ C_2` of order 7200 on 10 points.
pub fn a5_wr_c2() -> FiniteGroup {
    wreath_product(&alternating(5), &GroupAction::natural(&cyclic(2)))
        .expect("wreath")
        .group()
        .clone()
}

/// `SL(2,5)` acting on the 24 nonzero row vectors of `F_5^2`.
pub fn sl2_5() -> FiniteGroup {
    let index = |a: u32, b: u32| a * 5 + b - 1;
    let act = |m: [[u32; 2]; 2]| {
        let mut images = vec![0u32; 24];
        for a in 0..5 {
            for b in 0..5 {
                if a == 0 && b == 0 {
                    continue;
                }
                let x = (a * m[0][0] + b * m[1][0]) % 5;
                let y = (a * m[0][1] + b * m[1][1]) % 5;
                images[index(a, b) as usize] = index(x, y);
            }
        }
        Permutation::from_images(images).expect("invertible matrix")
    };
    group(24, vec![act([[1, 1], [0, 1]]), act([[0, 4], [1, 0]])])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(cyclic(7).order(), 7);
        assert_eq!(elementary_abelian(2, 3).order(), 8);
        assert_eq!(symmetric(5).order(), 120);
        assert_eq!(alternating(5).order(), 60);
        assert_eq!(dihedral(5).order(), 10);
        assert_eq!(quaternion().order(), 8);
        assert_eq!(c2_wr_c2().order(), 8);
        assert_eq!(c2_wr_c2_wr_c2().order(), 128);
        assert_eq!(a5_wr_c2().order(), 7200);
        assert_eq!(sl2_5().order(), 120);
    }

    #[test]
    fn quaternion_has_unique_involution() {
        let q = quaternion();
        let invs = q.elements().unwrap().iter().filter(|g| g.order() == 2).count();
        assert_eq!(invs, 1);
    }
}
