//! Chief factors: series, association, covering, centralizers, narrow
//! subgroups attached to a factor and the narrow ordering of factors.

use std::fmt;

use crate::construct::quotient_by;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::lattice::{abstract_melnikov, normal_subgroups, relative_melnikov, NormalLattice};
use crate::structure::{char_simple_classification, commutator_subgroup, is_nilpotent, CharSimple};
use crate::subgroup::Subgroup;

/// `K/L` with `L < K` normal in the ambient group and nothing normal strictly between.
#[derive(Clone)]
pub struct ChiefFactor {
    ambient: FiniteGroup,
    k: Subgroup,
    l: Subgroup,
}

impl ChiefFactor {
    /// Validates `K/L` as a chief factor of the common ambient group.
    pub fn new(k: &Subgroup, l: &Subgroup) -> Result<Self> {
        k.check_same_ambient(l)?;
        let g = k.ambient();
        let lat = normal_subgroups(g)?;
        let ki = lat.require(k)?;
        let li = lat.require(l)?;
        if !lat.maximal_below(ki).contains(&li) {
            return Err(Error::Structure(format!(
                "subgroup of order {} is not maximal normal below the one of order {}",
                l.order(),
                k.order()
            )));
        }
        Ok(Self::from_lattice(&lat, ki, li))
    }

    pub(crate) fn from_lattice(lat: &NormalLattice, k: usize, l: usize) -> Self {
        ChiefFactor {
            ambient: lat.ambient().clone(),
            k: lat.member(k).clone(),
            l: lat.member(l).clone(),
        }
    }

    pub fn ambient(&self) -> &FiniteGroup {
        &self.ambient
    }

    pub fn upper(&self) -> &Subgroup {
        &self.k
    }

    pub fn lower(&self) -> &Subgroup {
        &self.l
    }

    /// `|K/L|`
    pub fn order(&self) -> u128 {
        self.k.order() / self.l.order()
    }

    /// `K/L` realized as a permutation group.
    pub fn quotient(&self) -> Result<FiniteGroup> {
        let k = self.k.group();
        let l = self.l.reambient(k);
        Ok(quotient_by(k, &l)?.0)
    }

    pub fn classification(&self) -> Result<CharSimple> {
        char_simple_classification(&self.quotient()?)
    }

    fn indices(&self, lat: &NormalLattice) -> Result<(usize, usize)> {
        Ok((lat.require(&self.k)?, lat.require(&self.l)?))
    }

    /// Central in the ambient group: `[K, G] ≤ L`.
    pub fn is_central(&self) -> Result<bool> {
        let c = commutator_subgroup(&self.k, &self.ambient.whole())?;
        Ok(c.is_subgroup_of(&self.l))
    }
}

impl fmt::Debug for ChiefFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChiefFactor({} / {})", self.k.order(), self.l.order())
    }
}

impl PartialEq for ChiefFactor {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.l == other.l
    }
}

/// A chief series from `1` up to `G`, bottom-up.
pub fn chief_series(g: &FiniteGroup) -> Result<Vec<ChiefFactor>> {
    let lat = normal_subgroups(g)?;
    let chain = lat.maximal_chain();
    Ok(chain
        .windows(2)
        .map(|w| ChiefFactor::from_lattice(&lat, w[1], w[0]))
        .collect())
}

/// Every chief factor `K/L` of `G` (all covering pairs of the normal lattice).
pub fn all_chief_factors(g: &FiniteGroup) -> Result<Vec<ChiefFactor>> {
    let lat = normal_subgroups(g)?;
    let mut out = Vec::new();
    for k in 0..lat.len() {
        for l in lat.maximal_below(k) {
            out.push(ChiefFactor::from_lattice(&lat, k, l));
        }
    }
    Ok(out)
}

fn same_ambient(f1: &ChiefFactor, f2: &ChiefFactor) -> Result<NormalLattice> {
    if !f1.ambient.same_group(&f2.ambient) {
        return Err(Error::MismatchedAmbient);
    }
    normal_subgroups(&f1.ambient)
}

/// `K1 L2 = K2 L1` and `K_i ∩ L1 L2 = L_i` for `i = 1, 2`.
pub fn are_associated(f1: &ChiefFactor, f2: &ChiefFactor) -> Result<bool> {
    let lat = same_ambient(f1, f2)?;
    let (k1, l1) = f1.indices(&lat)?;
    let (k2, l2) = f2.indices(&lat)?;
    let l12 = lat.join(l1, l2);
    Ok(lat.join(k1, l2) == lat.join(k2, l1)
        && lat.meet(k1, l12) == l1
        && lat.meet(k2, l12) == l2)
}

/// `N` covers `K/L` when `NL ≥ K`.
pub fn covers(n: &Subgroup, f: &ChiefFactor) -> Result<bool> {
    let lat = normal_subgroups(&f.ambient)?;
    let ni = lat.require(n)?;
    let (k, l) = f.indices(&lat)?;
    Ok(lat.le(k, lat.join(ni, l)))
}

/// `C_G(K/L) = {g ∈ G : [K, g] ≤ L}`.
pub fn factor_centralizer(f: &ChiefFactor) -> Result<Subgroup> {
    let g = &f.ambient;
    let table = g.element_table()?;
    let lbits = f.l.bits()?;
    let kgens: Vec<usize> = table.indices_of(f.k.generators()).expect("members");
    let kinv: Vec<usize> = f
        .k
        .generators()
        .iter()
        .map(|x| table.index_of(&x.inverse()).expect("member"))
        .collect();
    let mut scratch = table.scratch();
    let mut found = table.closure(&[]);
    let mut gens: Vec<usize> = Vec::new();
    for x in 0..table.len() {
        if found.contains(x) {
            continue;
        }
        // [k, x] = k^-1 x^-1 k x = k^-1 * (k^x)
        let ok = kgens.iter().zip(&kinv).all(|(&k, &ki)| {
            let kx = table.conj_perm_with(k, table.element(x), &mut scratch);
            lbits.contains(table.mul_with(ki, kx, &mut scratch))
        });
        if ok {
            found = table.join_elements(&found, &gens, &[x]);
            gens.push(x);
        }
    }
    Ok(Subgroup::from_bits(g, &table, found))
}

/// A narrow normal subgroup `A ≤ K` with `A ≰ L`, minimal with that
/// property; the canonically least one when there are several.
pub fn narrow_associated_to(f: &ChiefFactor) -> Result<Subgroup> {
    let lat = normal_subgroups(&f.ambient)?;
    let (k, l) = f.indices(&lat)?;
    let candidates: Vec<usize> = lat
        .below(k)
        .into_iter()
        .filter(|&a| !lat.le(a, l))
        .collect();
    let minimal = candidates
        .iter()
        .copied()
        .filter(|&a| !candidates.iter().any(|&b| lat.lt(b, a)))
        .min()
        .expect("K itself is a candidate");
    let a = lat.member(minimal).clone();
    debug_assert_eq!(lat.maximal_below(minimal), vec![lat.meet(minimal, l)]);
    Ok(a)
}

/// `f1 ≻ f2`: `L1 ≥ K2` and, in `G/L2`, the relative Mel'nikov subgroup of
/// `K1/L2` is `L1/L2`. Evaluated on the lattice interval above `L2`, which
/// is the normal lattice of `G/L2`.
pub fn nar_precedes(f1: &ChiefFactor, f2: &ChiefFactor) -> Result<bool> {
    let lat = same_ambient(f1, f2)?;
    let (k1, l1) = f1.indices(&lat)?;
    let (k2, l2) = f2.indices(&lat)?;
    if !lat.le(k2, l1) {
        return Ok(false);
    }
    let interval: Vec<usize> = lat
        .strictly_below(k1)
        .into_iter()
        .filter(|&n| lat.le(l2, n))
        .collect();
    let maximal: Vec<usize> = interval
        .iter()
        .copied()
        .filter(|&n| !interval.iter().any(|&m| lat.lt(n, m)))
        .collect();
    Ok(lat.meet_all(&maximal) == l1)
}

#[derive(Clone, Debug)]
pub struct PrimeIndexCheck {
    /// `|A : M(A)[A,G]|`
    pub index: u128,
    pub prime_index: bool,
    /// every chief factor `A/C` of `G` is central
    pub top_factors_central: bool,
    pub narrow: bool,
    /// narrow ⟺ (prime index and central top factors)
    pub equivalence_holds: bool,
    /// when narrow: `M_G(A) = M(A)[A,G]`
    pub equality_holds: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct MelnikovCrosscheck {
    /// which parts applied, e.g. "i", "i+ii", "i+ii+iii"
    pub case: String,
    pub relative: Subgroup,
    pub absolute: Subgroup,
    /// `[A, M_G(A)]`
    pub commutator: Subgroup,
    /// `[A, M_G(A)] ≤ M(A)`
    pub containment_holds: bool,
    /// when `A/M_G(A)` is perfect: `M_G(A) = M(A)`
    pub perfect_equality: Option<bool>,
    /// `M(A)[A,G]`
    pub product: Subgroup,
    pub prime_index: Option<PrimeIndexCheck>,
    /// when `G` is nilpotent: `M_G(A) = M(A)[A,G]`
    pub nilpotent_equality: Option<bool>,
}

impl MelnikovCrosscheck {
    pub fn all_hold(&self) -> bool {
        self.containment_holds
            && self.perfect_equality.unwrap_or(true)
            && self
                .prime_index
                .as_ref()
                .map_or(true, |p| p.equivalence_holds && p.equality_holds.unwrap_or(true))
            && self.nilpotent_equality.unwrap_or(true)
    }
}

/// Evaluates the relations between `M(A)`, `M_G(A)` and `[A, G]` that apply to `A`.
pub fn melnikov_crosscheck(g: &FiniteGroup, a: &Subgroup) -> Result<MelnikovCrosscheck> {
    let a = a.reambient(g);
    let lat = normal_subgroups(g)?;
    let ai = lat.require(&a)?;
    let relative = relative_melnikov(&a)?;
    let absolute = abstract_melnikov(&a)?;
    let commutator = commutator_subgroup(&a, &relative)?;
    let containment_holds = commutator.is_subgroup_of(&absolute);
    let mut case = String::from("i");

    let derived = commutator_subgroup(&a, &a)?;
    let perfect_quotient = derived.join(&relative)?.order() == a.order();
    let perfect_equality = perfect_quotient.then(|| relative == absolute);

    let ag = commutator_subgroup(&a, &g.whole())?;
    let product = absolute.join(&ag)?;
    let prime_index = if product.order() < a.order() {
        case.push_str("+ii");
        let index = a.order() / product.order();
        let prime_index = crate::structure::is_prime(index as u64) && index <= u64::MAX as u128;
        let top_factors_central = lat
            .maximal_below(ai)
            .into_iter()
            .all(|c| ag.is_subgroup_of(lat.member(c)));
        let narrow = lat.maximal_below(ai).len() == 1;
        let equivalence_holds = narrow == (prime_index && top_factors_central);
        Some(PrimeIndexCheck {
            index,
            prime_index,
            top_factors_central,
            narrow,
            equivalence_holds,
            equality_holds: narrow.then(|| relative == product),
        })
    } else {
        None
    };
    let nilpotent_equality = if is_nilpotent(g) {
        case.push_str("+iii");
        Some(relative == product)
    } else {
        None
    };
    Ok(MelnikovCrosscheck {
        case,
        relative,
        absolute,
        commutator,
        containment_holds,
        perfect_equality,
        product,
        prime_index,
        nilpotent_equality,
    })
}
