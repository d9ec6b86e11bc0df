//! Constructors for towers of finite groups.

mod symbolic;

pub use symbolic::{SymExpr, EXPANSION_BITS};

use num_bigint::BigUint;
use serde::Serialize;

use crate::actions::{subprimitivity, GroupAction, SubprimitivityMethod};
use crate::chief::{all_chief_factors, narrow_associated_to};
use crate::construct::{quotient_by, wreath_product, WreathProduct};
use crate::corpus;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::hom::GroupHom;
use crate::lattice::{melnikov, obliquity};
use crate::structure::{is_perfect, is_prime};
use crate::subgroup::Subgroup;
use crate::towers::Tower;

/// Cyclic groups of orders `p^start, ..., p^(start + levels - 1)` with the
/// canonical quotient maps; `A_n` is the subgroup of order `p^2` when it exists.
pub fn build_cyclic_tower(p: u64, levels: usize, start: u32) -> Result<Tower> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if levels < 2 || start < 1 {
        return Err(Error::InvalidParameters(
            "a cyclic tower needs at least 2 levels and start exponent at least 1".into(),
        ));
    }
    let mut groups = Vec::with_capacity(levels);
    let mut designated = Vec::with_capacity(levels);
    for n in 0..levels {
        let e = start + n as u32;
        let order = (p as u128)
            .checked_pow(e)
            .filter(|&o| o <= 1 << 24)
            .ok_or_else(|| Error::InvalidParameters(format!("order {p}^{e} is too large")))?;
        let g = corpus::cyclic(order as usize);
        let a = (e >= 2).then(|| {
            let step = (order / (p as u128 * p as u128)) as i64;
            g.subgroup(vec![g.generators()[0].pow(step)]).expect("power of a generator")
        });
        groups.push(g);
        designated.push(a);
    }
    let maps = groups
        .windows(2)
        .map(|w| GroupHom::new(&w[1], &w[0], w[0].generators().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Tower::new(groups, maps, designated)
}

/// `G_1 = S` and `G_{n+1} = S ≀ G_n` over the natural action of `G_n`, with
/// maps killing the newest base. No designated subgroups.
pub fn build_wreath_tower(bottom: &FiniteGroup, levels: usize) -> Result<Tower> {
    Ok(wreath_tower_parts(bottom, levels)?.0)
}

/// The wreath tower together with each wreath construction used.
pub fn wreath_tower_parts(bottom: &FiniteGroup, levels: usize) -> Result<(Tower, Vec<WreathProduct>)> {
    if bottom.is_trivial() {
        return Err(Error::InvalidParameters("the bottom group must be nontrivial".into()));
    }
    if levels == 0 {
        return Err(Error::InvalidParameters("at least one level is required".into()));
    }
    let cap = bottom.caps().lattice;
    let mut groups = vec![bottom.clone()];
    let mut maps = Vec::new();
    let mut wreaths = Vec::new();
    for _ in 1..levels {
        let top = groups.last().expect("nonempty").clone();
        let order = SymExpr::mul(
            SymExpr::pow(SymExpr::from(bottom.order()), SymExpr::from(top.degree() as u128)),
            SymExpr::from(top.order()),
        );
        match order.to_u128() {
            Some(o) if o <= cap => {}
            _ => {
                return Err(Error::CapExceeded {
                    what: "wreath tower level",
                    order: order.to_u128().unwrap_or(u128::MAX),
                    cap,
                })
            }
        }
        let w = wreath_product(bottom, &GroupAction::natural(&top))?;
        maps.push(w.projection()?);
        groups.push(w.group().clone());
        wreaths.push(w);
    }
    let n = groups.len();
    Ok((Tower::new(groups, maps, vec![None; n])?, wreaths))
}

/// How the actions used for wreathing are chosen.
#[derive(Clone, Debug)]
pub enum ActionStrategy {
    /// the regular action, degree `|G|`
    Regular,
    /// the product action of a wreath product on `Δ^X`
    Product,
    /// caller-supplied actions, used in order for the materialized steps
    Supplied(Vec<GroupAction>),
}

impl ActionStrategy {
    fn name(&self) -> &'static str {
        match self {
            ActionStrategy::Regular => "regular",
            ActionStrategy::Product => "product",
            ActionStrategy::Supplied(_) => "supplied",
        }
    }
}

/// One wreath step `name = bottom ≀_X previous`.
#[derive(Clone, Debug, Serialize)]
pub struct RecipeStep {
    pub name: String,
    pub bottom_order: u128,
    pub bottom_degree: usize,
    pub action: String,
    pub action_degree: SymExpr,
    pub order: SymExpr,
    /// the wreathing action was checked to be subprimitive and faithful
    pub certified: bool,
    pub materialized: bool,
}

/// The full recipe, including steps too large to materialize.
#[derive(Clone, Debug, Serialize)]
pub struct StructuredWreathSpec {
    pub recipe: Vec<RecipeStep>,
    pub symbolic_orders: Vec<SymExpr>,
}

#[derive(Clone, Debug)]
pub struct Example64 {
    /// the materialized `G_0, G_1, ...`
    pub tower: Tower,
    pub spec: StructuredWreathSpec,
}

struct Stage {
    name: String,
    order: SymExpr,
    /// degree of the natural points of the bottom group used at this stage
    bottom_degree: usize,
    wreath: Option<WreathProduct>,
}

/// Alternating wreath construction: `G_0 = S_0 ≀ top`, then
/// `H_n = F_n ≀_{Y_n} G_n` and `G_{n+1} = S_{n+1} ≀_{X_{n+1}} H_n`, where every
/// wreathing action is subprimitive and faithful. Steps whose order exceeds
/// the lattice cap are recorded symbolically only.
pub fn build_example64(
    top: &GroupAction,
    simples: &[FiniteGroup],
    perfects: &[FiniteGroup],
    strategy: &ActionStrategy,
    levels: usize,
) -> Result<Example64> {
    if simples.is_empty() || perfects.is_empty() || levels == 0 {
        return Err(Error::InvalidParameters(
            "need at least one simple group, one perfect group and one level".into(),
        ));
    }
    if top.degree() < 2 || top.group().is_trivial() {
        return Err(Error::InvalidParameters("the top action needs a nontrivial group on at least 2 points".into()));
    }
    for s in simples.iter().chain(perfects) {
        if s.is_trivial() || !is_perfect(s) {
            return Err(Error::InvalidParameters(format!(
                "group of order {} is not a nontrivial perfect group",
                s.order()
            )));
        }
    }
    certify(top, "top")?;
    let cap = top.group().caps().lattice;
    let mut recipe = Vec::new();
    let mut supplied = match strategy {
        ActionStrategy::Supplied(v) => v.clone().into_iter(),
        _ => Vec::new().into_iter(),
    };

    // G_0 over the top action
    let s0 = &simples[0];
    let order0 = SymExpr::mul(
        SymExpr::pow(SymExpr::from(s0.order()), SymExpr::from(top.degree() as u128)),
        SymExpr::from(top.group().order()),
    );
    let mut current = stage("G_0", s0, order0, cap, || wreath_product(s0, top))?;
    recipe.push(RecipeStep {
        name: current.name.clone(),
        bottom_order: s0.order(),
        bottom_degree: s0.degree(),
        action: "top".into(),
        action_degree: SymExpr::from(top.degree() as u128),
        order: current.order.clone(),
        certified: true,
        materialized: current.wreath.is_some(),
    });
    // stages in order G_0, H_0, G_1, H_1, ...
    let mut stages: Vec<Stage> = Vec::new();
    for step in 0..2 * (levels - 1) {
        let n = step / 2;
        let (bottom, name) = if step % 2 == 0 {
            (&perfects[n % perfects.len()], format!("H_{n}"))
        } else {
            (&simples[(n + 1) % simples.len()], format!("G_{}", n + 1))
        };
        let (action, degree, certified) = match &current.wreath {
            Some(w) => {
                let a = match strategy {
                    ActionStrategy::Regular => GroupAction::regular(w.group())?,
                    ActionStrategy::Product => w.product_action()?,
                    ActionStrategy::Supplied(_) => supplied.next().ok_or_else(|| {
                        Error::InvalidParameters(format!("no supplied action for {}", current.name))
                    })?,
                };
                if !a.group().same_group(w.group()) {
                    return Err(Error::InvalidParameters(format!(
                        "supplied action is not an action of {}",
                        current.name
                    )));
                }
                certify(&a, &current.name)?;
                let d = SymExpr::from(a.degree() as u128);
                (Some(a), d, true)
            }
            None => {
                let d = match strategy {
                    ActionStrategy::Regular => current.order.clone(),
                    _ => SymExpr::pow(
                        SymExpr::from(current.bottom_degree as u128),
                        symbolic_blocks(&recipe, &current.name),
                    ),
                };
                (None, d, false)
            }
        };
        let order = SymExpr::mul(SymExpr::pow(SymExpr::from(bottom.order()), degree.clone()), current.order.clone());
        let next = match action {
            Some(a) => stage(&name, bottom, order, cap, || wreath_product(bottom, &a))?,
            None => Stage {
                name: name.clone(),
                order,
                bottom_degree: bottom.degree(),
                wreath: None,
            },
        };
        recipe.push(RecipeStep {
            name,
            bottom_order: bottom.order(),
            bottom_degree: bottom.degree(),
            action: strategy.name().into(),
            action_degree: degree,
            order: next.order.clone(),
            certified,
            materialized: next.wreath.is_some(),
        });
        stages.push(std::mem::replace(&mut current, next));
    }
    stages.push(current);

    // materialized prefix G_0, G_1, ...; ρ_i: G_{i+1} -> H_i -> G_i and
    // A_i = ker(G_i -> H_{i-2}), reading H_{-1} as the top group
    let materialized: Vec<&WreathProduct> = stages.iter().map_while(|s| s.wreath.as_ref()).collect();
    let projections = materialized
        .iter()
        .map(|w| w.projection())
        .collect::<Result<Vec<_>>>()?;
    let mut groups = Vec::new();
    let mut maps = Vec::new();
    let mut designated = Vec::new();
    for i in (0..materialized.len()).step_by(2) {
        groups.push(materialized[i].group().clone());
        if i >= 2 {
            maps.push(projections[i].then(&projections[i - 1])?);
        }
        let mut a = projections[i].clone();
        for j in (i.saturating_sub(2)..i).rev() {
            a = a.then(&projections[j])?;
        }
        designated.push(Some(a.kernel().clone()));
    }
    let symbolic_orders = recipe.iter().map(|r| r.order.clone()).collect();
    Ok(Example64 {
        tower: Tower::new(groups, maps, designated)?,
        spec: StructuredWreathSpec {
            recipe,
            symbolic_orders,
        },
    })
}

/// Number of blocks of a product action on a symbolic stage.
fn symbolic_blocks(recipe: &[RecipeStep], name: &str) -> SymExpr {
    recipe
        .iter()
        .find(|r| r.name == name)
        .map(|r| r.action_degree.clone())
        .unwrap_or_else(|| SymExpr::from(1))
}

fn stage(
    name: &str,
    bottom: &FiniteGroup,
    order: SymExpr,
    cap: u128,
    build: impl FnOnce() -> Result<WreathProduct>,
) -> Result<Stage> {
    let wreath = match order.to_u128() {
        Some(o) if o <= cap => Some(build()?),
        _ => None,
    };
    Ok(Stage {
        name: name.into(),
        order,
        bottom_degree: bottom.degree(),
        wreath,
    })
}

/// Subprimitive and faithful, or a hard error naming the failing subgroup.
fn certify(a: &GroupAction, what: &str) -> Result<()> {
    if !a.is_faithful() {
        return Err(Error::ActionRejected(format!(
            "action of {what} on {} points has a kernel of order {}",
            a.degree(),
            a.kernel().order()
        )));
    }
    let sp = subprimitivity(a, SubprimitivityMethod::Def13)?;
    if !sp.holds {
        let h = sp.witness.expect("failure carries a witness");
        return Err(Error::ActionRejected(format!(
            "action of {what} on {} points is not subprimitive: a normal subgroup of order {} acts unfaithfully on one of its orbits",
            a.degree(),
            h.order()
        )));
    }
    Ok(())
}

/// Reindexes `H_1, ..., H_m` as `G_n = H_{2n+2}` with `ρ_n = φ_{2n+3} φ_{2n+4}`
/// and `A_n = ker(φ_{2n} φ_{2n+1} φ_{2n+2})`, where `φ_k: H_k → H_{k-1}`.
pub fn wilson_relabel(h: &Tower) -> Result<Tower> {
    if h.len() < 6 {
        return Err(Error::InvalidParameters(format!(
            "relabelling needs at least 6 levels, found {}",
            h.len()
        )));
    }
    for k in 2..=h.len() {
        let phi = h.map(k - 1).expect("in range");
        if phi.is_injective() {
            return Err(Error::InvalidParameters(format!("the map from level {k} is injective")));
        }
    }
    let count = (h.len() - 2) / 2;
    let groups: Vec<FiniteGroup> = (1..=count).map(|n| h.level(2 * n + 2).clone()).collect();
    let maps = (1..count)
        .map(|n| h.composite(2 * n + 2, 2 * n + 4))
        .collect::<Result<Vec<_>>>()?;
    let designated = (1..=count)
        .map(|n| Ok(Some(h.composite(2 * n - 1, 2 * n + 2)?.kernel().clone())))
        .collect::<Result<Vec<_>>>()?;
    Tower::new(groups, maps, designated)
}

/// The finite chain of narrow subgroups `G = K_0 > K_1 > ...` with
/// `K_{n+1} ≤ Ob_G(M_G(K_n))` chosen canonically, realized as the tower of
/// quotients `G/M_G(K_n)`. `A` on level `G/M_G(K_n)` is `K_{n-1}/M_G(K_n)`,
/// and the whole quotient on the first level.
pub fn chain_construct(g: &FiniteGroup) -> Result<Tower> {
    if g.is_trivial() {
        return Err(Error::TrivialSubgroup);
    }
    let (ks, ms) = narrow_chain(g)?;
    let mut quotients = Vec::new();
    for m in &ms {
        quotients.push(quotient_by(g, m)?);
    }
    let groups: Vec<FiniteGroup> = quotients.iter().map(|(q, _)| q.clone()).collect();
    let maps = quotients
        .windows(2)
        .map(|w| {
            let (upper, upper_hom) = &w[1];
            let (lower, lower_hom) = &w[0];
            let images = upper
                .generators()
                .iter()
                .map(|y| {
                    let x = upper_hom.lift(y).ok_or(Error::NotAMember)?;
                    lower_hom.apply(&x)
                })
                .collect::<Result<Vec<_>>>()?;
            GroupHom::new(upper, lower, images)
        })
        .collect::<Result<Vec<_>>>()?;
    let designated = quotients
        .iter()
        .enumerate()
        .map(|(j, (q, hom))| {
            Ok(Some(if j == 0 {
                q.whole()
            } else {
                hom.map_subgroup(&ks[j - 1])?
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Tower::new(groups, maps, designated)
}

/// `(K_0, K_1, ...)` and `(M_G(K_0), M_G(K_1), ...)`.
pub fn narrow_chain(g: &FiniteGroup) -> Result<(Vec<Subgroup>, Vec<Subgroup>)> {
    let mut ks = vec![g.whole()];
    let mut ms = vec![melnikov(&g.whole(), None)?];
    let factors = all_chief_factors(g)?;
    loop {
        let l = obliquity(g, ms.last().expect("nonempty"), false)?;
        if l.is_trivial() {
            return Ok((ks, ms));
        }
        let mut best: Option<Subgroup> = None;
        for f in factors.iter().filter(|f| f.upper().is_subgroup_of(&l)) {
            let k = narrow_associated_to(f)?;
            if best.as_ref().is_none_or(|b| k.key() < b.key()) {
                best = Some(k);
            }
        }
        let k = best.ok_or_else(|| Error::Structure("no chief factor below the obliquity core".into()))?;
        ms.push(melnikov(&k, Some(g))?);
        ks.push(k);
    }
}

/// Exact order of `S^k` as a big integer.
pub fn power_order(s: u128, k: u32) -> BigUint {
    BigUint::from(s).pow(k)
}
