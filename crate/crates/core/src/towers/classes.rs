use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chief::{all_chief_factors, chief_series, factor_centralizer};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::lattice::op_upper;
use crate::structure::{char_simple_classification, is_prime, CharSimple};

/// A class of characteristically simple groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClassDescriptor {
    /// all elementary abelian `p`-groups
    ElemAbelian { p: u64 },
    /// all direct powers of the simple group of the given order
    SimplePower { simple_order: u128 },
}

impl fmt::Display for ClassDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassDescriptor::ElemAbelian { p } => write!(f, "ea:{p}"),
            ClassDescriptor::SimplePower { simple_order } => write!(f, "simple:{simple_order}"),
        }
    }
}

impl FromStr for ClassDescriptor {
    type Err = Error;

    /// `ea:<p>` or `simple:<order>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameters(format!("bad class descriptor {s:?}"));
        let (kind, value) = s.split_once(':').ok_or_else(bad)?;
        match kind.trim() {
            "ea" => {
                let p: u64 = value.trim().parse().map_err(|_| bad())?;
                if !is_prime(p) {
                    return Err(Error::NotPrime(p));
                }
                Ok(ClassDescriptor::ElemAbelian { p })
            }
            "simple" => Ok(ClassDescriptor::SimplePower {
                simple_order: value.trim().parse().map_err(|_| bad())?,
            }),
            _ => Err(bad()),
        }
    }
}

/// Orders of Schur multipliers of nonabelian simple groups, keyed by group order.
/// This is configuration data, not computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplierTable {
    pub version: String,
    pub entries: BTreeMap<u128, u64>,
}

impl Default for MultiplierTable {
    /// Nonabelian simple groups of order below 20160, where order determines the group.
    fn default() -> Self {
        let entries = [
            (60, 2),
            (168, 2),
            (360, 6),
            (504, 1),
            (660, 2),
            (1092, 2),
            (2448, 2),
            (2520, 6),
            (3420, 2),
            (4080, 1),
            (5616, 1),
            (6048, 1),
            (6072, 2),
            (7800, 2),
            (7920, 1),
            (9828, 2),
            (12180, 2),
            (14880, 2),
        ]
        .into_iter()
        .collect();
        MultiplierTable {
            version: "builtin-1".into(),
            entries,
        }
    }
}

impl MultiplierTable {
    /// Parses `{"<simple order>": <multiplier order>, ...}`.
    pub fn from_json(text: &str, version: impl Into<String>) -> Result<Self> {
        let raw: BTreeMap<String, u64> = serde_json::from_str(text)?;
        let mut entries = BTreeMap::new();
        for (k, v) in raw {
            let order: u128 = k
                .trim()
                .parse()
                .map_err(|_| Error::Json(format!("table key {k:?} is not an order")))?;
            entries.insert(order, v);
        }
        Ok(MultiplierTable {
            version: version.into(),
            entries,
        })
    }

    pub fn to_json(&self) -> String {
        let raw: BTreeMap<String, u64> = self.entries.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        serde_json::to_string_pretty(&raw).expect("string keys")
    }

    pub fn multiplier(&self, simple_order: u128) -> Result<u64> {
        self.entries
            .get(&simple_order)
            .copied()
            .ok_or(Error::Unidentified(simple_order))
    }
}

/// Closure condition on a family of classes: whenever elementary abelian
/// `p`-groups are present, so is every simple power whose multiplier is
/// divisible by `p`.
pub fn class_check(classes: &[ClassDescriptor], table: &MultiplierTable) -> bool {
    classes.iter().all(|c| match c {
        ClassDescriptor::ElemAbelian { p } => table
            .entries
            .iter()
            .filter(|(_, m)| *m % p == 0)
            .all(|(s, _)| classes.contains(&ClassDescriptor::SimplePower { simple_order: *s })),
        ClassDescriptor::SimplePower { .. } => true,
    })
}

/// Whether `q` belongs to the class `c`. Simple powers at orders where the
/// order does not determine the simple group are reported as unidentified.
pub fn membership(q: &FiniteGroup, c: &ClassDescriptor) -> Result<bool> {
    let cls = char_simple_classification(q)?;
    Ok(match (c, cls) {
        (ClassDescriptor::ElemAbelian { p }, CharSimple::ElemAbelian { p: q, .. }) => *p == q,
        (
            ClassDescriptor::SimplePower { simple_order },
            CharSimple::SimplePower {
                simple_order: s,
                ambiguous,
                ..
            },
        ) => {
            if *simple_order == s && ambiguous {
                return Err(Error::Unidentified(s));
            }
            *simple_order == s
        }
        _ => false,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpschOutcome {
    pub p: u64,
    /// every chief factor of exponent `p` is central
    pub hypothesis_central: bool,
    /// `p` divides the multiplier of no nonabelian composition factor
    pub hypothesis_multiplier: bool,
    /// `O^p(G)` has no composition factor of order `p`
    pub conclusion: bool,
    pub op_upper_order: u128,
    pub nonabelian_factor_orders: Vec<u128>,
}

impl OpschOutcome {
    /// Both hypotheses hold and the conclusion fails. This never happens for
    /// a correct implementation.
    pub fn violates_lemma(&self) -> bool {
        self.hypothesis_central && self.hypothesis_multiplier && !self.conclusion
    }

    /// A hypothesis fails and so does the conclusion: the hypothesis was needed.
    pub fn necessity_witness(&self) -> bool {
        !(self.hypothesis_central && self.hypothesis_multiplier) && !self.conclusion
    }
}

pub fn opsch_experiment(g: &FiniteGroup, p: u64, table: &MultiplierTable) -> Result<OpschOutcome> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut hypothesis_central = true;
    for f in all_chief_factors(g)? {
        if let CharSimple::ElemAbelian { p: q, .. } = f.classification()? {
            if q == p && !factor_centralizer(&f)?.is_whole() {
                hypothesis_central = false;
                break;
            }
        }
    }
    let mut nonabelian_factor_orders = Vec::new();
    let mut hypothesis_multiplier = true;
    for f in chief_series(g)? {
        if let CharSimple::SimplePower {
            simple_order,
            ambiguous,
            ..
        } = f.classification()?
        {
            if ambiguous {
                return Err(Error::Unidentified(simple_order));
            }
            nonabelian_factor_orders.push(simple_order);
            if table.multiplier(simple_order)? % p == 0 {
                hypothesis_multiplier = false;
            }
        }
    }
    let op = op_upper(g, p)?;
    let mut conclusion = true;
    for f in chief_series(op.group())? {
        if let CharSimple::ElemAbelian { p: q, .. } = f.classification()? {
            if q == p {
                conclusion = false;
            }
        }
    }
    Ok(OpschOutcome {
        p,
        hypothesis_central,
        hypothesis_multiplier,
        conclusion,
        op_upper_order: op.order(),
        nonabelian_factor_orders,
    })
}
