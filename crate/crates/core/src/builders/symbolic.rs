use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

/// An exact natural number kept as an expression, for group orders too large
/// to write out (`60^(5^25)` and the like).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymExpr {
    Int(BigUint),
    Mul(Box<SymExpr>, Box<SymExpr>),
    Pow(Box<SymExpr>, Box<SymExpr>),
}

/// Values are expanded only up to this many bits.
pub const EXPANSION_BITS: u64 = 4096;

impl SymExpr {
    pub fn int(n: impl Into<BigUint>) -> Self {
        SymExpr::Int(n.into())
    }

    pub fn mul(a: SymExpr, b: SymExpr) -> Self {
        match (a.value(), b.value()) {
            (Some(x), Some(y)) if x.bits() + y.bits() <= EXPANSION_BITS => SymExpr::Int(x * y),
            _ => SymExpr::Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn pow(base: SymExpr, exp: SymExpr) -> Self {
        if let (Some(b), Some(e)) = (base.value(), exp.value()) {
            if let Some(e) = e.to_u64() {
                if b.is_one() || b.bits().saturating_mul(e) <= EXPANSION_BITS {
                    return SymExpr::Int(b.pow(e as u32));
                }
            }
        }
        SymExpr::Pow(Box::new(base), Box::new(exp))
    }

    /// The expanded value, when it is small enough to have been expanded.
    pub fn value(&self) -> Option<BigUint> {
        match self {
            SymExpr::Int(n) => Some(n.clone()),
            _ => None,
        }
    }

    pub fn to_u128(&self) -> Option<u128> {
        self.value().and_then(|v| v.to_u128())
    }

    /// `log2` of the value; infinite when it overflows an `f64`.
    pub fn log2(&self) -> f64 {
        match self {
            SymExpr::Int(n) => {
                let bits = n.bits();
                if bits <= 64 {
                    n.to_u64().map_or(0.0, |v| (v as f64).log2())
                } else {
                    let top = (n >> (bits - 53)).to_u64().unwrap_or(0) as f64;
                    top.log2() + (bits - 53) as f64
                }
            }
            SymExpr::Mul(a, b) => a.log2() + b.log2(),
            SymExpr::Pow(b, e) => b.log2() * 2f64.powf(e.log2()),
        }
    }
}

impl From<u128> for SymExpr {
    fn from(n: u128) -> Self {
        SymExpr::Int(BigUint::from(n))
    }
}

impl fmt::Display for SymExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymExpr::Int(n) => write!(f, "{n}"),
            SymExpr::Mul(a, b) => write!(f, "{a} * {b}"),
            SymExpr::Pow(b, e) => {
                let wrap = |x: &SymExpr| match x {
                    SymExpr::Int(_) => format!("{x}"),
                    _ => format!("({x})"),
                };
                write!(f, "{}^{}", wrap(b), wrap(e))
            }
        }
    }
}

impl Serialize for SymExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
