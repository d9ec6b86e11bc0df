//! Inverse systems of finite groups and level-by-level verifiers.

mod admissible;
mod classes;
mod report;
mod tower;
mod verify;

pub use admissible::{find_admissible_a, ADMISSIBLE_SEARCH_CAP};
pub use classes::{class_check, membership, opsch_experiment, ClassDescriptor, MultiplierTable, OpschOutcome};
pub use report::{Check, Condition, LevelReport, SkipKind, Status, Summary, Verdict, VerificationReport, Witness};
pub use tower::Tower;
pub use verify::{
    primhji_level_conditions, semisimple_factor_conditions, tower_validate, verify, verify_hji,
    verify_ji_basic, verify_ji_chief, verify_pro_p, verify_primhji, verify_wilson, Criteria, VerifyOptions,
};
