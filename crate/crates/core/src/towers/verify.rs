use std::fmt;
use std::str::FromStr;

use crate::actions::{
    basal_decomposition, factor_permutation_action, subprimitivity, outer_quotient_soluble,
    SubprimitivityMethod,
};
use crate::error::{Error, Result};
use crate::group::{orbits_of, FiniteGroup};
use crate::lattice::{abstract_melnikov, melnikov, normal_subgroups, p_radicals, relative_melnikov};
use crate::structure::{char_simple_classification, is_prime};
use crate::subgroup::{centralizer_of, Subgroup};

use super::classes::{membership, ClassDescriptor, MultiplierTable};
use super::report::{Condition, LevelReport, SkipKind, VerificationReport, Witness};
use super::tower::Tower;

/// Which family of conditions to verify.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Criteria {
    /// narrowness conditions for just infinite limits
    Introthm,
    /// chief-factor conditions for just infinite limits
    Mainjithm,
    /// chief-factor conditions plus basal indecomposability
    Hji,
    /// kernel and basal conditions on consecutive maps
    Wilson,
    /// Frattini-of-`O_p` conditions for virtually pro-`p` limits
    ProP(u64),
    /// semisimple chief factors permuted subprimitively
    Primhji,
}

impl fmt::Display for Criteria {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Criteria::Introthm => write!(f, "introthm"),
            Criteria::Mainjithm => write!(f, "mainjithm"),
            Criteria::Hji => write!(f, "hji"),
            Criteria::Wilson => write!(f, "wilson"),
            Criteria::ProP(p) => write!(f, "pro-p:{p}"),
            Criteria::Primhji => write!(f, "primhji"),
        }
    }
}

impl FromStr for Criteria {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "introthm" => Criteria::Introthm,
            "mainjithm" => Criteria::Mainjithm,
            "hji" => Criteria::Hji,
            "wilson" => Criteria::Wilson,
            "primhji" => Criteria::Primhji,
            _ => {
                let p = s
                    .strip_prefix("pro-p:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| Error::InvalidParameters(format!("unknown criteria {s:?}")))?;
                if !is_prime(p) {
                    return Err(Error::NotPrime(p));
                }
                Criteria::ProP(p)
            }
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// `C_n` for level `n` is `classes[n - 1]`, the last entry repeating;
    /// empty means class membership is not checked.
    pub classes: Vec<ClassDescriptor>,
    pub require_centralizer: bool,
    pub table: MultiplierTable,
}

pub fn verify(t: &Tower, criteria: Criteria, opts: &VerifyOptions) -> VerificationReport {
    let mut report = match criteria {
        Criteria::Introthm => verify_ji_basic(t),
        Criteria::Mainjithm => verify_ji_chief(t, &opts.classes, opts.require_centralizer),
        Criteria::Hji => verify_hji(t, &opts.classes),
        Criteria::Wilson => verify_wilson(t),
        Criteria::ProP(p) => verify_pro_p(t, p),
        Criteria::Primhji => verify_primhji(t),
    };
    if matches!(criteria, Criteria::Mainjithm | Criteria::Hji) && !opts.classes.is_empty() {
        report.multiplier_table = Some(opts.table.version.clone());
    }
    report
}

enum Stop {
    Skip(SkipKind, String),
    Err(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Err(e)
    }
}

type Outcome = std::result::Result<Option<Witness>, Stop>;

fn cond(id: &str, description: &str, outcome: Outcome) -> Condition {
    match outcome {
        Ok(w) => Condition::from_check(id, description, Ok(w)),
        Err(Stop::Skip(kind, reason)) => Condition::skipped(id, description, kind, reason),
        Err(Stop::Err(e)) => Condition::from_check(id, description, Err(e)),
    }
}

fn fail(explanation: impl Into<String>, subgroups: &[&Subgroup]) -> Outcome {
    Ok(Some(Witness::with(explanation, subgroups)))
}

/// `a ≤ b`, for subgroups of a common group.
pub(crate) fn contained(a: &Subgroup, b: &Subgroup) -> bool {
    a.generators().iter().all(|x| b.contains(x))
}

fn same_subgroup(a: &Subgroup, b: &Subgroup) -> bool {
    a.order() == b.order() && contained(a, b)
}

fn designated(t: &Tower, n: usize) -> std::result::Result<&Subgroup, Stop> {
    t.designated(n)
        .ok_or_else(|| Stop::Skip(SkipKind::MissingInput, format!("A_{n} is not designated")))
}

fn kernel(t: &Tower, n: usize) -> std::result::Result<&Subgroup, Stop> {
    t.kernel(n).ok_or_else(|| {
        Stop::Skip(
            SkipKind::Boundary,
            format!("ρ_{n} is undefined: the tower has no level {}", n + 1),
        )
    })
}

/// `P_n`, skipping at the top level where it is undefined.
fn p_of(t: &Tower, n: usize) -> std::result::Result<Subgroup, Stop> {
    if n >= t.len() {
        return Err(Stop::Skip(
            SkipKind::Boundary,
            format!("P_{n} is undefined at the top level"),
        ));
    }
    designated(t, n + 1)?;
    Ok(t.p(n)?.expect("map and designated subgroup present"))
}

fn class_for(classes: &[ClassDescriptor], n: usize) -> Option<ClassDescriptor> {
    classes.get((n - 1).min(classes.len().saturating_sub(1))).copied()
}

// Individual conditions. Each returns `Ok(None)` on pass.

fn surjective(t: &Tower, n: usize) -> Outcome {
    let m = t.map(n).expect("called below the top");
    if m.is_surjective() {
        Ok(None)
    } else {
        fail(
            format!(
                "image of ρ_{n} has order {} but |G_{n}| = {}",
                m.image().order(),
                t.level(n).order()
            ),
            &[m.image()],
        )
    }
}

fn designated_normal(t: &Tower, n: usize) -> Outcome {
    let a = designated(t, n)?;
    if a.is_trivial() {
        return fail(format!("A_{n} is trivial"), &[]);
    }
    if !a.is_normal() {
        return fail(format!("A_{n} is not normal in G_{n}"), &[a]);
    }
    Ok(None)
}

fn strict_above_kernel(t: &Tower, n: usize) -> Outcome {
    let ker = kernel(t, n)?;
    let a = designated(t, n + 1)?;
    if !(contained(ker, a) && ker.order() < a.order()) {
        return fail(format!("A_{} is not strictly above ker ρ_{n}", n + 1), &[a, ker]);
    }
    kernel_above_p(t, n, ker)
}

fn kernel_above_p(t: &Tower, n: usize, ker: &Subgroup) -> Outcome {
    let p = p_of(t, n + 1)?;
    if !contained(&p, ker) {
        return fail(format!("P_{} is not contained in ker ρ_{n}", n + 1), &[&p, ker]);
    }
    Ok(None)
}

fn narrow(t: &Tower, n: usize) -> Outcome {
    let a = designated(t, n)?;
    if a.is_trivial() {
        return fail(format!("A_{n} is trivial"), &[]);
    }
    let nar = crate::lattice::is_narrow(t.level(n), a)?;
    if nar.narrow {
        Ok(None)
    } else {
        let subs: Vec<&Subgroup> = nar.maximal.iter().collect();
        fail(
            format!("A_{n} has {} maximal G_{n}-invariant subgroups", nar.maximal.len()),
            &subs,
        )
    }
}

/// Every normal subgroup of `g` contains `p` or lies in `a`.
fn dichotomy(g: &FiniteGroup, p: &Subgroup, a: &Subgroup, n: usize) -> Outcome {
    for m in normal_subgroups(g)?.members() {
        if !contained(p, m) && !contained(m, a) {
            return fail(
                format!("a normal subgroup of order {} neither contains P_{n} nor lies in A_{n}", m.order()),
                &[m],
            );
        }
    }
    Ok(None)
}

fn level_dichotomy(t: &Tower, n: usize) -> Outcome {
    let p = p_of(t, n)?;
    let a = designated(t, n)?;
    dichotomy(t.level(n), &p, a, n)
}

fn kernel_below_relative_melnikov(t: &Tower, n: usize) -> Outcome {
    let ker = kernel(t, n)?;
    let a = designated(t, n + 1)?;
    let m = relative_melnikov(a)?;
    if !contained(ker, &m) {
        return fail(
            format!("ker ρ_{n} is not contained in M_G(A_{})", n + 1),
            &[&m, ker],
        );
    }
    kernel_above_p(t, n, ker)
}

fn minimal_normal(t: &Tower, n: usize) -> Outcome {
    let p = p_of(t, n)?;
    if p.is_trivial() {
        return fail(format!("P_{n} is trivial"), &[]);
    }
    let g = t.level(n);
    let lat = normal_subgroups(g)?;
    let i = lat.require(&p.reambient(g))?;
    for j in lat.strictly_below(i) {
        let m = lat.member(j);
        if !m.is_trivial() {
            return fail(
                format!("a normal subgroup of order {} lies strictly between 1 and P_{n}", m.order()),
                &[m],
            );
        }
    }
    Ok(None)
}

fn in_class(t: &Tower, n: usize, classes: &[ClassDescriptor]) -> Outcome {
    let c = class_for(classes, n)
        .ok_or_else(|| Stop::Skip(SkipKind::NotRequested, "no classes given".into()))?;
    let p = p_of(t, n)?;
    if membership(p.group(), &c)? {
        Ok(None)
    } else {
        let cls = char_simple_classification(p.group())?;
        fail(format!("P_{n} is {cls:?}, not in class {c}"), &[&p])
    }
}

fn centralizer_below_a(g: &FiniteGroup, a: &Subgroup, p: &Subgroup, n: usize) -> Outcome {
    let c = centralizer_of(g, p.generators())?;
    if contained(&c, a) && c.order() < a.order() {
        Ok(None)
    } else {
        fail(format!("C(P_{n}) is not strictly contained in A_{n}"), &[&c, a])
    }
}

fn level_centralizer(t: &Tower, n: usize) -> Outcome {
    let p = p_of(t, n)?;
    let a = designated(t, n)?;
    centralizer_below_a(t.level(n), a, &p, n)
}

fn basal_indecomposable_above(t: &Tower, n: usize) -> Outcome {
    let a = designated(t, n)?;
    let g = t.level(n);
    for u in normal_subgroups(g)?.members() {
        if !contained(a, u) {
            continue;
        }
        if let Some(v) = basal_decomposition(g, u)? {
            return fail(
                format!(
                    "the normal subgroup of order {} is generated by the commuting conjugates of a subgroup of order {}",
                    u.order(),
                    v.order()
                ),
                &[u, &v],
            );
        }
    }
    Ok(None)
}

fn wilson_level(t: &Tower, n: usize, part: u8) -> Outcome {
    if n == 1 {
        return Err(Stop::Skip(
            SkipKind::Boundary,
            "the map below level 1 is not part of the tower".into(),
        ));
    }
    let k = kernel(t, n - 1)?;
    let g = t.level(n);
    for l in normal_subgroups(g)?.members() {
        if contained(l, k) {
            continue;
        }
        if part == 1 {
            if !contained(k, l) {
                return fail(
                    format!(
                        "a normal subgroup of order {} neither lies in nor contains the kernel",
                        l.order()
                    ),
                    &[l, k],
                );
            }
        } else if let Some(v) = basal_decomposition(g, l)? {
            return fail(
                format!(
                    "the normal subgroup of order {} is generated by the commuting conjugates of a subgroup of order {}",
                    l.order(),
                    v.order()
                ),
                &[l, &v],
            );
        }
    }
    Ok(None)
}

/// Checks on a semisimple `P ⊴ G`: `P` is a nontrivial product of nonabelian
/// simple groups, `G` permutes its simple factors subprimitively, and
/// `N_G(F)/F C_G(F)` is soluble for one factor `F` from each orbit.
pub fn semisimple_factor_conditions(g: &FiniteGroup, p: &Subgroup) -> Result<Option<Witness>> {
    if p.is_trivial() {
        return Ok(Some(Witness::text("P is trivial")));
    }
    let p = p.reambient(g);
    let plat = normal_subgroups(p.group())?;
    let minimal = plat.minimal_normal();
    let mut product = 1u128;
    for &i in &minimal {
        let f = plat.member(i);
        if f.group().is_abelian() || normal_subgroups(f.group())?.len() != 2 {
            return Ok(Some(Witness::with(
                "P is not a direct product of nonabelian simple groups",
                &[&f.reambient(g)],
            )));
        }
        product = product.saturating_mul(f.order());
    }
    if product != p.order() {
        return Ok(Some(Witness::with(
            "the minimal normal subgroups of P do not form a direct decomposition",
            &[&p],
        )));
    }
    let (action, factors) = factor_permutation_action(g, &p)?;
    let sp = subprimitivity(&action, SubprimitivityMethod::Def13)?;
    if !sp.holds {
        let h = sp.witness.expect("failure carries a witness");
        return Ok(Some(Witness::with(
            format!(
                "conjugation on the {} simple factors is not subprimitive; a normal subgroup of order {} acts unfaithfully on one of its orbits",
                factors.len(),
                h.order()
            ),
            &[&h],
        )));
    }
    for orbit in orbits_of(action.degree(), action.images()) {
        let f = &factors[orbit[0] as usize];
        if !outer_quotient_soluble(g, f)? {
            return Ok(Some(Witness::with("N(F)/F C(F) is insoluble for a simple factor F", &[f])));
        }
    }
    Ok(None)
}

fn abstract_melnikov_is_kernel(t: &Tower, n: usize) -> Outcome {
    let ker = kernel(t, n)?;
    let a = designated(t, n + 1)?;
    if a.is_trivial() {
        return fail(format!("A_{} is trivial", n + 1), &[]);
    }
    let m = abstract_melnikov(a)?;
    if !same_subgroup(&m, ker) {
        return fail(
            format!(
                "M(A_{}) has order {} but ker ρ_{n} has order {}",
                n + 1,
                m.order(),
                ker.order()
            ),
            &[&m, ker],
        );
    }
    kernel_above_p(t, n, ker)
}

// Verifiers.

struct Builder<'a> {
    t: &'a Tower,
    levels: Vec<LevelReport>,
}

impl<'a> Builder<'a> {
    fn new(t: &'a Tower) -> Self {
        Builder {
            t,
            levels: (1..=t.len())
                .map(|n| LevelReport {
                    n,
                    conditions: Vec::new(),
                })
                .collect(),
        }
    }

    fn add(&mut self, n: usize, id: &str, description: &str, outcome: Outcome) {
        self.levels[n - 1].conditions.push(cond(id, description, outcome));
    }

    fn each(&mut self, id: &str, description: &str, f: impl Fn(&Tower, usize) -> Outcome) {
        for n in 1..=self.t.len() {
            let o = f(self.t, n);
            self.add(n, id, description, o);
        }
    }

    fn structure(&mut self, with_designated: bool) {
        for n in 1..self.t.len() {
            let o = surjective(self.t, n);
            self.add(n, "tower.surjective", "ρ_n: G_{n+1} → G_n is surjective", o);
        }
        if with_designated {
            self.each(
                "tower.designated",
                "A_n is a nontrivial normal subgroup of G_n",
                designated_normal,
            );
        }
    }

    fn finish(self, criteria: &str) -> VerificationReport {
        VerificationReport::new(criteria, self.levels)
    }
}

/// Validity of the maps and designated subgroups.
pub fn tower_validate(t: &Tower) -> VerificationReport {
    let mut b = Builder::new(t);
    b.structure(false);
    b.each("tower.designated", "A_n is a nontrivial normal subgroup of G_n", |t, n| {
        if t.designated(n).is_none() {
            return Err(Stop::Skip(SkipKind::NotRequested, format!("A_{n} is not designated")));
        }
        designated_normal(t, n)
    });
    b.finish("validate")
}

/// Narrowness conditions whose validity at every level makes the limit just infinite.
pub fn verify_ji_basic(t: &Tower) -> VerificationReport {
    let mut b = Builder::new(t);
    b.structure(true);
    b.each("introthm.i", "A_{n+1} > ker ρ_n ≥ P_{n+1}", strict_above_kernel);
    b.each("introthm.ii", "A_n has a unique maximal G_n-invariant subgroup", narrow);
    b.each(
        "introthm.iii",
        "each normal subgroup of G_n contains P_n or lies in A_n",
        level_dichotomy,
    );
    b.finish("introthm")
}

fn chief_conditions(b: &mut Builder, prefix: &str, classes: &[ClassDescriptor]) {
    b.each(
        &format!("{prefix}.i"),
        "M_{G_{n+1}}(A_{n+1}) ≥ ker ρ_n ≥ P_{n+1}",
        kernel_below_relative_melnikov,
    );
    b.each(
        &format!("{prefix}.ii"),
        "each normal subgroup of G_n contains P_n or lies in A_n",
        level_dichotomy,
    );
    b.each(
        &format!("{prefix}.iii"),
        "P_n is a minimal normal subgroup of G_n",
        minimal_normal,
    );
    b.each(&format!("{prefix}.iv"), "P_n lies in the class C_n", |t, n| {
        in_class(t, n, classes)
    });
}

/// Chief-factor conditions; with `require_centralizer`, also `C_{G_n}(P_n) < A_n`.
pub fn verify_ji_chief(t: &Tower, classes: &[ClassDescriptor], require_centralizer: bool) -> VerificationReport {
    let mut b = Builder::new(t);
    b.structure(true);
    chief_conditions(&mut b, "mainjithm", classes);
    b.each("mainjithm.centralizer", "C_{G_n}(P_n) < A_n", |t, n| {
        if !require_centralizer {
            return Err(Stop::Skip(SkipKind::NotRequested, "centralizer condition not requested".into()));
        }
        level_centralizer(t, n)
    });
    b.finish("mainjithm")
}

/// Chief-factor conditions plus basal central indecomposability of every
/// normal subgroup containing `A_n`.
pub fn verify_hji(t: &Tower, classes: &[ClassDescriptor]) -> VerificationReport {
    let mut b = Builder::new(t);
    b.structure(true);
    chief_conditions(&mut b, "hji", classes);
    b.each(
        "hji.v",
        "every normal subgroup of G_n containing A_n is basally centrally indecomposable",
        basal_indecomposable_above,
    );
    b.finish("hji")
}

/// Conditions on `K_n = ker(G_n → G_{n-1})`: every normal `L ≰ K_n` satisfies
/// `K_n < L` and has no proper subgroup whose distinct conjugates commute and generate `L`.
pub fn verify_wilson(t: &Tower) -> VerificationReport {
    let mut b = Builder::new(t);
    b.structure(false);
    b.each(
        "wilson.i",
        "every normal L not below K_n properly contains K_n",
        |t, n| wilson_level(t, n, 1),
    );
    b.each(
        "wilson.ii",
        "every normal L not below K_n is basally centrally indecomposable",
        |t, n| wilson_level(t, n, 2),
    );
    b.finish("wilson")
}

/// Conditions relative to `F_n = Φ(O_p(G_n))`.
pub fn verify_pro_p(t: &Tower, p: u64) -> VerificationReport {
    let mut b = Builder::new(t);
    b.structure(false);
    let fs: Vec<Result<Subgroup>> = (1..=t.len())
        .map(|n| Ok(p_radicals(t.level(n), p)?.frattini_of_op))
        .collect();
    let f = |n: usize| -> std::result::Result<Subgroup, Stop> {
        fs[n - 1].clone().map_err(Stop::Err)
    };
    for n in 1..=t.len() {
        let o = (|| {
            let a = designated(t, n)?;
            let fl = f(n)?;
            if a.is_trivial() {
                return fail(format!("A_{n} is trivial"), &[]);
            }
            if !contained(a, &fl) || !a.is_normalized_by(fl.generators()) {
                return fail(format!("A_{n} is not a normal subgroup of F_{n}"), &[a, &fl]);
            }
            Ok(None)
        })();
        b.add(n, "pro-p.designated", "A_n is a nontrivial normal subgroup of F_n = Φ(O_p(G_n))", o);
    }
    for n in 1..=t.len() {
        let o = (|| {
            let ker = kernel(t, n)?;
            let a = designated(t, n + 1)?;
            let fl = f(n + 1)?;
            let m = melnikov(&a.reambient(fl.group()), Some(fl.group()))?;
            if !contained(ker, &m) {
                return fail(format!("ker ρ_{n} is not contained in M_F(A_{})", n + 1), &[&m, ker]);
            }
            kernel_above_p(t, n, ker)
        })();
        b.add(n, "pro-p.i", "M_{F_{n+1}}(A_{n+1}) ≥ ker ρ_n ≥ P_{n+1}", o);
    }
    for n in 1..=t.len() {
        let o = (|| {
            let pn = p_of(t, n)?;
            let a = designated(t, n)?;
            let fl = f(n)?;
            dichotomy(fl.group(), &pn.reambient(fl.group()), &a.reambient(fl.group()), n)
        })();
        b.add(n, "pro-p.ii", "each normal subgroup of F_n contains P_n or lies in A_n", o);
    }
    for n in 1..=t.len() {
        let o = (|| {
            let m = t.map(n).ok_or_else(|| {
                Stop::Skip(SkipKind::Boundary, format!("ρ_{n} is undefined at the top level"))
            })?;
            let pre = m.preimage(&f(n)?)?;
            let upper = f(n + 1)?;
            if same_subgroup(&pre, &upper) {
                Ok(None)
            } else {
                fail(
                    format!(
                        "ρ_{n}^-1(F_{n}) has order {} but F_{} has order {}",
                        pre.order(),
                        n + 1,
                        upper.order()
                    ),
                    &[&pre, &upper],
                )
            }
        })();
        b.add(n, "pro-p.iii", "F_{n+1} = ρ_n^-1(F_n)", o);
    }
    let o = (|| {
        let g1 = t.level(1);
        let f1 = f(1)?;
        let lat = normal_subgroups(g1)?;
        for i in lat.minimal_normal() {
            let m = lat.member(i);
            if !contained(m, &f1) {
                return fail(
                    format!("a minimal normal subgroup of G_1 of order {} is not in F_1", m.order()),
                    &[m, &f1],
                );
            }
        }
        Ok(None)
    })();
    b.add(1, "pro-p.iv", "every minimal normal subgroup of G_1 lies in F_1", o);
    b.finish(&format!("pro-p:{p}"))
}

/// Conditions for limits that are hereditarily just infinite and not virtually prosoluble.
pub fn verify_primhji(t: &Tower) -> VerificationReport {
    let mut b = Builder::new(t);
    b.structure(false);
    b.each("tower.designated", "A_n is a normal subgroup of G_n", |t, n| {
        let a = designated(t, n)?;
        if a.is_normal() {
            Ok(None)
        } else {
            fail(format!("A_{n} is not normal in G_{n}"), &[a])
        }
    });
    b.each("primhji.i", "M(A_{n+1}) = ker ρ_n ≥ P_{n+1}", abstract_melnikov_is_kernel);
    b.each("primhji.ii", "A_n > C_{G_n}(P_n)", level_centralizer);
    b.each(
        "primhji.iii",
        "P_n is a product of nonabelian simple groups permuted subprimitively, with soluble outer quotients",
        |t, n| {
            let p = p_of(t, n)?;
            Ok(semisimple_factor_conditions(t.level(n), &p)?)
        },
    );
    b.finish("primhji")
}

/// The level-local conditions `A > C_G(P)` and the semisimple factor
/// conditions on `P`, for a single group with given `A` and `P`.
pub fn primhji_level_conditions(g: &FiniteGroup, a: &Subgroup, p: &Subgroup) -> Vec<Condition> {
    let (a, p) = (a.reambient(g), p.reambient(g));
    vec![
        cond("primhji.ii", "A > C_G(P)", centralizer_below_a(g, &a, &p, 1)),
        Condition::from_check(
            "primhji.iii",
            "P is a product of nonabelian simple groups permuted subprimitively, with soluble outer quotients",
            semisimple_factor_conditions(g, &p),
        ),
    ]
}
