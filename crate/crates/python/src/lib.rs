//! Python bindings: permutation groups, normal lattices, chief series,
//! tower builders and verifiers. Reports cross the boundary as plain dicts.

use jitower_core::actions::{is_subprimitive, GroupAction, SubprimitivityMethod};
use jitower_core::builders::{build_cyclic_tower, build_wreath_tower, chain_construct, wilson_relabel};
use jitower_core::chief::{chief_series, nar_precedes, ChiefFactor};
use jitower_core::io::{ChiefFactorFile, GroupFile, TowerFile};
use jitower_core::lattice::{abstract_melnikov, normal_subgroups, relative_melnikov};
use jitower_core::towers::{self, ClassDescriptor, Criteria, VerifyOptions};
use jitower_core::{corpus, Caps, FiniteGroup, Permutation};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn perms(lists: Vec<Vec<u32>>) -> PyResult<Vec<Permutation>> {
    lists.into_iter().map(|l| Permutation::from_images(l).map_err(err)).collect()
}

fn images(ps: &[Permutation]) -> Vec<Vec<u32>> {
    ps.iter().map(|p| p.images().to_vec()).collect()
}

fn to_py<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A permutation group on `0..degree`, generated by image lists.
#[pyclass(frozen, skip_from_py_object, module = "jitower")]
#[derive(Clone)]
struct Group(FiniteGroup);

#[pymethods]
impl Group {
    #[new]
    fn new(degree: usize, generators: Vec<Vec<u32>>) -> PyResult<Self> {
        FiniteGroup::new(degree, perms(generators)?).map(Group).map_err(err)
    }

    /// `cyclic`, `symmetric`, `alternating`, `dihedral` take `n`;
    /// `klein`, `quaternion`, `sl25`, `c2wrc2`, `a5wrc2` take none.
    #[staticmethod]
    #[pyo3(signature = (name, n = 0))]
    fn named(name: &str, n: usize) -> PyResult<Self> {
        let needs_n = |lo: usize| if n >= lo { Ok(()) } else { Err(err(format!("{name} needs n >= {lo}"))) };
        Ok(Group(match name {
            "cyclic" => {
                needs_n(1)?;
                corpus::cyclic(n)
            }
            "symmetric" => {
                needs_n(1)?;
                corpus::symmetric(n)
            }
            "alternating" => {
                needs_n(3)?;
                corpus::alternating(n)
            }
            "dihedral" => {
                needs_n(3)?;
                corpus::dihedral(n)
            }
            "klein" => corpus::klein(),
            "quaternion" => corpus::quaternion(),
            "sl25" => corpus::sl2_5(),
            "c2wrc2" => corpus::c2_wr_c2(),
            "a5wrc2" => corpus::a5_wr_c2(),
            _ => return Err(err(format!("unknown group {name:?}"))),
        }))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        jitower_core::io::read_group(text, Caps::default()).map(Group).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&GroupFile::of(&self.0)).map_err(err)
    }

    #[getter]
    fn order(&self) -> u128 {
        self.0.order()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    #[getter]
    fn generators(&self) -> Vec<Vec<u32>> {
        images(self.0.generators())
    }

    fn contains(&self, images: Vec<u32>) -> PyResult<bool> {
        Ok(self.0.contains(&Permutation::from_images(images).map_err(err)?))
    }

    fn subgroup(&self, generators: Vec<Vec<u32>>) -> PyResult<Subgroup> {
        self.0.subgroup(perms(generators)?).map(Subgroup).map_err(err)
    }

    fn normal_subgroups(&self) -> PyResult<Vec<Subgroup>> {
        let lat = normal_subgroups(&self.0).map_err(err)?;
        Ok(lat.members().iter().cloned().map(Subgroup).collect())
    }

    /// The chief series from the top, one factor `(K, L)` per step.
    fn chief_series(&self) -> PyResult<Vec<Factor>> {
        Ok(chief_series(&self.0).map_err(err)?.into_iter().map(Factor).collect())
    }

    fn __repr__(&self) -> String {
        format!("Group(order={}, degree={})", self.0.order(), self.0.degree())
    }
}

#[pyclass(frozen, skip_from_py_object, module = "jitower")]
#[derive(Clone)]
struct Subgroup(jitower_core::Subgroup);

#[pymethods]
impl Subgroup {
    #[getter]
    fn order(&self) -> u128 {
        self.0.order()
    }

    #[getter]
    fn generators(&self) -> Vec<Vec<u32>> {
        images(self.0.generators())
    }

    fn is_normal(&self) -> bool {
        self.0.is_normal()
    }

    fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.0.is_subgroup_of(&other.0)
    }

    /// Intersection of the maximal normal subgroups of the subgroup itself.
    fn melnikov(&self) -> PyResult<Subgroup> {
        abstract_melnikov(&self.0).map(Subgroup).map_err(err)
    }

    /// Intersection of the ambient normal subgroups maximal below this one.
    fn relative_melnikov(&self) -> PyResult<Subgroup> {
        relative_melnikov(&self.0).map(Subgroup).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Subgroup(order={})", self.0.order())
    }
}

/// A chief factor `K/L`.
#[pyclass(frozen, skip_from_py_object, module = "jitower")]
#[derive(Clone)]
struct Factor(ChiefFactor);

#[pymethods]
impl Factor {
    #[new]
    fn new(k: &Subgroup, l: &Subgroup) -> PyResult<Self> {
        ChiefFactor::new(&k.0, &l.0).map(Factor).map_err(err)
    }

    #[getter]
    fn order(&self) -> u128 {
        self.0.order()
    }

    #[getter]
    fn upper(&self) -> Subgroup {
        Subgroup(self.0.upper().clone())
    }

    #[getter]
    fn lower(&self) -> Subgroup {
        Subgroup(self.0.lower().clone())
    }

    fn classification(&self) -> PyResult<String> {
        Ok(self.0.classification().map_err(err)?.to_string())
    }

    fn is_central(&self) -> PyResult<bool> {
        self.0.is_central().map_err(err)
    }

    fn nar_precedes(&self, other: &Factor) -> PyResult<bool> {
        nar_precedes(&self.0, &other.0).map_err(err)
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &ChiefFactorFile::of(&self.0).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("Factor(|K| = {}, |L| = {})", self.0.upper().order(), self.0.lower().order())
    }
}

/// An inverse system `G_1 <- G_2 <- ...` with optional designated subgroups.
#[pyclass(frozen, skip_from_py_object, module = "jitower")]
#[derive(Clone)]
struct Tower(towers::Tower);

#[pymethods]
impl Tower {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        jitower_core::io::read_tower(text, Caps::default()).map(Tower).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&TowerFile::of(&self.0)).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (p, levels, start = 2))]
    fn cyclic(p: u64, levels: usize, start: u32) -> PyResult<Self> {
        build_cyclic_tower(p, levels, start).map(Tower).map_err(err)
    }

    #[staticmethod]
    fn wreath(bottom: &Group, levels: usize) -> PyResult<Self> {
        build_wreath_tower(&bottom.0, levels).map(Tower).map_err(err)
    }

    /// The tower of quotients along a chief series of `g`.
    #[staticmethod]
    fn chain(g: &Group) -> PyResult<Self> {
        chain_construct(&g.0).map(Tower).map_err(err)
    }

    fn wilson_relabel(&self) -> PyResult<Tower> {
        wilson_relabel(&self.0).map(Tower).map_err(err)
    }

    /// Designate `A_n` for each level; `None` leaves a level undesignated.
    fn with_designated(&self, designated: Vec<Option<Vec<Vec<u32>>>>) -> PyResult<Tower> {
        let subs = self
            .0
            .levels()
            .iter()
            .zip(designated)
            .map(|(g, d)| d.map(|gens| g.subgroup(perms(gens)?).map_err(err)).transpose())
            .collect::<PyResult<Vec<_>>>()?;
        self.0.with_designated(subs).map(Tower).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    /// Level `n`, counted from 1.
    fn level(&self, n: usize) -> PyResult<Group> {
        if n == 0 || n > self.0.len() {
            return Err(err(format!("level {n} out of range 1..={}", self.0.len())));
        }
        Ok(Group(self.0.level(n).clone()))
    }

    #[getter]
    fn orders(&self) -> Vec<u128> {
        self.0.levels().iter().map(|g| g.order()).collect()
    }

    /// Runs one verifier and returns the report as a dict with `exit_code`.
    #[pyo3(signature = (criteria, classes = Vec::new(), require_centralizer = false))]
    fn verify<'py>(
        &self,
        py: Python<'py>,
        criteria: &str,
        classes: Vec<String>,
        require_centralizer: bool,
    ) -> PyResult<Bound<'py, PyAny>> {
        let criteria: Criteria = criteria.parse().map_err(err)?;
        let classes = classes
            .iter()
            .map(|c| c.parse::<ClassDescriptor>().map_err(err))
            .collect::<PyResult<Vec<_>>>()?;
        let opts = VerifyOptions { classes, require_centralizer, ..VerifyOptions::default() };
        let report = py.detach(|| towers::verify(&self.0, criteria, &opts));
        let out = to_py(py, &report)?;
        out.set_item("exit_code", report.exit_code())?;
        Ok(out)
    }

    fn __repr__(&self) -> String {
        format!("Tower(orders={:?})", self.orders())
    }
}

/// Whether the action given by generator images is subprimitive, checked by
/// `method` (`"def13"` for the orbit-kernel form, `"lemma62"` for the
/// subnormal form).
#[pyfunction]
#[pyo3(signature = (group, degree, generator_images, method = "def13"))]
fn subprimitive(group: &Group, degree: usize, generator_images: Vec<Vec<u32>>, method: &str) -> PyResult<bool> {
    let method = match method {
        "def13" => SubprimitivityMethod::Def13,
        "lemma62" => SubprimitivityMethod::Lemma62,
        _ => return Err(err(format!("unknown method {method:?}"))),
    };
    let action = GroupAction::new(&group.0, degree, perms(generator_images)?).map_err(err)?;
    is_subprimitive(&action, method).map_err(err)
}

#[pymodule]
pub fn jitower(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Group>()?;
    m.add_class::<Subgroup>()?;
    m.add_class::<Factor>()?;
    m.add_class::<Tower>()?;
    m.add_function(wrap_pyfunction!(subprimitive, m)?)?;
    Ok(())
}
