//! JSON file formats for groups, actions, towers and chief series.
//!
//! Permutations are 0-based image lists. Tower files number levels from 1:
//! `maps[i]` sends the generators of level `i + 2` into level `i + 1`.

use serde::{Deserialize, Serialize};

use crate::actions::GroupAction;
use crate::chief::ChiefFactor;
use crate::error::{Error, Result};
use crate::group::{Caps, FiniteGroup};
use crate::hom::GroupHom;
use crate::perm::Permutation;
use crate::structure::CharSimple;
use crate::subgroup::Subgroup;
use crate::towers::Tower;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    pub degree: usize,
    pub generators: Vec<Vec<u32>>,
}

impl GroupFile {
    pub fn of(g: &FiniteGroup) -> Self {
        GroupFile {
            degree: g.degree(),
            generators: images_of(g.generators()),
        }
    }

    pub fn build(&self, caps: Caps) -> Result<FiniteGroup> {
        FiniteGroup::with_caps(self.degree, perms(&self.generators, self.degree)?, caps)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionFile {
    pub group: GroupFile,
    pub degree: usize,
    pub generator_images: Vec<Vec<u32>>,
}

impl ActionFile {
    pub fn of(a: &GroupAction) -> Self {
        ActionFile {
            group: GroupFile::of(a.group()),
            degree: a.degree(),
            generator_images: images_of(a.images()),
        }
    }

    pub fn build(&self, caps: Caps) -> Result<GroupAction> {
        let g = self.group.build(caps)?;
        GroupAction::new(&g, self.degree, perms(&self.generator_images, self.degree)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelFile {
    pub degree: usize,
    pub generators: Vec<Vec<u32>>,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub designated: Option<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFile {
    pub images: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TowerFile {
    pub levels: Vec<LevelFile>,
    pub maps: Vec<MapFile>,
    /// optional description of levels too large to materialize
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbolic: Option<serde_json::Value>,
}

impl TowerFile {
    pub fn of(t: &Tower) -> Self {
        let levels = t
            .levels()
            .iter()
            .zip(t.designated_all())
            .map(|(g, a)| LevelFile {
                degree: g.degree(),
                generators: images_of(g.generators()),
                designated: a.as_ref().map(|a| images_of(a.generators())),
            })
            .collect();
        let maps = t
            .maps()
            .iter()
            .map(|m| MapFile {
                images: images_of(m.images()),
            })
            .collect();
        TowerFile {
            levels,
            maps,
            symbolic: None,
        }
    }

    pub fn build(&self, caps: Caps) -> Result<Tower> {
        let groups = self
            .levels
            .iter()
            .map(|l| FiniteGroup::with_caps(l.degree, perms(&l.generators, l.degree)?, caps))
            .collect::<Result<Vec<_>>>()?;
        if self.maps.len() + 1 != groups.len() {
            return Err(Error::Structure(format!(
                "{} levels need {} maps, found {}",
                groups.len(),
                groups.len().saturating_sub(1),
                self.maps.len()
            )));
        }
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let target = &groups[i];
                GroupHom::new(&groups[i + 1], target, perms(&m.images, target.degree())?)
            })
            .collect::<Result<Vec<_>>>()?;
        let designated = self
            .levels
            .iter()
            .zip(&groups)
            .map(|(l, g)| match &l.designated {
                Some(gens) => Subgroup::new(g, perms(gens, g.degree())?).map(Some),
                None => Ok(None),
            })
            .collect::<Result<Vec<_>>>()?;
        Tower::new(groups, maps, designated)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiefFactorFile {
    pub order_k: u128,
    pub order_l: u128,
    pub classification: CharSimple,
    pub k: Vec<Vec<u32>>,
    pub l: Vec<Vec<u32>>,
}

impl ChiefFactorFile {
    pub fn of(f: &ChiefFactor) -> Result<Self> {
        Ok(ChiefFactorFile {
            order_k: f.upper().order(),
            order_l: f.lower().order(),
            classification: f.classification()?,
            k: images_of(f.upper().generators()),
            l: images_of(f.lower().generators()),
        })
    }
}

pub fn read_group(json: &str, caps: Caps) -> Result<FiniteGroup> {
    serde_json::from_str::<GroupFile>(json)?.build(caps)
}

pub fn read_tower(json: &str, caps: Caps) -> Result<Tower> {
    serde_json::from_str::<TowerFile>(json)?.build(caps)
}

pub fn read_action(json: &str, caps: Caps) -> Result<GroupAction> {
    serde_json::from_str::<ActionFile>(json)?.build(caps)
}

/// Generators of a subgroup file: a list of permutations in the ambient degree.
pub fn read_subgroup(json: &str, ambient: &FiniteGroup) -> Result<Subgroup> {
    let gens: Vec<Vec<u32>> = serde_json::from_str(json)?;
    Subgroup::new(ambient, perms(&gens, ambient.degree())?)
}

fn images_of(ps: &[Permutation]) -> Vec<Vec<u32>> {
    ps.iter().map(|p| p.images().to_vec()).collect()
}

fn perms(lists: &[Vec<u32>], degree: usize) -> Result<Vec<Permutation>> {
    lists
        .iter()
        .map(|l| {
            if l.len() != degree {
                return Err(Error::InconsistentDegree {
                    expected: degree,
                    found: l.len(),
                });
            }
            Permutation::from_images(l.clone())
        })
        .collect()
}
