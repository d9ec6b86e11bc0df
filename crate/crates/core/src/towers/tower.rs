use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::hom::GroupHom;
use crate::subgroup::Subgroup;

/// A finite inverse system `G_1 <- G_2 <- ... <- G_N` with optional
/// designated normal subgroups `A_n`. Levels are numbered from 1.
#[derive(Clone, Debug)]
pub struct Tower {
    levels: Vec<FiniteGroup>,
    maps: Vec<GroupHom>,
    designated: Vec<Option<Subgroup>>,
}

impl Tower {
    /// `maps[i]` goes from `levels[i + 1]` to `levels[i]`. Surjectivity and
    /// normality are verdicts, not structural errors, so they are not checked here.
    pub fn new(
        levels: Vec<FiniteGroup>,
        maps: Vec<GroupHom>,
        designated: Vec<Option<Subgroup>>,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Structure("a tower needs at least one level".into()));
        }
        if maps.len() + 1 != levels.len() {
            return Err(Error::Structure(format!(
                "{} levels need {} maps, found {}",
                levels.len(),
                levels.len() - 1,
                maps.len()
            )));
        }
        for (i, m) in maps.iter().enumerate() {
            if !m.source().same_group(&levels[i + 1]) || !m.target().same_group(&levels[i]) {
                return Err(Error::Structure(format!(
                    "map {} does not go from level {} to level {}",
                    i + 1,
                    i + 2,
                    i + 1
                )));
            }
        }
        let mut t = Tower {
            levels,
            maps,
            designated: Vec::new(),
        };
        t.set_designated(designated)?;
        Ok(t)
    }

    fn set_designated(&mut self, designated: Vec<Option<Subgroup>>) -> Result<()> {
        if designated.len() > self.levels.len() {
            return Err(Error::Structure(format!(
                "{} designated subgroups for {} levels",
                designated.len(),
                self.levels.len()
            )));
        }
        let mut out = Vec::with_capacity(self.levels.len());
        for (i, g) in self.levels.iter().enumerate() {
            let a = match designated.get(i).cloned().flatten() {
                Some(a) => {
                    if a.degree() != g.degree() || !a.generators().iter().all(|x| g.contains(x)) {
                        return Err(Error::Structure(format!(
                            "designated subgroup at level {} is not a subgroup of the level",
                            i + 1
                        )));
                    }
                    Some(a.reambient(g))
                }
                None => None,
            };
            out.push(a);
        }
        self.designated = out;
        Ok(())
    }

    pub fn with_designated(&self, designated: Vec<Option<Subgroup>>) -> Result<Tower> {
        let mut t = self.clone();
        t.set_designated(designated)?;
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn levels(&self) -> &[FiniteGroup] {
        &self.levels
    }

    pub fn maps(&self) -> &[GroupHom] {
        &self.maps
    }

    pub fn designated_all(&self) -> &[Option<Subgroup>] {
        &self.designated
    }

    /// `G_n`
    pub fn level(&self, n: usize) -> &FiniteGroup {
        &self.levels[n - 1]
    }

    /// `ρ_n: G_{n+1} -> G_n`, for `1 <= n < N`.
    pub fn map(&self, n: usize) -> Option<&GroupHom> {
        n.checked_sub(1).and_then(|i| self.maps.get(i))
    }

    /// `A_n`
    pub fn designated(&self, n: usize) -> Option<&Subgroup> {
        self.designated.get(n - 1).and_then(|a| a.as_ref())
    }

    /// `ker ρ_n`, a subgroup of `G_{n+1}`.
    pub fn kernel(&self, n: usize) -> Option<&Subgroup> {
        self.map(n).map(|m| m.kernel())
    }

    /// `P_n = ρ_n(A_{n+1})`; `None` at the top level or when `A_{n+1}` is absent.
    pub fn p(&self, n: usize) -> Result<Option<Subgroup>> {
        match (self.map(n), self.designated.get(n).and_then(|a| a.as_ref())) {
            (Some(m), Some(a)) => Ok(Some(m.map_subgroup(a)?)),
            _ => Ok(None),
        }
    }

    /// `ρ_n ∘ ... ∘ ρ_{m-1}: G_m -> G_n` for `n <= m`.
    pub fn composite(&self, n: usize, m: usize) -> Result<GroupHom> {
        if n == 0 || n > m || m > self.len() {
            return Err(Error::InvalidParameters(format!("no composite from level {m} to level {n}")));
        }
        let mut h = GroupHom::identity(self.level(m));
        for k in (n..m).rev() {
            h = h.then(self.map(k).expect("index in range"))?;
        }
        Ok(h)
    }
}
