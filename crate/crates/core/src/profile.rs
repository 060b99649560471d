//! Incremental tracking of the largest unions of at most `j` members.

/// For each level `j` in `1..=depth`, an antichain (under inclusion) of the
/// maximal unions of at most `j` members of the tracked family.
///
/// Two insertion modes share the same levels. [`UnionProfile::insert`] keeps
/// every level an exact antichain. [`UnionProfile::insert_scoped`] only skips
/// dominated newcomers so that [`UnionProfile::rollback`] can undo it by
/// truncation; levels may then hold dominated masks, which never changes any
/// query answer.
#[derive(Clone, Debug)]
pub struct UnionProfile {
    levels: Vec<Vec<u64>>,
    members: usize,
    scratch: Vec<u64>,
}

/// Saved level lengths for [`UnionProfile::rollback`].
#[derive(Clone, Debug)]
pub struct ProfileMark {
    lens: Vec<usize>,
    members: usize,
}

#[inline]
fn dominated(level: &[u64], m: u64) -> bool {
    level.iter().any(|&x| m & !x == 0)
}

impl UnionProfile {
    pub fn new(depth: usize) -> Self {
        assert!(depth >= 1, "profile depth must be at least 1");
        UnionProfile {
            levels: vec![Vec::new(); depth],
            members: 0,
            scratch: Vec::new(),
        }
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn members(&self) -> usize {
        self.members
    }

    /// Maximal unions of at most `j` members (1-based level).
    pub fn level(&self, j: usize) -> &[u64] {
        &self.levels[j - 1]
    }

    /// Largest union size at level `j`; 0 for an empty family.
    pub fn max_popcount(&self, j: usize) -> u32 {
        self.levels[j - 1].iter().map(|m| m.count_ones()).max().unwrap_or(0)
    }

    /// Largest union of a set `f` with at most `j` tracked members.
    pub fn max_with(&self, f: u64, j: usize) -> u32 {
        if j == 0 {
            return f.count_ones();
        }
        self.levels[j - 1]
            .iter()
            .map(|m| (m | f).count_ones())
            .max()
            .unwrap_or(f.count_ones())
    }

    fn new_unions(&mut self, f: u64, j: usize) {
        // Unions containing f with at most j members: f ∪ (≤ j-1 old members).
        self.scratch.clear();
        if j == 1 {
            self.scratch.push(f);
        } else {
            self.scratch.push(f);
            for &m in &self.levels[j - 2] {
                self.scratch.push(m | f);
            }
        }
    }

    /// Adds a member, keeping each level an antichain.
    pub fn insert(&mut self, f: u64) {
        for j in (1..=self.levels.len()).rev() {
            self.new_unions(f, j);
            let scratch = std::mem::take(&mut self.scratch);
            for &u in &scratch {
                let lvl = &mut self.levels[j - 1];
                if dominated(lvl, u) {
                    continue;
                }
                lvl.retain(|&x| x & !u != 0);
                lvl.push(u);
            }
            self.scratch = scratch;
        }
        self.members += 1;
    }

    pub fn mark(&self) -> ProfileMark {
        ProfileMark {
            lens: self.levels.iter().map(Vec::len).collect(),
            members: self.members,
        }
    }

    /// Adds a member without evicting dominated masks. Calls `on_top` with
    /// each mask newly stored at the top level.
    pub fn insert_scoped(&mut self, f: u64, mut on_top: impl FnMut(u64)) {
        let depth = self.levels.len();
        for j in (1..=depth).rev() {
            self.new_unions(f, j);
            let scratch = std::mem::take(&mut self.scratch);
            for &u in &scratch {
                let lvl = &mut self.levels[j - 1];
                if dominated(lvl, u) {
                    continue;
                }
                lvl.push(u);
                if j == depth {
                    on_top(u);
                }
            }
            self.scratch = scratch;
        }
        self.members += 1;
    }

    pub fn rollback(&mut self, mark: &ProfileMark) {
        for (lvl, &len) in self.levels.iter_mut().zip(&mark.lens) {
            lvl.truncate(len);
        }
        self.members = mark.members;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_one_is_member_antichain() {
        let mut p = UnionProfile::new(2);
        p.insert(0b0011);
        p.insert(0b0110);
        p.insert(0b0011);
        let mut l1 = p.level(1).to_vec();
        l1.sort();
        assert_eq!(l1, vec![0b0011, 0b0110]);
        assert_eq!(p.max_popcount(2), 3);
        assert_eq!(p.max_with(0b1000, 1), 3);
    }

    #[test]
    fn scoped_rollback_restores() {
        let mut p = UnionProfile::new(2);
        p.insert(0b0011);
        let before: Vec<Vec<u64>> = (1..=2).map(|j| p.level(j).to_vec()).collect();
        let mark = p.mark();
        let mut tops = Vec::new();
        p.insert_scoped(0b1100, |m| tops.push(m));
        assert_eq!(tops, vec![0b1100, 0b1111]);
        assert_eq!(p.max_popcount(2), 4);
        p.rollback(&mark);
        let after: Vec<Vec<u64>> = (1..=2).map(|j| p.level(j).to_vec()).collect();
        assert_eq!(before, after);
        assert_eq!(p.members(), 1);
    }
}
