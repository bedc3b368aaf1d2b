//! Finite root data: Cartan matrices (Bourbaki numbering), roots and coroots.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "A" | "a" => Family::A,
            "B" | "b" => Family::B,
            "C" | "c" => Family::C,
            "D" | "d" => Family::D,
            "E" | "e" => Family::E,
            "F" | "f" => Family::F,
            "G" | "g" => Family::G,
            other => {
                return Err(Error::UnsupportedSystem {
                    kind: other.to_string(),
                    rank: 0,
                })
            }
        })
    }
}

/// A finite irreducible crystallographic type such as `A2` or `G2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteType {
    family: Family,
    rank: usize,
}

impl FiniteType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B => rank >= 3,
            Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if !ok {
            return Err(Error::UnsupportedSystem {
                kind: family.to_string(),
                rank,
            });
        }
        Ok(Self { family, rank })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `a[i][j] = <alpha_i^vee, alpha_j>`, indices from 0 for Bourbaki node 1.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let r = self.rank;
        let mut a = vec![vec![0i64; r]; r];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize| {
            a[i][j] = -1;
            a[j][i] = -1;
        };
        match self.family {
            Family::A | Family::B | Family::C => {
                for i in 0..r - 1 {
                    link(i, i + 1);
                }
            }
            Family::D => {
                for i in 0..r - 2 {
                    link(i, i + 1);
                }
                link(r - 3, r - 1);
            }
            Family::E => {
                link(0, 2);
                link(1, 3);
                for i in 2..r - 1 {
                    link(i, i + 1);
                }
            }
            Family::F => {
                for i in 0..3 {
                    link(i, i + 1);
                }
            }
            Family::G => link(0, 1),
        }
        match self.family {
            Family::B => a[r - 1][r - 2] = -2,
            Family::C => a[r - 2][r - 1] = -2,
            Family::F => a[2][1] = -2,
            Family::G => a[0][1] = -3,
            _ => {}
        }
        a
    }
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for FiniteType {
    type Err = Error;

    /// Parses `"A2"`, `"g2"` and similar.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let unsupported = || Error::UnsupportedSystem {
            kind: s.to_string(),
            rank: 0,
        };
        let family: Family = s.get(..1).ok_or_else(unsupported)?.parse()?;
        let rank = s[1..].parse().map_err(|_| unsupported())?;
        FiniteType::new(family, rank)
    }
}

/// Positive roots (simple-root coordinates) paired with their coroots
/// (simple-coroot coordinates).
#[derive(Debug, Clone)]
pub struct RootData {
    pub cartan: Vec<Vec<i64>>,
    pub pos_roots: Vec<Vec<i64>>,
    pub pos_coroots: Vec<Vec<i64>>,
    /// Index into `pos_roots` of the highest root.
    pub highest: usize,
}

impl RootData {
    pub fn new(cartan: Vec<Vec<i64>>) -> Self {
        let r = cartan.len();
        let unit = |i: usize| {
            let mut v = vec![0i64; r];
            v[i] = 1;
            v
        };
        // root -> coroot, generated as the orbit of the simple roots
        let mut seen: BTreeMap<Vec<i64>, Vec<i64>> = BTreeMap::new();
        let mut queue = VecDeque::new();
        for i in 0..r {
            seen.insert(unit(i), unit(i));
            queue.push_back((unit(i), unit(i)));
        }
        while let Some((root, coroot)) = queue.pop_front() {
            for i in 0..r {
                let c: i64 = (0..r).map(|j| root[j] * cartan[i][j]).sum();
                let d: i64 = (0..r).map(|j| coroot[j] * cartan[j][i]).sum();
                let mut nr = root.clone();
                nr[i] -= c;
                let mut nc = coroot.clone();
                nc[i] -= d;
                if !seen.contains_key(&nr) {
                    seen.insert(nr.clone(), nc.clone());
                    queue.push_back((nr, nc));
                }
            }
        }
        let mut pos: Vec<(Vec<i64>, Vec<i64>)> = seen
            .into_iter()
            .filter(|(root, _)| root.iter().all(|&x| x >= 0))
            .collect();
        pos.sort_by_key(|(root, _)| (root.iter().sum::<i64>(), root.clone()));
        let highest = pos.len() - 1;
        let top: i64 = pos[highest].0.iter().sum();
        assert_eq!(
            pos.iter().filter(|(root, _)| root.iter().sum::<i64>() == top).count(),
            1,
            "highest root must be unique"
        );
        let (pos_roots, pos_coroots) = pos.into_iter().unzip();
        Self {
            cartan,
            pos_roots,
            pos_coroots,
            highest,
        }
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn highest_root(&self) -> &[i64] {
        &self.pos_roots[self.highest]
    }

    pub fn highest_coroot(&self) -> &[i64] {
        &self.pos_coroots[self.highest]
    }

    /// The linear functional `lambda -> <alpha, lambda>` on the coroot lattice,
    /// for `alpha` given in simple-root coordinates.
    pub fn functional(&self, root: &[i64]) -> Vec<i64> {
        let r = self.rank();
        (0..r)
            .map(|k| (0..r).map(|j| self.cartan[k][j] * root[j]).sum())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(s: &str) -> usize {
        let t: FiniteType = s.parse().unwrap();
        RootData::new(t.cartan_matrix()).pos_roots.len()
    }

    #[test]
    fn positive_root_counts() {
        assert_eq!(count("A1"), 1);
        assert_eq!(count("A2"), 3);
        assert_eq!(count("B3"), 9);
        assert_eq!(count("C2"), 4);
        assert_eq!(count("C3"), 9);
        assert_eq!(count("D4"), 12);
        assert_eq!(count("G2"), 6);
        assert_eq!(count("F4"), 24);
        assert_eq!(count("E6"), 36);
        assert_eq!(count("E7"), 63);
        assert_eq!(count("E8"), 120);
    }

    #[test]
    fn highest_roots() {
        let hr = |s: &str| {
            let t: FiniteType = s.parse().unwrap();
            RootData::new(t.cartan_matrix()).highest_root().to_vec()
        };
        assert_eq!(hr("A2"), vec![1, 1]);
        assert_eq!(hr("C2"), vec![2, 1]);
        assert_eq!(hr("G2"), vec![3, 2]);
        assert_eq!(hr("F4"), vec![2, 3, 4, 2]);
        assert_eq!(hr("E8"), vec![2, 3, 4, 6, 5, 4, 3, 2]);
    }

    #[test]
    fn unsupported() {
        assert!("B2".parse::<FiniteType>().is_err());
        assert!("E9".parse::<FiniteType>().is_err());
        assert!("X3".parse::<FiniteType>().is_err());
        assert!("A0".parse::<FiniteType>().is_err());
    }
}
