//! Young diagrams: corner edits, hook lengths and standard Young tableau counts.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A partition in canonical form: positive, weakly decreasing parts.
///
/// The empty list is `∅`. Serialized as a JSON array of parts, e.g. `[2,1]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CornerKind {
    Removable,
    Addable,
}

/// A cell at 0-based `(row, col)` that can be removed from or added to a diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Corner {
    pub row: usize,
    pub col: usize,
    pub kind: CornerKind,
}

impl Corner {
    pub fn removable(row: usize, col: usize) -> Self {
        Corner { row, col, kind: CornerKind::Removable }
    }

    pub fn addable(row: usize, col: usize) -> Self {
        Corner { row, col, kind: CornerKind::Addable }
    }
}

impl Partition {
    /// Builds a partition, dropping trailing zeros. Rejects parts that increase.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::InvalidPartition(parts));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Number of boxes `|λ|`.
    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn part(&self, row: usize) -> usize {
        self.0.get(row).copied().unwrap_or(0)
    }

    pub fn removable_corners(&self) -> Vec<Corner> {
        let p = &self.0;
        (0..p.len())
            .filter(|&r| r + 1 == p.len() || p[r] > p[r + 1])
            .map(|r| Corner::removable(r, p[r] - 1))
            .collect()
    }

    pub fn addable_corners(&self) -> Vec<Corner> {
        (0..=self.0.len())
            .filter(|&r| r == 0 || self.0[r - 1] > self.part(r))
            .map(|r| Corner::addable(r, self.part(r)))
            .collect()
    }

    pub fn is_corner(&self, c: &Corner) -> bool {
        match c.kind {
            CornerKind::Removable => self.removable_corners().contains(c),
            CornerKind::Addable => self.addable_corners().contains(c),
        }
    }

    pub fn apply_corner(&self, c: &Corner) -> Result<Partition> {
        if !self.is_corner(c) {
            return Err(Error::InvalidCorner { partition: self.clone(), corner: *c });
        }
        let mut parts = self.0.clone();
        match c.kind {
            CornerKind::Removable => {
                parts[c.row] -= 1;
                if parts[c.row] == 0 {
                    parts.pop();
                }
            }
            CornerKind::Addable => {
                if c.row == parts.len() {
                    parts.push(1);
                } else {
                    parts[c.row] += 1;
                }
            }
        }
        Ok(Partition(parts))
    }

    /// Partitions reachable by removing one corner, in row order.
    pub fn predecessors(&self) -> Vec<Partition> {
        self.removable_corners()
            .iter()
            .map(|c| self.apply_corner(c).expect("corner comes from this partition"))
            .collect()
    }

    /// Partitions reachable by adding one corner, in row order.
    pub fn successors(&self) -> Vec<Partition> {
        self.addable_corners()
            .iter()
            .map(|c| self.apply_corner(c).expect("corner comes from this partition"))
            .collect()
    }

    /// Column lengths of the diagram.
    pub fn conjugate(&self) -> Partition {
        let width = self.part(0);
        Partition((0..width).map(|c| self.0.iter().take_while(|&&p| p > c).count()).collect())
    }

    pub fn hook_lengths(&self) -> Vec<Vec<usize>> {
        let conj = self.conjugate();
        self.0
            .iter()
            .enumerate()
            .map(|(r, &len)| (0..len).map(|c| (len - c - 1) + (conj.0[c] - r - 1) + 1).collect())
            .collect()
    }

    /// Every partition of `n`, in reverse lexicographic order.
    pub fn all_of_size(n: usize) -> Vec<Partition> {
        fn go(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                go(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;

    /// Comma-separated parts; the empty string is `∅`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "∅" {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("part {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

fn syt_cache() -> &'static Mutex<HashMap<Partition, BigUint>> {
    static CACHE: OnceLock<Mutex<HashMap<Partition, BigUint>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Number of standard Young tableaux `f^λ`, by the hook length formula.
///
/// Results are memoized for the life of the process.
pub fn syt_count(p: &Partition) -> BigUint {
    if let Some(v) = syt_cache().lock().expect("cache poisoned").get(p) {
        return v.clone();
    }
    let mut num = BigUint::one();
    for i in 2..=p.size() {
        num *= i;
    }
    let den = p
        .hook_lengths()
        .into_iter()
        .flatten()
        .fold(BigUint::one(), |acc, h| acc * h);
    let f = num / den;
    syt_cache().lock().expect("cache poisoned").insert(p.clone(), f.clone());
    f
}
