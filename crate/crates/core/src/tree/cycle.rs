use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{usage, Error};

/// Multiset of cycle lengths, kept in descending order.
///
/// Serves as the common currency between leaf actions of portraits and
/// factorization patterns of polynomials mod `p`. The canonical text form is
/// the parts joined by `+`, e.g. `3+3+3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType(Vec<u32>);

impl CycleType {
    pub fn from_parts(mut parts: Vec<u32>) -> Result<CycleType, Error> {
        if parts.is_empty() || parts.contains(&0) {
            return usage("cycle type parts must be positive and non-empty");
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(CycleType(parts))
    }

    pub fn of_permutation(perm: &[u32]) -> CycleType {
        let mut seen = vec![false; perm.len()];
        let mut parts = Vec::new();
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = perm[i] as usize;
                len += 1;
            }
            parts.push(len);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&p| p as u64).sum()
    }

    pub fn num_parts(&self) -> usize {
        self.0.len()
    }

    pub fn fixed_points(&self) -> usize {
        self.0.iter().filter(|&&p| p == 1).count()
    }

    pub fn has_fixed_point(&self) -> bool {
        self.0.last() == Some(&1)
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.0 {
            if !first {
                f.write_str("+")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for CycleType {
    type Err = Error;

    /// Accepts parts in any order, e.g. `1+2` or `2+1`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let parts = s
            .split('+')
            .map(|t| t.trim().parse::<u32>().map_err(|_| Error::Usage(format!("bad cycle type {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        CycleType::from_parts(parts)
    }
}

impl Serialize for CycleType {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
