//! Points of the lattice `Ω^n` as exponent vectors, and the search for a
//! point where a factor multiset does not vanish.
//!
//! A polynomial reduced modulo `{x_k^n - 1}` is determined by its values on
//! `Ω^n`, so its canonical representative is nonzero exactly when some
//! lattice point gives a nonzero value. For a split product, a value is
//! nonzero exactly when no factor vanishes there.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::factors::FactorMultiset;
use crate::codec;
use crate::error::{Error, Result};

/// Largest `n` for the plain `n^n` scan.
pub const SCAN_CAP: usize = 5;
/// Largest `n` for the pruned search.
pub const LATTICE_CAP: usize = 12;

/// `x_i = ω^(a_i)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    exponents: Vec<usize>,
}

impl LatticePoint {
    pub fn new(exponents: Vec<usize>) -> Result<Self> {
        let n = exponents.len();
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        if let Some((index, &value)) = exponents.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(Error::EntryOutOfRange { index, value, n });
        }
        Ok(Self { exponents })
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.n()];
        self.exponents.iter().all(|&a| !std::mem::replace(&mut seen[a], true))
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&codec::format_table(&self.exponents))
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatticePoint({self})")
    }
}

impl FromStr for LatticePoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LatticePoint::new(codec::parse_table(s)?)
    }
}

impl Serialize for LatticePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LatticePoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeSearch {
    /// Every point of `Z_n^n` in lexicographic order.
    Scan,
    /// Depth-first over coordinates, pruning a prefix as soon as a factor
    /// whose variables are all assigned vanishes.
    Pruned,
}

/// Lexicographically least lattice point where no factor of `m` vanishes.
/// Both strategies visit points in the same order and return the same
/// witness.
pub fn canonical_rep_nonzero(
    m: &FactorMultiset,
    n: usize,
    strategy: LatticeSearch,
) -> Result<Option<LatticePoint>> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if let Some((f, _)) = m.iter().find(|(f, _)| f.max_var() >= n) {
        return Err(Error::VertexOutOfRange {
            vertex: f.max_var(),
            n,
        });
    }
    match strategy {
        LatticeSearch::Scan => {
            if n > SCAN_CAP {
                return Err(Error::CapExceeded {
                    op: "lattice scan",
                    n,
                    cap: SCAN_CAP,
                });
            }
            Ok(scan(m, n))
        }
        LatticeSearch::Pruned => {
            if n > LATTICE_CAP {
                return Err(Error::CapExceeded {
                    op: "lattice search",
                    n,
                    cap: LATTICE_CAP,
                });
            }
            Ok(pruned(m, n))
        }
    }
}

fn scan(m: &FactorMultiset, n: usize) -> Option<LatticePoint> {
    let mut a = vec![0usize; n];
    loop {
        if !m.iter().any(|(f, _)| f.vanishes_at(&a, n)) {
            return Some(LatticePoint { exponents: a });
        }
        // odometer with the last coordinate fastest
        let mut i = n;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            a[i] += 1;
            if a[i] < n {
                break;
            }
            a[i] = 0;
        }
    }
}

fn pruned(m: &FactorMultiset, n: usize) -> Option<LatticePoint> {
    let mut by_last = vec![Vec::new(); n];
    for (f, _) in m.iter() {
        by_last[f.max_var()].push(*f);
    }
    let mut a = vec![0usize; n];
    fn go(v: usize, n: usize, a: &mut [usize], by_last: &[Vec<super::factors::Factor>]) -> bool {
        if v == n {
            return true;
        }
        for e in 0..n {
            a[v] = e;
            if !by_last[v].iter().any(|f| f.vanishes_at(a, n)) && go(v + 1, n, a, by_last) {
                return true;
            }
        }
        false
    }
    go(0, n, &mut a, &by_last).then_some(LatticePoint { exponents: a })
}
