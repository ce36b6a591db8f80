//! Rooted trees up to isomorphism, keyed by canonical level sequences.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::codec;
use crate::error::{Error, Result};
use crate::zmod::{FuncMap, TreeFunc};

/// Default upper bound on `n` for [`enumerate_trees`].
pub const TREE_CAP: usize = 12;

/// AHU level sequence: preorder depths with every vertex's child subtrees
/// listed in non-increasing lexicographic order of their own sequences.
/// Equal codes are equivalent to conjugate tree functions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct CanonicalCode {
    code: Vec<u32>,
}

impl CanonicalCode {
    pub fn n(&self) -> usize {
        self.code.len()
    }

    pub fn levels(&self) -> &[u32] {
        &self.code
    }

    /// The canonical representative: root 0, vertices numbered in preorder.
    pub fn tree(&self) -> TreeFunc {
        let n = self.code.len();
        let mut table = vec![0; n];
        // last[d] = most recent vertex at depth d
        let mut last: Vec<usize> = Vec::with_capacity(n);
        for (v, &d) in self.code.iter().enumerate() {
            let d = d as usize;
            if d > 0 {
                table[v] = last[d - 1];
            }
            last.truncate(d);
            last.push(v);
        }
        TreeFunc::from_parts_unchecked(FuncMap::from_table_unchecked(table), 0)
    }

    /// Validate a level sequence (root at level 0, each step descends at most
    /// one level).
    pub fn from_levels(code: Vec<u32>) -> Result<Self> {
        if code.is_empty() {
            return Err(Error::ZeroModulus);
        }
        if code[0] != 0 {
            return Err(Error::Precondition("level sequence must start at 0".into()));
        }
        for w in code.windows(2) {
            if w[1] == 0 || w[1] > w[0] + 1 {
                return Err(Error::Precondition(format!("invalid level step {} -> {}", w[0], w[1])));
            }
        }
        let candidate = Self { code };
        if canonical_code(&candidate.tree()) != candidate {
            return Err(Error::Precondition("level sequence is not canonical".into()));
        }
        Ok(candidate)
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let levels: Vec<usize> = self.code.iter().map(|&l| l as usize).collect();
        f.write_str(&codec::format_table(&levels))
    }
}

impl FromStr for CanonicalCode {
    type Err = Error;

    /// Parse `n:l0,...`. Structural problems are reported at column 1.
    fn from_str(s: &str) -> Result<Self> {
        let levels = codec::parse_table(s)?;
        let code = levels
            .into_iter()
            .map(|l| u32::try_from(l).map_err(|_| Error::Precondition(format!("level {l} too large"))))
            .collect::<Result<Vec<_>>>()
            .and_then(Self::from_levels);
        code.map_err(|e| match e {
            e @ Error::Parse { .. } => e,
            other => Error::Parse {
                column: 1,
                message: other.to_string(),
            },
        })
    }
}

impl TryFrom<String> for CanonicalCode {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<CanonicalCode> for String {
    fn from(c: CanonicalCode) -> String {
        c.to_string()
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode({self})")
    }
}

/// Isomorphism-invariant code of a rooted tree.
pub fn canonical_code(t: &TreeFunc) -> CanonicalCode {
    let n = t.n();
    let children = t.children();
    let depths = t.depths();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(depths[v]));
    let mut codes: Vec<Vec<u32>> = vec![Vec::new(); n];
    for v in order {
        let mut kids: Vec<Vec<u32>> = children[v]
            .iter()
            .map(|&c| std::mem::take(&mut codes[c]))
            .collect();
        kids.sort_unstable_by(|a, b| b.cmp(a));
        let mut code = Vec::with_capacity(1 + kids.iter().map(Vec::len).sum::<usize>());
        code.push(0);
        for kid in kids {
            code.extend(kid.into_iter().map(|l| l + 1));
        }
        codes[v] = code;
    }
    CanonicalCode {
        code: std::mem::take(&mut codes[t.root()]),
    }
}

/// One canonical representative per isomorphism class of rooted trees on
/// `n` vertices, sorted by canonical code.
pub fn enumerate_trees(n: usize) -> Result<Vec<TreeFunc>> {
    enumerate_trees_capped(n, TREE_CAP)
}

pub fn enumerate_trees_capped(n: usize, cap: usize) -> Result<Vec<TreeFunc>> {
    Ok(enumerate_codes_capped(n, cap)?
        .iter()
        .map(CanonicalCode::tree)
        .collect())
}

pub fn enumerate_codes(n: usize) -> Result<Vec<CanonicalCode>> {
    enumerate_codes_capped(n, TREE_CAP)
}

/// Level sequences by the Beyer-Hedetniemi successor rule, which visits
/// every canonical sequence exactly once starting from the path.
pub fn enumerate_codes_capped(n: usize, cap: usize) -> Result<Vec<CanonicalCode>> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if n > cap {
        return Err(Error::CapExceeded {
            op: "enumerate_trees",
            n,
            cap,
        });
    }
    let mut levels: Vec<u32> = (0..n as u32).collect();
    let mut out = Vec::new();
    loop {
        out.push(CanonicalCode {
            code: levels.clone(),
        });
        let Some(p) = levels.iter().rposition(|&l| l > 1) else {
            break;
        };
        let q = levels[..p]
            .iter()
            .rposition(|&l| l == levels[p] - 1)
            .expect("a shallower vertex precedes p");
        let period = p - q;
        for i in p..n {
            levels[i] = levels[i - period];
        }
    }
    out.sort();
    debug_assert!(out.iter().all(|c| canonical_code(&c.tree()) == *c));
    Ok(out)
}
