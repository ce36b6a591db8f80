//! Functions `Z_n -> Z_n` stored as tables, their iterates, the rooted-tree
//! predicate `|f^(n-1)(Z_n)| = 1` and swap-sink rerooting.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::codec;
use crate::error::{Error, Result};
use crate::perms::Perm;

/// A total function on `Z_n`, `table[i] = f(i)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct FuncMap {
    table: Vec<usize>,
}

impl FuncMap {
    /// Validate `table` as a function on `Z_n`.
    pub fn new(n: usize, table: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        if table.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: table.len(),
            });
        }
        if let Some((index, &value)) = table.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(Error::EntryOutOfRange { index, value, n });
        }
        Ok(Self { table })
    }

    pub(crate) fn from_table_unchecked(table: Vec<usize>) -> Self {
        debug_assert!(table.iter().all(|&v| v < table.len()));
        Self { table }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            table: (0..n).collect(),
        }
    }

    pub fn constant(n: usize, value: usize) -> Self {
        assert!(value < n, "constant value out of range");
        Self {
            table: vec![value; n],
        }
    }

    pub fn n(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &FuncMap) -> Result<FuncMap> {
        if self.n() != other.n() {
            return Err(Error::ModulusMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(Self {
            table: other.table.iter().map(|&j| self.table[j]).collect(),
        })
    }

    /// The `k`-fold iterate `f^(k)`; `f^(0)` is the identity.
    ///
    /// Small `k` is done by stepping; past `n` steps we square on the
    /// composition monoid instead.
    pub fn iterate(&self, k: u64) -> FuncMap {
        let n = self.n();
        if k <= n as u64 {
            let mut out: Vec<usize> = (0..n).collect();
            for _ in 0..k {
                for v in out.iter_mut() {
                    *v = self.table[*v];
                }
            }
            return Self { table: out };
        }
        let mut result = FuncMap::identity(n);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = base.compose_unchecked(&result);
            }
            base = base.compose_unchecked(&base);
            e >>= 1;
        }
        result
    }

    fn compose_unchecked(&self, other: &FuncMap) -> FuncMap {
        Self {
            table: other.table.iter().map(|&j| self.table[j]).collect(),
        }
    }

    /// Sorted, deduplicated image.
    pub fn image(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n()];
        for &v in &self.table {
            seen[v] = true;
        }
        (0..self.n()).filter(|&i| seen[i]).collect()
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.table[i] == i).collect()
    }

    /// `σ f σ^(-1)`: the same functional graph with vertex `i` renamed `σ(i)`.
    pub fn conjugate(&self, sigma: &Perm) -> Result<FuncMap> {
        if sigma.n() != self.n() {
            return Err(Error::ModulusMismatch {
                left: self.n(),
                right: sigma.n(),
            });
        }
        let mut table = vec![0; self.n()];
        for (i, &fi) in self.table.iter().enumerate() {
            table[sigma.apply(i)] = sigma.apply(fi);
        }
        Ok(Self { table })
    }

    pub fn edges(&self) -> EdgeList {
        EdgeList {
            edges: self.table.iter().copied().enumerate().collect(),
        }
    }

    /// Returns the tree view when `|f^(n-1)(Z_n)| = 1`.
    pub fn to_tree(&self) -> Option<TreeFunc> {
        is_tree_func(self)
    }
}

impl fmt::Display for FuncMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&codec::format_table(&self.table))
    }
}

impl fmt::Debug for FuncMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FuncMap({self})")
    }
}

impl FromStr for FuncMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let table = codec::parse_table(s)?;
        FuncMap::new(table.len(), table)
    }
}

impl TryFrom<Vec<usize>> for FuncMap {
    type Error = Error;

    fn try_from(table: Vec<usize>) -> Result<Self> {
        FuncMap::new(table.len(), table)
    }
}

impl From<FuncMap> for Vec<usize> {
    fn from(f: FuncMap) -> Self {
        f.table
    }
}

/// Build a function table, validating every entry against `n`.
pub fn make_func(n: usize, table: Vec<usize>) -> Result<FuncMap> {
    FuncMap::new(n, table)
}

/// `f^(k)`.
pub fn iterate(f: &FuncMap, k: u64) -> FuncMap {
    f.iterate(k)
}

/// The tree predicate: the image of `f^(n-1)` is a single vertex, which then
/// is the root.
pub fn is_tree_func(f: &FuncMap) -> Option<TreeFunc> {
    let n = f.n();
    let image = f.iterate(n as u64 - 1).image();
    match image.as_slice() {
        [root] => Some(TreeFunc {
            map: f.clone(),
            root: *root,
        }),
        _ => None,
    }
}

/// `σ f σ^(-1)`.
pub fn conjugate(f: &FuncMap, sigma: &Perm) -> Result<FuncMap> {
    f.conjugate(sigma)
}

/// The sequence of pairs `(i, f(i))` for `i = 0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeList {
    pub edges: Vec<(usize, usize)>,
}

/// A rooted tree on `Z_n` with a loop at the root: the unique fixed point of
/// `map`, attracting every vertex within `n - 1` steps.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeFunc {
    map: FuncMap,
    root: usize,
}

impl TreeFunc {
    pub fn new(map: FuncMap) -> Result<Self> {
        is_tree_func(&map).ok_or(Error::NotTree)
    }

    pub fn from_table(table: Vec<usize>) -> Result<Self> {
        Self::new(FuncMap::new(table.len(), table)?)
    }

    /// The identically-`c` map: a star centred at `c`.
    pub fn star(n: usize, centre: usize) -> Self {
        Self {
            map: FuncMap::constant(n, centre),
            root: centre,
        }
    }

    pub(crate) fn from_parts_unchecked(map: FuncMap, root: usize) -> Self {
        debug_assert_eq!(map.apply(root), root);
        Self { map, root }
    }

    pub fn map(&self) -> &FuncMap {
        &self.map
    }

    pub fn into_map(self) -> FuncMap {
        self.map
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn n(&self) -> usize {
        self.map.n()
    }

    pub fn table(&self) -> &[usize] {
        self.map.table()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.map.apply(i)
    }

    /// Children lists, each in increasing vertex order.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut children = vec![Vec::new(); self.n()];
        for i in 0..self.n() {
            if i != self.root {
                children[self.apply(i)].push(i);
            }
        }
        children
    }

    /// Edge distance from every vertex to the root.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![usize::MAX; self.n()];
        depth[self.root] = 0;
        for start in 0..self.n() {
            let mut path = Vec::new();
            let mut v = start;
            while depth[v] == usize::MAX {
                path.push(v);
                v = self.apply(v);
            }
            let mut d = depth[v];
            for &u in path.iter().rev() {
                d += 1;
                depth[u] = d;
            }
        }
        depth
    }

    /// Vertices `k = p_0, f(p_0), ..., root`.
    pub fn path_to_root(&self, k: usize) -> Vec<usize> {
        let mut path = vec![k];
        let mut v = k;
        while v != self.root {
            v = self.apply(v);
            path.push(v);
        }
        path
    }

    /// Undirected tree edges `{i, f(i)}` for `i != root`, each as
    /// `(min, max)`, sorted.
    pub fn undirected_edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<_> = (0..self.n())
            .filter(|&i| i != self.root)
            .map(|i| {
                let j = self.apply(i);
                (i.min(j), i.max(j))
            })
            .collect();
        edges.sort_unstable();
        edges
    }

    /// Swap sink `S(f, k)`: move the loop to `k` and reverse the path from
    /// `k` to the old root so every vertex keeps out-degree one.
    pub fn swap_sink(&self, k: usize) -> Result<TreeFunc> {
        let n = self.n();
        if k >= n {
            return Err(Error::VertexOutOfRange { vertex: k, n });
        }
        let path = self.path_to_root(k);
        let mut table = self.map.table.clone();
        table[k] = k;
        for w in path.windows(2) {
            table[w[1]] = w[0];
        }
        Ok(TreeFunc {
            map: FuncMap { table },
            root: k,
        })
    }

    pub fn conjugate(&self, sigma: &Perm) -> Result<TreeFunc> {
        let map = self.map.conjugate(sigma)?;
        Ok(TreeFunc {
            map,
            root: sigma.apply(self.root),
        })
    }

    /// `f^(k)` as a tree: iterates of a tree function stay tree functions
    /// with the same root.
    pub fn iterate(&self, k: u64) -> TreeFunc {
        TreeFunc {
            map: self.map.iterate(k),
            root: self.root,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.map.table.iter().all(|&v| v == self.root)
    }
}

impl fmt::Display for TreeFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.map.fmt(f)
    }
}

impl fmt::Debug for TreeFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TreeFunc({}, root {})", self.map, self.root)
    }
}

impl FromStr for TreeFunc {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TreeFunc::new(s.parse()?)
    }
}

/// `S(t, k)`.
pub fn swap_sink(t: &TreeFunc, k: usize) -> Result<TreeFunc> {
    t.swap_sink(k)
}
