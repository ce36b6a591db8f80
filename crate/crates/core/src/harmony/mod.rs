//! Additive edge labels of functional trees and everything built on them:
//! harmonious and near-harmonious searches, translation invariance, the
//! harmonious expansion, completion by rerooting, HaL sets and the
//! per-tree theorem check.

mod search;
mod theorem;

pub use search::{
    find_labeling, max_harmony_search, max_harmony_search_capped, Mode, LabelSearchResult, Scope,
    HEURISTIC_RESTARTS, SEARCH_CAP,
};
pub use theorem::{complete_near_harmonious, theorem_check, Completion, TheoremOutcome};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perms::{coset_transversal, Perm};
use crate::zmod::{FuncMap, TreeFunc};

/// Multiset of edge sums `i + f(i) mod n`, in full and with one edge (the
/// loop, for a tree) excluded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SumProfile {
    n: usize,
    full: Vec<usize>,
    nonloop: Vec<usize>,
    distinct_count: usize,
    nonloop_distinct_count: usize,
    missing: Option<usize>,
}

impl SumProfile {
    /// Profile of an arbitrary map; `excluded` names the edge index left out
    /// of the non-loop multiset.
    pub fn of_map(g: &FuncMap, excluded: Option<usize>) -> Self {
        let n = g.n();
        let mut full = vec![0; n];
        let mut nonloop = vec![0; n];
        for (i, &gi) in g.table().iter().enumerate() {
            let s = (i + gi) % n;
            full[s] += 1;
            if Some(i) != excluded {
                nonloop[s] += 1;
            }
        }
        let distinct_count = full.iter().filter(|&&c| c > 0).count();
        let nonloop_distinct_count = nonloop.iter().filter(|&&c| c > 0).count();
        let missing = (excluded.is_some() && nonloop_distinct_count == n - 1)
            .then(|| nonloop.iter().position(|&c| c == 0).expect("one residue is absent"));
        Self {
            n,
            full,
            nonloop,
            distinct_count,
            nonloop_distinct_count,
            missing,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Multiplicity of each residue among all `n` sums.
    pub fn full_counts(&self) -> &[usize] {
        &self.full
    }

    pub fn nonloop_counts(&self) -> &[usize] {
        &self.nonloop
    }

    /// All sums, sorted.
    pub fn sums(&self) -> Vec<usize> {
        expand(&self.full)
    }

    pub fn nonloop_sums(&self) -> Vec<usize> {
        expand(&self.nonloop)
    }

    pub fn distinct_count(&self) -> usize {
        self.distinct_count
    }

    pub fn nonloop_distinct_count(&self) -> usize {
        self.nonloop_distinct_count
    }

    /// The residue absent from the non-loop sums when those are `n - 1`
    /// distinct values.
    pub fn missing(&self) -> Option<usize> {
        self.missing
    }
}

fn expand(counts: &[usize]) -> Vec<usize> {
    counts
        .iter()
        .enumerate()
        .flat_map(|(s, &c)| std::iter::repeat_n(s, c))
        .collect()
}

/// Edge-sum profile of a tree; the loop contributes `2·root` to the full
/// multiset only.
pub fn edge_sums(t: &TreeFunc) -> SumProfile {
    SumProfile::of_map(t.map(), Some(t.root()))
}

/// Whether the identity labeling of `t` is harmonious.
pub fn is_harmonious(t: &TreeFunc) -> bool {
    let n = t.n();
    let mut seen = vec![false; n];
    t.table().iter().enumerate().all(|(i, &fi)| {
        let s = (i + fi) % n;
        !std::mem::replace(&mut seen[s], true)
    })
}

/// `g' = g(id + c)`.
pub fn right_translate(g: &FuncMap, c: usize) -> FuncMap {
    let n = g.n();
    let table = (0..n).map(|i| g.apply((i + c) % n)).collect();
    FuncMap::from_table_unchecked(table)
}

/// `g'' = g + c`.
pub fn left_translate(g: &FuncMap, c: usize) -> FuncMap {
    let n = g.n();
    let table = g.table().iter().map(|&v| (v + c) % n).collect();
    FuncMap::from_table_unchecked(table)
}

/// Profile of `g(id + c)` where the excluded edge is carried along: edge
/// `i` of the translate is edge `i + c` of `g`, so `excluded` moves to
/// `excluded - c`.
pub fn right_translate_profile(g: &FuncMap, excluded: Option<usize>, c: usize) -> SumProfile {
    let n = g.n();
    let moved = excluded.map(|e| (e + n - c % n) % n);
    SumProfile::of_map(&right_translate(g, c), moved)
}

/// Profile of `g + c`; edge indices are unchanged.
pub fn left_translate_profile(g: &FuncMap, excluded: Option<usize>, c: usize) -> SumProfile {
    SumProfile::of_map(&left_translate(g, c), excluded)
}

/// `γ(i) = σfσ^(-1)(i) + i`, required to be a permutation.
pub fn expansion_decompose(t: &TreeFunc, sigma: &Perm) -> Result<Perm> {
    let g = t.map().conjugate(sigma)?;
    let n = g.n();
    let gamma = (0..n).map(|i| (g.apply(i) + i) % n).collect();
    Perm::new(gamma).map_err(|_| Error::NotHarmonious)
}

/// `f(i) = σ^(-1)(γσ(i) - σ(i))`.
pub fn expansion_reconstruct(gamma: &Perm, sigma: &Perm) -> Result<FuncMap> {
    let n = gamma.n();
    if sigma.n() != n {
        return Err(Error::ModulusMismatch {
            left: n,
            right: sigma.n(),
        });
    }
    let table = (0..n)
        .map(|i| {
            let s = sigma.apply(i);
            sigma.apply_inverse((gamma.apply(s) + n - s) % n)
        })
        .collect();
    Ok(FuncMap::from_table_unchecked(table))
}

/// Harmoniously labeled copies of `G_f`: one per coset of `Aut(G_f)`.
pub fn hal_enumerate(t: &TreeFunc) -> Result<impl Iterator<Item = (Perm, TreeFunc)>> {
    let tree = t.clone();
    Ok(coset_transversal(t)?.filter_map(move |sigma| {
        let g = tree.conjugate(&sigma).expect("same modulus");
        is_harmonious(&g).then_some((sigma, g))
    }))
}

/// `|HaL(G_f)|`.
pub fn count_harmonious_labelings(t: &TreeFunc) -> Result<u64> {
    Ok(hal_enumerate(t)?.count() as u64)
}

/// A binary operation table `τ: Z_n × Z_n -> Z_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauTable {
    n: usize,
    table: Vec<usize>,
}

impl TauTable {
    /// `table[a * n + b] = τ(a, b)`.
    pub fn new(n: usize, table: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        if table.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                got: table.len(),
            });
        }
        if let Some((index, &value)) = table.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(Error::EntryOutOfRange { index, value, n });
        }
        Ok(Self { n, table })
    }

    pub fn from_fn(n: usize, tau: impl Fn(usize, usize) -> usize) -> Self {
        let table = (0..n * n).map(|k| tau(k / n, k % n) % n).collect();
        Self { n, table }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }
}

/// τ-induced labels `{τ(f(i), i)}` and a τ-Zen witness, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauLabels {
    /// Multiplicity of each residue.
    pub counts: Vec<usize>,
    pub zen: Option<Perm>,
}

impl TauLabels {
    pub fn is_zen(&self) -> bool {
        self.zen.is_some()
    }
}

pub fn tau_labels(t: &TreeFunc, tau: &TauTable) -> Result<TauLabels> {
    let n = t.n();
    if tau.n() != n {
        return Err(Error::ModulusMismatch {
            left: n,
            right: tau.n(),
        });
    }
    let label_counts = |g: &FuncMap| {
        let mut counts = vec![0; n];
        for (i, &gi) in g.table().iter().enumerate() {
            counts[tau.get(gi, i)] += 1;
        }
        counts
    };
    let counts = label_counts(t.map());
    let zen = coset_transversal(t)?.find(|sigma| {
        let g = t.map().conjugate(sigma).expect("same modulus");
        label_counts(&g).iter().all(|&c| c == 1)
    });
    Ok(TauLabels { counts, zen })
}
