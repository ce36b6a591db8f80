//! Labeling searches. A labeling `σ` puts label `σ(i)` on vertex `i`, which
//! is the same as conjugating `f` by `σ`, so searching labelings covers all
//! of `S_n`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::SumProfile;
use crate::error::{Error, Result};
use crate::perms::Perm;
use crate::zmod::TreeFunc;

/// Largest `n` accepted by exact search.
pub const SEARCH_CAP: usize = 12;
pub const HEURISTIC_RESTARTS: usize = 64;

/// Which edges count towards distinct sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    /// All `n` edges including the loop at the root.
    Full,
    /// The `n - 1` tree edges.
    Nonloop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Heuristic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelSearchResult {
    pub best_sigma: Perm,
    /// Distinct sums of `best_sigma·f·best_sigma^(-1)` within `scope`.
    pub achieved: usize,
    pub scope: Scope,
    /// Residue missing from the non-loop sums under `best_sigma`, when they
    /// are `n - 1` distinct values.
    pub missing: Option<usize>,
    /// False for heuristic results, which are only lower bounds.
    pub exact: bool,
}

/// Depth-first labeling search over vertices `0, 1, ..., n-1` in order,
/// labels tried in increasing order; edge `(i, f(i))` is scored as soon as
/// both endpoints carry labels.
struct Engine {
    n: usize,
    /// Edges completed when vertex `v` is labeled.
    completes: Vec<Vec<(usize, usize)>>,
    edge_count: usize,
}

impl Engine {
    fn new(t: &TreeFunc, scope: Scope) -> Self {
        let n = t.n();
        let mut completes = vec![Vec::new(); n];
        let mut edge_count = 0;
        for i in 0..n {
            if scope == Scope::Nonloop && i == t.root() {
                continue;
            }
            let j = t.apply(i);
            completes[i.max(j)].push((i, j));
            edge_count += 1;
        }
        Self {
            n,
            completes,
            edge_count,
        }
    }

    /// Lexicographically least labeling with at most `budget` colliding edges.
    fn first_within(&self, budget: usize) -> Option<Vec<usize>> {
        let mut state = Dfs {
            labels: vec![0; self.n],
            used: vec![false; self.n],
            counts: vec![0; self.n],
        };
        state.run(self, 0, 0, budget).then_some(state.labels)
    }
}

struct Dfs {
    labels: Vec<usize>,
    used: Vec<bool>,
    counts: Vec<u32>,
}

impl Dfs {
    fn run(&mut self, engine: &Engine, v: usize, collisions: usize, budget: usize) -> bool {
        let n = engine.n;
        if v == n {
            return true;
        }
        for label in 0..n {
            if self.used[label] {
                continue;
            }
            self.used[label] = true;
            self.labels[v] = label;
            let mut c = collisions;
            for &(i, j) in &engine.completes[v] {
                let s = (self.labels[i] + self.labels[j]) % n;
                if self.counts[s] > 0 {
                    c += 1;
                }
                self.counts[s] += 1;
            }
            if c <= budget && self.run(engine, v + 1, c, budget) {
                return true;
            }
            for &(i, j) in &engine.completes[v] {
                self.counts[(self.labels[i] + self.labels[j]) % n] -= 1;
            }
            self.used[label] = false;
        }
        false
    }
}

/// Lexicographically least labeling whose sums within `scope` have at most
/// `collisions` repeats; `collisions = 0` asks for a harmonious
/// ([`Scope::Full`]) or near-harmonious ([`Scope::Nonloop`]) labeling.
pub fn find_labeling(t: &TreeFunc, scope: Scope, collisions: usize) -> Result<Option<Perm>> {
    check_cap(t.n(), SEARCH_CAP)?;
    Ok(Engine::new(t, scope)
        .first_within(collisions)
        .map(|labels| Perm::new(labels).expect("search assigns each label once")))
}

pub fn max_harmony_search(t: &TreeFunc, scope: Scope, mode: Mode) -> Result<LabelSearchResult> {
    max_harmony_search_capped(t, scope, mode, SEARCH_CAP)
}

/// Maximum number of distinct edge sums over all labelings. Exact mode
/// raises the collision budget from zero until a labeling fits, so the
/// witness is the lexicographically least optimal labeling.
pub fn max_harmony_search_capped(
    t: &TreeFunc,
    scope: Scope,
    mode: Mode,
    cap: usize,
) -> Result<LabelSearchResult> {
    let sigma = match mode {
        Mode::Exact => {
            check_cap(t.n(), cap)?;
            let engine = Engine::new(t, scope);
            let labels = (0..=engine.edge_count)
                .find_map(|budget| engine.first_within(budget))
                .expect("any labeling fits the full budget");
            Perm::new(labels).expect("search assigns each label once")
        }
        Mode::Heuristic => heuristic(t, scope),
    };
    Ok(result_for(t, sigma, scope, mode == Mode::Exact))
}

fn result_for(t: &TreeFunc, sigma: Perm, scope: Scope, exact: bool) -> LabelSearchResult {
    let g = t.conjugate(&sigma).expect("same modulus");
    let profile = SumProfile::of_map(g.map(), Some(g.root()));
    let achieved = match scope {
        Scope::Full => profile.distinct_count(),
        Scope::Nonloop => profile.nonloop_distinct_count(),
    };
    LabelSearchResult {
        best_sigma: sigma,
        achieved,
        scope,
        missing: profile.missing(),
        exact,
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::CapExceeded {
            op: "exact labeling search",
            n,
            cap,
        });
    }
    Ok(())
}

fn score(edges: &[(usize, usize)], labels: &[usize], counts: &mut [u32]) -> usize {
    let n = labels.len();
    counts.iter_mut().for_each(|c| *c = 0);
    for &(i, j) in edges {
        counts[(labels[i] + labels[j]) % n] += 1;
    }
    counts.iter().filter(|&&c| c > 0).count()
}

/// Random restarts with first-improvement swap hill climbing. The RNG is
/// seeded from the tree code so results are reproducible.
fn heuristic(t: &TreeFunc, scope: Scope) -> Perm {
    let n = t.n();
    let edges: Vec<(usize, usize)> = (0..n)
        .filter(|&i| scope == Scope::Full || i != t.root())
        .map(|i| (i, t.apply(i)))
        .collect();
    let target = edges.len();
    let digest = Sha256::digest(t.to_string().as_bytes());
    let seed: [u8; 32] = digest.into();
    let mut rng = ChaCha8Rng::from_seed(seed);

    let mut counts = vec![0u32; n];
    let mut best: Vec<usize> = (0..n).collect();
    let mut best_score = score(&edges, &best, &mut counts);
    for _ in 0..HEURISTIC_RESTARTS {
        if best_score == target {
            break;
        }
        let mut labels: Vec<usize> = (0..n).collect();
        labels.shuffle(&mut rng);
        let mut current = score(&edges, &labels, &mut counts);
        let mut improved = true;
        while improved && current < target {
            improved = false;
            let offset = rng.gen_range(0..n * n);
            for step in 0..n * n {
                let k = (offset + step) % (n * n);
                let (a, b) = (k / n, k % n);
                if a >= b {
                    continue;
                }
                labels.swap(a, b);
                let s = score(&edges, &labels, &mut counts);
                if s > current {
                    current = s;
                    improved = true;
                    break;
                }
                labels.swap(a, b);
            }
        }
        if current > best_score {
            best_score = current;
            best = labels;
        }
    }
    Perm::new(best).expect("shuffled labels stay a bijection")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perms::all_perms;
    use crate::treegen::enumerate_trees;

    fn tree(table: &[usize]) -> TreeFunc {
        TreeFunc::from_table(table.to_vec()).unwrap()
    }

    /// Naive maximum over all n! conjugations, with the first (least)
    /// maximizer.
    fn naive(t: &TreeFunc, scope: Scope) -> (usize, Perm) {
        let mut best: Option<(usize, Perm)> = None;
        for sigma in all_perms(t.n()).unwrap() {
            let g = t.conjugate(&sigma).unwrap();
            let p = SumProfile::of_map(g.map(), Some(g.root()));
            let v = match scope {
                Scope::Full => p.distinct_count(),
                Scope::Nonloop => p.nonloop_distinct_count(),
            };
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, sigma));
            }
        }
        best.unwrap()
    }

    #[test]
    fn search_examples() {
        let path = tree(&[0, 0, 1]);
        let full = max_harmony_search(&path, Scope::Full, Mode::Exact).unwrap();
        assert_eq!(full.achieved, 2);
        let nonloop = max_harmony_search(&path, Scope::Nonloop, Mode::Exact).unwrap();
        assert_eq!(nonloop.achieved, 2);
        assert_eq!(nonloop.best_sigma, Perm::identity(3));
        assert_eq!(nonloop.missing, Some(2));
        for n in 1..=9 {
            let r = max_harmony_search(&TreeFunc::star(n, 0), Scope::Full, Mode::Exact).unwrap();
            assert_eq!(r.achieved, n);
            assert!(r.best_sigma.is_identity());
        }
    }

    #[test]
    fn exact_search_matches_naive_scan() {
        for n in 1..=6 {
            for t in enumerate_trees(n).unwrap() {
                for scope in [Scope::Full, Scope::Nonloop] {
                    let r = max_harmony_search(&t, scope, Mode::Exact).unwrap();
                    let (value, sigma) = naive(&t, scope);
                    assert_eq!(r.achieved, value, "{t} {scope:?}");
                    assert_eq!(r.best_sigma, sigma, "{t} {scope:?}");
                }
            }
        }
    }

    #[test]
    fn heuristic_is_a_reproducible_lower_bound() {
        for t in enumerate_trees(7).unwrap() {
            let exact = max_harmony_search(&t, Scope::Nonloop, Mode::Exact).unwrap();
            let h1 = max_harmony_search(&t, Scope::Nonloop, Mode::Heuristic).unwrap();
            let h2 = max_harmony_search(&t, Scope::Nonloop, Mode::Heuristic).unwrap();
            assert!(!h1.exact);
            assert!(h1.achieved <= exact.achieved);
            assert_eq!(h1, h2);
        }
    }

    #[test]
    fn exact_refuses_above_cap() {
        let big = TreeFunc::star(13, 0);
        assert!(matches!(
            max_harmony_search(&big, Scope::Full, Mode::Exact),
            Err(Error::CapExceeded { .. })
        ));
        assert!(max_harmony_search(&big, Scope::Full, Mode::Heuristic).is_ok());
    }
}
