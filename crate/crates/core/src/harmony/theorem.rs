use serde::Serialize;

use super::search::{find_labeling, max_harmony_search_capped, LabelSearchResult, Mode, Scope};
use super::is_harmonious;
use crate::error::{Error, Result};
use crate::perms::Perm;
use crate::zmod::TreeFunc;

/// A near-harmonious labeling upgraded to a harmonious one by moving the
/// loop to the vertex labeled `x`, where `2x = l` and `l` is the missing sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Completion {
    /// Vertex of the input tree receiving the loop.
    pub k: usize,
    pub sigma: Perm,
    pub missing: usize,
    /// Label of `k`: `sigma(k) = x`.
    pub x: usize,
    /// `S(σfσ^(-1), x)`, harmonious under the identity labeling.
    #[serde(serialize_with = "serialize_display")]
    pub labeled: TreeFunc,
}

fn serialize_display<S: serde::Serializer>(
    t: &TreeFunc,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(t)
}

pub fn complete_near_harmonious(t: &TreeFunc, witness: &LabelSearchResult) -> Result<Completion> {
    let n = t.n();
    if n % 2 == 0 {
        return Err(Error::EvenModulus(n));
    }
    if witness.scope != Scope::Nonloop {
        return Err(Error::Precondition("witness must have non-loop scope".into()));
    }
    if witness.achieved + 1 < n {
        return Err(Error::Precondition(format!(
            "witness reaches {} distinct non-loop sums, need {}",
            witness.achieved,
            n - 1
        )));
    }
    let sigma = &witness.best_sigma;
    let relabeled = t.conjugate(sigma)?;
    let missing = super::edge_sums(&relabeled)
        .missing()
        .ok_or_else(|| Error::Precondition("witness does not leave a missing sum".into()))?;
    // 2 is a unit for odd n with inverse (n + 1) / 2.
    let x = missing * n.div_ceil(2) % n;
    let labeled = relabeled.swap_sink(x)?;
    Ok(Completion {
        k: sigma.apply_inverse(x),
        sigma: sigma.clone(),
        missing,
        x,
        labeled,
    })
}

/// Both routes to a harmonious rerooting of one tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremOutcome {
    /// First `k` (ascending) for which `S(f, k)` has a harmonious labeling,
    /// with the least such labeling.
    pub direct: Option<(usize, Perm)>,
    /// Exact non-loop maximum and its least witness.
    pub nonloop: LabelSearchResult,
    /// Rerooting derived from the non-loop witness.
    pub completion: Option<Completion>,
}

impl TheoremOutcome {
    /// `(k, σ)` with `σ S(f,k) σ^(-1)` harmonious, from the direct route.
    pub fn witness(&self) -> Option<(usize, &Perm)> {
        self.direct.as_ref().map(|(k, s)| (*k, s))
    }

    /// Both routes produced a harmonious rerooting.
    pub fn strategies_agree(&self) -> bool {
        self.direct.is_some() && self.completion.is_some()
    }
}

/// Search for `k` and `σ` making `σ S(f,k) σ^(-1)` harmonious, once directly
/// over every `k` and once through the near-harmonious completion. Every
/// returned witness has been re-verified.
pub fn theorem_check(t: &TreeFunc) -> Result<TheoremOutcome> {
    theorem_check_capped(t, super::SEARCH_CAP)
}

pub fn theorem_check_capped(t: &TreeFunc, cap: usize) -> Result<TheoremOutcome> {
    let n = t.n();
    if n % 2 == 0 {
        return Err(Error::EvenModulus(n));
    }
    let mut direct = None;
    for k in 0..n {
        let rerooted = t.swap_sink(k)?;
        if let Some(sigma) = find_labeling(&rerooted, Scope::Full, 0)? {
            assert!(is_harmonious(&rerooted.conjugate(&sigma)?));
            direct = Some((k, sigma));
            break;
        }
    }
    let nonloop = max_harmony_search_capped(t, Scope::Nonloop, Mode::Exact, cap)?;
    let completion = if nonloop.achieved + 1 == n {
        let c = complete_near_harmonious(t, &nonloop)?;
        let via_k = t.swap_sink(c.k)?.conjugate(&c.sigma)?;
        (is_harmonious(&c.labeled) && via_k == c.labeled).then_some(c)
    } else {
        None
    };
    Ok(TheoremOutcome {
        direct,
        nonloop,
        completion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treegen::enumerate_trees;

    fn tree(table: &[usize]) -> TreeFunc {
        TreeFunc::from_table(table.to_vec()).unwrap()
    }

    fn nonloop(t: &TreeFunc) -> LabelSearchResult {
        max_harmony_search_capped(t, Scope::Nonloop, Mode::Exact, 12).unwrap()
    }

    #[test]
    fn completion_examples() {
        let path = tree(&[0, 0, 1]);
        let c = complete_near_harmonious(&path, &nonloop(&path)).unwrap();
        assert_eq!((c.missing, c.x, c.k), (2, 1, 1));
        assert_eq!(c.labeled.table(), &[1, 1, 1]);
        assert!(is_harmonious(&c.labeled));

        let star = TreeFunc::star(5, 0);
        let c = complete_near_harmonious(&star, &nonloop(&star)).unwrap();
        assert_eq!((c.missing, c.x, c.k), (0, 0, 0));
        assert_eq!(c.labeled, star);

        let even = TreeFunc::star(4, 0);
        assert_eq!(
            complete_near_harmonious(&even, &nonloop(&even)),
            Err(Error::EvenModulus(4))
        );
    }

    #[test]
    fn completion_rejects_weak_witnesses() {
        let path = tree(&[0, 0, 1]);
        let full = max_harmony_search_capped(&path, Scope::Full, Mode::Exact, 12).unwrap();
        assert!(matches!(
            complete_near_harmonious(&path, &full),
            Err(Error::Precondition(_))
        ));
        let mut weak = nonloop(&path);
        weak.achieved = 1;
        assert!(matches!(
            complete_near_harmonious(&path, &weak),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn theorem_examples() {
        let out = theorem_check(&tree(&[0, 0, 1])).unwrap();
        let (k, sigma) = out.witness().unwrap();
        assert_eq!(k, 1);
        assert!(sigma.is_identity());
        assert_eq!(out.completion.as_ref().unwrap().k, 1);

        let out = theorem_check(&TreeFunc::star(5, 0)).unwrap();
        assert_eq!(out.witness().unwrap().0, 0);
        assert!(out.witness().unwrap().1.is_identity());
        assert!(out.strategies_agree());

        assert_eq!(theorem_check(&TreeFunc::star(4, 0)), Err(Error::EvenModulus(4)));
        assert!(theorem_check(&tree(&[0])).unwrap().strategies_agree());
    }

    #[test]
    fn every_tree_on_five_vertices_passes() {
        for t in enumerate_trees(5).unwrap() {
            assert!(theorem_check(&t).unwrap().strategies_agree(), "{t}");
        }
    }

    #[test]
    fn completion_always_harmonious_up_to_nine() {
        for n in (1..=9).step_by(2) {
            for t in enumerate_trees(n).unwrap() {
                let w = nonloop(&t);
                assert_eq!(w.achieved, n - 1);
                assert!(is_harmonious(&complete_near_harmonious(&t, &w).unwrap().labeled));
            }
        }
    }
}
